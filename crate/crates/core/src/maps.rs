//! Positive (not completely positive) maps in superoperator form.
//!
//! A map Λ on d×d operators is stored as the d²×d² matrix whose column
//! i·d+j is the vectorization of Λ(E_ij), E_ij = |i⟩⟨j|. Vectorization
//! stacks columns: vec(M) carries entry M_kl at position l·d+k. With
//! this pairing the Hilbert–Schmidt dual is the plain transpose of the
//! superoperator matrix, which the pairing-identity tests pin down.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hermitian::{min_eigenvalue, normalized, C64, ComplexMatrix};
use crate::{Error, Result};

/// Matrix representation of a linear map on d×d operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    d: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    /// Builds the superoperator from the map's action on the matrix units.
    pub fn from_action(d: usize, mut action: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let mut matrix = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut unit = ComplexMatrix::zeros(d);
                unit.set(i, j, C64::new(1.0, 0.0));
                let image = action(&unit);
                for k in 0..d {
                    for l in 0..d {
                        matrix.set(l * d + k, i * d + j, image.get(k, l));
                    }
                }
            }
        }
        Self { d, matrix }
    }

    /// Local operator dimension d (the map acts on d×d matrices).
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Λ(A).
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: a.dim() });
        }
        let d = self.d;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let v = a.get(i, j);
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..d {
                    for l in 0..d {
                        out.add_at(k, l, self.matrix.get(l * d + k, i * d + j) * v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// All basis images Λ(E_ij) in order i·d+j.
    pub fn basis_images(&self) -> Vec<ComplexMatrix> {
        let d = self.d;
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(ComplexMatrix::from_fn(d, |k, l| {
                    self.matrix.get(l * d + k, i * d + j)
                }));
            }
        }
        out
    }

    /// Adjoint under the trace pairing: Tr[Λ(A)B] = Tr[A Λ*(B)] for all A, B.
    ///
    /// In the basis convention above, Λ*(E_kl)[i][j] = Λ(E_ji)[l][k], which
    /// is the transpose of the superoperator matrix.
    pub fn dual(&self) -> Self {
        Self { d: self.d, matrix: self.matrix.transpose() }
    }
}

/// Λ(A) = A: the identity map.
pub fn identity_map(d: usize) -> Superoperator {
    Superoperator::from_action(d, |a| a.clone())
}

/// Λ(A) = Aᵀ.
pub fn transpose_map(d: usize) -> Superoperator {
    Superoperator::from_action(d, |a| a.transpose())
}

/// Λ(A) = Tr(A)·𝟙 − A.
pub fn reduction_map(d: usize) -> Superoperator {
    Superoperator::from_action(d, |a| {
        ComplexMatrix::identity(d).scale(a.trace()).sub(a).unwrap()
    })
}

/// The qutrit Choi map with the ½ normalization:
/// diagonal (a₀₀+a₂₂, a₁₁+a₀₀, a₂₂+a₁₁)/2 and off-diagonals −a_ij/2.
pub fn choi_map() -> Superoperator {
    Superoperator::from_action(3, |a| {
        ComplexMatrix::from_fn(3, |k, l| {
            if k == l {
                (a.get(k, k) + a.get((k + 2) % 3, (k + 2) % 3)) * 0.5
            } else {
                -a.get(k, l) * 0.5
            }
        })
    })
}

/// Generalized Choi family on qutrits, unnormalized:
/// Λ(A)_ii = a·a_ii + b·a_{i+1,i+1} + c·a_{i+2,i+2} (mod 3), off-diagonals −a_ij.
///
/// Positivity of the resulting map is not guaranteed by construction; run
/// [`positivity_probe`] before using it in a witness.
pub fn generalized_choi(a: f64, b: f64, c: f64) -> Result<Superoperator> {
    if a < 0.0 || b < 0.0 || c < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "generalized Choi parameters must be nonnegative, got ({a}, {b}, {c})"
        )));
    }
    Ok(Superoperator::from_action(3, move |m| {
        ComplexMatrix::from_fn(3, |k, l| {
            if k == l {
                m.get(k, k) * a + m.get((k + 1) % 3, (k + 1) % 3) * b
                    + m.get((k + 2) % 3, (k + 2) % 3) * c
            } else {
                -m.get(k, l)
            }
        })
    }))
}

/// Breuer–Hall map Λ(A) = Tr(A)·𝟙 − A − U Aᵀ U† for an antisymmetric
/// unitary U on even dimension d.
pub fn breuer_hall_map(d: usize, u: &ComplexMatrix) -> Result<Superoperator> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::InvalidParameter(format!("Breuer–Hall needs even d ≥ 2, got {d}")));
    }
    if u.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: u.dim() });
    }
    let unitarity = u.adjoint().matmul(u)?.max_diff(&ComplexMatrix::identity(d));
    if unitarity > 1e-12 {
        return Err(Error::InvalidParameter(format!("U is not unitary (deviation {unitarity:.3e})")));
    }
    let antisym = u.transpose().max_diff(&u.scale_re(-1.0));
    if antisym > 1e-12 {
        return Err(Error::InvalidParameter(format!("U is not antisymmetric (deviation {antisym:.3e})")));
    }
    let u = u.clone();
    Ok(Superoperator::from_action(d, move |a| {
        let base = ComplexMatrix::identity(d).scale(a.trace()).sub(a).unwrap();
        let twisted = u.matmul(&a.transpose()).unwrap().matmul(&u.adjoint()).unwrap();
        base.sub(&twisted).unwrap()
    }))
}

/// Block-diagonal embedding of [[0,1],[−1,0]]: the canonical antisymmetric
/// unitary for even d.
pub fn canonical_antisymmetric_unitary(d: usize) -> Result<ComplexMatrix> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::InvalidParameter(format!("need even d ≥ 2, got {d}")));
    }
    let mut u = ComplexMatrix::zeros(d);
    for b in 0..d / 2 {
        u.set(2 * b, 2 * b + 1, C64::new(1.0, 0.0));
        u.set(2 * b + 1, 2 * b, C64::new(-1.0, 0.0));
    }
    Ok(u)
}

/// Haar-random pure state of the given dimension.
pub fn haar_random_pure(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..dim)
        .map(|_| C64::new(gaussian(rng), gaussian(rng)))
        .collect();
    normalized(&v)
}

// Box–Muller; avoids pulling in a distributions crate for one sampler.
fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Minimum over sampled Haar-random pure states |φ⟩ of the smallest
/// eigenvalue of Λ(|φ⟩⟨φ|). A markedly negative return certifies the map
/// is not positive; a non-negative return is evidence only.
pub fn positivity_probe(map: &Superoperator, samples: usize, rng_seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut worst = f64::INFINITY;
    for _ in 0..samples.max(1) {
        let phi = haar_random_pure(map.dim(), &mut rng);
        let image = map.apply(&ComplexMatrix::outer(&phi))?;
        worst = worst.min(min_eigenvalue(&image.symmetrized()?)?);
    }
    Ok(worst)
}

/// Parsed description of a built-in map, as accepted on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Identity,
    Transpose,
    Reduction,
    Choi3,
    GeneralizedChoi { a: f64, b: f64, c: f64 },
    BreuerHall { d: usize },
}

impl MapSpec {
    /// Instantiates the map for local dimension d; maps with a fixed
    /// dimension reject a mismatching d.
    pub fn build(&self, d: usize) -> Result<Superoperator> {
        match *self {
            MapSpec::Identity => Ok(identity_map(d)),
            MapSpec::Transpose => Ok(transpose_map(d)),
            MapSpec::Reduction => Ok(reduction_map(d)),
            MapSpec::Choi3 => {
                if d != 3 {
                    return Err(Error::DimensionMismatch { expected: 3, got: d });
                }
                Ok(choi_map())
            }
            MapSpec::GeneralizedChoi { a, b, c } => {
                if d != 3 {
                    return Err(Error::DimensionMismatch { expected: 3, got: d });
                }
                generalized_choi(a, b, c)
            }
            MapSpec::BreuerHall { d: bh } => {
                if d != bh {
                    return Err(Error::DimensionMismatch { expected: bh, got: d });
                }
                breuer_hall_map(bh, &canonical_antisymmetric_unitary(bh)?)
            }
        }
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameter(msg);
        match s {
            "identity" => return Ok(MapSpec::Identity),
            "transpose" => return Ok(MapSpec::Transpose),
            "reduction" => return Ok(MapSpec::Reduction),
            "choi3" => return Ok(MapSpec::Choi3),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("gchoi:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(bad(format!("gchoi wants three parameters a,b,c, got `{rest}`")));
            }
            let mut vals = [0.0f64; 3];
            for (slot, p) in vals.iter_mut().zip(&parts) {
                *slot = p
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("bad gchoi parameter `{p}`")))?;
            }
            return Ok(MapSpec::GeneralizedChoi { a: vals[0], b: vals[1], c: vals[2] });
        }
        if let Some(rest) = s.strip_prefix("breuer-hall:") {
            let d: usize = rest
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad breuer-hall dimension `{rest}`")))?;
            return Ok(MapSpec::BreuerHall { d });
        }
        Err(bad(format!(
            "unknown map `{s}` (expected transpose, reduction, choi3, gchoi:a,b,c, breuer-hall:d or identity)"
        )))
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Identity => write!(f, "identity"),
            MapSpec::Transpose => write!(f, "transpose"),
            MapSpec::Reduction => write!(f, "reduction"),
            MapSpec::Choi3 => write!(f, "choi3"),
            MapSpec::GeneralizedChoi { a, b, c } => write!(f, "gchoi:{a},{b},{c}"),
            MapSpec::BreuerHall { d } => write!(f, "breuer-hall:{d}"),
        }
    }
}
