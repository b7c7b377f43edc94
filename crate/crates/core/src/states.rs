//! State families: GHZ states, flipped-GHZ vectors, the PPT-invariant
//! three-qutrit family ρ(λ), noisy and two-parameter mixtures, and random
//! biseparable states for property testing.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hermitian::{herm_eig, C64, ComplexMatrix};
use crate::maps::haar_random_pure;
use crate::multipartite::{Bipartition, SpaceShape};
use crate::{Error, Result};

/// (1/√d) Σ_{x<d} |x⟩^{⊗n}.
pub fn ghz(n: usize, d: usize) -> Result<Vec<C64>> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidParameter(format!("ghz needs n ≥ 2 and d ≥ 2, got ({n}, {d})")));
    }
    let total = d.pow(n as u32);
    let mut v = vec![C64::new(0.0, 0.0); total];
    let amp = 1.0 / (d as f64).sqrt();
    for x in 0..d {
        // |x⟩^{⊗n} has flat index x·(d^{n−1} + … + 1)
        let mut idx = 0;
        for _ in 0..n {
            idx = idx * d + x;
        }
        v[idx] = C64::new(amp, 0.0);
    }
    Ok(v)
}

/// Unnormalized flipped-GHZ vector: apply the x↔y flip on the parties in
/// `alpha` to √λ|x⟩^{⊗n} + √(1/λ)|y⟩^{⊗n}. Squared norm is λ + 1/λ.
pub fn flipped_ghz(
    alpha: &[usize],
    x: usize,
    y: usize,
    lambda: f64,
    n: usize,
    d: usize,
) -> Result<Vec<C64>> {
    if alpha.is_empty() {
        return Err(Error::InvalidParameter("flip set must be nonempty".into()));
    }
    if x == y || x >= d || y >= d {
        return Err(Error::InvalidParameter(format!(
            "levels must be distinct and below d = {d}, got ({x}, {y})"
        )));
    }
    if alpha.iter().any(|&k| k >= n) {
        return Err(Error::InvalidParties(format!("flip set {alpha:?} out of range for n = {n}")));
    }
    if lambda <= 0.0 {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let shape = SpaceShape::uniform(n, d)?;
    let mut v = vec![C64::new(0.0, 0.0); shape.total_dim()];

    // The flip sends |x⟩→|y⟩ on every party in alpha and vice versa, so the
    // two basis terms land on mixed strings.
    let mut first = vec![x; n];
    let mut second = vec![y; n];
    for &k in alpha {
        first[k] = y;
        second[k] = x;
    }
    v[shape.multi_to_flat(&first)] = C64::new(lambda.sqrt(), 0.0);
    v[shape.multi_to_flat(&second)] = C64::new((1.0 / lambda).sqrt(), 0.0);
    Ok(v)
}

// Oriented so that the √λ weight rides on the string whose flipped level
// is one step below cyclically; this orientation is what makes the family
// detectable by the Choi map (the mirror orientation is local-unitarily
// equivalent under a global level relabeling but pairs with the dual map).
const QUTRIT_LEVEL_PAIRS: [(usize, usize); 3] = [(1, 0), (2, 1), (0, 2)];

/// The unnormalized operator E(λ) = 3|GHZ₃⟩⟨GHZ₃| + Σ over the nine
/// flipped-GHZ outer products (3 parties × 3 level pairs), with a common
/// λ. Trace is 3 + 9(λ + 1/λ).
pub fn e_operator(lambda: f64) -> Result<ComplexMatrix> {
    if lambda <= 0.0 {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let ghz3 = ghz(3, 3)?;
    let mut e = ComplexMatrix::outer(&ghz3).scale_re(3.0);
    for party in 0..3 {
        for &(x, y) in &QUTRIT_LEVEL_PAIRS {
            let v = flipped_ghz(&[party], x, y, lambda, 3, 3)?;
            e = e.add(&ComplexMatrix::outer(&v))?;
        }
    }
    Ok(e)
}

/// The normalized family ρ(λ) = E(λ)/Tr E(λ) on three qutrits.
pub fn rho_lambda(lambda: f64) -> Result<ComplexMatrix> {
    let e = e_operator(lambda)?;
    let tr = e.trace().re;
    Ok(e.scale_re(1.0 / tr))
}

/// Convex mixture p·𝟙/dim + (1−p)·ρ.
pub fn add_white_noise(rho: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("noise weight must be in [0,1], got {p}")));
    }
    let dim = rho.dim();
    let mixed = ComplexMatrix::identity(dim).scale_re(p / dim as f64);
    rho.scale_re(1.0 - p).add(&mixed)
}

/// Two-parameter mixture p·|GHZ₃⟩⟨GHZ₃| + q·ρ(1/9) + (1−p−q)/27·𝟙.
pub fn two_param_family(p: f64, q: f64) -> Result<ComplexMatrix> {
    if p < 0.0 || q < 0.0 || p + q > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "(p, q) must satisfy p, q ≥ 0 and p + q ≤ 1, got ({p}, {q})"
        )));
    }
    let ghz3 = ComplexMatrix::outer(&ghz(3, 3)?);
    let bound = rho_lambda(1.0 / 9.0)?;
    let mixed = ComplexMatrix::identity(27).scale_re((1.0 - p - q) / 27.0);
    ghz3.scale_re(p).add(&bound.scale_re(q))?.add(&mixed)
}

/// One random mixture of pure product states across the given partitions.
#[derive(Debug, Clone)]
pub struct BiseparableSample {
    /// Weight of each partition in the mixture.
    pub partition_weights: Vec<f64>,
    /// Weights of the product terms within each partition.
    pub term_weights: Vec<Vec<f64>>,
    /// The assembled density matrix.
    pub rho: ComplexMatrix,
}

/// Haar-random product pure states per partition with Dirichlet-uniform
/// weights; deterministic for a fixed seed.
pub fn random_biseparable(
    shape: &SpaceShape,
    partitions: &[Bipartition],
    terms_per_partition: usize,
    rng_seed: u64,
) -> Result<BiseparableSample> {
    if partitions.is_empty() {
        return Err(Error::InvalidParameter("need at least one partition".into()));
    }
    let terms = terms_per_partition.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);

    let partition_weights = dirichlet_uniform(partitions.len(), &mut rng);
    let mut term_weights = Vec::with_capacity(partitions.len());
    let total = shape.total_dim();
    let mut rho = ComplexMatrix::zeros(total);

    for (b, part) in partitions.iter().enumerate() {
        let weights = dirichlet_uniform(terms, &mut rng);
        for &w in &weights {
            let v = random_product_vector(shape, part, &mut rng);
            let coeff = partition_weights[b] * w;
            for i in 0..total {
                for j in 0..total {
                    rho.add_at(i, j, v[i] * v[j].conj() * coeff);
                }
            }
        }
        term_weights.push(weights);
    }
    Ok(BiseparableSample { partition_weights, term_weights, rho })
}

/// |φ⟩_inside ⊗ |φ'⟩_outside assembled in the full party order.
fn random_product_vector(
    shape: &SpaceShape,
    part: &Bipartition,
    rng: &mut impl Rng,
) -> Vec<C64> {
    let d_in = shape.subset_dim(part.inside());
    let d_out = shape.subset_dim(part.outside());
    let phi_in = haar_random_pure(d_in, rng);
    let phi_out = haar_random_pure(d_out, rng);

    let in_shape: Vec<usize> = part.inside().iter().map(|&k| shape.dims()[k]).collect();
    let out_shape: Vec<usize> = part.outside().iter().map(|&k| shape.dims()[k]).collect();
    let total = shape.total_dim();
    (0..total)
        .map(|flat| {
            let multi = shape.flat_to_multi(flat);
            let mut idx_in = 0;
            for (pos, &k) in part.inside().iter().enumerate() {
                idx_in = idx_in * in_shape[pos] + multi[k];
            }
            let mut idx_out = 0;
            for (pos, &k) in part.outside().iter().enumerate() {
                idx_out = idx_out * out_shape[pos] + multi[k];
            }
            phi_in[idx_in] * phi_out[idx_out]
        })
        .collect()
}

fn dirichlet_uniform(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    // Flat Dirichlet via normalized exponentials.
    let raw: Vec<f64> = (0..k).map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|x| x / sum).collect()
}

/// Checks unit trace and positive semidefiniteness of a would-be density
/// matrix; returns (trace, min eigenvalue) diagnostics on failure.
pub fn check_state(rho: &ComplexMatrix) -> Result<()> {
    let sym = rho.symmetrized()?;
    let trace = sym.trace().re;
    let min_eig = herm_eig(&sym)?.values[0];
    if (trace - 1.0).abs() > 1e-10 || min_eig < -1e-10 {
        return Err(Error::NotAState { trace, min_eigenvalue: min_eig });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::vec_norm;
    use crate::multipartite::enumerate_bipartitions;

    #[test]
    fn ghz_qubits_and_qutrits() {
        let g = ghz(3, 2).unwrap();
        let amp = 1.0 / 2f64.sqrt();
        assert!((g[0].re - amp).abs() < 1e-15);
        assert!((g[7].re - amp).abs() < 1e-15);
        assert!(g.iter().enumerate().filter(|(i, _)| *i != 0 && *i != 7).all(|(_, z)| z.norm() == 0.0));

        let g3 = ghz(3, 3).unwrap();
        let amp3 = 1.0 / 3f64.sqrt();
        for idx in [0usize, 13, 26] {
            assert!((g3[idx].re - amp3).abs() < 1e-15);
        }
        for n in 2..=4 {
            for d in 2..=4 {
                assert!((vec_norm(&ghz(n, d).unwrap()) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn flipped_ghz_literal_example() {
        // α={0}, (x,y)=(0,1): √λ|100⟩ + √(1/λ)|011⟩
        let lambda = 0.37;
        let v = flipped_ghz(&[0], 0, 1, lambda, 3, 3).unwrap();
        let shape = SpaceShape::uniform(3, 3).unwrap();
        let i100 = shape.multi_to_flat(&[1, 0, 0]);
        let i011 = shape.multi_to_flat(&[0, 1, 1]);
        assert!((v[i100].re - lambda.sqrt()).abs() < 1e-15);
        assert!((v[i011].re - (1.0 / lambda).sqrt()).abs() < 1e-15);
        let norm_sq = vec_norm(&v).powi(2);
        assert!((norm_sq - (lambda + 1.0 / lambda)).abs() < 1e-12);
    }

    #[test]
    fn flipped_ghz_norm_at_ninth() {
        let v = flipped_ghz(&[1], 0, 2, 1.0 / 9.0, 3, 3).unwrap();
        assert!((vec_norm(&v).powi(2) - 82.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn flipped_ghz_rejects_bad_levels() {
        assert!(flipped_ghz(&[0], 1, 1, 0.5, 3, 3).is_err());
        assert!(flipped_ghz(&[0], 0, 3, 0.5, 3, 3).is_err());
        assert!(flipped_ghz(&[], 0, 1, 0.5, 3, 3).is_err());
    }

    #[test]
    fn e_operator_trace() {
        let e = e_operator(1.0 / 9.0).unwrap();
        assert!((e.trace().re - 85.0).abs() < 1e-10);
        for lambda in [0.1, 0.5, 1.0] {
            let e = e_operator(lambda).unwrap();
            assert!(herm_eig(&e).unwrap().values[0] > -1e-10);
        }
    }

    #[test]
    fn e_operator_cyclic_symmetry() {
        let shape = SpaceShape::uniform(3, 3).unwrap();
        let e = e_operator(0.3).unwrap();
        let cycled = crate::multipartite::permute_parties(&e, &shape, &[1, 2, 0]).unwrap();
        assert!(cycled.max_diff(&e) < 1e-12);
    }

    #[test]
    fn rho_lambda_is_a_state() {
        for lambda in [1.0 / 9.0, 1.0 / 3.0, 0.5] {
            let rho = rho_lambda(lambda).unwrap();
            assert!((rho.trace().re - 1.0).abs() < 1e-13);
            check_state(&rho).unwrap();
        }
    }

    #[test]
    fn rho_lambda_ppt_invariant() {
        let shape = SpaceShape::uniform(3, 3).unwrap();
        for k in 1..=9 {
            let rho = rho_lambda(k as f64 / 10.0).unwrap();
            for part in enumerate_bipartitions(&shape).unwrap() {
                let pt = crate::multipartite::partial_transpose(&rho, &shape, part.inside()).unwrap();
                assert!(pt.max_diff(&rho) < 1e-13, "λ = {}, cut {}", k as f64 / 10.0, part.label());
            }
        }
    }

    #[test]
    fn flipped_vectors_orthogonal() {
        let lambda = 0.21;
        let ghz3 = ghz(3, 3).unwrap();
        let mut vectors = vec![ghz3];
        for party in 0..3 {
            for &(x, y) in &QUTRIT_LEVEL_PAIRS {
                vectors.push(flipped_ghz(&[party], x, y, lambda, 3, 3).unwrap());
            }
        }
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate() {
                if i == j {
                    continue;
                }
                let overlap: C64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
                assert!(overlap.norm() < 1e-12, "vectors {i} and {j} overlap");
            }
        }
    }

    #[test]
    fn white_noise_endpoints() {
        let rho = rho_lambda(0.5).unwrap();
        assert!(add_white_noise(&rho, 0.0).unwrap().max_diff(&rho) < 1e-15);
        let mixed = ComplexMatrix::identity(27).scale_re(1.0 / 27.0);
        assert!(add_white_noise(&rho, 1.0).unwrap().max_diff(&mixed) < 1e-15);
        assert!(add_white_noise(&rho, 1.5).is_err());
    }

    #[test]
    fn two_param_corners() {
        let ghz3 = ComplexMatrix::outer(&ghz(3, 3).unwrap());
        assert!(two_param_family(1.0, 0.0).unwrap().max_diff(&ghz3) < 1e-14);
        let mixed = ComplexMatrix::identity(27).scale_re(1.0 / 27.0);
        assert!(two_param_family(0.0, 0.0).unwrap().max_diff(&mixed) < 1e-14);
        let bound = rho_lambda(1.0 / 9.0).unwrap();
        assert!(two_param_family(0.0, 1.0).unwrap().max_diff(&bound) < 1e-14);
        assert!(two_param_family(0.7, 0.7).is_err());
    }

    #[test]
    fn biseparable_samples_are_states() {
        let shape = SpaceShape::uniform(3, 3).unwrap();
        let parts = enumerate_bipartitions(&shape).unwrap();
        for seed in 0..20 {
            let sample = random_biseparable(&shape, &parts, 4, seed).unwrap();
            assert!((sample.rho.trace().re - 1.0).abs() < 1e-12);
            assert!(herm_eig(&sample.rho).unwrap().values[0] > -1e-12);
        }
        // single partition, single term: pure product state
        let one = random_biseparable(&shape, &parts[..1], 1, 99).unwrap();
        let eig = herm_eig(&one.rho).unwrap();
        assert!((eig.values[26] - 1.0).abs() < 1e-12);
        assert!(eig.values[25].abs() < 1e-12);
    }

    #[test]
    fn biseparable_deterministic_in_seed() {
        let shape = SpaceShape::uniform(3, 3).unwrap();
        let parts = enumerate_bipartitions(&shape).unwrap();
        let a = random_biseparable(&shape, &parts, 3, 42).unwrap();
        let b = random_biseparable(&shape, &parts, 3, 42).unwrap();
        assert!(a.rho.max_diff(&b.rho) == 0.0);
    }
}
