//! Party bookkeeping for multipartite operators: local dimensions,
//! bipartition enumeration, index permutation, partial transposition and
//! partial application of a superoperator.
//!
//! Multi-index convention: party 0 is the most significant digit of the
//! flat index, matching ket strings |x₀x₁x₂⟩ read left to right.

use crate::hermitian::{C64, ComplexMatrix};
use crate::maps::Superoperator;
use crate::{Error, Result};

/// Ordered list of local dimensions, one per party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceShape {
    dims: Vec<usize>,
}

impl SpaceShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidParameter("shape needs at least one party".into()));
        }
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidParameter("every local dimension must be at least 2".into()));
        }
        Ok(Self { dims })
    }

    /// n parties of equal local dimension d.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Product of the local dimensions of the given parties.
    pub fn subset_dim(&self, parties: &[usize]) -> usize {
        parties.iter().map(|&k| self.dims[k]).product()
    }

    /// Flat index → per-party digits (party 0 most significant).
    pub fn flat_to_multi(&self, flat: usize) -> Vec<usize> {
        let mut rem = flat;
        let mut multi = vec![0usize; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            multi[k] = rem % self.dims[k];
            rem /= self.dims[k];
        }
        multi
    }

    pub fn multi_to_flat(&self, multi: &[usize]) -> usize {
        let mut flat = 0;
        for (k, &d) in self.dims.iter().enumerate() {
            flat = flat * d + multi[k];
        }
        flat
    }

    /// Shape after reordering parties: new position k holds old party perm[k].
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n_parties())?;
        Ok(Self { dims: perm.iter().map(|&k| self.dims[k]).collect() })
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        let n = self.n_parties();
        let mut seen = vec![false; n];
        for &k in subset {
            if k >= n || seen[k] {
                return Err(Error::InvalidParties(format!(
                    "party {k} out of range or repeated (n = {n})"
                )));
            }
            seen[k] = true;
        }
        Ok(())
    }
}

/// Canonical split of the parties into `inside` (always containing party 0)
/// and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    inside: Vec<usize>,
    outside: Vec<usize>,
}

impl Bipartition {
    /// Builds the canonical bipartition whose inside set contains party 0.
    /// A set not containing party 0 is replaced by its complement.
    pub fn new(set: &[usize], n_parties: usize) -> Result<Self> {
        if n_parties < 2 {
            return Err(Error::InvalidParties("need at least two parties".into()));
        }
        let mut member = vec![false; n_parties];
        for &k in set {
            if k >= n_parties {
                return Err(Error::InvalidParties(format!("party {k} out of range")));
            }
            member[k] = true;
        }
        if !member[0] {
            for m in member.iter_mut() {
                *m = !*m;
            }
        }
        let inside: Vec<usize> = (0..n_parties).filter(|&k| member[k]).collect();
        let outside: Vec<usize> = (0..n_parties).filter(|&k| !member[k]).collect();
        if outside.is_empty() {
            return Err(Error::InvalidParties("bipartition sides must both be nonempty".into()));
        }
        Ok(Self { inside, outside })
    }

    pub fn inside(&self) -> &[usize] {
        &self.inside
    }

    pub fn outside(&self) -> &[usize] {
        &self.outside
    }

    /// Bitmask of the inside set; fixes the enumeration order.
    pub fn inside_mask(&self) -> usize {
        self.inside.iter().map(|&k| 1usize << k).sum()
    }

    /// Short b|b̄ label, e.g. "0|12".
    pub fn label(&self) -> String {
        let side = |s: &[usize]| s.iter().map(|k| k.to_string()).collect::<String>();
        format!("{}|{}", side(&self.inside), side(&self.outside))
    }
}

/// All 2^{n−1} − 1 canonical bipartitions, sorted by inside-set bitmask.
pub fn enumerate_bipartitions(shape: &SpaceShape) -> Result<Vec<Bipartition>> {
    let n = shape.n_parties();
    if n < 2 {
        return Err(Error::InvalidParties("bipartitions need at least two parties".into()));
    }
    let full = (1usize << n) - 1;
    let mut out = Vec::new();
    for mask in 1..full {
        if mask & 1 == 0 {
            continue;
        }
        let inside: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
        out.push(Bipartition::new(&inside, n)?);
    }
    Ok(out)
}

/// Relabels the tensor factors: output party k is input party perm[k],
/// on both row and column indices.
pub fn permute_parties(
    rho: &ComplexMatrix,
    shape: &SpaceShape,
    perm: &[usize],
) -> Result<ComplexMatrix> {
    check_matrix_shape(rho, shape)?;
    check_permutation(perm, shape.n_parties())?;
    let new_shape = shape.permuted(perm)?;
    let total = shape.total_dim();

    // index map: new flat index -> old flat index
    let mut to_old = vec![0usize; total];
    for (flat, slot) in to_old.iter_mut().enumerate() {
        let multi_new = new_shape.flat_to_multi(flat);
        let mut multi_old = vec![0usize; perm.len()];
        for (k, &src) in perm.iter().enumerate() {
            multi_old[src] = multi_new[k];
        }
        *slot = shape.multi_to_flat(&multi_old);
    }
    Ok(ComplexMatrix::from_fn(total, |i, j| rho.get(to_old[i], to_old[j])))
}

/// Transposes the indices of the parties in `subset`; an involution that
/// preserves trace and Hermiticity.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    shape: &SpaceShape,
    subset: &[usize],
) -> Result<ComplexMatrix> {
    check_matrix_shape(rho, shape)?;
    shape.check_subset(subset)?;
    let total = shape.total_dim();
    let mut out = ComplexMatrix::zeros(total);
    for i in 0..total {
        let mi = shape.flat_to_multi(i);
        for j in 0..total {
            let mj = shape.flat_to_multi(j);
            let mut ri = mi.clone();
            let mut rj = mj.clone();
            for &k in subset {
                ri[k] = mj[k];
                rj[k] = mi[k];
            }
            out.set(shape.multi_to_flat(&ri), shape.multi_to_flat(&rj), rho.get(i, j));
        }
    }
    Ok(out)
}

/// Realizes (Λ_subset ⊗ id)[ρ]: the subset parties are permuted to the
/// front, each block indexed by complement indices is transformed by the
/// superoperator, and the factors are permuted back.
pub fn apply_map_partial(
    map: &Superoperator,
    rho: &ComplexMatrix,
    shape: &SpaceShape,
    subset: &[usize],
) -> Result<ComplexMatrix> {
    check_matrix_shape(rho, shape)?;
    shape.check_subset(subset)?;
    let d_in = shape.subset_dim(subset);
    if map.dim() != d_in {
        return Err(Error::DimensionMismatch { expected: d_in, got: map.dim() });
    }

    let n = shape.n_parties();
    let mut sorted_subset = subset.to_vec();
    sorted_subset.sort_unstable();
    let complement: Vec<usize> = (0..n).filter(|k| !sorted_subset.contains(k)).collect();
    let perm: Vec<usize> = sorted_subset.iter().chain(complement.iter()).copied().collect();

    let front = permute_parties(rho, shape, &perm)?;
    let front_shape = shape.permuted(&perm)?;
    let d_out = shape.total_dim() / d_in;

    // Basis images Λ(E_ab), a,b < d_in.
    let images = map.basis_images();
    let total = shape.total_dim();
    let mut result = ComplexMatrix::zeros(total);
    for a in 0..d_in {
        for b in 0..d_in {
            let img = &images[a * d_in + b];
            for k in 0..d_in {
                for l in 0..d_in {
                    let coeff = img.get(k, l);
                    if coeff == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for x in 0..d_out {
                        for y in 0..d_out {
                            let v = front.get(a * d_out + x, b * d_out + y);
                            result.add_at(k * d_out + x, l * d_out + y, coeff * v);
                        }
                    }
                }
            }
        }
    }

    // Undo the reordering.
    let mut inv = vec![0usize; n];
    for (k, &src) in perm.iter().enumerate() {
        inv[src] = k;
    }
    permute_parties(&result, &front_shape, &inv)
}

fn check_matrix_shape(rho: &ComplexMatrix, shape: &SpaceShape) -> Result<()> {
    if rho.dim() != shape.total_dim() {
        return Err(Error::DimensionMismatch { expected: shape.total_dim(), got: rho.dim() });
    }
    Ok(())
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidParties(format!("permutation length {} != {n}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &k in perm {
        if k >= n || seen[k] {
            return Err(Error::InvalidParties(format!("not a permutation: {perm:?}")));
        }
        seen[k] = true;
    }
    Ok(())
}
