//! Dense complex matrices and Hermitian eigendecomposition.
//!
//! The eigensolver is a cyclic Jacobi iteration on Hermitian input. All
//! matrices in this crate are at most a few dozen rows, so the O(n^3)
//! cost per sweep is negligible and no external linear algebra backend
//! is needed.

use num_complex::Complex;

use crate::{Error, Result};

pub type C64 = Complex<f64>;

/// Relative tolerance for the Hermiticity check.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from a closure over (row, column).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, C64::new(v, 0.0));
        }
        m
    }

    /// Outer product |v⟩⟨v|.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        Self::from_fn(dim, |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] += v;
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.add_at(i, j, a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product A|v⟩.
    pub fn apply_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j).conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |A_ij − conj(A_ji)| over all entries.
    pub fn hermiticity_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_violation() <= HERMITICITY_TOL * self.max_abs().max(1.0)
    }

    /// Reject non-Hermitian input; otherwise return (A + A†)/2 to strip
    /// accumulated round-off.
    pub fn symmetrized(&self) -> Result<Self> {
        let violation = self.hermiticity_violation();
        let tolerance = HERMITICITY_TOL * self.max_abs().max(1.0);
        if violation > tolerance {
            return Err(Error::NotHermitian { violation, tolerance });
        }
        Ok(Self::from_fn(self.dim, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        }))
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }
}

/// Eigendecomposition of a Hermitian matrix. Values are sorted ascending;
/// `vectors` holds the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|i| self.vectors.get(i, k)).collect()
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-14;

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius norm drops below
/// 1e-14 · ‖A‖_F; rejects input that violates the Hermiticity tolerance.
pub fn herm_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let mut m = a.symmetrized()?;
    let n = m.dim();
    let mut v = ComplexMatrix::identity(n);
    let norm = m.frobenius_norm();
    let threshold = JACOBI_REL_TOL * norm;

    let mut sweeps = 0;
    while off_diagonal_norm(&m) > threshold && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                // Skipping negligible pivots keeps the sweep cheap once
                // the matrix is nearly diagonal.
                if apq.norm() <= threshold / (n as f64) {
                    continue;
                }
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
    }
    if off_diagonal_norm(&m) > threshold.max(1e-13 * norm.max(1.0)) {
        return Err(Error::NoConvergence { sweeps, offdiag: off_diagonal_norm(&m) });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v.get(i, order[j]));
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry of the Hermitian
/// working matrix; the same unitary is accumulated into `v`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.dim();
    let apq = m.get(p, q);
    let beta = apq.norm();
    let phase = apq / beta; // e^{iθ}
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;

    let zeta = (aqq - app) / (2.0 * beta);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary U: U e_p = c e_p − s e^{-iθ} e_q,  U e_q = s e^{iθ} e_p + c e_q.
    let sp = phase * s; // s e^{iθ}
    let spc = sp.conj(); // s e^{-iθ}

    // Column update: A ← A U.
    for i in 0..n {
        let u = m.get(i, p);
        let w = m.get(i, q);
        m.set(i, p, u * c - w * spc);
        m.set(i, q, u * sp + w * c);
    }
    // Row update: A ← U† A.
    for j in 0..n {
        let u = m.get(p, j);
        let w = m.get(q, j);
        m.set(p, j, u * c - w * sp);
        m.set(q, j, u * spc + w * c);
    }
    // Clamp the pivot pair against round-off leakage.
    m.set(p, q, C64::new(0.0, 0.0));
    m.set(q, p, C64::new(0.0, 0.0));

    // Eigenvector accumulation: V ← V U.
    for i in 0..n {
        let u = v.get(i, p);
        let w = v.get(i, q);
        v.set(i, p, u * c - w * spc);
        v.set(i, q, u * sp + w * c);
    }
}

/// Spectral truncation to the positive part: Σ_{λ > ε} λ |v⟩⟨v| with
/// ε = 1e-12 · max(1, |λ_max|).
pub fn positive_part(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    let n = a.dim();
    let lambda_max = eig.values.last().copied().unwrap_or(0.0);
    let eps = 1e-12 * lambda_max.abs().max(1.0);
    let mut out = ComplexMatrix::zeros(n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda > eps {
            let v = eig.vector(k);
            for i in 0..n {
                for j in 0..n {
                    out.add_at(i, j, v[i] * v[j].conj() * lambda);
                }
            }
        }
    }
    Ok(out)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(a)?.values[0])
}

/// Kronecker product, dim = dim(A)·dim(B).
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |i, j| {
        a.get(i / db, j / db) * b.get(i % db, j % db)
    })
}

/// Kronecker product of vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Tr[AB] computed without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let n = a.dim();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += a.get(i, j) * b.get(j, i);
        }
    }
    Ok(s)
}

/// ‖v‖₂.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// v / ‖v‖.
pub fn normalized(v: &[C64]) -> Vec<C64> {
    let n = vec_norm(v);
    v.iter().map(|c| c / n).collect()
}

/// Computational basis vector |index⟩ of the given dimension.
pub fn basis_vector(dim: usize, index: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[index] = C64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eig_diagonal() {
        let a = ComplexMatrix::diag(&[3.0, 1.0]);
        let e = herm_eig(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        assert!((e.vectors.get(1, 0).norm() - 1.0).abs() < 1e-12);
        assert!((e.vectors.get(0, 1).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_identity() {
        let e = herm_eig(&ComplexMatrix::identity(4)).unwrap();
        for v in e.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eig_pauli_x() {
        let a = ComplexMatrix::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let e = herm_eig(&a).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let v = e.vector(0);
        // (1, -1)/√2 up to phase
        assert!((v[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((v[0] + v[1]).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = ComplexMatrix::zeros(2);
        a.set(0, 1, c(1.0, 0.0));
        assert!(matches!(herm_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn positive_part_diagonal() {
        let a = ComplexMatrix::diag(&[1.0, -2.0]);
        let p = positive_part(&a).unwrap();
        assert!(p.max_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn positive_part_of_psd_is_identity_op() {
        let a = ComplexMatrix::diag(&[0.5, 0.25, 0.25]);
        let p = positive_part(&a).unwrap();
        assert!(p.max_diff(&a) < 1e-10);
    }

    #[test]
    fn positive_part_pauli_x() {
        let a = ComplexMatrix::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let p = positive_part(&a).unwrap();
        let expect = ComplexMatrix::from_fn(2, |_, _| c(0.5, 0.0));
        assert!(p.max_diff(&expect) < 1e-12);
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert!((min_eigenvalue(&ComplexMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-14);
        let a = ComplexMatrix::diag(&[5.0, -3.0, 0.0]);
        assert!((min_eigenvalue(&a).unwrap() + 3.0).abs() < 1e-14);
    }

    #[test]
    fn kron_identities() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert!(k.max_diff(&ComplexMatrix::identity(6)) < 1e-15);
        let k = kron(&ComplexMatrix::diag(&[1.0, 0.0]), &ComplexMatrix::diag(&[0.0, 1.0]));
        assert!(k.max_diff(&ComplexMatrix::diag(&[0.0, 1.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn kron_flip_maps_00_to_11() {
        let x = ComplexMatrix::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let xx = kron(&x, &x);
        let v00 = basis_vector(4, 0);
        let out = xx.apply_vec(&v00).unwrap();
        assert!((out[3] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(vec_norm(&out[..3]) < 1e-15);
    }

    #[test]
    fn trace_product_examples() {
        let n = 5;
        let id = ComplexMatrix::identity(n);
        assert!((trace_product(&id, &id).unwrap().re - n as f64).abs() < 1e-14);
        let p0 = ComplexMatrix::outer(&basis_vector(2, 0));
        let p1 = ComplexMatrix::outer(&basis_vector(2, 1));
        assert!(trace_product(&p0, &p1).unwrap().norm() < 1e-15);
    }

    #[test]
    fn trace_product_dim_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(trace_product(&a, &b).is_err());
    }
}
