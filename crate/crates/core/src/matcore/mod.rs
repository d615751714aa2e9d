//! Dense complex linear algebra for small square matrices.
//!
//! Everything here is sized for desk-scale work (total dimension at most
//! [`MAX_DENSE_DIM`]): row-major storage, straightforward O(n³) products, a
//! cyclic Jacobi eigensolver for Hermitian matrices, and the tensor-factor
//! operations (Kronecker product, partial trace, partial transpose) needed to
//! manipulate multi-site density matrices. Site 1 of a chain is always the
//! leftmost, most significant tensor factor.

mod eigen;

pub(crate) use eigen::noise_floor;
pub use eigen::{herm_eigen, sqrt_psd};

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::C64;

/// Relative Frobenius bound below which a matrix counts as Hermitian.
pub const TOL_HERM: f64 = 1e-9;
/// Absolute bound on |trace - 1| for density matrices.
pub const TOL_TRACE: f64 = 1e-9;
/// Eigenvalues in [-TOL_PSD, 0) are treated as rounding noise and clamped.
pub const TOL_PSD: f64 = 1e-10;
/// Largest total dimension handled by the dense representation.
pub const MAX_DENSE_DIM: usize = 1024;

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows of complex entries. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Build a real matrix from nested rows of f64.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ComplexMatrix {
            rows: r,
            cols: c,
            data: rows
                .iter()
                .flat_map(|row| row.iter().map(|&x| C64::new(x, 0.0)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of A - A†.
    pub fn hermiticity_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol * self.frobenius_norm().max(1.0)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; the left factor is the most significant index block.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let z = a[(ia, ja)];
            if z.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out[(ia * b.rows + ib, ja * b.cols + jb)] = z * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Row-major strides of a multi-index with the given factor dimensions.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Hermitian, unit-trace matrix tagged with a tensor-factor split of its
/// index space. Positivity is checked where eigenvalues are actually read;
/// rounding-level negatives (above -[`TOL_PSD`]) are clamped there.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || !mat.is_square() || mat.rows() != total {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} with factor dims {1:?}", total, dims),
                got: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        if total > MAX_DENSE_DIM {
            return Err(Error::TooLarge {
                size: total,
                cap: MAX_DENSE_DIM,
            });
        }
        if !mat.all_finite() {
            return Err(Error::BadParams("non-finite matrix entry".into()));
        }
        let herm = mat.hermiticity_residual();
        if herm > TOL_HERM * mat.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian { residual: herm });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL_TRACE || tr.im.abs() > TOL_TRACE {
            return Err(Error::BadTrace { trace: tr.re });
        }
        Ok(DensityMatrix { mat, dims })
    }

    /// Density matrix |ψ⟩⟨ψ| of a normalized pure state.
    pub fn from_pure(amplitudes: &[C64], dims: Vec<usize>) -> Result<Self> {
        let n = amplitudes.len();
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::BadParams("zero state vector".into()));
        }
        let mat = ComplexMatrix::from_fn(n, n, |i, j| {
            amplitudes[i] * amplitudes[j].conj() / norm_sqr
        });
        Self::new(mat, dims)
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Eigenvalues in ascending order, with rounding-level negatives clamped
    /// to zero. Fails with `NotPSD` if any eigenvalue sits below -TOL_PSD.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (vals, _) = herm_eigen(&self.mat)?;
        if vals[0] < -TOL_PSD {
            return Err(Error::NotPsd {
                min_eigenvalue: vals[0],
            });
        }
        Ok(vals.into_iter().map(|v| v.max(0.0)).collect())
    }

    /// Smallest eigenvalue, unclamped.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = herm_eigen(&self.mat)?;
        Ok(vals[0])
    }

    /// Reduce to the listed tensor factors (0-based, strictly increasing),
    /// tracing the rest out. Kept factors stay in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let nf = self.dims.len();
        if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadIndex {
                index: keep.first().copied().unwrap_or(0),
                len: nf,
            });
        }
        if let Some(&bad) = keep.iter().find(|&&k| k >= nf) {
            return Err(Error::BadIndex { index: bad, len: nf });
        }
        let traced: Vec<usize> = (0..nf).filter(|i| !keep.contains(i)).collect();
        let st = strides(&self.dims);
        let kdims: Vec<usize> = keep.iter().map(|&i| self.dims[i]).collect();
        let tdims: Vec<usize> = traced.iter().map(|&i| self.dims[i]).collect();
        let kdim: usize = kdims.iter().product();
        let tdim: usize = tdims.iter().product();

        // Flat offsets contributed by each kept / traced multi-index.
        let offsets = |sub: &[usize], subdims: &[usize], count: usize| -> Vec<usize> {
            let mut out = vec![0usize; count];
            for (flat, slot) in out.iter_mut().enumerate() {
                let mut rem = flat;
                for k in (0..sub.len()).rev() {
                    *slot += (rem % subdims[k]) * st[sub[k]];
                    rem /= subdims[k];
                }
            }
            out
        };
        let koff = offsets(keep, &kdims, kdim);
        let toff = offsets(&traced, &tdims, tdim);

        let mut out = ComplexMatrix::zeros(kdim, kdim);
        for (kr, &ro) in koff.iter().enumerate() {
            for (kc, &co) in koff.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &to in &toff {
                    acc += self.mat[(ro + to, co + to)];
                }
                out[(kr, kc)] = acc;
            }
        }
        DensityMatrix::new(out, kdims)
    }

    /// Transpose one tensor factor in place (0-based index). The result is
    /// Hermitian and unit trace but in general no longer positive, so it is
    /// returned as a plain matrix.
    pub fn partial_transpose(&self, factor: usize) -> Result<ComplexMatrix> {
        let nf = self.dims.len();
        if factor >= nf {
            return Err(Error::BadIndex {
                index: factor,
                len: nf,
            });
        }
        let st = strides(&self.dims);
        let d = self.dims[factor];
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for row in 0..n {
            let rf = (row / st[factor]) % d;
            let rbase = row - rf * st[factor];
            for col in 0..n {
                let cf = (col / st[factor]) % d;
                let cbase = col - cf * st[factor];
                // swap the factor's row and column digits
                out[(rbase + cf * st[factor], cbase + rf * st[factor])] = self.mat[(row, col)];
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    fn bell() -> DensityMatrix {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(
            &[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)],
            vec![2, 2],
        )
        .unwrap()
    }

    #[test]
    fn kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_diagonal() {
        let zz = kron(&sigma_z(), &sigma_z());
        let expect = ComplexMatrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
            &[0.0, 0.0, -1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(zz, expect);
    }

    #[test]
    fn kron_mixed_product_rule() {
        // (a ⊗ b)(c ⊗ d) = ac ⊗ bd
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.5), c(0.0, -1.0)],
            vec![c(2.0, 0.0), c(0.3, 0.3)],
        ]);
        let b = ComplexMatrix::from_rows(&[
            vec![c(0.0, 1.0), c(1.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.5, 0.5)],
        ]);
        let lhs = kron(&a, &b).matmul(&kron(&b, &a));
        let rhs = kron(&a.matmul(&b), &b.matmul(&a));
        assert!(lhs.frobenius_distance(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_bell_marginal() {
        let rho = bell();
        let m = rho.partial_trace(&[0]).unwrap();
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(m.mat().frobenius_distance(&half) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let rho = bell();
        assert!(matches!(
            rho.partial_trace(&[2]),
            Err(Error::BadIndex { .. })
        ));
        assert!(matches!(
            rho.partial_trace(&[]),
            Err(Error::BadIndex { .. })
        ));
    }

    #[test]
    fn partial_transpose_bell_min_eigenvalue() {
        let rho = bell();
        let pt = rho.partial_transpose(1).unwrap();
        let (vals, _) = herm_eigen(&pt).unwrap();
        assert!((vals[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_product_state_stays_psd() {
        // separable ⇒ PPT
        let a = DensityMatrix::from_pure(&[c(0.6, 0.0), c(0.0, 0.8)], vec![2]).unwrap();
        let b = DensityMatrix::from_pure(&[c(0.8, 0.0), c(0.6, 0.0)], vec![2]).unwrap();
        let prod = DensityMatrix::new(kron(a.mat(), b.mat()), vec![2, 2]).unwrap();
        let pt = prod.partial_transpose(1).unwrap();
        let (vals, _) = herm_eigen(&pt).unwrap();
        assert!(vals[0] >= -1e-12);
        // ρ_A ⊗ ρ_Bᵀ entrywise
        let expect = kron(a.mat(), &b.mat().transpose());
        assert!(pt.frobenius_distance(&expect) < 1e-12);
    }

    #[test]
    fn double_partial_transpose_is_identity() {
        let rho = bell();
        let pt = rho.partial_transpose(0).unwrap();
        let ptdm = DensityMatrix::new(pt, vec![2, 2]).unwrap();
        let back = ptdm.partial_transpose(0).unwrap();
        assert_eq!(&back, rho.mat());
    }

    #[test]
    fn density_matrix_rejects_bad_trace_and_non_hermitian() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(m, vec![2]),
            Err(Error::BadTrace { .. })
        ));
        let mut m = ComplexMatrix::identity(2).scale_re(0.5);
        m[(0, 1)] = c(0.3, 0.0);
        assert!(matches!(
            DensityMatrix::new(m, vec![2]),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn partial_trace_composes() {
        // tracing factor 1 then the second remaining factor equals
        // tracing factors {1, 2} at once
        let g = ComplexMatrix::from_fn(8, 8, |i, j| {
            c(((i * 13 + j * 7) % 11) as f64 - 5.0, ((i + 3 * j) % 7) as f64 - 3.0)
        });
        let h = g.matmul(&g.adjoint());
        let rho = DensityMatrix::new(
            h.scale(C64::new(1.0, 0.0) / h.trace()),
            vec![2, 2, 2],
        )
        .unwrap();
        let a = rho
            .partial_trace(&[0, 2])
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        let b = rho.partial_trace(&[0]).unwrap();
        assert!(a.mat().frobenius_distance(b.mat()) < 1e-12);
    }
}
