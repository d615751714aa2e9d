//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.
//!
//! A Jacobi rotation in the (p, q) plane annihilates the off-diagonal pair
//! a_pq, a_qp; sweeping all pairs row by row drives the off-diagonal
//! Frobenius norm below 1e-12 of the input scale, typically within ten
//! sweeps at the sizes used here. No external solver is involved.

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, TOL_HERM, TOL_PSD};
use crate::C64;

/// Off-diagonal Frobenius norm at which the iteration stops, relative to
/// the Frobenius norm of the input.
const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

fn offdiag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues in ascending order
/// and a unitary matrix whose columns are the matching eigenvectors, so that
/// h·V = V·diag(λ).
pub fn herm_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    assert!(h.is_square(), "herm_eigen needs a square matrix");
    let n = h.rows();
    let scale = h.frobenius_norm();
    let residual = h.hermiticity_residual();
    if residual > TOL_HERM * scale.max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n);
    if scale == 0.0 || n == 1 {
        let vals = (0..n).map(|i| a[(i, i)].re).collect();
        return Ok((vals, v));
    }

    let thresh = JACOBI_TOL * scale;
    for _sweep in 0..MAX_SWEEPS {
        if offdiag_norm(&a) <= thresh {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let absg = g.norm();
                if absg == 0.0 {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let phase = g / absg;
                let tau = (beta - alpha) / (2.0 * absg);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);

                // A <- R† A R with R = [[c, s], [-s̄, c]] in the (p, q) plane
                for j in 0..n {
                    let ap = a[(p, j)];
                    let aq = a[(q, j)];
                    a[(p, j)] = ap * c - aq * s;
                    a[(q, j)] = ap * s.conj() + aq * c;
                }
                for i in 0..n {
                    let ap = a[(i, p)];
                    let aq = a[(i, q)];
                    a[(i, p)] = ap * c - aq * s.conj();
                    a[(i, q)] = ap * s + aq * c;
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * c - vq * s.conj();
                    v[(i, q)] = vp * s + vq * c;
                }
                // the rotation zeroes the pair exactly; pin it against rounding
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let sorted_v = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((sorted_vals, sorted_v))
}

/// Threshold below which an eigenvalue of a PSD matrix is indistinguishable
/// from an exact zero of a rank-deficient input. Clamping there matters:
/// the square root would otherwise turn eps-level noise into √eps-level
/// eigenvalues.
pub(crate) fn noise_floor(scale: f64) -> f64 {
    32.0 * f64::EPSILON * scale
}

/// Hermitian square root of a PSD matrix. Eigenvalues in [-TOL_PSD, 0) are
/// clamped to zero; anything lower is rejected rather than repaired, since a
/// structurally negative input signals a construction bug upstream.
pub fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, v) = herm_eigen(h)?;
    if vals[0] < -TOL_PSD {
        return Err(Error::NotPsd {
            min_eigenvalue: vals[0],
        });
    }
    let n = h.rows();
    let floor = noise_floor(h.frobenius_norm());
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let r = if vals[k] <= floor { 0.0 } else { vals[k].sqrt() };
        if r == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v[(i, k)] * r;
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj();
            }
        }
    }
    Ok(out)
}
