//! Eigenvalues of the vectorized transfer map.
//!
//! The map x ↦ Σ_j v_j† x v_j on b×b matrices becomes a b²×b² complex matrix
//! under column-major vectorization. Its full spectrum decides whether the
//! chain state is pure (a single unit eigenvalue) and, through the unit
//! eigenvector, yields the invariant state. The matrix is not normal in
//! general, so eigenvalues come from a Hessenberg reduction followed by a
//! single-shift complex QR iteration; the unit eigenvector comes from
//! inverse iteration at shift 1.

use crate::matcore::ComplexMatrix;
use crate::C64;

fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Givens pair (c real, s complex) with [[c, s], [-s̄, c]]·(x, y)ᵀ = (r, 0)ᵀ.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, czero());
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(h: &mut ComplexMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let col_norm: f64 = ((k + 1)..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if col_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let beta = -phase * col_norm;
        // v = x - beta·e1, reflector H = I - 2vv†/‖v‖²
        let mut v: Vec<C64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        v[0] -= beta;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let two_over = 2.0 / vnorm_sqr;

        // rows k+1..n : A <- H A
        for j in k..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)])
                .sum();
            let f = dot * two_over;
            for (i, vi) in v.iter().enumerate() {
                let val = h[(k + 1 + i, j)] - vi * f;
                h[(k + 1 + i, j)] = val;
            }
        }
        // columns k+1..n : A <- A H
        for i in 0..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(j, vj)| h[(i, k + 1 + j)] * vj)
                .sum();
            let f = dot * two_over;
            for (j, vj) in v.iter().enumerate() {
                let val = h[(i, k + 1 + j)] - f * vj.conj();
                h[(i, k + 1 + j)] = val;
            }
        }
        h[(k + 1, k)] = beta;
        for i in (k + 2)..n {
            h[(i, k)] = czero();
        }
    }
}

/// Eigenvalues of the trailing 2x2 block [[a, b], [c, d]].
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let mean = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let sq = disc.sqrt();
    (mean + sq, mean - sq)
}

/// All eigenvalues of a general complex square matrix, unordered.
///
/// Sized for the transfer matrices built in this crate (dimension b²); the
/// iteration carries exceptional shifts and panics only if it fails to
/// deflate within 100n steps, which does not occur for trace-preserving
/// positive maps.
pub(crate) fn complex_eigenvalues(m: &ComplexMatrix) -> Vec<C64> {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return vec![];
    }
    let mut h = m.clone();
    hessenberg(&mut h);

    let mut eigs: Vec<C64> = Vec::with_capacity(n);
    let mut hi = n;
    let eps = f64::EPSILON;
    let mut iters_on_block = 0usize;
    let mut total_iters = 0usize;
    let max_total = 100 * n.max(4);

    while hi > 0 {
        // deflate negligible subdiagonals
        for i in 1..hi {
            let bound = eps * (h[(i - 1, i - 1)].norm() + h[(i, i)].norm());
            if h[(i, i - 1)].norm() <= bound {
                h[(i, i - 1)] = czero();
            }
        }
        // active block is lo..hi, the trailing unreduced chunk
        let mut lo = hi - 1;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }

        if hi - lo == 1 {
            eigs.push(h[(lo, lo)]);
            hi = lo;
            iters_on_block = 0;
            continue;
        }
        if hi - lo == 2 {
            let (l1, l2) = eig2(
                h[(lo, lo)],
                h[(lo, lo + 1)],
                h[(lo + 1, lo)],
                h[(lo + 1, lo + 1)],
            );
            eigs.push(l1);
            eigs.push(l2);
            hi = lo;
            iters_on_block = 0;
            continue;
        }

        total_iters += 1;
        iters_on_block += 1;
        assert!(
            total_iters <= max_total,
            "transfer-spectrum QR iteration did not converge"
        );

        // Wilkinson shift from the trailing 2x2, with an occasional
        // exceptional shift to break symmetry-induced cycles.
        let m1 = hi - 1;
        let mut mu = {
            let (l1, l2) = eig2(
                h[(m1 - 1, m1 - 1)],
                h[(m1 - 1, m1)],
                h[(m1, m1 - 1)],
                h[(m1, m1)],
            );
            let d = h[(m1, m1)];
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        if iters_on_block % 12 == 0 {
            mu = h[(m1, m1)] + C64::new(1.5 * h[(m1, m1 - 1)].norm(), 0.0);
        }

        // explicit single-shift QR step on the active block
        for i in lo..hi {
            let val = h[(i, i)] - mu;
            h[(i, i)] = val;
        }
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo - 1);
        for k in lo..(hi - 1) {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..hi {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            rots.push((c, s));
        }
        for (k, &(c, s)) in rots.iter().enumerate() {
            let k = lo + k;
            for i in lo..=(k + 1).min(hi - 1) {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
        }
        for i in lo..hi {
            let val = h[(i, i)] + mu;
            h[(i, i)] = val;
        }
    }
    eigs
}

/// Solve A x = b by LU with partial pivoting, clamping singular pivots so
/// the factorization can serve as an inverse-iteration step at an exact
/// eigenvalue shift.
struct ClampedLu {
    n: usize,
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl ClampedLu {
    fn new(a: &ComplexMatrix, pivot_floor: f64) -> Self {
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (imax, _) = ((k..n).map(|i| (i, lu[(i, k)].norm())))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if imax != k {
                perm.swap(imax, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(imax, j)];
                    lu[(imax, j)] = tmp;
                }
            }
            if lu[(k, k)].norm() < pivot_floor {
                lu[(k, k)] = C64::new(pivot_floor, 0.0);
            }
            let inv_piv = C64::new(1.0, 0.0) / lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] * inv_piv;
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    let val = lu[(i, j)] - factor * lu[(k, j)];
                    lu[(i, j)] = val;
                }
            }
        }
        ClampedLu { n, lu, perm }
    }

    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut y: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for k in 0..i {
                let f = self.lu[(i, k)] * y[k];
                y[i] -= f;
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let f = self.lu[(i, k)] * y[k];
                y[i] -= f;
            }
            y[i] /= self.lu[(i, i)];
        }
        y
    }
}

/// Eigenvector of `m` for eigenvalue 1, assumed simple, via inverse
/// iteration on (m - I). Returned with unit Euclidean norm.
pub(crate) fn unit_eigenvector(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.rows();
    let mut shifted = m.clone();
    for i in 0..n {
        let val = shifted[(i, i)] - C64::new(1.0, 0.0);
        shifted[(i, i)] = val;
    }
    let scale = m.frobenius_norm().max(1.0);
    let lu = ClampedLu::new(&shifted, f64::EPSILON * scale * n as f64);

    let mut x: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0, 0.3 * (i as f64 + 1.0)))
        .collect();
    normalize(&mut x);
    for _ in 0..4 {
        let mut y = lu.solve(&x);
        normalize(&mut y);
        x = y;
    }
    x
}

fn normalize(v: &mut [C64]) {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}
