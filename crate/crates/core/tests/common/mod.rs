//! Shared fixtures and independent oracles for the integration suites.
//!
//! Everything here deliberately avoids the library's own solvers where it is
//! used to check them: eigenvalue oracles go through the characteristic
//! polynomial and Durand-Kerner root finding, and the entanglement-of-
//! formation bound comes from brute-force convex-roof sampling.

#![allow(dead_code)]

use fcs_core::fcs::KrausTriple;
use fcs_core::matcore::{herm_eigen, ComplexMatrix, DensityMatrix};
use fcs_core::C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; plenty for test fixtures
    let u1: f64 = rng.gen_range(1e-300..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn cnormal(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(normal(rng), normal(rng))
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| cnormal(rng))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, n, n);
    (&g + &g.adjoint()).scale_re(0.5)
}

/// Full-rank random density matrix (normalized Wishart).
pub fn random_density(rng: &mut ChaCha8Rng, dims: Vec<usize>) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = random_complex_matrix(rng, n, n);
    let h = g.matmul(&g.adjoint());
    let tr = h.trace().re;
    DensityMatrix::new(h.scale_re(1.0 / tr), dims).unwrap()
}

pub fn random_pure_two_qubit(rng: &mut ChaCha8Rng) -> ([C64; 4], DensityMatrix) {
    let mut amps = [C64::new(0.0, 0.0); 4];
    loop {
        for a in amps.iter_mut() {
            *a = cnormal(rng);
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            for a in amps.iter_mut() {
                *a /= norm;
            }
            break;
        }
    }
    let rho = DensityMatrix::from_pure(&amps, vec![2, 2]).unwrap();
    (amps, rho)
}

/// Orthonormalize the columns of an m-row matrix given as column vectors.
pub fn gram_schmidt_columns(mut cols: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    for k in 0..cols.len() {
        for _pass in 0..2 {
            for j in 0..k {
                let dot: C64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a.conj() * b).sum();
                for i in 0..cols[k].len() {
                    let val = cols[k][i] - dot * cols[j][i];
                    cols[k][i] = val;
                }
            }
        }
        let norm: f64 = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-12, "degenerate draw in Gram-Schmidt");
        for z in cols[k].iter_mut() {
            *z /= norm;
        }
    }
    cols
}

/// Haar-ish random unitary via Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let cols: Vec<Vec<C64>> = (0..n)
        .map(|_| (0..n).map(|_| cnormal(rng)).collect())
        .collect();
    let q = gram_schmidt_columns(cols);
    ComplexMatrix::from_fn(n, n, |i, j| q[j][i])
}

/// Random unital Kraus pair of bond dimension b: the b×2b block row
/// [v₁ v₂] is taken with orthonormal rows, so v₁v₁† + v₂v₂† = 1 exactly
/// up to rounding.
pub fn random_unital_pair(rng: &mut ChaCha8Rng, b: usize) -> KrausTriple {
    let cols: Vec<Vec<C64>> = (0..b)
        .map(|_| (0..2 * b).map(|_| cnormal(rng)).collect())
        .collect();
    let q = gram_schmidt_columns(cols); // b orthonormal columns of length 2b
    let v1 = ComplexMatrix::from_fn(b, b, |i, j| q[i][j].conj());
    let v2 = ComplexMatrix::from_fn(b, b, |i, j| q[i][b + j].conj());
    KrausTriple::new([v1, v2], None).unwrap()
}

// ---------------------------------------------------------------------------
// characteristic-polynomial eigenvalue oracle
// ---------------------------------------------------------------------------

/// Monic characteristic polynomial coefficients by Faddeev-LeVerrier:
/// p(λ) = λⁿ + c[0]·λⁿ⁻¹ + ... + c[n-1].
pub fn charpoly(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.rows();
    let mut coeffs = Vec::with_capacity(n);
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = -mk.trace() / C64::new(k as f64, 0.0);
        coeffs.push(ck);
        if k < n {
            let mut shifted = mk.clone();
            for i in 0..n {
                let val = shifted[(i, i)] + ck;
                shifted[(i, i)] = val;
            }
            mk = m.matmul(&shifted);
        }
    }
    coeffs
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    let eval = |z: C64| -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for c in coeffs {
            acc = acc * z + c;
        }
        acc
    };
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..600 {
        let old = roots.clone();
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= old[i] - old[j];
                }
            }
            roots[i] = old[i] - eval(old[i]) / denom;
        }
    }
    roots
}

/// Eigenvalues of a general complex matrix through the characteristic
/// polynomial; independent of the library's QR and Jacobi solvers.
pub fn eig_oracle(m: &ComplexMatrix) -> Vec<C64> {
    poly_roots(&charpoly(m))
}

// ---------------------------------------------------------------------------
// closed-form matrices of the example families
// ---------------------------------------------------------------------------

/// The three 2×2 blocks of the first family's three-site state.
pub fn ex1_omegas(phi: f64) -> [ComplexMatrix; 4] {
    let (s, c) = phi.sin_cos();
    let (c2, s2) = (c * c, s * s);
    let o11 = ComplexMatrix::from_real(&[&[c2, 2.0 * c2 * s2], &[2.0 * c2 * s2, s2]]);
    let o22 = ComplexMatrix::from_real(&[&[s2, 2.0 * c2 * s2], &[2.0 * c2 * s2, c2]]);
    let o12 = ComplexMatrix::from_real(&[&[c * s, 2.0 * c2 * c * s], &[2.0 * c * s * s2, c * s]]);
    let o21 = o12.adjoint();
    [o11, o12, o21, o22]
}

/// First family, state of three adjacent sites:
/// ½ Σ_ij Ω_ij ⊗ |φ_i⟩⟨φ_j| ⊗ Ω_ij.
pub fn ex1_three_site(phi: f64) -> ComplexMatrix {
    let om = ex1_omegas(phi);
    let pick = |i: usize, j: usize| -> &ComplexMatrix { &om[2 * i + j] }; // [i][j]
    ComplexMatrix::from_fn(8, 8, |row, col| {
        let (s1, s2, s3) = (row >> 2 & 1, row >> 1 & 1, row & 1);
        let (t1, t2, t3) = (col >> 2 & 1, col >> 1 & 1, col & 1);
        let o = pick(s2, t2);
        o[(s1, t1)] * o[(s3, t3)] * 0.5
    })
}

/// First family, one-site-with-rest state (4×4).
pub fn ex1_rho_ab(phi: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    let (c2, s2, cs) = (c * c, s * s, c * s);
    ComplexMatrix::from_real(&[
        &[c2, cs, 2.0 * c2 * s2, 2.0 * c2 * cs],
        &[cs, s2, 2.0 * cs * s2, 2.0 * c2 * s2],
        &[2.0 * c2 * s2, 2.0 * cs * s2, s2, cs],
        &[2.0 * c2 * cs, 2.0 * c2 * s2, cs, c2],
    ])
    .scale_re(0.5)
}

/// First family, nearest-neighbour state (4×4).
pub fn ex1_rho_12(phi: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    let (c2, s2) = (c * c, s * s);
    let a = 2.0 * c2 * s2;
    let b4 = 4.0 * c2 * c2 * s2; // 4c⁴s²
    let d4 = 4.0 * c2 * s2 * s2; // 4c²s⁴
    ComplexMatrix::from_real(&[
        &[c2, a, a, b4],
        &[a, s2, d4, a],
        &[a, d4, s2, a],
        &[b4, a, a, c2],
    ])
    .scale_re(0.5)
}

/// First family, single-site state.
pub fn ex1_rho_1(phi: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    let x = 4.0 * c * c * s * s;
    ComplexMatrix::from_real(&[&[1.0, x], &[x, 1.0]]).scale_re(0.5)
}

/// Second family, invariant state on the auxiliary algebra.
pub fn ex2_rho(phi: f64, a: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    let denom = (1.0 - a) * (1.0 - a) * c * c + 2.0 * s * s;
    let x = s * s / denom;
    let y = (a - 1.0) * s * c / denom;
    ComplexMatrix::from_real(&[&[x, y], &[y, 1.0 - x]])
}

/// Third family, one-site-with-rest state (4×4).
pub fn ex3_rho_ab(phi: f64, a: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    let w = (1.0 - a * a).sqrt();
    let norm = 1.0 + a * a;
    ComplexMatrix::from_real(&[
        &[a * a, 0.0, a * c * w, 0.0],
        &[0.0, a * a, a * s * w, 0.0],
        &[a * c * w, a * s * w, 1.0 - a * a, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
    ])
    .scale_re(1.0 / norm)
}

// ---------------------------------------------------------------------------
// convex-roof entanglement-of-formation bound
// ---------------------------------------------------------------------------

fn decomposition_entropy(sub: &[Vec<C64>], u_cols: &[Vec<C64>]) -> f64 {
    let r = sub.len();
    let members = u_cols[0].len();
    let mut total = 0.0;
    for k in 0..members {
        let mut psi = vec![C64::new(0.0, 0.0); 4];
        for i in 0..r {
            let coef = u_cols[i][k];
            for t in 0..4 {
                psi[t] += coef * sub[i][t];
            }
        }
        let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if p < 1e-14 {
            continue;
        }
        let pure = DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap();
        let marginal = pure.partial_trace(&[0]).unwrap();
        total += p * fcs_core::entanglement::von_neumann_entropy(&marginal).unwrap();
    }
    total
}

/// Upper bound on the entanglement of formation by brute-force sampling of
/// convex decompositions ρ = Σ_k |ψ_k⟩⟨ψ_k|: `draws` random isometries
/// followed by a shrinking random walk around the best one (random draws
/// alone plateau around 1e-2 above the infimum).
pub fn eof_upper_bound(rho: &DensityMatrix, draws: usize, rng: &mut ChaCha8Rng) -> f64 {
    let (vals, vecs) = herm_eigen(rho.mat()).unwrap();
    let mut sub: Vec<Vec<C64>> = Vec::new();
    for i in 0..rho.dim() {
        if vals[i] > 1e-12 {
            sub.push((0..4).map(|r| vecs[(r, i)] * vals[i].sqrt()).collect());
        }
    }
    let r = sub.len();
    let mut best = f64::INFINITY;
    let mut best_u: Option<Vec<Vec<C64>>> = None;
    for trial in 0..draws {
        let members = r + (trial % 3);
        let cols: Vec<Vec<C64>> = (0..r)
            .map(|_| (0..members).map(|_| cnormal(rng)).collect())
            .collect();
        let u = gram_schmidt_columns(cols);
        let e = decomposition_entropy(&sub, &u);
        if e < best {
            best = e;
            best_u = Some(u);
        }
    }
    let mut u = best_u.expect("at least one draw");
    let mut sigma = 0.3;
    for _ in 0..600 {
        let cand: Vec<Vec<C64>> = u
            .iter()
            .map(|col| {
                col.iter()
                    .map(|z| z + cnormal(rng) * C64::new(sigma, 0.0))
                    .collect()
            })
            .collect();
        let cand = gram_schmidt_columns(cand);
        let e = decomposition_entropy(&sub, &cand);
        if e < best {
            best = e;
            u = cand;
        } else {
            sigma *= 0.99;
        }
    }
    best
}
