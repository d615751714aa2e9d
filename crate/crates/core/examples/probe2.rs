use fcs_core::families::{make_triple, Family, FamilyParams};
use fcs_core::entanglement::{eof_two_qubit, von_neumann_entropy};
use fcs_core::matcore::{herm_eigen, ComplexMatrix, DensityMatrix};
use fcs_core::C64;

// Simple xorshift-based normal sampler (deterministic, test-only style probe)
struct Rng(u64);
impl Rng {
    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13; x ^= x >> 7; x ^= x << 17;
        self.0 = x; x
    }
    fn uniform(&mut self) -> f64 { (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 }
    fn normal(&mut self) -> f64 {
        let u1 = self.uniform().max(1e-300);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
    fn cnormal(&mut self) -> C64 { C64::new(self.normal(), self.normal()) }
}

// Gram-Schmidt on columns of an m x r complex matrix
fn gs_columns(mut cols: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    for k in 0..cols.len() {
        for j in 0..k {
            let dot: C64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a.conj() * b).sum();
            for i in 0..cols[k].len() {
                let val = cols[k][i] - dot * cols[j][i];
                cols[k][i] = val;
            }
        }
        let norm: f64 = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[k].iter_mut() { *z /= norm; }
    }
    cols
}

fn avg_entropy_of_decomposition(sub: &[Vec<C64>], u_cols: &[Vec<C64>]) -> f64 {
    // members |psi_k> = sum_i U[k][i] |x_i>, k = 0..m, built from U columns? use rows
    let r = sub.len();
    let m = u_cols[0].len();
    let mut total = 0.0;
    for k in 0..m {
        let mut psi = vec![C64::new(0.0, 0.0); 4];
        for i in 0..r {
            let coef = u_cols[i][k]; // U has orthonormal columns; rows index members
            for t in 0..4 { psi[t] += coef * sub[i][t]; }
        }
        let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if p < 1e-14 { continue; }
        let rho = DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap();
        let marg = rho.partial_trace(&[0]).unwrap();
        total += p * von_neumann_entropy(&marg).unwrap();
    }
    total
}

fn main() {
    // the ex2 optimum rho12, concurrence sqrt(2)-1
    let s2m1 = std::f64::consts::SQRT_2 - 1.0;
    let phi = 0.5 * s2m1.acos();
    let p = FamilyParams::new(Family::Ex2, phi, s2m1).unwrap();
    let t = make_triple(&p).unwrap();
    let rho = t.local_state(2).unwrap();
    let eof = eof_two_qubit(&rho).unwrap();
    println!("closed-form eof = {eof:.12}");

    // subnormalized eigenvector basis
    let (vals, vecs) = herm_eigen(rho.mat()).unwrap();
    let mut sub: Vec<Vec<C64>> = vec![];
    for i in 0..4 {
        if vals[i] > 1e-12 {
            let col: Vec<C64> = (0..4).map(|r| vecs[(r, i)] * vals[i].sqrt()).collect();
            sub.push(col);
        }
    }
    println!("rank = {}", sub.len());
    let r = sub.len();

    let mut rng = Rng(0x9E3779B97F4A7C15);
    let mut best = f64::INFINITY;
    for trial in 0..1000 {
        let m = r + (trial % 3); // decomposition sizes r, r+1, r+2
        let cols: Vec<Vec<C64>> = (0..r).map(|_| (0..m).map(|_| rng.cnormal()).collect()).collect();
        let u = gs_columns(cols);
        let e = avg_entropy_of_decomposition(&sub, &u);
        if e < best { best = e; }
    }
    println!("best of 1000 random: {best:.12}  excess {:.3e}", best - eof);

    // shrinking random refinement from the best
    let mut rng = Rng(0xDEADBEEF12345678);
    let mut best_u: Option<Vec<Vec<C64>>> = None;
    let mut best2 = f64::INFINITY;
    for trial in 0..1000 {
        let m = r + (trial % 3);
        let cols: Vec<Vec<C64>> = (0..r).map(|_| (0..m).map(|_| rng.cnormal()).collect()).collect();
        let u = gs_columns(cols);
        let e = avg_entropy_of_decomposition(&sub, &u);
        if e < best2 { best2 = e; best_u = Some(u); }
    }
    let mut u = best_u.unwrap();
    let mut sigma = 0.3;
    for _ in 0..400 {
        let m = u[0].len();
        let cand: Vec<Vec<C64>> = u.iter().map(|col| col.iter().map(|z| z + rng.cnormal() * C64::new(sigma, 0.0)).collect()).collect();
        let candu = gs_columns(cand);
        let e = avg_entropy_of_decomposition(&sub, &candu);
        if e < best2 { best2 = e; u = candu; } else { sigma *= 0.99; }
        let _ = m;
    }
    println!("after refinement: {best2:.12}  excess {:.3e}", best2 - eof);
}
