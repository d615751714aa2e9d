use fcs_core::families::{make_triple, oracle_concurrence, Family, FamilyParams, OracleKind};
use fcs_core::entanglement::concurrence;
use fcs_core::fcs::SiteSet;
use std::time::Instant;

fn main() {
    let pi = std::f64::consts::PI;

    // ex1: c_ab oracle over 101 phi
    let mut worst = 0.0f64;
    for k in 0..=100 {
        let phi = 2.0*pi*k as f64/100.0;
        let p = FamilyParams::new(Family::Ex1, phi, 0.0).unwrap();
        let t = make_triple(&p).unwrap();
        let c = concurrence(&t.rho_ab().unwrap()).unwrap();
        let o = oracle_concurrence(&p, OracleKind::CAb).unwrap();
        worst = worst.max((c-o).abs());
    }
    println!("ex1 c_ab worst: {worst:.3e}");

    // ex2: both oracles over 11 a x 101 phi (phi offset to dodge the a=1, s=0 corner)
    let mut worst12 = 0.0f64; let mut worstab = 0.0f64; let mut badpts = 0;
    for ia in 0..=10 {
        let a = ia as f64 / 10.0;
        for k in 0..=100 {
            let phi = 2.0*pi*k as f64/100.0;
            let p = FamilyParams::new(Family::Ex2, phi, a).unwrap();
            let t = match make_triple(&p) { Ok(t) => t, Err(_) => { badpts += 1; continue } };
            let c12 = concurrence(&t.local_state(2).unwrap()).unwrap();
            let o12 = oracle_concurrence(&p, OracleKind::C12).unwrap();
            worst12 = worst12.max((c12-o12).abs());
            let cab = concurrence(&t.rho_ab().unwrap()).unwrap();
            let oab = oracle_concurrence(&p, OracleKind::CAb).unwrap();
            worstab = worstab.max((cab-oab).abs());
        }
    }
    println!("ex2 c12 worst: {worst12:.3e}  c_ab worst: {worstab:.3e}  skipped pts: {badpts}");

    // ex2: 2|beta| identity + fourth row/col zero pattern
    let mut worstbeta = 0.0f64; let mut worstzero = 0.0f64;
    for ia in 0..20 {
        let a = ia as f64 / 19.0;
        for k in 0..20 {
            let phi = pi*(2.0*k as f64 + 1.0)/20.0;
            let p = FamilyParams::new(Family::Ex2, phi, a).unwrap();
            let t = make_triple(&p).unwrap();
            let rho12 = t.local_state(2).unwrap();
            let c12 = concurrence(&rho12).unwrap();
            // beta = Tr(v2† v1† rho v2 v1)
            let v = t.kraus();
            let rho = t.stored_invariant().unwrap().mat();
            let beta = v[1].adjoint().matmul(&v[0].adjoint()).matmul(rho)
                .matmul(&v[1]).matmul(&v[0]).trace();
            worstbeta = worstbeta.max((c12 - 2.0*beta.norm()).abs());
            for i in 0..4 {
                worstzero = worstzero.max(rho12.mat()[(3,i)].norm());
                worstzero = worstzero.max(rho12.mat()[(i,3)].norm());
            }
        }
    }
    println!("ex2 |c12 - 2|beta||: {worstbeta:.3e}  fourth row/col max: {worstzero:.3e}");

    // ex3: c_ab oracle over 11 a x 101 phi
    let mut worst3 = 0.0f64;
    for ia in 0..=10 {
        let a = ia as f64 / 10.0;
        for k in 0..=100 {
            let phi = 2.0*pi*k as f64/100.0;
            let p = FamilyParams::new(Family::Ex3, phi, a).unwrap();
            let t = make_triple(&p).unwrap();
            let cab = concurrence(&t.rho_ab().unwrap()).unwrap();
            let oab = oracle_concurrence(&p, OracleKind::CAb).unwrap();
            worst3 = worst3.max((cab-oab).abs());
        }
    }
    println!("ex3 c_ab worst: {worst3:.3e}");

    // ex1 transfer degeneracy scan
    for phi in [0.0, pi/2.0, pi, 1.5*pi, pi/8.0] {
        let p = FamilyParams::new(Family::Ex1, phi, 0.0).unwrap();
        let t = make_triple(&p).unwrap();
        let s = t.transfer_spectrum();
        println!("ex1 phi={phi:.4}: unit mult {} radius {:.6}", s.unit_multiplicity, s.spectral_radius());
    }

    // timing: compatibility n=1..8 for one triple
    let t0 = Instant::now();
    let p = FamilyParams::new(Family::Ex2, 0.7, 0.3).unwrap();
    let t = make_triple(&p).unwrap();
    for n in 1..=8 {
        let (r1, r2) = t.compatibility_check(n).unwrap();
        if n == 8 { println!("compat n=8 residuals: {r1:.3e} {r2:.3e}"); }
    }
    println!("compat n=1..8 one triple: {:?}", t0.elapsed());

    // timing: reduced_state over all subsets of 1..=8 vs brute force
    let t0 = Instant::now();
    let local8 = t.local_state(8).unwrap();
    let mut worstx = 0.0f64;
    for mask in 1u32..256 {
        let sites: Vec<usize> = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| i+1).collect();
        let keep: Vec<usize> = sites.iter().map(|s| s-1).collect();
        let red = t.reduced_state(&SiteSet::new(sites).unwrap()).unwrap();
        let brute = local8.partial_trace(&keep).unwrap();
        worstx = worstx.max(red.mat().frobenius_distance(brute.mat()));
    }
    println!("cross-path worst over 255 subsets: {worstx:.3e} in {:?}", t0.elapsed());

    // maximize timing + results
    use fcs_core::sweep::{maximize, Measure, ParamBound};
    let t0 = Instant::now();
    let base = FamilyParams { family: Family::Ex2, phi: 0.0, a: 0.0 };
    let bounds = [ParamBound{name:"a".into(), lo:0.0, hi:1.0}, ParamBound{name:"phi".into(), lo:0.0, hi:2.0*pi}];
    let r = maximize(Family::Ex2, base, &bounds, Measure::C12, None).unwrap();
    println!("ex2 max c12: value {:.12} at a={:.8} phi={:.8} evals {} conv {} ({:?})",
        r.value, r.params.a, r.params.phi, r.evaluations, r.converged, t0.elapsed());
    let t0 = Instant::now();
    let base = FamilyParams { family: Family::Ex3, phi: 0.0, a: 0.0 };
    let r = maximize(Family::Ex3, base, &bounds, Measure::CAb, None).unwrap();
    println!("ex3 max c_ab: value {:.12} at a={:.8} phi={:.8} evals {} conv {} ({:?})",
        r.value, r.params.a, r.params.phi, r.evaluations, r.converged, t0.elapsed());
    println!("targets: sqrt2-1={:.12} 1/sqrt3={:.8} pi/2={:.8} 1/sqrt2={:.12}",
        2f64.sqrt()-1.0, 1.0/3f64.sqrt(), pi/2.0, 0.5f64.sqrt());
}
