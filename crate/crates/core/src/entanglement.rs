//! Two-qubit and qubit-block entanglement measures.
//!
//! The Wootters concurrence of a two-qubit state ρ is
//! max{0, λ₁ − λ₂ − λ₃ − λ₄}, the λᵢ being the decreasingly ordered square
//! roots of the eigenvalues of ρρ̃ with ρ̃ = (σy⊗σy) ρ* (σy⊗σy). Here the λᵢ
//! are read off the Hermitian matrix √ρ·ρ̃·√ρ, which shares the spectrum of
//! ρρ̃ but keeps every eigenproblem Hermitian. Entanglement of formation is
//! the closed two-qubit function of concurrence; the partial-transpose test
//! and negativity handle cuts where one side is larger than a qubit, where a
//! "separable" verdict is never issued since PPT is only necessary there.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{herm_eigen, sqrt_psd, ComplexMatrix, DensityMatrix, TOL_PSD};
use crate::tolerances::Tolerances;

/// Named measure values with the parameters and tolerances they were
/// computed under.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub entries: BTreeMap<String, f64>,
    pub params: BTreeMap<String, f64>,
    pub tolerances: Tolerances,
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::BadDims {
            expected: "two-qubit (2x2 factor)".into(),
            got: rho.dims().to_vec(),
        });
    }
    Ok(())
}

/// σy ⊗ σy in the computational basis; real antidiagonal (−1, 1, 1, −1).
fn flip_operator() -> ComplexMatrix {
    ComplexMatrix::from_real(&[
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[-1.0, 0.0, 0.0, 0.0],
    ])
}

/// Spin-flipped state ρ̃ = (σy⊗σy)·ρ*·(σy⊗σy), conjugation taken in the
/// fixed computational basis.
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    require_two_qubits(rho)?;
    let f = flip_operator();
    Ok(f.matmul(&rho.mat().conj()).matmul(&f))
}

/// Wootters concurrence of a two-qubit state, in [0, 1].
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let root = sqrt_psd(rho.mat())?;
    let m = root.matmul(&spin_flip(rho)?).matmul(&root);
    // same spectrum as ρρ̃, symmetrized against rounding
    let m = (&m + &m.adjoint()).scale_re(0.5);
    let (vals, _) = herm_eigen(&m)?;
    if vals[0] < -TOL_PSD {
        return Err(Error::NotPsd {
            min_eigenvalue: vals[0],
        });
    }
    // rank-deficient ρρ̃ is the rule here, so eigenvalue noise must be
    // clamped before the square root amplifies it
    let floor = crate::matcore::noise_floor(m.frobenius_norm());
    let mut lambdas: Vec<f64> = vals
        .iter()
        .map(|&v| if v <= floor { 0.0 } else { v.sqrt() })
        .collect();
    lambdas.reverse();
    let c = lambdas[0] - lambdas[1..].iter().sum::<f64>();
    Ok(c.max(0.0).min(1.0))
}

fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * x.log2()) - (1.0 - x) * (1.0 - x).log2()
}

/// Entanglement of formation of a two-qubit state: the binary entropy of
/// (1 + √(1−C²))/2 in bits, monotone in the concurrence C.
pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?;
    Ok(eof_from_concurrence(c))
}

/// The closed two-qubit form evaluated directly at a concurrence value.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let x = (1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0;
    binary_entropy(x)
}

/// Smallest eigenvalue of the partial transpose over the given factor.
/// A negative value certifies entanglement across that cut.
pub fn min_pt_eigenvalue(rho: &DensityMatrix, factor: usize) -> Result<f64> {
    let pt = rho.partial_transpose(factor)?;
    let (vals, _) = herm_eigen(&pt)?;
    Ok(vals[0])
}

/// Negativity across the given factor: the absolute sum of the negative
/// partial-transpose eigenvalues, equal to (‖ρ^T‖₁ − 1)/2.
pub fn negativity(rho: &DensityMatrix, factor: usize) -> Result<f64> {
    let pt = rho.partial_transpose(factor)?;
    let (vals, _) = herm_eigen(&pt)?;
    Ok(vals.iter().filter(|&&v| v < 0.0).map(|v| -v).sum())
}

/// Separability verdict for two qubits, where the partial-transpose
/// criterion is exact: true iff the partial transpose stays positive.
pub fn two_qubit_separable(rho: &DensityMatrix) -> Result<bool> {
    require_two_qubits(rho)?;
    Ok(min_pt_eigenvalue(rho, 1)? >= -TOL_PSD)
}

/// Von Neumann entropy −Σ λ log₂ λ, with 0·log 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = rho.eigenvalues()?;
    Ok(vals
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.log2())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bell() -> DensityMatrix {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(
            &[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)],
            vec![2, 2],
        )
        .unwrap()
    }

    fn maximally_mixed() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::identity(4).scale_re(0.25), vec![2, 2]).unwrap()
    }

    #[test]
    fn spin_flip_fixed_points_and_swap() {
        let b = bell();
        assert!(spin_flip(&b).unwrap().frobenius_distance(b.mat()) < 1e-14);

        let mm = maximally_mixed();
        assert!(spin_flip(&mm).unwrap().frobenius_distance(mm.mat()) < 1e-14);

        let zero = DensityMatrix::from_pure(
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![2, 2],
        )
        .unwrap();
        let ones = DensityMatrix::from_pure(
            &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![2, 2],
        )
        .unwrap();
        assert!(spin_flip(&zero).unwrap().frobenius_distance(ones.mat()) < 1e-14);
    }

    #[test]
    fn bell_state_measures() {
        let b = bell();
        assert!((concurrence(&b).unwrap() - 1.0).abs() < 1e-10);
        assert!((eof_two_qubit(&b).unwrap() - 1.0).abs() < 1e-10);
        assert!((negativity(&b, 1).unwrap() - 0.5).abs() < 1e-10);
        assert!((min_pt_eigenvalue(&b, 1).unwrap() + 0.5).abs() < 1e-10);
        let marginal = b.partial_trace(&[0]).unwrap();
        assert!((von_neumann_entropy(&marginal).unwrap() - 1.0).abs() < 1e-12);
        assert!(!two_qubit_separable(&b).unwrap());
    }

    #[test]
    fn product_state_measures() {
        let psi = [c(0.6, 0.0), c(0.0, 0.0), c(0.8, 0.0), c(0.0, 0.0)];
        let rho = DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap();
        assert!(concurrence(&rho).unwrap() < 1e-12);
        assert!(eof_two_qubit(&rho).unwrap() < 1e-10);
        assert!(negativity(&rho, 1).unwrap() < 1e-12);
        assert!(two_qubit_separable(&rho).unwrap());
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn maximally_mixed_is_separable() {
        let mm = maximally_mixed();
        assert!(two_qubit_separable(&mm).unwrap());
        assert!(concurrence(&mm).unwrap() < 1e-12);
        assert!((von_neumann_entropy(&mm).unwrap() - 2.0).abs() < 1e-12);
        let single = DensityMatrix::new(
            ComplexMatrix::identity(2).scale_re(0.5),
            vec![2],
        )
        .unwrap();
        assert!((von_neumann_entropy(&single).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eof_endpoints() {
        assert!(eof_from_concurrence(0.0).abs() < 1e-15);
        assert!((eof_from_concurrence(1.0) - 1.0).abs() < 1e-15);
        // monotone on a grid
        let mut prev = -1.0;
        for k in 0..=100 {
            let e = eof_from_concurrence(k as f64 / 100.0);
            assert!(e >= prev - 1e-12);
            prev = e;
        }
    }

    #[test]
    fn rejects_wrong_dims() {
        let single = DensityMatrix::new(
            ComplexMatrix::identity(2).scale_re(0.5),
            vec![2],
        )
        .unwrap();
        assert!(matches!(concurrence(&single), Err(Error::BadDims { .. })));
        assert!(matches!(spin_flip(&single), Err(Error::BadDims { .. })));
        assert!(matches!(
            two_qubit_separable(&single),
            Err(Error::BadDims { .. })
        ));
    }

    #[test]
    fn separable_mixture_is_ppt() {
        // Σ p_i ρ_i ⊗ σ_i stays positive under partial transposition
        let a1 = DensityMatrix::from_pure(&[c(0.8, 0.0), c(0.6, 0.0)], vec![2]).unwrap();
        let b1 = DensityMatrix::from_pure(&[c(0.0, 1.0), c(0.6, 0.8)], vec![2]).unwrap();
        let a2 = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)], vec![2]).unwrap();
        let b2 = DensityMatrix::from_pure(&[c(0.6, 0.0), c(0.0, 0.8)], vec![2]).unwrap();
        let mix = &crate::matcore::kron(a1.mat(), b1.mat()).scale_re(0.4)
            + &crate::matcore::kron(a2.mat(), b2.mat()).scale_re(0.6);
        let rho = DensityMatrix::new(mix, vec![2, 2]).unwrap();
        assert!(min_pt_eigenvalue(&rho, 1).unwrap() >= -1e-12);
        assert!(two_qubit_separable(&rho).unwrap());
    }
}
