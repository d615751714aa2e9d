//! Numerical tolerances shared by validation and fixed-point solving.

use serde::Serialize;

/// Tolerances attached to a Kraus triple. All are Frobenius-norm bounds
/// except `tol_psd`, which acts on individual eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound on the unitality and translation-invariance residuals.
    pub tol_cond: f64,
    /// Window |λ - 1| within which a transfer eigenvalue counts as unit.
    pub tol_fix: f64,
    /// Eigenvalues in [-tol_psd, 0) are clamped to zero when read;
    /// anything below -tol_psd is rejected.
    pub tol_psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_cond: 1e-9,
            tol_fix: 1e-9,
            tol_psd: 1e-10,
        }
    }
}
