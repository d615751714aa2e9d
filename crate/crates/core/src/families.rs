//! Built-in parametric Kraus pairs with closed-form invariant states.
//!
//! Three two-parameter families (φ an angle, a in [0, 1]; the first family
//! ignores a) cover the qualitative range of behaviours: entanglement that
//! lives only between nearest neighbours, a family whose nearest-neighbour
//! concurrence peaks at √2 − 1, and one whose site-with-rest concurrence
//! reaches the 1/√2 ceiling set by entanglement sharing.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fcs::KrausTriple;
use crate::matcore::{ComplexMatrix, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ex1,
    Ex2,
    Ex3,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Ex1, Family::Ex2, Family::Ex3];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Ex1 => "ex1",
            Family::Ex2 => "ex2",
            Family::Ex3 => "ex3",
        }
    }

    /// Whether the `a` parameter has any effect.
    pub fn uses_a(&self) -> bool {
        !matches!(self, Family::Ex1)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex1" => Ok(Family::Ex1),
            "ex2" => Ok(Family::Ex2),
            "ex3" => Ok(Family::Ex3),
            other => Err(Error::BadParams(format!(
                "unknown family {other:?} (expected ex1, ex2 or ex3)"
            ))),
        }
    }
}

/// Point in a family's parameter space. `a` is carried (and validated)
/// even for the first family, which ignores it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyParams {
    pub family: Family,
    pub phi: f64,
    pub a: f64,
}

impl FamilyParams {
    pub fn new(family: Family, phi: f64, a: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::BadParams(format!("phi must be finite, got {phi}")));
        }
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::BadParams(format!("a must lie in [0, 1], got {a}")));
        }
        Ok(FamilyParams { family, phi, a })
    }
}

/// Which closed-form concurrence to look up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Nearest-neighbour concurrence C(ρ₁₂).
    C12,
    /// Concurrence of the one-site-with-rest state C(ρ_A⊗B).
    CAb,
}

impl OracleKind {
    fn name(&self) -> &'static str {
        match self {
            OracleKind::C12 => "c12",
            OracleKind::CAb => "c_ab",
        }
    }
}

/// Build the family's Kraus pair with its closed-form invariant state
/// attached. The attached state is a valid fixed point even at the isolated
/// parameter points where the transfer spectrum degenerates (e.g. the first
/// family at φ = 0), so local states stay evaluable there; purity checks
/// still go through `fixed_point`, which reports the degeneracy.
pub fn make_triple(p: &FamilyParams) -> Result<KrausTriple> {
    let FamilyParams { family, phi, a } = *p;
    FamilyParams::new(family, phi, a)?;
    let (s, c) = phi.sin_cos();
    let (v1, v2, rho) = match family {
        Family::Ex1 => {
            let v1 = ComplexMatrix::from_real(&[&[c, s], &[0.0, 0.0]]);
            let v2 = ComplexMatrix::from_real(&[&[0.0, 0.0], &[s, c]]);
            let cs = c * s;
            let rho = ComplexMatrix::from_real(&[&[0.5, cs], &[cs, 0.5]]);
            (v1, v2, rho)
        }
        Family::Ex2 => {
            let v1 = ComplexMatrix::from_real(&[&[a * c, a * s], &[-s, c]]);
            let w = (1.0 - a * a).sqrt();
            let v2 = ComplexMatrix::from_real(&[&[0.0, w], &[0.0, 0.0]]);
            let denom = (1.0 - a) * (1.0 - a) * c * c + 2.0 * s * s;
            let x = s * s / denom;
            let y = (a - 1.0) * s * c / denom;
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::BadParams(format!(
                    "invariant state undefined at a = {a}, phi = {phi} (degenerate corner)"
                )));
            }
            let rho = ComplexMatrix::from_real(&[&[x, y], &[y, 1.0 - x]]);
            (v1, v2, rho)
        }
        Family::Ex3 => {
            let v1 = ComplexMatrix::from_real(&[&[a * c, a * s], &[-s, c]]);
            let w = (1.0 - a * a).sqrt();
            let v2 = ComplexMatrix::from_real(&[&[w, 0.0], &[0.0, 0.0]]);
            let norm = 1.0 + a * a;
            let rho = ComplexMatrix::from_real(&[&[1.0 / norm, 0.0], &[0.0, a * a / norm]]);
            (v1, v2, rho)
        }
    };
    let invariant = DensityMatrix::new(rho, vec![2])?;
    KrausTriple::new([v1, v2], Some(invariant))
}

/// Closed-form concurrence, where one exists. Absolute values make the
/// formulas valid over the whole angle range: concurrence is nonnegative
/// and even under φ ↦ −φ in every family.
pub fn oracle_concurrence(p: &FamilyParams, which: OracleKind) -> Result<f64> {
    let FamilyParams { family, phi, a } = *p;
    FamilyParams::new(family, phi, a)?;
    let (s, c) = phi.sin_cos();
    match (family, which) {
        (Family::Ex1, OracleKind::CAb) => Ok(((2.0 * phi).sin() * (2.0 * phi).cos()).abs()),
        (Family::Ex2, OracleKind::C12) => {
            let denom = (1.0 - a) * (1.0 - a) * c * c + 2.0 * s * s;
            let val = 2.0 * (1.0 - a * a) * s * s * c * c / denom;
            if !val.is_finite() {
                return Err(Error::BadParams(format!(
                    "closed form undefined at a = {a}, phi = {phi}"
                )));
            }
            Ok(val)
        }
        (Family::Ex2, OracleKind::CAb) => {
            let denom = (1.0 - a) * (1.0 - a) * c * c + 2.0 * s * s;
            let val = 2.0 * (1.0 - a * a).sqrt() * s * s * c.abs() / denom;
            if !val.is_finite() {
                return Err(Error::BadParams(format!(
                    "closed form undefined at a = {a}, phi = {phi}"
                )));
            }
            Ok(val)
        }
        (Family::Ex3, OracleKind::CAb) => {
            Ok(2.0 * a * (1.0 - a * a).sqrt() * s.abs() / (1.0 + a * a))
        }
        (f, k) => Err(Error::Undefined {
            family: f.name().into(),
            measure: k.name().into(),
        }),
    }
}
