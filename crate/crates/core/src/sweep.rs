//! Parameter sweeps, measure pipelines and derivative-free maximization.
//!
//! Grid points are evaluated by pure functions and merged in lexicographic
//! grid order, so output is deterministic regardless of how many workers
//! rayon schedules. Failed points (for instance the isolated degenerate
//! parameter corners) are recorded with NaN values and an error tag rather
//! than aborting the sweep. Maximization uses a coarse grid scan followed by
//! cyclic per-coordinate golden-section refinement; concurrence objectives
//! carry max{0,·} kinks, so nothing here assumes derivatives.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::{
    concurrence, eof_two_qubit, min_pt_eigenvalue, negativity, two_qubit_separable,
    von_neumann_entropy, MeasureReport,
};
use crate::error::{Error, Result};
use crate::families::{make_triple, Family, FamilyParams};
use crate::fcs::{KrausTriple, SiteSet};
use crate::matcore::DensityMatrix;

/// Slack allowed when auditing the concurrence hierarchy.
pub const HIERARCHY_SLACK: f64 = 1e-10;
/// Largest site distance the hierarchy audit will inspect.
pub const AUDIT_MAX_P: usize = 7;
/// Hard cap on the number of grid points in one sweep.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// A named scalar measure of a chain state.
///
/// The `*_ab` variants act on the one-site-with-rest state and need bond
/// dimension 2 where a concurrence is involved; the site-set variants act on
/// the reduced state of the sites passed alongside the measure list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Concurrence of two adjacent sites.
    C12,
    /// Concurrence of sites 1 and 3.
    C13,
    /// Concurrence of the one-site-with-rest state.
    CAb,
    /// Negativity of the one-site-with-rest state across the spin|bond cut.
    NegAb,
    /// Smallest partial-transpose eigenvalue of the one-site-with-rest state.
    MinPtAb,
    /// Entanglement of formation of the one-site-with-rest state.
    EofAb,
    /// Concurrence of the reduced state on a two-site set.
    Concurrence,
    /// Entanglement of formation on a two-site set.
    Eof,
    /// Negativity of the reduced state, first listed site versus the rest.
    Negativity,
    /// Smallest partial-transpose eigenvalue, first listed site vs the rest.
    MinPt,
    /// Von Neumann entropy of the reduced state.
    Entropy,
    /// Two-qubit separability verdict as 1.0 / 0.0 (two-site sets only).
    Separable,
}

impl Measure {
    pub const ALL: [Measure; 12] = [
        Measure::C12,
        Measure::C13,
        Measure::CAb,
        Measure::NegAb,
        Measure::MinPtAb,
        Measure::EofAb,
        Measure::Concurrence,
        Measure::Eof,
        Measure::Negativity,
        Measure::MinPt,
        Measure::Entropy,
        Measure::Separable,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::C12 => "c12",
            Measure::C13 => "c13",
            Measure::CAb => "c_ab",
            Measure::NegAb => "neg_ab",
            Measure::MinPtAb => "min_pt_ab",
            Measure::EofAb => "eof_ab",
            Measure::Concurrence => "concurrence",
            Measure::Eof => "eof",
            Measure::Negativity => "negativity",
            Measure::MinPt => "min_pt",
            Measure::Entropy => "entropy",
            Measure::Separable => "separable",
        }
    }

    /// Whether evaluation needs an explicit site set.
    pub fn needs_sites(&self) -> bool {
        matches!(
            self,
            Measure::Concurrence
                | Measure::Eof
                | Measure::Negativity
                | Measure::MinPt
                | Measure::Entropy
                | Measure::Separable
        )
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .iter()
            .find(|m| m.name() == s)
            .copied()
            .ok_or_else(|| Error::BadSpec(format!("unknown measure {s:?}")))
    }
}

fn two_site_reduced(triple: &KrausTriple, sites: &SiteSet) -> Result<DensityMatrix> {
    if sites.len() != 2 {
        return Err(Error::BadSpec(format!(
            "this measure needs exactly 2 sites, got {:?}",
            sites.sites()
        )));
    }
    triple.reduced_state(sites)
}

/// Evaluate one measure on a triple.
pub fn evaluate_measure(
    triple: &KrausTriple,
    measure: Measure,
    sites: Option<&SiteSet>,
) -> Result<f64> {
    let need = |m: Measure| -> Result<&SiteSet> {
        sites.ok_or_else(|| Error::BadSpec(format!("measure {} needs --sites", m.name())))
    };
    match measure {
        Measure::C12 => concurrence(&triple.local_state(2)?),
        Measure::C13 => concurrence(&triple.reduced_state(&SiteSet::new(vec![1, 3])?)?),
        Measure::CAb => concurrence(&triple.rho_ab()?),
        Measure::NegAb => negativity(&triple.rho_ab()?, 0),
        Measure::MinPtAb => min_pt_eigenvalue(&triple.rho_ab()?, 0),
        Measure::EofAb => eof_two_qubit(&triple.rho_ab()?),
        Measure::Concurrence => concurrence(&two_site_reduced(triple, need(measure)?)?),
        Measure::Eof => eof_two_qubit(&two_site_reduced(triple, need(measure)?)?),
        Measure::Negativity => negativity(&triple.reduced_state(need(measure)?)?, 0),
        Measure::MinPt => min_pt_eigenvalue(&triple.reduced_state(need(measure)?)?, 0),
        Measure::Entropy => von_neumann_entropy(&triple.reduced_state(need(measure)?)?),
        Measure::Separable => {
            two_qubit_separable(&two_site_reduced(triple, need(measure)?)?).map(f64::from)
        }
    }
}

/// Evaluate several measures into a report keyed by measure name.
pub fn measure_report(
    triple: &KrausTriple,
    measures: &[Measure],
    sites: Option<&SiteSet>,
    params: BTreeMap<String, f64>,
) -> Result<MeasureReport> {
    let mut entries = BTreeMap::new();
    for &m in measures {
        entries.insert(m.name().to_string(), evaluate_measure(triple, m, sites)?);
    }
    Ok(MeasureReport {
        entries,
        params,
        tolerances: triple.tolerances(),
    })
}

/// One swept parameter: `points` equally spaced values on [lo, hi].
#[derive(Debug, Clone, Serialize)]
pub struct GridAxis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridAxis {
    fn value(&self, idx: usize) -> f64 {
        if self.points == 1 {
            return self.lo;
        }
        self.lo + (self.hi - self.lo) * idx as f64 / (self.points - 1) as f64
    }
}

/// Sweep specification over one family's parameter space.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    /// Values of parameters that are not swept.
    pub base: FamilyParams,
    pub grid: Vec<GridAxis>,
    pub measures: Vec<Measure>,
    pub sites: Option<SiteSet>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub phi: f64,
    pub a: f64,
    /// One value per requested measure, NaN on failure.
    pub values: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub measures: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// CSV with the fixed header `family,phi,a,<measures...>,error` and
    /// floats printed to 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("family,phi,a");
        for m in &self.measures {
            out.push(',');
            out.push_str(m);
        }
        out.push_str(",error\n");
        for row in &self.rows {
            out.push_str(&row.family);
            out.push(',');
            out.push_str(&fmt_float(row.phi));
            out.push(',');
            out.push_str(&fmt_float(row.a));
            for v in &row.values {
                out.push(',');
                out.push_str(&fmt_float(*v));
            }
            out.push(',');
            if let Some(err) = &row.error {
                out.push_str(&csv_quote(err));
            }
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn apply_axis(params: &mut FamilyParams, name: &str, value: f64) {
    match name {
        "phi" => params.phi = value,
        "a" => params.a = value,
        _ => unreachable!("axis names validated in check_spec"),
    }
}

fn check_spec(spec: &SweepSpec) -> Result<usize> {
    if spec.measures.is_empty() {
        return Err(Error::BadSpec("no measures requested".into()));
    }
    let mut seen = Vec::new();
    for ax in &spec.grid {
        if ax.name != "phi" && ax.name != "a" {
            return Err(Error::BadSpec(format!(
                "unknown parameter {:?} (family parameters are phi and a)",
                ax.name
            )));
        }
        if seen.contains(&ax.name) {
            return Err(Error::BadSpec(format!("duplicate axis {:?}", ax.name)));
        }
        seen.push(ax.name.clone());
        if ax.points < 2 {
            return Err(Error::BadSpec(format!(
                "axis {:?} needs at least 2 points, got {}",
                ax.name, ax.points
            )));
        }
        if !ax.lo.is_finite() || !ax.hi.is_finite() || ax.lo > ax.hi {
            return Err(Error::BadSpec(format!(
                "axis {:?} has an invalid range [{}, {}]",
                ax.name, ax.lo, ax.hi
            )));
        }
    }
    let total: usize = spec.grid.iter().map(|ax| ax.points).product();
    if total > MAX_GRID_POINTS {
        return Err(Error::BadSpec(format!(
            "grid of {total} points exceeds the cap of {MAX_GRID_POINTS}"
        )));
    }
    for m in &spec.measures {
        if m.needs_sites() && spec.sites.is_none() {
            return Err(Error::BadSpec(format!(
                "measure {} needs a site set",
                m.name()
            )));
        }
    }
    Ok(total)
}

/// Run a sweep. Rows come back in lexicographic grid order (first axis
/// outermost); the order and values are independent of worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let total = check_spec(spec)?;
    let axes = &spec.grid;

    let rows: Vec<SweepRow> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut params = spec.base;
            params.family = spec.family;
            let mut rem = flat;
            for ax in axes.iter().rev() {
                apply_axis(&mut params, &ax.name, ax.value(rem % ax.points));
                rem /= ax.points;
            }
            let result = FamilyParams::new(params.family, params.phi, params.a)
                .and_then(|p| make_triple(&p))
                .and_then(|triple| {
                    spec.measures
                        .iter()
                        .map(|&m| evaluate_measure(&triple, m, spec.sites.as_ref()))
                        .collect::<Result<Vec<f64>>>()
                });
            match result {
                Ok(values) => SweepRow {
                    family: spec.family.name().to_string(),
                    phi: params.phi,
                    a: params.a,
                    values,
                    error: None,
                },
                Err(err) => SweepRow {
                    family: spec.family.name().to_string(),
                    phi: params.phi,
                    a: params.a,
                    values: vec![f64::NAN; spec.measures.len()],
                    error: Some(err.to_string()),
                },
            }
        })
        .collect();

    Ok(SweepTable {
        measures: spec.measures.iter().map(|m| m.name().to_string()).collect(),
        rows,
    })
}

/// Parameter range handed to [`maximize`]; zero width pins the parameter.
#[derive(Debug, Clone, Serialize)]
pub struct ParamBound {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

/// Outcome of a maximization run.
#[derive(Debug, Clone, Serialize)]
pub struct OptResult {
    pub params: FamilyParams,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const COARSE_POINTS: usize = 64;
/// Cyclic refinement always runs this many rounds, then keeps going until
/// the per-round movement drops below PARAM_TOL (up to MAX_ROUNDS).
const MIN_ROUNDS: usize = 5;
const MAX_ROUNDS: usize = 40;
const PARAM_TOL: f64 = 1e-8;
/// Coarse maxima within this slack of the best are all refined, so that
/// equal-height maxima are resolved by the lexicographic tie-break instead
/// of by rounding luck in the coarse scan.
const BASIN_SLACK: f64 = 1e-3;
const MAX_BASINS: usize = 16;

struct Objective<'a> {
    family: Family,
    base: FamilyParams,
    names: Vec<String>,
    measure: Measure,
    sites: Option<&'a SiteSet>,
    evaluations: usize,
}

impl Objective<'_> {
    /// Err(NonFinite) on a NaN objective; domain failures come back as None
    /// and are simply skipped by the search.
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        self.evaluations += 1;
        let mut params = self.base;
        params.family = self.family;
        for (name, &v) in self.names.iter().zip(x) {
            apply_axis(&mut params, name, v);
        }
        let result = FamilyParams::new(params.family, params.phi, params.a)
            .and_then(|p| make_triple(&p))
            .and_then(|t| evaluate_measure(&t, self.measure, self.sites));
        match result {
            Ok(v) if v.is_nan() => Err(Error::NonFinite {
                at: format!("{:?} = {:?}", self.names, x),
            }),
            Ok(v) => Ok(Some(v)),
            Err(_) => Ok(None),
        }
    }
}

/// Golden-section maximization of f on [lo, hi] down to a bracket narrower
/// than PARAM_TOL. Returns the best point actually evaluated, or None when
/// every probe failed.
fn golden_max(
    f: &mut impl FnMut(f64) -> Result<Option<f64>>,
    lo: f64,
    hi: f64,
) -> Result<Option<(f64, f64)>> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut best: Option<(f64, f64)> = None;
    let mut track = |x: f64, v: Option<f64>| {
        if let Some(v) = v {
            if best.map_or(true, |(_, bv)| v > bv) {
                best = Some((x, v));
            }
        }
    };
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c)?;
    track(c, fc);
    let mut fd = f(d)?;
    track(d, fd);
    while b - a > PARAM_TOL {
        // a failed probe (None) loses the comparison and drops out
        if fc.unwrap_or(f64::NEG_INFINITY) > fd.unwrap_or(f64::NEG_INFINITY) {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c)?;
            track(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d)?;
            track(d, fd);
        }
    }
    Ok(best)
}

fn lex_less(a: &[f64], b: &[f64], tol: f64) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > tol {
            return x < y;
        }
    }
    false
}

/// Maximize a measure over one or two family parameters.
///
/// A coarse 64-per-axis scan locates candidate basins; each near-best basin
/// is refined by cyclic golden-section passes (5 rounds per coordinate set),
/// and value ties between refined candidates go to the lexicographically
/// smallest parameter vector.
pub fn maximize(
    family: Family,
    base: FamilyParams,
    bounds: &[ParamBound],
    measure: Measure,
    sites: Option<&SiteSet>,
) -> Result<OptResult> {
    for b in bounds {
        if b.name != "phi" && b.name != "a" {
            return Err(Error::BadSpec(format!("unknown parameter {:?}", b.name)));
        }
        if !b.lo.is_finite() || !b.hi.is_finite() || b.lo > b.hi {
            return Err(Error::BadSpec(format!(
                "bad bounds for {:?}: [{}, {}]",
                b.name, b.lo, b.hi
            )));
        }
    }
    let mut fixed = base;
    fixed.family = family;
    for b in bounds.iter().filter(|b| b.lo == b.hi) {
        apply_axis(&mut fixed, &b.name, b.lo);
    }
    let free: Vec<&ParamBound> = bounds.iter().filter(|b| b.lo < b.hi).collect();
    if free.len() > 2 {
        return Err(Error::BadSpec(format!(
            "at most 2 free parameters supported, got {}",
            free.len()
        )));
    }

    let mut obj = Objective {
        family,
        base: fixed,
        names: free.iter().map(|b| b.name.clone()).collect(),
        measure,
        sites,
        evaluations: 0,
    };

    // no free parameters: a single evaluation is the answer
    if free.is_empty() {
        let value = obj
            .eval(&[])?
            .ok_or_else(|| Error::BadSpec("objective failed at the pinned point".into()))?;
        let mut params = fixed;
        params.family = family;
        return Ok(OptResult {
            params,
            value,
            evaluations: obj.evaluations,
            converged: true,
        });
    }

    // coarse scan, lexicographic over the free axes
    let k = free.len();
    let mut coarse: Vec<(Vec<f64>, f64)> = Vec::new();
    let total = COARSE_POINTS.pow(k as u32);
    for flat in 0..total {
        let mut x = vec![0.0; k];
        let mut rem = flat;
        for i in (0..k).rev() {
            let idx = rem % COARSE_POINTS;
            rem /= COARSE_POINTS;
            x[i] = free[i].lo
                + (free[i].hi - free[i].lo) * idx as f64 / (COARSE_POINTS - 1) as f64;
        }
        if let Some(v) = obj.eval(&x)? {
            coarse.push((x, v));
        }
    }
    let best_coarse = coarse
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    if best_coarse == f64::NEG_INFINITY {
        return Err(Error::BadSpec("objective failed at every grid point".into()));
    }
    let slack = BASIN_SLACK * best_coarse.abs().max(1.0);
    let mut candidates: Vec<Vec<f64>> = coarse
        .iter()
        .filter(|(_, v)| *v >= best_coarse - slack)
        .map(|(x, _)| x.clone())
        .collect();
    candidates.truncate(MAX_BASINS);

    let spacing: Vec<f64> = free
        .iter()
        .map(|b| (b.hi - b.lo) / (COARSE_POINTS - 1) as f64)
        .collect();

    // refine each candidate basin by cyclic golden sections; an extra line
    // search along each round's net displacement keeps coupled objectives
    // from stalling at the slow linear rate of plain coordinate descent
    let mut refined: Vec<(Vec<f64>, f64, bool)> = Vec::new();
    for start in candidates {
        let mut x = start;
        let mut value = obj.eval(&x)?.unwrap_or(f64::NEG_INFINITY);
        let mut converged = false;
        for round in 0..MAX_ROUNDS {
            let round_start = x.clone();
            let mut moved = 0.0f64;
            for i in 0..k {
                let lo = (x[i] - spacing[i]).max(free[i].lo);
                let hi = (x[i] + spacing[i]).min(free[i].hi);
                let mut line = |t: f64| {
                    let mut probe = x.clone();
                    probe[i] = t;
                    obj.eval(&probe)
                };
                if let Some((xi, vi)) = golden_max(&mut line, lo, hi)? {
                    if vi >= value {
                        moved = moved.max((xi - x[i]).abs());
                        x[i] = xi;
                        value = vi;
                    }
                }
            }
            if k > 1 {
                let dir: Vec<f64> = x.iter().zip(&round_start).map(|(a, b)| a - b).collect();
                let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
                if norm > PARAM_TOL {
                    // largest step multiples keeping x + t·dir inside the box
                    let (mut t_lo, mut t_hi) = (-1.0f64, 2.0f64);
                    for i in 0..k {
                        if dir[i] != 0.0 {
                            let to_lo = (free[i].lo - x[i]) / dir[i];
                            let to_hi = (free[i].hi - x[i]) / dir[i];
                            let (lo_i, hi_i) = if to_lo <= to_hi {
                                (to_lo, to_hi)
                            } else {
                                (to_hi, to_lo)
                            };
                            t_lo = t_lo.max(lo_i);
                            t_hi = t_hi.min(hi_i);
                        }
                    }
                    if t_lo < t_hi {
                        let mut line = |t: f64| {
                            let probe: Vec<f64> =
                                x.iter().zip(&dir).map(|(xi, di)| xi + t * di).collect();
                            obj.eval(&probe)
                        };
                        if let Some((t, vt)) = golden_max(&mut line, t_lo, t_hi)? {
                            if vt >= value {
                                for i in 0..k {
                                    let shift = t * dir[i];
                                    moved = moved.max(shift.abs());
                                    x[i] += shift;
                                }
                                value = vt;
                            }
                        }
                    }
                }
            }
            converged = moved < PARAM_TOL;
            if converged && round + 1 >= MIN_ROUNDS {
                break;
            }
        }
        refined.push((x, value, converged));
    }

    // keep the best refined value; near-ties go to the smallest parameters
    let mut best = refined[0].clone();
    for cand in refined.into_iter().skip(1) {
        let tie = (cand.1 - best.1).abs() <= 1e-9 * best.1.abs().max(1.0);
        if (tie && lex_less(&cand.0, &best.0, 1e-6)) || (!tie && cand.1 > best.1) {
            best = cand;
        }
    }
    // never report less than the coarse scan found
    if best.1 < best_coarse {
        let coarse_best = coarse
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        best = (coarse_best.0.clone(), coarse_best.1, false);
    }

    let mut params = fixed;
    params.family = family;
    for (name, &v) in obj.names.iter().zip(&best.0) {
        apply_axis(&mut params, name, v);
    }
    Ok(OptResult {
        params,
        value: best.1,
        evaluations: obj.evaluations,
        converged: best.2,
    })
}

/// One point at which the concurrence hierarchy fails.
#[derive(Debug, Clone, Serialize)]
pub struct HierarchyViolation {
    pub params: FamilyParams,
    pub p: usize,
    pub pair_concurrence: f64,
    pub rest_concurrence: f64,
}

/// Check C(ρ_{1,p}) ≤ C(ρ_A⊗B) + slack for p = 2..=p_max at one point.
/// Returns the offending p values.
pub fn audit_point(
    rho_ab: &DensityMatrix,
    pairs: &[(usize, DensityMatrix)],
    slack: f64,
) -> Result<Vec<(usize, f64, f64)>> {
    let c_rest = concurrence(rho_ab)?;
    let mut out = Vec::new();
    for (p, rho) in pairs {
        let c_pair = concurrence(rho)?;
        if c_pair > c_rest + slack {
            out.push((*p, c_pair, c_rest));
        }
    }
    Ok(out)
}

/// Sweep a grid and audit the monotonicity hierarchy: the concurrence of
/// site 1 with site p never exceeds the concurrence of one site with the
/// rest of the chain. Violations are data, not errors; a healthy family
/// returns an empty list.
pub fn hierarchy_audit(
    family: Family,
    base: FamilyParams,
    grid: &[GridAxis],
    p_max: usize,
) -> Result<Vec<HierarchyViolation>> {
    if !(2..=AUDIT_MAX_P).contains(&p_max) {
        return Err(Error::BadSpec(format!(
            "p_max must lie in 2..={AUDIT_MAX_P}, got {p_max}"
        )));
    }
    let probe = SweepSpec {
        family,
        base,
        grid: grid.to_vec(),
        measures: vec![Measure::CAb],
        sites: None,
    };
    let total = check_spec(&probe)?;

    let results: Vec<Result<Vec<HierarchyViolation>>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut params = base;
            params.family = family;
            let mut rem = flat;
            for ax in grid.iter().rev() {
                apply_axis(&mut params, &ax.name, ax.value(rem % ax.points));
                rem /= ax.points;
            }
            let params = FamilyParams::new(params.family, params.phi, params.a)?;
            let triple = make_triple(&params)?;
            let rho_ab = triple.rho_ab()?;
            let mut pairs = Vec::with_capacity(p_max - 1);
            for p in 2..=p_max {
                pairs.push((p, triple.reduced_state(&SiteSet::new(vec![1, p])?)?));
            }
            Ok(audit_point(&rho_ab, &pairs, HIERARCHY_SLACK)?
                .into_iter()
                .map(|(p, c_pair, c_rest)| HierarchyViolation {
                    params,
                    p,
                    pair_concurrence: c_pair,
                    rest_concurrence: c_rest,
                })
                .collect())
        })
        .collect();

    let mut violations = Vec::new();
    for r in results {
        violations.extend(r?);
    }
    Ok(violations)
}

/// Entanglement-sharing budget of one site with its two nearest neighbours:
/// C(ρ₁₂)² + C(ρ₁₃)², which translation invariance caps at 1.
pub fn coffman_budget(triple: &KrausTriple) -> Result<f64> {
    let c12 = concurrence(&triple.local_state(2)?)?;
    let c13 = concurrence(&triple.reduced_state(&SiteSet::new(vec![1, 3])?)?)?;
    Ok(c12 * c12 + c13 * c13)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::ComplexMatrix;

    fn phi_axis(points: usize) -> GridAxis {
        GridAxis {
            name: "phi".into(),
            lo: 0.0,
            hi: 2.0 * std::f64::consts::PI,
            points,
        }
    }

    fn base(family: Family) -> FamilyParams {
        FamilyParams {
            family,
            phi: 0.0,
            a: 0.0,
        }
    }

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("bogus".parse::<Measure>().is_err());
    }

    #[test]
    fn one_point_axis_rejected() {
        let spec = SweepSpec {
            family: Family::Ex1,
            base: base(Family::Ex1),
            grid: vec![GridAxis {
                name: "phi".into(),
                lo: 0.0,
                hi: 1.0,
                points: 1,
            }],
            measures: vec![Measure::CAb],
            sites: None,
        };
        assert!(matches!(run_sweep(&spec), Err(Error::BadSpec(_))));
    }

    #[test]
    fn sweep_rows_in_grid_order_and_deterministic() {
        let spec = SweepSpec {
            family: Family::Ex1,
            base: base(Family::Ex1),
            grid: vec![phi_axis(21)],
            measures: vec![Measure::C12, Measure::CAb],
            sites: None,
        };
        let t1 = run_sweep(&spec).unwrap();
        let t2 = run_sweep(&spec).unwrap();
        assert_eq!(t1.rows.len(), 21);
        assert_eq!(t1.to_csv(), t2.to_csv());
        for (i, row) in t1.rows.iter().enumerate() {
            let expect = 2.0 * std::f64::consts::PI * i as f64 / 20.0;
            assert_eq!(row.phi, expect);
            assert!(row.error.is_none(), "{:?}", row.error);
        }
        // nearest-neighbour concurrence never exceeds site-with-rest
        for row in &t1.rows {
            assert!(row.values[0] <= row.values[1] + 1e-10);
        }
    }

    #[test]
    fn csv_shape() {
        let spec = SweepSpec {
            family: Family::Ex1,
            base: base(Family::Ex1),
            grid: vec![phi_axis(3)],
            measures: vec![Measure::CAb],
            sites: None,
        };
        let csv = run_sweep(&spec).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "family,phi,a,c_ab,error");
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn sites_required_for_site_measures() {
        let spec = SweepSpec {
            family: Family::Ex1,
            base: base(Family::Ex1),
            grid: vec![phi_axis(3)],
            measures: vec![Measure::Concurrence],
            sites: None,
        };
        assert!(matches!(run_sweep(&spec), Err(Error::BadSpec(_))));
    }

    #[test]
    fn maximize_with_all_parameters_pinned_returns_single_evaluation() {
        let phi = std::f64::consts::FRAC_PI_8;
        let bounds = [ParamBound {
            name: "phi".into(),
            lo: phi,
            hi: phi,
        }];
        let r = maximize(
            Family::Ex1,
            base(Family::Ex1),
            &bounds,
            Measure::CAb,
            None,
        )
        .unwrap();
        assert_eq!(r.evaluations, 1);
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn maximize_ex1_hits_half() {
        // |sin 2φ cos 2φ| peaks at 1/2
        let bounds = [ParamBound {
            name: "phi".into(),
            lo: 0.0,
            hi: 2.0 * std::f64::consts::PI,
        }];
        let r = maximize(
            Family::Ex1,
            base(Family::Ex1),
            &bounds,
            Measure::CAb,
            None,
        )
        .unwrap();
        assert!((r.value - 0.5).abs() < 1e-8, "value {}", r.value);
        assert!(r.converged);
    }

    #[test]
    fn audit_detects_corrupted_input() {
        let p = FamilyParams::new(Family::Ex1, std::f64::consts::FRAC_PI_8, 0.0).unwrap();
        let triple = make_triple(&p).unwrap();
        let pairs = vec![(2usize, triple.local_state(2).unwrap())];
        // genuine ρ_A⊗B passes
        let ok = audit_point(&triple.rho_ab().unwrap(), &pairs, HIERARCHY_SLACK).unwrap();
        assert!(ok.is_empty());
        // swapping in the maximally mixed state must trip the detector
        let fake = DensityMatrix::new(ComplexMatrix::identity(4).scale_re(0.25), vec![2, 2])
            .unwrap();
        let bad = audit_point(&fake, &pairs, HIERARCHY_SLACK).unwrap();
        assert_eq!(bad.len(), 1);
    }

    #[test]
    fn hierarchy_audit_clean_on_small_grid() {
        let grid = [phi_axis(9)];
        let v = hierarchy_audit(Family::Ex1, base(Family::Ex1), &grid, 3).unwrap();
        assert!(v.is_empty(), "{v:?}");
    }
}
