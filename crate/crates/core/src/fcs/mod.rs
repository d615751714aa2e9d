//! Finitely correlated states from a single-Kraus pair.
//!
//! A chain state is generated by two b×b Kraus matrices (v₁, v₂) with
//! v₁v₁† + v₂v₂† = 1 (unitality) together with a density matrix ρ on the
//! auxiliary b-dimensional algebra fixed by the dual map x ↦ Σⱼ vⱼ† x vⱼ
//! (translation invariance). Local density matrices on n adjacent sites have
//! entries Tr(v_s† ρ v_t) over multi-indices s, t, with site 1 the leftmost
//! factor of both the index and the operator product v_s = v_{s₁}···v_{sₙ}.
//! Sites skipped by a gapped site set are contracted through the dual of the
//! identity-input channel B ↦ Σⱼ vⱼ B vⱼ†, once per skipped site.

mod spectrum;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{kron, herm_eigen, ComplexMatrix, DensityMatrix};
use crate::tolerances::Tolerances;
use crate::C64;

/// Largest number of chain sites a dense local state may cover.
pub const MAX_SITES: usize = 10;

/// Ordered set of chain sites (1-based, strictly increasing).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiteSet {
    sites: Vec<usize>,
}

impl SiteSet {
    pub fn new(sites: Vec<usize>) -> Result<Self> {
        if sites.is_empty() || sites[0] < 1 || sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadParams(format!(
                "sites must be strictly increasing and start at 1 or later, got {:?}",
                sites
            )));
        }
        Ok(SiteSet { sites })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of sites covered by the spanning interval.
    pub fn span(&self) -> usize {
        self.sites[self.sites.len() - 1] - self.sites[0] + 1
    }
}

impl std::str::FromStr for SiteSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let sites = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::BadParams(format!("bad site list {:?}", s)))
            })
            .collect::<Result<Vec<_>>>()?;
        SiteSet::new(sites)
    }
}

/// Residuals of the structural conditions a Kraus pair must satisfy.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// ‖v₁v₁† + v₂v₂† − 1‖_F
    pub unitality_residual: f64,
    /// ‖Σⱼ vⱼ† ρ vⱼ − ρ‖_F for the stored invariant state, when present.
    pub invariance_residual: Option<f64>,
    /// Bound both residuals are judged against.
    pub tol_cond: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.unitality_residual <= self.tol_cond
            && self.invariance_residual.map_or(true, |r| r <= self.tol_cond)
    }
}

/// Spectrum of the vectorized transfer map x ↦ Σⱼ vⱼ† x vⱼ.
#[derive(Debug, Clone)]
pub struct TransferSpectrum {
    /// Eigenvalues sorted by modulus, largest first.
    pub eigenvalues: Vec<C64>,
    /// How many eigenvalues satisfy |λ − 1| ≤ tol_fix. One means the
    /// invariant state is unique and the chain state is pure.
    pub unit_multiplicity: usize,
}

impl TransferSpectrum {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.first().map_or(0.0, |z| z.norm())
    }
}

/// The triple defining a translation-invariant chain state: two Kraus
/// matrices, the bond dimension, and optionally a precomputed invariant
/// state. The physical dimension is fixed at 2.
#[derive(Debug, Clone)]
pub struct KrausTriple {
    bond_dim: usize,
    kraus: [ComplexMatrix; 2],
    invariant: Option<DensityMatrix>,
    tol: Tolerances,
}

impl KrausTriple {
    pub fn new(kraus: [ComplexMatrix; 2], invariant: Option<DensityMatrix>) -> Result<Self> {
        Self::with_tolerances(kraus, invariant, Tolerances::default())
    }

    pub fn with_tolerances(
        kraus: [ComplexMatrix; 2],
        invariant: Option<DensityMatrix>,
        tol: Tolerances,
    ) -> Result<Self> {
        let b = kraus[0].rows();
        for v in &kraus {
            if !v.is_square() || v.rows() != b {
                return Err(Error::DimensionMismatch {
                    expected: format!("{0}x{0} Kraus matrices", b),
                    got: format!("{}x{}", v.rows(), v.cols()),
                });
            }
            if !v.all_finite() {
                return Err(Error::BadParams("non-finite Kraus entry".into()));
            }
        }
        if b == 0 {
            return Err(Error::BadParams("bond dimension must be positive".into()));
        }
        if let Some(rho) = &invariant {
            if rho.dims() != [b] {
                return Err(Error::DimensionMismatch {
                    expected: format!("invariant state of dims [{}]", b),
                    got: format!("{:?}", rho.dims()),
                });
            }
        }
        Ok(KrausTriple {
            bond_dim: b,
            kraus,
            invariant,
            tol,
        })
    }

    pub fn bond_dim(&self) -> usize {
        self.bond_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix; 2] {
        &self.kraus
    }

    pub fn stored_invariant(&self) -> Option<&DensityMatrix> {
        self.invariant.as_ref()
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    /// ‖v₁v₁† + v₂v₂† − 1‖_F
    pub fn unitality_residual(&self) -> f64 {
        let b = self.bond_dim;
        let mut sum = ComplexMatrix::zeros(b, b);
        for v in &self.kraus {
            sum = &sum + &v.matmul(&v.adjoint());
        }
        sum.frobenius_distance(&ComplexMatrix::identity(b))
    }

    /// Report the unitality and (if an invariant state is attached)
    /// translation-invariance residuals against `tol_cond`.
    pub fn validate(&self) -> ValidationReport {
        let invariance_residual = self.invariant.as_ref().map(|rho| {
            self.dual_apply(rho.mat())
                .expect("stored invariant has matching dims")
                .frobenius_distance(rho.mat())
        });
        ValidationReport {
            unitality_residual: self.unitality_residual(),
            invariance_residual,
            tol_cond: self.tol.tol_cond,
        }
    }

    /// Action of the dual map on a b×b matrix: x ↦ Σⱼ vⱼ† x vⱼ.
    /// Trace preserving whenever the pair is unital.
    pub fn dual_apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let b = self.bond_dim;
        if !x.is_square() || x.rows() != b {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", b),
                got: format!("{}x{}", x.rows(), x.cols()),
            });
        }
        let mut out = ComplexMatrix::zeros(b, b);
        for v in &self.kraus {
            out = &out + &v.adjoint().matmul(x).matmul(v);
        }
        Ok(out)
    }

    /// The b²×b² matrix of the dual map under column-major vectorization.
    pub fn transfer_matrix(&self) -> ComplexMatrix {
        let b = self.bond_dim;
        let mut t = ComplexMatrix::zeros(b * b, b * b);
        for v in &self.kraus {
            t = &t + &kron(&v.transpose(), &v.adjoint());
        }
        t
    }

    /// Full spectrum of the transfer map with the unit-eigenvalue count.
    pub fn transfer_spectrum(&self) -> TransferSpectrum {
        let mut eigenvalues = spectrum::complex_eigenvalues(&self.transfer_matrix());
        eigenvalues.sort_by(|a, b| {
            b.norm()
                .total_cmp(&a.norm())
                .then(b.re.total_cmp(&a.re))
                .then(b.im.total_cmp(&a.im))
        });
        let one = C64::new(1.0, 0.0);
        let unit_multiplicity = eigenvalues
            .iter()
            .filter(|z| (*z - one).norm() <= self.tol.tol_fix)
            .count();
        TransferSpectrum {
            eigenvalues,
            unit_multiplicity,
        }
    }

    fn ensure_unital(&self) -> Result<()> {
        let residual = self.unitality_residual();
        if residual > self.tol.tol_cond {
            return Err(Error::NotUnital { residual });
        }
        Ok(())
    }

    /// The unique positive unit-trace fixed point of the dual map.
    ///
    /// Always recomputed from the transfer matrix, ignoring any stored
    /// invariant, so it doubles as the purity check: a non-simple unit
    /// eigenvalue is reported as `DegenerateFixedPoint`.
    pub fn fixed_point(&self) -> Result<DensityMatrix> {
        self.ensure_unital()?;
        let spec = self.transfer_spectrum();
        if spec.unit_multiplicity != 1 {
            return Err(Error::DegenerateFixedPoint {
                multiplicity: spec.unit_multiplicity,
            });
        }
        let b = self.bond_dim;
        let vecx = spectrum::unit_eigenvector(&self.transfer_matrix());
        // column-major unvectorization
        let x = ComplexMatrix::from_fn(b, b, |i, j| vecx[j * b + i]);

        // a fixed point of a †-covariant map has fixed Hermitian and
        // anti-Hermitian parts; take whichever carries the weight
        let herm = (&x + &x.adjoint()).scale_re(0.5);
        let skew = (&x - &x.adjoint()).scale(C64::new(0.0, -0.5));
        let cand = if herm.frobenius_norm() >= skew.frobenius_norm() {
            herm
        } else {
            skew
        };
        let tr = cand.trace().re;
        if tr.abs() < 1e-12 * cand.frobenius_norm().max(1.0) {
            return Err(Error::NotPsd {
                min_eigenvalue: f64::NEG_INFINITY,
            });
        }
        let rho = cand.scale_re(1.0 / tr);
        let (vals, _) = herm_eigen(&rho)?;
        if vals[0] < -self.tol.tol_psd {
            return Err(Error::NotPsd {
                min_eigenvalue: vals[0],
            });
        }
        let residual = self.dual_apply(&rho)?.frobenius_distance(&rho);
        assert!(
            residual <= 1e-8,
            "inverse iteration failed to reach the fixed point (residual {residual:.3e})"
        );
        DensityMatrix::new(rho, vec![b])
    }

    /// Stored invariant state (verified against the invariance condition)
    /// or, absent one, the computed fixed point.
    pub fn invariant_state(&self) -> Result<DensityMatrix> {
        self.ensure_unital()?;
        match &self.invariant {
            Some(rho) => {
                let residual = self.dual_apply(rho.mat())?.frobenius_distance(rho.mat());
                if residual > self.tol.tol_cond {
                    return Err(Error::BadParams(format!(
                        "stored state is not invariant (residual {residual:.3e})"
                    )));
                }
                Ok(rho.clone())
            }
            None => self.fixed_point(),
        }
    }

    /// State of one spin together with the auxiliary algebra: the block
    /// matrix [v_s† ρ v_t]_{s,t}, of factor dims [2, b]. Its entanglement
    /// bounds that of one site with any remaining part of the chain.
    pub fn rho_ab(&self) -> Result<DensityMatrix> {
        let rho = self.invariant_state()?;
        let b = self.bond_dim;
        let mut out = ComplexMatrix::zeros(2 * b, 2 * b);
        for s in 0..2 {
            for t in 0..2 {
                let block = self.kraus[s].adjoint().matmul(rho.mat()).matmul(&self.kraus[t]);
                for i in 0..b {
                    for j in 0..b {
                        out[(s * b + i, t * b + j)] = block[(i, j)];
                    }
                }
            }
        }
        DensityMatrix::new(out, vec![2, b])
    }

    /// Density matrix of n adjacent sites, ⟨φ_s|ρ|φ_t⟩ = Tr(v_s† ρ v_t).
    pub fn local_state(&self, n: usize) -> Result<DensityMatrix> {
        if n == 0 || n > MAX_SITES {
            return Err(Error::TooLarge {
                size: n,
                cap: MAX_SITES,
            });
        }
        let sites = SiteSet::new((1..=n).collect()).expect("contiguous sites are valid");
        self.reduced_state(&sites)
    }

    /// Density matrix of the chain restricted to an arbitrary site set.
    /// Gaps between chosen sites are contracted through the dual of the
    /// identity-input channel, applied once per skipped site; only relative
    /// positions matter by translation invariance.
    pub fn reduced_state(&self, sites: &SiteSet) -> Result<DensityMatrix> {
        let k = sites.len();
        if k > MAX_SITES {
            return Err(Error::TooLarge {
                size: k,
                cap: MAX_SITES,
            });
        }
        let rho = self.invariant_state()?;
        let gaps: Vec<usize> = sites
            .sites()
            .windows(2)
            .map(|w| w[1] - w[0] - 1)
            .collect();

        // matrix powers of the transfer map, one per distinct gap length
        let b = self.bond_dim;
        let t = self.transfer_matrix();
        let mut gap_maps: Vec<Option<ComplexMatrix>> = vec![None; k.saturating_sub(1)];
        for (slot, &g) in gap_maps.iter_mut().zip(&gaps) {
            if g > 0 {
                *slot = Some(matrix_power(&t, g));
            }
        }

        let vdag = [self.kraus[0].adjoint(), self.kraus[1].adjoint()];
        let dim = 1usize << k;
        let mut out = ComplexMatrix::zeros(dim, dim);
        // depth-first over index pairs; site order makes the first chosen
        // site the most significant bit of row and column
        let mut stack: Vec<(usize, usize, usize, ComplexMatrix)> = vec![];
        for s in 0..2 {
            for t_idx in 0..2 {
                let x = vdag[s].matmul(rho.mat()).matmul(&self.kraus[t_idx]);
                stack.push((1, s, t_idx, x));
            }
        }
        while let Some((depth, row, col, x)) = stack.pop() {
            if depth == k {
                out[(row, col)] = x.trace();
                continue;
            }
            let x = match &gap_maps[depth - 1] {
                Some(tg) => apply_vectorized(tg, &x, b),
                None => x,
            };
            for s in 0..2 {
                for t_idx in 0..2 {
                    let next = vdag[s].matmul(&x).matmul(&self.kraus[t_idx]);
                    stack.push((depth + 1, row * 2 + s, col * 2 + t_idx, next));
                }
            }
        }
        DensityMatrix::new(out, vec![2; k])
    }

    /// Frobenius residuals of the two compatibility conditions relating
    /// ρ_{[1,n+1]} to ρ_{[1,n]}: tracing out the last site and tracing out
    /// the first site. Both vanish for a valid translation-invariant state.
    pub fn compatibility_check(&self, n: usize) -> Result<(f64, f64)> {
        if n == 0 || n + 1 > MAX_SITES {
            return Err(Error::TooLarge {
                size: n + 1,
                cap: MAX_SITES,
            });
        }
        let big = self.local_state(n + 1)?;
        let small = self.local_state(n)?;
        let keep_first_n: Vec<usize> = (0..n).collect();
        let keep_last_n: Vec<usize> = (1..=n).collect();
        let drop_last = big.partial_trace(&keep_first_n)?;
        let drop_first = big.partial_trace(&keep_last_n)?;
        Ok((
            drop_last.mat().frobenius_distance(small.mat()),
            drop_first.mat().frobenius_distance(small.mat()),
        ))
    }
}

/// g-th power of a square matrix by repeated squaring (g ≥ 1).
fn matrix_power(m: &ComplexMatrix, mut g: usize) -> ComplexMatrix {
    assert!(g >= 1);
    let mut base = m.clone();
    let mut acc: Option<ComplexMatrix> = None;
    loop {
        if g & 1 == 1 {
            acc = Some(match acc {
                Some(a) => a.matmul(&base),
                None => base.clone(),
            });
        }
        g >>= 1;
        if g == 0 {
            break;
        }
        base = base.matmul(&base);
    }
    acc.expect("g >= 1")
}

/// Apply a vectorized map (b²×b², column-major convention) to a b×b matrix.
fn apply_vectorized(t: &ComplexMatrix, x: &ComplexMatrix, b: usize) -> ComplexMatrix {
    let mut vecx = vec![C64::new(0.0, 0.0); b * b];
    for i in 0..b {
        for j in 0..b {
            vecx[j * b + i] = x[(i, j)];
        }
    }
    let mut out = vec![C64::new(0.0, 0.0); b * b];
    for (r, slot) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (c, xv) in vecx.iter().enumerate() {
            acc += t[(r, c)] * xv;
        }
        *slot = acc;
    }
    ComplexMatrix::from_fn(b, b, |i, j| out[j * b + i])
}
