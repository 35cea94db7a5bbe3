//! Audits and experiments: area-law sweeps, symmetry checks, connected
//! correlators and their decay, rotated-copy cross terms, and the ε-net
//! counting arithmetic.
//!
//! The audit checks the printed inequality chain per cubic region A:
//! S_0(ψ_A) ≤ log₂(2^{l_1···l_{D−1}}·l_D + 1) ≤ |∂A|, with ranks compared in
//! exact integer arithmetic. Connected correlators are ⟨AB⟩ − ⟨A⟩⟨B⟩ with
//! support distance measured in the Chebyshev metric. The counting report
//! compares q·log₂(1/ε) net bits against a description budget with all
//! asymptotic constants normalized to 1.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::rotation_copies;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_cubic_regions, Lattice, Region};
use crate::schmidt::{
    distinct_restrictions, group_by_restriction, hermitian_eigenvalues, schmidt_rank_sites,
    sparse_dot, trace_norm,
};
use crate::state::SparseState;

/// Regions whose smaller Gram side would exceed this are skipped with notice.
pub const GRAM_SIDE_CAP: usize = 4096;

/// Single-site Hermitian observable on a d-dimensional local space.
#[derive(Clone, Debug)]
pub struct SiteObservable {
    matrix: DMatrix<Complex64>,
    label: String,
}

impl SiteObservable {
    /// Validates shape and Hermiticity (residual ≤ 10⁻¹²).
    pub fn new(matrix: DMatrix<Complex64>, label: impl Into<String>, d: usize) -> Result<SiteObservable> {
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::BadOperatorShape {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                dim: d,
            });
        }
        let residual = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if residual > 1e-12 {
            return Err(Error::NotHermitian { residual });
        }
        Ok(SiteObservable { matrix, label: label.into() })
    }

    /// Projector |symbol⟩⟨symbol|.
    pub fn projector(d: usize, symbol: usize) -> Result<SiteObservable> {
        if symbol >= d {
            return Err(Error::out_of_range("projector symbol", "symbol < d", symbol));
        }
        let mut m = DMatrix::zeros(d, d);
        m[(symbol, symbol)] = Complex64::ONE;
        SiteObservable::new(m, format!("P{symbol}"), d)
    }

    /// Complete Hermitian operator basis (d² generalized Gell-Mann-style
    /// elements); by bilinearity, correlator sweeps over this basis cover
    /// every pair of single-site observables.
    pub fn hermitian_basis(d: usize) -> Vec<SiteObservable> {
        let mut basis = Vec::with_capacity(d * d);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..d {
            let mut m = DMatrix::zeros(d, d);
            m[(i, i)] = Complex64::ONE;
            basis.push(SiteObservable { matrix: m, label: format!("E{i}{i}") });
        }
        for i in 0..d {
            for j in i + 1..d {
                let mut re = DMatrix::zeros(d, d);
                re[(i, j)] = Complex64::new(s, 0.0);
                re[(j, i)] = Complex64::new(s, 0.0);
                basis.push(SiteObservable { matrix: re, label: format!("S{i}{j}") });
                let mut im = DMatrix::zeros(d, d);
                im[(i, j)] = Complex64::new(0.0, -s);
                im[(j, i)] = Complex64::new(0.0, s);
                basis.push(SiteObservable { matrix: im, label: format!("A{i}{j}") });
            }
        }
        basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Spectral norm (largest eigenvalue magnitude).
    pub fn operator_norm(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

/// Raw term list of A_site|ψ⟩ (unsorted).
fn apply_site_observable(
    state: &SparseState,
    obs: &SiteObservable,
    site: usize,
) -> Vec<(crate::config::Config, Complex64)> {
    let d = state.lattice().local_dim();
    let mut terms = Vec::with_capacity(state.support_size());
    for &(config, amp) in state.terms() {
        let a = config.digit(site) as usize;
        for b in 0..d {
            let entry = obs.matrix[(b, a)];
            if entry != Complex64::ZERO {
                terms.push((config.with_digit(site, b as u8), entry * amp));
            }
        }
    }
    terms.sort_unstable_by_key(|&(c, _)| c);
    terms
}

/// ⟨ψ|A_site|ψ⟩.
pub fn expectation(state: &SparseState, obs: &SiteObservable, site: usize) -> Result<Complex64> {
    check_site(state, site)?;
    let applied = apply_site_observable(state, obs, site);
    Ok(sparse_dot(state.terms(), &applied))
}

fn check_site(state: &SparseState, site: usize) -> Result<()> {
    let n = state.lattice().n_sites();
    if site >= n {
        return Err(Error::SiteOutOfRange { site, sites: n });
    }
    Ok(())
}

/// Chebyshev distance between two sites.
fn chebyshev(lattice: &Lattice, a: usize, b: usize) -> usize {
    lattice
        .site_coords(a)
        .iter()
        .zip(lattice.site_coords(b))
        .map(|(&x, y)| x.abs_diff(y))
        .max()
        .unwrap_or(0)
}

/// One evaluated connected correlator ⟨AB⟩ − ⟨A⟩⟨B⟩.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelatorRecord {
    pub site_a: Vec<usize>,
    pub site_b: Vec<usize>,
    pub obs_a: String,
    pub obs_b: String,
    pub obs_norm_a: f64,
    pub obs_norm_b: f64,
    /// Real part of ⟨AB⟩ − ⟨A⟩⟨B⟩.
    pub connected_value: f64,
    /// Magnitude of the imaginary residue (≤ 10⁻¹² for Hermitian inputs).
    pub imag_residue: f64,
    /// Chebyshev distance between the supports.
    pub separation: usize,
}

/// Exact sparse evaluation of a two-point connected correlator.
pub fn connected_correlator(
    state: &SparseState,
    obs_a: &SiteObservable,
    site_a: usize,
    obs_b: &SiteObservable,
    site_b: usize,
) -> Result<CorrelatorRecord> {
    check_site(state, site_a)?;
    check_site(state, site_b)?;
    if site_a == site_b {
        return Err(Error::CoincidentSites);
    }
    let a_psi = apply_site_observable(state, obs_a, site_a);
    let b_psi = apply_site_observable(state, obs_b, site_b);
    // A Hermitian ⇒ ⟨ψ|A B|ψ⟩ = ⟨Aψ|Bψ⟩
    let joint = sparse_dot(&a_psi, &b_psi);
    let ea = sparse_dot(state.terms(), &a_psi);
    let eb = sparse_dot(state.terms(), &b_psi);
    let value = joint - ea * eb;
    let lattice = state.lattice();
    Ok(CorrelatorRecord {
        site_a: lattice.site_coords(site_a),
        site_b: lattice.site_coords(site_b),
        obs_a: obs_a.label().to_string(),
        obs_b: obs_b.label().to_string(),
        obs_norm_a: obs_a.operator_norm(),
        obs_norm_b: obs_b.operator_norm(),
        connected_value: value.re,
        imag_residue: value.im.abs(),
        separation: chebyshev(lattice, site_a, site_b),
    })
}

/// Worst connected correlator for one site pair, maximized over the full
/// Hermitian observable basis at each site.
#[derive(Clone, Debug, Serialize)]
pub struct PairSweepRecord {
    pub site_a: Vec<usize>,
    pub site_b: Vec<usize>,
    pub max_abs_connected: f64,
    pub separation: usize,
}

/// Exhaustive sweep: for every site pair, max |⟨AB⟩ − ⟨A⟩⟨B⟩| over the d²×d²
/// products of Hermitian basis observables; by bilinearity this bounds every
/// pair of unit-norm single-site observables up to the basis normalization.
pub fn connected_correlator_sweep(state: &SparseState) -> Result<Vec<PairSweepRecord>> {
    let lattice = state.lattice();
    let d = lattice.local_dim();
    let n = lattice.n_sites();
    let basis = SiteObservable::hermitian_basis(d);
    // precompute A|ψ⟩ and ⟨A⟩ per (site, basis element)
    let applied: Vec<Vec<(Vec<_>, Complex64)>> = (0..n)
        .into_par_iter()
        .map(|site| {
            basis
                .iter()
                .map(|obs| {
                    let v = apply_site_observable(state, obs, site);
                    let e = sparse_dot(state.terms(), &v);
                    (v, e)
                })
                .collect()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
        .collect();
    Ok(pairs
        .par_iter()
        .map(|&(s, t)| {
            let mut local: f64 = 0.0;
            for (av, ae) in &applied[s] {
                for (bv, be) in &applied[t] {
                    let connected = sparse_dot(av, bv) - ae * be;
                    local = local.max(connected.norm());
                }
            }
            PairSweepRecord {
                site_a: lattice.site_coords(s),
                site_b: lattice.site_coords(t),
                max_abs_connected: local,
                separation: chebyshev(lattice, s, t),
            }
        })
        .collect())
}

/// Largest |⟨AB⟩ − ⟨A⟩⟨B⟩| over all site pairs and the full Hermitian
/// observable basis at each site.
pub fn max_connected_correlator(state: &SparseState) -> Result<f64> {
    Ok(connected_correlator_sweep(state)?
        .into_iter()
        .map(|r| r.max_abs_connected)
        .fold(0.0, f64::max))
}

/// Per-region audit record.
#[derive(Clone, Debug, Serialize)]
pub struct RegionRecord {
    pub region: Region,
    pub schmidt_rank: usize,
    /// S_0 = log₂ rank in bits.
    pub s0: f64,
    /// log₂(2^{l_1···l_{D−1}}·l_D + 1) in bits.
    pub rank_bound_bits: f64,
    pub boundary: u64,
}

/// 2^{l_1···l_{D−1}}·l_D + 1, or None when too large to represent (then the
/// bound holds trivially for any reachable rank).
fn rank_bound_count(lengths: &[usize]) -> Option<u128> {
    let d = lengths.len();
    let cross: u128 = lengths[..d - 1].iter().map(|&l| l as u128).product();
    if cross >= 120 {
        return None;
    }
    Some((1u128 << cross) * lengths[d - 1] as u128 + 1)
}

fn rank_bound_bits(lengths: &[usize]) -> f64 {
    match rank_bound_count(lengths) {
        Some(count) => (count as f64).log2(),
        None => {
            let d = lengths.len();
            let cross: f64 = lengths[..d - 1].iter().map(|&l| l as f64).product();
            cross + (lengths[d - 1] as f64).log2()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SkippedRegion {
    pub region: Region,
    pub reason: String,
}

/// Verdict over a set of audit records; exposed separately so planted
/// violations can be shown to flip the outcome.
#[derive(Clone, Debug, Serialize)]
pub struct AuditVerdict {
    pub pass: bool,
    /// max over regions of s0/|∂A| — the smallest constant c the state
    /// satisfies the area law with.
    pub minimal_c: f64,
    /// Indices of violating records.
    pub violations: Vec<usize>,
}

/// Both inequalities in exact integer arithmetic:
/// rank ≤ 2^{l_1···l_{D−1}}·l_D + 1 and rank ≤ 2^|∂A|.
pub fn evaluate_audit(records: &[RegionRecord]) -> AuditVerdict {
    let mut violations = Vec::new();
    let mut minimal_c = 0.0_f64;
    for (i, rec) in records.iter().enumerate() {
        let rank = rec.schmidt_rank as u128;
        let bound_ok = match rank_bound_count(rec.region.lengths()) {
            Some(count) => rank <= count,
            None => true,
        };
        let boundary_ok = rec.boundary >= 128 || rank <= 1u128 << rec.boundary;
        if !(bound_ok && boundary_ok) {
            violations.push(i);
        }
        minimal_c = minimal_c.max(rec.s0 / rec.boundary as f64);
    }
    AuditVerdict { pass: violations.is_empty(), minimal_c, violations }
}

/// Full area-law audit of one state.
#[derive(Clone, Debug, Serialize)]
pub struct AreaLawAudit {
    pub records: Vec<RegionRecord>,
    pub skipped: Vec<SkippedRegion>,
    pub pass: bool,
    pub minimal_c: f64,
    pub violations: Vec<usize>,
}

/// Sweep all cubic regions up to `max_region_volume`, computing exact
/// Schmidt ranks and both area-law inequalities per region.
pub fn area_law_audit(state: &SparseState, max_region_volume: usize) -> Result<AreaLawAudit> {
    let lattice = state.lattice();
    let regions = enumerate_cubic_regions(lattice, max_region_volume);
    let outcomes: Vec<std::result::Result<RegionRecord, SkippedRegion>> = regions
        .into_par_iter()
        .map(|region| {
            let sites = region.sites(lattice).expect("enumerated regions are valid");
            let complement: Vec<usize> = {
                let mut mask = vec![false; lattice.n_sites()];
                for &s in &sites {
                    mask[s] = true;
                }
                (0..lattice.n_sites()).filter(|&s| !mask[s]).collect()
            };
            let smaller_side = distinct_restrictions(state, &sites)
                .min(distinct_restrictions(state, &complement));
            if smaller_side > GRAM_SIDE_CAP {
                return Err(SkippedRegion {
                    region,
                    reason: format!(
                        "Gram side {smaller_side} exceeds cap {GRAM_SIDE_CAP}"
                    ),
                });
            }
            let rank = schmidt_rank_sites(state, &sites)
                .expect("validated sites cannot fail");
            Ok(RegionRecord {
                s0: (rank as f64).log2(),
                rank_bound_bits: rank_bound_bits(region.lengths()),
                boundary: region.boundary(),
                schmidt_rank: rank,
                region,
            })
        })
        .collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(rec) => records.push(rec),
            Err(skip) => skipped.push(skip),
        }
    }
    let verdict = evaluate_audit(&records);
    Ok(AreaLawAudit {
        records,
        skipped,
        pass: verdict.pass,
        minimal_c: verdict.minimal_c,
        violations: verdict.violations,
    })
}

/// Site pattern used by decay sweeps; both sites sit at distance L−1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CorrelatorPattern {
    /// Both sites in the first hyperplane row: (0,…,0) and (L−1,0,…,0).
    SameRow,
    /// Opposite lattice corners: (0,…,0) and (L−1,…,L−1).
    DifferentRow,
}

impl CorrelatorPattern {
    /// The two site indices for a given lattice.
    pub fn sites(&self, lattice: &Lattice) -> (usize, usize) {
        let dim = lattice.dim();
        let far = lattice.side() - 1;
        let a = lattice.site_index(&vec![0; dim]);
        let b = match self {
            CorrelatorPattern::SameRow => {
                let mut c = vec![0; dim];
                c[0] = far;
                lattice.site_index(&c)
            }
            CorrelatorPattern::DifferentRow => lattice.site_index(&vec![far; dim]),
        };
        (a, b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayEntry {
    pub l: usize,
    pub connected_value: f64,
    pub separation: usize,
}

/// Correlator series over increasing L with a log-log fit.
#[derive(Clone, Debug, Serialize)]
pub struct DecayProfile {
    pub entries: Vec<DecayEntry>,
    /// Log-log least-squares exponent of |value| vs L; None when some value
    /// vanishes (flagged instead of fitted).
    pub fitted_exponent: Option<f64>,
    /// max over the series of |L·value|.
    pub max_l_value: f64,
}

/// Evaluate the connected correlator of a state family over a sweep of side
/// lengths.
pub fn decay_profile(
    family: &dyn Fn(usize) -> Result<SparseState>,
    obs_a: &SiteObservable,
    obs_b: &SiteObservable,
    pattern: CorrelatorPattern,
    ls: &[usize],
) -> Result<DecayProfile> {
    if ls.is_empty() {
        return Err(Error::out_of_range("decay sweep", "nonempty L list", "[]"));
    }
    if ls.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::out_of_range(
            "decay sweep",
            "strictly increasing L list",
            format!("{ls:?}"),
        ));
    }
    let mut entries = Vec::with_capacity(ls.len());
    for &l in ls {
        let state = family(l)?;
        let (sa, sb) = pattern.sites(state.lattice());
        let record = connected_correlator(&state, obs_a, sa, obs_b, sb)?;
        entries.push(DecayEntry {
            l,
            connected_value: record.connected_value,
            separation: record.separation,
        });
    }
    let degenerate = entries.iter().any(|e| e.connected_value.abs() < 1e-14);
    let fitted_exponent = if degenerate {
        None
    } else {
        // least squares on (ln L, ln |value|)
        let pts: Vec<(f64, f64)> = entries
            .iter()
            .map(|e| ((e.l as f64).ln(), e.connected_value.abs().ln()))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = n * sxx - sx * sx;
        if denom.abs() < 1e-30 {
            None
        } else {
            Some((n * sxy - sx * sy) / denom)
        }
    };
    let max_l_value = entries
        .iter()
        .map(|e| (e.l as f64 * e.connected_value).abs())
        .fold(0.0, f64::max);
    Ok(DecayProfile { entries, fitted_exponent, max_l_value })
}

/// Trace norm of tr_Ā(R_j|ψ⟩⟨ψ|R_k†) for the rotated copies of the area-law
/// state built from φ.
///
/// Appendix-B regions are assumed to avoid the rotation overlap lines;
/// the value is computed for any valid region and simply reported.
pub fn cross_term_check(
    phi: &SparseState,
    lattice: &Lattice,
    j: usize,
    k: usize,
    region: &Region,
) -> Result<f64> {
    if j == k {
        return Err(Error::CoincidentAxes);
    }
    let copies = rotation_copies(phi, lattice)?;
    let get = |axis: usize| -> Result<&SparseState> {
        copies
            .get(axis.wrapping_sub(1))
            .ok_or(Error::AxisOutOfRange { axis, dim: lattice.dim() })
    };
    let u = get(j)?;
    let v = get(k)?;
    let sites = region.sites(lattice)?;
    let env: Vec<usize> = {
        let mut mask = vec![false; lattice.n_sites()];
        for &s in &sites {
            mask[s] = true;
        }
        (0..lattice.n_sites()).filter(|&s| !mask[s]).collect()
    };
    let groups_u = group_by_restriction(u, &sites, &env);
    let groups_v = group_by_restriction(v, &sites, &env);
    // X[a, a'] = Σ_b u(a,b)·conj(v(a',b)) = ⟨v_env(a')|u_env(a)⟩
    let mut x = DMatrix::zeros(groups_u.len(), groups_v.len());
    for (row, (_, env_u)) in groups_u.iter().enumerate() {
        for (col, (_, env_v)) in groups_v.iter().enumerate() {
            x[(row, col)] = sparse_dot(env_v, env_u);
        }
    }
    Ok(trace_norm(&x))
}

/// Symmetry families for invariance checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryGroup {
    Translations,
    Rotations,
    Reflections,
}

/// Worst-case infidelity max_U (1 − |⟨ψ|Uψ⟩|²) over the group's generators.
pub fn invariance_check(state: &SparseState, group: SymmetryGroup) -> Result<f64> {
    let lattice = state.lattice();
    let mut generators = Vec::new();
    match group {
        SymmetryGroup::Translations => {
            for axis in 1..=lattice.dim() {
                generators.push(lattice.translation(axis, 1)?);
            }
        }
        SymmetryGroup::Rotations => {
            for a in 1..=lattice.dim() {
                for b in a + 1..=lattice.dim() {
                    generators.push(lattice.plane_rotation(a, b)?);
                }
            }
        }
        SymmetryGroup::Reflections => {
            for axis in 1..=lattice.dim() {
                generators.push(lattice.reflection(axis)?);
            }
        }
    }
    let mut worst = 0.0_f64;
    for g in &generators {
        let moved = state.apply_symmetry(g)?;
        worst = worst.max(1.0 - state.fidelity(&moved)?);
    }
    Ok(worst)
}

/// ε-net counting arithmetic of the subspace-dimension argument.
#[derive(Clone, Debug, Serialize)]
pub struct CountingReport {
    pub q: u128,
    pub epsilon: f64,
    /// q·log₂(1/ε).
    pub net_exponent_bits: f64,
    pub describable_exponent_bits: u64,
    /// net_exponent_bits > describable_exponent_bits.
    pub exceeds_budget: bool,
    pub note: String,
}

/// Compare the ε-net exponent q·log₂(1/ε) against a classical description
/// budget (asymptotic constants normalized to 1).
pub fn counting_report(q: u128, epsilon: f64, budget_bits: u64) -> Result<CountingReport> {
    if q < 2 {
        return Err(Error::out_of_range("subspace dimension", "q ≥ 2", q));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::out_of_range("epsilon", "0 < ε < 1", epsilon));
    }
    if budget_bits == 0 {
        return Err(Error::out_of_range("budget", "budget_bits ≥ 1", budget_bits));
    }
    let net_exponent_bits = q as f64 * (1.0 / epsilon).log2();
    Ok(CountingReport {
        q,
        epsilon,
        net_exponent_bits,
        describable_exponent_bits: budget_bits,
        exceeds_budget: net_exponent_bits > budget_bits as f64,
        note: "net size (1/eps)^q and description budget compared with all \
               asymptotic constants normalized to 1"
            .to_string(),
    })
}

/// q(L) = ceil(2^{L^(D−1)} / L^(D−1)): the dimension of the translationally
/// invariant subspace reachable by the construction.
pub fn construction_subspace_dim(dim: usize, side: usize) -> Result<u128> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if side < 2 {
        return Err(Error::out_of_range("lattice side", "L ≥ 2", side));
    }
    let exponent = (side as u128).checked_pow(dim as u32 - 1).ok_or_else(|| {
        Error::out_of_range("cross-section size", "L^(D−1) < 2^32", format!("{side}^{}", dim - 1))
    })?;
    if exponent >= 127 {
        return Err(Error::out_of_range(
            "cross-section size",
            "L^(D−1) ≤ 126 for exact integer arithmetic",
            exponent,
        ));
    }
    let n = exponent as u32;
    Ok(((1u128 << n) + exponent - 1) / exponent)
}
