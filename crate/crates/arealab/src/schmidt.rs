//! Schmidt spectra, Renyi entropies, and dense reduced density matrices.
//!
//! The sparse route groups the support by its restriction to the region A and
//! diagonalizes the Gram matrix of the induced environment vectors on Ā; its
//! cost scales with the square of the support size, never with d^|A|. The
//! dense route builds ρ_A explicitly (capped at 3^10 dimensions) and serves
//! as the oracle the sparse route is validated against. Entropies follow
//! S_α = (1/(1−α))·log₂ tr(ρ^α) in bits, with dedicated branches at
//! α ∈ {0, 1, ∞}.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::state::SparseState;

/// Relative cutoff below which a probability does not count towards the rank.
pub const RANK_REL_TOL: f64 = 1e-12;
/// Allowed deviation of a Schmidt spectrum's total weight from 1.
pub const SPECTRUM_SUM_TOL: f64 = 1e-10;
/// Default cap on the dense reduced-density dimension (3^10).
pub const DEFAULT_DENSE_CAP: usize = 59049;

/// Descending, nonnegative Schmidt probabilities of a bipartition.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    probabilities: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Wrap externally supplied probabilities (validated, kept verbatim).
    pub fn from_probabilities(mut probabilities: Vec<f64>) -> Result<SchmidtSpectrum> {
        if probabilities.is_empty() {
            return Err(Error::ZeroState);
        }
        if let Some(&bad) = probabilities.iter().find(|&&p| p < 0.0) {
            return Err(Error::NegativeProbability { value: bad });
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::SpectrumNotNormalized { sum, tol: SPECTRUM_SUM_TOL });
        }
        probabilities.sort_unstable_by(|a, b| b.partial_cmp(a).expect("no NaN probabilities"));
        Ok(SchmidtSpectrum { probabilities })
    }

    /// Clean raw eigenvalues: clamp tiny negatives, drop entries at or below
    /// the relative rank cutoff, sort descending.
    fn from_eigenvalues(eigenvalues: impl IntoIterator<Item = f64>) -> SchmidtSpectrum {
        let mut probabilities: Vec<f64> = eigenvalues.into_iter().map(|p| p.max(0.0)).collect();
        let max = probabilities.iter().cloned().fold(0.0_f64, f64::max);
        probabilities.retain(|&p| p > RANK_REL_TOL * max);
        probabilities.sort_unstable_by(|a, b| b.partial_cmp(a).expect("no NaN eigenvalues"));
        SchmidtSpectrum { probabilities }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Count of probabilities above the relative rank cutoff.
    pub fn rank(&self) -> usize {
        let max = self.probabilities.first().copied().unwrap_or(0.0);
        self.probabilities.iter().filter(|&&p| p > RANK_REL_TOL * max).count()
    }

    /// Renyi entropy S_α in bits; α may be any nonnegative real or +∞.
    ///
    /// S_0 = log₂ rank, S_1 = −Σ p log₂ p, S_∞ = −log₂ max p,
    /// otherwise S_α = (1/(1−α))·log₂ Σ p^α.
    pub fn renyi_entropy(&self, alpha: f64) -> Result<f64> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(Error::NegativeOrder { alpha });
        }
        if self.probabilities.is_empty() {
            return Err(Error::ZeroState);
        }
        if alpha == 0.0 {
            return Ok((self.rank() as f64).log2());
        }
        if alpha == 1.0 {
            let s = self
                .probabilities
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| -p * p.log2())
                .sum();
            return Ok(s);
        }
        if alpha.is_infinite() {
            return Ok(-self.probabilities[0].log2());
        }
        let z: f64 = self.probabilities.iter().filter(|&&p| p > 0.0).map(|&p| p.powf(alpha)).sum();
        Ok(z.log2() / (1.0 - alpha))
    }
}

fn check_sites(state: &SparseState, sites: &[usize]) -> Result<Vec<usize>> {
    let n = state.lattice().n_sites();
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateSite { site: pair[0] });
        }
    }
    if let Some(&site) = sorted.last() {
        if site >= n {
            return Err(Error::SiteOutOfRange { site, sites: n });
        }
    }
    Ok(sorted)
}

fn complement_of(n: usize, sorted_sites: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; n];
    for &s in sorted_sites {
        mask[s] = true;
    }
    (0..n).filter(|&s| !mask[s]).collect()
}

/// Support grouped by restriction to `sites`; each group carries its sorted
/// environment vector over `env_sites`. Groups are ordered by restriction.
pub(crate) fn group_by_restriction(
    state: &SparseState,
    sites: &[usize],
    env_sites: &[usize],
) -> Vec<(Config, Vec<(Config, Complex64)>)> {
    let mut groups: HashMap<Config, Vec<(Config, Complex64)>> = HashMap::new();
    for &(config, amp) in state.terms() {
        groups
            .entry(config.restrict(sites))
            .or_default()
            .push((config.restrict(env_sites), amp));
    }
    let mut out: Vec<(Config, Vec<(Config, Complex64)>)> = groups.into_iter().collect();
    out.sort_unstable_by_key(|&(key, _)| key);
    for (_, env) in out.iter_mut() {
        env.sort_unstable_by_key(|&(c, _)| c);
    }
    out
}

/// ⟨a|b⟩ for sorted sparse vectors.
pub(crate) fn sparse_dot(a: &[(Config, Complex64)], b: &[(Config, Complex64)]) -> Complex64 {
    let (mut i, mut j) = (0, 0);
    let mut acc = Complex64::ZERO;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Hermitian Gram matrix of the environment vectors of each restriction group.
fn gram_matrix(groups: &[(Config, Vec<(Config, Complex64)>)]) -> DMatrix<Complex64> {
    let r = groups.len();
    let mut g = DMatrix::zeros(r, r);
    for i in 0..r {
        for j in i..r {
            let v = sparse_dot(&groups[i].1, &groups[j].1);
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    g
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_unstable_by(|a, b| b.partial_cmp(a).expect("no NaN eigenvalues"));
    ev
}

/// Schmidt spectrum across (region, complement).
pub fn schmidt_spectrum(state: &SparseState, region: &Region) -> Result<SchmidtSpectrum> {
    schmidt_spectrum_sites(state, &region.sites(state.lattice())?)
}

/// Schmidt spectrum for an explicit site list.
pub fn schmidt_spectrum_sites(state: &SparseState, sites: &[usize]) -> Result<SchmidtSpectrum> {
    let sorted = check_sites(state, sites)?;
    let env = complement_of(state.lattice().n_sites(), &sorted);
    let groups = group_by_restriction(state, &sorted, &env);
    let gram = gram_matrix(&groups);
    let spectrum = SchmidtSpectrum::from_eigenvalues(hermitian_eigenvalues(&gram));
    let sum: f64 = spectrum.probabilities.iter().sum();
    if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
        return Err(Error::SpectrumNotNormalized { sum, tol: SPECTRUM_SUM_TOL });
    }
    Ok(spectrum)
}

/// Exact Schmidt rank across (region, complement).
///
/// Runs a pivoted Cholesky factorization on the Gram matrix of whichever side
/// has fewer distinct restrictions (both sides of a pure state share one
/// rank), stopping at the relative pivot cutoff [`RANK_REL_TOL`].
pub fn schmidt_rank(state: &SparseState, region: &Region) -> Result<usize> {
    schmidt_rank_sites(state, &region.sites(state.lattice())?)
}

/// Exact Schmidt rank for an explicit site list.
pub fn schmidt_rank_sites(state: &SparseState, sites: &[usize]) -> Result<usize> {
    let sorted = check_sites(state, sites)?;
    let env = complement_of(state.lattice().n_sites(), &sorted);
    let groups_a = group_by_restriction(state, &sorted, &env);
    let groups = if distinct_restrictions(state, &env) < groups_a.len() {
        group_by_restriction(state, &env, &sorted)
    } else {
        groups_a
    };
    Ok(hermitian_psd_rank(gram_matrix(&groups), RANK_REL_TOL))
}

pub(crate) fn distinct_restrictions(state: &SparseState, sites: &[usize]) -> usize {
    let mut keys: Vec<Config> = state.terms().iter().map(|&(c, _)| c.restrict(sites)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

/// Rank of a Hermitian PSD matrix by diagonally pivoted Cholesky with a
/// relative pivot cutoff.
fn hermitian_psd_rank(mut g: DMatrix<Complex64>, rel_tol: f64) -> usize {
    let n = g.nrows();
    let mut diag: Vec<f64> = (0..n).map(|i| g[(i, i)].re).collect();
    let max0 = diag.iter().cloned().fold(0.0_f64, f64::max);
    if max0 <= 0.0 {
        return 0;
    }
    let tol = rel_tol * max0;
    let mut rank = 0;
    for k in 0..n {
        let (p, dmax) = diag[k..]
            .iter()
            .enumerate()
            .map(|(i, &d)| (k + i, d))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("no NaN pivots"))
            .expect("nonempty pivot range");
        if dmax <= tol {
            break;
        }
        g.swap_rows(k, p);
        g.swap_columns(k, p);
        diag.swap(k, p);
        rank += 1;
        // Schur complement of the pivot
        let d = diag[k];
        for i in k + 1..n {
            let gik = g[(i, k)];
            for j in k + 1..n {
                let upd = gik * g[(j, k)].conj() / d;
                g[(i, j)] -= upd;
            }
        }
        for (i, entry) in diag.iter_mut().enumerate().skip(k + 1) {
            *entry = g[(i, i)].re;
        }
    }
    rank
}

/// Dense reduced density matrix ρ_A for a region, default dimension cap.
pub fn reduced_density_dense(state: &SparseState, region: &Region) -> Result<DMatrix<Complex64>> {
    reduced_density_dense_sites(state, &region.sites(state.lattice())?, DEFAULT_DENSE_CAP)
}

/// Dense ρ_A for an explicit site list and cap.
///
/// Rows/columns are indexed by the base-d value of the region digits, first
/// listed site most significant — the same order digit strings sort in.
pub fn reduced_density_dense_sites(
    state: &SparseState,
    sites: &[usize],
    cap: usize,
) -> Result<DMatrix<Complex64>> {
    let sorted = check_sites(state, sites)?;
    let d = state.lattice().local_dim();
    let mut dim: u128 = 1;
    for _ in 0..sorted.len() {
        dim = dim.saturating_mul(d as u128);
        if dim > cap as u128 {
            return Err(Error::DenseCapExceeded { dim: dim as usize, cap });
        }
    }
    let dim = dim as usize;
    // restricted configs carry their digits at positions 0..|A|
    let dense_index = |c: Config| -> usize {
        (0..sorted.len()).fold(0, |acc, j| acc * d + c.digit(j) as usize)
    };
    let env = complement_of(state.lattice().n_sites(), &sorted);
    // ρ_A[a, a'] = Σ_b ψ(a, b)·conj(ψ(a', b)): group by environment b
    let groups = group_by_restriction(state, &env, &sorted);
    let mut rho = DMatrix::zeros(dim, dim);
    for (_, members) in &groups {
        for &(ca, amp_a) in members {
            let ia = dense_index(ca);
            for &(cb, amp_b) in members {
                rho[(ia, dense_index(cb))] += amp_a * amp_b.conj();
            }
        }
    }
    Ok(rho)
}

/// Trace norm ‖m‖₁ = Σ singular values.
pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// Trace distance ½‖a − b‖₁ between Hermitian matrices.
pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    0.5 * trace_norm(&(a - b))
}
