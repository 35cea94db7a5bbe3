//! Builders for the area-law state families.
//!
//! A hyperplane state φ lives on the (D−1)-dimensional cross-section of a
//! qutrit lattice, supported on symbols {1, 2}. Stacking φ into hyperplane k
//! against a |0⟩ bulk gives |ψ_{k}⟩; their equal-weight superposition
//! ψ = L^{−1/2} Σ_k |ψ_k⟩ is translationally invariant whenever φ is, and
//! Ψ = Σ_j R_j ψ (rotations taking the stacking axis onto each axis, exact
//! Gram normalization) adds full hypercubic symmetry when φ is mirror
//! symmetric. Orbit bases of the shift group span the translationally
//! invariant subspace; canonical representatives are lexicographic minima.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SitePermutation};
use crate::state::SparseState;

/// Enumeration cap for orbit bases (sites of the sub-lattice).
pub const TI_BASIS_CAP: usize = 24;

/// Orthonormal orbit basis of the translationally invariant subspace of
/// {1,2}^n on the sub-lattice.
#[derive(Clone, Debug)]
pub struct TISubspaceBasis {
    sub_lattice: Lattice,
    states: Vec<SparseState>,
}

/// As [`TISubspaceBasis`], but for the group extended by coordinate
/// reflections and axis exchanges; every element is mirror symmetric.
#[derive(Clone, Debug)]
pub struct MirrorTIBasis {
    sub_lattice: Lattice,
    states: Vec<SparseState>,
}

macro_rules! basis_accessors {
    ($ty:ident) => {
        impl $ty {
            pub fn sub_lattice(&self) -> &Lattice {
                &self.sub_lattice
            }

            /// Number of qubit sites n of the sub-lattice.
            pub fn n(&self) -> usize {
                self.sub_lattice.n_sites()
            }

            pub fn size(&self) -> usize {
                self.states.len()
            }

            pub fn states(&self) -> &[SparseState] {
                &self.states
            }

            pub fn state(&self, index: usize) -> Option<&SparseState> {
                self.states.get(index)
            }
        }
    };
}

basis_accessors!(TISubspaceBasis);
basis_accessors!(MirrorTIBasis);

fn check_sub_lattice(sub: &Lattice) -> Result<usize> {
    if sub.local_dim() != 3 {
        return Err(Error::NotQutrit { d: sub.local_dim() });
    }
    let n = sub.n_sites();
    if n > TI_BASIS_CAP {
        return Err(Error::EnumerationCapExceeded { n, cap: TI_BASIS_CAP });
    }
    Ok(n)
}

/// All shift permutations of the sub-lattice (the full translation group).
fn translation_group(sub: &Lattice) -> Result<Vec<SitePermutation>> {
    let mut group = vec![SitePermutation::identity(sub.n_sites())];
    for axis in 1..=sub.dim() {
        let step = sub.translation(axis, 1)?;
        let mut extended = Vec::with_capacity(group.len() * sub.side());
        for g in &group {
            let mut cur = g.clone();
            for _ in 0..sub.side() {
                extended.push(cur.clone());
                cur = cur.then(&step)?;
            }
        }
        group = extended;
    }
    Ok(group)
}

/// Closure of shifts, coordinate reflections, and axis exchanges.
fn mirror_group(sub: &Lattice) -> Result<Vec<SitePermutation>> {
    let mut generators = vec![SitePermutation::identity(sub.n_sites())];
    for axis in 1..=sub.dim() {
        generators.push(sub.translation(axis, 1)?);
        generators.push(sub.reflection(axis)?);
    }
    for a in 1..=sub.dim() {
        for b in a + 1..=sub.dim() {
            generators.push(sub.axis_transposition(a, b)?);
        }
    }
    // breadth-first closure under composition
    let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
    let mut frontier = vec![SitePermutation::identity(sub.n_sites())];
    seen.insert(frontier[0].map().to_vec());
    let mut group = Vec::new();
    while let Some(g) = frontier.pop() {
        group.push(g.clone());
        for gen in &generators {
            let next = g.then(gen)?;
            if seen.insert(next.map().to_vec()) {
                frontier.push(next);
            }
        }
    }
    group.sort_unstable_by(|a, b| a.map().cmp(b.map()));
    Ok(group)
}

/// Bit pattern of site i stored at bit n−1−i, so numeric order on patterns is
/// lexicographic order on the digit strings.
fn permute_bits(x: u32, n: usize, map: &[usize]) -> u32 {
    let mut y = 0;
    for (site, &image) in map.iter().enumerate() {
        y |= ((x >> (n - 1 - site)) & 1) << (n - 1 - image);
    }
    y
}

fn pattern_config(x: u32, n: usize) -> Config {
    let mut c = Config::ZERO;
    for site in 0..n {
        c = c.with_digit(site, 1 + ((x >> (n - 1 - site)) & 1) as u8);
    }
    c
}

/// Orbit states of {1,2}^n under a permutation group, one per orbit, in
/// order of their lexicographically minimal representative.
fn orbit_states(sub: &Lattice, group: &[SitePermutation]) -> Vec<SparseState> {
    let n = sub.n_sites();
    let mut states = Vec::new();
    let mut orbit = Vec::with_capacity(group.len());
    for x in 0..1u32 << n {
        orbit.clear();
        let mut minimal = x;
        for g in group {
            let y = permute_bits(x, n, g.map());
            minimal = minimal.min(y);
            if minimal < x {
                break;
            }
            orbit.push(y);
        }
        if minimal < x {
            continue; // not the canonical representative
        }
        orbit.sort_unstable();
        orbit.dedup();
        let configs: Vec<Config> = orbit.iter().map(|&y| pattern_config(y, n)).collect();
        states.push(
            SparseState::uniform_superposition(*sub, &configs)
                .expect("orbit states are normalized by construction"),
        );
    }
    states
}

/// Orbit basis under the shift group; size ≥ ceil(2^n / n).
pub fn ti_basis(sub: &Lattice) -> Result<TISubspaceBasis> {
    check_sub_lattice(sub)?;
    let group = translation_group(sub)?;
    Ok(TISubspaceBasis {
        sub_lattice: *sub,
        states: orbit_states(sub, &group),
    })
}

/// Orbit basis under shifts, reflections, and axis exchanges;
/// size ≥ 2^n / (2n·D!).
pub fn mirror_ti_basis(sub: &Lattice) -> Result<MirrorTIBasis> {
    check_sub_lattice(sub)?;
    let group = mirror_group(sub)?;
    Ok(MirrorTIBasis {
        sub_lattice: *sub,
        states: orbit_states(sub, &group),
    })
}

pub(crate) fn complex_standard_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    // Box-Muller from two uniforms
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let r = (-2.0 * (1.0 - u).ln()).sqrt();
    let theta = std::f64::consts::TAU * v;
    Complex64::new(r * theta.cos(), r * theta.sin())
}

fn random_span_element(states: &[SparseState], seed: u64) -> Result<SparseState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(Complex64, &SparseState)> = states
        .iter()
        .map(|s| (complex_standard_normal(&mut rng), s))
        .collect();
    SparseState::combination(&coeffs)
}

/// Seeded random unit vector in the span of a TI orbit basis.
pub fn random_combination(basis: &TISubspaceBasis, seed: u64) -> Result<SparseState> {
    random_span_element(&basis.states, seed)
}

/// Seeded random unit vector in the span of a mirror orbit basis.
pub fn random_mirror_combination(basis: &MirrorTIBasis, seed: u64) -> Result<SparseState> {
    random_span_element(&basis.states, seed)
}

/// GHZ-type hyperplane state (|1…1⟩ + |2…2⟩)/√2.
pub fn ghz_phi(sub: &Lattice) -> Result<SparseState> {
    check_sub_lattice(sub)?;
    let n = sub.n_sites();
    let ones = Config::from_digits(&vec![1; n]);
    let twos = Config::from_digits(&vec![2; n]);
    SparseState::uniform_superposition(*sub, &[ones, twos])
}

/// Product hyperplane state |1…1⟩.
pub fn product_phi(sub: &Lattice) -> Result<SparseState> {
    check_sub_lattice(sub)?;
    let ones = Config::from_digits(&vec![1; sub.n_sites()]);
    SparseState::basis_state(*sub, ones)
}

fn check_embedding(phi: &SparseState, lattice: &Lattice) -> Result<()> {
    if lattice.local_dim() != 3 {
        return Err(Error::NotQutrit { d: lattice.local_dim() });
    }
    let expected = lattice.cross_section()?;
    if phi.lattice() != &expected {
        return Err(Error::CrossSectionMismatch {
            expected: format!(
                "D={} L={} d={}",
                expected.dim(),
                expected.side(),
                expected.local_dim()
            ),
            got: format!(
                "D={} L={} d={}",
                phi.lattice().dim(),
                phi.lattice().side(),
                phi.lattice().local_dim()
            ),
        });
    }
    let plane = phi.lattice().n_sites();
    for &(config, _) in phi.terms() {
        for site in 0..plane {
            if config.digit(site) == 0 {
                return Err(Error::SymbolZero);
            }
        }
    }
    Ok(())
}

fn embedded_terms(
    phi: &SparseState,
    k: usize,
    lattice: &Lattice,
    scale: f64,
) -> Result<Vec<(Config, Complex64)>> {
    let range = lattice.hyperplane_sites(k)?;
    let plane = phi.lattice().n_sites();
    let mut terms = Vec::with_capacity(phi.support_size());
    for &(config, amp) in phi.terms() {
        let mut full = Config::ZERO;
        for site in 0..plane {
            full = full.with_digit(range.start + site, config.digit(site));
        }
        terms.push((full, amp * scale));
    }
    Ok(terms)
}

/// |0⟩^{⊗(k−1)p} ⊗ |φ⟩ ⊗ |0⟩^{⊗(L−k)p} with p = L^(D−1) — φ placed at the
/// k-th hyperplane against a |0⟩ bulk.
pub fn embed_hyperplane(phi: &SparseState, k: usize, lattice: &Lattice) -> Result<SparseState> {
    check_embedding(phi, lattice)?;
    SparseState::new(*lattice, embedded_terms(phi, k, lattice, 1.0)?)
}

/// ψ = L^{−1/2} Σ_k embed(φ, k): the Theorem-1-style area-law state.
///
/// φ should be translationally invariant on its sub-lattice for ψ to be
/// invariant under in-plane translations; invariance along the stacking axis
/// holds for any φ.
pub fn area_law_state(phi: &SparseState, lattice: &Lattice) -> Result<SparseState> {
    check_embedding(phi, lattice)?;
    let scale = 1.0 / (lattice.side() as f64).sqrt();
    let mut terms = Vec::with_capacity(lattice.side() * phi.support_size());
    for k in 1..=lattice.side() {
        terms.extend(embedded_terms(phi, k, lattice, scale)?);
    }
    SparseState::new(*lattice, terms)
}

/// The D rotated copies R_j ψ of the area-law state, stacking axis mapped
/// onto each axis j (j = D is the identity copy).
pub fn rotation_copies(phi: &SparseState, lattice: &Lattice) -> Result<Vec<SparseState>> {
    let psi = area_law_state(phi, lattice)?;
    (1..=lattice.dim())
        .map(|j| psi.apply_symmetry(&lattice.rotation_to_axis(j)?))
        .collect()
}

/// Pairwise overlaps ⟨R_jψ|R_kψ⟩ for j < k (1-based axis labels).
pub fn rotation_copy_overlaps(
    phi: &SparseState,
    lattice: &Lattice,
) -> Result<Vec<(usize, usize, Complex64)>> {
    let copies = rotation_copies(phi, lattice)?;
    let mut overlaps = Vec::new();
    for j in 0..copies.len() {
        for k in j + 1..copies.len() {
            overlaps.push((j + 1, k + 1, copies[j].inner(&copies[k])?));
        }
    }
    Ok(overlaps)
}

/// Ψ = Σ_j R_j ψ normalized by the exact Gram matrix of the copies: the
/// isotropic area-law state.
pub fn isotropic_area_law_state(phi: &SparseState, lattice: &Lattice) -> Result<SparseState> {
    if lattice.side() < 2 {
        return Err(Error::out_of_range("lattice side", "L ≥ 2", lattice.side()));
    }
    // mirror symmetry of φ, checked against every sub-lattice axis
    for axis in 1..=phi.lattice().dim() {
        let reflected = phi.apply_symmetry(&phi.lattice().reflection(axis)?)?;
        let fidelity = phi.fidelity(&reflected)?;
        if fidelity < 1.0 - 1e-10 {
            return Err(Error::NotMirrorSymmetric { infidelity: 1.0 - fidelity });
        }
    }
    let copies = rotation_copies(phi, lattice)?;
    // ‖Σ_j copy_j‖² = Σ_{jk} ⟨copy_j|copy_k⟩, the exact Gram normalization
    let mut total = Complex64::ZERO;
    for a in &copies {
        for b in &copies {
            total += a.inner(b)?;
        }
    }
    if total.re <= 0.0 {
        return Err(Error::ZeroState);
    }
    let scale = Complex64::new(1.0 / total.re.sqrt(), 0.0);
    let parts: Vec<(Complex64, &SparseState)> = copies.iter().map(|c| (scale, c)).collect();
    let mut terms = Vec::new();
    for (coeff, state) in parts {
        terms.extend(state.terms().iter().map(|&(c, a)| (c, coeff * a)));
    }
    SparseState::new(*lattice, terms)
}
