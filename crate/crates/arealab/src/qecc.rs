//! Stabilizer-code machinery for the vanishing-correlation construction.
//!
//! A non-degenerate [[n, k, Δ]] code has the property that every reduced
//! state of a code-space state on ≤ Δ−1 qubits is maximally mixed; placing a
//! codeword on the top hyperplane of a qutrit lattice (qubits embedded as
//! 0↦|1⟩, 1↦|2⟩ against the |0⟩ bulk) therefore kills all single-site
//! connected correlators. The concrete code here is the five-qubit
//! [[5,1,3]] perfect code with cyclic generators XZZXI.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::schmidt::{reduced_density_dense_sites, trace_distance, DEFAULT_DENSE_CAP};
use crate::state::{canonicalize, SparseState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Multi-site Pauli operator, e.g. "XZZXI".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn paulis(&self) -> &[Pauli] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Two Pauli strings commute iff they anticommute on an even number of
    /// sites.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Apply to a qubit state term by term: X flips, Z applies (−1)^bit,
    /// Y = iXZ.
    pub fn apply(&self, state: &SparseState) -> Result<SparseState> {
        let n = state.lattice().n_sites();
        if state.lattice().local_dim() != 2 {
            return Err(Error::BadLocalDimension { d: state.lattice().local_dim() });
        }
        if self.len() != n {
            return Err(Error::BitLengthMismatch { a: self.len(), b: n });
        }
        let mut terms: Vec<(Config, Complex64)> = state
            .terms()
            .iter()
            .map(|&(config, amp)| self.apply_to_term(config, amp))
            .collect();
        terms.sort_unstable_by_key(|&(c, _)| c);
        // Pauli strings are unitary and map basis states to basis states, so
        // the result is canonical up to ordering
        SparseState::new(*state.lattice(), terms)
    }

    fn apply_to_term(&self, mut config: Config, mut amp: Complex64) -> (Config, Complex64) {
        for (site, &p) in self.0.iter().enumerate() {
            let bit = config.digit(site);
            match p {
                Pauli::I => {}
                Pauli::X => config = config.with_digit(site, 1 - bit),
                Pauli::Z => {
                    if bit == 1 {
                        amp = -amp;
                    }
                }
                Pauli::Y => {
                    // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                    amp *= if bit == 0 { Complex64::I } else { -Complex64::I };
                    config = config.with_digit(site, 1 - bit);
                }
            }
        }
        (config, amp)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<PauliString> {
        s.chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!("invalid Pauli letter {other:?}"))),
            })
            .collect::<Result<Vec<Pauli>>>()
            .map(PauliString)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Stabilizer code with explicit logical codewords.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerCode {
    n: usize,
    k: usize,
    distance: usize,
    generators: Vec<PauliString>,
    #[serde(skip)]
    codewords: Vec<SparseState>,
}

impl StabilizerCode {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn codewords(&self) -> &[SparseState] {
        &self.codewords
    }

    /// ⟨ψ|g|ψ⟩ for one generator.
    pub fn stabilizer_expectation(&self, state: &SparseState, generator: usize) -> Result<Complex64> {
        state.inner(&self.generators[generator].apply(state)?)
    }
}

/// Project a raw term list with (1 + g)/2.
fn project_onto_stabilizer(
    lattice: &Lattice,
    terms: &[(Config, Complex64)],
    g: &PauliString,
) -> Vec<(Config, Complex64)> {
    let mut out: Vec<(Config, Complex64)> = Vec::with_capacity(2 * terms.len());
    for &(config, amp) in terms {
        out.push((config, 0.5 * amp));
        let (gc, ga) = g.apply_to_term(config, amp);
        out.push((gc, 0.5 * ga));
    }
    debug_assert_eq!(lattice.local_dim(), 2);
    canonicalize(&mut out);
    out
}

/// The five-qubit [[5,1,3]] perfect code with cyclic generators XZZXI.
///
/// Codewords are produced by projecting |00000⟩ and |11111⟩ (the logical-X
/// flip of the first seed) onto the stabilizer space and normalizing; each
/// has 16 terms of amplitude ±1/4.
pub fn build_513() -> StabilizerCode {
    let lattice = Lattice::new(1, 5, 2).expect("five-qubit line");
    let generators: Vec<PauliString> = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|s| s.parse().expect("fixed generator strings"))
        .collect();
    let mut codewords = Vec::with_capacity(2);
    for seed_digits in [[0u8; 5], [1u8; 5]] {
        let mut terms = vec![(Config::from_digits(&seed_digits), Complex64::ONE)];
        for g in &generators {
            terms = project_onto_stabilizer(&lattice, &terms, g);
        }
        codewords.push(
            SparseState::normalized(lattice, terms).expect("projection leaves a nonzero state"),
        );
    }
    StabilizerCode { n: 5, k: 1, distance: 3, generators, codewords }
}

/// Σ_i logical_i·|codeword_i⟩ for a normalized logical vector of dimension
/// 2^k.
pub fn encode_logical(code: &StabilizerCode, logical: &[Complex64]) -> Result<SparseState> {
    if logical.len() != 1 << code.k {
        return Err(Error::out_of_range(
            "logical vector length",
            "2^k entries",
            logical.len(),
        ));
    }
    let norm = logical.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { norm, tol: 1e-12 });
    }
    let parts: Vec<(Complex64, &SparseState)> = logical
        .iter()
        .copied()
        .zip(code.codewords.iter())
        .collect();
    SparseState::combination(&parts)
}

/// Seeded random code-space state.
pub fn random_code_state(code: &StabilizerCode, seed: u64) -> Result<SparseState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut logical: Vec<Complex64> = (0..1usize << code.k)
        .map(|_| crate::constructions::complex_standard_normal(&mut rng))
        .collect();
    let norm = logical.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in logical.iter_mut() {
        *c /= norm;
    }
    encode_logical(code, &logical)
}

/// All size-`r` subsets of 0..n in lexicographic order.
pub(crate) fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that still has room
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - r + i {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Largest trace distance from the maximally mixed state over all reduced
/// states of `state` on `subset_size` sites.
pub fn max_marginal_mixedness_distance(state: &SparseState, subset_size: usize) -> Result<f64> {
    let n = state.lattice().n_sites();
    let d = state.lattice().local_dim();
    let dim = d.pow(subset_size as u32);
    let mixed = nalgebra::DMatrix::from_diagonal_element(
        dim,
        dim,
        Complex64::new(1.0 / dim as f64, 0.0),
    );
    let mut worst = 0.0_f64;
    for subset in subsets(n, subset_size) {
        let rho = reduced_density_dense_sites(state, &subset, DEFAULT_DENSE_CAP)?;
        worst = worst.max(trace_distance(&rho, &mixed));
    }
    Ok(worst)
}

/// Codeword embedded on the top hyperplane of a qutrit lattice.
#[derive(Clone, Debug)]
pub struct QeccAreaState {
    pub state: SparseState,
    /// True when the codeword was shorter than the hyperplane and the
    /// remaining top-row sites were filled with embedded |0⟩ qubits.
    pub padded: bool,
}

/// |C(χ)⟩ ⊗ |0⟩^{(L−1)·L^(D−1)}: the codeword occupies the top hyperplane
/// under the qubit embedding 0↦|1⟩, 1↦|2⟩, the bulk stays |0⟩.
///
/// With `pad` set, codewords shorter than the hyperplane are allowed and the
/// leftover top-row sites carry embedded |0⟩ qubits; the returned `padded`
/// flag records that this happened.
pub fn qecc_area_state(
    codeword: &SparseState,
    lattice: &Lattice,
    pad: bool,
) -> Result<QeccAreaState> {
    if lattice.local_dim() != 3 {
        return Err(Error::NotQutrit { d: lattice.local_dim() });
    }
    if codeword.lattice().local_dim() != 2 {
        return Err(Error::BadLocalDimension { d: codeword.lattice().local_dim() });
    }
    let n = codeword.lattice().n_sites();
    let plane = lattice.hyperplane_size();
    if n > plane || (n < plane && !pad) {
        return Err(Error::CodewordSizeMismatch { n, plane });
    }
    let mut terms = Vec::with_capacity(codeword.support_size());
    for &(config, amp) in codeword.terms() {
        let mut full = Config::ZERO;
        for site in 0..n {
            full = full.with_digit(site, 1 + config.digit(site));
        }
        for site in n..plane {
            full = full.with_digit(site, 1);
        }
        terms.push((full, amp));
    }
    Ok(QeccAreaState {
        state: SparseState::new(*lattice, terms)?,
        padded: n < plane,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_string_roundtrip() {
        let p: PauliString = "XZZXI".parse().unwrap();
        assert_eq!(p.to_string(), "XZZXI");
        assert_eq!(p.len(), 5);
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn pauli_action_on_basis_states() {
        let l = Lattice::new(1, 1, 2).unwrap();
        let zero = SparseState::basis_state(l, Config::parse("0").unwrap()).unwrap();
        let one = SparseState::basis_state(l, Config::parse("1").unwrap()).unwrap();

        let x: PauliString = "X".parse().unwrap();
        assert_eq!(x.apply(&zero).unwrap(), one);

        let z: PauliString = "Z".parse().unwrap();
        assert_eq!(z.apply(&one).unwrap().terms()[0].1, -Complex64::ONE);
        assert_eq!(z.apply(&zero).unwrap(), zero);

        let y: PauliString = "Y".parse().unwrap();
        assert_eq!(y.apply(&zero).unwrap().terms()[0].1, Complex64::I);
        assert_eq!(y.apply(&one).unwrap().terms()[0].1, -Complex64::I);
    }

    #[test]
    fn commutation_rules() {
        let a: PauliString = "XZ".parse().unwrap();
        let b: PauliString = "ZX".parse().unwrap();
        assert!(a.commutes_with(&b)); // two anticommuting sites
        let c: PauliString = "XI".parse().unwrap();
        let d: PauliString = "ZI".parse().unwrap();
        assert!(!c.commutes_with(&d));
    }

    #[test]
    fn five_qubit_code_structure() {
        let code = build_513();
        assert_eq!(code.generators().len(), 4);
        assert_eq!((code.n(), code.k(), code.distance()), (5, 1, 3));
        for (i, a) in code.generators().iter().enumerate() {
            for b in &code.generators()[i + 1..] {
                assert!(a.commutes_with(b));
            }
        }
        for cw in code.codewords() {
            assert_eq!(cw.support_size(), 16);
            for &(_, amp) in cw.terms() {
                assert!((amp.norm() - 0.25).abs() < 1e-14);
                assert!(amp.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn codewords_are_stabilized_and_orthonormal() {
        let code = build_513();
        for cw in code.codewords() {
            for g in 0..4 {
                let ev = code.stabilizer_expectation(cw, g).unwrap();
                assert!((ev - Complex64::ONE).norm() < 1e-12);
            }
        }
        let overlap = code.codewords()[0].inner(&code.codewords()[1]).unwrap();
        assert!(overlap.norm() < 1e-13);
    }

    #[test]
    fn encode_logical_basis_vectors() {
        let code = build_513();
        let zero = encode_logical(&code, &[Complex64::ONE, Complex64::ZERO]).unwrap();
        assert_eq!(&zero, &code.codewords()[0]);
        let bad = encode_logical(&code, &[Complex64::ONE, Complex64::ONE]);
        assert!(matches!(bad, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn plus_state_marginals_are_maximally_mixed() {
        let code = build_513();
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let plus = encode_logical(&code, &[amp, amp]).unwrap();
        let worst = max_marginal_mixedness_distance(&plus, 2).unwrap();
        assert!(worst < 1e-12, "worst marginal distance {worst}");
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(4, 4), vec![vec![0, 1, 2, 3]]);
        assert_eq!(subsets(3, 1), vec![vec![0], vec![1], vec![2]]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn area_state_embedding() {
        let qubits = Lattice::new(1, 2, 2).unwrap();
        let cw = SparseState::basis_state(qubits, Config::parse("11").unwrap()).unwrap();
        let lat = Lattice::new(2, 2, 3).unwrap();
        let embedded = qecc_area_state(&cw, &lat, false).unwrap();
        assert!(!embedded.padded);
        assert_eq!(embedded.state.terms()[0].0, Config::parse("2200").unwrap());
    }

    #[test]
    fn area_state_padding_rules() {
        let qubits = Lattice::new(1, 2, 2).unwrap();
        let cw = SparseState::basis_state(qubits, Config::parse("10").unwrap()).unwrap();
        let lat = Lattice::new(2, 3, 3).unwrap();
        assert!(matches!(
            qecc_area_state(&cw, &lat, false),
            Err(Error::CodewordSizeMismatch { .. })
        ));
        let padded = qecc_area_state(&cw, &lat, true).unwrap();
        assert!(padded.padded);
        assert_eq!(padded.state.terms()[0].0, Config::parse("211000000").unwrap());
    }

    #[test]
    fn five_qubit_area_state() {
        let code = build_513();
        let lat = Lattice::new(2, 5, 3).unwrap();
        let embedded = qecc_area_state(&code.codewords()[0], &lat, false).unwrap();
        assert!(!embedded.padded);
        assert_eq!(embedded.state.support_size(), 16);
        assert_eq!(embedded.state.lattice().n_sites(), 25);
    }

    #[test]
    fn random_code_states_are_deterministic() {
        let code = build_513();
        let a = random_code_state(&code, 3).unwrap();
        let b = random_code_state(&code, 3).unwrap();
        assert_eq!(a, b);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
