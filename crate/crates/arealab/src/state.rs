//! Sparse pure states on qudit lattices.
//!
//! A state is a canonical term list: configurations strictly increasing,
//! amplitudes with magnitude ≥ 10⁻¹⁴, squared norm within 10⁻¹² of 1.
//! Canonical form makes equality, inner products, and serialization
//! deterministic — two equal states have byte-identical JSON.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Config, MAX_SITES};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SitePermutation};

/// Amplitudes below this magnitude are dropped during canonicalization.
pub const AMPLITUDE_FLOOR: f64 = 1e-14;
/// Allowed deviation of the squared norm from 1.
pub const NORM_TOL: f64 = 1e-12;

/// Canonical sparse pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    lattice: Lattice,
    terms: Vec<(Config, Complex64)>,
}

/// Sort by configuration, merge duplicates, drop sub-floor amplitudes.
pub(crate) fn canonicalize(terms: &mut Vec<(Config, Complex64)>) {
    terms.sort_unstable_by_key(|&(c, _)| c);
    let mut out = 0;
    let mut i = 0;
    while i < terms.len() {
        let (config, mut amp) = terms[i];
        i += 1;
        while i < terms.len() && terms[i].0 == config {
            amp += terms[i].1;
            i += 1;
        }
        if amp.norm() >= AMPLITUDE_FLOOR {
            terms[out] = (config, amp);
            out += 1;
        }
    }
    terms.truncate(out);
}

impl SparseState {
    fn validate_shape(lattice: &Lattice, terms: &[(Config, Complex64)]) -> Result<()> {
        let n = lattice.n_sites();
        if n > MAX_SITES {
            return Err(Error::TooManySites { sites: n, max: MAX_SITES });
        }
        let d = lattice.local_dim() as u8;
        for &(config, _) in terms {
            for site in 0..n {
                let digit = config.digit(site);
                if digit >= d {
                    return Err(Error::BadDigit { site, digit, d: d as usize });
                }
            }
            // digits beyond the lattice must be zero
            for site in n..MAX_SITES {
                if config.digit(site) != 0 {
                    return Err(Error::BadDigit {
                        site,
                        digit: config.digit(site),
                        d: 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// Build from terms; rejects states whose norm is not 1 within [`NORM_TOL`].
    pub fn new(lattice: Lattice, mut terms: Vec<(Config, Complex64)>) -> Result<SparseState> {
        Self::validate_shape(&lattice, &terms)?;
        canonicalize(&mut terms);
        let norm = terms.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm, tol: NORM_TOL });
        }
        Ok(SparseState { lattice, terms })
    }

    /// Build from terms, rescaling to unit norm.
    pub fn normalized(lattice: Lattice, mut terms: Vec<(Config, Complex64)>) -> Result<SparseState> {
        Self::validate_shape(&lattice, &terms)?;
        canonicalize(&mut terms);
        let norm = terms.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < AMPLITUDE_FLOOR {
            return Err(Error::ZeroState);
        }
        for (_, a) in terms.iter_mut() {
            *a /= norm;
        }
        canonicalize(&mut terms); // rescaling may push entries across the floor
        Ok(SparseState { lattice, terms })
    }

    /// Basis state |config⟩.
    pub fn basis_state(lattice: Lattice, config: Config) -> Result<SparseState> {
        SparseState::new(lattice, vec![(config, Complex64::ONE)])
    }

    /// Equal-weight superposition of distinct configurations.
    pub fn uniform_superposition(lattice: Lattice, configs: &[Config]) -> Result<SparseState> {
        let mut distinct = configs.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.is_empty() {
            return Err(Error::ZeroState);
        }
        let amp = Complex64::new(1.0 / (distinct.len() as f64).sqrt(), 0.0);
        SparseState::new(lattice, distinct.into_iter().map(|c| (c, amp)).collect())
    }

    /// Linear combination Σ coeff·state; inputs must share a lattice, the
    /// result is rescaled to unit norm.
    pub fn combination(parts: &[(Complex64, &SparseState)]) -> Result<SparseState> {
        let first = parts.first().ok_or(Error::ZeroState)?.1;
        let lattice = *first.lattice();
        let mut terms = Vec::new();
        for &(coeff, state) in parts {
            if state.lattice() != &lattice {
                return Err(Error::LatticeMismatch);
            }
            terms.extend(state.terms.iter().map(|&(c, a)| (c, coeff * a)));
        }
        SparseState::normalized(lattice, terms)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn terms(&self) -> &[(Config, Complex64)] {
        &self.terms
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    /// Amplitude ⟨config|ψ⟩ (zero off the support).
    pub fn amplitude(&self, config: Config) -> Complex64 {
        match self.terms.binary_search_by_key(&config, |&(c, _)| c) {
            Ok(i) => self.terms[i].1,
            Err(_) => Complex64::ZERO,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩ by merging the sorted term lists.
    pub fn inner(&self, other: &SparseState) -> Result<Complex64> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        let (mut i, mut j) = (0, 0);
        let mut acc = Complex64::ZERO;
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.terms[i].1.conj() * other.terms[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &SparseState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Re-index configurations by a site permutation; norm preserved exactly.
    pub fn apply_symmetry(&self, perm: &SitePermutation) -> Result<SparseState> {
        if perm.len() != self.lattice.n_sites() {
            return Err(Error::NotAPermutation { sites: perm.len() });
        }
        let mut terms: Vec<(Config, Complex64)> = self
            .terms
            .iter()
            .map(|&(c, a)| (c.apply_permutation(perm.map()), a))
            .collect();
        // a bijection cannot merge terms, so only re-sorting is needed
        terms.sort_unstable_by_key(|&(c, _)| c);
        Ok(SparseState { lattice: self.lattice, terms })
    }

    pub fn to_json(&self) -> String {
        let n = self.lattice.n_sites();
        let file = StateFile {
            dim: self.lattice.dim(),
            side: self.lattice.side(),
            local_dim: self.lattice.local_dim(),
            terms: self
                .terms
                .iter()
                .map(|&(c, a)| (c.to_digit_string(n), a.re, a.im))
                .collect(),
        };
        serde_json::to_string(&file).expect("state serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<SparseState> {
        let file: StateFile = serde_json::from_str(json)?;
        let lattice = Lattice::new(file.dim, file.side, file.local_dim)?;
        let n = lattice.n_sites();
        let mut terms = Vec::with_capacity(file.terms.len());
        for (digits, re, im) in file.terms {
            if digits.len() != n {
                return Err(Error::Parse(format!(
                    "configuration {digits:?} has {} digits, lattice has {n} sites",
                    digits.len()
                )));
            }
            terms.push((Config::parse(&digits)?, Complex64::new(re, im)));
        }
        SparseState::new(lattice, terms)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(fs::write(path, self.to_json())?)
    }

    pub fn load(path: &Path) -> Result<SparseState> {
        SparseState::from_json(&fs::read_to_string(path)?)
    }
}

/// On-disk layout: {"D":…, "L":…, "d":…, "terms":[["digits", re, im], …]}.
#[derive(Serialize, Deserialize)]
struct StateFile {
    #[serde(rename = "D")]
    dim: usize,
    #[serde(rename = "L")]
    side: usize,
    #[serde(rename = "d")]
    local_dim: usize,
    terms: Vec<(String, f64, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qutrit_pair() -> Lattice {
        Lattice::new(1, 2, 3).unwrap()
    }

    fn bell() -> SparseState {
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        SparseState::new(
            qutrit_pair(),
            vec![
                (Config::parse("11").unwrap(), amp),
                (Config::parse("22").unwrap(), amp),
            ],
        )
        .unwrap()
    }

    #[test]
    fn canonical_form_sorts_and_merges() {
        let l = qutrit_pair();
        let a = Complex64::new(0.5, 0.0);
        let s = SparseState::normalized(
            l,
            vec![
                (Config::parse("22").unwrap(), a),
                (Config::parse("11").unwrap(), a),
                (Config::parse("22").unwrap(), Complex64::new(0.5, 0.5)),
                (Config::parse("02").unwrap(), Complex64::new(0.5, -0.5)),
            ],
        )
        .unwrap();
        let strings: Vec<String> = s.terms().iter().map(|(c, _)| c.to_digit_string(2)).collect();
        assert_eq!(strings, vec!["02", "11", "22"]);
        // "22" terms merge to 1 + i/2 before the global rescale by 1/√2
        let merged = s.amplitude(Config::parse("22").unwrap()) * std::f64::consts::SQRT_2;
        assert!((merged - Complex64::new(1.0, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn norm_is_enforced() {
        let l = qutrit_pair();
        let bad = SparseState::new(l, vec![(Config::ZERO, Complex64::new(0.5, 0.0))]);
        assert!(matches!(bad, Err(Error::NotNormalized { .. })));
        let fixed = SparseState::normalized(l, vec![(Config::ZERO, Complex64::new(0.5, 0.0))]).unwrap();
        assert!((fixed.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn digit_bounds_are_enforced() {
        let l = Lattice::new(1, 2, 2).unwrap();
        let bad = SparseState::basis_state(l, Config::parse("12").unwrap());
        assert!(matches!(bad, Err(Error::BadDigit { .. })));
    }

    #[test]
    fn amplitude_floor_drops_dust() {
        let l = qutrit_pair();
        let s = SparseState::new(
            l,
            vec![
                (Config::parse("11").unwrap(), Complex64::ONE),
                (Config::parse("22").unwrap(), Complex64::new(1e-15, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(s.support_size(), 1);
    }

    #[test]
    fn inner_product_examples() {
        let l = qutrit_pair();
        let zero = SparseState::basis_state(l, Config::parse("00").unwrap()).unwrap();
        let ones = SparseState::basis_state(l, Config::parse("11").unwrap()).unwrap();
        assert_eq!(zero.inner(&ones).unwrap(), Complex64::ZERO);
        assert!((bell().inner(&bell()).unwrap().re - 1.0).abs() < 1e-15);
        let plus = SparseState::uniform_superposition(
            l,
            &[Config::parse("00").unwrap(), Config::parse("11").unwrap()],
        )
        .unwrap();
        let got = plus.inner(&ones).unwrap().re;
        assert!((got - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn symmetry_application() {
        let l = Lattice::new(1, 2, 3).unwrap();
        let s = SparseState::basis_state(l, Config::parse("10").unwrap()).unwrap();
        let shift = l.translation(1, 1).unwrap();
        let shifted = s.apply_symmetry(&shift).unwrap();
        assert_eq!(shifted.terms()[0].0, Config::parse("01").unwrap());
        let back = shifted.apply_symmetry(&shift).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn symmetry_preserves_inner_products() {
        let l = Lattice::new(2, 2, 3).unwrap();
        let a = SparseState::uniform_superposition(
            l,
            &[Config::parse("1100").unwrap(), Config::parse("0011").unwrap()],
        )
        .unwrap();
        let b = SparseState::uniform_superposition(
            l,
            &[Config::parse("1100").unwrap(), Config::parse("2200").unwrap()],
        )
        .unwrap();
        let r = l.plane_rotation(1, 2).unwrap();
        let lhs = a.inner(&b).unwrap();
        let rhs = a.apply_symmetry(&r).unwrap().inner(&b.apply_symmetry(&r).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn json_roundtrip_is_canonical() {
        let s = bell();
        let json = s.to_json();
        assert!(json.contains("\"D\":1") && json.contains("\"terms\":[[\"11\""));
        let back = SparseState::from_json(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn json_rejects_malformed_input() {
        assert!(SparseState::from_json("{}").is_err());
        // wrong digit count
        let bad = r#"{"D":1,"L":2,"d":3,"terms":[["1",1.0,0.0]]}"#;
        assert!(SparseState::from_json(bad).is_err());
        // not normalized
        let bad2 = r#"{"D":1,"L":2,"d":3,"terms":[["11",0.5,0.0]]}"#;
        assert!(matches!(SparseState::from_json(bad2), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn combination_builds_unit_norm() {
        let l = qutrit_pair();
        let a = SparseState::basis_state(l, Config::parse("11").unwrap()).unwrap();
        let b = SparseState::basis_state(l, Config::parse("22").unwrap()).unwrap();
        let c = Complex64::ONE;
        let mix = SparseState::combination(&[(c, &a), (c, &b)]).unwrap();
        assert!((mix.fidelity(&bell()).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(mix.support_size(), 2);
        // destructive combination collapses to nothing
        let zero = SparseState::combination(&[(c, &a), (-c, &a)]);
        assert!(matches!(zero, Err(Error::ZeroState)));
    }
}
