//! Packed basis configurations.
//!
//! A configuration assigns one digit from {0, …, d−1} to every lattice site.
//! With d ≤ 4 each digit fits in two bits, so a whole configuration packs
//! into a single `u128` holding up to 64 sites. Site 0 sits in the most
//! significant digit pair, which makes the numeric order of the packed words
//! coincide with lexicographic order on the digit strings — the order the
//! canonical term list and the serialization format use.

use crate::error::{Error, Result};

/// Upper limit on sites representable by one packed word.
pub const MAX_SITES: usize = 64;

/// Basis configuration over at most [`MAX_SITES`] sites, two bits per site.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config(u128);

impl Config {
    /// All-zeros configuration.
    pub const ZERO: Config = Config(0);

    #[inline]
    fn shift(site: usize) -> u32 {
        debug_assert!(site < MAX_SITES);
        (2 * (MAX_SITES - 1 - site)) as u32
    }

    /// Digit stored at `site`.
    #[inline]
    pub fn digit(self, site: usize) -> u8 {
        ((self.0 >> Self::shift(site)) & 0b11) as u8
    }

    /// Copy with the digit at `site` replaced.
    #[inline]
    #[must_use]
    pub fn with_digit(self, site: usize, digit: u8) -> Config {
        debug_assert!(digit < 4);
        let sh = Self::shift(site);
        Config((self.0 & !(0b11u128 << sh)) | (u128::from(digit) << sh))
    }

    /// Pack a digit slice, site 0 first.
    pub fn from_digits(digits: &[u8]) -> Config {
        assert!(digits.len() <= MAX_SITES, "too many digits for one word");
        let mut c = Config::ZERO;
        for (site, &digit) in digits.iter().enumerate() {
            assert!(digit < 4, "digit out of range");
            c = c.with_digit(site, digit);
        }
        c
    }

    /// Unpack the first `n` digits, site 0 first.
    pub fn digits(self, n: usize) -> Vec<u8> {
        (0..n).map(|site| self.digit(site)).collect()
    }

    /// Digit string of the first `n` sites, e.g. `"0120"`.
    pub fn to_digit_string(self, n: usize) -> String {
        (0..n).map(|site| char::from(b'0' + self.digit(site))).collect()
    }

    /// Parse a digit string; digits must be in `0..=3`.
    pub fn parse(s: &str) -> Result<Config> {
        if s.len() > MAX_SITES {
            return Err(Error::TooManySites { sites: s.len(), max: MAX_SITES });
        }
        let mut c = Config::ZERO;
        for (site, ch) in s.chars().enumerate() {
            match ch.to_digit(10) {
                Some(digit) if digit < 4 => c = c.with_digit(site, digit as u8),
                _ => return Err(Error::Parse(format!("invalid digit {ch:?} in configuration {s:?}"))),
            }
        }
        Ok(c)
    }

    /// Restriction to a site list: output site j carries the digit of `sites[j]`.
    pub fn restrict(self, sites: &[usize]) -> Config {
        let mut c = Config::ZERO;
        for (j, &site) in sites.iter().enumerate() {
            c = c.with_digit(j, self.digit(site));
        }
        c
    }

    /// Re-index sites: the digit at site i moves to site `perm[i]`.
    pub fn apply_permutation(self, perm: &[usize]) -> Config {
        let mut c = Config::ZERO;
        for (site, &image) in perm.iter().enumerate() {
            c = c.with_digit(image, self.digit(site));
        }
        c
    }
}
