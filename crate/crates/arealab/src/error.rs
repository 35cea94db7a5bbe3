//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice dimension must be at least 1")]
    ZeroDimension,

    #[error("lattice side must be at least 1")]
    ZeroSide,

    #[error("local dimension {d} outside supported range 2..=4")]
    BadLocalDimension { d: usize },

    #[error("lattice has {sites} sites, more than the {max} a packed configuration can hold")]
    TooManySites { sites: usize, max: usize },

    #[error("region rank {got} does not match lattice dimension {expected}")]
    RegionRankMismatch { expected: usize, got: usize },

    #[error("region side must be at least 1")]
    EmptyRegion,

    #[error("region exceeds lattice: offset {offset} + length {length} > side {side} on axis {axis}")]
    RegionOutOfBounds {
        axis: usize,
        offset: usize,
        length: usize,
        side: usize,
    },

    #[error("site index {site} outside lattice of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("configuration digit {digit} at site {site} outside local dimension {d}")]
    BadDigit { site: usize, digit: u8, d: usize },

    #[error("site permutation is not a bijection on {sites} sites")]
    NotAPermutation { sites: usize },

    #[error("states live on different lattices")]
    LatticeMismatch,

    #[error("state norm {norm} differs from 1 by more than {tol}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("cannot normalise a state with zero norm")]
    ZeroState,

    #[error("duplicate site {site} in site list")]
    DuplicateSite { site: usize },

    #[error("spectrum weight {sum} differs from 1 by more than {tol}")]
    SpectrumNotNormalized { sum: f64, tol: f64 },

    #[error("probabilities must be nonnegative, found {value}")]
    NegativeProbability { value: f64 },

    #[error("Renyi order must be nonnegative, got {alpha}")]
    NegativeOrder { alpha: f64 },

    #[error("dense reduced density matrix would be {dim} x {dim}, above the cap of {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },

    #[error("enumeration over {n} sites exceeds the cap of {cap} sites")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("hyperplane index {k} outside 1..={side}")]
    HyperplaneOutOfRange { k: usize, side: usize },

    #[error("hyperplane state touches symbol 0; support must lie in {{1,2}}")]
    SymbolZero,

    #[error("expected a qutrit lattice (d = 3), got d = {d}")]
    NotQutrit { d: usize },

    #[error("hyperplane state lattice {got} does not match the {expected} cross-section")]
    CrossSectionMismatch { expected: String, got: String },

    #[error("state is not mirror symmetric: reflection infidelity {infidelity:.3e}")]
    NotMirrorSymmetric { infidelity: f64 },

    #[error("codeword has {n} qubits but the hyperplane has {plane} sites; pass pad = true to embed with padding")]
    CodewordSizeMismatch { n: usize, plane: usize },

    #[error("operator is not Hermitian: residual {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("operator is {rows} x {cols}, expected {dim} x {dim}")]
    BadOperatorShape { rows: usize, cols: usize, dim: usize },

    #[error("correlator sites coincide")]
    CoincidentSites,

    #[error("rotation axes coincide")]
    CoincidentAxes,

    #[error("axis {axis} outside 1..={dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("bit strings differ in length: {a} vs {b}")]
    BitLengthMismatch { a: usize, b: usize },

    #[error("no code with balanced pairwise distances found after {attempts} attempts")]
    CodeGenerationFailed { attempts: u32 },

    #[error("{what} must satisfy {constraint}, got {got}")]
    OutOfRange {
        what: &'static str,
        constraint: &'static str,
        got: String,
    },

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Constructor for range violations on scalar parameters.
    pub fn out_of_range(what: &'static str, constraint: &'static str, got: impl ToString) -> Self {
        Error::OutOfRange {
            what,
            constraint,
            got: got.to_string(),
        }
    }
}
