//! Dense statevector oracle: materialize the full d^n amplitude vector,
//! reshape it across a bipartition, and read Schmidt probabilities from the
//! dense reduced density matrix. Deliberately shares no code with the sparse
//! Gram-matrix path it is used to check.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arealab::config::Config;
use arealab::lattice::Lattice;
use arealab::state::SparseState;

/// Schmidt probabilities of `sites` vs the rest, by dense partial trace.
/// Returns the full d^|A| eigenvalue list sorted descending.
pub fn dense_schmidt_probabilities(state: &SparseState, sites: &[usize]) -> Vec<f64> {
    let lattice = state.lattice();
    let d = lattice.local_dim();
    let n = lattice.n_sites();
    let mut in_a = vec![false; n];
    for &s in sites {
        in_a[s] = true;
    }
    let a_sites: Vec<usize> = (0..n).filter(|&s| in_a[s]).collect();
    let b_sites: Vec<usize> = (0..n).filter(|&s| !in_a[s]).collect();
    let rows = d.pow(a_sites.len() as u32);
    let cols = d.pow(b_sites.len() as u32);
    let mut m = DMatrix::<Complex64>::zeros(rows, cols);
    for &(config, amp) in state.terms() {
        let row = a_sites
            .iter()
            .fold(0usize, |acc, &s| acc * d + config.digit(s) as usize);
        let col = b_sites
            .iter()
            .fold(0usize, |acc, &s| acc * d + config.digit(s) as usize);
        m[(row, col)] += amp;
    }
    let rho = &m * m.adjoint();
    let mut eigs: Vec<f64> = rho
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&e| e.max(0.0))
        .collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs
}

/// Seeded random sparse state with the requested support size.
pub fn random_sparse_state(lattice: Lattice, support: usize, seed: u64) -> SparseState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = lattice.local_dim() as u8;
    let n = lattice.n_sites();
    let mut terms = Vec::with_capacity(support);
    for _ in 0..support {
        let digits: Vec<u8> = (0..n).map(|_| rng.random_range(0..d)).collect();
        let re = rng.random::<f64>() * 2.0 - 1.0;
        let im = rng.random::<f64>() * 2.0 - 1.0;
        terms.push((Config::from_digits(&digits), Complex64::new(re, im)));
    }
    SparseState::normalized(lattice, terms).expect("random terms normalize")
}

/// Random nonempty proper site subset of the lattice.
pub fn random_bipartition(lattice: &Lattice, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = lattice.n_sites();
    loop {
        let sites: Vec<usize> = (0..n).filter(|_| rng.random::<bool>()).collect();
        if !sites.is_empty() && sites.len() < n {
            return sites;
        }
    }
}
