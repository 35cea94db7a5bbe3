//! Python bindings for the arealab core: lattices, sparse states, and the
//! audit, correlator, counting, and fingerprint entry points.
//!
//! Scalar results cross the boundary natively; structured reports arrive as
//! JSON strings (the same schema the CLI emits) for `json.loads` on the
//! Python side. Every core error surfaces as `ValueError` with the crate's
//! own message.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use arealab as al;
use num_complex::Complex64;

fn pyerr(e: al::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| PyValueError::new_err(format!("serialization failed: {e}")))
}

/// [L]^D lattice of d-level sites.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Lattice {
    inner: al::Lattice,
}

#[pymethods]
impl Lattice {
    #[new]
    #[pyo3(signature = (dim, side, local_dim = 3))]
    fn new(dim: usize, side: usize, local_dim: usize) -> PyResult<Lattice> {
        Ok(Lattice { inner: al::Lattice::new(dim, side, local_dim).map_err(pyerr)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn side(&self) -> usize {
        self.inner.side()
    }

    #[getter]
    fn local_dim(&self) -> usize {
        self.inner.local_dim()
    }

    #[getter]
    fn n_sites(&self) -> usize {
        self.inner.n_sites()
    }

    #[getter]
    fn hyperplane_size(&self) -> usize {
        self.inner.hyperplane_size()
    }

    fn __repr__(&self) -> String {
        format!(
            "Lattice(dim={}, side={}, local_dim={})",
            self.inner.dim(),
            self.inner.side(),
            self.inner.local_dim()
        )
    }
}

/// Normalized sparse state over one of the lattice families.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct State {
    inner: al::SparseState,
}

fn build_family(family: &str, dim: usize, side: usize, seed: u64) -> Result<al::SparseState, PyErr> {
    let lattice = al::Lattice::new(dim, side, 3).map_err(pyerr)?;
    let cross = lattice.cross_section().map_err(pyerr)?;
    let state = match family {
        "ghz" => al::area_law_state(&al::ghz_phi(&cross).map_err(pyerr)?, &lattice),
        "product" => al::area_law_state(&al::product_phi(&cross).map_err(pyerr)?, &lattice),
        "ti-random" => {
            let basis = al::ti_basis(&cross).map_err(pyerr)?;
            al::area_law_state(&al::random_combination(&basis, seed).map_err(pyerr)?, &lattice)
        }
        "mirror-random" => {
            let basis = al::mirror_ti_basis(&cross).map_err(pyerr)?;
            let phi = al::random_mirror_combination(&basis, seed).map_err(pyerr)?;
            al::isotropic_area_law_state(&phi, &lattice)
        }
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown family `{other}`; expected ghz, product, ti-random, or mirror-random"
            )))
        }
    };
    state.map_err(pyerr)
}

#[pymethods]
impl State {
    /// Assemble a named construction: `ghz`, `product`, and `ti-random` stack
    /// a cross-section state into the translated-hyperplane superposition;
    /// `mirror-random` additionally averages over the lattice rotations.
    #[staticmethod]
    #[pyo3(signature = (family, dim, side, seed = 0))]
    fn build(family: &str, dim: usize, side: usize, seed: u64) -> PyResult<State> {
        Ok(State { inner: build_family(family, dim, side, seed)? })
    }

    /// Codeword `index` of the [[5,1,3]] code embedded on the top hyperplane,
    /// bulk frozen to |0⟩; hyperplanes larger than five sites are padded.
    #[staticmethod]
    #[pyo3(signature = (dim, side, index = 0))]
    fn qecc_embedded(dim: usize, side: usize, index: usize) -> PyResult<State> {
        let code = al::build_513();
        let codeword = code
            .codewords()
            .get(index)
            .ok_or_else(|| PyValueError::new_err(format!("codeword index {index} out of range")))?;
        let lattice = al::Lattice::new(dim, side, 3).map_err(pyerr)?;
        let pad = lattice.hyperplane_size() != codeword.lattice().n_sites();
        let embedded = al::qecc_area_state(codeword, &lattice, pad).map_err(pyerr)?;
        Ok(State { inner: embedded.state })
    }

    /// Haar-like random state in the [[5,1,3]] code space.
    #[staticmethod]
    fn qecc_random(seed: u64) -> PyResult<State> {
        let code = al::build_513();
        Ok(State { inner: al::random_code_state(&code, seed).map_err(pyerr)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<State> {
        Ok(State { inner: al::SparseState::from_json(text).map_err(pyerr)? })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<State> {
        Ok(State { inner: al::SparseState::load(&path).map_err(pyerr)? })
    }

    #[getter]
    fn lattice(&self) -> Lattice {
        Lattice { inner: *self.inner.lattice() }
    }

    #[getter]
    fn support_size(&self) -> usize {
        self.inner.support_size()
    }

    fn inner_product(&self, other: &State) -> PyResult<Complex64> {
        self.inner.inner(&other.inner).map_err(pyerr)
    }

    fn fidelity(&self, other: &State) -> PyResult<f64> {
        self.inner.fidelity(&other.inner).map_err(pyerr)
    }

    /// Descending Schmidt probabilities across (`sites`, complement).
    fn schmidt_probabilities(&self, sites: Vec<usize>) -> PyResult<Vec<f64>> {
        let spectrum = al::schmidt::schmidt_spectrum_sites(&self.inner, &sites).map_err(pyerr)?;
        Ok(spectrum.probabilities().to_vec())
    }

    fn schmidt_rank(&self, sites: Vec<usize>) -> PyResult<usize> {
        al::schmidt::schmidt_rank_sites(&self.inner, &sites).map_err(pyerr)
    }

    /// S_α across (`sites`, complement) in bits; α may be `float("inf")`.
    fn renyi_entropy(&self, sites: Vec<usize>, alpha: f64) -> PyResult<f64> {
        let spectrum = al::schmidt::schmidt_spectrum_sites(&self.inner, &sites).map_err(pyerr)?;
        spectrum.renyi_entropy(alpha).map_err(pyerr)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        self.inner.save(&path).map_err(pyerr)
    }

    fn __repr__(&self) -> String {
        let l = self.inner.lattice();
        format!(
            "State(dim={}, side={}, support={})",
            l.dim(),
            l.side(),
            self.inner.support_size()
        )
    }
}

/// Size of the translation-invariant qutrit subspace basis on a ring of
/// `n` sites.
#[pyfunction]
fn ti_basis_size(n: usize) -> PyResult<usize> {
    let sub = al::Lattice::new(1, n, 3).map_err(pyerr)?;
    Ok(al::ti_basis(&sub).map_err(pyerr)?.size())
}

/// Size of the mirror-symmetric translation-invariant basis on a ring.
#[pyfunction]
fn mirror_basis_size(n: usize) -> PyResult<usize> {
    let sub = al::Lattice::new(1, n, 3).map_err(pyerr)?;
    Ok(al::mirror_ti_basis(&sub).map_err(pyerr)?.size())
}

/// Rank-vs-boundary audit over all cubic regions up to `max_volume`,
/// as a JSON report with per-region records and the overall verdict.
#[pyfunction]
fn audit_json(state: &State, max_volume: usize) -> PyResult<String> {
    let audit = al::area_law_audit(&state.inner, max_volume).map_err(pyerr)?;
    to_json(&audit)
}

/// Connected correlator of the |a⟩⟨a| ⊗ |b⟩⟨b| projector pair.
#[pyfunction]
fn connected_correlator(
    state: &State,
    site_a: usize,
    site_b: usize,
    symbol_a: usize,
    symbol_b: usize,
) -> PyResult<f64> {
    let d = state.inner.lattice().local_dim();
    let obs_a = al::SiteObservable::projector(d, symbol_a).map_err(pyerr)?;
    let obs_b = al::SiteObservable::projector(d, symbol_b).map_err(pyerr)?;
    let record =
        al::connected_correlator(&state.inner, &obs_a, site_a, &obs_b, site_b).map_err(pyerr)?;
    Ok(record.connected_value)
}

/// max |⟨AB⟩ − ⟨A⟩⟨B⟩| over all site pairs and Hermitian basis observables.
#[pyfunction]
fn max_connected_correlator(state: &State) -> PyResult<f64> {
    al::max_connected_correlator(&state.inner).map_err(pyerr)
}

/// Worst infidelity under the generators of `group` ∈
/// {translations, rotations, reflections}.
#[pyfunction]
fn invariance(state: &State, group: &str) -> PyResult<f64> {
    let group = match group {
        "translations" => al::SymmetryGroup::Translations,
        "rotations" => al::SymmetryGroup::Rotations,
        "reflections" => al::SymmetryGroup::Reflections,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown group `{other}`; expected translations, rotations, or reflections"
            )))
        }
    };
    al::invariance_check(&state.inner, group).map_err(pyerr)
}

/// Distance of the worst `subset_size`-site marginal from maximally mixed.
#[pyfunction]
fn marginal_mixedness_distance(state: &State, subset_size: usize) -> PyResult<f64> {
    al::max_marginal_mixedness_distance(&state.inner, subset_size).map_err(pyerr)
}

/// Dimension of the translated-hyperplane construction subspace on [L]^D.
#[pyfunction]
fn construction_subspace_dim(dim: usize, side: usize) -> PyResult<u128> {
    al::analysis::construction_subspace_dim(dim, side).map_err(pyerr)
}

/// ε-net exponent q·log₂(1/ε) against a description budget, as JSON.
#[pyfunction]
fn counting_json(q: u128, epsilon: f64, budget_bits: u64) -> PyResult<String> {
    to_json(&al::counting_report(q, epsilon, budget_bits).map_err(pyerr)?)
}

/// Run the fingerprint equality protocol on the pair (x, y) and return the
/// outcome as JSON. `epsilon` perturbs both fingerprints before comparison.
#[pyfunction]
#[pyo3(signature = (n, x, y, reps, seed, epsilon = 0.0, threshold = None))]
fn fingerprint_json(
    n: usize,
    x: u64,
    y: u64,
    reps: u32,
    seed: u64,
    epsilon: f64,
    threshold: Option<f64>,
) -> PyResult<String> {
    let code = al::FingerprintCode::generate(n, seed).map_err(pyerr)?;
    let outcome =
        al::perturbed_protocol(x, y, &code, epsilon, reps, seed, threshold).map_err(pyerr)?;
    to_json(&outcome)
}

/// Repetitions needed to push the false-equal probability below `delta`.
#[pyfunction]
fn minimal_repetitions(max_overlap: f64, delta: f64) -> PyResult<u32> {
    al::minimal_repetitions(max_overlap, delta).map_err(pyerr)
}

/// Qubit cost of fingerprinting n-bit inputs versus the classical √n bound,
/// as JSON.
#[pyfunction]
fn cost_json(n: u64) -> PyResult<String> {
    to_json(&al::cost_report(n).map_err(pyerr)?)
}

#[pymodule]
fn arealab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Lattice>()?;
    m.add_class::<State>()?;
    m.add_function(wrap_pyfunction!(ti_basis_size, m)?)?;
    m.add_function(wrap_pyfunction!(mirror_basis_size, m)?)?;
    m.add_function(wrap_pyfunction!(audit_json, m)?)?;
    m.add_function(wrap_pyfunction!(connected_correlator, m)?)?;
    m.add_function(wrap_pyfunction!(max_connected_correlator, m)?)?;
    m.add_function(wrap_pyfunction!(invariance, m)?)?;
    m.add_function(wrap_pyfunction!(marginal_mixedness_distance, m)?)?;
    m.add_function(wrap_pyfunction!(construction_subspace_dim, m)?)?;
    m.add_function(wrap_pyfunction!(counting_json, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint_json, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_repetitions, m)?)?;
    m.add_function(wrap_pyfunction!(cost_json, m)?)?;
    Ok(())
}
