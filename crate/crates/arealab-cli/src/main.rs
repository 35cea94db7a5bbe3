//! `arealab` — one subcommand per experiment, deterministic seeded output.
//!
//! Every run prints one JSON report (schema "arealab/1") to stdout; with
//! `--out DIR` the report is also written to DIR/<command>.json and sweep
//! commands add DIR/<command>.csv. Identical configuration and seed produce
//! byte-identical output. Exit codes: 0 = success and all audited
//! inequalities hold, 1 = an audited inequality failed (or a generic error),
//! 2 = usage error, 3 = a size cap was exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use arealab::analysis::{
    area_law_audit, connected_correlator_sweep, counting_report, construction_subspace_dim,
    cross_term_check, decay_profile, invariance_check, CorrelatorPattern, SiteObservable,
    SymmetryGroup,
};
use arealab::constructions::{
    area_law_state, ghz_phi, isotropic_area_law_state, mirror_ti_basis, product_phi,
    random_combination, random_mirror_combination, ti_basis,
};
use arealab::error::Error;
use arealab::fingerprint::{
    build_fingerprint, cost_report, equality_protocol, equality_protocol_sampled,
    minimal_repetitions, perturbed_protocol, swap_test_accept, swap_test_sample, Decision,
    FingerprintCode,
};
use arealab::lattice::{enumerate_cubic_regions, Lattice, Region};
use arealab::qecc::{build_513, max_marginal_mixedness_distance, qecc_area_state, random_code_state};
use arealab::schmidt::schmidt_spectrum;
use arealab::state::SparseState;

/// Audited inequalities are held to this tolerance.
const CLI_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "arealab", version, about = "Lattice area-law experiments", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Region-by-region Schmidt rank audit of a lattice state.
    Audit {
        #[arg(long = "D", default_value_t = 2)]
        dim: usize,
        #[arg(long = "L", default_value_t = 4)]
        side: usize,
        #[arg(long, default_value = "ti-random")]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest region volume to enumerate (default: whole lattice).
        #[arg(long)]
        max_volume: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Renyi entropies of one region across an α-grid.
    Entropy {
        #[arg(long = "D", default_value_t = 2)]
        dim: usize,
        #[arg(long = "L", default_value_t = 3)]
        side: usize,
        #[arg(long, default_value = "ti-random")]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Region as "offsets:lengths", e.g. 0,0:2,2.
        #[arg(long)]
        region: String,
        #[arg(long, default_value = "0,0.5,1,2,inf")]
        alpha: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive two-site connected-correlator sweep.
    Correlators {
        #[arg(long = "D", default_value_t = 2)]
        dim: usize,
        #[arg(long = "L", default_value_t = 3)]
        side: usize,
        #[arg(long, default_value = "ti-random")]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correlator decay across increasing lattice sides.
    Decay {
        #[arg(long = "D", default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "ghz")]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated strictly increasing sides.
        #[arg(long, default_value = "3,4,5,6,7,8")]
        ls: String,
        #[arg(long, default_value = "same-row")]
        pattern: String,
        /// Projector symbol used at both sites.
        #[arg(long, default_value_t = 1)]
        obs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotation-averaged state: build and verify its symmetries.
    Isotropic {
        #[arg(long = "D", default_value_t = 2)]
        dim: usize,
        #[arg(long = "L", default_value_t = 3)]
        side: usize,
        #[arg(long, default_value = "mirror-random")]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilizer-code marginals and the flat-correlator check.
    QeccCheck {
        #[arg(long = "L", default_value_t = 5)]
        side: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace norms of rotated-copy cross terms over cubic regions.
    Crossterm {
        #[arg(long = "D", default_value_t = 2)]
        dim: usize,
        #[arg(long = "L", default_value_t = 3)]
        side: usize,
        #[arg(long, default_value = "ghz")]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one region "offsets:lengths" instead of the sweep.
        #[arg(long)]
        region: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ε-net exponent vs description budget arithmetic.
    Counting {
        #[arg(long = "D", default_value_t = 2)]
        dim: usize,
        #[arg(long = "L", default_value_t = 10)]
        side: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Description budget in bits.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Override the derived subspace dimension q.
        #[arg(long)]
        q: Option<u128>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fingerprint equality protocol on seeded inputs.
    Fingerprint {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        reps: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Swap-test shots for the sampling comparison block.
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value = "analytic")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Qubit cost versus the √n classical reference.
    Cost {
        #[arg(long, default_value_t = 65_536)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// How the experiment state (or its cross-section seed φ) is built.
#[derive(Clone, Debug)]
enum Family {
    TiRandom,
    MirrorRandom,
    Ghz,
    Product,
    Basis(usize),
    File(PathBuf),
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        if let Some(k) = s.strip_prefix("basis:") {
            return k
                .parse()
                .map(Family::Basis)
                .map_err(|_| format!("bad basis index in {s:?}"));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(Family::File(PathBuf::from(path)));
        }
        match s {
            "ti-random" => Ok(Family::TiRandom),
            "mirror-random" => Ok(Family::MirrorRandom),
            "ghz" => Ok(Family::Ghz),
            "product" => Ok(Family::Product),
            other => Err(format!(
                "unknown family {other:?} (expected ti-random, mirror-random, ghz, product, \
                 basis:K, or file:PATH)"
            )),
        }
    }
}

impl Family {
    fn label(&self) -> String {
        match self {
            Family::TiRandom => "ti-random".into(),
            Family::MirrorRandom => "mirror-random".into(),
            Family::Ghz => "ghz".into(),
            Family::Product => "product".into(),
            Family::Basis(k) => format!("basis:{k}"),
            Family::File(p) => format!("file:{}", p.display()),
        }
    }

    /// Cross-section state φ for hyperplane stacking.
    fn phi(&self, cross: &Lattice, seed: u64) -> Result<SparseState, Error> {
        match self {
            Family::TiRandom => random_combination(&ti_basis(cross)?, seed),
            Family::MirrorRandom => random_mirror_combination(&mirror_ti_basis(cross)?, seed),
            Family::Ghz => ghz_phi(cross),
            Family::Product => product_phi(cross),
            Family::Basis(k) => {
                let basis = ti_basis(cross)?;
                if *k >= basis.size() {
                    return Err(Error::out_of_range(
                        "basis index",
                        "index < basis size",
                        format!("{k} (size {})", basis.size()),
                    ));
                }
                Ok(basis.state(*k).expect("index checked above").clone())
            }
            Family::File(path) => SparseState::load(path),
        }
    }

    /// Full lattice state: mirror families are rotation-averaged, the rest
    /// stacked along the last axis; file states are taken verbatim.
    fn state(&self, lattice: &Lattice, seed: u64) -> Result<SparseState, Error> {
        if let Family::File(path) = self {
            return SparseState::load(path);
        }
        let phi = self.phi(&lattice.cross_section()?, seed)?;
        match self {
            Family::MirrorRandom => isotropic_area_law_state(&phi, lattice),
            _ => area_law_state(&phi, lattice),
        }
    }
}

fn parse_usize_list(s: &str, what: &'static str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("{what}: bad integer {p:?}"))))
        .collect()
}

fn parse_region(s: &str, lattice: &Lattice) -> Result<Region, Error> {
    let (off, len) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("region {s:?} is not offsets:lengths")))?;
    Region::new(
        lattice,
        parse_usize_list(off, "region offsets")?,
        parse_usize_list(len, "region lengths")?,
    )
}

fn parse_alphas(s: &str) -> Result<Vec<(String, f64)>, Error> {
    s.split(',')
        .map(|p| {
            let p = p.trim();
            let value = match p {
                "inf" | "Inf" | "INF" => f64::INFINITY,
                other => other
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad Renyi order {other:?}")))?,
            };
            Ok((p.to_string(), value))
        })
        .collect()
}

#[derive(Serialize)]
struct Report {
    schema: &'static str,
    command: &'static str,
    params: serde_json::Value,
    #[serde(flatten)]
    body: serde_json::Value,
}

fn emit(
    command: &'static str,
    params: serde_json::Value,
    body: serde_json::Value,
    csv: Option<String>,
    out: Option<&Path>,
) -> Result<(), Error> {
    let report = Report { schema: "arealab/1", command, params, body };
    let text = serde_json::to_string_pretty(&report)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{command}.json")), format!("{text}\n"))?;
        if let Some(csv) = csv {
            std::fs::write(dir.join(format!("{command}.csv")), csv)?;
        }
    }
    // tolerate a downstream consumer hanging up mid-stream
    use std::io::Write as _;
    let _ = writeln!(std::io::stdout(), "{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Audit { dim, side, family, seed, max_volume, out } => {
            let lattice = Lattice::new(dim, side, 3)?;
            let state = family.state(&lattice, seed)?;
            let audit = area_law_audit(&state, max_volume.unwrap_or(lattice.n_sites()))?;
            let mut csv = String::from("region,volume,boundary,schmidt_rank,s0,rank_bound_bits\n");
            for r in &audit.records {
                let _ = writeln!(
                    csv,
                    "\"{}\",{},{},{},{},{}",
                    r.region.label(),
                    r.region.volume(),
                    r.boundary,
                    r.schmidt_rank,
                    r.s0,
                    r.rank_bound_bits
                );
            }
            let pass = audit.pass;
            emit(
                "audit",
                json!({
                    "D": dim, "L": side, "family": family.label(), "seed": seed,
                    "max_volume": max_volume,
                }),
                json!({
                    "lattice": state.lattice(),
                    "support": state.support_size(),
                    "audit": audit,
                }),
                Some(csv),
                out.as_deref(),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Entropy { dim, side, family, seed, region, alpha, out } => {
            let lattice = Lattice::new(dim, side, 3)?;
            let state = family.state(&lattice, seed)?;
            let region = parse_region(&region, state.lattice())?;
            let spectrum = schmidt_spectrum(&state, &region)?;
            let alphas = parse_alphas(&alpha)?;
            let mut entries = Vec::new();
            let mut csv = String::from("alpha,entropy_bits\n");
            for (label, a) in &alphas {
                let bits = spectrum.renyi_entropy(*a)?;
                let _ = writeln!(csv, "{label},{bits}");
                entries.push(json!({ "alpha": label, "entropy_bits": bits }));
            }
            emit(
                "entropy",
                json!({
                    "D": dim, "L": side, "family": family.label(), "seed": seed,
                    "region": region.label(), "alpha": alpha,
                }),
                json!({
                    "schmidt_rank": spectrum.rank(),
                    "entropies": entries,
                }),
                Some(csv),
                out.as_deref(),
            )?;
            Ok(0)
        }
        Command::Correlators { dim, side, family, seed, out } => {
            let lattice = Lattice::new(dim, side, 3)?;
            let state = family.state(&lattice, seed)?;
            let sweep = connected_correlator_sweep(&state)?;
            let worst = sweep.iter().map(|r| r.max_abs_connected).fold(0.0, f64::max);
            let mut csv = String::from("site_a,site_b,separation,max_abs_connected\n");
            for r in &sweep {
                let _ = writeln!(
                    csv,
                    "\"{}\",\"{}\",{},{}",
                    coords_label(&r.site_a),
                    coords_label(&r.site_b),
                    r.separation,
                    r.max_abs_connected
                );
            }
            emit(
                "correlators",
                json!({ "D": dim, "L": side, "family": family.label(), "seed": seed }),
                json!({
                    "pairs": sweep.len(),
                    "max_abs_connected": worst,
                    "records": sweep,
                }),
                Some(csv),
                out.as_deref(),
            )?;
            Ok(0)
        }
        Command::Decay { dim, family, seed, ls, pattern, obs, out } => {
            let sides = parse_usize_list(&ls, "side list")?;
            let pattern = match pattern.as_str() {
                "same-row" => CorrelatorPattern::SameRow,
                "different-row" => CorrelatorPattern::DifferentRow,
                other => return Err(Error::Parse(format!("unknown pattern {other:?}"))),
            };
            let projector = SiteObservable::projector(3, obs)?;
            let build = |l: usize| -> Result<SparseState, Error> {
                family.state(&Lattice::new(dim, l, 3)?, seed)
            };
            let profile = decay_profile(&build, &projector, &projector, pattern, &sides)?;
            let mut csv = String::from("L,separation,connected_value\n");
            for e in &profile.entries {
                let _ = writeln!(csv, "{},{},{}", e.l, e.separation, e.connected_value);
            }
            emit(
                "decay",
                json!({
                    "D": dim, "family": family.label(), "seed": seed, "ls": sides,
                    "pattern": pattern, "obs": obs,
                }),
                json!({ "profile": profile }),
                Some(csv),
                out.as_deref(),
            )?;
            Ok(0)
        }
        Command::Isotropic { dim, side, family, seed, out } => {
            let lattice = Lattice::new(dim, side, 3)?;
            let phi = family.phi(&lattice.cross_section()?, seed)?;
            let state = isotropic_area_law_state(&phi, &lattice)?;
            let translations = invariance_check(&state, SymmetryGroup::Translations)?;
            let rotations = invariance_check(&state, SymmetryGroup::Rotations)?;
            let reflections = invariance_check(&state, SymmetryGroup::Reflections)?;
            let pass = translations <= CLI_TOL && rotations <= CLI_TOL && reflections <= CLI_TOL;
            emit(
                "isotropic",
                json!({ "D": dim, "L": side, "family": family.label(), "seed": seed }),
                json!({
                    "lattice": state.lattice(),
                    "support": state.support_size(),
                    "infidelity": {
                        "translations": translations,
                        "rotations": rotations,
                        "reflections": reflections,
                    },
                    "tolerance": CLI_TOL,
                    "pass": pass,
                }),
                None,
                out.as_deref(),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::QeccCheck { side, seed, out } => {
            let code = build_513();
            let sample = random_code_state(&code, seed)?;
            let marginal_1 = max_marginal_mixedness_distance(&sample, 1)?;
            let marginal_2 = max_marginal_mixedness_distance(&sample, 2)?;
            let lattice = Lattice::new(2, side, 3)?;
            let embedded = qecc_area_state(&code.codewords()[0], &lattice, side > 5)?;
            let sweep = connected_correlator_sweep(&embedded.state)?;
            let max_corr = sweep.iter().map(|r| r.max_abs_connected).fold(0.0, f64::max);
            let pass = marginal_1 <= CLI_TOL && marginal_2 <= CLI_TOL && max_corr <= CLI_TOL;
            emit(
                "qecc-check",
                json!({ "L": side, "seed": seed }),
                json!({
                    "code": code,
                    "max_marginal_distance": {
                        "1_site": marginal_1,
                        "2_site": marginal_2,
                    },
                    "embedded": { "padded": embedded.padded, "support": embedded.state.support_size() },
                    "max_abs_connected": max_corr,
                    "tolerance": CLI_TOL,
                    "pass": pass,
                }),
                None,
                out.as_deref(),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Crossterm { dim, side, family, seed, region, out } => {
            let lattice = Lattice::new(dim, side, 3)?;
            let phi = family.phi(&lattice.cross_section()?, seed)?;
            let regions: Vec<Region> = match &region {
                Some(spec) => vec![parse_region(spec, &lattice)?],
                None => enumerate_cubic_regions(&lattice, lattice.n_sites())
                    .into_iter()
                    .filter(|r| r.volume() < lattice.n_sites())
                    .collect(),
            };
            let mut axis_pairs = Vec::new();
            for j in 1..=dim {
                for k in 1..=dim {
                    if j != k {
                        axis_pairs.push((j, k));
                    }
                }
            }
            let mut rows = Vec::new();
            let mut csv = String::from("region,j,k,trace_norm\n");
            let mut worst = 0.0f64;
            for r in &regions {
                for &(j, k) in &axis_pairs {
                    let t = cross_term_check(&phi, &lattice, j, k, r)?;
                    worst = worst.max(t);
                    let _ = writeln!(csv, "\"{}\",{j},{k},{t}", r.label());
                    rows.push(json!({ "region": r.label(), "j": j, "k": k, "trace_norm": t }));
                }
            }
            let pass = worst <= CLI_TOL;
            emit(
                "crossterm",
                json!({
                    "D": dim, "L": side, "family": family.label(), "seed": seed,
                    "region": region,
                }),
                json!({
                    "checks": rows,
                    "max_trace_norm": worst,
                    "tolerance": CLI_TOL,
                    "pass": pass,
                }),
                Some(csv),
                out.as_deref(),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Counting { dim, side, epsilon, budget, q, out } => {
            let q = match q {
                Some(q) => q,
                None => construction_subspace_dim(dim, side)?,
            };
            let report = counting_report(q, epsilon, budget)?;
            emit(
                "counting",
                json!({ "D": dim, "L": side, "epsilon": epsilon, "budget": budget }),
                json!({ "report": report }),
                None,
                out.as_deref(),
            )?;
            Ok(0)
        }
        Command::Fingerprint { n, reps, seed, epsilon, shots, mode, out } => {
            let code = FingerprintCode::generate(n, seed)?;
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            let x = rand::Rng::random::<u64>(&mut rng) & input_mask(n);
            let mut y = rand::Rng::random::<u64>(&mut rng) & input_mask(n);
            while y == x {
                y = rand::Rng::random::<u64>(&mut rng) & input_mask(n);
            }
            let (equal, unequal) = match (mode.as_str(), epsilon) {
                ("analytic", e) if e == 0.0 => (
                    equality_protocol(x, x, &code, reps, None)?,
                    equality_protocol(x, y, &code, reps, None)?,
                ),
                ("analytic", e) => (
                    perturbed_protocol(x, x, &code, e, reps, seed, None)?,
                    perturbed_protocol(x, y, &code, e, reps, seed + 1, None)?,
                ),
                ("sampling", e) if e == 0.0 => (
                    equality_protocol_sampled(x, x, &code, reps, seed)?,
                    equality_protocol_sampled(x, y, &code, reps, seed + 1)?,
                ),
                ("sampling", _) => {
                    return Err(Error::Parse(
                        "sampling mode does not combine with epsilon > 0".into(),
                    ))
                }
                (other, _) => {
                    return Err(Error::Parse(format!(
                        "unknown mode {other:?} (expected analytic or sampling)"
                    )))
                }
            };
            let hx = build_fingerprint(x, &code)?;
            let hy = build_fingerprint(y, &code)?;
            let analytic = swap_test_accept(&hx, &hy)?;
            let frequency = swap_test_sample(&hx, &hy, shots, seed)?;
            let suggested = minimal_repetitions(code.max_overlap(), 1e-3)?;
            let pass = equal.decision == Decision::Equal;
            emit(
                "fingerprint",
                json!({
                    "n": n, "reps": reps, "seed": seed, "epsilon": epsilon,
                    "shots": shots, "mode": mode,
                }),
                json!({
                    "code": code,
                    "qubits_per_repetition": code.qubits(),
                    "inputs": { "x": x, "y": y },
                    "equal_case": equal,
                    "unequal_case": unequal,
                    "swap_sample": {
                        "shots": shots,
                        "analytic": analytic,
                        "frequency": frequency,
                    },
                    "suggested_reps_for_1e-3": suggested,
                    "pass": pass,
                }),
                None,
                out.as_deref(),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Cost { n, out } => {
            let report = cost_report(n)?;
            emit("cost", json!({ "n": n }), json!({ "report": report }), None, out.as_deref())?;
            Ok(0)
        }
    }
}

fn coords_label(coords: &[usize]) -> String {
    coords
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn input_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::TooManySites { .. }
        | Error::EnumerationCapExceeded { .. }
        | Error::DenseCapExceeded { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("AREALAB_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
