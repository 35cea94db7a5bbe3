//! Acceptance gate: one test per criterion, each printing a single PASS line
//! with its pinned tolerance. Run with `--nocapture` to see the lines on
//! success; any failure carries the offending values in its panic message.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arealab::analysis::{
    area_law_audit, counting_report, construction_subspace_dim, cross_term_check, decay_profile,
    invariance_check, max_connected_correlator, CorrelatorPattern, SiteObservable, SymmetryGroup,
};
use arealab::constructions::{
    area_law_state, ghz_phi, isotropic_area_law_state, mirror_ti_basis, product_phi,
    random_combination, random_mirror_combination, ti_basis,
};
use arealab::fingerprint::{
    build_fingerprint, equality_protocol, equality_protocol_sampled, minimal_repetitions,
    perturbed_protocol, swap_test_accept, swap_test_sample, Decision, FingerprintCode,
};
use arealab::lattice::{enumerate_cubic_regions, Lattice};
use arealab::qecc::{build_513, max_marginal_mixedness_distance, qecc_area_state, random_code_state};
use arealab::schmidt::schmidt_spectrum;
use arealab::state::SparseState;

use common::{dense_schmidt_probabilities, random_bipartition, random_sparse_state};

fn ring(n: usize) -> Lattice {
    Lattice::new(1, n, 3).unwrap()
}

fn square(side: usize) -> Lattice {
    Lattice::new(2, side, 3).unwrap()
}

#[test]
fn criterion_1_region_rank_audit() {
    let started = Instant::now();
    let mut seed = 0u64;
    let mut audited = 0;
    for side in 2usize..=6 {
        let basis = ti_basis(&ring(side)).unwrap();
        let lat = square(side);
        for _ in 0..4 {
            seed += 1;
            let phi = random_combination(&basis, seed).unwrap();
            let psi = area_law_state(&phi, &lat).unwrap();
            let audit = area_law_audit(&psi, side * side).unwrap();
            assert!(
                audit.pass,
                "L={side} seed={seed}: violations at indices {:?}",
                audit.violations
            );
            assert!(audit.skipped.is_empty(), "L={side}: regions skipped");
            let expected_regions = (side * (side + 1) / 2).pow(2);
            assert_eq!(audit.records.len(), expected_regions);
            audited += 1;
        }
    }
    let elapsed = started.elapsed();
    assert_eq!(audited, 20);
    assert!(elapsed.as_secs() < 60, "audit took {elapsed:?}");
    println!(
        "criterion 1: PASS — 20 seeded states, D=2, L=2..6, every cubic region satisfies \
         rank ≤ 2^l1·l2 + 1 and rank ≤ 2^boundary (exact integers), {:.1}s < 60s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_2_sparse_spectra_match_dense_oracle() {
    const TOL: f64 = 1e-10;
    let mut states: Vec<(String, SparseState)> = Vec::new();
    for n in 3..=6 {
        states.push((format!("ghz ring {n}"), ghz_phi(&ring(n)).unwrap()));
    }
    states.push(("product ring 4".into(), product_phi(&ring(4)).unwrap()));
    for (n, seed) in [(3, 5u64), (4, 6), (5, 7)] {
        states.push((
            format!("ti-random ring {n}"),
            random_combination(&ti_basis(&ring(n)).unwrap(), seed).unwrap(),
        ));
    }
    for side in [2usize, 3] {
        let phi = ghz_phi(&ring(side)).unwrap();
        states.push((
            format!("stacked D=2 L={side}"),
            area_law_state(&phi, &square(side)).unwrap(),
        ));
        states.push((
            format!("isotropic D=2 L={side}"),
            isotropic_area_law_state(&phi, &square(side)).unwrap(),
        ));
    }
    let phi_rand = random_combination(&ti_basis(&ring(3)).unwrap(), 9).unwrap();
    states.push(("stacked D=2 L=3 random".into(), area_law_state(&phi_rand, &square(3)).unwrap()));
    let torus_phi = ghz_phi(&Lattice::new(2, 2, 3).unwrap()).unwrap();
    let cube = Lattice::new(3, 2, 3).unwrap();
    states.push(("stacked D=3 L=2".into(), area_law_state(&torus_phi, &cube).unwrap()));
    states.push((
        "isotropic D=3 L=2".into(),
        isotropic_area_law_state(&torus_phi, &cube).unwrap(),
    ));
    let code = build_513();
    for (i, w) in code.codewords().iter().enumerate() {
        states.push((format!("codeword {i}"), w.clone()));
    }
    for seed in 1..=3 {
        states.push((format!("code-space random {seed}"), random_code_state(&code, seed).unwrap()));
    }

    let mut comparisons = 0usize;
    let mut worst = 0.0f64;
    for (name, state) in &states {
        assert!(state.lattice().n_sites() <= 9, "{name} exceeds the dense cap");
        for region in enumerate_cubic_regions(state.lattice(), state.lattice().n_sites()) {
            let sites = region.sites(state.lattice()).unwrap();
            if sites.len() == state.lattice().n_sites() {
                continue;
            }
            let sparse = schmidt_spectrum(state, &region).unwrap();
            let dense = dense_schmidt_probabilities(state, &sites);
            for (i, &oracle) in dense.iter().enumerate() {
                let got = sparse.probabilities().get(i).copied().unwrap_or(0.0);
                let gap = (oracle - got).abs();
                worst = worst.max(gap);
                assert!(gap <= TOL, "{name} region {}: entry {i} differs by {gap:e}", region.label());
            }
            comparisons += 1;
        }
    }

    let lattices = [ring(5), ring(7), ring(9), square(2), square(3), Lattice::new(3, 2, 3).unwrap()];
    for i in 0..50u64 {
        let lattice = lattices[i as usize % lattices.len()];
        let support = 1 + (i as usize * 7) % 24;
        let state = random_sparse_state(lattice, support, 400 + i);
        for b in 0..2u64 {
            let sites = random_bipartition(&lattice, 900 + 2 * i + b);
            let sparse = arealab::schmidt::schmidt_spectrum_sites(&state, &sites).unwrap();
            let dense = dense_schmidt_probabilities(&state, &sites);
            for (k, &oracle) in dense.iter().enumerate() {
                let got = sparse.probabilities().get(k).copied().unwrap_or(0.0);
                let gap = (oracle - got).abs();
                worst = worst.max(gap);
                assert!(gap <= TOL, "random state {i}: entry {k} differs by {gap:e}");
            }
            comparisons += 1;
        }
    }
    println!(
        "criterion 2: PASS — {comparisons} bipartitions across construction-suite and 50 random \
         states match the dense partial-trace oracle entrywise (worst gap {worst:.2e} ≤ 1e-10)"
    );
}

#[test]
fn criterion_3_embedding_is_isometric() {
    const TOL: f64 = 1e-12;
    let mut pairs = 0;
    let mut worst = 0.0f64;
    for (side, count) in [(3usize, 17u64), (4, 17), (5, 16)] {
        let basis = ti_basis(&ring(side)).unwrap();
        let lat = square(side);
        for i in 0..count {
            let phi = random_combination(&basis, 100 + 2 * i).unwrap();
            let phi2 = random_combination(&basis, 101 + 2 * i).unwrap();
            let psi = area_law_state(&phi, &lat).unwrap();
            let psi2 = area_law_state(&phi2, &lat).unwrap();
            let gap = (psi.inner(&psi2).unwrap() - phi.inner(&phi2).unwrap()).norm();
            worst = worst.max(gap);
            assert!(gap <= TOL, "L={side} pair {i}: inner products differ by {gap:e}");
            pairs += 1;
        }
    }
    assert_eq!(pairs, 50);
    println!(
        "criterion 3: PASS — 50 random pairs: |⟨ψ(φ),ψ(φ')⟩ − ⟨φ,φ'⟩| ≤ 1e-12 \
         (worst {worst:.2e})"
    );
}

#[test]
fn criterion_4_symmetries_and_cross_terms() {
    const TOL: f64 = 1e-12;
    // stacked states: translation invariance
    let mut worst_shift = 0.0f64;
    for side in [3usize, 4, 5] {
        let phi = random_combination(&ti_basis(&ring(side)).unwrap(), side as u64).unwrap();
        let psi = area_law_state(&phi, &square(side)).unwrap();
        worst_shift = worst_shift.max(invariance_check(&psi, SymmetryGroup::Translations).unwrap());
    }
    let torus_phi = ghz_phi(&Lattice::new(2, 2, 3).unwrap()).unwrap();
    let cube = Lattice::new(3, 2, 3).unwrap();
    let psi3 = area_law_state(&torus_phi, &cube).unwrap();
    worst_shift = worst_shift.max(invariance_check(&psi3, SymmetryGroup::Translations).unwrap());
    assert!(worst_shift <= TOL, "translation infidelity {worst_shift:e}");

    // isotropic states: rotations and reflections
    let mut worst_iso = 0.0f64;
    for side in [2usize, 3] {
        let basis = mirror_ti_basis(&ring(side)).unwrap();
        for seed in [1u64, 2] {
            let phi = random_mirror_combination(&basis, seed).unwrap();
            let big = isotropic_area_law_state(&phi, &square(side)).unwrap();
            worst_iso = worst_iso.max(invariance_check(&big, SymmetryGroup::Rotations).unwrap());
            worst_iso = worst_iso.max(invariance_check(&big, SymmetryGroup::Reflections).unwrap());
        }
    }
    let iso3 = isotropic_area_law_state(&torus_phi, &cube).unwrap();
    worst_iso = worst_iso.max(invariance_check(&iso3, SymmetryGroup::Rotations).unwrap());
    worst_iso = worst_iso.max(invariance_check(&iso3, SymmetryGroup::Reflections).unwrap());
    assert!(worst_iso <= TOL, "isotropic infidelity {worst_iso:e}");

    // rotated-copy cross terms over every proper cubic region
    let mut worst_cross = 0.0f64;
    let mut tested = 0usize;
    for side in [3usize, 4] {
        let lat = square(side);
        let ghz = ghz_phi(&ring(side)).unwrap();
        let mirror =
            random_mirror_combination(&mirror_ti_basis(&ring(side)).unwrap(), 5).unwrap();
        for phi in [&ghz, &mirror] {
            for region in enumerate_cubic_regions(&lat, side * side) {
                if region.volume() == lat.n_sites() {
                    continue;
                }
                for (j, k) in [(1usize, 2usize), (2, 1)] {
                    let t = cross_term_check(phi, &lat, j, k, &region).unwrap();
                    worst_cross = worst_cross.max(t);
                    assert!(t <= TOL, "D=2 L={side} region {} ({j},{k}): {t:e}", region.label());
                    tested += 1;
                }
            }
        }
    }
    for region in enumerate_cubic_regions(&cube, 8) {
        if region.volume() == cube.n_sites() {
            continue;
        }
        for (j, k) in [(1usize, 2usize), (1, 3), (2, 3), (2, 1)] {
            let t = cross_term_check(&torus_phi, &cube, j, k, &region).unwrap();
            worst_cross = worst_cross.max(t);
            assert!(t <= TOL, "D=3 region {} ({j},{k}): {t:e}", region.label());
            tested += 1;
        }
    }
    println!(
        "criterion 4: PASS — translation infidelity {worst_shift:.2e}, isotropic \
         rotation+reflection infidelity {worst_iso:.2e}, {tested} cross-term trace norms \
         ≤ 1e-12 (worst {worst_cross:.2e})"
    );
}

/// Independent necklace count: lexicographic canonical form via shift
/// arithmetic on bitmasks, no shared code with the basis builder.
fn brute_cyclic_orbits(n: usize) -> usize {
    let size = 1usize << n;
    let mut count = 0;
    for mask in 0..size {
        let mut canonical = true;
        for r in 1..n {
            let rotated = ((mask >> r) | (mask << (n - r))) & (size - 1);
            if rotated < mask {
                canonical = false;
                break;
            }
        }
        if canonical {
            count += 1;
        }
    }
    count
}

fn reverse_bits(mask: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, i| acc << 1 | (mask >> i & 1))
}

fn brute_dihedral_orbits(n: usize) -> usize {
    let size = 1usize << n;
    let mut count = 0;
    for mask in 0..size {
        let mut canon = mask;
        for r in 0..n {
            let rotated = ((mask >> r) | (mask << (n - r))) & (size - 1);
            canon = canon.min(rotated).min(reverse_bits(rotated, n));
        }
        if canon == mask {
            count += 1;
        }
    }
    count
}

#[test]
fn criterion_5_subspace_dimension_counts() {
    for n in 1usize..=14 {
        let basis = ti_basis(&ring(n)).unwrap();
        assert_eq!(basis.n(), n);
        assert_eq!(
            basis.size(),
            brute_cyclic_orbits(n),
            "cyclic orbit count mismatch at n={n}"
        );
        assert!(
            (basis.size() as u128) * n as u128 >= 1u128 << n,
            "size·n < 2^n at n={n}"
        );
    }
    for n in 1usize..=12 {
        let basis = mirror_ti_basis(&ring(n)).unwrap();
        assert_eq!(
            basis.size(),
            brute_dihedral_orbits(n),
            "dihedral orbit count mismatch at n={n}"
        );
        assert!(
            (basis.size() as u128) * 2 * n as u128 >= 1u128 << n,
            "mirror size·2n < 2^n at n={n}"
        );
    }
    let torus = mirror_ti_basis(&Lattice::new(2, 2, 3).unwrap()).unwrap();
    // group generated by shifts, reflections and the axis swap has order ≤ 8n
    assert!(torus.size() * 8 * 4 >= 16);
    println!(
        "criterion 5: PASS — cyclic basis sizes n=1..14 match brute-force orbit counts and \
         satisfy size·n ≥ 2^n; mirror sizes n=1..12 match dihedral counts with size·2n ≥ 2^n"
    );
}

#[test]
fn criterion_6_code_marginals_and_flat_correlators() {
    const TOL: f64 = 1e-12;
    let code = build_513();
    let mut worst_marginal = 0.0f64;
    for seed in 0..25 {
        let state = random_code_state(&code, seed).unwrap();
        for subset_size in [1usize, 2] {
            let d = max_marginal_mixedness_distance(&state, subset_size).unwrap();
            worst_marginal = worst_marginal.max(d);
            assert!(d <= TOL, "seed {seed}, {subset_size}-site marginal distance {d:e}");
        }
    }
    let lat = square(5);
    let mut worst_corr = 0.0f64;
    for state in [
        qecc_area_state(&code.codewords()[0], &lat, false).unwrap().state,
        qecc_area_state(&code.codewords()[1], &lat, false).unwrap().state,
    ] {
        let c = max_connected_correlator(&state).unwrap();
        worst_corr = worst_corr.max(c);
        assert!(c <= TOL, "connected correlator {c:e} on the 5×5 code state");
    }
    println!(
        "criterion 6: PASS — 25 code states: 1- and 2-site marginals maximally mixed within \
         {worst_marginal:.2e} ≤ 1e-12; all disjoint single-site connected correlators of the \
         5×5 hyperplane code states ≤ {worst_corr:.2e} ≤ 1e-12"
    );
}

#[test]
fn criterion_7_correlator_decay_series() {
    const VALUE_TOL: f64 = 1e-10;
    let p1 = SiteObservable::projector(3, 1).unwrap();
    let family = |l: usize| {
        let phi = ghz_phi(&ring(l))?;
        area_law_state(&phi, &square(l))
    };
    let ls: Vec<usize> = (3..=8).collect();
    let profile = decay_profile(&family, &p1, &p1, CorrelatorPattern::SameRow, &ls).unwrap();
    let mut worst = 0.0f64;
    for entry in &profile.entries {
        let l = entry.l as f64;
        let expected = 1.0 / (2.0 * l) - 1.0 / (4.0 * l * l);
        let gap = (entry.connected_value - expected).abs();
        worst = worst.max(gap);
        assert!(gap <= VALUE_TOL, "L={}: value off by {gap:e}", entry.l);
    }
    let exponent = profile.fitted_exponent.expect("series has no zeros");
    assert!(
        (exponent + 1.0).abs() <= 0.15,
        "fitted exponent {exponent} outside −1 ± 0.15"
    );
    println!(
        "criterion 7: PASS — same-row series L=3..8 matches 1/(2L) − 1/(4L²) within \
         {worst:.2e} ≤ 1e-10; log-log exponent {exponent:.4} ∈ −1 ± 0.15"
    );
}

#[test]
fn criterion_8_fingerprint_protocol() {
    let code = FingerprintCode::generate(64, 1).unwrap();

    // one-sided error in analytic mode
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let x = rng.random::<u64>();
        let out = equality_protocol(x, x, &code, 7, None).unwrap();
        assert_eq!(out.decision, Decision::Equal);
        assert_eq!(out.accept_probability, 1.0);
    }

    // measured false-equal rate at the δ = 10⁻³ repetition count
    let reps = minimal_repetitions(code.max_overlap(), 1e-3).unwrap();
    let mut pair_rng = ChaCha8Rng::seed_from_u64(2);
    let mut false_equals = 0u32;
    for i in 0..200u64 {
        let x = pair_rng.random::<u64>();
        let mut y = pair_rng.random::<u64>();
        while y == x {
            y = pair_rng.random::<u64>();
        }
        let out = equality_protocol_sampled(x, y, &code, reps, 10_000 + i).unwrap();
        if out.decision == Decision::Equal {
            false_equals += 1;
        }
    }
    let rate = false_equals as f64 / 200.0;
    assert!(rate <= 2e-3, "false-equal rate {rate} over 200 pairs at r={reps}");

    // ε = 0 reproduces the unperturbed outcome bit-exactly
    let plain = equality_protocol(123, 456, &code, reps, None).unwrap();
    let zero_eps = perturbed_protocol(123, 456, &code, 0.0, reps, 55, None).unwrap();
    assert_eq!(plain, zero_eps);

    // sampling agrees with the analytic probability within 3σ at 10⁵ shots
    let hx = build_fingerprint(123, &code).unwrap();
    let hy = build_fingerprint(456, &code).unwrap();
    let p = swap_test_accept(&hx, &hy).unwrap();
    let shots = 100_000u64;
    let freq = swap_test_sample(&hx, &hy, shots, 77).unwrap();
    let sigma = (p * (1.0 - p) / shots as f64).sqrt();
    assert!((freq - p).abs() <= 3.0 * sigma, "sampled {freq} vs analytic {p}");
    let self_freq = swap_test_sample(&hx, &hx, shots, 78).unwrap();
    assert_eq!(self_freq, 1.0);

    println!(
        "criterion 8: PASS — one-sided over 100 equal pairs; false-equal rate {rate} ≤ 2e-3 \
         over 200 unequal pairs at r={reps}; ε=0 outcome bit-exact; sampling within 3σ of \
         analytic at 10⁵ shots (|{freq:.5} − {p:.5}| ≤ {:.5})",
        3.0 * sigma
    );
}

#[test]
fn criterion_9_net_counting_arithmetic() {
    let q = construction_subspace_dim(2, 10).unwrap();
    assert_eq!(q, 103);
    let modest = counting_report(q, 0.1, 1_000_000).unwrap();
    assert!(!modest.exceeds_budget, "q=103 should fit a 10⁶-bit budget");
    let vast = counting_report(1 << 20, 0.1, 1_000_000).unwrap();
    assert!(vast.exceeds_budget, "q=2^20 should exceed a 10⁶-bit budget");
    let mut last = 0.0f64;
    for q in [103u128, 1 << 10, 1 << 15, 1 << 20] {
        let report = counting_report(q, 0.1, 1_000_000).unwrap();
        assert!(report.net_exponent_bits > last);
        last = report.net_exponent_bits;
    }
    println!(
        "criterion 9: PASS — q(L=10, D=2) = 103 keeps the ε=0.1 net inside a 10⁶-bit budget \
         ({:.1} bits); q = 2^20 exceeds it ({:.1} bits); exponent monotone in q",
        modest.net_exponent_bits, vast.net_exponent_bits
    );
}
