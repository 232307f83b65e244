use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sidon_core::container::{
    build_certificate, certify, core_algorithm, reconstruct_containers, verify_certificate, BuildOptions, CaseTag,
    CoreEngine, Mode, StopBranch, TieOrder,
};
use sidon_core::enumerate::{erdos_turan_set, max_sidon_heuristic, singer_set};
use sidon_core::tuples::vertex_stats;
use sidon_core::{is_sidon, Error, IntSet, Params};

fn random_set(n: u32, size: usize, seed: u64) -> IntSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    IntSet::new((0..size).map(|_| rng.gen_range(1..=n)).collect()).unwrap()
}

/// Multiplicity of `{a1, a2}` straight from the tuple definition.
fn mult_by_definition(a1: u32, a2: u32, u: &IntSet) -> u64 {
    let (lo, hi) = (a1.min(a2), a1.max(a2));
    let mut m = 0;
    for u1 in u.iter() {
        for u2 in u.iter() {
            if lo + u1 == u2 + hi && lo != u2 && u1 != u2 && u1 != hi && lo != hi {
                m += 1;
            }
        }
    }
    m
}

struct Simulation {
    selected: Vec<u32>,
    available: Vec<u32>,
}

/// Step-by-step replay of the peeling loop with full degree recomputation.
fn simulate(n: u32, oracle: &IntSet, u: &IntSet, threshold: u64, stop_below: usize) -> Simulation {
    let size = n as usize + 1;
    let mut mult = vec![vec![0u64; size]; size];
    for a in 1..=n {
        for b in (a + 1)..=n {
            let m = mult_by_definition(a, b, u);
            mult[a as usize][b as usize] = m;
            mult[b as usize][a as usize] = m;
        }
    }
    let mut a: Vec<u32> = (1..=n).collect();
    let mut t = vec![0u64; size];
    let mut selected = Vec::new();
    while a.len() >= stop_below && !a.is_empty() {
        let degree = |v: u32| a.iter().map(|&w| mult[v as usize][w as usize]).sum::<u64>();
        let mut best = a[0];
        let mut best_deg = degree(best);
        for &v in &a[1..] {
            let d = degree(v);
            if d > best_deg {
                best = v;
                best_deg = d;
            }
        }
        a.retain(|&v| v != best);
        if oracle.contains(best) {
            selected.push(best);
            for &v in &a {
                t[v as usize] += mult[v as usize][best as usize];
            }
            a.retain(|&v| t[v as usize] <= threshold);
        }
    }
    selected.sort_unstable();
    Simulation { selected, available: a }
}

#[test]
fn core_loop_matches_reference_simulator() {
    let n = 256;
    let i = erdos_turan_set(11).unwrap();
    let out = core_algorithm(n, &IntSet::interval(n), &i, &i, 4.0, |s| s < 96, &TieOrder::Ascending).unwrap();
    let sim = simulate(n, &i, &i, 4, 96);
    assert_eq!(out.state.selected.as_slice(), sim.selected.as_slice());
    assert_eq!(out.state.available.as_slice(), sim.available.as_slice());
    assert_eq!(out.state.round, out.trace.len());
}

#[test]
fn core_loop_matches_simulator_on_random_inputs() {
    for seed in 0..6 {
        let n = 64;
        let i = random_set(n, 14, seed);
        let u = i.smallest(6);
        for threshold in [0u64, 2, 5] {
            let out =
                core_algorithm(n, &IntSet::interval(n), &i, &u, threshold as f64, |s| s < 20, &TieOrder::Ascending)
                    .unwrap();
            let sim = simulate(n, &i, &u, threshold, 20);
            assert_eq!(out.state.selected.as_slice(), sim.selected.as_slice(), "seed {seed} t {threshold}");
            assert_eq!(out.state.available.as_slice(), sim.available.as_slice());
        }
    }
}

#[test]
fn available_strictly_shrinks() {
    let n = 128;
    let i = random_set(n, 30, 9);
    let out = core_algorithm(n, &IntSet::interval(n), &i, &i.smallest(8), 1.0, |_| false, &TieOrder::Ascending).unwrap();
    assert!(out.state.available.is_empty());
    assert!(out.state.round <= n as usize);
    let mut size = n as usize;
    for log in &out.trace {
        let after = size - 1 - log.pruned.len();
        assert!(after < size);
        size = after;
    }
    assert_eq!(size, 0);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pruned_vertices_are_heavy(seed in any::<u64>(), size in 4usize..18, threshold in 0u64..6) {
        let n = 48;
        let i = random_set(n, size, seed);
        let u = i.smallest(size / 2);
        let rank = TieOrder::Ascending.ranks(n).unwrap();
        let mut engine = CoreEngine::new(n, &IntSet::interval(n), &i, &u, threshold as f64, &rank).unwrap();
        let mut pruned = Vec::new();
        while let Some(log) = engine.step() {
            pruned.extend(log.pruned);
            prop_assert!(engine.state().selected.is_subset(&i));
        }
        let t = engine.state().t;
        for v in pruned {
            let tv = t.get(&v).copied().unwrap_or(0);
            prop_assert!(tv > threshold);
            let with_v = i.with(v).unwrap();
            prop_assert!(tv <= vertex_stats(&with_v).s(v), "t({v}) = {tv}");
        }
    }

    #[test]
    fn state_invariants_hold_each_round(seed in any::<u64>(), threshold in 0u64..4) {
        let n = 40;
        let i = random_set(n, 12, seed);
        let rank = TieOrder::Ascending.ranks(n).unwrap();
        let mut engine = CoreEngine::new(n, &IntSet::interval(n), &i, &i, threshold as f64, &rank).unwrap();
        let mut round = 0;
        while engine.step().is_some() {
            round += 1;
            let state = engine.state();
            prop_assert_eq!(state.round, round);
            prop_assert!(state.selected.intersection(&state.available).is_empty());
            for v in state.available.iter() {
                prop_assert!(state.t.get(&v).copied().unwrap_or(0) <= threshold);
            }
        }
    }

    #[test]
    fn certificates_round_trip(seed in any::<u64>(), size in 0usize..60) {
        let n = 256;
        let params = Params::new(n, 0).unwrap();
        let set = random_set(n, size, seed);
        let (cert, chain, cleaned) = certify(&set, &params, seed, &BuildOptions::default()).unwrap();
        prop_assert_eq!(reconstruct_containers(&cert, &params).unwrap(), chain.clone());
        let report = verify_certificate(&cert, &chain, &set, &params);
        prop_assert!(report.pass, "failed {:?}", report.failed());
        prop_assert!(report.phase_bound_ok);
        let covered = chain.last().union(&cert.removed).union(&cert.selected());
        prop_assert!(set.is_subset(&covered));
        prop_assert_eq!(cleaned.union(&cert.removed), set);
    }
}

#[test]
fn round_trip_at_larger_n() {
    for n in [1024u32, 4096] {
        let params = Params::new(n, 0).unwrap();
        for seed in 0..20u64 {
            let size = 20 + (seed as usize * 13) % 200;
            let set = random_set(n, size, seed);
            let (cert, chain, _) = certify(&set, &params, seed, &BuildOptions::default()).unwrap();
            assert_eq!(reconstruct_containers(&cert, &params).unwrap(), chain, "n {n} seed {seed}");
            let report = verify_certificate(&cert, &chain, &set, &params);
            assert!(report.pass, "n {n} seed {seed}: {:?}", report.failed());
        }
    }
}

#[test]
fn build_is_deterministic() {
    let params = Params::new(1024, 0).unwrap();
    let set = random_set(1024, 90, 5);
    let a = certify(&set, &params, 7, &BuildOptions::default()).unwrap();
    let b = certify(&set, &params, 7, &BuildOptions::default()).unwrap();
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
    assert_eq!(serde_json::to_string(&a.0).unwrap(), serde_json::to_string(&b.0).unwrap());
}

#[test]
fn empty_set_has_no_phases() {
    let params = Params::new(4096, 0).unwrap();
    let opts = BuildOptions { mode: Mode::FewHeavy, ..BuildOptions::default() };
    let (cert, chain) = build_certificate(&IntSet::empty(), &params, 1, &opts).unwrap();
    assert_eq!(cert.phases, 0);
    assert!(cert.r[0].is_empty());
    assert_eq!(chain.c, vec![IntSet::interval(4096)]);
    let report = verify_certificate(&cert, &chain, &IntSet::empty(), &params);
    assert!(report.pass);
    assert!(report.stop_branches.contains(&StopBranch::NoPhases));
    assert_eq!(reconstruct_containers(&cert, &params).unwrap(), chain);
}

#[test]
fn maximal_sidon_set_at_4096() {
    let n = 4096;
    let params = Params::new(n, 0).unwrap();
    let mut set = max_sidon_heuristic(n).witness;
    for x in 1..=n {
        if let Ok(bigger) = set.with(x) {
            if is_sidon(&bigger) {
                set = bigger;
            }
        }
    }
    assert!(is_sidon(&set));
    let (cert, chain, cleaned) = certify(&set, &params, 3, &BuildOptions::default()).unwrap();
    assert_eq!(cleaned, set);
    assert!(cert.removed.is_empty());
    assert_eq!(cert.case_tag, CaseTag::FewHeavy);
    assert!(cert.r[0].is_empty());
    // |C₀ ∩ I| is far above √n / log n, so at least one phase runs.
    assert!(cert.phases >= 1);
    assert!(set.is_subset(&chain.last().union(&cert.selected())));
    let report = verify_certificate(&cert, &chain, &set, &params);
    assert!(report.pass, "{:?}", report.failed());
    assert_eq!(reconstruct_containers(&cert, &params).unwrap(), chain);
}

#[test]
fn two_singer_sets_at_4096() {
    let n = 4096;
    let params = Params::new(n, 0).unwrap();
    let d = singer_set(61).unwrap();
    let shifted = IntSet::new(d.iter().map(|x| x + 300).filter(|&x| x <= n).collect()).unwrap();
    let set = d.union(&shifted);
    assert!(!is_sidon(&set));
    let (cert, chain, _) = certify(&set, &params, 11, &BuildOptions::default()).unwrap();
    assert_eq!(cert.case_tag, CaseTag::FewHeavy);
    assert!(!cert.removed.is_empty());
    let report = verify_certificate(&cert, &chain, &set, &params);
    assert!(report.pass, "{:?}", report.failed());
    assert_eq!(reconstruct_containers(&cert, &params).unwrap(), chain);
}

#[test]
fn sampled_set_up_with_custom_thresholds() {
    let n = 256;
    let params = Params::with_thresholds(n, 0, 3.0, 1e9, 2.0, 2.0).unwrap();
    let set = random_set(n, 40, 21);
    let opts = BuildOptions { max_w_attempts: 200, ..BuildOptions::default() };
    let (cert, chain) = build_certificate(&set, &params, 4, &opts).unwrap();
    assert_eq!(cert.case_tag, CaseTag::Sampled);
    assert_eq!(cert.u[0].len(), params.u0_size());
    assert!(cert.u[0].is_subset(&set));
    let report = verify_certificate(&cert, &chain, &set, &params);
    assert!(report.pass, "{:?}", report.failed());
    assert_eq!(reconstruct_containers(&cert, &params).unwrap(), chain);
}

#[test]
fn mutated_certificates_are_caught() {
    let n = 1024;
    let params = Params::new(n, 0).unwrap();
    let set = max_sidon_heuristic(n).witness;
    let (cert, chain, _) = certify(&set, &params, 2, &BuildOptions::default()).unwrap();
    assert!(cert.phases >= 2);

    let mut bad = cert.clone();
    let drop = bad.u[0].as_slice()[0];
    bad.u[0] = bad.u[0].without(drop);
    let caught = match reconstruct_containers(&bad, &params) {
        Err(Error::MalformedCertificate(_)) => true,
        Ok(other) => other != chain || !verify_certificate(&bad, &other, &set, &params).pass,
        Err(e) => panic!("unexpected error {e}"),
    };
    assert!(caught);

    let mut short = cert.clone();
    short.r.pop();
    assert!(matches!(reconstruct_containers(&short, &params), Err(Error::MalformedCertificate(_))));

    let mut heavy = cert.clone();
    heavy.r[0] = IntSet::interval(200);
    let report = verify_certificate(&heavy, &chain, &set, &params);
    assert!(report.failed().contains(&"iii"));

    let outside = (1..=n).find(|&x| !chain.last().contains(x) && !cert.selected().contains(x) && !set.contains(x));
    let extra = set.with(outside.unwrap()).unwrap();
    let report = verify_certificate(&cert, &chain, &extra, &params);
    assert!(report.failed().contains(&"i"));
}

#[test]
fn l0_certificate_replays_to_complement() {
    let params = Params::new(1024, 0).unwrap();
    let set = IntSet::new(vec![5, 9]).unwrap();
    let (cert, chain) = build_certificate(&set, &params, 0, &BuildOptions::default()).unwrap();
    assert_eq!(cert.phases, 0);
    assert_eq!(reconstruct_containers(&cert, &params).unwrap(), chain);
    assert_eq!(chain.c[0], IntSet::interval(1024).difference(&cert.r[0]));
}

#[test]
fn certificate_json_round_trips() {
    let params = Params::new(1024, 0).unwrap();
    let set = random_set(1024, 80, 1);
    let (cert, chain, _) = certify(&set, &params, 1, &BuildOptions::default()).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back = serde_json::from_str(&text).unwrap();
    assert_eq!(cert, back);
    assert_eq!(reconstruct_containers(&back, &params).unwrap(), chain);
}

#[test]
fn explicit_tie_order_round_trips() {
    let n = 256;
    let params = Params::new(n, 0).unwrap();
    let set = random_set(n, 40, 77);
    let mut perm: Vec<u32> = (1..=n).collect();
    perm.reverse();
    let opts = BuildOptions { tie_order: TieOrder::Explicit(perm), ..BuildOptions::default() };
    let (cert, chain, _) = certify(&set, &params, 0, &opts).unwrap();
    assert_eq!(reconstruct_containers(&cert, &params).unwrap(), chain);
    assert!(verify_certificate(&cert, &chain, &set, &params).pass);
}
