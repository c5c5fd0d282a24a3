//! Acceptance gate: ten end-to-end checks of the simulator's published
//! behaviors, each at a pinned tolerance. Every check prints its measured
//! values and one `criterion N: PASS|FAIL` verdict line before asserting,
//! so a red run documents exactly what was observed
//! (`cargo test -p mwng --test acceptance -- --nocapture` shows the values
//! for green runs too).

use std::ops::Range;
use std::sync::OnceLock;

use mwng::config::preset;
use mwng_core::agent::{consensus_probability, AgentMemory};
use mwng_core::analysis::{self, SweepBase};
use mwng_core::engine::{self, Mode, RunResult, SimConfig, SimState, Strategy};
use mwng_core::lexicon::{self, CategoryId, PatternId, PatternSet, TestSet, Word, WordCounter};
use mwng_core::net::{self, NetSpec, Topology};
use mwng_core::rng::{self, Stream};

// Report-group order in english5 series: subject, verb, object, complement.
const S: usize = 0;
const V: usize = 1;
const O: usize = 2;
const C: usize = 3;

fn verdict(n: u32, pass: bool) -> bool {
    println!("criterion {n}: {}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn config(topology: Topology, mode: Mode, set: Option<PatternSet>, seed: u64) -> SimConfig {
    SimConfig {
        net: NetSpec { topology, seed },
        mode,
        pattern_set: set,
        strategy: Strategy::Direct,
        max_steps: engine::DEFAULT_MAX_STEPS,
        seed,
        metrics_stride: engine::DEFAULT_METRICS_STRIDE,
    }
}

/// Runs english5 once per seed on the given topology (network regrown from
/// each run's seed).
fn english5_batch(topology: Topology, seeds: Range<u64>) -> Vec<RunResult> {
    seeds
        .map(|seed| {
            engine::run(&config(topology, Mode::MultiWord, Some(lexicon::english5()), seed))
                .expect("run failed")
        })
        .collect()
}

fn median(samples: &[f64]) -> f64 {
    analysis::box_stats(samples).expect("median of non-empty samples").median
}

// Shared batches: several criteria read the same experiments, so compute
// each once per process.
fn rg005_runs() -> &'static [RunResult] {
    static RUNS: OnceLock<Vec<RunResult>> = OnceLock::new();
    RUNS.get_or_init(|| english5_batch(Topology::RandomGraph { n: 500, p: 0.05 }, 0..10))
}

fn sw_runs() -> &'static [RunResult] {
    static RUNS: OnceLock<Vec<RunResult>> = OnceLock::new();
    RUNS.get_or_init(|| {
        english5_batch(Topology::SmallWorld { n: 500, k_half: 50, rp: 0.1 }, 0..10)
    })
}

// ---------------------------------------------------------------------------
// 1. Closed-form consensus probability vs Monte Carlo
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_consensus_probability_oracle_matches_monte_carlo() {
    let trials = 100_000u64;

    // Sentence game: speaker holds 2 patterns and 3 words in each used
    // category; hearer holds 1 of the patterns and shares 1 word per
    // category. Closed form: (1/2) * (1/3) * (1/3) = 1/18.
    let set = lexicon::english5();
    let w = |id: u64, c: u8| Word { id, category: CategoryId(c) };
    let speaker = AgentMemory::from_parts(
        &set,
        vec![PatternId(0), PatternId(1)],
        vec![
            vec![w(1, 0), w(2, 0), w(3, 0)],
            vec![w(11, 1), w(12, 1), w(13, 1)],
            vec![],
            vec![],
            vec![],
        ],
    )
    .unwrap();
    let hearer = AgentMemory::from_parts(
        &set,
        vec![PatternId(0)],
        vec![
            vec![w(1, 0), w(99, 0)],
            vec![w(11, 1), w(98, 1)],
            vec![],
            vec![],
            vec![],
        ],
    )
    .unwrap();
    let expected = 1.0 / 18.0;
    let oracle = consensus_probability(&speaker, &hearer, &set).unwrap();
    let observed = monte_carlo(&speaker, &hearer, &set, trials, 42);
    println!(
        "sentence game: oracle {oracle:.6}, observed {observed:.6}, expected {expected:.6} (+/-0.004)"
    );
    let multi_ok = (oracle - expected).abs() < 1e-12 && (observed - expected).abs() <= 0.004;

    // Word game: speaker holds 5 names, hearer shares 2 -> 0.4.
    let single = lexicon::single_word();
    let n = |id: u64| Word { id, category: CategoryId(0) };
    let speaker1 = AgentMemory::from_parts(
        &single,
        vec![PatternId(0)],
        vec![vec![n(1), n(2), n(3), n(4), n(5)]],
    )
    .unwrap();
    let hearer1 =
        AgentMemory::from_parts(&single, vec![PatternId(0)], vec![vec![n(1), n(2), n(77)]])
            .unwrap();
    let oracle1 = consensus_probability(&speaker1, &hearer1, &single).unwrap();
    let observed1 = monte_carlo(&speaker1, &hearer1, &single, trials, 43);
    println!(
        "word game: oracle {oracle1:.6}, observed {observed1:.6}, expected 0.400000 (+/-0.005)"
    );
    let single_ok = (oracle1 - 0.4).abs() < 1e-12 && (observed1 - 0.4).abs() <= 0.005;

    assert!(verdict(1, multi_ok && single_ok));
}

/// Fraction of utter/hear trials that end in consensus, from fresh clones
/// each trial (uttering may invent into empty slots, which must not leak
/// between trials).
fn monte_carlo(
    speaker: &AgentMemory,
    hearer: &AgentMemory,
    set: &PatternSet,
    trials: u64,
    seed: u64,
) -> f64 {
    let mut rng = rng::seeded(seed, Stream::Interactions);
    let mut hits = 0u64;
    for _ in 0..trials {
        let mut counter = WordCounter::starting_at(1_000);
        let mut s = speaker.clone();
        let mut h = hearer.clone();
        let utterance = s.utter(set, &mut counter, &mut rng);
        if h.hear(&utterance.sentence, set).unwrap().is_consensus() {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

// ---------------------------------------------------------------------------
// 2. Word-game peak capacity on sparse random graphs
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_single_word_peak_matches_capacity_bound() {
    let topology = Topology::RandomGraph { n: 500, p: 0.03 };
    let mut peaks = Vec::new();
    let mut ratios = Vec::new();
    let mut degrees = Vec::new();
    for seed in 0..10u64 {
        let result =
            engine::run(&config(topology, Mode::SingleWord, None, seed)).expect("run failed");
        assert!(result.converged, "seed {seed} did not converge");
        let peak = result.series.peaks().max_total_words_sum as f64;
        let net = net::generate(&NetSpec { topology, seed }).unwrap();
        let k = net.average_degree();
        let bound = analysis::n_max(500, k);
        println!("seed {seed}: peak {peak}, <k> {k:.2}, capacity {bound:.1}");
        peaks.push(peak);
        ratios.push(peak / bound);
        degrees.push(k);
    }
    let median_peak = median(&peaks);
    let mean_k = degrees.iter().sum::<f64>() / degrees.len() as f64;
    let bound = analysis::n_max(500, mean_k);
    let rel = (median_peak - bound).abs() / bound;
    println!(
        "median peak {median_peak}, capacity n/2*(1+<k>/2) = {bound:.1}, deviation {:.1}% \
         (median per-seed ratio {:.4})",
        rel * 100.0,
        median(&ratios)
    );
    assert!(verdict(2, rel <= 0.15));
}

// ---------------------------------------------------------------------------
// 3. The shortest pattern always wins in english5
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_simplest_pattern_always_wins() {
    let mut pass = true;
    let rg = english5_batch(Topology::RandomGraph { n: 500, p: 0.03 }, 0..10);
    let sf = english5_batch(Topology::ScaleFree { n: 500, m0: 26, m: 25 }, 0..10);
    let batches: [(&str, &[RunResult]); 3] =
        [("RG/0.03", &rg), ("SW/50/0.1", sw_runs()), ("SF/25", &sf)];
    for (name, runs) in batches {
        let converged = runs.iter().filter(|r| r.converged).count();
        let p1_wins = runs
            .iter()
            .filter(|r| r.converged_pattern_label.as_deref() == Some("P1"))
            .count();
        let finals_ok = runs.iter().all(|r| {
            let last = r.series.rows().last().unwrap();
            last.total_words == [500, 500, 0, 0]
        });
        println!(
            "{name}: {converged}/10 converged, {p1_wins}/10 on P1, \
             final totals subject=verb=500 object=complement=0: {finals_ok}"
        );
        pass &= converged == 10 && p1_wins == 10 && finals_ok;
    }
    assert!(verdict(3, pass));
}

// ---------------------------------------------------------------------------
// 4. Peak vocabulary sizes per sentence role
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_distinct_word_peaks_scale_with_slot_usage() {
    let runs = rg005_runs();
    let peak = |r: &RunResult, g: usize| r.series.peaks().max_distinct_words[g] as f64;
    let subjects: Vec<f64> = runs.iter().map(|r| peak(r, S)).collect();
    let verbs: Vec<f64> = runs.iter().map(|r| peak(r, V)).collect();
    let o_ratio: Vec<f64> = runs.iter().map(|r| peak(r, O) / peak(r, S)).collect();
    let c_ratio: Vec<f64> = runs.iter().map(|r| peak(r, C) / peak(r, S)).collect();

    let med_s = median(&subjects);
    let med_v = median(&verbs);
    let med_o = median(&o_ratio);
    let med_c = median(&c_ratio);
    println!("median peak distinct subject {med_s}, verb {med_v} (band [200, 300])");
    println!("median object/subject {med_o:.3} (band [0.65, 0.95])");
    println!("median complement/subject {med_c:.3} (band [0.25, 0.55])");
    let pass = (200.0..=300.0).contains(&med_s)
        && (200.0..=300.0).contains(&med_v)
        && (0.65..=0.95).contains(&med_o)
        && (0.25..=0.55).contains(&med_c);
    assert!(verdict(4, pass));
}

// ---------------------------------------------------------------------------
// 5. Pattern-store saturation level
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_pattern_store_saturation_band() {
    let peaks: Vec<f64> = sw_runs()
        .iter()
        .map(|r| r.series.peaks().max_total_patterns as f64)
        .collect();
    let med = median(&peaks);
    println!("peak total patterns per seed: {peaks:?}");
    println!("median {med} (band (2000, 2500))");
    assert!(verdict(5, med > 2000.0 && med < 2500.0));
}

// ---------------------------------------------------------------------------
// 6. Which patterns can win under each structural relation
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_structural_sets_reproduce_winner_statistics() {
    let trio = [
        Topology::RandomGraph { n: 500, p: 0.05 },
        Topology::SmallWorld { n: 500, k_half: 50, rp: 0.2 },
        Topology::ScaleFree { n: 500, m0: 51, m: 50 },
    ];
    let mut pass = true;
    for kind in [TestSet::A, TestSet::B, TestSet::C, TestSet::D, TestSet::E] {
        let set = lexicon::test_set(kind);
        let mut results = Vec::new();
        for topology in trio {
            for seed in 10..20u64 {
                results.push(
                    engine::run(&config(topology, Mode::MultiWord, Some(set.clone()), seed))
                        .expect("run failed"),
                );
            }
        }
        let tally = analysis::tally(&results).unwrap();
        assert_eq!(tally.converged_trials, 30, "set {kind:?} had non-converged runs");
        let p = &tally.proportions;
        let ok = match kind {
            TestSet::A => p.iter().all(|&x| (0.35..=0.65).contains(&x)),
            TestSet::B => p.iter().all(|&x| (0.05..=0.30).contains(&x)),
            TestSet::C | TestSet::D => tally.counts[3] == 0,
            TestSet::E => p[2] <= 0.15 && p[0] + p[1] >= 0.85,
        };
        println!(
            "set {kind:?}: counts {:?}, proportions {:?} -> {}",
            tally.counts,
            p.iter().map(|x| (x * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            if ok { "ok" } else { "OUT OF BAND" }
        );
        pass &= ok;
    }
    assert!(verdict(6, pass));
}

// ---------------------------------------------------------------------------
// 7. Density-sweep trends on random graphs
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_density_sweep_trends() {
    let grid = [0.05, 0.1, 0.2, 0.4, 0.7, 1.0];
    let base = SweepBase {
        mode: Mode::MultiWord,
        pattern_set: Some(lexicon::english5()),
        strategy: Strategy::Direct,
        max_steps: engine::DEFAULT_MAX_STEPS,
        metrics_stride: engine::DEFAULT_METRICS_STRIDE,
        base_seed: 0,
    };
    let points = analysis::sweep_rg(&grid, 500, 10, &base).expect("sweep failed");

    let times: Vec<f64> = points.iter().map(|pt| pt.convergence_time.median).collect();
    let distinct: Vec<f64> = points.iter().map(|pt| pt.max_distinct_words.median).collect();
    for (pt, (t, d)) in points.iter().zip(times.iter().zip(&distinct)) {
        println!("p={}: median convergence {t}, median peak distinct {d}", pt.p);
    }

    // Trend 1: convergence time rises with density over the sparse half.
    let low: Vec<f64> = times[..4].to_vec();
    let rho = spearman(&[0.05, 0.1, 0.2, 0.4], &low);
    // Trend 2: peak vocabulary is density-insensitive across the whole grid.
    let (lo, hi) = distinct
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let spread = (hi - lo) / lo;
    println!("Spearman(p, median convergence) over p <= 0.4: {rho:.3} (must be > 0)");
    println!("median peak distinct spread: {:.2}% (must be < 10%)", spread * 100.0);
    assert!(verdict(7, rho > 0.0 && spread < 0.10));
}

/// Spearman rank correlation with average ranks on ties.
fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let rx = ranks(x);
    let ry = ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mx) * (b - my);
        vx += (a - mx).powi(2);
        vy += (b - my).powi(2);
    }
    cov / (vx * vy).sqrt()
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

// ---------------------------------------------------------------------------
// 8. Success-rate shape: low first half, saturated finish
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_success_rate_stays_low_then_saturates() {
    let mut all_low_first_half = true;
    let mut all_end_at_one = true;
    for (seed, result) in rg005_runs().iter().enumerate() {
        let t = result.convergence_time.expect("converged");
        let rows = result.series.rows();
        let first_half: Vec<f64> = rows
            .iter()
            .filter(|row| row.step * 2 <= t)
            .map(|row| row.success_rate)
            .collect();
        let spikes = first_half.iter().filter(|&&sr| sr >= 0.2).count();
        let mean = first_half.iter().sum::<f64>() / first_half.len() as f64;
        let final_sr = rows.last().unwrap().success_rate;

        // Where a 51-sample moving average first reaches 0.2, as a fraction
        // of the run: locates the knee the raw-window samples blur out.
        let all_sr: Vec<f64> = rows.iter().map(|r| r.success_rate).collect();
        let crossing = smoothed_crossing(&all_sr, 51, 0.2)
            .map(|i| rows[i].step as f64 / t as f64);
        println!(
            "seed {seed}: first-half samples {}, mean sr {mean:.4}, samples >= 0.2: {spikes} \
             ({:.1}%), smoothed 0.2-crossing at {:.3} of run, final sr {final_sr}",
            first_half.len(),
            100.0 * spikes as f64 / first_half.len() as f64,
            crossing.unwrap_or(f64::NAN),
        );
        all_low_first_half &= spikes == 0;
        all_end_at_one &= final_sr == 1.0;
    }
    println!(
        "first half below 0.2 on every sample: {all_low_first_half}; \
         final sample at 1.0: {all_end_at_one}"
    );
    // The success rate is measured over 10-interaction windows, so early
    // windows with 2+ lucky successes read as 0.2 even while the mean stays
    // near 0.03; the smoothed signal crosses 0.2 only in the final tenth of
    // the run. The raw-sample clause is asserted as stated regardless.
    assert!(verdict(8, all_low_first_half && all_end_at_one));
}

fn smoothed_crossing(values: &[f64], window: usize, level: f64) -> Option<usize> {
    if values.len() < window {
        return None;
    }
    let mut sum: f64 = values[..window].iter().sum();
    if sum / window as f64 >= level {
        return Some(window / 2);
    }
    for i in window..values.len() {
        sum += values[i] - values[i - window];
        if sum / window as f64 >= level {
            return Some(i - window / 2);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// 9. Property suite: determinism, absorption, collapse, learning, generators
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_property_suite() {
    let mut pass = true;
    let mut check = |name: &str, ok: bool| {
        println!("{name}: {}", if ok { "ok" } else { "FAILED" });
        pass &= ok;
    };

    // Determinism: identical configs replay to identical results.
    let cfg = config(
        Topology::RandomGraph { n: 80, p: 0.2 },
        Mode::MultiWord,
        Some(lexicon::english5()),
        3,
    );
    let a = engine::run(&cfg).unwrap();
    let b = engine::run(&cfg).unwrap();
    check("determinism (replayed run is identical)", a == b);

    // Absorbing state: once global consensus holds, 10^4 further
    // interactions change nothing.
    let set = lexicon::english5();
    let network = net::generate(&NetSpec {
        topology: Topology::RandomGraph { n: 60, p: 0.3 },
        seed: 4,
    })
    .unwrap();
    let mut state = SimState::new(network, &set);
    let mut interaction_rng = rng::seeded(4, Stream::Interactions);
    let mut steps = 0u64;
    while !state.is_global_consensus(&set) {
        state.step(&set, Strategy::Direct, &mut interaction_rng);
        steps += 1;
        assert!(steps < 5_000_000, "consensus never reached");
    }
    let frozen = state.memories().to_vec();
    for _ in 0..10_000 {
        state.step(&set, Strategy::Direct, &mut interaction_rng);
    }
    check(
        "absorbing state (10^4 post-consensus interactions)",
        state.memories() == &frozen[..] && state.is_global_consensus(&set),
    );

    // Collapse postconditions: exactly the agreed sentence survives.
    let w = |id: u64, c: u8| Word { id, category: CategoryId(c) };
    let mut memory = AgentMemory::from_parts(
        &set,
        vec![PatternId(0), PatternId(2), PatternId(4)],
        vec![
            vec![w(1, 0), w(2, 0)],
            vec![w(3, 1)],
            vec![w(4, 2)],
            vec![w(5, 3)],
            vec![w(6, 4), w(7, 4)],
        ],
    )
    .unwrap();
    let words_before = memory.total_words();
    let sentence = lexicon::Sentence::new(&set, PatternId(2), vec![w(1, 0), w(3, 1), w(6, 4)])
        .unwrap();
    let dropped = memory.collapse(&sentence);
    check(
        "collapse keeps exactly the agreed sentence",
        memory.patterns() == [PatternId(2)]
            && memory.total_words() == 3
            && memory.knows(&sentence)
            && dropped.dropped_patterns == 2
            && dropped.dropped_words.len() == words_before - 3
            && memory.store(CategoryId(2)).is_empty()
            && memory.store(CategoryId(3)).is_empty(),
    );

    // Hearing is idempotent: a sentence learned once adds nothing twice.
    let mut hearer = AgentMemory::new(&set);
    let first = hearer.hear(&sentence, &set).unwrap();
    let after_first = hearer.total_items();
    let second = hearer.hear(&sentence, &set).unwrap();
    check(
        "no duplicate learning (second hearing is consensus)",
        !first.is_consensus()
            && first.words_learned() == 3
            && second.is_consensus()
            && hearer.total_items() == after_first,
    );

    // Generator invariants: pinned edge counts, connectivity, determinism.
    let sw = net::generate(&NetSpec {
        topology: Topology::SmallWorld { n: 100, k_half: 5, rp: 0.3 },
        seed: 7,
    })
    .unwrap();
    check(
        "small world keeps n*k_half edges and stays connected",
        sw.edge_count() == 500 && sw.is_connected(),
    );
    let sf = net::generate(&NetSpec {
        topology: Topology::ScaleFree { n: 100, m0: 4, m: 3 },
        seed: 7,
    })
    .unwrap();
    check(
        "scale-free grows m edges per node on the complete seed",
        sf.edge_count() == 6 + 96 * 3 && sf.is_connected(),
    );
    let full = net::generate(&NetSpec {
        topology: Topology::RandomGraph { n: 50, p: 1.0 },
        seed: 1,
    })
    .unwrap();
    check("random graph at p=1 is complete", full.edge_count() == 50 * 49 / 2);
    let sf_again = net::generate(&NetSpec {
        topology: Topology::ScaleFree { n: 100, m0: 4, m: 3 },
        seed: 7,
    })
    .unwrap();
    let sf_other = net::generate(&NetSpec {
        topology: Topology::ScaleFree { n: 100, m0: 4, m: 3 },
        seed: 8,
    })
    .unwrap();
    let degree_sum: u64 = (0..sf.node_count()).map(|v| sf.degree(v) as u64).sum();
    check(
        "generation is seed-deterministic with handshake-consistent degrees",
        sf_again == sf && sf_other != sf && degree_sum == 2 * sf.edge_count() as u64,
    );

    assert!(verdict(9, pass));
}

// ---------------------------------------------------------------------------
// 10. Preset statistics match their references
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_preset_statistics_match_references() {
    // (preset, avg degree, avg path length, avg clustering) — the published
    // reference statistics each preset is tuned to reproduce; tolerances
    // 5% / 5% / 15%.
    let references: [(&str, f64, f64, f64); 12] = [
        ("RG/0.03", 14.98, 2.5956, 0.0302),
        ("RG/0.05", 24.97, 2.2228, 0.0500),
        ("RG/0.1", 49.98, 1.9057, 0.1002),
        ("SW/50/0.1", 100.0, 1.8049, 0.5676),
        ("SW/50/0.2", 100.0, 1.7997, 0.4382),
        ("SW/50/0.3", 100.0, 1.7996, 0.3457),
        ("SW/60/0.1", 120.0, 1.7599, 0.5725),
        ("SW/60/0.2", 120.0, 1.7595, 0.4521),
        ("SW/60/0.3", 120.0, 1.7595, 0.3672),
        ("SF/25", 48.64, 1.9272, 0.1972),
        ("SF/50", 94.81, 1.8102, 0.3088),
        ("SF/75", 138.47, 1.7228, 0.3983),
    ];
    let seeds = 30u64;
    let mut pass = true;
    for (name, ref_deg, ref_apl, ref_cc) in references {
        let topology = preset(name).expect("known preset");
        let (mut deg, mut apl, mut cc) = (0.0, 0.0, 0.0);
        for seed in 0..seeds {
            let net = net::generate(&NetSpec { topology, seed }).unwrap();
            let stats = net::graph_stats(&net).unwrap();
            deg += stats.avg_degree;
            apl += stats.avg_path_length;
            cc += stats.avg_clustering;
        }
        let n = seeds as f64;
        let (deg, apl, cc) = (deg / n, apl / n, cc / n);
        let dd = (deg - ref_deg).abs() / ref_deg;
        let da = (apl - ref_apl).abs() / ref_apl;
        let dc = (cc - ref_cc).abs() / ref_cc;
        let ok = dd <= 0.05 && da <= 0.05 && dc <= 0.15;
        println!(
            "{name}: degree {deg:.2} (ref {ref_deg}, d {:.1}%), \
             path length {apl:.4} (ref {ref_apl}, d {:.1}%), \
             clustering {cc:.4} (ref {ref_cc}, d {:.1}%) -> {}",
            dd * 100.0,
            da * 100.0,
            dc * 100.0,
            if ok { "ok" } else { "OUT OF TOLERANCE" }
        );
        pass &= ok;
    }
    assert!(verdict(10, pass));
}
