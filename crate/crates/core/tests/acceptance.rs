//! Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero when a
//! hard criterion fails. Criterion 7 only warns.
//!
//! All density comparisons are exact (cross-multiplied integers or big
//! rationals); the only float thresholds are the soft ratios of criterion 7.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ddsg::dalvks::{
    build_lp_p, dalvks_accel_with, dalvks_lp_full_with, dalvks_peel, dalvks_prop2, DemandVector, LpFullOptions,
};
use ddsg::ddsp::{ceil_inverse, ddsp_approx, diversify, reduction_instance, DdspParams, GammaSolver, Reduction};
use ddsg::dense::greedy_plus_plus;
use ddsg::generators::{gen_er, gen_planted, ColorMode, GenSpec};
use ddsg::graph::{ColoredGraph, Density, Fraction, Subset};
use ddsg::harness::{at_least, ratio_instances, run_ratio_suite, summarize_ratios, RatioSuiteConfig};
use ddsg::lp::LpEngine;
use ddsg::oracle::{brute_force_dalks, brute_force_damks, brute_force_dalvks, brute_force_ddsp, brute_force_where, milp_dalvks};
use ddsg::par;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_SUITE_SIZE: usize = 300;
const ORACLE_SUITE_MAX_N: usize = 12;
const ORACLE_SUITE_MAX_COLORS: usize = 3;
const CRITERION_1_TIME_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_SUITE_SIZE: usize = 200;
const SOFT_MEDIAN_ACCEL: f64 = 0.95;
const SOFT_MIN_PROP2: f64 = 0.8;
const PLANTED_SEEDS: u64 = 10;
const PLANTED_MONOCHROME_MIN: usize = 9;
const REDUCTION_MAX_N: usize = 10;
const REDUCTION_GRAPHS: usize = 60;

struct Rng(ChaCha8Rng);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `lo..=hi`.
    fn range(&mut self, lo: usize, hi: usize) -> usize {
        let span = (hi - lo + 1) as u128;
        lo + ((self.0.next_u64() as u128 * span) >> 64) as usize
    }

    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn subset(&mut self, g: &ColoredGraph, min_size: usize) -> Subset {
        let n = g.node_count();
        let size = self.range(min_size.clamp(1, n), n);
        let mut nodes: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = self.range(i, n - 1);
            nodes.swap(i, j);
        }
        nodes.truncate(size);
        Subset::new(g, nodes).expect("nonempty")
    }
}

/// Random graph with `min_n..=max_n` nodes, edge probability in [0.2, 0.8]
/// and up to `max_colors` uniformly drawn colors.
fn random_graph(rng: &mut Rng, min_n: usize, max_n: usize, max_colors: usize) -> ColoredGraph {
    let n = rng.range(min_n, max_n);
    let p = 0.2 + 0.6 * rng.unit();
    let c = rng.range(1, max_colors);
    let seed = rng.0.next_u64();
    gen_er(&GenSpec::erdos_renyi(n, p, ColorMode::UniformRandom(c), seed)).expect("valid spec")
}

struct Instance {
    g: ColoredGraph,
    k: DemandVector,
}

fn oracle_suite() -> Vec<Instance> {
    let mut rng = Rng::new(0xACCE_0001);
    (0..ORACLE_SUITE_SIZE)
        .map(|_| {
            let g = random_graph(&mut rng, 4, ORACLE_SUITE_MAX_N, ORACLE_SUITE_MAX_COLORS);
            let k = g.color_class_sizes().iter().map(|&s| rng.range(0, s)).collect();
            let k = DemandVector::new(&g, k).expect("demands within supply");
            Instance { g, k }
        })
        .collect()
}

struct Report {
    hard_failures: usize,
    lines: Vec<(u32, String)>,
}

impl Report {
    fn line(&mut self, id: u32, pass: bool, name: &str, detail: String) {
        if !pass {
            self.hard_failures += 1;
        }
        let line = format!("{} criterion {id}: {name} ({detail})", if pass { "PASS" } else { "FAIL" });
        eprintln!("{line}");
        self.lines.push((id, line));
    }

    fn soft(&mut self, id: u32, pass: bool, name: &str, detail: String) {
        let line = format!("{} criterion {id}: {name} ({detail})", if pass { "PASS" } else { "WARN" });
        eprintln!("{line}");
        self.lines.push((id, line));
    }
}

fn fmt(d: Option<Density>) -> String {
    d.map_or("none".into(), |d| d.to_string())
}

/// 1: MILP oracle equals enumeration on the shared suite.
fn criterion_1(report: &mut Report, suite: &[Instance], lp: &LpEngine) {
    let start = Instant::now();
    let mismatches: Vec<String> = par::map(suite, |inst| {
        let bf = brute_force_dalvks(&inst.g, inst.k.as_slice()).map(|r| r.optimum());
        let milp = milp_dalvks(&inst.g, &inst.k, lp).map(|r| r.optimum());
        match (bf, milp) {
            (Ok(a), Ok(b)) if a == b => None,
            (Ok(a), Ok(b)) => Some(format!("brute force {} vs milp {}", fmt(a), fmt(b))),
            (a, b) => Some(format!("error: {:?} / {:?}", a.err(), b.err())),
        }
    })
    .into_iter()
    .flatten()
    .collect();
    let elapsed = start.elapsed();
    report.line(
        1,
        mismatches.is_empty() && elapsed < CRITERION_1_TIME_LIMIT,
        "milp oracle equals brute force",
        format!(
            "{} instances, {} mismatches, exact equality, {:.1}s of {}s allowed{}",
            suite.len(),
            mismatches.len(),
            elapsed.as_secs_f64(),
            CRITERION_1_TIME_LIMIT.as_secs(),
            mismatches.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    );
}

/// Candidate caps in {1/|C|, 1/2, 2/3, 1} that the whole graph meets.
fn feasible_alphas(g: &ColoredGraph) -> Vec<Fraction> {
    let colors = g.color_count() as u64;
    let mut out = vec![Fraction::new(1, colors), Fraction::new(1, 2), Fraction::new(2, 3), Fraction::new(1, 1)];
    out.retain(|&a| a * colors >= Fraction::from_integer(1) && g.diversity().satisfies(a));
    out.sort();
    out.dedup();
    out
}

/// 2: the diversity-capped solver meets γ·max{1/⌈1/α⌉, 1/(αn)}·OPT.
fn criterion_2(report: &mut Report, lp: &LpEngine) {
    let mut rng = Rng::new(0xACCE_0002);
    let mut cases = Vec::new();
    while cases.len() < RANDOM_SUITE_SIZE {
        let g = random_graph(&mut rng, 4, 12, 4);
        let alphas = feasible_alphas(&g);
        let alpha = alphas[rng.range(0, alphas.len() - 1)];
        cases.push((g, alpha));
    }
    let violations: Vec<String> = par::map(&cases, |(g, alpha)| {
        let opt = brute_force_ddsp(g, *alpha).expect("small graph").optimum().expect("V is feasible");
        let n = g.node_count() as u64;
        let factor = Fraction::new(1, ceil_inverse(*alpha) as u64).max(Fraction::new(1, 1) / (*alpha * n));
        let mut bad = Vec::new();
        for solver in [GammaSolver::DalksLp, GammaSolver::DalksPeel] {
            let params = DdspParams::new(g, *alpha, solver).expect("alpha in range");
            let found = ddsp_approx(g, params, lp).ok().and_then(|o| o.into_subset());
            let ok = found
                .as_ref()
                .is_some_and(|s| s.diversity().satisfies(*alpha) && at_least(s.density(), solver.gamma() * factor, opt));
            if !ok {
                bad.push(format!(
                    "{solver:?} alpha {alpha} n {n}: got {} vs OPT {opt}",
                    fmt(found.map(|s| s.density()))
                ));
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect();
    report.line(
        2,
        violations.is_empty(),
        "diversity-capped approximation floor",
        format!(
            "{} instances x 2 solvers, {} violations, exact{}",
            cases.len(),
            violations.len(),
            violations.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    );
}

/// 3: Diversify keeps c_max and grows by at most min{⌈1/α⌉, αn}.
fn criterion_3(report: &mut Report) {
    let mut rng = Rng::new(0xACCE_0003);
    let mut violations = Vec::new();
    for _ in 0..RANDOM_SUITE_SIZE {
        let g = random_graph(&mut rng, 4, 16, 5);
        let alphas = feasible_alphas(&g);
        let alpha = alphas[rng.range(0, alphas.len() - 1)];
        let s = rng.subset(&g, ceil_inverse(alpha));
        let n = g.node_count() as u64;
        match diversify(&g, &s, alpha) {
            Ok(out) => {
                let size = out.size() as u64;
                let by_ceil = size <= ceil_inverse(alpha) as u64 * s.size() as u64;
                let by_alpha = size * *alpha.denom() <= *alpha.numer() * n * s.size() as u64;
                let keeps = out.diversity().c_max == s.diversity().c_max;
                if !(by_ceil && by_alpha && keeps && out.diversity().satisfies(alpha)) {
                    violations.push(format!("alpha {alpha}, |S| {} -> {size}", s.size()));
                }
            }
            Err(e) => violations.push(format!("alpha {alpha}: {e}")),
        }
    }
    report.line(
        3,
        violations.is_empty(),
        "diversify growth bound",
        format!(
            "{RANDOM_SUITE_SIZE} instances, {} violations, exact{}",
            violations.len(),
            violations.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    );
}

/// 4: LP(p) with p_c = |S_c| is at least d(S).
fn criterion_4(report: &mut Report, lp: &LpEngine) {
    let mut rng = Rng::new(0xACCE_0004);
    let cases: Vec<(ColoredGraph, Subset)> = (0..RANDOM_SUITE_SIZE)
        .map(|_| {
            let g = random_graph(&mut rng, 3, 14, 4);
            let s = rng.subset(&g, 1);
            (g, s)
        })
        .collect();
    let violations: Vec<String> = par::map(&cases, |(g, s)| {
        let solution = lp.solve_lp(&build_lp_p(g, s.color_counts()));
        match solution.as_ref().ok().and_then(|sol| sol.value()) {
            Some(v) if s.density().cmp_rational(v).is_le() => None,
            Some(v) => Some(format!("LP {v} < d(S) {}", s.density())),
            None => Some(format!("LP failed: {solution:?}")),
        }
    })
    .into_iter()
    .flatten()
    .collect();
    report.line(
        4,
        violations.is_empty(),
        "LP(p) dominates the sets it is built from",
        format!(
            "{} pairs, {} violations, exact rational comparison{}",
            cases.len(),
            violations.len(),
            violations.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    );
}

struct DemandRun {
    opt: Density,
    slack_opt: Option<Density>,
    full: Density,
    full_unpruned: Density,
    full_lp_solves: usize,
    accel: Density,
    accel_lp_solves: usize,
    prop2: Density,
    peel: Density,
}

fn demand_run(inst: &Instance, lp: &LpEngine) -> Result<DemandRun, String> {
    let (g, k) = (&inst.g, &inst.k);
    let e = |e: ddsg::error::Error| e.to_string();
    let opt = brute_force_dalvks(g, k.as_slice()).map_err(e)?.optimum().ok_or("infeasible")?;
    let demand = k.as_slice();
    let slack_opt = brute_force_where(g, |counts, _| {
        counts.iter().zip(demand).all(|(&have, &need)| need == 0 || have as usize > need)
    })
    .map_err(e)?
    .optimum();
    let pruned = dalvks_lp_full_with(g, k, lp, LpFullOptions::default()).map_err(e)?;
    let unpruned = dalvks_lp_full_with(
        g,
        k,
        lp,
        LpFullOptions {
            prune: false,
            ..LpFullOptions::default()
        },
    )
    .map_err(e)?;
    let accel = dalvks_accel_with(g, k, lp, None).map_err(e)?;
    let prop2 = dalvks_prop2(g, k, lp).map_err(e)?;
    let peel = dalvks_peel(g, k).map_err(e)?;
    for (name, s) in [("lp_full", &pruned.best), ("accel", &accel.best), ("prop2", &prop2), ("peel", &peel)] {
        if !k.is_satisfied_by(s) {
            return Err(format!("{name} returned an infeasible set"));
        }
    }
    Ok(DemandRun {
        opt,
        slack_opt,
        full: pruned.best.density(),
        full_unpruned: unpruned.best.density(),
        full_lp_solves: pruned.lp_solves,
        accel: accel.best.density(),
        accel_lp_solves: accel.lp_solves,
        prop2: prop2.density(),
        peel: peel.density(),
    })
}

/// 5, 6 and 8 share the oracle suite.
fn criteria_5_6_8(report: &mut Report, suite: &[Instance], lp: &LpEngine) {
    let runs = par::map(suite, |inst| demand_run(inst, lp));
    let errors: Vec<&String> = runs.iter().filter_map(|r| r.as_ref().err()).collect();
    let ok: Vec<&DemandRun> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
    let third = Fraction::new(1, 3);
    let quarter = Fraction::new(1, 4);
    let half = Fraction::new(1, 2);

    let full_bad = ok.iter().filter(|r| !at_least(r.full, third, r.opt)).count();
    let accel_bad = ok.iter().filter(|r| !at_least(r.accel, third, r.opt)).count();
    let prop2_bad = ok.iter().filter(|r| !at_least(r.prop2, quarter, r.opt)).count();
    report.line(
        5,
        errors.is_empty() && full_bad + accel_bad + prop2_bad == 0,
        "per-color demand ratio floors",
        format!(
            "{} instances, {} errors; violations: lp_full<1/3 {full_bad}, accel<1/3 {accel_bad}, prop2<1/4 {prop2_bad}; exact{}",
            suite.len(),
            errors.len(),
            errors.first().map(|m| format!(", first error: {m}")).unwrap_or_default()
        ),
    );

    let slack: Vec<&&DemandRun> = ok.iter().filter(|r| r.slack_opt == Some(r.opt)).collect();
    let peel_bad = slack.iter().filter(|r| !at_least(r.peel, half, r.opt)).count();
    report.line(
        6,
        errors.is_empty() && peel_bad == 0,
        "peeling is 1/2-approximate when an optimum has slack",
        format!("{} qualifying instances, {peel_bad} violations, exact", slack.len()),
    );

    let prune_bad = ok.iter().filter(|r| r.full != r.full_unpruned).count();
    let count_bad = ok.iter().filter(|r| r.accel_lp_solves > r.full_lp_solves).count();
    report.line(
        8,
        errors.is_empty() && prune_bad + count_bad == 0,
        "pruning soundness and accelerated LP count",
        format!(
            "{} instances, pruned != unpruned {prune_bad}, accel solves > full solves {count_bad}",
            ok.len()
        ),
    );
}

/// 7: empirical ratios on the two-color population. The thresholds warn;
/// the worst-case floors still fail.
fn criterion_7(report: &mut Report, lp: &LpEngine) {
    let instances = ratio_instances(&RatioSuiteConfig::default()).expect("valid config");
    let rows = run_ratio_suite(&instances, lp);
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let floor_bad = rows
        .iter()
        .filter(|r| match (r.opt, r.accel, r.prop2, r.lp_full) {
            (Some(opt), Some(a), Some(p), Some(f)) => {
                !(at_least(a, Fraction::new(1, 3), opt)
                    && at_least(f, Fraction::new(1, 3), opt)
                    && at_least(p, Fraction::new(1, 4), opt))
            }
            _ => false,
        })
        .count();
    report.line(
        7,
        errors == 0 && floor_bad == 0,
        "ratio suite worst-case floors",
        format!("{} instances, {errors} errors, {floor_bad} floor violations, exact", rows.len()),
    );
    match summarize_ratios(&rows) {
        Some(sum) => report.soft(
            7,
            sum.accel_median >= SOFT_MEDIAN_ACCEL && sum.prop2_min >= SOFT_MIN_PROP2,
            "empirical ratios",
            format!(
                "median accel {:.4} (want >= {SOFT_MEDIAN_ACCEL}), min prop2 {:.4} (want >= {SOFT_MIN_PROP2}), min accel {:.4}, min lp_full {:.4}",
                sum.accel_median, sum.prop2_min, sum.accel_min, sum.lp_full_min
            ),
        ),
        None => report.soft(7, false, "empirical ratios", "no completed rows".into()),
    }
}

/// 9: homophilous clusters.
fn criterion_9(report: &mut Report, lp: &LpEngine) {
    let seeds: Vec<u64> = (0..PLANTED_SEEDS).collect();
    let rows = par::map(&seeds, |&seed| {
        let g = gen_planted(&GenSpec::planted_default(ColorMode::PerCluster, seed)).expect("valid spec");
        let dsp = greedy_plus_plus(&g, 5).expect("nonempty graph");
        let target = Fraction::new(1, g.color_count() as u64);
        let params = DdspParams::new(&g, target, GammaSolver::auto(&g, ddsg::ddsp::DEFAULT_LP_SIZE_LIMIT)).expect("valid alpha");
        let diverse = ddsp_approx(&g, params, lp).ok().and_then(|o| o.into_subset());
        let mono = dsp.diversity().alpha() == Fraction::from_integer(1);
        let balanced = diverse.is_some_and(|s| s.diversity().alpha() == target);
        (mono, balanced)
    });
    let mono = rows.iter().filter(|r| r.0).count();
    let balanced = rows.iter().filter(|r| r.1).count();
    report.line(
        9,
        mono >= PLANTED_MONOCHROME_MIN && balanced == seeds.len(),
        "planted clusters: densest is monochrome, capped solver is balanced",
        format!(
            "monochrome {mono}/{} (need {PLANTED_MONOCHROME_MIN}), alpha = 1/|C| {balanced}/{} (need all)",
            seeds.len(),
            seeds.len()
        ),
    );
}

/// 10: reductions from at-least-k and at-most-k.
fn criterion_10(report: &mut Report) {
    let mut rng = Rng::new(0xACCE_0010);
    let cases: Vec<(ColoredGraph, usize)> = (0..REDUCTION_GRAPHS)
        .map(|_| {
            let g = random_graph(&mut rng, 2, REDUCTION_MAX_N, 1);
            let k = rng.range(1, g.node_count());
            (g, k)
        })
        .collect();
    let bad: Vec<String> = par::map(&cases, |(g, k)| {
        let mut out = Vec::new();
        let (h, alpha) = reduction_instance(Reduction::AtLeastK(*k), g).expect("valid reduction");
        let ddsp = brute_force_ddsp(&h, alpha).expect("small").optimum();
        let dalks = brute_force_dalks(g, *k).expect("small").optimum();
        if ddsp != dalks {
            out.push(format!("at least {k}: {} vs {}", fmt(ddsp), fmt(dalks)));
        }
        let (h, alpha) = reduction_instance(Reduction::AtMostK(*k), g).expect("valid reduction");
        let ddsp = brute_force_ddsp(&h, alpha).expect("small").optimum();
        let damks = brute_force_damks(g, *k).expect("small").optimum();
        let doubled = ddsp.map(|d| Density::new(2 * d.edges, d.nodes).expect("nonempty"));
        if doubled != damks {
            out.push(format!("at most {k}: 2 x {} vs {}", fmt(ddsp), fmt(damks)));
        }
        out
    })
    .into_iter()
    .flatten()
    .collect();
    report.line(
        10,
        bad.is_empty(),
        "reductions: DDSP = at-least-k, 2 x DDSP = at-most-k",
        format!(
            "{} graphs with n <= {REDUCTION_MAX_N}, {} mismatches, exact{}",
            cases.len(),
            bad.len(),
            bad.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    );
}

fn main() -> ExitCode {
    // libtest flags such as `--nocapture` or filters are ignored.
    let lp = LpEngine::exact();
    let mut report = Report {
        hard_failures: 0,
        lines: Vec::new(),
    };
    let suite = oracle_suite();
    criterion_1(&mut report, &suite, &lp);
    criterion_2(&mut report, &lp);
    criterion_3(&mut report);
    criterion_4(&mut report, &lp);
    criteria_5_6_8(&mut report, &suite, &lp);
    criterion_7(&mut report, &lp);
    criterion_9(&mut report, &lp);
    criterion_10(&mut report);
    report.lines.sort_by_key(|(id, _)| *id);
    println!();
    for (_, line) in &report.lines {
        println!("{line}");
    }
    if report.hard_failures > 0 {
        println!("acceptance: {} hard failure(s)", report.hard_failures);
        ExitCode::FAILURE
    } else {
        println!("acceptance: all hard criteria pass");
        ExitCode::SUCCESS
    }
}
