//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every criterion also has a wall-clock limit.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tradeoff_cli::io::write_space;
use tradeoff_cli::study::{desk_suite, run_study, StudyOptions, StudyRow, StudyStrategy};
use tradeoff_core::baselines::{crowding_distance, fast_nondominated_sort, Nsga2, Nsga2Params};
use tradeoff_core::bench::{exhaustive_oracle, synth_generate, SynthSpec, DEFAULT_ORACLE_CAP};
use tradeoff_core::boa::{boa_search, flex_candidates, prob_candidates, simple_candidates, BoaMode, SigmoidParams};
use tradeoff_core::combined::CombinedConfiguration;
use tradeoff_core::metrics::{coverage, CoverageReport};
use tradeoff_core::pareto::{excludes, pareto_extract};
use tradeoff_core::viper::{best_framework_bands, compute_pir, interpolate_runtime, DEFAULT_GRANULARITY};
use tradeoff_core::{Aggregation, Configuration, Evaluator, Knob, Record, TradeoffPoint, TradeoffSpace};

type Check = Result<String, String>;
type Session = (Vec<Vec<u8>>, BTreeMap<String, Vec<u8>>);
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pt(a: f64, r: f64) -> TradeoffPoint {
    TradeoffPoint::new(a, r).unwrap()
}

fn one_knob_space(id: &str, points: &[TradeoffPoint]) -> TradeoffSpace {
    let knobs = vec![Knob::indexed("k", points.len(), 0).unwrap()];
    let records = points
        .iter()
        .enumerate()
        .map(|(i, p)| Record::new(Configuration::new(id, [("k", i)]), *p))
        .collect();
    TradeoffSpace::new(id, knobs.clone(), records, Configuration::defaults(id, &knobs)).unwrap()
}

fn random_space(rng: &mut ChaCha8Rng, id: &str, max_points: usize) -> TradeoffSpace {
    let n = rng.gen_range(1..=max_points);
    // coarse grid: plenty of ties and exact duplicates
    let points: Vec<TradeoffPoint> = (0..n)
        .map(|_| pt(rng.gen_range(0..40) as f64 / 40.0, rng.gen_range(1..41) as f64 / 8.0))
        .collect();
    one_knob_space(id, &points)
}

/// Combined trade-off: losses and runtimes of the parts add up.
struct Additive(HashMap<Configuration, TradeoffPoint>);

impl Additive {
    fn new(spaces: &[TradeoffSpace]) -> Self {
        Self(
            spaces
                .iter()
                .flat_map(|s| s.records().iter().map(|r| (r.config.clone(), r.point)))
                .collect(),
        )
    }
}

impl Evaluator for Additive {
    fn evaluate(&self, c: &CombinedConfiguration, _input: &str) -> tradeoff_core::Result<TradeoffPoint> {
        let (mut a, mut r) = (0.0, 0.0);
        for part in c.parts().values() {
            let p = self.0[part];
            a += p.accuracy_loss();
            r += p.runtime();
        }
        TradeoffPoint::new(a, r)
    }
}

fn inputs() -> Vec<String> {
    vec!["in".to_string()]
}

fn criterion_1() -> Check {
    let x = [pt(0.2, 0.6), pt(0.3, 0.4), pt(0.5, 0.3)];
    let y = [pt(0.1, 0.9), pt(0.35, 0.7), pt(0.6, 0.5)];
    let (cxy, cyx) = (coverage(&x, &y).unwrap(), coverage(&y, &x).unwrap());
    ensure(cxy == 2.0 / 3.0, || format!("C(X,Y) = {cxy}"))?;
    ensure(cyx == 0.0, || format!("C(Y,X) = {cyx}"))?;
    let doc = CoverageReport::from_coverages(0.3664, 0.4416).doc_xy;
    ensure((doc + 0.0752).abs() <= 1e-12, || format!("DOC = {doc}"))?;
    Ok(format!("C(X,Y)=2/3, C(Y,X)=0, DOC={doc:.4}"))
}

fn criterion_2() -> Check {
    let rows: [(&[usize], u64); 11] = [
        (&[1, 3], 3),
        (&[6, 5, 1], 30),
        (&[3, 11], 33),
        (&[4, 3, 2], 24),
        (&[7, 14], 98),
        (&[4, 8], 32),
        (&[6, 8, 5], 240),
        (&[2, 8, 3], 48),
        (&[8, 5, 2], 80),
        (&[11, 5, 6], 330),
        (&[9, 5], 45),
    ];
    for (sizes, expected) in rows {
        let spaces: Vec<TradeoffSpace> = sizes
            .iter()
            .enumerate()
            .map(|(f, &k)| {
                let points: Vec<TradeoffPoint> = (0..k).map(|i| pt(i as f64 * 0.1, (k - i) as f64)).collect();
                one_knob_space(&format!("fw{f}"), &points)
            })
            .collect();
        let outcome = boa_search(
            &spaces,
            &BoaMode::Simple,
            &Additive::new(&spaces),
            &inputs(),
            Aggregation::Median,
        )
        .map_err(|e| e.to_string())?;
        ensure(outcome.audit.combined_explored == expected, || {
            format!("{sizes:?}: explored {} != {expected}", outcome.audit.combined_explored)
        })?;
    }
    Ok("11/11 rows".into())
}

fn brute_frontier(space: &TradeoffSpace) -> Vec<Configuration> {
    let recs = space.records();
    let mut keep: Vec<&Record> = recs
        .iter()
        .filter(|r| {
            recs.iter()
                .all(|q| !excludes(&q.point, &r.point) && !(q.point.same_coordinates(&r.point) && q.config < r.config))
        })
        .collect();
    keep.sort_by(|a, b| a.point.accuracy_loss().total_cmp(&b.point.accuracy_loss()));
    keep.into_iter().map(|r| r.config.clone()).collect()
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let space = random_space(&mut rng, "f", 200);
        let fast: Vec<Configuration> = pareto_extract(&space).unwrap().configs().cloned().collect();
        if fast != brute_frontier(&space) {
            mismatches += 1;
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok("1000 spaces, 0 mismatches".into())
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let a = random_space(&mut rng, "a", 40);
        let b = random_space(&mut rng, "b", 40);
        for s in [&a, &b] {
            ensure(
                flex_candidates(s, 0.0).unwrap() == simple_candidates(s).unwrap(),
                || format!("space {i}: candidate sets differ"),
            )?;
        }
        let spaces = [a, b];
        let eval = Additive::new(&spaces);
        let run = |mode| {
            boa_search(&spaces, &mode, &eval, &inputs(), Aggregation::Median)
                .unwrap()
                .report()
        };
        let (simple, flex) = (run(BoaMode::Simple), run(BoaMode::Flex { threshold: 0.0 }));
        let bytes = |r: &tradeoff_core::SearchReport| serde_json::to_string(&r.frontier).unwrap();
        ensure(bytes(&simple) == bytes(&flex), || {
            format!("space pair {i}: frontier reports differ")
        })?;
    }
    Ok("100 spaces, sets and frontier reports identical".into())
}

fn criterion_5() -> Check {
    // frontier (0, 2), (1, 1); off-frontier points at distance 0, 0.05, 0.1, 0.2
    // from (0, 2) under unit spans
    let points = [
        pt(0.0, 2.0),
        pt(1.0, 1.0),
        pt(0.05, 2.0),
        pt(0.1, 2.0),
        pt(0.2, 2.0),
        pt(0.0, 2.0),
    ];
    let space = one_knob_space("f", &points);
    let params = SigmoidParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 100_000;
    let mut hits = [0usize; 6];
    for _ in 0..trials {
        let set = prob_candidates(&space, &params, &mut rng).unwrap();
        for (k, hit) in hits.iter_mut().enumerate() {
            if set.contains(&Configuration::new("f", [("k", k)])) {
                *hit += 1;
            }
        }
    }
    let freq = |k: usize| hits[k] as f64 / trials as f64;
    ensure(hits[0] == trials && hits[1] == trials && hits[5] == trials, || {
        format!("zero-distance points missed: {hits:?}")
    })?;
    ensure((freq(2) - 0.924).abs() <= 0.01, || format!("f(0.05) = {}", freq(2)))?;
    ensure((freq(3) - 0.5).abs() <= 0.01, || format!("f(0.1) = {}", freq(3)))?;
    ensure(freq(4) <= 0.017, || format!("f(0.2) = {}", freq(4)))?;
    Ok(format!(
        "f(0.05)={:.4} f(0.1)={:.4} f(0.2)={:.4}",
        freq(2),
        freq(3),
        freq(4)
    ))
}

fn criterion_6() -> Check {
    let hulls = BTreeMap::from([
        ("B".to_string(), vec![pt(0.0, 1.0), pt(0.5, 0.5)]),
        ("M".to_string(), vec![pt(0.0, 0.8), pt(0.5, 0.2)]),
    ]);
    let chart = compute_pir(&hulls, "B", DEFAULT_GRANULARITY).map_err(|e| e.to_string())?;
    let (b, m) = (&chart.series[0], &chart.series[1]);
    ensure((m.pir[0] - 1.0 / 3.0).abs() <= 1e-9, || {
        format!("PIR_M(0) = {}", m.pir[0])
    })?;
    let last = *m.pir.last().unwrap();
    ensure((last - 1.0).abs() <= 1e-9, || format!("PIR_M(MaxX) = {last}"))?;
    let (lo, hi) = b
        .pir
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &p| (l.min(p), h.max(p)));
    ensure(hi - lo <= 1e-12, || "baseline series not constant".into())?;
    let bands = best_framework_bands(&hulls, chart.grid()).map_err(|e| e.to_string())?;
    for (i, &a) in chart.grid().iter().enumerate() {
        let best_pir = chart
            .series
            .iter()
            .max_by(|x, y| {
                x.pir[i]
                    .total_cmp(&y.pir[i])
                    .then_with(|| y.framework_id.cmp(&x.framework_id))
            })
            .unwrap();
        let fastest = hulls
            .iter()
            .min_by(|x, y| {
                interpolate_runtime(x.1, a)
                    .unwrap()
                    .total_cmp(&interpolate_runtime(y.1, a).unwrap())
            })
            .unwrap()
            .0;
        ensure(&best_pir.framework_id == fastest, || {
            format!("argmax PIR != argmin runtime at {a}")
        })?;
        let band = bands.bands.iter().find(|bd| bd.start <= a && a <= bd.end).unwrap();
        ensure(&band.framework_id == fastest, || format!("band disagrees at {a}"))?;
    }
    let all: Vec<f64> = chart.series.iter().flat_map(|s| s.pir.iter().copied()).collect();
    ensure(all.contains(&0.0) && all.contains(&1.0), || {
        "global PIR extremes not attained".into()
    })?;
    Ok(format!("PIR_M(0)={:.9}, PIR_M(MaxX)={last}", m.pir[0]))
}

fn peel(points: &[TradeoffPoint]) -> Vec<usize> {
    let mut rank = vec![usize::MAX; points.len()];
    let mut level = 0;
    while rank.contains(&usize::MAX) {
        let remaining: Vec<usize> = (0..points.len()).filter(|&i| rank[i] == usize::MAX).collect();
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| excludes(&points[j], &points[i])))
            .collect();
        for i in front {
            rank[i] = level;
        }
        level += 1;
    }
    rank
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let n = rng.gen_range(1..=100);
        let points: Vec<TradeoffPoint> = (0..n)
            .map(|_| pt(rng.gen_range(0..30) as f64 / 30.0, rng.gen_range(1..31) as f64))
            .collect();
        ensure(fast_nondominated_sort(&points) == peel(&points), || {
            format!("population {i}: ranks differ")
        })?;
    }
    let front = [pt(0.0, 3.0), pt(0.1, 2.0), pt(0.3, 1.5), pt(0.6, 1.0)];
    let crowd = crowding_distance(&front);
    ensure(
        crowd[0].is_infinite() && crowd[3].is_infinite() && crowd[1].is_finite(),
        || format!("crowding {crowd:?}"),
    )?;

    let bench = synth_generate(&SynthSpec {
        interaction_density: 0.3,
        seed: 77,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let spaces = bench.training_spaces().map_err(|e| e.to_string())?;
    let train = &bench.inputs().training;
    let front0 = |pts: &[TradeoffPoint]| -> Vec<TradeoffPoint> {
        let rank = fast_nondominated_sort(pts);
        pts.iter().zip(rank).filter(|(_, r)| *r == 0).map(|(p, _)| *p).collect()
    };
    let min = |pts: &[TradeoffPoint], f: fn(&TradeoffPoint) -> f64| pts.iter().map(f).fold(f64::INFINITY, f64::min);
    for seed in 0..10 {
        let params = Nsga2Params {
            seed,
            generations: 50,
            ..Default::default()
        };
        let mut run = Nsga2::new(&spaces, params, &bench, train, Aggregation::Median).map_err(|e| e.to_string())?;
        let mut prev = run.population_points();
        for g in 1..50 {
            run.step().map_err(|e| e.to_string())?;
            let next = run.population_points();
            let old = front0(&prev);
            ensure(
                front0(&next).iter().all(|q| !old.iter().any(|p| excludes(p, q))),
                || format!("seed {seed} gen {g}: new front dominated by old front"),
            )?;
            ensure(
                min(&next, TradeoffPoint::accuracy_loss) <= min(&prev, TradeoffPoint::accuracy_loss)
                    && min(&next, TradeoffPoint::runtime) <= min(&prev, TradeoffPoint::runtime),
                || format!("seed {seed} gen {g}: extreme point lost"),
            )?;
            prev = next;
        }
    }
    Ok("500 populations match peeling; elitism holds on 10 seeds x 50 generations".into())
}

fn criterion_8() -> Check {
    for seed in 0..20 {
        let spec = SynthSpec {
            frameworks: 3,
            knobs_per_framework: 2,
            levels_per_knob: 4,
            interaction_density: 0.0,
            noise_scale: 0.0,
            seed,
            ..Default::default()
        };
        let bench = synth_generate(&spec).map_err(|e| e.to_string())?;
        let spaces = bench.training_spaces().map_err(|e| e.to_string())?;
        let train = &bench.inputs().training;
        let boa =
            boa_search(&spaces, &BoaMode::Simple, &bench, train, Aggregation::Median).map_err(|e| e.to_string())?;
        let oracle = exhaustive_oracle(&bench, train, DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
        let same = boa.frontier.tradeoffs() == oracle.frontier.tradeoffs()
            && boa.frontier.configs().eq(oracle.frontier.configs());
        ensure(same, || format!("seed {seed}: frontiers differ"))?;
    }
    Ok("20 seeds, 4096-configuration spaces".into())
}

fn non_separable_seed() -> Option<u64> {
    (0..50).find(|&seed| {
        let bench = synth_generate(&SynthSpec {
            interaction_density: 0.3,
            seed,
            ..Default::default()
        })
        .unwrap();
        let optimal: BTreeSet<Configuration> = bench
            .training_spaces()
            .unwrap()
            .iter()
            .flat_map(|s| pareto_extract(s).unwrap().configs().cloned().collect::<Vec<_>>())
            .collect();
        let oracle = exhaustive_oracle(&bench, &bench.inputs().training, DEFAULT_ORACLE_CAP).unwrap();
        let found = oracle
            .frontier
            .configs()
            .any(|c| c.parts().values().any(|p| !optimal.contains(p)));
        found
    })
}

fn criterion_9() -> Check {
    let seed = non_separable_seed().ok_or("no seed with a non-separable optimum")?;
    let rows = run_study(
        &desk_suite(),
        &[StudyStrategy::BoaFlex, StudyStrategy::Nsga2],
        &[0],
        &StudyOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let docs: Vec<(String, f64)> = rows
        .iter()
        .filter(|r| r.strategy == StudyStrategy::BoaFlex)
        .map(|r| (r.app.clone(), r.doc_vs_nsga2.unwrap()))
        .collect();
    let wins = docs.iter().filter(|(_, d)| *d >= 0.0).count();
    let listing: Vec<String> = docs.iter().map(|(a, d)| format!("{a}={d:.3}")).collect();
    ensure(wins >= 4, || {
        format!("flex DOC >= 0 in {wins}/5 apps [{}]", listing.join(" "))
    })?;
    Ok(format!(
        "non-separable seed {seed}; flex DOC >= 0 in {wins}/5 apps [{}]",
        listing.join(" ")
    ))
}

fn simple_rows(noise: f64) -> Result<Vec<StudyRow>, String> {
    let apps: BTreeMap<String, SynthSpec> = desk_suite()
        .into_iter()
        .map(|(name, spec)| {
            (
                name,
                SynthSpec {
                    noise_scale: noise,
                    ..spec
                },
            )
        })
        .collect();
    run_study(&apps, &[StudyStrategy::BoaSimple], &[0], &StudyOptions::default()).map_err(|e| e.to_string())
}

fn criterion_10() -> Check {
    for r in simple_rows(0.0)? {
        let (a, t) = (
            r.r_accuracy.ok_or("degenerate study")?,
            r.r_runtime.ok_or("degenerate study")?,
        );
        ensure((a - 1.0).abs() <= 1e-12 && (t - 1.0).abs() <= 1e-12, || {
            format!("{} zero noise: r = ({a}, {t})", r.app)
        })?;
    }
    let mut worst = f64::INFINITY;
    for r in simple_rows(0.01)? {
        let (a, t) = (
            r.r_accuracy.ok_or("degenerate study")?,
            r.r_runtime.ok_or("degenerate study")?,
        );
        worst = worst.min(a).min(t);
        ensure(a >= 0.99 && t >= 0.99, || {
            format!("{} noise 0.01: r = ({a}, {t})", r.app)
        })?;
    }
    Ok(format!("zero noise r = 1; noise 0.01 min r = {worst:.4}"))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tradeoff"))
        .args(args)
        .current_dir(dir)
        .env_remove("TRADEOFF_OUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`{}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                files.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    files
}

fn cli_session(dir: &Path) -> Result<Session, String> {
    let spec = SynthSpec {
        frameworks: 2,
        knobs_per_framework: 2,
        levels_per_knob: 3,
        interaction_density: 0.3,
        noise_scale: 0.01,
        seed: 11,
        ..Default::default()
    };
    std::fs::write(dir.join("spec.json"), serde_json::to_string_pretty(&spec).unwrap()).unwrap();
    // a hand-written space next to the generated ones
    let extra = one_knob_space("manual", &[pt(0.0, 4.0), pt(0.05, 3.0), pt(0.02, 2.0), pt(0.3, 1.0)]);
    std::fs::write(dir.join("manual.csv"), write_space(&extra)).unwrap();

    let commands: &[&[&str]] = &[
        &["generate", "spec.json", "--out-dir", "gen"],
        &["pareto", "gen/fw0.csv", "--svg", "fw0.svg"],
        &["pareto", "manual.csv"],
        &["compare", "gen/fw0.csv", "gen/fw1.csv", "--out", "cmp"],
        &[
            "combine",
            "--mode",
            "simple",
            "--evaluator",
            "synth:spec.json",
            "--inputs",
            "train",
            "--out",
            "simple.json",
        ],
        &[
            "combine",
            "--mode",
            "flex",
            "--threshold",
            "0.1",
            "--evaluator",
            "synth:spec.json",
            "--out",
            "flex.json",
        ],
        &[
            "combine",
            "--mode",
            "prob",
            "--seed",
            "5",
            "--evaluator",
            "synth:spec.json",
            "--out",
            "prob.json",
        ],
        &[
            "combine",
            "gen/fw0.csv",
            "gen/fw1.csv",
            "--evaluator",
            "table:gen/table.csv",
            "--inputs",
            "test",
            "--out",
            "table.json",
        ],
        &[
            "baseline",
            "--strategy",
            "mckp",
            "--evaluator",
            "synth:spec.json",
            "--out",
            "mckp.json",
        ],
        &[
            "baseline",
            "--strategy",
            "nsga2",
            "--seed",
            "3",
            "--evaluator",
            "synth:spec.json",
            "--out",
            "nsga2.json",
        ],
        &[
            "study",
            "spec.json",
            "--seeds",
            "0,1",
            "--strategies",
            "boa-simple,boa-flex,boa-prob,mckp,nsga2,oracle",
        ],
    ];
    let mut stdouts = Vec::new();
    for args in commands {
        stdouts.push(run_cli(dir, args)?);
    }
    Ok((stdouts, snapshot(dir)))
}

fn criterion_11() -> Check {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (out_a, files_a) = cli_session(a.path())?;
    let (out_b, files_b) = cli_session(b.path())?;
    ensure(out_a == out_b, || "standard output differs between runs".into())?;
    ensure(files_a.keys().eq(files_b.keys()), || "different files written".into())?;
    for (name, bytes) in &files_a {
        ensure(&files_b[name] == bytes, || format!("{name} differs between runs"))?;
    }
    Ok(format!(
        "{} commands, {} output files byte-identical",
        out_a.len(),
        files_a.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "coverage golden values", Duration::from_secs(1), criterion_1),
        (2, "cross-product accounting", Duration::from_secs(1), criterion_2),
        (3, "pareto oracle equivalence", Duration::from_secs(10), criterion_3),
        (4, "flex(0) equals simple", Duration::from_secs(10), criterion_4),
        (5, "sigmoid inclusion statistics", Duration::from_secs(5), criterion_5),
        (6, "viper contract", Duration::from_secs(1), criterion_6),
        (7, "nsga-ii internals", Duration::from_secs(30), criterion_7),
        (8, "separable ground truth", Duration::from_secs(60), criterion_8),
        (
            9,
            "non-independence and doc vs nsga-ii",
            Duration::from_secs(300),
            criterion_9,
        ),
        (10, "train/test correlation", Duration::from_secs(120), criterion_10),
        (11, "cli determinism", Duration::from_secs(60), criterion_11),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time limit")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n:>2} {status} {name}: {detail} [{elapsed:.2?} / limit {limit:?}]");
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
