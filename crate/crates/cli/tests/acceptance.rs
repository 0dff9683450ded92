//! One PASS/FAIL line per acceptance criterion. Tolerances are the constants
//! below; the test fails if any criterion does.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use fairgame::certify::{certify_partition, Verdict, DEFAULT_EDGE_BOUND};
use fairgame::fixpoint::check_odd_rank_descent;
use fairgame::generate::{random_game, RandomGameSpec};
use fairgame::mutate::mutate_liveness;
use fairgame::template::{build_rank_template, extract_even_strategy, validate_even_strategy, validate_odd_template};
use fairgame::zielonka::{safe_reach_even_fair, safe_reach_even_full};
use fairgame::{
    parse_game, solve_even_fp, solve_odd_fp, solve_zielonka_fair, write_game, Deadline, FpOptions, OddFairGame, Player,
    Region, ZlOptions,
};
use fairgame_cli::algo;
use fairgame_cli::bench::{self, BenchConfig, CorpusSpec, Instance, Status};
use fairgame_cli::Algo;

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const CROSS_MIN_INSTANCES: usize = 500;
const CROSS_MAX_VERTICES: usize = 30;
const CROSS_BUDGET: Duration = Duration::from_secs(300);
const ALPHAS: [u32; 5] = [0, 30, 50, 80, 100];
const CERTIFY_MAX_VERTICES: usize = 8;
const CERTIFY_MIN_INSTANCES: usize = 200;
const PROPERTY_CASES: usize = 250;
const PERF_GAMES_PER_PRIORITY: usize = 8;
const PERF_PRIORITIES: [u32; 3] = [4, 6, 8];
const PERF_MIN_VERTICES: usize = 500;
const PERF_MAX_VERTICES: usize = 3000;
const PERF_LIVENESS: u32 = 50;
const PERF_TIMEOUT: Duration = Duration::from_secs(10);
const PERF_BUDGET: Duration = Duration::from_secs(600);
/// OF-ZL's mean may exceed N-ZL's by at most this factor.
const PERF_NORMAL_FACTOR: f64 = 3.0;
const CSV_HEADER_LINE: &str = "instance,solver,vertices,edges,priorities,live_edges,time_ms,status,win_even,win_odd";

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn example1() -> OddFairGame {
    parse_game(include_str!("fixtures/example1.pg")).unwrap()
}

fn set(g: &OddFairGame, names: &[&str]) -> Region {
    Region::from_vertices(g.len(), names.iter().map(|n| g.vertex_by_name(n).unwrap()))
}

fn golden_regions() -> Outcome {
    let start = Instant::now();
    let g = example1();
    let v = g.full_view();
    let want_odd = set(&g, &["1a", "2b", "2c", "3a", "3b", "4a"]);
    let want_even = set(&g, &["2a"]);
    let (fp, _) = solve_odd_fp(&v, FpOptions::default()).unwrap();
    let zl = solve_zielonka_fair(&v, ZlOptions::default()).unwrap();
    let ok = fp == want_odd && v.complement(&fp) == want_even && zl.w_odd == want_odd && zl.w_even == want_even;
    let t = start.elapsed();
    outcome(ok && t < GOLDEN_BUDGET, format!("fp W_Odd {fp:?}, zl W_Odd {:?}, {t:?}", zl.w_odd))
}

fn golden_trace() -> Outcome {
    let g = example1();
    let (_, tr) = solve_odd_fp(&g.full_view(), FpOptions::traced()).unwrap();
    let c31 = g.priority_class(3).union(&g.priority_class(1));
    let c3 = g.priority_class(3);
    let checks: [(u32, &[usize], Region); 4] = [
        (1, &[0, 0, 0, 1], c31),
        (2, &[0, 0, 1], c3.clone()),
        (2, &[0, 0, 2], c3.union(&set(&g, &["2b"]))),
        (4, &[1], set(&g, &["2b", "2c", "3b"])),
    ];
    let bad: Vec<String> = checks
        .iter()
        .filter(|(level, idx, want)| tr.snapshot(*level, idx) != Some(want))
        .map(|(level, idx, _)| format!("level {level} at {idx:?}"))
        .collect();
    outcome(bad.is_empty(), if bad.is_empty() { "4 checkpoints".to_string() } else { bad.join(", ") })
}

fn golden_ranks() -> Outcome {
    let g = example1();
    let (_, tr) = solve_odd_fp(&g.full_view(), FpOptions::with_ranks()).unwrap();
    let a3 = tr.rank(g.vertex_by_name("3a").unwrap()).map(|r| r.interleaved());
    let m = tr.m_set();
    let b3 = g.vertex_by_name("3b").unwrap();
    let ok = a3 == Some(vec![2, 0, 1, 0]) && m == set(&g, &["3b"]) && g.priority(b3) % 2 == 1;
    let names: Vec<String> = m.iter().map(|v| g.label(v)).collect();
    outcome(ok, format!("rank(3a) = {a3:?}, M = {names:?}"))
}

fn random_instance(n: usize, p: u32, d: usize, alpha: u32, seed: u64) -> OddFairGame {
    let g = random_game(&RandomGameSpec { vertices: n, max_priority: p, min_degree: 1, max_degree: d }, seed);
    mutate_liveness(&g, alpha, seed)
}

fn solve_with(g: &OddFairGame, a: Algo) -> Region {
    let pg = a.prepare(g);
    algo::run(&pg.full_view(), a, false, Deadline::none()).unwrap().w_odd
}

fn cross_solver() -> Outcome {
    let start = Instant::now();
    let bases = CROSS_MIN_INSTANCES.div_ceil(ALPHAS.len()) + 10;
    let (mut count, mut plain, mut bad) = (0, 0, Vec::new());
    for i in 0..bases as u64 {
        let n = 1 + (i as usize * 7) % CROSS_MAX_VERTICES;
        for &alpha in &ALPHAS {
            let g = random_instance(n, 2 + (i % 6) as u32, 1 + (i % 3) as usize, alpha, 1000 + i);
            let zl = solve_with(&g, Algo::OfZl);
            let mut ok = zl == solve_with(&g, Algo::OfFp);
            if alpha == 0 {
                ok &= zl == solve_with(&g, Algo::NZl) && zl == solve_with(&g, Algo::NFp);
                plain += 1;
            }
            if !ok {
                bad.push(format!("base {i} alpha {alpha}"));
            }
            count += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && count >= CROSS_MIN_INSTANCES && t < CROSS_BUDGET,
        format!("{count} instances ({plain} without liveness), {} disagreements {bad:?}, {t:?}", bad.len()),
    )
}

fn certification() -> Outcome {
    let (mut within, mut large, mut failures) = (0, 0, Vec::new());
    let mut seed = 0u64;
    while within < CERTIFY_MIN_INSTANCES + 100 && seed < 20_000 {
        let n = 1 + (seed as usize) % CERTIFY_MAX_VERTICES;
        let g = random_instance(n, 1 + (seed % 5) as u32, 1 + (seed % 3) as usize, ALPHAS[(seed % 5) as usize], seed);
        seed += 1;
        let v = g.full_view();
        let (w_odd, tr) = solve_odd_fp(&v, FpOptions::with_ranks()).unwrap();
        let (w_even, tre) = solve_even_fp(&v, FpOptions::with_ranks()).unwrap();
        let t = build_rank_template(&v, &w_odd, &tr).unwrap();
        let s = extract_even_strategy(&v, &w_even, &tre).unwrap();
        let fp = certify_partition(&v, &w_even, &w_odd, &t, &s, DEFAULT_EDGE_BOUND);
        let zl = solve_zielonka_fair(&v, ZlOptions { templates: true, ..Default::default() }).unwrap();
        let zt = zl.odd_template.as_ref().unwrap();
        let zs = zl.even_strategy.as_ref().unwrap();
        let z = certify_partition(&v, &zl.w_even, &zl.w_odd, zt, zs, DEFAULT_EDGE_BOUND);
        for (who, verdict) in [("fp", &fp), ("zl", &z)] {
            if let Verdict::Failed(f) = verdict {
                failures.push(format!("{who} seed {}: {f}", seed - 1));
            }
        }
        if matches!(fp, Verdict::TooLarge { .. }) || matches!(z, Verdict::TooLarge { .. }) {
            large += 1;
        } else {
            within += 1;
        }
    }
    outcome(
        failures.is_empty() && within >= CERTIFY_MIN_INSTANCES,
        format!("{within} instances certified by both, {large} over the edge bound, failures {failures:?}"),
    )
}

fn random_set(n: usize, bits: u64) -> Region {
    Region::from_vertices(n, (0..n).filter(|&v| bits >> (v % 64) & 1 == 1))
}

fn properties() -> Outcome {
    let mut bad: Vec<String> = Vec::new();
    let mut fail = |ok: bool, what: &str, case: usize| {
        if !ok && bad.len() < 10 {
            bad.push(format!("{what} (case {case})"));
        }
    };
    for case in 0..PROPERTY_CASES {
        let seed = 50_000 + case as u64;
        let n = 1 + case % 12;
        let g = random_instance(n, 1 + (case % 6) as u32, 1 + case % 3, ALPHAS[case % 5], seed);
        let v = g.full_view();
        let s = random_set(n, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let t = random_set(n, seed.wrapping_mul(0xc2b2_ae3d_27d4_eb4f));
        let (even, odd) = (g.vertices_of(Player::Even), g.vertices_of(Player::Odd));
        let not = |r: &Region| v.complement(r);

        let pre = [Player::Even, Player::Odd]
            .iter()
            .all(|&p| not(&v.pre_exists(p, &not(&s))) == g.vertices_of(p.opponent()).union(&v.pre_forall(p, &s)));
        fail(pre, "Pre duality", case);
        fail(not(&v.lpre_exists(&not(&s))) == even.union(&v.lpre_forall(&s)), "Lpre duality", case);
        fail(not(&v.cpre(Player::Even, &not(&s))) == v.cpre(Player::Odd, &s), "Cpre duality", case);
        fail(v.npre(&s, &t) == not(&v.apre(&not(&s), &not(&t))), "Npre/Apre duality", case);
        fail(v.lpre_forall(&s).is_subset(&odd), "Lpre domain", case);

        let r = t.intersection(&s);
        fail(
            safe_reach_even_full(&v, &s, &r).is_subset(&safe_reach_even_fair(&v, &s, &r).set),
            "fair reach over-approximates",
            case,
        );

        let base = g.without_live();
        let lo = mutate_liveness(&base, ALPHAS[case % 4], seed);
        let hi = mutate_liveness(&base, ALPHAS[case % 4 + 1], seed);
        let (we_lo, _) = solve_even_fp(&lo.full_view(), FpOptions::default()).unwrap();
        let (we_hi, _) = solve_even_fp(&hi.full_view(), FpOptions::default()).unwrap();
        fail(we_lo.is_subset(&we_hi), "live-edge monotonicity", case);

        let (w_odd, tr) = solve_odd_fp(&v, FpOptions::traced()).unwrap();
        fail(check_odd_rank_descent(&v, &w_odd, &tr).is_ok(), "rank descent", case);
        let (w_even, tre) = solve_even_fp(&v, FpOptions::with_ranks()).unwrap();
        let rt = build_rank_template(&v, &w_odd, &tr).unwrap();
        fail(rt.vertices == w_odd && validate_odd_template(&v, &rt).is_ok(), "rank template valid", case);
        let es = extract_even_strategy(&v, &w_even, &tre).unwrap();
        fail(validate_even_strategy(&v, &es).is_ok(), "fixed-point strategy valid", case);
        let zl = solve_zielonka_fair(&v, ZlOptions { templates: true, ..Default::default() }).unwrap();
        fail(validate_odd_template(&v, zl.odd_template.as_ref().unwrap()).is_ok(), "recursion template valid", case);
        fail(validate_even_strategy(&v, zl.even_strategy.as_ref().unwrap()).is_ok(), "recursion strategy valid", case);
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() { format!("{PROPERTY_CASES} cases per property") } else { bad.join(", ") },
    )
}

fn perf_corpus() -> Vec<(String, OddFairGame)> {
    let mut out = Vec::new();
    for (k, &p) in PERF_PRIORITIES.iter().enumerate() {
        let spec = CorpusSpec {
            count: PERF_GAMES_PER_PRIORITY,
            min_vertices: PERF_MIN_VERTICES,
            max_vertices: PERF_MAX_VERTICES,
            max_priority: p,
            min_degree: 1,
            max_degree: 4,
            liveness: PERF_LIVENESS,
            seed: 7000 + 100 * k as u64,
        };
        for (name, g) in bench::generate_corpus(&spec) {
            out.push((format!("p{p}-{name}"), g));
        }
    }
    out
}

fn performance(corpus: &[(String, OddFairGame)]) -> Outcome {
    let start = Instant::now();
    let instances: Vec<Instance> =
        corpus.iter().map(|(n, g)| Instance { name: n.clone(), game: Ok(g.clone()) }).collect();
    let algos = [Algo::OfZl, Algo::OfFp, Algo::NZl];
    let recs = bench::run_bench(&instances, &algos, &BenchConfig { timeout: PERF_TIMEOUT, jobs: 1 });
    let t = start.elapsed();
    let (mut zl, mut fp, mut both) = (0.0, 0.0, 0usize);
    let (mut nzl_all, mut zl_all, mut paired) = (0.0, 0.0, 0usize);
    let mut mismatch = 0;
    let mut fp_timeouts = 0;
    for row in recs.chunks(algos.len()) {
        let (z, f, n) = (&row[0], &row[1], &row[2]);
        fp_timeouts += usize::from(f.status == Status::Timeout);
        if z.status == Status::Ok && f.status == Status::Ok {
            zl += z.time_ms;
            fp += f.time_ms;
            both += 1;
            mismatch += usize::from(z.win_odd != f.win_odd);
        }
        if z.status == Status::Ok && n.status == Status::Ok {
            zl_all += z.time_ms;
            nzl_all += n.time_ms;
            paired += 1;
        }
    }
    if both == 0 || paired == 0 {
        return outcome(false, "no instance completed by both solvers");
    }
    let (zl, fp) = (zl / both as f64, fp / both as f64);
    let (zl_n, nzl) = (zl_all / paired as f64, nzl_all / paired as f64);
    let pass = zl <= fp && zl_n <= PERF_NORMAL_FACTOR * nzl && mismatch == 0 && t < PERF_BUDGET && corpus.len() >= 20;
    outcome(
        pass,
        format!(
            "{} games, OF-FP timeouts {fp_timeouts}; over {both} mutually completed: OF-ZL {zl:.3} ms, OF-FP {fp:.3} ms; \
             over {paired}: OF-ZL {zl_n:.3} ms, N-ZL {nzl:.3} ms; region mismatches {mismatch}; {t:?}",
            corpus.len()
        ),
    )
}

fn cli_contract(corpus: &[(String, OddFairGame)]) -> Outcome {
    let mut notes = Vec::new();
    let mut round = 0;
    for (name, g) in corpus {
        let text = write_game(g);
        match parse_game(&text) {
            Ok(h) if h == *g && write_game(&h) == text => round += 1,
            _ => notes.push(format!("round trip of {name}")),
        }
    }
    for i in 0..100u64 {
        let g = random_instance(1 + i as usize % 30, 5, 3, ALPHAS[i as usize % 5], i);
        if parse_game(&write_game(&g)).as_ref() != Ok(&g) {
            notes.push(format!("round trip of small game {i}"));
        }
        round += 1;
    }

    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_fairgame");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    let ex1 = dir.path().join("example1.pg");
    fs::write(&ex1, include_str!("fixtures/example1.pg")).unwrap();
    let broken = dir.path().join("broken.pg");
    fs::write(&broken, "parity 0;\n0 1 1 0 \"x\";\nlive 0 1;\n").unwrap();
    let witness = dir.path().join("bad-witness.txt");
    fs::write(&witness, "template 1;\nedge 0 0;\nstrategy 0;\n").unwrap();
    let big = dir.path().join("big.pg");
    fs::write(&big, write_game(&random_instance(3000, 8, 4, 50, 3))).unwrap();
    let (ex1, broken, witness, big) =
        (ex1.to_str().unwrap(), broken.to_str().unwrap(), witness.to_str().unwrap(), big.to_str().unwrap());
    let exits = [
        ("ok", code(&["solve", ex1, "--algo", "of-fp", "--certify"]), 0),
        ("parse error", code(&["solve", broken, "--algo", "of-zl"]), 1),
        ("certify failure", code(&["check", ex1, witness]), 2),
        ("timeout", code(&["solve", big, "--algo", "of-fp", "--timeout", "0.000001"]), 3),
    ];
    for (what, got, want) in exits {
        if got != Some(want) {
            notes.push(format!("{what}: exit {got:?}, want {want}"));
        }
    }

    let corpus_dir = dir.path().join("corpus");
    fs::create_dir(&corpus_dir).unwrap();
    fs::copy(dir.path().join("example1.pg"), corpus_dir.join("example1.pg")).unwrap();
    let csv = dir.path().join("results.csv");
    let st = code(&[
        "bench",
        corpus_dir.to_str().unwrap(),
        "--algos",
        "of-zl,of-fp,n-zl,n-fp",
        "--timeout",
        "10",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&csv).unwrap_or_default();
    if st != Some(0) || text.lines().next() != Some(CSV_HEADER_LINE) || text.lines().count() != 5 {
        notes.push(format!("bench CSV: exit {st:?}, first line {:?}", text.lines().next()));
    }
    outcome(notes.is_empty(), format!("{round} games round-tripped, 4 exit codes, CSV header; problems {notes:?}"))
}

#[test]
fn acceptance() {
    let corpus = perf_corpus();
    let criteria: [Criterion<'_>; 8] = [
        ("golden regions", Box::new(golden_regions)),
        ("golden trace", Box::new(golden_trace)),
        ("golden ranks", Box::new(golden_ranks)),
        ("cross-solver equivalence", Box::new(cross_solver)),
        ("oracle certification", Box::new(certification)),
        ("property suite", Box::new(properties)),
        ("performance ordering", Box::new(|| performance(&corpus))),
        ("CLI contract", Box::new(|| cli_contract(&corpus))),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
