use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Duration;

use fairgame::generate::{random_game, RandomGameSpec};
use fairgame::{parse_game, write_game, Player};
use fairgame_cli::bench::{self, BenchConfig, BenchRecord, Instance, Status};
use fairgame_cli::report::{self, Axes};
use fairgame_cli::Algo;

const EXAMPLE1: &str = include_str!("fixtures/example1.pg");

fn fairgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairgame")).args(args).env_remove("FAIRGAME_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_example1_with_each_fair_solver() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex1.pg", EXAMPLE1);
    for algo in ["of-fp", "of-zl"] {
        let o = fairgame(&["solve", s(&f), "--algo", algo]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "W_Even: 2a\nW_Odd: 1a 2b 2c 3a 3b 4a\n", "{algo}");
    }
}

#[test]
fn solve_prints_ranks_and_certified_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex1.pg", EXAMPLE1);
    let o = fairgame(&["solve", s(&f), "--algo", "of-fp", "--ranks", "--template", "--certify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("rank 3a (2,0,1,0)\n"));
    assert!(out.contains("rank 3b (1,0,1,0)\n"));
    assert!(out.contains("\ntemplate "));
    assert!(out.contains("strategy 1;\nedge 1 1;\n"));
    assert!(out.ends_with("certified\n"));

    let w = write(dir.path(), "witness.txt", &out);
    let o = fairgame(&["check", s(&f), s(&w)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("W_Even: 2a\nW_Odd: 1a 2b 2c 3a 3b 4a\n"));
}

#[test]
fn solvers_ignoring_liveness_agree_on_plain_games() {
    let dir = tempfile::tempdir().unwrap();
    let g = random_game(&RandomGameSpec { vertices: 40, max_priority: 6, min_degree: 1, max_degree: 3 }, 5);
    let f = write(dir.path(), "plain.pg", &write_game(&g));
    let outs: Vec<String> =
        ["of-zl", "n-zl", "of-fp", "n-fp"].iter().map(|a| stdout(&fairgame(&["solve", s(&f), "--algo", a]))).collect();
    assert!(outs.windows(2).all(|w| w[0] == w[1]), "{outs:?}");
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.pg", "0 1 1 0;\nlive 0 5;\n");
    let o = fairgame(&["solve", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 1"));
    assert_eq!(fairgame(&["solve", "/nonexistent/game.pg"]).status.code(), Some(1));

    let f = write(dir.path(), "ex1.pg", EXAMPLE1);
    assert_eq!(fairgame(&["solve", s(&f), "--certify", "--edge-bound", "3"]).status.code(), Some(2));

    let big = random_game(&RandomGameSpec { vertices: 3000, max_priority: 8, min_degree: 1, max_degree: 4 }, 9);
    let big = write(dir.path(), "big.pg", &write_game(&big));
    assert_eq!(fairgame(&["solve", s(&big), "--algo", "of-fp", "--timeout", "0.000001"]).status.code(), Some(3));
}

#[test]
fn check_rejects_losing_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex1.pg", EXAMPLE1);
    // Claims only vertex 0 (1a), which can be left by Even.
    let w = write(dir.path(), "w.txt", "template 1;\nedge 0 0;\n");
    let o = fairgame(&["check", s(&f), s(&w)]);
    assert_eq!(o.status.code(), Some(2));
    let w = write(dir.path(), "w2.txt", "template 1;\nedge 0 99;\n");
    assert_eq!(fairgame(&["check", s(&f), s(&w)]).status.code(), Some(1));
}

fn hundred_odd_vertices() -> String {
    let mut t = String::new();
    for v in 0..100 {
        t.push_str(&format!("{v} {} 1 {},{};\n", 1 + v % 4, (v + 1) % 100, (v + 7) % 100));
    }
    t
}

#[test]
fn mutate_command() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "g.pg", &hundred_odd_vertices());
    let g = parse_game(&hundred_odd_vertices()).unwrap();

    let o = fairgame(&["mutate", s(&f), "--liveness", "0", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), write_game(&g));
    assert!(!stdout(&o).contains("live"));

    let a = dir.path().join("a.pg");
    let b = dir.path().join("b.pg");
    fairgame(&["mutate", s(&f), "--liveness", "50", "--seed", "7", "-o", s(&a)]);
    fairgame(&["mutate", s(&f), "--liveness", "50", "--seed", "7", "-o", s(&b)]);
    let ta = fs::read_to_string(&a).unwrap();
    assert_eq!(ta, fs::read_to_string(&b).unwrap());
    let m = parse_game(&ta).unwrap();
    let sources = (0..m.len()).filter(|&v| m.owner(v) == Player::Odd && !m.live_successors(v).is_empty()).count();
    assert_eq!(sources, 50);

    let env = Command::new(env!("CARGO_BIN_EXE_fairgame"))
        .args(["mutate", s(&f), "--liveness", "50"])
        .env("FAIRGAME_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), ta);

    let p = fairgame(&["mutate", s(&f), "--liveness", "30", "--seed", "2", "--priorities", "1"]);
    let m = parse_game(&stdout(&p)).unwrap();
    assert!((0..m.len()).all(|v| m.priority(v) == 1));
    assert_eq!(fairgame(&["mutate", s(&f), "--liveness", "101", "--seed", "2"]).status.code(), Some(1));
}

fn tiny_corpus() -> Vec<Instance> {
    ["parity 1;\n0 2 0 1;\n1 1 1 0;\nlive 1 0;\n", "0 1 1 0,1;\n1 2 0 1;\nlive 0 1;\n", EXAMPLE1]
        .iter()
        .enumerate()
        .map(|(i, t)| Instance { name: format!("tiny-{i}.pg"), game: Ok(parse_game(t).unwrap()) })
        .collect()
}

#[test]
fn bench_tiny_corpus_with_all_solvers() {
    let recs = bench::run_bench(&tiny_corpus(), &Algo::ALL, &BenchConfig { timeout: Duration::from_secs(10), jobs: 4 });
    assert_eq!(recs.len(), 12);
    assert!(recs.iter().all(|r| r.status == Status::Ok));
    for r in &recs {
        assert_eq!(r.win_even.unwrap() + r.win_odd.unwrap(), r.vertices);
    }
    let order: Vec<(&str, &str)> = recs.iter().map(|r| (r.instance.as_str(), r.solver.as_str())).collect();
    assert_eq!(
        order[..4],
        [("tiny-0.pg", "of-zl"), ("tiny-0.pg", "of-fp"), ("tiny-0.pg", "n-zl"), ("tiny-0.pg", "n-fp")]
    );
    for inst in recs.chunks(4) {
        assert_eq!(inst[0].win_odd, inst[1].win_odd);
        assert_eq!(inst[2].win_odd, inst[3].win_odd);
    }
    let mut buf = Vec::new();
    bench::write_csv(&mut buf, &recs).unwrap();
    assert_eq!(bench::read_csv(&buf[..]).unwrap(), recs);
}

#[test]
fn bench_forced_timeouts_and_errors() {
    let g = random_game(&RandomGameSpec { vertices: 5000, max_priority: 8, min_degree: 1, max_degree: 4 }, 1);
    let inst = vec![
        Instance { name: "big.pg".into(), game: Ok(g) },
        Instance { name: "broken.pg".into(), game: Err("line 1, column 1: nope".into()) },
    ];
    let recs =
        bench::run_bench(&inst, &[Algo::OfFp, Algo::NFp], &BenchConfig { timeout: Duration::from_micros(1), jobs: 2 });
    assert!(recs[..2].iter().all(|r| r.status == Status::Timeout && r.win_odd.is_none()));
    assert!(recs[2..].iter().all(|r| r.status == Status::Error));
}

#[test]
fn bench_command_writes_exact_header() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    let out = dir.path().join("r.csv");
    let o = fairgame(&["bench", s(&corpus), "--algos", "of-zl,of-fp", "--timeout", "5", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "instance,solver,vertices,edges,priorities,live_edges,time_ms,status,win_even,win_odd\n"
    );

    write(&corpus, "a.pg", EXAMPLE1);
    write(&corpus, "notes.txt", "ignored");
    fairgame(&["generate", s(&corpus), "--count", "2", "--min-vertices", "10", "--max-vertices", "20", "--seed", "4"]);
    let o = fairgame(&["bench", s(&corpus), "--algos", "of-zl,of-fp,n-zl,n-fp", "--out", s(&out), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = bench::read_csv(fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(recs.len(), 12);
    assert_eq!(recs[0].instance, "a.pg");

    let svg = dir.path().join("s.svg");
    let o = fairgame(&["report", s(&out), "--x", "of-fp", "--y", "of-zl", "--log", "-o", s(&svg)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("rows: 12\n"));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert_eq!(fairgame(&["report", s(&out), "--x", "of-fp", "--y", "nope"]).status.code(), Some(1));
}

fn synthetic(times: &[(f64, f64)]) -> Vec<BenchRecord> {
    let mut recs = Vec::new();
    for (i, &(x, y)) in times.iter().enumerate() {
        for (solver, t) in [("of-fp", x), ("of-zl", y)] {
            recs.push(BenchRecord {
                instance: format!("g{i}"),
                solver: solver.into(),
                vertices: 1,
                edges: 1,
                priorities: 1,
                live_edges: 0,
                time_ms: t,
                status: Status::Ok,
                win_even: Some(1),
                win_odd: Some(0),
            });
        }
    }
    recs
}

#[test]
fn report_identical_times_sit_on_the_diagonal() {
    let c = report::compare(&synthetic(&[(1.0, 1.0), (30.0, 30.0), (500.0, 500.0)]), "of-fp", "of-zl", None).unwrap();
    let ax = Axes::fit(&c, true);
    for p in &c.points {
        let (px, py) = ax.to_px(p.y_ms, p.x_ms);
        let (dx, dy) = ax.to_px(p.y_ms, p.y_ms);
        assert!((px - dx).abs() < 1e-9 && (py - dy).abs() < 1e-9);
    }
    assert_eq!(c.x.mean_ms, c.y.mean_ms);
}

#[test]
fn report_ten_times_faster_is_one_decade_above() {
    let c =
        report::compare(&synthetic(&[(10.0, 1.0), (300.0, 30.0), (5000.0, 500.0)]), "of-fp", "of-zl", None).unwrap();
    let ax = Axes::fit(&c, true);
    let (_, d0) = ax.to_px(1.0, 1.0);
    let (_, d1) = ax.to_px(1.0, 10.0);
    let decade = d0 - d1;
    assert!(decade > 0.0);
    for p in &c.points {
        let (_, py) = ax.to_px(p.y_ms, p.x_ms);
        let (_, on) = ax.to_px(p.y_ms, p.y_ms);
        assert!((on - py - decade).abs() < 1e-9);
    }
    let text = report::summary_text(&c);
    assert!(text.contains("rows: 6"));
    assert!(text.contains("of-fp: 3 runs, 0 timeouts, 0 errors, mean 1770.000 ms"));
    assert!(text.contains("of-zl: 3 runs, 0 timeouts, 0 errors, mean 177.000 ms"));
}

#[test]
fn report_clamps_timeouts() {
    let mut recs = synthetic(&[(10.0, 1.0), (20.0, 2.0)]);
    recs[2].status = Status::Timeout;
    recs[2].time_ms = 10_400.0;
    recs[2].win_even = None;
    recs[2].win_odd = None;
    let c = report::compare(&recs, "of-fp", "of-zl", Some(10_000.0)).unwrap();
    assert_eq!(c.x.timeouts, 1);
    assert_eq!(c.completed, 1);
    assert_eq!(c.x.mean_ms, Some(10.0));
    let t = c.points.iter().find(|p| p.x_timeout).unwrap();
    assert_eq!(t.x_ms, 10_000.0);
    assert!(report::render_svg(&c, true).contains(r#"class="timeout""#));
}
