use std::fs;
use std::io;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use fairgame::generate::{random_game, RandomGameSpec};
use fairgame::mutate::mutate_liveness;
use fairgame::{parse_game, Deadline, OddFairGame};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algo::{self, Algo};

pub const CSV_HEADER: [&str; 10] =
    ["instance", "solver", "vertices", "edges", "priorities", "live_edges", "time_ms", "status", "win_even", "win_odd"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Timeout,
    Error,
}

/// One CSV row. Region sizes are present exactly when `status` is `ok`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub solver: String,
    pub vertices: usize,
    pub edges: usize,
    pub priorities: usize,
    pub live_edges: usize,
    pub time_ms: f64,
    pub status: Status,
    pub win_even: Option<usize>,
    pub win_odd: Option<usize>,
}

pub struct Instance {
    pub name: String,
    pub game: Result<OddFairGame, String>,
}

#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    pub timeout: Duration,
    pub jobs: usize,
}

/// Default per-run timeout.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);
/// Per-run timeout of the long profile.
pub const LONG_TIMEOUT: Duration = Duration::from_secs(3600);

/// Reads every `.pg` or `.gm` file of `dir`, sorted by file name.
pub fn load_corpus(dir: &Path) -> io::Result<Vec<Instance>> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("pg" | "gm")))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let game = fs::read_to_string(&p)
                .map_err(|e| e.to_string())
                .and_then(|t| parse_game(&t).map_err(|e| e.to_string()));
            Ok(Instance { name, game })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub count: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_priority: u32,
    pub min_degree: usize,
    pub max_degree: usize,
    pub liveness: u32,
    pub seed: u64,
}

/// Random games with sizes spaced evenly over the vertex range; game `i`
/// uses seed `seed + i` for both the graph and its live edges.
pub fn generate_corpus(spec: &CorpusSpec) -> Vec<(String, OddFairGame)> {
    (0..spec.count)
        .map(|i| {
            let span = spec.max_vertices - spec.min_vertices;
            let n = spec.min_vertices + if spec.count > 1 { span * i / (spec.count - 1) } else { 0 };
            let seed = spec.seed.wrapping_add(i as u64);
            let g = random_game(
                &RandomGameSpec {
                    vertices: n,
                    max_priority: spec.max_priority,
                    min_degree: spec.min_degree,
                    max_degree: spec.max_degree,
                },
                seed,
            );
            (format!("game-{i:04}.pg"), mutate_liveness(&g, spec.liveness, seed))
        })
        .collect()
}

fn run_one(inst: &Instance, algo: Algo, timeout: Duration) -> BenchRecord {
    let mut rec = BenchRecord {
        instance: inst.name.clone(),
        solver: algo.tag().to_string(),
        vertices: 0,
        edges: 0,
        priorities: 0,
        live_edges: 0,
        time_ms: 0.0,
        status: Status::Error,
        win_even: None,
        win_odd: None,
    };
    let Ok(game) = &inst.game else {
        return rec;
    };
    rec.vertices = game.len();
    rec.edges = game.edge_count();
    rec.priorities = game.distinct_priorities();
    rec.live_edges = game.live_edge_count();
    let g = algo.prepare(game);
    let view = g.full_view();
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(|| algo::run(&view, algo, false, Deadline::after(timeout))));
    let elapsed = start.elapsed();
    // Microsecond resolution keeps the CSV free of float noise.
    rec.time_ms = elapsed.as_micros() as f64 / 1e3;
    match out {
        Ok(Ok(sol)) if elapsed <= timeout => {
            rec.status = Status::Ok;
            rec.win_even = Some(sol.w_even.len());
            rec.win_odd = Some(sol.w_odd.len());
        }
        Ok(_) => rec.status = Status::Timeout,
        Err(_) => {}
    }
    rec
}

/// One record per (instance, solver), ordered by instance and then by the
/// position of the solver in `algos`.
pub fn run_bench(instances: &[Instance], algos: &[Algo], cfg: &BenchConfig) -> Vec<BenchRecord> {
    let pairs: Vec<(&Instance, Algo)> = instances.iter().flat_map(|i| algos.iter().map(move |&a| (i, a))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build().expect("thread pool");
    pool.install(|| pairs.par_iter().map(|&(i, a)| run_one(i, a, cfg.timeout)).collect())
}

pub fn write_csv<W: io::Write>(w: W, records: &[BenchRecord]) -> csv::Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(CSV_HEADER)?;
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(r: R) -> csv::Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(r).deserialize().collect()
}
