use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use fairgame::certify::DEFAULT_EDGE_BOUND;
use fairgame::mutate::MutationSpec;
use fairgame_cli::bench::{self, BenchConfig, CorpusSpec};
use fairgame_cli::commands::{self, SolveFlags};
use fairgame_cli::{report, Algo, CliError};

#[derive(Parser)]
#[command(name = "fairgame", version, about = "Solve and benchmark parity games with live edges")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print both winning regions of a game.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "of-zl")]
        algo: Algo,
        /// Also print the Odd template and the Even strategy.
        #[arg(long)]
        template: bool,
        /// Certify the regions and witnesses exhaustively (small games only).
        #[arg(long)]
        certify: bool,
        /// Print the fixed-point rank of every Odd-winning vertex.
        #[arg(long)]
        ranks: bool,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_EDGE_BOUND)]
        edge_bound: usize,
    },
    /// Certify a witness file written by `solve --template`.
    Check {
        file: PathBuf,
        witness: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EDGE_BOUND)]
        edge_bound: usize,
    },
    /// Mark a seeded share of the Odd edges live, optionally redrawing priorities.
    Mutate {
        file: PathBuf,
        /// Percentage of Odd vertices, and of their edges, made live.
        #[arg(long)]
        liveness: u32,
        #[arg(long, env = "FAIRGAME_SEED", default_value_t = 0)]
        seed: u64,
        /// Redraw every priority from 1..=P first.
        #[arg(long)]
        priorities: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a corpus of random games with live edges.
    Generate {
        dir: PathBuf,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 500)]
        min_vertices: usize,
        #[arg(long, default_value_t = 3000)]
        max_vertices: usize,
        #[arg(long, default_value_t = 6)]
        priorities: u32,
        #[arg(long, default_value_t = 1)]
        min_degree: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 50)]
        liveness: u32,
        #[arg(long, env = "FAIRGAME_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Time solvers on every game of a directory and write a CSV.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value = "of-zl,of-fp,n-zl,n-fp", value_delimiter = ',')]
        algos: Vec<Algo>,
        /// Per-run timeout in seconds (default 60, or 3600 with --long).
        #[arg(long)]
        timeout: Option<f64>,
        /// Use the one-hour per-run timeout.
        #[arg(long)]
        long: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compare two solvers from a bench CSV and draw a scatter plot.
    Report {
        csv: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        log: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Timeout of the bench run in seconds, where timed-out points are drawn.
        #[arg(long)]
        timeout: Option<f64>,
    },
}

fn duration(secs: f64) -> Result<Duration, CliError> {
    if secs.is_finite() && secs > 0.0 {
        Ok(Duration::from_secs_f64(secs))
    } else {
        Err(CliError::Input(format!("timeout must be positive, got {secs}")))
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string())),
    }
}

fn io_err(p: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", p.display()))
}

/// Stderr notes for conventions applied to the input, so stdout stays exact.
fn note_shift(g: &fairgame::OddFairGame) {
    if g.priority_shift() > 0 {
        eprintln!("note: priority 0 present; all priorities raised by {} internally", g.priority_shift());
    }
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Solve { file, algo, template, certify, ranks, timeout, edge_bound } => {
            let g = commands::load_game(&file)?;
            note_shift(&g);
            let flags =
                SolveFlags { template, certify, ranks, timeout: timeout.map(duration).transpose()?, edge_bound };
            write_out(None, &commands::solve(&g, algo, &flags)?)
        }
        Cmd::Check { file, witness, edge_bound } => {
            let g = commands::load_game(&file)?;
            note_shift(&g);
            let text = fs::read_to_string(&witness).map_err(io_err(&witness))?;
            write_out(None, &commands::check(&g, &text, edge_bound)?)
        }
        Cmd::Mutate { file, liveness, seed, priorities, output } => {
            let g = commands::load_game(&file)?;
            let text = commands::mutate(&g, &MutationSpec { liveness, seed, priorities })?;
            eprintln!(
                "note: seed {seed}; each Odd vertex gets floor({liveness}% of its out-degree) live edges, drawn without replacement"
            );
            write_out(output.as_deref(), &text)
        }
        Cmd::Generate {
            dir,
            count,
            min_vertices,
            max_vertices,
            priorities,
            min_degree,
            max_degree,
            liveness,
            seed,
        } => {
            if min_vertices == 0
                || min_vertices > max_vertices
                || min_degree == 0
                || min_degree > max_degree
                || priorities == 0
                || liveness > 100
            {
                return Err(CliError::Input("inconsistent corpus parameters".into()));
            }
            let spec = CorpusSpec {
                count,
                min_vertices,
                max_vertices,
                max_priority: priorities,
                min_degree,
                max_degree,
                liveness,
                seed,
            };
            fs::create_dir_all(&dir).map_err(io_err(&dir))?;
            for (name, g) in bench::generate_corpus(&spec) {
                let p = dir.join(name);
                fs::write(&p, fairgame::write_game(&g)).map_err(io_err(&p))?;
            }
            Ok(())
        }
        Cmd::Bench { dir, mut algos, timeout, long, out, jobs } => {
            let mut seen = Vec::new();
            algos.retain(|a| {
                !seen.contains(a) && {
                    seen.push(*a);
                    true
                }
            });
            let timeout = match timeout {
                Some(t) => duration(t)?,
                None if long => bench::LONG_TIMEOUT,
                None => bench::DEFAULT_TIMEOUT,
            };
            let corpus = bench::load_corpus(&dir).map_err(io_err(&dir))?;
            let records = bench::run_bench(&corpus, &algos, &BenchConfig { timeout, jobs });
            let f = fs::File::create(&out).map_err(io_err(&out))?;
            bench::write_csv(f, &records).map_err(|e| CliError::Input(format!("{}: {e}", out.display())))
        }
        Cmd::Report { csv, x, y, log, output, timeout } => {
            let f = fs::File::open(&csv).map_err(io_err(&csv))?;
            let records = bench::read_csv(f).map_err(|e| CliError::Input(format!("{}: {e}", csv.display())))?;
            let timeout_ms = timeout.map(duration).transpose()?.map(|d| d.as_secs_f64() * 1e3);
            let cmp = report::compare(&records, &x, &y, timeout_ms).map_err(CliError::Input)?;
            if let Some(p) = &output {
                fs::write(p, report::render_svg(&cmp, log)).map_err(io_err(p))?;
            }
            write_out(None, &report::summary_text(&cmp))
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fairgame: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
