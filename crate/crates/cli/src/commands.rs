use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use fairgame::certify::{certify_partition, Verdict};
use fairgame::mutate::{apply_mutation, MutationSpec};
use fairgame::template::parse_edge_blocks;
use fairgame::{
    parse_game, solve_odd_fp, write_game, Deadline, EvenStrategy, FpOptions, OddFairGame, OddTemplate, Player, Region,
    SubgameView,
};

use crate::algo::{self, Algo};

/// A failed command together with the exit status it maps to.
#[derive(Debug, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Rejected(String),
    Timeout,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Rejected(_) => 2,
            CliError::Timeout => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Rejected(m) => f.write_str(m),
            CliError::Timeout => f.write_str("timeout"),
        }
    }
}

pub fn load_game(path: &Path) -> Result<OddFairGame, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_game(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Vertex labels of `r`, in lexicographic order.
pub fn labels(g: &OddFairGame, r: &Region) -> Vec<String> {
    let mut l: Vec<String> = r.iter().map(|v| g.label(v)).collect();
    l.sort();
    l
}

fn region_line(out: &mut String, head: &str, g: &OddFairGame, r: &Region) {
    out.push_str(head);
    out.push(':');
    for l in labels(g, r) {
        out.push(' ');
        out.push_str(&l);
    }
    out.push('\n');
}

#[derive(Clone, Debug)]
pub struct SolveFlags {
    pub template: bool,
    pub certify: bool,
    pub ranks: bool,
    pub timeout: Option<Duration>,
    pub edge_bound: usize,
}

fn certify(
    view: &SubgameView<'_>,
    w_even: &Region,
    w_odd: &Region,
    t: &OddTemplate,
    s: &EvenStrategy,
    bound: usize,
) -> Result<(), CliError> {
    match certify_partition(view, w_even, w_odd, t, s, bound) {
        Verdict::Certified => Ok(()),
        Verdict::TooLarge { edges, bound } => {
            Err(CliError::Rejected(format!("cannot certify: {edges} witness edges exceed the bound of {bound}")))
        }
        Verdict::Failed(f) => Err(CliError::Rejected(format!("certification failed: {f}"))),
    }
}

pub fn solve(game: &OddFairGame, algo: Algo, flags: &SolveFlags) -> Result<String, CliError> {
    let g = algo.prepare(game);
    let view = g.full_view();
    let deadline = flags.timeout.map_or(Deadline::none(), Deadline::after);
    let witnesses = flags.template || flags.certify;
    let sol = algo::run(&view, algo, witnesses, deadline).map_err(|_| CliError::Timeout)?;
    let mut out = String::new();
    region_line(&mut out, "W_Even", &g, &sol.w_even);
    region_line(&mut out, "W_Odd", &g, &sol.w_odd);
    if flags.ranks {
        let opts = FpOptions { ranks: true, snapshots: false, deadline };
        let (_, tr) = solve_odd_fp(&view, opts).map_err(|_| CliError::Timeout)?;
        let mut rows: Vec<(String, String)> =
            sol.w_odd.iter().map(|v| (g.label(v), tr.rank(v).expect("ranked").to_string())).collect();
        rows.sort();
        for (l, r) in rows {
            writeln!(out, "rank {l} {r}").unwrap();
        }
    }
    if witnesses {
        let t = sol.template.as_ref().expect("witnesses requested");
        let s = sol.strategy.as_ref().expect("witnesses requested");
        if flags.template {
            out.push_str(&t.to_text(&g));
            out.push_str(&s.to_text(&g));
        }
        if flags.certify {
            certify(&view, &sol.w_even, &sol.w_odd, t, s, flags.edge_bound)?;
            out.push_str("certified\n");
        }
    }
    Ok(out)
}

/// Certifies a `template`/`strategy` file as written by `solve --template`.
///
/// The claimed Odd region is the set of template edge sources; everything
/// else is claimed for Even. Lines not ending in `;`, such as the region lines
/// printed by `solve`, are skipped.
pub fn check(game: &OddFairGame, witness: &str, edge_bound: usize) -> Result<String, CliError> {
    let stmts: String = witness.lines().filter(|l| l.trim_end().ends_with(';')).collect::<Vec<_>>().join("\n");
    let blocks = parse_edge_blocks(&stmts, game).map_err(CliError::Input)?;
    let n = game.len();
    let mut t = OddTemplate::empty(n);
    let mut s = EvenStrategy::empty(n);
    for b in blocks {
        match b.kind.as_str() {
            "template" => t.edges.extend(b.edges),
            "strategy" => s.choice.extend(b.edges),
            other => return Err(CliError::Input(format!("unknown block `{other}`"))),
        }
    }
    t.vertices = Region::from_vertices(n, t.edges.iter().map(|&(u, _)| u));
    s.vertices = game.full_view().complement(&t.vertices);
    if let Some((&u, _)) = s.choice.iter().find(|(&u, _)| game.owner(u) != Player::Even) {
        return Err(CliError::Rejected(format!("strategy moves Odd vertex {}", game.label(u))));
    }
    let view = game.full_view();
    certify(&view, &s.vertices, &t.vertices, &t, &s, edge_bound)?;
    let mut out = String::new();
    region_line(&mut out, "W_Even", game, &s.vertices);
    region_line(&mut out, "W_Odd", game, &t.vertices);
    out.push_str("certified\n");
    Ok(out)
}

pub fn mutate(game: &OddFairGame, spec: &MutationSpec) -> Result<String, CliError> {
    if spec.liveness > 100 {
        return Err(CliError::Input(format!("liveness {} is above 100", spec.liveness)));
    }
    if spec.priorities == Some(0) {
        return Err(CliError::Input("priority count must be positive".into()));
    }
    Ok(write_game(&apply_mutation(game, spec)))
}
