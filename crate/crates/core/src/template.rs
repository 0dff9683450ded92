//! Winning strategy templates for Odd, positional strategies for Even, and
//! their construction from fixed-point ranks.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::fixpoint::FpTrace;
use crate::game::{OddFairGame, Player, SubgameView};
use crate::graph::on_cycle;
use crate::region::Region;

pub type Edge = (usize, usize);

/// A subgraph `(V', E')` restricting Odd's moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddTemplate {
    pub vertices: Region,
    pub edges: BTreeSet<Edge>,
}

/// A positional Even strategy on `vertices`, one successor per Even vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenStrategy {
    pub vertices: Region,
    pub choice: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TemplateViolation {
    #[error("template vertex {0} is not active")]
    InactiveVertex(usize),
    #[error("{0} -> {1} is not an edge inside the template vertex set")]
    ForeignEdge(usize, usize),
    #[error("Even vertex {0} has a successor outside the template")]
    EvenEscapes(usize),
    #[error("Even vertex {0} is missing some of its edges")]
    EvenMissingEdge(usize),
    #[error("Odd vertex {0} keeps no edge")]
    OddNoEdge(usize),
    #[error("Odd vertex {0} is off every cycle but keeps {1} edges")]
    OddOffCycle(usize, usize),
    #[error("Odd vertex {0} is on a cycle but drops live edge to {1}")]
    OddDropsLive(usize, usize),
    #[error("Odd vertex {0} keeps {1} edges, more than its live edges plus one")]
    OddTooMany(usize, usize),
    #[error("Even vertex {0} has no valid choice")]
    BadChoice(usize),
    #[error("Odd vertex {0} has a successor outside the strategy domain")]
    OddEscapes(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("the trace does not carry ranks of the required player")]
    NoRanks,
    #[error("vertex {0} has no rank")]
    Unranked(usize),
    #[error("the region is not closed for the opponent")]
    NotATrap,
    #[error("vertex {0} has no successor inside the region")]
    Stuck(usize),
}

impl OddTemplate {
    pub fn empty(n: usize) -> Self {
        OddTemplate { vertices: Region::empty(n), edges: BTreeSet::new() }
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((v, 0)..=(v, usize::MAX)).map(|&(_, w)| w)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_edges(v).count()
    }

    /// Adds every live edge of an Odd vertex lying on a template cycle, until stable.
    pub(crate) fn close_live(&mut self, view: &SubgameView<'_>) {
        loop {
            let cyc = on_cycle(view.universe(), self.edges.iter().copied());
            let mut grew = false;
            for v in self.vertices.iter() {
                if view.owner(v) == Player::Odd && cyc[v] {
                    for w in view.live_successors(v) {
                        grew |= self.edges.insert((v, w));
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }

    pub fn to_text(&self, game: &OddFairGame) -> String {
        edges_text("template", game, self.edges.iter().copied())
    }
}

impl EvenStrategy {
    pub fn empty(n: usize) -> Self {
        EvenStrategy { vertices: Region::empty(n), choice: BTreeMap::new() }
    }

    pub fn to_text(&self, game: &OddFairGame) -> String {
        edges_text("strategy", game, self.choice.iter().map(|(&u, &v)| (u, v)))
    }
}

fn edges_text(head: &str, game: &OddFairGame, edges: impl Iterator<Item = Edge>) -> String {
    let edges: Vec<Edge> = edges.collect();
    let mut s = format!("{head} {};\n", edges.len());
    for (u, v) in edges {
        s.push_str(&format!("edge {} {};\n", game.id(u), game.id(v)));
    }
    s
}

/// One `<kind> <n>;` header with its `edge u v;` statements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBlock {
    pub kind: String,
    pub edges: Vec<Edge>,
}

/// Reads back any number of blocks written by `to_text`, mapping external ids
/// to vertices.
pub fn parse_edge_blocks(text: &str, game: &OddFairGame) -> Result<Vec<EdgeBlock>, String> {
    let mut blocks: Vec<(EdgeBlock, usize)> = Vec::new();
    for stmt in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let t: Vec<&str> = stmt.split_whitespace().collect();
        match t[..] {
            ["edge", u, v] => {
                let look = |x: &str| {
                    x.parse::<u64>()
                        .ok()
                        .and_then(|id| game.vertex_by_id(id))
                        .ok_or_else(|| format!("unknown vertex `{x}`"))
                };
                let (block, _) = blocks.last_mut().ok_or("edge before any header")?;
                block.edges.push((look(u)?, look(v)?));
            }
            [kind, count] => {
                let count = count.parse().map_err(|_| format!("bad edge count in `{stmt}`"))?;
                blocks.push((EdgeBlock { kind: kind.to_string(), edges: Vec::new() }, count));
            }
            _ => return Err(format!("malformed statement `{stmt}`")),
        }
    }
    blocks
        .into_iter()
        .map(|(b, count)| {
            if b.edges.len() == count {
                Ok(b)
            } else {
                Err(format!("`{}` announces {count} edges, found {}", b.kind, b.edges.len()))
            }
        })
        .collect()
}

pub fn validate_odd_template(view: &SubgameView<'_>, t: &OddTemplate) -> Result<(), TemplateViolation> {
    for v in t.vertices.iter() {
        if !view.contains(v) {
            return Err(TemplateViolation::InactiveVertex(v));
        }
    }
    for &(u, v) in &t.edges {
        if !t.vertices.contains(u) || !t.vertices.contains(v) || !view.game().is_edge(u, v) {
            return Err(TemplateViolation::ForeignEdge(u, v));
        }
    }
    let cyc = on_cycle(view.universe(), t.edges.iter().copied());
    for v in t.vertices.iter() {
        let deg = t.out_degree(v);
        match view.owner(v) {
            Player::Even => {
                if view.successors(v).any(|w| !t.vertices.contains(w)) {
                    return Err(TemplateViolation::EvenEscapes(v));
                }
                if deg != view.successors(v).count() {
                    return Err(TemplateViolation::EvenMissingEdge(v));
                }
            }
            Player::Odd => {
                if deg == 0 {
                    return Err(TemplateViolation::OddNoEdge(v));
                }
                if !cyc[v] {
                    if deg != 1 {
                        return Err(TemplateViolation::OddOffCycle(v, deg));
                    }
                    continue;
                }
                let mut live = 0;
                for w in view.live_successors(v) {
                    if !t.edges.contains(&(v, w)) {
                        return Err(TemplateViolation::OddDropsLive(v, w));
                    }
                    live += 1;
                }
                if deg > live + 1 {
                    return Err(TemplateViolation::OddTooMany(v, deg));
                }
            }
        }
    }
    Ok(())
}

pub fn validate_even_strategy(view: &SubgameView<'_>, s: &EvenStrategy) -> Result<(), TemplateViolation> {
    for v in s.vertices.iter() {
        if !view.contains(v) {
            return Err(TemplateViolation::InactiveVertex(v));
        }
        match view.owner(v) {
            Player::Even => match s.choice.get(&v) {
                Some(&w) if s.vertices.contains(w) && view.game().is_edge(v, w) => {}
                _ => return Err(TemplateViolation::BadChoice(v)),
            },
            Player::Odd => {
                if view.successors(v).any(|w| !s.vertices.contains(w)) {
                    return Err(TemplateViolation::OddEscapes(v));
                }
            }
        }
    }
    if let Some((&u, &v)) = s.choice.iter().find(|(&u, _)| !s.vertices.contains(u) || view.owner(u) != Player::Even) {
        return Err(TemplateViolation::ForeignEdge(u, v));
    }
    Ok(())
}

fn ranked_region(
    view: &SubgameView<'_>,
    region: &Region,
    trace: &FpTrace,
    player: Player,
) -> Result<(), TemplateError> {
    if trace.player != player || !trace.has_ranks() {
        return Err(TemplateError::NoRanks);
    }
    if let Some(v) = region.iter().find(|&v| trace.rank(v).is_none()) {
        return Err(TemplateError::Unranked(v));
    }
    if !region.is_subset(view.active()) || !view.is_trap(player.opponent(), region) {
        return Err(TemplateError::NotATrap);
    }
    Ok(())
}

/// Lowest-rank successor inside `region`, ties broken by vertex id.
fn best_successor(view: &SubgameView<'_>, v: usize, region: &Region, trace: &FpTrace) -> Result<usize, TemplateError> {
    view.successors(v)
        .filter(|&w| region.contains(w))
        .min_by(|&a, &b| trace.rank(a).cmp(&trace.rank(b)).then(a.cmp(&b)))
        .ok_or(TemplateError::Stuck(v))
}

/// Builds Odd's template on its fixed-point region from the recorded ranks.
///
/// Even vertices keep all edges, each Odd vertex keeps one edge to a
/// lowest-rank successor, and live edges are then added at Odd vertices lying
/// on a cycle until nothing changes.
pub fn build_rank_template(
    view: &SubgameView<'_>,
    region: &Region,
    trace: &FpTrace,
) -> Result<OddTemplate, TemplateError> {
    ranked_region(view, region, trace, Player::Odd)?;
    let mut t = OddTemplate { vertices: region.clone(), edges: BTreeSet::new() };
    for v in region.iter() {
        match view.owner(v) {
            Player::Even => t.edges.extend(view.successors(v).map(|w| (v, w))),
            Player::Odd => {
                t.edges.insert((v, best_successor(view, v, region, trace)?));
            }
        }
    }
    t.close_live(view);
    Ok(t)
}

/// Even's positional strategy on its fixed-point region: move to a lowest-rank successor.
pub fn extract_even_strategy(
    view: &SubgameView<'_>,
    region: &Region,
    trace: &FpTrace,
) -> Result<EvenStrategy, TemplateError> {
    ranked_region(view, region, trace, Player::Even)?;
    let mut s = EvenStrategy { vertices: region.clone(), choice: BTreeMap::new() };
    for v in region.iter().filter(|&v| view.owner(v) == Player::Even) {
        s.choice.insert(v, best_successor(view, v, region, trace)?);
    }
    Ok(s)
}
