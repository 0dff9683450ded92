//! Game graphs, vertex ownership, priorities, live edges and subgame views.

use std::fmt;

use thiserror::Error;

use crate::region::Region;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player favoured by priority `p`.
    pub fn of_priority(p: u32) -> Player {
        if p.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    /// PGSolver owner code: 0 for Even, 1 for Odd.
    pub fn code(self) -> u8 {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Even => f.write_str("Even"),
            Player::Odd => f.write_str("Odd"),
        }
    }
}

/// Structural defects that prevent a game from being built.
///
/// Vertices are reported by their external id.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("vertex {0} has no successors")]
    DeadEnd(u64),
    #[error("edge {0} -> {1} points to a vertex that does not exist")]
    DanglingEdge(u64, u64),
    #[error("live edge {0} -> {1} references a vertex that does not exist")]
    LiveUnknownVertex(u64, u64),
    #[error("live edge {0} -> {1} is not an edge of the game")]
    LiveNotAnEdge(u64, u64),
    #[error("live edge {0} -> {1} starts at a vertex owned by Even")]
    LiveFromEven(u64, u64),
    #[error("vertex id {0} is declared twice")]
    DuplicateId(u64),
    #[error("active set leaves vertex {0} without successors")]
    SubgameDeadEnd(u64),
}

#[derive(Clone, Debug)]
struct VertexSpec {
    id: u64,
    priority: u32,
    owner: Player,
    name: Option<String>,
    succ: Vec<usize>,
}

/// Collects vertices and edges by dense index and checks them on `build`.
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    vertices: Vec<VertexSpec>,
    live: Vec<(usize, usize)>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex whose external id equals its dense index.
    pub fn vertex(&mut self, owner: Player, priority: u32) -> usize {
        let id = self.vertices.len() as u64;
        self.vertex_with_id(id, owner, priority, None)
    }

    pub fn vertex_with_id(&mut self, id: u64, owner: Player, priority: u32, name: Option<String>) -> usize {
        self.vertices.push(VertexSpec { id, priority, owner, name, succ: Vec::new() });
        self.vertices.len() - 1
    }

    pub fn named(&mut self, owner: Player, priority: u32, name: &str) -> usize {
        let id = self.vertices.len() as u64;
        self.vertex_with_id(id, owner, priority, Some(name.to_string()))
    }

    pub fn edge(&mut self, from: usize, to: usize) -> &mut Self {
        self.vertices[from].succ.push(to);
        self
    }

    pub fn edges(&mut self, from: usize, to: &[usize]) -> &mut Self {
        self.vertices[from].succ.extend_from_slice(to);
        self
    }

    pub fn live_edge(&mut self, from: usize, to: usize) -> &mut Self {
        self.live.push((from, to));
        self
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn ext(&self, v: usize) -> u64 {
        self.vertices.get(v).map_or(v as u64, |s| s.id)
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.vertices.len();
        let mut seen = std::collections::HashSet::with_capacity(n);
        for s in &self.vertices {
            if !seen.insert(s.id) {
                return Err(Violation::DuplicateId(s.id));
            }
        }
        for s in &self.vertices {
            if s.succ.is_empty() {
                return Err(Violation::DeadEnd(s.id));
            }
            if let Some(&w) = s.succ.iter().find(|&&w| w >= n) {
                return Err(Violation::DanglingEdge(s.id, w as u64));
            }
        }
        for &(u, v) in &self.live {
            if u >= n || v >= n {
                return Err(Violation::LiveUnknownVertex(self.ext(u), self.ext(v)));
            }
            if !self.vertices[u].succ.contains(&v) {
                return Err(Violation::LiveNotAnEdge(self.ext(u), self.ext(v)));
            }
            if self.vertices[u].owner == Player::Even {
                return Err(Violation::LiveFromEven(self.ext(u), self.ext(v)));
            }
        }
        Ok(())
    }

    pub fn build(self) -> Result<OddFairGame, Violation> {
        self.validate()?;
        let n = self.vertices.len();
        // Priority 0 would break the 1-based class numbering; a shift by 2 keeps parity.
        let shift = if self.vertices.iter().any(|s| s.priority == 0) { 2 } else { 0 };
        let mut g = OddFairGame {
            owner: Vec::with_capacity(n),
            priority: Vec::with_capacity(n),
            shift,
            succ: Vec::with_capacity(n),
            pred: vec![Vec::new(); n],
            live: vec![Vec::new(); n],
            ids: Vec::with_capacity(n),
            names: Vec::with_capacity(n),
        };
        for (v, s) in self.vertices.into_iter().enumerate() {
            let mut succ = s.succ;
            succ.sort_unstable();
            succ.dedup();
            for &w in &succ {
                g.pred[w].push(v);
            }
            g.owner.push(s.owner);
            g.priority.push(s.priority + shift);
            g.succ.push(succ);
            g.ids.push(s.id);
            g.names.push(s.name);
        }
        for (u, v) in self.live {
            g.live[u].push(v);
        }
        for l in &mut g.live {
            l.sort_unstable();
            l.dedup();
        }
        Ok(g)
    }
}

/// A finite game graph with an optional set of live edges leaving Odd vertices.
///
/// Invariants: every vertex has a successor, successor lists are sorted and
/// duplicate-free, every live edge is an edge whose source is owned by Odd, and
/// every stored priority is at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddFairGame {
    owner: Vec<Player>,
    priority: Vec<u32>,
    shift: u32,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    live: Vec<Vec<usize>>,
    ids: Vec<u64>,
    names: Vec<Option<String>>,
}

impl OddFairGame {
    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    /// Normalized priority (at least 1).
    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    /// Priority as it appeared in the input.
    pub fn original_priority(&self, v: usize) -> u32 {
        self.priority[v] - self.shift
    }

    pub fn priority_shift(&self) -> u32 {
        self.shift
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn live_successors(&self, v: usize) -> &[usize] {
        &self.live[v]
    }

    pub fn is_live(&self, u: usize, v: usize) -> bool {
        self.live[u].binary_search(&v).is_ok()
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn live_edge_count(&self) -> usize {
        self.live.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    pub fn live_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.live.iter().enumerate().flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn name(&self, v: usize) -> Option<&str> {
        self.names[v].as_deref()
    }

    /// Name if present, external id otherwise.
    pub fn label(&self, v: usize) -> String {
        match &self.names[v] {
            Some(n) => n.clone(),
            None => self.ids[v].to_string(),
        }
    }

    pub fn vertex_by_id(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&i| i == id)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n.as_deref() == Some(name))
    }

    pub fn max_priority(&self) -> u32 {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    pub fn distinct_priorities(&self) -> usize {
        let mut p = self.priority.clone();
        p.sort_unstable();
        p.dedup();
        p.len()
    }

    /// Smallest even `l >= 2` bounding every priority.
    pub fn least_even_upperbound(&self) -> u32 {
        even_ceiling(self.max_priority())
    }

    /// Vertices with normalized priority `i`.
    pub fn priority_class(&self, i: u32) -> Region {
        Region::from_vertices(self.len(), (0..self.len()).filter(|&v| self.priority[v] == i))
    }

    pub fn vertices_of(&self, p: Player) -> Region {
        Region::from_vertices(self.len(), (0..self.len()).filter(|&v| self.owner[v] == p))
    }

    pub fn all(&self) -> Region {
        Region::full(self.len())
    }

    pub fn full_view(&self) -> SubgameView<'_> {
        SubgameView { game: self, active: self.all() }
    }

    /// View restricted to `active`, rejected if some active vertex loses all successors.
    pub fn subgame(&self, active: Region) -> Result<SubgameView<'_>, Violation> {
        for v in active.iter() {
            if !self.succ[v].iter().any(|&w| active.contains(w)) {
                return Err(Violation::SubgameDeadEnd(self.ids[v]));
            }
        }
        Ok(SubgameView { game: self, active })
    }

    /// Same graph with every live edge dropped.
    pub fn without_live(&self) -> OddFairGame {
        let mut g = self.clone();
        for l in &mut g.live {
            l.clear();
        }
        g
    }

    /// Same graph with the given live edges; fails if any is not an Odd edge.
    pub fn with_live(&self, live: impl IntoIterator<Item = (usize, usize)>) -> Result<OddFairGame, Violation> {
        let mut g = self.without_live();
        for (u, v) in live {
            if u >= g.len() || v >= g.len() {
                return Err(Violation::LiveUnknownVertex(u as u64, v as u64));
            }
            if !g.is_edge(u, v) {
                return Err(Violation::LiveNotAnEdge(g.ids[u], g.ids[v]));
            }
            if g.owner[u] == Player::Even {
                return Err(Violation::LiveFromEven(g.ids[u], g.ids[v]));
            }
            g.live[u].push(v);
        }
        for l in &mut g.live {
            l.sort_unstable();
            l.dedup();
        }
        Ok(g)
    }

    /// Same graph with fresh input priorities, normalized the usual way.
    pub fn with_priorities(&self, original: &[u32]) -> OddFairGame {
        assert_eq!(original.len(), self.len());
        let mut g = self.clone();
        g.shift = if original.contains(&0) { 2 } else { 0 };
        g.priority = original.iter().map(|&p| p + g.shift).collect();
        g
    }
}

pub(crate) fn even_ceiling(p: u32) -> u32 {
    let l = p + p % 2;
    l.max(2)
}

/// A game restricted to an active vertex set in which no vertex is a dead end.
///
/// Successors outside the active set are invisible to every operator.
#[derive(Clone, Debug)]
pub struct SubgameView<'g> {
    game: &'g OddFairGame,
    active: Region,
}

impl<'g> SubgameView<'g> {
    pub fn game(&self) -> &'g OddFairGame {
        self.game
    }

    pub fn active(&self) -> &Region {
        &self.active
    }

    pub fn universe(&self) -> usize {
        self.game.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.active.contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.game.owner(v)
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.game.priority(v)
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.game.successors(v).iter().copied().filter(|&w| self.active.contains(w))
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.game.predecessors(v).iter().copied().filter(|&u| self.active.contains(u))
    }

    pub fn live_successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.game.live_successors(v).iter().copied().filter(|&w| self.active.contains(w))
    }

    pub fn has_live(&self, v: usize) -> bool {
        self.live_successors(v).next().is_some()
    }

    pub fn is_live(&self, u: usize, v: usize) -> bool {
        self.game.is_live(u, v)
    }

    pub fn max_priority(&self) -> u32 {
        self.active.iter().map(|v| self.game.priority(v)).max().unwrap_or(0)
    }

    pub fn least_even_upperbound(&self) -> u32 {
        even_ceiling(self.max_priority())
    }

    pub fn priority_class(&self, i: u32) -> Region {
        Region::from_vertices(self.universe(), self.active.iter().filter(|&v| self.game.priority(v) == i))
    }

    pub fn vertices_of(&self, p: Player) -> Region {
        Region::from_vertices(self.universe(), self.active.iter().filter(|&v| self.game.owner(v) == p))
    }

    /// Checked restriction to a subset of the active set.
    pub fn restrict(&self, sub: Region) -> Result<SubgameView<'g>, Violation> {
        debug_assert!(sub.is_subset(&self.active));
        self.game.subgame(sub)
    }

    /// Restriction to a set known to be a trap for one of the players.
    pub(crate) fn restrict_trap(&self, sub: Region) -> SubgameView<'g> {
        debug_assert!(sub.is_subset(&self.active));
        debug_assert!(
            sub.iter().all(|v| self.game.successors(v).iter().any(|&w| sub.contains(w))),
            "trap restriction produced a dead end"
        );
        SubgameView { game: self.game, active: sub }
    }
}
