//! Exhaustive certification of templates and strategies on small games.
//!
//! A play consistent with a template or strategy eventually stays inside a
//! strongly connected vertex set `U` and uses each edge of some set `H` within
//! `U` infinitely often. Because the winner depends only on priorities in `U`
//! and on fairness, it is enough to test every `U` that admits some `H`, taking
//! `H` maximal.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::game::{Player, SubgameView};
use crate::graph::on_cycle;
use crate::region::Region;
use crate::template::{
    validate_even_strategy, validate_odd_template, Edge, EvenStrategy, OddTemplate, TemplateViolation,
};

pub const DEFAULT_EDGE_BOUND: usize = 20;

/// The set of vertices and edges seen infinitely often by some play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfSetCandidate {
    pub vertices: Vec<usize>,
    pub edges: BTreeSet<Edge>,
    pub max_priority: u32,
    pub fair: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertifyFailure {
    #[error("regions do not partition the active set")]
    NotAPartition,
    #[error("region claimed for {0} can be left by its opponent")]
    NotATrap(Player),
    #[error("invalid Odd template: {0}")]
    InvalidTemplate(TemplateViolation),
    #[error("invalid Even strategy: {0}")]
    InvalidStrategy(TemplateViolation),
    #[error("Odd template admits a losing play through {0:?}")]
    OddLoses(InfSetCandidate),
    #[error("Even strategy admits a losing play through {0:?}")]
    EvenLoses(InfSetCandidate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    TooLarge { edges: usize, bound: usize },
    Failed(CertifyFailure),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

/// Local view of one strongly connected component of the allowed-move graph.
struct Component {
    verts: Vec<usize>,
    // out[i]: bitmask of local successors of verts[i] along allowed moves
    out: Vec<u64>,
    // must[i]: local successors that must stay inside U when verts[i] is in U
    must: Vec<u64>,
    // escape[i]: verts[i] has a mandatory move leaving the component
    escape: Vec<bool>,
}

fn components(n: usize, edges: &BTreeSet<Edge>) -> Vec<Vec<usize>> {
    let cyc = on_cycle(n, edges.iter().copied());
    let mut g: petgraph::graph::DiGraph<(), ()> = petgraph::graph::DiGraph::new();
    for _ in 0..n {
        g.add_node(());
    }
    for &(u, v) in edges {
        g.add_edge(petgraph::graph::NodeIndex::new(u), petgraph::graph::NodeIndex::new(v), ());
    }
    petgraph::algo::tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            c.sort_unstable();
            c
        })
        .filter(|c| cyc[c[0]])
        .collect()
}

fn strongly_connected(out: &[u64], u: u64) -> bool {
    let first = u.trailing_zeros() as usize;
    let reach = |fwd: bool| {
        let mut seen = 1u64 << first;
        let mut stack = vec![first];
        while let Some(i) = stack.pop() {
            for j in 0..out.len() {
                if u & (1 << j) == 0 || seen & (1 << j) != 0 {
                    continue;
                }
                let edge = if fwd { out[i] & (1 << j) != 0 } else { out[j] & (1 << i) != 0 };
                if edge {
                    seen |= 1 << j;
                    stack.push(j);
                }
            }
        }
        seen
    };
    reach(true) == u && reach(false) == u
}

/// Visits every non-empty `U` inside `comp` closed under mandatory moves and
/// strongly connected along allowed moves.
fn for_each_closed(comp: &Component, mut f: impl FnMut(u64) -> bool) -> Option<u64> {
    let k = comp.verts.len();
    for u in 1u64..(1u64 << k) {
        let ok =
            (0..k).all(|i| u & (1 << i) == 0 || (!comp.escape[i] && comp.must[i] & !u == 0 && comp.out[i] & u != 0));
        if ok && strongly_connected(&comp.out.iter().map(|&o| o & u).collect::<Vec<_>>(), u) && !f(u) {
            return Some(u);
        }
    }
    None
}

fn candidate(view: &SubgameView<'_>, comp: &Component, u: u64, edges: &BTreeSet<Edge>) -> InfSetCandidate {
    let vertices: Vec<usize> = (0..comp.verts.len()).filter(|&i| u & (1 << i) != 0).map(|i| comp.verts[i]).collect();
    let inside: Region = Region::from_vertices(view.universe(), vertices.iter().copied());
    let h: BTreeSet<Edge> = edges.iter().copied().filter(|&(a, b)| inside.contains(a) && inside.contains(b)).collect();
    let fair = vertices.iter().all(|&v| view.live_successors(v).all(|w| h.contains(&(v, w))));
    InfSetCandidate {
        max_priority: vertices.iter().map(|&v| view.priority(v)).max().unwrap_or(0),
        vertices,
        edges: h,
        fair,
    }
}

/// Independent recheck of a reported candidate: edges allowed, graph strongly
/// connected, mandatory edges present.
fn recheck(
    view: &SubgameView<'_>,
    allowed: &BTreeSet<Edge>,
    mandatory: impl Fn(usize) -> bool,
    c: &InfSetCandidate,
) -> bool {
    if c.edges.is_empty() || !c.edges.is_subset(allowed) {
        return false;
    }
    let cyc = on_cycle(view.universe(), c.edges.iter().copied());
    let inside: BTreeSet<usize> = c.vertices.iter().copied().collect();
    let comps = components(view.universe(), &c.edges);
    let one = comps.iter().any(|comp| comp.iter().copied().collect::<BTreeSet<_>>() == inside);
    one && c
        .vertices
        .iter()
        .all(|&v| cyc[v] && (!mandatory(v) || allowed.range((v, 0)..=(v, usize::MAX)).all(|e| c.edges.contains(e))))
}

fn build_component(verts: Vec<usize>, allowed: &BTreeSet<Edge>, mandatory: impl Fn(usize) -> bool) -> Component {
    let k = verts.len();
    let local = |v: usize| verts.binary_search(&v).ok();
    let mut out = vec![0u64; k];
    let mut must = vec![0u64; k];
    let mut escape = vec![false; k];
    for (i, &v) in verts.iter().enumerate() {
        for &(_, w) in allowed.range((v, 0)..=(v, usize::MAX)) {
            match local(w) {
                Some(j) => {
                    out[i] |= 1 << j;
                    if mandatory(v) {
                        must[i] |= 1 << j;
                    }
                }
                None => escape[i] |= mandatory(v),
            }
        }
    }
    Component { verts, out, must, escape }
}

/// Whether every play in which Odd follows `t` (taking each template edge of
/// a recurring vertex infinitely often) is won by Odd.
pub fn certify_odd_template(view: &SubgameView<'_>, t: &OddTemplate, bound: usize) -> Verdict {
    if t.edges.len() > bound {
        return Verdict::TooLarge { edges: t.edges.len(), bound };
    }
    let odd = |v: usize| view.owner(v) == Player::Odd;
    for verts in components(view.universe(), &t.edges) {
        let comp = build_component(verts, &t.edges, odd);
        let mut bad = None;
        for_each_closed(&comp, |u| {
            let c = candidate(view, &comp, u, &t.edges);
            if c.fair && c.max_priority % 2 == 1 {
                true
            } else {
                bad = Some(c);
                false
            }
        });
        if let Some(c) = bad {
            assert!(recheck(view, &t.edges, odd, &c), "certifier produced an inconsistent candidate");
            return Verdict::Failed(CertifyFailure::OddLoses(c));
        }
    }
    Verdict::Certified
}

/// Whether every fair play in which Even follows `s` is won by Even.
pub fn certify_even_strategy(view: &SubgameView<'_>, s: &EvenStrategy, bound: usize) -> Verdict {
    let mut allowed: BTreeSet<Edge> = s.choice.iter().map(|(&u, &v)| (u, v)).collect();
    for v in s.vertices.iter().filter(|&v| view.owner(v) == Player::Odd) {
        allowed.extend(view.successors(v).filter(|&w| s.vertices.contains(w)).map(|w| (v, w)));
    }
    if allowed.len() > bound {
        return Verdict::TooLarge { edges: allowed.len(), bound };
    }
    let live: BTreeSet<Edge> = s.vertices.iter().flat_map(|v| view.live_successors(v).map(move |w| (v, w))).collect();
    for verts in components(view.universe(), &allowed) {
        // Even's single choice is forced; Odd may drop non-live moves but never live ones.
        let mut comp = build_component(verts, &allowed, |v| view.owner(v) == Player::Even);
        let live_comp = build_component(comp.verts.clone(), &live, |_| true);
        for i in 0..comp.verts.len() {
            comp.must[i] |= live_comp.must[i];
            comp.escape[i] |= live_comp.escape[i];
        }
        let mut bad = None;
        for_each_closed(&comp, |u| {
            let c = candidate(view, &comp, u, &allowed);
            if c.max_priority.is_multiple_of(2) {
                true
            } else {
                bad = Some(c);
                false
            }
        });
        if let Some(c) = bad {
            assert!(c.fair, "certifier produced an unfair candidate");
            assert!(
                recheck(view, &allowed, |v| view.owner(v) == Player::Even, &c),
                "certifier produced an inconsistent candidate"
            );
            return Verdict::Failed(CertifyFailure::EvenLoses(c));
        }
    }
    Verdict::Certified
}

/// Certifies that `w_even`/`w_odd` are exactly the winning regions, with
/// `s` and `t` as witnesses.
pub fn certify_partition(
    view: &SubgameView<'_>,
    w_even: &Region,
    w_odd: &Region,
    t: &OddTemplate,
    s: &EvenStrategy,
    bound: usize,
) -> Verdict {
    if !w_even.is_disjoint(w_odd) || w_even.union(w_odd) != *view.active() {
        return Verdict::Failed(CertifyFailure::NotAPartition);
    }
    if !view.is_trap(Player::Odd, w_even) {
        return Verdict::Failed(CertifyFailure::NotATrap(Player::Even));
    }
    if !view.is_trap(Player::Even, w_odd) {
        return Verdict::Failed(CertifyFailure::NotATrap(Player::Odd));
    }
    if t.vertices != *w_odd {
        return Verdict::Failed(CertifyFailure::NotAPartition);
    }
    if s.vertices != *w_even {
        return Verdict::Failed(CertifyFailure::NotAPartition);
    }
    if let Err(e) = validate_odd_template(view, t) {
        return Verdict::Failed(CertifyFailure::InvalidTemplate(e));
    }
    if let Err(e) = validate_even_strategy(view, s) {
        return Verdict::Failed(CertifyFailure::InvalidStrategy(e));
    }
    match certify_odd_template(view, t, bound) {
        Verdict::Certified => certify_even_strategy(view, s, bound),
        other => other,
    }
}
