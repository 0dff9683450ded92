//! Zielonka-style recursive solvers built on safe-reachability sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::deadline::{Deadline, Timeout};
use crate::game::{Player, SubgameView};
use crate::region::Region;
use crate::template::{Edge, EvenStrategy, OddTemplate};

/// Result of a layered safe-reachability computation.
///
/// `rank[v]` is the first iterate containing `v` (1 for targets, 0 outside
/// `set`). `partial` holds rank-decreasing edges only: one edge per vertex of
/// the reaching player and all progress edges of the other player's vertices.
#[derive(Clone, Debug)]
pub struct SafeReachResult {
    pub set: Region,
    pub rank: Vec<u32>,
    pub partial: BTreeSet<Edge>,
}

fn layered_reach(
    view: &SubgameView<'_>,
    player: Player,
    fair: bool,
    safe: &Region,
    target: &Region,
) -> SafeReachResult {
    let n = view.universe();
    let mut set = target.intersection(safe);
    let mut rank = vec![0u32; n];
    let mut count: Vec<u32> = vec![u32::MAX; n];
    let mut frontier: Vec<usize> = set.to_vec();
    for &v in &frontier {
        rank[v] = 1;
    }
    let mut r = 1;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &w in &frontier {
            for u in view.predecessors(w) {
                if set.contains(u) || !safe.contains(u) {
                    continue;
                }
                let hit = if view.owner(u) == player {
                    true
                } else {
                    if count[u] == u32::MAX {
                        count[u] = view.successors(u).count() as u32;
                    }
                    count[u] -= 1;
                    count[u] == 0 || (fair && view.is_live(u, w))
                };
                if hit {
                    set.insert(u);
                    rank[u] = r + 1;
                    next.push(u);
                }
            }
        }
        frontier = next;
        r += 1;
    }
    let mut partial = BTreeSet::new();
    for v in set.iter().filter(|&v| rank[v] > 1) {
        let lower = |w: &usize| set.contains(*w) && rank[*w] < rank[v];
        if view.owner(v) == player {
            let w = view
                .successors(v)
                .filter(lower)
                .min_by_key(|&w| (rank[w], w))
                .expect("attracted vertex has a lower successor");
            partial.insert((v, w));
        } else {
            partial.extend(view.successors(v).filter(lower).map(|w| (v, w)));
        }
    }
    SafeReachResult { set, rank, partial }
}

/// `μX. S ∩ (R ∪ Cpre_p(X))`, the (classical) attractor of `p` to `R` inside `S`.
pub fn safe_reach(view: &SubgameView<'_>, p: Player, safe: &Region, target: &Region) -> SafeReachResult {
    layered_reach(view, p, false, safe, target)
}

pub fn safe_reach_odd(view: &SubgameView<'_>, safe: &Region, target: &Region) -> SafeReachResult {
    layered_reach(view, Player::Odd, false, safe, target)
}

/// `μX. S ∩ (R ∪ Cpre_Even(X) ∪ Lpre∃(X))`: an Odd vertex joins as soon as one
/// live successor has.
pub fn safe_reach_even_fair(view: &SubgameView<'_>, safe: &Region, target: &Region) -> SafeReachResult {
    layered_reach(view, Player::Even, true, safe, target)
}

/// `νY.μX. S ∩ (R ∪ Cpre_Even(X) ∪ (Lpre∃(X) ∩ Pre∀_Odd(Y)))`, evaluated naively.
///
/// Exact fair reachability for Even; used to cross-check the cheaper variant.
pub fn safe_reach_even_full(view: &SubgameView<'_>, safe: &Region, target: &Region) -> Region {
    let r = target.intersection(safe);
    let mut y = view.active().clone();
    loop {
        let mut x = Region::empty(view.universe());
        loop {
            let mut step = view.cpre(Player::Even, &x);
            step.union_with(&view.lpre_exists(&x).intersection(&view.pre_forall(Player::Odd, &y)));
            step.union_with(&r);
            step.intersect_with(safe);
            if step == x {
                break;
            }
            x = step;
        }
        if x == y {
            return y;
        }
        y = x;
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZlOptions {
    pub templates: bool,
    pub audit: bool,
    pub deadline: Deadline,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ZlStats {
    pub calls: u64,
    pub iterations: u64,
}

#[derive(Clone, Debug)]
pub struct ZielonkaSolution {
    pub w_even: Region,
    pub w_odd: Region,
    pub odd_template: Option<OddTemplate>,
    pub even_strategy: Option<EvenStrategy>,
    pub stats: ZlStats,
    /// Broken recursion invariants, collected when auditing.
    pub audit_failures: Vec<String>,
}

#[derive(Clone, Debug)]
struct Outcome {
    w_even: Region,
    w_odd: Region,
    odd_edges: BTreeSet<Edge>,
    even_choice: BTreeMap<usize, usize>,
}

impl Outcome {
    fn empty(n: usize) -> Self {
        Outcome {
            w_even: Region::empty(n),
            w_odd: Region::empty(n),
            odd_edges: BTreeSet::new(),
            even_choice: BTreeMap::new(),
        }
    }

    fn win(&self, p: Player) -> &Region {
        match p {
            Player::Even => &self.w_even,
            Player::Odd => &self.w_odd,
        }
    }
}

struct Piece {
    sub: Outcome,
    reach: SafeReachResult,
}

struct Recursion {
    fair: bool,
    opts: ZlOptions,
    stats: ZlStats,
    failures: Vec<String>,
}

impl Recursion {
    fn reach(&self, view: &SubgameView<'_>, p: Player, safe: &Region, target: &Region) -> SafeReachResult {
        layered_reach(view, p, self.fair && p == Player::Even, safe, target)
    }

    fn audit(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            let msg = what();
            log::warn!("audit: {msg}");
            self.failures.push(msg);
        }
    }

    fn solve(&mut self, lam: Player, n: u32, view: &SubgameView<'_>) -> Result<Outcome, Timeout> {
        let size = view.universe();
        if view.is_empty() {
            return Ok(Outcome::empty(size));
        }
        debug_assert!(n > 0, "non-empty subgame reached priority 0");
        if view.active().iter().all(|v| view.priority(v) != n) {
            // No vertex of the top class: the level is vacuous, determinacy hands it down.
            return self.solve(lam.opponent(), n - 1, view);
        }
        self.stats.calls += 1;
        let opp = lam.opponent();
        let all = view.active().clone();
        let mut x = all.clone();
        let mut pieces: Vec<Piece> = Vec::new();
        let (last_sub, last_reach) = loop {
            self.opts.deadline.check()?;
            self.stats.iterations += 1;
            // Inside X: successors that already left X no longer count.
            let xv = view.restrict_trap(x.clone());
            let top = view.priority_class(n).intersection(&x);
            let reach = self.reach(&xv, lam, &x, &top);
            let z = x.difference(&reach.set);
            if self.opts.audit {
                let ok = z.iter().all(|v| {
                    if view.owner(v) == lam {
                        view.successors(v).filter(|&w| x.contains(w)).all(|w| z.contains(w))
                    } else {
                        view.successors(v).any(|w| z.contains(w))
                    }
                });
                self.audit(ok, || format!("level {n}: residual set is not a {lam} trap"));
            }
            let sub_view = view.restrict_trap(z);
            let sub = self.solve(opp, n - 1, &sub_view)?;
            let z_opp = sub.win(opp).clone();
            if z_opp.is_empty() {
                break (sub, reach);
            }
            let back = self.reach(&xv, opp, &x, &z_opp);
            let next = x.difference(&back.set);
            if self.opts.audit {
                let alt = all.difference(&self.reach(view, opp, &all, &all.difference(&x).union(&z_opp)).set);
                self.audit(alt == next, || format!("level {n}: shrinking step differs from global reach"));
                self.audit(next.is_subset(&x) && next != x, || format!("level {n}: no progress"));
                self.audit(view.is_trap(opp, &next), || format!("level {n}: remainder is not an {opp} trap"));
            }
            pieces.push(Piece { sub, reach: back });
            x = next;
        };

        // Odd levels close with an Odd attractor; Even's over-approximate reach
        // sets may have swallowed vertices that Odd wins without reaching X.
        let final_reach = (lam == Player::Odd && self.fair).then(|| safe_reach_odd(view, &all, &x));
        let redo = match &final_reach {
            Some(t) if t.set != x => {
                let rest = all.difference(&t.set);
                Some(self.solve(Player::Odd, n, &view.restrict_trap(rest))?)
            }
            _ => None,
        };
        let mut out = Outcome::empty(size);
        match (lam, &final_reach, &redo) {
            (Player::Even, _, _) | (Player::Odd, None, _) => {
                out.w_even = if lam == Player::Even { x.clone() } else { all.difference(&x) };
                out.w_odd = all.difference(&out.w_even);
            }
            (Player::Odd, Some(t), None) => {
                out.w_odd = t.set.clone();
                out.w_even = all.difference(&t.set);
            }
            (Player::Odd, Some(t), Some(r)) => {
                out.w_odd = t.set.union(&r.w_odd);
                out.w_even = r.w_even.clone();
            }
        }
        if self.opts.audit {
            self.audit(view.is_trap(Player::Odd, &out.w_even), || format!("level {n}: Even region is not an Odd trap"));
            self.audit(view.is_trap(Player::Even, &out.w_odd), || format!("level {n}: Odd region is not an Even trap"));
        }
        if !self.opts.templates {
            return Ok(out);
        }

        let top = view.priority_class(n).intersection(&x);
        let anchor = |v: usize| view.successors(v).find(|&w| x.contains(w)).expect("top vertex stays inside");
        match lam {
            Player::Odd => {
                let mut edges = last_sub.odd_edges;
                edges.extend(last_reach.partial.iter().copied());
                for v in top.iter().filter(|&v| view.owner(v) == Player::Odd) {
                    edges.insert((v, anchor(v)));
                }
                if let Some(t) = &final_reach {
                    edges.extend(t.partial.iter().copied());
                }
                out.even_choice = match redo {
                    Some(r) => {
                        edges.extend(r.odd_edges);
                        r.even_choice
                    }
                    None => {
                        let mut choice = BTreeMap::new();
                        for p in &pieces {
                            choice.extend(p.sub.even_choice.iter().map(|(&u, &v)| (u, v)));
                            choice.extend(
                                p.reach.partial.iter().filter(|&&(u, _)| view.owner(u) == Player::Even).copied(),
                            );
                        }
                        choice
                    }
                };
                out.odd_edges = self.finish_odd(view, &out.w_odd, edges);
            }
            Player::Even => {
                let mut choice = last_sub.even_choice;
                choice.extend(last_reach.partial.iter().filter(|&&(u, _)| view.owner(u) == Player::Even).copied());
                for v in top.iter().filter(|&v| view.owner(v) == Player::Even) {
                    choice.insert(v, anchor(v));
                }
                out.even_choice = choice;

                let mut edges = BTreeSet::new();
                for p in pieces {
                    edges.extend(p.sub.odd_edges);
                    edges.extend(p.reach.partial.iter().copied());
                }
                out.odd_edges = self.finish_odd(view, &out.w_odd, edges);
            }
        }
        Ok(out)
    }

    /// Gives Even vertices all their edges and closes under live edges on cycles.
    fn finish_odd(&self, view: &SubgameView<'_>, region: &Region, mut edges: BTreeSet<Edge>) -> BTreeSet<Edge> {
        for v in region.iter().filter(|&v| view.owner(v) == Player::Even) {
            edges.extend(view.successors(v).map(|w| (v, w)));
        }
        let mut t = OddTemplate { vertices: region.clone(), edges };
        if self.fair {
            t.close_live(view);
        }
        t.edges
    }
}

fn run(view: &SubgameView<'_>, fair: bool, opts: ZlOptions) -> Result<ZielonkaSolution, Timeout> {
    let mut rec = Recursion { fair, opts, stats: ZlStats::default(), failures: Vec::new() };
    let l = view.least_even_upperbound();
    let out = rec.solve(Player::Even, l, view)?;
    log::debug!("zielonka: {} calls, {} iterations", rec.stats.calls, rec.stats.iterations);
    let (odd_template, even_strategy) = if opts.templates {
        (
            Some(OddTemplate { vertices: out.w_odd.clone(), edges: out.odd_edges }),
            Some(EvenStrategy { vertices: out.w_even.clone(), choice: out.even_choice }),
        )
    } else {
        (None, None)
    };
    Ok(ZielonkaSolution {
        w_even: out.w_even,
        w_odd: out.w_odd,
        odd_template,
        even_strategy,
        stats: rec.stats,
        audit_failures: rec.failures,
    })
}

/// Solves the Odd-fair game with fair reachability on Even's side and a final
/// Odd attractor at Odd levels.
pub fn solve_zielonka_fair(view: &SubgameView<'_>, opts: ZlOptions) -> Result<ZielonkaSolution, Timeout> {
    run(view, true, opts)
}

/// Classical Zielonka on the underlying parity game; live edges are ignored.
pub fn solve_zielonka_normal(view: &SubgameView<'_>, opts: ZlOptions) -> Result<ZielonkaSolution, Timeout> {
    run(view, false, opts)
}
