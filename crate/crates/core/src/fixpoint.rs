//! Nested fixed-point solvers for Odd-fair parity games.
//!
//! Both formulas alternate `l` variables: `Y_l, X_{l-1}, ..., Y_2, X_1` from the
//! outside in. Variable index `k` refers to level `l - k`. Least variables start
//! at the empty set and greatest ones at the active set, and every variable is
//! re-initialized whenever an enclosing variable changes.

use std::cmp::Ordering;
use std::fmt;

use crate::deadline::{Deadline, Timeout};
use crate::game::{Player, SubgameView};
use crate::region::Region;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fix {
    Least,
    Greatest,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FpOptions {
    pub ranks: bool,
    pub snapshots: bool,
    pub deadline: Deadline,
}

impl FpOptions {
    pub fn traced() -> Self {
        FpOptions { ranks: true, snapshots: true, deadline: Deadline::none() }
    }

    pub fn with_ranks() -> Self {
        FpOptions { ranks: true, ..Default::default() }
    }
}

/// Iteration counters of the least variables, outermost first.
///
/// For the Odd formula these are the `Y_l, Y_{l-2}, ..., Y_2` entries; the
/// interleaved `X` positions are always zero and are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rank(pub Vec<u32>);

impl Rank {
    /// Compares the first `b` positions of the zero-interleaved tuples.
    pub fn cmp_prefix(&self, other: &Rank, b: usize) -> Ordering {
        let k = b.div_ceil(2).min(self.0.len()).min(other.0.len());
        self.0[..k].cmp(&other.0[..k])
    }

    /// The zero-interleaved tuple `(r_l, 0, r_{l-2}, 0, ..., r_2, 0)`.
    pub fn interleaved(&self) -> Vec<u32> {
        self.0.iter().flat_map(|&r| [r, 0]).collect()
    }

    pub fn is_minimal(&self) -> bool {
        self.0.iter().all(|&r| r == 1)
    }
}

impl PartialOrd for Rank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rank {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.interleaved().iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One iterate of one variable.
///
/// `indices[..k]` are the iterate numbers of the enclosing variables' current
/// values and `indices[k]` that of the iterate itself.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub level: u32,
    pub indices: Vec<usize>,
    pub region: Region,
}

#[derive(Clone, Debug)]
pub struct FpTrace {
    pub player: Player,
    pub l: u32,
    /// Number of body evaluations of each variable, by index.
    pub iterations: Vec<u64>,
    ranks: Vec<Option<Rank>>,
    snapshots: Vec<Snapshot>,
}

impl FpTrace {
    pub fn rank(&self, v: usize) -> Option<&Rank> {
        self.ranks.get(v).and_then(Option::as_ref)
    }

    pub fn ranks(&self) -> &[Option<Rank>] {
        &self.ranks
    }

    pub fn has_ranks(&self) -> bool {
        !self.ranks.is_empty()
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn snapshot(&self, level: u32, indices: &[usize]) -> Option<&Region> {
        self.snapshots.iter().find(|s| s.level == level && s.indices == indices).map(|s| &s.region)
    }

    /// Vertices holding the smallest possible rank.
    pub fn m_set(&self) -> Region {
        Region::from_vertices(
            self.ranks.len(),
            self.ranks.iter().enumerate().filter(|(_, r)| r.as_ref().is_some_and(Rank::is_minimal)).map(|(v, _)| v),
        )
    }
}

/// Per-vertex rank rows for the least variables at or inside some index.
struct Table {
    width: usize,
    cells: Vec<u32>,
}

impl Table {
    fn new(n: usize, width: usize) -> Self {
        Table { width, cells: vec![0; n * width] }
    }

    fn row(&self, v: usize) -> &[u32] {
        &self.cells[v * self.width..(v + 1) * self.width]
    }
}

struct Nest<'a, 'g, F> {
    view: &'a SubgameView<'g>,
    kinds: Vec<Fix>,
    body: F,
    opts: FpOptions,
    vals: Vec<Region>,
    counters: Vec<usize>,
    iterations: Vec<u64>,
    snapshots: Vec<Snapshot>,
    width: Vec<usize>,
    l: u32,
}

impl<F: Fn(&SubgameView<'_>, &[Region]) -> Region> Nest<'_, '_, F> {
    fn eval(&mut self, k: usize) -> Result<(Region, Option<Table>), Timeout> {
        let n = self.view.universe();
        if k == self.kinds.len() {
            let r = (self.body)(self.view, &self.vals);
            let t = self.opts.ranks.then(|| Table::new(n, 0));
            return Ok((r, t));
        }
        let kind = self.kinds[k];
        let mut cur = match kind {
            Fix::Least => Region::empty(n),
            Fix::Greatest => self.view.active().clone(),
        };
        self.counters[k] = 0;
        let mut acc = match (self.opts.ranks, kind) {
            (true, Fix::Least) => Some(Table::new(n, self.width[k])),
            _ => None,
        };
        let mut last_inner = None;
        loop {
            self.opts.deadline.check()?;
            self.vals[k] = cur.clone();
            let (next, inner) = self.eval(k + 1)?;
            self.iterations[k] += 1;
            self.counters[k] += 1;
            if self.opts.snapshots {
                self.snapshots.push(Snapshot {
                    level: self.l - k as u32,
                    indices: self.counters[..=k].to_vec(),
                    region: next.clone(),
                });
            }
            match kind {
                Fix::Least => {
                    if let (Some(acc), Some(inner)) = (acc.as_mut(), inner.as_ref()) {
                        let w = acc.width;
                        for v in next.difference(&cur).iter() {
                            acc.cells[v * w] = self.counters[k] as u32;
                            acc.cells[v * w + 1..(v + 1) * w].copy_from_slice(inner.row(v));
                        }
                    }
                }
                Fix::Greatest => last_inner = inner,
            }
            if next == cur {
                break;
            }
            cur = next;
        }
        let table = match kind {
            Fix::Least => acc,
            Fix::Greatest => last_inner,
        };
        Ok((cur, table))
    }
}

fn run<F>(
    view: &SubgameView<'_>,
    player: Player,
    opts: FpOptions,
    l: u32,
    body: F,
) -> Result<(Region, FpTrace), Timeout>
where
    F: Fn(&SubgameView<'_>, &[Region]) -> Region,
{
    let depth = l as usize;
    // Odd: μY_l νX_{l-1} ...; Even: νY_l μX_{l-1} ...
    let kinds: Vec<Fix> = (0..depth)
        .map(|k| match (player, k % 2 == 0) {
            (Player::Odd, true) | (Player::Even, false) => Fix::Least,
            _ => Fix::Greatest,
        })
        .collect();
    let mut width = vec![0; depth + 1];
    for k in (0..depth).rev() {
        width[k] = width[k + 1] + usize::from(kinds[k] == Fix::Least);
    }
    let n = view.universe();
    let mut nest = Nest {
        view,
        kinds,
        body,
        opts,
        vals: vec![Region::empty(n); depth],
        counters: vec![0; depth],
        iterations: vec![0; depth],
        snapshots: Vec::new(),
        width,
        l,
    };
    let (region, table) = nest.eval(0)?;
    let ranks = match table {
        Some(t) => (0..n).map(|v| region.contains(v).then(|| Rank(t.row(v).to_vec()))).collect(),
        None => Vec::new(),
    };
    log::debug!(
        "{player} fixed point on {} vertices: {} iterations",
        view.active().len(),
        nest.iterations.iter().sum::<u64>()
    );
    Ok((region, FpTrace { player, l, iterations: nest.iterations, ranks, snapshots: nest.snapshots }))
}

/// Odd's winning region as `μY_l.νX_{l-1}...μY_2.νX_1. ⋂_{j even} B_j`.
pub fn solve_odd_fp(view: &SubgameView<'_>, opts: FpOptions) -> Result<(Region, FpTrace), Timeout> {
    let l = view.least_even_upperbound();
    run(view, Player::Odd, opts, l, move |view, vals| odd_body(view, vals, l))
}

/// Even's winning region as `νY_l.μX_{l-1}...νY_2.μX_1. ⋃_{j even} A_j`.
pub fn solve_even_fp(view: &SubgameView<'_>, opts: FpOptions) -> Result<(Region, FpTrace), Timeout> {
    let l = view.least_even_upperbound();
    run(view, Player::Even, opts, l, move |view, vals| even_body(view, vals, l))
}

/// `B_j = C_{>j} ∪ (C_{<j} ∩ Npre(Y_j, X_{j-1})) ∪ (C_j ∩ Cpre_Odd(Y_j))`, intersected over even `j`.
pub(crate) fn odd_body(view: &SubgameView<'_>, vals: &[Region], l: u32) -> Region {
    let n = view.universe();
    Region::from_vertices(
        n,
        view.active().iter().filter(|&v| {
            let p = view.priority(v);
            (2..=l).step_by(2).filter(|&j| j >= p).all(|j| {
                let y = &vals[(l - j) as usize];
                if j == p {
                    view.cpre_holds(Player::Odd, v, y)
                } else {
                    view.npre_holds(v, y, &vals[(l - j + 1) as usize])
                }
            })
        }),
    )
}

/// `A_j = (C_j ∩ Cpre_Even(Y_j)) ∪ (C_{<j} ∩ Apre(Y_j, X_{j-1}))`, united over even `j`.
pub(crate) fn even_body(view: &SubgameView<'_>, vals: &[Region], l: u32) -> Region {
    let n = view.universe();
    Region::from_vertices(
        n,
        view.active().iter().filter(|&v| {
            let p = view.priority(v);
            (2..=l).step_by(2).filter(|&j| j >= p).any(|j| {
                let y = &vals[(l - j) as usize];
                if j == p {
                    view.cpre_holds(Player::Even, v, y)
                } else {
                    view.apre_holds(v, y, &vals[(l - j + 1) as usize])
                }
            })
        }),
    )
}

/// Whether `rank` satisfies the descent inequality at every vertex of `region`.
///
/// For `v` with `χ(v) ∈ {m-1, m}`, `m` even, the first `l+1-χ(v)` tuple
/// positions must not increase along the edges Even may pick (all of them at
/// Even vertices, some of them at Odd vertices) and must strictly decrease when
/// `χ(v)` is even. Returns the first offending vertex.
pub fn check_odd_rank_descent(view: &SubgameView<'_>, region: &Region, trace: &FpTrace) -> Result<(), usize> {
    let l = trace.l;
    for v in region.iter() {
        let rv = trace.rank(v).ok_or(v)?;
        let b = (l + 1 - view.priority(v)) as usize;
        let strict = view.priority(v).is_multiple_of(2);
        let ok_edge = |w: usize| match trace.rank(w) {
            Some(rw) if region.contains(w) => match rv.cmp_prefix(rw, b) {
                Ordering::Greater => true,
                Ordering::Equal => !strict,
                Ordering::Less => false,
            },
            _ => false,
        };
        let ok = match view.owner(v) {
            Player::Even => view.successors(v).all(ok_edge),
            Player::Odd => view.successors(v).any(ok_edge),
        };
        if !ok {
            return Err(v);
        }
    }
    Ok(())
}
