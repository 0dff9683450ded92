//! One-step predecessor operators over a subgame view.
//!
//! Arguments are subsets of the active set. Complements are taken relative to it.

use crate::game::{Player, SubgameView};
use crate::region::Region;

impl SubgameView<'_> {
    /// Active complement of `s`.
    pub fn complement(&self, s: &Region) -> Region {
        self.active().difference(s)
    }

    fn collect(&self, pred: impl Fn(usize) -> bool) -> Region {
        Region::from_vertices(self.universe(), self.active().iter().filter(|&v| pred(v)))
    }

    /// `p`-vertices with some successor in `s`.
    pub fn pre_exists(&self, p: Player, s: &Region) -> Region {
        self.collect(|v| self.owner(v) == p && self.successors(v).any(|w| s.contains(w)))
    }

    /// `p`-vertices all of whose successors lie in `s`.
    pub fn pre_forall(&self, p: Player, s: &Region) -> Region {
        self.collect(|v| self.owner(v) == p && self.successors(v).all(|w| s.contains(w)))
    }

    /// Odd vertices with some live successor in `s`.
    pub fn lpre_exists(&self, s: &Region) -> Region {
        self.collect(|v| self.owner(v) == Player::Odd && self.live_successors(v).any(|w| s.contains(w)))
    }

    /// Odd vertices all of whose live successors lie in `s`; vacuous without live edges.
    pub fn lpre_forall(&self, s: &Region) -> Region {
        self.collect(|v| self.owner(v) == Player::Odd && self.live_successors(v).all(|w| s.contains(w)))
    }

    /// Vertices from which `p` forces the next step into `s`.
    pub fn cpre(&self, p: Player, s: &Region) -> Region {
        self.collect(|v| self.cpre_holds(p, v, s))
    }

    /// `Cpre_Even(t) ∪ (Lpre∃(t) ∩ Pre∀_Odd(s))`.
    pub fn apre(&self, s: &Region, t: &Region) -> Region {
        self.collect(|v| self.apre_holds(v, s, t))
    }

    /// `Cpre_Odd(t) ∩ (V_Even ∪ Lpre∀(t) ∪ Pre∃_Odd(s))`, the active complement of `apre(¬s, ¬t)`.
    pub fn npre(&self, s: &Region, t: &Region) -> Region {
        self.collect(|v| self.npre_holds(v, s, t))
    }

    #[inline]
    pub fn cpre_holds(&self, p: Player, v: usize, s: &Region) -> bool {
        if self.owner(v) == p {
            self.successors(v).any(|w| s.contains(w))
        } else {
            self.successors(v).all(|w| s.contains(w))
        }
    }

    #[inline]
    pub fn apre_holds(&self, v: usize, s: &Region, t: &Region) -> bool {
        match self.owner(v) {
            Player::Even => self.successors(v).any(|w| t.contains(w)),
            Player::Odd => {
                let mut all_t = true;
                let mut all_s = true;
                for w in self.successors(v) {
                    all_t &= t.contains(w);
                    all_s &= s.contains(w);
                }
                all_t || (all_s && self.live_successors(v).any(|w| t.contains(w)))
            }
        }
    }

    #[inline]
    pub fn npre_holds(&self, v: usize, s: &Region, t: &Region) -> bool {
        match self.owner(v) {
            Player::Even => self.successors(v).all(|w| t.contains(w)),
            Player::Odd => {
                let mut some_t = false;
                let mut some_s = false;
                for w in self.successors(v) {
                    some_t |= t.contains(w);
                    some_s |= s.contains(w);
                }
                some_t && (some_s || self.live_successors(v).all(|w| t.contains(w)))
            }
        }
    }

    /// Whether every `p`-vertex of `t` has all successors in `t` and every other
    /// vertex of `t` has one, i.e. `p` cannot leave `t`.
    pub fn is_trap(&self, p: Player, t: &Region) -> bool {
        t.iter().all(|v| {
            if self.owner(v) == p {
                self.successors(v).all(|w| t.contains(w))
            } else {
                self.successors(v).any(|w| t.contains(w))
            }
        })
    }
}
