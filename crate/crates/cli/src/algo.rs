use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use fairgame::template::{build_rank_template, extract_even_strategy};
use fairgame::{
    solve_even_fp, solve_odd_fp, solve_zielonka_fair, solve_zielonka_normal, Deadline, EvenStrategy, FpOptions,
    OddFairGame, OddTemplate, Region, SubgameView, Timeout, ZlOptions,
};

/// The four benchmarked solvers. `N-*` solvers ignore live edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    OfZl,
    OfFp,
    NZl,
    NFp,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::OfZl, Algo::OfFp, Algo::NZl, Algo::NFp];

    pub fn tag(self) -> &'static str {
        match self {
            Algo::OfZl => "of-zl",
            Algo::OfFp => "of-fp",
            Algo::NZl => "n-zl",
            Algo::NFp => "n-fp",
        }
    }

    pub fn is_fair(self) -> bool {
        matches!(self, Algo::OfZl | Algo::OfFp)
    }

    /// The game the solver actually sees.
    pub fn prepare(self, game: &OddFairGame) -> Cow<'_, OddFairGame> {
        if self.is_fair() || game.live_edge_count() == 0 {
            Cow::Borrowed(game)
        } else {
            Cow::Owned(game.without_live())
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algo::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| format!("unknown solver `{s}` (expected of-zl, of-fp, n-zl or n-fp)"))
    }
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub w_even: Region,
    pub w_odd: Region,
    pub template: Option<OddTemplate>,
    pub strategy: Option<EvenStrategy>,
}

/// Runs `algo` on `view`, which must already be prepared for it.
pub fn run(view: &SubgameView<'_>, algo: Algo, witnesses: bool, deadline: Deadline) -> Result<Solved, Timeout> {
    debug_assert!(algo.is_fair() || view.game().live_edge_count() == 0);
    match algo {
        Algo::OfFp | Algo::NFp => {
            let opts = FpOptions { ranks: witnesses, snapshots: false, deadline };
            let (w_odd, tr) = solve_odd_fp(view, opts)?;
            if !witnesses {
                return Ok(Solved { w_even: view.complement(&w_odd), w_odd, template: None, strategy: None });
            }
            let (w_even, tre) = solve_even_fp(view, opts)?;
            let template = build_rank_template(view, &w_odd, &tr).expect("fixed-point region carries ranks");
            let strategy = extract_even_strategy(view, &w_even, &tre).expect("fixed-point region carries ranks");
            Ok(Solved { w_even, w_odd, template: Some(template), strategy: Some(strategy) })
        }
        Algo::OfZl | Algo::NZl => {
            let opts = ZlOptions { templates: witnesses, audit: false, deadline };
            let sol =
                if algo == Algo::OfZl { solve_zielonka_fair(view, opts)? } else { solve_zielonka_normal(view, opts)? };
            Ok(Solved { w_even: sol.w_even, w_odd: sol.w_odd, template: sol.odd_template, strategy: sol.even_strategy })
        }
    }
}
