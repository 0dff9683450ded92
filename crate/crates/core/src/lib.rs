//! Solvers for parity games and Odd-fair parity games.
//!
//! In an Odd-fair game some edges leaving Odd vertices are *live*: a play
//! that visits such a vertex infinitely often must also take each of its live
//! edges infinitely often, or Odd loses. Odd wins a play that is fair in this
//! sense and whose highest priority seen infinitely often is odd.
//!
//! Two solver families compute the winning regions: a nested fixed point over
//! dedicated predecessor operators ([`fixpoint`]) and a Zielonka-style
//! recursion ([`zielonka`]). Both can produce witnesses, namely a strategy
//! template for Odd and a positional strategy for Even ([`template`]), which
//! [`certify`] checks exhaustively on small games.

pub mod certify;
pub mod deadline;
pub mod fixpoint;
pub mod game;
pub mod generate;
mod graph;
pub mod mutate;
pub mod pgsolver;
pub mod region;
pub mod template;
pub mod transformers;
pub mod zielonka;

pub use deadline::{Deadline, Timeout};
pub use fixpoint::{solve_even_fp, solve_odd_fp, FpOptions, FpTrace, Rank};
pub use game::{GameBuilder, OddFairGame, Player, SubgameView, Violation};
pub use pgsolver::{parse_game, write_game, ParseError};
pub use region::Region;
pub use template::{EvenStrategy, OddTemplate};
pub use zielonka::{solve_zielonka_fair, solve_zielonka_normal, ZielonkaSolution, ZlOptions};
