//! Exact equilibrium toolkit for attraction games on the unit interval.
//!
//! Agents pick locations in `[0, 1]`; agent `i` attracts the clients inside
//! the interval of width `w_i` centered at its location. Client mass at a
//! point splits evenly among all agents covering it. The crate computes
//! supports, winner sets and the congestion potential exactly over
//! piecewise-constant client densities with rational data, runs
//! best-response dynamics in the support-utility setting, constructs
//! winner-utility equilibria for the solvable families (two agents, three
//! agents with equal widths, width one half and above), and certifies
//! equilibria with exact deviation analysis.
//!
//! All arithmetic is exact rational arithmetic; floating point appears only
//! when rendering reports.

pub mod analysis;
pub mod dynamics;
mod error;
pub mod game;
pub mod piecewise;
pub mod rational;
pub mod stepfn;
pub mod verifier;
pub mod winner;

pub use error::{Error, Result};
pub use game::{congestion, potential, support_vector, utility_report};
pub use game::{Density, Game, Mode, Profile, UtilityReport};
pub use piecewise::{Crossings, PiecewiseLinear};
pub use rational::{parse_rational, rat, Rational};
pub use stepfn::StepFunction;
