//! Best responses and epsilon-best-response dynamics in the support
//! utility setting.
//!
//! One agent moves at a time, and only when the move improves its support
//! utility by more than epsilon. Every improving move raises the congestion
//! potential by exactly the mover's gain, so with epsilon > 0 the number of
//! improving moves is bounded by `H_n / epsilon`. With epsilon = 0 the
//! dynamics performs exact improvements; on rational data every best
//! response lands on a breakpoint lattice, and the strictly increasing
//! potential still forces termination in practice (the round limit guards
//! the loop).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::{congestion_excluding, potential, utility_report, Game, Mode, Profile};
use crate::rational::{rat, Rational};

/// Who gets to move next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOrder {
    /// Cycle agents by index, moving each improver as it is encountered.
    RoundRobin,
    /// Always move the agent with the largest gain (ties to the smallest
    /// index).
    MaxGain,
}

/// Why the dynamics stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// No agent can gain more than epsilon: an epsilon-equilibrium.
    EpsilonStable,
    /// The move budget ran out first.
    RoundLimit,
}

/// One improving move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRecord {
    pub agent: usize,
    pub from: Rational,
    pub to: Rational,
    pub gain: Rational,
    pub potential_after: Rational,
}

/// Full record of a dynamics run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsTrace {
    pub potential_start: Rational,
    pub moves: Vec<MoveRecord>,
    pub terminated: bool,
    pub reason: StopReason,
}

pub fn default_epsilon() -> Rational {
    rat(1, 1_000_000_000)
}

pub const DEFAULT_ROUND_LIMIT: usize = 100_000;

/// Exact best response of one agent holding everyone else fixed: the
/// leftmost maximizer of the windowed integral of `f / (c + 1)` over the
/// agent's feasible range, and its value. Support mode only.
pub fn best_response(game: &Game, profile: &Profile, agent: usize) -> Result<(Rational, Rational)> {
    if game.mode() != Mode::Support {
        return Err(Error::ModeMismatch {
            required: "support",
        });
    }
    let others = congestion_excluding(game, profile, agent)?;
    let entrant_share = game
        .density()
        .step()
        .combine_with(&others, |fv, cv| Some(fv / (cv + rat(1, 1))))?;
    let (lo, hi) = game.feasible_range(agent);
    let objective = entrant_share.window_objective(game.width(agent), (&lo, &hi))?;
    Ok(objective.argmax())
}

/// Runs epsilon-best-response dynamics from `start` until no agent can gain
/// more than `epsilon` or until `round_limit` improving moves. Exhausting
/// the limit is not an error; the trace records the reason.
pub fn run_dynamics(
    game: &Game,
    start: &Profile,
    epsilon: &Rational,
    round_limit: usize,
    order: UpdateOrder,
) -> Result<(Profile, DynamicsTrace)> {
    if game.mode() != Mode::Support {
        return Err(Error::ModeMismatch {
            required: "support",
        });
    }
    if epsilon < &Rational::zero() {
        return Err(Error::Config(format!("negative epsilon {epsilon}")));
    }
    game.validate_profile(start)?;

    let mut profile = start.clone();
    let mut trace = DynamicsTrace {
        potential_start: potential(game, &profile)?,
        moves: Vec::new(),
        terminated: true,
        reason: StopReason::EpsilonStable,
    };
    if game.n() == 0 {
        return Ok((profile, trace));
    }

    // Finds the next improving move under the chosen order, if any.
    let next_move = |profile: &Profile, cursor: usize| -> Result<Option<(usize, Rational, Rational)>> {
        let report = utility_report(game, profile)?;
        match order {
            UpdateOrder::RoundRobin => {
                for offset in 0..game.n() {
                    let i = (cursor + offset) % game.n();
                    let (loc, val) = best_response(game, profile, i)?;
                    let gain = &val - &report.supports[i];
                    if &gain > epsilon {
                        return Ok(Some((i, loc, gain)));
                    }
                }
                Ok(None)
            }
            UpdateOrder::MaxGain => {
                let mut best: Option<(usize, Rational, Rational)> = None;
                for i in 0..game.n() {
                    let (loc, val) = best_response(game, profile, i)?;
                    let gain = &val - &report.supports[i];
                    if &gain > epsilon && best.as_ref().map_or(true, |(_, _, g)| &gain > g) {
                        best = Some((i, loc, gain));
                    }
                }
                Ok(best)
            }
        }
    };

    let mut cursor = 0usize;
    while let Some((agent, to, gain)) = next_move(&profile, cursor)? {
        if trace.moves.len() >= round_limit {
            trace.reason = StopReason::RoundLimit;
            return Ok((profile, trace));
        }
        let from = profile.get(agent).clone();
        profile = profile.with_location(agent, to.clone());
        trace.moves.push(MoveRecord {
            agent,
            from,
            to,
            gain,
            potential_after: potential(game, &profile)?,
        });
        cursor = (agent + 1) % game.n();
    }
    Ok((profile, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Density;
    use crate::rational::{int, rat};
    use crate::stepfn::StepFunction;

    fn split_density(at: Rational, left: Rational, right: Rational) -> Density {
        Density::new(
            StepFunction::new(vec![int(0), at, int(1)], vec![left, right]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn best_response_against_fixed_rival() {
        // 5/4 then 5/6 split at 0.4; rival fixed at 0.2, both widths 0.4.
        let game = Game::new(
            split_density(rat(2, 5), rat(5, 4), rat(5, 6)),
            vec![rat(2, 5), rat(2, 5)],
            Mode::Support,
        )
        .unwrap();
        let profile = Profile::new(vec![rat(1, 5), rat(1, 5)]);
        let (loc, val) = best_response(&game, &profile, 1).unwrap();
        assert_eq!(loc, rat(3, 5));
        assert_eq!(val, rat(1, 3));
    }

    #[test]
    fn best_response_of_lone_agent_is_leftmost() {
        let game = Game::new(Density::uniform(), vec![rat(2, 5)], Mode::Support).unwrap();
        let profile = Profile::new(vec![rat(1, 2)]);
        let (loc, val) = best_response(&game, &profile, 0).unwrap();
        assert_eq!(loc, rat(1, 5));
        assert_eq!(val, rat(2, 5));
    }

    #[test]
    fn best_response_is_idempotent_at_unique_maximizer() {
        // all mass on [0, 1/2]; width 1/2 agent uniquely maximizes at 1/4
        let game = Game::new(
            split_density(rat(1, 2), int(2), int(0)),
            vec![rat(1, 2)],
            Mode::Support,
        )
        .unwrap();
        let profile = Profile::new(vec![rat(1, 4)]);
        let (loc, val) = best_response(&game, &profile, 0).unwrap();
        assert_eq!(loc, rat(1, 4));
        assert_eq!(val, int(1));
    }

    #[test]
    fn dynamics_at_equilibrium_does_nothing() {
        // the two-agent family instance: NE at both agents stacked at 1/4
        let game = Game::new(
            split_density(rat(1, 2), rat(4, 3), rat(2, 3)),
            vec![rat(1, 2), rat(1, 2)],
            Mode::Support,
        )
        .unwrap();
        let start = Profile::new(vec![rat(1, 4), rat(1, 4)]);
        let (end, trace) =
            run_dynamics(&game, &start, &rat(1, 1_000_000), 1000, UpdateOrder::RoundRobin)
                .unwrap();
        assert_eq!(end, start);
        assert!(trace.moves.is_empty());
        assert_eq!(trace.reason, StopReason::EpsilonStable);
    }

    #[test]
    fn dynamics_converges_and_books_potential() {
        let game = Game::new(
            split_density(rat(1, 2), rat(4, 3), rat(2, 3)),
            vec![rat(1, 2), rat(1, 2)],
            Mode::Support,
        )
        .unwrap();
        let start = Profile::new(vec![rat(3, 4), rat(3, 4)]);
        let eps = rat(1, 1_000_000);
        let (end, trace) =
            run_dynamics(&game, &start, &eps, 1000, UpdateOrder::RoundRobin).unwrap();
        assert_eq!(trace.reason, StopReason::EpsilonStable);
        assert!(!trace.moves.is_empty());
        // every recorded move improves by more than epsilon and the
        // potential advances by exactly the gain
        let mut phi = trace.potential_start.clone();
        for m in &trace.moves {
            assert!(m.gain > eps);
            assert_eq!(&phi + &m.gain, m.potential_after);
            phi = m.potential_after.clone();
        }
        assert_eq!(phi, potential(&game, &end).unwrap());
        // terminal profile is an epsilon-equilibrium
        for i in 0..game.n() {
            let (_, val) = best_response(&game, &end, i).unwrap();
            let current = &utility_report(&game, &end).unwrap().supports[i];
            assert!(&val - current <= eps);
        }
    }

    #[test]
    fn round_limit_is_flagged_not_an_error() {
        let game = Game::new(
            Density::uniform(),
            vec![rat(1, 2), rat(1, 2)],
            Mode::Support,
        )
        .unwrap();
        let start = Profile::new(vec![rat(1, 2), rat(1, 2)]);
        let (_, trace) =
            run_dynamics(&game, &start, &rat(1, 1_000_000), 0, UpdateOrder::MaxGain).unwrap();
        assert_eq!(trace.reason, StopReason::RoundLimit);
    }

    #[test]
    fn rejects_winner_mode_and_negative_epsilon() {
        let game = Game::new(Density::uniform(), vec![rat(1, 2)], Mode::Winner).unwrap();
        let p = Profile::new(vec![rat(1, 2)]);
        assert!(matches!(
            best_response(&game, &p, 0),
            Err(Error::ModeMismatch { .. })
        ));
        let game = game.with_mode(Mode::Support);
        assert!(run_dynamics(&game, &p, &rat(-1, 2), 10, UpdateOrder::RoundRobin).is_err());
    }
}
