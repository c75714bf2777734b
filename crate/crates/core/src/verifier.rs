//! Nash-equilibrium certification for both utility modes.
//!
//! Support mode compares every agent's exact best-response value against its
//! current utility. Winner mode is harder: a deviation changes every agent's
//! support, and the winner set flips where support curves cross. The exact
//! verifier builds each agent's support as a piecewise-linear function of
//! the deviator's location, splits the feasible range at every breakpoint
//! and every pairwise curve crossing, and evaluates the winner set on each
//! resulting cell and cell boundary. A lattice-based verifier provides an
//! independent approximate cross-check: sound for refutation, approximate
//! for confirmation.

use num_traits::Zero;

use crate::dynamics::best_response;
use crate::error::{Error, Result};
use crate::game::{
    congestion_excluding, utility_report, Density, Game, Mode, Profile,
};
use crate::piecewise::{Crossings, PiecewiseLinear};
use crate::rational::{int, rat, Rational};
use crate::stepfn::{indicator, StepFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equilibrium,
    NotEquilibrium,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Grid,
}

/// A strictly improving unilateral deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub agent: usize,
    pub location: Rational,
    pub old_utility: Rational,
    pub new_utility: Rational,
}

impl Deviation {
    pub fn gain(&self) -> Rational {
        &self.new_utility - &self.old_utility
    }
}

/// Outcome of a verification: verdict, per-agent best gains, and the best
/// improving deviation when the profile is refuted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeCertificate {
    pub verdict: Verdict,
    pub mode: Mode,
    pub method: Method,
    pub tolerance: Rational,
    /// Best available utility gain per agent (clamped at zero).
    pub gaps: Vec<Rational>,
    pub best_deviation: Option<Deviation>,
}

impl NeCertificate {
    pub fn is_equilibrium(&self) -> bool {
        self.verdict == Verdict::Equilibrium
    }
}

fn certificate_from_deviations(
    mode: Mode,
    method: Method,
    tolerance: Rational,
    gaps: Vec<Rational>,
    candidates: Vec<Deviation>,
) -> NeCertificate {
    // best deviation: maximal gain, ties to the smallest (agent, location)
    let best = candidates
        .into_iter()
        .filter(|d| d.gain() > tolerance)
        .max_by(|a, b| {
            a.gain().cmp(&b.gain()).then_with(|| {
                (b.agent, &b.location).cmp(&(a.agent, &a.location))
            })
        });
    NeCertificate {
        verdict: if best.is_some() {
            Verdict::NotEquilibrium
        } else {
            Verdict::Equilibrium
        },
        mode,
        method,
        tolerance,
        gaps,
        best_deviation: best,
    }
}

/// Exact certification in the support setting: for each agent the exact
/// best-response value is compared with its current support; the profile is
/// an equilibrium iff no gap exceeds `tolerance` (0 gives exact
/// certification).
pub fn verify_support_ne(
    game: &Game,
    profile: &Profile,
    tolerance: &Rational,
) -> Result<NeCertificate> {
    if game.mode() != Mode::Support {
        return Err(Error::ModeMismatch {
            required: "support",
        });
    }
    game.validate_profile(profile)?;
    let report = utility_report(game, profile)?;
    let mut gaps = Vec::with_capacity(game.n());
    let mut deviations = Vec::new();
    for i in 0..game.n() {
        let (loc, val) = best_response(game, profile, i)?;
        let gap = (&val - &report.supports[i]).max(Rational::zero());
        if &gap > tolerance {
            deviations.push(Deviation {
                agent: i,
                location: loc,
                old_utility: report.supports[i].clone(),
                new_utility: val,
            });
        }
        gaps.push(gap);
    }
    Ok(certificate_from_deviations(
        Mode::Support,
        Method::Exact,
        tolerance.clone(),
        gaps,
        deviations,
    ))
}

/// Every agent's support as an exact piecewise-linear function of agent
/// `mover`'s location, other locations held fixed. Index `mover` holds the
/// mover's own curve.
fn support_curves(game: &Game, profile: &Profile, mover: usize) -> Result<Vec<PiecewiseLinear>> {
    let f = game.density().step();
    let others = congestion_excluding(game, profile, mover)?;
    let (lo, hi) = game.feasible_range(mover);
    let width = game.width(mover);

    let mut curves = Vec::with_capacity(game.n());
    for j in 0..game.n() {
        if j == mover {
            let share = f.combine_with(&others, |fv, cv| Some(fv / (cv + int(1))))?;
            curves.push(share.window_objective(width, (&lo, &hi))?);
        } else {
            // Fixed agent j keeps integral of f/c_others over its interval,
            // minus what the mover's window takes: inside the overlap the
            // share drops from f/c to f/(c+1).
            let (jlo, jhi) = game.interval(j, profile.get(j));
            let mask = indicator(&jlo, &jhi);
            let drop = f.combine_with(&others, |fv, cv| {
                if cv.is_zero() {
                    // outside every fixed interval, in particular outside j's
                    Some(Rational::zero())
                } else {
                    Some(fv * (cv.recip() - (cv + int(1)).recip()))
                }
            })?;
            let masked_drop = drop.mul(&mask);
            let share = f.combine_with(&others, |fv, cv| {
                Some(if cv.is_zero() {
                    Rational::zero()
                } else {
                    fv / cv
                })
            })?;
            let base = share.integrate(&jlo, &jhi)?;
            let window = masked_drop.window_objective(width, (&lo, &hi))?;
            curves.push(window.affine(&int(-1), &base));
        }
    }
    Ok(curves)
}

/// Candidate deviation locations for `mover` in winner mode: every curve
/// breakpoint, every pairwise curve crossing (where the winner set can
/// change inside a linear piece), and the midpoint of every resulting cell.
/// Sorted and exact.
pub fn winner_deviation_candidates(
    game: &Game,
    profile: &Profile,
    mover: usize,
) -> Result<Vec<Rational>> {
    let curves = support_curves(game, profile, mover)?;
    let (lo, hi) = game.feasible_range(mover);
    let mut cuts: Vec<Rational> = vec![lo, hi];
    for c in &curves {
        cuts.extend(c.breakpoints().iter().cloned());
    }
    for a in 0..curves.len() {
        for b in (a + 1)..curves.len() {
            if let Crossings::Points(points) = curves[a].crossings(&curves[b])? {
                cuts.extend(points);
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut candidates = Vec::with_capacity(cuts.len() * 2);
    for k in 0..cuts.len() {
        candidates.push(cuts[k].clone());
        if k + 1 < cuts.len() {
            candidates.push((&cuts[k] + &cuts[k + 1]) / int(2));
        }
    }
    Ok(candidates)
}

/// Exact certification in the winner setting. A deviation improves iff it
/// strictly increases the deviator's `1/|W|`-style utility: a loser becomes
/// a winner, or a winner joins a strictly smaller winner set.
pub fn verify_winner_ne(game: &Game, profile: &Profile) -> Result<NeCertificate> {
    if game.mode() != Mode::Winner {
        return Err(Error::ModeMismatch { required: "winner" });
    }
    game.validate_profile(profile)?;
    let current = utility_report(game, profile)?;
    let mut gaps = Vec::with_capacity(game.n());
    let mut deviations = Vec::new();
    for i in 0..game.n() {
        let mut best_gain = Rational::zero();
        let mut best: Option<Deviation> = None;
        if current.utilities[i] < int(1) {
            // utility 1 (sole winner) cannot be improved upon
            for z in winner_deviation_candidates(game, profile, i)? {
                let moved = profile.with_location(i, z.clone());
                let report = utility_report(game, &moved)?;
                let gain = &report.utilities[i] - &current.utilities[i];
                if gain > best_gain {
                    best_gain = gain;
                    best = Some(Deviation {
                        agent: i,
                        location: z,
                        old_utility: current.utilities[i].clone(),
                        new_utility: report.utilities[i].clone(),
                    });
                }
            }
        }
        gaps.push(best_gain);
        if let Some(d) = best {
            deviations.push(d);
        }
    }
    Ok(certificate_from_deviations(
        Mode::Winner,
        Method::Exact,
        Rational::zero(),
        gaps,
        deviations,
    ))
}

/// Approximate verification on the lattice `{w/2, w/2 + step, ...}` per
/// agent, with exact utility evaluation at each lattice point. Sound for
/// refutation; a pass is only as fine as the lattice.
pub fn grid_verify(game: &Game, profile: &Profile, step: &Rational) -> Result<NeCertificate> {
    if step <= &Rational::zero() {
        return Err(Error::Config(format!("grid step {step} must be positive")));
    }
    game.validate_profile(profile)?;
    let current = utility_report(game, profile)?;
    let f = game.density().step();
    let mut gaps = Vec::with_capacity(game.n());
    let mut deviations = Vec::new();
    for i in 0..game.n() {
        let (lo, hi) = game.feasible_range(i);
        let mut best_gain = Rational::zero();
        let mut best: Option<Deviation> = None;
        // direct evaluation per lattice point, independent of the exact
        // verifier's curve machinery
        let entrant_share = match game.mode() {
            Mode::Support => {
                let others = congestion_excluding(game, profile, i)?;
                Some(f.combine_with(&others, |fv, cv| Some(fv / (cv + int(1))))?)
            }
            Mode::Winner => None,
        };
        let half = game.width(i) / int(2);
        let mut z = lo.clone();
        while z <= hi {
            let new_utility = match (&entrant_share, game.mode()) {
                (Some(share), Mode::Support) => share.integrate(&(&z - &half), &(&z + &half))?,
                (_, Mode::Winner) => {
                    let moved = profile.with_location(i, z.clone());
                    utility_report(game, &moved)?.utilities[i].clone()
                }
                _ => unreachable!(),
            };
            let gain = &new_utility - &current.utilities[i];
            if gain > best_gain {
                best_gain = gain;
                best = Some(Deviation {
                    agent: i,
                    location: z.clone(),
                    old_utility: current.utilities[i].clone(),
                    new_utility,
                });
            }
            z += step;
        }
        gaps.push(best_gain);
        if let Some(d) = best {
            deviations.push(d);
        }
    }
    Ok(certificate_from_deviations(
        game.mode(),
        Method::Grid,
        Rational::zero(),
        gaps,
        deviations,
    ))
}

/// One move along a replay path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayStep {
    pub mover: usize,
    pub from: Rational,
    pub to: Rational,
    pub support_before: Rational,
    pub support_after: Rational,
    pub utility_before: Rational,
    pub utility_after: Rational,
}

/// Replay of the two-path construction showing the winner game admits no
/// ordinal potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalReplay {
    pub game: Game,
    pub path1: Vec<ReplayStep>,
    pub path2: Vec<ReplayStep>,
}

fn replay_path(game: &Game, profiles: &[Profile]) -> Result<Vec<ReplayStep>> {
    let mut steps = Vec::new();
    for w in profiles.windows(2) {
        let (before, after) = (&w[0], &w[1]);
        let mover = (0..before.len())
            .find(|&i| before.get(i) != after.get(i))
            .ok_or_else(|| Error::Internal("replay step moves nobody".into()))?;
        let rb = utility_report(game, before)?;
        let ra = utility_report(game, after)?;
        steps.push(ReplayStep {
            mover,
            from: before.get(mover).clone(),
            to: after.get(mover).clone(),
            support_before: rb.supports[mover].clone(),
            support_after: ra.supports[mover].clone(),
            utility_before: rb.utilities[mover].clone(),
            utility_after: ra.utilities[mover].clone(),
        });
    }
    Ok(steps)
}

/// Replays two improvement paths between the same pair of profiles in a
/// three-agent winner game on the valley density (4/3, 1/3, 4/3 on thirds,
/// width 1/3). Along the long path the mover's utility strictly falls twice
/// and then stays unchanged; along the direct path it strictly rises. Any
/// ordinal potential would have to decrease and increase between the same
/// two profiles, so none exists. The sign pattern is re-checked here and a
/// violation is a hard error.
pub fn replay_ordinal_counterexample() -> Result<OrdinalReplay> {
    let density = Density::new(StepFunction::new(
        vec![int(0), rat(1, 3), rat(2, 3), int(1)],
        vec![rat(4, 3), rat(1, 3), rat(4, 3)],
    )?)?;
    let w = rat(1, 3);
    let game = Game::new(density, vec![w.clone(), w.clone(), w], Mode::Winner)?;

    let p = |a: Rational, b: Rational, c: Rational| Profile::new(vec![a, b, c]);
    let path1 = replay_path(
        &game,
        &[
            p(rat(1, 6), rat(1, 6), rat(1, 6)),
            p(rat(1, 6), rat(1, 6), rat(5, 9)),
            p(rat(1, 6), rat(5, 9), rat(5, 9)),
            p(rat(1, 6), rat(5, 9), rat(5, 6)),
            p(rat(1, 6), rat(1, 6), rat(5, 6)),
        ],
    )?;
    let path2 = replay_path(
        &game,
        &[
            p(rat(1, 6), rat(1, 6), rat(1, 6)),
            p(rat(1, 6), rat(1, 6), rat(5, 6)),
        ],
    )?;

    let fail = |msg: &str| Error::Internal(format!("ordinal replay sign pattern violated: {msg}"));
    if path1[0].utility_after >= path1[0].utility_before {
        return Err(fail("path 1 step 1 must strictly decrease"));
    }
    if path1[1].utility_after >= path1[1].utility_before {
        return Err(fail("path 1 step 2 must strictly decrease"));
    }
    if path1[2].utility_after != path1[2].utility_before {
        return Err(fail("path 1 step 3 must leave the mover unchanged"));
    }
    if path1[3].utility_after != path1[3].utility_before {
        return Err(fail("path 1 step 4 must leave the mover unchanged"));
    }
    if path2[0].utility_after <= path2[0].utility_before {
        return Err(fail("path 2 step must strictly increase"));
    }
    Ok(OrdinalReplay { game, path1, path2 })
}
