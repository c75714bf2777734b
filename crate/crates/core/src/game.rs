//! The attraction game: densities, location profiles, congestion, support
//! and winner utilities, and the congestion potential.
//!
//! A game is a normalized client density on `[0, 1]`, one attraction width
//! per agent, and a utility mode. Agent `i` at location `x_i` covers
//! `[x_i - w_i/2, x_i + w_i/2]`; the congestion at a point counts the
//! covering agents, and client mass splits evenly among them. Support
//! utility is the attracted mass; winner utility splits a unit prize among
//! the agents of maximal support.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{harmonic, int, rat, Rational};
use crate::stepfn::StepFunction;

/// Which utility the agents maximize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Support,
    Winner,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Support => "support",
            Mode::Winner => "winner",
        })
    }
}

/// Normalized client density: a nonnegative step function of unit mass.
/// Inputs with a different positive total are rescaled on construction and
/// flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density {
    step: StepFunction,
    rescaled: bool,
}

impl Density {
    pub fn new(step: StepFunction) -> Result<Self> {
        if step.values().iter().any(|v| v < &Rational::zero()) {
            return Err(Error::InvalidDensity("negative density value".into()));
        }
        let total = step.total();
        if total.is_zero() {
            return Err(Error::InvalidDensity("zero total mass".into()));
        }
        if total == int(1) {
            Ok(Self {
                step,
                rescaled: false,
            })
        } else {
            Ok(Self {
                step: step.scale(&total.recip()),
                rescaled: true,
            })
        }
    }

    /// Uniform density on `[0, 1]`.
    pub fn uniform() -> Self {
        Self {
            step: StepFunction::constant(int(1)),
            rescaled: false,
        }
    }

    pub fn step(&self) -> &StepFunction {
        &self.step
    }

    /// True when construction had to rescale to unit mass.
    pub fn was_rescaled(&self) -> bool {
        self.rescaled
    }
}

/// An attraction game: density, per-agent widths, and utility mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    density: Density,
    widths: Vec<Rational>,
    mode: Mode,
}

impl Game {
    pub fn new(density: Density, widths: Vec<Rational>, mode: Mode) -> Result<Self> {
        for (i, w) in widths.iter().enumerate() {
            if w <= &Rational::zero() || w > &int(1) {
                return Err(Error::InvalidGame(format!(
                    "agent {i} width {w} outside (0, 1]"
                )));
            }
        }
        Ok(Self {
            density,
            widths,
            mode,
        })
    }

    pub fn n(&self) -> usize {
        self.widths.len()
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn widths(&self) -> &[Rational] {
        &self.widths
    }

    pub fn width(&self, agent: usize) -> &Rational {
        &self.widths[agent]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Same game under the other utility mode.
    pub fn with_mode(&self, mode: Mode) -> Game {
        Game {
            density: self.density.clone(),
            widths: self.widths.clone(),
            mode,
        }
    }

    /// Feasible location range `[w_i/2, 1 - w_i/2]` for an agent.
    pub fn feasible_range(&self, agent: usize) -> (Rational, Rational) {
        let half = &self.widths[agent] / int(2);
        (half.clone(), int(1) - half)
    }

    /// Attraction interval of an agent located at `x`.
    pub fn interval(&self, agent: usize, x: &Rational) -> (Rational, Rational) {
        let half = &self.widths[agent] / int(2);
        (x - &half, x + &half)
    }

    pub fn validate_profile(&self, profile: &Profile) -> Result<()> {
        if profile.len() != self.n() {
            return Err(Error::ProfileLength {
                expected: self.n(),
                got: profile.len(),
            });
        }
        for (i, x) in profile.locations().iter().enumerate() {
            let (lo, hi) = self.feasible_range(i);
            if x < &lo || x > &hi {
                return Err(Error::InvalidLocation {
                    agent: i,
                    location: x.clone(),
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }
}

/// A joint location profile, one location per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    locations: Vec<Rational>,
}

impl Profile {
    pub fn new(locations: Vec<Rational>) -> Self {
        Self { locations }
    }

    pub fn locations(&self) -> &[Rational] {
        &self.locations
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn get(&self, agent: usize) -> &Rational {
        &self.locations[agent]
    }

    /// Copy of this profile with one agent relocated.
    pub fn with_location(&self, agent: usize, x: Rational) -> Profile {
        let mut locations = self.locations.clone();
        locations[agent] = x;
        Profile { locations }
    }

    /// Mirror image through `x = 1/2`.
    pub fn reflect(&self) -> Profile {
        Profile {
            locations: self.locations.iter().map(|x| int(1) - x).collect(),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.locations.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Exact utilities of a profile: supports, winner set, mode utilities, and
/// total covered mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityReport {
    pub supports: Vec<Rational>,
    pub winner_set: BTreeSet<usize>,
    pub utilities: Vec<Rational>,
    pub covered_mass: Rational,
}

fn congestion_of_intervals(intervals: &[(Rational, Rational)]) -> StepFunction {
    let mut breaks: Vec<Rational> = vec![Rational::zero(), int(1)];
    for (lo, hi) in intervals {
        breaks.push(lo.clone());
        breaks.push(hi.clone());
    }
    breaks.sort();
    breaks.dedup();
    let mut values = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let count = intervals
            .iter()
            .filter(|(lo, hi)| lo <= &mid && &mid <= hi)
            .count();
        values.push(int(count as i64));
    }
    StepFunction::new(breaks, values).expect("congestion grid is valid")
}

/// Number of attraction intervals covering each point, as an integer-valued
/// step function with breakpoints exactly at the interval edges (plus 0 and
/// 1). Values on a piece are the count on its interior; the edges
/// themselves carry no mass.
pub fn congestion(game: &Game, profile: &Profile) -> Result<StepFunction> {
    game.validate_profile(profile)?;
    let intervals: Vec<_> = profile
        .locations()
        .iter()
        .enumerate()
        .map(|(i, x)| game.interval(i, x))
        .collect();
    Ok(congestion_of_intervals(&intervals))
}

/// Congestion of everyone except `skip`.
pub fn congestion_excluding(game: &Game, profile: &Profile, skip: usize) -> Result<StepFunction> {
    game.validate_profile(profile)?;
    let intervals: Vec<_> = profile
        .locations()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(i, x)| game.interval(i, x))
        .collect();
    Ok(congestion_of_intervals(&intervals))
}

/// Density shared among covering agents: `f / c` where covered, 0 where
/// uncovered.
fn shared_density(f: &StepFunction, c: &StepFunction) -> StepFunction {
    f.combine_with(c, |fv, cv| {
        Some(if cv.is_zero() {
            Rational::zero()
        } else {
            fv / cv
        })
    })
    .expect("share is total")
}

/// Exact support of every agent: the integral of `f / c` over its interval.
pub fn support_vector(game: &Game, profile: &Profile) -> Result<Vec<Rational>> {
    let c = congestion(game, profile)?;
    let shared = shared_density(game.density().step(), &c);
    profile
        .locations()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let (lo, hi) = game.interval(i, x);
            shared.integrate(&lo, &hi)
        })
        .collect()
}

/// Supports, winner set (maximal support under exact comparison), and the
/// mode-dependent utilities.
pub fn utility_report(game: &Game, profile: &Profile) -> Result<UtilityReport> {
    let supports = support_vector(game, profile)?;
    let covered_mass: Rational = supports.iter().sum();
    let winner_set: BTreeSet<usize> = match supports.iter().max() {
        None => BTreeSet::new(),
        Some(max) => supports
            .iter()
            .enumerate()
            .filter(|(_, s)| *s == max)
            .map(|(i, _)| i)
            .collect(),
    };
    let utilities = match game.mode() {
        Mode::Support => supports.clone(),
        Mode::Winner => {
            let share = if winner_set.is_empty() {
                Rational::zero()
            } else {
                rat(1, winner_set.len() as i64)
            };
            (0..game.n())
                .map(|i| {
                    if winner_set.contains(&i) {
                        share.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        }
    };
    Ok(UtilityReport {
        supports,
        winner_set,
        utilities,
        covered_mass,
    })
}

/// The congestion potential: the integral of `f(x) * H_{c(x)}` where `H_k`
/// is the k-th harmonic number. A unilateral move changes the potential by
/// exactly the mover's support-utility change, and the potential never
/// exceeds `H_n`.
pub fn potential(game: &Game, profile: &Profile) -> Result<Rational> {
    let c = congestion(game, profile)?;
    let weighted = game.density().step().combine_with(&c, |fv, cv| {
        let k = cv.to_integer().to_usize()?;
        Some(fv * harmonic(k))
    })?;
    Ok(weighted.total())
}
