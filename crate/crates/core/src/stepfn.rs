//! Piecewise-constant functions on `[0, 1]` with exact rational data.
//!
//! A [`StepFunction`] is a list of ascending breakpoints starting at 0 and
//! ending at 1 together with one value per piece. Piece `k` is the half-open
//! interval `[b_k, b_{k+1})`; the final piece is closed. Single points carry
//! zero mass, so the open/closed choice never affects an integral.
//!
//! This module is the foundation for every integral in the crate: client
//! densities, congestion counts and their pointwise quotients all live here.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseLinear;
use crate::rational::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
}

fn check_unit_interval(lo: &Rational, hi: &Rational) -> Result<()> {
    if lo > hi {
        return Err(Error::EmptyInterval {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    if lo < &Rational::zero() || hi > &int(1) {
        return Err(Error::OutOfDomain {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    Ok(())
}

impl StepFunction {
    /// Builds a step function from breakpoints and per-piece values.
    /// Breakpoints must be strictly ascending, start at 0 and end at 1,
    /// with exactly one value per piece. Adjacent pieces may carry equal
    /// values; [`StepFunction::normalize`] merges them.
    pub fn new(breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::InvalidStepFunction(
                "need at least two breakpoints".into(),
            ));
        }
        if values.len() + 1 != breaks.len() {
            return Err(Error::InvalidStepFunction(format!(
                "{} breakpoints require {} values, got {}",
                breaks.len(),
                breaks.len() - 1,
                values.len()
            )));
        }
        if breaks[0] != Rational::zero() || breaks[breaks.len() - 1] != int(1) {
            return Err(Error::InvalidStepFunction(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStepFunction(
                "breakpoints must be strictly ascending".into(),
            ));
        }
        Ok(Self { breaks, values })
    }

    /// The constant function `x -> value` on `[0, 1]`.
    pub fn constant(value: Rational) -> Self {
        Self {
            breaks: vec![Rational::zero(), int(1)],
            values: vec![value],
        }
    }

    /// Builds from `(upto, value)` pairs: piece `k` extends from the previous
    /// `upto` (initially 0) to `upto_k`. The final `upto` must be 1.
    pub fn from_upto_pairs(pairs: &[(Rational, Rational)]) -> Result<Self> {
        let mut breaks = vec![Rational::zero()];
        let mut values = Vec::with_capacity(pairs.len());
        for (upto, value) in pairs {
            breaks.push(upto.clone());
            values.push(value.clone());
        }
        Self::new(breaks, values)
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    /// The piece interval `[b_k, b_{k+1}]` (closed endpoints as stored).
    pub fn piece_bounds(&self, k: usize) -> (&Rational, &Rational) {
        (&self.breaks[k], &self.breaks[k + 1])
    }

    /// Index of the piece containing `x` under the half-open convention.
    fn piece_index(&self, x: &Rational) -> Result<usize> {
        check_unit_interval(x, x)?;
        // partition_point: first piece whose start exceeds x, minus one.
        let idx = self.breaks.partition_point(|b| b <= x);
        Ok(idx.saturating_sub(1).min(self.values.len() - 1))
    }

    /// Value at `x`; pieces are `[b_k, b_{k+1})`, the final piece closed.
    pub fn value_at(&self, x: &Rational) -> Result<&Rational> {
        Ok(&self.values[self.piece_index(x)?])
    }

    /// Merges adjacent pieces with equal values.
    pub fn normalize(self) -> Self {
        let mut breaks = vec![self.breaks[0].clone()];
        let mut values: Vec<Rational> = Vec::with_capacity(self.values.len());
        for (k, v) in self.values.iter().enumerate() {
            if values.last() == Some(v) {
                *breaks.last_mut().unwrap() = self.breaks[k + 1].clone();
            } else {
                values.push(v.clone());
                breaks.push(self.breaks[k + 1].clone());
            }
        }
        Self { breaks, values }
    }

    /// Exact integral over `[lo, hi]`. Additive over adjacent intervals.
    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Result<Rational> {
        check_unit_interval(lo, hi)?;
        let mut acc = Rational::zero();
        for (k, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let a = (&self.breaks[k]).max(lo);
            let b = (&self.breaks[k + 1]).min(hi);
            if a < b {
                acc += v * (b - a);
            }
        }
        Ok(acc)
    }

    /// Integral over the whole domain.
    pub fn total(&self) -> Rational {
        self.integrate(&Rational::zero(), &int(1)).unwrap()
    }

    /// Pointwise combination on the union of both breakpoint grids. `op`
    /// returning `None` reports an arithmetic failure naming the piece.
    /// The result is normalized.
    pub fn combine_with<F>(&self, other: &Self, mut op: F) -> Result<Self>
    where
        F: FnMut(&Rational, &Rational) -> Option<Rational>,
    {
        let mut breaks: Vec<Rational> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .cloned()
            .collect();
        breaks.sort();
        breaks.dedup();
        let mut values = Vec::with_capacity(breaks.len() - 1);
        for win in breaks.windows(2) {
            let mid = (&win[0] + &win[1]) / int(2);
            let a = self.value_at(&mid)?;
            let b = other.value_at(&mid)?;
            let v = op(a, b).ok_or_else(|| Error::PieceArithmetic {
                lo: win[0].clone(),
                hi: win[1].clone(),
            })?;
            values.push(v);
        }
        Ok(Self { breaks, values }.normalize())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        self.combine_with(other, |a, b| Some(a + b)).unwrap()
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.combine_with(other, |a, b| Some(a * b)).unwrap()
    }

    /// Multiplies every value by `k`.
    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| v * k).collect(),
        }
        .normalize()
    }

    /// Applies `f` to each piece value, keeping the grid (then normalizing).
    pub fn map<F: FnMut(&Rational) -> Rational>(&self, f: F) -> Self {
        Self {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(f).collect(),
        }
        .normalize()
    }

    /// Mirror image through `x = 1/2`.
    pub fn reflect(&self) -> Self {
        let one = int(1);
        let breaks = self.breaks.iter().rev().map(|b| &one - b).collect();
        let values = self.values.iter().rev().cloned().collect();
        Self { breaks, values }
    }

    /// The sliding-window integral `x -> integral of self over
    /// `[x - width/2, x + width/2]`` as an exact piecewise-linear function
    /// of the window center, on the `feasible` interval. Kinks occur exactly
    /// where a window edge crosses a breakpoint.
    pub fn window_objective(
        &self,
        width: &Rational,
        feasible: (&Rational, &Rational),
    ) -> Result<PiecewiseLinear> {
        if width <= &Rational::zero() || width > &int(1) {
            return Err(Error::InvalidStepFunction(format!(
                "window width {width} outside (0, 1]"
            )));
        }
        let (lo, hi) = feasible;
        if lo > hi {
            return Err(Error::EmptyInterval {
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
        let half = width / int(2);
        let innermost = (&half, &(int(1) - &half));
        if lo < innermost.0 || hi > innermost.1 {
            return Err(Error::OutOfDomain {
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
        let mut xs = vec![lo.clone(), hi.clone()];
        for b in &self.breaks {
            for cand in [b - &half, b + &half] {
                if &cand > lo && &cand < hi {
                    xs.push(cand);
                }
            }
        }
        xs.sort();
        xs.dedup();
        let points = xs
            .into_iter()
            .map(|x| {
                let v = self.integrate(&(&x - &half), &(&x + &half))?;
                Ok((x, v))
            })
            .collect::<Result<Vec<_>>>()?;
        PiecewiseLinear::from_points(points)
    }
}

/// Uniform unit density, `1` everywhere on `[0, 1]`.
pub fn uniform() -> StepFunction {
    StepFunction::constant(int(1))
}

/// Indicator of `[lo, hi] ∩ [0, 1]` as a step function.
pub fn indicator(lo: &Rational, hi: &Rational) -> StepFunction {
    let zero = Rational::zero();
    let one = int(1);
    let lo = lo.max(&zero).clone();
    let hi = hi.min(&one).clone();
    if lo >= hi {
        return StepFunction::constant(zero);
    }
    let mut breaks = vec![zero.clone()];
    let mut values = Vec::new();
    if lo > zero {
        breaks.push(lo.clone());
        values.push(zero.clone());
    }
    if hi < one {
        breaks.push(hi.clone());
        values.push(one.clone());
        values.push(zero);
        breaks.push(one);
    } else {
        breaks.push(one.clone());
        values.push(one);
    }
    StepFunction { breaks, values }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_piece() -> StepFunction {
        // 5/4 on [0, 2/5), 5/6 on [2/5, 1]
        StepFunction::new(
            vec![int(0), rat(2, 5), int(1)],
            vec![rat(5, 4), rat(5, 6)],
        )
        .unwrap()
    }

    #[test]
    fn integrate_constant_prefix() {
        let g = uniform();
        assert_eq!(g.integrate(&int(0), &rat(2, 5)).unwrap(), rat(2, 5));
    }

    #[test]
    fn integrate_two_piece_suffix() {
        let g = two_piece();
        assert_eq!(g.integrate(&rat(3, 5), &int(1)).unwrap(), rat(1, 3));
    }

    #[test]
    fn integrate_zero_length() {
        let g = two_piece();
        assert_eq!(g.integrate(&rat(2, 5), &rat(2, 5)).unwrap(), int(0));
    }

    #[test]
    fn integrate_rejects_bad_intervals() {
        let g = uniform();
        assert!(matches!(
            g.integrate(&rat(-1, 10), &rat(1, 2)),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            g.integrate(&rat(3, 4), &rat(1, 4)),
            Err(Error::EmptyInterval { .. })
        ));
    }

    #[test]
    fn combine_adds_constants() {
        let g = StepFunction::constant(int(1));
        let h = StepFunction::constant(int(2));
        let sum = g.add(&h);
        assert_eq!(sum, StepFunction::constant(int(3)));
    }

    #[test]
    fn combine_unions_grids() {
        let g = StepFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(1), int(2)]).unwrap();
        let h = StepFunction::new(vec![int(0), rat(1, 3), int(1)], vec![int(3), int(5)]).unwrap();
        let sum = g.add(&h);
        assert_eq!(sum.breakpoints(), &[int(0), rat(1, 3), rat(1, 2), int(1)]);
        assert_eq!(sum.values(), &[int(4), int(6), int(7)]);
    }

    #[test]
    fn combine_reports_failing_piece() {
        let g = uniform();
        let h = StepFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(1), int(0)]).unwrap();
        let err = g
            .combine_with(&h, |a, b| if b.is_zero() { None } else { Some(a / b) })
            .unwrap_err();
        assert_eq!(
            err,
            Error::PieceArithmetic {
                lo: rat(1, 2),
                hi: int(1)
            }
        );
    }

    #[test]
    fn normalize_merges_equal_neighbors() {
        let g = StepFunction::new(
            vec![int(0), rat(1, 4), rat(1, 2), int(1)],
            vec![int(2), int(2), int(3)],
        )
        .unwrap()
        .normalize();
        assert_eq!(g.breakpoints(), &[int(0), rat(1, 2), int(1)]);
        assert_eq!(g.values(), &[int(2), int(3)]);
    }

    #[test]
    fn value_at_half_open_pieces() {
        let g = two_piece();
        assert_eq!(g.value_at(&rat(2, 5)).unwrap(), &rat(5, 6));
        assert_eq!(g.value_at(&rat(39, 100)).unwrap(), &rat(5, 4));
        assert_eq!(g.value_at(&int(1)).unwrap(), &rat(5, 6));
        assert_eq!(g.value_at(&int(0)).unwrap(), &rat(5, 4));
    }

    #[test]
    fn window_of_uniform_is_constant() {
        let g = uniform();
        let p = g
            .window_objective(&rat(2, 5), (&rat(1, 5), &rat(4, 5)))
            .unwrap();
        assert_eq!(p.eval(&rat(1, 5)).unwrap(), rat(2, 5));
        assert_eq!(p.eval(&rat(1, 2)).unwrap(), rat(2, 5));
        assert_eq!(p.eval(&rat(4, 5)).unwrap(), rat(2, 5));
    }

    #[test]
    fn window_of_two_piece_density() {
        let g = two_piece();
        let p = g
            .window_objective(&rat(2, 5), (&rat(1, 5), &rat(4, 5)))
            .unwrap();
        assert_eq!(p.eval(&rat(1, 5)).unwrap(), rat(1, 2));
        assert_eq!(p.eval(&rat(4, 5)).unwrap(), rat(1, 3));
        // kinks exactly at 2/5 -+ 1/5
        assert_eq!(
            p.breakpoints(),
            &[rat(1, 5), rat(3, 5), rat(4, 5)],
        );
    }

    #[test]
    fn window_of_zero_density() {
        let g = StepFunction::constant(int(0));
        let p = g
            .window_objective(&rat(1, 2), (&rat(1, 4), &rat(3, 4)))
            .unwrap();
        assert_eq!(p.max_value(), int(0));
    }

    #[test]
    fn window_rejects_empty_feasible() {
        let g = uniform();
        assert!(matches!(
            g.window_objective(&rat(1, 2), (&rat(3, 4), &rat(1, 4))),
            Err(Error::EmptyInterval { .. })
        ));
        assert!(matches!(
            g.window_objective(&rat(1, 2), (&rat(1, 8), &rat(3, 4))),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn indicator_masks() {
        let ind = indicator(&rat(1, 4), &rat(3, 4));
        assert_eq!(ind.value_at(&rat(1, 2)).unwrap(), &int(1));
        assert_eq!(ind.value_at(&rat(1, 8)).unwrap(), &int(0));
        assert_eq!(ind.total(), rat(1, 2));
    }

    #[test]
    fn reflect_mirrors() {
        let g = two_piece();
        let r = g.reflect();
        assert_eq!(r.value_at(&rat(9, 10)).unwrap(), &rat(5, 4));
        assert_eq!(r.value_at(&rat(1, 10)).unwrap(), &rat(5, 6));
        assert_eq!(r.total(), g.total());
    }
}
