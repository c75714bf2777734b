//! Continuous piecewise-linear functions with exact rational data.
//!
//! These arise as sliding-window integrals of step functions: an agent's
//! utility as a function of its own location. Storing a slope per piece
//! keeps maximizers, level sets and curve crossings solvable in closed form.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Continuous piecewise-linear function on a closed interval.
///
/// `breaks` are strictly ascending; `values[k]` is the function value at
/// `breaks[k]`; `slopes[k]` applies on `[breaks[k], breaks[k+1]]`. A
/// degenerate single-point domain has one breakpoint and no slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
    slopes: Vec<Rational>,
}

/// Where two curves meet: everywhere, or at finitely many points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Crossings {
    /// The curves coincide on the whole domain.
    Identical,
    /// Points where the difference changes sign or touches zero. Endpoints
    /// of any sub-interval on which the curves coincide are included.
    Points(Vec<Rational>),
}

impl PiecewiseLinear {
    /// Connects the dots through `(x, value)` pairs with strictly ascending
    /// `x`. A single pair yields a degenerate single-point function.
    pub fn from_points(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPiecewise("no sample points".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidPiecewise(
                "sample points must be strictly ascending".into(),
            ));
        }
        let mut slopes = Vec::with_capacity(points.len().saturating_sub(1));
        for w in points.windows(2) {
            let (x0, v0) = &w[0];
            let (x1, v1) = &w[1];
            slopes.push((v1 - v0) / (x1 - x0));
        }
        let (breaks, values) = points.into_iter().unzip();
        Ok(Self {
            breaks,
            values,
            slopes,
        })
    }

    /// The constant function `value` on `[lo, hi]`.
    pub fn constant(lo: Rational, hi: Rational, value: Rational) -> Result<Self> {
        if lo == hi {
            Self::from_points(vec![(lo, value)])
        } else {
            Self::from_points(vec![(lo, value.clone()), (hi, value)])
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    /// Intercept of piece `k`: the piece is `x -> slope*x + intercept`.
    pub fn intercept(&self, k: usize) -> Rational {
        &self.values[k] - &self.slopes[k] * &self.breaks[k]
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.breaks[0], &self.breaks[self.breaks.len() - 1])
    }

    pub fn is_degenerate(&self) -> bool {
        self.breaks.len() == 1
    }

    /// Exact evaluation; errors outside the domain.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::DomainMismatch(format!(
                "{x} outside domain [{lo}, {hi}]"
            )));
        }
        let k = self
            .breaks
            .partition_point(|b| b <= x)
            .saturating_sub(1)
            .min(self.slopes.len().saturating_sub(1));
        if self.slopes.is_empty() {
            return Ok(self.values[0].clone());
        }
        Ok(&self.values[k] + &self.slopes[k] * (x - &self.breaks[k]))
    }

    /// Maximum value over the domain.
    pub fn max_value(&self) -> Rational {
        self.values.iter().max().unwrap().clone()
    }

    /// Leftmost maximizer and the maximum value. The maximum of a continuous
    /// piecewise-linear function is attained at a breakpoint, so the scan is
    /// over breakpoints only; the first attaining breakpoint is leftmost.
    pub fn argmax(&self) -> (Rational, Rational) {
        let max = self.max_value();
        let k = self.values.iter().position(|v| v == &max).unwrap();
        (self.breaks[k].clone(), max)
    }

    /// Maximal closed intervals (possibly degenerate points) where the
    /// function equals `v`; empty if `v` is never attained.
    pub fn level_set(&self, v: &Rational) -> Vec<(Rational, Rational)> {
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        let mut push = |lo: Rational, hi: Rational| {
            if let Some(last) = out.last_mut() {
                if last.1 >= lo {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                    return;
                }
            }
            out.push((lo, hi));
        };
        if self.slopes.is_empty() {
            if &self.values[0] == v {
                push(self.breaks[0].clone(), self.breaks[0].clone());
            }
            return out;
        }
        for k in 0..self.slopes.len() {
            let (x0, x1) = (&self.breaks[k], &self.breaks[k + 1]);
            let (v0, v1) = (&self.values[k], &self.values[k + 1]);
            if self.slopes[k].is_zero() {
                if v0 == v {
                    push(x0.clone(), x1.clone());
                }
            } else {
                // strictly monotone piece: at most one solution
                let (lo_v, hi_v) = if v0 < v1 { (v0, v1) } else { (v1, v0) };
                if v >= lo_v && v <= hi_v {
                    let x = x0 + (v - v0) / &self.slopes[k];
                    push(x.clone(), x);
                }
            }
        }
        out
    }

    /// Pointwise affine image `x -> a * f(x) + b`.
    pub fn affine(&self, a: &Rational, b: &Rational) -> Self {
        Self {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| a * v + b).collect(),
            slopes: self.slopes.iter().map(|s| a * s).collect(),
        }
    }

    fn merge_grid(&self, other: &Self) -> Result<Vec<Rational>> {
        if self.domain() != other.domain() {
            return Err(Error::DomainMismatch(format!(
                "[{}, {}] vs [{}, {}]",
                self.domain().0,
                self.domain().1,
                other.domain().0,
                other.domain().1
            )));
        }
        let mut xs: Vec<Rational> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .cloned()
            .collect();
        xs.sort();
        xs.dedup();
        Ok(xs)
    }

    /// Pointwise sum on the merged grid; domains must match.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let xs = self.merge_grid(other)?;
        let points = xs
            .into_iter()
            .map(|x| {
                let v = self.eval(&x)? + other.eval(&x)?;
                Ok((x, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(points)
    }

    /// Pointwise difference on the merged grid; domains must match.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.affine(&int(-1), &Rational::zero()))
    }

    /// Restriction to `[lo, hi]`, which must lie inside the domain.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyInterval {
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
        let (dlo, dhi) = self.domain();
        if lo < dlo || hi > dhi {
            return Err(Error::DomainMismatch(format!(
                "[{lo}, {hi}] outside [{dlo}, {dhi}]"
            )));
        }
        if lo == hi {
            return Self::from_points(vec![(lo.clone(), self.eval(lo)?)]);
        }
        let mut points = vec![(lo.clone(), self.eval(lo)?)];
        for b in &self.breaks {
            if b > lo && b < hi {
                points.push((b.clone(), self.eval(b)?));
            }
        }
        points.push((hi.clone(), self.eval(hi)?));
        Self::from_points(points)
    }

    /// All points where `self - other` changes sign or touches zero, or the
    /// `Identical` sentinel when the curves coincide everywhere. Domains
    /// must match.
    pub fn crossings(&self, other: &Self) -> Result<Crossings> {
        let diff = self.sub(other)?;
        if diff.values.iter().all(|v| v.is_zero()) {
            return Ok(Crossings::Identical);
        }
        let mut points: Vec<Rational> = Vec::new();
        if diff.slopes.is_empty() {
            // degenerate single-point domain, nonzero difference
            return Ok(Crossings::Points(points));
        }
        for k in 0..diff.slopes.len() {
            let (x0, x1) = (&diff.breaks[k], &diff.breaks[k + 1]);
            let (v0, v1) = (&diff.values[k], &diff.values[k + 1]);
            if v0.is_zero() {
                points.push(x0.clone());
            }
            if v1.is_zero() {
                points.push(x1.clone());
            } else if !v0.is_zero() && (v0 < &Rational::zero()) != (v1 < &Rational::zero()) {
                // strict sign change inside the piece
                points.push(x0 - v0 / &diff.slopes[k]);
            }
        }
        points.sort();
        points.dedup();
        Ok(Crossings::Points(points))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn tent() -> PiecewiseLinear {
        // 0 at 0, peaks at 1 over x = 1/2, back to 0 at 1
        PiecewiseLinear::from_points(vec![
            (int(0), int(0)),
            (rat(1, 2), int(1)),
            (int(1), int(0)),
        ])
        .unwrap()
    }

    #[test]
    fn eval_interpolates() {
        let p = tent();
        assert_eq!(p.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(p.eval(&rat(3, 4)).unwrap(), rat(1, 2));
        assert_eq!(p.eval(&int(1)).unwrap(), int(0));
        assert!(p.eval(&rat(3, 2)).is_err());
    }

    #[test]
    fn argmax_constant_takes_left_endpoint() {
        let p = PiecewiseLinear::constant(rat(1, 4), rat(3, 4), int(5)).unwrap();
        assert_eq!(p.argmax(), (rat(1, 4), int(5)));
    }

    #[test]
    fn argmax_tent_peak() {
        assert_eq!(tent().argmax(), (rat(1, 2), int(1)));
    }

    #[test]
    fn level_set_constant_whole_domain() {
        let p = PiecewiseLinear::constant(int(0), int(1), int(2)).unwrap();
        assert_eq!(p.level_set(&int(2)), vec![(int(0), int(1))]);
    }

    #[test]
    fn level_set_above_max_is_empty() {
        assert!(tent().level_set(&int(2)).is_empty());
    }

    #[test]
    fn level_set_unimodal_peak_is_single_point() {
        assert_eq!(tent().level_set(&int(1)), vec![(rat(1, 2), rat(1, 2))]);
        assert_eq!(
            tent().level_set(&rat(1, 2)),
            vec![(rat(1, 4), rat(1, 4)), (rat(3, 4), rat(3, 4))]
        );
    }

    #[test]
    fn level_set_merges_plateau_edges() {
        let p = PiecewiseLinear::from_points(vec![
            (int(0), int(0)),
            (rat(1, 4), int(1)),
            (rat(1, 2), int(1)),
            (int(1), int(0)),
        ])
        .unwrap();
        assert_eq!(p.level_set(&int(1)), vec![(rat(1, 4), rat(1, 2))]);
    }

    #[test]
    fn crossings_identical_sentinel() {
        let p = tent();
        assert_eq!(p.crossings(&p).unwrap(), Crossings::Identical);
    }

    #[test]
    fn crossings_disjoint_constants_empty() {
        let p = PiecewiseLinear::constant(int(0), int(1), int(1)).unwrap();
        let q = PiecewiseLinear::constant(int(0), int(1), int(0)).unwrap();
        assert_eq!(p.crossings(&q).unwrap(), Crossings::Points(vec![]));
    }

    #[test]
    fn crossings_symmetric_lines() {
        let p = PiecewiseLinear::from_points(vec![(int(0), int(0)), (int(1), int(1))]).unwrap();
        let q = PiecewiseLinear::from_points(vec![(int(0), int(1)), (int(1), int(0))]).unwrap();
        assert_eq!(p.crossings(&q).unwrap(), Crossings::Points(vec![rat(1, 2)]));
    }

    #[test]
    fn crossings_report_coincidence_interval_edges() {
        let p = PiecewiseLinear::from_points(vec![
            (int(0), int(1)),
            (rat(1, 4), int(0)),
            (rat(1, 2), int(0)),
            (int(1), int(1)),
        ])
        .unwrap();
        let q = PiecewiseLinear::constant(int(0), int(1), int(0)).unwrap();
        assert_eq!(
            p.crossings(&q).unwrap(),
            Crossings::Points(vec![rat(1, 4), rat(1, 2)])
        );
    }

    #[test]
    fn restrict_and_degenerate() {
        let p = tent();
        let r = p.restrict(&rat(1, 4), &rat(1, 2)).unwrap();
        assert_eq!(r.domain(), (&rat(1, 4), &rat(1, 2)));
        assert_eq!(r.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        let single = p.restrict(&rat(1, 2), &rat(1, 2)).unwrap();
        assert!(single.is_degenerate());
        assert_eq!(single.argmax(), (rat(1, 2), int(1)));
    }

    #[test]
    fn sub_on_merged_grids() {
        let p = tent();
        let q = PiecewiseLinear::from_points(vec![
            (int(0), int(0)),
            (rat(1, 4), rat(1, 2)),
            (int(1), rat(1, 2)),
        ])
        .unwrap();
        let d = p.sub(&q).unwrap();
        assert_eq!(d.eval(&rat(1, 4)).unwrap(), int(0));
        assert_eq!(d.eval(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(d.eval(&int(1)).unwrap(), rat(-1, 2));
    }
}
