//! Nonnegative compactly supported step functions on `(0, inf)` with exact
//! power-weight integration and weighted suprema.
//!
//! A function is `values[i]` on `[breaks[i-1], breaks[i])` (with an implicit
//! leading breakpoint at 0) and vanishes beyond the last breakpoint. All
//! integrals of the form `int s^(a-1) f(s) ds` and suprema of `s^a f(s)` are
//! evaluated cell by cell in closed form, so Lorentz norms of step functions
//! are exact up to floating-point rounding.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hard cap on generated grid sizes.
pub const GRID_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<T> {
    breaks: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> StepFunction<T> {
    /// `values[i]` on `[breaks[i-1], breaks[i])`, zero from the last
    /// breakpoint on. Breakpoints must be strictly increasing, positive and
    /// finite; values nonnegative and finite.
    pub fn new(breaks: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != values.len() {
            return Err(Error::Parameter(
                "step function needs equally many breakpoints and values, at least one".into(),
            ));
        }
        let mut prev = T::zero();
        for b in &breaks {
            if !(*b > prev) || !b.is_finite() {
                return Err(Error::Parameter(
                    "breakpoints must be strictly increasing, positive and finite".into(),
                ));
            }
            prev = *b;
        }
        if values.iter().any(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::Parameter("values must be finite and nonnegative".into()));
        }
        Ok(StepFunction { breaks, values })
    }

    /// The zero function.
    pub fn zero() -> Self {
        StepFunction { breaks: vec![T::one()], values: vec![T::zero()] }
    }

    /// Indicator of `(a, b)`, `0 <= a < b`.
    pub fn indicator(a: T, b: T) -> Result<Self> {
        if a < T::zero() || !(a < b) {
            return Err(Error::Parameter("indicator needs 0 <= a < b".into()));
        }
        if a == T::zero() {
            Self::new(vec![b], vec![T::one()])
        } else {
            Self::new(vec![a, b], vec![T::zero(), T::one()])
        }
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Cells as `(lo, hi, value)` triples, starting from `lo = 0`.
    pub fn cells(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        (0..self.breaks.len()).map(move |i| {
            let lo = if i == 0 { T::zero() } else { self.breaks[i - 1] };
            (lo, self.breaks[i], self.values[i])
        })
    }

    pub fn eval(&self, t: T) -> T {
        if t < T::zero() {
            return T::zero();
        }
        for (lo, hi, v) in self.cells() {
            if t >= lo && t < hi {
                return v;
            }
        }
        T::zero()
    }

    /// First breakpoint (end of the leading cell).
    pub fn first_break(&self) -> T {
        self.breaks[0]
    }

    /// End of the support (last breakpoint).
    pub fn support_end(&self) -> T {
        *self.breaks.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a.max(v))
    }

    /// Merges adjacent cells with equal values and trims trailing zeros
    /// (keeping at least one cell). All operations are invariant under this.
    pub fn normalize(&self) -> Self {
        let mut breaks: Vec<T> = Vec::new();
        let mut values: Vec<T> = Vec::new();
        for (_, hi, v) in self.cells() {
            if let Some(last) = values.last().copied() {
                if last == v {
                    *breaks.last_mut().unwrap() = hi;
                    continue;
                }
            }
            breaks.push(hi);
            values.push(v);
        }
        while values.len() > 1 && *values.last().unwrap() == T::zero() {
            values.pop();
            breaks.pop();
        }
        StepFunction { breaks, values }
    }

    pub fn scale(&self, c: T) -> Result<Self> {
        if !(c >= T::zero()) || !c.is_finite() {
            return Err(Error::Parameter("scale factor must be finite and >= 0".into()));
        }
        StepFunction::new(self.breaks.clone(), self.values.iter().map(|&v| v * c).collect())
    }

    /// `f(lam * t)`: breakpoints shrink by `1/lam`, values are untouched.
    pub fn dilate(&self, lam: T) -> Result<Self> {
        if !(lam > T::zero()) || !lam.is_finite() {
            return Err(Error::Parameter("dilation factor must be positive and finite".into()));
        }
        StepFunction::new(self.breaks.iter().map(|&b| b / lam).collect(), self.values.clone())
    }

    /// Values raised to a positive power; breakpoints unchanged.
    pub fn pow_values(&self, e: T) -> Self {
        debug_assert!(e > T::zero());
        StepFunction {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|&v| v.powf(e)).collect(),
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(T, T) -> T) -> Self {
        let mut merged: Vec<T> = Vec::with_capacity(self.breaks.len() + other.breaks.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.breaks.len() || j < other.breaks.len() {
            let a = self.breaks.get(i).copied();
            let b = other.breaks.get(j).copied();
            let next = match (a, b) {
                (Some(x), Some(y)) => {
                    if x < y {
                        i += 1;
                        x
                    } else if y < x {
                        j += 1;
                        y
                    } else {
                        i += 1;
                        j += 1;
                        x
                    }
                }
                (Some(x), None) => {
                    i += 1;
                    x
                }
                (None, Some(y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        let mut lo = T::zero();
        let mut values = Vec::with_capacity(merged.len());
        for &hi in &merged {
            values.push(op(self.eval(lo), other.eval(lo)));
            lo = hi;
        }
        StepFunction { breaks: merged, values }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn pointwise_min(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.min(b))
    }

    pub fn pointwise_max(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.max(b))
    }

    /// Level truncation `min(f, c)`, computed as `v - (v - c)+` so that
    /// `truncate_level(f,c) + excess(f,c) == f` is bitwise exact: whenever
    /// the rounded excess is inexact it exceeds `v/2`, so the subtraction is
    /// exact by the Sterbenz lemma and the pair sums back to `v`.
    pub fn truncate_level(&self, c: T) -> Self {
        debug_assert!(c >= T::zero());
        StepFunction {
            breaks: self.breaks.clone(),
            values: self
                .values
                .iter()
                .map(|&v| v - (v - c).max(T::zero()))
                .collect(),
        }
    }

    /// `(f - c)+`.
    pub fn excess(&self, c: T) -> Self {
        debug_assert!(c >= T::zero());
        StepFunction {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|&v| (v - c).max(T::zero())).collect(),
        }
    }

    /// `int_u^v s^(a-1) f(s) ds`, cell by cell in closed form: a cell
    /// `[c, d)` with value `w` contributes `w*(d^a - c^a)/a` (and
    /// `w*ln(d/c)` when `a = 0`).
    ///
    /// Fails with `DivergentIntegral` when `a <= 0`, `u = 0` and `f` is
    /// nonzero on an interval touching the origin.
    pub fn integrate_power(&self, a: T, u: T, v: T) -> Result<T> {
        let u = u.max(T::zero());
        if !(u < v) {
            return Ok(T::zero());
        }
        if a <= T::zero() && u == T::zero() {
            if let Some((_, _, w)) = self.cells().next() {
                if w > T::zero() {
                    return Err(Error::DivergentIntegral(format!(
                        "a = {a} <= 0 with f nonzero near 0"
                    )));
                }
            }
            // leading value is zero: restart from the first breakpoint
            return self.integrate_power(a, self.first_break().min(v), v);
        }
        let mut total = T::zero();
        for (lo, hi, w) in self.cells() {
            if w == T::zero() {
                continue;
            }
            let c = lo.max(u);
            let d = hi.min(v);
            if !(c < d) {
                continue;
            }
            let piece = if a == T::zero() {
                (d / c).ln()
            } else {
                (d.powf(a) - c.powf(a)) / a
            };
            total = total + w * piece;
        }
        Ok(total)
    }

    /// Exact `sup { s^a f(s) : s in (u, v) }` for `a >= 0`. On each cell the
    /// weight is nondecreasing, so the supremum sits at the cell's right end.
    pub fn sup_power(&self, a: T, u: T, v: T) -> T {
        debug_assert!(a >= T::zero());
        let u = u.max(T::zero());
        if !(u < v) {
            return T::zero();
        }
        let mut best = T::zero();
        for (lo, hi, w) in self.cells() {
            if w == T::zero() {
                continue;
            }
            let c = lo.max(u);
            let d = hi.min(v);
            if !(c < d) {
                continue;
            }
            let cand = if a == T::zero() { w } else { w * d.powf(a) };
            best = best.max(cand);
        }
        best
    }

    /// `int_u^v f`, shorthand for the `a = 1` power integral.
    pub fn integral(&self, u: T, v: T) -> T {
        self.integrate_power(T::one(), u, v).expect("a = 1 never diverges")
    }

    /// Largest pointwise gap against `other`, probed on the merged
    /// breakpoints; test helper.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let diff = self.combine(other, |a, b| (a - b).abs());
        diff.values.iter().fold(T::zero(), |m, &v| m.max(v))
    }

    /// Sorted distinct values, excluding zero.
    pub fn distinct_values(&self) -> Vec<T> {
        let mut vals: Vec<T> = self.values.iter().copied().filter(|v| *v > T::zero()).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals.dedup();
        vals
    }
}

/// Geometric grid from `t_min` to `t_max` inclusive, at least `ppd` points
/// per decade, endpoints exact. Deterministic.
pub fn make_log_grid<T: Scalar>(t_min: T, t_max: T, ppd: u32) -> Result<Vec<T>> {
    if !(t_min > T::zero()) || !(t_min < t_max) || !t_max.is_finite() {
        return Err(Error::Grid(format!("empty or invalid range [{t_min}, {t_max}]")));
    }
    if ppd == 0 {
        return Err(Error::Grid("points per decade must be positive".into()));
    }
    let decades = (t_max / t_min).log10();
    let steps = (decades * T::from_f64_lossy(ppd as f64) - T::from_f64_lossy(1e-9))
        .ceil()
        .to_f64()
        .unwrap_or(f64::INFINITY);
    if !steps.is_finite() || steps as usize + 1 > GRID_CAP {
        return Err(Error::Grid(format!("grid would exceed the {GRID_CAP}-point cap")));
    }
    let n = (steps as usize).max(1);
    let mut grid = Vec::with_capacity(n + 1);
    grid.push(t_min);
    for k in 1..n {
        let frac = T::from_f64_lossy(k as f64 / n as f64);
        grid.push(t_min * (t_max / t_min).powf(frac));
    }
    grid.push(t_max);
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn chi01() -> StepFunction<f64> {
        StepFunction::indicator(0.0, 1.0).unwrap()
    }

    /// Riemann-sum reference for the closed-form power integral. For `a > 0`
    /// the substitution `w = s^a` removes the origin singularity, so plain
    /// midpoint sums converge.
    fn brute_integrate(f: &StepFunction<f64>, a: f64, u: f64, v: f64, n: usize) -> f64 {
        let v = v.min(f.support_end());
        if u >= v {
            return 0.0;
        }
        if a > 0.0 {
            let (wu, wv) = (u.powf(a), v.powf(a));
            let h = (wv - wu) / n as f64;
            return (0..n)
                .map(|i| {
                    let w = wu + (i as f64 + 0.5) * h;
                    f.eval(w.powf(1.0 / a)) * h / a
                })
                .sum();
        }
        let h = (v - u) / n as f64;
        (0..n)
            .map(|i| {
                let s = u + (i as f64 + 0.5) * h;
                s.powf(a - 1.0) * f.eval(s) * h
            })
            .sum()
    }

    #[test]
    fn log_grid_examples() {
        let g = make_log_grid(1.0, 100.0, 1).unwrap();
        assert_eq!(g.len(), 3);
        assert_relative_eq!(g[1], 10.0, max_relative = 1e-12);
        assert_eq!(g[2], 100.0);

        let g = make_log_grid(0.1, 10.0, 2).unwrap();
        assert_eq!(g.len(), 5);
        assert_relative_eq!(g[1], 0.1 * 10f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(g[2], 1.0, max_relative = 1e-12);

        assert!(make_log_grid(1.0, 1.0, 4).is_err());
        assert!(make_log_grid(1e-300, 1e300, 10_000).is_err());
    }

    #[test]
    fn integrate_power_examples() {
        let f = chi01();
        assert_relative_eq!(f.integrate_power(0.25, 0.0, 1.0).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(
            f.integrate_power(1.0, 0.0, f64::INFINITY).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert!(matches!(
            f.integrate_power(-1.0, 0.0, 1.0),
            Err(Error::DivergentIntegral(_))
        ));
        // away from the origin a <= 0 is fine
        let shifted = StepFunction::indicator(1.0, 2.0).unwrap();
        assert_relative_eq!(
            shifted.integrate_power(0.0, 0.0, f64::INFINITY).unwrap(),
            2f64.ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn integrate_matches_brute_force() {
        let f = StepFunction::new(vec![0.5, 1.0, 2.5, 4.0], vec![2.0, 1.0, 0.25, 1.5]).unwrap();
        // midpoint sums see the jumps, so O(h) error at each breakpoint
        for a in [0.25, 0.5, 1.0, 2.0] {
            let exact = f.integrate_power(a, 0.0, f64::INFINITY).unwrap();
            let brute = brute_integrate(&f, a, 0.0, 4.0, 400_000);
            assert_relative_eq!(exact, brute, max_relative = 3e-5);
        }
        let exact = f.integrate_power(-0.5, 0.3, 3.0).unwrap();
        let brute = brute_integrate(&f, -0.5, 0.3, 3.0, 400_000);
        assert_relative_eq!(exact, brute, max_relative = 3e-5);
    }

    #[test]
    fn sup_power_examples() {
        assert_relative_eq!(chi01().sup_power(0.5, 0.0, f64::INFINITY), 1.0);
        let f = StepFunction::new(vec![1.0, 4.0], vec![2.0, 1.0]).unwrap();
        assert_relative_eq!(f.sup_power(0.5, 0.0, f64::INFINITY), 2.0);
        assert_relative_eq!(chi01().sup_power(0.0, 0.0, f64::INFINITY), 1.0);
    }

    #[test]
    fn dilate_examples() {
        let f = chi01();
        assert_eq!(f.dilate(2.0).unwrap(), StepFunction::indicator(0.0, 0.5).unwrap());
        assert_eq!(f.dilate(1.0).unwrap(), f);
        let two = StepFunction::new(vec![1.0, 2.0], vec![3.0, 1.0]).unwrap();
        let d = two.dilate(0.25).unwrap();
        assert_eq!(d.breaks(), &[4.0, 8.0]);
        assert_eq!(d.values(), two.values());
    }

    #[test]
    fn algebra_examples() {
        let f = chi01().scale(3.0).unwrap();
        assert_eq!(f.truncate_level(1.0), chi01());
        assert_eq!(f.excess(1.0), chi01().scale(2.0).unwrap());
        let sum = chi01().add(&StepFunction::indicator(0.0, 2.0).unwrap());
        assert_eq!(sum.eval(0.5), 2.0);
        assert_eq!(sum.eval(1.5), 1.0);
        assert_eq!(sum.eval(2.5), 0.0);
    }

    #[test]
    fn normalize_merges_and_trims() {
        let f = StepFunction::new(vec![1.0, 2.0, 3.0, 4.0], vec![1.0, 1.0, 0.5, 0.0]).unwrap();
        let n = f.normalize();
        assert_eq!(n.breaks(), &[2.0, 3.0]);
        assert_eq!(n.values(), &[1.0, 0.5]);
        assert_eq!(StepFunction::<f64>::zero().normalize().values(), &[0.0]);
    }

    proptest! {
        #[test]
        fn truncation_pair_reassembles(
            vals in proptest::collection::vec(0.0f64..4.0, 1..8),
            cuts in proptest::collection::vec(0.0f64..4.0, 1..6),
        ) {
            let breaks: Vec<f64> = (1..=vals.len()).map(|i| i as f64 * 0.5).collect();
            let f = StepFunction::new(breaks, vals).unwrap();
            for c in cuts {
                let re = f.truncate_level(c).add(&f.excess(c));
                prop_assert!(re.max_abs_diff(&f) == 0.0);
            }
        }

        #[test]
        fn integrate_additive_over_splits(
            vals in proptest::collection::vec(0.0f64..4.0, 1..8),
            a in 0.1f64..3.0,
            split in 0.05f64..3.9,
        ) {
            let breaks: Vec<f64> = (1..=vals.len()).map(|i| i as f64 * 0.5).collect();
            let f = StepFunction::new(breaks, vals).unwrap();
            let whole = f.integrate_power(a, 0.0, f64::INFINITY).unwrap();
            let left = f.integrate_power(a, 0.0, split).unwrap();
            let right = f.integrate_power(a, split, f64::INFINITY).unwrap();
            let err = (whole - (left + right)).abs();
            prop_assert!(err <= 4.0 * f64::EPSILON * whole.abs().max(1.0));
        }

        #[test]
        fn dilation_rescales_integrals(
            vals in proptest::collection::vec(0.0f64..4.0, 1..8),
            a in 0.1f64..3.0,
            lam in 0.1f64..10.0,
        ) {
            let breaks: Vec<f64> = (1..=vals.len()).map(|i| i as f64 * 0.5).collect();
            let f = StepFunction::new(breaks, vals).unwrap();
            let lhs = f.dilate(lam).unwrap().integrate_power(a, 0.0, f64::INFINITY).unwrap();
            let rhs = lam.powf(-a) * f.integrate_power(a, 0.0, f64::INFINITY).unwrap();
            let err = (lhs - rhs).abs();
            prop_assert!(err <= 1e-12 * rhs.abs().max(1e-300));
        }
    }
}
