//! Non-increasing rearrangement, distribution function and the maximal
//! (running-average) rearrangement.

use crate::scalar::Scalar;
use crate::stepfn::StepFunction;

/// The non-increasing rearrangement `f*`: sort the (value, cell length)
/// pairs by value descending and lay the lengths out from the origin.
/// Exact, and equimeasurable with `f` by construction.
pub fn rearrange<T: Scalar>(f: &StepFunction<T>) -> StepFunction<T> {
    let mut pairs: Vec<(T, T)> = f
        .cells()
        .filter(|&(_, _, v)| v > T::zero())
        .map(|(lo, hi, v)| (v, hi - lo))
        .collect();
    if pairs.is_empty() {
        return StepFunction::zero();
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut breaks = Vec::with_capacity(pairs.len());
    let mut values = Vec::with_capacity(pairs.len());
    let mut edge = T::zero();
    for (v, len) in pairs {
        let next = edge + len;
        if next == edge {
            // the cell is below fp resolution at this offset; dropping it
            // changes the layout by less than one ulp of measure
            continue;
        }
        edge = next;
        if values.last() == Some(&v) {
            *breaks.last_mut().unwrap() = edge;
        } else {
            breaks.push(edge);
            values.push(v);
        }
    }
    if breaks.is_empty() {
        return StepFunction::zero();
    }
    StepFunction::new(breaks, values).expect("rearranged cells are valid")
}

/// Exact Lebesgue measure of `{f > lam}`. Qualifying cell lengths are summed
/// in ascending order so the result is independent of the cell ordering.
pub fn distribution<T: Scalar>(f: &StepFunction<T>, lam: T) -> T {
    let mut lens: Vec<T> = f
        .cells()
        .filter(|&(_, _, v)| v > lam)
        .map(|(lo, hi, _)| hi - lo)
        .collect();
    lens.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lens.into_iter().fold(T::zero(), |a, l| a + l)
}

/// `f**(t) = (1/t) int_0^t f*`, kept in exact piecewise form: each cell of
/// `f*` carries its value and the cumulative integral at the cell start, so
/// point evaluation is exact at every `t > 0`.
#[derive(Clone, Debug)]
pub struct MaximalFunction<T> {
    star: StepFunction<T>,
    cum: Vec<T>,
    total: T,
}

pub fn maximal<T: Scalar>(f: &StepFunction<T>) -> MaximalFunction<T> {
    let star = rearrange(f);
    let mut cum = Vec::with_capacity(star.values().len());
    let mut acc = T::zero();
    for (lo, hi, v) in star.cells() {
        cum.push(acc);
        acc = acc + v * (hi - lo);
    }
    MaximalFunction { star, cum, total: acc }
}

impl<T: Scalar> MaximalFunction<T> {
    pub fn eval(&self, t: T) -> T {
        assert!(t > T::zero(), "f** is defined for t > 0");
        for (i, (lo, hi, v)) in self.star.cells().enumerate() {
            if t <= hi {
                return (self.cum[i] + v * (t - lo)) / t;
            }
        }
        self.total / t
    }

    /// The underlying rearrangement `f*`.
    pub fn star(&self) -> &StepFunction<T> {
        &self.star
    }

    /// `int_0^inf f*`, i.e. the L1 mass.
    pub fn total(&self) -> T {
        self.total
    }
}
