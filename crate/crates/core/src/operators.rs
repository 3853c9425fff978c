//! The Calderón-type operators `R`, `S` (with its auxiliary `S1`), the
//! recovery operator and the interpolation operator `Y`, all evaluated in
//! closed form at any point, plus sampled outputs for norm estimation.
//!
//! Every operator value at a point is exact (Tier 1). Norms of operator
//! outputs are Tier 2: non-increasing outputs are integrated by Gauss panels
//! against the exact evaluator with closed-form head and tail pieces, other
//! outputs fall back to the rearranged sample step function. Doubling the
//! grid density is the standard stability check.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lorentz::gauss_log_panels;
use crate::params::{LorentzSpec, ParamSet};
use crate::rearrange::{maximal, rearrange};
use crate::scalar::Scalar;
use crate::stepfn::{make_log_grid, StepFunction};

/// Exact behavior of an operator output beyond the sampling grid.
#[derive(Clone, Copy, Debug)]
pub enum Tail<T> {
    /// Identically zero past the cutoff (S- and Y-type outputs).
    Zero,
    /// `coeff * t^exp` past the cutoff (R- and recovery-type outputs).
    Power { coeff: T, exp: T },
}

/// An output sampling grid: the breakpoint list plus the density it was
/// requested at. The density paces the norm quadrature panels, so doubling
/// it refines every cell even where exact breakpoint images already pin the
/// cell walls.
#[derive(Clone, Debug)]
pub struct OutputGrid<T> {
    pub points: Vec<T>,
    pub ppd: u32,
}

impl<T: Scalar> OutputGrid<T> {
    pub fn from_points(points: Vec<T>) -> Self {
        OutputGrid { points, ppd: crate::DEFAULT_PPD }
    }
}

/// A sampled operator output together with its exact point evaluator.
///
/// `samples` lives on the output grid with each cell carrying the exact
/// evaluator value at the cell's left endpoint (the leading cell carries the
/// limit value at `0+`).
pub struct OperatorOutput<T> {
    pub samples: StepFunction<T>,
    pub grid: OutputGrid<T>,
    evaluator: Arc<dyn Fn(T) -> T + Send + Sync>,
    monotone: bool,
    head: T,
    tail: Tail<T>,
}

/// Which operator to apply; used by sweep drivers and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    R,
    S,
    S1,
    Recovery,
    Y,
}

impl OperatorKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(OperatorKind::R),
            "S" | "s" => Ok(OperatorKind::S),
            "S1" | "s1" => Ok(OperatorKind::S1),
            "recovery" => Ok(OperatorKind::Recovery),
            "Y" | "y" => Ok(OperatorKind::Y),
            other => Err(Error::Spec(format!("unknown operator `{other}`"))),
        }
    }
}

/// Default output grid: log grid spanning three decades either side of the
/// support of `f*` mapped through `t -> t^(1/r)`, refined by the exact
/// images of the breakpoints of `f*` (so panel integrands stay smooth).
pub fn default_output_grid<T: Scalar>(
    f: &StepFunction<T>,
    params: &ParamSet,
    ppd: u32,
) -> Result<OutputGrid<T>> {
    let fstar = rearrange(f);
    if fstar.is_zero() {
        return Ok(OutputGrid { points: vec![T::one()], ppd });
    }
    let inv_r = params.r.recip().expect("r > 0").to_scalar::<T>();
    let margin = T::from_f64_lossy(1e3);
    let lo = fstar.first_break().powf(inv_r) / margin;
    let hi = fstar.support_end().powf(inv_r) * margin;
    let mut points = make_log_grid(lo, hi, ppd)?;
    for b in fstar.breaks() {
        points.push(b.powf(inv_r));
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // collapse near-coincident points so no cell degenerates to fp width
    let tol = T::from_f64_lossy(1e-12);
    points.dedup_by(|b, a| (*b - *a) <= *a * tol);
    Ok(OutputGrid { points, ppd })
}

fn build_output<T: Scalar>(
    grid: &OutputGrid<T>,
    evaluator: Arc<dyn Fn(T) -> T + Send + Sync>,
    monotone: bool,
    tail: Tail<T>,
) -> OperatorOutput<T> {
    let points = &grid.points;
    let head = evaluator(T::zero());
    let mut values = Vec::with_capacity(points.len());
    values.push(head);
    for t in &points[..points.len().saturating_sub(1)] {
        values.push(evaluator(*t));
    }
    let samples = StepFunction::new(points.clone(), values)
        .expect("output grid yields a valid step function");
    OperatorOutput { samples, grid: grid.clone(), evaluator, monotone, head, tail }
}

fn zero_output<T: Scalar>() -> OperatorOutput<T> {
    OperatorOutput {
        samples: StepFunction::zero(),
        grid: OutputGrid { points: vec![T::one()], ppd: crate::DEFAULT_PPD },
        evaluator: Arc::new(|_| T::zero()),
        monotone: true,
        head: T::zero(),
        tail: Tail::Zero,
    }
}

/// `R f(t) = t^(-1/p1) (int_0^(t^r) s^(q0/p0 - 1) f*(s)^q0 ds)^(1/q0)`,
/// with the inner integral replaced by `sup_{s <= t^r} s^(1/p0) f*(s)`
/// when `q0 = inf`.
pub fn op_r<T: Scalar>(
    f: &StepFunction<T>,
    params: &ParamSet,
    grid: &OutputGrid<T>,
) -> OperatorOutput<T> {
    let fstar = rearrange(f);
    if fstar.is_zero() {
        return zero_output();
    }
    let r: T = params.r.to_scalar();
    let inv_p1: T = params.p1.recip().unwrap().to_scalar();
    let inv_p0: T = params.p0.recip().unwrap().to_scalar();
    let (eval, full): (Arc<dyn Fn(T) -> T + Send + Sync>, T) = if params.q0.is_infinite() {
        let full = fstar.sup_power(inv_p0, T::zero(), T::infinity());
        let fs = fstar.clone();
        (
            Arc::new(move |t: T| {
                if t <= T::zero() {
                    return T::zero();
                }
                t.powf(-inv_p1) * fs.sup_power(inv_p0, T::zero(), t.powf(r))
            }),
            full,
        )
    } else {
        let q0: T = params.q0.to_scalar();
        let fq = fstar.pow_values(q0);
        let a = q0 * inv_p0;
        let full = fq.integrate_power(a, T::zero(), T::infinity()).unwrap().powf(q0.recip());
        (
            Arc::new(move |t: T| {
                if t <= T::zero() {
                    return T::zero();
                }
                let inner = fq.integrate_power(a, T::zero(), t.powf(r)).unwrap();
                t.powf(-inv_p1) * inner.powf(q0.recip())
            }),
            full,
        )
    };
    build_output(grid, eval, false, Tail::Power { coeff: full, exp: -inv_p1 })
}

/// The auxiliary tail operator applied to `f` as it stands:
/// `S1 f(t) = int_(t^r)^inf s^(1/q - 1) f(s) ds`. Non-increasing in `t`
/// whatever `f` is; `S f = S1 f*`.
pub fn op_s1<T: Scalar>(
    f: &StepFunction<T>,
    params: &ParamSet,
    grid: &OutputGrid<T>,
) -> OperatorOutput<T> {
    if f.is_zero() {
        return zero_output();
    }
    let r: T = params.r.to_scalar();
    let inv_q: T = params.q.recip().unwrap().to_scalar();
    let func = f.clone();
    let eval: Arc<dyn Fn(T) -> T + Send + Sync> = Arc::new(move |t: T| {
        let x = if t <= T::zero() { T::zero() } else { t.powf(r) };
        func.integrate_power(inv_q, x, T::infinity()).unwrap()
    });
    build_output(grid, eval, true, Tail::Zero)
}

/// `S f = S1 f*`.
pub fn op_s<T: Scalar>(
    f: &StepFunction<T>,
    params: &ParamSet,
    grid: &OutputGrid<T>,
) -> OperatorOutput<T> {
    op_s1(&rearrange(f), params, grid)
}

/// The recovery operator `t^((r p1 - p0)/(p0 p1)) f**(t^r)`.
pub fn op_recovery<T: Scalar>(
    f: &StepFunction<T>,
    params: &ParamSet,
    grid: &OutputGrid<T>,
) -> OperatorOutput<T> {
    let mf = maximal(f);
    if mf.star().is_zero() {
        return zero_output();
    }
    let r: T = params.r.to_scalar();
    let a_pow: T = recovery_exponent(params).to_scalar();
    let total = mf.total();
    let eval: Arc<dyn Fn(T) -> T + Send + Sync> = {
        let mf = mf.clone();
        Arc::new(move |t: T| {
            if t <= T::zero() {
                return T::zero();
            }
            t.powf(a_pow) * mf.eval(t.powf(r))
        })
    };
    build_output(grid, eval, false, Tail::Power { coeff: total, exp: a_pow - r })
}

/// `(r p1 - p0) / (p0 p1) = r/p0 - 1/p1`, as an exact exponent.
pub fn recovery_exponent(params: &ParamSet) -> crate::exponent::Exponent {
    params
        .r
        .checked_div(&params.p0)
        .and_then(|x| x.checked_sub(&params.p1.recip()?))
        .expect("finite parameters")
}

/// `Y f(t) = (int_0^t s^(r q0/p0 - 1) f*(s^r)^q0 ds)^((q1-q0)/(q0 q1))
///          * t^(r q0/(p0 q1) - 1/p1) * f*(t^r)^(q0/q1)`, for `q0 < q1`.
///
/// The substitution `u = s^r` turns the inner integral into
/// `(1/r) int_0^(t^r) u^(q0/p0 - 1) f*(u)^q0 du`, which is closed-form on
/// step functions. With `q1 = inf` the operator degenerates to `R` and is
/// evaluated as such.
pub fn op_y<T: Scalar>(
    f: &StepFunction<T>,
    params: &ParamSet,
    grid: &OutputGrid<T>,
) -> Result<OperatorOutput<T>> {
    if params.q0 >= params.q1 {
        return Err(Error::Parameter(format!(
            "Y requires q0 < q1, got q0 = {}, q1 = {}",
            params.q0, params.q1
        )));
    }
    if params.q1.is_infinite() {
        return Ok(op_r(f, params, grid));
    }
    let fstar = rearrange(f);
    if fstar.is_zero() {
        return Ok(zero_output());
    }
    let q0: T = params.q0.to_scalar();
    let q1: T = params.q1.to_scalar();
    let r: T = params.r.to_scalar();
    let inv_p0: T = params.p0.recip().unwrap().to_scalar();
    let inv_p1: T = params.p1.recip().unwrap().to_scalar();
    let ex_inner = (q1 - q0) / (q0 * q1);
    let ex_t = r * q0 * inv_p0 / q1 - inv_p1;
    let ex_last = q0 / q1;
    let fq = fstar.pow_values(q0);
    let a = q0 * inv_p0;
    let fs = fstar.clone();
    let eval: Arc<dyn Fn(T) -> T + Send + Sync> = Arc::new(move |t: T| {
        if t <= T::zero() {
            return T::zero();
        }
        let x = t.powf(r);
        let last = fs.eval(x);
        if last == T::zero() {
            return T::zero();
        }
        let inner = fq.integrate_power(a, T::zero(), x).unwrap() / r;
        inner.powf(ex_inner) * t.powf(ex_t) * last.powf(ex_last)
    });
    Ok(build_output(grid, eval, false, Tail::Zero))
}

pub fn apply<T: Scalar>(
    kind: OperatorKind,
    f: &StepFunction<T>,
    params: &ParamSet,
    grid: &OutputGrid<T>,
) -> Result<OperatorOutput<T>> {
    match kind {
        OperatorKind::R => Ok(op_r(f, params, grid)),
        OperatorKind::S => Ok(op_s(f, params, grid)),
        OperatorKind::S1 => Ok(op_s1(f, params, grid)),
        OperatorKind::Recovery => Ok(op_recovery(f, params, grid)),
        OperatorKind::Y => op_y(f, params, grid),
    }
}

/// The target-side functional
/// `t^(-1/p1) (int_0^t s^(q1/p1 - 1) g*(s)^q1 ds)^(1/q1)`
/// (supremum form when `q1 = inf`), exact on the step function `g`.
pub fn kint_target<T: Scalar>(g: &StepFunction<T>, params: &ParamSet, t: T) -> T {
    assert!(t > T::zero());
    let gstar = rearrange(g);
    let inv_p1: T = params.p1.recip().unwrap().to_scalar();
    if params.q1.is_infinite() {
        return t.powf(-inv_p1) * gstar.sup_power(inv_p1, T::zero(), t);
    }
    let q1: T = params.q1.to_scalar();
    let inner = gstar
        .pow_values(q1)
        .integrate_power(q1 * inv_p1, T::zero(), t)
        .unwrap();
    t.powf(-inv_p1) * inner.powf(q1.recip())
}

/// Max over `tgrid` of `kint_target(op f, t) / (R f(t) + S f(t))`.
pub fn kint_ratio_profile<T: Scalar>(
    kind: OperatorKind,
    f: &StepFunction<T>,
    params: &ParamSet,
    tgrid: &[T],
    grid: &OutputGrid<T>,
) -> Result<T> {
    if f.is_zero() {
        return Err(Error::DegenerateInput("kint ratio of the zero function".into()));
    }
    let out = apply(kind, f, params, grid)?;
    let r_out = op_r(f, params, grid);
    let s_out = op_s(f, params, grid);
    let mut best = T::zero();
    for &t in tgrid {
        let denom = r_out.eval(t) + s_out.eval(t);
        if denom <= T::zero() {
            return Err(Error::DegenerateInput(format!("vanishing denominator at t = {t}")));
        }
        best = best.max(kint_target(&out.samples, params, t) / denom);
    }
    Ok(best)
}

impl<T: Scalar> OperatorOutput<T> {
    /// Exact evaluation; `t = 0` returns the limit value.
    pub fn eval(&self, t: T) -> T {
        (self.evaluator)(t)
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn head_value(&self) -> T {
        self.head
    }

    /// `int_0^inf` of the output; only meaningful for non-increasing outputs.
    pub fn integrate(&self) -> Result<T> {
        self.lorentz_norm(&LorentzSpec::of_ints(1, 1), T::infinity())
    }

    /// Lorentz norm of the output over `(0, upto)`.
    ///
    /// Non-increasing outputs integrate the exact evaluator (Gauss panels on
    /// the output grid, closed-form head rectangle and tail); other outputs
    /// use the rearranged sample step function, truncated at the grid.
    pub fn lorentz_norm(&self, spec: &LorentzSpec, upto: T) -> Result<T> {
        let points = &self.grid.points;
        if spec.p.is_infinite() && spec.s.is_infinite() {
            let tail_top = match self.tail {
                Tail::Zero => T::zero(),
                Tail::Power { coeff, exp } => coeff * points.last().unwrap().powf(exp),
            };
            return Ok(self.head.max(self.samples.max_value()).max(tail_top));
        }
        if !self.monotone {
            let star = rearrange(&self.samples);
            return crate::lorentz::lorentz_norm_decreasing(&star, spec, upto);
        }
        let inv_p: T = spec.p.recip().map_err(|e| Error::Parameter(e.to_string()))?.to_scalar();
        if spec.s.is_infinite() {
            // the output is its own rearrangement
            let mut best = self.samples.sup_power(inv_p, T::zero(), upto);
            if let Tail::Power { coeff, exp } = self.tail {
                let k = inv_p + exp;
                let from = *points.last().unwrap();
                if from < upto && coeff > T::zero() {
                    if k > T::zero() {
                        best = if upto.is_infinite() {
                            T::infinity()
                        } else {
                            best.max(coeff * upto.powf(k))
                        };
                    } else {
                        best = best.max(coeff * from.powf(k));
                    }
                }
            }
            return Ok(best);
        }
        if spec.p.is_infinite() {
            return Err(Error::DivergentIntegral(
                "(inf, s) norm of an output with positive limit at 0".into(),
            ));
        }
        let s: T = spec.s.to_scalar();
        let gamma = s * inv_p;
        let grid_lo = points[0];
        let grid_hi = *points.last().unwrap();
        let phi = |t: T| self.eval(t).powf(s) * t.powf(gamma - T::one());
        // panel density: doubling the grid density halves every panel, so
        // refinement checks converge even where exact breakpoint images
        // already pin the cell walls
        let panel_ppd = 2 * self.grid.ppd.max(1);

        let mut total = T::zero();
        // head: the evaluator is within o(1) of its limit below ext_lo, and
        // the weight carries negligible mass there
        let ext_lo = (grid_lo * T::from_f64_lossy(1e-18)).min(upto);
        if self.head > T::zero() {
            total = total + self.head.powf(s) * ext_lo.powf(gamma) / gamma;
        }
        if upto <= ext_lo {
            return Ok(total.powf(s.recip()));
        }
        total = total + gauss_log_panels(ext_lo, grid_lo.min(upto), panel_ppd, phi);
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1].min(upto));
            if b <= a {
                break;
            }
            total = total + gauss_log_panels(a, b, panel_ppd, phi);
        }
        // tail beyond the grid
        if upto > grid_hi {
            if let Tail::Power { coeff, exp } = self.tail {
                let k = gamma + s * exp;
                let c = coeff.powf(s);
                if upto.is_infinite() {
                    if k < T::zero() {
                        total = total - c * grid_hi.powf(k) / k;
                    } else if c > T::zero() {
                        return Ok(T::infinity());
                    }
                } else if k == T::zero() {
                    total = total + c * (upto / grid_hi).ln();
                } else {
                    total = total + c * (upto.powf(k) - grid_hi.powf(k)) / k;
                }
            }
        }
        Ok(total.powf(s.recip()))
    }
}
