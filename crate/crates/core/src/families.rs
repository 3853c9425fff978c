//! Deterministic test-function generators, the sweep driver for empirical
//! operator-norm estimation, and the truncated-norm growth experiment.
//!
//! Family literals (the CLI mini-language):
//!
//! * `char:a,b` — the indicator of `(a, b)`; members scale the interval by
//!   powers of two.
//! * `step:b1,v1;b2,v2;...` — a literal step function.
//! * `pow:a:M:B` — `min(M, t^-a)` on `(0, B)`, sampled at the left endpoint
//!   of each grid cell; members square the cutoff `B`.
//! * `logpow:r1,s2,B` — `min(1, t^(-1/r1) * ln(e - 1 + t)^(-1/s2))` on
//!   `(0, B)`, the divergence-witness profile; members square `B`.
//! * `randmono:seed` — seeded random non-increasing step functions.
//!
//! Members of one family are bit-reproducible given `(spec, seed)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lorentz::lorentz_norm;
use crate::operators::{apply, default_output_grid, OperatorKind};
use crate::params::{LorentzSpec, ParamSet};
use crate::scalar::Scalar;
use crate::stepfn::{make_log_grid, StepFunction};

/// Cap on profile cutoffs; keeps `t^r` comfortably inside `f64` range.
const MAX_CUTOFF: f64 = 1e60;

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    Char { a: f64, b: f64 },
    Pow { a: f64, level: f64, cutoff: f64 },
    LogPow { r1: f64, s2: f64, cutoff: f64 },
    RandMono { seed: u64 },
    Step { breaks: Vec<f64>, values: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub count: usize,
    pub seed: u64,
    pub ppd: u32,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, count: usize, seed: u64, ppd: u32) -> Self {
        FamilySpec { kind, count, seed, ppd }
    }
}

impl FamilyKind {
    /// Parses a family literal, e.g. `char:0,1` or `pow:1/2:1:1e8`.
    pub fn parse(s: &str) -> Result<Self> {
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Spec(format!("family `{s}` lacks parameters")))?;
        let nums = |txt: &str, sep: char| -> Result<Vec<f64>> {
            txt.split(sep)
                .map(|x| {
                    parse_number(x.trim())
                        .ok_or_else(|| Error::Spec(format!("bad number `{x}` in `{s}`")))
                })
                .collect()
        };
        match head {
            "char" => {
                let v = nums(rest, ',')?;
                if v.len() != 2 || !(v[0] >= 0.0 && v[0] < v[1]) {
                    return Err(Error::Spec(format!("char needs 0 <= a < b, got `{rest}`")));
                }
                Ok(FamilyKind::Char { a: v[0], b: v[1] })
            }
            "pow" => {
                let v = nums(rest, ':')?;
                if v.len() != 3 || v[0] <= 0.0 || v[1] <= 0.0 || v[2] <= 0.0 {
                    return Err(Error::Spec(format!("pow needs a:M:B positive, got `{rest}`")));
                }
                Ok(FamilyKind::Pow { a: v[0], level: v[1], cutoff: v[2] })
            }
            "logpow" => {
                let v = nums(rest, ',')?;
                if v.len() != 3 || v[0] <= 0.0 || v[1] <= 0.0 || v[2] <= 1.0 {
                    return Err(Error::Spec(format!("logpow needs r1,s2 > 0 and B > 1, got `{rest}`")));
                }
                Ok(FamilyKind::LogPow { r1: v[0], s2: v[1], cutoff: v[2] })
            }
            "randmono" => {
                let seed = rest
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Spec(format!("bad seed `{rest}`")))?;
                Ok(FamilyKind::RandMono { seed })
            }
            "step" => {
                let mut breaks = Vec::new();
                let mut values = Vec::new();
                for pair in rest.split(';') {
                    let v = nums(pair, ',')?;
                    if v.len() != 2 {
                        return Err(Error::Spec(format!("step cell `{pair}` needs b,v")));
                    }
                    breaks.push(v[0]);
                    values.push(v[1]);
                }
                Ok(FamilyKind::Step { breaks, values })
            }
            other => Err(Error::Spec(format!("unknown family kind `{other}`"))),
        }
    }
}

/// Accepts plain and scientific float notation plus `a/b` fractions.
fn parse_number(s: &str) -> Option<f64> {
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().ok()?;
        let d: f64 = d.trim().parse().ok()?;
        if d == 0.0 {
            return None;
        }
        return Some(n / d);
    }
    s.parse().ok()
}

/// The growth parameter attached to member `i` (reported in sweep output).
pub fn member_param(kind: &FamilyKind, i: usize) -> f64 {
    match kind {
        FamilyKind::Char { b, .. } => b * 2f64.powi(i as i32),
        FamilyKind::Pow { cutoff, .. } | FamilyKind::LogPow { cutoff, .. } => {
            cutoff.powi(1 << i.min(8))
        }
        FamilyKind::RandMono { seed } => (*seed + i as u64) as f64,
        FamilyKind::Step { .. } => i as f64,
    }
}

/// Samples a non-increasing profile on a log grid over `(0, cutoff)`: the
/// value on each cell is the profile at the cell's left endpoint, so the
/// discretized function dominates the true profile and refinement halves
/// the gap from above.
fn sample_profile<T: Scalar>(
    profile: impl Fn(f64) -> f64,
    plateau_end: f64,
    cutoff: f64,
    ppd: u32,
) -> Result<StepFunction<T>> {
    let lo = plateau_end.min(1e-3).min(cutoff / 2.0);
    let grid = make_log_grid(lo, cutoff, ppd)?;
    let mut breaks: Vec<T> = Vec::with_capacity(grid.len());
    let mut values: Vec<T> = Vec::with_capacity(grid.len());
    // leading cell [0, lo) carries the plateau value
    breaks.push(T::from_f64_lossy(grid[0]));
    values.push(T::from_f64_lossy(profile(0.0)));
    for w in grid.windows(2) {
        breaks.push(T::from_f64_lossy(w[1]));
        values.push(T::from_f64_lossy(profile(w[0])));
    }
    StepFunction::new(breaks, values)
}

fn gen_randmono<T: Scalar>(seed: u64) -> StepFunction<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = rng.gen_range(8..=24usize);
    let mut breaks_f: Vec<f64> = (0..cells)
        .map(|_| 10f64.powf(rng.gen_range(-2.0..2.0)))
        .collect();
    breaks_f.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks_f.dedup();
    let n = breaks_f.len();
    // positive increments summed from the right give a strictly decreasing profile
    let increments: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let mut values_f = vec![0.0; n];
    let mut acc = 0.0;
    for i in (0..n).rev() {
        acc += increments[i];
        values_f[i] = acc;
    }
    let scale = 2.0 / acc;
    StepFunction::new(
        breaks_f.into_iter().map(T::from_f64_lossy).collect(),
        values_f.into_iter().map(|v| T::from_f64_lossy(v * scale)).collect(),
    )
    .expect("generated cells are valid")
}

/// Generates the members of a family; deterministic in `(spec, seed)`.
pub fn generate<T: Scalar>(spec: &FamilySpec) -> Result<Vec<StepFunction<T>>> {
    let mut out = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let f = match &spec.kind {
            FamilyKind::Char { a, b } => {
                let k = 2f64.powi(i as i32);
                StepFunction::indicator(T::from_f64_lossy(a * k), T::from_f64_lossy(b * k))?
            }
            FamilyKind::Pow { a, level, cutoff: _ } => {
                let b = member_param(&spec.kind, i);
                if b > MAX_CUTOFF {
                    return Err(Error::Grid(format!("cutoff {b} exceeds the {MAX_CUTOFF} cap")));
                }
                let (a, level) = (*a, *level);
                let plateau_end = level.powf(-1.0 / a);
                sample_profile(
                    move |t| if t <= 0.0 { level } else { level.min(t.powf(-a)) },
                    plateau_end,
                    b,
                    spec.ppd,
                )?
            }
            FamilyKind::LogPow { r1, s2, cutoff: _ } => {
                let b = member_param(&spec.kind, i);
                if b > MAX_CUTOFF {
                    return Err(Error::Grid(format!("cutoff {b} exceeds the {MAX_CUTOFF} cap")));
                }
                let (r1, s2) = (*r1, *s2);
                sample_profile(move |t| logpow_profile(t, r1, s2), 1.0, b, spec.ppd)?
            }
            FamilyKind::RandMono { seed } => gen_randmono(seed.wrapping_add(spec.seed).wrapping_add(i as u64)),
            FamilyKind::Step { breaks, values } => StepFunction::new(
                breaks.iter().copied().map(T::from_f64_lossy).collect(),
                values.iter().copied().map(T::from_f64_lossy).collect(),
            )?,
        };
        out.push(f);
    }
    Ok(out)
}

/// `min(1, t^(-1/r1) * ln(e - 1 + t)^(-1/s2))`.
pub fn logpow_profile(t: f64, r1: f64, s2: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let v = t.powf(-1.0 / r1) * (std::f64::consts::E - 1.0 + t).ln().powf(-1.0 / s2);
    v.min(1.0)
}

/// One row of a sweep report.
#[derive(Clone, Debug)]
pub struct SweepRow<T> {
    pub index: usize,
    pub family_param: f64,
    pub norm_domain: T,
    pub norm_target: T,
    pub ratio: T,
}

#[derive(Clone, Debug)]
pub struct SweepReport<T> {
    pub rows: Vec<SweepRow<T>>,
    pub max_ratio: T,
    pub argmax_index: usize,
}

/// For each member `f`: `|| op f ||_Y / || f ||_X`. Empirical sweeps can
/// falsify boundedness through growth along the family parameter; they never
/// certify it — certificates come from the verdict engine only.
pub fn sweep_ratio<T: Scalar>(
    op: OperatorKind,
    x: &LorentzSpec,
    y: &LorentzSpec,
    family: &FamilySpec,
    params: &ParamSet,
) -> Result<SweepReport<T>> {
    if !x.normable() {
        return Err(Error::NonNormable(x.to_string()));
    }
    let members = generate::<T>(family)?;
    if members.is_empty() {
        return Err(Error::DegenerateInput("empty family".into()));
    }
    let mut rows = Vec::with_capacity(members.len());
    let mut max_ratio = T::neg_infinity();
    let mut argmax = 0;
    for (i, f) in members.iter().enumerate() {
        let norm_domain = lorentz_norm(f, x, T::infinity())?;
        let grid = default_output_grid(f, params, family.ppd)?;
        let out = apply(op, f, params, &grid)?;
        let norm_target = out.lorentz_norm(y, T::infinity())?;
        let ratio = norm_target / norm_domain;
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = i;
        }
        rows.push(SweepRow { index: i, family_param: member_param(&family.kind, i), norm_domain, norm_target, ratio });
    }
    Ok(SweepReport { rows, max_ratio, argmax_index: argmax })
}

/// One row of the truncated-norm growth experiment.
#[derive(Clone, Debug)]
pub struct GrowthRow<T> {
    pub t_max: T,
    pub f0_norm: T,
    pub s_norm: T,
    pub loglog_ratio: T,
}

/// For each `T` in `t_list`: the norm of the divergence-witness profile
/// truncated at `B = T` in `L^{r1,s1}`, the truncated norm
/// `|| S f0 ||_{L^{r2,s2}(0,T)}` (with the profile carried out to `B = T^3`
/// so the tail integral is faithful on `(0, T)`), and the latter divided by
/// `ln ln T`.
pub fn growth_experiment<T: Scalar>(
    t_list: &[f64],
    r1: f64,
    s1: f64,
    s2: f64,
    params: &ParamSet,
    ppd: u32,
) -> Result<Vec<GrowthRow<T>>> {
    let r1_exp: crate::exponent::Exponent = exponent_from_f64(r1)?;
    let s1_exp = exponent_from_f64(s1)?;
    let s2_exp = exponent_from_f64(s2)?;
    let r2_exp = crate::params::r1r2_solve(crate::params::Known::R1(r1_exp.clone()), params)?;
    let domain = LorentzSpec::new(r1_exp, s1_exp)?;
    let target = LorentzSpec::new(r2_exp, s2_exp)?;
    let mut rows = Vec::with_capacity(t_list.len());
    for &t_max in t_list {
        if t_max <= std::f64::consts::E {
            return Err(Error::Parameter(format!("t_max = {t_max} must exceed e")));
        }
        let f_near = sample_profile::<T>(|t| logpow_profile(t, r1, s2), 1.0, t_max, ppd)?;
        let f0_norm = lorentz_norm(&f_near, &domain, T::infinity())?;

        let big_b = (t_max.powi(3)).min(MAX_CUTOFF);
        let f_far = sample_profile::<T>(|t| logpow_profile(t, r1, s2), 1.0, big_b, ppd)?;
        let grid = default_output_grid(&f_far, params, ppd)?;
        let out = crate::operators::op_s(&f_far, params, &grid);
        let s_norm = out.lorentz_norm(&target, T::from_f64_lossy(t_max))?;
        let loglog = T::from_f64_lossy(t_max.ln().ln());
        rows.push(GrowthRow { t_max: T::from_f64_lossy(t_max), f0_norm, s_norm, loglog_ratio: s_norm / loglog });
    }
    Ok(rows)
}

fn exponent_from_f64(x: f64) -> Result<crate::exponent::Exponent> {
    if x.is_infinite() {
        return Ok(crate::exponent::Exponent::infinity());
    }
    // experiment exponents are small rationals presented as floats
    for den in 1..=24i64 {
        let num = (x * den as f64).round();
        if (num / den as f64 - x).abs() < 1e-12 && num.abs() < 1e15 {
            return crate::exponent::Exponent::new(num as i64, den);
        }
    }
    Err(Error::Parameter(format!("{x} is not a small rational")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Exponent;
    use crate::params::derive;
    use approx::assert_relative_eq;

    fn ex(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    fn p2224() -> ParamSet {
        derive(ex("2"), ex("2"), ex("2"), ex("2"), ex("4")).unwrap()
    }

    #[test]
    fn parse_family_literals() {
        assert_eq!(FamilyKind::parse("char:0,1").unwrap(), FamilyKind::Char { a: 0.0, b: 1.0 });
        assert_eq!(
            FamilyKind::parse("pow:1/2:1:1e8").unwrap(),
            FamilyKind::Pow { a: 0.5, level: 1.0, cutoff: 1e8 }
        );
        assert_eq!(
            FamilyKind::parse("logpow:3,1,100").unwrap(),
            FamilyKind::LogPow { r1: 3.0, s2: 1.0, cutoff: 100.0 }
        );
        assert_eq!(FamilyKind::parse("randmono:7").unwrap(), FamilyKind::RandMono { seed: 7 });
        assert_eq!(
            FamilyKind::parse("step:1,2;3,1").unwrap(),
            FamilyKind::Step { breaks: vec![1.0, 3.0], values: vec![2.0, 1.0] }
        );
        assert!(FamilyKind::parse("char:1,0").is_err());
        assert!(FamilyKind::parse("blend:1").is_err());
        assert!(FamilyKind::parse("char").is_err());
    }

    #[test]
    fn char_generates_indicators() {
        let spec = FamilySpec::new(FamilyKind::Char { a: 0.0, b: 1.0 }, 1, 0, 32);
        let fs = generate::<f64>(&spec).unwrap();
        assert_eq!(fs[0], StepFunction::indicator(0.0, 1.0).unwrap());
    }

    #[test]
    fn pow_profile_plateaus_then_decays() {
        let spec =
            FamilySpec::new(FamilyKind::Pow { a: 0.5, level: 2.0, cutoff: 100.0 }, 1, 0, 32);
        let f = &generate::<f64>(&spec).unwrap()[0];
        assert_eq!(f.eval(1e-4), 2.0);
        assert_eq!(f.eval(0.1), 2.0);
        // left-endpoint sampling dominates the true profile within one cell ratio
        let true_val = 4.0f64.powf(-0.5);
        let sampled = f.eval(4.0);
        assert!(sampled >= true_val && sampled <= true_val * 10f64.powf(0.5 / 32.0));
        assert_eq!(f.eval(150.0), 0.0);
    }

    #[test]
    fn logpow_plateaus_near_zero() {
        let spec = FamilySpec::new(FamilyKind::LogPow { r1: 3.0, s2: 1.0, cutoff: 1e3 }, 1, 0, 32);
        let f = &generate::<f64>(&spec).unwrap()[0];
        assert_eq!(f.eval(1e-4), 1.0);
        assert_eq!(f.eval(0.5), 1.0);
        assert!(f.eval(100.0) < 0.25);
    }

    #[test]
    fn randmono_is_reproducible_and_decreasing() {
        let spec = FamilySpec::new(FamilyKind::RandMono { seed: 42 }, 2, 0, 32);
        let a = generate::<f64>(&spec).unwrap();
        let b = generate::<f64>(&spec).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        for f in &a {
            let mut prev = f64::INFINITY;
            for v in f.values() {
                assert!(*v <= prev);
                prev = *v;
            }
        }
    }

    #[test]
    fn endpoint_sweep_has_unit_ratios() {
        // || S f ||_inf == || f ||_{q,1} for indicators of any length
        let p = p2224();
        let spec = FamilySpec::new(FamilyKind::Char { a: 0.0, b: 1.0 }, 6, 0, 32);
        let x = LorentzSpec::new(ex("4"), ex("1")).unwrap();
        let y = LorentzSpec::new(ex("inf"), ex("inf")).unwrap();
        let report = sweep_ratio::<f64>(OperatorKind::S, &x, &y, &spec, &p).unwrap();
        for row in &report.rows {
            assert_relative_eq!(row.ratio, 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn bounded_point_sweep_stays_bounded() {
        let p = p2224();
        let spec = FamilySpec::new(FamilyKind::Char { a: 0.0, b: 1.0 }, 6, 0, 32);
        let x = LorentzSpec::new(ex("2"), ex("2")).unwrap();
        let y = LorentzSpec::new(ex("2"), ex("inf")).unwrap();
        let report = sweep_ratio::<f64>(OperatorKind::R, &x, &y, &spec, &p).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for row in &report.rows {
            lo = lo.min(row.ratio);
            hi = hi.max(row.ratio);
        }
        assert!(hi / lo < 10.0, "char ratios spread too much: [{lo}, {hi}]");
    }

    #[test]
    fn unbounded_point_sweep_grows() {
        // s2 < s1 at an interior r1: ratios must increase along B
        let p = p2224();
        let spec = FamilySpec::new(FamilyKind::LogPow { r1: 3.0, s2: 1.0, cutoff: 100.0 }, 4, 0, 32);
        let x = LorentzSpec::new(ex("3"), ex("2")).unwrap();
        let y = LorentzSpec::new(ex("6"), ex("1")).unwrap();
        let report = sweep_ratio::<f64>(OperatorKind::S, &x, &y, &spec, &p).unwrap();
        for w in report.rows.windows(2) {
            assert!(
                w[1].ratio > w[0].ratio,
                "ratios not increasing: {} then {}",
                w[0].ratio,
                w[1].ratio
            );
        }
    }

    #[test]
    fn growth_experiment_smoke() {
        let p = p2224();
        let rows = growth_experiment::<f64>(&[1e2, 1e4], 3.0, 2.0, 1.0, &p, 16).unwrap();
        assert!(rows[1].f0_norm > rows[0].f0_norm);
        assert!(rows[1].s_norm > rows[0].s_norm);
        assert!(rows[0].loglog_ratio.is_finite());
    }
}
