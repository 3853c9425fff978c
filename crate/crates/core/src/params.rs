//! Parameter validation, derived exponents and the symbolic boundedness
//! verdict engine for the operators `R` and `S` between Lorentz spaces.
//!
//! Everything in this module is exact rational arithmetic on [`Exponent`]s;
//! no floating point enters a verdict.

use std::fmt;

use crate::error::{Error, Result};
use crate::exponent::Exponent;

/// The validated parameter tuple `(p0, q0, p1, q1, q)` together with the
/// derived quantities used throughout:
///
/// * `r = p0*q / (p1*(q - p0))`
/// * `alpha` with `1/alpha = 1/p0 - 1/q` (so `alpha = r*p1` exactly)
/// * `r1_min = q*p0 / (p1*(q - p0) + p0)`, the smallest admissible domain
///   exponent for `S`
/// * `regime_a`, true iff `p1 <= p0*(q-1)/(q-p0)`, equivalently `r1_min >= 1`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    pub p0: Exponent,
    pub q0: Exponent,
    pub p1: Exponent,
    pub q1: Exponent,
    pub q: Exponent,
    pub r: Exponent,
    pub alpha: Exponent,
    pub r1_min: Exponent,
    pub regime_a: bool,
}

/// Validates `1 < p0 < q < inf`, `p1 in (1, inf)`, `1 <= q0 <= q1 <= inf`
/// and computes the derived exponents.
pub fn derive(
    p0: Exponent,
    q0: Exponent,
    p1: Exponent,
    q1: Exponent,
    q: Exponent,
) -> Result<ParamSet> {
    let one = Exponent::one();
    if p0 <= one {
        return Err(Error::Parameter(format!("p0 = {p0} violates 1 < p0")));
    }
    if p0 >= q {
        return Err(Error::Parameter(format!("p0 = {p0}, q = {q} violates p0 < q")));
    }
    if q.is_infinite() {
        return Err(Error::Parameter("q = inf violates q < inf".into()));
    }
    if p1 <= one {
        return Err(Error::Parameter(format!("p1 = {p1} violates p1 > 1")));
    }
    if p1.is_infinite() {
        return Err(Error::Parameter("p1 = inf violates p1 < inf".into()));
    }
    if q0 < one {
        return Err(Error::Parameter(format!("q0 = {q0} violates q0 >= 1")));
    }
    if q0 > q1 {
        return Err(Error::Parameter(format!("q0 = {q0}, q1 = {q1} violates q0 <= q1")));
    }

    let q_minus_p0 = q.checked_sub(&p0)?;
    let r = p0
        .checked_mul(&q)?
        .checked_div(&p1.checked_mul(&q_minus_p0)?)?;
    // 1/alpha = 1/p0 - 1/q
    let alpha = p0.recip()?.checked_sub(&q.recip()?)?.recip()?;
    debug_assert!(alpha == r.checked_mul(&p1).unwrap(), "alpha must equal r*p1");
    let r1_min = p0.checked_mul(&q)?.checked_div(
        &p1.checked_mul(&q_minus_p0)?.checked_add(&p0)?,
    )?;
    // p1 <= p0*(q-1)/(q-p0)
    let boundary = p0
        .checked_mul(&q.checked_sub(&one)?)?
        .checked_div(&q_minus_p0)?;
    let regime_a = p1 <= boundary;
    debug_assert_eq!(regime_a, r1_min >= one);

    Ok(ParamSet { p0, q0, p1, q1, q, r, alpha, r1_min, regime_a })
}

impl ParamSet {
    /// Recomputes the set with a different `q0` (and `q1 = max(q0, q1)`),
    /// used by the extrapolation comparisons.
    pub fn with_q0(&self, q0: Exponent) -> Result<ParamSet> {
        let q1 = if self.q1 < q0 { q0.clone() } else { self.q1.clone() };
        derive(self.p0.clone(), q0, self.p1.clone(), q1, self.q.clone())
    }
}

/// A Lorentz space label `L^{p,s}(0,inf)` with `p in (0,inf]`, `s in [1,inf]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LorentzSpec {
    pub p: Exponent,
    pub s: Exponent,
}

impl LorentzSpec {
    pub fn new(p: Exponent, s: Exponent) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::Parameter(format!("Lorentz exponent p = {p} must be positive")));
        }
        if s < Exponent::one() {
            return Err(Error::Parameter(format!("Lorentz exponent s = {s} must be >= 1")));
        }
        Ok(LorentzSpec { p, s })
    }

    pub fn of_ints(p: i64, s: i64) -> Self {
        Self::new(Exponent::from_int(p), Exponent::from_int(s)).unwrap()
    }

    /// True iff the spec is equivalent to a rearrangement-invariant space:
    /// `p = s = 1`, or `1 < p < inf` with `s >= 1`, or `p = s = inf`.
    pub fn normable(&self) -> bool {
        let one = Exponent::one();
        (self.p == one && self.s == one)
            || (self.p > one && self.p.is_finite())
            || (self.p.is_infinite() && self.s.is_infinite())
    }
}

impl fmt::Display for LorentzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L^({},{})", self.p, self.s)
    }
}

/// Identifier of the condition a verdict satisfied or violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// The scaling relation `1/q + 1/(r*r2) = 1/r1`.
    R1R2,
    /// `r1 < p0`: the downgraded space is empty, nothing can be bounded.
    Nontriviality,
    RI,
    RII,
    SAI,
    SAII,
    SAIII,
    SBI,
    SBII,
    SBIII,
    CI,
    CII,
    CIII,
}

impl Clause {
    pub fn id(self) -> &'static str {
        match self {
            Clause::R1R2 => "r1r2",
            Clause::Nontriviality => "nontriviality",
            Clause::RI => "R-i",
            Clause::RII => "R-ii",
            Clause::SAI => "S-A-i",
            Clause::SAII => "S-A-ii",
            Clause::SAIII => "S-A-iii",
            Clause::SBI => "S-B-i",
            Clause::SBII => "S-B-ii",
            Clause::SBIII => "S-B-iii",
            Clause::CI => "C-i",
            Clause::CII => "C-ii",
            Clause::CIII => "C-iii",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Outcome of a boundedness test, naming the deciding clause and, when
/// unbounded, the generator family that produces a falsifying growth witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub bounded: bool,
    pub clause: Clause,
    pub witness_family: Option<&'static str>,
}

impl Verdict {
    fn bounded(clause: Clause) -> Self {
        Verdict { bounded: true, clause, witness_family: None }
    }

    fn unbounded(clause: Clause, witness: &'static str) -> Self {
        Verdict { bounded: false, clause, witness_family: Some(witness) }
    }
}

/// Which side of the relation `1/q + 1/(r*r2) = 1/r1` is known.
#[derive(Clone, Debug)]
pub enum Known {
    R1(Exponent),
    R2(Exponent),
}

/// Solves `1/q + 1/(r*r2) = 1/r1` for the missing exponent.
/// `r1 = q` pairs with `r2 = inf` and conversely.
pub fn r1r2_solve(known: Known, params: &ParamSet) -> Result<Exponent> {
    match known {
        Known::R1(r1) => {
            if !r1.is_positive() {
                return Err(Error::NoSolution(format!("r1 = {r1} must be positive")));
            }
            // 1/(r*r2) = 1/r1 - 1/q
            let gap = r1.recip()?.checked_sub(&params.q.recip()?)?;
            if gap.is_negative() {
                return Err(Error::NoSolution(format!(
                    "r1 = {r1} exceeds q = {}; the partner r2 would be negative",
                    params.q
                )));
            }
            if gap.is_zero() {
                return Ok(Exponent::infinity());
            }
            params.r.checked_mul(&gap)?.recip()
        }
        Known::R2(r2) => {
            if !r2.is_positive() {
                return Err(Error::NoSolution(format!("r2 = {r2} must be positive")));
            }
            // 1/r1 = 1/q + 1/(r*r2)
            let rr2 = params.r.checked_mul(&r2)?;
            params.q.recip()?.checked_add(&rr2.recip()?)?.recip()
        }
    }
}

/// True iff `(r1, r2)` satisfies `1/q + 1/(r*r2) = 1/r1` exactly.
pub fn r1r2_holds(r1: &Exponent, r2: &Exponent, params: &ParamSet) -> bool {
    match r1r2_solve(Known::R1(r1.clone()), params) {
        Ok(partner) => partner == *r2,
        Err(_) => false,
    }
}

/// Witness names; see the `families` module for the generators.
const WITNESS_SCALING: &str = "char";
const WITNESS_LOGPOW: &str = "logpow";

fn check_normable(spec: &LorentzSpec) -> Result<()> {
    if spec.normable() {
        Ok(())
    } else {
        Err(Error::NonNormable(spec.to_string()))
    }
}

/// Boundedness of `R` from `domain` to `target`.
///
/// Given the scaling relation, the characterization is: either
/// `r1 = p0, s1 <= q0, s2 = inf`, or `r1 in (p0, q]` with `s1 <= s2`.
pub fn verdict_r(params: &ParamSet, domain: &LorentzSpec, target: &LorentzSpec) -> Result<Verdict> {
    check_normable(domain)?;
    // Below p0 the downgraded representation space is empty, so no target
    // can work; decide before even looking at the target.
    if domain.p < params.p0 {
        return Ok(Verdict::unbounded(Clause::Nontriviality, WITNESS_SCALING));
    }
    check_normable(target)?;
    if !r1r2_holds(&domain.p, &target.p, params) {
        return Ok(Verdict::unbounded(Clause::R1R2, WITNESS_SCALING));
    }
    // The relation now pins r1 in [p0, q].
    if domain.p == params.p0 {
        if domain.s <= params.q0 && target.s.is_infinite() {
            Ok(Verdict::bounded(Clause::RI))
        } else {
            Ok(Verdict::unbounded(Clause::RI, WITNESS_LOGPOW))
        }
    } else {
        debug_assert!(domain.p <= params.q);
        if domain.s <= target.s {
            Ok(Verdict::bounded(Clause::RII))
        } else {
            Ok(Verdict::unbounded(Clause::RII, WITNESS_LOGPOW))
        }
    }
}

/// Boundedness of `S` from `domain` to `target`.
///
/// Two regimes, split by whether `r1_min >= 1`. In regime A the admissible
/// `r1` range is `[r1_min, q]`, in regime B it is `[1, q]`.
pub fn verdict_s(params: &ParamSet, domain: &LorentzSpec, target: &LorentzSpec) -> Result<Verdict> {
    check_normable(domain)?;
    check_normable(target)?;
    if !r1r2_holds(&domain.p, &target.p, params) {
        return Ok(Verdict::unbounded(Clause::R1R2, WITNESS_SCALING));
    }
    let one = Exponent::one();
    let r1 = &domain.p;
    if params.regime_a {
        if *r1 == params.r1_min {
            // partner r2 = 1 here, and normability already forces s2 = 1
            if domain.s == one && target.s == one {
                Ok(Verdict::bounded(Clause::SAI))
            } else {
                Ok(Verdict::unbounded(Clause::SAI, WITNESS_LOGPOW))
            }
        } else if *r1 == params.q {
            if domain.s == one {
                Ok(Verdict::bounded(Clause::SAIII))
            } else {
                Ok(Verdict::unbounded(Clause::SAIII, WITNESS_LOGPOW))
            }
        } else {
            debug_assert!(*r1 > params.r1_min && *r1 < params.q);
            if domain.s <= target.s {
                Ok(Verdict::bounded(Clause::SAII))
            } else {
                Ok(Verdict::unbounded(Clause::SAII, WITNESS_LOGPOW))
            }
        }
    } else if *r1 == one {
        // normable (1, s1) forces s1 = 1, and 1 = s1 <= s2 always holds
        debug_assert!(domain.s == one);
        Ok(Verdict::bounded(Clause::SBI))
    } else if *r1 == params.q {
        if domain.s == one {
            Ok(Verdict::bounded(Clause::SBIII))
        } else {
            Ok(Verdict::unbounded(Clause::SBIII, WITNESS_LOGPOW))
        }
    } else {
        debug_assert!(*r1 > one && *r1 < params.q);
        if domain.s <= target.s {
            Ok(Verdict::bounded(Clause::SBII))
        } else {
            Ok(Verdict::unbounded(Clause::SBII, WITNESS_LOGPOW))
        }
    }
}

/// Simultaneous boundedness of `R` and `S`: the scaling relation plus
/// `r1 = p0, s1 <= q0, s2 = inf`, or `r1 in (p0, q)` with `s1 <= s2`,
/// or `r1 = q` with `s1 = 1`.
pub fn verdict_combined(
    params: &ParamSet,
    domain: &LorentzSpec,
    target: &LorentzSpec,
) -> Result<Verdict> {
    check_normable(domain)?;
    if domain.p < params.p0 {
        return Ok(Verdict::unbounded(Clause::Nontriviality, WITNESS_SCALING));
    }
    check_normable(target)?;
    if !r1r2_holds(&domain.p, &target.p, params) {
        return Ok(Verdict::unbounded(Clause::R1R2, WITNESS_SCALING));
    }
    let r1 = &domain.p;
    if *r1 == params.p0 {
        if domain.s <= params.q0 && target.s.is_infinite() {
            Ok(Verdict::bounded(Clause::CI))
        } else {
            Ok(Verdict::unbounded(Clause::CI, WITNESS_LOGPOW))
        }
    } else if *r1 == params.q {
        if domain.s == Exponent::one() {
            Ok(Verdict::bounded(Clause::CIII))
        } else {
            Ok(Verdict::unbounded(Clause::CIII, WITNESS_LOGPOW))
        }
    } else {
        debug_assert!(*r1 > params.p0 && *r1 < params.q);
        if domain.s <= target.s {
            Ok(Verdict::bounded(Clause::CII))
        } else {
            Ok(Verdict::unbounded(Clause::CII, WITNESS_LOGPOW))
        }
    }
}

/// Decides whether the downgraded space built from `x` over `p0` is
/// nontrivial, i.e. whether `min{1, t^(-1/p0)}` has finite `x`-quasinorm.
/// Symbolically: `p > p0`, or `p = p0` with `s = inf`, or `p = inf`.
pub fn nontrivial_downgrade(x: &LorentzSpec, p0: &Exponent) -> bool {
    x.p > *p0 || (x.p == *p0 && x.s.is_infinite()) || x.p.is_infinite()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    fn spec(p: &str, s: &str) -> LorentzSpec {
        LorentzSpec::new(ex(p), ex(s)).unwrap()
    }

    fn p2224() -> ParamSet {
        derive(ex("2"), ex("2"), ex("2"), ex("2"), ex("4")).unwrap()
    }

    #[test]
    fn derive_2224() {
        let p = p2224();
        assert_eq!(p.r, ex("2"));
        assert_eq!(p.alpha, ex("4"));
        assert_eq!(p.r1_min, ex("4/3"));
        assert!(p.regime_a);
    }

    #[test]
    fn derive_2223() {
        let p = derive(ex("2"), ex("2"), ex("2"), ex("2"), ex("3")).unwrap();
        assert_eq!(p.r, ex("3"));
        assert_eq!(p.alpha, ex("6"));
        assert_eq!(p.r1_min, ex("3/2"));
        assert!(p.regime_a);
    }

    #[test]
    fn derive_rejects_p0_at_least_q() {
        let err = derive(ex("4"), ex("1"), ex("2"), ex("1"), ex("3")).unwrap_err();
        assert!(matches!(err, Error::Parameter(ref m) if m.contains("p0 < q")));
    }

    #[test]
    fn derive_reports_each_bound() {
        assert!(derive(ex("1"), ex("1"), ex("2"), ex("1"), ex("3")).is_err());
        assert!(derive(ex("2"), ex("1"), ex("1"), ex("1"), ex("3")).is_err());
        assert!(derive(ex("2"), ex("1"), ex("inf"), ex("1"), ex("3")).is_err());
        assert!(derive(ex("2"), ex("2"), ex("2"), ex("1"), ex("3")).is_err());
        assert!(derive(ex("2"), ex("1/2"), ex("2"), ex("1"), ex("3")).is_err());
        assert!(derive(ex("2"), ex("1"), ex("2"), ex("1"), ex("inf")).is_err());
    }

    #[test]
    fn alpha_equals_r_times_p1_across_sets() {
        for (p0, q0, p1, q1, q) in [
            ("2", "2", "2", "2", "4"),
            ("3/2", "1", "3", "2", "2"),
            ("2", "1", "8", "3", "3"),
            ("4", "2", "2", "3", "8"),
            ("5/4", "3/2", "7/2", "inf", "11/3"),
        ] {
            let p = derive(ex(p0), ex(q0), ex(p1), ex(q1), ex(q)).unwrap();
            assert_eq!(p.alpha, p.r.checked_mul(&p.p1).unwrap());
        }
    }

    #[test]
    fn r1r2_examples() {
        let p = p2224();
        assert_eq!(r1r2_solve(Known::R1(ex("2")), &p).unwrap(), ex("2"));
        assert_eq!(r1r2_solve(Known::R1(ex("4")), &p).unwrap(), Exponent::infinity());
        assert_eq!(r1r2_solve(Known::R1(ex("3")), &p).unwrap(), ex("6"));
        assert_eq!(r1r2_solve(Known::R2(Exponent::infinity()), &p).unwrap(), ex("4"));
        assert!(r1r2_solve(Known::R1(ex("5")), &p).is_err());
    }

    #[test]
    fn r1r2_solve_is_an_involution() {
        let p = p2224();
        for k in 24..=48 {
            let r1 = Exponent::new(k, 12).unwrap();
            let r2 = r1r2_solve(Known::R1(r1.clone()), &p).unwrap();
            assert_eq!(r1r2_solve(Known::R2(r2), &p).unwrap(), r1);
        }
    }

    #[test]
    fn verdict_r_examples() {
        let p = p2224();
        let v = verdict_r(&p, &spec("2", "2"), &spec("2", "inf")).unwrap();
        assert!(v.bounded);
        assert_eq!(v.clause, Clause::RI);

        let v = verdict_r(&p, &spec("3", "2"), &spec("6", "1")).unwrap();
        assert!(!v.bounded);
        assert_eq!(v.clause, Clause::RII);

        let v = verdict_r(&p, &spec("3", "2"), &spec("5", "3")).unwrap();
        assert!(!v.bounded);
        assert_eq!(v.clause, Clause::R1R2);
    }

    #[test]
    fn verdict_r_below_p0_is_always_unbounded() {
        let p = p2224();
        for (r1, s1) in [("3/2", "1"), ("7/4", "2"), ("5/4", "inf")] {
            let r2 = r1r2_solve(Known::R1(ex(r1)), &p).unwrap();
            let v = verdict_r(&p, &spec(r1, s1), &LorentzSpec::new(r2, ex("2")).unwrap()).unwrap();
            assert!(!v.bounded);
            assert_eq!(v.clause, Clause::Nontriviality);
        }
    }

    #[test]
    fn verdict_s_examples() {
        let p = p2224();
        let v = verdict_s(&p, &spec("4/3", "1"), &spec("1", "1")).unwrap();
        assert!(v.bounded);
        assert_eq!(v.clause, Clause::SAI);

        let v = verdict_s(&p, &spec("3", "2"), &spec("6", "1")).unwrap();
        assert!(!v.bounded);
        assert_eq!(v.witness_family, Some("logpow"));

        let v = verdict_s(&p, &spec("4", "1"), &spec("inf", "inf")).unwrap();
        assert!(v.bounded);
        assert_eq!(v.clause, Clause::SAIII);
    }

    #[test]
    fn verdict_s_regime_b() {
        // p1 = 8 > p0(q-1)/(q-p0) = 4, so r1_min = 3/5 < 1
        let p = derive(ex("2"), ex("1"), ex("8"), ex("3"), ex("3")).unwrap();
        assert!(!p.regime_a);
        assert_eq!(p.r1_min, ex("3/5"));
        let r2 = r1r2_solve(Known::R1(ex("1")), &p).unwrap();
        assert_eq!(r2, ex("2"));
        let v = verdict_s(&p, &spec("1", "1"), &spec("2", "4")).unwrap();
        assert!(v.bounded);
        assert_eq!(v.clause, Clause::SBI);
    }

    #[test]
    fn verdict_combined_examples() {
        let p = p2224();
        let v = verdict_combined(&p, &spec("2", "2"), &spec("2", "inf")).unwrap();
        assert!(v.bounded);
        assert_eq!(v.clause, Clause::CI);

        let v = verdict_combined(&p, &spec("3", "2"), &spec("6", "3")).unwrap();
        assert!(v.bounded);
        assert_eq!(v.clause, Clause::CII);

        let v = verdict_combined(&p, &spec("4", "2"), &spec("inf", "inf")).unwrap();
        assert!(!v.bounded);
        assert_eq!(v.clause, Clause::CIII);
    }

    #[test]
    fn verdicts_reject_non_normable_specs() {
        let p = p2224();
        let bad = LorentzSpec::new(ex("1"), ex("2")).unwrap();
        assert!(matches!(
            verdict_r(&p, &bad, &spec("2", "inf")),
            Err(Error::NonNormable(_))
        ));
        assert!(matches!(
            verdict_s(&p, &spec("2", "2"), &LorentzSpec::new(ex("inf"), ex("2")).unwrap()),
            Err(Error::NonNormable(_))
        ));
    }

    #[test]
    fn nontrivial_downgrade_examples() {
        let p0 = ex("2");
        assert!(nontrivial_downgrade(&spec("2", "inf"), &p0));
        assert!(!nontrivial_downgrade(&spec("2", "2"), &p0));
        assert!(nontrivial_downgrade(&spec("3", "1"), &p0));
        assert!(nontrivial_downgrade(&spec("inf", "inf"), &p0));
        assert!(!nontrivial_downgrade(&spec("3/2", "1"), &p0));
    }
}
