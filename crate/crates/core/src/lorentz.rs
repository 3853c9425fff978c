//! Lorentz quasinorms, truncated norms, the downgraded functional and the
//! fundamental function.
//!
//! Norms of step functions are exact (closed-form cell sums). The downgraded
//! functional keeps the inner profile
//! `g(t) = t^(-1/p0) * (int_0^t s^(q0/p0 - 1) f*(s)^q0 ds)^(1/q0)`
//! in exact piecewise-power form: on each cell of `f*` one has
//! `g(t)^q0 = A t^(-e) + B` with `e = q0/p0`, so weighted suprema have
//! closed-form critical points and only the genuinely transcendental
//! integrals fall back to panel quadrature.

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::params::{nontrivial_downgrade, LorentzSpec};
use crate::rearrange::rearrange;
use crate::scalar::Scalar;
use crate::stepfn::StepFunction;
use crate::DEFAULT_PPD;

/// `|| f ||_{L^{p,s}(0, upto)}`; pass `T::infinity()` for the full norm.
///
/// For `s < inf` this is `(int_0^upto t^(s/p - 1) f*(t)^s dt)^(1/s)`, exact
/// on step functions; for `s = inf` it is `sup t^(1/p) f*(t)`, also exact
/// (and `f*(0+)` when `p = s = inf`).
pub fn lorentz_norm<T: Scalar>(f: &StepFunction<T>, spec: &LorentzSpec, upto: T) -> Result<T> {
    let fstar = rearrange(f);
    lorentz_norm_decreasing(&fstar, spec, upto)
}

/// Same as [`lorentz_norm`] but trusting that `f` is already non-increasing.
pub fn lorentz_norm_decreasing<T: Scalar>(
    f: &StepFunction<T>,
    spec: &LorentzSpec,
    upto: T,
) -> Result<T> {
    let inv_p: T = spec.p.recip().map_err(|e| Error::Parameter(e.to_string()))?.to_scalar();
    if spec.s.is_infinite() {
        return Ok(f.sup_power(inv_p, T::zero(), upto));
    }
    let s: T = spec.s.to_scalar();
    let a = s * inv_p;
    let integral = f.pow_values(s).integrate_power(a, T::zero(), upto)?;
    Ok(integral.powf(s.recip()))
}

/// Norm of the indicator of a set of measure `t`, in closed form:
/// `(p/s)^(1/s) t^(1/p)` for `s < inf`, `t^(1/p)` for `s = inf`.
pub fn fundamental<T: Scalar>(spec: &LorentzSpec, t: T) -> T {
    if t <= T::zero() {
        return T::zero();
    }
    let inv_p: T = spec.p.recip().expect("p > 0").to_scalar();
    if spec.s.is_infinite() {
        return t.powf(inv_p);
    }
    if spec.p.is_infinite() {
        // int_0^t u^(-1) du diverges
        return T::infinity();
    }
    let p: T = spec.p.to_scalar();
    let s: T = spec.s.to_scalar();
    (p / s).powf(s.recip()) * t.powf(inv_p)
}

#[derive(Clone, Copy, Debug)]
enum PieceForm<T> {
    /// `g(t)^q0 = a * t^(-e) + b` (the `q0 < inf` branch).
    Mixed { a: T, b: T },
    /// `g(t) = coeff * t^exp` (pure power, exact everywhere).
    Power { coeff: T, exp: T },
}

#[derive(Clone, Copy, Debug)]
struct Piece<T> {
    lo: T,
    hi: T,
    form: PieceForm<T>,
}

/// Exact piecewise representation of the downgrade profile of `f`.
#[derive(Clone, Debug)]
pub struct DowngradeProfile<T> {
    pieces: Vec<Piece<T>>,
    /// `q0/p0` (only meaningful for the integral branch).
    e: T,
    /// `q0` as a scalar, `inf` for the supremum branch.
    q0: T,
    inv_p0: T,
}

/// Builds the profile `g` for the pair `(p0, q0)`.
///
/// `q0 < inf`: on each cell of `f*` the running integral is `A' + B' t^e`,
/// so `g^q0 = A t^(-e) + B` with `A >= 0` (monotonicity of `f*`), and `g` is
/// non-increasing. `q0 = inf`: `g(t) = t^(-1/p0) sup_{s<=t} s^(1/p0) f*(s)`
/// splits into pure-power pieces at the points where the running supremum
/// changes regime.
pub fn downgrade_profile<T: Scalar>(
    f: &StepFunction<T>,
    p0: &Exponent,
    q0: &Exponent,
) -> DowngradeProfile<T> {
    let fstar = rearrange(f);
    let inv_p0: T = p0.recip().expect("p0 > 1").to_scalar();
    if q0.is_infinite() {
        let mut pieces = Vec::new();
        let mut running = T::zero(); // sup of s^(1/p0) f*(s) so far
        for (lo, hi, v) in fstar.cells() {
            let cand_hi = v * hi.powf(inv_p0);
            if cand_hi <= running || v == T::zero() {
                // the old supremum dominates throughout
                pieces.push(Piece { lo, hi, form: PieceForm::Power { coeff: running, exp: -inv_p0 } });
            } else {
                let cand_lo = v * lo.powf(inv_p0);
                if cand_lo >= running {
                    // the new candidate dominates throughout: g = v
                    pieces.push(Piece { lo, hi, form: PieceForm::Power { coeff: v, exp: T::zero() } });
                } else {
                    let cross = (running / v).powf(T::one() / inv_p0);
                    pieces.push(Piece { lo, hi: cross, form: PieceForm::Power { coeff: running, exp: -inv_p0 } });
                    pieces.push(Piece { lo: cross, hi, form: PieceForm::Power { coeff: v, exp: T::zero() } });
                }
                running = cand_hi;
            }
        }
        pieces.push(Piece {
            lo: fstar.support_end(),
            hi: T::infinity(),
            form: PieceForm::Power { coeff: running, exp: -inv_p0 },
        });
        return DowngradeProfile { pieces, e: T::zero(), q0: T::infinity(), inv_p0 };
    }

    let q0s: T = q0.to_scalar();
    let e = q0s * inv_p0;
    let mut pieces = Vec::new();
    let mut acc = T::zero(); // I(lo) at the cell start
    for (lo, hi, v) in fstar.cells() {
        let b = v.powf(q0s) / e;
        let a = acc - b * lo.powf(e);
        pieces.push(Piece { lo, hi, form: PieceForm::Mixed { a, b } });
        acc = a + b * hi.powf(e);
    }
    pieces.push(Piece {
        lo: fstar.support_end(),
        hi: T::infinity(),
        form: PieceForm::Mixed { a: acc, b: T::zero() },
    });
    DowngradeProfile { pieces, e, q0: q0s, inv_p0 }
}

impl<T: Scalar> DowngradeProfile<T> {
    /// Exact point evaluation of `g`.
    pub fn eval(&self, t: T) -> T {
        assert!(t > T::zero());
        for p in &self.pieces {
            if t >= p.hi {
                continue;
            }
            return match p.form {
                PieceForm::Power { coeff, exp } => coeff * t.powf(exp),
                PieceForm::Mixed { a, b } => {
                    let inner = if a == T::zero() { b } else { a * t.powf(-self.e) + b };
                    inner.powf(self.q0.recip())
                }
            };
        }
        unreachable!("pieces tile (0, inf)")
    }

    /// Limit value `g(0+)`.
    pub fn head_value(&self) -> T {
        match self.pieces[0].form {
            PieceForm::Power { coeff, exp } => {
                if exp == T::zero() {
                    coeff
                } else {
                    T::zero()
                }
            }
            PieceForm::Mixed { b, .. } => b.powf(self.q0.recip()),
        }
    }

    /// `|| g ||` in the Lorentz spec `x`; suprema are exact, integrals use
    /// Gauss panels at `ppd` panels per decade on the mixed pieces only.
    pub fn norm(&self, x: &LorentzSpec, ppd: u32) -> Result<T> {
        let inv_p: T = x.p.recip().map_err(|e| Error::Parameter(e.to_string()))?.to_scalar();
        if x.s.is_infinite() {
            let mut best = T::zero();
            for p in &self.pieces {
                best = best.max(self.piece_sup(p, inv_p));
            }
            return Ok(best);
        }
        if x.p.is_infinite() {
            return Err(Error::DivergentIntegral(
                "integral-form norm with p = inf diverges at the origin".into(),
            ));
        }
        let s: T = x.s.to_scalar();
        let gamma = s * inv_p;
        let mut total = T::zero();
        for p in &self.pieces {
            total = total + self.piece_integral(p, gamma, s, ppd)?;
            if total.is_infinite() {
                return Ok(T::infinity());
            }
        }
        Ok(total.powf(s.recip()))
    }

    /// sup over the piece of `t^(1/p) g(t)`.
    fn piece_sup(&self, p: &Piece<T>, inv_p: T) -> T {
        match p.form {
            PieceForm::Power { coeff, exp } => {
                let k = exp + inv_p;
                if coeff == T::zero() {
                    T::zero()
                } else if k > T::zero() {
                    if p.hi.is_infinite() {
                        T::infinity()
                    } else {
                        coeff * p.hi.powf(k)
                    }
                } else if k == T::zero() {
                    coeff
                } else if p.lo == T::zero() {
                    T::infinity()
                } else {
                    coeff * p.lo.powf(k)
                }
            }
            PieceForm::Mixed { a, b } => {
                // maximize G(t) = a t^(b1) + b t^(b2), b1 = q0/p - e, b2 = q0/p
                let b2 = self.q0 * inv_p;
                let b1 = b2 - self.e;
                let eval = |t: T| -> T {
                    if t == T::zero() {
                        // head piece has a = 0; b2 >= 0
                        if b2 == T::zero() {
                            b
                        } else {
                            T::zero()
                        }
                    } else if t.is_infinite() {
                        if b == T::zero() {
                            if b1 < T::zero() {
                                T::zero()
                            } else if b1 == T::zero() {
                                a
                            } else {
                                T::infinity()
                            }
                        } else if b2 > T::zero() {
                            T::infinity()
                        } else {
                            b
                        }
                    } else {
                        a * t.powf(b1) + b * t.powf(b2)
                    }
                };
                let mut best = eval(p.lo).max(eval(p.hi));
                if a > T::zero() && b > T::zero() && b1 < T::zero() && b2 > T::zero() {
                    let t_crit = (-(b1 * a) / (b2 * b)).powf(self.e.recip());
                    if t_crit > p.lo && t_crit < p.hi {
                        best = best.max(eval(t_crit));
                    }
                }
                best.powf(self.q0.recip())
            }
        }
    }

    /// `int over the piece of t^(gamma - 1) g(t)^s dt`.
    fn piece_integral(&self, p: &Piece<T>, gamma: T, s: T, ppd: u32) -> Result<T> {
        let power_part = |coeff: T, exp: T| -> T {
            // int t^(gamma - 1 + s*exp) * coeff^s
            let k = gamma + s * exp;
            if coeff == T::zero() {
                return T::zero();
            }
            let c = coeff.powf(s);
            if p.hi.is_infinite() {
                if k < T::zero() {
                    -c * p.lo.powf(k) / k
                } else {
                    T::infinity()
                }
            } else if k == T::zero() {
                c * (p.hi / p.lo).ln()
            } else {
                let lo_pow = if p.lo == T::zero() {
                    if k > T::zero() {
                        T::zero()
                    } else {
                        return T::infinity();
                    }
                } else {
                    p.lo.powf(k)
                };
                c * (p.hi.powf(k) - lo_pow) / k
            }
        };
        match p.form {
            PieceForm::Power { coeff, exp } => Ok(power_part(coeff, exp)),
            PieceForm::Mixed { a, b } => {
                let sigma = s / self.q0;
                if a == T::zero() {
                    // g^s = b^sigma, a pure power with exponent 0
                    return Ok(power_part(b.powf(self.q0.recip()), T::zero()));
                }
                if b == T::zero() {
                    // g = a^(1/q0) t^(-1/p0)
                    return Ok(power_part(a.powf(self.q0.recip()), -self.inv_p0));
                }
                // transcendental piece: Gauss panels in log t
                let phi = |t: T| t.powf(gamma - T::one()) * (a * t.powf(-self.e) + b).powf(sigma);
                Ok(gauss_log_panels(p.lo, p.hi, ppd, phi))
            }
        }
    }
}

/// 2-point Gauss-Legendre on log-uniform panels between `lo` and `hi`.
pub(crate) fn gauss_log_panels<T: Scalar>(lo: T, hi: T, ppd: u32, f: impl Fn(T) -> T) -> T {
    debug_assert!(lo > T::zero() && hi > lo && hi.is_finite());
    let decades = (hi / lo).log10().to_f64().unwrap();
    let n = ((decades * ppd as f64).ceil() as usize).max(1);
    let ratio = (hi / lo).powf(T::from_f64_lossy(1.0 / n as f64));
    let node = T::from_f64_lossy(1.0 / 3.0f64.sqrt());
    let half = T::from_f64_lossy(0.5);
    let mut total = T::zero();
    let mut a = lo;
    for i in 0..n {
        let b = if i + 1 == n { hi } else { a * ratio };
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        total = total + rad * (f(mid - rad * node) + f(mid + rad * node));
        a = b;
    }
    total
}

/// The downgraded functional `|| f ||` built from the profile `g` measured
/// in `x`. Errors with `TrivialSpace` when the downgraded space is `{0}` for
/// these parameters, and rejects non-normable `x`.
pub fn downgrade_norm<T: Scalar>(
    f: &StepFunction<T>,
    x: &LorentzSpec,
    p0: &Exponent,
    q0: &Exponent,
) -> Result<T> {
    downgrade_norm_ppd(f, x, p0, q0, DEFAULT_PPD)
}

pub fn downgrade_norm_ppd<T: Scalar>(
    f: &StepFunction<T>,
    x: &LorentzSpec,
    p0: &Exponent,
    q0: &Exponent,
    ppd: u32,
) -> Result<T> {
    if !x.normable() {
        return Err(Error::NonNormable(x.to_string()));
    }
    if !nontrivial_downgrade(x, p0) {
        return Err(Error::TrivialSpace(format!(
            "min(1, t^(-1/{p0})) has no finite {x} norm"
        )));
    }
    if f.is_zero() {
        return Ok(T::zero());
    }
    downgrade_profile(f, p0, q0).norm(x, ppd)
}
