//! Deterministic invariant battery behind the CLI `selftest` subcommand.
//!
//! Each check is a named closure returning `Ok(())` or a failure message;
//! the list and its order are fixed so two runs print identical output.

use crate::exponent::Exponent;
use crate::families::{generate, FamilyKind, FamilySpec};
use crate::kfunc::{bracket, holmstedt_domain, Couple};
use crate::lorentz::{downgrade_norm, fundamental, lorentz_norm};
use crate::operators::{
    default_output_grid, kint_ratio_profile, op_r, op_s, op_y, OperatorKind,
};
use crate::params::{
    derive, nontrivial_downgrade, r1r2_solve, verdict_combined, verdict_r, verdict_s, Known,
    LorentzSpec, ParamSet,
};
use crate::rearrange::{distribution, maximal, rearrange};
use crate::stepfn::{make_log_grid, StepFunction};

pub struct Check {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

fn ex(s: &str) -> Exponent {
    s.parse().unwrap()
}

fn p2224() -> ParamSet {
    derive(ex("2"), ex("2"), ex("2"), ex("2"), ex("4")).unwrap()
}

fn spec(p: &str, s: &str) -> LorentzSpec {
    LorentzSpec::new(ex(p), ex(s)).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> Result<(), String> {
    let scale = a.abs().max(b.abs()).max(1e-300);
    if (a - b).abs() / scale <= tol {
        Ok(())
    } else {
        Err(format!("{a} vs {b} (rel err {:.3e})", (a - b).abs() / scale))
    }
}

fn corpus() -> Vec<StepFunction<f64>> {
    let mut fns = vec![
        StepFunction::indicator(0.0, 1.0).unwrap(),
        StepFunction::indicator(0.25, 3.0).unwrap(),
        StepFunction::new(vec![0.5, 1.0, 2.5], vec![2.0, 1.5, 0.25]).unwrap(),
    ];
    fns.extend(
        generate::<f64>(&FamilySpec::new(FamilyKind::RandMono { seed: 11 }, 3, 0, 32)).unwrap(),
    );
    fns
}

/// Runs the battery at the given grid density.
pub fn run(ppd: u32) -> Vec<Check> {
    let p = p2224();
    let inf = f64::INFINITY;
    let mut checks = Vec::new();
    let mut push = |name: &'static str, outcome: Result<(), String>| {
        checks.push(Check { name, outcome });
    };

    push("exponent: alpha = r*p1", {
        let sets = [("2", "2", "2", "2", "4"), ("3/2", "1", "3", "2", "2"), ("2", "1", "8", "3", "3")];
        sets.iter()
            .try_for_each(|(p0, q0, p1, q1, q)| {
                let ps = derive(ex(p0), ex(q0), ex(p1), ex(q1), ex(q))
                    .map_err(|e| e.to_string())?;
                if ps.alpha == ps.r.checked_mul(&ps.p1).unwrap() {
                    Ok(())
                } else {
                    Err(format!("alpha {} != r*p1", ps.alpha))
                }
            })
    });

    push("exponent: r1r2 involution on a rational lattice", {
        (24..=48)
            .try_for_each(|k| {
                let r1 = Exponent::new(k, 12).unwrap();
                let r2 = r1r2_solve(Known::R1(r1.clone()), &p).map_err(|e| e.to_string())?;
                let back = r1r2_solve(Known::R2(r2), &p).map_err(|e| e.to_string())?;
                if back == r1 {
                    Ok(())
                } else {
                    Err(format!("involution failed at {r1}"))
                }
            })
    });

    push("verdict: combined equals R and S on a lattice", {
        let mut checked = 0usize;
        let mut res = Ok(());
        'outer: for k in 24..=48 {
            let r1 = Exponent::new(k, 12).unwrap();
            let Ok(r2) = r1r2_solve(Known::R1(r1.clone()), &p) else { continue };
            for s1 in ["1", "3/2", "2", "inf"] {
                for s2 in ["1", "2", "inf"] {
                    let d = LorentzSpec::new(r1.clone(), ex(s1)).unwrap();
                    let t = LorentzSpec::new(r2.clone(), ex(s2)).unwrap();
                    match (verdict_combined(&p, &d, &t), verdict_r(&p, &d, &t), verdict_s(&p, &d, &t)) {
                        (Ok(c), Ok(r), Ok(s)) => {
                            checked += 1;
                            if c.bounded != (r.bounded && s.bounded) {
                                res = Err(format!("mismatch at r1={r1} s1={s1} s2={s2}"));
                                break 'outer;
                            }
                        }
                        (Err(_), Err(_), Err(_)) => {}
                        _ => {
                            res = Err(format!("inconsistent errors at r1={r1} s1={s1} s2={s2}"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        res.and(if checked > 100 { Ok(()) } else { Err("lattice too small".into()) })
    });

    push("verdict: tabled clauses reproduce", {
        let cases = || -> Result<(), String> {
            let v = verdict_r(&p, &spec("2", "2"), &spec("2", "inf")).map_err(|e| e.to_string())?;
            if !(v.bounded && v.clause.id() == "R-i") {
                return Err("R (2,2)->(2,inf)".into());
            }
            let v = verdict_s(&p, &spec("4/3", "1"), &spec("1", "1")).map_err(|e| e.to_string())?;
            if !(v.bounded && v.clause.id() == "S-A-i") {
                return Err("S (4/3,1)->(1,1)".into());
            }
            let v = verdict_combined(&p, &spec("4", "2"), &spec("inf", "inf"))
                .map_err(|e| e.to_string())?;
            if v.bounded {
                return Err("combined (4,2) should be unbounded".into());
            }
            Ok(())
        };
        cases()
    });

    push("stepfn: truncation pair reassembles", {
        corpus().iter().try_for_each(|f| {
            for c in [0.1, 0.5, 1.0, 2.0] {
                if f.truncate_level(c).add(&f.excess(c)).max_abs_diff(f) != 0.0 {
                    return Err("split/reassemble mismatch".into());
                }
            }
            Ok(())
        })
    });

    push("rearrange: equimeasurability", {
        corpus().iter().try_for_each(|f| {
            let fs = rearrange(f);
            for lam in [0.0, 0.2, 0.9, 1.7] {
                if (distribution(f, lam) - distribution(&fs, lam)).abs() > 1e-12 {
                    return Err(format!("distribution mismatch at lam={lam}"));
                }
            }
            Ok(())
        })
    });

    push("rearrange: f* below f**", {
        corpus().iter().try_for_each(|f| {
            let m = maximal(f);
            for t in [0.1, 0.7, 1.9, 5.0] {
                if m.star().eval(t) > m.eval(t) + 1e-12 {
                    return Err(format!("f* above f** at t={t}"));
                }
            }
            Ok(())
        })
    });

    push("lorentz: indicator norm matches fundamental", {
        [("2", "2"), ("4", "1"), ("3", "inf")].iter().try_for_each(|(pp, ss)| {
            let sp = spec(pp, ss);
            let chi = StepFunction::indicator(0.0, 2.5).unwrap();
            close(lorentz_norm(&chi, &sp, inf).unwrap(), fundamental(&sp, 2.5), 1e-12)
        })
    });

    push("lorentz: downgrade at (p0, inf) recovers the (p0, q0) norm", {
        corpus().iter().try_for_each(|f| {
            let lhs = downgrade_norm(f, &spec("2", "inf"), &ex("2"), &ex("2"))
                .map_err(|e| e.to_string())?;
            let rhs = lorentz_norm(f, &spec("2", "2"), inf).unwrap();
            close(lhs, rhs, 1e-10)
        })
    });

    push("lorentz: nontriviality matches the symbolic rule", {
        if nontrivial_downgrade(&spec("2", "2"), &ex("2")) {
            Err("(2,2) over p0=2 must be trivial".into())
        } else if !nontrivial_downgrade(&spec("3", "1"), &ex("2")) {
            Err("(3,1) over p0=2 must be nontrivial".into())
        } else {
            Ok(())
        }
    });

    push("operators: S endpoint identity", {
        corpus().iter().try_for_each(|f| {
            let grid = default_output_grid(f, &p, ppd).unwrap();
            let s = op_s(f, &p, &grid);
            let rhs = lorentz_norm(f, &spec("4", "1"), inf).unwrap();
            close(s.eval(0.0), rhs, 1e-10)
        })
    });

    push("operators: Fubini identity for S", {
        corpus().iter().try_for_each(|f| {
            let grid = default_output_grid(f, &p, ppd).unwrap();
            let lhs = op_s(f, &p, &grid).integrate().unwrap();
            let rhs = lorentz_norm(f, &spec("4/3", "1"), inf).unwrap();
            close(lhs, rhs, 1e-6)
        })
    });

    push("operators: holmstedt consistency", {
        corpus().iter().try_for_each(|f| {
            let grid = default_output_grid(f, &p, ppd).unwrap();
            let r = op_r(f, &p, &grid);
            let s = op_s(f, &p, &grid);
            for t in make_log_grid(0.1, 10.0, 4).unwrap() {
                let lhs = holmstedt_domain(f, t, &p);
                let rhs = t * (r.eval(t * t) + s.eval(t * t));
                close(lhs, rhs, 1e-10)?;
            }
            Ok(())
        })
    });

    push("operators: Y degenerates to R at q1 = inf", {
        let pd = derive(ex("2"), ex("1"), ex("2"), ex("inf"), ex("4")).unwrap();
        corpus().iter().try_for_each(|f| {
            let grid = default_output_grid(f, &pd, ppd).unwrap();
            let y = op_y(f, &pd, &grid).map_err(|e| e.to_string())?;
            let r = op_r(f, &pd, &grid);
            for &t in grid.points.iter().step_by(7) {
                if (y.eval(t) - r.eval(t)).abs() > 2.0 * f64::EPSILON * r.eval(t).max(1e-300) {
                    return Err(format!("Y != R at t={t}"));
                }
            }
            Ok(())
        })
    });

    push("operators: extrapolation domination R_q1 <= C R_q0", {
        let p_lo = p.with_q0(ex("1")).unwrap();
        corpus().iter().try_for_each(|f| {
            let grid = default_output_grid(f, &p, ppd).unwrap();
            let hi = op_r(f, &p, &grid);
            let lo = op_r(f, &p_lo, &grid);
            for &t in grid.points.iter().step_by(5) {
                if hi.eval(t) > 1.0000001 * lo.eval(t) + 1e-14 {
                    return Err(format!("domination failed at t={t}"));
                }
            }
            Ok(())
        })
    });

    push("kfunc: oracle within a factor-100 bracket of holmstedt", {
        (|| {
            let tgrid = make_log_grid(1e-2, 1e2, 3).unwrap();
            let fns = corpus();
            let couple = Couple::Target { p1: ex("2"), q1: ex("2") };
            let (lo, hi) = bracket(&fns, &tgrid, &couple, 1).map_err(|e| e.to_string())?;
            if hi / lo < 100.0 {
                Ok(())
            } else {
                Err(format!("target bracket too wide: [{lo}, {hi}]"))
            }
        })()
    });

    push("kfunc: kint ratio profile finite", {
        (|| {
            let tgrid = make_log_grid(0.05, 20.0, 6).unwrap();
            let f = StepFunction::indicator(0.0, 1.0).unwrap();
            let grid = default_output_grid(&f, &p, ppd).unwrap();
            let ratio: f64 = kint_ratio_profile(OperatorKind::Recovery, &f, &p, &tgrid, &grid)
                .map_err(|e| e.to_string())?;
            if ratio.is_finite() && ratio > 0.0 {
                Ok(())
            } else {
                Err(format!("ratio {ratio}"))
            }
        })()
    });

    push("families: growth experiment trends", {
        (|| {
            let rows =
                crate::families::growth_experiment::<f64>(&[1e2, 1e4], 3.0, 2.0, 1.0, &p, 16)
                    .map_err(|e| e.to_string())?;
            if rows[1].s_norm > rows[0].s_norm && rows[1].f0_norm > rows[0].f0_norm {
                Ok(())
            } else {
                Err("expected strict growth".into())
            }
        })()
    });

    checks
}
