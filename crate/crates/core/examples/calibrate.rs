//! Calibration run for the frozen constants in the acceptance fixtures.
//!
//! Prints the measured extremal ratios for every inequality suite whose
//! constant is empirical. Rerun after corpus changes and compare against
//! `FROZEN_*` in `tests/acceptance.rs`.

use calderon::exponent::Exponent;
use calderon::families::{generate, FamilyKind, FamilySpec};
use calderon::kfunc::{bracket, Couple};
use calderon::lorentz::{downgrade_norm, lorentz_norm};
use calderon::operators::{
    default_output_grid, kint_ratio_profile, op_r, op_y, recovery_exponent, OperatorKind,
};
use calderon::params::{derive, LorentzSpec};
use calderon::rearrange::{maximal, rearrange};
use calderon::stepfn::{make_log_grid, StepFunction};

const INF: f64 = f64::INFINITY;

fn ex(s: &str) -> Exponent {
    s.parse().unwrap()
}

fn spec(p: &str, s: &str) -> LorentzSpec {
    LorentzSpec::new(ex(p), ex(s)).unwrap()
}

fn corpus() -> Vec<StepFunction<f64>> {
    let mut fns = Vec::new();
    for b in [1.0, 2.0, 4.0] {
        fns.push(StepFunction::indicator(0.0, b).unwrap());
    }
    fns.push(StepFunction::indicator(0.5, 3.0).unwrap());
    fns.push(StepFunction::new(vec![0.5, 1.0, 2.5], vec![2.0, 1.5, 0.25]).unwrap());
    fns.push(StepFunction::new(vec![0.1, 0.9, 1.1, 4.0], vec![1.2, 3.0, 0.7, 0.2]).unwrap());
    for kind in [
        FamilyKind::Pow { a: 0.5, level: 2.0, cutoff: 100.0 },
        FamilyKind::Pow { a: 0.25, level: 1.0, cutoff: 50.0 },
    ] {
        fns.extend(generate::<f64>(&FamilySpec::new(kind, 2, 0, 32)).unwrap());
    }
    fns.extend(
        generate::<f64>(&FamilySpec::new(FamilyKind::LogPow { r1: 3.0, s2: 1.0, cutoff: 100.0 }, 1, 0, 32))
            .unwrap(),
    );
    fns.extend(generate::<f64>(&FamilySpec::new(FamilyKind::RandMono { seed: 1 }, 9, 0, 32)).unwrap());
    fns
}

fn right_envelope(f: &StepFunction<f64>) -> StepFunction<f64> {
    let mut values = f.values().to_vec();
    for i in (0..values.len().saturating_sub(1)).rev() {
        values[i] = values[i].max(values[i + 1]);
    }
    StepFunction::new(f.breaks().to_vec(), values).unwrap()
}

fn main() {
    let p1 = derive(ex("2"), ex("2"), ex("2"), ex("2"), ex("4")).unwrap();
    let py = derive(ex("2"), ex("1"), ex("2"), ex("2"), ex("4")).unwrap();
    let fns = corpus();

    // HLP with the Hardy averaging constant p/(p-1): pairs with f** <= g**
    for (pp, ss) in [("2", "2"), ("2", "1"), ("3", "3/2")] {
        let sp = spec(pp, ss);
        let mut max_ratio = 0.0f64;
        let mut pairs = 0;
        let probe = make_log_grid(1e-4, 1e4, 8).unwrap();
        for f in &fns {
            for g in &fns {
                let mf = maximal(f);
                let mg = maximal(g);
                if probe.iter().all(|&t| mf.eval(t) <= mg.eval(t) * (1.0 + 1e-12)) {
                    pairs += 1;
                    let r = lorentz_norm(f, &sp, INF).unwrap() / lorentz_norm(g, &sp, INF).unwrap();
                    max_ratio = max_ratio.max(r);
                }
                // also trial f against f+g (hypothesis automatic)
                let sum = f.add(g);
                pairs += 1;
                let r = lorentz_norm(f, &sp, INF).unwrap() / lorentz_norm(&sum, &sp, INF).unwrap();
                max_ratio = max_ratio.max(r);
            }
        }
        println!("HLP ({pp},{ss}): max ratio {max_ratio:.6} over {pairs} pairs (Hardy constant {})",
            ex(pp).to_f64() / (ex(pp).to_f64() - 1.0));
    }

    // downgrade chain: C1 for q0 <= q1, C2 margin
    for (q0, q1) in [("1", "2"), ("2", "4"), ("1", "inf")] {
        let mut c1 = 0.0f64;
        let mut c2_margin = 0.0f64;
        for x in [spec("3", "2"), spec("5/2", "1"), spec("4", "4"), spec("3", "inf")] {
            for f in &fns {
                let d_hi = downgrade_norm(f, &x, &ex("2"), &ex(q1)).unwrap();
                let d_lo = downgrade_norm(f, &x, &ex("2"), &ex(q0)).unwrap();
                c1 = c1.max(d_hi / d_lo);
                let base = lorentz_norm(f, &x, INF).unwrap();
                c2_margin = c2_margin.max(base / d_hi);
            }
        }
        let q1f = ex(q1).to_f64();
        let c2 = if q1f.is_infinite() { 1.0 } else { (q1f / 2.0).powf(1.0 / q1f).max(1.0) };
        println!("chain q0={q0} q1={q1}: C1 measured {c1:.6}; ||f||/downgrade measured {c2_margin:.6} vs C2 = {c2:.6}");
    }

    // extrapolation domination R_{q1} <= C R_{q0}
    for (ps, q0, q1) in [(&p1, "1", "2"), (&p1, "2", "4"), (&p1, "1", "inf")] {
        let lo = ps.with_q0(ex(q0)).unwrap();
        let hi = match q1 {
            "inf" => derive(ps.p0.clone(), Exponent::infinity(), ps.p1.clone(), Exponent::infinity(), ps.q.clone()).unwrap(),
            _ => ps.with_q0(ex(q1)).unwrap(),
        };
        let mut c = 0.0f64;
        for f in &fns {
            let grid = default_output_grid(f, ps, 32).unwrap();
            let r_lo = op_r(f, &lo, &grid);
            let r_hi = op_r(f, &hi, &grid);
            for &t in grid.points.iter().step_by(3) {
                let denom = r_lo.eval(t);
                if denom > 0.0 {
                    c = c.max(r_hi.eval(t) / denom);
                }
            }
        }
        println!("extrapolation q0={q0} q1={q1}: C measured {c:.6}");
    }

    // claim1: int_0^t w (sup_{y>=s} Yf)^q1 <= C int_0^t w (Yf)*^q1
    {
        let mut c = 0.0f64;
        let q1 = 2.0;
        let a = q1 * 0.5; // q1/p1
        for f in &fns {
            let grid = default_output_grid(f, &py, 32).unwrap();
            let y = op_y(f, &py, &grid).unwrap();
            let env = right_envelope(&y.samples);
            let star = rearrange(&y.samples);
            for &t in make_log_grid(1e-2, 1e2, 2).unwrap().iter() {
                let lhs = env.pow_values(q1).integrate_power(a, 0.0, t).unwrap();
                let rhs = star.pow_values(q1).integrate_power(a, 0.0, t).unwrap();
                if rhs > 0.0 {
                    c = c.max(lhs / rhs);
                }
            }
        }
        println!("claim1 (params 2,1,2,2,4): C measured {c:.6}");
    }

    // supHLP: int_0^t sup_{y>=s} y^alpha h(y) ds <= C int_0^t (x^alpha h)*(s) ds
    {
        let alpha = recovery_exponent(&p1).to_f64();
        let mut c = 0.0f64;
        for f in &fns {
            let h = rearrange(f);
            let lo = h.first_break() * 1e-3;
            let hi = h.support_end();
            let grid = make_log_grid(lo, hi, 64).unwrap();
            let mut breaks = vec![grid[0]];
            let mut values = vec![grid[0].powf(alpha) * h.eval(0.0)];
            for w in grid.windows(2) {
                breaks.push(w[1]);
                values.push(w[0].powf(alpha) * h.eval(w[0]));
            }
            let w_sampled = StepFunction::new(breaks, values).unwrap();
            let env = right_envelope(&w_sampled);
            let star = rearrange(&w_sampled);
            for &t in make_log_grid(1e-2, 1e2, 2).unwrap().iter() {
                let lhs = env.integrate_power(1.0, 0.0, t).unwrap();
                let rhs = star.integrate_power(1.0, 0.0, t).unwrap();
                if rhs > 0.0 {
                    c = c.max(lhs / rhs);
                }
            }
        }
        println!("supHLP (alpha = {alpha}): C measured {c:.6}");
    }

    // kint ratio profiles
    {
        let tgrid = make_log_grid(0.02, 50.0, 4).unwrap();
        for (name, kind, ps) in [
            ("recovery", OperatorKind::Recovery, &p1),
            ("Y(1,2)", OperatorKind::Y, &py),
            ("S1", OperatorKind::S1, &p1),
        ] {
            let mut worst = 0.0f64;
            for f in &fns {
                let grid = default_output_grid(f, ps, 32).unwrap();
                let r = kint_ratio_profile(kind, f, ps, &tgrid, &grid).unwrap();
                worst = worst.max(r);
            }
            println!("kint profile {name}: max over corpus {worst:.6}");
        }
    }

    // K brackets over 20 random monotone functions
    {
        let mono = generate::<f64>(&FamilySpec::new(FamilyKind::RandMono { seed: 5 }, 20, 0, 32)).unwrap();
        let tgrid = make_log_grid(1e-3, 1e3, 2).unwrap();
        for (name, couple) in [
            ("domain", Couple::domain(p1.clone())),
            ("target", Couple::Target { p1: ex("2"), q1: ex("2") }),
        ] {
            for density in [1u32, 2] {
                let (lo, hi) = bracket(&mono, &tgrid, &couple, density).unwrap();
                println!("K bracket {name} density {density}: [{lo:.6}, {hi:.6}] spread {:.4}", hi / lo);
            }
        }
    }

    // params sweep of the norm-reduction ratio || R f || / downgrade
    {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for f in &fns {
            let grid = default_output_grid(f, &p1, 32).unwrap();
            let r_out = op_r(f, &p1, &grid);
            let num = r_out.lorentz_norm(&spec("6", "2"), INF).unwrap();
            let den = downgrade_norm(f, &spec("3", "2"), &ex("2"), &ex("2")).unwrap();
            let ratio = num / den;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        println!("norm reduction (r1=3, r2=6, s2=2): bracket [{lo:.6}, {hi:.6}] spread {:.4}", hi / lo);
    }
}
