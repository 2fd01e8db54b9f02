//! The one-shot verification suite behind `hyperstep verify`.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use hyperstep::heun::{heun_residual_grid, probe_grid};
use hyperstep::specfun::{gamma, hyp2f1, hyp2f1_deriv, hyp2f1_via, is_pole, sin_pi, Path};
use hyperstep::{
    heun_from_context, make_context, richardson_t, residual_of, transmission, transmission_from_amplitudes,
    transmission_step, wavefunction, BarrierParams, Complex64, GridSpec, HeunParams,
};
use rand::{rngs::StdRng, Rng, SeedableRng};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Test hook: added to the accessory parameter q of every Heun
    /// parameter set the suite builds.
    pub tamper_q: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value and the bound it was held to.
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4}  {:<40} {:<44} {:>8.2}s",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Outcome = (bool, String);
type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn bound(worst: f64, limit: f64) -> Outcome {
    (worst <= limit, format!("worst {worst:.3e} <= {limit:.0e}"))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / y.norm()
}

fn gamma_reflection() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 200 {
        let z = c(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        if z.norm() > 20.0 || is_pole(z) {
            continue;
        }
        let prod = match (gamma(z), gamma(c(1.0, 0.0) - z)) {
            (Ok(a), Ok(b)) => a * b * sin_pi(z) / PI,
            _ => return (false, format!("gamma failed at {z}")),
        };
        worst = worst.max((prod - 1.0).norm());
        n += 1;
    }
    bound(worst, 1e-12)
}

fn gamma_unit_line() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 1..=40 {
        let y = 0.25 * i as f64;
        let g = gamma(c(1.0, y)).map(|g| g.norm_sqr()).unwrap_or(f64::NAN);
        let exact = PI * y / (PI * y).sinh();
        worst = worst.max((g - exact).abs() / exact);
    }
    bound(worst, 1e-10)
}

fn hyp2f1_reductions() -> Outcome {
    let mut worst: f64 = 0.0;
    let a = c(0.3, 0.7);
    let b = c(1.1, 0.0);
    for i in 0..30 {
        let w = -15.0 + 0.53 * i as f64;
        let f = hyp2f1(a, b, b, w).unwrap_or(c(f64::NAN, 0.0));
        worst = worst.max(rel(f, c(1.0 - w, 0.0).powc(-a)));
        let g = hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), w).unwrap_or(c(f64::NAN, 0.0));
        let exact = if w == 0.0 { 1.0 } else { -(-w).ln_1p() / w };
        worst = worst.max(rel(g, c(exact, 0.0)));
    }
    bound(worst, 1e-10)
}

fn random_params(rng: &mut StdRng) -> (Complex64, Complex64, Complex64) {
    (
        c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        c(rng.gen_range(0.2..3.0), rng.gen_range(-2.0..2.0)),
    )
}

fn hyp2f1_derivative() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b, cc) = random_params(&mut rng);
        let w: f64 = rng.gen_range(-2.0..0.9);
        let h = 1e-6;
        let f = |t: f64| hyp2f1(a, b, cc, t).unwrap_or(c(f64::NAN, 0.0));
        let fd = (f(w + h) - f(w - h)) / (2.0 * h);
        let d = hyp2f1_deriv(a, b, cc, w).unwrap_or(c(f64::NAN, 0.0));
        worst = worst.max((d - fd).norm() / d.norm().max(f(w).norm()));
    }
    if worst.is_nan() {
        return (false, "evaluation failed".into());
    }
    bound(worst, 1e-8)
}

fn hyp2f1_paths() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (a, b, cc) = random_params(&mut rng);
        let w: f64 = rng.gen_range(-20.0..0.5);
        let (p1, p2) = if w < 0.0 {
            (Path::Pfaff, Path::Reciprocal)
        } else {
            (Path::Series, Path::Pfaff)
        };
        match (hyp2f1_via(p1, a, b, cc, w), hyp2f1_via(p2, a, b, cc, w)) {
            (Ok(f1), Ok(f2)) => worst = worst.max(rel(f1, f2)),
            _ => return (false, format!("evaluation failed at w = {w}")),
        }
    }
    bound(worst, 1e-10)
}

/// The 5 × 4 × 3 reference grid: E above the barrier top, σ, V1.
pub fn reference_grid() -> Vec<(BarrierParams, f64)> {
    let mut out = Vec::new();
    for &v1 in &[0.5, 1.0, 3.0] {
        for &sigma in &[-2.0, -1.0, -0.5, -0.1] {
            let p = BarrierParams::new(0.0, v1, 0.0, sigma).expect("valid grid parameters");
            for i in 1..=5 {
                out.push((p, v1 + 2.0 * i as f64 - 0.7));
            }
        }
    }
    out
}

fn two_routes() -> Outcome {
    let mut worst: f64 = 0.0;
    for (p, e) in reference_grid() {
        let closed = transmission(&p, e).map(|r| r.t);
        let routed = make_context(&p, e).and_then(|ctx| transmission_from_amplitudes(&ctx));
        match (closed, routed) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).abs() / a),
            _ => return (false, format!("failed at σ = {}, E = {e}", p.sigma)),
        }
    }
    bound(worst, 1e-10)
}

fn tampered(mut h: HeunParams, opts: &Options) -> HeunParams {
    if let Some(dq) = opts.tamper_q {
        h.q += dq;
    }
    h
}

fn termination_identity(opts: &Options) -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let sign = |rng: &mut StdRng| if rng.gen() { 1.0 } else { -1.0 };
        let v1 = rng.gen_range(0.05f64.ln()..5f64.ln()).exp() * sign(&mut rng);
        let sigma = rng.gen_range(0.05f64.ln()..3f64.ln()).exp() * sign(&mut rng);
        let p = match BarrierParams::new(rng.gen_range(-1.0..1.0), v1, 0.0, sigma) {
            Ok(p) => p,
            Err(e) => return (false, e.to_string()),
        };
        let e = p.v0.max(p.v_near()) + rng.gen_range(1e-3f64.ln()..10f64.ln()).exp();
        match make_context(&p, e) {
            Ok(ctx) => {
                let h = tampered(heun_from_context(&ctx), opts);
                worst = worst.max(h.termination_defect().norm());
            }
            Err(e) => return (false, e.to_string()),
        }
    }
    bound(worst, 1e-12)
}

fn heun_residuals(opts: &Options) -> Outcome {
    let zs = probe_grid();
    let mut worst: f64 = 0.0;
    for (p, e) in reference_grid() {
        let r = make_context(&p, e).and_then(|ctx| {
            let h = tampered(heun_from_context(&ctx), opts);
            heun_residual_grid(&h, &ctx, &zs, c(1.0, 0.0))
        });
        match r {
            Ok(r) => worst = worst.max(r),
            Err(e) => return (false, e.to_string()),
        }
    }
    bound(worst, 1e-8)
}

fn schrodinger_residuals() -> Outcome {
    let mut worst: f64 = 0.0;
    for &(v1, sigma, de) in &[(1.0, -1.0, 1.0), (3.0, -0.1, 2.0), (0.5, -2.0, 4.0), (-1.5, -0.7, 0.4), (1.0, 0.8, 1.5)] {
        let p = BarrierParams::new(0.0, v1, 0.0, sigma).expect("valid parameters");
        let e = p.v0.max(p.v_near()) + de;
        let xs: Vec<f64> = (0..=160).map(|i| sigma.abs() * (-8.0 + 0.1 * i as f64)).collect();
        let r = make_context(&p, e).and_then(|ctx| residual_of(|x| wavefunction(&ctx, x, c(1.0, 0.0)), &p, e, &xs));
        match r {
            Ok(r) => worst = worst.max(r),
            Err(e) => return (false, e.to_string()),
        }
    }
    bound(worst, 1e-6)
}

fn abrupt_step_limit() -> Outcome {
    let p = BarrierParams::new(0.0, 1.0, 0.0, -1.0).expect("valid parameters");
    let Ok(t_sp) = transmission_step(&p, 2.0) else {
        return (false, "step transmission failed".into());
    };
    if (t_sp - 0.9705627485).abs() > 1e-10 {
        return (false, format!("T_SP = {t_sp}"));
    }
    let mut pts = Vec::new();
    for i in 0..=20 {
        let s = 1e-3 * 100f64.powf(i as f64 / 20.0);
        let d = transmission(&BarrierParams { sigma: -s, ..p }, 2.0).map(|r| r.t - t_sp);
        match d {
            Ok(d) if d > 0.0 => pts.push((s.ln(), d.ln())),
            Ok(d) => return (false, format!("T − T_SP = {d:e} at σ = {s}")),
            Err(e) => return (false, e.to_string()),
        }
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    ((slope - 2.0).abs() <= 0.1, format!("slope {slope:.4} (2 ± 0.1), T − T_SP > 0"))
}

fn transparency() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 300 {
        let v1: f64 = rng.gen_range(0.05..5.0);
        let s: f64 = rng.gen_range(0.2..5.0);
        let p = BarrierParams::new(0.0, v1, 0.0, -s).expect("valid parameters");
        let e = v1 + rng.gen_range(0.0..20.0);
        let k2 = p.wave_number(e - p.v_near());
        if PI * s * k2 < 12.0 {
            continue;
        }
        match transmission(&p, e) {
            Ok(r) => worst = worst.max(1.0 - r.t),
            Err(e) => return (false, e.to_string()),
        }
        n += 1;
    }
    bound(worst, 1e-8)
}

fn sigma_parity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = BarrierParams::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.01..4.0),
        )
        .expect("valid parameters");
        let e = p.v0.max(p.v_near()) + rng.gen_range(1e-3..10.0);
        match (transmission(&p, e), transmission(&p.mirrored(), e)) {
            (Ok(a), Ok(b)) => worst = worst.max((a.t - b.t).abs() / a.t),
            _ => return (false, "transmission failed".into()),
        }
    }
    bound(worst, 1e-12)
}

/// (E, σ) points for the oracle comparison, V0 = 0, V1 = 1.
pub fn oracle_points(level: Level) -> Vec<(BarrierParams, f64)> {
    let (sigmas, energies): (&[f64], Vec<f64>) = match level {
        Level::Fast => (&[-1.0, -0.1], vec![1.2, 2.0, 6.0]),
        Level::Full => (
            &[-2.0, -1.0, -0.5, -0.25, -0.1],
            (0..10).map(|i| 1.05 + 1.1 * i as f64).collect(),
        ),
    };
    let mut out = Vec::new();
    for &s in sigmas {
        let p = BarrierParams::new(0.0, 1.0, 0.0, s).expect("valid parameters");
        for &e in &energies {
            out.push((p, e));
        }
    }
    out
}

fn oracle_agreement(level: Level) -> Outcome {
    let pts = oracle_points(level);
    let results: Vec<Result<(f64, f64), String>> = pts
        .par_iter()
        .map(|(p, e)| {
            let r = richardson_t(p, *e, &GridSpec::default_for(p)).map_err(|e| e.to_string())?;
            let t = transmission(p, *e).map_err(|e| e.to_string())?.t;
            Ok(((r.t - t).abs() / t, r.error_estimate))
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut worst_est: f64 = 0.0;
    for r in results {
        match r {
            Ok((d, est)) => {
                worst = worst.max(d);
                worst_est = worst_est.max(est);
            }
            Err(e) => return (false, e),
        }
    }
    (
        worst <= 1e-6 && worst_est < 1e-8,
        format!("{} pts, worst {worst:.2e} <= 1e-6, est {worst_est:.1e}", pts.len()),
    )
}

pub fn run_suite(level: Level, opts: &Options) -> Vec<CheckResult> {
    let checks: Vec<Check> = vec![
        ("gamma reflection identity", Box::new(gamma_reflection)),
        ("gamma unit-line modulus", Box::new(gamma_unit_line)),
        ("2F1 binomial/log reductions", Box::new(hyp2f1_reductions)),
        ("2F1 derivative vs finite difference", Box::new(hyp2f1_derivative)),
        ("2F1 transformation-path consistency", Box::new(hyp2f1_paths)),
        ("two-route transmission agreement", Box::new(two_routes)),
        ("termination identity", Box::new(|| termination_identity(opts))),
        ("Heun residual on probe grid", Box::new(|| heun_residuals(opts))),
        ("Schrodinger residual of wavefunction", Box::new(schrodinger_residuals)),
        ("abrupt-step limit", Box::new(abrupt_step_limit)),
        ("transparency limit", Box::new(transparency)),
        ("sigma parity", Box::new(sigma_parity)),
        ("oracle agreement", Box::new(move || oracle_agreement(level))),
    ];
    checks
        .into_iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let (passed, detail) = f();
            CheckResult {
                name,
                passed,
                detail,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

/// Print the table; returns true iff every check passed.
pub fn report<W: Write>(results: &[CheckResult], mut out: W) -> io::Result<bool> {
    for r in results {
        writeln!(out, "{r}")?;
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        writeln!(out, "all {} checks passed", results.len())?;
    } else {
        writeln!(out, "{} of {} checks FAILED: {}", failed.len(), results.len(), failed.join(", "))?;
    }
    Ok(failed.is_empty())
}
