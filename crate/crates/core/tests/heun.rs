use hyperstep::heun::{heun_residual_grid, physical_solution, probe_grid};
use hyperstep::{frobenius_series, heun_from_context, make_context, BarrierParams, Complex64, Error, Singularity};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

#[test]
fn termination_identity_on_random_contexts() {
    let mut rng = StdRng::seed_from_u64(1234);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let v1 = log_uniform(&mut rng, 0.05, 5.0) * if rng.gen_bool(0.3) { -1.0 } else { 1.0 };
        let sigma = log_uniform(&mut rng, 0.05, 3.0) * if rng.gen() { -1.0 } else { 1.0 };
        let v0 = rng.gen_range(-1.0..1.0);
        let p = BarrierParams::new(v0, v1, rng.gen_range(-2.0..2.0), sigma).unwrap();
        let e = p.v0.max(p.v_near()) + log_uniform(&mut rng, 1e-3, 10.0);
        let h = heun_from_context(&make_context(&p, e).unwrap());
        worst = worst.max(h.termination_defect().norm());
        assert!(h.fuchs_defect().norm() < 1e-13);
    }
    assert!(worst <= 1e-12, "worst termination defect {worst:e}");
}

#[test]
fn residual_on_probe_grid_for_grid_sets() {
    let zs = probe_grid();
    for &v1 in &[0.5, 1.0, 3.0] {
        for &sigma in &[-2.0, -1.0, -0.5, -0.1] {
            let p = BarrierParams::new(0.0, v1, 0.0, sigma).unwrap();
            for i in 1..=5 {
                let e = v1 + 2.0 * i as f64 - 0.7;
                let ctx = make_context(&p, e).unwrap();
                let h = heun_from_context(&ctx);
                let r = heun_residual_grid(&h, &ctx, &zs, one()).unwrap();
                assert!(r <= 1e-8, "V1={v1} σ={sigma} E={e}: {r:e}");
            }
        }
    }
}

#[test]
fn regular_frobenius_series_is_the_physical_solution() {
    for &(v1, sigma, e) in &[(1.0, -1.0, 2.0), (3.0, -0.5, 4.5), (-1.0, -0.8, 0.7)] {
        let p = BarrierParams::new(0.0, v1, 0.0, sigma).unwrap();
        let ctx = make_context(&p, e).unwrap();
        let h = heun_from_context(&ctx);
        let s = frobenius_series(&h, Singularity::A2, Complex64::new(0.0, 0.0), 80).unwrap();
        let mut ratio = None;
        for i in 1..=10 {
            let z = 1.0 + 0.05 * i as f64;
            let [u, ..] = physical_solution(&ctx, z, one()).unwrap();
            let [f, ..] = s.eval(z);
            let q = u / f;
            match ratio {
                None => ratio = Some(q),
                Some(r0) => assert!((q - r0).norm() / r0.norm() < 1e-8, "z={z}: {q} vs {r0}"),
            }
        }
    }
}

#[test]
fn singular_frobenius_series_solves_the_equation() {
    let p = BarrierParams::new(0.0, 1.0, 0.0, -1.0).unwrap();
    let ctx = make_context(&p, 2.0).unwrap();
    let h = heun_from_context(&ctx);
    let s_exp = -2.0 * ctx.alpha2;
    let s = frobenius_series(&h, Singularity::A2, s_exp, 80).unwrap();
    for i in 1..=9 {
        // inside half the distance to the nearest other singularity
        let z = 1.0 + 0.05 * i as f64;
        let [u, du, d2u] = s.eval(z);
        let scale = u.norm().max(du.norm()).max(d2u.norm());
        assert!(h.ode_lhs(z, u, du, d2u).norm() / scale <= 1e-8, "z={z}");
    }
    // about the other finite singularity as well
    for exp in h.local_exponents(Singularity::A1) {
        let s = frobenius_series(&h, Singularity::A1, exp, 80).unwrap();
        for i in 1..=9 {
            let z = -1.0 + 0.05 * i as f64;
            let [u, du, d2u] = s.eval(z);
            let scale = u.norm().max(du.norm()).max(d2u.norm());
            assert!(h.ode_lhs(z, u, du, d2u).norm() / scale <= 1e-8, "z={z}");
        }
    }
}

#[test]
fn exponents_at_transmitted_point() {
    let p = BarrierParams::new(0.0, 1.0, 0.0, -1.0).unwrap();
    let ctx = make_context(&p, 2.0).unwrap();
    let h = heun_from_context(&ctx);
    let [e0, e1] = h.local_exponents(Singularity::A2);
    assert!(e0.norm() < 1e-15);
    assert!((e1 + 2.0 * ctx.alpha2).norm() < 1e-14);
    // +2α2 is not an exponent of this equation
    assert!(matches!(
        frobenius_series(&h, Singularity::A2, 2.0 * ctx.alpha2, 10),
        Err(Error::Domain(_))
    ));
}
