use hyperstep::{
    connection_coeffs, integrate, make_context, richardson_t, transmission, transmission_step, wavefunction,
    BarrierParams, Complex64, GridSpec,
};

fn reference() -> BarrierParams {
    BarrierParams::new(0.0, 1.0, 0.0, -1.0).unwrap()
}

#[test]
fn numeric_transmission_matches_closed_form() {
    let p = reference();
    let g = GridSpec::new(-30.0, 30.0, 200_000);
    let num = integrate(&p, 2.0, &g).unwrap();
    let t = transmission(&p, 2.0).unwrap().t;
    assert!((num.t_num - t).abs() / t <= 1e-6, "{} vs {t}", num.t_num);
    assert!((num.flux_sum() - 1.0).abs() <= 1e-6);
}

#[test]
fn closed_form_holds_across_shapes() {
    for &(v0, v1, x0, sigma, de) in &[
        (0.0, 3.0, 0.0, -0.1, 0.3),
        (0.5, -1.2, 1.0, -0.6, 0.2),
        (0.0, 0.5, -2.0, 2.0, 1.7),
        (-1.0, 2.0, 0.0, 0.25, 5.0),
    ] {
        let p = BarrierParams::new(v0, v1, x0, sigma).unwrap();
        let e = p.v0.max(p.v_near()) + de;
        let num = integrate(&p, e, &GridSpec::default_for(&p)).unwrap();
        let t = transmission(&p, e).unwrap().t;
        assert!((num.t_num - t).abs() / t <= 1e-6, "σ={sigma} V1={v1}: {} vs {t}", num.t_num);
        assert!((num.flux_sum() - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn numeric_amplitudes_match_connection_coefficients() {
    // unit transmitted amplitude on both sides of the comparison
    let p = BarrierParams::new(0.0, 1.0, 0.7, -0.8).unwrap();
    let e = 1.6;
    let num = integrate(&p, e, &GridSpec::default_for(&p)).unwrap();
    let ctx = make_context(&p, e).unwrap();
    let amp = connection_coeffs(&ctx, Complex64::new(1.0, 0.0)).unwrap();
    let (a, b) = (amp.a / amp.c, amp.b / amp.c);
    assert!((num.a_num - a).norm() / a.norm() < 1e-7, "{} vs {a}", num.a_num);
    assert!((num.b_num - b).norm() / a.norm() < 1e-7, "{} vs {b}", num.b_num);

    // and the sampled wavefunction tracks the analytic one
    for &(x, psi) in num.samples.iter().step_by(97) {
        let exact = wavefunction(&ctx, x, Complex64::new(1.0, 0.0)).unwrap() / amp.c;
        assert!((psi - exact).norm() < 1e-7, "x={x}: {psi} vs {exact}");
    }
}

#[test]
fn tiny_sigma_approaches_abrupt_step_from_above() {
    let p = BarrierParams::new(0.0, 1.0, 0.0, -1e-3).unwrap();
    let t_sp = transmission_step(&p, 2.0).unwrap();
    let num = integrate(&p, 2.0, &GridSpec::default_for(&p)).unwrap();
    assert!((num.t_num - t_sp).abs() <= 1e-4);
    assert!(num.t_num > t_sp, "{} vs {t_sp}", num.t_num);
}

#[test]
fn integrator_is_fourth_order() {
    // measured on the complex incident amplitude; see below for T itself
    let p = reference();
    let ctx = make_context(&p, 2.0).unwrap();
    let amp = connection_coeffs(&ctx, Complex64::new(1.0, 0.0)).unwrap();
    let a = amp.a / amp.c;
    let base = GridSpec::new(-30.0, 30.0, 2000);
    let errs: Vec<f64> = [6250, 12_500, 25_000]
        .iter()
        .map(|&n| (integrate(&p, 2.0, &base.with_steps(n)).unwrap().a_num - a).norm())
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 4.0).abs() <= 0.2, "order {order} from {errs:?}");
    }
}

#[test]
fn richardson_estimate_shrinks_at_least_sixteenfold() {
    // The leading RK4 error is a phase of A and drops out of |A|², so T
    // itself converges one order faster and the ratio sits near 32.
    let p = reference();
    let g = GridSpec::new(-30.0, 30.0, 2000);
    let r1 = richardson_t(&p, 2.0, &g).unwrap();
    let r2 = richardson_t(&p, 2.0, &g.with_steps(4000)).unwrap();
    let ratio = r1.error_estimate / r2.error_estimate;
    assert!(ratio >= 12.0, "ratio {ratio}");
    let t = transmission(&p, 2.0).unwrap().t;
    assert!((r2.t - t).abs() < r2.error_estimate);
}

#[test]
fn richardson_is_exact_without_step() {
    let p = BarrierParams::new(0.0, 0.0, 0.0, -1.0).unwrap();
    let r = richardson_t(&p, 1.5, &GridSpec::new(-10.0, 10.0, 5000)).unwrap();
    assert!((r.t - 1.0).abs() < 1e-12);
}

#[test]
fn agreement_tightens_with_resolution() {
    // a sharp, fast case keeps every error above the roundoff floor
    let p = BarrierParams::new(0.0, 3.0, 0.0, -0.1).unwrap();
    let t = transmission(&p, 20.0).unwrap().t;
    let base = GridSpec::new(-30.0, 30.0, 25_000);
    let errs: Vec<f64> = [25_000, 50_000, 100_000, 200_000]
        .iter()
        .map(|&n| (integrate(&p, 20.0, &base.with_steps(n)).unwrap().t_num - t).abs() / t)
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn mirrored_barrier_integrates_to_same_transmission() {
    let p = BarrierParams::new(0.0, 2.0, 1.0, 0.5).unwrap();
    let g = GridSpec::default_for(&p);
    let t1 = integrate(&p, 3.0, &g).unwrap().t_num;
    let t2 = integrate(&p.mirrored(), 3.0, &g).unwrap().t_num;
    assert!((t1 - t2).abs() < 1e-9);
    assert!((t1 - transmission(&p, 3.0).unwrap().t).abs() < 1e-8);
}
