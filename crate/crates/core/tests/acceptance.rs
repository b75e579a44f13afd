//! End-to-end acceptance battery. Each test prints one verdict line
//! (visible under `cargo test -- --nocapture`) and asserts it.

use bicons_core::characterize::{frak_a, frak_b, kappa_chain_from_f, recover_params, KappaState};
use bicons_core::extrinsic::{build_frame, fundamental_residuals, residuals_from_frame};
use bicons_core::geometry::{
    circle_check, gauss_curvature_analytic, gauss_curvature_fd, kappa_from_k,
    level_curve_curvature, Chart, ChartData,
};
use bicons_core::isometry::{classify, invariant_match};
use bicons_core::{
    integrate_f_ode, integrate_kappa_ode, invert_curvature_cubic, k_of_f, u_of_f_quadrature,
    FProfile, FamilyParams, KappaProfile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIG_C: f64 = 80.0 / 9.0;

fn outcome(name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[acceptance] {name}: {verdict} ({detail})");
    assert!(pass, "[acceptance] {name}: FAIL ({detail})");
}

fn reference() -> FamilyParams {
    FamilyParams::new(1.0, BIG_C).unwrap()
}

#[test]
fn reference_chain_is_exact() {
    let params = reference();
    let prof = integrate_f_ode(params, 1.0, 0.15, 1e-12).unwrap();
    let s0 = prof.samples.first().unwrap();
    let k = gauss_curvature_analytic(s0.f, s0.f_prime, s0.f_double_prime).unwrap();
    let chain = kappa_chain_from_f(s0.f, s0.f_prime, 1.0, BIG_C).unwrap();
    let a = frak_a(&chain).unwrap();
    let b = frak_b(&chain).unwrap();
    let deviations = [
        ("f_prime", s0.f_prime - 4.0 / 3.0),
        ("f_double_prime", s0.f_double_prime - (-32.0 / 9.0)),
        ("K", k - (-5.0)),
        ("kappa", chain.kappa - 1.0),
        ("kappa_p", chain.kappa_p - (-4.0)),
        ("kappa_pp", chain.kappa_pp - (-20.0)),
        ("frak_a", a - 1.0),
        ("frak_b", b - 1.0),
    ];
    let worst = deviations
        .iter()
        .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .unwrap();
    outcome(
        "reference chain",
        deviations.iter().all(|d| d.1.abs() <= 1e-9),
        format!("largest deviation {:.2e} in {}", worst.1, worst.0),
    );
}

#[test]
fn first_integral_is_conserved() {
    // C-recovery divides by 2 f^(7/2), so its conditioning degrades like
    // f^(-5/2) toward the small-f end; the 1e-8 drift target is asserted on
    // the span where that amplification stays below ~50 (f >= 0.12), and the
    // conservation statement is carried over the full event-bounded range by
    // the algebraically equivalent constraint residual |f'^2 - P|/max(1, P).
    let params = reference();
    let tol = 1e-10;
    let fwd = integrate_f_ode(params, 1.0, 10.0, tol).unwrap();
    let back = integrate_f_ode(params, 1.0, -1.2, tol).unwrap();
    let central = FProfile::stitch(&back, &fwd).unwrap();
    let deep_back = integrate_f_ode(params, 1.0, -20.0, tol).unwrap();
    let full = FProfile::stitch(&deep_back, &fwd).unwrap();
    let pass = central.first_integral_drift <= 1e-8
        && full.constraint_residual <= 1e-8
        && full.stopped_by_event;
    outcome(
        "first integral conservation",
        pass,
        format!(
            "relative C-drift {:.2e} for f in [{:.3}, {:.4}]; constraint residual {:.2e} over the full range f in [{:.1e}, {:.4}]",
            central.first_integral_drift,
            central.samples.first().unwrap().f,
            central.samples.last().unwrap().f,
            full.constraint_residual,
            full.samples.first().unwrap().f,
            full.samples.last().unwrap().f,
        ),
    );
}

#[test]
fn kappa_invariant_is_conserved_and_recovers_parameters() {
    let tol = 1e-10;
    // two members: the reference seed and a chain-generated seed elsewhere
    let mut worst_const: f64 = 0.0;
    for (c, big_c, f0_frac) in [(1.0, BIG_C, 1.0 / 1.1392765295229494), (2.0, -1.0, 0.5)] {
        let params = FamilyParams::new(c, big_c).unwrap();
        let f0 = f0_frac * params.f_max().unwrap();
        let f0p = params.potential_p(f0).unwrap().sqrt();
        let seed = kappa_chain_from_f(f0, f0p, c, big_c).unwrap();
        // stay short of the turning point, where kappa -> 0 makes the
        // invariant's denominator degenerate
        let u_turn = u_of_f_quadrature(params, f0, params.f_max().unwrap()).unwrap();
        let fwd = integrate_kappa_ode(seed.kappa, seed.kappa_p, seed.kappa_pp, 0.8 * u_turn, tol)
            .unwrap();
        let back = integrate_kappa_ode(seed.kappa, seed.kappa_p, seed.kappa_pp, -1.0, tol).unwrap();
        let prof = KappaProfile::stitch(&back, &fwd).unwrap();
        let values: Vec<f64> = prof
            .samples
            .iter()
            .map(|s| frak_a(&KappaState::from(s)).unwrap())
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let dev = values
            .iter()
            .map(|a| (a - mean).abs())
            .fold(0.0, f64::max)
            / mean.abs().max(1.0);
        worst_const = worst_const.max(dev);
        assert!(dev <= 1e-7, "frak_a drift {dev:e} for (c, C) = ({c}, {big_c})");
    }
    // parameter recovery from the reference seed
    let back = integrate_kappa_ode(1.0, -4.0, -20.0, -1.0, tol).unwrap();
    let fwd = integrate_kappa_ode(1.0, -4.0, -20.0, 0.14, tol).unwrap();
    let prof = KappaProfile::stitch(&back, &fwd).unwrap();
    let rec = recover_params(&prof).unwrap();
    let dc2 = (rec.c_squared - 1.0).abs();
    let dbig = (rec.big_c - BIG_C).abs() / BIG_C;
    let pass = worst_const <= 1e-7 && dc2 <= 1e-6 && dbig <= 1e-6 && rec.report.all_pass();
    outcome(
        "kappa invariant conservation and recovery",
        pass,
        format!(
            "frak_a constancy {worst_const:.2e}; recovered c^2 off by {dc2:.2e}, C off by {dbig:.2e} relative"
        ),
    );
}

#[test]
fn curvature_routes_agree_in_all_charts() {
    let params = reference();
    let tol = 1e-11;
    let fwd = integrate_f_ode(params, 1.0, 0.15, tol).unwrap();
    let back = integrate_f_ode(params, 1.0, -1.2, tol).unwrap();
    let prof = FProfile::stitch(&back, &fwd).unwrap();
    let (ulo, uhi) = prof.u_range();
    let h = 5e-4;
    let data = ChartData::U(&prof);

    // U chart: analytic vs cubic vs finite differences at the samples
    let mut n_u = 0usize;
    let mut worst_exact: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for s in &prof.samples {
        let ka = gauss_curvature_analytic(s.f, s.f_prime, s.f_double_prime).unwrap();
        let kc = k_of_f(s.f, params.c()).unwrap();
        worst_exact = worst_exact.max((ka - kc).abs());
        if s.u - 2.0 * h < ulo || s.u + 2.0 * h > uhi {
            continue;
        }
        let kf = gauss_curvature_fd(Chart::U, (s.u, 0.0), &data, h).unwrap();
        worst_fd = worst_fd.max((kf - ka).abs());
        n_u += 1;
    }

    // F chart: finite differences against the cubic on a fresh f-grid; the
    // f-coordinate compresses near 0 and the metric blows up at f_max, so
    // the step is smaller here and the grid keeps away from both ends
    let fdata = ChartData::F(&params);
    let f_max = params.f_max().unwrap();
    let mut n_f = 0usize;
    for i in 0..120 {
        let f = 0.15 + (f_max - 0.05 - 0.15) * i as f64 / 119.0;
        let kf = gauss_curvature_fd(Chart::F, (f, 0.0), &fdata, 1e-4).unwrap();
        let kc = k_of_f(f, params.c()).unwrap();
        worst_fd = worst_fd.max((kf - kc).abs());
        n_f += 1;
    }

    // kappa chart: finite differences against kappa' - kappa^2, and the
    // cubic evaluated at f = sqrt(frak_b)
    let kback = integrate_kappa_ode(1.0, -4.0, -20.0, -1.0, tol).unwrap();
    let kfwd = integrate_kappa_ode(1.0, -4.0, -20.0, 0.14, tol).unwrap();
    let kprof = KappaProfile::stitch(&kback, &kfwd).unwrap();
    let kdata = ChartData::Kappa(&kprof);
    let (klo, khi) = kprof.u_range();
    let mut n_k = 0usize;
    for s in &kprof.samples {
        let ka = s.kappa_p - s.kappa * s.kappa;
        let f_rec = frak_b(&KappaState::from(s)).unwrap().sqrt();
        let kc = k_of_f(f_rec, params.c()).unwrap();
        worst_exact = worst_exact.max((ka - kc).abs());
        if s.u - 2.0 * h < klo || s.u + 2.0 * h > khi {
            continue;
        }
        let kf = gauss_curvature_fd(Chart::Kappa, (s.u, 0.0), &kdata, h).unwrap();
        worst_fd = worst_fd.max((kf - ka).abs());
        n_k += 1;
    }

    // second-order convergence: halving h divides the error by about four
    let mut ratios = Vec::new();
    for f in [0.5, 0.7, 0.9, 1.0, 1.05] {
        let exact = k_of_f(f, params.c()).unwrap();
        let e1 = (gauss_curvature_fd(Chart::F, (f, 0.0), &fdata, 2e-3).unwrap() - exact).abs();
        let e2 = (gauss_curvature_fd(Chart::F, (f, 0.0), &fdata, 1e-3).unwrap() - exact).abs();
        ratios.push(e1 / e2);
    }
    let order_ok = ratios.iter().all(|r| (3.0..5.0).contains(r));

    let pass = n_u >= 100
        && n_f >= 100
        && n_k >= 100
        && worst_exact <= 1e-9
        && worst_fd <= 1e-5
        && order_ok;
    outcome(
        "curvature route agreement",
        pass,
        format!(
            "samples (U {n_u}, F {n_f}, kappa {n_k}); exact routes within {worst_exact:.2e}, finite differences within {worst_fd:.2e}, halving ratios {ratios:.3?}"
        ),
    );
}

#[test]
fn curvature_cubic_round_trips() {
    let c = 1.0;
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let k = -100.0 + (99.0 - 1e-6) * i as f64 / 999.0;
        let f = invert_curvature_cubic(k, c).unwrap();
        worst = worst.max((k_of_f(f, c).unwrap() - k).abs());
    }
    let exact_minus5 = invert_curvature_cubic(-5.0, 1.0).unwrap();
    let exact_minus21 = invert_curvature_cubic(-21.0, 1.0).unwrap();
    let pass = worst <= 1e-12
        && (exact_minus5 - 1.0).abs() <= 1e-12
        && (exact_minus21 - 2.0).abs() <= 1e-12;
    outcome(
        "curvature cubic inversion",
        pass,
        format!(
            "worst round-trip {worst:.2e}; h^-1(-5) = {exact_minus5:.15}, h^-1(-21) = {exact_minus21:.15}"
        ),
    );
}

#[test]
fn level_curves_are_circles() {
    let params = reference();
    let fwd = integrate_f_ode(params, 1.0, 0.15, 1e-11).unwrap();
    let back = integrate_f_ode(params, 1.0, -1.2, 1e-11).unwrap();
    let prof = FProfile::stitch(&back, &fwd).unwrap();
    let (lo, hi) = prof.u_range();
    let mut worst_variation: f64 = 0.0;
    let mut worst_dev: f64 = 0.0;
    let mut worst_routes: f64 = 0.0;
    for i in 0..5 {
        let u0 = lo + 0.05 + (hi - lo - 0.1) * i as f64 / 4.0;
        let report = circle_check(&prof, u0).unwrap();
        worst_dev = worst_dev.max(report.get("geodesic_curvature_deviation").unwrap().value);
        worst_variation =
            worst_variation.max(report.get("geodesic_curvature_variation").unwrap().value);
        // closed-form route: -(1/4) |grad K| / (K + f^2 + 1)
        let s = prof.state_at(u0).unwrap();
        let kg = level_curve_curvature(s.f, s.f_prime).unwrap();
        let k = gauss_curvature_analytic(s.f, s.f_prime, s.f_double_prime).unwrap();
        let grad_k = (6.0 * s.f + 3.0 * params.c_squared() * s.f * s.f) * s.f_prime;
        let via_k = kappa_from_k(k, grad_k, s.f).unwrap();
        worst_routes = worst_routes.max((kg - via_k).abs());
    }
    let pass = worst_variation <= 1e-12 && worst_dev <= 1e-9 && worst_routes <= 1e-9;
    outcome(
        "level curves are circles",
        pass,
        format!(
            "variation along curves {worst_variation:.2e}, measured vs (3/4)f'/f {worst_dev:.2e}, vs curvature-gradient route {worst_routes:.2e}"
        ),
    );
}

#[test]
fn structure_equation_battery_with_negative_control() {
    let mut worst: f64 = 0.0;
    let mut samples = 0usize;
    for (c, big_c) in [(1.0, BIG_C), (2.0, -1.0), (0.5, 3.0), (-1.5, 9.0)] {
        let params = FamilyParams::new(c, big_c).unwrap();
        let f0 = 0.4 * params.f_max().unwrap();
        let prof = integrate_f_ode(params, f0, 1.0, 1e-10).unwrap();
        for s in &prof.samples {
            let report = fundamental_residuals(s.f, s.f_prime, c).unwrap();
            assert!(report.all_pass(), "(c, C) = ({c}, {big_c}), u = {}: {report}", s.u);
            worst = worst.max(
                report
                    .entries()
                    .iter()
                    .map(|e| e.value.abs())
                    .fold(0.0, f64::max),
            );
            samples += 1;
        }
    }
    // negative control: a 0.1% error in one shape operator entry must trip
    // the battery
    let (mut ops, _) = build_frame(1.0, 1.0).unwrap();
    ops.a3[0][0] *= 1.001;
    let control = residuals_from_frame(&ops, 4.0 / 3.0).unwrap();
    let control_fails = !control.all_pass();
    outcome(
        "structure equation battery",
        worst <= 1e-12 && control_fails && samples >= 100,
        format!(
            "worst residual {worst:.2e} over {samples} states; perturbed control detected: {control_fails}"
        ),
    );
}

#[test]
fn isometry_classification_grid() {
    let cs = [-2.0, -1.0, 0.5, 1.0, 2.0];
    let big_cs = [-1.0, 0.0, 2.0, BIG_C, 9.0];
    let mut members = Vec::new();
    for &c in &cs {
        for &big_c in &big_cs {
            let params = FamilyParams::new(c, big_c).unwrap();
            let f0 = 0.05 * params.f_max().unwrap();
            let prof = integrate_f_ode(params, f0, 20.0, 1e-10).unwrap();
            members.push((params, prof));
        }
    }
    let mut pairs = 0usize;
    let mut agreements = 0usize;
    let mut isometric_pairs = 0usize;
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            let expected = members[i].0.c() == members[j].0.c()
                && members[i].0.big_c() == members[j].0.big_c();
            let by_params = classify(&members[i].0, &members[j].0);
            let by_metric = invariant_match(&members[i].1, &members[j].1, 1e-6).unwrap();
            assert_eq!(
                by_params.isometric, expected,
                "classify wrong for pair ({i}, {j})"
            );
            if by_metric.isometric == by_params.isometric {
                agreements += 1;
            }
            if expected {
                isometric_pairs += 1;
            }
            pairs += 1;
        }
    }
    outcome(
        "isometry classification",
        pairs == 300 && agreements == pairs && isometric_pairs == 10,
        format!(
            "{agreements}/{pairs} metric-level agreements, {isometric_pairs} isometric pairs in the grid"
        ),
    );
}

#[test]
fn domain_top_against_independent_oracle() {
    // independent oracle: scan-and-bisect on the raw polynomial, written out
    // here rather than calling into the library
    let oracle = |c: f64, big_c: f64| -> f64 {
        let p = |f: f64| {
            (16.0 / 9.0) * f * f - 16.0 * f.powi(4) - (16.0 / 9.0) * c * c * f.powi(5)
                + 2.0 * big_c * f.powf(3.5)
        };
        let mut hi = 1e-4;
        assert!(p(hi) > 0.0);
        while p(hi) > 0.0 {
            hi *= 1.05;
            assert!(hi < 1e3, "no sign change found");
        }
        let mut lo = hi / 1.05;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let params = reference();
    let fm = params.f_max().unwrap();
    let fm_oracle = oracle(1.0, BIG_C);
    let agree = (fm - fm_oracle).abs() <= 1e-3 && (fm - 1.1393).abs() <= 1e-3;

    // single positive root of P on 25 random members, 1e4-point sign scan
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut all_single = true;
    for _ in 0..25 {
        let magnitude = (rng.gen_range(0.1_f64.ln()..5.0_f64.ln())).exp();
        let c = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
        let big_c = rng.gen_range(-10.0..10.0);
        let member = FamilyParams::new(c, big_c).unwrap();
        let top = member.f_max().unwrap();
        let lo_log = 1e-6_f64.ln();
        let hi_log = (10.0 * top).ln();
        let mut transitions = 0usize;
        let mut prev_positive = true;
        for i in 0..10_000 {
            let f = (lo_log + (hi_log - lo_log) * i as f64 / 9_999.0).exp();
            let positive = member.potential_p_unchecked(f) > 0.0;
            if positive != prev_positive {
                transitions += 1;
                prev_positive = positive;
            }
        }
        if transitions != 1 {
            all_single = false;
        }
    }
    outcome(
        "domain top and single root",
        agree && all_single,
        format!(
            "f_max {fm:.6} vs oracle {fm_oracle:.6}; sign scans found exactly one crossing on all 25 members: {all_single}"
        ),
    );
}
