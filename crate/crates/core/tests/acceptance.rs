//! One check per acceptance criterion, each printing a PASS/FAIL line.
//! Runs without the libtest harness so every line is shown; exits nonzero
//! if any criterion fails.

use bhkernel::asymptotics::{averaged_density_coefficient, phi6_small, psi6_small};
use bhkernel::kernels::{build_bank, correlation, density, kernel, Case};
use bhkernel::numeric::PrecisionContext;
use bhkernel::oracle::*;
use bhkernel::study::precision_study;
use rug::Float;

type Outcome = (bool, String);

fn dev(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec().max(b.prec()), a - b).abs().to_f64()
}

const POINTS: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];

fn criterion_1_method_triangle() -> Outcome {
    let ctx = PrecisionContext::digits(30);
    let q = build_bank(Case::Quartic);
    let s = build_bank(Case::Sextic);
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    let mut track = |d: f64, what: &str, x: f64| {
        if d > worst {
            worst = d;
            at = format!("{what} at x = {x}");
        }
    };
    for x in POINTS {
        let (a, b, c) = (
            q.phi().eval(x, &ctx).unwrap().value,
            quad_phi4(x, &ctx).unwrap().value,
            meijer_phi4(x, &ctx).unwrap().value,
        );
        track(dev(&a, &b).max(dev(&a, &c)).max(dev(&b, &c)), "phi4", x);
        let (a, b) = (
            q.psi().eval(x, &ctx).unwrap().value,
            quad_psi4(x, &ctx).unwrap().value,
        );
        track(dev(&a, &b), "psi4", x);
        let (a, b) = (
            imag_g4_series(x, &ctx).unwrap().value,
            meijer_imag_g4(x, None, &ctx).unwrap().value,
        );
        track(dev(&a, &b), "im_g4", x);
        let (a, b, c) = (
            s.phi().eval(x, &ctx).unwrap().value,
            quad_phi6(x, &ctx).unwrap().value,
            meijer_phi6(x, &ctx).unwrap().value,
        );
        track(dev(&a, &b).max(dev(&a, &c)).max(dev(&b, &c)), "phi6", x);
        let (a, b) = (
            s.psi().eval(x, &ctx).unwrap().value,
            quad_psi6(x, &ctx).unwrap().value,
        );
        track(dev(&a, &b), "psi6", x);
        let (a, b) = (
            imag_g6_series(x, &ctx).unwrap().value,
            meijer_imag_g6(x, None, &ctx).unwrap().value,
        );
        track(dev(&a, &b), "im_g6", x);
    }
    (
        worst <= 1e-10,
        format!("max pairwise |Δ| = {worst:.3e} ({at}), tolerance 1e-10"),
    )
}

fn criterion_2_ode_residuals() -> Outcome {
    let ctx = PrecisionContext::digits(40);
    let q = build_bank(Case::Quartic);
    let s = build_bank(Case::Sextic);
    let cases = [
        (q.phi(), q.phi().nth_derivative(3), 1.0),
        (q.psi(), q.psi().nth_derivative(3), -1.0),
        (s.phi(), s.phi().nth_derivative(5), -0.5),
    ];
    let mut worst: f64 = 0.0;
    for (f, d, c) in &cases {
        for x in POINTS {
            let lhs = d.eval(x, &ctx).unwrap().value;
            let rhs = f.eval(x, &ctx).unwrap().value * (c * x);
            worst = worst.max(dev(&lhs, &rhs));
        }
    }
    (
        worst <= 1e-20,
        format!("max residual = {worst:.3e}, tolerance 1e-20"),
    )
}

fn criterion_3_density_asymptote_coefficients() -> Outcome {
    let ctx = PrecisionContext::digits(16);
    let q = averaged_density_coefficient(&build_bank(Case::Quartic), 20.0, 50.0, 0.05, &ctx).unwrap();
    let s = averaged_density_coefficient(&build_bank(Case::Sextic), 20.0, 50.0, 0.05, &ctx).unwrap();
    let ok_q = (q - 0.276).abs() <= 0.005;
    let ok_s = (s - 0.270).abs() <= 0.005;
    (
        ok_q && ok_s,
        format!("quartic {q:.5} (0.276 ± 0.005: {ok_q}), sextic {s:.5} (0.270 ± 0.005: {ok_s})"),
    )
}

fn criterion_4_contour_independence() -> Outcome {
    let ctx = PrecisionContext::digits(30);
    let series = imag_g4_series(1.0, &ctx).unwrap().value;
    let vals: Vec<Float> = [-0.4, -0.25, -0.1]
        .iter()
        .map(|&g| meijer_imag_g4(1.0, Some(g), &ctx).unwrap().value)
        .collect();
    let mut spread: f64 = 0.0;
    let mut to_series: f64 = 0.0;
    for (i, v) in vals.iter().enumerate() {
        to_series = to_series.max(dev(v, &series));
        for w in &vals[i + 1..] {
            spread = spread.max(dev(v, w));
        }
    }
    (
        spread <= 1e-10 && to_series <= 1e-10,
        format!("spread over γ = {spread:.3e}, max distance to series = {to_series:.3e}"),
    )
}

fn criterion_5_scaling_identities() -> Outcome {
    let ctx = PrecisionContext::digits(30);
    let q = build_bank(Case::Quartic);
    let s = build_bank(Case::Sextic);
    let prec = ctx.working_bits();
    let r2 = Float::with_val(prec, 2).sqrt();
    let r6 = Float::with_val(prec, Float::with_val(prec, 3).ln() / 6u32).exp();
    let mut worst: f64 = 0.0;
    for i in 0..=20 {
        let x = 0.25 * i as f64;
        let a = levy_g(4.0, Float::with_val(prec, &r2 * x).to_f64(), &ctx)
            .unwrap()
            .value
            * &r2;
        worst = worst.max(dev(
            &a,
            &q.phi()
                .eval(Float::with_val(prec, &r2 * x).to_f64() / r2.to_f64(), &ctx)
                .unwrap()
                .value,
        ));
        let b = levy_g(6.0, Float::with_val(prec, &r6 * x).to_f64(), &ctx)
            .unwrap()
            .value
            * &r6;
        worst = worst.max(dev(
            &b,
            &s.phi()
                .eval(Float::with_val(prec, &r6 * x).to_f64() / r6.to_f64(), &ctx)
                .unwrap()
                .value,
        ));
    }
    (
        worst <= 1e-10,
        format!("max deviation = {worst:.3e}, tolerance 1e-10"),
    )
}

fn criterion_6_diagonal_limit() -> Outcome {
    let ctx = PrecisionContext::digits(30);
    let mut ok = true;
    let mut detail = Vec::new();
    for case in [Case::Quartic, Case::Sextic] {
        let bank = build_bank(case);
        let sign = case.diagonal_sign() as f64;
        for eps in [1e-4, 1e-6] {
            let mut worst: f64 = 0.0;
            for x in [0.5, 1.0, 2.0] {
                let k = kernel(&bank, x, x + eps, &ctx).unwrap().to_f64();
                let r = density(&bank, x, &ctx).unwrap().to_f64();
                worst = worst.max((k - sign * r).abs());
            }
            ok &= worst <= 10.0 * eps;
            detail.push(format!("{} ε={eps:e}: {worst:.2e}", case.name()));
        }
    }
    (ok, detail.join(", "))
}

fn criterion_7_precision_study() -> Outcome {
    let bank = build_bank(Case::Quartic);
    let xs: Vec<f64> = (0..=400).map(|i| 0.05 * i as f64).collect();
    let study = precision_study(&bank, 1.0 / 6.0, &[10, 15], &xs).unwrap();
    let e10 = study.agreement_extent(0, 1e-4);
    let e15 = study.agreement_extent(1, 1e-4);
    let finite = study.breaks_down(0, 1e-4) && study.breaks_down(1, 1e-4);
    let ok = matches!((e10, e15), (Some(a), Some(b)) if b > a) && finite;
    let show = |e: Option<f64>| e.map_or("none".to_string(), |x| format!("{x:.2}"));
    let (e10, e15) = (show(e10), show(e15));
    (
        ok,
        format!("agreement within 1e-4 up to x = {e10} (p = 10), {e15} (p = 15); both break down: {finite}"),
    )
}

fn criterion_8_negativity_and_parity() -> Outcome {
    let ctx = PrecisionContext::digits(20);
    let mut max_corr = f64::NEG_INFINITY;
    let mut parity: f64 = 0.0;
    for case in [Case::Quartic, Case::Sextic] {
        let bank = build_bank(case);
        for i in 0..=100 {
            let x = 0.1 * i as f64;
            max_corr = max_corr.max(correlation(&bank, x, &ctx).unwrap().to_f64());
            let a = density(&bank, x, &ctx).unwrap().to_f64();
            let b = density(&bank, -x, &ctx).unwrap().to_f64();
            parity = parity.max((a - b).abs());
        }
    }
    (
        max_corr <= 0.0 && parity <= 1e-15,
        format!("largest correlation = {max_corr:.3e}, max |ρ(x) − ρ(−x)| = {parity:.3e}"),
    )
}

fn criterion_9_small_x_series() -> Outcome {
    let ctx = PrecisionContext::digits(40);
    let bank = build_bank(Case::Sextic);
    let mut worst_digits = f64::INFINITY;
    for i in -20..=20 {
        let x = 0.1 * i as f64;
        let a = phi6_small(x, 30, &ctx).unwrap();
        let e = bank.phi().eval(x, &ctx).unwrap().value;
        let rel = dev(&a, &e) / e.to_f64().abs();
        worst_digits = worst_digits.min(if rel == 0.0 { f64::INFINITY } else { -rel.log10() });
    }
    let xs = [0.1f64, 0.2, 0.3];
    let ds: Vec<f64> = xs
        .iter()
        .map(|&x| dev(&psi6_small(x, &ctx), &bank.psi().eval(x, &ctx).unwrap().value))
        .collect();
    // Least-squares slope of log d against log x.
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ld: Vec<f64> = ds.iter().map(|d| d.ln()).collect();
    let (mx, md) = (lx.iter().sum::<f64>() / 3.0, ld.iter().sum::<f64>() / 3.0);
    let slope = lx.iter().zip(&ld).map(|(a, b)| (a - mx) * (b - md)).sum::<f64>()
        / lx.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    (worst_digits >= 20.0 && slope >= 9.0,
        format!("phi6_small agrees to {worst_digits:.1} digits on |x| <= 2; psi6_small log-log slope = {slope:.7}"),
    )
}

const CRITERIA: [fn() -> Outcome; 9] = [
    criterion_1_method_triangle,
    criterion_2_ode_residuals,
    criterion_3_density_asymptote_coefficients,
    criterion_4_contour_independence,
    criterion_5_scaling_identities,
    criterion_6_diagonal_limit,
    criterion_7_precision_study,
    criterion_8_negativity_and_parity,
    criterion_9_small_x_series,
];

fn main() -> std::process::ExitCode {
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA.iter().map(|c| s.spawn(c)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (false, "panicked".into())))
            .collect()
    });
    let mut failed = 0;
    for (n, (passed, detail)) in outcomes.iter().enumerate() {
        let tag = if *passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {tag} {detail}", n + 1);
        failed += usize::from(!passed);
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
