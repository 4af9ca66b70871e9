//! Closed-form Mellin transforms of g₄, g₆ and a direct numerical Mellin
//! integral to check them against.

use rug::float::Constant;
use rug::{Float, Rational};

use super::meijer::{imag_g4_expr, imag_g6_expr};
use super::quadrature::{try_integrate, GaussLegendre};
use crate::error::{Error, Result};
use crate::hyperf::HypExpr;
use crate::kernels::{quartic_phi, sextic_phi, Case};
use crate::numeric::{Complex, LogGamma, PrecisionContext};

fn check_strip(s: &Complex) -> Result<()> {
    let re = s.re.to_f64();
    if !(re > 0.0 && re < 1.0) {
        return Err(Error::Domain(format!(
            "Mellin transform needs 0 < Re(s) < 1, got Re(s) = {re}"
        )));
    }
    Ok(())
}

/// `(1/(kπ)) c^{(1−s)/k} e^{−iπs/2} Γ(s) Γ((1−s)/k)`.
fn mellin_star(s: &Complex, k: u32, c: u32, ctx: &PrecisionContext) -> Result<Complex> {
    check_strip(s)?;
    let prec = ctx.working_bits();
    let s = Complex::new(Float::with_val(prec, &s.re), Float::with_val(prec, &s.im));
    let lg = LogGamma::new(prec);
    let one = Complex::with_val(prec, 1.0, 0.0);
    let inv_k = Complex::from_real(Float::with_val(prec, k).recip());
    let w = &(&one - &s) * &inv_k;
    let ln_c = Float::with_val(prec, c).ln();
    let pi = Float::with_val(prec, Constant::Pi);

    let mut log = &lg.ln_gamma_mod_2pi(&s)? + &lg.ln_gamma_mod_2pi(&w)?;
    log = &log + &w.scale(&ln_c);
    // e^{−iπs/2}
    let half_pi = Float::with_val(prec, &pi / 2u32);
    let rot = Complex::new(
        Float::with_val(prec, &s.im * &half_pi),
        -Float::with_val(prec, &s.re * &half_pi),
    );
    log = &log + &rot;
    log.re -= Float::with_val(prec, &pi * k).ln();
    Ok(log.exp())
}

/// Mellin transform of `g₄(x) = (1/2π)∫e^{−y⁴/4}e^{−ixy}dy` on `0 < Re(s) < 1`.
pub fn mellin_g4_star(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    mellin_star(s, 4, 4, ctx)
}

/// Mellin transform of `g₆(x) = (1/2π)∫e^{−y⁶/3}e^{−ixy}dy` on `0 < Re(s) < 1`.
pub fn mellin_g6_star(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    mellin_star(s, 6, 3, ctx)
}

/// `∫₀¹ x^{s−1} e(x) dx` by termwise integration of the power series.
fn unit_moment(e: &HypExpr, s: f64, prec: u32, eps: f64) -> Float {
    let s = Rational::from_f64(s).expect("finite s");
    let mut total = Float::with_val(prec, 0);
    for t in e.terms() {
        let c = t.coeff.realize(prec);
        let lambda = t.arg_scale.realize(prec);
        let mut coef = Float::with_val(prec, 1);
        let mut j: u32 = 0;
        loop {
            let exponent = Rational::from(&s + (t.power + t.arg_power * j));
            let contrib = Float::with_val(prec, &coef / Float::with_val(prec, &exponent));
            total += Float::with_val(prec, &contrib * &c);
            if j > 4 && contrib.clone().abs() < eps {
                break;
            }
            // advance coefficient of λ^j x^{k+mj}
            for a in t.params.upper() {
                coef *= Float::with_val(prec, Rational::from(a + j));
            }
            for b in t.params.lower() {
                coef /= Float::with_val(prec, Rational::from(b + j));
            }
            coef /= j + 1;
            coef *= &lambda;
            j += 1;
        }
    }
    total
}

/// Tail `∫_X^∞ x^{s−1} h(x) dx` of the large-x expansion
/// `h(x) = ∫₀^∞ e^{−t^α/c} sin(xt) dt ~ Σ_j (−1)^{αj/2} f^{(αj)}(0) / x^{αj+1}`,
/// where `f^{(αj)}(0) = (αj)! (−1)^j / (c^j j!)`.
fn sine_tail(alpha: u32, c: u32, s: f64, big_x: f64, prec: u32) -> Float {
    let ln_x = Float::with_val(prec, big_x).ln();
    let mut total = Float::with_val(prec, 0);
    let mut prev = f64::INFINITY;
    for j in 0u32..40 {
        let order = alpha * j;
        let mut term = Float::with_val(prec, Float::factorial(order));
        term /= Float::with_val(prec, Float::factorial(j));
        term /= Float::with_val(prec, Float::u_pow_u(c, j));
        if (j + order / 2) % 2 == 1 {
            term = -term;
        }
        let p = order as f64 + 1.0;
        term *= Float::with_val(prec, &ln_x * (s - p)).exp();
        term /= p - s;
        let mag = term.to_f64().abs();
        if mag > prev || mag == 0.0 {
            break;
        }
        prev = mag;
        total += term;
    }
    total
}

/// Direct numerical Mellin integral `∫₀^∞ x^{s−1} g(x) dx` of the real and
/// imaginary parts of `g₄` or `g₆`, for real `s` in (0, 1).
///
/// The function values come from the hypergeometric forms; `[0, 1]` is
/// integrated termwise, `[1, X]` by Gauss–Legendre panels and the
/// imaginary part's algebraic tail from its large-x expansion.
pub fn mellin_numeric(case: Case, s: f64, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!(
            "numeric Mellin integral needs 0 < s < 1, got {s}"
        )));
    }
    let prec = ctx.working_bits();
    let eps = ctx.target_epsilon() * 1e-3;
    // Past the imaginary cut only the algebraic expansion is used, so the
    // cut must sit where the oscillating exponential part is negligible.
    let (re_expr, im_expr, alpha, c, re_cut, im_cut) = match case {
        Case::Quartic => (quartic_phi(), imag_g4_expr(), 4, 4, 30.0, 30.0),
        Case::Sextic => (sextic_phi(), imag_g6_expr(), 6, 3, 60.0, 80.0),
    };
    let rule = GaussLegendre::for_digits(ctx.target_digits(), prec);
    let sf = Float::with_val(prec, s - 1.0);
    let weight = |x: &Float| (Float::with_val(prec, x.ln_ref()) * &sf).exp();
    let one = Float::with_val(prec, 1);

    let part = |e: &HypExpr, cut: f64| -> Result<Float> {
        let f = |x: &Float| -> Result<Float> {
            let v = e.eval(x, ctx)?;
            Ok(Float::with_val(prec, &v.value * weight(x)))
        };
        let head = unit_moment(e, s, prec, eps);
        let cut = Float::with_val(prec, cut);
        let body = try_integrate(f, &one, &cut, 0.5, ctx.target_epsilon(), &rule)?;
        Ok(head + body.value)
    };
    let re = part(&re_expr, re_cut)?;
    // The hypergeometric form carries the opposite sign of Im g under the
    // e^{−ixy} convention.
    let im_body = part(&im_expr, im_cut)?;
    let pi = Float::with_val(prec, Constant::Pi);
    let tail = sine_tail(alpha, c, s, im_cut, prec) / pi;
    let im = -(im_body + tail);
    Ok((re, im))
}
