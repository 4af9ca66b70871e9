//! Small-x and large-x approximations of the kernel functions and the
//! density, for comparison against the exact closed forms.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::hyperf::q;
use crate::kernels::{density, FunctionBank};
use crate::numeric::PrecisionContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    LargeX,
    SmallX,
}

/// An asymptotic value with its amplitude envelope.
///
/// `envelope` is the positive algebraic-times-exponential factor in front of
/// the oscillation; deviations from the exact function are measured
/// relative to it because the value itself passes through zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticEval {
    pub value: f64,
    pub envelope: f64,
    pub regime: AsymptoticRegime,
    pub leading_power: Rational,
}

impl AsymptoticEval {
    /// `|exact − value| / envelope`.
    pub fn relative_deviation(&self, exact: f64) -> f64 {
        (exact - self.value).abs() / self.envelope
    }
}

fn positive(x: f64, what: &str) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("{what} needs x > 0, got {x}")));
    }
    Ok(())
}

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Leading large-z behaviour of `₀F_n(;c₁,…,c_n;−z) / ΠΓ(c_k)`:
///
/// `2(2π)^{−n/2}/√(1+n) · exp[(1+n)z^{1/(1+n)}cos(π/(1+n))] · z^ξ ·
/// cos[πξ + (1+n)z^{1/(1+n)}sin(π/(1+n))]`, with `λ = Σc_k` and
/// `ξ = (n/2 − λ)/(1+n)`.
pub fn hyper_bessel_asymptotic(c_list: &[Rational], z: f64, ctx: &PrecisionContext) -> Result<Float> {
    if c_list.is_empty() {
        return Err(Error::InvalidParams(
            "hyper-Bessel asymptotic needs n >= 1".into(),
        ));
    }
    positive(z, "hyper-Bessel asymptotic")?;
    let prec = ctx.working_bits();
    let n = c_list.len() as u32;
    let (_, xi) = hyper_bessel_exponents(c_list);
    let pi = pi(prec);
    let z = Float::with_val(prec, z);
    let root = Float::with_val(prec, (&z).pow(Float::with_val(prec, n + 1).recip()));
    let angle = Float::with_val(prec, &pi / (n + 1));
    let scaled = Float::with_val(prec, &root * (n + 1));

    let two_pi = Float::with_val(prec, &pi * 2u32);
    let mut pref = Float::with_val(prec, two_pi.pow(-(n as f64) / 2.0)) * 2u32;
    pref /= Float::with_val(prec, n + 1).sqrt();
    let growth = Float::with_val(prec, &scaled * angle.clone().cos()).exp();
    let xi_f = Float::with_val(prec, &xi);
    let algebraic = Float::with_val(prec, (&z).pow(&xi_f));
    let phase = Float::with_val(prec, &pi * &xi_f) + Float::with_val(prec, &scaled * angle.sin());
    Ok(pref * growth * algebraic * phase.cos())
}

/// `(λ, ξ)` for a parameter list: `λ = Σ c_k` over the list, `ξ = (n/2 − λ)/(1+n)`.
pub fn hyper_bessel_exponents(c_list: &[Rational]) -> (Rational, Rational) {
    let n = c_list.len() as i64;
    let lambda = c_list.iter().fold(Rational::new(), |acc, c| acc + c);
    let xi = (q(n, 2) - lambda.clone()) / Rational::from(n + 1);
    (lambda, xi)
}

/// `√(2/(3π)) x^{−1/3} exp(∓(3/8)x^{4/3}) cos((3√3/8)x^{4/3} + phase)`.
fn quartic_large(x: f64, growth_sign: f64, phase: f64) -> AsymptoticEval {
    let u = x.powf(4.0 / 3.0);
    let envelope = (2.0 / (3.0 * std::f64::consts::PI)).sqrt()
        * x.powf(-1.0 / 3.0)
        * (growth_sign * 3.0 / 8.0 * u).exp();
    let arg = 3.0 * 3f64.sqrt() / 8.0 * u + phase;
    AsymptoticEval {
        value: envelope * arg.cos(),
        envelope,
        regime: AsymptoticRegime::LargeX,
        leading_power: q(-1, 3),
    }
}

/// Large-x form of `φ̂`, decaying as `exp(−(3/8)x^{4/3})`.
pub fn phi4_asym_large(x: f64, _ctx: &PrecisionContext) -> Result<AsymptoticEval> {
    positive(x, "phi4_asym_large")?;
    Ok(quartic_large(x, -1.0, -std::f64::consts::FRAC_PI_6))
}

/// Large-x form of `ψ̂`, growing as `exp(+(3/8)x^{4/3})`.
pub fn psi4_asym_large(x: f64, _ctx: &PrecisionContext) -> Result<AsymptoticEval> {
    positive(x, "psi4_asym_large")?;
    Ok(quartic_large(x, 1.0, 2.0 * std::f64::consts::FRAC_PI_3))
}

/// `κ(x) = (5/3)(x/2)^{6/5}`.
pub fn kappa(x: f64) -> f64 {
    5.0 / 3.0 * (x / 2.0).powf(1.2)
}

/// Angle of the saddle contributions in the sextic large-x forms.
const SEXTIC_ANGLE: f64 = 3.0 * std::f64::consts::PI / 5.0;

fn sextic_prefactor(x: f64) -> f64 {
    (2.0 / x).powf(0.4) / (5.0 * std::f64::consts::PI).sqrt()
}

/// Large-x form of `φ`:
/// `(2/x)^{2/5}/√(5π) {½e^{−κ} + e^{cos(3π/5)κ} cos(sin(3π/5)κ − π/5)}`.
pub fn phi6_asym_large(x: f64, _ctx: &PrecisionContext) -> Result<AsymptoticEval> {
    positive(x, "phi6_asym_large")?;
    let k = kappa(x);
    let pre = sextic_prefactor(x);
    let osc = (SEXTIC_ANGLE.cos() * k).exp();
    let value = pre * (0.5 * (-k).exp() + osc * (SEXTIC_ANGLE.sin() * k - std::f64::consts::PI / 5.0).cos());
    Ok(AsymptoticEval {
        value,
        envelope: pre * (0.5 * (-k).exp() + osc),
        regime: AsymptoticRegime::LargeX,
        leading_power: q(-2, 5),
    })
}

/// Large-x form of `ψ`:
/// `(2/x)^{2/5}/√(5π) {½e^{−κ} − e^{−cos(3π/5)κ} sin(sin(3π/5)κ + π/5)}`.
pub fn psi6_asym_large(x: f64, _ctx: &PrecisionContext) -> Result<AsymptoticEval> {
    positive(x, "psi6_asym_large")?;
    let k = kappa(x);
    let pre = sextic_prefactor(x);
    let osc = (-SEXTIC_ANGLE.cos() * k).exp();
    let value = pre * (0.5 * (-k).exp() - osc * (SEXTIC_ANGLE.sin() * k + std::f64::consts::PI / 5.0).sin());
    Ok(AsymptoticEval {
        value,
        envelope: pre * (0.5 * (-k).exp() + osc),
        regime: AsymptoticRegime::LargeX,
        leading_power: q(-2, 5),
    })
}

/// Taylor series of `φ` about the origin:
/// `(3^{−5/6}/(2π)) Σ_{r<n} (−3^{1/3})^r Γ(r/3 + 1/6) x^{2r} / (2r)!`.
pub fn phi6_small(x: f64, n_terms: usize, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.working_bits();
    let three = Float::with_val(prec, 3);
    let ratio = -Float::with_val(prec, (&three).pow(Float::with_val(prec, 3).recip()));
    let x2 = Float::with_val(prec, Float::with_val(prec, x).square_ref());
    let mut power = Float::with_val(prec, 1);
    let mut fact = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 0);
    for r in 0..n_terms as u32 {
        if r > 0 {
            power *= Float::with_val(prec, &ratio * &x2);
            fact *= (2 * r - 1) * (2 * r);
        }
        let g = Float::with_val(prec, Rational::from((2 * r as i64 + 1, 6))).gamma();
        sum += Float::with_val(prec, &power * g) / &fact;
    }
    let pref = Float::with_val(prec, (&three).pow(Float::with_val(prec, -5) / 6u32)) / (pi(prec) * 2u32);
    Ok(sum * pref)
}

/// Odd Taylor polynomial of `ψ` through `x⁷`:
/// `−3^{1/3}/(3Γ(2/3)) x + 3^{1/6}Γ(2/3)/(12π) x³ − 3^{1/3}/(15120 Γ(2/3)) x⁷`.
///
/// The `x⁷` coefficient is `a₁/5040`, fixed by `ψ⁽⁵⁾ = (x/2)ψ`; there is no
/// `x⁵` term, so the remainder is `O(x⁹)`.
pub fn psi6_small(x: f64, ctx: &PrecisionContext) -> Float {
    let prec = ctx.working_bits();
    let g23 = Float::with_val(prec, Rational::from((2, 3))).gamma();
    let cube_root3 = Float::with_val(
        prec,
        Float::with_val(prec, 3).pow(Float::with_val(prec, 3).recip()),
    );
    let sixth_root3 = Float::with_val(prec, cube_root3.clone().sqrt());
    let a1 = -Float::with_val(prec, &cube_root3 / (Float::with_val(prec, &g23 * 3u32)));
    let a3 = Float::with_val(prec, &sixth_root3 * &g23) / (pi(prec) * 12u32);
    let a7 = Float::with_val(prec, &a1 / 5040u32);
    let x = Float::with_val(prec, x);
    let x2 = Float::with_val(prec, x.square_ref());
    let x3 = Float::with_val(prec, &x2 * &x);
    let x7 = Float::with_val(prec, &x3 * &x2) * &x2;
    a1 * x + a3 * x3 + a7 * x7
}

/// Leading non-oscillating growth of the density: `0.276|x|^{1/3}` for the
/// quartic case and `0.270|x|^{1/5}` for the sextic case.
pub fn density_asym_leading(case: crate::kernels::Case, x: f64) -> f64 {
    let (coef, power) = density_leading_constants(case);
    coef * x.abs().powf(power)
}

/// `(coefficient, exponent)` of [`density_asym_leading`].
pub fn density_leading_constants(case: crate::kernels::Case) -> (f64, f64) {
    match case {
        crate::kernels::Case::Quartic => (0.276, 1.0 / 3.0),
        crate::kernels::Case::Sextic => (0.270, 0.2),
    }
}

/// Mean of `ρ(x)/x^p` over `[a, b]` by the trapezoid rule on a uniform grid
/// of spacing at most `step`. Over a window many oscillations wide this
/// estimates the coefficient of the leading `x^p` growth.
pub fn averaged_density_coefficient(
    bank: &FunctionBank,
    a: f64,
    b: f64,
    step: f64,
    ctx: &PrecisionContext,
) -> Result<f64> {
    if !(a > 0.0 && b > a && step > 0.0) {
        return Err(Error::Domain(format!(
            "averaging window needs 0 < a < b and step > 0, got [{a}, {b}] step {step}"
        )));
    }
    let (_, power) = density_leading_constants(bank.case());
    let n = ((b - a) / step).ceil() as usize;
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..=n {
        let x = a + h * i as f64;
        let v = density(bank, x, ctx)?.to_f64() / x.powf(power);
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        total += w * v;
    }
    Ok(total / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyper_bessel_bookkeeping() {
        let (lambda, xi) = hyper_bessel_exponents(&[q(3, 4), q(5, 4)]);
        assert_eq!(lambda, 2);
        assert_eq!(xi, q(-1, 3));
        let ctx = PrecisionContext::digits(15);
        assert!(hyper_bessel_asymptotic(&[q(1, 2)], 0.0, &ctx).is_err());
        assert!(hyper_bessel_asymptotic(&[], 1.0, &ctx).is_err());
    }

    #[test]
    fn leading_powers_and_kappa() {
        let ctx = PrecisionContext::digits(15);
        assert_eq!(phi4_asym_large(3.0, &ctx).unwrap().leading_power, q(-1, 3));
        assert_eq!(psi4_asym_large(3.0, &ctx).unwrap().leading_power, q(-1, 3));
        assert_eq!(phi6_asym_large(3.0, &ctx).unwrap().leading_power, q(-2, 5));
        assert_eq!(psi6_asym_large(3.0, &ctx).unwrap().leading_power, q(-2, 5));
        assert!((kappa(2.0) - 5.0 / 3.0).abs() < 1e-15);
        assert!(phi4_asym_large(0.0, &ctx).is_err());
        assert!(psi6_asym_large(-1.0, &ctx).is_err());
    }

    #[test]
    fn quartic_phase_extremum() {
        // cos argument vanishes where (3√3/8)x^{4/3} = π/6.
        let ctx = PrecisionContext::digits(15);
        let x = (std::f64::consts::FRAC_PI_6 * 8.0 / (3.0 * 3f64.sqrt())).powf(0.75);
        let a = phi4_asym_large(x, &ctx).unwrap();
        assert!((a.value - a.envelope).abs() < 1e-14);
        let b = psi4_asym_large(10.0, &ctx).unwrap();
        assert!(b.envelope > phi4_asym_large(10.0, &ctx).unwrap().envelope * 1e6);
    }

    #[test]
    fn density_leading_examples() {
        use crate::kernels::Case;
        assert!((density_asym_leading(Case::Quartic, 27.0) - 0.828).abs() < 1e-12);
        assert!((density_asym_leading(Case::Sextic, 32.0) - 0.540).abs() < 1e-12);
        assert_eq!(
            density_asym_leading(Case::Sextic, -32.0),
            density_asym_leading(Case::Sextic, 32.0)
        );
    }

    #[test]
    fn psi6_small_is_odd_with_leading_slope() {
        let ctx = PrecisionContext::digits(30);
        assert!(psi6_small(0.0, &ctx).is_zero());
        let h = 1e-8;
        let slope = psi6_small(h, &ctx).to_f64() / h;
        let g23 = Float::with_val(100, Rational::from((2, 3))).gamma().to_f64();
        assert!((slope + 3f64.cbrt() / (3.0 * g23)).abs() < 1e-12);
        assert_eq!(psi6_small(0.4, &ctx).to_f64(), -psi6_small(-0.4, &ctx).to_f64());
    }
}
