//! Adaptive Gauss–Legendre panel quadrature and the integral
//! representations of φ̂, ψ̂, φ, ψ and the Lévy functions.

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::{EvalResult, PrecisionContext};

/// Maximum bisection depth below a starting panel.
const MAX_DEPTH: u32 = 24;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl GaussLegendre {
    /// Rule with `n` points computed by Newton iteration at `prec` bits.
    pub fn new(n: usize, prec: u32) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let wp = prec + 32;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 1..=n {
            let guess = ((i as f64 - 0.25) / (n as f64 + 0.5)) * std::f64::consts::PI;
            let mut x = Float::with_val(wp, guess.cos());
            let mut dp = Float::new(wp);
            for _ in 0..200 {
                let (p, d) = legendre(n, &x);
                let dx = Float::with_val(wp, &p / &d);
                x -= &dx;
                dp = d;
                if dx.is_zero() || dx.get_exp().is_none_or(|e| e < -(prec as i32) - 8) {
                    let (_, d) = legendre(n, &x);
                    dp = d;
                    break;
                }
            }
            let one_minus = Float::with_val(wp, 1 - Float::with_val(wp, x.square_ref()));
            let w = Float::with_val(wp, 2u32 / (one_minus * Float::with_val(wp, dp.square_ref())));
            nodes.push(Float::with_val(prec, &x));
            weights.push(Float::with_val(prec, &w));
        }
        Self { nodes, weights }
    }

    /// Node count giving roughly `digits` correct digits on a panel
    /// resolving one quarter oscillation.
    pub fn for_digits(digits: u32, prec: u32) -> Self {
        let n = ((digits as usize) * 2 / 3 + 10).min(96);
        Self::new(n, prec)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Single application of the rule on `[a, b]`.
    pub fn apply<F>(&self, f: &F, a: &Float, b: &Float) -> Result<Float>
    where
        F: Fn(&Float) -> Result<Float>,
    {
        Ok(self.apply_panel(f, a, b)?.value)
    }

    /// Rule value together with `Σ|wᵢ f(xᵢ)|` over the panel.
    fn apply_panel<F>(&self, f: &F, a: &Float, b: &Float) -> Result<Panel>
    where
        F: Fn(&Float) -> Result<Float>,
    {
        let prec = a.prec();
        let half = Float::with_val(prec, Float::with_val(prec, b - a) / 2u32);
        let mid = Float::with_val(prec, Float::with_val(prec, a + b) / 2u32);
        let mut acc = Float::with_val(prec, 0);
        let mut abs = Float::with_val(prec, 0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = Float::with_val(prec, &mid + Float::with_val(prec, &half * x));
            let v = Float::with_val(prec, w * f(&t)?);
            abs += Float::with_val(prec, v.abs_ref());
            acc += v;
        }
        Ok(Panel {
            value: acc * &half,
            abs: abs * half,
        })
    }
}

struct Panel {
    value: Float,
    abs: Float,
}

/// Returns `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let mut p2 = Float::with_val(prec, x * &p1) * (2 * k - 1) as u32;
        p2 -= Float::with_val(prec, &p0 * (k - 1) as u32);
        p2 /= k as u32;
        p0 = p1;
        p1 = p2;
    }
    let num = Float::with_val(prec, x * &p1) - &p0;
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    let d = Float::with_val(prec, num * n as u32) / den;
    (p1, d)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone)]
pub struct Integral {
    pub value: Float,
    pub abs_error: f64,
    pub evaluations: usize,
    /// Sum of absolute panel contributions, a measure of cancellation.
    pub magnitude: Float,
}

/// Integrates `f` over `[a, b]` split into panels no wider than `width`.
///
/// Each panel is compared against its two halves; panels whose difference
/// exceeds their share of `tol` are bisected. `tol` is absolute.
pub fn integrate<F>(
    f: F,
    a: &Float,
    b: &Float,
    width: f64,
    tol: f64,
    rule: &GaussLegendre,
) -> Result<Integral>
where
    F: Fn(&Float) -> Float,
{
    try_integrate(|t| Ok(f(t)), a, b, width, tol, rule)
}

/// [`integrate`] for integrands that can fail; the first error aborts.
pub fn try_integrate<F>(
    f: F,
    a: &Float,
    b: &Float,
    width: f64,
    tol: f64,
    rule: &GaussLegendre,
) -> Result<Integral>
where
    F: Fn(&Float) -> Result<Float>,
{
    let prec = a.prec();
    let len = Float::with_val(prec, b - a).to_f64();
    let panels = ((len / width).ceil() as usize).max(1);
    let step = Float::with_val(prec, Float::with_val(prec, b - a) / panels as u32);
    let mut state = Accumulator {
        value: Float::with_val(prec, 0),
        magnitude: Float::with_val(prec, 0),
        abs_error: 0.0,
        evaluations: 0,
    };
    let share = tol / panels as f64;
    for i in 0..panels {
        let lo = Float::with_val(prec, a + Float::with_val(prec, &step * i as u32));
        let hi = if i + 1 == panels {
            b.clone()
        } else {
            Float::with_val(prec, a + Float::with_val(prec, &step * (i + 1) as u32))
        };
        let coarse = rule.apply_panel(&f, &lo, &hi)?.value;
        state.evaluations += rule.len();
        refine(&f, rule, &lo, &hi, coarse, share, 0, &mut state)?;
    }
    let mut rounding = Float::with_val(prec, &state.magnitude * (rule.len() as u32 * 4));
    rounding >>= prec as i32;
    Ok(Integral {
        abs_error: state.abs_error + rounding.to_f64(),
        value: state.value,
        evaluations: state.evaluations,
        magnitude: state.magnitude,
    })
}

struct Accumulator {
    value: Float,
    magnitude: Float,
    abs_error: f64,
    evaluations: usize,
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    rule: &GaussLegendre,
    a: &Float,
    b: &Float,
    coarse: Float,
    tol: f64,
    depth: u32,
    state: &mut Accumulator,
) -> Result<()>
where
    F: Fn(&Float) -> Result<Float>,
{
    let prec = a.prec();
    let mid = Float::with_val(prec, Float::with_val(prec, a + b) / 2u32);
    let Panel {
        value: left,
        abs: left_abs,
    } = rule.apply_panel(f, a, &mid)?;
    let Panel {
        value: right,
        abs: right_abs,
    } = rule.apply_panel(f, &mid, b)?;
    state.evaluations += 2 * rule.len();
    let fine = Float::with_val(prec, &left + &right);
    let diff = Float::with_val(prec, &fine - &coarse).abs().to_f64();
    // Below this the two estimates differ only by rounding of the samples.
    let mut floor = Float::with_val(prec, &left_abs + &right_abs) * (16 * rule.len() as u32);
    floor >>= prec as i32;
    if diff <= tol || diff <= floor.to_f64() {
        state.abs_error += diff;
        state.magnitude += Float::with_val(prec, left.abs_ref());
        state.magnitude += Float::with_val(prec, right.abs_ref());
        state.value += fine;
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(Error::ToleranceNotMet {
            tolerance: tol,
            detail: format!(
                "panel [{}, {}] still differs by {diff:e} after {MAX_DEPTH} bisections",
                a.to_f64(),
                b.to_f64()
            ),
        });
    }
    refine(f, rule, a, &mid, left, tol / 2.0, depth + 1, state)?;
    refine(f, rule, &mid, b, right, tol / 2.0, depth + 1, state)
}

/// Which integral representation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrand {
    /// `φ̂⁽ⁿ⁾`, cosine transform of `e^{−t⁴/4}`.
    Phi4,
    /// `ψ̂⁽ⁿ⁾`, sine form with `ω̃ = e^{3iπ/4}`.
    Psi4,
    /// `φ⁽ⁿ⁾`, cosine transform of `e^{−t⁶/3}`.
    Phi6,
    /// `ψ⁽ⁿ⁾`, sinh form with `ω₁ = e^{iπ/3}`.
    Psi6,
    /// Lévy function `g(α, 0; x)`.
    Levy(f64),
}

/// Settings shared by all representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub integrand: Integrand,
    /// Envelope value below which the integrand is treated as zero.
    pub truncation_threshold: f64,
    /// Absolute tolerance on the integral.
    pub tolerance: f64,
}

impl QuadratureSpec {
    pub fn new(integrand: Integrand, ctx: &PrecisionContext) -> Result<Self> {
        let tolerance = ctx.target_epsilon();
        if let Integrand::Levy(alpha) = integrand {
            if !(alpha > 0.0) || !alpha.is_finite() {
                return Err(Error::Domain(format!("Lévy index must be positive, got {alpha}")));
            }
        }
        Ok(Self {
            integrand,
            truncation_threshold: tolerance / 10.0,
            tolerance,
        })
    }

    /// `(power k, divisor c, linear growth rate)` of the log-envelope
    /// `n ln t + rate·|x|·t − t^k / c`.
    fn envelope(&self) -> (f64, f64, f64) {
        match self.integrand {
            Integrand::Phi4 => (4.0, 4.0, 0.0),
            Integrand::Psi4 => (4.0, 4.0, std::f64::consts::FRAC_1_SQRT_2),
            Integrand::Phi6 => (6.0, 3.0, 0.0),
            Integrand::Psi6 => (6.0, 3.0, 0.5),
            Integrand::Levy(alpha) => (alpha, 1.0, 0.0),
        }
    }

    /// Truncation point: past the envelope maximum, with the envelope below
    /// `truncation_threshold`.
    pub fn truncation(&self, x: f64, order: u32) -> f64 {
        let (k, c, rate) = self.envelope();
        let g = rate * x.abs();
        let n = order as f64;
        let log_env = |t: f64| n * t.ln() + g * t - t.powf(k) / c;
        let target = self.truncation_threshold.ln();
        let slope = |t: f64| n / t + g - k * t.powf(k - 1.0) / c;
        let mut t = 0.5f64;
        let step = 0.02 * (1.0 + (c * (1.0 + n + g)).powf(1.0 / k));
        while !(slope(t) < 0.0 && log_env(t) < target) {
            t += step;
        }
        t
    }
}

fn prefactor_pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi).recip()
}

/// Evaluates the representation `spec` (derivative `order`) at `x`.
pub fn quad_eval(spec: &QuadratureSpec, x: f64, order: u32, ctx: &PrecisionContext) -> Result<EvalResult> {
    let prec = ctx.working_bits();
    let xf = Float::with_val(prec, x);
    let t_max = spec.truncation(x, order);
    let width = if x == 0.0 {
        0.5
    } else {
        (std::f64::consts::PI / (4.0 * x.abs())).min(0.5)
    };
    let rule = GaussLegendre::for_digits(ctx.working_digits(), prec);
    let zero = Float::with_val(prec, 0);
    let upper = Float::with_val(prec, t_max);
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let phase = Float::with_val(prec, &half_pi * order);

    let integral = match spec.integrand {
        Integrand::Phi4 | Integrand::Phi6 | Integrand::Levy(_) => {
            let (k, c) = match spec.integrand {
                Integrand::Phi4 => (4.0, 4.0),
                Integrand::Phi6 => (6.0, 3.0),
                Integrand::Levy(alpha) => (alpha, 1.0),
                _ => unreachable!(),
            };
            let kf = Float::with_val(prec, k);
            let integer_power = (k.fract() == 0.0).then_some(k as u32);
            let f = |t: &Float| {
                let tk = match integer_power {
                    Some(p) => Float::with_val(prec, t.pow_u(p)),
                    None => Float::with_val(prec, t.ln_ref()) * &kf,
                };
                let tk = if integer_power.is_some() { tk } else { tk.exp() };
                let env = Float::with_val(prec, -tk / c).exp();
                let arg = Float::with_val(prec, t * &xf) + &phase;
                let mut v = env * arg.cos();
                if order > 0 {
                    v *= t.pow_u(order);
                }
                v
            };
            integrate(f, &zero, &upper, width, spec.tolerance, &rule)?
        }
        Integrand::Psi4 => {
            // Im[2ω̃ (ω̃u)ⁿ sin(ω̃xu + nπ/2)], ω̃ = e^{3iπ/4}
            let omega = unit(prec, 3, 4);
            let omega_n = omega.pow_n(order);
            let coeff = omega_n.mul(&omega).scale_u(2);
            let (wr, wi) = (omega.re.clone(), omega.im.clone());
            let f = |u: &Float| {
                let xu = Float::with_val(prec, u * &xf);
                let a = Float::with_val(prec, &xu * &wr) + &phase;
                let b = Float::with_val(prec, &xu * &wi);
                let (sa, ca) = a.sin_cos(Float::new(prec));
                let (sb, cb) = b.sinh_cosh(Float::new(prec));
                let s = Pair {
                    re: Float::with_val(prec, &sa * &cb),
                    im: Float::with_val(prec, &ca * &sb),
                };
                let env = Float::with_val(prec, -u.pow_u(4) / 4u32).exp();
                let mut v = coeff.mul(&s).im * env;
                if order > 0 {
                    v *= u.pow_u(order);
                }
                v
            };
            integrate(f, &zero, &upper, width, spec.tolerance, &rule)?
        }
        Integrand::Psi6 => {
            // −Im[2ω₁ (ω₁ξ)ⁿ S(ω₁xξ)], S = sinh for even n, cosh for odd n
            let omega = unit(prec, 1, 3);
            let coeff = omega.pow_n(order).mul(&omega).scale_u(2);
            let (wr, wi) = (omega.re.clone(), omega.im.clone());
            let f = |u: &Float| {
                let xu = Float::with_val(prec, u * &xf);
                let a = Float::with_val(prec, &xu * &wr);
                let b = Float::with_val(prec, &xu * &wi);
                let (sa, ca) = a.sinh_cosh(Float::new(prec));
                let (sb, cb) = b.sin_cos(Float::new(prec));
                let s = if order.is_multiple_of(2) {
                    Pair {
                        re: Float::with_val(prec, &sa * &cb),
                        im: Float::with_val(prec, &ca * &sb),
                    }
                } else {
                    Pair {
                        re: Float::with_val(prec, &ca * &cb),
                        im: Float::with_val(prec, &sa * &sb),
                    }
                };
                let env = Float::with_val(prec, -u.pow_u(6) / 3u32).exp();
                let mut v = -coeff.mul(&s).im * env;
                if order > 0 {
                    v *= u.pow_u(order);
                }
                v
            };
            integrate(f, &zero, &upper, width, spec.tolerance, &rule)?
        }
    };

    let scale = prefactor_pi(prec);
    let value = Float::with_val(prec, &integral.value * &scale);
    let peak = Float::with_val(prec, &integral.magnitude * &scale);
    Ok(EvalResult {
        value,
        abs_error_estimate: integral.abs_error * scale.to_f64() + spec.truncation_threshold,
        terms_used: integral.evaluations,
        peak_term_magnitude: peak,
    })
}

/// Minimal complex pair used inside the integrands.
#[derive(Debug, Clone)]
struct Pair {
    re: Float,
    im: Float,
}

impl Pair {
    fn mul(&self, o: &Pair) -> Pair {
        let prec = self.re.prec();
        Pair {
            re: Float::with_val(prec, &self.re * &o.re) - Float::with_val(prec, &self.im * &o.im),
            im: Float::with_val(prec, &self.re * &o.im) + Float::with_val(prec, &self.im * &o.re),
        }
    }

    fn pow_n(&self, n: u32) -> Pair {
        let prec = self.re.prec();
        let mut acc = Pair {
            re: Float::with_val(prec, 1),
            im: Float::with_val(prec, 0),
        };
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    fn scale_u(&self, k: u32) -> Pair {
        Pair {
            re: Float::with_val(self.re.prec(), &self.re * k),
            im: Float::with_val(self.im.prec(), &self.im * k),
        }
    }
}

/// `e^{iπ·num/den}`.
fn unit(prec: u32, num: i32, den: u32) -> Pair {
    let angle = Float::with_val(prec, Constant::Pi) * num / den;
    let (s, c) = angle.sin_cos(Float::new(prec));
    Pair { re: c, im: s }
}

trait PowU {
    fn pow_u(&self, n: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(&self, n: u32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(n))
    }
}

fn quad(integrand: Integrand, x: f64, order: u32, ctx: &PrecisionContext) -> Result<EvalResult> {
    let spec = QuadratureSpec::new(integrand, ctx)?;
    quad_eval(&spec, x, order, ctx)
}

/// `φ̂(x) = (1/π)∫₀^∞ e^{−t⁴/4} cos(tx) dt`.
pub fn quad_phi4(x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Phi4, x, 0, ctx)
}

/// `ψ̂(x) = Im[(2ω̃/π)∫₀^∞ e^{−u⁴/4} sin(ω̃xu) du]`, `ω̃ = e^{3iπ/4}`.
pub fn quad_psi4(x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Psi4, x, 0, ctx)
}

/// `φ(x) = (1/π)∫₀^∞ e^{−t⁶/3} cos(tx) dt`.
pub fn quad_phi6(x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Phi6, x, 0, ctx)
}

/// `ψ(x) = −Im[(2ω₁/π)∫₀^∞ e^{−ξ⁶/3} sinh(ω₁xξ) dξ]`, `ω₁ = e^{iπ/3}`.
pub fn quad_psi6(x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Psi6, x, 0, ctx)
}

/// `n`-th derivative of φ̂ by differentiating under the integral.
pub fn quad_phi4_deriv(x: f64, n: u32, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Phi4, x, n, ctx)
}

pub fn quad_psi4_deriv(x: f64, n: u32, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Psi4, x, n, ctx)
}

pub fn quad_phi6_deriv(x: f64, n: u32, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Phi6, x, n, ctx)
}

pub fn quad_psi6_deriv(x: f64, n: u32, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Psi6, x, n, ctx)
}

/// Lévy function `g(α, 0; x) = (1/π)∫₀^∞ e^{−t^α} cos(xt) dt`.
pub fn levy_g(alpha: f64, x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    quad(Integrand::Levy(alpha), x, 0, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8, 200);
        let a = Float::with_val(200, 0);
        let b = Float::with_val(200, 2);
        // ∫₀² t^15 dt = 2^16/16
        let v = rule.apply(&|t: &Float| Ok(t.pow_u(15)), &a, &b).unwrap();
        let want = Float::with_val(200, 4096);
        assert!(Float::with_val(200, &v - &want).abs() < 1e-50);
    }

    #[test]
    fn gaussian_integral() {
        let ctx = PrecisionContext::digits(30);
        let r = levy_g(2.0, 0.0, &ctx).unwrap();
        let prec = r.value.prec();
        let want = Float::with_val(prec, Constant::Pi).sqrt().recip() / 2u32;
        assert!(Float::with_val(prec, &r.value - &want).abs() < 1e-28);
    }

    #[test]
    fn symmetry() {
        let ctx = PrecisionContext::digits(20);
        for x in [0.7, 2.3] {
            let a = quad_phi4(x, &ctx).unwrap().to_f64();
            let b = quad_phi4(-x, &ctx).unwrap().to_f64();
            assert!((a - b).abs() < 1e-18);
            let a = quad_psi6(x, &ctx).unwrap().to_f64();
            let b = quad_psi6(-x, &ctx).unwrap().to_f64();
            assert!((a + b).abs() < 1e-18);
        }
        assert_eq!(quad_psi4(0.0, &ctx).unwrap().to_f64(), 0.0);
    }

    #[test]
    fn rejects_bad_levy_index() {
        let ctx = PrecisionContext::digits(10);
        assert!(matches!(levy_g(0.0, 1.0, &ctx), Err(Error::Domain(_))));
        assert!(matches!(levy_g(f64::NAN, 1.0, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn truncation_grows_with_growth_rate() {
        let ctx = PrecisionContext::digits(30);
        let s = QuadratureSpec::new(Integrand::Psi4, &ctx).unwrap();
        assert!(s.truncation(10.0, 0) > s.truncation(1.0, 0));
        let p = QuadratureSpec::new(Integrand::Phi4, &ctx).unwrap();
        let t = p.truncation(0.0, 0);
        // e^{−T⁴/4} just below 10^{−31}
        assert!((t.powi(4) / 4.0 - 31.0 * 10f64.ln()).abs() < 2.0);
    }
}
