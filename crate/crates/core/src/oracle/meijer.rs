//! Meijer G-functions as Mellin–Barnes integrals along a vertical line.

use rug::float::Constant;
use rug::{Float, Rational};

use super::quadrature::{try_integrate, GaussLegendre};
use crate::error::{Error, Result};
use crate::hyperf::{q, ExactConst, HypExpr, HypParams, HypTerm};
use crate::numeric::{Complex, EvalResult, LogGamma, PrecisionContext};

/// Offset of the default line from the rightmost left pole when there are
/// no right poles.
const LEFT_ONLY_OFFSET: f64 = 0.35;

/// Abscissa step used while searching for the truncation height.
const HEIGHT_STEP: f64 = 1.0;

/// Order, parameters, argument and contour of `G^{m,n}_{p,q}(z | a; b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerSpec {
    m: usize,
    n: usize,
    a_params: Vec<Rational>,
    b_params: Vec<Rational>,
    argument: Rational,
    gamma_line: f64,
    c_star: Rational,
    mu: Rational,
}

impl MeijerSpec {
    /// Spec with the contour placed midway between the two pole families.
    pub fn new(
        m: usize,
        n: usize,
        a_params: Vec<Rational>,
        b_params: Vec<Rational>,
        argument: Rational,
    ) -> Result<Self> {
        let (p, q) = (a_params.len(), b_params.len());
        if m > q || n > p {
            return Err(Error::InvalidParams(format!(
                "need 0 <= m <= q and 0 <= n <= p, got m={m}, n={n}, p={p}, q={q}"
            )));
        }
        if argument.cmp0() != std::cmp::Ordering::Greater {
            return Err(Error::Domain(format!(
                "argument must be positive, got {argument}"
            )));
        }
        let c_star = Rational::from((m + n) as i64 * 2 - (p + q) as i64) / 2;
        let sum = |v: &[Rational]| v.iter().fold(Rational::new(), |acc, r| acc + r);
        let mu = sum(&b_params) - sum(&a_params) + Rational::from((p as i64 - q as i64, 2)) + 1;
        let gamma_line = default_gamma_line(m, n, &a_params, &b_params);
        let spec = Self {
            m,
            n,
            a_params,
            b_params,
            argument,
            gamma_line,
            c_star,
            mu,
        };
        spec.check_line(gamma_line)?;
        Ok(spec)
    }

    /// Same spec integrated along `Re(s) = gamma_line`.
    pub fn with_gamma_line(mut self, gamma_line: f64) -> Result<Self> {
        self.check_line(gamma_line)?;
        self.gamma_line = gamma_line;
        Ok(self)
    }

    fn left_poles_max(&self) -> Option<f64> {
        self.b_params[..self.m]
            .iter()
            .map(|b| -b.to_f64())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    fn right_poles_min(&self) -> Option<f64> {
        self.a_params[..self.n]
            .iter()
            .map(|a| 1.0 - a.to_f64())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
    }

    fn check_line(&self, gamma: f64) -> Result<()> {
        let fail = |detail: String| Error::Contour {
            gamma_line: gamma,
            detail,
        };
        if !gamma.is_finite() {
            return Err(fail("abscissa is not finite".into()));
        }
        if let Some(l) = self.left_poles_max() {
            if gamma <= l {
                return Err(fail(format!("left pole at {l} is not to the left of the line")));
            }
        }
        if let Some(r) = self.right_poles_min() {
            if gamma >= r {
                return Err(fail(format!("right pole at {r} is not to the right of the line")));
            }
        }
        if self.c_star.cmp0() != std::cmp::Ordering::Greater {
            return Err(fail(format!(
                "c* = {} <= 0; only the vertical-line case c* > 0 is supported",
                self.c_star
            )));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.a_params.len()
    }

    pub fn q(&self) -> usize {
        self.b_params.len()
    }

    pub fn a_params(&self) -> &[Rational] {
        &self.a_params
    }

    pub fn b_params(&self) -> &[Rational] {
        &self.b_params
    }

    pub fn argument(&self) -> &Rational {
        &self.argument
    }

    pub fn gamma_line(&self) -> f64 {
        self.gamma_line
    }

    /// `c⋆ = m + n − (p + q)/2`.
    pub fn c_star(&self) -> &Rational {
        &self.c_star
    }

    /// `μ = Σb − Σa + (p − q)/2 + 1`.
    pub fn mu(&self) -> &Rational {
        &self.mu
    }
}

/// Midpoint between the rightmost left pole and the leftmost right pole, or
/// a fixed offset right of the left poles when there are no right poles.
pub fn default_gamma_line(m: usize, n: usize, a: &[Rational], b: &[Rational]) -> f64 {
    let left = b[..m]
        .iter()
        .map(|b| -b.to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let right = a[..n]
        .iter()
        .map(|a| 1.0 - a.to_f64())
        .fold(f64::INFINITY, f64::min);
    match (left.is_finite(), right.is_finite()) {
        (true, true) => 0.5 * (left + right),
        (true, false) => left + LEFT_ONLY_OFFSET,
        (false, true) => right - LEFT_ONLY_OFFSET,
        (false, false) => 0.0,
    }
}

/// `G^{m,n}_{p,q}(z)` by integrating along `Re(s) = γ`:
/// `G = (1/π) ∫₀^H Re[F(γ + it) z^{−γ−it}] dt`, with `F` assembled from
/// log-gamma values so that neither factor overflows.
pub fn meijer_line_integral(spec: &MeijerSpec, ctx: &PrecisionContext) -> Result<EvalResult> {
    spec.check_line(spec.gamma_line)?;
    let prec = ctx.working_bits();
    let lg = LogGamma::new(prec);
    let ln_z = Float::with_val(prec, &spec.argument).ln();
    let gamma = Float::with_val(prec, spec.gamma_line);
    let (m, n) = (spec.m, spec.n);
    let a: Vec<Float> = spec.a_params.iter().map(|r| Float::with_val(prec, r)).collect();
    let b: Vec<Float> = spec.b_params.iter().map(|r| Float::with_val(prec, r)).collect();

    let log_integrand = |t: &Float| -> Result<Complex> {
        let s = Complex::new(gamma.clone(), t.clone());
        let neg = Complex::new(-gamma.clone(), -t.clone());
        let mut acc = Complex::new(Float::with_val(prec, 0), Float::with_val(prec, 0));
        for bj in &b[..m] {
            acc = &acc + &lg.ln_gamma_mod_2pi(&shift(&s, bj))?;
        }
        for aj in &a[..n] {
            let one_minus = Float::with_val(prec, 1 - aj);
            acc = &acc + &lg.ln_gamma_mod_2pi(&shift(&neg, &one_minus))?;
        }
        for aj in &a[n..] {
            acc = &acc - &lg.ln_gamma_mod_2pi(&shift(&s, aj))?;
        }
        for bj in &b[m..] {
            let one_minus = Float::with_val(prec, 1 - bj);
            acc = &acc - &lg.ln_gamma_mod_2pi(&shift(&neg, &one_minus))?;
        }
        Ok(&acc - &s.scale(&ln_z))
    };
    let integrand = |t: &Float| -> Result<Float> {
        let l = log_integrand(t)?;
        Ok(l.re.exp() * l.im.cos())
    };

    // Truncation height: three consecutive samples below the threshold.
    let threshold = (ctx.target_digits() as f64 + 2.0) * std::f64::consts::LN_10;
    let mut peak_log = f64::NEG_INFINITY;
    let mut below = 0;
    let mut t = 0.0f64;
    let mut height = 0.0f64;
    while below < 3 {
        let l = log_integrand(&Float::with_val(prec, t))?;
        let lr = l.re.to_f64();
        peak_log = peak_log.max(lr);
        if lr < peak_log - threshold {
            below += 1;
        } else {
            below = 0;
            height = t;
        }
        t += HEIGHT_STEP;
        if t > 1e5 {
            return Err(Error::ToleranceNotMet {
                tolerance: ctx.target_epsilon(),
                detail: "Mellin–Barnes integrand did not decay along the line".into(),
            });
        }
    }
    let height = height + 3.0 * HEIGHT_STEP;

    // Phase speed: d/dt Im ln F ≈ (q − p)·ln t − ln z up to bounded terms.
    // Each panel covers about two periods.
    let omega = ln_z.to_f64().abs() + (spec.q() as f64 - spec.p() as f64).abs() * (1.0 + height).ln() + 1.0;
    let width = (4.0 * std::f64::consts::PI / omega).min(4.0);
    let tol = ctx.target_epsilon() * peak_log.exp();
    let rule = GaussLegendre::for_digits(ctx.working_digits(), prec);
    let zero = Float::with_val(prec, 0);
    let integral = try_integrate(
        integrand,
        &zero,
        &Float::with_val(prec, height),
        width,
        tol,
        &rule,
    )?;

    let pi = Float::with_val(prec, Constant::Pi);
    let value = Float::with_val(prec, &integral.value / &pi);
    Ok(EvalResult {
        value,
        abs_error_estimate: integral.abs_error / std::f64::consts::PI,
        terms_used: integral.evaluations,
        peak_term_magnitude: Float::with_val(prec, &integral.magnitude / &pi),
    })
}

fn shift(s: &Complex, by: &Float) -> Complex {
    Complex::new(Float::with_val(s.prec(), &s.re + by), s.im.clone())
}

fn rationals(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(n, d)| q(n, d)).collect()
}

fn exact_arg(x: f64) -> Result<Rational> {
    Rational::from_f64(x).ok_or_else(|| Error::Domain(format!("non-finite argument {x}")))
}

fn nonzero(x: f64) -> Result<()> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!(
            "the Mellin–Barnes representation needs a finite nonzero x, got {x}"
        )));
    }
    Ok(())
}

/// `G^{2,0}_{0,3}(x⁴/64 | −; 1/4, 3/4, 1/2)`.
pub fn spec_phi4(x: f64) -> Result<MeijerSpec> {
    nonzero(x)?;
    let z = exact_arg(x)?.pow_i(4) / 64;
    MeijerSpec::new(2, 0, vec![], rationals(&[(1, 4), (3, 4), (1, 2)]), z)
}

/// `G^{2,1}_{1,4}(y⁴/64 | 1; 1/2, 1, 1/4, 3/4)`.
pub fn spec_imag_g4(y: f64) -> Result<MeijerSpec> {
    nonzero(y)?;
    let z = exact_arg(y)?.pow_i(4) / 64;
    MeijerSpec::new(
        2,
        1,
        rationals(&[(1, 1)]),
        rationals(&[(1, 2), (1, 1), (1, 4), (3, 4)]),
        z,
    )
}

/// `G^{3,0}_{0,5}(3x⁶/6⁶ | −; 1/6, 1/2, 5/6, 1/3, 2/3)`.
pub fn spec_phi6(x: f64) -> Result<MeijerSpec> {
    nonzero(x)?;
    let z = exact_arg(x)?.pow_i(6) * q(3, 46656);
    MeijerSpec::new(
        3,
        0,
        vec![],
        rationals(&[(1, 6), (1, 2), (5, 6), (1, 3), (2, 3)]),
        z,
    )
}

/// `G^{3,1}_{1,6}(3x⁶/6⁶ | 1; 1/3, 2/3, 1, 1/6, 1/2, 5/6)`.
pub fn spec_imag_g6(x: f64) -> Result<MeijerSpec> {
    nonzero(x)?;
    let z = exact_arg(x)?.pow_i(6) * q(3, 46656);
    MeijerSpec::new(
        3,
        1,
        rationals(&[(1, 1)]),
        rationals(&[(1, 3), (2, 3), (1, 1), (1, 6), (1, 2), (5, 6)]),
        z,
    )
}

/// `√(k/π) / x · G`, the common prefactor of the four representations.
fn scaled(g: EvalResult, k: u32, x: f64) -> EvalResult {
    let prec = g.value.prec();
    let pre = Float::with_val(
        prec,
        Float::with_val(prec, k) / Float::with_val(prec, Constant::Pi),
    )
    .sqrt()
        / Float::with_val(prec, x);
    let f = pre.to_f64().abs();
    EvalResult {
        value: Float::with_val(prec, &g.value * &pre),
        abs_error_estimate: g.abs_error_estimate * f,
        terms_used: g.terms_used,
        peak_term_magnitude: Float::with_val(prec, &g.peak_term_magnitude * f),
    }
}

/// φ̂(x) as `√(2/π)/x · G^{2,0}_{0,3}`.
pub fn meijer_phi4(x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    let g = meijer_line_integral(&spec_phi4(x)?, ctx)?;
    Ok(scaled(g, 2, x.abs()))
}

/// `√(2/π)/y · G^{2,1}_{1,4}`, equal to the series [`imag_g4_series`].
pub fn meijer_imag_g4(y: f64, gamma_line: Option<f64>, ctx: &PrecisionContext) -> Result<EvalResult> {
    let mut spec = spec_imag_g4(y)?;
    if let Some(g) = gamma_line {
        spec = spec.with_gamma_line(g)?;
    }
    Ok(scaled(meijer_line_integral(&spec, ctx)?, 2, y))
}

/// φ(x) as `√(3/π)/x · G^{3,0}_{0,5}`.
pub fn meijer_phi6(x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    let g = meijer_line_integral(&spec_phi6(x)?, ctx)?;
    Ok(scaled(g, 3, x.abs()))
}

/// `√(3/π)/x · G^{3,1}_{1,6}`, equal to the series [`imag_g6_series`].
pub fn meijer_imag_g6(x: f64, gamma_line: Option<f64>, ctx: &PrecisionContext) -> Result<EvalResult> {
    let mut spec = spec_imag_g6(x)?;
    if let Some(g) = gamma_line {
        spec = spec.with_gamma_line(g)?;
    }
    Ok(scaled(meijer_line_integral(&spec, ctx)?, 3, x))
}

fn hyp_term(
    coeff: ExactConst,
    power: u32,
    upper: &[(i64, i64)],
    lower: &[(i64, i64)],
    lambda: Rational,
    arg_power: u32,
) -> HypTerm {
    let params = HypParams::new(rationals(upper), rationals(lower)).expect("valid parameters");
    HypTerm::new(coeff, power, params, ExactConst::rational(lambda), arg_power)
}

/// `(y/(2√π)) ₀F₂(;3/4,5/4;y⁴/64) − (y³/(6π)) ₁F₃(1;5/4,3/2,7/4;y⁴/64)`.
///
/// This is `(1/π)∫₀^∞ e^{−t⁴/4} sin(yt) dt`; with the `e^{−ixy}` kernel of
/// `g₄` it is `−Im g₄(y)`.
pub fn imag_g4_expr() -> HypExpr {
    HypExpr::new(vec![
        hyp_term(
            ExactConst::rational(q(1, 2)).times_pi_pow(q(-1, 2)),
            1,
            &[],
            &[(3, 4), (5, 4)],
            q(1, 64),
            4,
        ),
        hyp_term(
            ExactConst::rational(q(-1, 6)).times_pi_pow(q(-1, 1)),
            3,
            &[(1, 1)],
            &[(5, 4), (3, 2), (7, 4)],
            q(1, 64),
            4,
        ),
    ])
}

/// Three-term series equal to `(1/π)∫₀^∞ e^{−t⁶/3} sin(xt) dt`.
pub fn imag_g6_expr() -> HypExpr {
    let z = q(-3, 46656);
    HypExpr::new(vec![
        hyp_term(
            ExactConst::rational(q(1, 9))
                .times_pow3(q(5, 6))
                .times_gamma(q(2, 3), -1),
            1,
            &[],
            &[(1, 2), (2, 3), (5, 6), (7, 6)],
            z.clone(),
            6,
        ),
        hyp_term(
            ExactConst::rational(q(-1, 36))
                .times_pow3(q(2, 3))
                .times_gamma(q(2, 3), 1)
                .times_pi_pow(q(-1, 1)),
            3,
            &[],
            &[(5, 6), (7, 6), (4, 3), (3, 2)],
            z.clone(),
            6,
        ),
        hyp_term(
            ExactConst::rational(q(1, 240)).times_pi_pow(q(-1, 1)),
            5,
            &[(1, 1)],
            &[(7, 6), (4, 3), (3, 2), (5, 3), (11, 6)],
            z,
            6,
        ),
    ])
}

pub fn imag_g4_series(y: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    imag_g4_expr().eval(y, ctx)
}

pub fn imag_g6_series(x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    imag_g6_expr().eval(x, ctx)
}

trait PowI {
    fn pow_i(self, n: u32) -> Rational;
}

impl PowI for Rational {
    fn pow_i(self, n: u32) -> Rational {
        (0..n).fold(Rational::from(1), |acc, _| acc * &self)
    }
}
