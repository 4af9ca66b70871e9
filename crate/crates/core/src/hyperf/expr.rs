//! Finite sums of terms `c · x^k · pFq(a; b; λ x^m)`, closed under
//! differentiation.

use std::fmt;

use rug::{Float, Rational};

use super::series::{next_guard, sum_series, SeriesSum};
use super::{pfq_derivative_params, ExactConst, HypParams};
use crate::error::Result;
use crate::numeric::{digit_loss, digits_to_bits, AsReal, EvalResult, PrecisionContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

/// `coeff · x^power · pFq(params; arg_scale · x^arg_power)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypTerm {
    pub coeff: ExactConst,
    pub power: u32,
    pub params: HypParams,
    pub arg_scale: ExactConst,
    pub arg_power: u32,
}

impl HypTerm {
    pub fn new(
        coeff: ExactConst,
        power: u32,
        params: HypParams,
        arg_scale: ExactConst,
        arg_power: u32,
    ) -> Self {
        assert!(arg_power >= 1, "arg_power must be positive");
        Self {
            coeff,
            power,
            params,
            arg_scale,
            arg_power,
        }
    }

    fn like(&self, other: &HypTerm) -> bool {
        self.power == other.power
            && self.arg_power == other.arg_power
            && self.params == other.params
            && self.arg_scale == other.arg_scale
            && self.coeff.same_shape(&other.coeff)
    }

    fn same_series(&self, other: &HypTerm) -> bool {
        self.arg_power == other.arg_power && self.params == other.params && self.arg_scale == other.arg_scale
    }

    /// Derivative with respect to `x`: product rule on `x^k` and chain rule
    /// through `λ x^m`.
    fn differentiate(&self) -> Vec<HypTerm> {
        let mut out = Vec::with_capacity(2);
        if self.power > 0 {
            out.push(HypTerm {
                coeff: self.coeff.clone().times_rational(&Rational::from(self.power)),
                power: self.power - 1,
                ..self.clone()
            });
        }
        let (scalar, shifted) = pfq_derivative_params(&self.params, 1);
        if scalar.cmp0().is_ne() && !self.arg_scale.is_zero() {
            let factor = Rational::from(&scalar * self.arg_power);
            out.push(HypTerm {
                coeff: self.coeff.mul(&self.arg_scale).times_rational(&factor),
                power: self.power + self.arg_power - 1,
                params: shifted,
                arg_scale: self.arg_scale.clone(),
                arg_power: self.arg_power,
            });
        }
        out
    }
}

/// Sum of [`HypTerm`]s; the empty sum is the zero function.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HypExpr {
    terms: Vec<HypTerm>,
}

impl HypExpr {
    /// Builds an expression, merging like terms and dropping zero ones.
    pub fn new(terms: Vec<HypTerm>) -> Self {
        let mut merged: Vec<HypTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if t.coeff.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|m| m.like(&t)) {
                Some(m) => {
                    let sum = Rational::from(m.coeff.rational_part() + t.coeff.rational_part());
                    m.coeff = m.coeff.shape().times_rational(&sum);
                }
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Self { terms: merged }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[HypTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parity when every term has the same power parity and an even
    /// argument power. The zero expression reports `Even`.
    pub fn parity(&self) -> Option<Parity> {
        if self.terms.iter().any(|t| t.arg_power % 2 != 0) {
            return None;
        }
        let mut powers = self.terms.iter().map(|t| t.power % 2);
        match powers.next() {
            None => Some(Parity::Even),
            Some(first) => {
                if powers.all(|p| p == first) {
                    Some(if first == 0 { Parity::Even } else { Parity::Odd })
                } else {
                    None
                }
            }
        }
    }

    pub fn differentiate(&self) -> HypExpr {
        HypExpr::new(self.terms.iter().flat_map(HypTerm::differentiate).collect())
    }

    pub fn nth_derivative(&self, n: u32) -> HypExpr {
        (0..n).fold(self.clone(), |e, _| e.differentiate())
    }

    /// Copy with term `index` multiplied by `factor`; used for fault
    /// injection in self-checks.
    pub fn with_scaled_term(&self, index: usize, factor: &Rational) -> HypExpr {
        let mut out = self.clone();
        if let Some(t) = out.terms.get_mut(index) {
            t.coeff = t.coeff.clone().times_rational(factor);
        }
        out
    }

    /// Evaluates the expression with adaptive guard digits.
    ///
    /// Cancellation is tracked across terms as well as inside each series:
    /// the peak is the largest single contribution, and when
    /// `log10(peak/|value|)` exceeds `guard - 5` the guard is doubled.
    pub fn eval(&self, x: impl AsReal, ctx: &PrecisionContext) -> Result<EvalResult> {
        let mut guard = ctx.guard_digits();
        let mut rounds = 0;
        loop {
            let prec = digits_to_bits(ctx.target_digits() + guard);
            let result = self.eval_fixed(&x.as_real(prec), prec, ctx.max_terms())?;
            rounds += 1;
            let loss = digit_loss(&result.peak_term_magnitude, &result.value);
            match next_guard(guard, loss) {
                Some(g) if ctx.is_adaptive() && rounds <= 8 => guard = g,
                _ => return Ok(result),
            }
        }
    }

    fn eval_fixed(&self, x: &Float, prec: u32, max_terms: usize) -> Result<EvalResult> {
        let mut shapes: Vec<(ExactConst, Float)> = Vec::new();
        let mut series: Vec<(usize, SeriesSum)> = Vec::new();
        let mut value = Float::with_val(prec, 0);
        let mut peak = Float::with_val(prec, 0);
        let mut err = Float::with_val(prec, 0);
        let mut terms_used = 0usize;

        for (i, term) in self.terms.iter().enumerate() {
            let shape = term.coeff.shape();
            let shape_val = match shapes.iter().find(|(s, _)| *s == shape) {
                Some((_, v)) => v.clone(),
                None => {
                    let v = shape.realize_shape(prec);
                    shapes.push((shape, v.clone()));
                    v
                }
            };
            let cached = series.iter().position(|(j, _)| self.terms[*j].same_series(term));
            let s = match cached {
                Some(idx) => &series[idx].1,
                None => {
                    let lambda = term.arg_scale.realize(prec);
                    let z = Float::with_val(prec, x.pow_u(term.arg_power) * lambda);
                    let s = sum_series(&term.params, &z, prec, max_terms)?;
                    terms_used += s.terms;
                    series.push((i, s));
                    &series.last().unwrap().1
                }
            };

            let mut prefactor = shape_val * term.coeff.rational_part();
            prefactor *= x.pow_u(term.power);
            let contribution = Float::with_val(prec, &prefactor * &s.sum);
            let scale = prefactor.abs();
            let local_peak = Float::with_val(prec, &scale * &s.peak);
            let contribution_abs = Float::with_val(prec, contribution.abs_ref());
            peak = peak.max(&local_peak).max(&contribution_abs);
            err += Float::with_val(prec, &scale * &s.abs_error);
            value += contribution;
        }

        // Rounding from combining the terms.
        let mut combine = Float::with_val(prec, &peak * (self.terms.len() as u32 + 1));
        combine >>= prec as i32;
        err += combine;

        Ok(EvalResult {
            value,
            abs_error_estimate: err.to_f64(),
            terms_used,
            peak_term_magnitude: peak,
        })
    }
}

trait PowU {
    fn pow_u(&self, e: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(&self, e: u32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(e))
    }
}

/// Evaluates `e` at `x`.
pub fn expr_eval(e: &HypExpr, x: impl AsReal, ctx: &PrecisionContext) -> Result<EvalResult> {
    e.eval(x, ctx)
}

/// Exact first derivative of `e`.
pub fn expr_differentiate(e: &HypExpr) -> HypExpr {
    e.differentiate()
}

impl fmt::Display for HypTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]·x^{}·{}[({})·x^{}]",
            self.coeff, self.power, self.params, self.arg_scale, self.arg_power
        )
    }
}

impl fmt::Display for HypExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
