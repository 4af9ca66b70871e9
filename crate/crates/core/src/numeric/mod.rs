//! Arbitrary-precision foundation: precision contracts, evaluation results,
//! complex arithmetic and the gamma family.
//!
//! All arithmetic is MPFR-backed through [`rug::Float`]. Every routine takes
//! an explicit [`PrecisionContext`]; nothing here holds mutable global state.

mod complex;
mod gamma;

pub use complex::Complex;
pub use gamma::{gamma_real, log_gamma_complex, pochhammer, LogGamma};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// log2(10), used to convert decimal digits into mantissa bits.
pub const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Upper bound on guard digits reached by adaptive escalation.
pub const MAX_GUARD_DIGITS: u32 = 4096;

/// How callers may grow guard digits when they detect cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Escalation {
    /// Guard digits may be doubled until the measured digit loss is covered.
    Adaptive,
    /// Working precision is fixed at `target_digits + guard_digits`; used to
    /// emulate naive fixed-precision evaluation.
    Capped,
}

/// Working-precision contract threaded through every evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    target_digits: u32,
    guard_digits: u32,
    max_terms: usize,
    escalation: Escalation,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 10;
    pub const DEFAULT_MAX_TERMS: usize = 100_000;

    pub fn new(target_digits: u32, guard_digits: u32, max_terms: usize) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::InvalidContext("target_digits must be >= 1".into()));
        }
        if max_terms == 0 {
            return Err(Error::InvalidContext("max_terms must be >= 1".into()));
        }
        Ok(Self {
            target_digits,
            guard_digits,
            max_terms,
            escalation: Escalation::Adaptive,
        })
    }

    /// Adaptive context with the default guard and term budget.
    ///
    /// Panics if `target_digits` is zero.
    pub fn digits(target_digits: u32) -> Self {
        Self::new(target_digits, Self::DEFAULT_GUARD, Self::DEFAULT_MAX_TERMS)
            .expect("target_digits must be positive")
    }

    /// Fixed precision of exactly `digits` significant digits, no guard and
    /// no escalation.
    pub fn capped(digits: u32) -> Self {
        Self {
            escalation: Escalation::Capped,
            ..Self::new(digits, 0, Self::DEFAULT_MAX_TERMS).expect("digits must be positive")
        }
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn escalation(&self) -> Escalation {
        self.escalation
    }

    pub fn is_adaptive(&self) -> bool {
        self.escalation == Escalation::Adaptive
    }

    /// Decimal digits actually carried: target plus guard.
    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    /// Mantissa bits for the working precision.
    pub fn working_bits(&self) -> u32 {
        digits_to_bits(self.working_digits())
    }

    pub fn with_guard(self, guard_digits: u32) -> Self {
        Self { guard_digits, ..self }
    }

    pub fn with_target(self, target_digits: u32) -> Self {
        Self {
            target_digits: target_digits.max(1),
            ..self
        }
    }

    pub fn with_max_terms(self, max_terms: usize) -> Self {
        Self {
            max_terms: max_terms.max(1),
            ..self
        }
    }

    /// Relative accuracy requested by the caller, `10^-target`.
    pub fn target_epsilon(&self) -> f64 {
        10f64.powi(-(self.target_digits as i32))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::digits(30)
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    ((digits as f64) * LOG2_10).ceil() as u32 + 2
}

/// Value of an evaluation together with its error bookkeeping.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: Float,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub peak_term_magnitude: Float,
}

impl EvalResult {
    pub fn exact(value: Float) -> Self {
        let prec = value.prec();
        Self {
            peak_term_magnitude: Float::with_val(prec, value.abs_ref()),
            value,
            abs_error_estimate: 0.0,
            terms_used: 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Decimal digits lost to cancellation, `log10(peak / |value|)`, clamped
    /// at zero. Infinite when the value vanishes but the terms did not.
    pub fn digits_lost(&self) -> f64 {
        digit_loss(&self.peak_term_magnitude, &self.value)
    }
}

pub(crate) fn digit_loss(peak: &Float, value: &Float) -> f64 {
    if peak.is_zero() {
        return 0.0;
    }
    if value.is_zero() {
        return f64::INFINITY;
    }
    (log10_abs(peak) - log10_abs(value)).max(0.0)
}

/// Conversion of scalar inputs into MPFR floats at a requested precision.
pub trait AsReal {
    fn as_real(&self, prec: u32) -> Float;
}

impl AsReal for f64 {
    fn as_real(&self, prec: u32) -> Float {
        Float::with_val(prec, *self)
    }
}

impl AsReal for i32 {
    fn as_real(&self, prec: u32) -> Float {
        Float::with_val(prec, *self)
    }
}

impl AsReal for Float {
    fn as_real(&self, prec: u32) -> Float {
        Float::with_val(prec, self)
    }
}

impl AsReal for Rational {
    fn as_real(&self, prec: u32) -> Float {
        Float::with_val(prec, self)
    }
}

impl<T: AsReal + ?Sized> AsReal for &T {
    fn as_real(&self, prec: u32) -> Float {
        (**self).as_real(prec)
    }
}

/// `log10 |x|` for any finite nonzero float, safe far outside the `f64` range.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mantissa, exp) = x.to_f64_exp();
    mantissa.abs().log10() + exp as f64 * std::f64::consts::LOG10_2
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `base^(exponent)` for a positive rational base and a rational exponent.
pub fn rational_power(base: &Rational, exponent: &Rational, prec: u32) -> Float {
    let b = Float::with_val(prec, base);
    rational_power_of(b, exponent, prec)
}

pub(crate) fn rational_power_of(base: Float, exponent: &Rational, prec: u32) -> Float {
    if exponent.denom() == &1u32 {
        if let Some(e) = exponent.numer().to_i32() {
            return base.pow(e);
        }
    }
    let e = Float::with_val(prec, exponent);
    base.pow(&e)
}

/// Integer value of `x` when it is a non-positive integer (a gamma pole).
pub(crate) fn non_positive_integer(x: &Float) -> bool {
    x.is_integer() && *x <= 0
}
