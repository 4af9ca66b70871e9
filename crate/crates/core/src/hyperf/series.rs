//! Summation of `pFq` power series by term recurrence.

use rug::{Float, Rational};

use super::HypParams;
use crate::error::{Error, Result};
use crate::numeric::{digit_loss, digits_to_bits, AsReal, EvalResult, PrecisionContext, MAX_GUARD_DIGITS};

/// Consecutive small terms required before the sum is declared converged.
const SMALL_RUN: usize = 3;

/// Raw outcome of one fixed-precision summation.
#[derive(Debug, Clone)]
pub(crate) struct SeriesSum {
    pub sum: Float,
    pub peak: Float,
    pub terms: usize,
    pub abs_error: Float,
}

/// A parameter `n/d` kept as machine integers when they fit.
#[derive(Debug, Clone)]
enum Param {
    Small { num: i64, den: i64 },
    Big(Rational),
}

impl Param {
    fn new(r: &Rational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) if num.abs() < 1 << 40 && den < 1 << 20 => Param::Small { num, den },
            _ => Param::Big(r.clone()),
        }
    }

    fn mul_shifted(&self, t: &mut Float, k: u64) {
        match self {
            Param::Small { num, den } => {
                *t *= num + (k as i64) * den;
                if *den != 1 {
                    *t /= *den;
                }
            }
            Param::Big(r) => *t *= Rational::from(r + k),
        }
    }

    fn div_shifted(&self, t: &mut Float, k: u64) {
        match self {
            Param::Small { num, den } => {
                *t /= num + (k as i64) * den;
                if *den != 1 {
                    *t *= *den;
                }
            }
            Param::Big(r) => *t /= Rational::from(r + k),
        }
    }
}

/// Index past which the terms of `pFq(z)` decrease monotonically,
/// `ceil(|z|^(1/(q+1-p)))`.
pub(crate) fn growth_index(params: &HypParams, z_abs: f64) -> u64 {
    let order = (params.q() + 1 - params.p()) as f64;
    if z_abs <= 0.0 {
        0
    } else {
        z_abs.powf(1.0 / order).ceil() as u64
    }
}

/// Sums the series at `prec` bits without any guard escalation.
pub(crate) fn sum_series(params: &HypParams, z: &Float, prec: u32, max_terms: usize) -> Result<SeriesSum> {
    let upper: Vec<Param> = params.upper().iter().map(Param::new).collect();
    let lower: Vec<Param> = params.lower().iter().map(Param::new).collect();
    let z = Float::with_val(prec, z);

    let mut term = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 1);
    let mut peak = Float::with_val(prec, 1);
    if z.is_zero() {
        return Ok(SeriesSum {
            sum,
            peak,
            terms: 1,
            abs_error: Float::new(prec),
        });
    }

    let k_star = growth_index(params, z.to_f64().abs());
    let mut small_run = 0usize;
    let mut k: u64 = 0;
    loop {
        if k as usize + 1 >= max_terms {
            return Err(Error::TermBudgetExceeded {
                max_terms,
                argument: z.to_string_radix(10, Some(12)),
            });
        }
        let prev_abs = Float::with_val(prec, term.abs_ref());
        for a in &upper {
            a.mul_shifted(&mut term, k);
        }
        for b in &lower {
            b.div_shifted(&mut term, k);
        }
        term /= k + 1;
        term *= &z;
        k += 1;

        if term.is_zero() {
            break;
        }
        sum += &term;
        let term_abs = Float::with_val(prec, term.abs_ref());
        if term_abs > peak {
            peak.assign_from(&term_abs);
        }

        if k >= k_star && term_abs < prev_abs && is_negligible(&term_abs, &sum, prec) {
            small_run += 1;
            if small_run >= SMALL_RUN {
                break;
            }
        } else {
            small_run = 0;
        }
    }

    let terms = k as usize + 1;
    // Rounding grows with the number of terms relative to the largest one;
    // the remaining tail is bounded by the last retained term.
    let mut abs_error = Float::with_val(prec, &peak * terms as u64);
    abs_error >>= prec as i32;
    abs_error += Float::with_val(prec, term.abs_ref());
    Ok(SeriesSum {
        sum,
        peak,
        terms,
        abs_error,
    })
}

fn is_negligible(term_abs: &Float, sum: &Float, prec: u32) -> bool {
    match (term_abs.get_exp(), sum.get_exp()) {
        (Some(t), Some(s)) => t < s - prec as i32,
        (None, _) => true,
        (Some(_), None) => false,
    }
}

trait AssignFrom {
    fn assign_from(&mut self, other: &Float);
}

impl AssignFrom for Float {
    fn assign_from(&mut self, other: &Float) {
        use rug::Assign;
        self.assign(other);
    }
}

/// `pFq(params; z)` with adaptive guard digits.
///
/// After each pass the digit loss `log10(peak / |sum|)` is compared with the
/// guard budget; when it exceeds `guard - 5` the guard is doubled and the sum
/// recomputed. A capped context performs exactly one pass.
pub fn pfq(params: &HypParams, z: impl AsReal, ctx: &PrecisionContext) -> Result<EvalResult> {
    let mut guard = ctx.guard_digits();
    let mut rounds = 0;
    loop {
        let prec = digits_to_bits(ctx.target_digits() + guard);
        let zf = z.as_real(prec);
        let s = sum_series(params, &zf, prec, ctx.max_terms())?;
        let loss = digit_loss(&s.peak, &s.sum);
        rounds += 1;
        let next = next_guard(guard, loss);
        if !ctx.is_adaptive() || next.is_none() || rounds > 8 {
            return Ok(EvalResult {
                value: s.sum,
                abs_error_estimate: s.abs_error.to_f64(),
                terms_used: s.terms,
                peak_term_magnitude: s.peak,
            });
        }
        guard = next.unwrap();
    }
}

/// Guard digits to retry with, or `None` when `loss` is already covered.
pub(crate) fn next_guard(guard: u32, loss: f64) -> Option<u32> {
    if loss <= guard as f64 - 5.0 || guard >= MAX_GUARD_DIGITS {
        return None;
    }
    let mut g = guard.max(5);
    if loss.is_infinite() {
        return Some((g * 2).min(MAX_GUARD_DIGITS));
    }
    while (g as f64) - 5.0 < loss && g < MAX_GUARD_DIGITS {
        g *= 2;
    }
    Some(g.min(MAX_GUARD_DIGITS))
}
