//! Fixed-precision evaluation of the quartic kernel against the adaptive
//! reference, emulating a naive evaluation carried at `p` digits.

use rug::Float;

use crate::error::Result;
use crate::kernels::{kernel, FunctionBank, KernelValue};
use crate::numeric::PrecisionContext;

/// Minimum digits of the adaptive reference; it always carries ten more
/// than the largest capped precision.
pub const REFERENCE_DIGITS: u32 = 30;

#[derive(Debug, Clone)]
pub struct StudyRow {
    pub x: f64,
    pub reference: f64,
    pub reference_error: f64,
    /// One entry per capped precision; `None` when the capped evaluation
    /// failed outright.
    pub capped: Vec<Option<f64>>,
    deviations: Vec<f64>,
}

impl StudyRow {
    /// `|capped − reference|`, infinite for a failed evaluation.
    pub fn deviation(&self, i: usize) -> f64 {
        self.deviations[i]
    }
}

#[derive(Debug, Clone)]
pub struct PrecisionStudy {
    pub y0: f64,
    pub p_values: Vec<u32>,
    pub rows: Vec<StudyRow>,
}

/// Evaluates `K(x, y0)` on `xs` adaptively and at each capped precision.
pub fn precision_study(bank: &FunctionBank, y0: f64, p_values: &[u32], xs: &[f64]) -> Result<PrecisionStudy> {
    let reference_ctx = reference_context(p_values);
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        rows.push(study_row(bank, y0, p_values, x, &reference_ctx)?);
    }
    Ok(PrecisionStudy {
        y0,
        p_values: p_values.to_vec(),
        rows,
    })
}

/// Adaptive context used for the reference values.
pub fn reference_context(p_values: &[u32]) -> PrecisionContext {
    let top = p_values.iter().copied().max().unwrap_or(0);
    PrecisionContext::digits(REFERENCE_DIGITS.max(top + 10))
}

/// One grid point of [`precision_study`].
pub fn study_row(
    bank: &FunctionBank,
    y0: f64,
    p_values: &[u32],
    x: f64,
    reference_ctx: &PrecisionContext,
) -> Result<StudyRow> {
    let KernelValue {
        value: reference,
        error_estimate: reference_error,
        ..
    } = kernel(bank, x, y0, reference_ctx)?;
    let mut capped = Vec::with_capacity(p_values.len());
    let mut deviations = Vec::with_capacity(p_values.len());
    for &p in p_values {
        match kernel(bank, x, y0, &PrecisionContext::capped(p)) {
            Ok(k) if k.value.is_finite() => {
                let d = Float::with_val(reference.prec(), &k.value - &reference).abs();
                capped.push(Some(k.to_f64()));
                deviations.push(d.to_f64());
            }
            _ => {
                capped.push(None);
                deviations.push(f64::INFINITY);
            }
        }
    }
    Ok(StudyRow {
        x,
        reference: reference.to_f64(),
        reference_error,
        capped,
        deviations,
    })
}

impl PrecisionStudy {
    /// Right end of the agreement region for the `i`-th precision: the
    /// largest grid x such that every grid point up to it deviates by at
    /// most `threshold`. `None` if the first point already disagrees.
    pub fn agreement_extent(&self, i: usize, threshold: f64) -> Option<f64> {
        let mut last = None;
        for row in &self.rows {
            if row.deviation(i) > threshold {
                break;
            }
            last = Some(row.x);
        }
        last
    }

    /// True if some grid point beyond the agreement region disagrees.
    pub fn breaks_down(&self, i: usize, threshold: f64) -> bool {
        self.rows.iter().any(|r| r.deviation(i) > threshold)
    }
}
