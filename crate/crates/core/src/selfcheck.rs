//! Invariant suite run by `bhkernel selfcheck`, on reduced grids.
//!
//! The banks are injectable so that a corrupted coefficient can be shown to
//! trip at least one named invariant.

use rug::Float;

use crate::error::Result;
use crate::kernels::{build_bank, correlation, density, kernel, Case, FunctionBank};
use crate::numeric::PrecisionContext;
use crate::oracle;

#[derive(Debug, Clone)]
pub struct InvariantResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for InvariantResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<28} {}", self.name, self.detail)
    }
}

pub struct SelfCheck {
    quartic: FunctionBank,
    sextic: FunctionBank,
}

impl Default for SelfCheck {
    fn default() -> Self {
        Self::new()
    }
}

type Check = fn(&SelfCheck) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("ode_quartic_phi", SelfCheck::ode_quartic_phi),
    ("ode_quartic_psi", SelfCheck::ode_quartic_psi),
    ("ode_sextic_phi", SelfCheck::ode_sextic_phi),
    ("ode_sextic_psi", SelfCheck::ode_sextic_psi),
    ("triangle_quartic_phi", SelfCheck::triangle_quartic_phi),
    ("triangle_sextic_phi", SelfCheck::triangle_sextic_phi),
    ("quadrature_psi", SelfCheck::quadrature_psi),
    ("contour_independence", SelfCheck::contour_independence),
    ("imag_g6_contour", SelfCheck::imag_g6_contour),
    ("scaling_identities", SelfCheck::scaling_identities),
    ("density_parity", SelfCheck::density_parity),
    ("correlation_negativity", SelfCheck::correlation_negativity),
    ("diagonal_limit", SelfCheck::diagonal_limit),
];

fn ok_if(max_dev: f64, tol: f64) -> (bool, String) {
    (
        max_dev <= tol,
        format!("max deviation {max_dev:.3e} (tolerance {tol:.0e})"),
    )
}

fn dev(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec().max(b.prec()), a - b).abs().to_f64()
}

impl SelfCheck {
    pub fn new() -> Self {
        Self::with_banks(build_bank(Case::Quartic), build_bank(Case::Sextic))
    }

    pub fn with_banks(quartic: FunctionBank, sextic: FunctionBank) -> Self {
        Self { quartic, sextic }
    }

    /// Names of the invariants in run order.
    pub fn names() -> Vec<&'static str> {
        CHECKS.iter().map(|(n, _)| *n).collect()
    }

    /// Runs every invariant; an evaluation error counts as a failure.
    pub fn run(&self) -> Vec<InvariantResult> {
        self.run_with(|_| {})
    }

    /// As [`run`](Self::run), reporting each result as it completes.
    pub fn run_with(&self, mut report: impl FnMut(&InvariantResult)) -> Vec<InvariantResult> {
        CHECKS
            .iter()
            .map(|(name, check)| {
                let (passed, detail) = match check(self) {
                    Ok(r) => r,
                    Err(e) => (false, format!("error: {e}")),
                };
                let r = InvariantResult { name, passed, detail };
                report(&r);
                r
            })
            .collect()
    }

    fn ode(bank: &FunctionBank, phi: bool, order: u32, coef: f64) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(40);
        let f = if phi { bank.phi() } else { bank.psi() };
        let d = f.nth_derivative(order);
        let mut worst: f64 = 0.0;
        for x in [0.5, 1.0, 2.0, 5.0] {
            let d = d.eval(x, &ctx)?.value;
            let f = f.eval(x, &ctx)?.value * (coef * x);
            worst = worst.max(dev(&d, &f));
        }
        Ok(ok_if(worst, 1e-20))
    }

    fn ode_quartic_phi(&self) -> Result<(bool, String)> {
        Self::ode(&self.quartic, true, 3, 1.0)
    }

    fn ode_quartic_psi(&self) -> Result<(bool, String)> {
        Self::ode(&self.quartic, false, 3, -1.0)
    }

    fn ode_sextic_phi(&self) -> Result<(bool, String)> {
        Self::ode(&self.sextic, true, 5, -0.5)
    }

    fn ode_sextic_psi(&self) -> Result<(bool, String)> {
        Self::ode(&self.sextic, false, 5, 0.5)
    }

    fn triangle_quartic_phi(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(30);
        let mut worst: f64 = 0.0;
        for x in [1.0, 2.0] {
            let s = self.quartic.phi().eval(x, &ctx)?.value;
            let q = oracle::quad_phi4(x, &ctx)?.value;
            let m = oracle::meijer_phi4(x, &ctx)?.value;
            worst = worst.max(dev(&s, &q)).max(dev(&s, &m)).max(dev(&q, &m));
        }
        Ok(ok_if(worst, 1e-10))
    }

    fn triangle_sextic_phi(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(30);
        let x = 1.0;
        let s = self.sextic.phi().eval(x, &ctx)?.value;
        let q = oracle::quad_phi6(x, &ctx)?.value;
        let m = oracle::meijer_phi6(x, &ctx)?.value;
        Ok(ok_if(dev(&s, &q).max(dev(&s, &m)).max(dev(&q, &m)), 1e-10))
    }

    fn quadrature_psi(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(30);
        let mut worst: f64 = 0.0;
        for x in [0.5, 1.0, 2.0] {
            let a = self.quartic.psi().eval(x, &ctx)?.value;
            worst = worst.max(dev(&a, &oracle::quad_psi4(x, &ctx)?.value));
            let b = self.sextic.psi().eval(x, &ctx)?.value;
            worst = worst.max(dev(&b, &oracle::quad_psi6(x, &ctx)?.value));
        }
        Ok(ok_if(worst, 1e-12))
    }

    fn contour_independence(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(30);
        let series = oracle::imag_g4_series(1.0, &ctx)?.value;
        let mut worst: f64 = 0.0;
        for g in [-0.4, -0.1] {
            let v = oracle::meijer_imag_g4(1.0, Some(g), &ctx)?.value;
            worst = worst.max(dev(&v, &series));
        }
        Ok(ok_if(worst, 1e-10))
    }

    fn imag_g6_contour(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(30);
        let s = oracle::imag_g6_series(1.0, &ctx)?.value;
        let m = oracle::meijer_imag_g6(1.0, None, &ctx)?.value;
        Ok(ok_if(dev(&s, &m), 1e-10))
    }

    fn scaling_identities(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(25);
        let (r2, r6) = (2f64.sqrt(), 3f64.powf(1.0 / 6.0));
        let mut worst: f64 = 0.0;
        for i in 0..=4 {
            let x = 0.5 * i as f64;
            let a = oracle::levy_g(4.0, r2 * x, &ctx)?.to_f64() * r2;
            worst = worst.max((a - self.quartic.phi().eval(x, &ctx)?.to_f64()).abs());
            let b = oracle::levy_g(6.0, r6 * x, &ctx)?.to_f64() * r6;
            worst = worst.max((b - self.sextic.phi().eval(x, &ctx)?.to_f64()).abs());
        }
        Ok(ok_if(worst, 1e-10))
    }

    fn density_parity(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(20);
        let mut worst: f64 = 0.0;
        for bank in [&self.quartic, &self.sextic] {
            for i in 1..=10 {
                let x = 0.5 * i as f64;
                let a = density(bank, x, &ctx)?.to_f64();
                let b = density(bank, -x, &ctx)?.to_f64();
                worst = worst.max((a - b).abs());
            }
        }
        Ok(ok_if(worst, 1e-15))
    }

    fn correlation_negativity(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(20);
        let mut largest = f64::NEG_INFINITY;
        for bank in [&self.quartic, &self.sextic] {
            for i in 0..=10 {
                let x = 0.5 * i as f64;
                largest = largest.max(correlation(bank, x, &ctx)?.to_f64());
            }
        }
        Ok((largest <= 0.0, format!("largest value {largest:.3e}")))
    }

    fn diagonal_limit(&self) -> Result<(bool, String)> {
        let ctx = PrecisionContext::digits(30);
        let eps = 1e-6;
        let mut worst: f64 = 0.0;
        for bank in [&self.quartic, &self.sextic] {
            let s = bank.case().diagonal_sign() as f64;
            for x in [0.5, 1.0, 2.0] {
                let k = kernel(bank, x, x + eps, &ctx)?.to_f64();
                let r = density(bank, x, &ctx)?.to_f64();
                worst = worst.max((k - s * r).abs());
            }
        }
        Ok(ok_if(worst, 10.0 * eps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_has_at_least_ten_named_invariants() {
        let names = SelfCheck::names();
        assert!(names.len() >= 10);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }
}
