//! Per-point evaluation of one quantity by one method.

use bhkernel::asymptotics::{
    density_asym_leading, phi4_asym_large, phi6_asym_large, phi6_small, psi4_asym_large, psi6_asym_large,
    psi6_small,
};
use bhkernel::kernels::{correlation, density, kernel, Case, FunctionBank};
use bhkernel::numeric::PrecisionContext;
use bhkernel::oracle;
use rug::Float;

use crate::config::{Function, Method};
use crate::failure::Failure;
use crate::table::Cell;

/// Terms of the small-x series of the sextic `φ`.
pub const SMALL_X_TERMS: usize = 30;

pub struct Evaluator<'a> {
    pub bank: &'a FunctionBank,
    pub ctx: PrecisionContext,
}

impl<'a> Evaluator<'a> {
    pub fn new(bank: &'a FunctionBank, digits: u32) -> Self {
        Self {
            bank,
            ctx: PrecisionContext::digits(digits),
        }
    }

    fn case(&self) -> Case {
        self.bank.case()
    }

    pub fn exact(&self, f: Function, x: f64, y: Option<f64>) -> Result<Cell, Failure> {
        let (b, ctx) = (self.bank, &self.ctx);
        let r = match f {
            Function::Phi => b.phi().eval(x, ctx)?,
            Function::Psi => b.psi().eval(x, ctx)?,
            Function::Density => density(b, x, ctx)?,
            Function::Correlation => correlation(b, x, ctx)?,
            Function::Kernel => {
                let y = y.ok_or_else(|| Failure::Usage("kernel needs y".into()))?;
                let k = kernel(b, x, y, ctx)?;
                return Ok(Cell::new(k.value, k.error_estimate));
            }
        };
        Ok(Cell::new(r.value, r.abs_error_estimate))
    }

    /// Asymptotic methods carry no intrinsic error bound; their error column
    /// is the distance to the exact value.
    pub fn eval(&self, m: Method, f: Function, x: f64, y: Option<f64>) -> Result<Cell, Failure> {
        let (case, ctx) = (self.case(), &self.ctx);
        let unsupported = || {
            Failure::Usage(format!(
                "{} cannot evaluate {f:?} for the {} case",
                m.name(),
                case.name()
            ))
        };
        let r = match (m, f) {
            (Method::Exact, _) => return self.exact(f, x, y),
            (Method::Quadrature, Function::Phi) => match case {
                Case::Quartic => oracle::quad_phi4(x, ctx)?,
                Case::Sextic => oracle::quad_phi6(x, ctx)?,
            },
            (Method::Quadrature, Function::Psi) => match case {
                Case::Quartic => oracle::quad_psi4(x, ctx)?,
                Case::Sextic => oracle::quad_psi6(x, ctx)?,
            },
            (Method::MellinBarnes, Function::Phi) => match case {
                Case::Quartic => oracle::meijer_phi4(x, ctx)?,
                Case::Sextic => oracle::meijer_phi6(x, ctx)?,
            },
            (Method::AsymptoticLarge, Function::Phi | Function::Psi | Function::Density) => {
                let v = match (case, f) {
                    (_, Function::Density) => density_asym_leading(case, x),
                    (Case::Quartic, Function::Phi) => phi4_asym_large(x, ctx)?.value,
                    (Case::Quartic, _) => psi4_asym_large(x, ctx)?.value,
                    (Case::Sextic, Function::Phi) => phi6_asym_large(x, ctx)?.value,
                    (Case::Sextic, _) => psi6_asym_large(x, ctx)?.value,
                };
                return self.against_exact(Float::with_val(53, v), f, x);
            }
            (Method::AsymptoticSmall, Function::Phi) if case == Case::Sextic => {
                return self.against_exact(phi6_small(x, SMALL_X_TERMS, ctx)?, f, x);
            }
            (Method::AsymptoticSmall, Function::Psi) if case == Case::Sextic => {
                return self.against_exact(psi6_small(x, ctx), f, x);
            }
            _ => return Err(unsupported()),
        };
        Ok(Cell::new(r.value, r.abs_error_estimate))
    }

    fn against_exact(&self, v: Float, f: Function, x: f64) -> Result<Cell, Failure> {
        let e = self.exact(f, x, None)?;
        let prec = v.prec().max(e.value.prec());
        let d = Float::with_val(prec, &v - &e.value).abs().to_f64();
        Ok(Cell::new(v, d))
    }
}
