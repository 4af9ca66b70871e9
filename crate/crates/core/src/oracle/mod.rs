//! Independent evaluation paths: quadrature of the defining integrals,
//! closed-form Mellin transforms and Mellin–Barnes line integrals.

mod meijer;
mod mellin;
mod quadrature;

pub use meijer::{
    default_gamma_line, imag_g4_expr, imag_g4_series, imag_g6_expr, imag_g6_series, meijer_imag_g4,
    meijer_imag_g6, meijer_line_integral, meijer_phi4, meijer_phi6, spec_imag_g4, spec_imag_g6, spec_phi4,
    spec_phi6, MeijerSpec,
};
pub use mellin::{mellin_g4_star, mellin_g6_star, mellin_numeric};
pub use quadrature::{
    integrate, levy_g, quad_eval, quad_phi4, quad_phi4_deriv, quad_phi6, quad_phi6_deriv, quad_psi4,
    quad_psi4_deriv, quad_psi6, quad_psi6_deriv, try_integrate, GaussLegendre, Integral, Integrand,
    QuadratureSpec,
};
