//! Generalized hypergeometric series and symbolic sums of them.

mod exact;
mod expr;
mod params;
mod series;

pub use exact::{q, ExactConst};
pub use expr::{expr_differentiate, expr_eval, HypExpr, HypTerm, Parity};
pub use params::{pfq_derivative_params, pochhammer_rational, HypParams};
pub(crate) use series::next_guard;
pub use series::pfq;
