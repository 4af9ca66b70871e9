use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Upper and lower parameter lists of a `pFq` with `p <= q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypParams {
    upper: Vec<Rational>,
    lower: Vec<Rational>,
}

impl HypParams {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>) -> Result<Self> {
        if upper.len() > lower.len() {
            return Err(Error::InvalidParams(format!(
                "p = {} exceeds q = {}; only entire series are supported",
                upper.len(),
                lower.len()
            )));
        }
        if let Some(b) = lower.iter().find(|b| is_non_positive_integer(b)) {
            return Err(Error::InvalidParams(format!(
                "lower parameter {b} is zero or a negative integer"
            )));
        }
        Ok(Self { upper, lower })
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// Every parameter shifted by `n`.
    pub fn shifted(&self, n: u32) -> HypParams {
        let shift = |v: &Vec<Rational>| v.iter().map(|a| Rational::from(a + n)).collect();
        HypParams {
            upper: shift(&self.upper),
            lower: shift(&self.lower),
        }
    }

    /// True when some upper parameter is a non-positive integer, so the
    /// series is a polynomial.
    pub fn terminates(&self) -> bool {
        self.upper.iter().any(is_non_positive_integer)
    }
}

fn is_non_positive_integer(r: &Rational) -> bool {
    r.denom() == &Integer::from(1) && r.cmp0() != std::cmp::Ordering::Greater
}

/// Exact rising factorial `(a)_n` of a rational.
pub fn pochhammer_rational(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from(1);
    for k in 0..n {
        acc *= Rational::from(a + k);
    }
    acc
}

/// Scalar and shifted parameters such that
/// `dⁿ/dzⁿ pFq(a; b; z) = scalar · pFq(a + n; b + n; z)`.
pub fn pfq_derivative_params(params: &HypParams, n: u32) -> (Rational, HypParams) {
    let mut scalar = Rational::from(1);
    for a in &params.upper {
        scalar *= pochhammer_rational(a, n);
    }
    for b in &params.lower {
        scalar /= pochhammer_rational(b, n);
    }
    (scalar, params.shifted(n))
}

impl fmt::Display for HypParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "{}F{}({}; {})",
            self.p(),
            self.q(),
            join(&self.upper),
            join(&self.lower)
        )
    }
}
