use std::fmt;

use rug::{Float, Integer, Rational};

use crate::numeric::{pi, rational_power_of};

/// Rational literal `n/d`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((Integer::from(n), Integer::from(d)))
}

/// Exact constant `r · π^a · 2^b · 3^c · Π Γ(g_i)^{e_i}` with rational
/// `r, a, b, c, g_i` and integer `e_i`, realized lazily at any precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactConst {
    rational: Rational,
    pi_exp: Rational,
    two_exp: Rational,
    three_exp: Rational,
    gamma_factors: Vec<(Rational, i32)>,
}

impl ExactConst {
    pub fn rational(r: Rational) -> Self {
        Self {
            rational: r,
            pi_exp: Rational::new(),
            two_exp: Rational::new(),
            three_exp: Rational::new(),
            gamma_factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::rational(Rational::from(1))
    }

    pub fn zero() -> Self {
        Self::rational(Rational::new())
    }

    pub fn times_pi_pow(mut self, exponent: Rational) -> Self {
        self.pi_exp += exponent;
        self
    }

    pub fn times_pow2(mut self, exponent: Rational) -> Self {
        self.two_exp += exponent;
        self
    }

    pub fn times_pow3(mut self, exponent: Rational) -> Self {
        self.three_exp += exponent;
        self
    }

    /// Multiplies by `Γ(arg)^exponent`.
    pub fn times_gamma(mut self, arg: Rational, exponent: i32) -> Self {
        match self.gamma_factors.iter_mut().find(|(a, _)| *a == arg) {
            Some((_, e)) => *e += exponent,
            None => self.gamma_factors.push((arg, exponent)),
        }
        self.gamma_factors.retain(|(_, e)| *e != 0);
        self.gamma_factors.sort_by(|a, b| a.0.cmp(&b.0));
        self
    }

    pub fn times_rational(mut self, r: &Rational) -> Self {
        self.rational *= r;
        self
    }

    pub fn mul(&self, other: &ExactConst) -> ExactConst {
        let mut out = ExactConst {
            rational: Rational::from(&self.rational * &other.rational),
            pi_exp: Rational::from(&self.pi_exp + &other.pi_exp),
            two_exp: Rational::from(&self.two_exp + &other.two_exp),
            three_exp: Rational::from(&self.three_exp + &other.three_exp),
            gamma_factors: self.gamma_factors.clone(),
        };
        for (arg, e) in &other.gamma_factors {
            out = out.times_gamma(arg.clone(), *e);
        }
        out
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn is_zero(&self) -> bool {
        self.rational.cmp0() == std::cmp::Ordering::Equal
    }

    pub fn is_rational(&self) -> bool {
        self.shape().is_unit()
    }

    /// The constant with its rational factor replaced by one.
    pub fn shape(&self) -> ExactConst {
        ExactConst {
            rational: Rational::from(1),
            ..self.clone()
        }
    }

    pub fn same_shape(&self, other: &ExactConst) -> bool {
        self.pi_exp == other.pi_exp
            && self.two_exp == other.two_exp
            && self.three_exp == other.three_exp
            && self.gamma_factors == other.gamma_factors
    }

    fn is_unit(&self) -> bool {
        self.rational == 1
            && self.pi_exp.cmp0().is_eq()
            && self.two_exp.cmp0().is_eq()
            && self.three_exp.cmp0().is_eq()
            && self.gamma_factors.is_empty()
    }

    /// Value of the irrational factor `π^a 2^b 3^c Π Γ^e` at `prec` bits.
    pub fn realize_shape(&self, prec: u32) -> Float {
        let mut acc = Float::with_val(prec, 1);
        if self.pi_exp.cmp0().is_ne() {
            acc *= rational_power_of(pi(prec), &self.pi_exp, prec);
        }
        if self.two_exp.cmp0().is_ne() {
            acc *= rational_power_of(Float::with_val(prec, 2), &self.two_exp, prec);
        }
        if self.three_exp.cmp0().is_ne() {
            acc *= rational_power_of(Float::with_val(prec, 3), &self.three_exp, prec);
        }
        for (arg, e) in &self.gamma_factors {
            let g = Float::with_val(prec, arg).gamma();
            acc *= g.pow_i(*e);
        }
        acc
    }

    pub fn realize(&self, prec: u32) -> Float {
        let mut v = self.realize_shape(prec);
        v *= &self.rational;
        v
    }
}

trait PowI {
    fn pow_i(self, e: i32) -> Float;
}

impl PowI for Float {
    fn pow_i(self, e: i32) -> Float {
        use rug::ops::Pow;
        self.pow(e)
    }
}

impl fmt::Display for ExactConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if self.pi_exp.cmp0().is_ne() {
            write!(f, "·π^({})", self.pi_exp)?;
        }
        if self.two_exp.cmp0().is_ne() {
            write!(f, "·2^({})", self.two_exp)?;
        }
        if self.three_exp.cmp0().is_ne() {
            write!(f, "·3^({})", self.three_exp)?;
        }
        for (arg, e) in &self.gamma_factors {
            write!(f, "·Γ({arg})^{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realize_composite_constant() {
        // sqrt(2) Γ(3/4) / (4π)
        let c = ExactConst::rational(q(1, 4))
            .times_pow2(q(1, 2))
            .times_gamma(q(3, 4), 1)
            .times_pi_pow(q(-1, 1));
        let v = c.realize(200);
        let two = Float::with_val(200, 2);
        let want = two.sqrt() * Float::with_val(200, 0.75).gamma() / (pi(200) * 4u32);
        assert!(Float::with_val(200, &v - &want).abs() < 1e-55);
    }

    #[test]
    fn gamma_factors_cancel_and_merge() {
        let a = ExactConst::one().times_gamma(q(3, 4), 1);
        let b = ExactConst::rational(q(5, 2)).times_gamma(q(3, 4), -1);
        let prod = a.mul(&b);
        assert!(prod.is_rational());
        assert_eq!(*prod.rational_part(), q(5, 2));
        assert!(a.same_shape(&a.clone().times_rational(&q(7, 3))));
        assert!(!a.same_shape(&b));
    }
}
