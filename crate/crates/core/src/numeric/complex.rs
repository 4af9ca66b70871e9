use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Float;

/// Complex number with MPFR real and imaginary parts sharing one precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn with_val(prec: u32, re: f64, im: f64) -> Self {
        Self {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    /// Principal logarithm, branch cut along the negative real axis.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        let modulus = self.norm();
        Self::new(Float::with_val(prec, modulus.ln_ref()), self.arg())
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let scale = Float::with_val(prec, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(prec));
        Self::new(c * &scale, s * scale)
    }

    /// `exp(i * theta)` for real `theta`.
    pub fn cis(theta: &Float) -> Self {
        let prec = theta.prec();
        let (s, c) = theta.clone().sin_cos(Float::new(prec));
        Self::new(c, s)
    }

    pub fn scale(&self, k: &Float) -> Self {
        let prec = self.prec();
        Self::new(
            Float::with_val(prec, &self.re * k),
            Float::with_val(prec, &self.im * k),
        )
    }

    pub fn recip(&self) -> Self {
        let prec = self.prec();
        let d = Float::with_val(prec, self.re.square_ref()) + Float::with_val(prec, self.im.square_ref());
        Self::new(
            Float::with_val(prec, &self.re / &d),
            Float::with_val(prec, -(Float::with_val(prec, &self.im / &d))),
        )
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let prec = self.prec();
        Complex::new(
            Float::with_val(prec, &self.re + &rhs.re),
            Float::with_val(prec, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let prec = self.prec();
        Complex::new(
            Float::with_val(prec, &self.re - &rhs.re),
            Float::with_val(prec, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let prec = self.prec();
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        Complex::new(ac - bd, ad + bc)
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        self * &rhs.recip()
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        &self + &rhs
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        &self - &rhs
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        &self * &rhs
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        &self / &rhs
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {:+}i)", self.re.to_f64(), self.im.to_f64())
    }
}
