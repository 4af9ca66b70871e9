//! Gamma family at arbitrary precision.
//!
//! Real gamma defers to MPFR. Complex log-gamma uses upward shifting
//! followed by the Stirling series with exact Bernoulli coefficients.

use std::sync::OnceLock;

use rug::{Float, Integer, Rational};

use super::{non_positive_integer, pi, AsReal, Complex, PrecisionContext};
use crate::error::{Error, Result};

/// Number of Stirling coefficients held in the shared table.
const STIRLING_TERMS: usize = 256;

/// `Γ(z)` for real `z` at the context's working precision.
pub fn gamma_real(z: impl AsReal, ctx: &PrecisionContext) -> Result<Float> {
    let z = z.as_real(ctx.working_bits());
    if non_positive_integer(&z) {
        return Err(Error::Pole(z.to_string_radix(10, Some(8))));
    }
    Ok(z.gamma())
}

/// Rising factorial `(a)_k` by direct product; `(a)_0 = 1`.
pub fn pochhammer(a: impl AsReal, k: u32, ctx: &PrecisionContext) -> Float {
    let prec = ctx.working_bits();
    let a = a.as_real(prec);
    let mut acc = Float::with_val(prec, 1);
    for j in 0..k {
        acc *= Float::with_val(prec, &a + j);
    }
    acc
}

/// Principal-branch `log Γ(z)` for complex `z`.
pub fn log_gamma_complex(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    LogGamma::new(ctx.working_bits()).ln_gamma(z)
}

/// Stirling-series evaluator with coefficients realized once at a fixed
/// precision. Build one per integral and reuse it across samples.
#[derive(Debug, Clone)]
pub struct LogGamma {
    prec: u32,
    radius: f64,
    coeffs: Vec<Float>,
    half_ln_two_pi: Float,
}

impl LogGamma {
    pub fn new(prec: u32) -> Self {
        let digits = prec as f64 * std::f64::consts::LOG10_2;
        let terms = ((0.37 * digits + 4.0) * std::f64::consts::PI).ceil() as usize + 8;
        let terms = terms.min(STIRLING_TERMS);
        let radius = stirling_radius(digits, terms);
        let table = stirling_table();
        let coeffs = table[..terms].iter().map(|c| Float::with_val(prec, c)).collect();
        let two_pi = Float::with_val(prec, pi(prec) * 2u32);
        let half_ln_two_pi = Float::with_val(prec, two_pi.ln() / 2u32);
        Self {
            prec,
            radius,
            coeffs,
            half_ln_two_pi,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Principal branch: the analytic continuation of `ln Γ` from the
    /// positive real axis, cut along the negative real axis.
    pub fn ln_gamma(&self, z: &Complex) -> Result<Complex> {
        self.check_pole(z)?;
        let z = self.round(z);
        let shifts = self.shifts_for(&z);
        let mut w = z.clone();
        let mut correction = Complex::with_val(self.prec, 0.0, 0.0);
        for _ in 0..shifts {
            correction = &correction + &w.ln();
            w.re += 1u32;
        }
        Ok(&self.stirling(&w) - &correction)
    }

    /// `ln Γ(z)` up to an integer multiple of `2πi`; cheaper than
    /// [`ln_gamma`](Self::ln_gamma) and sufficient whenever only the
    /// exponential is used.
    pub fn ln_gamma_mod_2pi(&self, z: &Complex) -> Result<Complex> {
        self.check_pole(z)?;
        let z = self.round(z);
        let shifts = self.shifts_for(&z);
        if shifts == 0 {
            return Ok(self.stirling(&z));
        }
        let mut w = z.clone();
        let mut product = Complex::with_val(self.prec, 1.0, 0.0);
        for _ in 0..shifts {
            product = &product * &w;
            w.re += 1u32;
        }
        Ok(&self.stirling(&w) - &product.ln())
    }

    fn check_pole(&self, z: &Complex) -> Result<()> {
        if z.im.is_zero() && non_positive_integer(&z.re) {
            return Err(Error::Pole(z.re.to_string_radix(10, Some(8))));
        }
        Ok(())
    }

    fn round(&self, z: &Complex) -> Complex {
        Complex::new(
            Float::with_val(self.prec, &z.re),
            Float::with_val(self.prec, &z.im),
        )
    }

    fn shifts_for(&self, z: &Complex) -> u32 {
        let re = z.re.to_f64();
        let im = z.im.to_f64();
        if re >= 0.0 && re.hypot(im) >= self.radius {
            0
        } else {
            (self.radius - re).ceil().max(0.0) as u32
        }
    }

    fn stirling(&self, w: &Complex) -> Complex {
        let prec = self.prec;
        let ln_w = w.ln();
        let mut half = w.clone();
        half.re -= Float::with_val(prec, 0.5);
        let mut acc = &(&half * &ln_w) - w;
        acc.re += &self.half_ln_two_pi;

        let inv = w.recip();
        let inv_sq = inv.square();
        let mut power = inv;
        let eps_exp = -(prec as i32) - 4;
        let acc_mag = acc.norm();
        for c in &self.coeffs {
            let term = power.scale(c);
            let small = match (term.norm().get_exp(), acc_mag.get_exp()) {
                (Some(t), Some(a)) => t < a + eps_exp,
                (None, _) => true,
                _ => false,
            };
            acc = &acc + &term;
            if small {
                break;
            }
            power = &power * &inv_sq;
        }
        acc
    }
}

/// Smallest `|w|` for which `terms` Stirling terms reach `digits` accuracy.
fn stirling_radius(digits: f64, terms: usize) -> f64 {
    let base = 0.37 * digits + 4.0;
    // log10 |B_2K / (2K(2K-1))| via |B_2K| ~ 2 (2K)! / (2π)^(2K)
    let k2 = 2.0 * terms as f64;
    let log10_coeff =
        (2f64.ln() + ln_factorial(k2) - k2 * (2.0 * std::f64::consts::PI).ln() - (k2 * (k2 - 1.0)).ln())
            / std::f64::consts::LN_10;
    let needed = 10f64.powf((log10_coeff + digits + 2.0) / (k2 - 1.0));
    base.max(needed)
}

fn ln_factorial(n: f64) -> f64 {
    // Stirling is ample for a radius estimate.
    if n < 2.0 {
        return 0.0;
    }
    n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln()
}

/// Exact Stirling coefficients `B_2k / (2k (2k-1))` for `k = 1..=STIRLING_TERMS`.
fn stirling_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        bernoulli_even(STIRLING_TERMS)
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                let k = (i + 1) as u64;
                b / Integer::from(2 * k * (2 * k - 1))
            })
            .collect()
    })
}

/// `B_2, B_4, …, B_2n` from tangent numbers (Brent–Harvey recurrence).
pub(crate) fn bernoulli_even(n: usize) -> Vec<Rational> {
    let mut tangent: Vec<Integer> = Vec::with_capacity(n);
    let mut fact = Integer::from(1);
    for k in 1..=n {
        tangent.push(fact.clone());
        fact *= k as u64;
    }
    for k in 1..n {
        for j in k..n {
            let left = Integer::from(&tangent[j - 1] * (j - k) as u64);
            let right = Integer::from(&tangent[j] * (j - k + 2) as u64);
            tangent[j] = left + right;
        }
    }
    tangent
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let k = (i + 1) as u32;
            let four_k = Integer::from(1) << (2 * k);
            let denom = Integer::from(&four_k - 1u32) * &four_k;
            let mut b = Rational::from((t * (2 * k), denom));
            if k.is_multiple_of(2) {
                b = -b;
            }
            b
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::digits(d)
    }

    fn close(a: &Float, b: &Float, digits: i32) -> bool {
        let diff = Float::with_val(a.prec(), a - b).abs();
        let scale = Float::with_val(a.prec(), b.abs_ref()).max(&Float::with_val(a.prec(), 1e-300));
        diff <= scale * Float::with_val(a.prec(), 10f64.powi(-digits))
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli_even(6);
        assert_eq!(b[0], Rational::from((1, 6)));
        assert_eq!(b[1], Rational::from((-1, 30)));
        assert_eq!(b[2], Rational::from((1, 42)));
        assert_eq!(b[3], Rational::from((-1, 30)));
        assert_eq!(b[4], Rational::from((5, 66)));
        assert_eq!(b[5], Rational::from((-691, 2730)));
    }

    #[test]
    fn gamma_of_one_and_half() {
        let c = ctx(50);
        let one = gamma_real(1.0, &c).unwrap();
        assert_eq!(one, 1);
        let half = gamma_real(0.5, &c).unwrap();
        let sqrt_pi = pi(c.working_bits()).sqrt();
        assert!(close(&half, &sqrt_pi, 50));
    }

    #[test]
    fn gamma_three_quarters_stable_across_precisions() {
        let lo = gamma_real(0.75, &ctx(50)).unwrap();
        let hi = gamma_real(0.75, &ctx(80)).unwrap();
        assert!(close(&lo, &Float::with_val(lo.prec(), &hi), 50));
        let frozen = Float::with_val(
            300,
            Float::parse("1.22541670246517764512909830336289052685123924810807061123012").unwrap(),
        );
        assert!(close(&hi, &Float::with_val(hi.prec(), &frozen), 58));
    }

    #[test]
    fn gamma_poles_rejected() {
        for z in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma_real(z, &ctx(20)), Err(Error::Pole(_))));
        }
        let z = Complex::with_val(100, -2.0, 0.0);
        assert!(matches!(log_gamma_complex(&z, &ctx(20)), Err(Error::Pole(_))));
    }

    #[test]
    fn pochhammer_products() {
        let c = ctx(30);
        assert_eq!(pochhammer(0.3, 0, &c), 1);
        assert_eq!(pochhammer(0.0, 0, &c), 1);
        assert_eq!(pochhammer(0.5, 2, &c), 0.75);
        assert_eq!(pochhammer(0.75, 3, &c), 231.0 / 64.0);
        assert_eq!(pochhammer(0.0, 3, &c), 0);
    }

    #[test]
    fn log_gamma_at_one_and_two() {
        let c = ctx(40);
        for z in [1.0, 2.0] {
            let v = log_gamma_complex(&Complex::with_val(c.working_bits(), z, 0.0), &c).unwrap();
            assert!(v.re.clone().abs() < 1e-45);
            assert!(v.im.clone().abs() < 1e-45);
        }
    }

    // Frozen against an independent 60-digit reference (mpmath.loggamma).
    #[test]
    fn log_gamma_complex_reference_values() {
        let cases = [
            (
                (0.25, 10.0),
                "-15.3645927602952401405006173020328585533997738399041891670289",
                "12.6341936669384857862470300630202671678507257343366858570522",
            ),
            (
                (-2.5, 0.5),
                "-0.935085621298277478682588384941380303446817204421639672235129",
                "-8.87096288524745919864582471648450862967799717676155325172132",
            ),
            (
                (3.0, -40.0),
                "-52.6891550608226366306391654061853702594368866721474972866508",
                "-111.405132415459965497861330494186222653952453946357882087204",
            ),
            (
                (0.1, 0.0),
                "2.25271265173420590200623795689547638444798656493073599985743",
                "0",
            ),
        ];
        let c = ctx(50);
        let prec = c.working_bits();
        for ((re, im), want_re, want_im) in cases {
            let got = log_gamma_complex(&Complex::with_val(prec, re, im), &c).unwrap();
            let want_re = Float::with_val(prec, Float::parse(want_re).unwrap());
            let want_im = Float::with_val(prec, Float::parse(want_im).unwrap());
            let dr = Float::with_val(prec, &got.re - &want_re).abs();
            let di = Float::with_val(prec, &got.im - &want_im).abs();
            assert!(dr < 1e-48, "re mismatch at {re}+{im}i: {}", dr.to_f64());
            assert!(di < 1e-48, "im mismatch at {re}+{im}i: {}", di.to_f64());
        }
    }

    #[test]
    fn log_gamma_recurrence_and_real_axis() {
        let c = ctx(60);
        let lg = LogGamma::new(c.working_bits());
        let prec = c.working_bits();
        let z = Complex::with_val(prec, 0.25, 10.0);
        let mut z1 = z.clone();
        z1.re += 1u32;
        let lhs = lg.ln_gamma(&z1).unwrap();
        let rhs = &lg.ln_gamma(&z).unwrap() + &z.ln();
        assert!(Float::with_val(prec, &lhs.re - &rhs.re).abs() < 1e-55);
        assert!(Float::with_val(prec, &lhs.im - &rhs.im).abs() < 1e-55);

        // exp(log Γ) reproduces Γ on the real axis, including negative arguments.
        for x in [0.3, 4.7, -0.5, -3.25] {
            let lz = lg.ln_gamma(&Complex::with_val(prec, x, 0.0)).unwrap();
            let g = lz.exp();
            let want = gamma_real(x, &c).unwrap();
            assert!(close(&g.re, &want, 55), "x = {x}");
        }
    }

    #[test]
    fn unbranched_log_gamma_has_same_exponential() {
        let lg = LogGamma::new(200);
        for (re, im) in [(-3.7, 2.0), (0.25, -1.5), (0.5, 30.0)] {
            let z = Complex::with_val(200, re, im);
            let a = lg.ln_gamma(&z).unwrap().exp();
            let b = lg.ln_gamma_mod_2pi(&z).unwrap().exp();
            let d = (&a - &b).norm();
            assert!(d < Float::with_val(200, a.norm() * 1e-55));
        }
    }
}
