//! Quartic and sextic function banks, kernels, densities of states and
//! connected correlation functions.

use rug::Float;

use crate::error::Result;
use crate::hyperf::{next_guard, q, ExactConst, HypExpr, HypParams, HypTerm};
use crate::numeric::{digit_loss, EvalResult, PrecisionContext};

/// Sign relating the diagonal limit of the quartic kernel to the density,
/// `K̂(x, x) = QUARTIC_DIAGONAL_SIGN · ρ̂(x)`. Measured by the calibration test.
pub const QUARTIC_DIAGONAL_SIGN: i32 = 1;

/// Same relation for the sextic pair, `K(x, x) = SEXTIC_DIAGONAL_SIGN · ρ(x)`.
pub const SEXTIC_DIAGONAL_SIGN: i32 = 1;

/// Below this separation the kernel quotient is evaluated with extra digits.
pub const NEAR_DIAGONAL_DELTA: f64 = 1e-3;

/// Highest derivative order cached in a bank.
pub const MAX_DERIVATIVE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Quartic,
    Sextic,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Quartic => "quartic",
            Case::Sextic => "sextic",
        }
    }

    pub fn diagonal_sign(self) -> i32 {
        match self {
            Case::Quartic => QUARTIC_DIAGONAL_SIGN,
            Case::Sextic => SEXTIC_DIAGONAL_SIGN,
        }
    }
}

impl std::str::FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "quartic" => Ok(Case::Quartic),
            "sextic" => Ok(Case::Sextic),
            other => Err(format!("unknown case '{other}' (expected quartic or sextic)")),
        }
    }
}

/// The pair `{φ, ψ}` of one case with symbolic derivatives of orders 1..=4.
#[derive(Debug, Clone)]
pub struct FunctionBank {
    case: Case,
    phi: HypExpr,
    psi: HypExpr,
    phi_derivs: Vec<HypExpr>,
    psi_derivs: Vec<HypExpr>,
}

impl FunctionBank {
    /// Bank from explicit expressions; derivatives are generated here.
    pub fn from_parts(case: Case, phi: HypExpr, psi: HypExpr) -> Self {
        let derivs = |e: &HypExpr| {
            let mut out = Vec::with_capacity(MAX_DERIVATIVE);
            let mut cur = e.clone();
            for _ in 0..MAX_DERIVATIVE {
                cur = cur.differentiate();
                out.push(cur.clone());
            }
            out
        };
        Self {
            case,
            phi_derivs: derivs(&phi),
            psi_derivs: derivs(&psi),
            phi,
            psi,
        }
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn phi(&self) -> &HypExpr {
        &self.phi
    }

    pub fn psi(&self) -> &HypExpr {
        &self.psi
    }

    pub fn phi_derivs(&self) -> &[HypExpr] {
        &self.phi_derivs
    }

    pub fn psi_derivs(&self) -> &[HypExpr] {
        &self.psi_derivs
    }

    /// `φ⁽ⁿ⁾` for `n <= 4`.
    pub fn phi_order(&self, n: usize) -> &HypExpr {
        if n == 0 {
            &self.phi
        } else {
            &self.phi_derivs[n - 1]
        }
    }

    /// `ψ⁽ⁿ⁾` for `n <= 4`.
    pub fn psi_order(&self, n: usize) -> &HypExpr {
        if n == 0 {
            &self.psi
        } else {
            &self.psi_derivs[n - 1]
        }
    }

    fn phi_values(&self, x: f64, upto: usize, ctx: &PrecisionContext) -> Result<Vec<EvalResult>> {
        (0..=upto).map(|n| self.phi_order(n).eval(x, ctx)).collect()
    }

    fn psi_values(&self, x: f64, upto: usize, ctx: &PrecisionContext) -> Result<Vec<EvalResult>> {
        (0..=upto).map(|n| self.psi_order(n).eval(x, ctx)).collect()
    }

    fn expect(&self, case: Case) {
        assert_eq!(
            self.case,
            case,
            "function bank holds the {} case",
            self.case.name()
        );
    }
}

fn term(coeff: ExactConst, power: u32, lower: &[(i64, i64)], lambda: &ExactConst, arg_power: u32) -> HypTerm {
    let params = HypParams::new(vec![], lower.iter().map(|&(n, d)| q(n, d)).collect())
        .expect("closed-form parameters are valid");
    HypTerm::new(coeff, power, params, lambda.clone(), arg_power)
}

/// `φ̂(x) = 1/(2Γ(3/4)) ₀F₂(;1/2,3/4;x⁴/64) − √2Γ(3/4)/(4π) x² ₀F₂(;5/4,3/2;x⁴/64)`.
pub fn quartic_phi() -> HypExpr {
    let lambda = ExactConst::rational(q(1, 64));
    HypExpr::new(vec![
        term(
            ExactConst::rational(q(1, 2)).times_gamma(q(3, 4), -1),
            0,
            &[(1, 2), (3, 4)],
            &lambda,
            4,
        ),
        term(
            ExactConst::rational(q(-1, 4))
                .times_pow2(q(1, 2))
                .times_gamma(q(3, 4), 1)
                .times_pi_pow(q(-1, 1)),
            2,
            &[(5, 4), (3, 2)],
            &lambda,
            4,
        ),
    ])
}

/// `ψ̂(x) = −(x/√π) ₀F₂(;3/4,5/4;−x⁴/64)`.
pub fn quartic_psi() -> HypExpr {
    let lambda = ExactConst::rational(q(-1, 64));
    HypExpr::new(vec![term(
        ExactConst::rational(q(-1, 1)).times_pi_pow(q(-1, 2)),
        1,
        &[(3, 4), (5, 4)],
        &lambda,
        4,
    )])
}

/// `φ(x)`, three `₀F₄` terms in `−3x⁶/6⁶`.
pub fn sextic_phi() -> HypExpr {
    let lambda = ExactConst::rational(q(-3, 46656));
    HypExpr::new(vec![
        term(
            ExactConst::rational(q(1, 3))
                .times_pow3(q(1, 6))
                .times_gamma(q(5, 6), -1),
            0,
            &[(1, 3), (1, 2), (2, 3), (5, 6)],
            &lambda,
            6,
        ),
        term(
            ExactConst::rational(q(-1, 12))
                .times_pow3(q(1, 2))
                .times_pi_pow(q(-1, 2)),
            2,
            &[(2, 3), (5, 6), (7, 6), (4, 3)],
            &lambda,
            6,
        ),
        term(
            ExactConst::rational(q(1, 144))
                .times_pow3(q(5, 6))
                .times_gamma(q(5, 6), 1)
                .times_pi_pow(q(-1, 1)),
            4,
            &[(7, 6), (4, 3), (3, 2), (5, 3)],
            &lambda,
            6,
        ),
    ])
}

/// `ψ(x)`, two `₀F₄` terms in `+3x⁶/6⁶`.
pub fn sextic_psi() -> HypExpr {
    let lambda = ExactConst::rational(q(3, 46656));
    HypExpr::new(vec![
        term(
            ExactConst::rational(q(-1, 3))
                .times_pow3(q(1, 3))
                .times_gamma(q(2, 3), -1),
            1,
            &[(1, 2), (2, 3), (5, 6), (7, 6)],
            &lambda,
            6,
        ),
        term(
            ExactConst::rational(q(1, 12))
                .times_pow3(q(1, 6))
                .times_gamma(q(2, 3), 1)
                .times_pi_pow(q(-1, 1)),
            3,
            &[(5, 6), (7, 6), (4, 3), (3, 2)],
            &lambda,
            6,
        ),
    ])
}

/// Bank for `case` built from the closed hypergeometric forms.
pub fn build_bank(case: Case) -> FunctionBank {
    match case {
        Case::Quartic => FunctionBank::from_parts(case, quartic_phi(), quartic_psi()),
        Case::Sextic => FunctionBank::from_parts(case, sextic_phi(), sextic_psi()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    OffDiagonal,
    NearDiagonal,
    Diagonal,
}

#[derive(Debug, Clone)]
pub struct KernelValue {
    pub value: Float,
    pub error_estimate: f64,
    pub regime: Regime,
}

impl KernelValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Signed sum of products `Σ sign · a · b` with first-order error
/// propagation and the largest product kept for cancellation tracking.
struct Bilinear {
    value: Float,
    peak: Float,
    err: f64,
    terms: usize,
}

impl Bilinear {
    fn new(prec: u32) -> Self {
        Self {
            value: Float::with_val(prec, 0),
            peak: Float::with_val(prec, 0),
            err: 0.0,
            terms: 0,
        }
    }

    fn add(&mut self, sign: i32, scale: f64, a: &EvalResult, b: &EvalResult) {
        let prec = self.value.prec();
        let mut p = Float::with_val(prec, &a.value * &b.value);
        p *= scale;
        let abs = Float::with_val(prec, p.abs_ref());
        if abs > self.peak {
            self.peak = abs;
        }
        self.err += scale.abs()
            * (a.value.to_f64().abs() * b.abs_error_estimate
                + b.value.to_f64().abs() * a.abs_error_estimate
                + a.abs_error_estimate * b.abs_error_estimate);
        self.terms += a.terms_used + b.terms_used;
        if sign >= 0 {
            self.value += p;
        } else {
            self.value -= p;
        }
    }

    fn finish(mut self) -> EvalResult {
        let mut rounding = Float::with_val(self.value.prec(), &self.peak * 8u32);
        rounding >>= self.value.prec() as i32;
        self.err += rounding.to_f64();
        EvalResult {
            value: self.value,
            abs_error_estimate: self.err,
            terms_used: self.terms,
            peak_term_magnitude: self.peak,
        }
    }
}

/// Runs `f`, rerunning with more guard digits while the bilinear
/// combination itself cancels beyond the guard budget.
fn escalate<F>(ctx: &PrecisionContext, f: F) -> Result<EvalResult>
where
    F: Fn(&PrecisionContext) -> Result<EvalResult>,
{
    let mut c = *ctx;
    let mut rounds = 0;
    loop {
        let r = f(&c)?;
        rounds += 1;
        let loss = digit_loss(&r.peak_term_magnitude, &r.value);
        match next_guard(c.guard_digits(), loss) {
            Some(g) if c.is_adaptive() && rounds <= 6 => c = c.with_guard(g),
            _ => return Ok(r),
        }
    }
}

fn near_diagonal_context(ctx: &PrecisionContext, gap: f64) -> PrecisionContext {
    if !ctx.is_adaptive() {
        return *ctx;
    }
    let boost = (1.0 / gap).log10().ceil().max(0.0) as u32;
    ctx.with_target(ctx.target_digits() + boost)
}

fn kernel_generic<N>(
    bank: &FunctionBank,
    x: f64,
    y: f64,
    ctx: &PrecisionContext,
    numerator: N,
    density: fn(&FunctionBank, f64, &PrecisionContext) -> Result<EvalResult>,
) -> Result<KernelValue>
where
    N: Fn(&FunctionBank, f64, f64, &PrecisionContext) -> Result<EvalResult>,
{
    if x == y {
        let rho = density(bank, x, ctx)?;
        let mut value = rho.value;
        if bank.case.diagonal_sign() < 0 {
            value = -value;
        }
        return Ok(KernelValue {
            value,
            error_estimate: rho.abs_error_estimate,
            regime: Regime::Diagonal,
        });
    }
    let gap = (x - y).abs();
    let (regime, c) = if gap < NEAR_DIAGONAL_DELTA {
        (Regime::NearDiagonal, near_diagonal_context(ctx, gap))
    } else {
        (Regime::OffDiagonal, *ctx)
    };
    let num = escalate(&c, |c| numerator(bank, x, y, c))?;
    let prec = num.value.prec();
    let diff = Float::with_val(prec, Float::with_val(prec, x) - Float::with_val(prec, y));
    let value = Float::with_val(prec, &num.value / &diff);
    Ok(KernelValue {
        value,
        error_estimate: num.abs_error_estimate / gap,
        regime,
    })
}

fn quartic_numerator(bank: &FunctionBank, x: f64, y: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    let f = bank.phi_values(x, 2, ctx)?;
    let g = bank.psi_values(y, 2, ctx)?;
    let mut acc = Bilinear::new(f[0].value.prec().max(g[0].value.prec()));
    acc.add(1, 1.0, &f[1], &g[1]);
    acc.add(-1, 1.0, &f[2], &g[0]);
    acc.add(-1, 1.0, &f[0], &g[2]);
    Ok(acc.finish())
}

fn sextic_numerator(bank: &FunctionBank, x: f64, y: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    let f = bank.phi_values(x, 4, ctx)?;
    let g = bank.psi_values(y, 4, ctx)?;
    let mut acc = Bilinear::new(f[0].value.prec().max(g[0].value.prec()));
    acc.add(1, 2.0, &f[4], &g[0]);
    acc.add(-1, 2.0, &f[3], &g[1]);
    acc.add(1, 2.0, &f[2], &g[2]);
    acc.add(-1, 2.0, &f[1], &g[3]);
    acc.add(1, 2.0, &f[0], &g[4]);
    Ok(acc.finish())
}

/// `K̂(x, y) = [φ̂′(x)ψ̂′(y) − φ̂″(x)ψ̂(y) − φ̂(x)ψ̂″(y)] / (x − y)`.
///
/// At `x == y` the diagonal limit is served from the density.
pub fn kernel_quartic(bank: &FunctionBank, x: f64, y: f64, ctx: &PrecisionContext) -> Result<KernelValue> {
    bank.expect(Case::Quartic);
    kernel_generic(bank, x, y, ctx, quartic_numerator, density_quartic)
}

/// `K(x, y) = 2/(x − y) · [φ⁗ψ − φ‴ψ′ + φ″ψ″ − φ′ψ‴ + φψ⁗]`.
pub fn kernel_sextic(bank: &FunctionBank, x: f64, y: f64, ctx: &PrecisionContext) -> Result<KernelValue> {
    bank.expect(Case::Sextic);
    kernel_generic(bank, x, y, ctx, sextic_numerator, density_sextic)
}

/// `ρ̂(x) = −[φ̂′ψ̂″ − φ̂″ψ̂′ + x φ̂ ψ̂]`.
pub fn density_quartic(bank: &FunctionBank, x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    bank.expect(Case::Quartic);
    escalate(ctx, |c| {
        let f = bank.phi_values(x, 2, c)?;
        let g = bank.psi_values(x, 2, c)?;
        let mut acc = Bilinear::new(f[0].value.prec().max(g[0].value.prec()));
        acc.add(-1, 1.0, &f[1], &g[2]);
        acc.add(1, 1.0, &f[2], &g[1]);
        acc.add(-1, x, &f[0], &g[0]);
        Ok(acc.finish())
    })
}

/// `ρ(x) = −x φ ψ − 2[φ⁗ψ′ − φ′ψ⁗ + φ″ψ‴ − φ‴ψ″]`.
pub fn density_sextic(bank: &FunctionBank, x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    bank.expect(Case::Sextic);
    escalate(ctx, |c| {
        let f = bank.phi_values(x, 4, c)?;
        let g = bank.psi_values(x, 4, c)?;
        let mut acc = Bilinear::new(f[0].value.prec().max(g[0].value.prec()));
        acc.add(-1, x, &f[0], &g[0]);
        acc.add(-1, 2.0, &f[4], &g[1]);
        acc.add(1, 2.0, &f[1], &g[4]);
        acc.add(-1, 2.0, &f[2], &g[3]);
        acc.add(1, 2.0, &f[3], &g[2]);
        Ok(acc.finish())
    })
}

fn corr_from(k: KernelValue) -> EvalResult {
    let prec = k.value.prec();
    let sq = Float::with_val(prec, k.value.square_ref());
    let err = 2.0 * k.value.to_f64().abs() * k.error_estimate + k.error_estimate * k.error_estimate;
    EvalResult {
        peak_term_magnitude: sq.clone(),
        value: -sq,
        abs_error_estimate: err,
        terms_used: 0,
    }
}

/// `ρ̂_c(x) = −[K̂(x, −x)]²`.
pub fn corr_quartic(bank: &FunctionBank, x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    Ok(corr_from(kernel_quartic(bank, x, -x, ctx)?))
}

/// `ρ_c(x) = −[K(x, −x)]²`.
pub fn corr_sextic(bank: &FunctionBank, x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    Ok(corr_from(kernel_sextic(bank, x, -x, ctx)?))
}

/// Kernel of either case.
pub fn kernel(bank: &FunctionBank, x: f64, y: f64, ctx: &PrecisionContext) -> Result<KernelValue> {
    match bank.case {
        Case::Quartic => kernel_quartic(bank, x, y, ctx),
        Case::Sextic => kernel_sextic(bank, x, y, ctx),
    }
}

/// Density of states of either case.
pub fn density(bank: &FunctionBank, x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    match bank.case {
        Case::Quartic => density_quartic(bank, x, ctx),
        Case::Sextic => density_sextic(bank, x, ctx),
    }
}

/// Connected correlation function of either case.
pub fn correlation(bank: &FunctionBank, x: f64, ctx: &PrecisionContext) -> Result<EvalResult> {
    match bank.case {
        Case::Quartic => corr_quartic(bank, x, ctx),
        Case::Sextic => corr_sextic(bank, x, ctx),
    }
}
