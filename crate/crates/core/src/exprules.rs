//! Closed-form rules for integrands close to `lambda e^{alpha x}`.
//!
//! The two-point rule is the logarithmic mean `(f1 - f0) / log(f1 / f0)`,
//! which integrates every `lambda e^{alpha x}` exactly. From it follow the
//! three-point refinement, moment rules for `x^n f(x)`, a rule for tails out to
//! infinity, and a two-point rule on the Gauss-Legendre nodes.

use crate::construct::q2_combination;
use crate::error::{QuadError, Result};
use crate::rule::{ExactnessTag, Interval, NodeSet, PanelRule};

/// Largest supported moment order; `n!` still fits in a `u64`.
pub const MAX_MOMENT_ORDER: u32 = 20;

/// `|z|` below which [`log_mean`] switches to its series, `z = (y - x) / (y + x)`.
pub const LOG_MEAN_SERIES_THRESHOLD: f64 = 1e-4;

/// `|log(f1 / f0)|` below which a moment rule hands over to its fallback, if it has one.
pub const MOMENT_DEGENERATE_THRESHOLD: f64 = 1e-8;

/// Beyond this `|log(f1 / f0)|` the moment sum is evaluated term by term.
const MOMENT_SERIES_LIMIT: f64 = 30.0;

/// Common sign of two nonzero samples, or a domain error.
fn common_sign(x: f64, y: f64) -> Result<f64> {
    if x > 0.0 && y > 0.0 {
        Ok(1.0)
    } else if x < 0.0 && y < 0.0 {
        Ok(-1.0)
    } else {
        Err(QuadError::Domain(format!(
            "samples must be nonzero and of one sign, got {x} and {y}"
        )))
    }
}

/// `log(|f1| / |f0|)` for samples of one sign.
///
/// Close to the diagonal the ratio is formed as `log1p((f1 - f0) / f0)`, which
/// keeps the leading digits of the difference.
pub fn log_ratio(f0: f64, f1: f64) -> Result<f64> {
    common_sign(f0, f1)?;
    let (x, y) = (f0.abs(), f1.abs());
    let r = y / x;
    if (r - 1.0).abs() < 0.5 {
        Ok(((y - x) / x).ln_1p())
    } else {
        Ok(r.ln())
    }
}

/// Logarithmic mean `(y - x) / log(y / x)`, with `log_mean(c, c) = c`.
///
/// Both arguments must be nonzero and share a sign; the mean is taken of the
/// absolute values and the sign reapplied.
pub fn log_mean(x: f64, y: f64) -> Result<f64> {
    let sign = common_sign(x, y)?;
    let (x, y) = (x.abs().min(y.abs()), x.abs().max(y.abs()));
    if x == y {
        return Ok(sign * x);
    }
    let m = 0.5 * (x + y);
    let z = (y - x) / (x + y);
    let value = if z.abs() < LOG_MEAN_SERIES_THRESHOLD {
        // z / artanh(z)
        let z2 = z * z;
        m * (1.0 - z2 / 3.0 - 4.0 * z2 * z2 / 45.0)
    } else {
        (y - x) / log_ratio(x, y)?
    };
    Ok(sign * value)
}

fn exp_tags(rule: PanelRule) -> PanelRule {
    rule.symmetric(true)
        .tag(ExactnessTag::Affine("exp".into()))
        .tag(ExactnessTag::Scaling("exp".into()))
        .tag(ExactnessTag::Quasilinear)
}

/// Two-point rule `q = log_mean(f0, f1)` on nodes `{0, 1}`.
pub fn exp_q1() -> PanelRule {
    let nodes = NodeSet::new(vec![0.0, 1.0]).expect("static nodes");
    exp_tags(PanelRule::new("exp-q1", nodes, 3, |f: &[f64], _: &Interval| {
        log_mean(f[0], f[1])
    }))
}

/// Three-point rule on nodes `{0, 1/2, 1}` combining three logarithmic means.
pub fn exp_q2() -> PanelRule {
    let nodes = NodeSet::new(vec![0.0, 0.5, 1.0]).expect("static nodes");
    exp_tags(PanelRule::new("exp-q2", nodes, 5, |f: &[f64], _: &Interval| {
        Ok(q2_combination(
            log_mean(f[0], f[1])?,
            log_mean(f[1], f[2])?,
            log_mean(f[0], f[2])?,
        ))
    }))
}

/// Moment rule for `int x^n f(x) dx` on integrands close to an exponential.
#[derive(Debug, Clone)]
pub struct MomentRule {
    n: u32,
    fallback: Option<PanelRule>,
}

impl MomentRule {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_MOMENT_ORDER {
            return Err(QuadError::OrderTooLarge(n));
        }
        Ok(Self { n, fallback: None })
    }

    /// A moment rule that applies `fallback` to `g(x) = x^n f(x)` at the panel
    /// endpoints whenever `|log(f1 / f0)| < MOMENT_DEGENERATE_THRESHOLD`.
    pub fn with_fallback(n: u32, fallback: PanelRule) -> Result<Self> {
        if fallback.nodes().as_slice() != [0.0, 1.0] {
            return Err(QuadError::Config(format!(
                "moment fallback `{}` must use the endpoint nodes {{0, 1}}",
                fallback.name()
            )));
        }
        let mut rule = Self::new(n)?;
        rule.fallback = Some(fallback);
        Ok(rule)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn fallback(&self) -> Option<&PanelRule> {
        self.fallback.as_ref()
    }
}

/// `n! / (n - k)!` as an exact integer product.
pub fn falling_factorial(n: u32, k: u32) -> u64 {
    ((n - k + 1)..=n).map(u64::from).product()
}

fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1))
}

/// `int_0^1 t^j e^{L t} dt` summed from a series with positive terms only.
fn exp_power_integral(j: u32, l: f64) -> f64 {
    let j = f64::from(j);
    let mut sum = 0.0;
    if l >= 0.0 {
        // sum_m L^m / (m! (j + m + 1))
        let mut power = 1.0;
        for m in 0..4096 {
            let m = f64::from(m);
            let term = power / (j + m + 1.0);
            sum += term;
            if m > l && term <= f64::EPSILON * 0.25 * sum {
                break;
            }
            power *= l / (m + 1.0);
        }
        sum
    } else {
        // e^L j! sum_m (-L)^m / (m + j + 1)!, written as a running ratio
        let u = -l;
        let mut term = 1.0 / (j + 1.0);
        for m in 0..4096 {
            sum += term;
            if f64::from(m) > u && term <= f64::EPSILON * 0.25 * sum {
                break;
            }
            term *= u / (f64::from(m) + j + 2.0);
        }
        l.exp() * sum
    }
}

/// Moment rule estimate of `int_a^{a+h} x^n f(x) dx` from `f0 = f(a)`, `f1 = f(a + h)`.
///
/// The estimate is the exact moment of the exponential through both samples,
/// `sum_k (-1)^k n!/(n-k)! [(a+h)^{n-k} f1 - a^{n-k} f0] (h / L)^{k+1}` with
/// `L = log(f1 / f0)`. For moderate `|L|` the same quantity is evaluated as
/// `f0 h int_0^1 (a + h t)^n e^{L t} dt`, which avoids the cancellation between
/// the terms of the sum and stays continuous through `L = 0`.
pub fn moment_panel(rule: &MomentRule, f0: f64, f1: f64, interval: &Interval) -> Result<f64> {
    let n = rule.n;
    if n > MAX_MOMENT_ORDER {
        return Err(QuadError::OrderTooLarge(n));
    }
    let l = log_ratio(f0, f1)?;
    let (a, h) = (interval.a(), interval.h());

    if let Some(fallback) = &rule.fallback {
        if l.abs() < MOMENT_DEGENERATE_THRESHOLD {
            let g = [a.powi(n as i32) * f0, interval.b().powi(n as i32) * f1];
            return Ok(h * fallback.mean(&g, interval)?);
        }
    }

    let value = if l.abs() <= MOMENT_SERIES_LIMIT {
        let moments: f64 = (0..=n)
            .map(|j| {
                binomial(n, j) as f64
                    * a.powi((n - j) as i32)
                    * h.powi(j as i32)
                    * exp_power_integral(j, l)
            })
            .sum();
        f0 * h * moments
    } else {
        let b = interval.b();
        let step = h / l;
        (0..=n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let coeff = sign * falling_factorial(n, k) as f64;
                let nk = (n - k) as i32;
                coeff * (b.powi(nk) * f1 - a.powi(nk) * f0) * step.powi(k as i32 + 1)
            })
            .sum()
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QuadError::NonFinite(format!(
            "moment rule n = {n} on {interval:?} with samples {f0}, {f1}"
        )))
    }
}

/// `int_a^inf f(x) dx ~ h f(a) / log(f(a) / f(a + h))` for `f(a) > f(a + h) > 0`.
pub fn improper_tail(f0: f64, f1: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(QuadError::Domain(format!(
            "tail spacing must be positive, got {h}"
        )));
    }
    if !(f0 > f1 && f1 > 0.0) {
        return Err(QuadError::Domain(format!(
            "tail rule needs f(a) > f(a + h) > 0, got {f0} and {f1}"
        )));
    }
    Ok(h * f0 / -log_ratio(f0, f1)?)
}

/// Sign of the correction term of the Gauss-like two-point rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionSign {
    Plus,
    Minus,
}

impl CorrectionSign {
    pub fn factor(self) -> f64 {
        match self {
            CorrectionSign::Plus => 1.0,
            CorrectionSign::Minus => -1.0,
        }
    }
}

/// Correction sign that gives the Gauss-like rule its fifth-order single-step error.
///
/// Fixed by the slope fit in this crate's tests (`gauss_like_sign_resolution`):
/// on `cosh` at `a = 0.3` the `Plus` sign fits a slope near 5 and `Minus` near 3.
pub const GAUSS_LIKE_DEFAULT_SIGN: CorrectionSign = CorrectionSign::Plus;

/// Nodes `{xi, 1 - xi}` with `xi = (3 - sqrt 3) / 6`, the two-point Gauss-Legendre nodes.
pub fn gauss_like_nodes() -> NodeSet {
    let xi = (3.0 - 3f64.sqrt()) / 6.0;
    NodeSet::new(vec![xi, 1.0 - xi]).expect("static nodes")
}

/// `log_mean(f0, f1) + sign (f0 - f1) log(f0 / f1) / 12`.
pub fn gauss_like(f0: f64, f1: f64, sign: CorrectionSign) -> Result<f64> {
    let (f0, f1) = if f0 <= f1 { (f0, f1) } else { (f1, f0) };
    let mean = log_mean(f0, f1)?;
    let correction = (f0 - f1) * -log_ratio(f0, f1)? / 12.0;
    Ok(mean + sign.factor() * correction)
}

/// Gauss-like two-point rule with the given correction sign.
pub fn gauss_like_rule(sign: CorrectionSign) -> PanelRule {
    PanelRule::new("gauss-like", gauss_like_nodes(), 5, move |f: &[f64], _: &Interval| {
        gauss_like(f[0], f[1], sign)
    })
    .symmetric(true)
    .tag(ExactnessTag::Quasilinear)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E_INV: f64 = 0.36787944117144233;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn log_mean_of_equal_arguments() {
        for c in [1.0, -3.0, 0.01] {
            assert_eq!(log_mean(c, c).unwrap(), c);
        }
    }

    #[test]
    fn log_mean_unit_log_ratio() {
        let v = log_mean(1.0, E_INV).unwrap();
        assert!(rel(v, 1.0 - E_INV) < 1e-15, "{v}");
        let v = log_mean(-1.0, -E_INV).unwrap();
        assert!(rel(v, -(1.0 - E_INV)) < 1e-15, "{v}");
    }

    #[test]
    fn log_mean_rejects_mixed_sign_and_zero() {
        assert!(matches!(log_mean(1.0, -1.0), Err(QuadError::Domain(_))));
        assert!(matches!(log_mean(0.0, 1.0), Err(QuadError::Domain(_))));
        assert!(matches!(log_mean(0.0, 0.0), Err(QuadError::Domain(_))));
    }

    #[test]
    fn log_mean_series_matches_direct_quotient() {
        // at z = 1e-3 the truncated series and the quotient agree to ~z^6
        let (x, y): (f64, f64) = (1.0 - 1e-3, 1.0 + 1e-3);
        let z = (y - x) / (x + y);
        let series = 0.5 * (x + y) * (1.0 - z * z / 3.0 - 4.0 * z.powi(4) / 45.0);
        let direct = (y - x) / (y / x).ln();
        assert!(rel(series, direct) < 1e-13, "{series} vs {direct}");
        let lm = log_mean(x, y).unwrap();
        assert!(rel(lm, direct) < 1e-13);
    }

    #[test]
    fn log_mean_is_continuous_at_series_switch() {
        let x = 2.0;
        for t in [0.99, 1.0, 1.01] {
            let z = LOG_MEAN_SERIES_THRESHOLD * t;
            let y = x * (1.0 + z) / (1.0 - z);
            let lm = log_mean(x, y).unwrap();
            let direct = (y - x) / ((y - x) / x).ln_1p();
            assert!(rel(lm, direct) < 1e-14);
        }
    }

    #[test]
    fn log_ratio_branches() {
        assert!((log_ratio(1.0, 1.2).unwrap() - 1.2f64.ln()).abs() < 1e-16);
        assert!((log_ratio(2.0, 8.0).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert!((log_ratio(-2.0, -8.0).unwrap() - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exp_q1_exact_on_scaled_exponential() {
        let f = |x: f64| 3.0 * (2.0 * x).exp();
        let iv = Interval::new(-0.5, 1.2).unwrap();
        let est = crate::rule::apply_panel(&exp_q1(), f, &iv).unwrap();
        let exact = 1.5 * ((1.4f64).exp() - (-1.0f64).exp());
        assert!(rel(est.value, exact) < 1e-14);
    }

    #[test]
    fn exp_q1_is_quasilinear() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let q = exp_q1();
        let base = q.mean(&[2.0, 0.7], &iv).unwrap();
        let scaled = q.mean(&[14.0, 4.9], &iv).unwrap();
        assert!(rel(scaled, 7.0 * base) < 1e-15);
    }

    #[test]
    fn exp_q2_on_constants() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(exp_q2().mean(&[4.5, 4.5, 4.5], &iv).unwrap(), 4.5);
    }

    #[test]
    fn moment_order_zero_is_exp_q1() {
        let rule = MomentRule::new(0).unwrap();
        let iv = Interval::new(0.7, 0.4).unwrap();
        for (f0, f1) in [(1.0, 0.6), (3.0, 3.0000001), (0.2, 5.0), (-2.0, -1.0)] {
            let m = moment_panel(&rule, f0, f1, &iv).unwrap();
            let q = 0.4 * log_mean(f0, f1).unwrap();
            assert!(rel(m, q) < 1e-14, "{f0},{f1}: {m} vs {q}");
        }
    }

    #[test]
    fn first_moment_of_decaying_exponential() {
        let rule = MomentRule::new(1).unwrap();
        let iv = Interval::new(0.0, 1.0).unwrap();
        let m = moment_panel(&rule, 1.0, E_INV, &iv).unwrap();
        let exact = 1.0 - 2.0 * E_INV;
        assert!(rel(m, exact) < 1e-14, "{m} vs {exact}");
    }

    #[test]
    fn moment_branches_agree_at_switch() {
        // exact moment of e^{L t}-type data on both sides of the series limit
        for n in [0u32, 1, 3] {
            let rule = MomentRule::new(n).unwrap();
            for l in [-MOMENT_SERIES_LIMIT * 0.999, -MOMENT_SERIES_LIMIT * 1.001] {
                let iv = Interval::new(1.5, 1.0).unwrap();
                let f0 = 2.0;
                let f1 = f0 * l.exp();
                let m = moment_panel(&rule, f0, f1, &iv).unwrap();
                let alpha = l;
                // closed-form antiderivative of x^n f0 e^{alpha (x - a)}
                let anti = |x: f64| -> f64 {
                    (0..=n)
                        .map(|k| {
                            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                            s * falling_factorial(n, k) as f64 * x.powi((n - k) as i32)
                                * f0
                                * (alpha * (x - 1.5)).exp()
                                / alpha.powi(k as i32 + 1)
                        })
                        .sum()
                };
                let exact = anti(2.5) - anti(1.5);
                assert!(rel(m, exact) < 1e-12, "n={n} L={l}: {m} vs {exact}");
            }
        }
    }

    #[test]
    fn moment_of_constant_data_is_exact() {
        // L = 0: the moment of a constant, int_1^2 x^2 dx = 7/3
        let rule = MomentRule::new(2).unwrap();
        let iv = Interval::new(1.0, 1.0).unwrap();
        let m = moment_panel(&rule, 1.0, 1.0, &iv).unwrap();
        assert!(rel(m, 7.0 / 3.0) < 1e-15);
    }

    #[test]
    fn moment_fallback_fires_on_degenerate_ratio() {
        let trap = PanelRule::linear("trapezoid", NodeSet::equispaced(2).unwrap(), vec![0.5, 0.5], 3)
            .unwrap();
        let rule = MomentRule::with_fallback(2, trap).unwrap();
        let iv = Interval::new(1.0, 1.0).unwrap();
        // trapezoid on g(x) = x^2: (1 + 4) / 2
        assert_eq!(moment_panel(&rule, 1.0, 1.0, &iv).unwrap(), 2.5);
        let simpson =
            PanelRule::linear("simpson", NodeSet::equispaced(3).unwrap(), vec![1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0], 5)
                .unwrap();
        assert!(MomentRule::with_fallback(1, simpson).is_err());
    }

    #[test]
    fn moment_errors() {
        assert!(matches!(MomentRule::new(21), Err(QuadError::OrderTooLarge(21))));
        let rule = MomentRule::new(2).unwrap();
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert!(matches!(moment_panel(&rule, 1.0, -1.0, &iv), Err(QuadError::Domain(_))));
        assert!(matches!(moment_panel(&rule, 0.0, 1.0, &iv), Err(QuadError::Domain(_))));
    }

    #[test]
    fn factorial_products() {
        assert_eq!(falling_factorial(5, 0), 1);
        assert_eq!(falling_factorial(5, 2), 20);
        assert_eq!(falling_factorial(20, 20), 2_432_902_008_176_640_000);
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(4, 0), 1);
    }

    #[test]
    fn exp_power_integral_small_cases() {
        // int_0^1 e^{Lt} dt = expm1(L)/L; int_0^1 t dt = 1/2
        for l in [-25.0, -3.0, -1e-9, 0.0, 1e-9, 2.0, 25.0] {
            let want = if l == 0.0 { 1.0 } else { f64::exp_m1(l) / l };
            assert!(rel(exp_power_integral(0, l), want) < 1e-14, "L={l}");
        }
        assert!(rel(exp_power_integral(1, 0.0), 0.5) < 1e-15);
        // int_0^1 t e^{-t} dt = 1 - 2/e
        assert!(rel(exp_power_integral(1, -1.0), 1.0 - 2.0 * E_INV) < 1e-14);
    }

    #[test]
    fn improper_tail_examples() {
        for h in [0.01f64, 0.5, 2.0] {
            let v = improper_tail(1.0, (-h).exp(), h).unwrap();
            assert!(rel(v, 1.0) < 1e-14);
        }
        let f = |x: f64| 5.0 * (-2.0 * x).exp();
        let v = improper_tail(f(1.0), f(1.5), 0.5).unwrap();
        assert!(rel(v, 2.5 * (-2.0f64).exp()) < 1e-14);
        assert!(matches!(improper_tail(1.0, 1.0, 0.5), Err(QuadError::Domain(_))));
        assert!(improper_tail(1.0, 2.0, 0.5).is_err());
        assert!(improper_tail(1.0, -0.5, 0.5).is_err());
    }

    #[test]
    fn gauss_like_basics() {
        for sign in [CorrectionSign::Plus, CorrectionSign::Minus] {
            assert_eq!(gauss_like(2.5, 2.5, sign).unwrap(), 2.5);
            let a = gauss_like(1.3, 0.4, sign).unwrap();
            let b = gauss_like(0.4, 1.3, sign).unwrap();
            assert!(rel(a, b) < 1e-15);
        }
        let xi = gauss_like_nodes().as_slice()[0];
        assert!((xi - (3.0 - 3f64.sqrt()) / 6.0).abs() < 1e-16);
        assert!(gauss_like_nodes().is_symmetric());
    }

    #[test]
    fn gauss_like_desk_check() {
        // f = e^{-x} on [0, 1], samples at xi and 1 - xi
        let xi = (3.0 - 3f64.sqrt()) / 6.0;
        let (f0, f1) = ((-xi).exp(), (xi - 1.0).exp());
        let lm = log_mean(f0, f1).unwrap();
        let direct = (f0 - f1) / (1.0 / 3f64.sqrt());
        assert!(rel(lm, direct) < 1e-14);
        let correction = (f0 - f1) * (1.0 / 3f64.sqrt()) / 12.0;
        let plus = gauss_like(f0, f1, CorrectionSign::Plus).unwrap();
        let minus = gauss_like(f0, f1, CorrectionSign::Minus).unwrap();
        assert!(rel(plus, lm + correction) < 1e-15);
        assert!(rel(minus, lm - correction) < 1e-15);
        let exact = 1.0 - E_INV;
        assert!((plus - exact).abs() < 1e-4);
        assert!((minus - exact).abs() > 3e-2);
    }
}
