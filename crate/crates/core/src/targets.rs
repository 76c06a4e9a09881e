//! Target functions `f*` for the generic rule constructor.
//!
//! A target bundles `f*` with its inverse, an antiderivative and the first two
//! derivatives. All of them are supplied by the caller; nothing is inverted or
//! differentiated numerically. `f*` and its inverse are assumed twice
//! continuously differentiable on the probed domain.

use std::fmt;
use std::sync::Arc;

use crate::error::{QuadError, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type RangeFn = Arc<dyn Fn(f64) -> bool + Send + Sync>;
pub type DividedDifferenceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

pub const INVERSE_TOLERANCE: f64 = 1e-10;
pub const ANTIDERIVATIVE_TOLERANCE: f64 = 1e-6;
pub const DERIVATIVE_TOLERANCE: f64 = 1e-5;
pub const DIVIDED_DIFFERENCE_TOLERANCE: f64 = 1e-8;

/// A bijection `f*: R -> R` together with everything the generic construction needs.
#[derive(Clone)]
pub struct TargetFunction {
    pub name: String,
    pub value: RealFn,
    pub inverse: RealFn,
    pub antiderivative: RealFn,
    pub deriv1: RealFn,
    pub deriv2: RealFn,
    /// Membership in the range of `f*`.
    pub range_check: RangeFn,
    /// Optional cancellation-free form of `(F*(x1) - F*(x0)) / (x1 - x0)`.
    ///
    /// When present the generic two-point rule evaluates its quotient through
    /// this function instead of differencing the antiderivative.
    pub divided_difference: Option<DividedDifferenceFn>,
}

impl TargetFunction {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
        antiderivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        range_check: impl Fn(f64) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Arc::new(value),
            inverse: Arc::new(inverse),
            antiderivative: Arc::new(antiderivative),
            deriv1: Arc::new(deriv1),
            deriv2: Arc::new(deriv2),
            range_check: Arc::new(range_check),
            divided_difference: None,
        }
    }

    pub fn with_divided_difference(
        mut self,
        dd: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.divided_difference = Some(Arc::new(dd));
        self
    }

    pub fn in_range(&self, y: f64) -> bool {
        y.is_finite() && (self.range_check)(y)
    }

    /// Mean of `f*` over `[x0, x1]`, `x0 != x1`.
    pub fn mean_between(&self, x0: f64, x1: f64) -> f64 {
        match &self.divided_difference {
            Some(dd) => dd(x0, x1),
            None => ((self.antiderivative)(x1) - (self.antiderivative)(x0)) / (x1 - x0),
        }
    }
}

impl fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetFunction")
            .field("name", &self.name)
            .field("divided_difference", &self.divided_difference.is_some())
            .finish_non_exhaustive()
    }
}

/// The built-in targets: `EXP` (`e^x`, range `(0, inf)`) and `IDENTITY` (`x`).
pub fn builtin(name: &str) -> Result<TargetFunction> {
    match name.to_ascii_uppercase().as_str() {
        "EXP" => Ok(TargetFunction::new(
            "exp",
            f64::exp,
            f64::ln,
            f64::exp,
            f64::exp,
            f64::exp,
            |y| y > 0.0,
        )
        .with_divided_difference(|x0, x1| {
            let d = x1 - x0;
            x0.exp() * d.exp_m1() / d
        })),
        "IDENTITY" => Ok(TargetFunction::new(
            "identity",
            |x| x,
            |y| y,
            |x| 0.5 * x * x,
            |_| 1.0,
            |_| 0.0,
            |_| true,
        )
        .with_divided_difference(|x0, x1| 0.5 * (x0 + x1))),
        _ => Err(QuadError::Config(format!(
            "unknown target `{name}` (expected EXP or IDENTITY)"
        ))),
    }
}

/// A family of functions generated from a target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactnessFamily {
    /// `lambda f*(x)` with `lambda` inside a bracket `(lo, hi)` containing 1.
    Scaling { lambda: f64, bracket: (f64, f64) },
    /// `f*(alpha x + beta)`.
    Affine { alpha: f64, beta: f64 },
}

impl ExactnessFamily {
    pub fn scaling(lambda: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < 1.0 && 1.0 < hi) {
            return Err(QuadError::Config(format!(
                "scaling bracket ({lo}, {hi}) must contain 1"
            )));
        }
        if !(lo < lambda && lambda < hi) {
            return Err(QuadError::Config(format!(
                "lambda = {lambda} outside the bracket ({lo}, {hi})"
            )));
        }
        Ok(Self::Scaling {
            lambda,
            bracket: (lo, hi),
        })
    }

    pub fn affine(alpha: f64, beta: f64) -> Self {
        Self::Affine { alpha, beta }
    }

    /// The family member generated from `target`.
    pub fn member(&self, target: &TargetFunction) -> impl Fn(f64) -> f64 + Send + Sync {
        let value = target.value.clone();
        let family = *self;
        move |x| match family {
            ExactnessFamily::Scaling { lambda, .. } => lambda * value(x),
            ExactnessFamily::Affine { alpha, beta } => value(alpha * x + beta),
        }
    }

    /// Integral of the family member over `[a, b]` via the target's antiderivative.
    pub fn integral(&self, target: &TargetFunction, a: f64, b: f64) -> f64 {
        let big_f = &target.antiderivative;
        match *self {
            ExactnessFamily::Scaling { lambda, .. } => lambda * (big_f(b) - big_f(a)),
            ExactnessFamily::Affine { alpha, beta } if alpha == 0.0 => {
                (target.value)(beta) * (b - a)
            }
            ExactnessFamily::Affine { alpha, beta } => {
                (big_f(alpha * b + beta) - big_f(alpha * a + beta)) / alpha
            }
        }
    }
}

/// Largest residual seen for one identity, and where.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub max: f64,
    pub at: f64,
    pub tolerance: f64,
}

impl Residual {
    fn new(tolerance: f64) -> Self {
        Self {
            max: 0.0,
            at: f64::NAN,
            tolerance,
        }
    }

    fn record(&mut self, probe: f64, residual: f64) {
        // a NaN residual sticks and fails the check
        if self.max.is_nan() {
            return;
        }
        if residual.is_nan() || residual > self.max {
            self.max = residual;
            self.at = probe;
        }
    }

    pub fn passed(&self) -> bool {
        self.max <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub target: String,
    pub inverse: Residual,
    pub antiderivative: Residual,
    pub deriv1: Residual,
    pub deriv2: Residual,
    /// Only checked when the target supplies a divided difference.
    pub divided_difference: Option<Residual>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.inverse.passed()
            && self.antiderivative.passed()
            && self.deriv1.passed()
            && self.deriv2.passed()
            && self.divided_difference.map_or(true, |r| r.passed())
    }
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Checks the target's callables against each other on `probes`.
///
/// Residuals are relative with a unit floor. Failures are reported, never raised.
pub fn validate_target(target: &TargetFunction, probes: &[f64]) -> ValidationReport {
    let f = &target.value;
    let mut inverse = Residual::new(INVERSE_TOLERANCE);
    let mut antiderivative = Residual::new(ANTIDERIVATIVE_TOLERANCE);
    let mut deriv1 = Residual::new(DERIVATIVE_TOLERANCE);
    let mut deriv2 = Residual::new(DERIVATIVE_TOLERANCE);
    let mut divided = target
        .divided_difference
        .as_ref()
        .map(|_| Residual::new(DIVIDED_DIFFERENCE_TOLERANCE));

    for &x in probes {
        let scale = x.abs().max(1.0);
        inverse.record(x, rel((target.inverse)(f(x)), x));

        let delta = 1e-5 * scale;
        let big_f = &target.antiderivative;
        let fd = (big_f(x + delta) - big_f(x - delta)) / (2.0 * delta);
        antiderivative.record(x, rel(fd, f(x)));

        let delta = 1e-4 * scale;
        let (fm, f0, fp) = (f(x - delta), f(x), f(x + delta));
        deriv1.record(x, rel((target.deriv1)(x), (fp - fm) / (2.0 * delta)));
        deriv2.record(
            x,
            rel((target.deriv2)(x), (fp - 2.0 * f0 + fm) / (delta * delta)),
        );

        if let (Some(dd), Some(res)) = (&target.divided_difference, divided.as_mut()) {
            let x1 = x + 0.5 * scale;
            let reference = (big_f(x1) - big_f(x)) / (x1 - x);
            res.record(x, rel(dd(x, x1), reference));
        }
    }

    ValidationReport {
        target: target.name.clone(),
        inverse,
        antiderivative,
        deriv1,
        deriv2,
        divided_difference: divided,
    }
}
