//! Nonlinear quadrature rules that are exact on families of target functions.
//!
//! A rule estimates `int_a^{a+h} f dx` as `h q(f_0, ..., f_{n-1})` from samples
//! at normalized nodes. Choosing `q` so that the rule is exact on `lambda e^{alpha x}`
//! gives the logarithmic-mean rule [`exprules::exp_q1`] and its refinements; the
//! same construction for `f*(x) = x` recovers the trapezoid and Newton-Cotes rules.
//!
//! ```
//! use nlquad::{apply_panel, exp_q1, Interval};
//!
//! let iv = Interval::new(0.0, 1.0).unwrap();
//! let est = apply_panel(&exp_q1(), |x: f64| 3.0 * (-2.0 * x).exp(), &iv).unwrap();
//! let exact = 1.5 * (1.0 - (-2.0f64).exp());
//! assert!((est.value - exact).abs() < 1e-15);
//! ```

pub mod analysis;
pub mod composite;
pub mod construct;
pub mod error;
pub mod exprules;
pub mod newtoncotes;
pub mod rule;
pub mod targets;

pub use composite::{
    convergence_table, integrate, integrate_series, moment_series, single_step, CompositeResult,
    ConvergenceRow, ErrorRecord, SampledSeries, SeriesStrategy,
};
pub use construct::{build_q1, build_q2, curvature_trapezoid, diagonal_derivative_report, DerivativeReport};
pub use error::{QuadError, Result};
pub use exprules::{
    exp_q1, exp_q2, gauss_like_rule, improper_tail, log_mean, moment_panel, CorrectionSign, MomentRule,
    GAUSS_LIKE_DEFAULT_SIGN,
};
pub use newtoncotes::{classic, solve_alpha, AlphaSolution, ClassicRule};
pub use rule::{apply_panel, apply_panel_with_fallback, sample, ExactnessTag, Interval, NodeSet, PanelRule, RuleEstimate};
pub use targets::{builtin, TargetFunction};
