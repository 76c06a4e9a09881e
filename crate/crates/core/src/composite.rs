//! Multistep integration of callables and of equispaced sample series.

use std::str::FromStr;

use crate::analysis::pairwise_sum;
use crate::error::{QuadError, Result};
use crate::exprules::{exp_q1, improper_tail, log_mean, log_ratio, moment_panel, falling_factorial, MomentRule};
use crate::rule::{apply_panel_with_fallback, Interval, PanelRule};

/// Samples `f_k = f(a + k h)`, `k = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSeries {
    pub a: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl SampledSeries {
    pub fn new(a: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        Interval::new(a, h)?;
        if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(QuadError::Sample {
                node: k,
                x: a + k as f64 * h,
                value: *v,
            });
        }
        Ok(Self { a, h, values })
    }

    /// Samples `f` at `a + k h` for `k = 0..=panels`.
    pub fn from_fn(f: impl Fn(f64) -> f64, a: f64, h: f64, panels: usize) -> Result<Self> {
        Self::new(a, h, (0..=panels).map(|k| f(a + k as f64 * h)).collect())
    }

    pub fn x(&self, k: usize) -> f64 {
        self.a + k as f64 * self.h
    }

    /// Number of panels `M`.
    pub fn panels(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    fn panel(&self, k: usize) -> Result<Interval> {
        Interval::new(self.x(k), self.h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeResult {
    pub value: f64,
    pub panels: usize,
    /// Panels where a fallback rule replaced the primary rule.
    pub fallback_panels: Vec<usize>,
    /// Contribution beyond the last sample, when requested.
    pub tail: Option<f64>,
    /// Panels integrated by a nonlinear rule.
    pub nonlinear_panels: Vec<usize>,
}

fn finish(parts: Vec<f64>, tail: Option<f64>) -> Result<f64> {
    let mut value = pairwise_sum(&parts);
    if let Some(t) = tail {
        value += t;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QuadError::NonFinite(format!("composite sum is {value}")))
    }
}

/// Sums `rule` over `panels` uniform panels of `[a, b]`.
///
/// A domain error in a panel is answered by `fallback` when given; the panel
/// index is then recorded. Otherwise the error propagates with its panel index.
pub fn integrate<F>(
    integrand: F,
    a: f64,
    b: f64,
    panels: usize,
    rule: &PanelRule,
    fallback: Option<&PanelRule>,
) -> Result<CompositeResult>
where
    F: Fn(f64) -> f64,
{
    if panels == 0 {
        return Err(QuadError::Config("at least one panel is required".into()));
    }
    Interval::between(a, b)?;
    let h = (b - a) / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    let mut fallback_panels = Vec::new();
    for k in 0..panels {
        let iv = Interval::new(a + k as f64 * h, h).map_err(|e| e.at_panel(k))?;
        let est = apply_panel_with_fallback(rule, fallback, &integrand, &iv).map_err(|e| e.at_panel(k))?;
        if est.fallback_used {
            fallback_panels.push(k);
        }
        parts.push(est.value);
    }
    let nonlinear_panels = if rule.weights().is_some() {
        Vec::new()
    } else {
        (0..panels).filter(|k| !fallback_panels.contains(k)).collect()
    };
    Ok(CompositeResult {
        value: finish(parts, None)?,
        panels,
        fallback_panels,
        tail: None,
        nonlinear_panels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStrategy {
    /// exp-q1 in the convex decaying region, Simpson elsewhere.
    Auto,
    /// exp-q1 on every panel, trapezoid where it fails.
    Nonlinear,
    /// Composite Simpson, trapezoid on a leftover panel.
    Simpson,
}

impl FromStr for SeriesStrategy {
    type Err = QuadError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SeriesStrategy::Auto),
            "nonlinear" => Ok(SeriesStrategy::Nonlinear),
            "simpson" => Ok(SeriesStrategy::Simpson),
            other => Err(QuadError::Config(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Per-sample regime: `f_k > 0`, `f_k < f_{k-1}` and `2 f_k < f_{k-1} + f_{k+1}`.
///
/// The end samples copy the classification of their interior neighbour.
pub fn convex_decaying(values: &[f64]) -> Vec<bool> {
    let m = values.len();
    if m < 3 {
        return vec![false; m];
    }
    let mut class = vec![false; m];
    for k in 1..m - 1 {
        let (prev, cur, next) = (values[k - 1], values[k], values[k + 1]);
        class[k] = cur > 0.0 && cur < prev && 2.0 * cur < prev + next;
    }
    class[0] = class[1] && values[0] > 0.0;
    class[m - 1] = class[m - 2] && values[m - 1] > 0.0;
    class
}

fn trapezoid_panel(f0: f64, f1: f64, h: f64) -> f64 {
    0.5 * h * (f0 + f1)
}

fn simpson_pair(f0: f64, f1: f64, f2: f64, h: f64) -> f64 {
    h / 3.0 * (f0 + 4.0 * f1 + f2)
}

/// Simpson over panels `start..end`, trapezoid on a leftover final panel.
fn linear_run(series: &SampledSeries, start: usize, end: usize, parts: &mut Vec<f64>, fallback: &mut Vec<usize>) {
    let f = &series.values;
    let h = series.h;
    let mut k = start;
    while k + 2 <= end {
        parts.push(simpson_pair(f[k], f[k + 1], f[k + 2], h));
        k += 2;
    }
    if k < end {
        parts.push(trapezoid_panel(f[k], f[k + 1], h));
        fallback.push(k);
    }
}

/// Integrates an equispaced series over `[a, a + M h]`.
pub fn integrate_series(series: &SampledSeries, strategy: SeriesStrategy) -> Result<CompositeResult> {
    let f = &series.values;
    let panels = series.panels();
    let need = match strategy {
        SeriesStrategy::Nonlinear => 2,
        SeriesStrategy::Auto | SeriesStrategy::Simpson => 3,
    };
    if f.len() < need {
        return Err(QuadError::Length { got: f.len(), need });
    }
    let h = series.h;
    let mut parts = Vec::with_capacity(panels);
    let mut fallback_panels = Vec::new();
    let mut nonlinear_panels = Vec::new();

    match strategy {
        SeriesStrategy::Simpson => linear_run(series, 0, panels, &mut parts, &mut fallback_panels),
        SeriesStrategy::Nonlinear => {
            for k in 0..panels {
                match log_mean(f[k], f[k + 1]) {
                    Ok(q) => {
                        parts.push(h * q);
                        nonlinear_panels.push(k);
                    }
                    Err(e) if e.is_domain() => {
                        parts.push(trapezoid_panel(f[k], f[k + 1], h));
                        fallback_panels.push(k);
                    }
                    Err(e) => return Err(e.at_panel(k)),
                }
            }
        }
        SeriesStrategy::Auto => {
            let class = convex_decaying(f);
            let nonlinear = |k: usize| class[k] && class[k + 1];
            let mut k = 0;
            while k < panels {
                if nonlinear(k) {
                    let q = log_mean(f[k], f[k + 1]).map_err(|e| e.at_panel(k))?;
                    parts.push(h * q);
                    nonlinear_panels.push(k);
                    k += 1;
                } else {
                    let end = (k..panels).find(|&j| nonlinear(j)).unwrap_or(panels);
                    linear_run(series, k, end, &mut parts, &mut fallback_panels);
                    k = end;
                }
            }
        }
    }

    Ok(CompositeResult {
        value: finish(parts, None)?,
        panels,
        fallback_panels,
        tail: None,
        nonlinear_panels,
    })
}

/// Moment `int x^n f(x) dx` of a series, panel by panel with the moment rule.
///
/// With `with_tail`, the integral from the last sample to infinity is added for
/// the exponential through the last two samples, with decay rate
/// `log(f_{M-1} / f_M) / h`.
pub fn moment_series(series: &SampledSeries, n: u32, with_tail: bool) -> Result<CompositeResult> {
    let rule = MomentRule::new(n)?;
    let f = &series.values;
    let panels = series.panels();
    if panels == 0 {
        return Err(QuadError::Length { got: f.len(), need: 2 });
    }
    let mut parts = Vec::with_capacity(panels);
    for k in 0..panels {
        let iv = series.panel(k).map_err(|e| e.at_panel(k))?;
        parts.push(moment_panel(&rule, f[k], f[k + 1], &iv).map_err(|e| e.at_panel(k))?);
    }

    let tail = if with_tail {
        let (prev, last) = (f[panels - 1], f[panels]);
        if !(prev > last && last > 0.0) {
            return Err(QuadError::Tail(format!(
                "tail needs f_(M-1) > f_M > 0, got {prev} and {last}"
            )));
        }
        let t = if n == 0 {
            improper_tail(prev, last, series.h)? * last / prev
        } else {
            let beta = -log_ratio(prev, last)? / series.h;
            let xm = series.x(panels);
            (0..=n)
                .map(|k| {
                    falling_factorial(n, k) as f64 * xm.powi((n - k) as i32) * last
                        / beta.powi(k as i32 + 1)
                })
                .sum()
        };
        Some(t)
    } else {
        None
    };

    Ok(CompositeResult {
        value: finish(parts, tail)?,
        panels,
        fallback_panels: Vec::new(),
        tail,
        nonlinear_panels: (0..panels).collect(),
    })
}

/// Estimates from a nonlinear rule and a linear baseline, with errors against `exact`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRecord {
    pub h: f64,
    pub est_nl: f64,
    pub est_lin: f64,
    pub exact: f64,
    /// `|est_nl - exact| / |exact|`, or the absolute error when `exact == 0`.
    pub e_nl: f64,
    pub e_lin: f64,
    /// `e_nl / e_lin`; infinite when `e_lin == 0`.
    pub ratio: f64,
}

impl ErrorRecord {
    pub fn new(h: f64, est_nl: f64, est_lin: f64, exact: f64) -> Self {
        let scale = if exact == 0.0 { 1.0 } else { exact.abs() };
        let e_nl = (est_nl - exact).abs() / scale;
        let e_lin = (est_lin - exact).abs() / scale;
        let ratio = if e_lin > 0.0 { e_nl / e_lin } else { f64::INFINITY };
        Self {
            h,
            est_nl,
            est_lin,
            exact,
            e_nl,
            e_lin,
            ratio,
        }
    }
}

/// Single-panel record on `[a, a + h]`; `exact` is supplied by the caller.
pub fn single_step<F>(
    integrand: F,
    a: f64,
    h: f64,
    rule: &PanelRule,
    baseline: &PanelRule,
    exact: f64,
) -> Result<ErrorRecord>
where
    F: Fn(f64) -> f64,
{
    let iv = Interval::new(a, h)?;
    let nl = crate::rule::apply_panel(rule, &integrand, &iv)?;
    let lin = crate::rule::apply_panel(baseline, &integrand, &iv)?;
    Ok(ErrorRecord::new(h, nl.value, lin.value, exact))
}

/// One row of a convergence table; a failed row keeps its error.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub panels: usize,
    pub record: Result<ErrorRecord>,
}

/// Composite estimates of `rule` and `baseline` for each panel count.
pub fn convergence_table<F>(
    integrand: F,
    a: f64,
    b: f64,
    rule: &PanelRule,
    baseline: &PanelRule,
    panel_counts: &[usize],
    exact: f64,
) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(f64) -> f64,
{
    if panel_counts.is_empty() {
        return Err(QuadError::Config("panel list is empty".into()));
    }
    if panel_counts[0] == 0 || panel_counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QuadError::Config(format!(
            "panel counts must be positive and increasing, got {panel_counts:?}"
        )));
    }
    Interval::between(a, b)?;
    Ok(panel_counts
        .iter()
        .map(|&n| {
            let record = integrate(&integrand, a, b, n, rule, None).and_then(|nl| {
                let lin = integrate(&integrand, a, b, n, baseline, None)?;
                Ok(ErrorRecord::new((b - a) / n as f64, nl.value, lin.value, exact))
            });
            ConvergenceRow { panels: n, record }
        })
        .collect())
}

/// exp-q1 with a trapezoid fallback, the default pairing for composite use.
pub fn exp_q1_with_trapezoid() -> (PanelRule, PanelRule) {
    (exp_q1(), crate::newtoncotes::classic(crate::newtoncotes::ClassicRule::Trapezoid))
}
