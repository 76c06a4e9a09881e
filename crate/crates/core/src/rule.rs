//! Panel rules and their application to integrands.
//!
//! A [`PanelRule`] estimates the integral of `f` over a panel `[a, a + h]` as
//! `h * q(f(a + xi_0 h), ..., f(a + xi_{n-1} h))`, where `q` is a (generally
//! nonlinear) estimator of the mean of `f` over the panel. Linear rules such as
//! the trapezoid and Simpson rules are the special case where `q` is a weighted
//! sum of the samples.

use std::fmt;
use std::sync::Arc;

use crate::error::{QuadError, Result};

/// Mean-estimator signature: samples at the rule's nodes plus the panel they were taken on.
pub type MeanFn = Arc<dyn Fn(&[f64], &Interval) -> Result<f64> + Send + Sync>;

/// An integration panel `[a, a + h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    h: f64,
}

impl Interval {
    pub fn new(a: f64, h: f64) -> Result<Self> {
        if !a.is_finite() || !h.is_finite() || h <= 0.0 {
            return Err(QuadError::Config(format!(
                "interval needs finite a and h > 0, got a = {a}, h = {h}"
            )));
        }
        Ok(Self { a, h })
    }

    /// Panel spanning `[a, b]`.
    pub fn between(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b - a)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn b(&self) -> f64 {
        self.a + self.h
    }

    /// Absolute coordinate of the normalized node `xi`.
    pub fn point(&self, xi: f64) -> f64 {
        self.a + xi * self.h
    }

    /// Sub-panel between the normalized nodes `lo` and `hi`.
    pub fn sub(&self, lo: f64, hi: f64) -> Result<Self> {
        Self::new(self.point(lo), (hi - lo) * self.h)
    }
}

/// Normalized abscissae `0 <= xi_0 < ... < xi_{n-1} <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet(Vec<f64>);

impl NodeSet {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.len() < 2 {
            return Err(QuadError::Config(format!(
                "a node set needs at least 2 nodes, got {}",
                xi.len()
            )));
        }
        if xi.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(QuadError::Config(format!("nodes must lie in [0, 1]: {xi:?}")));
        }
        if xi.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QuadError::Config(format!(
                "nodes must be strictly increasing: {xi:?}"
            )));
        }
        Ok(Self(xi))
    }

    /// `n` equispaced nodes `k / (n - 1)`.
    pub fn equispaced(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(QuadError::Config(format!(
                "equispaced node set needs n >= 2, got {n}"
            )));
        }
        let last = (n - 1) as f64;
        Self::new((0..n).map(|k| k as f64 / last).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `xi_{n-1-k} == 1 - xi_k` for every `k`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.0.len();
        (0..n).all(|k| (self.0[n - 1 - k] - (1.0 - self.0[k])).abs() <= 4.0 * f64::EPSILON)
    }
}

/// A family of functions a rule integrates exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactnessTag {
    /// Exact on `f*(alpha x + beta)` for the named target.
    Affine(String),
    /// Exact on `lambda f*(x)` for the named target.
    Scaling(String),
    /// Exact on all polynomials up to the given degree.
    Polynomials(u32),
    /// `q(lambda f) = lambda q(f)`.
    Quasilinear,
}

impl fmt::Display for ExactnessTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactnessTag::Affine(t) => write!(f, "affine-{t}"),
            ExactnessTag::Scaling(t) => write!(f, "scaling-{t}"),
            ExactnessTag::Polynomials(d) => write!(f, "polynomials<={d}"),
            ExactnessTag::Quasilinear => f.write_str("quasilinear"),
        }
    }
}

/// A quadrature rule on normalized nodes with a mean-estimator `q`.
#[derive(Clone)]
pub struct PanelRule {
    name: String,
    nodes: NodeSet,
    q: MeanFn,
    order_p: u32,
    symmetric: bool,
    tags: Vec<ExactnessTag>,
    position_dependent: bool,
    weights: Option<Vec<f64>>,
}

impl PanelRule {
    /// A rule with an arbitrary mean-estimator. Metadata defaults to
    /// non-symmetric, shift-invariant and untagged.
    pub fn new<Q>(name: impl Into<String>, nodes: NodeSet, order_p: u32, q: Q) -> Self
    where
        Q: Fn(&[f64], &Interval) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            nodes,
            q: Arc::new(q),
            order_p,
            symmetric: false,
            tags: Vec::new(),
            position_dependent: false,
            weights: None,
        }
    }

    /// A linear rule `q = sum_k w_k f_k`. Symmetry is inferred from nodes and weights.
    pub fn linear(
        name: impl Into<String>,
        nodes: NodeSet,
        weights: Vec<f64>,
        order_p: u32,
    ) -> Result<Self> {
        if weights.len() != nodes.len() {
            return Err(QuadError::Config(format!(
                "{} weights for {} nodes",
                weights.len(),
                nodes.len()
            )));
        }
        let n = weights.len();
        let symmetric =
            nodes.is_symmetric() && (0..n).all(|k| weights[k] == weights[n - 1 - k]);
        let w = weights.clone();
        let mut rule = Self::new(name, nodes, order_p, move |f: &[f64], _: &Interval| {
            Ok(w.iter().zip(f).map(|(w, f)| w * f).sum())
        })
        .symmetric(symmetric)
        .tag(ExactnessTag::Quasilinear);
        rule.weights = Some(weights);
        Ok(rule)
    }

    pub fn symmetric(mut self, symmetric: bool) -> Self {
        self.symmetric = symmetric;
        self
    }

    pub fn tag(mut self, tag: ExactnessTag) -> Self {
        if !self.tags.contains(&tag) {
            self.tags.push(tag);
        }
        self
    }

    pub fn position_dependent(mut self, yes: bool) -> Self {
        self.position_dependent = yes;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    /// Single-step error exponent `p` in `|I_hat - I| = O(h^p)`.
    pub fn order(&self) -> u32 {
        self.order_p
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn tags(&self) -> &[ExactnessTag] {
        &self.tags
    }

    pub fn has_tag(&self, tag: &ExactnessTag) -> bool {
        self.tags.contains(tag)
    }

    /// Whether the rule is affinely exact on some target.
    pub fn is_affinely_exact(&self) -> bool {
        self.tags.iter().any(|t| matches!(t, ExactnessTag::Affine(_)))
    }

    pub fn is_position_dependent(&self) -> bool {
        self.position_dependent
    }

    /// Node weights, for linear rules only.
    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Evaluates the mean-estimator `q` on a sample vector.
    pub fn mean(&self, samples: &[f64], interval: &Interval) -> Result<f64> {
        if samples.len() != self.nodes.len() {
            return Err(QuadError::Config(format!(
                "rule `{}` takes {} samples, got {}",
                self.name,
                self.nodes.len(),
                samples.len()
            )));
        }
        let q = (self.q)(samples, interval)?;
        if !q.is_finite() {
            return Err(QuadError::NonFinite(format!(
                "rule `{}` returned {q} for samples {samples:?}",
                self.name
            )));
        }
        Ok(q)
    }

    /// `h * q(samples)` wrapped as an estimate.
    pub fn estimate(&self, samples: Vec<f64>, interval: &Interval) -> Result<RuleEstimate> {
        let value = interval.h() * self.mean(&samples, interval)?;
        if !value.is_finite() {
            return Err(QuadError::NonFinite(format!(
                "rule `{}` overflowed on panel {interval:?}",
                self.name
            )));
        }
        Ok(RuleEstimate {
            value,
            samples,
            fallback_used: false,
        })
    }
}

impl fmt::Debug for PanelRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PanelRule")
            .field("name", &self.name)
            .field("nodes", &self.nodes)
            .field("order_p", &self.order_p)
            .field("symmetric", &self.symmetric)
            .field("tags", &self.tags)
            .field("position_dependent", &self.position_dependent)
            .finish_non_exhaustive()
    }
}

/// Result of applying a rule to one panel.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleEstimate {
    /// `h * q(samples)`.
    pub value: f64,
    pub samples: Vec<f64>,
    /// Set when the primary rule failed and a fallback produced `value`.
    pub fallback_used: bool,
}

/// Evaluates `integrand` at `a + xi_k h` for every node.
pub fn sample<F>(integrand: F, interval: &Interval, nodes: &NodeSet) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    nodes
        .as_slice()
        .iter()
        .enumerate()
        .map(|(node, &xi)| {
            let x = interval.point(xi);
            let value = integrand(x);
            if value.is_finite() {
                Ok(value)
            } else {
                Err(QuadError::Sample { node, x, value })
            }
        })
        .collect()
}

/// `h * q(sample(integrand, interval, rule.nodes))`.
pub fn apply_panel<F>(rule: &PanelRule, integrand: F, interval: &Interval) -> Result<RuleEstimate>
where
    F: Fn(f64) -> f64,
{
    let samples = sample(integrand, interval, rule.nodes())?;
    rule.estimate(samples, interval)
}

/// Like [`apply_panel`], but answers domain errors of `rule` with `fallback`.
pub fn apply_panel_with_fallback<F>(
    rule: &PanelRule,
    fallback: Option<&PanelRule>,
    integrand: F,
    interval: &Interval,
) -> Result<RuleEstimate>
where
    F: Fn(f64) -> f64,
{
    match apply_panel(rule, &integrand, interval) {
        Err(e) if e.is_domain() => match fallback {
            Some(fb) => {
                let mut est = apply_panel(fb, &integrand, interval)?;
                est.fallback_used = true;
                Ok(est)
            }
            None => Err(e),
        },
        other => other,
    }
}
