//! Affinely exact rules built from a target function.
//!
//! For a bijective target `f*` with antiderivative `F*` the two-point rule
//!
//! ```text
//! q1(f0, f1) = [F*(x1) - F*(x0)] / (x1 - x0),   x_i = f*^{-1}(f_i)
//! ```
//!
//! integrates every `f*(alpha x + beta)` exactly, and the three-point
//! combination `q2 = 2/3 [q1(f0, f1) + q1(f1, f2)] - 1/3 q1(f0, f2)` keeps that
//! exactness while raising the single-step order from 3 to 5. With `f* = x`
//! these are the trapezoid and Simpson rules.

use crate::error::{QuadError, Result};
use crate::rule::{ExactnessTag, Interval, NodeSet, PanelRule};
use crate::targets::TargetFunction;

/// Relative preimage gap below which `q1` uses its quadratic series.
pub const DEGENERATE_THRESHOLD: f64 = 1e-6;

/// `2/3 (q01 + q12) - 1/3 q02`.
pub fn q2_combination(q01: f64, q12: f64, q02: f64) -> f64 {
    2.0 / 3.0 * (q01 + q12) - q02 / 3.0
}

/// `(f0 + f1)/2 - kappa/12 (f1 - f0)^2`.
fn curvature_corrected(f0: f64, f1: f64, kappa: f64) -> f64 {
    let d = f1 - f0;
    0.5 * (f0 + f1) - kappa / 12.0 * d * d
}

/// Symmetric two-point rule, affinely exact on `target`.
///
/// Near the diagonal (`|x1 - x0| <= 1e-6 max(1, |x0|, |x1|)`) the quotient is
/// replaced by the curvature-corrected trapezoid with
/// `kappa = f*''(xm) / f*'(xm)^2` at the preimage midpoint `xm`.
pub fn build_q1(target: &TargetFunction) -> PanelRule {
    let t = target.clone();
    let nodes = NodeSet::new(vec![0.0, 1.0]).expect("static nodes");
    PanelRule::new(
        format!("q1({})", target.name),
        nodes,
        3,
        move |f: &[f64], _: &Interval| {
            // ordered so that q(f0, f1) and q(f1, f0) round identically
            let (f0, f1) = if f[0] <= f[1] { (f[0], f[1]) } else { (f[1], f[0]) };
            for &y in &[f0, f1] {
                if !t.in_range(y) {
                    return Err(QuadError::OutOfRange {
                        target: t.name.clone(),
                        value: y,
                    });
                }
            }
            let (x0, x1) = ((t.inverse)(f0), (t.inverse)(f1));
            if !x0.is_finite() || !x1.is_finite() {
                return Err(QuadError::Domain(format!(
                    "preimages of {f0}, {f1} under `{}` are not finite",
                    t.name
                )));
            }
            let scale = 1f64.max(x0.abs()).max(x1.abs());
            if (x1 - x0).abs() <= DEGENERATE_THRESHOLD * scale {
                let xm = 0.5 * (x0 + x1);
                let d1 = (t.deriv1)(xm);
                if d1 == 0.0 {
                    return Err(QuadError::DerivativeZero { x: xm });
                }
                Ok(curvature_corrected(f0, f1, (t.deriv2)(xm) / (d1 * d1)))
            } else {
                Ok(t.mean_between(x0, x1))
            }
        },
    )
    .symmetric(true)
    .tag(ExactnessTag::Affine(target.name.clone()))
}

/// Three-point rule on `{0, 1/2, 1}` from a symmetric, affinely exact two-point rule.
pub fn build_q2(q1: &PanelRule) -> Result<PanelRule> {
    if q1.nodes().as_slice() != [0.0, 1.0] {
        return Err(QuadError::Config(format!(
            "`{}` must use the nodes {{0, 1}}",
            q1.name()
        )));
    }
    if !q1.is_symmetric() || !q1.is_affinely_exact() {
        return Err(QuadError::Config(format!(
            "`{}` must be symmetric and affinely exact",
            q1.name()
        )));
    }
    let inner = q1.clone();
    let nodes = NodeSet::new(vec![0.0, 0.5, 1.0]).expect("static nodes");
    let mut rule = PanelRule::new(
        format!("q2({})", q1.name()),
        nodes,
        5,
        move |f: &[f64], iv: &Interval| {
            let left = inner.mean(&[f[0], f[1]], &iv.sub(0.0, 0.5)?)?;
            let right = inner.mean(&[f[1], f[2]], &iv.sub(0.5, 1.0)?)?;
            let whole = inner.mean(&[f[0], f[2]], iv)?;
            Ok(q2_combination(left, right, whole))
        },
    )
    .symmetric(true)
    .position_dependent(q1.is_position_dependent());
    for tag in q1.tags() {
        rule = rule.tag(tag.clone());
    }
    Ok(rule)
}

/// Trapezoid rule with a fixed curvature correction `-kappa/12 (f1 - f0)^2`.
pub fn curvature_trapezoid(kappa: f64) -> Result<PanelRule> {
    if !kappa.is_finite() {
        return Err(QuadError::Config(format!("kappa must be finite, got {kappa}")));
    }
    let nodes = NodeSet::new(vec![0.0, 1.0]).expect("static nodes");
    Ok(
        PanelRule::new("curvature-trapezoid", nodes, 3, move |f: &[f64], _: &Interval| {
            Ok(curvature_corrected(f[0], f[1], kappa))
        })
        .symmetric(true),
    )
}

/// Curvature-corrected trapezoid with `kappa = f*''(x) / f*'(x)^2` taken at the
/// preimage `x = f*^{-1}(f0)` of the left sample.
pub fn curvature_trapezoid_for(target: &TargetFunction) -> PanelRule {
    let t = target.clone();
    let nodes = NodeSet::new(vec![0.0, 1.0]).expect("static nodes");
    PanelRule::new(
        format!("curvature-trapezoid({})", target.name),
        nodes,
        3,
        move |f: &[f64], _: &Interval| {
            if !t.in_range(f[0]) {
                return Err(QuadError::OutOfRange {
                    target: t.name.clone(),
                    value: f[0],
                });
            }
            let x = (t.inverse)(f[0]);
            let d1 = (t.deriv1)(x);
            if d1 == 0.0 {
                return Err(QuadError::DerivativeZero { x });
            }
            Ok(curvature_corrected(f[0], f[1], (t.deriv2)(x) / (d1 * d1)))
        },
    )
}

pub const VALUE_TOLERANCE: f64 = 1e-9;
pub const FIRST_ORDER_TOLERANCE: f64 = 1e-5;
pub const SECOND_ORDER_RELATIVE: f64 = 1e-3;
pub const SECOND_ORDER_ABSOLUTE: f64 = 1e-8;
pub const THIRD_ORDER_RELATIVE: f64 = 1e-2;
pub const THIRD_ORDER_ABSOLUTE: f64 = 1e-6;

/// Third-order partials at the diagonal, for symmetric rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdOrder {
    pub step: f64,
    pub q30: f64,
    pub q21: f64,
    pub q12: f64,
    pub q03: f64,
    /// `q30 = -3 q12 = -3 q21 = q03`.
    pub relations_ok: bool,
}

/// Finite-difference partials of a two-point rule at the diagonal point `(c, c)`.
///
/// `qij` is the derivative taken `i` times in the first and `j` times in the
/// second argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeReport {
    pub c: f64,
    /// Stencil step actually used (the requested step rounded to a power of two).
    pub step: f64,
    pub q: f64,
    pub q10: f64,
    pub q01: f64,
    pub q20: f64,
    pub q11: f64,
    pub q02: f64,
    pub value_ok: bool,
    pub first_order_ok: bool,
    pub second_order_ok: bool,
    pub third: Option<ThirdOrder>,
}

impl DerivativeReport {
    pub fn passed(&self) -> bool {
        self.value_ok
            && self.first_order_ok
            && self.second_order_ok
            && self.third.map_or(true, |t| t.relations_ok)
    }
}

/// Nearest power of two; keeps `c +- k step` exact for the stencil.
fn power_of_two_step(step: f64) -> f64 {
    2f64.powi(step.log2().round() as i32)
}

/// Checks the diagonal relations every scalably or affinely exact two-point
/// rule must satisfy: `q = c`, `q10 = q01 = 1/2`, `q20 = -q11 = q02`, and for
/// symmetric rules `q30 = -3 q12 = -3 q21 = q03`.
///
/// First and second partials use a 3x3 central stencil with step `fd_step`.
/// Third partials use a wider stencil with step `max(fd_step, 1e-3 |c|)`.
pub fn diagonal_derivative_report(
    rule: &PanelRule,
    c: f64,
    fd_step: f64,
) -> Result<DerivativeReport> {
    if rule.nodes().len() != 2 {
        return Err(QuadError::Config(format!(
            "`{}` is not a two-point rule",
            rule.name()
        )));
    }
    if !c.is_finite() || !(fd_step > 0.0 && fd_step.is_finite()) {
        return Err(QuadError::Config(format!(
            "need finite c and a positive step, got c = {c}, step = {fd_step}"
        )));
    }
    let iv = Interval::new(0.0, 1.0)?;
    let q = |x: f64, y: f64| -> Result<f64> {
        rule.mean(&[x, y], &iv).map_err(|e| {
            QuadError::Domain(format!(
                "`{}` is not admissible at ({x}, {y}): {e}",
                rule.name()
            ))
        })
    };

    let d = power_of_two_step(fd_step);
    let mut g = [[0.0; 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = q(c + (i as f64 - 1.0) * d, c + (j as f64 - 1.0) * d)?;
        }
    }
    let q00 = g[1][1];
    let q10 = (g[2][1] - g[0][1]) / (2.0 * d);
    let q01 = (g[1][2] - g[1][0]) / (2.0 * d);
    let q20 = (g[2][1] - 2.0 * q00 + g[0][1]) / (d * d);
    let q02 = (g[1][2] - 2.0 * q00 + g[1][0]) / (d * d);
    let q11 = (g[2][2] - g[2][0] - g[0][2] + g[0][0]) / (4.0 * d * d);

    let second_tol = SECOND_ORDER_RELATIVE * q20.abs() + SECOND_ORDER_ABSOLUTE;
    let third = if rule.is_symmetric() {
        Some(third_order(&q, c, fd_step)?)
    } else {
        None
    };

    Ok(DerivativeReport {
        c,
        step: d,
        q: q00,
        q10,
        q01,
        q20,
        q11,
        q02,
        value_ok: (q00 - c).abs() <= VALUE_TOLERANCE * c.abs().max(1.0),
        first_order_ok: (q10 - 0.5).abs() <= FIRST_ORDER_TOLERANCE
            && (q01 - 0.5).abs() <= FIRST_ORDER_TOLERANCE,
        second_order_ok: (q20 - q02).abs() <= second_tol && (q20 + q11).abs() <= second_tol,
        third,
    })
}

fn third_order(
    q: &impl Fn(f64, f64) -> Result<f64>,
    c: f64,
    fd_step: f64,
) -> Result<ThirdOrder> {
    let d = power_of_two_step(fd_step.max(1e-3 * if c == 0.0 { 1.0 } else { c.abs() }));
    let at = |i: f64, j: f64| q(c + i * d, c + j * d);
    let d3 = d * d * d;

    let q30 = (at(2.0, 0.0)? - 2.0 * at(1.0, 0.0)? + 2.0 * at(-1.0, 0.0)? - at(-2.0, 0.0)?)
        / (2.0 * d3);
    let q03 = (at(0.0, 2.0)? - 2.0 * at(0.0, 1.0)? + 2.0 * at(0.0, -1.0)? - at(0.0, -2.0)?)
        / (2.0 * d3);
    let second_x = |j: f64| -> Result<f64> { Ok(at(1.0, j)? - 2.0 * at(0.0, j)? + at(-1.0, j)?) };
    let second_y = |i: f64| -> Result<f64> { Ok(at(i, 1.0)? - 2.0 * at(i, 0.0)? + at(i, -1.0)?) };
    let q21 = (second_x(1.0)? - second_x(-1.0)?) / (2.0 * d3);
    let q12 = (second_y(1.0)? - second_y(-1.0)?) / (2.0 * d3);

    let scale = q30.abs().max(q03.abs()).max(3.0 * q21.abs()).max(3.0 * q12.abs());
    let tol = THIRD_ORDER_RELATIVE * scale + THIRD_ORDER_ABSOLUTE;
    let relations_ok = (q30 - q03).abs() <= tol
        && (q30 + 3.0 * q12).abs() <= tol
        && (q30 + 3.0 * q21).abs() <= tol;

    Ok(ThirdOrder {
        step: d,
        q30,
        q21,
        q12,
        q03,
        relations_ok,
    })
}
