//! Closed Newton-Cotes rules as linear combinations of trapezoid evaluations.
//!
//! On the nodes `xi_k = k / (n - 1)` the split trapezoid estimate
//!
//! ```text
//! T_k = xi_k (f(0) + f(xi_k)) / 2 + (1 - xi_k) (f(xi_k) + f(1)) / 2
//! ```
//!
//! has the Taylor coefficients `(xi_k^j - xi_k + 1) / (2 j!)`. Choosing the
//! combination `sum_k alpha_k T_k` that matches the exact integral through
//! order `h^{n+1}` gives the `(n - 1) x (n - 1)` system
//! `sum_k alpha_k (xi_k^j - xi_k + 1) = 2 / (j + 1)`, `j = 2..=n`, whose
//! solution reproduces the `n`-point Newton-Cotes weights. The system is
//! solved exactly over the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{QuadError, Result};
use crate::rule::{ExactnessTag, NodeSet, PanelRule};

/// Coefficients of the trapezoid combination and the resulting node weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSolution {
    pub n: usize,
    /// `alpha_0 .. alpha_{n-2}`, one per split trapezoid `T_k`.
    pub alphas: Vec<BigRational>,
    /// `w_0 .. w_{n-1}`, summing to one.
    pub weights: Vec<BigRational>,
}

impl AlphaSolution {
    /// `xi_k = k / (n - 1)` for `k = 0..n`.
    pub fn nodes(&self) -> Vec<BigRational> {
        node_values(self.n)
    }

    /// Coefficients on the two sub-panel trapezoid means of each `T_k`:
    /// `(alpha_k xi_k, alpha_k (1 - xi_k))` for `[0, xi_k]` and `[xi_k, 1]`.
    ///
    /// For `n = 3` this is `[(0, -1/3), (2/3, 2/3)]`: `-1/3` on the whole-panel
    /// mean and `2/3` on each half-panel mean, the three-point combination.
    pub fn split_coefficients(&self) -> Vec<(BigRational, BigRational)> {
        self.alphas
            .iter()
            .zip(self.nodes())
            .map(|(alpha, xi)| {
                let one = BigRational::one();
                (alpha * &xi, alpha * (one - xi))
            })
            .collect()
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| w.to_f64().expect("finite weight"))
            .collect()
    }

    /// Least common denominator of the weights.
    pub fn common_denominator(&self) -> BigInt {
        self.weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
    }
}

fn node_values(n: usize) -> Vec<BigRational> {
    let last = BigInt::from(n - 1);
    (0..n)
        .map(|k| BigRational::new(BigInt::from(k), last.clone()))
        .collect()
}

/// Solves for the trapezoid combination of the `n`-point closed Newton-Cotes rule.
///
/// `n` must be odd with `3 <= n <= 9`.
pub fn solve_alpha(n: usize) -> Result<AlphaSolution> {
    if n % 2 == 0 || !(3..=9).contains(&n) {
        return Err(QuadError::Config(format!(
            "n must be odd and between 3 and 9, got {n}"
        )));
    }
    let xi = node_values(n);
    let one = BigRational::one();
    let unknowns = n - 1;

    let mut matrix = Vec::with_capacity(unknowns);
    let mut rhs = Vec::with_capacity(unknowns);
    for j in 2..=n {
        let row = xi[..unknowns]
            .iter()
            .map(|x| num_traits::pow(x.clone(), j) - x + &one)
            .collect::<Vec<_>>();
        matrix.push(row);
        rhs.push(BigRational::new(BigInt::from(2), BigInt::from(j + 1)));
    }
    let alphas = solve_fraction_free(matrix, rhs)?;

    let two = BigRational::from_integer(BigInt::from(2));
    let mut weights = vec![BigRational::zero(); n];
    for (k, alpha) in alphas.iter().enumerate() {
        let left = &xi[k] / &two;
        let right = (&one - &xi[k]) / &two;
        weights[0] += alpha * &left;
        weights[k] += alpha * (&left + &right);
        weights[n - 1] += alpha * &right;
    }

    debug_assert!(weights.iter().fold(BigRational::zero(), |s, w| s + w).is_one());
    Ok(AlphaSolution { n, alphas, weights })
}

/// Solves `A x = b` exactly: rows are scaled to integers, reduced by Bareiss
/// elimination and back-substituted over the rationals.
fn solve_fraction_free(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let m = a.len();
    let mut rows: Vec<Vec<BigInt>> = a
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            row.push(rhs);
            let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..m {
        if rows[k][k].is_zero() {
            let swap = (k + 1..m)
                .find(|&i| !rows[i][k].is_zero())
                .ok_or_else(|| QuadError::Config("singular Newton-Cotes system".into()))?;
            rows.swap(k, swap);
        }
        for i in k + 1..m {
            for j in k + 1..=m {
                let v = (&rows[i][j] * &rows[k][k] - &rows[i][k] * &rows[k][j]) / &prev;
                rows[i][j] = v;
            }
            rows[i][k] = BigInt::zero();
        }
        prev = rows[k][k].clone();
    }

    let mut x = vec![BigRational::zero(); m];
    for i in (0..m).rev() {
        let mut acc = BigRational::from_integer(rows[i][m].clone());
        for j in i + 1..m {
            acc -= BigRational::from_integer(rows[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(rows[i][i].clone());
    }
    Ok(x)
}

/// Fractions over a shared denominator, e.g. `1/6 4/6 1/6`.
pub fn format_over_common_denominator(values: &[BigRational]) -> String {
    let denom = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values
        .iter()
        .map(|v| format!("{}/{}", v.numer() * (&denom / v.denom()), denom))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Reduced fractions, e.g. `-1/3 4/3`.
pub fn format_reduced(values: &[BigRational]) -> String {
    values
        .iter()
        .map(|v| {
            if v.denom().is_one() {
                v.numer().to_string()
            } else {
                format!("{}/{}", v.numer(), v.denom())
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicRule {
    Trapezoid,
    Simpson,
    Boole,
    /// Seven-point closed Newton-Cotes rule.
    Weddle,
}

impl ClassicRule {
    pub const ALL: [ClassicRule; 4] = [
        ClassicRule::Trapezoid,
        ClassicRule::Simpson,
        ClassicRule::Boole,
        ClassicRule::Weddle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassicRule::Trapezoid => "trapezoid",
            ClassicRule::Simpson => "simpson",
            ClassicRule::Boole => "boole",
            ClassicRule::Weddle => "weddle",
        }
    }

    /// Highest polynomial degree integrated exactly.
    pub fn degree(self) -> u32 {
        match self {
            ClassicRule::Trapezoid => 1,
            ClassicRule::Simpson => 3,
            ClassicRule::Boole => 5,
            ClassicRule::Weddle => 7,
        }
    }

    fn numerators(self) -> (&'static [f64], f64) {
        match self {
            ClassicRule::Trapezoid => (&[1.0, 1.0], 2.0),
            ClassicRule::Simpson => (&[1.0, 4.0, 1.0], 6.0),
            ClassicRule::Boole => (&[7.0, 32.0, 12.0, 32.0, 7.0], 90.0),
            ClassicRule::Weddle => (&[41.0, 216.0, 27.0, 272.0, 27.0, 216.0, 41.0], 840.0),
        }
    }
}

impl fmt::Display for ClassicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassicRule {
    type Err = QuadError;

    fn from_str(s: &str) -> Result<Self> {
        ClassicRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| QuadError::Config(format!("unknown classic rule `{s}`")))
    }
}

/// Linear rule with equispaced nodes and floating-point weights.
pub fn classic(rule: ClassicRule) -> PanelRule {
    let (numerators, denominator) = rule.numerators();
    let weights = numerators.iter().map(|w| w / denominator).collect::<Vec<_>>();
    let nodes = NodeSet::equispaced(weights.len()).expect("static nodes");
    PanelRule::linear(rule.name(), nodes, weights, rule.degree() + 2)
        .expect("static weights")
        .tag(ExactnessTag::Polynomials(rule.degree()))
}
