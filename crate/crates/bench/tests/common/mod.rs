#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(estimate: f64, exact: f64) -> f64 {
    (estimate - exact).abs() / exact.abs()
}

/// Prints one verdict line per criterion, then fails the test if it did not hold.
pub fn verdict(criterion: &str, ok: bool, detail: impl AsRef<str>) {
    println!("[{}] {criterion}: {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
    assert!(ok, "{criterion}: {}", detail.as_ref());
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// 24-point Gauss-Legendre integral over one panel.
pub fn reference(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    gauss_legendre(24).iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

pub fn cosh_integral(a: f64, h: f64) -> f64 {
    2.0 * (a + 0.5 * h).cosh() * (0.5 * h).sinh()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `int_0^1 l_k(t) dt` for the Lagrange basis on `k / (n - 1)`.
pub fn lagrange_weights(n: usize) -> Vec<BigRational> {
    let nodes: Vec<BigRational> = (0..n).map(|k| q(k as i64, n as i64 - 1)).collect();
    (0..n)
        .map(|k| {
            let mut poly = vec![BigRational::one()];
            for j in (0..n).filter(|&j| j != k) {
                let denom = &nodes[k] - &nodes[j];
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] += c / &denom;
                    next[i] -= c * &nodes[j] / &denom;
                }
                poly = next;
            }
            poly.iter().enumerate().fold(BigRational::zero(), |acc, (i, c)| {
                acc + c / BigRational::from_integer(BigInt::from(i + 1))
            })
        })
        .collect()
}

/// Parses a sweep CSV into `(h, e_nl, e_lin, ratio)` rows.
pub fn sweep_rows(csv: &str) -> Vec<[f64; 4]> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("h,est_nl,est_lin,exact,e_nl,e_lin,ratio"));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            [v[0], v[4], v[5], v[6]]
        })
        .collect()
}
