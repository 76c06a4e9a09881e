#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(estimate: f64, exact: f64) -> f64 {
    (estimate - exact).abs() / exact.abs()
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
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
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Reference integral by a 24-point Gauss-Legendre rule on `sub` equal pieces.
pub fn reference(f: impl Fn(f64) -> f64, a: f64, b: f64, sub: usize) -> f64 {
    let rule = gauss_legendre(24);
    let w = (b - a) / sub as f64;
    let mut total = 0.0;
    for s in 0..sub {
        let lo = a + s as f64 * w;
        let mid = lo + 0.5 * w;
        total += rule.iter().map(|(x, wt)| wt * f(mid + 0.5 * w * x)).sum::<f64>() * 0.5 * w;
    }
    total
}

/// `sinh(b) - sinh(a)` without cancellation for nearby endpoints.
pub fn cosh_integral(a: f64, h: f64) -> f64 {
    2.0 * (a + 0.5 * h).cosh() * (0.5 * h).sinh()
}
