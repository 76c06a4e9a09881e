mod common;

use common::{rel, rng};
use nlquad::construct::q2_combination;
use nlquad::exprules::CorrectionSign;
use nlquad::targets::builtin;
use nlquad::{
    build_q1, build_q2, classic, curvature_trapezoid, exp_q1, exp_q2, gauss_like_rule, ClassicRule,
    ExactnessTag, Interval, PanelRule,
};
use proptest::prelude::*;
use rand::Rng;

/// Generic rules built on EXP only admit positive samples.
fn admits_negative(rule: &PanelRule) -> bool {
    !rule.name().contains("(exp)")
}

/// Rules whose samples must share a nonzero sign.
fn exponential_rules() -> Vec<PanelRule> {
    let q1 = build_q1(&builtin("EXP").unwrap());
    vec![
        exp_q1(),
        exp_q2(),
        gauss_like_rule(CorrectionSign::Plus),
        gauss_like_rule(CorrectionSign::Minus),
        build_q2(&q1).unwrap(),
        q1,
    ]
}

/// Rules defined for any real samples.
fn real_rules() -> Vec<PanelRule> {
    let mut rules: Vec<PanelRule> = ClassicRule::ALL.into_iter().map(classic).collect();
    let id = build_q1(&builtin("IDENTITY").unwrap());
    rules.push(build_q2(&id).unwrap());
    rules.push(id);
    rules.push(curvature_trapezoid(-1.0 / 6.0).unwrap());
    rules
}

#[test]
fn constants_are_integrated_exactly() {
    let iv = Interval::new(-0.7, 2.0).unwrap();
    for c in [1e-3, 0.5, 1.0, 7.25, 1e4] {
        for rule in exponential_rules() {
            let signs: &[f64] = if admits_negative(&rule) { &[1.0, -1.0] } else { &[1.0] };
            for c in signs.iter().map(|s| s * c) {
                let samples = vec![c; rule.nodes().len()];
                let v = rule.estimate(samples, &iv).unwrap().value;
                assert!(rel(v, c * 2.0) <= 1e-14, "{} at c = {c}: {v}", rule.name());
            }
        }
        for rule in real_rules() {
            for c in [c, -c, 0.0] {
                let samples = vec![c; rule.nodes().len()];
                let v = rule.estimate(samples, &iv).unwrap().value;
                assert!((v - 2.0 * c).abs() <= 1e-14 * (2.0 * c).abs(), "{} at c = {c}: {v}", rule.name());
            }
        }
    }
}

#[test]
fn symmetric_rules_ignore_sample_order() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let mut r = rng(11);
    let check = |rule: &PanelRule, samples: Vec<f64>| {
        let fwd = rule.mean(&samples, &iv).unwrap();
        let rev: Vec<f64> = samples.iter().rev().copied().collect();
        let bwd = rule.mean(&rev, &iv).unwrap();
        assert!(
            (fwd - bwd).abs() <= 1e-14 * fwd.abs().max(f64::MIN_POSITIVE),
            "{}: {samples:?} gives {fwd} vs {bwd}",
            rule.name()
        );
    };
    for rule in exponential_rules().iter().filter(|r| r.is_symmetric()) {
        for _ in 0..1000 {
            let sign = if admits_negative(rule) && r.gen_bool(0.5) { -1.0 } else { 1.0 };
            let samples = (0..rule.nodes().len())
                .map(|_| sign * 10f64.powf(r.gen_range(-3.0..3.0)))
                .collect();
            check(rule, samples);
        }
    }
    for rule in real_rules().iter().filter(|r| r.is_symmetric()) {
        for _ in 0..1000 {
            let samples = (0..rule.nodes().len()).map(|_| r.gen_range(0.1..10.0)).collect();
            check(rule, samples);
        }
    }
}

#[test]
fn builtin_rules_report_symmetry() {
    for rule in exponential_rules().into_iter().chain(real_rules()) {
        assert!(rule.is_symmetric(), "{}", rule.name());
    }
}

#[test]
fn quasilinear_rules_commute_with_scaling() {
    let iv = Interval::new(0.2, 0.9).unwrap();
    let mut r = rng(12);
    let rules: Vec<PanelRule> = exponential_rules()
        .into_iter()
        .chain(real_rules())
        .filter(|rule| rule.has_tag(&ExactnessTag::Quasilinear))
        .collect();
    assert!(rules.len() >= 8);
    for rule in &rules {
        for _ in 0..200 {
            let samples: Vec<f64> = (0..rule.nodes().len())
                .map(|_| 10f64.powf(r.gen_range(-2.0..2.0)))
                .collect();
            let q = rule.mean(&samples, &iv).unwrap();
            for lambda in [-2.0, 0.5, 3.0] {
                let scaled: Vec<f64> = samples.iter().map(|f| lambda * f).collect();
                let ql = rule.mean(&scaled, &iv).unwrap();
                assert!(rel(ql, lambda * q) <= 1e-13, "{} with lambda = {lambda}", rule.name());
            }
        }
    }
}

#[test]
fn exponential_rules_reject_mixed_signs() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    for rule in exponential_rules() {
        let mut samples = vec![1.0; rule.nodes().len()];
        samples[0] = -1.0;
        let err = rule.mean(&samples, &iv).unwrap_err();
        assert!(err.is_domain(), "{}: {err:?}", rule.name());
        samples[0] = 0.0;
        assert!(rule.mean(&samples, &iv).unwrap_err().is_domain());
    }
}

#[test]
fn closed_form_and_generic_two_point_rules_agree() {
    let generic = build_q1(&builtin("EXP").unwrap());
    let closed = exp_q1();
    let iv = Interval::new(0.0, 1.0).unwrap();
    let mut r = rng(13);
    for _ in 0..1000 {
        let f0 = 10f64.powf(r.gen_range(-3.0..3.0));
        let f1 = f0 * 10f64.powf(r.gen_range(-6.0..6.0));
        let a = closed.mean(&[f0, f1], &iv).unwrap();
        let b = generic.mean(&[f0, f1], &iv).unwrap();
        assert!(rel(b, a) <= 1e-12, "({f0}, {f1}): {a} vs {b}");
    }
}

#[test]
fn generic_rule_is_continuous_across_its_branch_switch() {
    let q1 = build_q1(&builtin("EXP").unwrap());
    let iv = Interval::new(0.0, 1.0).unwrap();
    let threshold = nlquad::construct::DEGENERATE_THRESHOLD;
    for t in [0.5, 0.9, 0.99, 1.01, 1.1, 2.0].map(|s| s * threshold) {
        for t in [t, -t] {
            let f1 = 1.0 + t;
            let a = q1.mean(&[1.0, f1], &iv).unwrap();
            let b = q1.mean(&[1.0, f1 * (1.0 + 1e-12)], &iv).unwrap();
            assert!((a - b).abs() <= 1e-9, "t = {t}: {a} vs {b}");
        }
    }
}

#[test]
fn three_point_identity_rule_is_simpson() {
    let q2 = build_q2(&build_q1(&builtin("IDENTITY").unwrap())).unwrap();
    let simpson = classic(ClassicRule::Simpson);
    let iv = Interval::new(0.0, 1.0).unwrap();
    let mut r = rng(14);
    for _ in 0..1000 {
        let f: Vec<f64> = (0..3).map(|_| r.gen_range(0.1..10.0)).collect();
        let a = q2.mean(&f, &iv).unwrap();
        let b = simpson.mean(&f, &iv).unwrap();
        assert!(rel(a, b) <= 1e-15, "{f:?}: {a} vs {b}");
    }
}

#[test]
fn two_point_identity_rule_is_trapezoid() {
    let q1 = build_q1(&builtin("IDENTITY").unwrap());
    let trap = classic(ClassicRule::Trapezoid);
    let iv = Interval::new(0.0, 1.0).unwrap();
    let mut r = rng(15);
    for _ in 0..1000 {
        let f = [r.gen_range(-10.0..10.0), r.gen_range(-10.0..10.0)];
        let a = q1.mean(&f, &iv).unwrap();
        let b = trap.mean(&f, &iv).unwrap();
        assert!((a - b).abs() <= 1e-15 * b.abs(), "{f:?}: {a} vs {b}");
    }
}

proptest! {
    #[test]
    fn q2_combination_of_equal_means_is_that_mean(c in -1e3f64..1e3) {
        let v = q2_combination(c, c, c);
        prop_assert!((v - c).abs() <= 4.0 * f64::EPSILON * c.abs());
    }

    #[test]
    fn log_mean_lies_between_geometric_and_arithmetic_means(x in 1e-3f64..1e3, y in 1e-3f64..1e3) {
        let lm = nlquad::log_mean(x, y).unwrap();
        let (g, m) = ((x * y).sqrt(), 0.5 * (x + y));
        let slack = 1e-14 * m;
        prop_assert!(lm >= g - slack && lm <= m + slack, "{lm} not in [{g}, {m}]");
    }

    #[test]
    fn exp_q1_is_exact_on_any_exponential(
        lambda in 0.1f64..10.0,
        alpha in -5.0f64..5.0,
        a in -2.0f64..2.0,
        h in 1e-3f64..2.0,
    ) {
        let iv = Interval::new(a, h).unwrap();
        let f = |x: f64| lambda * (alpha * x).exp();
        let est = nlquad::apply_panel(&exp_q1(), f, &iv).unwrap().value;
        // lambda e^{alpha a} h expm1(alpha h) / (alpha h), stable as alpha h -> 0
        let z = alpha * h;
        let shape = if z == 0.0 { 1.0 } else { z.exp_m1() / z };
        let exact = lambda * (alpha * a).exp() * h * shape;
        prop_assert!(rel(est, exact) <= 1e-13, "{est} vs {exact}");
    }
}
