//! The four test integrands with their intervals and antiderivatives.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetId {
    F1,
    F2,
    F3,
    F4,
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrandPreset {
    pub id: PresetId,
    pub a: f64,
    pub b: f64,
    f: fn(f64) -> f64,
    antiderivative: fn(f64) -> f64,
}

fn f1(x: f64) -> f64 {
    (-x).exp() + 0.5 * (-2.0 * x).exp()
}

fn f1_int(x: f64) -> f64 {
    -(-x).exp() - 0.25 * (-2.0 * x).exp()
}

/// `sum_n e^{-n x} = 1 / (e^x - 1)`.
fn f2(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

fn f2_int(x: f64) -> f64 {
    (-(-x).exp_m1()).ln()
}

impl IntegrandPreset {
    pub const ALL: [PresetId; 4] = [PresetId::F1, PresetId::F2, PresetId::F3, PresetId::F4];

    pub fn get(id: PresetId) -> Self {
        let (a, b, f, antiderivative): (f64, f64, fn(f64) -> f64, fn(f64) -> f64) = match id {
            PresetId::F1 => (0.0, 1.0, f1, f1_int),
            PresetId::F2 => (1.0, 2.0, f2, f2_int),
            PresetId::F3 => (0.0, 1.0, f64::cosh, f64::sinh),
            PresetId::F4 => (FRAC_PI_8, FRAC_PI_4, f64::sin, |x: f64| -x.cos()),
        };
        Self {
            id,
            a,
            b,
            f,
            antiderivative,
        }
    }

    pub fn by_name(name: &str) -> CliResult<Self> {
        let id = match name {
            "f1" => PresetId::F1,
            "f2" => PresetId::F2,
            "f3" => PresetId::F3,
            "f4" => PresetId::F4,
            other => {
                return Err(CliError::Config(format!(
                    "unknown integrand `{other}` (expected f1, f2, f3 or f4)"
                )))
            }
        };
        Ok(Self::get(id))
    }

    pub fn name(&self) -> &'static str {
        match self.id {
            PresetId::F1 => "f1",
            PresetId::F2 => "f2",
            PresetId::F3 => "f3",
            PresetId::F4 => "f4",
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn antiderivative(&self, x: f64) -> f64 {
        (self.antiderivative)(x)
    }

    /// `F(x1) - F(x0)` from the antiderivative, as written.
    pub fn integral(&self, x0: f64, x1: f64) -> f64 {
        self.antiderivative(x1) - self.antiderivative(x0)
    }

    /// Integral over the preset's own interval.
    pub fn exact(&self) -> f64 {
        self.integral(self.a, self.b)
    }
}
