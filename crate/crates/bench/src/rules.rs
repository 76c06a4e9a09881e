//! Rule identifiers accepted on the command line.

use nlquad::construct::build_q2;
use nlquad::targets::builtin;
use nlquad::{build_q1, classic, curvature_trapezoid, exp_q1, exp_q2, gauss_like_rule, ClassicRule, PanelRule};
use nlquad::exprules::CorrectionSign;
use nlquad::GAUSS_LIKE_DEFAULT_SIGN;

use crate::error::{CliError, CliResult};

pub const RULE_IDS: &[&str] = &[
    "exp-q1",
    "exp-q2",
    "gauss-like",
    "gauss-like-plus",
    "gauss-like-minus",
    "trapezoid",
    "simpson",
    "boole",
    "weddle",
    "q1-exp",
    "q2-exp",
    "q1-identity",
    "q2-identity",
    "curvature-trapezoid",
];

/// Resolves a rule id; `curvature-trapezoid` needs `kappa`.
pub fn parse_rule(id: &str, kappa: Option<f64>) -> CliResult<PanelRule> {
    let rule = match id {
        "exp-q1" => exp_q1(),
        "exp-q2" => exp_q2(),
        "gauss-like" => gauss_like_rule(GAUSS_LIKE_DEFAULT_SIGN),
        "gauss-like-plus" => gauss_like_rule(CorrectionSign::Plus),
        "gauss-like-minus" => gauss_like_rule(CorrectionSign::Minus),
        "q1-exp" => build_q1(&builtin("EXP")?),
        "q2-exp" => build_q2(&build_q1(&builtin("EXP")?))?,
        "q1-identity" => build_q1(&builtin("IDENTITY")?),
        "q2-identity" => build_q2(&build_q1(&builtin("IDENTITY")?))?,
        "curvature-trapezoid" => {
            let kappa = kappa.ok_or_else(|| {
                CliError::Config("curvature-trapezoid needs --kappa".into())
            })?;
            curvature_trapezoid(kappa)?
        }
        other => match other.parse::<ClassicRule>() {
            Ok(c) => classic(c),
            Err(_) => {
                return Err(CliError::Config(format!(
                    "unknown rule `{other}` (expected one of {})",
                    RULE_IDS.join(", ")
                )))
            }
        },
    };
    Ok(rule)
}
