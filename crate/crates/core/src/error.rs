use thiserror::Error;

/// Errors raised by rule construction, panel evaluation and composite integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    /// The integrand produced a non-finite value at one of the rule's nodes.
    #[error("integrand is not finite at node {node} (x = {x}): got {value}")]
    Sample { node: usize, x: f64, value: f64 },

    /// The samples violate a precondition of the mean-estimator.
    #[error("domain error: {0}")]
    Domain(String),

    /// A sample lies outside the range of the target function.
    #[error("sample {value} is outside the range of target `{target}`")]
    OutOfRange { target: String, value: f64 },

    /// The series branch of a generic rule needs 1/f*'(x), but f*'(x) = 0.
    #[error("target derivative vanishes at x = {x}")]
    DerivativeZero { x: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("moment order {0} exceeds the supported maximum of {max}", max = crate::exprules::MAX_MOMENT_ORDER)]
    OrderTooLarge(u32),

    #[error("series has {got} samples but at least {need} are required")]
    Length { got: usize, need: usize },

    #[error("tail error: {0}")]
    Tail(String),

    /// A rule produced a non-finite estimate from finite samples.
    #[error("non-finite estimate: {0}")]
    NonFinite(String),

    /// An error raised while evaluating one panel of a composite sum.
    #[error("panel {index}: {source}")]
    Panel {
        index: usize,
        source: Box<QuadError>,
    },
}

impl QuadError {
    /// True for the errors a composite integrator may answer with a fallback rule.
    pub fn is_domain(&self) -> bool {
        matches!(
            self.root(),
            QuadError::Domain(_)
                | QuadError::OutOfRange { .. }
                | QuadError::DerivativeZero { .. }
                | QuadError::NonFinite(_)
        )
    }

    /// The error with any panel context stripped.
    pub fn root(&self) -> &QuadError {
        match self {
            QuadError::Panel { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn at_panel(self, index: usize) -> QuadError {
        QuadError::Panel {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, QuadError>;
