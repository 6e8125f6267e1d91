use num_complex::Complex64;
use thiserror::Error;

use crate::poly::Var;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("degenerate system: {0}")]
    DegenerateSystem(String),

    #[error("nothing to eliminate: polynomial has degree 0 in {0}")]
    NothingToEliminate(Var),

    #[error("coefficient {index} does not fit in a double")]
    CoefficientOverflow { index: usize },

    #[error("root iteration did not converge (scaled residual {residual:e})")]
    NoConvergence { best: Vec<Complex64>, residual: f64 },

    #[error("root {0} has no conjugate partner")]
    UnpairedRoot(Complex64),

    #[error("no pairing of x-root {x} with y-root {y} below tolerance (residual {residual:e})")]
    AssemblyFailure {
        x: Complex64,
        y: Complex64,
        residual: f64,
    },

    #[error("particles {0} and {1} are not conjugate partners")]
    NotConjugatePartners(usize, usize),

    #[error("derivative vanishes near t = {t}: velocity undefined")]
    NearEvent { t: f64 },

    #[error("angular momentum pipeline failed: {0}")]
    PipelineFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
