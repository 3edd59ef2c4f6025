use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("non-finite input: {what} = {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} = {value} outside the admissible domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("no sign change on [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}")]
    Bracket { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("{method} did not reach tolerance {tol:e} in {iterations} iterations (last residual {residual:e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    #[error("certification failed at x = {x}: step value {step} exceeds bound {bound}")]
    Certification { x: f64, step: f64, bound: f64 },

    #[error("invalid polygon: {0}")]
    Polygon(String),

    #[error("Schwarz-Christoffel parameter problem did not converge after {iterations} iterations (max residual {max_residual:e})")]
    ScParameters {
        iterations: usize,
        max_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("inverse map failed at w = {w_re}{w_im:+}i: {reason}")]
    Inversion {
        w_re: f64,
        w_im: f64,
        reason: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate violated: {0}")]
    Certificate(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn non_finite(what: &'static str, value: f64) -> Self {
        Error::NonFinite { what, value }
    }

    /// Labels an error with the pipeline stage that produced it.
    pub fn at(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping stage labels.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::NonFinite { .. }
            | Error::Domain { .. }
            | Error::Precondition(..)
            | Error::Polygon(..) => 2,
            Error::Bracket { .. }
            | Error::NoConvergence { .. }
            | Error::ScParameters { .. }
            | Error::Inversion { .. } => 3,
            Error::Certification { .. } | Error::Certificate(..) => 4,
            Error::Stage { .. } => unreachable!("root() strips stage labels"),
        }
    }
}

pub(crate) fn check_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::non_finite(what, value))
    }
}
