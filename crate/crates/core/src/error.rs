use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument is outside the domain of the operation.
    #[error("{name} = {value} is outside its domain: {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The closed form contains 1/(1 - alpha^2), which diverges at alpha = 1.
    #[error("alpha = 1 makes 1/(1 - alpha^2) singular; {operation} needs alpha < 1")]
    SingularAlpha { operation: &'static str },

    /// The SNR density is identically zero but positive power must be placed.
    #[error("SNR density is identically zero, cannot allocate power {power}")]
    DegenerateDensity { power: f64 },

    /// `u + v G(f)` vanished while evaluating a density.
    #[error("density denominator u + v*G(f) vanished at f = {f}")]
    DivisionDegeneracy { f: f64 },

    /// Elementary compression with a zero-capacity backhaul has infinite noise.
    #[error("elementary-compression noise is infinite at C' = 0")]
    InfiniteNoise,

    /// A scheme was asked for outside the regime it is defined in.
    #[error("{scheme} requires {requirement}")]
    Precondition {
        scheme: &'static str,
        requirement: &'static str,
    },

    /// The fixed-point bracket `[0, C']` does not contain a sign change.
    #[error("fixed-point bracket invalid: g(0) = {g_lo}, g(C') = {g_hi}")]
    Bracket { g_lo: f64, g_hi: f64 },

    /// A bisection hit its iteration cap. Indicates a bug, not bad input.
    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("invalid sweep grid: {0}")]
    Grid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            constraint,
        }
    }
}
