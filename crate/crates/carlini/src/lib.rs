//! Classical celestial-mechanics series machinery around Kepler's equation.
//!
//! The crate groups a set of closely related numerical problems:
//!
//! - [`kepler`]: solving `u = θ − c sin θ` (Newton and fixed-point
//!   iteration) and converting between mean, eccentric and true anomaly;
//! - [`fourier`]: the Lagrange/Fourier coefficients of the eccentric-anomaly,
//!   true-anomaly and radius-vector series in the mean anomaly, with both
//!   Bessel closed forms and an independent quadrature oracle;
//! - [`asymptotics`]: large-index behaviour of those coefficients — the
//!   corrected formulas, the historical erroneous convergence ratio, and the
//!   limit constants (≈ 0.66274 and ≈ 0.62) attached to them;
//! - [`wkb`]: the singular-perturbation expansion of
//!   `s″ + ((2p+1)/x)s′ = (p²/σ²)s` in descending powers of the large
//!   parameter `p`, with series, ODE and Euler-integral oracles;
//! - [`perturb`]: the regular-perturbation cascade for `y″ + y + αy² = b`;
//! - [`histmath`]: the exponential equation `x^x = y` (real and complex
//!   branches), Euler's divergent-series "sum", conjugate algebraic
//!   functions, and the golden-ratio/Fibonacci facts;
//! - [`specfun`]: the shared special-function substrate (Bessel J and I,
//!   regularized incomplete gamma, quadrature, bracketed root finding,
//!   log-domain arithmetic).
//!
//! Everything is pure `f64` computation; quantities that grow factorially
//! (p!, (αe^f)^p, e^{pf}) are carried in log domain via
//! [`specfun::LogValue`]. All functions are safe for unrestricted concurrent
//! use: there is no shared mutable state beyond internal caches behind locks.

pub mod asymptotics;
pub mod fourier;
pub mod histmath;
pub mod kepler;
mod ode;
pub mod perturb;
pub mod specfun;
pub mod wkb;

use thiserror::Error as ThisError;

/// Crate-wide error type.
#[derive(Debug, ThisError)]
pub enum Error {
    /// Input outside an operation's documented domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A bracketed root solve was handed endpoints without a sign change.
    #[error("no sign change on bracket [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },
    /// An iteration failed to reach its tolerance within its cap.
    #[error("{what} did not converge within {iterations} iterations")]
    Convergence { what: String, iterations: u32 },
    /// A series or quadrature exhausted its refinement budget.
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    /// A truncated-series evaluation asked for more coefficients than stored.
    #[error("coefficient table holds indices up to {have}, need {need}")]
    IncompleteTable { need: usize, have: usize },
    /// Geometric-rate fit over a range containing zero coefficients.
    #[error("degenerate fit: zero coefficient inside the requested index range")]
    DegenerateFit,
    /// `x^x = y` has no real root for this argument; the complex branches do.
    #[error("no real root: ln y < -1/e; use the complex branches")]
    NoRealRoot,
    /// Numerical solution blew up inside the requested interval.
    #[error("solution diverged near x = {x}")]
    Divergence { x: f64 },
    /// Integer result not representable in 64 bits.
    #[error("result overflows 64-bit integer range")]
    Overflow,
    /// Series argument outside its radius of convergence.
    #[error("argument {z} outside convergence radius {radius}")]
    OutOfRadius { z: f64, radius: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::NumericFailure(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
