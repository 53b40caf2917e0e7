//! Error type shared by the whole crate.

/// Errors produced by spectrum construction, trace evaluation and peak search.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The truncation parameter N (or n_max) must be a positive integer.
    #[error("truncation parameter must be at least 1")]
    ZeroTruncation,

    /// The sphere radius must be a positive finite real.
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    /// Diffusion time t must be nonnegative and finite (t = 0 is the
    /// total-dimension limit).
    #[error("diffusion time must be nonnegative and finite, got {0}")]
    InvalidTime(f64),

    /// Probe energies must be positive and finite.
    #[error("probe energy must be positive and finite, got {0}")]
    InvalidEnergy(f64),

    /// The reference area fed to the asymptotic trace must be positive.
    #[error("reference area must be positive and finite, got {0}")]
    InvalidArea(f64),

    /// A spectral line with a negative or non-finite eigenvalue or a zero
    /// degeneracy was supplied.
    #[error("invalid spectral line: eigenvalue_sq {eigenvalue_sq}, degeneracy {degeneracy}")]
    InvalidLine { eigenvalue_sq: f64, degeneracy: u64 },

    /// The operation needs at least one spectral line.
    #[error("spectrum `{0}` has no spectral lines")]
    EmptySpectrum(String),

    /// Every exponential in the heat trace underflowed, so log-derived
    /// quantities are undefined at this scale.
    #[error("heat trace underflowed to zero at t = {0}; probe energy too small for this spectrum")]
    TraceUnderflow(f64),

    /// Relative finite-difference steps must lie in (0, 0.1).
    #[error("relative step must lie in (0, 0.1), got {0}")]
    InvalidStep(f64),

    /// Energy grids must be nonempty, strictly increasing and positive.
    #[error("energy grid must be nonempty, strictly increasing and positive: {0}")]
    InvalidGrid(String),

    /// Peak brackets must satisfy 0 < lo < hi.
    #[error("bracket must satisfy 0 < lo < hi, got ({lo}, {hi})")]
    InvalidBracket { lo: f64, hi: f64 },

    /// The coarse scan found the maximum on the bracket boundary, so the
    /// bracket does not enclose an interior peak.
    #[error("no interior maximum in ({lo}, {hi}): coarse scan peaks at the boundary {at}")]
    BoundaryMaximum { lo: f64, hi: f64, at: f64 },

    /// A curve file could not be parsed.
    #[error("malformed curve file: {0}")]
    MalformedCurve(String),
}

pub type Result<T> = std::result::Result<T, Error>;
