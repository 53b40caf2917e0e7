//! Heat traces P(T) = sum deg * exp(-lambda^2 T) and their exact
//! T-derivative.
//!
//! All sums run over the finite spectral lines in a fixed order —
//! largest exponent magnitude first, so the smallest contributions
//! accumulate before the dominant ones — with Kahan compensation.
//! Nothing here is ill-conditioned (every term is positive), but for
//! large spectra the low-lying lines would otherwise swamp the tail,
//! and the fixed order makes every evaluation bit-reproducible.

use crate::error::{Error, Result};
use crate::spectrum::DiracSpectrum;

/// Exponent magnitude beyond which a term is dropped as an exact zero:
/// exp(-745) is the last subnormal doubles can represent, so anything
/// past it contributes nothing representable anyway.
pub const UNDERFLOW_EXPONENT: f64 = 745.0;

/// Compensated (Kahan) accumulator for f64 sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidTime(t));
    }
    Ok(())
}

/// Heat trace P(t) = sum over lines of deg * exp(-lambda^2 t).
///
/// t = 0 is a valid limit and returns the total dimension of the
/// spectrum. Terms with lambda^2 * t > [`UNDERFLOW_EXPONENT`] contribute
/// exactly zero.
pub fn heat_trace(spectrum: &DiracSpectrum, t: f64) -> Result<f64> {
    check_time(t)?;
    let mut acc = KahanSum::new();
    for line in spectrum.lines().iter().rev() {
        let exponent = line.eigenvalue_sq() * t;
        if exponent > UNDERFLOW_EXPONENT {
            continue;
        }
        acc.add(line.degeneracy() as f64 * (-exponent).exp());
    }
    Ok(acc.value())
}

/// Exact T-derivative of the heat trace:
/// dP/dt = -sum deg * lambda^2 * exp(-lambda^2 t). Always <= 0.
pub fn heat_trace_derivative(spectrum: &DiracSpectrum, t: f64) -> Result<f64> {
    check_time(t)?;
    let mut acc = KahanSum::new();
    for line in spectrum.lines().iter().rev() {
        let lambda_sq = line.eigenvalue_sq();
        let exponent = lambda_sq * t;
        if exponent > UNDERFLOW_EXPONENT {
            continue;
        }
        acc.add(line.degeneracy() as f64 * lambda_sq * (-exponent).exp());
    }
    Ok(-acc.value())
}

/// Two-term small-t heat-kernel expansion of the round-sphere trace:
/// area / (2 pi t) - 1/3.
///
/// Valid as a reference only for small t; for large t it just returns
/// the algebraic value (which tends to -1/3).
pub fn standard_asymptotic_trace(t: f64, area: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidTime(t));
    }
    if !area.is_finite() || area <= 0.0 {
        return Err(Error::InvalidArea(area));
    }
    Ok(area / (std::f64::consts::TAU * t) - 1.0 / 3.0)
}

/// Heat trace and its T-derivative at one diffusion time t = 1/Lambda^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTracePoint {
    pub t: f64,
    pub trace: f64,
    pub trace_t_derivative: f64,
}

impl HeatTracePoint {
    /// Evaluate both the trace and its derivative.
    ///
    /// Fails with [`Error::TraceUnderflow`] if every exponential of a
    /// nonempty spectrum underflowed, since the point would then carry a
    /// zero trace that no downstream log can use.
    pub fn evaluate(spectrum: &DiracSpectrum, t: f64) -> Result<Self> {
        let trace = heat_trace(spectrum, t)?;
        if trace <= 0.0 && !spectrum.is_empty() {
            return Err(Error::TraceUnderflow(t));
        }
        Ok(Self {
            t,
            trace,
            trace_t_derivative: heat_trace_derivative(spectrum, t)?,
        })
    }
}
