//! Scale-dependent geometry: the area function A(Lambda) and the
//! spectral dimension D_s(Lambda), plus curve sweeps and peak search.
//!
//! Both observables probe the spectrum through the heat trace at
//! diffusion time T = 1/Lambda^2:
//!
//! ```text
//! A(Lambda)   = 2 pi (P(T) + 1/3) / Lambda^2
//! D_s(Lambda) = -2 dln P / dln T = 2 T (sum deg lambda^2 e^{-lambda^2 T})
//!                                      / (sum deg e^{-lambda^2 T})
//! ```
//!
//! On the round sphere A tends to the geometric area and D_s to 2 as
//! Lambda grows; on the fuzzy sphere the finite spectrum makes both
//! observables rise to a maximum and then decay to zero at high energy.
//!
//! Two conventions are fixed here. First, D_s is defined through the
//! T-derivative with the sign that makes the round sphere come out at
//! +2; expressed in Lambda that is +dln P / dln Lambda. Second, the
//! +1/3 constant in A is part of the definition and is kept for the
//! fuzzy case too; it makes A blow up like 2 pi/(3 Lambda^2) as
//! Lambda -> 0, which is why peak searches insist on an interior
//! maximum instead of silently returning a bracket endpoint on that
//! divergent flank.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heat_kernel::{heat_trace, heat_trace_derivative};
use crate::spectrum::DiracSpectrum;

/// Default sweep grid: 200 log-spaced energies on [0.1, 100].
pub const DEFAULT_LAMBDA_MIN: f64 = 0.1;
pub const DEFAULT_LAMBDA_MAX: f64 = 100.0;
pub const DEFAULT_GRID_POINTS: usize = 200;

/// Number of samples in the coarse scan that brackets a peak.
const COARSE_SCAN_POINTS: usize = 512;
/// Golden-section termination: relative bracket width in Lambda.
const GOLDEN_REL_TOL: f64 = 1e-6;

fn check_energy(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidEnergy(lambda));
    }
    Ok(())
}

/// Diffusion time probed at energy Lambda.
#[inline]
fn probe_time(lambda: f64) -> f64 {
    1.0 / (lambda * lambda)
}

/// Strictly increasing grid of positive probe energies.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyGrid {
    values: Vec<f64>,
}

impl EnergyGrid {
    /// Wrap an explicit list of energies; must be nonempty, positive,
    /// finite and strictly increasing.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        for &v in &values {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidGrid(format!("non-positive entry {v}")));
            }
        }
        for w in values.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidGrid(format!(
                    "not strictly increasing at {} >= {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { values })
    }

    /// `count` log-spaced energies from `min` to `max` inclusive.
    pub fn log_spaced(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::spaced(min, max, count, true)
    }

    /// `count` linearly spaced energies from `min` to `max` inclusive.
    pub fn linear(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::spaced(min, max, count, false)
    }

    fn spaced(min: f64, max: f64, count: usize, log: bool) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || min <= 0.0 || min >= max {
            return Err(Error::InvalidGrid(format!(
                "need 0 < min < max, got [{min}, {max}]"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {count}"
            )));
        }
        let mut values = Vec::with_capacity(count);
        for i in 0..count {
            let v = if i == 0 {
                min
            } else if i == count - 1 {
                max
            } else if log {
                let frac = i as f64 / (count - 1) as f64;
                (min.ln() + frac * (max.ln() - min.ln())).exp()
            } else {
                let frac = i as f64 / (count - 1) as f64;
                min + frac * (max - min)
            };
            values.push(v);
        }
        Self::new(values)
    }

    /// The default figure grid (200 log-spaced points on [0.1, 100]).
    pub fn default_sweep() -> Self {
        Self::log_spaced(DEFAULT_LAMBDA_MIN, DEFAULT_LAMBDA_MAX, DEFAULT_GRID_POINTS)
            .expect("default grid is valid")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One sweep sample: everything the curve files carry per energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub lambda: f64,
    pub t: f64,
    pub trace: f64,
    pub area: f64,
    pub dimension: f64,
}

/// A(Lambda) and D_s(Lambda) sampled over an energy grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryCurve {
    label: String,
    points: Vec<CurvePoint>,
}

impl GeometryCurve {
    /// Assemble a curve from points (normally done by [`sweep`]).
    pub fn new(label: impl Into<String>, points: Vec<CurvePoint>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }
}

/// Spectral area at probe energy `lambda`: 2 pi (P(1/lambda^2) + 1/3) / lambda^2.
pub fn area(spectrum: &DiracSpectrum, lambda: f64) -> Result<f64> {
    check_energy(lambda)?;
    let t = probe_time(lambda);
    let trace = heat_trace(spectrum, t)?;
    Ok(std::f64::consts::TAU * (trace + 1.0 / 3.0) * t)
}

/// Spectral dimension at probe energy `lambda`, computed analytically
/// from the exact trace derivative. Always nonnegative; identically 0
/// for a spectrum of bare zero modes.
pub fn spectral_dimension(spectrum: &DiracSpectrum, lambda: f64) -> Result<f64> {
    check_energy(lambda)?;
    if spectrum.is_empty() {
        return Err(Error::EmptySpectrum(spectrum.label().to_string()));
    }
    let t = probe_time(lambda);
    let trace = heat_trace(spectrum, t)?;
    if trace <= 0.0 {
        return Err(Error::TraceUnderflow(t));
    }
    let d_trace = heat_trace_derivative(spectrum, t)?;
    Ok(-2.0 * t * (d_trace / trace))
}

/// Finite-difference cross-check of [`spectral_dimension`]: symmetric
/// slope of ln P against ln Lambda between lambda(1 - rel_step) and
/// lambda(1 + rel_step). Agrees with the analytic value to
/// O(rel_step^2).
pub fn spectral_dimension_fd(spectrum: &DiracSpectrum, lambda: f64, rel_step: f64) -> Result<f64> {
    check_energy(lambda)?;
    if spectrum.is_empty() {
        return Err(Error::EmptySpectrum(spectrum.label().to_string()));
    }
    if !rel_step.is_finite() || rel_step <= 0.0 || rel_step >= 0.1 {
        return Err(Error::InvalidStep(rel_step));
    }
    let lam_hi = lambda * (1.0 + rel_step);
    let lam_lo = lambda * (1.0 - rel_step);
    let p_hi = heat_trace(spectrum, probe_time(lam_hi))?;
    let p_lo = heat_trace(spectrum, probe_time(lam_lo))?;
    if p_hi <= 0.0 || p_lo <= 0.0 {
        return Err(Error::TraceUnderflow(probe_time(lambda)));
    }
    Ok((p_hi.ln() - p_lo.ln()) / (lam_hi.ln() - lam_lo.ln()))
}

/// Evaluate trace, area and dimension over a whole grid.
///
/// Each point is computed with the same pointwise operations, so a
/// singleton grid reproduces [`area`] and [`spectral_dimension`]
/// bit for bit, and repeated sweeps are deterministic.
pub fn sweep(spectrum: &DiracSpectrum, grid: &EnergyGrid) -> Result<GeometryCurve> {
    let mut points = Vec::with_capacity(grid.len());
    for &lambda in grid.values() {
        let t = probe_time(lambda);
        points.push(CurvePoint {
            lambda,
            t,
            trace: heat_trace(spectrum, t)?,
            area: area(spectrum, lambda)?,
            dimension: spectral_dimension(spectrum, lambda)?,
        });
    }
    Ok(GeometryCurve::new(spectrum.label(), points))
}

/// Which curve a peak search targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Area,
    Dimension,
}

impl Observable {
    pub fn name(&self) -> &'static str {
        match self {
            Observable::Area => "area",
            Observable::Dimension => "dimension",
        }
    }
}

/// Location and value of an interior maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakResult {
    pub lambda_star: f64,
    pub value: f64,
    /// The search bracket the caller supplied.
    pub bracket: (f64, f64),
}

/// Locate the interior maximum of `which` on the bracket (lo, hi).
///
/// A 512-point log-spaced coarse scan brackets the maximum first; if
/// the best coarse sample sits on the bracket boundary the search
/// reports [`Error::BoundaryMaximum`] instead of returning an endpoint
/// (the low-Lambda divergence of A would otherwise masquerade as a
/// peak). Golden-section refinement then narrows the bracket to a
/// relative width of 1e-6 in Lambda.
pub fn find_peak(
    spectrum: &DiracSpectrum,
    which: Observable,
    bracket: (f64, f64),
) -> Result<PeakResult> {
    let (lo, hi) = bracket;
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || lo >= hi {
        return Err(Error::InvalidBracket { lo, hi });
    }
    if spectrum.is_empty() {
        return Err(Error::EmptySpectrum(spectrum.label().to_string()));
    }
    let eval = |lambda: f64| -> Result<f64> {
        match which {
            Observable::Area => area(spectrum, lambda),
            Observable::Dimension => spectral_dimension(spectrum, lambda),
        }
    };

    // Coarse scan on a log grid, endpoints included.
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let mut best_idx = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    let mut lambdas = Vec::with_capacity(COARSE_SCAN_POINTS);
    for i in 0..COARSE_SCAN_POINTS {
        let lambda = if i == 0 {
            lo
        } else if i == COARSE_SCAN_POINTS - 1 {
            hi
        } else {
            let frac = i as f64 / (COARSE_SCAN_POINTS - 1) as f64;
            (ln_lo + frac * (ln_hi - ln_lo)).exp()
        };
        let value = eval(lambda)?;
        if value > best_val {
            best_val = value;
            best_idx = i;
        }
        lambdas.push(lambda);
    }
    if best_idx == 0 || best_idx == COARSE_SCAN_POINTS - 1 {
        return Err(Error::BoundaryMaximum {
            lo,
            hi,
            at: lambdas[best_idx],
        });
    }

    // Golden-section refinement inside the three-point coarse bracket,
    // in log space so the tolerance is relative.
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut a = lambdas[best_idx - 1].ln();
    let mut b = lambdas[best_idx + 1].ln();
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1.exp())?;
    let mut f2 = eval(x2.exp())?;
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    while b - a > GOLDEN_REL_TOL {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1.exp())?;
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2.exp())?;
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }

    Ok(PeakResult {
        lambda_star: best.0.exp(),
        value: best.1,
        bracket: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::FuzzySphereParams;

    fn fuzzy(n: u32) -> DiracSpectrum {
        DiracSpectrum::fuzzy(&FuzzySphereParams::unit(n).unwrap())
    }

    const FOUR_PI: f64 = 2.0 * std::f64::consts::TAU;

    #[test]
    fn grid_constructors_validate() {
        assert!(EnergyGrid::new(vec![]).is_err());
        assert!(EnergyGrid::new(vec![1.0, 1.0]).is_err());
        assert!(EnergyGrid::new(vec![2.0, 1.0]).is_err());
        assert!(EnergyGrid::new(vec![0.0, 1.0]).is_err());
        assert!(EnergyGrid::new(vec![f64::NAN]).is_err());
        assert!(EnergyGrid::log_spaced(1.0, 10.0, 1).is_err());
        assert!(EnergyGrid::log_spaced(10.0, 1.0, 5).is_err());
        assert!(EnergyGrid::new(vec![0.5]).is_ok());
    }

    #[test]
    fn spaced_grids_hit_their_endpoints() {
        let grid = EnergyGrid::log_spaced(0.1, 100.0, 200).unwrap();
        assert_eq!(grid.len(), 200);
        assert_eq!(grid.values()[0], 0.1);
        assert_eq!(grid.values()[199], 100.0);
        let lin = EnergyGrid::linear(1.0, 2.0, 11).unwrap();
        assert_eq!(lin.values()[0], 1.0);
        assert_eq!(lin.values()[10], 2.0);
        assert_eq!(EnergyGrid::default_sweep().len(), DEFAULT_GRID_POINTS);
    }

    #[test]
    fn area_spot_values_fuzzy_n2() {
        // Frozen from direct high-precision evaluation.
        let s = fuzzy(2);
        assert!((area(&s, 1.0).unwrap() - 15.466255959068869).abs() <= 1e-12);
        assert!((area(&s, 10.0).unwrap() - 0.7600148465117094).abs() <= 1e-14);
        assert!((area(&s, 100.0).unwrap() - 7.7477540840136e-3).abs() <= 1e-15);
        assert!(matches!(area(&s, 0.0), Err(Error::InvalidEnergy(_))));
        assert!(matches!(area(&s, -3.0), Err(Error::InvalidEnergy(_))));
    }

    #[test]
    fn standard_area_approaches_four_pi() {
        let s = DiracSpectrum::standard(40).unwrap();
        let a3 = area(&s, 3.0).unwrap();
        assert!((a3 - 12.563713733860137).abs() <= 1e-12);
        assert!((a3 / FOUR_PI - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn single_line_dimension_is_two_t_exactly() {
        let s = DiracSpectrum::from_lines("single", vec![(1.0, 4)]).unwrap();
        for lambda in [0.5, 1.0, 3.0, 17.0] {
            let t = 1.0 / (lambda * lambda);
            assert_eq!(spectral_dimension(&s, lambda).unwrap(), 2.0 * t);
        }
    }

    #[test]
    fn dimension_spot_values() {
        let s = fuzzy(2);
        let d = spectral_dimension(&s, 1.0).unwrap();
        assert!((d - 2.9256846378913175).abs() <= 1e-12);
        assert!((d - 2.9257).abs() <= 1e-4);

        let std40 = DiracSpectrum::standard(40).unwrap();
        let d3 = spectral_dimension(&std40, 3.0).unwrap();
        assert!((d3 - 2.0386178624336973).abs() <= 1e-12);
        // Continuum prediction 2/(1 - T/6) at T = 1/9.
        assert!((d3 - 108.0 / 53.0).abs() <= 1e-3);
    }

    #[test]
    fn dimension_is_zero_for_bare_zero_modes() {
        let s = DiracSpectrum::from_lines("zero modes", vec![(0.0, 8)]).unwrap();
        assert_eq!(spectral_dimension(&s, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn dimension_errors() {
        let empty = DiracSpectrum::from_lines("empty", vec![]).unwrap();
        assert!(matches!(
            spectral_dimension(&empty, 1.0),
            Err(Error::EmptySpectrum(_))
        ));
        // All exponentials underflow: lambda^2 T > 745 for every line.
        let s = fuzzy(2);
        assert!(matches!(
            spectral_dimension(&s, 1e-3),
            Err(Error::TraceUnderflow(_))
        ));
    }

    #[test]
    fn fd_matches_analytic_dimension() {
        let single = DiracSpectrum::from_lines("single", vec![(1.0, 4)]).unwrap();
        let fd = spectral_dimension_fd(&single, 1.0, 1e-4).unwrap();
        assert!((fd - 2.0).abs() <= 1e-6);

        let s = fuzzy(2);
        let fd = spectral_dimension_fd(&s, 1.0, 1e-4).unwrap();
        let exact = spectral_dimension(&s, 1.0).unwrap();
        assert!((fd - exact).abs() <= 1e-5);

        assert!(matches!(
            spectral_dimension_fd(&s, 1.0, 0.0),
            Err(Error::InvalidStep(_))
        ));
        assert!(matches!(
            spectral_dimension_fd(&s, 1.0, 0.1),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn fd_error_shrinks_quadratically() {
        let s = fuzzy(3);
        let exact = spectral_dimension(&s, 0.9).unwrap();
        let err_coarse = (spectral_dimension_fd(&s, 0.9, 2e-3).unwrap() - exact).abs();
        let err_fine = (spectral_dimension_fd(&s, 0.9, 1e-3).unwrap() - exact).abs();
        let ratio = err_coarse / err_fine;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn sweep_matches_pointwise_operations() {
        let s = fuzzy(2);
        let grid = EnergyGrid::new(vec![1.0, 10.0, 100.0]).unwrap();
        let curve = sweep(&s, &grid).unwrap();
        assert_eq!(curve.label(), "fuzzy N=2");
        assert_eq!(curve.points().len(), 3);
        for point in curve.points() {
            assert_eq!(point.area, area(&s, point.lambda).unwrap());
            assert_eq!(
                point.dimension,
                spectral_dimension(&s, point.lambda).unwrap()
            );
            assert!((point.t * point.lambda * point.lambda - 1.0).abs() <= 1e-15);
        }
        // Beyond the peak the area decays monotonically.
        let areas: Vec<f64> = curve.points().iter().map(|p| p.area).collect();
        assert!(areas[0] > areas[1] && areas[1] > areas[2]);

        let singleton = sweep(&s, &EnergyGrid::new(vec![7.5]).unwrap()).unwrap();
        assert_eq!(singleton.points().len(), 1);
        assert_eq!(singleton.points()[0].area, area(&s, 7.5).unwrap());
    }

    #[test]
    fn standard_sweep_stays_near_four_pi() {
        let s = DiracSpectrum::standard(40).unwrap();
        let grid = EnergyGrid::log_spaced(2.0, 5.0, 50).unwrap();
        let curve = sweep(&s, &grid).unwrap();
        for point in curve.points() {
            assert!(
                (point.area / FOUR_PI - 1.0).abs() <= 5e-3,
                "lambda {}",
                point.lambda
            );
        }
    }

    #[test]
    fn peak_of_fuzzy_n2_area() {
        let s = fuzzy(2);
        let peak = find_peak(&s, Observable::Area, (0.5, 10.0)).unwrap();
        assert!(peak.bracket == (0.5, 10.0));
        assert!(peak.lambda_star > 0.5 && peak.lambda_star < 10.0);
        // Frozen from a brute-force grid scan: lambda* = 1.2223131,
        // A* = 16.328019859.
        assert!((peak.lambda_star / 1.2223131 - 1.0).abs() <= 1e-4);
        assert!((peak.value - 16.328019859).abs() <= 1e-6);
        assert!(peak.value > area(&s, 0.5).unwrap());
        assert!(peak.value > area(&s, 10.0).unwrap());
    }

    #[test]
    fn boundary_maxima_are_reported_not_returned() {
        let s = fuzzy(2);
        // Decaying flank only: max at the lower edge.
        match find_peak(&s, Observable::Area, (20.0, 100.0)) {
            Err(Error::BoundaryMaximum { at, .. }) => assert_eq!(at, 20.0),
            other => panic!("expected boundary error, got {other:?}"),
        }
        // N=2 has no interior dimension peak at all.
        assert!(matches!(
            find_peak(&s, Observable::Dimension, (1.0, 50.0)),
            Err(Error::BoundaryMaximum { .. })
        ));
        assert!(matches!(
            find_peak(&s, Observable::Area, (10.0, 2.0)),
            Err(Error::InvalidBracket { .. })
        ));
    }

    #[test]
    fn high_energy_decay_bounds() {
        for n in [2u32, 8, 32] {
            let s = fuzzy(n);
            let nf = f64::from(n);
            let a_bound = std::f64::consts::TAU * (2.0 * nf * (nf + 1.0) + 1.0 / 3.0) / 1e4;
            assert!(area(&s, 100.0).unwrap() <= a_bound + 1e-12, "area N={n}");
            let d_bound = 2.0 * s.max_eigenvalue_sq().unwrap() / 1e4;
            assert!(
                spectral_dimension(&s, 100.0).unwrap() <= d_bound + 1e-12,
                "dimension N={n}"
            );
        }
    }

    #[test]
    fn zero_modes_shift_the_high_energy_trace_by_4n_plus_4() {
        for n in [2u32, 5] {
            let lambda = 1e3;
            let params = FuzzySphereParams::unit(n).unwrap();
            let without = area(&DiracSpectrum::fuzzy(&params), lambda).unwrap();
            let with = area(&DiracSpectrum::fuzzy(&params.with_zero_modes(true)), lambda).unwrap();
            // lambda^2 A / (2 pi) - 1/3 recovers the trace, which at high
            // energy approaches the total degeneracy; the flag settings
            // differ by exactly the 4(N+1) zero-mode states.
            let lam_sq = lambda * lambda;
            let recover = |a: f64| a * lam_sq / std::f64::consts::TAU - 1.0 / 3.0;
            let dim_without = f64::from(2 * n * (n + 1));
            let dim_with = f64::from(2 * (n + 1) * (n + 2));
            assert!((recover(without) - dim_without).abs() <= 1e-3);
            assert!((recover(with) - dim_with).abs() <= 1e-3);
            assert!(((recover(with) - recover(without)) - f64::from(4 * (n + 1))).abs() <= 1e-9);
        }
    }
}
