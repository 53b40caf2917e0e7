//! Dirac spectra of the fuzzy sphere and of the truncated round sphere.
//!
//! On the fuzzy sphere of size N the squared Dirac eigenvalues are
//!
//! ```text
//! lambda_j^2 = (j + 1/2)^2 (1 + (1 - (j + 1/2)^2) / (N(N+2))),
//! ```
//!
//! with half-integer j running from 1/2 to N + 1/2 and multiplicity
//! 2(2j+1). Writing l = j + 1/2 (an integer from 1 to N+1) this becomes
//! `l^2 (M + 1 - l^2) / M` with M = N(N+2) and multiplicity 4l. Two
//! facts shape the whole crate: the spectrum is finite, and it is not
//! monotonic in l — it rises to a single interior maximum near
//! l = (N+1)/sqrt(2) and falls back to exactly zero at l = N+1, because
//! (N+1)^2 = M + 1. Those topmost modes are the zero modes; they carry
//! weight 4(N+1) but no curvature information, and they are excluded by
//! default from every trace.
//!
//! The round-sphere reference spectrum is lambda^2 = n^2 with
//! multiplicity 4n, truncated at a configurable n_max.

use crate::error::{Error, Result};

/// One squared eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    eigenvalue_sq: f64,
    degeneracy: u64,
}

impl SpectralLine {
    pub fn new(eigenvalue_sq: f64, degeneracy: u64) -> Result<Self> {
        if !eigenvalue_sq.is_finite() || eigenvalue_sq < 0.0 || degeneracy == 0 {
            return Err(Error::InvalidLine {
                eigenvalue_sq,
                degeneracy,
            });
        }
        Ok(Self {
            eigenvalue_sq,
            degeneracy,
        })
    }

    pub fn eigenvalue_sq(&self) -> f64 {
        self.eigenvalue_sq
    }

    pub fn degeneracy(&self) -> u64 {
        self.degeneracy
    }
}

/// Parameters of a fuzzy sphere: truncation N, radius l, and whether the
/// zero modes at l = N+1 take part in traces (they do not by default).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzySphereParams {
    n: u32,
    radius: f64,
    include_zero_modes: bool,
}

impl FuzzySphereParams {
    pub fn new(n: u32, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroTruncation);
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(Self {
            n,
            radius,
            include_zero_modes: false,
        })
    }

    /// Unit-radius sphere of size N.
    pub fn unit(n: u32) -> Result<Self> {
        Self::new(n, 1.0)
    }

    /// Toggle whether the l = N+1 zero modes enter the spectrum.
    pub fn with_zero_modes(mut self, include: bool) -> Self {
        self.include_zero_modes = include;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn zero_modes_included(&self) -> bool {
        self.include_zero_modes
    }
}

/// One raw energy level of the fuzzy Dirac operator, labeled by the
/// integer l = j + 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyLevel {
    pub l: u32,
    pub eigenvalue_sq: f64,
    pub degeneracy: u64,
}

impl FuzzyLevel {
    /// Total angular momentum j = l - 1/2.
    pub fn j(&self) -> f64 {
        f64::from(self.l) - 0.5
    }
}

/// Squared eigenvalue of the level l on the unit fuzzy sphere of size n.
///
/// Evaluated as l^2 (M + 1 - l^2) / M with M = N(N+2): the numerator is
/// a product of exactly representable integers, which makes the zero
/// mode exactly 0.0, the lowest mode exactly 1.0, and degenerate pairs
/// (l1^2 + l2^2 = (N+1)^2) bit-for-bit equal.
fn level_eigenvalue_sq(n: u32, l: u32) -> f64 {
    let m = f64::from(n) * f64::from(n + 2);
    let u = f64::from(l) * f64::from(l);
    u * (m + 1.0 - u) / m
}

/// Raw fuzzy energy levels in order of increasing l.
///
/// The level sequence is the non-monotonic one: it rises to an interior
/// maximum and comes back down; the final l = N+1 entry (present only
/// when the params include zero modes) is exactly zero.
pub fn fuzzy_energy_levels(params: &FuzzySphereParams) -> Vec<FuzzyLevel> {
    let l_max = if params.include_zero_modes {
        params.n + 1
    } else {
        params.n
    };
    let r_sq = params.radius * params.radius;
    (1..=l_max)
        .map(|l| FuzzyLevel {
            l,
            eigenvalue_sq: level_eigenvalue_sq(params.n, l) / r_sq,
            degeneracy: 4 * u64::from(l),
        })
        .collect()
}

/// A finite Dirac spectrum: spectral lines sorted strictly ascending in
/// the squared eigenvalue, plus a provenance label.
///
/// Lines with bit-identical eigenvalues are merged, summing their
/// degeneracies; on the fuzzy sphere this happens exactly when
/// l1^2 + l2^2 = (N+1)^2 (first at N = 4, where l = 3 and l = 4 share
/// lambda^2 = 6).
#[derive(Debug, Clone, PartialEq)]
pub struct DiracSpectrum {
    label: String,
    lines: Vec<SpectralLine>,
    total_dim: u64,
}

impl DiracSpectrum {
    /// Fuzzy-sphere spectrum for the given parameters.
    pub fn fuzzy(params: &FuzzySphereParams) -> Self {
        let mut label = format!("fuzzy N={}", params.n);
        if params.radius != 1.0 {
            label.push_str(&format!(" radius={}", params.radius));
        }
        if params.include_zero_modes {
            label.push_str(" +zero-modes");
        }
        let pairs = fuzzy_energy_levels(params)
            .into_iter()
            .map(|lv| (lv.eigenvalue_sq, lv.degeneracy))
            .collect();
        Self::from_sorted_merged(label, pairs)
    }

    /// Truncated round-sphere spectrum: lambda^2 = n^2, multiplicity 4n,
    /// for n = 1..=n_max.
    pub fn standard(n_max: u32) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::ZeroTruncation);
        }
        let pairs = (1..=n_max)
            .map(|k| (f64::from(k) * f64::from(k), 4 * u64::from(k)))
            .collect();
        Ok(Self::from_sorted_merged(
            format!("standard nmax={n_max}"),
            pairs,
        ))
    }

    /// Build a spectrum from arbitrary (eigenvalue_sq, degeneracy) pairs.
    ///
    /// The pairs are validated, sorted and merged; an empty list yields
    /// an empty spectrum, which trace evaluation treats as zero.
    pub fn from_lines(label: impl Into<String>, pairs: Vec<(f64, u64)>) -> Result<Self> {
        for &(eigenvalue_sq, degeneracy) in &pairs {
            SpectralLine::new(eigenvalue_sq, degeneracy)?;
        }
        Ok(Self::from_sorted_merged(label.into(), pairs))
    }

    fn from_sorted_merged(label: String, mut pairs: Vec<(f64, u64)>) -> Self {
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
        let mut lines: Vec<SpectralLine> = Vec::with_capacity(pairs.len());
        let mut total_dim = 0u64;
        for (eigenvalue_sq, degeneracy) in pairs {
            total_dim += degeneracy;
            match lines.last_mut() {
                Some(last) if last.eigenvalue_sq == eigenvalue_sq => {
                    last.degeneracy += degeneracy;
                }
                _ => lines.push(SpectralLine {
                    eigenvalue_sq,
                    degeneracy,
                }),
            }
        }
        Self {
            label,
            lines,
            total_dim,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Spectral lines, strictly ascending in eigenvalue_sq.
    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    /// Sum of all degeneracies.
    pub fn total_dim(&self) -> u64 {
        self.total_dim
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Largest squared eigenvalue — the finite spectral ceiling.
    pub fn max_eigenvalue_sq(&self) -> Result<f64> {
        self.lines
            .last()
            .map(|line| line.eigenvalue_sq)
            .ok_or_else(|| Error::EmptySpectrum(self.label.clone()))
    }
}
