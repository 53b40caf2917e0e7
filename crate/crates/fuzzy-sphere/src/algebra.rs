//! Coordinate algebra of the fuzzy sphere.
//!
//! The fuzzy sphere of size N is the matrix algebra generated by three
//! coordinates x_i = (2l/sqrt(N(N+2))) J_i, where the J_i form the
//! spin-N/2 irreducible representation of su(2) on C^{N+1}. They satisfy
//!
//! ```text
//! [x_i, x_j] = i (2l/sqrt(N(N+2))) eps_ijk x_k,      x_i x_i = l^2
//! ```
//!
//! with l the sphere radius. This module builds the generators and
//! measures how well a concrete set of coordinate matrices satisfies
//! those two relations. Everything downstream works purely with the
//! Dirac spectrum, so this module is verification machinery: it exists
//! to pin the algebra down numerically, not to feed the trace code.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{commutator, ComplexMatrix};
use crate::spectrum::FuzzySphereParams;

/// The three fuzzy-sphere coordinate matrices together with the
/// parameters they were built from.
///
/// Normally produced by [`fuzzy_coordinates`]; the fields are public so
/// that deliberately broken inputs can be fed to the residual checks.
#[derive(Debug, Clone)]
pub struct CoordinateMatrices {
    /// Truncation parameter N; the matrices act on C^{N+1}.
    pub n: u32,
    /// Sphere radius l.
    pub radius: f64,
    pub x1: ComplexMatrix,
    pub x2: ComplexMatrix,
    pub x3: ComplexMatrix,
}

impl CoordinateMatrices {
    fn coords(&self) -> [&ComplexMatrix; 3] {
        [&self.x1, &self.x2, &self.x3]
    }

    /// Scale factor 2l/sqrt(N(N+2)) appearing in the commutation relation.
    pub fn structure_scale(&self) -> f64 {
        let n = f64::from(self.n);
        2.0 * self.radius / (n * (n + 2.0)).sqrt()
    }

    /// Largest Hermiticity violation over the three coordinates.
    pub fn hermiticity_error(&self) -> f64 {
        self.coords()
            .iter()
            .map(|x| x.hermiticity_error())
            .fold(0.0, f64::max)
    }
}

/// Spin-N/2 su(2) generators (J1, J2, J3) on C^{N+1}.
///
/// J3 is diagonal with entries N/2, N/2-1, ..., -N/2. J1 and J2 come
/// from the ladder operators, whose only nonzero entries are
/// sqrt(k(N-k+1)) on the off-diagonals, so all three are Hermitian by
/// construction and satisfy [J_i, J_j] = i eps_ijk J_k up to rounding.
pub fn su2_generators(n: u32) -> Result<[ComplexMatrix; 3]> {
    if n == 0 {
        return Err(Error::ZeroTruncation);
    }
    let dim = n as usize + 1;
    let j = f64::from(n) / 2.0;

    let diag: Vec<f64> = (0..dim).map(|k| j - k as f64).collect();
    let j3 = ComplexMatrix::from_real_diag(&diag);

    // Ladder amplitudes: J+ |m> = sqrt(k (N - k + 1)) |m+1> for the state
    // with m = j - k, i.e. entry (k-1, k) of J+.
    let mut j1 = ComplexMatrix::zeros(dim);
    let mut j2 = ComplexMatrix::zeros(dim);
    for k in 1..dim {
        let amp = (k as f64 * (n as f64 - k as f64 + 1.0)).sqrt();
        j1[(k - 1, k)] = Complex64::new(amp / 2.0, 0.0);
        j1[(k, k - 1)] = Complex64::new(amp / 2.0, 0.0);
        j2[(k - 1, k)] = Complex64::new(0.0, -amp / 2.0);
        j2[(k, k - 1)] = Complex64::new(0.0, amp / 2.0);
    }

    Ok([j1, j2, j3])
}

/// Coordinate matrices x_i = (2l/sqrt(N(N+2))) J_i for the given N and radius.
pub fn fuzzy_coordinates(params: &FuzzySphereParams) -> Result<CoordinateMatrices> {
    let [j1, j2, j3] = su2_generators(params.n())?;
    let n = f64::from(params.n());
    let scale = Complex64::new(2.0 * params.radius() / (n * (n + 2.0)).sqrt(), 0.0);
    Ok(CoordinateMatrices {
        n: params.n(),
        radius: params.radius(),
        x1: j1.scale(scale),
        x2: j2.scale(scale),
        x3: j3.scale(scale),
    })
}

/// Worst-case violation of the commutation relation
/// [x_i, x_j] = i (2l/sqrt(N(N+2))) eps_ijk x_k, in the max-entry norm.
///
/// Returns the max over the three index pairs (1,2), (2,3), (3,1); an
/// exact representation gives 0 up to rounding.
pub fn commutator_residual(coords: &CoordinateMatrices) -> f64 {
    let x = coords.coords();
    let i_scale = Complex64::new(0.0, coords.structure_scale());
    // (i, j, k) running over the cyclic triples with eps_ijk = +1.
    [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        .iter()
        .map(|&(i, j, k)| commutator(x[i], x[j]).sub(&x[k].scale(i_scale)).max_abs())
        .fold(0.0, f64::max)
}

/// Max-entry norm of (x1^2 + x2^2 + x3^2) - l^2 I.
pub fn casimir_residual(coords: &CoordinateMatrices) -> f64 {
    let sum_sq = coords
        .coords()
        .iter()
        .map(|x| x.mul(x))
        .reduce(|a, b| a.add(&b))
        .expect("three coordinates");
    let l_sq = Complex64::new(coords.radius * coords.radius, 0.0);
    sum_sq
        .sub(&ComplexMatrix::identity(sum_sq.dim()).scale(l_sq))
        .max_abs()
}
