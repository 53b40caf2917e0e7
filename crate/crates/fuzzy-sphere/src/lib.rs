//! Spectral geometry of the fuzzy sphere.
//!
//! The fuzzy sphere replaces the algebra of functions on S^2 by
//! (N+1)x(N+1) matrices; its Dirac operator has a finite spectrum, and
//! every geometric statement must be read off that spectrum. This crate
//! builds the spectrum, evaluates heat traces P(T) = Tr exp(-T D^2)
//! over it, and derives the two scale-dependent observables that make
//! the fuzzy sphere interesting: the area function A(Lambda) and the
//! spectral dimension D_s(Lambda), both probed at energy
//! Lambda = 1/sqrt(T).
//!
//! ```
//! use fuzzy_sphere::{spectral_dimension, DiracSpectrum, FuzzySphereParams};
//!
//! let params = FuzzySphereParams::unit(8)?;
//! let spectrum = DiracSpectrum::fuzzy(&params);
//!
//! // 2(2j+1)-fold degenerate lines, finitely many of them.
//! assert_eq!(spectrum.total_dim(), 2 * 8 * 9);
//!
//! // At moderate energies the fuzzy sphere looks roughly two-dimensional;
//! // at high energies the finite spectrum makes the dimension collapse.
//! assert!((spectral_dimension(&spectrum, 2.0)? - 2.0).abs() < 1.2);
//! assert!(spectral_dimension(&spectrum, 1e3)? < 1e-3);
//! # Ok::<(), fuzzy_sphere::Error>(())
//! ```
//!
//! The `algebra` module sits off to the side: it realizes the
//! coordinate matrices x_i explicitly and verifies their commutation
//! relation and radius constraint numerically, pinning down the algebra
//! the spectrum lives on.

pub mod algebra;
pub mod error;
pub mod heat_kernel;
pub mod io;
pub mod matrix;
pub mod observables;
pub mod spectrum;

pub use error::{Error, Result};
pub use heat_kernel::{
    heat_trace, heat_trace_derivative, standard_asymptotic_trace, HeatTracePoint, KahanSum,
};
pub use observables::{
    area, find_peak, spectral_dimension, spectral_dimension_fd, sweep, CurvePoint, EnergyGrid,
    GeometryCurve, Observable, PeakResult,
};
pub use spectrum::{
    fuzzy_energy_levels, DiracSpectrum, FuzzyLevel, FuzzySphereParams, SpectralLine,
};

/// The guide chapters double as doc-tests so their snippets stay
/// compatible with the crate.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(CoordinateAlgebra, "../../../book/src/coordinate-algebra.md");
    chapter!(DiracSpectrum, "../../../book/src/dirac-spectrum.md");
    chapter!(HeatTrace, "../../../book/src/heat-trace.md");
    chapter!(AreaAndDimension, "../../../book/src/area-and-dimension.md");
    chapter!(CommandLine, "../../../book/src/command-line.md");
}
