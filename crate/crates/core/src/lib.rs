//! Lightlike hypersurfaces of flat indefinite almost contact metric spaces.
//!
//! The ambient space is `R^(2n+1)` with metric
//! `diag(s_1, s_1, ..., s_n, s_n, 1)`, the paired almost complex rotation
//! `phi` on the first `2n` coordinates, `zeta = e_(2n+1)` and `eta = dz`.
//! A hypersurface `F = c` is lightlike where its normal `xi = grad_g F` is
//! null. The crate builds a null frame (`xi`, transversal `N`, screen),
//! splits `zeta` against it, classifies the hypersurface as ascreen or
//! inascreen, constructs the induced `(phi, omega, g~)` structure and
//! extracts the second fundamental forms by finite differences.
//!
//! ```
//! use lightlike::classify::{classify, decompose_zeta};
//! use lightlike::hypersurface::{build_null_frame, Hypersurface, ScreenPolicy};
//! use lightlike::linalg::Vector;
//! use lightlike::structure::AmbientStructure;
//!
//! let s = AmbientStructure::standard_model(2, &[-1, 1]).unwrap();
//! let h = Hypersurface::affine(Vector::from_row_slice(&[-1.0, 0.0, 1.0, 0.0, 0.0]), 0.0, 0.0);
//! let frame = build_null_frame(&s, &h, &Vector::zeros(5), &ScreenPolicy::BasisScan, 1e-9).unwrap();
//! let dec = decompose_zeta(&s, &frame, 1e-9).unwrap();
//! assert_eq!(classify(&dec, 1e-9).unwrap().describe(), "inascreen, tangential");
//! ```

pub mod classify;
pub mod cli;
pub mod error;
pub mod gauss_weingarten;
pub mod hypersurface;
pub mod induced;
pub mod linalg;
pub mod sampling;
pub mod structure;

pub use error::{Error, Result};
