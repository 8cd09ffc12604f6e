//! Exact-arithmetic kernel for finite-dimensional quasi-Hopf algebras
//! presented by structure constants: axiom validation, derived structure
//! elements, bimodules and coinvariants, integrals and cointegrals,
//! Fourier transforms, semisimplicity tests, and diagonal crossed
//! products. All arithmetic is exact over ℚ or GF(p).

pub mod algebra;
pub mod battery;
pub mod bimodule;
pub mod bitensor;
pub mod cocentral;
pub mod construct;
pub mod crossed;
pub mod error;
pub mod integral;
pub mod io;
pub mod linalg;
pub mod quasihopf;
pub mod report;
pub mod scalar;

pub use algebra::{Algebra, DualElement, Element, LinMap};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use quasihopf::QuasiHopf;
pub use report::ValidationReport;
pub use scalar::{FieldSpec, Scalar};
