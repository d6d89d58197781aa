//! Exact algebra of symplectic spinor valued forms.
//!
//! The crate realizes symplectic Clifford multiplication on the polynomial model
//! of symplectic spinors, the osp(1|2) operators `F±`, `E±`, `H` acting on
//! spinor valued exterior forms, the triangle decomposition of those forms, the
//! symbols of the symplectic twistor operators, and the Ricci/Weyl splitting of
//! symplectic curvature tensors. Everything is computed exactly over a field
//! containing the Gaussian rationals; the code is generic over that field
//! through [`Field`], and [`Scalar`] is the default arbitrary precision choice.

pub mod codec;
pub mod curvature;
pub mod error;
pub mod field;
pub mod forms;
pub mod linalg;
pub mod osp;
pub mod spinor;
pub mod symplectic;
pub mod twistor;
pub mod verify;

use num_complex::Complex;
use num_rational::{BigRational, Ratio};

pub use error::{Error, Result};
pub use field::Field;
pub use linalg::OperatorMatrix;

/// Arbitrary precision Gaussian rational `a + b i`.
pub type Scalar = Complex<BigRational>;

/// Gaussian rational with `i128` numerators and denominators. Overflow panics.
pub type FastScalar = Complex<Ratio<i128>>;

pub type SymplecticSpace = symplectic::SymplecticSpace<Scalar>;
pub type Spinor = spinor::Spinor<Scalar>;
pub type SpinorForm = forms::SpinorForm<Scalar>;
pub type CurvatureTensor = curvature::CurvatureTensor<Scalar>;
pub type RicciTensor = curvature::RicciTensor<Scalar>;
