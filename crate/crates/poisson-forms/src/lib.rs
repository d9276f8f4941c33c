//! Exact-arithmetic construction of Poisson transform kernels for
//! differential forms on generalized flag manifolds `G/P`, together with a
//! floating-point instantiation for real hyperbolic space.
//!
//! The algebraic half of the crate works entirely with matrices over
//! arbitrary-precision rationals: semisimple Lie algebras in a matrix
//! realization, restricted root decompositions, |k|-gradings induced by
//! parabolic subalgebras, and the bigraded exterior algebra of the
//! `M`-representation `g/m`. On top of that it builds the distinguished
//! degree-preserving kernels `phi_k = *_K(tau ∧ (d_P E*)^(n-k))` and checks
//! their defining properties (bidegree, m-invariance, coclosedness) exactly.
//!
//! The numeric half instantiates `G = SO(n+1,1)` in floating point: Iwasawa
//! decompositions, the classical Poisson kernel `e^{-(λ+ρ)(H(g⁻¹k))}`, and
//! quadrature evaluation of the scalar transform on the boundary sphere.

pub mod cli;
pub mod config;
pub mod error;
pub mod forms;
pub mod grading;
pub mod hyperbolic;
pub mod kernel;
pub mod lie;
pub mod linalg;
pub mod quadrature;
pub mod quotient;
pub mod rational;
pub mod roots;

pub use error::{PfError, Result};
pub use forms::BigradedForm;
pub use grading::{Grading, Parabolic};
pub use kernel::KernelReport;
pub use lie::{AlgebraSpec, Family, LieAlgebra};
pub use quotient::{MetricData, QuotientModule};
pub use rational::Q;
pub use roots::RootDatum;
