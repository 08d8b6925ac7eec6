//! The motion group `M(2)` of the plane, its irreducible unitary
//! representations `π_ξ` on `L²(T)`, and a banded operator calculus for
//! studying the algebras they normalize.
//!
//! Vectors and operators are truncated to Fourier windows `[-N, N]`. Every
//! operator tracks the columns on which its entries are unaffected by the
//! truncation, so identities can be checked exactly on that range, either in
//! floating point or over the Gaussian rationals.
//!
//! ```
//! use motion2_core::{rep::d_rep, operators::commutator, group::ComplexLieBasisElement as X};
//! use motion2_core::{fourier::Window, rep::RepParameter, scalar::ExactScalar};
//! use num_rational::BigRational;
//!
//! let xi = RepParameter::new(BigRational::new(3.into(), 2.into())).unwrap();
//! let w = Window::new(8).unwrap();
//! let m = d_rep::<ExactScalar>(&xi, X::M, w);
//! let mbar = d_rep::<ExactScalar>(&xi, X::Mbar, w);
//! assert!(commutator(&m, &mbar).unwrap().is_zero());
//! ```

pub mod cyclotomic;
pub mod error;
pub mod fourier;
pub mod group;
pub mod inductive;
pub mod io;
pub mod operators;
pub mod rep;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Mode, Result};
pub use fourier::{FourierVector, Window};
pub use group::{ComplexLieBasisElement, GroupElement, LieVector};
pub use operators::{BandedOperator, ValidRange};
pub use rep::RepParameter;
pub use scalar::{ExactScalar, ModeScalar, Scalar};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/group.md")]
    mod group {}
    #[doc = include_str!("../../../book/src/bessel.md")]
    mod bessel {}
    #[doc = include_str!("../../../book/src/fourier.md")]
    mod fourier {}
    #[doc = include_str!("../../../book/src/representation.md")]
    mod representation {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/inductive.md")]
    mod inductive {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
