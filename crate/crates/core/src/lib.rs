//! Exact representation numbers, Gauss sums, generalized divisor sums and
//! Dirichlet series for ideals of real quadratic fields of odd discriminant.

pub mod arith;
pub mod dirichlet;
pub mod divisor;
pub mod error;
pub mod gauss;
pub mod ideals;
pub mod quadfield;
pub mod repnum;
pub mod verify;

pub use arith::{Factorization, Sign};
pub use dirichlet::{SeriesEval, TheoremReport};
pub use divisor::{DiscDecomposition, SigmaQuery};
pub use error::{Error, Result};
pub use gauss::{ExactGaussValue, ExponentVector};
pub use ideals::{FracIdeal, GenusFingerprint, PrimIdeal, PrimeIdeal, ResidueProfile, SplitKind};
pub use quadfield::{Discriminant, FieldElem, QuadElem};
pub use repnum::{RepCounter, RepQuery};

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
