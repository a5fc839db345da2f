//! Exact synthetic differential geometry on nilpotent infinitesimals.
//!
//! Points of `D` are modelled by generators of Weil algebras. On top of that
//! the crate builds microcubes and their strong differences, the doubly
//! dualized convolution calculus with its Lie bracket of icons, forms and
//! semiforms with the Frölicher-Nijenhuis bracket, and compactly supported
//! distributions with flows.

pub mod distributions;
pub mod doc;
pub mod error;
pub mod forms;
pub mod functional;
pub mod harness;
pub mod icon;
pub mod microcube;
pub mod perm;
pub mod poly;
pub mod rational;
pub mod sample;
pub mod scalar;
pub mod suites;
pub mod weil;

pub use error::{Error, Result};
pub use forms::{Kernel, Normalization, Semiform};
pub use functional::{Domain, Functional, Orientation};
pub use icon::Icon;
pub use microcube::{JacobiCubes, Microcube, TangentVector};
pub use perm::Permutation;
pub use poly::{Polynomial, TestMap};
pub use scalar::{rat, Rational, Scalar, ScalarMode};
pub use weil::{GeneratorContext, Point, Weil};
