//! Orlicz-space calculus on the integer lattice `Z^d`.
//!
//! The crate is organised bottom-up:
//!
//! * [`young`] builds, conjugates and inverts Young functions and hosts the
//!   named catalog of complementary pairs.
//! * [`finsupp`] and [`orlicz`] provide finitely supported functions and the
//!   modular, Luxemburg and Orlicz norms on them.
//! * [`lattice`] and [`weight`] give the box word length on `Z^d`, ball
//!   enumeration and the polynomial / subexponential weight families.
//! * [`algebra`] implements sparse convolution and the empirical
//!   boundedness scans for weighted Orlicz algebras.
//! * [`amenability`] holds homomorphisms, the point derivation built from
//!   them, the diagnostics around it and the weak-amenability classifier.
//!
//! Every experiment that draws random functions is seeded; identical seeds
//! give identical results regardless of thread scheduling.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod amenability;
pub mod error;
pub mod finsupp;
pub mod grid;
pub mod lattice;
pub mod orlicz;
pub mod quad;
pub mod sampling;
pub mod series;
pub mod weight;
pub mod young;

pub use error::{Error, Result};
pub use finsupp::FinSuppFn;
pub use lattice::Point;
pub use num_complex::Complex64;
pub use weight::{Weight, WeightFamily, WeightSpec};
pub use young::{ComplementaryPair, YoungFunction, YoungSpec};
