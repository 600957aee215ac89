//! Exact two-particle eigensolutions of the δ-interacting Schrödinger
//! operator on a star graph with Kirchhoff vertex conditions.
//!
//! Every function is represented exactly as a piecewise trigonometric
//! polynomial with rational coefficients ([`wave::Wave`]); the matching
//! conditions are exact linear functionals ([`conditions`]); and the solution
//! families are constructed, enumerated and certified with exact rational
//! linear algebra ([`solutions`]). [`numeric`] is an independent
//! floating-point oracle for the same conditions.

pub mod basis;
pub mod conditions;
pub mod error;
pub mod linalg;
pub mod numeric;
pub mod rational;
pub mod solutions;
pub mod wave;

pub use error::{Error, Result};
pub use rational::Rational;
pub use wave::{Assign, CoeffVector, Params, Region, Trig, TrigMonomial, Wave};
