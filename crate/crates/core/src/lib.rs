//! Exact and numeric tools for building positive polynomials that are not
//! sums of squares by perturbing sums of squares of an ideal basis.

pub mod analysis;
pub mod catalog;
pub mod error;
pub mod hilbert;
pub mod interp;
pub mod interval;
pub mod linalg;
pub mod pointideal;
pub mod poly;
pub mod quadform;
pub mod rational;
pub mod upoly;

pub use error::{Error, Result};
pub use poly::{Monomial, Poly};
pub use quadform::{Definiteness, QuadForm};
pub use rational::Rational;
