//! Exact linear algebra over Q, Z and number-field orders.

pub mod matrix;
pub mod rational;
pub mod ring;
pub mod smith;
pub mod subspace;

pub use matrix::{Matrix, QMatrix, ZMatrix};
pub use rational::{fmt_rational, frac, parse_rational, rat, Rational};
pub use ring::{FieldElement, RingSpec};
pub use smith::{smith_normal_form, Smith};
pub use subspace::{kernel_image, sum_intersect, Subspace};
