//! The lattice model of an abelian variety, its endomorphisms, abelian
//! subvarieties, symbolic points and affine maps.

pub mod affine;
pub mod endo;
pub mod point;
pub mod quotient;
pub mod subgroup;
pub mod variety;

pub use affine::{apply_affine, iterate_affine, AffineEndo};
pub use endo::{endomorphism_basis, EndoMatrix};
pub use point::{point_closure, PointDecls, SymbolicPoint};
pub use quotient::{quotient_data, QuotientData};
pub use subgroup::ConnectedSubgroup;
pub use variety::{AbelianVarietySpec, Factor};
