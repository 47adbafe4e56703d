//! Ground truth on torsion models `A[N] = (Z/N)^{2g}`.

pub mod checks;
pub mod lattice;
pub mod model;
pub mod modular;

pub use checks::{
    commutant_basis, dense_sampling_check, monoid_orbit, orbit_subgroup, subvariety_hull,
    verify_closed_form, verify_fibration, CheckMode, Counterexample, DenseCheck, FibrationCheck,
    DEFAULT_EXHAUSTIVE_BOUND,
};
pub use lattice::ModLattice;
pub use model::{compatible_modulus, iterate_orbit, reduce_mod, FiniteModel, ModAffine, SampledPoint};
pub use modular::ModMatrix;
