//! Exact decision procedures for the orbit-closure dichotomy of commuting
//! affine endomorphisms on abelian varieties given in lattice form.

pub mod engine;
pub mod error;
pub mod exact;
pub mod intpoly;
pub mod io;
pub mod model;
pub mod oracle;
pub mod reduction;

pub use engine::{analyze, analyze_cyclic, analyze_monoid, FibrationCertificate, Outcome, Verdict};
pub use error::{Error, Result};
pub use io::{CertificateFile, Report, Scenario, ScenarioFile, VerificationFile};
pub use model::{AbelianVarietySpec, AffineEndo, ConnectedSubgroup, EndoMatrix, PointDecls, SymbolicPoint};
