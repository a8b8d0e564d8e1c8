//! Cross-verification: closed forms against the numerical oracle, structure
//! identities, the totally geodesic half-plane, the incompleteness witness and
//! a two-point shooting connector.

pub mod compare;
pub mod report;
pub mod sampling;

pub use self::compare::{compare_closed_numeric, compare_stats, CompareStats, GeodesicIc};
pub use self::report::{Check, Provenance, ValidationReport, Verdict};
pub mod completeness;
pub mod halfplane;
pub mod shooting;
pub mod structure;
pub mod suites;

pub use self::completeness::{incompleteness_witness, incompleteness_witness_for};
pub use self::halfplane::{halfplane_geodesic, totally_geodesic_check, HalfPlaneGeodesic, HalfPlanePoint};
pub use self::shooting::{connect_shooting, ShootingError, ShootingSolution};
pub use self::structure::{structure_validate, structure_validate_with_metric};
pub use self::suites::SuiteConfig;
