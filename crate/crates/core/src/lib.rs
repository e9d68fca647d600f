//! Ray-space geometry for finite-dimensional quantum states.
//!
//! Rays and their Bargmann invariants, Pancharatnam in-phase lifts and
//! geodesic holonomy, the two-state Poincaré sphere, and the reconstruction of
//! a unitary or antiunitary operator from a black-box ray-space isometry.

// `!(x > t)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deformation;
pub mod error;
pub mod hilbert;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod pancharatnam;
pub mod poincare;
pub mod suites;
pub mod wigner;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use hilbert::{
    inner_product, overlap, project_to_ray, random_ray, random_scalar, random_state, ray_distance,
    Ray, StateVector, Tolerances,
};
pub use linalg::{haar_unitary, CMatrix};
pub use oracle::{is_isometry_sampled, IsometryCheck, RayMapOracle};
pub use pancharatnam::{
    bargmann_invariant, discrete_lift, holonomy_phase, horizontal_geodesic, pancharatnam_lift,
    triangle_geometry, triangle_report, BargmannInvariant, GeodesicSegment, GeodesicTriangle,
    TriangleReport, HOLONOMY_SIGN,
};
pub use poincare::{
    bloch_map, check_half_solid_angle, small_circle_phase, solid_angle, SpherePoint,
    ORIENTATION_SIGN,
};
pub use wigner::{
    determine_chi, verify_w1_w2, wigner_lift, ChiKind, LiftedSymmetry, PancharatnamLifter,
};
