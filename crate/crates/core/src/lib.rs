//! Regularity measures for d-dimensional simplicial meshes.
//!
//! The kernel computes dihedral angles and d-sines of simplices in any dimension, checks
//! the minimum dihedral angle condition (over all subsimplices) and the generalized
//! d-sine condition on meshes, and audits the equivalence between the two.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and the command
//! line live in the `meshreg` crate.
//!
//! ```
//! use meshreg_core::{generators::regular_simplex, angles::d_sine, ToleranceConfig};
//!
//! let tet = regular_simplex(3, 1.0).unwrap();
//! let s = d_sine(&tet, 0, &ToleranceConfig::default()).unwrap();
//! assert!((s - 4.0 / (3.0 * 3f64.sqrt())).abs() < 1e-12);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod angles;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod mesh;
pub mod regularity;

pub use error::Error;
pub use geometry::{AngleUnit, Facet, Frame, Simplex, ToleranceConfig};
pub use mesh::{Mesh, MeshError};
pub use regularity::{
    CellOutcome, Condition, ConditionVerdict, SimplexQuality, Thresholds, AUDIT_TOLERANCE,
};
