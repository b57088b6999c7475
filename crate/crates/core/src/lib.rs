//! Interval resolutions of persistence modules over finite posets.
//!
//! Modules are representations of the Hasse diagram over a prime field
//! `F_p`, subject to full commutativity. The crate computes minimal interval
//! resolutions, Auslander-Reiten translates and the interval resolution
//! global dimension, and on commutative ladders the compressed
//! multiplicities obtained through a fixed zigzag.

pub mod approx;
pub mod artrans;
pub mod error;
pub mod interval;
pub mod json;
pub mod ladder;
pub mod linalg;
pub mod module;
pub mod poset;
pub mod testkit;

pub use approx::{
    euler_profile, interval_dimension, interval_resolution, minimal_right_interval_approximation,
    verify_resolution, ApproximationStep, IntervalResolution, SoundnessReport,
};
pub use artrans::{intgldim, intgldim_report, tau, tau_inverse, IntgldimReport};
pub use error::{Error, Result};
pub use interval::{enumerate_intervals, Interval, IntervalPoset, StairRow};
pub use ladder::{compress, compressed_multiplicity, interval_approximation_delta, CompressedProfile, ZigzagModule};
pub use linalg::{Echelon, Field, FpMatrix};
pub use module::{cokernel, hom_basis, hom_dim, kernel, HomBasis, ModuleMorphism, PersistenceModule, Transfers};
pub use poset::{Poset, VertexSet};
