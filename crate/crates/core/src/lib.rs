//! Two-legged walking on a soluble inverted-pendulum model.
//!
//! The standing leg is a rigid inverted pendulum whose stride time has a
//! closed form in incomplete elliptic integrals of the first kind. The
//! trailing leg is massless and articulated at the knee; its motion is
//! prescribed in three phases so the foot clears the ground. Foot strikes are
//! inelastic and an actuator restores the pendular energy at every
//! transition. Walks run over flat ground or any continuous surface profile.

// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod impact;
pub mod kinematics;
pub mod numeric;
pub mod pendulum;
pub mod special;
pub mod sweeps;
pub mod terrain;

pub use engine::{reverse_trace, simulate_stride, walk, StrideOptions, StrideRecord, WalkTrace};
pub use error::{GaitError, Result};
pub use geometry::{rotation, PlanarVector, Rotation2, Vec2};
pub use pendulum::{critical_energy, stride_length, stride_speed, stride_time, GaitParams, RobotParams};
pub use terrain::{make_surface, Surface, SurfaceDescriptor};
