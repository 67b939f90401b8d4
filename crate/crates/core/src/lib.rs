//! Virtual elastic tether (VET) leader-follower control for an underwater
//! robot guided by a surface robot, with a deterministic simulator for both.
//!
//! The surface robot and the underwater robot each carry an upward/downward
//! camera and a fiducial tag. Each robot steers from where the other's tag
//! sits in its own image; no robot-to-robot communication is involved.

pub mod control;
pub mod error;
pub mod frames;
pub mod metrics;
pub mod perception;
pub mod scenario;
pub mod vehicle;

pub use control::{ControllerMode, PdGains, SubTaskTarget, VetGains};
pub use error::{Error, Result};
pub use frames::{EulerAngles, Pose3, Pose6, RigidTransform, SurfaceJacobianConvention};
pub use metrics::{summarize, RunSummary, SummaryThresholds};
pub use perception::{CameraModel, DropoutModel, DropoutTarget, RegionLabel, TagModel, TagObservation};
pub use scenario::{preset, run, EventKind, PlannerSpec, Record, ScenarioConfig, TrajectoryLog, PRESETS};
pub use vehicle::{ControlInput, Disturbance, RobotKind, VehicleParams};
