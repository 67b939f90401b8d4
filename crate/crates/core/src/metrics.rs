//! Formation metrics computed from a finished [`TrajectoryLog`].

use serde::{Deserialize, Serialize};

use crate::control::ControllerMode;
use crate::error::{Error, Result};
use crate::frames::{Pose3, Pose6, RigidTransform};
use crate::scenario::{ScenarioConfig, TrajectoryLog};

/// Start-up period ignored by [`mission_success`] (s).
pub const TRANSIENT: f64 = 10.0;
/// Minimum sustained duration for recovery and settling (s).
pub const EVIDENCE_WINDOW: f64 = 2.0;

pub fn projected_distance(u: &Pose6, s: &Pose3) -> f64 {
    (u.x - s.x).hypot(u.y - s.y)
}

/// Index of the first record of the trailing run where `ok` holds, provided
/// that run lasts at least [`EVIDENCE_WINDOW`].
fn settled_from<F>(log: &TrajectoryLog, from: f64, ok: F) -> Option<usize>
where
    F: Fn(&crate::scenario::Record) -> bool,
{
    let start = log.records.iter().position(|r| r.t >= from)?;
    let tail = &log.records[start..];
    let first_ok = match tail.iter().rposition(|r| !ok(r)) {
        None => 0,
        Some(i) => i + 1,
    };
    let last_t = tail.last()?.t;
    let candidate = tail.get(first_ok)?;
    (last_t - candidate.t >= EVIDENCE_WINDOW - 1e-9).then_some(start + first_ok)
}

/// Time from `perturbation_end` until the projected distance drops below
/// `threshold` for good (and for at least two seconds). Zero if it never
/// exceeds the threshold after the perturbation.
pub fn recovery_time(log: &TrajectoryLog, threshold: f64, perturbation_end: f64) -> Option<f64> {
    let i = settled_from(log, perturbation_end, |r| r.projected_distance < threshold)?;
    Some((log.records[i].t - perturbation_end).max(0.0))
}

/// Final waypoint reached and the formation held below `threshold` after
/// the first [`TRANSIENT`] seconds.
pub fn mission_success(log: &TrajectoryLog, threshold: f64) -> bool {
    if log.waypoint_count == 0 {
        return true;
    }
    log.final_waypoint_reached
        && log
            .records
            .iter()
            .filter(|r| r.t >= TRANSIENT)
            .all(|r| r.projected_distance < threshold)
}

/// Underwater body pose from the surface robot's pose, its camera mount,
/// the observed camera ← tag transform and the underwater tag mount.
pub fn pose_from_observation(
    world_from_body_s: &RigidTransform,
    body_from_camera_s: &RigidTransform,
    camera_from_tag_su: &RigidTransform,
    body_from_tag_u: &RigidTransform,
) -> Pose6 {
    let world_from_tag = world_from_body_s
        .compose(body_from_camera_s)
        .compose(camera_from_tag_su);
    Pose6::from_transform(&world_from_tag.compose(&body_from_tag_u.inverse()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryThresholds {
    pub distance: f64,
    /// Fraction of the command limits under which a robot counts as settled.
    pub settle_fraction: f64,
    /// Tether state tolerance for settling (px).
    pub settle_xi: f64,
    pub u_max_linear: f64,
    pub u_max_angular: f64,
}

impl SummaryThresholds {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        Self {
            distance: cfg.distance_threshold,
            settle_fraction: 0.05,
            settle_xi: 10.0,
            u_max_linear: cfg.underwater.params.velocity_bound_linear,
            u_max_angular: cfg.underwater.params.velocity_bound_angular,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub controller_mode: ControllerMode,
    pub duration: f64,
    pub distance_threshold: f64,
    pub max_projected_distance: f64,
    pub max_projected_distance_after_transient: f64,
    pub time_of_los_loss: Option<f64>,
    pub perturbation_end: Option<f64>,
    pub recovery_time_after_perturbation: Option<f64>,
    pub mission_success: bool,
    pub final_waypoint_reached: bool,
    pub final_tether_state: Option<f64>,
    pub settling_time: Option<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn summarize(
    log: &TrajectoryLog,
    name: &str,
    mode: ControllerMode,
    th: &SummaryThresholds,
) -> Result<RunSummary> {
    if log.records.len() < 2 {
        return Err(Error::EmptyLog);
    }
    let max_of = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);
    let max_d = max_of(&mut log.records.iter().map(|r| r.projected_distance));
    let max_after = max_of(
        &mut log
            .records
            .iter()
            .filter(|r| r.t >= TRANSIENT)
            .map(|r| r.projected_distance),
    );
    let los = log
        .records
        .iter()
        .find(|r| !(r.obs_us.detected && r.obs_su.detected))
        .map(|r| r.t);
    let pe = log.perturbation_end();
    let (lin, ang) = (
        th.settle_fraction * th.u_max_linear,
        th.settle_fraction * th.u_max_angular,
    );
    let settled = settled_from(log, 0.0, |r| {
        norm(&r.u_total[..3]) < lin
            && norm(&r.u_total[3..]) < ang
            && norm(&r.s_total[..2]) < lin
            && r.s_total[2].abs() < ang
            && r.xi_us.is_some_and(|x| x <= th.settle_xi)
            && r.xi_su.is_some_and(|x| x <= th.settle_xi)
    })
    .map(|i| log.records[i].t);
    let last = log.records.last().ok_or(Error::EmptyLog)?;
    Ok(RunSummary {
        name: name.to_string(),
        controller_mode: mode,
        duration: last.t,
        distance_threshold: th.distance,
        max_projected_distance: max_d,
        max_projected_distance_after_transient: max_after,
        time_of_los_loss: los,
        perturbation_end: pe,
        recovery_time_after_perturbation: pe.and_then(|pe| recovery_time(log, th.distance, pe)),
        mission_success: mission_success(log, th.distance),
        final_waypoint_reached: log.final_waypoint_reached,
        final_tether_state: last.xi_us,
        settling_time: settled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::EulerAngles;
    use crate::perception::{estimate_tag_pose, project_tag, CameraModel, TagModel, TagObservation};
    use crate::scenario::Record;
    use approx::assert_abs_diff_eq;
    use nalgebra::Vector3;
    use proptest::prelude::*;

    fn record(t: f64, d: f64) -> Record {
        Record {
            t,
            underwater: Pose6::new(d, 0.0, -1.0, 0.0, 0.0, 0.0),
            surface: Pose3::default(),
            nu_underwater: [0.0; 6],
            nu_surface: [0.0; 3],
            u_subtask: [0.0; 6],
            u_xi: [0.0; 6],
            s_subtask: [0.0; 3],
            s_xi: [0.0; 3],
            u_total: [0.0; 6],
            s_total: [0.0; 3],
            obs_us: TagObservation { detected: true, ..TagObservation::default() },
            obs_su: TagObservation { detected: true, ..TagObservation::default() },
            region_us: None,
            region_su: None,
            xi_us: Some(0.0),
            xi_su: Some(0.0),
            projected_distance: d,
            events: vec![],
        }
    }

    fn log_of(dist: impl Fn(f64) -> f64, duration: f64) -> TrajectoryLog {
        let dt = 0.1;
        let n = (duration / dt).round() as usize;
        TrajectoryLog {
            dt,
            records: (0..=n).map(|k| record(k as f64 * dt, dist(k as f64 * dt))).collect(),
            events: vec![],
            waypoint_count: 1,
            final_waypoint_reached: true,
            perturbation_windows: vec![[5.0, 7.0]],
        }
    }

    #[test]
    fn projected_distance_examples() {
        let u = Pose6::new(1.0, 2.0, -1.0, 0.0, 0.0, 0.0);
        assert_eq!(projected_distance(&u, &Pose3::new(1.0, 2.0, 0.3)), 0.0);
        assert_abs_diff_eq!(
            projected_distance(&Pose6::new(0.3, 0.4, -5.0, 0.0, 0.0, 0.0), &Pose3::default()),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn recovery_examples() {
        let calm = log_of(|_| 0.1, 20.0);
        assert_eq!(recovery_time(&calm, 0.6, 7.0), Some(0.0));

        let broken = log_of(|t| if t > 6.0 { 1.0 } else { 0.1 }, 20.0);
        assert_eq!(recovery_time(&broken, 0.6, 7.0), None);

        let recovers = log_of(|t| if (6.0..10.0).contains(&t) { 0.8 } else { 0.1 }, 20.0);
        let r = recovery_time(&recovers, 0.6, 7.0).unwrap();
        assert_abs_diff_eq!(r, 3.0, epsilon = 1e-9);

        // dips below for a moment at the very end: not enough evidence
        let late = log_of(|t| if t < 19.5 { 0.8 } else { 0.1 }, 20.0);
        assert_eq!(recovery_time(&late, 0.6, 7.0), None);
    }

    #[test]
    fn mission_examples() {
        assert!(mission_success(&log_of(|_| 0.1, 20.0), 0.6));
        assert!(!mission_success(&log_of(|t| if t > 15.0 { 0.7 } else { 0.1 }, 20.0), 0.6));
        // large distance inside the transient is ignored
        assert!(mission_success(&log_of(|t| if t < 5.0 { 0.9 } else { 0.1 }, 20.0), 0.6));
        let mut unfinished = log_of(|_| 0.1, 20.0);
        unfinished.final_waypoint_reached = false;
        assert!(!mission_success(&unfinished, 0.6));
        let mut empty = unfinished.clone();
        empty.waypoint_count = 0;
        assert!(mission_success(&empty, 0.6));
    }

    #[test]
    fn summarize_examples() {
        let th = SummaryThresholds {
            distance: 0.6,
            settle_fraction: 0.05,
            settle_xi: 10.0,
            u_max_linear: 0.1,
            u_max_angular: 0.2,
        };
        let log = log_of(|t| if (6.0..10.0).contains(&t) { 0.8 } else { 0.1 }, 20.0);
        let s = summarize(&log, "x", ControllerMode::Vet, &th).unwrap();
        assert_eq!(s.settling_time, Some(0.0));
        assert_eq!(s.max_projected_distance, 0.8);
        assert!(s.recovery_time_after_perturbation.unwrap() <= 5.0);
        assert_eq!(summarize(&log, "x", ControllerMode::Vet, &th).unwrap(), s);

        let mut single = log.clone();
        single.records.truncate(1);
        assert_eq!(summarize(&single, "x", ControllerMode::Vet, &th).unwrap_err(), Error::EmptyLog);
    }

    #[test]
    fn pose_composition_examples() {
        let id = RigidTransform::identity();
        assert_eq!(pose_from_observation(&id, &id, &id, &id), Pose6::default());
        let t = RigidTransform::from_translation;
        let p = pose_from_observation(&t(1.0, 0.0, 0.0), &t(0.0, 1.0, 0.0), &t(0.0, 0.0, 1.0), &id);
        assert_abs_diff_eq!(p.position(), Vector3::new(1.0, 1.0, 1.0), epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(a in prop::array::uniform2(-3.0f64..3.0), b in prop::array::uniform2(-3.0f64..3.0),
                                c in prop::array::uniform2(-3.0f64..3.0)) {
            let u = |p: [f64; 2]| Pose6::new(p[0], p[1], -1.0, 0.0, 0.0, 0.0);
            let s = |p: [f64; 2]| Pose3::new(p[0], p[1], 0.0);
            let d = |p: [f64; 2], q: [f64; 2]| projected_distance(&u(p), &s(q));
            prop_assert!(d(a, b) >= 0.0);
            prop_assert!((d(a, b) - d(b, a)).abs() < 1e-12);
            prop_assert!(d(a, c) <= d(a, b) + d(b, c) + 1e-12);
        }

        #[test]
        fn observation_round_trip(dx in -0.25f64..0.25, dy in -0.2f64..0.2, z in -1.4f64..-0.7,
                                  psi_u in -3.1f64..3.1, psi_s in -3.1f64..3.1,
                                  phi in -0.1f64..0.1, theta in -0.1f64..0.1,
                                  sx in -1.0f64..2.0, sy in -1.0f64..2.0) {
            let s = Pose3::new(sx, sy, psi_s);
            let truth = Pose6 { x: sx + dx, y: sy + dy, z, attitude: EulerAngles::new(phi, theta, psi_u) };
            let (cam, tag) = (CameraModel::surface_default(), TagModel::underwater_default());
            let obs = project_tag(&s.to_transform(), &truth.to_transform(), &cam, &tag, 0.0);
            prop_assume!(obs.detected);
            let c_t = estimate_tag_pose(&obs, &cam, &tag).unwrap();
            let est = pose_from_observation(&s.to_transform(), &cam.mount, &c_t, &tag.mount);
            prop_assert!((est.position() - truth.position()).norm() < 1e-6);
            let r_err = est.to_transform().rotation.transpose() * truth.to_transform().rotation;
            prop_assert!((r_err - nalgebra::Matrix3::identity()).amax() < 1e-6);
        }
    }
}
