//! Sub-task PD controllers, the visual elastic tether law, and the one-way
//! IBVS baseline.

use nalgebra::{DVector, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{wrap_angle, Pose3, RigidTransform};
use crate::perception::{
    classify_region, normalized_offset, tag_geometry, tether_state, CameraModel, RegionLabel,
    TagObservation, TetherState,
};
use crate::vehicle::{saturate, ControlInput, RobotKind, VehicleParams};

/// Time constant of the low-pass on the tag-center velocity (s).
pub const CENTER_RATE_TAU: f64 = 0.1;
/// Half-life of the held command after a detection loss (s).
pub const HOLD_HALF_LIFE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControllerMode {
    #[default]
    Vet,
    Baseline,
}

/// Diagonal PD gains, one entry per degree of freedom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdGains {
    pub kp: Vec<f64>,
    pub kd: Vec<f64>,
}

impl PdGains {
    pub fn underwater(kp: f64, kd: f64) -> Self {
        Self {
            kp: vec![0.0, 0.0, kp, kp, kp, 0.0],
            kd: vec![0.0, 0.0, kd, kd, kd, 0.0],
        }
    }

    pub fn surface(kp: f64, kd: f64) -> Self {
        Self {
            kp: vec![kp; 3],
            kd: vec![kd; 3],
        }
    }

    pub fn validate(&self, kind: RobotKind) -> Result<()> {
        let n = kind.dof();
        if self.kp.len() != n || self.kd.len() != n {
            return Err(Error::ConfigInvalid(format!("PD gains need {n} entries")));
        }
        if self.kp.iter().chain(&self.kd).any(|&g| !(g >= 0.0 && g.is_finite())) {
            return Err(Error::ConfigInvalid("PD gains must be non-negative".into()));
        }
        if kind == RobotKind::Underwater
            && [0, 1, 5].iter().any(|&i| self.kp[i] != 0.0 || self.kd[i] != 0.0)
        {
            return Err(Error::ConfigInvalid(
                "underwater PD gains for x, y and yaw must be zero".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VetGains {
    pub k_safe_p: f64,
    pub k_elastic_p: f64,
    pub k_elastic_d: f64,
    pub k_psi: f64,
    pub u_max_x: f64,
    pub u_max_y: f64,
}

impl VetGains {
    pub fn new(k_safe_p: f64, k_elastic_p: f64, k_elastic_d: f64) -> Self {
        Self {
            k_safe_p,
            k_elastic_p,
            k_elastic_d,
            k_psi: 0.5,
            u_max_x: 0.1,
            u_max_y: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.k_safe_p,
            self.k_elastic_p,
            self.k_elastic_d,
            self.k_psi,
            self.u_max_x,
            self.u_max_y,
        ];
        if all.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::ConfigInvalid("VET gains must be non-negative".into()));
        }
        if !(self.k_safe_p < self.k_elastic_p) {
            return Err(Error::ConfigInvalid(
                "k_safe_p must be smaller than k_elastic_p".into(),
            ));
        }
        Ok(())
    }
}

impl Default for VetGains {
    fn default() -> Self {
        Self::new(0.5, 1.0, 0.15)
    }
}

/// Desired sub-task state. The underwater robot tracks `z_d, phi_d, theta_d`,
/// the surface robot `x_d, y_d, psi_d`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SubTaskTarget {
    #[serde(default)]
    pub x_d: f64,
    #[serde(default)]
    pub y_d: f64,
    #[serde(default)]
    pub z_d: f64,
    #[serde(default)]
    pub phi_d: f64,
    #[serde(default)]
    pub theta_d: f64,
    #[serde(default)]
    pub psi_d: f64,
}

impl SubTaskTarget {
    pub fn planar(x_d: f64, y_d: f64, psi_d: f64) -> Self {
        Self {
            x_d,
            y_d,
            psi_d,
            ..Self::default()
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.x_d, self.y_d, self.z_d, self.phi_d, self.theta_d, self.psi_d]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Everything the underwater robot can sense about itself: depth, roll,
/// pitch and their rates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DepthAttitude {
    pub z: f64,
    pub phi: f64,
    pub theta: f64,
    pub z_rate: f64,
    pub phi_rate: f64,
    pub theta_rate: f64,
}

/// Camera-frame tether command `(u_x, u_y, u_ψ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VetCommand {
    pub u: Vector3<f64>,
    pub region: Option<RegionLabel>,
    pub detected: bool,
}

impl VetCommand {
    pub fn zero(detected: bool) -> Self {
        Self {
            u: Vector3::zeros(),
            region: None,
            detected,
        }
    }
}

pub fn subtask_control_underwater(
    m: &DepthAttitude,
    target: &SubTaskTarget,
    gains: &PdGains,
) -> ControlInput {
    let e = [
        target.z_d - m.z,
        wrap_angle(target.phi_d - m.phi),
        wrap_angle(target.theta_d - m.theta),
    ];
    let e_dot = [-m.z_rate, -m.phi_rate, -m.theta_rate];
    let mut u = DVector::zeros(6);
    for k in 0..3 {
        let i = k + 2;
        u[i] = gains.kp[i] * e[k] + gains.kd[i] * e_dot[k];
    }
    ControlInput(u)
}

/// Planar PD toward `target`; the position error is expressed in the body
/// frame so that it matches the command axes.
pub fn subtask_control_surface(
    pose: &Pose3,
    nu: &Vector3<f64>,
    target: &SubTaskTarget,
    gains: &PdGains,
) -> ControlInput {
    let (s, c) = pose.psi.sin_cos();
    let (dx, dy) = (target.x_d - pose.x, target.y_d - pose.y);
    let e = [c * dx + s * dy, -s * dx + c * dy, wrap_angle(target.psi_d - pose.psi)];
    ControlInput(DVector::from_iterator(
        3,
        (0..3).map(|i| gains.kp[i] * e[i] - gains.kd[i] * nu[i]),
    ))
}

/// Scales the planar part of a surface command down to norm `speed`.
pub fn limit_planar_speed(u: &ControlInput, speed: f64) -> ControlInput {
    let mut out = u.clone();
    let n = out.0[0].hypot(out.0[1]);
    if n > speed {
        let k = speed / n;
        out.0[0] *= k;
        out.0[1] *= k;
    }
    out
}

/// One evaluation of the tether law on a detected observation.
///
/// `center_rate` is the tag-center velocity in normalized image units per
/// second.
pub fn vet_law(
    obs: &TagObservation,
    center_rate: &Vector2<f64>,
    gains: &VetGains,
    cam: &CameraModel,
) -> VetCommand {
    let Ok((center, l, h)) = tag_geometry(obs) else {
        return VetCommand::zero(false);
    };
    let region = classify_region(&center, l, h, cam);
    let e = normalized_offset(&center, cam);
    let xy = match region {
        RegionLabel::Safe => e * gains.k_safe_p,
        RegionLabel::Elastic => e * gains.k_elastic_p + center_rate * gains.k_elastic_d,
        RegionLabel::Danger => {
            let n = e.norm();
            if n > 0.0 {
                Vector2::new(gains.u_max_x * e.x / n, gains.u_max_y * e.y / n)
            } else {
                Vector2::zeros()
            }
        }
    };
    VetCommand {
        u: Vector3::new(
            xy.x.clamp(-gains.u_max_x, gains.u_max_x),
            xy.y.clamp(-gains.u_max_y, gains.u_max_y),
            gains.k_psi * obs.camera_yaw,
        ),
        region: Some(region),
        detected: true,
    }
}

/// Stateful wrapper around [`vet_law`]: estimates the tag-center rate and
/// holds a decaying command through detection losses.
#[derive(Debug, Clone)]
pub struct VetController {
    pub gains: VetGains,
    pub cam: CameraModel,
    last_center: Option<(Vector2<f64>, f64)>,
    rate: Vector2<f64>,
    last_cmd: Vector3<f64>,
    last_time: Option<f64>,
}

impl VetController {
    pub fn new(gains: VetGains, cam: CameraModel) -> Self {
        Self {
            gains,
            cam,
            last_center: None,
            rate: Vector2::zeros(),
            last_cmd: Vector3::zeros(),
            last_time: None,
        }
    }

    pub fn update(&mut self, obs: &TagObservation) -> VetCommand {
        let dt = self
            .last_time
            .map(|t0| (obs.timestamp - t0).max(0.0))
            .unwrap_or(0.0);
        self.last_time = Some(obs.timestamp);
        let Ok((center, _, _)) = tag_geometry(obs) else {
            self.last_center = None;
            self.rate = Vector2::zeros();
            self.last_cmd *= 0.5f64.powf(dt / HOLD_HALF_LIFE);
            return VetCommand {
                u: self.last_cmd,
                region: None,
                detected: false,
            };
        };
        let c = normalized_offset(&center, &self.cam);
        if let Some((prev, t0)) = self.last_center {
            let h = obs.timestamp - t0;
            if h > 0.0 {
                let raw = (c - prev) / h;
                self.rate += (raw - self.rate) * (h / (CENTER_RATE_TAU + h));
            }
        }
        self.last_center = Some((c, obs.timestamp));
        let cmd = vet_law(obs, &self.rate, &self.gains, &self.cam);
        self.last_cmd = cmd.u;
        cmd
    }
}

/// Maps a camera-frame command into the robot's body command layout.
pub fn camera_to_body(cmd: &Vector3<f64>, mount: &RigidTransform, kind: RobotKind) -> ControlInput {
    let r = &mount.rotation;
    let lin = r * Vector3::new(cmd.x, cmd.y, 0.0);
    let yaw = (r * Vector3::new(0.0, 0.0, cmd.z)).z;
    match kind {
        RobotKind::Underwater => ControlInput::from_slice(&[lin.x, lin.y, 0.0, 0.0, 0.0, yaw]),
        RobotKind::Surface => ControlInput::from_slice(&[lin.x, lin.y, yaw]),
    }
}

/// Residual of the mounting condition
/// `R_U (c_C^U − c_T^U) + R_S (c_C^S − c_T^S) = 0` in metres.
pub fn check_connectivity(
    world_from_u: &RigidTransform,
    camera_u: &RigidTransform,
    tag_u: &RigidTransform,
    world_from_s: &RigidTransform,
    camera_s: &RigidTransform,
    tag_s: &RigidTransform,
) -> f64 {
    let du = world_from_u.rotation * (camera_u.translation - tag_u.translation);
    let ds = world_from_s.rotation * (camera_s.translation - tag_s.translation);
    (du + ds).norm()
}

/// Element-wise sum followed by saturation.
pub fn combined_control(
    subtask: &ControlInput,
    xi: &ControlInput,
    params: &VehicleParams,
) -> Result<ControlInput> {
    if subtask.0.len() != xi.0.len() {
        return Err(Error::DimensionMismatch {
            expected: subtask.0.len(),
            found: xi.0.len(),
        });
    }
    Ok(saturate(&ControlInput(&subtask.0 + &xi.0), params))
}

/// One-way IBVS: the follower's camera-frame command and the leader's
/// tether input, which is always zero.
pub fn baseline_ibvs(
    obs: &TagObservation,
    gains: &VetGains,
    cam: &CameraModel,
) -> (Vector3<f64>, Vector3<f64>) {
    let follower = match tag_geometry(obs) {
        Ok((center, _, _)) => {
            let e = normalized_offset(&center, cam) * gains.k_elastic_p;
            Vector3::new(
                e.x.clamp(-gains.u_max_x, gains.u_max_x),
                e.y.clamp(-gains.u_max_y, gains.u_max_y),
                gains.k_psi * obs.camera_yaw,
            )
        }
        Err(_) => Vector3::zeros(),
    };
    (follower, Vector3::zeros())
}

/// Commands produced by one controller tick.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerOutput {
    pub subtask: ControlInput,
    pub xi: ControlInput,
    pub total: ControlInput,
    pub region: Option<RegionLabel>,
    pub tether: Option<TetherState>,
}

fn tether_part(
    mode: ControllerMode,
    leader: bool,
    vet: &mut VetController,
    obs: &TagObservation,
) -> (Vector3<f64>, Option<RegionLabel>) {
    match mode {
        ControllerMode::Vet => {
            let cmd = vet.update(obs);
            (cmd.u, cmd.region)
        }
        ControllerMode::Baseline => {
            let region = tag_geometry(obs)
                .ok()
                .map(|(c, l, h)| classify_region(&c, l, h, &vet.cam));
            let (follower, leader_u) = baseline_ibvs(obs, &vet.gains, &vet.cam);
            (if leader { leader_u } else { follower }, region)
        }
    }
}

/// Follower controller. Its only inputs are its own depth/attitude
/// measurement and its own camera observation.
#[derive(Debug, Clone)]
pub struct UnderwaterController {
    pub mode: ControllerMode,
    pub target: SubTaskTarget,
    pub gains: PdGains,
    pub params: VehicleParams,
    vet: VetController,
}

impl UnderwaterController {
    pub fn new(
        mode: ControllerMode,
        target: SubTaskTarget,
        gains: PdGains,
        vet_gains: VetGains,
        cam: CameraModel,
        params: VehicleParams,
    ) -> Self {
        Self {
            mode,
            target,
            gains,
            params,
            vet: VetController::new(vet_gains, cam),
        }
    }

    pub fn step(&mut self, meas: &DepthAttitude, obs: &TagObservation) -> ControllerOutput {
        let subtask = saturate(
            &subtask_control_underwater(meas, &self.target, &self.gains),
            &self.params,
        );
        let (cam_u, region) = tether_part(self.mode, false, &mut self.vet, obs);
        let xi = camera_to_body(&cam_u, &self.vet.cam.mount, RobotKind::Underwater);
        let total = saturate(&ControlInput(&subtask.0 + &xi.0), &self.params);
        ControllerOutput {
            subtask,
            xi,
            total,
            region,
            tether: tether_state(obs, &self.vet.cam).ok(),
        }
    }
}

/// Leader controller. The surface robot knows its own planar pose.
#[derive(Debug, Clone)]
pub struct SurfaceController {
    pub mode: ControllerMode,
    pub gains: PdGains,
    pub params: VehicleParams,
    vet: VetController,
}

impl SurfaceController {
    pub fn new(
        mode: ControllerMode,
        gains: PdGains,
        vet_gains: VetGains,
        cam: CameraModel,
        params: VehicleParams,
    ) -> Self {
        Self {
            mode,
            gains,
            params,
            vet: VetController::new(vet_gains, cam),
        }
    }

    pub fn step(
        &mut self,
        pose: &Pose3,
        nu: &Vector3<f64>,
        obs: &TagObservation,
        target: &SubTaskTarget,
        speed_cap: f64,
    ) -> ControllerOutput {
        let raw = subtask_control_surface(pose, nu, target, &self.gains);
        let subtask = saturate(&limit_planar_speed(&raw, speed_cap), &self.params);
        let (cam_u, region) = tether_part(self.mode, true, &mut self.vet, obs);
        let xi = camera_to_body(&cam_u, &self.vet.cam.mount, RobotKind::Surface);
        let total = saturate(&ControlInput(&subtask.0 + &xi.0), &self.params);
        ControllerOutput {
            subtask,
            xi,
            total,
            region,
            tether: tether_state(obs, &self.vet.cam).ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{rotation_x, Pose6};
    use crate::perception::{project_tag, ImagePoint, TagModel};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cam() -> CameraModel {
        CameraModel {
            mount: RigidTransform::identity(),
            ..CameraModel::underwater_default()
        }
    }

    fn square_at(cx: f64, cy: f64, s: f64) -> TagObservation {
        let h = s / 2.0;
        TagObservation {
            corners: [
                ImagePoint::new(cx - h, cy - h),
                ImagePoint::new(cx + h, cy - h),
                ImagePoint::new(cx + h, cy + h),
                ImagePoint::new(cx - h, cy + h),
            ],
            detected: true,
            ..TagObservation::default()
        }
    }

    #[test]
    fn underwater_subtask_examples() {
        let g = PdGains::underwater(0.5, 0.15);
        let target = SubTaskTarget {
            z_d: -1.0,
            ..SubTaskTarget::default()
        };
        let at = DepthAttitude {
            z: -1.0,
            ..DepthAttitude::default()
        };
        assert!(subtask_control_underwater(&at, &target, &g).0.iter().all(|&v| v == 0.0));

        let off = DepthAttitude {
            z: -1.5,
            ..DepthAttitude::default()
        };
        let u = subtask_control_underwater(&off, &target, &g);
        assert_abs_diff_eq!(u.0[2], 0.25, epsilon = 1e-15);
        assert_eq!([u.0[0], u.0[1], u.0[5]], [0.0, 0.0, 0.0]);

        let plus = DepthAttitude { phi: PI - 0.01, z: -1.0, ..DepthAttitude::default() };
        let minus = DepthAttitude { phi: -PI + 0.01, z: -1.0, ..DepthAttitude::default() };
        let a = subtask_control_underwater(&plus, &target, &g).0[3];
        let b = subtask_control_underwater(&minus, &target, &g).0[3];
        assert_abs_diff_eq!(a.abs(), b.abs(), epsilon = 1e-12);
    }

    #[test]
    fn surface_subtask_examples() {
        let g = PdGains::surface(1.0, 0.5);
        let here = Pose3::new(0.3, -0.2, 0.4);
        let target = SubTaskTarget::planar(0.3, -0.2, 0.4);
        assert!(subtask_control_surface(&here, &Vector3::zeros(), &target, &g)
            .0
            .iter()
            .all(|&v| v == 0.0));

        let u = subtask_control_surface(
            &Pose3::default(),
            &Vector3::zeros(),
            &SubTaskTarget::planar(0.1, 0.0, 0.0),
            &g,
        );
        assert_abs_diff_eq!(u.0[0], 0.1, epsilon = 1e-15);

        let u = subtask_control_surface(
            &Pose3::default(),
            &Vector3::zeros(),
            &SubTaskTarget::planar(0.0, 0.0, PI / 2.0),
            &g,
        );
        assert_abs_diff_eq!(u.0[2], PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn gains_validation() {
        PdGains::underwater(0.5, 0.15).validate(RobotKind::Underwater).unwrap();
        assert!(PdGains::surface(1.0, 1.0).validate(RobotKind::Underwater).is_err());
        let mut g = PdGains::underwater(0.5, 0.15);
        g.kp[5] = 0.1;
        assert!(g.validate(RobotKind::Underwater).is_err());
        assert!(VetGains::new(1.0, 0.5, 0.1).validate().is_err());
        VetGains::default().validate().unwrap();
    }

    #[test]
    fn vet_law_examples() {
        let g = VetGains::default();
        let c = cam();
        let centered = vet_law(&square_at(320.0, 240.0, 60.0), &Vector2::zeros(), &g, &c);
        assert_eq!(centered.region, Some(RegionLabel::Safe));
        assert!(centered.u.norm() <= 1e-9);

        let danger = vet_law(&square_at(40.0, 240.0, 60.0), &Vector2::zeros(), &g, &c);
        assert_eq!(danger.region, Some(RegionLabel::Danger));
        assert_abs_diff_eq!(danger.u.x.abs(), 0.1, epsilon = 1e-15);

        // normalized offset 0.5 along x with a large clamp
        let wide = VetGains {
            u_max_x: 10.0,
            ..g.clone()
        };
        let elastic = vet_law(&square_at(480.0, 240.0, 60.0), &Vector2::zeros(), &wide, &c);
        assert_eq!(elastic.region, Some(RegionLabel::Elastic));
        assert_abs_diff_eq!(elastic.u.x, 0.5, epsilon = 1e-12);

        let lost = vet_law(&TagObservation::missing(0.0), &Vector2::zeros(), &g, &c);
        assert!(!lost.detected);
    }

    #[test]
    fn held_command_decays_after_loss() {
        let mut v = VetController::new(VetGains::default(), cam());
        let mut obs = square_at(480.0, 240.0, 60.0);
        obs.timestamp = 0.0;
        let first = v.update(&obs);
        assert!(first.u.x > 0.0);
        let half = v.update(&TagObservation::missing(0.5));
        assert!(!half.detected);
        assert_abs_diff_eq!(half.u.x, first.u.x / 2.0, epsilon = 1e-12);
        let later = v.update(&TagObservation::missing(2.5));
        assert!(later.u.x < first.u.x / 30.0);
    }

    #[test]
    fn camera_to_body_examples() {
        let cmd = Vector3::new(0.05, -0.03, 0.1);
        let id = camera_to_body(&cmd, &RigidTransform::identity(), RobotKind::Underwater);
        assert_eq!(id.as_slice(), &[0.05, -0.03, 0.0, 0.0, 0.0, 0.1]);

        let flipped = RigidTransform::new(rotation_x(PI), Vector3::zeros());
        let f = camera_to_body(&cmd, &flipped, RobotKind::Underwater);
        assert_abs_diff_eq!(f.0[0], 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(f.0[1], 0.03, epsilon = 1e-15);
        assert_abs_diff_eq!(f.0[5], -0.1, epsilon = 1e-15);

        // the two default cameras face each other, so their y and yaw axes are mirrored
        let u = camera_to_body(&cmd, &CameraModel::underwater_default().mount, RobotKind::Underwater);
        let s = camera_to_body(&cmd, &CameraModel::surface_default().mount, RobotKind::Surface);
        assert_abs_diff_eq!(u.0[0], s.0[0], epsilon = 1e-15);
        assert_abs_diff_eq!(u.0[1], -s.0[1], epsilon = 1e-15);
        assert_abs_diff_eq!(u.0[5], -s.0[2], epsilon = 1e-15);
    }

    #[test]
    fn connectivity_examples() {
        let id = RigidTransform::identity();
        let t = RigidTransform::from_translation;
        let u = Pose6::new(0.0, 0.0, -1.0, 0.0, 0.0, 0.0).to_transform();
        let s = Pose3::default().to_transform();
        let cu = CameraModel::underwater_default().mount;
        let tu = TagModel::underwater_default().mount;
        let cs = CameraModel::surface_default().mount;
        let ts = TagModel::surface_default().mount;
        assert!(check_connectivity(&u, &cu, &tu, &s, &cs, &ts) < 1e-12);
        // U camera 0.1 forward of its tag, S camera 0.1 behind its tag
        assert!(check_connectivity(&u, &t(0.1, 0.0, 0.0), &id, &s, &t(-0.1, 0.0, 0.0), &id) < 1e-12);
        let r = check_connectivity(&u, &t(0.1, 0.0, 0.0), &id, &s, &t(0.1, 0.0, 0.0), &id);
        assert_abs_diff_eq!(r, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn combined_control_examples() {
        let p = VehicleParams::underwater_default();
        let zero = ControlInput::zeros(RobotKind::Underwater);
        let sub = ControlInput::from_slice(&[0.0, 0.0, 0.05, 0.0, 0.0, 0.0]);
        let xi = ControlInput::from_slice(&[0.07, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(combined_control(&sub, &zero, &p).unwrap(), sub);
        assert_eq!(combined_control(&zero, &xi, &p).unwrap(), xi);
        assert_eq!(
            combined_control(&sub, &xi, &p).unwrap().as_slice(),
            &[0.07, 0.0, 0.05, 0.0, 0.0, 0.0]
        );
        assert!(combined_control(&sub, &ControlInput::zeros(RobotKind::Surface), &p).is_err());
    }

    #[test]
    fn baseline_examples() {
        let g = VetGains::default();
        let (f, l) = baseline_ibvs(&square_at(320.0, 240.0, 60.0), &g, &cam());
        assert!(f.norm() < 1e-12);
        assert_eq!(l, Vector3::zeros());
        let (f, l) = baseline_ibvs(&square_at(400.0, 240.0, 60.0), &g, &cam());
        assert!(f.x > 0.0);
        assert_eq!(l, Vector3::zeros());
        let (f, _) = baseline_ibvs(&TagObservation::missing(0.0), &g, &cam());
        assert_eq!(f, Vector3::zeros());
    }

    #[test]
    fn underwater_controller_keeps_disjoint_supports() {
        let mut c = UnderwaterController::new(
            ControllerMode::Vet,
            SubTaskTarget { z_d: -1.0, ..SubTaskTarget::default() },
            PdGains::underwater(0.5, 0.15),
            VetGains::default(),
            CameraModel::underwater_default(),
            VehicleParams::underwater_default(),
        );
        let meas = DepthAttitude { z: -1.2, phi: 0.05, theta: -0.02, ..DepthAttitude::default() };
        let mut obs = square_at(420.0, 300.0, 60.0);
        obs.camera_yaw = 0.2;
        let out = c.step(&meas, &obs);
        for i in [0, 1, 5] {
            assert_eq!(out.subtask.0[i], 0.0);
        }
        for i in [2, 3, 4] {
            assert_eq!(out.xi.0[i], 0.0);
        }
        assert!(out.xi.0[0] != 0.0 && out.xi.0[5] != 0.0);
    }

    #[test]
    fn underwater_controller_sees_only_own_measurements() {
        // the follower's step takes its depth/attitude and its own observation, nothing else
        let _: fn(&mut UnderwaterController, &DepthAttitude, &TagObservation) -> ControllerOutput =
            UnderwaterController::step;
    }

    /// World-frame xy direction of each robot's tether command for a formation
    /// where S is displaced from U by `offset` (world xy).
    fn mutual_commands(offset: Vector2<f64>) -> Option<(Vector2<f64>, Vector2<f64>)> {
        let g = VetGains::default();
        let u_pose = Pose6::new(0.0, 0.0, -1.0, 0.0, 0.0, 0.0);
        let s_pose = Pose3::new(offset.x, offset.y, 0.0);
        let (cu, cs) = (CameraModel::underwater_default(), CameraModel::surface_default());
        let (tu, ts) = (TagModel::underwater_default(), TagModel::surface_default());
        let ou = project_tag(&u_pose.to_transform(), &s_pose.to_transform(), &cu, &ts, 0.0);
        let os = project_tag(&s_pose.to_transform(), &u_pose.to_transform(), &cs, &tu, 0.0);
        if !(ou.detected && os.detected) {
            return None;
        }
        let vu = camera_to_body(&vet_law(&ou, &Vector2::zeros(), &g, &cu).u, &cu.mount, RobotKind::Underwater);
        let vs = camera_to_body(&vet_law(&os, &Vector2::zeros(), &g, &cs).u, &cs.mount, RobotKind::Surface);
        Some((Vector2::new(vu.0[0], vu.0[1]), Vector2::new(vs.0[0], vs.0[1])))
    }

    #[test]
    fn elastic_band_decays_monotonically() {
        // single integrator: the tag drifts across the image as the robot moves
        let c = cam();
        let g = VetGains::default();
        let mut v = VetController::new(g, c.clone());
        let depth = 0.8;
        let (mut x, dt) = (0.55_f64, 0.02);
        let mut prev_bar = f64::INFINITY;
        let mut saw_elastic = false;
        for k in 0..2000 {
            let px = 320.0 + 400.0 * x / depth;
            let mut obs = square_at(px, 240.0, 75.0);
            obs.timestamp = k as f64 * dt;
            let cmd = v.update(&obs);
            let (center, l, _) = tag_geometry(&obs).unwrap();
            let xi = center.distance(&c.center());
            let xi_max = l / 2.0;
            if cmd.region == Some(RegionLabel::Elastic) {
                saw_elastic = true;
                let bar = xi - xi_max;
                assert!(bar <= prev_bar + 1e-12, "step {k}: {bar} > {prev_bar}");
                prev_bar = bar;
            }
            x -= cmd.u.x * dt;
        }
        assert!(saw_elastic);
        assert!(prev_bar < 0.0 || x.abs() < 0.1);
    }

    proptest! {
        #[test]
        fn zero_at_center(s in 10.0f64..200.0) {
            let cmd = vet_law(&square_at(320.0, 240.0, s), &Vector2::zeros(), &VetGains::default(), &cam());
            prop_assert!(cmd.u.norm() <= 1e-9);
        }

        #[test]
        fn tether_commands_oppose_each_other(d in 0.02f64..0.5, axis in 0usize..2, sign in prop::bool::ANY) {
            let mut offset = Vector2::zeros();
            offset[axis] = if sign { d } else { -d };
            if let Some((a, b)) = mutual_commands(offset) {
                prop_assume!(a.norm() > 0.0 && b.norm() > 0.0);
                let cos = a.normalize().dot(&b.normalize());
                prop_assert!(cos <= -1.0 + 1e-3, "cos = {}", cos);
                // U moves toward S
                prop_assert!(a.dot(&offset) > 0.0);
            }
        }

        #[test]
        fn vet_output_respects_limits(cx in -100.0f64..740.0, cy in -100.0f64..580.0, s in 0.0f64..150.0,
                                      rx in -5.0f64..5.0, ry in -5.0f64..5.0) {
            let g = VetGains::default();
            let cmd = vet_law(&square_at(cx, cy, s), &Vector2::new(rx, ry), &g, &cam());
            prop_assert!(cmd.u.x.abs() <= g.u_max_x && cmd.u.y.abs() <= g.u_max_y);
        }

        #[test]
        fn controller_outputs_are_saturated(z in -3.0f64..0.0, phi in -3.0f64..3.0, cx in 0.0f64..640.0, cy in 0.0f64..480.0,
                                             yaw in -3.0f64..3.0) {
            let mut c = UnderwaterController::new(
                ControllerMode::Vet,
                SubTaskTarget { z_d: -1.0, ..SubTaskTarget::default() },
                PdGains::underwater(5.0, 1.0),
                VetGains::default(),
                CameraModel::underwater_default(),
                VehicleParams::underwater_default(),
            );
            let mut obs = square_at(cx, cy, 40.0);
            obs.detected = cx > 20.0 && cx < 620.0 && cy > 20.0 && cy < 460.0;
            obs.camera_yaw = yaw;
            let out = c.step(&DepthAttitude { z, phi, ..DepthAttitude::default() }, &obs);
            let u = out.total.as_slice();
            prop_assert!(u[..3].iter().all(|v| v.abs() <= 0.1));
            prop_assert!(u[3..].iter().all(|v| v.abs() <= 0.2));
        }
    }
}
