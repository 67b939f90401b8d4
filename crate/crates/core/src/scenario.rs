//! Scenario assembly, planners, the fixed-step simulation loop and the
//! trajectory log.

use nalgebra::{DVector, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::control::{
    ControllerMode, ControllerOutput, DepthAttitude, PdGains, SubTaskTarget, SurfaceController,
    UnderwaterController, VetGains,
};
use crate::error::{Error, Result};
use crate::frames::{rotation_body_to_world, Pose3, Pose6, SurfaceJacobianConvention};
use crate::perception::{
    apply_dropout, project_tag, CameraModel, DropoutModel, RegionLabel, TagModel, TagObservation,
};
use crate::vehicle::{
    allocate_thrust, Disturbance, ExternalWrench, SurfaceState, UnderwaterState, VehicleParams,
};

/// Axis-aligned tank volume in world coordinates (m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TankBounds {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub z: [f64; 2],
}

impl TankBounds {
    pub fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("x", self.x), ("y", self.y), ("z", self.z)] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::ConfigInvalid(format!("tank {name} range is empty")));
            }
        }
        Ok(())
    }

    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        (self.x[0]..=self.x[1]).contains(&x) && (self.y[0]..=self.y[1]).contains(&y)
    }

    pub fn contains(&self, x: f64, y: f64, z: f64) -> bool {
        self.contains_xy(x, y) && (self.z[0]..=self.z[1]).contains(&z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlannerSpec {
    Setpoints {
        waypoints: Vec<SubTaskTarget>,
        capture_radius: f64,
        /// Cap on the planar sub-task command of the surface robot.
        speed: f64,
    },
    Lawnmower {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        lane_spacing: f64,
        speed: f64,
        capture_radius: f64,
    },
}

impl PlannerSpec {
    pub fn waypoints(&self) -> Result<Vec<SubTaskTarget>> {
        match self {
            PlannerSpec::Setpoints { waypoints, .. } => Ok(waypoints.clone()),
            PlannerSpec::Lawnmower { .. } => lawnmower_path(self),
        }
    }

    pub fn capture_radius(&self) -> f64 {
        match self {
            PlannerSpec::Setpoints { capture_radius, .. }
            | PlannerSpec::Lawnmower { capture_radius, .. } => *capture_radius,
        }
    }

    pub fn speed(&self) -> f64 {
        match self {
            PlannerSpec::Setpoints { speed, .. } | PlannerSpec::Lawnmower { speed, .. } => *speed,
        }
    }
}

/// Boustrophedon over the box: lanes run along `x` and are stacked in `y`.
pub fn lawnmower_path(spec: &PlannerSpec) -> Result<Vec<SubTaskTarget>> {
    let PlannerSpec::Lawnmower {
        x_min,
        x_max,
        y_min,
        y_max,
        lane_spacing,
        ..
    } = *spec
    else {
        return Err(Error::InvalidBounds("not a lawnmower planner".into()));
    };
    let vals = [x_min, x_max, y_min, y_max, lane_spacing];
    if vals.iter().any(|v| !v.is_finite()) || x_max <= x_min || y_max < y_min {
        return Err(Error::InvalidBounds(format!(
            "x [{x_min}, {x_max}], y [{y_min}, {y_max}]"
        )));
    }
    if lane_spacing <= 0.0 {
        return Err(Error::InvalidBounds("lane_spacing must be positive".into()));
    }
    let lanes = ((y_max - y_min) / lane_spacing + 1e-9).floor() as usize + 1;
    let mut out = Vec::with_capacity(2 * lanes);
    for i in 0..lanes {
        let y = y_min + i as f64 * lane_spacing;
        if i % 2 == 0 {
            out.push(SubTaskTarget::planar(x_min, y, 0.0));
            out.push(SubTaskTarget::planar(x_max, y, 0.0));
        } else {
            out.push(SubTaskTarget::planar(x_max, y, std::f64::consts::PI));
            out.push(SubTaskTarget::planar(x_min, y, std::f64::consts::PI));
        }
    }
    Ok(out)
}

/// Returns the active waypoint, advancing `index` once the robot is within
/// `capture_radius` of it. The last waypoint is held forever.
pub fn planner_step(
    current: &Pose3,
    waypoints: &[SubTaskTarget],
    capture_radius: f64,
    index: &mut usize,
) -> SubTaskTarget {
    let last = waypoints.len() - 1;
    let wp = &waypoints[(*index).min(last)];
    if *index < last && (wp.x_d - current.x).hypot(wp.y_d - current.y) < capture_radius {
        *index += 1;
    }
    waypoints[(*index).min(last)]
}

/// Per-robot section of a [`ScenarioConfig`] for the underwater vehicle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnderwaterConfig {
    pub initial_pose: Pose6,
    pub target: SubTaskTarget,
    pub gains: PdGains,
    pub params: VehicleParams,
    pub camera: CameraModel,
    pub tag: TagModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceConfig {
    pub initial_pose: Pose3,
    pub gains: PdGains,
    pub params: VehicleParams,
    pub camera: CameraModel,
    pub tag: TagModel,
    #[serde(default)]
    pub jacobian: SurfaceJacobianConvention,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub seed: u64,
    pub dt: f64,
    pub duration: f64,
    pub controller_mode: ControllerMode,
    /// Formation-failure bound on the projected distance (m).
    pub distance_threshold: f64,
    pub tank: TankBounds,
    pub vet: VetGains,
    pub underwater: UnderwaterConfig,
    pub surface: SurfaceConfig,
    pub planner: PlannerSpec,
    #[serde(default)]
    pub perturbations: Vec<Disturbance>,
    #[serde(default)]
    pub dropout: DropoutModel,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= 0.1) {
            return Err(Error::ConfigInvalid(format!("dt = {} outside (0, 0.1]", self.dt)));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::ConfigInvalid("duration must be non-negative".into()));
        }
        if !(self.distance_threshold > 0.0) {
            return Err(Error::ConfigInvalid("distance_threshold must be positive".into()));
        }
        self.tank.validate()?;
        let u = &self.underwater;
        let s = &self.surface;
        if u.params.kind != crate::vehicle::RobotKind::Underwater
            || s.params.kind != crate::vehicle::RobotKind::Surface
        {
            return Err(Error::ConfigInvalid("vehicle kinds are swapped".into()));
        }
        u.params.validate()?;
        s.params.validate()?;
        u.gains.validate(u.params.kind)?;
        s.gains.validate(s.params.kind)?;
        u.camera.validate()?;
        s.camera.validate()?;
        u.tag.validate()?;
        s.tag.validate()?;
        self.vet.validate()?;
        self.dropout.validate()?;
        for d in &self.perturbations {
            d.validate()?;
        }
        if !u.target.is_finite() {
            return Err(Error::ConfigInvalid("underwater target is not finite".into()));
        }
        let p = &u.initial_pose;
        if !p.is_finite() || !self.tank.contains(p.x, p.y, p.z) {
            return Err(Error::ConfigInvalid("underwater initial pose outside tank".into()));
        }
        if !s.initial_pose.is_finite() || !self.tank.contains_xy(s.initial_pose.x, s.initial_pose.y) {
            return Err(Error::ConfigInvalid("surface initial pose outside tank".into()));
        }
        let waypoints = self.planner.waypoints().map_err(|e| match e {
            Error::InvalidBounds(m) => Error::ConfigInvalid(format!("planner: {m}")),
            other => other,
        })?;
        if waypoints
            .iter()
            .any(|w| !w.is_finite() || !self.tank.contains_xy(w.x_d, w.y_d))
        {
            return Err(Error::ConfigInvalid("waypoint outside tank".into()));
        }
        if !(self.planner.capture_radius() > 0.0 && self.planner.speed() > 0.0) {
            return Err(Error::ConfigInvalid(
                "planner capture_radius and speed must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Robot {
    Underwater,
    Surface,
}

/// Discrete occurrences recorded alongside the state stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    PerturbationStart,
    PerturbationEnd,
    DropoutStart,
    DropoutEnd,
    /// Region seen by `observer`'s camera changed; `None` means no detection.
    RegionChange {
        observer: Robot,
        to: Option<RegionLabel>,
    },
    WallContact(Robot),
    WaypointReached(usize),
}

impl EventKind {
    /// Compact token used in the CSV `eventFlags` column.
    pub fn token(&self) -> String {
        let who = |r: &Robot| match r {
            Robot::Underwater => "us",
            Robot::Surface => "su",
        };
        match self {
            EventKind::PerturbationStart => "perturbation_start".into(),
            EventKind::PerturbationEnd => "perturbation_end".into(),
            EventKind::DropoutStart => "dropout_start".into(),
            EventKind::DropoutEnd => "dropout_end".into(),
            EventKind::RegionChange { observer, to } => format!(
                "region_{}:{}",
                who(observer),
                to.map(|r| r.as_str()).unwrap_or("lost")
            ),
            EventKind::WallContact(r) => format!("wall_{}", who(r)),
            EventKind::WaypointReached(i) => format!("waypoint:{i}"),
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        let robot = |s: &str| match s {
            "us" => Some(Robot::Underwater),
            "su" => Some(Robot::Surface),
            _ => None,
        };
        match token {
            "perturbation_start" => return Some(EventKind::PerturbationStart),
            "perturbation_end" => return Some(EventKind::PerturbationEnd),
            "dropout_start" => return Some(EventKind::DropoutStart),
            "dropout_end" => return Some(EventKind::DropoutEnd),
            _ => {}
        }
        if let Some(rest) = token.strip_prefix("region_") {
            let (who, label) = rest.split_once(':')?;
            let to = if label == "lost" {
                None
            } else {
                Some(label.parse().ok()?)
            };
            return Some(EventKind::RegionChange {
                observer: robot(who)?,
                to,
            });
        }
        if let Some(who) = token.strip_prefix("wall_") {
            return Some(EventKind::WallContact(robot(who)?));
        }
        if let Some(i) = token.strip_prefix("waypoint:") {
            return Some(EventKind::WaypointReached(i.parse().ok()?));
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
}

/// State, commands and observations at one tick, taken before the dynamics
/// step of that tick.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub t: f64,
    pub underwater: Pose6,
    pub surface: Pose3,
    pub nu_underwater: [f64; 6],
    pub nu_surface: [f64; 3],
    pub u_subtask: [f64; 6],
    pub u_xi: [f64; 6],
    pub s_subtask: [f64; 3],
    pub s_xi: [f64; 3],
    /// Saturated sums actually sent to the thrusters.
    pub u_total: [f64; 6],
    pub s_total: [f64; 3],
    /// Underwater camera looking at the surface tag.
    pub obs_us: TagObservation,
    /// Surface camera looking at the underwater tag.
    pub obs_su: TagObservation,
    pub region_us: Option<RegionLabel>,
    pub region_su: Option<RegionLabel>,
    pub xi_us: Option<f64>,
    pub xi_su: Option<f64>,
    pub projected_distance: f64,
    pub events: Vec<EventKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub dt: f64,
    pub records: Vec<Record>,
    pub events: Vec<Event>,
    pub waypoint_count: usize,
    pub final_waypoint_reached: bool,
    /// Perturbation windows as realised during the run.
    pub perturbation_windows: Vec<[f64; 2]>,
}

impl TrajectoryLog {
    pub fn perturbation_end(&self) -> Option<f64> {
        self.perturbation_windows.iter().map(|w| w[1]).reduce(f64::max)
    }
}

struct ActivePerturbation {
    spec: Disturbance,
    window: Option<[f64; 2]>,
    side: Option<bool>,
    started: bool,
    ended: bool,
}

impl ActivePerturbation {
    fn new(spec: Disturbance, y0: f64) -> Self {
        let window = match spec.trigger_y {
            None => Some(spec.active_window),
            Some(_) => None,
        };
        let side = spec.trigger_y.map(|ty| y0 >= ty);
        Self {
            spec,
            window,
            side,
            started: false,
            ended: false,
        }
    }

    /// Anchors a triggered window at the first crossing of `trigger_y`.
    fn observe(&mut self, t: f64, y: f64) {
        if let (None, Some(ty), Some(side)) = (self.window, self.spec.trigger_y, self.side) {
            if (y >= ty) != side {
                let [a, b] = self.spec.active_window;
                self.window = Some([t + a, t + b]);
            }
        }
    }

    fn active(&self, t: f64) -> bool {
        self.window.is_some_and(|[a, b]| a <= t && t < b)
    }
}

fn projected(u: &Pose6, s: &Pose3) -> f64 {
    (u.x - s.x).hypot(u.y - s.y)
}

fn clamp_axis(value: &mut f64, lo: f64, hi: f64) -> Option<f64> {
    if *value < lo {
        *value = lo;
        Some(-1.0)
    } else if *value > hi {
        *value = hi;
        Some(1.0)
    } else {
        None
    }
}

/// Keeps the underwater robot inside the tank; returns true on contact.
fn clamp_underwater(state: &mut UnderwaterState, tank: &TankBounds) -> bool {
    let p = &mut state.pose;
    let mut normals = Vec::new();
    for (axis, v, [lo, hi]) in [(0, &mut p.x, tank.x), (1, &mut p.y, tank.y), (2, &mut p.z, tank.z)] {
        if let Some(sign) = clamp_axis(v, lo, hi) {
            normals.push((axis, sign));
        }
    }
    if normals.is_empty() {
        return false;
    }
    let r = rotation_body_to_world(&state.pose.attitude);
    let mut v_world = r * Vector3::new(state.nu[0], state.nu[1], state.nu[2]);
    for (axis, sign) in normals {
        if v_world[axis] * sign > 0.0 {
            v_world[axis] = 0.0;
        }
    }
    let v_body = r.transpose() * v_world;
    state.nu[0] = v_body.x;
    state.nu[1] = v_body.y;
    state.nu[2] = v_body.z;
    true
}

fn clamp_surface(state: &mut SurfaceState, tank: &TankBounds) -> bool {
    let p = &mut state.pose;
    let mut normals = Vec::new();
    for (axis, v, [lo, hi]) in [(0, &mut p.x, tank.x), (1, &mut p.y, tank.y)] {
        if let Some(sign) = clamp_axis(v, lo, hi) {
            normals.push((axis, sign));
        }
    }
    if normals.is_empty() {
        return false;
    }
    let (s, c) = state.pose.psi.sin_cos();
    let mut v = [c * state.nu[0] - s * state.nu[1], s * state.nu[0] + c * state.nu[1]];
    for (axis, sign) in normals {
        if v[axis] * sign > 0.0 {
            v[axis] = 0.0;
        }
    }
    state.nu[0] = c * v[0] + s * v[1];
    state.nu[1] = -s * v[0] + c * v[1];
    true
}

fn to_array<const N: usize>(v: &DVector<f64>) -> [f64; N] {
    std::array::from_fn(|i| v[i])
}

/// Runs the scenario to completion. Each tick senses, computes both
/// controllers, records, then advances the dynamics by `dt`.
pub fn run(config: &ScenarioConfig) -> Result<TrajectoryLog> {
    config.validate()?;
    let uc = &config.underwater;
    let sc = &config.surface;
    let dt = config.dt;
    let steps = (config.duration / dt).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let no_dropout = DropoutModel::default();
    let dropout_u = if config.dropout.target.affects_underwater() {
        &config.dropout
    } else {
        &no_dropout
    };
    let dropout_s = if config.dropout.target.affects_surface() {
        &config.dropout
    } else {
        &no_dropout
    };

    let mut u_state = UnderwaterState::new(uc.initial_pose);
    let mut s_state = SurfaceState::new(sc.initial_pose);
    let mut u_ctrl = UnderwaterController::new(
        config.controller_mode,
        uc.target,
        uc.gains.clone(),
        config.vet.clone(),
        uc.camera.clone(),
        uc.params.clone(),
    );
    let mut s_ctrl = SurfaceController::new(
        config.controller_mode,
        sc.gains.clone(),
        config.vet.clone(),
        sc.camera.clone(),
        sc.params.clone(),
    );
    let waypoints = config.planner.waypoints()?;
    let capture = config.planner.capture_radius();
    let speed = config.planner.speed();
    let mut wp_index = 0usize;
    let mut final_reached = waypoints.is_empty();
    let hold = SubTaskTarget::planar(sc.initial_pose.x, sc.initial_pose.y, sc.initial_pose.psi);

    let mut perturbations: Vec<ActivePerturbation> = config
        .perturbations
        .iter()
        .cloned()
        .map(|d| ActivePerturbation::new(d, uc.initial_pose.y))
        .collect();

    let mut log = TrajectoryLog {
        dt,
        records: Vec::with_capacity(steps + 1),
        events: Vec::new(),
        waypoint_count: waypoints.len(),
        final_waypoint_reached: false,
        perturbation_windows: Vec::new(),
    };
    let mut prev_region_us: Option<Option<RegionLabel>> = None;
    let mut prev_region_su: Option<Option<RegionLabel>> = None;
    let mut in_dropout = false;
    let mut wall_u = false;
    let mut wall_s = false;
    let mut carried: Vec<EventKind> = Vec::new();

    for k in 0..=steps {
        let t = k as f64 * dt;
        let mut events = std::mem::take(&mut carried);

        let world_u = u_state.pose.to_transform();
        let world_s = s_state.pose.to_transform();
        let raw_us = project_tag(&world_u, &world_s, &uc.camera, &sc.tag, t);
        let raw_su = project_tag(&world_s, &world_u, &sc.camera, &uc.tag, t);
        let obs_us = apply_dropout(&raw_us, dropout_u, t, &mut rng);
        let obs_su = apply_dropout(&raw_su, dropout_s, t, &mut rng);
        let window = config.dropout.in_window(t);
        if window != in_dropout {
            events.push(if window {
                EventKind::DropoutStart
            } else {
                EventKind::DropoutEnd
            });
            in_dropout = window;
        }

        let rates = u_state.world_rates()?;
        let att = u_state.pose.attitude;
        let meas = DepthAttitude {
            z: u_state.pose.z,
            phi: att.phi,
            theta: att.theta,
            z_rate: rates[2],
            phi_rate: rates[3],
            theta_rate: rates[4],
        };
        let out_u: ControllerOutput = u_ctrl.step(&meas, &obs_us);

        let target = if waypoints.is_empty() {
            hold
        } else {
            let before = wp_index;
            let tgt = planner_step(&s_state.pose, &waypoints, capture, &mut wp_index);
            if wp_index != before {
                events.push(EventKind::WaypointReached(before));
            }
            if !final_reached && wp_index == waypoints.len() - 1 {
                let last = &waypoints[wp_index];
                if (last.x_d - s_state.pose.x).hypot(last.y_d - s_state.pose.y) < capture {
                    final_reached = true;
                    events.push(EventKind::WaypointReached(wp_index));
                }
            }
            tgt
        };
        let out_s = s_ctrl.step(&s_state.pose, &s_state.nu, &obs_su, &target, speed);

        for (prev, now, observer) in [
            (&mut prev_region_us, out_u.region, Robot::Underwater),
            (&mut prev_region_su, out_s.region, Robot::Surface),
        ] {
            if *prev != Some(now) {
                if prev.is_some() {
                    events.push(EventKind::RegionChange { observer, to: now });
                }
                *prev = Some(now);
            }
        }

        let mut external = ExternalWrench::default();
        for p in perturbations.iter_mut() {
            p.observe(t, u_state.pose.y);
            let active = p.active(t);
            if active && !p.started {
                p.started = true;
                events.push(EventKind::PerturbationStart);
            }
            if !active && p.started && !p.ended {
                p.ended = true;
                events.push(EventKind::PerturbationEnd);
            }
            if active {
                external.force += Vector3::from(p.spec.force);
                external.torque += Vector3::from(p.spec.torque);
            }
        }

        for e in &events {
            log.events.push(Event { t, kind: *e });
        }
        log.records.push(Record {
            t,
            underwater: u_state.pose,
            surface: s_state.pose,
            nu_underwater: u_state.nu.into(),
            nu_surface: s_state.nu.into(),
            u_subtask: to_array(&out_u.subtask.0),
            u_xi: to_array(&out_u.xi.0),
            s_subtask: to_array(&out_s.subtask.0),
            s_xi: to_array(&out_s.xi.0),
            u_total: to_array(&out_u.total.0),
            s_total: to_array(&out_s.total.0),
            obs_us,
            obs_su,
            region_us: out_u.region,
            region_su: out_s.region,
            xi_us: out_u.tether.map(|x| x.xi),
            xi_su: out_s.tether.map(|x| x.xi),
            projected_distance: projected(&u_state.pose, &s_state.pose),
            events,
        });
        if k == steps {
            break;
        }

        let tau_u = allocate_thrust(&out_u.total, &uc.params)?;
        let tau_s = allocate_thrust(&out_s.total, &sc.params)?;
        u_state = u_state.step(&tau_u, &external, &uc.params, dt)?;
        s_state = s_state.step(&tau_s, &ExternalWrench::default(), &sc.params, dt, sc.jacobian)?;
        let hit_u = clamp_underwater(&mut u_state, &config.tank);
        let hit_s = clamp_surface(&mut s_state, &config.tank);
        for (hit, flag, robot) in [(hit_u, &mut wall_u, Robot::Underwater), (hit_s, &mut wall_s, Robot::Surface)] {
            if hit && !*flag {
                carried.push(EventKind::WallContact(robot));
            }
            *flag = hit;
        }
    }

    log.final_waypoint_reached = final_reached;
    log.perturbation_windows = perturbations
        .iter()
        .filter_map(|p| p.window)
        .filter(|w| w[0] <= config.duration)
        .collect();
    Ok(log)
}

fn base_config(name: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        seed: 0,
        dt: 0.02,
        duration: 80.0,
        controller_mode: ControllerMode::Vet,
        distance_threshold: 0.6,
        tank: TankBounds {
            x: [-1.0, 2.66],
            y: [-1.5, 3.38],
            z: [-2.66, 0.0],
        },
        vet: VetGains::new(0.5, 1.0, 0.15),
        underwater: UnderwaterConfig {
            initial_pose: Pose6::new(0.0, 0.0, -1.0, 0.0, 0.0, 0.0),
            target: SubTaskTarget {
                z_d: -1.0,
                ..SubTaskTarget::default()
            },
            gains: PdGains::underwater(0.5, 0.15),
            params: VehicleParams::underwater_default(),
            camera: CameraModel::underwater_default(),
            tag: TagModel::underwater_default(),
        },
        surface: SurfaceConfig {
            initial_pose: Pose3::new(0.0, 0.0, 0.0),
            gains: PdGains::surface(5.0, 5.0),
            params: VehicleParams::surface_default(),
            camera: CameraModel::surface_default(),
            tag: TagModel::surface_default(),
            jacobian: SurfaceJacobianConvention::Standard,
        },
        planner: PlannerSpec::Setpoints {
            waypoints: vec![],
            capture_radius: 0.15,
            speed: 0.1,
        },
        perturbations: vec![],
        dropout: DropoutModel::default(),
    }
}

fn real_tank(cfg: &mut ScenarioConfig) {
    cfg.tank = TankBounds {
        x: [-0.8, 2.86],
        y: [-3.9, 0.98],
        z: [-2.66, 0.0],
    };
    cfg.vet = VetGains::new(0.35, 1.0, 0.15);
    cfg.surface.gains = PdGains::surface(1.0, 0.5);
}

fn place(cfg: &mut ScenarioConfig, x: f64, y: f64) {
    cfg.underwater.initial_pose = Pose6::new(x, y, -1.0, 0.0, 0.0, 0.0);
    cfg.surface.initial_pose = Pose3::new(x, y, 0.0);
}

pub const PRESETS: [&str; 5] = [
    "nominal",
    "perturbation_sim",
    "navigation_sim",
    "perturbation_real",
    "navigation_real",
];

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let mut cfg = base_config(name);
    match name {
        "nominal" => {
            cfg.underwater.target.psi_d = -1.57;
            cfg.planner = PlannerSpec::Setpoints {
                waypoints: vec![SubTaskTarget::planar(1.0, 1.0, -1.57)],
                capture_radius: 0.15,
                speed: 0.1,
            };
        }
        "perturbation_sim" => {
            place(&mut cfg, 0.1, 0.0);
            cfg.duration = 70.0;
            cfg.planner = PlannerSpec::Setpoints {
                waypoints: vec![SubTaskTarget::planar(0.1, 3.0, 0.0)],
                capture_radius: 0.15,
                speed: 0.1,
            };
            cfg.perturbations = vec![Disturbance {
                force: [-3.75, 0.0, 0.0],
                torque: [0.0; 3],
                active_window: [0.0, 2.0],
                trigger_y: Some(0.75),
            }];
        }
        "navigation_sim" => {
            place(&mut cfg, 1.1, -0.25);
            cfg.duration = 400.0;
            cfg.planner = PlannerSpec::Lawnmower {
                x_min: 0.6,
                x_max: 2.4,
                y_min: -0.25,
                y_max: 2.15,
                lane_spacing: 0.6,
                speed: 0.1,
                capture_radius: 0.15,
            };
        }
        "perturbation_real" => {
            real_tank(&mut cfg);
            place(&mut cfg, 0.2, -0.5);
            cfg.duration = 60.0;
            cfg.distance_threshold = 0.3;
            cfg.planner = PlannerSpec::Setpoints {
                waypoints: vec![SubTaskTarget::planar(1.0, -2.5, 0.0)],
                capture_radius: 0.15,
                speed: 0.1,
            };
            cfg.perturbations = vec![Disturbance {
                force: [-2.5, 0.0, 0.0],
                torque: [0.0; 3],
                active_window: [0.0, 2.0],
                trigger_y: Some(-1.0),
            }];
        }
        "navigation_real" => {
            real_tank(&mut cfg);
            place(&mut cfg, 0.2, -2.2);
            cfg.duration = 300.0;
            cfg.planner = PlannerSpec::Lawnmower {
                x_min: 0.2,
                x_max: 2.2,
                y_min: -2.2,
                y_max: -0.4,
                lane_spacing: 0.6,
                speed: 0.1,
                capture_radius: 0.15,
            };
            cfg.dropout = DropoutModel {
                scheduled_windows: vec![[71.0, 78.0], [85.0, 88.0]],
                random_rate: 0.02,
                target: crate::perception::DropoutTarget::Underwater,
            };
        }
        other => return Err(Error::UnknownPreset(other.into())),
    }
    Ok(cfg)
}
