//! Rigid-body dynamics for the underwater (6-DoF) and surface (3-DoF) robots.
//!
//! Both robots follow `M ν̇ + (C(ν) + D(ν)) ν = τ + w` with diagonal `M`, the
//! rigid-body Coriolis matrix built from `M`, and linear-plus-quadratic
//! diagonal damping. Thrust is `τ = Λ_K u` with a diagonal `Λ_K`.

use nalgebra::{DMatrix, DVector, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{
    euler_rate_transform, rotation_body_to_world, surface_jacobian, wrap_angle, EulerAngles,
    Pose3, Pose6, SurfaceJacobianConvention,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RobotKind {
    Underwater,
    Surface,
}

impl RobotKind {
    pub fn dof(self) -> usize {
        match self {
            RobotKind::Underwater => 6,
            RobotKind::Surface => 3,
        }
    }

    /// Number of leading translational components (x, y, z or x, y).
    pub fn linear_dof(self) -> usize {
        match self {
            RobotKind::Underwater => 3,
            RobotKind::Surface => 2,
        }
    }
}

/// Inertia, damping, thrust allocation and limits for one robot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleParams {
    pub kind: RobotKind,
    pub mass_matrix_diag: Vec<f64>,
    pub damping_linear_diag: Vec<f64>,
    pub damping_quadratic_diag: Vec<f64>,
    pub thrust_gain_diag: Vec<f64>,
    /// Command clip for translational components (m/s).
    pub velocity_bound_linear: f64,
    /// Command clip for rotational components (rad/s).
    pub velocity_bound_angular: f64,
    /// Hard bound on the norm of the translational body velocity (m/s).
    pub speed_bound: f64,
}

impl VehicleParams {
    pub fn underwater_default() -> Self {
        let mass = vec![11.5, 11.5, 11.5, 0.16, 0.16, 0.16];
        let lin = vec![4.0, 4.0, 4.0, 0.07, 0.07, 0.07];
        let quad = vec![18.0, 18.0, 18.0, 1.55, 1.55, 1.55];
        Self::with_matched_thrust(RobotKind::Underwater, mass, lin, quad, 0.1, 0.2, 1.0)
    }

    pub fn surface_default() -> Self {
        let mass = vec![14.0, 14.0, 0.25];
        let lin = vec![5.0, 5.0, 0.1];
        let quad = vec![20.0, 20.0, 2.0];
        Self::with_matched_thrust(RobotKind::Surface, mass, lin, quad, 0.1, 0.2, 1.0)
    }

    /// Picks `Λ_K` so that a saturated command produces a steady speed equal
    /// to the command: `Λ_i = d_lin,i + d_quad,i · bound_i`.
    pub fn with_matched_thrust(
        kind: RobotKind,
        mass: Vec<f64>,
        lin: Vec<f64>,
        quad: Vec<f64>,
        bound_linear: f64,
        bound_angular: f64,
        speed_bound: f64,
    ) -> Self {
        let thrust = (0..kind.dof())
            .map(|i| {
                let b = if i < kind.linear_dof() {
                    bound_linear
                } else {
                    bound_angular
                };
                lin[i] + quad[i] * b
            })
            .collect();
        Self {
            kind,
            mass_matrix_diag: mass,
            damping_linear_diag: lin,
            damping_quadratic_diag: quad,
            thrust_gain_diag: thrust,
            velocity_bound_linear: bound_linear,
            velocity_bound_angular: bound_angular,
            speed_bound,
        }
    }

    pub fn dof(&self) -> usize {
        self.kind.dof()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dof();
        for (name, v) in [
            ("mass_matrix_diag", &self.mass_matrix_diag),
            ("damping_linear_diag", &self.damping_linear_diag),
            ("damping_quadratic_diag", &self.damping_quadratic_diag),
            ("thrust_gain_diag", &self.thrust_gain_diag),
        ] {
            if v.len() != n {
                return Err(Error::ConfigInvalid(format!(
                    "{name} has {} entries, expected {n}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::ConfigInvalid(format!("{name} is not finite")));
            }
        }
        if self.mass_matrix_diag.iter().any(|&m| m <= 0.0)
            || self.thrust_gain_diag.iter().any(|&k| k <= 0.0)
        {
            return Err(Error::ConfigInvalid(
                "mass and thrust gains must be strictly positive".into(),
            ));
        }
        if self
            .damping_linear_diag
            .iter()
            .chain(&self.damping_quadratic_diag)
            .any(|&d| d < 0.0)
        {
            return Err(Error::ConfigInvalid("damping must be non-negative".into()));
        }
        if !(self.velocity_bound_linear > 0.0
            && self.velocity_bound_angular > 0.0
            && self.speed_bound > 0.0)
        {
            return Err(Error::ConfigInvalid("velocity bounds must be positive".into()));
        }
        Ok(())
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dof() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dof(),
                found,
            })
        }
    }
}

/// Dimensionless velocity-scale command, 6 entries underwater
/// (`x, y, z, φ, θ, ψ`) or 3 on the surface (`x, y, ψ`).
#[derive(Debug, Clone, PartialEq)]
pub struct ControlInput(pub DVector<f64>);

impl ControlInput {
    pub fn zeros(kind: RobotKind) -> Self {
        Self(DVector::zeros(kind.dof()))
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Self(DVector::from_column_slice(v))
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }
}

/// World-frame external force and torque acting during `active_window`.
///
/// When `trigger_y` is set the window is re-anchored to the first time the
/// underwater robot crosses that world `y`; its length is preserved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disturbance {
    pub force: [f64; 3],
    pub torque: [f64; 3],
    pub active_window: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trigger_y: Option<f64>,
}

impl Disturbance {
    pub fn validate(&self) -> Result<()> {
        let [a, b] = self.active_window;
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(Error::ConfigInvalid(
                "disturbance window must satisfy t_start <= t_end".into(),
            ));
        }
        if self.force.iter().chain(&self.torque).any(|v| !v.is_finite()) {
            return Err(Error::ConfigInvalid("disturbance must be finite".into()));
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        self.active_window[1] - self.active_window[0]
    }
}

/// Sum of world-frame force and torque applied to a body at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExternalWrench {
    pub force: Vector3<f64>,
    pub torque: Vector3<f64>,
}

pub fn allocate_thrust(u: &ControlInput, params: &VehicleParams) -> Result<DVector<f64>> {
    params.check_dim(u.0.len())?;
    Ok(u.0.component_mul(&DVector::from_column_slice(&params.thrust_gain_diag)))
}

/// Rigid-body Coriolis/centripetal matrix for a diagonal mass matrix.
///
/// The result is skew-symmetric, so `νᵀ C(ν) ν = 0`.
pub fn coriolis_matrix(nu: &DVector<f64>, params: &VehicleParams) -> Result<DMatrix<f64>> {
    params.check_dim(nu.len())?;
    let m = &params.mass_matrix_diag;
    match params.kind {
        RobotKind::Underwater => {
            let a = Vector3::new(m[0] * nu[0], m[1] * nu[1], m[2] * nu[2]);
            let b = Vector3::new(m[3] * nu[3], m[4] * nu[4], m[5] * nu[5]);
            let sa = -a.cross_matrix();
            let sb = -b.cross_matrix();
            let mut c = DMatrix::zeros(6, 6);
            c.view_mut((0, 3), (3, 3)).copy_from(&sa);
            c.view_mut((3, 0), (3, 3)).copy_from(&sa);
            c.view_mut((3, 3), (3, 3)).copy_from(&sb);
            Ok(c)
        }
        RobotKind::Surface => {
            let (u, v) = (nu[0], nu[1]);
            Ok(DMatrix::from_row_slice(
                3,
                3,
                &[
                    0.0,
                    0.0,
                    -m[1] * v,
                    0.0,
                    0.0,
                    m[0] * u,
                    m[1] * v,
                    -m[0] * u,
                    0.0,
                ],
            ))
        }
    }
}

/// Diagonal of `D(ν) = diag(d_lin) + diag(d_quad · |ν|)`.
fn damping_diag(nu: &DVector<f64>, params: &VehicleParams) -> DVector<f64> {
    DVector::from_iterator(
        nu.len(),
        nu.iter().enumerate().map(|(i, v)| {
            params.damping_linear_diag[i] + params.damping_quadratic_diag[i] * v.abs()
        }),
    )
}

/// `D(ν) ν`; always dissipative (`νᵀ D(ν) ν ≥ 0`).
pub fn damping_force(nu: &DVector<f64>, params: &VehicleParams) -> Result<DVector<f64>> {
    params.check_dim(nu.len())?;
    Ok(damping_diag(nu, params).component_mul(nu))
}

/// Clips translational commands to `±velocity_bound_linear` and rotational
/// ones to `±velocity_bound_angular`.
pub fn saturate(u: &ControlInput, params: &VehicleParams) -> ControlInput {
    let nl = params.kind.linear_dof();
    let (bl, ba) = (params.velocity_bound_linear, params.velocity_bound_angular);
    ControlInput(DVector::from_iterator(
        u.0.len(),
        u.0.iter().enumerate().map(|(i, &v)| {
            let b = if i < nl { bl } else { ba };
            v.clamp(-b, b)
        }),
    ))
}

pub fn kinetic_energy(nu: &DVector<f64>, params: &VehicleParams) -> f64 {
    0.5 * nu
        .iter()
        .zip(&params.mass_matrix_diag)
        .map(|(v, m)| m * v * v)
        .sum::<f64>()
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt <= 0.1 {
        Ok(())
    } else {
        Err(Error::ConfigInvalid(format!("dt = {dt} outside (0, 0.1]")))
    }
}

/// One velocity update.
///
/// `C` and `D` are frozen at the current velocity and applied at the step
/// midpoint: `(M + h/2 (C + D)) ν' = (M − h/2 (C + D)) ν + h f`. With `f = 0`
/// this never increases `½ νᵀ M ν`. The translational part of the result is
/// then scaled back onto the `speed_bound` ball if it left it.
pub fn update_velocity(
    nu: &DVector<f64>,
    generalized_force: &DVector<f64>,
    params: &VehicleParams,
    dt: f64,
) -> Result<DVector<f64>> {
    params.check_dim(nu.len())?;
    params.check_dim(generalized_force.len())?;
    let n = nu.len();
    let mass = DMatrix::from_diagonal(&DVector::from_column_slice(&params.mass_matrix_diag));
    let h = coriolis_matrix(nu, params)? + DMatrix::from_diagonal(&damping_diag(nu, params));
    let lhs = &mass + &h * (0.5 * dt);
    let rhs = (&mass - &h * (0.5 * dt)) * nu + generalized_force * dt;
    let mut next = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::ConfigInvalid("singular velocity update".into()))?;
    debug_assert_eq!(next.len(), n);
    clamp_speed(&mut next, params);
    Ok(next)
}

fn clamp_speed(nu: &mut DVector<f64>, params: &VehicleParams) {
    let nl = params.kind.linear_dof();
    let bound = params.speed_bound;
    let norm = nu.rows(0, nl).norm();
    if norm > bound {
        nu.rows_mut(0, nl).scale_mut(bound / norm);
        // rounding can leave the rescaled norm one ulp above the bound
        while nu.rows(0, nl).norm() > bound {
            nu.rows_mut(0, nl).scale_mut(1.0 - f64::EPSILON);
        }
    }
}

/// Underwater robot state: world pose and body velocity `[v; ω]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UnderwaterState {
    pub pose: Pose6,
    pub nu: Vector6<f64>,
}

impl UnderwaterState {
    pub fn new(pose: Pose6) -> Self {
        Self {
            pose,
            nu: Vector6::zeros(),
        }
    }

    /// World-frame rates `[ẋ, ẏ, ż, φ̇, θ̇, ψ̇]` of the current state.
    pub fn world_rates(&self) -> Result<Vector6<f64>> {
        let r = rotation_body_to_world(&self.pose.attitude);
        let t = euler_rate_transform(&self.pose.attitude)?;
        let lin = r * self.nu.fixed_rows::<3>(0);
        let ang = t * self.nu.fixed_rows::<3>(3);
        Ok(Vector6::new(lin.x, lin.y, lin.z, ang.x, ang.y, ang.z))
    }

    pub fn step(
        &self,
        tau: &DVector<f64>,
        external: &ExternalWrench,
        params: &VehicleParams,
        dt: f64,
    ) -> Result<Self> {
        check_dt(dt)?;
        params.check_dim(6)?;
        params.check_dim(tau.len())?;
        let r = rotation_body_to_world(&self.pose.attitude);
        let f_body = r.transpose() * external.force;
        let m_body = r.transpose() * external.torque;
        let mut force = tau.clone();
        for i in 0..3 {
            force[i] += f_body[i];
            force[i + 3] += m_body[i];
        }
        let nu = update_velocity(&DVector::from_column_slice(self.nu.as_slice()), &force, params, dt)?;
        let nu = Vector6::from_column_slice(nu.as_slice());
        let t = euler_rate_transform(&self.pose.attitude)?;
        let dp = r * nu.fixed_rows::<3>(0) * dt;
        let da = t * nu.fixed_rows::<3>(3) * dt;
        let att = &self.pose.attitude;
        let pose = Pose6 {
            x: self.pose.x + dp.x,
            y: self.pose.y + dp.y,
            z: self.pose.z + dp.z,
            attitude: EulerAngles {
                phi: wrap_angle(att.phi + da.x),
                theta: wrap_angle(att.theta + da.y),
                psi: wrap_angle(att.psi + da.z),
            },
        };
        Ok(Self { pose, nu })
    }
}

/// Surface robot state: planar pose and body velocity `[u, v, r]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SurfaceState {
    pub pose: Pose3,
    pub nu: Vector3<f64>,
}

impl SurfaceState {
    pub fn new(pose: Pose3) -> Self {
        Self {
            pose,
            nu: Vector3::zeros(),
        }
    }

    pub fn world_rates(&self, convention: SurfaceJacobianConvention) -> Vector3<f64> {
        surface_jacobian(self.pose.psi, convention) * self.nu
    }

    pub fn step(
        &self,
        tau: &DVector<f64>,
        external: &ExternalWrench,
        params: &VehicleParams,
        dt: f64,
        convention: SurfaceJacobianConvention,
    ) -> Result<Self> {
        check_dt(dt)?;
        params.check_dim(3)?;
        params.check_dim(tau.len())?;
        let (s, c) = self.pose.psi.sin_cos();
        let (fx, fy) = (external.force.x, external.force.y);
        let mut force = tau.clone();
        force[0] += c * fx + s * fy;
        force[1] += -s * fx + c * fy;
        force[2] += external.torque.z;
        let nu = update_velocity(&DVector::from_column_slice(self.nu.as_slice()), &force, params, dt)?;
        let nu = Vector3::new(nu[0], nu[1], nu[2]);
        let d = surface_jacobian(self.pose.psi, convention) * nu * dt;
        Ok(Self {
            pose: Pose3 {
                x: self.pose.x + d.x,
                y: self.pose.y + d.y,
                psi: wrap_angle(self.pose.psi + d.z),
            },
            nu,
        })
    }
}
