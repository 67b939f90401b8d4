//! Rotations and rigid transforms between the world, body, camera and tag frames.
//!
//! The world frame is z-up with the free surface at `z = 0`, so a submerged
//! vehicle has negative `z`. Attitudes are ZYX Euler angles (roll `phi`,
//! pitch `theta`, yaw `psi`).

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pitch guard band around ±π/2 for the Euler-rate transform.
pub const GIMBAL_EPSILON: f64 = 1e-3;

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl EulerAngles {
    pub fn new(phi: f64, theta: f64, psi: f64) -> Self {
        Self { phi, theta, psi }.normalized()
    }

    pub fn normalized(self) -> Self {
        Self {
            phi: wrap_angle(self.phi),
            theta: wrap_angle(self.theta),
            psi: wrap_angle(self.psi),
        }
    }
}

/// World-frame pose of the underwater vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose6 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub attitude: EulerAngles,
}

impl Pose6 {
    pub fn new(x: f64, y: f64, z: f64, phi: f64, theta: f64, psi: f64) -> Self {
        Self {
            x,
            y,
            z,
            attitude: EulerAngles::new(phi, theta, psi),
        }
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn is_finite(&self) -> bool {
        [
            self.x,
            self.y,
            self.z,
            self.attitude.phi,
            self.attitude.theta,
            self.attitude.psi,
        ]
        .iter()
        .all(|v| v.is_finite())
    }

    pub fn to_transform(&self) -> RigidTransform {
        RigidTransform::new(rotation_body_to_world(&self.attitude), self.position())
    }

    /// Recovers a pose from a world-from-body transform (ZYX extraction).
    pub fn from_transform(t: &RigidTransform) -> Self {
        let att = rotation_to_euler(&t.rotation);
        Self {
            x: t.translation.x,
            y: t.translation.y,
            z: t.translation.z,
            attitude: att,
        }
    }
}

/// World-frame pose of the surface vehicle; it always sits at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose3 {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
}

impl Pose3 {
    pub fn new(x: f64, y: f64, psi: f64) -> Self {
        Self {
            x,
            y,
            psi: wrap_angle(psi),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.psi.is_finite()
    }

    pub fn to_transform(&self) -> RigidTransform {
        RigidTransform::new(
            rotation_body_to_world(&EulerAngles::new(0.0, 0.0, self.psi)),
            Vector3::new(self.x, self.y, 0.0),
        )
    }
}

/// ZYX rotation from body to world.
pub fn rotation_body_to_world(att: &EulerAngles) -> Matrix3<f64> {
    let (sf, cf) = att.phi.sin_cos();
    let (st, ct) = att.theta.sin_cos();
    let (sp, cp) = att.psi.sin_cos();
    Matrix3::new(
        cp * ct,
        -sp * cf + cp * st * sf,
        cp * st * cf + sp * sf,
        sp * ct,
        cp * cf + sp * st * sf,
        -cp * sf + sp * st * cf,
        -st,
        ct * sf,
        ct * cf,
    )
}

/// Maps body angular rates to Euler-angle rates.
///
/// Row one is `[1, sφ·tθ, cφ·tθ]`. Putting `cφ·tθ` in both columns would make
/// the matrix singular.
pub fn euler_rate_transform(att: &EulerAngles) -> Result<Matrix3<f64>> {
    if att.theta.abs() >= PI / 2.0 - GIMBAL_EPSILON {
        return Err(Error::GimbalSingularity { theta: att.theta });
    }
    let (sf, cf) = att.phi.sin_cos();
    let ct = att.theta.cos();
    let tt = att.theta.tan();
    Ok(Matrix3::new(
        1.0,
        sf * tt,
        cf * tt,
        0.0,
        cf,
        -sf,
        0.0,
        sf / ct,
        cf / ct,
    ))
}

/// Sign convention of the surface-vehicle velocity Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceJacobianConvention {
    /// Planar rotation by `psi`.
    #[default]
    Standard,
    /// Negated-cosine first column. Not a rotation.
    AppendixSign,
}

pub fn surface_jacobian(psi: f64, convention: SurfaceJacobianConvention) -> Matrix3<f64> {
    let (s, c) = psi.sin_cos();
    match convention {
        SurfaceJacobianConvention::Standard => {
            Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
        }
        SurfaceJacobianConvention::AppendixSign => {
            Matrix3::new(-c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0)
        }
    }
}

/// Inverse of [`rotation_body_to_world`] away from the pitch singularity.
pub fn rotation_to_euler(r: &Matrix3<f64>) -> EulerAngles {
    let theta = (-r[(2, 0)]).clamp(-1.0, 1.0).asin();
    let phi = r[(2, 1)].atan2(r[(2, 2)]);
    let psi = r[(1, 0)].atan2(r[(0, 0)]);
    EulerAngles::new(phi, theta, psi)
}

pub fn rotation_x(a: f64) -> Matrix3<f64> {
    rotation_body_to_world(&EulerAngles {
        phi: a,
        theta: 0.0,
        psi: 0.0,
    })
}

pub fn rotation_z(a: f64) -> Matrix3<f64> {
    rotation_body_to_world(&EulerAngles {
        phi: 0.0,
        theta: 0.0,
        psi: a,
    })
}

/// Proper rigid transform `p ↦ R p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "TransformRepr", into = "TransformRepr")]
pub struct RigidTransform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidTransform {
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        Self {
            rotation,
            translation,
        }
    }

    pub fn identity() -> Self {
        Self::new(Matrix3::identity(), Vector3::zeros())
    }

    pub fn from_translation(x: f64, y: f64, z: f64) -> Self {
        Self::new(Matrix3::identity(), Vector3::new(x, y, z))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    /// Orthonormal with determinant +1, within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let r = &self.rotation;
        (r.transpose() * r - Matrix3::identity()).amax() <= tol
            && (r.determinant() - 1.0).abs() <= tol
            && self.translation.iter().all(|v| v.is_finite())
    }
}

pub fn compose(a: &RigidTransform, b: &RigidTransform) -> RigidTransform {
    a.compose(b)
}

pub fn invert(a: &RigidTransform) -> RigidTransform {
    a.inverse()
}

#[derive(Serialize, Deserialize)]
struct TransformRepr {
    rotation: [[f64; 3]; 3],
    translation: [f64; 3],
}

impl From<TransformRepr> for RigidTransform {
    fn from(r: TransformRepr) -> Self {
        let m = &r.rotation;
        RigidTransform::new(
            Matrix3::new(
                m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
            ),
            Vector3::new(r.translation[0], r.translation[1], r.translation[2]),
        )
    }
}

impl From<RigidTransform> for TransformRepr {
    fn from(t: RigidTransform) -> Self {
        let r = &t.rotation;
        TransformRepr {
            rotation: [
                [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
                [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
                [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
            ],
            translation: [t.translation.x, t.translation.y, t.translation.z],
        }
    }
}
