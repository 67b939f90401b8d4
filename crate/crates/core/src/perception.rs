//! Virtual pinhole camera, tag corner projection and the image-plane tether
//! state.

use nalgebra::{Matrix3, SMatrix, SVector, Vector2, Vector3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{rotation_x, wrap_angle, RigidTransform};

/// Pinhole camera. The optical axis is camera `+z`, image `x` runs along
/// camera `+x` and image `y` along camera `+y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    pub width: f64,
    pub height: f64,
    pub focal_length: f64,
    /// body → camera
    pub mount: RigidTransform,
}

impl CameraModel {
    /// Upward-looking camera on top of the underwater robot.
    pub fn underwater_default() -> Self {
        Self {
            width: 640.0,
            height: 480.0,
            focal_length: 400.0,
            mount: RigidTransform::from_translation(0.0, 0.0, 0.1),
        }
    }

    /// Downward-looking camera under the surface robot.
    pub fn surface_default() -> Self {
        Self {
            width: 640.0,
            height: 480.0,
            focal_length: 400.0,
            mount: RigidTransform::new(rotation_x(std::f64::consts::PI), Vector3::new(0.0, 0.0, -0.1)),
        }
    }

    pub fn center(&self) -> ImagePoint {
        ImagePoint::new(self.width / 2.0, self.height / 2.0)
    }

    pub fn project(&self, p: &Vector3<f64>) -> ImagePoint {
        ImagePoint::new(
            self.focal_length * p.x / p.z + self.width / 2.0,
            self.focal_length * p.y / p.z + self.height / 2.0,
        )
    }

    pub fn contains(&self, p: &ImagePoint) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    fn intrinsics(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.focal_length,
            0.0,
            self.width / 2.0,
            0.0,
            self.focal_length,
            self.height / 2.0,
            0.0,
            0.0,
            1.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0 && self.focal_length > 0.0) {
            return Err(Error::ConfigInvalid(
                "camera width, height and focal length must be positive".into(),
            ));
        }
        if !self.mount.is_valid(1e-6) {
            return Err(Error::ConfigInvalid("camera mount is not a rigid transform".into()));
        }
        Ok(())
    }
}

/// Square fiducial. In the tag frame the corners sit at
/// `a = (−s/2, −s/2)`, `b = (s/2, −s/2)`, `c = (s/2, s/2)`, `d = (−s/2, s/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagModel {
    pub side_length: f64,
    /// body → tag
    pub mount: RigidTransform,
}

impl TagModel {
    /// Tag on the top of the underwater robot, facing up.
    pub fn underwater_default() -> Self {
        Self {
            side_length: 0.15,
            mount: RigidTransform::new(rotation_x(std::f64::consts::PI), Vector3::new(0.0, 0.0, 0.1)),
        }
    }

    /// Tag under the surface robot, facing down.
    pub fn surface_default() -> Self {
        Self {
            side_length: 0.15,
            mount: RigidTransform::from_translation(0.0, 0.0, -0.1),
        }
    }

    pub fn corners(&self) -> [Vector3<f64>; 4] {
        let h = self.side_length / 2.0;
        [
            Vector3::new(-h, -h, 0.0),
            Vector3::new(h, -h, 0.0),
            Vector3::new(h, h, 0.0),
            Vector3::new(-h, h, 0.0),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.side_length > 0.0) {
            return Err(Error::ConfigInvalid("tag side length must be positive".into()));
        }
        if !self.mount.is_valid(1e-6) {
            return Err(Error::ConfigInvalid("tag mount is not a rigid transform".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ImagePoint {
    pub x: f64,
    pub y: f64,
}

impl ImagePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &ImagePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TagObservation {
    /// a, b, c, d
    pub corners: [ImagePoint; 4],
    /// Yaw of the tag about the optical axis, `ᶜψ`.
    pub camera_yaw: f64,
    pub timestamp: f64,
    pub detected: bool,
}

impl TagObservation {
    pub fn missing(timestamp: f64) -> Self {
        Self {
            timestamp,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionLabel {
    Safe,
    Elastic,
    Danger,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Safe => "safe",
            RegionLabel::Elastic => "elastic",
            RegionLabel::Danger => "danger",
        }
    }
}

impl std::str::FromStr for RegionLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "safe" => Ok(RegionLabel::Safe),
            "elastic" => Ok(RegionLabel::Elastic),
            "danger" => Ok(RegionLabel::Danger),
            other => Err(format!("unknown region `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetherState {
    pub xi: f64,
    pub center: ImagePoint,
}

/// Relative transform `camera ← tag` between an observer camera and a target
/// tag given both bodies' world poses.
pub fn camera_from_tag(
    world_from_observer: &RigidTransform,
    world_from_target: &RigidTransform,
    cam: &CameraModel,
    tag: &TagModel,
) -> RigidTransform {
    let world_from_camera = world_from_observer.compose(&cam.mount);
    let world_from_tag = world_from_target.compose(&tag.mount);
    world_from_camera.inverse().compose(&world_from_tag)
}

/// `ᶜψ` of a camera ← tag rotation.
pub fn yaw_about_optical_axis(camera_from_tag: &RigidTransform) -> f64 {
    let r = &camera_from_tag.rotation;
    wrap_angle(r[(1, 0)].atan2(r[(0, 0)]))
}

pub fn project_tag(
    world_from_observer: &RigidTransform,
    world_from_target: &RigidTransform,
    cam: &CameraModel,
    tag: &TagModel,
    t: f64,
) -> TagObservation {
    let rel = camera_from_tag(world_from_observer, world_from_target, cam, tag);
    let pts = tag.corners().map(|c| rel.transform_point(&c));
    let in_front = pts.iter().all(|p| p.z > 0.0);
    let corners = if in_front {
        pts.map(|p| cam.project(&p))
    } else {
        [ImagePoint::default(); 4]
    };
    let detected = in_front && corners.iter().all(|c| cam.contains(c));
    TagObservation {
        corners,
        camera_yaw: yaw_about_optical_axis(&rel),
        timestamp: t,
        detected,
    }
}

/// Tag center, mean side length `l̄` and mean diagonal `h̄` in pixels.
pub fn tag_geometry(obs: &TagObservation) -> Result<(ImagePoint, f64, f64)> {
    if !obs.detected {
        return Err(Error::NotDetected);
    }
    let [a, b, c, d] = obs.corners;
    let center = ImagePoint::new(
        (a.x + b.x + c.x + d.x) / 4.0,
        (a.y + b.y + c.y + d.y) / 4.0,
    );
    let l = (a.distance(&b) + b.distance(&c) + c.distance(&d) + a.distance(&d)) / 4.0;
    let h = (a.distance(&c) + b.distance(&d)) / 2.0;
    Ok((center, l, h))
}

pub fn classify_region(center: &ImagePoint, l: f64, h: f64, cam: &CameraModel) -> RegionLabel {
    let (w, v) = (cam.width, cam.height);
    let inside = |x: f64, lo: f64, hi: f64| lo < x && x < hi;
    if inside(center.x, (w - l) / 2.0, (w + l) / 2.0) && inside(center.y, (v - l) / 2.0, (v + l) / 2.0)
    {
        RegionLabel::Safe
    } else if inside(center.x, h, w - h) && inside(center.y, h, v - h) {
        RegionLabel::Elastic
    } else {
        RegionLabel::Danger
    }
}

pub fn tether_state(obs: &TagObservation, cam: &CameraModel) -> Result<TetherState> {
    let (center, _, _) = tag_geometry(obs)?;
    Ok(TetherState {
        xi: center.distance(&cam.center()),
        center,
    })
}

/// Which robot's camera is affected by a [`DropoutModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropoutTarget {
    #[default]
    Underwater,
    Surface,
    Both,
}

impl DropoutTarget {
    pub fn affects_underwater(self) -> bool {
        matches!(self, DropoutTarget::Underwater | DropoutTarget::Both)
    }

    pub fn affects_surface(self) -> bool {
        matches!(self, DropoutTarget::Surface | DropoutTarget::Both)
    }
}

/// Scheduled and random loss of tag detections.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DropoutModel {
    #[serde(default)]
    pub scheduled_windows: Vec<[f64; 2]>,
    #[serde(default)]
    pub random_rate: f64,
    #[serde(default)]
    pub target: DropoutTarget,
}

impl DropoutModel {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.random_rate) {
            return Err(Error::ConfigInvalid("dropout random_rate must be in [0, 1)".into()));
        }
        let mut prev_end = f64::NEG_INFINITY;
        for &[a, b] in &self.scheduled_windows {
            if !(a.is_finite() && b.is_finite() && a <= b && a >= prev_end) {
                return Err(Error::ConfigInvalid(
                    "dropout windows must be ordered and non-overlapping".into(),
                ));
            }
            prev_end = b;
        }
        Ok(())
    }

    pub fn in_window(&self, t: f64) -> bool {
        self.scheduled_windows.iter().any(|&[a, b]| a <= t && t <= b)
    }
}

/// Forces a non-detection inside scheduled windows or with probability
/// `random_rate`. Exactly one draw is taken from `rng` per call.
pub fn apply_dropout(
    obs: &TagObservation,
    model: &DropoutModel,
    t: f64,
    rng: &mut ChaCha8Rng,
) -> TagObservation {
    let draw: f64 = rng.random();
    let mut out = *obs;
    if model.in_window(t) || draw < model.random_rate {
        out.detected = false;
    }
    out
}

/// Recovers `camera ← tag` from the four corners of a detected observation
/// using a plane-induced homography.
pub fn estimate_tag_pose(
    obs: &TagObservation,
    cam: &CameraModel,
    tag: &TagModel,
) -> Result<RigidTransform> {
    if !obs.detected {
        return Err(Error::NotDetected);
    }
    let model = tag.corners();
    let mut a = SMatrix::<f64, 8, 8>::zeros();
    let mut rhs = SVector::<f64, 8>::zeros();
    for (i, (m, p)) in model.iter().zip(&obs.corners).enumerate() {
        let (x, y, u, v) = (m.x, m.y, p.x, p.y);
        let r0 = 2 * i;
        a.row_mut(r0)
            .copy_from_slice(&[x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y]);
        a.row_mut(r0 + 1)
            .copy_from_slice(&[0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y]);
        rhs[r0] = u;
        rhs[r0 + 1] = v;
    }
    let h = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::ConfigInvalid("degenerate tag corners".into()))?;
    let hom = Matrix3::new(h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0);
    let k_inv = cam
        .intrinsics()
        .try_inverse()
        .ok_or_else(|| Error::ConfigInvalid("singular intrinsics".into()))?;
    let g = k_inv * hom;
    let (g1, g2, g3) = (g.column(0).into_owned(), g.column(1).into_owned(), g.column(2).into_owned());
    let mut scale = 2.0 / (g1.norm() + g2.norm());
    if g3.z * scale < 0.0 {
        scale = -scale;
    }
    let r1 = g1 * scale;
    let r2 = g2 * scale;
    let r3 = r1.cross(&r2);
    let approx = Matrix3::from_columns(&[r1, r2, r3]);
    let svd = approx.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut rot = u * vt;
    if rot.determinant() < 0.0 {
        rot = u * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)) * vt;
    }
    Ok(RigidTransform::new(rot, g3 * scale))
}

/// Normalized image error `((x − W/2)/(W/2), (y − V/2)/(V/2))`.
pub fn normalized_offset(p: &ImagePoint, cam: &CameraModel) -> Vector2<f64> {
    let half = Vector2::new(cam.width / 2.0, cam.height / 2.0);
    Vector2::new((p.x - half.x) / half.x, (p.y - half.y) / half.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{rotation_z, Pose3, Pose6};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn plain_cam() -> CameraModel {
        CameraModel {
            mount: RigidTransform::identity(),
            ..CameraModel::underwater_default()
        }
    }

    fn plain_tag(side: f64) -> TagModel {
        TagModel {
            side_length: side,
            mount: RigidTransform::identity(),
        }
    }

    fn square(x0: f64, y0: f64, s: f64) -> TagObservation {
        TagObservation {
            corners: [
                ImagePoint::new(x0, y0),
                ImagePoint::new(x0 + s, y0),
                ImagePoint::new(x0 + s, y0 + s),
                ImagePoint::new(x0, y0 + s),
            ],
            detected: true,
            ..TagObservation::default()
        }
    }

    #[test]
    fn on_axis_tag_projects_to_center() {
        let obs = project_tag(
            &RigidTransform::identity(),
            &RigidTransform::from_translation(0.0, 0.0, 1.0),
            &plain_cam(),
            &plain_tag(0.1),
            0.0,
        );
        assert!(obs.detected);
        let (c, l, _) = tag_geometry(&obs).unwrap();
        assert_abs_diff_eq!(c.x, 320.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.y, 240.0, epsilon = 1e-9);
        // f·s/d = 400·0.1/1
        assert_abs_diff_eq!(l, 40.0, epsilon = 1e-9);
    }

    #[test]
    fn tag_behind_camera_is_not_detected() {
        let obs = project_tag(
            &RigidTransform::identity(),
            &RigidTransform::from_translation(0.0, 0.0, -1.0),
            &plain_cam(),
            &plain_tag(0.1),
            0.0,
        );
        assert!(!obs.detected);
    }

    #[test]
    fn tag_out_of_frame_is_not_detected() {
        let obs = project_tag(
            &RigidTransform::identity(),
            &RigidTransform::from_translation(1.0, 0.0, 0.5),
            &plain_cam(),
            &plain_tag(0.1),
            0.0,
        );
        assert!(!obs.detected);
    }

    #[test]
    fn geometry_examples() {
        let (c, l, h) = tag_geometry(&square(300.0, 220.0, 40.0)).unwrap();
        assert_eq!((c.x, c.y), (320.0, 240.0));
        assert_abs_diff_eq!(l, 40.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h, 40.0 * 2f64.sqrt(), epsilon = 1e-12);

        let (_, l, h) = tag_geometry(&square(10.0, 10.0, 0.0)).unwrap();
        assert_eq!((l, h), (0.0, 0.0));

        assert_eq!(
            tag_geometry(&TagObservation::missing(0.0)).unwrap_err(),
            Error::NotDetected
        );
    }

    #[test]
    fn region_examples() {
        let cam = plain_cam();
        assert_eq!(classify_region(&ImagePoint::new(320.0, 240.0), 100.0, 60.0, &cam), RegionLabel::Safe);
        assert_eq!(classify_region(&ImagePoint::new(100.0, 240.0), 100.0, 60.0, &cam), RegionLabel::Elastic);
        assert_eq!(classify_region(&ImagePoint::new(20.0, 240.0), 100.0, 60.0, &cam), RegionLabel::Danger);
    }

    #[test]
    fn region_partition_is_exhaustive() {
        let cam = plain_cam();
        for (l, h) in [(1.0, 1.0), (40.0, 56.6), (100.0, 60.0), (479.0, 239.0)] {
            let mut counts = [0usize; 3];
            for x in 0..=640 {
                for y in 0..=480 {
                    let r = classify_region(&ImagePoint::new(x as f64, y as f64), l, h, &cam);
                    counts[r as usize] += 1;
                }
            }
            assert_eq!(counts.iter().sum::<usize>(), 641 * 481);
            assert!(counts[RegionLabel::Safe as usize] > 0);
            assert!(counts[RegionLabel::Danger as usize] > 0);
        }
    }

    #[test]
    fn tether_state_examples() {
        let cam = plain_cam();
        let xi = |x: f64, y: f64| tether_state(&square(x - 5.0, y - 5.0, 10.0), &cam).unwrap().xi;
        assert_abs_diff_eq!(xi(320.0, 240.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(xi(350.0, 280.0), 50.0, epsilon = 1e-12);
        assert_abs_diff_eq!(xi(0.0, 0.0), 400.0, epsilon = 1e-12);
    }

    #[test]
    fn dropout_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let obs = square(300.0, 220.0, 40.0);
        let windowed = DropoutModel {
            scheduled_windows: vec![[1.0, 2.0]],
            ..DropoutModel::default()
        };
        let dropped = apply_dropout(&obs, &windowed, 1.5, &mut rng);
        assert!(!dropped.detected);
        assert_eq!(dropped.corners, obs.corners);
        assert_eq!(apply_dropout(&obs, &DropoutModel::default(), 1.5, &mut rng), obs);
    }

    #[test]
    fn random_dropout_rate_is_binomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = 1.0 - 1e-3;
        let model = DropoutModel {
            random_rate: p,
            ..DropoutModel::default()
        };
        let n = 10_000;
        let obs = square(300.0, 220.0, 40.0);
        let drops = (0..n)
            .filter(|_| !apply_dropout(&obs, &model, 0.0, &mut rng).detected)
            .count() as f64;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((drops - n as f64 * p).abs() <= 3.0 * sigma.max(1.0), "{drops}");
    }

    #[test]
    fn dropout_validation() {
        let bad = DropoutModel {
            scheduled_windows: vec![[2.0, 3.0], [1.0, 1.5]],
            ..DropoutModel::default()
        };
        assert!(bad.validate().is_err());
        let bad = DropoutModel {
            random_rate: 1.0,
            ..DropoutModel::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn default_mounts_see_each_other_in_formation() {
        let u = Pose6::new(0.0, 0.0, -1.0, 0.0, 0.0, 0.0).to_transform();
        let s = Pose3::new(0.0, 0.0, 0.0).to_transform();
        let us = project_tag(&u, &s, &CameraModel::underwater_default(), &TagModel::surface_default(), 0.0);
        let su = project_tag(&s, &u, &CameraModel::surface_default(), &TagModel::underwater_default(), 0.0);
        for obs in [us, su] {
            assert!(obs.detected);
            let (c, l, _) = tag_geometry(&obs).unwrap();
            assert_abs_diff_eq!(c.x, 320.0, epsilon = 1e-9);
            assert_abs_diff_eq!(c.y, 240.0, epsilon = 1e-9);
            assert_abs_diff_eq!(l, 400.0 * 0.15 / 0.8, epsilon = 1e-9);
            assert_abs_diff_eq!(obs.camera_yaw, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn camera_yaw_is_relative_heading() {
        let u = Pose6::new(0.0, 0.0, -1.0, 0.0, 0.0, 0.2).to_transform();
        let s = Pose3::new(0.0, 0.0, 0.5).to_transform();
        let us = project_tag(&u, &s, &CameraModel::underwater_default(), &TagModel::surface_default(), 0.0);
        let su = project_tag(&s, &u, &CameraModel::surface_default(), &TagModel::underwater_default(), 0.0);
        assert_abs_diff_eq!(us.camera_yaw, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(su.camera_yaw, 0.3, epsilon = 1e-12);
    }

    fn in_frustum_pose() -> impl Strategy<Value = RigidTransform> {
        (
            -0.2f64..0.2,
            -0.2f64..0.2,
            0.5f64..2.0,
            -std::f64::consts::PI..std::f64::consts::PI,
            -0.4f64..0.4,
            -0.4f64..0.4,
        )
            .prop_map(|(x, y, z, yaw, rx, ry)| {
                let rot = rotation_z(yaw) * rotation_x(rx) * crate::frames::rotation_body_to_world(
                    &crate::frames::EulerAngles::new(0.0, ry, 0.0),
                );
                RigidTransform::new(rot, Vector3::new(x, y, z))
            })
    }

    proptest! {
        #[test]
        fn geometry_is_translation_invariant(x in 0.0f64..500.0, y in 0.0f64..400.0, s in 1.0f64..80.0,
                                             dx in -50.0f64..50.0, dy in -50.0f64..50.0) {
            let a = tag_geometry(&square(x, y, s)).unwrap();
            let b = tag_geometry(&square(x + dx, y + dy, s)).unwrap();
            prop_assert!((b.0.x - a.0.x - dx).abs() < 1e-9);
            prop_assert!((b.0.y - a.0.y - dy).abs() < 1e-9);
            prop_assert!((b.1 - a.1).abs() < 1e-9);
            prop_assert!((b.2 - a.2).abs() < 1e-9);
        }

        #[test]
        fn geometry_is_invariant_under_cyclic_relabel(pts in prop::array::uniform8(0.0f64..600.0), k in 0usize..4) {
            let mut obs = TagObservation { detected: true, ..TagObservation::default() };
            for i in 0..4 {
                obs.corners[i] = ImagePoint::new(pts[2 * i], pts[2 * i + 1]);
            }
            let mut rot = obs;
            rot.corners.rotate_left(k);
            let a = tag_geometry(&obs).unwrap();
            let b = tag_geometry(&rot).unwrap();
            prop_assert!((a.0.x - b.0.x).abs() < 1e-9 && (a.0.y - b.0.y).abs() < 1e-9);
            prop_assert!((a.1 - b.1).abs() < 1e-9);
            prop_assert!((a.2 - b.2).abs() < 1e-9);
        }

        #[test]
        fn growing_safe_box_only_moves_toward_safe(x in 0.0f64..640.0, y in 0.0f64..480.0,
                                                   l in 0.0f64..400.0, dl in 0.0f64..80.0, h in 0.0f64..240.0) {
            let cam = plain_cam();
            let c = ImagePoint::new(x, y);
            let before = classify_region(&c, l, h, &cam);
            let after = classify_region(&c, l + dl, h, &cam);
            let rank = |r: RegionLabel| match r { RegionLabel::Safe => 0, RegionLabel::Elastic => 1, RegionLabel::Danger => 2 };
            prop_assert!(rank(after) <= rank(before));
        }

        #[test]
        fn camera_yaw_round_trips_through_corners(pose in in_frustum_pose()) {
            let cam = plain_cam();
            let tag = plain_tag(0.15);
            let obs = project_tag(&RigidTransform::identity(), &pose, &cam, &tag, 0.0);
            prop_assume!(obs.detected);
            let est = estimate_tag_pose(&obs, &cam, &tag).unwrap();
            prop_assert!(wrap_angle(yaw_about_optical_axis(&est) - obs.camera_yaw).abs() < 1e-6);
            prop_assert!((est.translation - pose.translation).norm() < 1e-6);
            prop_assert!((est.rotation - pose.rotation).amax() < 1e-6);
        }
    }
}
