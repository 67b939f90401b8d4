use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nalgebra::{DVector, Vector2};
use vet_core::control::vet_law;
use vet_core::frames::{Pose3, Pose6};
use vet_core::perception::{estimate_tag_pose, project_tag};
use vet_core::vehicle::{ExternalWrench, UnderwaterState};
use vet_core::{preset, run, CameraModel, TagModel, VehicleParams, VetGains};

fn vehicle(c: &mut Criterion) {
    let p = VehicleParams::underwater_default();
    let tau = DVector::from_column_slice(&[3.0, -1.5, 0.8, 0.0, 0.0, 0.05]);
    let s = UnderwaterState::new(Pose6::new(0.0, 0.0, -1.0, 0.1, -0.1, 0.3));
    c.bench_function("underwater_step", |b| {
        b.iter(|| black_box(s).step(&tau, &ExternalWrench::default(), &p, 0.02).unwrap())
    });
}

fn perception(c: &mut Criterion) {
    let cam = CameraModel::surface_default();
    let tag = TagModel::underwater_default();
    let s = Pose3::new(0.0, 0.0, 0.2).to_transform();
    let u = Pose6::new(0.05, -0.03, -0.9, 0.02, 0.01, 0.4).to_transform();
    c.bench_function("project_tag", |b| {
        b.iter(|| project_tag(black_box(&s), black_box(&u), &cam, &tag, 0.0))
    });
    let obs = project_tag(&s, &u, &cam, &tag, 0.0);
    c.bench_function("estimate_tag_pose", |b| {
        b.iter(|| estimate_tag_pose(black_box(&obs), &cam, &tag).unwrap())
    });
    let g = VetGains::default();
    c.bench_function("vet_law", |b| {
        b.iter(|| vet_law(black_box(&obs), &Vector2::zeros(), &g, &cam))
    });
}

fn scenario(c: &mut Criterion) {
    let mut cfg = preset("perturbation_sim").unwrap();
    cfg.duration = 10.0;
    let mut group = c.benchmark_group("scenario");
    group.sample_size(20);
    group.bench_function("perturbation_sim_10s", |b| b.iter(|| run(black_box(&cfg)).unwrap()));
    group.finish();
}

criterion_group!(benches, vehicle, perception, scenario);
criterion_main!(benches);
