#![allow(dead_code)]

use qcherenkov::{Dim, Geometry, HalfSpacePair, Limit, MediumSpec, Mode, System};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn nonretarded(eps: f64, v_over_v0: f64, dim: Dim) -> System {
    let pair = HalfSpacePair::identical(eps, v_over_v0, 0.0).unwrap();
    System::nonretarded(pair, Geometry::new(1.0, dim).unwrap())
}

pub fn random_dim(rng: &mut ChaCha8Rng) -> Dim {
    if rng.gen_bool(0.5) {
        Dim::Two
    } else {
        Dim::Three
    }
}

/// A mode strictly inside the superradiant window of `system`.
pub fn window_mode(rng: &mut ChaCha8Rng, system: &System) -> Mode {
    let v = system.velocity();
    let v01 = system.pair.body1.v0();
    let v02 = system.pair.body2.v0();
    let kappa = rng.gen_range(0.05..5.0) / system.gap();
    let t = rng.gen_range(0.01..0.99);
    let w = kappa * (v01 + t * (v.abs() - v01 - v02));
    let kx = v.signum() * kappa;
    match system.dim() {
        Dim::Two => Mode::line(w, kx),
        Dim::Three => {
            let reach = (w / v01).min((v.abs() * kappa - w) / v02);
            let big_k = (reach * reach - kappa * kappa).max(0.0).sqrt();
            Mode::plane(w, kx, big_k * rng.gen_range(-0.99..0.99))
        }
    }
}

/// A random nonretarded system above threshold together with a window mode.
pub fn superradiant_sample(rng: &mut ChaCha8Rng) -> (System, Mode) {
    let eps = rng.gen_range(1.2..8.0);
    let ratio = rng.gen_range(2.05..10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let s = nonretarded(eps, ratio, random_dim(rng));
    let m = window_mode(rng, &s);
    (s, m)
}

/// A mode with `omega > 0` that propagates in body 1, in a system that is
/// either nonretarded or retarded, with the shifted frequency of either sign.
pub fn incident_sample(rng: &mut ChaCha8Rng) -> (System, Mode) {
    let dim = random_dim(rng);
    let geometry = Geometry::new(rng.gen_range(0.2..2.0), dim).unwrap();
    let s = if rng.gen_bool(0.5) {
        let eps = rng.gen_range(1.2..8.0);
        let pair = HalfSpacePair::identical(eps, rng.gen_range(-8.0..8.0), 0.0).unwrap();
        System::nonretarded(pair, geometry)
    } else {
        let eps1 = rng.gen_range(4.0..25.0);
        let eps2 = rng.gen_range(4.0..25.0);
        let pair = HalfSpacePair::new(
            MediumSpec::new(eps1, 0.0, 0.0).unwrap(),
            MediumSpec::new(eps2, rng.gen_range(-0.95..0.95), 0.0).unwrap(),
        );
        System::new(pair, geometry, Limit::Retarded).unwrap()
    };
    let kx: f64 = rng.gen_range(0.05..4.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let ky: f64 = match dim {
        Dim::Two => 0.0,
        Dim::Three => rng.gen_range(-3.0..3.0),
    };
    let norm = kx.hypot(ky);
    let w = norm * s.pair.body1.v0() * rng.gen_range(1.001..4.0);
    let m = match dim {
        Dim::Two => Mode::line(w, kx),
        Dim::Three => Mode::plane(w, kx, ky),
    };
    (s, m)
}

/// A generic mode of a random nonretarded system, away from branch points.
pub fn generic_sample(rng: &mut ChaCha8Rng) -> (System, Mode) {
    let eps = rng.gen_range(1.2..8.0);
    let s = nonretarded(eps, rng.gen_range(-8.0..8.0), Dim::Two);
    let kx = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let w = rng.gen_range(-6.0..6.0);
    (s, Mode::line(w, kx))
}
