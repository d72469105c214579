//! One-shot run of the cross-pipeline identities on seeded random modes.

use num_complex::Complex64;
use qcherenkov::observables::friction_estimate;
use qcherenkov::rytov::{fluxes, frame_report, gap_correlator, greens, GreensKind};
use qcherenkov::scattering::{
    reflection_pair, s21_closed_form, smatrix_solve, superunitarity_residual,
};
use qcherenkov::thermal::a_weight;
use qcherenkov::{Dim, Geometry, HalfSpacePair, Limit, MediumSpec, Mode, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, Settings};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub program: String,
    /// Settings that reproduce the run.
    pub config: Settings,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn check(name: &str, residual: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        residual,
        tolerance,
        pass: residual <= tolerance,
        detail,
    }
}

fn sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

fn dim(rng: &mut ChaCha8Rng) -> Dim {
    if rng.gen_bool(0.5) {
        Dim::Two
    } else {
        Dim::Three
    }
}

fn identical(eps: f64, v_over_v0: f64, dim: Dim, gap: f64) -> System {
    let pair = HalfSpacePair::identical(eps, v_over_v0, 0.0).expect("valid medium");
    System::nonretarded(pair, Geometry::new(gap, dim).expect("valid geometry"))
}

/// A nonretarded system above threshold and a mode inside its window.
fn window_sample(rng: &mut ChaCha8Rng) -> (System, Mode) {
    let s = identical(
        rng.gen_range(1.2..8.0),
        sign(rng) * rng.gen_range(2.05..10.0),
        dim(rng),
        1.0,
    );
    let v = s.velocity();
    let v0 = s.pair.body1.v0();
    let kappa = rng.gen_range(0.05..5.0);
    let w = kappa * (v0 + rng.gen_range(0.01..0.99) * (v.abs() - 2.0 * v0));
    let kx = v.signum() * kappa;
    let m = match s.dim() {
        Dim::Two => Mode::line(w, kx),
        Dim::Three => {
            let reach = (w / v0).min((v.abs() * kappa - w) / v0);
            let big_k = (reach * reach - kappa * kappa).max(0.0).sqrt();
            Mode::plane(w, kx, big_k * rng.gen_range(-0.99..0.99))
        }
    };
    (s, m)
}

/// A positive-frequency mode propagating in body 1, with or without
/// retardation; the shifted frequency takes either sign.
fn incident_sample(rng: &mut ChaCha8Rng) -> (System, Mode) {
    let d = dim(rng);
    let geometry = Geometry::new(rng.gen_range(0.2..2.0), d).expect("valid geometry");
    let s = if rng.gen_bool(0.5) {
        let pair = HalfSpacePair::identical(rng.gen_range(1.2..8.0), rng.gen_range(-8.0..8.0), 0.0)
            .expect("valid medium");
        System::nonretarded(pair, geometry)
    } else {
        let pair = HalfSpacePair::new(
            MediumSpec::new(rng.gen_range(4.0..25.0), 0.0, 0.0).expect("valid medium"),
            MediumSpec::new(rng.gen_range(4.0..25.0), rng.gen_range(-0.95..0.95), 0.0)
                .expect("valid medium"),
        );
        System::new(pair, geometry, Limit::Retarded).expect("subluminal")
    };
    let kx: f64 = sign(rng) * rng.gen_range(0.05..4.0);
    let ky: f64 = match d {
        Dim::Two => 0.0,
        Dim::Three => rng.gen_range(-3.0..3.0),
    };
    let w = kx.hypot(ky) * s.pair.body1.v0() * rng.gen_range(1.001..4.0);
    let m = match d {
        Dim::Two => Mode::line(w, kx),
        Dim::Three => Mode::plane(w, kx, ky),
    };
    (s, m)
}

/// Second-order one-sided difference, extrapolated twice to fourth order.
fn one_sided(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    let d = |h: f64| (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
    let r = |h: f64| (4.0 * d(0.5 * h) - d(h)) / 3.0;
    (8.0 * r(0.5 * h) - r(h)) / 7.0
}

fn superunitarity(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let (mut worst, mut neg, mut singular) = (0.0f64, 0, 0);
    for _ in 0..n {
        let (s, m) = incident_sample(rng);
        match smatrix_solve(&m, &s) {
            Ok(sol) => {
                let scale = 1.0 + sol.s11.norm_sqr();
                worst = worst.max(superunitarity_residual(&sol).abs() / scale);
                neg += usize::from(sol.transmitted_open && sol.shifted_omega < 0.0);
            }
            Err(_) => singular += 1,
        }
    }
    check(
        "superunitarity",
        worst,
        1e-10,
        format!("{n} modes, {neg} with negative shifted frequency, {singular} singular, relative to 1 + |S11|^2"),
    )
}

fn closed_form(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (s, m) = window_sample(rng);
        let (r1, r2, w) = reflection_pair(&m, &s).expect("valid mode");
        let closed = s21_closed_form(r1.value, r2.value, w.k_perp_gap.im, s.gap());
        let solved = smatrix_solve(&m, &s)
            .map(|x| x.s21.norm_sqr())
            .unwrap_or(f64::NAN);
        worst = worst.max(((closed - solved) / closed).abs());
    }
    check(
        "closed form vs matching system",
        worst,
        1e-12,
        format!("{n} window modes, relative"),
    )
}

fn amplitude_identity(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (s, m) = window_sample(rng);
        let g = greens(&m, &s, GreensKind::InIn).expect("valid mode");
        let lhs = g.coeffs.v.norm_sqr() - g.coeffs.w.norm_sqr();
        let rhs = g.p.norm() / g.p_body.re * 2.0 * g.r1.im;
        worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
    }
    check(
        "|V|^2 - |W|^2 = (|p|/p~) 2 Im R",
        worst,
        1e-12,
        format!("{n} window modes"),
    )
}

fn generic_sample(rng: &mut ChaCha8Rng) -> (System, Mode) {
    let s = identical(
        rng.gen_range(1.2..8.0),
        rng.gen_range(-8.0..8.0),
        Dim::Two,
        1.0,
    );
    let kx = sign(rng) * rng.gen_range(0.1..3.0);
    (s, Mode::line(rng.gen_range(-6.0..6.0), kx))
}

fn kernel_contract(rng: &mut ChaCha8Rng, n: usize) -> [CheckResult; 2] {
    let (mut jump_err, mut cont_err, mut jumps, mut joins) = (0.0f64, 0.0f64, 0, 0);
    for _ in 0..n {
        let (s, m) = generic_sample(rng);
        for (kind, z) in [
            (GreensKind::OutOut, 0.37 * s.gap()),
            (GreensKind::InIn, -0.6 * s.gap()),
        ] {
            let Ok(g) = greens(&m, &s, kind) else {
                continue;
            };
            let h = 2e-3 / g.p.norm().max(g.p_body.norm()).max(1.0);
            let jump = one_sided(|x| g.eval(x, z), z, h) - one_sided(|x| g.eval(x, z), z, -h);
            jump_err = jump_err.max((jump + 1.0).norm());
            jumps += 1;
        }
        let Ok(g) = greens(&m, &s, GreensKind::OutIn) else {
            continue;
        };
        for x in [0.3 * s.gap(), -0.4 * s.gap()] {
            let inside = g.derivatives(x, -1e-300);
            let outside = g.derivatives(x, 0.0);
            let scale = inside[0].norm() + inside[2].norm() + 1e-300;
            cont_err = cont_err
                .max((inside[0] - outside[0]).norm() / scale)
                .max((inside[2] - outside[2]).norm() / scale);
            joins += 1;
        }
    }
    [
        check(
            "Green's kernel derivative jump",
            jump_err,
            1e-10,
            format!("{jumps} kernels, finite differences"),
        ),
        check(
            "Green's kernel interface continuity",
            cont_err,
            1e-12,
            format!("{joins} source points, relative"),
        ),
    ]
}

fn equilibrium(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let temp = rng.gen_range(0.0..5.0);
        let body = MediumSpec::new(rng.gen_range(1.2..8.0), 0.0, temp).expect("valid medium");
        let s = System::nonretarded(
            HalfSpacePair::new(body, body),
            Geometry::new(1.0, Dim::Two).expect("valid geometry"),
        );
        let w = sign(rng) * rng.gen_range(0.05..6.0);
        let m = Mode::line(w, sign(rng) * rng.gen_range(0.1..3.0));
        let x = rng.gen_range(0.05..0.95);
        let c = gap_correlator(&m, &s).expect("valid mode");
        let expected = a_weight(w, temp) * c.im_greens(x, x);
        worst = worst.max((c.total(x, x) - expected).norm() / expected.norm().max(1e-12));
    }
    check(
        "equilibrium fluctuation-dissipation",
        worst,
        1e-8,
        format!("{n} modes at v = 0"),
    )
}

fn integrals(cfg: &RunConfig) -> Result<Vec<CheckResult>, CliError> {
    let q = &cfg.quadrature;
    let v0 = cfg.v0;
    let mut out = Vec::new();

    let below = friction_estimate(&cfg.system(2.0 * v0)?, q)?;
    let above = friction_estimate(&cfg.system(2.1 * v0)?, q)?;
    out.push(check(
        "threshold",
        if above.g > 0.0 {
            below.g.abs()
        } else {
            f64::INFINITY
        },
        0.0,
        format!("g(2) = {:e}, g(2.1) = {:e}", below.g, above.g),
    ));

    let ratio = cfg
        .velocity
        .map(|v| v / v0)
        .filter(|r| r.abs() > 2.0)
        .unwrap_or(4.0);
    let s = cfg.system(ratio * v0)?;
    let g = friction_estimate(&s, q)?;
    let lab = fluxes(&s, q)?;
    let g_rytov = lab.f * s.gap().powi(s.dim().value() as i32 + 1) / v0;
    out.push(check(
        "pipeline equivalence",
        ((g_rytov - g.g) / g.g).abs(),
        1e-6,
        format!("v/v0 = {ratio}, D = {}: g = {:e}", s.dim().value(), g.g),
    ));

    let report = frame_report(&s, q, 1000)?;
    for (name, residual, tolerance) in report.checks() {
        out.push(check(name, residual, tolerance, format!("v/v0 = {ratio}")));
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Result<ValidationReport, CliError> {
    if cfg.limit != Limit::NonRetarded || cfg.t1 != 0.0 || cfg.t2 != 0.0 {
        return Err(CliError::config(
            "validate runs without retardation at zero temperature",
        ));
    }
    let n = cfg.samples;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = vec![
        superunitarity(&mut rng, n),
        closed_form(&mut rng, n),
        amplitude_identity(&mut rng, n),
    ];
    checks.extend(kernel_contract(&mut rng, n.min(100)));
    checks.push(equilibrium(&mut rng, n.min(100)));
    checks.extend(integrals(cfg)?);
    let pass = checks.iter().all(|c| c.pass);
    Ok(ValidationReport {
        program: format!("qcherenkov {}", env!("CARGO_PKG_VERSION")),
        config: cfg.echo(),
        seed: cfg.seed,
        samples: n,
        checks,
        pass,
        notes: vec![
            "P1 = P2 = v f / 2 is checked in the rest frames of both bodies and the centre-of-mass frame only; the claim for arbitrary frames is unverified".to_string(),
        ],
    })
}
