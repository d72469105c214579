//! Table-producing commands.

use qcherenkov::observables::g_curve;
use qcherenkov::rytov::{fluxes, frame_report};
use qcherenkov::scattering::{
    reflection_pair, s21_closed_form, superradiant_window, superunitarity_residual, ModeClass,
};
use qcherenkov::{smatrix_solve, Dim, FrictionResult, Limit, Mode};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, opt_num, Table};

fn class_name(c: ModeClass) -> &'static str {
    match c {
        ModeClass::PropagatingBoth => "propagating",
        ModeClass::SuperradiantCapable => "superradiant-capable",
        ModeClass::FullyEvanescent => "evanescent",
        ModeClass::GapOnly => "gap-only",
    }
}

/// The single lab-frame mode given by `--omega`, `--kx` and `--ky`.
pub fn mode(cfg: &RunConfig) -> Result<Mode, CliError> {
    let (Some(w), Some(kx)) = (cfg.omega, cfg.kx) else {
        return Err(CliError::config(format!(
            "{} needs --omega and --kx",
            cfg.command.name()
        )));
    };
    match (cfg.dim, cfg.ky) {
        (Dim::Two, None) => Ok(Mode::line(w, kx)),
        (Dim::Two, Some(_)) => Err(CliError::config("--ky needs --D 3")),
        (Dim::Three, ky) => Ok(Mode::plane(w, kx, ky.unwrap_or(0.0))),
    }
}

pub fn reflection(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = cfg.system(cfg.velocity.unwrap_or(0.0))?;
    let m = mode(cfg)?;
    let (r1, r2, w) = reflection_pair(&m, &s)?;
    let mut t = Table::new(&["body", "omega", "re_r", "im_r", "abs_r", "class"]);
    for (body, omega, r) in [("1", w.omega, r1), ("2", w.shifted_omega, r2)] {
        t.push(vec![
            body.to_string(),
            num(omega),
            num(r.value.re),
            num(r.value.im),
            num(r.value.norm()),
            class_name(r.class).to_string(),
        ]);
    }
    Ok(t)
}

pub fn smatrix(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = cfg.system(cfg.velocity.unwrap_or(0.0))?;
    let m = mode(cfg)?;
    let sol = smatrix_solve(&m, &s)?;
    let (r1, r2, w) = reflection_pair(&m, &s)?;
    let closed = w
        .gap_evanescent()
        .then(|| s21_closed_form(r1.value, r2.value, w.k_perp_gap.im, s.gap()));
    let mut t = Table::new(&[
        "omega",
        "shifted_omega",
        "re_s11",
        "im_s11",
        "re_s21",
        "im_s21",
        "s11_sq",
        "s21_sq",
        "s21_sq_closed_form",
        "superunitarity_residual",
    ]);
    t.push(vec![
        num(m.omega),
        num(sol.shifted_omega),
        num(sol.s11.re),
        num(sol.s11.im),
        num(sol.s21.re),
        num(sol.s21.im),
        num(sol.s11.norm_sqr()),
        num(sol.s21.norm_sqr()),
        opt_num(closed),
        num(superunitarity_residual(&sol)),
    ]);
    if !sol.transmitted_open {
        t.notes
            .push("transmitted wave is evanescent in body 2".to_string());
    }
    Ok(t)
}

/// The friction curve; unconverged points stay in the table and are listed
/// in the notes.
pub fn friction_curve(cfg: &RunConfig) -> Result<(Table, Vec<FrictionResult>), CliError> {
    let ratios = cfg.ratios()?;
    let base = cfg.system(0.0)?;
    let curve = g_curve(&base, &ratios, &cfg.quadrature)?;
    let mut t = Table::new(&["v_over_v0", "g", "g_err", "n_evals"]);
    for (i, p) in curve.points.iter().enumerate() {
        t.push(vec![
            num(ratios[i]),
            num(p.g),
            num(p.g_err),
            p.n_evals.to_string(),
        ]);
        if !p.converged {
            t.notes.push(format!(
                "not converged: row {i} v_over_v0 = {}",
                num(ratios[i])
            ));
        }
    }
    Ok((t, curve.points))
}

/// Power budget per frame. The identity residuals go into the notes and
/// violations are returned alongside the table.
pub fn radiation(cfg: &RunConfig) -> Result<(Table, Vec<String>), CliError> {
    let v = cfg.require_velocity()?;
    let s = cfg.system(v)?;
    let mut t = Table::new(&["frame", "f", "p_gap", "p1", "p2"]);
    let mut violations = Vec::new();
    let zero_t = cfg.t1 == 0.0 && cfg.t2 == 0.0;
    let budgets = if zero_t && cfg.limit == Limit::NonRetarded {
        let r = frame_report(&s, &cfg.quadrature, 1000)?;
        for (name, residual, tol) in r.checks() {
            let ok = residual <= tol;
            t.notes.push(format!(
                "{name}: residual {} tolerance {} {}",
                num(residual),
                num(tol),
                if ok { "ok" } else { "VIOLATED" }
            ));
            if !ok {
                violations.push(format!(
                    "{name}: residual {} exceeds {}",
                    num(residual),
                    num(tol)
                ));
            }
        }
        t.notes.push(
            "P1 = P2 = v f / 2 is checked in the rest frames of both bodies and the centre-of-mass frame only; other frames are unverified".to_string(),
        );
        r.budgets
    } else if zero_t {
        t.notes
            .push("retarded: frame identities are not checked, body 1 rest frame only".to_string());
        vec![fluxes(&s, &cfg.quadrature)?]
    } else {
        t.notes
            .push("finite temperature: absorbed powers are not computed".to_string());
        vec![fluxes(&s, &cfg.quadrature)?]
    };
    for b in budgets {
        if !b.converged {
            return Err(CliError::NotConverged(format!(
                "{} frame budget did not converge",
                b.frame.name()
            )));
        }
        t.push(vec![
            b.frame.name().to_string(),
            num(b.f),
            num(b.p_gap),
            opt_num(b.p1),
            opt_num(b.p2),
        ]);
    }
    Ok((t, violations))
}

pub fn spectrum(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "v_over_v0",
        "window_lo_slope",
        "window_hi_slope",
        "nonempty",
    ]);
    for x in cfg.ratios()? {
        let s = cfg.system(x * cfg.v0)?;
        let w = superradiant_window(&s.pair);
        t.push(vec![
            num(x),
            num(w.slope_lo),
            num(w.slope_hi),
            w.nonempty.to_string(),
        ]);
    }
    Ok(t)
}
