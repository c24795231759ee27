use std::collections::BTreeSet;

use vactorque::geometry::{voxel_factor, Body};
use vactorque::materials::{xab, ThermalState};
use vactorque::observables::{
    cooling_prefactor, large_limit_prefactor, small_limit_prefactor, terminal_angular_velocity,
    torque_large_limit, torque_second_order, torque_small_limit, Regime,
};
use vactorque::sweeps::{cooling_sweep, geometry_factor_sweep, omega_hat_sweep};
use vactorque::{Error, Result};

use crate::config::{parse_grid, Settings};
use crate::output::Table;

#[derive(Default)]
struct Warnings(BTreeSet<String>);

impl Warnings {
    fn extend<I: IntoIterator<Item = String>>(&mut self, w: I) {
        self.0.extend(w);
    }

    fn emit(self) {
        for w in self.0 {
            eprintln!("warning: {w}");
        }
    }
}

pub fn geometry_factor(s: &Settings) -> Result<Table> {
    let a = parse_grid("a_tilde", &s.sweep.a_tilde)?;
    let points: Vec<(f64, f64)> = match &s.sweep.b_tilde {
        Some(spec) => {
            let b = parse_grid("b_tilde", spec)?;
            a.iter()
                .flat_map(|&x| b.iter().map(move |&y| (x, y)))
                .collect()
        }
        None => a.iter().map(|&x| (x, s.sweep.aspect * x)).collect(),
    };
    let cfg = s.torque_config().geometry;
    let rows = geometry_factor_sweep(s.body_kind(), &points, &cfg, s.execution())?;
    let mut t = Table::new(
        "geometry-factor",
        &[
            "a_tilde",
            "b_tilde",
            "J_hat",
            "J_hat_asymptotic_small",
            "J_hat_asymptotic_large",
        ],
    );
    t.rows = rows
        .iter()
        .map(|r| vec![r.a_tilde, r.b_tilde, r.j_hat, r.j_hat_small, r.j_hat_large])
        .collect();
    Ok(t)
}

/// τ₀ of the form that applies at room-scale temperatures: the large-body
/// one once a ≥ 1/T.
fn normalising_prefactor(s: &Settings, body: &Body) -> Result<(f64, bool)> {
    let metal = s.metal()?;
    let large = body.half_length() * s.t_env() >= 1.0;
    let tau0 = if large {
        large_limit_prefactor(body, &metal, s.dielectric.chi)?
    } else {
        small_limit_prefactor(body, &metal, s.dielectric.chi)?
    };
    Ok((tau0, large))
}

pub fn torque(s: &Settings) -> Result<Table> {
    let temps = parse_grid("t_body_k", &s.sweep.t_body_k)?;
    let body = s.body()?;
    let metal = s.metal()?;
    let glass = s.dielectric()?;
    let cfg = s.torque_config();
    let u = cfg.units;
    let regime = s.regime();
    let (tau0, large) = match regime {
        Regime::Small => (
            small_limit_prefactor(&body, &metal, s.dielectric.chi)?,
            false,
        ),
        Regime::Large => (
            large_limit_prefactor(&body, &metal, s.dielectric.chi)?,
            true,
        ),
        Regime::Full => normalising_prefactor(s, &body)?,
    };
    let results = s.execution().map_slice(&temps, |&tk| {
        let ts = ThermalState::new(s.t_env(), u.kelvin(tk))?;
        match regime {
            Regime::Small => torque_small_limit(&body, &metal, s.dielectric.chi, &ts, &cfg),
            Regime::Large => torque_large_limit(&body, &metal, s.dielectric.chi, &ts, &cfg),
            Regime::Full => torque_second_order(&body, &metal, &glass, &ts, &cfg),
        }
    });
    let mut t = Table::new("torque", &["T_body_K", "tau_hat", "tau_SI_Nm"]);
    t.note("tau0_Nm", u.torque_si(tau0));
    t.note("tau0_large_body_form", if large { 1.0 } else { 0.0 });
    let mut warnings = Warnings::default();
    for (&tk, r) in temps.iter().zip(results) {
        let r = r?;
        warnings.extend(r.warnings.iter().cloned());
        t.rows
            .push(vec![tk, r.tau_hat.unwrap_or(r.tau / tau0), r.tau_si]);
    }
    warnings.emit();
    Ok(t)
}

pub fn dynamics(s: &Settings) -> Result<Table> {
    let u0s = parse_grid("u0", &s.sweep.u0)?;
    let body = s.body()?;
    let metal = s.metal()?;
    let heat = s.heat()?;
    let cfg = s.dynamics_config();
    let u = cfg.torque.units;
    let t_env = s.t_env();
    let (_, nu) = metal.drude_parameters()?;
    let t0 = cooling_prefactor(&body, &metal, &heat, t_env)?;

    if let Some(u1) = s.sweep.u1 {
        if u1 == 1.0 {
            return Err(Error::Divergence(
                "u1 = 1: cooling all the way to the environment temperature takes an infinitely long time".into(),
            ));
        }
        let rows = cooling_sweep(t_env / nu, &u0s, u1, &cfg.torque.spectral)?;
        let mut t = Table::new("dynamics", &["u0", "t_hat"]);
        t.note("t0_s", u.time_si(t0));
        t.note("u1", u1);
        t.rows = rows.iter().map(|r| vec![r.u0, r.t_hat]).collect();
        return Ok(t);
    }

    let regime = s.regime();
    let mut warnings = Warnings::default();
    if s.sweep.trace {
        if u0s.len() != 1 {
            return Err(Error::InvalidParameter("--trace needs a single u0".into()));
        }
        let tr = terminal_angular_velocity(
            &body,
            &metal,
            s.dielectric.chi,
            &heat,
            t_env,
            u0s[0] * t_env,
            regime,
            &cfg,
        )?;
        let mut t = Table::new("dynamics", &["time_s", "T_body_K", "omega_z"]);
        t.note("t0_s", tr.t0);
        t.note("t0_tau0_over_I_per_s", tr.prefactor);
        t.note("omega_T_per_s", tr.terminal_omega);
        t.rows = tr
            .samples
            .iter()
            .map(|p| vec![p.time_s, p.t_body_k, p.omega_z])
            .collect();
        warnings.extend(tr.warnings);
        warnings.emit();
        return Ok(t);
    }

    let mut t = Table::new("dynamics", &["u0", "omega_hat_T", "omega_T_SI"]);
    t.note("t0_s", u.time_si(t0));
    match regime {
        Regime::Small | Regime::Large => {
            let tau0 = if regime == Regime::Small {
                small_limit_prefactor(&body, &metal, s.dielectric.chi)?
            } else {
                large_limit_prefactor(&body, &metal, s.dielectric.chi)?
            };
            let prefactor = u.rate_si(t0 * tau0 / body.moment_of_inertia());
            t.note("t0_tau0_over_I_per_s", prefactor);
            for r in omega_hat_sweep(regime, t_env / nu, &u0s, &cfg)? {
                t.rows
                    .push(vec![r.u0, r.omega_hat, prefactor * r.omega_hat]);
            }
        }
        Regime::Full => {
            let mut noted = false;
            for &u0 in &u0s {
                if u0 == 1.0 {
                    t.rows.push(vec![u0, 0.0, 0.0]);
                    continue;
                }
                let tr = terminal_angular_velocity(
                    &body,
                    &metal,
                    s.dielectric.chi,
                    &heat,
                    t_env,
                    u0 * t_env,
                    regime,
                    &cfg,
                )?;
                if !noted {
                    t.note("t0_tau0_over_I_per_s", tr.prefactor);
                    noted = true;
                }
                warnings.extend(tr.warnings);
                t.rows.push(vec![u0, tr.omega_hat, tr.terminal_omega]);
            }
        }
    }
    warnings.emit();
    Ok(t)
}

pub fn voxel(s: &Settings) -> Result<Table> {
    let omegas = parse_grid("omega_ev", &s.sweep.omega_ev)?;
    let body = s.voxel_body()?;
    let cfg = s.torque_config();
    let u = cfg.units;
    let factors = s
        .execution()
        .map_slice(&omegas, |&w| voxel_factor(&body, w, &cfg.geometry));
    let mut t = Table::new("voxel", &["omega_eV", "J_x", "J_y", "J_z", "J_z_err"]);
    for (&w, j) in omegas.iter().zip(factors) {
        let j = j?;
        t.rows.push(vec![
            w,
            j.value[0],
            j.value[1],
            j.value[2],
            j.err_estimate[2],
        ]);
    }
    let ts = ThermalState::new(s.t_env(), u.kelvin(s.voxel.t_body_k))?;
    let tau = torque_second_order(
        &Body::Voxels(body),
        &s.metal()?,
        &s.dielectric()?,
        &ts,
        &cfg,
    )?;
    t.note("t_body_K", s.voxel.t_body_k);
    t.note("tau_SI_Nm", tau.tau_si);
    t.note("tau_err_SI_Nm", tau.err_si);
    let mut warnings = Warnings::default();
    warnings.extend(tau.warnings);
    warnings.emit();
    Ok(t)
}

pub fn materials_table(s: &Settings) -> Result<Table> {
    let omegas = parse_grid("omega_ev", &s.sweep.omega_ev)?;
    let metal = s.metal()?;
    let glass = s.dielectric()?;
    let mut t = Table::new(
        "materials-table",
        &[
            "omega_eV", "re_chi_A", "im_chi_A", "re_chi_B", "im_chi_B", "X_AB",
        ],
    );
    for &w in &omegas {
        let (a, b) = (metal.chi(w)?, glass.chi(w)?);
        t.rows
            .push(vec![w, a.re, a.im, b.re, b.im, xab(&metal, &glass, w)?]);
    }
    Ok(t)
}
