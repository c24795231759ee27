//! Run settings: built-in defaults, overlaid by an optional TOML file, then
//! by `VACTORQUE_*` environment variables and command-line flags.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use vactorque::geometry::{AllenWrench, Body, DualFlag, VoxelPairBody};
use vactorque::materials::{MaterialModel, SpectrumTable};
use vactorque::observables::{DulongPetit, DynamicsConfig, Regime, TorqueConfig};
use vactorque::sweeps::{linear_grid, log_grid, BodyKind};
use vactorque::units::{UnitContext, UnitMode, AMU_EV, K_B_EV_PER_K};
use vactorque::{Error, Execution, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// codata or rounded.
    pub unit_mode: String,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// Worker threads; 0 leaves the pool at its default size.
    pub threads: usize,
    pub sequential: bool,
    pub body: BodySettings,
    pub metal: MetalSettings,
    pub dielectric: DielectricSettings,
    pub heat: HeatSettings,
    pub thermal: ThermalSettings,
    pub quadrature: QuadratureSettings,
    pub sweep: SweepSettings,
    pub voxel: VoxelSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BodySettings {
    /// allen-wrench or dual-flag.
    pub kind: String,
    pub a_um: f64,
    pub b_um: f64,
    pub wire_radius_nm: f64,
    /// Allen wrench tags.
    pub tag_radius_nm: f64,
    /// Dual flag sheets.
    pub flag_thickness_nm: f64,
    pub rho_a_g_cm3: f64,
    pub rho_b_g_cm3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetalSettings {
    pub plasma_freq_ev: f64,
    pub damping_ev: f64,
    /// `omega_eV,re_chi,im_chi` file replacing the Drude model.
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DielectricSettings {
    pub chi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatSettings {
    pub atomic_mass_u: f64,
    pub debye_temperature_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThermalSettings {
    pub t_env_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

/// Grids are `log:lo:hi:n`, `lin:lo:hi:n` or a comma list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub a_tilde: String,
    /// Swept against every ã when set; otherwise b̃ = aspect · ã.
    pub b_tilde: Option<String>,
    pub aspect: f64,
    pub t_body_k: String,
    pub u0: String,
    /// Cooling target T′₁/T; selects the cooling table in `dynamics`.
    pub u1: Option<f64>,
    pub omega_ev: String,
    /// small, large or full.
    pub regime: String,
    /// Emit the time trace for a single u0 instead of a table over u0.
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VoxelSettings {
    pub file: Option<PathBuf>,
    pub t_body_k: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            unit_mode: "codata".into(),
            format: Format::Csv,
            output: None,
            threads: 0,
            sequential: false,
            body: BodySettings::default(),
            metal: MetalSettings::default(),
            dielectric: DielectricSettings::default(),
            heat: HeatSettings::default(),
            thermal: ThermalSettings::default(),
            quadrature: QuadratureSettings::default(),
            sweep: SweepSettings::default(),
            voxel: VoxelSettings::default(),
        }
    }
}

impl Default for BodySettings {
    fn default() -> Self {
        BodySettings {
            kind: "allen-wrench".into(),
            a_um: 1.0,
            b_um: 1.0,
            wire_radius_nm: 40.0,
            tag_radius_nm: 40.0,
            flag_thickness_nm: 50.0,
            rho_a_g_cm3: 19.3,
            rho_b_g_cm3: 0.0,
        }
    }
}

impl Default for MetalSettings {
    fn default() -> Self {
        MetalSettings {
            plasma_freq_ev: 9.0,
            damping_ev: 0.035,
            table: None,
        }
    }
}

impl Default for DielectricSettings {
    fn default() -> Self {
        DielectricSettings { chi: 1.0 }
    }
}

impl Default for HeatSettings {
    fn default() -> Self {
        HeatSettings {
            atomic_mass_u: 196.97,
            debye_temperature_k: 170.0,
        }
    }
}

impl Default for ThermalSettings {
    fn default() -> Self {
        ThermalSettings { t_env_k: 300.0 }
    }
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        let q = TorqueConfig::default().spectral;
        QuadratureSettings {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
        }
    }
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            a_tilde: "log:0.01:100:41".into(),
            b_tilde: None,
            aspect: 1.0,
            t_body_k: "lin:150:600:10".into(),
            u0: "lin:1:4:16".into(),
            u1: None,
            omega_ev: "log:0.001:1:31".into(),
            regime: "full".into(),
            trace: false,
        }
    }
}

impl Default for VoxelSettings {
    fn default() -> Self {
        VoxelSettings {
            file: None,
            t_body_k: 600.0,
        }
    }
}

/// Overrides shared by every subcommand. Each flag also reads the
/// `VACTORQUE_<NAME>` variable.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML settings file.
    #[arg(long, env = "VACTORQUE_CONFIG", global = true)]
    pub config: Option<PathBuf>,
    /// codata or rounded (ħc = 2e-5 eV cm).
    #[arg(long, env = "VACTORQUE_UNIT_MODE", global = true)]
    pub unit_mode: Option<String>,
    #[arg(long, value_enum, env = "VACTORQUE_FORMAT", global = true)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, short, env = "VACTORQUE_OUTPUT", global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, env = "VACTORQUE_THREADS", global = true)]
    pub threads: Option<usize>,
    /// Run every loop on the calling thread.
    #[arg(long, env = "VACTORQUE_SEQUENTIAL", global = true)]
    pub sequential: bool,

    /// allen-wrench or dual-flag.
    #[arg(long, env = "VACTORQUE_BODY", global = true)]
    pub body: Option<String>,
    #[arg(long, env = "VACTORQUE_A_UM", global = true)]
    pub a_um: Option<f64>,
    #[arg(long, env = "VACTORQUE_B_UM", global = true)]
    pub b_um: Option<f64>,
    #[arg(long, env = "VACTORQUE_WIRE_RADIUS_NM", global = true)]
    pub wire_radius_nm: Option<f64>,
    #[arg(long, env = "VACTORQUE_TAG_RADIUS_NM", global = true)]
    pub tag_radius_nm: Option<f64>,
    #[arg(long, env = "VACTORQUE_FLAG_THICKNESS_NM", global = true)]
    pub flag_thickness_nm: Option<f64>,
    #[arg(long, env = "VACTORQUE_RHO_A_G_CM3", global = true)]
    pub rho_a_g_cm3: Option<f64>,
    #[arg(long, env = "VACTORQUE_RHO_B_G_CM3", global = true)]
    pub rho_b_g_cm3: Option<f64>,

    #[arg(long, env = "VACTORQUE_PLASMA_FREQ_EV", global = true)]
    pub plasma_freq_ev: Option<f64>,
    #[arg(long, env = "VACTORQUE_DAMPING_EV", global = true)]
    pub damping_ev: Option<f64>,
    /// Tabulated metal susceptibility (omega_eV,re_chi,im_chi).
    #[arg(long, env = "VACTORQUE_METAL_TABLE", global = true)]
    pub metal_table: Option<PathBuf>,
    #[arg(long, env = "VACTORQUE_CHI_B", global = true)]
    pub chi_b: Option<f64>,
    #[arg(long, env = "VACTORQUE_ATOMIC_MASS_U", global = true)]
    pub atomic_mass_u: Option<f64>,
    #[arg(long, env = "VACTORQUE_DEBYE_TEMPERATURE_K", global = true)]
    pub debye_temperature_k: Option<f64>,
    #[arg(long, env = "VACTORQUE_T_ENV_K", global = true)]
    pub t_env_k: Option<f64>,

    #[arg(long, env = "VACTORQUE_REL_TOL", global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, env = "VACTORQUE_ABS_TOL", global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, env = "VACTORQUE_MAX_SUBDIVISIONS", global = true)]
    pub max_subdivisions: Option<usize>,

    #[arg(long, env = "VACTORQUE_A_TILDE", global = true)]
    pub a_tilde: Option<String>,
    #[arg(long, env = "VACTORQUE_B_TILDE", global = true)]
    pub b_tilde: Option<String>,
    /// b̃/ã when no b̃ grid is given.
    #[arg(long, env = "VACTORQUE_ASPECT", global = true)]
    pub aspect: Option<f64>,
    /// Body temperatures in K.
    #[arg(long, env = "VACTORQUE_T_BODY_K", global = true)]
    pub t_body_k: Option<String>,
    /// Initial T′₀/T values.
    #[arg(long, env = "VACTORQUE_U0", global = true)]
    pub u0: Option<String>,
    /// Cooling target T′₁/T.
    #[arg(long, env = "VACTORQUE_U1", global = true)]
    pub u1: Option<f64>,
    #[arg(long, env = "VACTORQUE_OMEGA_EV", global = true)]
    pub omega_ev: Option<String>,
    /// small, large or full.
    #[arg(long, env = "VACTORQUE_REGIME", global = true)]
    pub regime: Option<String>,
    /// Emit the time trace for a single u0.
    #[arg(long, env = "VACTORQUE_TRACE", global = true)]
    pub trace: bool,
    /// Voxel CSV (x,y,z,volume,part with lengths in μm).
    #[arg(long, env = "VACTORQUE_VOXEL_FILE", global = true)]
    pub voxel_file: Option<PathBuf>,
    /// Body temperature for the integrated voxel torque, K.
    #[arg(long, env = "VACTORQUE_VOXEL_T_BODY_K", global = true)]
    pub voxel_t_body_k: Option<f64>,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

macro_rules! overlay {
    ($($target:expr => $value:expr),* $(,)?) => {
        $(if let Some(v) = $value.clone() { $target = v.into(); })*
    };
}

impl Settings {
    /// Defaults, then the file named by `--config`, then flags and
    /// environment variables.
    pub fn resolve(o: &Overrides) -> Result<Settings> {
        let mut s = match &o.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                toml::from_str(&text)
                    .map_err(|e| config_error(format!("{}: {e}", path.display())))?
            }
            None => Settings::default(),
        };
        overlay!(
            s.unit_mode => o.unit_mode,
            s.format => o.format,
            s.threads => o.threads,
            s.body.kind => o.body,
            s.body.a_um => o.a_um,
            s.body.b_um => o.b_um,
            s.body.wire_radius_nm => o.wire_radius_nm,
            s.body.tag_radius_nm => o.tag_radius_nm,
            s.body.flag_thickness_nm => o.flag_thickness_nm,
            s.body.rho_a_g_cm3 => o.rho_a_g_cm3,
            s.body.rho_b_g_cm3 => o.rho_b_g_cm3,
            s.metal.plasma_freq_ev => o.plasma_freq_ev,
            s.metal.damping_ev => o.damping_ev,
            s.dielectric.chi => o.chi_b,
            s.heat.atomic_mass_u => o.atomic_mass_u,
            s.heat.debye_temperature_k => o.debye_temperature_k,
            s.thermal.t_env_k => o.t_env_k,
            s.quadrature.rel_tol => o.rel_tol,
            s.quadrature.abs_tol => o.abs_tol,
            s.quadrature.max_subdivisions => o.max_subdivisions,
            s.sweep.a_tilde => o.a_tilde,
            s.sweep.aspect => o.aspect,
            s.sweep.t_body_k => o.t_body_k,
            s.sweep.u0 => o.u0,
            s.sweep.omega_ev => o.omega_ev,
            s.sweep.regime => o.regime,
            s.voxel.t_body_k => o.voxel_t_body_k,
        );
        s.sequential |= o.sequential;
        s.sweep.trace |= o.trace;
        if o.output.is_some() {
            s.output = o.output.clone();
        }
        if o.metal_table.is_some() {
            s.metal.table = o.metal_table.clone();
        }
        if o.b_tilde.is_some() {
            s.sweep.b_tilde = o.b_tilde.clone();
        }
        if o.u1.is_some() {
            s.sweep.u1 = o.u1;
        }
        if o.voxel_file.is_some() {
            s.voxel.file = o.voxel_file.clone();
        }
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        self.unit_mode.parse::<UnitMode>()?;
        self.body.kind.parse::<BodyKind>()?;
        self.sweep.regime.parse::<Regime>()?;
        let positive = [
            ("body.a_um", self.body.a_um),
            ("body.b_um", self.body.b_um),
            ("body.wire_radius_nm", self.body.wire_radius_nm),
            ("body.tag_radius_nm", self.body.tag_radius_nm),
            ("body.flag_thickness_nm", self.body.flag_thickness_nm),
            ("metal.plasma_freq_ev", self.metal.plasma_freq_ev),
            ("metal.damping_ev", self.metal.damping_ev),
            ("heat.atomic_mass_u", self.heat.atomic_mass_u),
            ("thermal.t_env_k", self.thermal.t_env_k),
            ("quadrature.rel_tol", self.quadrature.rel_tol),
            ("sweep.aspect", self.sweep.aspect),
            ("voxel.t_body_k", self.voxel.t_body_k),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_error(format!("{name} must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("body.rho_a_g_cm3", self.body.rho_a_g_cm3),
            ("body.rho_b_g_cm3", self.body.rho_b_g_cm3),
            ("heat.debye_temperature_k", self.heat.debye_temperature_k),
            ("quadrature.abs_tol", self.quadrature.abs_tol),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(config_error(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        if !self.dielectric.chi.is_finite() {
            return Err(config_error("dielectric.chi must be finite"));
        }
        if let Some(u1) = self.sweep.u1 {
            if !(u1 > 0.0 && u1.is_finite()) {
                return Err(config_error(format!("sweep.u1 must be positive, got {u1}")));
            }
        }
        self.quadrature().validate()
    }

    pub fn units(&self) -> UnitContext {
        UnitContext::new(self.unit_mode.parse().expect("validated"))
    }

    pub fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    pub fn quadrature(&self) -> vactorque::quadrature::QuadratureConfig {
        vactorque::quadrature::QuadratureConfig {
            rel_tol: self.quadrature.rel_tol,
            abs_tol: self.quadrature.abs_tol,
            max_subdivisions: self.quadrature.max_subdivisions,
            execution: self.execution(),
            ..TorqueConfig::default().spectral
        }
    }

    pub fn torque_config(&self) -> TorqueConfig {
        let exec = self.execution();
        let mut cfg = TorqueConfig::default().with_units(self.units());
        cfg.spectral = self.quadrature();
        cfg.geometry.quad.execution = exec;
        cfg.geometry.pairwise.execution = exec;
        cfg
    }

    pub fn dynamics_config(&self) -> DynamicsConfig {
        DynamicsConfig {
            torque: self.torque_config(),
            ..DynamicsConfig::default()
        }
    }

    pub fn regime(&self) -> Regime {
        self.sweep.regime.parse().expect("validated")
    }

    pub fn body_kind(&self) -> BodyKind {
        self.body.kind.parse().expect("validated")
    }

    pub fn body(&self) -> Result<Body> {
        let u = self.units();
        let b = &self.body;
        let (rho_a, rho_b) = (u.g_per_cm3(b.rho_a_g_cm3), u.g_per_cm3(b.rho_b_g_cm3));
        Ok(match self.body_kind() {
            BodyKind::AllenWrench => Body::AllenWrench(AllenWrench::with_wire_radii(
                u.um(b.a_um),
                u.um(b.b_um),
                u.nm(b.wire_radius_nm),
                u.nm(b.tag_radius_nm),
                rho_a,
                rho_b,
            )?),
            BodyKind::DualFlag => Body::DualFlag(DualFlag::with_wire_radius(
                u.um(b.a_um),
                u.um(b.b_um),
                u.nm(b.wire_radius_nm),
                u.nm(b.flag_thickness_nm),
                rho_a,
                rho_b,
            )?),
        })
    }

    pub fn voxel_body(&self) -> Result<VoxelPairBody> {
        let path = self
            .voxel
            .file
            .as_ref()
            .ok_or_else(|| config_error("voxel needs --voxel-file or voxel.file"))?;
        let file =
            std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let u = self.units();
        VoxelPairBody::from_csv(
            file,
            &u,
            u.g_per_cm3(self.body.rho_a_g_cm3),
            u.g_per_cm3(self.body.rho_b_g_cm3),
        )
    }

    pub fn metal(&self) -> Result<MaterialModel> {
        match &self.metal.table {
            Some(path) => {
                let file = std::fs::File::open(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Ok(MaterialModel::Tabulated(std::sync::Arc::new(
                    SpectrumTable::from_csv(file)?,
                )))
            }
            None => MaterialModel::drude(self.metal.plasma_freq_ev, self.metal.damping_ev),
        }
    }

    pub fn dielectric(&self) -> Result<MaterialModel> {
        MaterialModel::constant(self.dielectric.chi)
    }

    pub fn heat(&self) -> Result<DulongPetit> {
        DulongPetit::new(
            self.heat.atomic_mass_u * AMU_EV,
            self.heat.debye_temperature_k * K_B_EV_PER_K,
        )
    }

    pub fn t_env(&self) -> f64 {
        self.units().kelvin(self.thermal.t_env_k)
    }

    /// TOML rendering of the resolved settings. Floats use the shortest
    /// round-trip form, so 1e-300 stays 1e-300.
    pub fn to_toml(&self) -> String {
        let value = toml::Value::try_from(self).expect("settings serialise");
        let table = value.as_table().expect("settings are a table");
        let scalar = |v: &toml::Value| match v {
            toml::Value::Float(x) => format!("{x:?}"),
            other => other.to_string(),
        };
        let mut out = String::new();
        let mut sections = Vec::new();
        for (k, v) in table {
            match v {
                toml::Value::Table(t) => sections.push((k, t)),
                v => out.push_str(&format!("{k} = {}\n", scalar(v))),
            }
        }
        for (name, t) in sections {
            out.push_str(&format!("\n[{name}]\n"));
            for (k, v) in t {
                out.push_str(&format!("{k} = {}\n", scalar(v)));
            }
        }
        out
    }
}

/// Parses `log:lo:hi:n`, `lin:lo:hi:n` or `x1,x2,...`; the result must be
/// non-empty and strictly increasing.
pub fn parse_grid(name: &str, spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| config_error(format!("{name} grid {spec:?}: {why}"));
    let spec = spec.trim();
    let values = if let Some(rest) = spec
        .strip_prefix("log:")
        .or_else(|| spec.strip_prefix("lin:"))
    {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected lo:hi:n"));
        }
        let lo: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| bad("hi is not a number"))?;
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad("n is not a count"))?;
        if spec.starts_with("log:") {
            log_grid(lo, hi, n)?
        } else {
            linear_grid(lo, hi, n)?
        }
    } else {
        spec.split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| bad("entries must be numbers"))
            })
            .collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        return Err(bad("no points"));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(bad("entries must be finite"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("points must increase strictly"));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse() {
        assert_eq!(parse_grid("x", "1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_grid("x", "lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("x", "log:1:100:3").unwrap().len(), 3);
        assert!(parse_grid("x", "").is_err());
        assert!(parse_grid("x", "2,1").is_err());
        assert!(parse_grid("x", "log:1:2").is_err());
    }

    #[test]
    fn defaults_round_trip_through_toml() {
        let s = Settings::default();
        let back: Settings = toml::from_str(&s.to_toml()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "unit_mode = \"rounded\"\n[body]\na_um = 2.0\nb_um = 3.0\n",
        )
        .unwrap();
        let o = Overrides {
            config: Some(path),
            b_um: Some(5.0),
            ..Overrides::default()
        };
        let s = Settings::resolve(&o).unwrap();
        assert_eq!(
            (s.unit_mode.as_str(), s.body.a_um, s.body.b_um),
            ("rounded", 2.0, 5.0)
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = toml::from_str::<Settings>("[body]\nlength = 1.0\n");
        assert!(err.is_err());
    }
}
