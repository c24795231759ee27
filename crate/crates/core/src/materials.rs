//! Susceptibility models, the antisymmetric spectral weight X_AB(ω) and
//! thermal occupation factors.

use std::fmt;
use std::io::Read;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result};

/// A sampled susceptibility spectrum, interpolated monotonically in log ω.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    log_omega: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    re_slope: Vec<f64>,
    im_slope: Vec<f64>,
}

impl SpectrumTable {
    /// Table from rows of (ω [eV], Re χ, Im χ) with strictly increasing ω.
    pub fn new(rows: &[(f64, f64, f64)]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidParameter(
                "a tabulated spectrum needs at least two rows".into(),
            ));
        }
        for (i, r) in rows.iter().enumerate() {
            if !(r.0 > 0.0 && r.0.is_finite() && r.1.is_finite() && r.2.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "row {i} of the spectrum is not finite with ω > 0"
                )));
            }
            if i > 0 && r.0 <= rows[i - 1].0 {
                return Err(Error::InvalidParameter(format!(
                    "ω must increase strictly, row {i} does not"
                )));
            }
        }
        let log_omega: Vec<f64> = rows.iter().map(|r| r.0.ln()).collect();
        let re: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let im: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let re_slope = pchip_slopes(&log_omega, &re);
        let im_slope = pchip_slopes(&log_omega, &im);
        Ok(SpectrumTable {
            log_omega,
            re,
            im,
            re_slope,
            im_slope,
        })
    }

    /// Reads the `omega_eV,re_chi,im_chi` CSV format.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| csv_error(&e, 1))?.clone();
        let expected = ["omega_eV", "re_chi", "im_chi"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "expected header {}, found {}",
                    expected.join(","),
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| csv_error(&e, 0))?;
            let line = rec.position().map_or(0, |p| p.line());
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("missing column {}", expected[i]),
                    })?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse {
                        line,
                        message: format!("{}: {e}", expected[i]),
                    })
            };
            let row = (field(0)?, field(1)?, field(2)?);
            if let Some(&(prev, _, _)) = rows.last() {
                if row.0 <= prev {
                    return Err(Error::Parse {
                        line,
                        message: "omega_eV must increase strictly".into(),
                    });
                }
            }
            rows.push(row);
        }
        SpectrumTable::new(&rows)
    }

    pub fn omega_range(&self) -> (f64, f64) {
        (
            self.log_omega[0].exp(),
            self.log_omega[self.log_omega.len() - 1].exp(),
        )
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        let (min, max) = self.omega_range();
        let x = omega.ln();
        let n = self.log_omega.len();
        // endpoints are accepted up to rounding of the log round trip
        let slack = 1e-12 * (1.0 + x.abs());
        if !(x >= self.log_omega[0] - slack && x <= self.log_omega[n - 1] + slack) {
            return Err(Error::Extrapolation { omega, min, max });
        }
        let x = x.clamp(self.log_omega[0], self.log_omega[n - 1]);
        let i = match self.log_omega.partition_point(|&g| g <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let re = hermite(&self.log_omega, &self.re, &self.re_slope, i, x);
        let im = hermite(&self.log_omega, &self.im, &self.im_slope, i, x);
        Ok(Complex64::new(re, im))
    }
}

fn csv_error(e: &csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

// Fritsch–Carlson slopes
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![d[0]; 2];
    }
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

fn hermite(x: &[f64], y: &[f64], m: &[f64], i: usize, t: f64) -> f64 {
    let h = x[i + 1] - x[i];
    let s = (t - x[i]) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y[i]
        + (s3 - 2.0 * s2 + s) * h * m[i]
        + (-2.0 * s3 + 3.0 * s2) * y[i + 1]
        + (s3 - s2) * h * m[i + 1]
}

/// Isotropic susceptibility of a homogeneous body part.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    /// χ = −ω_p²/(ω² + iων).
    Drude {
        plasma_freq: f64,
        damping: f64,
    },
    /// Real, lossless, dispersionless χ.
    ConstantDielectric {
        chi: f64,
    },
    /// Ideal blackbody surface layer of the given thickness (eV⁻¹).
    BlackbodySurface {
        thickness: f64,
    },
    Tabulated(Arc<SpectrumTable>),
}

impl fmt::Display for MaterialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaterialModel::Drude {
                plasma_freq,
                damping,
            } => {
                write!(f, "drude(omega_p={plasma_freq:e} eV, nu={damping:e} eV)")
            }
            MaterialModel::ConstantDielectric { chi } => write!(f, "constant(chi={chi:e})"),
            MaterialModel::BlackbodySurface { thickness } => {
                write!(f, "blackbody(thickness={thickness:e} 1/eV)")
            }
            MaterialModel::Tabulated(t) => {
                let (a, b) = t.omega_range();
                write!(f, "tabulated(omega in [{a:e}, {b:e}] eV)")
            }
        }
    }
}

impl MaterialModel {
    pub fn drude(plasma_freq: f64, damping: f64) -> Result<Self> {
        let m = MaterialModel::Drude {
            plasma_freq,
            damping,
        };
        m.validate()?;
        Ok(m)
    }

    /// Gold with ω_p = 9 eV and ν = 0.035 eV.
    pub fn gold() -> Self {
        MaterialModel::Drude {
            plasma_freq: 9.0,
            damping: 0.035,
        }
    }

    pub fn constant(chi: f64) -> Result<Self> {
        let m = MaterialModel::ConstantDielectric { chi };
        m.validate()?;
        Ok(m)
    }

    pub fn blackbody(thickness: f64) -> Result<Self> {
        let m = MaterialModel::BlackbodySurface { thickness };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MaterialModel::Drude {
                plasma_freq,
                damping,
            } => {
                if !(plasma_freq > 0.0
                    && plasma_freq.is_finite()
                    && damping > 0.0
                    && damping.is_finite())
                {
                    return Err(Error::InvalidParameter(format!(
                        "Drude parameters must be positive, got omega_p = {plasma_freq}, nu = {damping}"
                    )));
                }
            }
            MaterialModel::ConstantDielectric { chi } => {
                if !chi.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "dielectric chi must be finite, got {chi}"
                    )));
                }
            }
            MaterialModel::BlackbodySurface { thickness } => {
                if !(thickness > 0.0 && thickness.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "blackbody thickness must be positive, got {thickness}"
                    )));
                }
            }
            MaterialModel::Tabulated(_) => {}
        }
        Ok(())
    }

    /// (ω_p, ν) for a Drude model.
    pub fn drude_parameters(&self) -> Result<(f64, f64)> {
        match *self {
            MaterialModel::Drude {
                plasma_freq,
                damping,
            } => Ok((plasma_freq, damping)),
            _ => Err(Error::InvalidParameter(format!(
                "expected a Drude metal, got {self}"
            ))),
        }
    }

    /// χ(ω). For a blackbody surface this is the surface value (i/4)/ω.
    pub fn chi(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain("chi", omega));
        }
        Ok(match self {
            MaterialModel::Drude {
                plasma_freq,
                damping,
            } => {
                let w2 = omega * omega;
                let den = w2 * w2 + w2 * damping * damping;
                let p2 = plasma_freq * plasma_freq;
                // −p²/(ω² + iων) = −p²(ω² − iων)/(ω⁴ + ω²ν²)
                Complex64::new(-p2 * w2 / den, p2 * omega * damping / den)
            }
            MaterialModel::ConstantDielectric { chi } => Complex64::new(*chi, 0.0),
            MaterialModel::BlackbodySurface { .. } => Complex64::new(0.0, 0.25 / omega),
            MaterialModel::Tabulated(t) => t.eval(omega)?,
        })
    }

    /// χ as a volume density: the blackbody surface value is spread over its
    /// thickness.
    fn volume_chi(&self, omega: f64) -> Result<Complex64> {
        let c = self.chi(omega)?;
        Ok(match self {
            MaterialModel::BlackbodySurface { thickness } => c / *thickness,
            _ => c,
        })
    }
}

/// X_AB(ω) = Im χ_A Re χ_B − Re χ_A Im χ_B.
pub fn xab(a: &MaterialModel, b: &MaterialModel, omega: f64) -> Result<f64> {
    let ca = a.volume_chi(omega)?;
    let cb = b.volume_chi(omega)?;
    Ok(ca.im * cb.re - ca.re * cb.im)
}

/// Environment temperature T and body temperature T′, both in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub t_env: f64,
    pub t_body: f64,
}

impl ThermalState {
    pub fn new(t_env: f64, t_body: f64) -> Result<Self> {
        for (name, t) in [("environment", t_env), ("body", t_body)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} temperature must be positive, got {t}"
                )));
            }
        }
        Ok(ThermalState { t_env, t_body })
    }

    pub fn from_kelvin(t_env: f64, t_body: f64) -> Result<Self> {
        let k = crate::units::K_B_EV_PER_K;
        ThermalState::new(t_env * k, t_body * k)
    }

    pub fn swapped(self) -> Self {
        ThermalState {
            t_env: self.t_body,
            t_body: self.t_env,
        }
    }

    pub fn t_max(&self) -> f64 {
        self.t_env.max(self.t_body)
    }

    pub fn t_min(&self) -> f64 {
        self.t_env.min(self.t_body)
    }

    pub fn is_equilibrium(&self) -> bool {
        self.t_env == self.t_body
    }

    /// n(ω, T) − n(ω, T′).
    pub fn thermal_weight(&self, omega: f64) -> f64 {
        thermal_weight(self, omega)
    }
}

/// Bose–Einstein occupation 1/(e^{ω/T} − 1).
pub fn occupation(omega: f64, t: f64) -> f64 {
    1.0 / (omega / t).exp_m1()
}

/// n(ω, T) − n(ω, T′), identically zero in equilibrium.
pub fn thermal_weight(ts: &ThermalState, omega: f64) -> f64 {
    if ts.is_equilibrium() {
        return 0.0;
    }
    occupation(omega, ts.t_env) - occupation(omega, ts.t_body)
}

/// Real antisymmetric part of the volume-integrated susceptibility about
/// the rotation axis, Re α(ω), for a nonreciprocal body.
#[derive(Clone)]
pub struct NonreciprocalPolarizability {
    re_alpha: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for NonreciprocalPolarizability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NonreciprocalPolarizability")
            .finish_non_exhaustive()
    }
}

impl NonreciprocalPolarizability {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(re_alpha: F) -> Self {
        NonreciprocalPolarizability {
            re_alpha: Arc::new(re_alpha),
        }
    }

    /// A reciprocal body: Re α ≡ 0.
    pub fn reciprocal() -> Self {
        NonreciprocalPolarizability::new(|_| 0.0)
    }

    pub fn re_alpha(&self, omega: f64) -> f64 {
        (self.re_alpha)(omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn drude_signs_and_value() {
        let m = MaterialModel::gold();
        let c = m.chi(0.05).unwrap();
        let expect = -Complex64::new(81.0, 0.0) / Complex64::new(0.0025, 0.05 * 0.035);
        assert_relative_eq!(c.re, expect.re, max_relative = 1e-14);
        assert_relative_eq!(c.im, expect.im, max_relative = 1e-14);
        assert!(c.re < 0.0 && c.im > 0.0);
    }

    #[test]
    fn dielectric_reduction() {
        let a = MaterialModel::gold();
        let b = MaterialModel::constant(2.0).unwrap();
        for &w in &[1e-3, 0.035, 1.0] {
            let expect = 2.0 * 81.0 * 0.035 / (w * (w * w + 0.035 * 0.035));
            assert_relative_eq!(xab(&a, &b, w).unwrap(), expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn blackbody_reduction() {
        let a = MaterialModel::gold();
        let t = 1e3;
        let b = MaterialModel::blackbody(t).unwrap();
        let w = 0.02;
        let expect = 81.0 / (4.0 * w * t * (w * w + 0.035 * 0.035));
        assert_relative_eq!(xab(&a, &b, w).unwrap(), expect, max_relative = 1e-13);
    }

    #[test]
    fn homogeneous_body_has_no_weight() {
        let a = MaterialModel::gold();
        assert_eq!(xab(&a, &a, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn equilibrium_weight_is_zero() {
        let ts = ThermalState::new(0.025, 0.025).unwrap();
        assert_eq!(ts.thermal_weight(0.1), 0.0);
        let hot = ThermalState::new(0.05, 0.025).unwrap();
        assert!(hot.thermal_weight(0.1) > 0.0);
        assert!(hot.thermal_weight(100.0).abs() < 1e-300);
    }

    #[test]
    fn table_reproduces_nodes_and_rejects_extrapolation() {
        let rows: Vec<(f64, f64, f64)> = (0..10)
            .map(|i| {
                let w = 0.01 * 2f64.powi(i);
                (w, -1.0 / w, 0.5 / w)
            })
            .collect();
        let t = SpectrumTable::new(&rows).unwrap();
        for r in &rows {
            let c = t.eval(r.0).unwrap();
            assert_relative_eq!(c.re, r.1, max_relative = 1e-12);
        }
        assert!(matches!(t.eval(100.0), Err(Error::Extrapolation { .. })));
    }

    #[test]
    fn table_is_monotone_between_nodes() {
        let rows = [
            (1.0, 0.0, 0.0),
            (2.0, 1.0, 0.0),
            (3.0, 1.0, 0.0),
            (4.0, 5.0, 0.0),
        ];
        let t = SpectrumTable::new(&rows).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=300 {
            let v = t.eval(1.0 + 3.0 * i as f64 / 300.0).unwrap().re;
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn csv_parse_errors_carry_lines() {
        let good = "omega_eV,re_chi,im_chi\n0.1,1.0,0.1\n0.2,0.9,0.2\n";
        assert!(SpectrumTable::from_csv(good.as_bytes()).is_ok());
        let bad = "omega_eV,re_chi,im_chi\n0.1,1.0,0.1\n0.2,oops,0.2\n";
        match SpectrumTable::from_csv(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let header = "w,re,im\n0.1,1.0,0.1\n";
        assert!(matches!(
            SpectrumTable::from_csv(header.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
