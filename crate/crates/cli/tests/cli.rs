use std::path::Path;
use std::process::{Command, Output};

use vactorque::geometry::{allen_wrench_factor, allen_wrench_hat, AllenWrench, GeometryConfig};
use vactorque::quadrature::Voxel;
use vactorque::units::UnitContext;

fn vactorque(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vactorque"))
        .args(args)
        .env_remove("VACTORQUE_UNIT_MODE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows below the column line, as raw strings.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn col(csv: &str, i: usize) -> Vec<f64> {
    rows(csv).iter().map(|r| r[i].parse().unwrap()).collect()
}

fn note(csv: &str, key: &str) -> f64 {
    let prefix = format!("# {key} = ");
    csv.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in header"))
        .parse()
        .unwrap()
}

#[test]
fn single_geometry_point_matches_library_exactly() {
    let out = stdout(&vactorque(&[
        "geometry-factor",
        "--a-tilde",
        "1",
        "--aspect",
        "1",
    ]));
    let lib = allen_wrench_hat(1.0, 1.0, &GeometryConfig::default())
        .unwrap()
        .value;
    assert_eq!(rows(&out)[0][2], format!("{lib:.9e}"));
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "a_tilde,b_tilde,J_hat,J_hat_asymptotic_small,J_hat_asymptotic_large"
    );
}

#[test]
fn aspect_curves_are_ordered_in_the_small_regime() {
    let sweep = |aspect: &str| {
        let out = stdout(&vactorque(&[
            "geometry-factor",
            "--a-tilde",
            "log:0.05:2:9",
            "--aspect",
            aspect,
        ]));
        col(&out, 2)
    };
    let (upper, mid, lower) = (sweep("2"), sweep("1"), sweep("0.5"));
    for i in 0..upper.len() {
        assert!(upper[i] > mid[i] && mid[i] > lower[i]);
    }
}

#[test]
fn bad_grids_are_config_errors() {
    for grid in ["", "3,2,1", "log:1:2", "lin:a:b:3"] {
        let o = vactorque(&["geometry-factor", "--a-tilde", grid]);
        assert_eq!(o.status.code(), Some(2), "grid {grid:?}");
    }
    assert_eq!(
        vactorque(&["torque", "--body", "cube"]).status.code(),
        Some(2)
    );
    assert_eq!(
        vactorque(&["torque", "--a-um", "-1"]).status.code(),
        Some(2)
    );
}

#[test]
fn torque_rows_cross_zero_only_at_equilibrium() {
    let out = stdout(&vactorque(&[
        "torque",
        "--regime",
        "small",
        "--t-body-k",
        "150,250,300,350,600",
    ]));
    let (t, hat) = (col(&out, 0), col(&out, 1));
    for (t, h) in t.iter().zip(&hat) {
        assert_eq!(*h == 0.0, *t == 300.0);
        assert_eq!(*h < 0.0, *t > 300.0);
    }
    assert!(hat.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn large_wrench_prefactor_header() {
    let out = stdout(&vactorque(&[
        "torque",
        "--unit-mode",
        "rounded",
        "--a-um",
        "1e4",
        "--b-um",
        "1e4",
        "--wire-radius-nm",
        "50",
        "--tag-radius-nm",
        "50",
        "--regime",
        "large",
        "--t-body-k",
        "300,600",
    ]));
    let tau0 = note(&out, "tau0_Nm");
    assert!(tau0 / 7e-22 < 2.0 && tau0 / 7e-22 > 0.5, "{tau0:e}");
    assert_eq!(rows(&out)[0][2], format!("{:.9e}", 0.0));
}

#[test]
fn cooling_curves_order_by_target_and_u1_one_diverges() {
    let curve = |u1: &str| {
        col(
            &stdout(&vactorque(&["dynamics", "--u0", "1.3,2,3,5", "--u1", u1])),
            1,
        )
    };
    let (a, b, c) = (curve("1.05"), curve("1.10"), curve("1.20"));
    for i in 0..a.len() {
        assert!(a[i] > b[i] && b[i] > c[i]);
    }
    let o = vactorque(&["dynamics", "--u0", "2", "--u1", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infinitely long time"));
}

#[test]
fn equilibrium_start_has_no_terminal_velocity() {
    for regime in ["small", "full"] {
        let out = stdout(&vactorque(&["dynamics", "--regime", regime, "--u0", "1,2"]));
        let w = col(&out, 1);
        assert_eq!(w[0], 0.0);
        assert!(w[1] < 0.0);
    }
}

#[test]
fn small_wrench_terminal_velocity_near_three_per_mille() {
    let out = stdout(&vactorque(&[
        "dynamics",
        "--unit-mode",
        "rounded",
        "--regime",
        "small",
        "--u0",
        "2",
    ]));
    let w = -col(&out, 2)[0];
    assert!(w / 3e-3 <= 2.0 && w / 3e-3 >= 0.5, "omega_T = {w:e} 1/s");
}

#[test]
fn trace_ends_near_terminal_velocity() {
    let out = stdout(&vactorque(&[
        "dynamics", "--regime", "small", "--u0", "2", "--trace",
    ]));
    let omega = col(&out, 2);
    let terminal = note(&out, "omega_T_per_s");
    assert!((omega.last().unwrap() / terminal - 1.0).abs() < 0.05);
    assert!(
        vactorque(&["dynamics", "--u0", "2,3", "--trace"])
            .status
            .code()
            == Some(2)
    );
}

fn write_voxels(
    path: &Path,
    a: &[Voxel],
    b: &[Voxel],
    u: &UnitContext,
    mirror: bool,
    label_b: &str,
) {
    let um3 = u.um(1.0).powi(3);
    let mut s = String::from("x,y,z,volume,part\n");
    for (vs, part) in [(a, "A"), (b, label_b)] {
        for v in vs {
            let x = if mirror { -v.center[0] } else { v.center[0] };
            s.push_str(&format!(
                "{:e},{:e},{:e},{:e},{part}\n",
                u.to_um(x),
                u.to_um(v.center[1]),
                u.to_um(v.center[2]),
                v.volume / um3
            ));
        }
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn voxel_file_matches_closed_form_and_mirrors() {
    let u = UnitContext::codata();
    let a = u.um(1.0);
    let g = AllenWrench::with_wire_radii(a, a, u.nm(2.0), u.nm(2.0), 1.0, 0.0).unwrap();
    let (va, vb) = g.voxelize(a / 50.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("wrench.csv");
    let mirrored = dir.path().join("mirrored.csv");
    write_voxels(&plain, &va, &vb, &u, false, "B");
    write_voxels(&mirrored, &va, &vb, &u, true, "B");
    let omega = 1.0 / a;
    let w = format!("{omega}");
    let j = |p: &Path| {
        let out = stdout(&vactorque(&[
            "voxel",
            "--voxel-file",
            p.to_str().unwrap(),
            "--omega-ev",
            &w,
        ]));
        (col(&out, 3)[0], note(&out, "tau_SI_Nm"))
    };
    let (jz, tau) = j(&plain);
    let (jm, tau_m) = j(&mirrored);
    let closed = allen_wrench_factor(&g, omega, &GeometryConfig::default()).unwrap();
    assert!((jz / closed - 1.0).abs() < 0.01, "{jz:e} vs {closed:e}");
    assert!((jz + jm).abs() <= 1e-9 * jz.abs());
    assert!(tau < 0.0 && (tau + tau_m).abs() <= 1e-9 * tau.abs());
}

#[test]
fn voxel_part_labels_are_checked() {
    let u = UnitContext::codata();
    let g = AllenWrench::with_wire_radii(u.um(1.0), u.um(1.0), u.nm(10.0), u.nm(10.0), 1.0, 0.0)
        .unwrap();
    let (va, vb) = g.voxelize(u.um(0.1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    write_voxels(&path, &va, &vb, &u, false, "C");
    let o = vactorque(&["voxel", "--voxel-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("line") && err.contains("part must be A or B"),
        "{err}"
    );
    assert_eq!(vactorque(&["voxel"]).status.code(), Some(2));
}

#[test]
fn identical_settings_give_identical_bytes() {
    let args = [
        "geometry-factor",
        "--a-tilde",
        "log:0.1:10:7",
        "--body",
        "dual-flag",
    ];
    let first = stdout(&vactorque(&args));
    assert_eq!(first, stdout(&vactorque(&args)));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let second = stdout(&vactorque(&seq));
    assert_eq!(rows(&first), rows(&second));
}

#[test]
fn header_carries_resolved_settings() {
    let out = stdout(&vactorque(&[
        "materials-table",
        "--omega-ev",
        "0.01,0.1",
        "--chi-b",
        "2.5",
    ]));
    assert!(out.lines().any(|l| l == "# chi = 2.5"));
    assert!(out.lines().any(|l| l == "# unit_mode = \"codata\""));
    let body: String = out
        .lines()
        .filter(|l| l.starts_with("# "))
        .map(|l| format!("{}\n", &l[2..]))
        .collect();
    let settings: toml::Value =
        toml::from_str(body.split_once('\n').unwrap().1.split_once('\n').unwrap().1).unwrap();
    assert_eq!(settings["dielectric"]["chi"].as_float(), Some(2.5));
}

#[test]
fn environment_overrides_file_and_flags_override_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[dielectric]\nchi = 3.0\n[sweep]\nomega_ev = \"0.1\"\n",
    )
    .unwrap();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_vactorque"));
        c.args(["materials-table", "--config", cfg.to_str().unwrap()]);
        if let Some(f) = flag {
            c.args(["--chi-b", f]);
        }
        if let Some(e) = env {
            c.env("VACTORQUE_CHI_B", e);
        }
        col(&stdout(&c.output().unwrap()), 3)[0]
    };
    assert_eq!(run(None, None), 3.0);
    assert_eq!(run(Some("4"), None), 4.0);
    assert_eq!(run(Some("4"), Some("5")), 5.0);
    let rounded = Command::new(env!("CARGO_BIN_EXE_vactorque"))
        .args(["torque", "--regime", "small", "--t-body-k", "600"])
        .env("VACTORQUE_UNIT_MODE", "rounded")
        .output()
        .unwrap();
    assert!(stdout(&rounded).contains("unit_mode = \"rounded\""));
}

#[test]
fn json_output_parses() {
    let out = stdout(&vactorque(&[
        "dynamics", "--u0", "1.5,2", "--u1", "1.1", "--format", "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["u0", "t_hat"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(v["notes"]["t0_s"].as_f64().unwrap() > 0.0);
    assert_eq!(v["settings"]["sweep"]["u1"].as_f64(), Some(1.1));
}
