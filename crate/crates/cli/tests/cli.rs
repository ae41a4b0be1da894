use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use rydberg_eit_cli::config::{Grid, SourceKind};
use rydberg_eit_cli::{parse_config, run, OutputFormat, Scenario, ScenarioConfig};

fn cli(args: &[&str], config: Option<&str>, dir: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rydberg-eit"));
    cmd.args(args);
    if let Some(text) = config {
        let path = dir.join("test.cfg");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn num(v: &serde_json::Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn validate_echoes_resolved_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cli(&["validate"], Some("# nothing set\n"), tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gamma_bc = 7.596e9 rad/s"));
    assert_eq!(parse_config(&text).unwrap(), ScenarioConfig::default());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cli(&["validate"], Some("N = 1 banana\n"), tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let missing = tmp.path().join("nope.cfg");
    let out = Command::new(env!("CARGO_BIN_EXE_rydberg-eit"))
        .args(["validate", "--config"])
        .arg(&missing)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    // an exact pole of χ at the carrier
    let pole = "gamma_ab = 0 rad/s\ngamma_bc = 0 rad/s\nspectrum_Omega2 = 0 rad/s\nprobe_offset = -1, 0, 1 Grad/s\n";
    let out = cli(&["spectrum", "--out", tmp.path().join("p").to_str().unwrap()], Some(pole), tmp.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = cli(&["levels", "--out", blocker.join("sub").to_str().unwrap()], None, tmp.path());
    assert_eq!(out.status.code(), Some(4));

    let out = cli(&["sweep", "--seed", "1"], None, tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_files_and_window() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    let cfg = "probe_offset = linspace(-100, 100, 201) Grad/s\n";
    let out = cli(&["spectrum", "--out", dir.to_str().unwrap()], Some(cfg), tmp.path());
    assert!(out.status.success());
    for i in 0..4 {
        assert!(dir.join(format!("spectrum_{i:02}.csv")).exists());
        let j = json(&dir.join(format!("spectrum_{i:02}.json")));
        assert_eq!(j["schema_version"], 1);
        let center = num(&j["summary"]["chi_im_center"]);
        let bare = num(&j["summary"]["chi_im_bare_peak"]);
        assert_eq!(center < 0.99 * bare, i > 0, "dip for spectrum {i}");
        assert_eq!(j["summary"]["window_open"], i >= 2);
    }
    // Ω₂ = 0: χ″ even about resonance
    let j = json(&dir.join("spectrum_00.json"));
    let rows = j["rows"].as_array().unwrap();
    for k in 0..rows.len() {
        let a = num(&rows[k][3]);
        let b = num(&rows[rows.len() - 1 - k][3]);
        assert!((a - b).abs() <= 1e-14 * a.abs());
    }
}

#[test]
fn format_flag_selects_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("f");
    let out = cli(&["levels", "--format", "csv", "--out", dir.to_str().unwrap()], None, tmp.path());
    assert!(out.status.success());
    assert!(dir.join("levels.csv").exists());
    assert!(!dir.join("levels.json").exists());
}

#[test]
fn sweep_grid_handling() {
    let mut cfg = ScenarioConfig::default();
    cfg.grids.sweep_omega2 = Grid::List(vec![12e9]);
    let r = &run(Scenario::Sweep, &cfg).unwrap()[0];
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.get_f64("argmax_Omega2_rad_per_s"), Some(12e9));
    assert!(parse_config("sweep_Omega2 = 30, 20, 10 Grad/s").is_err());
}

#[test]
fn isotropic_levels_are_hydrogenic() {
    let cfg = parse_config("gamma_aniso = 1\nlevel_n = 1, 3\nR_star = 100 meV\n").unwrap();
    let r = &run(Scenario::Levels, &cfg).unwrap()[0];
    let mut count = 0;
    for row in r.rows.iter().filter(|row| matches!(&row[0], rydberg_eit_cli::output::Cell::Text(t) if t == "level")) {
        let (n, e) = match (&row[1], &row[5]) {
            (rydberg_eit_cli::output::Cell::Int(n), rydberg_eit_cli::output::Cell::Num(e)) => (*n as f64, *e),
            _ => panic!("unexpected cell types"),
        };
        assert!((e + 100.0 / (n * n)).abs() < 1e-9);
        count += 1;
    }
    assert_eq!(count, 1 + 9);
}

#[test]
fn zero_field_roots_are_thresholds() {
    let cfg = parse_config("F = 0 V/m\n").unwrap();
    let r = &run(Scenario::Levels, &cfg).unwrap()[0];
    assert_eq!(r.get_f64("2Pz_max_residual_eV2"), Some(0.0));
    assert_eq!(r.get_f64("10S_coupling_meV").map(f64::abs), Some(0.0));
}

#[test]
fn empty_medium_does_not_delay() {
    let cfg = parse_config("N = 0 m^-3\nz_steps = 20\n").unwrap();
    let r = &run(Scenario::Propagate, &cfg).unwrap()[0];
    assert_eq!(r.get_f64("attenuation"), Some(1.0));
    assert!(r.get_f64("excess_delay_s").unwrap().abs() < 1e-20);
}

#[test]
fn full_bloch_source_with_weak_probe() {
    let cfg = parse_config(
        "bloch_source = full\nOmega2 = 100 Grad/s\nz_steps = 20\nsamples_per_duration = 20\n",
    )
    .unwrap();
    let r = &run(Scenario::Propagate, &cfg).unwrap()[0];
    let att = r.get_f64("attenuation").unwrap();
    let pred = r.get_f64("predicted_attenuation").unwrap();
    assert!((att / pred - 1.0).abs() < 0.1, "{att} vs {pred}");
}

#[test]
fn slowdown_factor_is_of_order_ten_thousand() {
    let cfg = parse_config("z_steps = 100\n").unwrap();
    let r = &run(Scenario::Propagate, &cfg).unwrap()[0];
    let s = r.get_f64("slowdown_factor").unwrap();
    assert!((1e4..1e5).contains(&s), "{s}");
    assert_eq!(r.get("warnings").unwrap().as_array().unwrap().len(), 0);
}

fn arb_config() -> impl Strategy<Value = ScenarioConfig> {
    (
        (1e9f64..1e11, 1e8f64..1e11, proptest::option::of(0f64..1e11), 1e20f64..1e27),
        (0f64..1e11, -1e10f64..1e10, 1usize..500, proptest::option::of(1e-10f64..1e-8)),
        (2usize..5000, -1e11f64..0.0, 0.2f64..3.0, 1u32..20),
        prop_oneof![Just(OutputFormat::Csv), Just(OutputFormat::Json), Just(OutputFormat::Both)],
        any::<bool>(),
    )
        .prop_map(|((gab, gbc, gac, n), (o2, d1, zs, dur), (pts, start, aniso, nmax), format, full)| {
            let mut c = ScenarioConfig::default();
            c.system.gamma_ab = gab;
            c.system.gamma_bc = gbc;
            c.system.gamma_ac = gac;
            c.system.density = n;
            c.drive.rabi2 = o2;
            c.drive.delta1 = d1;
            c.propagation.z_steps = zs;
            c.propagation.pulse_duration = dur;
            c.propagation.source = if full { SourceKind::Full } else { SourceKind::Linear };
            c.grids.probe_offset = Grid::Linspace { start, stop: -start / 3.0, n: pts };
            c.grids.spectrum_omega2 = vec![o2, gab];
            c.levels.params.anisotropy = aniso;
            c.levels.principal = (1..=nmax).collect();
            c.output.format = format;
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn config_text_round_trips(cfg in arb_config()) {
        let text = cfg.to_config_text();
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_config_text(), text);
    }

    #[test]
    fn unit_less_physical_values_rejected(x in 0.1f64..1e3, key in prop::sample::select(vec!["L", "gamma_ab", "N", "Omega2", "F", "r0"])) {
        let err = parse_config(&format!("{key} = {x}\n")).unwrap_err();
        prop_assert_eq!(err.location.map(|l| l.0), Some(1));
    }
}
