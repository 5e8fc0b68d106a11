//! The binary end to end: exit codes, output files, schemas and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn model() -> PathBuf {
    root().join("configs/hokushin1.toml")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubesat-preflight"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(schema: &str, doc: &Path) {
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(root().join("schemas").join(schema)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let instance = read_json(doc);
    let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", doc.display());
}

fn assert_csv_header(path: &Path, header: &str) {
    let text = fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().next(), Some(header), "{}", path.display());
}

/// Reference channel of white noise and one SDOF response at `f_n`.
fn write_sdof_series(path: &Path, f_n: f64) {
    let (fs_hz, q, n) = (2048.0, 10.0, 1 << 15);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let x: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
    // bilinear transform of the base-excitation transfer function
    let wn = 2.0 * std::f64::consts::PI * f_n;
    let zeta = 1.0 / (2.0 * q);
    let k = wn / (wn / (2.0 * fs_hz)).tan();
    let b = [
        2.0 * zeta * wn * k + wn * wn,
        2.0 * wn * wn,
        -2.0 * zeta * wn * k + wn * wn,
    ];
    let a = [
        k * k + 2.0 * zeta * wn * k + wn * wn,
        2.0 * wn * wn - 2.0 * k * k,
        k * k - 2.0 * zeta * wn * k + wn * wn,
    ];
    let mut y = vec![0.0; n];
    for i in 0..n {
        let at = |v: &[f64], d: usize| if i >= d { v[i - d] } else { 0.0 };
        y[i] = (b[0] * x[i] + b[1] * at(&x, 1) + b[2] * at(&x, 2) - a[1] * at(&y, 1) - a[2] * at(&y, 2)) / a[0];
    }
    let mut text = format!("sample_rate_hz,{fs_hz}\nref,panel\n");
    for (u, v) in x.iter().zip(&y) {
        text.push_str(&format!("{u:.9},{v:.9}\n"));
    }
    fs::write(path, text).unwrap();
}

fn without_timestamp(path: &Path) -> Value {
    let mut v = read_json(path);
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn grms_of_the_breakpoint_table() {
    let profile = root().join("configs/at_profile.csv");
    let o = run(&["vib", "grms", "--profile", p(&profile), "--from", "20", "--to", "230"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let value: f64 = stdout(&o).split_whitespace().next().unwrap().parse().unwrap();
    assert!((value - 1.70).abs() <= 0.01, "{value}");
}

#[test]
fn frequency_gate_exit_codes() {
    assert_eq!(code(&run(&["struct", "check", "--first-freq", "53"])), 2);
    assert_eq!(code(&run(&["struct", "check", "--first-freq", "232"])), 0);
    assert_eq!(code(&run(&["struct", "check", "--first-freq", "60"])), 2);
}

#[test]
fn input_errors_exit_one_with_usage() {
    let o = run(&["bogus"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Usage"), "{}", stderr(&o));
    assert_eq!(code(&run(&["thermal", "--bogus-flag"])), 1);
    assert_eq!(code(&run(&["thermal", "--case", "hot"])), 1, "missing --model");
    let o = run(&["--model", p(&model()), "thermal", "--case", "nope"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("nope"), "{}", stderr(&o));
    assert_eq!(code(&run(&["--model", "/nonexistent.toml", "validate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn validate_reference_model() {
    let o = run(&["--model", p(&model()), "validate"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("0 error(s)"));
}

#[test]
fn numerical_failures_exit_three() {
    let o = run(&[
        "--model",
        p(&model()),
        "thermal",
        "--case",
        "cold",
        "--surface",
        "a",
        "--dt",
        "1500",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let dir = tempfile::tempdir().unwrap();
    let capped = dir.path().join("capped.toml");
    let text = fs::read_to_string(model())
        .unwrap()
        .replace("max_orbits = 60", "max_orbits = 2");
    fs::write(&capped, text).unwrap();
    let o = run(&["--model", p(&capped), "thermal", "--case", "cold", "--surface", "a"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn cold_case_thermal_run_violates_the_panel_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c2a");
    let o = run(&[
        "--model",
        p(&model()),
        "thermal",
        "--case",
        "cold",
        "--surface",
        "a",
        "--mode",
        "spin",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    for f in ["history.csv", "summary.json", "ranges.csv", "manifest.json"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    assert_csv_header(
        &out.join("history.csv"),
        "time_s,node,temp_C,q_solar_W,q_ir_W,q_albedo_W,q_internal_W,q_space_W,p_elec_W,in_eclipse",
    );
    assert_csv_header(
        &out.join("ranges.csv"),
        "case,surface,mode,power,node,min_C,max_C,mean_C",
    );
    assert_schema("thermal_summary.schema.json", &out.join("summary.json"));
    assert_schema("manifest.schema.json", &out.join("manifest.json"));

    let summary = read_json(&out.join("summary.json"));
    let dsap = summary["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|n| n["node"] == "DSAP")
        .unwrap();
    let (lo, hi) = (dsap["min_c"].as_f64().unwrap(), dsap["max_c"].as_f64().unwrap());
    assert!((lo + 43.0).abs() <= 5.0 && (hi - 55.0).abs() <= 5.0, "[{lo}, {hi}]");
    assert!(lo < -40.0);
    let band = &dsap["bands"][0];
    assert_eq!(band["pass"], false);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &Path| {
        vec![
            "--model".to_owned(),
            p(&model()).to_owned(),
            "thermal".into(),
            "--case".into(),
            "hot".into(),
            "--surface".into(),
            "d".into(),
            "--out".into(),
            p(out).to_owned(),
        ]
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let v = args(out);
        let o = run(&v.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(matches!(code(&o), 0 | 2), "{}", stderr(&o));
    }
    for f in ["history.csv", "summary.json", "ranges.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert_eq!(
        without_timestamp(&a.join("manifest.json")),
        without_timestamp(&b.join("manifest.json"))
    );
}

#[test]
fn sweep_writes_one_row_per_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let o = run(&[
        "--model",
        p(&model()),
        "sweep",
        "--cases",
        "hot,cold",
        "--surfaces",
        "a,b,c",
        "--jobs",
        "3",
        "--out",
        p(&out),
    ]);
    assert!(matches!(code(&o), 0 | 2), "{}", stderr(&o));
    let text = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("case,surface,mode,power,status,"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in &rows {
        let scenario = row.split(',').take(4).collect::<Vec<_>>().join("_");
        assert_schema("thermal_summary.schema.json", &out.join(&scenario).join("summary.json"));
        assert!(out.join(&scenario).join("history.csv").is_file());
    }
    assert_schema("manifest.schema.json", &out.join("manifest.json"));

    let again = dir.path().join("again");
    let o = run(&["--model", p(&model()), "sweep", "--jobs", "1", "--out", p(&again)]);
    assert!(matches!(code(&o), 0 | 2));
    assert_eq!(
        fs::read(again.join("sweep.csv")).unwrap(),
        text.as_bytes(),
        "job count changes nothing"
    );
}

#[test]
fn power_budget_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("power");
    let o = run(&["--model", p(&model()), "power", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_schema("budget.schema.json", &out.join("budget.json"));
    assert_schema("manifest.schema.json", &out.join("manifest.json"));
    let b = read_json(&out.join("budget.json"));
    let q = &b["quoted"];
    for (key, want) in [
        ("cell_peak_w", 1.12),
        ("string_peak_w", 6.7),
        ("spin_average_w", 1.7),
        ("required_w", 3.2),
        ("per_string_w", 0.46),
        ("gap_w", 6.24),
    ] {
        assert_eq!(q[key].as_f64().unwrap(), want, "{key}");
    }
    assert!((b["max_rated_w"].as_f64().unwrap() - 34.2).abs() < 1e-9);
}

#[test]
fn structural_reports_validate() {
    let dir = tempfile::tempdir().unwrap();
    let (m, s, c) = (dir.path().join("m"), dir.path().join("s"), dir.path().join("c"));
    assert_eq!(
        code(&run(&["--model", p(&model()), "struct", "modal", "--out", p(&m)])),
        0
    );
    assert_schema("modal.schema.json", &m.join("modal.json"));
    assert_schema("manifest.schema.json", &m.join("manifest.json"));
    assert!(fs::read_to_string(m.join("mode_shapes.csv"))
        .unwrap()
        .starts_with("x_m,mode1_"));

    let o = run(&["--model", p(&model()), "struct", "static", "--g", "1", "--out", p(&s)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_schema("static.schema.json", &s.join("static.json"));

    let o = run(&[
        "--model",
        p(&model()),
        "struct",
        "check",
        "--first-freq",
        "232",
        "--stress-mpa",
        "53",
        "--deflection-mm",
        "4.7",
        "--out",
        p(&c),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_schema("check.schema.json", &c.join("check.json"));
    assert_schema("manifest.schema.json", &c.join("manifest.json"));
    let o = run(&["struct", "check", "--deflection-mm", "6.5"]);
    assert_eq!(code(&o), 2, "boundary is strict");
}

#[test]
fn resonance_from_measured_series() {
    let dir = tempfile::tempdir().unwrap();
    let (series, out) = (dir.path().join("sdof.csv"), dir.path().join("res"));
    write_sdof_series(&series, 100.0);
    let o = run(&[
        "vib",
        "resonance",
        "--input",
        p(&series),
        "--reference",
        "ref",
        "--segment",
        "2048",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert_schema("resonance.schema.json", &out.join("resonance.json"));
    assert_schema("manifest.schema.json", &out.join("manifest.json"));
    let r = read_json(&out.join("resonance.json"));
    let f = r["channels"][0]["frequency_hz"].as_f64().unwrap();
    assert!((f - 100.0).abs() <= 1.0, "{f}");

    write_sdof_series(&series, 40.0);
    let o = run(&[
        "vib",
        "resonance",
        "--input",
        p(&series),
        "--reference",
        "ref",
        "--segment",
        "2048",
    ]);
    assert_eq!(code(&o), 2, "a 40 Hz resonance is below the gate");

    let psd = dir.path().join("psd");
    let o = run(&["vib", "psd", "--input", p(&series), "--out", p(&psd)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_csv_header(&psd.join("psd.csv"), "freq_hz,ref,panel");
    let mag = dir.path().join("mag");
    let o = run(&[
        "vib",
        "mag",
        "--input",
        p(&series),
        "--reference",
        "ref",
        "--out",
        p(&mag),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_csv_header(&mag.join("mag.csv"), "freq_hz,panel");
}

#[test]
fn unwritable_output_reports_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not_a_dir");
    fs::write(&blocker, "").unwrap();
    let target = blocker.join("out");
    let o = run(&["--model", p(&model()), "power", "--out", p(&target)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains(p(&blocker)), "{}", stderr(&o));

    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let ro = dir.path().join("ro");
        fs::create_dir(&ro).unwrap();
        fs::set_permissions(&ro, fs::Permissions::from_mode(0o555)).unwrap();
        // privileged users ignore mode bits; only check when the bits bite
        if fs::write(ro.join("probe"), "").is_err() {
            let o = run(&["--model", p(&model()), "power", "--out", p(&ro)]);
            assert_eq!(code(&o), 1);
            assert!(stderr(&o).contains(p(&ro)), "{}", stderr(&o));
        } else {
            fs::remove_file(ro.join("probe")).unwrap();
        }
        fs::set_permissions(&ro, fs::Permissions::from_mode(0o755)).unwrap();
    }
}
