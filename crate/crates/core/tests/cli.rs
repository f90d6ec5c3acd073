use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dipolar-qubit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).expect(name);
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn threshold_sweep_over_temperature() {
    let csv = stdout(&bin(&[
        "sweep",
        "--vary",
        "T",
        "--start",
        "3",
        "--stop",
        "300",
        "--points",
        "2",
        "--outputs",
        "threshold_field",
    ]));
    assert_eq!(csv.lines().count(), 3);
    let e = column(&csv, "threshold_field_V_per_m");
    assert!((e[0] / 1.16e6 - 1.0).abs() < 0.01, "{e:?}");
    assert!((e[1] / 1.16e10 - 1.0).abs() < 0.01, "{e:?}");
}

#[test]
fn omega0_scales_as_sqrt_field() {
    let csv = stdout(&bin(&[
        "sweep",
        "--vary",
        "E",
        "--start",
        "1V/um",
        "--stop",
        "1e4V/um",
        "--points",
        "5",
        "--spacing",
        "log",
        "--outputs",
        "omega0",
    ]));
    let e = column(&csv, "E_V_per_m");
    let w = column(&csv, "omega0_rad_per_s");
    assert_eq!(e.first(), Some(&1e6));
    // The csv carries 13 significant digits.
    for (ei, wi) in e.iter().zip(&w) {
        let ratio = wi / ei.sqrt() / (w[0] / e[0].sqrt());
        assert!((ratio - 1.0).abs() < 1e-11, "{ratio}");
    }
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let args = [
        "sweep",
        "--vary",
        "E",
        "--start",
        "1e10",
        "--stop",
        "1e12",
        "--points",
        "4",
        "--outputs",
        "gaps,lambda,tau",
        "--levels",
        "5",
        "--model",
        "cosine",
    ];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn json_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("gate.csv");
    let json_path = dir.path().join("gate.json");
    for (path, format) in [(&csv_path, "csv"), (&json_path, "json")] {
        let out = bin(&[
            "gate",
            "--u-over-omega",
            "30",
            "--format",
            format,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let csv = fs::read_to_string(&csv_path).unwrap();
    let json: Value = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    let object = json.as_array().unwrap()[0].as_object().unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(
        header,
        object.keys().map(String::as_str).collect::<Vec<_>>()
    );
    for name in header {
        let from_csv = column(&csv, name)[0];
        let from_json = object[name].as_f64().unwrap();
        assert!((from_csv - from_json).abs() <= 1e-12 * from_json.abs().max(1e-300));
    }
    assert!(object["cz_fidelity"].as_f64().unwrap() > 0.999);
}

#[test]
fn spectrum_export_has_one_row_per_level() {
    let csv = stdout(&bin(&["spectrum", "--field", "1e4V/um", "--levels", "6"]));
    let e = column(&csv, "energy_J");
    assert_eq!(e.len(), 6);
    let gaps: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(gaps.windows(2).all(|g| g[1] < g[0]), "{gaps:?}");
}

#[test]
fn warnings_stay_out_of_the_data() {
    let out = bin(&[
        "spectrum", "--field", "300", "--levels", "3", "--model", "cosine",
    ]);
    let csv = stdout(&out);
    assert!(!csv.contains("warning"));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning: zero-point"), "{stderr}");
}

#[test]
fn user_registry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reg.json");
    fs::write(
        &path,
        r#"{"molecules": [{"name": "heavy", "p_debye": 2.0, "J_kgm2": 1e-45, "l_m": 2e-10}]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let csv = stdout(&bin(&[
        "--registry",
        p,
        "threshold",
        "--molecule",
        "heavy",
        "--temperature",
        "3",
    ]));
    assert_eq!(csv.lines().count(), 2);
    let out = bin(&[
        "--registry",
        p,
        "threshold",
        "--molecule",
        "HCl",
        "--temperature",
        "3",
    ]);
    assert!(!out.status.success());

    fs::write(&path, "{\"molecules\": [\n  {\"name\": \"x\",\n  ]}").unwrap();
    let out = bin(&["--registry", p, "threshold", "--temperature", "3"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn failures_are_single_line() {
    for args in [
        &[
            "sweep",
            "--vary",
            "E",
            "--start",
            "1",
            "--stop",
            "2",
            "--points",
            "2",
            "--outputs",
            "nope",
        ][..],
        &[
            "sweep",
            "--vary",
            "T",
            "--start",
            "5",
            "--stop",
            "2",
            "--points",
            "2",
            "--outputs",
            "threshold_field",
        ],
        &["spectrum", "--field", "0"],
        &["spectrum", "--field", "3 Hz"],
        &["threshold", "--temperature", "3", "--molecule", "NaCl"],
        &["gate", "--mode", "sideways"],
        &["frobnicate"],
    ] {
        let out = bin(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert_eq!(stderr.lines().count(), 1, "{args:?}: {stderr}");
        assert!(stderr.starts_with("error: "), "{stderr}");
    }
}
