//! Black-box checks of the command-line binary: exit codes, file emission,
//! and byte-level reproducibility.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_infoflow"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("infoflow_cli_{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn help_succeeds() {
    let out = bin().arg("--help").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("--experiment"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = bin().arg("--wat").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--wat"));
}

#[test]
fn malformed_number_names_the_key() {
    let out = bin().args(["--samples", "lots"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("samples"));
}

#[test]
fn bernoulli_run_emits_accurate_csv() {
    let dir = temp_dir("bern");
    let out = bin()
        .args([
            "--experiment",
            "bernoulli",
            "--d-range",
            "2..10",
            "--samples",
            "200000",
            "--delta-inv",
            "300",
            "--seed",
            "5",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("bernoulli.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "param,empirical_nats,predicted_nats,discrepancy_nats,flags"
    );
    assert_eq!(lines.len(), 1 + 9);
    for (row, d) in lines[1..].iter().zip(2u32..) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], d.to_string());
        let empirical: f64 = fields[1].parse().unwrap();
        let expected = 300f64.ln() - (d as f64).ln();
        assert!(
            (empirical - expected).abs() < 0.03,
            "d={d}: {empirical} vs {expected}"
        );
    }
}

#[test]
fn identical_configs_reproduce_byte_identical_csv() {
    let dir_a = temp_dir("repro_a");
    let dir_b = temp_dir("repro_b");
    for dir in [&dir_a, &dir_b] {
        let out = bin()
            .args([
                "--experiment",
                "sinebox",
                "--n-range",
                "1..3",
                "--samples",
                "50000",
                "--delta-inv",
                "60",
                "--dist",
                "acip",
                "--seed",
                "11",
                "--out",
                dir.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(dir_a.join("sinebox.csv")).unwrap();
    let b = std::fs::read(dir_b.join("sinebox.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn env_var_overrides_output_directory() {
    let flag_dir = temp_dir("envflag");
    let env_dir = temp_dir("envdir");
    let out = bin()
        .args([
            "--experiment",
            "cmi-check",
            "--out",
            flag_dir.to_str().unwrap(),
        ])
        .env("INFOFLOW_OUT_DIR", env_dir.to_str().unwrap())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(env_dir.join("cmi-check.csv").exists());
    assert!(!flag_dir.join("cmi-check.csv").exists());
}

#[test]
fn config_file_with_flag_override() {
    let dir = temp_dir("cfg");
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"experiment": "noise", "samples": 50000, "delta_inv": 200, "epsilon": [0.5], "out": "{}"}}"#,
            dir.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "--epsilon", "0.25"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("noise.csv")).unwrap();
    assert!(csv.contains("eps=0.25"));
    assert!(!csv.contains("eps=0.5"));
}

#[test]
fn unknown_config_key_lists_valid_keys() {
    let dir = temp_dir("badcfg");
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"sample": 10}"#).unwrap();
    let out = bin()
        .args(["--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sample"), "{err}");
    assert!(err.contains("samples"), "{err}");
}

#[test]
fn plot_flag_emits_svg() {
    let dir = temp_dir("svg");
    let out = bin()
        .args([
            "--experiment",
            "bernoulli",
            "--d-range",
            "2..5",
            "--samples",
            "20000",
            "--delta-inv",
            "50",
            "--plot",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.join("bernoulli.svg")).unwrap();
    assert!(svg.contains("</svg>"));
}

#[test]
fn oversized_joint_alphabet_is_a_usage_error() {
    let dir = temp_dir("capacity");
    let out = bin()
        .args([
            "--experiment",
            "te",
            "--delta-inv",
            "300",
            "--samples",
            "10000",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn noise_accepts_per_amplitude_meshes() {
    let dir = temp_dir("llist");
    let out = bin()
        .args([
            "--experiment",
            "noise",
            "--epsilon",
            "0.5,0.1",
            "--l-list",
            "300,900",
            "--samples",
            "100000",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("noise.csv")).unwrap();
    assert!(!csv.contains("coarse-mesh"), "{csv}");

    let out = bin()
        .args([
            "--experiment",
            "noise",
            "--epsilon",
            "0.5,0.1",
            "--l-list",
            "300",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("l_list"));
}
