//! End-to-end checks of the `mid` binary: emission formats, sweep-spec
//! execution, and exit codes.

use std::process::{Command, Output};

fn mid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mid")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn cubic_csv_stdout() {
    let out = mid(&["cubic", "--k-hat", "-1.7320508075688772", "--beta-hat", "-0.19245008972987526"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("root_id,u_re,u_im,theta_re,theta_im"));
    assert!(text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count() == 4);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("TripleRoot"));
}

#[test]
fn boundary_and_regions_emit() {
    let out = mid(&["boundary", "--grid", "21"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("k_hat,beta_hat_minus,beta_hat_plus"));

    let out = mid(&["regions", "--grid", "11,11", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 121);
}

#[test]
fn svg_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("regions.svg");
    let out = mid(&[
        "regions",
        "--grid",
        "40,40",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
}

#[test]
fn potential_uv_cl_tangent_run() {
    let out = mid(&["potential", "--gamma", "2.5", "--grid", "51"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("x,d"));

    let out = mid(&["uv", "--gamma", "0.5", "--x-end", "2.0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("x,u,u_prime,v,v_prime,d"));

    let out = mid(&["cl", "--volts", "1000", "--gap", "0.01"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("delta"));

    let out = mid(&["tangent", "--theta-l", "0.75", "--k1", "0", "--k2", "40", "--grid", "51"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("x,theta"));
}

#[test]
fn sweep_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("spec.json");
    std::fs::write(
        &spec_path,
        r#"{
            "mode": "branch_1d",
            "fixed": {"k_hat": -1.7320508075688772},
            "range": {"beta_hat": [-1.0, 1.0, 101]},
            "outputs": ["csv"],
            "quantity": "u"
        }"#,
    )
    .unwrap();
    let out_path = dir.path().join("branches.csv");
    let out = mid(&[
        "sweep",
        "--spec",
        spec_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("sweep_value,branch_id,re,im,admissible,physical"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 1 + 3 * 101);
}

#[test]
fn figures_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = mid(&["sweep", "--figures", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let count = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(count >= 13, "only {count} figure files");
}

#[test]
fn exit_codes() {
    // Domain error -> 2.
    let out = mid(&["potential", "--gamma", "2.5", "--x-end", "5"]);
    assert_eq!(out.status.code(), Some(2));

    // Invalid spec -> 2.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"mode\": \"nope\"}").unwrap();
    let out = mid(&["sweep", "--spec", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // I/O error -> 4.
    let out = mid(&["cl", "--out", "/no/such/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(4));
}
