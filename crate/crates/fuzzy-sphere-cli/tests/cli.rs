//! End-to-end checks of the command-line surface: formats, exit codes,
//! file emission and the library round-trip.

mod common;

use common::{exit_code, run_cli, stderr_of, stdout_of, TestDir};

use fuzzy_sphere::io::curve_from_csv;
use fuzzy_sphere::{sweep, DiracSpectrum, EnergyGrid, FuzzySphereParams};

#[test]
fn spectrum_csv_lists_the_levels() {
    let out = run_cli(&["spectrum", "--N", "2"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_of(&out);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("1,0.5,1.0000000000000000e0,4"));
    assert!(rows[1].starts_with("2,1.5,2.5000000000000000e0,8"));

    let with_zero = stdout_of(&run_cli(&["spectrum", "--N", "2", "--include-zero-modes"]));
    let rows: Vec<&str> = with_zero.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[2].starts_with("3,2.5,0.0000000000000000e0,12"));
}

#[test]
fn spectrum_standard_uses_integer_levels() {
    let out = run_cli(&["spectrum", "--standard", "--nmax", "3"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_of(&out);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("1,0.5,1.0000000000000000e0,4"));
    assert!(rows[1].starts_with("2,1.5,4.0000000000000000e0,8"));
    assert!(rows[2].starts_with("3,2.5,9.0000000000000000e0,12"));
}

#[test]
fn sweep_file_round_trips_through_the_library() {
    let dir = TestDir::new("sweep");
    let out = run_cli(&[
        "sweep",
        "--N",
        "2",
        "--lambda-min",
        "0.5",
        "--lambda-max",
        "20",
        "--points",
        "24",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);

    let text = std::fs::read_to_string(dir.join("sweep_fuzzy_N2.csv")).unwrap();
    let (meta, parsed) = curve_from_csv(&text).unwrap();
    assert_eq!(meta.n, Some(2));
    assert_eq!(meta.label, "fuzzy N=2");

    let spectrum = DiracSpectrum::fuzzy(&FuzzySphereParams::unit(2).unwrap());
    let grid = EnergyGrid::log_spaced(0.5, 20.0, 24).unwrap();
    let direct = sweep(&spectrum, &grid).unwrap();
    assert_eq!(direct.points().len(), parsed.points().len());
    for (a, b) in direct.points().iter().zip(parsed.points()) {
        assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
        assert_eq!(a.t.to_bits(), b.t.to_bits());
        assert_eq!(a.trace.to_bits(), b.trace.to_bits());
        assert_eq!(a.area.to_bits(), b.area.to_bits());
        assert_eq!(a.dimension.to_bits(), b.dimension.to_bits());
    }
}

#[test]
fn trace_command_emits_t_and_derivative_columns() {
    let out = run_cli(&[
        "trace",
        "--N",
        "2",
        "--lambda-min",
        "1",
        "--lambda-max",
        "10",
        "--points",
        "5",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert_eq!(lines.next().unwrap(), "t,lambda,trace,trace_t_derivative");
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(first[0], 1.0); // t = 1 at lambda = 1
    assert!((first[2] - 2.1281977536769596).abs() <= 1e-12);
    assert!((first[3] - (-3.1132177371637453)).abs() <= 1e-12);
    assert_eq!(text.lines().count(), 2 + 5);
}

#[test]
fn pointwise_area_row_matches_the_library() {
    let out = run_cli(&["area", "--N", "2", "--lambda", "1"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_of(&out);
    let row = text.lines().nth(2).unwrap();
    let fields: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields[0], 1.0);
    assert!((fields[3] - 15.466255959068869).abs() <= 1e-12);
}

#[test]
fn normalize_area_appends_a_column() {
    let out = run_cli(&["area", "--N", "2", "--lambda", "1", "--normalize-area"]);
    let text = stdout_of(&out);
    assert!(text.lines().nth(1).unwrap().ends_with(",area_over_4pi"));
    let fields: Vec<f64> = text
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let four_pi = 4.0 * std::f64::consts::PI;
    assert!((fields[5] - fields[3] / four_pi).abs() <= 1e-15);
}

#[test]
fn json_format_is_structured() {
    let out = run_cli(&[
        "sweep",
        "--N",
        "4",
        "--lambda-min",
        "1",
        "--lambda-max",
        "10",
        "--points",
        "7",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["meta"]["label"], "fuzzy N=4");
    assert_eq!(value["points"].as_array().unwrap().len(), 7);

    let spec = run_cli(&["spectrum", "--N", "1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&spec)).unwrap();
    assert_eq!(value["lines"][0]["degeneracy"], 4);
}

#[test]
fn peak_reports_location_on_stderr_and_emits_the_row() {
    let out = run_cli(&[
        "peak",
        "--N",
        "2",
        "--which",
        "area",
        "--bracket-lo",
        "0.5",
        "--bracket-hi",
        "10",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stderr_of(&out).contains("lambda_star"));
    let text = stdout_of(&out);
    let fields: Vec<f64> = text
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((fields[0] / 1.2223131 - 1.0).abs() <= 1e-4);
    assert!((fields[3] - 16.328019859).abs() <= 1e-6);
}

#[test]
fn peak_without_interior_maximum_fails_with_code_1() {
    let out = run_cli(&[
        "peak",
        "--N",
        "2",
        "--which",
        "dimension",
        "--bracket-lo",
        "1",
        "--bracket-hi",
        "50",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("no interior maximum"));
}

#[test]
fn figures_emits_curves_and_a_manifest() {
    let dir = TestDir::new("figures");
    let out = run_cli(&[
        "figures",
        "--N",
        "2,4,8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);

    for name in [
        "fuzzy_N2.csv",
        "fuzzy_N4.csv",
        "fuzzy_N8.csv",
        "standard_nmax40.csv",
    ] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        assert_eq!(text.lines().count(), 2 + 200, "{name} should have 200 rows");
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tool"], "fuzzy-sphere");
    assert_eq!(manifest["n_max"], 40);
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 4);
    for entry in outputs {
        assert_eq!(entry["rows"], 200);
        let file = entry["file"].as_str().unwrap();
        let contents = std::fs::read_to_string(dir.join(file)).unwrap();
        // Recompute the checksum independently.
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(contents.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(entry["sha256"].as_str().unwrap(), hex);
    }
}

#[test]
fn exit_codes_follow_the_discipline() {
    // 0: success, N = 1..20.
    let n_list = (1..=20)
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",");
    assert_eq!(exit_code(&run_cli(&["verify-algebra", "--N", &n_list])), 0);
    // 1: validation problems.
    assert_eq!(
        exit_code(&run_cli(&["area", "--N", "0", "--lambda", "1"])),
        1
    );
    assert_eq!(
        exit_code(&run_cli(&["area", "--N", "2,3", "--lambda", "1"])),
        1
    );
    assert_eq!(
        exit_code(&run_cli(&["sweep", "--N", "2", "--points", "1"])),
        1
    );
    assert_eq!(
        exit_code(&run_cli(&["figures", "--out", "/tmp/x-unused"])),
        1
    );
    assert_eq!(exit_code(&run_cli(&["bogus-subcommand"])), 1);
    assert_eq!(exit_code(&run_cli(&["area", "--N", "2"])), 1); // missing --lambda
                                                               // 2: numerical verification failure (hidden fault hook).
    let fault = run_cli(&["verify-algebra", "--N", "5", "--inject-fault"]);
    assert_eq!(exit_code(&fault), 2);
    assert!(stdout_of(&fault).contains("N=5"));
}

#[test]
fn verify_algebra_handles_large_n_and_radius() {
    let out = run_cli(&["verify-algebra", "--N", "50", "--radius", "2.5"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout_of(&out).contains("PASS"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exit_code(&run_cli(&["--help"])), 0);
    assert_eq!(exit_code(&run_cli(&["--version"])), 0);
}
