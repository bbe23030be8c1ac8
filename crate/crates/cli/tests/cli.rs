use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lineshape(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lineshape"))
        .arg("--out-dir")
        .arg(dir)
        .arg("--quiet")
        .args(args)
        .output()
        .expect("binary runs")
}

fn files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = match fs::read_dir(dir) {
        Ok(rd) => rd
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect(),
        Err(_) => vec![],
    };
    names.sort();
    names
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn lineshape_writes_one_csv_per_representation_plus_plot_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = lineshape(
        dir.path(),
        &[
            "--plot",
            "svg",
            "lineshape",
            "--gamma",
            "0.1",
            "--reps",
            "coulomb,poincare,symmetric",
            "--suppress-lamb-shift",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        files(dir.path()),
        [
            "lineshape.meta.json",
            "lineshape.svg",
            "lineshape_coulomb.csv",
            "lineshape_poincare.csv",
            "lineshape_symmetric.csv"
        ]
    );
    let svg = fs::read_to_string(dir.path().join("lineshape.svg")).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(svg.contains("Coulomb") && svg.contains("Poincar"));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lineshape.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["cutoff"], 1000.0);
    assert_eq!(meta["scenario"]["lineshape"]["gamma"], 0.1);
    assert!(meta["generated_unix_seconds"].as_u64().unwrap() > 0);
}

#[test]
fn custom_alpha_gets_a_file_safe_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = lineshape(
        dir.path(),
        &["lineshape", "--reps", "alpha:0.3", "--points", "20"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("lineshape_alpha-0.3.csv")).unwrap();
    assert_eq!(csv.lines().count(), 21);
}

#[test]
fn pulse_with_references_and_gnuplot() {
    let dir = tempfile::tempdir().unwrap();
    let out = lineshape(
        dir.path(),
        &[
            "--plot",
            "gnuplot",
            "pulse",
            "--rabi",
            "1.0",
            "--gamma",
            "0.01",
            "--delta-l",
            "0",
            "--reps",
            "symmetric",
            "--references",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let names = files(dir.path());
    for expected in [
        "pulse.gp",
        "pulse_symmetric.csv",
        "pulse_lorentzian.csv",
        "pulse_lorentzian_laser.csv",
    ] {
        assert!(names.iter().any(|n| n == expected), "{names:?}");
    }
    let gp = fs::read_to_string(dir.path().join("pulse.gp")).unwrap();
    assert!(gp.contains("pulse_symmetric.csv"));
}

#[test]
fn verify_exits_zero_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = lineshape(dir.path(), &["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = fs::read_to_string(dir.path().join("verify.json")).unwrap();
    let parsed = gauge_lineshape::verify::VerificationReport::from_json(&report).unwrap();
    assert!(parsed.missing_checks().is_empty());
    assert!(parsed.all_passed());
}

#[test]
fn parse_errors_report_line_and_column_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("bad.yaml");
    fs::write(
        &scenario,
        "mode: pulse\npulse:\n  rabi: 1.0\n  rabbi: 2.0\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = lineshape(&out_dir, &["run", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("bad.yaml:4:3"), "{err}");
    assert!(err.contains("rabbi"));
    assert!(files(&out_dir).is_empty());
}

#[test]
fn malformed_yaml_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("broken.yaml");
    fs::write(&scenario, "mode: lineshape\ngrid: {min: 0.1, max\n").unwrap();
    let out = lineshape(dir.path(), &["run", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_3_and_name_the_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let out = lineshape(dir.path(), &["lineshape", "--gamma", "-0.1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("gamma"));
    let out = lineshape(dir.path(), &["pulse", "--delta-l", "2.0"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "laser frequency must stay positive"
    );
    let out = lineshape(dir.path(), &["--cutoff", "0", "lineshape"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(files(dir.path()).is_empty());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        lineshape(dir.path(), &["--seedless", "verify"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lineshape(dir.path(), &["run", "--preset", "missing"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lineshape(dir.path(), &["lineshape", "--reps", "gauge-x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lineshape(dir.path(), &["lineshape", "--reps", "coulomb,coulomb"])
            .status
            .code(),
        Some(3)
    );
    assert!(files(dir.path()).is_empty());
}

#[test]
fn unwritable_output_leaves_nothing_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // a directory where the plot file should go makes the final rename fail
    fs::create_dir(dir.path().join("lineshape.svg")).unwrap();
    fs::write(dir.path().join("lineshape.svg").join("x"), "").unwrap();
    let out = lineshape(dir.path(), &["--plot", "svg", "lineshape"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(files(dir.path()), ["lineshape.svg"]);
}

#[test]
fn scenario_mode_must_match_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.yaml");
    fs::write(&scenario, "mode: pulse\n").unwrap();
    let out = lineshape(
        dir.path(),
        &["lineshape", "--scenario", scenario.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_scenario_values() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.yaml");
    fs::write(&scenario, "mode: fluorescence\nrepresentations: [coulomb]\nfluorescence:\n  gamma: 0.2\noutput:\n  stem: fl\n").unwrap();
    let out = lineshape(
        dir.path(),
        &[
            "fluorescence",
            "--scenario",
            scenario.to_str().unwrap(),
            "--gamma",
            "0.05",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("fl_coulomb.csv")).unwrap();
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .contains(",5.0000000000000003e-2,"));
}

#[test]
fn preset_key_in_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.yaml");
    fs::write(
        &scenario,
        "preset: lamb-hydrogen\nrepresentations: [poincare]\noutput:\n  plot: null\n",
    )
    .unwrap();
    let out = lineshape(dir.path(), &["run", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("lamb-hydrogen_poincare.csv")).unwrap();
    assert!(csv.lines().next().unwrap().ends_with(",n_factor"));
}

#[test]
fn plot_subcommand_reads_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        lineshape(dir.path(), &["lineshape", "--points", "50"])
            .status
            .code(),
        Some(0)
    );
    let a = dir.path().join("lineshape_coulomb.csv");
    let b = dir.path().join("lineshape_symmetric.csv");
    let out = lineshape(
        dir.path(),
        &[
            "plot",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
            "--stem",
            "both",
            "--log-scale",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let svg = fs::read_to_string(dir.path().join("both.svg")).unwrap();
    assert_eq!(svg.matches("<path").count(), 2);
}
