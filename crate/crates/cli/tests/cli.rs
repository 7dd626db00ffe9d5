use std::fs;
use std::path::Path;

use clap::Parser;
use cli::{main_with_args, Cli, Command, RunConfig};

fn radial(args: &[&str], out: &Path) -> i32 {
    let mut argv = vec!["radial"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--out", out.to_str().unwrap()]);
    main_with_args(argv)
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bs_count_writes_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(radial(&["bs-count", "--ell-max", "3"], dir.path()), 0);
    let rep = read_json(&dir.path().join("bs-count.json"));
    assert_eq!(rep["total"], 5);
    let counts: Vec<u64> = rep["channels"].as_array().unwrap().iter().map(|c| c["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![2, 1, 0, 0]);
    let man = read_json(&dir.path().join("manifest.json"));
    assert_eq!(man["command"], "bs-count");
    assert_eq!(man["status"], "ok");
    assert_eq!(man["grid"]["n"], 1500);
    assert_eq!(man["config"]["physics"]["ell_max"], 3);
    assert_eq!(man["files"][0], "bs-count.json");
}

#[test]
fn results_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["evolve", "--r-max", "20", "--n", "400", "--t-final", "2", "--amplitude", "-0.05", "--stride", "5"];
    let code = radial(&args, a.path());
    assert_eq!(radial(&args, b.path()), code);
    for name in ["evolve.json", "evolve_trajectory.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let csv = fs::read_to_string(a.path().join("evolve_trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,sup_norm,local_energy,n_plus");
    // The manifests differ only in the directory they echo.
    let strip = |p: &Path| {
        let mut m = read_json(&p.join("manifest.json"));
        m["config"]["output"]["directory"] = serde_json::Value::Null;
        m
    };
    assert_eq!(strip(a.path()), strip(b.path()));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.cfg");
    fs::write(&file, "command = spectrum\ngrid.r_max = 30 # short box\ngrid.n = 900\nphysics.a = 4\n").unwrap();
    let cli = Cli::try_parse_from(["radial", "--config", file.to_str().unwrap(), "--a", "0.25"]).unwrap();
    let cfg = cli.into_config().unwrap();
    assert_eq!(cfg.command, Command::Spectrum);
    assert_eq!((cfg.grid.r_max, cfg.grid.n, cfg.physics.a), (Some(30.0), Some(900), 0.25));
    // An explicit subcommand wins over the file's.
    let cli = Cli::try_parse_from(["radial", "bs-count", "--config", file.to_str().unwrap()]).unwrap();
    assert_eq!(cli.into_config().unwrap().command, Command::BsCount);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown key, CFL violation, bad bracket order: invalid configuration.
    assert_eq!(radial(&["spectrum", "--set", "grid.radius=3"], dir.path()), 2);
    assert_eq!(radial(&["evolve", "--dt", "1"], dir.path()), 2);
    assert_eq!(radial(&["sigma-star", "--lo", "1.0", "--hi", "0.8"], dir.path()), 2);
    assert_eq!(radial(&["--n", "100"], dir.path()), 2);
    // A bracket on one side of σ*: no decision.
    assert_eq!(radial(&["sigma-star", "--lo", "0.95", "--hi", "1.0"], dir.path()), 4);
    // Data on one side of the manifold with a bracket far too small.
    let code = radial(
        &["stable-h", "--r-max", "30", "--n", "750", "--amplitude", "0.3", "--set", "search.bracket_width=1e-9"],
        dir.path(),
    );
    assert_eq!(code, 4);
    // A classifier that cannot decide within the horizon.
    let code = radial(&["evolve", "--r-max", "20", "--n", "400", "--t-final", "1"], dir.path());
    assert_eq!(code, 4);
    let man = read_json(&dir.path().join("manifest.json"));
    assert_eq!(man["status"], "undecided");
}

#[test]
fn series_formats() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        radial(&["mode-ode", "--r-max", "20", "--n", "400", "--stride", "100", "--format", "json"], dir.path()),
        0
    );
    let s = read_json(&dir.path().join("mode-ode_mode_ode.json"));
    assert_eq!(s["columns"][2], "n_plus");
    let rep = read_json(&dir.path().join("mode-ode.json"));
    assert!(rep["envelope_ratio"].as_f64().unwrap() <= 10.0);
}

#[test]
fn default_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(cli::OUT_DIR_ENV, dir.path());
    let cfg = RunConfig::new(Command::JnDemo);
    std::env::remove_var(cli::OUT_DIR_ENV);
    assert_eq!(cfg.output.directory, dir.path());
}
