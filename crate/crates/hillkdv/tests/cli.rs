//! Exit-code contract, output tables, byte reproducibility, and the
//! round-trip: a `spectrum` run's resolved config reproduces the same
//! downstream `actions` tables as the original config.

use std::fs;
use std::path::PathBuf;

use hillkdv::cli::run_cli;

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> i32 {
    run_cli(std::iter::once("hillkdv").chain(args.iter().copied()))
}

const RANDOM_CFG: &str = r#"{
    "potential": {"random": {"seed": 3, "alpha": 1.0, "count": 8, "amplitude": 0.05}},
    "galerkin_n": 32,
    "product_m": 12,
    "n_cut": 8
}"#;

const ZERO_CFG: &str = r#"{
    "potential": {"modes": [], "real": true},
    "galerkin_n": 32,
    "n_cut": 8
}"#;

#[test]
fn spectrum_of_zero_potential_is_free() {
    let dir = tmp("cli-zero");
    let cfg = dir.join("cfg.json");
    fs::write(&cfg, ZERO_CFG).unwrap();
    let out = dir.join("out");
    assert_eq!(run(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);

    let table = fs::read_to_string(out.join("spectra.csv")).unwrap();
    for (i, line) in table.lines().skip(1).enumerate() {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let n = (i + 1) as f64;
        let exact = (n * std::f64::consts::PI).powi(2);
        assert_eq!(cols[0], n);
        assert!((cols[1] - exact).abs() <= 1e-9, "n={n}: {} vs {exact}", cols[1]);
        assert!((cols[3] - exact).abs() <= 1e-9);
    }
    assert!(out.join("report.json").exists());
}

#[test]
fn validation_failures_exit_2() {
    let dir = tmp("cli-bad");
    let bad_ladder = dir.join("ladder.json");
    fs::write(
        &bad_ladder,
        r#"{"potential": {"modes": [], "real": true}, "ladder": [0.2, 0.1]}"#,
    )
    .unwrap();
    let out = dir.join("out");
    let outs = out.to_str().unwrap();
    assert_eq!(run(&["concavity", "--config", bad_ladder.to_str().unwrap(), "--out", outs]), 2);

    let not_json = dir.join("broken.json");
    fs::write(&not_json, "{").unwrap();
    assert_eq!(run(&["spectrum", "--config", not_json.to_str().unwrap(), "--out", outs]), 2);

    let missing = dir.join("nope.json");
    assert_eq!(run(&["spectrum", "--config", missing.to_str().unwrap(), "--out", outs]), 2);

    // constant Fourier mode violates the zero-mean constraint
    let mean = dir.join("mean.json");
    fs::write(
        &mean,
        r#"{"potential": {"modes": [{"k": 0, "re": 1.0, "im": 0.0}], "real": true}}"#,
    )
    .unwrap();
    assert_eq!(run(&["spectrum", "--config", mean.to_str().unwrap(), "--out", outs]), 2);
}

#[test]
fn reports_are_byte_reproducible() {
    let dir = tmp("cli-repro");
    let cfg = dir.join("cfg.json");
    fs::write(&cfg, RANDOM_CFG).unwrap();
    let (a, b) = (dir.join("a"), dir.join("b"));
    for out in [&a, &b] {
        assert_eq!(
            run(&["decay", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]),
            0
        );
    }
    for f in ["report.json", "decay.csv", "config.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn spectrum_round_trips_into_actions() {
    let dir = tmp("cli-roundtrip");
    let cfg = dir.join("cfg.json");
    fs::write(&cfg, RANDOM_CFG).unwrap();
    let cfgs = cfg.to_str().unwrap();

    // seed override must propagate into the frozen config
    let spec_out = dir.join("spec");
    assert_eq!(
        run(&["spectrum", "--config", cfgs, "--out", spec_out.to_str().unwrap(), "--seed", "17"]),
        0
    );
    let frozen = spec_out.join("config.json");
    assert!(fs::read_to_string(&frozen).unwrap().contains("\"modes\""));

    let from_frozen = dir.join("a1");
    assert_eq!(
        run(&["actions", "--config", frozen.to_str().unwrap(), "--out", from_frozen.to_str().unwrap()]),
        0
    );
    let from_seed = dir.join("a2");
    assert_eq!(
        run(&["actions", "--config", cfgs, "--out", from_seed.to_str().unwrap(), "--seed", "17"]),
        0
    );
    for f in ["actions.csv", "spectra.csv", "report.json"] {
        assert_eq!(
            fs::read(from_frozen.join(f)).unwrap(),
            fs::read(from_seed.join(f)).unwrap(),
            "{f} differs between frozen-config and seeded runs"
        );
    }
}

#[test]
fn all_subcommands_emit_their_tables() {
    let dir = tmp("cli-tables");
    let cfg = dir.join("cfg.json");
    fs::write(&cfg, RANDOM_CFG).unwrap();
    let cfgs = cfg.to_str().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("spectrum", &["spectra.csv"]),
        ("actions", &["spectra.csv", "actions.csv"]),
        ("hamiltonian", &["spectra.csv", "actions.csv"]),
        ("reduce", &["reduce.csv"]),
        ("decay", &["decay.csv"]),
    ];
    for (sub, tables) in cases {
        let out = dir.join(sub);
        assert_eq!(run(&[sub, "--config", cfgs, "--out", out.to_str().unwrap(), "--threads", "2"]), 0);
        assert!(out.join("report.json").exists(), "{sub}: report.json missing");
        for t in *tables {
            assert!(out.join(t).exists(), "{sub}: {t} missing");
        }
    }
}
