//! Every preset against its checked-in CSVs.

use std::fs;
use std::path::{Path, PathBuf};

use gauge_lineshape::Spectrum;
use lineshape_cli::run::{execute, Overrides};
use lineshape_cli::scenario::{preset, PRESETS};

const RTOL: f64 = 1e-12;

fn golden_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("golden")
        .join(name)
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= RTOL * a.abs().max(b.abs())
}

#[test]
fn presets_match_golden_files() {
    for (name, _) in PRESETS {
        let run = execute(&preset(name).unwrap(), &Overrides::default()).unwrap();
        let csvs: Vec<_> = run
            .artifacts
            .iter()
            .filter(|a| a.file_name.ends_with(".csv"))
            .collect();
        let mut on_disk: Vec<String> = fs::read_dir(golden_dir(name))
            .unwrap_or_else(|e| panic!("{name}: {e}"))
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        on_disk.sort();
        let mut produced: Vec<String> = csvs.iter().map(|a| a.file_name.clone()).collect();
        produced.sort();
        assert_eq!(produced, on_disk, "{name}");

        for a in csvs {
            let expected = Spectrum::from_csv(
                &fs::read_to_string(golden_dir(name).join(&a.file_name)).unwrap(),
            )
            .unwrap();
            let got = Spectrum::from_csv(&a.contents).unwrap();
            assert_eq!(got.grid(), expected.grid(), "{}", a.file_name);
            assert_eq!(got.meta, expected.meta, "{}", a.file_name);
            for (k, (x, y)) in got.values().iter().zip(expected.values()).enumerate() {
                assert!(close(*x, *y), "{} row {k}: {x} vs {y}", a.file_name);
            }
            match (got.n_factor(), expected.n_factor()) {
                (Some(x), Some(y)) => assert!(x.iter().zip(y).all(|(a, b)| close(*a, *b))),
                (None, None) => {}
                _ => panic!("{}: n_factor column mismatch", a.file_name),
            }
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (name, _) in PRESETS {
        let scenario = preset(name).unwrap();
        let first = execute(&scenario, &Overrides::default()).unwrap();
        let second = execute(&scenario, &Overrides::default()).unwrap();
        for (a, b) in first.artifacts.iter().zip(&second.artifacts) {
            assert_eq!(a.file_name, b.file_name);
            if !a.file_name.ends_with(".meta.json") {
                assert_eq!(a.contents, b.contents, "{}", a.file_name);
            }
        }
    }
}
