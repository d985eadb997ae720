//! Shared helpers for the CLI test targets: golden cases and an independent
//! SplitMix64 used as an oracle for the seeded generator.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use clap::Parser;
use torsion_cli::{run, Cli};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct GoldenCase {
    pub name: String,
    pub args: Vec<String>,
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let text = std::fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    let inputs = golden_dir().join("inputs");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once('|').expect("name | args");
            let args = args
                .split_whitespace()
                .map(|a| {
                    let p = inputs.join(a);
                    if a.ends_with(".json") && p.exists() {
                        p.display().to_string()
                    } else {
                        a.to_string()
                    }
                })
                .collect();
            GoldenCase {
                name: name.trim().to_string(),
                args,
            }
        })
        .collect()
}

/// Runs one golden case with `--format json`, in process.
pub fn run_case(case: &GoldenCase) -> (i32, String) {
    let argv = std::iter::once("torsion".to_string())
        .chain(case.args.iter().cloned())
        .chain(["--format".to_string(), "json".to_string()]);
    let cli = Cli::try_parse_from(argv).expect("golden arguments parse");
    run(&cli, &mut std::io::empty())
}

pub fn expected_path(case: &GoldenCase) -> PathBuf {
    golden_dir()
        .join("expected")
        .join(format!("{}.json", case.name))
}

/// Reference SplitMix64 written from its published constants.
pub struct RefSplitMix(pub u64);

impl RefSplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}
