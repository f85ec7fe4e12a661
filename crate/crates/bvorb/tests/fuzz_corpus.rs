//! Replays the checked-in fuzz seeds through the fuzzed entry points.

use std::path::PathBuf;

use clap::Parser;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut v: Vec<String> = std::fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())).map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap()).collect();
    v.sort();
    assert!(!v.is_empty(), "no seeds for {target}");
    v
}

#[test]
fn weights_seeds() {
    let parsed: Vec<[u32; 4]> = seeds("parse_weights").iter().filter_map(|s| bvorb::weights::parse_weights(s).ok()).collect();
    assert_eq!(parsed.len(), 3);
    assert_eq!(parsed.iter().filter(|w| bvorb::weights::is_admissible_weight_table(**w).is_some()).count(), 2);
}

#[test]
fn rational_seeds() {
    for s in seeds("parse_q") {
        if let Ok(x) = bvorb::arith::parse_q(&s) {
            assert_eq!(bvorb::arith::parse_q(&bvorb::arith::fmt_q(&x)).unwrap(), x);
        }
    }
}

#[test]
fn config_seeds() {
    let ok = seeds("run_config").iter().filter(|s| bvorb::cli::RunConfig::from_toml_str(s).is_ok()).count();
    assert_eq!(ok, 2);
}

#[test]
fn argv_seeds() {
    for s in seeds("cli_args") {
        let argv = std::iter::once("bvorb").chain(s.split('\0'));
        assert!(bvorb::cli::Cli::try_parse_from(argv).is_ok(), "{s:?}");
    }
}
