#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;

// Parses argv only; executing commands would make runs slow and write files.
fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let argv = std::iter::once("bvorb").chain(s.split('\0'));
        let _ = bvorb::cli::Cli::try_parse_from(argv);
    }
});
