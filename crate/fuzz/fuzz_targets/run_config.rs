#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(cfg) = bvorb::cli::RunConfig::from_toml_str(s) {
            cfg.spec().unwrap();
        }
    }
});
