#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(w) = bvorb::weights::parse_weights(s) {
            assert!(w.iter().all(|&x| x > 0));
            let spec = bvorb::weights::OrbifoldSpec::new(bvorb::weights::Curve::Quartic, w);
            assert_eq!(spec.is_ok(), bvorb::weights::is_admissible_weight_table(w).is_some());
        }
    }
});
