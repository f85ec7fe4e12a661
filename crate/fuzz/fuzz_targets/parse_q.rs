#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(x) = bvorb::arith::parse_q(s) {
            assert_eq!(bvorb::arith::parse_q(&bvorb::arith::fmt_q(&x)).unwrap(), x);
        }
    }
});
