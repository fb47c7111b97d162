#![no_main]

use libfuzzer_sys::fuzz_target;
use macq_core::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = parse::rationals(s) {
        for r in v {
            assert_eq!(parse::rational(&r.to_string()).unwrap(), r);
        }
    }
});
