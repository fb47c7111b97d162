#![no_main]

use libfuzzer_sys::fuzz_target;
use macq_core::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse::partition(s) {
        assert_eq!(parse::partition(&p.to_string()).unwrap(), p);
    }
});
