#![no_main]

use libfuzzer_sys::fuzz_target;
use macq_core::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = parse::composition(s) {
        assert_eq!(parse::composition(&c.to_string()).unwrap(), c);
    }
    let _ = parse::nat_list(s);
});
