#![no_main]

use libfuzzer_sys::fuzz_target;
use macq_core::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = parse::tazrp_state(s) {
        // display is canonical: sorted species per site
        assert_eq!(parse::tazrp_state(&w.to_string()).unwrap(), w);
    }
});
