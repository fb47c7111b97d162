#![no_main]

use libfuzzer_sys::fuzz_target;
use macq_core::qtalg::XExpansion;

fuzz_target!(|data: &[u8]| {
    if let Ok(e) = serde_json::from_slice::<XExpansion>(data) {
        let s = serde_json::to_string(&e).unwrap();
        let back: XExpansion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
});
