#![no_main]

use libfuzzer_sys::fuzz_target;
use macq_core::qtalg::QTRational;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<QTRational>(data) {
        let s = serde_json::to_string(&r).unwrap();
        let back: QTRational = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
});
