#![no_main]

use libfuzzer_sys::fuzz_target;
use macq_core::fillings::{maj, quinv, Filling, SuperFilling};

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = serde_json::from_slice::<Filling>(data) {
        let _ = (maj(&f), quinv(&f));
        let back: Filling = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back.columns(), f.columns());
    }
    if let Ok(f) = serde_json::from_slice::<SuperFilling>(data) {
        let back: SuperFilling = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back.columns(), f.columns());
    }
});
