#![no_main]

use libfuzzer_sys::fuzz_target;
use macq_core::mlq::MultilineQueue;

fuzz_target!(|data: &[u8]| {
    let Ok(m) = serde_json::from_slice::<MultilineQueue>(data) else {
        return;
    };
    let s = serde_json::to_string(&m).unwrap();
    let back: MultilineQueue = serde_json::from_str(&s).unwrap();
    assert_eq!(back.matching(), m.matching());
    let _ = m.weight();
    assert_eq!(m.queue_tableau_map().content(), m.content());
});
