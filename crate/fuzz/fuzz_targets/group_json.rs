#![no_main]

use libfuzzer_sys::fuzz_target;
use superext_core::algebra::associativity_witness;
use superext_core::FiniteSemigroup;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = FiniteSemigroup::from_json_str(text) {
        assert!(associativity_witness(&g).is_none());
    }
});
