#![no_main]

use libfuzzer_sys::fuzz_target;
use superext_core::CayleyTable;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = std::str::from_utf8(data) else {
        return;
    };
    // keep the fuzzer off the filesystem
    if spec.contains("file:") {
        return;
    }
    if let Ok(g) = superext_core::parse_spec(spec) {
        assert!(g.order() <= superext_core::algebra::MAX_ORDER);
        let back = superext_core::FiniteSemigroup::from_json(g.to_json()).unwrap();
        assert_eq!(back, g);
    }
});
