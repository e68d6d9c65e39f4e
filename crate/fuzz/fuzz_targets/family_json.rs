#![no_main]

use libfuzzer_sys::fuzz_target;
use superext_core::{MaximalLinkedSystem, SetFamily};

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = serde_json::from_slice::<SetFamily>(data) {
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<SetFamily>(&text).unwrap(), f);
        if let Ok(t) = f.transversal() {
            assert_eq!(t.transversal().unwrap(), f);
        }
    }
    let _ = serde_json::from_slice::<MaximalLinkedSystem>(data);
});
