#![no_main]

use libfuzzer_sys::fuzz_target;
use superext_core::superext::{LambdaTable, LambdaTableJson, DEFAULT_SEED};

fuzz_target!(|data: &[u8]| {
    if let Ok(json) = serde_json::from_slice::<LambdaTableJson>(data) {
        if let Ok(t) = LambdaTable::from_json(json, DEFAULT_SEED) {
            assert_eq!(LambdaTable::from_json(t.to_json(), DEFAULT_SEED).unwrap().rows(), t.rows());
        }
    }
});
