#![no_main]

use libfuzzer_sys::fuzz_target;
use superext_core::checkers::{check_lemma41, CertificateFile};

fuzz_target!(|data: &[u8]| {
    let Ok(file) = serde_json::from_slice::<CertificateFile>(data) else {
        return;
    };
    if file.group.contains("file:") {
        return;
    }
    if let Ok((g, cert)) = file.resolve() {
        let _ = check_lemma41(&cert, &g);
    }
});
