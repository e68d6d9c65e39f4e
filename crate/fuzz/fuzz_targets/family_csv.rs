#![no_main]

use libfuzzer_sys::fuzz_target;
use superext_core::SetFamily;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(line) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(f) = SetFamily::parse_csv_line(usize::from(n % 33), line) {
        assert_eq!(SetFamily::parse_csv_line(f.ground_size(), &f.to_csv_line()).unwrap(), f);
    }
});
