#![no_main]
use libfuzzer_sys::fuzz_target;

use cobham_core::format::parse_spec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_spec(text);
    }
});
