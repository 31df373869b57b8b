#![no_main]
use libfuzzer_sys::fuzz_target;

use cobham_core::format::{parse_spec, print_spec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = parse_spec(text) else { return };
    let printed = print_spec(&spec);
    let again = parse_spec(&printed).expect("printed spec parses");
    assert_eq!(again, spec);
    assert_eq!(print_spec(&again), printed);
});
