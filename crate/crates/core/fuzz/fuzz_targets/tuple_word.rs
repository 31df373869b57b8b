#![no_main]
use libfuzzer_sys::fuzz_target;

use cobham_core::numeration::{decode_tuple, encode_tuple, TupleWord};

fuzz_target!(|data: &[u8]| {
    let Some((&p, rest)) = data.split_first() else { return };
    let p = u64::from(p % 9) + 2;
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let Ok(t) = TupleWord::parse(text) else { return };
    let Ok(v) = decode_tuple(p, &t) else { return };
    let back = encode_tuple(p, &v).expect("decoded vector encodes");
    assert_eq!(decode_tuple(p, &back).expect("encoded word decodes"), v);
    assert!(back.len() <= t.len().max(1));
});
