#![no_main]
use libfuzzer_sys::fuzz_target;

use cobham_core::numeration::{greedy_rep, value, NumerationSystem, Representation};

fuzz_target!(|data: &[u8]| {
    let Some((&p, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let Ok(r) = Representation::parse(text) else { return };
    let system = match p % 10 {
        0 => NumerationSystem::fibonacci(),
        k => NumerationSystem::base(u64::from(k) + 1).expect("base at least 2"),
    };
    let Ok(x) = value(&system, &r) else { return };
    let g = greedy_rep(&system, x).expect("value has a representation");
    assert_eq!(value(&system, &g).expect("greedy value"), x);
    assert_eq!(greedy_rep(&system, x).expect("greedy is stable"), g);
});
