#![no_main]

use libfuzzer_sys::fuzz_target;
use parahiggs::kronecker::{parse_tuple, AnyTuple};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_tuple(s) {
        let json = match &t {
            AnyTuple::Rational(a) => a.to_json(),
            AnyTuple::Prime(a) => a.to_json(),
        };
        assert_eq!(parse_tuple(&serde_json::to_string(&json).unwrap()).unwrap(), t);
    }
});
