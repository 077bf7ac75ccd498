#![no_main]

use libfuzzer_sys::fuzz_target;
use parahiggs::multiweight::parse_multiweight;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(mw) = parse_multiweight(s) {
        let _ = mw.validate();
        let back = serde_json::to_string(&mw).unwrap();
        assert_eq!(parse_multiweight(&back).unwrap(), mw);
    }
});
