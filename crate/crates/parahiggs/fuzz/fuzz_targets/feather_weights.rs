#![no_main]

use libfuzzer_sys::fuzz_target;
use parahiggs::feathered::FeatherWeights;

fuzz_target!(|data: &[u8]| {
    if let Ok(fw) = serde_json::from_slice::<FeatherWeights>(data) {
        let back = serde_json::to_vec(&fw).unwrap();
        assert_eq!(serde_json::from_slice::<FeatherWeights>(&back).unwrap(), fw);
    }
});
