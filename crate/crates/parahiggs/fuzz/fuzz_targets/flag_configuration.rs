#![no_main]

use libfuzzer_sys::fuzz_target;
use parahiggs::exactlin::{PrimeField, Rationals};
use parahiggs::feathered::{FlagConfiguration, FlagConfigurationJson};

fuzz_target!(|data: &[u8]| {
    let Ok(j) = serde_json::from_slice::<FlagConfigurationJson>(data) else { return };
    if let Ok(cfg) = FlagConfiguration::from_json(&Rationals, &j) {
        assert_eq!(FlagConfiguration::from_json(&Rationals, &cfg.to_json()).unwrap(), cfg);
    }
    let f5 = PrimeField::new(5).unwrap();
    if let Ok(cfg) = FlagConfiguration::from_json(&f5, &j) {
        assert_eq!(FlagConfiguration::from_json(&f5, &cfg.to_json()).unwrap(), cfg);
    }
});
