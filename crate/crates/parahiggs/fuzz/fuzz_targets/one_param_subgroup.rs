#![no_main]

use libfuzzer_sys::fuzz_target;
use parahiggs::exactlin::Rationals;
use parahiggs::kronecker::{OneParamSubgroup, OneParamSubgroupJson};

fuzz_target!(|data: &[u8]| {
    let Ok(j) = serde_json::from_slice::<OneParamSubgroupJson>(data) else { return };
    let dim = |parts: &[parahiggs::kronecker::GradingPartJson]| parts.first().map_or(0, |x| x.space.ambient_dim);
    let (p, q) = (dim(&j.grading_p), dim(&j.grading_q));
    if p > 64 || q > 64 {
        return;
    }
    if let Ok(l) = OneParamSubgroup::from_json(&Rationals, p, q, &j) {
        assert_eq!(OneParamSubgroup::from_json(&Rationals, p, q, &l.to_json()).unwrap(), l);
    }
});
