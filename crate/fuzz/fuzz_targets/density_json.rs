#![no_main]

use htjack::density::CrystalDensity;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = serde_json::from_slice::<CrystalDensity>(data) {
        let c = d.cdf(0.0);
        assert!(c.is_nan() || (-1e-9..=d.mass() + 1e-9).contains(&c));
        let again: CrystalDensity = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(again, d);
    }
});
