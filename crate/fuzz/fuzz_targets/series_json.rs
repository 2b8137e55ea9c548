#![no_main]

use htjack::exactseries::Series;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = serde_json::from_slice::<Series>(data) {
        assert_eq!(s.coeffs().len(), s.order() + 1);
        let again: Series = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(again, s);
    }
});
