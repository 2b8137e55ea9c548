#![no_main]

use htjack::sampler::read_samples_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(xs) = read_samples_csv(data) {
        assert!(xs.iter().all(|x| x.is_finite()));
    }
});
