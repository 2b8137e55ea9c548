#![no_main]

use htjack::spectra::RootList;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = serde_json::from_slice::<RootList>(data);
});
