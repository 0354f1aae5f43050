#![no_main]

use libfuzzer_sys::fuzz_target;
use weakconj::group::{load_character, DiscreteGroup};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for d in 0..3 {
        if let Ok(c) = load_character(&DiscreteGroup::lattice(d), text) {
            assert_eq!(c.slope.len(), d);
        }
    }
});
