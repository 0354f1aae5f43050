#![no_main]

use libfuzzer_sys::fuzz_target;
use weakconj::group::{adjoint_measure, load_measure};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok((g, mu)) = load_measure(text) else {
        return;
    };
    let (g2, mu2) = load_measure(&mu.to_json(&g).to_string()).expect("round trip");
    assert_eq!(g2, g);
    assert_eq!(mu2, mu);
    assert_eq!(adjoint_measure(&g, &adjoint_measure(&g, &mu)), mu);
});
