#![no_main]

use libfuzzer_sys::fuzz_target;
use weakconj::load_oriented_graph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok((g, o)) = load_oriented_graph(text) else {
        return;
    };
    // accepted graphs survive a round trip and keep symmetric neighbourhoods
    let again = load_oriented_graph(&g.to_json(Some(&o)).to_string()).expect("round trip");
    assert_eq!(again.0.edges(), g.edges());
    assert_eq!(again.1, o);
    for x in g.representatives() {
        for y in g.neighbors(&x).expect("cell vertex") {
            assert!(g.neighbors(&y).expect("cell vertex").contains(&x));
        }
    }
});
