#![no_main]

use libfuzzer_sys::fuzz_target;
use weakconj::{load_graph, load_vertex_function};

const GRAPH: &str = r#"{"rank":1,"cell":["a","b"],"edges":[["a","a",[1]],["a","b",[1]],["b","a",[1]],["b","b",[1]]]}"#;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let g = load_graph(GRAPH).expect("fixed graph");
    if let Ok(phi) = load_vertex_function(&g, text) {
        let again = load_vertex_function(&g, &phi.to_json(&g).to_string()).expect("round trip");
        assert_eq!(again, phi);
    }
});
