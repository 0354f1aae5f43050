//! Replays the fuzz seeds and deterministic mutations of them through the
//! parsers: no input may panic, and accepted inputs must round-trip.

mod common;

use std::path::PathBuf;

use rand::Rng;
use weakconj::group::{adjoint_measure, load_character, load_measure, DiscreteGroup};
use weakconj::{load_graph, load_oriented_graph, load_vertex_function};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir: PathBuf = common::crate_dir().join("../../fuzz/corpus").join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds for {target}");
    files.into_iter().map(|p| std::fs::read(p).unwrap()).collect()
}

/// Seeds plus byte-level mutations (flip, delete, duplicate, splice digits).
fn inputs(target: &str) -> Vec<String> {
    let mut rng = common::gen::rng(0xf022);
    let mut out = Vec::new();
    for seed in seeds(target) {
        out.push(seed.clone());
        for _ in 0..200 {
            let mut s = seed.clone();
            for _ in 0..rng.gen_range(1..4) {
                if s.is_empty() {
                    break;
                }
                let i = rng.gen_range(0..s.len());
                match rng.gen_range(0..4) {
                    0 => {
                        let alphabet = b"0123456789-/[]{}\",:ab";
                        s[i] = alphabet[rng.gen_range(0..alphabet.len())];
                    }
                    1 => {
                        s.remove(i);
                    }
                    2 => {
                        let b = s[i];
                        s.insert(i, b);
                    }
                    _ => s.splice(i..i, b"99999999999".iter().copied()).for_each(drop),
                }
            }
            out.push(s);
        }
    }
    out.into_iter().filter_map(|b| String::from_utf8(b).ok()).collect()
}

#[test]
fn graph_parser() {
    let mut accepted = 0;
    for text in inputs("parse_graph") {
        if let Ok((g, o)) = load_oriented_graph(&text) {
            accepted += 1;
            let again = load_oriented_graph(&g.to_json(Some(&o)).to_string()).unwrap();
            assert_eq!(again.0.edges(), g.edges());
            assert_eq!(again.1, o);
        }
    }
    assert!(accepted > 0);
}

#[test]
fn vertex_function_parser() {
    let g = load_graph(
        r#"{"rank":1,"cell":["a","b"],"edges":[["a","a",[1]],["a","b",[1]],["b","a",[1]],["b","b",[1]]]}"#,
    )
    .unwrap();
    for text in inputs("parse_phi") {
        if let Ok(phi) = load_vertex_function(&g, &text) {
            assert_eq!(load_vertex_function(&g, &phi.to_json(&g).to_string()).unwrap(), phi);
        }
    }
}

#[test]
fn measure_parser() {
    let mut accepted = 0;
    for text in inputs("parse_measure") {
        if let Ok((g, mu)) = load_measure(&text) {
            accepted += 1;
            let (g2, mu2) = load_measure(&mu.to_json(&g).to_string()).unwrap();
            assert_eq!((g2, &mu2), (g.clone(), &mu));
            assert_eq!(adjoint_measure(&g, &adjoint_measure(&g, &mu)), mu);
        }
    }
    assert!(accepted > 0);
}

#[test]
fn character_parser() {
    for text in inputs("parse_character") {
        for d in 0..3 {
            if let Ok(c) = load_character(&DiscreteGroup::lattice(d), &text) {
                assert_eq!(c.slope.len(), d);
            }
        }
    }
}
