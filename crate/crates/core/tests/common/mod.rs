#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// The CLI suite over the bundled corpus: (fixture name, arguments).
pub const SUITE: &[(&str, &[&str])] = &[
    ("certify_z_lattice", &["certify", "--graph", "corpus/z_lattice.json"]),
    ("certify_z2_lattice", &["certify", "--graph", "corpus/z2_lattice.json"]),
    ("certify_bc2_chain", &["certify", "--graph", "corpus/bc2_chain.json"]),
    ("certify_odd_cycle", &["certify", "--graph", "corpus/odd_cycle_directed.json"]),
    (
        "certify_z_position",
        &["certify", "--graph", "corpus/z_lattice.json", "--phi", "corpus/z_position.json", "--full"],
    ),
    (
        "certify_bc2_position",
        &["certify", "--graph", "corpus/bc2_chain.json", "--phi", "corpus/bc2_position.json", "--full"],
    ),
    (
        "certify_k3_constant",
        &["certify", "--graph", "corpus/k3.json", "--phi", "corpus/k3_constant.json", "--full"],
    ),
    (
        "certify_p3_linear",
        &["certify", "--graph", "corpus/p3.json", "--phi", "corpus/p3_linear.json"],
    ),
    (
        "commutator_z_lattice",
        &["commutator", "verify", "--graph", "corpus/z_lattice.json", "--phi", "corpus/z_position.json"],
    ),
    (
        "commutator_z2_lattice",
        &["commutator", "verify", "--graph", "corpus/z2_lattice.json", "--phi", "corpus/z2_position.json"],
    ),
    (
        "commutator_bc2_chain",
        &["commutator", "verify", "--graph", "corpus/bc2_chain.json", "--phi", "corpus/bc2_position.json"],
    ),
    (
        "virial_k3",
        &["virial", "--graph", "corpus/k3.json", "--phi", "corpus/k3_constant.json", "--tol", "1e-9"],
    ),
    ("bands_z_lattice", &["spectrum", "bands", "--graph", "corpus/z_lattice.json", "--grid", "65"]),
    (
        "classify_z_lattice",
        &["spectrum", "classify", "--graph", "corpus/z_lattice.json", "--orient", "--phi", "corpus/z_position.json"],
    ),
    (
        "classify_z2_lattice",
        &[
            "spectrum", "classify", "--graph", "corpus/z2_lattice.json", "--orient", "--phi",
            "corpus/z2_position.json", "--grid", "33",
        ],
    ),
    (
        "classify_bc2_chain",
        &["spectrum", "classify", "--graph", "corpus/bc2_chain.json", "--orient", "--phi", "corpus/bc2_position.json"],
    ),
    ("classify_k3", &["spectrum", "classify", "--graph", "corpus/k3.json"]),
    ("classify_p3", &["spectrum", "classify", "--graph", "corpus/p3.json"]),
    (
        "conv_s3z_example1",
        &[
            "conv", "analyze", "--measure", "corpus/s3z_example1.json", "--centreaza",
            "corpus/s3z_example1.json", "corpus/s3z_zero.json", "--grid", "65",
        ],
    ),
    (
        "conv_s3z_shifted",
        &[
            "conv", "analyze", "--centreaza", "corpus/s3z_example1.json", "corpus/s3z_transpositions.json",
            "--grid", "65",
        ],
    ),
    (
        "conv_z_nearest",
        &[
            "conv", "analyze", "--measure", "corpus/z_nearest.json", "--char", "corpus/z_identity_char.json",
            "--precis", "--babel",
        ],
    ),
    ("error_missing_file", &["certify", "--graph", "corpus/missing.json"]),
];

pub struct CliRun {
    pub exit_code: i32,
    pub stdout: String,
}

pub fn run_cli(args: &[&str]) -> CliRun {
    let out = Command::new(env!("CARGO_BIN_EXE_weakconj"))
        .args(args)
        .current_dir(crate_dir())
        .output()
        .expect("binary runs");
    CliRun {
        exit_code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("UTF-8 report"),
    }
}

pub fn fixture_path(name: &str) -> PathBuf {
    crate_dir().join("corpus/expected").join(format!("{name}.json"))
}

pub fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Structural equality with floats compared to an absolute tolerance.
/// Returns the JSON path of the first difference.
pub fn json_diff(a: &Value, b: &Value, tol: f64, path: &str) -> Option<String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64()?, y.as_f64()?);
            ((x - y).abs() > tol).then(|| format!("{path}: {x} vs {y}"))
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Some(format!("{path}: length {} vs {}", x.len(), y.len()));
            }
            x.iter()
                .zip(y)
                .enumerate()
                .find_map(|(i, (p, q))| json_diff(p, q, tol, &format!("{path}[{i}]")))
        }
        (Value::Object(x), Value::Object(y)) => {
            let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
            keys.into_iter().find_map(|k| match (x.get(k), y.get(k)) {
                (Some(p), Some(q)) => json_diff(p, q, tol, &format!("{path}.{k}")),
                _ => Some(format!("{path}.{k}: present on one side only")),
            })
        }
        _ => (a != b).then(|| format!("{path}: {a} vs {b}")),
    }
}

pub mod gen {
    use std::collections::BTreeSet;

    use rand::Rng;
    use rand_chacha::ChaCha8Rng;
    use weakconj::graph::Direction;
    use weakconj::group::{DiscreteGroup, Measure};
    use weakconj::scalar::Gaussian;
    use weakconj::{GroupElem, Orientation, PeriodicGraph};

    pub fn rng(seed: u64) -> ChaCha8Rng {
        rand::SeedableRng::seed_from_u64(seed)
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    fn canonical(u: usize, v: usize, t: &[i64]) -> (usize, usize, Vec<i64>) {
        let a = (u, v, t.to_vec());
        let b = (v, u, t.iter().map(|x| -x).collect());
        a.min(b)
    }

    /// Random Z^rank-periodic graph with at most `max_edges` edge classes and
    /// translations in {−1, 0, 1}.
    pub fn periodic_graph(rng: &mut ChaCha8Rng, rank: usize, cells: usize, max_edges: usize) -> PeriodicGraph {
        let mut seen = BTreeSet::new();
        let mut edges = Vec::new();
        for _ in 0..max_edges {
            let u = rng.gen_range(0..cells);
            let v = rng.gen_range(0..cells);
            let t: Vec<i64> = (0..rank).map(|_| rng.gen_range(-1..=1)).collect();
            if u == v && t.iter().all(|&x| x == 0) {
                continue;
            }
            if seen.insert(canonical(u, v, &t)) {
                edges.push((format!("v{u}"), format!("v{v}"), t));
            }
        }
        PeriodicGraph::new(rank, labels(cells), edges).expect("generated graph is valid")
    }

    /// Random finite simple graph on `n` vertices with edge probability `p`.
    pub fn finite_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> PeriodicGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((format!("v{u}"), format!("v{v}"), vec![]));
                }
            }
        }
        PeriodicGraph::new(0, labels(n), edges).expect("generated graph is valid")
    }

    /// Random oriented graph built from levels: the edge from (u, 0) to
    /// (v, t) is kept only when the level difference is ±1, so a position
    /// function always exists.
    pub fn leveled_graph(rng: &mut ChaCha8Rng, rank: usize, cells: usize, tries: usize) -> (PeriodicGraph, Orientation) {
        let level: Vec<i64> = (0..cells).map(|_| rng.gen_range(0..3)).collect();
        let mut seen = BTreeSet::new();
        let mut edges = Vec::new();
        for _ in 0..tries {
            let u = rng.gen_range(0..cells);
            let v = rng.gen_range(0..cells);
            let t: Vec<i64> = (0..rank).map(|_| rng.gen_range(-1..=1)).collect();
            let diff = level[v] + t.iter().sum::<i64>() - level[u];
            let dir = match diff {
                1 => Direction::Son,
                -1 => Direction::Father,
                _ => continue,
            };
            if seen.insert(canonical(u, v, &t)) {
                edges.push((format!("v{u}"), format!("v{v}"), t, Some(dir)));
            }
        }
        PeriodicGraph::with_orientation(rank, labels(cells), edges).expect("generated graph is valid")
    }

    pub fn small_gaussian(rng: &mut ChaCha8Rng) -> Gaussian {
        let re = rng.gen_range(-3..=3);
        let im = if rng.gen_bool(0.5) { rng.gen_range(-3..=3) } else { 0 };
        Gaussian::new(weakconj::scalar::rat(re), weakconj::scalar::rat(im))
    }

    /// Measure with at most `max_support` points, translations in [−2, 2].
    pub fn measure(rng: &mut ChaCha8Rng, g: &DiscreteGroup, max_support: usize) -> Measure {
        let k = rng.gen_range(0..=max_support);
        Measure::from_weights((0..k).map(|_| {
            let f = rng.gen_range(0..g.finite().order());
            let t = (0..g.rank()).map(|_| rng.gen_range(-2..=2)).collect();
            (GroupElem { f, t }, small_gaussian(rng))
        }))
    }

    pub fn selfadjoint_measure(rng: &mut ChaCha8Rng, g: &DiscreteGroup, max_support: usize) -> Measure {
        let mu = measure(rng, g, max_support);
        mu.plus(&weakconj::group::adjoint_measure(g, &mu))
    }
}
