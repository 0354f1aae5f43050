mod common;

use common::gen;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use weakconj::certify::check_semi_adapted;
use weakconj::operators::{
    apply_a, apply_h, apply_k, kernel_h_membership, kernel_k_membership, truncate, verify_b_equals_k2,
    verify_hk_commute, FinVector, LocalOperator,
};
use weakconj::scalar::{gint, rat, Rational};
use weakconj::{load_graph, load_oriented_graph, load_vertex_function, PeriodicGraph, Vertex, VertexFunction};

fn random_vector(rng: &mut ChaCha8Rng, g: &PeriodicGraph, size: usize) -> FinVector {
    let ball = g.ball_around(&g.representatives(), 2).unwrap();
    FinVector::from_entries((0..size).map(|_| {
        let x = ball[rng.gen_range(0..ball.len())].clone();
        (x, gen::small_gaussian(rng))
    }))
}

fn random_phi(rng: &mut ChaCha8Rng, g: &PeriodicGraph) -> VertexFunction {
    VertexFunction::new(
        (0..g.cell_size()).map(|_| rat(rng.gen_range(-3..=3))).collect(),
        (0..g.rank()).map(|_| rat(rng.gen_range(-2..=2))).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h_k_and_a_are_symmetric(seed in any::<u64>(), rank in 0usize..3, cells in 1usize..4) {
        let mut rng = gen::rng(seed);
        let g = gen::periodic_graph(&mut rng, rank, cells, 6);
        let phi = random_phi(&mut rng, &g);
        let f = random_vector(&mut rng, &g, 4);
        let h = random_vector(&mut rng, &g, 4);
        prop_assert_eq!(apply_h(&g, &f).inner(&h), f.inner(&apply_h(&g, &h)));
        prop_assert_eq!(apply_k(&g, &phi, &f).inner(&h), f.inner(&apply_k(&g, &phi, &h)));
        prop_assert_eq!(apply_a(&g, &phi, &f).inner(&h), f.inner(&apply_a(&g, &phi, &h)));
    }

    #[test]
    fn conjugate_kernel_matches_composition(seed in any::<u64>(), rank in 0usize..3, cells in 1usize..4) {
        let mut rng = gen::rng(seed);
        let g = gen::periodic_graph(&mut rng, rank, cells, 6);
        let phi = random_phi(&mut rng, &g);
        let f = random_vector(&mut rng, &g, 4);
        prop_assert_eq!(LocalOperator::conjugate(&g, phi.clone()).apply(&f), apply_a(&g, &phi, &f));
    }

    #[test]
    fn truncated_adjacency_norm_is_at_most_the_degree(seed in any::<u64>(), rank in 0usize..3, cells in 1usize..4) {
        let mut rng = gen::rng(seed);
        let g = gen::periodic_graph(&mut rng, rank, cells, 6);
        let ball = g.ball_around(&g.representatives(), 3).unwrap();
        let m = truncate(&LocalOperator::adjacency(&g), &ball).unwrap();
        let norm = m.singular_values().max();
        prop_assert!(norm <= g.degree() as f64 + 1e-9, "{} > {}", norm, g.degree());
    }

    #[test]
    fn kernel_k_membership_matches_apply_k(seed in any::<u64>(), rank in 0usize..3, cells in 1usize..4) {
        let mut rng = gen::rng(seed);
        let g = gen::periodic_graph(&mut rng, rank, cells, 5);
        let phi = random_phi(&mut rng, &g);
        let size = rng.gen_range(1..4);
        let f = random_vector(&mut rng, &g, size);
        let member = kernel_k_membership(&g, &phi, &f).unwrap().verdict;
        prop_assert_eq!(member, apply_k(&g, &phi, &f).is_zero());
    }

    #[test]
    fn kernel_h_membership_implies_harmonic(seed in any::<u64>(), rank in 0usize..3, cells in 1usize..4) {
        let mut rng = gen::rng(seed);
        let (g, o) = gen::leveled_graph(&mut rng, rank, cells, 8);
        let size = rng.gen_range(1..4);
        let f = random_vector(&mut rng, &g, size);
        if kernel_h_membership(&g, &o, &f).unwrap().verdict {
            prop_assert!(apply_h(&g, &f).is_zero());
        }
    }

    #[test]
    fn bc2_cell_patterns_lie_in_both_kernels(coeffs in prop::collection::vec(-4i64..5, 1..6)) {
        let text = std::fs::read_to_string(common::crate_dir().join("corpus/bc2_chain.json")).unwrap();
        let (g, o) = load_oriented_graph(&text).unwrap();
        let phi = VertexFunction::new(vec![rat(0), rat(0)], vec![rat(1)]);
        let mut f = FinVector::zero();
        for (n, c) in coeffs.iter().enumerate() {
            f.add_at(Vertex::new(0, vec![n as i64]), gint(*c));
            f.add_at(Vertex::new(1, vec![n as i64]), gint(-*c));
        }
        prop_assert!(kernel_h_membership(&g, &o, &f).unwrap().verdict);
        prop_assert!(apply_h(&g, &f).is_zero());
        prop_assert!(kernel_k_membership(&g, &phi, &f).unwrap().verdict);
    }
}

#[test]
fn corpus_commutator_implications() {
    let cases = [
        ("z_lattice", "z_position"),
        ("z2_lattice", "z2_position"),
        ("bc2_chain", "bc2_position"),
        ("k3", "k3_constant"),
        ("p3", "p3_linear"),
    ];
    for (graph, phi) in cases {
        let dir = common::crate_dir().join("corpus");
        let g = load_graph(&std::fs::read_to_string(dir.join(format!("{graph}.json"))).unwrap()).unwrap();
        let phi = load_vertex_function(&g, &std::fs::read_to_string(dir.join(format!("{phi}.json"))).unwrap())
            .unwrap();
        let semi = check_semi_adapted(&g, &phi).unwrap().verdict;
        let hk = verify_hk_commute(&g, &phi, 4).unwrap().verdict;
        let b = verify_b_equals_k2(&g, &phi, 4).unwrap().verdict;
        if semi {
            assert!(hk, "{graph}");
        }
        if hk {
            assert!(b, "{graph}");
        }
    }
}

#[test]
fn p3_linear_function_does_not_commute() {
    let dir = common::crate_dir().join("corpus");
    let g = load_graph(&std::fs::read_to_string(dir.join("p3.json")).unwrap()).unwrap();
    let phi = VertexFunction::new(vec![rat(0), rat(1), rat(2)], Vec::<Rational>::new());
    assert!(!check_semi_adapted(&g, &phi).unwrap().verdict);
    assert!(!verify_hk_commute(&g, &phi, 4).unwrap().verdict);
}
