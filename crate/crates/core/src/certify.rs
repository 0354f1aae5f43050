//! Admissibility and (semi-)adapted function checks.
//!
//! Conditions quantified over all vertex pairs are evaluated for `x` a cell
//! representative and `y` within distance 2 of it. Farther pairs have no
//! common neighbour, and translation invariance covers the other `x`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::certificate::{Certificate, Witness};
use crate::error::{Error, Result};
use crate::graph::{cell_components, HalfEdge, Orientation, PeriodicGraph, Relation, Vertex, VertexFunction};
use crate::linalg::{nullspace, rref_limited};
use crate::scalar::{rat, Rational, RationalJson};

/// Result of a position-function search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositionFunction {
    /// Cell indices of each connected component of the quotient graph.
    pub components: Vec<Vec<usize>>,
    /// A single affine Φ valid on the whole graph, when the components agree
    /// on a slope.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<VertexFunctionJson>,
    #[serde(skip)]
    pub phi: Option<VertexFunction>,
}

/// Serializable view of a vertex function (offsets in cell order).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexFunctionJson {
    pub offsets: Vec<RationalJson>,
    pub slope: Vec<RationalJson>,
}

impl From<&VertexFunction> for VertexFunctionJson {
    fn from(phi: &VertexFunction) -> Self {
        VertexFunctionJson {
            offsets: phi.offsets.iter().cloned().map(RationalJson).collect(),
            slope: phi.slope.iter().cloned().map(RationalJson).collect(),
        }
    }
}

fn increment(rel: Relation) -> i64 {
    match rel {
        Relation::Son => 1,
        Relation::Father => -1,
    }
}

/// Index of a walk: +1 per step to a son, −1 per step to a father. None if a
/// step is not an edge.
pub fn walk_index(g: &PeriodicGraph, o: &Orientation, walk: &[Vertex]) -> Option<i64> {
    let mut index = 0;
    for pair in walk.windows(2) {
        let (x, y) = (&pair[0], &pair[1]);
        let rel = g
            .oriented_neighbors(o, x)
            .into_iter()
            .find(|(z, _)| z == y)?
            .1?;
        index += increment(rel);
    }
    Some(index)
}

struct Tree {
    phi: Vec<i64>,
    tau: Vec<Vec<i64>>,
    parent: Vec<Option<(usize, HalfEdge)>>,
}

struct Constraint {
    delta: Vec<i64>,
    rhs: i64,
    from: usize,
    half: HalfEdge,
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl Tree {
    /// Instances along the tree path from the root instance to `(c, tau[c])`.
    fn path_from_root(&self, c: usize) -> Vec<Vertex> {
        let mut cells = vec![c];
        let mut cur = c;
        while let Some((p, _)) = &self.parent[cur] {
            cells.push(*p);
            cur = *p;
        }
        cells
            .into_iter()
            .rev()
            .map(|k| Vertex::new(k, self.tau[k].clone()))
            .collect()
    }

    /// Closed-up-to-translation walk for one non-tree edge, from (root, 0)
    /// to (root, delta).
    fn fundamental_walk(&self, c: &Constraint) -> Vec<Vertex> {
        let mut walk = self.path_from_root(c.from);
        let mut back = self.path_from_root(c.half.to);
        back.reverse();
        for v in back {
            walk.push(v.shifted(&c.delta));
        }
        walk
    }
}

/// Searches for Φ with Φ(father) + 1 = Φ(son) on every edge, fixing Φ = 0 at
/// the first cell vertex of each quotient component.
pub fn find_position_function(
    g: &PeriodicGraph,
    o: &Orientation,
) -> Result<Certificate<PositionFunction>> {
    const CHECK: &str = "position_function";
    o.require_complete(g)?;
    let d = g.rank();
    let components = cell_components(g);
    let mut tree = Tree {
        phi: vec![0; g.cell_size()],
        tau: vec![vec![0; d]; g.cell_size()],
        parent: vec![None; g.cell_size()],
    };
    let mut per_component: Vec<Vec<Constraint>> = Vec::new();
    for comp in &components {
        let root = *comp.iter().next().expect("components are nonempty");
        let mut visited = BTreeSet::from([root]);
        let mut used_edges = BTreeSet::new();
        let mut queue = std::collections::VecDeque::from([root]);
        let mut constraints = Vec::new();
        while let Some(c) = queue.pop_front() {
            for h in g.incidence(c) {
                let inc = increment(o.relation(h).expect("orientation is complete"));
                if !visited.contains(&h.to) {
                    visited.insert(h.to);
                    used_edges.insert(h.edge);
                    tree.phi[h.to] = tree.phi[c] + inc;
                    tree.tau[h.to] = add(&tree.tau[c], &h.t);
                    tree.parent[h.to] = Some((c, h.clone()));
                    queue.push_back(h.to);
                } else if used_edges.insert(h.edge) {
                    constraints.push(Constraint {
                        delta: sub(&add(&tree.tau[c], &h.t), &tree.tau[h.to]),
                        rhs: tree.phi[c] + inc - tree.phi[h.to],
                        from: c,
                        half: h.clone(),
                    });
                }
            }
        }
        per_component.push(constraints);
    }

    // An inconsistent component has no position function at all.
    for constraints in &per_component {
        if let Some(walk) = inconsistent_walk(&tree, constraints, d) {
            let index = walk_index(g, o, &walk).expect("witness walk follows edges");
            return Ok(Certificate::fail(CHECK, Witness::Cycle { walk, index }));
        }
    }

    let all: Vec<&Constraint> = per_component.iter().flatten().collect();
    let slope = solve_slope(&all, d);
    let comps: Vec<Vec<usize>> = components.iter().map(|c| c.iter().copied().collect()).collect();
    let Some(slope) = slope else {
        let cert = Certificate::pass(CHECK)
            .with_certified(PositionFunction {
                components: comps,
                function: None,
                phi: None,
            })
            .with_note("quotient components force different slopes; no single affine form");
        return Ok(cert);
    };
    let offsets: Vec<Rational> = (0..g.cell_size())
        .map(|v| {
            let wn: Rational = slope
                .iter()
                .zip(&tree.tau[v])
                .map(|(w, n)| w * rat(*n))
                .fold(Rational::zero(), |a, b| a + b);
            rat(tree.phi[v]) - wn
        })
        .collect();
    let phi = VertexFunction::new(offsets, slope);
    let integral = phi.offsets.iter().chain(&phi.slope).all(Rational::is_integer);
    let mut cert = Certificate::pass(CHECK).with_certified(PositionFunction {
        components: comps,
        function: Some((&phi).into()),
        phi: Some(phi),
    });
    if !integral {
        cert = cert.with_note(
            "slope is not integral: values are integers on the connected component of each representative",
        );
    }
    Ok(cert)
}

/// Rational slope satisfying all constraints (free coordinates set to 0).
fn solve_slope(constraints: &[&Constraint], d: usize) -> Option<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = constraints
        .iter()
        .map(|c| {
            let mut row: Vec<Rational> = c.delta.iter().map(|&x| rat(x)).collect();
            row.push(rat(c.rhs));
            row
        })
        .collect();
    let pivots = rref_limited(&mut rows, d);
    if rows[pivots.len()..].iter().any(|r| !r[d].is_zero()) {
        return None;
    }
    let mut w = vec![Rational::zero(); d];
    for (k, &pc) in pivots.iter().enumerate() {
        w[pc] = rows[k][d].clone();
    }
    Some(w)
}

/// A closed walk of nonzero index built from fundamental cycles, if the
/// constraints are inconsistent.
fn inconsistent_walk(tree: &Tree, constraints: &[Constraint], d: usize) -> Option<Vec<Vertex>> {
    let n = constraints.len();
    // [delta | rhs | identity] tracks which combination produced each row
    let mut rows: Vec<Vec<Rational>> = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut row: Vec<Rational> = c.delta.iter().map(|&x| rat(x)).collect();
            row.push(rat(c.rhs));
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let pivots = rref_limited(&mut rows, d);
    let bad = rows[pivots.len()..].iter().find(|r| !r[d].is_zero())?;
    let coeffs = &bad[d + 1..];
    let lcm = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut walk = vec![Vertex::new(
        tree.path_from_root(constraints[0].from)[0].cell,
        vec![0; d],
    )];
    for (c, k) in constraints.iter().zip(coeffs) {
        let k = (k * Rational::from_integer(lcm.clone())).to_integer().to_i64()?;
        if k == 0 {
            continue;
        }
        let base = tree.fundamental_walk(c);
        let step: Vec<Vertex> = if k > 0 {
            base.clone()
        } else {
            let mut r = base.clone();
            r.reverse();
            let back = r[0].n.clone();
            r.into_iter()
                .map(|v| v.shifted(&back.iter().map(|x| -x).collect::<Vec<_>>()))
                .collect()
        };
        for _ in 0..k.abs() {
            let start = walk.last().expect("walk is nonempty").n.clone();
            walk.extend(step.iter().skip(1).map(|v| v.shifted(&start)));
        }
    }
    Some(walk)
}

fn intersect(a: Vec<Vertex>, b: Vec<Vertex>) -> Vec<Vertex> {
    let b: BTreeSet<Vertex> = b.into_iter().collect();
    let mut out: Vec<Vertex> = a.into_iter().filter(|v| b.contains(v)).collect();
    out.sort();
    out
}

/// Pairs (x, y) with x a representative and y within distance 2, sorted.
fn pair_range(g: &PeriodicGraph) -> Vec<(Vertex, Vertex)> {
    let mut pairs = Vec::new();
    for x in g.representatives() {
        let mut ys = g.ball(&x, 2).expect("representatives are valid");
        ys.sort();
        pairs.extend(ys.into_iter().map(|y| (x.clone(), y)));
    }
    pairs
}

/// Checks #(common fathers) = #(common sons) for every pair.
pub fn check_uniform(g: &PeriodicGraph, o: &Orientation) -> Result<Certificate> {
    o.require_complete(g)?;
    for (x, y) in pair_range(g) {
        let common_fathers = intersect(g.fathers(o, &x), g.fathers(o, &y)).len();
        let common_sons = intersect(g.sons(o, &x), g.sons(o, &y)).len();
        if common_fathers != common_sons {
            return Ok(Certificate::fail(
                "uniform",
                Witness::CountMismatch {
                    x,
                    y,
                    common_fathers,
                    common_sons,
                },
            ));
        }
    }
    Ok(Certificate::pass("uniform"))
}

/// Position function and uniformity together.
pub fn check_admissible(
    g: &PeriodicGraph,
    o: &Orientation,
) -> Result<Certificate<PositionFunction>> {
    let pos = find_position_function(g, o)?;
    if !pos.verdict {
        let mut c = pos;
        c.check = "admissible";
        return Ok(c.with_note("no position function"));
    }
    let uni = check_uniform(g, o)?;
    if !uni.verdict {
        let witness = uni.witness.expect("failed checks carry a witness");
        return Ok(Certificate::fail("admissible", witness).with_note("not uniform"));
    }
    let mut c = pos;
    c.check = "admissible";
    Ok(c)
}

/// Σ_{z ∈ N(x)∩N(y)} [2Φ(z) − Φ(x) − Φ(y)].
pub fn semi_sum(g: &PeriodicGraph, phi: &VertexFunction, x: &Vertex, y: &Vertex) -> Rational {
    let (px, py) = (phi.value(x), phi.value(y));
    intersect(g.neighbors_unchecked(x), g.neighbors_unchecked(y))
        .iter()
        .map(|z| rat(2) * phi.value(z) - &px - &py)
        .fold(Rational::zero(), |a, b| a + b)
}

/// Σ_{z ∈ N(x)∩N(y)} [Φ(z) − Φ(x)][Φ(z) − Φ(y)][2Φ(z) − Φ(x) − Φ(y)].
pub fn full_sum(g: &PeriodicGraph, phi: &VertexFunction, x: &Vertex, y: &Vertex) -> Rational {
    let (px, py) = (phi.value(x), phi.value(y));
    intersect(g.neighbors_unchecked(x), g.neighbors_unchecked(y))
        .iter()
        .map(|z| {
            let pz = phi.value(z);
            (&pz - &px) * (&pz - &py) * (rat(2) * &pz - &px - &py)
        })
        .fold(Rational::zero(), |a, b| a + b)
}

type PairSumFn = fn(&PeriodicGraph, &VertexFunction, &Vertex, &Vertex) -> Rational;

fn adaptedness(
    g: &PeriodicGraph,
    phi: &VertexFunction,
    full: bool,
) -> Result<Certificate<RationalJson>> {
    phi.compatible_with(g)?;
    let check = if full { "adapted" } else { "semi_adapted" };
    let bound = phi.edge_bound(g);
    let pairs = pair_range(g);
    let conditions: &[(&'static str, PairSumFn)] =
        if full {
            &[("semi", semi_sum), ("full", full_sum)]
        } else {
            &[("semi", semi_sum)]
        };
    for (condition, sum) in conditions {
        for (x, y) in &pairs {
            let value = sum(g, phi, x, y);
            if !value.is_zero() {
                let mut c = Certificate::fail(
                    check,
                    Witness::PairSum {
                        x: x.clone(),
                        y: y.clone(),
                        condition,
                        value: RationalJson(value),
                    },
                );
                c.certified = Some(RationalJson(bound));
                return Ok(c);
            }
        }
    }
    let mut c = Certificate::pass(check).with_certified(RationalJson(bound));
    if phi.is_constant() {
        c.degenerate = true;
        c = c.with_note("constant function: K = 0, no spectral information");
    }
    Ok(c)
}

/// Semi-adaptedness; the certified payload is the edge bound c.
pub fn check_semi_adapted(
    g: &PeriodicGraph,
    phi: &VertexFunction,
) -> Result<Certificate<RationalJson>> {
    adaptedness(g, phi, false)
}

/// Adaptedness (semi plus the cubic condition).
pub fn check_adapted(g: &PeriodicGraph, phi: &VertexFunction) -> Result<Certificate<RationalJson>> {
    adaptedness(g, phi, true)
}

fn require_finite(g: &PeriodicGraph, what: &str) -> Result<()> {
    if g.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} needs a finite graph (rank 0)")))
    }
}

/// Basis of all Φ satisfying the semi-adapted equations on a finite graph.
pub fn solve_semi_adapted(g: &PeriodicGraph) -> Result<Vec<VertexFunction>> {
    require_finite(g, "solve_semi_adapted")?;
    let n = g.cell_size();
    let mut rows = Vec::new();
    for x in 0..n {
        for y in x..n {
            let vx = Vertex::new(x, vec![]);
            let vy = Vertex::new(y, vec![]);
            let common = intersect(g.neighbors_unchecked(&vx), g.neighbors_unchecked(&vy));
            if common.is_empty() {
                continue;
            }
            let mut row = vec![Rational::zero(); n];
            for z in &common {
                row[z.cell] += rat(2);
            }
            let k = rat(common.len() as i64);
            row[x] -= &k;
            row[y] -= &k;
            rows.push(row);
        }
    }
    Ok(nullspace(&rows, n)
        .into_iter()
        .map(|v| VertexFunction::new(v, vec![]))
        .collect())
}

/// Keeps the candidates that are adapted.
pub fn filter_adapted(
    g: &PeriodicGraph,
    candidates: &[VertexFunction],
) -> Result<Vec<VertexFunction>> {
    require_finite(g, "filter_adapted")?;
    let mut kept = Vec::new();
    for phi in candidates {
        if check_adapted(g, phi)?.verdict {
            kept.push(phi.clone());
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_graph, load_oriented_graph};
    use crate::scalar::ratio;

    fn directed_z() -> (PeriodicGraph, Orientation) {
        load_oriented_graph(r#"{"rank":1,"cell":["o"],"edges":[["o","o",[1],"son"]]}"#).unwrap()
    }

    fn bc2() -> (PeriodicGraph, Orientation) {
        load_oriented_graph(
            r#"{"rank":1,"cell":["a","b"],"edges":[["a","a",[1],"son"],["a","b",[1],"son"],["b","a",[1],"son"],["b","b",[1],"son"]]}"#,
        )
        .unwrap()
    }

    fn directed_triangle() -> (PeriodicGraph, Orientation) {
        load_oriented_graph(
            r#"{"rank":0,"cell":["v1","v2","v3"],"edges":[["v1","v2",[],"son"],["v2","v3",[],"son"],["v3","v1",[],"son"]]}"#,
        )
        .unwrap()
    }

    fn k3() -> PeriodicGraph {
        directed_triangle().0
    }

    fn p3() -> PeriodicGraph {
        load_graph(r#"{"rank":0,"cell":["v1","v2","v3"],"edges":[["v1","v2",[]],["v2","v3",[]]]}"#)
            .unwrap()
    }

    fn fin(vals: &[i64]) -> VertexFunction {
        VertexFunction::new(vals.iter().map(|&v| rat(v)).collect(), vec![])
    }

    #[test]
    fn directed_z_position_is_identity() {
        let (g, o) = directed_z();
        let c = find_position_function(&g, &o).unwrap();
        assert!(c.verdict);
        let phi = c.certified.unwrap().phi.unwrap();
        assert_eq!(phi.offsets, vec![rat(0)]);
        assert_eq!(phi.slope, vec![rat(1)]);
    }

    #[test]
    fn bc2_position_is_column_index() {
        let (g, o) = bc2();
        let phi = find_position_function(&g, &o).unwrap().certified.unwrap().phi.unwrap();
        assert_eq!(phi.offsets, vec![rat(0), rat(0)]);
        assert_eq!(phi.slope, vec![rat(1)]);
    }

    #[test]
    fn directed_triangle_has_index_three_cycle() {
        let (g, o) = directed_triangle();
        let c = find_position_function(&g, &o).unwrap();
        assert!(!c.verdict);
        match c.witness.unwrap() {
            Witness::Cycle { walk, index } => {
                assert_eq!(walk.first(), walk.last());
                assert_eq!(index.abs(), 3);
                assert_eq!(walk_index(&g, &o, &walk), Some(index));
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn periodic_inconsistency_yields_closed_walk() {
        // (o,n) -> (o,n+1) son but (o,n) -> (o,n+2) father: slopes 1 and -1/2 clash
        let (g, o) = load_oriented_graph(
            r#"{"rank":1,"cell":["o"],"edges":[["o","o",[1],"son"],["o","o",[2],"father"]]}"#,
        )
        .unwrap();
        let c = find_position_function(&g, &o).unwrap();
        assert!(!c.verdict);
        let Some(Witness::Cycle { walk, index }) = c.witness else { panic!() };
        assert_eq!(walk.first(), walk.last());
        assert_ne!(index, 0);
        assert_eq!(walk_index(&g, &o, &walk), Some(index));
    }

    #[test]
    fn even_step_lattice_gets_half_slope() {
        let (g, o) =
            load_oriented_graph(r#"{"rank":1,"cell":["o"],"edges":[["o","o",[2],"son"]]}"#).unwrap();
        let c = find_position_function(&g, &o).unwrap();
        assert!(c.verdict);
        assert_eq!(c.certified.unwrap().phi.unwrap().slope, vec![ratio(1, 2)]);
        assert_eq!(c.notes.len(), 1);
    }

    #[test]
    fn unoriented_edge_is_an_error() {
        let (g, o) = load_oriented_graph(r#"{"rank":1,"cell":["o"],"edges":[["o","o",[1]]]}"#).unwrap();
        assert!(matches!(find_position_function(&g, &o), Err(Error::UnorientedEdge(_))));
        assert!(matches!(check_uniform(&g, &o), Err(Error::UnorientedEdge(_))));
    }

    #[test]
    fn disconnected_quotient_is_handled_per_component() {
        let (g, o) = load_oriented_graph(
            r#"{"rank":1,"cell":["a","b"],"edges":[["a","a",[1],"son"],["b","b",[1],"father"]]}"#,
        )
        .unwrap();
        let c = find_position_function(&g, &o).unwrap();
        assert!(c.verdict);
        let pf = c.certified.unwrap();
        assert_eq!(pf.components, vec![vec![0], vec![1]]);
        assert!(pf.phi.is_none());
    }

    #[test]
    fn uniformity_examples() {
        let (g, o) = directed_z();
        assert!(check_uniform(&g, &o).unwrap().verdict);
        let (g, o) = bc2();
        assert!(check_uniform(&g, &o).unwrap().verdict);
        let (g, o) = load_oriented_graph(
            r#"{"rank":1,"cell":["o"],"edges":[["o","o",[1],"son"],["o","o",[2],"son"]]}"#,
        )
        .unwrap();
        assert!(check_uniform(&g, &o).unwrap().verdict);
    }

    #[test]
    fn non_uniform_graph_reports_counts() {
        // a has two sons per cell (a and b) but only one father (a)
        let (g, o) = load_oriented_graph(
            r#"{"rank":1,"cell":["a","b"],"edges":[["a","a",[1],"son"],["a","b",[1],"son"]]}"#,
        )
        .unwrap();
        let c = check_uniform(&g, &o).unwrap();
        assert!(!c.verdict);
        let Some(Witness::CountMismatch { x, y, common_fathers, common_sons }) = c.witness else {
            panic!()
        };
        assert_ne!(common_fathers, common_sons);
        let f = intersect(g.fathers(&o, &x), g.fathers(&o, &y)).len();
        let s = intersect(g.sons(&o, &x), g.sons(&o, &y)).len();
        assert_eq!((f, s), (common_fathers, common_sons));
    }

    #[test]
    fn admissibility_examples() {
        let (g, o) = directed_z();
        assert!(check_admissible(&g, &o).unwrap().verdict);
        let (g, o) = bc2();
        assert!(check_admissible(&g, &o).unwrap().verdict);
        let (g, o) = directed_triangle();
        assert!(!check_admissible(&g, &o).unwrap().verdict);
    }

    #[test]
    fn semi_adapted_examples() {
        let (g, _) = directed_z();
        let c = check_semi_adapted(&g, &VertexFunction::first_coordinate(&g)).unwrap();
        assert!(c.verdict);
        assert_eq!(c.certified.unwrap().0, rat(1));

        let g = k3();
        let phi = fin(&[0, 0, 1]);
        let c = check_semi_adapted(&g, &phi).unwrap();
        assert!(!c.verdict);
        let Some(Witness::PairSum { x, y, value, .. }) = c.witness else { panic!() };
        assert_eq!(semi_sum(&g, &phi, &x, &y), value.0);
        assert!(!value.0.is_zero());
        // the pair (v1, v2) shares only v3: 2·1 − 0 − 0
        let v1 = Vertex::new(0, vec![]);
        let v2 = Vertex::new(1, vec![]);
        assert_eq!(semi_sum(&g, &phi, &v1, &v2), rat(2));
    }

    #[test]
    fn adapted_examples() {
        let (g, _) = directed_z();
        assert!(check_adapted(&g, &VertexFunction::first_coordinate(&g)).unwrap().verdict);
        let (g, _) = bc2();
        assert!(check_adapted(&g, &VertexFunction::first_coordinate(&g)).unwrap().verdict);
        let c = check_adapted(&g, &VertexFunction::constant(&g, rat(5))).unwrap();
        assert!(c.verdict && c.degenerate);
    }

    #[test]
    fn finite_solver_examples() {
        let basis = solve_semi_adapted(&k3()).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_constant());

        // x = y at an endpoint forces Φ harmonic there, so only constants survive
        let basis = solve_semi_adapted(&p3()).unwrap();
        assert_eq!(basis.len(), 1);
        for phi in &basis {
            assert!(check_semi_adapted(&p3(), phi).unwrap().verdict);
        }
        assert!(!check_semi_adapted(&p3(), &fin(&[0, 1, 2])).unwrap().verdict);

        let k2 = load_graph(r#"{"rank":0,"cell":["v1","v2"],"edges":[["v1","v2",[]]]}"#).unwrap();
        assert_eq!(solve_semi_adapted(&k2).unwrap().len(), 1);

        let two_edges = load_graph(
            r#"{"rank":0,"cell":["a","b","c","d"],"edges":[["a","b",[]],["c","d",[]]]}"#,
        )
        .unwrap();
        assert_eq!(solve_semi_adapted(&two_edges).unwrap().len(), 2);
    }

    #[test]
    fn solver_rejects_periodic_graphs() {
        let (g, _) = directed_z();
        assert!(matches!(solve_semi_adapted(&g), Err(Error::Precondition(_))));
    }

    #[test]
    fn filter_examples() {
        let kept = filter_adapted(&p3(), &[fin(&[1, 1, 1]), fin(&[0, 1, 2])]).unwrap();
        assert_eq!(kept, vec![fin(&[1, 1, 1])]);
        assert_eq!(filter_adapted(&k3(), &[fin(&[2, 2, 2])]).unwrap().len(), 1);
        assert!(filter_adapted(&k3(), &[]).unwrap().is_empty());
    }
}
