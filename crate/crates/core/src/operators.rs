//! Exact local operators on finitely supported vectors: the adjacency
//! operator H, multiplication by Φ, K = i[H, Φ] and A = ½(ΦK + KΦ).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use num_traits::Zero;

use crate::certificate::{Certificate, Witness};
use crate::certify::check_semi_adapted;
use crate::error::{Error, Result};
use crate::graph::{Orientation, PeriodicGraph, Vertex, VertexFunction};
use crate::scalar::{gaussian_to_c64, gint, i_unit, ratio, real, Gaussian, GaussianJson, Rational};

/// A finitely supported vector in ℓ²(X). Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinVector {
    entries: BTreeMap<Vertex, Gaussian>,
}

impl FinVector {
    pub fn zero() -> Self {
        FinVector::default()
    }

    pub fn delta(x: Vertex) -> Self {
        let mut f = FinVector::zero();
        f.add_at(x, gint(1));
        f
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Vertex, Gaussian)>) -> Self {
        let mut f = FinVector::zero();
        for (x, v) in entries {
            f.add_at(x, v);
        }
        f
    }

    pub fn add_at(&mut self, x: Vertex, v: Gaussian) {
        if v.is_zero() {
            return;
        }
        match self.entries.entry(x) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, x: &Vertex) -> Gaussian {
        self.entries.get(x).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vertex> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, &Gaussian)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Gaussian) -> FinVector {
        FinVector::from_entries(self.iter().map(|(x, v)| (x.clone(), v * c)))
    }

    pub fn plus(&self, other: &FinVector) -> FinVector {
        let mut out = self.clone();
        for (x, v) in other.iter() {
            out.add_at(x.clone(), v.clone());
        }
        out
    }

    pub fn minus(&self, other: &FinVector) -> FinVector {
        let mut out = self.clone();
        for (x, v) in other.iter() {
            out.add_at(x.clone(), -v.clone());
        }
        out
    }

    /// ⟨f, g⟩ = Σ conj(f(x)) g(x).
    pub fn inner(&self, other: &FinVector) -> Gaussian {
        self.iter()
            .map(|(x, v)| v.conj() * other.get(x))
            .fold(Gaussian::zero(), |a, b| a + b)
    }

    /// Pointwise multiplication by Φ.
    pub fn mul_phi(&self, phi: &VertexFunction) -> FinVector {
        FinVector::from_entries(self.iter().map(|(x, v)| (x.clone(), v * real(phi.value(x)))))
    }

    pub fn to_json(&self) -> Vec<(Vertex, GaussianJson)> {
        self.iter().map(|(x, v)| (x.clone(), GaussianJson(v.clone()))).collect()
    }
}

/// (Hf)(x) = Σ_{y∼x} f(y).
pub fn apply_h(g: &PeriodicGraph, f: &FinVector) -> FinVector {
    let mut out = FinVector::zero();
    for (y, v) in f.iter() {
        for x in g.neighbors_unchecked(y) {
            out.add_at(x, v.clone());
        }
    }
    out
}

/// (Kf)(x) = i Σ_{y∼x} [Φ(y) − Φ(x)] f(y).
pub fn apply_k(g: &PeriodicGraph, phi: &VertexFunction, f: &FinVector) -> FinVector {
    let mut out = FinVector::zero();
    let i = i_unit();
    for (y, v) in f.iter() {
        let py = phi.value(y);
        for x in g.neighbors_unchecked(y) {
            let diff = &py - phi.value(&x);
            out.add_at(x, &i * real(diff) * v);
        }
    }
    out
}

/// A f = ½(Φ·Kf + K(Φ·f)).
pub fn apply_a(g: &PeriodicGraph, phi: &VertexFunction, f: &FinVector) -> FinVector {
    let half = real(ratio(1, 2));
    apply_k(g, phi, f)
        .mul_phi(phi)
        .plus(&apply_k(g, phi, &f.mul_phi(phi)))
        .scale(&half)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Adjacency,
    Position(VertexFunction),
    Momentum(VertexFunction),
    Conjugate(VertexFunction),
}

/// An operator with finitely supported kernel rows on a periodic graph.
#[derive(Clone, Debug)]
pub struct LocalOperator<'g> {
    graph: &'g PeriodicGraph,
    kind: OperatorKind,
}

impl<'g> LocalOperator<'g> {
    pub fn adjacency(graph: &'g PeriodicGraph) -> Self {
        LocalOperator {
            graph,
            kind: OperatorKind::Adjacency,
        }
    }

    pub fn position(graph: &'g PeriodicGraph, phi: VertexFunction) -> Self {
        LocalOperator {
            graph,
            kind: OperatorKind::Position(phi),
        }
    }

    pub fn momentum(graph: &'g PeriodicGraph, phi: VertexFunction) -> Self {
        LocalOperator {
            graph,
            kind: OperatorKind::Momentum(phi),
        }
    }

    pub fn conjugate(graph: &'g PeriodicGraph, phi: VertexFunction) -> Self {
        LocalOperator {
            graph,
            kind: OperatorKind::Conjugate(phi),
        }
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// Kernel entries vanish beyond this graph distance.
    pub fn radius(&self) -> usize {
        match self.kind {
            OperatorKind::Position(_) => 0,
            _ => 1,
        }
    }

    pub fn is_selfadjoint(&self) -> bool {
        true
    }

    /// Nonzero kernel entries (y, k(x, y)) of row x.
    pub fn row(&self, x: &Vertex) -> Vec<(Vertex, Gaussian)> {
        let g = self.graph;
        match &self.kind {
            OperatorKind::Adjacency => g
                .neighbors_unchecked(x)
                .into_iter()
                .map(|y| (y, gint(1)))
                .collect(),
            OperatorKind::Position(phi) => {
                let v = phi.value(x);
                if v.is_zero() {
                    vec![]
                } else {
                    vec![(x.clone(), real(v))]
                }
            }
            OperatorKind::Momentum(phi) | OperatorKind::Conjugate(phi) => {
                let px = phi.value(x);
                g.neighbors_unchecked(x)
                    .into_iter()
                    .filter_map(|y| {
                        let py = phi.value(&y);
                        let mut k: Rational = &py - &px;
                        if matches!(self.kind, OperatorKind::Conjugate(_)) {
                            k = k * (&px + &py) * ratio(1, 2);
                        }
                        (!k.is_zero()).then(|| (y, Gaussian::new(Rational::zero(), k)))
                    })
                    .collect()
            }
        }
    }

    pub fn kernel(&self, x: &Vertex, y: &Vertex) -> Gaussian {
        self.row(x)
            .into_iter()
            .find(|(z, _)| z == y)
            .map(|(_, v)| v)
            .unwrap_or_else(Gaussian::zero)
    }

    /// Applies the operator through its kernel rows, using k(x,y) = conj k(y,x).
    pub fn apply(&self, f: &FinVector) -> FinVector {
        let mut out = FinVector::zero();
        for (y, v) in f.iter() {
            for (x, k) in self.row(y) {
                out.add_at(x, k.conj() * v);
            }
        }
        out
    }
}

/// Dense matrix of the kernel restricted to `ball` (in the given order).
pub fn truncate(op: &LocalOperator<'_>, ball: &[Vertex]) -> Result<DMatrix<Complex<f64>>> {
    if !op.is_selfadjoint() {
        return Err(Error::Precondition("truncate needs a selfadjoint operator".into()));
    }
    let index: BTreeMap<&Vertex, usize> = ball.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut m = DMatrix::from_element(ball.len(), ball.len(), Complex::new(0.0, 0.0));
    for (i, x) in ball.iter().enumerate() {
        for (y, k) in op.row(x) {
            if let Some(&j) = index.get(&y) {
                m[(i, j)] = gaussian_to_c64(&k);
            }
        }
    }
    Ok(m)
}

fn require_radius(radius: usize, min: usize) -> Result<()> {
    if radius < min {
        return Err(Error::Config(format!("radius {radius} is below the required {min}")));
    }
    Ok(())
}

fn residual_check(
    g: &PeriodicGraph,
    check: &'static str,
    radius: usize,
    residual: impl Fn(&FinVector) -> FinVector,
) -> Result<Certificate> {
    for x in g.representatives() {
        let r = residual(&FinVector::delta(x.clone()));
        let ball = g.ball(&x, radius)?;
        debug_assert!(r.support().all(|v| ball.contains(v)));
        if !r.is_zero() {
            return Ok(Certificate::fail(
                check,
                Witness::Residual {
                    at: x,
                    residual: r.to_json(),
                },
            ));
        }
    }
    Ok(Certificate::pass(check))
}

/// Checks (HK − KH)δ_x = 0 at every cell representative. By locality and
/// translation invariance this gives [H, K] = 0 on all of ℓ²(X).
pub fn verify_hk_commute(g: &PeriodicGraph, phi: &VertexFunction, radius: usize) -> Result<Certificate> {
    phi.compatible_with(g)?;
    require_radius(radius, 2)?;
    residual_check(g, "hk_commute", radius, |d| {
        apply_h(g, &apply_k(g, phi, d)).minus(&apply_k(g, phi, &apply_h(g, d)))
    })
}

/// Checks i(HA − AH)δ_x = K²δ_x at every cell representative.
pub fn verify_b_equals_k2(g: &PeriodicGraph, phi: &VertexFunction, radius: usize) -> Result<Certificate> {
    phi.compatible_with(g)?;
    require_radius(radius, 2)?;
    let i = i_unit();
    residual_check(g, "b_equals_k2", radius, |d| {
        let commutator = apply_h(g, &apply_a(g, phi, d)).minus(&apply_a(g, phi, &apply_h(g, d)));
        commutator.scale(&i).minus(&apply_k(g, phi, &apply_k(g, phi, d)))
    })
}

fn sorted_neighbourhood(g: &PeriodicGraph, f: &FinVector) -> Result<Vec<Vertex>> {
    let support: Vec<Vertex> = f.support().cloned().collect();
    let mut xs = g.ball_around(&support, 1)?;
    xs.sort();
    Ok(xs)
}

fn sum_over(f: &FinVector, ys: &[Vertex]) -> Gaussian {
    ys.iter().map(|y| f.get(y)).fold(Gaussian::zero(), |a, b| a + b)
}

/// Tests Σ_{y<x} f(y) = 0 = Σ_{y>x} f(y) for every x. All father sums are
/// checked before any son sum.
pub fn kernel_h_membership(g: &PeriodicGraph, o: &Orientation, f: &FinVector) -> Result<Certificate> {
    o.require_complete(g)?;
    let xs = sorted_neighbourhood(g, f)?;
    let sums: Vec<(Gaussian, Gaussian)> = xs
        .iter()
        .map(|x| (sum_over(f, &g.fathers(o, x)), sum_over(f, &g.sons(o, x))))
        .collect();
    let bad = (0..xs.len())
        .find(|&k| !sums[k].0.is_zero())
        .or_else(|| (0..xs.len()).find(|&k| !sums[k].1.is_zero()));
    Ok(match bad {
        None => Certificate::pass("kernel_h"),
        Some(k) => Certificate::fail(
            "kernel_h",
            Witness::KernelH {
                x: xs[k].clone(),
                father_sum: GaussianJson(sums[k].0.clone()),
                son_sum: GaussianJson(sums[k].1.clone()),
            },
        ),
    })
}

/// Tests Σ_{y∈N(x)} Φ(y) f(y) = Φ(x) Σ_{y∈N(x)} f(y) for every x.
pub fn kernel_k_membership(g: &PeriodicGraph, phi: &VertexFunction, f: &FinVector) -> Result<Certificate> {
    phi.compatible_with(g)?;
    for x in sorted_neighbourhood(g, f)? {
        let ys = g.neighbors_unchecked(&x);
        let lhs = ys
            .iter()
            .map(|y| real(phi.value(y)) * f.get(y))
            .fold(Gaussian::zero(), |a, b| a + b);
        let rhs = real(phi.value(&x)) * sum_over(f, &ys);
        if lhs != rhs {
            return Ok(Certificate::fail(
                "kernel_k",
                Witness::KernelK {
                    x,
                    lhs: GaussianJson(lhs),
                    rhs: GaussianJson(rhs),
                },
            ));
        }
    }
    Ok(Certificate::pass("kernel_k"))
}

/// Every eigenvector of H on a finite graph must be annihilated by K when Φ
/// is semi-adapted. Eigenvectors are tested one by one.
pub fn virial_check(g: &PeriodicGraph, phi: &VertexFunction, tol: f64) -> Result<Certificate> {
    if !g.is_finite() {
        return Err(Error::Precondition("virial_check needs a finite graph (rank 0)".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let semi = check_semi_adapted(g, phi)?;
    if !semi.verdict {
        return Err(Error::Precondition("virial_check needs a semi-adapted Φ".into()));
    }
    let ball = g.representatives();
    let h = truncate(&LocalOperator::adjacency(g), &ball)?.map(|z| z.re);
    let k = truncate(&LocalOperator::momentum(g, phi.clone()), &ball)?;
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigensolver("symmetric eigensolver did not converge".into()))?;
    let mut worst = 0.0f64;
    for j in 0..ball.len() {
        let v = eig.eigenvectors.column(j).map(|x| Complex::new(x, 0.0));
        let norm = v.norm();
        let k_norm = (&k * &v).norm();
        worst = worst.max(k_norm / norm);
        if k_norm > tol * norm {
            return Ok(Certificate::fail(
                "virial",
                Witness::Eigenpair {
                    index: j,
                    eigenvalue: eig.eigenvalues[j],
                    k_norm,
                    norm,
                },
            ));
        }
    }
    let mut c = Certificate::pass("virial").with_note(format!("max ‖Kf‖/‖f‖ = {worst:e}"));
    c.degenerate = semi.degenerate;
    Ok(c)
}
