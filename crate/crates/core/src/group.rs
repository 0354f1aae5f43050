//! Convolution operators H_μ f = μ ∗ f on X = F × Z^d (F finite, possibly
//! trivial), reduced to Laurent fibers by a partial Fourier transform in
//! the Z^d variable.
//!
//! Convention: μ(f, t) contributes to the coefficient of z^{−t}. The fiber of
//! Φμ is then i times the directional derivative of the fiber of μ along the
//! slope of Φ.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::bloch::{analyze_fiber, dispersive_trace_witness, torus_grid, SpectralReport};
use crate::certificate::{Certificate, GroupElem, Witness};
use crate::error::{Error, Result};
use crate::graph::parse_rational_array;
use crate::laurent::{LaurentMatrix, PolySummary, MAX_DET_SIZE};
use crate::scalar::{gaussian_to_c64, i_unit, parse_rational, rat, real, Gaussian, GaussianJson, Rational, RationalJson};

const MAX_FINITE_ORDER: usize = 128;
const MAX_RANK: usize = 8;
const MAX_TRANSLATION: i64 = 1 << 20;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity (brute force).
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_FINITE_ORDER {
            return Err(Error::InvalidGroup(format!("order {n} outside 1..={MAX_FINITE_ORDER}")));
        }
        if BTreeSet::from_iter(names.iter()).len() != n {
            return Err(Error::InvalidGroup("duplicate element names".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup(format!("table must be {n}x{n} with entries < {n}")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", names[x])))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            names: vec!["e".into()],
            table: vec![vec![0]],
            identity: 0,
            inverse: vec![0],
        }
    }

    /// S₃ = ⟨a, b | a², b², (ab)³⟩ with elements e, a, b, ab, ba, aba.
    pub fn symmetric3() -> Self {
        type Perm = [usize; 3];
        let compose = |p: Perm, q: Perm| -> Perm { [p[q[0]], p[q[1]], p[q[2]]] };
        let e: Perm = [0, 1, 2];
        let a: Perm = [1, 0, 2];
        let b: Perm = [0, 2, 1];
        let ab = compose(a, b);
        let ba = compose(b, a);
        let aba = compose(ab, a);
        let elems = [e, a, b, ab, ba, aba];
        let names = ["e", "a", "b", "ab", "ba", "aba"].map(String::from).to_vec();
        let table = elems
            .iter()
            .map(|&x| {
                elems
                    .iter()
                    .map(|&y| elems.iter().position(|&z| z == compose(x, y)).expect("closed"))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(names, table).expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Conjugacy classes by orbit enumeration, each sorted, ordered by their
    /// smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n)
                .map(|g| self.mul(self.mul(g, x), self.inv(g)))
                .collect();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class.into_iter().collect());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    /// Z^d.
    Lattice,
    /// F × Z^d.
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteGroup {
    kind: GroupKind,
    finite: FiniteGroup,
    rank: usize,
}

impl DiscreteGroup {
    pub fn lattice(rank: usize) -> Self {
        DiscreteGroup {
            kind: GroupKind::Lattice,
            finite: FiniteGroup::trivial(),
            rank,
        }
    }

    pub fn product(finite: FiniteGroup, rank: usize) -> Self {
        DiscreteGroup {
            kind: GroupKind::Product,
            finite,
            rank,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn finite(&self) -> &FiniteGroup {
        &self.finite
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_abelian(&self) -> bool {
        self.finite.is_abelian()
    }

    pub fn elem(&self, f: &str, t: &[i64]) -> Result<GroupElem> {
        let f = self
            .finite
            .index_of(f)
            .ok_or_else(|| Error::UnknownVertex(f.to_string()))?;
        if t.len() != self.rank {
            return Err(Error::RankMismatch {
                edge: "group element".into(),
                got: t.len(),
                rank: self.rank,
            });
        }
        Ok(GroupElem { f, t: t.to_vec() })
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem {
            f: self.finite.identity(),
            t: vec![0; self.rank],
        }
    }

    pub fn mul(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        GroupElem {
            f: self.finite.mul(x.f, y.f),
            t: x.t.iter().zip(&y.t).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self, x: &GroupElem) -> GroupElem {
        GroupElem {
            f: self.finite.inv(x.f),
            t: x.t.iter().map(|a| -a).collect(),
        }
    }

    /// Elements of 𝓑(X) = F × {0}, the compact elements.
    pub fn is_compact_elem(&self, x: &GroupElem) -> bool {
        x.t.iter().all(|&a| a == 0)
    }

    fn to_json(&self) -> Value {
        match self.kind {
            GroupKind::Lattice => serde_json::json!({"kind": "Zd", "d": self.rank}),
            GroupKind::Product => serde_json::json!({
                "kind": "FxZd",
                "d": self.rank,
                "names": self.finite.names,
                "table": self.finite.table,
            }),
        }
    }
}

/// A finitely supported complex measure with Gaussian-rational weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Measure {
    weights: BTreeMap<GroupElem, Gaussian>,
}

impl Measure {
    pub fn zero() -> Self {
        Measure::default()
    }

    pub fn delta(x: GroupElem) -> Self {
        Measure::from_weights([(x, real(rat(1)))])
    }

    pub fn from_weights(weights: impl IntoIterator<Item = (GroupElem, Gaussian)>) -> Self {
        let mut m = Measure::zero();
        for (x, w) in weights {
            m.add_at(x, w);
        }
        m
    }

    pub fn add_at(&mut self, x: GroupElem, w: Gaussian) {
        if w.is_zero() {
            return;
        }
        let slot = self.weights.entry(x.clone()).or_insert_with(Gaussian::zero);
        *slot += w;
        if slot.is_zero() {
            self.weights.remove(&x);
        }
    }

    pub fn get(&self, x: &GroupElem) -> Gaussian {
        self.weights.get(x).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElem, &Gaussian)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElem> {
        self.weights.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn plus(&self, other: &Measure) -> Measure {
        let mut out = self.clone();
        for (x, w) in other.iter() {
            out.add_at(x.clone(), w.clone());
        }
        out
    }

    pub fn scale(&self, c: &Gaussian) -> Measure {
        Measure::from_weights(self.iter().map(|(x, w)| (x.clone(), w * c)))
    }

    /// ‖μ‖ = Σ |μ(x)|.
    pub fn total_variation(&self) -> f64 {
        self.iter().map(|(_, w)| gaussian_to_c64(w).norm()).sum()
    }

    pub fn to_json(&self, g: &DiscreteGroup) -> Value {
        let support: Vec<Value> = self
            .iter()
            .map(|(x, w)| {
                serde_json::json!({
                    "f": g.finite.names[x.f],
                    "t": x.t,
                    "re": w.re.to_string(),
                    "im": w.im.to_string(),
                })
            })
            .collect();
        serde_json::json!({"group": g.to_json(), "support": support})
    }
}

/// A real character Φ(f, t) = w · t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Character {
    #[serde(with = "crate::scalar::rational_vec")]
    pub slope: Vec<Rational>,
}

impl Character {
    pub fn new(slope: Vec<Rational>) -> Self {
        Character { slope }
    }

    pub fn value(&self, x: &GroupElem) -> Rational {
        self.slope
            .iter()
            .zip(&x.t)
            .map(|(w, t)| w * rat(*t))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn is_zero(&self) -> bool {
        self.slope.iter().all(Zero::is_zero)
    }

    fn compatible_with(&self, g: &DiscreteGroup) -> Result<()> {
        if self.slope.len() != g.rank {
            return Err(Error::RankMismatch {
                edge: "character slope".into(),
                got: self.slope.len(),
                rank: g.rank,
            });
        }
        Ok(())
    }
}

fn parse_group(v: &Value) -> Result<DiscreteGroup> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("group: missing \"kind\"".into()))?;
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("group: missing nonnegative integer \"d\"".into()))?;
    let d = usize::try_from(d)
        .ok()
        .filter(|&d| d <= MAX_RANK)
        .ok_or_else(|| Error::Parse(format!("group: rank above {MAX_RANK}")))?;
    match kind {
        "Zd" => Ok(DiscreteGroup::lattice(d)),
        "FxZd" => {
            let names = v
                .get("names")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("group: missing \"names\"".into()))?
                .iter()
                .map(|n| {
                    n.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse("group: names must be strings".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            if names.len() > MAX_FINITE_ORDER {
                return Err(Error::InvalidGroup(format!("order above {MAX_FINITE_ORDER}")));
            }
            let table = v
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("group: missing \"table\"".into()))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Parse("group: table rows must be arrays".into()))?
                        .iter()
                        .map(|e| match e {
                            Value::String(s) => names
                                .iter()
                                .position(|n| n == s)
                                .ok_or_else(|| Error::InvalidGroup(format!("unknown element {s:?}"))),
                            other => other
                                .as_u64()
                                .and_then(|x| usize::try_from(x).ok())
                                .ok_or_else(|| Error::Parse("group: table entries must be indices or names".into())),
                        })
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(DiscreteGroup::product(FiniteGroup::from_table(names, table)?, d))
        }
        other => Err(Error::Parse(format!("group: unknown kind {other:?}"))),
    }
}

fn opt_rational(v: &Value, key: &str) -> Result<Rational> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(Rational::zero()),
        Some(Value::String(s)) => parse_rational(s),
        Some(_) => Err(Error::Parse(format!("measure: \"{key}\" must be a rational string"))),
    }
}

/// Parses a measure document (group description plus weighted support).
pub fn load_measure(document: &str) -> Result<(DiscreteGroup, Measure)> {
    let root: Value =
        serde_json::from_str(document).map_err(|e| Error::Parse(format!("measure JSON: {e}")))?;
    let group = parse_group(
        root.get("group")
            .ok_or_else(|| Error::Parse("measure JSON: missing \"group\"".into()))?,
    )?;
    let entries = root
        .get("support")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("measure JSON: missing \"support\" array".into()))?;
    let mut seen = BTreeSet::new();
    let mut weights = Vec::new();
    for e in entries {
        let f = match e.get("f") {
            None | Some(Value::Null) => group.finite.names[group.finite.identity].clone(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::Parse("measure: \"f\" must be an element name".into())),
        };
        let t = e
            .get("t")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("measure: support entry needs \"t\"".into()))?
            .iter()
            .map(|x| {
                x.as_i64()
                    .filter(|x| x.abs() <= MAX_TRANSLATION)
                    .ok_or_else(|| Error::Parse("measure: \"t\" must hold small integers".into()))
            })
            .collect::<Result<Vec<i64>>>()?;
        let x = group.elem(&f, &t)?;
        if !seen.insert(x.clone()) {
            return Err(Error::Parse(format!("measure: duplicate support point ({f}, {t:?})")));
        }
        weights.push((x, Gaussian::new(opt_rational(e, "re")?, opt_rational(e, "im")?)));
    }
    Ok((group, Measure::from_weights(weights)))
}

/// Parses `{"slope": ["p/q", ...]}`.
pub fn load_character(g: &DiscreteGroup, document: &str) -> Result<Character> {
    let root: Value =
        serde_json::from_str(document).map_err(|e| Error::Parse(format!("character JSON: {e}")))?;
    let slope = parse_rational_array(
        root.get("slope")
            .ok_or_else(|| Error::Parse("character JSON: missing \"slope\"".into()))?,
        "slope",
    )?;
    let c = Character::new(slope);
    c.compatible_with(g)?;
    Ok(c)
}

/// (μ ∗ ν)(x) = Σ_{yz = x} μ(y) ν(z).
pub fn convolve(g: &DiscreteGroup, mu: &Measure, nu: &Measure) -> Measure {
    let mut out = Measure::zero();
    for (y, a) in mu.iter() {
        for (z, b) in nu.iter() {
            out.add_at(g.mul(y, z), a * b);
        }
    }
    out
}

/// μ*(x) = conj(μ(x⁻¹)).
pub fn adjoint_measure(g: &DiscreteGroup, mu: &Measure) -> Measure {
    Measure::from_weights(mu.iter().map(|(x, w)| (g.inv(x), w.conj())))
}

pub fn is_selfadjoint(g: &DiscreteGroup, mu: &Measure) -> bool {
    adjoint_measure(g, mu) == *mu
}

/// Φ^k μ for k ∈ {1, 2, 3}.
pub fn phi_measure(phi: &Character, mu: &Measure, k: u32) -> Result<Measure> {
    if !(1..=3).contains(&k) {
        return Err(Error::Config(format!("character power must be 1, 2 or 3, got {k}")));
    }
    Ok(Measure::from_weights(mu.iter().map(|(x, w)| {
        let v = phi.value(x);
        let mut p = Rational::from_integer(1.into());
        for _ in 0..k {
            p *= &v;
        }
        (x.clone(), w * real(p))
    })))
}

fn require_selfadjoint(g: &DiscreteGroup, mu: &Measure, what: &str) -> Result<()> {
    if is_selfadjoint(g, mu) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} needs μ = μ*")))
    }
}

fn compare(check: &'static str, left: &Measure, right: &Measure) -> Certificate {
    let points: BTreeSet<&GroupElem> = left.support().chain(right.support()).collect();
    for x in points {
        let (a, b) = (left.get(x), right.get(x));
        if a != b {
            return Certificate::fail(
                check,
                Witness::MeasureMismatch {
                    at: x.clone(),
                    left: GaussianJson(a),
                    right: GaussianJson(b),
                },
            );
        }
    }
    Certificate::pass(check)
}

/// Φ ∈ Hom¹_μ: (Φμ) ∗ μ = μ ∗ (Φμ).
pub fn check_hom1(g: &DiscreteGroup, phi: &Character, mu: &Measure) -> Result<Certificate> {
    phi.compatible_with(g)?;
    require_selfadjoint(g, mu, "check_hom1")?;
    let pm = phi_measure(phi, mu, 1)?;
    Ok(compare("hom1", &convolve(g, &pm, mu), &convolve(g, mu, &pm)))
}

/// Φ ∈ Hom²_μ: Hom¹ plus (Φμ) ∗ (Φ²μ) = (Φ²μ) ∗ (Φμ).
pub fn check_hom2(g: &DiscreteGroup, phi: &Character, mu: &Measure) -> Result<Certificate> {
    let h1 = check_hom1(g, phi, mu)?;
    if !h1.verdict {
        let mut c = h1;
        c.check = "hom2";
        return Ok(c.with_note("not in Hom¹"));
    }
    let p1 = phi_measure(phi, mu, 1)?;
    let p2 = phi_measure(phi, mu, 2)?;
    Ok(compare("hom2", &convolve(g, &p1, &p2), &convolve(g, &p2, &p1)))
}

/// Fiber of H_μ: coefficient of z^{−t} at (x, y) is μ(x y⁻¹, t). Hermitian
/// when μ = μ*.
pub fn conv_fiber(g: &DiscreteGroup, mu: &Measure) -> LaurentMatrix {
    let f = &g.finite;
    let mut m = LaurentMatrix::zeros(f.order(), g.rank);
    for (elem, w) in mu.iter() {
        let exp: Vec<i64> = elem.t.iter().map(|a| -a).collect();
        for y in 0..f.order() {
            // x y⁻¹ = elem.f  ⇔  x = elem.f · y
            let x = f.mul(elem.f, y);
            m.get_mut(x, y).add_term(exp.clone(), w.clone());
        }
    }
    m
}

/// Fiber kernel data for one measure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelData {
    pub generic_rank: usize,
    pub kernel_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<PolySummary>,
    /// z-independent kernel vectors.
    pub constant_kernel: Vec<Vec<GaussianJson>>,
}

fn kernel_data(m: &LaurentMatrix) -> Result<KernelData> {
    let generic_rank = m.generic_rank();
    let determinant = if m.size() <= MAX_DET_SIZE {
        Some(PolySummary::from(&m.det()?))
    } else {
        None
    };
    Ok(KernelData {
        generic_rank,
        kernel_dim: m.size() - generic_rank,
        determinant,
        constant_kernel: m
            .constant_kernel()
            .into_iter()
            .map(|v| v.into_iter().map(GaussianJson).collect())
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KSubspace {
    pub hom1: bool,
    pub hom2: bool,
    pub kernel_trivial: bool,
    pub phi_mu_kernel: KernelData,
    pub conclusion: String,
}

/// Decides whether ker(H_{Φμ}) is trivial: it is iff det of the fiber of Φμ
/// is not identically zero (an analytic determinant vanishes only on a null
/// set).
pub fn k_subspace_report(
    g: &DiscreteGroup,
    mu: &Measure,
    phi: &Character,
) -> Result<Certificate<KSubspace>> {
    let h1 = check_hom1(g, phi, mu)?;
    if !h1.verdict {
        return Err(Error::Precondition("k_subspace_report needs Φ ∈ Hom¹_μ".into()));
    }
    let h2 = check_hom2(g, phi, mu)?;
    let fiber = conv_fiber(g, &phi_measure(phi, mu, 1)?);
    let data = kernel_data(&fiber)?;
    let trivial = data.kernel_dim == 0;
    let conclusion = match (trivial, h2.verdict) {
        (true, true) => "ker(H_Φμ) = {0}: H_μ has no eigenvalues and no singular spectrum (purely a.c.)",
        (true, false) => "ker(H_Φμ) = {0}: H_μ has no eigenvalues",
        (false, _) if phi.is_zero() || mu.is_zero() => "Φμ = 0: kernel is everything, no information",
        (false, _) => "ker(H_Φμ) ≠ {0}: point/singular spectrum not excluded by this character",
    };
    let mut c = if trivial {
        Certificate::pass("k_subspace")
    } else {
        Certificate::fail(
            "k_subspace",
            Witness::Note {
                reason: format!("fiber of Φμ has generic kernel dimension {}", data.kernel_dim),
            },
        )
    };
    c.degenerate = phi.is_zero() || mu.is_zero();
    Ok(c.with_certified(KSubspace {
        hom1: true,
        hom2: h2.verdict,
        kernel_trivial: trivial,
        phi_mu_kernel: data,
        conclusion: conclusion.into(),
    }))
}

/// Rank of the stacked 2m × m matrix [A; B], computed as the generic rank
/// of the square block matrix [[A, 0], [B, 0]].
fn stacked_generic_rank(a: &LaurentMatrix, b: &LaurentMatrix) -> usize {
    let m = a.size();
    let mut big = LaurentMatrix::zeros(2 * m, a.nvars());
    for p in 0..m {
        for q in 0..m {
            *big.get_mut(p, q) = a.get(p, q).clone();
            *big.get_mut(m + p, q) = b.get(p, q).clone();
        }
    }
    big.generic_rank()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrecisData {
    pub hom1: bool,
    pub hom2: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_squared_on_support: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_kernel: Option<KernelData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_mu_kernel: Option<KernelData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernels_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
}

/// Hypotheses: Φ adapted to μ and Φ² a single nonzero constant on supp μ.
/// Conclusion checked at the fiber level: ker(H_μ) = ker(H_Φμ).
pub fn corollary_precis_check(
    g: &DiscreteGroup,
    mu: &Measure,
    phi: &Character,
    grid: usize,
    tol: f64,
) -> Result<(Certificate<PrecisData>, Option<SpectralReport>)> {
    const CHECK: &str = "precis";
    require_selfadjoint(g, mu, "corollary_precis_check")?;
    let h1 = check_hom1(g, phi, mu)?;
    let h2 = check_hom2(g, phi, mu)?;
    let mut data = PrecisData {
        hom1: h1.verdict,
        hom2: h2.verdict,
        phi_squared_on_support: None,
        mu_kernel: None,
        phi_mu_kernel: None,
        kernels_equal: None,
        conclusion: None,
    };
    if !h2.verdict {
        let w = h2.witness.expect("failed checks carry a witness");
        return Ok((Certificate::fail(CHECK, w).with_certified(data), None));
    }
    let mut square: Option<Rational> = None;
    for x in mu.support() {
        let v = phi.value(x);
        let v2 = &v * &v;
        let reason = if v2.is_zero() {
            Some("Φ² vanishes on the support")
        } else if square.as_ref().is_some_and(|s| *s != v2) {
            Some("Φ² is not constant on the support")
        } else {
            None
        };
        if let Some(reason) = reason {
            let w = Witness::SupportPoint {
                at: x.clone(),
                reason: reason.into(),
            };
            return Ok((Certificate::fail(CHECK, w).with_certified(data), None));
        }
        square = Some(v2);
    }
    let Some(square) = square else {
        let w = Witness::Note {
            reason: "μ = 0 has empty support".into(),
        };
        return Ok((Certificate::fail(CHECK, w).with_certified(data), None));
    };
    data.phi_squared_on_support = Some(RationalJson(square));

    let fm = conv_fiber(g, mu);
    let fp = conv_fiber(g, &phi_measure(phi, mu, 1)?);
    let km = kernel_data(&fm)?;
    let kp = kernel_data(&fp)?;
    let stacked = stacked_generic_rank(&fm, &fp);
    let equal = km.generic_rank == kp.generic_rank && stacked == km.generic_rank;
    if !equal {
        return Err(Error::TheoremInconsistency(
            "ker(H_μ) and ker(H_Φμ) differ although the hypotheses hold".into(),
        ));
    }
    let report = analyze_fiber(&fm, grid, tol)?;
    if let Some(b) = report.flat_bands.iter().find(|b| !b.eigenvalue.0.is_zero()) {
        return Err(Error::TheoremInconsistency(format!(
            "flat band at {} although only 0 may be an eigenvalue",
            b.eigenvalue.0
        )));
    }
    data.conclusion = Some(if km.kernel_dim == 0 {
        "purely absolutely continuous; ker(H_μ) = {0} = ker(H_Φμ)".into()
    } else {
        format!(
            "absolutely continuous except an eigenvalue at 0; ker(H_μ) = ker(H_Φμ) has fiber dimension {}",
            km.kernel_dim
        )
    });
    data.mu_kernel = Some(km);
    data.phi_mu_kernel = Some(kp);
    data.kernels_equal = Some(true);
    Ok((
        Certificate::pass(CHECK)
            .with_certified(data)
            .with_note("purely a.c., possible eigenvalue only at 0"),
        Some(report),
    ))
}

/// One band function per irreducible representation ρ of F: a central
/// measure acts on the ρ-isotypic component of ℓ²(F) (dimension dim ρ²) as a
/// scalar.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandFamily {
    pub irrep_dimension: usize,
    pub multiplicity: usize,
    pub min: f64,
    pub max: f64,
    pub flat: bool,
    /// Band values at the torus grid points, in grid order.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentreazaData {
    pub conjugacy_classes: Vec<Vec<String>>,
    /// Smallest k with tr(M(z)^k) non-constant: an exact dispersive-band witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dispersive_trace_power: Option<usize>,
    pub hac_nontrivial: bool,
    pub band_families: Vec<BandFamily>,
}

fn central_violation(g: &DiscreteGroup, mu: &Measure) -> Option<GroupElem> {
    let f = &g.finite;
    for (x, w) in mu.iter() {
        for h in 0..f.order() {
            let conj = GroupElem {
                f: f.mul(f.mul(h, x.f), f.inv(h)),
                t: x.t.clone(),
            };
            if mu.get(&conj) != *w {
                return Some(x.clone());
            }
        }
    }
    None
}

/// Orthonormal bases of the isotypic components of ℓ²(F) under left and
/// right translation, as joint eigenspaces of the class-sum convolutions.
pub fn isotypic_components(f: &FiniteGroup) -> Result<Vec<DMatrix<Complex<f64>>>> {
    let n = f.order();
    let classes = f.conjugacy_classes();
    let mut class_of = vec![0; n];
    for (c, members) in classes.iter().enumerate() {
        for &x in members {
            class_of[x] = c;
        }
    }
    // L_c(x, y) = 1 iff x y⁻¹ ∈ class c
    let sums: Vec<DMatrix<Complex<f64>>> = (0..classes.len())
        .map(|c| {
            DMatrix::from_fn(n, n, |x, y| {
                let hit = class_of[f.mul(x, f.inv(y))] == c;
                Complex::new(if hit { 1.0 } else { 0.0 }, 0.0)
            })
        })
        .collect();
    // a generic Hermitian combination separates the joint eigenspaces; the
    // result is accepted only if it has the shape the theory predicts
    for attempt in 0..8u32 {
        let mut r = DMatrix::<Complex<f64>>::zeros(n, n);
        for (c, l) in sums.iter().enumerate() {
            let k = (c + 1) as f64 + f64::from(attempt) * 0.37;
            let a = (k * std::f64::consts::SQRT_2).fract() + 0.5;
            let b = (k * std::f64::consts::E).fract() + 0.5;
            let herm = l + l.adjoint();
            let skew = (l - l.adjoint()) * Complex::new(0.0, 1.0);
            r += herm * Complex::new(a, 0.0) + skew * Complex::new(b, 0.0);
        }
        let eig = SymmetricEigen::try_new(r, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Eigensolver("class-sum eigensolve did not converge".into()))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(c) if (eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()]).abs() < 1e-6 => c.push(i),
                _ => clusters.push(vec![i]),
            }
        }
        let square = |k: usize| {
            let r = (k as f64).sqrt().round() as usize;
            r * r == k
        };
        if clusters.len() == classes.len() && clusters.iter().all(|c| square(c.len())) {
            return Ok(clusters
                .into_iter()
                .map(|c| DMatrix::from_fn(n, c.len(), |p, j| eig.eigenvectors[(p, c[j])]))
                .collect());
        }
    }
    Err(Error::Eigensolver("could not separate the isotypic components".into()))
}

fn band_families(g: &DiscreteGroup, fiber: &LaurentMatrix, grid: usize, tol: f64) -> Result<Vec<BandFamily>> {
    let grid_points = torus_grid(g.rank, grid);
    let mut families = Vec::new();
    for v in isotypic_components(&g.finite)? {
        let dim = v.ncols();
        let values: Vec<f64> = grid_points
            .par_iter()
            .map(|theta| {
                let m = fiber.eval_torus(theta);
                (v.adjoint() * m * &v).trace().re / dim as f64
            })
            .collect();
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        families.push(BandFamily {
            irrep_dimension: (dim as f64).sqrt().round() as usize,
            multiplicity: dim,
            min,
            max,
            flat: max - min <= tol,
            values,
        });
    }
    // deterministic order: by dimension, then by the value at θ = 0
    families.sort_by(|a, b| {
        a.multiplicity
            .cmp(&b.multiplicity)
            .then(b.values[0].total_cmp(&a.values[0]))
    });
    Ok(families)
}

/// Central μ₀ = μ₀* with support leaving 𝓑(X), plus μ₁ = μ₁* supported in
/// 𝓑(X): H_{μ₀+μ₁} must have nonzero a.c. part, exhibited by a dispersive
/// band.
pub fn centreaza_check(
    g: &DiscreteGroup,
    mu0: &Measure,
    mu1: &Measure,
    grid: usize,
    tol: f64,
) -> Result<(Certificate<CentreazaData>, Option<SpectralReport>)> {
    const CHECK: &str = "centreaza";
    let fail = |x: Option<GroupElem>, reason: &str| {
        let w = match x {
            Some(at) => Witness::SupportPoint {
                at,
                reason: reason.into(),
            },
            None => Witness::Note {
                reason: reason.into(),
            },
        };
        Ok((Certificate::fail(CHECK, w), None))
    };
    let adj0 = adjoint_measure(g, mu0);
    if adj0 != *mu0 {
        let at = mu0.support().chain(adj0.support()).find(|x| mu0.get(x) != adj0.get(x)).cloned();
        return fail(at, "μ₀ ≠ μ₀*");
    }
    if let Some(x) = central_violation(g, mu0) {
        return fail(Some(x), "μ₀ is not constant on conjugacy classes (not central)");
    }
    if mu0.support().all(|x| g.is_compact_elem(x)) {
        return fail(None, "supp(μ₀) is included in 𝓑(X) = F × {0}");
    }
    let adj1 = adjoint_measure(g, mu1);
    if adj1 != *mu1 {
        let at = mu1.support().chain(adj1.support()).find(|x| mu1.get(x) != adj1.get(x)).cloned();
        return fail(at, "μ₁ ≠ μ₁*");
    }
    if let Some(x) = mu1.support().find(|x| !g.is_compact_elem(x)) {
        return fail(Some(x.clone()), "supp(μ₁) is not included in 𝓑(X) = F × {0}");
    }
    let fiber = conv_fiber(g, &mu0.plus(mu1));
    let witness = dispersive_trace_witness(&fiber);
    let report = analyze_fiber(&fiber, grid, tol)?;
    if witness.is_none() || !report.hac_nontrivial {
        return Err(Error::TheoremInconsistency(
            "hypotheses hold but no dispersive band was found".into(),
        ));
    }
    let names = g.finite.names();
    let data = CentreazaData {
        conjugacy_classes: g
            .finite
            .conjugacy_classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| names[i].clone()).collect())
            .collect(),
        dispersive_trace_power: witness,
        hac_nontrivial: true,
        band_families: band_families(g, &fiber, grid, tol)?,
    };
    Ok((
        Certificate::pass(CHECK)
            .with_certified(data)
            .with_note("H_ac(H_μ) ≠ {0}"),
        Some(report),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BabelData {
    /// Per basis direction e_j: whether d_{e_j} m₀ is not identically zero.
    pub derivative_nonzero: Vec<bool>,
    pub derivative_monomials: Vec<usize>,
    #[serde(with = "crate::scalar::rational_str")]
    pub shift: Rational,
    pub spectrum_min: f64,
    pub spectrum_max: f64,
    pub conclusion: String,
}

/// Multiplication-operator form on Z^d: the point spectrum of M_{m₀+m₁} lies
/// in ∩_j ker(M_{d_j m₀}), which is trivial iff m₀ is non-constant.
pub fn babel_report(
    g: &DiscreteGroup,
    mu0: &Measure,
    mu1: &Measure,
    grid: usize,
) -> Result<Certificate<BabelData>> {
    const CHECK: &str = "babel";
    if g.finite.order() != 1 {
        return Err(Error::Precondition("babel_report needs X = Z^d".into()));
    }
    for (mu, name) in [(mu0, "μ₀"), (mu1, "μ₁")] {
        if !is_selfadjoint(g, mu) {
            return Ok(Certificate::fail(
                CHECK,
                Witness::Note {
                    reason: format!("{name} ≠ {name}*: its symbol is not real"),
                },
            ));
        }
    }
    if let Some(x) = mu1.support().find(|x| !g.is_compact_elem(x)) {
        return Ok(Certificate::fail(
            CHECK,
            Witness::SupportPoint {
                at: x.clone(),
                reason: "supp(μ₁) is not included in 𝓑(Z^d) = {0}".into(),
            },
        ));
    }
    let shift = mu1.get(&g.identity()).re;
    let symbol = conv_fiber(g, mu0);
    let mut nonzero = Vec::new();
    let mut monomials = Vec::new();
    for j in 0..g.rank {
        let mut w = vec![Rational::zero(); g.rank];
        w[j] = Rational::from_integer(1.into());
        let d = symbol.directional_derivative(&w);
        nonzero.push(!d.is_zero());
        monomials.push(d.get(0, 0).num_terms());
    }
    let total = conv_fiber(g, &mu0.plus(mu1));
    let samples = crate::bloch::band_samples(&total, grid)?;
    let (lo, hi) = samples
        .points
        .iter()
        .flat_map(|p| p.eigenvalues.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let trivial = nonzero.iter().any(|&b| b);
    let conclusion = if trivial {
        format!("purely a.c.: spectrum ≈ [{lo:.6}, {hi:.6}] (μ₁ shifts by {shift})")
    } else {
        "m₀ is constant: no conclusion".into()
    };
    let data = BabelData {
        derivative_nonzero: nonzero,
        derivative_monomials: monomials,
        shift,
        spectrum_min: lo,
        spectrum_max: hi,
        conclusion,
    };
    let c = if trivial {
        Certificate::pass(CHECK)
    } else {
        Certificate::fail(
            CHECK,
            Witness::Note {
                reason: "every derivative symbol vanishes identically".into(),
            },
        )
    };
    Ok(c.with_certified(data))
}

/// Fiber of Φμ as i times the directional derivative of the fiber of μ.
pub fn derivative_fiber(g: &DiscreteGroup, mu: &Measure, phi: &Character) -> LaurentMatrix {
    conv_fiber(g, mu)
        .directional_derivative(&phi.slope)
        .scale(&i_unit())
}

/// Max |λ| over a band sample.
pub fn sampled_spectral_radius(m: &LaurentMatrix, grid: usize) -> Result<f64> {
    Ok(crate::bloch::band_samples(m, grid)?
        .points
        .iter()
        .flat_map(|p| p.eigenvalues.iter().map(|v| v.abs()))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gint, ratio};

    fn z1() -> DiscreteGroup {
        DiscreteGroup::lattice(1)
    }

    fn s3z() -> DiscreteGroup {
        DiscreteGroup::product(FiniteGroup::symmetric3(), 1)
    }

    fn d(g: &DiscreteGroup, f: &str, t: &[i64]) -> GroupElem {
        g.elem(f, t).unwrap()
    }

    fn m(g: &DiscreteGroup, pts: &[(&str, i64, i64)]) -> Measure {
        Measure::from_weights(pts.iter().map(|&(f, t, w)| (d(g, f, &[t]), gint(w))))
    }

    fn class_measure(g: &DiscreteGroup, classes: &[&[&str]], ts: &[i64]) -> Measure {
        let mut pts = vec![];
        for c in classes {
            for f in *c {
                for &t in ts {
                    pts.push((*f, t, 1));
                }
            }
        }
        m(g, &pts)
    }

    #[test]
    fn s3_structure() {
        let s3 = FiniteGroup::symmetric3();
        assert!(!s3.is_abelian());
        let classes = s3.conjugacy_classes();
        let named: Vec<Vec<&str>> = classes
            .iter()
            .map(|c| c.iter().map(|&i| s3.names()[i].as_str()).collect())
            .collect();
        assert_eq!(named, vec![vec!["e"], vec!["a", "b", "aba"], vec!["ab", "ba"]]);
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let names = vec!["e".to_string(), "x".to_string()];
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table(names, vec![vec![0, 1], vec![1, 0]]).is_ok());
        // a 3-element magma with identity and inverses that is not associative
        let n3: Vec<String> = ["e", "p", "q"].map(String::from).to_vec();
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(matches!(FiniteGroup::from_table(n3, t), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn convolution_examples() {
        let g = z1();
        let mu = m(&g, &[("e", 1, 1), ("e", -1, 1)]);
        assert_eq!(convolve(&g, &mu, &mu), m(&g, &[("e", 2, 1), ("e", 0, 2), ("e", -2, 1)]));
        assert_eq!(convolve(&g, &Measure::delta(g.identity()), &mu), mu);

        let g = s3z();
        let a = Measure::delta(d(&g, "a", &[0]));
        let b = Measure::delta(d(&g, "b", &[0]));
        assert_eq!(convolve(&g, &a, &b), Measure::delta(d(&g, "ab", &[0])));
        assert_eq!(convolve(&g, &b, &a), Measure::delta(d(&g, "ba", &[0])));
    }

    #[test]
    fn adjoint_examples() {
        let g = z1();
        assert_eq!(adjoint_measure(&g, &m(&g, &[("e", 1, 1)])), m(&g, &[("e", -1, 1)]));
        let s = m(&g, &[("e", 1, 1), ("e", -1, 1)]);
        assert_eq!(adjoint_measure(&g, &s), s);
        let g = s3z();
        let mu = Measure::from_weights([(d(&g, "a", &[1]), Gaussian::new(rat(1), rat(2)))]);
        assert_eq!(
            adjoint_measure(&g, &mu),
            Measure::from_weights([(d(&g, "a", &[-1]), Gaussian::new(rat(1), rat(-2)))])
        );
    }

    #[test]
    fn phi_measure_examples() {
        let g = z1();
        let mu = m(&g, &[("e", 1, 1), ("e", -1, 1)]);
        let phi = Character::new(vec![rat(1)]);
        assert_eq!(phi_measure(&phi, &mu, 1).unwrap(), m(&g, &[("e", 1, 1), ("e", -1, -1)]));
        assert_eq!(phi_measure(&phi, &mu, 2).unwrap(), mu);
        assert!(phi_measure(&Character::new(vec![rat(0)]), &mu, 1).unwrap().is_zero());
        assert!(phi_measure(&phi, &mu, 4).is_err());
    }

    #[test]
    fn hom_examples() {
        let g = z1();
        let mu = m(&g, &[("e", 1, 1), ("e", -1, 1), ("e", 3, 2), ("e", -3, 2)]);
        let phi = Character::new(vec![ratio(3, 2)]);
        assert!(check_hom1(&g, &phi, &mu).unwrap().verdict);
        assert!(check_hom2(&g, &phi, &mu).unwrap().verdict);
        assert!(check_hom2(&g, &phi, &Measure::zero()).unwrap().verdict);

        let g = s3z();
        let central = class_measure(&g, &[&["a", "b", "aba"]], &[1, -1]);
        assert!(check_hom1(&g, &phi, &central).unwrap().verdict);
        assert!(check_hom2(&g, &phi, &central).unwrap().verdict);

        let not_selfadjoint = m(&g, &[("ab", 1, 1)]);
        assert!(matches!(check_hom1(&g, &phi, &not_selfadjoint), Err(Error::Precondition(_))));
    }

    #[test]
    fn fiber_examples() {
        let g = z1();
        let f = conv_fiber(&g, &m(&g, &[("e", 1, 1), ("e", -1, 1)]));
        assert_eq!(f.get(0, 0).coeff(&[1]), gint(1));
        assert_eq!(f.get(0, 0).coeff(&[-1]), gint(1));
        assert!(f.is_hermitian());

        let g2 = DiscreteGroup::lattice(2);
        let mu = Measure::from_weights(
            [[1, 0], [-1, 0], [0, 1], [0, -1]].map(|t| (GroupElem { f: 0, t: t.to_vec() }, gint(1))),
        );
        let f = conv_fiber(&g2, &mu);
        assert_eq!(f.get(0, 0).num_terms(), 4);
        assert_eq!(f.get(0, 0).coeff(&[0, -1]), gint(1));

        let g = s3z();
        let mu = class_measure(&g, &[&["a", "b", "aba"], &["ab", "ba"]], &[1, -1]);
        let f = conv_fiber(&g, &mu);
        assert!(f.is_hermitian());
        // every off-identity pair (x, y) has x y⁻¹ in E₂ ∪ E₃
        for x in 0..6 {
            for y in 0..6 {
                let expect = if x == y { 0 } else { 1 };
                assert_eq!(f.get(x, y).coeff(&[1]), gint(expect));
                assert_eq!(f.get(x, y).coeff(&[-1]), gint(expect));
            }
        }
    }

    #[test]
    fn k_subspace_examples() {
        let g = z1();
        let phi = Character::new(vec![rat(1)]);
        let c = k_subspace_report(&g, &m(&g, &[("e", 1, 1), ("e", -1, 1)]), &phi).unwrap();
        assert!(c.verdict && c.certified.unwrap().kernel_trivial);
        let c = k_subspace_report(&g, &m(&g, &[("e", 2, 1), ("e", -2, 1), ("e", 0, 1)]), &phi).unwrap();
        assert!(c.verdict);
        let c = k_subspace_report(&g, &m(&g, &[("e", 1, 1), ("e", -1, 1)]), &Character::new(vec![rat(0)]))
            .unwrap();
        assert!(!c.verdict && c.degenerate);
    }

    #[test]
    fn precis_examples() {
        let g = z1();
        let phi = Character::new(vec![rat(1)]);
        let (c, report) =
            corollary_precis_check(&g, &m(&g, &[("e", 1, 1), ("e", -1, 1)]), &phi, 65, 1e-6).unwrap();
        assert!(c.verdict);
        let data = c.certified.unwrap();
        assert_eq!(data.kernels_equal, Some(true));
        assert_eq!(data.mu_kernel.unwrap().kernel_dim, 0);
        assert!(report.unwrap().flat_bands.is_empty());

        let (c, _) =
            corollary_precis_check(&g, &m(&g, &[("e", 1, 1), ("e", 0, 1), ("e", -1, 1)]), &phi, 65, 1e-6)
                .unwrap();
        assert!(!c.verdict);
        assert_eq!(
            c.witness,
            Some(Witness::SupportPoint {
                at: d(&g, "e", &[0]),
                reason: "Φ² vanishes on the support".into()
            })
        );

        let g = s3z();
        let mu = class_measure(&g, &[], &[]).plus(&m(&g, &[("a", 1, 1), ("a", -1, 1), ("b", 1, 1), ("b", -1, 1)]));
        let (c, _) = corollary_precis_check(&g, &mu, &phi, 33, 1e-6).unwrap();
        assert!(c.verdict, "{c:?}");
        let data = c.certified.unwrap();
        assert_eq!(data.kernels_equal, Some(true));
    }

    #[test]
    fn centreaza_examples() {
        let g = s3z();
        let mu0 = class_measure(&g, &[&["a", "b", "aba"], &["ab", "ba"]], &[1, -1]);
        let (c, report) = centreaza_check(&g, &mu0, &Measure::zero(), 65, 1e-6).unwrap();
        assert!(c.verdict);
        let data = c.certified.unwrap();
        assert!(data.dispersive_trace_power.is_some());
        assert!(data.hac_nontrivial);
        let mults: Vec<usize> = data.band_families.iter().map(|f| f.multiplicity).collect();
        assert_eq!(mults, vec![1, 1, 4]);
        // trivial: 10 cos θ; sign and 2-dimensional: −2 cos θ
        let step = std::f64::consts::TAU / 65.0;
        for (k, ((a, b), c)) in data.band_families[0]
            .values
            .iter()
            .zip(&data.band_families[1].values)
            .zip(&data.band_families[2].values)
            .enumerate()
        {
            let cos = (step * k as f64).cos();
            assert!((a - 10.0 * cos).abs() < 1e-8);
            assert!((b + 2.0 * cos).abs() < 1e-8);
            assert!((c + 2.0 * cos).abs() < 1e-8);
        }
        assert!(report.unwrap().flat_bands.is_empty());

        let inside = class_measure(&g, &[&["a", "b", "aba"]], &[0]);
        let (c, _) = centreaza_check(&g, &inside, &Measure::zero(), 9, 1e-6).unwrap();
        assert!(!c.verdict);

        let mu0 = m(&g, &[("e", 1, 1), ("e", -1, 1)]);
        let mu1 = class_measure(&g, &[&["a", "b", "aba"]], &[0]);
        let (c, report) = centreaza_check(&g, &mu0, &mu1, 65, 1e-6).unwrap();
        assert!(c.verdict);
        assert!(report.unwrap().hac_nontrivial);

        let not_central = m(&g, &[("a", 1, 1), ("a", -1, 1)]);
        let (c, _) = centreaza_check(&g, &not_central, &Measure::zero(), 9, 1e-6).unwrap();
        assert!(!c.verdict);
    }

    #[test]
    fn babel_examples() {
        let g = z1();
        let c = babel_report(&g, &m(&g, &[("e", 1, 1), ("e", -1, 1)]), &m(&g, &[("e", 0, 3)]), 65).unwrap();
        assert!(c.verdict);
        let data = c.certified.unwrap();
        assert!((data.spectrum_min - 1.0).abs() < 1e-2 && (data.spectrum_max - 5.0).abs() < 1e-9);

        let c = babel_report(&g, &Measure::zero(), &Measure::zero(), 9).unwrap();
        assert!(!c.verdict);

        let g2 = DiscreteGroup::lattice(2);
        let mu0 = Measure::from_weights([[1, 0], [-1, 0]].map(|t| (GroupElem { f: 0, t: t.to_vec() }, gint(1))));
        let c = babel_report(&g2, &mu0, &Measure::zero(), 9).unwrap();
        assert!(c.verdict);
        assert_eq!(c.certified.unwrap().derivative_nonzero, vec![true, false]);
    }

    #[test]
    fn measure_json_round_trip() {
        let g = s3z();
        let mu = Measure::from_weights([(d(&g, "ab", &[2]), Gaussian::new(ratio(1, 3), rat(-1)))]);
        let text = mu.to_json(&g).to_string();
        let (g2, mu2) = load_measure(&text).unwrap();
        assert_eq!(g, g2);
        assert_eq!(mu, mu2);
    }

    #[test]
    fn malformed_measures_are_rejected() {
        for doc in [
            "{}",
            r#"{"group":{"kind":"Zd","d":1},"support":[{"t":[1,2],"re":"1"}]}"#,
            r#"{"group":{"kind":"Q","d":1},"support":[]}"#,
            r#"{"group":{"kind":"Zd","d":1},"support":[{"t":[1],"re":"1/0"}]}"#,
            r#"{"group":{"kind":"Zd","d":1},"support":[{"t":[1]},{"t":[1]}]}"#,
            r#"{"group":{"kind":"FxZd","d":0,"names":["e","x"],"table":[[0,1],[1,1]]},"support":[]}"#,
        ] {
            assert!(load_measure(doc).is_err(), "{doc}");
        }
    }
}
