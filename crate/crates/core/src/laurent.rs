//! Laurent polynomials in d torus variables with Gaussian-rational
//! coefficients, and square matrices of them (Bloch fibers).
//!
//! `z^t` evaluates to `exp(i θ·t)` on the torus.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank};
use crate::scalar::{gaussian_to_c64, i_unit, rat, real, Gaussian, GaussianJson, Rational};

/// Largest matrix size for the exact permutation-expansion determinant.
pub const MAX_DET_SIZE: usize = 16;

/// Terms as (exponent, coefficient) pairs in exponent order.
pub type PolyJson = Vec<(Vec<i64>, GaussianJson)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Gaussian>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Gaussian) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Gaussian::one())
    }

    pub fn monomial(exp: Vec<i64>, c: Gaussian) -> Self {
        let mut p = LaurentPoly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: Gaussian) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp.clone()).or_insert_with(Gaussian::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Gaussian)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[i64]) -> Gaussian {
        self.terms.get(exp).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no monomial depends on the variables in `vars`.
    pub fn is_constant_in(&self, vars: std::ops::Range<usize>) -> bool {
        self.terms
            .keys()
            .all(|e| e[vars.clone()].iter().all(|&x| x == 0))
    }

    pub fn is_constant(&self) -> bool {
        self.is_constant_in(0..self.nvars)
    }

    /// Largest |exponent| of any variable.
    pub fn max_degree(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Gaussian) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// p*(z) = conj(p(z)) on the torus: coefficient at t becomes conj of the
    /// coefficient at −t.
    pub fn star(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.iter().map(|x| -x).collect(), v.conj());
        }
        out
    }

    /// d/ds p(θ + s w) at s = 0: each z^e picks up a factor i (w·e).
    pub fn directional_derivative(&self, w: &[Rational]) -> LaurentPoly {
        let i = i_unit();
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            let dot: Rational = e
                .iter()
                .zip(w)
                .map(|(a, b)| rat(*a) * b)
                .fold(Rational::zero(), |a, b| a + b);
            out.add_term(e.clone(), &i * real(dot) * v);
        }
        out
    }

    /// Appends `extra` variables that do not occur.
    pub fn extend_vars(&self, extra: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars + extra);
        for (e, v) in &self.terms {
            let mut e2 = e.clone();
            e2.extend(std::iter::repeat_n(0, extra));
            out.add_term(e2, v.clone());
        }
        out
    }

    pub fn eval_torus(&self, theta: &[f64]) -> Complex<f64> {
        self.terms
            .iter()
            .map(|(e, v)| {
                let phase: f64 = e.iter().zip(theta).map(|(a, b)| *a as f64 * b).sum();
                gaussian_to_c64(v) * Complex::from_polar(1.0, phase)
            })
            .sum()
    }

    /// Exact value at a point of the unit circle in each variable.
    pub fn eval_exact(&self, point: &UnitPoint) -> Gaussian {
        self.terms
            .iter()
            .map(|(e, v)| {
                e.iter()
                    .enumerate()
                    .fold(v.clone(), |acc, (k, &p)| acc * point.power(k, p))
            })
            .fold(Gaussian::zero(), |a, b| a + b)
    }

    pub fn to_json(&self) -> PolyJson {
        self.terms
            .iter()
            .map(|(e, v)| (e.clone(), GaussianJson(v.clone())))
            .collect()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), -v.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Gaussian::one())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    // exponents add under multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &rhs.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, va * vb);
            }
        }
        out
    }
}

/// A point with |z_k| = 1 and Gaussian-rational coordinates, with cached
/// powers. Since |z| = 1, z^{-1} = conj(z).
#[derive(Clone, Debug)]
pub struct UnitPoint {
    coords: Vec<Gaussian>,
    cache: std::cell::RefCell<HashMap<(usize, i64), Gaussian>>,
}

impl UnitPoint {
    pub fn new(coords: Vec<Gaussian>) -> Self {
        debug_assert!(coords
            .iter()
            .all(|z| (z * z.conj()) == Gaussian::one()));
        UnitPoint {
            coords,
            cache: Default::default(),
        }
    }

    pub fn coords(&self) -> &[Gaussian] {
        &self.coords
    }

    fn power(&self, var: usize, p: i64) -> Gaussian {
        if p == 0 {
            return Gaussian::one();
        }
        if let Some(v) = self.cache.borrow().get(&(var, p)) {
            return v.clone();
        }
        let base = if p > 0 {
            self.coords[var].clone()
        } else {
            self.coords[var].conj()
        };
        let mut acc = Gaussian::one();
        for _ in 0..p.abs() {
            acc *= &base;
        }
        self.cache.borrow_mut().insert((var, p), acc.clone());
        acc
    }
}

/// The rational unit-circle point ((1 − s²) + 2s i) / (1 + s²). Distinct s
/// give distinct points.
pub fn circle_point(s: i64) -> Gaussian {
    let s2 = rat(s * s);
    let den = rat(1) + &s2;
    Gaussian::new((rat(1) - &s2) / &den, rat(2 * s) / den)
}

/// Parameters 0, 1, −1, 2, −2, ... for `count` distinct circle points.
fn circle_params(count: usize) -> Vec<i64> {
    (0..count as i64)
        .map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    size: usize,
    nvars: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(size: usize, nvars: usize) -> Self {
        LaurentMatrix {
            size,
            nvars,
            entries: vec![LaurentPoly::zero(nvars); size * size],
        }
    }

    pub fn identity(size: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(size, nvars);
        for p in 0..size {
            m.entries[p * size + p] = LaurentPoly::one(nvars);
        }
        m
    }

    /// Constant matrix from exact entries.
    pub fn constant(rows: &[Vec<Gaussian>]) -> Self {
        let size = rows.len();
        let mut m = Self::zeros(size, 0);
        for (p, row) in rows.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                m.entries[p * size + q] = LaurentPoly::constant(0, v.clone());
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, p: usize, q: usize) -> &LaurentPoly {
        &self.entries[p * self.size + q]
    }

    pub fn get_mut(&mut self, p: usize, q: usize) -> &mut LaurentPoly {
        &mut self.entries[p * self.size + q]
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> LaurentMatrix {
        LaurentMatrix {
            size: self.size,
            nvars: self.nvars,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Gaussian) -> LaurentMatrix {
        self.map(|p| p.scale(c))
    }

    /// Hermitian adjoint on the torus: entry (p,q) becomes star of (q,p).
    pub fn adjoint(&self) -> LaurentMatrix {
        let mut out = Self::zeros(self.size, self.nvars);
        for p in 0..self.size {
            for q in 0..self.size {
                *out.get_mut(p, q) = self.get(q, p).star();
            }
        }
        out
    }

    /// Coefficient criterion: (p,q) at t equals conj of (q,p) at −t.
    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_constant)
    }

    pub fn max_degree(&self) -> i64 {
        self.entries.iter().map(LaurentPoly::max_degree).max().unwrap_or(0)
    }

    /// M − λ I.
    pub fn shifted(&self, lambda: &Gaussian) -> LaurentMatrix {
        let mut out = self.clone();
        let c = LaurentPoly::constant(self.nvars, lambda.clone());
        for p in 0..self.size {
            let e = out.get(p, p) - &c;
            *out.get_mut(p, p) = e;
        }
        out
    }

    pub fn directional_derivative(&self, w: &[Rational]) -> LaurentMatrix {
        self.map(|p| p.directional_derivative(w))
    }

    pub fn eval_torus(&self, theta: &[f64]) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.size, self.size, |p, q| self.get(p, q).eval_torus(theta))
    }

    pub fn eval_exact(&self, point: &UnitPoint) -> Vec<Vec<Gaussian>> {
        (0..self.size)
            .map(|p| (0..self.size).map(|q| self.get(p, q).eval_exact(point)).collect())
            .collect()
    }

    pub fn trace(&self) -> LaurentPoly {
        (0..self.size).fold(LaurentPoly::zero(self.nvars), |acc, p| &acc + self.get(p, p))
    }

    /// Coefficient matrices C_t with M(z) = Σ_t C_t z^t.
    pub fn coefficient_matrices(&self) -> BTreeMap<Vec<i64>, Vec<Vec<Gaussian>>> {
        let mut out: BTreeMap<Vec<i64>, Vec<Vec<Gaussian>>> = BTreeMap::new();
        for p in 0..self.size {
            for q in 0..self.size {
                for (e, v) in self.get(p, q).terms() {
                    out.entry(e.clone())
                        .or_insert_with(|| vec![vec![Gaussian::zero(); self.size]; self.size])[p][q] =
                        v.clone();
                }
            }
        }
        out
    }

    /// Basis of vectors v, independent of z, with M(z) v = 0 identically.
    pub fn constant_kernel(&self) -> Vec<Vec<Gaussian>> {
        let rows: Vec<Vec<Gaussian>> = self.coefficient_matrices().into_values().flatten().collect();
        nullspace(&rows, self.size)
    }

    /// Determinant by signed permutation expansion over column subsets
    /// (division free). Fails above [`MAX_DET_SIZE`].
    pub fn det(&self) -> Result<LaurentPoly> {
        if self.size > MAX_DET_SIZE {
            return Err(Error::Precondition(format!(
                "exact determinant limited to size {MAX_DET_SIZE}, got {}",
                self.size
            )));
        }
        let mut layer: HashMap<u32, LaurentPoly> = HashMap::from([(0u32, LaurentPoly::one(self.nvars))]);
        for r in 0..self.size {
            let mut next: HashMap<u32, LaurentPoly> = HashMap::new();
            let mut keys: Vec<u32> = layer.keys().copied().collect();
            keys.sort_unstable();
            for mask in keys {
                let val = &layer[&mask];
                for c in 0..self.size {
                    if mask & (1 << c) != 0 || self.get(r, c).is_zero() {
                        continue;
                    }
                    let mut term = val * self.get(r, c);
                    if (mask >> (c + 1)).count_ones() % 2 == 1 {
                        term = -&term;
                    }
                    let slot = next
                        .entry(mask | (1 << c))
                        .or_insert_with(|| LaurentPoly::zero(self.nvars));
                    *slot = &*slot + &term;
                }
            }
            next.retain(|_, v| !v.is_zero());
            layer = next;
        }
        let full = if self.size == 32 { u32::MAX } else { (1u32 << self.size) - 1 };
        Ok(layer.remove(&full).unwrap_or_else(|| LaurentPoly::zero(self.nvars)))
    }

    /// Rational unit-circle grid on which the maximal rank equals the
    /// generic rank: per variable, 2·size·D + 1 points, D the largest
    /// |exponent|. A nonzero minor times a monomial is a polynomial of degree
    /// at most 2·size·D in each variable, so it cannot vanish on the whole
    /// product grid.
    pub fn generic_points(&self) -> Vec<UnitPoint> {
        let per_var = if self.nvars == 0 || self.is_constant() {
            1
        } else {
            2 * self.size * self.max_degree() as usize + 1
        };
        let params = circle_params(per_var);
        let mut points = vec![Vec::<Gaussian>::new()];
        for _ in 0..self.nvars {
            points = points
                .into_iter()
                .flat_map(|p| {
                    params.iter().map(move |&s| {
                        let mut q = p.clone();
                        q.push(circle_point(s));
                        q
                    })
                })
                .collect();
        }
        points.into_iter().map(UnitPoint::new).collect()
    }

    /// Rank of M(z) over the field of rational functions in z.
    pub fn generic_rank(&self) -> usize {
        let mut best = 0;
        for point in self.generic_points() {
            best = best.max(rank(&self.eval_exact(&point)));
            if best == self.size {
                break;
            }
        }
        best
    }

    /// M with λ appended as an extra variable and subtracted on the diagonal;
    /// its determinant is the characteristic polynomial det(M − λI).
    pub fn characteristic_matrix(&self) -> LaurentMatrix {
        let mut out = self.map(|p| p.extend_vars(1));
        out.nvars += 1;
        let mut lam = vec![0; self.nvars + 1];
        lam[self.nvars] = 1;
        let l = LaurentPoly::monomial(lam, Gaussian::one());
        for p in 0..self.size {
            let e = out.get(p, p) - &l;
            *out.get_mut(p, p) = e;
        }
        out
    }

    pub fn to_json(&self) -> Vec<Vec<PolyJson>> {
        (0..self.size)
            .map(|p| (0..self.size).map(|q| self.get(p, q).to_json()).collect())
            .collect()
    }
}

impl Add for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.size, rhs.size);
        LaurentMatrix {
            size: self.size,
            nvars: self.nvars,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.size, rhs.size);
        LaurentMatrix {
            size: self.size,
            nvars: self.nvars,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.size, rhs.size);
        let mut out = LaurentMatrix::zeros(self.size, self.nvars);
        for p in 0..self.size {
            for k in 0..self.size {
                let a = self.get(p, k);
                if a.is_zero() {
                    continue;
                }
                for q in 0..self.size {
                    let b = rhs.get(k, q);
                    if b.is_zero() {
                        continue;
                    }
                    let e = out.get(p, q) + &(a * b);
                    *out.get_mut(p, q) = e;
                }
            }
        }
        out
    }
}

/// Serializable summary of an exact polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolySummary {
    pub identically_zero: bool,
    pub monomials: usize,
}

impl From<&LaurentPoly> for PolySummary {
    fn from(p: &LaurentPoly) -> Self {
        PolySummary {
            identically_zero: p.is_zero(),
            monomials: p.num_terms(),
        }
    }
}
