//! Bloch fiber analysis: fiber matrices of periodic graphs, band sampling,
//! exact flat-band certification and spectral classification.
//!
//! A band function of a Laurent-matrix fiber is real analytic, so it is
//! either constant (a flat band: infinitely degenerate eigenvalue) or
//! contributes absolutely continuous spectrum. Flat bands are certified
//! exactly; non-flat band ranges are sampled and flagged as approximations.

use nalgebra::SymmetricEigen;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::Certificate;
use crate::certify::{check_adapted, check_admissible, check_semi_adapted};
use crate::error::{Error, Result};
use crate::graph::{Orientation, PeriodicGraph, Vertex, VertexFunction};
use crate::laurent::{LaurentMatrix, LaurentPoly, PolySummary, MAX_DET_SIZE};
use crate::operators::{kernel_h_membership, kernel_k_membership, FinVector};
use crate::scalar::{gint, nearest_rational, real, to_f64, Gaussian, GaussianJson, Rational, RationalJson};

pub const DEFAULT_GRID: usize = 257;
pub const DEFAULT_SCREEN_TOL: f64 = 1e-6;
/// Largest denominator tried when rounding a screened flat band.
pub const MAX_CANDIDATE_DENOMINATOR: i64 = 64;

/// Fiber H(z): entry (p, q) is Σ z^t over edges (p, n) ~ (q, n + t).
pub fn fiber_matrix(g: &PeriodicGraph) -> LaurentMatrix {
    let mut m = LaurentMatrix::zeros(g.cell_size(), g.rank());
    for p in 0..g.cell_size() {
        for h in g.incidence(p) {
            m.get_mut(p, h.to).add_term(h.t.clone(), gint(1));
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandPoint {
    pub theta: Vec<f64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandSamples {
    pub grid: usize,
    pub points: Vec<BandPoint>,
}

/// Torus points θ = 2πk/grid, k ∈ {0..grid−1}^d, in lexicographic order.
pub fn torus_grid(d: usize, grid: usize) -> Vec<Vec<f64>> {
    let step = std::f64::consts::TAU / grid as f64;
    let mut pts = vec![Vec::new()];
    for _ in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (0..grid).map(move |k| {
                    let mut q = p.clone();
                    q.push(step * k as f64);
                    q
                })
            })
            .collect();
    }
    pts
}

/// Sorted eigenvalues of a Hermitian fiber at θ.
pub fn hermitian_eigenvalues(m: &LaurentMatrix, theta: &[f64]) -> Result<Vec<f64>> {
    let a = m.eval_torus(theta);
    let eig = SymmetricEigen::try_new(a, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigensolver(format!("no convergence at θ = {theta:?}")))?;
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenvalues of M(θ) over the uniform torus grid.
pub fn band_samples(m: &LaurentMatrix, grid: usize) -> Result<BandSamples> {
    if grid == 0 {
        return Err(Error::Config("grid must be at least 1".into()));
    }
    let points = torus_grid(m.nvars(), grid)
        .into_par_iter()
        .map(|theta| {
            let eigenvalues = hermitian_eigenvalues(m, &theta)?;
            Ok(BandPoint { theta, eigenvalues })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandSamples { grid, points })
}

fn nearest(values: &[f64], target: f64) -> f64 {
    values
        .iter()
        .copied()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .unwrap_or(f64::NAN)
}

fn screen(samples: &BandSamples, tol: f64) -> Vec<Rational> {
    let Some(first) = samples.points.first() else {
        return vec![];
    };
    let mut out: Vec<Rational> = Vec::new();
    for &seed in &first.eigenvalues {
        // follow the eigenvalue nearest to the seed; its spread is the variation
        let (lo, hi) = samples
            .points
            .iter()
            .map(|p| nearest(&p.eigenvalues, seed))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi - lo > tol {
            continue;
        }
        let centre = 0.5 * (lo + hi);
        let q = nearest_rational(centre, MAX_CANDIDATE_DENOMINATOR);
        if (to_f64(&q) - centre).abs() <= tol && !out.contains(&q) {
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Screens for eigenvalues that stay constant over the grid and rounds them
/// to rationals with small denominators. Certification is separate.
pub fn flat_band_candidates(m: &LaurentMatrix, grid: usize, tol: f64) -> Result<Vec<Rational>> {
    Ok(screen(&band_samples(m, grid)?, tol))
}

/// Exact data behind a flat-band verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatBandCert {
    pub eigenvalue: RationalJson,
    /// m − generic rank of M(z) − λ.
    pub multiplicity: usize,
    /// det(M − λI) as an exact Laurent polynomial, when the size allows it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<PolySummary>,
    pub generic_rank: usize,
}

/// λ is a flat band iff det(M(z) − λ) vanishes identically.
pub fn certify_flat_band(m: &LaurentMatrix, lambda: &Rational) -> Result<Certificate<FlatBandCert>> {
    let shifted = m.shifted(&real(lambda.clone()));
    let generic_rank = shifted.generic_rank();
    let determinant = if m.size() <= MAX_DET_SIZE {
        Some(shifted.det()?)
    } else {
        None
    };
    let rank_deficient = generic_rank < m.size();
    if let Some(det) = &determinant {
        if det.is_zero() != rank_deficient {
            return Err(Error::Internal(format!(
                "determinant and generic rank disagree at λ = {lambda}"
            )));
        }
    }
    let cert = FlatBandCert {
        eigenvalue: RationalJson(lambda.clone()),
        multiplicity: m.size() - generic_rank,
        determinant: determinant.as_ref().map(PolySummary::from),
        generic_rank,
    };
    let c = if rank_deficient {
        Certificate::pass("flat_band")
    } else {
        Certificate::fail(
            "flat_band",
            crate::certificate::Witness::Note {
                reason: format!("det(M − {lambda}·I) is not identically zero"),
            },
        )
    };
    Ok(c.with_certified(cert))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatBand {
    pub eigenvalue: RationalJson,
    pub multiplicity: usize,
    pub certificate: Certificate<FlatBandCert>,
    /// z-independent kernel vectors of M − λ, i.e. eigenvectors supported on
    /// a single cell translate.
    pub compact_patterns: Vec<Vec<GaussianJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandRange {
    pub min: f64,
    pub max: f64,
    /// Ranges come from grid sampling, not exact extrema.
    pub sampled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremCrossCheck {
    pub hypothesis: &'static str,
    pub holds: bool,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub cell_size: usize,
    pub rank: usize,
    pub grid: usize,
    pub tol: f64,
    pub flat_bands: Vec<FlatBand>,
    pub band_ranges: Vec<BandRange>,
    /// Rank 0: the spectrum is the eigenvalue list of a finite matrix.
    pub pure_point: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub point_spectrum: Vec<f64>,
    /// At least one non-flat band, hence nonzero absolutely continuous part.
    pub hac_nontrivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semi_adapted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adapted: Option<bool>,
    pub cross_checks: Vec<TheoremCrossCheck>,
    #[serde(skip)]
    pub samples: Option<BandSamples>,
}

/// Removes, at one grid point, the eigenvalues accounted for by flat bands.
fn dispersive_part(ev: &[f64], flat: &[(f64, usize)]) -> Vec<f64> {
    let mut rest = ev.to_vec();
    for &(lambda, mult) in flat {
        for _ in 0..mult {
            if let Some(k) = (0..rest.len())
                .min_by(|&a, &b| (rest[a] - lambda).abs().total_cmp(&(rest[b] - lambda).abs()))
            {
                rest.remove(k);
            }
        }
    }
    rest
}

/// Flat bands, sampled band ranges and the a.c./point split for a fiber.
pub fn analyze_fiber(m: &LaurentMatrix, grid: usize, tol: f64) -> Result<SpectralReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let samples = band_samples(m, grid)?;
    let mut flat_bands = Vec::new();
    for lambda in screen(&samples, tol) {
        let cert = certify_flat_band(m, &lambda)?;
        if !cert.verdict {
            continue;
        }
        let multiplicity = cert.certified.as_ref().map_or(0, |c| c.multiplicity);
        let patterns = m
            .shifted(&real(lambda.clone()))
            .constant_kernel()
            .into_iter()
            .map(|v| v.into_iter().map(GaussianJson).collect())
            .collect();
        flat_bands.push(FlatBand {
            eigenvalue: RationalJson(lambda),
            multiplicity,
            certificate: cert,
            compact_patterns: patterns,
        });
    }
    let flat: Vec<(f64, usize)> = flat_bands
        .iter()
        .map(|b| (to_f64(&b.eigenvalue.0), b.multiplicity))
        .collect();
    let flat_total: usize = flat.iter().map(|f| f.1).sum();
    let pure_point = m.nvars() == 0;
    let mut band_ranges = Vec::new();
    let mut point_spectrum = Vec::new();
    if pure_point {
        point_spectrum = samples.points[0].eigenvalues.clone();
    } else {
        let rest: Vec<Vec<f64>> = samples
            .points
            .iter()
            .map(|p| dispersive_part(&p.eigenvalues, &flat))
            .collect();
        for j in 0..m.size().saturating_sub(flat_total) {
            let (min, max) = rest
                .iter()
                .map(|r| r[j])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            band_ranges.push(BandRange { min, max, sampled: true });
        }
    }
    Ok(SpectralReport {
        cell_size: m.size(),
        rank: m.nvars(),
        grid,
        tol,
        flat_bands,
        hac_nontrivial: !pure_point && flat_total < m.size(),
        band_ranges,
        pure_point,
        point_spectrum,
        admissible: None,
        semi_adapted: None,
        adapted: None,
        cross_checks: Vec::new(),
        samples: Some(samples),
    })
}

/// The finitely supported vector f(p, 0) = v_p.
pub fn cell_pattern(g: &PeriodicGraph, v: &[Gaussian]) -> FinVector {
    FinVector::from_entries(
        v.iter()
            .enumerate()
            .map(|(p, c)| (Vertex::new(p, vec![0; g.rank()]), c.clone())),
    )
}

fn patterns(g: &PeriodicGraph, band: &FlatBand) -> Vec<FinVector> {
    band.compact_patterns
        .iter()
        .map(|v| {
            let raw: Vec<Gaussian> = v.iter().map(|c| c.0.clone()).collect();
            cell_pattern(g, &raw)
        })
        .collect()
}

/// Fiber analysis plus the admissibility and ker(K) cross-checks. Any
/// violation of the proved statements is reported as a
/// THEOREM-INCONSISTENCY error.
pub fn classify_spectrum(
    g: &PeriodicGraph,
    o: Option<&Orientation>,
    phi: Option<&VertexFunction>,
    grid: usize,
    tol: f64,
) -> Result<SpectralReport> {
    let m = fiber_matrix(g);
    let mut report = analyze_fiber(&m, grid, tol)?;

    if let Some(o) = o {
        let adm = check_admissible(g, o)?;
        report.admissible = Some(adm.verdict);
        if adm.verdict {
            if let Some(b) = report.flat_bands.iter().find(|b| !b.eigenvalue.0.is_zero()) {
                return Err(Error::TheoremInconsistency(format!(
                    "admissible graph has a flat band at {}",
                    b.eigenvalue.0
                )));
            }
            let mut certs = Vec::new();
            for band in &report.flat_bands {
                for f in patterns(g, band) {
                    let c = kernel_h_membership(g, o, &f)?;
                    if !c.verdict {
                        return Err(Error::TheoremInconsistency(
                            "ker(H) pattern of an admissible graph violates the father/son sums".into(),
                        ));
                    }
                    certs.push(c);
                }
            }
            report.cross_checks.push(TheoremCrossCheck {
                hypothesis: "admissible: a.c. except a possible eigenvalue at 0 with father/son-sum eigenspace",
                holds: true,
                certificates: certs,
            });
        }
    }

    if let Some(phi) = phi {
        let semi = check_semi_adapted(g, phi)?;
        let full = check_adapted(g, phi)?;
        report.semi_adapted = Some(semi.verdict);
        report.adapted = Some(full.verdict);
        if semi.verdict {
            let mut certs = Vec::new();
            for band in &report.flat_bands {
                for f in patterns(g, band) {
                    let c = kernel_k_membership(g, phi, &f)?;
                    if !c.verdict {
                        return Err(Error::TheoremInconsistency(format!(
                            "eigenvector of flat band {} is not in ker(K)",
                            band.eigenvalue.0
                        )));
                    }
                    certs.push(c);
                }
            }
            report.cross_checks.push(TheoremCrossCheck {
                hypothesis: if full.verdict {
                    "adapted: point spectrum inside ker(K), a.c. on its complement"
                } else {
                    "semi-adapted: point spectrum inside ker(K)"
                },
                holds: true,
                certificates: certs,
            });
        }
    }
    Ok(report)
}

/// Exact trace of M(z)^k.
pub fn trace_power(m: &LaurentMatrix, k: usize) -> LaurentPoly {
    let mut acc = LaurentMatrix::identity(m.size(), m.nvars());
    for _ in 0..k {
        acc = &acc * m;
    }
    acc.trace()
}

/// Smallest k ≤ m with tr(M^k) not constant in z. All bands are flat iff
/// every power sum of the eigenvalues is constant, so such a k exists iff
/// some band is dispersive.
pub fn dispersive_trace_witness(m: &LaurentMatrix) -> Option<usize> {
    let mut acc = LaurentMatrix::identity(m.size(), m.nvars());
    for k in 1..=m.size() {
        acc = &acc * m;
        if !acc.trace().is_constant() {
            return Some(k);
        }
    }
    None
}
