//! Verdicts with re-checkable witnesses.

use serde::Serialize;

use crate::graph::Vertex;
use crate::scalar::{GaussianJson, RationalJson};

/// A group element `(f, t)`: index into the finite factor plus a lattice part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElem {
    pub f: usize,
    pub t: Vec<i64>,
}

/// Concrete evidence for a failed (or, occasionally, passed) check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A closed walk whose index (sons minus fathers stepped to) is nonzero.
    Cycle { walk: Vec<Vertex>, index: i64 },
    /// A vertex pair whose common-father and common-son counts differ.
    CountMismatch {
        x: Vertex,
        y: Vertex,
        common_fathers: usize,
        common_sons: usize,
    },
    /// A vertex pair whose adaptedness sum is nonzero.
    PairSum {
        x: Vertex,
        y: Vertex,
        condition: &'static str,
        value: RationalJson,
    },
    /// A delta vector on which an operator identity leaves a residual.
    Residual {
        at: Vertex,
        residual: Vec<(Vertex, GaussianJson)>,
    },
    /// A vertex where one of the father/son sums of f is nonzero.
    KernelH {
        x: Vertex,
        father_sum: GaussianJson,
        son_sum: GaussianJson,
    },
    /// A vertex where Σ Φ(y) f(y) differs from Φ(x) Σ f(y).
    KernelK {
        x: Vertex,
        lhs: GaussianJson,
        rhs: GaussianJson,
    },
    /// An eigenvector that K does not (numerically) annihilate.
    Eigenpair {
        index: usize,
        eigenvalue: f64,
        k_norm: f64,
        norm: f64,
    },
    /// A group element where two measures differ.
    MeasureMismatch {
        at: GroupElem,
        left: GaussianJson,
        right: GaussianJson,
    },
    /// A support point violating a hypothesis.
    SupportPoint { at: GroupElem, reason: String },
    /// Free-form explanation when no finer witness applies.
    Note { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate<T = ()> {
    pub check: &'static str,
    pub verdict: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<T>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl<T> Certificate<T> {
    pub fn pass(check: &'static str) -> Self {
        Certificate {
            check,
            verdict: true,
            degenerate: false,
            witness: None,
            certified: None,
            notes: Vec::new(),
        }
    }

    pub fn fail(check: &'static str, witness: Witness) -> Self {
        Certificate {
            check,
            verdict: false,
            degenerate: false,
            witness: Some(witness),
            certified: None,
            notes: Vec::new(),
        }
    }

    pub fn with_certified(mut self, value: T) -> Self {
        self.certified = Some(value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Certificate<U> {
        Certificate {
            check: self.check,
            verdict: self.verdict,
            degenerate: self.degenerate,
            witness: self.witness,
            certified: self.certified.map(f),
            notes: self.notes,
        }
    }

    /// Drops the certified payload, keeping verdict and witness.
    pub fn erase(self) -> Certificate {
        self.map(|_| ())
    }
}
