//! Axiom-check results.
//!
//! Every sampled sweep in the crate folds its per-tuple outcomes into one
//! [`AxiomCheck`] per axiom. A check fails as soon as one tuple fails; the
//! reported witness is the worst-margin failing tuple (first in sweep order
//! on ties), so reports are deterministic for identical inputs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cone::Vector;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// No tuple failed, but some tuples were excluded as degenerate
    /// (saturated values, coincident points, grid-resolution ties).
    Degenerate,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Degenerate => "degenerate",
        })
    }
}

/// One coordinate of a witness tuple: a carrier point or scalar, or a cone vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessItem {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl WitnessItem {
    pub fn scalar<T: Real>(v: T) -> Self {
        WitnessItem::Scalar(v.as_f64())
    }

    /// One-dimensional vectors collapse to scalars.
    pub fn vector<T: Real>(v: &Vector<T>) -> Self {
        if v.dim() == 1 {
            WitnessItem::Scalar(v[0].as_f64())
        } else {
            WitnessItem::Vector(v.iter().map(|c| c.as_f64()).collect())
        }
    }
}

impl fmt::Display for WitnessItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessItem::Scalar(v) => write!(f, "{v}"),
            WitnessItem::Vector(vs) => {
                f.write_str("[")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness(pub Vec<WitnessItem>);

impl Witness {
    pub fn scalars<T: Real>(values: &[T]) -> Self {
        Witness(values.iter().map(|v| WitnessItem::scalar(*v)).collect())
    }

    pub fn push_scalar<T: Real>(mut self, v: T) -> Self {
        self.0.push(WitnessItem::scalar(v));
        self
    }

    pub fn push_vector<T: Real>(mut self, v: &Vector<T>) -> Self {
        self.0.push(WitnessItem::vector(v));
        self
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Flattened numeric view, vectors expanded in place.
    pub fn flatten(&self) -> Vec<f64> {
        self.0
            .iter()
            .flat_map(|item| match item {
                WitnessItem::Scalar(v) => vec![*v],
                WitnessItem::Vector(vs) => vs.clone(),
            })
            .collect()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom_id: String,
    pub status: Status,
    pub witness: Option<Witness>,
    /// Signed slack: the worst failing margin when failed, otherwise the
    /// smallest slack seen (0 when nothing was checked).
    pub margin: f64,
    pub checked: usize,
    pub degenerate: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// A check that summarises a computed result rather than a sweep.
    pub fn outcome(axiom_id: impl Into<String>, ok: bool, margin: f64, witness: Option<Witness>) -> Self {
        AxiomCheck {
            axiom_id: axiom_id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness,
            margin,
            checked: 1,
            degenerate: 0,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: AxiomCheck) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, axiom_id: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom_id == axiom_id)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

/// Folds per-tuple outcomes of one axiom into an [`AxiomCheck`].
#[derive(Debug)]
pub struct CheckBuilder {
    axiom_id: String,
    checked: usize,
    degenerate: usize,
    min_margin: Option<f64>,
    worst_failure: Option<(f64, Witness)>,
    first_degenerate: Option<Witness>,
    note: Option<String>,
}

impl CheckBuilder {
    pub fn new(axiom_id: impl Into<String>) -> Self {
        CheckBuilder {
            axiom_id: axiom_id.into(),
            checked: 0,
            degenerate: 0,
            min_margin: None,
            worst_failure: None,
            first_degenerate: None,
            note: None,
        }
    }

    /// Records a tuple whose signed slack is `margin`; it fails when `ok` is false.
    pub fn record(&mut self, margin: f64, ok: bool, witness: impl FnOnce() -> Witness) {
        // fold −0 into +0 so reports print one zero
        let margin = margin + 0.0;
        self.checked += 1;
        if ok {
            self.min_margin = Some(self.min_margin.map_or(margin, |m| m.min(margin)));
            return;
        }
        let worse = match &self.worst_failure {
            None => true,
            Some((m, _)) => margin < *m,
        };
        if worse {
            self.worst_failure = Some((margin, witness()));
        }
    }

    pub fn degenerate(&mut self, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        self.degenerate += 1;
        if self.first_degenerate.is_none() {
            self.first_degenerate = Some(witness());
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.note = Some(note.into());
    }

    pub fn finish(self) -> AxiomCheck {
        let (status, witness, margin) = match (self.worst_failure, self.first_degenerate) {
            (Some((m, w)), _) => (Status::Fail, Some(w), m),
            (None, Some(w)) => (Status::Degenerate, Some(w), self.min_margin.unwrap_or(0.0)),
            (None, None) => (Status::Pass, None, self.min_margin.unwrap_or(0.0)),
        };
        AxiomCheck {
            axiom_id: self.axiom_id,
            status,
            witness,
            margin,
            checked: self.checked,
            degenerate: self.degenerate,
            note: self.note,
        }
    }
}
