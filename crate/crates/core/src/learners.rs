//! Concept classes, canonical consistent learners, and vote combiners.
//!
//! Three synthetic families keep every guarantee checkable at desk scale:
//! thresholds on the line, intervals on the line, and axis-aligned
//! rectangles in the plane. Each comes with a deterministic closure-style
//! consistent learner: fit the tightest hypothesis around the positive
//! examples and fail loudly if any negative lands inside. Decision
//! boundaries are closed so a trained hypothesis reproduces its own
//! training labels exactly in floating point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subsample::{build_subsamples, IndexSeq};

#[derive(Debug, Error, PartialEq)]
pub enum LearnError {
    #[error("no consistent hypothesis exists for the given sample")]
    NotRealizable,
    #[error("majority vote over an empty ballot")]
    EmptyVote,
    #[error("ensemble must have at least one member")]
    EmptyEnsemble,
    #[error("expected {expected}-dimensional points, got {got}-dimensional")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("block majority needs {needed} examples (2K-1 blocks), got {got}")]
    NotEnoughData { needed: usize, got: usize },
    #[error("block count parameter K must be at least 1")]
    ZeroBlocks,
    #[error("target hypothesis does not belong to the declared class")]
    TargetOutsideClass,
    #[error("distribution dimension does not match the concept class")]
    DistributionMismatch,
}

/// Binary label, always one of -1 or +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Minus,
    Plus,
}

impl Label {
    pub fn sign(self) -> i32 {
        match self {
            Label::Plus => 1,
            Label::Minus => -1,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
        }
    }
}

/// A point on the line or in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    D1(f64),
    D2(f64, f64),
}

impl Point {
    pub fn dim(self) -> usize {
        match self {
            Point::D1(_) => 1,
            Point::D2(..) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledExample {
    pub point: Point,
    pub label: Label,
}

/// A single classifier, parameterized by its concept family.
///
/// The all-negative member of the interval and rectangle families is the
/// inverted-bounds sentinel (`lo > hi`); for thresholds it is `t = +inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hypothesis {
    Threshold { t: f64 },
    Interval { lo: f64, hi: f64 },
    Rectangle { x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64 },
}

impl Hypothesis {
    pub fn empty_interval() -> Self {
        Hypothesis::Interval {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    pub fn empty_rectangle() -> Self {
        Hypothesis::Rectangle {
            x_lo: f64::INFINITY,
            x_hi: f64::NEG_INFINITY,
            y_lo: f64::INFINITY,
            y_hi: f64::NEG_INFINITY,
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            Hypothesis::Threshold { .. } | Hypothesis::Interval { .. } => 1,
            Hypothesis::Rectangle { .. } => 2,
        }
    }

    /// Classifies a point. Boundaries are closed: points exactly on a
    /// threshold or edge are positive.
    ///
    /// # Panics
    /// Panics if the point dimension does not match the hypothesis.
    pub fn predict(&self, point: Point) -> Label {
        let positive = match (*self, point) {
            (Hypothesis::Threshold { t }, Point::D1(x)) => x >= t,
            (Hypothesis::Interval { lo, hi }, Point::D1(x)) => lo <= x && x <= hi,
            (Hypothesis::Rectangle { x_lo, x_hi, y_lo, y_hi }, Point::D2(x, y)) => {
                x_lo <= x && x <= x_hi && y_lo <= y && y <= y_hi
            }
            (h, p) => panic!(
                "dimension mismatch: {}-dimensional hypothesis applied to {}-dimensional point",
                h.input_dim(),
                p.dim()
            ),
        };
        if positive {
            Label::Plus
        } else {
            Label::Minus
        }
    }
}

/// Descriptor of a hypothesis family with its known capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConceptClass {
    Threshold,
    Interval,
    Rectangle,
}

impl ConceptClass {
    pub fn vc_dim(self) -> u32 {
        match self {
            ConceptClass::Threshold => 1,
            ConceptClass::Interval => 2,
            ConceptClass::Rectangle => 4,
        }
    }

    pub fn input_dim(self) -> usize {
        match self {
            ConceptClass::Threshold | ConceptClass::Interval => 1,
            ConceptClass::Rectangle => 2,
        }
    }

    pub fn contains(self, h: &Hypothesis) -> bool {
        matches!(
            (self, h),
            (ConceptClass::Threshold, Hypothesis::Threshold { .. })
                | (ConceptClass::Interval, Hypothesis::Interval { .. })
                | (ConceptClass::Rectangle, Hypothesis::Rectangle { .. })
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ConceptClass::Threshold => "threshold",
            ConceptClass::Interval => "interval",
            ConceptClass::Rectangle => "rectangle",
        }
    }
}

/// Sampling distribution for the unlabeled data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    UniformUnitInterval,
    UniformUnitSquare,
}

impl Distribution {
    pub fn dim(self) -> usize {
        match self {
            Distribution::UniformUnitInterval => 1,
            Distribution::UniformUnitSquare => 2,
        }
    }

    /// The natural distribution for a class: uniform over its unit domain.
    pub fn for_class(class: ConceptClass) -> Self {
        match class.input_dim() {
            1 => Distribution::UniformUnitInterval,
            _ => Distribution::UniformUnitSquare,
        }
    }
}

/// A learning problem instance: class, true labeling rule, data law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSpec {
    pub class: ConceptClass,
    pub target: Hypothesis,
    pub distribution: Distribution,
}

impl TargetSpec {
    pub fn new(
        class: ConceptClass,
        target: Hypothesis,
        distribution: Distribution,
    ) -> Result<Self, LearnError> {
        if !class.contains(&target) {
            return Err(LearnError::TargetOutsideClass);
        }
        if distribution.dim() != class.input_dim() {
            return Err(LearnError::DistributionMismatch);
        }
        Ok(TargetSpec {
            class,
            target,
            distribution,
        })
    }

    pub fn label(&self, point: Point) -> LabeledExample {
        LabeledExample {
            point,
            label: self.target.predict(point),
        }
    }
}

/// Sign of the vote sum; exact ties go positive.
pub fn majority_label(votes: &[Label]) -> Result<Label, LearnError> {
    if votes.is_empty() {
        return Err(LearnError::EmptyVote);
    }
    let sum: i64 = votes.iter().map(|v| v.sign() as i64).sum();
    Ok(if sum >= 0 { Label::Plus } else { Label::Minus })
}

/// An ordered, nonempty list of hypotheses combined by majority vote.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<Hypothesis>,
}

impl Ensemble {
    pub fn new(members: Vec<Hypothesis>) -> Result<Self, LearnError> {
        if members.is_empty() {
            return Err(LearnError::EmptyEnsemble);
        }
        Ok(Ensemble { members })
    }

    pub fn members(&self) -> &[Hypothesis] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn predict(&self, point: Point) -> Label {
        let mut sum: i64 = 0;
        for h in &self.members {
            sum += h.predict(point).sign() as i64;
        }
        if sum >= 0 {
            Label::Plus
        } else {
            Label::Minus
        }
    }
}

fn scalar(point: Point, expected: usize) -> Result<f64, LearnError> {
    match point {
        Point::D1(x) if expected == 1 => Ok(x),
        p => Err(LearnError::DimensionMismatch {
            expected,
            got: p.dim(),
        }),
    }
}

fn planar(point: Point) -> Result<(f64, f64), LearnError> {
    match point {
        Point::D2(x, y) => Ok((x, y)),
        p => Err(LearnError::DimensionMismatch {
            expected: 2,
            got: p.dim(),
        }),
    }
}

/// Deterministic consistent learner for a class.
///
/// Canonical rules: threshold at the smallest positive point (`+inf` when
/// there are none); interval and rectangle as the tightest hull of the
/// positives (inverted sentinel when there are none). The fit is verified
/// against every example and a non-realizable sample is reported as an
/// error rather than approximated.
pub fn erm_train(
    class: ConceptClass,
    examples: &[LabeledExample],
) -> Result<Hypothesis, LearnError> {
    let hypothesis = match class {
        ConceptClass::Threshold => {
            let mut t = f64::INFINITY;
            for ex in examples {
                let x = scalar(ex.point, 1)?;
                if ex.label == Label::Plus && x < t {
                    t = x;
                }
            }
            Hypothesis::Threshold { t }
        }
        ConceptClass::Interval => {
            let mut h = Hypothesis::empty_interval();
            for ex in examples {
                let x = scalar(ex.point, 1)?;
                if ex.label == Label::Plus {
                    if let Hypothesis::Interval { lo, hi } = &mut h {
                        *lo = lo.min(x);
                        *hi = hi.max(x);
                    }
                }
            }
            h
        }
        ConceptClass::Rectangle => {
            let mut h = Hypothesis::empty_rectangle();
            for ex in examples {
                let (x, y) = planar(ex.point)?;
                if ex.label == Label::Plus {
                    if let Hypothesis::Rectangle { x_lo, x_hi, y_lo, y_hi } = &mut h {
                        *x_lo = x_lo.min(x);
                        *x_hi = x_hi.max(x);
                        *y_lo = y_lo.min(y);
                        *y_hi = y_hi.max(y);
                    }
                }
            }
            h
        }
    };
    for ex in examples {
        if hypothesis.predict(ex.point) != ex.label {
            return Err(LearnError::NotRealizable);
        }
    }
    Ok(hypothesis)
}

/// Plain ERM wrapped as a one-member ensemble.
pub fn train_erm(class: ConceptClass, examples: &[LabeledExample]) -> Result<Ensemble, LearnError> {
    Ensemble::new(vec![erm_train(class, examples)?])
}

/// The recursive-subsample majority learner.
///
/// Builds the overlapping subsample family over the example indices with
/// an empty tail, fits the canonical consistent learner on each subsample,
/// and returns the members in family order. The ensemble size is
/// `subsample_count(examples.len())`.
pub fn train_hanneke(
    class: ConceptClass,
    examples: &[LabeledExample],
) -> Result<Ensemble, LearnError> {
    let family = build_subsamples(&IndexSeq::range(examples.len()), &IndexSeq::empty())
        .expect("index range and empty tail are disjoint");
    let mut members = Vec::with_capacity(family.len());
    let mut buffer = Vec::new();
    for subsample in &family.subsamples {
        buffer.clear();
        buffer.extend(subsample.iter().map(|&i| examples[i]));
        members.push(erm_train(class, &buffer)?);
    }
    Ensemble::new(members)
}

/// Disjoint-block majority baseline.
///
/// Splits the sample into `2K-1` consecutive blocks of `floor(n/(2K-1))`
/// examples, dropping any remainder, and fits one consistent learner per
/// block.
pub fn train_simon(
    class: ConceptClass,
    examples: &[LabeledExample],
    k: usize,
) -> Result<Ensemble, LearnError> {
    if k == 0 {
        return Err(LearnError::ZeroBlocks);
    }
    let blocks = 2 * k - 1;
    if examples.len() < blocks {
        return Err(LearnError::NotEnoughData {
            needed: blocks,
            got: examples.len(),
        });
    }
    let block_size = examples.len() / blocks;
    let members = examples
        .chunks_exact(block_size)
        .take(blocks)
        .map(|block| erm_train(class, block))
        .collect::<Result<Vec<_>, _>>()?;
    Ensemble::new(members)
}
