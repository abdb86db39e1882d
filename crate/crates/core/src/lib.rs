//! Subsample-majority learning testbed.
//!
//! Four pieces: the recursive overlapping-subsample construction over
//! index sequences ([`subsample`]), synthetic concept classes with
//! canonical consistent learners and vote combiners ([`learners`]), exact
//! and Monte Carlo error measurement plus a brute-force shattering oracle
//! ([`measure`]), bound formulas ([`bounds`]), and a seeded experiment
//! harness with CSV reporting and invariant self-tests ([`harness`]).
//!
//! Every operation is a pure function of its inputs and seeds; sweeps are
//! reproducible byte for byte regardless of worker count.

pub mod bounds;
pub mod harness;
pub mod learners;
pub mod measure;
pub mod parallel;
pub mod subsample;

pub use learners::{ConceptClass, Distribution, Ensemble, Hypothesis, Label, Point, TargetSpec};
pub use subsample::{build_subsamples, enumerate_direct, subsample_count, IndexSeq, SubsampleFamily};
