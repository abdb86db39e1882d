//! Error measurement and the brute-force shattering oracle.
//!
//! On the line the disagreement region of two piecewise-constant
//! classifiers is a finite union of intervals, so error under the uniform
//! distribution is computed exactly by sweeping every breakpoint and
//! measuring the segments where the predictions differ. In the plane we
//! fall back to seeded Monte Carlo.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::learners::{
    erm_train, ConceptClass, Distribution, Ensemble, Hypothesis, Label, LabeledExample, LearnError,
    Point, TargetSpec,
};

/// Anything that classifies points and exposes its 1-D decision
/// breakpoints for the exact sweep.
pub trait Classifier {
    fn classify(&self, point: Point) -> Label;
    /// Pushes every x at which the 1-D decision can change. No-op for
    /// classifiers over the plane.
    fn push_breakpoints(&self, out: &mut Vec<f64>);
}

impl Classifier for Hypothesis {
    fn classify(&self, point: Point) -> Label {
        self.predict(point)
    }

    fn push_breakpoints(&self, out: &mut Vec<f64>) {
        match *self {
            Hypothesis::Threshold { t } => out.push(t),
            Hypothesis::Interval { lo, hi } => {
                out.push(lo);
                out.push(hi);
            }
            Hypothesis::Rectangle { .. } => {}
        }
    }
}

impl Classifier for Ensemble {
    fn classify(&self, point: Point) -> Label {
        self.predict(point)
    }

    fn push_breakpoints(&self, out: &mut Vec<f64>) {
        for member in self.members() {
            member.push_breakpoints(out);
        }
    }
}

/// Exact disagreement mass between a predictor and the target under the
/// uniform distribution on the unit interval.
///
/// Collects all decision breakpoints of both sides, then classifies the
/// midpoint of every elementary segment of `[0, 1]`. The finitely many
/// boundary points carry no mass, so the segment sum is the exact error.
pub fn exact_error_1d<C: Classifier>(predictor: &C, spec: &TargetSpec) -> Result<f64, LearnError> {
    if spec.class.input_dim() != 1 || spec.distribution != Distribution::UniformUnitInterval {
        return Err(LearnError::UnsupportedExactMeasure);
    }
    let mut cuts = vec![0.0, 1.0];
    predictor.push_breakpoints(&mut cuts);
    spec.target.push_breakpoints(&mut cuts);
    cuts.retain(|x| x.is_finite() && *x > 0.0 && *x < 1.0);
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut error = 0.0;
    for pair in cuts.windows(2) {
        let mid = Point::D1(0.5 * (pair[0] + pair[1]));
        if predictor.classify(mid) != spec.target.predict(mid) {
            error += pair[1] - pair[0];
        }
    }
    Ok(error)
}

/// Uniform draw in [0, 1) from the top 53 bits of one generator word.
/// Spelled out at the bit level so the stream is stable across rand
/// releases.
fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn draw_point(distribution: Distribution, rng: &mut impl RngCore) -> Point {
    match distribution {
        Distribution::UniformUnitInterval => Point::D1(unit_f64(rng)),
        Distribution::UniformUnitSquare => {
            let x = unit_f64(rng);
            let y = unit_f64(rng);
            Point::D2(x, y)
        }
    }
}

pub fn draw_points(distribution: Distribution, n: usize, rng: &mut impl RngCore) -> Vec<Point> {
    (0..n).map(|_| draw_point(distribution, rng)).collect()
}

/// Monte Carlo disagreement estimate over `n` seeded draws from the
/// spec's distribution. Bit-identical for identical `(spec, n, seed)`.
pub fn mc_error<C: Classifier>(
    predictor: &C,
    spec: &TargetSpec,
    n: usize,
    seed: u64,
) -> Result<f64, LearnError> {
    if n == 0 {
        return Err(LearnError::NotEnoughData { needed: 1, got: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0usize;
    for _ in 0..n {
        let point = draw_point(spec.distribution, &mut rng);
        if predictor.classify(point) != spec.target.predict(point) {
            mismatches += 1;
        }
    }
    Ok(mismatches as f64 / n as f64)
}

/// Largest subset of `pool` (up to `cap` points) on which every labeling
/// is realized by some member of `class`, decided by running the canonical
/// consistent learner on each labeling. Brute force; keep pools small.
pub fn shattering_vcdim(class: ConceptClass, pool: &[Point], cap: usize) -> usize {
    let limit = cap.min(pool.len());
    let mut subset = Vec::with_capacity(limit);
    for k in (1..=limit).rev() {
        if any_shattered(class, pool, k, 0, &mut subset) {
            return k;
        }
    }
    0
}

fn any_shattered(
    class: ConceptClass,
    pool: &[Point],
    k: usize,
    start: usize,
    subset: &mut Vec<Point>,
) -> bool {
    if subset.len() == k {
        return is_shattered(class, subset);
    }
    // Not enough pool left to fill the subset.
    if pool.len() - start < k - subset.len() {
        return false;
    }
    for i in start..pool.len() {
        subset.push(pool[i]);
        if any_shattered(class, pool, k, i + 1, subset) {
            subset.pop();
            return true;
        }
        subset.pop();
    }
    false
}

fn is_shattered(class: ConceptClass, points: &[Point]) -> bool {
    let mut labeled: Vec<LabeledExample> = points
        .iter()
        .map(|&point| LabeledExample {
            point,
            label: Label::Minus,
        })
        .collect();
    for mask in 0u32..(1 << points.len()) {
        for (bit, ex) in labeled.iter_mut().enumerate() {
            ex.label = if mask & (1 << bit) != 0 {
                Label::Plus
            } else {
                Label::Minus
            };
        }
        if erm_train(class, &labeled).is_err() {
            return false;
        }
    }
    true
}
