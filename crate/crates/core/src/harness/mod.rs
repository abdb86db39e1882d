//! Seeded experiment harness: trials, sweeps, summaries, CSV.
//!
//! A sweep is a pure function of its [`ExperimentConfig`]. Every trial
//! derives its own generator seed from (base seed, algorithm id, sample
//! size, trial index) through the mixer documented at [`derive_seed`], so
//! serial and parallel executions produce identical records and identical
//! CSV bytes.

pub mod selftest;

use std::fmt;
use std::path::{Path, PathBuf};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{theorem_error_bound, vc_consistency_bound};
use crate::learners::{
    train_erm, train_hanneke, train_simon, ConceptClass, Distribution, Ensemble, Hypothesis,
    LabeledExample, LearnError, TargetSpec,
};
use crate::measure::{draw_points, exact_error_1d, mc_error};
use crate::parallel::map_items;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// Which learner a trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "lowercase")]
pub enum AlgorithmSpec {
    /// Majority vote over the recursive overlapping subsamples.
    Hanneke,
    /// Single consistent learner on the whole sample.
    Erm,
    /// Majority vote over 2K-1 disjoint consecutive blocks.
    Simon { k: usize },
}

impl AlgorithmSpec {
    /// Stable id mixed into trial seeds. Distinct block counts are
    /// distinct algorithms and must not share seed streams.
    pub fn id(self) -> u64 {
        match self {
            AlgorithmSpec::Hanneke => 1,
            AlgorithmSpec::Erm => 2,
            AlgorithmSpec::Simon { k } => 3 | ((k as u64) << 8),
        }
    }

    pub fn parse(s: &str) -> Option<AlgorithmSpec> {
        match s {
            "hanneke" => Some(AlgorithmSpec::Hanneke),
            "erm" => Some(AlgorithmSpec::Erm),
            _ => {
                let k = s.strip_prefix("simon:")?.parse().ok()?;
                Some(AlgorithmSpec::Simon { k })
            }
        }
    }

    fn train(self, class: ConceptClass, sample: &[LabeledExample]) -> Result<Ensemble, LearnError> {
        match self {
            AlgorithmSpec::Hanneke => train_hanneke(class, sample),
            AlgorithmSpec::Erm => train_erm(class, sample),
            AlgorithmSpec::Simon { k } => train_simon(class, sample, k),
        }
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmSpec::Hanneke => write!(f, "hanneke"),
            AlgorithmSpec::Erm => write!(f, "erm"),
            AlgorithmSpec::Simon { k } => write!(f, "simon:{k}"),
        }
    }
}

/// How a trial measures the trained predictor's error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ErrorMode {
    /// Breakpoint sweep; exact, 1-D classes only.
    Exact,
    /// Seeded Monte Carlo with `n` draws.
    Mc { n: usize },
}

/// Full description of one sweep. See the crate README for the JSON shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub class: ConceptClass,
    /// Target hypothesis parameters: `[t]`, `[lo, hi]`, or
    /// `[x_lo, x_hi, y_lo, y_hi]` depending on the class.
    pub target_params: Vec<f64>,
    pub algorithms: Vec<AlgorithmSpec>,
    /// Strictly increasing sample sizes.
    pub m_grid: Vec<usize>,
    /// Trials per (algorithm, m) cell.
    pub trials_per_m: usize,
    pub eps: f64,
    pub delta: f64,
    pub base_seed: u64,
    pub error_mode: ErrorMode,
}

impl ExperimentConfig {
    /// Stock configuration per class: the shared m-grid
    /// {16, 64, 256, 1024, 4096}, eps 0.05, delta 0.1, seed 42, all three
    /// algorithms, 500 exact-measured trials for the 1-D classes and 100
    /// Monte Carlo trials (n = 100000) for rectangles.
    pub fn default_for(class: ConceptClass) -> ExperimentConfig {
        let (target_params, trials_per_m, error_mode) = match class {
            ConceptClass::Threshold => (vec![0.5], 500, ErrorMode::Exact),
            ConceptClass::Interval => (vec![0.3, 0.7], 500, ErrorMode::Exact),
            ConceptClass::Rectangle => (
                vec![0.2, 0.8, 0.25, 0.75],
                100,
                ErrorMode::Mc { n: 100_000 },
            ),
        };
        ExperimentConfig {
            class,
            target_params,
            algorithms: vec![
                AlgorithmSpec::Hanneke,
                AlgorithmSpec::Erm,
                AlgorithmSpec::Simon { k: 2 },
            ],
            m_grid: vec![16, 64, 256, 1024, 4096],
            trials_per_m,
            eps: 0.05,
            delta: 0.1,
            base_seed: 42,
            error_mode,
        }
    }

    pub fn target_spec(&self) -> Result<TargetSpec, HarnessError> {
        let target = match (self.class, self.target_params.as_slice()) {
            (ConceptClass::Threshold, &[t]) => Hypothesis::Threshold { t },
            (ConceptClass::Interval, &[lo, hi]) => Hypothesis::Interval { lo, hi },
            (ConceptClass::Rectangle, &[x_lo, x_hi, y_lo, y_hi]) => {
                Hypothesis::Rectangle { x_lo, x_hi, y_lo, y_hi }
            }
            (class, params) => {
                return Err(HarnessError::InvalidConfig(format!(
                    "{} targets need {} parameters, got {}",
                    class.name(),
                    match class {
                        ConceptClass::Threshold => 1,
                        ConceptClass::Interval => 2,
                        ConceptClass::Rectangle => 4,
                    },
                    params.len()
                )))
            }
        };
        TargetSpec::new(self.class, target, Distribution::for_class(self.class))
            .map_err(HarnessError::from)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::InvalidConfig(msg));
        if self.trials_per_m == 0 {
            return fail("trials_per_m must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return fail("algorithm list must be nonempty".into());
        }
        if self.m_grid.is_empty() {
            return fail("m_grid must be nonempty".into());
        }
        if self.m_grid.windows(2).any(|w| w[1] <= w[0]) {
            return fail("m_grid must be strictly increasing".into());
        }
        for (name, v) in [("eps", self.eps), ("delta", self.delta)] {
            if !(v > 0.0 && v < 1.0) {
                return fail(format!("{name} must lie in (0, 1), got {v}"));
            }
        }
        if let ErrorMode::Mc { n: 0 } = self.error_mode {
            return fail("monte carlo draw count must be at least 1".into());
        }
        if self.error_mode == ErrorMode::Exact && self.class.input_dim() != 1 {
            return fail("exact error measurement requires a 1-D class".into());
        }
        for algo in &self.algorithms {
            if let AlgorithmSpec::Simon { k } = algo {
                if *k == 0 {
                    return fail("simon block parameter k must be at least 1".into());
                }
                let needed = 2 * k - 1;
                if self.m_grid[0] < needed {
                    return fail(format!(
                        "simon:{k} needs at least {needed} examples, smallest grid m is {}",
                        self.m_grid[0]
                    ));
                }
            }
        }
        self.target_spec().map(|_| ())
    }
}

/// One finished trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub algo: AlgorithmSpec,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub error: f64,
    pub ensemble_size: usize,
    /// Reserved wall-clock column. Canonical records keep it at zero so
    /// identical configs yield byte-identical CSVs; timing lives in the
    /// sweep-level console output instead.
    pub wall_ms: u64,
}

/// SplitMix64 finalizer.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Trial seed derivation, fixed bit for bit:
/// `s0 = splitmix64(base)`, `s1 = splitmix64(s0 ^ algo_id)`,
/// `s2 = splitmix64(s1 ^ m)`, `seed = splitmix64(s2 ^ trial)`.
pub fn derive_seed(base: u64, algo_id: u64, m: u64, trial: u64) -> u64 {
    let mut z = splitmix64(base);
    z = splitmix64(z ^ algo_id);
    z = splitmix64(z ^ m);
    splitmix64(z ^ trial)
}

/// Runs a single seeded trial: draw `m` points, label them with the
/// target, train, measure. The Monte Carlo measurement stream is
/// `splitmix64(trial seed)` so it never reuses training randomness.
pub fn run_trial(
    config: &ExperimentConfig,
    algo: AlgorithmSpec,
    m: usize,
    trial: usize,
) -> Result<TrialRecord, HarnessError> {
    let spec = config.target_spec()?;
    let seed = derive_seed(config.base_seed, algo.id(), m as u64, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<LabeledExample> = draw_points(spec.distribution, m, &mut rng)
        .into_iter()
        .map(|p| spec.label(p))
        .collect();
    let ensemble = algo.train(config.class, &sample)?;
    let error = match config.error_mode {
        ErrorMode::Exact => exact_error_1d(&ensemble, &spec)?,
        ErrorMode::Mc { n } => mc_error(&ensemble, &spec, n, splitmix64(seed))?,
    };
    Ok(TrialRecord {
        algo,
        m,
        trial,
        seed,
        error,
        ensemble_size: ensemble.len(),
        wall_ms: 0,
    })
}

/// Summary of one (algorithm, m) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryCell {
    pub algo: AlgorithmSpec,
    pub m: usize,
    pub trials: usize,
    /// Nearest-rank median of the trial errors.
    pub median_error: f64,
    /// Nearest-rank (1-delta)-quantile of the trial errors.
    pub quantile_error: f64,
    pub success_fraction: f64,
    /// Recursive-majority error guarantee at this m, for reference.
    pub theorem_bound: f64,
    /// Consistent-learner error guarantee at this m, for reference.
    pub vc_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub eps: f64,
    pub delta: f64,
    pub cells: Vec<SummaryCell>,
}

impl SweepSummary {
    pub fn cell(&self, algo: AlgorithmSpec, m: usize) -> Option<&SummaryCell> {
        self.cells.iter().find(|c| c.algo == algo && c.m == m)
    }
}

/// Nearest-rank quantile: the `ceil(q * n)`-th smallest value (1-based),
/// clamped to the first for tiny `q`.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Runs the full grid: `trials_per_m` trials per (algorithm, m) cell.
///
/// `jobs` follows [`map_items`]: 0 = all cores, 1 = sequential. Records
/// come back sorted by (algorithm order, m, trial) no matter how the work
/// was scheduled.
pub fn run_sweep(
    config: &ExperimentConfig,
    jobs: usize,
) -> Result<(Vec<TrialRecord>, SweepSummary), HarnessError> {
    config.validate()?;
    let mut cells = Vec::new();
    for &algo in &config.algorithms {
        for &m in &config.m_grid {
            for trial in 0..config.trials_per_m {
                cells.push((algo, m, trial));
            }
        }
    }
    let records: Vec<Result<TrialRecord, HarnessError>> = map_items(cells, jobs, |(algo, m, trial)| {
        run_trial(config, algo, m, trial)
    });
    let records: Vec<TrialRecord> = records.into_iter().collect::<Result<_, _>>()?;
    let summary = summarize(config, &records);
    Ok((records, summary))
}

fn summarize(config: &ExperimentConfig, records: &[TrialRecord]) -> SweepSummary {
    let d = config.class.vc_dim();
    let mut cells = Vec::new();
    for &algo in &config.algorithms {
        for &m in &config.m_grid {
            let mut errors: Vec<f64> = records
                .iter()
                .filter(|r| r.algo == algo && r.m == m)
                .map(|r| r.error)
                .collect();
            errors.sort_by(f64::total_cmp);
            if errors.is_empty() {
                continue;
            }
            let successes = errors.iter().filter(|&&e| e <= config.eps).count();
            cells.push(SummaryCell {
                algo,
                m,
                trials: errors.len(),
                median_error: nearest_rank(&errors, 0.5),
                quantile_error: nearest_rank(&errors, 1.0 - config.delta),
                success_fraction: successes as f64 / errors.len() as f64,
                theorem_bound: theorem_error_bound(m as u64, config.delta, d),
                vc_bound: vc_consistency_bound(m as u64, config.delta, d),
            });
        }
    }
    SweepSummary {
        eps: config.eps,
        delta: config.delta,
        cells,
    }
}

/// Smallest grid `m` per algorithm whose empirical success fraction
/// `P[error <= eps]` reaches `1 - delta`; `None` when no grid point
/// qualifies. Algorithms appear in first-seen record order.
pub fn estimate_sample_complexity(
    records: &[TrialRecord],
    eps: f64,
    delta: f64,
) -> Vec<(AlgorithmSpec, Option<usize>)> {
    let mut algos: Vec<AlgorithmSpec> = Vec::new();
    for r in records {
        if !algos.contains(&r.algo) {
            algos.push(r.algo);
        }
    }
    algos
        .into_iter()
        .map(|algo| {
            let mut ms: Vec<usize> = records
                .iter()
                .filter(|r| r.algo == algo)
                .map(|r| r.m)
                .collect();
            ms.sort_unstable();
            ms.dedup();
            let hit = ms.into_iter().find(|&m| {
                let (total, ok) = records
                    .iter()
                    .filter(|r| r.algo == algo && r.m == m)
                    .fold((0usize, 0usize), |(t, k), r| {
                        (t + 1, k + usize::from(r.error <= eps))
                    });
                total > 0 && ok as f64 / total as f64 >= 1.0 - delta
            });
            (algo, hit)
        })
        .collect()
}

const RECORD_HEADER: &str = "algo,m,trial,seed,error,ensemble_size,ms";
const SUMMARY_HEADER: &str =
    "algo,m,trials,median_error,quantile_error,success_fraction,theorem_bound,vc_bound";

/// Records CSV, one row per trial in (algorithm, m, trial) order.
pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(RECORD_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.algo, r.m, r.trial, r.seed, r.error, r.ensemble_size, r.wall_ms
        ));
    }
    out
}

/// Parses [`records_to_csv`] output back into records.
pub fn parse_records_csv(text: &str) -> Result<Vec<TrialRecord>, HarnessError> {
    let bad = |line: usize, message: String| HarnessError::Csv { line, message };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, head)) if head == RECORD_HEADER => {}
        other => {
            return Err(bad(
                1,
                format!("expected header {RECORD_HEADER:?}, got {:?}", other.map(|x| x.1)),
            ))
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let n = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(bad(n, format!("expected 7 columns, got {}", fields.len())));
        }
        let algo = AlgorithmSpec::parse(fields[0])
            .ok_or_else(|| bad(n, format!("unknown algorithm {:?}", fields[0])))?;
        let parse_err = |what: &str| bad(n, format!("bad {what} field"));
        records.push(TrialRecord {
            algo,
            m: fields[1].parse().map_err(|_| parse_err("m"))?,
            trial: fields[2].parse().map_err(|_| parse_err("trial"))?,
            seed: fields[3].parse().map_err(|_| parse_err("seed"))?,
            error: fields[4].parse().map_err(|_| parse_err("error"))?,
            ensemble_size: fields[5].parse().map_err(|_| parse_err("ensemble_size"))?,
            wall_ms: fields[6].parse().map_err(|_| parse_err("ms"))?,
        });
    }
    Ok(records)
}

/// Summary CSV, one row per (algorithm, m) cell.
pub fn summary_to_csv(summary: &SweepSummary) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for c in &summary.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.algo,
            c.m,
            c.trials,
            c.median_error,
            c.quantile_error,
            c.success_fraction,
            c.theorem_bound,
            c.vc_bound
        ));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}
