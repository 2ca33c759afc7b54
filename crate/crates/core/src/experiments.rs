//! Simulations on ratings data: pick the most-rated items, rescale ratings
//! to unit-sum valuations, sample voters, district them and record the
//! distortion of each rule.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::districting::shuffled_partition;
use crate::engine::Evaluator;
use crate::error::{Error, Result};
use crate::model::{DistrictPartition, TieBreakOrder, ValuationProfile, WeightVector};
use crate::rules::RuleName;

/// Weighted mode draws every district weight uniformly from this range.
pub const WEIGHT_RANGE: (u32, u32) = (1, 10);

/// Ratings with missing entries on a fixed scale `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingsTable {
    items: Vec<String>,
    ratings: Vec<Vec<Option<f64>>>,
    lo: f64,
    hi: f64,
}

impl RatingsTable {
    pub fn new(items: Vec<String>, ratings: Vec<Vec<Option<f64>>>, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::domain(format!("rating range needs lo < hi, got [{lo}, {hi}]")));
        }
        for (i, row) in ratings.iter().enumerate() {
            if row.len() != items.len() {
                return Err(Error::data(format!("row {i}: expected {} ratings, got {}", items.len(), row.len())));
            }
            if let Some(x) = row.iter().flatten().find(|x| !(lo..=hi).contains(*x)) {
                return Err(Error::data(format!("row {i}: rating {x} outside [{lo}, {hi}]")));
            }
        }
        Ok(RatingsTable { items, ratings, lo, hi })
    }

    /// Reads `voter,<item ids…>` CSV; blank cells are missing ratings.
    /// `source` names the input in error messages.
    pub fn from_reader<R: Read>(reader: R, lo: f64, hi: f64, source: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(|e| Error::data(format!("{source}: {e}")))?.clone();
        if header.get(0) != Some("voter") {
            return Err(Error::data(format!("{source}: header must start with `voter`")));
        }
        let items: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut ratings = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| Error::data(format!("{source}, line {line}: {e}")))?;
            let row = record
                .iter()
                .skip(1)
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>()
                            .map(Some)
                            .map_err(|e| Error::data(format!("{source}, line {line}: bad rating {cell:?}: {e}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            ratings.push(row);
        }
        Self::new(items, ratings, lo, hi).map_err(|e| match e {
            Error::Data(msg) => Error::data(format!("{source}: {msg}")),
            other => other,
        })
    }

    pub fn from_path(path: &Path, lo: f64, hi: f64) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::data(format!("{}: cannot open: {e}", path.display())))?;
        Self::from_reader(file, lo, hi, &path.display().to_string())
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn n_voters(&self) -> usize {
        self.ratings.len()
    }

    /// Number of ratings per item.
    pub fn rating_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.items.len()];
        for row in &self.ratings {
            for (c, x) in counts.iter_mut().zip(row) {
                *c += usize::from(x.is_some());
            }
        }
        counts
    }
}

/// Voters who rated every selected item, with their raw ratings.
#[derive(Debug, Clone, PartialEq)]
pub struct VoterPool {
    /// Selected item columns, in ranking order.
    pub columns: Vec<usize>,
    pub items: Vec<String>,
    rows: Vec<Vec<f64>>,
    lo: f64,
    hi: f64,
}

impl VoterPool {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn m(&self) -> usize {
        self.columns.len()
    }

    /// Valuation profile of the given pool members.
    pub fn profile(&self, members: &[usize]) -> Result<ValuationProfile> {
        ValuationProfile::new(members.iter().map(|&i| normalize(&self.rows[i], self.lo, self.hi)).collect())
    }
}

/// Keeps the `m` most-rated items (lower column first on equal counts) and
/// the voters who rated all of them.
pub fn ingest(table: &RatingsTable, m: usize) -> Result<VoterPool> {
    let counts = table.rating_counts();
    let mut cols: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] > 0).collect();
    if m < 2 || cols.len() < m {
        return Err(Error::data(format!("need m >= 2 rated items, table has {} (m = {m})", cols.len())));
    }
    cols.sort_by_key(|&c| (std::cmp::Reverse(counts[c]), c));
    cols.truncate(m);
    let rows: Vec<Vec<f64>> = table
        .ratings
        .iter()
        .filter_map(|row| cols.iter().map(|&c| row[c]).collect::<Option<Vec<f64>>>())
        .collect();
    if rows.is_empty() {
        return Err(Error::data("no voter rated all selected items"));
    }
    Ok(VoterPool {
        items: cols.iter().map(|&c| table.items[c].clone()).collect(),
        columns: cols,
        rows,
        lo: table.lo,
        hi: table.hi,
    })
}

/// Shifts by `-lo` and divides by the row total; an all-`lo` row becomes
/// uniform.
pub fn normalize(row: &[f64], lo: f64, _hi: f64) -> Vec<f64> {
    let shifted: Vec<f64> = row.iter().map(|x| x - lo).collect();
    let total: f64 = shifted.iter().sum();
    if total <= 0.0 {
        return vec![1.0 / row.len() as f64; row.len()];
    }
    shifted.iter().map(|x| x / total).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    Random,
    /// Worst of `inner_trials` random partitions; the first is the one
    /// random mode would use.
    Bad { inner_trials: usize },
}

impl fmt::Display for PartitionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionMode::Random => f.write_str("random"),
            PartitionMode::Bad { .. } => f.write_str("bad"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub m: usize,
    pub voters_per_trial: usize,
    pub trials: usize,
    pub k_values: Vec<usize>,
    pub mode: PartitionMode,
    pub weighted: bool,
    pub rules: Vec<RuleName>,
    pub seed: u64,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.voters_per_trial == 0 || self.rules.is_empty() || self.k_values.is_empty() {
            return Err(Error::domain("trials, voters per trial, rules and k values must be non-empty"));
        }
        if let Some(k) = self.k_values.iter().find(|&&k| k == 0 || k > self.voters_per_trial) {
            return Err(Error::domain(format!("k = {k} does not fit {} voters", self.voters_per_trial)));
        }
        if let PartitionMode::Bad { inner_trials: 0 } = self.mode {
            return Err(Error::domain("bad mode needs at least one inner trial"));
        }
        Ok(())
    }
}

/// Aggregate for one `(rule, k)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub rule: String,
    pub k: usize,
    pub mean: f64,
    pub stddev: f64,
    /// Per-trial distortions in trial order.
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub mode: PartitionMode,
    pub weighted: bool,
    /// Rule-major in configured order, `k` ascending.
    pub rows: Vec<ResultRow>,
}

pub const CSV_HEADER: [&str; 9] =
    ["rule", "k", "mode", "weighted", "mean_distortion", "stddev", "min_distortion", "max_distortion", "trials"];

/// District sizes as equal as possible, larger districts first.
fn balanced_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|d| n / k + usize::from(d < n % k)).collect()
}

/// Runs `config.trials` independent trials in parallel. Trial `t` samples
/// voters with ChaCha8 seeded `seed + t`; for the `i`-th smallest `k` it then
/// switches to stream `i + 1` of the same seed and draws the weights (if
/// weighted) followed by the partitions, so every rule sees the same
/// districts and random mode's partition is the first one bad mode tries.
/// Ties are broken by item order.
pub fn run_experiment(pool: &VoterPool, config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    if pool.m() != config.m {
        return Err(Error::domain(format!("pool has {} items, config expects {}", pool.m(), config.m)));
    }
    if pool.len() < config.voters_per_trial {
        return Err(Error::data(format!(
            "only {} complete voters, {} needed per trial",
            pool.len(),
            config.voters_per_trial
        )));
    }
    let rules = config.rules.iter().map(|r| r.resolve(config.m)).collect::<Result<Vec<_>>>()?;
    let mut ks = config.k_values.clone();
    ks.sort_unstable();
    ks.dedup();
    let tiebreak = TieBreakOrder::identity(config.m);
    let inner = match config.mode {
        PartitionMode::Random => 1,
        PartitionMode::Bad { inner_trials } => inner_trials,
    };

    // per_trial[t][rule][k]
    let per_trial: Vec<Vec<Vec<f64>>> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = config.seed.wrapping_add(t as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let mut members: Vec<usize> = (0..pool.len()).collect();
            members.shuffle(&mut rng);
            members.truncate(config.voters_per_trial);
            let profile = pool.profile(&members)?;
            let evals = rules
                .iter()
                .map(|r| Evaluator::new(&profile, r, &tiebreak))
                .collect::<Result<Vec<_>>>()?;
            let mut out = vec![vec![0.0; ks.len()]; rules.len()];
            for (ki, &k) in ks.iter().enumerate() {
                let mut sub = ChaCha8Rng::seed_from_u64(trial_seed);
                sub.set_stream(ki as u64 + 1);
                let weights = if config.weighted {
                    WeightVector::new((0..k).map(|_| sub.gen_range(WEIGHT_RANGE.0..=WEIGHT_RANGE.1) as f64).collect())?
                } else {
                    WeightVector::uniform(k)
                };
                let sizes = balanced_sizes(profile.n(), k);
                let partitions = (0..inner)
                    .map(|_| {
                        if k == 1 {
                            Ok(DistrictPartition::single(profile.n()))
                        } else {
                            shuffled_partition(&sizes, &mut sub)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                for (ri, eval) in evals.iter().enumerate() {
                    out[ri][ki] = partitions
                        .iter()
                        .map(|p| eval.distortion_of(eval.evaluate(p, &weights).winner).distortion)
                        .fold(f64::NEG_INFINITY, f64::max);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(rules.len() * ks.len());
    for (ri, name) in config.rules.iter().enumerate() {
        for (ki, &k) in ks.iter().enumerate() {
            let samples: Vec<f64> = per_trial.iter().map(|t| t[ri][ki]).collect();
            let (mean, stddev) = mean_and_stddev(&samples);
            rows.push(ResultRow { rule: name.to_string(), k, mean, stddev, samples });
        }
    }
    Ok(ExperimentResult { mode: config.mode, weighted: config.weighted, rows })
}

/// Mean and sample standard deviation, summed in order.
fn mean_and_stddev(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn write_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::domain("empty experiment result"));
    }
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in &result.rows {
        w.write_record([
            row.rule.clone(),
            row.k.to_string(),
            result.mode.to_string(),
            result.weighted.to_string(),
            row.mean.to_string(),
            row.stddev.to_string(),
            row.samples.iter().copied().fold(f64::INFINITY, f64::min).to_string(),
            row.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max).to_string(),
            row.samples.len().to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(result, std::io::BufWriter::new(file))
}
