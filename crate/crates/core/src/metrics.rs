//! Error characterization: probabilistic statistics of a single compressor
//! cell and exhaustive or sampled metrics of a whole multiplier.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cells::{CellTable, Polarity};
use crate::error::{Error, Result};
use crate::multiplier::{Multiplier, MultiplierConfig};
use crate::ppm::SignedWord;

/// Largest width swept exhaustively (`4^12` pairs).
pub const MAX_EXHAUSTIVE_WIDTH: u32 = 12;

/// Independent per-input probabilities of being 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDistribution {
    probs: Vec<Ratio<i64>>,
}

impl InputDistribution {
    pub fn new(probs: Vec<Ratio<i64>>) -> Result<Self> {
        let unit = Ratio::from_integer(1);
        if let Some(p) = probs
            .iter()
            .find(|p| **p < Ratio::from_integer(0) || **p > unit)
        {
            return Err(Error::Config(format!("probability {p} outside [0, 1]")));
        }
        Ok(Self { probs })
    }

    pub fn from_polarities(polarities: &[Polarity]) -> Self {
        Self {
            probs: polarities.iter().map(|p| p.one_probability()).collect(),
        }
    }

    /// The AND/NAND distribution implied by the cell's input polarities.
    pub fn for_cell(table: &CellTable) -> Self {
        Self::from_polarities(&table.input_polarities)
    }

    pub fn arity(&self) -> usize {
        self.probs.len()
    }

    /// Joint probability of row `index`, first input as the high bit.
    pub fn row_probability(&self, index: usize) -> Ratio<i64> {
        let k = self.probs.len();
        self.probs
            .iter()
            .enumerate()
            .map(|(pos, &p)| {
                if (index >> (k - 1 - pos)) & 1 == 1 {
                    p
                } else {
                    Ratio::from_integer(1) - p
                }
            })
            .product()
    }
}

/// Error probability and signed mean error (`exact - approx`) of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellStats {
    pub p_e: Ratio<i64>,
    pub e_mean: Ratio<i64>,
}

pub fn cell_stats(table: &CellTable, dist: &InputDistribution) -> Result<CellStats> {
    if dist.arity() != table.arity {
        return Err(Error::Arity {
            cell: table.name,
            expected: table.arity,
            got: dist.arity(),
        });
    }
    let mut p_e = Ratio::from_integer(0);
    let mut e_mean = Ratio::from_integer(0);
    for row in 0..table.row_count() {
        let err = table.error(row);
        if err != 0 {
            let p = dist.row_probability(row);
            p_e += p;
            e_mean += p * i64::from(err);
        }
    }
    Ok(CellStats { p_e, e_mean })
}

/// Multiplier-level error metrics. `er`, `nmed` and `mred` are fractions,
/// not percentages.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub er: f64,
    pub nmed: f64,
    pub mred: f64,
    pub mean_ed: f64,
    pub max_ed: u64,
    pub pairs: u64,
    pub zero_exact_skipped: u64,
}

impl ErrorReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub const CSV_HEADER: &'static str = "design,er,nmed,mred,mean_ed,max_ed";

    pub fn csv_row(&self, design: &str) -> String {
        format!(
            "{design},{:.6},{:.6},{:.6},{:.4},{}",
            self.er, self.nmed, self.mred, self.mean_ed, self.max_ed
        )
    }
}

/// Partial sums over a slice of the operand space. Merged in a fixed order so
/// the floating-point relative-error sum does not depend on thread count.
#[derive(Clone, Debug, Default)]
struct Tally {
    pairs: u64,
    errors: u64,
    sum_abs: u128,
    sum_signed: i128,
    red: f64,
    max_ed: u64,
    zero_exact: u64,
    max_exact: u64,
}

impl Tally {
    fn add(&mut self, exact: i64, approx: i64) {
        let diff = exact - approx;
        let abs = diff.unsigned_abs();
        self.pairs += 1;
        self.errors += u64::from(diff != 0);
        self.sum_abs += u128::from(abs);
        self.sum_signed += i128::from(diff);
        self.max_ed = self.max_ed.max(abs);
        self.max_exact = self.max_exact.max(exact.unsigned_abs());
        if exact == 0 {
            self.zero_exact += 1;
        } else {
            self.red += abs as f64 / exact.unsigned_abs() as f64;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.pairs += other.pairs;
        self.errors += other.errors;
        self.sum_abs += other.sum_abs;
        self.sum_signed += other.sum_signed;
        self.red += other.red;
        self.max_ed = self.max_ed.max(other.max_ed);
        self.zero_exact += other.zero_exact;
        self.max_exact = self.max_exact.max(other.max_exact);
        self
    }

    fn report(&self, normalizer: u64) -> ErrorReport {
        let pairs = self.pairs.max(1) as f64;
        let nonzero = (self.pairs - self.zero_exact).max(1) as f64;
        ErrorReport {
            er: self.errors as f64 / pairs,
            nmed: if normalizer == 0 {
                0.0
            } else {
                self.sum_abs as f64 / pairs / normalizer as f64
            },
            mred: self.red / nonzero,
            mean_ed: self.sum_signed as f64 / pairs,
            max_ed: self.max_ed,
            pairs: self.pairs,
            zero_exact_skipped: self.zero_exact,
        }
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

fn sweep_rows(m: &Multiplier) -> Tally {
    let n = m.width();
    let (lo, hi) = (SignedWord::min(n), SignedWord::max(n));
    let rows: Vec<Tally> = (lo..=hi)
        .into_par_iter()
        .map(|a| {
            let mut t = Tally::default();
            for b in lo..=hi {
                t.add(a * b, m.multiply(a, b));
            }
            t
        })
        .collect();
    rows.into_iter().fold(Tally::default(), Tally::merge)
}

/// Metrics over every signed operand pair of the configured width.
pub fn exhaustive_report(cfg: &MultiplierConfig) -> Result<ErrorReport> {
    exhaustive_report_with(cfg, None)
}

pub fn exhaustive_report_with(
    cfg: &MultiplierConfig,
    threads: Option<usize>,
) -> Result<ErrorReport> {
    if cfg.width > MAX_EXHAUSTIVE_WIDTH {
        return Err(Error::SweepTooWide(cfg.width));
    }
    let m = Multiplier::new(*cfg)?;
    let tally = with_threads(threads, || sweep_rows(&m));
    Ok(tally.report(tally.max_exact))
}

const SAMPLE_CHUNK: usize = 4096;

/// Metrics over `sample_count` uniformly drawn operand pairs. When the sample
/// is at least as large as the operand space the full space is swept instead.
pub fn sampled_report(
    cfg: &MultiplierConfig,
    sample_count: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<ErrorReport> {
    if sample_count == 0 {
        return Err(Error::Config("sample count must be at least 1".into()));
    }
    let n = cfg.width;
    if 2 * n < 64 && sample_count >= 1u64 << (2 * n) {
        return exhaustive_report_with(cfg, threads);
    }
    let m = Multiplier::new(*cfg)?;
    let (lo, hi) = (SignedWord::min(n), SignedWord::max(n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(i64, i64)> = (0..sample_count)
        .map(|_| (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi)))
        .collect();
    let tally = with_threads(threads, || {
        let chunks: Vec<Tally> = pairs
            .par_chunks(SAMPLE_CHUNK)
            .map(|chunk| {
                let mut t = Tally::default();
                for &(a, b) in chunk {
                    t.add(a * b, m.multiply(a, b));
                }
                t
            })
            .collect();
        chunks.into_iter().fold(Tally::default(), Tally::merge)
    });
    // Normalize by the largest product of the full operand space so sampled
    // and exhaustive NMED agree in scale.
    Ok(tally.report(1u64 << (2 * n - 2)))
}

/// Whether the multiplier gives the same product for `a·b` and `b·a` on every
/// operand pair (checked exhaustively, so only for small widths).
pub fn is_operand_symmetric(m: &Multiplier) -> Result<bool> {
    let n = m.width();
    if n > MAX_EXHAUSTIVE_WIDTH {
        return Err(Error::SweepTooWide(n));
    }
    let (lo, hi) = (SignedWord::min(n), SignedWord::max(n));
    Ok((lo..=hi)
        .into_par_iter()
        .all(|a| (a..=hi).all(|b| m.multiply(a, b) == m.multiply(b, a))))
}
