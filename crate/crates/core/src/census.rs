//! Censuses over canonical sign classes: exhaustive histograms, seeded
//! uniform sampling and resumable checkpoints.
//!
//! Work is split into fixed chunks of consecutive class indices (or fixed
//! blocks of samples with their own random stream), and the per-chunk
//! histograms are summed.  Results therefore do not depend on the number of
//! worker threads.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Evaluation, Kernel};
use crate::scheme::RealScheme;
use crate::signs::{class_count, index_to_bits};
use crate::surface::Surface;
use crate::triangulation::Triangulation;

/// Classes evaluated by one task of an exhaustive census.
pub const CHUNK: u64 = 1 << 14;
/// Samples drawn from one random stream in a sampled census.
pub const SAMPLE_BLOCK: u64 = 1 << 12;
/// Default number of classes between two checkpoints.
pub const CHECKPOINT_EVERY: u64 = 1 << 24;

/// Scheme counts and the oval-count distribution of a census.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: FxHashMap<u128, u64>,
    ovals: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn record(&mut self, e: Evaluation) {
        *self.counts.entry(e.code).or_insert(0) += 1;
        let k = e.ovals as usize;
        if self.ovals.len() <= k {
            self.ovals.resize(k + 1, 0);
        }
        self.ovals[k] += 1;
        self.total += 1;
    }

    pub fn merge(mut self, other: Histogram) -> Histogram {
        for (code, n) in other.counts {
            *self.counts.entry(code).or_insert(0) += n;
        }
        if self.ovals.len() < other.ovals.len() {
            self.ovals.resize(other.ovals.len(), 0);
        }
        for (a, b) in self.ovals.iter_mut().zip(other.ovals) {
            *a += b;
        }
        self.total += other.total;
        self
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `oval_distribution()[k]` classes have `k` ovals.
    pub fn oval_distribution(&self) -> &[u64] {
        &self.ovals
    }

    fn weighted(&self, shift: f64) -> f64 {
        let sum: f64 = self.ovals.iter().enumerate().map(|(k, &n)| (k as f64 + shift) * n as f64).sum();
        sum / self.total.max(1) as f64
    }

    /// Mean number of ovals.
    pub fn mean_ovals(&self) -> f64 {
        self.weighted(0.0)
    }

    /// Exact mean number of ovals as a reduced fraction `(num, den)`.
    pub fn mean_ovals_exact(&self) -> (u128, u128) {
        let num: u128 = self.ovals.iter().enumerate().map(|(k, &n)| k as u128 * n as u128).sum();
        let den = self.total.max(1) as u128;
        let g = gcd(num, den);
        (num / g, den / g)
    }

    /// Mean number of connected components, counting the pseudo-line for odd
    /// degree.
    pub fn mean_loops(&self, degree: u32) -> f64 {
        self.weighted((degree % 2) as f64)
    }

    /// Schemes with their counts, most frequent first, ties broken by the
    /// rendered scheme.
    pub fn schemes(&self, degree: u32) -> Result<Vec<(RealScheme, u64)>> {
        let mut rows: Vec<(String, RealScheme, u64)> = self
            .counts
            .iter()
            .map(|(&code, &n)| {
                let s = RealScheme::from_code(degree % 2 == 1, code)?;
                Ok((s.to_string(), s, n))
            })
            .collect::<Result<_>>()?;
        rows.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
        Ok(rows.into_iter().map(|(_, s, n)| (s, n)).collect())
    }

    /// Count of one scheme (zero when absent).
    pub fn count(&self, scheme: &RealScheme) -> u64 {
        self.counts.get(&scheme.code()).copied().unwrap_or(0)
    }

    /// `scheme,count` table in the order of [`Histogram::schemes`].
    pub fn to_csv(&self, degree: u32) -> Result<String> {
        let mut out = String::from("scheme,count\n");
        for (s, n) in self.schemes(degree)? {
            out.push_str(&format!("{s},{n}\n"));
        }
        Ok(out)
    }

    /// Parses a `scheme,count` table.
    pub fn from_csv(text: &str) -> Result<Vec<(RealScheme, u64)>> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("scheme,count") {
            return Err(Error::Format("missing `scheme,count` header".into()));
        }
        lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let (s, n) =
                    l.rsplit_once(',').ok_or_else(|| Error::Format(format!("malformed row `{l}`")))?;
                let n = n.trim().parse().map_err(|_| Error::Format(format!("bad count in `{l}`")))?;
                Ok((s.parse()?, n))
            })
            .collect()
    }

    fn to_state(&self, degree: u32) -> Result<HistogramState> {
        Ok(HistogramState {
            total: self.total,
            counts: self.schemes(degree)?.into_iter().map(|(s, n)| (s.to_string(), n)).collect(),
            ovals: self.ovals.clone(),
        })
    }

    fn from_state(state: &HistogramState) -> Result<Self> {
        let mut counts = FxHashMap::default();
        for (s, &n) in &state.counts {
            counts.insert(s.parse::<RealScheme>()?.code(), n);
        }
        let h = Histogram { counts, ovals: state.ovals.clone(), total: state.total };
        if h.counts.values().sum::<u64>() != h.total || h.ovals.iter().sum::<u64>() != h.total {
            return Err(Error::Checkpoint("counts do not add up to the total".into()));
        }
        Ok(h)
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HistogramState {
    total: u64,
    counts: BTreeMap<String, u64>,
    ovals: Vec<u64>,
}

/// On-disk state of an interrupted exhaustive census.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub degree: u32,
    /// [`Triangulation::checksum`] of the triangulation being censused.
    pub checksum: String,
    /// First class index not yet evaluated.
    pub next_index: u64,
    histogram: HistogramState,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))
    }

    /// Writes through a temporary file and a rename, so an interrupted write
    /// never leaves a truncated checkpoint behind.
    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// How a census is run.
#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Worker threads; `0` uses the default pool.
    pub jobs: usize,
    /// Checkpoint file to resume from and write to.
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: u64,
    /// Stop after this many classes (the census is then partial).
    pub limit: Option<u64>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { jobs: 0, checkpoint: None, checkpoint_every: CHECKPOINT_EVERY, limit: None }
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn census_range(kernel: &Kernel, start: u64, end: u64) -> Result<Histogram> {
    let degree = kernel.degree();
    let chunks = (end - start).div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = start + c * CHUNK;
            let hi = (lo + CHUNK).min(end);
            let mut h = Histogram::new();
            for k in lo..hi {
                h.record(kernel.evaluate(index_to_bits(degree, k as u128))?);
            }
            Ok(h)
        })
        .try_reduce(Histogram::new, |a, b| Ok(a.merge(b)))
}

/// Evaluates every canonical sign class of `t` once.
pub fn exhaustive(t: &Triangulation, options: &CensusOptions) -> Result<Histogram> {
    let degree = t.degree();
    let count = class_count(degree);
    let count =
        u64::try_from(count).map_err(|_| Error::Invariant(format!("{count} classes are out of reach")))?;
    let checksum = t.checksum();
    let kernel = Kernel::new(&Surface::new(t)?);
    let (mut next, mut hist) = match &options.checkpoint {
        Some(path) if path.exists() => {
            let cp = Checkpoint::load(path)?;
            if cp.degree != degree || cp.checksum != checksum {
                return Err(Error::Checkpoint(format!(
                    "{} belongs to a different triangulation",
                    path.display()
                )));
            }
            let h = Histogram::from_state(&cp.histogram)?;
            if h.total != cp.next_index {
                return Err(Error::Checkpoint("total does not match the resume index".into()));
            }
            (cp.next_index, h)
        }
        _ => (0, Histogram::new()),
    };
    let end = options.limit.map_or(count, |l| l.min(count));
    let step = options.checkpoint_every.max(CHUNK);
    while next < end {
        let upto = (next + step).min(end);
        let part = with_pool(options.jobs, || census_range(&kernel, next, upto))??;
        hist = hist.merge(part);
        next = upto;
        if let Some(path) = &options.checkpoint {
            let cp = Checkpoint {
                degree,
                checksum: checksum.clone(),
                next_index: next,
                histogram: hist.to_state(degree)?,
            };
            cp.store(path)?;
        }
    }
    Ok(hist)
}

/// Uniform sampling of `n` classes with replacement.  Block `b` of
/// [`SAMPLE_BLOCK`] samples draws from stream `b` of a ChaCha generator
/// seeded with `seed`.
pub fn sampled(t: &Triangulation, n: u64, seed: u64, jobs: usize) -> Result<Histogram> {
    let degree = t.degree();
    let count = class_count(degree);
    let kernel = Kernel::new(&Surface::new(t)?);
    let blocks = n.div_ceil(SAMPLE_BLOCK);
    with_pool(jobs, || {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(b);
                let mut h = Histogram::new();
                let len = SAMPLE_BLOCK.min(n - b * SAMPLE_BLOCK);
                for _ in 0..len {
                    let k = rng.gen_range(0..count);
                    h.record(kernel.evaluate(index_to_bits(degree, k))?);
                }
                Ok(h)
            })
            .try_reduce(Histogram::new, |a, b| Ok(a.merge(b)))
    })?
}

/// Machine-readable summary of a census.
#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub degree: u32,
    pub triangulation: String,
    pub checksum: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub total: u64,
    pub mean_ovals: f64,
    pub mean_loops: f64,
    pub oval_distribution: Vec<u64>,
    pub schemes: Vec<SchemeCount>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeCount {
    pub scheme: String,
    pub count: u64,
}

impl CensusReport {
    pub fn new(t: &Triangulation, label: &str, mode: &str, seed: Option<u64>, h: &Histogram) -> Result<Self> {
        let d = t.degree();
        Ok(CensusReport {
            degree: d,
            triangulation: label.to_string(),
            checksum: t.checksum(),
            mode: mode.to_string(),
            seed,
            total: h.total(),
            mean_ovals: h.mean_ovals(),
            mean_loops: h.mean_loops(d),
            oval_distribution: h.oval_distribution().to_vec(),
            schemes: h
                .schemes(d)?
                .into_iter()
                .map(|(s, count)| SchemeCount { scheme: s.to_string(), count })
                .collect(),
        })
    }
}
