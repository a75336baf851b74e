//! Thread-pool versions of the brute-force verifiers.
//!
//! Chunks are scanned independently and reduced with the same tie-breaks
//! as the sequential scans, so results do not depend on the thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

use qsw_core::expansion::{self, Certification, ChunkBest, ExpansionCertificate, ExpansionQuery, Scanner};
use qsw_core::stabilizer::{self, logical_scanner, sectors, DistanceMode, DistanceResult, ScanHit, WeightScanner};
use qsw_core::surgery::{DeformedCode, DistanceMethod, DistanceReport};
use qsw_core::{Error, Graph, StabilizerCode};
use rayon::prelude::*;

/// Environment variable overriding the brute-force caps.
pub const CAP_ENV: &str = "QSW_BRUTEFORCE_CAP";

/// Vertex cap for expansion scans and `log2` of the distance enumeration
/// budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub expansion_vertices: usize,
    pub distance_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            expansion_vertices: expansion::DEFAULT_BRUTEFORCE_CAP,
            distance_budget: stabilizer::DEFAULT_DISTANCE_BUDGET,
        }
    }
}

impl Caps {
    /// Defaults, or a single bit count from the environment applied to both.
    pub fn from_env() -> anyhow::Result<Self> {
        match std::env::var(CAP_ENV) {
            Err(_) => Ok(Self::default()),
            Ok(v) => {
                let bits: usize = v
                    .trim()
                    .parse()
                    .map_err(|_| anyhow::anyhow!("{CAP_ENV} must be an integer, found `{v}`"))?;
                Ok(Self::from_bits(bits))
            }
        }
    }

    pub fn from_bits(bits: usize) -> Self {
        let bits = bits.min(expansion::MAX_BRUTEFORCE_CAP);
        Self {
            expansion_vertices: bits,
            distance_budget: 1u64 << bits,
        }
    }
}

/// Runs `f` on a pool of `threads` workers; zero means all cores.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(f))
}

pub fn relative_expansion(g: &Graph, q: &ExpansionQuery, cap: usize) -> qsw_core::Result<ExpansionCertificate> {
    let s = Scanner::new(g, q, cap)?;
    let best = (0..s.n_chunks())
        .into_par_iter()
        .filter_map(|c| s.scan_min(c))
        .reduce_with(ChunkBest::better);
    Ok(Scanner::certificate(best))
}

/// Reports the violation of the earliest chunk, as the sequential scan does.
pub fn certify_at_least(g: &Graph, q: &ExpansionQuery, cap: usize) -> qsw_core::Result<Certification> {
    let s = Scanner::new(g, q, cap)?;
    let v = (0..s.n_chunks())
        .into_par_iter()
        .find_map_first(|c| s.scan_violation(c, q.threshold));
    Ok(Scanner::certification(v))
}

/// Lightest admissible vector. Workers share the best weight found so far
/// and keep only hits at most that heavy, which leaves the reduction exact.
pub fn lightest(s: &WeightScanner) -> Option<ScanHit> {
    let best = AtomicUsize::new(usize::MAX);
    (0..s.n_chunks())
        .into_par_iter()
        .filter_map(|c| {
            let bound = best.load(Ordering::Relaxed).saturating_add(1);
            let hit = s.scan_chunk(c, bound)?;
            best.fetch_min(hit.weight, Ordering::Relaxed);
            Some(hit)
        })
        .reduce_with(ScanHit::better)
}

/// Exhaustive distance over all sectors, or the core weight-bounded search.
pub fn distance(code: &StabilizerCode, mode: DistanceMode) -> qsw_core::Result<DistanceResult> {
    let DistanceMode::Exhaustive { budget } = mode else {
        return stabilizer::distance(code, mode);
    };
    let needed = stabilizer::exhaustive_cost(code);
    if needed > budget {
        return Err(Error::OverCap {
            what: "exhaustive distance enumeration",
            needed,
            cap: budget,
        });
    }
    let best = sectors(code)
        .into_iter()
        .filter_map(|s| lightest(&logical_scanner(code, s)))
        .reduce(|a, b| if b.weight < a.weight { b } else { a });
    Ok(match best {
        Some(h) => DistanceResult::Exact {
            distance: h.weight,
            witness: h.op,
        },
        None => DistanceResult::NoLogicals,
    })
}

/// Deformed distance against the base distance; exhaustive within budget,
/// otherwise a search below the base distance.
pub fn verify_distance(dc: &DeformedCode, budget: u64, base_distance: Option<usize>) -> qsw_core::Result<DistanceReport> {
    let base_distance = match base_distance {
        Some(d) => d,
        None => distance(&dc.base, DistanceMode::Exhaustive { budget })?.lower_bound(),
    };
    let (method, deformed) = match distance(&dc.assembled, DistanceMode::Exhaustive { budget }) {
        Ok(r) => (DistanceMethod::Exhaustive, r),
        Err(Error::OverCap { .. }) => (
            DistanceMethod::WeightBounded,
            distance(
                &dc.assembled,
                DistanceMode::WeightBounded {
                    max_weight: base_distance.saturating_sub(1),
                },
            )?,
        ),
        Err(e) => return Err(e),
    };
    Ok(DistanceReport {
        base_distance,
        method,
        passes: deformed.lower_bound() >= base_distance,
        deformed,
    })
}
