//! Exact relative expansion by subset enumeration, and the two boosting
//! strategies (random edge insertion and thickening).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input_err, Error, Result};
use crate::graph::{thicken, Graph, Thickened};

/// Default vertex-count limit for subset enumeration.
pub const DEFAULT_BRUTEFORCE_CAP: usize = 24;

/// Hard limit imposed by the 64-bit subset masks.
pub const MAX_BRUTEFORCE_CAP: usize = 62;

/// Value of a relative expansion. `Unbounded` means no subset had a
/// positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Beta {
    Finite(Ratio<u64>),
    Unbounded,
}

impl Beta {
    pub fn at_least(&self, r: Ratio<u64>) -> bool {
        match self {
            Beta::Finite(v) => *v >= r,
            Beta::Unbounded => true,
        }
    }

    pub fn finite(&self) -> Option<Ratio<u64>> {
        match self {
            Beta::Finite(v) => Some(*v),
            Beta::Unbounded => None,
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Finite(v) => write!(f, "{v}"),
            Beta::Unbounded => f.write_str("inf"),
        }
    }
}

/// Port set `U`, cut-off `t` and the threshold used by certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionQuery {
    pub subset: Vec<usize>,
    pub t: usize,
    pub threshold: Ratio<u64>,
}

impl ExpansionQuery {
    pub fn new(subset: Vec<usize>, t: usize) -> Self {
        Self {
            subset,
            t,
            threshold: Ratio::from_integer(1),
        }
    }

    /// The Cheeger-constant query `U = V`, `t = n`.
    pub fn cheeger(n: usize) -> Self {
        Self::new((0..n).collect(), n)
    }

    pub fn with_threshold(mut self, threshold: Ratio<u64>) -> Self {
        self.threshold = threshold;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionCertificate {
    pub value: Beta,
    /// Minimizing vertex subset, sorted; the lexicographically smallest on ties.
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    pub holds: bool,
    /// First violating subset in enumeration order.
    pub counterexample: Option<Vec<usize>>,
}

/// Best subset found in one enumeration chunk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkBest {
    pub cut: u64,
    pub den: u64,
    pub mask: u64,
}

impl ChunkBest {
    /// Deterministic minimum: smaller ratio, then lexicographically smaller
    /// sorted vertex list.
    pub fn better(self, other: Self) -> Self {
        let lhs = self.cut as u128 * other.den as u128;
        let rhs = other.cut as u128 * self.den as u128;
        match lhs.cmp(&rhs) {
            core::cmp::Ordering::Less => self,
            core::cmp::Ordering::Greater => other,
            core::cmp::Ordering::Equal => {
                if lex_less(other.mask, self.mask) {
                    other
                } else {
                    self
                }
            }
        }
    }
}

/// Lexicographic order of the sorted vertex lists encoded by two masks.
pub fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let x = (a ^ b).trailing_zeros();
    let above = |m: u64| x < 63 && (m >> (x + 1)) != 0;
    if a >> x & 1 == 1 {
        above(b)
    } else {
        !above(a)
    }
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Subset enumerator split into independent chunks by high-order bits.
#[derive(Clone, Debug)]
pub struct Scanner {
    n: usize,
    adj: Vec<Vec<usize>>,
    in_u: Vec<bool>,
    u_size: u64,
    t: u64,
    high_bits: usize,
}

impl Scanner {
    pub fn new(g: &Graph, q: &ExpansionQuery, cap: usize) -> Result<Self> {
        let n = g.n_vertices();
        let cap = cap.min(MAX_BRUTEFORCE_CAP);
        if n > cap {
            return Err(Error::OverCap {
                what: "subset enumeration over vertices",
                needed: n as u64,
                cap: cap as u64,
            });
        }
        if q.subset.is_empty() {
            return Err(input_err!("the vertex subset U is empty"));
        }
        if q.t == 0 {
            return Err(input_err!("t must be at least 1"));
        }
        let mut in_u = vec![false; n];
        for &v in &q.subset {
            if v >= n {
                return Err(input_err!("U contains vertex {v} outside 0..{n}"));
            }
            if in_u[v] {
                return Err(input_err!("U lists vertex {v} twice"));
            }
            in_u[v] = true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in g.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self {
            n,
            adj,
            in_u,
            u_size: q.subset.len() as u64,
            t: q.t as u64,
            high_bits: n.min(10),
        })
    }

    pub fn n_chunks(&self) -> u64 {
        1 << self.high_bits
    }

    fn den(&self, inside_u: u64) -> u64 {
        self.t.min(inside_u).min(self.u_size - inside_u)
    }

    /// Walks the chunk in Gray-code order, calling `visit(cut, den, mask)`
    /// for every subset with a positive denominator until it returns false.
    fn walk(&self, chunk: u64, mut visit: impl FnMut(u64, u64, u64) -> bool) {
        let low = self.n - self.high_bits;
        let mut mask = chunk << low;
        let mut cut = 0u64;
        let mut inside_u = 0u64;
        for v in 0..self.n {
            if mask >> v & 1 == 1 {
                inside_u += self.in_u[v] as u64;
                cut += self.adj[v].iter().filter(|&&w| mask >> w & 1 == 0).count() as u64;
            }
        }
        let total: u64 = 1 << low;
        for k in 0..total {
            if k > 0 {
                let v = k.trailing_zeros() as usize;
                let inner = self.adj[v].iter().filter(|&&w| mask >> w & 1 == 1).count() as u64;
                let outer = self.adj[v].len() as u64 - inner;
                if mask >> v & 1 == 1 {
                    cut = cut + inner - outer;
                    inside_u -= self.in_u[v] as u64;
                } else {
                    cut = cut + outer - inner;
                    inside_u += self.in_u[v] as u64;
                }
                mask ^= 1 << v;
            }
            let den = self.den(inside_u);
            if den > 0 && !visit(cut, den, mask) {
                return;
            }
        }
    }

    /// Minimum over one chunk.
    pub fn scan_min(&self, chunk: u64) -> Option<ChunkBest> {
        let mut best: Option<ChunkBest> = None;
        self.walk(chunk, |cut, den, mask| {
            let cand = ChunkBest { cut, den, mask };
            best = Some(match best {
                Some(b) => b.better(cand),
                None => cand,
            });
            true
        });
        best
    }

    /// First subset in the chunk whose ratio falls below `threshold`.
    pub fn scan_violation(&self, chunk: u64, threshold: Ratio<u64>) -> Option<u64> {
        let (num, den_t) = (*threshold.numer() as u128, *threshold.denom() as u128);
        let mut found = None;
        self.walk(chunk, |cut, den, mask| {
            if (cut as u128) * den_t < num * den as u128 {
                found = Some(mask);
                false
            } else {
                true
            }
        });
        found
    }

    pub fn certificate(best: Option<ChunkBest>) -> ExpansionCertificate {
        match best {
            Some(b) => ExpansionCertificate {
                value: Beta::Finite(Ratio::new(b.cut, b.den)),
                witness: mask_to_vec(b.mask),
            },
            None => ExpansionCertificate {
                value: Beta::Unbounded,
                witness: Vec::new(),
            },
        }
    }

    pub fn certification(violation: Option<u64>) -> Certification {
        Certification {
            holds: violation.is_none(),
            counterexample: violation.map(mask_to_vec),
        }
    }
}

/// Exact `β_t(g, U)` with a reproducible witness.
pub fn relative_expansion(g: &Graph, q: &ExpansionQuery, cap: usize) -> Result<ExpansionCertificate> {
    let s = Scanner::new(g, q, cap)?;
    let best = (0..s.n_chunks()).filter_map(|c| s.scan_min(c)).reduce(ChunkBest::better);
    Ok(Scanner::certificate(best))
}

/// Decides `β_t(g, U) >= threshold`, stopping at the first violation.
pub fn certify_at_least(g: &Graph, q: &ExpansionQuery, cap: usize) -> Result<Certification> {
    let s = Scanner::new(g, q, cap)?;
    let v = (0..s.n_chunks()).find_map(|c| s.scan_violation(c, q.threshold));
    Ok(Scanner::certification(v))
}

/// Ratio for one vertex subset, `Unbounded` when its denominator is zero.
pub fn evaluate_subset(g: &Graph, subset: &[usize], t: usize, v: &[usize]) -> Result<Beta> {
    let n = g.n_vertices();
    let mut inside = vec![false; n];
    for &x in v {
        if x >= n {
            return Err(input_err!("vertex {x} outside 0..{n}"));
        }
        inside[x] = true;
    }
    let cut = g.edges().iter().filter(|&&(a, b)| inside[a] != inside[b]).count() as u64;
    let in_u = subset.iter().filter(|&&x| x < n && inside[x]).count() as u64;
    let den = (t as u64).min(in_u).min(subset.len() as u64 - in_u);
    Ok(if den == 0 {
        Beta::Unbounded
    } else {
        Beta::Finite(Ratio::new(cut, den))
    })
}

/// Adds seeded random edges across the current worst cut until
/// `β_t(g, U) >= 1`, never exceeding `degree_cap` at any vertex.
pub fn boost_by_edges(
    g: &Graph,
    subset: &[usize],
    t: usize,
    degree_cap: usize,
    seed: u64,
    cap: usize,
) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = g.clone();
    let q = ExpansionQuery::new(subset.to_vec(), t);
    loop {
        let cert = relative_expansion(&h, &q, cap)?;
        if cert.value.at_least(Ratio::from_integer(1)) {
            return Ok(h);
        }
        let deg = h.degrees();
        let mut inside = vec![false; h.n_vertices()];
        for &v in &cert.witness {
            inside[v] = true;
        }
        let cand_in: Vec<usize> = (0..h.n_vertices()).filter(|&v| inside[v] && deg[v] < degree_cap).collect();
        let cand_out: Vec<usize> = (0..h.n_vertices()).filter(|&v| !inside[v] && deg[v] < degree_cap).collect();
        if cand_in.is_empty() || cand_out.is_empty() {
            return Err(Error::Infeasible(format!(
                "degree cap {degree_cap} blocks every edge across the worst cut; best expansion reached {}",
                cert.value
            )));
        }
        let u = cand_in[rng.gen_range(0..cand_in.len())];
        let v = cand_out[rng.gen_range(0..cand_out.len())];
        h.add_edge(u, v)?;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickeningBoost {
    pub thickened: Thickened,
    /// Expansion of the input graph.
    pub base_value: Beta,
    /// `U x {l}` for every layer `l`.
    pub ports: Vec<Vec<usize>>,
    /// `Some(all layers certified)` when the thickened graph fits under the
    /// cap, `None` when certification was skipped.
    pub certified: Option<bool>,
}

/// Thickens `L = ceil(1 / β_t(g, U))` times and certifies every layer port.
pub fn boost_by_thickening(g: &Graph, subset: &[usize], t: usize, cap: usize) -> Result<ThickeningBoost> {
    let q = ExpansionQuery::new(subset.to_vec(), t);
    let base = relative_expansion(g, &q, cap)?;
    let layers = match base.value {
        Beta::Unbounded => 1,
        Beta::Finite(v) if *v.numer() == 0 => {
            return Err(Error::Infeasible(format!(
                "expansion is zero (cut {:?}); thickening cannot help",
                base.witness
            )))
        }
        Beta::Finite(v) => v.denom().div_ceil(*v.numer()).max(1) as usize,
    };
    let th = thicken(g, layers)?;
    let ports: Vec<Vec<usize>> = (0..layers)
        .map(|l| subset.iter().map(|&v| th.vertex(v, l)).collect())
        .collect();
    let certified = if th.graph.n_vertices() <= cap.min(MAX_BRUTEFORCE_CAP) {
        let mut all = true;
        for p in &ports {
            all &= certify_at_least(&th.graph, &ExpansionQuery::new(p.clone(), t), cap)?.holds;
        }
        Some(all)
    } else {
        None
    };
    Ok(ThickeningBoost {
        thickened: th,
        base_value: base.value,
        ports,
        certified,
    })
}
