//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use qsw_core::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn qsw_bin() -> &'static str {
    env!("CARGO_BIN_EXE_qsw")
}

/// Runs the binary with the given arguments and an optional cap override.
pub fn qsw(args: &[&str], cap: Option<&str>) -> Output {
    let mut cmd = Command::new(qsw_bin());
    cmd.args(args).env_remove("QSW_BRUTEFORCE_CAP");
    if let Some(c) = cap {
        cmd.env("QSW_BRUTEFORCE_CAP", c);
    }
    cmd.output().expect("spawn qsw")
}

pub fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

pub fn write(path: &Path, text: &str) {
    std::fs::write(path, text).expect("write fixture");
}

/// Connected multigraph: a random tree plus extra random non-loop edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
    assert!(m + 1 >= n);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
    Graph::new(n, edges).expect("valid graph")
}

/// Dense GF(2) matrix as byte rows.
pub type Dense = Vec<Vec<u8>>;

pub fn dense_random(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Dense {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_bool(density) as u8).collect())
        .collect()
}

pub fn dense_mul(a: &Dense, b: &Dense, inner: usize, cols: usize) -> Dense {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0u8, |acc, k| acc ^ (row[k] & b[k][j])))
                .collect()
        })
        .collect()
}

/// Rank by textbook Gaussian elimination on a copy.
pub fn dense_rank(a: &Dense, cols: usize) -> usize {
    let mut m = a.clone();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] == 1 {
                for k in 0..cols {
                    m[r][k] ^= m[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn dense_from_rows(rows: &[Vec<usize>], cols: usize) -> Dense {
    rows.iter()
        .map(|r| {
            let mut d = vec![0u8; cols];
            for &c in r {
                d[c] ^= 1;
            }
            d
        })
        .collect()
}

/// Whether `row` lies in the row space of `a`.
pub fn dense_in_rowspace(a: &Dense, row: &[u8], cols: usize) -> bool {
    let mut ext = a.clone();
    ext.push(row.to_vec());
    dense_rank(&ext, cols) == dense_rank(a, cols)
}

/// All subsets of the columns of `a` whose XOR is zero; `a` is small.
pub fn dense_kernel_enumerate(a: &Dense, cols: usize) -> Vec<Vec<u8>> {
    assert!(cols <= 20);
    let mut out = Vec::new();
    for mask in 0u32..(1 << cols) {
        let ok = a
            .iter()
            .all(|row| (0..cols).filter(|&c| mask >> c & 1 == 1).fold(0u8, |acc, c| acc ^ row[c]) == 0);
        if ok {
            out.push((0..cols).map(|c| (mask >> c & 1) as u8).collect());
        }
    }
    out
}

/// Relative expansion straight from its definition: minimum over vertex
/// subsets `S` of `|cut(S)| / min(t, |S ∩ U|, |U \ S|)`, skipping zero
/// denominators. Returns `(numerator, denominator)` in lowest terms.
pub fn expansion_oracle(g: &Graph, u: &[usize], t: usize) -> Option<(u64, u64)> {
    let n = g.n_vertices();
    let mut best: Option<(u64, u64)> = None;
    for mask in 0u64..(1u64 << n) {
        let inside = |v: usize| mask >> v & 1 == 1;
        let cut = g.edges().iter().filter(|&&(a, b)| inside(a) != inside(b)).count() as u64;
        let k = u.iter().filter(|&&v| inside(v)).count();
        let den = t.min(k).min(u.len() - k) as u64;
        if den == 0 {
            continue;
        }
        best = Some(match best {
            Some((bn, bd)) if bn * den <= cut * bd => (bn, bd),
            _ => (cut, den),
        });
    }
    best.map(|(a, b)| {
        let g = gcd(a, b);
        (a / g, b / g)
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact in-circle sign for counter-clockwise `a, b, c`, positive when `d`
/// is strictly inside.
pub fn incircle_oracle(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> i128 {
    let row = |p: (i64, i64)| {
        let (x, y) = ((p.0 - d.0) as i128, (p.1 - d.1) as i128);
        (x, y, x * x + y * y)
    };
    let (ax, ay, al) = row(a);
    let (bx, by, bl) = row(b);
    let (cx, cy, cl) = row(c);
    ax * (by * cl - bl * cy) - ay * (bx * cl - bl * cx) + al * (bx * cy - by * cx)
}
