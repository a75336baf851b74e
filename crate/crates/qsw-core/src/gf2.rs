//! Sparse matrices over GF(2).
//!
//! Rows are stored as strictly increasing column lists. Elimination switches
//! to a bit-packed dense mirror when the column count is at most
//! [`DENSE_THRESHOLD`].

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, input_err, Result};

/// Column count up to which elimination runs on packed 64-bit words.
pub const DENSE_THRESHOLD: usize = 4096;

/// Maximum row weight and maximum column weight of a matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsityProfile {
    pub max_row_weight: usize,
    pub max_col_weight: usize,
}

impl SparsityProfile {
    /// True when the matrix is `(r, c)`-sparse.
    pub fn within(&self, r: usize, c: usize) -> bool {
        self.max_row_weight <= r && self.max_col_weight <= c
    }
}

/// Structured matrices used throughout the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Canonical {
    /// `I + C`: row `i` is `{i, i+1 mod n}`.
    CyclicHC,
    /// The cyclic matrix without its last row.
    FullRankHR,
    /// The cyclic shift with `e_i C = e_{i+1}`.
    ShiftC,
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseBitMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl SparseBitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            rows: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from row supports. Each row is sorted and duplicate
    /// indices collapse (set semantics).
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut rows = rows;
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if let Some(&c) = row.last() {
                if c >= n_cols {
                    return Err(input_err!("row {r} has column {c} but the matrix has {n_cols} columns"));
                }
            }
        }
        Ok(Self {
            n_rows: rows.len(),
            n_cols,
            rows,
        })
    }

    /// Builds a matrix from `(row, col)` entries; repeated entries cancel.
    pub fn from_entries(n_rows: usize, n_cols: usize, entries: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![Vec::new(); n_rows];
        for &(r, c) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(input_err!("entry ({r}, {c}) outside a {n_rows}x{n_cols} matrix"));
            }
            rows[r].push(c);
        }
        for row in &mut rows {
            *row = normalize_xor(core::mem::take(row));
        }
        Ok(Self { n_rows, n_cols, rows })
    }

    /// A `1 x n` matrix with the given support.
    pub fn row_vector(n: usize, support: &[usize]) -> Result<Self> {
        Self::from_rows(n, vec![support.to_vec()])
    }

    /// The all-ones `1 x n` vector.
    pub fn ones(n: usize) -> Self {
        Self {
            n_rows: 1,
            n_cols: n,
            rows: vec![(0..n).collect()],
        }
    }

    pub fn from_dense(n_cols: usize, dense: &[Vec<u8>]) -> Result<Self> {
        let mut rows = Vec::with_capacity(dense.len());
        for (r, d) in dense.iter().enumerate() {
            if d.len() != n_cols {
                return Err(dim_err!("dense row {r} has length {} instead of {n_cols}", d.len()));
            }
            rows.push(d.iter().enumerate().filter(|(_, &b)| b & 1 == 1).map(|(c, _)| c).collect());
        }
        Ok(Self {
            n_rows: dense.len(),
            n_cols,
            rows,
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0u8; self.n_cols];
                for &c in row {
                    d[c] = 1;
                }
                d
            })
            .collect()
    }

    pub fn canonical(kind: Canonical, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(input_err!("canonical matrices need n >= 1"));
        }
        let rows = match kind {
            Canonical::Identity => return Ok(Self::identity(n)),
            Canonical::ShiftC => (0..n).map(|i| vec![(i + 1) % n]).collect(),
            Canonical::CyclicHC => (0..n).map(|i| normalize_xor(vec![i, (i + 1) % n])).collect(),
            Canonical::FullRankHR => {
                if n < 2 {
                    return Err(input_err!("the full-rank repetition matrix needs n >= 2"));
                }
                (0..n - 1).map(|i| vec![i, i + 1]).collect()
            }
        };
        Self::from_rows(n, rows)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[usize]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub fn into_rows(self) -> Vec<Vec<usize>> {
        self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Sorted `(row, col)` entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&c| (r, c)))
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.n_cols];
        for row in &self.rows {
            for &c in row {
                w[c] += 1;
            }
        }
        w
    }

    pub fn profile(&self) -> SparsityProfile {
        SparsityProfile {
            max_row_weight: self.rows.iter().map(Vec::len).max().unwrap_or(0),
            max_col_weight: self.col_weights().into_iter().max().unwrap_or(0),
        }
    }

    pub fn push_row(&mut self, row: Vec<usize>) -> Result<()> {
        let m = Self::from_rows(self.n_cols, vec![row])?;
        self.rows.extend(m.rows);
        self.n_rows += 1;
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.n_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                rows[c].push(r);
            }
        }
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    pub fn multiply(&self, b: &Self) -> Result<Self> {
        if self.n_cols != b.n_rows {
            return Err(dim_err!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows,
                self.n_cols,
                b.n_rows,
                b.n_cols
            ));
        }
        let mut acc = vec![false; b.n_cols];
        let mut touched = Vec::new();
        let mut rows = Vec::with_capacity(self.n_rows);
        for row in &self.rows {
            for &k in row {
                for &c in &b.rows[k] {
                    if !acc[c] {
                        touched.push(c);
                    }
                    acc[c] = !acc[c];
                }
            }
            let mut out: Vec<usize> = touched.iter().copied().filter(|&c| acc[c]).collect();
            for &c in &touched {
                acc[c] = false;
            }
            touched.clear();
            out.sort_unstable();
            out.dedup();
            rows.push(out);
        }
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: b.n_cols,
            rows,
        })
    }

    pub fn add(&self, b: &Self) -> Result<Self> {
        if self.n_rows != b.n_rows || self.n_cols != b.n_cols {
            return Err(dim_err!(
                "cannot add {}x{} and {}x{}",
                self.n_rows,
                self.n_cols,
                b.n_rows,
                b.n_cols
            ));
        }
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows: self.rows.iter().zip(&b.rows).map(|(x, y)| sym_diff(x, y)).collect(),
        })
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&Self]) -> Result<Self> {
        let n_cols = parts.first().map_or(0, |p| p.n_cols);
        let mut rows = Vec::new();
        for p in parts {
            if p.n_cols != n_cols {
                return Err(dim_err!("vstack of {} and {} columns", n_cols, p.n_cols));
            }
            rows.extend(p.rows.iter().cloned());
        }
        Ok(Self {
            n_rows: rows.len(),
            n_cols,
            rows,
        })
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(parts: &[&Self]) -> Result<Self> {
        let n_rows = parts.first().map_or(0, |p| p.n_rows);
        let mut rows = vec![Vec::new(); n_rows];
        let mut offset = 0;
        for p in parts {
            if p.n_rows != n_rows {
                return Err(dim_err!("hstack of {} and {} rows", n_rows, p.n_rows));
            }
            for (dst, src) in rows.iter_mut().zip(&p.rows) {
                dst.extend(src.iter().map(|&c| c + offset));
            }
            offset += p.n_cols;
        }
        Ok(Self {
            n_rows,
            n_cols: offset,
            rows,
        })
    }

    /// Keeps the listed columns, renumbered in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        let mut map = vec![usize::MAX; self.n_cols];
        for (new, &old) in cols.iter().enumerate() {
            if old >= self.n_cols {
                return Err(input_err!("column {old} out of range {}", self.n_cols));
            }
            map[old] = new;
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut r: Vec<usize> = row.iter().map(|&c| map[c]).filter(|&c| c != usize::MAX).collect();
                r.sort_unstable();
                r
            })
            .collect();
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: cols.len(),
            rows,
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            n_rows: rows.len(),
            n_cols: self.n_cols,
            rows: rows.iter().map(|&r| self.rows[r].clone()).collect(),
        }
    }

    /// First entry where the two matrices differ, in row-major order.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Some((self.n_rows.min(other.n_rows), self.n_cols.min(other.n_cols)));
        }
        for (r, (a, b)) in self.rows.iter().zip(&other.rows).enumerate() {
            if a != b {
                return sym_diff(a, b).first().map(|&c| (r, c));
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        RowSpace::new(self).rank()
    }

    /// Basis of the right nullspace, one `1 x n_cols` vector per free column
    /// in increasing column order.
    pub fn nullspace_basis(&self) -> Vec<Self> {
        self.nullspace_matrix()
            .rows
            .into_iter()
            .map(|r| Self {
                n_rows: 1,
                n_cols: self.n_cols,
                rows: vec![r],
            })
            .collect()
    }

    /// The nullspace basis stacked as rows of one matrix.
    pub fn nullspace_matrix(&self) -> Self {
        let (rref, pivots) = rref(self);
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        // Column lists of the reduced rows, restricted to free columns.
        let mut by_free: Vec<Vec<usize>> = vec![Vec::new(); self.n_cols];
        for (i, row) in rref.iter().enumerate() {
            for &c in row {
                if !is_pivot[c] {
                    by_free[c].push(pivots[i]);
                }
            }
        }
        let mut rows = Vec::new();
        for f in 0..self.n_cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = core::mem::take(&mut by_free[f]);
            v.push(f);
            v.sort_unstable();
            rows.push(v);
        }
        Self {
            n_rows: rows.len(),
            n_cols: self.n_cols,
            rows,
        }
    }

    pub fn in_row_space(&self, v: &Self) -> Result<bool> {
        if v.n_cols != self.n_cols || v.n_rows != 1 {
            return Err(dim_err!(
                "vector of shape {}x{} tested against {} columns",
                v.n_rows,
                v.n_cols,
                self.n_cols
            ));
        }
        Ok(RowSpace::new(self).contains(&v.rows[0]))
    }

    /// Indices of rows summing to `v`, or `None` when `v` is outside the
    /// row space.
    pub fn express_in_rows(&self, v: &[usize]) -> Option<Vec<usize>> {
        let n = self.n_cols;
        let words = words_for(n + self.n_rows);
        let mut pivots: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut x = pack(row, words);
            x[(n + i) / 64] ^= 1 << ((n + i) % 64);
            while let Some(lead) = lowest_bit(&x).filter(|&l| l < n) {
                match pivots.get(&lead) {
                    Some(p) => xor_into(&mut x, p),
                    None => {
                        pivots.insert(lead, x);
                        break;
                    }
                }
            }
        }
        let mut x = pack(v, words);
        while let Some(lead) = lowest_bit(&x).filter(|&l| l < n) {
            xor_into(&mut x, pivots.get(&lead)?);
        }
        Some(unpack(&x).into_iter().map(|c| c - n).collect())
    }

    /// True when all rows commute as Paulis under the `[X | Z]` column split.
    pub fn symplectic_commutes(&self) -> Result<bool> {
        if !self.n_cols.is_multiple_of(2) {
            return Err(input_err!("symplectic matrix needs an even column count, got {}", self.n_cols));
        }
        let n = self.n_cols / 2;
        let swapped = Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows: self
                .rows
                .iter()
                .map(|row| {
                    let mut r: Vec<usize> = row.iter().map(|&c| if c < n { c + n } else { c - n }).collect();
                    r.sort_unstable();
                    r
                })
                .collect(),
        };
        Ok(self.multiply(&swapped.transpose())?.is_zero())
    }
}

/// Symmetric difference of two sorted index lists.
pub fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Size of the intersection of two sorted index lists.
pub fn overlap(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Sorts and cancels repeated indices in pairs.
pub fn normalize_xor(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for c in v {
        if out.last() == Some(&c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn pack(row: &[usize], words: usize) -> Vec<u64> {
    let mut w = vec![0u64; words];
    for &c in row {
        w[c / 64] ^= 1 << (c % 64);
    }
    w
}

fn unpack(w: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &word) in w.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            let b = x.trailing_zeros() as usize;
            out.push(i * 64 + b);
            x &= x - 1;
        }
    }
    out
}

fn lowest_bit(w: &[u64]) -> Option<usize> {
    w.iter()
        .enumerate()
        .find(|(_, &x)| x != 0)
        .map(|(i, &x)| i * 64 + x.trailing_zeros() as usize)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Reduced row echelon form: nonzero reduced rows and their pivot columns.
/// Pivots are taken column by column, lowest column first, using the first
/// remaining row with a nonzero entry.
fn rref(a: &SparseBitMatrix) -> (Vec<Vec<usize>>, Vec<usize>) {
    if a.n_cols <= DENSE_THRESHOLD {
        let words = words_for(a.n_cols);
        let mut m: Vec<Vec<u64>> = a.rows.iter().map(|r| pack(r, words)).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..a.n_cols {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..m.len()).find(|&r| m[r][w] & bit != 0) else {
                continue;
            };
            m.swap(rank, p);
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[w] & bit != 0 {
                    xor_into(row, &pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        m.truncate(rank);
        (m.iter().map(|w| unpack(w)).collect(), pivots)
    } else {
        let space = RowSpace::new(a);
        let mut basis: BTreeMap<usize, Vec<usize>> = match space {
            RowSpace::Sparse { pivots, .. } => pivots,
            RowSpace::Dense { .. } => unreachable!(),
        };
        let keys: Vec<usize> = basis.keys().rev().copied().collect();
        for &p in &keys {
            let pivot_row = basis[&p].clone();
            for (_, row) in basis.range_mut(..p) {
                if row.binary_search(&p).is_ok() {
                    *row = sym_diff(row, &pivot_row);
                }
            }
        }
        let pivots = basis.keys().copied().collect();
        (basis.into_values().collect(), pivots)
    }
}

/// Incrementally built echelon basis for rank and membership queries.
#[derive(Clone, Debug)]
pub enum RowSpace {
    Dense {
        n_cols: usize,
        pivots: BTreeMap<usize, Vec<u64>>,
    },
    Sparse {
        n_cols: usize,
        pivots: BTreeMap<usize, Vec<usize>>,
    },
}

impl RowSpace {
    pub fn empty(n_cols: usize) -> Self {
        if n_cols <= DENSE_THRESHOLD {
            Self::Dense {
                n_cols,
                pivots: BTreeMap::new(),
            }
        } else {
            Self::Sparse {
                n_cols,
                pivots: BTreeMap::new(),
            }
        }
    }

    pub fn new(a: &SparseBitMatrix) -> Self {
        let mut s = Self::empty(a.n_cols);
        for row in &a.rows {
            s.insert(row);
        }
        s
    }

    pub fn n_cols(&self) -> usize {
        match self {
            Self::Dense { n_cols, .. } | Self::Sparse { n_cols, .. } => *n_cols,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Self::Dense { pivots, .. } => pivots.len(),
            Self::Sparse { pivots, .. } => pivots.len(),
        }
    }

    /// Adds a row; returns true when it was independent of the current span.
    pub fn insert(&mut self, row: &[usize]) -> bool {
        match self {
            Self::Dense { n_cols, pivots } => {
                let mut v = pack(row, words_for(*n_cols));
                while let Some(lead) = lowest_bit(&v) {
                    match pivots.get(&lead) {
                        Some(p) => xor_into(&mut v, p),
                        None => {
                            pivots.insert(lead, v);
                            return true;
                        }
                    }
                }
                false
            }
            Self::Sparse { pivots, .. } => {
                let mut v = row.to_vec();
                while let Some(&lead) = v.first() {
                    match pivots.get(&lead) {
                        Some(p) => v = sym_diff(&v, p),
                        None => {
                            pivots.insert(lead, v);
                            return true;
                        }
                    }
                }
                false
            }
        }
    }

    /// Reduces `row` against the basis; the result is empty iff `row` lies
    /// in the span.
    pub fn reduce(&self, row: &[usize]) -> Vec<usize> {
        match self {
            Self::Dense { n_cols, pivots } => {
                let mut v = pack(row, words_for(*n_cols));
                let mut from = 0;
                loop {
                    let lead = v
                        .iter()
                        .enumerate()
                        .skip(from / 64)
                        .find_map(|(i, &x)| {
                            let masked = if i == from / 64 { x & (!0u64 << (from % 64)) } else { x };
                            (masked != 0).then(|| i * 64 + masked.trailing_zeros() as usize)
                        });
                    let Some(lead) = lead else { break };
                    if let Some(p) = pivots.get(&lead) {
                        xor_into(&mut v, p);
                    }
                    from = lead + 1;
                }
                unpack(&v)
            }
            Self::Sparse { pivots, .. } => {
                let mut v = row.to_vec();
                let mut i = 0;
                while i < v.len() {
                    if let Some(p) = pivots.get(&v[i]) {
                        v = sym_diff(&v, p);
                    } else {
                        i += 1;
                    }
                }
                v
            }
        }
    }

    pub fn contains(&self, row: &[usize]) -> bool {
        self.reduce(row).is_empty()
    }
}
