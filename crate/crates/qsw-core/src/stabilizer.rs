//! Stabilizer and CSS codes in symplectic form, exhaustive distance, and
//! the support-lemma utilities for irreducible Z logicals.
//!
//! Phases are ignored everywhere: operators are tracked up to sign.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, Error, Result};
use crate::gf2::{overlap, sym_diff, RowSpace, SparseBitMatrix};

/// Enumeration budget for exhaustive distance computations.
pub const DEFAULT_DISTANCE_BUDGET: u64 = 1 << 26;

/// Sign-free Pauli operator `X(x) Z(z)` on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    n: usize,
    x: Vec<usize>,
    z: Vec<usize>,
}

impl PauliOperator {
    pub fn new(n: usize, x: &[usize], z: &[usize]) -> Result<Self> {
        let norm = |v: &[usize]| -> Result<Vec<usize>> {
            let mut v = v.to_vec();
            v.sort_unstable();
            v.dedup();
            match v.last() {
                Some(&q) if q >= n => Err(input_err!("qubit {q} outside 0..{n}")),
                _ => Ok(v),
            }
        };
        Ok(Self {
            n,
            x: norm(x)?,
            z: norm(z)?,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: Vec::new(),
            z: Vec::new(),
        }
    }

    pub fn x_type(n: usize, support: &[usize]) -> Result<Self> {
        Self::new(n, support, &[])
    }

    pub fn z_type(n: usize, support: &[usize]) -> Result<Self> {
        Self::new(n, &[], support)
    }

    /// Operator from a row over the `[X | Z]` columns.
    pub fn from_symplectic(n: usize, row: &[usize]) -> Result<Self> {
        let x: Vec<usize> = row.iter().copied().filter(|&c| c < n).collect();
        let z: Vec<usize> = row.iter().copied().filter(|&c| c >= n).map(|c| c - n).collect();
        Self::new(n, &x, &z)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_part(&self) -> &[usize] {
        &self.x
    }

    pub fn z_part(&self) -> &[usize] {
        &self.z
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s = self.x.clone();
        s.extend_from_slice(&self.z);
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn weight(&self) -> usize {
        self.x.len() + self.z.len() - overlap(&self.x, &self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_empty() && self.z.is_empty()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_x_type(&self) -> bool {
        self.z.is_empty()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        (overlap(&self.x, &other.z) + overlap(&self.z, &other.x)).is_multiple_of(2)
    }

    /// Product up to phase.
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            x: sym_diff(&self.x, &other.x),
            z: sym_diff(&self.z, &other.z),
        }
    }

    pub fn symplectic_row(&self) -> Vec<usize> {
        let mut r = self.x.clone();
        r.extend(self.z.iter().map(|&q| q + self.n));
        r
    }

    /// Re-indexes qubits through `map` into an `n`-qubit space.
    pub fn relabel(&self, n: usize, map: impl Fn(usize) -> usize) -> Result<Self> {
        let x: Vec<usize> = self.x.iter().map(|&q| map(q)).collect();
        let z: Vec<usize> = self.z.iter().map(|&q| map(q)).collect();
        Self::new(n, &x, &z)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedLogical {
    pub name: String,
    pub op: PauliOperator,
}

/// `n`-qubit stabilizer code with checks over the `[X | Z]` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    n: usize,
    checks: SparseBitMatrix,
    logicals: Vec<NamedLogical>,
}

impl StabilizerCode {
    /// CSS code from X-check and Z-check matrices over the same qubits.
    pub fn css(hx: &SparseBitMatrix, hz: &SparseBitMatrix) -> Result<Self> {
        if hx.n_cols() != hz.n_cols() {
            return Err(input_err!(
                "H_X has {} columns but H_Z has {}",
                hx.n_cols(),
                hz.n_cols()
            ));
        }
        let n = hx.n_cols();
        let prod = hx.multiply(&hz.transpose())?;
        if let Some((i, j)) = prod.entries().next() {
            return Err(input_err!("X check {i} and Z check {j} anticommute"));
        }
        let zero = SparseBitMatrix::zeros(hx.n_rows(), n);
        let zero2 = SparseBitMatrix::zeros(hz.n_rows(), n);
        let top = SparseBitMatrix::hstack(&[hx, &zero])?;
        let bottom = SparseBitMatrix::hstack(&[&zero2, hz])?;
        Ok(Self {
            n,
            checks: SparseBitMatrix::vstack(&[&top, &bottom])?,
            logicals: Vec::new(),
        })
    }

    /// General stabilizer code from a `[X | Z]` check matrix.
    pub fn from_checks(n: usize, checks: SparseBitMatrix) -> Result<Self> {
        if checks.n_cols() != 2 * n {
            return Err(input_err!("check matrix has {} columns, expected {}", checks.n_cols(), 2 * n));
        }
        let ops: Vec<PauliOperator> = checks
            .rows()
            .map(|r| PauliOperator::from_symplectic(n, r))
            .collect::<Result<_>>()?;
        if !checks.symplectic_commutes()? {
            for i in 0..ops.len() {
                for j in i + 1..ops.len() {
                    if !ops[i].commutes_with(&ops[j]) {
                        return Err(input_err!("checks {i} and {j} anticommute"));
                    }
                }
            }
        }
        Ok(Self {
            n,
            checks,
            logicals: Vec::new(),
        })
    }

    pub fn from_operators(n: usize, ops: &[PauliOperator]) -> Result<Self> {
        let rows = ops.iter().map(PauliOperator::symplectic_row).collect();
        Self::from_checks(n, SparseBitMatrix::from_rows(2 * n, rows)?)
    }

    /// Attaches a named logical after checking it commutes with every check.
    pub fn with_logical(mut self, name: &str, op: PauliOperator) -> Result<Self> {
        self.add_logical(name, op)?;
        Ok(self)
    }

    pub fn add_logical(&mut self, name: &str, op: PauliOperator) -> Result<()> {
        if op.n() != self.n {
            return Err(input_err!("logical {name} acts on {} qubits, code has {}", op.n(), self.n));
        }
        if let Some(i) = self.anticommuting_check(&op) {
            return Err(input_err!("logical {name} anticommutes with check {i}"));
        }
        self.logicals.push(NamedLogical {
            name: name.to_string(),
            op,
        });
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn checks(&self) -> &SparseBitMatrix {
        &self.checks
    }

    pub fn check(&self, i: usize) -> PauliOperator {
        PauliOperator::from_symplectic(self.n, self.checks.row(i)).expect("rows validated")
    }

    pub fn check_operators(&self) -> Vec<PauliOperator> {
        (0..self.checks.n_rows()).map(|i| self.check(i)).collect()
    }

    pub fn logicals(&self) -> &[NamedLogical] {
        &self.logicals
    }

    pub fn logical(&self, name: &str) -> Option<&PauliOperator> {
        self.logicals.iter().find(|l| l.name == name).map(|l| &l.op)
    }

    /// True when every check is purely X-type or purely Z-type.
    pub fn is_css(&self) -> bool {
        self.checks
            .rows()
            .all(|r| r.iter().all(|&c| c < self.n) || r.iter().all(|&c| c >= self.n))
    }

    /// X parts of the pure X-type checks.
    pub fn hx(&self) -> SparseBitMatrix {
        let rows = self
            .checks
            .rows()
            .filter(|r| !r.is_empty() && r.iter().all(|&c| c < self.n))
            .map(|r| r.to_vec())
            .collect();
        SparseBitMatrix::from_rows(self.n, rows).expect("columns in range")
    }

    /// Z parts of the pure Z-type checks.
    pub fn hz(&self) -> SparseBitMatrix {
        let rows = self
            .checks
            .rows()
            .filter(|r| !r.is_empty() && r.iter().all(|&c| c >= self.n))
            .map(|r| r.iter().map(|&c| c - self.n).collect())
            .collect();
        SparseBitMatrix::from_rows(self.n, rows).expect("columns in range")
    }

    /// X parts of all checks (an `r x n` matrix).
    pub fn x_parts(&self) -> SparseBitMatrix {
        let rows = self
            .checks
            .rows()
            .map(|r| r.iter().copied().filter(|&c| c < self.n).collect())
            .collect();
        SparseBitMatrix::from_rows(self.n, rows).expect("columns in range")
    }

    pub fn anticommuting_check(&self, op: &PauliOperator) -> Option<usize> {
        (0..self.checks.n_rows()).find(|&i| !self.check(i).commutes_with(op))
    }

    pub fn commutes_with_checks(&self, op: &PauliOperator) -> bool {
        self.anticommuting_check(op).is_none()
    }

    pub fn row_space(&self) -> RowSpace {
        RowSpace::new(&self.checks)
    }

    pub fn is_stabilizer(&self, op: &PauliOperator) -> bool {
        op.n() == self.n && self.row_space().contains(&op.symplectic_row())
    }

    pub fn is_nontrivial_logical(&self, op: &PauliOperator) -> bool {
        self.commutes_with_checks(op) && !self.is_stabilizer(op)
    }

    /// `n - rank`, the number of encoded qubits.
    pub fn logical_qubit_count(&self) -> usize {
        self.n - self.checks.rank()
    }

    /// Conjugation by Hadamard on every qubit: X and Z parts swap.
    pub fn hadamard(&self) -> Self {
        let swap = |op: &PauliOperator| PauliOperator {
            n: op.n,
            x: op.z.clone(),
            z: op.x.clone(),
        };
        let ops: Vec<PauliOperator> = self.check_operators().iter().map(swap).collect();
        let rows = ops.iter().map(PauliOperator::symplectic_row).collect();
        Self {
            n: self.n,
            checks: SparseBitMatrix::from_rows(2 * self.n, rows).expect("columns in range"),
            logicals: self
                .logicals
                .iter()
                .map(|l| NamedLogical {
                    name: l.name.clone(),
                    op: swap(&l.op),
                })
                .collect(),
        }
    }

    /// Direct sum; qubits of `other` follow ours. Logicals are prefixed.
    pub fn direct_sum(&self, other: &Self, left: &str, right: &str) -> Result<Self> {
        let n = self.n + other.n;
        let mut ops: Vec<PauliOperator> = Vec::new();
        for op in self.check_operators() {
            ops.push(op.relabel(n, |q| q)?);
        }
        for op in other.check_operators() {
            ops.push(op.relabel(n, |q| q + self.n)?);
        }
        let mut code = Self::from_operators(n, &ops)?;
        for l in &self.logicals {
            code.add_logical(&alloc::format!("{left}{}", l.name), l.op.relabel(n, |q| q)?)?;
        }
        for l in &other.logicals {
            code.add_logical(&alloc::format!("{right}{}", l.name), l.op.relabel(n, |q| q + self.n)?)?;
        }
        Ok(code)
    }
}

/// Two independent blocks side by side; logicals are prefixed `l_` and
/// `r_`.
pub fn two_blocks(left: &StabilizerCode, right: &StabilizerCode) -> Result<StabilizerCode> {
    left.direct_sum(right, "l_", "r_")
}

/// Repetition code protecting against X errors: `H_Z = H_R(n)`, no X checks.
pub fn repetition_code(n: usize) -> Result<StabilizerCode> {
    let hz = SparseBitMatrix::canonical(crate::gf2::Canonical::FullRankHR, n)?;
    let all: Vec<usize> = (0..n).collect();
    StabilizerCode::css(&SparseBitMatrix::zeros(0, n), &hz)?
        .with_logical("X", PauliOperator::x_type(n, &all)?)?
        .with_logical("Z", PauliOperator::z_type(n, &[0])?)
}

/// The [[7,1,3]] code built from the Hamming parity checks.
pub fn steane_code() -> Result<StabilizerCode> {
    let h = SparseBitMatrix::from_rows(7, vec![vec![3, 4, 5, 6], vec![1, 2, 5, 6], vec![0, 2, 4, 6]])?;
    let all: Vec<usize> = (0..7).collect();
    StabilizerCode::css(&h, &h)?
        .with_logical("X", PauliOperator::x_type(7, &all)?)?
        .with_logical("Z", PauliOperator::z_type(7, &all)?)
}

/// Gray-code scan over an affine GF(2) space `offset + span(basis)` of
/// packed `[X | Z]` vectors, looking for the lightest vector outside an
/// excluded subspace.
#[derive(Clone, Debug)]
pub struct WeightScanner {
    n: usize,
    words: usize,
    basis: Vec<Vec<u64>>,
    offset: Vec<u64>,
    exclude: Option<RowSpace>,
    high_bits: usize,
}

/// Lightest vector found in a chunk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanHit {
    pub weight: usize,
    pub chunk: u64,
    pub op: PauliOperator,
}

impl ScanHit {
    /// Lower weight wins; ties go to the earlier chunk.
    pub fn better(self, other: Self) -> Self {
        if (other.weight, other.chunk) < (self.weight, self.chunk) {
            other
        } else {
            self
        }
    }
}

impl WeightScanner {
    pub fn new(n: usize, basis: &[Vec<usize>], offset: &[usize], exclude: Option<RowSpace>) -> Self {
        let words = n.div_ceil(64).max(1);
        let pack = |row: &[usize]| {
            let mut w = vec![0u64; 2 * words];
            for &c in row {
                let (half, q) = if c < n { (0, c) } else { (words, c - n) };
                w[half + q / 64] ^= 1 << (q % 64);
            }
            w
        };
        Self {
            n,
            words,
            basis: basis.iter().map(|b| pack(b)).collect(),
            offset: pack(offset),
            exclude,
            high_bits: basis.len().min(8),
        }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn n_chunks(&self) -> u64 {
        1 << self.high_bits
    }

    fn weight(&self, v: &[u64]) -> usize {
        (0..self.words).map(|i| (v[i] | v[i + self.words]).count_ones() as usize).sum()
    }

    fn unpack(&self, v: &[u64]) -> PauliOperator {
        let mut x = Vec::new();
        let mut z = Vec::new();
        for q in 0..self.n {
            if v[q / 64] >> (q % 64) & 1 == 1 {
                x.push(q);
            }
            if v[self.words + q / 64] >> (q % 64) & 1 == 1 {
                z.push(q);
            }
        }
        PauliOperator { n: self.n, x, z }
    }

    /// Lightest admissible vector of the chunk strictly lighter than `bound`.
    pub fn scan_chunk(&self, chunk: u64, bound: usize) -> Option<ScanHit> {
        let dim = self.basis.len();
        let low = dim - self.high_bits;
        let mut v = self.offset.clone();
        for j in 0..self.high_bits {
            if chunk >> j & 1 == 1 {
                for (a, b) in v.iter_mut().zip(&self.basis[low + j]) {
                    *a ^= b;
                }
            }
        }
        let mut bound = bound;
        let mut best = None;
        let total: u64 = 1 << low;
        for k in 0..total {
            if k > 0 {
                let i = k.trailing_zeros() as usize;
                for (a, b) in v.iter_mut().zip(&self.basis[i]) {
                    *a ^= b;
                }
            }
            let w = self.weight(&v);
            if w < bound {
                let op = self.unpack(&v);
                let excluded = self.exclude.as_ref().is_some_and(|s| s.contains(&op.symplectic_row()));
                if !excluded {
                    bound = w;
                    best = Some(ScanHit { weight: w, chunk, op });
                }
            }
        }
        best
    }

    /// Sequential scan over all chunks.
    pub fn run(&self) -> Option<ScanHit> {
        let mut best: Option<ScanHit> = None;
        for c in 0..self.n_chunks() {
            let bound = best.as_ref().map_or(usize::MAX, |b| b.weight);
            if let Some(hit) = self.scan_chunk(c, bound) {
                best = Some(hit);
            }
        }
        best
    }
}

/// Which operators a distance scan considers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    /// X-type logicals of a CSS code.
    X,
    /// Z-type logicals of a CSS code.
    Z,
    /// Arbitrary Paulis.
    All,
}

/// Scanner over all logicals of one sector, excluding stabilizers.
pub fn logical_scanner(code: &StabilizerCode, sector: Sector) -> WeightScanner {
    let n = code.n;
    let basis: Vec<Vec<usize>> = match sector {
        Sector::X => code.hz().nullspace_matrix().into_rows(),
        Sector::Z => code
            .hx()
            .nullspace_matrix()
            .into_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|q| q + n).collect())
            .collect(),
        Sector::All => {
            // v = (a | b) commutes with (x | z) iff x.b + z.a = 0.
            let swapped: Vec<Vec<usize>> = code
                .checks
                .rows()
                .map(|r| {
                    let mut s: Vec<usize> = r.iter().map(|&c| if c < n { c + n } else { c - n }).collect();
                    s.sort_unstable();
                    s
                })
                .collect();
            SparseBitMatrix::from_rows(2 * n, swapped)
                .expect("columns in range")
                .nullspace_matrix()
                .into_rows()
        }
    };
    WeightScanner::new(n, &basis, &[], Some(code.row_space()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    Exhaustive { budget: u64 },
    /// Search all operators up to the given weight.
    WeightBounded { max_weight: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceResult {
    /// Minimum weight with a witness logical.
    Exact { distance: usize, witness: PauliOperator },
    /// No nontrivial logical of weight at most `max_weight` exists.
    Exceeds { max_weight: usize },
    /// The code encodes no qubits.
    NoLogicals,
}

impl DistanceResult {
    /// Certified lower bound on the distance.
    pub fn lower_bound(&self) -> usize {
        match self {
            DistanceResult::Exact { distance, .. } => *distance,
            DistanceResult::Exceeds { max_weight } => max_weight + 1,
            DistanceResult::NoLogicals => usize::MAX,
        }
    }

    pub fn exact(&self) -> Option<usize> {
        match self {
            DistanceResult::Exact { distance, .. } => Some(*distance),
            _ => None,
        }
    }
}

/// Sectors scanned for a code: X and Z separately for CSS codes.
pub fn sectors(code: &StabilizerCode) -> Vec<Sector> {
    if code.is_css() {
        vec![Sector::X, Sector::Z]
    } else {
        vec![Sector::All]
    }
}

/// Enumeration count of an exhaustive scan, saturating.
pub fn exhaustive_cost(code: &StabilizerCode) -> u64 {
    sectors(code)
        .into_iter()
        .map(|s| {
            let dim = logical_scanner(code, s).dimension();
            if dim >= 63 {
                u64::MAX
            } else {
                1u64 << dim
            }
        })
        .fold(0u64, u64::saturating_add)
}

pub fn distance(code: &StabilizerCode, mode: DistanceMode) -> Result<DistanceResult> {
    match mode {
        DistanceMode::Exhaustive { budget } => {
            let needed = exhaustive_cost(code);
            if needed > budget {
                return Err(Error::OverCap {
                    what: "exhaustive distance enumeration",
                    needed,
                    cap: budget,
                });
            }
            let best = sectors(code)
                .into_iter()
                .filter_map(|s| logical_scanner(code, s).run())
                .reduce(|a, b| if b.weight < a.weight { b } else { a });
            Ok(match best {
                Some(h) => DistanceResult::Exact {
                    distance: h.weight,
                    witness: h.op,
                },
                None => DistanceResult::NoLogicals,
            })
        }
        DistanceMode::WeightBounded { max_weight } => weight_bounded(code, max_weight),
    }
}

/// Minimum weight of a nontrivial logical in one CSS sector.
pub fn sector_distance(code: &StabilizerCode, sector: Sector, budget: u64) -> Result<Option<(usize, PauliOperator)>> {
    let s = logical_scanner(code, sector);
    let needed = if s.dimension() >= 63 { u64::MAX } else { 1u64 << s.dimension() };
    if needed > budget {
        return Err(Error::OverCap {
            what: "exhaustive distance enumeration",
            needed,
            cap: budget,
        });
    }
    Ok(s.run().map(|h| (h.weight, h.op)))
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn weight_bounded(code: &StabilizerCode, max_weight: usize) -> Result<DistanceResult> {
    let n = code.n;
    if code.logical_qubit_count() == 0 {
        return Ok(DistanceResult::NoLogicals);
    }
    let space = code.row_space();
    let checks = code.check_operators();
    let css = code.is_css();
    let admissible = |op: &PauliOperator| checks.iter().all(|c| c.commutes_with(op)) && !space.contains(&op.symplectic_row());
    for w in 1..=max_weight.min(n) {
        let mut comb: Vec<usize> = (0..w).collect();
        loop {
            if css {
                for op in [PauliOperator::x_type(n, &comb)?, PauliOperator::z_type(n, &comb)?] {
                    if admissible(&op) {
                        return Ok(DistanceResult::Exact { distance: w, witness: op });
                    }
                }
            } else {
                // Each support qubit carries X, Z or Y.
                for mut code_word in 0..3usize.pow(w as u32) {
                    let mut x = Vec::new();
                    let mut z = Vec::new();
                    for &q in &comb {
                        match code_word % 3 {
                            0 => x.push(q),
                            1 => z.push(q),
                            _ => {
                                x.push(q);
                                z.push(q);
                            }
                        }
                        code_word /= 3;
                    }
                    let op = PauliOperator::new(n, &x, &z)?;
                    if admissible(&op) {
                        return Ok(DistanceResult::Exact { distance: w, witness: op });
                    }
                }
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    Ok(DistanceResult::Exceeds { max_weight })
}

/// Minimum weight over `base` times the group generated by the checks and
/// `extra` operators.
pub fn min_weight_in_coset(
    code: &StabilizerCode,
    base: &PauliOperator,
    extra: &[PauliOperator],
    budget: u64,
) -> Result<(usize, PauliOperator)> {
    let mut space = RowSpace::empty(2 * code.n);
    let mut gens = Vec::new();
    for row in code.checks.rows().map(|r| r.to_vec()).chain(extra.iter().map(|p| p.symplectic_row())) {
        if space.insert(&row) {
            gens.push(row);
        }
    }
    let needed = if gens.len() >= 63 { u64::MAX } else { 1u64 << gens.len() };
    if needed > budget {
        return Err(Error::OverCap {
            what: "coset weight enumeration",
            needed,
            cap: budget,
        });
    }
    let hit = WeightScanner::new(code.n, &gens, &base.symplectic_row(), None)
        .run()
        .expect("the coset is nonempty");
    Ok((hit.weight, hit.op))
}

/// Null space of the check X-parts restricted to `support`, as subsets of
/// `support`. These are the Z-type operators inside the support that
/// commute with every check.
pub fn restricted_nullspace(code: &StabilizerCode, support: &[usize]) -> Result<Vec<Vec<usize>>> {
    let restricted = code.x_parts().select_columns(support)?;
    Ok(restricted
        .nullspace_matrix()
        .into_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|i| support[i]).collect())
        .collect())
}

/// True iff the only Z-type operators inside `supp(zl)` that commute with
/// all checks are the identity and `zl` itself.
pub fn is_irreducible(code: &StabilizerCode, zl: &PauliOperator) -> Result<bool> {
    if !zl.is_z_type() {
        return Err(input_err!("operator is not Z-type"));
    }
    if zl.is_identity() {
        return Err(input_err!("operator is the identity"));
    }
    if let Some(i) = code.anticommuting_check(zl) {
        return Err(input_err!("operator anticommutes with check {i}"));
    }
    Ok(restricted_nullspace(code, zl.z_part())?.len() == 1)
}

/// Multiplies `px` by checks so its X-part avoids `supp(zl)`. For CSS codes
/// only X-type checks are used.
pub fn clean_overlap(code: &StabilizerCode, px: &PauliOperator, zl: &PauliOperator) -> Result<PauliOperator> {
    if !is_irreducible(code, zl)? {
        return Err(input_err!("Z operator is not irreducible"));
    }
    if !px.commutes_with(zl) {
        return Err(input_err!("operators anticommute, so their overlap cannot be removed"));
    }
    let support = zl.z_part();
    let target: Vec<usize> = px
        .x_part()
        .iter()
        .filter_map(|q| support.binary_search(q).ok())
        .collect();
    if target.is_empty() {
        return Ok(px.clone());
    }
    let candidates: Vec<usize> = (0..code.checks.n_rows())
        .filter(|&i| !code.is_css() || code.checks.row(i).iter().all(|&c| c < code.n))
        .collect();
    let restricted = code.x_parts().select_rows(&candidates).select_columns(support)?;
    let combo = restricted
        .express_in_rows(&target)
        .ok_or_else(|| Error::Invariant("even overlap not reachable by checks".into()))?;
    let mut out = px.clone();
    for r in combo {
        out = out.mul(&code.check(candidates[r]));
    }
    Ok(out)
}
