//! Toric code in layered form, the Dehn-twist CNOT with a sign-free frame
//! simulator, and the merged code attaching a toric block to an LDPC code
//! through two auxiliary graphs.
//!
//! Layer `i` holds primal qubits `Q^Z_i` and dual qubits `Q^X_i`, `w` each.
//! Global index: all primal layers first, then all dual layers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, Result};
use crate::gf2::{overlap, RowSpace, SparseBitMatrix};
use crate::skiptree::skiptree;
use crate::stabilizer::{min_weight_in_coset, PauliOperator, StabilizerCode};
use crate::surgery::{bfs_matching, AuxGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricLayout {
    pub layers: usize,
    pub width: usize,
    /// X checks `C^X_i` row `j` at index `i * w + j`, then Z checks alike.
    /// Logicals `X1`, `X2`, `Z1`, `Z2`.
    pub code: StabilizerCode,
}

impl ToricLayout {
    pub fn n(&self) -> usize {
        2 * self.layers * self.width
    }

    /// Primal qubit `j` (mod `w`) of layer `i` (mod `L`).
    pub fn qz(&self, i: usize, j: usize) -> usize {
        (i % self.layers) * self.width + j % self.width
    }

    /// Dual qubit `j` (mod `w`) of layer `i` (mod `L`).
    pub fn qx(&self, i: usize, j: usize) -> usize {
        self.layers * self.width + (i % self.layers) * self.width + j % self.width
    }

    pub fn x_check(&self, i: usize, j: usize) -> usize {
        i * self.width + j
    }

    pub fn z_check(&self, i: usize, j: usize) -> usize {
        self.layers * self.width + i * self.width + j
    }

    /// `(is_dual, layer, position)` of a qubit.
    pub fn coord(&self, q: usize) -> (bool, usize, usize) {
        let lw = self.layers * self.width;
        let (dual, r) = if q >= lw { (true, q - lw) } else { (false, q) };
        (dual, r / self.width, r % self.width)
    }

    pub fn logical(&self, name: &str) -> &PauliOperator {
        self.code.logical(name).expect("toric logicals are always attached")
    }
}

fn toric_checks(layers: usize, width: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let qz = |i: usize, j: usize| (i % layers) * width + j % width;
    let qx = |i: usize, j: usize| layers * width + (i % layers) * width + j % width;
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for i in 0..layers {
        for j in 0..width {
            xs.push(vec![qz(i, j), qz(i, j + 1), qx(i, j), qx(i + layers - 1, j)]);
        }
    }
    for i in 0..layers {
        for j in 0..width {
            zs.push(vec![qz(i, j), qz(i + 1, j), qx(i, j + width - 1), qx(i, j)]);
        }
    }
    (xs, zs)
}

/// `L x w` toric code with the layered wiring; distance `min(L, w)`.
pub fn toric_code_rect(layers: usize, width: usize) -> Result<ToricLayout> {
    if layers < 2 || width < 2 {
        return Err(input_err!("toric code needs at least 2 layers and width 2 (got {layers} x {width})"));
    }
    let n = 2 * layers * width;
    let (xs, zs) = toric_checks(layers, width);
    let code = StabilizerCode::css(&SparseBitMatrix::from_rows(n, xs)?, &SparseBitMatrix::from_rows(n, zs)?)?;
    let lw = layers * width;
    let x1: Vec<usize> = (0..layers).map(|i| i * width).collect();
    let x2: Vec<usize> = (lw..lw + width).collect();
    let z1: Vec<usize> = (0..width).collect();
    let z2: Vec<usize> = (0..layers).map(|i| lw + i * width).collect();
    let code = code
        .with_logical("X1", PauliOperator::x_type(n, &x1)?)?
        .with_logical("X2", PauliOperator::x_type(n, &x2)?)?
        .with_logical("Z1", PauliOperator::z_type(n, &z1)?)?
        .with_logical("Z2", PauliOperator::z_type(n, &z2)?)?;
    Ok(ToricLayout { layers, width, code })
}

/// Distance-`d` toric code on `2 d^2` qubits.
pub fn toric_code(d: usize) -> Result<ToricLayout> {
    toric_code_rect(d, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitSet {
    Primal,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitElement {
    /// Transversal CNOTs, `(control, target)` pairs.
    Cnot { layer: usize, gates: Vec<(usize, usize)> },
    /// Relabels position `k` of one layer set to `k + shift (mod w)`.
    Shift { set: QubitSet, layer: usize, shift: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnTwistCircuit {
    pub layers: usize,
    pub width: usize,
    pub elements: Vec<CircuitElement>,
}

impl DehnTwistCircuit {
    pub fn identity(layers: usize, width: usize) -> Self {
        Self {
            layers,
            width,
            elements: Vec::new(),
        }
    }

    pub fn cnot_batches(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, CircuitElement::Cnot { .. })).count()
    }

    pub fn shift_layers(&self) -> usize {
        self.elements.len() - self.cnot_batches()
    }

    fn shift_of(&self, set: QubitSet, layer: usize) -> usize {
        self.elements
            .iter()
            .filter_map(|e| match e {
                CircuitElement::Shift { set: s, layer: l, shift } if *s == set && *l == layer => Some(*shift),
                _ => None,
            })
            .fold(0, |a, b| (a + b) % self.width)
    }

    /// How far the dual relabeling of `layer` lags that of layer 0.
    pub fn target_offset(&self, layer: usize) -> usize {
        (self.shift_of(QubitSet::Dual, 0) + self.width - self.shift_of(QubitSet::Dual, layer)) % self.width
    }
}

/// CNOT batch `CNOT(Q^Z_i, Q^X_i)` per layer followed by the relabelings
/// `C^{-i}` on `Q^Z_i` and `C^{-i-1}` on `Q^X_i`.
pub fn dehn_twist(d: usize) -> Result<DehnTwistCircuit> {
    if d < 2 {
        return Err(input_err!("Dehn twist needs d >= 2 (got {d})"));
    }
    let mut elements = Vec::new();
    for i in 0..d {
        elements.push(CircuitElement::Cnot {
            layer: i,
            gates: (0..d).map(|j| (i * d + j, d * d + i * d + j)).collect(),
        });
        elements.push(CircuitElement::Shift {
            set: QubitSet::Primal,
            layer: i,
            shift: (d - i % d) % d,
        });
        elements.push(CircuitElement::Shift {
            set: QubitSet::Dual,
            layer: i,
            shift: (2 * d - i - 1) % d,
        });
    }
    Ok(DehnTwistCircuit {
        layers: d,
        width: d,
        elements,
    })
}

/// Sign-free Pauli rows tracked through a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliFrame {
    pub n: usize,
    pub rows: Vec<PauliOperator>,
}

fn apply_element(n: usize, layers: usize, width: usize, el: &CircuitElement, x: &mut [bool], z: &mut [bool]) -> Result<()> {
    match el {
        CircuitElement::Cnot { gates, .. } => {
            for &(c, t) in gates {
                if c >= n || t >= n {
                    return Err(input_err!("CNOT ({c}, {t}) outside 0..{n}"));
                }
                if x[c] {
                    x[t] ^= true;
                }
                if z[t] {
                    z[c] ^= true;
                }
            }
        }
        CircuitElement::Shift { set, layer, shift } => {
            let base = match set {
                QubitSet::Primal => 0,
                QubitSet::Dual => layers * width,
            } + layer * width;
            if base + width > n {
                return Err(input_err!("relabeling of layer {layer} outside 0..{n}"));
            }
            for v in [x, z] {
                let old: Vec<bool> = v[base..base + width].to_vec();
                for (k, b) in old.into_iter().enumerate() {
                    v[base + (k + shift) % width] = b;
                }
            }
        }
    }
    Ok(())
}

fn run_elements(n: usize, circuit: &DehnTwistCircuit, els: &[CircuitElement], op: &PauliOperator) -> Result<PauliOperator> {
    if op.n() != n {
        return Err(input_err!("operator on {} qubits, circuit on {n}", op.n()));
    }
    let mut x = vec![false; n];
    let mut z = vec![false; n];
    for &q in op.x_part() {
        x[q] = true;
    }
    for &q in op.z_part() {
        z[q] = true;
    }
    for el in els {
        apply_element(n, circuit.layers, circuit.width, el, &mut x, &mut z)?;
    }
    let xs: Vec<usize> = (0..n).filter(|&q| x[q]).collect();
    let zs: Vec<usize> = (0..n).filter(|&q| z[q]).collect();
    PauliOperator::new(n, &xs, &zs)
}

/// Conjugates every frame row through the circuit.
pub fn apply_frame(frame: &PauliFrame, circuit: &DehnTwistCircuit) -> Result<PauliFrame> {
    let rows = frame
        .rows
        .iter()
        .map(|r| run_elements(frame.n, circuit, &circuit.elements, r))
        .collect::<Result<_>>()?;
    Ok(PauliFrame { n: frame.n, rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCheck {
    pub logical: &'static str,
    pub expected: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalCnotReport {
    pub d: usize,
    pub stabilizers_preserved: bool,
    pub maps: Vec<MapCheck>,
    pub verified: bool,
}

fn same_rowspace(a: &[PauliOperator], b: &[PauliOperator], n: usize) -> bool {
    let sa = RowSpace::new(&SparseBitMatrix::from_rows(2 * n, a.iter().map(|p| p.symplectic_row()).collect()).expect("in range"));
    let sb = RowSpace::new(&SparseBitMatrix::from_rows(2 * n, b.iter().map(|p| p.symplectic_row()).collect()).expect("in range"));
    sa.rank() == sb.rank() && b.iter().all(|p| sa.contains(&p.symplectic_row()))
}

/// Runs the Dehn twist on the stabilizers and the four logicals.
pub fn verify_logical_cnot(d: usize) -> Result<LogicalCnotReport> {
    if d > 8 {
        return Err(input_err!("frame verification limited to d <= 8 (got {d})"));
    }
    let t = toric_code(d)?;
    let circuit = dehn_twist(d)?;
    let n = t.n();
    let stabs = t.code.check_operators();
    let after = apply_frame(&PauliFrame { n, rows: stabs.clone() }, &circuit)?;
    let stabilizers_preserved = same_rowspace(&stabs, &after.rows, n);
    let (x1, x2, z1, z2) = (t.logical("X1"), t.logical("X2"), t.logical("Z1"), t.logical("Z2"));
    let cases: [(&'static str, &PauliOperator, &'static str, PauliOperator); 4] = [
        ("X1", x1, "X1 X2", x1.mul(x2)),
        ("X2", x2, "X2", x2.clone()),
        ("Z1", z1, "Z1", z1.clone()),
        ("Z2", z2, "Z1 Z2", z1.mul(z2)),
    ];
    let space = t.code.row_space();
    let mut maps = Vec::new();
    for (name, op, expected, target) in cases {
        let image = run_elements(n, &circuit, &circuit.elements, op)?;
        maps.push(MapCheck {
            logical: name,
            expected,
            holds: space.contains(&image.mul(&target).symplectic_row()),
        });
    }
    let verified = stabilizers_preserved && maps.iter().all(|m| m.holds);
    Ok(LogicalCnotReport {
        d,
        stabilizers_preserved,
        maps,
        verified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FaultKind {
    /// `X` on the control after the gate.
    Control,
    /// `X` on the target after the gate.
    Target,
    Both,
}

/// A faulty gate of layer `layer` whose control ends at position `label`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fault {
    pub layer: usize,
    pub label: usize,
    pub kind: FaultKind,
}

/// Propagates the faults through the rest of the circuit; returns the
/// residual Pauli on the output labels.
pub fn fault_residual(d: usize, faults: &[Fault]) -> Result<PauliOperator> {
    let t = toric_code(d)?;
    let circuit = dehn_twist(d)?;
    let n = t.n();
    let mut total = PauliOperator::identity(n);
    for f in faults {
        if f.layer >= d || f.label >= d {
            return Err(input_err!("fault ({}, {}) outside the {d} x {d} gate grid", f.layer, f.label));
        }
        let pos = (f.label + f.layer) % d;
        let x: Vec<usize> = match f.kind {
            FaultKind::Control => vec![t.qz(f.layer, pos)],
            FaultKind::Target => vec![t.qx(f.layer, pos)],
            FaultKind::Both => vec![t.qz(f.layer, pos), t.qx(f.layer, pos)],
        };
        let batch = circuit
            .elements
            .iter()
            .position(|e| matches!(e, CircuitElement::Cnot { layer, .. } if *layer == f.layer))
            .expect("every layer has a batch");
        let e = run_elements(n, &circuit, &circuit.elements[batch + 1..], &PauliOperator::x_type(n, &x)?)?;
        total = total.mul(&e);
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultReport {
    pub d: usize,
    /// First gate of every layer fails on its control.
    pub pattern_residual_is_x1: bool,
    pub pattern_undetected: bool,
    pub empty_is_identity: bool,
    pub single_faults_detected: bool,
    /// Fault sets of size at most two over distinct gates.
    pub small_sets_checked: usize,
    /// Of those, the ones that are detected or act trivially.
    pub small_sets_harmless: usize,
}

/// Lower-weight fault families of the Dehn twist and the weight-`d`
/// pattern that leaves an undetectable logical.
pub fn fault_pattern_demo(d: usize) -> Result<FaultReport> {
    if d > 8 {
        return Err(input_err!("fault demo limited to d <= 8 (got {d})"));
    }
    let t = toric_code(d)?;
    let hz = t.code.hz();
    let x_space = RowSpace::new(&t.code.hx());
    let detected = |e: &PauliOperator| hz.rows().any(|r| overlap(r, e.x_part()) % 2 == 1);
    let harmless = |e: &PauliOperator| detected(e) || x_space.contains(e.x_part());
    let pattern: Vec<Fault> = (0..d)
        .map(|i| Fault {
            layer: i,
            label: 0,
            kind: FaultKind::Control,
        })
        .collect();
    let residual = fault_residual(d, &pattern)?;
    let kinds = [FaultKind::Control, FaultKind::Target, FaultKind::Both];
    let mut singles = Vec::new();
    for layer in 0..d {
        for label in 0..d {
            for kind in kinds {
                singles.push(Fault { layer, label, kind });
            }
        }
    }
    let mut single_ok = true;
    let mut checked = 0;
    let mut ok = 0;
    for (a, fa) in singles.iter().enumerate() {
        let ea = fault_residual(d, &[*fa])?;
        single_ok &= detected(&ea);
        checked += 1;
        ok += usize::from(harmless(&ea));
        for fb in &singles[a + 1..] {
            if (fb.layer, fb.label) == (fa.layer, fa.label) {
                continue;
            }
            checked += 1;
            ok += usize::from(harmless(&ea.mul(&fault_residual(d, &[*fb])?)));
        }
    }
    Ok(FaultReport {
        d,
        pattern_residual_is_x1: &residual == t.logical("X1"),
        pattern_undetected: !detected(&residual),
        empty_is_identity: fault_residual(d, &[])?.is_identity(),
        single_faults_detected: single_ok,
        small_sets_checked: checked,
        small_sets_harmless: ok,
    })
}

/// Minimum weight of `Z1 X2` times any product of stabilizers, `X1` and
/// `Z2`.
pub fn two_d_weight(d: usize, budget: u64) -> Result<(usize, PauliOperator)> {
    let t = toric_code(d)?;
    let base = t.logical("Z1").mul(t.logical("X2"));
    min_weight_in_coset(&t.code, &base, &[t.logical("X1").clone(), t.logical("Z2").clone()], budget)
}

/// Qubit offsets of a merged code: base, `E_Z` edges, toric block, `E_X`
/// edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeOffsets {
    pub edges_z: usize,
    pub toric: usize,
    pub edges_x: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedCode {
    pub base: StabilizerCode,
    pub toric: ToricLayout,
    pub code: StabilizerCode,
    pub offsets: MergeOffsets,
    pub n_edges_z: usize,
    pub n_edges_x: usize,
    pub n_vertices_z: usize,
    pub n_vertices_x: usize,
    /// `T_Z`, `P_Z`, `T_X`, `P_X` and the graph incidences `G_Z`, `G_X`.
    pub blocks: Vec<(String, SparseBitMatrix)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankIdentityReport {
    pub rank_hx: usize,
    pub rank_hx_merged: usize,
    pub expected_hx: usize,
    pub rank_hz: usize,
    pub rank_hz_merged: usize,
    pub expected_hz: usize,
    pub k_base: usize,
    pub k_merged: usize,
    pub holds: bool,
}

impl MergedCode {
    pub fn block(&self, name: &str) -> Option<&SparseBitMatrix> {
        self.blocks.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Rank counts of the merged CSS code against the edge and vertex counts.
    pub fn rank_identity(&self) -> RankIdentityReport {
        let l = self.toric.layers;
        let rank_hx = self.base.hx().rank();
        let rank_hz = self.base.hz().rank();
        let rank_hx_merged = self.code.hx().rank();
        let rank_hz_merged = self.code.hz().rank();
        let expected_hx = rank_hx + self.n_edges_z + l * self.n_vertices_x;
        let expected_hz = rank_hz + self.n_edges_x + l * self.n_vertices_z;
        let k_base = self.base.logical_qubit_count();
        let k_merged = self.code.logical_qubit_count();
        RankIdentityReport {
            rank_hx,
            rank_hx_merged,
            expected_hx,
            rank_hz,
            rank_hz_merged,
            expected_hz,
            k_base,
            k_merged,
            holds: rank_hx_merged == expected_hx && rank_hz_merged == expected_hz && k_base == k_merged,
        }
    }
}

/// Attaches an `L`-layer toric block to `base`: `G_Z` on the Z-logical
/// support joins primal layer 0 through `T_Z` and `P_Z`, `G_X` on the
/// X-logical support joins dual layer `L - 1` through `T_X` and `P_X`.
/// Both graphs need the same vertex count, which sets the toric width.
pub fn merge_with_toric(
    base: &StabilizerCode,
    aux_z: &AuxGraph,
    aux_x: &AuxGraph,
    layers: usize,
) -> Result<MergedCode> {
    let zc = aux_z.port.odd_support();
    let xt = aux_x.port.odd_support();
    if let Some(q) = zc.iter().find(|q| xt.binary_search(q).is_ok()) {
        return Err(input_err!("Z and X supports overlap on qubit {q}; clean the overlap first"));
    }
    let zl = PauliOperator::z_type(base.n(), &zc)?;
    let xl = PauliOperator::x_type(base.n(), &xt)?;
    if let Some(i) = base.anticommuting_check(&zl) {
        return Err(input_err!("Z operator anticommutes with check {i}"));
    }
    if let Some(i) = base.anticommuting_check(&xl) {
        return Err(input_err!("X operator anticommutes with check {i}"));
    }
    let (gz, gx) = (&aux_z.graph, &aux_x.graph);
    if gz.n_vertices() != gx.n_vertices() {
        return Err(input_err!(
            "auxiliary graphs have {} and {} vertices; the toric width must match both",
            gz.n_vertices(),
            gx.n_vertices()
        ));
    }
    let width = gz.n_vertices();
    let toric = toric_code_rect(layers, width)?;
    let sz = skiptree(gz)?;
    let sx = skiptree(gx)?;
    let n = base.n();
    let off = MergeOffsets {
        edges_z: n,
        toric: n + gz.n_edges(),
        edges_x: n + gz.n_edges() + toric.n(),
        n: n + gz.n_edges() + toric.n() + gx.n_edges(),
    };
    let total = off.n;
    let ez = |e: usize| off.edges_z + e;
    let ex = |e: usize| off.edges_x + e;
    let tq = |q: usize| off.toric + q;

    let mut ops = Vec::new();
    for c in base.check_operators() {
        let mz = bfs_matching(gz, &odd_image(&aux_z.port, c.x_part()))?;
        let mx = bfs_matching(gx, &odd_image(&aux_x.port, c.z_part()))?;
        let mut x = c.x_part().to_vec();
        x.extend(mz.iter().map(|&e| ez(e)));
        let mut z = c.z_part().to_vec();
        z.extend(mx.iter().map(|&e| ex(e)));
        ops.push(PauliOperator::new(total, &x, &z)?);
    }
    let owners_z = aux_z.port.owners();
    let adj_z = gz.adjacency();
    for v in 0..width {
        let mut z: Vec<usize> = owners_z[v].clone();
        z.extend(adj_z[v].iter().map(|&(_, e)| ez(e)));
        z.push(tq(toric.qz(0, sz.label[v])));
        ops.push(PauliOperator::z_type(total, &odd_only(z))?);
    }
    for i in 0..aux_z.basis.len() {
        let x: Vec<usize> = aux_z.basis.cycle(i).iter().map(|&e| ez(e)).collect();
        ops.push(PauliOperator::x_type(total, &x)?);
    }
    for (r, op) in toric.code.check_operators().iter().enumerate() {
        let mut x: Vec<usize> = op.x_part().iter().map(|&q| tq(q)).collect();
        let mut z: Vec<usize> = op.z_part().iter().map(|&q| tq(q)).collect();
        if r < width {
            x.extend(sz.t.row(r).iter().map(|&e| ez(e)));
        } else if r >= toric.z_check(layers - 1, 0) {
            let j = r - toric.z_check(layers - 1, 0);
            z.extend(sx.t.row((j + width - 1) % width).iter().map(|&e| ex(e)));
        }
        ops.push(PauliOperator::new(total, &x, &z)?);
    }
    let owners_x = aux_x.port.owners();
    let adj_x = gx.adjacency();
    for v in 0..width {
        let mut x: Vec<usize> = owners_x[v].clone();
        x.extend(adj_x[v].iter().map(|&(_, e)| ex(e)));
        x.push(tq(toric.qx(layers - 1, sx.label[v])));
        ops.push(PauliOperator::x_type(total, &odd_only(x))?);
    }
    for i in 0..aux_x.basis.len() {
        let z: Vec<usize> = aux_x.basis.cycle(i).iter().map(|&e| ex(e)).collect();
        ops.push(PauliOperator::z_type(total, &z)?);
    }
    let mut code = StabilizerCode::from_operators(total, &ops)?;
    for l in base.logicals() {
        let even_z = odd_image(&aux_z.port, l.op.x_part()).len().is_multiple_of(2);
        let even_x = odd_image(&aux_x.port, l.op.z_part()).len().is_multiple_of(2);
        if !(even_z && even_x) {
            continue;
        }
        let mz = bfs_matching(gz, &odd_image(&aux_z.port, l.op.x_part()))?;
        let mx = bfs_matching(gx, &odd_image(&aux_x.port, l.op.z_part()))?;
        let mut x = l.op.x_part().to_vec();
        x.extend(mz.iter().map(|&e| ez(e)));
        let mut z = l.op.z_part().to_vec();
        z.extend(mx.iter().map(|&e| ex(e)));
        let op = PauliOperator::new(total, &x, &z)?;
        if code.commutes_with_checks(&op) {
            code.add_logical(&l.name, op)?;
        }
    }
    let blocks = vec![
        (String::from("T_Z"), sz.t.clone()),
        (String::from("P_Z"), sz.p.clone()),
        (String::from("T_X"), sx.t.clone()),
        (String::from("P_X"), sx.p.clone()),
        (String::from("G_Z"), gz.incidence_matrix()),
        (String::from("G_X"), gx.incidence_matrix()),
    ];
    Ok(MergedCode {
        base: base.clone(),
        toric,
        code,
        offsets: off,
        n_edges_z: gz.n_edges(),
        n_edges_x: gx.n_edges(),
        n_vertices_z: width,
        n_vertices_x: width,
        blocks,
    })
}

fn odd_image(port: &crate::surgery::PortMap, qubits: &[usize]) -> Vec<usize> {
    let mut v = Vec::new();
    for &q in qubits {
        v.extend_from_slice(port.vertices_of(q));
    }
    odd_only(v)
}

fn odd_only(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    let mut out: Vec<usize> = Vec::new();
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}
