//! Repetition-code adapters joining auxiliary graphs, joint measurements of
//! products of logicals, and the expansion-free joint constructions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, invariant_err, Error, Result};
use crate::gf2::{normalize_xor, overlap, SparseBitMatrix};
use crate::graph::{fundamental_cycle_basis, CycleBasis, Graph, SpanningTree};
use crate::skiptree::{skiptree, verify_skiptree, SkipTreeResult, Variant};
use crate::stabilizer::{
    distance, min_weight_in_coset, restricted_nullspace, DistanceMode, DistanceResult, PauliOperator,
    StabilizerCode,
};
use crate::surgery::{
    assemble_deformed, check_measurable, dedup_odd, verify_codespace, AuxGraph, CodespaceReport,
    DeformedCode, PortMap,
};

/// Adapter between two equal-size connected port subsets. Entry `i` of
/// each port list is the vertex labeled `i` by SkipTree on the induced
/// subgraph, and adapter edge `i` joins the two label-`i` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdapterPlan {
    pub left_port: Vec<usize>,
    pub right_port: Vec<usize>,
    /// Row `i`: host edges of the left tree path from label `i` to `i+1`.
    pub left_paths: Vec<Vec<usize>>,
    pub right_paths: Vec<Vec<usize>>,
    /// SkipTree output on the induced subgraphs (absent for one vertex).
    pub left_tree: Option<SkipTreeResult>,
    pub right_tree: Option<SkipTreeResult>,
}

impl AdapterPlan {
    pub fn size(&self) -> usize {
        self.left_port.len()
    }

    /// `(left vertex, right vertex)` for every adapter edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.left_port.iter().copied().zip(self.right_port.iter().copied()).collect()
    }
}

struct Side {
    port: Vec<usize>,
    paths: Vec<Vec<usize>>,
    tree: Option<SkipTreeResult>,
}

fn label_side(g: &Graph, star: &[usize], which: &str) -> Result<Side> {
    let (sub, host) = g.induced_subgraph(star)?;
    if !sub.is_connected() {
        return Err(input_err!("{which} port subset does not induce a connected subgraph"));
    }
    if star.len() == 1 {
        return Ok(Side {
            port: star.to_vec(),
            paths: vec![Vec::new()],
            tree: None,
        });
    }
    let st = skiptree(&sub)?;
    let port = st.order.iter().map(|&v| star[v]).collect();
    let paths = st.t.rows().map(|r| r.iter().map(|&e| host[e]).collect()).collect();
    Ok(Side {
        port,
        paths,
        tree: Some(st),
    })
}

/// Plans the adapter between `pl_star` in `gl` and `pr_star` in `gr`.
pub fn plan_adapter(gl: &Graph, pl_star: &[usize], gr: &Graph, pr_star: &[usize]) -> Result<AdapterPlan> {
    if pl_star.len() != pr_star.len() {
        return Err(input_err!(
            "adapter ports differ in size: {} on the left, {} on the right",
            pl_star.len(),
            pr_star.len()
        ));
    }
    if pl_star.is_empty() {
        return Err(input_err!("adapter ports are empty"));
    }
    let left = label_side(gl, pl_star, "left")?;
    let right = label_side(gr, pr_star, "right")?;
    Ok(AdapterPlan {
        left_port: left.port,
        right_port: right.port,
        left_paths: left.paths,
        right_paths: right.paths,
        left_tree: left.tree,
        right_tree: right.tree,
    })
}

/// Recomputes `T G P = H_C` on both induced subgraphs of the plan.
pub fn verify_plan(gl: &Graph, gr: &Graph, plan: &AdapterPlan) -> Result<bool> {
    let mut ok = true;
    for (g, port, tree) in [
        (gl, &plan.left_port, &plan.left_tree),
        (gr, &plan.right_port, &plan.right_tree),
    ] {
        if let Some(st) = tree {
            let mut star = port.clone();
            star.sort_unstable();
            let (sub, _) = g.induced_subgraph(&star)?;
            ok &= verify_skiptree(&sub, &st.t, &st.p, Variant::Cyclic).verified;
        }
    }
    Ok(ok)
}

/// Adapted graph: vertices of `gl`, then `gr` shifted by `gl.n_vertices()`;
/// edges of `gl`, then the adapter edges, then `gr`. The cycle basis keeps
/// both bases and adds one row per label: left path, two adapter edges,
/// right path.
pub fn join(gl: &Graph, basis_l: &CycleBasis, gr: &Graph, basis_r: &CycleBasis, plan: &AdapterPlan) -> Result<(Graph, CycleBasis)> {
    let nl = gl.n_vertices();
    let ml = gl.n_edges();
    let a = plan.size();
    let mut edges: Vec<(usize, usize)> = gl.edges().to_vec();
    edges.extend(plan.edges().into_iter().map(|(u, v)| (u, v + nl)));
    edges.extend(gr.edges().iter().map(|&(u, v)| (u + nl, v + nl)));
    let g = Graph::new(nl + gr.n_vertices(), edges)?;
    let right_edge = |e: usize| e + ml + a;
    let mut rows: Vec<Vec<usize>> = basis_l.matrix().rows().map(<[usize]>::to_vec).collect();
    if a > 1 {
        for i in 0..a {
            let mut row = plan.left_paths[i].clone();
            row.push(ml + i);
            row.push(ml + (i + 1) % a);
            row.extend(plan.right_paths[i].iter().map(|&e| right_edge(e)));
            rows.push(normalize_xor(row));
        }
    }
    rows.extend(basis_r.matrix().rows().map(|r| r.iter().map(|&e| right_edge(e)).collect()));
    let basis = CycleBasis::new(&g, SparseBitMatrix::from_rows(g.n_edges(), rows)?)?;
    Ok((g, basis))
}

/// Lexicographically least support of a nontrivial irreducible Z logical
/// inside `support`. Enumerates the restricted null space up to dimension
/// `max_dim`; beyond that, descends by splitting on null-space rows.
pub fn irreducible_subsupport(code: &StabilizerCode, support: &[usize], max_dim: usize) -> Result<Vec<usize>> {
    let mut support = support.to_vec();
    support.sort_unstable();
    support.dedup();
    check_measurable(code, &support)?;
    let basis = restricted_nullspace(code, &support)?;
    if basis.len() == 1 {
        return Ok(support);
    }
    let nontrivial = |s: &[usize]| -> Result<bool> { Ok(!code.is_stabilizer(&PauliOperator::z_type(code.n(), s)?)) };
    let irreducible = |s: &[usize]| -> Result<bool> { Ok(restricted_nullspace(code, s)?.len() == 1) };
    if basis.len() <= max_dim {
        let mut elements: Vec<Vec<usize>> = Vec::with_capacity((1usize << basis.len()) - 1);
        let mut cur: Vec<usize> = Vec::new();
        for step in 1u64..(1u64 << basis.len()) {
            cur = normalize_xor([cur, basis[step.trailing_zeros() as usize].clone()].concat());
            elements.push(cur.clone());
        }
        elements.sort_unstable();
        for e in elements {
            if !e.is_empty() && nontrivial(&e)? && irreducible(&e)? {
                return Ok(e);
            }
        }
        return Err(invariant_err!("no irreducible logical inside a nontrivial support"));
    }
    let mut cur = support;
    loop {
        let rows = restricted_nullspace(code, &cur)?;
        if rows.len() == 1 {
            return Ok(cur);
        }
        let part = rows
            .iter()
            .find(|r| **r != cur)
            .cloned()
            .ok_or_else(|| invariant_err!("null space rows all equal the support"))?;
        let rest = normalize_xor([cur.clone(), part.clone()].concat());
        cur = if nontrivial(&part)? { part } else { rest };
    }
}

/// One logical of a joint measurement with its auxiliary graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointPart {
    pub logical: PauliOperator,
    pub aux: AuxGraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JointOptions {
    /// Largest allowed pairwise overlap of logical supports.
    pub overlap_bound: usize,
    /// Null-space dimension up to which sub-supports are enumerated.
    pub max_enumeration_dim: usize,
}

impl Default for JointOptions {
    fn default() -> Self {
        Self {
            overlap_bound: 4,
            max_enumeration_dim: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointMeasurement {
    pub deformed: DeformedCode,
    pub factors: Vec<PauliOperator>,
    /// Irreducible sub-support chosen in each factor.
    pub sub_supports: Vec<Vec<usize>>,
    /// Edges added to each part's graph, in that part's vertex labels.
    pub added_edges: Vec<Vec<(usize, usize)>>,
    /// First vertex of each part in the combined graph.
    pub vertex_offsets: Vec<usize>,
    /// Adapter `i` joins the combined graph so far to part `i + 1`.
    pub plans: Vec<AdapterPlan>,
}

fn check_factors(parts: &[JointPart], overlap_bound: usize) -> Result<()> {
    for (i, a) in parts.iter().enumerate() {
        for (j, b) in parts.iter().enumerate().skip(i + 1) {
            for q in a.logical.support() {
                let pa = (a.logical.x_part().binary_search(&q).is_ok(), a.logical.z_part().binary_search(&q).is_ok());
                let pb = (b.logical.x_part().binary_search(&q).is_ok(), b.logical.z_part().binary_search(&q).is_ok());
                if pb != (false, false) && pa != pb {
                    return Err(input_err!("logicals {i} and {j} anticommute locally on qubit {q}"));
                }
            }
            let shared = overlap(&a.logical.support(), &b.logical.support());
            if shared > overlap_bound {
                return Err(input_err!(
                    "logicals {i} and {j} share {shared} qubits, above the overlap bound {overlap_bound}"
                ));
            }
        }
    }
    for (i, p) in parts.iter().enumerate() {
        if !p.logical.is_z_type() {
            return Err(input_err!("logical {i} is not Z-type; rotate it with single-qubit Cliffords first"));
        }
        if p.aux.port.odd_support() != p.logical.z_part() {
            return Err(input_err!("port of part {i} does not have odd multiplicity exactly on its logical"));
        }
        if p.aux.port.n_vertices() != p.aux.graph.n_vertices() {
            return Err(input_err!("port of part {i} addresses the wrong number of vertices"));
        }
        if !p.aux.graph.is_connected() {
            return Err(input_err!("auxiliary graph of part {i} is disconnected"));
        }
    }
    Ok(())
}

struct Prepared {
    graph: Graph,
    rows: Vec<Vec<usize>>,
    sub_port: Vec<usize>,
    added: Vec<(usize, usize)>,
}

fn add_edge_with_cycle(g: &mut Graph, rows: &mut Vec<Vec<usize>>, u: usize, v: usize) -> Result<()> {
    let mut path = g
        .shortest_path(u, v)
        .ok_or_else(|| Error::Infeasible(format!("vertices {u} and {v} are in different components")))?;
    let e = g.add_edge(u, v)?;
    path.push(e);
    rows.push(path);
    Ok(())
}

/// Makes the port image of `sub` induce a connected subgraph: pairs the
/// vertices of every check restricted to `sub`, then chains components.
fn connect_subport(code: &StabilizerCode, aux: &AuxGraph, sub: &[usize]) -> Result<Prepared> {
    let mut g = aux.graph.clone();
    let mut rows: Vec<Vec<usize>> = aux.basis.matrix().rows().map(<[usize]>::to_vec).collect();
    let mut sub_port: Vec<usize> = sub.iter().flat_map(|&q| aux.port.vertices_of(q).iter().copied()).collect();
    sub_port.sort_unstable();
    let mut added = Vec::new();
    let mut present: BTreeSet<(usize, usize)> = g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for r in code.x_parts().rows() {
        let hit: Vec<usize> = r.iter().copied().filter(|q| sub.binary_search(q).is_ok()).collect();
        let verts = dedup_odd(aux.port.image_of(&hit));
        for pair in verts.chunks_exact(2) {
            if present.insert((pair[0], pair[1])) {
                add_edge_with_cycle(&mut g, &mut rows, pair[0], pair[1])?;
                added.push((pair[0], pair[1]));
            }
        }
    }
    let (sub_graph, _) = g.induced_subgraph(&sub_port)?;
    let (comp, count) = sub_graph.connected_components();
    let mut lowest = vec![usize::MAX; count];
    for (i, &c) in comp.iter().enumerate() {
        lowest[c] = lowest[c].min(sub_port[i]);
    }
    for w in lowest.windows(2) {
        add_edge_with_cycle(&mut g, &mut rows, w[0], w[1])?;
        added.push((w[0], w[1]));
    }
    Ok(Prepared {
        graph: g,
        rows,
        sub_port,
        added,
    })
}

/// First `size` vertices of `subset` in BFS order of its induced subgraph
/// from its lowest vertex; connected by construction.
fn connected_prefix(g: &Graph, subset: &[usize], size: usize) -> Result<Vec<usize>> {
    let (sub, _) = g.induced_subgraph(subset)?;
    let tree = SpanningTree::bfs(&sub, 0)?;
    let mut by_depth: Vec<usize> = (0..subset.len()).collect();
    by_depth.sort_by_key(|&v| (tree.depth[v], v));
    let mut out: Vec<usize> = by_depth[..size].iter().map(|&v| subset[v]).collect();
    out.sort_unstable();
    Ok(out)
}

/// Measures the product of the factors' logicals with one deformed code.
/// Each part's graph is joined to the next by a SkipTree adapter between
/// connected port subsets; the port is the union of the parts' ports.
pub fn joint_measurement(code: &StabilizerCode, parts: &[JointPart], opts: &JointOptions) -> Result<JointMeasurement> {
    if parts.is_empty() {
        return Err(input_err!("joint measurement needs at least one logical"));
    }
    check_factors(parts, opts.overlap_bound)?;
    let factors: Vec<PauliOperator> = parts.iter().map(|p| p.logical.clone()).collect();
    if parts.len() == 1 {
        let p = &parts[0];
        let deformed = assemble_deformed(code, &p.aux.graph, &p.aux.port, &p.aux.basis)?;
        return Ok(JointMeasurement {
            deformed,
            factors,
            sub_supports: vec![p.logical.z_part().to_vec()],
            added_edges: vec![Vec::new()],
            vertex_offsets: vec![0],
            plans: Vec::new(),
        });
    }
    let mut sub_supports = Vec::new();
    let mut prepared = Vec::new();
    for p in parts {
        let sub = irreducible_subsupport(code, p.logical.z_part(), opts.max_enumeration_dim)?;
        prepared.push(connect_subport(code, &p.aux, &sub)?);
        sub_supports.push(sub);
    }
    let mut graph = prepared[0].graph.clone();
    let mut basis = CycleBasis::new(&graph, SparseBitMatrix::from_rows(graph.n_edges(), prepared[0].rows.clone())?)?;
    let mut vertex_offsets = vec![0];
    let mut plans = Vec::new();
    for i in 1..prepared.len() {
        let (prev, next) = (&prepared[i - 1], &prepared[i]);
        let size = prev.sub_port.len().min(next.sub_port.len());
        let offset = vertex_offsets[i - 1];
        let left: Vec<usize> = connected_prefix(&prev.graph, &prev.sub_port, size)?.iter().map(|v| v + offset).collect();
        let right = connected_prefix(&next.graph, &next.sub_port, size)?;
        let next_basis = CycleBasis::new(&next.graph, SparseBitMatrix::from_rows(next.graph.n_edges(), next.rows.clone())?)?;
        let plan = plan_adapter(&graph, &left, &next.graph, &right)?;
        vertex_offsets.push(graph.n_vertices());
        let (g, b) = join(&graph, &basis, &next.graph, &next_basis, &plan)?;
        graph = g;
        basis = b;
        plans.push(plan);
    }
    let mut sets: Vec<(usize, Vec<usize>)> = Vec::new();
    for (p, &off) in parts.iter().zip(&vertex_offsets) {
        for (q, vs) in p.aux.port.entries() {
            sets.push((q, vs.iter().map(|v| v + off).collect()));
        }
    }
    let port = PortMap::set_valued(graph.n_vertices(), &sets)?;
    let deformed = assemble_deformed(code, &graph, &port, &basis)?;
    Ok(JointMeasurement {
        deformed,
        factors,
        sub_supports,
        added_edges: prepared.into_iter().map(|p| p.added).collect(),
        vertex_offsets,
        plans,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointReport {
    pub codespace: CodespaceReport,
    /// Stabilizer membership of each factor after deformation.
    pub factors_in_stabilizers: Vec<bool>,
    pub verified: bool,
}

/// Product in the stabilizer group, no single factor in it (for more than
/// one factor), and the codespace checks.
pub fn verify_joint(jm: &JointMeasurement) -> JointReport {
    let codespace = verify_codespace(&jm.deformed);
    let n = jm.deformed.assembled.n();
    let factors_in_stabilizers: Vec<bool> = jm
        .factors
        .iter()
        .map(|f| {
            f.relabel(n, |q| q)
                .map(|op| jm.deformed.assembled.is_stabilizer(&op))
                .unwrap_or(false)
        })
        .collect();
    let verified = codespace.verified && (jm.factors.len() == 1 || factors_in_stabilizers.iter().all(|&b| !b));
    JointReport {
        codespace,
        factors_in_stabilizers,
        verified,
    }
}

/// Logicals measured by an expansion-free joint. Supports index the
/// qubits of each block separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionlessPairing {
    /// Measure `Z(z_left) Z(z_right)`.
    Single { z_left: Vec<usize>, z_right: Vec<usize> },
    /// Measure `Z(z_left) Z(z_right)` and `X(x_left) X(x_right)` together;
    /// the left code encodes two qubits.
    DualZx {
        z_left: Vec<usize>,
        x_left: Vec<usize>,
        z_right: Vec<usize>,
        x_right: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionlessOptions {
    /// Reject inputs whose larger operator is not minimum weight.
    pub require_minimum_weight: bool,
    /// Enumeration budget for block distances and the doubled-weight check.
    pub budget: u64,
}

impl Default for ExpansionlessOptions {
    fn default() -> Self {
        Self {
            require_minimum_weight: true,
            budget: crate::stabilizer::DEFAULT_DISTANCE_BUDGET,
        }
    }
}

/// Distance guarantee attached to an expansion-free joint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceBound {
    /// Larger operator is minimum weight: `min(d_l, d_r)`.
    Minimum(usize),
    /// Separate blocks only: `d_l + d_r - D`, clamped at zero.
    Additive(usize),
    /// Two simultaneous measurements: the right-code distance.
    Right(usize),
}

impl DistanceBound {
    pub fn value(self) -> usize {
        match self {
            DistanceBound::Minimum(d) | DistanceBound::Additive(d) | DistanceBound::Right(d) => d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionlessJoint {
    /// Left block followed by the right block.
    pub code: StabilizerCode,
    /// One deformation per measured product; the second stage of the dual
    /// mode is built in the Hadamard frame.
    pub stages: Vec<DeformedCode>,
    /// Final code in the original frame.
    pub assembled: StabilizerCode,
    /// Measured products on the combined qubits.
    pub measured: Vec<PauliOperator>,
    /// Single factors that must stay out of the stabilizer group.
    pub factors: Vec<PauliOperator>,
    pub d_left: usize,
    pub d_right: usize,
    /// Number of port vertices: the larger operator weight.
    pub port_size: usize,
    pub minimum_weight_holds: bool,
    /// Doubled-weight minimum of the left code in the dual mode.
    pub doubled_weight: Option<usize>,
    pub bound: DistanceBound,
}

fn exact_distance(code: &StabilizerCode, budget: u64, which: &str) -> Result<usize> {
    match distance(code, DistanceMode::Exhaustive { budget })? {
        DistanceResult::Exact { distance, .. } => Ok(distance),
        _ => Err(input_err!("{which} code encodes no logical qubits")),
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn fundamental_basis(g: &Graph) -> Result<CycleBasis> {
    fundamental_cycle_basis(g, &SpanningTree::bfs(g, 0)?)
}

/// Graph on `big.len()` vertices; vertex `i` carries `big[i]` and, for
/// `i < small.len()`, also `small[i]`. Checks overlapping either support
/// pair their vertices; components are chained by lowest vertex.
fn shared_port_graph(code: &StabilizerCode, big: &[usize], small: &[usize]) -> Result<(Graph, PortMap, CycleBasis)> {
    let mut sets: Vec<(usize, Vec<usize>)> = big.iter().enumerate().map(|(i, &q)| (q, vec![i])).collect();
    sets.extend(small.iter().enumerate().map(|(i, &q)| (q, vec![i])));
    let port = PortMap::shared(big.len(), &sets, 2)?;
    let mut g = Graph::empty(big.len());
    let mut present = BTreeSet::new();
    for r in code.x_parts().rows() {
        let verts = dedup_odd(port.image_of(r));
        for pair in verts.chunks_exact(2) {
            if present.insert((pair[0], pair[1])) {
                g.add_edge(pair[0], pair[1])?;
            }
        }
    }
    let (comp, count) = g.connected_components();
    let mut lowest = vec![usize::MAX; count];
    for (v, &c) in comp.iter().enumerate() {
        lowest[c] = lowest[c].min(v);
    }
    for w in lowest.windows(2) {
        g.add_edge(w[0], w[1])?;
    }
    let basis = fundamental_basis(&g)?;
    Ok((g, port, basis))
}

/// Orders a pair so the first operator is the heavier one, preferring a
/// minimum-weight operator on ties. Returns `(big, small, swapped)`.
fn order_pair(
    zl: &[usize],
    zr: &[usize],
    d_left: usize,
    d_right: usize,
) -> (bool, bool) {
    let (wl, wr) = (zl.len(), zr.len());
    let swapped = wr > wl || (wl == wr && wl != d_left && wr == d_right);
    let minimum = if swapped { wr == d_right } else { wl == d_left };
    (swapped, minimum)
}

/// Minimum weight of `Z_l X_l` times stabilizers and the conjugate
/// logicals of the other qubit pair. The conjugates are found among
/// products of the code's named logicals.
pub fn doubled_weight(code: &StabilizerCode, zl: &PauliOperator, xl: &PauliOperator, budget: u64) -> Result<(usize, PauliOperator)> {
    let named: Vec<PauliOperator> = code.logicals().iter().map(|l| l.op.clone()).collect();
    if named.len() > 12 {
        return Err(input_err!("too many named logicals ({}) to search for conjugates", named.len()));
    }
    let products: Vec<PauliOperator> = (1u32..(1u32 << named.len()))
        .map(|mask| {
            named
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(PauliOperator::identity(code.n()), |acc, (_, op)| acc.mul(op))
        })
        .collect();
    let x_conj = products
        .iter()
        .find(|p| !p.commutes_with(zl) && p.commutes_with(xl))
        .ok_or_else(|| input_err!("no named logical product is conjugate to the Z operator alone"))?;
    let z_conj = products
        .iter()
        .find(|p| !p.commutes_with(xl) && p.commutes_with(zl) && p.commutes_with(x_conj))
        .ok_or_else(|| input_err!("no named logical product is conjugate to the X operator alone"))?;
    min_weight_in_coset(code, &zl.mul(xl), &[x_conj.clone(), z_conj.clone()], budget)
}

/// Joint measurement across two separate blocks without expansion: the
/// port of the heavier operator contains the port of the lighter one, so
/// some vertices carry one qubit of each block.
pub fn expansionless_joint(
    left: &StabilizerCode,
    right: &StabilizerCode,
    pairing: &ExpansionlessPairing,
    opts: &ExpansionlessOptions,
) -> Result<ExpansionlessJoint> {
    let code = left.direct_sum(right, "l_", "r_")?;
    let shift = |v: &[usize]| -> Vec<usize> { v.iter().map(|q| q + left.n()).collect() };
    let d_left = exact_distance(left, opts.budget, "left")?;
    let d_right = exact_distance(right, opts.budget, "right")?;
    match pairing {
        ExpansionlessPairing::Single { z_left, z_right } => {
            let (zl, zr) = (sorted(z_left), sorted(z_right));
            check_measurable(left, &zl).map_err(|e| input_err!("left operator: {e}"))?;
            check_measurable(right, &zr).map_err(|e| input_err!("right operator: {e}"))?;
            let (swapped, minimum) = order_pair(&zl, &zr, d_left, d_right);
            if opts.require_minimum_weight && !minimum {
                return Err(input_err!(
                    "condition (b) fails: the heavier operator has weight {} but its code has distance {}",
                    zl.len().max(zr.len()),
                    if swapped { d_right } else { d_left }
                ));
            }
            let (zl_c, zr_c) = (zl.clone(), shift(&zr));
            let (big, small) = if swapped { (&zr_c, &zl_c) } else { (&zl_c, &zr_c) };
            let (g, port, basis) = shared_port_graph(&code, big, small)?;
            let stage = assemble_deformed(&code, &g, &port, &basis)?;
            let n = stage.assembled.n();
            let measured = PauliOperator::z_type(n, &[zl_c.clone(), zr_c.clone()].concat())?;
            let bound = if minimum {
                DistanceBound::Minimum(d_left.min(d_right))
            } else {
                DistanceBound::Additive((d_left + d_right).saturating_sub(big.len()))
            };
            Ok(ExpansionlessJoint {
                assembled: stage.assembled.clone(),
                measured: vec![measured],
                factors: vec![PauliOperator::z_type(n, &zl_c)?, PauliOperator::z_type(n, &zr_c)?],
                code,
                stages: vec![stage],
                d_left,
                d_right,
                port_size: big.len(),
                minimum_weight_holds: minimum,
                doubled_weight: None,
                bound,
            })
        }
        ExpansionlessPairing::DualZx {
            z_left,
            x_left,
            z_right,
            x_right,
        } => {
            let (zl, xl, zr, xr) = (sorted(z_left), sorted(x_left), sorted(z_right), sorted(x_right));
            if left.logical_qubit_count() != 2 {
                return Err(input_err!("left code encodes {} qubits, two are required", left.logical_qubit_count()));
            }
            if overlap(&zl, &xl) != 0 || overlap(&zr, &xr) != 0 {
                return Err(input_err!("the Z and X operators of a block must not overlap"));
            }
            let (zl_op, xl_op) = (PauliOperator::z_type(left.n(), &zl)?, PauliOperator::x_type(left.n(), &xl)?);
            let (zr_op, xr_op) = (PauliOperator::z_type(right.n(), &zr)?, PauliOperator::x_type(right.n(), &xr)?);
            for (op, code_ref, name) in [
                (&zl_op, left, "left Z"),
                (&xl_op, left, "left X"),
                (&zr_op, right, "right Z"),
                (&xr_op, right, "right X"),
            ] {
                if !code_ref.is_nontrivial_logical(op) {
                    return Err(input_err!("{name} operator is not a nontrivial logical"));
                }
            }
            if zl.len() != d_left || xl.len() != d_left {
                return Err(input_err!(
                    "left operators must have weight d_l = {d_left} (got {} and {})",
                    zl.len(),
                    xl.len()
                ));
            }
            if d_left < zr.len().max(xr.len()) {
                return Err(input_err!(
                    "d_l = {d_left} is below the right operator weight {}",
                    zr.len().max(xr.len())
                ));
            }
            let (w2, _) = doubled_weight(left, &zl_op, &xl_op, opts.budget)?;
            if w2 < 2 * d_left {
                return Err(input_err!("doubled-weight property fails: weight {w2} < 2 d_l = {}", 2 * d_left));
            }
            let (zr_c, xr_c) = (shift(&zr), shift(&xr));
            let (gz, pz, bz) = shared_port_graph(&code, &zl, &zr_c)?;
            let stage_z = assemble_deformed(&code, &gz, &pz, &bz)?;
            let rotated = stage_z.assembled.hadamard();
            let (gx, px, bx) = shared_port_graph(&rotated, &xl, &xr_c)?;
            let stage_x = assemble_deformed(&rotated, &gx, &px, &bx)?;
            let assembled = stage_x.assembled.hadamard();
            let n = assembled.n();
            let measured = vec![
                PauliOperator::z_type(n, &[zl.clone(), zr_c.clone()].concat())?,
                PauliOperator::x_type(n, &[xl.clone(), xr_c.clone()].concat())?,
            ];
            let factors = vec![
                PauliOperator::z_type(n, &zl)?,
                PauliOperator::z_type(n, &zr_c)?,
                PauliOperator::x_type(n, &xl)?,
                PauliOperator::x_type(n, &xr_c)?,
            ];
            Ok(ExpansionlessJoint {
                code,
                stages: vec![stage_z, stage_x],
                assembled,
                measured,
                factors,
                d_left,
                d_right,
                port_size: d_left,
                minimum_weight_holds: true,
                doubled_weight: Some(w2),
                bound: DistanceBound::Right(d_right),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionlessReport {
    pub commutes: bool,
    pub k_base: usize,
    pub k_deformed: usize,
    pub measured_in_stabilizers: bool,
    pub factors_excluded: bool,
    pub distance: DistanceResult,
    pub bound: usize,
    pub passes: bool,
}

/// Recomputes commutation, the qubit count, membership of the products
/// and exclusion of the factors, then compares the exhaustive distance
/// with the attached bound.
pub fn verify_expansionless(j: &ExpansionlessJoint, budget: u64) -> Result<ExpansionlessReport> {
    let commutes = j.assembled.checks().symplectic_commutes()?;
    let k_base = j.code.logical_qubit_count();
    let k_deformed = j.assembled.logical_qubit_count();
    let measured_in_stabilizers = j.measured.iter().all(|m| j.assembled.is_stabilizer(m));
    let factors_excluded = j.factors.iter().all(|f| !j.assembled.is_stabilizer(f));
    let distance = distance(&j.assembled, DistanceMode::Exhaustive { budget })?;
    let bound = j.bound.value();
    let passes = commutes
        && k_deformed + j.measured.len() == k_base
        && measured_in_stabilizers
        && factors_excluded
        && distance.lower_bound() >= bound;
    Ok(ExpansionlessReport {
        commutes,
        k_base,
        k_deformed,
        measured_in_stabilizers,
        factors_excluded,
        distance,
        bound,
        passes,
    })
}

/// Human-readable summary of a plan, used by build logs.
pub fn describe_plan(plan: &AdapterPlan) -> String {
    format!(
        "adapter with {} edges, left labels {:?}, right labels {:?}",
        plan.size(),
        plan.left_port,
        plan.right_port
    )
}
