//! Auxiliary-graph surgery: build a graph on the support of a Z-type
//! logical, attach it as edge qubits with vertex and cycle checks, and
//! verify the resulting deformed code.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{input_err, Error, Result};
use crate::expansion::{self, ExpansionQuery};
use crate::gf2::{sym_diff, SparseBitMatrix, SparsityProfile};
use crate::graph::{
    bfs, cellulate, fundamental_cycle_basis, layered_cycle_basis, shortest_path_adj, thicken, CycleBasis, Graph,
    SpanningTree,
};
use crate::stabilizer::{distance, DistanceMode, DistanceResult, PauliOperator, StabilizerCode};

/// Qubit to vertex-set map wiring a logical's support into a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortMap {
    n_vertices: usize,
    map: BTreeMap<usize, Vec<usize>>,
}

impl PortMap {
    /// Injective port: each qubit owns one vertex.
    pub fn injective(n_vertices: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let sets: Vec<(usize, Vec<usize>)> = pairs.iter().map(|&(q, v)| (q, vec![v])).collect();
        Self::set_valued(n_vertices, &sets)
    }

    /// Set-valued port; vertex sets of different qubits must be disjoint.
    pub fn set_valued(n_vertices: usize, sets: &[(usize, Vec<usize>)]) -> Result<Self> {
        Self::build(n_vertices, sets, 1)
    }

    /// Non-injective port where a vertex may be wired to up to
    /// `max_owners` qubits. Used when one vertex serves a qubit of each of
    /// two code blocks.
    pub fn shared(n_vertices: usize, sets: &[(usize, Vec<usize>)], max_owners: usize) -> Result<Self> {
        Self::build(n_vertices, sets, max_owners)
    }

    fn build(n_vertices: usize, sets: &[(usize, Vec<usize>)], max_owners: usize) -> Result<Self> {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
        for (q, vs) in sets {
            let entry = map.entry(*q).or_default();
            for &v in vs {
                if v >= n_vertices {
                    return Err(input_err!("port vertex {v} outside 0..{n_vertices}"));
                }
                if entry.contains(&v) {
                    return Err(input_err!("vertex {v} listed twice for qubit {q}"));
                }
                if owners[v].len() == max_owners {
                    return Err(input_err!("vertex {v} is wired to qubits {:?} and {q}", owners[v]));
                }
                owners[v].push(*q);
                entry.push(v);
            }
            entry.sort_unstable();
        }
        map.retain(|_, vs| !vs.is_empty());
        Ok(Self { n_vertices, map })
    }

    /// Qubit `support[i]` wired to vertex `i`.
    pub fn identity(support: &[usize]) -> Self {
        let pairs: Vec<(usize, usize)> = support.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        Self::injective(support.len(), &pairs).expect("distinct vertices")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.keys().copied()
    }

    pub fn vertices_of(&self, q: usize) -> &[usize] {
        self.map.get(&q).map_or(&[], Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.map.iter().map(|(&q, vs)| (q, vs.as_slice()))
    }

    /// Qubits wired to each vertex, ascending.
    pub fn owners(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_vertices];
        for (&q, vs) in &self.map {
            for &v in vs {
                out[v].push(q);
            }
        }
        out
    }

    /// Largest number of qubits sharing one vertex.
    pub fn max_sharing(&self) -> usize {
        self.owners().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted image of the port.
    pub fn port(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.map.values().flatten().copied().collect();
        p.sort_unstable();
        p
    }

    /// Qubits with an odd number of vertices: the measured support.
    pub fn odd_support(&self) -> Vec<usize> {
        self.map.iter().filter(|(_, vs)| vs.len() % 2 == 1).map(|(&q, _)| q).collect()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.map.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Sends every vertex through `f` into a graph with `n_vertices`.
    pub fn remap(&self, n_vertices: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        let sets: Vec<(usize, Vec<usize>)> =
            self.map.iter().map(|(&q, vs)| (q, vs.iter().map(|&v| f(v)).collect())).collect();
        Self::build(n_vertices, &sets, self.max_sharing().max(1))
    }

    /// Port vertices hit by the X-part of `op`, with multiplicity cancelled.
    pub(crate) fn image_of(&self, qubits: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for q in qubits {
            out.extend_from_slice(self.vertices_of(*q));
        }
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionMode {
    None,
    /// Add seeded random edges across the worst cut.
    Edges { degree_cap: usize, seed: u64 },
    /// Thicken; the layer count is derived from the expansion unless given.
    Thicken { layers: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxOptions {
    pub target_t: usize,
    pub expansion: ExpansionMode,
    pub cellulate_len: Option<usize>,
    /// Vertex cap for brute-force expansion.
    pub cap: usize,
}

impl AuxOptions {
    pub fn new(target_t: usize) -> Self {
        Self {
            target_t,
            expansion: ExpansionMode::None,
            cellulate_len: None,
            cap: expansion::DEFAULT_BRUTEFORCE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxGraph {
    pub graph: Graph,
    pub port: PortMap,
    pub basis: CycleBasis,
    /// One line per construction step.
    pub log: Vec<String>,
}

pub(crate) fn check_measurable(code: &StabilizerCode, support: &[usize]) -> Result<PauliOperator> {
    if support.is_empty() {
        return Err(input_err!("logical support is empty"));
    }
    let zl = PauliOperator::z_type(code.n(), support)?;
    if let Some(i) = code.anticommuting_check(&zl) {
        return Err(input_err!("Z on the support anticommutes with check {i}"));
    }
    if code.is_stabilizer(&zl) {
        return Err(input_err!("Z on the support is a stabilizer, not a nontrivial logical"));
    }
    Ok(zl)
}

/// Pairing graph on the support: for each check overlapping the support in
/// its X-part, its port vertices are paired in index order; components are
/// then chained by their lowest vertices.
pub fn pairing_graph(code: &StabilizerCode, support: &[usize]) -> Result<Graph> {
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut g = Graph::empty(sorted.len());
    let mut present = alloc::collections::BTreeSet::new();
    for r in code.x_parts().rows() {
        let hit: Vec<usize> = r.iter().filter_map(|q| sorted.binary_search(q).ok()).collect();
        for pair in hit.chunks_exact(2) {
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
    Ok(g)
}

/// Builds an auxiliary graph for `Z(support)` following the options.
pub fn build_aux_graph(code: &StabilizerCode, support: &[usize], opts: &AuxOptions) -> Result<AuxGraph> {
    let mut support = support.to_vec();
    support.sort_unstable();
    support.dedup();
    check_measurable(code, &support)?;
    let mut log = Vec::new();
    let mut g = pairing_graph(code, &support)?;
    log.push(format!("pairing: {} vertices, {} edges", g.n_vertices(), g.n_edges()));
    let k = support.len();
    let all: Vec<usize> = (0..k).collect();
    let mut port = PortMap::identity(&support);
    match opts.expansion {
        ExpansionMode::None => {}
        ExpansionMode::Edges { degree_cap, seed } => {
            let before = g.n_edges();
            g = expansion::boost_by_edges(&g, &all, opts.target_t, degree_cap, seed, opts.cap)?;
            log.push(format!("boost: added {} edges", g.n_edges() - before));
        }
        ExpansionMode::Thicken { .. } => {}
    }
    let tree = SpanningTree::bfs(&g, 0)?;
    let mut basis = fundamental_cycle_basis(&g, &tree)?;
    if let ExpansionMode::Thicken { layers } = opts.expansion {
        let layers = match layers {
            Some(l) => l,
            None => expansion::boost_by_thickening(&g, &all, opts.target_t, opts.cap)?.thickened.layers,
        };
        let th = thicken(&g, layers)?;
        basis = layered_cycle_basis(&g, &basis, &th, None)?;
        port = port.remap(th.graph.n_vertices(), |v| th.vertex(v, 0))?;
        log.push(format!("thicken: {layers} layers, port in layer 0"));
        g = th.graph;
    }
    if let Some(len) = opts.cellulate_len {
        let before = g.n_edges();
        let (cg, cb) = cellulate(&g, &basis, len)?;
        g = cg;
        basis = cb;
        log.push(format!("cellulate: cycles <= {len}, {} chords", g.n_edges() - before));
    }
    Ok(AuxGraph { graph: g, port, basis, log })
}

/// Edge set whose boundary is exactly `targets`: repeatedly pairs the
/// lowest unmatched target with its BFS-nearest unmatched partner (ties by
/// index) and adds the BFS path.
pub fn bfs_matching(g: &Graph, targets: &[usize]) -> Result<Vec<usize>> {
    let adj = g.adjacency();
    let mut left: Vec<usize> = targets.to_vec();
    left.sort_unstable();
    left.dedup();
    if left.len() % 2 == 1 {
        return Err(input_err!("odd number of vertices ({}) cannot be matched", left.len()));
    }
    let mut edges: Vec<usize> = Vec::new();
    while !left.is_empty() {
        let a = left.remove(0);
        let (dist, _) = bfs(&adj, a);
        let (pos, &b) = left
            .iter()
            .enumerate()
            .filter(|(_, &b)| dist[b] != usize::MAX)
            .min_by_key(|(_, &b)| (dist[b], b))
            .ok_or_else(|| Error::Infeasible(format!("vertex {a} cannot reach another vertex needing a matching")))?;
        left.remove(pos);
        let mut path = shortest_path_adj(&adj, a, b).expect("reachable");
        path.sort_unstable();
        edges = sym_diff(&edges, &path);
    }
    Ok(edges)
}

/// A code deformed by attaching an auxiliary graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedCode {
    pub base: StabilizerCode,
    pub aux: Graph,
    pub port: PortMap,
    pub cycle_basis: CycleBasis,
    /// Measured support: qubits with odd port multiplicity.
    pub support: Vec<usize>,
    /// Matching edges of every base check (empty when undeformed).
    pub matchings: Vec<Vec<usize>>,
    pub assembled: StabilizerCode,
    /// Named sub-matrices: `G` edges x vertices, `N` cycles x edges,
    /// `M` base checks x edges, `F` qubits x vertices.
    pub blocks: Vec<(String, SparseBitMatrix)>,
}

impl DeformedCode {
    pub fn block(&self, name: &str) -> Option<&SparseBitMatrix> {
        self.blocks.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Qubit index of edge `e`.
    pub fn edge_qubit(&self, e: usize) -> usize {
        self.base.n() + e
    }

    pub fn vertex_check_range(&self) -> core::ops::Range<usize> {
        let s = self.base.checks().n_rows();
        s..s + self.aux.n_vertices()
    }

    pub fn cycle_check_range(&self) -> core::ops::Range<usize> {
        let s = self.vertex_check_range().end;
        s..s + self.cycle_basis.len()
    }

    pub fn measured_operator(&self) -> PauliOperator {
        PauliOperator::z_type(self.assembled.n(), &self.support).expect("support in range")
    }
}

fn deform_op(op: &PauliOperator, n_total: usize, g: &Graph, port: &PortMap, n_base: usize) -> Result<(PauliOperator, Vec<usize>)> {
    let targets = dedup_odd(port.image_of(op.x_part()));
    let mu = bfs_matching(g, &targets)?;
    let mut x = op.x_part().to_vec();
    x.extend(mu.iter().map(|&e| n_base + e));
    Ok((PauliOperator::new(n_total, &x, op.z_part())?, mu))
}

pub(crate) fn dedup_odd(mut v: Vec<usize>) -> Vec<usize> {
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

/// Assembles the deformed code: base checks deformed by matchings, one Z
/// vertex check per vertex and one X check per basis cycle. Base logicals
/// commuting with the measured operator are kept, deformed the same way.
pub fn assemble_deformed(code: &StabilizerCode, g: &Graph, port: &PortMap, basis: &CycleBasis) -> Result<DeformedCode> {
    if port.n_vertices() != g.n_vertices() {
        return Err(input_err!(
            "port addresses {} vertices but the graph has {}",
            port.n_vertices(),
            g.n_vertices()
        ));
    }
    if basis.matrix().n_cols() != g.n_edges() {
        return Err(input_err!("cycle basis has {} columns for {} edges", basis.matrix().n_cols(), g.n_edges()));
    }
    crate::graph::check_cycle_basis(g, basis.matrix())?;
    if let Some(q) = port.qubits().find(|&q| q >= code.n()) {
        return Err(input_err!("port qubit {q} outside 0..{}", code.n()));
    }
    let support = port.odd_support();
    let zl = check_measurable(code, &support)?;
    let n = code.n();
    let m = g.n_edges();
    let total = n + m;
    let mut ops = Vec::new();
    let mut matchings = Vec::new();
    for c in code.check_operators() {
        let (op, mu) = deform_op(&c, total, g, port, n)?;
        ops.push(op);
        matchings.push(mu);
    }
    let adj = g.adjacency();
    let owners = port.owners();
    for v in 0..g.n_vertices() {
        let mut z: Vec<usize> = owners[v].clone();
        z.extend(adj[v].iter().map(|&(_, e)| n + e));
        ops.push(PauliOperator::z_type(total, &dedup_odd(z))?);
    }
    for i in 0..basis.len() {
        let x: Vec<usize> = basis.cycle(i).iter().map(|&e| n + e).collect();
        ops.push(PauliOperator::x_type(total, &x)?);
    }
    let mut assembled = StabilizerCode::from_operators(total, &ops)?;
    for l in code.logicals() {
        if l.op.commutes_with(&zl) {
            let (op, _) = deform_op(&l.op, total, g, port, n)?;
            assembled.add_logical(&l.name, op)?;
        }
    }
    let f_rows: Vec<Vec<usize>> = (0..n).map(|q| port.vertices_of(q).to_vec()).collect();
    let blocks = vec![
        (String::from("G"), g.incidence_matrix()),
        (String::from("N"), basis.matrix().clone()),
        (String::from("M"), SparseBitMatrix::from_rows(m, matchings.clone())?),
        (String::from("F"), SparseBitMatrix::from_rows(g.n_vertices(), f_rows)?),
    ];
    Ok(DeformedCode {
        base: code.clone(),
        aux: g.clone(),
        port: port.clone(),
        cycle_basis: basis.clone(),
        support,
        matchings,
        assembled,
        blocks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesiderataReport {
    pub connected: bool,
    pub max_vertex_degree: usize,
    pub max_port_multiplicity: usize,
    pub max_matching_len: usize,
    pub max_edge_matching_count: usize,
    pub cycle_profile: SparsityProfile,
    /// `beta_t(G, port) >= 1`, when the graph fits under the cap.
    pub expansion_certified: Option<bool>,
    /// Witness cut when certification failed.
    pub expansion_witness: Option<Vec<usize>>,
}

/// Recomputes every desideratum from the graph, port, matchings and basis.
pub fn desiderata(
    g: &Graph,
    port: &PortMap,
    basis: &CycleBasis,
    matchings: &[Vec<usize>],
    t: usize,
    cap: usize,
) -> Result<DesiderataReport> {
    let mut per_edge = vec![0usize; g.n_edges()];
    for mu in matchings {
        for &e in mu {
            per_edge[e] += 1;
        }
    }
    let (expansion_certified, expansion_witness) = if g.n_vertices() <= cap.min(expansion::MAX_BRUTEFORCE_CAP) {
        let q = ExpansionQuery::new(port.port(), t).with_threshold(Ratio::from_integer(1));
        let c = expansion::certify_at_least(g, &q, cap)?;
        (Some(c.holds), c.counterexample)
    } else {
        (None, None)
    };
    Ok(DesiderataReport {
        connected: g.is_connected(),
        max_vertex_degree: g.max_degree(),
        max_port_multiplicity: port.max_multiplicity(),
        max_matching_len: matchings.iter().map(Vec::len).max().unwrap_or(0),
        max_edge_matching_count: per_edge.into_iter().max().unwrap_or(0),
        cycle_profile: basis.profile(),
        expansion_certified,
        expansion_witness,
    })
}

impl DeformedCode {
    pub fn desiderata(&self, t: usize, cap: usize) -> Result<DesiderataReport> {
        desiderata(&self.aux, &self.port, &self.cycle_basis, &self.matchings, t, cap)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodespaceReport {
    pub commutes: bool,
    pub k_base: usize,
    pub k_deformed: usize,
    pub measured_in_stabilizers: bool,
    pub verified: bool,
}

/// Recomputes commutation, the logical-qubit count and stabilizer membership
/// of the measured operator.
pub fn verify_codespace(dc: &DeformedCode) -> CodespaceReport {
    let commutes = dc.assembled.checks().symplectic_commutes().unwrap_or(false);
    let k_base = dc.base.logical_qubit_count();
    let k_deformed = dc.assembled.logical_qubit_count();
    let measured_in_stabilizers = dc.assembled.is_stabilizer(&dc.measured_operator());
    CodespaceReport {
        commutes,
        k_base,
        k_deformed,
        measured_in_stabilizers,
        verified: commutes && k_deformed + 1 == k_base && measured_in_stabilizers,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMethod {
    Exhaustive,
    /// Budget exceeded; a weight-bounded scan below the base distance.
    WeightBounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub base_distance: usize,
    pub method: DistanceMethod,
    pub deformed: DistanceResult,
    pub passes: bool,
}

/// Compares the deformed distance with the base distance. `base_distance`
/// is computed exhaustively when not given.
pub fn verify_distance(dc: &DeformedCode, budget: u64, base_distance: Option<usize>) -> Result<DistanceReport> {
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
