//! Undirected multigraphs, spanning trees, cycle bases, thickening and
//! cellulation.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, invariant_err, Error, Result};
use crate::gf2::{SparseBitMatrix, SparsityProfile};

/// Undirected multigraph. Parallel edges are allowed, self-loops are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(input_err!("edge {i} = ({u}, {v}) references a vertex outside 0..{n}"));
            }
            if u == v {
                return Err(input_err!("edge {i} is a self-loop at vertex {u}"));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn path(n: usize) -> Self {
        Self {
            n,
            edges: (1..n).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n > 2 {
            g.edges.push((n - 1, 0));
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self { n, edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Appends an edge and returns its index.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        if u >= self.n || v >= self.n || u == v {
            return Err(input_err!("cannot add edge ({u}, {v}) to a graph on {} vertices", self.n));
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    /// Adds isolated vertices and returns the index of the first new one.
    pub fn add_vertices(&mut self, count: usize) -> usize {
        let first = self.n;
        self.n += count;
        first
    }

    /// The `m x n` edge-vertex incidence matrix.
    pub fn incidence_matrix(&self) -> SparseBitMatrix {
        let rows = self
            .edges
            .iter()
            .map(|&(u, v)| if u < v { vec![u, v] } else { vec![v, u] })
            .collect();
        SparseBitMatrix::from_rows(self.n, rows).expect("edges validated on construction")
    }

    /// Per-vertex `(neighbour, edge)` lists in edge-list order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Component id per vertex (numbered by lowest vertex) and the count.
    pub fn connected_components(&self) -> (Vec<usize>, usize) {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(w, _) in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().1 <= 1
    }

    /// BFS distances from `s` (`usize::MAX` when unreachable).
    pub fn bfs_distances(&self, s: usize) -> Vec<usize> {
        let adj = self.adjacency();
        bfs(&adj, s).0
    }

    /// Edge indices of a BFS-shortest path from `a` to `b`, ties broken by
    /// edge-list order.
    pub fn shortest_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        shortest_path_adj(&self.adjacency(), a, b)
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is
    /// `vertices[i]`. Also returns the host index of every kept edge.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut map = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(input_err!("vertex {v} out of range"));
            }
            if map[v] != usize::MAX {
                return Err(input_err!("vertex {v} listed twice"));
            }
            map[v] = i;
        }
        let mut edges = Vec::new();
        let mut host = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if map[u] != usize::MAX && map[v] != usize::MAX {
                edges.push((map[u], map[v]));
                host.push(e);
            }
        }
        Ok((Graph { n: vertices.len(), edges }, host))
    }

    /// Disjoint union; vertices and edges of `other` are shifted after ours.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        Graph {
            n: self.n + other.n,
            edges,
        }
    }
}

pub(crate) fn bfs(adj: &[Vec<(usize, usize)>], s: usize) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut via = vec![None; adj.len()];
    let mut q = VecDeque::new();
    dist[s] = 0;
    q.push_back(s);
    while let Some(u) = q.pop_front() {
        for &(w, e) in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                via[w] = Some((u, e));
                q.push_back(w);
            }
        }
    }
    (dist, via)
}

pub(crate) fn shortest_path_adj(adj: &[Vec<(usize, usize)>], a: usize, b: usize) -> Option<Vec<usize>> {
    let (dist, via) = bfs(adj, a);
    if dist[b] == usize::MAX {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = b;
    while cur != a {
        let (p, e) = via[cur]?;
        path.push(e);
        cur = p;
    }
    path.reverse();
    Some(path)
}

/// Rooted spanning tree of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    /// Host edge joining each vertex to its parent.
    pub parent_edge: Vec<Option<usize>>,
    /// Children in discovery order (oldest first).
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
    /// Sorted host edge indices used by the tree.
    pub tree_edges: Vec<usize>,
}

impl SpanningTree {
    /// BFS tree from `root`; children are discovered in edge-list order.
    pub fn bfs(g: &Graph, root: usize) -> Result<Self> {
        if root >= g.n {
            return Err(input_err!("root {root} outside a graph on {} vertices", g.n));
        }
        let adj = g.adjacency();
        let (dist, via) = bfs(&adj, root);
        if let Some(v) = dist.iter().position(|&d| d == usize::MAX) {
            return Err(Error::Disconnected { root, vertex: v });
        }
        // Replay the BFS to list children in discovery order.
        let mut seen = vec![false; g.n];
        let mut q = VecDeque::from([root]);
        seen[root] = true;
        let mut children = vec![Vec::new(); g.n];
        while let Some(u) = q.pop_front() {
            for &(w, e) in &adj[u] {
                if !seen[w] && via[w] == Some((u, e)) {
                    seen[w] = true;
                    children[u].push(w);
                    q.push_back(w);
                }
            }
        }
        let parent: Vec<Option<usize>> = via.iter().map(|x| x.map(|(p, _)| p)).collect();
        let parent_edge: Vec<Option<usize>> = via.iter().map(|x| x.map(|(_, e)| e)).collect();
        let mut tree_edges: Vec<usize> = parent_edge.iter().flatten().copied().collect();
        tree_edges.sort_unstable();
        Ok(Self {
            root,
            parent,
            parent_edge,
            children,
            depth: dist,
            tree_edges,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.parent.len()
    }

    /// Host edges on the unique tree path between `a` and `b`, ordered from
    /// `a` towards `b`.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let (mut x, mut y) = (a, b);
        let mut from_a = Vec::new();
        let mut from_b = Vec::new();
        while self.depth[x] > self.depth[y] {
            from_a.push(self.parent_edge[x].expect("non-root"));
            x = self.parent[x].expect("non-root");
        }
        while self.depth[y] > self.depth[x] {
            from_b.push(self.parent_edge[y].expect("non-root"));
            y = self.parent[y].expect("non-root");
        }
        while x != y {
            from_a.push(self.parent_edge[x].expect("non-root"));
            from_b.push(self.parent_edge[y].expect("non-root"));
            x = self.parent[x].expect("non-root");
            y = self.parent[y].expect("non-root");
        }
        from_b.reverse();
        from_a.extend(from_b);
        from_a
    }
}

/// Cycle basis of a graph: rows are cycles over the edge index space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    matrix: SparseBitMatrix,
}

impl CycleBasis {
    /// Wraps `matrix` after checking it is a complete cycle basis of `g`.
    pub fn new(g: &Graph, matrix: SparseBitMatrix) -> Result<Self> {
        check_cycle_basis(g, &matrix)?;
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &SparseBitMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SparseBitMatrix {
        self.matrix
    }

    pub fn len(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.n_rows() == 0
    }

    pub fn cycle(&self, i: usize) -> &[usize] {
        self.matrix.row(i)
    }

    pub fn profile(&self) -> SparsityProfile {
        self.matrix.profile()
    }
}

/// Checks `N G = 0` and `rank N = m - n + p`.
pub fn check_cycle_basis(g: &Graph, n: &SparseBitMatrix) -> Result<()> {
    if n.n_cols() != g.n_edges() {
        return Err(input_err!(
            "cycle basis has {} columns but the graph has {} edges",
            n.n_cols(),
            g.n_edges()
        ));
    }
    let boundary = n.multiply(&g.incidence_matrix())?;
    if let Some(r) = boundary.rows().position(|r| !r.is_empty()) {
        return Err(invariant_err!("cycle {r} has a nonzero boundary"));
    }
    let (_, p) = g.connected_components();
    let expected = g.n_edges() + p - g.n_vertices();
    let rank = n.rank();
    if rank != expected {
        return Err(invariant_err!("cycle basis has rank {rank}, the cyclomatic number is {expected}"));
    }
    Ok(())
}

/// One cycle per non-tree edge: the edge plus the tree path between its ends.
pub fn fundamental_cycle_basis(g: &Graph, t: &SpanningTree) -> Result<CycleBasis> {
    if t.n_vertices() != g.n_vertices() || t.tree_edges.len() + 1 != g.n_vertices() {
        return Err(input_err!("spanning tree does not match the graph"));
    }
    let mut in_tree = vec![false; g.n_edges()];
    for &e in &t.tree_edges {
        if e >= g.n_edges() {
            return Err(input_err!("tree edge {e} outside the graph"));
        }
        in_tree[e] = true;
    }
    for v in 0..g.n {
        if let (Some(p), Some(e)) = (t.parent[v], t.parent_edge[v]) {
            let (a, b) = g.edges[e];
            if !((a == v && b == p) || (a == p && b == v)) {
                return Err(input_err!("tree edge {e} does not join {v} to its parent {p}"));
            }
        }
    }
    let mut rows = Vec::new();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        let mut row = t.path(u, v);
        row.push(e);
        rows.push(row);
    }
    CycleBasis::new(g, SparseBitMatrix::from_rows(g.n_edges(), rows)?)
}

/// A graph stacked `layers` times with rungs between consecutive copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thickened {
    pub graph: Graph,
    pub layers: usize,
    pub base_vertices: usize,
    pub base_edges: usize,
}

impl Thickened {
    /// Vertex index of base vertex `v` in layer `l`.
    pub fn vertex(&self, v: usize, l: usize) -> usize {
        l * self.base_vertices + v
    }

    /// `(base vertex, layer)` of a thickened vertex.
    pub fn coord(&self, x: usize) -> (usize, usize) {
        (x % self.base_vertices, x / self.base_vertices)
    }

    /// Index of the copy of base edge `e` in layer `l`.
    pub fn layer_edge(&self, e: usize, l: usize) -> usize {
        l * self.base_edges + e
    }

    /// Index of the rung joining `(v, l)` and `(v, l + 1)`.
    pub fn rung_edge(&self, v: usize, l: usize) -> usize {
        self.layers * self.base_edges + l * self.base_vertices + v
    }
}

/// Cartesian product with the path on `layers` vertices. Layer copies come
/// first in the edge list, then rungs layer by layer.
pub fn thicken(g: &Graph, layers: usize) -> Result<Thickened> {
    if layers == 0 {
        return Err(input_err!("thickening needs at least one layer"));
    }
    let (n, m) = (g.n, g.edges.len());
    let mut edges = Vec::with_capacity(layers * m + (layers - 1) * n);
    for l in 0..layers {
        edges.extend(g.edges.iter().map(|&(u, v)| (l * n + u, l * n + v)));
    }
    for l in 0..layers - 1 {
        edges.extend((0..n).map(|v| (l * n + v, (l + 1) * n + v)));
    }
    Ok(Thickened {
        graph: Graph { n: n * layers, edges },
        layers,
        base_vertices: n,
        base_edges: m,
    })
}

/// Cycle basis of a thickened graph: every rung square plus one copy of
/// each base cycle in its assigned layer (round-robin when `assignment` is
/// `None`).
pub fn layered_cycle_basis(
    g: &Graph,
    base: &CycleBasis,
    th: &Thickened,
    assignment: Option<&[usize]>,
) -> Result<CycleBasis> {
    let layers = th.layers;
    if th.base_vertices != g.n || th.base_edges != g.n_edges() {
        return Err(input_err!("thickened graph does not come from this base graph"));
    }
    let assign: Vec<usize> = match assignment {
        Some(a) => {
            if a.len() != base.len() {
                return Err(input_err!("{} layer assignments for {} cycles", a.len(), base.len()));
            }
            if let Some(&l) = a.iter().find(|&&l| l >= layers) {
                return Err(input_err!("layer {l} outside 0..{layers}"));
            }
            a.to_vec()
        }
        None => (0..base.len()).map(|i| i % layers).collect(),
    };
    let mut rows = Vec::new();
    for l in 0..layers - 1 {
        for (e, &(u, v)) in g.edges.iter().enumerate() {
            rows.push(vec![th.layer_edge(e, l), th.layer_edge(e, l + 1), th.rung_edge(u, l), th.rung_edge(v, l)]);
        }
    }
    for (i, &l) in assign.iter().enumerate() {
        rows.push(base.cycle(i).iter().map(|&e| th.layer_edge(e, l)).collect());
    }
    CycleBasis::new(&th.graph, SparseBitMatrix::from_rows(th.graph.n_edges(), rows)?)
}

/// Orders the vertices of a simple cycle given as an edge set. Starts at the
/// lowest vertex and leaves through its lower-indexed cycle edge.
fn cycle_vertices(g: &Graph, cycle: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut inc: alloc::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &e in cycle {
        let (u, v) = g.edges[e];
        inc.entry(u).or_default().push(e);
        inc.entry(v).or_default().push(e);
    }
    if inc.values().any(|es| es.len() != 2) {
        return Err(input_err!("cycle {cycle:?} is not a simple cycle"));
    }
    let start = *inc.keys().next().ok_or_else(|| input_err!("empty cycle"))?;
    let mut verts = vec![start];
    let mut order = Vec::new();
    let mut cur = start;
    let mut e = inc[&start][0];
    loop {
        order.push(e);
        let (u, v) = g.edges[e];
        let next = if u == cur { v } else { u };
        if next == start {
            break;
        }
        verts.push(next);
        let es = &inc[&next];
        e = if es[0] == e { es[1] } else { es[0] };
        cur = next;
    }
    if order.len() != cycle.len() {
        return Err(input_err!("cycle {cycle:?} is not connected"));
    }
    Ok((verts, order))
}

/// Splits every basis cycle longer than `max_len` into a fan of shorter
/// cycles around its lowest vertex. Chords are appended to the edge list.
pub fn cellulate(g: &Graph, basis: &CycleBasis, max_len: usize) -> Result<(Graph, CycleBasis)> {
    if max_len < 3 {
        return Err(input_err!("cellulation needs max_len >= 3"));
    }
    let mut out = g.clone();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for i in 0..basis.len() {
        let cycle = basis.cycle(i);
        if cycle.len() <= max_len {
            rows.push(cycle.to_vec());
            continue;
        }
        let (verts, order) = cycle_vertices(g, cycle)?;
        let k = verts.len();
        let apex = verts[0];
        let step = max_len - 2;
        // Boundary runs v_a..v_b with b - a <= step, closed through the apex.
        let mut a = 1;
        let mut spoke = order[0];
        while a < k - 1 {
            let b = (a + step).min(k - 1);
            let closing = if b == k - 1 {
                order[k - 1]
            } else {
                out.add_edge(apex, verts[b])?
            };
            let mut piece = vec![spoke, closing];
            piece.extend_from_slice(&order[a..b]);
            rows.push(piece);
            spoke = closing;
            a = b;
        }
    }
    let n = SparseBitMatrix::from_rows(out.n_edges(), rows)?;
    Ok((out.clone(), CycleBasis::new(&out, n)?))
}
