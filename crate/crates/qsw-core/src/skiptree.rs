//! SkipTree: a sparse `T` and permutation `P` with `T G P` equal to the
//! cyclic repetition-code check matrix, and the skip-flag variant that
//! targets the full-rank matrix instead.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, Result};
use crate::gf2::{Canonical, SparseBitMatrix, SparsityProfile};
use crate::graph::{Graph, SpanningTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    First,
    Last,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `T G P = H_C`, `T` is `n x m`.
    Cyclic,
    /// `T G P = H_R`, `T` is `(n-1) x m`.
    FullRank,
}

impl Variant {
    pub fn target(self, n: usize) -> Result<SparseBitMatrix> {
        match self {
            Variant::Cyclic => SparseBitMatrix::canonical(Canonical::CyclicHC, n),
            Variant::FullRank => SparseBitMatrix::canonical(Canonical::FullRankHR, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkipTreeResult {
    pub variant: Variant,
    pub t: SparseBitMatrix,
    pub p: SparseBitMatrix,
    /// Label of each vertex.
    pub label: Vec<usize>,
    /// Vertex carrying each label.
    pub order: Vec<usize>,
    pub node_kind: Vec<NodeKind>,
    pub tree: SpanningTree,
}

struct Frame {
    v: usize,
    kind: NodeKind,
    skip: bool,
    next: usize,
}

fn label_tree(tree: &SpanningTree, variant: Variant) -> (Vec<usize>, Vec<NodeKind>) {
    let n = tree.n_vertices();
    let mut order = Vec::with_capacity(n);
    let mut kind = vec![NodeKind::First; n];
    let mut stack = vec![Frame {
        v: tree.root,
        kind: NodeKind::First,
        skip: false,
        next: 0,
    }];
    order.push(tree.root);
    while let Some(top) = stack.last_mut() {
        let children = &tree.children[top.v];
        if top.next == children.len() {
            if top.kind == NodeKind::Last {
                order.push(top.v);
            }
            stack.pop();
            continue;
        }
        let child = children[top.next];
        top.next += 1;
        let youngest = top.next == children.len();
        let (child_kind, child_skip) = match (variant, top.kind) {
            (Variant::Cyclic, NodeKind::First) => (NodeKind::Last, false),
            (Variant::Cyclic, NodeKind::Last) => (NodeKind::First, false),
            (Variant::FullRank, NodeKind::First) if youngest && !top.skip => (NodeKind::First, false),
            (Variant::FullRank, NodeKind::First) => (NodeKind::Last, false),
            (Variant::FullRank, NodeKind::Last) => (NodeKind::First, true),
        };
        kind[child] = child_kind;
        if child_kind == NodeKind::First {
            order.push(child);
        }
        stack.push(Frame {
            v: child,
            kind: child_kind,
            skip: child_skip,
            next: 0,
        });
    }
    (order, kind)
}

fn run(g: &Graph, variant: Variant) -> Result<SkipTreeResult> {
    let n = g.n_vertices();
    if n < 2 || g.n_edges() == 0 {
        return Err(input_err!(
            "SkipTree needs at least two vertices and one edge (got n = {n}, m = {})",
            g.n_edges()
        ));
    }
    let tree = SpanningTree::bfs(g, 0)?;
    let (order, node_kind) = label_tree(&tree, variant);
    let mut label = vec![0; n];
    for (l, &v) in order.iter().enumerate() {
        label[v] = l;
    }
    let n_rows = match variant {
        Variant::Cyclic => n,
        Variant::FullRank => n - 1,
    };
    let rows = (0..n_rows).map(|l| tree.path(order[l], order[(l + 1) % n])).collect();
    let t = SparseBitMatrix::from_rows(g.n_edges(), rows)?;
    let p = SparseBitMatrix::from_rows(n, label.iter().map(|&l| vec![l]).collect())?;
    Ok(SkipTreeResult {
        variant,
        t,
        p,
        label,
        order,
        node_kind,
        tree,
    })
}

/// Labels a BFS spanning tree rooted at vertex 0 and returns `T`, `P`
/// with `T G P = H_C`.
pub fn skiptree(g: &Graph) -> Result<SkipTreeResult> {
    run(g, Variant::Cyclic)
}

/// Skip-flag variant with `T G P = H_R`.
pub fn skiptree_hr(g: &Graph) -> Result<SkipTreeResult> {
    run(g, Variant::FullRank)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkipTreeReport {
    pub verified: bool,
    /// First entry where `T G P` differs from the target.
    pub mismatch: Option<(usize, usize)>,
    pub profile: SparsityProfile,
    pub max_path_len: usize,
    pub permutation_ok: bool,
}

/// Recomputes `T G P` from scratch and compares it with the target matrix.
pub fn verify_skiptree(g: &Graph, t: &SparseBitMatrix, p: &SparseBitMatrix, variant: Variant) -> SkipTreeReport {
    let profile = t.profile();
    let permutation_ok = p.n_rows() == g.n_vertices()
        && p.n_cols() == g.n_vertices()
        && p.profile() == SparsityProfile {
            max_row_weight: 1,
            max_col_weight: 1,
        }
        && p.nnz() == g.n_vertices();
    let mismatch = match (
        t.multiply(&g.incidence_matrix()).and_then(|tg| tg.multiply(p)),
        variant.target(g.n_vertices()),
    ) {
        (Ok(prod), Ok(target)) => prod.first_difference(&target),
        _ => Some((0, 0)),
    };
    SkipTreeReport {
        verified: mismatch.is_none() && permutation_ok,
        mismatch,
        profile,
        max_path_len: profile.max_row_weight,
        permutation_ok,
    }
}

/// Path cases from the row-weight argument: first-type node cases one to
/// four, last-type node cases a to e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathCase {
    LeafYoungest,
    LeafWithYoungerSibling,
    OldestChildHasChild,
    OldestChildIsLeaf,
    ParentIsRoot,
    ParentIsYoungest,
    Uncle,
    SiblingIsLeaf,
    Nephew,
}

impl PathCase {
    /// Tree distance from label `i` to label `i + 1` in this case.
    pub fn length(self) -> usize {
        match self {
            PathCase::LeafYoungest | PathCase::OldestChildIsLeaf | PathCase::ParentIsRoot => 1,
            PathCase::LeafWithYoungerSibling
            | PathCase::OldestChildHasChild
            | PathCase::ParentIsYoungest
            | PathCase::SiblingIsLeaf => 2,
            PathCase::Uncle | PathCase::Nephew => 3,
        }
    }
}

/// Classifies every path of a cyclic-variant result.
pub fn classify_paths(r: &SkipTreeResult) -> Vec<PathCase> {
    let tree = &r.tree;
    let is_youngest = |v: usize| match tree.parent[v] {
        Some(p) => tree.children[p].last() == Some(&v),
        None => true,
    };
    r.order
        .iter()
        .map(|&v| {
            let children = &tree.children[v];
            match r.node_kind[v] {
                NodeKind::First if children.is_empty() => {
                    if is_youngest(v) {
                        PathCase::LeafYoungest
                    } else {
                        PathCase::LeafWithYoungerSibling
                    }
                }
                NodeKind::First => {
                    if tree.children[children[0]].is_empty() {
                        PathCase::OldestChildIsLeaf
                    } else {
                        PathCase::OldestChildHasChild
                    }
                }
                NodeKind::Last => {
                    let p = tree.parent[v].expect("last-type nodes are never the root");
                    if is_youngest(v) {
                        if tree.parent[p].is_none() {
                            PathCase::ParentIsRoot
                        } else if is_youngest(p) {
                            PathCase::ParentIsYoungest
                        } else {
                            PathCase::Uncle
                        }
                    } else {
                        let sibs = &tree.children[p];
                        let pos = sibs.iter().position(|&s| s == v).expect("child of its parent");
                        if tree.children[sibs[pos + 1]].is_empty() {
                            PathCase::SiblingIsLeaf
                        } else {
                            PathCase::Nephew
                        }
                    }
                }
            }
        })
        .collect()
}
