use proptest::prelude::*;
use qsw_core::delaunay::{self, Perturb, PointSet2D};
use qsw_core::expansion::{self, ExpansionQuery};
use qsw_core::skiptree::{self, Variant};
use qsw_core::surgery::{self, AuxOptions};
use qsw_core::toric::toric_code;
use qsw_core::{Graph, SparseBitMatrix};

fn matrix() -> impl Strategy<Value = SparseBitMatrix> {
    (1usize..40, 1usize..40).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(0..c, 0..6), r)
            .prop_map(move |rows| {
                let rows = rows
                    .into_iter()
                    .map(|mut row| {
                        row.sort_unstable();
                        row.dedup();
                        row
                    })
                    .collect();
                SparseBitMatrix::from_rows(c, rows).unwrap()
            })
    })
}

/// Random spanning tree on `n` vertices plus extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..max_n).prop_flat_map(|n| {
        let tree = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n), 0..2 * n);
        (tree, extra).prop_map(move |(tree, extra)| {
            let mut edges: Vec<(usize, usize)> = tree.iter().enumerate().map(|(i, ix)| (ix.index(i + 1), i + 1)).collect();
            edges.extend(extra.into_iter().filter(|(u, v)| u != v));
            Graph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix()) {
        let null = m.nullspace_matrix();
        prop_assert_eq!(m.rank() + null.n_rows(), m.n_cols());
        prop_assert_eq!(m.transpose().rank(), m.rank());
        prop_assert_eq!(m.multiply(&null.transpose()).unwrap().rank(), 0);
    }

    #[test]
    fn product_transposes(a in matrix(), b in matrix()) {
        let b = SparseBitMatrix::from_rows(b.n_cols(), (0..a.n_cols()).map(|i| b.row(i % b.n_rows()).to_vec()).collect()).unwrap();
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.transpose(), b.transpose().multiply(&a.transpose()).unwrap());
        prop_assert!(ab.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn skiptree_is_sparse_and_exact(g in connected_graph(60)) {
        for variant in [Variant::Cyclic, Variant::FullRank] {
            let r = match variant {
                Variant::Cyclic => skiptree::skiptree(&g),
                Variant::FullRank => skiptree::skiptree_hr(&g),
            }.unwrap();
            prop_assert!(skiptree::verify_skiptree(&g, &r.t, &r.p, variant).verified);
            prop_assert!(r.t.profile().within(3, 2));
        }
    }

    #[test]
    fn expansion_shrinks_with_larger_port(g in connected_graph(11), t in 1usize..5) {
        let n = g.n_vertices();
        let small: Vec<usize> = (0..n).step_by(2).collect();
        let all: Vec<usize> = (0..n).collect();
        let a = expansion::relative_expansion(&g, &ExpansionQuery::new(small, t), 24).unwrap().value;
        let b = expansion::relative_expansion(&g, &ExpansionQuery::new(all, t), 24).unwrap().value;
        prop_assert!(a >= b);
    }

    #[test]
    fn delaunay_satisfies_euler(pts in proptest::collection::btree_set((0i64..500, 0i64..500), 3..60)) {
        let set = PointSet2D::from_integers(pts.into_iter().collect()).unwrap();
        let tri = match delaunay::triangulate(&set, Perturb::Off) {
            Ok(t) => t,
            Err(_) => delaunay::triangulate(&set, Perturb::Seeded { seed: 1, epsilon: 64 }).unwrap(),
        };
        let (n, m) = (tri.graph.n_vertices(), tri.graph.n_edges());
        if !tri.triangles.is_empty() {
            prop_assert_eq!(tri.triangles.len() + n, m + 1);
        }
    }
}

#[test]
fn toric_surgery_keeps_remaining_logical() {
    for d in 2..=4 {
        let t = toric_code(d).unwrap();
        let support = t.logical("Z1").z_part().to_vec();
        let aux = surgery::build_aux_graph(&t.code, &support, &AuxOptions::new(d)).unwrap();
        let dc = surgery::assemble_deformed(&t.code, &aux.graph, &aux.port, &aux.basis).unwrap();
        let rep = surgery::verify_codespace(&dc);
        assert!(rep.verified);
        assert_eq!((rep.k_base, rep.k_deformed), (2, 1));
    }
}
