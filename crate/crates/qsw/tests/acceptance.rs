//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout; the
//! process exits non-zero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use num_rational::Ratio;
use qsw::io;
use qsw::parallel;
use qsw_core::adapters::{self, ExpansionlessOptions, ExpansionlessPairing, JointOptions, JointPart};
use qsw_core::delaunay::{self, PointSet2D, Perturb};
use qsw_core::expansion::{self, Beta, ExpansionQuery};
use qsw_core::gf2::overlap;
use qsw_core::skiptree::{self, Variant};
use qsw_core::stabilizer::{self, repetition_code, steane_code, two_blocks, DistanceMode, DistanceResult};
use qsw_core::surgery::{self, AuxOptions, PortMap};
use qsw_core::toric::{self, toric_code};
use qsw_core::{Graph, PauliOperator, SpanningTree, SparseBitMatrix, StabilizerCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and sizes.
const SKIPTREE_GRAPHS: usize = 1000;
const SKIPTREE_MAX_N: usize = 500;
const SKIPTREE_MAX_M: usize = 5000;
const SKIPTREE_TIME_LIMIT: Duration = Duration::from_secs(10);
const SKIPTREE_MAX_ROW_WEIGHT: usize = 3;
const SKIPTREE_MAX_COL_WEIGHT: usize = 2;
const SKIPTREE_MAX_PATH_LEN: usize = 3;
const GF2_INSTANCES: usize = 500;
const GF2_MAX_DIM: usize = 128;
const EXPANSION_ORACLE_GRAPHS: usize = 100;
const EXPANSION_ORACLE_MAX_N: usize = 16;
const MONOTONE_INSTANCES: usize = 200;
const THICKEN_GRAPHS: usize = 50;
const SURGERY_D3_TIME_BUDGET: Duration = Duration::from_secs(60);
const ADAPTER_CYCLE_LEN_FLOOR: usize = 8;
const ADAPTER_EDGE_CYCLE_SLACK: usize = 2;
const BRUTEFORCE_VERTEX_CAP: usize = 24;
const DELAUNAY_SETS: usize = 100;
const DELAUNAY_MAX_POINTS: usize = 200;
const MATCH_PAIRS: usize = 1000;
const TORIC_RANK_MAX_D: usize = 6;
const TORIC_DISTANCE_MAX_D: usize = 4;
const DEHN_TWIST_TIME_LIMIT: Duration = Duration::from_secs(30);
const DISTANCE_BUDGET: u64 = 1 << 26;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

/// Symplectic check rows as dense `[X | Z]` bytes.
fn dense_checks(code: &StabilizerCode) -> Dense {
    dense_from_rows(&code.checks().clone().into_rows(), 2 * code.n())
}

fn dense_op(op: &PauliOperator) -> Vec<u8> {
    dense_from_rows(&[op.symplectic_row()], 2 * op.n()).remove(0)
}

/// Independent parameters: pairwise commutation and `k = n - rank`.
fn dense_commutes_and_k(code: &StabilizerCode) -> (bool, usize) {
    let n = code.n();
    let d = dense_checks(code);
    let sym = |a: &[u8], b: &[u8]| (0..n).fold(0u8, |acc, q| acc ^ (a[q] & b[n + q]) ^ (a[n + q] & b[q]));
    let commutes = d.iter().enumerate().all(|(i, a)| d[i + 1..].iter().all(|b| sym(a, b) == 0));
    (commutes, n - dense_rank(&d, 2 * n))
}

fn dense_is_stabilizer(code: &StabilizerCode, op: &PauliOperator) -> bool {
    dense_in_rowspace(&dense_checks(code), &dense_op(op), 2 * code.n())
}

// 1. SkipTree on random connected graphs.
fn skiptree_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let graphs: Vec<Graph> = (0..SKIPTREE_GRAPHS)
        .map(|_| {
            let n = rng.gen_range(2..=SKIPTREE_MAX_N);
            let m = rng.gen_range(n - 1..=SKIPTREE_MAX_M);
            random_connected_graph(&mut rng, n, m)
        })
        .collect();
    for (variant, name) in [(Variant::Cyclic, "cyclic"), (Variant::FullRank, "full-rank")] {
        let start = Instant::now();
        let results: Vec<_> = graphs
            .iter()
            .map(|g| {
                let r = match variant {
                    Variant::Cyclic => skiptree::skiptree(g),
                    Variant::FullRank => skiptree::skiptree_hr(g),
                };
                let r = r.expect("skiptree on a connected graph");
                let rep = skiptree::verify_skiptree(g, &r.t, &r.p, variant);
                (r, rep)
            })
            .collect();
        let elapsed = start.elapsed();
        if variant == Variant::Cyclic {
            ensure!(elapsed < SKIPTREE_TIME_LIMIT, "cyclic run took {elapsed:?}");
        }
        for (i, (g, (r, rep))) in graphs.iter().zip(&results).enumerate() {
            ensure!(rep.verified, "{name} graph {i}: library check failed at {:?}", rep.mismatch);
            let n = g.n_vertices();
            // Own product: every T row must reduce to labels {i, i+1}.
            let rows = if variant == Variant::Cyclic { n } else { n - 1 };
            ensure!(r.t.n_rows() == rows, "{name} graph {i}: T has {} rows", r.t.n_rows());
            let mut label_of = vec![usize::MAX; n];
            for v in 0..n {
                let row = r.p.row(v);
                ensure!(row.len() == 1, "{name} graph {i}: P row {v} has weight {}", row.len());
                label_of[v] = row[0];
            }
            ensure!(label_of.iter().collect::<BTreeSet<_>>().len() == n, "{name} graph {i}: P is not a permutation");
            let tree_edges: BTreeSet<usize> = r.tree.tree_edges.iter().copied().collect();
            for row in 0..rows {
                let mut ends = BTreeSet::new();
                for &e in r.t.row(row) {
                    let (u, v) = g.edge(e);
                    for l in [label_of[u], label_of[v]] {
                        if !ends.remove(&l) {
                            ends.insert(l);
                        }
                    }
                    ensure!(tree_edges.contains(&e), "{name} graph {i}: row {row} uses non-tree edge {e}");
                }
                let want: BTreeSet<usize> = [row, (row + 1) % n].into_iter().collect();
                ensure!(ends == want, "{name} graph {i}: row {row} reduces to {ends:?}");
                ensure!(r.t.row(row).len() <= SKIPTREE_MAX_PATH_LEN, "{name} graph {i}: path of length {}", r.t.row(row).len());
            }
            let prof = r.t.profile();
            ensure!(
                prof.max_row_weight <= SKIPTREE_MAX_ROW_WEIGHT && prof.max_col_weight <= SKIPTREE_MAX_COL_WEIGHT,
                "{name} graph {i}: T profile {prof:?}"
            );
        }
        if variant == Variant::Cyclic {
            for (i, (_, (r, _))) in graphs.iter().zip(&results).enumerate() {
                let weights = r.t.col_weights();
                for &e in &r.tree.tree_edges {
                    ensure!(weights[e] == 2, "graph {i}: tree edge {e} column weight {}", weights[e]);
                }
            }
        }
    }
    for n in 2..=200 {
        let g = Graph::path(n);
        let r = ok(skiptree::skiptree_hr(&g), "path graph")?;
        ensure!(r.t.profile().within(1, 1), "path graph {n}: T profile {:?}", r.t.profile());
        ensure!(skiptree::verify_skiptree(&g, &r.t, &r.p, Variant::FullRank).verified, "path graph {n}");
    }
    Ok(format!(
        "{SKIPTREE_GRAPHS} graphs, both variants bit-exact, (3,2)-sparse, paths <= 3; path graphs (1,1)-sparse"
    ))
}

// 2. GF(2) core against dense elimination.
fn gf2_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..GF2_INSTANCES {
        let (r, c, k) = (
            rng.gen_range(1..=GF2_MAX_DIM),
            rng.gen_range(1..=GF2_MAX_DIM),
            rng.gen_range(1..=GF2_MAX_DIM),
        );
        let density = [0.02, 0.1, 0.3, 0.5][i % 4];
        let a = dense_random(&mut rng, r, c, density);
        let b = dense_random(&mut rng, c, k, density);
        let sa = ok(SparseBitMatrix::from_dense(c, &a), "from_dense")?;
        let sb = ok(SparseBitMatrix::from_dense(k, &b), "from_dense")?;
        let prod = ok(sa.multiply(&sb), "multiply")?;
        ensure!(prod.to_dense() == dense_mul(&a, &b, c, k), "instance {i}: product differs");
        let rank = dense_rank(&a, c);
        ensure!(sa.rank() == rank, "instance {i}: rank {} vs oracle {rank}", sa.rank());
        ensure!(sa.transpose().rank() == rank, "instance {i}: transpose rank differs");
        let null = sa.nullspace_matrix();
        ensure!(null.n_rows() + rank == c, "instance {i}: rank-nullity {} + {rank} != {c}", null.n_rows());
        let nd = null.to_dense();
        ensure!(dense_rank(&nd, c) == nd.len(), "instance {i}: nullspace rows dependent");
        for v in &nd {
            let col: Dense = v.iter().map(|&x| vec![x]).collect();
            ensure!(dense_mul(&a, &col, c, 1).iter().all(|x| x[0] == 0), "instance {i}: nullspace vector not in kernel");
        }
    }
    Ok(format!("{GF2_INSTANCES} instances up to {GF2_MAX_DIM}x{GF2_MAX_DIM}; multiply, rank, nullspace, rank-nullity"))
}

fn beta_pair(b: Beta) -> Option<(u64, u64)> {
    b.finite().map(|r| (*r.numer(), *r.denom()))
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, min: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if s.len() >= min {
            return s;
        }
    }
}

// 3. Relative expansion: oracle, monotonicity, thickening.
fn expansion_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..EXPANSION_ORACLE_GRAPHS {
        let n = rng.gen_range(2..=EXPANSION_ORACLE_MAX_N);
        let m = rng.gen_range(n - 1..=2 * n);
        let g = random_connected_graph(&mut rng, n, m);
        let u = random_subset(&mut rng, n, 1);
        let t = rng.gen_range(1..=n);
        let q = ExpansionQuery::new(u.clone(), t);
        let cert = ok(parallel::relative_expansion(&g, &q, BRUTEFORCE_VERTEX_CAP), "relative_expansion")?;
        let want = expansion_oracle(&g, &u, t);
        ensure!(beta_pair(cert.value) == want, "graph {i}: {} vs oracle {want:?}", cert.value);
        if want.is_some() {
            let w = ok(expansion::evaluate_subset(&g, &u, t, &cert.witness), "evaluate")?;
            ensure!(w == cert.value, "graph {i}: witness ratio {w} != {}", cert.value);
        }
    }
    for i in 0..MONOTONE_INSTANCES {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(n - 1..=2 * n);
        let g = random_connected_graph(&mut rng, n, m);
        let u = random_subset(&mut rng, n, 1);
        let sub: Vec<usize> = u.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let sub = if sub.is_empty() { vec![u[0]] } else { sub };
        let t = rng.gen_range(1..=n);
        let t_small = rng.gen_range(1..=t);
        let beta = |s: &[usize], t: usize| parallel::relative_expansion(&g, &ExpansionQuery::new(s.to_vec(), t), 24).map(|c| c.value);
        let big = ok(beta(&u, t), "beta")?;
        let small = ok(beta(&sub, t_small), "beta")?;
        let cheeger = ok(parallel::relative_expansion(&g, &ExpansionQuery::cheeger(n), 24), "cheeger")?.value;
        ensure!(small >= big && big >= cheeger, "instance {i}: {small} >= {big} >= {cheeger} fails");
    }
    let mut found = 0;
    let mut attempts = 0;
    while found < THICKEN_GRAPHS {
        attempts += 1;
        ensure!(attempts < 100_000, "only {found} graphs with 0 < beta < 1 found");
        let n = rng.gen_range(3..=8);
        let m = rng.gen_range(n - 1..=n + 1);
        let g = random_connected_graph(&mut rng, n, m);
        let u = random_subset(&mut rng, n, 2);
        let t = rng.gen_range(1..=u.len());
        let Some((num, den)) = expansion_oracle(&g, &u, t) else { continue };
        if num == 0 || num >= den {
            continue;
        }
        let layers = den.div_ceil(num) as usize;
        if n * layers > 18 {
            continue;
        }
        found += 1;
        let boost = ok(expansion::boost_by_thickening(&g, &u, t, BRUTEFORCE_VERTEX_CAP), "thickening")?;
        ensure!(boost.thickened.layers == layers, "layers {} != ceil(1/beta) = {layers}", boost.thickened.layers);
        ensure!(boost.certified == Some(true), "library certification {:?}", boost.certified);
        for (l, port) in boost.ports.iter().enumerate() {
            let q = ExpansionQuery::new(port.clone(), t).with_threshold(Ratio::from_integer(1));
            let c = ok(parallel::certify_at_least(&boost.thickened.graph, &q, BRUTEFORCE_VERTEX_CAP), "certify")?;
            ensure!(c.holds, "layer {l}: cut {:?} below 1", c.counterexample);
        }
    }
    Ok(format!(
        "{EXPANSION_ORACLE_GRAPHS} oracle matches (n <= {EXPANSION_ORACLE_MAX_N}), {MONOTONE_INSTANCES} monotone, {THICKEN_GRAPHS} thickenings certified on every layer"
    ))
}

/// Bottlenecked two-logical code: `Z` on `0..4` and on `{0, 1}` are both
/// nontrivial.
fn bottleneck_code() -> StabilizerCode {
    let hx = SparseBitMatrix::from_rows(6, vec![vec![2, 3], vec![0, 1, 2, 3, 4, 5]]).unwrap();
    let hz = SparseBitMatrix::from_rows(6, vec![vec![1, 2, 3, 5], vec![0, 1, 4, 5]]).unwrap();
    StabilizerCode::css(&hx, &hz).unwrap()
}

// 4. Surgery on toric logicals plus a negative control.
fn surgery_criterion() -> Outcome {
    let mut notes = Vec::new();
    for d in [2, 3] {
        let t = ok(toric_code(d), "toric")?;
        let support = t.logical("Z1").z_part().to_vec();
        let aux = ok(surgery::build_aux_graph(&t.code, &support, &AuxOptions::new(d)), "aux graph")?;
        let dc = ok(surgery::assemble_deformed(&t.code, &aux.graph, &aux.port, &aux.basis), "assemble")?;
        let rep = surgery::verify_codespace(&dc);
        let (commutes, k) = dense_commutes_and_k(&dc.assembled);
        ensure!(rep.verified && commutes, "d={d}: codespace {rep:?}");
        ensure!(k == 1 && rep.k_deformed == 1, "d={d}: k' = {k}");
        ensure!(dense_is_stabilizer(&dc.assembled, &dc.measured_operator()), "d={d}: Z(L) outside the stabilizer rowspace");
        let cost = stabilizer::exhaustive_cost(&dc.assembled);
        let start = Instant::now();
        let (method, result) = if cost <= DISTANCE_BUDGET {
            ("exact", ok(parallel::distance(&dc.assembled, DistanceMode::Exhaustive { budget: DISTANCE_BUDGET }), "distance")?)
        } else {
            ("bounded", ok(parallel::distance(&dc.assembled, DistanceMode::WeightBounded { max_weight: d - 1 }), "distance")?)
        };
        let elapsed = start.elapsed();
        ensure!(d == 2 || method == "bounded" || elapsed < SURGERY_D3_TIME_BUDGET, "d={d}: exact scan took {elapsed:?}");
        ensure!(d != 2 || method == "exact", "d=2 must be exact");
        ensure!(result.lower_bound() >= d, "d={d}: deformed distance {result:?}");
        notes.push(format!("d={d} {method} distance >= {}", result.lower_bound()));
    }
    let code = bottleneck_code();
    let base = ok(parallel::distance(&code, DistanceMode::Exhaustive { budget: DISTANCE_BUDGET }), "base distance")?;
    ensure!(base.exact() == Some(2), "control base distance {base:?}");
    let support = [0, 1, 2, 3];
    let path = Graph::path(4);
    let basis = ok(qsw_core::graph::fundamental_cycle_basis(&path, &ok(SpanningTree::bfs(&path, 0), "tree")?), "basis")?;
    let dc = ok(surgery::assemble_deformed(&code, &path, &PortMap::identity(&support), &basis), "control")?;
    ensure!(surgery::verify_codespace(&dc).verified, "control codespace");
    let deformed = ok(parallel::distance(&dc.assembled, DistanceMode::Exhaustive { budget: DISTANCE_BUDGET }), "control distance")?;
    let DistanceResult::Exact { distance, witness } = deformed else {
        return Err("control has no exact distance".into());
    };
    ensure!(distance < 2, "control distance did not drop: {distance}");
    ensure!(witness.weight() == distance, "witness weight mismatch");
    ensure!(dc.assembled.commutes_with_checks(&witness), "witness anticommutes with a check");
    ensure!(!dense_is_stabilizer(&dc.assembled, &witness), "witness is a stabilizer");
    let des = ok(dc.desiderata(2, BRUTEFORCE_VERTEX_CAP), "desiderata")?;
    ensure!(des.expansion_certified == Some(false), "control graph unexpectedly expanding");
    notes.push(format!("control drops 2 -> {distance} with witness on {:?}", witness.support()));
    Ok(notes.join("; "))
}

fn toric_part(code: &StabilizerCode, name: &str, d: usize) -> Result<JointPart, String> {
    let support = code.logical(name).ok_or(format!("no {name}"))?.z_part().to_vec();
    let aux = ok(surgery::build_aux_graph(code, &support, &AuxOptions::new(d)), "aux graph")?;
    Ok(JointPart {
        logical: ok(PauliOperator::z_type(code.n(), &support), "logical")?,
        aux,
    })
}

// 5. Adapters joining toric blocks.
fn adapter_criterion() -> Outcome {
    let t = ok(toric_code(2), "toric")?;
    let code = ok(two_blocks(&t.code, &t.code), "blocks")?;
    let parts = vec![toric_part(&code, "l_Z1", 2)?, toric_part(&code, "r_Z1", 2)?];
    let jm = ok(adapters::joint_measurement(&code, &parts, &JointOptions::default()), "joint")?;
    let rep = adapters::verify_joint(&jm);
    ensure!(rep.verified, "library report {rep:?}");
    let asm = &jm.deformed.assembled;
    let n = asm.n();
    let product = ok(parts[0].logical.mul(&parts[1].logical).relabel(n, |q| q), "relabel")?;
    ensure!(dense_is_stabilizer(asm, &product), "(i) product not in stabilizers");
    for p in &parts {
        ensure!(!dense_is_stabilizer(asm, &ok(p.logical.relabel(n, |q| q), "relabel")?), "(i) factor in stabilizers");
    }
    let (commutes, k_after) = dense_commutes_and_k(asm);
    let (_, k_before) = dense_commutes_and_k(&code);
    ensure!(commutes && k_before == k_after + 1, "(ii) k {k_before} -> {k_after}");
    let gamma = parts.iter().map(|p| p.aux.basis.profile().max_row_weight).max().unwrap_or(0);
    let delta = parts.iter().map(|p| p.aux.basis.profile().max_col_weight).max().unwrap_or(0);
    let joined = jm.deformed.cycle_basis.profile();
    ensure!(
        joined.max_row_weight <= gamma.max(ADAPTER_CYCLE_LEN_FLOOR) && joined.max_col_weight <= delta + ADAPTER_EDGE_CYCLE_SLACK,
        "(iii) profile {joined:?} vs gamma {gamma}, delta {delta}"
    );
    let g = &jm.deformed.aux;
    ensure!(g.n_vertices() <= BRUTEFORCE_VERTEX_CAP, "(iv) joined graph over the cap");
    let port = jm.deformed.port.port();
    let q = ExpansionQuery::new(port.clone(), 2).with_threshold(Ratio::from_integer(1));
    let c = ok(parallel::certify_at_least(g, &q, BRUTEFORCE_VERTEX_CAP), "certify")?;
    ensure!(c.holds, "(iv) cut {:?}", c.counterexample);
    if g.n_vertices() <= EXPANSION_ORACLE_MAX_N {
        let (num, den) = expansion_oracle(g, &port, 2).unwrap_or((1, 1));
        ensure!(num >= den, "(iv) oracle value {num}/{den}");
    }
    let dist = ok(parallel::distance(asm, DistanceMode::Exhaustive { budget: DISTANCE_BUDGET }), "distance")?;
    ensure!(dist.lower_bound() >= 2, "(v) distance {dist:?}");

    let three = ok(two_blocks(&ok(two_blocks(&t.code, &t.code), "blocks")?, &t.code), "blocks")?;
    let parts3 = vec![
        toric_part(&three, "l_l_Z1", 2)?,
        toric_part(&three, "l_r_Z1", 2)?,
        toric_part(&three, "r_Z1", 2)?,
    ];
    let jm3 = ok(adapters::joint_measurement(&three, &parts3, &JointOptions::default()), "chain")?;
    let asm3 = &jm3.deformed.assembled;
    let n3 = asm3.n();
    let mut prod = PauliOperator::identity(three.n());
    for p in &parts3 {
        prod = prod.mul(&p.logical);
        ensure!(!dense_is_stabilizer(asm3, &ok(p.logical.relabel(n3, |q| q), "relabel")?), "chain factor in stabilizers");
    }
    ensure!(dense_is_stabilizer(asm3, &ok(prod.relabel(n3, |q| q), "relabel")?), "chain product not in stabilizers");
    let (_, k3_before) = dense_commutes_and_k(&three);
    let (c3, k3_after) = dense_commutes_and_k(asm3);
    ensure!(c3 && k3_before == k3_after + 1, "chain k {k3_before} -> {k3_after}");
    Ok(format!(
        "two d=2 blocks: k {k_before}->{k_after}, profile ({},{}), distance {}; 3-block chain k {k3_before}->{k3_after}",
        joined.max_row_weight,
        joined.max_col_weight,
        dist.lower_bound()
    ))
}

// 6. Expansion-free joints.
fn expansionless_criterion() -> Outcome {
    let mut notes = Vec::new();
    for d in [2, 3] {
        let t = ok(toric_code(d), "toric")?;
        let z1 = t.logical("Z1").z_part().to_vec();
        let pairing = ExpansionlessPairing::Single {
            z_left: z1.clone(),
            z_right: z1,
        };
        let j = ok(adapters::expansionless_joint(&t.code, &t.code, &pairing, &ExpansionlessOptions::default()), "joint")?;
        let rep = ok(adapters::verify_expansionless(&j, DISTANCE_BUDGET), "verify")?;
        let dist = ok(parallel::distance(&j.assembled, DistanceMode::Exhaustive { budget: DISTANCE_BUDGET }), "distance")?;
        ensure!(rep.passes, "(a)+(b) d={d}: {rep:?}");
        ensure!(dist.lower_bound() >= d, "(a)+(b) d={d}: distance {dist:?}");
        notes.push(format!("(a)+(b) d={d}: {} >= {d}", dist.lower_bound()));
    }
    // Only (a): the left operator is a logical times an overlapping plaquette.
    let t = ok(toric_code(3), "toric")?;
    let z1 = t.logical("Z1");
    let plaquette = t
        .code
        .check_operators()
        .into_iter()
        .find(|c| c.is_z_type() && overlap(c.z_part(), z1.z_part()) == 1)
        .ok_or("no overlapping plaquette")?;
    let heavy = z1.mul(&plaquette);
    let pairing = ExpansionlessPairing::Single {
        z_left: heavy.z_part().to_vec(),
        z_right: z1.z_part().to_vec(),
    };
    ensure!(
        adapters::expansionless_joint(&t.code, &t.code, &pairing, &ExpansionlessOptions::default()).is_err(),
        "(b) not enforced"
    );
    let opts = ExpansionlessOptions {
        require_minimum_weight: false,
        ..ExpansionlessOptions::default()
    };
    let j = ok(adapters::expansionless_joint(&t.code, &t.code, &pairing, &opts), "joint")?;
    let bound = (3 + 3usize).saturating_sub(heavy.weight().max(z1.weight()));
    ensure!(j.bound.value() == bound, "additive bound {:?} != {bound}", j.bound);
    let rep = ok(adapters::verify_expansionless(&j, DISTANCE_BUDGET), "verify")?;
    ensure!(rep.passes, "(a) only: {rep:?}");
    ensure!(rep.distance.lower_bound() >= bound, "(a) only: distance {:?}", rep.distance);
    notes.push(format!("(a) only: {} >= {bound}", rep.distance.lower_bound()));
    for d in [2, 3] {
        let direct = ok(toric::two_d_weight(d, DISTANCE_BUDGET), "2d weight")?.0;
        let tc = ok(toric_code(d), "toric")?;
        let generic = ok(adapters::doubled_weight(&tc.code, tc.logical("Z1"), tc.logical("X2"), DISTANCE_BUDGET), "doubled")?.0;
        ensure!(direct == 2 * d && generic == 2 * d, "d={d}: 2d property {direct}/{generic}");
    }
    let left = ok(toric_code(2), "toric")?;
    let pairing = ExpansionlessPairing::DualZx {
        z_left: left.logical("Z1").z_part().to_vec(),
        x_left: left.logical("X2").x_part().to_vec(),
        z_right: left.logical("Z1").z_part().to_vec(),
        x_right: left.logical("X2").x_part().to_vec(),
    };
    let j = ok(adapters::expansionless_joint(&left.code, &left.code, &pairing, &ExpansionlessOptions::default()), "dual")?;
    let rep = ok(adapters::verify_expansionless(&j, DISTANCE_BUDGET), "verify dual")?;
    ensure!(rep.passes && rep.k_base - rep.k_deformed == 2, "dual mode {rep:?}");
    notes.push("2d property d=2,3; dual Z/X joint passes".into());
    Ok(notes.join("; "))
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<(i64, i64)> {
    let mut seen = BTreeSet::new();
    while seen.len() < n {
        seen.insert((rng.gen_range(0..10_000i64), rng.gen_range(0..10_000i64)));
    }
    let mut v: Vec<(i64, i64)> = seen.into_iter().collect();
    // Shuffle so input order is not sorted.
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    v
}

// 7. Delaunay triangulations.
fn delaunay_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs_per_set = MATCH_PAIRS / DELAUNAY_SETS;
    let mut routed = 0;
    let mut perturbed = 0;
    for s in 0..DELAUNAY_SETS {
        let n = rng.gen_range(3..=DELAUNAY_MAX_POINTS);
        let pts = ok(PointSet2D::from_integers(random_points(&mut rng, n)), "points")?;
        let tri = match delaunay::triangulate(&pts, Perturb::Off) {
            Ok(t) => t,
            Err(qsw_core::Error::Cocircular(_)) => {
                perturbed += 1;
                ok(delaunay::triangulate(&pts, Perturb::Seeded { seed: s as u64, epsilon: 100 }), "perturbed")?
            }
            Err(e) => return Err(format!("set {s}: {e:?}")),
        };
        let p = |i: usize| tri.points.point(i);
        for &[a, b, c] in &tri.triangles {
            let o = (p(b).0 - p(a).0) as i128 * (p(c).1 - p(a).1) as i128 - (p(b).1 - p(a).1) as i128 * (p(c).0 - p(a).0) as i128;
            ensure!(o > 0, "set {s}: triangle {:?} not counter-clockwise", [a, b, c]);
            for d in 0..tri.points.len() {
                if d != a && d != b && d != c {
                    ensure!(incircle_oracle(p(a), p(b), p(c), p(d)) <= 0, "set {s}: point {d} inside circle of {:?}", [a, b, c]);
                }
            }
        }
        let (nv, ne) = (tri.graph.n_vertices(), tri.graph.n_edges());
        let basis = ok(tri.face_basis(), "face basis")?;
        let rank = dense_rank(&basis.matrix().to_dense(), ne);
        ensure!(rank + nv == ne + 1, "set {s}: face rank {rank}, m - n + 1 = {}", ne + 1 - nv);
        ensure!(basis.matrix().rows().all(|r| r.len() == 3), "set {s}: non-triangular cycle");
        for _ in 0..pairs_per_set {
            let a = rng.gen_range(0..nv);
            let b = (a + rng.gen_range(1..nv)) % nv;
            let path = ok(delaunay::empty_circle_match(&tri, a, b), "match")?;
            ensure!(path.vertices.first() == Some(&a) && path.vertices.last() == Some(&b), "set {s}: endpoints");
            ensure!(path.edges.len() + 1 == path.vertices.len(), "set {s}: path shape");
            for (w, &e) in path.vertices.windows(2).zip(&path.edges) {
                let (u, v) = tri.graph.edge(e);
                ensure!((u, v) == (w[0].min(w[1]), w[0].max(w[1])), "set {s}: edge {e} does not join {w:?}");
            }
            routed += 1;
        }
    }
    Ok(format!(
        "{DELAUNAY_SETS} sets ({perturbed} perturbed), empty circles, complete triangle bases, {routed} matchings on existing edges"
    ))
}

// 8. Toric code, Dehn twist, merge and fault pattern.
fn toric_criterion() -> Outcome {
    for d in 2..=TORIC_RANK_MAX_D {
        let t = ok(toric_code(d), "toric")?;
        let (commutes, k) = dense_commutes_and_k(&t.code);
        ensure!(commutes && k == 2 && t.code.logical_qubit_count() == 2, "d={d}: k = {k}");
    }
    for d in 2..=TORIC_DISTANCE_MAX_D {
        let t = ok(toric_code(d), "toric")?;
        let r = ok(parallel::distance(&t.code, DistanceMode::Exhaustive { budget: DISTANCE_BUDGET }), "distance")?;
        ensure!(r.exact() == Some(d), "d={d}: distance {r:?}");
    }
    let start = Instant::now();
    for d in 2..=6 {
        let rep = ok(toric::verify_logical_cnot(d), "cnot")?;
        ensure!(rep.stabilizers_preserved && rep.maps.len() == 4 && rep.verified, "d={d}: {rep:?}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < DEHN_TWIST_TIME_LIMIT, "Dehn twist sweep took {elapsed:?}");
    let base = ok(toric_code(3), "toric")?;
    let zc = base.logical("Z1").z_part().to_vec();
    let xt = base.logical("X2").x_part().to_vec();
    let az = ok(surgery::build_aux_graph(&base.code, &zc, &AuxOptions::new(2)), "aux z")?;
    let ax = ok(surgery::build_aux_graph(&base.code.hadamard(), &xt, &AuxOptions::new(2)), "aux x")?;
    let merged = ok(toric::merge_with_toric(&base.code, &az, &ax, 3), "merge")?;
    let rank = merged.rank_identity();
    ensure!(rank.holds, "rank identity {rank:?}");
    let (commutes, k) = dense_commutes_and_k(&merged.code);
    let hx_rank = dense_rank(&dense_from_rows(&merged.code.hx().into_rows(), merged.code.n()), merged.code.n());
    ensure!(commutes && k == 2, "merged k = {k}");
    ensure!(hx_rank == rank.expected_hx, "merged rank(H_X) {hx_rank} != {}", rank.expected_hx);
    for d in 2..=4 {
        let f = ok(toric::fault_pattern_demo(d), "faults")?;
        ensure!(f.pattern_residual_is_x1 && f.pattern_undetected, "d={d}: fault pattern {f:?}");
    }
    Ok(format!(
        "k=2 for d<={TORIC_RANK_MAX_D}, distance d for d<={TORIC_DISTANCE_MAX_D}, CNOT maps d=2..6 in {:.2}s, merge k'=k with rank identity, fault pattern gives X1",
        elapsed.as_secs_f64()
    ))
}

/// Irreducibility from the definition: no proper nonempty sub-support
/// carries a nontrivial Z logical.
fn irreducible_oracle(code: &StabilizerCode, support: &[usize]) -> bool {
    let hx = dense_from_rows(&code.hx().into_rows(), code.n());
    let restricted: Dense = hx.iter().map(|r| support.iter().map(|&q| r[q]).collect()).collect();
    let hz = dense_from_rows(&code.hz().into_rows(), code.n());
    dense_kernel_enumerate(&restricted, support.len()).into_iter().all(|v| {
        let ones = v.iter().filter(|&&b| b == 1).count();
        if ones == 0 || ones == support.len() {
            return true;
        }
        let mut row = vec![0u8; code.n()];
        for (i, &q) in support.iter().enumerate() {
            row[q] = v[i];
        }
        dense_in_rowspace(&hz, &row, code.n())
    })
}

// 9. Support lemma and overlap cleaning.
fn support_criterion() -> Outcome {
    let mut corpus: Vec<(String, StabilizerCode, Vec<usize>)> = Vec::new();
    for d in 2..=4 {
        let t = ok(toric_code(d), "toric")?;
        for name in ["Z1", "Z2"] {
            corpus.push((format!("toric{d}/{name}"), t.code.clone(), t.logical(name).z_part().to_vec()));
        }
        let prod = t.logical("Z1").mul(t.logical("Z2"));
        corpus.push((format!("toric{d}/Z1Z2"), t.code.clone(), prod.z_part().to_vec()));
    }
    let steane = ok(steane_code(), "steane")?;
    corpus.push(("steane/Z".into(), steane.clone(), steane.logical("Z").unwrap().z_part().to_vec()));
    corpus.push(("steane/Z3".into(), steane, vec![0, 1, 2]));
    let rep = ok(repetition_code(5), "repetition")?.hadamard();
    let rep_z = rep.logicals().iter().find(|l| l.op.is_z_type()).ok_or("no Z logical")?.op.z_part().to_vec();
    corpus.push(("repetition5/Z".into(), rep, rep_z));
    let bn = bottleneck_code();
    corpus.push(("bottleneck/Z0123".into(), bn.clone(), vec![0, 1, 2, 3]));
    corpus.push(("bottleneck/Z01".into(), bn, vec![0, 1]));
    let mut irreducible = 0;
    for (name, code, support) in &corpus {
        let zl = ok(PauliOperator::z_type(code.n(), support), "op")?;
        if !code.commutes_with_checks(&zl) || code.is_stabilizer(&zl) {
            continue;
        }
        let lib = ok(stabilizer::is_irreducible(code, &zl), "irreducible")?;
        let oracle = irreducible_oracle(code, support);
        ensure!(lib == oracle, "{name}: library says irreducible={lib}, oracle {oracle}");
        if !lib {
            continue;
        }
        irreducible += 1;
        let hx = dense_from_rows(&code.hx().into_rows(), code.n());
        let restricted: Dense = hx.iter().map(|r| support.iter().map(|&q| r[q]).collect()).collect();
        let kernel = dense_kernel_enumerate(&restricted, support.len());
        let expected = vec![vec![0u8; support.len()], vec![1u8; support.len()]];
        ensure!(kernel == expected, "{name}: restricted nullspace has {} elements", kernel.len());
        let lib_kernel = ok(stabilizer::restricted_nullspace(code, support), "nullspace")?;
        ensure!(lib_kernel.len() == 1 && lib_kernel[0].len() == support.len(), "{name}: library nullspace {lib_kernel:?}");
    }
    for d in [3, 4] {
        let t = ok(toric_code(d), "toric")?;
        let z1 = t.logical("Z1");
        let px = t.logical("X2").mul(&ok(PauliOperator::x_type(t.n(), &[t.qz(0, 0), t.qz(0, 1)]), "op")?);
        let cleaned = ok(stabilizer::clean_overlap(&t.code, &px, z1), "clean")?;
        ensure!(overlap(cleaned.x_part(), z1.z_part()) == 0, "d={d}: cleaned X overlaps Z1");
        ensure!(dense_is_stabilizer(&t.code, &cleaned.mul(&px)), "d={d}: cleaned differs by a non-stabilizer");
    }
    Ok(format!("{irreducible} irreducible logicals with nullspace {{0, 1}}; overlap cleaned on toric d=3,4"))
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).expect("read dir") {
            let p = e.expect("entry").path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&p).expect("read artifact")));
            }
        }
    }
    out.sort();
    out
}

// 10. CLI determinism across runs and thread counts.
fn determinism_criterion() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let inputs = tmp.path().join("in");
    std::fs::create_dir_all(&inputs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    write(&inputs.join("g.txt"), &io::format_graph(&random_connected_graph(&mut rng, 60, 150)));
    write(&inputs.join("small.txt"), &io::format_graph(&random_connected_graph(&mut rng, 14, 22)));
    write(&inputs.join("toric2.json"), &io::format_code(&toric_code(2).unwrap().code));
    write(&inputs.join("toric3.json"), &io::format_code(&toric_code(3).unwrap().code));
    let pts = PointSet2D::from_integers(vec![(0, 0), (4, 0), (4, 4), (0, 4), (2, 1), (1, 3), (3, 3)]).unwrap();
    write(&inputs.join("pts.txt"), &io::format_points(&pts));
    let i = |f: &str| inputs.join(f).to_string_lossy().into_owned();
    let mut transcripts = Vec::new();
    for (run, threads) in [("a", "1"), ("b", "4")] {
        let out = tmp.path().join(run);
        let o = |f: &str| out.join(f).to_string_lossy().into_owned();
        let pipelines: Vec<Vec<String>> = vec![
            vec!["skiptree".into(), i("g.txt"), "-o".into(), o("st")],
            vec!["skiptree-hr".into(), i("g.txt"), "-o".into(), o("sthr")],
            vec!["expansion".into(), i("small.txt"), "--subset".into(), "0,2,4,6,8".into(), "--t".into(), "3".into(), "-o".into(), o("exp")],
            vec!["surgery".into(), "build".into(), i("toric3.json"), "--logical".into(), "Z1".into(), "--expand".into(), "edges".into(), "--distance".into(), "-o".into(), o("s1")],
            vec!["surgery".into(), "build".into(), i("toric2.json"), "--logical".into(), "Z1".into(), "-o".into(), o("s2")],
            vec!["surgery".into(), "build".into(), i("toric2.json"), "--logical".into(), "Z2".into(), "-o".into(), o("s3")],
            vec!["surgery".into(), "verify".into(), o("s1/manifest.json")],
            vec!["adapter".into(), "join".into(), o("s2/manifest.json"), o("s3/manifest.json"), "--distance".into(), "-o".into(), o("adj")],
            vec!["surgery".into(), "verify".into(), o("adj/manifest.json")],
            vec!["delaunay".into(), i("pts.txt"), "--perturb".into(), "16".into(), "--pairs".into(), "20".into(), "-o".into(), o("del")],
            vec!["distance".into(), i("toric3.json"), "-o".into(), o("dist")],
            vec!["toric-merge".into(), o("dist/manifest.json"), "--z".into(), "Z1".into(), "--x".into(), "X2".into(), "-o".into(), o("merge")],
            vec!["toric-cnot".into(), "--d".into(), "3".into(), "-o".into(), o("cnot")],
        ];
        let mut stdout = Vec::new();
        for args in &pipelines {
            let mut full: Vec<&str> = vec!["--seed", "7", "--threads", threads];
            full.extend(args.iter().map(String::as_str));
            let res = qsw(&full, None);
            ensure!(
                res.status.code() == Some(0),
                "`{}` exited {:?}: {} {}",
                args[..2].join(" "),
                res.status.code(),
                String::from_utf8_lossy(&res.stderr).trim(),
                String::from_utf8_lossy(&res.stdout)
            );
            stdout.push(res.stdout);
        }
        transcripts.push((snapshot(&out), stdout));
    }
    let (a, b) = (&transcripts[0], &transcripts[1]);
    ensure!(a.0.len() == b.0.len(), "artifact counts differ");
    for ((fa, ca), (fb, cb)) in a.0.iter().zip(&b.0) {
        ensure!(fa == fb && ca == cb, "artifact {fa} differs between runs");
    }
    ensure!(a.1 == b.1, "reports differ between runs");
    let manifests = a.0.iter().filter(|(f, _)| f.ends_with("manifest.json")).count();
    Ok(format!("{} artifacts ({manifests} manifests) byte-identical across runs with 1 and 4 threads", a.0.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("skiptree", skiptree_criterion),
        ("gf2", gf2_criterion),
        ("expansion", expansion_criterion),
        ("surgery", surgery_criterion),
        ("adapters", adapter_criterion),
        ("expansionless", expansionless_criterion),
        ("delaunay", delaunay_criterion),
        ("toric", toric_criterion),
        ("support", support_criterion),
        ("determinism", determinism_criterion),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} {name:<14} PASS ({secs:.2}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name:<14} FAIL ({secs:.2}s) {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
