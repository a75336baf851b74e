//! Planar Delaunay triangulations as auxiliary graphs for geometrically
//! local codes: triangle faces form a cycle basis of length-3 cycles, and
//! pairs of port vertices are matched by the diametral-circle search.
//!
//! All predicates are exact: coordinates are scaled to integers and the
//! orientation and in-circle determinants are evaluated in `i128`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input_err, invariant_err, Error, Result};
use crate::gf2::{normalize_xor, SparseBitMatrix};
use crate::graph::{CycleBasis, Graph};
use crate::stabilizer::StabilizerCode;

/// Largest coordinate magnitude after scaling; keeps every in-circle term
/// inside `i128`.
pub const MAX_COORD: i64 = 1 << 28;

/// Scale factor applied before seeded perturbation.
pub const PERTURB_SCALE: i64 = 1 << 8;

/// Dimension of the embedding.
pub const DIMENSION: usize = 2;

/// Points with integer coordinates `x / scale`, `y / scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet2D {
    points: Vec<(i64, i64)>,
    scale: i64,
    /// Qubits per unit area, when known.
    pub density: Option<Ratio<i64>>,
    /// Radius bounding every stabilizer's support, when known.
    pub stabilizer_radius: Option<Ratio<i64>>,
}

impl PointSet2D {
    /// Integer points; duplicates and oversized coordinates are rejected.
    pub fn from_integers(points: Vec<(i64, i64)>) -> Result<Self> {
        Self::new(points, 1)
    }

    /// Rational points, brought to a common denominator.
    pub fn from_rationals(points: &[(Ratio<i64>, Ratio<i64>)]) -> Result<Self> {
        let mut scale: i64 = 1;
        for (x, y) in points {
            scale = scale.lcm(x.denom()).lcm(y.denom());
            if scale > MAX_COORD {
                return Err(input_err!("common denominator exceeds {MAX_COORD}"));
            }
        }
        let ints = points
            .iter()
            .map(|(x, y)| {
                let sx = x.numer().checked_mul(scale / x.denom());
                let sy = y.numer().checked_mul(scale / y.denom());
                sx.zip(sy).ok_or_else(|| input_err!("coordinate overflows after scaling"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ints, scale)
    }

    fn new(points: Vec<(i64, i64)>, scale: i64) -> Result<Self> {
        for (i, &(x, y)) in points.iter().enumerate() {
            if x.abs() > MAX_COORD || y.abs() > MAX_COORD {
                return Err(input_err!("point {i} has a coordinate beyond {MAX_COORD} after scaling"));
            }
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by_key(|&i| points[i]);
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(input_err!("points {} and {} coincide", w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(Self {
            points,
            scale,
            density: None,
            stabilizer_radius: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> (i64, i64) {
        self.points[i]
    }

    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Rational coordinates of point `i`.
    pub fn rational(&self, i: usize) -> (Ratio<i64>, Ratio<i64>) {
        let (x, y) = self.points[i];
        (Ratio::new(x, self.scale), Ratio::new(y, self.scale))
    }

    /// Circumradius bound for Delaunay triangles, `(D + 1) R_S`.
    pub fn local_radius(&self) -> Option<Ratio<i64>> {
        self.stabilizer_radius.map(|r| r * Ratio::from_integer((DIMENSION + 1) as i64))
    }

    /// Scales by [`PERTURB_SCALE`] and shifts each coordinate by a seeded
    /// offset in `[-epsilon, epsilon]`. Strict coordinate order between
    /// points is preserved because `2 epsilon < PERTURB_SCALE`.
    pub fn perturbed(&self, seed: u64, epsilon: i64) -> Result<Self> {
        if epsilon < 0 || 2 * epsilon >= PERTURB_SCALE {
            return Err(input_err!("perturbation must lie in 0..{}", PERTURB_SCALE / 2));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = self
            .points
            .iter()
            .map(|&(x, y)| {
                let dx = rng.gen_range(-epsilon..=epsilon);
                let dy = rng.gen_range(-epsilon..=epsilon);
                (x * PERTURB_SCALE + dx, y * PERTURB_SCALE + dy)
            })
            .collect();
        let mut out = Self::new(points, self.scale * PERTURB_SCALE)?;
        out.density = self.density;
        out.stabilizer_radius = self.stabilizer_radius;
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perturb {
    Off,
    Seeded { seed: u64, epsilon: i64 },
}

/// Twice the signed area of `abc`; positive when counter-clockwise.
pub fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    let (bx, by) = (b.0 as i128, b.1 as i128);
    let (cx, cy) = (c.0 as i128, c.1 as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Positive when `d` lies strictly inside the circumcircle of the
/// counter-clockwise triangle `abc`, zero when on it.
pub fn in_circle(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> i128 {
    let lift = |p: (i64, i64)| {
        let x = p.0 as i128 - d.0 as i128;
        let y = p.1 as i128 - d.1 as i128;
        (x, y, x * x + y * y)
    };
    let (adx, ady, al) = lift(a);
    let (bdx, bdy, bl) = lift(b);
    let (cdx, cdy, cl) = lift(c);
    al * (bdx * cdy - cdx * bdy) + bl * (cdx * ady - adx * cdy) + cl * (adx * bdy - bdx * ady)
}

/// Delaunay triangulation with its edge graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    /// Coordinates used (perturbed when requested).
    pub points: PointSet2D,
    /// Counter-clockwise triangles, sorted.
    pub triangles: Vec<[usize; 3]>,
    /// Edges are the sorted vertex pairs in lexicographic order.
    pub graph: Graph,
    edge_index: BTreeMap<(usize, usize), usize>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

struct Mesh {
    tris: Vec<[usize; 3]>,
    /// Directed edge to the triangle on its left.
    left: BTreeMap<(usize, usize), usize>,
}

impl Mesh {
    fn add(&mut self, t: [usize; 3]) -> usize {
        let id = self.tris.len();
        self.tris.push(t);
        self.link(id);
        id
    }

    fn link(&mut self, id: usize) {
        let [a, b, c] = self.tris[id];
        for e in [(a, b), (b, c), (c, a)] {
            self.left.insert(e, id);
        }
    }

    fn unlink(&mut self, id: usize) {
        let [a, b, c] = self.tris[id];
        for e in [(a, b), (b, c), (c, a)] {
            self.left.remove(&e);
        }
    }

    fn third(&self, id: usize, a: usize, b: usize) -> usize {
        self.tris[id].into_iter().find(|&v| v != a && v != b).expect("triangle has three vertices")
    }
}

/// Lexicographic sweep triangulation followed by Lawson flips.
pub fn triangulate(ps: &PointSet2D, perturb: Perturb) -> Result<Triangulation> {
    let ps = match perturb {
        Perturb::Off => ps.clone(),
        Perturb::Seeded { seed, epsilon } => ps.perturbed(seed, epsilon)?,
    };
    let n = ps.len();
    if n < 3 {
        return Err(input_err!("triangulation needs at least 3 points, got {n}"));
    }
    let p = |i: usize| ps.point(i);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| p(i));
    let k = (2..n)
        .find(|&k| orient(p(order[0]), p(order[1]), p(order[k])) != 0)
        .ok_or_else(|| input_err!("all points are collinear"))?;
    let mut mesh = Mesh {
        tris: Vec::new(),
        left: BTreeMap::new(),
    };
    let apex = order[k];
    let ccw = orient(p(order[0]), p(order[1]), p(apex)) > 0;
    for i in 0..k - 1 {
        let (a, b) = (order[i], order[i + 1]);
        mesh.add(if ccw { [a, b, apex] } else { [b, a, apex] });
    }
    let mut hull: Vec<usize> = if ccw {
        order[..k].to_vec()
    } else {
        order[..k].iter().rev().copied().collect()
    };
    hull.push(apex);
    for &v in &order[k + 1..] {
        let h = hull.len();
        let visible: Vec<bool> = (0..h).map(|i| orient(p(hull[i]), p(hull[(i + 1) % h]), p(v)) < 0).collect();
        let start = (0..h)
            .find(|&i| visible[i] && !visible[(i + h - 1) % h])
            .ok_or_else(|| invariant_err!("no hull edge is visible from point {v}"))?;
        let mut end = start;
        while visible[end % h] {
            let (a, b) = (hull[end % h], hull[(end + 1) % h]);
            mesh.add([b, a, v]);
            end += 1;
        }
        let mut next = Vec::with_capacity(h + 1);
        let mut i = end % h;
        loop {
            next.push(hull[i]);
            if i == start {
                break;
            }
            i = (i + 1) % h;
        }
        next.push(v);
        hull = next;
    }
    let mut stack: Vec<(usize, usize)> = mesh.left.keys().copied().filter(|&(a, b)| a < b).collect();
    while let Some((a, b)) = stack.pop() {
        let (Some(&t1), Some(&t2)) = (mesh.left.get(&(a, b)), mesh.left.get(&(b, a))) else {
            continue;
        };
        let c = mesh.third(t1, a, b);
        let d = mesh.third(t2, b, a);
        if in_circle(p(a), p(b), p(c), p(d)) > 0 {
            mesh.unlink(t1);
            mesh.unlink(t2);
            mesh.tris[t1] = [a, d, c];
            mesh.tris[t2] = [d, b, c];
            mesh.link(t1);
            mesh.link(t2);
            stack.extend([(a, d), (d, b), (b, c), (c, a)]);
        }
    }
    for (&(a, b), &t1) in &mesh.left {
        if a > b {
            continue;
        }
        if let Some(&t2) = mesh.left.get(&(b, a)) {
            let c = mesh.third(t1, a, b);
            let d = mesh.third(t2, b, a);
            if in_circle(p(a), p(b), p(c), p(d)) == 0 {
                let mut four = [a, b, c, d];
                four.sort_unstable();
                return Err(Error::Cocircular(four));
            }
        }
    }
    let mut triangles: Vec<[usize; 3]> = mesh
        .tris
        .iter()
        .map(|&[a, b, c]| {
            // Rotate so the smallest index leads, keeping orientation.
            if a < b && a < c {
                [a, b, c]
            } else if b < c {
                [b, c, a]
            } else {
                [c, a, b]
            }
        })
        .collect();
    triangles.sort_unstable();
    let mut edge_keys: Vec<(usize, usize)> = mesh.left.keys().map(|&(a, b)| key(a, b)).collect();
    edge_keys.sort_unstable();
    edge_keys.dedup();
    let edge_index = edge_keys.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let graph = Graph::new(n, edge_keys)?;
    Ok(Triangulation {
        points: ps,
        triangles,
        graph,
        edge_index,
    })
}

impl Triangulation {
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&key(u, v)).copied()
    }

    /// One length-3 cycle per triangle.
    pub fn face_basis(&self) -> Result<CycleBasis> {
        let rows = self
            .triangles
            .iter()
            .map(|&[a, b, c]| {
                [(a, b), (b, c), (c, a)]
                    .iter()
                    .map(|&(u, v)| self.edge_between(u, v).expect("triangle edges are graph edges"))
                    .collect()
            })
            .collect();
        CycleBasis::new(&self.graph, SparseBitMatrix::from_rows(self.graph.n_edges(), rows)?)
    }

    /// First triangle whose circumcircle strictly contains another point.
    pub fn empty_circle_violation(&self) -> Option<([usize; 3], usize)> {
        let p = |i: usize| self.points.point(i);
        for &[a, b, c] in &self.triangles {
            for d in 0..self.points.len() {
                if d != a && d != b && d != c && in_circle(p(a), p(b), p(c), p(d)) > 0 {
                    return Some(([a, b, c], d));
                }
            }
        }
        None
    }
}

/// Walk from `a` to `b` found by the diametral-circle recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Number of interior points used as split points.
    pub splits: usize,
    /// Points strictly inside the initial diametral circle.
    pub initial_interior: usize,
}

/// Points strictly inside the circle with diameter `ab`.
fn diametral_interior(ps: &PointSet2D, a: usize, b: usize) -> Vec<usize> {
    let (pa, pb) = (ps.point(a), ps.point(b));
    (0..ps.len())
        .filter(|&c| c != a && c != b)
        .filter(|&c| {
            let pc = ps.point(c);
            let dot = (pa.0 as i128 - pc.0 as i128) * (pb.0 as i128 - pc.0 as i128)
                + (pa.1 as i128 - pc.1 as i128) * (pb.1 as i128 - pc.1 as i128);
            dot < 0
        })
        .collect()
}

/// Walk between two vertices: an empty diametral circle forces an edge;
/// otherwise the interior point nearest the midpoint (ties by index) splits
/// the pair and both halves recurse.
pub fn empty_circle_match(tri: &Triangulation, a: usize, b: usize) -> Result<MatchPath> {
    let ps = &tri.points;
    let n = ps.len();
    if a >= n || b >= n {
        return Err(input_err!("match endpoints must be vertices of the triangulation"));
    }
    let initial_interior = if a == b { 0 } else { diametral_interior(ps, a, b).len() };
    let mut vertices = vec![a];
    let mut edges = Vec::new();
    let mut splits = 0;
    // Pending targets, nearest first: walk from the last vertex to the top.
    let mut pending = vec![b];
    while let Some(&target) = pending.last() {
        let from = *vertices.last().expect("walk is nonempty");
        if from == target {
            pending.pop();
            continue;
        }
        let inside = diametral_interior(ps, from, target);
        if inside.is_empty() {
            let e = tri
                .edge_between(from, target)
                .ok_or_else(|| invariant_err!("empty diametral circle but no edge {from}-{target}"))?;
            edges.push(e);
            vertices.push(target);
            pending.pop();
            continue;
        }
        let (pf, pt) = (ps.point(from), ps.point(target));
        let mid2 = (pf.0 as i128 + pt.0 as i128, pf.1 as i128 + pt.1 as i128);
        let c = *inside
            .iter()
            .min_by_key(|&&c| {
                let pc = ps.point(c);
                let dx = 2 * pc.0 as i128 - mid2.0;
                let dy = 2 * pc.1 as i128 - mid2.1;
                (dx * dx + dy * dy, c)
            })
            .expect("nonempty");
        splits += 1;
        pending.push(c);
    }
    Ok(MatchPath {
        vertices,
        edges,
        splits,
        initial_interior,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDesiderataReport {
    pub connected: bool,
    pub max_degree: usize,
    /// Edges in the largest per-check matching.
    pub max_matching_len: usize,
    /// Largest number of matchings through one edge.
    pub max_edge_matching_count: usize,
    pub max_cycle_len: usize,
    /// Largest number of face cycles through one edge.
    pub max_edge_cycle_count: usize,
    /// Face cycles span the cycle space.
    pub basis_complete: bool,
    /// Every matching has exactly the check's port vertices as boundary.
    pub matchings_valid: bool,
    /// Matching edge sets per check (empty when the check misses the port).
    pub matchings: Vec<Vec<usize>>,
}

/// Desiderata of a triangulation used as the auxiliary graph for
/// `Z(zl_support)`; point `i` carries qubit `zl_support[i]` (sorted).
pub fn verify_local_desiderata(tri: &Triangulation, code: &StabilizerCode, zl_support: &[usize]) -> Result<LocalDesiderataReport> {
    let mut support = zl_support.to_vec();
    support.sort_unstable();
    support.dedup();
    if support.len() != tri.points.len() {
        return Err(input_err!(
            "{} support qubits but {} points: every qubit needs coordinates",
            support.len(),
            tri.points.len()
        ));
    }
    let g = &tri.graph;
    let mut matchings = Vec::new();
    let mut per_edge = vec![0usize; g.n_edges()];
    let mut matchings_valid = true;
    for r in code.x_parts().rows() {
        let hit: Vec<usize> = r.iter().filter_map(|q| support.binary_search(q).ok()).collect();
        if hit.len() % 2 == 1 {
            return Err(input_err!("Z on the support anticommutes with a check"));
        }
        let mut mu = Vec::new();
        for pair in hit.chunks_exact(2) {
            let path = empty_circle_match(tri, pair[0], pair[1])?;
            mu.extend(path.edges);
        }
        let mu = normalize_xor(mu);
        let mut deg = vec![0u8; g.n_vertices()];
        for &e in &mu {
            let (u, v) = g.edge(e);
            deg[u] ^= 1;
            deg[v] ^= 1;
            per_edge[e] += 1;
        }
        let boundary: Vec<usize> = (0..g.n_vertices()).filter(|&v| deg[v] == 1).collect();
        matchings_valid &= boundary == hit;
        matchings.push(mu);
    }
    let basis = tri.face_basis();
    let basis_complete = basis.is_ok();
    let (max_cycle_len, max_edge_cycle_count) = match &basis {
        Ok(b) => {
            let prof = b.profile();
            (prof.max_row_weight, prof.max_col_weight)
        }
        Err(_) => (0, 0),
    };
    Ok(LocalDesiderataReport {
        connected: g.is_connected(),
        max_degree: g.max_degree(),
        max_matching_len: matchings.iter().map(Vec::len).max().unwrap_or(0),
        max_edge_matching_count: per_edge.into_iter().max().unwrap_or(0),
        max_cycle_len,
        max_edge_cycle_count,
        basis_complete,
        matchings_valid,
        matchings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::{assemble_deformed, verify_codespace, PortMap};
    use crate::toric::toric_code;

    fn random_points(n: usize, seed: u64, range: i64) -> PointSet2D {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts: Vec<(i64, i64)> = Vec::new();
        while pts.len() < n {
            let p = (rng.gen_range(0..range), rng.gen_range(0..range));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        PointSet2D::from_integers(pts).unwrap()
    }

    // Independent oracle: every triple with an empty circumcircle.
    fn brute_force_triangles(ps: &PointSet2D) -> Vec<[usize; 3]> {
        let n = ps.len();
        let p = |i: usize| ps.point(i);
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let o = orient(p(a), p(b), p(c));
                    if o == 0 {
                        continue;
                    }
                    let t = if o > 0 { [a, b, c] } else { [a, c, b] };
                    if (0..n).all(|d| d == a || d == b || d == c || in_circle(p(t[0]), p(t[1]), p(t[2]), p(d)) < 0) {
                        out.push(t);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn three_points_one_triangle() {
        let ps = PointSet2D::from_integers(vec![(0, 0), (4, 0), (0, 3)]).unwrap();
        let t = triangulate(&ps, Perturb::Off).unwrap();
        assert_eq!(t.triangles, vec![[0, 1, 2]]);
        assert_eq!(t.graph.n_edges(), 3);
    }

    #[test]
    fn square_is_degenerate() {
        let ps = PointSet2D::from_integers(vec![(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        assert_eq!(triangulate(&ps, Perturb::Off), Err(Error::Cocircular([0, 1, 2, 3])));
        let t = triangulate(&ps, Perturb::Seeded { seed: 7, epsilon: 100 }).unwrap();
        assert_eq!(t.triangles.len(), 2);
    }

    #[test]
    fn input_errors() {
        assert!(PointSet2D::from_integers(vec![(0, 0), (0, 0)]).is_err());
        let line = PointSet2D::from_integers(vec![(0, 0), (1, 1), (2, 2)]).unwrap();
        assert!(triangulate(&line, Perturb::Off).is_err());
    }

    #[test]
    fn rationals_share_a_denominator() {
        let r = |a: i64, b: i64| Ratio::new(a, b);
        let ps = PointSet2D::from_rationals(&[(r(1, 2), r(0, 1)), (r(1, 3), r(1, 1))]).unwrap();
        assert_eq!(ps.scale(), 6);
        assert_eq!(ps.point(0), (3, 0));
        assert_eq!(ps.rational(1), (r(1, 3), r(1, 1)));
    }

    #[test]
    fn matches_brute_force_oracle() {
        for seed in 0..30 {
            let ps = random_points(25, seed, 1000);
            let t = triangulate(&ps, Perturb::Off).unwrap();
            assert_eq!(t.triangles, brute_force_triangles(&ps), "seed {seed}");
            assert!(t.empty_circle_violation().is_none());
            let basis = t.face_basis().unwrap();
            assert_eq!(basis.len(), t.graph.n_edges() + 1 - t.graph.n_vertices());
        }
    }

    #[test]
    fn perturbation_is_reproducible_and_order_preserving() {
        let ps = random_points(40, 3, 1000);
        let a = ps.perturbed(11, 100).unwrap();
        assert_eq!(a, ps.perturbed(11, 100).unwrap());
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                if ps.point(i).0 < ps.point(j).0 {
                    assert!(a.point(i).0 < a.point(j).0);
                }
            }
        }
    }

    #[test]
    fn three_stage_match() {
        // Far pair with two interior points near the segment.
        let ps = PointSet2D::from_integers(vec![(0, 0), (30, 0), (10, 1), (20, -1), (15, 40), (15, -40)]).unwrap();
        let t = triangulate(&ps, Perturb::Off).unwrap();
        let m = empty_circle_match(&t, 0, 1).unwrap();
        assert_eq!(m.vertices.first(), Some(&0));
        assert_eq!(m.vertices.last(), Some(&1));
        assert_eq!(m.edges.len(), 3);
        assert!(m.splits <= m.initial_interior);
        let adjacent = empty_circle_match(&t, 0, 2).unwrap();
        assert_eq!(adjacent.edges.len(), 1);
    }

    #[test]
    fn toric_logical_on_a_jittered_line() {
        let d = 4;
        let toric = toric_code(d).unwrap();
        let support = toric.logical("Z1").z_part().to_vec();
        let pts: Vec<(i64, i64)> = (0..support.len()).map(|i| (10 * i as i64, [0, 3, -2, 1][i % 4])).collect();
        let ps = PointSet2D::from_integers(pts).unwrap();
        let t = triangulate(&ps, Perturb::Off).unwrap();
        let rep = verify_local_desiderata(&t, &toric.code, &support).unwrap();
        assert!(rep.connected && rep.basis_complete && rep.matchings_valid);
        assert_eq!(rep.max_cycle_len, 3);
        assert!(rep.max_edge_cycle_count <= 2);
        let port = PortMap::identity(&support);
        let dc = assemble_deformed(&toric.code, &t.graph, &port, &t.face_basis().unwrap()).unwrap();
        assert!(verify_codespace(&dc).verified);
    }

    #[test]
    fn missing_coordinates_rejected() {
        let toric = toric_code(2).unwrap();
        let ps = PointSet2D::from_integers(vec![(0, 0), (4, 0), (0, 3)]).unwrap();
        let t = triangulate(&ps, Perturb::Off).unwrap();
        assert!(verify_local_desiderata(&t, &toric.code, toric.logical("Z1").z_part()).is_err());
    }
}
