//! Text and JSON file formats.
//!
//! Every writer produces output its reader accepts unchanged. Text readers
//! are strict and report the 1-based line of the first problem.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_rational::Ratio;
use qsw_core::delaunay::PointSet2D;
use qsw_core::stabilizer::NamedLogical;
use qsw_core::surgery::PortMap;
use qsw_core::{Graph, PauliOperator, SparseBitMatrix, StabilizerCode};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Content(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] qsw_core::Error),
}

fn at(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with their 1-based numbers; blank lines are only
/// tolerated at the end.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next_fields<const K: usize>(&mut self, what: &str) -> Result<([&'a str; K], usize), FormatError> {
        match self.inner.next() {
            None => Err(at(self.last + 1, format!("unexpected end of file, expected {what}"))),
            Some((i, line)) => {
                self.last = i + 1;
                let fields: Vec<&str> = line.split_whitespace().collect();
                let arr: [&str; K] = fields
                    .try_into()
                    .map_err(|f: Vec<&str>| at(i + 1, format!("expected {what} ({K} fields), found {} fields", f.len())))?;
                Ok((arr, i + 1))
            }
        }
    }

    fn expect_end(&mut self) -> Result<(), FormatError> {
        for (i, line) in self.inner.by_ref() {
            if !line.trim().is_empty() {
                return Err(at(i + 1, "unexpected content after the last entry"));
            }
        }
        Ok(())
    }
}

fn uint(s: &str, line: usize, what: &str) -> Result<usize, FormatError> {
    s.parse::<usize>()
        .map_err(|_| at(line, format!("{what} must be a non-negative integer, found `{s}`")))
}

/// Reads the sparse matrix format: `rows cols nnz`, then `r c` per entry in
/// strictly increasing `(r, c)` order.
pub fn parse_matrix(text: &str) -> Result<SparseBitMatrix, FormatError> {
    let mut lines = Lines::new(text);
    let ([r, c, z], l) = lines.next_fields::<3>("header `rows cols nnz`")?;
    let (rows, cols, nnz) = (uint(r, l, "rows")?, uint(c, l, "cols")?, uint(z, l, "nnz")?);
    if rows.checked_mul(cols).is_some_and(|cap| nnz > cap) {
        return Err(at(l, format!("nnz {nnz} exceeds rows x cols")));
    }
    let mut entries = Vec::with_capacity(nnz);
    let mut prev: Option<(usize, usize)> = None;
    for _ in 0..nnz {
        let ([a, b], l) = lines.next_fields::<2>("entry `r c`")?;
        let e = (uint(a, l, "row")?, uint(b, l, "column")?);
        if e.0 >= rows || e.1 >= cols {
            return Err(at(l, format!("entry ({}, {}) outside {rows} x {cols}", e.0, e.1)));
        }
        if let Some(p) = prev {
            if e == p {
                return Err(at(l, format!("duplicate entry ({}, {})", e.0, e.1)));
            }
            if e < p {
                return Err(at(l, "entries not sorted by (row, column)"));
            }
        }
        prev = Some(e);
        entries.push(e);
    }
    lines.expect_end()?;
    Ok(SparseBitMatrix::from_entries(rows, cols, &entries)?)
}

pub fn format_matrix(m: &SparseBitMatrix) -> String {
    let mut s = format!("{} {} {}\n", m.n_rows(), m.n_cols(), m.nnz());
    for (r, c) in m.entries() {
        writeln!(s, "{r} {c}").expect("write to string");
    }
    s
}

/// Reads the graph format: `n m`, then `u v` per edge.
pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = Lines::new(text);
    let ([a, b], l) = lines.next_fields::<2>("header `n m`")?;
    let (n, m) = (uint(a, l, "vertex count")?, uint(b, l, "edge count")?);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let ([u, v], l) = lines.next_fields::<2>("edge `u v`")?;
        let e = (uint(u, l, "vertex")?, uint(v, l, "vertex")?);
        if e.0 >= n || e.1 >= n {
            return Err(at(l, format!("edge ({}, {}) has a vertex outside 0..{n}", e.0, e.1)));
        }
        if e.0 == e.1 {
            return Err(at(l, format!("self-loop at vertex {}", e.0)));
        }
        edges.push(e);
    }
    lines.expect_end()?;
    Ok(Graph::new(n, edges)?)
}

pub fn format_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n_vertices(), g.n_edges());
    for &(u, v) in g.edges() {
        writeln!(s, "{u} {v}").expect("write to string");
    }
    s
}

/// Graphviz rendering; edges keep their order and carry their index.
pub fn format_dot(g: &Graph, name: &str) -> String {
    let mut s = format!("graph {name} {{\n");
    for v in 0..g.n_vertices() {
        writeln!(s, "  {v};").expect("write to string");
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        writeln!(s, "  {u} -- {v} [label=\"{e}\"];").expect("write to string");
    }
    s.push_str("}\n");
    s
}

fn parse_rational(s: &str, line: usize) -> Result<Ratio<i64>, FormatError> {
    let bad = || at(line, format!("`{s}` is not a rational number"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            w => w.parse().map_err(|_| bad())?,
        };
        let den = 10i64.pow(frac.len() as u32);
        let num = whole
            .checked_mul(den)
            .and_then(|w| w.checked_add(frac.parse::<i64>().ok()?))
            .ok_or_else(bad)?;
        return Ok(Ratio::new(if negative { -num } else { num }, den));
    }
    s.parse::<Ratio<i64>>().map_err(|_| bad())
}

/// Reads the points format: `n`, then `x y` per point. Coordinates are
/// integers, fractions `p/q` or decimals.
pub fn parse_points(text: &str) -> Result<PointSet2D, FormatError> {
    let mut lines = Lines::new(text);
    let ([a], l) = lines.next_fields::<1>("point count")?;
    let n = uint(a, l, "point count")?;
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        let ([x, y], l) = lines.next_fields::<2>("point `x y`")?;
        pts.push((parse_rational(x, l)?, parse_rational(y, l)?));
    }
    lines.expect_end()?;
    Ok(PointSet2D::from_rationals(&pts)?)
}

pub fn format_points(ps: &PointSet2D) -> String {
    let mut s = format!("{}\n", ps.len());
    for i in 0..ps.len() {
        let (x, y) = ps.rational(i);
        writeln!(s, "{x} {y}").expect("write to string");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckJson {
    x: Vec<usize>,
    z: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogicalJson {
    name: String,
    x: Vec<usize>,
    z: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hx: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hz: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    checks: Option<Vec<CheckJson>>,
    #[serde(default)]
    logicals: Vec<LogicalJson>,
}

/// Reads a code: `hx` and `hz` for CSS codes, `checks` otherwise.
pub fn parse_code(text: &str) -> Result<StabilizerCode, FormatError> {
    let cj: CodeJson = serde_json::from_str(text)?;
    let sorted = |rows: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        rows.into_iter()
            .map(|mut r| {
                r.sort_unstable();
                r
            })
            .collect()
    };
    let mut code = match (cj.hx, cj.hz, cj.checks) {
        (Some(hx), Some(hz), None) => StabilizerCode::css(
            &SparseBitMatrix::from_rows(cj.n, sorted(hx))?,
            &SparseBitMatrix::from_rows(cj.n, sorted(hz))?,
        )?,
        (None, None, Some(checks)) => {
            let ops = checks
                .iter()
                .map(|c| PauliOperator::new(cj.n, &c.x, &c.z))
                .collect::<Result<Vec<_>, _>>()?;
            StabilizerCode::from_operators(cj.n, &ops)?
        }
        _ => {
            return Err(FormatError::Content(
                "a code needs either both `hx` and `hz` or only `checks`".into(),
            ))
        }
    };
    for l in cj.logicals {
        code.add_logical(&l.name, PauliOperator::new(cj.n, &l.x, &l.z)?)?;
    }
    Ok(code)
}

pub fn format_code(code: &StabilizerCode) -> String {
    let rows = |m: SparseBitMatrix| m.into_rows();
    let (hx, hz, checks) = if code.is_css() {
        (Some(rows(code.hx())), Some(rows(code.hz())), None)
    } else {
        let checks = code
            .check_operators()
            .into_iter()
            .map(|op| CheckJson {
                x: op.x_part().to_vec(),
                z: op.z_part().to_vec(),
            })
            .collect();
        (None, None, Some(checks))
    };
    let cj = CodeJson {
        n: code.n(),
        hx,
        hz,
        checks,
        logicals: code
            .logicals()
            .iter()
            .map(|NamedLogical { name, op }| LogicalJson {
                name: name.clone(),
                x: op.x_part().to_vec(),
                z: op.z_part().to_vec(),
            })
            .collect(),
    };
    to_json(&cj)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PortEntryJson {
    qubit: usize,
    vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PortJson {
    n_vertices: usize,
    max_sharing: usize,
    entries: Vec<PortEntryJson>,
}

pub fn parse_port(text: &str) -> Result<PortMap, FormatError> {
    let pj: PortJson = serde_json::from_str(text)?;
    let sets: Vec<(usize, Vec<usize>)> = pj.entries.into_iter().map(|e| (e.qubit, e.vertices)).collect();
    Ok(PortMap::shared(pj.n_vertices, &sets, pj.max_sharing.max(1))?)
}

pub fn format_port(port: &PortMap) -> String {
    to_json(&PortJson {
        n_vertices: port.n_vertices(),
        max_sharing: port.max_sharing().max(1),
        entries: port
            .entries()
            .map(|(qubit, vs)| PortEntryJson {
                qubit,
                vertices: vs.to_vec(),
            })
            .collect(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Reads a file, naming it in the error.
pub fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}

/// Reads and parses a file, naming it in the error.
pub fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T, FormatError>) -> anyhow::Result<T> {
    let text = read_text(path)?;
    parse(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsw_core::toric::toric_code;

    #[test]
    fn matrix_roundtrip() {
        let m = SparseBitMatrix::from_rows(4, vec![vec![0, 3], vec![], vec![1, 2]]).unwrap();
        let text = format_matrix(&m);
        assert_eq!(text, "3 4 4\n0 0\n0 3\n2 1\n2 2\n");
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn matrix_errors_cite_lines() {
        let cases = [
            ("2 2 1\n0 0\n5 0\n", 3),
            ("2 2 2\n0 0\n", 3),
            ("2 2 2\n0 1\n0 0\n", 3),
            ("2 2 2\n0 1\n0 1\n", 3),
            ("2 2\n", 1),
            ("2 2 1\n0 x\n", 2),
            ("2 2 1\n0 0\n1 1\n", 3),
            ("2 2 1\n0 0 0\n", 2),
        ];
        for (text, line) in cases {
            match parse_matrix(text) {
                Err(FormatError::Line { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(parse_matrix("1 1 0\n\n\n").is_ok());
    }

    #[test]
    fn graph_roundtrip_and_dot() {
        let g = Graph::new(3, vec![(0, 1), (2, 1), (0, 1)]).unwrap();
        let text = format_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        let dot = format_dot(&g, "g");
        let a = dot.find("0 -- 1 [label=\"0\"]").unwrap();
        let b = dot.find("2 -- 1 [label=\"1\"]").unwrap();
        assert!(a < b);
        assert!(matches!(parse_graph("2 1\n0 2\n"), Err(FormatError::Line { line: 2, .. })));
        assert!(matches!(parse_graph("2 1\n1 1\n"), Err(FormatError::Line { line: 2, .. })));
    }

    #[test]
    fn code_roundtrip() {
        let t = toric_code(2).unwrap();
        let text = format_code(&t.code);
        let back = parse_code(&text).unwrap();
        assert_eq!(format_code(&back), text);
        assert_eq!(back.logical_qubit_count(), 2);
        let y = StabilizerCode::from_operators(2, &[PauliOperator::new(2, &[0, 1], &[0, 1]).unwrap()]).unwrap();
        let text = format_code(&y);
        assert!(text.contains("\"checks\""));
        assert_eq!(parse_code(&text).unwrap(), y);
        assert!(parse_code("{\"n\": 2, \"hx\": []}").is_err());
        assert!(parse_code("{\"n\": 2, \"hx\": [], \"hz\": [], \"extra\": 1}").is_err());
    }

    #[test]
    fn points_accept_fractions_and_decimals() {
        let ps = parse_points("3\n0 0\n1/2 -0.25\n3 1.5\n").unwrap();
        assert_eq!(ps.rational(1), (Ratio::new(1, 2), Ratio::new(-1, 4)));
        assert_eq!(parse_points(&format_points(&ps)).unwrap(), ps);
        assert!(matches!(parse_points("2\n0 0\n1 a\n"), Err(FormatError::Line { line: 3, .. })));
        assert!(matches!(parse_points("2\n0 0\n"), Err(FormatError::Line { line: 3, .. })));
    }

    #[test]
    fn port_roundtrip() {
        let port = PortMap::shared(3, &[(4, vec![0]), (7, vec![0, 2])], 2).unwrap();
        let back = parse_port(&format_port(&port)).unwrap();
        assert_eq!(back, port);
    }
}
