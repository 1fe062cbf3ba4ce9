//! Line-oriented mesh text format.
//!
//! ```text
//! dim 2
//! vertices 3
//! 0 0
//! 1 0
//! 0 1
//! triangles 1
//! 0 1 2
//! boundary 3
//! 0 1 D
//! 1 2 N 0.5
//! 2 0 D
//! ```
//!
//! `#` starts a comment. 1D files omit the `triangles` block and name a
//! single vertex per boundary entry.

use std::fmt::Write as _;
use std::path::Path;

use super::{
    build_interval_mesh, BoundaryEdge, BoundaryMarker, EndCondition, Mesh, MeshError, TriMesh2D,
};

struct Lines<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text.lines().enumerate().filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then_some((i + 1, l))
        });
        Self {
            inner: Box::new(inner),
            last: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), MeshError> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l.split_whitespace().collect()))
            }
            None => Err(MeshError::Parse {
                line: self.last + 1,
                message: format!("unexpected end of file, expected {what}"),
            }),
        }
    }

    fn header(&mut self, keyword: &str) -> Result<usize, MeshError> {
        let (line, tok) = self.next(keyword)?;
        if tok.len() != 2 || tok[0] != keyword {
            return Err(perr(line, format!("expected `{keyword} <count>`")));
        }
        parse_num(line, tok[1])
    }
}

fn perr(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, MeshError> {
    s.parse()
        .map_err(|_| perr(line, format!("cannot parse `{s}`")))
}

fn parse_marker(line: usize, s: &str) -> Result<BoundaryMarker, MeshError> {
    match s {
        "D" => Ok(BoundaryMarker::Dirichlet),
        "N" => Ok(BoundaryMarker::Neumann),
        other => Err(perr(line, format!("unknown boundary marker `{other}`"))),
    }
}

fn parse_psi(line: usize, tok: &[&str]) -> Result<f64, MeshError> {
    match tok {
        [] => Ok(0.0),
        [p] => parse_num(line, p),
        _ => Err(perr(line, "trailing tokens")),
    }
}

pub fn parse_mesh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = Lines::new(text);
    let dim: usize = lines.header("dim")?;
    if dim != 1 && dim != 2 {
        return Err(perr(lines.last, format!("unsupported dimension {dim}")));
    }
    let nv = lines.header("vertices")?;
    let mut coords = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, tok) = lines.next("vertex coordinates")?;
        if tok.len() != dim {
            return Err(perr(line, format!("expected {dim} coordinate(s)")));
        }
        let xy: Vec<f64> = tok
            .iter()
            .map(|t| parse_num(line, t))
            .collect::<Result<_, _>>()?;
        coords.push(xy);
    }
    if dim == 1 {
        let nb = lines.header("boundary")?;
        let (mut left, mut right) = (None, None);
        let last = nv.saturating_sub(1);
        for _ in 0..nb {
            let (line, tok) = lines.next("boundary entry")?;
            if tok.len() < 2 {
                return Err(perr(line, "expected `vertex D|N [psi]`"));
            }
            let v: usize = parse_num(line, tok[0])?;
            let marker = parse_marker(line, tok[1])?;
            let cond = EndCondition {
                marker,
                psi: parse_psi(line, &tok[2..])?,
            };
            let slot = if v == 0 {
                &mut left
            } else if v == last {
                &mut right
            } else {
                return Err(perr(line, format!("vertex {v} is not an end of the interval")));
            };
            if slot.replace(cond).is_some() {
                return Err(perr(line, format!("end vertex {v} marked twice")));
            }
        }
        let (Some(left), Some(right)) = (left, right) else {
            return Err(MeshError::Boundary("both interval ends need a marker".into()));
        };
        let nodes = coords.into_iter().map(|c| c[0]).collect();
        return Ok(Mesh::Interval(build_interval_mesh(nodes, left, right)?));
    }
    let nt = lines.header("triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (line, tok) = lines.next("triangle")?;
        if tok.len() != 3 {
            return Err(perr(line, "expected three vertex indices"));
        }
        let mut t = [0usize; 3];
        for (k, s) in tok.iter().enumerate() {
            t[k] = parse_num(line, s)?;
            if t[k] >= nv {
                return Err(perr(line, format!("vertex index {} out of range", t[k])));
            }
        }
        triangles.push(t);
    }
    let nb = lines.header("boundary")?;
    let mut boundary = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (line, tok) = lines.next("boundary entry")?;
        if tok.len() < 3 {
            return Err(perr(line, "expected `i j D|N [psi]`"));
        }
        let i: usize = parse_num(line, tok[0])?;
        let j: usize = parse_num(line, tok[1])?;
        if i >= nv || j >= nv {
            return Err(perr(line, "boundary vertex index out of range"));
        }
        boundary.push(BoundaryEdge {
            vertices: [i, j],
            marker: parse_marker(line, tok[2])?,
            psi: parse_psi(line, &tok[3..])?,
        });
    }
    if let Ok((line, _)) = lines.next("end of file") {
        return Err(perr(line, "unexpected trailing content"));
    }
    let vertices = coords.into_iter().map(|c| [c[0], c[1]]).collect();
    Ok(Mesh::Triangle(TriMesh2D::new(vertices, triangles, boundary)?))
}

fn marker_str(m: BoundaryMarker) -> &'static str {
    match m {
        BoundaryMarker::Dirichlet => "D",
        BoundaryMarker::Neumann => "N",
    }
}

/// Serializes a mesh. Floats use the shortest round-trip representation.
pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    match mesh {
        Mesh::Interval(m) => {
            let _ = writeln!(out, "dim 1\nvertices {}", m.nodes().len());
            for x in m.nodes() {
                let _ = writeln!(out, "{x:?}");
            }
            let _ = writeln!(out, "boundary 2");
            let last = m.nodes().len() - 1;
            for (v, c) in [(0, m.left()), (last, m.right())] {
                let _ = match c.marker {
                    BoundaryMarker::Dirichlet => writeln!(out, "{v} D"),
                    BoundaryMarker::Neumann => writeln!(out, "{v} N {:?}", c.psi),
                };
            }
        }
        Mesh::Triangle(m) => {
            let _ = writeln!(out, "dim 2\nvertices {}", m.vertices().len());
            for p in m.vertices() {
                let _ = writeln!(out, "{:?} {:?}", p[0], p[1]);
            }
            let _ = writeln!(out, "triangles {}", m.triangles().len());
            for t in m.triangles() {
                let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
            }
            let _ = writeln!(out, "boundary {}", m.boundary().len());
            for b in m.boundary() {
                let _ = writeln!(
                    out,
                    "{} {} {} {:?}",
                    b.vertices[0],
                    b.vertices[1],
                    marker_str(b.marker),
                    b.psi
                );
            }
        }
    }
    out
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh, MeshError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| MeshError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_mesh(&text)
}

pub fn save_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let path = path.as_ref();
    std::fs::write(path, write_mesh(mesh)).map_err(|e| MeshError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
