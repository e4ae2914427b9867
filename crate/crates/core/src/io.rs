//! Line-based text formats for instances and solutions.
//!
//! ```text
//! pdpc-instance v1
//! n 4
//! edge 0 1            # edge ids in order of appearance
//! rot 0 0.0           # ccw darts at a vertex, as edge.end
//! rot 1 0.1
//! place 1 in 0 0.0 -  # optional: component placement, `-` for a lone vertex
//! pair 0 2
//! hole 0 1 2 3 | 5    # boundary walk, then enclosed vertices
//! ell 2
//! ```
//!
//! ```text
//! pdpc-solution v1
//! patch 0 2 0:0 0:2   # edge, optional corners as hole:pos
//! path 0 2
//! ```

use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::embed::{Dart, EmbeddedGraph, Placement};
use crate::graph::Vertex;
use crate::placement::PatchEdge;
use crate::region::{Corner, Hole, OuterRegion, PdpcInstance};

pub const INSTANCE_HEADER: &str = "pdpc-instance v1";
pub const SOLUTION_HEADER: &str = "pdpc-solution v1";

#[derive(Error, Debug)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Embedding(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn num(line: usize, tok: &str) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| syntax(line, format!("expected a number, got `{tok}`")))
}

fn dart(line: usize, tok: &str) -> Result<Option<Dart>, FormatError> {
    if tok == "-" {
        return Ok(None);
    }
    let (e, end) = tok.split_once('.').ok_or_else(|| syntax(line, format!("expected edge.end, got `{tok}`")))?;
    let end = num(line, end)?;
    if end > 1 {
        return Err(syntax(line, "dart end must be 0 or 1"));
    }
    Ok(Some(Dart::new(num(line, e)?, end as u8)))
}

fn dart_str(d: Option<Dart>) -> String {
    d.map_or("-".into(), |d| format!("{}.{}", d.edge, d.end))
}

/// Non-empty, comment-stripped lines with their 1-based numbers; checks the header.
fn lines<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>, FormatError> {
    let mut out = Vec::new();
    let mut saw_header = false;
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        if !saw_header {
            if body != header {
                return Err(syntax(i + 1, format!("expected header `{header}`")));
            }
            saw_header = true;
            continue;
        }
        out.push((i + 1, body.split_whitespace().collect()));
    }
    if !saw_header {
        return Err(syntax(1, format!("expected header `{header}`")));
    }
    Ok(out)
}

pub fn parse_instance(text: &str) -> Result<PdpcInstance, FormatError> {
    let mut n = None;
    let mut edges = Vec::new();
    let mut rot: Vec<(usize, Vertex, Vec<Dart>)> = Vec::new();
    let mut places: Vec<(usize, usize, Placement)> = Vec::new();
    let mut pairs = Vec::new();
    let mut holes = Vec::new();
    let mut ell = None;
    for (ln, toks) in lines(text, INSTANCE_HEADER)? {
        let args = &toks[1..];
        match toks[0] {
            "n" if args.len() == 1 => n = Some(num(ln, args[0])?),
            "edge" if args.len() == 2 => edges.push((num(ln, args[0])?, num(ln, args[1])?)),
            "rot" if !args.is_empty() => {
                let v = num(ln, args[0])?;
                let ds = args[1..]
                    .iter()
                    .map(|t| dart(ln, t)?.ok_or_else(|| syntax(ln, "`-` is not a dart")))
                    .collect::<Result<_, _>>()?;
                rot.push((ln, v, ds));
            }
            "place" if args.len() == 2 && args[1] == "root" => places.push((ln, num(ln, args[0])?, Placement::Root)),
            "place" if args.len() == 5 && args[1] == "in" => places.push((
                ln,
                num(ln, args[0])?,
                Placement::In { host_component: num(ln, args[2])?, host: dart(ln, args[3])?, outer: dart(ln, args[4])? },
            )),
            "pair" if args.len() == 2 => pairs.push((num(ln, args[0])?, num(ln, args[1])?)),
            "hole" => {
                let split = args.iter().position(|&t| t == "|").unwrap_or(args.len());
                let walk = args[..split].iter().map(|t| num(ln, t)).collect::<Result<_, _>>()?;
                let inside = args.get(split + 1..).unwrap_or(&[]).iter().map(|t| num(ln, t)).collect::<Result<_, _>>()?;
                holes.push(Hole { walk, inside });
            }
            "ell" if args.len() == 1 => ell = Some(num(ln, args[0])?),
            other => return Err(syntax(ln, format!("unexpected `{other}` line or wrong arity"))),
        }
    }
    let n = n.ok_or_else(|| syntax(0, "missing `n` line"))?;
    let ell = ell.ok_or_else(|| syntax(0, "missing `ell` line"))?;
    let mut rotation: Vec<Option<Vec<Dart>>> = vec![None; n];
    for (ln, v, ds) in rot {
        if v >= n {
            return Err(syntax(ln, format!("vertex {v} out of range")));
        }
        if rotation[v].replace(ds).is_some() {
            return Err(syntax(ln, format!("second rotation for vertex {v}")));
        }
    }
    let rotation = rotation.into_iter().map(|r| r.unwrap_or_default()).collect();
    let emb = |e: crate::embed::EmbedError| FormatError::Embedding(e.to_string());
    let mut g = EmbeddedGraph::new(n, edges, rotation).map_err(emb)?;
    if !places.is_empty() {
        let c = g.component_count();
        let mut placement: Vec<Option<Placement>> = vec![None; c];
        for (ln, comp, p) in places {
            if comp >= c {
                return Err(syntax(ln, format!("component {comp} out of range")));
            }
            placement[comp] = Some(p);
        }
        let defaults = g.placement().to_vec();
        let placement = placement.into_iter().zip(defaults).map(|(p, d)| p.unwrap_or(d)).collect();
        g = g.with_placement(placement).map_err(emb)?;
    }
    let g = g.with_terminals(pairs).map_err(emb)?;
    Ok(PdpcInstance { g, region: OuterRegion { holes }, ell })
}

pub fn write_instance(inst: &PdpcInstance) -> String {
    let g = &inst.g;
    let mut s = format!("{INSTANCE_HEADER}\nn {}\n", g.n());
    for &(u, v) in g.edges() {
        s += &format!("edge {u} {v}\n");
    }
    for v in 0..g.n() {
        if !g.rotation(v).is_empty() {
            let ds: Vec<String> = g.rotation(v).iter().map(|&d| dart_str(Some(d))).collect();
            s += &format!("rot {v} {}\n", ds.join(" "));
        }
    }
    for (c, p) in g.placement().iter().enumerate().skip(1) {
        match p {
            Placement::Root => s += &format!("place {c} root\n"),
            Placement::In { host_component, host, outer } => {
                s += &format!("place {c} in {host_component} {} {}\n", dart_str(*host), dart_str(*outer))
            }
        }
    }
    for &(a, b) in g.terminals() {
        s += &format!("pair {a} {b}\n");
    }
    for h in &inst.region.holes {
        let w: Vec<String> = h.walk.iter().map(|v| v.to_string()).collect();
        s += &format!("hole {}", w.join(" "));
        if !h.inside.is_empty() {
            let i: Vec<String> = h.inside.iter().map(|v| v.to_string()).collect();
            s += &format!(" | {}", i.join(" "));
        }
        s += "\n";
    }
    s + &format!("ell {}\n", inst.ell)
}

/// A claimed solution: patch edges (corners optional) and one path per pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFile {
    pub patch: Vec<(Vertex, Vertex, Option<(Corner, Corner)>)>,
    pub paths: Vec<Vec<Vertex>>,
}

impl SolutionFile {
    pub fn from_patch(edges: &[PatchEdge], paths: &[Vec<Vertex>]) -> Self {
        SolutionFile { patch: edges.iter().map(|e| (e.u, e.v, Some((e.cu, e.cv)))).collect(), paths: paths.to_vec() }
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.patch.iter().map(|&(u, v, _)| (u, v)).collect()
    }
}

fn corner(line: usize, tok: &str) -> Result<Corner, FormatError> {
    let (h, p) = tok.split_once(':').ok_or_else(|| syntax(line, format!("expected hole:pos, got `{tok}`")))?;
    Ok(Corner { hole: num(line, h)?, pos: num(line, p)? })
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, FormatError> {
    let mut sol = SolutionFile { patch: Vec::new(), paths: Vec::new() };
    for (ln, toks) in lines(text, SOLUTION_HEADER)? {
        let args = &toks[1..];
        match toks[0] {
            "patch" if args.len() == 2 => sol.patch.push((num(ln, args[0])?, num(ln, args[1])?, None)),
            "patch" if args.len() == 4 => sol.patch.push((
                num(ln, args[0])?,
                num(ln, args[1])?,
                Some((corner(ln, args[2])?, corner(ln, args[3])?)),
            )),
            "path" if !args.is_empty() => sol.paths.push(args.iter().map(|t| num(ln, t)).collect::<Result<_, _>>()?),
            other => return Err(syntax(ln, format!("unexpected `{other}` line or wrong arity"))),
        }
    }
    Ok(sol)
}

pub fn write_solution(sol: &SolutionFile) -> String {
    let mut s = format!("{SOLUTION_HEADER}\n");
    for &(u, v, c) in &sol.patch {
        match c {
            Some((a, b)) => s += &format!("patch {u} {v} {}:{} {}:{}\n", a.hole, a.pos, b.hole, b.pos),
            None => s += &format!("patch {u} {v}\n"),
        }
    }
    for p in &sol.paths {
        let p: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        s += &format!("path {}\n", p.join(" "));
    }
    s
}

/// Writes through a temporary file in the target directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), FormatError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| FormatError::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "pdpc-instance v1
# a path 0-1 and a lone vertex 2
n 4
edge 0 1
rot 0 0.0
rot 1 0.1
pair 0 2
hole 0 1 2 3
ell 1
";

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.g.n(), 4);
        let text = write_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn solution_round_trip() {
        let text = "pdpc-solution v1\npatch 1 2 0:1 0:2\npatch 0 3\npath 0 1 2\n";
        let sol = parse_solution(text).unwrap();
        assert_eq!(write_solution(&sol), text);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_instance("pdpc-instance v1\nn 2\nbogus 1\n").unwrap_err();
        assert!(err.to_string().starts_with("line 3"));
        assert!(parse_instance("nope\n").is_err());
        assert!(parse_solution("pdpc-solution v1\npatch 0 1 0-1 0:2\n").is_err());
    }
}
