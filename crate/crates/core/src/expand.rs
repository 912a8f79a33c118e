//! Materializes the expansion of a specification as a labeled multigraph.
//!
//! Callee pins disappear on instantiation: each is merged into the caller
//! terminal it is bound to, which keeps its caller-side label. Pins of the
//! root survive as ordinary vertices.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::spec::{stats, HierSpec, VertexPath};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlatGraph {
    pub vertices: Vec<VertexPath>,
    /// Edge occurrences as vertex-index pairs; parallel edges repeat.
    pub edges: Vec<(usize, usize)>,
}

impl FlatGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index(&self) -> HashMap<&VertexPath, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect()
    }

    /// Adjacency lists with one entry per edge occurrence.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Builds a graph over `n` vertices labeled `v0, v1, ...`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        FlatGraph {
            vertices: (0..n).map(|i| VertexPath::local(format!("v{i}"))).collect(),
            edges: edges.to_vec(),
        }
    }

    /// `v LABEL` lines followed by one `e LABEL1 LABEL2` line per edge occurrence.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "v {v}");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "e {} {}", self.vertices[a], self.vertices[b]);
        }
        out
    }
}

/// Expands `spec`, refusing if the expansion would exceed `vertex_limit` vertices.
pub fn expand(spec: &HierSpec, vertex_limit: u64) -> Result<FlatGraph> {
    let count = stats(spec).expansion_vertices;
    if count > BigUint::from(vertex_limit) {
        return Err(Error::limit("expansion vertex", vertex_limit, count));
    }
    let mut g = FlatGraph::default();
    let root = spec.root();
    let images: Vec<usize> = spec.cells[root]
        .pins
        .iter()
        .map(|p| {
            g.vertices.push(VertexPath::local(p.clone()));
            g.vertices.len() - 1
        })
        .collect();
    let mut trail = Vec::new();
    build(spec, root, &mut trail, &images, &mut g);
    Ok(g)
}

fn build(spec: &HierSpec, cell: usize, trail: &mut Vec<String>, pins: &[usize], g: &mut FlatGraph) {
    let def = &spec.cells[cell];
    let mut id: HashMap<&str, usize> = HashMap::new();
    for (p, &img) in def.pins.iter().zip(pins) {
        id.insert(p, img);
    }
    for v in &def.vertices {
        g.vertices.push(VertexPath::new(trail.clone(), v.clone()));
        id.insert(v, g.vertices.len() - 1);
    }
    for (a, b) in &def.edges {
        g.edges.push((id[a.as_str()], id[b.as_str()]));
    }
    for nt in &def.nonterminals {
        let images: Vec<usize> = nt.binding.iter().map(|t| id[t.as_str()]).collect();
        trail.push(nt.name.clone());
        build(spec, nt.callee, trail, &images, g);
        trail.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Pin,
    Explicit,
}

/// Follows `path` from the root; returns the defining cell and the vertex kind.
pub fn resolve(spec: &HierSpec, path: &VertexPath) -> Result<(usize, VertexKind)> {
    let cells = trail_cells(spec, path)?;
    let cell = *cells.last().expect("root is always present");
    let def = &spec.cells[cell];
    if def.pins.contains(&path.name) {
        Ok((cell, VertexKind::Pin))
    } else if def.vertices.contains(&path.name) {
        Ok((cell, VertexKind::Explicit))
    } else {
        Err(Error::Unresolved {
            path: path.to_string(),
            reason: format!("cell `{}` has no terminal `{}`", def.name, path.name),
        })
    }
}

/// The label under which `path` appears in the expansion: a pin path is
/// replaced by the caller terminal it is bound to, repeatedly.
pub fn canonical(spec: &HierSpec, path: &VertexPath) -> Result<VertexPath> {
    resolve(spec, path)?;
    let cells = trail_cells(spec, path)?;
    let mut depth = path.trail.len();
    let mut name = path.name.clone();
    while depth > 0 {
        let def = &spec.cells[cells[depth]];
        let Some(pin) = def.pins.iter().position(|p| *p == name) else {
            break;
        };
        let parent = &spec.cells[cells[depth - 1]];
        let inst = &path.trail[depth - 1];
        let nt = parent
            .nonterminals
            .iter()
            .find(|nt| nt.name == *inst)
            .expect("trail resolved");
        name = nt.binding[pin].clone();
        depth -= 1;
    }
    Ok(VertexPath::new(path.trail[..depth].to_vec(), name))
}

/// Cells visited along the trail, starting with the root.
fn trail_cells(spec: &HierSpec, path: &VertexPath) -> Result<Vec<usize>> {
    let mut cells = vec![spec.root()];
    for (k, seg) in path.trail.iter().enumerate() {
        let def = &spec.cells[*cells.last().unwrap()];
        match def.nonterminals.iter().find(|nt| nt.name == *seg) {
            Some(nt) => cells.push(nt.callee),
            None => {
                return Err(Error::Unresolved {
                    path: path.to_string(),
                    reason: format!("no instance `{seg}` in cell `{}` (trail position {})", def.name, k + 1),
                })
            }
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fixtures;
    use crate::spec::CellDef;

    fn labels(g: &FlatGraph) -> Vec<String> {
        g.vertices.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn one_cell() {
        let spec = HierSpec::new(vec![CellDef::new("G").vertex("a").vertex("b").edge("a", "b")]);
        let g = expand(&spec, 10).unwrap();
        assert_eq!(labels(&g), vec!["a", "b"]);
        assert_eq!(g.edges, vec![(0, 1)]);
    }

    #[test]
    fn chain3_is_a_six_path() {
        let g = expand(&fixtures::chain(3), 100).unwrap();
        assert_eq!(labels(&g), vec!["u", "v", "c/u", "c/v", "c/c/u", "c/c/v"]);
        assert_eq!(g.edges.len(), 5);
        let adj = g.adjacency();
        let mut degrees: Vec<usize> = adj.iter().map(Vec::len).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn multi1_has_parallel_pair() {
        let g = expand(&fixtures::multi1(), 100).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges, vec![(0, 1), (0, 1)]);
    }

    #[test]
    fn counts_match_stats_on_towers() {
        for k in 1..=10 {
            let spec = fixtures::tower(k);
            let s = stats(&spec);
            let g = expand(&spec, 1 << 12).unwrap();
            assert_eq!(BigUint::from(g.vertices.len()), s.expansion_vertices, "k={k}");
            assert_eq!(BigUint::from(g.edges.len()), s.expansion_edges, "k={k}");
        }
    }

    #[test]
    fn limit_reports_exact_count() {
        let err = expand(&fixtures::tower(20), 1000).unwrap_err();
        match err {
            Error::LimitExceeded { actual, .. } => {
                assert_eq!(actual, BigUint::from((1u64 << 21) - 2))
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn resolve_paths() {
        let spec = fixtures::chain(3);
        let root = resolve(&spec, &"u".parse().unwrap()).unwrap();
        assert_eq!(root, (2, VertexKind::Explicit));
        let inner = resolve(&spec, &"c/c/u".parse().unwrap()).unwrap();
        assert_eq!(inner, (0, VertexKind::Explicit));
        let pin = resolve(&spec, &"c/c/p".parse().unwrap()).unwrap();
        assert_eq!(pin, (0, VertexKind::Pin));
        assert!(resolve(&spec, &"c/x/u".parse().unwrap()).is_err());
        assert!(resolve(&spec, &"c/w".parse().unwrap()).is_err());
    }

    #[test]
    fn canonical_follows_pins_up() {
        let spec = fixtures::chain(3);
        let p = canonical(&spec, &"c/c/p".parse().unwrap()).unwrap();
        assert_eq!(p.to_string(), "c/v");
        let spec = fixtures::pinpair();
        let p = canonical(&spec, &"d/c/p2".parse().unwrap()).unwrap();
        assert_eq!(p.to_string(), "b");
    }

    #[test]
    fn every_label_resolves_and_is_canonical() {
        let spec = fixtures::tower(4);
        let g = expand(&spec, 1000).unwrap();
        for v in &g.vertices {
            assert_eq!(resolve(&spec, v).unwrap().1, VertexKind::Explicit);
            assert_eq!(&canonical(&spec, v).unwrap(), v);
        }
    }

    #[test]
    fn deterministic_and_exportable() {
        let spec = fixtures::pinpair();
        let a = expand(&spec, 100).unwrap();
        let b = expand(&spec, 100).unwrap();
        assert_eq!(a, b);
        let text = a.to_text();
        assert!(text.starts_with("v a\nv b\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 3);
    }
}
