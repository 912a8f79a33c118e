//! Hierarchical solutions: a specification-shaped description of a vertex
//! set. Each cell lists the vertices it selects (as paths relative to the
//! cell) and mirrors the calls of the source cell. A vertex of the expansion
//! is in the set iff one of the cell instances on its trail selects it.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::spec::{is_identifier, HierSpec, VertexPath};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolutionCell {
    pub name: String,
    pub selected: Vec<VertexPath>,
    /// Instance name and callee index, in the source cell's order.
    pub calls: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HSolution {
    pub cells: Vec<SolutionCell>,
}

/// Bookkeeping from a streaming pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamStats {
    pub emitted: u64,
    /// Deepest traversal stack seen, in cell instances.
    pub peak_depth: usize,
}

impl HSolution {
    /// Same call structure as `spec`, nothing selected.
    pub fn skeleton(spec: &HierSpec) -> Self {
        let cells = spec
            .cells
            .iter()
            .map(|c| SolutionCell {
                name: c.name.clone(),
                selected: Vec::new(),
                calls: c.nonterminals.iter().map(|nt| (nt.name.clone(), nt.callee)).collect(),
            })
            .collect();
        HSolution { cells }
    }

    pub fn root(&self) -> usize {
        self.cells.len() - 1
    }

    /// Membership of a vertex given by its canonical expansion label.
    pub fn query(&self, v: &VertexPath) -> Result<bool> {
        let mut cell = self.root();
        for depth in 0..=v.trail.len() {
            let rel = v.suffix(depth);
            if self.cells[cell].selected.contains(&rel) {
                return Ok(true);
            }
            if depth == v.trail.len() {
                break;
            }
            let seg = &v.trail[depth];
            match self.cells[cell].calls.iter().find(|(inst, _)| inst == seg) {
                Some(&(_, callee)) => cell = callee,
                None => {
                    return Err(Error::Unresolved {
                        path: v.to_string(),
                        reason: format!("no instance `{seg}` in cell `{}`", self.cells[cell].name),
                    })
                }
            }
        }
        Ok(false)
    }

    /// Number of instances in the hierarchy tree.
    pub fn tree_nodes(&self) -> BigUint {
        let mut nodes: Vec<BigUint> = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let mut t = BigUint::one();
            for &(_, callee) in &c.calls {
                t += &nodes[callee];
            }
            nodes.push(t);
        }
        nodes.pop().unwrap_or_default()
    }

    /// Size of the denoted set, without enumerating it.
    pub fn selected_count(&self) -> BigUint {
        let mut count: Vec<BigUint> = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let mut t = BigUint::from(c.selected.len());
            for &(_, callee) in &c.calls {
                t += &count[callee];
            }
            count.push(t);
        }
        count.pop().unwrap_or_else(BigUint::zero)
    }

    /// Preorder walk that hands every selected vertex's full label to `sink`
    /// exactly once. Working memory is one stack frame per tree level.
    pub fn stream(&self, node_limit: u64, mut sink: impl FnMut(&VertexPath)) -> Result<StreamStats> {
        let nodes = self.tree_nodes();
        if nodes > BigUint::from(node_limit) {
            return Err(Error::limit("hierarchy-tree node", node_limit, nodes));
        }
        let mut stats = StreamStats {
            emitted: 0,
            peak_depth: 0,
        };
        let mut trail: Vec<String> = Vec::new();
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut label = VertexPath::local("");
        let mut enter = |cell: usize, trail: &[String], stats: &mut StreamStats| {
            for rel in &self.cells[cell].selected {
                label.trail.clear();
                label.trail.extend_from_slice(trail);
                label.trail.extend_from_slice(&rel.trail);
                label.name.clone_from(&rel.name);
                sink(&label);
                stats.emitted += 1;
            }
        };
        enter(self.root(), &trail, &mut stats);
        stack.push((self.root(), 0));
        loop {
            stats.peak_depth = stats.peak_depth.max(stack.len());
            let Some(top) = stack.last_mut() else { break };
            let (cell, next) = *top;
            if next == self.cells[cell].calls.len() {
                stack.pop();
                trail.pop();
                continue;
            }
            top.1 += 1;
            let (inst, callee) = &self.cells[cell].calls[next];
            trail.push(inst.clone());
            enter(*callee, &trail, &mut stats);
            stack.push((*callee, 0));
        }
        Ok(stats)
    }

    pub fn flatten(&self, vertex_limit: u64) -> Result<BTreeSet<VertexPath>> {
        let count = self.selected_count();
        if count > BigUint::from(vertex_limit) {
            return Err(Error::limit("solution vertex", vertex_limit, count));
        }
        let mut out = BTreeSet::new();
        self.stream(u64::MAX, |v| {
            out.insert(v.clone());
        })?;
        Ok(out)
    }
}

pub fn serialize_solution(sol: &HSolution) -> String {
    let mut out = String::from("hsol 1\n");
    for c in &sol.cells {
        let _ = writeln!(out, "cell {}", c.name);
        for s in &c.selected {
            let _ = writeln!(out, "select {s}");
        }
        for (inst, callee) in &c.calls {
            let _ = writeln!(out, "nonterm {inst} : {}", sol.cells[*callee].name);
        }
        out.push_str("end\n");
    }
    out
}

pub fn parse_solution(text: &str) -> Result<HSolution> {
    let mut cells: Vec<SolutionCell> = Vec::new();
    let mut by_name: HashMap<String, usize> = HashMap::new();
    let mut current: Option<SolutionCell> = None;
    let mut saw_header = false;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !saw_header {
            if toks != ["hsol", "1"] {
                return Err(Error::parse(line_no, "expected header `hsol 1`"));
            }
            saw_header = true;
            continue;
        }
        match (&mut current, toks.as_slice()) {
            (None, ["cell", name]) if is_identifier(name) => {
                if by_name.contains_key(*name) {
                    return Err(Error::parse(line_no, format!("duplicate cell name `{name}`")));
                }
                current = Some(SolutionCell {
                    name: name.to_string(),
                    ..Default::default()
                });
            }
            (None, _) => return Err(Error::parse(line_no, "expected `cell NAME`")),
            (Some(c), ["select", path]) => {
                let p: VertexPath = path
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad path `{path}`")))?;
                c.selected.push(p);
            }
            (Some(c), ["nonterm", inst, ":", callee]) if is_identifier(inst) => {
                let Some(&idx) = by_name.get(*callee) else {
                    return Err(Error::parse(line_no, format!("undeclared cell `{callee}`")));
                };
                if c.calls.iter().any(|(n, _)| n == inst) {
                    return Err(Error::parse(line_no, format!("duplicate instance `{inst}`")));
                }
                c.calls.push((inst.to_string(), idx));
            }
            (Some(_), ["end"]) => {
                let c = current.take().expect("open cell");
                by_name.insert(c.name.clone(), cells.len());
                cells.push(c);
            }
            (Some(_), _) => return Err(Error::parse(line_no, format!("unrecognized line `{line}`"))),
        }
    }
    if current.is_some() {
        return Err(Error::parse(text.lines().count(), "missing `end`"));
    }
    if cells.is_empty() {
        return Err(Error::parse(1, "no cells"));
    }
    Ok(HSolution { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fixtures;

    fn path(s: &str) -> VertexPath {
        s.parse().unwrap()
    }

    fn tower_solution(k: usize) -> HSolution {
        let mut sol = HSolution::skeleton(&fixtures::tower(k));
        for c in &mut sol.cells {
            c.selected.push(VertexPath::local("a"));
        }
        sol
    }

    #[test]
    fn query_own_and_descendant_selection() {
        let mut sol = HSolution::skeleton(&fixtures::chain(3));
        sol.cells[2].selected.push(VertexPath::local("u"));
        sol.cells[2].selected.push(path("c/c/v"));
        assert!(sol.query(&path("u")).unwrap());
        assert!(sol.query(&path("c/c/v")).unwrap());
        assert!(!sol.query(&path("c/u")).unwrap());
        assert!(sol.query(&path("c/q/u")).is_err());
    }

    #[test]
    fn empty_solution_streams_nothing() {
        let sol = HSolution::skeleton(&fixtures::tower(3));
        let stats = sol.stream(100, |_| panic!("nothing selected")).unwrap();
        assert_eq!(stats.emitted, 0);
        assert!(sol.flatten(10).unwrap().is_empty());
    }

    #[test]
    fn stream_matches_flatten_and_count() {
        let sol = tower_solution(5);
        let mut seen = Vec::new();
        let stats = sol.stream(1000, |v| seen.push(v.clone())).unwrap();
        assert_eq!(stats.emitted, 31);
        assert_eq!(stats.peak_depth, 5);
        let flat = sol.flatten(1000).unwrap();
        assert_eq!(flat.len(), seen.len());
        assert_eq!(flat, seen.into_iter().collect());
        assert_eq!(sol.selected_count(), BigUint::from(31u32));
        for v in &flat {
            assert!(sol.query(v).unwrap());
        }
        assert!(!sol.query(&path("L/R/b")).unwrap());
    }

    #[test]
    fn limits() {
        let sol = tower_solution(12);
        assert_eq!(sol.stream(100, |_| {}).unwrap_err().code(), "limit-exceeded");
        assert_eq!(sol.flatten(100).unwrap_err().code(), "limit-exceeded");
    }

    #[test]
    fn text_round_trip() {
        let mut sol = tower_solution(3);
        sol.cells[2].selected.push(path("L/R/b"));
        let text = serialize_solution(&sol);
        assert!(text.contains("select L/R/b\n"));
        assert_eq!(parse_solution(&text).unwrap(), sol);
        assert!(parse_solution("hsol 1\ncell A\nnonterm x : B\nend\n").is_err());
    }
}
