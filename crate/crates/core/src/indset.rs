//! Greedy maximal independent set, flat and hierarchical.
//!
//! A cell reports one bit per pin to its callers: whether some chosen vertex
//! of its expansion is adjacent to the pin. A caller never chooses a vertex
//! bound to such a pin, which is all it takes to keep the union independent.
//! Every skipped vertex has a chosen neighbour, so the result is maximal and
//! hence within a factor `B` of optimal on graphs of maximum degree `B`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::expand::FlatGraph;
use crate::hsolution::HSolution;
use crate::spec::{stats, HierSpec, IndexedCell, VertexPath};

/// Takes each vertex of `order` not yet adjacent to the set.
pub fn find_set(g: &FlatGraph, order: &[usize]) -> Vec<usize> {
    let adj = g.adjacency();
    let mut blocked = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for &v in order {
        if blocked[v] {
            continue;
        }
        out.push(v);
        blocked[v] = true;
        for &w in &adj[v] {
            blocked[w] = true;
        }
    }
    out
}

pub fn is_independent(g: &FlatGraph, chosen: &[bool]) -> bool {
    g.edges.iter().all(|&(a, b)| !(chosen[a] && chosen[b]))
}

pub fn is_maximal_independent(g: &FlatGraph, chosen: &[bool]) -> bool {
    if !is_independent(g, chosen) {
        return false;
    }
    let adj = g.adjacency();
    (0..g.vertex_count()).all(|v| chosen[v] || adj[v].iter().any(|&w| chosen[w]))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetBurnt {
    pub removed: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetLevel {
    pub a: Vec<String>,
    /// Members of `a` not bound to a removed callee pin.
    pub b_set: Vec<String>,
    pub x: Vec<String>,
    pub size: BigUint,
}

#[derive(Debug, Clone)]
pub struct HindResult {
    pub size: BigUint,
    /// Maximum degree of the expansion.
    pub bound: BigUint,
    pub levels: Vec<SetLevel>,
    pub burnt: Vec<SetBurnt>,
    pub solution: HSolution,
}

/// Runs the heuristic. A caller-supplied degree bound must not be below the
/// true maximum degree.
pub fn hind_set(spec: &HierSpec, bound: Option<u64>) -> Result<HindResult> {
    spec.ensure_simple()?;
    let max_degree = stats(spec).max_degree;
    if let Some(given) = bound {
        if BigUint::from(given) < max_degree {
            return Err(Error::DegreeBound {
                given: given.into(),
                actual: max_degree,
            });
        }
    }
    let idx = spec.indexed();
    let n = idx.len();
    let mut levels: Vec<SetLevel> = Vec::with_capacity(n);
    let mut burnt: Vec<SetBurnt> = Vec::with_capacity(n);
    let mut solution = HSolution::skeleton(spec);
    for (i, cell) in idx.iter().enumerate() {
        let (level, b) = process_cell(spec, i, cell, i + 1 == n, &levels, &burnt);
        solution.cells[i].selected = level.x.iter().map(|v| VertexPath::local(v.clone())).collect();
        levels.push(level);
        burnt.push(b);
    }
    Ok(HindResult {
        size: levels.last().map(|l| l.size.clone()).unwrap_or_default(),
        bound: max_degree,
        levels,
        burnt,
        solution,
    })
}

fn process_cell(
    spec: &HierSpec,
    i: usize,
    cell: &IndexedCell,
    root: bool,
    levels: &[SetLevel],
    burnt: &[SetBurnt],
) -> (SetLevel, SetBurnt) {
    let def = &spec.cells[i];
    let name = |t: usize| {
        if t < def.pins.len() {
            def.pins[t].clone()
        } else {
            def.vertices[t - def.pins.len()].clone()
        }
    };
    let explicit: Vec<usize> = (cell.pins..cell.terminals())
        .chain(if root { 0..cell.pins } else { 0..0 })
        .collect();

    let mut touches_removed = vec![false; cell.terminals()];
    for (callee, binding) in &cell.calls {
        for (r, &t) in binding.iter().enumerate() {
            if burnt[*callee].removed[r] {
                touches_removed[t] = true;
            }
        }
    }
    let is_local_pin = |t: usize| !root && cell.is_pin(t);

    let b_set: Vec<usize> = explicit.iter().copied().filter(|&t| !touches_removed[t]).collect();
    let mut blocked = vec![false; cell.terminals()];
    let mut chosen = vec![false; cell.terminals()];
    let mut x = Vec::new();
    for &v in &b_set {
        if blocked[v] {
            continue;
        }
        x.push(v);
        chosen[v] = true;
        for &w in &cell.adj[v] {
            if !is_local_pin(w) {
                blocked[w] = true;
            }
        }
    }

    let removed = if root {
        Vec::new()
    } else {
        (0..cell.pins)
            .map(|p| touches_removed[p] || cell.adj[p].iter().any(|&w| chosen[w]))
            .collect()
    };

    let mut size = BigUint::from(x.len());
    for (callee, _) in &cell.calls {
        size += &levels[*callee].size;
    }
    let level = SetLevel {
        a: explicit.iter().map(|&t| name(t)).collect(),
        b_set: b_set.iter().map(|&t| name(t)).collect(),
        x: x.iter().map(|&t| name(t)).collect(),
        size,
    };
    (level, SetBurnt { removed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::expand;
    use crate::oracle::fixtures;
    use crate::spec::CellDef;

    fn path(n: usize) -> FlatGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FlatGraph::from_edges(n, &edges)
    }

    #[test]
    fn flat_examples() {
        let empty = FlatGraph::from_edges(5, &[]);
        assert_eq!(find_set(&empty, &[0, 1, 2, 3, 4]).len(), 5);
        let star = FlatGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(find_set(&star, &[0, 1, 2, 3, 4]), vec![0]);
        assert_eq!(find_set(&path(6), &[0, 1, 2, 3, 4, 5]), vec![0, 2, 4]);
    }

    #[test]
    fn one_cell_path() {
        let mut c = CellDef::new("G");
        for k in 1..=6 {
            c = c.vertex(&format!("v{k}"));
        }
        for k in 1..6 {
            c = c.edge(&format!("v{k}"), &format!("v{}", k + 1));
        }
        let r = hind_set(&HierSpec::new(vec![c]), None).unwrap();
        assert_eq!(r.size, BigUint::from(3u32));
        assert_eq!(r.bound, BigUint::from(2u32));
    }

    fn check(spec: &HierSpec) {
        let r = hind_set(spec, None).unwrap();
        let g = expand(spec, 10_000).unwrap();
        let set = r.solution.flatten(10_000).unwrap();
        let chosen: Vec<bool> = g.vertices.iter().map(|v| set.contains(v)).collect();
        assert!(is_maximal_independent(&g, &chosen));
        assert_eq!(BigUint::from(set.len()), r.size);
    }

    #[test]
    fn fixtures_are_maximal_independent() {
        check(&fixtures::chain(3));
        check(&fixtures::tower(6));
    }

    #[test]
    fn degree_bound_is_checked() {
        let spec = fixtures::chain(3);
        assert!(hind_set(&spec, Some(2)).is_ok());
        assert_eq!(hind_set(&spec, Some(1)).unwrap_err().code(), "degree-bound");
    }
}
