//! Rewrites a specification so that no cell has an edge between two of its
//! own pins, without changing the expansion.
//!
//! Phase 1 computes, bottom-up, which pin pairs of each cell are adjacent in
//! the cell's expansion and pushes those pairs through the bindings into the
//! caller as ordinary terminal edges. Phase 2 deletes every pin-pin edge.
//!
//! Cells stay simple graphs, so a pushed edge that lands on an existing edge
//! (or on another pushed edge) is not duplicated. The expansion is preserved
//! exactly only for inputs where this never happens; see [`collision_free`].

use std::collections::{BTreeSet, HashSet};

use crate::spec::{CellDef, HierSpec, IndexedCell};

/// Per cell, the pin pairs adjacent in that cell's expansion, by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinClosure {
    pub cells: Vec<Vec<(String, String)>>,
}

type Pair = (usize, usize);

fn ordered(a: usize, b: usize) -> Pair {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Closure pairs as pin indices, plus every pushed pair per cell in
/// instance order (before deduplication).
fn closure_indices(idx: &[IndexedCell]) -> (Vec<BTreeSet<Pair>>, Vec<Vec<Pair>>) {
    let mut closure: Vec<BTreeSet<Pair>> = Vec::with_capacity(idx.len());
    let mut pushed_all = Vec::with_capacity(idx.len());
    for cell in idx {
        let mut pairs = BTreeSet::new();
        for &(a, b) in &cell.edges {
            if cell.is_pin(a) && cell.is_pin(b) {
                pairs.insert(ordered(a, b));
            }
        }
        let mut pushed = Vec::new();
        for (callee, binding) in &cell.calls {
            for &(a, b) in &closure[*callee] {
                let pair = ordered(binding[a], binding[b]);
                pushed.push(pair);
                if cell.is_pin(pair.0) && cell.is_pin(pair.1) {
                    pairs.insert(pair);
                }
            }
        }
        closure.push(pairs);
        pushed_all.push(pushed);
    }
    (closure, pushed_all)
}

pub fn pin_closure(spec: &HierSpec) -> PinClosure {
    let idx = spec.indexed();
    let (closure, _) = closure_indices(&idx);
    let cells = closure
        .iter()
        .zip(&spec.cells)
        .map(|(pairs, def)| {
            pairs
                .iter()
                .map(|&(a, b)| (def.pins[a].clone(), def.pins[b].clone()))
                .collect()
        })
        .collect();
    PinClosure { cells }
}

fn terminal_name(def: &CellDef, t: usize) -> String {
    if t < def.pins.len() {
        def.pins[t].clone()
    } else {
        def.vertices[t - def.pins.len()].clone()
    }
}

/// True when simplification preserves edge multiplicities: no pushed pair
/// coincides with an existing or another pushed edge in any cell, and the
/// root has no adjacent pin pair (root pin-pin edges would be deleted).
pub fn collision_free(spec: &HierSpec) -> bool {
    let idx = spec.indexed();
    let (closure, pushed) = closure_indices(&idx);
    for (cell, pushed) in idx.iter().zip(&pushed) {
        let mut seen = HashSet::new();
        let own = cell.edges.iter().map(|&(a, b)| ordered(a, b));
        for pair in own.chain(pushed.iter().copied()) {
            if !seen.insert(pair) {
                return false;
            }
        }
    }
    closure.last().is_none_or(BTreeSet::is_empty)
}

/// Output cells keep pins, vertices and nonterminals; edges are the input's
/// non-pin-pin edges followed by newly pushed terminal edges.
pub fn make_simple(spec: &HierSpec) -> HierSpec {
    let idx = spec.indexed();
    let (_, pushed) = closure_indices(&idx);
    let cells = spec
        .cells
        .iter()
        .zip(&idx)
        .zip(&pushed)
        .map(|((def, cell), pushed)| {
            let mut present: HashSet<Pair> = HashSet::new();
            let mut edges = Vec::new();
            for (k, &(a, b)) in cell.edges.iter().enumerate() {
                present.insert(ordered(a, b));
                if !(cell.is_pin(a) && cell.is_pin(b)) {
                    edges.push(def.edges[k].clone());
                }
            }
            for &(a, b) in pushed {
                if cell.is_pin(a) && cell.is_pin(b) {
                    continue;
                }
                if present.insert((a, b)) {
                    edges.push((terminal_name(def, a), terminal_name(def, b)));
                }
            }
            CellDef { edges, ..def.clone() }
        })
        .collect();
    HierSpec::new(cells)
}
