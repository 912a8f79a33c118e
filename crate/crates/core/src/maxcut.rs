//! Greedy max cut, flat and hierarchical.
//!
//! The hierarchical version summarizes a cell for its callers by two numbers
//! per pin: how many edges run from the pin into side 1 and side 2 of the
//! cell's expansion. Every edge is counted exactly once, when its later
//! endpoint is placed, and the placement always gains at least half of the
//! edges counted, so `2 E >= |E(expansion)|`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Result;
use crate::expand::FlatGraph;
use crate::hsolution::HSolution;
use crate::spec::{HierSpec, IndexedCell, VertexPath};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    /// Per vertex, true for side 1.
    pub side_one: Vec<bool>,
    /// Crossing edge occurrences.
    pub size: usize,
}

/// Places vertices in `order`, each on the side with fewer already-placed
/// neighbours (ties to side 1).
pub fn fmax_cut(g: &FlatGraph, order: &[usize]) -> Cut {
    let adj = g.adjacency();
    let mut side: Vec<Option<bool>> = vec![None; g.vertex_count()];
    let mut size = 0;
    for &v in order {
        let (mut c1, mut c2) = (0, 0);
        for &w in &adj[v] {
            match side[w] {
                Some(true) => c1 += 1,
                Some(false) => c2 += 1,
                None => {}
            }
        }
        if c1 <= c2 {
            side[v] = Some(true);
            size += c2;
        } else {
            side[v] = Some(false);
            size += c1;
        }
    }
    Cut {
        side_one: side.into_iter().map(|s| s.unwrap_or(true)).collect(),
        size,
    }
}

/// Crossing edge occurrences of a partition.
pub fn cut_size(g: &FlatGraph, side_one: &[bool]) -> usize {
    g.edges.iter().filter(|&&(a, b)| side_one[a] != side_one[b]).count()
}

/// Per pin, edge counts into side 1 and side 2 of the cell's expansion.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CutBurnt {
    pub wt: Vec<[BigUint; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CutLevel {
    /// Explicit vertices not bound to any callee pin.
    pub a: Vec<String>,
    /// Explicit vertices bound to at least one callee pin.
    pub b: Vec<String>,
    pub x1: Vec<String>,
    pub x2: Vec<String>,
    pub y1: Vec<String>,
    pub y2: Vec<String>,
    pub e1: usize,
    pub e2: BigUint,
    pub e: BigUint,
    /// `(v, Count(side 1), Count(side 2))` for each vertex of `b`.
    pub counts: Vec<(String, BigUint, BigUint)>,
}

#[derive(Debug, Clone)]
pub struct HmaxResult {
    pub e: BigUint,
    pub levels: Vec<CutLevel>,
    pub burnt: Vec<CutBurnt>,
    /// Denotes side 1; everything else is side 2.
    pub solution: HSolution,
}

pub fn hmax_cut(spec: &HierSpec) -> Result<HmaxResult> {
    spec.ensure_simple()?;
    let idx = spec.indexed();
    let n = idx.len();
    let mut levels: Vec<CutLevel> = Vec::with_capacity(n);
    let mut burnt: Vec<CutBurnt> = Vec::with_capacity(n);
    let mut solution = HSolution::skeleton(spec);
    for (i, cell) in idx.iter().enumerate() {
        let (level, b) = process_cell(spec, i, cell, i + 1 == n, &levels, &burnt);
        solution.cells[i].selected = level
            .x1
            .iter()
            .chain(&level.y1)
            .map(|v| VertexPath::local(v.clone()))
            .collect();
        levels.push(level);
        burnt.push(b);
    }
    Ok(HmaxResult {
        e: levels.last().map(|l| l.e.clone()).unwrap_or_default(),
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
    levels: &[CutLevel],
    burnt: &[CutBurnt],
) -> (CutLevel, CutBurnt) {
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

    // Edges into each side of the callees, through the bindings.
    let mut via: Vec<[BigUint; 2]> = vec![Default::default(); cell.terminals()];
    for (callee, binding) in &cell.calls {
        for (r, &t) in binding.iter().enumerate() {
            via[t][0] += &burnt[*callee].wt[r][0];
            via[t][1] += &burnt[*callee].wt[r][1];
        }
    }

    let (a, b): (Vec<usize>, Vec<usize>) = explicit.iter().partition(|&&t| cell.bound_by[t].is_empty());

    // side[t]: Some(0) for side 1, Some(1) for side 2
    let mut side: Vec<Option<usize>> = vec![None; cell.terminals()];
    let mut e1 = 0usize;
    for &v in &a {
        let mut c = [0usize; 2];
        for &w in &cell.adj[v] {
            if let Some(s) = side[w] {
                c[s] += 1;
            }
        }
        if c[0] <= c[1] {
            side[v] = Some(0);
            e1 += c[1];
        } else {
            side[v] = Some(1);
            e1 += c[0];
        }
    }

    let mut e2 = BigUint::zero();
    let mut counts = Vec::with_capacity(b.len());
    for &v in &b {
        let mut c = via[v].clone();
        for &w in &cell.adj[v] {
            if let Some(s) = side[w] {
                c[s] += 1u32;
            }
        }
        if c[0] >= c[1] {
            side[v] = Some(1);
            e2 += &c[0];
        } else {
            side[v] = Some(0);
            e2 += &c[1];
        }
        let [c1, c2] = c;
        counts.push((name(v), c1, c2));
    }

    let mut wt = Vec::new();
    if !root {
        for (p, v) in via.iter().enumerate().take(cell.pins) {
            let mut w = v.clone();
            for &t in &cell.adj[p] {
                if let Some(s) = side[t] {
                    w[s] += 1u32;
                }
            }
            wt.push(w);
        }
    }

    let mut e = BigUint::from(e1) + &e2;
    for (callee, _) in &cell.calls {
        e += &levels[*callee].e;
    }
    let names = |set: &[usize], s: usize| -> Vec<String> {
        set.iter().filter(|&&t| side[t] == Some(s)).map(|&t| name(t)).collect()
    };
    let level = CutLevel {
        x1: names(&a, 0),
        x2: names(&a, 1),
        y1: names(&b, 0),
        y2: names(&b, 1),
        a: a.iter().map(|&t| name(t)).collect(),
        b: b.iter().map(|&t| name(t)).collect(),
        e1,
        e2,
        e,
        counts,
    };
    (level, CutBurnt { wt })
}
