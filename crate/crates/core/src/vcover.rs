//! Hierarchical vertex cover and minimum maximal matching within factor 2.
//!
//! The cells are processed bottom-up and each cell builds a maximal matching
//! `EM` of its own part of the expansion. Vertices that cannot be decided yet
//! because they only touch the cell's pins are handed upward in a small burnt
//! graph: the pins plus at most one tentative partner per pin, found by a
//! maximum bipartite matching. The caller then finishes the job through the
//! bindings. `psi = 2|EM|` and the matched vertices form a vertex cover.
//!
//! The pin matching is always maximum over *every* still-uncovered vertex
//! adjacent to the pins, not just the ones kept in the burnt graph. Dropped
//! vertices can be swapped for kept ones along alternating paths, so the kept
//! partners span the same set of matchable pins and the caller never needs
//! the dropped ones.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hsolution::HSolution;
use crate::spec::{HierSpec, IndexedCell, VertexPath};

/// Scans `edges` in order, keeping an edge iff both endpoints are still free.
pub fn greedy_maximal_matching(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for &(a, b) in edges {
        if a != b && !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            out.push((a, b));
        }
    }
    out
}

/// Maximum matching by augmenting paths, visiting left vertices and their
/// adjacency lists in order. Returns the partner of each left vertex.
pub fn bipartite_maximum_matching(right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
        mate: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner, mate)) {
                owner[v] = Some(u);
                mate[u] = Some(v);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    let mut mate = vec![None; adj.len()];
    let mut seen = vec![false; right];
    for u in 0..adj.len() {
        seen.iter_mut().for_each(|s| *s = false);
        augment(u, adj, &mut seen, &mut owner, &mut mate);
    }
    mate
}

/// What a cell exposes to its callers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VcBurnt {
    /// Still-uncovered vertices of the cell's expansion matched to pins,
    /// as paths relative to the cell.
    pub partners: Vec<VertexPath>,
    /// `(pin, partner)` pairs of the pin matching.
    pub marked: Vec<(usize, usize)>,
    /// All other `(pin, partner)` adjacencies.
    pub residual: Vec<(usize, usize)>,
}

impl VcBurnt {
    fn partner_of_pin(&self, pins: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; pins];
        for &(p, j) in &self.marked {
            out[p] = Some(j);
        }
        out
    }

    /// Partners adjacent to each pin, marked edge first.
    fn pin_adjacency(&self, pins: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); pins];
        for &(p, j) in self.marked.iter().chain(&self.residual) {
            out[p].push(j);
        }
        out
    }

    fn partner_adjacency(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.partners.len()];
        for &(p, j) in self.marked.iter().chain(&self.residual) {
            out[j].push(p);
        }
        out.iter_mut().for_each(|v| v.sort_unstable());
        out
    }
}

/// Per-cell bookkeeping of one run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VcLevel {
    /// Greedy matching among explicit vertices.
    pub mm: Vec<(String, String)>,
    /// Explicit vertices left unmatched by `mm`.
    pub leftover: Vec<String>,
    /// Leftover vertices matched to vertices of callee burnt graphs.
    pub cm: Vec<(String, VertexPath)>,
    /// Left side of the pin matching: candidate vertex and its adjacent pins.
    pub pin_graph: Vec<(VertexPath, Vec<usize>)>,
    /// Pin matched to each left vertex of `pin_graph`.
    pub pin_matching: Vec<Option<usize>>,
    pub psi: BigUint,
}

impl VcLevel {
    /// Left vertices of the pin matching that were left unmatched.
    pub fn dropped(&self) -> Vec<&VertexPath> {
        self.pin_graph
            .iter()
            .zip(&self.pin_matching)
            .filter(|(_, m)| m.is_none())
            .map(|((v, _), _)| v)
            .collect()
    }

    /// Every pin reachable from a dropped vertex by an alternating path is
    /// matched, and so is its partner's every neighbour: no partner of such a
    /// pin touches an unmatched pin. This is what lets callers ignore dropped
    /// vertices.
    pub fn private_partner_holds(&self) -> bool {
        let npins = self
            .pin_graph
            .iter()
            .flat_map(|(_, adj)| adj.iter().map(|p| p + 1))
            .max()
            .unwrap_or(0);
        let mut owner = vec![None; npins];
        for (u, m) in self.pin_matching.iter().enumerate() {
            if let Some(p) = m {
                owner[*p] = Some(u);
            }
        }
        let mut seen_left = vec![false; self.pin_graph.len()];
        let mut queue: Vec<usize> = (0..self.pin_graph.len())
            .filter(|&u| self.pin_matching[u].is_none())
            .collect();
        queue.iter().for_each(|&u| seen_left[u] = true);
        while let Some(u) = queue.pop() {
            for &p in &self.pin_graph[u].1 {
                match owner[p] {
                    None => return false,
                    Some(w) if !seen_left[w] => {
                        seen_left[w] = true;
                        queue.push(w);
                    }
                    Some(_) => {}
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone)]
pub struct HvcResult {
    pub psi: BigUint,
    pub levels: Vec<VcLevel>,
    pub burnt: Vec<VcBurnt>,
    pub solution: HSolution,
}

fn terminal_name(spec: &HierSpec, cell: usize, t: usize) -> &str {
    let def = &spec.cells[cell];
    if t < def.pins.len() {
        &def.pins[t]
    } else {
        &def.vertices[t - def.pins.len()]
    }
}

/// Runs the heuristic; `spec` must be simple.
pub fn hvc(spec: &HierSpec) -> Result<HvcResult> {
    spec.ensure_simple()?;
    let idx = spec.indexed();
    let n = spec.cells.len();
    let mut levels: Vec<VcLevel> = Vec::with_capacity(n);
    let mut burnt: Vec<VcBurnt> = Vec::with_capacity(n);
    let mut solution = HSolution::skeleton(spec);
    for (i, cell) in idx.iter().enumerate() {
        let (level, b) = process_cell(spec, i, cell, i + 1 == n, &levels, &burnt);
        let sel = &mut solution.cells[i].selected;
        for (a, b) in &level.mm {
            sel.push(VertexPath::local(a.clone()));
            sel.push(VertexPath::local(b.clone()));
        }
        for (x, y) in &level.cm {
            sel.push(VertexPath::local(x.clone()));
            sel.push(y.clone());
        }
        levels.push(level);
        burnt.push(b);
    }
    Ok(HvcResult {
        psi: levels.last().map(|l| l.psi.clone()).unwrap_or_default(),
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
    levels: &[VcLevel],
    burnt: &[VcBurnt],
) -> (VcLevel, VcBurnt) {
    let def = &spec.cells[i];
    let is_pin = |t: usize| !root && cell.is_pin(t);
    // Explicit vertices in declaration order; root pins count as explicit.
    let explicit: Vec<usize> = (cell.pins..cell.terminals())
        .chain(if root { 0..cell.pins } else { 0..0 })
        .collect();
    let name = |t: usize| terminal_name(spec, i, t).to_string();

    let mut covered = vec![false; cell.terminals()];
    let local_edges: Vec<(usize, usize)> = cell
        .edges
        .iter()
        .copied()
        .filter(|&(a, b)| !is_pin(a) && !is_pin(b))
        .collect();
    let mm = greedy_maximal_matching(cell.terminals(), &local_edges);
    for &(a, b) in &mm {
        covered[a] = true;
        covered[b] = true;
    }
    let leftover: Vec<usize> = explicit.iter().copied().filter(|&t| !covered[t]).collect();

    // Callee burnt graphs, instantiated per nonterminal.
    let inst_partner_of_pin: Vec<Vec<Option<usize>>> = cell
        .calls
        .iter()
        .map(|(callee, _)| burnt[*callee].partner_of_pin(spec.cells[*callee].pins.len()))
        .collect();
    let inst_pin_adj: Vec<Vec<Vec<usize>>> = cell
        .calls
        .iter()
        .map(|(callee, _)| burnt[*callee].pin_adjacency(spec.cells[*callee].pins.len()))
        .collect();
    let mut available: Vec<Vec<bool>> = cell
        .calls
        .iter()
        .map(|(callee, _)| vec![true; burnt[*callee].partners.len()])
        .collect();
    let partner_path = |k: usize, j: usize| -> VertexPath {
        let callee = cell.calls[k].0;
        burnt[callee].partners[j].under(&def.nonterminals[k].name)
    };

    let mut cm: Vec<(String, VertexPath)> = Vec::new();
    // A leftover bound to a matched callee pin takes that pin's partner.
    // Partners are private to their pin, so this never conflicts.
    for &t in &leftover {
        for &(k, r) in &cell.bound_by[t] {
            if let Some(j) = inst_partner_of_pin[k][r] {
                if available[k][j] {
                    available[k][j] = false;
                    covered[t] = true;
                    cm.push((name(t), partner_path(k, j)));
                    break;
                }
            }
        }
    }
    // Leftovers whose bound pins are all unmatched take any free neighbour.
    for &t in &leftover {
        if covered[t] {
            continue;
        }
        'search: for &(k, r) in &cell.bound_by[t] {
            for &j in &inst_pin_adj[k][r] {
                if available[k][j] {
                    available[k][j] = false;
                    covered[t] = true;
                    cm.push((name(t), partner_path(k, j)));
                    break 'search;
                }
            }
        }
    }

    // One maximum matching between the remaining candidates and the pins.
    let mut pin_graph: Vec<(VertexPath, Vec<usize>)> = Vec::new();
    if !root {
        for &t in &leftover {
            if covered[t] {
                continue;
            }
            let pins: Vec<usize> = cell.adj[t].iter().copied().filter(|&p| cell.is_pin(p)).collect();
            if !pins.is_empty() {
                pin_graph.push((VertexPath::local(name(t)), pins));
            }
        }
        for (k, (callee, binding)) in cell.calls.iter().enumerate() {
            let adj = burnt[*callee].partner_adjacency();
            for (j, callee_pins) in adj.iter().enumerate() {
                if !available[k][j] {
                    continue;
                }
                let pins: Vec<usize> = callee_pins
                    .iter()
                    .map(|&r| binding[r])
                    .filter(|&p| cell.is_pin(p))
                    .collect();
                if !pins.is_empty() {
                    pin_graph.push((partner_path(k, j), pins));
                }
            }
        }
    }
    let adj: Vec<Vec<usize>> = pin_graph.iter().map(|(_, a)| a.clone()).collect();
    let pin_matching = bipartite_maximum_matching(cell.pins, &adj);

    let mut b = VcBurnt::default();
    for (u, m) in pin_matching.iter().enumerate() {
        if let Some(p) = *m {
            let j = b.partners.len();
            b.partners.push(pin_graph[u].0.clone());
            b.marked.push((p, j));
            for &q in &pin_graph[u].1 {
                if q != p {
                    b.residual.push((q, j));
                }
            }
        }
    }

    let mut psi = BigUint::from(2 * (mm.len() + cm.len()));
    for (callee, _) in &cell.calls {
        psi += &levels[*callee].psi;
    }
    let level = VcLevel {
        mm: mm.iter().map(|&(a, b)| (name(a), name(b))).collect(),
        leftover: leftover.iter().map(|&t| name(t)).collect(),
        cm,
        pin_graph,
        pin_matching,
        psi,
    };
    (level, b)
}

/// Size of the implied maximal matching, `psi / 2`.
pub fn min_maximal_matching_size(spec: &HierSpec) -> Result<BigUint> {
    Ok(hvc(spec)?.psi / 2u32)
}

/// The implied matching of the expansion, reconstructed instance by instance.
pub fn matching_edges(spec: &HierSpec, result: &HvcResult, node_limit: u64) -> Result<Vec<(VertexPath, VertexPath)>> {
    let nodes = result.solution.tree_nodes();
    if nodes > BigUint::from(node_limit) {
        return Err(Error::limit("hierarchy-tree node", node_limit, nodes));
    }
    fn walk(
        spec: &HierSpec,
        result: &HvcResult,
        cell: usize,
        trail: &mut Vec<String>,
        out: &mut Vec<(VertexPath, VertexPath)>,
    ) {
        let level = &result.levels[cell];
        let at = |rel: &VertexPath| {
            let mut t = trail.clone();
            t.extend(rel.trail.iter().cloned());
            VertexPath::new(t, rel.name.clone())
        };
        for (a, b) in &level.mm {
            out.push((at(&VertexPath::local(a.clone())), at(&VertexPath::local(b.clone()))));
        }
        for (x, y) in &level.cm {
            out.push((at(&VertexPath::local(x.clone())), at(y)));
        }
        for nt in &spec.cells[cell].nonterminals {
            trail.push(nt.name.clone());
            walk(spec, result, nt.callee, trail, out);
            trail.pop();
        }
    }
    let mut out = Vec::new();
    walk(spec, result, spec.root(), &mut Vec::new(), &mut out);
    debug_assert!(BigUint::from(out.len() * 2) == result.psi || result.psi.is_zero() && out.is_empty());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fixtures;
    use crate::spec::CellDef;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_maximal_matching(3, &[(0, 1), (1, 2)]), vec![(0, 1)]);
        assert!(greedy_maximal_matching(3, &[]).is_empty());
        let c6: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        assert_eq!(greedy_maximal_matching(6, &c6), vec![(0, 1), (2, 3), (4, 5)]);
    }

    fn size(m: &[Option<usize>]) -> usize {
        m.iter().flatten().count()
    }

    #[test]
    fn bipartite_examples() {
        assert_eq!(size(&bipartite_maximum_matching(2, &[vec![0, 1], vec![0, 1]])), 2);
        assert_eq!(size(&bipartite_maximum_matching(3, &[vec![0, 1, 2]])), 1);
        // K_{1,3} with the centre on the right
        assert_eq!(size(&bipartite_maximum_matching(1, &[vec![0], vec![0], vec![0]])), 1);
        // needs an augmenting path
        assert_eq!(size(&bipartite_maximum_matching(2, &[vec![0], vec![0, 1]])), 2);
        assert_eq!(size(&bipartite_maximum_matching(2, &[vec![0, 1], vec![0]])), 2);
    }

    fn brute_bipartite(adj: &[Vec<usize>], u: usize, used: &mut Vec<bool>) -> usize {
        if u == adj.len() {
            return 0;
        }
        let mut best = brute_bipartite(adj, u + 1, used);
        for &v in &adj[u] {
            if !used[v] {
                used[v] = true;
                best = best.max(1 + brute_bipartite(adj, u + 1, used));
                used[v] = false;
            }
        }
        best
    }

    #[test]
    fn bipartite_matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let adj: Vec<Vec<usize>> = (0..8)
                .map(|_| (0..8).filter(|_| rng.gen_bool(0.25)).collect())
                .collect();
            let m = bipartite_maximum_matching(8, &adj);
            let mut used = vec![false; 8];
            assert_eq!(size(&m), brute_bipartite(&adj, 0, &mut used));
            let mut taken = [false; 8];
            for (u, v) in m.iter().enumerate() {
                if let Some(v) = v {
                    assert!(adj[u].contains(v));
                    assert!(!std::mem::replace(&mut taken[*v], true));
                }
            }
        }
    }

    #[test]
    fn single_edge() {
        let spec = HierSpec::new(vec![CellDef::new("G").vertex("a").vertex("b").edge("a", "b")]);
        let r = hvc(&spec).unwrap();
        assert_eq!(r.psi, BigUint::from(2u32));
        assert_eq!(r.solution.flatten(10).unwrap().len(), 2);
        assert_eq!(min_maximal_matching_size(&spec).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn chain3() {
        let spec = fixtures::chain(3);
        let r = hvc(&spec).unwrap();
        assert!(r.psi <= BigUint::from(6u32));
        let em = matching_edges(&spec, &r, 100).unwrap();
        assert_eq!(BigUint::from(em.len() * 2), r.psi);
    }

    #[test]
    fn rejects_non_simple() {
        assert_eq!(hvc(&fixtures::pinpair()).unwrap_err().code(), "not-simple");
    }

    #[test]
    fn descendant_partner_is_selected_at_caller() {
        // The callee's only edge runs from its pin to `x`; the caller's
        // leftover `a` is bound to that pin and must take `x` as partner.
        let spec = HierSpec::new(vec![
            CellDef::new("A").pin("p").vertex("x").edge("p", "x"),
            CellDef::new("B").vertex("a").call("k", 0, &["a"]),
        ]);
        let r = hvc(&spec).unwrap();
        assert_eq!(r.levels[1].cm, vec![("a".to_string(), "k/x".parse().unwrap())]);
        assert!(r.solution.query(&"k/x".parse().unwrap()).unwrap());
        assert_eq!(r.psi, BigUint::from(2u32));
    }

    #[test]
    fn tower25_without_expansion() {
        let r = hvc(&fixtures::tower(25)).unwrap();
        assert!(r.psi > BigUint::from(1u32 << 24));
        assert!(r.levels.iter().all(VcLevel::private_partner_holds));
    }
}
