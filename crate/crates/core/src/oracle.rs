//! Flat-side ground truth: exact solvers for small expansions, independent
//! brute-force enumerators to cross-check them, label-sensitive multigraph
//! equality, and the fixtures and seeded generators used throughout the tests.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expand::FlatGraph;
use crate::hardgen::{CircuitCell, GateKind, HierCircuit};
#[cfg(test)]
use crate::hiersat::FlatLiteral;
use crate::hiersat::{FlatCnf, FormulaCall, FormulaCell, HierFormula, Literal};
use crate::simplify::collision_free;
use crate::spec::{stats, CellDef, HierSpec, Nonterminal};

/// Largest graph the exact graph solvers accept.
pub const VERTEX_BUDGET: usize = 24;
/// Largest variable count `exact_max_3sat` accepts.
pub const VARIABLE_BUDGET: usize = 22;

fn check_budget(size: usize, budget: usize) -> Result<()> {
    if size > budget {
        Err(Error::OverBudget { size, budget })
    } else {
        Ok(())
    }
}

/// Neighbourhood bitmasks of the underlying simple graph.
fn simple_masks(g: &FlatGraph) -> Vec<u32> {
    let mut adj = vec![0u32; g.vertices.len()];
    for &(a, b) in &g.edges {
        if a != b {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    adj
}

fn mis_branch(adj: &[u32], cand: u32) -> u32 {
    if cand == 0 {
        return 0;
    }
    let mut best = u32::MAX;
    let mut best_deg = 0;
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        let d = (adj[v as usize] & cand).count_ones();
        // A vertex of degree <= 1 is always in some maximum independent set.
        if d <= 1 {
            let next = cand & !(1 << v) & !adj[v as usize];
            return 1 + mis_branch(adj, next);
        }
        if d > best_deg {
            best_deg = d;
            best = v;
        }
    }
    let v = best as usize;
    let take = 1 + mis_branch(adj, cand & !(1 << v) & !adj[v]);
    let skip = mis_branch(adj, cand & !(1 << v));
    take.max(skip)
}

pub fn exact_max_independent_set(g: &FlatGraph) -> Result<usize> {
    let n = g.vertices.len();
    check_budget(n, VERTEX_BUDGET)?;
    let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    Ok(mis_branch(&simple_masks(g), all) as usize)
}

/// Complement of a maximum independent set.
pub fn exact_min_vertex_cover(g: &FlatGraph) -> Result<usize> {
    Ok(g.vertices.len() - exact_max_independent_set(g)?)
}

/// Gray-code walk over all bipartitions with vertex 0 fixed on one side.
pub fn exact_max_cut(g: &FlatGraph) -> Result<usize> {
    let n = g.vertices.len();
    check_budget(n, VERTEX_BUDGET)?;
    if n < 2 {
        return Ok(0);
    }
    let mut w = vec![vec![0i64; n]; n];
    for &(a, b) in &g.edges {
        if a != b {
            w[a][b] += 1;
            w[b][a] += 1;
        }
    }
    let mut side = vec![false; n];
    let mut cut: i64 = 0;
    let mut best = 0;
    for step in 1u64..(1u64 << (n - 1)) {
        let v = step.trailing_zeros() as usize + 1;
        let delta: i64 = (0..n)
            .map(|j| if side[j] == side[v] { w[v][j] } else { -w[v][j] })
            .sum();
        side[v] = !side[v];
        cut += delta;
        best = best.max(cut);
    }
    Ok(best as usize)
}

pub fn exact_max_3sat(cnf: &FlatCnf) -> Result<usize> {
    let n = cnf.variables.len();
    check_budget(n, VARIABLE_BUDGET)?;
    let masks: Vec<(u32, u32)> = cnf
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(p, q), l| {
                if l.negated {
                    (p, q | 1 << l.var)
                } else {
                    (p | 1 << l.var, q)
                }
            })
        })
        .collect();
    let mut best = 0;
    for a in 0u32..(1u32 << n) {
        let sat = masks.iter().filter(|&&(p, q)| a & p != 0 || !a & q != 0).count();
        best = best.max(sat);
    }
    Ok(best)
}

/// Second, deliberately naive enumerators over all vertex subsets. They share
/// no code with the solvers above and exist only to cross-check them.
pub mod brute {
    use super::*;

    fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u64..(1u64 << n)).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
    }

    pub fn min_vertex_cover(g: &FlatGraph) -> usize {
        subsets(g.vertices.len())
            .filter(|s| g.edges.iter().all(|&(a, b)| s[a] || s[b]))
            .map(|s| s.iter().filter(|&&x| x).count())
            .min()
            .unwrap_or(0)
    }

    pub fn max_independent_set(g: &FlatGraph) -> usize {
        subsets(g.vertices.len())
            .filter(|s| g.edges.iter().all(|&(a, b)| !(s[a] && s[b])))
            .map(|s| s.iter().filter(|&&x| x).count())
            .max()
            .unwrap_or(0)
    }

    pub fn max_cut(g: &FlatGraph) -> usize {
        subsets(g.vertices.len())
            .map(|s| g.edges.iter().filter(|&&(a, b)| s[a] != s[b]).count())
            .max()
            .unwrap_or(0)
    }

    pub fn max_3sat(cnf: &FlatCnf) -> usize {
        subsets(cnf.variables.len())
            .map(|a| cnf.satisfied(&a))
            .max()
            .unwrap_or(0)
    }
}

/// Same vertex labels and the same multiset of labeled edges.
pub fn multigraph_equal(a: &FlatGraph, b: &FlatGraph) -> bool {
    let mut va: Vec<_> = a.vertices.iter().collect();
    let mut vb: Vec<_> = b.vertices.iter().collect();
    va.sort();
    vb.sort();
    if va != vb {
        return false;
    }
    let edge_bag = |g: &FlatGraph| {
        let mut bag = BTreeMap::new();
        for &(x, y) in &g.edges {
            let (x, y) = (&g.vertices[x], &g.vertices[y]);
            let key = if x <= y {
                (x.clone(), y.clone())
            } else {
                (y.clone(), x.clone())
            };
            *bag.entry(key).or_insert(0usize) += 1;
        }
        bag
    };
    edge_bag(a) == edge_bag(b)
}

/// Random multigraph on `n` vertices: each pair gets 0, 1 or (rarely) 2 edges.
pub fn random_graph(rng: &mut impl Rng, n: usize, edge_percent: u32) -> FlatGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_range(0..100) < edge_percent {
                edges.push((a, b));
                if rng.gen_range(0..10) == 0 {
                    edges.push((a, b));
                }
            }
        }
    }
    FlatGraph::from_edges(n, &edges)
}

/// Shape limits for the random specification generators.
#[derive(Debug, Clone)]
pub struct SpecParams {
    pub max_cells: usize,
    pub max_pins: usize,
    pub max_explicit: usize,
    pub max_calls: usize,
    pub edge_percent: u32,
    /// Chance of keeping a pin-pin edge; zero yields simple specs.
    pub pin_pin_percent: u32,
    pub vertex_limit: u64,
}

impl Default for SpecParams {
    fn default() -> Self {
        SpecParams {
            max_cells: 6,
            max_pins: 3,
            max_explicit: 6,
            max_calls: 3,
            edge_percent: 40,
            pin_pin_percent: 0,
            vertex_limit: 500,
        }
    }
}

fn candidate_spec(rng: &mut ChaCha8Rng, p: &SpecParams) -> HierSpec {
    let ncells = rng.gen_range(1..=p.max_cells);
    let mut cells: Vec<CellDef> = Vec::with_capacity(ncells);
    for i in 0..ncells {
        let root = i + 1 == ncells;
        let npins = if root { 0 } else { rng.gen_range(0..=p.max_pins) };
        let mut callees = Vec::new();
        if i > 0 {
            callees.push(i - 1);
            let extra = rng.gen_range(0..p.max_calls);
            for _ in 0..extra {
                callees.push(rng.gen_range(0..i));
            }
        }
        let need = callees.iter().map(|&c| cells[c].pins.len()).max().unwrap_or(0);
        let nexp = rng.gen_range(1..=p.max_explicit).max(need.saturating_sub(npins));
        let mut cell = CellDef::new(format!("G{}", i + 1));
        cell.pins = (0..npins).map(|k| format!("p{k}")).collect();
        cell.vertices = (0..nexp).map(|k| format!("x{k}")).collect();
        let terminals: Vec<String> = cell.pins.iter().chain(&cell.vertices).cloned().collect();
        for (k, &callee) in callees.iter().enumerate() {
            let want = cells[callee].pins.len();
            let binding = sample(rng, terminals.len(), want)
                .into_iter()
                .map(|t| terminals[t].clone())
                .collect();
            cell.nonterminals.push(Nonterminal {
                name: format!("n{k}"),
                callee,
                binding,
            });
        }
        for a in 0..terminals.len() {
            for b in a + 1..terminals.len() {
                let pin_pair = a < npins && b < npins;
                let pct = if pin_pair { p.pin_pin_percent } else { p.edge_percent };
                if rng.gen_range(0..100) < pct {
                    cell.edges.push((terminals[a].clone(), terminals[b].clone()));
                }
            }
        }
        cells.push(cell);
    }
    HierSpec::new(cells)
}

/// A valid simple spec with expansion within `p.vertex_limit`; deterministic in `seed`.
pub fn random_simple_spec(seed: u64, p: &SpecParams) -> HierSpec {
    let p = SpecParams {
        pin_pin_percent: 0,
        ..p.clone()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let spec = candidate_spec(&mut rng, &p);
        if stats(&spec).expansion_vertices <= p.vertex_limit.into() {
            return spec;
        }
    }
}

/// A valid, usually non-simple spec on which simplification cannot merge
/// parallel edges (see [`collision_free`]).
pub fn random_collision_free_spec(seed: u64, p: &SpecParams) -> HierSpec {
    let p = SpecParams {
        pin_pin_percent: p.pin_pin_percent.max(50),
        ..p.clone()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let spec = candidate_spec(&mut rng, &p);
        if stats(&spec).expansion_vertices <= p.vertex_limit.into() && collision_free(&spec) {
            return spec;
        }
    }
}

/// Random hierarchical formula; each cell calls the previous one, so all are
/// reachable. Arguments are distinct caller variables.
pub fn random_formula(seed: u64, clause_limit: u64) -> HierFormula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let ncells = rng.gen_range(1..=4);
        let mut cells: Vec<FormulaCell> = Vec::new();
        for i in 0..ncells {
            let root = i + 1 == ncells;
            let nparams = if root { 0 } else { rng.gen_range(0..=3) };
            let mut callees = Vec::new();
            if i > 0 {
                callees.push(i - 1);
                if rng.gen_bool(0.5) {
                    callees.push(rng.gen_range(0..i));
                }
            }
            let need = callees.iter().map(|&c| cells[c].params.len()).max().unwrap_or(0);
            let nlocals = rng.gen_range(1..=4).max(need.saturating_sub(nparams));
            let mut cell = FormulaCell::new(format!("F{}", i + 1));
            cell.params = (0..nparams).map(|k| format!("x{k}")).collect();
            cell.locals = (0..nlocals).map(|k| format!("z{k}")).collect();
            let vars: Vec<String> = cell.params.iter().chain(&cell.locals).cloned().collect();
            for _ in 0..rng.gen_range(1..=4) {
                let width = rng.gen_range(1..=3);
                let clause = (0..width)
                    .map(|_| Literal {
                        var: vars[rng.gen_range(0..vars.len())].clone(),
                        negated: rng.gen_bool(0.5),
                    })
                    .collect();
                cell.clauses.push(clause);
            }
            for callee in callees {
                let args = sample(&mut rng, vars.len(), cells[callee].params.len())
                    .into_iter()
                    .map(|k| vars[k].clone())
                    .collect();
                cell.calls.push(FormulaCall { callee, args });
            }
            cells.push(cell);
        }
        let f = HierFormula::new(cells);
        if f.expansion_clauses() <= clause_limit.into() {
            return f;
        }
    }
}

/// Random hierarchical monotone circuit in the restricted form the chain
/// generator expects: the first cell has no calls, every later cell calls
/// exactly two copies of its predecessor, bindings target explicit nodes only,
/// and every gate has exactly two inputs.
pub fn random_circuit(seed: u64, max_cells: usize) -> HierCircuit {
    #[derive(Clone)]
    enum Src {
        Node(String),
        Pin(String),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ncells = rng.gen_range(1..=max_cells.max(1));
    let mut cells: Vec<CircuitCell> = Vec::new();
    // (in-pin names, out-pin names) per generated cell
    let mut ports: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for i in 0..ncells {
        let root = i + 1 == ncells;
        let mut cell = CircuitCell::new(format!("C{}", i + 1));
        let (nin, nout) = if root {
            (0, 0)
        } else {
            (rng.gen_range(1..=2), rng.gen_range(1..=2))
        };
        let in_pins: Vec<String> = (0..nin).map(|k| format!("in{k}")).collect();
        let out_pins: Vec<String> = (0..nout).map(|k| format!("out{k}")).collect();
        cell.pins = in_pins.iter().chain(&out_pins).cloned().collect();

        let mut sources: Vec<Src> = in_pins.iter().cloned().map(Src::Pin).collect();
        let mut explicit: Vec<String> = Vec::new();
        for k in 0..rng.gen_range(1..=2) {
            let name = format!("i{k}");
            cell.inputs.push((name.clone(), rng.gen_bool(0.6)));
            sources.push(Src::Node(name.clone()));
            explicit.push(name);
        }
        let mut gate_no = 0;
        let mut add_gate = |cell: &mut CircuitCell,
                            rng: &mut ChaCha8Rng,
                            sources: &mut Vec<Src>,
                            explicit: &mut Vec<String>,
                            pending: &mut Vec<(usize, usize)>| {
            let name = format!("g{gate_no}");
            gate_no += 1;
            let kind = if rng.gen_bool(0.5) { GateKind::And } else { GateKind::Or };
            cell.gates.push((name.clone(), kind));
            let mut fed = 0;
            while fed < 2 && !pending.is_empty() {
                let (inst, pin) = pending.remove(0);
                cell.nonterminals[inst].binding[pin] = name.clone();
                fed += 1;
            }
            for _ in fed..2 {
                match &sources[rng.gen_range(0..sources.len())] {
                    Src::Node(s) | Src::Pin(s) => cell.wires.push((s.clone(), name.clone())),
                }
            }
            sources.push(Src::Node(name.clone()));
            explicit.push(name);
        };

        let mut pending: Vec<(usize, usize)> = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            add_gate(&mut cell, &mut rng, &mut sources, &mut explicit, &mut pending);
        }
        if i > 0 {
            let (callee_in, callee_out) = ports[i - 1].clone();
            for inst in 0..2 {
                let mut binding = vec![String::new(); callee_in.len() + callee_out.len()];
                for slot in binding.iter_mut().take(callee_in.len()) {
                    *slot = explicit[rng.gen_range(0..explicit.len())].clone();
                }
                cell.nonterminals.push(Nonterminal {
                    name: format!("m{inst}"),
                    callee: i - 1,
                    binding,
                });
                for k in 0..callee_out.len() {
                    pending.push((inst, callee_in.len() + k));
                }
                while !pending.is_empty() {
                    add_gate(&mut cell, &mut rng, &mut sources, &mut explicit, &mut pending);
                }
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            add_gate(&mut cell, &mut rng, &mut sources, &mut explicit, &mut pending);
        }
        if cell.gates.is_empty() {
            add_gate(&mut cell, &mut rng, &mut sources, &mut explicit, &mut pending);
        }
        for o in &out_pins {
            let g = &cell.gates[rng.gen_range(0..cell.gates.len())].0;
            cell.wires.push((g.clone(), o.clone()));
        }
        cells.push(cell);
        ports.push((in_pins, out_pins));
    }
    HierCircuit::new(cells)
}

/// Named specifications used by tests, the CLI and the documentation.
pub mod fixtures {
    use super::*;
    use crate::hardgen::parse_circuit;
    use crate::hiersat::parse_formula;

    /// `k` cells of two vertices each; cell `i` hangs a copy of cell `i-1` off
    /// its second vertex. The pinless root expands to a path on `2k` vertices.
    pub fn chain(k: usize) -> HierSpec {
        assert!(k >= 1);
        let cells = (1..=k)
            .map(|i| {
                let mut c = CellDef::new(format!("G{i}"));
                if i < k {
                    c = c.pin("p").vertex("u").vertex("v").edge("p", "u");
                } else {
                    c = c.vertex("u").vertex("v");
                }
                c = c.edge("u", "v");
                if i > 1 {
                    c = c.call("c", i - 2, &["v"]);
                }
                c
            })
            .collect();
        HierSpec::new(cells)
    }

    /// Cell `i` holds a pin and an edge `a-b`, and calls two copies of cell
    /// `i-1`, one on each of `a` and `b`. The root expands to `2^(k+1) - 2` vertices.
    pub fn tower(k: usize) -> HierSpec {
        assert!(k >= 1);
        let cells = (1..=k)
            .map(|i| {
                let mut c = CellDef::new(format!("G{i}"));
                if i < k {
                    c = c.pin("p").vertex("a").vertex("b").edge("p", "a");
                } else {
                    c = c.vertex("a").vertex("b");
                }
                c = c.edge("a", "b");
                if i > 1 {
                    c = c.call("L", i - 2, &["a"]).call("R", i - 2, &["b"]);
                }
                c
            })
            .collect();
        HierSpec::new(cells)
    }

    /// Two levels of pin-to-pin binding carry a pin-pin edge up to the root.
    pub fn pinpair() -> HierSpec {
        HierSpec::new(vec![
            CellDef::new("G1")
                .pin("p1")
                .pin("p2")
                .vertex("x")
                .edge("p1", "p2")
                .edge("p1", "x"),
            CellDef::new("G2")
                .pin("P")
                .pin("Q")
                .vertex("y")
                .call("c", 0, &["P", "Q"])
                .edge("Q", "y"),
            CellDef::new("G3").vertex("a").vertex("b").call("d", 1, &["a", "b"]),
        ])
    }

    /// A caller edge `u-v` plus a callee pin-pin edge landing on the same pair:
    /// the expansion holds two parallel `u-v` edges.
    pub fn multi1() -> HierSpec {
        HierSpec::new(vec![
            CellDef::new("G1").pin("p1").pin("p2").edge("p1", "p2"),
            CellDef::new("G2")
                .vertex("u")
                .vertex("v")
                .call("c", 0, &["u", "v"])
                .edge("u", "v"),
        ])
    }

    pub const NESTED_FORMULA_H3F: &str = "\
h3f 1
formula F1 ( x1 x2 )
var z1
var z2
var z3
clause x1 x2 z1
clause z2 z3
end
formula F2 ( x3 x4 )
var z4
var z5
call F1 ( x3 z4 )
call F1 ( z4 z5 )
clause z4 z5 x4
end
formula F3 ( )
var z6
var z7
var z8
call F2 ( z8 z7 )
call F1 ( z7 z6 )
end
";

    /// Three-level formula whose expansion has exactly seven clauses.
    pub fn nested_formula() -> HierFormula {
        parse_formula(NESTED_FORMULA_H3F).expect("fixture parses")
    }

    pub const TWO_CALL_CIRCUIT_HCIRC: &str = "\
hcirc 1
cell D1
pin x1
pin x2
pin x3
pin x4
gate z1 and
wire x1 z1
wire x2 z1
wire z1 x3
wire z1 x4
end
cell D2
input z2 0
input z3 1
gate z4 and
gate z5 or
gate z6 and
wire z2 z4
wire z3 z4
nonterm A : D1
nonterm B : D1
bind A 1 z4
bind A 2 z4
bind A 3 z5
bind A 4 z5
bind B 1 z5
bind B 2 z5
bind B 3 z6
bind B 4 z6
end
";

    /// Two-level circuit: an AND block instantiated twice around an OR gate.
    pub fn two_call_circuit() -> HierCircuit {
        parse_circuit(TWO_CALL_CIRCUIT_HCIRC).expect("fixture parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::validate;

    fn path(n: usize) -> FlatGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FlatGraph::from_edges(n, &edges)
    }

    fn complete(n: usize) -> FlatGraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        FlatGraph::from_edges(n, &edges)
    }

    #[test]
    fn vertex_cover_examples() {
        assert_eq!(exact_min_vertex_cover(&complete(2)).unwrap(), 1);
        assert_eq!(exact_min_vertex_cover(&complete(3)).unwrap(), 2);
        assert_eq!(exact_min_vertex_cover(&path(6)).unwrap(), 3);
    }

    #[test]
    fn max_cut_examples() {
        assert_eq!(exact_max_cut(&complete(2)).unwrap(), 1);
        assert_eq!(exact_max_cut(&complete(3)).unwrap(), 2);
        let c4 = FlatGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 0)]);
        assert_eq!(exact_max_cut(&c4).unwrap(), 5);
    }

    #[test]
    fn independent_set_examples() {
        assert_eq!(exact_max_independent_set(&FlatGraph::from_edges(5, &[])).unwrap(), 5);
        assert_eq!(exact_max_independent_set(&path(6)).unwrap(), 3);
        assert_eq!(exact_max_independent_set(&complete(4)).unwrap(), 1);
    }

    #[test]
    fn max_3sat_examples() {
        let x = |negated| FlatLiteral { var: 0, negated };
        let cnf = |clauses| FlatCnf {
            variables: vec![crate::spec::VertexPath::local("x")],
            clauses,
        };
        let one = cnf(vec![vec![x(false)]]);
        assert_eq!(exact_max_3sat(&one).unwrap(), 1);
        let both = cnf(vec![vec![x(false)], vec![x(true)]]);
        assert_eq!(exact_max_3sat(&both).unwrap(), 1);
    }

    #[test]
    fn budgets_are_enforced() {
        let big = path(VERTEX_BUDGET + 1);
        assert_eq!(exact_max_cut(&big).unwrap_err().code(), "over-budget");
        assert_eq!(exact_min_vertex_cover(&big).unwrap_err().code(), "over-budget");
    }

    #[test]
    fn equality_is_multiplicity_sensitive() {
        let g = path(4);
        assert!(multigraph_equal(&g, &g));
        let mut h = g.clone();
        h.edges.push((0, 1));
        assert!(!multigraph_equal(&g, &h));
        let mut flipped = g.clone();
        flipped.edges.reverse();
        flipped.edges.iter_mut().for_each(|e| *e = (e.1, e.0));
        assert!(multigraph_equal(&g, &flipped));
    }

    #[test]
    fn fixtures_are_valid() {
        for spec in [
            fixtures::chain(1),
            fixtures::chain(3),
            fixtures::tower(5),
            fixtures::pinpair(),
            fixtures::multi1(),
        ] {
            assert!(validate(&spec).is_empty(), "{:?}", validate(&spec));
        }
    }

    #[test]
    fn generators_are_reproducible() {
        let p = SpecParams::default();
        for seed in 0..20 {
            let a = random_simple_spec(seed, &p);
            assert_eq!(a, random_simple_spec(seed, &p));
            assert!(validate(&a).is_empty(), "seed {seed}: {:?}", validate(&a));
            assert!(a.is_simple());
            let b = random_collision_free_spec(seed, &p);
            assert!(validate(&b).is_empty());
            assert!(collision_free(&b));
            assert_eq!(random_formula(seed, 500), random_formula(seed, 500));
            assert_eq!(random_circuit(seed, 3), random_circuit(seed, 3));
        }
    }
}
