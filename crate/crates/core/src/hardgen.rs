//! Hierarchical monotone circuits and the instance generators built on them:
//! a chain of AND gates grafted onto a circuit's output (flat and
//! hierarchical, the latter exponentially long), and the translation of a
//! circuit into a hierarchical linear program whose objective counts true
//! gates.
//!
//! Pins are aliases: on instantiation a callee pin *is* the caller node it is
//! bound to. A pin is either read (an input port of the cell) or driven (an
//! output port), never both. Only AND and OR gates count as gates; input
//! nodes do not.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::spec::{is_identifier, Nonterminal, VertexPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
}

impl GateKind {
    fn as_str(self) -> &'static str {
        match self {
            GateKind::And => "and",
            GateKind::Or => "or",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CircuitCell {
    pub name: String,
    pub pins: Vec<String>,
    /// Constant input nodes.
    pub inputs: Vec<(String, bool)>,
    pub gates: Vec<(String, GateKind)>,
    /// Directed `(source, target)` wires; repeating a wire feeds both gate inputs.
    pub wires: Vec<(String, String)>,
    pub nonterminals: Vec<Nonterminal>,
    /// Designated output (root only). Defaults to the root's last gate.
    pub output: Option<String>,
}

impl CircuitCell {
    pub fn new(name: impl Into<String>) -> Self {
        CircuitCell {
            name: name.into(),
            ..Default::default()
        }
    }

    fn is_pin(&self, name: &str) -> bool {
        self.pins.iter().any(|p| p == name)
    }

    fn is_node(&self, name: &str) -> bool {
        self.inputs.iter().any(|(n, _)| n == name) || self.gates.iter().any(|(n, _)| n == name)
    }

    fn names(&self) -> HashSet<String> {
        self.pins
            .iter()
            .chain(self.inputs.iter().map(|(n, _)| n))
            .chain(self.gates.iter().map(|(n, _)| n))
            .chain(self.nonterminals.iter().map(|nt| &nt.name))
            .cloned()
            .collect()
    }

    /// Pins, nodes, wires and nonterminals.
    pub fn size(&self) -> u64 {
        (self.pins.len() + self.inputs.len() + self.gates.len() + self.wires.len() + self.nonterminals.len()) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierCircuit {
    pub cells: Vec<CircuitCell>,
}

impl HierCircuit {
    pub fn new(cells: Vec<CircuitCell>) -> Self {
        HierCircuit { cells }
    }

    pub fn root(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn size(&self) -> u64 {
        self.cells.iter().map(CircuitCell::size).sum()
    }

    pub fn output_node(&self) -> Option<&str> {
        let root = self.cells.last()?;
        root.output.as_deref().or(root.gates.last().map(|(g, _)| g.as_str()))
    }

    fn totals(&self, own: impl Fn(&CircuitCell) -> usize) -> BigUint {
        let mut t: Vec<BigUint> = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let mut x = BigUint::from(own(c));
            for nt in &c.nonterminals {
                x += &t[nt.callee];
            }
            t.push(x);
        }
        t.pop().unwrap_or_default()
    }

    /// No wire joins two pins of the same cell.
    pub fn is_simple(&self) -> bool {
        self.cells
            .iter()
            .all(|c| !c.wires.iter().any(|(s, t)| c.is_pin(s) && c.is_pin(t)))
    }

    /// Every binding targets a node of the caller, never one of its pins, so
    /// wires only join adjacent levels of the hierarchy.
    pub fn is_strongly_one_level_restricted(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.nonterminals.iter().all(|nt| nt.binding.iter().all(|t| !c.is_pin(t))))
    }

    pub fn expansion_gates(&self) -> BigUint {
        self.totals(|c| c.gates.len())
    }

    pub fn expansion_nodes(&self) -> BigUint {
        self.totals(|c| c.gates.len() + c.inputs.len())
    }

    /// Per cell and pin, the number of signals driven into the pin from
    /// inside the cell's expansion.
    fn out_drive(&self) -> Vec<Vec<u64>> {
        let mut drive: Vec<Vec<u64>> = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let d = c
                .pins
                .iter()
                .map(|p| {
                    let wires = c.wires.iter().filter(|(_, t)| t == p).count() as u64;
                    let bound: u64 = c
                        .nonterminals
                        .iter()
                        .flat_map(|nt| {
                            nt.binding
                                .iter()
                                .enumerate()
                                .filter(|(_, t)| *t == p)
                                .map(|(r, _)| drive[nt.callee].get(r).copied().unwrap_or(0))
                                .collect::<Vec<_>>()
                        })
                        .fold(0u64, u64::saturating_add);
                    wires.saturating_add(bound)
                })
                .collect();
            drive.push(d);
        }
        drive
    }

    /// Per cell and pin, whether the pin's signal is consumed inside the
    /// cell's expansion.
    fn read(&self) -> Vec<Vec<bool>> {
        let mut read: Vec<Vec<bool>> = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let r = c
                .pins
                .iter()
                .map(|p| {
                    c.wires.iter().any(|(s, _)| s == p)
                        || c.nonterminals.iter().any(|nt| {
                            nt.binding
                                .iter()
                                .enumerate()
                                .any(|(r, t)| t == p && read[nt.callee].get(r).copied().unwrap_or(false))
                        })
                })
                .collect();
            read.push(r);
        }
        read
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.cells.is_empty() {
            return vec!["circuit has no cells".to_string()];
        }
        let mut cell_names = HashSet::new();
        for (i, c) in self.cells.iter().enumerate() {
            let at = &c.name;
            if !is_identifier(at) || !cell_names.insert(at) {
                out.push(format!("bad or duplicate cell name `{at}`"));
            }
            let mut seen = HashSet::new();
            for n in c
                .pins
                .iter()
                .chain(c.inputs.iter().map(|(n, _)| n))
                .chain(c.gates.iter().map(|(n, _)| n))
                .chain(c.nonterminals.iter().map(|nt| &nt.name))
            {
                if !is_identifier(n) || !seen.insert(n) {
                    out.push(format!("{at}: bad or duplicate name `{n}`"));
                }
            }
            for (s, t) in &c.wires {
                let ok = |x: &str| c.is_pin(x) || c.is_node(x);
                if !ok(s) || !ok(t) {
                    out.push(format!("{at}: wire `{s} -> {t}` names an unknown terminal"));
                } else if s == t {
                    out.push(format!("{at}: wire `{s} -> {t}` is a loop"));
                } else if c.inputs.iter().any(|(n, _)| n == t) {
                    out.push(format!("{at}: wire into input node `{t}`"));
                }
            }
            for nt in &c.nonterminals {
                if nt.callee >= i {
                    out.push(format!("{at}: instance `{}` does not call an earlier cell", nt.name));
                    continue;
                }
                let want = self.cells[nt.callee].pins.len();
                if nt.binding.len() != want {
                    out.push(format!(
                        "{at}: instance `{}` binds {} of {want} pins",
                        nt.name,
                        nt.binding.len()
                    ));
                }
                for t in &nt.binding {
                    if !c.is_pin(t) && !c.is_node(t) {
                        out.push(format!("{at}: instance `{}` binds unknown terminal `{t}`", nt.name));
                    }
                }
            }
            if i + 1 < self.cells.len() && c.output.is_some() {
                out.push(format!("{at}: only the root may designate an output"));
            }
        }
        let root = &self.cells[self.root()];
        if !root.pins.is_empty() {
            out.push("root cell has pins".to_string());
        }
        match self.output_node() {
            None => out.push("circuit has no output".to_string()),
            Some(o) if !root.is_node(o) => out.push(format!("output `{o}` is not a node of the root")),
            _ => {}
        }
        if !out.is_empty() {
            return out;
        }

        let drive = self.out_drive();
        let read = self.read();
        for (i, c) in self.cells.iter().enumerate() {
            for (k, p) in c.pins.iter().enumerate() {
                if drive[i][k] > 0 && read[i][k] {
                    out.push(format!("{}: pin `{p}` is both driven and read", c.name));
                }
            }
            let fan_in = |node: &str| -> u64 {
                let wires = c.wires.iter().filter(|(_, t)| t == node).count() as u64;
                let bound: u64 = c
                    .nonterminals
                    .iter()
                    .flat_map(|nt| {
                        nt.binding
                            .iter()
                            .enumerate()
                            .filter(|(_, t)| *t == node)
                            .map(|(r, _)| drive[nt.callee][r])
                            .collect::<Vec<_>>()
                    })
                    .fold(0u64, u64::saturating_add);
                wires.saturating_add(bound)
            };
            for (g, _) in &c.gates {
                let n = fan_in(g);
                if n != 2 {
                    out.push(format!("{}: gate `{g}` has {n} inputs, expected 2", c.name));
                }
            }
            for (x, _) in &c.inputs {
                if fan_in(x) != 0 {
                    out.push(format!("{}: input node `{x}` is driven", c.name));
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Input(bool),
    Gate(GateKind),
}

/// An expanded circuit: nodes labeled by instance trail and directed wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatCircuit {
    pub labels: Vec<VertexPath>,
    pub kinds: Vec<NodeKind>,
    pub wires: Vec<(usize, usize)>,
    pub output: usize,
    /// Linear-program variable label of every node and pin edge, with the
    /// node whose value it carries.
    lp_nodes: Vec<(VertexPath, usize)>,
}

pub fn expand_circuit(c: &HierCircuit, node_limit: u64) -> Result<FlatCircuit> {
    c.ensure_valid()?;
    let nodes = c.expansion_nodes();
    if nodes > BigUint::from(node_limit) {
        return Err(Error::limit("expanded gate", node_limit, nodes));
    }
    let mut flat = FlatCircuit {
        labels: Vec::new(),
        kinds: Vec::new(),
        wires: Vec::new(),
        output: 0,
        lp_nodes: Vec::new(),
    };
    let ids = build(c, c.root(), &mut Vec::new(), &[], &mut flat);
    flat.output = ids[c.output_node().expect("validated")];
    Ok(flat)
}

fn build(
    c: &HierCircuit,
    cell: usize,
    trail: &mut Vec<String>,
    pins: &[usize],
    flat: &mut FlatCircuit,
) -> HashMap<String, usize> {
    let def = &c.cells[cell];
    let mut ids: HashMap<String, usize> = HashMap::new();
    for (p, &id) in def.pins.iter().zip(pins) {
        ids.insert(p.clone(), id);
    }
    let kinds = def
        .inputs
        .iter()
        .map(|(n, b)| (n, NodeKind::Input(*b)))
        .chain(def.gates.iter().map(|(n, k)| (n, NodeKind::Gate(*k))));
    for (n, kind) in kinds {
        flat.labels.push(VertexPath::new(trail.clone(), n.clone()));
        flat.kinds.push(kind);
        let id = flat.labels.len() - 1;
        flat.lp_nodes
            .push((VertexPath::new(trail.clone(), format!("g_{n}")), id));
        ids.insert(n.clone(), id);
    }
    for (s, t) in &def.wires {
        flat.wires.push((ids[s], ids[t]));
    }
    for nt in &def.nonterminals {
        let images: Vec<usize> = nt.binding.iter().map(|t| ids[t]).collect();
        trail.push(nt.name.clone());
        let child = build(c, nt.callee, trail, &images, flat);
        trail.pop();
        let callee = &c.cells[nt.callee];
        for (r, p) in callee.pins.iter().enumerate() {
            let carrier = match callee.wires.iter().find(|(_, t)| t == p) {
                Some((s, _)) => child[s],
                None => images[r],
            };
            let label = VertexPath::new(trail.clone(), format!("e_{}_{}", nt.name, r + 1));
            flat.lp_nodes.push((label, carrier));
        }
    }
    ids
}

/// Values of all nodes, by topological evaluation.
pub fn evaluate(flat: &FlatCircuit) -> Result<Vec<bool>> {
    let n = flat.kinds.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(s, t) in &flat.wires {
        preds[t].push(s);
        succs[s].push(t);
    }
    let mut pending: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| pending[v] == 0).collect();
    let mut value = vec![false; n];
    let mut done = 0;
    while let Some(v) = queue.pop_front() {
        done += 1;
        value[v] = match flat.kinds[v] {
            NodeKind::Input(b) => b,
            NodeKind::Gate(GateKind::And) => preds[v].iter().all(|&u| value[u]),
            NodeKind::Gate(GateKind::Or) => preds[v].iter().any(|&u| value[u]),
        };
        for &w in &succs[v] {
            pending[w] -= 1;
            if pending[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    if done < n {
        return Err(Error::Cycle);
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitValue {
    pub output: bool,
    /// AND/OR gates evaluating to 1; input nodes are not counted.
    pub true_gates: u64,
    pub gates: u64,
}

pub fn eval_circuit(c: &HierCircuit, gate_limit: u64) -> Result<CircuitValue> {
    let flat = expand_circuit(c, gate_limit)?;
    let value = evaluate(&flat)?;
    let is_gate = |v: &usize| matches!(flat.kinds[*v], NodeKind::Gate(_));
    Ok(CircuitValue {
        output: value[flat.output],
        true_gates: (0..value.len()).filter(|v| is_gate(v) && value[*v]).count() as u64,
        gates: (0..value.len()).filter(is_gate).count() as u64,
    })
}

fn fresh(taken: &mut HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    taken.insert(name.clone());
    name
}

/// Added parts of one generated cell.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MtgComponents {
    /// Coupler gate taking the chain into the first copy.
    pub d1: Option<String>,
    /// Coupler gate taking the chain out of the second copy.
    pub d2: Option<String>,
    /// Chain gates joining the copies (the whole chain in the first cell).
    pub d3: Vec<String>,
    /// The two copies of the previous cell.
    pub d4: Option<String>,
    pub d5: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtgInstance {
    pub circuit: HierCircuit,
    /// Total number of chain gates in the expansion.
    pub chain_length: BigUint,
    pub components: Vec<MtgComponents>,
}

/// Checks the doubling form the chain generator needs.
fn check_doubling_form(c: &HierCircuit) -> Result<()> {
    c.ensure_valid()?;
    for (i, cell) in c.cells.iter().enumerate() {
        let calls: Vec<usize> = cell.nonterminals.iter().map(|nt| nt.callee).collect();
        let ok = if i == 0 {
            calls.is_empty()
        } else {
            calls == [i - 1, i - 1]
        };
        if !ok {
            return Err(Error::Malformed(format!(
                "cell `{}` must call exactly two copies of the previous cell",
                cell.name
            )));
        }
        if let Some(nt) = cell
            .nonterminals
            .iter()
            .find(|nt| nt.binding.iter().any(|t| cell.is_pin(t)))
        {
            return Err(Error::Malformed(format!(
                "cell `{}`: instance `{}` binds a pin; bindings must target nodes",
                cell.name, nt.name
            )));
        }
        if let Some((s, t)) = cell.wires.iter().find(|(s, t)| cell.is_pin(s) && cell.is_pin(t)) {
            return Err(Error::Malformed(format!(
                "cell `{}`: wire `{s} -> {t}` joins two pins",
                cell.name
            )));
        }
    }
    Ok(())
}

/// Grafts an exponentially long AND chain onto the output. Cell `i` gets
/// `N * n_i` chain gates, `N` being the size of `c` and `n_i` that of cell
/// `i`; each cell but the root passes the chain through two input and two
/// output pins, and each calling cell threads it through both copies of the
/// previous cell. If the output is 0 no chain gate is true, otherwise all are.
pub fn gen_mtg_chain(c: &HierCircuit) -> Result<MtgInstance> {
    check_doubling_form(c)?;
    let n = c.cells.len();
    let big_n = c.size();
    let output = c.output_node().expect("validated").to_string();
    let mut cells: Vec<CircuitCell> = Vec::with_capacity(n);
    let mut components = Vec::with_capacity(n);
    let mut chain_length = BigUint::zero();
    for (i, src) in c.cells.iter().enumerate() {
        let root = i + 1 == n;
        let quota = big_n * src.size();
        let mut d = src.clone();
        let mut taken = d.names();
        let ports: Option<[String; 4]> =
            (!root).then(|| ["chain_in1", "chain_in2", "chain_out1", "chain_out2"].map(|b| fresh(&mut taken, b)));
        if let Some(p) = &ports {
            d.pins.extend(p.iter().cloned());
        }
        // Where the chain enters this cell: two pins, or the circuit output.
        let entry: [String; 2] = match &ports {
            Some(p) => [p[0].clone(), p[1].clone()],
            None => [output.clone(), output.clone()],
        };
        let mut comp = MtgComponents::default();
        let mut and_gate = |d: &mut CircuitCell, base: &str, inputs: &[String]| -> String {
            let g = fresh(&mut taken, base);
            d.gates.push((g.clone(), GateKind::And));
            for s in inputs {
                d.wires.push((s.clone(), g.clone()));
            }
            g
        };
        let exit = if i == 0 {
            if quota == 0 {
                return Err(Error::Malformed("chain segment would be empty".into()));
            }
            let mut prev = and_gate(&mut d, "chain1", &entry);
            comp.d3.push(prev.clone());
            for k in 2..=quota {
                prev = and_gate(&mut d, &format!("chain{k}"), &[prev.clone(), prev.clone()]);
                comp.d3.push(prev.clone());
            }
            prev
        } else {
            if quota < 3 {
                return Err(Error::Malformed(format!(
                    "cell `{}` is too small for a chain segment",
                    src.name
                )));
            }
            let a1 = and_gate(&mut d, "couple_in", &entry);
            let first = and_gate(&mut d, "chain1", &[]);
            let mut last = first.clone();
            comp.d3.push(first.clone());
            for k in 2..=quota - 2 {
                last = and_gate(&mut d, &format!("chain{k}"), &[last.clone(), last.clone()]);
                comp.d3.push(last.clone());
            }
            let a2 = and_gate(&mut d, "couple_out", &[]);
            let (x, y) = (&mut d.nonterminals[0], a1.clone());
            x.binding.extend([y.clone(), y, first.clone(), first]);
            d.nonterminals[1]
                .binding
                .extend([last.clone(), last, a2.clone(), a2.clone()]);
            comp.d1 = Some(a1);
            comp.d4 = Some(d.nonterminals[0].name.clone());
            comp.d5 = Some(d.nonterminals[1].name.clone());
            comp.d2 = Some(a2.clone());
            a2
        };
        match &ports {
            Some(p) => {
                d.wires.push((exit.clone(), p[2].clone()));
                d.wires.push((exit, p[3].clone()));
            }
            None => d.output = Some(exit),
        }
        chain_length += BigUint::from(quota) << (n - 1 - i);
        cells.push(d);
        components.push(comp);
    }
    Ok(MtgInstance {
        circuit: HierCircuit::new(cells),
        chain_length,
        components,
    })
}

/// Appends `ceil(gates / eps)` AND gates after the output of a one-cell
/// circuit, `eps = num / den`.
pub fn flat_mtg_chain(c: &HierCircuit, num: u64, den: u64) -> Result<HierCircuit> {
    c.ensure_valid()?;
    if c.cells.len() != 1 {
        return Err(Error::Malformed("the flat chain needs a one-cell circuit".into()));
    }
    if num == 0 || den == 0 {
        return Err(Error::Malformed("epsilon must be a positive fraction".into()));
    }
    let len = flat_chain_length(c.cells[0].gates.len() as u64, num, den);
    let mut d = c.cells[0].clone();
    let mut taken = d.names();
    let mut prev = c.output_node().expect("validated").to_string();
    for k in 1..=len {
        let g = fresh(&mut taken, &format!("chain{k}"));
        d.gates.push((g.clone(), GateKind::And));
        d.wires.push((prev.clone(), g.clone()));
        d.wires.push((prev, g.clone()));
        prev = g;
    }
    d.output = Some(prev);
    Ok(HierCircuit::new(vec![d]))
}

/// `ceil(gates * den / num)`.
pub fn flat_chain_length(gates: u64, num: u64, den: u64) -> u64 {
    (gates * den).div_ceil(num)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

impl Cmp {
    fn as_str(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        }
    }

    fn holds<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            Cmp::Le => lhs <= rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Integer coefficients with like terms merged.
    pub terms: Vec<(i64, String)>,
    pub cmp: Cmp,
    pub rhs: i64,
}

impl Constraint {
    fn new(terms: &[(i64, &str)], cmp: Cmp, rhs: i64) -> Self {
        let mut merged: Vec<(i64, String)> = Vec::new();
        for &(c, v) in terms {
            match merged.iter_mut().find(|(_, w)| w == v) {
                Some(t) => t.0 += c,
                None => merged.push((c, v.to_string())),
            }
        }
        merged.retain(|(c, _)| *c != 0);
        Constraint {
            terms: merged,
            cmp,
            rhs,
        }
    }

    fn to_text(&self) -> String {
        let lhs: Vec<String> = self.terms.iter().map(|(c, v)| format!("{c}*{v}")).collect();
        format!("{} {} {}", lhs.join(" + "), self.cmp.as_str(), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HlpCall {
    pub inst: String,
    pub callee: usize,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HlpCell {
    pub name: String,
    pub params: Vec<String>,
    pub locals: Vec<String>,
    pub constraints: Vec<Constraint>,
    /// Variables summed (with coefficient 1) into the objective.
    pub objective: Vec<String>,
    pub calls: Vec<HlpCall>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HlpSpec {
    pub cells: Vec<HlpCell>,
}

/// Encodes the circuit as a hierarchical LP: one variable per pin (a
/// parameter), node and pin edge of a nonterminal, gate inequalities, linking
/// equations for pins and edges, and `0 <= v <= 1` on every variable. The
/// objective is the sum of all non-parameter variables.
pub fn gen_hlp(c: &HierCircuit) -> Result<HlpSpec> {
    c.ensure_valid()?;
    let drive = c.out_drive();
    for cell in &c.cells {
        if let Some(nt) = cell
            .nonterminals
            .iter()
            .find(|nt| nt.binding.iter().any(|t| cell.is_pin(t)))
        {
            return Err(Error::Malformed(format!(
                "cell `{}`: instance `{}` binds a pin; bindings must target nodes",
                cell.name, nt.name
            )));
        }
        for p in &cell.pins {
            if cell.wires.iter().filter(|(_, t)| t == p).count() > 1 {
                return Err(Error::Malformed(format!(
                    "cell `{}`: pin `{p}` has several drivers",
                    cell.name
                )));
            }
        }
    }
    let x = |p: &str| format!("x_{p}");
    let g = |n: &str| format!("g_{n}");
    let e = |inst: &str, r: usize| format!("e_{inst}_{}", r + 1);
    let mut cells = Vec::with_capacity(c.cells.len());
    for cell in &c.cells {
        let var_of = |s: &str| if cell.is_pin(s) { x(s) } else { g(s) };
        let mut h = HlpCell {
            name: cell.name.clone(),
            params: cell.pins.iter().map(|p| x(p)).collect(),
            ..Default::default()
        };
        h.locals.extend(cell.inputs.iter().map(|(n, _)| g(n)));
        h.locals.extend(cell.gates.iter().map(|(n, _)| g(n)));
        for nt in &cell.nonterminals {
            let args: Vec<String> = (0..nt.binding.len()).map(|r| e(&nt.name, r)).collect();
            h.locals.extend(args.iter().cloned());
            h.calls.push(HlpCall {
                inst: nt.name.clone(),
                callee: nt.callee,
                args,
            });
        }
        for (n, b) in &cell.inputs {
            h.constraints.push(Constraint::new(&[(1, &g(n))], Cmp::Eq, *b as i64));
        }
        for (n, kind) in &cell.gates {
            let mut ins: Vec<String> = cell
                .wires
                .iter()
                .filter(|(_, t)| t == n)
                .map(|(s, _)| var_of(s))
                .collect();
            for nt in &cell.nonterminals {
                for (r, t) in nt.binding.iter().enumerate() {
                    if t == n && drive[nt.callee][r] > 0 {
                        ins.push(e(&nt.name, r));
                    }
                }
            }
            let (k, i, j) = (g(n), ins[0].as_str(), ins[1].as_str());
            let k = k.as_str();
            let block = match kind {
                GateKind::And => [
                    Constraint::new(&[(1, k), (-1, i)], Cmp::Le, 0),
                    Constraint::new(&[(1, k), (-1, j)], Cmp::Le, 0),
                    Constraint::new(&[(1, k), (-1, i), (-1, j)], Cmp::Ge, -1),
                ],
                GateKind::Or => [
                    Constraint::new(&[(1, i), (-1, k)], Cmp::Le, 0),
                    Constraint::new(&[(1, j), (-1, k)], Cmp::Le, 0),
                    Constraint::new(&[(1, k), (-1, i), (-1, j)], Cmp::Le, 0),
                ],
            };
            h.constraints.extend(block);
        }
        for (s, t) in &cell.wires {
            if cell.is_pin(t) {
                h.constraints
                    .push(Constraint::new(&[(1, &x(t)), (-1, &var_of(s))], Cmp::Eq, 0));
            }
        }
        for nt in &cell.nonterminals {
            for (r, t) in nt.binding.iter().enumerate() {
                if drive[nt.callee][r] == 0 {
                    h.constraints
                        .push(Constraint::new(&[(1, &e(&nt.name, r)), (-1, &g(t))], Cmp::Eq, 0));
                }
            }
        }
        for v in h.params.iter().chain(&h.locals) {
            h.constraints.push(Constraint::new(&[(1, v)], Cmp::Ge, 0));
            h.constraints.push(Constraint::new(&[(1, v)], Cmp::Le, 1));
        }
        h.objective = h.locals.clone();
        cells.push(h);
    }
    Ok(HlpSpec { cells })
}

pub fn serialize_hlp(lp: &HlpSpec) -> String {
    let mut out = String::from("hlp 1\n");
    for c in &lp.cells {
        let _ = writeln!(out, "lp {} ( {} )", c.name, c.params.join(" "));
        for v in &c.locals {
            let _ = writeln!(out, "var {v}");
        }
        for call in &c.calls {
            let _ = writeln!(
                out,
                "call {} : {} ( {} )",
                call.inst,
                lp.cells[call.callee].name,
                call.args.join(" ")
            );
        }
        for k in &c.constraints {
            let _ = writeln!(out, "ineq {}", k.to_text());
        }
        for v in &c.objective {
            let _ = writeln!(out, "obj {v}");
        }
        out.push_str("end\n");
    }
    out.replace("(  )", "( )")
}

/// `(terms, cmp, rhs)` over variable indices.
pub type FlatConstraint = (Vec<(i64, usize)>, Cmp, i64);

/// The fully expanded LP. Parameters are identified with the caller's
/// arguments, so every variable is a local of some instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlatLp {
    pub variables: Vec<VertexPath>,
    pub constraints: Vec<FlatConstraint>,
    pub objective: Vec<usize>,
}

impl FlatLp {
    /// Exact feasibility check with rational arithmetic.
    pub fn feasible(&self, values: &[Ratio<i64>]) -> bool {
        self.constraints.iter().all(|(terms, cmp, rhs)| {
            let lhs: Ratio<i64> = terms.iter().map(|&(c, v)| Ratio::from_integer(c) * values[v]).sum();
            cmp.holds(lhs, Ratio::from_integer(*rhs))
        })
    }

    pub fn objective_value(&self, values: &[Ratio<i64>]) -> Ratio<i64> {
        self.objective.iter().map(|&v| values[v]).sum()
    }

    pub fn to_text(&self) -> String {
        let name = |v: usize| self.variables[v].to_string();
        let obj: Vec<String> = self.objective.iter().map(|&v| name(v)).collect();
        let mut out = format!("maximize {}\n", obj.join(" + "));
        for (terms, cmp, rhs) in &self.constraints {
            let lhs: Vec<String> = terms.iter().map(|&(c, v)| format!("{c}*{}", name(v))).collect();
            let _ = writeln!(out, "{} {} {rhs}", lhs.join(" + "), cmp.as_str());
        }
        out
    }
}

pub fn flatten_hlp(lp: &HlpSpec, variable_limit: u64) -> Result<FlatLp> {
    let mut totals: Vec<BigUint> = Vec::with_capacity(lp.cells.len());
    for c in &lp.cells {
        let mut t = BigUint::from(c.locals.len());
        for call in &c.calls {
            t += &totals[call.callee];
        }
        totals.push(t);
    }
    let count = totals.pop().unwrap_or_default();
    if count > BigUint::from(variable_limit) {
        return Err(Error::limit("LP variable", variable_limit, count));
    }
    fn walk(lp: &HlpSpec, cell: usize, trail: &mut Vec<String>, params: &[usize], out: &mut FlatLp) {
        let c = &lp.cells[cell];
        let mut id: HashMap<&str, usize> = c
            .params
            .iter()
            .map(String::as_str)
            .zip(params.iter().copied())
            .collect();
        for v in &c.locals {
            out.variables.push(VertexPath::new(trail.clone(), v.clone()));
            id.insert(v, out.variables.len() - 1);
        }
        for k in &c.constraints {
            out.constraints.push((
                k.terms.iter().map(|(a, v)| (*a, id[v.as_str()])).collect(),
                k.cmp,
                k.rhs,
            ));
        }
        out.objective.extend(c.objective.iter().map(|v| id[v.as_str()]));
        for call in &c.calls {
            let args: Vec<usize> = call.args.iter().map(|a| id[a.as_str()]).collect();
            trail.push(call.inst.clone());
            walk(lp, call.callee, trail, &args, out);
            trail.pop();
        }
    }
    let mut out = FlatLp::default();
    if let Some(root) = lp.cells.len().checked_sub(1) {
        walk(lp, root, &mut Vec::new(), &[], &mut out);
    }
    Ok(out)
}

/// Values of the flattened LP's variables induced by evaluating the circuit:
/// a node variable takes the node's value, a pin-edge variable the value of
/// the signal on that edge.
pub fn canonical_assignment(c: &HierCircuit, lp: &FlatLp, node_limit: u64) -> Result<Vec<Ratio<i64>>> {
    let flat = expand_circuit(c, node_limit)?;
    let value = evaluate(&flat)?;
    let by_label: HashMap<&VertexPath, usize> = flat.lp_nodes.iter().map(|(l, n)| (l, *n)).collect();
    lp.variables
        .iter()
        .map(|v| match by_label.get(v) {
            Some(&n) => Ok(Ratio::from_integer(value[n] as i64)),
            None => Err(Error::Unresolved {
                path: v.to_string(),
                reason: "no circuit node or edge carries this variable".into(),
            }),
        })
        .collect()
}

/// True gates, true inputs and true pin edges of the expanded circuit,
/// counted on the circuit side.
pub fn true_signal_count(c: &HierCircuit, node_limit: u64) -> Result<u64> {
    let flat = expand_circuit(c, node_limit)?;
    let value = evaluate(&flat)?;
    Ok(flat.lp_nodes.iter().filter(|(_, n)| value[*n]).count() as u64)
}

pub fn parse_circuit(text: &str) -> Result<HierCircuit> {
    struct Pending {
        cell: CircuitCell,
        binds: Vec<(usize, String, usize, String)>,
        start: usize,
    }
    let mut cells: Vec<CircuitCell> = Vec::new();
    let mut current: Option<Pending> = None;
    let mut saw_header = false;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !saw_header {
            if toks != ["hcirc", "1"] {
                return Err(Error::parse(line_no, "expected header `hcirc 1`"));
            }
            saw_header = true;
            continue;
        }
        match (&mut current, toks.as_slice()) {
            (None, ["cell", name]) => {
                current = Some(Pending {
                    cell: CircuitCell::new(*name),
                    binds: Vec::new(),
                    start: line_no,
                })
            }
            (None, _) => return Err(Error::parse(line_no, "expected `cell NAME`")),
            (Some(p), ["pin", name]) => p.cell.pins.push(name.to_string()),
            (Some(p), ["input", name, bit]) => {
                let b = match *bit {
                    "0" => false,
                    "1" => true,
                    _ => {
                        return Err(Error::parse(
                            line_no,
                            format!("input value must be 0 or 1, got `{bit}`"),
                        ))
                    }
                };
                p.cell.inputs.push((name.to_string(), b));
            }
            (Some(p), ["gate", name, kind]) => {
                let kind = match *kind {
                    "and" => GateKind::And,
                    "or" => GateKind::Or,
                    _ => return Err(Error::parse(line_no, format!("unknown gate kind `{kind}`"))),
                };
                p.cell.gates.push((name.to_string(), kind));
            }
            (Some(p), ["wire", s, t]) => p.cell.wires.push((s.to_string(), t.to_string())),
            (Some(p), ["nonterm", inst, ":", callee]) => {
                let Some(idx) = cells.iter().position(|c| c.name == *callee) else {
                    return Err(Error::parse(line_no, format!("undeclared cell `{callee}`")));
                };
                p.cell.nonterminals.push(Nonterminal {
                    name: inst.to_string(),
                    callee: idx,
                    binding: Vec::new(),
                });
            }
            (Some(p), ["bind", inst, idx, node]) => {
                let idx: usize = idx
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad pin index `{idx}`")))?;
                p.binds.push((line_no, inst.to_string(), idx, node.to_string()));
            }
            (Some(p), ["output", node]) => p.cell.output = Some(node.to_string()),
            (Some(_), ["end"]) => {
                let mut p = current.take().expect("open cell");
                let mut slots: Vec<Vec<Option<String>>> = p
                    .cell
                    .nonterminals
                    .iter()
                    .map(|nt| vec![None; cells[nt.callee].pins.len()])
                    .collect();
                for (line, inst, idx, node) in p.binds {
                    let Some(pos) = p.cell.nonterminals.iter().position(|nt| nt.name == inst) else {
                        return Err(Error::parse(line, format!("bind to unknown instance `{inst}`")));
                    };
                    if idx == 0 || idx > slots[pos].len() {
                        return Err(Error::parse(line, format!("instance `{inst}` has no pin {idx}")));
                    }
                    if slots[pos][idx - 1].replace(node).is_some() {
                        return Err(Error::parse(line, format!("instance `{inst}` pin {idx} bound twice")));
                    }
                }
                for (nt, slot) in p.cell.nonterminals.iter_mut().zip(slots) {
                    for (r, s) in slot.into_iter().enumerate() {
                        match s {
                            Some(t) => nt.binding.push(t),
                            None => {
                                return Err(Error::parse(
                                    p.start,
                                    format!("instance `{}` leaves pin {} unbound", nt.name, r + 1),
                                ))
                            }
                        }
                    }
                }
                cells.push(p.cell);
            }
            (Some(_), _) => return Err(Error::parse(line_no, format!("unrecognized line `{line}`"))),
        }
    }
    if let Some(p) = current {
        return Err(Error::parse(
            p.start,
            format!("cell `{}` is missing `end`", p.cell.name),
        ));
    }
    if !saw_header {
        return Err(Error::parse(1, "empty input"));
    }
    let c = HierCircuit::new(cells);
    c.ensure_valid()?;
    Ok(c)
}

pub fn serialize_circuit(c: &HierCircuit) -> String {
    let mut out = String::from("hcirc 1\n");
    for cell in &c.cells {
        let _ = writeln!(out, "cell {}", cell.name);
        for p in &cell.pins {
            let _ = writeln!(out, "pin {p}");
        }
        for (n, b) in &cell.inputs {
            let _ = writeln!(out, "input {n} {}", *b as u8);
        }
        for (n, k) in &cell.gates {
            let _ = writeln!(out, "gate {n} {}", k.as_str());
        }
        for (s, t) in &cell.wires {
            let _ = writeln!(out, "wire {s} {t}");
        }
        for nt in &cell.nonterminals {
            let _ = writeln!(out, "nonterm {} : {}", nt.name, c.cells[nt.callee].name);
        }
        for nt in &cell.nonterminals {
            for (r, t) in nt.binding.iter().enumerate() {
                let _ = writeln!(out, "bind {} {} {t}", nt.name, r + 1);
            }
        }
        if let Some(o) = &cell.output {
            let _ = writeln!(out, "output {o}");
        }
        out.push_str("end\n");
    }
    out
}
