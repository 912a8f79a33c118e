//! Hierarchical graph specifications: cells, nonterminal calls, the HGS text
//! format, validation, size measures and expansion statistics.
//!
//! A specification is an ordered list of cells `G_1 .. G_n`. Each cell is a
//! small simple graph over its *terminals* (pins and explicit vertices) plus a
//! list of nonterminal instances. A nonterminal of type `G_j` (`j < i`) is
//! wired to the caller through a binding that maps every pin of `G_j` to a
//! terminal of the caller. The last cell is the root.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A nonterminal instance inside a cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nonterminal {
    pub name: String,
    /// Zero-based index of the called cell.
    pub callee: usize,
    /// `binding[k]` is the caller terminal identified with pin `k + 1` of the callee.
    pub binding: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CellDef {
    pub name: String,
    pub pins: Vec<String>,
    pub vertices: Vec<String>,
    pub nonterminals: Vec<Nonterminal>,
    pub edges: Vec<(String, String)>,
}

impl CellDef {
    pub fn new(name: impl Into<String>) -> Self {
        CellDef {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn pin(mut self, name: &str) -> Self {
        self.pins.push(name.to_string());
        self
    }

    pub fn vertex(mut self, name: &str) -> Self {
        self.vertices.push(name.to_string());
        self
    }

    pub fn edge(mut self, a: &str, b: &str) -> Self {
        self.edges.push((a.to_string(), b.to_string()));
        self
    }

    pub fn call(mut self, inst: &str, callee: usize, binding: &[&str]) -> Self {
        self.nonterminals.push(Nonterminal {
            name: inst.to_string(),
            callee,
            binding: binding.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    /// `n_i`: pins, explicit vertices and nonterminals.
    pub fn vertex_count(&self) -> u64 {
        (self.pins.len() + self.vertices.len() + self.nonterminals.len()) as u64
    }

    /// `m_i`: terminal edges plus one edge per nonterminal incidence.
    pub fn edge_count(&self) -> u64 {
        let incidences: usize = self.nonterminals.iter().map(|nt| nt.binding.len()).sum();
        (self.edges.len() + incidences) as u64
    }

    pub fn is_terminal(&self, name: &str) -> bool {
        self.pins.iter().any(|p| p == name) || self.vertices.iter().any(|v| v == name)
    }

    pub fn is_pin(&self, name: &str) -> bool {
        self.pins.iter().any(|p| p == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HierSpec {
    pub cells: Vec<CellDef>,
}

impl HierSpec {
    pub fn new(cells: Vec<CellDef>) -> Self {
        HierSpec { cells }
    }

    pub fn root(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cell_index(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.name == name)
    }

    /// `N`, the total vertex number.
    pub fn vertex_number(&self) -> u64 {
        self.cells.iter().map(CellDef::vertex_count).sum()
    }

    /// `M`, the total edge number.
    pub fn edge_number(&self) -> u64 {
        self.cells.iter().map(CellDef::edge_count).sum()
    }

    /// `size(Γ) = N + M`.
    pub fn size(&self) -> u64 {
        self.vertex_number() + self.edge_number()
    }

    /// Errors with [`Error::Invalid`] unless [`validate`] reports nothing.
    pub fn ensure_valid(&self) -> Result<()> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(violations.iter().map(ToString::to_string).collect()))
        }
    }

    /// A spec is simple when no cell has an edge between two of its own pins.
    pub fn ensure_simple(&self) -> Result<()> {
        for cell in &self.cells {
            for (a, b) in &cell.edges {
                if cell.is_pin(a) && cell.is_pin(b) {
                    return Err(Error::NotSimple {
                        cell: cell.name.clone(),
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_simple(&self) -> bool {
        self.ensure_simple().is_ok()
    }

    /// Every edge joins explicit vertices of the same instance or of a
    /// caller/callee instance pair. Holds iff no binding targets a pin.
    pub fn is_one_level_restricted(&self) -> bool {
        self.cells.iter().all(|cell| {
            cell.nonterminals
                .iter()
                .all(|nt| nt.binding.iter().all(|t| !cell.is_pin(t)))
        })
    }

    /// One-level-restricted, and every `G_i` (`i ≥ 2`) calls only `G_{i-1}`.
    pub fn is_strongly_one_level_restricted(&self) -> bool {
        self.is_one_level_restricted()
            && self
                .cells
                .iter()
                .enumerate()
                .all(|(i, cell)| cell.nonterminals.iter().all(|nt| i > 0 && nt.callee == i - 1))
    }

    pub(crate) fn indexed(&self) -> Vec<IndexedCell> {
        self.cells.iter().map(IndexedCell::build).collect()
    }
}

/// Integer-indexed view of a cell. Terminal ids: pins `0..p`, explicit
/// vertices `p..p+e`, both in declaration order.
#[derive(Debug, Clone)]
pub(crate) struct IndexedCell {
    pub pins: usize,
    pub explicit: usize,
    pub edges: Vec<(usize, usize)>,
    /// Neighbours per terminal, in edge declaration order.
    pub adj: Vec<Vec<usize>>,
    /// Per nonterminal: callee and bound terminal per callee pin.
    pub calls: Vec<(usize, Vec<usize>)>,
    /// Per terminal: the `(instance, callee pin)` pairs bound to it.
    pub bound_by: Vec<Vec<(usize, usize)>>,
}

impl IndexedCell {
    fn build(cell: &CellDef) -> Self {
        let mut id: HashMap<&str, usize> = HashMap::new();
        for (k, p) in cell.pins.iter().enumerate() {
            id.insert(p, k);
        }
        for (k, v) in cell.vertices.iter().enumerate() {
            id.insert(v, cell.pins.len() + k);
        }
        let terminals = cell.pins.len() + cell.vertices.len();
        let mut adj = vec![Vec::new(); terminals];
        let mut edges = Vec::with_capacity(cell.edges.len());
        for (a, b) in &cell.edges {
            let (a, b) = (id[a.as_str()], id[b.as_str()]);
            edges.push((a, b));
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut bound_by = vec![Vec::new(); terminals];
        let mut calls = Vec::with_capacity(cell.nonterminals.len());
        for (inst, nt) in cell.nonterminals.iter().enumerate() {
            let binding: Vec<usize> = nt.binding.iter().map(|t| id[t.as_str()]).collect();
            for (pin, &t) in binding.iter().enumerate() {
                bound_by[t].push((inst, pin));
            }
            calls.push((nt.callee, binding));
        }
        IndexedCell {
            pins: cell.pins.len(),
            explicit: cell.vertices.len(),
            edges,
            adj,
            calls,
            bound_by,
        }
    }

    pub fn terminals(&self) -> usize {
        self.pins + self.explicit
    }

    pub fn is_pin(&self, t: usize) -> bool {
        t < self.pins
    }
}

/// A vertex (or a path relative to some cell) named by the nonterminal
/// instances leading to its defining cell, followed by its local name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPath {
    pub trail: Vec<String>,
    pub name: String,
}

impl VertexPath {
    pub fn local(name: impl Into<String>) -> Self {
        VertexPath {
            trail: Vec::new(),
            name: name.into(),
        }
    }

    pub fn new(trail: Vec<String>, name: impl Into<String>) -> Self {
        VertexPath {
            trail,
            name: name.into(),
        }
    }

    /// The same path seen from one level up, through instance `inst`.
    pub fn under(&self, inst: &str) -> Self {
        let mut trail = Vec::with_capacity(self.trail.len() + 1);
        trail.push(inst.to_string());
        trail.extend(self.trail.iter().cloned());
        VertexPath {
            trail,
            name: self.name.clone(),
        }
    }

    /// Drops the first `k` trail segments.
    pub fn suffix(&self, k: usize) -> Self {
        VertexPath {
            trail: self.trail[k..].to_vec(),
            name: self.name.clone(),
        }
    }
}

impl fmt::Display for VertexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seg in &self.trail {
            write!(f, "{seg}/")?;
        }
        write!(f, "{}", self.name)
    }
}

impl FromStr for VertexPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut segs: Vec<String> = s.split('/').map(str::to_string).collect();
        if segs.iter().any(|seg| !is_identifier(seg)) {
            return Err(Error::Unresolved {
                path: s.to_string(),
                reason: "path segments must be non-empty identifiers".into(),
            });
        }
        let name = segs.pop().unwrap_or_default();
        Ok(VertexPath { trail: segs, name })
    }
}

pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// One invariant violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub cell: Option<String>,
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.cell {
            Some(c) => write!(f, "cell `{c}`: {}: {}", self.rule, self.detail),
            None => write!(f, "{}: {}", self.rule, self.detail),
        }
    }
}

/// Checks every structural invariant; an empty result means `spec` is valid.
pub fn validate(spec: &HierSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |cell: Option<&str>, rule: &'static str, detail: String| {
        out.push(Violation {
            cell: cell.map(str::to_string),
            rule,
            detail,
        })
    };
    if spec.cells.is_empty() {
        push(None, "empty", "specification has no cells".into());
        return out;
    }

    let mut cell_names = HashSet::new();
    for cell in &spec.cells {
        if !is_identifier(&cell.name) {
            push(Some(&cell.name), "identifier", format!("bad cell name `{}`", cell.name));
        }
        if !cell_names.insert(cell.name.as_str()) {
            push(Some(&cell.name), "duplicate-cell", "cell name declared twice".into());
        }
    }

    for (i, cell) in spec.cells.iter().enumerate() {
        let cname = Some(cell.name.as_str());
        let mut names = HashSet::new();
        let all_names = cell
            .pins
            .iter()
            .chain(&cell.vertices)
            .chain(cell.nonterminals.iter().map(|nt| &nt.name));
        for name in all_names {
            if !is_identifier(name) {
                push(cname, "identifier", format!("bad name `{name}`"));
            }
            if !names.insert(name.as_str()) {
                push(cname, "distinct-names", format!("name `{name}` used twice"));
            }
        }

        let mut seen_edges = HashSet::new();
        for (a, b) in &cell.edges {
            for end in [a, b] {
                if !cell.is_terminal(end) {
                    push(cname, "edge-endpoint", format!("`{end}` is not a terminal"));
                }
            }
            if a == b {
                push(cname, "self-loop", format!("edge `{a}`-`{b}`"));
            }
            let key = if a <= b { (a, b) } else { (b, a) };
            if !seen_edges.insert(key) {
                push(cname, "duplicate-edge", format!("edge `{a}`-`{b}` repeated"));
            }
        }

        for nt in &cell.nonterminals {
            if nt.callee >= i {
                push(
                    cname,
                    "call-order",
                    format!("instance `{}` calls cell index {} ≥ {}", nt.name, nt.callee + 1, i + 1),
                );
                continue;
            }
            let callee = &spec.cells[nt.callee];
            if nt.binding.len() != callee.pins.len() {
                push(
                    cname,
                    "binding-total",
                    format!(
                        "instance `{}` binds {} of {} pins",
                        nt.name,
                        nt.binding.len(),
                        callee.pins.len()
                    ),
                );
            }
            let mut targets = HashSet::new();
            for t in &nt.binding {
                if !cell.is_terminal(t) {
                    push(
                        cname,
                        "binding-target",
                        format!("instance `{}` binds to non-terminal `{t}`", nt.name),
                    );
                }
                if !targets.insert(t.as_str()) {
                    push(
                        cname,
                        "binding-injective",
                        format!("instance `{}` binds two pins to `{t}`", nt.name),
                    );
                }
            }
        }
    }

    // Reachability from the root over well-ordered calls.
    let n = spec.cells.len();
    let mut reached = vec![false; n];
    reached[n - 1] = true;
    for i in (0..n).rev() {
        if !reached[i] {
            continue;
        }
        for nt in &spec.cells[i].nonterminals {
            if nt.callee < i {
                reached[nt.callee] = true;
            }
        }
    }
    for (i, r) in reached.iter().enumerate() {
        if !r {
            push(
                Some(&spec.cells[i].name),
                "unreachable",
                "cell is not reachable from the root".into(),
            );
        }
    }
    out
}

/// Per-cell census used by [`SpecStats`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCounts {
    pub n: u64,
    pub m: u64,
    pub p: u64,
    pub r: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecStats {
    pub n: u64,
    pub m: u64,
    pub size: u64,
    pub cells: Vec<CellCounts>,
    pub expansion_vertices: BigUint,
    pub expansion_edges: BigUint,
    pub max_degree: BigUint,
    /// Number of nodes in the hierarchy tree.
    pub tree_nodes: BigUint,
}

/// Expansion statistics computed by recurrences over the cells, without
/// expanding anything. Precondition: `spec` is valid.
pub fn stats(spec: &HierSpec) -> SpecStats {
    let idx = spec.indexed();
    let n = spec.cells.len();
    let mut ev: Vec<BigUint> = Vec::with_capacity(n);
    let mut ee: Vec<BigUint> = Vec::with_capacity(n);
    let mut nodes: Vec<BigUint> = Vec::with_capacity(n);
    let mut pin_deg: Vec<Vec<BigUint>> = Vec::with_capacity(n);
    let mut max_degree = BigUint::zero();

    for (i, cell) in idx.iter().enumerate() {
        let mut v = BigUint::from(cell.terminals());
        let mut e = BigUint::from(cell.edges.len());
        let mut t = BigUint::one();
        for (callee, _) in &cell.calls {
            v += &ev[*callee] - BigUint::from(idx[*callee].pins);
            e += &ee[*callee];
            t += &nodes[*callee];
        }
        // Realized degree of each terminal: local degree plus the internal
        // degree of every callee pin identified with it.
        let mut deg: Vec<BigUint> = cell.adj.iter().map(|a| BigUint::from(a.len())).collect();
        for (term, binds) in cell.bound_by.iter().enumerate() {
            for &(inst, pin) in binds {
                let callee = cell.calls[inst].0;
                deg[term] += &pin_deg[callee][pin];
            }
        }
        let is_root = i == n - 1;
        for (term, d) in deg.iter().enumerate() {
            if (!cell.is_pin(term) || is_root) && *d > max_degree {
                max_degree = d.clone();
            }
        }
        pin_deg.push(deg[..cell.pins].to_vec());
        ev.push(v);
        ee.push(e);
        nodes.push(t);
    }

    let cells = spec
        .cells
        .iter()
        .map(|c| CellCounts {
            n: c.vertex_count(),
            m: c.edge_count(),
            p: c.pins.len() as u64,
            r: c.nonterminals.len() as u64,
        })
        .collect();
    SpecStats {
        n: spec.vertex_number(),
        m: spec.edge_number(),
        size: spec.size(),
        cells,
        expansion_vertices: ev.pop().unwrap_or_default(),
        expansion_edges: ee.pop().unwrap_or_default(),
        max_degree,
        tree_nodes: nodes.pop().unwrap_or_default(),
    }
}

/// A node of the hierarchy tree: the root has no instance name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierTree {
    pub instance: Option<String>,
    pub cell: usize,
    pub children: Vec<HierTree>,
}

impl HierTree {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(HierTree::node_count).sum::<usize>()
    }
}

pub fn hierarchy_tree(spec: &HierSpec, node_limit: u64) -> Result<HierTree> {
    let count = stats(spec).tree_nodes;
    if count > BigUint::from(node_limit) {
        return Err(Error::limit("hierarchy-tree node", node_limit, count));
    }
    fn build(spec: &HierSpec, cell: usize, instance: Option<String>) -> HierTree {
        let children = spec.cells[cell]
            .nonterminals
            .iter()
            .map(|nt| build(spec, nt.callee, Some(nt.name.clone())))
            .collect();
        HierTree {
            instance,
            cell,
            children,
        }
    }
    Ok(build(spec, spec.root(), None))
}

/// Parses HGS text. The result is validated; violations become [`Error::Invalid`].
pub fn parse_spec(text: &str) -> Result<HierSpec> {
    struct Pending {
        cell: CellDef,
        start: usize,
        // instance -> (line, callee)
        insts: BTreeMap<String, (usize, usize)>,
        binds: Vec<(usize, String, usize, String)>,
    }

    let mut cells: Vec<CellDef> = Vec::new();
    let mut by_name: HashMap<String, usize> = HashMap::new();
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
            if toks != ["hgs", "1"] {
                return Err(Error::parse(line_no, "expected header `hgs 1`"));
            }
            saw_header = true;
            continue;
        }
        let ident = |s: &str| -> Result<String> {
            if is_identifier(s) {
                Ok(s.to_string())
            } else {
                Err(Error::parse(line_no, format!("bad identifier `{s}`")))
            }
        };
        match (&mut current, toks.as_slice()) {
            (None, ["cell", name]) => {
                let name = ident(name)?;
                if by_name.contains_key(&name) {
                    return Err(Error::parse(line_no, format!("duplicate cell name `{name}`")));
                }
                current = Some(Pending {
                    cell: CellDef::new(name),
                    start: line_no,
                    insts: BTreeMap::new(),
                    binds: Vec::new(),
                });
            }
            (None, _) => return Err(Error::parse(line_no, "expected `cell NAME`")),
            (Some(p), ["pin", name]) => {
                let name = ident(name)?;
                check_fresh(&p.cell, &name, line_no)?;
                p.cell.pins.push(name);
            }
            (Some(p), ["vertex", name]) => {
                let name = ident(name)?;
                check_fresh(&p.cell, &name, line_no)?;
                p.cell.vertices.push(name);
            }
            (Some(p), ["nonterm", inst, ":", callee]) => {
                let inst = ident(inst)?;
                check_fresh(&p.cell, &inst, line_no)?;
                let Some(&callee) = by_name.get(*callee) else {
                    return Err(Error::parse(
                        line_no,
                        format!("instance `{inst}` references undeclared cell `{callee}`"),
                    ));
                };
                p.insts.insert(inst.clone(), (line_no, callee));
                p.cell.nonterminals.push(Nonterminal {
                    name: inst,
                    callee,
                    binding: Vec::new(),
                });
            }
            (Some(p), ["bind", inst, idx, term]) => {
                let idx: usize = idx
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad pin index `{idx}`")))?;
                p.binds.push((line_no, ident(inst)?, idx, ident(term)?));
            }
            (Some(p), ["edge", a, b]) => {
                p.cell.edges.push((ident(a)?, ident(b)?));
            }
            (Some(_), ["end"]) => {
                let mut p = current.take().expect("open cell");
                let mut slots: Vec<Vec<Option<String>>> = p
                    .cell
                    .nonterminals
                    .iter()
                    .map(|nt| vec![None; cells[nt.callee].pins.len()])
                    .collect();
                for (line, inst, idx, term) in p.binds {
                    let Some(pos) = p.cell.nonterminals.iter().position(|nt| nt.name == inst) else {
                        return Err(Error::parse(line, format!("bind to unknown instance `{inst}`")));
                    };
                    let slot = &mut slots[pos];
                    if idx == 0 || idx > slot.len() {
                        return Err(Error::parse(
                            line,
                            format!("instance `{inst}` has no pin {idx} (callee has {} pins)", slot.len()),
                        ));
                    }
                    if slot[idx - 1].replace(term).is_some() {
                        return Err(Error::parse(line, format!("instance `{inst}` pin {idx} bound twice")));
                    }
                }
                for (nt, slot) in p.cell.nonterminals.iter_mut().zip(slots) {
                    let line = p.insts[&nt.name].0;
                    for (k, s) in slot.into_iter().enumerate() {
                        match s {
                            Some(t) => nt.binding.push(t),
                            None => {
                                return Err(Error::parse(
                                    line,
                                    format!("instance `{}` leaves pin {} unbound", nt.name, k + 1),
                                ))
                            }
                        }
                    }
                }
                let _ = p.start;
                by_name.insert(p.cell.name.clone(), cells.len());
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
    let spec = HierSpec { cells };
    spec.ensure_valid()?;
    Ok(spec)
}

fn check_fresh(cell: &CellDef, name: &str, line: usize) -> Result<()> {
    let taken = cell.pins.iter().any(|p| p == name)
        || cell.vertices.iter().any(|v| v == name)
        || cell.nonterminals.iter().any(|nt| nt.name == name);
    if taken {
        Err(Error::parse(
            line,
            format!("duplicate name `{name}` in cell `{}`", cell.name),
        ))
    } else {
        Ok(())
    }
}

/// Writes HGS text: pins, vertices, nonterms, binds, edges, each in declaration order.
pub fn serialize_spec(spec: &HierSpec) -> String {
    let mut out = String::from("hgs 1\n");
    for cell in &spec.cells {
        out.push_str(&format!("cell {}\n", cell.name));
        for p in &cell.pins {
            out.push_str(&format!("pin {p}\n"));
        }
        for v in &cell.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for nt in &cell.nonterminals {
            out.push_str(&format!("nonterm {} : {}\n", nt.name, spec.cells[nt.callee].name));
        }
        for nt in &cell.nonterminals {
            for (k, t) in nt.binding.iter().enumerate() {
                out.push_str(&format!("bind {} {} {}\n", nt.name, k + 1, t));
            }
        }
        for (a, b) in &cell.edges {
            out.push_str(&format!("edge {a} {b}\n"));
        }
        out.push_str("end\n");
    }
    out
}
