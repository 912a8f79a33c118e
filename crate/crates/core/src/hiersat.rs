//! Hierarchically specified 3CNF formulas and greedy MAX 3SAT.
//!
//! A formula cell has parameters, local variables, clauses over both, and
//! calls to earlier cells with caller variables as arguments. Locals are
//! fresh per call instance. The flat greedy assigns each clause to the
//! variable of its first literal (a star) and sets each variable to the
//! polarity that satisfies more of its star. The hierarchical version
//! forwards the polarity counts of stars centred at a parameter to the
//! caller, which owns the actual variable.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::expand::FlatGraph;
use crate::hsolution::{HSolution, SolutionCell};
use crate::spec::{is_identifier, CellDef, HierSpec, Nonterminal, VertexPath};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: String,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaCall {
    pub callee: usize,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormulaCell {
    pub name: String,
    pub params: Vec<String>,
    pub locals: Vec<String>,
    pub clauses: Vec<Vec<Literal>>,
    pub calls: Vec<FormulaCall>,
}

impl FormulaCell {
    pub fn new(name: impl Into<String>) -> Self {
        FormulaCell {
            name: name.into(),
            ..Default::default()
        }
    }

    fn variables(&self) -> impl Iterator<Item = &String> {
        self.params.iter().chain(&self.locals)
    }

    /// Names of the call instances: `c1, c2, ...`, suffixed with `_` where
    /// that would clash with a variable.
    pub fn instance_names(&self) -> Vec<String> {
        let mut taken: HashSet<String> = self.variables().cloned().collect();
        (1..=self.calls.len())
            .map(|k| fresh(&mut taken, format!("c{k}")))
            .collect()
    }

    /// Names of the clause vertices in the bipartite graph, `K1, K2, ...`.
    fn clause_names(&self) -> Vec<String> {
        let mut taken: HashSet<String> = self.variables().cloned().collect();
        taken.extend(self.instance_names());
        (1..=self.clauses.len())
            .map(|k| fresh(&mut taken, format!("K{k}")))
            .collect()
    }
}

fn fresh(taken: &mut HashSet<String>, mut name: String) -> String {
    while taken.contains(&name) {
        name.push('_');
    }
    taken.insert(name.clone());
    name
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierFormula {
    pub cells: Vec<FormulaCell>,
}

impl HierFormula {
    pub fn new(cells: Vec<FormulaCell>) -> Self {
        HierFormula { cells }
    }

    pub fn root(&self) -> usize {
        self.cells.len() - 1
    }

    /// Sum of clause and variable counts over the cells.
    pub fn size(&self) -> u64 {
        self.cells
            .iter()
            .map(|c| (c.clauses.len() + c.params.len() + c.locals.len()) as u64)
            .sum()
    }

    fn per_instance_totals(&self, own: impl Fn(&FormulaCell) -> usize) -> BigUint {
        let mut totals: Vec<BigUint> = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let mut t = BigUint::from(own(c));
            for call in &c.calls {
                t += &totals[call.callee];
            }
            totals.push(t);
        }
        totals.pop().unwrap_or_default()
    }

    pub fn expansion_clauses(&self) -> BigUint {
        self.per_instance_totals(|c| c.clauses.len())
    }

    pub fn expansion_variables(&self) -> BigUint {
        self.per_instance_totals(|c| c.locals.len())
    }

    pub fn instances(&self) -> BigUint {
        self.per_instance_totals(|_| 1)
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.cells.is_empty() {
            out.push("formula has no cells".to_string());
            return out;
        }
        let mut names = HashSet::new();
        for (i, c) in self.cells.iter().enumerate() {
            let at = &c.name;
            if !is_identifier(&c.name) {
                out.push(format!("bad formula name `{at}`"));
            }
            if !names.insert(&c.name) {
                out.push(format!("duplicate formula name `{at}`"));
            }
            let mut vars = HashSet::new();
            for v in c.variables() {
                if !is_identifier(v) {
                    out.push(format!("{at}: bad variable name `{v}`"));
                }
                if !vars.insert(v) {
                    out.push(format!("{at}: variable `{v}` declared twice"));
                }
            }
            for (k, clause) in c.clauses.iter().enumerate() {
                if clause.is_empty() || clause.len() > 3 {
                    out.push(format!("{at}: clause {} has {} literals", k + 1, clause.len()));
                }
                for l in clause {
                    if !vars.contains(&l.var) {
                        out.push(format!("{at}: clause {} uses undeclared `{}`", k + 1, l.var));
                    }
                }
            }
            for (k, call) in c.calls.iter().enumerate() {
                if call.callee >= i {
                    out.push(format!("{at}: call {} does not target an earlier formula", k + 1));
                    continue;
                }
                let want = self.cells[call.callee].params.len();
                if call.args.len() != want {
                    out.push(format!(
                        "{at}: call {} passes {} arguments, expected {want}",
                        k + 1,
                        call.args.len()
                    ));
                }
                for a in &call.args {
                    if !vars.contains(a) {
                        out.push(format!("{at}: call {} passes undeclared `{a}`", k + 1));
                    }
                }
            }
        }
        if !self.cells[self.root()].params.is_empty() {
            out.push("root formula has parameters".to_string());
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

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlatLiteral {
    pub var: usize,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlatCnf {
    pub variables: Vec<VertexPath>,
    pub clauses: Vec<Vec<FlatLiteral>>,
}

impl FlatCnf {
    pub fn satisfied(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| c.iter().any(|l| assignment[l.var] != l.negated))
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            let lits: Vec<String> = c
                .iter()
                .map(|l| format!("{}{}", if l.negated { "!" } else { "" }, self.variables[l.var]))
                .collect();
            let _ = writeln!(out, "{}", lits.join(" "));
        }
        out
    }
}

/// Macro expansion. Variables are labeled by instance trail; the limit
/// applies to expanded clauses and to call instances.
pub fn expand_formula(f: &HierFormula, limit: u64) -> Result<FlatCnf> {
    f.ensure_valid()?;
    let clauses = f.expansion_clauses();
    if clauses > BigUint::from(limit) {
        return Err(Error::limit("expansion clause", limit, clauses));
    }
    let instances = f.instances();
    if instances > BigUint::from(limit) {
        return Err(Error::limit("formula instance", limit, instances));
    }
    let names: Vec<Vec<String>> = f.cells.iter().map(FormulaCell::instance_names).collect();
    let mut cnf = FlatCnf::default();
    build(f, &names, f.root(), &mut Vec::new(), &[], &mut cnf);
    Ok(cnf)
}

fn build(
    f: &HierFormula,
    names: &[Vec<String>],
    cell: usize,
    trail: &mut Vec<String>,
    params: &[usize],
    cnf: &mut FlatCnf,
) {
    let c = &f.cells[cell];
    let mut id: HashMap<&str, usize> = HashMap::new();
    for (p, &v) in c.params.iter().zip(params) {
        id.insert(p, v);
    }
    for z in &c.locals {
        cnf.variables.push(VertexPath::new(trail.clone(), z.clone()));
        id.insert(z, cnf.variables.len() - 1);
    }
    for clause in &c.clauses {
        cnf.clauses.push(
            clause
                .iter()
                .map(|l| FlatLiteral {
                    var: id[l.var.as_str()],
                    negated: l.negated,
                })
                .collect(),
        );
    }
    for (call, inst) in c.calls.iter().zip(&names[cell]) {
        let args: Vec<usize> = call.args.iter().map(|a| id[a.as_str()]).collect();
        trail.push(inst.clone());
        build(f, names, call.callee, trail, &args, cnf);
        trail.pop();
    }
}

/// The variable-clause incidence graph: variables first, then clauses
/// labeled `K1, K2, ...`; one edge per distinct variable of a clause.
pub fn bipartite_graph(cnf: &FlatCnf) -> FlatGraph {
    let mut g = FlatGraph {
        vertices: cnf.variables.clone(),
        edges: Vec::new(),
    };
    for (k, clause) in cnf.clauses.iter().enumerate() {
        g.vertices.push(VertexPath::local(format!("K{}", k + 1)));
        let c = g.vertices.len() - 1;
        let vars: BTreeSet<usize> = clause.iter().map(|l| l.var).collect();
        g.edges.extend(vars.into_iter().map(|v| (v, c)));
    }
    g
}

/// The bipartite graph as a hierarchical specification: parameters become
/// pins, locals and clauses become vertices. Call arguments must be distinct
/// because pin bindings are injective.
pub fn tform(f: &HierFormula) -> Result<HierSpec> {
    f.ensure_valid()?;
    let mut cells = Vec::with_capacity(f.cells.len());
    for c in &f.cells {
        let insts = c.instance_names();
        let clause_names = c.clause_names();
        let mut d = CellDef::new(c.name.clone());
        d.pins = c.params.clone();
        d.vertices = c.locals.iter().chain(&clause_names).cloned().collect();
        for (clause, k) in c.clauses.iter().zip(&clause_names) {
            let mut seen = HashSet::new();
            for l in clause {
                if seen.insert(&l.var) {
                    d.edges.push((l.var.clone(), k.clone()));
                }
            }
        }
        for (call, inst) in c.calls.iter().zip(insts) {
            let distinct: HashSet<&String> = call.args.iter().collect();
            if distinct.len() != call.args.len() {
                return Err(Error::Malformed(format!(
                    "formula `{}` passes a repeated argument to `{}`; a graph binding must be injective",
                    c.name, f.cells[call.callee].name
                )));
            }
            d.nonterminals.push(Nonterminal {
                name: inst,
                callee: call.callee,
                binding: call.args.clone(),
            });
        }
        cells.push(d);
    }
    Ok(HierSpec::new(cells))
}

/// Star decomposition greedy. The order only fixes iteration; every clause
/// belongs to the star of its first literal's variable.
pub fn fmax_3sat(cnf: &FlatCnf, order: &[usize]) -> (Vec<bool>, usize) {
    let mut pv = vec![0usize; cnf.variables.len()];
    let mut nv = vec![0usize; cnf.variables.len()];
    for clause in &cnf.clauses {
        if let Some(l) = clause.first() {
            if l.negated {
                nv[l.var] += 1;
            } else {
                pv[l.var] += 1;
            }
        }
    }
    let mut value = vec![true; cnf.variables.len()];
    let mut heu = 0;
    for &v in order {
        value[v] = pv[v] >= nv[v];
        heu += pv[v].max(nv[v]);
    }
    (value, heu)
}

/// Per parameter position, star clauses of the cell's expansion centred at
/// that parameter, unnegated and negated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SatBurnt {
    pub p: Vec<BigUint>,
    pub n: Vec<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SatLevel {
    /// Locals with their values and `(PV, NV)`.
    pub locals: Vec<(String, bool, BigUint, BigUint)>,
    pub heu: BigUint,
}

#[derive(Debug, Clone)]
pub struct HsatResult {
    pub heu: BigUint,
    pub levels: Vec<SatLevel>,
    pub burnt: Vec<SatBurnt>,
    /// Selects the variables set to true.
    pub solution: HSolution,
}

pub fn hmax_3sat(f: &HierFormula) -> Result<HsatResult> {
    f.ensure_valid()?;
    let mut levels: Vec<SatLevel> = Vec::with_capacity(f.cells.len());
    let mut burnt: Vec<SatBurnt> = Vec::with_capacity(f.cells.len());
    let mut solution = HSolution { cells: Vec::new() };
    for c in &f.cells {
        let vars: Vec<&String> = c.variables().collect();
        let id: HashMap<&str, usize> = vars.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
        let mut pv = vec![BigUint::default(); vars.len()];
        let mut nv = vec![BigUint::default(); vars.len()];
        for clause in &c.clauses {
            if let Some(l) = clause.first() {
                let slot = if l.negated { &mut nv } else { &mut pv };
                slot[id[l.var.as_str()]] += 1u32;
            }
        }
        for call in &c.calls {
            let b = &burnt[call.callee];
            for (k, a) in call.args.iter().enumerate() {
                pv[id[a.as_str()]] += &b.p[k];
                nv[id[a.as_str()]] += &b.n[k];
            }
        }
        let np = c.params.len();
        let mut heu: BigUint = c.calls.iter().map(|call| &levels[call.callee].heu).sum();
        let mut locals = Vec::with_capacity(c.locals.len());
        let mut selected = Vec::new();
        for (k, z) in c.locals.iter().enumerate() {
            let (p, n) = (&pv[np + k], &nv[np + k]);
            let value = p >= n;
            heu += p.max(n);
            if value {
                selected.push(VertexPath::local(z.clone()));
            }
            locals.push((z.clone(), value, p.clone(), n.clone()));
        }
        solution.cells.push(SolutionCell {
            name: c.name.clone(),
            selected,
            calls: c
                .instance_names()
                .into_iter()
                .zip(c.calls.iter().map(|call| call.callee))
                .collect(),
        });
        burnt.push(SatBurnt {
            p: pv[..np].to_vec(),
            n: nv[..np].to_vec(),
        });
        levels.push(SatLevel { locals, heu });
    }
    Ok(HsatResult {
        heu: levels.last().map(|l| l.heu.clone()).unwrap_or_default(),
        levels,
        burnt,
        solution,
    })
}

/// Resolves a variable path to the label of the variable it denotes: a
/// parameter is replaced by the caller's argument, repeatedly.
pub fn canonical_variable(f: &HierFormula, path: &VertexPath) -> Result<VertexPath> {
    let unresolved = |reason: String| Error::Unresolved {
        path: path.to_string(),
        reason,
    };
    let mut cells = vec![f.root()];
    let mut calls = Vec::new();
    for seg in &path.trail {
        let cell = &f.cells[*cells.last().unwrap()];
        let Some(k) = cell.instance_names().iter().position(|n| n == seg) else {
            return Err(unresolved(format!("no instance `{seg}` in formula `{}`", cell.name)));
        };
        calls.push(k);
        cells.push(cell.calls[k].callee);
    }
    let mut depth = path.trail.len();
    let mut name = path.name.clone();
    loop {
        let cell = &f.cells[cells[depth]];
        if cell.locals.contains(&name) {
            return Ok(VertexPath::new(path.trail[..depth].to_vec(), name));
        }
        let Some(k) = cell.params.iter().position(|p| *p == name) else {
            return Err(unresolved(format!("formula `{}` has no variable `{name}`", cell.name)));
        };
        depth -= 1;
        name = f.cells[cells[depth]].calls[calls[depth]].args[k].clone();
    }
}

/// Value of a variable under a hierarchical assignment.
pub fn query_assignment(f: &HierFormula, sol: &HSolution, path: &VertexPath) -> Result<bool> {
    sol.query(&canonical_variable(f, path)?)
}

/// The hierarchical assignment laid out over `cnf.variables`.
pub fn flat_assignment(cnf: &FlatCnf, sol: &HSolution) -> Result<Vec<bool>> {
    let truth = sol.flatten(cnf.variables.len() as u64)?;
    Ok(cnf.variables.iter().map(|v| truth.contains(v)).collect())
}

pub fn parse_formula(text: &str) -> Result<HierFormula> {
    let mut cells: Vec<FormulaCell> = Vec::new();
    let mut current: Option<FormulaCell> = None;
    let mut saw_header = false;
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !saw_header {
            if toks != ["h3f", "1"] {
                return Err(Error::parse(line_no, "expected header `h3f 1`"));
            }
            saw_header = true;
            continue;
        }
        let list = |rest: &[&str]| -> Result<Vec<String>> {
            match rest {
                ["(", inner @ .., ")"] => Ok(inner.iter().map(|s| s.to_string()).collect()),
                _ => Err(Error::parse(line_no, "expected a parenthesized list")),
            }
        };
        match (&mut current, toks.as_slice()) {
            (None, ["formula", name, rest @ ..]) => {
                let mut c = FormulaCell::new(*name);
                c.params = list(rest)?;
                current = Some(c);
            }
            (None, _) => return Err(Error::parse(line_no, "expected `formula NAME ( PARAMS )`")),
            (Some(c), ["var", name]) => c.locals.push(name.to_string()),
            (Some(c), ["clause", lits @ ..]) => {
                if lits.is_empty() || lits.len() > 3 {
                    return Err(Error::parse(line_no, "a clause has one to three literals"));
                }
                c.clauses.push(
                    lits.iter()
                        .map(|l| match l.strip_prefix('!') {
                            Some(v) => Literal {
                                var: v.to_string(),
                                negated: true,
                            },
                            None => Literal {
                                var: l.to_string(),
                                negated: false,
                            },
                        })
                        .collect(),
                );
            }
            (Some(c), ["call", callee, rest @ ..]) => {
                let Some(idx) = cells.iter().position(|d| d.name == *callee) else {
                    return Err(Error::parse(line_no, format!("unknown formula `{callee}`")));
                };
                c.calls.push(FormulaCall {
                    callee: idx,
                    args: list(rest)?,
                });
            }
            (Some(_), ["end"]) => cells.push(current.take().expect("open formula")),
            (Some(_), _) => return Err(Error::parse(line_no, format!("unrecognized line `{line}`"))),
        }
    }
    if !saw_header {
        return Err(Error::parse(1, "expected header `h3f 1`"));
    }
    if current.is_some() {
        return Err(Error::parse(last_line, "missing `end`"));
    }
    let f = HierFormula::new(cells);
    f.ensure_valid()?;
    Ok(f)
}

pub fn serialize_formula(f: &HierFormula) -> String {
    let mut out = String::from("h3f 1\n");
    for c in &f.cells {
        let _ = writeln!(out, "formula {} ( {} )", c.name, c.params.join(" "));
        for z in &c.locals {
            let _ = writeln!(out, "var {z}");
        }
        for call in &c.calls {
            let _ = writeln!(out, "call {} ( {} )", f.cells[call.callee].name, call.args.join(" "));
        }
        for clause in &c.clauses {
            let lits: Vec<String> = clause
                .iter()
                .map(|l| format!("{}{}", if l.negated { "!" } else { "" }, l.var))
                .collect();
            let _ = writeln!(out, "clause {}", lits.join(" "));
        }
        out.push_str("end\n");
    }
    out.replace("(  )", "( )")
}

/// `ceil(clauses / 2)`, the guaranteed lower bound.
pub fn half_clauses(clauses: &BigUint) -> BigUint {
    (clauses + BigUint::one()) / 2u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::expand;
    use crate::oracle::fixtures;

    fn lit(s: &str) -> Literal {
        match s.strip_prefix('!') {
            Some(v) => Literal {
                var: v.into(),
                negated: true,
            },
            None => Literal {
                var: s.into(),
                negated: false,
            },
        }
    }

    fn single(clauses: &[&[&str]], vars: &[&str]) -> HierFormula {
        let mut c = FormulaCell::new("F");
        c.locals = vars.iter().map(|v| v.to_string()).collect();
        c.clauses = clauses.iter().map(|cl| cl.iter().map(|l| lit(l)).collect()).collect();
        HierFormula::new(vec![c])
    }

    #[test]
    fn flat_examples() {
        let cnf = expand_formula(&single(&[&["x"]], &["x"]), 10).unwrap();
        assert_eq!(fmax_3sat(&cnf, &[0]), (vec![true], 1));
        let cnf = expand_formula(&single(&[&["x"], &["!x"]], &["x"]), 10).unwrap();
        assert_eq!(fmax_3sat(&cnf, &[0]), (vec![true], 1));
    }

    #[test]
    fn nested_example_has_seven_clauses() {
        let f = fixtures::nested_formula();
        assert_eq!(f.expansion_clauses(), BigUint::from(7u32));
        let cnf = expand_formula(&f, 100).unwrap();
        assert_eq!(cnf.clauses.len(), 7);
        assert!(cnf.to_text().contains("z7 z6 c2/z1\n"));
        assert!(cnf.to_text().contains("c1/z4 c1/z5 z7\n"));
        let r = hmax_3sat(&f).unwrap();
        assert!(r.heu >= BigUint::from(4u32));
        let a = flat_assignment(&cnf, &r.solution).unwrap();
        assert!(BigUint::from(cnf.satisfied(&a)) >= r.heu);
    }

    #[test]
    fn single_cell_matches_flat() {
        let f = single(&[&["x", "!y"], &["!x"], &["!x", "z"], &["y"]], &["x", "y", "z"]);
        let cnf = expand_formula(&f, 10).unwrap();
        let (value, heu) = fmax_3sat(&cnf, &[0, 1, 2]);
        let r = hmax_3sat(&f).unwrap();
        assert_eq!(r.heu, BigUint::from(heu));
        assert_eq!(flat_assignment(&cnf, &r.solution).unwrap(), value);
    }

    #[test]
    fn queries_resolve_parameters() {
        let f = fixtures::nested_formula();
        let r = hmax_3sat(&f).unwrap();
        let cnf = expand_formula(&f, 100).unwrap();
        let a = flat_assignment(&cnf, &r.solution).unwrap();
        for (v, &value) in cnf.variables.iter().zip(&a) {
            assert_eq!(query_assignment(&f, &r.solution, v).unwrap(), value);
        }
        let p: VertexPath = "c2/x1".parse().unwrap();
        assert_eq!(canonical_variable(&f, &p).unwrap().to_string(), "z7");
        let p: VertexPath = "c1/c2/x2".parse().unwrap();
        assert_eq!(canonical_variable(&f, &p).unwrap().to_string(), "c1/z5");
        assert!(query_assignment(&f, &r.solution, &"c3/z1".parse().unwrap()).is_err());
        assert!(query_assignment(&f, &r.solution, &"c1/q".parse().unwrap()).is_err());
    }

    #[test]
    fn tform_single_clause_is_a_star() {
        let spec = tform(&single(&[&["x", "y", "z"]], &["x", "y", "z"])).unwrap();
        let g = expand(&spec, 10).unwrap();
        assert_eq!(g.vertices.len(), 4);
        assert_eq!(g.edges.len(), 3);
        let k = g.vertices.iter().position(|v| v.name == "K1").unwrap();
        assert!(g.edges.iter().all(|&(a, b)| a == k || b == k));
    }

    #[test]
    fn tform_nested_example() {
        let spec = tform(&fixtures::nested_formula()).unwrap();
        assert!(spec.is_simple());
        let g = expand(&spec, 100).unwrap();
        assert_eq!(g.vertices.iter().filter(|v| v.name.starts_with('K')).count(), 7);
    }

    #[test]
    fn tform_rejects_repeated_arguments() {
        let mut f = fixtures::nested_formula();
        f.cells[2].calls[1].args = vec!["z7".into(), "z7".into()];
        assert!(expand_formula(&f, 100).is_ok());
        assert_eq!(tform(&f).unwrap_err().code(), "malformed");
    }

    #[test]
    fn instance_names_avoid_variables() {
        let mut c = FormulaCell::new("F");
        c.locals = vec!["c1".into(), "c1_".into()];
        c.calls = vec![
            FormulaCall {
                callee: 0,
                args: vec![],
            };
            2
        ];
        assert_eq!(c.instance_names(), vec!["c1__", "c2"]);
    }

    #[test]
    fn text_round_trip() {
        let f = fixtures::nested_formula();
        let text = serialize_formula(&f);
        assert_eq!(parse_formula(&text).unwrap(), f);
        assert!(text.contains("formula F3 ( )\n"));
        assert!(parse_formula("h3f 1\nformula A ( )\nclause x\nend\n").is_err());
        assert!(parse_formula("h3f 1\nformula A ( x )\nend\n").is_err());
    }
}
