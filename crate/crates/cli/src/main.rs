use std::fmt::Write as _;
use std::io::{self, BufWriter, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hierapprox::expand::{canonical, expand};
use hierapprox::hardgen::{
    eval_circuit, flat_mtg_chain, flatten_hlp, gen_hlp, gen_mtg_chain, parse_circuit, serialize_circuit, serialize_hlp,
    HierCircuit,
};
use hierapprox::hiersat::{expand_formula, hmax_3sat, parse_formula, query_assignment, serialize_formula, HierFormula};
use hierapprox::hsolution::{parse_solution, serialize_solution};
use hierapprox::indset::hind_set;
use hierapprox::maxcut::hmax_cut;
use hierapprox::oracle::{self, fixtures, SpecParams};
use hierapprox::simplify::make_simple;
use hierapprox::spec::{parse_spec, serialize_spec, stats, validate};
use hierapprox::vcover::{hvc, matching_edges};
use hierapprox::{Error, HSolution, HierSpec, VertexPath};

#[derive(Parser)]
#[command(
    name = "hierapprox",
    version,
    about = "Approximation algorithms on hierarchical specifications"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args)]
struct Opts {
    /// Largest expansion (vertices) that may be materialized.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    limit_vertices: u64,
    /// Largest formula expansion (clauses) that may be materialized.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    limit_clauses: u64,
    /// Largest circuit expansion (nodes) that may be materialized.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    limit_gates: u64,
    /// Largest hierarchy tree a streamed solution may walk.
    #[arg(long, global = true, default_value_t = 100_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    limit_nodes: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Hgs,
    Hsol,
    H3f,
    Hcirc,
    Hlp,
    Flat,
}

#[derive(Subcommand)]
enum Command {
    /// Check a specification, formula or circuit file.
    Validate { input: String },
    /// Sizes of the input and of its expansion, without expanding.
    Stats { input: String },
    /// Materialize the expansion (graph, clause list or circuit value).
    Expand { input: String },
    /// Remove pin-pin edges.
    Simplify { input: String },
    /// Approximate vertex cover: psi, then the hierarchical solution.
    Vc {
        input: String,
        #[arg(long)]
        simplify: bool,
    },
    /// Implied maximal matching: its size, then its edges.
    Mmm {
        input: String,
        #[arg(long)]
        simplify: bool,
    },
    /// Approximate max cut: the cut size, then side 1.
    Maxcut {
        input: String,
        #[arg(long)]
        simplify: bool,
    },
    /// Maximal independent set: its size, then the set.
    Mis {
        input: String,
        #[arg(long)]
        simplify: bool,
        /// Claimed maximum degree; rejected if below the real one.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Approximate MAX 3SAT: satisfied clauses, then the true variables.
    Maxsat { input: String },
    /// Membership of one vertex (or truth of one variable) in a solution.
    Query {
        input: String,
        #[arg(long)]
        solution: String,
        #[arg(long)]
        vertex: String,
    },
    /// Stream the vertices of a solution, one label per line.
    Emit { solution: String },
    /// Graft an exponentially long AND chain onto a circuit.
    GenMtg { input: String },
    /// Append a flat AND chain of length ceil(gates / epsilon).
    GenMtgFlat {
        input: String,
        /// A fraction `NUM/DEN` or an integer.
        #[arg(long, default_value = "1/2")]
        epsilon: String,
    },
    /// Translate a circuit into a hierarchical linear program.
    GenLp { input: String },
    /// Print a built-in or random fixture.
    Fixtures {
        /// chain, tower, pinpair, multi, nested-formula, two-call-circuit,
        /// random-spec, random-cf-spec, random-formula, random-circuit
        name: String,
        /// Size parameter for chain, tower and random-circuit.
        #[arg(short, default_value_t = 3)]
        k: usize,
    },
}

enum Input {
    Spec(HierSpec),
    Formula(HierFormula),
    Circuit(HierCircuit),
    Solution(HSolution),
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read_text(path: &str) -> std::result::Result<String, Failure> {
    let mut text = String::new();
    let read = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::Usage(format!("cannot read `{path}`: {e}")))?;
    Ok(text)
}

fn load(path: &str) -> std::result::Result<Input, Failure> {
    let text = read_text(path)?;
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    Ok(match header.split_whitespace().next() {
        Some("hgs") => Input::Spec(parse_spec(&text)?),
        Some("h3f") => Input::Formula(parse_formula(&text)?),
        Some("hcirc") => Input::Circuit(parse_circuit(&text)?),
        Some("hsol") => Input::Solution(parse_solution(&text)?),
        _ => return Err(Error::Malformed(format!("`{path}`: unknown file header `{header}`")).into()),
    })
}

fn wrong_kind(path: &str, want: &str) -> Failure {
    Error::Malformed(format!("`{path}` is not {want}")).into()
}

fn load_spec(path: &str, simplify: bool) -> std::result::Result<HierSpec, Failure> {
    match load(path)? {
        Input::Spec(s) if simplify => Ok(make_simple(&s)),
        Input::Spec(s) => Ok(s),
        _ => Err(wrong_kind(path, "a graph specification (hgs)")),
    }
}

fn load_circuit(path: &str) -> std::result::Result<HierCircuit, Failure> {
    match load(path)? {
        Input::Circuit(c) => Ok(c),
        _ => Err(wrong_kind(path, "a circuit (hcirc)")),
    }
}

fn check_format(got: Option<Format>, allowed: &[Format]) -> std::result::Result<Format, Failure> {
    match got {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(_) => Err(Failure::Usage("output format not available for this command".into())),
    }
}

/// Scalar line followed by the solution in the requested format.
fn solution_output(scalar: impl std::fmt::Display, sol: &HSolution, opts: &Opts) -> Outcome {
    let mut out = format!("{scalar}\n");
    match check_format(opts.format, &[Format::Hsol, Format::Flat])? {
        Format::Flat => {
            for v in sol.flatten(opts.limit_vertices)? {
                let _ = writeln!(out, "{v}");
            }
        }
        _ => out.push_str(&serialize_solution(sol)),
    }
    Ok(out)
}

fn parse_epsilon(s: &str) -> std::result::Result<(u64, u64), Failure> {
    let bad = || Failure::Usage(format!("bad epsilon `{s}`; expected NUM/DEN"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if num == 0 || den == 0 {
        return Err(bad());
    }
    Ok((num, den))
}

fn run(cli: Cli) -> Outcome {
    let opts = &cli.opts;
    match cli.command {
        Command::Validate { input } => {
            check_format(opts.format, &[Format::Flat])?;
            let problems: Vec<String> = match load(&input)? {
                Input::Spec(s) => validate(&s).iter().map(ToString::to_string).collect(),
                Input::Formula(f) => f.violations(),
                Input::Circuit(c) => c.violations(),
                Input::Solution(_) => Vec::new(),
            };
            if problems.is_empty() {
                Ok("ok\n".into())
            } else {
                Err(Error::Invalid(problems).into())
            }
        }
        Command::Stats { input } => {
            let mut out = String::new();
            match load(&input)? {
                Input::Spec(s) => {
                    let st = stats(&s);
                    let _ = writeln!(out, "cells {}", s.cells.len());
                    let _ = writeln!(out, "size {}", st.size);
                    let _ = writeln!(out, "vertex_number {}", st.n);
                    let _ = writeln!(out, "edge_number {}", st.m);
                    let _ = writeln!(out, "expansion_vertices {}", st.expansion_vertices);
                    let _ = writeln!(out, "expansion_edges {}", st.expansion_edges);
                    let _ = writeln!(out, "max_degree {}", st.max_degree);
                    let _ = writeln!(out, "tree_nodes {}", st.tree_nodes);
                    let _ = writeln!(out, "simple {}", s.is_simple());
                    let _ = writeln!(out, "one_level_restricted {}", s.is_one_level_restricted());
                }
                Input::Formula(f) => {
                    let _ = writeln!(out, "cells {}", f.cells.len());
                    let _ = writeln!(out, "size {}", f.size());
                    let _ = writeln!(out, "expansion_clauses {}", f.expansion_clauses());
                    let _ = writeln!(out, "expansion_variables {}", f.expansion_variables());
                    let _ = writeln!(out, "instances {}", f.instances());
                }
                Input::Circuit(c) => {
                    let _ = writeln!(out, "cells {}", c.cells.len());
                    let _ = writeln!(out, "size {}", c.size());
                    let _ = writeln!(out, "expansion_gates {}", c.expansion_gates());
                    let _ = writeln!(out, "expansion_nodes {}", c.expansion_nodes());
                }
                Input::Solution(sol) => {
                    let _ = writeln!(out, "cells {}", sol.cells.len());
                    let _ = writeln!(out, "selected {}", sol.selected_count());
                    let _ = writeln!(out, "tree_nodes {}", sol.tree_nodes());
                }
            }
            Ok(out)
        }
        Command::Expand { input } => {
            check_format(opts.format, &[Format::Flat])?;
            match load(&input)? {
                Input::Spec(s) => Ok(expand(&s, opts.limit_vertices)?.to_text()),
                Input::Formula(f) => Ok(expand_formula(&f, opts.limit_clauses)?.to_text()),
                Input::Circuit(c) => {
                    let v = eval_circuit(&c, opts.limit_gates)?;
                    Ok(format!(
                        "output {}\ntrue_gates {}\ngates {}\n",
                        v.output as u8, v.true_gates, v.gates
                    ))
                }
                Input::Solution(_) => Err(wrong_kind(&input, "expandable")),
            }
        }
        Command::Simplify { input } => {
            check_format(opts.format, &[Format::Hgs])?;
            Ok(serialize_spec(&load_spec(&input, true)?))
        }
        Command::Vc { input, simplify } => {
            let r = hvc(&load_spec(&input, simplify)?)?;
            solution_output(&r.psi, &r.solution, opts)
        }
        Command::Mmm { input, simplify } => {
            check_format(opts.format, &[Format::Flat])?;
            let spec = load_spec(&input, simplify)?;
            let r = hvc(&spec)?;
            let mut out = format!("{}\n", &r.psi / 2u32);
            for (a, b) in matching_edges(&spec, &r, opts.limit_nodes)? {
                let _ = writeln!(out, "{a} {b}");
            }
            Ok(out)
        }
        Command::Maxcut { input, simplify } => {
            let r = hmax_cut(&load_spec(&input, simplify)?)?;
            solution_output(&r.e, &r.solution, opts)
        }
        Command::Mis { input, simplify, bound } => {
            let r = hind_set(&load_spec(&input, simplify)?, bound)?;
            solution_output(&r.size, &r.solution, opts)
        }
        Command::Maxsat { input } => match load(&input)? {
            Input::Formula(f) => {
                let r = hmax_3sat(&f)?;
                solution_output(&r.heu, &r.solution, opts)
            }
            _ => Err(wrong_kind(&input, "a formula (h3f)")),
        },
        Command::Query {
            input,
            solution,
            vertex,
        } => {
            let path: VertexPath = vertex
                .parse()
                .map_err(|_| Failure::Usage(format!("bad vertex path `{vertex}`")))?;
            let sol = match load(&solution)? {
                Input::Solution(s) => s,
                _ => return Err(wrong_kind(&solution, "a solution (hsol)")),
            };
            let hit = match load(&input)? {
                Input::Spec(s) => sol.query(&canonical(&s, &path)?)?,
                Input::Formula(f) => query_assignment(&f, &sol, &path)?,
                _ => return Err(wrong_kind(&input, "a specification or formula")),
            };
            Ok(format!("{hit}\n"))
        }
        Command::Emit { solution } => {
            let sol = match load(&solution)? {
                Input::Solution(s) => s,
                _ => return Err(wrong_kind(&solution, "a solution (hsol)")),
            };
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let mut io_err = None;
            sol.stream(opts.limit_nodes, |v| {
                if io_err.is_none() {
                    if let Err(e) = writeln!(w, "{v}") {
                        io_err = Some(e);
                    }
                }
            })?;
            if let Some(e) = io_err.or_else(|| w.flush().err()) {
                return Err(Failure::Usage(format!("write failed: {e}")));
            }
            Ok(String::new())
        }
        Command::GenMtg { input } => {
            check_format(opts.format, &[Format::Hcirc])?;
            let m = gen_mtg_chain(&load_circuit(&input)?)?;
            Ok(format!(
                "# chain_length {}\n{}",
                m.chain_length,
                serialize_circuit(&m.circuit)
            ))
        }
        Command::GenMtgFlat { input, epsilon } => {
            check_format(opts.format, &[Format::Hcirc])?;
            let (num, den) = parse_epsilon(&epsilon)?;
            Ok(serialize_circuit(&flat_mtg_chain(&load_circuit(&input)?, num, den)?))
        }
        Command::GenLp { input } => {
            let lp = gen_hlp(&load_circuit(&input)?)?;
            match check_format(opts.format, &[Format::Hlp, Format::Flat])? {
                Format::Flat => Ok(flatten_hlp(&lp, opts.limit_vertices)?.to_text()),
                _ => Ok(serialize_hlp(&lp)),
            }
        }
        Command::Fixtures { name, k } => fixture(&name, k, opts.seed),
    }
}

fn fixture(name: &str, k: usize, seed: u64) -> Outcome {
    let sized = |what: &str| {
        if k == 0 {
            Err(Failure::Usage(format!("{what} needs -k of at least 1")))
        } else {
            Ok(())
        }
    };
    Ok(match name {
        "chain" => {
            sized(name)?;
            serialize_spec(&fixtures::chain(k))
        }
        "tower" => {
            sized(name)?;
            serialize_spec(&fixtures::tower(k))
        }
        "pinpair" => serialize_spec(&fixtures::pinpair()),
        "multi" => serialize_spec(&fixtures::multi1()),
        "nested-formula" => serialize_formula(&fixtures::nested_formula()),
        "two-call-circuit" => serialize_circuit(&fixtures::two_call_circuit()),
        "random-spec" => serialize_spec(&oracle::random_simple_spec(seed, &SpecParams::default())),
        "random-cf-spec" => serialize_spec(&oracle::random_collision_free_spec(seed, &SpecParams::default())),
        "random-formula" => serialize_formula(&oracle::random_formula(seed, 500)),
        "random-circuit" => {
            sized(name)?;
            serialize_circuit(&oracle::random_circuit(seed, k))
        }
        _ => return Err(Failure::Usage(format!("unknown fixture `{name}`"))),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.code());
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: usage: {msg}");
            ExitCode::from(2)
        }
    }
}
