// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Every command prints `KEY: value` lines first,
//! then any listing. Exit codes: 0 success, 1 finding (unwanted property,
//! incompleteness, failed verification, counterexample), 2 usage or input
//! error, 3 enumeration cap exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuit::{build_sorter, Circuit, CircuitError};
use crate::compspec::{
    check_complete, comp_spec, parse_properties, sorter_spec, write_properties, ClauseStatus,
    CompSpecConfig, CompSpecError, CompSpecOutcome, InformalOracle, Mode, Specification,
};
use crate::formula::{dimacs, Assignment, Cnf, Var, VarTable};
use crate::limits::{CapExceeded, Limits, DEFAULT_MAX_FREE};
use crate::quant::{
    clean_solution, is_pqe_solution, partial_qe, quant_eliminate, PqeProblem, QuantError,
    QuantProblem,
};
use crate::quickpqe::{quick_pqe, split_problem, QuickPqeError, QuickPqeOutcome};
use crate::seq::{
    diameter, gen_safety_property, make_inv, reachable, unroll, MakeInvOutcome, SeqError,
    SequentialCircuit,
};

/// Environment variable overriding the enumeration cap.
pub const MAX_FREE_ENV: &str = "PROPFORGE_MAX_FREE";

#[derive(Parser, Debug)]
#[command(
    name = "propforge",
    version,
    about = "Property generation by partial quantifier elimination"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tseitin-encode a netlist to DIMACS.
    Encode {
        netlist: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Simulate a netlist on one input vector.
    Simulate {
        netlist: PathBuf,
        /// Bits in input order, or `name=value,...`.
        #[arg(long)]
        input: String,
    },
    /// Eliminate all non-free variables of a CNF.
    Qe {
        cnf: PathBuf,
        #[arg(long, value_delimiter = ',')]
        free: Vec<String>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Take clauses out of the quantifier scope.
    Pqe {
        cnf: PathBuf,
        /// 0-based clause indices.
        #[arg(long, value_delimiter = ',', required = true)]
        take: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        free: Vec<String>,
        /// Drop result clauses implied by the remaining clauses.
        #[arg(long)]
        clean: bool,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Two-simulation PQE for one gate clause and one test.
    Quickpqe {
        netlist: PathBuf,
        /// 0-based index into the encoding printed by `encode`.
        #[arg(long)]
        clause: usize,
        #[arg(long)]
        test: String,
    },
    /// Grow a specification to structural completeness.
    Compspec {
        netlist: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Free variables; all inputs and outputs by default.
        #[arg(long, value_delimiter = ',')]
        free: Vec<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Expansion)]
        mode: ModeArg,
        /// Test vector for quicksplit mode; all zeros by default.
        #[arg(long)]
        test: Option<String>,
        /// Where to write the final specification.
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Check whether a specification implies the circuit's projection.
    Complete {
        netlist: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',')]
        free: Vec<String>,
    },
    /// Reachable states, within `n` steps or overall.
    Reach {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(short = 'n')]
        frames: Option<usize>,
    },
    /// Reachability diameter.
    Diameter {
        #[command(flatten)]
        machine: MachineArgs,
    },
    /// Unroll a sequential netlist into DIMACS.
    Unroll {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(short = 'n')]
        frames: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Safety property from one clause of the unrolled formula.
    Genprop {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(short = 'n')]
        frames: usize,
        #[arg(long)]
        clause: usize,
    },
    /// Relax a property until it is an invariant.
    Makeinv {
        #[command(flatten)]
        machine: MachineArgs,
        /// Property file over the state nets; all properties are conjoined.
        #[arg(long)]
        prop: PathBuf,
    },
    /// Generate an odd-even transposition sorter netlist.
    Sorter {
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        buggy: bool,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Also write the sortedness and permutation properties.
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct OracleArgs {
    /// Reference netlist deciding which behaviors are correct.
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Ask on the terminal.
    #[arg(long)]
    interactive: bool,
    /// Treat every property as wanted.
    #[arg(long)]
    accept_all: bool,
}

#[derive(Args, Debug)]
struct MachineArgs {
    netlist: PathBuf,
    /// Add the stuttering input first.
    #[arg(long)]
    stutter: bool,
    /// Property file replacing the initial-state predicate.
    #[arg(long)]
    init: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Expansion,
    Quicksplit,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Cap(CapExceeded),
    Abort,
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Abort => 2,
            Failure::Cap(_) => 3,
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<CapExceeded> for Failure {
    fn from(e: CapExceeded) -> Failure {
        Failure::Cap(e)
    }
}

impl From<QuantError> for Failure {
    fn from(e: QuantError) -> Failure {
        match e {
            QuantError::Cap(c) => Failure::Cap(c),
            e => usage(e.to_string()),
        }
    }
}

impl From<QuickPqeError> for Failure {
    fn from(e: QuickPqeError) -> Failure {
        match e {
            QuickPqeError::Cap(c) => Failure::Cap(c),
            e => usage(e.to_string()),
        }
    }
}

impl From<CompSpecError> for Failure {
    fn from(e: CompSpecError) -> Failure {
        match e {
            CompSpecError::Cap(c) => Failure::Cap(c),
            CompSpecError::Quant(q) => q.into(),
            CompSpecError::QuickPqe(q) => q.into(),
            CompSpecError::OracleAbort => Failure::Abort,
            e => usage(e.to_string()),
        }
    }
}

impl From<SeqError> for Failure {
    fn from(e: SeqError) -> Failure {
        match e {
            SeqError::Cap(c) => Failure::Cap(c),
            SeqError::Quant(q) => q.into(),
            SeqError::NoStuttering => usage(format!("{e} (use --stutter)")),
            e => usage(e.to_string()),
        }
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Failure {
        usage(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

struct Ctx<'a> {
    limits: Limits,
    stdin: &'a mut dyn BufRead,
    stderr: &'a mut dyn Write,
    interactive_ok: bool,
}

/// Runs one invocation; `args` includes the program name. Returns the exit
/// code. `interactive_ok` tells whether standard input is a terminal.
pub fn run(
    args: impl IntoIterator<Item = OsString>,
    max_free_env: Option<&str>,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    interactive_ok: bool,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let limits = match max_free_env {
        None => Limits::with_max_free(DEFAULT_MAX_FREE),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) => Limits::with_max_free(n),
            Err(_) => {
                let _ = writeln!(
                    stderr,
                    "error: {MAX_FREE_ENV} must be a non-negative integer, got `{v}`"
                );
                return 2;
            }
        },
    };
    let mut ctx = Ctx {
        limits,
        stdin,
        stderr,
        interactive_ok,
    };
    let mut buf = Vec::new();
    let result = dispatch(cli.command, &mut ctx, &mut buf);
    let _ = stdout.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => m.clone(),
                Failure::Cap(c) => format!("{c} (raise {MAX_FREE_ENV} to allow more)"),
                Failure::Abort => "aborted by user".into(),
            };
            let _ = writeln!(ctx.stderr, "error: {msg}");
            f.code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn in_file<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| usage(format!("{}: {e}", path.display()))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    Circuit::parse(&read(path)?).map_err(in_file(path))
}

fn load_cnf(path: &Path) -> Result<Cnf, Failure> {
    dimacs::parse(&read(path)?).map_err(in_file(path))
}

fn load_spec(path: &Path, table: &VarTable) -> Result<Specification, Failure> {
    parse_properties(&read(path)?, table).map_err(in_file(path))
}

fn load_machine(args: &MachineArgs) -> Result<SequentialCircuit, Failure> {
    let text = read(&args.netlist)?;
    let mut m = SequentialCircuit::parse(&text).map_err(in_file(&args.netlist))?;
    if args.stutter {
        m = m.add_stuttering()?;
    }
    if let Some(path) = &args.init {
        let init = load_spec(path, m.core().table())?.conjunction();
        m = m.with_init(init)?;
    }
    Ok(m)
}

fn resolve_var(table: &VarTable, name: &str) -> Result<Var, Failure> {
    if let Some(v) = table.lookup(name) {
        return Ok(v);
    }
    if let Some(id) = name.strip_prefix('v').and_then(|d| d.parse::<u32>().ok()) {
        if id >= 1 && table.contains(Var::new(id)) && table.name(Var::new(id)).is_none() {
            return Ok(Var::new(id));
        }
    }
    Err(usage(format!("unknown variable `{name}`")))
}

fn resolve_vars(table: &VarTable, names: &[String]) -> Result<Vec<Var>, Failure> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| resolve_var(table, n.trim()))
        .collect()
}

/// `0110` in input order, or `x1=0,x2=1`.
fn parse_vector(c: &Circuit, text: &str) -> Result<Assignment, Failure> {
    let text = text.trim();
    let mut a = Assignment::new();
    if text.contains('=') {
        for part in text.split(',') {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| usage(format!("expected name=value, got `{part}`")))?;
            let v = c
                .net(name.trim())
                .filter(|v| c.inputs().contains(v))
                .ok_or_else(|| usage(format!("`{}` is not an input", name.trim())))?;
            let b = match value.trim() {
                "0" => false,
                "1" => true,
                other => return Err(usage(format!("bad value `{other}` for `{}`", name.trim()))),
            };
            a.set(v, b);
        }
        if let Some(&missing) = c.inputs().iter().find(|&&v| a.get(v).is_none()) {
            return Err(usage(format!("no value for input `{}`", c.name(missing))));
        }
    } else {
        if text.len() != c.inputs().len() || !text.chars().all(|ch| ch == '0' || ch == '1') {
            return Err(usage(format!(
                "expected {} bits for inputs {}, got `{text}`",
                c.inputs().len(),
                names(c.table(), c.inputs())
            )));
        }
        for (&v, ch) in c.inputs().iter().zip(text.chars()) {
            a.set(v, ch == '1');
        }
    }
    Ok(a)
}

fn names(table: &VarTable, vars: &[Var]) -> String {
    vars.iter()
        .map(|&v| table.display(v))
        .collect::<Vec<_>>()
        .join(",")
}

fn print_clauses(out: Out<'_>, f: &Cnf) {
    for c in f.clauses() {
        let _ = writeln!(out, "{}", f.display_clause(c));
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "true"
    } else {
        "false"
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx<'_>, out: Out<'_>) -> Result<i32, Failure> {
    match cmd {
        Command::Encode { netlist, output } => {
            let c = load_circuit(&netlist)?;
            let enc = c.tseitin();
            let text = dimacs::write(&enc.cnf);
            match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    let _ = writeln!(out, "VARS: {}", enc.cnf.num_vars());
                    let _ = writeln!(out, "CLAUSES: {}", enc.cnf.len());
                }
                None => {
                    let _ = write!(out, "{text}");
                }
            }
            Ok(0)
        }
        Command::Simulate { netlist, input } => {
            let c = load_circuit(&netlist)?;
            let x = parse_vector(&c, &input)?;
            let sim = c.simulate(&x)?;
            let _ = writeln!(out, "INPUT: {}", x.display_with(c.table(), c.inputs()));
            let _ = writeln!(
                out,
                "OUTPUT: {}",
                sim.outputs.display_with(c.table(), c.outputs())
            );
            Ok(0)
        }
        Command::Qe { cnf, free, output } => {
            let f = load_cnf(&cnf)?;
            let free = resolve_vars(f.table(), &free)?;
            let p = QuantProblem::new(f.clone(), &free)?;
            let q = quant_eliminate(&p, &ctx.limits)?;
            // ∃W[F] ≡ Q is the PQE equation with every clause taken out
            let verified = f.is_empty()
                || is_pqe_solution(
                    &PqeProblem::new(f.clone(), (0..f.len()).collect(), &free)?,
                    &q,
                    &ctx.limits,
                )?;
            let _ = writeln!(out, "FREE: {}", names(f.table(), p.free()));
            let _ = writeln!(out, "CLAUSES: {}", q.len());
            let _ = writeln!(out, "VERIFIED: {}", verdict(verified));
            if let Some(path) = output {
                write_file(&path, &dimacs::write(&q))?;
            }
            print_clauses(out, &q);
            Ok(if verified { 0 } else { 1 })
        }
        Command::Pqe {
            cnf,
            take,
            free,
            clean,
            output,
        } => {
            let f = load_cnf(&cnf)?;
            let free = resolve_vars(f.table(), &free)?;
            let p = PqeProblem::new(f, take.into_iter().collect(), &free)?;
            let mut q = partial_qe(&p, &ctx.limits)?;
            if clean {
                q = clean_solution(&q, &p.h2());
            }
            let verified = is_pqe_solution(&p, &q, &ctx.limits)?;
            let _ = writeln!(out, "FREE: {}", names(p.formula().table(), p.free()));
            let _ = writeln!(
                out,
                "TAKE: {}",
                p.take()
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            let _ = writeln!(out, "CLAUSES: {}", q.len());
            let _ = writeln!(out, "VERIFIED: {}", verdict(verified));
            if let Some(path) = output {
                write_file(&path, &dimacs::write(&q))?;
            }
            print_clauses(out, &q);
            Ok(if verified { 0 } else { 1 })
        }
        Command::Quickpqe {
            netlist,
            clause,
            test,
        } => {
            let c = load_circuit(&netlist)?;
            let enc = c.tseitin();
            let x = parse_vector(&c, &test)?;
            let run = quick_pqe(&c, &enc, clause, &x)?;
            let sol = run.outcome.solution(&enc);
            let p = split_problem(&c, &enc, clause, &x)?;
            let verified = match is_pqe_solution(&p, &sol, &ctx.limits) {
                Ok(ok) => Some(ok),
                Err(QuantError::Cap(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let gate = &c.gates()[run.gate];
            let _ = writeln!(out, "GATE: {}", c.name(gate.output));
            let _ = writeln!(
                out,
                "WIDENED: {}",
                enc.cnf.table().display_clause(&run.widened)
            );
            let _ = writeln!(out, "GATE_EVALS: {}", run.gate_evals);
            match &run.outcome {
                QuickPqeOutcome::Redundant => {
                    let _ = writeln!(out, "RESULT: REDUNDANT");
                }
                QuickPqeOutcome::Property {
                    first_run,
                    second_run,
                    ..
                } => {
                    let _ = writeln!(out, "RESULT: PROPERTY");
                    let _ = writeln!(
                        out,
                        "FIRST_RUN: {}",
                        first_run.display_with(c.table(), c.outputs())
                    );
                    let _ = writeln!(
                        out,
                        "SECOND_RUN: {}",
                        second_run.display_with(c.table(), c.outputs())
                    );
                }
            }
            let _ = writeln!(
                out,
                "VERIFIED: {}",
                match verified {
                    Some(ok) => verdict(ok),
                    None => "skipped",
                }
            );
            print_clauses(out, &sol);
            Ok(if verified == Some(false) { 1 } else { 0 })
        }
        Command::Compspec {
            netlist,
            spec,
            oracle,
            free,
            mode,
            test,
            output,
        } => {
            let c = load_circuit(&netlist)?;
            let spec = load_spec(&spec, c.table())?;
            let free = if free.is_empty() {
                c.inputs().iter().chain(c.outputs()).copied().collect()
            } else {
                resolve_vars(c.table(), &free)?
            };
            let test = test.map(|t| parse_vector(&c, &t)).transpose()?;
            let config = CompSpecConfig {
                mode: match mode {
                    ModeArg::Expansion => Mode::Expansion,
                    ModeArg::Quicksplit => Mode::QuickSplit,
                },
                test,
                limits: ctx.limits,
            };
            let outcome = if let Some(path) = &oracle.golden {
                let mut o = InformalOracle::GoldenModel(load_circuit(path)?);
                comp_spec(&spec, &c, &free, &mut o, &config)?
            } else if oracle.interactive {
                if !ctx.interactive_ok {
                    return Err(usage("--interactive needs a terminal on standard input"));
                }
                let (stdin, stderr) = (&mut *ctx.stdin, &mut *ctx.stderr);
                let mut o =
                    InformalOracle::Interactive(Box::new(move |q: &Cnf| ask(q, stdin, stderr)));
                comp_spec(&spec, &c, &free, &mut o, &config)?
            } else {
                comp_spec(&spec, &c, &free, &mut InformalOracle::AcceptAll, &config)?
            };
            report_compspec(out, &outcome, output.as_deref())
        }
        Command::Complete {
            netlist,
            spec,
            free,
        } => {
            let c = load_circuit(&netlist)?;
            let spec = load_spec(&spec, c.table())?;
            let mut free = if free.is_empty() {
                c.inputs().iter().chain(c.outputs()).copied().collect()
            } else {
                resolve_vars(c.table(), &free)?
            };
            free.sort();
            free.dedup();
            let res = check_complete(&spec, &c, &free, &ctx.limits)?;
            let _ = writeln!(out, "COMPLETE: {}", if res.complete { "yes" } else { "no" });
            if let Some(w) = &res.witness {
                let _ = writeln!(out, "WITNESS: {}", w.display_with(c.table(), &free));
            }
            Ok(if res.complete { 0 } else { 1 })
        }
        Command::Reach { machine, frames } => {
            let m = load_machine(&machine)?;
            let r = reachable(&m, frames, &ctx.limits)?;
            let _ = writeln!(out, "STATE_VARS: {}", names(m.core().table(), &m.states()));
            let _ = writeln!(
                out,
                "FRAMES: {}",
                frames.map_or_else(|| "fixpoint".to_string(), |n| n.to_string())
            );
            let _ = writeln!(out, "COUNT: {}", r.states.len());
            let listed: Vec<String> = r.states.iter().map(|&s| m.state_bits(s)).collect();
            let _ = writeln!(out, "STATES: {}", listed.join(" "));
            let _ = writeln!(out, "CLAUSES: {}", r.formula.len());
            print_clauses(out, &r.formula);
            Ok(0)
        }
        Command::Diameter { machine } => {
            let m = load_machine(&machine)?;
            let _ = writeln!(out, "DIAMETER: {}", diameter(&m, &ctx.limits)?);
            Ok(0)
        }
        Command::Unroll {
            machine,
            frames,
            output,
        } => {
            let m = load_machine(&machine)?;
            let u = unroll(&m, frames)?;
            let text = dimacs::write(&u.with_init());
            match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    let _ = writeln!(out, "VARS: {}", u.formula.num_vars());
                    let _ = writeln!(out, "CLAUSES: {}", u.formula.len());
                    let _ = writeln!(out, "INIT_CLAUSES: {}", u.init.len());
                }
                None => {
                    let _ = write!(out, "{text}");
                }
            }
            Ok(0)
        }
        Command::Genprop {
            machine,
            frames,
            clause,
        } => {
            let m = load_machine(&machine)?;
            let q = gen_safety_property(&m, frames, clause, &ctx.limits)?;
            let _ = writeln!(out, "FRAMES: {frames}");
            let _ = writeln!(out, "CLAUSE: {clause}");
            let _ = writeln!(out, "CLAUSES: {}", q.len());
            print_clauses(out, &q);
            Ok(0)
        }
        Command::Makeinv { machine, prop } => {
            let m = load_machine(&machine)?;
            let q0 = load_spec(&prop, m.core().table())?.conjunction();
            match make_inv(&m, &q0, &ctx.limits)? {
                MakeInvOutcome::Invariant(q) => {
                    let _ = writeln!(out, "RESULT: invariant");
                    let _ = writeln!(out, "CLAUSES: {}", q.len());
                    print_clauses(out, &q);
                }
                MakeInvOutcome::Trivial => {
                    let _ = writeln!(out, "RESULT: trivial");
                }
            }
            Ok(0)
        }
        Command::Sorter {
            bits,
            count,
            buggy,
            output,
            spec_out,
        } => {
            let c = build_sorter(bits, count, buggy)?;
            let text = c.to_netlist();
            if let Some(path) = &spec_out {
                let spec = sorter_spec(&c, bits, count, &ctx.limits)?;
                write_file(path, &write_properties(&spec))?;
            }
            match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    let _ = writeln!(out, "INPUTS: {}", c.inputs().len());
                    let _ = writeln!(out, "OUTPUTS: {}", c.outputs().len());
                    let _ = writeln!(out, "GATES: {}", c.gates().len());
                }
                None => {
                    let _ = write!(out, "{text}");
                }
            }
            Ok(0)
        }
    }
}

fn ask(q: &Cnf, stdin: &mut dyn BufRead, stderr: &mut dyn Write) -> Option<bool> {
    let _ = writeln!(stderr, "PROPERTY:");
    for c in q.clauses() {
        let _ = writeln!(stderr, "  {}", q.display_clause(c));
    }
    loop {
        let _ = write!(stderr, "unwanted? [y/n] ");
        let _ = stderr.flush();
        let mut line = String::new();
        match stdin.read_line(&mut line) {
            Ok(0) | Err(_) => return None,
            Ok(_) => {}
        }
        match line.trim() {
            "y" | "Y" | "yes" => return Some(true),
            "n" | "N" | "no" => return Some(false),
            "q" | "quit" => return None,
            _ => {}
        }
    }
}

fn report_compspec(
    out: Out<'_>,
    outcome: &CompSpecOutcome,
    output: Option<&Path>,
) -> Result<i32, Failure> {
    let code = match outcome {
        CompSpecOutcome::Unwanted {
            clause,
            property,
            witness,
            ..
        } => {
            let _ = writeln!(out, "OUTCOME: unwanted");
            let _ = writeln!(out, "CLAUSE: {clause}");
            let _ = writeln!(out, "UNWANTED: {property}");
            if let Some(w) = witness {
                let _ = writeln!(out, "WITNESS: {w}");
            }
            1
        }
        CompSpecOutcome::StructurallyComplete { spec, report } => {
            let added = report
                .iter()
                .filter(|r| r.status == ClauseStatus::Added)
                .count();
            let _ = writeln!(out, "OUTCOME: structurally-complete");
            let _ = writeln!(out, "ADDED: {added}");
            if let Some(path) = output {
                write_file(path, &write_properties(spec))?;
            }
            0
        }
    };
    let report = outcome.report();
    let count = |s: ClauseStatus| report.iter().filter(|r| r.status == s).count();
    let _ = writeln!(out, "CLAUSES_PROCESSED: {}", report.len());
    let _ = writeln!(out, "IMPLIED: {}", count(ClauseStatus::Implied));
    let _ = writeln!(out, "SKIPPED: {}", count(ClauseStatus::Skipped));
    let _ = writeln!(out);
    let _ = writeln!(out, "{:>6}  {:<8}  property", "clause", "status");
    for r in report {
        let status = match r.status {
            ClauseStatus::Implied => "implied",
            ClauseStatus::Added => "added",
            ClauseStatus::Unwanted => "unwanted",
            ClauseStatus::Skipped => "skipped",
        };
        let shown = if r.status == ClauseStatus::Skipped {
            "-".to_string()
        } else {
            r.property.to_string()
        };
        let _ = writeln!(out, "{:>6}  {:<8}  {shown}", r.clause, status);
    }
    if let (CompSpecOutcome::StructurallyComplete { spec, .. }, None) = (outcome, output) {
        let _ = writeln!(out);
        let _ = write!(out, "{}", write_properties(spec));
    }
    Ok(code)
}
