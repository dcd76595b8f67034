//! Command-line interface for the idempotent linear logic workbench.
//!
//! Exit codes: 0 success / positive verdict, 1 negative verdict (proof
//! rejected, goal not proved, law failed, fuel exhausted), 2 usage or
//! input error.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use idll_core::bridge::{
    enumerate_cutfree, idll_to_ll, ll_to_idll, provable, EnumOptions, Provability, SearchBounds,
};
use idll_core::calculus::{AxiomMode, Logic, System};
use idll_core::corpus::{cut_corpus, semantic_envs};
use idll_core::cutelim::{default_fuel, normalize, CutElimError};
use idll_core::laws::{standard_bundle, LawOutcome};
use idll_core::semantics::{interpret, soundness_suite, Environment};
use idll_core::sexpr::{parse_proof, print_proof, print_proof_line};
use idll_core::syntax::{parse_sequent, Sequent};
use idll_core::totspace::{
    bang, make_space, par, plus, tensor, units, whynot, with, Atom, AtomSet, Caps, SpaceError,
    TotSpace, TotalFamily,
};
use idll_core::Proof;

#[derive(Parser)]
#[command(
    name = "idll",
    version,
    about = "Idempotent linear logic workbench: proof checking, cut elimination, \
             proof translation and counting, bounded search, and a finite \
             totality-space model"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Ll,
    Idll,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxiomArg {
    General,
    Atomic,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FormatArg {
    Text,
    Machine,
}

fn system_of(s: SystemArg, a: AxiomArg) -> System {
    System {
        logic: match s {
            SystemArg::Ll => Logic::LL,
            SystemArg::Idll => Logic::IdLL,
        },
        axiom_mode: match a {
            AxiomArg::General => AxiomMode::General,
            AxiomArg::Atomic => AxiomMode::Atomic,
        },
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a proof file against a system
    Check {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long, value_enum, default_value = "general")]
        axiom: AxiomArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Proof file in the s-expression format ('-' for stdin)
        file: PathBuf,
    },
    /// Eliminate all cuts from a proof
    Normalize {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long, value_enum, default_value = "general")]
        axiom: AxiomArg,
        /// Step budget; defaults to 2^(proof size)
        #[arg(long)]
        fuel: Option<u64>,
        /// Print one line per reduction step
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        file: PathBuf,
    },
    /// Translate a proof into the other system
    Translate {
        /// Target system; the proof is checked in the opposite one
        #[arg(long, value_enum)]
        to: SystemArg,
        /// Normalize away the emulation cuts afterwards
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        file: PathBuf,
    },
    /// Count the cut-free proofs of a sequent (atomic axioms, modulo Exchange)
    Count {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long, default_value_t = 64)]
        max_nodes: usize,
        /// Include Weakening and Contraction (such counts are never exact)
        #[arg(long)]
        structural: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Goal sequent, e.g. "|- ??p0^, !!p0"
        sequent: String,
    },
    /// Bounded backward provability search
    Prove {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long, value_enum, default_value = "atomic")]
        axiom: AxiomArg,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Contraction applications per formula per branch
        #[arg(long, default_value_t = 2)]
        contraction_bound: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        sequent: String,
    },
    /// Totality-space model operations
    Model {
        #[command(subcommand)]
        cmd: ModelCmd,
    },
    /// Interpret a checked proof in a totality-space environment
    Interp {
        #[arg(long)]
        env: PathBuf,
        #[arg(long, value_enum, default_value = "idll")]
        system: SystemArg,
        #[arg(long, value_enum, default_value = "general")]
        axiom: AxiomArg,
        #[arg(long, default_value_t = 16)]
        max_base: usize,
        #[arg(long, default_value_t = 12)]
        max_bang_totals: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        file: PathBuf,
    },
    /// Run the semantic soundness suite over a generated corpus
    Soundness {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Validate a space description file (biclosure check)
    Build {
        #[arg(long, default_value_t = 16)]
        max_base: usize,
        file: PathBuf,
    },
    /// Apply an operation to space files: dual, bang, whynot take one file;
    /// tensor, par, with, plus take two
    Apply {
        #[arg(long, default_value_t = 16)]
        max_base: usize,
        #[arg(long, default_value_t = 12)]
        max_bang_totals: usize,
        op: String,
        files: Vec<PathBuf>,
    },
    /// Verify the law bundles, printing a pass/fail report
    Laws {
        #[arg(long, default_value_t = 3)]
        max_base: usize,
        #[arg(long, default_value_t = 50)]
        random: usize,
        #[arg(long, default_value_t = 300)]
        pair_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

/// Input or usage problem: exit code 2.
struct InputError(String);

fn input_err(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

fn read_input(path: &Path) -> Result<String, InputError> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| input_err(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
    }
}

fn load_proof(path: &Path) -> Result<Proof, InputError> {
    let text = read_input(path)?;
    parse_proof(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn parse_space_text(text: &str, what: &str) -> Result<(AtomSet, TotalFamily), InputError> {
    let mut base: Option<AtomSet> = None;
    let mut totals = TotalFamily::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("atoms") => {
                if base.is_some() {
                    return Err(input_err(format!("{what}:{}: duplicate atoms line", lineno + 1)));
                }
                base = Some(words.map(Atom::name).collect());
            }
            Some("total") => {
                totals.insert(words.map(Atom::name).collect());
            }
            Some(other) => {
                return Err(input_err(format!(
                    "{what}:{}: expected 'atoms' or 'total', got '{other}'",
                    lineno + 1
                )));
            }
            None => unreachable!(),
        }
    }
    let base = base.ok_or_else(|| input_err(format!("{what}: missing 'atoms' line")))?;
    for t in &totals {
        for a in t {
            if !base.contains(a) {
                return Err(input_err(format!("{what}: total set uses unknown atom '{a}'")));
            }
        }
    }
    Ok((base, totals))
}

fn load_space(path: &Path, caps: Caps) -> Result<TotSpace, InputError> {
    let text = read_input(path)?;
    let (base, totals) = parse_space_text(&text, &path.display().to_string())?;
    match make_space(base, totals, caps) {
        Ok(space) => Ok(space),
        Err(SpaceError::NotBiclosed { .. }) => Err(input_err(format!(
            "{}: space is not biclosed (run 'model build' for the bidual report)",
            path.display()
        ))),
        Err(e) => Err(input_err(format!("{}: {e}", path.display()))),
    }
}

/// Environment file: one line per literal, `p<i> dis <n>`,
/// `p<i> one|bot|top|zero`, or `p<i> file <path>` (relative to the file).
fn load_env(path: &Path, caps: Caps) -> Result<Environment, InputError> {
    let text = read_input(path)?;
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let mut env = Environment::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err =
            |msg: &str| input_err(format!("{}:{}: {msg}", path.display(), lineno + 1));
        let words: Vec<&str> = line.split_whitespace().collect();
        let index: u32 = words[0]
            .strip_prefix('p')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("expected a literal like 'p0'"))?;
        let space = match words.get(1) {
            Some(&"dis") => {
                let n: usize = words
                    .get(2)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("expected a size after 'dis'"))?;
                TotSpace::discrete(n)
            }
            Some(&"one") | Some(&"bot") => units().0,
            Some(&"top") => units().2,
            Some(&"zero") => units().3,
            Some(&"file") => {
                let rel = words.get(2).ok_or_else(|| err("expected a path after 'file'"))?;
                load_space(&dir.join(rel), caps)?
            }
            _ => return Err(err("expected 'dis N', 'one', 'bot', 'top', 'zero' or 'file PATH'")),
        };
        env.assign(index, space);
    }
    Ok(env)
}

fn parse_goal(text: &str) -> Result<Sequent, InputError> {
    parse_sequent(text).map_err(|e| input_err(format!("sequent: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, InputError> {
    match cmd {
        Cmd::Check { system, axiom, format, file } => {
            let sys = system_of(system, axiom);
            let proof = load_proof(&file)?;
            match proof.check(sys) {
                Ok(()) => {
                    match format {
                        FormatArg::Text => println!("ok"),
                        FormatArg::Machine => println!("status=ok"),
                    }
                    Ok(0)
                }
                Err(e) => {
                    match format {
                        FormatArg::Text => println!("rejected: {e}"),
                        FormatArg::Machine => {
                            println!("status=error");
                            println!("path={}", idll_core::calculus::path_string(&e.path));
                            println!("rule={}", e.rule);
                            println!("reason={}", e.reason);
                            println!("detail={}", e.detail);
                        }
                    }
                    Ok(1)
                }
            }
        }
        Cmd::Normalize { system, axiom, fuel, trace, format, file } => {
            let sys = system_of(system, axiom);
            let proof = load_proof(&file)?;
            let fuel = fuel.unwrap_or_else(|| default_fuel(&proof));
            match normalize(&proof, sys, fuel) {
                Ok(t) => {
                    match format {
                        FormatArg::Text => {
                            if trace {
                                for step in &t.steps {
                                    println!("step: {step}");
                                }
                            }
                            println!("{}", print_proof(&t.final_proof));
                        }
                        FormatArg::Machine => {
                            println!("status=ok");
                            println!("steps={}", t.steps.len());
                            if trace {
                                for (i, step) in t.steps.iter().enumerate() {
                                    println!("step.{i}={step}");
                                }
                            }
                            println!("proof={}", print_proof_line(&t.final_proof));
                        }
                    }
                    Ok(0)
                }
                Err(CutElimError::Check(e)) => {
                    println!("rejected: {e}");
                    Ok(1)
                }
                Err(CutElimError::FuelExhausted { trace: t }) => {
                    match format {
                        FormatArg::Text => println!("fuel exhausted after {} steps", t.steps.len()),
                        FormatArg::Machine => {
                            println!("status=fuel-exhausted");
                            println!("steps={}", t.steps.len());
                        }
                    }
                    Ok(1)
                }
                Err(e) => Err(input_err(e.to_string())),
            }
        }
        Cmd::Translate { to, normalize: norm, fuel, format, file } => {
            let proof = load_proof(&file)?;
            let (source, target) = match to {
                SystemArg::Ll => (System::idll(), System::ll()),
                SystemArg::Idll => (System::ll(), System::idll()),
            };
            if let Err(e) = proof.check(source) {
                println!("rejected: {e}");
                return Ok(1);
            }
            let translated = match to {
                SystemArg::Ll => idll_to_ll(&proof),
                SystemArg::Idll => ll_to_idll(&proof),
            }
            .map_err(|e| input_err(e.to_string()))?;
            let result = if norm {
                let fuel = fuel.unwrap_or_else(|| default_fuel(&translated));
                match normalize(&translated, target, fuel) {
                    Ok(t) => t.final_proof,
                    Err(CutElimError::FuelExhausted { trace }) => {
                        println!("fuel exhausted after {} steps", trace.steps.len());
                        return Ok(1);
                    }
                    Err(e) => return Err(input_err(e.to_string())),
                }
            } else {
                translated
            };
            match format {
                FormatArg::Text => println!("{}", print_proof(&result)),
                FormatArg::Machine => {
                    println!("status=ok");
                    println!("proof={}", print_proof_line(&result));
                }
            }
            Ok(0)
        }
        Cmd::Count { system, max_nodes, structural, format, sequent } => {
            let sys = system_of(system, AxiomArg::Atomic);
            let goal = parse_goal(&sequent)?;
            let opts = EnumOptions { max_nodes, include_structural: structural };
            let e = enumerate_cutfree(&goal, sys, &opts).map_err(|e| input_err(e.to_string()))?;
            let flag = if e.exact { "exact" } else { "bounded" };
            match format {
                FormatArg::Text => println!("{} {}", e.proofs.len(), flag),
                FormatArg::Machine => {
                    println!("count={}", e.proofs.len());
                    println!("flag={flag}");
                }
            }
            Ok(0)
        }
        Cmd::Prove { system, axiom, depth, contraction_bound, format, sequent } => {
            let sys = system_of(system, axiom);
            let goal = parse_goal(&sequent)?;
            let bounds = SearchBounds { depth, contraction_per_formula: contraction_bound };
            let verdict = provable(&goal, sys, &bounds).map_err(|e| input_err(e.to_string()))?;
            match format {
                FormatArg::Text => {
                    println!("{}", verdict.verdict());
                    if let Provability::Yes(p) = &verdict {
                        println!("{}", print_proof(p));
                    }
                }
                FormatArg::Machine => {
                    println!("verdict={}", verdict.verdict());
                    if let Provability::Yes(p) = &verdict {
                        println!("proof={}", print_proof_line(p));
                    }
                }
            }
            Ok(match verdict {
                Provability::Yes(_) => 0,
                _ => 1,
            })
        }
        Cmd::Model { cmd } => run_model(cmd),
        Cmd::Interp { env, system, axiom, max_base, max_bang_totals, format, file } => {
            let caps = Caps { max_base, max_bang_totals };
            let sys = system_of(system, axiom);
            let proof = load_proof(&file)?;
            if let Err(e) = proof.check(sys) {
                println!("rejected: {e}");
                return Ok(1);
            }
            let environment = load_env(&env, caps)?;
            match interpret(&proof, &environment, caps) {
                Ok(d) => {
                    for t in &d.value {
                        let items: Vec<String> = t.iter().map(|a| a.to_string()).collect();
                        match format {
                            FormatArg::Text => println!("({})", items.join(", ")),
                            FormatArg::Machine => println!("tuple=({})", items.join(",")),
                        }
                    }
                    match format {
                        FormatArg::Text => println!("total"),
                        FormatArg::Machine => println!("total=yes"),
                    }
                    Ok(0)
                }
                Err(e) => {
                    match format {
                        FormatArg::Text => println!("not total: {e}"),
                        FormatArg::Machine => {
                            println!("total=no");
                            println!("detail={e}");
                        }
                    }
                    Ok(1)
                }
            }
        }
        Cmd::Soundness { seed, count, format } => {
            let corpus = cut_corpus(seed, count);
            let envs = semantic_envs();
            let report = soundness_suite(&corpus, &envs, Caps::default());
            match format {
                FormatArg::Text => {
                    println!(
                        "proofs={} envs={} totality-checks={} step-checks={} failures={}",
                        corpus.len(),
                        envs.len(),
                        report.totality_checks,
                        report.step_checks,
                        report.failures.len()
                    );
                    for f in &report.failures {
                        println!(
                            "failure: proof {} env {} {} {}",
                            f.proof,
                            f.env,
                            f.step.as_ref().map(|s| s.to_string()).unwrap_or_default(),
                            f.detail
                        );
                    }
                }
                FormatArg::Machine => {
                    println!("proofs={}", corpus.len());
                    println!("envs={}", envs.len());
                    println!("totality_checks={}", report.totality_checks);
                    println!("step_checks={}", report.step_checks);
                    println!("failures={}", report.failures.len());
                    for (i, f) in report.failures.iter().enumerate() {
                        println!("failure.{i}=proof:{} env:{} {}", f.proof, f.env, f.detail);
                    }
                }
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn run_model(cmd: ModelCmd) -> Result<u8, InputError> {
    match cmd {
        ModelCmd::Build { max_base, file } => {
            let caps = Caps { max_base, ..Caps::default() };
            let text = read_input(&file)?;
            let (base, totals) = parse_space_text(&text, &file.display().to_string())?;
            match make_space(base, totals, caps) {
                Ok(space) => {
                    println!("{space}");
                    Ok(0)
                }
                Err(SpaceError::NotBiclosed { bidual }) => {
                    println!("not-biclosed");
                    for t in &bidual {
                        let items: Vec<String> = t.iter().map(|a| a.to_string()).collect();
                        println!("bidual-total {}", items.join(" "));
                    }
                    Ok(1)
                }
                Err(e) => Err(input_err(e.to_string())),
            }
        }
        ModelCmd::Apply { max_base, max_bang_totals, op, files } => {
            let caps = Caps { max_base, max_bang_totals };
            let arity = match op.as_str() {
                "dual" | "bang" | "whynot" => 1,
                "tensor" | "par" | "with" | "plus" => 2,
                other => return Err(input_err(format!("unknown operation '{other}'"))),
            };
            if files.len() != arity {
                return Err(input_err(format!("'{op}' takes {arity} space file(s)")));
            }
            let a = load_space(&files[0], caps)?;
            let result = match op.as_str() {
                "dual" => a.dual(caps),
                "bang" => bang(&a, caps),
                "whynot" => whynot(&a, caps),
                _ => {
                    let b = load_space(&files[1], caps)?;
                    match op.as_str() {
                        "tensor" => tensor(&a, &b, caps),
                        "par" => par(&a, &b, caps),
                        "with" => with(&a, &b, caps),
                        "plus" => plus(&a, &b, caps),
                        _ => unreachable!(),
                    }
                }
            }
            .map_err(|e| input_err(e.to_string()))?;
            println!("{result}");
            Ok(0)
        }
        ModelCmd::Laws { max_base, random, pair_samples, seed, format } => {
            let caps = Caps::default();
            let reports = standard_bundle(max_base, random, pair_samples, seed, caps)
                .map_err(|e| input_err(e.to_string()))?;
            let failures = reports.iter().filter(|r| r.failed()).count();
            match format {
                FormatArg::Text => {
                    for r in &reports {
                        println!("{r}");
                    }
                    println!("{} laws, {} failures", reports.len(), failures);
                }
                FormatArg::Machine => {
                    for r in &reports {
                        let (outcome, detail) = match &r.outcome {
                            LawOutcome::Pass => ("pass", String::new()),
                            LawOutcome::Fail { witness } => ("fail", witness.clone()),
                            LawOutcome::Skipped { reason } => ("skipped", reason.clone()),
                        };
                        if detail.is_empty() {
                            println!("law={} outcome={outcome}", r.name);
                        } else {
                            println!("law={} outcome={outcome} detail={detail}", r.name);
                        }
                    }
                    println!("laws={}", reports.len());
                    println!("failures={failures}");
                }
            }
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}
