//! `copat`: evaluate, trace, desugar, format and cross-check copattern
//! programs.

use std::fmt::Display;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use copat_core::comp::machine as comp_machine;
use copat_core::encodings::desugar;
use copat_core::environment::{comp_machine as env_comp_machine, mono_machine as env_mono_machine};
use copat_core::frontend::{parse_comp, parse_mono, parser, pretty, resolve_comp, resolve_mono, Calculus};
use copat_core::harness::{diff_check, eval_comp, eval_mono, with_big_stack, CheckConfig, Semantics};
use copat_core::mono::machine as mono_machine;
use copat_core::syntax::CompResponse;
use copat_core::EvalError;

const DEFAULT_FUEL: &str = "100000";

const EXIT_PARSE: u8 = 1;
const EXIT_FUEL: u8 = 2;
const EXIT_DIFF: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "copat", version, about = "Copattern calculi workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program and print its answer.
    Eval(EvalArgs),
    /// Run generated programs through every evaluator and compare answers.
    Check(CheckArgs),
    /// Translate a monolithic program into the compositional calculus.
    Desugar { file: PathBuf },
    /// Pretty-print a program.
    Fmt(FmtArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CalculusArg {
    Mono,
    Comp,
}

impl From<CalculusArg> for Calculus {
    fn from(c: CalculusArg) -> Self {
        match c {
            CalculusArg::Mono => Calculus::Mono,
            CalculusArg::Comp => Calculus::Comp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Smallstep,
    Machine,
    Cps,
    EnvMachine,
    EnvCps,
    EnvSmallstep,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Smallstep => Semantics::SmallStep,
            SemanticsArg::Machine => Semantics::Machine,
            SemanticsArg::Cps => Semantics::Cps,
            SemanticsArg::EnvMachine => Semantics::EnvMachine,
            SemanticsArg::EnvCps => Semantics::EnvCps,
            SemanticsArg::EnvSmallstep => Semantics::EnvSmallStep,
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    file: PathBuf,
    /// Defaults to the one implied by the file extension.
    #[arg(long, value_enum)]
    calculus: Option<CalculusArg>,
    #[arg(long, value_enum, default_value = "machine")]
    semantics: SemanticsArg,
    #[arg(long, env = "COPAT_FUEL", default_value = DEFAULT_FUEL, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    /// Write every machine state to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    calculus: CalculusArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    cases: u64,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    size: u64,
    #[arg(long, env = "COPAT_FUEL", default_value = DEFAULT_FUEL, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
}

#[derive(Args)]
struct FmtArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    calculus: Option<CalculusArg>,
    /// Rewrite the file instead of printing it.
    #[arg(long)]
    in_place: bool,
}

/// A failed command: message for stderr and exit status.
struct Failure(String, u8);

type Outcome = Result<(), Failure>;

fn usage(msg: impl Display) -> Failure {
    Failure(format!("error: {msg}"), EXIT_USAGE)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("error: cannot read {}: {e}", path.display()), EXIT_PARSE))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure(format!("error: cannot write {}: {e}", path.display()), EXIT_PARSE))
}

fn calculus_of(path: &Path, arg: Option<CalculusArg>) -> Result<Calculus, Failure> {
    arg.map(Calculus::from)
        .or_else(|| Calculus::from_path(path))
        .ok_or_else(|| usage(format!("cannot tell the calculus of {}; pass --calculus", path.display())))
}

fn syntax_error(path: &Path, e: impl Display) -> Failure {
    Failure(format!("{}: {e}", path.display()), EXIT_PARSE)
}

fn eval_error(e: EvalError) -> Failure {
    match e {
        EvalError::FuelExhausted => Failure("fuel-exhausted".into(), EXIT_FUEL),
        e => Failure(format!("internal error: {e}"), EXIT_INTERNAL),
    }
}

/// Trace lines `#n: state`, numbered from the initial state.
struct Trace {
    out: BufWriter<fs::File>,
    path: PathBuf,
    next: usize,
    error: Option<io::Error>,
}

impl Trace {
    fn create(path: &Path) -> Result<Self, Failure> {
        let file = fs::File::create(path)
            .map_err(|e| Failure(format!("error: cannot write {}: {e}", path.display()), EXIT_PARSE))?;
        Ok(Trace { out: BufWriter::new(file), path: path.to_path_buf(), next: 0, error: None })
    }

    fn line(&mut self, state: &impl Display) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "#{}: {state}", self.next) {
                self.error = Some(e);
            }
        }
        self.next += 1;
    }

    fn finish(mut self) -> Outcome {
        let flushed = self.out.flush();
        match self.error.map_or(flushed, Err) {
            Ok(()) => Ok(()),
            Err(e) => Err(Failure(format!("error: cannot write {}: {e}", self.path.display()), EXIT_PARSE)),
        }
    }
}

fn eval(args: EvalArgs) -> Outcome {
    let calculus = calculus_of(&args.file, args.calculus)?;
    let sem = Semantics::from(args.semantics);
    if !sem.supports(calculus) {
        return Err(usage(format!("semantics {sem} is not available for the {calculus} calculus")));
    }
    let mut trace = match &args.trace {
        Some(path) if matches!(sem, Semantics::Machine | Semantics::EnvMachine) => Some(Trace::create(path)?),
        Some(_) => return Err(usage("--trace needs --semantics machine or env-machine")),
        None => None,
    };
    let src = read(&args.file)?;
    let answer = match calculus {
        Calculus::Mono => {
            let m = parse_mono(&src).map_err(|e| syntax_error(&args.file, e))?;
            match (&mut trace, sem) {
                (Some(t), Semantics::Machine) => {
                    mono_machine::run_observed(&m, args.fuel, |_, s| t.line(s)).map(|a| a.canonical().to_string())
                }
                (Some(t), _) => {
                    env_mono_machine::run_observed(&m, args.fuel, |_, s| t.line(s)).map(|a| a.canonical().to_string())
                }
                (None, _) => eval_mono(sem, &m, args.fuel).map(|a| a.to_string()),
            }
        }
        Calculus::Comp => {
            let r = parse_comp(&src).map_err(|e| syntax_error(&args.file, e))?;
            match (&mut trace, sem) {
                (Some(t), Semantics::Machine) => {
                    comp_machine::run_observed(&r, args.fuel, |_, s| t.line(s)).map(|a| a.canonical().to_string())
                }
                (Some(t), _) => {
                    env_comp_machine::run_observed(&r, args.fuel, |_, s| t.line(s)).map(|a| a.canonical().to_string())
                }
                (None, _) => eval_comp(sem, &r, args.fuel).map(|a| a.to_string()),
            }
        }
    };
    if let Some(t) = trace {
        t.finish()?;
    }
    println!("{}", answer.map_err(eval_error)?);
    Ok(())
}

fn check(args: CheckArgs) -> Outcome {
    let size = usize::try_from(args.size).map_err(|_| usage("--size is too large"))?;
    let cfg = CheckConfig::new(args.calculus.into(), args.seed, args.cases, size, args.fuel);
    let report = diff_check(&cfg);
    println!("{report}");
    print!("{}", report.jsonl());
    if report.ok() {
        Ok(())
    } else {
        Err(Failure(String::new(), EXIT_DIFF))
    }
}

fn desugar_file(file: PathBuf) -> Outcome {
    let src = read(&file)?;
    let m = parse_mono(&src).map_err(|e| syntax_error(&file, e))?;
    let report = desugar(&m);
    println!("{}", pretty::comp_response(&CompResponse::and_then(report.output, CompResponse::end())));
    if report.may_under {
        eprintln!("note: the source has nonempty copatterns; where it would stop under-applied, the translation falls through to the next option");
    }
    Ok(())
}

fn fmt(args: FmtArgs) -> Outcome {
    let calculus = calculus_of(&args.file, args.calculus)?;
    let src = read(&args.file)?;
    // Keep the user's binder names: resolution only validates.
    let text = match calculus {
        Calculus::Mono => {
            let m = parser::mono(&src).map_err(|e| syntax_error(&args.file, e))?;
            resolve_mono(&m).map_err(|e| syntax_error(&args.file, e))?;
            pretty::mono_term(&m)
        }
        Calculus::Comp => {
            let r = parser::comp(&src).map_err(|e| syntax_error(&args.file, e))?;
            resolve_comp(&r).map_err(|e| syntax_error(&args.file, e))?;
            pretty::comp_response(&r)
        }
    };
    if args.in_place {
        write(&args.file, &format!("{text}\n"))
    } else {
        println!("{text}");
        Ok(())
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Eval(args) => eval(args),
        Command::Check(args) => check(args),
        Command::Desugar { file } => desugar_file(file),
        Command::Fmt(args) => fmt(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    // Evaluators recurse over term structure and drop long closure chains.
    match with_big_stack(move || run(cli).err().map(|Failure(msg, code)| (msg, code))) {
        None => ExitCode::SUCCESS,
        Some((msg, code)) => {
            if !msg.is_empty() {
                if code == EXIT_FUEL {
                    println!("{msg}");
                } else {
                    eprintln!("{msg}");
                }
            }
            ExitCode::from(code)
        }
    }
}
