use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qproj::certify::{construct_lift, verify_triple, witness};
use qproj::decide::{decide, GeometryMode};
use qproj::enumerate::enumerate_class;
use qproj::error::Error;
use qproj::format::{
    parse_mapping, parse_structure, print_mapping, print_structure, render_oracle_report, render_verdict,
    render_witness,
};
use qproj::hom::find_lift;
use qproj::oracle::{oracle, verify_class, OracleOptions};
use qproj::structures::{FiniteStructure, StructureKind};

const EXIT_NOT_QP: u8 = 10;

#[derive(Parser)]
#[command(name = "qproj", version, about = "Quasi-projectivity of finite relational structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide with the characterization for the structure's kind.
    Decide {
        file: PathBuf,
        #[arg(long, default_value_t = GeometryMode::Strict)]
        mode: GeometryMode,
    },
    /// Decide from the definition by exhaustive search.
    Oracle {
        file: PathBuf,
        /// Largest target size examined (defaults to the structure's size).
        #[arg(long)]
        max_target_size: Option<usize>,
        #[arg(long, env = "QPROJ_JOBS", default_value_t = 1)]
        jobs: usize,
    },
    /// Print a verified counterexample triple for a structure that is not
    /// quasi-projective.
    Witness {
        file: PathBuf,
        #[arg(long, default_value_t = GeometryMode::Strict)]
        mode: GeometryMode,
        /// Also write target.txt, f.map and j.map here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Find φ with j(φ(x)) = f(x) for maps f, j from SOURCE onto TARGET.
    Lift {
        source: PathBuf,
        target: PathBuf,
        f: PathBuf,
        j: PathBuf,
        /// Use the direct construction for quasi-projective sources instead
        /// of search.
        #[arg(long)]
        construct: bool,
    },
    /// Print one structure per isomorphism class.
    Enumerate {
        #[arg(long)]
        kind: StructureKind,
        #[arg(long)]
        n: usize,
    },
    /// Compare the characterization against the oracle on all classes up to
    /// a size.
    Verify {
        #[arg(long)]
        kind: StructureKind,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = GeometryMode::Strict)]
        mode: GeometryMode,
        #[arg(long, env = "QPROJ_JOBS", default_value_t = 1)]
        jobs: usize,
    },
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BoundExceeded { .. } => 3,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load(path: &Path) -> Result<FiniteStructure, Failure> {
    let s = parse_structure(&read(path)?)?;
    if let Err(violation) = s.validate() {
        return Err(Error::Invalid { kind: s.kind(), violation }.into());
    }
    Ok(s)
}

fn verdict_code(qp: bool) -> u8 {
    if qp {
        0
    } else {
        EXIT_NOT_QP
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Decide { file, mode } => {
            let v = decide(&load(&file)?, mode)?;
            print!("{}", render_verdict(&v));
            Ok(verdict_code(v.qp))
        }
        Command::Oracle { file, max_target_size, jobs } => {
            let s = load(&file)?;
            let opts = OracleOptions { max_target_size, jobs: jobs.max(1), ..OracleOptions::default() };
            let report = oracle(&s, &opts)?;
            print!("{}", render_oracle_report(&report));
            Ok(verdict_code(report.qp))
        }
        Command::Witness { file, mode, out_dir } => {
            let s = load(&file)?;
            let w = witness(&s, mode)?;
            verify_triple(&s, &w.triple)?;
            if let Some(dir) = out_dir {
                let write = |name: &str, text: String| {
                    let path = dir.join(name);
                    fs::write(&path, text).map_err(|e| Failure::Io(path, e))
                };
                fs::create_dir_all(&dir).map_err(|e| Failure::Io(dir.clone(), e))?;
                write("target.txt", print_structure(&w.triple.target))?;
                write("f.map", print_mapping(&w.triple.f))?;
                write("j.map", print_mapping(&w.triple.j))?;
            }
            print!("{}", render_witness(&w));
            Ok(0)
        }
        Command::Lift { source, target, f, j, construct } => {
            let s = load(&source)?;
            let t = load(&target)?;
            let f = parse_mapping(&read(&f)?, s.len(), t.len())?;
            let j = parse_mapping(&read(&j)?, s.len(), t.len())?;
            let phi = if construct { Some(construct_lift(&s, &t, &f, &j)?) } else { find_lift(&s, &t, &f, &j)? };
            match phi {
                Some(phi) => {
                    print!("{}", print_mapping(&phi));
                    Ok(0)
                }
                None => {
                    println!("no-lift");
                    Ok(EXIT_NOT_QP)
                }
            }
        }
        Command::Enumerate { kind, n } => {
            let blocks: Vec<String> = enumerate_class(kind, n)?.iter().map(print_structure).collect();
            print!("{}", blocks.join("\n"));
            Ok(0)
        }
        Command::Verify { kind, n_max, mode, jobs } => {
            let report = verify_class(kind, n_max, mode, jobs.max(1))?;
            if report.mismatches.is_empty() {
                println!("OK {} classes", report.classes);
                return Ok(0);
            }
            for m in &report.mismatches {
                println!(
                    "MISMATCH decide={} {} oracle={}",
                    if m.decided.qp { "QP" } else { "NOT_QP" },
                    m.decided.reason,
                    if m.oracle_qp { "QP" } else { "NOT_QP" }
                );
                print!("{}", print_structure(&m.structure));
            }
            println!("{} of {} classes disagree", report.mismatches.len(), report.classes);
            Ok(EXIT_NOT_QP)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
