use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gradres::corpus;
use gradres::problem::{self, SIMPLE_TOPS};
use gradres::report::{exit, Document, Parameters, PropertySection, Status};
use gradres::run::{self, Caps, CheckKind, Command};
use gradres_core::syzygy::WindowMethod;

/// Groebner bases, overlap tables and resolution degree windows over path algebras.
#[derive(Parser)]
#[command(name = "gradres", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Problem file
    file: PathBuf,
    /// Deepest homological degree or overlap level [default: file, then 5]
    #[arg(long)]
    max_n: Option<usize>,
    /// Degree cap for the Groebner basis and the oracle [default: file, then 12,
    /// raised toward predicted window tops when affordable]
    #[arg(long)]
    max_degree: Option<usize>,
    /// Print the JSON document instead of the table
    #[arg(long)]
    json: bool,
    /// Also write the JSON document to this path
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Qo,
    O,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CheckChoice {
    /// Generated in degree n (shifted by the lowest generator degree) at P_n
    #[arg(long)]
    linear: bool,
    /// Overlap criterion for s-Koszulity of the algebra
    #[arg(long, value_name = "S")]
    s_koszul: Option<usize>,
    /// linear, chi:<s>, chi-down:<s> or list:<d,d>;<d>;...
    #[arg(long, value_name = "SPEC")]
    determined: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduced Groebner basis and Hilbert function
    Groebner(Common),
    /// Overlap levels of the Groebner tips with their rho chains
    Overlaps {
        #[command(flatten)]
        common: Common,
        /// Include quasioverlaps
        #[arg(long)]
        quasi: bool,
    },
    /// First syzygy and degree windows for each term of the resolution
    Window {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = SIMPLE_TOPS)]
        module: String,
        #[arg(long, value_enum, default_value = "qo")]
        method: Method,
    },
    /// Degree-pattern checks: linear, s-Koszul criterion, determined by a collection
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = SIMPLE_TOPS)]
        module: String,
        #[command(flatten)]
        choice: CheckChoice,
    },
    /// Minimal graded projective resolution from the linear-algebra oracle
    Resolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = SIMPLE_TOPS)]
        module: String,
    },
    /// Oracle resolution checked against every predicted window
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = SIMPLE_TOPS)]
        module: String,
    },
    /// Property suites over a seeded random corpus of monomial algebras
    Properties {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances for the overlap properties
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Algebras for the differential window check
        #[arg(long, default_value_t = 40)]
        algebras: usize,
        /// Random module presentations per algebra, besides A0
        #[arg(long, default_value_t = 1)]
        modules_each: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
}

fn emit(doc: &Document, json: bool, report: Option<&PathBuf>) -> ExitCode {
    if json {
        print!("{}", doc.to_json());
    } else {
        print!("{}", doc.human());
    }
    if let Some(path) = report {
        if let Err(e) = std::fs::write(path, doc.to_json()) {
            eprintln!("gradres: cannot write {}: {e}", path.display());
            return ExitCode::from(exit::INPUT as u8);
        }
    }
    ExitCode::from(doc.exit_code as u8)
}

fn properties(seed: u64, count: usize, algebras: usize, modules_each: usize) -> Document {
    let params = Parameters { seed: Some(seed), ..Parameters::default() };
    let mut doc = Document::new("properties", params);
    let a = corpus::overlap_properties(seed, count);
    let b = corpus::window_differential(seed, algebras, modules_each);
    let rows: Vec<_> = a.rows.into_iter().chain(b.rows).collect();
    for r in &rows {
        let status = if r.failed == 0 { Status::Pass } else { Status::Fail };
        doc.verdict(&r.name, status, format!("{} checks passed, {} failed", r.passed, r.failed));
    }
    doc.properties = Some(PropertySection { seed, instances: a.instances + b.instances, skipped: b.skipped, rows });
    doc.settle();
    doc
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, cmd) = match cli.command {
        Cmd::Properties { seed, count, algebras, modules_each, json, report } => {
            return emit(&properties(seed, count, algebras, modules_each), json, report.as_ref());
        }
        Cmd::Groebner(c) => (c, Command::Groebner),
        Cmd::Overlaps { common, quasi } => (common, Command::Overlaps { quasi }),
        Cmd::Window { common, module, method } => {
            let method = match method {
                Method::Qo => WindowMethod::Quasioverlap,
                Method::O => WindowMethod::Overlap,
            };
            (common, Command::Window { module, method })
        }
        Cmd::Check { common, module, choice } => {
            let kind = match (choice.linear, choice.s_koszul, choice.determined) {
                (true, _, _) => CheckKind::Linear,
                (_, Some(s), _) => CheckKind::SKoszul(s),
                (_, _, Some(spec)) => CheckKind::Determined(spec),
                _ => unreachable!("clap requires one choice"),
            };
            (common, Command::Check { module, kind })
        }
        Cmd::Resolve { common, module } => (common, Command::Resolve { module }),
        Cmd::Verify { common, module } => (common, Command::Verify { module }),
    };
    let text = match std::fs::read_to_string(&common.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("gradres: cannot read {}: {e}", common.file.display());
            return ExitCode::from(exit::INPUT as u8);
        }
    };
    let pf = match problem::parse(&text) {
        Ok(pf) => pf,
        Err(d) => {
            eprintln!("{}:{d}", common.file.display());
            return ExitCode::from(exit::INPUT as u8);
        }
    };
    let caps = Caps { max_n: common.max_n, max_degree: common.max_degree };
    match run::run(&pf, &cmd, caps) {
        Ok(doc) => emit(&doc, common.json, common.report.as_ref()),
        Err(e) => {
            eprintln!("gradres: {e}");
            ExitCode::from(exit::INPUT as u8)
        }
    }
}
