mod constraints;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lvf_core::catalog::{Catalog, GenKind};
use lvf_core::expr::{format_field, format_rational};
use lvf_core::liealg::killing_determinant;
use lvf_core::obstruction::{self, b2_control, b2_control_ansatz, default_ansatz, g2_obstruction};
use lvf_core::rootsystem::{Model, RootType};
use lvf_core::solver::{self, AnsatzSpace, Solver};
use lvf_core::verifier::{verify_entries, verify_realization};
use lvf_core::{generic_rank, parse_field, Alphabet, Symbol, VectorField, Q};

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! outln {
    () => { emit(format_args!("\n")) };
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}

const GRAMMAR: &str = "\
expression grammar:
  expr  := term (('+' | '-') term)*
  term  := unary (('*' | '/') unary)*
  unary := ('-' | '+') unary | atom ('^' ['-'] integer)?
  atom  := integer | name | exp(expr) | (expr)
names: coordinates x y z w (dimension <= 4) or x1..xn; frame fields Dx Dy Dz Dw or D1..Dn;
parameters declared with --params. A field is a sum of scalar*frame terms, e.g. \"y*Dx + exp(-x)*Dz\".
Division only by a unit (nonzero constant, parameter monomial or exp(...)).";

#[derive(Parser)]
#[command(
    name = "lvf",
    version,
    about = "Exact Lie algebras of vector fields with exponential-polynomial coefficients"
)]
struct Cli {
    /// Ambient dimension for field arguments.
    #[arg(long, global = true, default_value_t = 3)]
    dim: usize,
    /// Comma-separated parameter names allowed in field arguments.
    #[arg(long, global = true, value_delimiter = ',')]
    params: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Lie bracket [A, B].
    Bracket { a: String, b: String },
    /// Print the generic rank of a family of fields.
    Rank {
        #[arg(required = true)]
        fields: Vec<String>,
    },
    /// Verify catalog realizations.
    Verify {
        #[arg(long, conflicts_with = "form", required_unless_present = "form")]
        all: bool,
        #[arg(long)]
        form: Option<String>,
        /// Parameter override, e.g. --param b=-2 or --param a=1/2.
        #[arg(long = "param", value_parser = parse_assignment)]
        overrides: Vec<(String, Q)>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rank of the polynomial centralizer of a realization.
    Centralizer {
        #[arg(long)]
        form: String,
        #[arg(long)]
        max_degree: u32,
        #[arg(long = "param", value_parser = parse_assignment)]
        overrides: Vec<(String, Q)>,
    },
    /// Solve bracket constraints read from a file.
    Solve { file: PathBuf },
    /// Chevalley data of a rank-2 root system from a linear model.
    Structure {
        #[arg(long = "type", value_parser = parse_root_type)]
        kind: RootType,
        #[arg(long, value_parser = parse_model)]
        model: Option<Model>,
    },
    /// Search for a G2 extension of an A2 form.
    G2Check {
        #[arg(long, required_unless_present = "control")]
        form: Option<u8>,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        /// Also rerun at degrees 2, 4, ... up to the maximum.
        #[arg(long)]
        sweep: bool,
        /// Also rerun under every sign flip of the simple root vectors.
        #[arg(long)]
        flips: bool,
        /// Run the B2 control instead.
        #[arg(long, conflicts_with = "form")]
        control: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Inspect or export the catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { id: String },
    Export { path: PathBuf },
}

fn parse_assignment(s: &str) -> Result<(String, Q), String> {
    let (name, value) = s.split_once('=').ok_or("expected name=p/q")?;
    let v: Q = value
        .trim()
        .parse()
        .map_err(|_| format!("`{value}` is not a rational"))?;
    Ok((name.trim().to_string(), v))
}

fn parse_root_type(s: &str) -> Result<RootType, String> {
    RootType::parse(s).ok_or_else(|| format!("unknown root system `{s}` (A1xA1, A2, B2, G2)"))
}

fn parse_model(s: &str) -> Result<Model, String> {
    Model::parse(s).ok_or_else(|| format!("unknown model `{s}` (sl2xsl2, sl3, sl4, g2-7)"))
}

enum Failure {
    /// Bad input: exit 2 with the grammar.
    Usage(String),
    /// A check failed: exit 1.
    Check,
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn load_catalog() -> Result<Catalog, Failure> {
    match std::env::var_os("LVF_CATALOG") {
        Some(path) => Catalog::read(std::path::Path::new(&path)).map_err(usage),
        None => Ok(Catalog::builtin()),
    }
}

fn field(text: &str, alpha: &Alphabet) -> Result<VectorField, Failure> {
    parse_field(text, alpha).map_err(|e| usage(format!("`{text}`: {e}")))
}

fn run(cli: Cli) -> Outcome {
    let alpha = Alphabet::with_params(cli.dim, cli.params.iter().map(|p| Symbol::new(p)));
    match cli.command {
        Command::Bracket { a, b } => {
            let (a, b) = (field(&a, &alpha)?, field(&b, &alpha)?);
            outln!("{}", format_field(&a.bracket(&b)));
        }
        Command::Rank { fields } => {
            let fs = fields
                .iter()
                .map(|f| field(f, &alpha))
                .collect::<Result<Vec<_>, _>>()?;
            outln!("{}", generic_rank(&fs));
        }
        Command::Verify {
            all,
            form,
            overrides,
            format,
        } => {
            let cat = load_catalog()?;
            let summary = if all {
                verify_entries(cat.entries(), &overrides)
            } else {
                let id = form.expect("clap requires --form without --all");
                let r = cat.get(&id).map_err(usage)?;
                lvf_core::verifier::Summary {
                    reports: vec![verify_realization(r, &overrides)],
                }
            };
            match format {
                Format::Text => out!("{}", summary.to_text()),
                Format::Records => out!("{}", summary.to_records()),
            }
            if !summary.all_passed() {
                return Err(Failure::Check);
            }
        }
        Command::Centralizer {
            form,
            max_degree,
            overrides,
        } => {
            let cat = load_catalog()?;
            let r = cat.get(&form).map_err(usage)?;
            let assignment = r.assignment(&overrides).map_err(usage)?;
            let fields = r.fields(&assignment).map_err(usage)?;
            let ansatz = AnsatzSpace::polynomial(r.dim, max_degree);
            let cons: Vec<_> = fields
                .iter()
                .cloned()
                .map(solver::BracketConstraint::zero)
                .collect();
            let sol = solver::solve(&cons, &ansatz).map_err(usage)?;
            let rank = Solver::default()
                .centralizer_rank(&fields, &ansatz)
                .map_err(usage)?;
            outln!("{form}: centralizer rank {rank} at degree {max_degree}");
            outln!("solution space dimension {}", sol.basis.len());
            for b in &sol.basis {
                outln!("  {}", format_field(b));
            }
        }
        Command::Solve { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let problem = constraints::parse_problem(&text, cli.dim, &cli.params).map_err(usage)?;
            let sol = solver::solve(&problem.constraints, &problem.ansatz).map_err(usage)?;
            outln!(
                "ansatz {} ({} unknowns)",
                problem.ansatz,
                problem.ansatz.size()
            );
            if let Some(inc) = &sol.inconsistency {
                outln!(
                    "inconsistent: constraint {} leaves {}",
                    inc.constraint + 1,
                    format_field(&inc.residual)
                );
                return Err(Failure::Check);
            }
            if let Some(p) = &sol.particular {
                outln!("particular {}", format_field(p));
            }
            outln!("solution space dimension {}", sol.basis.len());
            for b in &sol.basis {
                outln!("  {}", format_field(b));
            }
            outln!("generic rank {}", generic_rank(&sol.basis));
        }
        Command::Structure { kind, model } => {
            let model = model.unwrap_or_else(|| Model::default_for(kind));
            if model.root_type() != kind {
                return Err(usage(format!(
                    "model {} realizes {}, not {kind}",
                    model.name(),
                    model.root_type()
                )));
            }
            print_structure(model)?;
        }
        Command::G2Check {
            form,
            max_degree,
            sweep,
            flips,
            control,
            format,
        } => {
            let cat = load_catalog()?;
            if control {
                let c = b2_control(&cat, &b2_control_ansatz()).map_err(usage)?;
                match format {
                    Format::Text => {
                        out!("{}", c.report.to_text());
                        outln!(
                            "catalog X_{{alpha+beta}} in solution space: {}",
                            c.reference_in_span
                        );
                        outln!("[X_{{-alpha}}, X_{{alpha+beta}}] proportional to catalog X_{{beta}}: {}", c.beta_matches);
                    }
                    Format::Records => out!("{}", c.report.to_records()),
                }
                if c.report.verdict.is_obstructed() || !c.reference_in_span || !c.beta_matches {
                    return Err(Failure::Check);
                }
                return Ok(());
            }
            let form = form.expect("clap requires --form without --control");
            let report = g2_obstruction(&cat, form, &default_ansatz(max_degree)).map_err(usage)?;
            match format {
                Format::Text => out!("{}", report.to_text()),
                Format::Records => out!("{}", report.to_records()),
            }
            if !report.recheck() {
                eprintln!("a reported solution fails its constraints");
                return Err(Failure::Check);
            }
            if sweep {
                let degrees: Vec<u32> = (1..=max_degree / 2).map(|k| 2 * k).collect();
                for (d, v) in obstruction::degree_sweep(&cat, form, &degrees).map_err(usage)? {
                    outln!("degree {d}: {v}");
                }
            }
            if flips {
                for (f, v) in obstruction::sign_flip_sweep(&cat, form, &default_ansatz(max_degree))
                    .map_err(usage)?
                {
                    outln!("flip {f:?}: {v}");
                }
            }
        }
        Command::Catalog { action } => {
            let cat = load_catalog()?;
            match action {
                CatalogAction::List => {
                    for r in cat.entries() {
                        outln!(
                            "{:<12} {:<10} rank {}  {}",
                            r.id,
                            r.family.name(),
                            r.expected_rank,
                            r.source
                        );
                    }
                }
                CatalogAction::Show { id } => {
                    let r = cat.get(&id).map_err(usage)?;
                    outln!("{} [{}] {}", r.id, r.family, r.source);
                    for (p, v) in &r.params {
                        outln!("  param {p} = {}", format_rational(v));
                    }
                    for c in &r.constraints {
                        outln!("  constraint {c} = 0");
                    }
                    for g in &r.generators {
                        let tag = if g.kind == GenKind::Published {
                            ""
                        } else {
                            " (derived)"
                        };
                        outln!("  {} = {}{tag}", g.name, format_field(&g.field));
                    }
                    for rel in &r.relations {
                        outln!("  {rel}");
                    }
                    outln!("  expected rank {}", r.expected_rank);
                    for n in &r.notes {
                        outln!("  note: {n}");
                    }
                }
                CatalogAction::Export { path } => cat.write(&path).map_err(usage)?,
            }
        }
    }
    Ok(())
}

fn print_structure(model: Model) -> Outcome {
    let cs = model.build().map_err(usage)?;
    let sys = &cs.system;
    outln!("type {} (model {})", sys.kind(), model.name());
    outln!("cartan matrix");
    for row in sys.cartan_matrix() {
        outln!("  {row:?}");
    }
    let pos: Vec<String> = sys.positive_roots().iter().map(|r| r.to_string()).collect();
    outln!("positive roots: {}", pos.join(", "));
    outln!("root vectors");
    for (r, v) in &cs.vectors {
        outln!("  X_{{{r}}} = {}", format_field(v));
    }
    for (name, h) in ["H_alpha", "H_beta"].iter().zip(&cs.cartan) {
        outln!("  {name} = {}", format_field(h));
    }
    outln!("structure constants");
    for ((r, s), n) in &cs.constants {
        outln!("  N({r}, {s}) = {}", format_rational(n));
    }
    outln!("coroots");
    for (r, c) in &cs.coroots {
        outln!(
            "  [X_{{{r}}}, X_{{{}}}] = {}*H_alpha + {}*H_beta",
            r.neg(),
            format_rational(&c[0]),
            format_rational(&c[1])
        );
    }
    let t = cs.structure_tensor().map_err(usage)?;
    outln!(
        "killing determinant {}",
        format_rational(&killing_determinant(&t))
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!();
            eprintln!("{GRAMMAR}");
            ExitCode::from(2)
        }
    }
}
