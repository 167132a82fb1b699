use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use cadprep::cad::{build_cad_with, evaluate_formula, CadConfig, CadTree, Coordinate, ProjectionOperator};
use cadprep::harness::{
    corpus, correlation_analysis, emit_csv, emit_report_csv, parse_csv, parse_problem, run_experiment, write_problem,
};
use cadprep::metrics::{best_order_exhaustive_with, greedy_order_with, MetricsReport};
use cadprep::pipeline::{
    enumerate_variants_with, formulation_from_basis, original, precondition_basis, recommend, Direction, Formulation,
    Label, Problem,
};
use cadprep::poly::{MonomialOrder, Polynomial};
use cadprep::reduction::{reduce_polynomial, ReductionMode};
use cadprep::{cad::project_all_with, Deadline, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cadprep", version, about = "Groebner preconditioning and CAD for polynomial problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Problem file, or `@id` for a bundled corpus problem.
    file: String,
    /// Variable precedence, highest first, e.g. `x>y>z`.
    #[arg(long)]
    order: Option<String>,
    /// Time budget in milliseconds.
    #[arg(long = "budget-ms")]
    budget_ms: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Compatible,
    Reverse,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced lex Groebner basis of the equations.
    Groebner {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "compatible")]
        direction: DirectionArg,
    },
    /// Reduction of a polynomial by the equations' basis.
    Normalform {
        #[command(flatten)]
        common: Common,
        /// Polynomial to reduce.
        #[arg(long)]
        poly: String,
        /// MainVar, SecondaryVars or AllVars.
        #[arg(long, default_value = "AllVars")]
        mode: String,
    },
    /// Prints one formulation in problem-file syntax.
    Precondition {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "GrC+AllVars")]
        variant: String,
    },
    /// Projection-set measures under the declared, a given, or a searched order.
    Metrics {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "Original")]
        variant: String,
        /// Pick the order: `greedy` or `exhaustive`.
        #[arg(long)]
        search: Option<String>,
        #[arg(long, default_value = "mccallum")]
        operator: String,
        /// Allow exhaustive search beyond the variable limit.
        #[arg(long)]
        force: bool,
    },
    /// All formulations with their TNoI.
    Variants {
        #[command(flatten)]
        common: Common,
    },
    /// Formulation with the least TNoI.
    Recommend {
        #[command(flatten)]
        common: Common,
    },
    /// Full CAD of one formulation.
    Cad {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "Original")]
        variant: String,
        #[arg(long, default_value = "mccallum")]
        operator: String,
        #[arg(long = "max-refine", default_value_t = 64)]
        max_refine: u32,
        /// List every cell.
        #[arg(long)]
        cells: bool,
    },
    /// Timed runs; `corpus` as the file runs every bundled problem.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Labels to run (repeatable); all by default.
        #[arg(long)]
        variant: Vec<String>,
        #[arg(long, default_value = "mccallum")]
        operator: String,
        #[arg(long = "max-refine", default_value_t = 64)]
        max_refine: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Correlation of TNoI change against time and cell changes.
    Correlate {
        /// CSV written by `bench`.
        file: PathBuf,
        /// Preconditioned label compared with Original.
        #[arg(long, default_value = "GrC")]
        against: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Usage problems exit with 1, computation failures with 2.
enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Io(_) | Error::UnknownVariable(_) | Error::InvalidOrder(_) | Error::Invalid(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Compute(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load(common: &Common) -> Result<(String, Problem), Failure> {
    let (id, problem) = if let Some(id) = common.file.strip_prefix('@') {
        let p = corpus::load(id).ok_or_else(|| Failure::Usage(format!("no bundled problem `{id}`")))??;
        (id.to_string(), p)
    } else {
        let text = fs::read_to_string(&common.file).map_err(|e| Failure::Usage(format!("{}: {e}", common.file)))?;
        let id = PathBuf::from(&common.file)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| common.file.clone());
        (id, parse_problem(&text)?)
    };
    let problem = match &common.order {
        Some(spec) => {
            let names: Vec<&str> = spec.split(['>', ',']).map(str::trim).collect();
            problem.with_order(MonomialOrder::from_names(problem.context(), &names)?)?
        }
        None => problem,
    };
    Ok((id, problem))
}

fn deadline(common: &Common) -> Deadline {
    common
        .budget_ms
        .map_or_else(Deadline::none, |ms| Deadline::after(Duration::from_millis(ms)))
}

fn label(s: &str) -> Result<Label, Failure> {
    Ok(s.parse::<Label>()?)
}

fn operator(s: &str) -> Result<ProjectionOperator, Failure> {
    Ok(s.parse::<ProjectionOperator>()?)
}

fn formulation(p: &Problem, label: Label, deadline: Deadline) -> Result<Formulation, Failure> {
    match label.direction() {
        None => Ok(original(p)),
        Some(dir) => {
            let basis = precondition_basis(p, dir, deadline)?;
            Ok(formulation_from_basis(p, label, &basis)?)
        }
    }
}

fn order_names(ord: &MonomialOrder) -> String {
    cadprep::harness::order_string(ord)
}

fn signs(v: &[i8]) -> String {
    v.iter()
        .map(|s| match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

fn print_cells(out: &mut impl Write, tree: &CadTree) -> io::Result<()> {
    let ctx = tree.order().context();
    for cell in tree.leaves() {
        let idx: Vec<String> = cell.index().iter().map(u32::to_string).collect();
        let coords: Vec<String> = cell
            .sample()
            .variables()
            .iter()
            .zip(cell.sample().coordinates())
            .map(|(&v, c)| match c {
                Coordinate::Rational(r) => format!("{}={r}", ctx.name(v)),
                Coordinate::Algebraic { lo, hi, .. } => format!("{} in ({lo}, {hi})", ctx.name(v)),
            })
            .collect();
        writeln!(out, "({}) | {} | {}", idx.join(","), coords.join(", "), signs(cell.input_signs()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Groebner { common, direction } => {
            let (_, p) = load(&common)?;
            let dir = match direction {
                DirectionArg::Compatible => Direction::Compatible,
                DirectionArg::Reverse => Direction::Reverse,
            };
            let basis = precondition_basis(&p, dir, deadline(&common))?;
            writeln!(out, "# order {}", order_names(basis.order()))?;
            for g in basis.generators() {
                writeln!(out, "{g}")?;
            }
        }
        Command::Normalform { common, poly, mode } => {
            let (_, p) = load(&common)?;
            let mode: ReductionMode = mode.parse()?;
            let f = Polynomial::parse(p.context(), &poly)?;
            let basis = precondition_basis(&p, Direction::Compatible, deadline(&common))?;
            writeln!(out, "{}", reduce_polynomial(&f, &basis, mode)?)?;
        }
        Command::Precondition { common, variant } => {
            let (_, p) = load(&common)?;
            let f = formulation(&p, label(&variant)?, deadline(&common))?;
            let as_problem = Problem::new(f.equations.clone(), f.constraint.clone(), p.prefix().to_vec(), f.order.clone())?;
            writeln!(out, "# {} tnoi {}", f.label, f.tnoi)?;
            write!(out, "{}", write_problem(&as_problem))?;
        }
        Command::Metrics {
            common,
            variant,
            search,
            operator: op,
            force,
        } => {
            let (_, p) = load(&common)?;
            let op = operator(&op)?;
            let dl = deadline(&common);
            let f = formulation(&p, label(&variant)?, dl)?;
            let polys = f.polynomials();
            let ord = match search.as_deref() {
                None => f.order.clone(),
                Some("greedy") => greedy_order_with(&polys, &p.admissible()?, op, dl)?,
                Some("exhaustive") => best_order_exhaustive_with(&polys, &p.admissible()?, op, force, dl)?.0,
                Some(other) => return Err(Failure::Usage(format!("unknown search `{other}`"))),
            };
            let set = project_all_with(&polys, &ord, op, dl)?;
            let m = MetricsReport::of(&polys, &set);
            let ctx = p.context();
            writeln!(out, "order: {}", order_names(&ord))?;
            writeln!(out, "card: {}\ntd: {}\nsotd: {}\ntnoi: {}", m.card, m.td, m.sotd, m.tnoi_input)?;
            for l in &m.per_level {
                writeln!(out, "level {}: card {} sotd {}", ctx.name(l.variable), l.card, l.sotd)?;
            }
        }
        Command::Variants { common } => {
            let (_, p) = load(&common)?;
            writeln!(out, "label,tnoi,equations,constraint_polys,status")?;
            for v in enumerate_variants_with(&p, deadline(&common)) {
                match v.outcome {
                    Ok(f) => writeln!(
                        out,
                        "{},{},{},{},ok",
                        f.label,
                        f.tnoi,
                        f.equations.len(),
                        f.constraint.polynomials().len()
                    )?,
                    Err(e) => writeln!(out, "{},,,,failed: {e}", v.label)?,
                }
            }
        }
        Command::Recommend { common } => {
            let (_, p) = load(&common)?;
            let ok: Vec<Formulation> = enumerate_variants_with(&p, deadline(&common))
                .into_iter()
                .filter_map(|v| v.outcome.ok())
                .collect();
            let best = recommend(&ok).ok_or_else(|| Failure::Compute(Error::Invalid("no formulation computed".into())))?;
            writeln!(out, "{} (tnoi {})", best.label, best.tnoi)?;
        }
        Command::Cad {
            common,
            variant,
            operator: op,
            max_refine,
            cells,
        } => {
            let (_, p) = load(&common)?;
            let dl = deadline(&common);
            let f = formulation(&p, label(&variant)?, dl)?;
            let config = CadConfig {
                operator: operator(&op)?,
                max_refine,
                deadline: dl,
            };
            let tree = build_cad_with(&f.polynomials(), &f.order, &config)?;
            let mut eval = evaluate_formula(&tree, &f.formula())?;
            eval.prefix_unevaluated = !p.prefix().is_empty();
            writeln!(out, "cells: {}", tree.cell_count())?;
            for d in 1..=tree.dimension() {
                let sizes: Vec<String> = tree.stack_sizes(d).iter().map(usize::to_string).collect();
                writeln!(out, "stacks {d}: {}", sizes.join(" "))?;
            }
            writeln!(out, "solution cells: {}", eval.solution_cells.len())?;
            writeln!(out, "satisfiable: {}", eval.satisfiable)?;
            if eval.prefix_unevaluated {
                writeln!(out, "note: quantifier prefix not evaluated; satisfiability is for the matrix only")?;
            }
            if cells {
                let inputs: Vec<String> = tree.inputs().iter().map(Polynomial::to_string).collect();
                writeln!(out, "# signs of: {}", inputs.join("; "))?;
                print_cells(&mut out, &tree)?;
            }
        }
        Command::Bench {
            common,
            variant,
            operator: op,
            max_refine,
            csv,
        } => {
            let problems = if common.file == "corpus" {
                corpus::load_all()?.into_iter().map(|(id, p)| (id.to_string(), p)).collect()
            } else {
                vec![load(&common)?]
            };
            let labels = if variant.is_empty() {
                Label::ALL.to_vec()
            } else {
                variant.iter().map(|v| label(v)).collect::<Result<Vec<_>, _>>()?
            };
            let budget = Duration::from_millis(common.budget_ms.unwrap_or(60_000));
            let config = CadConfig {
                operator: operator(&op)?,
                max_refine,
                deadline: Deadline::none(),
            };
            let mut records = Vec::new();
            for (id, p) in &problems {
                records.extend(run_experiment(id, p, &labels, budget, &config)?);
            }
            match csv {
                Some(path) => emit_csv(&records, fs::File::create(path)?)?,
                None => emit_csv(&records, &mut out)?,
            }
        }
        Command::Correlate { file, against, csv } => {
            let records = parse_csv(fs::File::open(&file)?)?;
            let report = correlation_analysis(&records, label(&against)?)?;
            write!(out, "{report}")?;
            if let Some(path) = csv {
                emit_report_csv(&report, fs::File::create(path)?)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
