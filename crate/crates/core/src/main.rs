use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cpsd::cert::{self, Certificate, CertificateFile, ConeKind, Problem};
use cpsd::cones;
use cpsd::exact::format_rational;
use cpsd::game::{self, GameStatus, Variant};
use cpsd::graph::{self, Graph};
use cpsd::gridgen::{self, GridEnumeration, MatrixCatalog};
use cpsd::lp::LpProblem;
use cpsd::{CpsdError, DenominatorRule, Limits, Result, SymMatrix};

#[derive(Parser)]
#[command(
    name = "cpsd",
    version,
    about = "Exact polyhedral cone hierarchies and coloring-game LPs"
)]
struct Cli {
    /// Worker threads for enumeration and sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Abort after enumerating this many tuples.
    #[arg(long, global = true, env = "CPSD_MAX_TUPLES")]
    max_tuples: Option<u64>,
    /// Abort a simplex solve after this many pivots.
    #[arg(long, global = true, env = "CPSD_MAX_PIVOTS")]
    max_pivots: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate or count the rational PSD tuple grid.
    Gridgen(GridgenArgs),
    /// Cone membership tests.
    #[command(subcommand)]
    Cone(ConeCommand),
    /// Coloring-game programs.
    #[command(subcommand)]
    Game(GameCommand),
    /// Graph utilities.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Re-check a certificate.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Denominators {
    PerEntry,
    Common,
}

impl From<Denominators> for DenominatorRule {
    fn from(d: Denominators) -> Self {
        match d {
            Denominators::PerEntry => DenominatorRule::PerEntry,
            Denominators::Common => DenominatorRule::CommonPerMatrix,
        }
    }
}

#[derive(Args)]
struct GridgenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    /// Print only the number of tuples.
    #[arg(long)]
    count_only: bool,
    /// Write tuples as JSON lines to this file instead of stdout.
    #[arg(long, value_name = "FILE")]
    emit: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "per-entry")]
    denominators: Denominators,
}

#[derive(Args)]
struct ConeArgs {
    /// Symmetric matrix as JSON (`{"dim", "upper"}` or an array of rows).
    #[arg(long, value_name = "FILE")]
    matrix: PathBuf,
    #[arg(long)]
    r: usize,
    /// Print the full certificate as JSON.
    #[arg(long)]
    json: bool,
    /// Also write the certificate to this file.
    #[arg(long, value_name = "FILE")]
    certificate_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConeCommand {
    /// Membership in C_r: conic hull of grid Gram matrices.
    MemberC(ConeArgs),
    /// Membership in D_r: nonnegativity on all grid tuples.
    MemberD {
        #[command(flatten)]
        args: ConeArgs,
        /// Report the minimum of the trace form over the grid.
        #[arg(long)]
        minimum: bool,
    },
    /// Membership in O_r: nonnegativity on the simplex grid.
    MemberO(ConeArgs),
    /// Membership in O_r*: conic hull of v vᵀ over the simplex grid.
    MemberOstar(ConeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Q,
    Qa,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Q => Variant::Q,
            VariantArg::Qa => Variant::Qa,
        }
    }
}

#[derive(Subcommand)]
enum GameCommand {
    /// Smallest t with a feasible program.
    Lambda {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        tmax: usize,
        #[arg(long, value_enum, default_value = "q")]
        variant: VariantArg,
        /// Where to write the certificate.
        #[arg(long, value_name = "FILE")]
        certificate_out: Option<PathBuf>,
    },
    /// Feasibility table over k and r, as CSV.
    Sweep {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Comma-separated values of k.
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
        /// Comma-separated values of r.
        #[arg(long, value_delimiter = ',', required = true)]
        rs: Vec<usize>,
        #[arg(long)]
        tmax: usize,
        #[arg(long, value_enum, default_value = "q")]
        variant: VariantArg,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Vertex and edge counts, degrees and chromatic number.
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    certificate: PathBuf,
    /// The input the certificate should refer to: a matrix, graph or LP file.
    #[arg(long, value_name = "FILE")]
    problem: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_cap() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut limits = Limits::default();
    if let Some(t) = cli.max_tuples {
        limits.max_tuples = t;
    }
    if let Some(p) = cli.max_pivots {
        limits.max_pivots = p;
    }
    if limits.max_tuples == 0 || limits.max_pivots == 0 || cli.threads == 0 {
        return Err(CpsdError::InvalidArgument(
            "caps and thread count must be positive".into(),
        ));
    }
    let threads = cli.threads;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Gridgen(a) => gridgen_cmd(a, &limits, &mut out)?,
        Command::Cone(c) => cone_cmd(c, &limits, threads, &mut out)?,
        Command::Game(g) => game_cmd(g, &limits, threads, &mut out)?,
        Command::Graph(GraphCommand::Info { file, json }) => graph_info(&file, json, &mut out)?,
        Command::Verify(v) => {
            let ok = verify_cmd(&v, &limits)?;
            writeln!(out, "{}", if ok { "valid" } else { "invalid" })?;
            out.flush()?;
            return Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn check_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(CpsdError::InvalidArgument(format!(
            "--{name} must be positive"
        )));
    }
    Ok(())
}

fn gridgen_cmd(a: GridgenArgs, limits: &Limits, out: &mut impl Write) -> Result<()> {
    check_positive("n", a.n)?;
    check_positive("r", a.r)?;
    let rule: DenominatorRule = a.denominators.into();
    let catalog = Arc::new(MatrixCatalog::new(a.r, rule));
    if a.count_only {
        writeln!(out, "{}", gridgen::count_tuples_in(&catalog, a.n))?;
        return Ok(());
    }
    let mut e = GridEnumeration::new(Arc::clone(&catalog), a.n);
    let mut write_all = |w: &mut dyn Write| -> Result<u64> {
        let mut err = None;
        let count = e.try_for_each(limits.max_tuples, |cat, idx| {
            if err.is_some() {
                return;
            }
            let line = serde_json::to_string(&cat.tuple(idx)).map_err(CpsdError::from);
            if let Err(x) = line.and_then(|l| writeln!(w, "{l}").map_err(CpsdError::from)) {
                err = Some(x);
            }
        })?;
        match err {
            Some(x) => Err(x),
            None => Ok(count),
        }
    };
    match a.emit {
        Some(path) => {
            let mut f = BufWriter::new(File::create(&path)?);
            let count = write_all(&mut f)?;
            f.flush()?;
            writeln!(out, "{count}")?;
        }
        None => {
            write_all(out)?;
        }
    }
    Ok(())
}

fn read_matrix(path: &Path) -> Result<SymMatrix> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn emit_certificate(
    file: CertificateFile,
    json: bool,
    path: Option<&Path>,
    out: &mut impl Write,
) -> Result<()> {
    let text = file.to_json()?;
    if let Some(p) = path {
        std::fs::write(p, format!("{text}\n"))?;
    }
    if json {
        writeln!(out, "{text}")?;
    }
    Ok(())
}

fn cone_cmd(c: ConeCommand, limits: &Limits, threads: usize, out: &mut impl Write) -> Result<()> {
    let (kind, a, minimum) = match c {
        ConeCommand::MemberC(a) => (ConeKind::C, a, false),
        ConeCommand::MemberD { args, minimum } => (ConeKind::D, args, minimum),
        ConeCommand::MemberO(a) => (ConeKind::O, a, false),
        ConeCommand::MemberOstar(a) => (ConeKind::Ostar, a, false),
    };
    check_positive("r", a.r)?;
    let m = read_matrix(&a.matrix)?;
    let (body, summary) = match kind {
        ConeKind::C | ConeKind::Ostar => {
            let res = if kind == ConeKind::C {
                let gens = cones::build_generators_with(
                    m.dim(),
                    a.r,
                    DenominatorRule::PerEntry,
                    limits,
                    threads,
                )?;
                cones::member_c_with(&m, &gens, limits)?
            } else {
                cones::member_ostar(&m, a.r, limits)?
            };
            let summary = if res.is_member() {
                format!(
                    "Member ({} generators with positive weight)",
                    res.weights.as_ref().map_or(0, Vec::len)
                )
            } else {
                format!("Separated\nseparator:\n{}", res.separator.as_ref().unwrap())
            };
            let body = Certificate::Conic {
                cone: kind,
                r: a.r,
                matrix: m.clone(),
                result: res,
            };
            (body, summary)
        }
        ConeKind::D => {
            let d = cones::member_d_with(&m, a.r, DenominatorRule::PerEntry, limits, threads)?;
            let mut summary = match &d {
                cones::DualMembership::Member => "Member".to_string(),
                cones::DualMembership::Violated { witness, value } => format!(
                    "Violated (value {})\ntuple: {}",
                    format_rational(value),
                    serde_json::to_string(witness)?
                ),
            };
            if minimum {
                let (v, t) = cones::min_trace_form(&m, a.r, limits)?;
                summary.push_str(&format!(
                    "\nminimum: {} at {}",
                    format_rational(&v),
                    serde_json::to_string(&t)?
                ));
            }
            (Certificate::from_dual_d(&m, a.r, d), summary)
        }
        ConeKind::O => {
            let d = cones::member_o(&m, a.r)?;
            let summary = match &d {
                cones::DualMembership::Member => "Member".to_string(),
                cones::DualMembership::Violated { witness, value } => format!(
                    "Violated (value {})\npoint: {}",
                    format_rational(value),
                    serde_json::to_string(witness)?
                ),
            };
            (Certificate::from_dual_o(&m, a.r, d), summary)
        }
    };
    if !a.json {
        writeln!(out, "{summary}")?;
    }
    emit_certificate(
        CertificateFile::new(body),
        a.json,
        a.certificate_out.as_deref(),
        out,
    )
}

fn game_cmd(g: GameCommand, limits: &Limits, threads: usize, out: &mut impl Write) -> Result<()> {
    match g {
        GameCommand::Lambda {
            graph,
            k,
            r,
            tmax,
            variant,
            certificate_out,
        } => {
            let gr = graph::read_graph(&graph)?;
            let cache = game::GeneratorCache::new();
            let res = game::solve_game(&gr, variant.into(), k, r, tmax, limits, &cache, threads)?;
            let status = match res.status {
                GameStatus::Feasible => "feasible",
                GameStatus::NoneUpTo => "none-up-to",
            };
            let path = certificate_out.as_ref().map(|p| p.display().to_string());
            let summary = json!({
                "t": res.t,
                "status": status,
                "certificate_path": path,
            });
            if let Some(p) = &certificate_out {
                let file = CertificateFile::new(Certificate::Game { result: res });
                std::fs::write(p, format!("{}\n", file.to_json()?))?;
            }
            writeln!(out, "{}", serde_json::to_string(&summary)?)?;
        }
        GameCommand::Sweep {
            graph,
            ks,
            rs,
            tmax,
            variant,
        } => {
            let gr: Graph = graph::read_graph(&graph)?;
            for &v in ks.iter().chain(&rs) {
                check_positive("ks/rs", v)?;
            }
            let cells = game::sweep(&gr, variant.into(), &ks, &rs, tmax, limits, threads)?;
            writeln!(out, "k,r,t,feasible")?;
            for cell in &cells {
                for step in &cell.result.steps {
                    writeln!(out, "{},{},{},{}", cell.k, cell.r, step.t, step.feasible)?;
                }
            }
        }
    }
    Ok(())
}

fn graph_info(file: &Path, json: bool, out: &mut impl Write) -> Result<()> {
    let g = graph::read_graph(file)?;
    let degrees: Vec<usize> = (0..g.n()).map(|u| g.degree(u)).collect();
    let chi = if g.n() <= graph::MAX_ORACLE_VERTICES {
        graph::chromatic_number(&g, g.n().max(1))?
    } else {
        None
    };
    if json {
        let v = json!({
            "n": g.n(),
            "m": g.m(),
            "max_degree": degrees.iter().max(),
            "chromatic_number": chi,
        });
        writeln!(out, "{}", serde_json::to_string(&v)?)?;
    } else {
        writeln!(out, "vertices: {}", g.n())?;
        writeln!(out, "edges: {}", g.m())?;
        writeln!(out, "max degree: {}", degrees.iter().max().unwrap_or(&0))?;
        match chi {
            Some(c) => writeln!(out, "chromatic number: {c}")?,
            None => writeln!(
                out,
                "chromatic number: not computed (more than {} vertices)",
                graph::MAX_ORACLE_VERTICES
            )?,
        }
    }
    Ok(())
}

fn verify_cmd(v: &VerifyArgs, limits: &Limits) -> Result<bool> {
    let file = CertificateFile::from_json(&std::fs::read_to_string(&v.certificate)?)?;
    let problem = match &v.problem {
        None => None,
        Some(p) => Some(match &file.body {
            Certificate::Conic { .. } | Certificate::Dual { .. } => {
                Problem::Matrix(read_matrix(p)?)
            }
            Certificate::Game { .. } => Problem::Graph(graph::read_graph(p)?),
            Certificate::Lp { .. } => {
                let lp: LpProblem = serde_json::from_str(&std::fs::read_to_string(p)?)?;
                Problem::Lp(lp)
            }
        }),
    };
    cert::verify(&file, problem.as_ref(), limits)
}
