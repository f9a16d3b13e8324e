//! The `masckit` command line.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage or input error, 3 an
//! enumeration over budget, 4 a boundary verdict under `--strict`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::dft::{
    coherence_lower_bound, masc_contains_dft, s_max_exact, s_max_sampled, symmetrize_omega, DftOracle, GammaMode,
    PartialDftSpec, WeightMethod, DEFAULT_GAMMA_CAP,
};
use crate::error::{MascError, Result};
use crate::experiment::{run_experiment, ExperimentConfig, RunOptions};
use crate::graph::{
    enumerate_simple_cycles_capped, erdos_renyi, girth, masc_contains_graph, max_uniform_sparsity, DirectedSimpleGraph,
    DEFAULT_CYCLE_CAP,
};
use crate::linalg::text::{parse_real_matrix, parse_real_vector, rational_string};
use crate::linalg::{nullspace_basis, RealMatrix};
use crate::masc::{masc_contains, masc_enumerate_with, nullspace_constant, MembershipOracle, MembershipVerdict};
use crate::plot::{emit_plot, PlotSpec};
use crate::recovery::{basis_pursuit, recovery_rate, LpStatus, RecoveryProblem, TrialConfig, DEFAULT_SUCCESS_TOL};
use crate::support::SupportSet;

#[derive(Parser, Debug)]
#[command(name = "masckit", version, about = "Certify which sparse supports l1-minimization always recovers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve basis pursuit for y = Φx̄ and compare with x̄.
    Recover {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SUCCESS_TOL)]
        tol: f64,
    },
    /// Monte-Carlo recovery rate at one sparsity; prints `s,trials,successes,rate`.
    Rate {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        sparsity: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SUCCESS_TOL)]
        tol: f64,
    },
    /// Generic matrices via exact extreme-point enumeration.
    #[command(subcommand)]
    Masc(MascCommand),
    /// Incidence matrices of directed graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Real signals under partial DFT measurements, prime n.
    #[command(subcommand)]
    Dft(DftCommand),
    /// Run an experiment described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Desk-scale preset.
        #[arg(long)]
        fast: bool,
        /// Also write an SVG plot next to the CSV.
        #[arg(long)]
        svg: bool,
    },
}

#[derive(Args, Debug)]
struct Strict {
    /// Exit with status 4 when the verdict is a numerical boundary case.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand, Debug)]
enum MascCommand {
    /// Decide whether a support is in the MASC.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        support: String,
        #[command(flatten)]
        strict: Strict,
    },
    /// Maximal faces of the MASC.
    Enumerate {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        max_card: Option<usize>,
    },
    /// Nullspace constant at sparsity s.
    Nsc {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        sparsity: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// Girth and the largest uniformly recoverable sparsity.
    Girth { file: PathBuf },
    /// Simple cycles, one per line as sorted edge indices.
    Cycles {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
        cap: u64,
    },
    /// Decide MASC membership of an edge set.
    MascCheck {
        file: PathBuf,
        #[arg(long)]
        support: String,
        #[command(flatten)]
        strict: Strict,
    },
    /// Sample an Erdős–Rényi graph and print it in graph-file format.
    Er {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct OmegaArgs {
    /// Measured frequencies; closed under k ↦ n−k before use.
    #[arg(long, value_delimiter = ',')]
    omega: Option<Vec<usize>>,
    /// Contiguous Ω = {0..m̄} ∪ {n−m̄..n−1}.
    #[arg(long)]
    mbar: Option<usize>,
}

impl OmegaArgs {
    fn spec(&self, n: usize) -> Result<PartialDftSpec> {
        match (&self.omega, self.mbar) {
            (Some(raw), None) => symmetrize_omega(n, raw),
            (None, Some(m)) => PartialDftSpec::contiguous(n, m),
            _ => Err(MascError::usage("give exactly one of --omega or --mbar")),
        }
    }
}

#[derive(Subcommand, Debug)]
enum DftCommand {
    /// Decide MASC membership of a support.
    MascCheck {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        omega: OmegaArgs,
        #[arg(long)]
        support: String,
        /// Check a seeded sample of Γ sets instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        strict: Strict,
    },
    /// Upper bound (or exact value) of the maximal recoverable sparsity level.
    Mrsl {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        omega: OmegaArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimize over every Γ instead of a sample.
        #[arg(long)]
        exact: bool,
    },
    /// Coherence lower bound n / (2(n − |Ω|)).
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mbar: usize,
    },
}

enum Outcome {
    Done,
    Boundary,
}

fn exit_code(e: &MascError) -> i32 {
    match e {
        MascError::Usage(_) | MascError::Input(_) | MascError::Json(_) => 2,
        MascError::Budget { .. } => 3,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::Boundary) => 4,
        Err(e) => {
            let _ = writeln!(err, "masckit: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| MascError::input(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<RealMatrix> {
    parse_real_matrix(&read(path)?)
}

fn print_verdict(out: &mut dyn Write, v: &MembershipVerdict, strict: bool) -> Result<Outcome> {
    writeln!(out, "{}", v.to_json())?;
    Ok(if strict && !v.decided { Outcome::Boundary } else { Outcome::Done })
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Recover { matrix, signal, tol } => {
            let phi = load_matrix(&matrix)?;
            let x: Vec<f64> = parse_real_vector(&read(&signal)?)?.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
            let sol = basis_pursuit(&RecoveryProblem::from_signal(&phi, &x)?)?;
            let dist = sol.x.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let status = match sol.status {
                LpStatus::Optimal => "optimal",
                LpStatus::PossiblyNonUnique => "possibly-non-unique",
            };
            let report = json!({ "recovered": dist <= tol, "distance": dist, "status": status, "pivots": sol.pivots, "x": sol.x });
            writeln!(out, "{report}")?;
        }
        Command::Rate { matrix, sparsity, trials, seed, tol } => {
            let phi = load_matrix(&matrix)?;
            let r = recovery_rate(&phi, &TrialConfig { sparsity, trials, seed, tol })?;
            writeln!(out, "s,trials,successes,rate")?;
            writeln!(out, "{sparsity},{trials},{},{}", r.successes, r.rate())?;
        }
        Command::Masc(m) => return masc(m, out),
        Command::Graph(g) => return graph(g, out),
        Command::Dft(d) => return dft(d, out),
        Command::Experiment { config, fast, svg } => {
            let cfg = ExperimentConfig::load(&config)?;
            let base = config.parent().map(Path::to_path_buf).unwrap_or_default();
            let resolve = |p: &PathBuf| if p.is_relative() { base.join(p) } else { p.clone() };
            let result = run_experiment(&cfg, &RunOptions { fast, base_dir: Some(base.clone()) })?;
            match cfg.output.as_ref().map(resolve) {
                Some(path) => {
                    std::fs::write(&path, &result.csv)?;
                    writeln!(err, "{}: {} -> {}", result.kind.name(), result.summary, path.display())?;
                    if svg {
                        let svg_path = cfg.svg.as_ref().map(resolve).unwrap_or_else(|| path.with_extension("svg"));
                        emit_plot(&path, &PlotSpec::default_for(cfg.kind), &svg_path)?;
                        writeln!(err, "plot -> {}", svg_path.display())?;
                    }
                }
                None if svg => return Err(MascError::usage("--svg needs an `output` path in the config")),
                None => {
                    out.write_all(result.csv.as_bytes())?;
                    writeln!(err, "{}: {}", result.kind.name(), result.summary)?;
                }
            }
        }
    }
    Ok(Outcome::Done)
}

fn masc(cmd: MascCommand, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        MascCommand::Check { matrix, support, strict } => {
            let phi = load_matrix(&matrix)?;
            let s = SupportSet::parse(phi.cols(), &support)?;
            let v = masc_contains(&nullspace_basis(&phi)?, &s, None)?;
            return print_verdict(out, &v, strict.strict);
        }
        MascCommand::Enumerate { matrix, max_card } => {
            let phi = load_matrix(&matrix)?;
            let summary = masc_enumerate_with(&nullspace_basis(&phi)?, max_card.unwrap_or(phi.cols()), crate::masc::DEFAULT_MAX_ENUM_DIM)?;
            writeln!(out, "{}", summary.to_json())?;
        }
        MascCommand::Nsc { matrix, sparsity } => {
            let phi = load_matrix(&matrix)?;
            let c = nullspace_constant(sparsity, &nullspace_basis(&phi)?)?;
            let half = num_rational::BigRational::new(1.into(), 2.into());
            writeln!(out, "{}", json!({ "s": sparsity, "nsc": rational_string(&c), "nup": c < half }))?;
        }
    }
    Ok(Outcome::Done)
}

fn load_graph(path: &Path) -> Result<DirectedSimpleGraph> {
    DirectedSimpleGraph::parse(&read(path)?)
}

fn graph(cmd: GraphCommand, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        GraphCommand::Girth { file } => {
            let g = load_graph(&file)?;
            let report = json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "girth": girth(&g),
                "max_uniform_sparsity": max_uniform_sparsity(&g),
            });
            writeln!(out, "{report}")?;
        }
        GraphCommand::Cycles { file, cap } => {
            let g = load_graph(&file)?;
            for c in enumerate_simple_cycles_capped(&g, cap)? {
                let edges: Vec<String> = c.edges.iter().map(usize::to_string).collect();
                writeln!(out, "{}", edges.join(" "))?;
            }
        }
        GraphCommand::MascCheck { file, support, strict } => {
            let g = load_graph(&file)?;
            let s = SupportSet::parse(g.edge_count(), &support)?;
            return print_verdict(out, &masc_contains_graph(&g, &s)?, strict.strict);
        }
        GraphCommand::Er { vertices, p, seed } => {
            out.write_all(erdos_renyi(vertices, p, seed)?.to_text().as_bytes())?;
        }
    }
    Ok(Outcome::Done)
}

fn dft(cmd: DftCommand, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        DftCommand::MascCheck { n, omega, support, samples, seed, strict } => {
            let spec = omega.spec(n)?;
            let s = SupportSet::parse(n, &support)?;
            let v = match samples {
                None => masc_contains_dft(&spec, &s)?,
                Some(samples) => {
                    let mode = GammaMode::Sampled { samples, seed };
                    DftOracle::with_options(&spec, WeightMethod::default_for(&spec), mode)?.contains(&s)?
                }
            };
            return print_verdict(out, &v, strict.strict);
        }
        DftCommand::Mrsl { n, omega, samples, seed, exact } => {
            let spec = omega.spec(n)?;
            let mut report = json!({ "n": n, "omega_size": spec.omega().len() });
            if exact {
                report["mode"] = "exact".into();
                report["s_max"] = s_max_exact(&spec, DEFAULT_GAMMA_CAP)?.into();
            } else {
                report["mode"] = "sampled".into();
                report["samples"] = samples.into();
                report["seed"] = seed.into();
                report["s_max"] = s_max_sampled(&spec, samples, seed)?.into();
            }
            if spec.mbar().is_some() {
                let b = coherence_lower_bound(&spec)?;
                report["bound"] = rational_string(&b.bound).into();
                report["s_guaranteed"] = b.s_guaranteed.into();
            }
            writeln!(out, "{report}")?;
        }
        DftCommand::Bound { n, mbar } => {
            let b = coherence_lower_bound(&PartialDftSpec::contiguous(n, mbar)?)?;
            let report = json!({
                "bound": rational_string(&b.bound),
                "bound_f64": b.bound.to_f64(),
                "s_guaranteed": b.s_guaranteed,
            });
            writeln!(out, "{report}")?;
        }
    }
    Ok(Outcome::Done)
}
