//! Reproducible experiment runs that emit CSV tables.
//!
//! A run is described by an [`ExperimentConfig`]: a `kind`, a `parameters`
//! map and optional output paths. Each kind has its own parameter set; the
//! `seed` is always required, everything else defaults to the protocol the
//! kind reproduces. The CSV starts with `#` provenance lines (crate version,
//! kind, effective parameters and their SHA-256), and every data row carries
//! the seed that produced it, so a single row can be re-run on its own with
//! `masckit rate`.
//!
//! | kind | one row per |
//! |------|-------------|
//! | `fig3-cycles` | `(l, s)` on the graph `G_l` |
//! | `fig4-erdos-renyi` | `(k, s, graph)` with `p = p_crit^{k/9}` |
//! | `fig5-dft-recovery` | `s` for one partial DFT |
//! | `fig6-mrsl-large` | `j` with `|Ω| = 247 + 20j`, `n = 1009` |
//! | `fig7-mrsl-small` | `m̄` at `n = 61` |
//! | `custom` | `s` for a user matrix |

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::dft::{coherence_lower_bound, s_max_exact, s_max_sampled, DftOracle, PartialDftSpec, DEFAULT_GAMMA_CAP};
use crate::error::{MascError, Result};
use crate::graph::{erdos_renyi, girth, DirectedSimpleGraph, GraphOracle};
use crate::linalg::text::parse_real_matrix;
use crate::linalg::RealMatrix;
use crate::masc::{recoverable_fraction, FractionMode};
use crate::recovery::{mrsl_naive, recovery_rate, TrialConfig, DEFAULT_SUCCESS_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Fig3Cycles,
    Fig4ErdosRenyi,
    Fig5DftRecovery,
    Fig6MrslLarge,
    Fig7MrslSmall,
    Custom,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Fig3Cycles => "fig3-cycles",
            ExperimentKind::Fig4ErdosRenyi => "fig4-erdos-renyi",
            ExperimentKind::Fig5DftRecovery => "fig5-dft-recovery",
            ExperimentKind::Fig6MrslLarge => "fig6-mrsl-large",
            ExperimentKind::Fig7MrslSmall => "fig7-mrsl-small",
            ExperimentKind::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub parameters: Map<String, Value>,
    /// CSV destination; relative paths resolve against the config file.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// SVG destination; defaults to the CSV path with an `.svg` extension.
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Run-time switches that are not part of the recorded configuration.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Desk-scale preset, see [`run_experiment`].
    pub fast: bool,
    /// Directory that relative `matrix_file` paths resolve against.
    pub base_dir: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub kind: ExperimentKind,
    pub csv: String,
    pub summary: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig3 {
    #[serde(default = "fig3_lengths")]
    lengths: Vec<usize>,
    #[serde(default = "fig3_sparsities")]
    sparsities: Vec<usize>,
    #[serde(default = "fig3_trials")]
    trials: u64,
    seed: u64,
}

fn fig3_lengths() -> Vec<usize> {
    vec![3, 5, 7, 9, 11]
}
fn fig3_sparsities() -> Vec<usize> {
    (1..=6).collect()
}
fn fig3_trials() -> u64 {
    2000
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig4 {
    #[serde(default = "fig4_vertices")]
    vertices: usize,
    /// Exponents `k` of `p = p_crit^{k/9}`.
    #[serde(default = "fig4_exponents")]
    exponents: Vec<u32>,
    #[serde(default = "fig4_sparsities")]
    sparsities: Vec<usize>,
    #[serde(default = "fig4_graphs")]
    graphs: u64,
    #[serde(default = "fig4_trials")]
    trials: u64,
    seed: u64,
}

fn fig4_vertices() -> usize {
    100
}
fn fig4_exponents() -> Vec<u32> {
    (1..=10).collect()
}
fn fig4_sparsities() -> Vec<usize> {
    (1..=10).collect()
}
fn fig4_graphs() -> u64 {
    20
}
fn fig4_trials() -> u64 {
    100
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig5 {
    #[serde(default = "fig5_n")]
    n: usize,
    #[serde(default = "fig5_mbar")]
    mbar: usize,
    #[serde(default = "fig5_sparsities")]
    sparsities: Vec<usize>,
    #[serde(default = "fig5_trials")]
    trials: u64,
    seed: u64,
}

fn fig5_n() -> usize {
    19
}
fn fig5_mbar() -> usize {
    7
}
fn fig5_sparsities() -> Vec<usize> {
    (1..=10).collect()
}
fn fig5_trials() -> u64 {
    1000
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig6 {
    #[serde(default = "fig6_n")]
    n: usize,
    /// `|Ω_j| = 247 + 20j`.
    #[serde(default = "fig6_js")]
    js: Vec<usize>,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default)]
    exact: bool,
    seed: u64,
}

fn fig6_n() -> usize {
    1009
}
fn fig6_js() -> Vec<usize> {
    (0..=38).collect()
}
fn default_samples() -> usize {
    1000
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig7 {
    #[serde(default = "fig7_n")]
    n: usize,
    #[serde(default = "fig7_mbars")]
    mbars: Vec<usize>,
    #[serde(default = "default_samples")]
    samples: usize,
    /// Sampling size `K` of the naive descent.
    #[serde(default = "fig7_naive_k")]
    naive_k: u64,
    seed: u64,
}

fn fig7_n() -> usize {
    61
}
fn fig7_mbars() -> Vec<usize> {
    (7..=29).collect()
}
fn fig7_naive_k() -> u64 {
    1000
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Custom {
    /// Inline matrix text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix_file: Option<PathBuf>,
    /// Defaults to `1..=n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sparsities: Option<Vec<usize>>,
    #[serde(default = "custom_trials")]
    trials: u64,
    #[serde(default = "default_tol")]
    tol: f64,
    seed: u64,
}

fn custom_trials() -> u64 {
    100
}
fn default_tol() -> f64 {
    DEFAULT_SUCCESS_TOL
}

fn params<T: DeserializeOwned>(cfg: &ExperimentConfig) -> Result<T> {
    serde_json::from_value(Value::Object(cfg.parameters.clone()))
        .map_err(|e| MascError::input(format!("{} parameters: {e}", cfg.kind.name())))
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

fn render(kind: ExperimentKind, effective: &impl Serialize, table: &Table) -> Result<String> {
    let params = serde_json::to_string(effective)?;
    let digest = Sha256::digest(format!("{}\n{params}", kind.name()).as_bytes());
    let mut out = String::new();
    let _ = writeln!(out, "# masckit {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# kind: {}", kind.name());
    let _ = writeln!(out, "# parameters: {params}");
    let _ = writeln!(out, "# config-sha256: {}", hex::encode(digest));
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn rate(successes: u64, trials: u64) -> f64 {
    successes as f64 / trials as f64
}

fn check_sparsities(list: &[usize]) -> Result<()> {
    if list.is_empty() || list.contains(&0) {
        return Err(MascError::input("sparsity list must be non-empty and positive"));
    }
    Ok(())
}

/// Runs one experiment.
///
/// With `fast` set, the desk-scale preset overrides the corresponding
/// parameters: fig4 uses 5 graphs × 20 trials, fig7 a naive sampling size of
/// 200, fig3 and fig5 200 trials. Other kinds are unaffected. The recorded
/// parameters are always the effective ones.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentOutput> {
    let kind = cfg.kind;
    let (csv, summary) = match kind {
        ExperimentKind::Fig3Cycles => {
            let mut p: Fig3 = params(cfg)?;
            if opts.fast {
                p.trials = 200;
            }
            let t = fig3(&p)?;
            let summary = format!("{} (l, s) cells over G_l, {} trials each", t.rows.len(), p.trials);
            (render(kind, &p, &t)?, summary)
        }
        ExperimentKind::Fig4ErdosRenyi => {
            let mut p: Fig4 = params(cfg)?;
            if opts.fast {
                p.graphs = 5;
                p.trials = 20;
            }
            let t = fig4(&p)?;
            let summary = format!("{} graph rows, {} graphs × {} trials per cell", t.rows.len(), p.graphs, p.trials);
            (render(kind, &p, &t)?, summary)
        }
        ExperimentKind::Fig5DftRecovery => {
            let mut p: Fig5 = params(cfg)?;
            if opts.fast {
                p.trials = 200;
            }
            let t = fig5(&p)?;
            let summary = format!("{} sparsity levels at n = {}, m̄ = {}", t.rows.len(), p.n, p.mbar);
            (render(kind, &p, &t)?, summary)
        }
        ExperimentKind::Fig6MrslLarge => {
            let p: Fig6 = params(cfg)?;
            let t = fig6(&p)?;
            let summary = format!("{} measurement sets at n = {}, {} sampled Γ each", t.rows.len(), p.n, p.samples);
            (render(kind, &p, &t)?, summary)
        }
        ExperimentKind::Fig7MrslSmall => {
            let mut p: Fig7 = params(cfg)?;
            if opts.fast {
                p.naive_k = 200;
            }
            let (t, ordered) = fig7(&p)?;
            let summary = format!("bound ≤ sampled ≤ naive holds on {ordered} of {} rows", t.rows.len());
            (render(kind, &p, &t)?, summary)
        }
        ExperimentKind::Custom => {
            let p: Custom = params(cfg)?;
            let t = custom(&p, opts.base_dir.as_deref())?;
            let summary = format!("{} sparsity levels, {} trials each", t.rows.len(), p.trials);
            (render(kind, &p, &t)?, summary)
        }
    };
    Ok(ExperimentOutput { kind, csv, summary })
}

/// `G_l`: two vertices joined by paths of 1, 2 and `l − 1` edges, so its
/// simple cycles have lengths 3, `l` and `l + 1`.
pub fn cycle_family_graph(l: usize) -> Result<DirectedSimpleGraph> {
    if l < 3 {
        return Err(MascError::input(format!("G_l needs l ≥ 3, got {l}")));
    }
    DirectedSimpleGraph::theta(1, 2, l - 1)
}

fn fig3(p: &Fig3) -> Result<Table> {
    check_sparsities(&p.sparsities)?;
    let cells: Vec<(usize, usize)> =
        p.lengths.iter().flat_map(|&l| p.sparsities.iter().map(move |&s| (l, s))).filter(|&(l, s)| s <= l + 2).collect();
    let rows = cells
        .par_iter()
        .map(|&(l, s)| {
            let g = cycle_family_graph(l)?;
            let phi = g.incidence_matrix()?;
            let r = recovery_rate(&phi, &TrialConfig::new(s, p.trials, p.seed))?;
            let frac = recoverable_fraction(&GraphOracle::new(&g)?, s, FractionMode::Exact { cap: u64::MAX })?;
            Ok(vec![
                l.to_string(),
                g.edge_count().to_string(),
                girth(&g).map_or("inf".into(), |v| v.to_string()),
                s.to_string(),
                p.trials.to_string(),
                r.successes.to_string(),
                rate(r.successes, p.trials).to_string(),
                frac.value().to_string(),
                p.seed.to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { columns: &["l", "edges", "girth", "s", "trials", "successes", "rate", "masc_fraction", "seed"], rows })
}

/// `ln(v)/v`, the connectivity threshold of `G(v, p)`.
pub fn critical_probability(vertices: usize) -> f64 {
    (vertices as f64).ln() / vertices as f64
}

fn fig4(p: &Fig4) -> Result<Table> {
    check_sparsities(&p.sparsities)?;
    if p.vertices < 2 {
        return Err(MascError::input("Erdős–Rényi runs need at least 2 vertices"));
    }
    let pc = critical_probability(p.vertices);
    // graph g of exponent k uses seed + g for both the graph and its signals
    let cells: Vec<(u32, u64)> = p.exponents.iter().flat_map(|&k| (0..p.graphs).map(move |g| (k, g))).collect();
    let per_graph = cells
        .par_iter()
        .map(|&(k, g)| {
            let prob = pc.powf(k as f64 / 9.0);
            let seed = p.seed.wrapping_add(g);
            let graph = erdos_renyi(p.vertices, prob, seed)?;
            let mut rows = Vec::new();
            for &s in &p.sparsities {
                // graphs with fewer than s edges have no s-sparse signals
                let (successes, trials) = if graph.edge_count() == 0 || s > graph.edge_count() {
                    (0, 0)
                } else {
                    let r = recovery_rate(&graph.incidence_matrix()?, &TrialConfig::new(s, p.trials, seed))?;
                    (r.successes, p.trials)
                };
                rows.push((k, s, g, prob, graph.edge_count(), trials, successes, seed));
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut flat: Vec<_> = per_graph.into_iter().flatten().collect();
    flat.sort_by_key(|r| (r.0, r.1, r.2));
    let rows = flat
        .into_iter()
        .map(|(k, s, g, prob, edges, trials, successes, seed)| {
            let r = if trials == 0 { "nan".to_string() } else { rate(successes, trials).to_string() };
            vec![
                k.to_string(),
                prob.to_string(),
                s.to_string(),
                g.to_string(),
                edges.to_string(),
                trials.to_string(),
                successes.to_string(),
                r,
                seed.to_string(),
            ]
        })
        .collect();
    Ok(Table { columns: &["k", "p", "s", "graph", "edges", "trials", "successes", "rate", "seed"], rows })
}

fn fig5(p: &Fig5) -> Result<Table> {
    check_sparsities(&p.sparsities)?;
    let spec = PartialDftSpec::contiguous(p.n, p.mbar)?;
    let phi = spec.realified_matrix()?;
    let oracle = DftOracle::new(&spec)?;
    let rows = p
        .sparsities
        .iter()
        .filter(|&&s| s <= p.n)
        .map(|&s| {
            let r = recovery_rate(&phi, &TrialConfig::new(s, p.trials, p.seed))?;
            let frac = recoverable_fraction(&oracle, s, FractionMode::Exact { cap: DEFAULT_GAMMA_CAP })?;
            Ok(vec![
                s.to_string(),
                p.trials.to_string(),
                r.successes.to_string(),
                rate(r.successes, p.trials).to_string(),
                frac.value().to_string(),
                p.seed.to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { columns: &["s", "trials", "successes", "rate", "masc_fraction", "seed"], rows })
}

fn bound_row(spec: &PartialDftSpec) -> Result<(f64, usize)> {
    let b = coherence_lower_bound(spec)?;
    Ok((b.bound.to_f64().unwrap_or(f64::INFINITY), b.s_guaranteed))
}

fn fig6(p: &Fig6) -> Result<Table> {
    let rows = p
        .js
        .iter()
        .map(|&j| {
            let size = 247 + 20 * j;
            let spec = PartialDftSpec::contiguous(p.n, (size - 1) / 2)?;
            let (bound, guaranteed) = bound_row(&spec)?;
            let s_max = if p.exact { s_max_exact(&spec, DEFAULT_GAMMA_CAP)? } else { s_max_sampled(&spec, p.samples, p.seed)? };
            Ok(vec![
                j.to_string(),
                spec.omega().len().to_string(),
                spec.mbar().unwrap_or(0).to_string(),
                bound.to_string(),
                guaranteed.to_string(),
                s_max.to_string(),
                p.samples.to_string(),
                p.seed.to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { columns: &["j", "omega_size", "mbar", "bound", "s_guaranteed", "s_max_sampled", "samples", "seed"], rows })
}

fn fig7(p: &Fig7) -> Result<(Table, usize)> {
    let mut ordered = 0;
    let rows = p
        .mbars
        .iter()
        .map(|&mbar| {
            let spec = PartialDftSpec::contiguous(p.n, mbar)?;
            let (bound, guaranteed) = bound_row(&spec)?;
            let sampled = s_max_sampled(&spec, p.samples, p.seed)?;
            let naive = mrsl_naive(&spec.realified_matrix()?, p.naive_k, p.seed)?;
            if guaranteed <= sampled && sampled <= naive {
                ordered += 1;
            }
            Ok(vec![
                mbar.to_string(),
                spec.omega().len().to_string(),
                bound.to_string(),
                guaranteed.to_string(),
                sampled.to_string(),
                naive.to_string(),
                p.samples.to_string(),
                p.naive_k.to_string(),
                p.seed.to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = &["mbar", "omega_size", "bound", "s_guaranteed", "s_max_sampled", "s_naive", "samples", "naive_k", "seed"];
    Ok((Table { columns, rows }, ordered))
}

fn custom_matrix(p: &Custom, base: Option<&Path>) -> Result<RealMatrix> {
    match (&p.matrix, &p.matrix_file) {
        (Some(text), None) => parse_real_matrix(text),
        (None, Some(file)) => {
            let path = match base {
                Some(dir) if file.is_relative() => dir.join(file),
                _ => file.clone(),
            };
            parse_real_matrix(&std::fs::read_to_string(path)?)
        }
        _ => Err(MascError::input("custom experiments need exactly one of `matrix` or `matrix_file`")),
    }
}

fn custom(p: &Custom, base: Option<&Path>) -> Result<Table> {
    let phi = custom_matrix(p, base)?;
    let n = phi.cols();
    let sparsities = p.sparsities.clone().unwrap_or_else(|| (1..=n).collect());
    check_sparsities(&sparsities)?;
    let rows = sparsities
        .iter()
        .map(|&s| {
            let cfg = TrialConfig { sparsity: s, trials: p.trials, seed: p.seed, tol: p.tol };
            let r = recovery_rate(&phi, &cfg)?;
            Ok(vec![
                s.to_string(),
                p.trials.to_string(),
                r.successes.to_string(),
                rate(r.successes, p.trials).to_string(),
                p.seed.to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { columns: &["s", "trials", "successes", "rate", "seed"], rows })
}
