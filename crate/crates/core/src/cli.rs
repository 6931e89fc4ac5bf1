//! The `qgs` command line: sweeps over `k` for one graph file.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::edge::{self, DEFAULT_STEPS, MIN_STEPS};
use crate::error::{Error, Result};
use crate::graph::{EndRef, MetricGraph, VertexKind};
use crate::io::{self, fmt_real, json_matrix, matrix_cells, matrix_columns, JsonComplex, SweepResult, SweepRow};
use crate::linalg::{self, CMatrix};
use crate::lowk::{self, FitDeclined, LowKLimit};
use crate::solver::{self, Network, VertexForm};
use crate::vertex::{self, VertexRoute};

/// Tolerance handed to the zero-mode check by `lowk`.
pub const ZERO_MODE_TOL: f64 = 1e-6;
/// Grid used by `spectrum`.
pub const SPECTRUM_GRID: usize = 400;

#[derive(Debug, Parser)]
#[command(name = "qgs", version, about = "Scattering and spectra on thin fiber networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Reflection and transmission of one edge end
    Edge,
    /// Vertex scattering matrix by closed form and direct solve
    Vertex,
    /// Scattering matrix of the whole graph
    Scatter,
    /// Eigenvalues of a compact graph
    Spectrum,
    /// Zero-mode check and low-k scaling at one vertex
    Lowk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Solver {
    #[default]
    Limiting,
    Full,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    #[arg(long, global = true)]
    pub kmin: Option<f64>,
    /// Defaults to `kmin`
    #[arg(long, global = true)]
    pub kmax: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub ksteps: usize,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Incident lead (0-based, in edge order); adds its wave field to `scatter` JSON
    #[arg(long, global = true)]
    pub lead: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t)]
    pub solver: Solver,
    /// Output file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: Format,
    /// Edge id for `edge` (default: first edge); its `from` end is used
    #[arg(long, global = true)]
    pub edge: Option<String>,
    /// Vertex id for `vertex` and `lowk` (default: first vertex of degree >= 2)
    #[arg(long, global = true)]
    pub vertex: Option<String>,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub graph: MetricGraph,
    pub k_min: f64,
    pub k_max: f64,
    pub k_steps: usize,
    pub eps: Option<f64>,
    pub lead: Option<usize>,
    pub solver: Solver,
    pub format: Format,
    pub edge: Option<String>,
    pub vertex: Option<String>,
    pub steps: usize,
}

impl RunConfig {
    /// Reads the graph file and checks the numeric arguments.
    pub fn from_args(command: Command, args: &RunArgs, steps_env: Option<&str>) -> Result<Self> {
        let path = args
            .graph
            .as_ref()
            .ok_or_else(|| Error::invalid("--graph is required"))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let graph = io::parse_graph_file(&text)?;
        let k_min = args.kmin.ok_or_else(|| Error::invalid("--kmin is required"))?;
        let k_max = args.kmax.unwrap_or(k_min);
        if !(k_min > 0.0 && k_max >= k_min && k_max.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < kmin <= kmax, got [{k_min}, {k_max}]"
            )));
        }
        if args.ksteps < 1 {
            return Err(Error::invalid("--ksteps must be at least 1"));
        }
        if let Some(eps) = args.eps {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::invalid(format!("--eps must be positive, got {eps}")));
            }
        }
        let steps = match steps_env {
            None => DEFAULT_STEPS,
            Some(s) => match s.trim().parse::<usize>() {
                Ok(n) if n >= MIN_STEPS => n,
                _ => {
                    return Err(Error::invalid(format!(
                        "QGS_STEPS must be an integer >= {MIN_STEPS}, got `{s}`"
                    )))
                }
            },
        };
        Ok(RunConfig {
            command,
            graph,
            k_min,
            k_max,
            k_steps: args.ksteps,
            eps: args.eps,
            lead: args.lead,
            solver: args.solver,
            format: args.format,
            edge: args.edge.clone(),
            vertex: args.vertex.clone(),
            steps,
        })
    }

    /// Uniform grid in `k`, ascending.
    pub fn k_grid(&self) -> Vec<f64> {
        if self.k_steps == 1 {
            return vec![self.k_min];
        }
        (0..self.k_steps)
            .map(|i| self.k_min + (self.k_max - self.k_min) * i as f64 / (self.k_steps - 1) as f64)
            .collect()
    }

    fn eps(&self) -> Result<f64> {
        self.eps
            .ok_or_else(|| Error::invalid("--eps is required for this command"))
    }

    fn network(&self) -> Network {
        Network::new(self.graph.clone()).with_steps(self.steps)
    }

    fn star_vertex(&self) -> Result<usize> {
        match &self.vertex {
            Some(id) => {
                let v = self
                    .graph
                    .vertex_index(id)
                    .ok_or_else(|| Error::invalid(format!("no vertex `{id}`")))?;
                if self.graph.vertices()[v].kind != VertexKind::V2 {
                    return Err(Error::invalid(format!("vertex `{id}` has degree one")));
                }
                Ok(v)
            }
            None => self
                .graph
                .vertices()
                .iter()
                .position(|v| v.kind == VertexKind::V2)
                .ok_or_else(|| Error::invalid("graph has no vertex of degree >= 2")),
        }
    }
}

/// Output text plus notices meant for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub notices: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    match config.command {
        Command::Edge => run_edge(config),
        Command::Vertex => run_vertex(config),
        Command::Scatter => run_scatter(config),
        Command::Spectrum => run_spectrum(config),
        Command::Lowk => run_lowk(config),
    }
}

/// Process exit status for a failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Graph(_)
        | Error::Profile(_)
        | Error::InvalidArgument(_)
        | Error::NoChannels
        | Error::NotCompact => 2,
        Error::Singular { .. } => 3,
        _ => 4,
    }
}

fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("results always serialize")
}

#[derive(Serialize)]
struct EdgeRow {
    k: f64,
    r: JsonComplex,
    t: JsonComplex,
    flux_residual: f64,
    alpha: JsonComplex,
    beta: JsonComplex,
}

fn run_edge(config: &RunConfig) -> Result<RunOutput> {
    let g = &config.graph;
    let e = match &config.edge {
        Some(id) => g
            .edge_index(id)
            .ok_or_else(|| Error::invalid(format!("no edge `{id}`")))?,
        None => 0,
    };
    let q = g.end_potential(EndRef::from(e)).expect("every edge has a from end");
    let rows = config
        .k_grid()
        .par_iter()
        .map(|&k| {
            let pair = edge::line_scattering(&q, k, config.steps)?;
            let bc = edge::boundary_coefficients(&q, k, config.steps)?;
            Ok(EdgeRow {
                k,
                r: pair.r.into(),
                t: pair.t.into(),
                flux_residual: (pair.flux() - 1.0).abs(),
                alpha: bc.alpha.into(),
                beta: bc.beta.into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match config.format {
        Format::Json => json(&serde_json::json!({ "edge": g.edges()[e].id, "rows": rows })),
        Format::Csv => {
            let header: Vec<String> = [
                "k", "r_re", "r_im", "t_re", "t_im", "flux_residual", "alpha_re", "alpha_im", "beta_re",
                "beta_im",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    [
                        r.k,
                        r.r.re,
                        r.r.im,
                        r.t.re,
                        r.t.im,
                        r.flux_residual,
                        r.alpha.re,
                        r.alpha.im,
                        r.beta.re,
                        r.beta.im,
                    ]
                    .iter()
                    .map(|&x| fmt_real(x))
                    .collect()
                })
                .collect();
            csv(&header, &cells)
        }
    };
    Ok(RunOutput {
        text,
        notices: Vec::new(),
    })
}

struct VertexRow {
    k: f64,
    route: VertexRoute,
    t: CMatrix,
    max_difference: f64,
    unitarity_residual: f64,
    symmetry_residual: f64,
}

fn route_name(r: VertexRoute) -> &'static str {
    match r {
        VertexRoute::ClosedForm => "closed_form",
        VertexRoute::DirectFallback => "direct_fallback",
    }
}

fn run_vertex(config: &RunConfig) -> Result<RunOutput> {
    let v = config.star_vertex()?;
    let potentials = config.network().vertex_potentials(v);
    let rows = config
        .k_grid()
        .par_iter()
        .map(|&k| {
            let (t, route) = vertex::star_matrix(&potentials, k, config.steps)?;
            let direct = vertex::star_matrix_direct(&potentials, k, config.steps)?;
            let report = vertex::check_unitary_symmetric(&t, 1e-8);
            Ok(VertexRow {
                k,
                route,
                max_difference: linalg::op_norm(&(&t.t - &direct.t)),
                unitarity_residual: report.unitarity_residual,
                symmetry_residual: report.symmetry_residual,
                t: t.t,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let notices = rows
        .iter()
        .filter(|r| r.route == VertexRoute::DirectFallback)
        .map(|r| format!("k = {}: closed form has a pole, used the direct solve", r.k))
        .collect();
    let d = potentials.len();
    let text = match config.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "k": r.k,
                        "route": route_name(r.route),
                        "t": json_matrix(&r.t),
                        "max_difference": r.max_difference,
                        "unitarity_residual": r.unitarity_residual,
                        "symmetry_residual": r.symmetry_residual,
                    })
                })
                .collect();
            json(&serde_json::json!({ "vertex": config.graph.vertices()[v].id, "degree": d, "rows": rows }))
        }
        Format::Csv => {
            let mut header = vec!["k".to_string(), "route".into(), "max_difference".into()];
            header.extend(matrix_columns("t", d));
            header.push("unitarity_residual".into());
            header.push("symmetry_residual".into());
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut c = vec![fmt_real(r.k), route_name(r.route).into(), fmt_real(r.max_difference)];
                    c.extend(matrix_cells(&r.t));
                    c.push(fmt_real(r.unitarity_residual));
                    c.push(fmt_real(r.symmetry_residual));
                    c
                })
                .collect();
            csv(&header, &cells)
        }
    };
    Ok(RunOutput { text, notices })
}

/// Graph scattering sweep as a [`SweepResult`].
pub fn scatter_sweep(config: &RunConfig) -> Result<SweepResult> {
    let eps = config.eps()?;
    let net = config.network();
    let channels = config.graph.leads().len();
    if channels == 0 {
        return Err(Error::NoChannels);
    }
    let rows = config
        .k_grid()
        .par_iter()
        .map(|&k| {
            let (s, discrepancy) = match config.solver {
                Solver::Limiting => (solver::graph_smatrix(&net, k, eps)?, None),
                Solver::Full => (solver::graph_smatrix_full(&net, k, eps)?, None),
                Solver::Both => {
                    let lim = solver::solve_limiting_all(&net, k, eps, VertexForm::Amplitude)?;
                    let full = solver::solve_full_all(&net, k, eps)?;
                    let gap = lim
                        .iter()
                        .zip(&full)
                        .map(|(l, f)| l.max_difference(&f.wave))
                        .fold(0.0, f64::max);
                    (solver::graph_smatrix(&net, k, eps)?, Some(gap))
                }
            };
            Ok(SweepRow {
                k,
                eps,
                max_discrepancy: discrepancy,
                unitarity_residual: s.unitarity_residual,
                symmetry_residual: s.symmetry_residual,
                tau: s.tau,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { channels, rows })
}

fn run_scatter(config: &RunConfig) -> Result<RunOutput> {
    let sweep = scatter_sweep(config)?;
    let text = match (config.format, config.lead) {
        (Format::Csv, _) => sweep.to_csv(),
        (Format::Json, None) => sweep.to_json(),
        (Format::Json, Some(m)) => {
            let eps = config.eps()?;
            let net = config.network();
            let fields = config
                .k_grid()
                .par_iter()
                .map(|&k| {
                    let w = solver::solve_limiting_scattering(&net, k, eps, m)?;
                    let ends: Vec<_> = w
                        .ends()
                        .iter()
                        .zip(&w.amplitudes)
                        .map(|(end, (b, a))| {
                            serde_json::json!({
                                "edge": config.graph.edges()[end.edge].id,
                                "side": format!("{:?}", end.side).to_lowercase(),
                                "b": JsonComplex::from(*b),
                                "a": JsonComplex::from(*a),
                            })
                        })
                        .collect();
                    Ok(serde_json::json!({ "k": k, "ends": ends }))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut value: serde_json::Value = serde_json::from_str(&sweep.to_json()).unwrap();
            value["lead"] = m.into();
            value["fields"] = fields.into();
            json(&value)
        }
    };
    Ok(RunOutput {
        text,
        notices: Vec::new(),
    })
}

fn run_spectrum(config: &RunConfig) -> Result<RunOutput> {
    let eps = config.eps()?;
    if config.k_max <= config.k_min {
        return Err(Error::invalid("spectrum needs kmin < kmax"));
    }
    let net = config.network();
    let grid = config.k_steps.max(SPECTRUM_GRID);
    let mut lists: Vec<(&str, Vec<f64>)> = Vec::new();
    if config.solver != Solver::Full {
        lists.push(("limiting", solver::find_eigenvalues(&net, config.k_min, config.k_max, eps, grid)?));
    }
    if config.solver != Solver::Limiting {
        lists.push((
            "full",
            solver::find_eigenvalues_full(&net, config.k_min, config.k_max, eps, grid)?,
        ));
    }
    let text = match config.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("eps".into(), eps.into());
            for (name, ks) in &lists {
                obj.insert((*name).into(), serde_json::json!(ks));
            }
            json(&obj)
        }
        Format::Csv => {
            let header: Vec<String> = ["solver", "index", "k", "energy"].iter().map(|s| s.to_string()).collect();
            let rows: Vec<Vec<String>> = lists
                .iter()
                .flat_map(|(name, ks)| {
                    ks.iter().enumerate().map(move |(i, &k)| {
                        vec![name.to_string(), i.to_string(), fmt_real(k), fmt_real((k / eps).powi(2))]
                    })
                })
                .collect();
            csv(&header, &rows)
        }
    };
    Ok(RunOutput {
        text,
        notices: Vec::new(),
    })
}

fn run_lowk(config: &RunConfig) -> Result<RunOutput> {
    let v = config.star_vertex()?;
    let potentials = config.network().vertex_potentials(v);
    let report = lowk::neumann_zero_mode_check(&potentials, ZERO_MODE_TOL)?;
    let mut ks = config.k_grid();
    ks.reverse();
    let fit = lowk::low_k_scaling(&potentials, &ks, config.steps)?;
    let limit = match fit.limit {
        Some(LowKLimit::Dirichlet) => "dirichlet",
        Some(LowKLimit::Neumann) => "neumann",
        None => "none",
    };
    let declined = fit.declined.map(|d| match d {
        FitDeclined::NoVanishingNorm => "no_vanishing_norm",
        FitDeclined::NonMonotone => "non_monotone",
    });
    let mut notices = Vec::new();
    if let Some(d) = declined {
        notices.push(format!("slope fit declined: {d}"));
    }
    let text = match config.format {
        Format::Json => json(&serde_json::json!({
            "vertex": config.graph.vertices()[v].id,
            "zero_mode": {
                "smallest_eigenvalue_magnitude": report.smallest_eigenvalue_magnitude,
                "nearest_eigenvalue": report.nearest_eigenvalue,
                "extrapolated_eigenvalue": report.extrapolated_eigenvalue,
                "has_zero_mode": report.has_zero_mode,
                "tol": report.tol,
            },
            "scaling": {
                "k_samples": fit.k_samples,
                "norms_i_minus_t": fit.norms_minus,
                "norms_i_plus_t": fit.norms_plus,
                "limit": limit,
                "slope": fit.slope,
                "declined": declined,
            },
        })),
        Format::Csv => {
            let header: Vec<String> = [
                "k",
                "norm_i_minus_t",
                "norm_i_plus_t",
                "smallest_eigenvalue_magnitude",
                "has_zero_mode",
                "limit",
                "slope",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let rows: Vec<Vec<String>> = (0..fit.k_samples.len())
                .map(|i| {
                    vec![
                        fmt_real(fit.k_samples[i]),
                        fmt_real(fit.norms_minus[i]),
                        fmt_real(fit.norms_plus[i]),
                        fmt_real(report.smallest_eigenvalue_magnitude),
                        report.has_zero_mode.to_string(),
                        limit.to_string(),
                        fmt_real(fit.slope.unwrap_or(f64::NAN)),
                    ]
                })
                .collect();
            csv(&header, &rows)
        }
    };
    Ok(RunOutput { text, notices })
}

/// Parses arguments, runs, writes output; returns the exit status.
pub fn main_with<I, T>(args: I, steps_env: Option<&str>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::from_args(cli.command, &cli.args, steps_env).and_then(|cfg| {
        let out = run(&cfg)?;
        for n in &out.notices {
            eprintln!("qgs: {n}");
        }
        match &cli.args.out {
            Some(path) => std::fs::write(path, &out.text)
                .map_err(|e| Error::Numeric(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{}", out.text);
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qgs: {e}");
            exit_code(&e)
        }
    }
}
