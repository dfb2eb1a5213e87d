//! Command-line interface: graph generation, spectra, bound reports,
//! connectivity, p-Laplacian gaps, surgery scripts, parameter sweeps and the
//! verification suite.
//!
//! Exit codes: 0 = success / all bounds hold, 1 = a violated bound or failed
//! criterion, 2 = solver incompleteness.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use qgraph::bounds::{self, Tolerances};
use qgraph::graph::{CombinatorialGraph, MatrixKind};
use qgraph::io::{self, GraphFile, RunConfig};
use qgraph::metric::MetricGraph;
use qgraph::p_laplacian::{
    discrete_gamma1_p, metric_mu1_p_upper, MeshOptions, PExponent, PGapOptions,
};
use qgraph::solver::{self, SolverError, SolverOptions};
use qgraph::surgery::{self, generators as gen, SurgeryOp};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "qgraph", about = "Spectral toolkit for combinatorial and metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a canonical graph family as JSON.
    Generate {
        /// Family name: path, cycle, complete, complete-bipartite, star,
        /// wheel, hypercube, petersen, interval, circle, pumpkin, flower,
        /// stower, lollipop, necklace, regular-chain, dumbbell.
        family: String,
        /// Family parameters (counts, lengths, or comma-separated lists).
        params: Vec<String>,
        /// Emit combinatorial families as unit-equilateral metric graphs.
        #[arg(long)]
        unit_metric: bool,
        /// Dirichlet vertex indices for metric families.
        #[arg(long, value_delimiter = ',')]
        dirichlet: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a spectrum from a graph file.
    Spectrum {
        graph: PathBuf,
        /// Number of eigenvalues (metric graphs).
        #[arg(short, long, default_value_t = 10)]
        n: usize,
        /// Normalized Laplacian instead of the Laplacian (combinatorial).
        #[arg(long)]
        normalized: bool,
        /// Scan grid step override.
        #[arg(long)]
        grid: Option<f64>,
        /// Singularity threshold relative to the secular norm scale.
        #[arg(long, default_value_t = 1e-7)]
        tau: f64,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the bound catalog against a spectrum.
    Bounds {
        graph: PathBuf,
        /// Spectrum file (required for metric graphs; combinatorial spectra
        /// are recomputed on the fly).
        spectrum: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Absolute tolerance on the lambda scale.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge connectivity (discrete and metric notions).
    Connectivity {
        graph: PathBuf,
        /// Cross-check with the exhaustive subset search (small graphs).
        #[arg(long)]
        oracle: bool,
    },
    /// p-Laplacian spectral gap: discrete minimization, or a mesh upper
    /// approximation for metric graphs.
    Plap {
        graph: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Mesh subdivisions per edge for metric graphs.
        #[arg(long, default_value_t = 32)]
        mesh: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a JSON surgery script to a graph.
    Surgery {
        graph: PathBuf,
        script: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter sweep producing CSV for plotting.
    Sweep {
        /// Template: lollipop-pendant, chain-pumpkins, dumbbell-handle.
        template: String,
        /// Parameter values (floats; integers for chain-pumpkins).
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(short, long, default_value_t = 6)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Criterion subset, e.g. --only C1,C5.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err
                .downcast_ref::<SolverError>()
                .is_some_and(|e| matches!(e, SolverError::ScanIncomplete { .. }))
            {
                2
            } else {
                1
            };
            std::process::exit(code);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate { family, params, unit_metric, dirichlet, out } => {
            let text = generate(&family, &params, unit_metric, &dirichlet)?;
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Spectrum { graph, n, normalized, grid, tau, format, out } => {
            let file = io::read_graph(&graph)?;
            let text = match &file {
                GraphFile::Combinatorial(g) => {
                    let spec =
                        if normalized { g.normalized_spectrum()? } else { g.laplacian_spectrum() };
                    match format.as_str() {
                        "json" => serde_json::to_string_pretty(&spec)?,
                        "csv" => discrete_spectrum_csv(&spec),
                        other => bail!("unknown format {other}"),
                    }
                }
                GraphFile::Metric(mg) => {
                    let opts = SolverOptions {
                        grid_step: grid,
                        sigma_threshold_rel: tau,
                        ..Default::default()
                    };
                    let spec = solver::eigenvalues(mg, n, &opts)?;
                    match format.as_str() {
                        "json" => io::spectrum_to_json(&spec),
                        "csv" => io::spectrum_to_csv(&spec),
                        other => bail!("unknown format {other}"),
                    }
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Bounds { graph, spectrum, p, tol, format, out } => {
            let file = io::read_graph(&graph)?;
            let pe = PExponent::new(p).map_err(|e| anyhow!("{e}"))?;
            let tols = Tolerances { lambda: tol, ..Default::default() };
            let eval = match &file {
                GraphFile::Combinatorial(g) => {
                    let ctx = bounds::DiscreteContext::new(g, pe);
                    bounds::evaluate_discrete_all(&ctx, &tols)
                }
                GraphFile::Metric(mg) => {
                    let path =
                        spectrum.ok_or_else(|| anyhow!("metric graphs need a spectrum file"))?;
                    let spec = io::parse_spectrum(&std::fs::read_to_string(&path)?)?;
                    let ctx = bounds::MetricContext::new(mg, pe);
                    bounds::evaluate_metric_all(&ctx, &spec, &tols)
                }
            };
            let text = match format.as_str() {
                "json" => io::reports_to_json(&eval.reports),
                "csv" => io::reports_to_csv(&eval.reports),
                other => bail!("unknown format {other}"),
            };
            emit(out.as_deref(), &text)?;
            for (id, err) in &eval.errors {
                eprintln!("note: {id}: {err}");
            }
            Ok(if eval.violations().is_empty() { 0 } else { 1 })
        }
        Command::Connectivity { graph, oracle } => {
            let file = io::read_graph(&graph)?;
            match &file {
                GraphFile::Combinatorial(g) => {
                    let eta = g.edge_connectivity()?;
                    println!("edge_connectivity = {eta}");
                    if oracle {
                        let exact = g.edge_connectivity_exhaustive()?;
                        println!("exhaustive_oracle = {exact}");
                        if exact != eta {
                            bail!("max-flow connectivity {eta} disagrees with oracle {exact}");
                        }
                    }
                }
                GraphFile::Metric(mg) => {
                    println!("metric_edge_connectivity = {}", mg.metric_edge_connectivity());
                    println!("discrete_edge_connectivity = {}", mg.discrete_edge_connectivity());
                    if oracle {
                        let reduced = mg.suppress_degree_two();
                        if let Ok(g) = reduced.underlying_combinatorial() {
                            println!("exhaustive_oracle = {}", g.edge_connectivity_exhaustive()?);
                        } else {
                            println!("exhaustive_oracle = n/a (loops present)");
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Plap { graph, p, restarts, mesh, seed } => {
            let file = io::read_graph(&graph)?;
            let pe = PExponent::new(p).map_err(|e| anyhow!("{e}"))?;
            match &file {
                GraphFile::Combinatorial(g) => {
                    let opts = PGapOptions { restarts, seed, ..Default::default() };
                    let r = discrete_gamma1_p(g, pe, &opts).map_err(|e| anyhow!("{e}"))?;
                    println!("gamma_1^(p) = {}", io::fmt_f64(r.value));
                    println!("eigen_equation_residual = {:.3e}", r.residual);
                    println!("gradient_norm = {:.3e}", r.grad_norm);
                }
                GraphFile::Metric(mg) => {
                    let opts = MeshOptions { restarts, seed, ..Default::default() };
                    let v = metric_mu1_p_upper(mg, pe, mesh, &opts).map_err(|e| anyhow!("{e}"))?;
                    println!("mu_1^(p) upper (mesh {mesh}) = {}", io::fmt_f64(v));
                }
            }
            Ok(0)
        }
        Command::Surgery { graph, script, out } => {
            let file = io::read_graph(&graph)?;
            let ops: Vec<SurgeryOp> = serde_json::from_str(&std::fs::read_to_string(&script)?)
                .context("parsing surgery script")?;
            let text = match &file {
                GraphFile::Combinatorial(g) => {
                    let result = surgery::apply_combinatorial_ops(g, &ops)?;
                    io::combinatorial_to_json(&result)
                }
                GraphFile::Metric(mg) => {
                    let result = surgery::apply_metric_ops(mg, &ops)?;
                    for v in result.validate() {
                        eprintln!("note: result violation: {v:?}");
                    }
                    io::metric_to_json(&result)
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Sweep { template, values, n, out } => {
            let text = sweep(&template, &values, n)?;
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Verify { seed, only } => {
            let filter = if only.is_empty() { None } else { Some(only) };
            let results = qgraph::verify::run_suite(seed, filter.as_deref());
            let mut failed = 0;
            for r in &results {
                println!("{}", r.line());
                if !r.passed {
                    failed += 1;
                }
            }
            println!(
                "{} of {} criteria passed (seed {seed})",
                results.len() - failed,
                results.len()
            );
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn emit(out: Option<&std::path::Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path:?}"))?,
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}

fn parse_lengths(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| anyhow!("bad length {x:?}")))
        .collect()
}

fn generate(
    family: &str,
    params: &[String],
    unit_metric: bool,
    dirichlet: &[usize],
) -> Result<String> {
    let int = |i: usize| -> Result<usize> {
        params
            .get(i)
            .ok_or_else(|| anyhow!("missing parameter {i}"))?
            .parse()
            .map_err(|_| anyhow!("bad integer parameter {:?}", params[i]))
    };
    let float = |i: usize| -> Result<f64> {
        params
            .get(i)
            .ok_or_else(|| anyhow!("missing parameter {i}"))?
            .parse()
            .map_err(|_| anyhow!("bad float parameter {:?}", params[i]))
    };
    let combinatorial = |g: CombinatorialGraph| -> Result<String> {
        if unit_metric {
            Ok(io::metric_to_json(&gen::equilateral(&g, 1.0)))
        } else {
            Ok(io::combinatorial_to_json(&g))
        }
    };
    let metric = |g: MetricGraph| -> Result<String> {
        let g = if dirichlet.is_empty() {
            g
        } else {
            MetricGraph::new(g.vertex_count(), g.edges().to_vec(), dirichlet)?
        };
        Ok(io::metric_to_json(&g))
    };
    match family {
        "path" => combinatorial(gen::path(int(0)?)),
        "cycle" => combinatorial(gen::cycle(int(0)?)),
        "complete" => combinatorial(gen::complete(int(0)?)),
        "complete-bipartite" => combinatorial(gen::complete_bipartite(int(0)?, int(1)?)),
        "star" => combinatorial(gen::star(int(0)?)),
        "wheel" => combinatorial(gen::wheel(int(0)?)),
        "hypercube" => combinatorial(gen::hypercube(int(0)?)),
        "petersen" => combinatorial(gen::petersen()),
        "interval" => metric(gen::interval(float(0)?)),
        "circle" => metric(gen::circle(float(0)?)),
        "pumpkin" => {
            metric(gen::pumpkin(&parse_lengths(params.first().map(String::as_str).unwrap_or(""))?))
        }
        "flower" => {
            metric(gen::flower(&parse_lengths(params.first().map(String::as_str).unwrap_or(""))?))
        }
        "stower" => {
            let loops = parse_lengths(params.first().map(String::as_str).unwrap_or(""))?;
            let stars = parse_lengths(params.get(1).map(String::as_str).unwrap_or(""))?;
            metric(gen::stower(&loops, &stars))
        }
        "lollipop" => metric(gen::lollipop(float(0)?, float(1)?)),
        "necklace" => {
            let slices = parse_lengths(params.first().map(String::as_str).unwrap_or(""))?;
            let ends = match params.get(1) {
                Some(s) => {
                    let pair = parse_lengths(s)?;
                    if pair.len() != 2 {
                        bail!("end loops need two lengths");
                    }
                    Some((pair[0], pair[1]))
                }
                None => None,
            };
            metric(gen::symmetric_necklace(&slices, ends))
        }
        "regular-chain" => metric(gen::regular_pumpkin_chain(int(0)?, int(1)?, float(2)?)),
        "dumbbell" => metric(gen::pumpkin_dumbbell(int(0)?, float(1)?, float(2)?)),
        other => bail!("unknown family {other:?}"),
    }
}

fn discrete_spectrum_csv(spec: &qgraph::graph::DiscreteSpectrum) -> String {
    let kind = match spec.matrix_kind {
        MatrixKind::Laplacian => "laplacian",
        MatrixKind::NormalizedLaplacian => "normalized_laplacian",
    };
    let mut out = String::from("index,eigenvalue,kind\n");
    for (i, v) in spec.eigenvalues.iter().enumerate() {
        out.push_str(&format!("{i},{},{kind}\n", io::fmt_f64(*v)));
    }
    out
}

/// Sweep templates reproduce the figure-style data: eigenvalues against the
/// catalog bounds as one parameter moves.
fn sweep(template: &str, values: &[f64], n: usize) -> Result<String> {
    if values.is_empty() {
        bail!("sweep needs --values");
    }
    let cfg = RunConfig::default();
    let p2 = PExponent::new(2.0).unwrap();
    let pi = std::f64::consts::PI;
    let mut header = vec!["param".to_string()];
    for k in 1..=n {
        header.push(format!("lambda_{k}"));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    match template {
        // Pendant length shrinking toward the bare loop: odd eigenvalues sit
        // on the lower Betti bound, even ones approach the upper bound.
        "lollipop-pendant" => {
            header.extend((2..=n).map(|k| format!("lower_{k}")));
            header.extend((2..=n).map(|k| format!("upper_{k}")));
            for &eps in values {
                let mg = gen::lollipop(1.0, eps);
                let spec = solver::eigenvalues(&mg, n, &cfg.solver_options())?;
                let l = mg.total_length();
                let mut row = vec![eps];
                row.extend(spec.eigenvalues.iter().take(n));
                for k in 2..=n {
                    row.push((k as f64 - 1.0).powi(2) * pi * pi / (l * l));
                }
                for k in 2..=n {
                    row.push((k as f64).powi(2) * pi * pi / (l * l));
                }
                rows.push(row);
            }
        }
        // eta-regular chains with more, shorter pumpkins: the refined
        // connectivity bound's gap closes as the longest edge shrinks.
        "chain-pumpkins" => {
            header.push("bound_b7".to_string());
            header.push("gap_to_bound".to_string());
            for &count in values {
                let pumpkins = count.round() as usize;
                if pumpkins == 0 {
                    bail!("pumpkin count must be positive");
                }
                let mg = gen::regular_pumpkin_chain(3, pumpkins, 6.0);
                let spec = solver::eigenvalues(&mg, n, &cfg.solver_options())?;
                let ctx = bounds::MetricContext::new(&mg, p2);
                let b7 = bounds::metric_bound_value(&bounds::spec_by_id("B7")?, &ctx, 0)
                    .ok_or_else(|| anyhow!("B7 inapplicable"))?;
                let mu1 = spec.eigenvalues[1];
                let mut row = vec![pumpkins as f64];
                row.extend(spec.eigenvalues.iter().take(n));
                row.push(b7);
                row.push(mu1 - b7);
                rows.push(row);
            }
        }
        // Dumbbell handle shrinking with fixed connectivity and total
        // length scale: mu_1 grows without a connectivity-based ceiling.
        "dumbbell-handle" => {
            header.push("mu_1".to_string());
            for &handle in values {
                let mg = gen::pumpkin_dumbbell(4, 0.25, handle);
                let spec = solver::eigenvalues(&mg, n, &cfg.solver_options())?;
                let mut row = vec![handle];
                row.extend(spec.eigenvalues.iter().take(n));
                row.push(spec.eigenvalues[1]);
                rows.push(row);
            }
        }
        other => bail!("unknown sweep template {other:?}"),
    }
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, v)| if i == 0 { format!("{v}") } else { io::fmt_f64(*v) })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}
