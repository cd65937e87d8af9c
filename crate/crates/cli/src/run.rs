//! Experiment execution: resolve the graph, dispatch the command, write
//! artifacts (CSV outputs plus a JSON run manifest).

use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use gnls_core::asymptotics::{
    classify_large_mass_limit, classify_small_mass_limit, generalized_eigenpair, mass_sweep,
};
use gnls_core::error::Error as CoreError;
use gnls_core::fixtures::load_fixture;
use gnls_core::generate::{ball_from_source, GraphSource, Lattice1d, Lattice2d, RadialPotential};
use gnls_core::graph::{VertexFunction, WeightedGraph};
use gnls_core::io::load_graph;
use gnls_core::potential::{check_c3, sampled_growth_ok, truncation_study, PotentialProblem};
use gnls_core::solver::{minimize_normalized, ProblemSpec, SolverOptions};

use crate::config::{
    expand_masses, CommandKind, ExperimentConfig, LatticeDims, MassSpec, PotentialSpec,
    SourceSpec,
};
use crate::output;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 2 config/validation, 3 non-convergence, 4 file I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Core(CoreError::NotConverged { .. })
            | RunError::Core(CoreError::SweepNotSettled(_)) => 3,
            RunError::Core(CoreError::FileIo { .. }) => 4,
            RunError::Core(_) => 2,
            RunError::Io(_) => 4,
        }
    }
}

struct Resolved {
    graph: WeightedGraph,
    /// Potential, when one is configured or carried by the graph file.
    h: Option<VertexFunction>,
    origin: Option<String>,
}

fn lattice_source(
    dims: LatticeDims,
    potential: Option<&PotentialSpec>,
) -> Result<Box<dyn GraphSource>, RunError> {
    let radial = match potential {
        Some(PotentialSpec::Expression { a, b, gamma }) => RadialPotential {
            a: *a,
            b: *b,
            gamma: *gamma,
        },
        _ => RadialPotential::default(),
    };
    Ok(match dims {
        LatticeDims::One => Box::new(Lattice1d { potential: radial }),
        LatticeDims::Two => Box::new(Lattice2d { potential: radial }),
    })
}

fn resolve(config: &ExperimentConfig) -> Result<Resolved, RunError> {
    let mut resolved = match &config.source {
        SourceSpec::File(path) => {
            let loaded = load_graph(path)?;
            Resolved {
                graph: loaded.graph,
                h: loaded.h,
                origin: config.origin.clone(),
            }
        }
        SourceSpec::Fixture(name) => Resolved {
            graph: load_fixture(name)?.graph,
            h: None,
            origin: config.origin.clone(),
        },
        SourceSpec::Lattice { dims, radius } => {
            let source = lattice_source(*dims, config.potential.as_ref())?;
            let ball = ball_from_source(source.as_ref(), *radius)?;
            let h = config
                .potential
                .as_ref()
                .map(|_| ball.h.clone())
                .filter(|_| matches!(config.potential, Some(PotentialSpec::Expression { .. })));
            Resolved {
                graph: ball.graph,
                h,
                origin: Some(config.origin.clone().unwrap_or(ball.origin)),
            }
        }
    };

    // Explicit potential spec overrides whatever the source carried.
    match &config.potential {
        Some(PotentialSpec::Expression { a, b, gamma })
            if !matches!(config.source, SourceSpec::Lattice { .. }) =>
        {
            let origin = resolved.origin.clone().ok_or_else(|| {
                RunError::Config("--potential with rho needs --origin on this source".into())
            })?;
            let o = resolved.graph.resolve(&origin)?;
            let dist = resolved.graph.distances_from(o);
            let mut values = Vec::with_capacity(resolved.graph.len());
            for (i, d) in dist.iter().enumerate() {
                match d {
                    Some(d) => values.push(a + b * (*d as f64).powf(*gamma)),
                    None => {
                        return Err(RunError::Config(format!(
                            "vertex {:?} is unreachable from the origin; \
                             a radial potential needs a connected graph",
                            resolved.graph.id(i)
                        )))
                    }
                }
            }
            resolved.h = Some(VertexFunction::new(values));
        }
        Some(PotentialSpec::File(path)) => {
            let text = std::fs::read_to_string(path).map_err(|source| CoreError::FileIo {
                path: path.display().to_string(),
                source,
            })?;
            let map: std::collections::HashMap<String, f64> = serde_json::from_str(&text)
                .map_err(|e| RunError::Config(format!("potential file: {e}")))?;
            let mut values = Vec::with_capacity(resolved.graph.len());
            for i in 0..resolved.graph.len() {
                let id = resolved.graph.id(i);
                match map.get(id) {
                    Some(&v) if v > 0.0 => values.push(v),
                    Some(&v) => {
                        return Err(RunError::Config(format!(
                            "potential file: h({id}) = {v} is not positive"
                        )))
                    }
                    None => {
                        return Err(RunError::Config(format!(
                            "potential file: missing vertex {id:?}"
                        )))
                    }
                }
            }
            resolved.h = Some(VertexFunction::new(values));
        }
        _ => {}
    }

    Ok(resolved)
}

fn solver_options(config: &ExperimentConfig) -> SolverOptions {
    SolverOptions {
        tolerance: config.solver.tolerance,
        max_iterations: config.solver.max_iterations,
        restarts: config.solver.restarts,
        seed: config.solver.seed,
        ..SolverOptions::default()
    }
}

fn single_mass(config: &ExperimentConfig) -> Result<f64, RunError> {
    match config.mass {
        Some(MassSpec::Single(m)) => Ok(m),
        _ => Err(RunError::Config(
            "this command needs a single --mass".into(),
        )),
    }
}

fn mass_list(config: &ExperimentConfig) -> Result<Vec<f64>, RunError> {
    match &config.mass {
        Some(spec @ MassSpec::Range { .. }) => Ok(expand_masses(spec)),
        _ => Err(RunError::Config(
            "this command needs --mass-from/--mass-to/--mass-points".into(),
        )),
    }
}

fn write_manifest(
    config: &ExperimentConfig,
    wall_time: f64,
    results: serde_json::Value,
) -> Result<(), RunError> {
    let manifest = serde_json::json!({
        "config": config,
        "wall_time_seconds": wall_time,
        "results": results,
    });
    let path = config.out_dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap())?;
    Ok(())
}

fn out_path(config: &ExperimentConfig, name: &str) -> PathBuf {
    config.out_dir.join(name)
}

/// Executes one experiment; artifacts land in `config.out_dir`.
pub fn run(config: &ExperimentConfig) -> Result<(), RunError> {
    std::fs::create_dir_all(&config.out_dir)?;
    let started = Instant::now();
    let resolved = resolve(config)?;
    let opts = solver_options(config);

    match config.command {
        CommandKind::Solve => {
            if resolved.h.is_some() {
                return Err(RunError::Config(
                    "solve is the plain-constraint problem; drop the potential or use maximize"
                        .into(),
                ));
            }
            let m = single_mass(config)?;
            let spec = ProblemSpec::finite(config.p, m);
            let (solution, failed) = match minimize_normalized(&resolved.graph, &spec, &opts) {
                Ok(s) => (s, false),
                Err(CoreError::NotConverged { best, .. }) => (*best, true),
                Err(e) => return Err(e.into()),
            };
            output::write_solution_csv(
                &out_path(config, "solution.csv"),
                &resolved.graph,
                None,
                &solution,
                m,
            )?;
            write_manifest(
                config,
                started.elapsed().as_secs_f64(),
                serde_json::json!({
                    "converged": solution.converged,
                    "energy_j": solution.energy,
                    "lambda": solution.lambda,
                    "residual": solution.residual,
                    "mass": solution.mass,
                    "iterations": solution.iterations,
                }),
            )?;
            println!(
                "solve: J = {}, lambda = {}, residual = {:.3e}, converged = {}",
                solution.energy, solution.lambda, solution.residual, solution.converged
            );
            if failed {
                return Err(CoreError::NotConverged {
                    iterations: solution.iterations,
                    residual: solution.residual,
                    best: Box::new(solution),
                }
                .into());
            }
        }
        CommandKind::Maximize => {
            let m = single_mass(config)?;
            let h = resolved.h.clone().ok_or_else(|| {
                RunError::Config("maximize needs a potential (--potential, --potential-file, or h in the graph file)".into())
            })?;
            let origin = resolved
                .origin
                .clone()
                .or_else(|| Some(resolved.graph.id(0).to_string()))
                .unwrap();
            let prob = PotentialProblem::new(&resolved.graph, h.clone(), origin, config.p, m)?;
            let (solution, failed) =
                match gnls_core::potential::maximize_constrained(&resolved.graph, &prob, &opts) {
                    Ok(s) => (s, false),
                    Err(CoreError::NotConverged { best, .. }) => (*best, true),
                    Err(e) => return Err(e.into()),
                };
            output::write_solution_csv(
                &out_path(config, "solution.csv"),
                &resolved.graph,
                Some(&h),
                &solution,
                m,
            )?;
            write_manifest(
                config,
                started.elapsed().as_secs_f64(),
                serde_json::json!({
                    "converged": solution.converged,
                    "energy_script_j": solution.energy,
                    "lambda": solution.lambda,
                    "residual": solution.residual,
                    "mass": solution.mass,
                    "iterations": solution.iterations,
                }),
            )?;
            println!(
                "maximize: script-J = {}, lambda = {}, residual = {:.3e}, converged = {}",
                solution.energy, solution.lambda, solution.residual, solution.converged
            );
            if failed {
                return Err(CoreError::NotConverged {
                    iterations: solution.iterations,
                    residual: solution.residual,
                    best: Box::new(solution),
                }
                .into());
            }
        }
        CommandKind::Sweep | CommandKind::Limits => {
            let masses = mass_list(config)?;
            let spec = ProblemSpec {
                p: config.p,
                m: masses[0],
                h: resolved.h.clone(),
                origin: resolved.origin.clone(),
            };
            let records = mass_sweep(&resolved.graph, &spec, &masses, &opts)?;
            output::write_sweep_csv(&out_path(config, "sweep.csv"), &resolved.graph, &records)?;
            let failed = records.iter().filter(|r| !r.solution.converged).count();

            let mut results = serde_json::json!({
                "points": records.len(),
                "failed_points": failed,
            });
            if config.command == CommandKind::Limits {
                let decreasing = masses.len() >= 2 && masses[1] < masses[0];
                let class = if decreasing {
                    classify_small_mass_limit(&resolved.graph, &records, resolved.h.as_ref())
                } else {
                    classify_large_mass_limit(
                        &resolved.graph,
                        &records,
                        resolved.h.as_ref(),
                        config.p,
                    )
                };
                let class = match class {
                    Ok(c) => c,
                    Err(e) => {
                        // Keep the sweep artifacts; settle/consistency
                        // failures map to the non-convergence exit code.
                        write_manifest(config, started.elapsed().as_secs_f64(), results)?;
                        return Err(e.into());
                    }
                };
                let json = output::classification_json(&resolved.graph, &class);
                std::fs::write(
                    out_path(config, "classification.json"),
                    serde_json::to_string_pretty(&json).unwrap(),
                )?;
                println!(
                    "limits: kind = {}, multiplier = {}, residual = {:.3e}",
                    json["kind"].as_str().unwrap(),
                    class.limit_multiplier,
                    class.residual
                );
                results["classification"] = json;
            } else {
                println!(
                    "sweep: {} points, {} failed",
                    records.len(),
                    failed
                );
            }
            write_manifest(config, started.elapsed().as_secs_f64(), results)?;
            if failed > 0 {
                let worst = records
                    .iter()
                    .filter(|r| !r.solution.converged)
                    .max_by(|a, b| a.solution.residual.total_cmp(&b.solution.residual))
                    .unwrap();
                return Err(CoreError::NotConverged {
                    iterations: worst.solution.iterations,
                    residual: worst.solution.residual,
                    best: Box::new(worst.solution.clone()),
                }
                .into());
            }
        }
        CommandKind::Truncate => {
            let m = single_mass(config)?;
            let SourceSpec::Lattice { dims, .. } = &config.source else {
                return Err(RunError::Config(
                    "truncate works on --lattice sources".into(),
                ));
            };
            if config.radii.is_empty() {
                return Err(RunError::Config("truncate needs --radii r1,r2,...".into()));
            }
            if config.potential.is_none() {
                return Err(RunError::Config(
                    "truncate needs --potential \"a+b*rho^g\"".into(),
                ));
            }
            let source = lattice_source(*dims, config.potential.as_ref())?;
            let report =
                truncation_study(source.as_ref(), config.p, m, &config.radii, &opts)?;
            output::write_truncation_csv(&out_path(config, "truncation.csv"), &report)?;
            write_manifest(
                config,
                started.elapsed().as_secs_f64(),
                serde_json::json!({
                    "radii": report.radii,
                    "center_deltas": report.center_deltas,
                    "c3_holds": report.c3.holds,
                    "c3_lhs": report.c3.lhs,
                    "c3_rhs": report.c3.rhs,
                    "c3_note": gnls_core::potential::C3Report::NOTE,
                    "c2_growth_ok": report.c2_growth_ok,
                }),
            )?;
            println!(
                "truncate: deltas = {:?}, c3 holds = {} ({})",
                report.center_deltas,
                report.c3.holds,
                gnls_core::potential::C3Report::NOTE
            );
        }
        CommandKind::CheckConditions => {
            let m = single_mass(config)?;
            let h = resolved.h.clone().ok_or_else(|| {
                RunError::Config("check-conditions needs a potential".into())
            })?;
            let origin = resolved
                .origin
                .clone()
                .ok_or_else(|| RunError::Config("check-conditions needs --origin".into()))?;
            let min_mu = resolved.graph.min_measure();
            let h0 = h.values().iter().copied().fold(f64::INFINITY, f64::min);
            let growth = sampled_growth_ok(&resolved.graph, &h, &origin)?;
            let c3 = check_c3(&resolved.graph, &h, &origin, config.p, m)?;
            let report = serde_json::json!({
                "c1": { "min_mu": min_mu, "holds": min_mu > 0.0 },
                "c2": { "h0": h0, "holds": h0 > 0.0, "sampled_growth_ok": growth },
                "c3": { "holds": c3.holds, "lhs": c3.lhs, "rhs": c3.rhs,
                        "note": gnls_core::potential::C3Report::NOTE },
            });
            std::fs::write(
                out_path(config, "conditions.json"),
                serde_json::to_string_pretty(&report).unwrap(),
            )?;
            println!("(c1): min mu = {min_mu} (> 0: {})", min_mu > 0.0);
            println!(
                "(c2): h0 = {h0} (> 0: {}), sampled growth ok: {growth}",
                h0 > 0.0
            );
            println!(
                "(c3): {}, lhs = {}, rhs = {} ({})",
                if c3.holds { "holds" } else { "fails" },
                c3.lhs,
                c3.rhs,
                gnls_core::potential::C3Report::NOTE
            );
            write_manifest(config, started.elapsed().as_secs_f64(), report)?;
        }
        CommandKind::Eigen => {
            let pairs = generalized_eigenpair(&resolved.graph, resolved.h.as_ref())?;
            output::write_eigen_csv(&out_path(config, "eigen.csv"), &resolved.graph, &pairs)?;
            write_manifest(
                config,
                started.elapsed().as_secs_f64(),
                serde_json::json!({
                    "eigenvalues": pairs.iter().map(|(l, _)| *l).collect::<Vec<_>>(),
                }),
            )?;
            println!(
                "eigen: {} pairs, lambda_1 = {}",
                pairs.len(),
                pairs.first().map(|(l, _)| *l).unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}

/// Convenience for tests: run and reduce to the documented exit code.
pub fn run_exit_code(config: &ExperimentConfig) -> i32 {
    match run(config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
