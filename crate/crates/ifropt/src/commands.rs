//! One function per subcommand.

use std::path::{Path, PathBuf};

use ifropt_core::netgraph::mst_weight;
use ifropt_core::optimizer::{
    build_model, full_model_selection_vars, heuristic_solve, pareto_frontier, solve_full, ProblemInstance,
    SolveStatus,
};
use ifropt_core::overlay::greedy_overlay;
use ifropt_core::rational::{to_exact_string, to_f64};
use ifropt_core::repair::{monte_carlo_repair_cost, system_repair_cost};
use ifropt_core::retrieval::retrieval_sets;
use ifropt_core::RepairOverlay;
use serde::Serialize;

use crate::cli::{Closure, Method, Overlay, Pareto, Retrieval, Simulate, Solve, VarCap};
use crate::error::{CliError, CliResult, Exit};
use crate::execute::{byte_check, ByteCheck};
use crate::instance::{to_ids, InstanceFile};
use crate::output::{csv_bytes, emit, write_atomic};
use crate::solution::{CostEntry, SolutionFile};

fn load(path: &Path) -> CliResult<ProblemInstance> {
    InstanceFile::read(path)?.to_instance()
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s.into_bytes()
}

fn check_cap(instance: &ProblemInstance, cap: &VarCap) -> CliResult<()> {
    let vars = full_model_selection_vars(instance.n(), instance.rho, instance.k);
    if vars > cap.var_cap && !cap.force {
        return Err(CliError::usage(format!(
            "full model has {vars} selection variables, above the cap of {}; use --force or IFROPT_VAR_CAP",
            cap.var_cap
        )));
    }
    Ok(())
}

pub fn closure(args: &Closure) -> CliResult<Exit> {
    let instance = load(&args.instance)?;
    let n = instance.n();
    let mut header = vec!["node".to_string()];
    header.extend((1..=n).map(|i| i.to_string()));
    let rows: Vec<Vec<String>> = (0..n)
        .map(|i| {
            let mut row = vec![(i + 1).to_string()];
            row.extend(instance.closure.row(i).iter().map(|c| c.to_string()));
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    emit(args.output.out.as_deref(), &csv_bytes(&header, &rows)?)?;
    Ok(Exit::Success)
}

#[derive(Serialize)]
struct OverlayEntry {
    vertices: Vec<i64>,
    index: usize,
    mst_weight: u64,
}

#[derive(Serialize)]
struct OverlayReport {
    rho: usize,
    d: usize,
    hyperedges: Vec<OverlayEntry>,
    degrees: Vec<usize>,
}

pub fn overlay(args: &Overlay) -> CliResult<Exit> {
    let instance = load(&args.instance)?;
    let overlay = greedy_overlay(&instance.closure, instance.rho, instance.d).map_err(CliError::usage)?;
    let report = OverlayReport {
        rho: instance.rho,
        d: instance.d,
        hyperedges: overlay
            .hyperedges()
            .iter()
            .map(|e| {
                Ok(OverlayEntry {
                    vertices: to_ids(&e.vertices),
                    index: e.index,
                    mst_weight: mst_weight(&instance.closure, &e.vertices).map_err(CliError::internal)?,
                })
            })
            .collect::<CliResult<_>>()?,
        degrees: overlay.degrees(),
    };
    emit(args.output.out.as_deref(), &json_bytes(&report))?;
    Ok(Exit::Success)
}

#[derive(Serialize)]
struct RetrievalReport {
    k: usize,
    w: usize,
    fixed: Vec<Vec<i64>>,
    chosen: Vec<Vec<i64>>,
    /// Overlay hyperedges hit by each set, fixed sets first.
    hits: Vec<usize>,
}

pub fn retrieval(args: &Retrieval) -> CliResult<Exit> {
    let instance = load(&args.instance)?;
    let overlay: RepairOverlay = match &args.solution {
        Some(path) => SolutionFile::read(path)?.to_plan(&instance)?.overlay,
        None => greedy_overlay(&instance.closure, instance.rho, instance.d).map_err(CliError::usage)?,
    };
    let config =
        retrieval_sets(&overlay, instance.k, instance.w, &instance.fixed_sets).map_err(CliError::usage)?;
    let report = RetrievalReport {
        k: instance.k,
        w: instance.w,
        fixed: config.fixed.iter().map(|s| to_ids(s)).collect(),
        chosen: config.chosen.iter().map(|s| to_ids(s)).collect(),
        hits: config
            .all_sets()
            .map(|s| overlay.hyperedges().iter().filter(|e| e.hits(s)).count())
            .collect(),
    };
    emit(args.output.out.as_deref(), &json_bytes(&report))?;
    Ok(Exit::Success)
}

fn status_exit(status: SolveStatus) -> Exit {
    match status {
        SolveStatus::Optimal => Exit::Success,
        SolveStatus::Infeasible | SolveStatus::Unbounded => Exit::Infeasible,
    }
}

pub fn solve(args: &Solve) -> CliResult<Exit> {
    let instance = load(&args.instance)?;
    let relax = args.relax_b || args.method == Method::Lp;
    if args.method != Method::Heuristic || args.dump_model.is_some() {
        check_cap(&instance, &args.cap)?;
    }
    if let Some(path) = &args.dump_model {
        let layout = build_model(&instance, relax)?;
        write_atomic(path, layout.model.to_string().as_bytes())?;
    }
    let solution = match args.method {
        Method::Ilp | Method::Lp => solve_full(&instance, relax)?,
        Method::Heuristic => heuristic_solve(&instance, relax)?,
    };
    let file = SolutionFile::from_solution(&solution, args.method.name(), relax, instance.object_size);
    if solution.plan.is_some() {
        // what goes to disk must read back as the same design
        file.to_plan(&instance)?;
    }
    let mut text = file.to_json();
    text.push('\n');
    emit(args.output.out.as_deref(), text.as_bytes())?;
    if solution.status != SolveStatus::Optimal {
        eprintln!("ifropt: {:?}", solution.status);
    }
    Ok(status_exit(solution.status))
}

fn witness_path(args: &Pareto, index: usize) -> Option<PathBuf> {
    let name = |stem: &str| format!("{stem}-witness-{index}.json");
    match (&args.witness_dir, &args.output.out) {
        (Some(dir), out) => {
            let stem = out
                .as_ref()
                .and_then(|o| o.file_stem())
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "pareto".into());
            Some(dir.join(name(&stem)))
        }
        (None, Some(out)) => {
            let stem = out.file_stem()?.to_string_lossy().into_owned();
            Some(out.with_file_name(name(&stem)))
        }
        (None, None) => None,
    }
}

pub fn pareto(args: &Pareto) -> CliResult<Exit> {
    if args.relax_b {
        return Err(CliError::usage(
            "pareto works on integral block sizes; continuous frontiers are not supported",
        ));
    }
    let instance = load(&args.instance)?;
    check_cap(&instance, &args.cap)?;
    let frontier = pareto_frontier(&instance)?;
    let mut rows = Vec::new();
    for (i, point) in frontier.iter().enumerate() {
        let witness = match witness_path(args, i + 1) {
            Some(path) => {
                let file = SolutionFile::from_solution(&point.witness, "pareto", false, instance.object_size);
                file.to_plan(&instance)?;
                let mut text = file.to_json();
                text.push('\n');
                write_atomic(&path, text.as_bytes())?;
                path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            }
            None => String::new(),
        };
        rows.push(vec![
            to_exact_string(&point.repair_cost),
            to_exact_string(&point.storage_cost),
            to_f64(&point.repair_cost).to_string(),
            to_f64(&point.storage_cost).to_string(),
            witness,
        ]);
    }
    let header = ["c_r", "c_s", "c_r_decimal", "c_s_decimal", "witness"];
    emit(args.output.out.as_deref(), &csv_bytes(&header, &rows)?)?;
    if frontier.is_empty() {
        eprintln!("ifropt: infeasible, the frontier is empty");
        return Ok(Exit::Infeasible);
    }
    Ok(Exit::Success)
}

#[derive(Serialize)]
struct SimulationReport {
    trials: u64,
    seed: u64,
    analytic_c_r: CostEntry,
    empirical_mean: f64,
    stderr: f64,
    abs_gap: f64,
    within_three_stderr: bool,
    byte_check: Option<ByteCheck>,
    byte_check_skipped: Option<String>,
}

pub fn simulate(args: &Simulate) -> CliResult<Exit> {
    let instance = load(&args.instance)?;
    let plan = SolutionFile::read(&args.solution)?.to_plan(&instance)?;
    let analytic = system_repair_cost(&plan.overlay, &plan.assignment, &instance.closure, &instance.failure_model)
        .map_err(CliError::internal)?;
    if analytic != plan.repair_cost {
        return Err(CliError::internal("pattern-by-pattern repair cost differs from the linear cost"));
    }
    let mc = monte_carlo_repair_cost(
        &plan.overlay,
        &plan.assignment,
        &instance.closure,
        &instance.failure_model,
        args.trials,
        args.seed,
    )
    .map_err(CliError::internal)?;
    let exact = to_f64(&analytic);
    let abs_gap = (mc.mean - exact).abs();
    let patterns: Vec<_> = instance
        .failure_model
        .distribution(instance.n(), instance.rho)
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let sets: Vec<Vec<usize>> = plan.retrieval.all_sets().cloned().collect();
    let (bytes, skipped) = match byte_check(
        &plan.overlay,
        &plan.assignment,
        &instance.closure,
        &patterns,
        &sets,
        args.packet_len,
        args.seed,
    ) {
        Ok(r) => (Some(r), None),
        Err(e) if e.exit == Exit::Usage => (None, Some(e.message)),
        Err(e) => return Err(e),
    };
    let restored = bytes.as_ref().is_none_or(|b| b.restored && b.max_discrepancy == 0.0);
    let report = SimulationReport {
        trials: mc.trials,
        seed: args.seed,
        analytic_c_r: CostEntry::new(&analytic),
        empirical_mean: mc.mean,
        stderr: mc.stderr,
        abs_gap,
        within_three_stderr: abs_gap <= 3.0 * mc.stderr,
        byte_check: bytes,
        byte_check_skipped: skipped,
    };
    emit(args.output.out.as_deref(), &json_bytes(&report))?;
    if !restored {
        return Err(CliError::internal("a simulated repair did not restore the cluster exactly"));
    }
    Ok(Exit::Success)
}
