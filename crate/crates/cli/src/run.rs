//! Command dispatch.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 unusable input state
//! (parse failure or invariant violation), 4 numeric failure (quadrature or
//! integration non-convergence, vanishing mean spin, violated premise);
//! residuals ride along in the message on standard error.

use std::fmt;
use std::path::Path;

use serde::Serialize;
use twomode::dephasing::{evolve_closed_form, negativity_decay_check, DephasingParams};
use twomode::entanglement::{negativity_closed_form, negativity_trace_norm};
use twomode::fock::{FockDensityMatrix, ModeBipartition, PureState};
use twomode::metrology::{
    convexity_bound_sweep, direction_triplet_grid, evolved_spin_mean, evolved_spin_variance,
    min_squeezing_scan, squeezing_parameter, DirectionTriplet,
};

use crate::cli::{
    BipartitionChoice, Cli, Command, EvolveArgs, Format, NegativityArgs, OutputArgs, ScanArgs,
    SqueezeArgs, StateSource,
};
use crate::export::{
    atomic_write, negativity_csv, squeeze_csv, summary_csv, summary_path, to_json, trajectory_csv,
    NegativityRow, PremiseRecord, SqueezeReportDoc, SqueezeRow, SummaryRow, TrajectoryRow,
};
use crate::state_io::load_state;

#[derive(Debug)]
pub enum CliError {
    /// Exit 2: flags or parameters outside their domain.
    Config(String),
    /// Exit 3: the input state failed to parse or violates invariants.
    State(String),
    /// Exit 4: a numerical backend failed or the quantity is undefined.
    Numeric(String),
    /// Exit 1: filesystem trouble.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::State(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::State(m) => write!(f, "invalid input state: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn numeric(e: twomode::Error) -> CliError {
    CliError::Numeric(e.to_string())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Negativity(args) => run_negativity(args),
        Command::Evolve(args) => run_evolve(args),
        Command::Squeeze(args) => run_squeeze(args),
        Command::Scan(args) => run_scan(args),
    }
}

/// Builders report configuration errors; file loading reports state errors.
fn build_state(source: &StateSource, n: Option<usize>) -> Result<FockDensityMatrix, CliError> {
    if let Some(path) = &source.state {
        return load_state(path);
    }
    let n = n.ok_or_else(|| CliError::Config("--n is required with --fock/--coherent".into()))?;
    if let Some(k) = source.fock {
        let state = PureState::fock(k, n).map_err(|e| CliError::Config(e.to_string()))?;
        return Ok(state.projector());
    }
    if let Some(params) = &source.coherent {
        let (xi, phi) = (params[0], params[1]);
        let state = PureState::coherent(xi, phi, n).map_err(|e| CliError::Config(e.to_string()))?;
        return Ok(state.projector());
    }
    Err(CliError::Config(
        "exactly one state source is required".into(),
    ))
}

fn to_spatial(rho: FockDensityMatrix) -> Result<FockDensityMatrix, CliError> {
    rho.change_bipartition(&ModeBipartition::spatial())
        .map_err(numeric)
}

fn write_artifact(output: &OutputArgs, path: &Path, contents: &str) -> Result<(), CliError> {
    let _ = output.seed; // all current commands are deterministic; reserved for randomized inputs
    atomic_write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run_negativity(args: NegativityArgs) -> Result<(), CliError> {
    let rho = build_state(&args.source, args.n)?;
    let bipartitions: Vec<ModeBipartition> = match args.bipartition {
        BipartitionChoice::Spatial => vec![ModeBipartition::spatial()],
        BipartitionChoice::Energy => vec![ModeBipartition::energy()],
        BipartitionChoice::Both => vec![ModeBipartition::spatial(), ModeBipartition::energy()],
    };
    let mut rows = Vec::new();
    for bp in &bipartitions {
        let expressed = rho.change_bipartition(bp).map_err(numeric)?;
        let closed = negativity_closed_form(&expressed);
        let trace = negativity_trace_norm(&expressed).map_err(numeric)?;
        println!(
            "bipartition={} closed_form={} trace_norm={}",
            bp.label(),
            closed.value,
            trace.value
        );
        rows.push(NegativityRow {
            bipartition: bp.label(),
            negativity_closed_form: closed.value,
            negativity_trace_norm: trace.value,
        });
    }
    if let Some(out) = &args.output.out {
        let contents = match args.output.format {
            Format::Csv => negativity_csv(&rows),
            Format::Json => {
                #[derive(Serialize)]
                struct Doc {
                    results: Vec<NegativityRow>,
                }
                to_json(&Doc { results: rows }).map_err(|e| CliError::Io(e.to_string()))?
            }
        };
        write_artifact(&args.output, out, &contents)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn run_evolve(args: EvolveArgs) -> Result<(), CliError> {
    let rho = to_spatial(build_state(&args.source, args.n)?)?;
    if args.gamma.is_nan() || args.gamma < 0.0 {
        return Err(CliError::Config(format!(
            "gamma = {} must be >= 0",
            args.gamma
        )));
    }
    let params = DephasingParams::new(args.gamma, args.t.points())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let trajectory = evolve_closed_form(&rho, &params).map_err(numeric)?;
    let decay = negativity_decay_check(&rho, &params).map_err(numeric)?;

    let mut trajectory_rows = Vec::new();
    let mut summary_rows = Vec::new();
    for ((t, state), sample) in trajectory.iter().zip(&decay) {
        for k in 0..state.dim() {
            for l in 0..state.dim() {
                let z = state.entry(k, l);
                trajectory_rows.push(TrajectoryRow {
                    t,
                    k,
                    l,
                    re: z.re,
                    im: z.im,
                });
            }
        }
        let in_energy = state
            .change_bipartition(&ModeBipartition::energy())
            .map_err(numeric)?;
        summary_rows.push(SummaryRow {
            t,
            negativity_spatial: sample.negativity,
            negativity_energy: negativity_closed_form(&in_energy).value,
            bound: sample.bound,
        });
    }

    match &args.output.out {
        Some(out) => match args.output.format {
            Format::Csv => {
                write_artifact(&args.output, out, &trajectory_csv(&trajectory_rows))?;
                let sp = summary_path(out);
                write_artifact(&args.output, &sp, &summary_csv(&summary_rows))?;
                println!("wrote {} and {}", out.display(), sp.display());
            }
            Format::Json => {
                #[derive(Serialize)]
                struct Doc {
                    trajectory: Vec<TrajectoryRow>,
                    summary: Vec<SummaryRow>,
                }
                let doc = Doc {
                    trajectory: trajectory_rows,
                    summary: summary_rows,
                };
                let contents = to_json(&doc).map_err(|e| CliError::Io(e.to_string()))?;
                write_artifact(&args.output, out, &contents)?;
                println!("wrote {}", out.display());
            }
        },
        None => {
            println!("t,negativity_spatial,negativity_energy,bound");
            for r in &summary_rows {
                println!(
                    "{},{},{},{}",
                    r.t, r.negativity_spatial, r.negativity_energy, r.bound
                );
            }
        }
    }
    Ok(())
}

/// Per-time squeezing record for a fixed triplet, without any premise
/// requirement (squeeze is allowed on already-squeezed inputs).
fn squeeze_sweep_rows(
    rho: &FockDensityMatrix,
    triplet: &DirectionTriplet,
    gamma: f64,
    times: &[f64],
    nodes: usize,
) -> Result<Vec<SqueezeRow>, CliError> {
    let params =
        DephasingParams::new(gamma, times.to_vec()).map_err(|e| CliError::Config(e.to_string()))?;
    let trajectory = evolve_closed_form(rho, &params).map_err(numeric)?;
    let n = rho.n_total() as f64;
    let mut rows = Vec::new();
    for (t, state) in trajectory.iter() {
        let direct = squeezing_parameter(state, triplet).map_err(numeric)?;
        let mean3 = evolved_spin_mean(rho, triplet.n3(), gamma, t, nodes).map_err(numeric)?;
        let var2 = evolved_spin_variance(rho, triplet.n2(), gamma, t, nodes).map_err(numeric)?;
        let bound_lhs = n * var2 / (mean3 * mean3);
        rows.push(SqueezeRow {
            t,
            xi_w_squared: direct.xi_w_squared,
            delta_theta_squared: direct.delta_theta_squared,
            bound_lhs,
            n2: triplet.n2(),
            n3: triplet.n3(),
        });
    }
    Ok(rows)
}

fn check_grid_args(grid_res: usize, nodes: usize) -> Result<(), CliError> {
    if grid_res < 8 {
        return Err(CliError::Config(format!(
            "--grid-res {grid_res} must be at least 8"
        )));
    }
    if nodes < 8 {
        return Err(CliError::Config(format!(
            "--nodes {nodes} must be at least 8"
        )));
    }
    Ok(())
}

fn run_squeeze(args: SqueezeArgs) -> Result<(), CliError> {
    check_grid_args(args.grid_res, args.nodes)?;
    let rho = to_spatial(build_state(&args.source, args.n)?)?;
    let scan = min_squeezing_scan(&rho, args.grid_res).map_err(numeric)?;
    let report = squeezing_parameter(&rho, &scan.argmin).map_err(numeric)?;
    println!(
        "scan_min_xi={} xi_w_squared={} delta_theta_squared={}",
        scan.min_xi, report.xi_w_squared, report.delta_theta_squared
    );

    match (&args.t, args.gamma) {
        (Some(grid), Some(gamma)) => {
            if gamma.is_nan() || gamma < 0.0 {
                return Err(CliError::Config(format!("gamma = {gamma} must be >= 0")));
            }
            let rows = squeeze_sweep_rows(&rho, &scan.argmin, gamma, &grid.points(), args.nodes)?;
            if let Some(out) = &args.output.out {
                let premise = PremiseRecord {
                    min_xi: scan.min_xi,
                    n2: scan.argmin.n2(),
                    n3: scan.argmin.n3(),
                };
                let contents = match args.output.format {
                    Format::Csv => squeeze_csv(&rows, Some(&premise)),
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Doc {
                            premise: PremiseRecord,
                            sweep: Vec<SqueezeRow>,
                        }
                        to_json(&Doc {
                            premise,
                            sweep: rows,
                        })
                        .map_err(|e| CliError::Io(e.to_string()))?
                    }
                };
                write_artifact(&args.output, out, &contents)?;
                println!("wrote {}", out.display());
            } else {
                for r in &rows {
                    println!(
                        "t={} xi_w_squared={} bound_lhs={}",
                        r.t, r.xi_w_squared, r.bound_lhs
                    );
                }
            }
        }
        _ => {
            if let Some(out) = &args.output.out {
                let doc = SqueezeReportDoc {
                    n_total: rho.n_total(),
                    scan_min_xi: scan.min_xi,
                    xi_w_squared: report.xi_w_squared,
                    delta_theta_squared: report.delta_theta_squared,
                    mean_n3: report.mean_n3,
                    variance_n2: report.variance_n2,
                    n1: scan.argmin.n1(),
                    n2: scan.argmin.n2(),
                    n3: scan.argmin.n3(),
                };
                let contents = match args.output.format {
                    Format::Csv => {
                        let row = SqueezeRow {
                            t: 0.0,
                            xi_w_squared: report.xi_w_squared,
                            delta_theta_squared: report.delta_theta_squared,
                            bound_lhs: report.xi_w_squared,
                            n2: scan.argmin.n2(),
                            n3: scan.argmin.n3(),
                        };
                        let premise = PremiseRecord {
                            min_xi: scan.min_xi,
                            n2: scan.argmin.n2(),
                            n3: scan.argmin.n3(),
                        };
                        squeeze_csv(&[row], Some(&premise))
                    }
                    Format::Json => to_json(&doc).map_err(|e| CliError::Io(e.to_string()))?,
                };
                write_artifact(&args.output, out, &contents)?;
                println!("wrote {}", out.display());
            }
        }
    }
    Ok(())
}

fn run_scan(args: ScanArgs) -> Result<(), CliError> {
    check_grid_args(args.grid_res, args.nodes)?;
    let rho = to_spatial(build_state(&args.source, args.n)?)?;
    if args.gamma.is_nan() || args.gamma < 0.0 {
        return Err(CliError::Config(format!(
            "gamma = {} must be >= 0",
            args.gamma
        )));
    }
    let params = DephasingParams::new(args.gamma, args.t.points())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let premise_scan = min_squeezing_scan(&rho, args.grid_res.max(12)).map_err(numeric)?;
    let triplets = direction_triplet_grid(args.grid_res * args.grid_res, args.grid_res);
    let samples = convexity_bound_sweep(&rho, &params, &triplets, args.nodes).map_err(numeric)?;

    let premise = PremiseRecord {
        min_xi: premise_scan.min_xi,
        n2: premise_scan.argmin.n2(),
        n3: premise_scan.argmin.n3(),
    };
    let rows: Vec<SqueezeRow> = samples
        .iter()
        .map(|s| SqueezeRow {
            t: s.t,
            xi_w_squared: s.xi_w_squared,
            delta_theta_squared: s.delta_theta_squared,
            bound_lhs: s.bound_lhs,
            n2: s.triplet.n2(),
            n3: s.triplet.n3(),
        })
        .collect();
    let min_bound = rows
        .iter()
        .map(|r| r.bound_lhs)
        .fold(f64::INFINITY, f64::min);
    println!(
        "premise_min_xi={} samples={} min_bound_lhs={}",
        premise.min_xi,
        rows.len(),
        min_bound
    );

    if let Some(out) = &args.output.out {
        let contents = match args.output.format {
            Format::Csv => squeeze_csv(&rows, Some(&premise)),
            Format::Json => {
                #[derive(Serialize)]
                struct Doc {
                    premise: PremiseRecord,
                    sweep: Vec<SqueezeRow>,
                }
                to_json(&Doc {
                    premise,
                    sweep: rows,
                })
                .map_err(|e| CliError::Io(e.to_string()))?
            }
        };
        write_artifact(&args.output, out, &contents)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}
