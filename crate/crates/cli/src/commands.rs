//! One function per subcommand; each writes its output and returns whether
//! every check passed.

use std::io::Write;

use serde::Serialize;
use serde_json::json;

use lumpgeom_core::curvature::CurvatureReport;
use lumpgeom_core::dynamics::{geodesic_flow, hamiltonian_flow, GeodesicOptions, InitialCondition};
use lumpgeom_core::global::{self, global_report};
use lumpgeom_core::jet::Jet;
use lumpgeom_core::rational_maps::{check_rp2_equivariance, sphere_grid};
use lumpgeom_core::rp2::{build_fixed_map, f_rho_table, incompleteness_length, FixedSetChart};
use lumpgeom_core::table::Table;
use lumpgeom_core::{GeomError, Result};

use crate::config::{load_profile, parse_grid, parse_k_list, read_json, Cli, Command, Rp2Mode};
use crate::suites::{parse_suites, run_suite, SuiteConfig};

fn sink(cli: &Cli) -> Result<Box<dyn Write>> {
    Ok(match &cli.common.out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Metadata shared by every output: version, command and the full
/// configuration.
fn metadata(cli: &Cli) -> Vec<(String, String)> {
    let command = match &cli.command {
        Command::Tabulate { .. } => "tabulate",
        Command::Verify { .. } => "verify",
        Command::Geodesic { .. } => "geodesic",
        Command::Hamiltonian { .. } => "hamiltonian",
        Command::Volume => "volume",
        Command::Rp2 { .. } => "rp2",
    };
    vec![
        ("lumpgeom_version".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), command.into()),
        ("profile".into(), cli.common.profile.clone()),
        ("quadrature_order".into(), cli.common.order.to_string()),
        ("tolerance".into(), format!("{:e}", cli.common.tol)),
        ("seed".into(), cli.common.seed.to_string()),
        ("config".into(), serde_json::to_string(cli).unwrap_or_default()),
    ]
}

fn write_table(cli: &Cli, table: Table) -> Result<()> {
    let mut t = Table {
        metadata: metadata(cli),
        ..table.clone()
    };
    t.metadata.extend(table.metadata);
    let mut w = sink(cli)?;
    t.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_json(cli: &Cli, result: &impl Serialize) -> Result<()> {
    let meta: serde_json::Map<String, serde_json::Value> = metadata(cli).into_iter().map(|(k, v)| (k, json!(v))).collect();
    let doc = json!({ "metadata": meta, "result": result });
    let mut w = sink(cli)?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn initial(arg: &Option<String>) -> Result<InitialCondition> {
    match arg {
        Some(a) => read_json(a),
        None => Ok(InitialCondition {
            lambda: [0.0, 0.0, 1.0],
            rotation: [0.0; 3],
            lambda_dot: [0.0, 0.0, 0.5],
            omega: [0.0; 3],
        }),
    }
}

/// Runs the parsed command. `Ok(false)` means a verification failed.
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Tabulate { grid } => {
            let grid = parse_grid(grid)?;
            let profile = load_profile(&cli.common.profile)?;
            let report = CurvatureReport::compute(profile.as_ref(), &grid)?;
            write_table(cli, report.to_table())?;
            Ok(true)
        }
        Command::Verify { suite, step } => {
            let names = parse_suites(suite)?;
            let cfg = SuiteConfig {
                order: cli.common.order,
                step: *step,
                seed: cli.common.seed,
            };
            let reports: Vec<_> = names.iter().map(|n| run_suite(n, &cfg)).collect();
            let passed = reports.iter().all(|r| r.passed);
            write_json(cli, &json!({ "passed": passed, "suites": reports }))?;
            for r in &reports {
                eprintln!("{:<12} {}", r.suite, if r.passed { "pass" } else { "FAIL" });
                for c in r.checks.iter().filter(|c| !c.passed) {
                    eprintln!(
                        "    {}: value {:e}, tolerance {:e} {}",
                        c.name,
                        c.value,
                        c.tolerance,
                        c.note.as_deref().unwrap_or("")
                    );
                }
            }
            Ok(passed)
        }
        Command::Geodesic { flow, dt } => {
            let profile = load_profile(&cli.common.profile)?;
            let start = initial(&flow.init)?.to_state()?;
            let opts = GeodesicOptions {
                dt: *dt,
                ..GeodesicOptions::default()
            };
            let traj = geodesic_flow(profile.as_ref(), &start, flow.t_final, &opts)?;
            let t = traj
                .to_table()
                .meta("dt", dt)
                .meta("max_energy_drift", traj.max_energy_drift())
                .meta("max_charge_drift", traj.max_charge_drift())
                .meta("rejected_steps", traj.rejected_steps);
            write_table(cli, t)?;
            Ok(true)
        }
        Command::Hamiltonian {
            flow,
            h_coeff,
            h_power,
            samples,
        } => {
            let profile = load_profile(&cli.common.profile)?;
            let start = initial(&flow.init)?.to_state()?;
            let (c, p) = (*h_coeff, *h_power);
            let h = move |l: Jet| l.powi(p) * c;
            let traj = hamiltonian_flow(profile.as_ref(), &h, &start, flow.t_final, *samples)?;
            write_table(cli, traj.to_table().meta("hamiltonian", format!("{c} * lambda^{p}")))?;
            Ok(true)
        }
        Command::Volume => {
            let profile = load_profile(&cli.common.profile)?;
            let report = global_report(profile.as_ref())?;
            let nodes = json!({
                "panel_order": global::DEFAULT_PANEL_ORDER,
                "refinement_orders": global::REFINEMENT_ORDERS,
                "tail_cutoff": global::TAIL_CUTOFF,
                "tail_ratio": global::TAIL_RATIO,
                "so3_nodes_per_angle": global::DEFAULT_PANEL_ORDER,
            });
            write_json(cli, &json!({ "nodes": nodes, "report": report }))?;
            Ok(report.volume_refinement.is_cauchy() && report.length_refinement.is_cauchy())
        }
        Command::Rp2 { mode, n, rho_grid, init } => match mode {
            Rp2Mode::FRho => {
                let ks = parse_k_list(rho_grid)?;
                write_table(cli, f_rho_table(*n, &ks, cli.common.tol)?)?;
                Ok(true)
            }
            Rp2Mode::Length => {
                let ks = parse_k_list(rho_grid)?;
                let r = incompleteness_length(*n, &ks)?;
                let mut t = Table::new(&["k", "rho_max", "partial_length"])
                    .meta("degree", n)
                    .meta("extrapolated", r.extrapolated)
                    .meta("converged", r.converged)
                    .meta("fitted_constant", r.fitted_constant)
                    .meta("log_bound", r.log_bound);
                for (&k, &v) in ks.iter().zip(&r.partial.values) {
                    t.push(vec![k as f64, 1.0 - 10f64.powi(-(k as i32)), v]);
                }
                write_table(cli, t)?;
                Ok(r.converged)
            }
            Rp2Mode::Chart => {
                let arg = init
                    .as_ref()
                    .ok_or_else(|| GeomError::InvalidInput("--mode chart needs --init with a chart".into()))?;
                let chart: FixedSetChart = read_json(arg)?;
                let map = build_fixed_map(&chart)?;
                let residual = check_rp2_equivariance(&map, &sphere_grid(200));
                write_json(cli, &json!({ "chart": chart, "map": map, "equivariance_residual": residual }))?;
                Ok(residual < 1e-10)
            }
        },
    }
}

/// 2 for bad input, 3 for numerical failures.
pub fn exit_code_for(e: &GeomError) -> u8 {
    match e {
        GeomError::InvalidInput(_) | GeomError::Parse(_) | GeomError::Io(_) | GeomError::NoFixedPoints(_) | GeomError::Degenerate(_) => 2,
        _ => 3,
    }
}
