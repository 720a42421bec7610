use std::fs;
use std::io::Write;

use log::{info, warn};
use qsl_core::bounds::{BoundKind, BoundReport, TrajectoryProfile};
use qsl_core::dynamics::{evolve_with_clip, Trajectory};
use qsl_core::figures::{figure_point, Figure, FigurePoint};
use qsl_core::functionals::{self, SpectralState};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Format, ReproduceArgs, RunArgs, SweepArgs};
use crate::error::CliError;
use crate::output::{csv_writer, num, sink};
use crate::plot::{bound_plot, Series};
use crate::sweep::{parse_grid, GridPoint};
use crate::system::{check_horizon, check_steps, Setup, System};

fn trajectory(setup: &Setup, system: &System, horizon: f64) -> Result<Trajectory, CliError> {
    check_horizon(horizon)?;
    Ok(evolve_with_clip(
        &system.lindbladian,
        &system.rho0,
        horizon,
        setup.steps,
        setup.clip,
    )?)
}

#[derive(Serialize)]
struct SimRow {
    t: f64,
    #[serde(rename = "S")]
    s: f64,
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "C")]
    c: f64,
    purity: f64,
    pop0: f64,
    coh_re: f64,
    coh_im: f64,
}

pub fn simulate(args: &RunArgs) -> Result<(), CliError> {
    let setup = Setup::from_args(&args.system)?;
    let system = setup.system(None, args.system.theta)?;
    let traj = trajectory(&setup, &system, args.horizon)?;
    let basis = setup.basis(traj.dim())?;
    let ln_d = (traj.dim() as f64).ln();
    let mut rows = Vec::with_capacity(traj.times().len());
    for (&t, rho) in traj.times().iter().zip(traj.states()) {
        let s = SpectralState::new(rho, setup.clip)?.entropy();
        let coh = if rho.dim() > 1 {
            rho.entry(0, 1)
        } else {
            Default::default()
        };
        rows.push(SimRow {
            t,
            s,
            i: ln_d - s,
            c: functionals::coherence(rho, &basis, setup.clip)?,
            purity: rho.purity(),
            pop0: rho.entry(0, 0).re,
            coh_re: coh.re,
            coh_im: coh.im,
        });
    }
    info!(
        "simulated {} grid points up to T = {}",
        rows.len(),
        args.horizon
    );
    match args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv_writer(args.out.as_ref())?;
            w.write_record(["t", "S", "I", "C", "purity", "pop0", "coh_re", "coh_im"])?;
            for r in &rows {
                w.write_record(
                    [r.t, r.s, r.i, r.c, r.purity, r.pop0, r.coh_re, r.coh_im].map(num),
                )?;
            }
            w.flush()?;
        }
        Format::Json => write_json(args.out.as_ref(), &rows)?,
    }
    Ok(())
}

fn write_json<T: Serialize>(out: Option<&std::path::PathBuf>, value: &T) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

const TERM_COLUMNS: [&str; 7] = [
    "lambda_rms",
    "lambda_rms_d",
    "avg_log_hs",
    "avg_log_hs_d",
    "avg_log_op",
    "action_integral",
    "action_integral_d",
];

fn reports(setup: &Setup, system: &System, horizon: f64) -> Result<Vec<BoundReport>, CliError> {
    let traj = trajectory(setup, system, horizon)?;
    let basis = setup.basis(traj.dim())?;
    let reports = TrajectoryProfile::new(&traj, &basis)?.all_reports();
    for r in &reports {
        if r.kind != BoundKind::InfoRate && r.kind != BoundKind::Erasure && r.slack > 1.0 {
            warn!("{} slack {} exceeds 1", r.kind.name(), r.slack);
        }
    }
    if reports.iter().any(|r| r.regularized) {
        info!("log clipping was active; denominators are regularized");
    }
    Ok(reports)
}

pub fn bounds(args: &RunArgs) -> Result<(), CliError> {
    let setup = Setup::from_args(&args.system)?;
    let system = setup.system(None, args.system.theta)?;
    let reports = reports(&setup, &system, args.horizon)?;
    match args.format.unwrap_or(Format::Json) {
        Format::Json => write_json(args.out.as_ref(), &reports)?,
        Format::Csv => {
            let mut w = csv_writer(args.out.as_ref())?;
            let mut header = vec![
                "kind",
                "numerator",
                "bound_value",
                "horizon_T",
                "slack",
                "regularized",
            ];
            header.extend(TERM_COLUMNS);
            w.write_record(&header)?;
            for r in &reports {
                let mut row = vec![
                    r.kind.name().to_string(),
                    num(r.numerator),
                    num(r.bound_value),
                    num(r.horizon_t),
                    num(r.slack),
                    r.regularized.to_string(),
                ];
                row.extend(
                    TERM_COLUMNS
                        .iter()
                        .map(|k| r.term(k).map(num).unwrap_or_default()),
                );
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn reproduce(args: &ReproduceArgs) -> Result<(), CliError> {
    check_steps(args.steps)?;
    if let Some(t_min) = args.t_min {
        if args.figure != Figure::Fig1 {
            warn!("--t-min only applies to fig1; ignored");
        } else if !(t_min > 0.0 && t_min < qsl_core::figures::T_MAX) {
            return Err(CliError::Usage(format!(
                "--t-min must lie in (0, {})",
                qsl_core::figures::T_MAX
            )));
        }
    }
    fs::create_dir_all(&args.out)?;
    let figure = args.figure;
    let horizons = figure.horizons(args.t_min);
    let jobs: Vec<_> = figure
        .curves()
        .into_iter()
        .flat_map(|p| horizons.iter().map(move |&t| (p, t)))
        .collect();
    let rows: Vec<FigurePoint> = jobs
        .par_iter()
        .map(|(p, t)| figure_point(figure, p, *t, args.steps))
        .collect::<Result<_, _>>()?;

    let show_regularized = figure == Figure::Fig1 && args.t_min.is_some();
    let csv_path = args.out.join(format!("{figure}.csv"));
    let mut w = csv_writer(Some(&csv_path))?;
    let mut header = vec!["T", "bound"];
    if figure.has_theta() {
        header.push("theta");
    }
    if show_regularized {
        header.push("regularized");
    }
    w.write_record(&header)?;
    for r in &rows {
        let mut row = vec![num(r.horizon), num(r.bound)];
        if figure.has_theta() {
            row.push(num(r.theta));
        }
        if show_regularized {
            row.push(r.regularized.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;

    let series: Vec<Series> = rows
        .chunks(horizons.len())
        .map(|curve| Series {
            label: if figure.has_theta() {
                format!("θ = {:.4}", curve[0].theta)
            } else {
                "information bound".to_string()
            },
            points: curve.iter().map(|r| (r.horizon, r.bound)).collect(),
        })
        .collect();
    let title = match figure {
        Figure::Fig1 => "Information bound, thermalization",
        Figure::Fig2 => "Coherence bound, pure dephasing",
        Figure::Fig3 => "Coherence bound, dissipation",
    };
    bound_plot(&args.out.join(format!("{figure}.svg")), title, &series)?;
    info!("wrote {} rows to {}", rows.len(), csv_path.display());
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let setup = Setup::from_args(&args.system)?;
    let grid = parse_grid(&args.grid)?;
    if !setup.is_model() {
        if let Some(name) = grid.axes.iter().map(|a| a.name).find(|n| *n != "T") {
            return Err(CliError::Usage(format!(
                "axis `{name}` needs a built-in model; generator files only sweep T"
            )));
        }
    }
    if !grid.has_axis("T") && !grid.is_empty() {
        let horizon = args
            .horizon
            .ok_or_else(|| CliError::Usage("--T or a T axis is required".into()))?;
        check_horizon(horizon)?;
    }
    let base = match &setup.source {
        crate::system::Source::Model { values, .. } => *values,
        crate::system::Source::File { .. } => Default::default(),
    };
    let points: Vec<GridPoint> = grid.points(&base, args.horizon);
    info!("sweeping {} grid points", points.len());

    let results: Vec<(GridPoint, Option<qsl_core::ModelParams>, Vec<BoundReport>)> = points
        .into_par_iter()
        .map(|point| {
            let system = setup.system(Some(&point.values), args.system.theta)?;
            let reports = reports(&setup, &system, point.horizon)?;
            Ok((point, system.params, reports))
        })
        .collect::<Result<_, CliError>>()?;

    let mut w = csv_writer(args.out.as_ref())?;
    let mut header: Vec<&str> = Vec::new();
    if setup.is_model() {
        header.extend(["model", "gamma0", "N", "gamma", "theta"]);
    }
    header.push("T");
    header.extend(BoundKind::ALL.iter().map(|k| k.name()));
    header.push("regularized");
    w.write_record(&header)?;
    for (point, params, reports) in &results {
        let mut row = Vec::with_capacity(header.len());
        if let Some(p) = params {
            row.push(p.model.to_string());
            row.extend([p.gamma0, p.n, p.gamma, p.theta].map(num));
        }
        row.push(num(point.horizon));
        row.extend(reports.iter().map(|r| num(r.bound_value)));
        row.push(reports.iter().any(|r| r.regularized).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
