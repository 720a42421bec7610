//! Parameter sets and horizons for the three reference figures.
//!
//! Figure 1 plots the information bound of the thermalization model against
//! the horizon; figures 2 and 3 plot the coherence bound of the dephasing and
//! dissipative models for three initial angles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::TrajectoryProfile;
use crate::dynamics::{evolve_with_clip, DensityMatrix};
use crate::error::{Error, Result};
use crate::functionals::ReferenceBasis;
use crate::models::{builtin_lindbladian, ModelParams};
use crate::qmath::DEFAULT_CLIP;

pub const FIGURE_POINTS: usize = 60;
pub const FIG1_T_MIN: f64 = 0.5;
pub const T_MAX: f64 = PI / 3.0;
pub const COHERENCE_GAMMA: f64 = 2.0;
pub const COHERENCE_THETAS: [f64; 3] = [PI / 2.0, PI / 3.0, PI / 4.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig1, Figure::Fig2, Figure::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        }
    }

    /// Horizons on the x axis. `t_min` only affects figure 1.
    pub fn horizons(self, t_min: Option<f64>) -> Vec<f64> {
        match self {
            Figure::Fig1 => {
                let lo = t_min.unwrap_or(FIG1_T_MIN);
                let n = FIGURE_POINTS - 1;
                (0..FIGURE_POINTS)
                    .map(|k| lo + (T_MAX - lo) * k as f64 / n as f64)
                    .collect()
            }
            Figure::Fig2 | Figure::Fig3 => (1..=FIGURE_POINTS)
                .map(|k| T_MAX * k as f64 / FIGURE_POINTS as f64)
                .collect(),
        }
    }

    /// One parameter set per curve.
    pub fn curves(self) -> Vec<ModelParams> {
        match self {
            Figure::Fig1 => vec![ModelParams::erasure_figure()],
            Figure::Fig2 => COHERENCE_THETAS
                .iter()
                .map(|&th| ModelParams::dephasing(COHERENCE_GAMMA, th).expect("valid"))
                .collect(),
            Figure::Fig3 => COHERENCE_THETAS
                .iter()
                .map(|&th| ModelParams::dissipative(COHERENCE_GAMMA, th).expect("valid"))
                .collect(),
        }
    }

    /// Whether rows carry a `theta` column.
    pub fn has_theta(self) -> bool {
        self != Figure::Fig1
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" | "1" => Ok(Figure::Fig1),
            "fig2" | "2" => Ok(Figure::Fig2),
            "fig3" | "3" => Ok(Figure::Fig3),
            other => Err(Error::InvalidParams(format!("unknown figure `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FigurePoint {
    #[serde(rename = "T")]
    pub horizon: f64,
    pub bound: f64,
    pub theta: f64,
    pub regularized: bool,
}

impl FigurePoint {
    pub fn slack(&self) -> f64 {
        self.bound / self.horizon
    }
}

/// Bound of one figure at one horizon.
pub fn figure_point(
    figure: Figure,
    params: &ModelParams,
    horizon: f64,
    steps: usize,
) -> Result<FigurePoint> {
    let l = builtin_lindbladian(params)?;
    let rho0 = DensityMatrix::bloch_state(params.theta);
    let traj = evolve_with_clip(&l, &rho0, horizon, steps, DEFAULT_CLIP)?;
    let profile = TrajectoryProfile::new(&traj, &ReferenceBasis::computational(2))?;
    let report = match figure {
        Figure::Fig1 => profile.t_isl(),
        Figure::Fig2 | Figure::Fig3 => profile.t_csl(),
    };
    Ok(FigurePoint {
        horizon,
        bound: report.bound_value,
        theta: params.theta,
        regularized: report.regularized,
    })
}

/// All rows of a figure, curve by curve in the order of [`Figure::curves`].
pub fn figure_data(figure: Figure, steps: usize, t_min: Option<f64>) -> Result<Vec<FigurePoint>> {
    let horizons = figure.horizons(t_min);
    let mut rows = Vec::with_capacity(horizons.len() * 3);
    for params in figure.curves() {
        for &t in &horizons {
            rows.push(figure_point(figure, &params, t, steps)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizons() {
        let h1 = Figure::Fig1.horizons(None);
        assert_eq!(h1.len(), 60);
        assert_eq!(h1[0], 0.5);
        assert!((h1[59] - PI / 3.0).abs() < 1e-15);
        let h2 = Figure::Fig2.horizons(None);
        assert!((h2[0] - PI / 180.0).abs() < 1e-15);
        assert!((h2[59] - PI / 3.0).abs() < 1e-15);
        assert_eq!(Figure::Fig1.horizons(Some(0.1))[0], 0.1);
    }

    #[test]
    fn curves() {
        assert_eq!(Figure::Fig1.curves()[0].gamma, 201.0);
        assert_eq!(Figure::Fig3.curves().len(), 3);
        assert_eq!("fig2".parse::<Figure>().unwrap(), Figure::Fig2);
        assert!("fig4".parse::<Figure>().is_err());
    }
}
