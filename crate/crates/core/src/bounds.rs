//! Speed-limit bounds evaluated over a [`Trajectory`].
//!
//! Time integrals use composite Simpson quadrature on the integration grid.
//! When the trajectory carries a startup layer, the first grid intervals are
//! instead covered by geometrically shrinking Gauss-Legendre panels, which keeps
//! the `(ln t)²` singularity of rank-deficient initial states integrable to
//! grid-independent accuracy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    lindblad_apply, DensityMatrix, Lindbladian, Trajectory, GAUSS3, STARTUP_INTERVALS,
};
use crate::error::{Error, Result};
use crate::functionals::{DiagonalState, ReferenceBasis, SpectralState};
use crate::qmath::{schatten_norm, HermitianMatrix, NormKind};

/// Functional changes at or below this are rounding noise and count as zero.
pub const VANISHING_CHANGE: f64 = 1e-12;
/// Norms at or below this count as zero in [`saturation_slack`].
pub const VANISHING_NORM: f64 = 1e-12;
pub const MIN_GRID_POINTS: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Esl,
    Isl,
    Csl,
    Erasure,
    ActionS,
    ActionI,
    ActionC,
    InfoRate,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::Esl,
        BoundKind::Isl,
        BoundKind::Csl,
        BoundKind::Erasure,
        BoundKind::ActionS,
        BoundKind::ActionI,
        BoundKind::ActionC,
        BoundKind::InfoRate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Esl => "esl",
            BoundKind::Isl => "isl",
            BoundKind::Csl => "csl",
            BoundKind::Erasure => "erasure",
            BoundKind::ActionS => "action_s",
            BoundKind::ActionI => "action_i",
            BoundKind::ActionC => "action_c",
            BoundKind::InfoRate => "info_rate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Entropy,
    Information,
    Coherence,
}

/// One bound evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Functional change in nats (squared for action bounds; mean absolute
    /// information rate for `info_rate`).
    pub numerator: f64,
    pub denominator_terms: BTreeMap<String, f64>,
    /// Minimal time, or maximal mean rate for `info_rate`.
    pub bound_value: f64,
    #[serde(rename = "horizon_T")]
    pub horizon_t: f64,
    /// `bound_value / horizon_T`, or achieved over allowed rate for `info_rate`.
    pub slack: f64,
    pub regularized: bool,
}

impl BoundReport {
    pub fn term(&self, name: &str) -> Option<f64> {
        self.denominator_terms.get(name).copied()
    }
}

/// Per-sample scalars entering the integrands.
#[derive(Clone, Copy, Debug)]
struct PointMetrics {
    speed_hs: f64,
    speed_tr: f64,
    speed_hs_d: f64,
    speed_tr_d: f64,
    log_hs: f64,
    log_op: f64,
    log_hs_d: f64,
    log_op_d: f64,
    entropy_rate: f64,
    clipped: bool,
}

impl PointMetrics {
    fn new(
        state: &DensityMatrix,
        action: &HermitianMatrix,
        basis: &ReferenceBasis,
        clip: f64,
    ) -> Result<Self> {
        let spectral = SpectralState::new(state, clip)?;
        let diagonal = DiagonalState::new(state, basis, clip)?;
        let action_d = basis.diagonal_of(action.matrix());
        Ok(Self {
            speed_hs: schatten_norm(action, NormKind::Hs),
            speed_tr: schatten_norm(action, NormKind::Tr),
            speed_hs_d: action_d.iter().map(|x| x * x).sum::<f64>().sqrt(),
            speed_tr_d: action_d.iter().map(|x| x.abs()).sum(),
            log_hs: spectral.log_norm(NormKind::Hs),
            log_op: spectral.log_norm(NormKind::Op),
            log_hs_d: diagonal.log_norm(NormKind::Hs),
            log_op_d: diagonal.log_norm(NormKind::Op),
            entropy_rate: -spectral.trace_with_log(action.matrix()),
            clipped: spectral.clipped() || diagonal.clipped(),
        })
    }

    fn speed(&self, kind: NormKind, dephased: bool) -> f64 {
        match (kind, dephased) {
            (NormKind::Hs, false) => self.speed_hs,
            (NormKind::Tr, false) => self.speed_tr,
            (NormKind::Hs, true) => self.speed_hs_d,
            (NormKind::Tr, true) => self.speed_tr_d,
            (NormKind::Op, _) => unreachable!("op-norm speeds are rejected earlier"),
        }
    }

    fn log(&self, kind: NormKind, dephased: bool) -> f64 {
        match (kind, dephased) {
            (NormKind::Hs, false) => self.log_hs,
            (NormKind::Op, false) => self.log_op,
            (NormKind::Hs, true) => self.log_hs_d,
            (NormKind::Op, true) => self.log_op_d,
            (NormKind::Tr, _) => unreachable!("trace-norm log averages are rejected earlier"),
        }
    }
}

/// Composite Simpson weights on `n` uniform intervals of width `h` (`n` even).
fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Quadrature nodes and integrand data for one trajectory, built once and
/// shared by every bound.
#[derive(Clone, Debug)]
pub struct TrajectoryProfile {
    horizon: f64,
    weights: Vec<f64>,
    points: Vec<PointMetrics>,
    entropy: [f64; 2],
    coherence: [f64; 2],
    dim: usize,
    regularized: bool,
}

impl TrajectoryProfile {
    pub fn new(traj: &Trajectory, basis: &ReferenceBasis) -> Result<Self> {
        let n = traj.steps();
        if n + 1 < MIN_GRID_POINTS {
            return Err(Error::GridTooCoarse(format!(
                "{} grid points, need at least {MIN_GRID_POINTS}",
                n + 1
            )));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::GridTooCoarse(format!(
                "Simpson quadrature needs an even number of intervals, got {n}"
            )));
        }
        if basis.dim() != traj.dim() {
            return Err(Error::DimensionMismatch {
                expected: traj.dim(),
                found: basis.dim(),
            });
        }
        let clip = traj.clip();
        let h = traj.horizon() / n as f64;
        let states = traj.states();
        let actions = traj.liouville_action();
        let metrics = |i: usize| PointMetrics::new(&states[i], &actions[i], basis, clip);

        let mut weights = Vec::new();
        let mut points = Vec::new();
        match traj.startup() {
            Some(layer) => {
                let m = STARTUP_INTERVALS;
                for (offset, w) in simpson_weights(n - m, h).into_iter().enumerate() {
                    weights.push(w);
                    points.push(metrics(offset + m)?);
                }
                for panel in &layer.panels {
                    let half = 0.5 * (panel.upper - panel.lower);
                    for (node, (_, w)) in panel.nodes.iter().zip(GAUSS3) {
                        weights.push(half * w);
                        points.push(PointMetrics::new(&node.state, &node.action, basis, clip)?);
                    }
                }
                // remaining sliver [0, tail.time]
                weights.push(layer.tail.time);
                points.push(PointMetrics::new(
                    &layer.tail.state,
                    &layer.tail.action,
                    basis,
                    clip,
                )?);
            }
            _ => {
                weights = simpson_weights(n, h);
                for i in 0..=n {
                    points.push(metrics(i)?);
                }
            }
        }

        let first = SpectralState::new(traj.initial(), clip)?;
        let last = SpectralState::new(traj.last(), clip)?;
        let first_d = DiagonalState::new(traj.initial(), basis, clip)?;
        let last_d = DiagonalState::new(traj.last(), basis, clip)?;
        let regularized = points.iter().any(|p| p.clipped)
            || first.clipped()
            || last.clipped()
            || first_d.clipped()
            || last_d.clipped();

        Ok(Self {
            horizon: traj.horizon(),
            weights,
            points,
            entropy: [first.entropy(), last.entropy()],
            coherence: [
                (first_d.entropy() - first.entropy()).max(0.0),
                (last_d.entropy() - last.entropy()).max(0.0),
            ],
            dim: traj.dim(),
            regularized,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn regularized(&self) -> bool {
        self.regularized
    }

    fn integrate<F: Fn(&PointMetrics) -> f64>(&self, f: F) -> f64 {
        self.weights
            .iter()
            .zip(&self.points)
            .map(|(w, p)| w * f(p))
            .sum()
    }

    fn time_rms<F: Fn(&PointMetrics) -> f64>(&self, f: F) -> f64 {
        (self.integrate(|p| f(p).powi(2)).max(0.0) / self.horizon).sqrt()
    }

    /// `sqrt((1/T) ∫ ‖L_t(ρ_t)‖² dt)`; the dephased variant uses the basis
    /// diagonal of `L_t(ρ_t)`.
    pub fn rms_speed(&self, kind: NormKind, dephased: bool) -> Result<f64> {
        if kind == NormKind::Op {
            return Err(Error::InvalidParams(
                "evolution speed is defined for the hs and tr norms".into(),
            ));
        }
        Ok(self.time_rms(|p| p.speed(kind, dephased)))
    }

    /// `sqrt((1/T) ∫ ‖ln ρ_t‖² dt)`, or with `ρ_t^D` when `dephased`.
    pub fn avg_log_norm(&self, kind: NormKind, dephased: bool) -> Result<f64> {
        if kind == NormKind::Tr {
            return Err(Error::InvalidParams(
                "log averages are defined for the hs and op norms".into(),
            ));
        }
        Ok(self.time_rms(|p| p.log(kind, dephased)))
    }

    pub fn entropy_change(&self) -> f64 {
        (self.entropy[1] - self.entropy[0]).abs()
    }

    pub fn information_initial(&self) -> f64 {
        ((self.dim as f64).ln() - self.entropy[0]).max(0.0)
    }

    pub fn information_change(&self) -> f64 {
        // |ΔI| = |ΔS| for dimension-preserving dynamics
        self.entropy_change()
    }

    pub fn coherence_change(&self) -> f64 {
        (self.coherence[1] - self.coherence[0]).abs()
    }

    /// `(1/T) ∫ |dI/dt| dt` with `dI/dt = -dS/dt`.
    pub fn mean_abs_information_rate(&self) -> f64 {
        self.integrate(|p| p.entropy_rate.abs()) / self.horizon
    }

    fn report(
        &self,
        kind: BoundKind,
        numerator: f64,
        terms: Vec<(&str, f64)>,
        denominator: f64,
    ) -> BoundReport {
        let bound_value = quotient(numerator, denominator);
        BoundReport {
            kind,
            numerator,
            denominator_terms: terms.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            bound_value,
            horizon_t: self.horizon,
            slack: bound_value / self.horizon,
            regularized: self.regularized,
        }
    }

    pub fn t_esl(&self) -> BoundReport {
        let speed = self.time_rms(|p| p.speed_hs);
        let log = self.time_rms(|p| p.log_hs);
        self.report(
            BoundKind::Esl,
            self.entropy_change(),
            vec![("lambda_rms", speed), ("avg_log_hs", log)],
            speed * log,
        )
    }

    pub fn t_isl(&self) -> BoundReport {
        let speed = self.time_rms(|p| p.speed_tr);
        let log = self.time_rms(|p| p.log_op);
        self.report(
            BoundKind::Isl,
            self.information_change(),
            vec![("lambda_rms", speed), ("avg_log_op", log)],
            speed * log,
        )
    }

    pub fn t_csl(&self) -> BoundReport {
        let speed_d = self.time_rms(|p| p.speed_hs_d);
        let log_d = self.time_rms(|p| p.log_hs_d);
        let speed = self.time_rms(|p| p.speed_hs);
        let log = self.time_rms(|p| p.log_hs);
        self.report(
            BoundKind::Csl,
            self.coherence_change(),
            vec![
                ("lambda_rms_d", speed_d),
                ("avg_log_hs_d", log_d),
                ("lambda_rms", speed),
                ("avg_log_hs", log),
            ],
            speed_d * log_d + speed * log,
        )
    }

    /// Erasure time: `t_isl` with `I(ρ_T)` taken as zero.
    pub fn erasure_time(&self) -> BoundReport {
        let speed = self.time_rms(|p| p.speed_tr);
        let log = self.time_rms(|p| p.log_op);
        self.report(
            BoundKind::Erasure,
            self.information_initial(),
            vec![("lambda_rms", speed), ("avg_log_op", log)],
            speed * log,
        )
    }

    pub fn info_rate_bound(&self) -> BoundReport {
        let achieved = self.mean_abs_information_rate();
        let speed = self.time_rms(|p| p.speed_tr);
        let log = self.time_rms(|p| p.log_op);
        let allowed = speed * log;
        BoundReport {
            kind: BoundKind::InfoRate,
            numerator: achieved,
            denominator_terms: [("lambda_rms", speed), ("avg_log_op", log)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            bound_value: allowed,
            horizon_t: self.horizon,
            slack: quotient(achieved, allowed),
            regularized: self.regularized,
        }
    }

    pub fn action_bound(&self, kind: ActionKind) -> BoundReport {
        match kind {
            ActionKind::Entropy => {
                let action = self.integrate(|p| (p.speed_hs * p.log_hs).powi(2));
                self.report(
                    BoundKind::ActionS,
                    self.entropy_change().powi(2),
                    vec![("action_integral", action)],
                    action,
                )
            }
            ActionKind::Information => {
                let action = self.integrate(|p| (p.speed_tr * p.log_op).powi(2));
                self.report(
                    BoundKind::ActionI,
                    self.information_change().powi(2),
                    vec![("action_integral", action)],
                    action,
                )
            }
            ActionKind::Coherence => {
                let action_d = self.integrate(|p| (p.speed_hs_d * p.log_hs_d).powi(2));
                let action = self.integrate(|p| (p.speed_hs * p.log_hs).powi(2));
                self.report(
                    BoundKind::ActionC,
                    self.coherence_change().powi(2),
                    vec![("action_integral_d", action_d), ("action_integral", action)],
                    (action_d.sqrt() + action.sqrt()).powi(2),
                )
            }
        }
    }

    pub fn report_for(&self, kind: BoundKind) -> BoundReport {
        match kind {
            BoundKind::Esl => self.t_esl(),
            BoundKind::Isl => self.t_isl(),
            BoundKind::Csl => self.t_csl(),
            BoundKind::Erasure => self.erasure_time(),
            BoundKind::ActionS => self.action_bound(ActionKind::Entropy),
            BoundKind::ActionI => self.action_bound(ActionKind::Information),
            BoundKind::ActionC => self.action_bound(ActionKind::Coherence),
            BoundKind::InfoRate => self.info_rate_bound(),
        }
    }

    /// Every bound kind, in [`BoundKind::ALL`] order.
    pub fn all_reports(&self) -> Vec<BoundReport> {
        BoundKind::ALL.iter().map(|&k| self.report_for(k)).collect()
    }
}

/// `numerator / denominator` with vanishing numerators mapped to zero.
fn quotient(numerator: f64, denominator: f64) -> f64 {
    if numerator <= VANISHING_CHANGE {
        0.0
    } else {
        numerator / denominator
    }
}

fn computational_profile(traj: &Trajectory) -> Result<TrajectoryProfile> {
    TrajectoryProfile::new(traj, &ReferenceBasis::computational(traj.dim()))
}

fn profile_for(traj: &Trajectory, basis: Option<&ReferenceBasis>) -> Result<TrajectoryProfile> {
    match basis {
        Some(b) => TrajectoryProfile::new(traj, b),
        None => computational_profile(traj),
    }
}

/// Root-mean-square evolution speed. `dephasing` selects the dephased
/// variant in the given basis.
pub fn rms_speed(
    traj: &Trajectory,
    kind: NormKind,
    dephasing: Option<&ReferenceBasis>,
) -> Result<f64> {
    profile_for(traj, dephasing)?.rms_speed(kind, dephasing.is_some())
}

pub fn avg_log_norm(
    traj: &Trajectory,
    kind: NormKind,
    dephasing: Option<&ReferenceBasis>,
) -> Result<f64> {
    profile_for(traj, dephasing)?.avg_log_norm(kind, dephasing.is_some())
}

pub fn t_esl(traj: &Trajectory) -> Result<BoundReport> {
    Ok(computational_profile(traj)?.t_esl())
}

pub fn t_isl(traj: &Trajectory) -> Result<BoundReport> {
    Ok(computational_profile(traj)?.t_isl())
}

pub fn t_csl(traj: &Trajectory, basis: &ReferenceBasis) -> Result<BoundReport> {
    Ok(TrajectoryProfile::new(traj, basis)?.t_csl())
}

pub fn erasure_time(traj: &Trajectory) -> Result<BoundReport> {
    Ok(computational_profile(traj)?.erasure_time())
}

pub fn info_rate_bound(traj: &Trajectory) -> Result<BoundReport> {
    Ok(computational_profile(traj)?.info_rate_bound())
}

pub fn action_bound(
    traj: &Trajectory,
    kind: ActionKind,
    basis: &ReferenceBasis,
) -> Result<BoundReport> {
    Ok(TrajectoryProfile::new(traj, basis)?.action_bound(kind))
}

pub fn all_reports(traj: &Trajectory, basis: &ReferenceBasis) -> Result<Vec<BoundReport>> {
    Ok(TrajectoryProfile::new(traj, basis)?.all_reports())
}

/// Cauchy-Schwarz tightness `|tr(L(ρ) ln ρ)| / (‖L(ρ)‖_HS ‖ln ρ‖_HS)`;
/// 1 means the entropy-rate estimate is saturated at this instant.
pub fn saturation_slack(l: &Lindbladian, rho: &DensityMatrix, t: f64, clip: f64) -> Result<f64> {
    let action = lindblad_apply(l, rho, t)?;
    let state = SpectralState::new(rho, clip)?;
    let action_norm = action.frobenius();
    let log_norm = state.log_norm(NormKind::Hs);
    if action_norm <= VANISHING_NORM || log_norm <= VANISHING_NORM {
        return Ok(0.0);
    }
    let ratio = state.trace_with_log(action.matrix()).abs() / (action_norm * log_norm);
    Ok(ratio.min(1.0))
}
