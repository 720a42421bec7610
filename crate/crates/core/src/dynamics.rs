//! GKSL generators and fixed-step integration of `dρ/dt = L_t(ρ)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    hermiticity_deviation, hermitize, schatten_norm, trace_product, CMatrix, HermitianMatrix,
    NormKind, C64, DEFAULT_CLIP,
};

/// Hermiticity slack accepted when building a state from raw entries.
const STATE_HERMITICITY: f64 = 1e-10;
const STATE_TRACE: f64 = 1e-10;
/// Smallest eigenvalue tolerated in a valid state.
pub const STATE_POSITIVITY: f64 = 1e-9;
/// Final-state positivity violation that aborts an integration.
pub const INTEGRATION_POSITIVITY: f64 = 1e-7;
pub const MIN_STEPS: usize = 16;

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let deviation = hermiticity_deviation(&m);
        if !(deviation <= STATE_HERMITICITY) {
            return Err(Error::NonHermitianInput { deviation });
        }
        let h = hermitize(&m);
        let trace = h.trace();
        if !((trace - 1.0).abs() <= STATE_TRACE) {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min = h.eigh().min();
        if min < -STATE_POSITIVITY {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self(h))
    }

    /// `|ψ⟩⟨ψ|` for the normalized `psi`.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero norm".into()));
        }
        let n = psi.len();
        let m = CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Ok(Self(hermitize(&m)))
    }

    /// `cos(θ/2)|0⟩ + sin(θ/2)|1⟩`, the initial state of every built-in model.
    pub fn bloch_state(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::from_pure(&[C64::new(c, 0.0), C64::new(s, 0.0)]).expect("unit vector")
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim > 0);
        Self(HermitianMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diagonal(populations).into_matrix())
    }

    /// Hermitizes and rescales to unit trace without checking positivity.
    pub(crate) fn normalized_unchecked(m: &CMatrix) -> Self {
        let h = hermitize(m);
        let trace = h.trace();
        Self(h.scale(1.0 / trace))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn purity(&self) -> f64 {
        trace_product(self.matrix(), self.matrix()).re
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix()[(i, j)]
    }
}

/// Scalar factor multiplying one generator term at time `t`.
#[derive(Clone)]
pub struct Modulation(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl Modulation {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self(Arc::new(f))
    }

    pub fn at(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

impl fmt::Debug for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Modulation(..)")
    }
}

#[derive(Clone, Debug)]
pub struct JumpOperator {
    operator: CMatrix,
    rate: f64,
    modulation: Option<Modulation>,
    // J†J, reused in every anticommutator
    decay: CMatrix,
}

impl JumpOperator {
    pub fn operator(&self) -> &CMatrix {
        &self.operator
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    fn rate_at(&self, t: f64) -> f64 {
        match &self.modulation {
            Some(m) => self.rate * m.at(t),
            None => self.rate,
        }
    }
}

/// `L_t(ρ) = -i[H, ρ] + Σ_k γ_k (J_k ρ J_k† - ½{J_k†J_k, ρ})`, with optional
/// scalar time modulation of every term.
#[derive(Clone, Debug)]
pub struct Lindbladian {
    hamiltonian: HermitianMatrix,
    hamiltonian_modulation: Option<Modulation>,
    jumps: Vec<JumpOperator>,
}

impl Lindbladian {
    pub fn new(hamiltonian: HermitianMatrix) -> Self {
        Self {
            hamiltonian,
            hamiltonian_modulation: None,
            jumps: Vec::new(),
        }
    }

    /// The trivial generator on a `dim`-level system.
    pub fn zero(dim: usize) -> Self {
        Self::new(HermitianMatrix::zeros(dim))
    }

    pub fn with_jump(self, operator: CMatrix, rate: f64) -> Result<Self> {
        self.push_jump(operator, rate, None)
    }

    pub fn with_modulated_jump(
        self,
        operator: CMatrix,
        rate: f64,
        modulation: Modulation,
    ) -> Result<Self> {
        self.push_jump(operator, rate, Some(modulation))
    }

    pub fn with_hamiltonian_modulation(mut self, modulation: Modulation) -> Self {
        self.hamiltonian_modulation = Some(modulation);
        self
    }

    fn push_jump(
        mut self,
        operator: CMatrix,
        rate: f64,
        modulation: Option<Modulation>,
    ) -> Result<Self> {
        let d = self.dim();
        if operator.nrows() != d || operator.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: operator.nrows().max(operator.ncols()),
            });
        }
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidState(format!(
                "jump rates must be finite and non-negative, got {rate}"
            )));
        }
        let decay = operator.adjoint() * &operator;
        self.jumps.push(JumpOperator {
            operator,
            rate,
            modulation,
            decay,
        });
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &HermitianMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[JumpOperator] {
        &self.jumps
    }

    /// Generator applied to an arbitrary square matrix. Used for Runge-Kutta
    /// stages, which need not be valid states.
    pub fn apply_matrix(&self, rho: &CMatrix, t: f64) -> CMatrix {
        let h_scale = self
            .hamiltonian_modulation
            .as_ref()
            .map_or(1.0, |m| m.at(t));
        let h = self.hamiltonian.matrix();
        let mut out = if h_scale != 0.0 {
            let commutator = h * rho - rho * h;
            commutator * C64::new(0.0, -h_scale)
        } else {
            CMatrix::zeros(rho.nrows(), rho.ncols())
        };
        for jump in &self.jumps {
            let rate = jump.rate_at(t);
            if rate == 0.0 {
                continue;
            }
            let j = &jump.operator;
            let sandwich = j * rho * j.adjoint();
            let anti = &jump.decay * rho + rho * &jump.decay;
            out += (sandwich - anti * C64::new(0.5, 0.0)) * C64::new(rate, 0.0);
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: LindbladianSpec = serde_json::from_str(text)?;
        spec.build()
    }

    pub fn to_json(&self) -> String {
        let spec = LindbladianSpec {
            dim: self.dim(),
            hamiltonian: encode_matrix(self.hamiltonian.matrix()),
            jumps: self
                .jumps
                .iter()
                .map(|j| JumpSpec {
                    matrix: encode_matrix(&j.operator),
                    rate: j.rate,
                })
                .collect(),
        };
        serde_json::to_string(&spec).expect("plain data serializes")
    }
}

/// `[[ [re, im], … ], …]`, row-major.
pub type MatrixEntries = Vec<Vec<[f64; 2]>>;

pub fn encode_matrix(m: &CMatrix) -> MatrixEntries {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn decode_matrix(entries: &MatrixEntries, dim: usize) -> Result<CMatrix> {
    if entries.len() != dim || entries.iter().any(|row| row.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: entries.len(),
        });
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        C64::new(entries[i][j][0], entries[i][j][1])
    }))
}

/// On-disk form of a time-independent [`Lindbladian`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LindbladianSpec {
    pub dim: usize,
    pub hamiltonian: MatrixEntries,
    #[serde(default)]
    pub jumps: Vec<JumpSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JumpSpec {
    pub matrix: MatrixEntries,
    pub rate: f64,
}

impl LindbladianSpec {
    pub fn build(&self) -> Result<Lindbladian> {
        if self.dim == 0 {
            return Err(Error::InvalidState("dim must be positive".into()));
        }
        let h = HermitianMatrix::new(decode_matrix(&self.hamiltonian, self.dim)?)?;
        self.jumps.iter().try_fold(Lindbladian::new(h), |l, jump| {
            l.with_jump(decode_matrix(&jump.matrix, self.dim)?, jump.rate)
        })
    }
}

fn check_dims(l: &Lindbladian, rho: &DensityMatrix) -> Result<()> {
    if l.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `L_t(ρ)`, symmetrized to remove rounding asymmetry.
pub fn lindblad_apply(l: &Lindbladian, rho: &DensityMatrix, t: f64) -> Result<HermitianMatrix> {
    check_dims(l, rho)?;
    Ok(hermitize(&l.apply_matrix(rho.matrix(), t)))
}

pub fn is_fixed_point(l: &Lindbladian, rho: &DensityMatrix, tol: f64) -> Result<bool> {
    Ok(schatten_norm(&lindblad_apply(l, rho, 0.0)?, NormKind::Hs) <= tol)
}

/// One sample of a trajectory: the state and the generator applied to it.
#[derive(Clone, Debug)]
pub struct Sample {
    pub time: f64,
    pub state: DensityMatrix,
    pub action: HermitianMatrix,
}

/// Graded refinement of `[0, t_m]`, `m = STARTUP_INTERVALS`, used to
/// integrate the logarithmic singularity of rank-deficient initial states.
///
/// Panel `j` spans `[upper_j / 2, upper_j]` with `upper_0 = t_m` and carries
/// the three Gauss-Legendre nodes of that interval. `tail` sits at the lower
/// end of the last panel.
#[derive(Clone, Debug)]
pub struct StartupLayer {
    pub panels: Vec<StartupPanel>,
    pub tail: Sample,
}

#[derive(Clone, Debug)]
pub struct StartupPanel {
    pub lower: f64,
    pub upper: f64,
    pub nodes: [Sample; 3],
}

pub const STARTUP_PANELS: usize = 40;
/// Grid intervals covered by the startup layer.
pub const STARTUP_INTERVALS: usize = 8;

/// Three-point Gauss-Legendre abscissae and weights on `[-1, 1]`.
pub const GAUSS3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// States on a uniform grid `t_k = k T / M` with `L_{t_k}(ρ_k)` cached.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    liouville_action: Vec<HermitianMatrix>,
    clip: f64,
    startup: Option<StartupLayer>,
    max_trace_drift: f64,
}

impl Trajectory {
    /// Assembles a trajectory from precomputed samples (no startup layer).
    pub fn from_parts(
        times: Vec<f64>,
        states: Vec<DensityMatrix>,
        liouville_action: Vec<HermitianMatrix>,
        clip: f64,
    ) -> Result<Self> {
        crate::qmath::check_clip(clip)?;
        if times.len() != states.len() || times.len() != liouville_action.len() {
            return Err(Error::InvalidIntegration(
                "times, states and actions must have equal length".into(),
            ));
        }
        if times.len() < 2 {
            return Err(Error::GridTooCoarse(format!("{} grid points", times.len())));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) || liouville_action.iter().any(|a| a.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: states
                    .iter()
                    .map(|s| s.dim())
                    .find(|&n| n != d)
                    .unwrap_or(d),
            });
        }
        let spacing = times[1] - times[0];
        let uniform = times
            .windows(2)
            .all(|w| w[1] > w[0] && ((w[1] - w[0]) - spacing).abs() <= 1e-12 * spacing.max(1.0));
        if !uniform || times[0] != 0.0 {
            return Err(Error::InvalidIntegration(
                "grid must start at 0 and be strictly increasing with uniform spacing".into(),
            ));
        }
        Ok(Self {
            times,
            states,
            liouville_action,
            clip,
            startup: None,
            max_trace_drift: 0.0,
        })
    }

    pub fn with_clip(mut self, clip: f64) -> Result<Self> {
        crate::qmath::check_clip(clip)?;
        self.clip = clip;
        Ok(self)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn liouville_action(&self) -> &[HermitianMatrix] {
        &self.liouville_action
    }

    pub fn clip(&self) -> f64 {
        self.clip
    }

    pub fn startup(&self) -> Option<&StartupLayer> {
        self.startup.as_ref()
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.states[0]
    }

    pub fn last(&self) -> &DensityMatrix {
        &self.states[self.states.len() - 1]
    }

    /// Largest `|tr ρ - 1|` seen after a step, before renormalization.
    pub fn max_trace_drift(&self) -> f64 {
        self.max_trace_drift
    }
}

fn rk4_step(l: &Lindbladian, rho: &CMatrix, k1: &CMatrix, t: f64, h: f64) -> CMatrix {
    let half = C64::new(h / 2.0, 0.0);
    let k2 = l.apply_matrix(&(rho + k1 * half), t + h / 2.0);
    let k3 = l.apply_matrix(&(rho + &k2 * half), t + h / 2.0);
    let k4 = l.apply_matrix(&(rho + &k3 * C64::new(h, 0.0)), t + h);
    rho + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0)
}

fn sample(l: &Lindbladian, state: DensityMatrix, time: f64) -> Sample {
    let action = hermitize(&l.apply_matrix(state.matrix(), time));
    Sample {
        time,
        state,
        action,
    }
}

/// State at `tau` reached from `rho0` with RK4 steps no longer than `h`.
fn integrate_from_origin(l: &Lindbladian, rho0: &DensityMatrix, tau: f64, h: f64) -> DensityMatrix {
    let n = (tau / h).ceil().max(1.0) as usize;
    let dt = tau / n as f64;
    let mut rho = rho0.clone();
    for k in 0..n {
        let t = k as f64 * dt;
        let k1 = l.apply_matrix(rho.matrix(), t);
        rho = DensityMatrix::normalized_unchecked(&rk4_step(l, rho.matrix(), &k1, t, dt));
    }
    rho
}

/// Classical fourth-order Runge-Kutta on `steps` uniform steps over
/// `[0, horizon]`. Each step is followed by hermitization and trace
/// renormalization.
pub fn evolve(
    l: &Lindbladian,
    rho0: &DensityMatrix,
    horizon: f64,
    steps: usize,
) -> Result<Trajectory> {
    evolve_with_clip(l, rho0, horizon, steps, DEFAULT_CLIP)
}

pub fn evolve_with_clip(
    l: &Lindbladian,
    rho0: &DensityMatrix,
    horizon: f64,
    steps: usize,
    clip: f64,
) -> Result<Trajectory> {
    check_dims(l, rho0)?;
    crate::qmath::check_clip(clip)?;
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidIntegration(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if steps < MIN_STEPS {
        return Err(Error::InvalidIntegration(format!(
            "at least {MIN_STEPS} steps required, got {steps}"
        )));
    }
    let h = horizon / steps as f64;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut actions = Vec::with_capacity(steps + 1);
    let mut max_trace_drift = 0.0_f64;

    let mut rho = rho0.clone();
    for k in 0..steps {
        let t = horizon * k as f64 / steps as f64;
        let k1 = l.apply_matrix(rho.matrix(), t);
        let next = rk4_step(l, rho.matrix(), &k1, t, h);
        let trace = next.trace();
        if !trace.re.is_finite() || !trace.im.is_finite() {
            return Err(Error::PositivityLost {
                time: t + h,
                min_eigenvalue: f64::NAN,
            });
        }
        max_trace_drift = max_trace_drift.max((trace - C64::new(1.0, 0.0)).norm());
        times.push(t);
        actions.push(hermitize(&k1));
        states.push(rho);
        rho = DensityMatrix::normalized_unchecked(&next);
    }
    let min = rho.as_hermitian().eigh().min();
    if !(min >= -INTEGRATION_POSITIVITY) {
        return Err(Error::PositivityLost {
            time: horizon,
            min_eigenvalue: min,
        });
    }
    let last = sample(l, rho, horizon);
    times.push(horizon);
    states.push(last.state);
    actions.push(last.action);

    let mut upper = times[STARTUP_INTERVALS];
    let mut panels = Vec::with_capacity(STARTUP_PANELS);
    let at = |tau: f64| sample(l, integrate_from_origin(l, rho0, tau, h), tau);
    for _ in 0..STARTUP_PANELS {
        let lower = upper / 2.0;
        let (mid, half) = (0.5 * (upper + lower), 0.5 * (upper - lower));
        panels.push(StartupPanel {
            lower,
            upper,
            nodes: GAUSS3.map(|(x, _)| at(mid + half * x)),
        });
        upper = lower;
    }
    let tail = at(upper);

    Ok(Trajectory {
        times,
        states,
        liouville_action: actions,
        clip,
        startup: Some(StartupLayer { panels, tail }),
        max_trace_drift,
    })
}
