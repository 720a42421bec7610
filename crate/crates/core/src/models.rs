//! Closed-form two-level models: thermalization in a photon bath, pure
//! dephasing and spontaneous dissipation.
//!
//! Every model starts from `cos(θ/2)|0⟩ + sin(θ/2)|1⟩` with `|0⟩` the
//! excited level. The expressions in [`analytic_quantities`] are transcribed
//! term by term from their published closed forms and do not go through the
//! generic numerical pipeline, so the two can be checked against each other.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{DensityMatrix, Lindbladian};
use crate::error::{Error, Result};
use crate::qmath::{pauli, CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Thermalization,
    Dephasing,
    Dissipative,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::Thermalization,
        ModelKind::Dephasing,
        ModelKind::Dissipative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Thermalization => "thermalization",
            ModelKind::Dephasing => "dephasing",
            ModelKind::Dissipative => "dissipative",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "thermalization" | "thermal" => Ok(ModelKind::Thermalization),
            "dephasing" => Ok(ModelKind::Dephasing),
            "dissipative" | "dissipation" => Ok(ModelKind::Dissipative),
            other => Err(Error::InvalidParams(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub model: ModelKind,
    /// Spontaneous emission rate (thermalization only).
    #[serde(default)]
    pub gamma0: f64,
    /// Mean bath photon number (thermalization only).
    #[serde(rename = "N", default)]
    pub n: f64,
    /// Total emission, dephasing or dissipation rate.
    pub gamma: f64,
    /// Initial Bloch angle.
    pub theta: f64,
}

impl ModelParams {
    /// `γ = γ₀(2N + 1)`.
    pub fn thermalization(gamma0: f64, n: f64, theta: f64) -> Result<Self> {
        Self {
            model: ModelKind::Thermalization,
            gamma0,
            n,
            gamma: gamma0 * (2.0 * n + 1.0),
            theta,
        }
        .validated()
    }

    /// Thermalization with prescribed total rate: `γ₀ = γ / (2N + 1)`.
    pub fn thermalization_with_gamma(gamma: f64, n: f64, theta: f64) -> Result<Self> {
        Self::thermalization(gamma / (2.0 * n + 1.0), n, theta)
    }

    pub fn dephasing(gamma: f64, theta: f64) -> Result<Self> {
        Self {
            model: ModelKind::Dephasing,
            gamma0: 0.0,
            n: 0.0,
            gamma,
            theta,
        }
        .validated()
    }

    pub fn dissipative(gamma: f64, theta: f64) -> Result<Self> {
        Self {
            model: ModelKind::Dissipative,
            gamma0: 0.0,
            n: 0.0,
            gamma,
            theta,
        }
        .validated()
    }

    /// Parameters of the thermalization figure: `γ₀ = 1, N = 100, θ = π/3`.
    pub fn erasure_figure() -> Self {
        Self::thermalization(1.0, 100.0, PI / 3.0).expect("valid constants")
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.gamma0, self.n, self.gamma, self.theta]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidParams(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::InvalidParams(format!(
                "theta must lie in [0, pi], got {}",
                self.theta
            )));
        }
        if self.model == ModelKind::Thermalization {
            if !(self.gamma0 >= 0.0) || !(self.n >= 0.0) {
                return Err(Error::InvalidParams(
                    "gamma0 and N must be non-negative".into(),
                ));
            }
            let expected = self.gamma0 * (2.0 * self.n + 1.0);
            if (self.gamma - expected).abs() > 1e-9 * expected.max(1.0) {
                return Err(Error::InvalidParams(format!(
                    "gamma = {} inconsistent with gamma0 (2N + 1) = {expected}",
                    self.gamma
                )));
            }
        }
        Ok(())
    }
}

/// Closed-form state at time `t`.
pub fn analytic_state(p: &ModelParams, t: f64) -> Result<DensityMatrix> {
    p.validate()?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "time must be non-negative, got {t}"
        )));
    }
    let (g, th) = (p.gamma, p.theta);
    let (half_s, half_c) = (th / 2.0).sin_cos();
    let (excited, coherence) = match p.model {
        ModelKind::Thermalization => {
            let ratio = p.gamma0 / g;
            let decay = (-g * t).exp();
            (
                0.5 * (1.0 - ratio + decay * (ratio + th.cos())),
                0.5 * decay * th.sin(),
            )
        }
        ModelKind::Dephasing => (half_c * half_c, (-g * t).exp() * half_s * half_c),
        ModelKind::Dissipative => (
            (-g * t / 2.0).exp() * half_c * half_c,
            (-g * t / 4.0).exp() * half_s * half_c,
        ),
    };
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(excited, 0.0),
            C64::new(coherence, 0.0),
            C64::new(coherence, 0.0),
            C64::new(1.0 - excited, 0.0),
        ],
    );
    DensityMatrix::new(m)
}

/// Generator whose exact solution is [`analytic_state`].
///
/// For thermalization the two bath jumps `√(γ₀(N+1))σ₋` and `√(γ₀N)σ₊` damp
/// coherences at `γ/2`, while the closed-form state damps them at `γ`; an
/// additional `σ_z` channel at rate `γ/4` supplies the missing `γ/2`.
/// The dissipative model is `(γ/2)·D[σ₋]`.
pub fn builtin_lindbladian(p: &ModelParams) -> Result<Lindbladian> {
    p.validate()?;
    let l = Lindbladian::zero(2);
    match p.model {
        ModelKind::Thermalization => l
            .with_jump(pauli::lowering(), p.gamma0 * (p.n + 1.0))?
            .with_jump(pauli::raising(), p.gamma0 * p.n)?
            .with_jump(pauli::z(), p.gamma / 4.0),
        ModelKind::Dephasing => l.with_jump(pauli::z(), p.gamma / 2.0),
        ModelKind::Dissipative => l.with_jump(pauli::lowering(), p.gamma / 2.0),
    }
}

/// The plain generator of each model, without the
/// compensating dephasing channel of [`builtin_lindbladian`]. The closed-form
/// thermalization trace norm `‖L(ρ_t)‖_tr` is this generator applied to
/// [`analytic_state`].
pub fn printed_lindbladian(p: &ModelParams) -> Result<Lindbladian> {
    p.validate()?;
    match p.model {
        ModelKind::Thermalization => Lindbladian::zero(2)
            .with_jump(pauli::lowering(), p.gamma0 * (p.n + 1.0))?
            .with_jump(pauli::raising(), p.gamma0 * p.n),
        _ => builtin_lindbladian(p),
    }
}

/// `x ln x` with `0 ln 0 = 0`.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `-p ln p - (1-p) ln(1-p)`.
fn binary_entropy(p: f64) -> f64 {
    -xlnx(p) - xlnx(1.0 - p)
}

/// Real branch of `coth⁻¹ x` for `|x| > 1`.
fn acoth(x: f64) -> f64 {
    0.5 * ((x + 1.0) / (x - 1.0)).ln()
}

const BRANCH_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermalizationQuantities {
    /// `I(ρ_0) = ln 2`.
    pub information_initial: f64,
    /// `I(ρ_t)` written through `δ`.
    pub information: f64,
    /// `δ = γ² + γ₀²(1 - 2e^{γt} + e^{2γt}) + 2γγ₀(1 - e^{γt}) cos θ`.
    pub delta: f64,
    /// `e^{-γt} √δ`, evaluated without forming `e^{γt}`.
    pub scaled_root_delta: f64,
    /// Eigenvalues `(γ ∓ e^{-γt}√δ) / 2γ` of `ρ_t`.
    pub eigenvalues: [f64; 2],
    /// Printed `‖L(ρ)‖_tr = ½γ₀e^{-γt} √((2N+1)² sin²θ + 4(γ₀ + γ(2N+1)cos θ + 2γ₀N)²/γ²)`.
    pub lrho_tr: f64,
    /// Trace norm of `dρ_t/dt` for the closed-form state:
    /// `e^{-γt} √((γ₀ + γ cos θ)² + γ² sin²θ)`.
    pub drho_tr: f64,
    /// `‖ln ρ_t‖_op = max{|λ₁|, |λ₂|}` with `λ_i` the eigenvalues of `ln ρ_t`.
    pub log_op: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DephasingQuantities {
    /// Printed `C(ρ_t) - C(ρ_0)` (the closed form carries the sign; its
    /// magnitude is the coherence change).
    pub coherence_change: f64,
    /// `½γ²e^{-2γt} sin²θ`.
    pub lrho_hs_sq: f64,
    /// Diagonal is static, so `0`.
    pub lrho_d_hs_sq: f64,
    /// `[ln sin²(θ/2)]² + [ln cos²(θ/2)]²`.
    pub log_d_hs_sq: f64,
    /// `[ln((2 ± √2 e^{-γt} √((e^{2γt}-1)cos 2θ + e^{2γt} + 1))/4)]²` summed.
    pub log_hs_sq: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DissipativeQuantities {
    /// `-sin²(θ/2) ln sin²(θ/2) - cos²(θ/2) ln cos²(θ/2)`.
    pub coherence_initial: f64,
    /// Printed `C(ρ_t)` in terms of `α`.
    pub coherence: f64,
    /// `(1/32)γ²e^{-γt}(16cos⁴(θ/2) + e^{γt/2} sin²θ)`.
    pub lrho_hs_sq: f64,
    /// `½γ²e^{-γt}cos⁴(θ/2)`.
    pub lrho_d_hs_sq: f64,
    /// `[ln(e^{-γt/2}cos²(θ/2))]² + [ln(1 - e^{-γt/2}cos²(θ/2))]²`.
    pub log_d_hs_sq: f64,
    /// `[ln(¼(2 ∓ √2 e^{-γt/2} √β))]²` summed.
    pub log_hs_sq: f64,
    /// `α = 3 + 4cos θ + cos 2θ - 8e^{γt/2}cos⁴(θ/2) + 2e^{γt}`.
    pub alpha: f64,
    /// `β = 3 - 4(e^{γt/2}-1)cos θ - (e^{γt/2}-1)cos 2θ - 3e^{γt/2} + 2e^{γt}`.
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum AnalyticQuantities {
    Thermalization(ThermalizationQuantities),
    Dephasing(DephasingQuantities),
    Dissipative(DissipativeQuantities),
}

impl AnalyticQuantities {
    /// Flat `(name, value)` listing.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        match self {
            AnalyticQuantities::Thermalization(q) => vec![
                ("information_initial", q.information_initial),
                ("information", q.information),
                ("delta", q.delta),
                ("scaled_root_delta", q.scaled_root_delta),
                ("lambda_minus", q.eigenvalues[0]),
                ("lambda_plus", q.eigenvalues[1]),
                ("lrho_tr", q.lrho_tr),
                ("drho_tr", q.drho_tr),
                ("log_op", q.log_op),
            ],
            AnalyticQuantities::Dephasing(q) => vec![
                ("coherence_change", q.coherence_change),
                ("lrho_hs_sq", q.lrho_hs_sq),
                ("lrho_d_hs_sq", q.lrho_d_hs_sq),
                ("log_d_hs_sq", q.log_d_hs_sq),
                ("log_hs_sq", q.log_hs_sq),
            ],
            AnalyticQuantities::Dissipative(q) => vec![
                ("coherence_initial", q.coherence_initial),
                ("coherence", q.coherence),
                ("lrho_hs_sq", q.lrho_hs_sq),
                ("lrho_d_hs_sq", q.lrho_d_hs_sq),
                ("log_d_hs_sq", q.log_d_hs_sq),
                ("log_hs_sq", q.log_hs_sq),
                ("alpha", q.alpha),
                ("beta", q.beta),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.named()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
    }
}

pub fn analytic_quantities(p: &ModelParams, t: f64) -> Result<AnalyticQuantities> {
    p.validate()?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "time must be non-negative, got {t}"
        )));
    }
    Ok(match p.model {
        ModelKind::Thermalization => AnalyticQuantities::Thermalization(thermalization(p, t)),
        ModelKind::Dephasing => AnalyticQuantities::Dephasing(dephasing(p, t)?),
        ModelKind::Dissipative => AnalyticQuantities::Dissipative(dissipative(p, t)?),
    })
}

fn thermalization(p: &ModelParams, t: f64) -> ThermalizationQuantities {
    let (g, g0, n, th) = (p.gamma, p.gamma0, p.n, p.theta);
    let grow = (g * t).exp();
    let delta =
        g * g + g0 * g0 * (1.0 - 2.0 * grow + grow * grow) + 2.0 * g * g0 * (1.0 - grow) * th.cos();
    // e^{-2γt} δ, expanded so that large γt does not overflow
    let decay = (-g * t).exp();
    let scaled_sq = g * g * decay * decay
        + g0 * g0 * (decay - 1.0).powi(2)
        + 2.0 * g * g0 * decay * (decay - 1.0) * th.cos();
    let root = scaled_sq.max(0.0).sqrt();
    let lower = ((g - root) / (2.0 * g)).max(0.0);
    let upper = (g + root) / (2.0 * g);
    let information = LN_2 + xlnx(lower) + xlnx(upper);

    let spread = (2.0 * n + 1.0).powi(2) * th.sin().powi(2)
        + 4.0 * (g0 + g * (2.0 * n + 1.0) * th.cos() + 2.0 * g0 * n).powi(2) / (g * g);
    let lrho_tr = 0.5 * g0 * decay * spread.sqrt();
    let drho_tr = decay * ((g0 + g * th.cos()).powi(2) + (g * th.sin()).powi(2)).sqrt();
    let log_op = lower.ln().abs().max(upper.ln().abs());

    ThermalizationQuantities {
        information_initial: LN_2,
        information,
        delta,
        scaled_root_delta: root,
        eigenvalues: [lower, upper],
        lrho_tr,
        drho_tr,
        log_op,
    }
}

fn dephasing(p: &ModelParams, t: f64) -> Result<DephasingQuantities> {
    let (g, th) = (p.gamma, p.theta);
    let decay = (-g * t).exp();
    let (half_s, half_c) = (th / 2.0).sin_cos();

    // e^{-γt} √(sin²θ + e^{2γt} cos²θ), the Bloch radius of ρ_t
    let radius = (decay * decay * th.sin().powi(2) + th.cos().powi(2)).sqrt();
    let coherence_change = if radius >= 1.0 - BRANCH_TOLERANCE {
        // pure state: the printed expression tends to 0
        0.0
    } else {
        let x = 1.0 / radius;
        0.5 * ((radius + 1.0).ln() + (0.25 - 0.25 * radius).ln() + 2.0 * radius * acoth(x))
    };

    // e^{-γt} √((e^{2γt} - 1) cos 2θ + e^{2γt} + 1) with the exponential distributed
    let inner = ((1.0 - decay * decay) * (2.0 * th).cos() + 1.0 + decay * decay)
        .max(0.0)
        .sqrt();
    let spread = 2f64.sqrt() * inner;
    let log_hs_sq =
        ((2.0 + spread) / 4.0).ln().powi(2) + ((2.0 - spread).max(0.0) / 4.0).ln().powi(2);

    Ok(DephasingQuantities {
        coherence_change,
        lrho_hs_sq: 0.5 * g * g * decay * decay * th.sin().powi(2),
        lrho_d_hs_sq: 0.0,
        log_d_hs_sq: (half_s * half_s).ln().powi(2) + (half_c * half_c).ln().powi(2),
        log_hs_sq,
    })
}

fn dissipative(p: &ModelParams, t: f64) -> Result<DissipativeQuantities> {
    let (g, th) = (p.gamma, p.theta);
    let (half_s, half_c) = (th / 2.0).sin_cos();
    let cos4 = half_c.powi(4);
    let grow_half = (g * t / 2.0).exp();
    let grow = (g * t).exp();
    let decay_half = (-g * t / 2.0).exp();
    let excited = decay_half * half_c * half_c;

    let alpha = 3.0 + 4.0 * th.cos() + (2.0 * th).cos() - 8.0 * grow_half * cos4 + 2.0 * grow;
    let beta = 3.0
        - 4.0 * (grow_half - 1.0) * th.cos()
        - (grow_half - 1.0) * (2.0 * th).cos()
        - 3.0 * grow_half
        + 2.0 * grow;

    let root_two_alpha = (2.0 * alpha).max(0.0).sqrt() * decay_half;
    let artanh_arg = decay_half * (grow - 4.0 * (grow_half - 1.0) * cos4).max(0.0).sqrt();
    if artanh_arg > 1.0 + BRANCH_TOLERANCE {
        return Err(Error::InvalidParams(format!(
            "artanh argument {artanh_arg} outside the real branch"
        )));
    }
    let coherence = if artanh_arg >= 1.0 - BRANCH_TOLERANCE {
        // pure state: only the population entropy survives
        binary_entropy(excited)
    } else {
        -xlnx(excited) - xlnx(1.0 - excited)
            + 0.5 * ((0.0625 * (root_two_alpha + 2.0)).ln() + (2.0 - root_two_alpha).ln())
            + (alpha / 2.0).max(0.0).sqrt() * decay_half * artanh_arg.atanh()
    };

    let spread = 2f64.sqrt() * decay_half * beta.max(0.0).sqrt();
    let log_hs_sq =
        (0.25 * (2.0 - spread).max(0.0)).ln().powi(2) + (0.25 * (2.0 + spread)).ln().powi(2);

    Ok(DissipativeQuantities {
        coherence_initial: -(half_s * half_s) * (half_s * half_s).ln()
            - (half_c * half_c) * (half_c * half_c).ln(),
        coherence,
        lrho_hs_sq: g * g / 32.0 * (-g * t).exp() * (16.0 * cos4 + grow_half * th.sin().powi(2)),
        lrho_d_hs_sq: 0.5 * g * g * (-g * t).exp() * cos4,
        log_d_hs_sq: excited.ln().powi(2) + (1.0 - excited).ln().powi(2),
        log_hs_sq,
        alpha,
        beta,
    })
}
