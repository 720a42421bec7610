use std::fs;
use std::path::Path;

use qsl_core::dynamics::{
    decode_matrix, DensityMatrix, Lindbladian, LindbladianSpec, MatrixEntries,
};
use qsl_core::functionals::ReferenceBasis;
use qsl_core::models::{builtin_lindbladian, ModelKind, ModelParams};
use qsl_core::qmath::{check_clip, C64};
use serde::Deserialize;

use crate::args::SystemArgs;
use crate::error::CliError;

/// Generator file with an optional initial state.
#[derive(Deserialize)]
struct SystemFile {
    #[serde(flatten)]
    spec: LindbladianSpec,
    #[serde(default)]
    rho0: Option<MatrixEntries>,
}

/// Parameter values before model validation; sweeps override fields.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParamValues {
    pub gamma0: Option<f64>,
    pub n: Option<f64>,
    pub gamma: Option<f64>,
    pub theta: Option<f64>,
}

impl ParamValues {
    pub fn resolve(&self, model: ModelKind) -> Result<ModelParams, CliError> {
        let theta = self
            .theta
            .ok_or_else(|| CliError::Usage(format!("--theta is required for the {model} model")))?;
        let params = match model {
            ModelKind::Thermalization => match (self.gamma0, self.n, self.gamma) {
                (Some(gamma0), Some(n), None) => ModelParams::thermalization(gamma0, n, theta)?,
                (Some(gamma0), Some(n), Some(gamma)) => ModelParams {
                    model,
                    gamma0,
                    n,
                    gamma,
                    theta,
                }
                .validated()?,
                (None, Some(n), Some(gamma)) => {
                    ModelParams::thermalization_with_gamma(gamma, n, theta)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "thermalization needs --N and one of --gamma0/--gamma".into(),
                    ))
                }
            },
            ModelKind::Dephasing | ModelKind::Dissipative => {
                let gamma = self.gamma.ok_or_else(|| {
                    CliError::Usage(format!("--gamma is required for the {model} model"))
                })?;
                if model == ModelKind::Dephasing {
                    ModelParams::dephasing(gamma, theta)?
                } else {
                    ModelParams::dissipative(gamma, theta)?
                }
            }
        };
        Ok(params)
    }
}

/// Where the dynamics come from.
#[derive(Clone, Debug)]
pub enum Source {
    Model {
        kind: ModelKind,
        values: ParamValues,
    },
    File {
        spec: LindbladianSpec,
        rho0: Option<MatrixEntries>,
    },
}

/// A fully specified run apart from the horizon.
pub struct System {
    pub lindbladian: Lindbladian,
    pub rho0: DensityMatrix,
    pub params: Option<ModelParams>,
}

pub struct Setup {
    pub source: Source,
    pub basis: Option<ReferenceBasis>,
    pub steps: usize,
    pub clip: f64,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn check_steps(steps: usize) -> Result<(), CliError> {
    if steps < 16 || !steps.is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "--steps must be even and at least 16, got {steps}"
        )));
    }
    Ok(())
}

pub fn check_horizon(horizon: f64) -> Result<(), CliError> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(CliError::Usage(format!(
            "--T must be positive, got {horizon}"
        )));
    }
    Ok(())
}

impl Setup {
    pub fn from_args(args: &SystemArgs) -> Result<Self, CliError> {
        check_steps(args.steps)?;
        check_clip(args.clip).map_err(|e| CliError::Usage(e.to_string()))?;
        let source = if let Some(path) = &args.lindbladian {
            let file: SystemFile = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Source::File {
                spec: file.spec,
                rho0: file.rho0,
            }
        } else {
            let mut values = ParamValues::default();
            let mut kind = args.model;
            if let Some(path) = &args.params {
                let p: ModelParams = serde_json::from_str(&read(path)?)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                kind = kind.or(Some(p.model));
                values = ParamValues {
                    gamma0: Some(p.gamma0),
                    n: Some(p.n),
                    gamma: Some(p.gamma),
                    theta: Some(p.theta),
                };
            }
            let kind = kind.ok_or_else(|| {
                CliError::Usage("one of --model, --params or --lindbladian is required".into())
            })?;
            if args.gamma0.is_some() || args.n.is_some() {
                // γ is derived from γ₀ and N unless given explicitly
                values.gamma = None;
            }
            values.gamma0 = args.gamma0.or(values.gamma0);
            values.n = args.n.or(values.n);
            values.gamma = args.gamma.or(values.gamma);
            values.theta = args.theta.or(values.theta);
            Source::Model { kind, values }
        };
        let basis = if args.basis == "computational" {
            None
        } else {
            let entries: MatrixEntries = serde_json::from_str(&read(Path::new(&args.basis))?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", args.basis)))?;
            let m = decode_matrix(&entries, entries.len())?;
            Some(ReferenceBasis::new(m)?)
        };
        let setup = Self {
            source,
            basis,
            steps: args.steps,
            clip: args.clip,
        };
        // fail early on inconsistent parameters
        if let Source::File { .. } = setup.source {
            setup.system(None, args.theta)?;
        }
        Ok(setup)
    }

    pub fn is_model(&self) -> bool {
        matches!(self.source, Source::Model { .. })
    }

    /// Builds the generator and initial state, applying `overrides` to model
    /// parameters. `theta` selects the start state of a generator file
    /// without `rho0`.
    pub fn system(
        &self,
        overrides: Option<&ParamValues>,
        theta: Option<f64>,
    ) -> Result<System, CliError> {
        match &self.source {
            Source::Model { kind, values } => {
                let values = overrides.copied().unwrap_or(*values);
                let params = values.resolve(*kind)?;
                Ok(System {
                    lindbladian: builtin_lindbladian(&params)?,
                    rho0: DensityMatrix::bloch_state(params.theta),
                    params: Some(params),
                })
            }
            Source::File { spec, rho0 } => {
                let lindbladian = spec.build()?;
                let d = spec.dim;
                let rho0 = match (rho0, theta) {
                    (Some(entries), _) => DensityMatrix::new(decode_matrix(entries, d)?)?,
                    (None, Some(theta)) if d == 2 => DensityMatrix::bloch_state(theta),
                    (None, Some(_)) => {
                        return Err(CliError::Usage(
                            "--theta only selects a start state for two-level generators".into(),
                        ))
                    }
                    (None, None) => {
                        let mut psi = vec![C64::new(0.0, 0.0); d];
                        psi[0] = C64::new(1.0, 0.0);
                        DensityMatrix::from_pure(&psi)?
                    }
                };
                Ok(System {
                    lindbladian,
                    rho0,
                    params: None,
                })
            }
        }
    }

    pub fn basis(&self, dim: usize) -> Result<ReferenceBasis, CliError> {
        match &self.basis {
            None => Ok(ReferenceBasis::computational(dim)),
            Some(b) if b.dim() == dim => Ok(b.clone()),
            Some(b) => Err(CliError::Usage(format!(
                "basis has dimension {}, system has {dim}",
                b.dim()
            ))),
        }
    }
}
