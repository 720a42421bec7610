#![allow(dead_code)]

use std::f64::consts::PI;

use qsl_core::dynamics::{DensityMatrix, Lindbladian};
use qsl_core::qmath::{CMatrix, HermitianMatrix, C64};
use rand::Rng;
use rand_distr::StandardNormal;

/// Double-exponential quadrature on `[a, b]`. Handles integrable endpoint
/// singularities such as `ln² t` at `t = 0`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let h = 1.0 / 128.0;
    let mut sum = 0.0;
    let kmax = (4.5 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let cosh_u = u.cosh();
        let w = 0.5 * PI * t.cosh() / (cosh_u * cosh_u);
        // distance from the nearer endpoint, 1 - |x| = 2 / (e^{2|u|} + 1)
        let gap = 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        if gap == 0.0 || w == 0.0 {
            continue;
        }
        let x = if k < 0 {
            a + half * gap
        } else {
            b - half * gap
        };
        sum += w * f(x);
    }
    sum * h * half
}

/// Qubit state with real Bloch components `(x, z)` and its time derivative,
/// as given by the printed closed-form solutions.
#[derive(Clone, Copy, Debug)]
pub struct BlochPoint {
    pub x: f64,
    pub z: f64,
    pub dx: f64,
    pub dz: f64,
    /// `1 - x² - z² = 4 det ρ`, evaluated without cancellation.
    pub defect: f64,
}

#[derive(Clone, Copy, Debug)]
pub enum OracleModel {
    Thermalization { gamma0: f64, gamma: f64, theta: f64 },
    Dephasing { gamma: f64, theta: f64 },
    Dissipative { gamma: f64, theta: f64 },
}

impl OracleModel {
    pub fn at(&self, t: f64) -> BlochPoint {
        match *self {
            OracleModel::Thermalization {
                gamma0,
                gamma,
                theta,
            } => {
                let e = (-gamma * t).exp();
                let r = gamma0 / gamma;
                // excited population p0 = (1 - r + e (r + cos θ)) / 2, z = 2 p0 - 1
                let z = -r + e * (r + theta.cos());
                let x = e * theta.sin();
                let q = -(-gamma * t).exp_m1();
                let c = theta.cos();
                let defect = q * (2.0 * r * c + 2.0 - q * (r * r + 2.0 * r * c + 1.0));
                BlochPoint {
                    x,
                    z,
                    dx: -gamma * x,
                    dz: -gamma * e * (r + c),
                    defect,
                }
            }
            OracleModel::Dephasing { gamma, theta } => {
                let x = (-gamma * t).exp() * theta.sin();
                let defect = theta.sin().powi(2) * -(-2.0 * gamma * t).exp_m1();
                BlochPoint {
                    x,
                    z: theta.cos(),
                    dx: -gamma * x,
                    dz: 0.0,
                    defect,
                }
            }
            OracleModel::Dissipative { gamma, theta } => {
                let c2 = (theta / 2.0).cos().powi(2);
                let p0 = (-gamma * t / 2.0).exp() * c2;
                let x = (-gamma * t / 4.0).exp() * theta.sin();
                let e = (-gamma * t / 2.0).exp();
                let defect = 4.0 * e * c2 * c2 * -(-gamma * t / 2.0).exp_m1();
                BlochPoint {
                    x,
                    z: 2.0 * p0 - 1.0,
                    dx: -gamma / 4.0 * x,
                    dz: -gamma * p0,
                    defect,
                }
            }
        }
    }
}

fn ent(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

impl BlochPoint {
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.z)
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = (1.0 - self.defect).max(0.0).sqrt();
        let low = self.defect / (2.0 * (1.0 + r));
        (low, 1.0 - low)
    }

    pub fn entropy(&self) -> f64 {
        let (a, b) = self.eigenvalues();
        ent(a) + ent(b)
    }

    pub fn dephased_entropy(&self) -> f64 {
        ent((1.0 + self.z) / 2.0) + ent((1.0 - self.z) / 2.0)
    }

    pub fn coherence(&self) -> f64 {
        self.dephased_entropy() - self.entropy()
    }

    /// `L(ρ) = (dx σx + dz σz) / 2`.
    pub fn speed_hs(&self) -> f64 {
        (0.5 * (self.dx * self.dx + self.dz * self.dz)).sqrt()
    }

    pub fn speed_tr(&self) -> f64 {
        self.dx.hypot(self.dz)
    }

    pub fn speed_hs_d(&self) -> f64 {
        self.dz.abs() / 2f64.sqrt()
    }

    pub fn log_hs(&self) -> f64 {
        let (a, b) = self.eigenvalues();
        a.ln().hypot(b.ln())
    }

    pub fn log_op(&self) -> f64 {
        let (a, b) = self.eigenvalues();
        a.ln().abs().max(b.ln().abs())
    }

    pub fn log_hs_d(&self) -> f64 {
        ((1.0 + self.z) / 2.0)
            .ln()
            .hypot(((1.0 - self.z) / 2.0).ln())
    }

    /// `dS/dt` from the chain rule on `S(r)`.
    pub fn entropy_rate(&self) -> f64 {
        let r = self.radius();
        if r == 0.0 {
            return 0.0;
        }
        let dr = (self.x * self.dx + self.z * self.dz) / r;
        let (low, high) = self.eigenvalues();
        -0.5 * (high / low).ln() * dr
    }

    pub fn to_density(self) -> DensityMatrix {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new((1.0 + self.z) / 2.0, 0.0),
                C64::new(self.x / 2.0, 0.0),
                C64::new(self.x / 2.0, 0.0),
                C64::new((1.0 - self.z) / 2.0, 0.0),
            ],
        );
        DensityMatrix::new(m).unwrap()
    }
}

/// Time averages and bound values of one model over `[0, T]`, by quadrature
/// of the oracle integrands.
pub struct OracleBounds {
    pub horizon: f64,
    pub lambda_hs: f64,
    pub lambda_tr: f64,
    pub lambda_hs_d: f64,
    pub avg_log_hs: f64,
    pub avg_log_op: f64,
    pub avg_log_hs_d: f64,
    pub esl: f64,
    pub isl: f64,
    pub csl: f64,
    pub erasure: f64,
    pub action_s: f64,
    pub action_i: f64,
    pub action_c: f64,
    pub info_rate_lhs: f64,
}

impl OracleModel {
    pub fn bounds(&self, horizon: f64) -> OracleBounds {
        let rms = |f: &dyn Fn(&BlochPoint) -> f64| {
            (tanh_sinh(|t| f(&self.at(t)).powi(2), 0.0, horizon) / horizon).sqrt()
        };
        let integral = |f: &dyn Fn(&BlochPoint) -> f64| tanh_sinh(|t| f(&self.at(t)), 0.0, horizon);
        let lambda_hs = rms(&|p| p.speed_hs());
        let lambda_tr = rms(&|p| p.speed_tr());
        let lambda_hs_d = rms(&|p| p.speed_hs_d());
        let avg_log_hs = rms(&|p| p.log_hs());
        let avg_log_op = rms(&|p| p.log_op());
        let avg_log_hs_d = rms(&|p| p.log_hs_d());
        let (p0, pt) = (self.at(0.0), self.at(horizon));
        let ds = (pt.entropy() - p0.entropy()).abs();
        let dc = (pt.coherence() - p0.coherence()).abs();
        let a_s = integral(&|p| (p.speed_hs() * p.log_hs()).powi(2));
        let a_i = integral(&|p| (p.speed_tr() * p.log_op()).powi(2));
        let a_d = integral(&|p| (p.speed_hs_d() * p.log_hs_d()).powi(2));
        OracleBounds {
            horizon,
            lambda_hs,
            lambda_tr,
            lambda_hs_d,
            avg_log_hs,
            avg_log_op,
            avg_log_hs_d,
            esl: ds / (lambda_hs * avg_log_hs),
            isl: ds / (lambda_tr * avg_log_op),
            csl: dc / (lambda_hs_d * avg_log_hs_d + lambda_hs * avg_log_hs),
            erasure: (2f64.ln() - p0.entropy()) / (lambda_tr * avg_log_op),
            action_s: ds * ds / a_s,
            action_i: ds * ds / a_i,
            action_c: dc * dc / (a_d.sqrt() + a_s.sqrt()).powi(2),
            info_rate_lhs: integral(&|p| p.entropy_rate().abs()) / horizon,
        }
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> HermitianMatrix {
    let a = random_matrix(rng, d);
    HermitianMatrix::new((&a + a.adjoint()) * C64::new(0.5, 0.0)).unwrap()
}

/// Ginibre state mixed with a little identity so that it is full rank.
pub fn random_full_rank_state<R: Rng>(rng: &mut R, d: usize) -> DensityMatrix {
    let w = random_matrix(rng, d);
    let mut rho = &w * w.adjoint();
    let tr = rho.trace().re;
    rho /= C64::new(tr, 0.0);
    let eps = rng.random_range(0.01..0.2);
    let mixed =
        rho * C64::new(1.0 - eps, 0.0) + CMatrix::identity(d, d) * C64::new(eps / d as f64, 0.0);
    DensityMatrix::new(mixed).unwrap()
}

/// Random Hamiltonian plus one to three random jumps with rates in `[0.1, 1]`.
pub fn random_lindbladian<R: Rng>(rng: &mut R, d: usize) -> Lindbladian {
    let h = random_hermitian(rng, d).scale(0.5);
    let mut l = Lindbladian::new(h);
    for _ in 0..rng.random_range(1..=3) {
        let j = random_matrix(rng, d) * C64::new(1.0 / (d as f64).sqrt(), 0.0);
        l = l.with_jump(j, rng.random_range(0.1..1.0)).unwrap();
    }
    l
}
