//! Field-free ground state of the wedge box and the Rayleigh energy of the
//! one-parameter trial state.
//!
//! The field-free planar factor is J_m0(alpha rho / d) cos(m0 theta) with
//! m0 = pi/theta0 and alpha the first zero of J_m0. Under a lateral field the
//! trial state multiplies it by exp(-beta rho cos(theta)). The z direction
//! separates exactly: the cos(pi z / L) factor contributes (pi/L)^2 to every
//! energy and cancels from the Stark shift, so all integrals here are planar.
//!
//! Energies are Rayleigh quotients of the unnormalized trial state; the
//! kinetic term uses the Dirichlet gradient form, which equals the
//! -laplacian form by Green's identity because the state vanishes on the
//! boundary, and never needs second derivatives of Bessel functions.

use crate::model::{FieldSpec, WedgeGeometry};
use crate::quadrature::{gauss_legendre, QuadratureError};
use crate::specfun::{bessel_j, bessel_j_prime, first_zero, BesselOrder, SpecFunError};

/// Largest allowed |beta| * d. Keeps the exponent of the trial factor within
/// |beta rho| <= 500, far above any physical optimum but safely below
/// floating-point overflow of the squared factor.
pub const MAX_BETA_TIMES_D: f64 = 500.0;

/// Largest supported angular order m0 = pi/theta0 (set by the Bessel series).
pub const MAX_ANGULAR_ORDER: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnergyError {
    #[error("angular order m0 = {m0} exceeds the supported maximum {max} (theta0 too small)")]
    OrderTooLarge { m0: f64, max: f64 },
    #[error("point (rho, theta) = ({rho}, {theta}) lies outside the wedge")]
    OutsideWedge { rho: f64, theta: f64 },
    #[error("beta must be finite with |beta| <= {max} (= 500/d), got {beta}")]
    BetaOutOfRange { beta: f64, max: f64 },
    #[error("trial integrals are not finite or degenerate (S = {s}, K2D = {k2d}, P = {p})")]
    NonFiniteResult { s: f64, k2d: f64, p: f64 },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Field-free ground state data of a wedge geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    /// Bessel order m0 = pi / theta0.
    pub m0: f64,
    /// First positive zero of J_m0.
    pub alpha: f64,
    /// Field-free energy (alpha/d)^2 + (pi/L)^2 in R*.
    pub e0: f64,
    pub geometry: WedgeGeometry,
}

pub fn ground_state(geometry: WedgeGeometry) -> Result<GroundState, EnergyError> {
    let m0 = geometry.angular_order();
    if m0 > MAX_ANGULAR_ORDER {
        return Err(EnergyError::OrderTooLarge {
            m0,
            max: MAX_ANGULAR_ORDER,
        });
    }
    let alpha = first_zero(BesselOrder::new(m0)?)?;
    let radial = alpha / geometry.d();
    let axial = std::f64::consts::PI / geometry.l();
    Ok(GroundState {
        m0,
        alpha,
        e0: radial * radial + axial * axial,
        geometry,
    })
}

impl GroundState {
    /// Planar part of the field-free energy, (alpha/d)^2.
    pub fn planar_energy(&self) -> f64 {
        let r = self.alpha / self.geometry.d();
        r * r
    }

    /// Axial kinetic term (pi/L)^2.
    pub fn axial_energy(&self) -> f64 {
        let a = std::f64::consts::PI / self.geometry.l();
        a * a
    }
}

/// Pointwise evaluators for the planar trial factor
/// f(rho, theta) = J_m0(alpha rho / d) cos(m0 theta) exp(-beta rho cos theta)
/// and its first partial derivatives.
#[derive(Debug, Clone, Copy)]
pub struct TrialFactor {
    m0: f64,
    alpha: f64,
    d: f64,
    half_aperture: f64,
    beta: f64,
}

pub fn trial_factor(gs: &GroundState, beta: f64) -> Result<TrialFactor, EnergyError> {
    let max = MAX_BETA_TIMES_D / gs.geometry.d();
    if !beta.is_finite() || beta.abs() > max {
        return Err(EnergyError::BetaOutOfRange { beta, max });
    }
    Ok(TrialFactor {
        m0: gs.m0,
        alpha: gs.alpha,
        d: gs.geometry.d(),
        half_aperture: gs.geometry.theta0() / 2.0,
        beta,
    })
}

impl TrialFactor {
    fn check_domain(&self, rho: f64, theta: f64) -> Result<(), EnergyError> {
        if !(0.0..=self.d).contains(&rho) || theta.abs() > self.half_aperture {
            return Err(EnergyError::OutsideWedge { rho, theta });
        }
        Ok(())
    }

    pub fn value(&self, rho: f64, theta: f64) -> Result<f64, EnergyError> {
        self.check_domain(rho, theta)?;
        let j = bessel_j(BesselOrder::new(self.m0)?, self.alpha * rho / self.d)?;
        Ok(j * (self.m0 * theta).cos() * (-self.beta * rho * theta.cos()).exp())
    }

    /// d f / d rho; rho = 0 is excluded because J'_m0 diverges there for
    /// m0 < 1 (the radial quadrature never samples rho = 0).
    pub fn d_rho(&self, rho: f64, theta: f64) -> Result<f64, EnergyError> {
        self.check_domain(rho, theta)?;
        let nu = BesselOrder::new(self.m0)?;
        let x = self.alpha * rho / self.d;
        let j = bessel_j(nu, x)?;
        let dj = (self.alpha / self.d) * bessel_j_prime(nu, x)?;
        let radial = dj - self.beta * theta.cos() * j;
        Ok(radial * (self.m0 * theta).cos() * (-self.beta * rho * theta.cos()).exp())
    }

    pub fn d_theta(&self, rho: f64, theta: f64) -> Result<f64, EnergyError> {
        self.check_domain(rho, theta)?;
        let j = bessel_j(BesselOrder::new(self.m0)?, self.alpha * rho / self.d)?;
        let angular = -self.m0 * (self.m0 * theta).sin()
            + self.beta * rho * theta.sin() * (self.m0 * theta).cos();
        Ok(angular * j * (-self.beta * rho * theta.cos()).exp())
    }
}

/// Planar integrals of the trial state and the resulting Rayleigh energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialEvaluation {
    pub beta: f64,
    /// Norm integral  S = int f^2 rho drho dtheta.
    pub s: f64,
    /// Gradient-form planar kinetic integral
    /// K2D = int [(df/drho)^2 + (df/dtheta)^2 / rho^2] rho drho dtheta.
    pub k2d: f64,
    /// Dipole integral  P = int (rho cos theta) f^2 rho drho dtheta.
    pub p: f64,
    /// Rayleigh energy  E = (K2D + F P) / S + (pi/L)^2  in R*.
    pub e: f64,
}

impl TrialEvaluation {
    /// Expectation value <rho cos theta> of the trial state.
    pub fn dipole_mean(&self) -> f64 {
        self.p / self.s
    }
}

/// Tensor-product evaluator for the trial energy at fixed geometry and rule
/// sizes. The Bessel factors depend only on rho and the trig factors only on
/// theta, so they are tabulated once; each `evaluate` call is then pure
/// arithmetic over the grid, which is what makes scanning beta cheap.
#[derive(Debug, Clone)]
pub struct TrialEnergy {
    gs: GroundState,
    nr: usize,
    nt: usize,
    rho: Vec<f64>,
    w_rho: Vec<f64>,
    radial: Vec<f64>,
    radial_deriv: Vec<f64>,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    w_theta: Vec<f64>,
    cos_m: Vec<f64>,
    sin_m: Vec<f64>,
}

impl TrialEnergy {
    pub fn new(gs: &GroundState, nr: usize, nt: usize) -> Result<Self, EnergyError> {
        let g = gs.geometry;
        let nu = BesselOrder::new(gs.m0)?;
        let scale = gs.alpha / g.d();

        let rule_r = gauss_legendre(nr)?;
        let half_d = 0.5 * g.d();
        let mut rho = Vec::with_capacity(nr);
        let mut w_rho = Vec::with_capacity(nr);
        let mut radial = Vec::with_capacity(nr);
        let mut radial_deriv = Vec::with_capacity(nr);
        for (&x, &w) in rule_r.nodes().iter().zip(rule_r.weights()) {
            let r = half_d * (x + 1.0);
            rho.push(r);
            w_rho.push(w * half_d);
            radial.push(bessel_j(nu, scale * r)?);
            radial_deriv.push(scale * bessel_j_prime(nu, scale * r)?);
        }

        let rule_t = gauss_legendre(nt)?;
        let half_t = 0.5 * g.theta0();
        let mut cos_theta = Vec::with_capacity(nt);
        let mut sin_theta = Vec::with_capacity(nt);
        let mut w_theta = Vec::with_capacity(nt);
        let mut cos_m = Vec::with_capacity(nt);
        let mut sin_m = Vec::with_capacity(nt);
        for (&x, &w) in rule_t.nodes().iter().zip(rule_t.weights()) {
            let theta = half_t * x;
            cos_theta.push(theta.cos());
            sin_theta.push(theta.sin());
            w_theta.push(w * half_t);
            cos_m.push((gs.m0 * theta).cos());
            sin_m.push((gs.m0 * theta).sin());
        }

        Ok(Self {
            gs: *gs,
            nr,
            nt,
            rho,
            w_rho,
            radial,
            radial_deriv,
            cos_theta,
            sin_theta,
            w_theta,
            cos_m,
            sin_m,
        })
    }

    pub fn rule_sizes(&self) -> (usize, usize) {
        (self.nr, self.nt)
    }

    pub fn ground_state(&self) -> &GroundState {
        &self.gs
    }

    pub fn evaluate(&self, beta: f64, field: FieldSpec) -> Result<TrialEvaluation, EnergyError> {
        let max = MAX_BETA_TIMES_D / self.gs.geometry.d();
        if !beta.is_finite() || beta.abs() > max {
            return Err(EnergyError::BetaOutOfRange { beta, max });
        }
        let m0 = self.gs.m0;
        let mut s = 0.0;
        let mut k2d = 0.0;
        let mut p = 0.0;
        for i in 0..self.rho.len() {
            let rho = self.rho[i];
            let u = self.radial[i];
            let du = self.radial_deriv[i];
            let inv_rho2 = 1.0 / (rho * rho);
            let mut s_row = 0.0;
            let mut k_row = 0.0;
            let mut p_row = 0.0;
            for j in 0..self.cos_theta.len() {
                let ct = self.cos_theta[j];
                let envelope = (-beta * rho * ct).exp();
                let f = u * self.cos_m[j] * envelope;
                let f_rho = (du - beta * ct * u) * self.cos_m[j] * envelope;
                let f_theta =
                    (-m0 * self.sin_m[j] + beta * rho * self.sin_theta[j] * self.cos_m[j])
                        * u
                        * envelope;
                let w = self.w_theta[j];
                s_row += w * f * f;
                k_row += w * (f_rho * f_rho + f_theta * f_theta * inv_rho2);
                p_row += w * rho * ct * f * f;
            }
            let wr = self.w_rho[i] * rho; // polar Jacobian
            s += wr * s_row;
            k2d += wr * k_row;
            p += wr * p_row;
        }
        if !(s.is_finite() && k2d.is_finite() && p.is_finite()) || s <= 0.0 {
            return Err(EnergyError::NonFiniteResult { s, k2d, p });
        }
        let e = (k2d + field.magnitude() * p) / s + self.gs.axial_energy();
        if !e.is_finite() {
            return Err(EnergyError::NonFiniteResult { s, k2d, p });
        }
        Ok(TrialEvaluation { beta, s, k2d, p, e })
    }
}

/// Rayleigh energy of the trial state at one beta; see [`TrialEnergy`] for
/// scanning many betas on a fixed rule.
pub fn evaluate_trial(
    gs: &GroundState,
    field: FieldSpec,
    beta: f64,
    nr: usize,
    nt: usize,
) -> Result<TrialEvaluation, EnergyError> {
    TrialEnergy::new(gs, nr, nt)?.evaluate(beta, field)
}

/// Relative change of E(beta) when both rule sizes double; a proxy for the
/// quadrature error of the energy at the given point.
pub fn quadrature_self_check(
    gs: &GroundState,
    field: FieldSpec,
    beta: f64,
    nr: usize,
    nt: usize,
) -> Result<f64, EnergyError> {
    let coarse = evaluate_trial(gs, field, beta, nr, nt)?.e;
    let fine = evaluate_trial(gs, field, beta, 2 * nr, 2 * nt)?.e;
    Ok((fine - coarse).abs() / fine.abs())
}
