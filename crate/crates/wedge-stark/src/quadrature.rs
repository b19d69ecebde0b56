//! Gauss-Legendre rules and tensor-product integration over the wedge
//! cross-section.
//!
//! The wedge maps to the rectangle [0, d] x [-theta0/2, theta0/2] exactly and
//! every integrand in this crate is smooth there, so a fixed tensor-product
//! rule converges geometrically; no adaptivity is needed. The rule is open:
//! no node lands on rho = 0 or on the angular boundaries, so 1/rho factors
//! stay finite at the sample points.

use crate::model::WedgeGeometry;

const MIN_NODES: usize = 2;
const MAX_NODES: usize = 512;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("gauss-legendre rule supports {min} <= n <= {max}, got {n}")]
    UnsupportedOrder { n: usize, min: usize, max: usize },
    #[error("integrand returned a non-finite value at (rho, theta) = ({rho}, {theta})")]
    NonFiniteIntegrand { rho: f64, theta: f64 },
    #[error("newton iteration for node {index} of the {n}-point rule did not converge")]
    NodeSearchFailed { index: usize, n: usize },
}

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    n: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Abscissae, strictly increasing and symmetric about zero.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrate f over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        half * acc
    }
}

/// Build the n-point Gauss-Legendre rule by Newton iteration on P_n from the
/// standard cosine initial guesses.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule, QuadratureError> {
    if !(MIN_NODES..=MAX_NODES).contains(&n) {
        return Err(QuadratureError::UnsupportedOrder {
            n,
            min: MIN_NODES,
            max: MAX_NODES,
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(QuadratureError::NodeSearchFailed { index: i, n });
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        // The cosine guess enumerates nodes from +1 downward; mirroring the
        // half rule enforces exact symmetry of nodes and weights.
        nodes[n - 1 - i] = z;
        weights[n - 1 - i] = w;
        nodes[i] = -z;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    Ok(QuadratureRule { n, nodes, weights })
}

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let d = n as f64 * (p_prev - x * p) / (1.0 - x * x);
    (p, d)
}

/// Tensor-product integral of f(rho, theta) over the wedge cross-section,
/// int_0^d int_{-theta0/2}^{theta0/2} f dtheta drho.
///
/// The polar Jacobian rho is the caller's responsibility inside f, so the
/// same operation serves weight-rho and weight-rho^2 integrands.
pub fn integrate_wedge<F>(
    mut f: F,
    geometry: &WedgeGeometry,
    nr: usize,
    nt: usize,
) -> Result<f64, QuadratureError>
where
    F: FnMut(f64, f64) -> f64,
{
    let radial = gauss_legendre(nr)?;
    let angular = gauss_legendre(nt)?;
    let half_r = 0.5 * geometry.d();
    let half_t = 0.5 * geometry.theta0();
    let mut total = 0.0;
    for (&xr, &wr) in radial.nodes().iter().zip(radial.weights()) {
        let rho = half_r * (xr + 1.0);
        let mut row = 0.0;
        for (&xt, &wt) in angular.nodes().iter().zip(angular.weights()) {
            let theta = half_t * xt;
            let v = f(rho, theta);
            if !v.is_finite() {
                return Err(QuadratureError::NonFiniteIntegrand { rho, theta });
            }
            row += wt * v;
        }
        total += wr * row;
    }
    Ok(total * half_r * half_t)
}

/// Refine the per-axis node count by doubling until the relative change of the
/// wedge integral drops below `target_rel`; returns the first node count that
/// satisfies it together with the integral value at that count.
pub fn refine_wedge_nodes<F>(
    f: F,
    geometry: &WedgeGeometry,
    start: usize,
    target_rel: f64,
    max_nodes: usize,
) -> Result<(usize, f64), QuadratureError>
where
    F: Fn(f64, f64) -> f64,
{
    let mut n = start.max(MIN_NODES);
    let mut coarse = integrate_wedge(&f, geometry, n, n)?;
    while 2 * n <= max_nodes.min(MAX_NODES) {
        let fine = integrate_wedge(&f, geometry, 2 * n, 2 * n)?;
        let scale = fine.abs().max(f64::MIN_POSITIVE);
        if (fine - coarse).abs() / scale < target_rel {
            return Ok((n, coarse));
        }
        n *= 2;
        coarse = fine;
    }
    Err(QuadratureError::NodeSearchFailed { index: 0, n })
}
