//! Domain types and the reduced-atomic-unit system.
//!
//! All physics in this crate is done in reduced units: lengths in effective
//! Bohr radii a*, energies in effective Rydbergs R*, electric fields in
//! F0 = R*/(e a*). In these units the Hamiltonian of the confined electron
//! reads -laplacian + F rho cos(theta) inside the wedge.

use std::f64::consts::PI;

/// CODATA/SI values used only to report physical scales; the solver itself
/// never touches them. h and e are exact in SI-2019.
const PLANCK: f64 = 6.626_070_15e-34; // J s
const ELECTRON_MASS: f64 = 9.109_383_701_5e-31; // kg
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19; // C
const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12; // F/m

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("{name} must be finite and positive, got {value}")]
    NonPositiveDimension { name: &'static str, value: f64 },
    #[error("angular aperture must lie in (0, 2*pi], got {value}")]
    ApertureOutOfRange { value: f64 },
    #[error("{name} must be finite and positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("field magnitude must be finite and non-negative, got {value}")]
    NegativeField { value: f64 },
}

/// Wedge-shaped box: 0 <= rho <= d, |theta| <= theta0/2, |z| <= L/2.
///
/// `d` and `l` are in units of a*, `theta0` in radians. The aperture is
/// capped at 2*pi so the angular Bessel order pi/theta0 stays >= 1/2,
/// which keeps the kinetic-energy integrals finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeGeometry {
    d: f64,
    theta0: f64,
    l: f64,
}

impl WedgeGeometry {
    pub fn new(d: f64, theta0: f64, l: f64) -> Result<Self, ModelError> {
        if !d.is_finite() || d <= 0.0 {
            return Err(ModelError::NonPositiveDimension { name: "d", value: d });
        }
        if !l.is_finite() || l <= 0.0 {
            return Err(ModelError::NonPositiveDimension { name: "L", value: l });
        }
        if !theta0.is_finite() || theta0 <= 0.0 || theta0 > 2.0 * PI {
            return Err(ModelError::ApertureOutOfRange { value: theta0 });
        }
        Ok(Self { d, theta0, l })
    }

    /// Radial extent in a*.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Angular aperture in radians.
    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// Thickness in a*.
    pub fn l(&self) -> f64 {
        self.l
    }

    /// Bessel order forced by the Dirichlet condition at theta = +-theta0/2.
    pub fn angular_order(&self) -> f64 {
        PI / self.theta0
    }

    /// True for points inside or on the boundary of the wedge cross-section.
    pub fn contains_planar(&self, rho: f64, theta: f64) -> bool {
        (0.0..=self.d).contains(&rho) && theta.abs() <= self.theta0 / 2.0
    }
}

/// Validated constructor matching the raw CLI/config inputs.
pub fn validate_geometry(d: f64, theta0: f64, l: f64) -> Result<WedgeGeometry, ModelError> {
    WedgeGeometry::new(d, theta0, l)
}

/// Lateral electric field, fixed along +x (toward the wide side of the wedge),
/// magnitude in units of F0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    magnitude: f64,
}

impl FieldSpec {
    pub fn new(magnitude: f64) -> Result<Self, ModelError> {
        if !magnitude.is_finite() || magnitude < 0.0 {
            return Err(ModelError::NegativeField { value: magnitude });
        }
        Ok(Self { magnitude })
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }
}

/// Physical values of the reduced units, for reporting only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScales {
    pub epsilon: f64,
    pub effective_mass_ratio: f64,
    /// a* in nm
    pub bohr_star_nm: f64,
    /// R* in meV
    pub rydberg_star_mev: f64,
    /// F0 in kV/cm
    pub field_unit_kv_per_cm: f64,
}

impl UnitScales {
    /// a* = 4 pi eps0 hbar^2 eps / (m* e^2), R* = hbar^2 / (2 m* a*^2),
    /// F0 = R* / (e a*). The last definition makes e * F0 * a* = R* exact,
    /// which is what the reduced potential term F rho cos(theta) assumes.
    pub fn new(effective_mass_ratio: f64, epsilon: f64) -> Result<Self, ModelError> {
        if !effective_mass_ratio.is_finite() || effective_mass_ratio <= 0.0 {
            return Err(ModelError::NonPositiveParameter {
                name: "effective mass ratio",
                value: effective_mass_ratio,
            });
        }
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(ModelError::NonPositiveParameter {
                name: "epsilon",
                value: epsilon,
            });
        }
        let hbar = PLANCK / (2.0 * PI);
        let m_star = effective_mass_ratio * ELECTRON_MASS;
        let a_star_m = 4.0 * PI * VACUUM_PERMITTIVITY * hbar * hbar * epsilon
            / (m_star * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);
        let rydberg_j = hbar * hbar / (2.0 * m_star * a_star_m * a_star_m);
        let field_v_per_m = rydberg_j / (ELEMENTARY_CHARGE * a_star_m);
        Ok(Self {
            epsilon,
            effective_mass_ratio,
            bohr_star_nm: a_star_m * 1e9,
            rydberg_star_mev: rydberg_j / ELEMENTARY_CHARGE * 1e3,
            field_unit_kv_per_cm: field_v_per_m * 1e-5,
        })
    }
}

/// See [`UnitScales::new`].
pub fn unit_scales(effective_mass_ratio: f64, epsilon: f64) -> Result<UnitScales, ModelError> {
    UnitScales::new(effective_mass_ratio, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn accepts_narrow_wedge_geometry() {
        let g = validate_geometry(10.0, PI / 20.0, 1.0).unwrap();
        assert_eq!(g.d(), 10.0);
        assert_eq!(g.theta0(), PI / 20.0);
        assert_eq!(g.l(), 1.0);
        assert_relative_eq!(g.angular_order(), 20.0, max_relative = 1e-15);
    }

    #[test]
    fn accepts_half_disk() {
        let g = validate_geometry(1.0, PI, 1.0).unwrap();
        assert_relative_eq!(g.angular_order(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(
            validate_geometry(-1.0, PI / 4.0, 1.0),
            Err(ModelError::NonPositiveDimension { name: "d", .. })
        ));
        assert!(matches!(
            validate_geometry(1.0, PI / 4.0, 0.0),
            Err(ModelError::NonPositiveDimension { name: "L", .. })
        ));
        assert!(matches!(
            validate_geometry(1.0, 0.0, 1.0),
            Err(ModelError::ApertureOutOfRange { .. })
        ));
        assert!(matches!(
            validate_geometry(1.0, 2.0 * PI + 1e-9, 1.0),
            Err(ModelError::ApertureOutOfRange { .. })
        ));
    }

    /// Every finite triple must produce a value or a typed error, never a panic.
    #[test]
    fn geometry_validation_is_total() {
        let samples = [
            0.0,
            -0.0,
            1.0,
            -1.0,
            1e-300,
            -1e-300,
            1e300,
            -1e300,
            f64::MIN_POSITIVE,
            f64::EPSILON,
            2.0 * PI,
            f64::NAN,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ];
        for &d in &samples {
            for &t in &samples {
                for &l in &samples {
                    let _ = validate_geometry(d, t, l);
                }
            }
        }
    }

    #[test]
    fn hydrogenic_scales() {
        let u = unit_scales(1.0, 1.0).unwrap();
        // CODATA Bohr radius 0.052917721 nm and Rydberg energy 13.605693 eV.
        assert_relative_eq!(u.bohr_star_nm, 0.052_917_721_090_3, max_relative = 1e-9);
        assert_relative_eq!(u.rydberg_star_mev, 13_605.693_122_994, max_relative = 1e-9);
    }

    #[test]
    fn field_unit_closes_the_unit_system() {
        // e * F0 * a* = R* has to hold exactly by construction.
        for &(mr, eps) in &[(1.0, 1.0), (0.067, 12.9), (0.2, 4.0)] {
            let u = unit_scales(mr, eps).unwrap();
            let field_v_per_m = u.field_unit_kv_per_cm * 1e5;
            let a_star_m = u.bohr_star_nm * 1e-9;
            let rydberg_ev = u.rydberg_star_mev * 1e-3;
            let product_ev = field_v_per_m * a_star_m; // (e F0 a*) / e
            assert_relative_eq!(product_ev, rydberg_ev, max_relative = 1e-12);
        }
    }

    #[test]
    fn field_unit_matches_direct_formula() {
        // Independent route: F0 = e / (8 pi eps0 a*^2) in SI, the Gaussian
        // e/(2 a*^2) with e^2 -> e^2/(4 pi eps0).
        let u = unit_scales(1.0, 1.0).unwrap();
        let a_star_m = u.bohr_star_nm * 1e-9;
        let direct_v_per_m = ELEMENTARY_CHARGE
            / (8.0 * PI * VACUUM_PERMITTIVITY * a_star_m * a_star_m);
        assert_relative_eq!(
            u.field_unit_kv_per_cm * 1e5,
            direct_v_per_m,
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_non_positive_unit_parameters() {
        assert!(matches!(
            unit_scales(0.0, 1.0),
            Err(ModelError::NonPositiveParameter { .. })
        ));
        assert!(matches!(
            unit_scales(1.0, -2.0),
            Err(ModelError::NonPositiveParameter { .. })
        ));
    }
}
