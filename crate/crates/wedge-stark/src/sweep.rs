//! Parameter-scan engine: Stark shift as a function of slice radius, field
//! magnitude, or angular aperture, with an optional finite-difference oracle
//! column.
//!
//! Points are independent and run concurrently (bounded by the ambient rayon
//! pool); output order always follows the requested value order. A failing
//! point aborts the sweep and hands back the completed prefix instead of
//! leaving silent gaps in the table.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::energy::EnergyError;
use crate::model::{validate_geometry, FieldSpec, ModelError};
use crate::oracle::{fd_stark_shift, OracleError, PolarGrid};
use crate::variational::{stark_shift, VariationalError};

/// Eigenvalue tolerance used for oracle columns.
const ORACLE_EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Radius,
    Field,
    Aperture,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Radius => "radius",
            SweepAxis::Field => "field",
            SweepAxis::Aperture => "aperture",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "radius" => Ok(SweepAxis::Radius),
            "field" => Ok(SweepAxis::Field),
            "aperture" => Ok(SweepAxis::Aperture),
            other => Err(format!(
                "unknown sweep axis '{other}' (expected radius, field or aperture)"
            )),
        }
    }
}

/// Parameters held fixed along a sweep. The entry matching the swept axis is
/// ignored for that sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub d: f64,
    pub field: f64,
    pub theta0: f64,
    pub l: f64,
    pub nr: usize,
    pub nt: usize,
    pub tol: f64,
    pub oracle_nr: usize,
    pub oracle_nt: usize,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            d: 10.0,
            field: 1.0,
            theta0: std::f64::consts::PI / 20.0,
            l: 1.0,
            nr: 96,
            nt: 96,
            tol: 1e-8,
            oracle_nr: 96,
            oracle_nt: 96,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub fixed: FixedParams,
    pub with_oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub axis_value: f64,
    pub delta_e: f64,
    pub beta_star: f64,
    pub e_min: f64,
    pub e0: f64,
    pub evaluations: u64,
    pub oracle_delta_e: Option<f64>,
}

/// Full parameter echo stored with every table, enough to re-run it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepMeta {
    pub axis: SweepAxis,
    pub fixed: FixedParams,
    pub with_oracle: bool,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub records: Vec<SweepRecord>,
    pub meta: SweepMeta,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PointError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Variational(#[from] VariationalError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<EnergyError> for PointError {
    fn from(e: EnergyError) -> Self {
        PointError::Variational(VariationalError::Energy(e))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {reason}")]
    InvalidSpec { reason: String },
    #[error("sweep failed at axis value {axis_value}; completed records are preserved")]
    Partial {
        axis_value: f64,
        completed: Vec<SweepRecord>,
        #[source]
        source: PointError,
    },
}

impl SweepSpec {
    fn validate(&self) -> Result<(), SweepError> {
        if self.values.is_empty() {
            return Err(SweepError::InvalidSpec {
                reason: "values must not be empty".into(),
            });
        }
        for pair in self.values.windows(2) {
            // NaNs fail this comparison too and are rejected here.
            let ascending = pair[0] < pair[1];
            if !ascending {
                return Err(SweepError::InvalidSpec {
                    reason: format!(
                        "values must be strictly increasing, got {} then {}",
                        pair[0], pair[1]
                    ),
                });
            }
        }
        let range_ok = |v: f64| -> bool {
            match self.axis {
                SweepAxis::Radius => v.is_finite() && v > 0.0,
                SweepAxis::Field => v.is_finite() && v >= 0.0,
                SweepAxis::Aperture => v.is_finite() && v > 0.0 && v <= 2.0 * std::f64::consts::PI,
            }
        };
        if let Some(bad) = self.values.iter().find(|&&v| !range_ok(v)) {
            return Err(SweepError::InvalidSpec {
                reason: format!("value {bad} is outside the valid range of the {} axis", self.axis),
            });
        }
        Ok(())
    }
}

fn evaluate_point(spec: &SweepSpec, value: f64) -> Result<SweepRecord, PointError> {
    let fixed = &spec.fixed;
    let (d, theta0, field_mag) = match spec.axis {
        SweepAxis::Radius => (value, fixed.theta0, fixed.field),
        SweepAxis::Field => (fixed.d, fixed.theta0, value),
        SweepAxis::Aperture => (fixed.d, value, fixed.field),
    };
    let geometry = validate_geometry(d, theta0, fixed.l)?;
    let field = FieldSpec::new(field_mag)?;
    let result = stark_shift(geometry, field, fixed.nr, fixed.nt, fixed.tol)?;
    let oracle_delta_e = if spec.with_oracle {
        let grid = PolarGrid::new(fixed.oracle_nr, fixed.oracle_nt, geometry)?;
        Some(fd_stark_shift(&grid, field_mag, ORACLE_EIGEN_TOL)?)
    } else {
        None
    };
    Ok(SweepRecord {
        axis_value: value,
        delta_e: result.stark_shift,
        beta_star: result.beta_star,
        e_min: result.energy,
        e0: result.e0,
        evaluations: result.evaluations,
        oracle_delta_e,
    })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    spec.validate()?;
    let results: Vec<(f64, Result<SweepRecord, PointError>)> = spec
        .values
        .par_iter()
        .map(|&v| (v, evaluate_point(spec, v)))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    for (value, result) in results {
        match result {
            Ok(record) => records.push(record),
            Err(source) => {
                return Err(SweepError::Partial {
                    axis_value: value,
                    completed: records,
                    source,
                })
            }
        }
    }
    Ok(SweepTable {
        records,
        meta: SweepMeta {
            axis: spec.axis,
            fixed: spec.fixed,
            with_oracle: spec.with_oracle,
            version: env!("CARGO_PKG_VERSION"),
        },
    })
}

/// Stark shift across a list of apertures at fixed radius and field; the
/// physically sensible comparison needs theta0 <= pi, which is enforced here
/// on top of the generic sweep validation.
pub fn compare_apertures(
    d: f64,
    field: f64,
    apertures: &[f64],
    l: f64,
) -> Result<SweepTable, SweepError> {
    if let Some(bad) = apertures.iter().find(|&&t| !(t > 0.0 && t <= std::f64::consts::PI)) {
        return Err(SweepError::InvalidSpec {
            reason: format!("aperture {bad} outside (0, pi]"),
        });
    }
    let spec = SweepSpec {
        axis: SweepAxis::Aperture,
        values: apertures.to_vec(),
        fixed: FixedParams {
            d,
            field,
            l,
            ..FixedParams::default()
        },
        with_oracle: false,
    };
    run_sweep(&spec)
}
