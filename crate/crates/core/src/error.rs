use thiserror::Error;

use crate::schemes::{Plane, SchemeKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be {constraint}, got {value}")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("{0}")]
    InvalidInput(String),

    #[error("{plane} plane is not active for {scheme} in this sensing state")]
    InactivePlane { scheme: SchemeKind, plane: Plane },

    #[error("channel pair is zero, Alamouti combining is undecodable")]
    Undecodable,

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    QuadratureDiverged { estimate: f64, error_bound: f64 },

    #[error("target outage {target:e} is outside the curve range [{min:e}, {max:e}]")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64, Error> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            constraint: "finite and > 0",
            value,
        })
    }
}

pub(crate) fn ensure_probability(name: &'static str, value: f64) -> Result<f64, Error> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            constraint: "in [0, 1]",
            value,
        })
    }
}
