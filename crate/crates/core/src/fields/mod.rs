//! Source fields `H_s(x, t)`: the evaluator contract used by assembly, with
//! closed-form and mesh-backed implementations.

mod analytic;
mod discrete;
mod io;

pub use analytic::{AnalyticField, FnField};
pub use discrete::DiscreteField;
pub use io::{read_field, write_field, FieldFile};

use crate::basis::BasisError;
use crate::{Point, Vector};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("point ({}, {}, {}) lies outside the source mesh", .0[0], .0[1], .0[2])]
    Outside(Point),
    #[error("time {t} outside the source time span [{start}, {end}]")]
    TimeOutOfSpan { t: f64, start: f64, end: f64 },
    #[error("dof matrix is {found_rows}x{found_cols} but the mesh has {edges} edges and the grid {steps} steps")]
    DimensionMismatch {
        edges: usize,
        steps: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("dof matrix contains non-finite values")]
    NonFinite,
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// What to do with a quadrature point that falls outside the source domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutsidePolicy {
    /// Treat the source as zero there and count the point.
    #[default]
    Zero,
    /// Fail with the offending location.
    Strict,
}

impl FromStr for OutsidePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(OutsidePolicy::Zero),
            "strict" => Ok(OutsidePolicy::Strict),
            other => Err(format!("unknown outside-domain policy `{other}` (expected zero or strict)")),
        }
    }
}

impl fmt::Display for OutsidePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutsidePolicy::Zero => "zero",
            OutsidePolicy::Strict => "strict",
        })
    }
}

/// A deterministic evaluator of the source field.
///
/// `eval` returns `Ok(None)` for points outside the field's spatial domain;
/// the caller decides how to treat them (see [`OutsidePolicy`]).
pub trait SourceField: Sync {
    /// Time span on which the field is defined.
    fn time_span(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Times at which the field has kinks in time (the nodes of a discrete
    /// source). Temporal integration splits its intervals there.
    fn time_nodes(&self) -> &[f64] {
        &[]
    }

    /// Spatial bounding box, when the field has one.
    fn bounds(&self) -> Option<(Point, Point)> {
        None
    }

    fn eval(&self, x: &Point, t: f64) -> Result<Option<Vector>, FieldError>;

    /// Evaluates at one point for many times. Returns `Ok(false)` (leaving
    /// `out` unspecified) when the point is outside the domain.
    fn eval_series(&self, x: &Point, times: &[f64], out: &mut [Vector]) -> Result<bool, FieldError> {
        for (t, slot) in times.iter().zip(out.iter_mut()) {
            match self.eval(x, *t)? {
                Some(v) => *slot = v,
                None => return Ok(false),
            }
        }
        Ok(true)
    }
}

impl<F: SourceField + ?Sized> SourceField for &F {
    fn time_span(&self) -> (f64, f64) {
        (**self).time_span()
    }
    fn time_nodes(&self) -> &[f64] {
        (**self).time_nodes()
    }
    fn bounds(&self) -> Option<(Point, Point)> {
        (**self).bounds()
    }
    fn eval(&self, x: &Point, t: f64) -> Result<Option<Vector>, FieldError> {
        (**self).eval(x, t)
    }
    fn eval_series(&self, x: &Point, times: &[f64], out: &mut [Vector]) -> Result<bool, FieldError> {
        (**self).eval_series(x, times, out)
    }
}

pub(crate) fn check_time(span: (f64, f64), t: f64) -> Result<(), FieldError> {
    if t >= span.0 && t <= span.1 {
        Ok(())
    } else {
        Err(FieldError::TimeOutOfSpan {
            t,
            start: span.0,
            end: span.1,
        })
    }
}
