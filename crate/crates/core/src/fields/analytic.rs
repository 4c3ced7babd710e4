use super::{FieldError, SourceField};
use crate::text::real;
use crate::{Point, Vector};
use std::fmt;
use std::str::FromStr;

/// Closed-form source fields, mostly used as manufactured solutions.
///
/// Text form (as accepted by [`FromStr`] and produced by [`fmt::Display`]):
///
/// ```text
/// constant <hx> <hy> [<hz>]
/// linear <offset: d values> <gradient: d*d values, row-major>
/// poly-time <c0> <c1> ... | <spatial pattern recipe>
/// rotating-multipole <pole-pairs> <amplitude> <omega>
/// ```
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticField {
    Constant(Vector),
    /// `H(x) = offset + gradient · x`.
    LinearInSpace {
        offset: Vector,
        gradient: [[f64; 3]; 3],
        dim: usize,
    },
    /// `H(x, t) = (Σ_k c_k t^k) · pattern(x, t)`.
    PolynomialInTime {
        coefficients: Vec<f64>,
        pattern: Box<AnalyticField>,
    },
    /// Planar radial field `amplitude · cos(pθ − ωt) · r̂` rotating about the
    /// origin, with `p` pole pairs. `|H|²` at a fixed point shows `2p` maxima
    /// per mechanical revolution (duration `2πp/ω`). Zero at the origin.
    RotatingMultipole {
        pole_pairs: u32,
        amplitude: f64,
        omega: f64,
    },
}

impl AnalyticField {
    pub fn value(&self, x: &Point, t: f64) -> Vector {
        match self {
            AnalyticField::Constant(v) => *v,
            AnalyticField::LinearInSpace { offset, gradient, .. } => {
                let mut h = *offset;
                for (r, row) in gradient.iter().enumerate() {
                    h[r] += row[0] * x[0] + row[1] * x[1] + row[2] * x[2];
                }
                h
            }
            AnalyticField::PolynomialInTime {
                coefficients,
                pattern,
            } => {
                let factor = coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c);
                let h = pattern.value(x, t);
                [factor * h[0], factor * h[1], factor * h[2]]
            }
            AnalyticField::RotatingMultipole {
                pole_pairs,
                amplitude,
                omega,
            } => {
                let r = x[0].hypot(x[1]);
                if r == 0.0 {
                    return [0.0; 3];
                }
                let theta = x[1].atan2(x[0]);
                let radial = amplitude * (f64::from(*pole_pairs) * theta - omega * t).cos();
                [radial * x[0] / r, radial * x[1] / r, 0.0]
            }
        }
    }

    /// Duration of one mechanical revolution of a rotating multipole.
    pub fn revolution_period(&self) -> Option<f64> {
        match self {
            AnalyticField::RotatingMultipole {
                pole_pairs, omega, ..
            } => Some(2.0 * std::f64::consts::PI * f64::from(*pole_pairs) / omega),
            _ => None,
        }
    }
}

impl SourceField for AnalyticField {
    fn eval(&self, x: &Point, t: f64) -> Result<Option<Vector>, FieldError> {
        Ok(Some(self.value(x, t)))
    }
}

impl FromStr for AnalyticField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, pattern) = match s.split_once('|') {
            Some((head, pattern)) => (head, Some(pattern)),
            None => (s, None),
        };
        let mut tokens = head.split_whitespace();
        let kind = tokens.next().ok_or("empty analytic recipe")?;
        let numbers = tokens
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("invalid number `{t}` in analytic recipe"))
            })
            .collect::<Result<Vec<f64>, String>>()?;
        if pattern.is_some() && kind != "poly-time" {
            return Err("only poly-time recipes take a `| pattern`".into());
        }
        match kind {
            "constant" => match numbers.len() {
                2 | 3 => {
                    let mut v = [0.0; 3];
                    v[..numbers.len()].copy_from_slice(&numbers);
                    Ok(AnalyticField::Constant(v))
                }
                n => Err(format!("constant takes 2 or 3 components, got {n}")),
            },
            "linear" => {
                let dim = match numbers.len() {
                    6 => 2,
                    12 => 3,
                    n => return Err(format!("linear takes 6 (2D) or 12 (3D) numbers, got {n}")),
                };
                let mut offset = [0.0; 3];
                offset[..dim].copy_from_slice(&numbers[..dim]);
                let mut gradient = [[0.0; 3]; 3];
                for r in 0..dim {
                    for c in 0..dim {
                        gradient[r][c] = numbers[dim + r * dim + c];
                    }
                }
                Ok(AnalyticField::LinearInSpace {
                    offset,
                    gradient,
                    dim,
                })
            }
            "poly-time" => {
                let pattern = pattern.ok_or("poly-time needs `| <pattern recipe>`")?;
                if numbers.is_empty() {
                    return Err("poly-time needs at least one coefficient".into());
                }
                Ok(AnalyticField::PolynomialInTime {
                    coefficients: numbers,
                    pattern: Box::new(pattern.parse()?),
                })
            }
            "rotating-multipole" => {
                if numbers.len() != 3 {
                    return Err("rotating-multipole takes <pole-pairs> <amplitude> <omega>".into());
                }
                let p = numbers[0];
                if p < 1.0 || p.fract() != 0.0 || p > f64::from(u32::MAX) {
                    return Err(format!("pole pairs must be a positive integer, got {p}"));
                }
                Ok(AnalyticField::RotatingMultipole {
                    pole_pairs: p as u32,
                    amplitude: numbers[1],
                    omega: numbers[2],
                })
            }
            other => Err(format!(
                "unknown analytic recipe `{other}` (expected constant, linear, poly-time or rotating-multipole)"
            )),
        }
    }
}

impl fmt::Display for AnalyticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticField::Constant(v) => {
                write!(f, "constant {} {}", real(v[0]), real(v[1]))?;
                if v[2] != 0.0 {
                    write!(f, " {}", real(v[2]))?;
                }
                Ok(())
            }
            AnalyticField::LinearInSpace {
                offset,
                gradient,
                dim,
            } => {
                f.write_str("linear")?;
                for v in &offset[..*dim] {
                    write!(f, " {}", real(*v))?;
                }
                for row in &gradient[..*dim] {
                    for v in &row[..*dim] {
                        write!(f, " {}", real(*v))?;
                    }
                }
                Ok(())
            }
            AnalyticField::PolynomialInTime {
                coefficients,
                pattern,
            } => {
                f.write_str("poly-time")?;
                for c in coefficients {
                    write!(f, " {}", real(*c))?;
                }
                write!(f, " | {pattern}")
            }
            AnalyticField::RotatingMultipole {
                pole_pairs,
                amplitude,
                omega,
            } => write!(
                f,
                "rotating-multipole {pole_pairs} {} {}",
                real(*amplitude),
                real(*omega)
            ),
        }
    }
}

/// Source field backed by a closure, defined everywhere in space.
pub struct FnField<F> {
    f: F,
    span: (f64, f64),
}

impl<F> FnField<F>
where
    F: Fn(&Point, f64) -> Vector + Sync,
{
    pub fn new(f: F) -> Self {
        FnField {
            f,
            span: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn with_time_span(mut self, start: f64, end: f64) -> Self {
        self.span = (start, end);
        self
    }

    pub fn value(&self, x: &Point, t: f64) -> Vector {
        (self.f)(x, t)
    }
}

impl<F> SourceField for FnField<F>
where
    F: Fn(&Point, f64) -> Vector + Sync,
{
    fn time_span(&self) -> (f64, f64) {
        self.span
    }

    fn eval(&self, x: &Point, t: f64) -> Result<Option<Vector>, FieldError> {
        super::check_time(self.span, t)?;
        Ok(Some((self.f)(x, t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_polynomial() {
        let c: AnalyticField = "constant 1 0".parse().unwrap();
        assert_eq!(c.value(&[0.3, -4.0, 0.0], 17.0), [1.0, 0.0, 0.0]);
        let p: AnalyticField = "poly-time 0 0 1 | constant 1 2".parse().unwrap();
        assert_eq!(p.value(&[0.1, 0.2, 0.0], 3.0), [9.0, 18.0, 0.0]);
    }

    #[test]
    fn linear_in_space() {
        let f: AnalyticField = "linear 1 2 0 -1 1 0".parse().unwrap();
        assert_eq!(f.value(&[2.0, 3.0, 0.0], 0.0), [1.0 - 3.0, 2.0 + 2.0, 0.0]);
    }

    #[test]
    fn recipes_round_trip_through_text() {
        for text in [
            "constant 1 0",
            "constant 0.5 -2 3",
            "linear 1 2 0 -1 1 0",
            "poly-time 0 0 1 | constant 1 0",
            "poly-time 1.5 | linear 0 0 0 -1 1 0",
            "rotating-multipole 6 2 6.283185307179586",
        ] {
            let f: AnalyticField = text.parse().unwrap();
            assert_eq!(f.to_string(), text);
        }
        assert!("constant 1".parse::<AnalyticField>().is_err());
        assert!("rotating-multipole 1.5 1 1".parse::<AnalyticField>().is_err());
        assert!("sawtooth 1".parse::<AnalyticField>().is_err());
    }

    #[test]
    fn rotating_multipole_has_two_p_peaks_per_revolution() {
        let f = AnalyticField::RotatingMultipole {
            pole_pairs: 6,
            amplitude: 1.0,
            omega: 2.0 * PI,
        };
        let period = f.revolution_period().unwrap();
        let probe = [0.8, 0.3, 0.0];
        let samples = 2000;
        let series: Vec<f64> = (0..samples)
            .map(|k| {
                let h = f.value(&probe, period * k as f64 / samples as f64);
                h[0] * h[0] + h[1] * h[1]
            })
            .collect();
        let maxima = (0..samples)
            .filter(|&k| {
                let prev = series[(k + samples - 1) % samples];
                let next = series[(k + 1) % samples];
                series[k] > prev && series[k] >= next
            })
            .count();
        assert_eq!(maxima, 12);
        // the field itself repeats every 2π/ω
        let h0 = f.value(&probe, 0.1);
        let h1 = f.value(&probe, 0.1 + 1.0);
        assert!((h0[0] - h1[0]).abs() < 1e-12 && (h0[1] - h1[1]).abs() < 1e-12);
    }

    #[test]
    fn closure_field_checks_span() {
        let f = FnField::new(|x: &Point, t: f64| [x[0] * t, 0.0, 0.0]).with_time_span(0.0, 1.0);
        assert_eq!(f.eval(&[2.0, 0.0, 0.0], 0.5).unwrap(), Some([1.0, 0.0, 0.0]));
        assert!(f.eval(&[0.0; 3], 2.0).is_err());
    }
}
