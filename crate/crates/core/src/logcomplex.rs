use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A nonzero complex number stored as (log-magnitude, phase), plus a tagged
/// zero.
///
/// Partition functions on an N x M torus scale like exp(O(NM)) and overflow
/// f64 well below the lattice sizes used here, so every Z is carried in this
/// form end to end. The zero value (`log_mag = -inf`) represents an exact
/// Lee-Yang zero hit: a legal result, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    /// Natural log of the magnitude.
    pub log_mag: f64,
    /// Phase in (-pi, pi].
    pub phase: f64,
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    let p = x.rem_euclid(TAU);
    if p > PI {
        p - TAU
    } else {
        p
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        LogComplex {
            log_mag,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(z.norm().ln(), z.arg())
    }

    /// Real positive value from its natural log.
    pub fn from_log_real(log_mag: f64) -> Self {
        LogComplex { log_mag, phase: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// The represented value, when exp(log_mag) is representable in f64.
    pub fn value(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn mul(&self, other: &LogComplex) -> LogComplex {
        if self.is_zero() || other.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag + other.log_mag, self.phase + other.phase)
    }

    pub fn div(&self, other: &LogComplex) -> LogComplex {
        assert!(!other.is_zero(), "division by a zero LogComplex");
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag - other.log_mag, self.phase - other.phase)
    }

    /// Relative deviation used by the oracle comparisons:
    /// |log a - log b| / max(1, |log b|) on the magnitudes.
    pub fn rel_log_diff(&self, other: &LogComplex) -> f64 {
        (self.log_mag - other.log_mag).abs() / other.log_mag.abs().max(1.0)
    }

    /// Phase difference mod 2 pi, folded into [0, pi].
    pub fn phase_diff(&self, other: &LogComplex) -> f64 {
        wrap_phase(self.phase - other.phase).abs()
    }
}

impl std::fmt::Display for LogComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exp({:.6} + {:.6}i)", self.log_mag, self.phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn phase_wraps_into_half_open_interval() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert_abs_diff_eq!(wrap_phase(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_phase(-0.5), -0.5, epsilon = 0.0);
        assert!(wrap_phase(1e9) <= PI && wrap_phase(1e9) > -PI);
    }

    #[test]
    fn round_trips_values() {
        let z = Complex64::new(-3.25, 4.5);
        let l = LogComplex::from_complex(z);
        let back = l.value();
        assert_abs_diff_eq!(back.re, z.re, epsilon = 1e-12);
        assert_abs_diff_eq!(back.im, z.im, epsilon = 1e-12);
    }

    #[test]
    fn zero_is_tagged_and_absorbing() {
        let zero = LogComplex::from_complex(Complex64::new(0.0, 0.0));
        assert!(zero.is_zero());
        assert_eq!(zero.value(), Complex64::new(0.0, 0.0));
        let one = LogComplex::from_complex(Complex64::new(1.0, 0.0));
        assert!(zero.mul(&one).is_zero());
    }

    #[test]
    fn multiplication_adds_logs_and_wraps() {
        let a = LogComplex::new(2.0, 2.8);
        let b = LogComplex::new(1.0, 2.8);
        let c = a.mul(&b);
        assert_abs_diff_eq!(c.log_mag, 3.0, epsilon = 0.0);
        assert_abs_diff_eq!(c.phase, 5.6 - TAU, epsilon = 1e-12);
    }
}
