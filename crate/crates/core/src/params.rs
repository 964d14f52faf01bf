use num_complex::Complex64;

use crate::error::{Error, Result};

/// Critical inverse temperature of the isotropic square-lattice model in
/// units J = 1: the self-dual point ln(1 + sqrt(2)) / 2.
pub const BETA_CRITICAL: f64 = 0.440_686_793_509_771_5;

/// Coupling, inverse temperature and (complex) magnetic field.
///
/// The real part of `field` is the bath control parameter lambda; the
/// imaginary part encodes the coherence time axis through the substitution
/// lambda -> lambda + i u / beta with u the rescaled time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub coupling: f64,
    pub beta: f64,
    pub field: Complex64,
}

impl ModelParams {
    pub fn new(coupling: f64, beta: f64, field: Complex64) -> Result<Self> {
        if !coupling.is_finite() {
            return Err(Error::validation(format!("coupling must be finite, got {coupling}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::validation(format!(
                "beta must be finite and strictly positive, got {beta}"
            )));
        }
        if !(field.re.is_finite() && field.im.is_finite()) {
            return Err(Error::validation(format!("field must be finite, got {field}")));
        }
        Ok(ModelParams { coupling, beta, field })
    }

    pub fn real_field(coupling: f64, beta: f64, h: f64) -> Result<Self> {
        ModelParams::new(coupling, beta, Complex64::new(h, 0.0))
    }

    /// Same bath, field shifted to lambda + i u / beta; this is the complex
    /// continuation probed by the coherence signal at rescaled time u.
    pub fn with_time_shift(&self, u: f64) -> Self {
        ModelParams {
            coupling: self.coupling,
            beta: self.beta,
            field: self.field + Complex64::new(0.0, u / self.beta),
        }
    }

    pub fn beta_field(&self) -> Complex64 {
        self.field * self.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_inputs() {
        assert!(ModelParams::real_field(1.0, 0.0, 0.1).is_err());
        assert!(ModelParams::real_field(1.0, -0.4, 0.1).is_err());
        assert!(ModelParams::real_field(f64::NAN, 0.4, 0.1).is_err());
        assert!(ModelParams::new(1.0, 0.4, Complex64::new(0.1, f64::INFINITY)).is_err());
        assert!(ModelParams::real_field(1.0, 0.4, 0.1).is_ok());
    }

    #[test]
    fn time_shift_moves_imaginary_field() {
        let p = ModelParams::real_field(1.0, 0.5, 0.2).unwrap();
        let q = p.with_time_shift(0.7);
        assert_eq!(q.field, Complex64::new(0.2, 1.4));
        let r = p.with_time_shift(0.0);
        assert_eq!(r.field, p.field);
    }
}
