use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid description recorded alongside every reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Measured sample count (closed grid, = 1 mod 3).
    pub points: usize,
    /// Span in u covered by the measured samples.
    pub period: f64,
}

/// Composite Simpson 3/8 on a closed uniform grid: panels of three intervals
/// weighted (3h/8)(f0 + 3 f1 + 3 f2 + f3). Exact for cubics.
pub fn simpson38(values: &[Complex64], spacing: f64) -> Result<Complex64> {
    let n = values.len();
    if n < 4 || (n - 1) % 3 != 0 {
        return Err(Error::validation(format!(
            "Simpson-3/8 needs 3k+1 >= 4 nodes, got {n}"
        )));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::validation(format!("bad grid spacing {spacing}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, v) in values.iter().enumerate() {
        let w = if j == 0 || j == n - 1 {
            1.0
        } else if j % 3 == 0 {
            2.0
        } else {
            3.0
        };
        acc += v * w;
    }
    Ok(acc * (3.0 * spacing / 8.0))
}
