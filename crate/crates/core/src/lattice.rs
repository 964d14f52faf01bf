use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular torus geometry: `rows` x `cols` sites, periodic in both
/// directions.
///
/// `spec(N, M)` and `spec(M, N)` describe the same physical system; every
/// partition-function routine here normalizes to the smaller dimension before
/// building a transfer matrix, so swapped specs take the identical code path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub rows: u32,
    pub cols: u32,
}

impl LatticeSpec {
    pub fn new(rows: u32, cols: u32) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::validation(format!(
                "lattice dimensions must be at least 1, got {rows}x{cols}"
            )));
        }
        Ok(LatticeSpec { rows, cols })
    }

    pub fn area(&self) -> u64 {
        self.rows as u64 * self.cols as u64
    }

    /// Aspect ratio x = cols / rows (long / short for strip lattices built as
    /// rows << cols).
    pub fn aspect_ratio(&self) -> f64 {
        self.cols as f64 / self.rows as f64
    }

    pub fn even_area(&self) -> bool {
        self.area() % 2 == 0
    }

    pub fn swapped(&self) -> LatticeSpec {
        LatticeSpec {
            rows: self.cols,
            cols: self.rows,
        }
    }

    /// Width used to build the column transfer matrix (the smaller edge).
    pub fn transfer_rows(&self) -> u32 {
        self.rows.min(self.cols)
    }

    /// Number of transfer-matrix applications (the larger edge).
    pub fn transfer_steps(&self) -> u32 {
        self.rows.max(self.cols)
    }
}

impl std::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_dimensions() {
        assert!(LatticeSpec::new(0, 5).is_err());
        assert!(LatticeSpec::new(5, 0).is_err());
    }

    #[test]
    fn geometry_accessors() {
        let s = LatticeSpec::new(4, 25).unwrap();
        assert_eq!(s.area(), 100);
        assert_eq!(s.aspect_ratio(), 6.25);
        assert!(s.even_area());
        assert_eq!(s.transfer_rows(), 4);
        assert_eq!(s.transfer_steps(), 25);
        assert_eq!(s.swapped(), LatticeSpec::new(25, 4).unwrap());
        assert!(!LatticeSpec::new(3, 3).unwrap().even_area());
    }
}
