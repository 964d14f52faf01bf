//! Central-charge extraction by finite-size scaling of critical free
//! energies.
//!
//! For a periodic strip of width N (length M >> N) the per-site free energy
//! carries the universal correction f = A - pi c / (6 N^2), so an ordinary
//! least-squares fit of f against 1/N^2 estimates c from the slope. At fixed
//! area the total free energy follows F = A S - (pi c / 6)(x + 1/x) + o(x^2)
//! in the aspect ratio x, giving the elongation analysis and a second,
//! cruder, c estimate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

/// How a free-energy value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeEnergyMethod {
    /// Exact evaluation at h = 0.
    Direct,
    /// Reconstructed from coherence data.
    Reconstructed,
}

/// One lattice's dimensionless per-site free energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeEnergyPoint {
    pub spec: LatticeSpec,
    /// f = -ln Z / (N M), in units of k_B T per site.
    pub f_per_site: f64,
    pub method: FreeEnergyMethod,
}

impl FreeEnergyPoint {
    pub fn f_total(&self) -> f64 {
        self.f_per_site * self.spec.area() as f64
    }
}

/// Linear-regression output with the central-charge mapping applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralChargeFit {
    pub slope: f64,
    pub intercept: f64,
    pub c: f64,
    pub slope_stderr: f64,
    pub c_stderr: f64,
    pub residuals: Vec<f64>,
}

struct Ols {
    slope: f64,
    intercept: f64,
    slope_stderr: f64,
    residuals: Vec<f64>,
}

/// Unweighted OLS with the standard homoscedastic variance estimate
/// s^2 = SSR/(n-2), slope variance s^2 / Sxx.
fn ols(xs: &[f64], ys: &[f64]) -> Result<Ols> {
    let n = xs.len();
    if n < 3 {
        return Err(Error::validation(format!(
            "a meaningful fit needs at least 3 points, got {n}"
        )));
    }
    let xbar = xs.iter().sum::<f64>() / n as f64;
    let ybar = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    if sxx <= 0.0 || !sxx.is_finite() {
        return Err(Error::validation(
            "rank deficiency: regressor takes a single value".to_string(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let s2 = ssr / (n - 2) as f64;
    let slope_stderr = (s2 / sxx).sqrt();
    Ok(Ols {
        slope,
        intercept,
        slope_stderr,
        residuals,
    })
}

/// Strip-geometry fit: f against 1/N^2 over lattices sharing the long edge;
/// c = -6 slope / pi.
pub fn fit_central_charge_strip(points: &[FreeEnergyPoint]) -> Result<CentralChargeFit> {
    if points.len() < 3 {
        return Err(Error::validation(format!(
            "strip fit needs at least 3 lattices, got {}",
            points.len()
        )));
    }
    let cols = points[0].spec.cols;
    if points.iter().any(|p| p.spec.cols != cols) {
        return Err(Error::validation(
            "strip fit requires a common long edge (cols) across all points".to_string(),
        ));
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|p| 1.0 / (p.spec.rows as f64 * p.spec.rows as f64))
        .collect();
    let ys: Vec<f64> = points.iter().map(|p| p.f_per_site).collect();
    let fit = ols(&xs, &ys)?;
    Ok(CentralChargeFit {
        slope: fit.slope,
        intercept: fit.intercept,
        c: -6.0 * fit.slope / std::f64::consts::PI,
        slope_stderr: fit.slope_stderr,
        c_stderr: 6.0 * fit.slope_stderr / std::f64::consts::PI,
        residuals: fit.residuals,
    })
}

/// One row of the fixed-area elongation table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElongationRow {
    pub spec: LatticeSpec,
    /// Aspect ratio x = cols / rows.
    pub x: f64,
    pub ln_x: f64,
    pub f_total: f64,
    pub f_per_site: f64,
}

fn check_fixed_area(points: &[FreeEnergyPoint]) -> Result<u64> {
    let area = points
        .first()
        .ok_or_else(|| Error::validation("no points supplied".to_string()))?
        .spec
        .area();
    if points.iter().any(|p| p.spec.area() != area) {
        return Err(Error::validation(
            "elongation analysis requires a fixed area across all points".to_string(),
        ));
    }
    Ok(area)
}

/// Fixed-area elongation table, sorted by ln x; supply swapped specs to get
/// both the x and 1/x entries.
pub fn elongation_curve(points: &[FreeEnergyPoint]) -> Result<Vec<ElongationRow>> {
    check_fixed_area(points)?;
    let mut rows: Vec<ElongationRow> = points
        .iter()
        .map(|p| {
            let x = p.spec.aspect_ratio();
            ElongationRow {
                spec: p.spec,
                x,
                ln_x: x.ln(),
                f_total: p.f_total(),
                f_per_site: p.f_per_site,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.ln_x
            .partial_cmp(&b.ln_x)
            .unwrap()
            .then(a.spec.rows.cmp(&b.spec.rows))
    });
    Ok(rows)
}

/// Fixed-area fit of F_total against -(pi/6)(x + 1/x); the slope estimates c
/// directly. The torus correction carries o(x^2) terms, so this is less
/// accurate than the strip fit.
pub fn fit_central_charge_aspect(points: &[FreeEnergyPoint]) -> Result<CentralChargeFit> {
    check_fixed_area(points)?;
    let mut aspects: Vec<f64> = points.iter().map(|p| p.spec.aspect_ratio()).collect();
    aspects.sort_by(|a, b| a.partial_cmp(b).unwrap());
    aspects.dedup();
    if aspects.len() < 3 {
        return Err(Error::validation(format!(
            "aspect fit needs at least 3 distinct aspect ratios, got {}",
            aspects.len()
        )));
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|p| {
            let x = p.spec.aspect_ratio();
            -(std::f64::consts::PI / 6.0) * (x + 1.0 / x)
        })
        .collect();
    let ys: Vec<f64> = points.iter().map(|p| p.f_total()).collect();
    let fit = ols(&xs, &ys)?;
    Ok(CentralChargeFit {
        slope: fit.slope,
        intercept: fit.intercept,
        c: fit.slope,
        slope_stderr: fit.slope_stderr,
        c_stderr: fit.slope_stderr,
        residuals: fit.residuals,
    })
}
