//! JSON report schemas emitted by the subcommands.

use serde::Serialize;

use holoising::{CentralChargeFit, FreeEnergyPoint};

#[derive(Debug, Serialize)]
pub struct ReconstructionReport {
    #[serde(rename = "N")]
    pub rows: u32,
    #[serde(rename = "M")]
    pub cols: u32,
    pub beta: f64,
    pub h: f64,
    pub lambda_prime: f64,
    pub points: usize,
    pub period: f64,
    pub ratio_log_mag: f64,
    pub ratio_phase: f64,
    pub residual_imag: f64,
    pub f_per_site: f64,
}

#[derive(Debug, Serialize)]
pub struct FitPointReport {
    #[serde(rename = "N")]
    pub rows: u32,
    #[serde(rename = "M")]
    pub cols: u32,
    pub f: f64,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub c: f64,
    pub c_stderr: f64,
    pub points: Vec<FitPointReport>,
}

impl FitReport {
    pub fn new(fit: &CentralChargeFit, points: &[FreeEnergyPoint]) -> Self {
        FitReport {
            slope: fit.slope,
            slope_stderr: fit.slope_stderr,
            intercept: fit.intercept,
            c: fit.c,
            c_stderr: fit.c_stderr,
            points: points
                .iter()
                .zip(fit.residuals.iter())
                .map(|(p, &residual)| FitPointReport {
                    rows: p.spec.rows,
                    cols: p.spec.cols,
                    f: p.f_per_site,
                    residual,
                })
                .collect(),
        }
    }
}
