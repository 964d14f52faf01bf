use std::fmt::Write as _;
use std::path::PathBuf;

use holoising::{
    coherence_series, elongation_curve, fit_central_charge_strip, free_energy_from_series,
    log_partition_transfer, natural_span, reconstruct_ratio_periodic,
    run_oracle, CoherenceSeries, FreeEnergyMethod, FreeEnergyPoint, LatticeSpec, ModelParams,
    OracleTolerances, ReconstructionResult, SeriesSpan,
};

use crate::io::{atomic_write, coherence_csv, fmt17, parse_coherence_csv, parse_lattice_list};
use crate::reports::{FitReport, ReconstructionReport};
use crate::{CliError, SpanArg};

fn emit(out: Option<&PathBuf>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => atomic_write(path, contents)
            .map_err(|e| CliError::io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::io(format!("serializing report: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn resolve_span(span: SpanArg, spec: LatticeSpec) -> SeriesSpan {
    match span {
        SpanArg::Auto => natural_span(spec),
        SpanArg::Quarter => SeriesSpan::Quarter,
        SpanArg::Half => SeriesSpan::Half,
        SpanArg::Full => SeriesSpan::Full,
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_coherence(
    rows: u32,
    cols: u32,
    beta: f64,
    h: f64,
    eta: f64,
    points: usize,
    span: SpanArg,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(CliError::validation(format!(
            "eta must be positive and finite, got {eta}"
        )));
    }
    let spec = LatticeSpec::new(rows, cols)?;
    let span = resolve_span(span, spec);
    let mut series = coherence_series(spec, beta, 1.0, h, points, span)?;
    // the grid is already expressed in u = eta * t; eta is recorded so the
    // header documents the probe's time scale
    series.eta = eta;
    emit(out, &coherence_csv(&series))
}

fn reconstruction_report(
    series: &CoherenceSeries,
    lambda_prime: f64,
) -> Result<ReconstructionReport, CliError> {
    // lambda' = 0 is the critical-point pipeline (coth kernel); other targets
    // go through the general periodic kernel. Either way the free energy at
    // the target field is f = -(ln ratio + ln Z(beta, h)) / area.
    let (rec, f_per_site): (ReconstructionResult, f64) = if lambda_prime == 0.0 {
        let out = free_energy_from_series(series)?;
        (out.reconstruction, out.f_per_site)
    } else {
        let rec = reconstruct_ratio_periodic(series, lambda_prime)?;
        let z_h = log_partition_transfer(
            series.spec,
            &ModelParams::real_field(series.coupling, series.beta, series.field)?,
        )?;
        let f = -(rec.ratio.log_mag + z_h.log_mag) / series.spec.area() as f64;
        (rec, f)
    };
    Ok(ReconstructionReport {
        rows: series.spec.rows,
        cols: series.spec.cols,
        beta: series.beta,
        h: series.field,
        lambda_prime,
        points: rec.quadrature.points,
        period: rec.quadrature.period,
        ratio_log_mag: rec.ratio.log_mag,
        ratio_phase: rec.ratio.phase,
        residual_imag: rec.residual_imag,
        f_per_site,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_reconstruct(
    rows: Option<u32>,
    cols: Option<u32>,
    beta: f64,
    h: f64,
    points: usize,
    span: SpanArg,
    lambda_prime: f64,
    from_csv: Option<&PathBuf>,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let series = match from_csv {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))?;
            parse_coherence_csv(&text)?
        }
        None => {
            let (rows, cols) = match (rows, cols) {
                (Some(r), Some(c)) => (r, c),
                _ => {
                    return Err(CliError::validation(
                        "reconstruct needs --rows and --cols (or --from-csv)".to_string(),
                    ))
                }
            };
            let spec = LatticeSpec::new(rows, cols)?;
            coherence_series(spec, beta, 1.0, h, points, resolve_span(span, spec))?
        }
    };
    let report = reconstruction_report(&series, lambda_prime)?;
    emit(out, &to_json(&report)?)
}

fn pipeline_points(
    lattices: &[LatticeSpec],
    beta: f64,
    h: f64,
    points: usize,
    span: SpanArg,
    direct: bool,
) -> Result<Vec<FreeEnergyPoint>, CliError> {
    lattices
        .iter()
        .map(|&spec| {
            let f = if direct {
                -log_partition_transfer(spec, &ModelParams::real_field(1.0, beta, 0.0)?)?.log_mag
                    / spec.area() as f64
            } else {
                let series = coherence_series(spec, beta, 1.0, h, points, resolve_span(span, spec))?;
                free_energy_from_series(&series)?.f_per_site
            };
            Ok(FreeEnergyPoint {
                spec,
                f_per_site: f,
                method: if direct {
                    FreeEnergyMethod::Direct
                } else {
                    FreeEnergyMethod::Reconstructed
                },
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_fit_c(
    lattices: &str,
    beta: f64,
    h: f64,
    points: usize,
    span: SpanArg,
    direct: bool,
    out: Option<&PathBuf>,
    points_csv: Option<&PathBuf>,
) -> Result<(), CliError> {
    let specs = parse_lattice_list(lattices)?;
    let pts = pipeline_points(&specs, beta, h, points, span, direct)?;
    let fit = fit_central_charge_strip(&pts)?;
    let report = FitReport::new(&fit, &pts);
    if let Some(path) = points_csv {
        let mut csv = String::from("N,M,f,residual\n");
        for p in &report.points {
            let _ = writeln!(csv, "{},{},{},{}", p.rows, p.cols, fmt17(p.f), fmt17(p.residual));
        }
        atomic_write(path, &csv).map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))?;
    }
    emit(out, &to_json(&report)?)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_elongation(
    lattices: &str,
    include_swapped: bool,
    beta: f64,
    h: f64,
    points: usize,
    span: SpanArg,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let mut specs = parse_lattice_list(lattices)?;
    if include_swapped {
        let swapped: Vec<LatticeSpec> = specs
            .iter()
            .filter(|s| s.rows != s.cols)
            .map(|s| s.swapped())
            .collect();
        specs.extend(swapped);
    }
    let pts = pipeline_points(&specs, beta, h, points, span, false)?;
    let rows = elongation_curve(&pts)?;
    let mut csv = String::from("x,ln_x,F_total,f_per_site\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt17(r.x),
            fmt17(r.ln_x),
            fmt17(r.f_total),
            fmt17(r.f_per_site)
        );
    }
    emit(out, &csv)
}

pub fn cmd_oracle(
    area_limit: u64,
    max_log_dev: Option<f64>,
    max_recon_dev: Option<f64>,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let mut tol = OracleTolerances::default();
    if let Some(t) = max_log_dev {
        tol.log_rel = t;
        tol.phase = t;
    }
    if let Some(t) = max_recon_dev {
        tol.reconstruction_rel = t;
    }
    let outcome = run_oracle(area_limit, &tol)?;
    println!(
        "oracle sweep: {} lattices x {} parameter combinations, {} comparisons",
        outcome.lattices, outcome.param_combos, outcome.comparisons
    );
    println!(
        "  max transfer dev:        log {:.3e}, phase {:.3e} (tol {:.1e})",
        outcome.max_transfer_log_rel, outcome.max_transfer_phase, tol.log_rel
    );
    println!(
        "  max dense-powering dev:  log {:.3e}, phase {:.3e}",
        outcome.max_dense_log_rel, outcome.max_dense_phase
    );
    println!(
        "  max spin-flip dev {:.3e}, max row/col-swap dev {:.3e}",
        outcome.max_spin_flip_rel, outcome.max_swap_rel
    );
    println!(
        "  max reconstruction dev:  {:.3e} (tol {:.1e})",
        outcome.max_reconstruction_rel, tol.reconstruction_rel
    );
    if let Some(path) = out {
        let json = to_json(&outcome)?;
        atomic_write(path, &json)
            .map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))?;
    }
    if !outcome.passed() {
        for f in outcome.failures.iter().take(10) {
            eprintln!("tolerance exceeded: {f}");
        }
        if outcome.failures.len() > 10 {
            eprintln!("... and {} more", outcome.failures.len() - 10);
        }
        return Err(CliError::tolerance(format!(
            "{} comparisons exceeded tolerances",
            outcome.failures.len()
        )));
    }
    println!("all deviations within tolerance");
    Ok(())
}
