//! File emission and parsing: 17-significant-digit CSV (round-trip safe for
//! f64), atomic writes (temp file in the target directory, renamed on
//! success, so failures leave no partial output).

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use holoising::{CoherenceSeries, Error, LatticeSpec, Result, SeriesSpan};

/// 17 significant digits; parses back to the identical f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn atomic_write(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    std::io::Write::write_all(&mut tmp, contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Emit a series in the documented CSV layout:
///
/// ```text
/// # coherence N=<N> M=<M> beta=<beta> h=<h> eta=1 period=<U> points=<P>
/// u,re,im
/// <u>,<re>,<im>
/// ```
pub fn coherence_csv(series: &CoherenceSeries) -> String {
    let mut out = String::new();
    let eta = if series.eta == 1.0 {
        "1".to_string()
    } else {
        fmt17(series.eta)
    };
    let _ = writeln!(
        out,
        "# coherence N={} M={} beta={} h={} eta={} period={} points={}",
        series.spec.rows,
        series.spec.cols,
        fmt17(series.beta),
        fmt17(series.field),
        eta,
        fmt17(series.span.radians()),
        series.points()
    );
    out.push_str("u,re,im\n");
    for (k, v) in series.values.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", fmt17(series.u_at(k)), fmt17(v.re), fmt17(v.im));
    }
    out
}

fn header_field(fields: &[(&str, &str)], key: &str) -> Result<f64> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| Error::validation(format!("coherence CSV header missing {key}=")))?
        .1
        .parse::<f64>()
        .map_err(|e| Error::validation(format!("bad {key} in coherence CSV header: {e}")))
}

/// Parse a file produced by [`coherence_csv`].
pub fn parse_coherence_csv(text: &str) -> Result<CoherenceSeries> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::validation("empty coherence CSV".to_string()))?;
    let rest = header
        .strip_prefix("# coherence ")
        .ok_or_else(|| Error::validation("coherence CSV must start with '# coherence '".to_string()))?;
    let fields: Vec<(&str, &str)> = rest
        .split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .collect();
    let rows = header_field(&fields, "N")? as u32;
    let cols = header_field(&fields, "M")? as u32;
    let beta = header_field(&fields, "beta")?;
    let h = header_field(&fields, "h")?;
    let eta = header_field(&fields, "eta")?;
    let period = header_field(&fields, "period")?;
    let points = header_field(&fields, "points")? as usize;
    let span = SeriesSpan::from_radians(period)?;
    let spec = LatticeSpec::new(rows, cols)?;

    let columns = lines
        .next()
        .ok_or_else(|| Error::validation("coherence CSV missing column header".to_string()))?;
    if columns.trim() != "u,re,im" {
        return Err(Error::validation(format!(
            "unexpected coherence CSV columns {columns:?}"
        )));
    }
    let mut values = Vec::with_capacity(points);
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = |what: &str| -> Result<f64> {
            parts
                .next()
                .ok_or_else(|| Error::validation(format!("row {i}: missing {what}")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::validation(format!("row {i}: bad {what}: {e}")))
        };
        let _u = next("u")?;
        let re = next("re")?;
        let im = next("im")?;
        values.push(Complex64::new(re, im));
    }
    if values.len() != points {
        return Err(Error::validation(format!(
            "coherence CSV declares {points} points but holds {}",
            values.len()
        )));
    }
    CoherenceSeries::from_parts(spec, beta, 1.0, h, eta, span, values)
}

/// Parse a lattice list like "6x50,7x50,8x50".
pub fn parse_lattice_list(text: &str) -> Result<Vec<LatticeSpec>> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        let (r, c) = item
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::validation(format!("bad lattice {item:?}; expected NxM")))?;
        let rows: u32 = r
            .trim()
            .parse()
            .map_err(|e| Error::validation(format!("bad rows in {item:?}: {e}")))?;
        let cols: u32 = c
            .trim()
            .parse()
            .map_err(|e| Error::validation(format!("bad cols in {item:?}: {e}")))?;
        out.push(LatticeSpec::new(rows, cols)?);
    }
    if out.is_empty() {
        return Err(Error::validation("empty lattice list".to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use holoising::coherence_series;

    #[test]
    fn csv_round_trips_bit_exactly() {
        let spec = LatticeSpec::new(2, 3).unwrap();
        let s = coherence_series(spec, 0.44068, 1.0, 0.1, 7, SeriesSpan::Quarter).unwrap();
        let text = coherence_csv(&s);
        let back = parse_coherence_csv(&text).unwrap();
        assert_eq!(back.spec, s.spec);
        assert_eq!(back.beta, s.beta);
        assert_eq!(back.field, s.field);
        assert_eq!(back.span, s.span);
        assert_eq!(back.values, s.values);
    }

    #[test]
    fn fmt17_round_trips() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, 2.2e-308, -0.0, 1e17] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn lattice_list_parsing() {
        let l = parse_lattice_list("6x50, 7x50,10X10").unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l[2], LatticeSpec::new(10, 10).unwrap());
        assert!(parse_lattice_list("6by50").is_err());
        assert!(parse_lattice_list("0x50").is_err());
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(parse_coherence_csv("").is_err());
        assert!(parse_coherence_csv("# wrong\nu,re,im\n").is_err());
        let spec = LatticeSpec::new(2, 3).unwrap();
        let s = coherence_series(spec, 0.44, 1.0, 0.1, 7, SeriesSpan::Half).unwrap();
        let text = coherence_csv(&s);
        let truncated: String = text.lines().take(4).collect::<Vec<_>>().join("\n");
        assert!(parse_coherence_csv(&truncated).is_err());
    }
}
