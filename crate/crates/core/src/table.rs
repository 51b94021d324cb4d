//! Parameter sweeps over `p` and their CSV form.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configuration::{CriticalConfiguration, Tolerances};
use crate::domain::{Branch, DomainClass};
use crate::error::{Error, Result};
use crate::hexagon::{circumscribed_for, inscribed_for};
use crate::moduli::oracle_min;
use crate::packing::packing_report;

pub const SWEEP_HEADER: [&str; 9] = [
    "p",
    "class",
    "branch",
    "delta",
    "density",
    "ihma",
    "shma",
    "oracle_delta",
    "oracle_gap",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub class: DomainClass,
    pub branch: Branch,
    pub delta: f64,
    pub density: f64,
    /// Inscribed hexagon area (shoelace).
    pub ihma: f64,
    /// Circumscribed hexagon area from the tangent construction; `4Δ` at `p = 1`.
    pub shma: f64,
    pub oracle_delta: Option<f64>,
    pub oracle_gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    pub m: u32,
    /// Grid size for the moduli oracle columns; `None` leaves them empty.
    pub oracle_grid: Option<usize>,
    pub tolerances: Tolerances,
}

impl SweepOptions {
    pub fn new(p_min: f64, p_max: f64, steps: usize) -> Self {
        SweepOptions {
            p_min,
            p_max,
            steps,
            m: 0,
            oracle_grid: None,
            tolerances: Tolerances::default(),
        }
    }

    /// The `i`-th grid exponent.
    pub fn p_at(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.p_max
        } else {
            self.p_min + (self.p_max - self.p_min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

pub fn sweep_row(p: f64, m: u32, oracle_grid: Option<usize>, tol: &Tolerances) -> Result<SweepRow> {
    let config = CriticalConfiguration::with_tolerances(p, m, tol)?;
    let report = packing_report(&config, tol)?;
    let ihma = inscribed_for(&config.lattice).area;
    let shma = if p > 1.0 {
        circumscribed_for(p, &config.lattice)?.area
    } else {
        4.0 * config.critical_determinant
    };
    let (oracle_delta, oracle_gap) = match oracle_grid {
        Some(grid) => {
            let scale = 4f64.powi(m as i32);
            let o = oracle_min(p, grid)?;
            let od = scale * o.delta_star;
            (Some(od), Some(od - config.critical_determinant))
        }
        None => (None, None),
    };
    Ok(SweepRow {
        p,
        class: config.class,
        branch: config.branch,
        delta: config.critical_determinant,
        density: report.density,
        ihma,
        shma,
        oracle_delta,
        oracle_gap,
    })
}

/// One row per grid exponent, computed in parallel and returned in grid order.
pub fn sweep(opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    if !(opts.p_min >= 1.0 && opts.p_min < opts.p_max && opts.p_max.is_finite()) {
        return Err(Error::domain(format!(
            "need 1 ≤ p_min < p_max (got {} and {})",
            opts.p_min, opts.p_max
        )));
    }
    if opts.steps < 2 {
        return Err(Error::domain("a sweep needs at least 2 steps"));
    }
    (0..opts.steps)
        .into_par_iter()
        .map(|i| sweep_row(opts.p_at(i), opts.m, opts.oracle_grid, &opts.tolerances))
        .collect()
}

/// Format with 17 significant digits, always with a dot decimal separator.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..15).contains(&exponent) {
        let decimals = (16 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_sig17).unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            format_sig17(r.p),
            r.class.name().to_string(),
            r.branch.name().to_string(),
            format_sig17(r.delta),
            format_sig17(r.density),
            format_sig17(r.ihma),
            format_sig17(r.shma),
            cell(r.oracle_delta),
            cell(r.oracle_gap),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| Error::domain(format!("bad sweep CSV header: {e}")))?;
    if header.iter().ne(SWEEP_HEADER) {
        return Err(Error::domain(format!("unexpected sweep CSV header: {header:?}")));
    }
    reader
        .deserialize()
        .map(|row| row.map_err(|e| Error::domain(format!("bad sweep CSV row: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips() {
        for &x in &[1.0, 0.9068996821171089, 1e-17, -3.2e-9, 123456.789, 2.0f64.sqrt() * 1e20] {
            let s = format_sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(format_sig17(1.0), "1.0000000000000000");
    }

    #[test]
    fn csv_round_trip() {
        let mut opts = SweepOptions::new(1.0, 3.0, 5);
        opts.oracle_grid = Some(100);
        let rows = sweep(&opts).unwrap();
        let text = sweep_csv_string(&rows);
        assert!(text.starts_with("p,class,branch,delta,density,ihma,shma,oracle_delta,oracle_gap\n"));
        assert_eq!(read_sweep_csv(text.as_bytes()).unwrap(), rows);

        let rows = sweep(&SweepOptions::new(1.0, 3.0, 3)).unwrap();
        let text = sweep_csv_string(&rows);
        assert!(text.lines().nth(1).unwrap().ends_with(",,"));
        assert_eq!(read_sweep_csv(text.as_bytes()).unwrap(), rows);
    }

    #[test]
    fn sweep_validates_range() {
        assert!(sweep(&SweepOptions::new(0.5, 3.0, 5)).is_err());
        assert!(sweep(&SweepOptions::new(2.0, 2.0, 5)).is_err());
        assert!(sweep(&SweepOptions::new(1.0, 3.0, 1)).is_err());
    }

    #[test]
    fn sweep_reader_rejects_wrong_header() {
        assert!(read_sweep_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
