//! CSV readers and writers for region scans, boundary curves and trajectories.
//!
//! Floats are written with 17 significant digits so that reading a file back
//! reproduces every value bit for bit.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::region::{BoundaryCurve, BoundarySample, NuBound, RegionSample};

pub const REGION_HEADER: [&str; 6] = ["scheme", "m", "theta", "nu", "min_entry", "nonneg"];
pub const BOUNDARY_HEADER: [&str; 4] = ["k", "theta", "nu_R", "nu_L"];
pub const TRAJECTORY_HEADER: [&str; 3] = ["step", "x_index", "value"];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad float '{s}'")))
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

fn check_header(rdr: &mut csv::Reader<impl Read>, want: &[&str]) -> Result<()> {
    let got = rdr.headers()?;
    if got.iter().ne(want.iter().copied()) {
        return Err(Error::Parse(format!(
            "expected header {}, got {}",
            want.join(","),
            got.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn field(rec: &csv::StringRecord, i: usize) -> Result<&str> {
    rec.get(i)
        .ok_or_else(|| Error::Parse(format!("missing column {}", i + 1)))
}

pub fn write_region_csv<W: Write>(out: W, samples: &[RegionSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REGION_HEADER)?;
    for s in samples {
        w.write_record([
            s.kind.name().to_string(),
            s.m.to_string(),
            fmt_f64(s.theta),
            fmt_f64(s.nu),
            fmt_f64(s.min_entry),
            s.nonneg.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_region_csv<R: Read>(input: R) -> Result<Vec<RegionSample>> {
    let mut rdr = csv::Reader::from_reader(input);
    check_header(&mut rdr, &REGION_HEADER)?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(RegionSample {
                kind: field(&rec, 0)?.parse()?,
                m: parse_int(field(&rec, 1)?)?,
                theta: parse_f64(field(&rec, 2)?)?,
                nu: parse_f64(field(&rec, 3)?)?,
                min_entry: parse_f64(field(&rec, 4)?)?,
                nonneg: match field(&rec, 5)? {
                    "true" => true,
                    "false" => false,
                    other => return Err(Error::Parse(format!("bad flag '{other}'"))),
                },
            })
        })
        .collect()
}

/// One row per sample of each curve, in the given order.
pub fn write_boundary_csv<W: Write>(out: W, curves: &[BoundaryCurve]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUNDARY_HEADER)?;
    for c in curves {
        for s in &c.samples {
            w.write_record([
                c.k.to_string(),
                fmt_f64(s.theta),
                fmt_f64(s.nu_r),
                s.nu_l.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Rows as `(k, sample)` pairs.
pub fn read_boundary_csv<R: Read>(input: R) -> Result<Vec<(u32, BoundarySample)>> {
    let mut rdr = csv::Reader::from_reader(input);
    check_header(&mut rdr, &BOUNDARY_HEADER)?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok((
                parse_int(field(&rec, 0)?)?,
                BoundarySample {
                    theta: parse_f64(field(&rec, 1)?)?,
                    nu_r: parse_f64(field(&rec, 2)?)?,
                    nu_l: field(&rec, 3)?.parse::<NuBound>()?,
                },
            ))
        })
        .collect()
}

/// `trajectory[n][j]` becomes row `n, j, value` with 0-based `j`.
pub fn write_trajectory_csv<W: Write>(out: W, trajectory: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for (n, u) in trajectory.iter().enumerate() {
        for (j, v) in u.iter().enumerate() {
            w.write_record([n.to_string(), j.to_string(), fmt_f64(*v)])?;
        }
    }
    w.flush()?;
    Ok(())
}
