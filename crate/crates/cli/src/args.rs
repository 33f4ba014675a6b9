//! Parsers for the compact grid, range and profile flag syntaxes.

use std::fmt;
use std::str::FromStr;

use advpos::sim::Profile;

/// Bad flag value; mapped to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// `a:b:n` (linear, inclusive) or `a:b:n:log`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.stop;
                }
                let t = i as f64 / last;
                if self.log {
                    self.start * (self.stop / self.start).powf(t)
                } else {
                    self.start + (self.stop - self.start) * t
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        let parts: Vec<&str> = s.split(':').collect();
        let log = match parts.as_slice() {
            [_, _, _] => false,
            [_, _, _, "log"] => true,
            [_, _, _, "lin"] => false,
            _ => return Err(usage(format!("grid '{s}' is not a:b:n or a:b:n:log"))),
        };
        let num = |p: &str| {
            p.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| usage(format!("bad number '{p}' in grid '{s}'")))
        };
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| usage(format!("bad count '{}' in grid '{s}'", parts[2])))?;
        if count == 0 {
            return Err(usage(format!("grid '{s}' needs a count of at least 1")));
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(usage(format!("log grid '{s}' needs positive end points")));
        }
        Ok(Grid {
            start,
            stop,
            count,
            log,
        })
    }
}

/// `k` or `a:b`, inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KRange {
    pub first: u32,
    pub last: u32,
}

impl KRange {
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.first..=self.last
    }
}

impl FromStr for KRange {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        let bad = || usage(format!("k range '{s}' is not k or a:b with 1 <= a <= b"));
        let (a, b) = match s.split_once(':') {
            Some((a, b)) => (a, b),
            None => (s, s),
        };
        let first: u32 = a.parse().map_err(|_| bad())?;
        let last: u32 = b.parse().map_err(|_| bad())?;
        if first == 0 || last < first {
            return Err(bad());
        }
        Ok(KRange { first, last })
    }
}

/// `sine`, `step`, `gauss`, `basis:<i>` or `samples:<v1>,<v2>,...`.
pub fn parse_profile(s: &str, m: usize) -> Result<Profile, UsageError> {
    match s {
        "sine" => return Ok(Profile::SineBump),
        "step" => return Ok(Profile::IndicatorStep),
        "gauss" => return Ok(Profile::GaussianBump),
        _ => {}
    }
    if let Some(i) = s.strip_prefix("basis:") {
        let i: usize = i
            .parse()
            .map_err(|_| usage(format!("bad basis index '{i}'")))?;
        return Profile::basis(m, i).map_err(|e| usage(e.to_string()));
    }
    if let Some(v) = s.strip_prefix("samples:") {
        let values = v
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| usage(format!("bad sample list '{v}'")))?;
        return Ok(Profile::Samples(values));
    }
    Err(usage(format!(
        "unknown profile '{s}' (sine, step, gauss, basis:<i>, samples:<list>)"
    )))
}
