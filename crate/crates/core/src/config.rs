//! Configurations, action sums and structural predicates.
//!
//! Bi-infinite sequences are represented by finite windows with an explicit
//! start index; periodic objects carry their own extension rule.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;

/// A finite window `(x_{start}, …, x_{start+n})` of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub start: i64,
    pub values: Vec<f64>,
}

impl Configuration {
    pub fn new(start: i64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Invalid(format!(
                "configuration needs at least 2 entries, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "entry {} is not finite",
                start + i as i64
            )));
        }
        Ok(Configuration { start, values })
    }

    /// Index of the last stored entry.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of links `(x_i, x_{i+1})` in the window.
    pub fn links(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, i: i64) -> Option<f64> {
        let k = i - self.start;
        (k >= 0)
            .then(|| self.values.get(k as usize).copied())
            .flatten()
    }

    /// Entry at absolute index `i`. Panics outside the window.
    pub fn at(&self, i: i64) -> f64 {
        self.get(i)
            .unwrap_or_else(|| panic!("index {i} outside window [{}, {}]", self.start, self.end()))
    }

    pub fn indexed(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.start + k as i64, v))
    }

    /// Sub-window `[from, to]` (inclusive, absolute indices).
    pub fn slice(&self, from: i64, to: i64) -> Result<Configuration> {
        if from < self.start || to > self.end() || to <= from {
            return Err(Error::Invalid(format!(
                "slice [{from}, {to}] outside window [{}, {}]",
                self.start,
                self.end()
            )));
        }
        let a = (from - self.start) as usize;
        let b = (to - self.start) as usize;
        Configuration::new(from, self.values[a..=b].to_vec())
    }

    /// `x_i ↦ x_i + shift` for every entry.
    pub fn shifted(&self, shift: f64) -> Configuration {
        Configuration {
            start: self.start,
            values: self.values.iter().map(|v| v + shift).collect(),
        }
    }

    /// Sup-norm distance over the common index range.
    pub fn sup_distance(&self, other: &Configuration) -> Option<f64> {
        let lo = self.start.max(other.start);
        let hi = self.end().min(other.end());
        (lo <= hi).then(|| {
            (lo..=hi)
                .map(|i| (self.at(i) - other.at(i)).abs())
                .fold(0.0, f64::max)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Configuration = serde_json::from_str(text)?;
        Configuration::new(c.start, c.values)
    }

    /// CSV with header `i,x`, values at 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["i", "x"])?;
        for (i, x) in self.indexed() {
            out.write_record([i.to_string(), format_real(x)])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(r);
        let headers = reader.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "i" || &headers[1] != "x" {
            return Err(Error::Parse(format!(
                "expected header \"i,x\", got {headers:?}"
            )));
        }
        let mut start = None;
        let mut values = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec?;
            let i: i64 = rec[0]
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("row {row}: bad index: {e}")))?;
            let x: f64 = rec[1]
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("row {row}: bad value: {e}")))?;
            let s = *start.get_or_insert(i);
            if i != s + row as i64 {
                return Err(Error::Parse(format!(
                    "row {row}: indices must be consecutive"
                )));
            }
            values.push(x);
        }
        Configuration::new(start.unwrap_or(0), values)
    }
}

/// Decimal rendering at 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A `(q, p)`-periodic configuration given by one fundamental domain and
/// the rule `x_{i+q} = x_i + p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub q: usize,
    pub p: i64,
    pub fundamental: Vec<f64>,
}

impl PeriodicOrbit {
    pub fn new(q: usize, p: i64, fundamental: Vec<f64>) -> Result<Self> {
        if q == 0 || fundamental.len() != q {
            return Err(Error::Invalid(format!(
                "periodic orbit needs q ≥ 1 and q entries, got q = {q} with {} entries",
                fundamental.len()
            )));
        }
        Ok(PeriodicOrbit { q, p, fundamental })
    }

    pub fn value(&self, i: i64) -> f64 {
        let q = self.q as i64;
        let r = i.rem_euclid(q);
        let wraps = i.div_euclid(q);
        self.fundamental[r as usize] + (wraps * self.p) as f64
    }

    /// The window `(x_{start}, …, x_{start+links})`.
    pub fn extend(&self, start: i64, links: usize) -> Configuration {
        Configuration {
            start,
            values: (0..=links as i64).map(|k| self.value(start + k)).collect(),
        }
    }

    /// Smallest `(q′, p′)` with `x_{i+q′} = x_i + p′` within `tol`.
    pub fn minimal_period(&self, tol: f64) -> PeriodicOrbit {
        let g = gcd(self.q as i64, self.p.abs()).max(1) as usize;
        for d in (1..=g).rev().filter(|d| g.is_multiple_of(*d)) {
            // candidate period q/d with shift p/d
            let qq = self.q / d;
            let pp = self.p / d as i64;
            let ok = (0..self.q as i64)
                .all(|i| (self.value(i + qq as i64) - self.value(i) - pp as f64).abs() <= tol);
            if ok {
                return PeriodicOrbit {
                    q: qq,
                    p: pp,
                    fundamental: self.fundamental[..qq].to_vec(),
                };
            }
        }
        self.clone()
    }

    pub fn rotation_number(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Two adjacent minimizers `u⁰ < u¹` of `h(x, x)` (rotation number zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeighboringPair {
    pub u0: f64,
    pub u1: f64,
}

impl NeighboringPair {
    pub fn new(u0: f64, u1: f64) -> Result<Self> {
        if !(u0 < u1) || !u0.is_finite() || !u1.is_finite() {
            return Err(Error::Invalid(format!(
                "neighboring pair needs u0 < u1, got ({u0}, {u1})"
            )));
        }
        Ok(NeighboringPair { u0, u1 })
    }

    pub fn width(&self) -> f64 {
        self.u1 - self.u0
    }

    pub fn target(&self, upper: bool) -> f64 {
        if upper {
            self.u1
        } else {
            self.u0
        }
    }
}

/// `Σ h(x_i, x_{i+1})` over the window.
pub fn action_sum<G: GeneratingFunction + ?Sized>(h: &G, c: &Configuration) -> f64 {
    c.values.windows(2).map(|w| h.eval(w[0], w[1])).sum()
}

/// `Σ (h(x_i, x_{i+1}) − c₀)` over the window.
pub fn renorm_action<G: GeneratingFunction + ?Sized>(h: &G, c: &Configuration, c0: f64) -> f64 {
    c.values.windows(2).map(|w| h.eval(w[0], w[1]) - c0).sum()
}

/// `∂₂h(x_{i−1}, x_i) + ∂₁h(x_i, x_{i+1})` at every interior index, in order.
pub fn stationary_residuals<G: GeneratingFunction + ?Sized>(h: &G, c: &Configuration) -> Vec<f64> {
    c.values
        .windows(3)
        .map(|w| h.partials(w[0], w[1]).1 + h.partials(w[1], w[2]).0)
        .collect()
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, r| m.max(r.abs()))
}

/// Rotation-number estimate over the window and the spread between the
/// estimates on its two halves.
pub fn rotation_number(c: &Configuration) -> Result<(f64, f64)> {
    if c.len() < 3 {
        return Err(Error::Invalid(
            "rotation number needs at least 3 entries".into(),
        ));
    }
    let n = c.links();
    let x = &c.values;
    let est = (x[n] - x[0]) / n as f64;
    let mid = n / 2;
    let first = (x[mid] - x[0]) / mid as f64;
    let second = (x[n] - x[mid]) / (n - mid) as f64;
    let spread = (first - est).abs().max((second - est).abs());
    Ok((est, spread))
}

/// `max_i min_j |x_i − u^j|`.
pub fn d_metric(c: &Configuration, pair: &NeighboringPair) -> f64 {
    c.values
        .iter()
        .map(|&x| (x - pair.u0).abs().min((x - pair.u1).abs()))
        .fold(0.0, f64::max)
}

/// Entries within this many ulps of a boundary value count as saturated;
/// a zero boundary is only saturated by an exact zero.
const SATURATION_ULPS: f64 = 4.0;

pub(crate) fn saturated(x: f64, u: f64) -> bool {
    (x - u).abs() <= SATURATION_ULPS * f64::EPSILON * u.abs()
}

/// Order and bound diagnostics of a window against `[u⁰, u¹]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    /// Indices with `x_i < u⁰` or `x_i > u¹`.
    pub outside: Vec<i64>,
    /// Indices with `x_i = u⁰` or `x_i = u¹` exactly.
    pub boundary_hits: Vec<i64>,
    /// Indices in runs attached to a window end whose entries agree with
    /// that end's boundary value up to floating-point resolution.
    pub saturated_tail: Vec<i64>,
    /// Indices `i` where `x_{i+1} ≤ x_i` (resp. `≥` for decreasing windows),
    /// outside saturated tails.
    pub monotonicity_breaks: Vec<i64>,
    pub increasing: bool,
}

impl OrderReport {
    pub fn strictly_monotone(&self) -> bool {
        self.monotonicity_breaks.is_empty()
    }

    /// No entry outside the closed box and no boundary contact away from the
    /// saturated tails.
    pub fn strictly_inside(&self) -> bool {
        self.outside.is_empty()
            && self
                .boundary_hits
                .iter()
                .all(|i| self.saturated_tail.contains(i))
    }
}

pub fn check_order_and_bounds(c: &Configuration, pair: &NeighboringPair) -> OrderReport {
    let x = &c.values;
    let n = x.len();
    let mut outside = Vec::new();
    let mut boundary_hits = Vec::new();
    for (i, v) in c.indexed() {
        if v < pair.u0 || v > pair.u1 {
            outside.push(i);
        } else if v == pair.u0 || v == pair.u1 {
            boundary_hits.push(i);
        }
    }

    let mut tail = vec![false; n];
    for (end, dir) in [(0usize, 1isize), (n - 1, -1isize)] {
        for u in [pair.u0, pair.u1] {
            if !saturated(x[end], u) {
                continue;
            }
            let mut k = end as isize;
            while k >= 0 && (k as usize) < n && saturated(x[k as usize], u) {
                tail[k as usize] = true;
                k += dir;
            }
        }
    }
    let saturated_tail: Vec<i64> = (0..n)
        .filter(|&k| tail[k])
        .map(|k| c.start + k as i64)
        .collect();

    let increasing = x[n - 1] >= x[0];
    let monotonicity_breaks = (0..n - 1)
        .filter(|&k| !(tail[k] && tail[k + 1]))
        .filter(|&k| {
            if increasing {
                x[k + 1] <= x[k]
            } else {
                x[k + 1] >= x[k]
            }
        })
        .map(|k| c.start + k as i64)
        .collect();

    OrderReport {
        outside,
        boundary_hits,
        saturated_tail,
        monotonicity_breaks,
        increasing,
    }
}
