//! Frequency grids and sampled spectra.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CSV header shared by every spectrum file.
pub const CSV_HEADER: &str = "omega_k,S,representation,gamma,omega_eg,lamb_shift,cutoff";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    #[default]
    Linear,
    Log,
}

/// `points` samples from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: GridScale,
}

impl GridSpec {
    pub fn linear(min: f64, max: f64, points: usize) -> Self {
        Self {
            min,
            max,
            points,
            scale: GridScale::Linear,
        }
    }

    pub fn log(min: f64, max: f64, points: usize) -> Self {
        Self {
            min,
            max,
            points,
            scale: GridScale::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Config(format!(
                "a grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Config(format!(
                "grid bounds must satisfy min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.scale == GridScale::Log && self.min <= 0.0 {
            return Err(Error::Config(
                "a logarithmic grid needs a positive lower bound".into(),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(match self.scale {
            GridScale::Linear => linspace(self.min, self.max, self.points),
            GridScale::Log => logspace(self.min, self.max, self.points),
        })
    }
}

/// Evenly spaced samples; both ends are hit exactly.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![min],
        _ => {
            let last = (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        max
                    } else {
                        min + (max - min) * (i as f64 / last)
                    }
                })
                .collect()
        }
    }
}

/// Geometrically spaced samples; both ends are hit exactly.
pub fn logspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    let ratio = (max / min).ln();
    let last = points.saturating_sub(1).max(1) as f64;
    (0..points)
        .map(|i| {
            if i == 0 {
                min
            } else if i + 1 == points {
                max
            } else {
                min * (ratio * i as f64 / last).exp()
            }
        })
        .collect()
}

/// Parameter echo carried alongside a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub representation: String,
    pub gamma: f64,
    pub omega_eg: f64,
    pub lamb_shift: f64,
    pub cutoff: f64,
    /// Free-form remark, e.g. the normalization convention.
    pub note: String,
    /// Additional named parameters (Rabi frequency, area, ...).
    pub params: BTreeMap<String, f64>,
}

impl SpectrumMeta {
    pub fn new(
        representation: impl Into<String>,
        gamma: f64,
        omega_eg: f64,
        lamb_shift: f64,
        cutoff: f64,
    ) -> Self {
        Self {
            representation: representation.into(),
            gamma,
            omega_eg,
            lamb_shift,
            cutoff,
            note: String::new(),
            params: BTreeMap::new(),
        }
    }
}

/// A non-negative density sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    grid: Vec<f64>,
    values: Vec<f64>,
    n_factor: Option<Vec<f64>>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, meta: SpectrumMeta) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Config(format!(
                "grid has {} points but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        if grid.is_empty() {
            return Err(Error::Config("a spectrum needs at least one point".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config(
                "spectrum grid must be finite and strictly increasing".into(),
            ));
        }
        if let Some((x, v)) = grid
            .iter()
            .zip(&values)
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::Domain(format!(
                "spectral value {v} at {x} is not finite and non-negative"
            )));
        }
        Ok(Self {
            grid,
            values,
            n_factor: None,
            meta,
        })
    }

    /// Attaches a per-point representation factor, written as an extra CSV column.
    pub fn with_n_factor(mut self, n: Vec<f64>) -> Result<Self> {
        if n.len() != self.grid.len() {
            return Err(Error::Config(
                "n_factor column length differs from the grid".into(),
            ));
        }
        self.n_factor = Some(n);
        Ok(self)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_factor(&self) -> Option<&[f64]> {
        self.n_factor.as_deref()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Trapezoidal `∫ S dω` over the sampled range. Spectra are never normalized.
    pub fn area(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Grid point and value of the largest sample (first one on ties).
    pub fn peak(&self) -> (f64, f64) {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        (self.grid[best], self.values[best])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        if self.n_factor.is_some() {
            out.push_str(",n_factor");
        }
        out.push('\n');
        let m = &self.meta;
        for i in 0..self.grid.len() {
            let _ = write!(
                out,
                "{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.grid[i],
                self.values[i],
                m.representation,
                m.gamma,
                m.omega_eg,
                m.lamb_shift,
                m.cutoff
            );
            if let Some(n) = &self.n_factor {
                let _ = write!(out, ",{:.16e}", n[i]);
            }
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`Spectrum::to_csv`]. The note and extra parameters are not stored in CSV.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_error(1, 1, "empty file"))?;
        let with_n = match header.trim() {
            h if h == CSV_HEADER => false,
            h if h.strip_suffix(",n_factor") == Some(CSV_HEADER) => true,
            _ => return Err(parse_error(1, 1, "unexpected CSV header")),
        };
        let columns = if with_n { 8 } else { 7 };
        let mut grid = Vec::new();
        let mut values = Vec::new();
        let mut n_col = Vec::new();
        let mut meta: Option<SpectrumMeta> = None;
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns {
                return Err(parse_error(
                    idx + 1,
                    1,
                    &format!("expected {columns} fields, found {}", fields.len()),
                ));
            }
            let num = |j: usize| -> Result<f64> {
                let column = fields[..j].iter().map(|f| f.len() + 1).sum::<usize>() + 1;
                fields[j]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| parse_error(idx + 1, column, &e.to_string()))
            };
            grid.push(num(0)?);
            values.push(num(1)?);
            if with_n {
                n_col.push(num(7)?);
            }
            if meta.is_none() {
                meta = Some(SpectrumMeta::new(
                    fields[2].trim(),
                    num(3)?,
                    num(4)?,
                    num(5)?,
                    num(6)?,
                ));
            }
        }
        let meta = meta.ok_or_else(|| parse_error(2, 1, "no data rows"))?;
        let spectrum = Spectrum::new(grid, values, meta)?;
        if with_n {
            spectrum.with_n_factor(n_col)
        } else {
            Ok(spectrum)
        }
    }
}

fn parse_error(line: usize, column: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_both_ends() {
        let g = linspace(0.01, 3.0, 300);
        assert_eq!(g.len(), 300);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[299], 3.0);
        assert!((g[99] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn logspace_is_geometric() {
        let g = logspace(1.0, 1e4, 5);
        for (x, e) in g.iter().zip([1.0, 10.0, 100.0, 1000.0, 1e4]) {
            assert!((x - e).abs() <= 1e-12 * e);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::linear(1.0, 1.0, 10).values().is_err());
        assert!(GridSpec::linear(0.0, 1.0, 1).values().is_err());
        assert!(GridSpec::log(0.0, 1.0, 10).values().is_err());
    }

    #[test]
    fn rejects_negative_values_and_unsorted_grids() {
        let meta = SpectrumMeta::new("coulomb", 0.1, 1.0, 0.0, 1e3);
        assert!(Spectrum::new(vec![1.0, 2.0], vec![1.0, -1.0], meta.clone()).is_err());
        assert!(Spectrum::new(vec![2.0, 1.0], vec![1.0, 1.0], meta.clone()).is_err());
        assert!(Spectrum::new(vec![1.0], vec![1.0, 1.0], meta).is_err());
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let meta = SpectrumMeta::new("alpha:0.3", 0.1, 1.0, 0.0, 1e3);
        let grid = vec![0.1, 0.2 + 1e-17, 1.0 / 3.0];
        let values = vec![std::f64::consts::PI, 1e-300, 0.0];
        let s = Spectrum::new(grid, values, meta)
            .unwrap()
            .with_n_factor(vec![1.0, 2.0, 3.0])
            .unwrap();
        let text = s.to_csv();
        assert!(text
            .starts_with("omega_k,S,representation,gamma,omega_eg,lamb_shift,cutoff,n_factor\n"));
        let back = Spectrum::from_csv(&text).unwrap();
        assert_eq!(back.grid(), s.grid());
        assert_eq!(back.values(), s.values());
        assert_eq!(back.n_factor(), s.n_factor());
        assert_eq!(back.meta, s.meta);
    }

    #[test]
    fn bad_number_reports_position() {
        let text = format!("{CSV_HEADER}\n1.0,abc,coulomb,0.1,1,0,1000\n");
        match Spectrum::from_csv(&text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trapezoid_area_and_peak() {
        let meta = SpectrumMeta::new("coulomb", 0.1, 1.0, 0.0, 1e3);
        let s = Spectrum::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 0.0], meta).unwrap();
        assert_eq!(s.area(), 2.0);
        assert_eq!(s.peak(), (1.0, 2.0));
    }
}
