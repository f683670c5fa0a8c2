//! Sampling grids and verification reports shared by every property suite.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One grid axis: `count` evenly spaced samples of `[lo, hi]`, or the
/// single value `lo = hi` when `count` is 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Axis> {
        if count == 1 && lo == hi && lo.is_finite() {
            return Ok(Axis { lo, hi, count });
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("axis needs at least 2 points, got {count}")));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidGrid(format!("axis bounds must satisfy lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Axis { lo, hi, count })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * (i as f64) / n
                }
            })
            .collect()
    }

    pub fn spacing(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.hi - self.lo) / (self.count - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Jitter {
    seed: u64,
    fraction: f64,
}

/// Cartesian sampling grid with optional seeded jitter of interior nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    axes: Vec<Axis>,
    jitter: Option<Jitter>,
}

impl SamplingGrid {
    pub fn new(axes: Vec<Axis>) -> Result<SamplingGrid> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("grid needs at least one axis".into()));
        }
        for a in &axes {
            Axis::new(a.lo, a.hi, a.count)?;
        }
        Ok(SamplingGrid { axes, jitter: None })
    }

    /// Builds a grid from `(lo, hi, count)` triples.
    pub fn from_ranges(ranges: &[(f64, f64, usize)]) -> Result<SamplingGrid> {
        let axes = ranges
            .iter()
            .map(|&(lo, hi, n)| Axis::new(lo, hi, n))
            .collect::<Result<_>>()?;
        SamplingGrid::new(axes)
    }

    pub fn linspace(lo: f64, hi: f64, count: usize) -> Result<SamplingGrid> {
        SamplingGrid::new(vec![Axis::new(lo, hi, count)?])
    }

    /// Perturbs interior nodes by up to `fraction` of the axis spacing.
    pub fn with_jitter(mut self, seed: u64, fraction: f64) -> Result<SamplingGrid> {
        if !(0.0..0.5).contains(&fraction) {
            return Err(Error::InvalidGrid("jitter fraction must lie in [0, 0.5)".into()));
        }
        self.jitter = Some(Jitter { seed, fraction });
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All grid points, last axis varying fastest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let values: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let mut rng = self.jitter.map(|j| ChaCha8Rng::seed_from_u64(j.seed));
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0usize; self.axes.len()];
        loop {
            let mut p: Vec<f64> = idx.iter().enumerate().map(|(k, &i)| values[k][i]).collect();
            if let (Some(rng), Some(j)) = (rng.as_mut(), self.jitter) {
                for (k, a) in self.axes.iter().enumerate() {
                    let shift: f64 = rng.random_range(-1.0..1.0);
                    if idx[k] > 0 && idx[k] + 1 < a.count {
                        p[k] += shift * j.fraction * a.spacing();
                    }
                }
            }
            out.push(p);
            let mut k = self.axes.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < self.axes[k].count {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Unjittered grid lines parallel to `axis`, one per node of the other axes.
    pub fn lines(&self, axis: usize) -> Vec<Vec<Vec<f64>>> {
        let others: Vec<usize> = (0..self.dim()).filter(|&k| k != axis).collect();
        let base = if others.is_empty() {
            vec![vec![]]
        } else {
            let sub = SamplingGrid {
                axes: others.iter().map(|&k| self.axes[k]).collect(),
                jitter: None,
            };
            sub.points()
        };
        let along = self.axes[axis].values();
        base.into_iter()
            .map(|fixed| {
                along
                    .iter()
                    .map(|&v| {
                        let mut p = Vec::with_capacity(self.dim());
                        let mut it = fixed.iter();
                        for k in 0..self.dim() {
                            p.push(if k == axis { v } else { *it.next().unwrap() });
                        }
                        p
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for SamplingGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "[{}, {}]#{}", a.lo, a.hi, a.count)?;
        }
        if let Some(j) = self.jitter {
            write!(f, " (jitter {} seed {})", j.fraction, j.seed)?;
        }
        Ok(())
    }
}

/// An input point with the values observed there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub values: Vec<f64>,
    pub note: String,
}

impl Witness {
    pub fn new(point: Vec<f64>, values: Vec<f64>, note: impl Into<String>) -> Witness {
        Witness {
            point,
            values,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub description: String,
    pub evaluated: usize,
    pub skipped: usize,
}

/// Outcome of a property suite.
///
/// `passed` is always `max_deviation <= tolerance`. `inconclusive` marks runs
/// whose sample was too thin to support a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub passed: bool,
    pub inconclusive: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub grid: GridSummary,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(
        suite: impl Into<String>,
        max_deviation: f64,
        tolerance: f64,
        grid: GridSummary,
    ) -> VerificationReport {
        VerificationReport {
            suite: suite.into(),
            passed: max_deviation <= tolerance,
            inconclusive: false,
            max_deviation,
            tolerance,
            grid,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Conclusive pass.
    pub fn succeeded(&self) -> bool {
        self.passed && !self.inconclusive
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Running maximum of deviations that remembers the worst sample.
///
/// Building block of every suite: record each sampled deviation, count
/// points outside the domain as skipped, then [`Tracker::finish`].
#[derive(Debug, Clone, Default)]
pub struct Tracker {
    pub max: f64,
    pub worst: Option<Witness>,
    pub evaluated: usize,
    pub skipped: usize,
}

impl Tracker {
    pub fn new() -> Tracker {
        Tracker {
            max: 0.0,
            worst: None,
            evaluated: 0,
            skipped: 0,
        }
    }

    pub fn record(&mut self, dev: f64, point: &[f64], values: &[f64]) {
        self.evaluated += 1;
        // NaN deviations count as failures.
        let dev = if dev.is_nan() { f64::INFINITY } else { dev };
        if dev > self.max || self.worst.is_none() {
            self.max = self.max.max(dev);
            self.worst = Some(Witness::new(point.to_vec(), values.to_vec(), format!("deviation {dev:e}")));
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn skipped_fraction(&self) -> f64 {
        let total = self.evaluated + self.skipped;
        if total == 0 {
            1.0
        } else {
            self.skipped as f64 / total as f64
        }
    }

    /// Builds the report; the worst sample becomes a witness on failure.
    pub fn finish(self, suite: &str, tol: f64, description: String) -> VerificationReport {
        let mut report = VerificationReport::new(
            suite,
            self.max,
            tol,
            GridSummary {
                description,
                evaluated: self.evaluated,
                skipped: self.skipped,
            },
        );
        if self.evaluated == 0 {
            report.inconclusive = true;
            report.notes.push("no admissible sample points".into());
        } else if self.skipped_fraction() > 0.5 {
            report.inconclusive = true;
            report.notes.push(format!(
                "{} of {} sample points skipped",
                self.skipped,
                self.skipped + self.evaluated
            ));
        }
        if !report.passed {
            report.witnesses.extend(self.worst);
        }
        report
    }
}
