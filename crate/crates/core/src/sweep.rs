//! Parameter sweeps, finite-difference derivatives and cusp detection.

use std::fmt;

use rayon::prelude::*;

use crate::chain::{correlation_set, MAX_SEPARATION};
use crate::error::{Error, Result};
use crate::measures::{measures_at, Measure, MeasureSet};
use crate::model::{CorrelationSet, ModelParams};
use crate::quadrature::QuadratureSpec;

pub const MAX_SWEEP_STEPS: f64 = 1e6;
/// Second differences at or below this are treated as a smooth series.
pub const FLAT_SERIES_TOL: f64 = 1e-12;
const GRID_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    J,
    Gamma,
    D,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::J => "J",
            Axis::Gamma => "gamma",
            Axis::D => "D",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "J" => Some(Axis::J),
            "gamma" => Some(Axis::Gamma),
            "D" => Some(Axis::D),
            _ => None,
        }
    }

    pub fn apply(self, params: ModelParams, value: f64) -> Result<ModelParams> {
        match self {
            Axis::J => params.with_j(value),
            Axis::Gamma => params.with_gamma(value),
            Axis::D => params.with_d(value),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One-dimensional grid over `axis`; the axis field of `fixed` is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub fixed: ModelParams,
    pub r: usize,
    pub quadrature: QuadratureSpec,
}

impl SweepSpec {
    pub fn new(axis: Axis, start: f64, stop: f64, step: f64, fixed: ModelParams, r: usize) -> Self {
        Self {
            axis,
            start,
            stop,
            step,
            fixed,
            r,
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() || self.start >= self.stop {
            return Err(Error::InvalidSweep(format!(
                "need finite start < stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidSweep(format!("step must be positive, got {}", self.step)));
        }
        if (self.stop - self.start) / self.step > MAX_SWEEP_STEPS {
            return Err(Error::InvalidSweep(format!(
                "grid exceeds {MAX_SWEEP_STEPS} steps"
            )));
        }
        if self.r == 0 {
            return Err(Error::InvalidSeparation { r: 0 });
        }
        if self.r > MAX_SEPARATION {
            return Err(Error::SeparationTooLarge {
                r: self.r,
                max: MAX_SEPARATION,
            });
        }
        self.quadrature.validate()
    }

    /// `floor((stop - start) / step) + 1`, with a small slack so that
    /// decimal steps such as 0.05 land on `stop`.
    pub fn point_count(&self) -> usize {
        ((self.stop - self.start) / self.step + GRID_SLACK).floor() as usize + 1
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.point_count()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Correlators and measures at one grid point, or the reason they failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<RowData>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowData {
    pub params: ModelParams,
    pub corrs: CorrelationSet,
    pub measures: MeasureSet,
}

impl SweepRow {
    pub fn data(&self) -> Option<&RowData> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: Axis,
    pub r: usize,
    pub step: f64,
    pub rows: Vec<SweepRow>,
    /// d(measure)/d(axis) per row, indexed like [`Measure::ALL`]. Flagged
    /// rows are interpolated from their neighbours first. All NaN when the
    /// grid has fewer than three points.
    pub derivatives: [Vec<f64>; 3],
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn axis_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    /// Indices of rows whose evaluation failed.
    pub fn flagged(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.outcome.is_err())
            .map(|(i, _)| i)
            .collect()
    }

    /// Measure column with `None` at flagged rows.
    pub fn column(&self, measure: Measure) -> Vec<Option<f64>> {
        self.rows
            .iter()
            .map(|r| r.data().map(|d| d.measures.get(measure)))
            .collect()
    }

    /// Measure column with flagged rows linearly interpolated.
    pub fn filled_column(&self, measure: Measure) -> Vec<f64> {
        fill_gaps(&self.axis_values(), &self.column(measure))
    }

    pub fn derivative(&self, measure: Measure) -> &[f64] {
        let idx = Measure::ALL.iter().position(|&m| m == measure).expect("measure in ALL");
        &self.derivatives[idx]
    }
}

/// Linear interpolation across missing entries; constant extrapolation at
/// the ends. Needs at least one present value.
fn fill_gaps(xs: &[f64], ys: &[Option<f64>]) -> Vec<f64> {
    let known: Vec<usize> = (0..ys.len()).filter(|&i| ys[i].is_some()).collect();
    (0..ys.len())
        .map(|i| {
            if let Some(y) = ys[i] {
                return y;
            }
            let next = known.partition_point(|&k| k < i);
            match (next.checked_sub(1).map(|p| known[p]), known.get(next).copied()) {
                (Some(lo), Some(hi)) => {
                    let (ylo, yhi) = (ys[lo].unwrap(), ys[hi].unwrap());
                    ylo + (yhi - ylo) * (xs[i] - xs[lo]) / (xs[hi] - xs[lo])
                }
                (Some(lo), None) => ys[lo].unwrap(),
                (None, Some(hi)) => ys[hi].unwrap(),
                (None, None) => f64::NAN,
            }
        })
        .collect()
}

fn evaluate(spec: &SweepSpec, value: f64) -> Result<RowData> {
    let params = spec.axis.apply(spec.fixed, value)?;
    let corrs = correlation_set(&params, spec.r, &spec.quadrature)?;
    let measures = measures_at(&corrs)?;
    Ok(RowData { params, corrs, measures })
}

/// Evaluates every grid point (in parallel, order preserved).
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let rows: Vec<SweepRow> = spec
        .values()
        .into_par_iter()
        .map(|value| SweepRow {
            value,
            outcome: evaluate(spec, value),
        })
        .collect();
    if rows.iter().all(|r| r.outcome.is_err()) {
        let first = rows[0].outcome.clone().unwrap_err();
        return Err(Error::AllRowsFailed(Box::new(first)));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let derivatives = Measure::ALL.map(|m| {
        let ys = fill_gaps(&xs, &rows.iter().map(|r| r.data().map(|d| d.measures.get(m))).collect::<Vec<_>>());
        central_derivative(&xs, &ys).unwrap_or_else(|_| vec![f64::NAN; xs.len()])
    });
    Ok(SweepResult {
        axis: spec.axis,
        r: spec.r,
        step: spec.step,
        rows,
        derivatives,
    })
}

fn uniform_step(xs: &[f64]) -> Result<f64> {
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let tol = GRID_SLACK * h.abs().max(1.0);
    if !(h > 0.0) || xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > tol) {
        return Err(Error::NonUniformGrid);
    }
    Ok(h)
}

/// Central differences inside, second-order one-sided differences at the ends.
pub fn central_derivative(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    let n = xs.len();
    if n < 3 || ys.len() != n {
        return Err(Error::TooFewPoints { got: n.min(ys.len()), need: 3 });
    }
    let h = uniform_step(xs)?;
    let mut out = Vec::with_capacity(n);
    out.push((-3.0 * ys[0] + 4.0 * ys[1] - ys[2]) / (2.0 * h));
    for i in 1..n - 1 {
        out.push((ys[i + 1] - ys[i - 1]) / (2.0 * h));
    }
    out.push((3.0 * ys[n - 1] - 4.0 * ys[n - 2] + ys[n - 3]) / (2.0 * h));
    Ok(out)
}

/// `y[i+1] - 2 y[i] + y[i-1]` at interior points (not divided by h^2).
pub fn second_differences(ys: &[f64]) -> Vec<f64> {
    ys.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionMethod {
    SecondDifferenceExtremum,
}

/// Location of the strongest kink; read as `j_star +- 2 grid_step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPointReport {
    pub measure: Measure,
    pub j_star: f64,
    pub method: DetectionMethod,
    pub grid_step: f64,
    pub max_second_difference: f64,
}

/// Interior abscissa with the largest `|second difference|`; returns
/// `(x, |second difference|)`.
pub fn locate_kink(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 5 || ys.len() != xs.len() {
        return Err(Error::TooFewPoints { got: xs.len().min(ys.len()), need: 5 });
    }
    uniform_step(xs)?;
    let (idx, best) = second_differences(ys)
        .into_iter()
        .map(f64::abs)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    if !(best > FLAT_SERIES_TOL) {
        return Err(Error::FlatSeries { max_second_difference: best.max(0.0) });
    }
    Ok((xs[idx + 1], best))
}

pub fn detect_critical_point(result: &SweepResult, measure: Measure) -> Result<CriticalPointReport> {
    if result.axis != Axis::J {
        return Err(Error::WrongAxis {
            expected: Axis::J.name(),
            got: result.axis.name(),
        });
    }
    let (j_star, max_second_difference) = locate_kink(&result.axis_values(), &result.filled_column(measure))?;
    Ok(CriticalPointReport {
        measure,
        j_star,
        method: DetectionMethod::SecondDifferenceExtremum,
        grid_step: result.step,
        max_second_difference,
    })
}

/// Sweeps D at fixed `(J, gamma, r)`; the derivative columns of the result
/// are the D-derivatives.
pub fn derivative_wrt_d(j: f64, gamma: f64, r: usize, d_start: f64, d_stop: f64, d_step: f64) -> Result<SweepResult> {
    let fixed = ModelParams::new(j, gamma, 0.0)?;
    let spec = SweepSpec::new(Axis::D, d_start, d_stop, d_step, fixed, r);
    if spec.point_count() < 3 {
        return Err(Error::TooFewPoints { got: spec.point_count(), need: 3 });
    }
    run_sweep(&spec)
}
