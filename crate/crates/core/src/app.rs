//! Execution of parsed run configurations: CSV emission, the oracle
//! conformance report and figure data.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::chain::correlation_set;
use crate::config::{RunConfig, Task};
use crate::measures::{measures_at, Measure};
use crate::model::ModelParams;
use crate::quadrature::QuadratureSpec;
use crate::sweep::{run_sweep, Axis, SweepResult, SweepSpec};
use crate::verify::{run_checks, CheckStatus};

pub const CSV_HEADER: &str = "axis,J,gamma,D,r,mz,xx,yy,zz,qfi,c_l1,c_rec,d_qfi,d_c_l1,d_c_rec";
pub const THREADS_ENV: &str = "SPINCHAIN_THREADS";
pub const DEFAULT_FIGURE_DIR: &str = "figures";

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Compute(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{THREADS_ENV}: {0}")]
    Threads(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> AppError + '_ {
    move |source| AppError::Io { path: path.to_path_buf(), source }
}

/// What a run produced; `failures` counts flagged rows or failed checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub failures: usize,
    pub messages: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn success(&self) -> bool {
        self.failures == 0
    }
}

/// Fixed-point rendering with `-0` folded to `0` and NaN as `nan`.
pub fn format_value(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Writes a sweep as CSV rows (no header). Flagged rows carry `nan` in every
/// computed column.
pub fn write_sweep_rows(out: &mut impl Write, result: &SweepResult, fixed: ModelParams, precision: usize) -> io::Result<()> {
    let f = |x: f64| format_value(x, precision);
    for (i, row) in result.rows.iter().enumerate() {
        // Flagged rows may hold invalid couplings, so no validation here.
        let params = match result.axis {
            Axis::J => ModelParams { j: row.value, ..fixed },
            Axis::Gamma => ModelParams { gamma: row.value, ..fixed },
            Axis::D => ModelParams { d: row.value, ..fixed },
        };
        let (corr, meas) = match row.data() {
            Some(d) => (
                d.corrs.fields(),
                [d.measures.qfi, d.measures.c_l1, d.measures.c_rec],
            ),
            None => ([f64::NAN; 4], [f64::NAN; 3]),
        };
        let mut fields = vec![
            result.axis.name().to_string(),
            f(params.j),
            f(params.gamma),
            f(params.d),
            result.r.to_string(),
        ];
        fields.extend(corr.iter().chain(&meas).map(|&x| f(x)));
        fields.extend(result.derivatives.iter().map(|d| f(d[i])));
        out.write_all(fields.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn flag_messages(result: &SweepResult, label: &str) -> Vec<String> {
    result
        .rows
        .iter()
        .filter_map(|row| {
            row.outcome
                .as_ref()
                .err()
                .map(|e| format!("{label}{}={}: row flagged: {e}", result.axis, row.value))
        })
        .collect()
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, AppError> {
    match path {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(io_err(parent))?;
            }
            let file = fs::File::create(p).map_err(io_err(p))?;
            Ok(Box::new(io::BufWriter::new(file)))
        }
    }
}

fn finish(mut out: Box<dyn Write>, path: Option<&Path>) -> Result<(), AppError> {
    out.flush().map_err(io_err(path.unwrap_or(Path::new("<stdout>"))))
}

pub fn run(config: &RunConfig) -> Result<RunSummary, AppError> {
    let path = config.output.as_deref();
    let stdout_path = Path::new("<stdout>");
    match &config.task {
        Task::Sweep(spec) => {
            let result = run_sweep(spec)?;
            let mut out = open_output(path)?;
            writeln!(out, "{CSV_HEADER}").map_err(io_err(path.unwrap_or(stdout_path)))?;
            write_sweep_rows(&mut out, &result, spec.fixed, config.precision).map_err(io_err(path.unwrap_or(stdout_path)))?;
            finish(out, path)?;
            let messages = flag_messages(&result, "");
            Ok(RunSummary {
                failures: messages.len(),
                messages,
                files: path.map(|p| vec![p.to_path_buf()]).unwrap_or_default(),
            })
        }
        Task::Point { params, r, quadrature } => {
            let corrs = correlation_set(params, *r, quadrature)?;
            let m = measures_at(&corrs)?;
            let f = |x: f64| format_value(x, config.precision);
            let mut text = String::new();
            for (k, v) in [("J", params.j), ("gamma", params.gamma), ("D", params.d)] {
                text.push_str(&format!("{k} = {}\n", f(v)));
            }
            text.push_str(&format!("r = {r}\n"));
            for (k, v) in ["mz", "xx", "yy", "zz"].iter().zip(corrs.fields()) {
                text.push_str(&format!("{k} = {}\n", f(v)));
            }
            for measure in Measure::ALL {
                text.push_str(&format!("{} = {}\n", measure.name(), f(m.get(measure))));
            }
            let closed = m.qfi_closed_form.map_or("nan".to_string(), f);
            text.push_str(&format!("qfi_closed_form = {closed}\n"));
            let mut out = open_output(path)?;
            out.write_all(text.as_bytes()).map_err(io_err(path.unwrap_or(stdout_path)))?;
            finish(out, path)?;
            Ok(RunSummary {
                files: path.map(|p| vec![p.to_path_buf()]).unwrap_or_default(),
                ..Default::default()
            })
        }
        Task::Verify(settings) => {
            let checks = run_checks(settings);
            let mut out = open_output(path)?;
            out.write_all(crate::verify::render_table(&checks).as_bytes())
                .map_err(io_err(path.unwrap_or(stdout_path)))?;
            finish(out, path)?;
            let messages: Vec<String> = checks
                .iter()
                .filter(|c| c.status == CheckStatus::Fail)
                .map(|c| format!("check failed: {}", c.name))
                .collect();
            Ok(RunSummary {
                failures: messages.len(),
                messages,
                files: path.map(|p| vec![p.to_path_buf()]).unwrap_or_default(),
            })
        }
        Task::Figures { ids, quadrature } => {
            let dir = path.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(DEFAULT_FIGURE_DIR));
            emit_figures(ids, &dir, quadrature, config.precision)
        }
    }
}

/// One output file of figure data: a set of sweeps written back to back.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePanel {
    pub file_name: String,
    pub sweeps: Vec<SweepSpec>,
}

const SURFACE_STEP: f64 = 0.05;
const CURVE_STEP: f64 = 0.01;

/// Number rendering used in file names: `0.5`, `1`, `0.9`.
fn tag(x: f64) -> String {
    format!("{x}")
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| start + i as f64 * step).collect()
}

fn j_sweep(gamma: f64, d: f64, r: usize, step: f64, quadrature: &QuadratureSpec) -> SweepSpec {
    let fixed = ModelParams { j: 0.0, gamma, d };
    SweepSpec { quadrature: quadrature.clone(), ..SweepSpec::new(Axis::J, 0.0, 2.0, step, fixed, r) }
}

/// Panels of one figure. Surfaces are stored as stacks of J-curves.
pub fn figure_panels(id: u8, quadrature: &QuadratureSpec) -> Vec<FigurePanel> {
    let ds = [0.0, 0.5, 1.0];
    let mut panels = Vec::new();
    match id {
        1 => {
            for r in [1, 2, 5] {
                for d in ds {
                    panels.push(FigurePanel {
                        file_name: format!("fig1_r{r}_D{}.csv", tag(d)),
                        sweeps: grid(0.0, 1.0, SURFACE_STEP)
                            .into_iter()
                            .map(|g| j_sweep(g, d, r, SURFACE_STEP, quadrature))
                            .collect(),
                    });
                }
            }
        }
        2 => {
            for gamma in [0.0, 1.0] {
                for r in [1, 5] {
                    panels.push(FigurePanel {
                        file_name: format!("fig2_gamma{}_r{r}.csv", tag(gamma)),
                        sweeps: grid(0.0, 1.0, SURFACE_STEP)
                            .into_iter()
                            .map(|d| j_sweep(gamma, d, r, SURFACE_STEP, quadrature))
                            .collect(),
                    });
                }
            }
        }
        3 | 4 => {
            let (gamma, r) = if id == 3 { (1.0, 1) } else { (0.5, 5) };
            for d in ds {
                panels.push(FigurePanel {
                    file_name: format!("fig{id}_D{}.csv", tag(d)),
                    sweeps: vec![j_sweep(gamma, d, r, CURVE_STEP, quadrature)],
                });
            }
        }
        5 => {
            for j in [0.9, 1.0, 1.2, 2.0] {
                let fixed = ModelParams { j, gamma: 0.5, d: 0.0 };
                panels.push(FigurePanel {
                    file_name: format!("fig5_J{}.csv", tag(j)),
                    sweeps: vec![SweepSpec {
                        quadrature: quadrature.clone(),
                        ..SweepSpec::new(Axis::D, 0.0, 1.0, SURFACE_STEP, fixed, 1)
                    }],
                });
            }
        }
        _ => {}
    }
    panels
}

/// Writes every panel of the requested figures under `dir`.
pub fn emit_figures(ids: &[u8], dir: &Path, quadrature: &QuadratureSpec, precision: usize) -> Result<RunSummary, AppError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut summary = RunSummary::default();
    for &id in ids {
        for panel in figure_panels(id, quadrature) {
            let path = dir.join(&panel.file_name);
            let mut buf = Vec::new();
            writeln!(buf, "{CSV_HEADER}").expect("write to memory");
            for spec in &panel.sweeps {
                let result = run_sweep(spec)?;
                write_sweep_rows(&mut buf, &result, spec.fixed, precision).expect("write to memory");
                summary.messages.extend(flag_messages(&result, &format!("{}: ", panel.file_name)));
            }
            fs::write(&path, buf).map_err(io_err(&path))?;
            summary.files.push(path);
        }
    }
    summary.failures = summary.messages.len();
    Ok(summary)
}

/// Worker count from `SPINCHAIN_THREADS`, if set.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, AppError> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(AppError::Threads(format!("expected a positive integer, got `{v}`"))),
        },
    }
}

/// Runs `f` on a pool capped by `SPINCHAIN_THREADS` (global pool otherwise).
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, AppError> {
    let cap = thread_cap(std::env::var(THREADS_ENV).ok().as_deref())?;
    match cap {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| AppError::Threads(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
