//! Adaptive Gauss-Kronrod (7/15) quadrature on a finite interval with
//! user-supplied breakpoints.
//!
//! The interval is first cut at every breakpoint; the panel carrying the
//! largest error estimate is then bisected until the summed estimate of every
//! integrand component satisfies `err <= max(abs_tol, rel_tol * |value|)`.
//! Several integrands sharing the same abscissae can be integrated in one
//! pass, which is how the kernel `Q_r` is evaluated for all `r` at once.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes, the
// last entry is the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 2000;

/// Accuracy controls and forced split points for [`integrate_adaptive`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Strictly increasing points inside the open integration interval.
    pub breakpoints: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            max_subdivisions: DEFAULT_MAX_SUBDIVISIONS,
            breakpoints: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidQuadrature(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidQuadrature(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidQuadrature(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        if self.breakpoints.iter().any(|b| !b.is_finite())
            || self.breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidQuadrature(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Value of an integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

/// Result of integrating several integrands on shared abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct Integrals {
    pub values: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub subdivisions: usize,
}

struct Panel {
    a: f64,
    b: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
}

impl Panel {
    fn worst(&self) -> f64 {
        self.errors.iter().cloned().fold(0.0, f64::max)
    }
}

fn kronrod_panel<F>(f: &F, a: f64, b: f64, n: usize, scratch: &mut [f64]) -> Panel
where
    F: Fn(f64, &mut [f64]),
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = vec![0.0; n];
    let mut gauss = vec![0.0; n];

    f(centre, scratch);
    for c in 0..n {
        kronrod[c] = WGK[7] * scratch[c];
        gauss[c] = WG[3] * scratch[c];
    }
    for (k, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        for point in [centre - dx, centre + dx] {
            f(point, scratch);
            for c in 0..n {
                kronrod[c] += wk * scratch[c];
                if k % 2 == 1 {
                    gauss[c] += WG[k / 2] * scratch[c];
                }
            }
        }
    }
    let values: Vec<f64> = kronrod.iter().map(|v| v * half).collect();
    let errors = kronrod
        .iter()
        .zip(&gauss)
        .map(|(k, g)| ((k - g) * half).abs())
        .collect();
    Panel { a, b, values, errors }
}

/// Integrates `n` integrands over `[a, b]` at once; `f(x, out)` writes the
/// `n` integrand values at `x` into `out`.
pub fn integrate_many<F>(f: F, n: usize, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integrals>
where
    F: Fn(f64, &mut [f64]),
{
    spec.validate()?;
    if !(a < b) {
        return Err(Error::InvalidQuadrature(format!(
            "interval [{a}, {b}] is empty"
        )));
    }
    let mut scratch = vec![0.0; n];
    let mut cuts = vec![a];
    cuts.extend(spec.breakpoints.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    let mut panels: Vec<Panel> = cuts
        .windows(2)
        .map(|w| kronrod_panel(&f, w[0], w[1], n, &mut scratch))
        .collect();

    let mut subdivisions = 0;
    loop {
        let mut values = vec![0.0; n];
        let mut errors = vec![0.0; n];
        for p in &panels {
            for c in 0..n {
                values[c] += p.values[c];
                errors[c] += p.errors[c];
            }
        }
        let converged = values
            .iter()
            .zip(&errors)
            .all(|(v, e)| *e <= spec.abs_tol.max(spec.rel_tol * v.abs()));
        if converged || values.iter().chain(&errors).any(|x| !x.is_finite()) {
            if !converged {
                return Err(Error::NonConvergence {
                    subdivisions,
                    error_estimate: f64::NAN,
                });
            }
            // Sum again in positional order so the result does not depend on
            // the refinement history of the panel list.
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            let mut ordered = vec![0.0; n];
            for p in &panels {
                for c in 0..n {
                    ordered[c] += p.values[c];
                }
            }
            return Ok(Integrals {
                values: ordered,
                error_estimates: errors,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                subdivisions,
                error_estimate: errors.iter().cloned().fold(0.0, f64::max),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.worst().total_cmp(&q.worst()))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let panel = panels.swap_remove(worst);
        let mid = 0.5 * (panel.a + panel.b);
        if !(mid > panel.a && mid < panel.b) {
            return Err(Error::NonConvergence {
                subdivisions,
                error_estimate: errors.iter().cloned().fold(0.0, f64::max),
            });
        }
        panels.push(kronrod_panel(&f, panel.a, mid, n, &mut scratch));
        panels.push(kronrod_panel(&f, mid, panel.b, n, &mut scratch));
        subdivisions += 1;
    }
}

/// Integrates a scalar function over `[0, pi]`.
pub fn integrate_adaptive<F>(f: F, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    let res = integrate_many(|x, out| out[0] = f(x), 1, 0.0, std::f64::consts::PI, spec)?;
    Ok(Integral {
        value: res.values[0],
        error_estimate: res.error_estimates[0],
        subdivisions: res.subdivisions,
    })
}
