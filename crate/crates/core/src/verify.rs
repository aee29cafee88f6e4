//! Conformance checks of the thermodynamic-limit formulas against the
//! finite-ring oracles.

use std::f64::consts::FRAC_2_PI;
use std::fmt::Write as _;

use crate::chain::{correlation_set, kernel_q, magnetization};
use crate::config::VerifySettings;
use crate::error::Result;
use crate::measures::{measures_at, CLOSED_FORM_QFI_SCALE};
use crate::model::{CorrelationSet, ModelParams};
use crate::oracle::{
    build_hamiltonian, correlators_from_ground_state, free_fermion_correlators, ground_state, FiniteChainSpec,
};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Measured quantity reported without a pass/fail verdict.
    Info,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    pub note: String,
}

impl Check {
    fn graded(name: impl Into<String>, residual: f64, tolerance: f64, note: impl Into<String>) -> Self {
        let status = if residual <= tolerance { CheckStatus::Pass } else { CheckStatus::Fail };
        Self { name: name.into(), residual, tolerance, status, note: note.into() }
    }

    fn from_result(name: impl Into<String>, tolerance: f64, note: &str, value: Result<f64>) -> Self {
        match value {
            Ok(residual) => Self::graded(name, residual, tolerance, note),
            Err(e) => Self {
                name: name.into(),
                residual: f64::NAN,
                tolerance,
                status: CheckStatus::Fail,
                note: format!("error: {e}"),
            },
        }
    }
}

/// Coupling point shared by the oracle comparisons.
const ORACLE_J: f64 = 0.5;
const ORACLE_GAMMA: f64 = 1.0;

const DM_NOTE: &str = "documented: the DM term commutes with the ring Hamiltonian, so the finite-ring ground state \
                       is D-independent in the gapped phase while the thermodynamic integrals are not";

fn params(j: f64, gamma: f64, d: f64) -> ModelParams {
    ModelParams::new(j, gamma, d).expect("static coupling point")
}

fn ed_correlators(n: usize, p: ModelParams, rs: &[usize]) -> Result<Vec<CorrelationSet>> {
    let spec = FiniteChainSpec::new(n, p);
    let gs = ground_state(&build_hamiltonian(&spec)?, spec.degeneracy_rel_tol)?;
    rs.iter().map(|&r| correlators_from_ground_state(&gs, r)).collect()
}

fn closed_form_sample(q: &QuadratureSpec) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for &j in &[0.3, 0.6, 0.9, 1.2, 1.5, 2.0] {
        for &gamma in &[0.25, 0.5, 1.0] {
            for &d in &[0.0, 0.5] {
                for r in [1, 2] {
                    let corrs = correlation_set(&params(j, gamma, d), r, q)?;
                    let m = measures_at(&corrs)?;
                    let CorrelationSet { mz, xx, yy, zz, .. } = corrs;
                    let den = ((1.0 + xx) * (1.0 + yy) - mz * mz).abs().min((1.0 + zz).abs());
                    if let (Some(closed), true) = (m.qfi_closed_form, den > 1e-6) {
                        out.push((closed, m.qfi));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Runs every conformance check. Individual failures are reported as rows;
/// nothing here aborts.
pub fn run_checks(settings: &VerifySettings) -> Vec<Check> {
    let q = QuadratureSpec::default();
    let mut checks = Vec::new();
    let (n_ed, n_ff) = (settings.ed_sites, settings.ff_sites);

    checks.push(Check::from_result(
        "zz correction: polarized limit zz = 1 (J=0, gamma=0.5, D=0.3, r=1)",
        1e-10,
        "the uncorrected zz formula gives 1/4 here",
        correlation_set(&params(0.0, 0.5, 0.3), 1, &q).map(|c| (c.zz - 1.0).abs()),
    ));

    checks.push(Check::from_result(
        format!("Toeplitz normalization: xx, yy vs free fermions N={n_ff} (J=0.5, gamma=1, D=0, r=1..3)"),
        1e-6,
        "entries scaled by 1/2",
        (|| {
            let mut worst: f64 = 0.0;
            for r in 1..=3 {
                let p = params(ORACLE_J, ORACLE_GAMMA, 0.0);
                let t = correlation_set(&p, r, &q)?;
                let f = free_fermion_correlators(&FiniteChainSpec::new(n_ff, p), r)?;
                worst = worst.max((t.xx - f.xx).abs()).max((t.yy - f.yy).abs());
            }
            Ok(worst)
        })(),
    ));

    for d in [0.0, 0.5] {
        let p = params(ORACLE_J, ORACLE_GAMMA, d);
        let ed = ed_correlators(n_ed, p, &[1]).map(|v| v[0]);
        let ff_small = free_fermion_correlators(&FiniteChainSpec::new(n_ed, p), 1);
        let ff_large = free_fermion_correlators(&FiniteChainSpec::new(n_ff, p), 1);
        let thermo = correlation_set(&p, 1, &q);
        let note = if d == 0.0 { "" } else { DM_NOTE };
        let point = format!("J=0.5, gamma=1, D={d}, r=1");

        checks.push(Check::from_result(
            format!("ED vs free fermions, N={n_ed} ({point})"),
            1e-10,
            "",
            ed.clone().and_then(|e| ff_small.map(|f| e.max_abs_diff(&f))),
        ));
        checks.push(Check::from_result(
            format!("thermodynamic vs ED, N={n_ed} ({point})"),
            2e-2,
            note,
            thermo.clone().and_then(|t| ed.map(|e| t.max_abs_diff(&e))),
        ));
        checks.push(Check::from_result(
            format!("thermodynamic vs free fermions, N={n_ff} ({point})"),
            1e-6,
            note,
            thermo.and_then(|t| ff_large.map(|f| t.max_abs_diff(&f))),
        ));
    }

    checks.push(Check::from_result(
        "magnetization 2/pi (J=1, gamma=1, D=0)",
        1e-10,
        "",
        magnetization(&params(1.0, 1.0, 0.0), &q).map(|m| (m - FRAC_2_PI).abs()),
    ));

    checks.push(Check::from_result(
        "kernel Q_0 = 2 mz (J=0.8, gamma=0.6, D=0.3)",
        1e-10,
        "",
        (|| {
            let p = params(0.8, 0.6, 0.3);
            Ok((kernel_q(&p, 0, &q)? - 2.0 * magnetization(&p, &q)?).abs())
        })(),
    ));

    match closed_form_sample(&q) {
        Ok(sample) if !sample.is_empty() => {
            let scaled = sample
                .iter()
                .map(|(c, s)| (CLOSED_FORM_QFI_SCALE * c - s).abs() / s.abs().max(1.0))
                .fold(0.0, f64::max);
            let ratios: Vec<f64> = sample.iter().map(|(c, s)| c / s).collect();
            let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            checks.push(Check {
                name: format!("closed-form QFI / spectral QFI over {} points", sample.len()),
                residual: hi,
                tolerance: f64::NAN,
                status: CheckStatus::Info,
                note: format!(
                    "documented discrepancy: printed closed form is the spectral QFI divided by {CLOSED_FORM_QFI_SCALE}; \
                     measured ratio range [{lo:.12}, {hi:.12}]"
                ),
            });
            checks.push(Check::graded(
                format!("closed-form QFI x {CLOSED_FORM_QFI_SCALE} vs spectral QFI (relative)"),
                scaled,
                1e-8,
                "",
            ));
        }
        Ok(_) => checks.push(Check {
            name: "closed-form QFI sample".into(),
            residual: f64::NAN,
            tolerance: 1e-8,
            status: CheckStatus::Fail,
            note: "no sample point with regular denominators".into(),
        }),
        Err(e) => checks.push(Check::from_result("closed-form QFI sample", 0.0, "", Err(e))),
    }

    checks
}

/// Fixed-width table, one row per check.
pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:>12}  {:>9}  status  note", "check", "residual", "tolerance");
    for c in checks {
        let tol = if c.tolerance.is_nan() { "-".to_string() } else { format!("{:.0e}", c.tolerance) };
        let _ = writeln!(
            out,
            "{:<width$}  {:>12.3e}  {:>9}  {:<6}  {}",
            c.name,
            c.residual,
            tol,
            c.status.label(),
            c.note
        );
    }
    let failed = checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
    let _ = writeln!(out, "{} checks, {} failed", checks.len(), failed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout() {
        let checks = vec![
            Check::graded("a", 1e-12, 1e-10, ""),
            Check::graded("bb", 1.0, 1e-10, "why"),
        ];
        let table = render_table(&checks);
        assert_eq!(table.lines().count(), 4);
        assert!(table.contains("PASS") && table.contains("FAIL"));
        assert!(table.ends_with("2 checks, 1 failed\n"));
    }
}
