use proptest::prelude::*;

use spinchain::chain::correlation_set;
use spinchain::config::{parse_config, Mode, Task};
use spinchain::measures::{coherence_l1, coherence_l1_xstate, coherence_rec, coherence_rec_xstate, qfi_total_direct};
use spinchain::oracle::{build_hamiltonian, finite_correlators, free_fermion_correlators, ground_state, FiniteChainSpec};
use spinchain::state::{reduced_density_matrix, SpinPairState, PSD_TOL};
use spinchain::sweep::{central_derivative, Axis, SweepSpec};
use spinchain::{measures_at, CorrelationSet, ModelParams, QuadratureSpec};

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

prop_compose! {
    fn x_state()(ap in 0.01..1.0f64, am in 0.01..1.0f64, b in 0.01..1.0f64, sp in -1.0..1.0f64, sm in -1.0..1.0f64)
        -> CorrelationSet
    {
        let total = ap + am + 2.0 * b;
        let (ap, am, b) = (ap / total, am / total, b / total);
        let (cp, cm) = (b * sp, (ap * am).sqrt() * sm);
        CorrelationSet::new(1, ap - am, 2.0 * (cp + cm), 2.0 * (cp - cm), 1.0 - 4.0 * b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn correlators_bounded_and_state_physical(j in 0.0..2.0f64, gamma in -1.0..1.0f64, d in -1.0..1.0f64, r in 1usize..6) {
        // Skip the gapless isotropic region, where the quadrature is slow.
        prop_assume!(gamma.abs() > 0.05 || j < 0.9);
        let c = correlation_set(&ModelParams::new(j, gamma, d).unwrap(), r, &q()).unwrap();
        for v in c.fields() {
            prop_assert!(v.abs() <= 1.0 + 1e-9, "{c:?}");
        }
        let s = reduced_density_matrix(&c).unwrap();
        prop_assert!((s.trace() - 1.0).abs() < 1e-12);
        prop_assert!(s.eigenvalues().iter().all(|&e| e >= -PSD_TOL), "{s:?}");
    }

    #[test]
    fn measures_in_range(j in 0.0..2.0f64, gamma in 0.1..1.0f64, d in -1.0..1.0f64, r in 1usize..4) {
        let c = correlation_set(&ModelParams::new(j, gamma, d).unwrap(), r, &q()).unwrap();
        let m = measures_at(&c).unwrap();
        prop_assert!(m.qfi >= 0.0 && m.qfi.is_finite(), "{m:?}");
        prop_assert!((0.0..=1.0 + 1e-12).contains(&m.c_l1), "{m:?}");
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&m.c_rec), "{m:?}");
    }

    #[test]
    fn anisotropy_sign_does_not_matter(j in 0.0..2.0f64, gamma in 0.1..1.0f64, d in -1.0..1.0f64, r in 1usize..4) {
        let plus = correlation_set(&ModelParams::new(j, gamma, d).unwrap(), r, &q()).unwrap();
        let minus = correlation_set(&ModelParams::new(j, -gamma, d).unwrap(), r, &q()).unwrap();
        let (a, b) = (measures_at(&plus).unwrap(), measures_at(&minus).unwrap());
        prop_assert!((a.qfi - b.qfi).abs() < 1e-8 && (a.c_l1 - b.c_l1).abs() < 1e-8 && (a.c_rec - b.c_rec).abs() < 1e-8);
    }

    #[test]
    fn x_state_shortcuts_match_general_formulas(c in x_state()) {
        let rho = reduced_density_matrix(&c).unwrap().density_matrix().unwrap();
        prop_assert!((coherence_l1(&rho) - coherence_l1_xstate(&c)).abs() < 1e-12);
        prop_assert!((coherence_rec(&rho).unwrap() - coherence_rec_xstate(&c).unwrap()).abs() < 1e-9);
        prop_assert!((qfi_total_direct(&rho).unwrap() - measures_at(&c).unwrap().qfi).abs() < 1e-9);
    }

    #[test]
    fn closed_form_spectrum_matches_numeric(c in x_state()) {
        let s: SpinPairState = reduced_density_matrix(&c).unwrap();
        let mut closed = s.eigenvalues();
        closed.sort_by(f64::total_cmp);
        let numeric = s.density_matrix().unwrap().eigenvalues();
        let mut numeric: Vec<f64> = numeric.iter().copied().collect();
        numeric.sort_by(f64::total_cmp);
        for (a, b) in closed.iter().zip(&numeric) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_energy_invariant_under_reflections(j in 0.0..2.0f64, gamma in -1.0..1.0f64, d in -1.0..1.0f64) {
        let energy = |g: f64, dm: f64| {
            let spec = FiniteChainSpec::new(6, ModelParams::new(j, g, dm).unwrap());
            ground_state(&build_hamiltonian(&spec).unwrap(), 1e-10).unwrap().energy
        };
        let base = energy(gamma, d);
        prop_assert!((base - energy(-gamma, d)).abs() < 1e-10);
        prop_assert!((base - energy(gamma, -d)).abs() < 1e-10);
    }

    #[test]
    fn finite_oracles_agree(j in 0.1..0.9f64, gamma in 0.2..1.0f64, d in -1.0..1.0f64, r in 1usize..4) {
        let spec = FiniteChainSpec::new(6, ModelParams::new(j, gamma, d).unwrap());
        let ed = finite_correlators(&spec, r).unwrap();
        let ff = free_fermion_correlators(&spec, r).unwrap();
        prop_assert!(ed.max_abs_diff(&ff) < 1e-9, "{ed:?} vs {ff:?}");
    }

    #[test]
    fn derivative_exact_on_quadratics(a in -3.0..3.0f64, b in -3.0..3.0f64, h in 0.001..0.5f64, n in 5usize..40) {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let ys: Vec<f64> = xs.iter().map(|x| a * x * x + b * x).collect();
        let d = central_derivative(&xs, &ys).unwrap();
        for (x, dy) in xs.iter().zip(d) {
            prop_assert!((dy - (2.0 * a * x + b)).abs() < 1e-8 * (1.0 + a.abs() + b.abs()) / h.min(1.0));
        }
    }

    #[test]
    fn sweep_grid_is_inclusive_and_uniform(start in -1.0..1.0f64, len in 0.0..3.0f64, step in 0.005..0.5f64) {
        let spec = SweepSpec::new(Axis::D, start, start + len, step, ModelParams::new(1.0, 1.0, 0.0).unwrap(), 1);
        let values = spec.values();
        prop_assert_eq!(values.len(), spec.point_count());
        prop_assert_eq!(values.len(), ((len / step) + 1e-9).floor() as usize + 1);
        prop_assert_eq!(values[0], start);
        prop_assert!(*values.last().unwrap() <= start + len + 1e-9 * step);
        for w in values.windows(2) {
            prop_assert!((w[1] - w[0] - step).abs() < 1e-9);
        }
    }

    #[test]
    fn sweep_config_round_trips(gamma in -1.0..1.0f64, d in -2.0..2.0f64, r in 1usize..50, steps in 5usize..200) {
        let text = format!("axis = J\ngamma = {gamma}\nD = {d}\nstart = 0\nstop = 2\nstep = {}\nr = {r}\n", 2.0 / steps as f64);
        let config = parse_config(&text, Mode::Sweep).unwrap();
        let Task::Sweep(spec) = config.task else { panic!("not a sweep") };
        prop_assert_eq!(spec.fixed.gamma, gamma);
        prop_assert_eq!(spec.fixed.d, d);
        prop_assert_eq!(spec.r, r);
        prop_assert_eq!(spec.point_count(), steps + 1);
    }
}
