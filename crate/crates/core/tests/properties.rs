use catmetro_core::bounds::{
    self, curve, eps_min_entangled_cat, entangled_cat_generator_variance, entangled_cat_photon_number,
    invert_ntot, single_cat_generator_variance, ProbeFamily,
};
use catmetro_core::coherent::{make_entangled_cat, CoherentLabel, SuperpositionState};
use catmetro_core::estimation::{ramsey_fisher, RamseyModel, RamseyScheme};
use catmetro_core::fock::{displacement_matrix, expectation, required_dim, to_fock, variance, OperatorMatrix};
use catmetro_core::Complex64;
use proptest::prelude::*;

fn complex(max: f64) -> impl Strategy<Value = Complex64> {
    (-max..max, -max..max).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Two-term superpositions on one or two modes with amplitudes inside `max`.
fn two_term_state(max: f64) -> impl Strategy<Value = SuperpositionState> {
    (1usize..=2)
        .prop_flat_map(move |modes| {
            (
                proptest::collection::vec(complex(max / 1.5), modes),
                proptest::collection::vec(complex(max / 1.5), modes),
                0.2..1.0f64,
                0.2..1.0f64,
                0.0..std::f64::consts::TAU,
            )
        })
        .prop_filter_map("degenerate superposition", |(a, b, ca, cb, phase)| {
            let terms = vec![
                (Complex64::new(ca, 0.0), CoherentLabel::new(a).ok()?),
                (Complex64::from_polar(cb, phase), CoherentLabel::new(b).ok()?),
            ];
            let s = SuperpositionState::new(terms).ok()?;
            (s.norm_squared().ok()? > 0.05).then_some(s)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn displacement_preserves_norm(s in two_term_state(3.0), beta in complex(1.5)) {
        let betas = vec![beta; s.mode_count()];
        let before = s.norm_squared().unwrap();
        let after = s.displace(&betas).unwrap().norm_squared().unwrap();
        prop_assert!((after / before - 1.0).abs() < 1e-12);
    }

    #[test]
    fn force_phase_law(alpha in 0.0..4.0f64, eps in -0.5..0.5f64) {
        let s = SuperpositionState::coherent(CoherentLabel::new(vec![Complex64::new(alpha, 0.0)]).unwrap());
        let d = s.displace(&[Complex64::new(0.0, eps)]).unwrap();
        let ratio = d.terms()[0].0 / s.terms()[0].0;
        let diff = (ratio.arg() - eps * alpha).rem_euclid(std::f64::consts::TAU);
        prop_assert!(diff.min(std::f64::consts::TAU - diff) < 1e-12);
    }

    #[test]
    fn displacements_compose_up_to_phase(s in two_term_state(2.0), b in complex(1.0), g in complex(1.0)) {
        let n = s.mode_count();
        let twice = s.displace(&vec![b; n]).unwrap().displace(&vec![g; n]).unwrap();
        let once = s.displace(&vec![b + g; n]).unwrap();
        prop_assert!((twice.fidelity(&once).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_symmetric_states_have_zero_mean_generator(
        amps in proptest::collection::vec(complex(2.5), 1..5),
        c in complex(1.0),
    ) {
        prop_assume!(c.norm() > 0.1);
        let neg: Vec<_> = amps.iter().map(|a| -a).collect();
        let s = SuperpositionState::new(vec![
            (c, CoherentLabel::new(amps).unwrap()),
            (c, CoherentLabel::new(neg).unwrap()),
        ]);
        if let Ok(s) = s {
            prop_assert!(s.expect_generator().unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn inversion_round_trips(n_tot in 1e-4..1e3f64, modes in 1usize..200) {
        let alpha = invert_ntot(n_tot, modes).unwrap();
        prop_assert!((entangled_cat_photon_number(alpha, modes) - n_tot).abs() <= 1e-12 * n_tot.max(1.0));
    }

    #[test]
    fn ramsey_product_fisher_is_flat(theta in 0.01..1.5f64) {
        let m = RamseyModel::new(RamseyScheme::ProductState, 3, theta).unwrap();
        prop_assert_eq!(ramsey_fisher(&m).unwrap(), 4.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn representation_bridge(s in two_term_state(2.0)) {
        let dim = required_dim(s.max_abs_amplitude());
        let v = to_fock(&s, dim).unwrap();
        let g = OperatorMatrix::collective_generator(dim, s.mode_count()).unwrap();
        prop_assert!((v.norm_squared() - s.norm_squared().unwrap()).abs() < 1e-10);
        prop_assert!((expectation(&v, &g).unwrap().re - s.expect_generator().unwrap()).abs() < 1e-10);
        prop_assert!((variance(&v, &g).unwrap() - s.variance_generator().unwrap()).abs() < 1e-10);
        let n: f64 = (0..s.mode_count())
            .map(|k| expectation(&v, &OperatorMatrix::number(k, dim, s.mode_count()).unwrap()).unwrap().re)
            .sum();
        prop_assert!((n - s.mean_photon_number().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn displacement_matrices_are_unitary(beta in complex(1.5), dim in 10usize..60) {
        prop_assert!(displacement_matrix(beta, dim).unwrap().unitarity_defect() < 1e-10);
    }
}

#[test]
fn inversion_round_trip_grid() {
    for &x in &[0.01, 0.1, 1.0, 10.0, 100.0] {
        for &n in &[1usize, 10] {
            let alpha = invert_ntot(x, n).unwrap();
            assert!((entangled_cat_photon_number(alpha, n) - x).abs() < 1e-10);
        }
    }
}

#[test]
fn curves_decrease_in_n_tot() {
    let grid: Vec<f64> = (1..=400).map(|i| 0.05 * i as f64).collect();
    for family in [
        ProbeFamily::Squeezed,
        ProbeFamily::SingleModeCat,
        ProbeFamily::SeparableCats(10),
        ProbeFamily::EntangledCat(1),
        ProbeFamily::EntangledCat(10),
    ] {
        let c = curve(family, &grid).unwrap();
        assert!(c.windows(2).all(|w| w[1].eps_min < w[0].eps_min), "{family:?}");
    }
    let sql = curve(ProbeFamily::CoherentSql, &grid).unwrap();
    assert!(sql.iter().all(|r| r.eps_min == 0.5));
}

#[test]
fn heisenberg_product_rises_to_one() {
    for n in [1usize, 10, 100] {
        let products: Vec<f64> = (1..=300)
            .map(|i| {
                let r = eps_min_entangled_cat(0.02 * i as f64, n).unwrap();
                r.eps_min * (4.0 * n as f64 * r.n_tot).sqrt()
            })
            .collect();
        assert!(products.windows(2).all(|w| w[1] >= w[0]), "N = {n}");
        assert!(products.iter().all(|p| *p <= 1.0));
    }
}

#[test]
fn entangled_cat_is_a_scaled_single_cat() {
    for n in 1..=12usize {
        for k in 0..=30 {
            let alpha = 0.1 * k as f64;
            let ent = entangled_cat_generator_variance(alpha, n);
            let single = single_cat_generator_variance((n as f64).sqrt() * alpha);
            assert!((ent / (n as f64 * single) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn cat_variance_oracle_agreement() {
    for n in 1..=2 {
        for alpha in [0.25, 0.5, 1.0, 2.0] {
            let s = make_entangled_cat(alpha, n).unwrap();
            let dim = required_dim(alpha);
            let v = to_fock(&s, dim).unwrap();
            let g = OperatorMatrix::collective_generator(dim, n).unwrap();
            assert!((expectation(&v, &g).unwrap().re - s.expect_generator().unwrap()).abs() < 1e-10);
            assert!((variance(&v, &g).unwrap() - s.variance_generator().unwrap()).abs() < 1e-10);
            let photons: f64 = (0..n)
                .map(|k| expectation(&v, &OperatorMatrix::number(k, dim, n).unwrap()).unwrap().re)
                .sum();
            assert!((photons - s.mean_photon_number().unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn entangled_bound_matches_oracle_variance() {
    for n in 1..=3 {
        for alpha in [0.0, 0.3, 0.7, 1.2, 2.0] {
            let dim = required_dim(alpha);
            let v = to_fock(&make_entangled_cat(alpha, n).unwrap(), dim).unwrap();
            let g = OperatorMatrix::collective_generator(dim, n).unwrap();
            let qfi = catmetro_core::fock::qfi_pure(&v, &g).unwrap();
            let eps = eps_min_entangled_cat(alpha, n).unwrap().eps_min;
            // printed normalisation: eps = 1/√Var(G) = 1/√(QFI/4)
            assert!((eps / bounds::eps_from_generator_variance(qfi / 4.0) - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn ghz_fisher_scales_exactly() {
    let one = ramsey_fisher(&RamseyModel::new(RamseyScheme::Ghz, 1, 0.01).unwrap()).unwrap();
    for n in 1..=40usize {
        let f = ramsey_fisher(&RamseyModel::new(RamseyScheme::Ghz, n, 0.01).unwrap()).unwrap();
        assert_eq!(1.0 / f.sqrt(), (1.0 / n as f64) * (1.0 / one.sqrt()));
    }
}
