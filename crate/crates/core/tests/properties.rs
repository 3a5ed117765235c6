use proptest::prelude::*;

use wco_spectra::circle::{backward_orbit_to, doubling_step, preimages, Angle};
use wco_spectra::radius::spectral_radius;
use wco_spectra::{BlaschkeProduct, Complex64, WcoSpec, Weight};

fn disc_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.95f64, 0.0..std::f64::consts::TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn exact_angle() -> impl Strategy<Value = Angle> {
    (1i128..200).prop_flat_map(|q| (0..q).prop_map(move |p| Angle::exact(p, q).unwrap()))
}

fn linear_weight() -> impl Strategy<Value = Weight> {
    (0.1..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, re, im)| {
        Weight::polynomial(vec![Complex64::new(a, 0.0), Complex64::new(re, im)]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unimodular_on_circle(zeros in prop::collection::vec(disc_point(), 2..5), rot in 0.0..6.0f64, t in 0.0..1.0f64) {
        let b = BlaschkeProduct::new(zeros, rot).unwrap();
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * t);
        prop_assert!((b.evaluate(z).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn preimages_are_sections(t in exact_angle(), d in 2usize..7) {
        for e in preimages(&t, d) {
            prop_assert_eq!(doubling_step(&e, d), t);
        }
    }

    #[test]
    fn backward_orbit_lands_near_target(u in exact_angle(), v in exact_angle(), d in 2usize..5, n in 1usize..8) {
        let chain = backward_orbit_to(&u, &v, d, n).unwrap();
        prop_assert_eq!(chain.len(), n);
        prop_assert_eq!(chain[0], u);
        for w in chain.windows(2) {
            prop_assert_eq!(doubling_step(&w[1], d), w[0]);
        }
        let last = chain.last().unwrap();
        prop_assert!(last.circle_distance(&v) <= (d as f64).powi(1 - n as i32) + 1e-15);
    }

    #[test]
    fn radius_ignores_rotation(w in linear_weight(), alpha in 0.0..6.0f64) {
        let spec = WcoSpec::model(2, w).unwrap();
        let a = spectral_radius(&spec, 6).unwrap();
        let b = spectral_radius(&spec.rotated(alpha), 6).unwrap();
        prop_assert_eq!(a.rho_lower, b.rho_lower);
    }

    #[test]
    fn radius_grows_with_period_cap(w in linear_weight()) {
        let spec = WcoSpec::model(2, w).unwrap();
        let mut prev = 0.0;
        for m in 1..=7 {
            let r = spectral_radius(&spec, m).unwrap().rho_lower;
            prop_assert!(r >= prev);
            prev = r;
        }
    }
}
