//! Randomized properties of the numerical layers and of snapshot encoding.

use std::f64::consts::PI;

use asym_mhd::algebra::{full_bracket, inertia_apply, invariant_form};
use asym_mhd::config::random_state;
use asym_mhd::diagnostics::{cross_helicity, energy};
use asym_mhd::io::{decode_snapshot, encode_snapshot};
use asym_mhd::spectral::random_solenoidal;
use asym_mhd::{AlgebraElement, Scalar, SpectralField, TorusGrid};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid_strategy() -> impl Strategy<Value = TorusGrid> {
    (2usize..=3, prop_oneof![Just(8usize), Just(16)])
        .prop_map(|(d, n)| TorusGrid::new(d, n).unwrap())
}

fn physical_strategy() -> impl Strategy<Value = (TorusGrid, Vec<f64>, Vec<f64>)> {
    grid_strategy().prop_flat_map(|g| {
        let len = g.len();
        (
            Just(g),
            prop::collection::vec(-1.0f64..1.0, len),
            prop::collection::vec(-1.0f64..1.0, len),
        )
    })
}

fn element(grid: TorusGrid, seed: u64) -> AlgebraElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = grid.cutoff() / 2;
    AlgebraElement::new(
        random_solenoidal(grid, cap, &mut rng),
        random_solenoidal(grid, cap, &mut rng),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn physical_round_trip((g, f, _) in physical_strategy()) {
        let back = Scalar::from_physical(g, &f).unwrap().to_physical();
        for (a, b) in back.iter().zip(&f) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn parseval_matches_quadrature((g, f, h) in physical_strategy()) {
        let sf = Scalar::from_physical(g, &f).unwrap();
        let sh = Scalar::from_physical(g, &h).unwrap();
        let quad: f64 = f.iter().zip(&h).map(|(a, b)| a * b).sum::<f64>() * g.volume() / g.len() as f64;
        let coeffwise = sf.inner_product(&sh).unwrap();
        prop_assert!((quad - coeffwise).abs() < 1e-12 * g.volume());
    }

    #[test]
    fn leray_is_idempotent_and_self_adjoint(seed in any::<u64>(), g in grid_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let comps = |rng: &mut ChaCha8Rng| -> SpectralField {
            use rand::Rng;
            let data: Vec<Vec<f64>> = (0..g.dim())
                .map(|_| (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            SpectralField::to_spectral(g, &data).unwrap()
        };
        let u = comps(&mut rng);
        let w = comps(&mut rng);
        let pu = u.leray_project();
        prop_assert!((&pu.leray_project() - &pu).norm() < 1e-13 * pu.norm());
        prop_assert!(pu.divergence_residual() < 1e-13);
        let lhs = pu.inner_product(&w).unwrap();
        let rhs = u.inner_product(&w.leray_project()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * u.norm() * w.norm());
    }

    #[test]
    fn derivative_of_mode_matches_calculus(k1 in -3i64..=3, k2 in -3i64..=3) {
        let g = TorusGrid::new(2, 16).unwrap();
        let f = Scalar::from_fn(g, |x| (k1 as f64 * x[0] + k2 as f64 * x[1]).sin());
        let df = f.derivative(1).unwrap();
        let expected = Scalar::from_fn(g, |x| k2 as f64 * (k1 as f64 * x[0] + k2 as f64 * x[1]).cos());
        prop_assert!((&df - &expected).max_abs_coeff() < 1e-13);
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear(s1 in any::<u64>(), s2 in any::<u64>(), a in -2.0f64..2.0) {
        let g = TorusGrid::new(2, 16).unwrap();
        let (x, y) = (element(g, s1), element(g, s2));
        let xy = full_bracket(&x, &y).unwrap();
        let yx = full_bracket(&y, &x).unwrap();
        prop_assert!(xy.add(&yx).norm() < 1e-12 * xy.norm().max(1e-300));
        let scaled = full_bracket(&x.scale(a), &y).unwrap();
        prop_assert!(scaled.sub(&xy.scale(a)).norm() < 1e-12 * xy.norm().max(1e-300));
    }

    #[test]
    fn invariant_form_symmetric_and_inertia_self_adjoint(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = TorusGrid::new(3, 8).unwrap();
        let (x, y) = (element(g, s1), element(g, s2));
        let scale = x.norm() * y.norm();
        let xy = invariant_form(&x, &y).unwrap();
        prop_assert!((xy - invariant_form(&y, &x).unwrap()).abs() < 1e-13 * scale);
        let l = invariant_form(&inertia_apply(&x), &y).unwrap();
        let r = invariant_form(&x, &inertia_apply(&y)).unwrap();
        prop_assert!((l - r).abs() < 1e-13 * scale);
        prop_assert_eq!(inertia_apply(&inertia_apply(&x)), x);
    }

    #[test]
    fn invariants_agree_with_the_invariant_form(seed in any::<u64>()) {
        let s = random_state(TorusGrid::new(2, 16).unwrap(), seed, 4, 0.3, 0.5);
        let x = s.to_algebra();
        let e = invariant_form(&inertia_apply(&x), &x).unwrap();
        let h = 0.5 * invariant_form(&x, &x).unwrap();
        prop_assert!((e - energy(&s)).abs() < 1e-13 * e.abs().max(1.0));
        prop_assert!((h - cross_helicity(&s)).abs() < 1e-13 * e.abs().max(1.0));
    }

    #[test]
    fn snapshot_round_trip(seed in any::<u64>(), t in 0.0f64..10.0, g in grid_strategy()) {
        let s = random_state(g, seed, 2, 0.2, 0.3).with_time(t);
        let back = decode_snapshot(&encode_snapshot(&s)).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn unit_mode_norm() {
    let g = TorusGrid::new(3, 8).unwrap();
    let f = SpectralField::from_fn(g, |x| [x[2].sin(), 0.0, 0.0]);
    // ∫ sin² = (2π)³ / 2
    assert!((f.norm().powi(2) - 4.0 * PI.powi(3)).abs() < 1e-12);
}
