//! Randomised invariants over fields, scalings and laws.

use std::sync::OnceLock;

use nehari_core::extremal::{lambda_e, lambda_n};
use nehari_core::fibering::{classify, fibering_t, nehari_roots, rayleigh_n};
use nehari_core::functionals::{energy, luxemburg_norm, modular};
use nehari_core::grid::lp_norm_pow;
use nehari_core::nfunction::xi_bounds;
use nehari_core::solver::residual;
use nehari_core::{Classification, GrowthLaw, ProblemData};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;

fn problems() -> &'static Vec<ProblemData> {
    static P: OnceLock<Vec<ProblemData>> = OnceLock::new();
    P.get_or_init(|| common::laws().into_iter().map(|(_, l)| common::problem(l, 33, 3.5, 4.0, 1.0, 1.0)).collect())
}

fn field(pd: &ProblemData, seed: u64) -> Vec<f64> {
    common::random_field(pd, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quotients_are_scale_invariant_and_ordered(law in 0usize..3, seed: u64, c in 0.05f64..20.0) {
        let pd = &problems()[law];
        let u = field(pd, seed);
        let cu: Vec<f64> = u.iter().map(|v| c * v).collect();
        let (ln, le) = (lambda_n(&u, pd).unwrap(), lambda_e(&u, pd).unwrap());
        prop_assert!(common::rel_err(lambda_n(&cu, pd).unwrap(), ln) < 1e-7);
        prop_assert!(common::rel_err(lambda_e(&cu, pd).unwrap(), le) < 1e-7);
        prop_assert!(ln < le);
        prop_assert!(common::rel_err(fibering_t(&cu, pd).unwrap() * c, fibering_t(&u, pd).unwrap()) < 1e-7);
    }

    #[test]
    fn modular_sandwich(law in 0usize..3, seed: u64, t in 1e-3f64..1e3) {
        let pd = &problems()[law];
        let u = field(pd, seed);
        let (ell, m) = (pd.law().ell(), pd.law().m_idx());
        let tu: Vec<f64> = u.iter().map(|v| t * v).collect();
        let (lo, hi) = xi_bounds(t, ell, m);
        let (a, b) = (modular(&u, pd), modular(&tu, pd));
        prop_assert!(b >= lo * a * (1.0 - 1e-9) && b <= hi * a * (1.0 + 1e-9));
    }

    #[test]
    fn luxemburg_norm_is_homogeneous_and_unit_modular(law in 0usize..3, seed: u64, c in 0.1f64..10.0) {
        let pd = &problems()[law];
        let u = field(pd, seed);
        let n = luxemburg_norm(&u, pd);
        let scaled: Vec<f64> = u.iter().map(|v| c * v).collect();
        prop_assert!(common::rel_err(luxemburg_norm(&scaled, pd), c * n) < 1e-8);
        let unit: Vec<f64> = u.iter().map(|v| v / n).collect();
        prop_assert!((modular(&unit, pd) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn holder_interpolation(seed: u64) {
        let pd = &problems()[0];
        let u = field(pd, seed);
        let cell = pd.grid().cell_volume();
        // ‖u‖_3 ≤ ‖u‖_2^{1/3} ‖u‖_4^{2/3}
        let n2 = lp_norm_pow(&u, cell, 2.0).sqrt();
        let n3 = lp_norm_pow(&u, cell, 3.0).cbrt();
        let n4 = lp_norm_pow(&u, cell, 4.0).powf(0.25);
        prop_assert!(n3 <= n2.powf(1.0 / 3.0) * n4.powf(2.0 / 3.0) * (1.0 + 1e-12));
    }

    #[test]
    fn nehari_roots_are_critical_points(law in 0usize..3, seed: u64, f in 1.05f64..3.0) {
        let base = &problems()[law];
        let u = field(base, seed);
        let mu = f * rayleigh_n(&u, base).unwrap().max(lambda_n(&u, base).unwrap());
        let pd = base.with_mu(mu);
        let roots = nehari_roots(&u, &pd).unwrap();
        let (tm, tp) = (roots.t_minus.unwrap(), roots.t_plus.unwrap());
        prop_assert!(tm < tp);
        prop_assert_eq!(classify(&u, tm, &pd).unwrap(), Classification::Minus);
        prop_assert_eq!(classify(&u, tp, &pd).unwrap(), Classification::Plus);
        let e = |t: f64| energy(&u.iter().map(|v| t * v).collect::<Vec<_>>(), &pd);
        prop_assert!(e(tp) < e(tm));
    }

    #[test]
    fn residual_is_nonnegative_and_vanishes_at_zero(seed: u64, c in 0.0f64..5.0) {
        let pd = &problems()[0];
        let u: Vec<f64> = field(pd, seed).iter().map(|v| c * v).collect();
        let r = residual(&u, pd);
        prop_assert!(r >= 0.0 && r.is_finite());
        if c == 0.0 {
            prop_assert_eq!(r, 0.0);
        }
    }
}

#[test]
fn homogeneous_law_flag() {
    assert!(GrowthLaw::power(2.0).unwrap().is_homogeneous());
    assert!(!GrowthLaw::power_sum(2.0, 3.0).unwrap().is_homogeneous());
}
