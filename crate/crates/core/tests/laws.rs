use approx::assert_relative_eq;
use nehari_core::nfunction::{
    check_hypotheses, conjugate, default_samples, growth_indices, sobolev_conjugate, xi_bounds, LawTable,
};
use nehari_core::{Error, GrowthLaw, LawKind};

mod common;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

#[test]
fn evaluations_at_one() {
    let v = GrowthLaw::power(2.0).unwrap().eval(1.0).unwrap();
    assert_eq!((v.big_phi, v.phi, v.phi_prime), (0.5, 1.0, 0.0));

    let v = GrowthLaw::power_sum(2.0, 3.0).unwrap().eval(1.0).unwrap();
    assert_relative_eq!(v.big_phi, 5.0 / 6.0, max_relative = 1e-15);
    assert_relative_eq!(v.phi, 2.0, max_relative = 1e-15);

    let v = GrowthLaw::power_log(2.0).unwrap().eval(1.0).unwrap();
    assert_relative_eq!(v.big_phi, std::f64::consts::LN_2, max_relative = 1e-15);
}

#[test]
fn eval_rejects_nonpositive_arguments() {
    let law = GrowthLaw::power(2.0).unwrap();
    assert!(matches!(law.eval(0.0), Err(Error::NonPositiveInput(_))));
    assert!(matches!(law.eval(-1.0), Err(Error::NonPositiveInput(_))));
    assert_eq!(law.big_phi(0.0), 0.0);
}

#[test]
fn primitive_derivative_is_t_phi() {
    for (name, law) in common::laws() {
        for t in log_grid(1e-2, 1e2, 25) {
            let h = 1e-5 * t;
            let fd = (law.big_phi(t + h) - law.big_phi(t - h)) / (2.0 * h);
            let exact = t * law.phi(t);
            assert!(common::rel_err(fd, exact) < 1e-6, "{name} at t = {t}: {fd} vs {exact}");
        }
    }
}

#[test]
fn sampled_growth_indices() {
    let samples = default_samples();
    let (l, m) = growth_indices(&GrowthLaw::power(2.0).unwrap(), &samples).unwrap();
    assert_relative_eq!(l, 2.0, max_relative = 1e-12);
    assert_relative_eq!(m, 2.0, max_relative = 1e-12);

    let (l, m) = growth_indices(&GrowthLaw::power_sum(2.0, 3.0).unwrap(), &samples).unwrap();
    assert!((l - 2.0).abs() < 1e-5 && l >= 2.0 - 1e-12);
    assert!((m - 3.0).abs() < 1e-5 && m <= 3.0 + 1e-12);

    // ratio = 2 + t/((1+t)ln(1+t)) tends to 3 at 0 and to 2 at infinity
    let (l, m) = growth_indices(&GrowthLaw::power_log(2.0).unwrap(), &samples).unwrap();
    assert!(l > 2.0 && l < 2.1, "{l}");
    assert!(m < 3.0 && m > 2.99, "{m}");
}

#[test]
fn growth_indices_need_six_decades() {
    let law = GrowthLaw::power(2.0).unwrap();
    assert!(growth_indices(&law, &log_grid(1e-2, 1e2, 50)).is_err());
}

#[test]
fn index_ratio_stays_within_declared_indices() {
    for (name, law) in common::laws() {
        for t in log_grid(1e-4, 1e4, 200) {
            let r = law.delta2_ratio(t);
            assert!(r >= law.ell() - 1e-12 && r <= law.m_idx() + 1e-12, "{name}: ratio {r} at {t}");
        }
    }
}

#[test]
fn xi_bound_values() {
    assert_eq!(xi_bounds(1.0, 2.0, 3.0), (1.0, 1.0));
    assert_eq!(xi_bounds(2.0, 2.0, 3.0), (4.0, 8.0));
    assert_eq!(xi_bounds(0.5, 2.0, 3.0), (0.125, 0.25));
}

#[test]
fn scaling_sandwich() {
    for (name, law) in common::laws() {
        for rho in log_grid(1e-3, 1e3, 13) {
            for t in log_grid(1e-3, 1e3, 13) {
                let (lo, hi) = xi_bounds(t, law.ell(), law.m_idx());
                let (v, base) = (law.big_phi(rho * t), law.big_phi(rho));
                assert!(v >= lo * base * (1.0 - 1e-12), "{name}: rho {rho} t {t}");
                assert!(v <= hi * base * (1.0 + 1e-12), "{name}: rho {rho} t {t}");
            }
        }
    }
}

#[test]
fn conjugate_values() {
    assert_relative_eq!(conjugate(&GrowthLaw::power(2.0).unwrap(), 1.0).unwrap(), 0.5, max_relative = 1e-10);
    assert_relative_eq!(conjugate(&GrowthLaw::power(3.0).unwrap(), 1.0).unwrap(), 2.0 / 3.0, max_relative = 1e-10);
    assert_eq!(conjugate(&GrowthLaw::power_log(2.0).unwrap(), 0.0).unwrap(), 0.0);
}

#[test]
fn young_inequality_on_samples() {
    for (name, law) in common::laws() {
        for t in log_grid(1e-2, 1e2, 15) {
            let ct = conjugate(&law, t).unwrap();
            assert!(ct >= 0.0);
            for s in log_grid(1e-2, 1e2, 15) {
                assert!(t * s <= law.big_phi(s) + ct + 1e-10 * (1.0 + t * s), "{name}: t {t} s {s}");
            }
        }
    }
}

#[test]
fn sobolev_conjugate_exponents() {
    let sc = sobolev_conjugate(&GrowthLaw::power(2.0).unwrap(), 0.4, 1).unwrap();
    assert_relative_eq!(sc.ell_star, 10.0, max_relative = 1e-12);
    assert_relative_eq!(sc.m_star, 10.0, max_relative = 1e-12);
    let sc = sobolev_conjugate(&GrowthLaw::power(2.0).unwrap(), 0.25, 1).unwrap();
    assert_relative_eq!(sc.ell_star, 4.0, max_relative = 1e-12);
    let sc = sobolev_conjugate(&GrowthLaw::power_sum(2.0, 3.0).unwrap(), 0.2, 1).unwrap();
    assert_relative_eq!(sc.ell_star, 10.0 / 3.0, max_relative = 1e-12);
    assert_relative_eq!(sc.m_star, 7.5, max_relative = 1e-12);
}

#[test]
fn sobolev_conjugate_needs_subcritical_order() {
    let r = sobolev_conjugate(&GrowthLaw::power(2.0).unwrap(), 0.5, 1);
    assert!(matches!(r, Err(Error::CriticalExponentUndefined(_))));
}

#[test]
fn sobolev_conjugate_index_bounds() {
    let sc = sobolev_conjugate(&GrowthLaw::power_sum(2.0, 3.0).unwrap(), 0.2, 1).unwrap();
    let (lo, hi) = sc.verify_index_bounds(&log_grid(1e-3, 1e3, 25)).unwrap();
    assert!(lo >= sc.ell_star - 1e-6 && hi <= sc.m_star + 1e-6, "({lo}, {hi})");
}

#[test]
fn hypothesis_examples() {
    let power = GrowthLaw::power(2.0).unwrap();
    let rep = check_hypotheses(&power, 0.4, 1, 3.0, 4.0);
    assert!(rep.all_passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    assert_relative_eq!(rep.ell_star, 10.0, max_relative = 1e-12);

    let rep = check_hypotheses(&power, 0.4, 1, 3.0, 12.0);
    assert!(!rep.all_passed());

    let rep = check_hypotheses(&GrowthLaw::power_sum(2.0, 3.0).unwrap(), 0.4, 1, 3.5, 4.0);
    assert!(!rep.get("H1 balance").unwrap().passed);

    // Law-level conditions only: with m = 3 the (H1) chain needs q, p beyond
    // the one-dimensional critical exponent.
    let rep = check_hypotheses(&GrowthLaw::power_log(2.0).unwrap(), 0.2, 1, 3.5, 4.0);
    for name in ["phi1", "phi2", "phi3", "delta2", "phi4"] {
        assert!(rep.get(name).unwrap().passed, "{name}: {}", rep.get(name).unwrap().detail);
    }
}

#[test]
fn ordering_failure_names_the_chain() {
    let rep = check_hypotheses(&GrowthLaw::power(2.0).unwrap(), 0.4, 1, 4.0, 3.0);
    let failed: Vec<_> = rep.failures().collect();
    assert!(failed.iter().any(|c| c.detail.contains("m < q < p")), "{failed:?}");
}

#[test]
fn lemma_monotone_functions_increase() {
    let (q, p) = (3.0, 4.0);
    for (name, law) in common::laws() {
        let ts = log_grid(1e-4, 1e4, 200);
        let theta: Vec<f64> =
            ts.iter().map(|&t| ((2.0 - q) * law.phi(t) + law.phi_prime(t) * t) / t.powf(p - 2.0)).collect();
        let g: Vec<f64> = ts.iter().map(|&t| (law.phi(t) * t * t - q * law.big_phi(t)) / t.powf(p)).collect();
        for k in 1..ts.len() {
            assert!(theta[k] > theta[k - 1] - 1e-12, "{name}: theta at {}", ts[k]);
            assert!(g[k] > g[k - 1] - 1e-12, "{name}: G at {}", ts[k]);
        }
    }
}

#[test]
fn flux_curvature_sandwich() {
    for (name, law) in common::laws() {
        for t in log_grid(1e-4, 1e4, 200) {
            let slope = law.flux_slope(t);
            let f = law.flux(t);
            assert!((law.ell() - 1.0) * f <= t * slope * (1.0 + 1e-12), "{name} at {t}");
            assert!(t * slope <= (law.m_idx() - 1.0) * f * (1.0 + 1e-12), "{name} at {t}");
        }
    }
}

#[test]
fn custom_law_matches_power_sum_table() {
    let reference = GrowthLaw::power_sum(2.0, 3.0).unwrap();
    let t: Vec<f64> = log_grid(1e-3, 1e3, 400);
    let table = LawTable {
        phi: t.iter().map(|&x| reference.phi(x)).collect(),
        phi_prime: t.iter().map(|&x| reference.phi_prime(x)).collect(),
        t: t.clone(),
    };
    let law = GrowthLaw::custom(&table, None, None).unwrap();
    assert_eq!(law.kind(), LawKind::Custom);
    for x in [0.01, 0.3, 1.0, 7.0, 200.0] {
        assert!(common::rel_err(law.big_phi(x), reference.big_phi(x)) < 1e-4, "Phi at {x}");
        assert!(common::rel_err(law.phi(x), reference.phi(x)) < 1e-4, "phi at {x}");
    }
    assert!((law.ell() - 2.0).abs() < 0.05 && (law.m_idx() - 3.0).abs() < 0.05);
}
