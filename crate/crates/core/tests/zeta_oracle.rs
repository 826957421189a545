use dirichlet_h2::zeta::{dkzeta_sandwich, zeta, zeta_deriv, zeta_deriv_enclosure};
use proptest::prelude::*;

#[test]
fn zeta_matches_direct_enclosure() {
    for &sigma in &[1.1, 1.5, 2.0, 3.0, 7.5] {
        let (lo, hi) = zeta_deriv_enclosure(0, sigma, 1_000_000).unwrap();
        let v = zeta(sigma).unwrap();
        let err = if v < lo { lo - v } else if v > hi { v - hi } else { 0.0 };
        println!("sigma={sigma} v={v} lo={lo} hi={hi} w={}", hi - lo);
        assert!(err <= 1e-12, "sigma = {sigma}: {v} vs [{lo}, {hi}]");
    }
}

#[test]
fn derivatives_match_direct_enclosure() {
    for k in 1..=12u32 {
        for &sigma in &[1.1, 1.5, 2.0, 4.0] {
            let (lo, hi) = match zeta_deriv_enclosure(k, sigma, 1_000_000) {
                Ok(b) => b,
                Err(_) => continue,
            };
            let v = zeta_deriv(k, sigma).unwrap();
            let err = if v < lo { lo - v } else if v > hi { v - hi } else { 0.0 };
            let tol = 1e-10 * v.abs().max(1.0);
            println!("k={k} sigma={sigma} v={v:e} err={err:e} width={:e}", hi - lo);
            assert!(err <= tol, "k = {k}, sigma = {sigma}: {v} vs [{lo}, {hi}]");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn sandwich_holds(k in 1u32..=12, sigma in 1.01f64..10.0) {
        let s = dkzeta_sandwich(k, sigma).unwrap();
        prop_assert!(s.lower <= s.mid * (1.0 + 1e-12) && s.mid <= s.upper * (1.0 + 1e-12), "{s:?}");
        let width = s.upper - s.lower;
        let expect = (1..=k).map(f64::from).product::<f64>() / (sigma - 1.0).powi(k as i32);
        prop_assert!((width - expect).abs() <= 1e-9 * expect);
    }
}
