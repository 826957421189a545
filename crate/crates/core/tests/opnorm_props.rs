use dirichlet_h2::affine::{xi_from, AffineSymbol};
use dirichlet_h2::fixtures::fixture;
use dirichlet_h2::opnorm::{
    adjoint_bound_2s, bound_suite, build_matrix, kernel_quotient, kernel_sup_sq, kernel_w_grid, sigma_max_sq,
    OperatorSymbol, POWER_TOL,
};
use dirichlet_h2::zeta::zeta;
use num_complex::Complex64;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn affine(name: &str) -> AffineSymbol {
    fixture(name).unwrap().affine().cloned().unwrap()
}

#[test]
fn matrix_estimate_grows_with_truncation() {
    let cases: Vec<(OperatorSymbol, [(usize, usize); 4])> = vec![
        (affine("two-s-3/2").into(), [(8, 5), (16, 10), (32, 20), (64, 40)]),
        (affine("fig1-a").into(), [(8, 4), (16, 8), (32, 16), (64, 32)]),
        (OperatorSymbol::Cayley { alpha: 1.0 }, [(8, 5), (16, 10), (32, 20), (64, 40)]),
    ];
    for (sym, levels) in cases {
        let values: Vec<f64> = levels
            .iter()
            .map(|&(n, k)| sigma_max_sq(&build_matrix(&sym, n, k).unwrap(), POWER_TOL).unwrap())
            .collect();
        for w in values.windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "{values:?}");
        }
    }
}

#[test]
fn kernel_sup_dominates_adjoint_bound() {
    for name in ["two-s-3/2", "two-s-2-half", "two-s-xi-2", "fig1-a", "fig1-b", "fig1-c"] {
        let phi = affine(name);
        let rep = bound_suite(&phi).unwrap();
        let s = rep.get("kernel_S_lower").unwrap().value;
        let s_star = rep.get("adjoint_lower").unwrap().value;
        // defect of the truncated kernel at the maximising w
        let t = build_matrix(&phi.clone().into(), 64, 20).unwrap();
        let (w, _) = kernel_sup_sq(&t, &kernel_w_grid()).unwrap();
        let q = kernel_quotient(&phi.into(), re(w), 64, 20).unwrap();
        let slack = q.defect.unwrap() + q.input_defect;
        assert!(s >= s_star - slack, "{name}: S^2 {s} vs S*^2 {s_star} (slack {slack})");
    }
}

#[test]
fn every_lower_estimate_beats_point_evaluation_for_single_prime_discs() {
    for (c, r) in [(1.5, 1.0), (2.0, 0.5), (0.75, 0.25), (3.0, 2.5)] {
        let rep = bound_suite(&AffineSymbol::new(re(c), vec![r]).unwrap()).unwrap();
        let gl = zeta(2.0 * c).unwrap();
        assert!((rep.get("genlower").unwrap().value - gl).abs() < 1e-12);
        assert!(rep.best_lower() > gl, "c={c} r={r}");
        assert!(rep.consistent());
    }
}

#[test]
fn adjoint_bound_at_least_inverse_xi() {
    for i in 0..25 {
        let r = 0.02 + 0.2 * i as f64;
        for ratio in [1.0, 1.001, 1.3, 4.0] {
            let c = 0.5 + ratio * r;
            let v = adjoint_bound_2s(re(c), r).unwrap();
            assert!(v >= 1.0 / xi_from(c, r).unwrap() * (1.0 - 1e-12), "c={c} r={r}");
        }
    }
}

#[test]
fn adjoint_bound_equals_inverse_xi_on_the_diagonal() {
    for xi in [0.05, 0.1, 0.2, 0.25] {
        let v = adjoint_bound_2s(re(0.5 + xi), xi).unwrap();
        assert!((v - 1.0 / xi).abs() < 1e-9, "xi={xi}: {v}");
    }
    // beyond 1/4 the interior of the sup can win; it never drops below 1/xi
    for xi in [0.3, 0.5, 1.0] {
        assert!(adjoint_bound_2s(re(0.5 + xi), xi).unwrap() >= 1.0 / xi);
    }
}

#[test]
fn cayley_kernel_quotients_grow_with_truncation() {
    // the truncated quotients creep up towards 2/alpha; they never exceed it
    let sym = OperatorSymbol::Cayley { alpha: 1.0 };
    let grid = kernel_w_grid();
    let mut prev = 0.0;
    for (n, k) in [(8, 5), (16, 10), (32, 20), (64, 40)] {
        let (_, q) = kernel_sup_sq(&build_matrix(&sym, n, k).unwrap(), &grid).unwrap();
        assert!(q >= prev - 1e-12 && q <= 2.0 + 1e-9, "{q}");
        prev = q;
    }
    assert!(prev > 1.5, "{prev}");
}
