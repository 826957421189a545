//! Named example symbols shipped with the library and the CLI.

use num_complex::Complex64;

use crate::affine::AffineSymbol;
use crate::dseries::DirichletPoly;
use crate::error::{domain, Result};
use crate::torus::{InnerSymbolParams, PolySymbol};

#[derive(Clone, Debug)]
pub enum FixtureSymbol {
    Affine(AffineSymbol),
    Poly(PolySymbol),
    Inner(InnerSymbolParams),
    /// `1/2 + alpha (1 - 2^{-s})/(1 + 2^{-s})`.
    PhiAlpha(f64),
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub symbol: FixtureSymbol,
}

impl Fixture {
    pub fn affine(&self) -> Option<&AffineSymbol> {
        match &self.symbol {
            FixtureSymbol::Affine(a) => Some(a),
            _ => None,
        }
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `c + r/(2 sqrt 2) (2^{-s} + 2i 4^{-s} + 8^{-s})`, which maps onto `D(c, r)`.
pub fn single_prime_cubic(c: Complex64, r: f64) -> Result<PolySymbol> {
    let k = r / (2.0 * std::f64::consts::SQRT_2);
    let poly = DirichletPoly::from_terms([(2, re(k)), (4, Complex64::new(0.0, 2.0 * k)), (8, re(k))])?;
    PolySymbol::new(c, r, poly)
}

/// Weights of the three annulus examples, as fractions of `r`.
pub const FIG1_WEIGHTS: [(&str, &[f64]); 3] = [
    ("fig1-a", &[0.75, 0.25]),
    ("fig1-b", &[0.5, 0.5]),
    ("fig1-c", &[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]),
];

/// Number of factors kept in the inner-function example.
pub const INNER_FACTORS: usize = 6;

pub fn inner_example() -> Result<InnerSymbolParams> {
    let lambdas: Vec<f64> = (1..=INNER_FACTORS).map(|j| 0.5f64.powi(j as i32)).collect();
    let thetas = vec![0.0; INNER_FACTORS];
    InnerSymbolParams::new(lambdas, thetas, re(2.0), 1.0)?.with_tail_mass(0.5f64.powi(INNER_FACTORS as i32))
}

/// Every shipped fixture.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = vec![Fixture {
        name: "example-7.1",
        description: "single prime, coefficients r(1, 2i, 1)/(2 sqrt 2) on 2^-s, 4^-s, 8^-s; c = 2, r = 1",
        symbol: FixtureSymbol::Poly(single_prime_cubic(re(2.0), 1.0).expect("valid fixture")),
    }];
    for (name, w) in FIG1_WEIGHTS {
        out.push(Fixture {
            name,
            description: "affine symbol 3/2 + sum w_j p_j^-s with r = 1",
            symbol: FixtureSymbol::Affine(AffineSymbol::new(re(1.5), w.to_vec()).expect("valid fixture")),
        });
    }
    out.push(Fixture {
        name: "example-7.3",
        description: "2 + (g - g(inf))/(1 - g(inf) g), g inner with lambda_j = 2^-j, theta_j = 0, six factors",
        symbol: FixtureSymbol::Inner(inner_example().expect("valid fixture")),
    });
    for (name, alpha) in [("phi-alpha-0.5", 0.5), ("phi-alpha-1", 1.0), ("phi-alpha-1.4", 1.4), ("phi-alpha-3", 3.0)] {
        out.push(Fixture {
            name,
            description: "1/2 + alpha (1 - 2^-s)/(1 + 2^-s)",
            symbol: FixtureSymbol::PhiAlpha(alpha),
        });
    }
    for (name, c, r) in [
        ("two-s-3/2", 1.5, 1.0),
        ("two-s-xi-0.25", 0.75, 0.25),
        ("two-s-xi-2", 2.5, 2.0),
        ("two-s-2-half", 2.0, 0.5),
    ] {
        out.push(Fixture {
            name,
            description: "c + r 2^-s",
            symbol: FixtureSymbol::Affine(AffineSymbol::new(re(c), vec![r]).expect("valid fixture")),
        });
    }
    out
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match fixtures().into_iter().find(|f| f.name == name) {
        Some(f) => Ok(f),
        None => domain(format!("unknown fixture {name}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::BoundarySymbol;

    #[test]
    fn cubic_stays_in_disc() {
        let phi = single_prime_cubic(re(2.0), 1.0).unwrap();
        assert_eq!(phi.coords(), 1);
        for i in 0..1000 {
            let th = std::f64::consts::TAU * i as f64 / 1000.0;
            let v = phi.boundary_value(&[Complex64::from_polar(1.0, th)]);
            let expect = ((th.cos().powi(2) + 1.0) / 2.0).sqrt();
            assert!(((v - re(2.0)).norm() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn names_unique() {
        let all = fixtures();
        for (i, a) in all.iter().enumerate() {
            assert!(all[i + 1..].iter().all(|b| b.name != a.name));
        }
        assert!(fixture("fig1-b").unwrap().affine().is_some());
        assert!(fixture("nope").is_err());
    }
}
