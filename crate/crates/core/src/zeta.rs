//! The Riemann zeta function and its relatives on the real half-line `sigma > 1`.
//!
//! Values come from Euler–Maclaurin summation with a cut at `N = 100` and eight
//! Bernoulli corrections. Derivatives are obtained by differentiating every
//! Euler–Maclaurin term exactly in `sigma`. A slow direct-summation enclosure
//! ([`zeta_deriv_enclosure`]) is kept alongside as an auditable certificate.

use std::sync::OnceLock;

use crate::error::{domain, H2Error, Result};
use crate::primes::is_prime;

/// Direct-summation cut for Euler–Maclaurin.
pub const EM_CUT: u64 = 100;

/// `B_{2j} / (2j)!` for `j = 1..=8`.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
];

/// Highest derivative order supported by [`zeta_deriv`].
pub const MAX_DERIV: u32 = 12;

/// Above this `sigma` every term beyond `n = EM_CUT` is below `1e-200` and is dropped.
const LARGE_SIGMA: f64 = 200.0;

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients of `sigma (sigma+1) ... (sigma+2j-2)`, lowest degree first.
fn rising_poly(j: usize) -> Vec<f64> {
    let mut p = vec![1.0];
    for i in 0..(2 * j - 1) {
        let mut next = vec![0.0; p.len() + 1];
        for (d, &a) in p.iter().enumerate() {
            next[d] += a * i as f64;
            next[d + 1] += a;
        }
        p = next;
    }
    p
}

fn poly_deriv_eval(p: &[f64], order: u32, x: f64) -> f64 {
    let mut q = p.to_vec();
    for _ in 0..order {
        if q.len() <= 1 {
            return 0.0;
        }
        q = q.iter().enumerate().skip(1).map(|(d, &a)| a * d as f64).collect();
    }
    q.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// `d^k/dsigma^k sum_{n >= m} n^{-sigma}` via Euler–Maclaurin.
fn tail_derivative(k: u32, sigma: f64, m: u64) -> f64 {
    tail_derivative_eps(k, sigma, sigma - 1.0, m)
}

/// As [`tail_derivative`], with `eps = sigma - 1` supplied separately so that it keeps
/// full relative precision near the pole.
fn tail_derivative_eps(k: u32, sigma: f64, eps: f64, m: u64) -> f64 {
    let m = m.max(1);
    let cut = m.max(EM_CUT);
    let direct_end = if sigma >= LARGE_SIGMA { m.max(EM_CUT) + EM_CUT } else { cut };
    let mut sum = Neumaier::default();
    for n in (m..direct_end).rev() {
        let l = (n as f64).ln();
        sum.add((-l).powi(k as i32) * (n as f64).powf(-sigma));
    }
    if sigma >= LARGE_SIGMA {
        return sum.total();
    }
    let big_m = cut as f64;
    let l = big_m.ln();
    let base = big_m.powf(-sigma);

    // M^{1-sigma} / (sigma - 1)
    let mut a = 0.0;
    for i in 0..=k {
        let inv_deriv = if i % 2 == 0 { 1.0 } else { -1.0 } * (1..=i).map(f64::from).product::<f64>()
            / eps.powi(i as i32 + 1);
        a += binomial(k, i) * (-l).powi((k - i) as i32) * inv_deriv;
    }
    sum.add(a * big_m * base);

    // M^{-sigma} / 2
    sum.add(0.5 * (-l).powi(k as i32) * base);

    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let p = rising_poly(j + 1);
        let power = base * big_m.powi(-(2 * (j as i32 + 1) - 1));
        let mut d = 0.0;
        for i in 0..=k {
            d += binomial(k, i) * poly_deriv_eval(&p, i, sigma) * (-l).powi((k - i) as i32);
        }
        sum.add(b * d * power);
    }
    sum.total()
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_nan() || sigma <= 1.0 {
        return domain(format!("sigma must exceed 1, got {sigma}"));
    }
    Ok(())
}

/// `zeta(sigma)` for real `sigma > 1`.
pub fn zeta(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(tail_derivative(0, sigma, 1))
}

/// `zeta(1 + eps)` for `eps > 0`, accurate in relative terms even for tiny `eps`.
pub fn zeta_1p(eps: f64) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return domain(format!("eps must be positive, got {eps}"));
    }
    Ok(tail_derivative_eps(0, 1.0 + eps, eps, 1))
}

/// `sum_{n >= m} n^{-sigma}`, the Hurwitz tail.
pub fn zeta_tail(sigma: f64, m: u64) -> Result<f64> {
    check_sigma(sigma)?;
    if m == 0 {
        return domain("tail start must be >= 1");
    }
    Ok(tail_derivative(0, sigma, m))
}

/// `(-1)^k zeta^{(k)}(sigma) = sum (ln n)^k n^{-sigma}`.
pub fn zeta_deriv(k: u32, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if k > MAX_DERIV {
        return domain(format!("derivative order {k} above {MAX_DERIV}"));
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * tail_derivative(k, sigma, 1))
}

/// Certified enclosure of `sum_{n>=1} (ln n)^k n^{-sigma}` from direct summation of
/// `n < n_terms` and a trapezoid-corrected integral tail.
///
/// The enclosure is valid once `(ln x)^k x^{-sigma}` is convex with decreasing
/// second derivative on `[n_terms, inf)`; this is checked on the polynomial
/// factors and reported as an error otherwise.
pub fn zeta_deriv_enclosure(k: u32, sigma: f64, n_terms: u64) -> Result<(f64, f64)> {
    check_sigma(sigma)?;
    if k > MAX_DERIV {
        return domain(format!("derivative order {k} above {MAX_DERIV}"));
    }
    let big_n = n_terms as f64;
    let u = big_n.ln();
    // f(x) = x^{-j} Q_j(u) e^{-sigma u}; Q_{j+1} = Q_j' - (sigma + j) Q_j.
    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut cur = vec![0.0; k as usize + 1];
    cur[k as usize] = 1.0;
    for j in 0..4 {
        q.push(cur.clone());
        let mut next: Vec<f64> = cur.iter().map(|&a| -(sigma + j as f64) * a).collect();
        for d in 1..cur.len() {
            next[d - 1] += cur[d] * d as f64;
        }
        cur = next;
    }
    let eval = |p: &[f64]| p.iter().rev().fold(0.0, |acc, &a| acc * u + a);
    let e = big_n.powf(-sigma);
    let f0 = eval(&q[0]) * e;
    let f1 = eval(&q[1]) * e / big_n;
    let f2 = eval(&q[2]) * e / (big_n * big_n);
    let f3 = eval(&q[3]) * e / (big_n * big_n * big_n);
    if !(f2 >= 0.0 && f3 <= 0.0) {
        return Err(H2Error::Precondition(format!(
            "n_terms = {n_terms} too small for a certified tail at k = {k}, sigma = {sigma}"
        )));
    }
    let mut sum = Neumaier::default();
    for n in (2..n_terms).rev() {
        let l = (n as f64).ln();
        sum.add(l.powi(k as i32) * (n as f64).powf(-sigma));
    }
    if k == 0 {
        sum.add(1.0);
    }
    // int_N^inf u^k e^{-(sigma-1)u} du = k! e^{-a u0} sum_i u0^i / (i! a^{k-i+1}), a = sigma - 1.
    let a = sigma - 1.0;
    let mut integral = 0.0;
    let mut term = 1.0 / a.powi(k as i32 + 1);
    let mut k_fact = 1.0;
    for i in 1..=k {
        k_fact *= i as f64;
    }
    for i in 0..=k {
        if i > 0 {
            term *= u * a / i as f64;
        }
        integral += term;
    }
    integral *= k_fact * (-a * u).exp();
    sum.add(integral + 0.5 * f0);
    let lo = sum.total();
    let hi = lo + (f2 - f1) / 12.0;
    Ok((lo, hi))
}

/// Bracket for the k-th derivative of zeta.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sandwich {
    pub lower: f64,
    pub mid: f64,
    pub upper: f64,
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        self.lower <= self.mid && self.mid <= self.upper
    }
}

/// `k! (zeta - 1) / (sigma-1)^k <= (-1)^k zeta^{(k)} <= k! zeta / (sigma-1)^k`.
pub fn dkzeta_sandwich(k: u32, sigma: f64) -> Result<Sandwich> {
    if k == 0 {
        return domain("sandwich order must be >= 1");
    }
    let z = zeta(sigma)?;
    let mid = zeta_deriv(k, sigma)?;
    let scale = (1..=k).map(f64::from).product::<f64>() / (sigma - 1.0).powi(k as i32);
    Ok(Sandwich {
        lower: scale * (z - 1.0),
        mid,
        upper: scale * z,
    })
}

/// Left and right Riemann-sum functionals `(U, L)` at partition size `m`:
/// `U = m^{sigma-1} sum_{n>=m} n^{-sigma}`, `L = m^{sigma-1} sum_{n>=m+1} n^{-sigma}`.
pub fn riemann_sum_bounds(sigma: f64, m: u64) -> Result<(f64, f64)> {
    check_sigma(sigma)?;
    if m == 0 {
        return domain("m must be >= 1");
    }
    let scale = (m as f64).powf(sigma - 1.0);
    Ok((scale * zeta_tail(sigma, m)?, scale * zeta_tail(sigma, m + 1)?))
}

/// Index sets used for partial reproducing kernels.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaSpec {
    /// Integers whose prime factors all lie in the list.
    PrimeSemigroup(Vec<u64>),
    /// `{1} ∪ {n >= m}`.
    CofiniteTail(u64),
    /// `{p^j : j >= 0}`.
    GeometricPowers(u64),
    FullIntegers,
}

impl LambdaSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            LambdaSpec::PrimeSemigroup(ps) => {
                for (i, &p) in ps.iter().enumerate() {
                    if !is_prime(p) {
                        return domain(format!("{p} is not prime"));
                    }
                    if ps[..i].contains(&p) {
                        return domain(format!("prime {p} listed twice"));
                    }
                }
                Ok(())
            }
            LambdaSpec::CofiniteTail(m) if *m < 2 => domain("cofinite tail needs m >= 2"),
            LambdaSpec::GeometricPowers(p) if !is_prime(*p) => domain(format!("{p} is not prime")),
            _ => Ok(()),
        }
    }

    /// Abscissa of absolute convergence of `zeta_Lambda`.
    pub fn abscissa(&self) -> f64 {
        match self {
            LambdaSpec::FullIntegers | LambdaSpec::CofiniteTail(_) => 1.0,
            LambdaSpec::GeometricPowers(_) | LambdaSpec::PrimeSemigroup(_) => 0.0,
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            LambdaSpec::FullIntegers => n >= 1,
            LambdaSpec::CofiniteTail(m) => n == 1 || n >= *m,
            LambdaSpec::GeometricPowers(p) => {
                let mut x = n;
                while x > 1 && x % p == 0 {
                    x /= p;
                }
                x == 1
            }
            LambdaSpec::PrimeSemigroup(ps) => crate::primes::factor_over(n, ps).is_some(),
        }
    }

    pub fn members_up_to(&self, bound: u64) -> Vec<u64> {
        (1..=bound).filter(|&n| self.contains(n)).collect()
    }
}

/// `zeta_Lambda(sigma) = sum_{n in Lambda} n^{-sigma}` for `sigma` above the abscissa.
pub fn zeta_lambda(lambda: &LambdaSpec, sigma: f64) -> Result<f64> {
    lambda.validate()?;
    if sigma.is_nan() || sigma <= lambda.abscissa() {
        return domain(format!("sigma = {sigma} at or below the abscissa {}", lambda.abscissa()));
    }
    Ok(match lambda {
        LambdaSpec::FullIntegers => zeta(sigma)?,
        LambdaSpec::CofiniteTail(m) => 1.0 + zeta_tail(sigma, *m)?,
        LambdaSpec::GeometricPowers(p) => 1.0 / (1.0 - (*p as f64).powf(-sigma)),
        LambdaSpec::PrimeSemigroup(ps) => ps.iter().map(|&p| 1.0 / (1.0 - (p as f64).powf(-sigma))).product(),
    })
}

/// The positive root of `alpha zeta(1 + alpha) = 2`, by bisection on `[1, 2]`.
pub fn alpha0() -> f64 {
    static ROOT: OnceLock<f64> = OnceLock::new();
    *ROOT.get_or_init(|| {
        let g = |a: f64| a * zeta(1.0 + a).expect("1 + a > 1") - 2.0;
        let (mut lo, mut hi) = (1.0, 2.0);
        assert!(g(lo) < 0.0 && g(hi) > 0.0, "alpha0 bracket lost");
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// Compensated summation.
#[derive(Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn known_values() {
        let pi = std::f64::consts::PI;
        assert!((zeta(2.0).unwrap() - pi * pi / 6.0).abs() < 1e-14);
        assert!((zeta(4.0).unwrap() - pi.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(2.0).unwrap() - 1.644_934_066_848).abs() < 1e-12);
        assert!((zeta(4.0).unwrap() - 1.082_323_233_711).abs() < 1e-12);
        let near = zeta(1.001).unwrap();
        assert!((near - 1000.5772).abs() < 1e-3);
        assert!((near - (1000.0 + EULER_GAMMA)).abs() < 1e-3);
        assert!((zeta(300.0).unwrap() - 1.0).abs() < 1e-15);
        let eps = 1e-10;
        assert!((zeta_1p(eps).unwrap() * eps - (1.0 + EULER_GAMMA * eps)).abs() < 1e-15);
        assert!((zeta_1p(1.0).unwrap() - zeta(2.0).unwrap()).abs() < 1e-15);
        assert!(zeta_1p(0.0).is_err());
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
    }

    #[test]
    fn derivative_values() {
        assert_eq!(zeta_deriv(0, 2.0).unwrap(), zeta(2.0).unwrap());
        assert!((zeta_deriv(1, 2.0).unwrap() - 0.937_548_254_3).abs() < 1e-9);
        assert!(zeta_deriv(13, 2.0).is_err());
        assert!(zeta_deriv(1, 1.0).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let s = dkzeta_sandwich(1, 2.0).unwrap();
        assert!((s.lower - 0.644_934_066_848).abs() < 1e-11);
        assert!((s.upper - 1.644_934_066_848).abs() < 1e-11);
        assert!(s.holds());
        let s = dkzeta_sandwich(1, 10.0).unwrap();
        assert!(((s.upper - s.lower) - 1.0 / 9.0).abs() < 1e-15);
        assert!(s.holds());
        assert!(dkzeta_sandwich(3, 2.5).unwrap().holds());
        assert!(dkzeta_sandwich(0, 2.0).is_err());
    }

    #[test]
    fn riemann_sums() {
        let z = zeta(2.0).unwrap();
        let (u, l) = riemann_sum_bounds(2.0, 1).unwrap();
        assert!((u - z).abs() < 1e-15 && (l - (z - 1.0)).abs() < 1e-14);
        let (u, l) = riemann_sum_bounds(2.0, 2).unwrap();
        assert!(u <= z && l >= z - 1.0);
        let mut prev = riemann_sum_bounds(3.0, 1).unwrap();
        for m in 2..=50 {
            let cur = riemann_sum_bounds(3.0, m).unwrap();
            assert!(cur.0 <= prev.0 && cur.1 >= prev.1, "m = {m}");
            prev = cur;
        }
    }

    #[test]
    fn lambda_values() {
        let v = zeta_lambda(&LambdaSpec::GeometricPowers(2), 2.0).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-15);
        let v = zeta_lambda(&LambdaSpec::CofiniteTail(3), 2.0).unwrap();
        assert!((v - (zeta(2.0).unwrap() - 0.25)).abs() < 1e-14);
        let v = zeta_lambda(&LambdaSpec::PrimeSemigroup(vec![2, 3]), 2.0).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
        // direct sum over 2^a 3^b <= 1e6
        let mut direct = 0.0;
        let mut a = 1u64;
        while a <= 1_000_000 {
            let mut n = a;
            while n <= 1_000_000 {
                direct += 1.0 / (n as f64 * n as f64);
                n *= 3;
            }
            a *= 2;
        }
        assert!((direct - 1.5).abs() < 1e-5);
        assert!(zeta_lambda(&LambdaSpec::FullIntegers, 1.0).is_err());
        assert!(zeta_lambda(&LambdaSpec::GeometricPowers(2), 0.1).is_ok());
        assert!(zeta_lambda(&LambdaSpec::PrimeSemigroup(vec![2, 2]), 2.0).is_err());
        assert!(zeta_lambda(&LambdaSpec::GeometricPowers(4), 2.0).is_err());
        assert_eq!(LambdaSpec::CofiniteTail(4).members_up_to(6), vec![1, 4, 5, 6]);
        assert_eq!(LambdaSpec::GeometricPowers(3).members_up_to(30), vec![1, 3, 9, 27]);
    }

    #[test]
    fn alpha_root() {
        let a = alpha0();
        assert!(a > 1.45 && a < 1.55, "alpha0 = {a}");
        assert!((a * zeta(1.0 + a).unwrap() - 2.0).abs() < 1e-9);
        assert!(zeta(2.0).unwrap() < 2.0);
    }
}
