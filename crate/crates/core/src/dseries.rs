//! Finitely supported Dirichlet polynomials `f(s) = sum a_n n^{-s}`.
//!
//! Coefficients live in a sorted map so that iteration order, equality and
//! serialization are all deterministic. Zero coefficients (and coefficients
//! negligible relative to the largest one) are never stored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{H2Error, Result};
use crate::primes::{factor_over, first_primes};

/// Relative threshold below which coefficients are dropped.
pub const CANONICAL_REL_TOL: f64 = 1e-15;

/// Default cap on `|support|^k` in [`DirichletPoly::h2k_norm`].
pub const DEFAULT_SUPPORT_CAP: u128 = 1 << 24;

/// Largest Simpson panel count chosen automatically by [`DirichletPoly::carlson_mean`].
pub const CARLSON_MAX_STEPS: usize = 10_000_000;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct DirichletPoly {
    coeffs: BTreeMap<u64, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<(u64, f64, f64)>,
}

impl TryFrom<PolyRepr> for DirichletPoly {
    type Error = H2Error;

    fn try_from(repr: PolyRepr) -> Result<Self> {
        DirichletPoly::from_terms(repr.coeffs.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im))))
    }
}

impl From<DirichletPoly> for PolyRepr {
    fn from(f: DirichletPoly) -> Self {
        PolyRepr {
            coeffs: f.coeffs.into_iter().map(|(n, a)| (n, a.re, a.im)).collect(),
        }
    }
}

impl DirichletPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, Complex64::new(1.0, 0.0))
    }

    /// `a * n^{-s}`. Panics if `n == 0`.
    pub fn monomial(n: u64, a: Complex64) -> Self {
        assert!(n >= 1, "Dirichlet indices start at 1");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(n, a);
        Self::canonical(coeffs)
    }

    /// Builds a polynomial from `(n, a_n)` pairs; repeated indices are summed.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (n, a) in terms {
            if n == 0 {
                return Err(H2Error::Domain("Dirichlet index must be >= 1".into()));
            }
            *coeffs.entry(n).or_insert_with(Complex64::zero) += a;
        }
        Ok(Self::canonical(coeffs))
    }

    /// Real coefficients `a_1, a_2, ...` given densely.
    pub fn from_real_dense(values: &[f64]) -> Self {
        let terms = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u64 + 1, Complex64::new(v, 0.0)));
        Self::from_terms(terms).expect("dense indices start at 1")
    }

    fn canonical(mut coeffs: BTreeMap<u64, Complex64>) -> Self {
        let max = coeffs.values().map(|a| a.norm()).fold(0.0, f64::max);
        let cut = max * CANONICAL_REL_TOL;
        coeffs.retain(|_, a| a.norm() > cut && *a != Complex64::zero());
        Self { coeffs }
    }

    pub fn coeff(&self, n: u64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &a)| (n, a))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_index(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(1)
    }

    /// `sum |a_n|^2`, the squared Hilbert-space norm.
    pub fn h2_norm_sq(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&n, &b) in &other.coeffs {
            *coeffs.entry(n).or_insert_with(Complex64::zero) += b;
        }
        Self::canonical(coeffs)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::canonical(self.coeffs.iter().map(|(&n, &a)| (n, a * s)).collect())
    }

    /// Dirichlet convolution: the coefficient at `m` is `sum_{uv = m} a_u b_v`.
    ///
    /// Panics if an index product overflows `u64`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut acc: HashMap<u64, Complex64> = HashMap::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (&u, &a) in &self.coeffs {
            for (&v, &b) in &other.coeffs {
                let m = u.checked_mul(v).expect("Dirichlet index overflow in multiply");
                *acc.entry(m).or_insert_with(Complex64::zero) += a * b;
            }
        }
        Self::canonical(acc.into_iter().collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.multiply(self);
        }
        out
    }

    /// `f(s) = sum a_n n^{-s}`.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, &a)| a * (-s * (n as f64).ln()).exp())
            .sum()
    }

    /// `f^{(k)}(c) = sum a_n (-ln n)^k n^{-c}`.
    pub fn derivative_at(&self, k: u32, c: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, &a)| {
                let l = (n as f64).ln();
                a * (-l).powi(k as i32) * (-c * l).exp()
            })
            .sum()
    }

    /// Taylor coefficient `f^{(k)}(c) / k!`, accumulated without forming `k!`.
    pub fn taylor_coeff(&self, k: u32, c: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, &a)| {
                let l = (n as f64).ln();
                let mut t = 1.0;
                for j in 1..=k {
                    t *= -l / j as f64;
                }
                a * t * (-c * l).exp()
            })
            .sum()
    }

    /// Vertical-limit twist `sum a_n chi(n) n^{-s}`.
    pub fn twist(&self, chi: &Character) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (&n, &a) in &self.coeffs {
            coeffs.insert(n, a * chi.eval(n)?);
        }
        Ok(Self::canonical(coeffs))
    }

    /// Simpson approximation of `(1/2T) int_{-T}^{T} |f(it)|^2 dt`.
    ///
    /// `steps = None` picks `ceil(200 T max ln n)` panels, capped at
    /// [`CARLSON_MAX_STEPS`]. The panel count is rounded up to an even number.
    pub fn carlson_mean(&self, t_max: f64, steps: Option<usize>) -> Result<f64> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(H2Error::Domain(format!("T must be positive, got {t_max}")));
        }
        let max_log = (self.max_index() as f64).ln().max(1.0);
        let steps = match steps {
            Some(s) if s < 2 => return Err(H2Error::Domain("Simpson needs at least 2 panels".into())),
            Some(s) => s,
            None => ((200.0 * t_max * max_log).ceil() as usize).min(CARLSON_MAX_STEPS),
        };
        let steps = steps.max(2) + steps % 2;
        let terms: Vec<(f64, Complex64)> = self.coeffs.iter().map(|(&n, &a)| ((n as f64).ln(), a)).collect();
        let h = 2.0 * t_max / steps as f64;
        let value_at = |t: f64| -> f64 {
            terms
                .iter()
                .map(|&(l, a)| a * Complex64::from_polar(1.0, -t * l))
                .sum::<Complex64>()
                .norm_sqr()
        };
        let mut acc = value_at(-t_max) + value_at(t_max);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * value_at(-t_max + i as f64 * h);
        }
        Ok(acc * h / 3.0 / (2.0 * t_max))
    }

    /// `sum_{m != n} |a_m| |a_n| / |ln(m/n)|`; the Carlson mean over `[-T, T]`
    /// differs from the squared norm by at most this over `T` (plus quadrature error).
    pub fn carlson_error_constant(&self) -> f64 {
        let terms: Vec<(f64, f64)> = self.coeffs.iter().map(|(&n, a)| ((n as f64).ln(), a.norm())).collect();
        let mut k = 0.0;
        for (i, &(lm, am)) in terms.iter().enumerate() {
            for &(ln, an) in &terms[i + 1..] {
                k += 2.0 * am * an / (lm - ln).abs();
            }
        }
        k
    }

    /// `||f||_{H^{2k}}^{2k}`, computed as `||f^k||_{H^2}^2`.
    pub fn h2k_norm(&self, k: u32) -> Result<f64> {
        self.h2k_norm_with_cap(k, DEFAULT_SUPPORT_CAP)
    }

    pub fn h2k_norm_with_cap(&self, k: u32, cap: u128) -> Result<f64> {
        if k == 0 {
            return Err(H2Error::Domain("h2k_norm needs k >= 1".into()));
        }
        let required = (self.coeffs.len() as u128).checked_pow(k).unwrap_or(u128::MAX);
        if required > cap {
            return Err(H2Error::SupportCap { required, cap });
        }
        Ok(self.pow(k).h2_norm_sq())
    }
}

impl fmt::Display for DirichletPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(n, a)| format!("({}{:+}i)*{}^-s", a.re, a.im, n))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A character of the infinite torus restricted to the first `d` primes.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    values: Vec<Complex64>,
    primes: Vec<u64>,
}

impl Character {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| (v.norm() - 1.0).abs() > 1e-12) {
            return Err(H2Error::Domain(format!("character value {v} is not unimodular")));
        }
        let primes = first_primes(values.len());
        Ok(Self { values, primes })
    }

    pub fn from_angles(thetas: &[f64]) -> Self {
        let values = thetas.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        Self::new(values).expect("polar values are unimodular")
    }

    pub fn trivial(d: usize) -> Self {
        Self::from_angles(&vec![0.0; d])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `chi(n) = prod chi_j^{v_j}` for `n = prod p_j^{v_j}`.
    pub fn eval(&self, n: u64) -> Result<Complex64> {
        let exps = factor_over(n, &self.primes).ok_or(H2Error::PrimeOutOfRange { n, d: self.dim() })?;
        Ok(exps
            .iter()
            .zip(&self.values)
            .map(|(&e, &v)| v.powu(e))
            .product())
    }
}

/// Dirichlet polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPoly {
    coeffs: BTreeMap<u64, BigRational>,
}

impl RationalPoly {
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let mut coeffs: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (n, a) in terms {
            assert!(n >= 1, "Dirichlet indices start at 1");
            *coeffs.entry(n).or_insert_with(BigRational::zero) += a;
        }
        coeffs.retain(|_, a| !a.is_zero());
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self::from_terms([(1, BigRational::one())])
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (&u, a) in &self.coeffs {
            for (&v, b) in &other.coeffs {
                let m = u.checked_mul(v).expect("Dirichlet index overflow in multiply");
                *acc.entry(m).or_insert_with(BigRational::zero) += a * b;
            }
        }
        acc.retain(|_, a| !a.is_zero());
        Self { coeffs: acc }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.multiply(self))
    }

    pub fn h2_norm_sq(&self) -> BigRational {
        self.coeffs.values().map(|a| a * a).sum()
    }

    pub fn coeff(&self, n: u64) -> BigRational {
        self.coeffs.get(&n).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Convenience for building exact rationals in fixtures and tests.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn poly(terms: &[(u64, f64)]) -> DirichletPoly {
        DirichletPoly::from_terms(terms.iter().map(|&(n, a)| (n, c(a)))).unwrap()
    }

    /// Independent convolution oracle: loop over all index pairs up to the product bound.
    fn brute_convolution(f: &DirichletPoly, g: &DirichletPoly) -> BTreeMap<u64, Complex64> {
        let bound = f.max_index() * g.max_index();
        let mut out = BTreeMap::new();
        for m in 1..=bound {
            let mut s = Complex64::zero();
            for u in 1..=m {
                if m % u == 0 {
                    s += f.coeff(u) * g.coeff(m / u);
                }
            }
            if s != Complex64::zero() {
                out.insert(m, s);
            }
        }
        out
    }

    #[test]
    fn norms() {
        assert_eq!(DirichletPoly::zero().h2_norm_sq(), 0.0);
        assert_eq!(poly(&[(2, 1.0), (3, 1.0)]).h2_norm_sq(), 2.0);
        assert_eq!(poly(&[(2, 3.0), (3, 4.0)]).h2_norm_sq(), 25.0);
    }

    #[test]
    fn multiplication() {
        let two = poly(&[(2, 1.0)]);
        let three = poly(&[(3, 1.0)]);
        assert_eq!(two.multiply(&three), poly(&[(6, 1.0)]));
        let f = poly(&[(2, 1.0), (3, 1.0)]);
        let sq = f.multiply(&f);
        assert_eq!(sq, poly(&[(4, 1.0), (6, 2.0), (9, 1.0)]));
        assert_eq!(sq.terms().collect::<BTreeMap<_, _>>(), brute_convolution(&f, &f));
        assert_eq!(f.multiply(&DirichletPoly::one()), f);
    }

    #[test]
    fn evaluation() {
        let two = poly(&[(2, 1.0)]);
        assert!((two.evaluate(c(1.0)) - c(0.5)).norm() < 1e-15);
        assert!((poly(&[(1, 1.0), (2, 1.0)]).evaluate(c(0.0)) - c(2.0)).norm() < 1e-15);
        let t = 2.0 * PI / 2f64.ln();
        let f = poly(&[(2, 1.0), (3, 1.0)]);
        let expected = c(1.0) + Complex64::from_polar(1.0, -t * 3f64.ln());
        assert!((f.evaluate(Complex64::new(0.0, t)) - expected).norm() < 1e-12);
    }

    #[test]
    fn derivatives() {
        assert_eq!(DirichletPoly::one().derivative_at(1, Complex64::new(0.3, 2.0)), Complex64::zero());
        let d = poly(&[(2, 1.0)]).derivative_at(1, c(2.0));
        assert!((d.re + 2f64.ln() / 4.0).abs() < 1e-15);
        let v = poly(&[(1, 1.0), (2, 1.0), (3, 1.0)]).derivative_at(0, c(2.0));
        assert!((v.re - 49.0 / 36.0).abs() < 1e-15);
        let f = poly(&[(2, 0.5), (7, -1.5)]);
        let z = Complex64::new(1.2, -0.4);
        let mut fact = 1.0;
        for k in 0..10u32 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((f.taylor_coeff(k, z) - f.derivative_at(k, z) / fact).norm() < 1e-14);
        }
    }

    #[test]
    fn twisting() {
        let chi = Character::new(vec![c(-1.0)]).unwrap();
        assert_eq!(poly(&[(2, 1.0)]).twist(&chi).unwrap(), poly(&[(2, -1.0)]));
        let i = Complex64::new(0.0, 1.0);
        let chi = Character::new(vec![i, i]).unwrap();
        let t = poly(&[(6, 1.0)]).twist(&chi).unwrap();
        assert!((t.coeff(6) - c(-1.0)).norm() < 1e-15);
        let f = poly(&[(4, 0.2), (9, -3.0), (12, 1.0)]);
        assert_eq!(f.twist(&Character::trivial(3)).unwrap(), f);
        assert!(matches!(
            poly(&[(5, 1.0)]).twist(&Character::trivial(2)),
            Err(H2Error::PrimeOutOfRange { n: 5, d: 2 })
        ));
        assert!(Character::new(vec![c(0.5)]).is_err());
    }

    #[test]
    fn carlson() {
        assert!((DirichletPoly::one().carlson_mean(7.0, None).unwrap() - 1.0).abs() < 1e-12);
        assert!((poly(&[(2, 1.0)]).carlson_mean(3.0, None).unwrap() - 1.0).abs() < 1e-12);
        let f = poly(&[(2, 1.0), (3, 1.0)]);
        assert!((f.carlson_mean(1e4, None).unwrap() - 2.0).abs() < 1e-3);
        assert!(f.carlson_mean(0.0, None).is_err());
        assert!(f.carlson_mean(1.0, Some(1)).is_err());
    }

    #[test]
    fn carlson_rate() {
        let f = poly(&[(1, 0.5), (2, 1.0), (3, -0.7), (5, 0.3)]);
        let k = f.carlson_error_constant();
        for t in [1e2, 1e3, 1e4] {
            let err = (f.carlson_mean(t, None).unwrap() - f.h2_norm_sq()).abs();
            assert!(err <= k / t + 1e-9, "T={t}: err {err} > {}", k / t);
        }
    }

    #[test]
    fn power_norms() {
        for k in 1..6 {
            let v = poly(&[(2, 0.7)]).h2k_norm(k).unwrap();
            assert!((v - 0.7f64.powi(2 * k as i32)).abs() < 1e-15);
        }
        assert_eq!(poly(&[(2, 1.0), (3, 1.0)]).h2k_norm(2).unwrap(), 6.0);
        assert_eq!(poly(&[(2, 1.0), (3, 1.0), (5, 1.0)]).h2k_norm(1).unwrap(), 3.0);
        assert!(matches!(
            poly(&[(2, 1.0), (3, 1.0)]).h2k_norm_with_cap(5, 16),
            Err(H2Error::SupportCap { required: 32, cap: 16 })
        ));
    }

    #[test]
    fn power_mean_monotone() {
        let f = poly(&[(2, 0.5), (3, 0.3), (5, 0.2)]);
        let r: f64 = 1.0;
        let mut prev = f64::INFINITY;
        for k in 1..=8 {
            let v = f.h2k_norm(k).unwrap() / r.powi(2 * k as i32);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn canonical_form_drops_noise() {
        let f = DirichletPoly::from_terms([(2, c(1.0)), (3, c(1e-17)), (5, c(0.0))]).unwrap();
        assert_eq!(f.support_len(), 1);
        assert!(DirichletPoly::from_terms([(0, c(1.0))]).is_err());
    }

    #[test]
    fn json_layout() {
        let f = DirichletPoly::from_terms([(3, Complex64::new(0.5, -1.0)), (1, c(2.0))]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"coeffs":[[1,2.0,0.0],[3,0.5,-1.0]]}"#);
        let back: DirichletPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<DirichletPoly>(r#"{"coeffs":[[0,1.0,0.0]]}"#).is_err());
    }

    #[test]
    fn exact_squares() {
        let f = RationalPoly::from_terms([(2, ratio(1, 2)), (3, ratio(1, 2))]);
        let sq = f.pow(2);
        assert_eq!(sq.coeff(6), ratio(1, 2));
        assert_eq!(sq.h2_norm_sq(), ratio(3, 8));
    }
}
