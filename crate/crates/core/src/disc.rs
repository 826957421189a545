//! The Hardy space of the unit disc: truncated composition, the operator of `psi(z) = z/(2 - z)`,
//! Möbius symbols and the subordination estimates they satisfy.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, H2Error, Result};

/// Boundary points used when checking that a power series maps the disc into itself.
pub const SELF_MAP_SAMPLES: usize = 4096;
pub const SELF_MAP_TOL: f64 = 1e-9;
pub const LITTLEWOOD_TOL: f64 = 1e-9;
pub const SHAPIRO_TOL: f64 = 1e-6;

/// `sum_{k <= N} a_k z^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("power series needs at least one coefficient");
        }
        if coeffs.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return domain("coefficients must be finite");
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// `z`.
    pub fn identity() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    /// Degree-`n` truncation of `z/(2 - z)`.
    pub fn psi(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for (j, a) in coeffs.iter_mut().enumerate().skip(1) {
            *a = Complex64::new(0.5f64.powi(j as i32), 0.0);
        }
        Self { coeffs }
    }

    /// Degree-`n` truncation of `1/(1 - q z)`.
    pub fn geometric(q: Complex64, n: usize) -> Self {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut a = Complex64::new(1.0, 0.0);
        for _ in 0..=n {
            coeffs.push(a);
            a *= q;
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn at_zero(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    fn mul_truncated(&self, other: &Self, n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (k, &b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + k] += a * b;
            }
        }
        out
    }

    /// Largest `|phi|` over equally spaced boundary points.
    pub fn sampled_sup(&self, samples: usize) -> f64 {
        (0..samples)
            .into_par_iter()
            .map(|i| self.eval(Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / samples as f64)).norm())
            .reduce(|| 0.0, f64::max)
    }
}

/// Fails with [`H2Error::NotSelfMap`] unless `|phi(0)| < 1` and `|phi| <= 1` on the sampled circle.
pub fn check_self_map(phi: &PowerSeries) -> Result<f64> {
    let sup = phi.sampled_sup(SELF_MAP_SAMPLES);
    if phi.at_zero().norm() >= 1.0 || sup > 1.0 + SELF_MAP_TOL {
        return Err(H2Error::NotSelfMap {
            max_modulus: sup.max(phi.at_zero().norm()),
        });
    }
    Ok(sup)
}

/// Degree-`n` truncation of `f ∘ phi`, by Horner's rule truncating after every step.
pub fn compose_truncated(f: &PowerSeries, phi: &PowerSeries, n: usize) -> Result<PowerSeries> {
    check_self_map(phi)?;
    let mut acc = PowerSeries {
        coeffs: vec![Complex64::new(0.0, 0.0); n + 1],
    };
    for &a in f.coeffs.iter().rev() {
        let mut next = acc.mul_truncated(phi, n);
        next[0] += a;
        acc.coeffs = next;
    }
    Ok(acc)
}

/// `log(2^{-j} C(j-1, k-1))` for `k = 1..=j`.
fn psi_log_row(j: usize) -> impl Iterator<Item = f64> {
    let ln2 = std::f64::consts::LN_2;
    (1..=j).scan(-(j as f64) * ln2, move |l, k| {
        let v = *l;
        if k < j {
            *l += ((j - k) as f64).ln() - (k as f64).ln();
        }
        Some(v)
    })
}

/// Matrix of `C_psi` on polynomials of degree at most `n`: column `k` holds the coefficients of `psi^k`.
pub fn psi_matrix(n: usize) -> Result<ndarray::Array2<f64>> {
    if n == 0 {
        return domain("psi_matrix needs N >= 1");
    }
    let rows: Vec<Vec<f64>> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let mut row = vec![0.0; n + 1];
            if j == 0 {
                row[0] = 1.0;
            } else {
                for (k, l) in psi_log_row(j).enumerate() {
                    row[k + 1] = l.exp();
                }
            }
            row
        })
        .collect();
    Ok(ndarray::Array2::from_shape_fn((n + 1, n + 1), |(j, k)| rows[j][k]))
}

/// Degree-`n` truncation of `f ∘ psi` computed row by row without storing the matrix.
pub fn apply_psi(f: &PowerSeries, n: usize) -> PowerSeries {
    let a = &f.coeffs;
    let coeffs = (0..=n)
        .into_par_iter()
        .map(|j| {
            if j == 0 {
                return a[0];
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (k, l) in psi_log_row(j).enumerate().take(a.len().saturating_sub(1)) {
                s += a[k + 1] * l.exp();
            }
            s
        })
        .collect();
    PowerSeries { coeffs }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `||f ∘ psi||^2` against `(|f(0)|^2 + ||f||^2)/2`, with `f ∘ psi` truncated at degree `n`.
pub fn z2z_check(f: &PowerSeries, n: usize) -> NormCheck {
    let lhs = apply_psi(f, n).norm_sq();
    let rhs = 0.5 * (f.at_zero().norm_sqr() + f.norm_sq());
    NormCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-10 * rhs.max(1.0),
    }
}

/// `||C_phi||^2` for the Möbius automorphism exchanging `0` and `w`.
pub fn mobius_comp_norm_sq(w: Complex64) -> Result<f64> {
    let m = w.norm();
    if !(m < 1.0) {
        return domain(format!("|w| must be < 1, got {m}"));
    }
    Ok((1.0 + m) / (1.0 - m))
}

fn fixes_origin(phi: &PowerSeries) -> Result<()> {
    if phi.at_zero().norm() > 1e-12 {
        return Err(H2Error::Precondition(format!(
            "symbol must fix the origin, |phi(0)| = {}",
            phi.at_zero().norm()
        )));
    }
    Ok(())
}

/// `||f ∘ phi||^2 <= ||f||^2` for self-maps fixing the origin.
pub fn littlewood_check(phi: &PowerSeries, f: &PowerSeries, n: usize) -> Result<NormCheck> {
    fixes_origin(phi)?;
    let lhs = compose_truncated(f, phi, n)?.norm_sq();
    let rhs = f.norm_sq();
    Ok(NormCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + LITTLEWOOD_TOL,
    })
}

/// Fraction of equally spaced boundary points where `|phi| < delta`.
pub fn boundary_level_measure(phi: &PowerSeries, delta: f64, samples: usize) -> f64 {
    let hits = (0..samples)
        .into_par_iter()
        .filter(|&i| {
            let t = std::f64::consts::TAU * (i as f64 + 0.5) / samples as f64;
            phi.eval(Complex64::from_polar(1.0, t)).norm() < delta
        })
        .count();
    hits as f64 / samples as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShapiroCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub c_delta: f64,
    pub measure: f64,
    /// Allowance for the discretised measure.
    pub sampling_error: f64,
    pub ok: bool,
}

/// `||f ∘ phi||^2 <= C_delta |f(0)|^2 + (1 - C_delta) ||f||^2`.
pub fn shapiro_bound_check(phi: &PowerSeries, delta: f64, f: &PowerSeries, boundary_samples: usize) -> Result<ShapiroCheck> {
    fixes_origin(phi)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(H2Error::Precondition(format!("delta must lie in [0, 1], got {delta}")));
    }
    if boundary_samples == 0 {
        return domain("need at least one boundary sample");
    }
    let n = f.degree() * phi.degree();
    let lhs = compose_truncated(f, phi, n)?.norm_sq();
    let measure = boundary_level_measure(phi, delta, boundary_samples);
    let factor = 0.5 * (1.0 - delta) / (1.0 + delta);
    let c_delta = factor * measure;
    let f0 = f.at_zero().norm_sqr();
    let rhs = c_delta * f0 + (1.0 - c_delta) * f.norm_sq();
    // |phi|^2 = delta^2 is a trigonometric polynomial equation of degree deg(phi),
    // so the level set has at most 2 deg(phi) components.
    let m_err = (4 * phi.degree()) as f64 / boundary_samples as f64;
    let sampling_error = factor * m_err * (f.norm_sq() - f0).max(0.0);
    Ok(ShapiroCheck {
        lhs,
        rhs,
        c_delta,
        measure,
        sampling_error,
        ok: lhs <= rhs + SHAPIRO_TOL + sampling_error,
    })
}
