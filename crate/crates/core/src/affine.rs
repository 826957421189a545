//! Affine symbols `phi(s) = c + sum_j c_j p_j^{-s}` and the composition norms they generate.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dseries::{DirichletPoly, DEFAULT_SUPPORT_CAP};
use crate::error::{domain, H2Error, Result};
use crate::primes::first_primes;

/// Absolute tail tolerance certified by [`comp_norm_sq`].
pub const TAIL_TOL: f64 = 1e-10;
pub const DEFAULT_K_MAX: usize = 200;
pub const HARD_K_MAX: usize = 2000;
/// Largest order accepted by [`hq_dominance`].
/// Slack allowed in `Re c - 1/2 >= r` so that boundary cases built in floating point are accepted.
pub const CLASS_TOL: f64 = 1e-12;
pub const HQ_EXACT_LIMIT: usize = 60;

const SUM_TOL: f64 = 1e-12;

/// Nonnegative coefficient vector attached to the first `d` primes.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector {
    entries: Vec<f64>,
}

impl CoeffVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(x) = entries.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return domain(format!("coefficients must be finite and nonnegative, got {x}"));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    pub fn r(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.entries.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Entries that are strictly positive.
    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|&&x| x > 0.0).count()
    }

    fn padded(&self, d: usize) -> Vec<f64> {
        let mut v = self.entries.clone();
        v.resize(d.max(v.len()), 0.0);
        v
    }
}

/// `phi(s) = c + sum_j c_j t_j p_j^{-s}` with `c_j >= 0` and unimodular twist `t_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolRepr", into = "SymbolRepr")]
pub struct AffineSymbol {
    c: Complex64,
    coeffs: CoeffVector,
    twist: Option<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct SymbolRepr {
    c: (f64, f64),
    coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twist: Option<Vec<(f64, f64)>>,
}

impl TryFrom<SymbolRepr> for AffineSymbol {
    type Error = H2Error;

    fn try_from(r: SymbolRepr) -> Result<Self> {
        let sym = AffineSymbol::new(Complex64::new(r.c.0, r.c.1), r.coeffs)?;
        match r.twist {
            Some(t) => sym.with_twist(t.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()),
            None => Ok(sym),
        }
    }
}

impl From<AffineSymbol> for SymbolRepr {
    fn from(s: AffineSymbol) -> Self {
        SymbolRepr {
            c: (s.c.re, s.c.im),
            coeffs: s.coeffs.entries,
            twist: s.twist.map(|t| t.into_iter().map(|z| (z.re, z.im)).collect()),
        }
    }
}

impl AffineSymbol {
    /// Checked constructor: rejects symbols outside the Gordon–Hedenmalm class.
    pub fn new(c: Complex64, coeffs: Vec<f64>) -> Result<Self> {
        let sym = Self::unchecked(c, coeffs)?;
        if !sym.in_gordon_hedenmalm() {
            return domain(format!(
                "Re c - 1/2 = {} is below r = {} (or Re c <= 1/2)",
                c.re - 0.5,
                sym.r()
            ));
        }
        Ok(sym)
    }

    /// Skips the class check; coefficients must still be nonnegative.
    pub fn unchecked(c: Complex64, coeffs: Vec<f64>) -> Result<Self> {
        if !c.re.is_finite() || !c.im.is_finite() {
            return domain("constant term must be finite");
        }
        Ok(Self {
            c,
            coeffs: CoeffVector::new(coeffs)?,
            twist: None,
        })
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::new(c, Vec::new())
    }

    /// Complex coefficients are split into moduli and a recorded twist.
    pub fn from_complex(c: Complex64, coeffs: &[Complex64]) -> Result<Self> {
        let moduli: Vec<f64> = coeffs.iter().map(|z| z.norm()).collect();
        let twist: Vec<Complex64> = coeffs
            .iter()
            .map(|z| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) })
            .collect();
        let sym = Self::new(c, moduli)?;
        if twist.iter().all(|t| *t == Complex64::new(1.0, 0.0)) {
            Ok(sym)
        } else {
            sym.with_twist(twist)
        }
    }

    pub fn with_twist(mut self, twist: Vec<Complex64>) -> Result<Self> {
        if twist.len() != self.coeffs.d() {
            return domain(format!("twist has {} entries, expected {}", twist.len(), self.coeffs.d()));
        }
        if twist.iter().any(|t| (t.norm() - 1.0).abs() > 1e-12) {
            return domain("twist values must be unimodular");
        }
        self.twist = Some(twist);
        Ok(self)
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.coeffs
    }

    pub fn twist(&self) -> Option<&[Complex64]> {
        self.twist.as_deref()
    }

    pub fn d(&self) -> usize {
        self.coeffs.d()
    }

    pub fn r(&self) -> f64 {
        self.coeffs.r()
    }

    pub fn primes(&self) -> Vec<u64> {
        first_primes(self.d())
    }

    /// Coefficient of `p_j^{-s}` including the twist.
    pub fn signed_coeff(&self, j: usize) -> Complex64 {
        let t = self.twist.as_ref().map_or(Complex64::new(1.0, 0.0), |t| t[j]);
        t * self.coeffs.entries[j]
    }

    pub fn in_gordon_hedenmalm(&self) -> bool {
        self.c.re > 0.5 && self.c.re - 0.5 >= self.r() - CLASS_TOL
    }

    /// `L(s) = phi(s) - c` as a Dirichlet polynomial.
    pub fn linear_part(&self) -> DirichletPoly {
        let primes = self.primes();
        DirichletPoly::from_terms((0..self.d()).map(|j| (primes[j], self.signed_coeff(j))))
            .expect("primes are positive indices")
    }

    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        let primes = self.primes();
        let mut v = self.c;
        for (j, &p) in primes.iter().enumerate() {
            v += self.signed_coeff(j) * (-s * (p as f64).ln()).exp();
        }
        v
    }

    /// Boundary value `c + sum c_j t_j chi_j` at a point of the torus.
    pub fn boundary_value(&self, chi: &[Complex64]) -> Complex64 {
        let mut v = self.c;
        for (j, z) in chi.iter().enumerate().take(self.d()) {
            v += self.signed_coeff(j) * z;
        }
        v
    }
}

pub fn in_gordon_hedenmalm(phi: &AffineSymbol) -> bool {
    phi.in_gordon_hedenmalm()
}

/// Image disc `(c, r)` of the closed right half-plane.
pub fn mapping_disc(phi: &AffineSymbol) -> (Complex64, f64) {
    (phi.c, phi.r())
}

/// `xi = a + sqrt(a^2 - r^2)` with `a = Re c - 1/2`.
pub fn xi(phi: &AffineSymbol) -> Result<f64> {
    xi_from(phi.c.re, phi.r())
}

pub fn xi_from(re_c: f64, r: f64) -> Result<f64> {
    let a = re_c - 0.5;
    if !(a >= r - CLASS_TOL && r >= 0.0) {
        return domain(format!("need Re c - 1/2 >= r >= 0, got {a} and {r}"));
    }
    Ok(a + ((a - r).max(0.0) * (a + r)).sqrt())
}

fn check_sums(b: &CoeffVector, c: &CoeffVector) -> Result<()> {
    let (rb, rc) = (b.r(), c.r());
    if (rb - rc).abs() > SUM_TOL * rb.max(rc).max(1.0) {
        return domain(format!("sums differ: {rb} vs {rc}"));
    }
    Ok(())
}

/// `b ≺ c`: partial sums of the decreasing rearrangement of `b` never exceed those of `c`.
/// Shorter vectors are padded with zeros.
pub fn majorizes(b: &CoeffVector, c: &CoeffVector) -> Result<bool> {
    check_sums(b, c)?;
    let d = b.d().max(c.d());
    let mut bs = b.padded(d);
    let mut cs = c.padded(d);
    bs.sort_by(|x, y| y.total_cmp(x));
    cs.sort_by(|x, y| y.total_cmp(x));
    let tol = SUM_TOL * c.r().max(1.0);
    let (mut sb, mut sc) = (0.0, 0.0);
    for k in 0..d {
        sb += bs[k];
        sc += cs[k];
        if sb > sc + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A weighted permutation `(lambda, perm)` acting by `(P c)_i = c[perm[i]]`.
pub type WeightedPerm = (f64, Vec<usize>);

/// Writes `b = sum_k lambda_k P_k c` through a chain of at most `d - 1` T-transforms.
pub fn bvn_decompose(b: &CoeffVector, c: &CoeffVector) -> Result<Vec<WeightedPerm>> {
    if !majorizes(b, c)? {
        return Err(H2Error::Precondition("b is not majorized by c".into()));
    }
    let d = b.d().max(c.d());
    let bv = b.padded(d);
    let cv = c.padded(d);
    let order = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..d).collect();
        idx.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
        idx
    };
    let sb = order(&bv);
    let sc = order(&cv);
    let target: Vec<f64> = sb.iter().map(|&i| bv[i]).collect();
    let mut x: Vec<f64> = sc.iter().map(|&i| cv[i]).collect();
    let tol = 1e-14 * c.r().max(1.0);

    // Each step: x <- lambda x + (1 - lambda) swap_{j,k} x.
    let mut steps: Vec<(f64, usize, usize)> = Vec::new();
    for _ in 0..d {
        let Some(j) = (0..d).rev().find(|&i| x[i] > target[i] + tol) else {
            break;
        };
        let Some(k) = (j + 1..d).find(|&i| x[i] < target[i] - tol) else {
            break;
        };
        let delta = (x[j] - target[j]).min(target[k] - x[k]);
        let lambda = 1.0 - delta / (x[j] - x[k]);
        if x[j] - target[j] <= target[k] - x[k] {
            x[k] += x[j] - target[j];
            x[j] = target[j];
        } else {
            x[j] -= target[k] - x[k];
            x[k] = target[k];
        }
        steps.push((lambda, j, k));
    }

    let mut terms: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    terms.insert((0..d).collect(), 1.0);
    for &(lambda, j, k) in &steps {
        let mut next: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (sigma, w) in terms {
            let mut swapped = sigma.clone();
            swapped.swap(j, k);
            *next.entry(sigma).or_insert(0.0) += lambda * w;
            *next.entry(swapped).or_insert(0.0) += (1.0 - lambda) * w;
        }
        terms = next;
    }

    let mut out: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (sigma, w) in terms {
        if w <= 0.0 {
            continue;
        }
        let mut perm = vec![0; d];
        for i in 0..d {
            perm[sb[i]] = sc[sigma[i]];
        }
        *out.entry(perm).or_insert(0.0) += w;
    }
    Ok(out.into_iter().map(|(p, w)| (w, p)).collect())
}

/// Max-norm residual of `b - sum lambda_k P_k c`.
pub fn bvn_residual(b: &CoeffVector, c: &CoeffVector, parts: &[WeightedPerm]) -> f64 {
    let d = b.d().max(c.d());
    let bv = b.padded(d);
    let cv = c.padded(d);
    (0..d)
        .map(|i| (bv[i] - parts.iter().map(|(w, p)| w * cv[p[i]]).sum::<f64>()).abs())
        .fold(0.0, f64::max)
}

/// `sum c_j^2 / (sum c_j)^2`.
pub fn effective_constant(c: &CoeffVector) -> Result<f64> {
    let r = c.r();
    if r <= 0.0 {
        return domain("effective constant needs a nonzero vector");
    }
    Ok(c.entries.iter().map(|x| x * x).sum::<f64>() / (r * r))
}

/// Inner and outer radius of the boundary image annulus.
pub fn annulus_radii(phi: &AffineSymbol) -> (f64, f64) {
    let r = phi.r();
    let top = phi.coeffs.entries.iter().cloned().fold(0.0, f64::max);
    ((2.0 * top - r).max(0.0), r)
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for i in 1..=n {
        t[i] = t[i - 1] + (i as f64).ln();
    }
    t
}

/// `nu_k = ||L^k||^2 / r^{2k}` for `k = 0..=k_max`, from weights `w = c / r`.
fn normalized_power_norms(weights: &[f64], k_max: usize) -> Vec<f64> {
    let lf = ln_factorials(k_max);
    let mut nu = vec![0.0; k_max + 1];
    nu[0] = 1.0;
    let mut first = true;
    for &w in weights.iter().filter(|&&w| w > 0.0) {
        let lw = w.ln();
        if first {
            for (k, v) in nu.iter_mut().enumerate() {
                *v = (2.0 * k as f64 * lw).exp();
            }
            first = false;
            continue;
        }
        let prev = nu.clone();
        nu = (0..=k_max)
            .into_par_iter()
            .map(|k| {
                let mut s = 0.0;
                for j in 0..=k {
                    if prev[k - j] == 0.0 {
                        continue;
                    }
                    let lc = lf[k] - lf[j] - lf[k - j];
                    s += (2.0 * lc + 2.0 * j as f64 * lw + prev[k - j].ln()).exp();
                }
                s
            })
            .collect();
    }
    if first {
        // no nonzero weights: L = 0
        for v in nu.iter_mut().skip(1) {
            *v = 0.0;
        }
    }
    nu
}

/// `G_k = f^{(k)}(c) r^k / k!` for `k = 0..=k_max`.
fn scaled_taylor(f: &DirichletPoly, c: Complex64, r: f64, k_max: usize) -> Vec<Complex64> {
    let mut g = vec![Complex64::zero(); k_max + 1];
    for (n, a) in f.terms() {
        let l = (n as f64).ln();
        let mut t = a * (-c * l).exp();
        for (k, gk) in g.iter_mut().enumerate() {
            if k > 0 {
                t *= -r * l / k as f64;
            }
            *gk += t;
        }
    }
    g
}

/// Certified bound on `sum_{k > k_max} |G_k|^2`; infinite if the geometric majorant diverges.
fn tail_bound(f: &DirichletPoly, re_c: f64, r: f64, k_max: usize) -> f64 {
    let b: f64 = f.terms().map(|(n, a)| a.norm() * (n as f64).powf(-re_c)).sum();
    let x = r * (f.max_index().max(1) as f64).ln();
    if b == 0.0 || x == 0.0 {
        return 0.0;
    }
    let k1 = (k_max + 1) as f64;
    if x >= k1 + 1.0 {
        return f64::INFINITY;
    }
    let lf = ln_factorials(k_max + 1);
    let log_term = 2.0 * (b.ln() + k1 * x.ln() - lf[k_max + 1]);
    log_term.exp() / (1.0 - (x / (k1 + 1.0)).powi(2))
}

/// Precomputed orthogonal-expansion weights for one symbol.
#[derive(Clone, Debug)]
pub struct CompositionWeights {
    c: Complex64,
    r: f64,
    nu: Vec<f64>,
}

impl CompositionWeights {
    pub fn new(phi: &AffineSymbol, k_max: usize) -> Self {
        let r = phi.r();
        let weights: Vec<f64> = if r > 0.0 {
            phi.coeffs.entries.iter().map(|x| x / r).collect()
        } else {
            Vec::new()
        };
        Self {
            c: phi.c,
            r,
            nu: normalized_power_norms(&weights, k_max),
        }
    }

    pub fn k_max(&self) -> usize {
        self.nu.len() - 1
    }

    /// `||L^k||^2_{H^2}` for `k <= k_max`.
    pub fn power_norm_sq(&self, k: usize) -> f64 {
        self.nu[k] * self.r.powi(2 * k as i32)
    }

    /// Truncated sum and certified tail bound.
    pub fn norm_sq_with_tail(&self, f: &DirichletPoly) -> (f64, f64) {
        if self.r == 0.0 {
            return (f.evaluate(self.c).norm_sqr(), 0.0);
        }
        let g = scaled_taylor(f, self.c, self.r, self.k_max());
        let sum = g.iter().zip(&self.nu).map(|(gk, nu)| gk.norm_sqr() * nu).sum();
        (sum, tail_bound(f, self.c.re, self.r, self.k_max()))
    }
}

/// `||f ∘ phi||^2` from the orthogonal Taylor expansion around `c`.
///
/// Starts at `k_max` terms and doubles until the certified tail is below
/// [`TAIL_TOL`], up to [`HARD_K_MAX`].
pub fn comp_norm_sq(phi: &AffineSymbol, f: &DirichletPoly, k_max: usize) -> Result<f64> {
    if !phi.in_gordon_hedenmalm() {
        return domain("symbol outside the Gordon–Hedenmalm class");
    }
    if phi.r() == 0.0 {
        return Ok(f.evaluate(phi.c).norm_sqr());
    }
    let mut k = k_max.max(1);
    loop {
        let (sum, tail) = CompositionWeights::new(phi, k).norm_sq_with_tail(f);
        if tail < TAIL_TOL {
            return Ok(sum);
        }
        if k >= HARD_K_MAX {
            return Err(H2Error::TailNotCertified { tail, k_max: k });
        }
        k = (2 * k).min(HARD_K_MAX);
    }
}

/// Independent route: expand `f ∘ phi` coefficientwise and take the coefficient norm.
pub fn comp_bruteforce_norm_sq(phi: &AffineSymbol, f: &DirichletPoly, k_max: usize) -> Result<f64> {
    if !phi.in_gordon_hedenmalm() {
        return domain("symbol outside the Gordon–Hedenmalm class");
    }
    let r = phi.r();
    if r == 0.0 {
        return Ok(f.evaluate(phi.c).norm_sqr());
    }
    let k_stop = (1..=k_max.min(HARD_K_MAX))
        .find(|&k| tail_bound(f, phi.c.re, r, k) < 1e-12)
        .ok_or(H2Error::TailNotCertified {
            tail: tail_bound(f, phi.c.re, r, k_max.min(HARD_K_MAX)),
            k_max,
        })?;
    // Terms are keyed by exponent vectors over the first d primes: indices such as
    // 7^40 do not fit in u64, while unique factorisation keeps the keys faithful.
    let d = phi.d();
    let lin: Vec<Complex64> = (0..d).map(|j| phi.signed_coeff(j)).collect();
    let mut power: HashMap<Vec<u16>, Complex64> = HashMap::from([(vec![0; d], Complex64::new(1.0, 0.0))]);
    let mut acc: HashMap<Vec<u16>, Complex64> = HashMap::new();
    for k in 0..=k_stop {
        if k > 0 {
            let mut next: HashMap<Vec<u16>, Complex64> = HashMap::with_capacity(power.len() * d);
            for (e, a) in &power {
                for (j, &cj) in lin.iter().enumerate() {
                    if cj == Complex64::zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2[j] += 1;
                    *next.entry(e2).or_insert_with(Complex64::zero) += a * cj;
                }
            }
            power = next;
            if power.len() as u128 > DEFAULT_SUPPORT_CAP {
                return Err(H2Error::SupportCap {
                    required: power.len() as u128,
                    cap: DEFAULT_SUPPORT_CAP,
                });
            }
        }
        let t = f.taylor_coeff(k as u32, phi.c);
        for (e, a) in &power {
            *acc.entry(e.clone()).or_insert_with(Complex64::zero) += a * t;
        }
    }
    Ok(acc.values().map(|a| a.norm_sqr()).sum())
}

/// One row of [`hq_dominance`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HqRow {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `sum_{|j| = k} (k! / prod j_i!)^2 prod c_i^{2 j_i}` for `k = 0..=k_max`, exactly.
pub fn exact_power_norms(c: &[BigRational], k_max: usize) -> Vec<BigRational> {
    let binom: Vec<Vec<BigInt>> = (0..=k_max)
        .map(|k| {
            let mut row = vec![BigInt::one(); k + 1];
            for j in 1..k {
                row[j] = &row[j - 1] * BigInt::from(k - j + 1) / BigInt::from(j);
            }
            row
        })
        .collect();
    let mut nu: Vec<BigRational> = (0..=k_max)
        .map(|k| if k == 0 { BigRational::one() } else { BigRational::zero() })
        .collect();
    for x in c.iter().filter(|x| !x.is_zero()) {
        let x2 = x * x;
        let mut pows = vec![BigRational::one()];
        for j in 1..=k_max {
            pows.push(&pows[j - 1] * &x2);
        }
        let prev = nu;
        nu = (0..=k_max)
            .into_par_iter()
            .map(|k| {
                let mut s = BigRational::zero();
                for j in 0..=k {
                    if prev[k - j].is_zero() {
                        continue;
                    }
                    let b = &binom[k][j];
                    s += BigRational::from_integer(b * b) * &pows[j] * &prev[k - j];
                }
                s
            })
            .collect();
    }
    nu
}

fn dominance_rows(b: &[BigRational], c: &[BigRational], k_max: usize) -> Result<Vec<HqRow>> {
    if k_max > HQ_EXACT_LIMIT {
        return Err(H2Error::ExactLimit {
            k: k_max,
            limit: HQ_EXACT_LIMIT,
        });
    }
    let lb = exact_power_norms(b, k_max);
    let lc = exact_power_norms(c, k_max);
    Ok((1..=k_max)
        .map(|k| HqRow {
            k,
            lhs: lb[k].to_f64().unwrap_or(f64::NAN),
            rhs: lc[k].to_f64().unwrap_or(f64::NAN),
            ok: lb[k] <= lc[k],
        })
        .collect())
}

/// Compares `||L_b^k||^2` with `||L_c^k||^2` for `k = 1..=k_max` in exact arithmetic.
pub fn hq_dominance_exact(b: &[BigRational], c: &[BigRational], k_max: usize) -> Result<Vec<HqRow>> {
    if b.iter().sum::<BigRational>() != c.iter().sum::<BigRational>() {
        return domain("coefficient sums differ");
    }
    dominance_rows(b, c, k_max)
}

/// Floating inputs are converted to rationals exactly; sums need only agree to rounding.
pub fn hq_dominance(b: &CoeffVector, c: &CoeffVector, k_max: usize) -> Result<Vec<HqRow>> {
    check_sums(b, c)?;
    let conv = |v: &CoeffVector| -> Vec<BigRational> {
        v.entries
            .iter()
            .map(|&x| BigRational::from_f64(x).expect("finite coefficient"))
            .collect()
    };
    dominance_rows(&conv(b), &conv(c), k_max)
}

/// `(sum_{j1+j2+j3=k} (k; j)^2 16^{j1}, 9^k binom(2k, k))`.
pub fn multinomial_inequality(k: usize) -> (BigInt, BigInt) {
    let mut fact = vec![BigInt::one()];
    for i in 1..=2 * k {
        let next = &fact[i - 1] * BigInt::from(i);
        fact.push(next);
    }
    let mut lhs = BigInt::zero();
    let mut p16 = BigInt::one();
    for j1 in 0..=k {
        for j2 in 0..=(k - j1) {
            let j3 = k - j1 - j2;
            let m = &fact[k] / (&fact[j1] * &fact[j2] * &fact[j3]);
            lhs += &m * &m * &p16;
        }
        p16 *= 16;
    }
    let binom = &fact[2 * k] / (&fact[k] * &fact[k]);
    let rhs = BigInt::from(9).pow(k as u32) * binom;
    (lhs, rhs)
}
