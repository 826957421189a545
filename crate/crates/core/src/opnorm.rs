//! Lower and upper bounds for composition operator norms: truncated matrices,
//! reproducing-kernel quotients, adjoint bounds and the closed-form estimates.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{self, AffineSymbol, CompositionWeights, CLASS_TOL};
use crate::dseries::DirichletPoly;
use crate::error::{domain, H2Error, Result};
use crate::search::{grid_then_golden, log_grid, unit_interval_grid, GRID_POINTS};
use crate::zeta::{alpha0, zeta, zeta_1p, zeta_lambda, LambdaSpec};

/// Largest number of matrix entries accepted by [`build_matrix`].
pub const MATRIX_ENTRY_CAP: usize = 1 << 22;
pub const DEFAULT_N_IN: usize = 64;
pub const DEFAULT_K_OUT: usize = 40;
/// Row budget used when choosing the default `K_out` for several active primes.
pub const DEFAULT_ROW_BUDGET: usize = 20_000;
pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITERS: usize = 100_000;
/// Slack in the lower-vs-upper consistency gate.
pub const GATE_TOL: f64 = 1e-9;

/// Symbols with a closed-form operator matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSymbol {
    Affine(AffineSymbol),
    /// `1/2 + alpha (1 - 2^{-s}) / (1 + 2^{-s})`.
    Cayley { alpha: f64 },
}

impl OperatorSymbol {
    pub fn c(&self) -> Complex64 {
        match self {
            OperatorSymbol::Affine(phi) => phi.c(),
            OperatorSymbol::Cayley { alpha } => Complex64::new(0.5 + alpha, 0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            OperatorSymbol::Affine(phi) if !phi.in_gordon_hedenmalm() => {
                domain("symbol outside the Gordon–Hedenmalm class")
            }
            OperatorSymbol::Cayley { alpha } if !(*alpha > 0.0 && alpha.is_finite()) => {
                domain(format!("alpha must be positive, got {alpha}"))
            }
            _ => Ok(()),
        }
    }
}

impl From<AffineSymbol> for OperatorSymbol {
    fn from(phi: AffineSymbol) -> Self {
        OperatorSymbol::Affine(phi)
    }
}

/// Compression of the composition operator to inputs `n <= n_in` and outputs of degree `<= K_out`.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub symbol: OperatorSymbol,
    pub n_in: usize,
    pub k_out: usize,
    /// Exponent vectors over the first `d` primes, one per row.
    pub out_indices: Vec<Vec<u32>>,
    pub entries: Array2<Complex64>,
    /// `exact column norm^2 - truncated column norm^2`, one per column.
    pub defects: Vec<f64>,
}

impl TruncatedOperator {
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn column_norm_sq(&self, col: usize) -> f64 {
        self.entries.column(col).iter().map(|z| z.norm_sqr()).sum()
    }

    /// `||A a||^2` for input coefficients `a_1..a_{n_in}`.
    pub fn image_norm_sq(&self, a: &[Complex64]) -> f64 {
        let v = Array1::from(a.to_vec());
        self.entries.dot(&v).iter().map(|z| z.norm_sqr()).sum()
    }
}

/// All exponent vectors of length `d` with entries summing to at most `k`, graded then lexicographic.
fn multi_indices(d: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=k {
        let mut cur = vec![0u32; d];
        fill(&mut cur, 0, total as u32, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for v in (0..=left).rev() {
        cur[pos] = v;
        fill(cur, pos + 1, left - v, out);
    }
    cur[pos] = 0;
}

fn binomial_usize(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Positions of the nonzero coefficients of an affine symbol.
fn active_vars(phi: &AffineSymbol) -> Vec<usize> {
    (0..phi.d()).filter(|&j| phi.coeffs().entries()[j] > 0.0).collect()
}

/// Default output degree for `d` active primes: at most [`DEFAULT_K_OUT`], with at most
/// [`DEFAULT_ROW_BUDGET`] rows.
pub fn default_k_out(d: usize) -> usize {
    (0..=DEFAULT_K_OUT)
        .rev()
        .find(|&k| binomial_usize(k + d, d) <= DEFAULT_ROW_BUDGET)
        .unwrap_or(0)
}

/// Coefficients of `exp(sum_{m>=1} beta_m z^m)` up to degree `k`.
fn exp_series(beta: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::zero(); k + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for i in 1..=k {
        let mut s = Complex64::zero();
        for m in 1..=i.min(beta.len().saturating_sub(1)) {
            s += beta[m] * (m as f64) * e[i - m];
        }
        e[i] = s / i as f64;
    }
    e
}

/// Builds the truncated matrix with per-column truncation defects.
pub fn build_matrix(symbol: &OperatorSymbol, n_in: usize, k_out: usize) -> Result<TruncatedOperator> {
    symbol.validate()?;
    if n_in == 0 {
        return domain("n_in must be >= 1");
    }
    match symbol {
        OperatorSymbol::Affine(phi) => build_affine(phi, n_in, k_out),
        OperatorSymbol::Cayley { alpha } => build_cayley(*alpha, n_in, k_out),
    }
}

fn build_affine(phi: &AffineSymbol, n_in: usize, k_out: usize) -> Result<TruncatedOperator> {
    let active = active_vars(phi);
    let local = multi_indices(active.len(), if active.is_empty() { 0 } else { k_out });
    let rows = local.len();
    if rows.saturating_mul(n_in) > MATRIX_ENTRY_CAP {
        return Err(H2Error::SizeCap { rows, cols: n_in });
    }
    let out_indices: Vec<Vec<u32>> = local
        .iter()
        .map(|e| {
            let mut full = vec![0u32; phi.d()];
            for (slot, &j) in active.iter().enumerate() {
                full[j] = e[slot];
            }
            full
        })
        .collect();
    let c = phi.c();
    let coeffs: Vec<Complex64> = active.iter().map(|&j| phi.signed_coeff(j)).collect();
    let columns: Vec<Vec<Complex64>> = (1..=n_in)
        .into_par_iter()
        .map(|n| {
            let l = (n as f64).ln();
            let base = (-c * l).exp();
            // table[j][k] = (-l c_j)^k / k!
            let tables: Vec<Vec<Complex64>> = coeffs
                .iter()
                .map(|&cj| {
                    let mut t = vec![Complex64::new(1.0, 0.0); k_out + 1];
                    for k in 1..=k_out {
                        t[k] = t[k - 1] * (-l * cj) / k as f64;
                    }
                    t
                })
                .collect();
            local
                .iter()
                .map(|e| e.iter().enumerate().fold(base, |acc, (j, &k)| acc * tables[j][k as usize]))
                .collect()
        })
        .collect();
    let mut entries = Array2::<Complex64>::zeros((rows, n_in));
    for (col, v) in columns.iter().enumerate() {
        for (row, z) in v.iter().enumerate() {
            entries[[row, col]] = *z;
        }
    }
    let weights = CompositionWeights::new(phi, affine::DEFAULT_K_MAX);
    let defects = (1..=n_in)
        .into_par_iter()
        .map(|n| {
            let f = DirichletPoly::monomial(n as u64, Complex64::new(1.0, 0.0));
            let (exact, tail) = weights.norm_sq_with_tail(&f);
            let exact = if tail < affine::TAIL_TOL {
                exact
            } else {
                affine::comp_norm_sq(phi, &f, affine::DEFAULT_K_MAX)?
            };
            let trunc: f64 = columns[n - 1].iter().map(|z| z.norm_sqr()).sum();
            Ok((exact - trunc).max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TruncatedOperator {
        symbol: OperatorSymbol::Affine(phi.clone()),
        n_in,
        k_out,
        out_indices,
        entries,
        defects,
    })
}

fn build_cayley(alpha: f64, n_in: usize, k_out: usize) -> Result<TruncatedOperator> {
    let rows = k_out + 1;
    if rows.saturating_mul(n_in) > MATRIX_ENTRY_CAP {
        return Err(H2Error::SizeCap { rows, cols: n_in });
    }
    let c = 0.5 + alpha;
    let columns: Vec<Vec<Complex64>> = (1..=n_in)
        .into_par_iter()
        .map(|n| {
            let l = (n as f64).ln();
            // 1/2 + alpha (1-z)/(1+z) = c + sum_{m>=1} 2 alpha (-1)^m z^m
            let beta: Vec<Complex64> = (0..=k_out)
                .map(|m| {
                    if m == 0 {
                        Complex64::zero()
                    } else {
                        let b = 2.0 * alpha * if m % 2 == 0 { 1.0 } else { -1.0 };
                        Complex64::new(-l * b, 0.0)
                    }
                })
                .collect();
            let base = (-c * l).exp();
            exp_series(&beta, k_out).into_iter().map(|e| e * base).collect()
        })
        .collect();
    let mut entries = Array2::<Complex64>::zeros((rows, n_in));
    for (col, v) in columns.iter().enumerate() {
        for (row, z) in v.iter().enumerate() {
            entries[[row, col]] = *z;
        }
    }
    // n^{-phi} is n^{-1/2} times an inner function, so each full column has norm^2 1/n.
    let defects = (1..=n_in)
        .map(|n| {
            let trunc: f64 = columns[n - 1].iter().map(|z| z.norm_sqr()).sum();
            (1.0 / n as f64 - trunc).max(0.0)
        })
        .collect();
    Ok(TruncatedOperator {
        symbol: OperatorSymbol::Cayley { alpha },
        n_in,
        k_out,
        out_indices: (0..=k_out as u32).map(|k| vec![k]).collect(),
        entries,
        defects,
    })
}

/// Largest eigenvalue of the Gram matrix `A^* A` by power iteration from the all-ones vector.
///
/// The returned Rayleigh quotient never exceeds the true value, so it is a valid lower bound.
pub fn sigma_max_sq(t: &TruncatedOperator, tol: f64) -> Result<f64> {
    let a = &t.entries;
    let n = a.ncols();
    let gram: Array2<Complex64> = {
        let ah = a.t().mapv(|z| z.conj());
        ah.dot(a)
    };
    let mut v = Array1::<Complex64>::from_elem(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    let mut lambda = 0.0;
    for it in 0..POWER_MAX_ITERS {
        let w = gram.dot(&v);
        let rq = v.iter().zip(w.iter()).map(|(x, y)| (x.conj() * y).re).sum::<f64>();
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        if it > 0 && (rq - lambda).abs() <= tol * rq.abs() {
            return Ok(rq.max(lambda));
        }
        lambda = rq;
        v = w.mapv(|z| z / norm);
    }
    Err(H2Error::NoConvergence {
        iterations: POWER_MAX_ITERS,
    })
}

/// Kernel quotient `||C K_w|| / ||K_w||` with the kernel truncated to `n <= n_in`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelQuotient {
    /// Ratio for the truncated kernel; a lower bound for the operator norm.
    pub ratio: f64,
    /// Output-truncation defect `||C a||^2 - ||A a||^2`, when an exact value is available.
    pub defect: Option<f64>,
    /// Relative mass of the kernel lost to input truncation, `1 - ||a||^2 / zeta(2 Re w)`.
    pub input_defect: f64,
}

fn kernel_vector(w: Complex64, n_in: usize) -> Vec<Complex64> {
    (1..=n_in).map(|n| (-w.conj() * (n as f64).ln()).exp()).collect()
}

fn quotient_from_matrix(t: &TruncatedOperator, w: Complex64) -> Result<KernelQuotient> {
    if w.re <= 0.5 {
        return domain(format!("Re w must exceed 1/2, got {}", w.re));
    }
    let a = kernel_vector(w, t.n_in);
    let norm_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let img = t.image_norm_sq(&a);
    let defect = match &t.symbol {
        OperatorSymbol::Affine(phi) => {
            let f = DirichletPoly::from_terms((1..=t.n_in as u64).zip(a.iter().copied()))?;
            Some((affine::comp_norm_sq(phi, &f, affine::DEFAULT_K_MAX)? - img).max(0.0))
        }
        OperatorSymbol::Cayley { .. } => None,
    };
    Ok(KernelQuotient {
        ratio: (img / norm_sq).sqrt(),
        defect,
        input_defect: 1.0 - norm_sq / zeta(2.0 * w.re)?,
    })
}

pub fn kernel_quotient(symbol: &OperatorSymbol, w: Complex64, n_in: usize, k_out: usize) -> Result<KernelQuotient> {
    if w.re <= 0.5 {
        return domain(format!("Re w must exceed 1/2, got {}", w.re));
    }
    quotient_from_matrix(&build_matrix(symbol, n_in, k_out)?, w)
}

/// Default real grid for kernel-quotient searches.
pub fn kernel_w_grid() -> Vec<f64> {
    log_grid(1e-3, 50.0, 64).into_iter().map(|x| 0.5 + x).collect()
}

/// `max_w ||A K_w||^2 / ||K_w||^2` over real `w`: best point of `grid`, refined by golden section.
pub fn kernel_sup_sq(t: &TruncatedOperator, grid: &[f64]) -> Result<(f64, f64)> {
    if let Some(&w) = grid.iter().find(|&&w| !(w > 0.5)) {
        return domain(format!("Re w must exceed 1/2, got {w}"));
    }
    if grid.is_empty() {
        return domain("empty w grid");
    }
    let q = |w: f64| {
        let a = kernel_vector(Complex64::new(w, 0.0), t.n_in);
        let norm_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        t.image_norm_sq(&a) / norm_sq
    };
    Ok(grid_then_golden(&q, grid))
}

/// `sup_sigma zeta(2 (Re c - sum c_j p_j^{-sigma})) / zeta_Lambda(2 sigma)`: the adjoint
/// kernel bound for `||C_phi||^2` with image space indexed by `lambda`.
pub fn adjoint_bound_general(phi: &AffineSymbol, lambda: &LambdaSpec, sigma_grid: &[f64]) -> Result<f64> {
    if !phi.in_gordon_hedenmalm() {
        return domain("symbol outside the Gordon–Hedenmalm class");
    }
    if sigma_grid.is_empty() {
        return domain("empty sigma grid");
    }
    lambda.validate()?;
    let floor = lambda.abscissa() / 2.0;
    if let Some(s) = sigma_grid.iter().find(|&&s| !(s > floor)) {
        return domain(format!("grid point {s} not above {floor}"));
    }
    let primes = phi.primes();
    let coeffs = phi.coeffs().entries().to_vec();
    let re_c = phi.c().re;
    let eval = |sigma: f64| -> f64 {
        let shift: f64 = coeffs
            .iter()
            .zip(&primes)
            .map(|(cj, &p)| cj * (p as f64).powf(-sigma))
            .sum();
        let num = zeta(2.0 * (re_c - shift));
        let den = zeta_lambda(lambda, 2.0 * sigma);
        match (num, den) {
            (Ok(a), Ok(b)) => a / b,
            _ => f64::NEG_INFINITY,
        }
    };
    let mut grid = sigma_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    Ok(grid_then_golden(&eval, &grid).1)
}

/// `sup_{0<x<1} (2-x) x zeta(2 Re c - 2 r (1-x))` including both endpoint limits.
pub fn adjoint_bound_2s(c: Complex64, r: f64) -> Result<f64> {
    let a = c.re - 0.5;
    if !(r > 0.0 && a >= r - CLASS_TOL) {
        return domain(format!("need Re c - 1/2 >= r > 0, got {a} and {r}"));
    }
    let gap = (a - r).max(0.0);
    // zeta argument written as 1 + eps to keep eps exact near the pole
    let g = |x: f64| (2.0 - x) * x * zeta_1p(2.0 * gap + 2.0 * r * x).unwrap_or(f64::INFINITY);
    let interior = grid_then_golden(&g, &unit_interval_grid(GRID_POINTS)).1;
    // Laurent expansion zeta(1 + e) ~ 1/e gives 1/r at x -> 0 exactly when 2 Re c - 2r = 1.
    let left = if gap <= CLASS_TOL { 1.0 / r } else { 0.0 };
    let right = zeta(2.0 * c.re)?;
    Ok(interior.max(left).max(right))
}

/// `sup_{0<x<1} 4x/(1+x)^2 zeta(1 + 2 alpha x)` including both endpoint limits.
pub fn adjoint_bound_cayley(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return domain("alpha must be positive");
    }
    let g = |x: f64| 4.0 * x / (1.0 + x).powi(2) * zeta_1p(2.0 * alpha * x).unwrap_or(f64::INFINITY);
    let interior = grid_then_golden(&g, &unit_interval_grid(GRID_POINTS)).1;
    Ok(interior.max(2.0 / alpha).max(zeta(1.0 + 2.0 * alpha)?))
}

/// Whether an entry bounds the squared norm from below or above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    /// Bound on the squared operator norm; `NaN` (serialised as null) when not computed.
    pub value: f64,
    pub applicable: bool,
    pub provenance: &'static str,
    pub side: Side,
}

/// All bounds known for one symbol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    fn applicable(&self, side: Side) -> impl Iterator<Item = f64> + '_ {
        self.entries
            .iter()
            .filter(move |e| e.side == side && e.applicable && e.value.is_finite())
            .map(|e| e.value)
    }

    pub fn best_lower(&self) -> f64 {
        self.applicable(Side::Lower).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn best_upper(&self) -> f64 {
        self.applicable(Side::Upper).fold(f64::INFINITY, f64::min)
    }

    /// Every applicable lower bound is below every applicable upper bound (up to [`GATE_TOL`]).
    pub fn consistent(&self) -> bool {
        self.best_lower() <= self.best_upper() + GATE_TOL
    }

    /// The squared norm, when the bracket has closed.
    pub fn certified_norm_sq(&self) -> Option<f64> {
        let (lo, hi) = (self.best_lower(), self.best_upper());
        ((hi - lo).abs() <= GATE_TOL).then_some(hi)
    }
}

fn entry(name: &'static str, side: Side, value: f64, applicable: bool, provenance: &'static str) -> BoundEntry {
    BoundEntry {
        name,
        value,
        applicable,
        provenance,
        side,
    }
}

/// Truncation used by [`bound_suite`] for the matrix estimate.
pub fn default_truncation(phi: &AffineSymbol) -> (usize, usize) {
    (DEFAULT_N_IN, default_k_out(active_vars(phi).len()))
}

/// Fills every bound applicable to an affine symbol.
pub fn bound_suite(phi: &AffineSymbol) -> Result<BoundReport> {
    let (n_in, k_out) = default_truncation(phi);
    bound_suite_with(phi, n_in, k_out)
}

pub fn bound_suite_with(phi: &AffineSymbol, n_in: usize, k_out: usize) -> Result<BoundReport> {
    if !phi.in_gordon_hedenmalm() {
        return domain("symbol outside the Gordon–Hedenmalm class");
    }
    let c = phi.c();
    let r = phi.r();
    let active = active_vars(phi);
    let single = active.len() == 1;
    let genlower = zeta(2.0 * c.re)?;
    let xi = affine::xi(phi)?;
    let zeta_xi = zeta(1.0 + xi)?;

    let (adjoint, adjoint_ok, adjoint_src) = if r == 0.0 {
        (f64::NAN, false, "adjoint kernel quotient; not defined for constant symbols")
    } else if single {
        (adjoint_bound_2s(c, r)?, true, "adjoint kernel quotient over powers of one prime, sup of (2-x) x zeta(2 Re c - 2r(1-x))")
    } else {
        let primes = phi.primes();
        let lambda = LambdaSpec::PrimeSemigroup(active.iter().map(|&j| primes[j]).collect());
        let grid = log_grid(1e-3, 60.0, GRID_POINTS);
        (adjoint_bound_general(phi, &lambda, &grid)?, true, "adjoint kernel quotient over the multiplicative semigroup of the active primes")
    };

    let t = build_matrix(&OperatorSymbol::Affine(phi.clone()), n_in, k_out)?;
    let matrix = sigma_max_sq(&t, POWER_TOL)?;
    let kernel = kernel_sup_sq(&t, &kernel_w_grid())?.1;

    let big_c = if r > 0.0 { affine::effective_constant(phi.coeffs())? } else { 0.0 };
    let combo = (1.0 - big_c) * genlower + big_c * zeta_xi;
    let entries = phi.coeffs().entries();
    let uniform = r > 0.0 && entries.iter().all(|&x| x == entries[0]);
    let smallnorm = genlower * (1.0 + 1.0 / phi.d().max(1) as f64);
    let new_ok = single && (c.re - 0.5 - r).abs() <= CLASS_TOL && xi >= alpha0();
    let newupper = (zeta(1.0 + 2.0 * xi)? + zeta_xi) / 2.0;

    Ok(BoundReport {
        entries: vec![
            entry("genlower", Side::Lower, genlower, true, "point evaluation at c: zeta(2 Re c)"),
            entry("adjoint_lower", Side::Lower, adjoint, adjoint_ok, adjoint_src),
            entry("matrix_lower", Side::Lower, matrix, true, "largest singular value squared of the truncated matrix"),
            entry("kernel_S_lower", Side::Lower, kernel, true, "sup over real w of truncated kernel quotients"),
            entry("mpq_upper", Side::Upper, zeta_xi, single || r == 0.0, "zeta(1 + xi) for a single active prime"),
            entry("combo_upper", Side::Upper, combo, true, "(1 - C) zeta(2 Re c) + C zeta(1 + xi), C = |c|_2^2 / |c|_1^2"),
            entry("smallnorm_upper", Side::Upper, smallnorm, uniform, "zeta(2 Re c)(1 + 1/d) for uniform coefficients"),
            entry("newupper", Side::Upper, newupper, new_ok, "(zeta(1 + 2 xi) + zeta(1 + xi)) / 2 for Re c - 1/2 = r = xi >= alpha0"),
            entry("brevig_lower", Side::Lower, f64::NAN, false, "Cayley-transform symbols only"),
            entry("brevig_upper", Side::Upper, f64::NAN, false, "Cayley-transform symbols only"),
        ],
    })
}

/// Bounds for `phi_alpha(s) = 1/2 + alpha (1 - 2^{-s}) / (1 + 2^{-s})`.
pub fn suite_for_phi_alpha(alpha: f64, n_in: usize, k_out: usize) -> Result<BoundReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    let genlower = zeta(1.0 + 2.0 * alpha)?;
    let lower = (2.0 / alpha).max(genlower);
    let upper = (2.0 / alpha).max(zeta(1.0 + alpha)?);
    let adjoint = adjoint_bound_cayley(alpha)?;
    let t = build_matrix(&OperatorSymbol::Cayley { alpha }, n_in, k_out)?;
    let matrix = sigma_max_sq(&t, POWER_TOL)?;
    let kernel = kernel_sup_sq(&t, &kernel_w_grid())?.1;
    Ok(BoundReport {
        entries: vec![
            entry("genlower", Side::Lower, genlower, true, "point evaluation at c: zeta(1 + 2 alpha)"),
            entry("adjoint_lower", Side::Lower, adjoint, true, "sup of 4x/(1+x)^2 zeta(1 + 2 alpha x)"),
            entry("matrix_lower", Side::Lower, matrix, true, "largest singular value squared of the truncated matrix"),
            entry("kernel_S_lower", Side::Lower, kernel, true, "sup over real w of truncated kernel quotients"),
            entry("mpq_upper", Side::Upper, f64::NAN, false, "affine symbols only"),
            entry("combo_upper", Side::Upper, f64::NAN, false, "affine symbols only"),
            entry("smallnorm_upper", Side::Upper, f64::NAN, false, "affine symbols only"),
            entry("newupper", Side::Upper, f64::NAN, false, "affine symbols only"),
            entry("brevig_lower", Side::Lower, lower, true, "max(2/alpha, zeta(1 + 2 alpha))"),
            entry("brevig_upper", Side::Upper, upper, true, "max(2/alpha, zeta(1 + alpha))"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn affine_op(c: f64, coeffs: &[f64]) -> OperatorSymbol {
        OperatorSymbol::Affine(AffineSymbol::new(re(c), coeffs.to_vec()).unwrap())
    }

    #[test]
    fn index_sets() {
        assert_eq!(multi_indices(2, 2).len(), 6);
        assert_eq!(multi_indices(3, 4).len(), binomial_usize(7, 3));
        assert_eq!(multi_indices(0, 5), vec![Vec::<u32>::new()]);
        assert_eq!(default_k_out(1), 40);
        assert!(binomial_usize(default_k_out(3) + 3, 3) <= DEFAULT_ROW_BUDGET);
    }

    #[test]
    fn first_column_is_unit() {
        let t = build_matrix(&affine_op(2.0, &[0.5, 0.7]), 8, 6).unwrap();
        assert_eq!(t.entries[[0, 0]], re(1.0));
        assert!(t.entries.column(0).iter().skip(1).all(|z| *z == Complex64::zero()));
        assert!(t.defects[0].abs() < 1e-15);
    }

    #[test]
    fn constant_symbol_matrix() {
        let t = build_matrix(&OperatorSymbol::Affine(AffineSymbol::constant(re(1.5)).unwrap()), 10, 5).unwrap();
        assert_eq!(t.rows(), 1);
        for n in 1..=10 {
            assert!((t.entries[[0, n - 1]].re - (n as f64).powf(-1.5)).abs() < 1e-15);
        }
        let s = sigma_max_sq(&t, POWER_TOL).unwrap();
        let expect: f64 = (1..=10).map(|n| (n as f64).powf(-3.0)).sum();
        assert!((s - expect).abs() < 1e-12);
    }

    #[test]
    fn column_defects_certify() {
        let phi = AffineSymbol::new(re(2.0), vec![0.8, 0.5]).unwrap();
        let t = build_matrix(&OperatorSymbol::Affine(phi.clone()), 30, 12).unwrap();
        for n in 1..=30 {
            let exact = affine::comp_norm_sq(&phi, &DirichletPoly::monomial(n as u64, re(1.0)), 200).unwrap();
            assert!((t.column_norm_sq(n - 1) + t.defects[n - 1] - exact).abs() < 1e-10);
        }
        let s = sigma_max_sq(&t, POWER_TOL).unwrap();
        let max_col = (0..30).map(|i| t.column_norm_sq(i)).fold(0.0, f64::max);
        assert!(s >= max_col - 1e-12);
    }

    #[test]
    fn cayley_columns_match_laguerre() {
        // exp(-a (1-z)/(1+z)) = e^{-a} sum (-1)^k L_k^{(-1)}(2a) z^k
        let alpha = 0.8;
        let t = build_matrix(&OperatorSymbol::Cayley { alpha }, 12, 30).unwrap();
        for n in [2usize, 7, 12] {
            let a = alpha * (n as f64).ln();
            let x = 2.0 * a;
            let mut lag = vec![1.0, -x];
            for k in 1..30 {
                let next = ((2 * k) as f64 - x) * lag[k] / (k + 1) as f64 - (k as f64 - 1.0) * lag[k - 1] / (k + 1) as f64;
                lag.push(next);
            }
            for k in 0..=30 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let expect = (n as f64).powf(-0.5) * (-a).exp() * sign * lag[k];
                assert!((t.entries[[k, n - 1]].re - expect).abs() < 1e-12, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn kernel_limits() {
        let op = affine_op(1.5, &[1.0]);
        let q = kernel_quotient(&op, re(50.0), 32, 30).unwrap();
        assert!(q.ratio > 0.99 && q.ratio < 1.01);
        let op = OperatorSymbol::Affine(AffineSymbol::constant(re(1.5)).unwrap());
        for w in [0.6, 1.0, 3.0] {
            let q = kernel_quotient(&op, re(w), 64, 10).unwrap();
            assert!(q.ratio * q.ratio <= zeta(3.0).unwrap() + 1e-6);
        }
        assert!(kernel_quotient(&op, re(0.5), 8, 4).is_err());
    }

    #[test]
    fn adjoint_2s_examples() {
        let v = adjoint_bound_2s(re(0.75), 0.25).unwrap();
        assert!((v - 4.0).abs() < 1e-9);
        let v = adjoint_bound_2s(re(1.5), 1.0).unwrap();
        assert!(v > 1.0 && v > zeta(3.0).unwrap());
        assert!(adjoint_bound_2s(re(1.2), 1.0).is_err());
        assert!(adjoint_bound_2s(re(1.2), 0.0).is_err());
    }

    #[test]
    fn adjoint_general_examples() {
        let phi = AffineSymbol::constant(re(1.5)).unwrap();
        let v = adjoint_bound_general(&phi, &LambdaSpec::FullIntegers, &[40.0]).unwrap();
        assert!(v >= zeta(3.0).unwrap() - 1e-4);
        let phi = AffineSymbol::new(re(1.5), vec![1.0]).unwrap();
        let grid = log_grid(1e-3, 60.0, GRID_POINTS);
        let geo = adjoint_bound_general(&phi, &LambdaSpec::GeometricPowers(2), &grid).unwrap();
        let full_grid: Vec<f64> = grid.iter().map(|s| s + 0.5).collect();
        let full = adjoint_bound_general(&phi, &LambdaSpec::FullIntegers, &full_grid).unwrap();
        assert!(geo > full, "{geo} vs {full}");
        assert!(geo > zeta(3.0).unwrap());
        assert!((geo - adjoint_bound_2s(re(1.5), 1.0).unwrap()).abs() < 1e-8);
        assert!(adjoint_bound_general(&phi, &LambdaSpec::FullIntegers, &[]).is_err());
        assert!(adjoint_bound_general(&phi, &LambdaSpec::FullIntegers, &[0.4]).is_err());
    }

    #[test]
    fn suite_examples() {
        let phi = AffineSymbol::new(re(1.5), vec![1.0]).unwrap();
        let rep = bound_suite(&phi).unwrap();
        assert!((rep.get("genlower").unwrap().value - 1.202_056_903_159_594).abs() < 1e-12);
        let mpq = rep.get("mpq_upper").unwrap();
        assert!(mpq.applicable && (mpq.value - 1.644_934_066_848_226).abs() < 1e-12);
        assert!(!rep.get("newupper").unwrap().applicable);
        assert!(rep.consistent());

        let phi = AffineSymbol::new(re(2.5), vec![2.0]).unwrap();
        let rep = bound_suite(&phi).unwrap();
        let nu = rep.get("newupper").unwrap();
        assert!(nu.applicable);
        let expect = (zeta(5.0).unwrap() + zeta(3.0).unwrap()) / 2.0;
        assert!((nu.value - expect).abs() < 1e-14 && (nu.value - 1.119_47).abs() < 5e-5);
        assert!(nu.value < rep.get("mpq_upper").unwrap().value);

        let phi = AffineSymbol::new(re(2.0), vec![0.5, 0.5]).unwrap();
        let rep = bound_suite(&phi).unwrap();
        let xi = affine::xi(&phi).unwrap();
        let expect = 0.5 * zeta(4.0).unwrap() + 0.5 * zeta(1.0 + xi).unwrap();
        assert!((rep.get("combo_upper").unwrap().value - expect).abs() < 1e-14);
        assert!(!rep.get("mpq_upper").unwrap().applicable);
        assert!(rep.get("smallnorm_upper").unwrap().applicable);
        assert!(rep.consistent());
    }

    #[test]
    fn phi_alpha_suites() {
        let rep = suite_for_phi_alpha(1.0, 32, 20).unwrap();
        assert_eq!(rep.certified_norm_sq(), Some(2.0));
        assert!(rep.get("adjoint_lower").unwrap().value >= 2.0_f64.max(zeta(3.0).unwrap()));
        assert!(rep.consistent());
        let rep = suite_for_phi_alpha(3.0, 16, 10).unwrap();
        assert_eq!(rep.get("brevig_lower").unwrap().value, zeta(7.0).unwrap());
        assert_eq!(rep.get("brevig_upper").unwrap().value, zeta(4.0).unwrap());
        assert!(rep.certified_norm_sq().is_none());
        assert!(rep.consistent());
    }

    #[test]
    fn report_json() {
        let rep = suite_for_phi_alpha(1.0, 8, 4).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        let first = &v["entries"][0];
        assert_eq!(first["name"], "genlower");
        assert_eq!(first["applicable"], true);
        assert!(v["entries"][4]["value"].is_null());
    }
}
