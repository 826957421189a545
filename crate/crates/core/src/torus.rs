//! Sampling on the infinite torus: boundary values, Haar measures of level sets,
//! time averages along the Kronecker flow and the inner-function example.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{AffineSymbol, CLASS_TOL};
use crate::dseries::{Character, DirichletPoly};
use crate::error::{domain, H2Error, Result};
use crate::primes::{factor_over, first_primes};

/// Samples drawn per independent RNG block.
pub const BLOCK: usize = 4096;
/// Minimum distance to a pole accepted by the inner-function routines.
pub const POLE_TOL: f64 = 1e-12;

/// Number of samples, RNG seed and number of torus coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplePlan {
    pub n_samples: usize,
    pub seed: u64,
    pub d: usize,
}

impl SamplePlan {
    pub fn new(n_samples: usize, seed: u64, d: usize) -> Result<Self> {
        if n_samples == 0 {
            return domain("n_samples must be >= 1");
        }
        Ok(Self { n_samples, seed, d })
    }

    fn blocks(&self) -> usize {
        self.n_samples.div_ceil(BLOCK)
    }

    /// Angles for one block, laid out sample-major. Coordinate `j` of block `b` comes from
    /// its own ChaCha stream, so the draw does not depend on thread count or on `d`.
    fn block_angles(&self, b: usize) -> Vec<f64> {
        let len = BLOCK.min(self.n_samples - b * BLOCK);
        let mut out = vec![0.0; len * self.d];
        for j in 0..self.d {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(((j as u64) << 40) | b as u64);
            for i in 0..len {
                let u = (rng.gen::<u64>() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                out[i * self.d + j] = std::f64::consts::TAU * u;
            }
        }
        out
    }

    /// Mean and standard error of `f` over the plan; `f` receives one torus point.
    fn average<F>(&self, f: F) -> (f64, f64)
    where
        F: Fn(&[Complex64]) -> f64 + Sync,
    {
        let partial: Vec<(f64, f64)> = (0..self.blocks())
            .into_par_iter()
            .map(|b| {
                let angles = self.block_angles(b);
                let mut chi = vec![Complex64::new(1.0, 0.0); self.d];
                let (mut s, mut s2) = (0.0, 0.0);
                for point in angles.chunks(self.d.max(1)).take(BLOCK.min(self.n_samples - b * BLOCK)) {
                    for (z, &t) in chi.iter_mut().zip(point) {
                        *z = Complex64::from_polar(1.0, t);
                    }
                    let v = f(&chi);
                    s += v;
                    s2 += v * v;
                }
                (s, s2)
            })
            .collect();
        let n = self.n_samples as f64;
        let (s, s2) = partial.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        let mean = s / n;
        let var = (s2 / n - mean * mean).max(0.0);
        (mean, (var / n).sqrt())
    }
}

/// Symbols whose boundary values on the torus are explicit.
pub trait BoundarySymbol: Sync {
    fn center(&self) -> Complex64;
    /// Radius `r` of the frame `Theta(z) = c + r z`.
    fn frame_radius(&self) -> f64;
    /// Number of leading primes the symbol depends on.
    fn coords(&self) -> usize;
    fn boundary_value(&self, chi: &[Complex64]) -> Complex64;
    /// `phi(it)`.
    fn on_axis(&self, t: f64) -> Complex64;
}

impl BoundarySymbol for AffineSymbol {
    fn center(&self) -> Complex64 {
        self.c()
    }

    fn frame_radius(&self) -> f64 {
        self.r()
    }

    fn coords(&self) -> usize {
        self.d()
    }

    fn boundary_value(&self, chi: &[Complex64]) -> Complex64 {
        AffineSymbol::boundary_value(self, chi)
    }

    fn on_axis(&self, t: f64) -> Complex64 {
        self.evaluate(Complex64::new(0.0, t))
    }
}

/// `phi = c + P` with `P` a Dirichlet polynomial without constant term, framed by the disc `D(c, r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySymbol {
    c: Complex64,
    r: f64,
    poly: DirichletPoly,
    terms: Vec<(Vec<u32>, Complex64)>,
    d: usize,
}

impl PolySymbol {
    pub fn new(c: Complex64, r: f64, poly: DirichletPoly) -> Result<Self> {
        if poly.coeff(1) != Complex64::new(0.0, 0.0) {
            return domain("polynomial part must vanish at +infinity");
        }
        if !(r > 0.0) {
            return domain("frame radius must be positive");
        }
        let mut d = 0;
        let mut primes = Vec::new();
        while poly.terms().any(|(n, _)| factor_over(n, &primes).is_none()) {
            d += 1;
            if d > 64 {
                return domain("polynomial uses primes beyond the first 64");
            }
            primes = first_primes(d);
        }
        let terms = poly
            .terms()
            .map(|(n, a)| (factor_over(n, &primes).expect("d covers the support"), a))
            .collect();
        Ok(Self { c, r, poly, terms, d })
    }

    pub fn poly(&self) -> &DirichletPoly {
        &self.poly
    }
}

impl BoundarySymbol for PolySymbol {
    fn center(&self) -> Complex64 {
        self.c
    }

    fn frame_radius(&self) -> f64 {
        self.r
    }

    fn coords(&self) -> usize {
        self.d
    }

    fn boundary_value(&self, chi: &[Complex64]) -> Complex64 {
        let mut v = self.c;
        for (e, a) in &self.terms {
            let mut z = *a;
            for (j, &k) in e.iter().enumerate() {
                z *= chi[j].powu(k);
            }
            v += z;
        }
        v
    }

    fn on_axis(&self, t: f64) -> Complex64 {
        self.c + self.poly.evaluate(Complex64::new(0.0, t))
    }
}

/// `phi*(chi)` for an affine symbol.
pub fn boundary_value(phi: &AffineSymbol, chi: &Character) -> Result<Complex64> {
    if chi.dim() < phi.d() {
        return domain(format!("character covers {} coordinates, symbol needs {}", chi.dim(), phi.d()));
    }
    Ok(phi.boundary_value(chi.values()))
}

/// Monte-Carlo estimate with its 95% half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub ci95: f64,
    pub n_samples: usize,
    pub seed: u64,
}

fn check_plan<S: BoundarySymbol + ?Sized>(phi: &S, plan: &SamplePlan) -> Result<()> {
    if plan.d < phi.coords() {
        return domain(format!("plan samples {} coordinates, symbol needs {}", plan.d, phi.coords()));
    }
    Ok(())
}

/// Haar measure of `{chi : |phi*(chi) - c| < delta r}`.
pub fn measure_e_delta<S: BoundarySymbol + ?Sized>(phi: &S, delta: f64, plan: &SamplePlan) -> Result<Estimate> {
    measure_e_delta_rotated(phi, delta, plan, 0.0)
}

/// As [`measure_e_delta`] with every coordinate rotated by `e^{i rot}`.
pub fn measure_e_delta_rotated<S: BoundarySymbol + ?Sized>(
    phi: &S,
    delta: f64,
    plan: &SamplePlan,
    rot: f64,
) -> Result<Estimate> {
    if !(0.0..=1.0).contains(&delta) {
        return domain(format!("delta must lie in [0, 1], got {delta}"));
    }
    let r = phi.frame_radius();
    if !(r > 0.0) {
        return domain("measure of E_delta needs r > 0");
    }
    check_plan(phi, plan)?;
    let c = phi.center();
    let w = Complex64::from_polar(1.0, rot);
    let (p, _) = plan.average(|chi| {
        let v = if rot == 0.0 {
            phi.boundary_value(chi)
        } else {
            let rotated: Vec<Complex64> = chi.iter().map(|z| z * w).collect();
            phi.boundary_value(&rotated)
        };
        if (v - c).norm() < delta * r {
            1.0
        } else {
            0.0
        }
    });
    let n = plan.n_samples as f64;
    Ok(Estimate {
        estimate: p,
        ci95: 1.96 * (p * (1.0 - p) / n).sqrt(),
        n_samples: plan.n_samples,
        seed: plan.seed,
    })
}

/// `C_delta = (1/2) (1 - delta)/(1 + delta) m(E_delta)`.
pub fn shapiro_constant<S: BoundarySymbol + ?Sized>(phi: &S, delta: f64, plan: &SamplePlan) -> Result<Estimate> {
    let m = measure_e_delta(phi, delta, plan)?;
    let factor = 0.5 * (1.0 - delta) / (1.0 + delta);
    Ok(Estimate {
        estimate: factor * m.estimate,
        ci95: factor * m.ci95,
        ..m
    })
}

/// Fraction of a uniform grid on `[-T, T]` where `|phi(it) - c| < delta r`.
pub fn ergodic_measure<S: BoundarySymbol + ?Sized>(phi: &S, delta: f64, t_max: f64, steps: usize) -> Result<f64> {
    if !(t_max > 0.0) || steps < 2 {
        return domain("need T > 0 and at least two steps");
    }
    let r = phi.frame_radius();
    let c = phi.center();
    let hits: usize = (0..steps)
        .into_par_iter()
        .filter(|&i| {
            let t = -t_max + 2.0 * t_max * i as f64 / (steps - 1) as f64;
            (phi.on_axis(t) - c).norm() < delta * r
        })
        .count();
    Ok(hits as f64 / steps as f64)
}

/// Samples `phi(it)` on a uniform grid, returning `(t, re, im)` triples.
pub fn curve_trace<S: BoundarySymbol + ?Sized>(phi: &S, t_min: f64, t_max: f64, steps: usize) -> Result<Vec<(f64, f64, f64)>> {
    if steps < 2 || !(t_max > t_min) {
        return domain("need steps >= 2 and t_max > t_min");
    }
    Ok((0..steps)
        .into_par_iter()
        .map(|i| {
            let t = t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64;
            let z = phi.on_axis(t);
            (t, z.re, z.im)
        })
        .collect())
}

/// Smallest and largest `|z - c|` over a trace.
pub fn trace_radii(trace: &[(f64, f64, f64)], c: Complex64) -> (f64, f64) {
    trace.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, x, y)| {
        let d = (Complex64::new(x, y) - c).norm();
        (lo.min(d), hi.max(d))
    })
}

/// CSV with header `t,re,im`.
pub fn trace_csv(trace: &[(f64, f64, f64)]) -> String {
    let mut s = String::from("t,re,im\n");
    for (t, x, y) in trace {
        s.push_str(&format!("{t},{x},{y}\n"));
    }
    s
}

/// Mean of `|f(phi*(chi))|^2`, which equals `||f ∘ phi||^2` for Dirichlet polynomials `f`.
pub fn carleson_mc<S: BoundarySymbol + ?Sized>(phi: &S, f: &DirichletPoly, plan: &SamplePlan) -> Result<Estimate> {
    check_plan(phi, plan)?;
    let (mean, se) = plan.average(|chi| f.evaluate(phi.boundary_value(chi)).norm_sqr());
    Ok(Estimate {
        estimate: mean,
        ci95: 1.96 * se,
        n_samples: plan.n_samples,
        seed: plan.seed,
    })
}

/// `g(s) = exp(-sum lambda_j (e^{i theta_j} + p_j^{-s}) / (e^{i theta_j} - p_j^{-s}))` and
/// the symbol `c + r (g - g(inf)) / (1 - g(inf) g)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnerSymbolParams {
    pub lambdas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub c: Complex64,
    pub r: f64,
    /// `sum_{j > J} lambda_j` for the factors left out; zero for a finite product.
    pub tail_mass: f64,
}

impl InnerSymbolParams {
    pub fn new(lambdas: Vec<f64>, thetas: Vec<f64>, c: Complex64, r: f64) -> Result<Self> {
        if lambdas.len() != thetas.len() {
            return domain("lambdas and thetas differ in length");
        }
        if lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return domain("lambdas must be finite and nonnegative");
        }
        if !(r > 0.0 && c.re - 0.5 >= r - CLASS_TOL) {
            return domain("need Re c - 1/2 >= r > 0");
        }
        Ok(Self {
            lambdas,
            thetas,
            c,
            r,
            tail_mass: 0.0,
        })
    }

    pub fn with_tail_mass(mut self, tail: f64) -> Result<Self> {
        if !(tail >= 0.0 && tail.is_finite()) {
            return domain("tail mass must be finite and nonnegative");
        }
        self.tail_mass = tail;
        Ok(self)
    }

    fn g_infinity(&self) -> f64 {
        (-self.lambdas.iter().sum::<f64>()).exp()
    }

    /// `log g` at `chi_j p_j^{-sigma}`.
    fn log_g(&self, chi: &Character, sigma: f64) -> Result<Complex64> {
        if !(sigma > 0.0) {
            return domain(format!("sigma must be positive, got {sigma}"));
        }
        let j_max = self.lambdas.len();
        if chi.dim() < j_max {
            return domain(format!("character covers {} coordinates, need {j_max}", chi.dim()));
        }
        let primes = first_primes(j_max);
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..j_max {
            let e = Complex64::from_polar(1.0, self.thetas[j]);
            let z = chi.values()[j] * (primes[j] as f64).powf(-sigma);
            let gap = (e - z).norm();
            if gap < POLE_TOL {
                return Err(H2Error::PoleProximity { distance: gap });
            }
            s += self.lambdas[j] * (e + z) / (e - z);
        }
        Ok(-s)
    }

    /// Bound on the error in `log |g|` from the omitted factors.
    pub fn truncation_bound(&self, sigma: f64) -> f64 {
        if self.tail_mass == 0.0 {
            return 0.0;
        }
        let next = *first_primes(self.lambdas.len() + 1).last().expect("at least one prime") as f64;
        2.0 * self.tail_mass / (1.0 - next.powf(-sigma))
    }
}

/// `|g_chi(sigma)|` with its truncation bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InnerEval {
    pub modulus: f64,
    pub truncation_bound: f64,
}

pub fn inner_boundary_modulus(params: &InnerSymbolParams, chi: &Character, sigma: f64) -> Result<InnerEval> {
    let lg = params.log_g(chi, sigma)?;
    Ok(InnerEval {
        modulus: lg.re.exp(),
        truncation_bound: params.truncation_bound(sigma),
    })
}

pub fn mobius_symbol_value(params: &InnerSymbolParams, chi: &Character, sigma: f64) -> Result<Complex64> {
    let g = params.log_g(chi, sigma)?.exp();
    let g_inf = params.g_infinity();
    Ok(params.c + params.r * (g - g_inf) / (1.0 - g_inf * g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn plans_are_reproducible() {
        let plan = SamplePlan::new(10_000, 7, 3).unwrap();
        assert_eq!(plan.block_angles(1), plan.block_angles(1));
        let wider = SamplePlan::new(10_000, 7, 5).unwrap();
        let (a, b) = (plan.block_angles(0), wider.block_angles(0));
        for i in 0..100 {
            assert_eq!(a[i * 3..i * 3 + 3], b[i * 5..i * 5 + 3]);
        }
        assert_ne!(plan.block_angles(0), SamplePlan::new(10_000, 8, 3).unwrap().block_angles(0));
        assert!(SamplePlan::new(0, 1, 1).is_err());
    }

    #[test]
    fn boundary_examples() {
        let phi = AffineSymbol::new(re(3.0), vec![1.0, 0.5, 0.25]).unwrap();
        let r = phi.r();
        let v = boundary_value(&phi, &Character::trivial(3)).unwrap();
        assert!((v - re(3.0 + r)).norm() < 1e-15);
        let v = boundary_value(&phi, &Character::from_angles(&[std::f64::consts::PI; 3])).unwrap();
        assert!((v - re(3.0 - r)).norm() < 1e-15);
        assert!(boundary_value(&phi, &Character::trivial(2)).is_err());
    }

    #[test]
    fn measure_edges() {
        let phi = AffineSymbol::new(re(3.0), vec![0.7, 0.5]).unwrap();
        let plan = SamplePlan::new(20_000, 1, 2).unwrap();
        assert_eq!(measure_e_delta(&phi, 1.0, &plan).unwrap().estimate, 1.0);
        assert_eq!(measure_e_delta(&phi, 0.0, &plan).unwrap().estimate, 0.0);
        assert_eq!(shapiro_constant(&phi, 1.0, &plan).unwrap().estimate, 0.0);
        assert!(measure_e_delta(&phi, 1.5, &plan).is_err());
        let constant = AffineSymbol::constant(re(2.0)).unwrap();
        assert!(measure_e_delta(&constant, 0.5, &plan).is_err());
    }

    #[test]
    fn inner_examples() {
        let p = InnerSymbolParams::new(vec![0.5], vec![0.0], re(2.0), 1.0).unwrap();
        let far = inner_boundary_modulus(&p, &Character::trivial(1), 2000.0).unwrap();
        assert!((far.modulus - (-0.5f64).exp()).abs() < 1e-15);
        assert!((far.modulus - 0.6065).abs() < 1e-4);
        let near = inner_boundary_modulus(&p, &Character::from_angles(&[std::f64::consts::PI]), 1e-8).unwrap();
        assert!((near.modulus - 1.0).abs() < 1e-6);
        assert_eq!(mobius_symbol_value(&p, &Character::trivial(1), 2000.0).unwrap(), re(2.0));
        // chi_1 = e^{i theta_1} exactly and sigma tiny: pole
        let tiny = inner_boundary_modulus(&p, &Character::trivial(1), 1e-14);
        assert!(matches!(tiny, Err(H2Error::PoleProximity { .. })));
    }
}
