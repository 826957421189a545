//! One-dimensional maximisation: dense grid followed by golden-section refinement.

pub const GRID_POINTS: usize = 512;
pub const GOLDEN_ITERS: usize = 40;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`; returns the best point seen.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v > best.1 {
                best = (x, v);
            }
        }
    }
    best
}

/// Maximum of `f` over a sorted grid, refined between the neighbours of the best grid point.
pub fn grid_then_golden<F: Fn(f64) -> f64>(f: &F, grid: &[f64]) -> (f64, f64) {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (i, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let mut best = (grid[i], values[i]);
    if grid.len() >= 2 {
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid.len() - 1)];
        let refined = golden_max(f, lo, hi, GOLDEN_ITERS);
        if refined.1 > best.1 {
            best = refined;
        }
    }
    best
}

/// `n` points spaced logarithmically from `lo` to `hi` (both positive).
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

/// Grid on `(0, 1)` clustered logarithmically at both ends.
pub fn unit_interval_grid(n: usize) -> Vec<f64> {
    let half = log_grid(1e-10, 0.5, n / 2);
    let mut g = half.clone();
    g.extend(half.iter().rev().map(|x| 1.0 - x).filter(|&x| x > 0.5));
    g
}
