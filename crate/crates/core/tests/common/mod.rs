//! Reference computations written independently of the library code.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wdm_core::SymMatrix;

/// Composite Simpson rule on `[a, b]` with `intervals` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    assert!(intervals.is_multiple_of(2));
    let h = (b - a) / intervals as f64;
    let mut sum = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// `integral g(x) pdf(x) dx` over `[-2 sigma, 2 sigma]` for an arbitrary
/// density on that support, via `x = 2 sigma sin(theta)`. The range is split
/// at zero so integrands with a kink there (`|x|`) stay piecewise smooth.
pub fn semicircle_expectation<G, P>(g: G, pdf: P, sigma: f64) -> f64
where
    G: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    let integrand = |t: f64| {
        let x = 2.0 * sigma * t.sin();
        g(x) * pdf(x) * 2.0 * sigma * t.cos()
    };
    simpson(integrand, -PI / 2.0, 0.0, 4000) + simpson(integrand, 0.0, PI / 2.0, 4000)
}

/// `(2s)! / (s! (s + 1)!)` by direct factorial ratio in `f64`.
pub fn catalan_by_factorials(s: u32) -> f64 {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    fact(2 * s) / (fact(s) * fact(s + 1))
}

/// Characteristic polynomial `det(x I - A)` of a small integer matrix,
/// coefficients from the constant term up, by Faddeev-LeVerrier in exact
/// integer arithmetic.
pub fn char_poly(a: &[Vec<i64>]) -> Vec<i64> {
    let n = a.len();
    let matmul = |x: &[Vec<i64>], y: &[Vec<i64>]| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![0i64; n + 1];
    coeffs[n] = 1;
    let mut m = vec![vec![0i64; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += coeffs[n - k + 1];
        }
        m = next;
        let am = matmul(a, &m);
        let trace: i64 = (0..n).map(|i| am[i][i]).sum();
        assert_eq!(trace % k as i64, 0);
        coeffs[n - k] = -trace / k as i64;
    }
    coeffs
}

fn eval_poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| k as f64 * a)
        .collect()
}

/// Real roots (with multiplicity, ascending) of a polynomial known to have
/// only real roots. Critical points come from the derivative recursively;
/// each interval between them holds at most one simple root, found by
/// bisection. A critical point where the polynomial vanishes is a multiple
/// root.
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    let degree = c.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    if degree == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[degree];
    let bound = 1.0
        + c[..degree]
            .iter()
            .map(|a| (a / lead).abs())
            .fold(0.0, f64::max);
    let crit = real_roots(&derivative(c));
    let scale = |x: f64| {
        c.iter()
            .enumerate()
            .map(|(k, a)| a.abs() * x.abs().powi(k as i32))
            .sum::<f64>()
    };

    let mut roots = Vec::new();
    // Group derivative roots into distinct points with multiplicity.
    let mut distinct: Vec<(f64, usize)> = Vec::new();
    for &x in &crit {
        match distinct.last_mut() {
            Some((y, m)) if (x - *y).abs() <= 1e-9 * (1.0 + y.abs()) => *m += 1,
            _ => distinct.push((x, 1)),
        }
    }
    let mut fences = vec![-bound];
    for &(x, m) in &distinct {
        fences.push(x);
        if eval_poly(c, x).abs() <= 1e-9 * scale(x) {
            roots.extend(std::iter::repeat_n(x, m + 1));
        }
    }
    fences.push(bound);
    for w in fences.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (eval_poly(c, lo), eval_poly(c, hi));
        if flo == 0.0 || fhi == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        if flo.abs() <= 1e-9 * scale(lo) || fhi.abs() <= 1e-9 * scale(hi) {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval_poly(c, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots.sort_by(f64::total_cmp);
    assert_eq!(roots.len(), degree, "lost roots of {c:?}");
    roots
}

pub fn random_integer_symmetric(rng: &mut ChaCha8Rng, n: usize, max: i64) -> Vec<Vec<i64>> {
    let mut upper = vec![vec![0i64; n]; n];
    for (i, row) in upper.iter_mut().enumerate() {
        for v in &mut row[i..] {
            *v = rng.random_range(-max..=max);
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| upper[i.min(j)][i.max(j)]).collect())
        .collect()
}

pub fn to_sym(a: &[Vec<i64>]) -> SymMatrix {
    let n = a.len();
    SymMatrix::from_row_major(n, a.iter().flatten().map(|&v| v as f64).collect()).unwrap()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    SymMatrix::from_upper(n, |_, _| rng.random_range(-1.0..1.0))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Asymptotic energy constants listed per weight: `(constant, p power,
/// n power)` so that the energy is `constant * p^a * sqrt(p (1 - p)) * n^b`.
pub const CATALOG: [(&str, f64, i32, f64); 9] = [
    ("distance", 8.0 / (3.0 * PI), 0, 1.5),
    ("harary", 4.0 / (3.0 * PI), 0, 1.5),
    ("hyper_wiener", 16.0 / (3.0 * PI), 0, 1.5),
    ("rcw", 4.0 / (3.0 * PI), 0, 1.5),
    ("reverse_wiener", 8.0 / (3.0 * PI), 0, 1.5),
    ("dd", 16.0 / (3.0 * PI), 1, 2.5),
    ("gutman", 8.0 / (3.0 * PI), 2, 3.5),
    ("harary_add", 8.0 / (3.0 * PI), 1, 2.5),
    ("harary_mult", 4.0 / (3.0 * PI), 2, 3.5),
];

pub fn catalog_value(entry: (&str, f64, i32, f64), n: usize, p: f64) -> f64 {
    let (_, c, a, b) = entry;
    c * p.powi(a) * (p * (1.0 - p)).sqrt() * (n as f64).powf(b)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
