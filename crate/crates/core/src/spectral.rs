//! Eigenvalues of dense symmetric matrices and the statistics built on
//! them: energy, spectral moments, empirical spectral distributions and the
//! Kolmogorov–Smirnov distance to a reference CDF.
//!
//! The solver reduces the matrix to tridiagonal form with Householder
//! reflections and then runs implicitly shifted QL iterations. Only
//! eigenvalues are computed.

use serde::{Deserialize, Serialize};

use crate::error::SpectralError;
use crate::matrix::SymMatrix;

/// Relative tolerance for the symmetry check on solver input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Iteration budget per matrix, in implicit-shift sweeps per row.
pub const SWEEPS_PER_ROW: usize = 30;

/// Highest moment order accepted by [`spectral_moment`].
pub const MAX_MOMENT_ORDER: u32 = 24;

/// Eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    /// Factor the matrix was multiplied by before solving (1 if unscaled).
    source_scale: f64,
}

impl Spectrum {
    /// Sorts `eigenvalues` descending.
    pub fn new(mut eigenvalues: Vec<f64>, source_scale: f64) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self {
            eigenvalues,
            source_scale,
        }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn source_scale(&self) -> f64 {
        self.source_scale
    }

    pub fn energy(&self) -> f64 {
        energy(self)
    }

    /// The `count` eigenvalues of largest magnitude, largest first.
    pub fn top_abs(&self, count: usize) -> Vec<f64> {
        let mut abs: Vec<f64> = self.eigenvalues.iter().map(|v| v.abs()).collect();
        abs.sort_by(|a, b| b.total_cmp(a));
        abs.truncate(count);
        abs
    }
}

/// Eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues(matrix: &SymMatrix) -> Result<Spectrum, SpectralError> {
    sym_eigenvalues_scaled(matrix, 1.0)
}

/// Eigenvalues of `scale * matrix`, with the factor recorded on the result.
pub fn sym_eigenvalues_scaled(matrix: &SymMatrix, scale: f64) -> Result<Spectrum, SpectralError> {
    check_symmetric(matrix)?;
    let n = matrix.n();
    if n == 0 {
        return Ok(Spectrum::new(Vec::new(), scale));
    }
    let mut a: Vec<f64> = if scale == 1.0 {
        matrix.as_slice().to_vec()
    } else {
        matrix.as_slice().iter().map(|v| v * scale).collect()
    };
    let (mut diag, mut offdiag) = tridiagonalize(&mut a, n);
    tridiagonal_ql(&mut diag, &mut offdiag)?;
    Ok(Spectrum::new(diag, scale))
}

fn check_symmetric(matrix: &SymMatrix) -> Result<(), SpectralError> {
    let n = matrix.n();
    if matrix.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(SpectralError::NonFinite);
    }
    let limit = SYMMETRY_TOLERANCE * matrix.max_abs();
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = (matrix.get(i, j) - matrix.get(j, i)).abs();
            if diff > limit {
                return Err(SpectralError::NonSymmetric { i, j, diff });
            }
        }
    }
    Ok(())
}

/// Householder reduction of the symmetric `n x n` row-major matrix `a` to
/// tridiagonal form. Only the lower triangle is read and updated, always
/// row-wise. Returns `(diagonal, subdiagonal)` where `subdiagonal[i]` couples
/// rows `i` and `i + 1` and the last entry is zero.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut sub = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut q = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let row_i = i * n;
        if l == 0 {
            sub[i] = a[row_i];
            continue;
        }
        let scale: f64 = a[row_i..=row_i + l].iter().map(|v| v.abs()).sum();
        if scale == 0.0 {
            sub[i] = a[row_i + l];
            continue;
        }
        let mut h = 0.0;
        for k in 0..=l {
            let v = a[row_i + k] / scale;
            u[k] = v;
            h += v * v;
        }
        let f = u[l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        sub[i] = scale * g;
        h -= f * g;
        u[l] = f - g;

        // q = A u / h over the leading (l+1) block, lower triangle only.
        q[..=l].fill(0.0);
        for j in 0..=l {
            let row = &a[j * n..j * n + j];
            let uj = u[j];
            let mut s = a[j * n + j] * uj;
            for ((&ajk, &uk), qk) in row.iter().zip(&u[..j]).zip(&mut q[..j]) {
                s += ajk * uk;
                *qk += ajk * uj;
            }
            q[j] += s;
        }
        let mut uq = 0.0;
        for j in 0..=l {
            q[j] /= h;
            uq += q[j] * u[j];
        }
        let half = uq / (h + h);
        for j in 0..=l {
            q[j] -= half * u[j];
        }
        // A <- A - u q^T - q u^T
        for j in 0..=l {
            let (uj, qj) = (u[j], q[j]);
            let row = &mut a[j * n..=j * n + j];
            for ((ajk, &qk), &uk) in row.iter_mut().zip(&q[..=j]).zip(&u[..=j]) {
                *ajk -= uj * qk + qj * uk;
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut offdiag = vec![0.0; n];
    offdiag[..n - 1].copy_from_slice(&sub[1..]);
    (diag, offdiag)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. On return `d`
/// holds the eigenvalues (unsorted).
///
/// An off-diagonal entry `e[m]` counts as zero once
/// `|e[m]| <= eps * (|d[m]| + |d[m+1]|)`. At most `30 n` sweeps are run.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<(), SpectralError> {
    let n = d.len();
    let budget = SWEEPS_PER_ROW * n;
    let mut sweeps = 0;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > budget {
                return Err(SpectralError::NoConvergence { sweeps: budget });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// `sum |lambda_i|`.
pub fn energy(spectrum: &Spectrum) -> f64 {
    spectrum.eigenvalues.iter().map(|v| v.abs()).sum()
}

/// `(1/n) sum lambda_i^k`. The spectrum must already be at the intended
/// scale (typically `n^{-1/2}`).
pub fn spectral_moment(spectrum: &Spectrum, k: u32) -> Result<f64, SpectralError> {
    if k > MAX_MOMENT_ORDER {
        return Err(SpectralError::MomentOrder(k));
    }
    if spectrum.n() == 0 {
        return Ok(0.0);
    }
    let k = k as i32;
    let sum: f64 = spectrum.eigenvalues.iter().map(|v| v.powi(k)).sum();
    Ok(sum / spectrum.n() as f64)
}

/// An empirical CDF: distinct sorted jump points with the cumulative mass
/// at (and including) each one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDistribution {
    points: Vec<f64>,
    cumulative: Vec<f64>,
}

impl StepDistribution {
    /// Places mass `1/len` on every sample; ties merge into one jump.
    pub fn from_samples(samples: &[f64]) -> Self {
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let total = sorted.len() as f64;
        let mut points = Vec::new();
        let mut cumulative = Vec::new();
        for (idx, &x) in sorted.iter().enumerate() {
            let count = (idx + 1) as f64 / total;
            if points.last() == Some(&x) {
                *cumulative.last_mut().expect("parallel vectors") = count;
            } else {
                points.push(x);
                cumulative.push(count);
            }
        }
        Self { points, cumulative }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// `F(x)`: mass at or below `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.points.partition_point(|&p| p <= x);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }
}

/// Empirical spectral distribution of a spectrum.
pub fn esd(spectrum: &Spectrum) -> StepDistribution {
    StepDistribution::from_samples(&spectrum.eigenvalues)
}

/// `sup_x |F(x) - cdf(x)|` for a step function `F` and a continuous `cdf`,
/// evaluated on both sides of every jump.
pub fn ks_distance<F>(dist: &StepDistribution, cdf: F) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (&x, &at) in dist.points.iter().zip(&dist.cumulative) {
        let c = cdf(x);
        worst = worst.max((below - c).abs()).max((at - c).abs());
        below = at;
    }
    worst
}

/// Fixed-range histogram with mass fractions per bin; samples outside the
/// range are counted in the nearest edge bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub mass: Vec<f64>,
}

impl Histogram {
    pub fn builder(lo: f64, hi: f64, bins: usize) -> HistogramBuilder {
        HistogramBuilder {
            lo,
            hi,
            counts: vec![0; bins],
            total: 0,
        }
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.mass.len() as f64
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        self.lo + (k as f64 + 0.5) * self.bin_width()
    }
}

#[derive(Debug, Clone)]
pub struct HistogramBuilder {
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    total: u64,
}

impl HistogramBuilder {
    pub fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        let t = (x - self.lo) / (self.hi - self.lo) * bins as f64;
        let k = if t < 0.0 {
            0
        } else {
            (t as usize).min(bins - 1)
        };
        self.counts[k] += 1;
        self.total += 1;
    }

    pub fn extend(&mut self, xs: &[f64]) {
        for &x in xs {
            self.add(x);
        }
    }

    pub fn finish(self) -> Histogram {
        let total = self.total.max(1) as f64;
        Histogram {
            lo: self.lo,
            hi: self.hi,
            mass: self.counts.iter().map(|&c| c as f64 / total).collect(),
        }
    }
}
