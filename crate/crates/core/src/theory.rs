//! Closed-form reference quantities: the semicircle law, its moments,
//! binomial degree tails and the asymptotic energy predictor for weighted
//! distance matrices of `G(n, p)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::TheoryError;
use crate::weights::{Builtin, WeightFn};

/// `8 / (3 pi)`: the mean of `|x|` under the unit-variance semicircle law.
pub const MEAN_ABS_UNIT_SEMICIRCLE: f64 = 8.0 / (3.0 * PI);

/// Largest `s` accepted by [`catalan_moment`].
pub const MAX_CATALAN_ORDER: u32 = 12;

/// Semicircle density with variance `sigma^2`, zero outside `[-2 sigma, 2 sigma]`.
pub fn semicircle_pdf(x: f64, sigma: f64) -> f64 {
    let r2 = 4.0 * sigma * sigma;
    if x * x >= r2 {
        return 0.0;
    }
    (r2 - x * x).sqrt() / (2.0 * PI * sigma * sigma)
}

/// Semicircle CDF:
/// `1/2 + x sqrt(4 sigma^2 - x^2) / (4 pi sigma^2) + asin(x / 2 sigma) / pi`.
pub fn semicircle_cdf(x: f64, sigma: f64) -> f64 {
    let r = 2.0 * sigma;
    if x <= -r {
        return 0.0;
    }
    if x >= r {
        return 1.0;
    }
    let s2 = sigma * sigma;
    let value = 0.5 + x * (r * r - x * x).sqrt() / (4.0 * PI * s2) + (x / r).asin() / PI;
    value.clamp(0.0, 1.0)
}

/// `(pdf, cdf)` at `x`.
pub fn semicircle(x: f64, sigma: f64) -> (f64, f64) {
    (semicircle_pdf(x, sigma), semicircle_cdf(x, sigma))
}

/// `E|X| = 8 sigma / (3 pi)` for the semicircle law.
pub fn mean_abs_semicircle(sigma: f64) -> f64 {
    MEAN_ABS_UNIT_SEMICIRCLE * sigma
}

/// The `2s`-th semicircle moment `C_s sigma^{2s}`, with `C_s` the Catalan
/// number `(2s)! / (s! (s+1)!)`.
pub fn catalan_moment(s: u32, sigma: f64) -> Result<f64, TheoryError> {
    if s > MAX_CATALAN_ORDER {
        return Err(TheoryError::CatalanOrder(s));
    }
    // C_{k+1} = C_k * 2 (2k + 1) / (k + 2), exact in u64 for k <= 12.
    let mut catalan: u64 = 1;
    for k in 0..u64::from(s) {
        catalan = catalan * 2 * (2 * k + 1) / (k + 2);
    }
    Ok(catalan as f64 * sigma.powi(2 * s as i32))
}

/// Upper binomial tail `B(l; m, p) = sum_{j >= l} C(m, j) p^j (1-p)^{m-j}`.
pub fn binomial_tail(l: u64, m: u64, p: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    if l > m {
        return 0.0;
    }
    binomial_range_sum(l, m, m, p)
}

/// Lower binomial tail `sum_{j <= q} b(j; m, p)`.
fn binomial_head(q: u64, m: u64, p: f64) -> f64 {
    if q >= m {
        return 1.0;
    }
    binomial_range_sum(0, q, m, p)
}

/// `sum_{j = lo..=hi} b(j; m, p)` accumulated in log space relative to the
/// largest term, with Neumaier-compensated summation.
fn binomial_range_sum(lo: u64, hi: u64, m: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return if lo == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if hi == m { 1.0 } else { 0.0 };
    }
    let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
    let ln_ratio = ln_p - ln_q;
    let mut ln_term = CompensatedSum::default();
    for k in 1..=lo {
        ln_term.add(((m - lo + k) as f64 / k as f64).ln());
    }
    ln_term.add(lo as f64 * ln_p);
    ln_term.add((m - lo) as f64 * ln_q);
    let mut terms = Vec::with_capacity((hi - lo + 1) as usize);
    for j in lo..=hi {
        terms.push(ln_term.value());
        if j < hi {
            ln_term.add(((m - j) as f64 / (j + 1) as f64).ln());
            ln_term.add(ln_ratio);
        }
    }
    let peak = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = CompensatedSum::default();
    for t in terms {
        sum.add((t - peak).exp());
    }
    (sum.value() * peak.exp()).clamp(0.0, 1.0)
}

/// Neumaier summation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let next = self.sum + v;
        self.carry += if self.sum.abs() >= v.abs() {
            (self.sum - next) + v
        } else {
            (v - next) + self.sum
        };
        self.sum = next;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Expected number of vertices of degree at least `q` (`mu`) and of
/// degree at most `q` (`nu`) in `G(n, p)`.
pub fn mu_nu(q: u64, n: u64, p: f64) -> (f64, f64) {
    let m = n.saturating_sub(1);
    let nf = n as f64;
    (nf * binomial_tail(q, m, p), nf * binomial_head(q, m, p))
}

/// Asymptotic energy prediction for `W_f(G(n, p))`.
///
/// In the main branch (`f1 != f2`) the energy is
/// `|f1 - f2| (8 / 3 pi) sqrt(p (1 - p)) n^{3/2}` to leading order. In the
/// degenerate branch (`f1 == f2`) the leading term vanishes and only the
/// scale `|f2| n^{3/2}` of the `o(1)` envelope is known.
///
/// The factor `sqrt(p (1 - p))` is applied in both branches' main term; it
/// is what the adjacency special case and every catalog entry require.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub n: usize,
    pub p: f64,
    pub f1: f64,
    pub f2: f64,
    pub sigma: f64,
    /// `|f1 - f2| (8 / 3 pi) sigma`; zero when degenerate.
    pub coefficient: f64,
    /// Power of `n` applied to the coefficient (always 3/2).
    pub exponent: f64,
    /// `coefficient * n^{3/2}`.
    pub value: f64,
    pub degenerate: bool,
    /// `|f2| n^{3/2}`: the scale multiplying the unknown `o(1)` remainder.
    pub envelope: f64,
}

/// Predicted energy for `weight` on `G(n, p)`, using `diam = 2`.
pub fn predict_energy(weight: &WeightFn, n: usize, p: f64) -> Result<Prediction, TheoryError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(TheoryError::InvalidProbability(p));
    }
    if n < 2 {
        return Err(TheoryError::TooFewVertices(n));
    }
    let (f1, f2) = weight.predictor_inputs(n, p, 2)?;
    let sigma = (p * (1.0 - p)).sqrt();
    let degenerate = f1 == f2;
    let coefficient = if degenerate {
        0.0
    } else {
        (f1 - f2).abs() * MEAN_ABS_UNIT_SEMICIRCLE * sigma
    };
    let scale = (n as f64).powf(1.5);
    Ok(Prediction {
        n,
        p,
        f1,
        f2,
        sigma,
        coefficient,
        exponent: 1.5,
        value: coefficient * scale,
        degenerate,
        envelope: f2.abs() * scale,
    })
}

/// Closed-form asymptotic law `constant * p^p_power * sqrt(p(1-p)) * n^n_power`
/// for a named weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogLaw {
    pub constant: f64,
    pub p_power: i32,
    pub n_power: f64,
}

impl CatalogLaw {
    pub fn value(&self, n: usize, p: f64) -> f64 {
        self.constant
            * p.powi(self.p_power)
            * (p * (1.0 - p)).sqrt()
            * (n as f64).powf(self.n_power)
    }
}

/// The asymptotic energy law of each builtin weight on `G(n, p)`.
pub fn catalog_law(builtin: Builtin) -> CatalogLaw {
    let third_pi = 3.0 * PI;
    let (numerator, p_power, n_power) = match builtin {
        Builtin::Distance | Builtin::ReverseWiener | Builtin::EdgeIndicator => (8.0, 0, 1.5),
        Builtin::Harary | Builtin::ReciprocalComplementaryWiener => (4.0, 0, 1.5),
        Builtin::HyperWiener => (16.0, 0, 1.5),
        Builtin::DegreeDistance => (16.0, 1, 2.5),
        Builtin::AdditiveHarary => (8.0, 1, 2.5),
        Builtin::Gutman => (8.0, 2, 3.5),
        Builtin::MultiplicativeHarary => (4.0, 2, 3.5),
    };
    CatalogLaw {
        constant: numerator / third_pi,
        p_power,
        n_power,
    }
}
