//! Weight functions `f(D(i,j), d_i, d_j)` for weighted distance matrices.
//!
//! A [`WeightFn`] is either one of the named topological-index weights in
//! [`Builtin`] or a custom expression (see [`crate::expr`]). The textual
//! form accepted everywhere is the builtin name or `expr:<source>`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, WeightSpecError};
use crate::expr::{checked_div, indicator_eq, Expr};

/// Prefix that marks a custom expression in a weight specification.
pub const EXPR_PREFIX: &str = "expr:";

/// Everything a weight may depend on for one vertex pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightContext {
    /// Hop distance `D(i, j)`; always at least 1.
    pub distance: u32,
    pub di: f64,
    pub dj: f64,
    pub n: usize,
    /// Diameter of the graph the pair comes from.
    pub diam: u32,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `D`
    Distance,
    /// `1/D`
    Harary,
    /// `(D + D^2)/2`
    HyperWiener,
    /// `1/(diam + 1 - D)`
    ReciprocalComplementaryWiener,
    /// `diam - D`
    ReverseWiener,
    /// `(di + dj) D`
    DegreeDistance,
    /// `di dj D`
    Gutman,
    /// `(di + dj)/D`
    AdditiveHarary,
    /// `di dj / D`
    MultiplicativeHarary,
    /// `1` on edges, `0` otherwise: plain adjacency.
    EdgeIndicator,
}

impl Builtin {
    pub const ALL: [Builtin; 10] = [
        Self::Distance,
        Self::Harary,
        Self::HyperWiener,
        Self::ReciprocalComplementaryWiener,
        Self::ReverseWiener,
        Self::DegreeDistance,
        Self::Gutman,
        Self::AdditiveHarary,
        Self::MultiplicativeHarary,
        Self::EdgeIndicator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Distance => "distance",
            Self::Harary => "harary",
            Self::HyperWiener => "hyper_wiener",
            Self::ReciprocalComplementaryWiener => "rcw",
            Self::ReverseWiener => "reverse_wiener",
            Self::DegreeDistance => "dd",
            Self::Gutman => "gutman",
            Self::AdditiveHarary => "harary_add",
            Self::MultiplicativeHarary => "harary_mult",
            Self::EdgeIndicator => "edge_indicator",
        }
    }

    /// The same weight written in the expression language. Parsing this
    /// source yields a function that agrees with the builtin bit for bit.
    pub fn source(self) -> &'static str {
        match self {
            Self::Distance => "D",
            Self::Harary => "1/D",
            Self::HyperWiener => "(D+D^2)/2",
            Self::ReciprocalComplementaryWiener => "1/(diam+1-D)",
            Self::ReverseWiener => "diam-D",
            Self::DegreeDistance => "(di+dj)*D",
            Self::Gutman => "di*dj*D",
            Self::AdditiveHarary => "(di+dj)/D",
            Self::MultiplicativeHarary => "di*dj/D",
            Self::EdgeIndicator => "eq(D,1)",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Distance => "distance matrix (Wiener)",
            Self::Harary => "Harary matrix",
            Self::HyperWiener => "hyper-Wiener matrix",
            Self::ReciprocalComplementaryWiener => "reciprocal complementary Wiener matrix",
            Self::ReverseWiener => "reverse Wiener matrix",
            Self::DegreeDistance => "degree distance matrix",
            Self::Gutman => "Gutman matrix",
            Self::AdditiveHarary => "additively weighted Harary matrix",
            Self::MultiplicativeHarary => "multiplicatively weighted Harary matrix",
            Self::EdgeIndicator => "adjacency matrix (zero beyond distance 1)",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    // Operation order mirrors `source()` so both paths round identically.
    fn eval(self, ctx: &WeightContext) -> Result<f64, EvalError> {
        let d = f64::from(ctx.distance);
        let diam = f64::from(ctx.diam);
        let value = match self {
            Self::Distance => d,
            Self::Harary => checked_div(1.0, d)?,
            Self::HyperWiener => (d + d.powf(2.0)) / 2.0,
            Self::ReciprocalComplementaryWiener => checked_div(1.0, diam + 1.0 - d)?,
            Self::ReverseWiener => diam - d,
            Self::DegreeDistance => (ctx.di + ctx.dj) * d,
            Self::Gutman => ctx.di * ctx.dj * d,
            Self::AdditiveHarary => checked_div(ctx.di + ctx.dj, d)?,
            Self::MultiplicativeHarary => checked_div(ctx.di * ctx.dj, d)?,
            Self::EdgeIndicator => indicator_eq(d, 1.0),
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite)
        }
    }
}

/// A symmetric weight function `f(D, d_i, d_j)`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFn {
    Builtin(Builtin),
    Expr(Expr),
}

pub fn builtin_weight(name: &str) -> Result<WeightFn, WeightSpecError> {
    Builtin::from_name(name)
        .map(WeightFn::Builtin)
        .ok_or_else(|| WeightSpecError::UnknownBuiltin {
            name: name.to_string(),
            valid: Builtin::ALL.map(Builtin::name).join(", "),
        })
}

pub fn parse_weight_expr(src: &str) -> Result<WeightFn, WeightSpecError> {
    Expr::parse(src).map(WeightFn::Expr)
}

pub fn eval_weight(weight: &WeightFn, ctx: &WeightContext) -> Result<f64, EvalError> {
    weight.eval(ctx)
}

impl WeightFn {
    /// Parses `name` or `expr:<source>`.
    pub fn from_spec(spec: &str) -> Result<Self, WeightSpecError> {
        let spec = spec.trim();
        match spec.strip_prefix(EXPR_PREFIX) {
            Some(src) => parse_weight_expr(src),
            None => builtin_weight(spec),
        }
    }

    pub fn eval(&self, ctx: &WeightContext) -> Result<f64, EvalError> {
        debug_assert!(
            ctx.distance >= 1,
            "weights are only evaluated off the diagonal"
        );
        match self {
            Self::Builtin(b) => b.eval(ctx),
            Self::Expr(e) => e.eval(ctx),
        }
    }

    /// `(f(1, np, np), f(2, np, np))` with the given diameter.
    pub fn predictor_inputs(&self, n: usize, p: f64, diam: u32) -> Result<(f64, f64), EvalError> {
        let np = n as f64 * p;
        let at = |distance| {
            self.eval(&WeightContext {
                distance,
                di: np,
                dj: np,
                n,
                diam,
                p,
            })
        };
        Ok((at(1)?, at(2)?))
    }

    /// Checks how far `f(D, d_i, d_j)` moves from `f(D, np, np)` when the
    /// degrees range over the concentration window `np (1 ± n^{-1/4})`.
    ///
    /// Asymptotic stability under `(1 + o(1))` degree perturbations cannot be
    /// decided at finite `n`; this only measures the worst relative deviation
    /// on a grid and flags values above [`STABILITY_WARN_THRESHOLD`].
    pub fn stability_diagnostic(
        &self,
        n: usize,
        p: f64,
        diam: u32,
    ) -> Result<StabilityDiagnostic, EvalError> {
        const GRID: usize = 9;
        let np = n as f64 * p;
        let half_width = np * (n as f64).powf(-0.25);
        let grid: Vec<f64> = (0..GRID)
            .map(|k| np - half_width + 2.0 * half_width * k as f64 / (GRID - 1) as f64)
            .collect();
        let mut worst: f64 = 0.0;
        for distance in 1..=2 {
            let base_ctx = WeightContext {
                distance,
                di: np,
                dj: np,
                n,
                diam,
                p,
            };
            let base = self.eval(&base_ctx)?;
            for &di in &grid {
                for &dj in &grid {
                    let v = self.eval(&WeightContext { di, dj, ..base_ctx })?;
                    let dev = if base == 0.0 {
                        (v - base).abs()
                    } else {
                        ((v - base) / base).abs()
                    };
                    worst = worst.max(dev);
                }
            }
        }
        Ok(StabilityDiagnostic {
            max_relative_deviation: worst,
            warn: worst > STABILITY_WARN_THRESHOLD,
        })
    }
}

/// Relative deviation above which [`WeightFn::stability_diagnostic`] warns.
pub const STABILITY_WARN_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityDiagnostic {
    pub max_relative_deviation: f64,
    pub warn: bool,
}

impl fmt::Display for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Builtin(b) => f.write_str(b.name()),
            Self::Expr(e) => write!(f, "{EXPR_PREFIX}{e}"),
        }
    }
}

impl FromStr for WeightFn {
    type Err = WeightSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_spec(s)
    }
}
