//! Dense symmetric matrices and the weighted distance matrix `W_f(G)`,
//! together with its split into an edge part `A1` and a distance-2 part `A2`.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::MatrixError;
use crate::graph::{DegreeSequence, DistanceMatrix, Graph};
use crate::weights::{WeightContext, WeightFn};

/// Dense real symmetric matrix in row-major order (both triangles stored).
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from its upper triangle; `entry(i, j)` is called for
    /// `i <= j` only and mirrored.
    pub fn from_upper<F>(n: usize, mut entry: F) -> Self
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, entry(i, j));
            }
        }
        m
    }

    /// Wraps row-major data without checking symmetry; the eigensolver
    /// validates it.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::DimensionMismatch(data.len(), n * n));
        }
        Ok(Self { n, data })
    }

    /// `c (J - I)`: constant `c` off the diagonal, zero on it.
    pub fn constant_off_diagonal(n: usize, c: f64) -> Self {
        Self::from_upper(n, |i, j| if i == j { 0.0 } else { c })
    }

    /// `J - I`.
    pub fn ones_minus_identity(n: usize) -> Self {
        Self::constant_off_diagonal(n, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch(self.n, other.n));
        }
        Ok(Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Adds `c` to every diagonal entry.
    pub fn shifted(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += c;
        }
        m
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Plain-text dump: `n` on the first line, then one whitespace-separated
    /// row per line in shortest round-trip scientific notation.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Per-graph data every weighted matrix needs: distances, degrees and
/// diameter of a connected graph.
#[derive(Debug, Clone)]
pub struct GraphSummary {
    pub distances: DistanceMatrix,
    pub degrees: DegreeSequence,
    pub diameter: u32,
}

impl GraphSummary {
    /// Fails with [`MatrixError::Disconnected`] naming the first unreachable
    /// pair in row-major order.
    pub fn of(graph: &Graph) -> Result<Self, MatrixError> {
        let distances = graph.all_pairs_distances();
        let Some(diameter) = distances.diameter() else {
            let n = graph.n();
            let (i, j) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| distances.get(i, j).is_none())
                .expect("an infinite diameter implies an unreachable pair");
            return Err(MatrixError::Disconnected { i, j });
        };
        Ok(Self {
            degrees: graph.degrees(),
            distances,
            diameter,
        })
    }

    pub fn n(&self) -> usize {
        self.distances.n()
    }

    fn context(&self, i: usize, j: usize, distance: u32, p: f64) -> WeightContext {
        WeightContext {
            distance,
            di: self.degrees.get(i) as f64,
            dj: self.degrees.get(j) as f64,
            n: self.n(),
            diam: self.diameter,
            p,
        }
    }
}

/// Edge density `m / C(n, 2)`, used as `p` when a graph does not come from
/// a sampler with a known probability.
pub fn edge_density(graph: &Graph) -> f64 {
    let n = graph.n();
    if n < 2 {
        return 0.0;
    }
    graph.edge_count() as f64 / (n * (n - 1) / 2) as f64
}

/// `W_f(G)`, with `p` taken as the edge density of `graph`.
pub fn build_weight_matrix(graph: &Graph, weight: &WeightFn) -> Result<SymMatrix, MatrixError> {
    let summary = GraphSummary::of(graph)?;
    weight_matrix(&summary, weight, edge_density(graph))
}

/// `W_f(G)` for a precomputed summary: `f(D(i,j), d_i, d_j)` off the
/// diagonal, zero on it.
pub fn weight_matrix(
    summary: &GraphSummary,
    weight: &WeightFn,
    p: f64,
) -> Result<SymMatrix, MatrixError> {
    fill_upper(summary.n(), |i, j| {
        let d = summary
            .distances
            .get(i, j)
            .ok_or(MatrixError::Disconnected { i, j })?;
        weight
            .eval(&summary.context(i, j, d, p))
            .map_err(|source| MatrixError::Weight { i, j, source })
    })
}

/// `(A1, A2)` for [`build_weight_matrix`]'s graph and `p`.
pub fn split_a1_a2(
    graph: &Graph,
    weight: &WeightFn,
) -> Result<(SymMatrix, SymMatrix), MatrixError> {
    let summary = GraphSummary::of(graph)?;
    split_weight_matrix(graph, &summary, weight, edge_density(graph))
}

/// Splits `W_f` as `A1 + A2`, where `A1(i,j) = f(1,d_i,d_j) - f(2,d_i,d_j)`
/// on edges and `A2(i,j) = f(2,d_i,d_j)` on every off-diagonal pair.
///
/// The identity `A1 + A2 = W_f` holds exactly only when the diameter is at
/// most 2; for longer distances `A2` still carries the distance-2 value.
pub fn split_weight_matrix(
    graph: &Graph,
    summary: &GraphSummary,
    weight: &WeightFn,
    p: f64,
) -> Result<(SymMatrix, SymMatrix), MatrixError> {
    let eval = |i: usize, j: usize, distance: u32| {
        weight
            .eval(&summary.context(i, j, distance, p))
            .map_err(|source| MatrixError::Weight { i, j, source })
    };
    let a2 = fill_upper(summary.n(), |i, j| eval(i, j, 2))?;
    let a1 = fill_upper(summary.n(), |i, j| {
        if graph.has_edge(i, j) {
            Ok(eval(i, j, 1)? - a2.get(i, j))
        } else {
            Ok(0.0)
        }
    })?;
    Ok((a1, a2))
}

/// `A1 / (f1 - f2) - p (J - I)`.
///
/// Non-edge off-diagonal entries come out as exactly `-p`. Fails with
/// [`MatrixError::Degenerate`] when `f1 == f2`.
pub fn center_scale_a1(a1: &SymMatrix, f1: f64, f2: f64, p: f64) -> Result<SymMatrix, MatrixError> {
    if f1 == f2 {
        return Err(MatrixError::Degenerate);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(MatrixError::InvalidProbability(p));
    }
    let gap = f1 - f2;
    let n = a1.n();
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            out.set(i, j, a1.get(i, j) / gap - p);
        }
    }
    Ok(out)
}

/// Evaluates the strict upper triangle row by row (rows in parallel) and
/// mirrors it. On failure the error of the first failing entry in row-major
/// order is returned, independent of scheduling.
fn fill_upper<F>(n: usize, entry: F) -> Result<SymMatrix, MatrixError>
where
    F: Fn(usize, usize) -> Result<f64, MatrixError> + Sync,
{
    let rows: Vec<Result<Vec<f64>, MatrixError>> = (0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).map(|j| entry(i, j)).collect())
        .collect();
    let mut m = SymMatrix::zeros(n);
    for (i, row) in rows.into_iter().enumerate() {
        for (k, v) in row?.into_iter().enumerate() {
            m.set(i, i + 1 + k, v);
        }
    }
    Ok(m)
}
