//! Weighted distance matrices `W_f(G)` of graphs: construction, dense
//! symmetric spectra, graph energy, and seeded Monte Carlo experiments that
//! compare random-graph energies and spectral distributions with their
//! asymptotic laws.
//!
//! ```
//! use wdm_core::{build_weight_matrix, sym_eigenvalues, Graph, WeightFn};
//!
//! let weight = WeightFn::from_spec("distance").unwrap();
//! let w = build_weight_matrix(&Graph::path(3), &weight).unwrap();
//! let energy = sym_eigenvalues(&w).unwrap().energy();
//! assert!((energy - (2.0 + 2.0 * 3f64.sqrt())).abs() < 1e-12);
//! ```

pub mod error;
pub mod experiment;
pub mod expr;
pub mod graph;
pub mod matrix;
pub mod spectral;
pub mod theory;
pub mod weights;

pub use error::{
    EvalError, ExperimentError, GraphError, MatrixError, ParseGraphError, SpectralError,
    TheoryError, WeightSpecError,
};
pub use experiment::{
    run_energy_experiment, run_esd_experiment, run_experiment, run_moment_experiment, write_report,
    CellReport, ExperimentConfig, Mode, Report, ReportFormat,
};
pub use graph::{
    degree_bound_holds, gen_erdos_renyi, parse_edge_list, DegreeSequence, DistanceMatrix, Graph,
};
pub use matrix::{build_weight_matrix, center_scale_a1, split_a1_a2, GraphSummary, SymMatrix};
pub use spectral::{
    energy, esd, ks_distance, spectral_moment, sym_eigenvalues, sym_eigenvalues_scaled, Spectrum,
    StepDistribution,
};
pub use theory::{predict_energy, Prediction};
pub use weights::{
    builtin_weight, eval_weight, parse_weight_expr, Builtin, WeightContext, WeightFn,
};
