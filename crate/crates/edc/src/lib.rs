//! Eigenspace divide-and-conquer (EDC) optimization for large-scale
//! black-box minimization.
//!
//! The optimizer maintains a pool of high-quality solutions from recent
//! generations, periodically derives an orthonormal basis from their
//! singular value decomposition, and decomposes the problem into random
//! low-dimensional subproblems in that eigenspace. Each subproblem is
//! evolved by a Gaussian estimation-of-distribution optimizer with a
//! log-rank weighted mean, an evolution-direction mean shift, and a
//! reference-mean covariance estimate.
//!
//! The crate also ships a generator for shifted/rotated benchmark
//! functions with known optima ([`benchfn`]) and an experiment harness
//! ([`harness`]) that reproduces a multi-seed evaluation protocol:
//! function error values with a 1e-8 reporting floor, convergence
//! traces, Wilcoxon rank-sum and Cohen's d comparisons.
//!
//! Quick start:
//!
//! ```
//! use edc::benchfn::{BenchmarkFunction, Family, FunctionSpec, Rotation};
//! use edc::algorithm::{run, EdcConfig};
//!
//! let spec = FunctionSpec::new(Family::Sphere, 10, true, Rotation::None, 7).unwrap();
//! let f = BenchmarkFunction::new(&spec).unwrap();
//! let cfg = EdcConfig { population_size: 40, max_fes: 20_000, subproblem_size: 5, ..Default::default() };
//! let outcome = run(&cfg, &f).unwrap();
//! assert!(f.fev(outcome.best_fitness) < 1.0);
//! ```

pub mod algorithm;
pub mod benchfn;
pub mod eigenspace;
pub mod error;
pub mod grouping;
pub mod gsmgeda;
pub mod harness;
pub mod rng;

pub use algorithm::{run, EdcConfig, EdcRun, RunOutcome};
pub use benchfn::{BenchmarkFunction, Family, FunctionSpec, Rotation};
pub use error::{EdcError, Result};
