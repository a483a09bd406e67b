//! C ABI for the edc optimizer.
//!
//! All objects cross the boundary as opaque handles created and
//! destroyed by this library; every function returns an [`EdcStatus`]
//! error code and writes results through out-pointers. The header
//! `include/edc.h` is generated at build time.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use nalgebra::DVector;

use edc::algorithm::{run, EdcConfig, RunOutcome};
use edc::benchfn::{BenchmarkFunction, Family, FunctionSpec, Rotation};

/// Error codes returned by every API function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    RuntimeError = 3,
}

/// Benchmark function family.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdcFamily {
    Sphere = 0,
    Schwefel12 = 1,
    Elliptic = 2,
    Rastrigin = 3,
    Ackley = 4,
    Rosenbrock = 5,
}

/// Rotation structure of a benchmark function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdcRotation {
    /// Axis-aligned; `group_size` is ignored.
    None = 0,
    /// One full-dimension rotation; `group_size` is ignored.
    Full = 1,
    /// Independent rotations on consecutive groups of `group_size`.
    Grouped = 2,
}

/// Algorithm variant.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdcAlgorithm {
    /// Eigenspace transform + random decomposition.
    Edc = 0,
    /// Decomposition in the original space (transform ablation).
    Odc = 1,
    /// Plain Gaussian EDA on the full problem.
    Gsmgeda = 2,
}

/// Run parameters. Obtain defaults via `edc_params_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EdcParams {
    pub algorithm: EdcAlgorithm,
    pub population_size: u64,
    pub selection_ratio: f64,
    pub pool_generations: u64,
    pub subproblem_size: u64,
    pub eta_forward: f64,
    pub eta_backward: f64,
    pub max_fes: u64,
    pub seed: u64,
}

/// Opaque benchmark function handle.
pub struct EdcFunction {
    inner: BenchmarkFunction,
}

/// Opaque result handle: best solution, fitness, and convergence trace.
pub struct EdcResult {
    outcome: RunOutcome,
    final_fev: f64,
}

fn guard<F: FnOnce() -> EdcStatus>(f: F) -> EdcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => EdcStatus::RuntimeError,
    }
}

/// Fills `params` with the standard defaults (p=1000, tau=0.5, l=20,
/// s=30, eta_f=2, eta_b=0.5, budget 1e6).
#[no_mangle]
pub unsafe extern "C" fn edc_params_default(params: *mut EdcParams) -> EdcStatus {
    if params.is_null() {
        return EdcStatus::NullPointer;
    }
    let d = EdcConfig::default();
    *params = EdcParams {
        algorithm: EdcAlgorithm::Edc,
        population_size: d.population_size as u64,
        selection_ratio: d.selection_ratio,
        pool_generations: d.pool_generations as u64,
        subproblem_size: d.subproblem_size as u64,
        eta_forward: d.eta_forward,
        eta_backward: d.eta_backward,
        max_fes: d.max_fes,
        seed: d.seed,
    };
    EdcStatus::Ok
}

/// Creates a benchmark function. `group_size` is only read for
/// `EDC_ROTATION_GROUPED`. The handle must be released with
/// `edc_function_destroy`.
#[no_mangle]
pub unsafe extern "C" fn edc_function_create(
    family: EdcFamily,
    dimension: u64,
    shifted: bool,
    rotation: EdcRotation,
    group_size: u64,
    seed: u64,
    out: *mut *mut EdcFunction,
) -> EdcStatus {
    if out.is_null() {
        return EdcStatus::NullPointer;
    }
    guard(|| {
        let family = match family {
            EdcFamily::Sphere => Family::Sphere,
            EdcFamily::Schwefel12 => Family::Schwefel12,
            EdcFamily::Elliptic => Family::Elliptic,
            EdcFamily::Rastrigin => Family::Rastrigin,
            EdcFamily::Ackley => Family::Ackley,
            EdcFamily::Rosenbrock => Family::Rosenbrock,
        };
        let rotation = match rotation {
            EdcRotation::None => Rotation::None,
            EdcRotation::Full => Rotation::Full,
            EdcRotation::Grouped => Rotation::Grouped(group_size as usize),
        };
        let spec = match FunctionSpec::new(family, dimension as usize, shifted, rotation, seed) {
            Ok(s) => s,
            Err(_) => return EdcStatus::InvalidArgument,
        };
        match BenchmarkFunction::new(&spec) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(EdcFunction { inner: f }));
                EdcStatus::Ok
            }
            Err(_) => EdcStatus::RuntimeError,
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn edc_function_destroy(f: *mut EdcFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

#[no_mangle]
pub unsafe extern "C" fn edc_function_dimension(
    f: *const EdcFunction,
    out: *mut u64,
) -> EdcStatus {
    if f.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    *out = (*f).inner.dimension() as u64;
    EdcStatus::Ok
}

/// Evaluates the function at `x` (length `len`, which must equal the
/// dimension).
#[no_mangle]
pub unsafe extern "C" fn edc_function_evaluate(
    f: *const EdcFunction,
    x: *const f64,
    len: u64,
    out: *mut f64,
) -> EdcStatus {
    if f.is_null() || x.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    guard(|| {
        let v = DVector::from_column_slice(slice::from_raw_parts(x, len as usize));
        match (*f).inner.evaluate(&v) {
            Ok(value) => {
                *out = value;
                EdcStatus::Ok
            }
            Err(_) => EdcStatus::InvalidArgument,
        }
    })
}

/// Copies the known optimum point into `buf` (length `len` = dimension).
#[no_mangle]
pub unsafe extern "C" fn edc_function_optimum(
    f: *const EdcFunction,
    buf: *mut f64,
    len: u64,
) -> EdcStatus {
    if f.is_null() || buf.is_null() {
        return EdcStatus::NullPointer;
    }
    let point = (*f).inner.optimum_point();
    if len as usize != point.len() {
        return EdcStatus::InvalidArgument;
    }
    slice::from_raw_parts_mut(buf, len as usize).copy_from_slice(point.as_slice());
    EdcStatus::Ok
}

/// Function error value of a fitness: fitness minus the true optimum,
/// clipped at zero.
#[no_mangle]
pub unsafe extern "C" fn edc_function_fev(
    f: *const EdcFunction,
    fitness: f64,
    out: *mut f64,
) -> EdcStatus {
    if f.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    *out = (*f).inner.fev(fitness);
    EdcStatus::Ok
}

/// Runs the optimizer to its evaluation budget. The result handle must
/// be released with `edc_result_destroy`.
#[no_mangle]
pub unsafe extern "C" fn edc_optimize(
    f: *const EdcFunction,
    params: *const EdcParams,
    out: *mut *mut EdcResult,
) -> EdcStatus {
    if f.is_null() || params.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    guard(|| {
        let p = *params;
        let (transform_enabled, decompose_enabled) = match p.algorithm {
            EdcAlgorithm::Edc => (true, true),
            EdcAlgorithm::Odc => (false, true),
            EdcAlgorithm::Gsmgeda => (false, false),
        };
        let cfg = EdcConfig {
            population_size: p.population_size as usize,
            selection_ratio: p.selection_ratio,
            pool_generations: p.pool_generations as usize,
            subproblem_size: p.subproblem_size as usize,
            eta_forward: p.eta_forward,
            eta_backward: p.eta_backward,
            max_fes: p.max_fes,
            transform_enabled,
            decompose_enabled,
            seed: p.seed,
            report_checkpoints: Vec::new(),
        };
        let function = &(*f).inner;
        match run(&cfg, function) {
            Ok(outcome) => {
                let final_fev = function.fev(outcome.best_fitness);
                *out = Box::into_raw(Box::new(EdcResult { outcome, final_fev }));
                EdcStatus::Ok
            }
            Err(edc::EdcError::InvalidConfig(_)) => EdcStatus::InvalidArgument,
            Err(_) => EdcStatus::RuntimeError,
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn edc_result_destroy(r: *mut EdcResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

#[no_mangle]
pub unsafe extern "C" fn edc_result_best_fitness(
    r: *const EdcResult,
    out: *mut f64,
) -> EdcStatus {
    if r.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    *out = (*r).outcome.best_fitness;
    EdcStatus::Ok
}

/// Final function error value (raw, no reporting floor).
#[no_mangle]
pub unsafe extern "C" fn edc_result_fev(r: *const EdcResult, out: *mut f64) -> EdcStatus {
    if r.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    *out = (*r).final_fev;
    EdcStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn edc_result_fe_count(r: *const EdcResult, out: *mut u64) -> EdcStatus {
    if r.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    *out = (*r).outcome.fe_count;
    EdcStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn edc_result_dimension(r: *const EdcResult, out: *mut u64) -> EdcStatus {
    if r.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    *out = (*r).outcome.best_point.len() as u64;
    EdcStatus::Ok
}

/// Copies the best solution into `buf` (length `len` = dimension).
#[no_mangle]
pub unsafe extern "C" fn edc_result_best_point(
    r: *const EdcResult,
    buf: *mut f64,
    len: u64,
) -> EdcStatus {
    if r.is_null() || buf.is_null() {
        return EdcStatus::NullPointer;
    }
    let point = &(*r).outcome.best_point;
    if len as usize != point.len() {
        return EdcStatus::InvalidArgument;
    }
    slice::from_raw_parts_mut(buf, len as usize).copy_from_slice(point.as_slice());
    EdcStatus::Ok
}

/// Number of (fe_count, best_fev) points in the convergence trace.
#[no_mangle]
pub unsafe extern "C" fn edc_result_trace_len(r: *const EdcResult, out: *mut u64) -> EdcStatus {
    if r.is_null() || out.is_null() {
        return EdcStatus::NullPointer;
    }
    *out = (*r).outcome.trace.len() as u64;
    EdcStatus::Ok
}

/// Reads trace point `index` into `out_fe` and `out_fev`.
#[no_mangle]
pub unsafe extern "C" fn edc_result_trace_point(
    r: *const EdcResult,
    index: u64,
    out_fe: *mut u64,
    out_fev: *mut f64,
) -> EdcStatus {
    if r.is_null() || out_fe.is_null() || out_fev.is_null() {
        return EdcStatus::NullPointer;
    }
    let trace = &(*r).outcome.trace;
    match trace.get(index as usize) {
        Some(&(fe, fev)) => {
            *out_fe = fe;
            *out_fev = fev;
            EdcStatus::Ok
        }
        None => EdcStatus::InvalidArgument,
    }
}
