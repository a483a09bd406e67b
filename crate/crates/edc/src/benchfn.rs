//! Shifted/rotated benchmark functions with known optima.
//!
//! Each function is built deterministically from a [`FunctionSpec`]: the
//! shift vector and any rotation matrices come from a seeded RNG, so the
//! same spec always yields the same instance. The global optimum value is
//! 0 by construction, which makes the function error value (FEV) exactly
//! computable.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{EdcError, Result};
use crate::rng;

/// Base function family. Covers the separable/nonseparable and
/// unimodal/multimodal axes of the usual CEC-style test sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sphere,
    Schwefel12,
    Elliptic,
    Rastrigin,
    Ackley,
    Rosenbrock,
}

impl Family {
    /// Conventional search domain for the family.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Family::Sphere | Family::Schwefel12 | Family::Elliptic | Family::Rosenbrock => {
                (-100.0, 100.0)
            }
            Family::Rastrigin => (-5.0, 5.0),
            Family::Ackley => (-32.0, 32.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::Schwefel12 => "schwefel12",
            Family::Elliptic => "elliptic",
            Family::Rastrigin => "rastrigin",
            Family::Ackley => "ackley",
            Family::Rosenbrock => "rosenbrock",
        }
    }
}

/// Rotation structure applied on top of the shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    /// Axis-aligned; z = x - o.
    None,
    /// One n-by-n rotation; fully nonseparable.
    Full,
    /// Independent rotations on consecutive index groups of the given
    /// size; partially separable composite.
    Grouped(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RotationKind {
    None,
    Full,
    Grouped,
}

/// Serialized form: {family, dimension, shifted, rotation, group_size?, seed}.
#[derive(Serialize, Deserialize)]
struct SpecRepr {
    family: Family,
    dimension: usize,
    shifted: bool,
    rotation: RotationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group_size: Option<usize>,
    seed: u64,
}

/// Deterministic description of a benchmark instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct FunctionSpec {
    pub family: Family,
    pub dimension: usize,
    pub shifted: bool,
    pub rotation: Rotation,
    pub seed: u64,
    pub bounds: (f64, f64),
}

impl FunctionSpec {
    pub fn new(
        family: Family,
        dimension: usize,
        shifted: bool,
        rotation: Rotation,
        seed: u64,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(EdcError::InvalidSpec(format!(
                "dimension must be at least 2, got {dimension}"
            )));
        }
        if let Rotation::Grouped(gs) = rotation {
            if gs == 0 || gs > dimension {
                return Err(EdcError::InvalidSpec(format!(
                    "group_size must be in 1..={dimension}, got {gs}"
                )));
            }
        }
        Ok(FunctionSpec {
            family,
            dimension,
            shifted,
            rotation,
            seed,
            bounds: family.bounds(),
        })
    }

    /// Short label used in output file names, e.g. `sphere_d100`.
    pub fn label(&self) -> String {
        format!("{}_d{}", self.family.name(), self.dimension)
    }
}

impl TryFrom<SpecRepr> for FunctionSpec {
    type Error = EdcError;

    fn try_from(r: SpecRepr) -> Result<Self> {
        let rotation = match (r.rotation, r.group_size) {
            (RotationKind::None, _) => Rotation::None,
            (RotationKind::Full, _) => Rotation::Full,
            (RotationKind::Grouped, Some(gs)) => Rotation::Grouped(gs),
            (RotationKind::Grouped, None) => {
                return Err(EdcError::InvalidSpec(
                    "grouped rotation requires group_size".into(),
                ))
            }
        };
        FunctionSpec::new(r.family, r.dimension, r.shifted, rotation, r.seed)
    }
}

impl From<FunctionSpec> for SpecRepr {
    fn from(s: FunctionSpec) -> Self {
        let (rotation, group_size) = match s.rotation {
            Rotation::None => (RotationKind::None, None),
            Rotation::Full => (RotationKind::Full, None),
            Rotation::Grouped(gs) => (RotationKind::Grouped, Some(gs)),
        };
        SpecRepr {
            family: s.family,
            dimension: s.dimension,
            shifted: s.shifted,
            rotation,
            group_size,
            seed: s.seed,
        }
    }
}

/// A concrete benchmark instance. Immutable after construction;
/// `evaluate` is pure and safe to call from any number of threads.
#[derive(Debug, Clone)]
pub struct BenchmarkFunction {
    spec: FunctionSpec,
    shift: DVector<f64>,
    /// One matrix per rotated group; empty when rotation is `None`.
    rotations: Vec<DMatrix<f64>>,
    /// Consecutive index ranges, one per evaluation group.
    groups: Vec<std::ops::Range<usize>>,
    optimum_point: DVector<f64>,
}

impl BenchmarkFunction {
    pub fn new(spec: &FunctionSpec) -> Result<Self> {
        let n = spec.dimension;
        let mut stream = rng::master(spec.seed);

        let (lo, hi) = spec.bounds;
        let shift = if spec.shifted {
            // Central 80% of the box keeps the optimum off the boundary.
            let width = hi - lo;
            DVector::from_fn(n, |_, _| {
                lo + width * (0.1 + 0.8 * stream.random::<f64>())
            })
        } else {
            DVector::zeros(n)
        };

        let groups: Vec<std::ops::Range<usize>> = match spec.rotation {
            Rotation::None | Rotation::Full => vec![0..n],
            Rotation::Grouped(gs) => {
                let mut gs_ranges = Vec::new();
                let mut start = 0;
                while start < n {
                    let end = (start + gs).min(n);
                    gs_ranges.push(start..end);
                    start = end;
                }
                gs_ranges
            }
        };

        let rotations: Vec<DMatrix<f64>> = match spec.rotation {
            Rotation::None => Vec::new(),
            _ => groups
                .iter()
                .map(|g| random_orthonormal(g.len(), &mut stream))
                .collect(),
        };

        // For Rosenbrock the base optimum is z = 1, so the optimum point
        // is o + R^T * 1 per group; everywhere else it is o itself.
        let mut optimum_point = shift.clone();
        if spec.family == Family::Rosenbrock {
            for (gi, g) in groups.iter().enumerate() {
                let ones = DVector::from_element(g.len(), 1.0);
                let offset = match rotations.get(gi) {
                    Some(r) => r.transpose() * ones,
                    None => ones,
                };
                for (j, idx) in g.clone().enumerate() {
                    optimum_point[idx] += offset[j];
                }
            }
        }

        Ok(BenchmarkFunction {
            spec: spec.clone(),
            shift,
            rotations,
            groups,
            optimum_point,
        })
    }

    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    pub fn bounds(&self) -> (f64, f64) {
        self.spec.bounds
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    pub fn rotations(&self) -> &[DMatrix<f64>] {
        &self.rotations
    }

    pub fn optimum_point(&self) -> &DVector<f64> {
        &self.optimum_point
    }

    pub fn optimum_value(&self) -> f64 {
        0.0
    }

    pub fn evaluate(&self, x: &DVector<f64>) -> Result<f64> {
        let n = self.spec.dimension;
        if x.len() != n {
            return Err(EdcError::DimensionMismatch {
                expected: n,
                actual: x.len(),
            });
        }
        let mut total = 0.0;
        for (gi, g) in self.groups.iter().enumerate() {
            let diff = DVector::from_fn(g.len(), |j, _| x[g.start + j] - self.shift[g.start + j]);
            let z = match self.rotations.get(gi) {
                Some(r) => r * diff,
                None => diff,
            };
            total += base_value(self.spec.family, &z);
        }
        Ok(total)
    }

    /// Function error value: achieved fitness minus the true optimum,
    /// clipped at zero. The 1e-8 reporting floor is applied by the
    /// harness, not here.
    pub fn fev(&self, fitness: f64) -> f64 {
        (fitness - self.optimum_value()).max(0.0)
    }
}

fn base_value(family: Family, z: &DVector<f64>) -> f64 {
    let d = z.len();
    match family {
        Family::Sphere => z.iter().map(|v| v * v).sum(),
        Family::Schwefel12 => {
            let mut cum = 0.0;
            let mut total = 0.0;
            for &v in z.iter() {
                cum += v;
                total += cum * cum;
            }
            total
        }
        Family::Elliptic => z
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let w = if d > 1 {
                    1e6_f64.powf(i as f64 / (d - 1) as f64)
                } else {
                    1.0
                };
                w * v * v
            })
            .sum(),
        Family::Rastrigin => z
            .iter()
            .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos() + 10.0)
            .sum(),
        Family::Ackley => {
            let nf = d as f64;
            let sum_sq: f64 = z.iter().map(|v| v * v).sum();
            let sum_cos: f64 = z
                .iter()
                .map(|v| (2.0 * std::f64::consts::PI * v).cos())
                .sum();
            -20.0 * (-0.2 * (sum_sq / nf).sqrt()).exp() - (sum_cos / nf).exp()
                + 20.0
                + std::f64::consts::E
        }
        Family::Rosenbrock => (0..d.saturating_sub(1))
            .map(|i| {
                let a = z[i] * z[i] - z[i + 1];
                let b = z[i] - 1.0;
                100.0 * a * a + b * b
            })
            .sum(),
    }
}

/// Orthonormal matrix from a seeded Gaussian draw, QR-orthonormalized
/// with the triangular factor's diagonal forced positive so the result
/// is unique and deterministic.
fn random_orthonormal(d: usize, stream: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| stream.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            for i in 0..d {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ortho_error(r: &DMatrix<f64>) -> f64 {
        let d = r.ncols();
        let e = r.transpose() * r - DMatrix::identity(d, d);
        e.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    #[test]
    fn unshifted_unrotated_sphere_has_zero_shift() {
        let spec = FunctionSpec::new(Family::Sphere, 2, false, Rotation::None, 99).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        assert_eq!(f.shift(), &DVector::zeros(2));
        assert!(f.rotations().is_empty());
    }

    #[test]
    fn full_rotation_is_orthonormal() {
        for seed in [0, 1, 12345] {
            let spec = FunctionSpec::new(Family::Elliptic, 17, true, Rotation::Full, seed).unwrap();
            let f = BenchmarkFunction::new(&spec).unwrap();
            assert_eq!(f.rotations().len(), 1);
            assert!(ortho_error(&f.rotations()[0]) < 1e-10);
        }
    }

    #[test]
    fn same_spec_gives_identical_instance() {
        let spec = FunctionSpec::new(Family::Rastrigin, 8, true, Rotation::Grouped(3), 7).unwrap();
        let a = BenchmarkFunction::new(&spec).unwrap();
        let b = BenchmarkFunction::new(&spec).unwrap();
        assert_eq!(a.shift(), b.shift());
        assert_eq!(a.rotations(), b.rotations());
    }

    #[test]
    fn shifted_sphere_is_zero_at_shift() {
        let spec = FunctionSpec::new(Family::Sphere, 5, true, Rotation::None, 3).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        let v = f.evaluate(f.shift()).unwrap();
        assert!(v.abs() <= 1e-12);
    }

    #[test]
    fn schwefel12_partial_sums() {
        // z = (1, 1): 1^2 + (1+1)^2 = 5
        let spec = FunctionSpec::new(Family::Schwefel12, 2, false, Rotation::None, 0).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        let v = f.evaluate(&DVector::from_vec(vec![1.0, 1.0])).unwrap();
        assert_abs_diff_eq!(v, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn rastrigin_at_ones() {
        // z = (1,1,1): 3 * (1 - 10*cos(2pi) + 10) = 3
        let spec = FunctionSpec::new(Family::Rastrigin, 3, false, Rotation::None, 0).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        let v = f
            .evaluate(&DVector::from_vec(vec![1.0, 1.0, 1.0]))
            .unwrap();
        assert_abs_diff_eq!(v, 3.0, epsilon = 1e-10);
    }

    #[test]
    fn every_family_is_zero_at_its_optimum() {
        let cases = [
            (Family::Sphere, Rotation::None),
            (Family::Sphere, Rotation::Full),
            (Family::Schwefel12, Rotation::Full),
            (Family::Elliptic, Rotation::None),
            (Family::Rastrigin, Rotation::Grouped(4)),
            (Family::Ackley, Rotation::Full),
            (Family::Rosenbrock, Rotation::None),
            (Family::Rosenbrock, Rotation::Full),
            (Family::Rosenbrock, Rotation::Grouped(3)),
        ];
        for (family, rotation) in cases {
            let spec = FunctionSpec::new(family, 10, true, rotation, 21).unwrap();
            let f = BenchmarkFunction::new(&spec).unwrap();
            let v = f.evaluate(f.optimum_point()).unwrap();
            assert!(
                v.abs() <= 1e-12,
                "{family:?}/{rotation:?}: f(optimum) = {v:e}"
            );
        }
    }

    #[test]
    fn full_rotation_round_trip() {
        // Evaluating at o + R^T y must equal the base value at y.
        let spec = FunctionSpec::new(Family::Rastrigin, 6, true, Rotation::Full, 5).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        let mut stream = crate::rng::master(11);
        for _ in 0..20 {
            let y = DVector::from_fn(6, |_, _| stream.random::<f64>() * 4.0 - 2.0);
            let x = f.shift() + f.rotations()[0].transpose() * &y;
            let via_eval = f.evaluate(&x).unwrap();
            let direct = super::base_value(Family::Rastrigin, &y);
            let tol = 1e-9 * (1.0 + direct.abs());
            assert!((via_eval - direct).abs() < tol);
        }
    }

    #[test]
    fn unrotated_sphere_is_squared_norm() {
        let spec = FunctionSpec::new(Family::Sphere, 4, true, Rotation::None, 9).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        let u = DVector::from_vec(vec![1.5, -2.0, 0.25, 3.0]);
        let v = f.evaluate(&(f.shift() + &u)).unwrap();
        assert_abs_diff_eq!(v, u.norm_squared(), epsilon = 1e-12);
    }

    #[test]
    fn grouped_composition_is_additive() {
        let spec = FunctionSpec::new(Family::Rastrigin, 9, true, Rotation::Grouped(4), 13).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        let mut stream = crate::rng::master(17);
        let x = DVector::from_fn(9, |_, _| stream.random::<f64>() * 8.0 - 4.0);
        let full = f.evaluate(&x).unwrap();
        // Setting the first group (indices 0..4) to its optimal subvector
        // removes exactly that group's standalone contribution.
        let mut x_opt_first = x.clone();
        for i in 0..4 {
            x_opt_first[i] = f.optimum_point()[i];
        }
        let reduced = f.evaluate(&x_opt_first).unwrap();
        let diff = DVector::from_fn(4, |j, _| x[j] - f.shift()[j]);
        let z = &f.rotations()[0] * diff;
        let contribution = super::base_value(Family::Rastrigin, &z);
        assert!((full - reduced - contribution).abs() < 1e-9 * (1.0 + full.abs()));
    }

    #[test]
    fn fev_clips_at_zero() {
        let spec = FunctionSpec::new(Family::Sphere, 2, false, Rotation::None, 0).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        assert_eq!(f.fev(0.0), 0.0);
        assert_eq!(f.fev(3.5), 3.5);
        assert_eq!(f.fev(1e-12), 1e-12);
        assert_eq!(f.fev(-1e-10), 0.0);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(FunctionSpec::new(Family::Sphere, 1, false, Rotation::None, 0).is_err());
        assert!(FunctionSpec::new(Family::Sphere, 4, false, Rotation::Grouped(5), 0).is_err());
        assert!(FunctionSpec::new(Family::Sphere, 4, false, Rotation::Grouped(0), 0).is_err());
    }

    #[test]
    fn evaluate_rejects_wrong_dimension() {
        let spec = FunctionSpec::new(Family::Sphere, 3, false, Rotation::None, 0).unwrap();
        let f = BenchmarkFunction::new(&spec).unwrap();
        assert!(f.evaluate(&DVector::zeros(4)).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = FunctionSpec::new(Family::Ackley, 30, true, Rotation::Grouped(10), 42).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"family\":\"ackley\""));
        assert!(json.contains("\"group_size\":10"));
        let back: FunctionSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
