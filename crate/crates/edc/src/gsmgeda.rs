//! Gaussian subproblem optimizer: log-rank weighted mean, evolution-
//! direction mean shift, reference-mean covariance, and model sampling.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{EdcError, Result};

/// Log-rank weights over `count` solutions sorted best-first:
/// w_i = log(count + 1) - log(i), i = 1..count. Strictly decreasing,
/// all positive.
pub fn rank_weights(count: usize) -> Vec<f64> {
    let base = ((count + 1) as f64).ln();
    (1..=count).map(|i| base - (i as f64).ln()).collect()
}

/// Weighted average of a best-first sorted solution block.
pub fn weighted_mean(h_sorted: &DMatrix<f64>) -> Result<DVector<f64>> {
    let k = h_sorted.ncols();
    if k == 0 {
        return Err(EdcError::EmptyBlock);
    }
    let w = rank_weights(k);
    let total: f64 = w.iter().sum();
    let mut mean = DVector::zeros(h_sorted.nrows());
    for (i, wi) in w.iter().enumerate() {
        mean += *wi * DVector::from(h_sorted.column(i));
    }
    Ok(mean / total)
}

/// Carries the previous generation's search center and its fitness for
/// the evolution-direction shift.
#[derive(Debug, Clone, Default)]
pub struct MeanTracker {
    state: Option<(DVector<f64>, f64)>,
}

impl MeanTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn initialize(&mut self, mean: DVector<f64>, fitness: f64) {
        self.state = Some((mean, fitness));
    }

    pub fn is_initialized(&self) -> bool {
        self.state.is_some()
    }

    pub fn prev(&self) -> Option<(&DVector<f64>, f64)> {
        self.state.as_ref().map(|(m, f)| (m, *f))
    }
}

/// Result of the mean shift: the chosen search center, its fitness, and
/// how many objective evaluations were spent (1 or 2).
#[derive(Debug, Clone)]
pub struct ShiftOutcome {
    pub mean: DVector<f64>,
    pub fitness: f64,
    pub evals_used: u32,
}

/// Shifts the pre-estimated mean along the evolution direction
/// delta = mu_tilde - prev_mean.
///
/// If f(mu_tilde) improved on the previous center, a forward candidate
/// mu_tilde + eta_f * delta is probed; if it worsened, a backward
/// candidate mu_tilde - eta_b * delta. The candidate replaces mu_tilde
/// only when strictly better, so the returned fitness is never worse
/// than f(mu_tilde). The tracker is updated to the chosen center.
pub fn shift_mean<F>(
    mu_tilde: &DVector<f64>,
    tracker: &mut MeanTracker,
    eta_f: f64,
    eta_b: f64,
    mut objective: F,
) -> Result<ShiftOutcome>
where
    F: FnMut(&DVector<f64>) -> f64,
{
    let (prev_mean, prev_fitness) = match tracker.state.as_ref() {
        Some((m, f)) => (m.clone(), *f),
        None => return Err(EdcError::TrackerUninitialized),
    };
    let delta = mu_tilde - &prev_mean;
    let f_tilde = objective(mu_tilde);
    let mut evals_used = 1;

    let (mean, fitness) = if f_tilde < prev_fitness {
        let candidate = mu_tilde + eta_f * &delta;
        let f_cand = objective(&candidate);
        evals_used = 2;
        if f_cand < f_tilde {
            (candidate, f_cand)
        } else {
            (mu_tilde.clone(), f_tilde)
        }
    } else if f_tilde > prev_fitness {
        let candidate = mu_tilde - eta_b * &delta;
        let f_cand = objective(&candidate);
        evals_used = 2;
        if f_cand < f_tilde {
            (candidate, f_cand)
        } else {
            (mu_tilde.clone(), f_tilde)
        }
    } else {
        (mu_tilde.clone(), f_tilde)
    };

    tracker.initialize(mean.clone(), fitness);
    Ok(ShiftOutcome {
        mean,
        fitness,
        evals_used,
    })
}

/// Covariance with the shifted mean as reference point:
/// C = (1/k) * sum_i (h_i - mean)(h_i - mean)^T.
pub fn estimate_covariance(h_sub: &DMatrix<f64>, mean: &DVector<f64>) -> Result<DMatrix<f64>> {
    let d = h_sub.nrows();
    let k = h_sub.ncols();
    if k == 0 {
        return Err(EdcError::EmptyBlock);
    }
    if mean.len() != d {
        return Err(EdcError::DimensionMismatch {
            expected: d,
            actual: mean.len(),
        });
    }
    let mut centered = h_sub.clone();
    for c in 0..k {
        for r in 0..d {
            centered[(r, c)] -= mean[r];
        }
    }
    let mut cov = &centered * centered.transpose() / k as f64;
    // Force exact symmetry against accumulation order differences.
    for i in 0..d {
        for j in (i + 1)..d {
            let v = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(cov)
}

/// Gaussian sampling model for one subproblem.
#[derive(Debug, Clone)]
pub struct GaussianModel {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    /// Lower-triangular factor of covariance + jitter * I.
    factor: DMatrix<f64>,
    jitter: f64,
}

/// Builds the model, escalating a diagonal jitter from 1e-10 to 1e-2
/// (scaled by trace/d) until the factorization succeeds.
pub fn build_model(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<GaussianModel> {
    let d = covariance.nrows();
    if covariance.ncols() != d || mean.len() != d {
        return Err(EdcError::DimensionMismatch {
            expected: d,
            actual: mean.len(),
        });
    }
    let scale = (covariance.trace() / d as f64).max(1.0);
    let max_jitter = 1e-2 * scale;
    let mut jitter = 0.0;
    loop {
        let mut jittered = covariance.clone();
        for i in 0..d {
            jittered[(i, i)] += jitter;
        }
        if let Some(chol) = Cholesky::new(jittered) {
            return Ok(GaussianModel {
                mean,
                covariance,
                factor: chol.l(),
                jitter,
            });
        }
        if jitter == 0.0 {
            jitter = 1e-10 * scale;
        } else if jitter < max_jitter {
            jitter = (jitter * 10.0).min(max_jitter);
        } else {
            return Err(EdcError::SingularCovariance {
                max_jitter,
                context: String::new(),
            });
        }
    }
}

impl GaussianModel {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Draws `count` samples, one per column: mean + L * z.
    pub fn sample<R: Rng>(&self, count: usize, rng: &mut R) -> DMatrix<f64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(d, count);
        for c in 0..count {
            let z = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
            let x = &self.mean + &self.factor * z;
            out.set_column(c, &x);
        }
        out
    }

    /// Log of the Gaussian density with the jittered covariance,
    /// computed through the factor (no explicit inverse).
    pub fn log_density(&self, x: &DVector<f64>) -> Result<f64> {
        let d = self.dim();
        if x.len() != d {
            return Err(EdcError::DimensionMismatch {
                expected: d,
                actual: x.len(),
            });
        }
        let diff = x - &self.mean;
        let y = self
            .factor
            .solve_lower_triangular(&diff)
            .ok_or(EdcError::SingularCovariance {
                max_jitter: self.jitter,
                context: " (singular factor in log_density)".into(),
            })?;
        let mut log_det_half = 0.0;
        for i in 0..d {
            let l = self.factor[(i, i)];
            if l <= 0.0 {
                return Err(EdcError::SingularCovariance {
                    max_jitter: self.jitter,
                    context: " (non-positive factor diagonal)".into(),
                });
            }
            log_det_half += l.ln();
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        Ok(-0.5 * d as f64 * two_pi.ln() - log_det_half - 0.5 * y.norm_squared())
    }
}
