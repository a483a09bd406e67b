//! The generation loop: selection, pool update, scheduled basis
//! recomputation, mean estimation and shift, eigenspace transform,
//! random decomposition, per-subproblem Gaussian sampling, merge,
//! back-transform, and elite-preserving replacement. Terminates on the
//! fitness-evaluation budget.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::benchfn::BenchmarkFunction;
use crate::eigenspace::{compute_basis, Basis, SolutionPool};
use crate::error::{EdcError, Result};
use crate::grouping::Grouping;
use crate::gsmgeda::{build_model, estimate_covariance, shift_mean, weighted_mean, MeanTracker};
use crate::rng;

/// Substream index reserved for the per-generation grouping draw;
/// group indices 0..m use their own indices.
const GROUPING_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EdcConfig {
    /// Population size p.
    pub population_size: usize,
    /// Selection ratio tau; the best floor(tau * p) solutions form H.
    pub selection_ratio: f64,
    /// Pool capacity l in generations; also the basis update period.
    pub pool_generations: usize,
    /// Subproblem size s; m = ceil(n / s) groups per generation.
    pub subproblem_size: usize,
    pub eta_forward: f64,
    pub eta_backward: f64,
    /// Total budget of true-objective evaluations.
    pub max_fes: u64,
    /// Disabling this yields the ODC ablation: decomposition in the
    /// original space, no eigenspace transform.
    pub transform_enabled: bool,
    /// Disabling this (with the transform) yields plain GSM-GEDA on the
    /// full problem.
    pub decompose_enabled: bool,
    pub seed: u64,
    /// Extra fitness-evaluation counts at which the convergence trace
    /// records a point, besides every generation boundary.
    pub report_checkpoints: Vec<u64>,
}

impl Default for EdcConfig {
    fn default() -> Self {
        EdcConfig {
            population_size: 1000,
            selection_ratio: 0.5,
            pool_generations: 20,
            subproblem_size: 30,
            eta_forward: 2.0,
            eta_backward: 0.5,
            max_fes: 1_000_000,
            transform_enabled: true,
            decompose_enabled: true,
            seed: 0,
            report_checkpoints: Vec::new(),
        }
    }
}

impl EdcConfig {
    pub fn selected_count(&self) -> usize {
        (self.selection_ratio * self.population_size as f64).floor() as usize
    }

    pub fn validate(&self, dimension: usize) -> Result<()> {
        if self.population_size < 2 {
            return Err(EdcError::InvalidConfig(
                "population_size must be at least 2".into(),
            ));
        }
        if !(self.selection_ratio > 0.0 && self.selection_ratio < 1.0) {
            return Err(EdcError::InvalidConfig(
                "selection_ratio must lie in (0, 1)".into(),
            ));
        }
        if self.selected_count() < 2 {
            return Err(EdcError::InvalidConfig(
                "floor(selection_ratio * population_size) must be at least 2".into(),
            ));
        }
        if self.pool_generations == 0 {
            return Err(EdcError::InvalidConfig(
                "pool_generations must be positive".into(),
            ));
        }
        if self.decompose_enabled
            && (self.subproblem_size < 1 || self.subproblem_size > dimension)
        {
            return Err(EdcError::InvalidConfig(format!(
                "subproblem_size must be in 1..={dimension}",
            )));
        }
        if self.eta_forward <= 0.0 || self.eta_backward <= 0.0 {
            return Err(EdcError::InvalidConfig(
                "shifting factors must be positive".into(),
            ));
        }
        if self.max_fes < self.population_size as u64 + 1 {
            return Err(EdcError::InvalidConfig(
                "max_fes must cover the initial population plus one mean evaluation".into(),
            ));
        }
        Ok(())
    }
}

/// Coordinate-wise clamp into the box.
pub fn clamp_to_bounds(x: &mut DVector<f64>, bounds: (f64, f64)) {
    let (lo, hi) = bounds;
    for v in x.iter_mut() {
        *v = v.clamp(lo, hi);
    }
}

/// Counting fitness oracle: every true-objective call goes through
/// here, charging the budget, tracking the best-so-far, and recording
/// trace checkpoints.
struct Oracle<'a> {
    f: &'a BenchmarkFunction,
    fe_count: u64,
    best_point: DVector<f64>,
    best_fitness: f64,
    trace: Vec<(u64, f64)>,
    checkpoints: Vec<u64>,
    next_checkpoint: usize,
}

impl<'a> Oracle<'a> {
    fn new(f: &'a BenchmarkFunction, mut checkpoints: Vec<u64>) -> Self {
        checkpoints.sort_unstable();
        checkpoints.dedup();
        Oracle {
            f,
            fe_count: 0,
            best_point: DVector::zeros(f.dimension()),
            best_fitness: f64::INFINITY,
            trace: Vec::new(),
            checkpoints,
            next_checkpoint: 0,
        }
    }

    /// Evaluates an in-bounds point. Caller clamps first.
    fn eval(&mut self, x: &DVector<f64>) -> Result<f64> {
        let v = self.f.evaluate(x)?;
        self.fe_count += 1;
        if v < self.best_fitness {
            self.best_fitness = v;
            self.best_point.copy_from(x);
        }
        while self.next_checkpoint < self.checkpoints.len()
            && self.checkpoints[self.next_checkpoint] <= self.fe_count
        {
            self.record_point();
            self.next_checkpoint += 1;
        }
        Ok(v)
    }

    /// Clamps a candidate into the box before evaluating it.
    fn eval_clamped(&mut self, x: &DVector<f64>) -> Result<f64> {
        let (lo, hi) = self.f.bounds();
        if x.iter().all(|v| *v >= lo && *v <= hi) {
            return self.eval(x);
        }
        let mut c = x.clone();
        clamp_to_bounds(&mut c, (lo, hi));
        self.eval(&c)
    }

    fn record_point(&mut self) {
        let fev = self.f.fev(self.best_fitness);
        match self.trace.last() {
            Some(&(fe, _)) if fe == self.fe_count => {}
            _ => self.trace.push((self.fe_count, fev)),
        }
    }
}

/// Final result of a run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub best_point: DVector<f64>,
    pub best_fitness: f64,
    /// (fe_count, best FEV) at every generation boundary and at each
    /// configured checkpoint. Raw values; no reporting floor.
    pub trace: Vec<(u64, f64)>,
    pub fe_count: u64,
    pub generations: u64,
}

/// In-progress optimization run. Step it manually or drive it with
/// [`run`].
pub struct EdcRun<'a> {
    cfg: EdcConfig,
    f: &'a BenchmarkFunction,
    oracle: Oracle<'a>,
    generation: u64,
    population: DMatrix<f64>,
    fitness: Vec<f64>,
    pool: SolutionPool,
    basis: Basis,
    tracker: MeanTracker,
}

impl<'a> EdcRun<'a> {
    pub fn new(cfg: &EdcConfig, f: &'a BenchmarkFunction) -> Result<Self> {
        let n = f.dimension();
        cfg.validate(n)?;
        let p = cfg.population_size;
        let (lo, hi) = f.bounds();
        let mut master = rng::master(cfg.seed);

        let mut population = DMatrix::zeros(n, p);
        for c in 0..p {
            for r in 0..n {
                population[(r, c)] = lo + (hi - lo) * master.random::<f64>();
            }
        }

        let mut oracle = Oracle::new(f, cfg.report_checkpoints.clone());
        let mut fitness = Vec::with_capacity(p);
        for c in 0..p {
            fitness.push(oracle.eval(&population.column(c).into_owned())?);
        }

        // The initial search center is the population average; its
        // evaluation is charged to the budget like any other.
        let mu0 = population.column_mean();
        let f0 = oracle.eval_clamped(&mu0)?;
        let mut tracker = MeanTracker::new();
        tracker.initialize(mu0, f0);

        let pool = SolutionPool::new(cfg.pool_generations, cfg.selected_count(), n)?;

        oracle.record_point();
        Ok(EdcRun {
            cfg: cfg.clone(),
            f,
            oracle,
            generation: 1,
            population,
            fitness,
            pool,
            basis: Basis::identity(n),
            tracker,
        })
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn fe_count(&self) -> u64 {
        self.oracle.fe_count
    }

    pub fn best(&self) -> (&DVector<f64>, f64) {
        (&self.oracle.best_point, self.oracle.best_fitness)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn population(&self) -> &DMatrix<f64> {
        &self.population
    }

    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    pub fn trace(&self) -> &[(u64, f64)] {
        &self.oracle.trace
    }

    /// Whether another full generation fits into the budget. The worst
    /// case costs p + 1 evaluations: p - 1 offspring plus two
    /// mean-shift probes.
    pub fn can_step(&self) -> bool {
        self.oracle.fe_count + self.cfg.population_size as u64 + 1 <= self.cfg.max_fes
    }

    /// Indices of the best floor(tau * p) individuals, fitness
    /// ascending, ties broken by lower population index.
    fn select_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.cfg.population_size).collect();
        idx.sort_by(|&a, &b| {
            self.fitness[a]
                .partial_cmp(&self.fitness[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        idx.truncate(self.cfg.selected_count());
        idx
    }

    /// Runs one generation.
    pub fn step(&mut self) -> Result<()> {
        let n = self.f.dimension();
        let p = self.cfg.population_size;
        let t = self.generation;

        // (a) Selection, best-first.
        let selected = self.select_indices();
        let h = DMatrix::from_fn(n, selected.len(), |r, c| {
            self.population[(r, selected[c])]
        });

        // (b) Pool update; (c) scheduled basis recomputation. The basis
        // is only consumed by the transform, so the ablation skips the
        // SVD entirely.
        self.pool.update(&h)?;
        if self.cfg.transform_enabled
            && t % self.cfg.pool_generations as u64 == 0
            && self.pool.is_full()
        {
            self.basis = compute_basis(&self.pool, t)?;
        }

        // (d) Mean estimation and evolution-direction shift, in the
        // original space. Charges 1-2 evaluations.
        let mu_tilde = weighted_mean(&h)?;
        let oracle = &mut self.oracle;
        let shifted = shift_mean(
            &mu_tilde,
            &mut self.tracker,
            self.cfg.eta_forward,
            self.cfg.eta_backward,
            |x| {
                oracle
                    .eval_clamped(x)
                    .expect("mean-shift candidate has run dimension")
            },
        )?;

        // (e) Into the eigenspace.
        let (h_e, mu_e) = if self.cfg.transform_enabled {
            (
                self.basis.forward(&h)?,
                self.basis.forward_vector(&shifted.mean)?,
            )
        } else {
            (h, shifted.mean.clone())
        };

        // (f) Random decomposition, fresh every generation.
        let grouping = if self.cfg.decompose_enabled {
            let mut grng = rng::substream(self.cfg.seed, t, GROUPING_STREAM);
            Grouping::random(n, self.cfg.subproblem_size, &mut grng)?
        } else {
            Grouping::trivial(n)
        };

        // (g) Per-group model estimation and sampling.
        let h_parts = grouping.split(&h_e)?;
        let mu_parts = grouping.split(&DMatrix::from_column_slice(n, 1, mu_e.as_slice()))?;
        let mut offspring_parts = Vec::with_capacity(grouping.num_groups());
        for (gi, h_sub) in h_parts.iter().enumerate() {
            let mu_sub = DVector::from_column_slice(mu_parts[gi].as_slice());
            let cov = estimate_covariance(h_sub, &mu_sub)?;
            let model = build_model(mu_sub, cov).map_err(|e| match e {
                EdcError::SingularCovariance { max_jitter, .. } => {
                    EdcError::SingularCovariance {
                        max_jitter,
                        context: format!(" (generation {t}, group {gi})"),
                    }
                }
                other => other,
            })?;
            let mut srng = rng::substream(self.cfg.seed, t, gi as u64);
            offspring_parts.push(model.sample(p - 1, &mut srng));
        }

        // (h) Merge; (i) back into the original space.
        let merged = grouping.merge(&offspring_parts)?;
        let mut offspring = if self.cfg.transform_enabled {
            self.basis.backward(&merged)?
        } else {
            merged
        };

        // (j) Clamp; (k) evaluate p - 1 offspring.
        let (lo, hi) = self.f.bounds();
        for v in offspring.iter_mut() {
            *v = v.clamp(lo, hi);
        }
        let mut fitness = Vec::with_capacity(p);
        for c in 0..p - 1 {
            fitness.push(self.oracle.eval(&offspring.column(c).into_owned())?);
        }

        // (l) Next population: offspring plus the elite.
        let mut population = DMatrix::zeros(n, p);
        population.columns_mut(0, p - 1).copy_from(&offspring);
        population.set_column(p - 1, &self.oracle.best_point);
        fitness.push(self.oracle.best_fitness);

        self.population = population;
        self.fitness = fitness;
        self.oracle.record_point();
        self.generation += 1;
        Ok(())
    }

    pub fn into_outcome(self) -> RunOutcome {
        RunOutcome {
            best_point: self.oracle.best_point,
            best_fitness: self.oracle.best_fitness,
            trace: self.oracle.trace,
            fe_count: self.oracle.fe_count,
            generations: self.generation - 1,
        }
    }
}

/// Runs to the evaluation budget and returns the best solution found
/// with its convergence trace.
pub fn run(cfg: &EdcConfig, f: &BenchmarkFunction) -> Result<RunOutcome> {
    let mut state = EdcRun::new(cfg, f)?;
    while state.can_step() {
        state.step()?;
    }
    Ok(state.into_outcome())
}
