//! Experiment harness: multi-seed runs, FEV reporting with the 1e-8
//! floor, convergence-trace CSV export, and summary statistics.

pub mod stats;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithm::{run, EdcConfig};
use crate::benchfn::{BenchmarkFunction, FunctionSpec};
use crate::error::{EdcError, Result};

/// FEVs below this are reported as zero.
pub const FEV_FLOOR: f64 = 1e-8;

pub fn floor_fev(fev: f64) -> f64 {
    if fev < FEV_FLOOR {
        0.0
    } else {
        fev
    }
}

/// Which variant to run: the full algorithm, the original-space
/// decomposition ablation, or plain GSM-GEDA on the whole problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Edc,
    Odc,
    Gsmgeda,
}

impl Algorithm {
    /// (transform_enabled, decompose_enabled)
    pub fn flags(self) -> (bool, bool) {
        match self {
            Algorithm::Edc => (true, true),
            Algorithm::Odc => (false, true),
            Algorithm::Gsmgeda => (false, false),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Edc => "edc",
            Algorithm::Odc => "odc",
            Algorithm::Gsmgeda => "gsmgeda",
        }
    }
}

/// One experiment: R independent runs of one algorithm on one fixed
/// benchmark instance, seeds base_seed..base_seed+R-1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub function: FunctionSpec,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub edc: EdcConfig,
    pub runs: u32,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    /// FE counts at which traces record extra points; defaults to 100
    /// logarithmically spaced counts up to the budget.
    #[serde(default)]
    pub checkpoints: Option<Vec<u64>>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(EdcError::InvalidConfig("runs must be at least 1".into()));
        }
        self.edc.validate(self.function.dimension)
    }
}

/// 100 log-spaced FE counts from the end of initialization to the
/// budget; matches log-scale convergence plots.
pub fn default_checkpoints(first_fe: u64, max_fes: u64) -> Vec<u64> {
    let lo = (first_fe.max(1)) as f64;
    let hi = (max_fes.max(first_fe + 1)) as f64;
    let mut cps: Vec<u64> = (0..100)
        .map(|i| (lo * (hi / lo).powf(i as f64 / 99.0)).round() as u64)
        .collect();
    cps.sort_unstable();
    cps.dedup();
    cps
}

/// Best-FEV history of one run, keyed by fitness-evaluation count.
/// FE counts strictly increase and FEVs never increase.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub points: Vec<(u64, f64)>,
}

impl ConvergenceTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fe_count,best_fev\n");
        for &(fe, fev) in &self.points {
            out.push_str(&format!("{fe},{fev}\n"));
        }
        out
    }

    pub fn from_csv(text: &str, path: &Path) -> Result<Self> {
        let malformed = |message: String| EdcError::MalformedTrace {
            path: path.to_path_buf(),
            message,
        };
        let mut lines = text.lines();
        match lines.next() {
            Some("fe_count,best_fev") => {}
            other => {
                return Err(malformed(format!(
                    "expected header 'fe_count,best_fev', got {other:?}"
                )))
            }
        }
        let mut points = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let (fe_s, fev_s) = line
                .split_once(',')
                .ok_or_else(|| malformed(format!("line {}: missing comma", lineno + 2)))?;
            let fe: u64 = fe_s
                .parse()
                .map_err(|e| malformed(format!("line {}: {e}", lineno + 2)))?;
            let fev: f64 = fev_s
                .parse()
                .map_err(|e| malformed(format!("line {}: {e}", lineno + 2)))?;
            points.push((fe, fev));
        }
        let trace = ConvergenceTrace { points };
        trace.check(path)?;
        Ok(trace)
    }

    fn check(&self, path: &Path) -> Result<()> {
        for w in self.points.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 > w[0].1 {
                return Err(EdcError::MalformedTrace {
                    path: path.to_path_buf(),
                    message: format!(
                        "non-monotone trace near fe_count {} -> {}",
                        w[0].0, w[1].0
                    ),
                });
            }
        }
        Ok(())
    }
}

/// One completed run: its seed, its floored final FEV, and its floored
/// convergence trace.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub seed: u64,
    pub final_fev: f64,
    pub trace: ConvergenceTrace,
}

/// Per-experiment aggregate written to `summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub function: String,
    pub algorithm: String,
    pub runs: u32,
    pub mean_fev: f64,
    pub std_fev: f64,
    pub median_fev: f64,
    pub per_run_fev: Vec<f64>,
}

/// Mean, sample standard deviation (divisor R-1, zero for a single
/// run), and median of already-floored FEVs.
pub fn summarize(fevs: &[f64]) -> Result<(f64, f64, f64)> {
    if fevs.is_empty() {
        return Err(EdcError::EmptyBlock);
    }
    let n = fevs.len() as f64;
    let mean = fevs.iter().sum::<f64>() / n;
    let std = if fevs.len() > 1 {
        (fevs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let mut sorted = fevs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    Ok((mean, std, median))
}

/// Comparison of two result sets: rank-sum significance plus effect
/// size, both on floored per-run FEVs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Comparison {
    pub rank_sum_p: f64,
    pub significance_mark: String,
    pub cohens_d: f64,
    pub effect_mark: String,
}

pub fn compare(a: &[f64], b: &[f64], alpha: f64) -> Result<Comparison> {
    let (p, verdict) = stats::rank_sum_test(a, b, alpha)?;
    let (d, effect) = stats::cohens_d(a, b)?;
    Ok(Comparison {
        rank_sum_p: p,
        significance_mark: verdict.mark().to_string(),
        cohens_d: d,
        effect_mark: effect.mark().to_string(),
    })
}

/// Runs the experiment in memory: R independent runs on one shared
/// function instance.
pub fn execute_runs(cfg: &RunConfig) -> Result<(Vec<RunResult>, ExperimentSummary)> {
    cfg.validate()?;
    let function = BenchmarkFunction::new(&cfg.function)?;
    let (transform, decompose) = cfg.algorithm.flags();
    let checkpoints = cfg.checkpoints.clone().unwrap_or_else(|| {
        default_checkpoints(cfg.edc.population_size as u64 + 1, cfg.edc.max_fes)
    });

    let mut results = Vec::with_capacity(cfg.runs as usize);
    for i in 0..cfg.runs as u64 {
        let mut ecfg = cfg.edc.clone();
        ecfg.transform_enabled = transform;
        ecfg.decompose_enabled = decompose;
        ecfg.seed = cfg.base_seed + i;
        ecfg.report_checkpoints = checkpoints.clone();
        let outcome = run(&ecfg, &function)?;
        let final_fev = floor_fev(function.fev(outcome.best_fitness));
        // Flooring is monotone, so the trace invariants survive it.
        let mut points: Vec<(u64, f64)> = Vec::with_capacity(outcome.trace.len());
        for &(fe, fev) in &outcome.trace {
            points.push((fe, floor_fev(fev)));
        }
        results.push(RunResult {
            seed: ecfg.seed,
            final_fev,
            trace: ConvergenceTrace { points },
        });
    }

    let fevs: Vec<f64> = results.iter().map(|r| r.final_fev).collect();
    let (mean_fev, std_fev, median_fev) = summarize(&fevs)?;
    let summary = ExperimentSummary {
        function: cfg.function.label(),
        algorithm: cfg.algorithm.name().to_string(),
        runs: cfg.runs,
        mean_fev,
        std_fev,
        median_fev,
        per_run_fev: fevs,
    };
    Ok((results, summary))
}

/// Runs the experiment and writes one trace CSV per run plus
/// `summary.json` into the output directory.
pub fn run_experiment(cfg: &RunConfig) -> Result<(Vec<RunResult>, ExperimentSummary)> {
    let (results, summary) = execute_runs(cfg)?;
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| EdcError::Io {
        path: dir.clone(),
        source: e,
    })?;
    for r in &results {
        let name = format!(
            "{}_{}_seed{}.csv",
            cfg.function.label(),
            cfg.algorithm.name(),
            r.seed
        );
        let path = dir.join(name);
        fs::write(&path, r.trace.to_csv()).map_err(|e| EdcError::Io {
            path: path.clone(),
            source: e,
        })?;
    }
    let spath = dir.join("summary.json");
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(&spath, json).map_err(|e| EdcError::Io {
        path: spath.clone(),
        source: e,
    })?;
    Ok((results, summary))
}

pub fn load_summary(path: &Path) -> Result<ExperimentSummary> {
    let text = fs::read_to_string(path).map_err(|e| EdcError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| EdcError::MalformedConfig {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| EdcError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| EdcError::MalformedConfig {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn load_trace(path: &Path) -> Result<ConvergenceTrace> {
    let text = fs::read_to_string(path).map_err(|e| EdcError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    ConvergenceTrace::from_csv(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchfn::{Family, Rotation};

    fn tiny_config(dir: &Path) -> RunConfig {
        RunConfig {
            function: FunctionSpec::new(Family::Sphere, 5, true, Rotation::None, 3).unwrap(),
            algorithm: Algorithm::Edc,
            edc: EdcConfig {
                population_size: 20,
                subproblem_size: 2,
                pool_generations: 3,
                max_fes: 1_000,
                ..Default::default()
            },
            runs: 2,
            base_seed: 100,
            output_dir: dir.to_path_buf(),
            checkpoints: None,
        }
    }

    #[test]
    fn floor_behavior() {
        assert_eq!(floor_fev(0.0), 0.0);
        assert_eq!(floor_fev(1e-9), 0.0);
        assert_eq!(floor_fev(1e-8), 1e-8);
        assert_eq!(floor_fev(3.5), 3.5);
    }

    #[test]
    fn summarize_cases() {
        let (m, s, med) = summarize(&[0.0, 0.0]).unwrap();
        assert_eq!((m, s, med), (0.0, 0.0, 0.0));
        let (m, s, _) = summarize(&[3.5]).unwrap();
        assert_eq!((m, s), (3.5, 0.0));
        let (m, s, med) = summarize(&[1.0, 3.0]).unwrap();
        assert_eq!(m, 2.0);
        assert!((s - 2.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(med, 2.0);
        let (_, _, med) = summarize(&[5.0, 1.0, 3.0]).unwrap();
        assert_eq!(med, 3.0);
    }

    #[test]
    fn trace_csv_round_trip() {
        let trace = ConvergenceTrace {
            points: vec![(21, 104.5), (40, 1.25e-3), (60, 0.0)],
        };
        let csv = trace.to_csv();
        let back = ConvergenceTrace::from_csv(&csv, Path::new("test.csv")).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn trace_csv_rejects_garbage() {
        let p = Path::new("bad.csv");
        assert!(ConvergenceTrace::from_csv("nope\n1,2\n", p).is_err());
        assert!(ConvergenceTrace::from_csv("fe_count,best_fev\n5,1.0\n4,0.5\n", p).is_err());
        assert!(ConvergenceTrace::from_csv("fe_count,best_fev\n4,1.0\n5,2.0\n", p).is_err());
    }

    #[test]
    fn default_checkpoints_are_increasing() {
        let cps = default_checkpoints(1001, 1_000_000);
        assert!(cps.len() > 50);
        assert!(cps.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*cps.first().unwrap(), 1001);
        assert_eq!(*cps.last().unwrap(), 1_000_000);
    }

    #[test]
    fn experiment_writes_traces_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny_config(dir.path());
        let (results, summary) = run_experiment(&cfg).unwrap();
        assert_eq!(results.len(), 2);
        assert_eq!(summary.per_run_fev.len(), 2);
        for seed in [100, 101] {
            let p = dir.path().join(format!("sphere_d5_edc_seed{seed}.csv"));
            assert!(p.exists(), "{p:?} missing");
            let trace = load_trace(&p).unwrap();
            assert!(!trace.points.is_empty());
        }
        let s = load_summary(&dir.path().join("summary.json")).unwrap();
        assert_eq!(s.runs, 2);
        assert_eq!(s.function, "sphere_d5");

        // No reported FEV may fall strictly inside (0, 1e-8).
        for r in &results {
            for &(_, fev) in &r.trace.points {
                assert!(fev == 0.0 || fev >= FEV_FLOOR);
            }
        }
    }

    #[test]
    fn rerun_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny_config(dir.path());
        run_experiment(&cfg).unwrap();
        let first = fs::read(dir.path().join("summary.json")).unwrap();
        let trace_first = fs::read(dir.path().join("sphere_d5_edc_seed100.csv")).unwrap();
        run_experiment(&cfg).unwrap();
        let second = fs::read(dir.path().join("summary.json")).unwrap();
        let trace_second = fs::read(dir.path().join("sphere_d5_edc_seed100.csv")).unwrap();
        assert_eq!(first, second);
        assert_eq!(trace_first, trace_second);
    }

    #[test]
    fn single_run_summary_has_zero_std() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(dir.path());
        cfg.runs = 1;
        let (_, summary) = execute_runs(&cfg).unwrap();
        assert_eq!(summary.std_fev, 0.0);
    }

    #[test]
    fn compare_sample_against_itself_is_similar() {
        let fevs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let c = compare(&fevs, &fevs, 0.05).unwrap();
        assert_eq!(c.significance_mark, "≈");
        assert_eq!(c.effect_mark, "≈");
    }
}
