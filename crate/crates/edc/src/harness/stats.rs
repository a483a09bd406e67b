//! Wilcoxon rank-sum (Mann-Whitney) test and Cohen's d effect size.
//!
//! Values are compared under a minimization convention: smaller is
//! better. The rank-sum test uses midranks for ties and the normal
//! approximation with tie and continuity corrections.

use crate::error::{EdcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSumVerdict {
    ABetter,
    BBetter,
    NoDifference,
}

impl RankSumVerdict {
    /// Table mark relative to sample `a`: '+' a better, '-' b better.
    pub fn mark(self) -> &'static str {
        match self {
            RankSumVerdict::ABetter => "+",
            RankSumVerdict::BBetter => "-",
            RankSumVerdict::NoDifference => "≈",
        }
    }
}

/// Midranks of the combined sample, returned per group: (ranks_a,
/// ranks_b). Tied values share the average of their rank positions.
fn midranks(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len() + b.len();
    let mut tagged: Vec<(f64, usize)> = a
        .iter()
        .map(|&v| (v, 0))
        .chain(b.iter().map(|&v| (v, 1)))
        .collect();
    tagged.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && tagged[j].0 == tagged[i].0 {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for r in ranks.iter_mut().take(j).skip(i) {
            *r = rank;
        }
        i = j;
    }
    let mut ra = Vec::with_capacity(a.len());
    let mut rb = Vec::with_capacity(b.len());
    for (k, &(_, group)) in tagged.iter().enumerate() {
        if group == 0 {
            ra.push(ranks[k]);
        } else {
            rb.push(ranks[k]);
        }
    }
    (ra, rb)
}

/// Sizes of tie groups in the combined sample.
fn tie_sizes(a: &[f64], b: &[f64]) -> Vec<usize> {
    let mut all: Vec<f64> = a.iter().chain(b.iter()).cloned().collect();
    all.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let mut sizes = Vec::new();
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j] == all[i] {
            j += 1;
        }
        sizes.push(j - i);
        i = j;
    }
    sizes
}

fn std_normal_sf_doubled(z_abs: f64) -> f64 {
    // Two-sided p-value: 2 * (1 - Phi(|z|)) = erfc(|z| / sqrt(2)).
    libm::erfc(z_abs / std::f64::consts::SQRT_2)
}

/// Two-sided Mann-Whitney rank-sum test at significance `alpha`.
///
/// Returns the p-value and a directional verdict; when p < alpha the
/// sample with the smaller mean rank (smaller values, minimization) is
/// declared better.
pub fn rank_sum_test(a: &[f64], b: &[f64], alpha: f64) -> Result<(f64, RankSumVerdict)> {
    if a.len() < 3 || b.len() < 3 {
        return Err(EdcError::InvalidConfig(
            "rank-sum test needs at least 3 observations per sample".into(),
        ));
    }
    let n1 = a.len() as f64;
    let n2 = b.len() as f64;
    let n = n1 + n2;
    let (ra, rb) = midranks(a, b);
    let r1: f64 = ra.iter().sum();
    let u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    let mean_u = n1 * n2 / 2.0;

    let tie_term: f64 = tie_sizes(a, b)
        .iter()
        .map(|&t| (t * t * t - t) as f64)
        .sum();
    let var_u = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var_u <= 0.0 {
        // Every observation identical in both samples.
        return Ok((1.0, RankSumVerdict::NoDifference));
    }

    let z = ((u1 - mean_u).abs() - 0.5).max(0.0) / var_u.sqrt();
    let p = std_normal_sf_doubled(z);
    let verdict = if p < alpha {
        let mean_rank_a = r1 / n1;
        let mean_rank_b = rb.iter().sum::<f64>() / n2;
        if mean_rank_a < mean_rank_b {
            RankSumVerdict::ABetter
        } else {
            RankSumVerdict::BBetter
        }
    } else {
        RankSumVerdict::NoDifference
    };
    Ok((p, verdict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectVerdict {
    FirstBetter,
    SecondBetter,
    Similar,
}

impl EffectVerdict {
    pub fn mark(self) -> &'static str {
        match self {
            EffectVerdict::FirstBetter => "+",
            EffectVerdict::SecondBetter => "-",
            EffectVerdict::Similar => "≈",
        }
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_var(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Cohen's d with pooled standard deviation; |d| below 0.2 counts as no
/// practical difference. Minimization: negative d favors the first
/// sample.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<(f64, EffectVerdict)> {
    if a.len() < 2 || b.len() < 2 {
        return Err(EdcError::InvalidConfig(
            "effect size needs at least 2 observations per sample".into(),
        ));
    }
    let na = a.len() as f64;
    let nb = b.len() as f64;
    let ma = mean(a);
    let mb = mean(b);
    let pooled =
        (((na - 1.0) * sample_var(a) + (nb - 1.0) * sample_var(b)) / (na + nb - 2.0)).sqrt();
    if pooled == 0.0 {
        if ma == mb {
            return Ok((0.0, EffectVerdict::Similar));
        }
        let d = if ma < mb {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        let verdict = if ma < mb {
            EffectVerdict::FirstBetter
        } else {
            EffectVerdict::SecondBetter
        };
        return Ok((d, verdict));
    }
    let d = (ma - mb) / pooled;
    let verdict = if d.abs() < 0.2 {
        EffectVerdict::Similar
    } else if d < 0.0 {
        EffectVerdict::FirstBetter
    } else {
        EffectVerdict::SecondBetter
    };
    Ok((d, verdict))
}
