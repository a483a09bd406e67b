//! Random decomposition of eigenvariable indices into disjoint subgroups.
//!
//! A grouping is a uniform random permutation of 0..n cut into
//! consecutive slices of size `s` (the last slice may be shorter), giving
//! m = ceil(n / s) subgroups. A fresh grouping is drawn each generation.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{EdcError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    /// Permutation of 0..n; group i owns a consecutive slice of it.
    permutation: Vec<usize>,
    group_sizes: Vec<usize>,
}

impl Grouping {
    /// Uniform random partition of `n` indices into ceil(n/s) groups.
    pub fn random<R: Rng>(n: usize, s: usize, rng: &mut R) -> Result<Self> {
        if s < 1 || s > n {
            return Err(EdcError::InvalidConfig(format!(
                "subproblem size must be in 1..={n}, got {s}"
            )));
        }
        let mut permutation: Vec<usize> = (0..n).collect();
        permutation.shuffle(rng);
        Ok(Self::from_permutation(permutation, s))
    }

    /// Identity permutation, single group; no decomposition.
    pub fn trivial(n: usize) -> Self {
        Self::from_permutation((0..n).collect(), n)
    }

    fn from_permutation(permutation: Vec<usize>, s: usize) -> Self {
        let n = permutation.len();
        let m = n.div_ceil(s);
        let mut group_sizes = vec![s; m];
        group_sizes[m - 1] = n - (m - 1) * s;
        Grouping {
            permutation,
            group_sizes,
        }
    }

    pub fn dim(&self) -> usize {
        self.permutation.len()
    }

    pub fn num_groups(&self) -> usize {
        self.group_sizes.len()
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Row indices owned by group `i`.
    pub fn group_indices(&self, i: usize) -> &[usize] {
        let start: usize = self.group_sizes[..i].iter().sum();
        &self.permutation[start..start + self.group_sizes[i]]
    }

    /// Splits an n-by-k block into m sub-blocks along the grouped rows.
    pub fn split(&self, block: &DMatrix<f64>) -> Result<Vec<DMatrix<f64>>> {
        if block.nrows() != self.dim() {
            return Err(EdcError::DimensionMismatch {
                expected: self.dim(),
                actual: block.nrows(),
            });
        }
        let k = block.ncols();
        Ok((0..self.num_groups())
            .map(|g| {
                let idx = self.group_indices(g);
                DMatrix::from_fn(idx.len(), k, |i, j| block[(idx[i], j)])
            })
            .collect())
    }

    /// Inverse of [`split`](Self::split): returns every row to its
    /// original index position.
    pub fn merge(&self, subblocks: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
        if subblocks.len() != self.num_groups() {
            return Err(EdcError::InvalidConfig(format!(
                "expected {} sub-blocks, got {}",
                self.num_groups(),
                subblocks.len()
            )));
        }
        let k = subblocks.first().map(|b| b.ncols()).unwrap_or(0);
        for (g, b) in subblocks.iter().enumerate() {
            if b.nrows() != self.group_sizes[g] || b.ncols() != k {
                return Err(EdcError::DimensionMismatch {
                    expected: self.group_sizes[g] * k,
                    actual: b.nrows() * b.ncols(),
                });
            }
        }
        let mut out = DMatrix::zeros(self.dim(), k);
        for (g, b) in subblocks.iter().enumerate() {
            let idx = self.group_indices(g);
            for (i, &row) in idx.iter().enumerate() {
                for j in 0..k {
                    out[(row, j)] = b[(i, j)];
                }
            }
        }
        Ok(out)
    }
}
