//! Solution pool and the SVD-derived eigenspace transform.
//!
//! The pool is a ring buffer of the top solution sets from the most
//! recent generations. Zero-centering its columns and taking the left
//! singular vectors yields an orthonormal basis in which variable
//! dependencies are strongly weakened; forward/backward transforms are
//! plain multiplications by U^T and U.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{EdcError, Result};

/// Ring buffer of the `capacity` most recent solution sets, each an
/// n-by-`set_size` column block.
#[derive(Debug, Clone)]
pub struct SolutionPool {
    capacity: usize,
    set_size: usize,
    dim: usize,
    slots: VecDeque<DMatrix<f64>>,
}

impl SolutionPool {
    pub fn new(capacity: usize, set_size: usize, dim: usize) -> Result<Self> {
        if capacity == 0 || set_size == 0 || dim == 0 {
            return Err(EdcError::InvalidConfig(
                "pool capacity, set size and dimension must be positive".into(),
            ));
        }
        Ok(SolutionPool {
            capacity,
            set_size,
            dim,
            slots: VecDeque::with_capacity(capacity),
        })
    }

    /// Stores a new solution set, evicting the oldest one when full.
    pub fn update(&mut self, h: &DMatrix<f64>) -> Result<()> {
        if h.nrows() != self.dim || h.ncols() != self.set_size {
            return Err(EdcError::DimensionMismatch {
                expected: self.dim * self.set_size,
                actual: h.nrows() * h.ncols(),
            });
        }
        if self.slots.len() == self.capacity {
            self.slots.pop_front();
        }
        self.slots.push_back(h.clone());
        Ok(())
    }

    pub fn filled(&self) -> usize {
        self.slots.len()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() == self.capacity
    }

    /// Concatenates the stored sets, newest first, into an
    /// n-by-(filled * set_size) matrix.
    pub fn as_matrix(&self) -> DMatrix<f64> {
        let cols = self.filled() * self.set_size;
        let mut m = DMatrix::zeros(self.dim, cols);
        for (slot_idx, block) in self.slots.iter().rev().enumerate() {
            let offset = slot_idx * self.set_size;
            for c in 0..self.set_size {
                m.set_column(offset + c, &block.column(c));
            }
        }
        m
    }
}

/// Orthonormal transform matrix between the original space and the
/// eigenspace, with the generation it was built at. Immutable.
#[derive(Debug, Clone)]
pub struct Basis {
    u: DMatrix<f64>,
    built_at_generation: u64,
    is_identity: bool,
}

impl Basis {
    /// Initial basis: the identity, i.e. no transformation.
    pub fn identity(dim: usize) -> Self {
        Basis {
            u: DMatrix::identity(dim, dim),
            built_at_generation: 0,
            is_identity: true,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn built_at_generation(&self) -> u64 {
        self.built_at_generation
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity
    }

    /// Original space -> eigenspace: U^T * P.
    pub fn forward(&self, p: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_rows(p.nrows())?;
        if self.is_identity {
            return Ok(p.clone());
        }
        Ok(self.u.transpose() * p)
    }

    /// Eigenspace -> original space: U * P'.
    pub fn backward(&self, p_eigen: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_rows(p_eigen.nrows())?;
        if self.is_identity {
            return Ok(p_eigen.clone());
        }
        Ok(&self.u * p_eigen)
    }

    pub fn forward_vector(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_rows(v.len())?;
        if self.is_identity {
            return Ok(v.clone());
        }
        Ok(self.u.transpose() * v)
    }

    pub fn backward_vector(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_rows(v.len())?;
        if self.is_identity {
            return Ok(v.clone());
        }
        Ok(&self.u * v)
    }

    fn check_rows(&self, rows: usize) -> Result<()> {
        if rows != self.u.nrows() {
            return Err(EdcError::DimensionMismatch {
                expected: self.u.nrows(),
                actual: rows,
            });
        }
        Ok(())
    }
}

/// Builds the eigenspace basis from a full pool: zero-center the pooled
/// columns, take the left singular vectors ordered by descending
/// singular value, complete any rank-deficient remainder with an
/// orthonormal complement, and fix each column's sign so its
/// largest-magnitude entry is positive.
pub fn compute_basis(pool: &SolutionPool, generation: u64) -> Result<Basis> {
    if !pool.is_full() {
        return Err(EdcError::PoolNotFull {
            filled: pool.filled(),
            capacity: pool.capacity(),
        });
    }
    let mut m = pool.as_matrix();
    let n = m.nrows();
    let cols = m.ncols();

    // Zero-center: subtract the column mean vector.
    let mean = m.column_mean();
    for c in 0..cols {
        for r in 0..n {
            m[(r, c)] -= mean[r];
        }
    }

    let svd = m.try_svd(true, false, f64::EPSILON, 0).ok_or(EdcError::SvdFailed)?;
    let u_raw = svd.u.ok_or(EdcError::SvdFailed)?;
    let sv = svd.singular_values;

    // Order columns by descending singular value.
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap_or(std::cmp::Ordering::Equal));

    let max_sv = order.first().map(|&i| sv[i]).unwrap_or(0.0);
    let tol = max_sv * (n.max(cols) as f64) * f64::EPSILON;

    let mut u = DMatrix::zeros(n, n);
    let mut rank = 0;
    for &i in &order {
        if sv[i] > tol && rank < n {
            u.set_column(rank, &u_raw.column(i));
            rank += 1;
        }
    }

    complete_orthonormal(&mut u, rank);
    fix_signs(&mut u);

    let is_identity = u == DMatrix::identity(n, n);
    Ok(Basis {
        u,
        built_at_generation: generation,
        is_identity,
    })
}

/// Fills columns `rank..n` with an orthonormal complement of the first
/// `rank` columns, chosen deterministically from the canonical basis.
fn complete_orthonormal(u: &mut DMatrix<f64>, rank: usize) {
    let n = u.nrows();
    let mut have = rank;
    let mut candidate = 0;
    while have < n && candidate < n {
        let mut v = DVector::zeros(n);
        v[candidate] = 1.0;
        // Two Gram-Schmidt passes for stability.
        for _ in 0..2 {
            for j in 0..have {
                let col = u.column(j);
                let proj = col.dot(&v);
                v -= proj * DVector::from(col);
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v /= norm;
            u.set_column(have, &v);
            have += 1;
        }
        candidate += 1;
    }
    debug_assert_eq!(have, n, "orthonormal completion fell short");
}

/// Sign convention: the largest-magnitude entry of each column is positive.
fn fix_signs(u: &mut DMatrix<f64>) {
    let (n, cols) = u.shape();
    for j in 0..cols {
        let mut best = 0;
        for i in 1..n {
            if u[(i, j)].abs() > u[(best, j)].abs() {
                best = i;
            }
        }
        if u[(best, j)] < 0.0 {
            for i in 0..n {
                u[(i, j)] = -u[(i, j)];
            }
        }
    }
}
