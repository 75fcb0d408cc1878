//! Empirical copula: the rank transform of a data matrix.
//!
//! Each column is mapped to pseudo-observations rank/n with average ranks for
//! ties, so entries lie in (0, 1] and the transform is deterministic. Ranks
//! depend only on the ordering within a column, which makes the transform (and
//! everything downstream) exactly invariant under strictly increasing
//! per-column maps.

use crate::matrix::DataMatrix;

/// How tied values are ranked. Only average ranks are supported; the enum
/// exists so the convention travels with the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    AverageRank,
}

/// Pseudo-observations of a [`DataMatrix`], stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCopula {
    u: Vec<f64>,
    n: usize,
    d: usize,
    tie_policy: TiePolicy,
}

impl EmpiricalCopula {
    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn n_cols(&self) -> usize {
        self.d
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    /// Row-major n x d buffer of pseudo-observations.
    pub fn pseudo_observations(&self) -> &[f64] {
        &self.u
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.u[i * self.d..(i + 1) * self.d]
    }
}

/// Rank transform with average ranks for ties: entry (i, j) is
/// avg-rank(x[i][j] within column j) / n.
pub fn rank_transform(x: &DataMatrix) -> EmpiricalCopula {
    let n = x.n_rows();
    let d = x.n_cols();
    let mut u = vec![0.0; n * d];
    let mut order: Vec<usize> = (0..n).collect();
    for j in 0..d {
        let col = x.column(j);
        order.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && col[order[end]] == col[order[start]] {
                end += 1;
            }
            // 1-based ranks start+1 ..= end share the average (start+1+end)/2
            let avg_rank = (start + 1 + end) as f64 / 2.0;
            let pseudo = avg_rank / n as f64;
            for &i in &order[start..end] {
                u[i * d + j] = pseudo;
            }
            start = end;
        }
    }
    EmpiricalCopula {
        u,
        n,
        d,
        tie_policy: TiePolicy::AverageRank,
    }
}
