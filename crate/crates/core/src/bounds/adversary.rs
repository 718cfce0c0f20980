//! Brute-force adversary matrices for small instances.
//!
//! Rows are the inputs with a marked item, columns the inputs without one.
//! The symmetric matrix `[[0, B], [B^T, 0]]` has spectral norm `sigma_max(B)`,
//! so every norm below is taken on the rectangular block.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::problem::{marked_family, unmarked_family, OracleAssignment, OracleKind};

/// Largest `N` for which matrices are enumerated.
pub const MATRIX_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Pairs `(S, i*)` with the unmarked input `S \ {i*}`.
    PairedRemoval,
    /// Pairs `(S, i*)` with the unmarked input on the same `S`.
    SameSet,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::PairedRemoval => "paired_removal",
            Construction::SameSet => "same_set",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryMatrix {
    pub construction: Construction,
    pub rows: Vec<OracleAssignment>,
    pub cols: Vec<OracleAssignment>,
    /// The off-diagonal block `B`, `rows x cols`.
    pub block: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryReport {
    pub construction: Construction,
    pub gamma_norm: f64,
    /// `max_i ||Gamma o D_i^*||`.
    pub max_d_star_norm: f64,
    /// `max_i ||Gamma o D_i^S||`.
    pub max_d_s_norm: f64,
    pub n_rows: usize,
    pub n_cols: usize,
}

pub(crate) fn check_regime(n: usize, m: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::BruteForceRegime { n, limit });
    }
    if m < 2 || m + 1 > n {
        return Err(Error::InvalidParameter(format!("need 2 <= M <= N - 1, got N = {n}, M = {m}")));
    }
    Ok(())
}

pub fn build_adversary(n: usize, m: usize, construction: Construction) -> Result<AdversaryMatrix> {
    check_regime(n, m, MATRIX_LIMIT)?;
    let rows = marked_family(n, m);
    let col_size = match construction {
        Construction::PairedRemoval => m - 1,
        Construction::SameSet => m,
    };
    let cols = unmarked_family(n, col_size);
    let block = DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
        let (x, y) = (&rows[r], &cols[c]);
        let i_star = x.i_star().expect("rows are marked");
        let paired = match construction {
            Construction::PairedRemoval => {
                y.members().iter().all(|&j| j != i_star && x.contains(j)) && y.set_size() + 1 == x.set_size()
            }
            Construction::SameSet => x.members() == y.members(),
        };
        if paired {
            1.0
        } else {
            0.0
        }
    });
    Ok(AdversaryMatrix { construction, rows, cols, block })
}

/// Largest singular value via the dense eigen-decomposition of the smaller
/// Gram matrix.
pub fn spectral_norm(b: &DMatrix<f64>) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    let gram = if b.nrows() >= b.ncols() { b.transpose() * b } else { b * b.transpose() };
    let top = SymmetricEigen::new(gram).eigenvalues.iter().copied().fold(0.0, f64::max);
    top.max(0.0).sqrt()
}

impl AdversaryMatrix {
    pub fn norm(&self) -> f64 {
        spectral_norm(&self.block)
    }

    /// `Gamma o D_i`: entries whose two inputs disagree on oracle `kind` at item `i`.
    pub fn filtered(&self, kind: OracleKind, i: usize) -> DMatrix<f64> {
        let differs: Vec<Vec<bool>> = self
            .rows
            .iter()
            .map(|x| self.cols.iter().map(|y| x.query(kind, i).ok() != y.query(kind, i).ok()).collect())
            .collect();
        DMatrix::from_fn(self.block.nrows(), self.block.ncols(), |r, c| if differs[r][c] { self.block[(r, c)] } else { 0.0 })
    }

    pub fn max_filtered_norm(&self, kind: OracleKind) -> f64 {
        let n = self.rows.first().map(|x| x.n()).unwrap_or(0);
        (0..n).map(|i| spectral_norm(&self.filtered(kind, i))).fold(0.0, f64::max)
    }

    /// `(u, w, sigma)` with `B w = sigma u`, `|u| = |w| = 1`. The principal
    /// eigenvector of the symmetric matrix is `(u; w) / sqrt 2`. When the top
    /// singular value is degenerate, `w` is the projection of the all-ones
    /// vector onto its eigenspace, which keeps the choice deterministic.
    pub fn principal_vectors(&self) -> (DVector<f64>, DVector<f64>, f64) {
        let b = &self.block;
        let eig = SymmetricEigen::new(b.transpose() * b);
        let top = eig.eigenvalues.iter().copied().fold(f64::MIN, f64::max);
        let ones = DVector::from_element(b.ncols(), 1.0);
        let mut w = DVector::zeros(b.ncols());
        for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda >= top - 1e-9 * top.abs().max(1.0) {
                let q = eig.eigenvectors.column(j);
                w += q * q.dot(&ones);
            }
        }
        if w.norm() < 1e-12 {
            let j = eig.eigenvalues.iter().enumerate().fold(0, |best, (j, &l)| if l > eig.eigenvalues[best] { j } else { best });
            w = eig.eigenvectors.column(j).into_owned();
        }
        w /= w.norm();
        let sigma = top.max(0.0).sqrt();
        let u = b * &w / sigma;
        (u, w, sigma)
    }

    pub fn report(&self) -> AdversaryReport {
        AdversaryReport {
            construction: self.construction,
            gamma_norm: self.norm(),
            max_d_star_norm: self.max_filtered_norm(OracleKind::Star),
            max_d_s_norm: self.max_filtered_norm(OracleKind::Set),
            n_rows: self.rows.len(),
            n_cols: self.cols.len(),
        }
    }
}

pub fn adversary_matrices(n: usize, m: usize, construction: Construction) -> Result<AdversaryReport> {
    Ok(build_adversary(n, m, construction)?.report())
}
