//! Dense kernel extraction for small equilibrium systems.

use nalgebra::{DMatrix, DVector};

/// Right null space of a matrix.
#[derive(Debug, Clone)]
pub struct Kernel {
    /// Orthonormal columns spanning the numerical kernel, in canonical form
    /// (see [`canonical_basis`]).
    pub basis: DMatrix<f64>,
    pub sigma_max: f64,
}

impl Kernel {
    pub fn dimension(&self) -> usize {
        self.basis.ncols()
    }
}

/// Kernel of `m`: right singular vectors whose singular value is at most
/// `rank_tol · σ_max`.
pub fn kernel(m: &DMatrix<f64>, rank_tol: f64) -> Kernel {
    let n = m.ncols();
    if n == 0 {
        return Kernel {
            basis: DMatrix::zeros(0, 0),
            sigma_max: 0.0,
        };
    }
    // Pad wide matrices with zero rows so the factorisation returns all n
    // right singular vectors.
    let square = if m.nrows() < n {
        let mut padded = DMatrix::zeros(n, n);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let cutoff = rank_tol * sigma_max;

    let null: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect();
    let raw = if null.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&null)
    };
    Kernel {
        basis: canonical_basis(&raw),
        sigma_max,
    }
}

/// Deterministic orthonormal basis of the column span of `q` (which must
/// have orthonormal columns).
///
/// Coordinate axes are projected onto the subspace in order; each projection
/// with a residual of at least `0.5/√n` after removing the vectors already
/// chosen is normalised and kept. The result depends only on the subspace,
/// and each vector is signed so its first entry above 1e-9 in magnitude is
/// positive.
pub fn canonical_basis(q: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, d) = q.shape();
    if d == 0 {
        return DMatrix::zeros(n, 0);
    }
    let threshold = 0.5 / (n as f64).sqrt();
    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(d);
    for c in 0..n {
        if chosen.len() == d {
            break;
        }
        let mut r: DVector<f64> = q * q.row(c).transpose();
        // Two Gram-Schmidt passes keep the basis orthonormal to rounding.
        for _ in 0..2 {
            for b in &chosen {
                let proj = b.dot(&r);
                r.axpy(-proj, b, 1.0);
            }
        }
        let norm = r.norm();
        if norm >= threshold {
            chosen.push(r / norm);
        }
    }
    for b in &mut chosen {
        if let Some(first) = b.iter().copied().find(|v| v.abs() > 1e-9) {
            if first < 0.0 {
                b.neg_mut();
            }
        }
    }
    DMatrix::from_columns(&chosen)
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal columns; `None` when the dimensions differ.
pub fn subspace_sine(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<f64> {
    if a.shape() != b.shape() {
        return None;
    }
    if a.ncols() == 0 {
        return Some(0.0);
    }
    let residual = b - a * (a.transpose() * b);
    let s = residual.singular_values();
    Some(s.iter().fold(0.0f64, |m, &v| m.max(v)))
}
