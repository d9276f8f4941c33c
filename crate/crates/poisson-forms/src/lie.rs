//! Matrix realizations of the shipped real semisimple Lie algebras, with
//! structure constants, Killing form and Cartan involution over exact
//! rationals.
//!
//! Two families are provided: the split-rank-one Lorentz algebras
//! `so(n+1, 1)` realized as `J`-antisymmetric matrices with
//! `J = diag(1, .., 1, -1)`, and `sl(n, R)` realized as traceless matrices.
//! The basis is ordered Cartan-adapted: a basis of `k` (the `+1` eigenspace
//! of the Cartan involution) first, then a basis of `q`.

use crate::error::{PfError, Result};
use crate::linalg::QMat;
use crate::rational::{qi, qzero, Q};
use num::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `so(p, 1)` with `p = n + 1 >= 2`.
    So,
    /// `sl(n, R)` with `n >= 2`.
    Sl,
}

/// Selects a concrete matrix algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub family: Family,
    /// `p` for `so(p,1)`, `n` for `sl(n,R)`.
    pub size: usize,
}

impl AlgebraSpec {
    pub fn so(p: usize) -> Self {
        AlgebraSpec { family: Family::So, size: p }
    }

    pub fn sl(n: usize) -> Self {
        AlgebraSpec { family: Family::Sl, size: n }
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::So => format!("so({},1)", self.size),
            Family::Sl => format!("sl({},R)", self.size),
        }
    }

    fn validate(&self) -> Result<()> {
        match self.family {
            Family::So if self.size < 2 => Err(PfError::InvalidSpec(
                "so(p,1) requires p >= 2 (boundary dimension n = p - 1 >= 1)".into(),
            )),
            Family::Sl if self.size < 2 => {
                Err(PfError::InvalidSpec("sl(n,R) requires n >= 2".into()))
            }
            _ => Ok(()),
        }
    }
}

/// A real semisimple Lie algebra in a matrix realization.
///
/// `basis[i]` are `matrix_size x matrix_size` rational matrices;
/// `structure[i][j][k]` are the constants of `[b_i, b_j] = sum_k c_ijk b_k`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub spec: AlgebraSpec,
    pub dim: usize,
    pub matrix_size: usize,
    pub basis: Vec<QMat>,
    pub structure: Vec<Vec<Vec<Q>>>,
    pub killing: QMat,
    /// Cartan involution as a matrix on coordinates.
    pub theta: QMat,
    pub k_indices: Vec<usize>,
    pub q_indices: Vec<usize>,
}

fn unit(n: usize, r: usize, c: usize) -> QMat {
    let mut m = QMat::zeros(n, n);
    *m.at_mut(r, c) = qi(1);
    m
}

fn commutator(a: &QMat, b: &QMat) -> QMat {
    a.mul(b).add(&b.mul(a).neg())
}

/// Builds the algebra of `spec`, satisfying every structural invariant
/// exactly. For `so(n+1,1)` the Cartan involution is negative transpose
/// conjugated by `diag(1,..,1,-1)`; for `sl(n,R)` it is negative transpose.
pub fn build_algebra(spec: AlgebraSpec) -> Result<LieAlgebra> {
    spec.validate()?;
    let (matrix_size, k_basis, q_basis) = match spec.family {
        Family::So => {
            let p = spec.size;
            let nn = p + 1; // matrix size
            let mut kb = Vec::new();
            for a in 0..p {
                for b in (a + 1)..p {
                    kb.push(unit(nn, a, b).add(&unit(nn, b, a).neg()));
                }
            }
            let qb: Vec<QMat> =
                (0..p).map(|a| unit(nn, a, nn - 1).add(&unit(nn, nn - 1, a))).collect();
            (nn, kb, qb)
        }
        Family::Sl => {
            let n = spec.size;
            let mut kb = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    kb.push(unit(n, i, j).add(&unit(n, j, i).neg()));
                }
            }
            let mut qb = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    qb.push(unit(n, i, j).add(&unit(n, j, i)));
                }
            }
            for i in 0..(n - 1) {
                qb.push(unit(n, i, i).add(&unit(n, i + 1, i + 1).neg()));
            }
            (n, kb, qb)
        }
    };

    let k_len = k_basis.len();
    let mut basis = k_basis;
    basis.extend(q_basis);
    let dim = basis.len();

    // coordinate expansion: pinv = (V^T V)^{-1} V^T with V = vectorized basis
    let vmat = QMat::from_cols(
        basis
            .iter()
            .map(|m| {
                let mut v = Vec::with_capacity(matrix_size * matrix_size);
                for r in 0..matrix_size {
                    for c in 0..matrix_size {
                        v.push(m.at(r, c).clone());
                    }
                }
                v
            })
            .collect(),
    );
    let vt = vmat.transpose();
    let pinv = vt
        .mul(&vmat)
        .inverse()
        .ok_or_else(|| PfError::Internal("basis matrices are linearly dependent".into()))?
        .mul(&vt);
    let expand = |m: &QMat| -> Result<Vec<Q>> {
        let mut v = Vec::with_capacity(matrix_size * matrix_size);
        for r in 0..matrix_size {
            for c in 0..matrix_size {
                v.push(m.at(r, c).clone());
            }
        }
        let coords = pinv.mul_vec(&v);
        // verify exact membership in the span
        let recon = vmat.mul_vec(&coords);
        if recon != v {
            return Err(PfError::Internal("bracket left the basis span".into()));
        }
        Ok(coords)
    };

    let mut structure = vec![vec![vec![qzero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            structure[i][j] = expand(&commutator(&basis[i], &basis[j]))?;
        }
    }

    // Killing form from structure constants: B_ij = sum_{k,l} c_ikl c_jlk
    let mut killing = QMat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = qzero();
            for k in 0..dim {
                for l in 0..dim {
                    let a = &structure[i][k][l];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &structure[j][l][k];
                    if !b.is_zero() {
                        acc += a * b;
                    }
                }
            }
            *killing.at_mut(i, j) = acc;
        }
    }

    let mut theta = QMat::zeros(dim, dim);
    for i in 0..dim {
        *theta.at_mut(i, i) = if i < k_len { qi(1) } else { qi(-1) };
    }

    Ok(LieAlgebra {
        spec,
        dim,
        matrix_size,
        basis,
        structure,
        killing,
        theta,
        k_indices: (0..k_len).collect(),
        q_indices: (k_len..dim).collect(),
    })
}

impl LieAlgebra {
    /// Bracket of coordinate vectors via the structure tensor.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![qzero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..self.dim {
                    let c = &self.structure[i][j][k];
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Adjoint matrix of a coordinate vector.
    pub fn ad(&self, x: &[Q]) -> QMat {
        let cols: Vec<Vec<Q>> = (0..self.dim)
            .map(|j| {
                let mut e = vec![qzero(); self.dim];
                e[j] = qi(1);
                self.bracket(x, &e)
            })
            .collect();
        QMat::from_cols(cols)
    }

    /// `B(X, Y) = tr(ad X . ad Y)`, bilinear and symmetric, from the cached
    /// Gram matrix of the basis.
    pub fn killing_form(&self, x: &[Q], y: &[Q]) -> Result<Q> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(PfError::DimensionMismatch(format!(
                "killing_form expects coordinate vectors of length {}",
                self.dim
            )));
        }
        Ok(self.killing.mul_vec(y).iter().zip(x).fold(qzero(), |acc, (by, xi)| acc + xi * by))
    }

    /// `B_theta(X, Y) = -B(X, theta Y)`, the positive definite form used for
    /// complements and metrics.
    pub fn b_theta(&self, x: &[Q], y: &[Q]) -> Q {
        let ty = self.theta.mul_vec(y);
        -self.killing_form(x, &ty).expect("coordinate lengths checked by caller")
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        let mut e = vec![qzero(); self.dim];
        e[i] = qi(1);
        e
    }

    /// Coordinate matrix whose columns span `k`.
    pub fn k_span(&self) -> QMat {
        QMat::from_cols(self.k_indices.iter().map(|&i| self.basis_vector(i)).collect())
    }

    /// Coordinate matrix whose columns span `q`.
    pub fn q_span(&self) -> QMat {
        QMat::from_cols(self.q_indices.iter().map(|&i| self.basis_vector(i)).collect())
    }

    pub fn theta_apply(&self, x: &[Q]) -> Vec<Q> {
        self.theta.mul_vec(x)
    }
}
