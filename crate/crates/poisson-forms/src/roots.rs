//! Restricted root decomposition: a fixed maximal abelian `a0` in `q`, exact
//! simultaneous `ad(a0)`-eigenspaces, a lexicographic positive system, the
//! half-sum `rho` and the centralizer `m0`.

use crate::error::{PfError, Result};
use crate::lie::{Family, LieAlgebra};
use crate::linalg::{simultaneous_eigenspaces, QMat};
use crate::rational::{qr, qzero, Q};
use num::Zero;
use std::cmp::Ordering;

/// Result of the restricted root decomposition. Roots are stored as their
/// exact value vectors on `a0_basis`.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub a0_basis: Vec<Vec<Q>>,
    pub roots: Vec<Vec<Q>>,
    /// `root_spaces[i]` is a basis of the root space of `roots[i]`.
    pub root_spaces: Vec<Vec<Vec<Q>>>,
    /// Indices into `roots` of the positive system (lexicographic).
    pub positive: Vec<usize>,
    /// Indices into `roots` of the simple positive roots.
    pub simple: Vec<usize>,
    pub rho: Vec<Q>,
    pub m0_basis: Vec<Vec<Q>>,
}

fn lex_positive(v: &[Q]) -> bool {
    for x in v {
        if !x.is_zero() {
            return *x > qzero();
        }
    }
    false
}

fn lex_cmp(a: &[Q], b: &[Q]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// The pinned choice of `a0` per family: the first boost generator for
/// `so(n+1,1)`, the traceless diagonal matrices for `sl(n,R)`.
pub fn default_a0(algebra: &LieAlgebra) -> Vec<Vec<Q>> {
    match algebra.spec.family {
        Family::So => vec![algebra.basis_vector(algebra.q_indices[0])],
        Family::Sl => {
            let n = algebra.spec.size;
            let n_sym = n * (n - 1) / 2;
            (0..(n - 1))
                .map(|i| algebra.basis_vector(algebra.k_indices.len() + n_sym + i))
                .collect()
        }
    }
}

/// Decomposes `algebra` into exact simultaneous `ad(a0)`-eigenspaces and
/// assembles the root datum. Fails if some eigenvalue is irrational (cannot
/// happen for the shipped families) or if the decomposition does not fill the
/// algebra.
pub fn restricted_roots(algebra: &LieAlgebra) -> Result<RootDatum> {
    let a0_basis = default_a0(algebra);
    let ops: Vec<QMat> = a0_basis.iter().map(|h| algebra.ad(h)).collect();
    let spaces = simultaneous_eigenspaces(&ops, algebra.dim).map_err(PfError::Unsupported)?;

    let total: usize = spaces.iter().map(|(_, b)| b.len()).sum();
    if total != algebra.dim {
        return Err(PfError::Unsupported(
            "ad(a0)-eigenspaces do not fill the algebra; realization unsupported".into(),
        ));
    }

    let mut roots = Vec::new();
    let mut root_spaces = Vec::new();
    let mut zero_space: Vec<Vec<Q>> = Vec::new();
    for (weight, basis) in spaces {
        if weight.iter().all(|w| w.is_zero()) {
            zero_space.extend(basis);
        } else {
            roots.push(weight);
            root_spaces.push(basis);
        }
    }

    // m0 = centralizer of a0 in k = zero-weight space intersected with k
    let zero_mat = QMat::from_cols(zero_space.clone());
    let k_mat = algebra.k_span();
    let m0_basis = span_intersection(&zero_mat, &k_mat);

    // g0 must split as m0 + a0 exactly for the shipped realizations
    let mut g0_check = m0_basis.clone();
    g0_check.extend(a0_basis.clone());
    let g0_mat = QMat::from_cols(g0_check);
    if g0_mat.cols != zero_space.len() || g0_mat.rank() != zero_space.len() {
        return Err(PfError::Unsupported(
            "zero-weight space is not m0 + a0; realization unsupported".into(),
        ));
    }

    let positive: Vec<usize> =
        (0..roots.len()).filter(|&i| lex_positive(&roots[i])).collect();
    if positive.len() * 2 != roots.len() {
        return Err(PfError::Internal("restricted roots not symmetric under negation".into()));
    }

    // rho = 1/2 sum over positive roots of dim(g_alpha) * alpha
    let rank = a0_basis.len();
    let mut rho = vec![qzero(); rank];
    for &i in &positive {
        let mult = qr(root_spaces[i].len() as i64, 2);
        for (r, v) in rho.iter_mut().zip(&roots[i]) {
            *r += &mult * v;
        }
    }

    // simple roots: positive roots that are not sums of two positive roots
    let mut simple = Vec::new();
    for &i in &positive {
        let mut decomposable = false;
        'outer: for &j in &positive {
            for &k in &positive {
                let sum: Vec<Q> =
                    roots[j].iter().zip(&roots[k]).map(|(a, b)| a + b).collect();
                if sum == roots[i] {
                    decomposable = true;
                    break 'outer;
                }
            }
        }
        if !decomposable {
            simple.push(i);
        }
    }
    simple.sort_by(|&a, &b| lex_cmp(&roots[a], &roots[b]));

    Ok(RootDatum { a0_basis, roots, root_spaces, positive, simple, rho, m0_basis })
}

/// Basis of the intersection of the column spans of `a` and `b`.
pub fn span_intersection(a: &QMat, b: &QMat) -> Vec<Vec<Q>> {
    if a.cols == 0 || b.cols == 0 {
        return Vec::new();
    }
    let stacked = a.hstack(&b.scale(&crate::rational::qi(-1)));
    stacked
        .nullspace()
        .into_iter()
        .map(|v| a.mul_vec(&v[..a.cols]))
        .collect()
}

impl RootDatum {
    /// Rank of the restricted root system (= dim a0).
    pub fn rank(&self) -> usize {
        self.a0_basis.len()
    }

    /// Coordinates of `roots[idx]` in the simple-root basis.
    pub fn simple_coordinates(&self, idx: usize) -> Result<Vec<Q>> {
        let smat = QMat::from_cols(self.simple.iter().map(|&s| self.roots[s].clone()).collect());
        smat.solve(&self.roots[idx]).ok_or_else(|| {
            PfError::Internal("root not in the span of the simple roots".into())
        })
    }
}
