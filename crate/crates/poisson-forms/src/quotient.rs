//! The `M`-representation `g/m` with its bidegree and grading-slice
//! structure, plus the metric data backing the `K`-Hodge star.
//!
//! The quotient is realized through an explicit section: the
//! `B_theta`-orthocomplement of `m` in `g`. Its basis is bidegree-adapted:
//!
//! * `(1,0)` part (dimension `n + d`): a basis of `g_0 ∩ q` first, then the
//!   representatives `F_X = X + m` for `X` running over the bases of
//!   `g_1, .., g_k`;
//! * `(0,1)` part (dimension `n`): the symmetrized representatives
//!   `G_X = X + theta(X) + m` for `X` over the bases of `g_{-1}, .., g_{-k}`.
//!
//! All forms in [`crate::forms`] are written in the dual of this basis, with
//! `(1,0)` indices before `(0,1)` indices.

use crate::error::{PfError, Result};
use crate::grading::Grading;
use crate::lie::LieAlgebra;
use crate::linalg::{gram_schmidt, QMat};
use crate::rational::{qzero, Q};
use crate::roots::span_intersection;
use num::Zero;
use std::collections::BTreeMap;

/// Which factor of the Whitney decomposition a quotient basis vector spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// `(g/m)^{1,0}`, the `G/K` direction.
    OneZero,
    /// `(g/m)^{0,1}`, the `G/P` direction.
    ZeroOne,
}

#[derive(Clone, Debug)]
pub struct BasisInfo {
    pub kind: BasisKind,
    /// Grading slice the vector belongs to (the slice of the generating root
    /// space; `0` for the `g_0 ∩ q` part).
    pub slice: i32,
    /// Restricted root of the generating root-space vector, when any.
    pub root: Option<Vec<Q>>,
}

#[derive(Clone, Debug)]
pub struct QuotientModule {
    pub algebra: LieAlgebra,
    pub grading: Grading,
    pub m_basis: Vec<Vec<Q>>,
    /// dim g/m.
    pub dim: usize,
    /// dim (g/m)^{1,0} = n + d.
    pub dim10: usize,
    /// dim (g/m)^{0,1} = n = dim G/P.
    pub dim01: usize,
    /// d = dim (g/m)_0.
    pub d0: usize,
    /// Section `g/m -> g` (columns are the quotient basis representatives).
    pub section: QMat,
    /// Projection `g -> g/m` (left inverse of the section killing `m`).
    pub projection: QMat,
    /// Involution induced by theta, in quotient coordinates.
    pub theta_m: QMat,
    /// Per quotient basis vector: kind, slice and originating root.
    pub basis_info: Vec<BasisInfo>,
    /// Projector onto `(g/m)_i` for each slice, in quotient coordinates.
    pub slice_projectors: BTreeMap<i32, QMat>,
    /// Induced m-action `P . ad(Z) . S` for each `m_basis` element.
    pub m_action: Vec<QMat>,
    /// Quotient bracket table: `bracket[a][b] = P([S e_a, S e_b])`.
    pub bracket: Vec<Vec<Vec<Q>>>,
}

/// Full pipeline from an algebra spec and a simple-root subset `sigma` to
/// the quotient module of the induced parabolic.
pub fn build_quotient(
    spec: crate::lie::AlgebraSpec,
    sigma: &[usize],
) -> Result<QuotientModule> {
    let algebra = crate::lie::build_algebra(spec)?;
    let roots = crate::roots::restricted_roots(&algebra)?;
    let parabolic = crate::grading::parabolic_from_subset(&algebra, &roots, sigma)?;
    let grading = crate::grading::compute_grading(&algebra, &roots, &parabolic)?;
    quotient_module(&algebra, &grading)
}

/// Builds the quotient data from a graded algebra.
pub fn quotient_module(algebra: &LieAlgebra, grading: &Grading) -> Result<QuotientModule> {
    let dim_g = algebra.dim;
    let g0 = QMat::from_cols(grading.component(0).to_vec());
    let m_basis = span_intersection(&g0, &algebra.k_span());
    let slice0 = span_intersection(&g0, &algebra.q_span());
    if m_basis.len() + slice0.len() != g0.cols {
        return Err(PfError::Internal("g_0 is not theta-stable".into()));
    }

    let mut reps: Vec<Vec<Q>> = Vec::new();
    let mut basis_info: Vec<BasisInfo> = Vec::new();
    for v in &slice0 {
        reps.push(v.clone());
        basis_info.push(BasisInfo { kind: BasisKind::OneZero, slice: 0, root: None });
    }
    for i in 1..=grading.depth {
        let roots = &grading.component_roots[&i];
        for (v, root) in grading.component(i).iter().zip(roots) {
            reps.push(v.clone());
            basis_info.push(BasisInfo { kind: BasisKind::OneZero, slice: i, root: root.clone() });
        }
    }
    let dim10 = reps.len();
    for i in 1..=grading.depth {
        let roots = &grading.component_roots[&(-i)];
        for (v, root) in grading.component(-i).iter().zip(roots) {
            let sym: Vec<Q> =
                v.iter().zip(algebra.theta_apply(v)).map(|(a, b)| a + b).collect();
            reps.push(sym);
            basis_info.push(BasisInfo { kind: BasisKind::ZeroOne, slice: -i, root: root.clone() });
        }
    }
    let dim = reps.len();
    let dim01 = dim - dim10;
    let d0 = slice0.len();
    if dim + m_basis.len() != dim_g {
        return Err(PfError::Internal("quotient dimension count failed".into()));
    }

    // full coordinate change [m | section]
    let mut full_cols = m_basis.clone();
    full_cols.extend(reps.clone());
    let full = QMat::from_cols(full_cols);
    let full_inv = full
        .inverse()
        .ok_or_else(|| PfError::Internal("m-basis and section do not span g".into()))?;
    let section = QMat::from_cols(reps);
    let mut projection = QMat::zeros(dim, dim_g);
    for r in 0..dim {
        for c in 0..dim_g {
            *projection.at_mut(r, c) = full_inv.at(m_basis.len() + r, c).clone();
        }
    }

    let theta_m = projection.mul(&algebra.theta).mul(&section);

    // slice-adapted basis (projections of the grading components, with g_0
    // replaced by g_0 ∩ q) and the induced projectors
    let mut slice_cols: Vec<Vec<Q>> = Vec::new();
    let mut slice_ranges: BTreeMap<i32, (usize, usize)> = BTreeMap::new();
    for i in -grading.depth..=grading.depth {
        let start = slice_cols.len();
        if i == 0 {
            slice_cols.extend(slice0.iter().map(|v| projection.mul_vec(v)));
        } else {
            slice_cols.extend(grading.component(i).iter().map(|v| projection.mul_vec(v)));
        }
        slice_ranges.insert(i, (start, slice_cols.len()));
    }
    let t = QMat::from_cols(slice_cols);
    let t_inv =
        t.inverse().ok_or_else(|| PfError::Internal("slice basis is degenerate".into()))?;
    let mut slice_projectors = BTreeMap::new();
    for (i, (start, end)) in slice_ranges {
        let mut sel = QMat::zeros(dim, dim);
        for j in start..end {
            *sel.at_mut(j, j) = crate::rational::qone();
        }
        slice_projectors.insert(i, t.mul(&sel).mul(&t_inv));
    }

    let m_action: Vec<QMat> =
        m_basis.iter().map(|z| projection.mul(&algebra.ad(z)).mul(&section)).collect();

    let mut bracket = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let br = algebra.bracket(&section.col(a), &section.col(b));
            bracket[a][b] = projection.mul_vec(&br);
        }
    }

    Ok(QuotientModule {
        algebra: algebra.clone(),
        grading: grading.clone(),
        m_basis,
        dim,
        dim10,
        dim01,
        d0,
        section,
        projection,
        theta_m,
        basis_info,
        slice_projectors,
        m_action,
        bracket,
    })
}

impl QuotientModule {
    /// `n = dim G/P`.
    pub fn n(&self) -> usize {
        self.dim01
    }

    /// `d = dim(G/K) - dim(G/P)`.
    pub fn d(&self) -> usize {
        self.d0
    }

    /// Quotient coordinates of `F_X = X + m` for `X` in `g` coordinates.
    pub fn f_rep(&self, x: &[Q]) -> Vec<Q> {
        self.projection.mul_vec(x)
    }

    /// Quotient coordinates of `G_X = X + theta(X) + m`.
    pub fn g_rep(&self, x: &[Q]) -> Vec<Q> {
        let sym: Vec<Q> =
            x.iter().zip(self.algebra.theta_apply(x)).map(|(a, b)| a + b).collect();
        self.projection.mul_vec(&sym)
    }

    /// Grading element in quotient coordinates.
    pub fn grading_element_qm(&self) -> Vec<Q> {
        self.projection.mul_vec(&self.grading.grading_element)
    }

    /// `B_theta` on representatives of quotient vectors.
    pub fn b_theta_qm(&self, x: &[Q], y: &[Q]) -> Q {
        self.algebra.b_theta(&self.section.mul_vec(x), &self.section.mul_vec(y))
    }
}

/// Metric data behind the `K`-Hodge star: a per-slice orthogonal frame of
/// `(g/m)^{1,0}` declared orthonormal.
///
/// The frame is obtained by exact Gram-Schmidt of `B_theta` within each
/// grading slice (slices are automatically `B_theta`-orthogonal). The inner
/// product that declares this frame orthonormal is a slice-wise rescaling of
/// `B_theta`; it stays positive definite and m-invariant for the shipped
/// families while keeping every Hodge dual rational.
#[derive(Clone, Debug)]
pub struct MetricData {
    /// Columns are the frame vectors in `(1,0)`-basis coordinates.
    pub frame: QMat,
    pub frame_inv: QMat,
    /// Gram matrix of raw `B_theta` on the `(1,0)` basis (reporting only).
    pub gram: QMat,
    pub slice0_dim: usize,
}

pub fn metric_data(qm: &QuotientModule) -> Result<MetricData> {
    let d10 = qm.dim10;
    let mut gram = QMat::zeros(d10, d10);
    for a in 0..d10 {
        for b in 0..d10 {
            *gram.at_mut(a, b) =
                qm.algebra.b_theta(&qm.section.col(a), &qm.section.col(b));
        }
    }
    // positive definiteness via leading principal minors
    for size in 1..=d10 {
        let sub = QMat::from_rows(
            (0..size).map(|r| (0..size).map(|c| gram.at(r, c).clone()).collect()).collect(),
        );
        if !(sub.det() > qzero()) {
            return Err(PfError::Internal("B_theta not positive definite on (g/m)^{1,0}".into()));
        }
    }

    // per-slice Gram-Schmidt in (1,0)-basis coordinates
    let ip = |x: &[Q], y: &[Q]| -> Q {
        let mut acc = qzero();
        for a in 0..d10 {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..d10 {
                if !y[b].is_zero() {
                    acc += &x[a] * &y[b] * gram.at(a, b);
                }
            }
        }
        acc
    };
    let mut frame_cols: Vec<Vec<Q>> = Vec::new();
    let mut start = 0usize;
    while start < d10 {
        let slice = qm.basis_info[start].slice;
        let mut end = start;
        while end < d10 && qm.basis_info[end].slice == slice {
            end += 1;
        }
        let block: Vec<Vec<Q>> = (start..end)
            .map(|a| {
                let mut e = vec![qzero(); d10];
                e[a] = crate::rational::qone();
                e
            })
            .collect();
        frame_cols.extend(gram_schmidt(&block, ip));
        start = end;
    }
    let frame = QMat::from_cols(frame_cols);
    let frame_inv =
        frame.inverse().ok_or_else(|| PfError::Internal("metric frame degenerate".into()))?;
    Ok(MetricData { frame, frame_inv, gram, slice0_dim: qm.d0 })
}
