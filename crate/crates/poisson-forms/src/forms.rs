//! Bigraded alternating forms on `g/m`: wedge products, the invariant-form
//! differential and its `K`/`P` split, the `K`-Hodge star, the
//! `K`-codifferential and the exact m-invariance solver.
//!
//! Coefficients are stored on dual-basis wedge monomials ordered
//! lexicographically by strictly increasing index tuples, `(1,0)` indices
//! before `(0,1)` indices. The coefficient of a monomial equals the value of
//! the form on the corresponding basis tuple.

use crate::error::{PfError, Result};
use crate::linalg::{minor_det, QMat};
use crate::quotient::{MetricData, QuotientModule};
use crate::rational::{qi, qone, qzero, Q};
use itertools::Itertools;
use num::Zero;
use std::collections::BTreeMap;

/// Monomial key: sorted `(1,0)` indices (in `0..dim10`) and sorted `(0,1)`
/// indices (local, in `0..dim01`).
pub type Mono = (Vec<usize>, Vec<usize>);

/// An alternating multilinear form on `g/m` with tracked bidegree `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedForm {
    pub p: usize,
    pub q: usize,
    pub coeffs: BTreeMap<Mono, Q>,
}

fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i64)> {
    // merges two sorted disjoint index lists, counting transpositions
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
            inversions += a.len() - i;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, if inversions % 2 == 0 { 1 } else { -1 }))
}

fn sorted_complement(sub: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|i| !sub.contains(i)).collect()
}

/// Sign of the permutation sending `(a ++ complement)` to ascending order,
/// for sorted disjoint `a`, `b` partitioning `0..n`.
fn split_sign(a: &[usize], b: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for &x in b {
        inversions += a.iter().filter(|&&y| y > x).count();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All `(p, q)` monomials in lexicographic order.
pub fn monomials(p: usize, q: usize, dim10: usize, dim01: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    for i in (0..dim10).combinations(p) {
        for j in (0..dim01).combinations(q) {
            out.push((i.clone(), j));
        }
    }
    out
}

/// Result of the m-invariance check. When the form is not invariant, the
/// residuals list the nonzero Lie derivatives per failing m-basis direction.
#[derive(Clone, Debug)]
pub struct InvarianceCertificate {
    pub invariant: bool,
    pub residuals: Vec<(usize, BigradedForm)>,
}

impl BigradedForm {
    pub fn zero(p: usize, q: usize) -> Self {
        BigradedForm { p, q, coeffs: BTreeMap::new() }
    }

    /// The constant `(0,0)`-form.
    pub fn constant(c: Q) -> Self {
        let mut f = BigradedForm::zero(0, 0);
        if !c.is_zero() {
            f.coeffs.insert((vec![], vec![]), c);
        }
        f
    }

    /// Dual covector of the `a`-th `(1,0)` basis vector.
    pub fn covector10(a: usize) -> Self {
        let mut f = BigradedForm::zero(1, 0);
        f.coeffs.insert((vec![a], vec![]), qone());
        f
    }

    /// Dual covector of the `j`-th `(0,1)` basis vector (local index).
    pub fn covector01(j: usize) -> Self {
        let mut f = BigradedForm::zero(0, 1);
        f.coeffs.insert((vec![], vec![j]), qone());
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    fn insert(&mut self, key: Mono, val: Q) {
        if val.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(qzero);
        *entry += val;
        if entry.is_zero() {
            // keep the map free of explicit zeros
            let key: Vec<Mono> = self
                .coeffs
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.coeffs.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &BigradedForm) -> BigradedForm {
        assert_eq!((self.p, self.q), (other.p, other.q), "bidegree mismatch in add");
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> BigradedForm {
        let mut out = BigradedForm::zero(self.p, self.q);
        if s.is_zero() {
            return out;
        }
        for (k, v) in &self.coeffs {
            out.coeffs.insert(k.clone(), v * s);
        }
        out
    }

    pub fn sub(&self, other: &BigradedForm) -> BigradedForm {
        self.add(&other.scale(&qi(-1)))
    }

    /// Evaluates on `p + q` vectors in quotient coordinates.
    pub fn eval(&self, qm: &QuotientModule, vectors: &[Vec<Q>]) -> Q {
        let r = self.p + self.q;
        assert_eq!(vectors.len(), r, "wrong number of arguments");
        assert!(vectors.iter().all(|v| v.len() == qm.dim));
        let mut acc = qzero();
        for ((i, j), c) in &self.coeffs {
            let combined: Vec<usize> =
                i.iter().copied().chain(j.iter().map(|&x| x + qm.dim10)).collect();
            let mat = QMat::from_rows(
                combined
                    .iter()
                    .map(|&idx| vectors.iter().map(|v| v[idx].clone()).collect())
                    .collect(),
            );
            let det = if r == 0 { qone() } else { mat.det() };
            acc += c * det;
        }
        acc
    }

    /// Wedge product; bidegrees add and the product is graded-commutative.
    /// Degrees exceeding the space dimensions yield the zero form.
    pub fn wedge(&self, other: &BigradedForm, qm: &QuotientModule) -> BigradedForm {
        let p = self.p + other.p;
        let q = self.q + other.q;
        let mut out = BigradedForm::zero(p, q);
        if p > qm.dim10 || q > qm.dim01 {
            return out;
        }
        for ((i1, j1), c1) in &self.coeffs {
            for ((i2, j2), c2) in &other.coeffs {
                let Some((i, si)) = merge_sign(i1, i2) else { continue };
                let Some((j, sj)) = merge_sign(j1, j2) else { continue };
                // moving the (0,1) block of the first factor past the (1,0)
                // block of the second
                let cross =
                    if (j1.len() * i2.len()) % 2 == 0 { 1i64 } else { -1 };
                out.insert((i, j), c1 * c2 * qi(si * sj * cross));
            }
        }
        out
    }

    /// Wedge power.
    pub fn power(&self, k: usize, qm: &QuotientModule) -> BigradedForm {
        let mut acc = BigradedForm::constant(qone());
        for _ in 0..k {
            acc = acc.wedge(self, qm);
        }
        acc
    }

    /// Algebraic Lie derivative along the `z`-th m-basis direction.
    pub fn lie_derivative(&self, qm: &QuotientModule, z: usize) -> BigradedForm {
        let r = self.p + self.q;
        let action = &qm.m_action[z];
        let mut out = BigradedForm::zero(self.p, self.q);
        for (i, j) in monomials(self.p, self.q, qm.dim10, qm.dim01) {
            let combined: Vec<usize> =
                i.iter().copied().chain(j.iter().map(|&x| x + qm.dim10)).collect();
            let mut val = qzero();
            for t in 0..r {
                let mut vectors: Vec<Vec<Q>> = combined
                    .iter()
                    .map(|&idx| {
                        let mut e = vec![qzero(); qm.dim];
                        e[idx] = qone();
                        e
                    })
                    .collect();
                vectors[t] = action.col(combined[t]);
                val -= self.eval(qm, &vectors);
            }
            out.insert((i, j), val);
        }
        out
    }

    /// Checks `L_Z omega = 0` for every `Z` in the m-basis.
    pub fn m_invariance(&self, qm: &QuotientModule) -> InvarianceCertificate {
        let mut residuals = Vec::new();
        for z in 0..qm.m_basis.len() {
            let lz = self.lie_derivative(qm, z);
            if !lz.is_zero() {
                residuals.push((z, lz));
            }
        }
        InvarianceCertificate { invariant: residuals.is_empty(), residuals }
    }

    pub fn is_m_invariant(&self, qm: &QuotientModule) -> bool {
        self.m_invariance(qm).invariant
    }

    fn require_invariant(&self, qm: &QuotientModule) -> Result<()> {
        let cert = self.m_invariance(qm);
        match cert.residuals.first() {
            None => Ok(()),
            Some((z, res)) => Err(PfError::NotInvariant {
                direction: *z,
                detail: format!("{} residual coefficients", res.coeffs.len()),
            }),
        }
    }

    /// Exterior derivative of the induced invariant form, as its bidegree
    /// components (sorted by ascending `(1,0)` degree). Defined only on
    /// m-invariant forms.
    pub fn differential(&self, qm: &QuotientModule) -> Result<Vec<BigradedForm>> {
        self.require_invariant(qm)?;
        let r = self.p + self.q;
        if r + 1 > qm.dim {
            return Ok(Vec::new());
        }
        let mut by_bidegree: BTreeMap<(usize, usize), BigradedForm> = BTreeMap::new();
        for tuple in (0..qm.dim).combinations(r + 1) {
            let mut val = qzero();
            for s in 0..(r + 1) {
                for t in (s + 1)..(r + 1) {
                    let mut vectors: Vec<Vec<Q>> =
                        Vec::with_capacity(r);
                    vectors.push(qm.bracket[tuple[s]][tuple[t]].clone());
                    for (idx, &u) in tuple.iter().enumerate() {
                        if idx != s && idx != t {
                            let mut e = vec![qzero(); qm.dim];
                            e[u] = qone();
                            vectors.push(e);
                        }
                    }
                    // right-invariant convention: (d omega)(X_0,..,X_r) =
                    // sum_{s<t} (-1)^{s+t+1} omega([X_s,X_t], .., ^X_s, .., ^X_t, ..)
                    let sign = if (s + t) % 2 == 0 { -qone() } else { qone() };
                    val += sign * self.eval(qm, &vectors);
                }
            }
            if val.is_zero() {
                continue;
            }
            let i: Vec<usize> = tuple.iter().copied().filter(|&x| x < qm.dim10).collect();
            let j: Vec<usize> =
                tuple.iter().copied().filter(|&x| x >= qm.dim10).map(|x| x - qm.dim10).collect();
            let key = (i.len(), j.len());
            by_bidegree
                .entry(key)
                .or_insert_with(|| BigradedForm::zero(key.0, key.1))
                .insert((i, j), val);
        }
        Ok(by_bidegree.into_values().filter(|f| !f.is_zero()).collect())
    }

    fn split_differential(&self, qm: &QuotientModule) -> Result<(BigradedForm, BigradedForm)> {
        let comps = self.differential(qm)?;
        let mut dk = BigradedForm::zero(self.p + 1, self.q);
        let mut dp = BigradedForm::zero(self.p, self.q + 1);
        for c in comps {
            if (c.p, c.q) == (self.p + 1, self.q) {
                dk = c;
            } else if (c.p, c.q) == (self.p, self.q + 1) {
                dp = c;
            } else {
                return Err(PfError::Internal(format!(
                    "unexpected differential component of bidegree ({}, {})",
                    c.p, c.q
                )));
            }
        }
        Ok((dk, dp))
    }

    /// `K`-derivative: the `(p+1, q)` component of the differential.
    pub fn d_k(&self, qm: &QuotientModule) -> Result<BigradedForm> {
        Ok(self.split_differential(qm)?.0)
    }

    /// `P`-derivative: the `(p, q+1)` component of the differential.
    pub fn d_p(&self, qm: &QuotientModule) -> Result<BigradedForm> {
        Ok(self.split_differential(qm)?.1)
    }

    /// `K`-Hodge star: acts on the `(1,0)` factor through the metric frame,
    /// identity on the `(0,1)` factor. Maps `(p, q)` to `(n+d-p, q)`.
    pub fn hodge_star_k(&self, qm: &QuotientModule, md: &MetricData) -> BigradedForm {
        let d10 = qm.dim10;
        let pc = d10 - self.p;
        let mut out = BigradedForm::zero(pc, self.q);
        // group the coefficients by their (0,1) part
        let mut groups: BTreeMap<Vec<usize>, BTreeMap<Vec<usize>, Q>> = BTreeMap::new();
        for ((i, j), c) in &self.coeffs {
            groups.entry(j.clone()).or_default().insert(i.clone(), c.clone());
        }
        let subsets_p: Vec<Vec<usize>> = (0..d10).combinations(self.p).collect();
        let subsets_pc: Vec<Vec<usize>> = (0..d10).combinations(pc).collect();
        for (j, by_i) in groups {
            // to frame coordinates
            let mut frame_coeffs: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
            for a in &subsets_p {
                let mut acc = qzero();
                for (i, c) in &by_i {
                    let det = minor_det(&md.frame, i, a);
                    if !det.is_zero() {
                        acc += c * det;
                    }
                }
                if !acc.is_zero() {
                    frame_coeffs.insert(a.clone(), acc);
                }
            }
            // combinatorial star in the orthonormal frame
            let mut starred: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
            for (a, c) in frame_coeffs {
                let comp = sorted_complement(&a, d10);
                let sign = split_sign(&a, &comp);
                starred.insert(comp, c * qi(sign));
            }
            // back to the (1,0) dual basis
            for b in &subsets_pc {
                let mut acc = qzero();
                for (a, c) in &starred {
                    let det = minor_det(&md.frame_inv, a, b);
                    if !det.is_zero() {
                        acc += c * det;
                    }
                }
                out.insert((b.clone(), j.clone()), acc);
            }
        }
        out
    }

    /// `K`-codifferential `(-1)^{(n+d)(p-1)+1} *_K d_K *_K`, lowering the
    /// `(1,0)` degree by one.
    pub fn codifferential_k(
        &self,
        qm: &QuotientModule,
        md: &MetricData,
    ) -> Result<BigradedForm> {
        if self.p == 0 {
            // no K-degree to lower
            return Ok(BigradedForm::zero(0, self.q));
        }
        let d10 = qm.dim10 as i64;
        let p = self.p as i64;
        let sign = if (d10 * (p - 1) + 1) % 2 == 0 { qone() } else { -qone() };
        let inner = self.hodge_star_k(qm, md).d_k(qm)?.hodge_star_k(qm, md);
        Ok(inner.scale(&sign))
    }
}

/// Exact basis of the m-invariant subspace of `Λ^{p,q}(g/m)^*`.
pub fn invariant_forms_basis(qm: &QuotientModule, p: usize, q: usize) -> Vec<BigradedForm> {
    let monos = monomials(p, q, qm.dim10, qm.dim01);
    if monos.is_empty() {
        return Vec::new();
    }
    if qm.m_basis.is_empty() {
        // trivial m: everything is invariant
        return monos
            .into_iter()
            .map(|m| {
                let mut f = BigradedForm::zero(p, q);
                f.coeffs.insert(m, qone());
                f
            })
            .collect();
    }
    let index: BTreeMap<Mono, usize> =
        monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut stacked_rows: Vec<Vec<Q>> = Vec::new();
    for z in 0..qm.m_basis.len() {
        let mut block = vec![vec![qzero(); monos.len()]; monos.len()];
        for (col, m) in monos.iter().enumerate() {
            let mut unit = BigradedForm::zero(p, q);
            unit.coeffs.insert(m.clone(), qone());
            let lz = unit.lie_derivative(qm, z);
            for (key, val) in lz.coeffs {
                block[index[&key]][col] = val;
            }
        }
        stacked_rows.extend(block);
    }
    let stacked = QMat::from_rows(stacked_rows);
    stacked
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut f = BigradedForm::zero(p, q);
            for (m, c) in monos.iter().zip(v) {
                if !c.is_zero() {
                    f.coeffs.insert(m.clone(), c);
                }
            }
            f
        })
        .collect()
}
