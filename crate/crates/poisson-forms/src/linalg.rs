//! Dense matrices over exact rationals: reduced row echelon form, rank,
//! nullspaces, linear solves, determinants, characteristic polynomials and
//! rational eigenvalue extraction.
//!
//! Everything here is small and exact; no pivot-size heuristics are needed at
//! the dimensions this crate works with (Lie algebras of dimension <= 15).

use crate::rational::{qi, qone, qzero, Q};
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![qzero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = qone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vec<Q>>) -> Self {
        QMat::from_rows(cols).transpose()
    }

    pub fn at(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<Q> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = QMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        *out.at_mut(r, c) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !self.at(r, c).is_zero() && !v[c].is_zero())
                    .fold(qzero(), |acc, c| acc + self.at(r, c) * &v[c])
            })
            .collect()
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, s: &Q) -> QMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn neg(&self) -> QMat {
        self.scale(&qi(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).fold(qzero(), |acc, i| acc + self.at(i, i))
    }

    pub fn hstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.rows, other.rows);
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = self.row(r);
            row.extend(other.row(r));
            rows.push(row);
        }
        QMat::from_rows(rows)
    }

    pub fn vstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.cols);
        let mut rows: Vec<Vec<Q>> = (0..self.rows).map(|r| self.row(r)).collect();
        rows.extend((0..other.rows).map(|r| other.row(r)));
        QMat::from_rows(rows)
    }

    /// In-place reduced row echelon form; returns the pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            if lead >= self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            // swap rows pr, lead
            for c in 0..self.cols {
                let tmp = self.at(pr, c).clone();
                *self.at_mut(pr, c) = self.at(lead, c).clone();
                *self.at_mut(lead, c) = tmp;
            }
            let inv = qone() / self.at(lead, col).clone();
            for c in 0..self.cols {
                *self.at_mut(lead, c) *= &inv;
            }
            for r in 0..self.rows {
                if r != lead && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in 0..self.cols {
                        let delta = &f * self.at(lead, c);
                        *self.at_mut(r, c) -= delta;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, in a deterministic order (one vector per
    /// free column of the rref).
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![qzero(); self.cols];
            v[free] = qone();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -m.at(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b`; `None` when inconsistent. For underdetermined
    /// systems the particular solution with zero free variables is returned.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, b.len());
        let mut aug = self.hstack(&QMat::from_cols(vec![b.to_vec()]));
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![qzero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.at(prow, self.cols).clone();
        }
        Some(x)
    }

    /// Is `self * x = b` solvable, i.e. is `b` in the column span?
    pub fn spans(&self, b: &[Q]) -> bool {
        self.solve(b).is_some()
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = self.hstack(&QMat::identity(n));
        let pivots = aug.rref();
        // singular input leaks pivots into the identity block
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut inv = QMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                *inv.at_mut(r, c) = aug.at(r, n + c).clone();
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = qone();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return qzero();
            };
            if pr != col {
                det = -det;
                for c in 0..n {
                    let tmp = m.at(pr, c).clone();
                    *m.at_mut(pr, c) = m.at(col, c).clone();
                    *m.at_mut(col, c) = tmp;
                }
            }
            let pivot = m.at(col, col).clone();
            det *= &pivot;
            for r in (col + 1)..n {
                if !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone() / &pivot;
                    for c in col..n {
                        let delta = &f * m.at(col, c);
                        *m.at_mut(r, c) -= delta;
                    }
                }
            }
        }
        det
    }

    /// Characteristic polynomial coefficients in ascending degree order
    /// (monic, length `n + 1`), by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<Q> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![qzero(); n + 1];
        coeffs[n] = qone();
        let mut m = QMat::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let c = -am.trace() / qi(k as i64);
            coeffs[n - k] = c.clone();
            m = am;
            for i in 0..n {
                *m.at_mut(i, i) += &c;
            }
        }
        coeffs
    }
}

/// Determinant of the submatrix of `m` with the given rows and columns.
pub fn minor_det(m: &QMat, rows: &[usize], cols: &[usize]) -> Q {
    assert_eq!(rows.len(), cols.len());
    let sub = QMat::from_rows(
        rows.iter()
            .map(|&r| cols.iter().map(|&c| m.at(r, c).clone()).collect())
            .collect(),
    );
    if sub.rows == 0 {
        qone()
    } else {
        sub.det()
    }
}

fn small_divisors(x: &BigInt) -> Option<Vec<i128>> {
    let v: i128 = x.abs().to_string().parse().ok()?;
    if v == 0 {
        return Some(vec![]);
    }
    let mut divs = Vec::new();
    let mut d: i128 = 1;
    while d * d <= v {
        if v % d == 0 {
            divs.push(d);
            divs.push(v / d);
        }
        d += 1;
        if d > 10_000_000 {
            return None; // give up; caller reports the realization unsupported
        }
    }
    divs.sort_unstable();
    divs.dedup();
    Some(divs)
}

fn poly_eval(coeffs: &[Q], x: &Q) -> Q {
    let mut acc = qzero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// All distinct rational roots of the polynomial with the given ascending
/// coefficients. Returns `None` if the search space cannot be enumerated.
pub fn rational_roots(coeffs: &[Q]) -> Option<Vec<Q>> {
    // strip trailing zeros (should not occur for monic input) and factor x^m
    let mut coeffs: Vec<Q> = coeffs.to_vec();
    while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return Some(vec![]);
    }
    let mut roots = Vec::new();
    let mut low = 0usize;
    while low < coeffs.len() && coeffs[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(qzero());
        coeffs.drain(..low);
    }
    if coeffs.len() <= 1 {
        return Some(roots);
    }
    // integerize
    let mut lcm = BigInt::one();
    for c in &coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let p_divs = small_divisors(&ints[0])?;
    let q_divs = small_divisors(ints.last().unwrap())?;
    let mut candidates = Vec::new();
    for &p in &p_divs {
        for &q in &q_divs {
            let base = Q::new(BigInt::from(p), BigInt::from(q));
            candidates.push(base.clone());
            candidates.push(-base);
        }
    }
    candidates.sort();
    candidates.dedup();
    for cand in candidates {
        if poly_eval(&coeffs, &cand).is_zero() {
            roots.push(cand);
        }
    }
    roots.sort();
    Some(roots)
}

/// Orthogonalizes `vectors` with respect to the symmetric bilinear form `ip`
/// by exact Gram-Schmidt (no normalization). Panics if a vector in the span
/// has zero self-pairing, i.e. the form is not definite on the span.
pub fn gram_schmidt<F>(vectors: &[Vec<Q>], ip: F) -> Vec<Vec<Q>>
where
    F: Fn(&[Q], &[Q]) -> Q,
{
    let mut out: Vec<Vec<Q>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for u in &out {
            let c = ip(&w, u) / ip(u, u);
            for (wi, ui) in w.iter_mut().zip(u.iter()) {
                *wi -= &c * ui;
            }
        }
        assert!(
            !ip(&w, &w).is_zero(),
            "bilinear form degenerate on the span during Gram-Schmidt"
        );
        out.push(w);
    }
    out
}

/// Simultaneous exact eigenspace decomposition of a commuting family of
/// operators with rational spectra. Returns `(weight, basis)` pairs, where
/// `weight[j]` is the eigenvalue of `ops[j]` on the subspace. `Err` carries a
/// message when some operator has irrational eigenvalues (dimension count
/// fails).
pub fn simultaneous_eigenspaces(
    ops: &[QMat],
    dim: usize,
) -> Result<Vec<(Vec<Q>, Vec<Vec<Q>>)>, String> {
    let id = QMat::identity(dim);
    let mut spaces: Vec<(Vec<Q>, Vec<Vec<Q>>)> =
        vec![(Vec::new(), (0..dim).map(|i| id.col(i)).collect())];
    for op in ops {
        let mut next = Vec::new();
        for (weights, basis) in spaces {
            let bmat = QMat::from_cols(basis.clone());
            // restriction of op to the subspace, in subspace coordinates
            let mut restr_cols = Vec::with_capacity(basis.len());
            for v in &basis {
                let image = op.mul_vec(v);
                let c = bmat
                    .solve(&image)
                    .ok_or_else(|| "subspace not invariant under operator".to_string())?;
                restr_cols.push(c);
            }
            let restr = QMat::from_cols(restr_cols);
            let roots = rational_roots(&restr.char_poly())
                .ok_or_else(|| "eigenvalue search space too large".to_string())?;
            let mut found = 0usize;
            for lam in roots {
                let mut shifted = restr.clone();
                for i in 0..shifted.rows {
                    *shifted.at_mut(i, i) -= &lam;
                }
                let ns = shifted.nullspace();
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                let sub_basis: Vec<Vec<Q>> = ns.iter().map(|c| bmat.mul_vec(c)).collect();
                let mut w = weights.clone();
                w.push(lam);
                next.push((w, sub_basis));
            }
            if found != basis.len() {
                return Err(
                    "operator has irrational eigenvalues; realization unsupported".to_string()
                );
            }
        }
        spaces = next;
    }
    spaces.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(spaces)
}
