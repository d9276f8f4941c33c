//! Standard parabolic subalgebras containing the minimal parabolic, the
//! induced |k|-grading of the algebra and its grading element.
//!
//! A standard parabolic is parameterized by a subset `sigma` of the simple
//! restricted roots; the height of a root is the sum of its coefficients over
//! the simple roots *not* in `sigma`, and `g_i` collects the root spaces of
//! height `i` (with `m0 + a0` absorbed into `g_0`).

use crate::error::{PfError, Result};
use crate::lie::LieAlgebra;
use crate::linalg::QMat;
use crate::rational::{qi, qzero, Q};
use crate::roots::RootDatum;
use num::{BigInt, Signed, ToPrimitive};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Parabolic {
    /// Indices into `RootDatum::simple` of the roots kept at height zero.
    pub sigma: Vec<usize>,
    pub p_basis: Vec<Vec<Q>>,
    pub p_plus_basis: Vec<Vec<Q>>,
    pub g_minus_basis: Vec<Vec<Q>>,
    /// Height of each root, parallel to `RootDatum::roots`.
    pub heights: Vec<i32>,
}

/// The |k|-grading induced by a parabolic.
#[derive(Clone, Debug)]
pub struct Grading {
    pub depth: i32,
    /// Basis of each component `g_i`, `i = -depth ..= depth`.
    pub components: BTreeMap<i32, Vec<Vec<Q>>>,
    /// For every component basis vector, the restricted root it came from
    /// (`None` for the `m0 + a0` part of `g_0`).
    pub component_roots: BTreeMap<i32, Vec<Option<Vec<Q>>>>,
    pub grading_element: Vec<Q>,
}

/// Builds the standard parabolic determined by `sigma`, a subset of the
/// simple positive restricted roots (empty set = minimal parabolic).
pub fn parabolic_from_subset(
    algebra: &LieAlgebra,
    datum: &RootDatum,
    sigma: &[usize],
) -> Result<Parabolic> {
    for &s in sigma {
        if s >= datum.simple.len() {
            return Err(PfError::InvalidSpec(format!(
                "sigma index {} out of range: only {} simple restricted roots",
                s,
                datum.simple.len()
            )));
        }
    }
    let mut sigma = sigma.to_vec();
    sigma.sort_unstable();
    sigma.dedup();

    let mut heights = Vec::with_capacity(datum.roots.len());
    for i in 0..datum.roots.len() {
        let coords = datum.simple_coordinates(i)?;
        let mut h = qzero();
        for (j, c) in coords.iter().enumerate() {
            if !sigma.contains(&j) {
                h += c;
            }
        }
        if h.denom() != &BigInt::from(1) {
            return Err(PfError::Internal("non-integral root height".into()));
        }
        heights.push(h.numer().to_i32().ok_or_else(|| {
            PfError::Internal("root height out of range".into())
        })?);
    }

    let mut p_basis: Vec<Vec<Q>> = Vec::new();
    p_basis.extend(datum.m0_basis.clone());
    p_basis.extend(datum.a0_basis.clone());
    let mut p_plus_basis = Vec::new();
    let mut g_minus_basis = Vec::new();
    for (i, h) in heights.iter().enumerate() {
        if *h >= 0 {
            p_basis.extend(datum.root_spaces[i].clone());
        }
        if *h > 0 {
            p_plus_basis.extend(datum.root_spaces[i].clone());
        }
        if *h < 0 {
            g_minus_basis.extend(datum.root_spaces[i].clone());
        }
    }

    // containment p >= p0 = m0 + a0 + n0
    let p_mat = QMat::from_cols(p_basis.clone());
    for &i in &datum.positive {
        for v in &datum.root_spaces[i] {
            if !p_mat.spans(v) {
                return Err(PfError::Internal(
                    "standard parabolic does not contain the minimal parabolic".into(),
                ));
            }
        }
    }
    if algebra.dim != p_basis.len() + g_minus_basis.len() {
        return Err(PfError::Internal("parabolic dimension count failed".into()));
    }

    Ok(Parabolic { sigma, p_basis, p_plus_basis, g_minus_basis, heights })
}

/// Assembles the grading components by root height and solves for the
/// grading element.
pub fn compute_grading(
    algebra: &LieAlgebra,
    datum: &RootDatum,
    parabolic: &Parabolic,
) -> Result<Grading> {
    let mut components: BTreeMap<i32, Vec<Vec<Q>>> = BTreeMap::new();
    let mut component_roots: BTreeMap<i32, Vec<Option<Vec<Q>>>> = BTreeMap::new();

    for z in &datum.m0_basis {
        components.entry(0).or_default().push(z.clone());
        component_roots.entry(0).or_default().push(None);
    }
    for h in &datum.a0_basis {
        components.entry(0).or_default().push(h.clone());
        component_roots.entry(0).or_default().push(None);
    }
    // deterministic order: roots sorted lexicographically within each height
    let mut order: Vec<usize> = (0..datum.roots.len()).collect();
    order.sort_by(|&a, &b| datum.roots[a].cmp(&datum.roots[b]));
    for i in order {
        let h = parabolic.heights[i];
        for v in &datum.root_spaces[i] {
            components.entry(h).or_default().push(v.clone());
            component_roots.entry(h).or_default().push(Some(datum.roots[i].clone()));
        }
    }
    let depth = components.keys().map(|k| k.abs()).max().unwrap_or(0);
    for i in -depth..=depth {
        components.entry(i).or_default();
        component_roots.entry(i).or_default();
    }

    let grading_element = solve_grading_element(algebra, &components)?;
    Ok(Grading { depth, components, component_roots, grading_element })
}

/// Solves the exact linear system `[E, X] = i X` for all graded basis vectors
/// (including `[E, Z] = 0` on `g_0`) and asserts the solution is unique.
fn solve_grading_element(
    algebra: &LieAlgebra,
    components: &BTreeMap<i32, Vec<Vec<Q>>>,
) -> Result<Vec<Q>> {
    let dim = algebra.dim;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    for (i, basis) in components {
        for v in basis {
            // row block: for unknown E, sum_j E_j [b_j, v] = i v
            let cols: Vec<Vec<Q>> =
                (0..dim).map(|j| algebra.bracket(&algebra.basis_vector(j), v)).collect();
            for r in 0..dim {
                rows.push((0..dim).map(|j| cols[j][r].clone()).collect());
                rhs.push(qi(*i as i64) * &v[r]);
            }
        }
    }
    let a = QMat::from_rows(rows);
    let e = a
        .solve(&rhs)
        .ok_or_else(|| PfError::Internal("grading element system is inconsistent".into()))?;
    if !a.nullspace().is_empty() {
        return Err(PfError::Internal("grading element is not unique".into()));
    }
    // theta(E) = -E, hence E lies in q
    let te = algebra.theta_apply(&e);
    let neg: Vec<Q> = e.iter().map(|x| -x.clone()).collect();
    if te != neg {
        return Err(PfError::Internal("grading element is not theta-odd".into()));
    }
    Ok(e)
}

impl Grading {
    pub fn component(&self, i: i32) -> &[Vec<Q>] {
        self.components.get(&i).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dims(&self) -> Vec<(i32, usize)> {
        self.components.iter().map(|(i, b)| (*i, b.len())).collect()
    }
}
