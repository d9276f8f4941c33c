//! The distinguished kernels `φ_k = *_K(τ ∧ (d_P E*)^{n-k})` and their exact
//! verification reports.

use crate::config::FormJson;
use crate::error::{PfError, Result};
use crate::forms::BigradedForm;
use crate::quotient::{MetricData, QuotientModule};
use crate::rational::{q_to_string, qi, qzero, Q};
use num::Zero;
use serde::{Deserialize, Serialize};

/// The dual `E*` of the grading element: the unique `(1,0)`-covector with
/// `E*(E) = 1` vanishing on the `B_theta`-orthocomplement of `E`.
pub fn grading_coform(qm: &QuotientModule) -> BigradedForm {
    let e = &qm.grading.grading_element;
    let bee = qm.algebra.b_theta(e, e);
    let mut out = BigradedForm::zero(1, 0);
    for a in 0..qm.dim10 {
        let c = qm.algebra.b_theta(e, &qm.section.col(a)) / &bee;
        if !c.is_zero() {
            out.coeffs.insert((vec![a], vec![]), c);
        }
    }
    out
}

/// `d_P E*`, the `(1,1)`-form pairing the graded slices.
pub fn d_p_grading_coform(qm: &QuotientModule) -> Result<BigradedForm> {
    grading_coform(qm).d_p(qm)
}

/// The fiber volume form `τ`: the unit-volume element of `(g/m)_0` in the
/// metric frame, extended by zero. Bidegree `(d, 0)`.
///
/// Precondition (checked): `m` acts trivially on the line `Λ^d (g/m)_0^*`,
/// i.e. the induced m-action preserves the slice and is traceless on it.
pub fn fiber_volume_form(qm: &QuotientModule, md: &MetricData) -> Result<BigradedForm> {
    let d = qm.d0;
    for (z, action) in qm.m_action.iter().enumerate() {
        let mut trace = qzero();
        for a in 0..d {
            for r in 0..qm.dim {
                let entry = action.at(r, a);
                if r == a {
                    trace += entry;
                } else if r >= d && !entry.is_zero() {
                    return Err(PfError::Unsupported(format!(
                        "m-direction {} does not preserve the 0-slice; \
                         the fiber volume line is not a trivial m-representation",
                        z
                    )));
                }
            }
        }
        if !trace.is_zero() {
            return Err(PfError::Unsupported(format!(
                "m-direction {} acts with nonzero trace on the 0-slice; \
                 the fiber volume line is not a trivial m-representation",
                z
            )));
        }
    }
    // wedge of the dual covectors of the slice-0 frame vectors
    let mut tau = BigradedForm::constant(crate::rational::qone());
    for j in 0..d {
        let mut cov = BigradedForm::zero(1, 0);
        for a in 0..qm.dim10 {
            let c = md.frame_inv.at(j, a).clone();
            if !c.is_zero() {
                cov.coeffs.insert((vec![a], vec![]), c);
            }
        }
        tau = tau.wedge(&cov, qm);
    }
    Ok(tau)
}

/// `φ_k = *_K(τ ∧ (d_P E*)^{n-k})`, bidegree `(k, n-k)`, `0 <= k <= n`.
pub fn poisson_kernel(qm: &QuotientModule, md: &MetricData, k: usize) -> Result<BigradedForm> {
    let n = qm.n();
    if k > n {
        return Err(PfError::InvalidSpec(format!("k = {} exceeds n = {}", k, n)));
    }
    let tau = fiber_volume_form(qm, md)?;
    let dpe = d_p_grading_coform(qm)?;
    let inner = tau.wedge(&dpe.power(n - k, qm), qm);
    let phi = inner.hodge_star_k(qm, md);
    if phi.is_zero() {
        return Err(PfError::Degenerate(format!(
            "kernel φ_{} vanishes: τ ∧ (d_P E*)^{} is zero, the grading pairing \
             degenerates for this parabolic",
            k,
            n - k
        )));
    }
    Ok(phi)
}

/// The a0-functional by which a0 rescales the P-degree slice of a form: the
/// common weight of its `(0,1)` monomials (sum of the negated generating
/// roots), or `None` when the monomials carry different weights.
pub fn kernel_weight(qm: &QuotientModule, f: &BigradedForm) -> Option<Vec<Q>> {
    let rank = match qm.basis_info.iter().find_map(|b| b.root.as_ref()) {
        Some(r) => r.len(),
        None => return None,
    };
    let mut common: Option<Vec<Q>> = None;
    for (_, j) in f.coeffs.keys() {
        let mut w = vec![qzero(); rank];
        for &jj in j {
            let root = qm.basis_info[qm.dim10 + jj].root.as_ref()?;
            for (acc, r) in w.iter_mut().zip(root) {
                *acc -= r;
            }
        }
        match &common {
            None => common = Some(w),
            Some(c) if *c == w => {}
            Some(_) => return None,
        }
    }
    common
}

/// Exact residuals of the slice pairing formula
/// `d_P E*(F_X, G_Y) = i · B(E,E)^{-1} · B(X,Y)` over all graded slices
/// `i >= 1` and basis pairs `(X, Y) ∈ g_i × g_{-i}`.
pub fn pairing_residuals(qm: &QuotientModule) -> Result<Vec<String>> {
    let dpe = d_p_grading_coform(qm)?;
    let e = &qm.grading.grading_element;
    let bee = qm.algebra.killing_form(e, e)?;
    let mut out = Vec::new();
    for i in 1..=qm.grading.depth {
        for (xi, x) in qm.grading.component(i).iter().enumerate() {
            for (yi, y) in qm.grading.component(-i).iter().enumerate() {
                let lhs = dpe.eval(qm, &[qm.f_rep(x), qm.g_rep(y)]);
                let rhs = qi(i as i64) * qm.algebra.killing_form(x, y)? / &bee;
                let res = lhs - rhs;
                if !res.is_zero() {
                    out.push(format!(
                        "slice {}, pair ({}, {}): residual {}",
                        i,
                        xi,
                        yi,
                        q_to_string(&res)
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightJson {
    pub coords: Vec<String>,
}

/// Machine-checkable verification report for `φ_k`; every failing flag
/// carries its exact residuals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelReport {
    pub algebra: String,
    pub k: usize,
    pub bidegree: [usize; 2],
    pub bidegree_ok: bool,
    pub invariant: bool,
    pub invariance_residuals: Vec<(usize, FormJson)>,
    pub coclosed: bool,
    pub coclosed_residual: Option<FormJson>,
    pub pairing_ok: bool,
    pub pairing_residuals: Vec<String>,
    pub weight: Option<WeightJson>,
    pub kernel: FormJson,
}

impl KernelReport {
    pub fn all_ok(&self) -> bool {
        self.bidegree_ok && self.invariant && self.coclosed && self.pairing_ok
    }
}

/// Runs the bidegree, m-invariance, coclosedness and slice-pairing checks on
/// `φ_k` in exact arithmetic and reports the a0-weight metadata.
pub fn verify_kernel(qm: &QuotientModule, md: &MetricData, k: usize) -> Result<KernelReport> {
    let n = qm.n();
    let phi = poisson_kernel(qm, md, k)?;
    let bidegree_ok = (phi.p, phi.q) == (k, n - k);

    let cert = phi.m_invariance(qm);
    let invariance_residuals: Vec<(usize, FormJson)> =
        cert.residuals.iter().map(|(z, r)| (*z, FormJson::from_form(r))).collect();

    let (coclosed, coclosed_residual) = if cert.invariant {
        let delta = phi.codifferential_k(qm, md)?;
        if delta.is_zero() {
            (true, None)
        } else {
            (false, Some(FormJson::from_form(&delta)))
        }
    } else {
        (false, None)
    };

    let pairing = pairing_residuals(qm)?;
    let weight = kernel_weight(qm, &phi)
        .map(|w| WeightJson { coords: w.iter().map(q_to_string).collect() });

    Ok(KernelReport {
        algebra: qm.algebra.spec.name(),
        k,
        bidegree: [phi.p, phi.q],
        bidegree_ok,
        invariant: cert.invariant,
        invariance_residuals,
        coclosed,
        coclosed_residual,
        pairing_ok: pairing.is_empty(),
        pairing_residuals: pairing,
        weight,
        kernel: FormJson::from_form(&phi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::invariant_forms_basis;
    use crate::grading::{compute_grading, parabolic_from_subset};
    use crate::lie::{build_algebra, AlgebraSpec};
    use crate::linalg::QMat;
    use crate::quotient::{metric_data, quotient_module, QuotientModule};
    use crate::rational::{qone, qr};
    use crate::roots::restricted_roots;

    fn coeff_vec(qm: &QuotientModule, f: &crate::forms::BigradedForm) -> Vec<crate::rational::Q> {
        crate::forms::monomials(f.p, f.q, qm.dim10, qm.dim01)
            .iter()
            .map(|m| f.coeffs.get(m).cloned().unwrap_or_default())
            .collect()
    }

    fn qm_for(spec: AlgebraSpec, sigma: &[usize]) -> QuotientModule {
        let l = build_algebra(spec).unwrap();
        let r = restricted_roots(&l).unwrap();
        let p = parabolic_from_subset(&l, &r, sigma).unwrap();
        let g = compute_grading(&l, &r, &p).unwrap();
        quotient_module(&l, &g).unwrap()
    }

    #[test]
    fn grading_coform_normalization_and_invariance() {
        for spec in [AlgebraSpec::so(2), AlgebraSpec::so(3), AlgebraSpec::so(4), AlgebraSpec::sl(3)]
        {
            let qm = qm_for(spec, &[]);
            let e_star = grading_coform(&qm);
            assert_eq!((e_star.p, e_star.q), (1, 0));
            // E*(E) = 1
            let e_qm = qm.grading_element_qm();
            assert_eq!(e_star.eval(&qm, &[e_qm]), qone());
            // vanishes on every G_X (pure (0,1) vector)
            for i in 1..=qm.grading.depth {
                for x in qm.grading.component(-i) {
                    assert!(e_star.eval(&qm, &[qm.g_rep(x)]).is_zero());
                }
            }
            assert!(e_star.is_m_invariant(&qm));
        }
    }

    #[test]
    fn e_star_spans_invariant_one_zero_forms_for_so() {
        // oracle: nullspace computation cross-checked against E* coordinates
        for p in 3..=4 {
            let qm = qm_for(AlgebraSpec::so(p), &[]);
            let basis = invariant_forms_basis(&qm, 1, 0);
            assert_eq!(basis.len(), 1);
            let e_star = grading_coform(&qm);
            // proportionality: coefficient vectors are parallel
            let m = QMat::from_cols(vec![coeff_vec(&qm, &basis[0]), coeff_vec(&qm, &e_star)]);
            assert_eq!(m.rank(), 1);
        }
        // so(2,1) has trivial m, so both (1,0)-covectors are invariant: the
        // space is 2-dimensional and contains E*
        let qm = qm_for(AlgebraSpec::so(2), &[]);
        let basis = invariant_forms_basis(&qm, 1, 0);
        assert_eq!(basis.len(), 2);
        let m = QMat::from_cols(basis.iter().map(|f| coeff_vec(&qm, f)).collect());
        assert!(m.spans(&coeff_vec(&qm, &grading_coform(&qm))));
    }

    #[test]
    fn fiber_volume_for_so_is_e_star_rescaled() {
        // oracle: (g/m)_0 is 1-dimensional, spanned by E
        for p in 2..=4 {
            let qm = qm_for(AlgebraSpec::so(p), &[]);
            let md = metric_data(&qm).unwrap();
            assert_eq!(qm.d(), 1);
            let tau = fiber_volume_form(&qm, &md).unwrap();
            assert_eq!((tau.p, tau.q), (1, 0));
            // unit volume: evaluates to 1 on the slice-0 frame vector
            let mut fv = vec![crate::rational::qzero(); qm.dim];
            fv[..qm.dim10].clone_from_slice(&md.frame.col(0));
            assert_eq!(tau.eval(&qm, &[fv]), qone());
            // proportional to E*
            let e_star = grading_coform(&qm);
            let e_qm = qm.grading_element_qm();
            let c = tau.eval(&qm, &[e_qm]);
            assert_eq!(tau, e_star.scale(&c));
        }
    }

    #[test]
    fn d_k_tau_vanishes() {
        for spec in [AlgebraSpec::so(3), AlgebraSpec::sl(3)] {
            let qm = qm_for(spec, &[]);
            let md = metric_data(&qm).unwrap();
            let tau = fiber_volume_form(&qm, &md).unwrap();
            assert!(tau.d_k(&qm).unwrap().is_zero());
        }
    }

    #[test]
    fn d_k_of_d_p_e_star_vanishes() {
        for spec in [AlgebraSpec::so(3), AlgebraSpec::sl(3)] {
            let qm = qm_for(spec, &[]);
            let dpe = d_p_grading_coform(&qm).unwrap();
            assert!(dpe.d_k(&qm).unwrap().is_zero());
        }
    }

    #[test]
    fn slice_pairing_formula_exact() {
        for spec in [AlgebraSpec::so(2), AlgebraSpec::so(4), AlgebraSpec::sl(3)] {
            let qm = qm_for(spec, &[]);
            assert!(pairing_residuals(&qm).unwrap().is_empty());
        }
    }

    #[test]
    fn top_kernel_is_star_of_tau() {
        let qm = qm_for(AlgebraSpec::so(3), &[]);
        let md = metric_data(&qm).unwrap();
        let n = qm.n();
        let phi_n = poisson_kernel(&qm, &md, n).unwrap();
        let expected = fiber_volume_form(&qm, &md).unwrap().hodge_star_k(&qm, &md);
        assert_eq!(phi_n, expected);
        assert_eq!((phi_n.p, phi_n.q), (n, 0));
    }

    #[test]
    fn kernel_bidegrees_and_nonvanishing() {
        for p in 2..=4 {
            let qm = qm_for(AlgebraSpec::so(p), &[]);
            let md = metric_data(&qm).unwrap();
            let n = qm.n();
            for k in 0..=n {
                let phi = poisson_kernel(&qm, &md, k).unwrap();
                assert_eq!((phi.p, phi.q), (k, n - k));
                assert!(!phi.is_zero());
            }
        }
    }

    #[test]
    fn verify_kernel_all_flags_pass_for_so_families() {
        for p in 2..=4 {
            let qm = qm_for(AlgebraSpec::so(p), &[]);
            let md = metric_data(&qm).unwrap();
            for k in 0..=qm.n() {
                let report = verify_kernel(&qm, &md, k).unwrap();
                assert!(report.all_ok(), "so({},1), k = {}: {:?}", p, k, report);
                assert_eq!(report.bidegree, [k, qm.n() - k]);
            }
        }
    }

    #[test]
    fn kernel_uniqueness_for_so() {
        // the invariant space at (k, n-k) is 1-dimensional spanned by φ_k at
        // every bidegree except (ceil(n/2), floor(n/2)), where a second ring
        // element of the same bidegree appears: E* (n=1), d_P E* (n=2),
        // τ ∧ d_P E* (n=3); oracle: brute-force nullspace dimensions
        for p in 2..=4 {
            let qm = qm_for(AlgebraSpec::so(p), &[]);
            let md = metric_data(&qm).unwrap();
            let n = qm.n();
            let tau = fiber_volume_form(&qm, &md).unwrap();
            let dpe = d_p_grading_coform(&qm).unwrap();
            let second = match n {
                1 => grading_coform(&qm),
                2 => dpe.clone(),
                _ => tau.wedge(&dpe, &qm),
            };
            for k in 0..=n {
                let basis = invariant_forms_basis(&qm, k, n - k);
                let phi = poisson_kernel(&qm, &md, k).unwrap();
                let span = QMat::from_cols(basis.iter().map(|f| coeff_vec(&qm, f)).collect());
                assert!(span.spans(&coeff_vec(&qm, &phi)));
                if k == n.div_ceil(2) {
                    assert_eq!(basis.len(), 2, "so({},1) bidegree ({},{})", p, k, n - k);
                    assert_eq!((second.p, second.q), (k, n - k));
                    let pair =
                        QMat::from_cols(vec![coeff_vec(&qm, &phi), coeff_vec(&qm, &second)]);
                    assert_eq!(pair.rank(), 2);
                    for b in &basis {
                        assert!(pair.spans(&coeff_vec(&qm, b)));
                    }
                } else {
                    assert_eq!(basis.len(), 1, "so({},1) bidegree ({},{})", p, k, n - k);
                    let monos: Vec<_> = basis[0].coeffs.keys().cloned().collect();
                    let m0 = &monos[0];
                    let ratio = phi.coeffs.get(m0).cloned().unwrap_or_default()
                        / basis[0].coeffs.get(m0).unwrap();
                    assert!(!ratio.is_zero());
                    assert_eq!(phi, basis[0].scale(&ratio));
                }
            }
        }
    }

    #[test]
    fn kernel_weight_metadata_for_so() {
        // oracle: every (0,1) generator carries root -alpha, so the weight of
        // φ_k is (n-k)·alpha; for k = 0 this equals 2ρ
        let l = build_algebra(AlgebraSpec::so(3)).unwrap();
        let r = restricted_roots(&l).unwrap();
        let alpha = r.roots[r.positive[0]].clone();
        let qm = qm_for(AlgebraSpec::so(3), &[]);
        let md = metric_data(&qm).unwrap();
        let n = qm.n();
        for k in 0..=n {
            let phi = poisson_kernel(&qm, &md, k).unwrap();
            let w = kernel_weight(&qm, &phi).unwrap();
            let expected: Vec<_> =
                alpha.iter().map(|a| a * qr((n - k) as i64, 1)).collect();
            assert_eq!(w, expected);
        }
        let phi0 = poisson_kernel(&qm, &md, 0).unwrap();
        let w0 = kernel_weight(&qm, &phi0).unwrap();
        let two_rho: Vec<_> = r.rho.iter().map(|x| x * qr(2, 1)).collect();
        assert_eq!(w0, two_rho);
    }

    #[test]
    fn star_of_e_star_is_orthogonal_for_so21() {
        // oracle: 2-dimensional Hodge star on (g/m)^{1,0} from the explicit
        // Gram matrix of the declared-orthonormal frame
        let qm = qm_for(AlgebraSpec::so(2), &[]);
        let md = metric_data(&qm).unwrap();
        assert_eq!(qm.dim10, 2);
        let e_star = grading_coform(&qm);
        let starred = e_star.hodge_star_k(&qm, &md);
        assert_eq!((starred.p, starred.q), (1, 0));
        // coefficient vectors in frame coordinates must be orthogonal for
        // the declared metric (identity Gram in frame coordinates)
        let coeff = |f: &crate::forms::BigradedForm| -> Vec<crate::rational::Q> {
            (0..2).map(|a| f.coeffs.get(&(vec![a], vec![])).cloned().unwrap_or_default()).collect()
        };
        // covector coords transform by frame^T: value on frame vector f_a
        let frame_vals = |f: &crate::forms::BigradedForm| -> Vec<crate::rational::Q> {
            let c = coeff(f);
            (0..2)
                .map(|a| {
                    let col = md.frame.col(a);
                    c.iter().zip(&col).map(|(x, y)| x * y).fold(
                        crate::rational::qzero(),
                        |acc, t| acc + t,
                    )
                })
                .collect()
        };
        let u = frame_vals(&e_star);
        let v = frame_vals(&starred);
        let dot = u.iter().zip(&v).fold(crate::rational::qzero(), |acc, (x, y)| acc + x * y);
        assert!(dot.is_zero());
    }

    #[test]
    fn verify_kernel_for_sl3_reports_exactly() {
        let qm = qm_for(AlgebraSpec::sl(3), &[]);
        let md = metric_data(&qm).unwrap();
        let n = qm.n();
        for k in 0..=n {
            let report = verify_kernel(&qm, &md, k);
            match report {
                Ok(rep) => {
                    assert!(rep.bidegree_ok);
                    assert!(rep.invariant);
                    assert!(rep.pairing_ok);
                }
                Err(PfError::Degenerate(_)) => {
                    // a vanishing kernel must be diagnosed, never silently
                    // returned as the zero form
                }
                Err(e) => panic!("unexpected error: {:?}", e),
            }
        }
    }
}
