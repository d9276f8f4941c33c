//! Deterministic quadrature on the boundary spheres S^1, S^2, S^3:
//! Gauss-Legendre product rules in angular coordinates, weights normalized so
//! the constant function integrates to exactly 1. Summation is a fixed
//! pairwise reduction for bit-reproducible results.

use crate::error::{PfError, Result};

/// Nodes and normalized weights of a rule on S^n, embedded in R^{n+1}.
#[derive(Clone, Debug)]
pub struct SphereRule {
    /// Boundary sphere dimension `n`.
    pub n: usize,
    /// Unit vectors in R^{n+1}.
    pub nodes: Vec<Vec<f64>>,
    /// Positive weights summing to 1.
    pub weights: Vec<f64>,
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial from the Chebyshev initial guess.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let mut x =
            (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            // P_m(x) and P_m'(x) via the three-term recurrence
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=m {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // ascending node order for determinism
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
    let nodes_sorted: Vec<f64> = idx.iter().map(|&i| nodes[i]).collect();
    let weights_sorted: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
    (nodes_sorted, weights_sorted)
}

/// Gauss-Legendre rule mapped to the azimuthal interval [0, 2π], weights
/// normalized against the full angle.
fn periodic_rule(m: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(m);
    let pi = std::f64::consts::PI;
    (x.iter().map(|t| pi * (t + 1.0)).collect(), w.iter().map(|wi| wi / 2.0).collect())
}

/// Maps a Gauss-Legendre rule on [-1,1] to a polar angle in (0, π); the
/// sin-factor of the volume element is absorbed into the weight.
fn polar_rule(m: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(m);
    // substitute u = cos(theta): ∫ f(theta) sin(theta) dtheta = ∫ f(acos u) du
    let thetas: Vec<f64> = x.iter().map(|u| u.acos()).collect();
    (thetas, w)
}

/// Builds the product rule on S^n for `n` in 1..=3.
///
/// Node counts: one count per angle. Defaults per dimension are chosen by
/// [`default_nodes`].
pub fn sphere_rule(n: usize, counts: &[usize]) -> Result<SphereRule> {
    if counts.len() != n || counts.iter().any(|&c| c < 2) {
        return Err(PfError::InvalidSpec(format!(
            "S^{} needs {} angular node counts, each >= 2",
            n, n
        )));
    }
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    match n {
        1 => {
            let (ths, ws) = periodic_rule(counts[0]);
            for (t, w) in ths.iter().zip(&ws) {
                nodes.push(vec![t.cos(), t.sin()]);
                weights.push(*w);
            }
        }
        2 => {
            // x = (cos θ, sin θ cos φ, sin θ sin φ)
            let (ths, wt) = polar_rule(counts[0]);
            let (phs, wp) = periodic_rule(counts[1]);
            for (t, w1) in ths.iter().zip(&wt) {
                for (p, w2) in phs.iter().zip(&wp) {
                    nodes.push(vec![t.cos(), t.sin() * p.cos(), t.sin() * p.sin()]);
                    weights.push(w1 * w2);
                }
            }
        }
        3 => {
            // x = (cos θ1, sin θ1 cos θ2, sin θ1 sin θ2 cos φ, sin θ1 sin θ2 sin φ)
            // volume element sin²θ1 sin θ2 dθ1 dθ2 dφ; the sin²θ1 factor is
            // handled by Gauss-Legendre directly in θ1
            let (t1, w1) = gauss_legendre(counts[0]);
            let half_pi = std::f64::consts::PI / 2.0;
            let t1: Vec<f64> = t1.iter().map(|x| half_pi * (x + 1.0)).collect();
            let w1: Vec<f64> = w1.iter().map(|w| w * half_pi).collect();
            let (t2, w2) = polar_rule(counts[1]);
            let (phs, w3) = periodic_rule(counts[2]);
            for (a, wa) in t1.iter().zip(&w1) {
                let s1 = a.sin();
                for (b, wb) in t2.iter().zip(&w2) {
                    for (c, wc) in phs.iter().zip(&w3) {
                        nodes.push(vec![
                            a.cos(),
                            s1 * b.cos(),
                            s1 * b.sin() * c.cos(),
                            s1 * b.sin() * c.sin(),
                        ]);
                        weights.push(wa * s1 * s1 * wb * wc);
                    }
                }
            }
        }
        _ => {
            return Err(PfError::Unsupported(format!(
                "numeric boundary quadrature is implemented for S^1..S^3, got S^{}",
                n
            )))
        }
    }
    // normalize so the constant 1 integrates to exactly 1
    let total = pairwise_sum(&weights);
    for w in &mut weights {
        *w /= total;
    }
    Ok(SphereRule { n, nodes, weights })
}

/// Default angular node counts per boundary dimension.
pub fn default_nodes(n: usize) -> Vec<usize> {
    match n {
        1 => vec![256],
        2 => vec![64, 128],
        _ => vec![32, 32, 64],
    }
}

/// Fixed-order pairwise (tree) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

impl SphereRule {
    /// Quadrature of `f` over the node set with the normalized measure.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let terms: Vec<f64> =
            self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}
