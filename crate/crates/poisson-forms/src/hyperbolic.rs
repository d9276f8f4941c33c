//! Floating-point instantiation for `G = SO0(n+1,1)`: Iwasawa decomposition,
//! the classical Poisson kernel on hyperbolic space `H^{n+1}` and quadrature
//! evaluation of the degree-zero transform.
//!
//! Conventions. `J = diag(1,..,1,-1)` of size `N = n+2`; `G` preserves `J`
//! and the time orientation. `K = SO(n+1)` is the spatial block,
//! `a0 = R·Q` with `Q = E_{1,N} + E_{N,1}` and `alpha(Q) = 1`, so `exp(tQ)`
//! realizes `exp(t · a0-unit)` and `rho = (n/2) alpha`. The base point of
//! `H^{n+1} = {x : <x,x>_J = -1, x_N > 0}` is `e_N`; boundary points are unit
//! vectors `b` in the spatial `R^{n+1}`, reached as `k_b e_1` for any
//! rotation `k_b` taking `e_1` to `b`.
//!
//! Closed form for the Iwasawa projection: `N` fixes the null vector
//! `f_+ = (e_1 + e_N)/sqrt(2)`, `exp(tQ)` scales it by `e^t` and `K`
//! preserves the Euclidean time component, so
//! `e^{alpha(H(g))} = sqrt(2) (g f_+)_N = g_{N,1} + g_{N,N}`.

use crate::error::{PfError, Result};
use crate::quadrature::{pairwise_sum, SphereRule};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORTHO_TOL: f64 = 1e-12;

/// Dense real matrix type used throughout this module.
pub type Matrix = DMatrix<f64>;

pub fn j_matrix(n: usize) -> DMatrix<f64> {
    let size = n + 2;
    let mut j = DMatrix::identity(size, size);
    j[(size - 1, size - 1)] = -1.0;
    j
}

/// An element of `SO0(n+1,1)` acting on `R^{n+2}`.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub n: usize,
    pub matrix: DMatrix<f64>,
}

impl GroupElement {
    /// Validates `g^T J g = J` to 1e-12, `det g > 0` and time orientation.
    pub fn new(n: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let size = n + 2;
        if matrix.nrows() != size || matrix.ncols() != size {
            return Err(PfError::DimensionMismatch(format!(
                "expected a {0}x{0} matrix",
                size
            )));
        }
        let j = j_matrix(n);
        let res = matrix.transpose() * &j * &matrix - &j;
        let err = res.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if err > ORTHO_TOL {
            return Err(PfError::Numeric(format!(
                "matrix is not J-orthogonal: max residual {:.3e} > 1e-12",
                err
            )));
        }
        if matrix[(size - 1, size - 1)] <= 0.0 {
            return Err(PfError::Numeric("matrix reverses time orientation".into()));
        }
        if matrix.determinant() <= 0.0 {
            return Err(PfError::Numeric("matrix is orientation-reversing".into()));
        }
        Ok(GroupElement { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        GroupElement { n, matrix: DMatrix::identity(n + 2, n + 2) }
    }

    /// `g^{-1} = J g^T J`, exact for J-orthogonal matrices.
    pub fn inverse(&self) -> Self {
        let j = j_matrix(self.n);
        GroupElement { n: self.n, matrix: &j * self.matrix.transpose() * &j }
    }

    pub fn compose(&self, other: &GroupElement) -> Self {
        GroupElement { n: self.n, matrix: &self.matrix * &other.matrix }
    }

    /// Orbit of the base point `e_N`: a point of the hyperboloid.
    pub fn base_orbit(&self) -> Vec<f64> {
        let size = self.n + 2;
        (0..size).map(|r| self.matrix[(r, size - 1)]).collect()
    }
}

/// `exp(t Q)`: the boost along the pinned `a0` direction.
pub fn boost(n: usize, t: f64) -> GroupElement {
    let size = n + 2;
    let mut m = DMatrix::identity(size, size);
    m[(0, 0)] = t.cosh();
    m[(0, size - 1)] = t.sinh();
    m[(size - 1, 0)] = t.sinh();
    m[(size - 1, size - 1)] = t.cosh();
    GroupElement { n, matrix: m }
}

/// A rotation in `K` taking `e_1` to the unit vector `b` (one fixed lift; the
/// transform is independent of the choice).
pub fn rotation_to(n: usize, b: &[f64]) -> Result<GroupElement> {
    let dim = n + 1;
    if b.len() != dim {
        return Err(PfError::DimensionMismatch(format!(
            "boundary point must have {} coordinates",
            dim
        )));
    }
    let norm: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(PfError::Numeric("boundary point is not a unit vector".into()));
    }
    let c = b[0]; // cos of the rotation angle against e_1
    let mut rot = DMatrix::<f64>::identity(dim, dim);
    if 1.0 + c > 1e-12 {
        // R = I + (b e1^T - e1 b^T) + (b e1^T - e1 b^T)^2 / (1 + c)
        let mut k = DMatrix::<f64>::zeros(dim, dim);
        for r in 0..dim {
            k[(r, 0)] += b[r];
            k[(0, r)] -= b[r];
        }
        let k2 = &k * &k;
        rot += &k + k2 / (1.0 + c);
    } else {
        // b is antipodal to e_1: rotate by pi in the (e_1, e_2) plane
        rot[(0, 0)] = -1.0;
        rot[(1, 1)] = -1.0;
    }
    let size = n + 2;
    let mut m = DMatrix::identity(size, size);
    m.view_mut((0, 0), (dim, dim)).copy_from(&rot);
    GroupElement::new(n, m)
}

/// The symmetric boost moving the base point `e_N` to the hyperboloid point
/// `y` (with `<y,y>_J = -1`, `y_N > 0`).
pub fn boost_to_point(n: usize, y: &[f64]) -> Result<GroupElement> {
    let size = n + 2;
    if y.len() != size {
        return Err(PfError::DimensionMismatch(format!(
            "hyperboloid point must have {} coordinates",
            size
        )));
    }
    let yt = y[size - 1];
    let ys = &y[..size - 1];
    let jn: f64 = ys.iter().map(|x| x * x).sum::<f64>() - yt * yt;
    if (jn + 1.0).abs() > 1e-10 || yt <= 0.0 {
        return Err(PfError::Numeric("point is not on the upper hyperboloid".into()));
    }
    let mut m = DMatrix::<f64>::zeros(size, size);
    for r in 0..(size - 1) {
        for c in 0..(size - 1) {
            m[(r, c)] = if r == c { 1.0 } else { 0.0 };
            m[(r, c)] += ys[r] * ys[c] / (1.0 + yt);
        }
        m[(r, size - 1)] = ys[r];
        m[(size - 1, r)] = ys[r];
    }
    m[(size - 1, size - 1)] = yt;
    GroupElement::new(n, m)
}

/// Lifts spatial coordinates `u` to the hyperboloid point `(u, sqrt(1+|u|^2))`.
pub fn hyperboloid_point(u: &[f64]) -> Vec<f64> {
    let t = (1.0 + u.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let mut y = u.to_vec();
    y.push(t);
    y
}

/// Matrix exponential by scaling-and-squaring with a Taylor series.
fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = a.iter().fold(0.0f64, |m, x| m.max(x.abs())) * a.nrows() as f64;
    let k = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = a / 2f64.powi(k as i32);
    let mut term = DMatrix::identity(a.nrows(), a.ncols());
    let mut sum = term.clone();
    for i in 1..=24 {
        term = &term * &scaled / i as f64;
        sum += &term;
    }
    for _ in 0..k {
        sum = &sum * &sum;
    }
    sum
}

/// Deterministic random element: exponential of a random Lie algebra element
/// (spatial rotation part plus boost part), entries in [-scale, scale].
pub fn random_element(n: usize, rng: &mut ChaCha8Rng, scale: f64) -> GroupElement {
    let size = n + 2;
    let mut a = DMatrix::<f64>::zeros(size, size);
    for r in 0..(size - 1) {
        for c in 0..r {
            let v = rng.gen_range(-scale..scale);
            a[(r, c)] = v;
            a[(c, r)] = -v;
        }
        let v = rng.gen_range(-scale..scale);
        a[(r, size - 1)] = v;
        a[(size - 1, r)] = v;
    }
    GroupElement::new(n, expm(&a)).expect("exponential of so(n+1,1) element")
}

/// Iwasawa data of `g = k exp(t a0-unit) n`.
#[derive(Clone, Debug)]
pub struct IwasawaTriple {
    pub k_part: DMatrix<f64>,
    /// Coordinate of `H(g)` against the a0-unit: `t = alpha(H(g))`.
    pub t: f64,
    pub n_part: DMatrix<f64>,
}

/// `e^{alpha(H(g))}` in closed form from two entries of `g`.
pub fn iwasawa_exponent(g: &GroupElement) -> f64 {
    let size = g.n + 2;
    g.matrix[(size - 1, 0)] + g.matrix[(size - 1, size - 1)]
}

/// Full Iwasawa decomposition via Cholesky in the light-cone basis
/// `(f_+, e_2, .., e_{n+1}, f_-)`, where `AN` is upper triangular with
/// positive diagonal; uniqueness of Cholesky gives uniqueness of the triple.
pub fn iwasawa(g: &GroupElement) -> Result<IwasawaTriple> {
    let size = g.n + 2;
    let s = 1.0 / 2f64.sqrt();
    // orthogonal change of basis: columns f_+, e_2..e_{n+1}, f_-
    let mut c = DMatrix::<f64>::zeros(size, size);
    c[(0, 0)] = s;
    c[(size - 1, 0)] = s;
    for i in 1..(size - 1) {
        c[(i, i)] = 1.0;
    }
    c[(0, size - 1)] = s;
    c[(size - 1, size - 1)] = -s;

    let gram = g.matrix.transpose() * &g.matrix;
    let s_lc = c.transpose() * gram * &c;
    let chol = nalgebra::Cholesky::new(s_lc)
        .ok_or_else(|| PfError::Numeric("Gram matrix is not positive definite".into()))?;
    // g^T g = p^T p with p = C L^T C^T upper triangular in light-cone coords
    let p_lc = chol.l().transpose();
    let t = p_lc[(0, 0)].ln();

    // split p = a * n with a = diag(e^t, 1, .., 1, e^{-t}) in light-cone coords
    let mut a_inv_lc = DMatrix::<f64>::identity(size, size);
    a_inv_lc[(0, 0)] = (-t).exp();
    a_inv_lc[(size - 1, size - 1)] = t.exp();
    let n_lc = a_inv_lc * &p_lc;
    let n_part = &c * n_lc * c.transpose();

    let p = &c * p_lc * c.transpose();
    let p_inv = p.clone().try_inverse().ok_or_else(|| {
        PfError::Numeric("Iwasawa triangular factor is numerically singular".into())
    })?;
    let k_part = &g.matrix * p_inv;
    Ok(IwasawaTriple { k_part, t, n_part })
}

impl IwasawaTriple {
    /// `k exp(t a0-unit) n` reassembled.
    pub fn reassemble(&self, n: usize) -> DMatrix<f64> {
        &self.k_part * boost(n, self.t).matrix * &self.n_part
    }

    /// Boundary point `k(g) e_1` on S^n.
    pub fn boundary_point(&self, n: usize) -> Vec<f64> {
        (0..(n + 1)).map(|r| self.k_part[(r, 0)]).collect()
    }
}

/// `e^{-(lambda+rho)(H(g^{-1} k_b))}` with `lambda = lambda_c alpha`,
/// `rho = (n/2) alpha`. Computed from the closed form: `k_b(e_1 + e_N) =
/// b + e_N` up to the `M`-ambiguity, which drops out.
pub fn classical_kernel(g: &GroupElement, b: &[f64], lambda_c: f64) -> f64 {
    let size = g.n + 2;
    let ginv = g.inverse();
    // (g^{-1}(b + e_N))_N
    let mut e_at = 0.0;
    for c in 0..(size - 1) {
        if c < b.len() {
            e_at += ginv.matrix[(size - 1, c)] * b[c];
        }
    }
    e_at += ginv.matrix[(size - 1, size - 1)];
    e_at.powf(-(lambda_c + g.n as f64 / 2.0))
}

/// Boundary density: either closed-form (evaluable anywhere on S^n) or a
/// fixed sample vector aligned with a quadrature rule, together with the
/// weight coefficient `lambda_c` of `alpha`.
pub struct BoundaryDensity {
    pub lambda_c: f64,
    pub kind: DensityKind,
}

pub enum DensityKind {
    /// sigma = 1.
    Const,
    /// sigma(b) = b_k (0-based coordinate on R^{n+1}).
    Coord(usize),
    /// Deterministic random low-degree smooth function.
    RandomSmooth(u64),
    /// Raw node samples (must match the rule's node count).
    Samples(Vec<f64>),
}

impl DensityKind {
    /// Parses the CLI names `const`, `coord-k`, `random-smooth:seed`.
    pub fn parse(name: &str) -> Result<DensityKind> {
        if name == "const" {
            return Ok(DensityKind::Const);
        }
        if let Some(k) = name.strip_prefix("coord-") {
            let k: usize = k
                .parse()
                .map_err(|_| PfError::InvalidSpec(format!("bad coordinate index in {:?}", name)))?;
            return Ok(DensityKind::Coord(k));
        }
        if let Some(seed) = name.strip_prefix("random-smooth:") {
            let seed: u64 = seed
                .parse()
                .map_err(|_| PfError::InvalidSpec(format!("bad seed in {:?}", name)))?;
            return Ok(DensityKind::RandomSmooth(seed));
        }
        Err(PfError::InvalidSpec(format!(
            "unknown density {:?}; expected const, coord-k, random-smooth:seed or samples",
            name
        )))
    }

    /// Closed-form evaluation; `None` for raw samples.
    pub fn function(&self, n: usize) -> Option<Box<dyn Fn(&[f64]) -> f64>> {
        match self {
            DensityKind::Const => Some(Box::new(|_| 1.0)),
            DensityKind::Coord(k) => {
                let k = *k;
                Some(Box::new(move |b: &[f64]| b[k]))
            }
            DensityKind::RandomSmooth(seed) => {
                let dim = n + 1;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let constant: f64 = rng.gen_range(-1.0..1.0);
                let linear: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let quad: Vec<Vec<f64>> = (0..dim)
                    .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
                    .collect();
                Some(Box::new(move |b: &[f64]| {
                    let mut v = constant;
                    for (i, bi) in b.iter().enumerate() {
                        v += linear[i] * bi;
                        for (j, bj) in b.iter().enumerate() {
                            v += quad[i][j] * bi * bj;
                        }
                    }
                    v
                }))
            }
            DensityKind::Samples(_) => None,
        }
    }

    /// Sample vector aligned with `rule`.
    pub fn samples(&self, rule: &SphereRule) -> Result<Vec<f64>> {
        match self {
            DensityKind::Samples(v) => {
                if v.len() != rule.nodes.len() {
                    return Err(PfError::DimensionMismatch(format!(
                        "{} samples for a {}-node rule",
                        v.len(),
                        rule.nodes.len()
                    )));
                }
                if !v.iter().all(|x| x.is_finite()) {
                    return Err(PfError::Numeric("density samples must be finite".into()));
                }
                Ok(v.clone())
            }
            other => {
                let f = other.function(rule.n).expect("closed-form density");
                Ok(rule.nodes.iter().map(|b| f(b)).collect())
            }
        }
    }
}

/// Quadrature approximation of
/// `Phi_0(sigma)(gK) = ∫_{S^n} e^{-(lambda+rho)(H(g^{-1}k_b))} sigma(b) db`
/// with the normalized measure.
pub fn transform_phi0(
    density: &BoundaryDensity,
    rule: &SphereRule,
    g: &GroupElement,
) -> Result<f64> {
    let samples = density.kind.samples(rule)?;
    let terms: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .zip(&samples)
        .map(|((b, w), s)| w * s * classical_kernel(g, b, density.lambda_c))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `|Phi_0(sigma)(hgK) - Phi_0(sigma_h)(gK)|` where `sigma_h` is the boundary
/// action `sigma_h(b) = e^{(lambda-rho)(H(h k_b))} sigma(k(h k_b) e_1)`.
/// Requires a closed-form density.
pub fn equivariance_residual(
    density: &BoundaryDensity,
    rule: &SphereRule,
    h: &GroupElement,
    g: &GroupElement,
) -> Result<f64> {
    let n = g.n;
    let f = density.kind.function(n).ok_or_else(|| {
        PfError::InvalidSpec("equivariance probe needs a closed-form density".into())
    })?;
    let lhs = transform_phi0(density, rule, &h.compose(g))?;
    let lam = density.lambda_c;
    let mut moved = Vec::with_capacity(rule.nodes.len());
    for b in &rule.nodes {
        let kb = rotation_to(n, b)?;
        let hk = h.compose(&kb);
        let tri = iwasawa(&hk)?;
        let bp = tri.boundary_point(n);
        moved.push(((lam - n as f64 / 2.0) * tri.t).exp() * f(&bp));
    }
    let moved_density =
        BoundaryDensity { lambda_c: lam, kind: DensityKind::Samples(moved) };
    let rhs = transform_phi0(&moved_density, rule, g)?;
    Ok((lhs - rhs).abs())
}

/// Residual of the measure-change identity
/// `∫ f(k(h k_b) e_1) e^{-2 rho(H(h k_b))} db = ∫ f(b) db`.
pub fn measure_change_residual(
    density: &DensityKind,
    rule: &SphereRule,
    h: &GroupElement,
) -> Result<f64> {
    let n = h.n;
    let f = density.function(n).ok_or_else(|| {
        PfError::InvalidSpec("measure-change probe needs a closed-form density".into())
    })?;
    let mut pushed = Vec::with_capacity(rule.nodes.len());
    let mut plain = Vec::with_capacity(rule.nodes.len());
    for (b, w) in rule.nodes.iter().zip(&rule.weights) {
        let kb = rotation_to(n, b)?;
        let tri = iwasawa(&h.compose(&kb))?;
        let bp = tri.boundary_point(n);
        pushed.push(w * f(&bp) * (-(n as f64) * tri.t).exp());
        plain.push(w * f(b));
    }
    Ok((pairwise_sum(&pushed) - pairwise_sum(&plain)).abs())
}

/// Finite-difference Laplace-Beltrami operator on the hyperboloid (curvature
/// -1): second derivatives along geodesics `cosh(s) x + sinh(s) v_i` through
/// a J-orthonormal tangent frame `v_i = g_x e_i`.
pub fn laplacian_fd(
    f: &dyn Fn(&[f64]) -> Result<f64>,
    x: &[f64],
    step: f64,
) -> Result<f64> {
    let size = x.len();
    let n = size - 2;
    let gx = boost_to_point(n, x)?;
    let fx = f(x)?;
    let mut acc = 0.0;
    for i in 0..(size - 1) {
        let v: Vec<f64> = (0..size).map(|r| gx.matrix[(r, i)]).collect();
        let plus: Vec<f64> = (0..size)
            .map(|r| step.cosh() * x[r] + step.sinh() * v[r])
            .collect();
        let minus: Vec<f64> = (0..size)
            .map(|r| step.cosh() * x[r] - step.sinh() * v[r])
            .collect();
        acc += (f(&plus)? - 2.0 * fx + f(&minus)?) / (step * step);
    }
    Ok(acc)
}

/// Max over probe points of `|Δ Phi_0(sigma) - (lambda_c^2 - (n/2)^2)
/// Phi_0(sigma)|`, with `Δ` by central differences of size `step`.
pub fn eigenvalue_residual(
    density: &BoundaryDensity,
    rule: &SphereRule,
    probes: &[Vec<f64>],
    step: f64,
) -> Result<f64> {
    if step < 1e-6 {
        return Err(PfError::Numeric(format!(
            "finite-difference step {:.1e} is below 1e-6; cancellation would dominate — \
             use a step in [1e-4, 1e-2]",
            step
        )));
    }
    let n = rule.n;
    let eig = density.lambda_c * density.lambda_c - (n as f64 / 2.0).powi(2);
    let phi = |x: &[f64]| -> Result<f64> {
        let g = boost_to_point(n, x)?;
        transform_phi0(density, rule, &g)
    };
    let mut worst = 0.0f64;
    for x in probes {
        let lap = laplacian_fd(&phi, x, step)?;
        let val = phi(x)?;
        worst = worst.max((lap - eig * val).abs());
    }
    Ok(worst)
}
