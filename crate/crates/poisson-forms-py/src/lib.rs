//! Python bindings: exact kernel construction/verification plus the numeric
//! scalar transform on hyperbolic space. Exact data crosses the boundary as
//! JSON strings so rational coefficients survive verbatim.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use poisson_forms::config::FormJson;
use poisson_forms::error::PfError;
use poisson_forms::hyperbolic::{self, BoundaryDensity, DensityKind, GroupElement};
use poisson_forms::kernel::{poisson_kernel, verify_kernel};
use poisson_forms::lie::{build_algebra, AlgebraSpec};
use poisson_forms::quadrature::{default_nodes, sphere_rule};
use poisson_forms::quotient::{build_quotient, metric_data};
use poisson_forms::rational::q_to_string;

fn err(e: PfError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spec_from(family: &str, size: usize) -> PyResult<AlgebraSpec> {
    match family {
        "so" => Ok(AlgebraSpec::so(size)),
        "sl" => Ok(AlgebraSpec::sl(size)),
        other => Err(PyValueError::new_err(format!(
            "unknown family {:?}; expected \"so\" or \"sl\"",
            other
        ))),
    }
}

/// JSON summary of the algebra, its restricted roots, grading and quotient.
#[pyfunction]
#[pyo3(signature = (family, size, sigma = vec![]))]
fn algebra_summary(family: &str, size: usize, sigma: Vec<usize>) -> PyResult<String> {
    let spec = spec_from(family, size)?;
    let l = build_algebra(spec).map_err(err)?;
    let r = poisson_forms::roots::restricted_roots(&l).map_err(err)?;
    let qm = build_quotient(spec, &sigma).map_err(err)?;
    let fmt_vec = |v: &[poisson_forms::rational::Q]| -> Vec<String> {
        v.iter().map(q_to_string).collect()
    };
    let positive: Vec<serde_json::Value> = r
        .positive
        .iter()
        .map(|&i| {
            serde_json::json!({
                "root": fmt_vec(&r.roots[i]),
                "multiplicity": r.root_spaces[i].len(),
                "simple": r.simple.contains(&i),
            })
        })
        .collect();
    let g = &qm.grading;
    let grading_dims: Vec<(i32, usize)> =
        (-g.depth..=g.depth).map(|i| (i, g.component(i).len())).collect();
    let json = serde_json::json!({
        "algebra": spec.name(),
        "dim": l.dim,
        "dim_k": l.k_indices.len(),
        "dim_q": l.q_indices.len(),
        "rank": r.rank(),
        "positive_roots": positive,
        "rho": fmt_vec(&r.rho),
        "dim_m0": r.m0_basis.len(),
        "sigma": sigma,
        "depth": g.depth,
        "grading_dims": grading_dims,
        "quotient": {
            "dim": qm.dim,
            "dim10": qm.dim10,
            "dim01": qm.dim01,
            "n": qm.n(),
            "d": qm.d(),
            "dim_m": qm.m_basis.len(),
        },
    });
    Ok(serde_json::to_string_pretty(&json).expect("serializable"))
}

/// Serialized Poisson kernel `phi_k` with exact rational coefficients.
#[pyfunction]
#[pyo3(signature = (family, size, k, sigma = vec![]))]
fn kernel_json(family: &str, size: usize, k: usize, sigma: Vec<usize>) -> PyResult<String> {
    let spec = spec_from(family, size)?;
    let qm = build_quotient(spec, &sigma).map_err(err)?;
    let md = metric_data(&qm).map_err(err)?;
    let phi = poisson_kernel(&qm, &md, k).map_err(err)?;
    let json = serde_json::json!({
        "algebra": spec.name(),
        "k": k,
        "kernel": FormJson::from_form(&phi),
    });
    Ok(serde_json::to_string_pretty(&json).expect("serializable"))
}

/// Full verification report for `phi_k`; returns `(all_ok, report_json)`.
#[pyfunction]
#[pyo3(signature = (family, size, k, sigma = vec![]))]
fn verify_kernel_json(
    family: &str,
    size: usize,
    k: usize,
    sigma: Vec<usize>,
) -> PyResult<(bool, String)> {
    let spec = spec_from(family, size)?;
    let qm = build_quotient(spec, &sigma).map_err(err)?;
    let md = metric_data(&qm).map_err(err)?;
    let report = verify_kernel(&qm, &md, k).map_err(err)?;
    Ok((report.all_ok(), serde_json::to_string_pretty(&report).expect("serializable")))
}

fn group_element(matrix: Vec<Vec<f64>>) -> PyResult<GroupElement> {
    let size = matrix.len();
    if size < 3 || matrix.iter().any(|row| row.len() != size) {
        return Err(PyValueError::new_err(format!(
            "expected a square (n+2)x(n+2) matrix with n >= 1, got {} rows",
            size
        )));
    }
    let n = size - 2;
    let m = nalgebra_matrix(&matrix);
    GroupElement::new(n, m).map_err(err)
}

fn nalgebra_matrix(rows: &[Vec<f64>]) -> poisson_forms::hyperbolic::Matrix {
    poisson_forms::hyperbolic::Matrix::from_fn(rows.len(), rows.len(), |r, c| rows[r][c])
}

fn matrix_rows(m: &poisson_forms::hyperbolic::Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

/// Scalar Poisson transform `Phi_0(sigma)` at the point `g K`.
#[pyfunction]
#[pyo3(signature = (n, lambda_c, density = "const", g = None, nodes = None))]
fn transform_phi0(
    n: usize,
    lambda_c: f64,
    density: &str,
    g: Option<Vec<Vec<f64>>>,
    nodes: Option<Vec<usize>>,
) -> PyResult<f64> {
    let counts = nodes.unwrap_or_else(|| default_nodes(n));
    let rule = sphere_rule(n, &counts).map_err(err)?;
    let kind = DensityKind::parse(density).map_err(err)?;
    let sigma = BoundaryDensity { lambda_c, kind };
    let g = match g {
        Some(m) => group_element(m)?,
        None => GroupElement::identity(n),
    };
    hyperbolic::transform_phi0(&sigma, &rule, &g).map_err(err)
}

/// Iwasawa decomposition `g = k exp(t a) n`; returns `(k, t, n)` with the
/// factors as nested row lists.
#[pyfunction]
fn iwasawa(matrix: Vec<Vec<f64>>) -> PyResult<(Vec<Vec<f64>>, f64, Vec<Vec<f64>>)> {
    let g = group_element(matrix)?;
    let tri = hyperbolic::iwasawa(&g).map_err(err)?;
    Ok((matrix_rows(&tri.k_part), tri.t, matrix_rows(&tri.n_part)))
}

/// Classical scalar Poisson kernel `e^{-(lambda+rho)(H(g^{-1} k_b))}`.
#[pyfunction]
fn classical_kernel(matrix: Vec<Vec<f64>>, b: Vec<f64>, lambda_c: f64) -> PyResult<f64> {
    let g = group_element(matrix)?;
    Ok(hyperbolic::classical_kernel(&g, &b, lambda_c))
}

/// A boost by `t` along the first spatial axis, as a row-list matrix.
#[pyfunction]
fn boost(n: usize, t: f64) -> PyResult<Vec<Vec<f64>>> {
    Ok(matrix_rows(&hyperbolic::boost(n, t).matrix))
}

#[pymodule]
fn poisson_forms_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(algebra_summary, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_json, m)?)?;
    m.add_function(wrap_pyfunction!(verify_kernel_json, m)?)?;
    m.add_function(wrap_pyfunction!(transform_phi0, m)?)?;
    m.add_function(wrap_pyfunction!(iwasawa, m)?)?;
    m.add_function(wrap_pyfunction!(classical_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(boost, m)?)?;
    Ok(())
}
