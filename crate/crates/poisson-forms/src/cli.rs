//! Command-line interface: `inspect`, `kernel`, `verify`, `transform`.
//!
//! Exit codes: 0 on success, 1 on verification failure or runtime error,
//! 2 on usage errors or malformed configuration.

use crate::config::{AlgebraConfig, FormJson};
use crate::error::{PfError, Result};
use crate::hyperbolic::{
    boost, equivariance_residual, eigenvalue_residual, hyperboloid_point,
    measure_change_residual, random_element, transform_phi0, BoundaryDensity, DensityKind,
    GroupElement,
};
use crate::kernel::{poisson_kernel, verify_kernel};
use crate::lie::{build_algebra, AlgebraSpec};
use crate::quadrature::{default_nodes, sphere_rule};
use crate::quotient::{build_quotient, metric_data};
use crate::rational::q_to_string;
use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "poisson-forms",
    version,
    about = "Exact Poisson transform kernels for differential forms on G/P"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    /// Path to a JSON algebra config ({"family":"so","p":3,"q":1,"sigma":[..]}).
    #[arg(long, conflicts_with = "family")]
    pub config: Option<PathBuf>,
    /// Algebra family: "so" (so(p,1)) or "sl" (sl(n,R)).
    #[arg(long)]
    pub family: Option<String>,
    /// Spatial signature p for the so family.
    #[arg(long)]
    pub p: Option<usize>,
    /// Time signature for the so family (must be 1).
    #[arg(long)]
    pub q: Option<usize>,
    /// Size n for the sl family.
    #[arg(long)]
    pub n: Option<usize>,
    /// Simple-root indices generating the parabolic (default: minimal, empty).
    #[arg(long, value_delimiter = ',')]
    pub sigma: Vec<usize>,
}

impl AlgebraArgs {
    pub fn resolve(&self) -> Result<(AlgebraSpec, Vec<usize>)> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| PfError::InvalidSpec(format!("cannot read config: {}", e)))?;
            let cfg: AlgebraConfig = serde_json::from_str(&text)
                .map_err(|e| PfError::InvalidSpec(format!("malformed config: {}", e)))?;
            return cfg.resolve();
        }
        let family = self.family.as_deref().ok_or_else(|| {
            PfError::InvalidSpec("either --config or --family is required".into())
        })?;
        match family {
            "so" => {
                let p = self
                    .p
                    .ok_or_else(|| PfError::InvalidSpec("the so family needs --p".into()))?;
                if self.q.unwrap_or(1) != 1 {
                    return Err(PfError::InvalidSpec(
                        "only Lorentzian signature --q 1 is supported".into(),
                    ));
                }
                Ok((AlgebraSpec::so(p), self.sigma.clone()))
            }
            "sl" => {
                let n = self
                    .n
                    .ok_or_else(|| PfError::InvalidSpec("the sl family needs --n".into()))?;
                Ok((AlgebraSpec::sl(n), self.sigma.clone()))
            }
            other => Err(PfError::InvalidSpec(format!("unknown family {:?}", other))),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print algebra, root and grading tables.
    Inspect {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Construct and print the serialized kernel φ_k.
    Kernel {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// K-degree of the kernel, 0 <= k <= n.
        #[arg(long)]
        k: usize,
    },
    /// Verify φ_k and print the report; exits 1 on any failing flag.
    Verify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        k: usize,
    },
    /// Numeric scalar transform on hyperbolic space: values and residuals.
    Transform {
        /// Boundary sphere dimension (1..=3).
        #[arg(long)]
        n: usize,
        /// Coefficient of the positive root alpha in lambda.
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        /// Density: "const", "coord-k", "random-smooth:seed" or a JSON array
        /// of node samples.
        #[arg(long, default_value = "const")]
        density: String,
        /// Angular node counts (one per angle; defaults per dimension).
        #[arg(long, value_delimiter = ',')]
        nodes: Option<Vec<usize>>,
        /// Finite-difference step for the Laplacian probe.
        #[arg(long, default_value_t = 1e-3)]
        fd_step: f64,
        /// Spatial coordinates of the probe point on hyperbolic space.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        probe: Option<Vec<f64>>,
    },
}

fn cmd_inspect(algebra: &AlgebraArgs) -> Result<()> {
    let (spec, sigma) = algebra.resolve()?;
    let l = build_algebra(spec)?;
    let r = crate::roots::restricted_roots(&l)?;
    let p = crate::grading::parabolic_from_subset(&l, &r, &sigma)?;
    let g = crate::grading::compute_grading(&l, &r, &p)?;
    let qm = crate::quotient::quotient_module(&l, &g)?;

    println!("algebra {}", spec.name());
    println!("  dim g = {}, dim k = {}, dim q = {}", l.dim, l.k_indices.len(), l.q_indices.len());
    println!("  rank(a0) = {}", r.rank());
    let fmt_vec = |v: &[crate::rational::Q]| -> String {
        let parts: Vec<String> = v.iter().map(q_to_string).collect();
        format!("({})", parts.join(", "))
    };
    println!("restricted roots (on a0 coordinates):");
    for &i in &r.positive {
        let tag = if r.simple.contains(&i) { " simple" } else { "" };
        println!("  +{} mult {}{}", fmt_vec(&r.roots[i]), r.root_spaces[i].len(), tag);
    }
    println!("  rho = {}", fmt_vec(&r.rho));
    println!("  dim m0 = {}", r.m0_basis.len());
    let sigma_str: Vec<String> = sigma.iter().map(|s| s.to_string()).collect();
    println!("parabolic sigma = [{}], depth = {}", sigma_str.join(","), g.depth);
    println!("grading dims:");
    for i in -g.depth..=g.depth {
        println!("  g_{} : {}", i, g.component(i).len());
    }
    println!("quotient g/m:");
    println!("  dim = {}, (1,0) = {}, (0,1) = {}", qm.dim, qm.dim10, qm.dim01);
    println!("  n = dim G/P = {}, d = {}, dim m = {}", qm.n(), qm.d(), qm.m_basis.len());
    Ok(())
}

fn cmd_kernel(algebra: &AlgebraArgs, k: usize) -> Result<()> {
    let (spec, sigma) = algebra.resolve()?;
    let qm = build_quotient(spec, &sigma)?;
    let md = metric_data(&qm)?;
    let phi = poisson_kernel(&qm, &md, k)?;
    let json = serde_json::json!({
        "algebra": spec.name(),
        "k": k,
        "kernel": FormJson::from_form(&phi),
    });
    println!("{}", serde_json::to_string_pretty(&json).expect("serializable"));
    Ok(())
}

fn cmd_verify(algebra: &AlgebraArgs, k: usize) -> Result<bool> {
    let (spec, sigma) = algebra.resolve()?;
    let qm = build_quotient(spec, &sigma)?;
    let md = metric_data(&qm)?;
    let report = verify_kernel(&qm, &md, k)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(report.all_ok())
}

fn parse_density(text: &str) -> Result<DensityKind> {
    if text.trim_start().starts_with('[') {
        let samples: Vec<f64> = serde_json::from_str(text)
            .map_err(|e| PfError::InvalidSpec(format!("bad sample array: {}", e)))?;
        return Ok(DensityKind::Samples(samples));
    }
    DensityKind::parse(text)
}

fn cmd_transform(
    n: usize,
    lambda: f64,
    density: &str,
    nodes: Option<Vec<usize>>,
    fd_step: f64,
    probe: Option<Vec<f64>>,
) -> Result<()> {
    let counts = nodes.unwrap_or_else(|| default_nodes(n));
    let rule = sphere_rule(n, &counts)?;
    let kind = parse_density(density)?;
    let sigma = BoundaryDensity { lambda_c: lambda, kind };

    let probe_spatial = probe.unwrap_or_else(|| vec![0.0; n + 1]);
    if probe_spatial.len() != n + 1 {
        return Err(PfError::InvalidSpec(format!(
            "--probe needs {} spatial coordinates",
            n + 1
        )));
    }
    let x = hyperboloid_point(&probe_spatial);
    let g = crate::hyperbolic::boost_to_point(n, &x)?;
    let value_at_probe = transform_phi0(&sigma, &rule, &g)?;
    let value_at_base = transform_phi0(&sigma, &rule, &GroupElement::identity(n))?;
    let value_along_boost = transform_phi0(&sigma, &rule, &boost(n, 1.0))?;

    // deterministic probe elements for the identity checks
    let closed_form = sigma.kind.function(n).is_some();
    let (equiv, measure, eigen) = if closed_form {
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        let h = random_element(n, &mut rng, 0.5);
        let g2 = random_element(n, &mut rng, 0.5);
        let equiv = equivariance_residual(&sigma, &rule, &h, &g2)?;
        let measure = measure_change_residual(&sigma.kind, &rule, &h)?;
        let eigen = eigenvalue_residual(&sigma, &rule, &[x.clone()], fd_step)?;
        (Some(equiv), Some(measure), Some(eigen))
    } else {
        (None, None, None)
    };

    let json = serde_json::json!({
        "n": n,
        "lambda": lambda,
        "density": density,
        "nodes": counts,
        "probe": probe_spatial,
        "value_at_base": value_at_base,
        "value_at_probe": value_at_probe,
        "value_at_unit_boost": value_along_boost,
        "equivariance_residual": equiv,
        "measure_change_residual": measure,
        "eigenvalue_residual": eigen,
        "fd_step": fd_step,
    });
    println!("{}", serde_json::to_string_pretty(&json).expect("serializable"));
    Ok(())
}

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome: Result<bool> = match cli.command {
        Command::Inspect { algebra } => cmd_inspect(&algebra).map(|_| true),
        Command::Kernel { algebra, k } => cmd_kernel(&algebra, k).map(|_| true),
        Command::Verify { algebra, k } => cmd_verify(&algebra, k),
        Command::Transform { n, lambda, density, nodes, fd_step, probe } => {
            cmd_transform(n, lambda, &density, nodes, fd_step, probe).map(|_| true)
        }
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e @ PfError::InvalidSpec(_)) => {
            eprintln!("error: {}", e);
            2
        }
        Err(e) => {
            eprintln!("error: {}", e);
            1
        }
    }
}
