use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};
use weylswap_core::cv::{
    coherent_matrix_element, coherent_overlap, cv_swap_quadrature, swap_block_error,
    weyl_distribution, weyl_entropy, weyl_function, FockMode, QuadratureGrid,
};
use weylswap_core::entanglement::{
    renyi2_displacement, renyi2_oracle, swap_expectation, DOUBLED_DIM_LIMIT,
};
use weylswap_core::magic::{
    cross_fidelity, displacement_distribution, purity_estimator, stabilizer_renyi, PuritySampling,
};
use weylswap_core::state::random_matrix;
use weylswap_core::swap::{
    exact_swap, negativity, partial_transpose, partial_transpose_direct, swap_by_displacements,
    transpose_by_displacements,
};
use weylswap_core::{inner, random_state, DensityMatrix, DimSpec, Partition};

use crate::args::{Cli, Command, CvCommand, GridArgs, MagicArgs, PartitionArgs, VerifyArgs};
use crate::error::CliError;
use crate::input::{self, CvSpec, Loaded};
use crate::record::{complex, LogBase, ResultRecord};

/// Normalization check outside this band triggers a warning.
const NORMALIZATION_BAND: f64 = 1e-3;

/// What a command prints on stdout, and whether its checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub stdout: String,
    pub passed: bool,
}

impl Report {
    fn record(r: &ResultRecord) -> Self {
        Self {
            stdout: r.to_json(),
            passed: true,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let base = if cli.log2 {
        LogBase::Bits
    } else {
        LogBase::Nats
    };
    match &cli.command {
        Command::Magic(a) => magic(a, base).map(|r| Report::record(&r)),
        Command::Renyi2(a) => renyi2(a, base).map(|r| Report::record(&r)),
        Command::Negativity(a) => negativity_cmd(a, base).map(|r| Report::record(&r)),
        Command::Cv(c) => cv(c, base),
        Command::Verify(a) => verify(a),
    }
}

fn path_str(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

fn common(r: &mut ResultRecord, dims: &DimSpec, base: LogBase) {
    r.parameter("dims", dims.dims().to_vec())
        .parameter("units", base.unit());
}

fn magic(a: &MagicArgs, base: LogBase) -> Result<ResultRecord, CliError> {
    let psi = input::load_pure(&a.state)?;
    let mut r = ResultRecord::new("magic");
    common(&mut r, psi.dims(), base);
    r.parameter("state", path_str(&a.state))
        .parameter("alpha", a.alpha);
    r.value("m_alpha", base.convert(stabilizer_renyi(&psi, a.alpha)?));
    r.diagnostic("norm_sqr", psi.norm_sqr());
    if let Some(samples) = a.samples {
        if a.alpha != 2.0 {
            return Err(CliError::Precondition(
                "--samples estimates the alpha = 2 purity only".into(),
            ));
        }
        let est = purity_estimator(
            &psi,
            PuritySampling::Uniform {
                samples,
                seed: a.seed,
            },
        )?;
        let d = psi.dims().total_dim() as f64;
        r.parameter("samples", samples).parameter("seed", a.seed);
        r.value("purity_estimate", est.estimate)
            .value("purity_stderr", est.stderr)
            .value("purity_exact", displacement_distribution(&psi)?.collision())
            .value("m2_estimate", base.convert(-(d * est.estimate).ln()));
    }
    Ok(r)
}

fn renyi2(a: &PartitionArgs, base: LogBase) -> Result<ResultRecord, CliError> {
    let psi = input::load_pure(&a.state)?;
    let part = input::partition(psi.dims(), &a.partition)?;
    let disp = renyi2_displacement(&psi, &part)?;
    let oracle = renyi2_oracle(&psi, &part)?;
    let mut r = ResultRecord::new("renyi2");
    common(&mut r, psi.dims(), base);
    r.parameter("state", path_str(&a.state))
        .parameter("partition", part.positions().to_vec());
    r.value("displacement", base.convert(disp.entropy))
        .value("oracle", base.convert(oracle.entropy))
        .value(
            "difference",
            base.convert((disp.entropy - oracle.entropy).abs()),
        )
        .value("purity", disp.purity);
    r.diagnostic("clamped", disp.clamped || oracle.clamped);
    if psi.dims().total_dim() <= DOUBLED_DIM_LIMIT {
        r.diagnostic("two_copy_purity", swap_expectation(&psi, &part)?);
    }
    Ok(r)
}

fn negativity_cmd(a: &PartitionArgs, base: LogBase) -> Result<ResultRecord, CliError> {
    let rho = match input::load(&a.state)? {
        Loaded::Pure(psi) => psi.to_density(),
        Loaded::Mixed(rho) => rho,
    };
    let part = input::partition(rho.dims(), &a.partition)?;
    let neg = negativity(&rho, &part)?;
    let oracle_dev = (partial_transpose(&rho, &part)?.matrix()
        - partial_transpose_direct(&rho, &part)?.matrix())
    .camax();
    let trace = rho.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > 1e-8 {
        log::warn!("density matrix trace is {trace}, not 1");
    }
    let mut r = ResultRecord::new("negativity");
    common(&mut r, rho.dims(), base);
    r.parameter("state", path_str(&a.state))
        .parameter("partition", part.positions().to_vec());
    r.value("negativity", neg.negativity)
        .value("log_negativity", base.convert(neg.log_negativity))
        .value("trace_norm", neg.trace_norm)
        .value("spectrum", neg.spectrum.clone());
    r.diagnostic("oracle_max_deviation", oracle_dev)
        .diagnostic("trace", complex(trace))
        .diagnostic("hermitian_deviation", rho.hermitian_deviation());
    Ok(r)
}

fn grid_of(g: &GridArgs) -> Result<QuadratureGrid, CliError> {
    Ok(QuadratureGrid::new(g.radius, g.spacing)?)
}

fn cv(c: &CvCommand, base: LogBase) -> Result<Report, CliError> {
    match c {
        CvCommand::Weyl {
            state,
            cutoff,
            grid,
            at,
        } => {
            let spec: CvSpec = state.parse()?;
            let cv = input::cv_state(&spec, *cutoff)?;
            let modes = cv.state.dims().len();
            if at.is_empty() {
                if modes != 1 {
                    return Err(CliError::Precondition(format!(
                        "grid output needs a single mode, state has {modes}; pass --at per mode"
                    )));
                }
                let grid = grid_of(grid)?;
                let mut csv = String::from("re(z),im(z),re(W),im(W),p\n");
                for &z in grid.nodes() {
                    let w = weyl_function(&cv.state, &[z])?;
                    let p = weyl_distribution(&cv.state, &[z])?;
                    writeln!(csv, "{},{},{},{},{}", z.re, z.im, w.re, w.im, p)
                        .expect("string write");
                }
                log::info!("{} grid nodes", grid.nodes().len());
                return Ok(Report {
                    stdout: csv,
                    passed: true,
                });
            }
            let zs = at
                .iter()
                .map(|s| input::parse_complex(s))
                .collect::<Result<Vec<_>, _>>()?;
            let w = weyl_function(&cv.state, &zs)?;
            let mut r = ResultRecord::new("cv weyl");
            common(&mut r, cv.state.dims(), base);
            r.parameter("state", state.as_str())
                .parameter("at", zs.iter().map(|&z| complex(z)).collect::<Vec<_>>());
            r.value("weyl", complex(w))
                .value("p", weyl_distribution(&cv.state, &zs)?);
            r.diagnostic("truncation_deficit", cv.deficit);
            Ok(Report::record(&r))
        }
        CvCommand::Entropy {
            state,
            cutoff,
            grid,
        } => {
            let spec: CvSpec = state.parse()?;
            let cv = input::cv_state(&spec, *cutoff)?;
            let g = grid_of(grid)?;
            let s = weyl_entropy(&cv.state, &g)?;
            let ok = (s.normalization - 1.0).abs() <= NORMALIZATION_BAND;
            if !ok {
                log::warn!(
                    "normalization check {} is far from 1; enlarge --radius or reduce --spacing",
                    s.normalization
                );
            }
            let mut r = ResultRecord::new("cv entropy");
            common(&mut r, cv.state.dims(), base);
            r.parameter("state", state.as_str())
                .parameter("radius", grid.radius)
                .parameter("spacing", grid.spacing);
            r.value("entropy", base.convert(s.entropy))
                .value("normalization_check", s.normalization);
            r.diagnostic("normalization_ok", ok)
                .diagnostic("truncation_deficit", cv.deficit)
                .diagnostic("nodes_per_mode", g.nodes().len());
            Ok(Report::record(&r))
        }
        CvCommand::Swapcheck {
            cutoff,
            radius,
            spacing,
            block,
        } => {
            let mode = FockMode::new(*cutoff)?;
            let grid = QuadratureGrid::new(*radius, *spacing)?;
            let block = block.unwrap_or(cutoff / 2);
            let coarse = cv_swap_quadrature(&mode, &grid)?;
            let fine = cv_swap_quadrature(&mode, &grid.refined())?;
            let (e0, e1) = (
                swap_block_error(&coarse, &mode, block),
                swap_block_error(&fine, &mode, block),
            );
            let mut r = ResultRecord::new("cv swapcheck");
            r.parameter("cutoff", *cutoff)
                .parameter("radius", *radius)
                .parameter("spacing", *spacing)
                .parameter("block", block);
            r.value("block_error", e0)
                .value("block_error_half_spacing", e1)
                .value("relative_change", (e1 - e0).abs() / e0)
                .value("coherent_max_deviation", coherent_deviation(&coarse, &mode));
            Ok(Report::record(&r))
        }
    }
}

/// Amplitudes with modulus at most 1 used to probe coherent matrix elements.
pub const COHERENT_PROBES: [(f64, f64); 5] =
    [(0.0, 0.0), (0.8, 0.0), (0.0, 0.6), (-0.5, 0.5), (0.7, -0.7)];

/// Largest `|<u1,u2|S|w1,w2> - <u1|w2><u2|w1>|` over all probe quadruples.
pub fn coherent_deviation(swap: &DMatrix<Complex64>, mode: &FockMode) -> f64 {
    let pts: Vec<Complex64> = COHERENT_PROBES
        .iter()
        .map(|&(x, y)| Complex64::new(x, y))
        .collect();
    let mut worst: f64 = 0.0;
    for &u1 in &pts {
        for &u2 in &pts {
            for &w1 in &pts {
                for &w2 in &pts {
                    let got = coherent_matrix_element(swap, mode, (u1, u2), (w1, w2));
                    let want = coherent_overlap(u1, w2) * coherent_overlap(u2, w1);
                    worst = worst.max((got - want).norm());
                }
            }
        }
    }
    worst
}

pub const IDENTITY_TOL: f64 = 1e-10;
pub const NORMALIZATION_TOL: f64 = 1e-9;

fn check(name: &str, deviation: f64, tolerance: f64) -> (String, Value, bool) {
    let passed = deviation < tolerance;
    let v = json!({ "max_deviation": deviation, "tolerance": tolerance, "passed": passed });
    (name.to_string(), v, passed)
}

fn verify(a: &VerifyArgs) -> Result<Report, CliError> {
    let dims = DimSpec::new(input::parse_positions(&a.dims)?)?;
    let n = dims.total_dim();
    let mut checks = Vec::new();

    let swap = swap_by_displacements(&dims)?;
    checks.push(check(
        "swap",
        (swap - exact_swap(&dims)?).camax(),
        IDENTITY_TOL,
    ));

    let m = random_matrix(n, a.seed);
    let t = transpose_by_displacements(&DensityMatrix::new(dims.clone(), m.clone())?)?;
    checks.push(check(
        "transpose",
        (t.matrix() - m.transpose()).camax(),
        IDENTITY_TOL,
    ));

    if dims.len() > 1 {
        let rho = DensityMatrix::new(dims.clone(), m)?;
        let part = Partition::new(&dims, vec![dims.len() - 1])?;
        let dev = (partial_transpose(&rho, &part)?.matrix()
            - partial_transpose_direct(&rho, &part)?.matrix())
        .camax();
        checks.push(check("partial_transpose", dev, IDENTITY_TOL));
    }

    let psi = random_state(&dims, a.seed);
    let phi = random_state(&dims, a.seed.wrapping_add(1));
    let total = displacement_distribution(&psi)?.total();
    checks.push(check(
        "normalization",
        (total - 1.0).abs(),
        NORMALIZATION_TOL,
    ));
    let direct = inner(&psi, &phi)?.norm_sqr();
    checks.push(check(
        "cross_fidelity",
        (cross_fidelity(&psi, &phi)? - direct).abs(),
        NORMALIZATION_TOL,
    ));

    let passed = checks.iter().all(|c| c.2);
    let mut r = ResultRecord::new("verify");
    r.parameter("dims", dims.dims().to_vec())
        .parameter("seed", a.seed);
    for (name, v, ok) in checks {
        if !ok {
            log::error!("{name} check failed: {v}");
        }
        r.value(&name, v);
    }
    r.value("passed", passed);
    Ok(Report {
        stdout: r.to_json(),
        passed,
    })
}
