use std::path::Path;
use std::time::Instant;

use mixdisc::charpoly::{mixed_char_poly, mss_root_check, MssReport};
use mixdisc::derivatives::Settings;
use mixdisc::matrix::MatrixTuple;
use mixdisc::polydisc::{self, PointSampling, PolydiscInstance, ZeroFreeReport};
use mixdisc::stochastic::{self, DsReport, ScalingOptions, ScalingResult};
use mixdisc::taylor::degree_for_accuracy;
use mixdisc::{exact, gen, minors, ApproxResult, Complex64, ComplexMatrix, SymmetricMatrix};

use crate::args::*;
use crate::doc::Doc;
use crate::error::{input_error, CliError};
use crate::instance::{self, symmetric_doc, Instance};

/// A finished command: the document body and any timing entries.
pub struct Output {
    pub doc: Doc,
    pub timing: Doc,
}

impl Output {
    fn new(doc: Doc) -> Self {
        Self { doc, timing: Doc::obj() }
    }
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Exact(a) => run_exact(a),
        Command::Approx(a) => run_approx(a),
        Command::Ds { action } => run_ds(action),
        Command::Charpoly(a) => run_charpoly(a),
        Command::Minors(a) => run_minors(a),
        Command::Verify { region } => run_verify(region),
        Command::Gen { kind } => run_gen(kind),
        Command::Bench(a) => run_bench(a),
    }
}

fn settings(method: &MethodArg) -> Settings {
    Settings { method: method.method.into(), ..Default::default() }
}

fn envelope(command: &str, input: Doc, result: Doc) -> Doc {
    Doc::obj().with("command", command).with("input", input).with("result", result)
}

fn load(path: &Path) -> Result<Instance, CliError> {
    let inst = instance::read(path)?;
    if inst.matrices.is_empty() {
        return Err(CliError::Parse(format!("{}: no matrices", path.display())));
    }
    Ok(inst)
}

fn complex_tuple(inst: &Instance) -> Result<MatrixTuple, CliError> {
    Ok(MatrixTuple::new(inst.matrices.clone())?)
}

fn symmetric_tuple(inst: &Instance) -> Result<MatrixTuple<SymmetricMatrix>, CliError> {
    let ms = inst
        .matrices
        .iter()
        .enumerate()
        .map(|(k, m)| instance::to_symmetric(m, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixTuple::new(ms)?)
}

fn require(value: Option<f64>, name: &str) -> Result<f64, CliError> {
    value.map_or_else(|| input_error(format!("`{name}` must be given on the command line or in the instance")), Ok)
}

pub fn approx_doc(r: &ApproxResult) -> Doc {
    Doc::obj()
        .with("log_value", r.log_value)
        .with("degree", r.degree)
        .with("truncation_bound", r.truncation_bound)
        .with("beta", r.beta)
        .with("n", r.n)
        .with("derivative_orders", r.derivative_orders)
        .with("rounding_estimate", r.rounding_estimate)
}

fn with_exact_log(mut doc: Doc, approx: Complex64, exact_log: Option<Complex64>) -> Doc {
    if let Some(e) = exact_log {
        doc.push("exact_log_value", e);
        doc.push("observed_error", mixdisc::taylor::log_distance(approx, e));
    }
    doc
}

fn run_exact(a: &ExactArgs) -> Result<Output, CliError> {
    let inst = load(&a.tuple)?;
    let first = &inst.matrices[0];
    let (mode, value) = match a.mode {
        ExactMode::MixedDiscriminant => ("mixed_discriminant", exact::mixed_discriminant(&complex_tuple(&inst)?)?),
        ExactMode::Permutations => (
            "permutations",
            exact::mixed_discriminant_by_permutations(&complex_tuple(&inst)?, &Default::default())?,
        ),
        ExactMode::Permanent => ("permanent", exact::permanent(first)?),
        ExactMode::Minors => ("minors", exact::minor_power_sum(first, a.m)?),
    };
    let mut result = Doc::obj().with("mode", mode);
    if a.mode == ExactMode::Minors {
        result.push("m", a.m);
    }
    result.push("value", value);
    Ok(Output::new(envelope("exact", inst.to_doc(), result)))
}

fn run_approx(a: &ApproxArgs) -> Result<Output, CliError> {
    let mut inst = load(&a.tuple)?;
    inst.eps = Some(require(a.eps.or(inst.eps), "eps")?);
    inst.rho = Some(require(a.rho.or(inst.rho), "rho")?);
    let Some(points) = inst.points.clone() else {
        return input_error("the instance needs `points`");
    };
    let problem = PolydiscInstance::new(symmetric_tuple(&inst)?, points, inst.rho.unwrap(), inst.eps.unwrap())?;
    let r = polydisc::approx_log_mixed_discriminant(&problem, &settings(&a.method))?;
    let exact_log = if a.check { Some(polydisc::exact_log_mixed_discriminant(&problem)?) } else { None };
    let result = with_exact_log(approx_doc(&r), r.log_value, exact_log);
    Ok(Output::new(envelope("approx", inst.to_doc(), result)))
}

fn ds_report_doc(r: &DsReport) -> Doc {
    Doc::obj()
        .with("passed", r.passed)
        .with("shape_ok", r.shape_ok)
        .with("min_eigenvalues", r.min_eigenvalues.clone())
        .with("traces", r.traces.clone())
        .with("sum_deviation", r.sum_deviation)
        .with("psd_violations", r.psd_violations.clone())
        .with("trace_violations", r.trace_violations.clone())
}

fn scaling_doc(r: &ScalingResult) -> Doc {
    Doc::obj()
        .with("iterations", r.iterations)
        .with("residual", r.residual)
        .with("scales", r.scales.clone())
        .with("transform", symmetric_doc(&r.transform))
        .with("log_factor", r.log_factor())
        .with("matrices", Doc::Arr(r.ds_tuple.iter().map(symmetric_doc).collect()))
}

fn run_ds(action: &DsAction) -> Result<Output, CliError> {
    match action {
        DsAction::Validate { tuple, tol } => {
            let inst = load(tuple)?;
            let r = stochastic::is_doubly_stochastic(&symmetric_tuple(&inst)?, *tol);
            let input = inst.to_doc().with("tol", *tol);
            Ok(Output::new(envelope("ds validate", input, ds_report_doc(&r))))
        }
        DsAction::Scale { tuple, tol, max_iter } => {
            let inst = load(tuple)?;
            let opts = ScalingOptions { tol: *tol, max_iter: *max_iter };
            let r = stochastic::scale_to_doubly_stochastic(&symmetric_tuple(&inst)?, &opts)?;
            let input = inst.to_doc().with("tol", *tol).with("max_iter", *max_iter);
            Ok(Output::new(envelope("ds scale", input, scaling_doc(&r))))
        }
        DsAction::Approx { tuple, z, eps, check, method } => {
            let mut inst = load(tuple)?;
            inst.eps = Some(require(eps.or(inst.eps), "eps")?);
            let t = symmetric_tuple(&inst)?;
            let r = stochastic::approx_log_mixed_disc_ds(&t, z.0, inst.eps.unwrap(), &settings(method))?;
            let exact_log = if *check { Some(stochastic::exact_identity_perturbation(&t, z.0)?.ln()) } else { None };
            let result = with_exact_log(approx_doc(&r), r.log_value, exact_log)
                .with("zero_free_radius", stochastic::zero_free_radius(t.dim()));
            Ok(Output::new(envelope("ds approx", inst.to_doc().with("z", z.0), result)))
        }
        DsAction::Contract { tuple, gamma, eps, check, method } => {
            let mut inst = load(tuple)?;
            inst.eps = Some(require(eps.or(inst.eps), "eps")?);
            let t = symmetric_tuple(&inst)?;
            let r = stochastic::approx_log_contracted(&t, *gamma, inst.eps.unwrap(), &settings(method))?;
            let exact_log = if *check {
                Some(exact::mixed_discriminant(&stochastic::contracted_tuple(&t, *gamma).to_complex())?.ln())
            } else {
                None
            };
            let result = with_exact_log(approx_doc(&r), r.log_value, exact_log);
            Ok(Output::new(envelope("ds contract", inst.to_doc().with("gamma", *gamma), result)))
        }
    }
}

fn mss_doc(r: &MssReport) -> Doc {
    Doc::obj()
        .with("passed", r.passed)
        .with("max_imag", r.max_imag)
        .with("min_real", r.min_real)
        .with("max_real", r.max_real)
        .with("bound", r.bound)
}

fn run_charpoly(a: &CharpolyArgs) -> Result<Output, CliError> {
    let inst = load(&a.tuple)?;
    let s = settings(&a.method);
    let poly = mixed_char_poly(&inst.matrices, &s)?;
    let mut result = Doc::obj()
        .with("coefficients", poly.coeffs().to_vec())
        .with("degree", poly.degree());
    if poly.degree().is_some_and(|d| d > 0) {
        result.push("roots", poly.roots()?);
    }
    let mut input = inst.to_doc();
    if a.mss {
        let ms = inst
            .matrices
            .iter()
            .enumerate()
            .map(|(k, m)| instance::to_symmetric(m, k))
            .collect::<Result<Vec<_>, _>>()?;
        let eps_trace = a.eps_trace.unwrap_or_else(|| ms.iter().map(SymmetricMatrix::trace).fold(0.0, f64::max));
        input.push("eps_trace", eps_trace);
        result.push("mss", mss_doc(&mss_root_check(&ms, eps_trace, &s)?));
    }
    Ok(Output::new(envelope("charpoly", input, result)))
}

fn run_minors(a: &MinorsArgs) -> Result<Output, CliError> {
    let mut inst = load(&a.matrix)?;
    inst.matrices.truncate(1);
    inst.eps = Some(require(a.eps.or(inst.eps), "eps")?);
    inst.rho = Some(require(a.rho.or(inst.rho), "rho")?);
    let b = &inst.matrices[0];
    let r = minors::approx_log_minor_power_sum(b, a.m, inst.rho.unwrap(), inst.eps.unwrap(), &Settings::default())?;
    let exact_log = if a.check { Some(minors::exact_log_minor_power_sum(b, a.m)?) } else { None };
    let result = with_exact_log(approx_doc(&r), r.log_value, exact_log);
    Ok(Output::new(envelope("minors", inst.to_doc().with("m", a.m), result)))
}

fn zero_free_doc(r: &ZeroFreeReport) -> Doc {
    Doc::obj()
        .with("passed", r.zeros == 0)
        .with("n", r.n)
        .with("evaluations", r.evaluations)
        .with("zeros", r.zeros)
        .with("min_normalized_modulus", r.min_normalized_modulus)
        .with("threshold", r.threshold)
}

fn sample_doc(region: &str, s: &SampleArgs) -> Doc {
    Doc::obj()
        .with("region", region)
        .with("n", s.n)
        .with("samples", s.samples)
        .with("grid", s.grid)
        .with("seed", s.seed)
}

fn run_verify(region: &VerifyRegion) -> Result<Output, CliError> {
    let (input, report) = match region {
        VerifyRegion::Polydisc { sample, sampling } => {
            let mode = match sampling {
                Sampling::Boundary => PointSampling::Boundary,
                Sampling::Mixed => PointSampling::Mixed,
            };
            let name = if mode == PointSampling::Boundary { "boundary" } else { "mixed" };
            let r = polydisc::verify_zero_free(sample.n, sample.samples, sample.grid, sample.seed, mode)?;
            (sample_doc("polydisc", sample).with("sampling", name), r)
        }
        VerifyRegion::Ds { sample } => {
            let r = stochastic::verify_zero_free_ds(sample.n, sample.samples, sample.grid, sample.seed)?;
            (sample_doc("ds", sample), r)
        }
        VerifyRegion::Minors { sample, m } => {
            let r = minors::verify_zero_free_minors(sample.n, *m, sample.samples, sample.grid, sample.seed)?;
            (sample_doc("minors", sample).with("m", *m), r)
        }
    };
    Ok(Output::new(envelope("verify", input, zero_free_doc(&report))))
}

fn symmetric_instance(matrices: &[SymmetricMatrix], seed: u64) -> Instance {
    Instance {
        n: matrices.first().map(SymmetricMatrix::dim),
        matrices: matrices.iter().map(SymmetricMatrix::to_complex).collect(),
        seed: Some(seed),
        ..Default::default()
    }
}

fn run_gen(kind: &GenKind) -> Result<Output, CliError> {
    let (name, inst) = match *kind {
        GenKind::Polydisc { n, rho, eps, seed } => {
            let p = gen::polydisc_instance(n, rho, eps, seed)?;
            let mut inst = symmetric_instance(p.tuple.as_slice(), seed);
            inst.points = Some(p.points);
            inst.rho = Some(rho);
            inst.eps = Some(eps);
            ("polydisc", inst)
        }
        GenKind::Ds { n, seed } => ("ds", symmetric_instance(gen::ds_tuple(n, seed)?.as_slice(), seed)),
        GenKind::Pd { n, seed } => ("pd", symmetric_instance(gen::pd_tuple(n, seed)?.as_slice(), seed)),
        GenKind::Decomposition { n, m, seed } => (
            "decomposition",
            symmetric_instance(gen::psd_decomposition_of_identity(n, m, seed)?.as_slice(), seed),
        ),
        GenKind::Matrix { n, bound, complex, rho, eps, seed } => {
            let b: ComplexMatrix = if complex {
                gen::complex_bounded(n, bound, seed)?
            } else {
                gen::real_bounded(n, bound, seed)?
            };
            let inst = Instance {
                n: Some(n),
                matrices: vec![b],
                rho: Some(rho),
                eps: Some(eps),
                seed: Some(seed),
                ..Default::default()
            };
            ("matrix", inst)
        }
    };
    Ok(Output::new(inst.to_doc().with("generator", name)))
}

/// Least-squares `y = a + b ln x`.
fn log_fit(xs: &[usize], ys: &[usize]) -> Option<(f64, f64)> {
    let k = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|&x| (x as f64).ln()).collect();
    let yf: Vec<f64> = ys.iter().map(|&y| y as f64).collect();
    let mx = lx.iter().sum::<f64>() / k;
    let my = yf.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&yf).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    Some((my - b * mx, b))
}

fn run_bench(a: &BenchArgs) -> Result<Output, CliError> {
    let s = settings(&a.method);
    let mut rows = Vec::new();
    let mut timing = Doc::obj();
    let mut degrees = Vec::new();
    for &n in &a.n {
        let seed = gen::derive_seed(a.seed, n as u64);
        let problem = gen::polydisc_instance(n, a.rho, a.eps, seed)?;
        let degree = degree_for_accuracy(n, 1.0 / a.rho, a.eps)?;
        let needed = degree.min(n);
        let orders = a.max_orders.map_or(needed, |k| k.min(needed));
        let start = Instant::now();
        let mut row = Doc::obj().with("n", n).with("seed", seed).with("degree", degree).with("derivative_orders", orders);
        if orders == needed {
            let r = polydisc::approx_log_mixed_discriminant(&problem, &s)?;
            row.push("complete", true);
            row.push("log_value", r.log_value);
            row.push("truncation_bound", r.truncation_bound);
        } else {
            let perturbed: Vec<ComplexMatrix> = problem
                .tuple
                .iter()
                .zip(&problem.points)
                .map(|(q, &z)| q.to_complex().scale(z))
                .collect();
            let d = polydisc::normalized_derivatives(&perturbed, orders, &s)?;
            row.push("complete", false);
            row.push("last_normalized_derivative", d.last().copied());
        }
        timing.push(&format!("n{n}_seconds"), start.elapsed().as_secs_f64());
        degrees.push(degree);
        rows.push(row);
    }
    let mut result = Doc::obj().with("runs", Doc::Arr(rows));
    if let Some((intercept, slope)) = log_fit(&a.n, &degrees) {
        result.push("degree_fit", Doc::obj().with("intercept", intercept).with("slope_per_ln_n", slope));
    }
    let mut input = Doc::obj()
        .with("n", a.n.clone())
        .with("eps", a.eps)
        .with("rho", a.rho)
        .with("seed", a.seed);
    input.push("max_orders", a.max_orders);
    Ok(Output { doc: envelope("bench", input, result), timing })
}

/// The document written to standard output.
pub fn finish(output: Output, elapsed: f64, with_timing: bool) -> Doc {
    let mut doc = output.doc;
    if with_timing {
        let mut timing = output.timing;
        timing.push("total_seconds", elapsed);
        doc.push("timing", timing);
    }
    doc
}

pub fn error_doc(e: &CliError) -> Doc {
    Doc::obj().with("error", Doc::obj().with("kind", e.kind()).with("message", e.to_string()).with("exit_code", e.exit_code() as u32))
}
