//! The four subcommands, generic over the working scalar type.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use polynewt_core::bench::{
    chandrasekhar_start, chandrasekhar_system, cyclic_n_roots, random_matrix, random_point,
    random_stress_products, ChandrasekharParams,
};
use polynewt_core::evaldiff::{eval_monomial_and_derivs, EvalPlan, OpCounter};
use polynewt_core::mgs::{
    back_substitute_staged, mgs_qr, mgs_qr_delayed, orthogonality_error, residual_check, AugmentedMatrix,
    Matrix, Variant,
};
use polynewt_core::newton::{homotopy_start_system, inf_norm, run_newton, HomotopyParams, NewtonConfig};
use polynewt_core::polyrep::{decompose, PolySystem, PowerTable};
use polynewt_core::{Error, Executor, RealScalar, Scalar, Serial};
use serde::Serialize;

use super::args::{CommandKind, RunSpec, Source};
use super::error::CliError;
use crate::formats::{dump_qr, parse_matrix, parse_system, serialize_system, write_csv, write_jsonl, JsonScalar};
use crate::parallel::Rayon;
use crate::timing::{timing_report, PhaseClock, TimingReport};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes to `--output` when given, to `out` otherwise.
fn emit(spec: &RunSpec, out: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match &spec.output {
        Some(p) => write_file(p, bytes),
        None => out.write_all(bytes).map_err(CliError::stdout),
    }
}

fn summary_line(out: &mut dyn Write, record: &impl Serialize) -> Result<(), CliError> {
    let line = serde_json::to_string(record).expect("summary serializes");
    writeln!(out, "{line}").map_err(CliError::stdout)
}

fn parse_real<R: RealScalar>(text: &str) -> R {
    R::parse_decimal(text).expect("validated before the run")
}

fn load_system<S: Scalar>(spec: &RunSpec) -> Result<PolySystem<S>, CliError> {
    match &spec.source {
        Source::Chandrasekhar { n, c } => {
            let params = match c {
                Some(c) => ChandrasekharParams::new(*n, parse_real(c)),
                None => ChandrasekharParams::with_default_c(*n),
            };
            Ok(chandrasekhar_system::<S>(&params.map_err(Error::from)?))
        }
        Source::Cyclic { n } => Ok(cyclic_n_roots::<S>(*n).map_err(Error::from)?),
        Source::File(path) => parse_system::<S>(&read(path)?).map_err(|e| CliError::format(path, e)),
        Source::Random { .. } => unreachable!("random sources have no system"),
    }
}

fn source_name(source: &Source) -> &'static str {
    match source {
        Source::Chandrasekhar { .. } => "chandrasekhar",
        Source::Cyclic { .. } => "cyclic",
        Source::File(_) => "file",
        Source::Random { .. } => "random",
    }
}

pub(crate) fn run<S: Scalar>(spec: &RunSpec, out: &mut dyn Write) -> Result<(), CliError> {
    if spec.parallel {
        let pool = Rayon::new(spec.threads).map_err(|e| CliError::Usage(vec![e.to_string()]))?;
        dispatch::<S, _>(spec, &pool, out)
    } else {
        dispatch::<S, _>(spec, &Serial, out)
    }
}

fn dispatch<S: Scalar, E: Executor>(spec: &RunSpec, exec: &E, out: &mut dyn Write) -> Result<(), CliError> {
    match spec.command {
        CommandKind::Newton => newton::<S, E>(spec, exec, out),
        CommandKind::Qr => qr::<S, E>(spec, exec, out),
        CommandKind::Evaldiff => evaldiff::<S, E>(spec, exec, out),
        CommandKind::Gen => gen::<S>(spec, out),
    }
}

#[derive(Serialize)]
struct Header {
    command: &'static str,
    source: &'static str,
    n: usize,
    precision: &'static str,
    complex: bool,
    parallel: bool,
}

fn header<S: Scalar>(spec: &RunSpec, command: &'static str, n: usize) -> Header {
    Header {
        command,
        source: source_name(&spec.source),
        n,
        precision: S::Real::PRECISION.name(),
        complex: S::IS_COMPLEX,
        parallel: spec.parallel,
    }
}

#[derive(Serialize)]
struct NewtonSummary {
    #[serde(flatten)]
    header: Header,
    t: Option<String>,
    iterations: usize,
    converged: bool,
    final_f_norm: String,
    x0: JsonScalar,
    eval_mults: u64,
    grad_mults: u64,
    timings: TimingReport,
}

fn newton<S: Scalar, E: Executor>(spec: &RunSpec, exec: &E, out: &mut dyn Write) -> Result<(), CliError> {
    let target = load_system::<S>(spec)?;
    let n = target.n_vars();
    let (sys, x0) = match &spec.t {
        Some(t) => {
            let z = random_point::<S>(n, spec.seed);
            let params = HomotopyParams {
                z: z.clone(),
                t: parse_real(t),
            };
            (homotopy_start_system(&target, &params, exec).map_err(Error::from)?, z)
        }
        None => (target, chandrasekhar_start::<S>(n)),
    };
    let cfg = NewtonConfig {
        max_iters: spec.iters,
        tiling: spec.tiling,
        variant: spec.variant,
        stop_tolerance: spec.tolerance,
    };
    let mut clock = PhaseClock::default();
    let result = run_newton(&sys, &x0, &cfg, exec, &mut clock).map_err(Error::from)?;
    let trace = &result.trace;
    let mut text = Vec::new();
    if spec.csv {
        write_csv(&mut text, &trace.entries)
    } else {
        write_jsonl(&mut text, &trace.entries)
    }
    .expect("writing to memory");
    emit(spec, out, &text)?;
    summary_line(
        out,
        &NewtonSummary {
            header: header::<S>(spec, "newton", n),
            t: spec.t.clone(),
            iterations: trace.entries.len(),
            converged: trace.converged,
            final_f_norm: trace.final_f_norm.to_canonical(),
            x0: JsonScalar::new(result.x[0]),
            eval_mults: trace.counts.eval,
            grad_mults: trace.counts.grad,
            timings: timing_report(&clock),
        },
    )
}

#[derive(Serialize)]
struct QrSummary {
    #[serde(flatten)]
    header: Header,
    m: usize,
    tile: usize,
    variant: &'static str,
    z: String,
    x0: JsonScalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<QrCheck>,
    factor_s: f64,
    solve_s: f64,
}

#[derive(Serialize)]
struct QrCheck {
    residual: f64,
    residual_bound: f64,
    orthogonality: f64,
    passed: bool,
}

fn qr_input<S: Scalar>(spec: &RunSpec) -> Result<(Matrix<S>, Vec<S>), CliError> {
    let full = match &spec.source {
        Source::Random { m, n } => random_matrix::<S>(*m, *n + 1, spec.seed),
        Source::File(path) => parse_matrix::<S>(&read(path)?).map_err(|e| CliError::format(path, e))?,
        _ => unreachable!("qr reads a matrix"),
    };
    let (m, cols) = (full.rows(), full.cols());
    if cols < 2 || m < cols - 1 {
        return Err(CliError::Usage(vec![format!(
            "qr needs an m x (n+1) matrix [A b] with m >= n >= 1, got {m} x {cols}"
        )]));
    }
    let n = cols - 1;
    let a = Matrix::from_fn(m, n, |i, j| full[(i, j)]);
    Ok((a, full.col(n).to_vec()))
}

fn qr<S: Scalar, E: Executor>(spec: &RunSpec, exec: &E, out: &mut dyn Write) -> Result<(), CliError> {
    let (a, b) = qr_input::<S>(spec)?;
    let (m, n) = (a.rows(), a.cols());
    let aug = AugmentedMatrix::new(&a, &b).map_err(Error::from)?;
    let start = Instant::now();
    let factors = match spec.variant {
        Variant::Immediate => mgs_qr(aug, spec.tiling, exec),
        Variant::Delayed => mgs_qr_delayed(aug, spec.tiling, exec),
    }
    .map_err(Error::from)?;
    let factor_s = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let x = back_substitute_staged(&factors.r, &factors.y(), spec.tiling, exec).map_err(Error::from)?;
    let solve_s = start.elapsed().as_secs_f64();
    if let Some(path) = &spec.dump_qr {
        write_file(path, dump_qr(&factors).as_bytes())?;
    }
    let check = spec.check.then(|| {
        let residual = residual_check(&a, &factors.q, &factors.r);
        let residual_bound = 1e3 * S::eps() * a.max_abs().to_f64();
        QrCheck {
            residual,
            residual_bound,
            orthogonality: orthogonality_error(&factors.q),
            passed: residual <= residual_bound,
        }
    });
    let failed = check.as_ref().is_some_and(|c| !c.passed);
    let check_msg = check
        .as_ref()
        .map(|c| format!("max|A - QR| = {:e} exceeds {:e}", c.residual, c.residual_bound));
    summary_line(
        out,
        &QrSummary {
            header: header::<S>(spec, "qr", n),
            m,
            tile: spec.tiling.k(),
            variant: match spec.variant {
                Variant::Immediate => "immediate",
                Variant::Delayed => "delayed",
            },
            z: factors.z().to_canonical(),
            x0: JsonScalar::new(x[0]),
            check,
            factor_s,
            solve_s,
        },
    )?;
    if failed {
        return Err(CliError::Numerical {
            module: "mgs",
            operation: "check",
            index: None,
            iteration: None,
            message: check_msg.unwrap_or_default(),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct EvalSummary {
    #[serde(flatten)]
    header: Header,
    monomials: usize,
    f_norm: String,
    jacobian_norm: String,
    eval_mults: u64,
    grad_mults: u64,
    evaluate_s: f64,
}

fn evaldiff<S: Scalar, E: Executor>(spec: &RunSpec, exec: &E, out: &mut dyn Write) -> Result<(), CliError> {
    let mut values_text = String::new();
    let summary = match &spec.source {
        Source::Random { m, n } => {
            let products = random_stress_products::<S>(*m, *n, spec.seed).map_err(Error::from)?;
            let x = random_point::<S>(*n, spec.seed ^ 0x5eed);
            let table = PowerTable::build(&x, &vec![1; *n]);
            let start = Instant::now();
            let mut slots: Vec<(S, S::Real, OpCounter)> = vec![(S::zero(), S::Real::zero(), OpCounter::default()); *m];
            exec.for_each(&mut slots, |i, slot| {
                let mon = products.monomial(i);
                let (v, d) = eval_monomial_and_derivs(&mon, &decompose(&mon), &table, &x, &mut slot.2);
                let dn = d.iter().fold(S::Real::zero(), |acc, (_, g)| acc.max(g.modulus()));
                *slot = (v, dn, slot.2);
            });
            let evaluate_s = start.elapsed().as_secs_f64();
            let mut counts = OpCounter::default();
            let (mut f, mut j) = (S::Real::zero(), S::Real::zero());
            for (v, dn, c) in &slots {
                counts.absorb(*c);
                f = f.max(v.modulus());
                j = j.max(*dn);
                values_text.push_str(&crate::formats::scalar_text(*v));
                values_text.push('\n');
            }
            EvalSummary {
                header: header::<S>(spec, "evaldiff", *n),
                monomials: *m,
                f_norm: f.to_canonical(),
                jacobian_norm: j.to_canonical(),
                eval_mults: counts.eval,
                grad_mults: counts.grad,
                evaluate_s,
            }
        }
        _ => {
            let sys = load_system::<S>(spec)?;
            let x = random_point::<S>(sys.n_vars(), spec.seed);
            let plan = EvalPlan::new(&sys);
            let start = Instant::now();
            let e = plan.evaluate(&x, exec).map_err(Error::from)?;
            let evaluate_s = start.elapsed().as_secs_f64();
            for v in &e.values {
                values_text.push_str(&crate::formats::scalar_text(*v));
                values_text.push('\n');
            }
            EvalSummary {
                header: header::<S>(spec, "evaldiff", sys.n_vars()),
                monomials: sys.monomial_count(),
                f_norm: inf_norm(&e.values).to_canonical(),
                jacobian_norm: e.jacobian.max_abs().to_canonical(),
                eval_mults: e.counts.eval,
                grad_mults: e.counts.grad,
                evaluate_s,
            }
        }
    };
    if let Some(path) = &spec.output {
        write_file(path, values_text.as_bytes())?;
    }
    summary_line(out, &summary)
}

fn gen<S: Scalar>(spec: &RunSpec, out: &mut dyn Write) -> Result<(), CliError> {
    let sys = match &spec.source {
        Source::Random { m, n } => {
            let polys = random_stress_products::<S>(*m, *n, spec.seed)
                .map_err(Error::from)?
                .map(|mon| vec![mon])
                .collect();
            PolySystem::new(*n, polys).map_err(Error::from)?
        }
        _ => load_system::<S>(spec)?,
    };
    emit(spec, out, serialize_system(&sys).as_bytes())
}
