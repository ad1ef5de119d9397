//! Flags and their validation into a [`RunSpec`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polynewt_core::mgs::{TilingConfig, Variant};
use polynewt_core::{DoubleDouble, Precision, RealScalar};

use crate::parallel::threads_from_env;

#[derive(Debug, Parser)]
#[command(name = "polynewt", version, about = "Multiprecision Newton solver for sparse polynomial systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Newton,
    Qr,
    Evaldiff,
    Gen,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run Newton's method on a benchmark or a system file.
    Newton(RunArgs),
    /// Least squares by modified Gram-Schmidt on a random or given matrix.
    Qr(RunArgs),
    /// Evaluate and differentiate a system or random products.
    Evaldiff(RunArgs),
    /// Write a benchmark system in the text format.
    Gen(RunArgs),
}

impl Command {
    fn split(self) -> (CommandKind, RunArgs) {
        match self {
            Command::Newton(a) => (CommandKind::Newton, a),
            Command::Qr(a) => (CommandKind::Qr, a),
            Command::Evaldiff(a) => (CommandKind::Evaldiff, a),
            Command::Gen(a) => (CommandKind::Gen, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Benchmark {
    Chandrasekhar,
    Cyclic,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prec {
    D,
    Dd,
    Qd,
}

impl From<Prec> for Precision {
    fn from(p: Prec) -> Self {
        match p {
            Prec::D => Precision::D,
            Prec::Dd => Precision::DD,
            Prec::Qd => Precision::QD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Immediate,
    Delayed,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Benchmark system.
    #[arg(long, value_enum)]
    pub benchmark: Option<Benchmark>,
    /// System or matrix file for `--benchmark file` and `qr`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Random instance: products of variables for evaldiff and gen, a
    /// matrix for qr.
    #[arg(long)]
    pub random: bool,
    /// Dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Row or monomial count for random instances.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value_t = Prec::Dd)]
    pub prec: Prec,
    /// Complex arithmetic (the default).
    #[arg(long, conflicts_with = "real")]
    pub complex: bool,
    /// Real arithmetic.
    #[arg(long)]
    pub real: bool,
    /// Maximum Newton iterations.
    #[arg(long, default_value_t = 10)]
    pub iters: usize,
    /// Homotopy parameter in (0, 1); 0.99 by default for cyclic.
    #[arg(long)]
    pub t: Option<String>,
    /// Constant of the H-equation in (0, 1].
    #[arg(long)]
    pub c: Option<String>,
    /// Stop when the update's max-norm falls to this value.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Components per tile in the Gram-Schmidt dot products.
    #[arg(long = "K", default_value_t = 32)]
    pub k: usize,
    /// Gram-Schmidt variant; delayed with --parallel, immediate without.
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write Q and R to this path.
    #[arg(long)]
    pub dump_qr: Option<PathBuf>,
    /// Check the factorization residual and orthogonality.
    #[arg(long)]
    pub check: bool,
    /// Write the trace as CSV instead of JSON lines.
    #[arg(long)]
    pub csv: bool,
    /// Run the data-parallel loops on a thread pool.
    #[arg(long)]
    pub parallel: bool,
}

/// Where the system or matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Chandrasekhar { n: usize, c: Option<String> },
    Cyclic { n: usize },
    File(PathBuf),
    Random { m: usize, n: usize },
}

/// A fully validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: CommandKind,
    pub source: Source,
    pub precision: Precision,
    pub complex: bool,
    pub iters: usize,
    pub t: Option<String>,
    pub tolerance: Option<f64>,
    pub tiling: TilingConfig,
    pub variant: Variant,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub dump_qr: Option<PathBuf>,
    pub check: bool,
    pub csv: bool,
    pub parallel: bool,
    pub threads: Option<usize>,
}

fn check_real(problems: &mut Vec<String>, flag: &str, text: &str, ok: impl Fn(f64) -> bool, range: &str) {
    match DoubleDouble::parse_decimal(text) {
        Ok(v) if ok(v.to_f64()) => {}
        Ok(_) => problems.push(format!("--{flag} must lie in {range}, got {text}")),
        Err(e) => problems.push(format!("--{flag}: {e}")),
    }
}

impl RunSpec {
    /// Validates every flag, listing all problems found.
    pub fn from_cli(cli: Cli) -> Result<Self, Vec<String>> {
        let (command, a) = cli.command.split();
        let mut problems = Vec::new();
        let mut not_for = |cond: bool, flag: &str, cmds: &str| {
            if cond {
                problems.push(format!("{flag} applies to {cmds} only"));
            }
        };
        use CommandKind::*;
        not_for(command != Newton && a.t.is_some(), "--t", "newton");
        not_for(command != Newton && a.tol.is_some(), "--tol", "newton");
        not_for(command != Newton && a.csv, "--csv", "newton");
        not_for(command != Qr && (a.check || a.dump_qr.is_some()), "--check and --dump-qr", "qr");
        not_for(
            !matches!(command, Newton | Qr) && a.variant.is_some(),
            "--variant",
            "newton and qr",
        );

        let need_n = |problems: &mut Vec<String>, min: usize, what: &str| match a.n {
            Some(n) if n >= min => n,
            Some(n) => {
                problems.push(format!("--n must be at least {min} for {what}, got {n}"));
                0
            }
            None => {
                problems.push(format!("--n is required for {what}"));
                0
            }
        };
        let source = if a.random {
            if a.benchmark.is_some() || a.input.is_some() {
                problems.push("--random excludes --benchmark and --input".into());
            }
            if command == Newton {
                problems.push("newton needs --benchmark, not --random".into());
            }
            let n = need_n(&mut problems, 1, "--random");
            let m = match a.m {
                Some(m) if m >= 1 => m,
                Some(_) => {
                    problems.push("--m must be at least 1".into());
                    0
                }
                None => {
                    problems.push("--m is required for --random".into());
                    0
                }
            };
            if command == Qr && m < n {
                problems.push(format!("qr needs --m >= --n, got m = {m}, n = {n}"));
            }
            Source::Random { m, n }
        } else {
            let bench = match (command, a.benchmark) {
                (Qr, Some(b)) => {
                    problems.push(format!("qr takes --random or --input, not --benchmark {b:?}"));
                    None
                }
                (Qr, None) => Some(Benchmark::File),
                (_, Some(b)) => Some(b),
                (_, None) if a.input.is_some() && command != Gen => Some(Benchmark::File),
                (_, None) => {
                    problems.push("--benchmark or --random is required".into());
                    None
                }
            };
            if a.m.is_some() {
                problems.push("--m applies to --random only".into());
            }
            match bench {
                Some(Benchmark::Chandrasekhar) => {
                    if let Some(c) = &a.c {
                        check_real(&mut problems, "c", c, |v| v > 0.0 && v <= 1.0, "(0, 1]");
                    }
                    Source::Chandrasekhar {
                        n: need_n(&mut problems, 1, "chandrasekhar"),
                        c: a.c.clone(),
                    }
                }
                Some(Benchmark::Cyclic) => Source::Cyclic {
                    n: need_n(&mut problems, 2, "cyclic"),
                },
                Some(Benchmark::File) => {
                    if command == Gen {
                        problems.push("gen writes benchmarks; --benchmark file is not one".into());
                    }
                    match &a.input {
                        Some(p) => Source::File(p.clone()),
                        None => {
                            problems.push("--input is required to read a file".into());
                            Source::File(PathBuf::new())
                        }
                    }
                }
                None => Source::Random { m: 0, n: 0 },
            }
        };
        if a.c.is_some() && !matches!(source, Source::Chandrasekhar { .. }) {
            problems.push("--c applies to the chandrasekhar benchmark only".into());
        }
        if a.input.is_some() && !matches!(source, Source::File(_)) && !a.random {
            problems.push("--input applies to file inputs only".into());
        }
        if matches!(source, Source::File(_)) && a.n.is_some() {
            problems.push("--n is read from the file and cannot be given".into());
        }

        let t = match (&a.t, &source) {
            (Some(t), _) => {
                check_real(&mut problems, "t", t, |v| v > 0.0 && v < 1.0, "(0, 1)");
                Some(t.clone())
            }
            (None, Source::Cyclic { .. }) if command == Newton => Some("0.99".into()),
            _ => None,
        };
        let precision = Precision::from(a.prec);
        if let Some(tol) = a.tol {
            if !(tol.is_finite() && tol >= precision.eps()) {
                problems.push(format!("--tol must be at least the unit roundoff {:e}, got {tol:e}", precision.eps()));
            }
        }
        let tiling = TilingConfig::new(a.k).unwrap_or_else(|_| {
            problems.push("--K must be at least 1".into());
            TilingConfig::default()
        });
        let threads = if a.parallel {
            threads_from_env().unwrap_or_else(|e| {
                problems.push(e);
                None
            })
        } else {
            None
        };
        if !problems.is_empty() {
            return Err(problems);
        }
        let variant = match (a.variant, a.parallel) {
            (Some(VariantArg::Immediate), _) | (None, false) => Variant::Immediate,
            (Some(VariantArg::Delayed), _) | (None, true) => Variant::Delayed,
        };
        Ok(RunSpec {
            command,
            source,
            precision,
            complex: !a.real,
            iters: a.iters,
            t,
            tolerance: a.tol,
            tiling,
            variant,
            seed: a.seed,
            output: a.output,
            dump_qr: a.dump_qr,
            check: a.check,
            csv: a.csv,
            parallel: a.parallel,
            threads,
        })
    }
}
