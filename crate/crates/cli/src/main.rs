//! `converse`: build coefficient files and run the verification suites on them.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on configuration or
//! input errors. Failures print a single `reason=` line on stderr.

mod parse;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use converse_core::arith::is_prime;
use converse_core::chargroup::{enumerate_characters, DirichletCharacter};
use converse_core::coeffs::{
    check_hecke_relations, eisenstein_coefficients, eta_product_expansion, load_coefficients,
    parse_eta_spec, write_coefficients, CoefficientSequence,
};
use converse_core::datasets::Dataset;
use converse_core::lfun::{
    default_s_grid, default_y_grid, eisenstein_l_factorization, verify_ramanujan_twist,
    CompletedLFunction,
};
use converse_core::modular::{
    admissible_primes, balanced_points, check_slash_coefficients, gamma_qa,
    modularity_check_with_constant, primes_one_mod, verify_matrix_identities, verify_sq_equals_one,
    IntegerMatrix2x2, SolverConfig,
};
use converse_core::report::Report;

#[derive(Parser)]
#[command(
    name = "converse",
    version,
    about = "Verify Hecke, functional-equation and modularity data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the coefficients of an Eisenstein series.
    Eisenstein(EisensteinArgs),
    /// Write the coefficients of an eta product.
    Eta(EtaArgs),
    /// Check multiplicativity, the prime-power recursion, self-duality and growth.
    HeckeCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Recover the root number and check the functional equation.
    VerifyFe {
        #[command(flatten)]
        input: Input,
        /// Twist by the primitive character with this label, e.g. 5.1.
        #[arg(long)]
        twist: Option<String>,
        /// Comma-separated complex points, e.g. 0.5,0.5+2i,1.5-1i.
        #[arg(long)]
        s_grid: Option<String>,
        /// Comma-separated cut points; defaults to {0.7, 1, 1.4}/sqrt(M).
        #[arg(long)]
        y_grid: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Check the Ramanujan-sum twist identity coefficientwise.
    RamanujanCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        q: u64,
        /// Number of coefficients to check; defaults to all.
        #[arg(long)]
        x: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Build C_chi from recovered root numbers and check that S_q is constant.
    SqCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        fe_tol: f64,
        /// Untwisted root number to use instead of solving for it.
        #[arg(long)]
        eps1: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Compare f|gamma with conj(xi(a)) f numerically.
    SlashCheck {
        #[command(flatten)]
        input: Input,
        /// Matrix "a,b;c,d" in Gamma0(N); defaults to gamma_{q,b}.
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        b: i64,
        /// Comma-separated points of the upper half-plane.
        #[arg(long)]
        points: Option<String>,
        /// Constant term a_0 of the series.
        #[arg(long)]
        constant: Option<String>,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Check the integer matrix identities for a level.
    MatrixCheck {
        #[arg(long)]
        level: u64,
        /// Comma-separated primes; defaults to the first `count` primes not dividing the level and
        /// the first `count` primes that are 1 mod the level.
        #[arg(long)]
        primes: Option<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Run every applicable check on one input.
    Report {
        #[command(flatten)]
        input: Input,
        /// Twist modulus; defaults to the smallest prime >= 3 not dividing the level.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Untwisted root number; skips the untwisted FE solve.
        #[arg(long)]
        eps1: Option<String>,
        /// Constant term a_0 used by the slash checks.
        #[arg(long)]
        constant: Option<String>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct EisensteinArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, default_value = "1.0")]
    xi1: String,
    #[arg(long, default_value = "1.0")]
    xi2: String,
    #[arg(long)]
    count: usize,
    /// Coefficient file to write; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EtaArgs {
    /// Eta-product spec such as 1^24 or 1^2*11^2.
    #[arg(long)]
    spec: String,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Coefficient file.
    #[arg(long, conflicts_with = "dataset")]
    coeffs: Option<PathBuf>,
    /// Bundled dataset: delta, level11, e4 or e1chi4.
    #[arg(long)]
    dataset: Option<Dataset>,
    /// Length of a bundled dataset.
    #[arg(long, requires = "dataset")]
    count: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Report file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Loaded {
    seq: CoefficientSequence,
    dataset: Option<Dataset>,
}

impl Input {
    fn load(&self) -> Result<Loaded> {
        match (&self.coeffs, self.dataset) {
            (Some(path), None) => Ok(Loaded {
                seq: load_coefficients(path)
                    .with_context(|| format!("loading {}", path.display()))?,
                dataset: None,
            }),
            (None, Some(d)) => Ok(Loaded {
                seq: d.build(self.count.unwrap_or(d.default_length()))?,
                dataset: Some(d),
            }),
            _ => bail!("exactly one of --coeffs and --dataset is required"),
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        bail!("tolerance must be positive, got {tol}");
    }
    Ok(())
}

fn emit(report: &Report, out: &Output) -> Result<()> {
    let text = report.to_string();
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing report"),
    }
}

fn write_sequence(seq: &CoefficientSequence, out: Option<&Path>) -> Result<Report> {
    let mut r = Report::new();
    r.text("weight", seq.weight())
        .text("level", seq.level())
        .text("nebentypus", seq.nebentypus().label())
        .text("X", seq.len());
    match out {
        Some(path) => {
            let file =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_coefficients(seq, io::BufWriter::new(file))?;
            r.text("file", path.display());
            eprint!("{r}");
        }
        None => write_coefficients(seq, io::stdout().lock())?,
    }
    Ok(r)
}

fn default_q(level: u64) -> u64 {
    admissible_primes(level, 4)
        .into_iter()
        .find(|&p| p >= 3)
        .expect("some prime >= 3 avoids any level")
}

fn nontrivial_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(enumerate_characters(q)?
        .into_iter()
        .filter(|c| !c.is_trivial())
        .collect())
}

fn hecke_report(seq: &CoefficientSequence, tol: f64) -> Report {
    check_hecke_relations(seq, tol).to_report()
}

fn fe_report(
    seq: &CoefficientSequence,
    twist: Option<&DirichletCharacter>,
    s_grid: Option<&[Complex64]>,
    y_grid: Option<&[f64]>,
    tol: f64,
) -> Result<Report> {
    let lf = match twist {
        Some(chi) => CompletedLFunction::twisted(seq, chi)?,
        None => CompletedLFunction::new(seq.clone()),
    };
    let s = s_grid.map_or_else(default_s_grid, <[_]>::to_vec);
    let y = y_grid.map_or_else(|| default_y_grid(lf.level()), <[_]>::to_vec);
    let mut r = Report::new();
    r.text("function", lf.tag());
    r.merge("fe", &lf.verify_fe(&s, &y, tol)?.to_report());
    Ok(flatten(r))
}

/// Drops the `fe.` prefix of a single merged section.
fn flatten(r: Report) -> Report {
    let mut out = Report::new();
    for (k, v) in r.entries() {
        if k == "fe.pass" {
            continue;
        }
        out.text(k.strip_prefix("fe.").unwrap_or(k), v);
    }
    if !r.passed() {
        out.fail();
    }
    out
}

fn sq_report(
    seq: &CoefficientSequence,
    q: u64,
    eps1: Option<Complex64>,
    fe_tol: f64,
    tol: f64,
) -> Result<Report> {
    let config = SolverConfig {
        fe_tol,
        eps1,
        ..SolverConfig::default()
    };
    Ok(verify_sq_equals_one(seq, q, &config, tol)?.to_report())
}

fn slash_report(
    seq: &CoefficientSequence,
    gamma: Option<IntegerMatrix2x2>,
    q: u64,
    b: i64,
    points: Option<Vec<Complex64>>,
    a0: Complex64,
    tol: f64,
) -> Result<Report> {
    let mut r = Report::new();
    let g = match gamma {
        Some(g) => g,
        None => gamma_qa(q, b, seq.level())?,
    };
    let points = points.unwrap_or_else(|| balanced_points(&g, &[-0.3, 0.0, 0.4]));
    r.merge(
        "modularity",
        &modularity_check_with_constant(seq, a0, &g, &points, tol)?.to_report(),
    );
    if gamma.is_none() {
        let c = check_slash_coefficients(seq, a0, q, b, 0.2, 256, 10, 1e-5)?;
        r.merge("coefficients", &c.to_report());
    }
    Ok(r)
}

/// The first `count` primes not dividing the level together with the first `count` primes
/// `≡ 1 (mod N)`, which exercise the identity specific to those.
fn matrix_primes(level: u64, count: usize) -> Vec<u64> {
    let mut qs = admissible_primes(level, count);
    qs.extend(primes_one_mod(level, count));
    qs.sort_unstable();
    qs.dedup();
    qs
}

fn matrix_report(level: u64, primes: &[u64]) -> Result<Report> {
    Ok(verify_matrix_identities(level, primes)?.to_report())
}

fn parse_opt_complex(text: Option<&String>) -> Result<Option<Complex64>> {
    text.map(|t| parse::complex(t)).transpose()
}

fn full_report(
    loaded: &Loaded,
    q: Option<u64>,
    tol: f64,
    eps1: Option<Complex64>,
    constant: Option<Complex64>,
) -> Result<Report> {
    let seq = &loaded.seq;
    let level = seq.level();
    let q = q.unwrap_or_else(|| default_q(level));
    if !is_prime(q) || level % q == 0 {
        bail!("twist modulus {q} must be a prime not dividing the level {level}");
    }
    let eps1 = eps1.or_else(|| loaded.dataset.and_then(|d| d.known_eps1()));
    let a0 = constant
        .or_else(|| {
            loaded
                .dataset
                .map(|d| Complex64::new(d.constant_term(), 0.0))
        })
        .unwrap_or_default();

    let mut r = Report::new();
    r.text("input", loaded.dataset.map_or("file", |d| d.name()))
        .text("weight", seq.weight())
        .text("level", level)
        .text("nebentypus", seq.nebentypus().label())
        .text("X", seq.len())
        .text("q", q);
    r.merge("hecke", &hecke_report(seq, 1e-10));
    // the untwisted FE only has the cut-point form without a constant term
    if eps1.is_none() {
        r.merge("fe", &fe_report(seq, None, None, None, tol)?);
    }
    for chi in nontrivial_characters(q)? {
        r.merge(
            &format!("fe_{}", chi.label()),
            &fe_report(seq, Some(&chi), None, None, tol)?,
        );
    }
    let x = seq.len().min(10_000);
    r.merge("ramanujan", &verify_ramanujan_twist(seq, q, x)?.to_report());
    r.merge("sq", &sq_report(seq, q, eps1, tol, tol)?);
    r.merge("slash", &slash_report(seq, None, q, 1, None, a0, 1e-7)?);
    r.merge("matrix", &matrix_report(level, &matrix_primes(level, 10))?);
    if let Some((xi1, xi2, k)) = loaded.dataset.and_then(|d| d.eisenstein_characters()) {
        r.merge(
            "factorization",
            &eisenstein_l_factorization(&xi1, &xi2, k, 500.min(seq.len()))?.to_report(),
        );
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Eisenstein(a) => {
            let xi1: DirichletCharacter = a.xi1.parse()?;
            let xi2: DirichletCharacter = a.xi2.parse()?;
            let seq = eisenstein_coefficients(&xi1, &xi2, a.k, a.count)?;
            write_sequence(&seq, a.out.as_deref())
        }
        Command::Eta(a) => {
            let seq = eta_product_expansion(&parse_eta_spec(&a.spec)?, a.count)?.to_sequence()?;
            write_sequence(&seq, a.out.as_deref())
        }
        Command::HeckeCheck { input, tol, out } => {
            check_tol(tol)?;
            let r = hecke_report(&input.load()?.seq, tol);
            emit(&r, &out)?;
            Ok(r)
        }
        Command::VerifyFe {
            input,
            twist,
            s_grid,
            y_grid,
            tol,
            out,
        } => {
            check_tol(tol)?;
            let seq = input.load()?.seq;
            let twist = twist.map(|t| t.parse::<DirichletCharacter>()).transpose()?;
            let s = s_grid.map(|t| parse::complex_list(&t)).transpose()?;
            let y = y_grid.map(|t| parse::float_list(&t)).transpose()?;
            let r = fe_report(&seq, twist.as_ref(), s.as_deref(), y.as_deref(), tol)?;
            emit(&r, &out)?;
            Ok(r)
        }
        Command::RamanujanCheck { input, q, x, out } => {
            let seq = input.load()?.seq;
            let r = verify_ramanujan_twist(&seq, q, x.unwrap_or(seq.len()))?.to_report();
            emit(&r, &out)?;
            Ok(r)
        }
        Command::SqCheck {
            input,
            q,
            tol,
            fe_tol,
            eps1,
            out,
        } => {
            check_tol(tol)?;
            check_tol(fe_tol)?;
            let loaded = input.load()?;
            let eps1 = parse_opt_complex(eps1.as_ref())?
                .or_else(|| loaded.dataset.and_then(|d| d.known_eps1()));
            let r = sq_report(&loaded.seq, q, eps1, fe_tol, tol)?;
            emit(&r, &out)?;
            Ok(r)
        }
        Command::SlashCheck {
            input,
            gamma,
            q,
            b,
            points,
            constant,
            tol,
            out,
        } => {
            check_tol(tol)?;
            let loaded = input.load()?;
            let gamma = gamma.map(|g| g.parse::<IntegerMatrix2x2>()).transpose()?;
            let points = points.map(|p| parse::complex_list(&p)).transpose()?;
            let a0 = parse_opt_complex(constant.as_ref())?
                .or_else(|| {
                    loaded
                        .dataset
                        .map(|d| Complex64::new(d.constant_term(), 0.0))
                })
                .unwrap_or_default();
            let q = q.unwrap_or_else(|| default_q(loaded.seq.level()));
            let r = slash_report(&loaded.seq, gamma, q, b, points, a0, tol)?;
            emit(&r, &out)?;
            Ok(r)
        }
        Command::MatrixCheck {
            level,
            primes,
            count,
            out,
        } => {
            let primes = match primes {
                Some(p) => parse::u64_list(&p)?,
                None => matrix_primes(level, count),
            };
            let r = matrix_report(level, &primes)?;
            emit(&r, &out)?;
            Ok(r)
        }
        Command::Report {
            input,
            q,
            tol,
            eps1,
            constant,
            out,
        } => {
            check_tol(tol)?;
            let loaded = input.load()?;
            let eps1 = parse_opt_complex(eps1.as_ref())?;
            let constant = parse_opt_complex(constant.as_ref())?;
            let r = full_report(&loaded, q, tol, eps1, constant)?;
            emit(&r, &out)?;
            Ok(r)
        }
    }
}

/// The first `reason` entry of a failed report, at any nesting depth.
fn failure_reason(r: &Report) -> String {
    r.entries()
        .iter()
        .find(|(k, _)| k == "reason" || k.ends_with(".reason"))
        .map(|(k, v)| match k.rsplit_once('.') {
            Some((section, _)) => format!("{section}:{v}"),
            None => v.clone(),
        })
        .unwrap_or_else(|| "check_failed".to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) if r.passed() => ExitCode::SUCCESS,
        Ok(r) => {
            eprintln!("reason={}", failure_reason(&r));
            ExitCode::from(1)
        }
        Err(e) => {
            let detail = format!("{e:#}").replace('\n', " ");
            eprintln!("reason=config detail={detail}");
            ExitCode::from(2)
        }
    }
}
