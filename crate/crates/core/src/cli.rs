//! Command-line front end. [`run`] returns the exit code and report text so that
//! tests can drive it without spawning a process.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::certifier::{
    certify_5fold_s7, certify_general, certify_s5, derive_contact_invariants, render_certificate, C1Declaration,
    Target,
};
use crate::filling::filling_invariants;
use crate::format::{parse_input, parse_openbook_file, render_openbook_file, InputFile, OpenBookFile};
use crate::mcg::Sign;
use crate::numeric::{
    builtin_collar, check_collar, check_profile, default_profile, density_threshold, gdt_check_symplectic,
    min_density, CollarPair, DensityModel, GdtProfile, NuShape, ProfileSpec, Report,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "obcert", version, about = "Open-book calculus and contact embedding certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Pos,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NuArg {
    Bump,
    Zero,
    Step,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology, filling and d3 invariants of an open book.
    Invariants { file: PathBuf },
    /// Embedding certificate for an open book, five-fold or facts file.
    Certify {
        file: PathBuf,
        #[arg(long)]
        target: String,
    },
    /// Connected sum of two open books.
    Sum { first: PathBuf, second: PathBuf },
    /// Stabilization of an open book.
    Stabilize {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "pos")]
        sign: SignArg,
    },
    /// Check an h1,h2 profile (built-in unless a CSV is given).
    VerifyProfile {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check an f,g collar pair (built-in unless a CSV is given).
    VerifyCollar {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        c: f64,
    },
    /// Smallest K with K*A + B > 0 on every sample.
    KThreshold {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Finite-difference symplecticity of the generalized Dehn twist.
    DehnCheck {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "bump")]
        profile: NuArg,
    },
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(i32, String), InputError>;

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli.command) {
        Ok(done) => done,
        Err(InputError(msg)) => (EXIT_INPUT, format!("error: {msg}\n")),
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn with_context<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, InputError> {
    r.map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_openbook(path: &Path) -> Result<OpenBookFile, InputError> {
    let mut file = with_context(path, parse_openbook_file(&read(path)?))?;
    if file.book.label().is_empty() {
        file.book = file.book.with_label(stem(path));
    }
    Ok(file)
}

fn label_or(label: &str, path: &Path) -> String {
    if label.is_empty() {
        stem(path)
    } else {
        label.to_string()
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Invariants { file } => invariants(&file),
        Command::Certify { file, target } => certify(&file, target.parse()?),
        Command::Sum { first, second } => sum(&first, &second),
        Command::Stabilize { file, sign } => {
            let f = load_openbook(&file)?;
            let sign = if sign == SignArg::Pos { Sign::Pos } else { Sign::Neg };
            let out = OpenBookFile { book: f.book.stabilize(sign), c1: f.c1 };
            Ok((EXIT_PASS, render_openbook_file(&out)))
        }
        Command::VerifyProfile { file, epsilon, samples, tol } => {
            let (p, source) = match &file {
                Some(path) => (with_context(path, ProfileSpec::from_csv(&read(path)?))?, path.display().to_string()),
                None => (default_profile(epsilon, samples)?, "builtin".to_string()),
            };
            let report = check_profile(&p, tol);
            let head = format!(
                "profile: {source}\nepsilon: {}\nsamples: {}\ntol: {tol:e}\nmin W (r>0): {:e}\n",
                p.epsilon,
                p.r.len(),
                report.min_positive
            );
            Ok(numeric_report(head, &report, "r"))
        }
        Command::VerifyCollar { file, epsilon, samples, tol, a, b, c } => {
            let (cp, source) = match &file {
                Some(path) => (with_context(path, CollarPair::from_csv(&read(path)?, a))?, path.display().to_string()),
                None => (builtin_collar(a, b, c, epsilon, samples)?, "builtin".to_string()),
            };
            let report = check_collar(&cp, tol);
            let head = format!(
                "collar: {source}\na={} b={} c={}\nepsilon: {}\nsamples: {}\ntol: {tol:e}\nmin f'+g': {:e}\n",
                cp.a,
                cp.b,
                cp.c,
                cp.epsilon,
                cp.t.len(),
                report.min_positive
            );
            Ok(numeric_report(head, &report, "t"))
        }
        Command::KThreshold { model, grid } => {
            let m = match model.as_str() {
                "builtin-positive" => DensityModel::builtin_positive(grid)?,
                "builtin-negative" => DensityModel::builtin_negative(grid)?,
                path => {
                    let path = Path::new(path);
                    with_context(path, DensityModel::from_csv(&read(path)?))?
                }
            };
            let k0 = density_threshold(&m);
            let mut out = format!("model: {}\nsamples: {}\nK0 = {k0}\n", model, m.samples.len());
            if let Some(s) = m.argmax().filter(|_| k0 > 0.0) {
                out.push_str(&format!("attained at theta={} t={}\n", s.theta, s.t));
            }
            out.push_str(&format!("min K*A+B at K0+1e-6: {:e}\n", min_density(&m, k0 + 1e-6)));
            Ok((EXIT_PASS, out))
        }
        Command::DehnCheck { dim, samples, tol, seed, profile } => {
            let shape = match profile {
                NuArg::Bump => NuShape::Bump,
                NuArg::Zero => NuShape::Zero,
                NuArg::Step => NuShape::SquareWave { cells: 2000 },
            };
            let p = GdtProfile::new(dim, 1.0, shape)?;
            let r = gdt_check_symplectic(&p, dim, samples, tol, seed)?;
            let verdict = if r.passed() { "pass" } else { "fail" };
            let out = format!(
                "profile: {}\ndim: {dim}\nsamples: {samples}\nseed: {seed}\ntol: {tol:e}\nmax error: {:e}\nresult: {verdict}\n",
                format!("{profile:?}").to_lowercase(),
                r.max_error
            );
            Ok((if r.passed() { EXIT_PASS } else { EXIT_FAIL }, out))
        }
    }
}

fn numeric_report<C: std::fmt::Display>(mut out: String, report: &Report<C>, var: &str) -> (i32, String) {
    out.push_str(&format!("violations: {}\n", report.violations.len()));
    for v in &report.violations {
        out.push_str(&format!(
            "violation: {} at sample {} ({var}={}, value={:e})\n",
            v.condition, v.index, v.at, v.value
        ));
    }
    if report.passed() {
        out.push_str("result: pass\n");
        (EXIT_PASS, out)
    } else {
        out.push_str("result: fail\n");
        (EXIT_FAIL, out)
    }
}

fn invariants(path: &Path) -> Outcome {
    let f = load_openbook(path)?;
    let ob = &f.book;
    let h1 = ob.first_homology();
    let fill = filling_invariants(ob);
    let c1 = match derive_contact_invariants(ob, f.c1) {
        Ok(d) => d.c1.token().to_string(),
        Err(_) => "undetermined".to_string(),
    };
    let opt = |v: Option<i64>| v.map_or("n/a".to_string(), |v| v.to_string());
    let mut out = format!("input: {}\npage: {}\nword: {}\n", ob.label(), ob.page(), ob.monodromy());
    out.push_str(&format!("{h1}\nc1: {c1}\n"));
    out.push_str(&format!(
        "filling: chi={}, sigma={}, c1^2={}, h2={}\n",
        fill.chi,
        opt(fill.sigma),
        opt(fill.c1_squared),
        fill.h2_rank.map_or("n/a".to_string(), |v| v.to_string())
    ));
    out.push_str(&format!("d3: {}\n", fill.d3.map_or("undefined".to_string(), |d| d.to_string())));
    Ok((EXIT_PASS, out))
}

fn certify(path: &Path, target: Target) -> Outcome {
    let cert = match with_context(path, parse_input(&read(path)?))? {
        InputFile::OpenBook(mut f) => {
            if target != Target::S5 {
                return Err(InputError("open books describe 3-manifolds; use --target s5".into()));
            }
            if f.book.label().is_empty() {
                f.book = f.book.with_label(stem(path));
            }
            let desc = derive_contact_invariants(&f.book, f.c1)?;
            certify_s5(&f.book, &desc)?
        }
        InputFile::FiveFold(f) => {
            if target != Target::S7 {
                return Err(InputError("five-manifolds embed in S7; use --target s7".into()));
            }
            certify_5fold_s7(&f.description, f.c1_zero, &label_or(&f.label, path))?
        }
        InputFile::Facts(f) => certify_general(&f.facts, target, &label_or(&f.label, path))?,
    };
    Ok((cert.verdict.exit_code(), render_certificate(&cert)))
}

fn sum(first: &Path, second: &Path) -> Outcome {
    let (x, y) = (load_openbook(first)?, load_openbook(second)?);
    let zero_like = |f: &OpenBookFile| match f.c1 {
        C1Declaration::Zero => true,
        C1Declaration::Auto => f.book.first_homology().is_trivial(),
        C1Declaration::Nonzero => false,
    };
    let c1 = if x.c1 == C1Declaration::Nonzero || y.c1 == C1Declaration::Nonzero {
        C1Declaration::Nonzero
    } else if x.c1 == C1Declaration::Auto && y.c1 == C1Declaration::Auto {
        C1Declaration::Auto
    } else if zero_like(&x) && zero_like(&y) {
        C1Declaration::Zero
    } else {
        C1Declaration::Auto
    };
    let out = OpenBookFile { book: x.book.connected_sum(&y.book), c1 };
    Ok((EXIT_PASS, render_openbook_file(&out)))
}
