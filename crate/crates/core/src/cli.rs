//! Command-line front end.
//!
//! Exit codes: 0 when everything passes, 1 when a verification check fails
//! (or a numerical step errors out), 2 on usage errors.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cloner::{
    cascade, format_rational, mixture_fidelity, optimal_fidelity_exact, optimal_variance_exact,
    squeezed_variant, to_f64, ClonerSpec, CopyCount, Rational,
};
use crate::error::Error;
use crate::fock::DEFAULT_NODES;
use crate::quadrature::{GaussianMixtureState, SqueezedState};
use crate::verify::{
    verify_bounds, verify_fock, verify_mc, BoundsConfig, FockConfig, McConfig, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cvclone",
    version,
    about = "Optimal N->M Gaussian cloning of coherent states"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal N->M cloning fidelity, MN/(MN+M-N).
    Fidelity {
        n: u32,
        /// Output count, or "inf" for the measurement limit.
        m: CopyCount,
        /// Squeezing of the input family (the matched cloner keeps the same fidelity).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        r: f64,
    },
    /// Optimal N->M noise variance per quadrature, (M-N)/(MN).
    Variance {
        n: u32,
        m: CopyCount,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        r: f64,
    },
    /// Noise of an optimal N->M cloner followed by an optimal M->L cloner.
    Cascade { n: u32, m: u32, l: CopyCount },
    /// Variance and fidelity for every 1 <= N <= NMAX, N <= M <= MMAX.
    Table { n_max: u32, m_max: u32 },
    /// Compare the Fock-space oracle with the closed forms.
    VerifyFock {
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        /// Fixed Fock cutoff; by default chosen per scenario.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Override every check's tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Squeezing used by the squeezed-cloner check.
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        r: f64,
    },
    /// Monte Carlo checks of the measurement bounds.
    VerifyMc {
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Seeds (repeatable).
        #[arg(long = "seed", default_values_t = [42u64, 7, 1001])]
        seeds: Vec<u64>,
        /// Allowed deviation, in standard errors.
        #[arg(long, default_value_t = 5.0)]
        tolerance: f64,
    },
    /// Exact identities between the bound chain and the closed forms.
    VerifyBounds {
        /// Tolerance of the floating-point weight-sweep checks.
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome::fail(EXIT_USAGE, rendered)
            } else {
                Outcome::ok(rendered)
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Fidelity { n, m, r } => fidelity(*n, *m, *r, cli.format),
        Command::Variance { n, m, r } => variance(*n, *m, *r, cli.format),
        Command::Cascade { n, m, l } => cascade_cmd(*n, *m, *l, cli.format),
        Command::Table { n_max, m_max } => table(*n_max, *m_max, cli.format),
        Command::VerifyFock {
            nodes,
            cutoff,
            tolerance,
            r,
        } => {
            let mut config = FockConfig {
                nodes: *nodes,
                cutoff: *cutoff,
                squeezing: *r,
                ..FockConfig::default()
            };
            if let Some(t) = tolerance {
                config = config.with_tolerance(*t);
            }
            verify_fock(&config).map(|rep| report_outcome(&rep, cli.format))
        }
        Command::VerifyMc {
            samples,
            seeds,
            tolerance,
        } => {
            let config = McConfig {
                samples: *samples,
                seeds: seeds.clone(),
                sigmas: *tolerance,
            };
            verify_mc(&config).map(|rep| report_outcome(&rep, cli.format))
        }
        Command::VerifyBounds { tolerance } => {
            let config = BoundsConfig {
                holevo_tolerance: *tolerance,
                ..BoundsConfig::default()
            };
            verify_bounds(&config).map(|rep| report_outcome(&rep, cli.format))
        }
    };
    result.unwrap_or_else(|e| {
        let code = match e {
            Error::InvalidCloner { .. } | Error::Composition { .. } | Error::Domain(_) => {
                EXIT_USAGE
            }
            _ => EXIT_CHECK_FAILED,
        };
        Outcome::fail(code, format!("error: {e}\n"))
    })
}

/// Decimal with at most six places, trailing zeros removed.
pub fn short_decimal(x: f64) -> String {
    trim_zeros(format!("{x:.6}"))
}

/// Decimal with twelve significant digits, trailing zeros removed.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    trim_zeros(format!("{x:.decimals$}"))
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

fn text_value(exact: Rational) -> String {
    let decimal = short_decimal(to_f64(exact));
    if exact.is_integer() {
        decimal
    } else {
        format!("{decimal} ({})", format_rational(exact))
    }
}

fn count_json(m: CopyCount) -> Value {
    match m {
        CopyCount::Finite(m) => json!(m),
        CopyCount::Unbounded => json!("inf"),
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn fidelity(n: u32, m: CopyCount, r: f64, format: Format) -> crate::Result<Outcome> {
    let exact = optimal_fidelity_exact(n, m)?;
    let value = if r == 0.0 {
        to_f64(exact)
    } else {
        let cloner = squeezed_variant(n, m, r)?;
        let center = SqueezedState::new(Default::default(), r);
        mixture_fidelity(&GaussianMixtureState::new(center, cloner.noise))?.value()
    };
    let out = match format {
        Format::Text => format!(
            "{}\n",
            if r == 0.0 {
                text_value(exact)
            } else {
                short_decimal(value)
            }
        ),
        Format::Csv => format!("n,m,r,fidelity\n{n},{m},{r},{}\n", sig12(value)),
        Format::Json => json_line(&json!({
            "n": n, "m": count_json(m), "r": r,
            "fidelity": value, "exact": format_rational(exact),
        })),
    };
    Ok(Outcome::ok(out))
}

fn variance(n: u32, m: CopyCount, r: f64, format: Format) -> crate::Result<Outcome> {
    let exact = optimal_variance_exact(n, m)?;
    let noise = squeezed_variant(n, m, r)?.noise;
    let out = match format {
        Format::Text if r == 0.0 => format!("{}\n", text_value(exact)),
        Format::Text => format!(
            "var_x {}\nvar_p {}\n",
            short_decimal(noise.var_x),
            short_decimal(noise.var_p)
        ),
        Format::Csv => format!(
            "n,m,r,var_x,var_p\n{n},{m},{r},{},{}\n",
            sig12(noise.var_x),
            sig12(noise.var_p)
        ),
        Format::Json => json_line(&json!({
            "n": n, "m": count_json(m), "r": r,
            "var_x": noise.var_x, "var_p": noise.var_p, "exact": format_rational(exact),
        })),
    };
    Ok(Outcome::ok(out))
}

fn cascade_cmd(n: u32, m: u32, l: CopyCount, format: Format) -> crate::Result<Outcome> {
    let composed = cascade(&ClonerSpec::opt(n, m)?, &ClonerSpec::opt(m, l)?)?;
    let composed_exact = composed
        .exact
        .expect("optimal cloners carry exact noise")
        .variance;
    let optimal_exact = optimal_variance_exact(n, l)?;
    let matches = composed_exact == optimal_exact;
    let out = match format {
        Format::Text => format!(
            "composed {}\noptimal {}\nmatch {matches}\n",
            text_value(composed_exact),
            text_value(optimal_exact)
        ),
        Format::Csv => format!(
            "n,m,l,composed,optimal,match\n{n},{m},{l},{},{},{matches}\n",
            sig12(composed.noise.var_x),
            sig12(to_f64(optimal_exact))
        ),
        Format::Json => json_line(&json!({
            "n": n, "m": m, "l": count_json(l),
            "composed": composed.noise.var_x, "optimal": to_f64(optimal_exact),
            "composed_exact": format_rational(composed_exact),
            "optimal_exact": format_rational(optimal_exact),
            "match": matches,
        })),
    };
    Ok(Outcome::ok(out))
}

/// One row of the variance/fidelity table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub n: u32,
    pub m: u32,
    pub variance: Rational,
    pub fidelity: Rational,
}

pub fn table_rows(n_max: u32, m_max: u32) -> crate::Result<Vec<TableRow>> {
    if n_max < 1 || n_max > m_max {
        return Err(Error::Domain(format!(
            "table needs 1 <= NMAX <= MMAX, got NMAX={n_max}, MMAX={m_max}"
        )));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for m in n..=m_max {
            rows.push(TableRow {
                n,
                m,
                variance: optimal_variance_exact(n, CopyCount::Finite(m))?,
                fidelity: optimal_fidelity_exact(n, CopyCount::Finite(m))?,
            });
        }
    }
    Ok(rows)
}

fn table(n_max: u32, m_max: u32, format: Format) -> crate::Result<Outcome> {
    let rows = table_rows(n_max, m_max)?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("n,m,variance,fidelity\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.n,
                    r.m,
                    sig12(to_f64(r.variance)),
                    sig12(to_f64(r.fidelity))
                );
            }
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "{:>4} {:>4} {:>16} {:>16} {:>10}",
                "n", "m", "variance", "fidelity", "exact f"
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:>4} {:>4} {:>16} {:>16} {:>10}",
                    r.n,
                    r.m,
                    sig12(to_f64(r.variance)),
                    sig12(to_f64(r.fidelity)),
                    format_rational(r.fidelity)
                );
            }
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n, "m": r.m,
                        "variance": to_f64(r.variance), "fidelity": to_f64(r.fidelity),
                    })
                })
                .collect();
            out = json_line(&Value::Array(rows));
        }
    }
    Ok(Outcome::ok(out))
}

fn report_outcome(report: &VerificationReport, format: Format) -> Outcome {
    let mut out = String::new();
    match format {
        Format::Json => out = json_line(&serde_json::to_value(report).expect("reports serialize")),
        Format::Csv => {
            out.push_str("name,expected,observed,tolerance,pass\n");
            for c in &report.checks {
                let _ = writeln!(
                    out,
                    "\"{}\",{:e},{:e},{:e},{}",
                    c.name.replace('"', "\"\""),
                    c.expected,
                    c.observed,
                    c.tolerance,
                    c.pass
                );
            }
        }
        Format::Text => {
            for c in &report.checks {
                let _ = writeln!(
                    out,
                    "{} {}: expected {:e}, observed {:e}, tolerance {:e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.expected,
                    c.observed,
                    c.tolerance
                );
            }
            let passed = report.checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(
                out,
                "overall: {} ({passed}/{} checks)",
                if report.overall { "PASS" } else { "FAIL" },
                report.checks.len()
            );
        }
    }
    Outcome {
        code: if report.overall {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        },
        stdout: out,
        stderr: String::new(),
    }
}
