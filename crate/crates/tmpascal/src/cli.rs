//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure (or a corrupt cache, I/O
//! failure), 2 usage or parse error, 3 resource budget exhausted.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use tmpascal_core::approximant::{ApproximantFamily, EnclosureStatus};
use tmpascal_core::triangle::{
    boundedness_probe, check_bounds_and_symmetry, check_growth, coefficient_row, coefficient_rows, lemma1_on_row,
};
use tmpascal_core::verify::{
    lemma5_suite_on, operator_suite_on, residual_scan, residual_suite, theorem_value_suite_on, ResidualForm,
};
use tmpascal_core::{Alpha, Budget, CoefficientSource, Dyadic, Error as CoreError, InitSpec, VerificationReport};

use crate::cache::{build_table_cached, CacheError, RowCache};
use crate::{csvio, svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tmpascal", version, about = "Exact Thue-Morse Pascal triangle toolkit")]
pub struct Cli {
    /// Directory for cached depth rows.
    #[arg(long, global = true, env = "TMP_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Memory budget in megabytes.
    #[arg(long, global = true, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..))]
    pub mem_budget_mb: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CSV window `k,n,value` of the Thue-Morse table.
    Triangle(TriangleArgs),
    /// Coefficient row a(n, .) as one comma-separated line, or CSV of rows 1..=n.
    Coeffs(CoeffsArgs),
    /// Exact f_n values, sample CSV, or an enclosure of the limit.
    Eval(EvalArgs),
    /// Run a verification suite; exits 1 on FAIL.
    Verify(VerifyArgs),
    /// CSV window of the table seeded with the centered Sturmian word.
    Sturmian(SturmianArgs),
    /// SVG plot of f_n for several levels.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct TriangleArgs {
    #[arg(long = "k-max", default_value_t = 16)]
    pub k_max: u64,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    #[arg(long = "k-min", default_value_t = 0)]
    pub k_min: u64,
    #[arg(long = "n-min", default_value_t = 0)]
    pub n_min: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub n: u32,
    /// Emit `n,l,value` rows for every level up to n.
    #[arg(long)]
    pub csv: bool,
    /// Read the row off the table instead of the row recurrences.
    #[arg(long = "from-table")]
    pub from_table: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, default_value_t = 12)]
    pub n: u32,
    /// Evaluation points (`p`, `p/q` with q a power of two, `p/2^e`).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// Enclose f_inf(x) instead of evaluating f_n; n is the level cap.
    #[arg(long)]
    pub limit: bool,
    #[arg(long, default_value = "1/1024")]
    pub tol: String,
    /// Sample f_n at every level-n node in `a:b` and write `x,f` CSV.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Add a decimal `approx` column with this many places.
    #[arg(long)]
    pub decimals: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma1,
    Bounds,
    Growth,
    Lemma5,
    Theorem,
    Residual,
    Operator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Half,
    Doubled,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "m-max", default_value_t = 16)]
    pub m_max: u64,
    #[arg(long = "k-max")]
    pub k_max: Option<u64>,
    /// Levels for the residual suite, `a:b` or a comma list.
    #[arg(long)]
    pub levels: Option<String>,
    /// Residual points.
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<String>,
    #[arg(long, value_enum, default_value_t = FormArg::Half)]
    pub form: FormArg,
    /// Residual CSV destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SturmianArgs {
    /// Slope `p/q` in [0, 1].
    #[arg(long)]
    pub alpha: String,
    #[arg(long = "k-max", default_value_t = 64)]
    pub k_max: u64,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Print running maxima of |S^k_n| at k = 1, 2, 4, ... instead of the window.
    #[arg(long)]
    pub probe: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, default_value = "4,6,12")]
    pub levels: String,
    #[arg(long, default_value = "0:8", allow_hyphen_values = true)]
    pub interval: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Input the user got wrong after argument parsing succeeded.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Exit code for a failed command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    if err.downcast_ref::<CacheError>().is_some() {
        return EXIT_FAIL;
    }
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Resource { .. }) => EXIT_BUDGET,
        Some(_) => EXIT_USAGE,
        None => EXIT_FAIL,
    }
}

pub fn parse_dyadic(s: &str) -> anyhow::Result<Dyadic> {
    Dyadic::from_str(s.trim()).map_err(|e| usage(format!("{s:?}: {e}")))
}

pub fn parse_interval(s: &str) -> anyhow::Result<(Dyadic, Dyadic)> {
    let (a, b) = s.split_once(':').ok_or_else(|| usage(format!("interval {s:?} is not of the form a:b")))?;
    let (a, b) = (parse_dyadic(a)?, parse_dyadic(b)?);
    if a > b {
        return Err(usage(format!("interval {s:?} is empty")));
    }
    Ok((a, b))
}

/// `a:b` (inclusive) or `a,b,c`.
pub fn parse_levels(s: &str) -> anyhow::Result<Vec<u32>> {
    let bad = || usage(format!("levels {s:?}: expected a:b or a comma list of positive integers"));
    let levels: Vec<u32> = if let Some((a, b)) = s.split_once(':') {
        let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..=b).collect()
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<anyhow::Result<_>>()?
    };
    if levels.is_empty() || levels.contains(&0) {
        return Err(bad());
    }
    Ok(levels)
}

pub fn parse_alpha(s: &str) -> anyhow::Result<Alpha> {
    let r = BigRational::from_str(s.trim()).map_err(|_| usage(format!("alpha {s:?} is not a rational p/q")))?;
    Ok(Alpha::new(r)?)
}

struct Ctx {
    budget: Budget,
    cache: Option<RowCache>,
}

impl Ctx {
    fn family(&self, n_max: u32, reach: &Dyadic) -> anyhow::Result<ApproximantFamily> {
        if n_max == 0 {
            return Err(usage("levels start at 1"));
        }
        let units = reach.ceil().max(BigInt::from(1));
        let k_max: u64 = (units << (n_max - 1)).try_into().map_err(|_| CoreError::Resource {
            requested: u64::MAX,
            budget: self.budget.max_cells,
        })?;
        self.budget.check((k_max + 1).saturating_mul(2 * (n_max as u64 + 1)))?;
        let table = build_table_cached(&InitSpec::thue_morse(), k_max, n_max, self.budget, self.cache.as_ref())?;
        Ok(ApproximantFamily::from_table(&table))
    }
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    }
}

pub fn execute(cli: Cli) -> anyhow::Result<i32> {
    let cache = match &cli.cache_dir {
        Some(dir) => Some(RowCache::open(dir)?),
        None => None,
    };
    let ctx = Ctx { budget: Budget::from_megabytes(cli.mem_budget_mb), cache };
    match cli.command {
        Command::Triangle(a) => triangle(&ctx, a),
        Command::Coeffs(a) => coeffs(&ctx, a),
        Command::Eval(a) => eval(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
        Command::Sturmian(a) => sturmian(&ctx, a),
        Command::Plot(a) => plot(&ctx, a),
    }
}

fn triangle(ctx: &Ctx, a: TriangleArgs) -> anyhow::Result<i32> {
    let table = build_table_cached(&InitSpec::thue_morse(), a.k_max.max(1), a.n.max(1), ctx.budget, ctx.cache.as_ref())?;
    let cells = table.window(a.k_min..a.k_max.saturating_add(1), a.n_min..a.n.saturating_add(1));
    csvio::write_window(sink(&a.out)?, cells)?;
    Ok(EXIT_OK)
}

fn coeffs(ctx: &Ctx, a: CoeffsArgs) -> anyhow::Result<i32> {
    if a.n == 0 {
        return Err(usage("coefficient rows start at n = 1"));
    }
    let mut out = sink(&a.out)?;
    if a.csv {
        csvio::write_coefficients(out, &coefficient_rows(a.n, ctx.budget)?)?;
    } else {
        let source = if a.from_table { CoefficientSource::FromTable } else { CoefficientSource::FromRecurrence };
        let row = coefficient_row(a.n, source, ctx.budget)?;
        let line: Vec<String> = row.values().iter().map(ToString::to_string).collect();
        writeln!(out, "{}", line.join(","))?;
        out.flush()?;
    }
    Ok(EXIT_OK)
}

fn eval(ctx: &Ctx, a: EvalArgs) -> anyhow::Result<i32> {
    if a.n == 0 {
        return Err(usage("levels start at 1"));
    }
    let xs = a.x.iter().map(|s| parse_dyadic(s)).collect::<anyhow::Result<Vec<_>>>()?;
    if xs.is_empty() == a.interval.is_none() {
        return Err(usage("give either --x or --interval"));
    }
    let mut out = sink(&a.out)?;

    if let Some(interval) = &a.interval {
        let (lo, hi) = parse_interval(interval)?;
        let family = ctx.family(a.n, &hi)?;
        let samples = grid_samples(&family, a.n, &lo, &hi)?;
        csvio::write_samples(out, &samples, a.decimals)?;
        return Ok(EXIT_OK);
    }

    let reach = xs.iter().cloned().fold(Dyadic::one(), Dyadic::max);
    let family = ctx.family(a.n, &reach)?;
    if a.limit {
        let tol = parse_dyadic(&a.tol)?;
        for x in &xs {
            let e = family.enclose_limit(x, &tol)?;
            let status = match e.status {
                EnclosureStatus::Converged => "converged",
                EnclosureStatus::LevelCapReached => "level-cap",
            };
            writeln!(
                out,
                "{} level={} width={} status={status}",
                e.interval,
                e.interval.level_reached,
                e.interval.width()
            )?;
        }
    } else {
        for x in &xs {
            writeln!(out, "{}", family.eval_fn(a.n, x)?)?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

/// `lo`, every level-`n` node strictly inside, and `hi`.
fn grid_samples(family: &ApproximantFamily, n: u32, lo: &Dyadic, hi: &Dyadic) -> anyhow::Result<Vec<(Dyadic, Dyadic)>> {
    let e = n as u64 - 1;
    let first = lo.floor_scaled(e) + 1u8;
    let last = -(-hi).floor_scaled(e) - 1u8;
    let mut xs = vec![lo.clone()];
    let mut k = first;
    while k <= last {
        xs.push(Dyadic::new(k.clone(), e));
        k += 1u8;
    }
    if hi != lo {
        xs.push(hi.clone());
    }
    xs.into_iter().map(|x| Ok((x.clone(), family.eval_fn(n, &x)?))).collect()
}

fn verify(ctx: &Ctx, a: VerifyArgs) -> anyhow::Result<i32> {
    let report = match a.suite {
        Suite::Lemma1 => {
            let n = a.n.unwrap_or(10);
            let k_max = a.k_max.unwrap_or(1 << 14);
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let table = build_table_cached(&InitSpec::thue_morse(), k_max.max(1), n, ctx.budget, ctx.cache.as_ref())?;
            let mut report = VerificationReport::new(format!("lemma1 n<={n} k<={k_max}"));
            for depth in 1..=n {
                let coeffs = coefficient_row(depth, CoefficientSource::FromRecurrence, ctx.budget)?;
                report.merge(lemma1_on_row(table.row(depth), &coeffs));
            }
            report
        }
        Suite::Bounds => {
            let n = a.n.unwrap_or(12);
            let mut report = VerificationReport::new(format!("bounds n<={n}"));
            for depth in 1..=n {
                report.merge(check_bounds_and_symmetry(depth, ctx.budget)?);
            }
            report
        }
        Suite::Growth => {
            let n = a.n.unwrap_or(12);
            if n < 3 {
                return Err(usage("growth suite needs --n >= 3"));
            }
            let mut report = VerificationReport::new(format!("growth 3<=n<={n}"));
            for depth in 3..=n {
                report.merge(check_growth(depth, ctx.budget)?);
            }
            report
        }
        Suite::Lemma5 => {
            let n = a.n.unwrap_or(6);
            let family = ctx.family(n.max(1) + 1, &Dyadic::from_i64(2 * a.m_max as i64 + 2))?;
            lemma5_suite_on(&family, n.max(1), a.m_max)?
        }
        Suite::Theorem => {
            let n = a.n.unwrap_or(10);
            let family = ctx.family(n.max(1), &Dyadic::from_i64(2 * a.m_max as i64 + 2))?;
            theorem_value_suite_on(&family, a.m_max, n.max(1))?
        }
        Suite::Residual => {
            let levels = parse_levels(a.levels.as_deref().unwrap_or("4:12"))?;
            let xs = if a.x.is_empty() {
                ["1/2", "1", "3/2", "7/4", "2", "3", "4"].iter().map(|s| parse_dyadic(s)).collect::<anyhow::Result<Vec<_>>>()?
            } else {
                a.x.iter().map(|s| parse_dyadic(s)).collect::<anyhow::Result<Vec<_>>>()?
            };
            let (lo, hi) = (*levels.iter().min().unwrap(), *levels.iter().max().unwrap());
            if levels != (lo..=hi).collect::<Vec<_>>() {
                return Err(usage("residual levels must be a contiguous range"));
            }
            if xs.iter().any(Dyadic::is_negative) {
                return Err(usage("residual points must be non-negative"));
            }
            let form = match a.form {
                FormArg::Half => ResidualForm::Half,
                FormArg::Doubled => ResidualForm::Doubled,
            };
            let reach = xs.iter().cloned().fold(Dyadic::one(), Dyadic::max).mul_pow2(1);
            let family = ctx.family(hi, &reach)?;
            if let Some(path) = &a.out {
                let records = residual_scan(&family, lo..=hi, &xs, form)?;
                csvio::write_residuals(sink(&Some(path.clone()))?, &records)?;
            }
            residual_suite(&family, lo..=hi, &xs)?
        }
        Suite::Operator => {
            let n = a.n.unwrap_or(12);
            let k_max = a.k_max.unwrap_or(256);
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let table = build_table_cached(&InitSpec::thue_morse(), k_max.max(1), n, ctx.budget, ctx.cache.as_ref())?;
            let family = ApproximantFamily::from_table(&table);
            operator_suite_on(&family, k_max, n as usize, ctx.budget)?
        }
    };
    println!("{report}");
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn sturmian(ctx: &Ctx, a: SturmianArgs) -> anyhow::Result<i32> {
    let alpha = parse_alpha(&a.alpha)?;
    let init = InitSpec::sturmian_w(&alpha);
    let mut out = sink(&a.out)?;
    if a.probe {
        writeln!(out, "k,running_max")?;
        for p in boundedness_probe(&init, a.n, a.k_max, ctx.budget)? {
            writeln!(out, "{},{}", p.k, p.running_max)?;
        }
        out.flush()?;
    } else {
        let table = build_table_cached(&init, a.k_max.max(1), a.n.max(1), ctx.budget, ctx.cache.as_ref())?;
        csvio::write_window(out, table.window(0..a.k_max + 1, 0..a.n + 1))?;
    }
    Ok(EXIT_OK)
}

fn plot(ctx: &Ctx, a: PlotArgs) -> anyhow::Result<i32> {
    let levels = parse_levels(&a.levels)?;
    let (lo, hi) = parse_interval(&a.interval)?;
    let n_max = *levels.iter().max().ok_or_else(|| anyhow!("no levels"))?;
    let family = ctx.family(n_max, &hi)?;
    let series = levels
        .iter()
        .map(|&n| Ok(svg::Series { label: format!("f_{n}"), points: grid_samples(&family, n, &lo, &hi)? }))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut out = sink(&a.out)?;
    out.write_all(svg::render(&series).as_bytes())?;
    out.flush()?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_forms() {
        assert_eq!(parse_levels("4:6").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse_levels("4,6,12").unwrap(), vec![4, 6, 12]);
        assert!(parse_levels("0:3").is_err());
        assert!(parse_levels("x").is_err());
    }

    #[test]
    fn intervals() {
        let (a, b) = parse_interval("-2:1/2").unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("-2".into(), "1/2".into()));
        assert!(parse_interval("3:1").is_err());
        assert!(parse_interval("1/3:1").is_err());
    }

    #[test]
    fn error_classes() {
        assert_eq!(exit_code(&usage("x")), EXIT_USAGE);
        assert_eq!(exit_code(&CoreError::Resource { requested: 2, budget: 1 }.into()), EXIT_BUDGET);
        assert_eq!(exit_code(&parse_alpha("5/3").unwrap_err()), EXIT_USAGE);
        assert_eq!(exit_code(&anyhow!("io")), EXIT_FAIL);
    }

    #[test]
    fn samples_include_endpoints() {
        let family = ApproximantFamily::build(3, &Dyadic::from_i64(2), Budget::default()).unwrap();
        let s = grid_samples(&family, 3, &"1/8".parse().unwrap(), &"3/4".parse().unwrap()).unwrap();
        let xs: Vec<String> = s.iter().map(|(x, _)| x.to_string()).collect();
        assert_eq!(xs, ["1/8", "1/4", "1/2", "3/4"]);
    }
}
