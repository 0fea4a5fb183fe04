//! The `pbnsynth` command line.
//!
//! Exit codes: 0 satisfied / success, 1 constraint violated, 2 usage or
//! input error, 3 infeasible, 4 budget exhausted before the requested
//! coverage.

mod config;
mod report;
mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::Options;
pub use svg::render_svg;

use crate::algebra::{fmt_rat, rat_to_f64, ParamId};
use crate::bn::{Pbn, Query, QueryKind};
use crate::error::Error;
use crate::io::{parse_instantiation, parse_number, parse_pbif, parse_query, write_explicit_pmc};
use crate::pla::{partition_query, PartitionConfig};
use crate::pmc::{query_functions, query_prob, Mode};
use crate::synth::{minimal_change_tuning, simple_tuning, Metric, MinimalChangeConfig, PsoConfig};
use crate::transform::{build_pmc, build_query_pmc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSATISFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "pbnsynth", version, about = "Parameter synthesis for parametric Bayesian networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a constraint at one instantiation.
    Check(Flags),
    /// Print the sensitivity function of a query.
    Function(Flags),
    /// Partition the parameter space into accepting/rejecting regions.
    Partition(Flags),
    /// Search for an instantiation satisfying a constraint.
    Tune(Flags),
    /// Write the pMC of a model (or of a query's evidence) in explicit form.
    Export(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// key=value file with defaults for any of the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    query: Option<String>,
    #[arg(long)]
    coverage: Option<String>,
    #[arg(long = "max-regions")]
    max_regions: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// check/function/export: plain | tailored. tune: feasible | ratio |
    /// difference | minimal-change.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// e.g. `p=0.36,q=0.27`
    #[arg(long)]
    instantiation: Option<String>,
    /// euclidean | cd
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// Parameters free to move in minimal-change tuning, comma separated.
    #[arg(long)]
    vary: Option<String>,
}

impl Flags {
    fn options(&self) -> Result<Options, Failure> {
        let mut o = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                Options::from_config(&text).map_err(usage)?
            }
            None => Options::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    o.$f = Some(v.clone());
                }
            )*};
        }
        set!(model, query, coverage, max_regions, seed, mode, out, svg, instantiation, metric, threads, vary);
        Ok(o)
    }
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoAcceptingRegion(_) => EXIT_INFEASIBLE,
            Error::StateSpaceTooLarge(_) | Error::TooManyVertices(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Runs the command line on `args` (program name first), writing results to
/// `out` and diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Check(f) => f.options().and_then(|o| check(&o, out)),
        Command::Function(f) => f.options().and_then(|o| function(&o, out)),
        Command::Partition(f) => f.options().and_then(|o| partition(&o, out)),
        Command::Tune(f) => f.options().and_then(|o| tune(&o, out)),
        Command::Export(f) => f.options().and_then(|o| export(&o, out)),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn load_model(o: &Options) -> Result<Pbn, Failure> {
    let path = o.model.as_ref().ok_or_else(|| usage("--model is required"))?;
    let src = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let b = parse_pbif(&src).map_err(|e| usage(format!("{}:{e}", path.display())))?;
    let report = b.validate();
    if !report.is_ok() {
        return Err(usage(format!("{}: {report}", path.display())));
    }
    Ok(b)
}

fn load_query(b: &Pbn, o: &Options) -> Result<Query, Failure> {
    let src = o.query.as_ref().ok_or_else(|| usage("--query is required"))?;
    parse_query(b, src).map_err(|e| usage(format!("query: {e}")))
}

fn pipeline_mode(o: &Options) -> Result<Mode, Failure> {
    match o.mode.as_deref() {
        None | Some("tailored") => Ok(Mode::EvidenceTailored),
        Some("plain") => Ok(Mode::Plain),
        Some(m) => Err(usage(format!("unknown mode `{m}` (expected plain or tailored)"))),
    }
}

fn coverage(o: &Options) -> Result<PartitionConfig, Failure> {
    let mut cfg = PartitionConfig::default();
    if let Some(c) = &o.coverage {
        cfg.coverage = parse_number(c).ok_or_else(|| usage(format!("malformed coverage `{c}`")))?;
    }
    if let Some(m) = o.max_regions {
        cfg.max_regions = m;
    }
    if let Some(t) = o.threads {
        cfg.threads = t.max(1);
    }
    Ok(cfg)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| usage(e.to_string()))
}

fn check(o: &Options, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = load_model(o)?;
    let q = load_query(&b, o)?;
    let u = match &o.instantiation {
        Some(s) => parse_instantiation(&b, s).map_err(|e| usage(format!("instantiation: {e}")))?,
        None if b.nparams() == 0 => parse_instantiation(&b, "")?,
        None => return Err(usage("--instantiation is required for a parametric model")),
    };
    b.instantiate(&u)?;
    let f = query_prob(&b, &q, pipeline_mode(o)?)?;
    let value = f.eval(u.values())?;
    let conds = query_functions(&b, &q, Mode::EvidenceTailored)?
        .iter()
        .map(|g| g.eval(u.values()))
        .collect::<crate::Result<Vec<_>>>()?;
    let holds = q.holds(&conds[0], conds.get(1));
    emit(out, &format!("{:.9}", rat_to_f64(&value)))?;
    emit(out, &format!("exact {}", fmt_rat(&value)))?;
    emit(out, &format!("{} {}", q.render(&b), if holds { "holds" } else { "is violated" }))?;
    Ok(if holds { EXIT_OK } else { EXIT_UNSATISFIED })
}

fn function(o: &Options, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = load_model(o)?;
    let q = load_query(&b, o)?;
    let f = query_prob(&b, &q, pipeline_mode(o)?)?;
    let names = b.params().names();
    emit(out, &f.render(&names))?;
    let json = report::function_json(&b, &q, &f);
    match &o.out {
        Some(p) => write_file(p, &json)?,
        None => emit(out, &json)?,
    }
    Ok(EXIT_OK)
}

fn partition(o: &Options, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = load_model(o)?;
    let q = load_query(&b, o)?;
    if o.svg.is_some() && b.nparams() > 2 {
        return Err(usage("SVG limited to 2 parameters"));
    }
    let cfg = coverage(o)?;
    let part = partition_query(&b, &q, None, &cfg)?;
    let json = report::partition_json(&b, &part);
    match &o.out {
        Some(p) => write_file(p, &json)?,
        None => emit(out, &json)?,
    }
    if let Some(p) = &o.svg {
        write_file(p, &render_svg(&b, &part)?)?;
    }
    if o.out.is_some() {
        emit(out, &report::partition_summary(&part))?;
    }
    Ok(if part.partial { EXIT_BUDGET } else { EXIT_OK })
}

fn tune(o: &Options, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = load_model(o)?;
    let q = load_query(&b, o)?;
    let mode = o.mode.as_deref().unwrap_or("feasible");
    let result = match mode {
        "feasible" | "ratio" | "difference" => {
            let want = match mode {
                "ratio" => Some(QueryKind::Ratio),
                "difference" => Some(QueryKind::Difference),
                _ => None,
            };
            if want.is_some_and(|k| k != q.kind) {
                return Err(usage(format!("--mode {mode} needs a {mode} query")));
            }
            let pso = PsoConfig { seed: o.seed.unwrap_or(0), ..Default::default() };
            simple_tuning(&b, &q, &pso)?
        }
        "minimal-change" => {
            let u0 = o
                .instantiation
                .as_ref()
                .ok_or_else(|| usage("--instantiation (the original values) is required"))?;
            let u0 = parse_instantiation(&b, u0).map_err(|e| usage(format!("instantiation: {e}")))?;
            let metric = match o.metric.as_deref() {
                None | Some("euclidean") => Metric::Euclidean,
                Some("cd") => Metric::Cd,
                Some(m) => return Err(usage(format!("unknown metric `{m}` (expected euclidean or cd)"))),
            };
            let free = match &o.vary {
                None => None,
                Some(list) => Some(
                    list.split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|n| b.params().find(n).ok_or_else(|| usage(format!("unknown parameter `{n}`"))))
                        .collect::<Result<Vec<ParamId>, _>>()?,
                ),
            };
            let cfg = MinimalChangeConfig { metric, partition: coverage(o)?, free };
            match minimal_change_tuning(&b, &q, &u0, &cfg) {
                Ok(r) => Some(r),
                Err(Error::NoAcceptingRegion(_)) => None,
                Err(e) => return Err(e.into()),
            }
        }
        m => {
            return Err(usage(format!(
                "unknown mode `{m}` (expected feasible, ratio, difference or minimal-change)"
            )))
        }
    };
    let json = report::tuning_json(&b, &q, result.as_ref());
    match &o.out {
        Some(p) => write_file(p, &json)?,
        None => emit(out, &json)?,
    }
    Ok(if result.is_some() { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn export(o: &Options, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = load_model(o)?;
    let order = b.topological_order()?;
    let m = match &o.query {
        Some(_) => {
            let q = load_query(&b, o)?;
            match pipeline_mode(o)? {
                Mode::EvidenceTailored => build_query_pmc(&b, &order, &q.hypothesis, &q.evidence)?,
                Mode::Plain => build_pmc(&b, &order)?,
            }
        }
        None => build_pmc(&b, &order)?,
    };
    match &o.out {
        Some(p) => {
            let mut file = fs::File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            write_explicit_pmc(&m, &mut file)?;
            emit(out, &format!("{} states written to {}", m.num_states(), p.display()))?;
        }
        None => {
            let mut w = out;
            write_explicit_pmc(&m, &mut w)?;
        }
    }
    Ok(EXIT_OK)
}
