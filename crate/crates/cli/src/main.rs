use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;

use chowq_cli::{overall_status, parse_job_with, parse_runs, render, run_job, Config, Format, JobDefaults, Status};

/// Quadratic forms in characteristic 2 and Chow torsion of their quadrics.
#[derive(Debug, Parser)]
#[command(name = "chowq", version)]
struct Args {
    /// Field descriptor, e.g. `F2((s))((t))`.
    #[arg(long)]
    field: Option<String>,
    /// Form expression; may be repeated.
    #[arg(long)]
    form: Vec<String>,
    /// Comma-separated computations: invariants, witt, clifford, pfister,
    /// chow2, chow3, all.
    #[arg(long)]
    run: Option<String>,
    /// Emit JSON lines instead of text.
    #[arg(long)]
    json: bool,
    /// Exit with status 2 when any verdict is undecided.
    #[arg(long)]
    strict: bool,
    /// Degree bound of the brute-force cross-check.
    #[arg(long)]
    degree_bound: Option<u32>,
    /// Node budget of the brute-force cross-check.
    #[arg(long)]
    budget: Option<u64>,
    /// TOML file with defaults; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Job file with `field`, `form`, `run`, ... statements.
    #[arg(long)]
    batch: Option<PathBuf>,
    /// Worker threads for batch evaluation.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed of the randomized algebra checks.
    #[arg(long)]
    seed: Option<u64>,
}

const FORM_PREFIX: &str = "form ";

fn positive<T: PartialOrd + Default>(name: &str, v: Option<T>) -> anyhow::Result<Option<T>> {
    match v {
        Some(x) if x <= T::default() => bail!("--{name} must be positive"),
        other => Ok(other),
    }
}

fn run(args: Args) -> anyhow::Result<Status> {
    let config = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Config::parse(&text).with_context(|| format!("in {}", p.display()))?
        }
        None => Config::default(),
    };
    let mut defaults = JobDefaults {
        field: args.field.clone().or(config.field.clone()),
        ..JobDefaults::default()
    };
    if let Some(r) = config.run.as_deref() {
        defaults.runs = parse_runs(r).map_err(|bad| anyhow::anyhow!("unknown computation `{bad}` in config"))?;
    }
    if config.json == Some(true) {
        defaults.format = Format::Json;
    }
    let l = &mut defaults.limits;
    if let Some(v) = positive("degree-bound", config.degree_bound)? {
        l.degree_bound = v;
    }
    if let Some(v) = positive("budget", config.budget)? {
        l.budget = v;
    }
    if let Some(v) = positive("max-degree", config.max_degree)? {
        l.tower.max_degree = v;
    }
    if let Some(v) = positive("max-depth", config.max_depth)? {
        l.tower.max_depth = v;
    }
    if let Some(s) = config.seed {
        defaults.seed = s;
    }

    let mut text = match &args.batch {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => String::new(),
    };
    if !text.is_empty() && !text.ends_with('\n') {
        text.push('\n');
    }
    let batch_lines = text.lines().count();
    for f in &args.form {
        text.push_str(FORM_PREFIX);
        text.push_str(f);
        text.push('\n');
    }
    let mut job = parse_job_with(&text, &defaults).map_err(|mut e| {
        if e.line > batch_lines {
            let flag = &args.form[e.line - batch_lines - 1];
            e.line = 1;
            e.column = e.column.saturating_sub(FORM_PREFIX.len()).max(1);
            anyhow::anyhow!("--form `{flag}`: {e}")
        } else {
            match &args.batch {
                Some(p) => anyhow::anyhow!("{}:{e}", p.display()),
                None => anyhow::anyhow!("{e}"),
            }
        }
    })?;
    if job.forms.is_empty() {
        bail!("no forms given; use --form or --batch");
    }

    // Flags override both the config file and job statements.
    if let Some(r) = &args.run {
        job.runs = parse_runs(r).map_err(|bad| anyhow::anyhow!("unknown computation `{bad}`"))?;
    }
    if args.json {
        job.format = Format::Json;
    }
    if let Some(v) = positive("degree-bound", args.degree_bound)? {
        job.limits.degree_bound = v;
    }
    if let Some(v) = positive("budget", args.budget)? {
        job.limits.budget = v;
    }
    if let Some(s) = args.seed {
        job.seed = s;
    }
    let workers = positive("workers", args.workers.or(config.workers))?.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });

    let reports = run_job(&job, workers)?;
    print!("{}", render(&reports, job.format)?);
    let status = overall_status(&reports);
    let strict = args.strict || config.strict == Some(true);
    Ok(match status {
        Status::Undecided if !strict => Status::Ok,
        s => s,
    })
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Undecided) => ExitCode::from(2),
        Ok(Status::Error) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
