//! Batch command-line runner for the `densq` engine.
//!
//! [`run`] parses arguments, executes one job or every job of a config
//! file, and prints aligned tables or versioned JSON reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod table;

use std::fmt;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use densq_core::CoreError;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Cli;
use crate::commands::{execute, Context};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Core(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(CoreError::MultipleParams) => EXIT_USAGE,
            CliError::Core(e) if e.is_internal() => EXIT_INTERNAL,
            CliError::Core(_) => EXIT_DOMAIN,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

/// Versioned JSON report of one job.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema: u32,
    pub engine: String,
    pub command: String,
    /// The job's arguments as parsed, without output and threading options.
    pub config: Value,
    pub result: Value,
    pub elapsed_ms: u64,
}

pub fn engine_version() -> String {
    format!("densq {}", env!("CARGO_PKG_VERSION"))
}

/// Runs the command line `argv` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(&argv, &mut out, &mut err)
}

/// [`run`] with explicit output streams.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match parse(argv, out, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let Some(path) = cli.config.clone() else {
        if cli.command.is_none() {
            let _ = writeln!(err, "usage error: a subcommand or --config is required (see --help)");
            return EXIT_USAGE;
        }
        return emit(&[run_job(&cli)], cli.json, out, err);
    };
    let file = match config::load(&path) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return e.exit_code();
        }
    };
    let rest = strip_config(argv);
    let mut lines: Vec<Vec<String>> = Vec::new();
    if cli.command.is_some() {
        let mut a = vec![argv[0].clone()];
        a.extend(file.defaults.iter().cloned());
        a.extend(rest);
        lines.push(a);
    } else if file.jobs.is_empty() {
        let _ = writeln!(err, "usage error: config file lists no [[job]] and no subcommand was given");
        return EXIT_USAGE;
    } else {
        for job in &file.jobs {
            let mut a = vec![argv[0].clone()];
            a.extend(job.iter().cloned());
            a.extend(file.defaults.iter().cloned());
            a.extend(rest.iter().cloned());
            lines.push(a);
        }
    }
    let mut parsed = Vec::new();
    for a in &lines {
        match parse(a, out, err) {
            Ok(c) => parsed.push(c),
            Err(code) => return code,
        }
    }
    let json = parsed.iter().any(|c| c.json);
    let results: Vec<JobResult> = parsed.iter().map(run_job).collect();
    emit(&results, json, out, err)
}

/// Arguments after the program name with any `--config` option removed.
fn strip_config(argv: &[String]) -> Vec<String> {
    let mut v = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--config" {
            skip = true;
        } else if !a.starts_with("--config=") {
            v.push(a.clone());
        }
    }
    v
}

fn parse(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Result<Cli, i32> {
    match Cli::try_parse_from(argv) {
        Ok(c) => Ok(c),
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = write!(out, "{e}");
                Err(EXIT_OK)
            }
            _ => {
                let _ = write!(err, "{e}");
                Err(EXIT_USAGE)
            }
        },
    }
}

struct JobResult {
    code: i32,
    doc: Option<ReportDoc>,
    text: String,
    error: Option<String>,
}

fn run_job(cli: &Cli) -> JobResult {
    let Some(cmd) = cli.command.clone() else {
        return JobResult { code: EXIT_USAGE, doc: None, text: String::new(), error: Some("usage error: missing subcommand".into()) };
    };
    let ctx = Context { trunc: cli.trunc };
    let pool = match cli.jobs {
        Some(0) => {
            return JobResult {
                code: EXIT_USAGE,
                doc: None,
                text: String::new(),
                error: Some("usage error: --jobs must be at least 1".into()),
            }
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => return JobResult { code: EXIT_INTERNAL, doc: None, text: String::new(), error: Some(format!("thread pool: {e}")) },
    };
    let start = Instant::now();
    let outcome = pool.install(|| catch_unwind(AssertUnwindSafe(|| execute(&cmd, &ctx))));
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match outcome {
        Ok(Ok(o)) => {
            let mut config = serde_json::to_value(&cmd).unwrap_or(Value::Null);
            if let (Value::Object(m), Some(t)) = (&mut config, cli.trunc) {
                m.insert("trunc".into(), Value::String(format!("{},{},{}", t.order, t.degree, t.freq)));
            }
            let doc =
                ReportDoc { schema: 1, engine: engine_version(), command: cmd.name().to_string(), config, result: o.result, elapsed_ms };
            JobResult { code: o.code, doc: Some(doc), text: o.text, error: None }
        }
        Ok(Err(e)) => JobResult { code: e.exit_code(), doc: None, text: String::new(), error: Some(e.to_string()) },
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            JobResult { code: EXIT_INTERNAL, doc: None, text: String::new(), error: Some(format!("internal error: {msg}")) }
        }
    }
}

fn emit(results: &[JobResult], json: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    for r in results {
        if let Some(e) = &r.error {
            let _ = writeln!(err, "{e}");
        }
    }
    let docs: Vec<&ReportDoc> = results.iter().filter_map(|r| r.doc.as_ref()).collect();
    if json {
        let body =
            if results.len() == 1 { docs.first().map(serde_json::to_string_pretty) } else { Some(serde_json::to_string_pretty(&docs)) };
        if let Some(Ok(s)) = body {
            let _ = writeln!(out, "{s}");
        }
    } else {
        for r in results {
            if let Some(d) = &r.doc {
                let _ = writeln!(out, "# {}", d.command);
                let _ = write!(out, "{}", r.text);
            }
        }
    }
    results.iter().map(|r| r.code).max().unwrap_or(EXIT_OK)
}
