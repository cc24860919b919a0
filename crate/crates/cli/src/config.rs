use std::path::Path;

use crate::CliError;

const GLOBAL_KEYS: [&str; 3] = ["json", "jobs", "trunc"];

/// A parsed job file: global flags from `[defaults]` and one argument list
/// per `[[job]]` table, each starting with the subcommand.
#[derive(Debug, Default, PartialEq)]
pub struct JobFile {
    pub defaults: Vec<String>,
    pub jobs: Vec<Vec<String>>,
}

pub fn load(path: &Path) -> Result<JobFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<JobFile, CliError> {
    let doc: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("invalid config: {e}")))?;
    let mut out = JobFile::default();
    for (key, value) in &doc {
        match key.as_str() {
            "defaults" => {
                let t = value.as_table().ok_or_else(|| CliError::Usage("[defaults] must be a table".into()))?;
                for (k, v) in t {
                    if !GLOBAL_KEYS.contains(&k.as_str()) {
                        return Err(CliError::Usage(format!("unknown default `{k}`; allowed: json, jobs, trunc")));
                    }
                    push_flag(&mut out.defaults, k, v)?;
                }
            }
            "job" => {
                let arr = value.as_array().ok_or_else(|| CliError::Usage("use [[job]] tables".into()))?;
                for item in arr {
                    let t = item.as_table().ok_or_else(|| CliError::Usage("use [[job]] tables".into()))?;
                    out.jobs.push(job_args(t)?);
                }
            }
            other => return Err(CliError::Usage(format!("unknown config section `{other}`"))),
        }
    }
    Ok(out)
}

fn job_args(t: &toml::Table) -> Result<Vec<String>, CliError> {
    let command =
        t.get("command").and_then(|v| v.as_str()).ok_or_else(|| CliError::Usage("every [[job]] needs a `command` string".into()))?;
    let mut args = vec![command.to_string()];
    if let Some(sub) = t.get("job") {
        args.push(scalar_text(sub)?);
    }
    for (k, v) in t {
        if k == "command" || k == "job" {
            continue;
        }
        if GLOBAL_KEYS.contains(&k.as_str()) {
            return Err(CliError::Usage(format!("`{k}` belongs in [defaults] or on the command line")));
        }
        push_flag(&mut args, k, v)?;
    }
    Ok(args)
}

fn push_flag(args: &mut Vec<String>, key: &str, v: &toml::Value) -> Result<(), CliError> {
    let flag = format!("--{}", key.replace('_', "-"));
    match v {
        toml::Value::Boolean(true) => args.push(flag),
        toml::Value::Boolean(false) => {}
        other => {
            args.push(flag);
            args.push(scalar_text(other)?);
        }
    }
    Ok(())
}

fn scalar_text(v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(n) => Ok(n.to_string()),
        toml::Value::Array(a) => Ok(a.iter().map(scalar_text).collect::<Result<Vec<_>, _>>()?.join(",")),
        other => Err(CliError::Usage(format!("unsupported config value `{other}`; write rationals as strings"))),
    }
}
