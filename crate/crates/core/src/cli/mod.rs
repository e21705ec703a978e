//! The `openfol` command line.
//!
//! Exit codes: 0 success or valid, 1 the logic answered no (rejected,
//! countermodel, counterexample, corpus failure), 2 usage or input error,
//! 3 inconclusive.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::corpus::{run_corpus, CorpusError, CorpusReport};
use crate::kernel::{check_proof, Mode, ProofVerdict, Sequent};
use crate::search::{
    audit_all, audit_rule, find_countermodel, AuditReport, AuditStatus, Bounds, CountermodelResult,
    SearchStatus,
};
use crate::semantics::Profile;
use crate::syntax::{is_closed, parse_formula_with, parse_proof_script, Arities, Rule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

const DEFAULT_MAX_SIZE: usize = 3;
const DEFAULT_AUDIT_SIZE: usize = 2;
const CORPUS_ENV: &str = "OPENFOL_CORPUS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Color {
    Auto,
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(name = "openfol", version, about = "Proof checker and model search for open classical logic")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// classical, open or minimal; overrides a script's pragma [default: open]
    #[arg(long, global = true)]
    pub mode: Option<Mode>,
    /// total, null-strict, partial or null-padded
    #[arg(long, global = true, default_value = "total")]
    pub profile: Profile,
    /// Largest domain searched [default: 3; 2 for audit]
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub output: Output,
    #[arg(long, global = true, value_enum, default_value = "auto")]
    pub color: Color,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a proof script
    Check { path: PathBuf },
    /// Look for a countermodel to a sequent
    Search {
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        conclude: String,
        /// Give up after this many models
        #[arg(long)]
        max_models: Option<u64>,
    },
    /// Check rules against every small model
    Audit {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        rule: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Run the bundled corpus
    Corpus {
        /// Manifest file or directory [default: $OPENFOL_CORPUS, else corpus]
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

/// Effective settings, echoed in JSON output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub mode: Mode,
    pub profile: Profile,
    pub max_size: usize,
    pub output: Output,
    pub color: bool,
}

impl CliConfig {
    fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.name(),
            "profile": self.profile.name(),
            "max_size": self.max_size,
            "output": match self.output { Output::Human => "human", Output::Json => "json" },
            "color": self.color,
        })
    }

    fn paint(&self, text: &str, good: bool) -> String {
        if self.color {
            let code = if good { 32 } else { 31 };
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

/// Parse `args` and run. `terminal` says whether `out` is a terminal, which
/// decides `--color auto`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, terminal: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let color = match cli.global.color {
        Color::On => true,
        Color::Off => false,
        Color::Auto => terminal && std::env::var_os("NO_COLOR").is_none(),
    };
    let default_size = match cli.command {
        Command::Audit { .. } => DEFAULT_AUDIT_SIZE,
        _ => DEFAULT_MAX_SIZE,
    };
    let config = CliConfig {
        mode: cli.global.mode.unwrap_or_default(),
        profile: cli.global.profile,
        max_size: cli.global.max_size.unwrap_or(default_size),
        output: cli.global.output,
        color,
    };
    let result = match &cli.command {
        Command::Check { path } => cmd_check(path, cli.global.mode, config),
        Command::Search {
            premises,
            conclude,
            max_models,
        } => cmd_search(premises, conclude, *max_models, &config),
        Command::Audit { rule, all } => cmd_audit(rule.as_deref(), *all, &config),
        Command::Corpus { manifest } => {
            let path = manifest
                .clone()
                .or_else(|| std::env::var_os(CORPUS_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("corpus"));
            cmd_corpus(&path, cli.global.mode, &config)
        }
    };
    match result {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(message) => {
            let _ = writeln!(err, "openfol: {message}");
            EXIT_USAGE
        }
    }
}

type Outcome = Result<(i32, String), String>;

fn render(config: &CliConfig, json: Value, human: impl FnOnce() -> String) -> String {
    match config.output {
        Output::Json => format!("{json}\n"),
        Output::Human => human(),
    }
}

fn with_config(mut v: Value, config: &CliConfig) -> Value {
    v["config"] = config.to_json();
    v
}

pub fn cmd_check(path: &Path, mode: Option<Mode>, mut config: CliConfig) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let script = parse_proof_script(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    config.mode = Mode::effective(mode, &script);
    let verdict = check_proof(&script, config.mode);
    let code = if verdict.accepted { EXIT_OK } else { EXIT_NO };
    let file = path.display().to_string();
    let json = with_config(verdict_json(&file, &verdict), &config);
    Ok((code, render(&config, json, || check_human(&file, &verdict, &config))))
}

pub fn sequent_json(s: &Sequent) -> Value {
    json!({
        "premises": s.premises.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "conclusion": s.conclusion.to_string(),
        "global_identity": s.global_identity,
    })
}

/// The JSON form of a verdict, without the configuration echo.
pub fn verdict_json(file: &str, v: &ProofVerdict) -> Value {
    let lines: Vec<Value> = v
        .per_line
        .iter()
        .map(|l| match &l.result {
            Ok(()) => json!({"n": l.number, "ok": true}),
            Err(e) => json!({"n": l.number, "ok": false, "error": e.describe()}),
        })
        .collect();
    let mut out = json!({
        "file": file,
        "mode": v.mode.name(),
        "accepted": v.accepted,
        "lines": lines,
        "uses_identity_intro": v.uses_identity_intro,
        "uses_global_assumption": v.uses_global_assumption,
    });
    if let Some(s) = &v.sequent {
        out["sequent"] = sequent_json(s);
    }
    out
}

fn check_human(file: &str, v: &ProofVerdict, config: &CliConfig) -> String {
    let status = if v.accepted { "accepted" } else { "rejected" };
    let mut s = format!("{file}: {} under {} mode\n", config.paint(status, v.accepted), v.mode);
    for l in &v.per_line {
        match &l.result {
            Ok(()) => s += &format!("  ({}) ok\n", l.number),
            Err(e) => s += &format!("  ({}) {}\n", l.number, config.paint(&e.describe(), false)),
        }
    }
    if let Some(seq) = &v.sequent {
        s += &format!("sequent: {seq}\n");
    }
    s
}

pub fn cmd_search(premises: &[String], conclude: &str, max_models: Option<u64>, config: &CliConfig) -> Outcome {
    let mut arities = Arities::new();
    let mut parse = |text: &str| {
        let f = parse_formula_with(text, &mut arities).map_err(|e| format!("`{text}`: {e}"))?;
        if is_closed(&f) {
            Ok(f)
        } else {
            Err(format!("`{text}` has free variables"))
        }
    };
    let premises = premises.iter().map(|p| parse(p)).collect::<Result<Vec<_>, _>>()?;
    let sequent = Sequent::new(premises, parse(conclude)?);
    let mut bounds = Bounds::new(config.max_size);
    if let Some(cap) = max_models {
        bounds = bounds.with_max_models(cap);
    }
    let result = find_countermodel(&sequent, &bounds, config.profile).map_err(|e| e.to_string())?;
    let code = match result.status {
        SearchStatus::ValidUpToBound => EXIT_OK,
        SearchStatus::Countermodel => EXIT_NO,
        SearchStatus::Inconclusive => EXIT_INCONCLUSIVE,
    };
    let mut json = with_config(result.to_json(), config);
    json["sequent"] = json!(sequent.to_string());
    Ok((code, render(config, json, || search_human(&sequent, &result, config))))
}

fn search_human(s: &Sequent, r: &CountermodelResult, config: &CliConfig) -> String {
    let good = r.status == SearchStatus::ValidUpToBound;
    let mut out = format!(
        "{s}: {} ({} models, size <= {}, {})\n",
        config.paint(r.status.name(), good),
        r.models_examined,
        config.max_size,
        config.profile
    );
    if let Some(m) = &r.model {
        out += &format!("{}\n", m.to_json_string());
    }
    out
}

pub fn cmd_audit(rule: Option<&str>, all: bool, config: &CliConfig) -> Outcome {
    let bounds = Bounds::new(config.max_size);
    let reports = if all {
        audit_all(&bounds, config.profile)
    } else {
        let name = rule.ok_or("give --rule or --all")?;
        let rule: Rule = name.parse().map_err(|e: crate::syntax::UnknownRule| e.to_string())?;
        audit_rule(rule, &bounds, config.profile).map(|r| vec![r])
    }
    .map_err(|e| e.to_string())?;
    let sound = reports.iter().all(|r| r.status == AuditStatus::SoundUpToBound);
    let json = with_config(
        json!({
            "reports": reports.iter().map(AuditReport::to_json).collect::<Vec<_>>(),
            "sound": sound,
        }),
        config,
    );
    let code = if sound { EXIT_OK } else { EXIT_NO };
    Ok((code, render(config, json, || audit_human(&reports, config))))
}

fn audit_human(reports: &[AuditReport], config: &CliConfig) -> String {
    let mut out = String::new();
    for r in reports {
        let good = r.status == AuditStatus::SoundUpToBound;
        out += &format!(
            "{:<4} {} ({} instances, {} models, size <= {}, {})\n",
            r.rule.name(),
            config.paint(r.status.name(), good),
            r.instances_checked,
            r.models,
            config.max_size,
            r.profile
        );
        if let Some(w) = &r.witness {
            for p in &w.premises {
                out += &format!("    premise:    {p}\n");
            }
            out += &format!("    conclusion: {}\n", w.conclusion);
            if let Some(c) = &w.eigen {
                out += &format!("    eigen name: {c}\n");
            }
            out += &format!("    model:      {}\n", w.model.to_json_string());
        }
    }
    out
}

pub fn cmd_corpus(path: &Path, mode: Option<Mode>, config: &CliConfig) -> Outcome {
    let modes = match mode {
        Some(m) => vec![m],
        None => Mode::ALL.to_vec(),
    };
    let report = match run_corpus(path, &modes) {
        Ok(r) => r,
        Err(e @ CorpusError::MissingEntry(_)) => return Err(format!("MissingEntry: {e}")),
        Err(e) => return Err(e.to_string()),
    };
    let code = if report.passed() { EXIT_OK } else { EXIT_NO };
    let mut json = with_config(report.to_json(), config);
    json["manifest"] = json!(path.display().to_string());
    Ok((code, render(config, json, || corpus_human(&report, config))))
}

fn corpus_human(report: &CorpusReport, config: &CliConfig) -> String {
    let width = |f: fn(&crate::corpus::Row) -> usize| report.rows.iter().map(f).max().unwrap_or(0);
    let (wi, wc, we) = (
        width(|r| r.id.len()).max(2),
        width(|r| r.check.chars().count()).max(5),
        width(|r| r.expected.len()).max(8),
    );
    let mut out = format!("{:<wi$}  {:<wc$}  {:<we$}  {:<4}  OBSERVED\n", "ID", "CHECK", "EXPECTED", "PASS");
    for r in &report.rows {
        let pad = wc - r.check.chars().count();
        let mark = config.paint(if r.pass { "ok  " } else { "FAIL" }, r.pass);
        out += &format!(
            "{:<wi$}  {}{}  {:<we$}  {mark}  {}\n",
            r.id,
            r.check,
            " ".repeat(pad),
            r.expected,
            r.observed
        );
    }
    let failed = report.rows.iter().filter(|r| !r.pass).count();
    out += &format!(
        "{} entries, {} checks, {} failed\n",
        report.entries.len(),
        report.rows.len(),
        failed
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["openfol"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err, false);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["check", "/nonexistent/x.lfd"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["search", "--conclude", "F("]).0, EXIT_USAGE);
        assert_eq!(run_args(&["audit", "--rule", "FOO"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["audit"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["search", "--conclude", "a = a", "--max-size", "9"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--mode", "modal", "search", "--conclude", "a = a"]).0, EXIT_USAGE);
    }

    #[test]
    fn search_exit_codes() {
        let (code, out, _) = run_args(&["search", "--conclude", "a = a", "--max-size", "1"]);
        assert_eq!(code, EXIT_NO);
        assert!(out.contains("COUNTERMODEL"));
        assert_eq!(run_args(&["search", "--conclude", "(a = a) | ~(a = a)"]).0, EXIT_OK);
        let capped = run_args(&["search", "--conclude", "(a = a) | ~(a = a)", "--max-models", "2"]);
        assert_eq!(capped.0, EXIT_INCONCLUSIVE);
    }

    #[test]
    fn color_follows_flag() {
        let (_, plain, _) = run_args(&["search", "--conclude", "a = a", "--max-size", "1"]);
        assert!(!plain.contains('\x1b'));
        let (_, colored, _) = run_args(&["--color", "on", "search", "--conclude", "a = a", "--max-size", "1"]);
        assert!(colored.contains("\x1b[31m"));
    }
}
