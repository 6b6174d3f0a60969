//! Command-line front end. Exit codes: 0 success, 1 failure or disagreement,
//! 2 usage error.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bijections::{
    all_partitions, flat_partition_forward, flat_partition_inverse, gould_forward, gould_inverse,
    phi, SetPartition,
};
use crate::models::{self, ModelError, ModelId};
use crate::oracle::{Oracle, OracleError};
use crate::perm::{Class, ClassName, Permutation, Stat};
use crate::recurrences::Perturbation;
use crate::series::{BivariateSeries, Rational};
use crate::sources::{self, Method, SourceError};
use crate::table::DistributionTable;
use crate::verify::{self, Group, VerifyConfig, VerifyError};

/// Relative `--output` paths are resolved against this directory when set.
pub const OUTPUT_DIR_ENV: &str = "PERMSTAT_OUTPUT_DIR";

/// Oracle capacity once the user opts into slow enumeration.
pub const SLOW_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BijectionName {
    Phi,
    Gould,
    FlatPartition,
}

#[derive(Debug, Parser)]
#[command(
    name = "permstat",
    version,
    about = "Statistics on increasing and flattened permutations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file atomically instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Raise the enumeration capacity above 9.
    #[arg(long, global = true)]
    pub i_know_this_is_slow: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distribution table of a statistic over a class.
    Table {
        #[arg(long)]
        class: Class,
        #[arg(long)]
        stat: Stat,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value = "all")]
        method: Method,
    },
    /// Total of a statistic over each length.
    Popularity {
        #[arg(long)]
        class: Class,
        #[arg(long)]
        stat: Stat,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value = "all")]
        method: Method,
    },
    /// Run the cross-checks.
    Verify {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = models::DEFAULT_ORDER)]
        order: usize,
        /// Run a single group of checks.
        #[arg(long)]
        only: Option<Group>,
        /// Test hook: `FAMILY:N:K[:DELTA]` adds DELTA to a recurrence cell.
        #[arg(long)]
        perturb: Option<Perturbation>,
    },
    /// Trace a bijection over its domain at length n, or on one input.
    Bijection {
        #[arg(long, value_enum)]
        name: BijectionName,
        #[arg(long)]
        n: Option<usize>,
        /// A permutation, or a set partition such as `{1,4}/{2,3}` to run the inverse.
        #[arg(long)]
        input: Option<String>,
    },
    /// EGF coefficients of a model.
    Series {
        #[arg(long)]
        model: ModelId,
        #[arg(long, default_value_t = models::DEFAULT_ORDER)]
        order: usize,
    },
}

/// Outcome of a command before it is written out.
struct Emitted {
    body: String,
    code: i32,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<SourceError> for Failure {
    fn from(e: SourceError) -> Self {
        match e {
            SourceError::Model(m) => m.into(),
            SourceError::Oracle(o) => o.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Usage(format!("{e}; pass --i-know-this-is-slow to raise it"))
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::OrderTooLarge(_) | ModelError::Unknown(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Oracle(o) => o.into(),
            VerifyError::Model(m) => m.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let oracle = if cli.i_know_this_is_slow {
        Oracle::with_limit(SLOW_LIMIT)
    } else {
        Oracle::default()
    };
    let result = match &cli.command {
        Command::Table {
            class,
            stat,
            n_max,
            method,
        } => cmd_table(
            class,
            *stat,
            *n_max,
            *method,
            &oracle,
            cli.format.unwrap_or(Format::Csv),
        ),
        Command::Popularity {
            class,
            stat,
            n_max,
            method,
        } => cmd_popularity(
            class,
            *stat,
            *n_max,
            *method,
            &oracle,
            cli.format.unwrap_or(Format::Csv),
        ),
        Command::Verify {
            n_max,
            order,
            only,
            perturb,
        } => cmd_verify(
            VerifyConfig {
                n_max: *n_max,
                order: *order,
                only: *only,
                perturbation: *perturb,
                oracle,
            },
            cli.format.unwrap_or(Format::Json),
        ),
        Command::Bijection { name, n, input } => cmd_bijection(
            *name,
            *n,
            input.as_deref(),
            &oracle,
            cli.format.unwrap_or(Format::Text),
        ),
        Command::Series { model, order } => {
            cmd_series(*model, *order, cli.format.unwrap_or(Format::Text))
        }
    };
    match result {
        Ok(emitted) => {
            if let Err(e) = emit(&emitted.body, cli.output.as_deref(), out) {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return 1;
            }
            emitted.code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes to a temporary file beside the target, then renames it into place.
fn write_atomic(path: &Path, body: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(body: &str, output: Option<&Path>, out: &mut dyn Write) -> io::Result<()> {
    match output {
        Some(path) => write_atomic(&resolve_output(path), body),
        None => out.write_all(body.as_bytes()),
    }
}

fn json_string(v: &Value) -> String {
    // serde_json's default map is ordered, so keys come out sorted.
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn stat_json(stat: Option<Stat>) -> Value {
    stat.map_or(Value::Null, |s| Value::String(s.to_string()))
}

fn render_table(t: &DistributionTable, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("n,k,count\n");
            for (n, row) in t.rows().iter().enumerate() {
                for (k, c) in row.iter().enumerate() {
                    s.push_str(&format!("{n},{k},{c}\n"));
                }
            }
            s
        }
        Format::Json => json_string(&json!({
            "class": t.class.to_string(),
            "stat": stat_json(t.stat),
            "rows": t.rows().iter().map(|r| r.iter().map(BigUint::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Text => t
            .rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(BigUint::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
                    + "\n"
            })
            .collect(),
    }
}

fn disagreement_body(
    diffs: &[sources::Disagreement],
    class: &Class,
    stat: Stat,
    format: Format,
) -> String {
    match format {
        Format::Json => json_string(&json!({
            "class": class.to_string(),
            "stat": stat.to_string(),
            "disagreements": diffs.iter().map(|d| json!({
                "left": d.left.name(),
                "right": d.right.name(),
                "n": d.mismatch.n,
                "k": d.mismatch.k,
                "left_value": d.mismatch.left.to_string(),
                "right_value": d.mismatch.right.to_string(),
            })).collect::<Vec<_>>(),
        })),
        _ => diffs
            .iter()
            .map(|d| format!("disagreement class={class} stat={stat}: {d}\n"))
            .collect(),
    }
}

fn cmd_table(
    class: &Class,
    stat: Stat,
    n_max: usize,
    method: Method,
    oracle: &Oracle,
    format: Format,
) -> Result<Emitted, Failure> {
    let (table, diffs) = sources::agreed_table(class, stat, method, n_max, oracle)?;
    if !diffs.is_empty() {
        return Ok(Emitted {
            body: disagreement_body(&diffs, class, stat, format),
            code: 1,
        });
    }
    Ok(Emitted {
        body: render_table(&table, format),
        code: 0,
    })
}

fn cmd_popularity(
    class: &Class,
    stat: Stat,
    n_max: usize,
    method: Method,
    oracle: &Oracle,
    format: Format,
) -> Result<Emitted, Failure> {
    let (table, diffs) = sources::agreed_table(class, stat, method, n_max, oracle)?;
    if !diffs.is_empty() {
        return Ok(Emitted {
            body: disagreement_body(&diffs, class, stat, format),
            code: 1,
        });
    }
    let row = table.popularity();
    let body = match format {
        Format::Csv => {
            let mut s = String::from("n,total\n");
            for (n, t) in row.totals.iter().enumerate() {
                s.push_str(&format!("{n},{t}\n"));
            }
            s
        }
        Format::Json => json_string(&json!({
            "class": class.to_string(),
            "stat": stat.to_string(),
            "totals": row.totals.iter().map(BigUint::to_string).collect::<Vec<_>>(),
        })),
        Format::Text => row.totals.iter().map(|t| format!("{t}\n")).collect(),
    };
    Ok(Emitted { body, code: 0 })
}

fn cmd_verify(cfg: VerifyConfig, format: Format) -> Result<Emitted, Failure> {
    let report = verify::run(&cfg)?;
    let code = if report.passed() { 0 } else { 1 };
    let first = report.first_failure().map(|f| f.to_string());
    let body = match format {
        Format::Json => {
            let mut v = report.to_json();
            v["first_failure"] = first.map_or(Value::Null, Value::String);
            json_string(&v)
        }
        Format::Csv => {
            let mut s = String::from("group,name,passed\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{},\"{}\",{}\n",
                    c.group,
                    c.name.replace('"', "'"),
                    c.passed
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                if c.passed {
                    s.push_str(&format!("PASS [{}] {}\n", c.group, c.name));
                } else {
                    s.push_str(&format!(
                        "FAIL [{}] {}\n  expected: {}\n  computed: {}\n",
                        c.group, c.name, c.expected, c.computed
                    ));
                }
            }
            let failed = report.failures().count();
            s.push_str(&format!(
                "{} checks, {} failed\n",
                report.checks.len(),
                failed
            ));
            if let Some(f) = first {
                s.push_str(&format!("first failure: {f}\n"));
            }
            s
        }
    };
    Ok(Emitted { body, code })
}

/// One traced element of a bijection.
struct Trace {
    input: String,
    image: String,
    check: String,
    ok: bool,
}

fn trace_phi(p: &Permutation) -> Trace {
    let n = p.len();
    match phi(p) {
        Ok(image) => {
            let (before, after) = (p.stat(Stat::Run), image.stat(Stat::Run));
            let complement = if n == 0 { 0 } else { n + 1 - before };
            let involution = phi(&image).as_ref() == Ok(p);
            Trace {
                input: p.to_string(),
                image: image.to_string(),
                check: format!("runs {before}->{after} (={n}+1-{before}), involution {involution}"),
                ok: after == complement && involution,
            }
        }
        Err(e) => Trace {
            input: p.to_string(),
            image: String::new(),
            check: e.to_string(),
            ok: false,
        },
    }
}

fn trace_gould(p: &Permutation) -> Trace {
    match gould_forward(p) {
        Ok(b) => {
            let ok = gould_inverse(&b).as_ref() == Ok(p);
            Trace {
                input: p.to_string(),
                image: b.to_string(),
                check: format!("roundtrip {ok}"),
                ok,
            }
        }
        Err(e) => Trace {
            input: p.to_string(),
            image: String::new(),
            check: e.to_string(),
            ok: false,
        },
    }
}

fn trace_gould_inverse(b: &SetPartition) -> Trace {
    match gould_inverse(b) {
        Ok(p) => {
            let ok = gould_forward(&p).as_ref() == Ok(b);
            Trace {
                input: b.to_string(),
                image: p.to_string(),
                check: format!("roundtrip {ok}"),
                ok,
            }
        }
        Err(e) => Trace {
            input: b.to_string(),
            image: String::new(),
            check: e.to_string(),
            ok: false,
        },
    }
}

fn trace_flat(p: &Permutation) -> Trace {
    match flat_partition_forward(p) {
        Ok(b) => {
            let ok = &flat_partition_inverse(&b) == p;
            Trace {
                input: p.to_string(),
                image: b.to_string(),
                check: format!("roundtrip {ok}"),
                ok,
            }
        }
        Err(e) => Trace {
            input: p.to_string(),
            image: String::new(),
            check: e.to_string(),
            ok: false,
        },
    }
}

fn trace_flat_inverse(b: &SetPartition) -> Trace {
    let p = flat_partition_inverse(b);
    let ok = flat_partition_forward(&p).as_ref() == Ok(b);
    Trace {
        input: b.to_string(),
        image: p.to_string(),
        check: format!("roundtrip {ok}"),
        ok,
    }
}

fn cmd_bijection(
    name: BijectionName,
    n: Option<usize>,
    input: Option<&str>,
    oracle: &Oracle,
    format: Format,
) -> Result<Emitted, Failure> {
    let traces: Vec<Trace> = match input {
        Some(text) if text.trim_start().starts_with('{') || text.trim() == "∅" => {
            let b: SetPartition = text.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            match name {
                BijectionName::Gould => vec![trace_gould_inverse(&b)],
                BijectionName::FlatPartition => vec![trace_flat_inverse(&b)],
                BijectionName::Phi => return Err(Failure::Usage("phi takes a permutation".into())),
            }
        }
        Some(text) => {
            let p: Permutation = text.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            if n.is_some_and(|n| n != p.len()) {
                return Err(Failure::Usage(format!(
                    "input {p} does not have length {}",
                    n.unwrap_or(0)
                )));
            }
            match name {
                BijectionName::Phi => vec![trace_phi(&p)],
                BijectionName::Gould => vec![trace_gould(&p)],
                BijectionName::FlatPartition => vec![trace_flat(&p)],
            }
        }
        None => {
            let n = n.ok_or_else(|| Failure::Usage("pass --n or --input".into()))?;
            let class = match name {
                BijectionName::Phi => Class::of(ClassName::Increasing),
                BijectionName::Gould => Class::of(ClassName::Increasing).and(ClassName::ValEqDes),
                BijectionName::FlatPartition => Class::of(ClassName::Flattened),
            };
            let domain: Vec<Permutation> = oracle.enumerate(n, &class)?.collect();
            let mut traces: Vec<Trace> = domain
                .iter()
                .filter(|p| !(name == BijectionName::Gould && p.is_empty()))
                .map(|p| match name {
                    BijectionName::Phi => trace_phi(p),
                    BijectionName::Gould => trace_gould(p),
                    BijectionName::FlatPartition => trace_flat(p),
                })
                .collect();
            // The partition maps must also be onto their stated codomains.
            let codomain = match name {
                BijectionName::Gould if n >= 1 => Some(
                    all_partitions(n)
                        .into_iter()
                        .filter(|b| b.last_block_is_singleton())
                        .count(),
                ),
                BijectionName::FlatPartition if n >= 1 => Some(all_partitions(n - 1).len()),
                _ => None,
            };
            if let Some(size) = codomain {
                let images: std::collections::BTreeSet<&str> =
                    traces.iter().map(|t| t.image.as_str()).collect();
                let ok = images.len() == size && traces.len() == size;
                traces.push(Trace {
                    input: format!("#domain={}", traces.len()),
                    image: format!("#images={}", images.len()),
                    check: format!("codomain size {size}"),
                    ok,
                });
            }
            traces
        }
    };
    let ok = traces.iter().all(|t| t.ok);
    let body = match format {
        Format::Text => traces
            .iter()
            .map(|t| format!("{} -> {}  {}\n", t.input, t.image, t.check))
            .collect(),
        Format::Csv => {
            let mut s = String::from("input,image,check,ok\n");
            for t in &traces {
                s.push_str(&format!(
                    "\"{}\",\"{}\",\"{}\",{}\n",
                    t.input, t.image, t.check, t.ok
                ));
            }
            s
        }
        Format::Json => json_string(&json!({
            "bijection": format!("{name:?}").to_ascii_lowercase(),
            "passed": ok,
            "pairs": traces.iter().map(|t| json!({
                "input": t.input,
                "image": t.image,
                "check": t.check,
                "ok": t.ok,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Emitted {
        body,
        code: if ok { 0 } else { 1 },
    })
}

fn coefficient_strings(series: &BivariateSeries, n: usize) -> Vec<String> {
    let a = series.egf_coeff(n);
    if a.is_zero() {
        return vec!["0".into()];
    }
    a.coeffs().iter().map(Rational::to_string).collect()
}

fn cmd_series(model: ModelId, order: usize, format: Format) -> Result<Emitted, Failure> {
    let series = models::model(model, order)?;
    let rows: Vec<Vec<String>> = (0..=order)
        .map(|n| coefficient_strings(&series, n))
        .collect();
    let body = match format {
        Format::Text => rows.iter().map(|r| r.join(" ") + "\n").collect(),
        Format::Csv => {
            let mut s = String::from("n,k,coefficient\n");
            for (n, r) in rows.iter().enumerate() {
                for (k, c) in r.iter().enumerate() {
                    s.push_str(&format!("{n},{k},{c}\n"));
                }
            }
            s
        }
        Format::Json => json_string(&json!({
            "model": model.name(),
            "order": order,
            "coefficients": rows,
        })),
    };
    Ok(Emitted { body, code: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["permstat"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn series_text() {
        let (code, out, _) = call(&["series", "--model", "I_val", "--order", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(5), Some("16 88 8"));
        let (_, out, _) = call(&["series", "--model", "A_alt", "--order", "8"]);
        assert_eq!(
            out.lines().collect::<Vec<_>>().join(","),
            "1,1,1,2,5,8,33,48,279"
        );
        let (_, out, _) = call(&["series", "--model", "F_rlm", "--order", "0"]);
        assert_eq!(out, "1\n");
    }

    #[test]
    fn table_formats() {
        let (code, out, _) = call(&[
            "table",
            "--class",
            "increasing",
            "--stat",
            "val",
            "--n-max",
            "0",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "n,k,count\n0,0,1\n");
        let (_, out, _) = call(&[
            "table",
            "--class",
            "increasing",
            "--stat",
            "val",
            "--n-max",
            "3",
            "--format",
            "json",
        ]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rows"][3], json!(["4", "2"]));
        assert_eq!(v["stat"], "val");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["table", "--class", "nope", "--stat", "val"]).0, 2);
        assert_eq!(
            call(&[
                "table",
                "--class",
                "alternating",
                "--stat",
                "val",
                "--method",
                "series"
            ])
            .0,
            2
        );
        assert_eq!(
            call(&[
                "table",
                "--class",
                "increasing",
                "--stat",
                "val",
                "--n-max",
                "10"
            ])
            .0,
            2
        );
        assert_eq!(call(&["series", "--model", "I_val", "--order", "99"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
    }

    #[test]
    fn bijection_traces() {
        let (code, out, _) = call(&["bijection", "--name", "phi", "--n", "5", "--input", "23154"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("23154 -> 32145  runs 3->3"), "{out}");
        let (code, out, _) = call(&["bijection", "--name", "flat-partition", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("12 -> {1}  roundtrip true\n"), "{out}");
        let (code, out, _) = call(&["bijection", "--name", "gould", "--n", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 10);
        let (code, _, _) = call(&["bijection", "--name", "phi", "--input", "253614"]);
        assert_eq!(code, 1);
    }
}
