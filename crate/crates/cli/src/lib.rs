//! Run configuration, the parallel runner and report rendering behind the
//! `cayley` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use cayley_core::catalog::{registry, CatalogError, Construction};
use cayley_core::poly::Limits;
use cayley_core::ratmap::{Certificate, CheckCtx, Status};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "CAYLEY_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    #[serde(rename = "md")]
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Markdown),
            _ => Err(format!("unknown format {s:?} (expected json or md)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub term_budget: usize,
    /// Selected ids, or `["all"]`.
    pub constructions: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: DEFAULT_SEED, trials: 100, term_budget: Limits::DEFAULT_TERM_BUDGET, constructions: vec!["all".into()] }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown construction id {0:?} (see `cayley list`)")]
    UnknownId(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Config(String),
    #[error("{path}: not a valid report: {source}")]
    BadReport { path: String, source: serde_json::Error },
    #[error("term budget exceeded in {id}: {source}")]
    Budget { id: String, source: CatalogError },
}

impl CliError {
    /// 2 for usage and input errors, 3 for budget overruns.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Budget { .. } => 3,
            _ => 2,
        }
    }
}

/// Values from a flat `key = value` file; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim().replace('-', "_");
        if !matches!(k.as_str(), "seed" | "trials" | "term_budget" | "format" | "only") {
            return Err(CliError::Config(format!("line {}: unknown key {k:?}", i + 1)));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

pub fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}")))
}

/// Splits a comma-separated id list and checks every id is registered.
pub fn resolve_ids(spec: &[String]) -> Result<Vec<&'static str>, CliError> {
    let reg = registry();
    let mut ids = Vec::new();
    for item in spec.iter().flat_map(|s| s.split(',')).map(str::trim).filter(|s| !s.is_empty()) {
        if item == "all" {
            ids.extend(reg.iter().filter(|c| c.in_all).map(|c| c.id));
        } else {
            let c = reg.iter().find(|c| c.id == item).ok_or_else(|| CliError::UnknownId(item.to_string()))?;
            ids.push(c.id);
        }
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub check: String,
    pub pass: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertRecord {
    pub id: String,
    pub anchors: Vec<String>,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub verdicts: Vec<VerdictRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub ms: u64,
}

impl CertRecord {
    pub fn from_certificate(c: &Certificate) -> Self {
        CertRecord {
            id: c.id.clone(),
            anchors: c.anchors.clone(),
            status: c.status().as_str().to_string(),
            skipped: c.skipped.clone(),
            verdicts: c
                .verdicts
                .iter()
                .map(|v| VerdictRecord {
                    check: v.check.clone(),
                    pass: v.pass,
                    detail: v.detail.clone(),
                    witness: v.witness.as_ref().map(|w| w.iter().map(ToString::to_string).collect()),
                    terms: v.terms,
                })
                .collect(),
            notes: c.notes.clone(),
            ms: c.ms.unwrap_or(0),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail.as_str()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub config: RunConfig,
    pub pass: bool,
    pub certificates: Vec<CertRecord>,
    pub total_ms: u64,
}

impl Report {
    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        r.total_ms = 0;
        for c in &mut r.certificates {
            c.ms = 0;
        }
        r
    }
}

pub fn check_ctx(cfg: &RunConfig) -> CheckCtx {
    let mut ctx = CheckCtx::new(cfg.seed);
    ctx.trials = cfg.trials;
    ctx.relation_trials = cfg.trials.min(50);
    ctx.limits = Limits { term_budget: cfg.term_budget };
    ctx
}

fn run_one(c: &Construction, ctx: &CheckCtx) -> Result<Certificate, CliError> {
    let start = Instant::now();
    let mut cert = c.run(ctx).map_err(|source| CliError::Budget { id: c.id.to_string(), source })?;
    cert.ms = Some(start.elapsed().as_millis() as u64);
    Ok(cert)
}

/// Runs the selected constructions in parallel; the report is ordered by id.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    let ids = resolve_ids(&cfg.constructions)?;
    let selected: Vec<Construction> = registry().into_iter().filter(|c| ids.contains(&c.id)).collect();
    let ctx = check_ctx(cfg);
    let start = Instant::now();
    let certs: Vec<Certificate> = selected.par_iter().map(|c| run_one(c, &ctx)).collect::<Result<_, _>>()?;
    let certificates: Vec<CertRecord> = certs.iter().map(CertRecord::from_certificate).collect();
    Ok(Report {
        schema: SCHEMA,
        tool: format!("cayley {}", env!("CARGO_PKG_VERSION")),
        config: cfg.clone(),
        pass: certificates.iter().all(|c| !c.failed()),
        certificates,
        total_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn render_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

pub fn render_markdown(r: &Report) -> String {
    let mut s = String::new();
    let c = &r.config;
    let _ = writeln!(s, "# Verification report\n");
    let _ = writeln!(s, "- tool: {}", r.tool);
    let _ = writeln!(s, "- seed: {}, trials: {}, term budget: {}", c.seed, c.trials, c.term_budget);
    let _ = writeln!(s, "- constructions: {}", c.constructions.join(", "));
    let _ = writeln!(s, "- overall: **{}**\n", if r.pass { "PASS" } else { "FAIL" });
    let _ = writeln!(s, "| id | status | checks | failed | anchors | ms |");
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    for cert in &r.certificates {
        let failed = cert.verdicts.iter().filter(|v| !v.pass).count();
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            cert.id,
            cert.status,
            cert.verdicts.len(),
            failed,
            md_cell(&cert.anchors.join("; ")),
            cert.ms
        );
    }
    for cert in r.certificates.iter().filter(|c| c.failed() || c.skipped.is_some()) {
        let _ = writeln!(s, "\n## {}\n", cert.id);
        if let Some(why) = &cert.skipped {
            let _ = writeln!(s, "skipped: {why}");
        }
        for v in cert.verdicts.iter().filter(|v| !v.pass) {
            let _ = writeln!(s, "- **{}**: {}", md_cell(&v.check), md_cell(&v.detail));
            if let Some(w) = &v.witness {
                let _ = writeln!(s, "  - witness: ({})", w.join(", "));
            }
        }
    }
    s
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => render_json(r),
        Format::Markdown => render_markdown(r),
    }
}

pub fn read_report(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::BadReport { path: path.display().to_string(), source })
}

/// Sorted `(id, anchors, note)` rows for `list`.
pub fn list_rows() -> Vec<(String, String, String)> {
    registry()
        .into_iter()
        .map(|c| {
            let note = match c.expected_failure {
                Some(f) => format!("broken fixture, must fail: {f}"),
                None => String::new(),
            };
            (c.id.to_string(), c.anchors.join("; "), note)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text() {
        let m = parse_config_text("# run\nseed = 7\nterm-budget=100\n\n").unwrap();
        assert_eq!(m["seed"], "7");
        assert_eq!(m["term_budget"], "100");
        assert!(parse_config_text("colour = red").is_err());
        assert!(parse_config_text("seed").is_err());
    }

    #[test]
    fn ids_resolve() {
        let all = resolve_ids(&["all".into()]).unwrap();
        assert!(all.contains(&"su3.chain"));
        assert!(!all.iter().any(|id| id.starts_with("mutant.")));
        assert_eq!(resolve_ids(&["su3.phi,picard.form".into()]).unwrap(), ["picard.form", "su3.phi"]);
        assert!(matches!(resolve_ids(&["nope".into()]), Err(CliError::UnknownId(_))));
    }

    #[test]
    fn json_round_trip() {
        let cfg = RunConfig { constructions: vec!["picard.form".into(), "rank2.g2".into()], ..RunConfig::default() };
        let r = run(&cfg).unwrap();
        assert!(r.pass);
        let text = render_json(&r);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(render_json(&back), text);
        assert!(text.contains("\"schema\": 1"));
    }

    #[test]
    fn markdown_has_one_row_per_certificate() {
        let cfg = RunConfig { constructions: vec!["picard.form,picard.ledger".into()], ..RunConfig::default() };
        let md = render_markdown(&run(&cfg).unwrap());
        assert_eq!(md.lines().filter(|l| l.starts_with("| picard.")).count(), 2);
    }
}
