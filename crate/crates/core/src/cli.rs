//! The `skl` command-line front end.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kl::KlTable;
use crate::rootsys::{CartanType, LatticeVector, RootSystem, Weight};
use crate::sigchar::{SignatureEngine, DEFAULT_CUTOFF};
use crate::signs::Signs;
use crate::skl::{verify_main_theorem, ADescent, SklTable};
use crate::sweep::run_sweep;
use crate::weyl::CoxeterGroup;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Pretty,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        <Format as ValueEnum>::from_str(s, false).map_err(|_| Error::Config(format!("unknown format '{s}'")))
    }
}

/// `-rho` or explicit fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum LambdaSpec {
    #[default]
    NegRho,
    Explicit(Weight),
}

impl FromStr for LambdaSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-rho" => Ok(LambdaSpec::NegRho),
            other => Ok(LambdaSpec::Explicit(other.parse()?)),
        }
    }
}

impl TryFrom<String> for LambdaSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<LambdaSpec> for String {
    fn from(l: LambdaSpec) -> String {
        match l {
            LambdaSpec::NegRho => "-rho".into(),
            LambdaSpec::Explicit(w) => w.to_string(),
        }
    }
}

impl LambdaSpec {
    pub fn resolve(&self, rs: &RootSystem) -> Result<Weight> {
        match self {
            LambdaSpec::NegRho => Ok(-&rs.rho()),
            LambdaSpec::Explicit(w) if w.rank() == rs.rank() => Ok(w.clone()),
            LambdaSpec::Explicit(w) => Err(Error::Config(format!(
                "λ = {w} has {} coordinates, {} has rank {}",
                w.rank(),
                rs.label(),
                rs.rank()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SystemSpec {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
    /// 1-based simple-root indices.
    pub noncompact: Vec<usize>,
}

impl SystemSpec {
    pub fn build(&self) -> Result<RootSystem> {
        let ct = CartanType::from_letter(self.cartan_type.chars().next().unwrap_or('?'))?;
        RootSystem::new(ct, self.rank, &self.noncompact)
    }
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub system: Option<SystemSpec>,
    pub lambda: LambdaSpec,
    pub cutoff: usize,
    pub format: Format,
    pub a_descent: ADescent,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            system: None,
            lambda: LambdaSpec::NegRho,
            cutoff: DEFAULT_CUTOFF,
            format: Format::Pretty,
            a_descent: ADescent::Corrected,
        }
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        self.system.as_ref().ok_or_else(|| Error::Config("no root system given (use --type)".into()))?.build()
    }
}

/// Partial settings from a config file or the command line.
#[derive(Debug, Clone, Default)]
struct Settings {
    cartan_type: Option<String>,
    rank: Option<usize>,
    noncompact: Option<Vec<usize>>,
    lambda: Option<LambdaSpec>,
    cutoff: Option<usize>,
    format: Option<Format>,
    a_descent: Option<ADescent>,
}

impl Settings {
    fn overlay(self, top: Settings) -> Settings {
        Settings {
            cartan_type: top.cartan_type.or(self.cartan_type),
            rank: top.rank.or(self.rank),
            noncompact: top.noncompact.or(self.noncompact),
            lambda: top.lambda.or(self.lambda),
            cutoff: top.cutoff.or(self.cutoff),
            format: top.format.or(self.format),
            a_descent: top.a_descent.or(self.a_descent),
        }
    }

    fn from_run_config(c: RunConfig) -> Settings {
        Settings {
            cartan_type: c.system.as_ref().map(|s| s.cartan_type.clone()),
            rank: c.system.as_ref().map(|s| s.rank),
            noncompact: c.system.map(|s| s.noncompact),
            lambda: Some(c.lambda),
            cutoff: Some(c.cutoff),
            format: Some(c.format),
            a_descent: Some(c.a_descent),
        }
    }

    fn finish(self, command: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(command);
        if let Some(t) = self.cartan_type {
            let t = t.trim();
            let (letter, rank) = if t.len() > 1 {
                let (ct, r) = CartanType::parse_label(t)?;
                if self.rank.is_some_and(|x| x != r) {
                    return Err(Error::Config(format!(
                        "type {t} conflicts with rank {}",
                        self.rank.unwrap()
                    )));
                }
                (ct.letter(), r)
            } else {
                let ct = CartanType::from_letter(t.chars().next().unwrap_or('?'))?;
                let r = self.rank.ok_or_else(|| Error::Config(format!("type {t} needs --rank")))?;
                (ct.letter(), r)
            };
            cfg.system = Some(SystemSpec {
                cartan_type: letter.to_string(),
                rank,
                noncompact: self.noncompact.unwrap_or_default(),
            });
        } else if self.noncompact.is_some() || self.rank.is_some() {
            return Err(Error::Config("--noncompact/--rank given without --type".into()));
        }
        if let Some(l) = self.lambda {
            cfg.lambda = l;
        }
        if let Some(c) = self.cutoff {
            cfg.cutoff = c;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(a) = self.a_descent {
            cfg.a_descent = a;
        }
        Ok(cfg)
    }
}

fn parse_noncompact(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "none" {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Config(format!("bad noncompact index '{t}'"))))
        .collect()
}

/// `key = value` lines (`#` comments), or a JSON [`RunConfig`].
fn read_config_file(path: &Path) -> Result<Settings> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        return Ok(Settings::from_run_config(cfg));
    }
    let mut s = Settings::default();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{}:{}: expected key = value", path.display(), n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        let bad = |what: &str| Error::Config(format!("{}:{}: bad {what} '{v}'", path.display(), n + 1));
        match k {
            "type" => s.cartan_type = Some(v.to_string()),
            "rank" => s.rank = Some(v.parse().map_err(|_| bad("rank"))?),
            "noncompact" => s.noncompact = Some(parse_noncompact(v)?),
            "lambda" => s.lambda = Some(v.parse()?),
            "cutoff" => s.cutoff = Some(v.parse().map_err(|_| bad("cutoff"))?),
            "format" => s.format = Some(v.parse()?),
            "a_descent" | "a-descent" => s.a_descent = Some(v.parse()?),
            _ => return Err(Error::Config(format!("{}:{}: unknown key '{k}'", path.display(), n + 1))),
        }
    }
    Ok(s)
}

#[derive(Debug, Parser)]
#[command(
    name = "skl",
    version,
    about = "Classical and signed Kazhdan-Lusztig polynomials, hyperplane signs and signature characters"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Default)]
pub struct Common {
    /// Cartan type, e.g. `B3`, or a letter together with --rank.
    #[arg(long = "type", value_name = "TYPE")]
    pub cartan_type: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Comma-separated 1-based noncompact simple roots, or `none`.
    #[arg(long, value_name = "LIST")]
    pub noncompact: Option<String>,
    /// `-rho` or comma-separated fundamental-weight coordinates such as `-1/2,-1`.
    #[arg(long, allow_hyphen_values = true, value_name = "WEIGHT")]
    pub lambda: Option<String>,
    /// Height cutoff for characters.
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// `key = value` or JSON config file; flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads for the parallel parts.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan matrix and positive roots with grading.
    Roots {
        #[command(flatten)]
        common: Common,
    },
    /// Weyl group elements as shortlex reduced words.
    Group {
        #[command(flatten)]
        common: Common,
    },
    /// Classical KL polynomials P_{x,y}.
    Kl {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// Report P_{w0x,w0y} instead.
        #[arg(long)]
        twisted: bool,
    },
    /// Signed KL polynomials P^{λ,w0}_{w0x,w0y} of the integral Weyl group.
    Skl {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, value_name = "MODE")]
        a_descent: Option<ADescent>,
    },
    /// Hyperplane signs ε(H_{γ,N}, s).
    Epsilon {
        #[command(flatten)]
        common: Common,
        /// Positive root as simple-root coefficients, e.g. `1,1`.
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        n: Option<i64>,
        /// Chamber as a reduced word.
        #[arg(long)]
        chamber: Option<String>,
        /// Largest N in the full table.
        #[arg(long, default_value_t = 4)]
        max_level: i64,
    },
    /// Check signed against classical KL polynomials on all pairs.
    VerifyMain {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "MODE")]
        a_descent: Option<ADescent>,
    },
    /// Truncated signature character of M(λ).
    Sigchar {
        #[command(flatten)]
        common: Common,
        /// Also list every subset of the gallery with its sign.
        #[arg(long)]
        audit: bool,
    },
    /// Run the acceptance suite.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Roots { common }
            | Command::Group { common }
            | Command::Kl { common, .. }
            | Command::Skl { common, .. }
            | Command::Epsilon { common, .. }
            | Command::VerifyMain { common, .. }
            | Command::Sigchar { common, .. }
            | Command::Sweep { common } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Roots { .. } => "roots",
            Command::Group { .. } => "group",
            Command::Kl { .. } => "kl",
            Command::Skl { .. } => "skl",
            Command::Epsilon { .. } => "epsilon",
            Command::VerifyMain { .. } => "verify-main",
            Command::Sigchar { .. } => "sigchar",
            Command::Sweep { .. } => "sweep",
        }
    }

    /// Merges the config file under the flags.
    pub fn run_config(&self) -> Result<RunConfig> {
        let c = self.common();
        let file = match &c.config {
            Some(p) => read_config_file(p)?,
            None => Settings::default(),
        };
        let a_descent = match self {
            Command::Skl { a_descent, .. } | Command::VerifyMain { a_descent, .. } => *a_descent,
            _ => None,
        };
        let flags = Settings {
            cartan_type: c.cartan_type.clone(),
            rank: c.rank,
            noncompact: c.noncompact.as_deref().map(parse_noncompact).transpose()?,
            lambda: c.lambda.as_deref().map(str::parse).transpose()?,
            cutoff: c.cutoff,
            format: c.format,
            a_descent,
        };
        file.overlay(flags).finish(self.name())
    }
}

/// A rendered result: JSON payload, a table for CSV, and pretty text.
struct Output {
    json: Value,
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    pretty: String,
    mismatch: bool,
}

impl Output {
    fn tabular(json: Value, headers: Vec<&'static str>, rows: Vec<Vec<String>>, preface: String) -> Output {
        let pretty = format!("{preface}{}", aligned(&headers, &rows));
        Output { json, headers, rows, pretty, mismatch: false }
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json).expect("serializable") + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Resource(format!("csv: {e}"));
                w.write_record(&self.headers).map_err(io)?;
                for r in &self.rows {
                    w.write_record(r).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Resource(format!("csv: {e}")))?;
                Ok(String::from_utf8(bytes).expect("utf-8"))
            }
            Format::Pretty => Ok(self.pretty.clone()),
        }
    }
}

fn aligned(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut l = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                l.push_str("  ");
            }
            l.push_str(c);
            l.extend(std::iter::repeat_n(' ', w - c.chars().count()));
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(headers.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
    out
}

fn grading_string(rs: &RootSystem) -> String {
    let nc = rs.noncompact_simple();
    if nc.is_empty() {
        "none".into()
    } else {
        nc.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn coeffs(v: &LatticeVector) -> String {
    v.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_roots(cfg: &RunConfig) -> Result<Output> {
    let rs = cfg.root_system()?;
    let rows = rs
        .positive_roots()
        .iter()
        .map(|r| {
            vec![
                coeffs(r),
                r.height().to_string(),
                rs.squared_length(r).to_string(),
                if rs.is_compact_root(r) { "compact" } else { "noncompact" }.into(),
            ]
        })
        .collect();
    let cartan = rs
        .cartan_matrix()
        .iter()
        .map(|row| row.iter().map(|c| format!("{c:>3}")).collect::<String>())
        .collect::<Vec<_>>()
        .join("\n");
    let preface = format!("{} noncompact: {}\nCartan matrix:\n{cartan}\n\n", rs.label(), grading_string(&rs));
    Ok(Output::tabular(
        serde_json::to_value(rs.to_data()).expect("serializable"),
        vec!["root", "height", "squared_length", "grading"],
        rows,
        preface,
    ))
}

fn cmd_group(cfg: &RunConfig) -> Result<Output> {
    let rs = cfg.root_system()?;
    let g = CoxeterGroup::weyl(&rs)?;
    let rows: Vec<Vec<String>> =
        g.elements().map(|w| vec![g.word_string(w), g.length(w).to_string()]).collect();
    let json = json!({
        "system": rs.label(),
        "order": g.order(),
        "longest": g.word_string(g.longest()),
        "elements": g.elements().map(|w| json!({"word": g.word_string(w), "length": g.length(w)})).collect::<Vec<_>>(),
    });
    let preface = format!("W({}) order {}, w0 = {}\n\n", rs.label(), g.order(), g.word_string(g.longest()));
    Ok(Output::tabular(json, vec!["word", "length"], rows, preface))
}

fn cmd_kl(cfg: &RunConfig, x: Option<&str>, y: Option<&str>, twisted: bool) -> Result<Output> {
    let rs = cfg.root_system()?;
    let group = Arc::new(CoxeterGroup::weyl(&rs)?);
    let mut table = KlTable::new(Arc::clone(&group));
    let g = &*group;
    let mut eval = |u, v| if twisted { table.twisted(u, v) } else { table.kl_poly(u, v) };
    let pairs: Vec<(usize, usize)> = match (x, y) {
        (Some(x), Some(y)) => vec![(g.parse_word(x)?, g.parse_word(y)?)],
        (None, None) => {
            let mut p = Vec::new();
            for u in g.elements() {
                for v in g.elements() {
                    let (a, b) = if twisted { (v, u) } else { (u, v) };
                    if g.bruhat_leq(a, b) {
                        p.push((u, v));
                    }
                }
            }
            p
        }
        _ => return Err(Error::Config("give both --x and --y, or neither".into())),
    };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (u, v) in pairs {
        let p = eval(u, v);
        rows.push(vec![g.word_string(u), g.word_string(v), p.to_string()]);
        entries.push(json!({"x": g.word_string(u), "y": g.word_string(v), "polynomial": p.to_string(), "coefficients": p}));
    }
    let name = if twisted { "P_{w0x,w0y}" } else { "P_{x,y}" };
    let json = json!({"system": rs.label(), "twisted": twisted, "entries": entries});
    Ok(Output::tabular(json, vec!["x", "y", "polynomial"], rows, format!("{} {name}\n\n", rs.label())))
}

fn cmd_skl(cfg: &RunConfig, x: Option<&str>, y: Option<&str>) -> Result<Output> {
    let rs = cfg.root_system()?;
    let lambda = cfg.lambda.resolve(&rs)?;
    let mut table = SklTable::with_mode(&rs, &lambda, cfg.a_descent)?;
    let group = table.integral_data().group.clone();
    let pairs: Vec<(usize, usize)> = match (x, y) {
        (Some(x), Some(y)) => vec![(group.parse_word(x)?, group.parse_word(y)?)],
        (None, None) => group.elements().flat_map(|u| group.elements().map(move |v| (u, v))).collect(),
        _ => return Err(Error::Config("give both --x and --y, or neither".into())),
    };
    let single = pairs.len() == 1;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (u, v) in pairs {
        let p = table.signed_kl(u, v)?;
        if p.is_zero() && !single {
            continue;
        }
        rows.push(vec![group.word_string(u), group.word_string(v), p.to_string()]);
        entries.push(json!({"x": group.word_string(u), "y": group.word_string(v), "polynomial": p.to_string(), "coefficients": p}));
    }
    let pi: Vec<String> = table.integral_data().pi_lambda.iter().map(|r| r.to_string()).collect();
    let json = json!({
        "system": rs.label(),
        "grading": rs.noncompact_simple(),
        "lambda": lambda.to_string(),
        "a_descent": cfg.a_descent,
        "pi_lambda": pi,
        "entries": entries,
    });
    let preface = format!(
        "{} noncompact: {}  λ = {lambda}  Π_λ = {}  a-descent: {}\nsigned P^{{λ,w0}}_{{w0x,w0y}}\n\n",
        rs.label(),
        grading_string(&rs),
        pi.join(" "),
        serde_json::to_value(cfg.a_descent).expect("serializable").as_str().unwrap_or("")
    );
    Ok(Output::tabular(json, vec!["x", "y", "polynomial"], rows, preface))
}

fn sign_char(e: i8) -> &'static str {
    match e {
        1 => "+",
        -1 => "-",
        _ => "0",
    }
}

fn cmd_epsilon(
    cfg: &RunConfig,
    gamma: Option<&str>,
    n: Option<i64>,
    chamber: Option<&str>,
    max_level: i64,
) -> Result<Output> {
    let rs = cfg.root_system()?;
    let signs = Signs::new(&rs)?;
    let g = signs.group();
    if let (Some(gamma), Some(n), Some(chamber)) = (gamma, n, chamber) {
        let gamma = LatticeVector(
            gamma
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Config(format!("bad root '{gamma}'"))))
                .collect::<Result<_>>()?,
        );
        if gamma.rank() != rs.rank() || rs.positive_root_index(&gamma).is_none() {
            return Err(Error::Config(format!("{gamma} is not a positive root of {}", rs.label())));
        }
        let s = g.parse_word(chamber)?;
        let e = signs.epsilon_hyperplane(&gamma, n, s)?;
        let json = json!({"system": rs.label(), "grading": rs.noncompact_simple(), "gamma": gamma.0,
            "n": n, "chamber": g.word_string(s), "meets": signs.meets_chamber(&gamma, n, s), "epsilon": e});
        let row = vec![coeffs(&gamma), g.word_string(s), n.to_string(), e.to_string()];
        return Ok(Output::tabular(json, vec!["gamma", "chamber", "N", "epsilon"], vec![row], String::new()));
    }
    if gamma.is_some() || n.is_some() || chamber.is_some() {
        return Err(Error::Config("give all of --gamma, --n and --chamber, or none".into()));
    }
    if max_level < 1 {
        return Err(Error::Config("--max-level must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut pretty = format!(
        "{} noncompact: {}\nε(H_{{γ,N}}, s) for N = 1..{max_level}\n\n",
        rs.label(),
        grading_string(&rs)
    );
    for gamma in rs.positive_roots() {
        let mut cells = Vec::new();
        for s in g.elements().filter(|&s| signs.meets_chamber(gamma, 1, s)) {
            let values = (1..=max_level)
                .map(|n| signs.epsilon_hyperplane(gamma, n, s))
                .collect::<Result<Vec<i8>>>()?;
            let word = g.word_string(s);
            for (n, e) in (1..).zip(&values) {
                rows.push(vec![coeffs(gamma), word.clone(), n.to_string(), e.to_string()]);
            }
            cells.push(format!("{word}:{}", values.iter().map(|&e| sign_char(e)).collect::<String>()));
            entries.push(json!({"gamma": gamma.0, "chamber": word, "epsilon": values}));
        }
        let _ = writeln!(pretty, "{:<12} {}", gamma.to_string(), cells.join("  "));
    }
    let json = json!({"system": rs.label(), "grading": rs.noncompact_simple(), "max_level": max_level, "entries": entries});
    Ok(Output { json, headers: vec!["gamma", "chamber", "N", "epsilon"], rows, pretty, mismatch: false })
}

fn cmd_verify_main(cfg: &RunConfig) -> Result<Output> {
    let rs = cfg.root_system()?;
    let lambda = cfg.lambda.resolve(&rs)?;
    let report = verify_main_theorem(&rs, &lambda, cfg.a_descent)?;
    let rows = report
        .pairs
        .iter()
        .map(|p| {
            vec![
                p.x.clone(),
                p.y.clone(),
                p.skl.to_string(),
                p.kl_neg_q.to_string(),
                p.sign.to_string(),
                if p.matches { "ok" } else { "MISMATCH" }.into(),
            ]
        })
        .collect();
    let preface = format!(
        "{} noncompact: {}  λ = {}  a-descent: {}\n|W_λ| = {}  pairs = {}  mismatches = {}  verbatim a) violations = {}/{}\n{}\n\n",
        report.system,
        grading_string(&rs),
        report.lambda,
        serde_json::to_value(report.a_descent).expect("serializable").as_str().unwrap_or(""),
        report.group_order,
        report.pairs.len(),
        report.mismatches,
        report.verbatim_a_violations,
        report.verbatim_a_steps,
        if report.passed() { "PASS" } else { "FAIL" },
    );
    let mut out = Output::tabular(
        serde_json::to_value(&report).expect("serializable"),
        vec!["x", "y", "signed", "kl(-q)", "sign", "status"],
        rows,
        preface,
    );
    out.mismatch = !report.passed();
    Ok(out)
}

fn cmd_sigchar(cfg: &RunConfig, audit: bool) -> Result<Output> {
    let rs = cfg.root_system()?;
    let lambda = cfg.lambda.resolve(&rs)?;
    let engine = SignatureEngine::new(&rs, cfg.cutoff)?;
    let sum = engine.signature_character_alcove_sum(&lambda)?;
    let aff = engine.affine();
    let g = aff.group();
    let base = sum.character.base().clone();
    let terms = sum.character.terms();
    let rows = terms
        .iter()
        .map(|t| {
            let weight = &base - &rs.root_to_weight(&t.mu);
            vec![coeffs(&t.mu), t.mu.height().to_string(), weight.to_string(), t.c.to_string()]
        })
        .collect();
    let gallery: Vec<Value> =
        sum.gallery.hyperplanes.iter().map(|h| json!({"root": h.root.0, "level": h.level})).collect();
    let mut json = json!({
        "system": rs.label(),
        "grading": rs.noncompact_simple(),
        "lambda": lambda.to_string(),
        "cutoff": cfg.cutoff,
        "base": base.to_string(),
        "alcove": {"translation": sum.alcove.translation.0, "finite": g.word_string(sum.alcove.finite)},
        "tilde": g.word_string(aff.tilde(&sum.alcove)),
        "gallery": gallery,
        "terms": terms.iter().map(|t| json!({"mu": t.mu.0, "coefficient": t.c})).collect::<Vec<_>>(),
    });
    let mut preface = format!(
        "{} noncompact: {}  λ = {lambda}  cutoff {}\nalcove (τ, w) = ({}, {})  w̃ = {}  gallery: {}\nch_s M(λ) = Σ c_μ e^(λ-ρ-μ)\n\n",
        rs.label(),
        grading_string(&rs),
        cfg.cutoff,
        sum.alcove.translation,
        g.word_string(sum.alcove.finite),
        g.word_string(aff.tilde(&sum.alcove)),
        if sum.gallery.is_empty() {
            "empty".to_string()
        } else {
            sum.gallery.hyperplanes.iter().map(|h| format!("H_{{{},{}}}", h.root, h.level)).collect::<Vec<_>>().join(" ")
        },
    );
    if audit {
        json["audit"] = serde_json::to_value(
            sum.audit
                .iter()
                .map(|t| json!({"subset": t.subset, "epsilon": t.epsilon, "coefficient": t.coefficient, "parameter": t.parameter.to_string()}))
                .collect::<Vec<_>>(),
        )
        .expect("serializable");
        let _ = writeln!(preface, "subsets with ε(I) ≠ 0:");
        for t in &sum.audit {
            let subset = if t.subset.is_empty() {
                "{}".to_string()
            } else {
                format!("{{{}}}", t.subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            };
            let _ = writeln!(
                preface,
                "  I = {subset:<10} ε = {:>2}  {:>4} R({})",
                t.epsilon, t.coefficient, t.parameter
            );
        }
        preface.push('\n');
    }
    Ok(Output::tabular(json, vec!["mu", "height", "weight", "coefficient"], rows, preface))
}

fn cmd_sweep() -> Result<Output> {
    let report = run_sweep()?;
    let rows: Vec<Vec<String>> = report
        .criteria
        .iter()
        .map(|c| {
            vec![
                c.id.clone(),
                c.name.clone(),
                if c.passed { "PASS" } else { "FAIL" }.into(),
                c.detail.clone(),
            ]
        })
        .collect();
    let mut pretty: String = report.criteria.iter().map(|c| c.line() + "\n").collect();
    let _ = writeln!(pretty, "{} passed, {} failed", report.passed, report.failed);
    Ok(Output {
        json: serde_json::to_value(&report).expect("serializable"),
        headers: vec!["id", "criterion", "status", "detail"],
        rows,
        pretty,
        mismatch: !report.all_passed(),
    })
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    match cmd {
        Command::Roots { .. } => cmd_roots(cfg),
        Command::Group { .. } => cmd_group(cfg),
        Command::Kl { x, y, twisted, .. } => cmd_kl(cfg, x.as_deref(), y.as_deref(), *twisted),
        Command::Skl { x, y, .. } => cmd_skl(cfg, x.as_deref(), y.as_deref()),
        Command::Epsilon { gamma, n, chamber, max_level, .. } => {
            cmd_epsilon(cfg, gamma.as_deref(), *n, chamber.as_deref(), *max_level)
        }
        Command::VerifyMain { .. } => cmd_verify_main(cfg),
        Command::Sigchar { audit, .. } => cmd_sigchar(cfg, *audit),
        Command::Sweep { .. } => cmd_sweep(),
    }
}

fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = cli.command.run_config()?;
    log::info!("running {} with {}", cfg.command, serde_json::to_string(&cfg).expect("serializable"));
    let common = cli.command.common();
    let output = match common.jobs {
        Some(0) => return Err(Error::Config("--jobs must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?
            .install(|| execute(&cli.command, &cfg))?,
        None => execute(&cli.command, &cfg)?,
    };
    let text = output.render(cfg.format)?;
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Resource(format!("stdout: {e}")))?,
    }
    Ok(if output.mismatch { EXIT_MISMATCH } else { EXIT_OK })
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn dispatch<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "skl: {e}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = dispatch(std::iter::once("skl").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn run_config_round_trips() {
        let cfg = RunConfig {
            command: "sigchar".into(),
            system: Some(SystemSpec { cartan_type: "B".into(), rank: 2, noncompact: vec![1] }),
            lambda: "3/2,-1/5".parse().unwrap(),
            cutoff: 6,
            format: Format::Csv,
            a_descent: ADescent::Verbatim,
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        let neg = RunConfig::new("kl");
        assert_eq!(serde_json::from_str::<RunConfig>(&serde_json::to_string(&neg).unwrap()).unwrap(), neg);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = std::env::temp_dir().join(format!("skl-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# test\ntype = B2\nnoncompact = 1\ncutoff = 5\nformat = json\n").unwrap();
        let cli =
            Cli::try_parse_from(["skl", "sigchar", "--config", path.to_str().unwrap(), "--cutoff", "3"])
                .unwrap();
        let cfg = cli.command.run_config().unwrap();
        assert_eq!(cfg.system, Some(SystemSpec { cartan_type: "B".into(), rank: 2, noncompact: vec![1] }));
        assert_eq!(cfg.cutoff, 3);
        assert_eq!(cfg.format, Format::Json);
        std::fs::write(&path, "colour = blue\n").unwrap();
        let cli = Cli::try_parse_from(["skl", "roots", "--config", path.to_str().unwrap()]).unwrap();
        assert!(matches!(cli.command.run_config(), Err(Error::Config(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn type_with_separate_rank() {
        let cli = Cli::try_parse_from(["skl", "roots", "--type", "C", "--rank", "3"]).unwrap();
        let cfg = cli.command.run_config().unwrap();
        assert_eq!(cfg.root_system().unwrap().label(), "C3");
        let cli = Cli::try_parse_from(["skl", "roots", "--type", "C3", "--rank", "2"]).unwrap();
        assert!(cli.command.run_config().is_err());
    }

    #[test]
    fn verify_main_a1() {
        let (code, out, _) =
            run_args(&["verify-main", "--type", "A1", "--noncompact", "1", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["pairs"].as_array().unwrap().len(), 4);
        assert_eq!(v["mismatches"], 0);
    }

    #[test]
    fn kl_outside_bruhat_is_zero() {
        let (code, out, _) = run_args(&["kl", "--type", "A2", "--x", "12", "--y", "e", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "x,y,polynomial\n12,e,0\n");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["roots", "--bogus"]).0, EXIT_CONFIG);
        assert_eq!(run_args(&["roots", "--type", "Q2"]).0, EXIT_CONFIG);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_CONFIG);
        assert_eq!(run_args(&["sigchar", "--type", "A2", "--lambda", "-1,-1"]).0, EXIT_CONFIG);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn verbatim_mode_reports_mismatch() {
        let (code, _, _) = run_args(&["verify-main", "--type", "A3", "--a-descent", "verbatim"]);
        assert_eq!(code, EXIT_MISMATCH);
    }

    #[test]
    fn epsilon_single_and_table() {
        let (code, out, _) = run_args(&[
            "epsilon",
            "--type",
            "G2",
            "--noncompact",
            "1",
            "--gamma",
            "1,0",
            "--n",
            "1",
            "--chamber",
            "1",
            "--format",
            "csv",
        ]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "gamma,chamber,N,epsilon\n\"1,0\",1,1,-1\n");
        let (code, out, _) = run_args(&["epsilon", "--type", "G2", "--max-level", "2"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().filter(|l| l.starts_with('(')).count(), 6);
    }

    #[test]
    fn sigchar_audit() {
        let (code, out, _) = run_args(&[
            "sigchar",
            "--type",
            "A1",
            "--noncompact",
            "1",
            "--lambda",
            "3/2",
            "--cutoff",
            "4",
            "--audit",
            "--format",
            "json",
        ]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["audit"].as_array().unwrap().len(), 2);
        let coeffs: Vec<i64> =
            v["terms"].as_array().unwrap().iter().map(|t| t["coefficient"].as_i64().unwrap()).collect();
        assert_eq!(coeffs, vec![1, -1, -1, -1, -1]);
    }

    #[test]
    fn roots_and_group() {
        let (code, out, _) = run_args(&["roots", "--type", "B2", "--noncompact", "2", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 5);
        let (code, out, _) = run_args(&["group", "--type", "G2", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["order"], 12);
        assert_eq!(v["longest"], "121212");
    }

    #[test]
    fn out_flag_writes_file() {
        let path = std::env::temp_dir().join(format!("skl-out-{}.json", std::process::id()));
        let (code, out, _) = run_args(&[
            "skl",
            "--type",
            "B2",
            "--lambda",
            "-2,-3",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.is_empty());
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(!v["entries"].as_array().unwrap().is_empty());
        std::fs::remove_file(&path).unwrap();
    }
}
