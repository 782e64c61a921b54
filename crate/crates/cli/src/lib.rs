//! Job parsing, report assembly and batch execution for the `chowq` binary.
//!
//! A job is a list of statements separated by `;` or newlines:
//!
//! ```text
//! field F2((s))((t)); form pf(s,t;1); run chow2,witt
//! ```
//!
//! Statements: `field`, `form`, `run`, `format`, `degree-bound`, `budget`,
//! `max-degree`, `max-depth`, `seed`. `#` starts a comment. Each `form` is
//! parsed against the most recent `field`.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use chowq::chow::{chow2_torsion, chow3_torsion, ChowError, ChowReport};
use chowq::clifford::{
    build_clifford_seeded, center_and_idempotents, clifford_class, splitting_index,
    AlgebraClassDescriptor, CliffordError, SplittingIndexResult, DEFAULT_SEED,
};
use chowq::dsl::{line_column, parse_field_at, parse_form_at, ParseError};
use chowq::fieldtower::{FieldDescriptor, Limits, Tower};
use chowq::forms::{DiscriminantKind, FormRepr, QuadraticForm};
use chowq::pfister::{pfister_neighbor, NeighborRepr};
use chowq::witt::{
    brute_force_search, decide_isotropy, witt_decompose, Certificate, IsotropyVerdict,
    SearchConfig, WittError, DEFAULT_BUDGET,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest form dimension for which the even Clifford algebra is built
/// explicitly in the clifford report.
pub const ALGEBRA_REPORT_MAX_DIM: usize = 6;

/// Largest form dimension handed to the brute-force cross-check.
pub const ORACLE_MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Computation {
    Invariants,
    Witt,
    Clifford,
    Pfister,
    Chow2,
    Chow3,
}

impl Computation {
    pub const ALL: [Computation; 6] = [
        Computation::Invariants,
        Computation::Witt,
        Computation::Clifford,
        Computation::Pfister,
        Computation::Chow2,
        Computation::Chow3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Computation::Invariants => "invariants",
            Computation::Witt => "witt",
            Computation::Clifford => "clifford",
            Computation::Pfister => "pfister",
            Computation::Chow2 => "chow2",
            Computation::Chow3 => "chow3",
        }
    }
}

/// Parses a comma-separated run list; `all` expands to every computation.
/// The result is sorted and deduplicated.
pub fn parse_runs(text: &str) -> Result<Vec<Computation>, String> {
    let mut out = Vec::new();
    for word in text.split(',').map(str::trim) {
        match word {
            "all" => out.extend(Computation::ALL),
            w => match Computation::ALL.iter().find(|c| c.name() == w) {
                Some(c) => out.push(*c),
                None => return Err(w.to_string()),
            },
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineLimits {
    pub degree_bound: u32,
    pub budget: u64,
    pub tower: Limits,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            degree_bound: SearchConfig::default().degree_bound,
            budget: DEFAULT_BUDGET,
            tower: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobForm {
    /// Source text as written.
    pub source: String,
    pub form: QuadraticForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub forms: Vec<JobForm>,
    pub runs: Vec<Computation>,
    pub format: Format,
    pub limits: EngineLimits,
    pub seed: u64,
}

/// Values a job starts from before its own statements are read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobDefaults {
    pub field: Option<String>,
    pub runs: Vec<Computation>,
    pub format: Format,
    pub limits: EngineLimits,
    pub seed: u64,
}

impl Default for JobDefaults {
    fn default() -> Self {
        JobDefaults {
            field: None,
            runs: Computation::ALL.to_vec(),
            format: Format::Text,
            limits: EngineLimits::default(),
            seed: DEFAULT_SEED,
        }
    }
}

const KEYWORDS: [&str; 9] = [
    "field",
    "form",
    "run",
    "format",
    "degree-bound",
    "budget",
    "max-degree",
    "max-depth",
    "seed",
];

/// Statements of `text` with their byte offsets, comments removed. A `;`
/// inside parentheses belongs to a `pf(...; ...)` term.
fn statements(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut push = |from: usize, to: usize| {
        let piece = &text[from..to];
        let stmt = piece.trim();
        if !stmt.is_empty() {
            out.push((from + piece.len() - piece.trim_start().len(), stmt));
        }
    };
    let mut start = 0;
    let mut depth = 0usize;
    let mut comment = false;
    for (i, c) in text.char_indices() {
        match c {
            '\n' => {
                if !comment {
                    push(start, i);
                }
                comment = false;
                depth = 0;
                start = i + 1;
            }
            _ if comment => {}
            '#' => {
                push(start, i);
                comment = true;
            }
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ';' if depth == 0 => {
                push(start, i);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !comment {
        push(start, text.len());
    }
    out
}

fn error_at(text: &str, offset: usize, expected: &[&str], found: &str, message: Option<String>) -> ParseError {
    let (line, column) = line_column(text, offset);
    ParseError {
        line,
        column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.to_string(),
        message,
    }
}

fn build_tower(desc: FieldDescriptor, limits: Limits) -> Result<Arc<Tower>, String> {
    Tower::new(desc, limits).map_err(|e| e.to_string())
}

pub fn parse_job(text: &str) -> Result<Job, ParseError> {
    parse_job_with(text, &JobDefaults::default())
}

pub fn parse_job_with(text: &str, defaults: &JobDefaults) -> Result<Job, ParseError> {
    let mut job = Job {
        forms: Vec::new(),
        runs: defaults.runs.clone(),
        format: defaults.format,
        limits: defaults.limits,
        seed: defaults.seed,
    };
    // Towers are rebuilt when a later statement changes the tower caps.
    let mut field: Option<(usize, usize, FieldDescriptor)> = None;
    if let Some(f) = &defaults.field {
        let desc = chowq::dsl::parse_field(f).map_err(|mut e| {
            e.message = Some(format!("in the default field: {e}"));
            e
        })?;
        field = Some((0, 0, desc));
    }
    let mut tower: Option<Arc<Tower>> = None;
    for (offset, stmt) in statements(text) {
        let word_len = stmt.find(char::is_whitespace).unwrap_or(stmt.len());
        let (word, rest) = stmt.split_at(word_len);
        let arg_lead = rest.len() - rest.trim_start().len();
        let arg = rest.trim();
        let arg_offset = offset + word_len + arg_lead;
        if !KEYWORDS.contains(&word) {
            return Err(error_at(text, offset, &KEYWORDS, word, None));
        }
        if arg.is_empty() {
            return Err(error_at(text, offset + word_len, &["an argument"], "", None));
        }
        let number = |what: &str| -> Result<u64, ParseError> {
            match arg.parse::<u64>() {
                Ok(n) if n > 0 || what == "seed" => Ok(n),
                _ => Err(error_at(text, arg_offset, &["a positive integer"], arg, None)),
            }
        };
        match word {
            "field" => {
                let desc = parse_field_at(arg, text, arg_offset)?;
                let t = build_tower(desc.clone(), job.limits.tower)
                    .map_err(|m| error_at(text, arg_offset, &[], arg, Some(m)))?;
                field = Some((arg_offset, arg.len(), desc));
                tower = Some(t);
            }
            "form" => {
                let Some((f_off, f_len, desc)) = &field else {
                    return Err(error_at(
                        text,
                        offset,
                        &["`field` statement"],
                        word,
                        Some("a `field` statement must precede the first form".into()),
                    ));
                };
                if tower.is_none() {
                    let t = build_tower(desc.clone(), job.limits.tower).map_err(|m| {
                        error_at(text, *f_off, &[], &text[*f_off..f_off + f_len], Some(m))
                    })?;
                    tower = Some(t);
                }
                let k = tower.as_ref().expect("tower built");
                let form = parse_form_at(k, arg, text, arg_offset)?;
                job.forms.push(JobForm {
                    source: arg.to_string(),
                    form,
                });
            }
            "run" => {
                job.runs = parse_runs(arg).map_err(|bad| {
                    let at = arg_offset + arg.find(&bad).unwrap_or(0);
                    let names: Vec<&str> = Computation::ALL
                        .iter()
                        .map(|c| c.name())
                        .chain(["all"])
                        .collect();
                    error_at(text, at, &names, &bad, None)
                })?;
            }
            "format" => {
                job.format = arg
                    .parse()
                    .map_err(|bad: String| error_at(text, arg_offset, &["text", "json"], &bad, None))?;
            }
            "degree-bound" => job.limits.degree_bound = number(word)? as u32,
            "budget" => job.limits.budget = number(word)?,
            "max-degree" => {
                job.limits.tower.max_degree = number(word)? as usize;
                tower = None;
            }
            "max-depth" => {
                job.limits.tower.max_depth = number(word)? as usize;
                tower = None;
            }
            "seed" => job.seed = number(word)?,
            _ => unreachable!("keyword list"),
        }
    }
    Ok(job)
}

impl Job {
    /// Canonical job text; parsing it gives back an equal job.
    pub fn render(&self) -> String {
        let d = EngineLimits::default();
        let mut out = String::new();
        let mut push = |line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        if self.limits.tower.max_depth != d.tower.max_depth {
            push(format!("max-depth {}", self.limits.tower.max_depth));
        }
        if self.limits.tower.max_degree != d.tower.max_degree {
            push(format!("max-degree {}", self.limits.tower.max_degree));
        }
        let mut current: Option<String> = None;
        for f in &self.forms {
            let desc = f.form.field().descriptor().to_string();
            if current.as_ref() != Some(&desc) {
                push(format!("field {desc}"));
                current = Some(desc);
            }
            push(format!("form {}", f.form.render()));
        }
        let runs: Vec<&str> = self.runs.iter().map(|c| c.name()).collect();
        push(format!("run {}", runs.join(",")));
        push(format!(
            "format {}",
            match self.format {
                Format::Text => "text",
                Format::Json => "json",
            }
        ));
        push(format!("degree-bound {}", self.limits.degree_bound));
        push(format!("budget {}", self.limits.budget));
        push(format!("seed {}", self.seed));
        out
    }
}

// ---- reports ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub dim: usize,
    pub nonsingular: bool,
    pub nondegenerate: bool,
    pub normal_form: FormRepr,
    /// Representative of the Arf invariant, for nonsingular forms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arf: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arf_trivial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<DiscriminantKind>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub degree_bound: u32,
    pub budget: u64,
    /// "NoWitness", "BudgetExceeded", "Skipped" or "Contradiction".
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittReport {
    /// "Isotropic", "Anisotropic" or "Unknown".
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witt_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<FormRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraCheck {
    pub dim: usize,
    pub center_dim: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordReport {
    pub splitting_index: SplittingIndexResult,
    pub class: AlgebraClassDescriptor,
    /// Explicitly built even Clifford algebra, for small forms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even_algebra: Option<AlgebraCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reports {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Outcome<InvariantsReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witt: Option<Outcome<WittReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clifford: Option<Outcome<CliffordReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pfister: Option<Outcome<NeighborRepr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chow2: Option<Outcome<ChowReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chow3: Option<Outcome<ChowReport>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Ok(T),
    Err(ErrorReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Undecided,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormReport {
    pub schema_version: u32,
    pub index: usize,
    pub field: String,
    pub input: String,
    pub form: String,
    pub dim: usize,
    pub status: Status,
    pub reports: Reports,
}

/// Accumulates the worst status across the reports of one form.
struct Tracker(Status);

impl Tracker {
    fn undecided(&mut self, yes: bool) {
        if yes && self.0 == Status::Ok {
            self.0 = Status::Undecided;
        }
    }

    fn wrap<T>(&mut self, r: Result<T, String>) -> Outcome<T> {
        match r {
            Ok(x) => Outcome::Ok(x),
            Err(error) => {
                self.0 = Status::Error;
                Outcome::Err(ErrorReport { error })
            }
        }
    }
}

fn invariants(phi: &QuadraticForm) -> Result<InvariantsReport, String> {
    let k = phi.field();
    let (arf, arf_trivial, discriminant) = if phi.is_nonsingular() {
        let rep = phi.arf_representative().map_err(|e| e.to_string())?;
        let trivial = phi.has_trivial_arf().map_err(|e| e.to_string())?;
        let disc = phi.discriminant_algebra().map_err(|e| e.to_string())?;
        (Some(k.render(&rep)), Some(trivial), Some(disc.kind()))
    } else {
        (None, None, None)
    };
    Ok(InvariantsReport {
        dim: phi.dim(),
        nonsingular: phi.is_nonsingular(),
        nondegenerate: phi.is_nondegenerate(),
        normal_form: phi.to_repr(),
        arf,
        arf_trivial,
        discriminant,
    })
}

fn oracle(phi: &QuadraticForm, limits: &EngineLimits) -> OracleReport {
    let cfg = SearchConfig {
        degree_bound: limits.degree_bound,
        budget: limits.budget,
    };
    let (outcome, detail) = if phi.dim() > ORACLE_MAX_DIM {
        ("Skipped", Some(format!("dimension above {ORACLE_MAX_DIM}")))
    } else {
        match brute_force_search(phi, cfg) {
            Ok(None) => ("NoWitness", None),
            Ok(Some(w)) => {
                let k = phi.field();
                let shown: Vec<String> = w.iter().map(|x| k.render(x)).collect();
                ("Contradiction", Some(shown.join(", ")))
            }
            Err(WittError::BudgetExceeded { .. }) => ("BudgetExceeded", None),
            Err(e) => ("Skipped", Some(e.to_string())),
        }
    };
    OracleReport {
        degree_bound: cfg.degree_bound,
        budget: cfg.budget,
        outcome: outcome.into(),
        detail,
    }
}

fn witt(phi: &QuadraticForm, limits: &EngineLimits, t: &mut Tracker) -> Result<WittReport, String> {
    let k = phi.field();
    let verdict = decide_isotropy(phi).map_err(|e| e.to_string())?;
    let mut r = WittReport {
        verdict: String::new(),
        reason: None,
        witness: None,
        witt_index: None,
        kernel_dim: None,
        kernel: None,
        certificate: None,
        oracle: None,
    };
    match verdict {
        IsotropyVerdict::Isotropic { witness, certificate } => {
            r.verdict = "Isotropic".into();
            r.witness = witness.map(|w| w.iter().map(|x| k.render(x)).collect());
            r.certificate = certificate;
        }
        IsotropyVerdict::Anisotropic { certificate } => {
            r.verdict = "Anisotropic".into();
            r.certificate = Some(certificate);
            let o = oracle(phi, limits);
            if o.outcome == "Contradiction" {
                return Err(format!("brute-force search refutes anisotropy: {:?}", o.detail));
            }
            r.oracle = Some(o);
        }
        IsotropyVerdict::Unknown { reason } => {
            r.verdict = "Unknown".into();
            r.reason = Some(reason);
            t.undecided(true);
        }
    }
    match witt_decompose(phi) {
        Ok(d) => {
            r.witt_index = Some(d.witt_index);
            r.kernel_dim = Some(d.kernel.dim());
            r.kernel = Some(d.kernel.to_repr());
            if r.certificate.is_none() {
                r.certificate = Some(d.certificate);
            }
        }
        Err(WittError::Undecided(reason)) => {
            r.reason.get_or_insert(reason);
            t.undecided(true);
        }
        Err(e) => return Err(e.to_string()),
    }
    Ok(r)
}

fn clifford(phi: &QuadraticForm, seed: u64, t: &mut Tracker) -> Result<CliffordReport, String> {
    let err = |e: CliffordError| e.to_string();
    let si = splitting_index(phi).map_err(err)?;
    t.undecided(!si.is_resolved());
    let class = clifford_class(phi).map_err(err)?;
    let even_algebra = if phi.dim() <= ALGEBRA_REPORT_MAX_DIM && phi.dim() >= 2 {
        let alg = build_clifford_seeded(phi, true, seed).map_err(err)?;
        let center = center_and_idempotents(&alg).map_err(err)?;
        Some(AlgebraCheck {
            dim: alg.dim(),
            center_dim: center.dim(),
            seed,
        })
    } else {
        None
    };
    Ok(CliffordReport {
        splitting_index: si,
        class,
        even_algebra,
    })
}

fn pfister(phi: &QuadraticForm, t: &mut Tracker) -> Result<NeighborRepr, String> {
    let v = pfister_neighbor(phi).map_err(|e| e.to_string())?;
    t.undecided(v.as_bool().is_none());
    Ok(v.to_repr())
}

fn chow(r: Result<ChowReport, ChowError>, t: &mut Tracker) -> Result<ChowReport, String> {
    let r = r.map_err(|e| e.to_string())?;
    t.undecided(!r.torsion.is_exact());
    Ok(r)
}

pub fn run_form(index: usize, f: &JobForm, job: &Job) -> FormReport {
    let phi = &f.form;
    let mut t = Tracker(Status::Ok);
    let mut reports = Reports::default();
    for c in &job.runs {
        match c {
            Computation::Invariants => reports.invariants = Some(t.wrap(invariants(phi))),
            Computation::Witt => {
                let r = witt(phi, &job.limits, &mut t);
                reports.witt = Some(t.wrap(r));
            }
            Computation::Clifford => {
                let r = clifford(phi, job.seed, &mut t);
                reports.clifford = Some(t.wrap(r));
            }
            Computation::Pfister => {
                let r = pfister(phi, &mut t);
                reports.pfister = Some(t.wrap(r));
            }
            Computation::Chow2 => {
                let r = chow(chow2_torsion(phi), &mut t);
                reports.chow2 = Some(t.wrap(r));
            }
            Computation::Chow3 => {
                let r = chow(chow3_torsion(phi), &mut t);
                reports.chow3 = Some(t.wrap(r));
            }
        }
    }
    FormReport {
        schema_version: SCHEMA_VERSION,
        index,
        field: phi.field().descriptor().to_string(),
        input: f.source.clone(),
        form: phi.render(),
        dim: phi.dim(),
        status: t.0,
        reports,
    }
}

/// Evaluates every form of the job on `workers` threads; reports come back
/// in input order.
pub fn run_job(job: &Job, workers: usize) -> anyhow::Result<Vec<FormReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    Ok(pool.install(|| {
        job.forms
            .par_iter()
            .enumerate()
            .map(|(i, f)| run_form(i, f, job))
            .collect()
    }))
}

/// Worst status across the reports.
pub fn overall_status(reports: &[FormReport]) -> Status {
    reports.iter().map(|r| r.status).max().unwrap_or(Status::Ok)
}

/// One compact JSON object per line.
pub fn render_json(reports: &[FormReport]) -> anyhow::Result<String> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

fn line<T: Serialize>(out: &mut String, name: &str, o: &Option<Outcome<T>>, summary: impl Fn(&T) -> String) {
    match o {
        None => {}
        Some(Outcome::Ok(x)) => {
            let _ = writeln!(out, "  {name}: {}", summary(x));
        }
        Some(Outcome::Err(e)) => {
            let _ = writeln!(out, "  {name}: error: {}", e.error);
        }
    }
}

fn torsion_text(r: &ChowReport) -> String {
    let group = match (&r.torsion.group, r.torsion.is_exact()) {
        (Some(g), true) => format!("torsion {g}"),
        _ => format!("torsion of order at most {}", r.torsion.order),
    };
    let mut s = format!("{group} [{}]", r.rules.join(", "));
    if !r.assumptions.is_empty() {
        let _ = write!(s, " assuming: {}", r.assumptions.join("; "));
    }
    s
}

pub fn render_text(reports: &[FormReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "#{} {} over {} (dim {}, {})", r.index, r.form, r.field, r.dim, r.status);
        let rs = &r.reports;
        line(&mut out, "invariants", &rs.invariants, |x| {
            let arf = x.arf.as_deref().unwrap_or("-");
            format!("nonsingular {}, arf {arf}", x.nonsingular)
        });
        line(&mut out, "witt", &rs.witt, |x| {
            let mut s = x.verdict.clone();
            if let (Some(i), Some(d)) = (x.witt_index, x.kernel_dim) {
                let _ = write!(s, ", witt index {i}, kernel dim {d}");
            }
            if let Some(w) = &x.witness {
                let _ = write!(s, ", witness ({})", w.join(", "));
            }
            if let Some(reason) = &x.reason {
                let _ = write!(s, " ({reason})");
            }
            s
        });
        line(&mut out, "clifford", &rs.clifford, |x| {
            let si = &x.splitting_index;
            match (si.s, si.ind) {
                (Some(s), Some(ind)) => format!("s = {s}, ind = {ind} [{}]", si.rule),
                _ => format!(
                    "s in [{}, {}], ind in [{}, {}] [{}]",
                    si.s_interval.0, si.s_interval.1, si.ind_interval.0, si.ind_interval.1, si.rule
                ),
            }
        });
        line(&mut out, "pfister", &rs.pfister, |x| {
            let mut s = format!("neighbor {}", x.verdict);
            if let Some(rule) = &x.rule {
                let _ = write!(s, " [{rule}]");
            }
            if let Some(w) = &x.witness {
                let _ = write!(s, " in {}*{}", w.scalar, w.pfister.dsl);
            }
            s
        });
        line(&mut out, "chow2", &rs.chow2, torsion_text);
        line(&mut out, "chow3", &rs.chow3, torsion_text);
    }
    out
}

pub fn render(reports: &[FormReport], format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => render_json(reports),
        Format::Text => Ok(render_text(reports)),
    }
}

/// Settings read from a `--config` TOML file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub field: Option<String>,
    pub run: Option<String>,
    pub json: Option<bool>,
    pub strict: Option<bool>,
    pub degree_bound: Option<u32>,
    pub budget: Option<u64>,
    pub max_degree: Option<usize>,
    pub max_depth: Option<usize>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn parse(text: &str) -> anyhow::Result<Config> {
        Ok(toml::from_str(text)?)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Undecided => "undecided",
            Status::Error => "error",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statement_offsets() {
        let s = statements("field F2((t)); form H # note\n  run witt;");
        assert_eq!(s, vec![(0, "field F2((t))"), (15, "form H"), (31, "run witt")]);
        let s = statements("form pf(s,t;1); run chow2");
        assert_eq!(s, vec![(0, "form pf(s,t;1)"), (16, "run chow2")]);
    }

    #[test]
    fn runs() {
        assert_eq!(parse_runs("chow3, witt").unwrap(), vec![Computation::Witt, Computation::Chow3]);
        assert_eq!(parse_runs("all").unwrap().len(), 6);
        assert_eq!(parse_runs("witt,bogus").unwrap_err(), "bogus");
    }

    #[test]
    fn config_keys() {
        let c = Config::parse("field = \"F2((t))\"\nworkers = 4\ndegree-bound = 3\n").unwrap();
        assert_eq!(c.workers, Some(4));
        assert_eq!(c.degree_bound, Some(3));
        assert!(Config::parse("colour = 1").is_err());
    }
}
