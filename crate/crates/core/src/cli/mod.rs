//! Batch front end: JSON configuration in, JSON report out.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraError, Field, PlanePoint, PointLiteral};
use crate::curve::{marked_set_build, CubicCurve, CurveError, CurveJson, MarkedPointSet};
use crate::maps::{
    decomposition_candidate_check, degfix_quotients, fixes_curve, homaloidal_check, map_compose,
    map_compose_with_content, preserves_curve, proper_base_points, sigma, HomaloidalReport, MapError, MapJson,
    RationalMap,
};
use crate::picard::{certify_free_product, predicted_degree, PicLattice, PicardError, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_RECOVERABLE: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;

pub const DEFAULT_MAX_LEN: usize = 12;
const CROSSCHECK_MAX_LEN: usize = 2;

#[derive(Debug, Parser)]
#[command(name = "inertia", version, about = "Cubic involutions of a plane cubic: construction and certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify that a cubic is smooth and irreducible.
    CurveCheck(JobArgs),
    /// Build the cubic involution at each point.
    Sigma(JobArgs),
    /// Compose maps (`--map`, outermost first) or the involutions of a word.
    Compose(JobArgs),
    /// Check inertia membership and base points of a map.
    Verify(JobArgs),
    /// List base points with multiplicities.
    Basepoints(JobArgs),
    /// Free-product certificate over all reduced words up to `--max-len`.
    Certify(JobArgs),
    /// Compare lattice-predicted and symbolic degrees of words.
    DegreeCrosscheck(JobArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CurveCheck(_) => "curve-check",
            Command::Sigma(_) => "sigma",
            Command::Compose(_) => "compose",
            Command::Verify(_) => "verify",
            Command::Basepoints(_) => "basepoints",
            Command::Certify(_) => "certify",
            Command::DegreeCrosscheck(_) => "degree-crosscheck",
        }
    }

    fn args(&self) -> &JobArgs {
        match self {
            Command::CurveCheck(a)
            | Command::Sigma(a)
            | Command::Compose(a)
            | Command::Verify(a)
            | Command::Basepoints(a)
            | Command::Certify(a)
            | Command::DegreeCrosscheck(a) => a,
        }
    }
}

#[derive(Debug, Args, Default, Clone)]
pub struct JobArgs {
    /// `Q` or `Fp:<p>`.
    #[arg(long)]
    pub field: Option<String>,
    /// JSON file: ten coefficients, `{"coefficients": [...]}` or `{"form": "..."}`.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// JSON file: list of points, each three coordinate literals.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Comma-separated 0-based indices into the point list.
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Generic configuration with no coordinates.
    #[arg(long = "abstract")]
    pub abstract_mode: bool,
    /// Number of generators in abstract mode.
    #[arg(long)]
    pub generators: Option<usize>,
    /// JSON map file; repeat to compose.
    #[arg(long = "map")]
    pub maps: Vec<PathBuf>,
    /// JSON job configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSpec {
    Form { form: String },
    Json(CurveJson),
}

/// The resolved job. Its canonical JSON is hashed into every report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub points: Option<Vec<PointLiteral>>,
    #[serde(default)]
    pub word: Option<Vec<usize>>,
    #[serde(default)]
    pub max_len: Option<usize>,
    #[serde(default, rename = "abstract")]
    pub abstract_mode: bool,
    #[serde(default)]
    pub generators: Option<usize>,
    /// Abstract mode: which generators carry an infinitely near successor.
    #[serde(default)]
    pub near: Option<Vec<bool>>,
    #[serde(default)]
    pub maps: Option<Vec<MapJson>>,
}

impl JobConfig {
    pub fn hash(&self, command: &str) -> String {
        let v = json!({ "command": command, "config": self });
        hex::encode(Sha256::digest(serde_json::to_vec(&v).expect("serializable")))
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    pub details: Value,
}

impl CliError {
    fn malformed(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_MALFORMED,
            kind: "MalformedInput",
            message: message.into(),
            details: Value::Null,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError {
            code: EXIT_MALFORMED,
            kind: "Algebra",
            message: e.to_string(),
            details: Value::Null,
        }
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        let (code, kind, details) = match &e {
            CurveError::QuarticNotSplit { generator, factor } => (
                EXIT_RECOVERABLE,
                "QuarticNotSplit",
                json!({ "generator": generator, "factor": factor }),
            ),
            CurveError::Singular { witness, .. } => (EXIT_MALFORMED, "Singular", json!({ "witness": witness })),
            CurveError::Reducible { factor } => (EXIT_MALFORMED, "Reducible", json!({ "factor": factor })),
            _ => (EXIT_MALFORMED, "Curve", Value::Null),
        };
        CliError {
            code,
            kind,
            message: e.to_string(),
            details,
        }
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::Curve(c) => c.into(),
            MapError::BasePointsNotRational { ref found, unresolved } => CliError {
                code: EXIT_RECOVERABLE,
                kind: "BasePointsNotRational",
                message: e.to_string(),
                details: json!({ "found": found, "unresolved": unresolved }),
            },
            MapError::DegreeMismatch(_) | MapError::ZeroMap | MapError::NormalizationViolated(_) => {
                CliError::malformed(e.to_string())
            }
            MapError::Algebra(a) => a.into(),
            other => CliError {
                code: EXIT_VERIFICATION,
                kind: "Verification",
                message: other.to_string(),
                details: Value::Null,
            },
        }
    }
}

impl From<PicardError> for CliError {
    fn from(e: PicardError) -> Self {
        match e {
            PicardError::AssertionFailure { .. }
            | PicardError::RecursionMismatch(_)
            | PicardError::InvariantViolated { .. } => CliError {
                code: EXIT_VERIFICATION,
                kind: "Verification",
                message: e.to_string(),
                details: Value::Null,
            },
            other => CliError::malformed(other.to_string()),
        }
    }
}

/// `-` reads standard input.
fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, CliError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))
}

/// Reads `--config` and applies the remaining flags on top.
pub fn resolve_config(args: &JobArgs) -> Result<JobConfig, CliError> {
    let mut cfg: JobConfig = match &args.config {
        Some(p) => read_json(p)?,
        None => JobConfig::default(),
    };
    if let Some(f) = &args.field {
        cfg.field = Some(f.clone());
    }
    if let Some(p) = &args.curve {
        cfg.curve = Some(read_json(p)?);
    }
    if let Some(p) = &args.points {
        cfg.points = Some(read_json(p)?);
    }
    if let Some(w) = &args.word {
        let letters = w
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::malformed(format!("--word: {e}")))?;
        cfg.word = Some(letters);
    }
    if args.max_len.is_some() {
        cfg.max_len = args.max_len;
    }
    if args.abstract_mode {
        cfg.abstract_mode = true;
    }
    if args.generators.is_some() {
        cfg.generators = args.generators;
    }
    if !args.maps.is_empty() {
        cfg.maps = Some(args.maps.iter().map(read_json).collect::<Result<_, _>>()?);
    }
    Ok(cfg)
}

struct Job<'a> {
    cfg: &'a JobConfig,
}

impl Job<'_> {
    fn field(&self) -> Result<Field, CliError> {
        Ok(Field::parse_spec(self.cfg.field.as_deref().unwrap_or("Q"))?)
    }

    fn curve(&self) -> Result<CubicCurve, CliError> {
        let field = self.field()?;
        match &self.cfg.curve {
            None => Err(CliError::malformed("missing --curve")),
            Some(CurveSpec::Form { form }) => Ok(CubicCurve::parse(field, form)?),
            Some(CurveSpec::Json(j)) => Ok(CubicCurve::from_coefficients(field, j.coefficients())?),
        }
    }

    fn points(&self) -> Result<Vec<PlanePoint>, CliError> {
        let field = self.field()?;
        let pts = self.cfg.points.as_ref().ok_or_else(|| CliError::malformed("missing --points"))?;
        Ok(pts.iter().map(|p| p.resolve(field)).collect::<Result<_, _>>()?)
    }

    fn word_indices(&self, n: usize, reduced: bool) -> Result<Vec<usize>, CliError> {
        let w = self.cfg.word.clone().unwrap_or_else(|| vec![0]);
        if let Some(&bad) = w.iter().find(|&&i| i >= n) {
            return Err(CliError::malformed(format!("word letter {bad} out of range (have {n} points)")));
        }
        if reduced && w.windows(2).any(|p| p[0] == p[1]) {
            return Err(CliError::malformed(format!("word {w:?} is not reduced")));
        }
        Ok(w)
    }

    /// `--map` files composed outermost first, or the involutions of the word.
    fn map(&self) -> Result<RationalMap, CliError> {
        let field = self.field()?;
        if let Some(maps) = &self.cfg.maps {
            let mut parsed = maps.iter().map(|m| RationalMap::from_json(field, m));
            let mut acc = parsed.next().ok_or_else(|| CliError::malformed("empty map list"))??;
            for m in parsed {
                acc = map_compose(&acc, &m?)?;
            }
            return Ok(acc);
        }
        let c = self.curve()?;
        let pts = self.points()?;
        let w = self.word_indices(pts.len(), false)?;
        word_map(&c, &pts, &w)
    }
}

/// `σ_{p_m} ∘ … ∘ σ_{p_1}` for the word `p_1 … p_m`.
pub fn word_map(c: &CubicCurve, pts: &[PlanePoint], word: &[usize]) -> Result<RationalMap, CliError> {
    let mut acc = RationalMap::identity(c.field());
    for &i in word {
        acc = map_compose(&sigma(c, &pts[i])?, &acc)?;
    }
    Ok(acc)
}

fn homaloidal_json(r: &HomaloidalReport) -> Value {
    json!({
        "degree": r.degree,
        "records": r.records.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
        "multiplicities": r.multiplicities(),
        "sum_k": r.sum_k,
        "sum_k2": r.sum_k2,
        "deficit": [r.deficit.0, r.deficit.1],
        "pattern_ok": r.pattern_ok,
        "complete": r.complete,
    })
}

fn status(ok: bool) -> &'static str {
    if ok {
        "verified"
    } else {
        "failed"
    }
}

fn curve_check(job: &Job) -> Result<(i32, Value), CliError> {
    match job.curve() {
        Ok(c) => Ok((
            EXIT_OK,
            json!({ "status": "smooth", "field": c.field().spec(), "coefficients": c.coefficients() }),
        )),
        Err(CliError {
            kind: kind @ ("Singular" | "Reducible"),
            message,
            details,
            ..
        }) => Ok((
            EXIT_VERIFICATION,
            json!({ "status": kind.to_lowercase(), "message": message, "counterexample": details }),
        )),
        Err(e) => Err(e),
    }
}

fn sigma_cmd(job: &Job) -> Result<(i32, Value), CliError> {
    let c = job.curve()?;
    let mut all_ok = true;
    let mut out = Vec::new();
    for p in job.points()? {
        let s = sigma(&c, &p)?;
        let involution = map_compose(&s, &s)?.is_identity();
        let fixes = fixes_curve(&s, &c);
        all_ok &= involution && fixes && s.degree() == 3;
        out.push(json!({
            "point": p,
            "degree": s.degree(),
            "components": s.to_json().components,
            "involution": involution,
            "fixes_curve": fixes,
            "preserves_curve": preserves_curve(&s, &c),
        }));
    }
    let code = if all_ok { EXIT_OK } else { EXIT_VERIFICATION };
    Ok((code, json!({ "status": status(all_ok), "sigmas": out })))
}

fn compose_cmd(job: &Job) -> Result<(i32, Value), CliError> {
    let m = job.map()?;
    Ok((EXIT_OK, json!({ "status": "verified", "degree": m.degree(), "map": m.to_json() })))
}

fn verify_cmd(job: &Job) -> Result<(i32, Value), CliError> {
    let c = job.curve()?;
    let m = job.map()?;
    let fixes = fixes_curve(&m, &c);
    let quotients = degfix_quotients(&m, &c).ok();
    let quotient_degrees: Option<Vec<u32>> = quotients.as_ref().map(|q| q.iter().map(|f| f.degree()).collect());
    let decomposition = decomposition_candidate_check(&m, &c)?;
    let homaloidal = homaloidal_check(&m)?;
    let ok = fixes && decomposition.violations.is_empty();
    Ok((
        if ok { EXIT_OK } else { EXIT_VERIFICATION },
        json!({
            "status": status(ok),
            "degree": m.degree(),
            "fixes_curve": fixes,
            "preserves_curve": preserves_curve(&m, &c),
            "degfix_quotient_degrees": quotient_degrees,
            "decomposition": {
                "checked": decomposition.checked,
                "violations": decomposition.violations,
                "unresolved": decomposition.unresolved,
            },
            "homaloidal": homaloidal_json(&homaloidal),
        }),
    ))
}

fn basepoints_cmd(job: &Job) -> Result<(i32, Value), CliError> {
    let m = job.map()?;
    proper_base_points(&m)?;
    let rep = homaloidal_check(&m)?;
    let ok = rep.passes();
    Ok((
        if ok { EXIT_OK } else { EXIT_VERIFICATION },
        json!({ "status": status(ok), "homaloidal": homaloidal_json(&rep) }),
    ))
}

fn lattice(job: &Job) -> Result<(PicLattice, Option<(CubicCurve, Vec<PlanePoint>)>), CliError> {
    if job.cfg.abstract_mode {
        let near = match (&job.cfg.near, job.cfg.generators) {
            (Some(n), _) => n.clone(),
            (None, g) => vec![false; g.unwrap_or(3)],
        };
        return Ok((PicLattice::new(MarkedPointSet::generic(&near)), None));
    }
    let c = job.curve()?;
    let pts = job.points()?;
    let ms = marked_set_build(&c, &pts)?;
    Ok((PicLattice::new(ms), Some((c, pts))))
}

fn certify_cmd(job: &Job) -> Result<(i32, Value), CliError> {
    let (lat, _) = lattice(job)?;
    let cert = certify_free_product(&lat, job.cfg.max_len.unwrap_or(DEFAULT_MAX_LEN))?;
    let code = if cert.status == "certified" { EXIT_OK } else { EXIT_VERIFICATION };
    Ok((code, json!({ "status": cert.status, "certificate": cert })))
}

fn reduced_words(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in (0..n).filter(|&g| w.last() != Some(&g)) {
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn crosscheck_cmd(job: &Job) -> Result<(i32, Value), CliError> {
    if job.cfg.abstract_mode {
        return Err(CliError::malformed("degree-crosscheck needs a curve and points"));
    }
    let (lat, geo) = lattice(job)?;
    let (c, pts) = geo.expect("exact mode");
    let words = match &job.cfg.word {
        Some(_) => vec![job.word_indices(pts.len(), true)?],
        None => reduced_words(pts.len(), job.cfg.max_len.unwrap_or(CROSSCHECK_MAX_LEN)),
    };
    let sigmas: Vec<RationalMap> = pts.iter().map(|p| sigma(&c, p)).collect::<Result<_, _>>()?;
    let mut ok = true;
    let mut rows = Vec::new();
    for w in words {
        let predicted = predicted_degree(&lat, &Word::from_indices(&lat, &w)?)?;
        let mut m = RationalMap::identity(c.field());
        for &i in &w {
            m = map_compose_with_content(&sigmas[i], &m)?.0;
        }
        let agree = predicted == m.degree().into();
        ok &= agree;
        rows.push(json!({ "word": w, "predicted": predicted.to_string(), "symbolic": m.degree(), "agree": agree }));
    }
    Ok((
        if ok { EXIT_OK } else { EXIT_VERIFICATION },
        json!({ "status": status(ok), "orientation": crate::picard::ORIENTATION, "words": rows }),
    ))
}

pub const COMMANDS: [&str; 7] =
    ["curve-check", "sigma", "compose", "verify", "basepoints", "certify", "degree-crosscheck"];

/// Runs one command on parsed arguments; returns the exit code and the JSON report.
pub fn run(command: &Command) -> (i32, Value) {
    let name = command.name();
    match resolve_config(command.args()) {
        Ok(cfg) => run_config(name, &cfg),
        Err(e) => (e.code, error_report(name, None, &e)),
    }
}

/// Runs a named command on a resolved configuration.
pub fn run_config(name: &str, cfg: &JobConfig) -> (i32, Value) {
    let hash = cfg.hash(name);
    let job = Job { cfg };
    let result = match name {
        "curve-check" => curve_check(&job),
        "sigma" => sigma_cmd(&job),
        "compose" => compose_cmd(&job),
        "verify" => verify_cmd(&job),
        "basepoints" => basepoints_cmd(&job),
        "certify" => certify_cmd(&job),
        "degree-crosscheck" => crosscheck_cmd(&job),
        other => Err(CliError::malformed(format!("unknown command `{other}`"))),
    };
    match result {
        Ok((code, mut body)) => {
            let obj = body.as_object_mut().expect("reports are objects");
            obj.insert("command".into(), json!(name));
            obj.insert("config_hash".into(), json!(hash));
            (code, body)
        }
        Err(e) => (e.code, error_report(name, Some(hash), &e)),
    }
}

fn error_report(command: &str, hash: Option<String>, e: &CliError) -> Value {
    json!({
        "command": command,
        "config_hash": hash,
        "status": "error",
        "error": { "kind": e.kind, "message": e.message, "details": e.details },
    })
}

/// Parses arguments, runs, writes the report; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (code, report) = run(&cli.command);
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    match &cli.command.args().out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_MALFORMED;
            }
        }
        None => print!("{text}"),
    }
    eprintln!(
        "{}: {} (exit {code})",
        cli.command.name(),
        report["status"].as_str().unwrap_or("?")
    );
    code
}
