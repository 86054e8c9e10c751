//! Command dispatch and the exit-code contract: 0 success, 1 mathematically
//! invalid input, 2 unreadable or schema-violating input, 3 internal
//! invariant breach.

use std::ffi::OsString;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use thiserror::Error;
use torocob::cobordism::CobordismError;
use torocob::corners::{vertex_cut, vertex_cut_bottom};
use torocob::equivalence::EquivalenceError;
use torocob::families::{check_descriptor, FamilyError};
use torocob::{
    cobordism_to_projective_spaces, data_equivalent, decompose_2d, hirzebruch_bounds, invariant_screen,
    lens_from_interval, make_orbifold, null_cobordism, product_with_interval, singular_strata, to_canonical_pretty,
    validate_characteristic, validate_nice, validate_r_characteristic, verify_certificate, verify_witness,
    vertex_cut_certificate, BundleFlag, CharFunError, CharFunction, CornersComplex, CornersError, Dataset,
    IntVector, ValidityReport,
};

use crate::corpus;
use crate::schema::{envelope, BaseSpec, Cut, DataDoc, InputDoc, OutputDoc, SCHEMA_KEY, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "torocob", version, about = "Exact combinatorics of torus orbifolds and their cobordisms")]
pub struct Cli {
    /// Re-run every case listed in DIR/manifest.json and compare outputs byte for byte.
    #[arg(long, value_name = "DIR")]
    pub corpus_check: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BundleArg {
    Trivial,
    Abstract,
}

impl From<BundleArg> for BundleFlag {
    fn from(b: BundleArg) -> Self {
        match b {
            BundleArg::Trivial => BundleFlag::Trivial,
            BundleArg::Abstract => BundleFlag::Abstract,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct IoArgs {
    #[arg(value_name = "INPUT")]
    pub path: Option<PathBuf>,
    #[arg(long = "input", value_name = "PATH", conflicts_with = "path")]
    pub input: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Override the bundle flag of the input.
    #[arg(long, value_enum)]
    pub bundle: Option<BundleArg>,
    /// On invalid input, write the validity report as the result.
    #[arg(long)]
    pub emit_report: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check niceness and (rational) characteristic conditions.
    Validate(IoArgs),
    /// Local groups of every face.
    LocalGroups(IoArgs),
    /// Build a base, optionally with vertex cuts.
    Construct(IoArgs),
    /// Cobordism to orbifold projective spaces.
    Cobordism(IoArgs),
    /// Null cobordism of a fixed-point-free orbifold.
    NullCobordism(IoArgs),
    /// Relation among the projective spaces at the vertices of a simple base.
    VertexCutRelation(IoArgs),
    /// Boundary pieces of a manifold with marked facets.
    Boundary(IoArgs),
    /// Equivalence of two data sets named in a manifest.
    Equiv(IoArgs),
    /// Connected-sum decomposition of a 2-dimensional orbifold.
    #[command(name = "decompose-2d")]
    Decompose2d(IoArgs),
    /// Bounding check for four fan vectors.
    Hirzebruch(IoArgs),
    /// Lens space of an interval with end vectors u, v.
    Lens(IoArgs),
    /// Re-check a certificate or descriptor.
    Verify(IoArgs),
}

impl Command {
    pub fn io(&self) -> &IoArgs {
        match self {
            Command::Validate(a)
            | Command::LocalGroups(a)
            | Command::Construct(a)
            | Command::Cobordism(a)
            | Command::NullCobordism(a)
            | Command::VertexCutRelation(a)
            | Command::Boundary(a)
            | Command::Equiv(a)
            | Command::Decompose2d(a)
            | Command::Hirzebruch(a)
            | Command::Lens(a)
            | Command::Verify(a) => a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{message}")]
    Invalid { message: String, report: Option<ValidityReport> },
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::Schema(_) => 2,
            CliError::Invalid { .. } => 1,
            CliError::Internal(_) => 3,
        }
    }

    fn invalid(message: impl ToString) -> Self {
        CliError::Invalid { message: message.to_string(), report: None }
    }

    fn with_report(message: impl ToString, report: &ValidityReport) -> Self {
        CliError::Invalid { message: message.to_string(), report: Some(report.clone()) }
    }
}

impl From<CornersError> for CliError {
    fn from(e: CornersError) -> Self {
        match &e {
            CornersError::NotNice(r) => CliError::with_report(&e, r),
            _ => CliError::invalid(e),
        }
    }
}

impl From<CharFunError> for CliError {
    fn from(e: CharFunError) -> Self {
        CliError::invalid(e)
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match &e {
            FamilyError::InvalidComplex(r) | FamilyError::InvalidCharFunction(r) => CliError::with_report(&e, r),
            _ => CliError::invalid(e),
        }
    }
}

impl From<CobordismError> for CliError {
    fn from(e: CobordismError) -> Self {
        match &e {
            CobordismError::InvalidComplex(r)
            | CobordismError::InvalidCharFunction(r)
            | CobordismError::InvalidRs(r)
            | CobordismError::InvalidMarked(r) => CliError::with_report(&e, r),
            CobordismError::Family(f) => f.clone().into(),
            CobordismError::Corners(c) => c.clone().into(),
            _ => CliError::invalid(e),
        }
    }
}

impl From<EquivalenceError> for CliError {
    fn from(e: EquivalenceError) -> Self {
        match &e {
            EquivalenceError::InvalidComplex(r) | EquivalenceError::InvalidCharFunction(r) => {
                CliError::with_report(&e, r)
            }
            _ => CliError::invalid(e),
        }
    }
}

/// Turns a failed self-check of freshly computed output into exit code 3.
pub fn ensure(report: ValidityReport, what: &str) -> Result<(), CliError> {
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Internal(format!("{what} failed its own check: {report}")))
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn read_document(path: &Path) -> Result<InputDoc, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<InputDoc, CliError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let Value::Object(map) = &mut value else {
        return Err(CliError::Schema("a document must be a JSON object".into()));
    };
    match map.remove(SCHEMA_KEY) {
        Some(Value::String(v)) if v == SCHEMA_VERSION => {}
        Some(other) => return Err(CliError::Schema(format!("unsupported {SCHEMA_KEY} {other}"))),
        None => return Err(CliError::Schema(format!("missing {SCHEMA_KEY}"))),
    }
    serde_json::from_value(value).map_err(|e| CliError::Schema(e.to_string()))
}

fn resolve_base(spec: BaseSpec) -> Result<CornersComplex, CliError> {
    match (spec.base, spec.builder) {
        (Some(b), None) => Ok(b),
        (None, Some(builder)) => Ok(builder.build()?),
        _ => Err(CliError::Schema("give exactly one of `base` and `builder`".into())),
    }
}

fn resolve_data(doc: DataDoc, bundle: Option<BundleArg>) -> Result<(CornersComplex, CharFunction, BundleFlag), CliError> {
    let flag = bundle.map(BundleFlag::from).or(doc.bundle).unwrap_or(BundleFlag::Trivial);
    let base = resolve_base(doc.spec())?;
    Ok((base, doc.charfun, flag))
}

fn expect_kind(doc: InputDoc, want: &str) -> Result<InputDoc, CliError> {
    if doc.kind() == want {
        Ok(doc)
    } else {
        Err(CliError::Schema(format!("expected a `{want}` document, found `{}`", doc.kind())))
    }
}

fn data_input(doc: InputDoc, bundle: Option<BundleArg>) -> Result<(CornersComplex, CharFunction, BundleFlag), CliError> {
    match expect_kind(doc, "data")? {
        InputDoc::Data(d) => resolve_data(d, bundle),
        _ => unreachable!("kind checked"),
    }
}

/// Niceness and rational characteristic condition, as an error.
fn require_valid(c: &CornersComplex, f: &CharFunction) -> Result<(), CliError> {
    let nice = validate_nice(c);
    if !nice.is_valid() {
        return Err(CliError::with_report("base is not a nice manifold with corners", &nice));
    }
    let r = validate_r_characteristic(c, f)?;
    if !r.is_valid() {
        return Err(CliError::with_report("not an r-characteristic function", &r));
    }
    Ok(())
}

/// Output document and exit code (0, or 1 for a negative verdict that
/// still produces a document).
fn execute(cmd: &Command) -> Result<(OutputDoc, i32), CliError> {
    let io = cmd.io();
    let path = io
        .path
        .as_ref()
        .or(io.input.as_ref())
        .ok_or_else(|| CliError::Schema("no input given".into()))?;
    let doc = read_document(path)?;
    let bundle = io.bundle;
    match cmd {
        Command::Validate(_) => {
            let (c, f, _) = data_input(doc, bundle)?;
            let nice = validate_nice(&c);
            if !nice.is_valid() {
                let out = OutputDoc::Validation { valid: false, nice, r_characteristic: None, characteristic: None };
                return Ok((out, 1));
            }
            let r = validate_r_characteristic(&c, &f)?;
            let ch = validate_characteristic(&c, &f)?;
            let valid = r.is_valid();
            let out = OutputDoc::Validation { valid, nice, r_characteristic: Some(r), characteristic: Some(ch) };
            Ok((out, if valid { 0 } else { 1 }))
        }
        Command::LocalGroups(_) => {
            let (c, f, _) = data_input(doc, bundle)?;
            require_valid(&c, &f)?;
            Ok((OutputDoc::Strata { strata: singular_strata(&c, &f)? }, 0))
        }
        Command::Construct(_) => {
            let InputDoc::Construct(d) = expect_kind(doc, "construct")? else { unreachable!() };
            let base = d.builder.build()?;
            ensure(validate_nice(&base), "constructed base")?;
            let out = match d.cut {
                Cut::None => OutputDoc::Complex { complex: base },
                Cut::Vertices => OutputDoc::Marked { marked: vertex_cut(&base)? },
                Cut::Bottom => {
                    let y = product_with_interval(&base);
                    let bottom: Vec<String> =
                        y.vertices().filter(|v| v.facet_set.contains("bottom")).map(|v| v.id.clone()).collect();
                    OutputDoc::Marked { marked: vertex_cut_bottom(&y, &bottom)? }
                }
            };
            if let OutputDoc::Marked { marked } = &out {
                ensure(torocob::validate_marked(marked), "constructed marked manifold")?;
            }
            Ok((out, 0))
        }
        Command::Cobordism(_) | Command::NullCobordism(_) => {
            let (c, f, flag) = data_input(doc, bundle)?;
            let cert = if matches!(cmd, Command::Cobordism(_)) {
                cobordism_to_projective_spaces(&c, &f, flag)?
            } else {
                null_cobordism(&c, &f, flag)?
            };
            ensure(verify_certificate(&cert), "certificate")?;
            Ok((OutputDoc::Certificate { certificate: cert }, 0))
        }
        Command::VertexCutRelation(_) => {
            let InputDoc::SimpleBase(d) = expect_kind(doc, "simple-base")? else { unreachable!() };
            let base = resolve_base(BaseSpec { base: d.base, builder: d.builder })?;
            let cert = vertex_cut_certificate(&base, d.seed.as_ref())?;
            ensure(verify_certificate(&cert), "certificate")?;
            Ok((OutputDoc::Certificate { certificate: cert }, 0))
        }
        Command::Boundary(_) => {
            let InputDoc::Marked(d) = expect_kind(doc, "marked")? else { unreachable!() };
            let flag = bundle.map(BundleFlag::from).or(d.bundle).unwrap_or(BundleFlag::Trivial);
            let pieces = torocob::boundary(&d.marked, &d.rs, flag)?;
            for p in &pieces {
                ensure(check_descriptor(p), "boundary piece")?;
            }
            Ok((OutputDoc::Boundary { pieces }, 0))
        }
        Command::Equiv(_) => {
            let InputDoc::Manifest(m) = expect_kind(doc, "manifest")? else { unreachable!() };
            let dir = path.parent().unwrap_or(Path::new("."));
            let load = |rel: &str| -> Result<Dataset, CliError> {
                let (base, charfun, bundle) = data_input(read_document(&dir.join(rel))?, bundle)?;
                Ok(Dataset { base, charfun, bundle })
            };
            let (d1, d2) = (load(&m.left)?, load(&m.right)?);
            let witness = data_equivalent(&d1, &d2)?;
            if let Some(w) = &witness {
                ensure(verify_witness(&d1, &d2, w), "equivalence witness")?;
            }
            let refutation = if witness.is_none() { invariant_screen(&d1, &d2)? } else { None };
            Ok((OutputDoc::Equivalence { equivalent: witness.is_some(), witness, refutation }, 0))
        }
        Command::Decompose2d(_) => {
            let (c, f, flag) = data_input(doc, bundle)?;
            let d = make_orbifold(&c, &f, flag)?;
            ensure(check_descriptor(&d), "descriptor")?;
            Ok((OutputDoc::Decomposition { decomposition: decompose_2d(&d)? }, 0))
        }
        Command::Hirzebruch(_) => {
            let InputDoc::Fan(d) = expect_kind(doc, "fan")? else { unreachable!() };
            let vs: [IntVector; 4] = d
                .vectors
                .try_into()
                .map_err(|v: Vec<IntVector>| CliError::Schema(format!("expected 4 vectors, found {}", v.len())))?;
            Ok((OutputDoc::Hirzebruch { result: hirzebruch_bounds(&vs)? }, 0))
        }
        Command::Lens(_) => {
            let InputDoc::Interval(d) = expect_kind(doc, "interval")? else { unreachable!() };
            Ok((OutputDoc::Lens { lens: lens_from_interval(&d.u, &d.v)? }, 0))
        }
        Command::Verify(_) => {
            let report = match doc {
                InputDoc::Certificate(c) => verify_certificate(&c.certificate),
                InputDoc::Descriptor(d) => check_descriptor(&d.descriptor),
                other => {
                    return Err(CliError::Schema(format!(
                        "expected a `certificate` or `descriptor` document, found `{}`",
                        other.kind()
                    )))
                }
            };
            let code = if report.is_valid() { 0 } else { 1 };
            Ok((OutputDoc::Report { report, error: None }, code))
        }
    }
}

fn render(doc: &OutputDoc) -> Vec<u8> {
    to_canonical_pretty(&envelope(doc)).into_bytes()
}

/// Runs one command; panics inside the library count as invariant breaches.
pub fn run_command(cmd: &Command) -> Outcome {
    let io = cmd.io();
    let result = panic::catch_unwind(AssertUnwindSafe(|| execute(cmd)))
        .unwrap_or_else(|_| Err(CliError::Internal("library panicked".into())));
    let (doc, code, stderr) = match result {
        Ok((doc, code)) => (Some(doc), code, String::new()),
        Err(e) => {
            let doc = match (&e, io.emit_report) {
                (CliError::Invalid { report: Some(r), message }, true) => {
                    Some(OutputDoc::Report { report: r.clone(), error: Some(message.clone()) })
                }
                _ => None,
            };
            (doc, e.exit_code(), format!("error: {e}\n"))
        }
    };
    let bytes = doc.as_ref().map(render).unwrap_or_default();
    match (&io.output, doc) {
        (Some(out), Some(_)) => match fs::write(out, &bytes) {
            Ok(()) => Outcome { code, stdout: Vec::new(), stderr },
            Err(e) => Outcome { code: 2, stdout: Vec::new(), stderr: format!("error: cannot write {}: {e}\n", out.display()) },
        },
        _ => Outcome { code, stdout: bytes, stderr },
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match (&cli.corpus_check, &cli.command) {
        (Some(dir), None) => corpus::check(dir),
        (None, Some(cmd)) => run_command(cmd),
        _ => Outcome {
            code: 2,
            stdout: Vec::new(),
            stderr: "error: give either a command or --corpus-check DIR\n".into(),
        },
    }
}

/// Parses arguments (the first being the program name) and runs them.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text.into_bytes(), stderr: String::new() }
            } else {
                Outcome { code, stdout: Vec::new(), stderr: text }
            }
        }
    }
}
