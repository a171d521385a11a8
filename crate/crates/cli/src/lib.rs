//! Command-line driver for the reduction pipeline.
//!
//! Every command returns an [`Outcome`] holding an exit code, a plain-text
//! report and the same report as JSON. Exit codes: 0 success, 1 refuted
//! (a decision came out negative or a certificate failed), 2 usage, 3 budget
//! exceeded, 4 malformed input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tenrank_core::budget::{DEFAULT_BUDGET, DEFAULT_NODE_BUDGET};
use tenrank_core::fields::{matrix_rank, FieldError, FieldSpec};
use tenrank_core::minrank::{
    build_matrix, evaluate_matrix, minrank_bruteforce, minrank_witness_search, read_symbolic,
    verify_observation, write_symbolic, MinrankError, SymbolicMatrix,
};
use tenrank_core::ranklab::{
    absorb_slices, eig0, expansion_from_point, read_family, realization_space, tensor_rank_leq,
    write_family, RankError, SliceFamily, Verdict,
};
use tenrank_core::syslang::{
    check_assumptions, normalize, normalize_only, parse_source, quadratize, read_system,
    write_assignment, write_system, Assignment, Assumption, ParseError, QuadraticSystem, SysError,
};
use tenrank_core::tensorize::{
    build_tensor, check_slice_independence, expansion_from_assignment, read_expansion, read_tensor,
    tensor_digest, verify_expansion, write_bundle_meta, write_expansion, write_tensor, Expansion,
    Tensor, TensorError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "tenrank",
    version,
    about = "Polynomial systems to minrank matrices and tensor rank instances"
)]
pub struct Cli {
    /// Worker threads for the search commands (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, quadratize and normalize a source file, then build the matrix and tensor.
    Compile(CompileArgs),
    /// Minimum rank of a symbolic matrix over a prime field.
    Minrank(MinrankArgs),
    /// Decide whether a tensor has rank at most a bound.
    Rank(RankArgs),
    /// Check that an expansion sums to a tensor.
    Certify(CertifyArgs),
    /// Solve for the third-mode vectors of a fixed rank-one family.
    Realize(RealizeArgs),
    /// Search for an eigenvector of eigenvalue 0 of a cubical tensor.
    Eig0(Eig0Args),
    /// Rewrite an expansion so that rank-one slices appear as its first terms.
    Absorb(AbsorbArgs),
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    pub source: PathBuf,
    /// gf<p>, q or qsqrt<d>.
    #[arg(long)]
    pub field: String,
    /// Directory for the emitted files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of system,matrix,tensor,bundle.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "system,matrix,tensor,bundle"
    )]
    pub emit: Vec<Artifact>,
    /// Also split equations that share two variables.
    #[arg(long, conflicts_with = "no_normalize")]
    pub strict: bool,
    /// Use the quadratized system as is.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Artifact {
    System,
    Matrix,
    Tensor,
    Bundle,
}

impl Artifact {
    fn file(self) -> &'static str {
        match self {
            Artifact::System => "system.json",
            Artifact::Matrix => "matrix.json",
            Artifact::Tensor => "tensor.json",
            Artifact::Bundle => "bundle.json",
        }
    }

    fn key(self) -> &'static str {
        match self {
            Artifact::System => "system",
            Artifact::Matrix => "matrix",
            Artifact::Tensor => "tensor",
            Artifact::Bundle => "bundle",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Witness,
}

#[derive(Args, Debug)]
pub struct MinrankArgs {
    pub matrix: PathBuf,
    /// Prime field; overrides the field recorded in the matrix file.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_enum, default_value = "full")]
    pub mode: Mode,
    /// Quadratic system the matrix was built from (witness mode).
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Largest number of assignments to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Directory for witness.json (and, in witness mode, expansion.json and slices.json).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    pub tensor: PathBuf,
    #[arg(long)]
    pub leq: usize,
    #[arg(long)]
    pub field: Option<String>,
    /// Largest number of search nodes.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Directory for certificate.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    pub tensor: PathBuf,
    pub expansion: PathBuf,
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    pub tensor: PathBuf,
    pub slices: PathBuf,
    #[arg(short = 'r')]
    pub r: usize,
    #[arg(long)]
    pub field: Option<String>,
    /// Directory for realization.json (an expansion at a point of the space).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Eig0Args {
    pub tensor: PathBuf,
    #[arg(long)]
    pub field: Option<String>,
    /// Largest number of vectors to test.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct AbsorbArgs {
    pub tensor: PathBuf,
    pub expansion: PathBuf,
    /// Comma-separated 1-based frontal slice indices.
    #[arg(long, value_delimiter = ',', required = true)]
    pub slices: Vec<usize>,
    #[arg(long)]
    pub field: Option<String>,
    /// Directory for absorbed.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result of one command.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

/// A command that stopped before producing a report.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn malformed(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            message: m.into(),
        }
    }

    fn refuted(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_REFUTED,
            message: m.into(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::malformed(e.to_string())
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::BadFieldFlag(_)
            | FieldError::NotPrime(_)
            | FieldError::NotSquareFree(_) => Failure::usage(e.to_string()),
            _ => Failure::malformed(e.to_string()),
        }
    }
}

impl From<SysError> for Failure {
    fn from(e: SysError) -> Self {
        match e {
            SysError::Budget(_) => Failure {
                code: EXIT_BUDGET,
                message: e.to_string(),
            },
            SysError::NotPrimeField(_) => Failure::usage(e.to_string()),
            _ => Failure::malformed(e.to_string()),
        }
    }
}

impl From<MinrankError> for Failure {
    fn from(e: MinrankError) -> Self {
        match e {
            MinrankError::Budget(_) => Failure {
                code: EXIT_BUDGET,
                message: e.to_string(),
            },
            MinrankError::NotPrimeField(_) => Failure::usage(e.to_string()),
            _ => Failure::malformed(e.to_string()),
        }
    }
}

impl From<TensorError> for Failure {
    fn from(e: TensorError) -> Self {
        match e {
            TensorError::Matrix(m) => m.into(),
            TensorError::RankTooHigh { .. } | TensorError::NotRankOne => {
                Failure::refuted(e.to_string())
            }
            _ => Failure::malformed(e.to_string()),
        }
    }
}

impl From<RankError> for Failure {
    fn from(e: RankError) -> Self {
        match e {
            RankError::Budget(_) => Failure {
                code: EXIT_BUDGET,
                message: e.to_string(),
            },
            RankError::NotPrimeField(_) => Failure::usage(e.to_string()),
            RankError::Tensor(t) => t.into(),
            RankError::NotVerified
            | RankError::NotRankOne(_)
            | RankError::Dependent
            | RankError::NoPivot(_) => Failure::refuted(e.to_string()),
            _ => Failure::malformed(e.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out` and errors to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            let _ = writeln!(err, "error: --workers must be positive");
            return EXIT_USAGE;
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    match execute(&cli.command) {
        Ok(o) => {
            if cli.json {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&o.json).expect("report serializes")
                );
            } else {
                let _ = write!(out, "{}", o.text);
            }
            o.code
        }
        Err(f) => {
            if cli.json {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&json!({"error": f.message, "code": f.code}))
                        .expect("json")
                );
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(c: &Command) -> Result<Outcome, Failure> {
    match c {
        Command::Compile(a) => cmd_compile(a),
        Command::Minrank(a) => cmd_minrank(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Realize(a) => cmd_realize(a),
        Command::Eig0(a) => cmd_eig0(a),
        Command::Absorb(a) => cmd_absorb(a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<String, Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn parse_field(flag: &str) -> Result<FieldSpec, Failure> {
    Ok(flag.parse::<FieldSpec>()?)
}

/// The field of a concrete file, checked against an optional flag.
fn concrete_field(found: &FieldSpec, flag: Option<&str>) -> Result<FieldSpec, Failure> {
    if let Some(flag) = flag {
        let f = parse_field(flag)?;
        if &f != found {
            return Err(Failure::malformed(format!(
                "file is over {found} but --field {f} was given"
            )));
        }
    }
    Ok(found.clone())
}

fn load_tensor(path: &Path, flag: Option<&str>) -> Result<Tensor, Failure> {
    let t = read_tensor(&read(path)?)?;
    concrete_field(t.field(), flag)?;
    Ok(t)
}

fn load_expansion(path: &Path, t: &Tensor) -> Result<(Expansion, bool), Failure> {
    let f = read_expansion(&read(path)?)?;
    if &f.field != t.field() {
        return Err(Failure::malformed(format!(
            "expansion is over {} but the tensor is over {}",
            f.field,
            t.field()
        )));
    }
    let digest_matches = f.target_digest == tensor_digest(t);
    Ok((f.expansion, digest_matches))
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn assignment_json(sigma: &Assignment, field: &FieldSpec) -> Value {
    let v: Value = serde_json::from_str(&write_assignment(sigma, field)).expect("assignment json");
    v["values"].clone()
}

fn cmd_compile(a: &CompileArgs) -> Result<Outcome, Failure> {
    let field = parse_field(&a.field)?;
    let text = read(&a.source)?;
    let mut stages: Vec<Value> = Vec::new();
    let mut lines = String::new();

    let t = Instant::now();
    let formula = parse_source(&text)?;
    stages.push(
        json!({"stage": "parse", "status": "ok", "equations": formula.equations.len(),
        "variables": formula.variables.len(), "ms": ms(t)}),
    );
    let _ = writeln!(
        lines,
        "parse: {} equations in {} variables",
        formula.equations.len(),
        formula.variables.len()
    );

    let t = Instant::now();
    let quad = quadratize(&formula);
    stages.push(json!({"stage": "quadratize", "status": "ok", "m": quad.m(), "variables": quad.variables.len(), "ms": ms(t)}));
    let _ = writeln!(
        lines,
        "quadratize: m = {}, {} variables",
        quad.m(),
        quad.variables.len()
    );

    let t = Instant::now();
    let (sys, repaired): (QuadraticSystem, Vec<Assumption>) = if a.no_normalize {
        (quad.clone(), vec![])
    } else if a.strict {
        (
            normalize(&quad),
            vec![Assumption::A1, Assumption::A2, Assumption::A3],
        )
    } else {
        let which = vec![Assumption::A1, Assumption::A3];
        (normalize_only(&quad, &which), which)
    };
    let introduced: Vec<&String> = sys
        .variables
        .iter()
        .filter(|v| quad.index_of(v).is_none())
        .collect();
    let remaining: Vec<String> = check_assumptions(&sys)
        .iter()
        .map(|v| v.to_string())
        .collect();
    stages.push(
        json!({"stage": "normalize", "status": "ok", "m": sys.m(), "variables": sys.variables.len(),
        "repaired": repaired.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>(),
        "introduced": introduced, "violations": remaining, "ms": ms(t)}),
    );
    let _ = writeln!(
        lines,
        "normalize: m = {}, {} variables, introduced [{}]",
        sys.m(),
        sys.variables.len(),
        introduced
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    );
    for v in &remaining {
        let _ = writeln!(lines, "  note: {v}");
    }

    let t = Instant::now();
    let matrix = match build_matrix(&sys) {
        Ok(m) => m,
        Err(e) => {
            let f: Failure = e.into();
            return Err(Failure {
                code: f.code,
                message: format!("build-matrix: {}", f.message),
            });
        }
    };
    let obs = verify_observation(&matrix);
    stages.push(json!({"stage": "build-matrix", "status": "ok", "m": matrix.m(), "n": matrix.n(), "dim": matrix.dim(),
        "copies": matrix.copies().len(), "observation": obs, "ms": ms(t)}));
    let _ = writeln!(
        lines,
        "build-matrix: {0}x{0}, n = {1}, observation {2}",
        matrix.dim(),
        matrix.n(),
        if obs.iter().all(|&b| b) {
            "holds"
        } else {
            "FAILS"
        }
    );

    let t = Instant::now();
    let bundle = build_tensor(&matrix, &field);
    let independent = check_slice_independence(&bundle);
    stages.push(json!({"stage": "build-tensor", "status": "ok", "dims": bundle.tensor.dims(), "m": bundle.m, "n": bundle.n,
        "rank_target": bundle.rank_target, "slices_independent": independent, "ms": ms(t)}));
    let [d1, d2, d3] = bundle.tensor.dims();
    let _ = writeln!(
        lines,
        "build-tensor: {d1}x{d2}x{d3}, rank target {}",
        bundle.rank_target
    );

    let mut artifacts = serde_json::Map::new();
    if let Some(dir) = &a.out {
        for art in &a.emit {
            let body = match art {
                Artifact::System => write_system(&sys, Some(&field)),
                Artifact::Matrix => write_symbolic(&matrix, Some(&field)),
                Artifact::Tensor => write_tensor(&bundle.tensor),
                Artifact::Bundle => write_bundle_meta(&bundle),
            };
            let path = write_file(dir, art.file(), &body)?;
            let _ = writeln!(lines, "wrote {path}");
            artifacts.insert(art.key().into(), Value::String(path));
        }
    }
    Ok(Outcome {
        code: EXIT_OK,
        text: lines,
        json: json!({"command": "compile", "field": field.to_string(), "stages": stages, "artifacts": artifacts}),
    })
}

fn load_matrix(path: &Path, flag: Option<&str>) -> Result<(SymbolicMatrix, FieldSpec), Failure> {
    let (a, embedded) = read_symbolic(&read(path)?)?;
    let field = match (flag, embedded) {
        (Some(f), _) => parse_field(f)?,
        (None, Some(f)) => f,
        (None, None) => {
            return Err(Failure::usage(
                "no field recorded in the matrix file; pass --field",
            ))
        }
    };
    Ok((a, field))
}

fn cmd_minrank(a: &MinrankArgs) -> Result<Outcome, Failure> {
    let (matrix, field) = load_matrix(&a.matrix, a.field.as_deref())?;
    let floor = 2 * matrix.m();
    let mut lines = String::new();
    let mut report = json!({"command": "minrank", "field": field.to_string(), "m": matrix.m(), "n": matrix.n(), "floor": floor});
    match a.mode {
        Mode::Full => {
            let r = minrank_bruteforce(&matrix, &field, a.budget)?;
            let _ = writeln!(lines, "minrank {} over {field} (2m = {floor})", r.minrank);
            report["mode"] = json!("full");
            report["minrank"] = json!(r.minrank);
            if let Some(w) = &r.witness {
                let _ = writeln!(lines, "witness: {}", w.describe(matrix.variables()));
                report["witness"] = assignment_json(w, &field);
                if let Some(dir) = &a.out {
                    let path = write_file(dir, "witness.json", &write_assignment(w, &field))?;
                    let _ = writeln!(lines, "wrote {path}");
                }
            }
            Ok(Outcome {
                code: EXIT_OK,
                text: lines,
                json: report,
            })
        }
        Mode::Witness => {
            let sys_path = a
                .system
                .as_ref()
                .ok_or_else(|| Failure::usage("--mode witness needs --system"))?;
            let (sys, _) = read_system(&read(sys_path)?)?;
            report["mode"] = json!("witness");
            let Some(w) = minrank_witness_search(&matrix, &sys, &field, a.budget)? else {
                let _ = writeln!(
                    lines,
                    "no solution over {field}: rank 2m = {floor} is not attained by any witness"
                );
                report["witness"] = Value::Null;
                report["attains_floor"] = json!(false);
                return Ok(Outcome {
                    code: EXIT_REFUTED,
                    text: lines,
                    json: report,
                });
            };
            let rank = matrix_rank(&evaluate_matrix(&matrix, &w, &field)?, &field);
            let _ = writeln!(lines, "witness: {}", w.describe(matrix.variables()));
            let _ = writeln!(
                lines,
                "rank {rank} at the witness (2m = {floor}){}",
                if rank == floor { "" } else { ": NOT 2m" }
            );
            report["witness"] = assignment_json(&w, &field);
            report["rank"] = json!(rank);
            report["attains_floor"] = json!(rank == floor);
            if let Some(dir) = &a.out {
                let mut files = vec![write_file(
                    dir,
                    "witness.json",
                    &write_assignment(&w, &field),
                )?];
                if rank == floor {
                    let bundle = build_tensor(&matrix, &field);
                    let e = expansion_from_assignment(&matrix, &bundle, &w, &field)?;
                    files.push(write_file(
                        dir,
                        "expansion.json",
                        &write_expansion(&e, &bundle.tensor),
                    )?);
                    let d = matrix.dim();
                    let family = SliceFamily::new(
                        field.clone(),
                        d,
                        d,
                        e.terms.iter().map(|t| t.matrix(&field)).collect(),
                    )?;
                    files.push(write_file(dir, "slices.json", &write_family(&family))?);
                    report["expansion_terms"] = json!(e.len());
                }
                for f in &files {
                    let _ = writeln!(lines, "wrote {f}");
                }
            }
            let code = if rank == floor { EXIT_OK } else { EXIT_REFUTED };
            Ok(Outcome {
                code,
                text: lines,
                json: report,
            })
        }
    }
}

fn cmd_rank(a: &RankArgs) -> Result<Outcome, Failure> {
    let t = load_tensor(&a.tensor, a.field.as_deref())?;
    let d = tensor_rank_leq(&t, a.leq, a.budget)?;
    let yes = d.verdict == Verdict::Yes;
    let mut lines = format!(
        "rank <= {}: {} ({} nodes)\n",
        a.leq,
        if yes { "yes" } else { "no" },
        d.nodes
    );
    let mut report = json!({"command": "rank", "field": t.field().to_string(), "dims": t.dims(), "bound": a.leq,
        "verdict": if yes { "yes" } else { "no" }, "nodes": d.nodes});
    if let Some(e) = &d.certificate {
        report["certificate_terms"] = json!(e.len());
        if let Some(dir) = &a.out {
            let path = write_file(dir, "certificate.json", &write_expansion(e, &t))?;
            let _ = writeln!(lines, "certificate ({} terms): {path}", e.len());
            report["certificate"] = json!(path);
        }
    }
    Ok(Outcome {
        code: if yes { EXIT_OK } else { EXIT_REFUTED },
        text: lines,
        json: report,
    })
}

fn cmd_certify(a: &CertifyArgs) -> Result<Outcome, Failure> {
    let t = load_tensor(&a.tensor, a.field.as_deref())?;
    let (e, digest_matches) = load_expansion(&a.expansion, &t)?;
    let ok = verify_expansion(&t, &e)?;
    let mut lines = format!(
        "{} terms: {}\n",
        e.len(),
        if ok {
            "verified"
        } else {
            "does NOT sum to the tensor"
        }
    );
    if !digest_matches {
        lines.push_str("note: recorded target digest differs from the tensor\n");
    }
    let report = json!({"command": "certify", "field": t.field().to_string(), "terms": e.len(), "verified": ok,
        "digest_matches": digest_matches});
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_REFUTED },
        text: lines,
        json: report,
    })
}

fn cmd_realize(a: &RealizeArgs) -> Result<Outcome, Failure> {
    let t = load_tensor(&a.tensor, a.field.as_deref())?;
    let family = read_family(&read(&a.slices)?)?;
    let field = t.field().clone();
    let rs = realization_space(&t, &family, a.r, &field)?;
    let unknowns = a.r * t.dims()[2];
    let mut report = json!({"command": "realize", "field": field.to_string(), "r": a.r, "unknowns": unknowns,
        "nonempty": !rs.is_empty(), "dimension": rs.space.dim()});
    let Some(point) = &rs.space.particular else {
        return Ok(Outcome {
            code: EXIT_REFUTED,
            text: "realization space is empty\n".into(),
            json: report,
        });
    };
    let dim = rs.space.basis.len();
    let mut lines = format!("realization space: affine dimension {dim} in {unknowns} unknowns\n");
    let ws: Vec<Vec<Value>> = rs
        .split(point)
        .iter()
        .map(|w| {
            w.iter()
                .map(tenrank_core::fields::json::elem_to_json)
                .collect()
        })
        .collect();
    report["point"] = json!(ws);
    if let Some(dir) = &a.out {
        let e = expansion_from_point(&family, &rs, point)?;
        let path = write_file(dir, "realization.json", &write_expansion(&e, &t))?;
        let _ = writeln!(lines, "wrote {path}");
    }
    Ok(Outcome {
        code: EXIT_OK,
        text: lines,
        json: report,
    })
}

fn cmd_eig0(a: &Eig0Args) -> Result<Outcome, Failure> {
    let t = load_tensor(&a.tensor, a.field.as_deref())?;
    let r = eig0(&t, a.budget)?;
    let vec_json = r.eigenvector.as_ref().map(|x| {
        x.iter()
            .map(tenrank_core::fields::json::elem_to_json)
            .collect::<Vec<_>>()
    });
    let text = match &r.eigenvector {
        Some(x) => format!(
            "eigenvalue 0: yes, x = ({})\n",
            x.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        None => "eigenvalue 0: no\n".to_string(),
    };
    let report = json!({"command": "eig0", "field": t.field().to_string(), "n": t.dims()[0],
        "zero_eigenvalue": r.has_zero_eigenvalue(), "eigenvector": vec_json});
    Ok(Outcome {
        code: if r.has_zero_eigenvalue() {
            EXIT_OK
        } else {
            EXIT_REFUTED
        },
        text,
        json: report,
    })
}

fn cmd_absorb(a: &AbsorbArgs) -> Result<Outcome, Failure> {
    let t = load_tensor(&a.tensor, a.field.as_deref())?;
    let (e, _) = load_expansion(&a.expansion, &t)?;
    let d3 = t.dims()[2];
    if let Some(&bad) = a.slices.iter().find(|&&h| h == 0 || h > d3) {
        return Err(Failure::usage(format!("slice {bad} out of range 1..={d3}")));
    }
    let hs: Vec<usize> = a.slices.iter().map(|h| h - 1).collect();
    let out = absorb_slices(&t, &e, &hs)?;
    let mut lines = format!(
        "absorbed {} slices into an expansion of {} terms\n",
        hs.len(),
        out.len()
    );
    let mut report = json!({"command": "absorb", "field": t.field().to_string(), "slices": a.slices, "terms": out.len()});
    if let Some(dir) = &a.out {
        let path = write_file(dir, "absorbed.json", &write_expansion(&out, &t))?;
        let _ = writeln!(lines, "wrote {path}");
        report["absorbed"] = json!(path);
    }
    Ok(Outcome {
        code: EXIT_OK,
        text: lines,
        json: report,
    })
}
