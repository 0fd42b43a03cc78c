//! Command-line front end and JSON serialization.
//!
//! Every object round-trips through a versioned JSON encoding tagged
//! `"schema": "pav/1"`.  Matrix entries use one of three number encodings:
//! `{"rat": "p/q"}` for rationals, `{"alg": {poly, coeffs, root}}` for
//! number-field elements (integer defining polynomial, rational coordinates
//! in powers of the generator, and a rational approximation selecting the
//! embedded root), and `{"dec": {re, im, prec}}` for dyadic floats with
//! their exact mantissas as rationals.  Rational and algebraic entries
//! round-trip bit-exactly.
//!
//! Exit codes: `0` success, `1` verification failed, `2` degenerate input
//! (zero image, class inducing no proper idempotent), `3` parse or
//! validation error, `4` group action not symplectic/stable, `5` no
//! solution within the search budget.  Diagnostics go to stderr; with
//! `--json` stdout carries only the result object.  Output files are
//! replaced atomically (temp file + rename).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value as Json};

use crate::decompose::{
    idempotent_from_ns, ns_membership, poincare_decompose, sub_elliptic_search_g2,
    DecomposeError, DecompositionTree, DecomposeOptions, EllipticReport, LeafKind, NSForm,
    TreeNode,
};
use crate::gaction::{
    fixed_riemann, restrict_action, subgroup_idempotent, FixedRiemann, GactionError,
    RestrictedRep, SymplecticRep,
};
use crate::latalg::{
    frobenius_symplectic_basis, saturate, standard_symplectic_gram, CMat, IntMat, LatAlgError,
    RatMat,
};
use crate::numerics::bigfloat::{f_to_decimal_string, rat_from_f};
use crate::numerics::numberfield::{NumberField, NumberFieldElement};
use crate::numerics::{pow2, ExactComplex, NumericsError, Value, CF};
use crate::pav::{
    build_period, cmat_dist, isogeny_degree, primitive_rescale, PavError, PolarizedAV,
};
use crate::subvariety::{
    clear_denominators, subvariety_period, SubvarietyError,
};

/// Exact decomposition of polarized abelian varieties from period matrices.
#[derive(Parser)]
#[command(name = "pavsplit", version, about)]
pub struct Cli {
    /// Working precision in bits (≥ 64; default 256 or the input's own)
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Height bound for the splitting-class enumeration
    #[arg(long, global = true, default_value_t = 24)]
    pub height: u32,
    /// Print the result object as JSON on stdout, and nothing else
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized numeric starts
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Divide the content out of the input polarization type first
    #[arg(long, global = true)]
    pub primitive: bool,
    /// Write the result object to this file (atomic replace)
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Symplectic basis and induced polarization type of the image of a
    /// rational endomorphism
    InducedPolarization { pav: PathBuf, endo: PathBuf },
    /// Restrict a symplectic group action to the invariant subvariety of a
    /// subgroup (or a given embedding) and solve for the fixed Riemann
    /// matrices
    RestrictAction { rep: PathBuf, target: PathBuf },
    /// Riemann matrices fixed by an already-restricted action
    FixedRiemann { rep: PathBuf },
    /// Period matrix (D W) of the image subvariety of an endomorphism
    SubvarietyPeriod { pav: PathBuf, endo: PathBuf },
    /// Split a period matrix into simple factors
    Decompose {
        pav: PathBuf,
        /// Splitting-class candidate, comma-separated rationals in pair
        /// order (repeatable)
        #[arg(long)]
        candidate: Vec<String>,
    },
    /// Re-check every relation stored in a decomposition tree
    Verify { tree: PathBuf, pav: PathBuf },
}

/// Errors mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 3: malformed input files or invalid job parameters.
    Parse(String),
    /// Exit 2: structurally valid input that admits no answer (zero image,
    /// degenerate class, singular system).
    Degenerate(String),
    /// Exit 4: a generator is not symplectic or does not stabilize the
    /// sublattice.
    NotStable(String),
    /// Exit 5: the search or solver budget was exhausted.
    NoSolution(String),
    /// Exit 1: verification failed or an output could not be written.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Degenerate(_) => 2,
            CliError::Parse(_) => 3,
            CliError::NotStable(_) => 4,
            CliError::NoSolution(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m)
            | CliError::Degenerate(m)
            | CliError::NotStable(m)
            | CliError::NoSolution(m)
            | CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<PavError> for CliError {
    fn from(e: PavError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

impl From<LatAlgError> for CliError {
    fn from(e: LatAlgError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

impl From<SubvarietyError> for CliError {
    fn from(e: SubvarietyError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

impl From<DecomposeError> for CliError {
    fn from(e: DecomposeError) -> Self {
        match e {
            DecomposeError::TooLarge(_) => CliError::NoSolution(e.to_string()),
            other => CliError::Degenerate(other.to_string()),
        }
    }
}

impl From<GactionError> for CliError {
    fn from(e: GactionError) -> Self {
        match e {
            GactionError::NotSymplectic(_)
            | GactionError::NotClosed
            | GactionError::NotStable(_)
            | GactionError::NotFixed(_) => CliError::NotStable(e.to_string()),
            GactionError::NoSolution | GactionError::TooLarge(_) => {
                CliError::NoSolution(e.to_string())
            }
            GactionError::Pav(p) => p.into(),
            GactionError::Lat(l) => l.into(),
        }
    }
}

/// Entry point used by the binary: parse, execute, report, exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            let pretty = serde_json::to_string_pretty(&out.json).expect("serializable");
            if let Some(path) = &cli.output {
                if let Err(e) = write_atomic(path, &pretty) {
                    eprintln!("error: {e}");
                    return e.code();
                }
            }
            if cli.json {
                emit(&pretty);
                emit("\n");
            } else {
                emit(&out.human);
            }
            if out.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

struct Outcome {
    json: Json,
    human: String,
    failed: bool,
}

/// Write to stdout, swallowing broken pipes from truncating consumers.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(p) = cli.precision {
        if p < 64 {
            return Err(CliError::Parse(format!("precision {p} is below the minimum of 64")));
        }
    }
    match &cli.command {
        Command::InducedPolarization { pav, endo } => cmd_induced_polarization(cli, pav, endo),
        Command::RestrictAction { rep, target } => cmd_restrict_action(cli, rep, target),
        Command::FixedRiemann { rep } => cmd_fixed_riemann(cli, rep),
        Command::SubvarietyPeriod { pav, endo } => cmd_subvariety_period(cli, pav, endo),
        Command::Decompose { pav, candidate } => cmd_decompose(cli, pav, candidate),
        Command::Verify { tree, pav } => cmd_verify(cli, tree, pav),
    }
}

// ---------------------------------------------------------------------------
// number and matrix encodings

fn rat_str(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_rat_str(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Parse(format!("expected a rational \"p/q\", got {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
    }
}

fn rat_from_json(v: &Json) -> Result<BigRational, CliError> {
    match v {
        Json::String(s) => parse_rat_str(s),
        Json::Number(n) => n
            .as_i64()
            .map(|k| BigRational::from(BigInt::from(k)))
            .ok_or_else(|| CliError::Parse(format!("non-integer numeric literal {n}"))),
        other => Err(CliError::Parse(format!("expected a rational, got {other}"))),
    }
}

fn int_from_json(v: &Json) -> Result<BigInt, CliError> {
    let q = rat_from_json(v)?;
    if !q.denom().is_one() {
        return Err(CliError::Parse(format!("expected an integer, got {}", rat_str(&q))));
    }
    Ok(q.to_integer())
}

fn int_json(n: &BigInt) -> Json {
    use num_traits::ToPrimitive;
    match n.to_i64() {
        Some(k) => Json::from(k),
        None => Json::String(n.to_string()),
    }
}

fn num_to_json(x: &ExactComplex) -> Json {
    match &x.value {
        Value::Rat(q) => json!({ "rat": rat_str(q) }),
        Value::Alg(e) => json!({ "alg": {
            "poly": e.field.poly.iter().map(int_json).collect::<Vec<_>>(),
            "coeffs": e.coeffs.iter().map(|c| Json::String(rat_str(c))).collect::<Vec<_>>(),
            "root": [Json::String(rat_str(&e.field.root_re)),
                     Json::String(rat_str(&e.field.root_im))],
        }}),
        Value::Dec(z) => json!({ "dec": {
            "re": rat_str(&rat_from_f(&z.re)),
            "im": rat_str(&rat_from_f(&z.im)),
            "prec": x.prec,
        }}),
    }
}

fn num_from_json(v: &Json) -> Result<ExactComplex, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::Parse(format!("expected a number object, got {v}")))?;
    if let Some(r) = obj.get("rat") {
        return Ok(ExactComplex::rat(rat_from_json(r)?));
    }
    if let Some(a) = obj.get("alg") {
        let poly = json_vec(a.get("poly"), "alg.poly")?
            .iter()
            .map(int_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        let coeffs = json_vec(a.get("coeffs"), "alg.coeffs")?
            .iter()
            .map(rat_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        let root = json_vec(a.get("root"), "alg.root")?;
        if root.len() != 2 {
            return Err(CliError::Parse("alg.root must hold [re, im]".into()));
        }
        let (re, im) = (rat_from_json(&root[0])?, rat_from_json(&root[1])?);
        let approx = CF::from_rats(&re, &im, 96);
        let field = NumberField::from_minpoly(poly, &approx)
            .map_err(|e| CliError::Parse(format!("bad algebraic encoding: {e}")))?;
        return Ok(ExactComplex::alg(NumberFieldElement::new(field, coeffs)));
    }
    if let Some(d) = obj.get("dec") {
        let re = rat_from_json(d.get("re").ok_or_else(|| miss("dec.re"))?)?;
        let im = rat_from_json(d.get("im").ok_or_else(|| miss("dec.im"))?)?;
        let prec = d.get("prec").and_then(Json::as_u64).unwrap_or(256) as u32;
        return Ok(ExactComplex::dec(CF::from_rats(&re, &im, prec.max(1))));
    }
    Err(CliError::Parse(format!("unknown number encoding {v}")))
}

fn miss(field: &str) -> CliError {
    CliError::Parse(format!("missing field {field}"))
}

fn json_vec<'a>(v: Option<&'a Json>, what: &str) -> Result<&'a Vec<Json>, CliError> {
    v.and_then(Json::as_array)
        .ok_or_else(|| CliError::Parse(format!("{what} must be an array")))
}

fn cmat_to_json(m: &CMat) -> Json {
    Json::Array(
        (0..m.rows)
            .map(|i| Json::Array((0..m.cols).map(|j| num_to_json(&m[(i, j)])).collect()))
            .collect(),
    )
}

fn rows_from_json<'a>(v: &'a Json, what: &str) -> Result<Vec<&'a Vec<Json>>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::Parse(format!("{what} must be an array of rows")))?;
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(
            r.as_array()
                .ok_or_else(|| CliError::Parse(format!("{what} rows must be arrays")))?,
        );
    }
    if out.is_empty() || out.iter().any(|r| r.len() != out[0].len()) {
        return Err(CliError::Parse(format!("{what} must be rectangular and nonempty")));
    }
    Ok(out)
}

fn cmat_from_json(v: &Json, what: &str) -> Result<CMat, CliError> {
    let rows = rows_from_json(v, what)?;
    let data = rows
        .iter()
        .map(|r| r.iter().map(num_from_json).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CMat::from_rows(data))
}

fn intmat_to_json(m: &IntMat) -> Json {
    Json::Array(
        (0..m.rows)
            .map(|i| Json::Array((0..m.cols).map(|j| int_json(&m[(i, j)])).collect()))
            .collect(),
    )
}

fn intmat_from_json(v: &Json, what: &str) -> Result<IntMat, CliError> {
    let rows = rows_from_json(v, what)?;
    let (r, c) = (rows.len(), rows[0].len());
    let mut data = Vec::with_capacity(r * c);
    for row in rows {
        for e in row {
            data.push(int_from_json(e)?);
        }
    }
    Ok(IntMat::from_fn(r, c, |i, j| data[i * c + j].clone()))
}

fn ratmat_from_json(v: &Json, what: &str) -> Result<RatMat, CliError> {
    let rows = rows_from_json(v, what)?;
    let (r, c) = (rows.len(), rows[0].len());
    let mut data = Vec::with_capacity(r * c);
    for row in rows {
        for e in row {
            data.push(rat_from_json(e)?);
        }
    }
    Ok(RatMat::from_fn(r, c, |i, j| data[i * c + j].clone()))
}

fn rat_vec_json(v: &[BigRational]) -> Json {
    Json::Array(v.iter().map(|q| Json::String(rat_str(q))).collect())
}

fn rat_vec_from_json(v: &Json, what: &str) -> Result<Vec<BigRational>, CliError> {
    json_vec(Some(v), what)?.iter().map(rat_from_json).collect()
}

fn ints_json(v: &[BigInt]) -> Json {
    Json::Array(v.iter().map(int_json).collect())
}

// ---------------------------------------------------------------------------
// object encodings

fn check_schema(v: &Json, kinds: &[&str], what: &str) -> Result<(), CliError> {
    if let Some(s) = v.get("schema").and_then(Json::as_str) {
        if s != "pav/1" {
            return Err(CliError::Parse(format!("{what}: unsupported schema {s:?}")));
        }
    }
    if let Some(k) = v.get("kind").and_then(Json::as_str) {
        if !kinds.contains(&k) {
            return Err(CliError::Parse(format!(
                "{what}: expected kind {kinds:?}, got {k:?}"
            )));
        }
    }
    Ok(())
}

pub fn pav_to_json(pav: &PolarizedAV) -> Json {
    let mut o = json!({
        "schema": "pav/1",
        "kind": "pav",
        "etype": ints_json(&pav.etype),
        "z": cmat_to_json(&pav.z),
        "prec": pav.prec,
    });
    if !pav.content.is_one() {
        o["content"] = Json::String(rat_str(&pav.content));
    }
    o
}

pub fn pav_from_json(v: &Json, prec_override: Option<u32>) -> Result<PolarizedAV, CliError> {
    check_schema(v, &["pav"], "period input")?;
    let etype = json_vec(v.get("etype"), "etype")?
        .iter()
        .map(int_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let z = cmat_from_json(v.get("z").ok_or_else(|| miss("z"))?, "z")?;
    let prec = prec_override
        .or_else(|| v.get("prec").and_then(Json::as_u64).map(|p| p as u32))
        .unwrap_or(256);
    if prec < 64 {
        return Err(CliError::Parse(format!("precision {prec} is below the minimum of 64")));
    }
    build_period(etype, z, None, prec)
        .map_err(|e| CliError::Parse(format!("invalid period matrix: {e}")))
}

fn endo_from_json(v: &Json) -> Result<RatMat, CliError> {
    check_schema(v, &["endomorphism"], "endomorphism input")?;
    let m = v.get("matrix").unwrap_or(v);
    ratmat_from_json(m, "endomorphism matrix")
}

fn matrices_from_json(v: &Json, what: &str) -> Result<Vec<IntMat>, CliError> {
    json_vec(Some(v), what)?
        .iter()
        .map(|m| intmat_from_json(m, what))
        .collect()
}

/// `{"g": n, "E": [d1,…], "generators": [[…]], "elements": optional}`
fn rep_from_json(v: &Json) -> Result<(SymplecticRep, Option<Vec<IntMat>>), CliError> {
    check_schema(v, &["rep", "representation"], "representation input")?;
    let etype = json_vec(v.get("E"), "E")?
        .iter()
        .map(int_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(g) = v.get("g").and_then(Json::as_u64) {
        if g as usize != etype.len() {
            return Err(CliError::Parse(format!(
                "g = {g} disagrees with the {} type entries",
                etype.len()
            )));
        }
    }
    let gens = matrices_from_json(v.get("generators").ok_or_else(|| miss("generators"))?, "generators")?;
    let rep = SymplecticRep::new(etype, gens)?;
    let elements = match v.get("elements") {
        Some(e) => Some(matrices_from_json(e, "elements")?),
        None => None,
    };
    Ok((rep, elements))
}

fn restricted_to_json(rep: &RestrictedRep) -> Json {
    json!({
        "schema": "pav/1",
        "kind": "restricted",
        "g": rep.dim(),
        "E": ints_json(&rep.dtype),
        "embedding": intmat_to_json(&rep.embedding),
        "generators": rep.generators.iter().map(intmat_to_json).collect::<Vec<_>>(),
    })
}

fn restricted_from_json(v: &Json) -> Result<RestrictedRep, CliError> {
    // accept both a bare restricted object and the combined output of
    // restrict-action
    let v = v.get("restricted").unwrap_or(v);
    check_schema(v, &["restricted", "rep", "representation"], "restricted input")?;
    let dtype = json_vec(v.get("E"), "E")?
        .iter()
        .map(int_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let gens = matrices_from_json(v.get("generators").ok_or_else(|| miss("generators"))?, "generators")?;
    let h2 = 2 * dtype.len();
    let embedding = match v.get("embedding") {
        Some(e) => intmat_from_json(e, "embedding")?,
        None => IntMat::identity(h2),
    };
    Ok(RestrictedRep::new(dtype, embedding, gens)?)
}

fn fixed_to_json(fx: &FixedRiemann) -> Json {
    json!({
        "schema": "pav/1",
        "kind": "fixed-riemann",
        "solutions": fx.solutions.iter().map(|s| json!({
            "z": cmat_to_json(&s.z),
            "recognized": s.recognized,
            "residual": f_to_decimal_string(&s.residual),
        })).collect::<Vec<_>>(),
        "family": fx.family,
        "family_dim": fx.family_dim,
    })
}

fn search_to_json(s: &crate::decompose::SubEllipticSearch) -> Json {
    json!({
        "certified": s.certified,
        "decided": s.decided,
        "searched_height": s.searched_height,
        "family": s.family.as_ref().map(|f| json!({
            "particular": rat_vec_json(&f.particular),
            "kernel": f.kernel.iter().map(|k| rat_vec_json(k)).collect::<Vec<_>>(),
        })).unwrap_or(Json::Null),
        "hits": s.hits.iter().map(|h| rat_vec_json(&h.coeffs)).collect::<Vec<_>>(),
        "representative": s.representative.as_ref().map(|r| rat_vec_json(&r.coeffs)).unwrap_or(Json::Null),
    })
}

fn elliptic_to_json(r: &EllipticReport) -> Json {
    json!({
        "tau": num_to_json(&r.tau),
        "reduced": num_to_json(&r.reduced),
        "transform": intmat_to_json(&r.transform),
        "cm": r.cm.as_ref().map(|c| json!({
            "minpoly": ints_json(&c.minpoly),
            "discriminant": int_json(&c.discriminant),
            "certified": c.certified,
        })).unwrap_or(Json::Null),
    })
}

pub fn tree_to_json(t: &DecompositionTree) -> Json {
    let node = match &t.node {
        TreeNode::Leaf(LeafKind::Elliptic(r)) => json!({ "leaf": { "elliptic": elliptic_to_json(r) } }),
        TreeNode::Leaf(LeafKind::SimpleCertified) => json!({ "leaf": { "simple_certified": true } }),
        TreeNode::Leaf(LeafKind::SearchExhausted { height }) => {
            json!({ "leaf": { "search_exhausted": { "height": height } } })
        }
        TreeNode::Split { form, image, complement, assembled, degree } => json!({
            "split": {
                "form": rat_vec_json(&form.coeffs),
                "degree": int_json(degree),
                "assembled": intmat_to_json(assembled),
                "image": {
                    "dtype": ints_json(&image.0.sub.etype),
                    "basis": intmat_to_json(&image.0.basis),
                    "factor": pav_to_json(&image.0.sub),
                    "tree": tree_to_json(&image.1),
                },
                "complement": {
                    "dtype": ints_json(&complement.0.sub.etype),
                    "basis": intmat_to_json(&complement.0.basis),
                    "factor": pav_to_json(&complement.0.sub),
                    "tree": tree_to_json(&complement.1),
                },
            }
        }),
    };
    json!({
        "schema": "pav/1",
        "kind": "tree",
        "content": int_json(&t.content),
        "variety": pav_to_json(&t.variety),
        "search": t.search.as_ref().map(search_to_json).unwrap_or(Json::Null),
        "node": node,
    })
}

// ---------------------------------------------------------------------------
// display helpers

fn type_str(etype: &[BigInt]) -> String {
    let parts: Vec<String> = etype.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Compact human rendering of a matrix entry.
fn display_num(x: &ExactComplex) -> String {
    match &x.value {
        Value::Rat(q) => rat_str(q),
        Value::Alg(e) => {
            if let Some(d) = e.field.quadratic_radicand() {
                let (a, b) = (&e.coeffs[0], &e.coeffs[1]);
                let radical = if d.is_negative() {
                    let m = -&d;
                    if m.is_one() { "i".to_string() } else { format!("i√{m}") }
                } else {
                    format!("√{d}")
                };
                if b.is_zero() {
                    return rat_str(a);
                }
                let lead = if a.is_zero() { String::new() } else { format!("{} ", rat_str(a)) };
                let sign = if b.is_negative() { "-" } else if lead.is_empty() { "" } else { "+" };
                let mag = b.abs();
                let coef = if mag.is_one() { String::new() } else { format!("{}·", rat_str(&mag)) };
                return format!("{lead}{sign}{}{coef}{radical}", if lead.is_empty() { "" } else { " " });
            }
            let (re, im) = x.eval(64).to_f64s();
            format!("alg(deg {}) ≈ {re:.6}{}{:.6}i", e.field.degree(), if im < 0.0 { "" } else { "+" }, im)
        }
        Value::Dec(_) => {
            let (re, im) = x.eval(64).to_f64s();
            format!("{re:.9}{}{:.9}i", if im < 0.0 { "" } else { "+" }, im)
        }
    }
}

/// `at² + bt + c` with zero middle term elided.
fn minpoly_str(p: &[BigInt; 3]) -> String {
    let mut s = format!("{}t²", p[0]);
    for (coef, var) in [(&p[1], "t"), (&p[2], "")] {
        if coef.is_zero() {
            continue;
        }
        let sign = if coef.is_negative() { "-" } else { "+" };
        let mag = coef.abs();
        if mag.is_one() && !var.is_empty() {
            s.push_str(&format!(" {sign} {var}"));
        } else {
            s.push_str(&format!(" {sign} {mag}{var}"));
        }
    }
    s
}

fn display_cmat(m: &CMat, pad: &str) -> String {
    let mut out = String::new();
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|j| display_num(&m[(i, j)])).collect();
        out.push_str(&format!("{pad}[ {} ]\n", row.join(", ")));
    }
    out
}

fn display_intmat(m: &IntMat, pad: &str) -> String {
    let mut out = String::new();
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&format!("{pad}[ {} ]\n", row.join(", ")));
    }
    out
}

fn render_tree(t: &DecompositionTree, label: &str, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let content = if t.content.is_one() {
        String::new()
    } else {
        format!(", content {} divided out", t.content)
    };
    out.push_str(&format!(
        "{pad}{label}: dimension {}, type {}{}\n",
        t.variety.dim(),
        type_str(&t.variety.etype),
        content
    ));
    match &t.node {
        TreeNode::Leaf(LeafKind::Elliptic(r)) => {
            let cm = match &r.cm {
                Some(c) => format!(
                    ", CM by {} (disc {}{})",
                    minpoly_str(&c.minpoly),
                    c.discriminant,
                    if c.certified { ", certified" } else { ", recognized" }
                ),
                None => ", no quadratic multiplication found".into(),
            };
            out.push_str(&format!(
                "{pad}  elliptic: τ = {}, reduced = {}{cm}\n",
                display_num(&r.tau),
                display_num(&r.reduced)
            ));
        }
        TreeNode::Leaf(LeafKind::SimpleCertified) => {
            out.push_str(&format!("{pad}  simple: no elliptic subvariety (decided exactly)\n"));
        }
        TreeNode::Leaf(LeafKind::SearchExhausted { height }) => {
            out.push_str(&format!(
                "{pad}  no splitting class found up to height {height}; simplicity not certified\n"
            ));
        }
        TreeNode::Split { form, degree, image, complement, .. } => {
            let coeffs: Vec<String> = form.coeffs.iter().map(rat_str).collect();
            out.push_str(&format!(
                "{pad}  split by class [{}], isogeny degree {}\n",
                coeffs.join(", "),
                degree
            ));
            render_tree(&image.1, "image", indent + 1, out);
            render_tree(&complement.1, "complement", indent + 1, out);
        }
    }
}

// ---------------------------------------------------------------------------
// commands

fn read_json(path: &Path) -> Result<Json, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{} is not valid JSON: {e}", path.display())))
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let res = fs::write(&tmp, text).and_then(|_| fs::rename(&tmp, path));
    res.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::Failed(format!("cannot write {}: {e}", path.display()))
    })
}

/// Parse a period input, honoring `--precision` and `--primitive`.
fn load_pav(cli: &Cli, path: &Path) -> Result<(PolarizedAV, BigInt), CliError> {
    let pav = pav_from_json(&read_json(path)?, cli.precision)?;
    if cli.primitive {
        let (p, c) = primitive_rescale(&pav)?;
        Ok((p, c))
    } else {
        Ok((pav, BigInt::one()))
    }
}

fn cmd_induced_polarization(cli: &Cli, pav_path: &Path, endo_path: &Path) -> Result<Outcome, CliError> {
    let (pav, content) = load_pav(cli, pav_path)?;
    let endo = endo_from_json(&read_json(endo_path)?)?;
    let lat = crate::subvariety::image_lattice(&pav, &endo)?;
    let (basis, dtype) = crate::subvariety::induced_polarization(&pav, &lat)?;
    let mut o = json!({
        "schema": "pav/1",
        "kind": "embedding",
        "host_etype": ints_json(&pav.etype),
        "dtype": ints_json(&dtype),
        "basis": intmat_to_json(&basis),
    });
    if !content.is_one() {
        o["content_removed"] = Json::String(content.to_string());
    }
    let mut human = format!(
        "induced polarization type {} on a dimension-{} subvariety\nsymplectic basis columns:\n",
        type_str(&dtype),
        dtype.len()
    );
    human.push_str(&display_intmat(&basis, "  "));
    Ok(Outcome { json: o, human, failed: false })
}

fn cmd_subvariety_period(cli: &Cli, pav_path: &Path, endo_path: &Path) -> Result<Outcome, CliError> {
    let (pav, content) = load_pav(cli, pav_path)?;
    let endo = endo_from_json(&read_json(endo_path)?)?;
    let emb = subvariety_period(&pav, &endo)?;
    let mut o = json!({
        "schema": "pav/1",
        "kind": "factor",
        "dtype": ints_json(&emb.sub.etype),
        "basis": intmat_to_json(&emb.basis),
        "pav": pav_to_json(&emb.sub),
        "residual": f_to_decimal_string(&emb.residual()),
    });
    if !content.is_one() {
        o["content_removed"] = Json::String(content.to_string());
    }
    let mut human = format!(
        "factor of type {} with Riemann matrix W =\n",
        type_str(&emb.sub.etype)
    );
    human.push_str(&display_cmat(&emb.sub.z, "  "));
    Ok(Outcome { json: o, human, failed: false })
}

fn cmd_restrict_action(cli: &Cli, rep_path: &Path, target_path: &Path) -> Result<Outcome, CliError> {
    let (rep, _) = rep_from_json(&read_json(rep_path)?)?;
    let target = read_json(target_path)?;
    let lat = if let Some(e) = target.get("elements") {
        let elements = matrices_from_json(e, "elements")?;
        let f = subgroup_idempotent(&elements)?;
        let (m, _) = clear_denominators(&f);
        if m.is_zero() {
            return Err(CliError::Degenerate("subgroup idempotent has zero image".into()));
        }
        saturate(&m)
    } else if let Some(b) = target.get("basis") {
        intmat_from_json(b, "basis")?
    } else {
        return Err(CliError::Parse(
            "target must hold either \"elements\" (a subgroup) or \"basis\" (an embedding)".into(),
        ));
    };
    if lat.cols == 0 || lat.cols % 2 != 0 {
        return Err(CliError::Degenerate(format!(
            "invariant sublattice has odd rank {}",
            lat.cols
        )));
    }
    let j = standard_symplectic_gram(&rep.etype);
    let gram = lat.transpose().matmul(&j).matmul(&lat);
    let (q, dtype) = frobenius_symplectic_basis(&gram)?;
    let basis = lat.matmul(&q);
    let restricted = restrict_action(&rep, &basis, &dtype)?;
    let prec = cli.precision.unwrap_or(256);
    let fixed = fixed_riemann(&restricted, prec, cli.seed)?;
    let o = json!({
        "schema": "pav/1",
        "kind": "restricted-action",
        "restricted": restricted_to_json(&restricted),
        "riemann": fixed_to_json(&fixed),
    });
    let human = render_fixed(&restricted, &fixed);
    Ok(Outcome { json: o, human, failed: false })
}

fn cmd_fixed_riemann(cli: &Cli, rep_path: &Path) -> Result<Outcome, CliError> {
    let restricted = restricted_from_json(&read_json(rep_path)?)?;
    let prec = cli.precision.unwrap_or(256);
    let fixed = fixed_riemann(&restricted, prec, cli.seed)?;
    let o = json!({
        "schema": "pav/1",
        "kind": "fixed-riemann",
        "restricted": restricted_to_json(&restricted),
        "riemann": fixed_to_json(&fixed),
    });
    let human = render_fixed(&restricted, &fixed);
    Ok(Outcome { json: o, human, failed: false })
}

fn render_fixed(rep: &RestrictedRep, fixed: &FixedRiemann) -> String {
    let mut human = format!(
        "restricted action: type {}, {} generator(s)\n",
        type_str(&rep.dtype),
        rep.generators.len()
    );
    if fixed.family {
        human.push_str(&format!(
            "fixed locus has positive dimension ({}); representative points:\n",
            fixed.family_dim
        ));
    } else {
        human.push_str("isolated fixed Riemann matrices:\n");
    }
    for (k, s) in fixed.solutions.iter().enumerate() {
        human.push_str(&format!(
            "solution {}{}, residual {}:\n",
            k + 1,
            if s.recognized { " (exact)" } else { " (numeric)" },
            f_to_decimal_string(&s.residual)
        ));
        human.push_str(&display_cmat(&s.z, "  "));
    }
    human
}

fn cmd_decompose(cli: &Cli, pav_path: &Path, candidates: &[String]) -> Result<Outcome, CliError> {
    let (pav, _) = load_pav(cli, pav_path)?;
    let mut opts = DecomposeOptions { height: cli.height, ..Default::default() };
    for c in candidates {
        let v: Result<Vec<BigRational>, _> = c.split(',').map(parse_rat_str).collect();
        opts.candidates.push(v?);
    }
    let tree = poincare_decompose(&pav, &opts)?;
    let json = tree_to_json(&tree);
    let mut human = String::new();
    render_tree(&tree, "input", 0, &mut human);
    human.push_str(&format!("total isogeny degree: {}\n", tree.total_degree()));
    Ok(Outcome { json, human, failed: false })
}

// ---------------------------------------------------------------------------
// verification

struct Checks {
    lines: Vec<(String, bool, String)>,
}

impl Checks {
    fn record(&mut self, path: &str, name: &str, ok: bool, detail: String) {
        self.lines.push((format!("{path}: {name}"), ok, detail));
    }
    fn ok(&mut self, path: &str, name: &str) {
        self.record(path, name, true, String::new());
    }
    fn require(&mut self, path: &str, name: &str, ok: bool, detail: &str) -> bool {
        self.record(path, name, ok, if ok { String::new() } else { detail.to_string() });
        ok
    }
}

struct TreeData {
    content: BigInt,
    variety: PolarizedAV,
    searched_height: u32,
    node: NodeData,
}

enum NodeData {
    Elliptic(EllipticLeaf),
    Simple,
    Exhausted,
    Split {
        form: Vec<BigRational>,
        degree: BigInt,
        assembled: IntMat,
        image: (Vec<BigInt>, IntMat, PolarizedAV, Box<TreeData>),
        complement: (Vec<BigInt>, IntMat, PolarizedAV, Box<TreeData>),
    },
}

struct EllipticLeaf {
    tau: ExactComplex,
    reduced: ExactComplex,
    transform: IntMat,
    cm: Option<(Vec<BigInt>, BigInt, bool)>,
}

fn tree_from_json(v: &Json, prec_override: Option<u32>) -> Result<TreeData, CliError> {
    check_schema(v, &["tree"], "tree input")?;
    let content = int_from_json(v.get("content").ok_or_else(|| miss("content"))?)?;
    let variety = pav_from_json(v.get("variety").ok_or_else(|| miss("variety"))?, prec_override)?;
    let searched_height = v
        .get("search")
        .and_then(|s| s.get("searched_height"))
        .and_then(Json::as_u64)
        .unwrap_or(24) as u32;
    let node_v = v.get("node").ok_or_else(|| miss("node"))?;
    let node = if let Some(leaf) = node_v.get("leaf") {
        if let Some(e) = leaf.get("elliptic") {
            let cm = match e.get("cm") {
                Some(Json::Null) | None => None,
                Some(c) => Some((
                    json_vec(c.get("minpoly"), "cm.minpoly")?
                        .iter()
                        .map(int_from_json)
                        .collect::<Result<Vec<_>, _>>()?,
                    int_from_json(c.get("discriminant").ok_or_else(|| miss("cm.discriminant"))?)?,
                    c.get("certified").and_then(Json::as_bool).unwrap_or(false),
                )),
            };
            NodeData::Elliptic(EllipticLeaf {
                tau: num_from_json(e.get("tau").ok_or_else(|| miss("tau"))?)?,
                reduced: num_from_json(e.get("reduced").ok_or_else(|| miss("reduced"))?)?,
                transform: intmat_from_json(e.get("transform").ok_or_else(|| miss("transform"))?, "transform")?,
                cm,
            })
        } else if leaf.get("simple_certified").is_some() {
            NodeData::Simple
        } else if leaf.get("search_exhausted").is_some() {
            NodeData::Exhausted
        } else {
            return Err(CliError::Parse(format!("unknown leaf {leaf}")));
        }
    } else if let Some(s) = node_v.get("split") {
        let side = |name: &str| -> Result<(Vec<BigInt>, IntMat, PolarizedAV, Box<TreeData>), CliError> {
            let o = s.get(name).ok_or_else(|| miss(name))?;
            Ok((
                json_vec(o.get("dtype"), "dtype")?
                    .iter()
                    .map(int_from_json)
                    .collect::<Result<Vec<_>, _>>()?,
                intmat_from_json(o.get("basis").ok_or_else(|| miss("basis"))?, "basis")?,
                pav_from_json(o.get("factor").ok_or_else(|| miss("factor"))?, prec_override)?,
                Box::new(tree_from_json(o.get("tree").ok_or_else(|| miss("tree"))?, prec_override)?),
            ))
        };
        NodeData::Split {
            form: rat_vec_from_json(s.get("form").ok_or_else(|| miss("form"))?, "form")?,
            degree: int_from_json(s.get("degree").ok_or_else(|| miss("degree"))?)?,
            assembled: intmat_from_json(s.get("assembled").ok_or_else(|| miss("assembled"))?, "assembled")?,
            image: side("image")?,
            complement: side("complement")?,
        }
    } else {
        return Err(CliError::Parse("node must hold \"leaf\" or \"split\"".into()));
    };
    Ok(TreeData { content, variety, searched_height, node })
}

fn pavs_match(a: &PolarizedAV, b: &PolarizedAV) -> bool {
    if a.etype != b.etype {
        return false;
    }
    let prec = a.prec.min(b.prec);
    cmat_dist(&a.z, &b.z, prec) <= pow2(48 - prec as i64, 64)
}

fn num_close(a: &ExactComplex, b: &ExactComplex, prec: u32) -> bool {
    match a.eq_exact(b) {
        Some(t) => t,
        None => a.eval(prec).dist(&b.eval(prec)) <= pow2(48 - prec as i64, 64),
    }
}

fn verify_node(input: &PolarizedAV, t: &TreeData, path: &str, checks: &mut Checks) {
    // content normalization ties this node's variety to the incoming one
    match primitive_rescale(input) {
        Ok((prim, c)) => {
            checks.require(
                path,
                "content normalization",
                c == t.content && pavs_match(&prim, &t.variety),
                &format!("expected content {c} and the rescaled period"),
            );
        }
        Err(e) => {
            checks.record(path, "content normalization", false, e.to_string());
            return;
        }
    }
    let variety = &t.variety;
    let g = variety.dim();
    match &t.node {
        NodeData::Elliptic(leaf) => {
            if !checks.require(path, "elliptic leaf dimension", g == 1, "dimension must be 1") {
                return;
            }
            match crate::decompose::elliptic_normalize(variety) {
                Ok(r) => {
                    checks.require(
                        path,
                        "modulus",
                        num_close(&r.tau, &leaf.tau, variety.prec),
                        "stored τ differs from w/d",
                    );
                    checks.require(
                        path,
                        "reduced modulus",
                        num_close(&r.reduced, &leaf.reduced, variety.prec)
                            && r.transform == leaf.transform,
                        "stored reduction disagrees with recomputation",
                    );
                    let cm_ok = match (&r.cm, &leaf.cm) {
                        (None, None) => true,
                        (Some(c), Some((poly, disc, cert))) => {
                            c.minpoly.to_vec() == *poly
                                && c.discriminant == *disc
                                && c.certified == *cert
                        }
                        _ => false,
                    };
                    checks.require(path, "multiplication report", cm_ok, "CM data mismatch");
                }
                Err(e) => checks.record(path, "elliptic normalization", false, e.to_string()),
            }
        }
        NodeData::Simple => {
            if !checks.require(path, "surface leaf dimension", g == 2, "dimension must be 2") {
                return;
            }
            match sub_elliptic_search_g2(variety, t.searched_height) {
                Ok(s) => checks.require(
                    path,
                    "certified simplicity",
                    s.certifies_simple(),
                    "re-running the search does not certify simplicity",
                ),
                Err(e) => {
                    checks.record(path, "certified simplicity", false, e.to_string());
                    false
                }
            };
        }
        NodeData::Exhausted => {
            checks.ok(path, "leaf acknowledged without a simplicity claim");
        }
        NodeData::Split { form, degree, assembled, image, complement } => {
            if !checks.require(
                path,
                "class shape",
                form.len() == NSForm::pair_count(g),
                "coefficient count must match the pair count",
            ) {
                return;
            }
            let form = NSForm::new(g, form.clone());
            checks.require(
                path,
                "class is Néron–Severi",
                ns_membership(variety, &form).member,
                "wedge condition fails",
            );
            let pair = match idempotent_from_ns(variety, &form) {
                Ok((f, fc, _)) => Some((f, fc)),
                Err(e) => {
                    checks.record(path, "splitting idempotent", false, e.to_string());
                    None
                }
            };
            if let Some((f, fc)) = pair {
                let sides = [("image", &f, image), ("complement", &fc, complement)];
                for (name, endo, stored) in sides {
                    match subvariety_period(variety, endo) {
                        Ok(emb) => {
                            let ok = emb.basis == stored.1
                                && emb.sub.etype == stored.0
                                && pavs_match(&emb.sub, &stored.2);
                            checks.require(
                                path,
                                &format!("{name} factor"),
                                ok,
                                "stored factor differs from recomputation",
                            );
                        }
                        Err(e) => {
                            checks.record(path, &format!("{name} factor"), false, e.to_string())
                        }
                    }
                }
            }
            // assembled product isogeny: interleaved bases, direct-sum
            // pullback, stored degree
            let (h1, h2) = (image.0.len(), complement.0.len());
            let take = |m: &IntMat, lo: usize, hi: usize| {
                m.select_cols(&(lo..hi).collect::<Vec<_>>())
            };
            let expected = take(&image.1, 0, h1)
                .hstack(&take(&complement.1, 0, h2))
                .hstack(&take(&image.1, h1, 2 * h1))
                .hstack(&take(&complement.1, h2, 2 * h2));
            checks.require(
                path,
                "assembled matrix",
                *assembled == expected,
                "assembled columns are not the interleaved bases",
            );
            let mut dd = image.0.clone();
            dd.extend_from_slice(&complement.0);
            let gram = assembled.transpose().matmul(&variety.j_gram()).matmul(assembled);
            checks.require(
                path,
                "polarization pullback",
                gram == standard_symplectic_gram(&dd),
                "pullback is not the direct sum of the induced types",
            );
            match isogeny_degree(assembled) {
                Ok(d) => {
                    checks.require(
                        path,
                        "isogeny degree",
                        d == *degree,
                        &format!("stored {degree}, determinant gives {d}"),
                    );
                }
                Err(e) => checks.record(path, "isogeny degree", false, e.to_string()),
            }
            checks.require(
                path,
                "dimension split",
                h1 + h2 == g,
                "factor dimensions must sum to the host dimension",
            );
            verify_node(&image.2, &image.3, &format!("{path}/image"), checks);
            verify_node(&complement.2, &complement.3, &format!("{path}/complement"), checks);
        }
    }
}

fn cmd_verify(cli: &Cli, tree_path: &Path, pav_path: &Path) -> Result<Outcome, CliError> {
    let pav = pav_from_json(&read_json(pav_path)?, cli.precision)?;
    let tree = tree_from_json(&read_json(tree_path)?, cli.precision)?;
    let mut checks = Checks { lines: Vec::new() };
    verify_node(&pav, &tree, "root", &mut checks);
    let passed = checks.lines.iter().all(|(_, ok, _)| *ok);
    let json = json!({
        "schema": "pav/1",
        "kind": "verification",
        "passed": passed,
        "checks": checks.lines.iter().map(|(name, ok, detail)| json!({
            "name": name,
            "ok": ok,
            "detail": detail,
        })).collect::<Vec<_>>(),
    });
    let mut human = String::new();
    for (name, ok, detail) in &checks.lines {
        if *ok {
            human.push_str(&format!("ok   {name}\n"));
        } else {
            human.push_str(&format!("FAIL {name}: {detail}\n"));
        }
    }
    human.push_str(if passed { "verification passed\n" } else { "verification failed\n" });
    Ok(Outcome { json, human, failed: !passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latalg::CMat;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn numbers_round_trip_bit_exactly() {
        let samples = vec![
            ExactComplex::rat(rat(-7, 3)),
            ExactComplex::sqrt_int(-6).scale(&rat(3, 2)).add(&ExactComplex::rat(rat(1, 2))),
            ExactComplex::i(),
            ExactComplex::dec(CF::from_rats(&rat(5, 4), &rat(-3, 8), 192)),
        ];
        for x in &samples {
            let encoded = num_to_json(x);
            let back = num_from_json(&encoded).unwrap();
            match x.eq_exact(&back) {
                Some(t) => assert!(t, "exact mismatch for {encoded}"),
                None => {
                    // dyadic mantissas are stored exactly, so even the float
                    // case reproduces the same bits
                    assert_eq!(
                        x.eval(192).dist(&back.eval(192)),
                        crate::numerics::bigfloat::f_from_i64(0, 1)
                    );
                    assert_eq!(back.prec, x.prec);
                }
            }
            // a second round trip is the identity on the encoding itself
            assert_eq!(num_to_json(&back), encoded);
        }
    }

    #[test]
    fn period_objects_round_trip() {
        let s6 = ExactComplex::sqrt_int(-6);
        let z = CMat::from_rows(vec![
            vec![s6.scale(&rat(3, 2)), s6.scale(&rat(2, 1))],
            vec![s6.scale(&rat(2, 1)), s6.scale(&rat(3, 1))],
        ]);
        let pav = build_period(vec![BigInt::one(), BigInt::from(3)], z, None, 256).unwrap();
        let encoded = pav_to_json(&pav);
        let back = pav_from_json(&encoded, None).unwrap();
        assert_eq!(back.etype, pav.etype);
        assert_eq!(back.prec, pav.prec);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(back.z[(i, j)].eq_exact(&pav.z[(i, j)]), Some(true));
            }
        }
        assert_eq!(pav_to_json(&back), encoded);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        assert!(matches!(
            pav_from_json(&json!({"schema": "pav/2"}), None),
            Err(CliError::Parse(_))
        ));
        assert!(matches!(
            num_from_json(&json!({"sym": "x"})),
            Err(CliError::Parse(_))
        ));
        assert!(matches!(parse_rat_str("3/0"), Err(CliError::Parse(_))));
        // precision floor is enforced
        let one = json!({"etype": [1], "z": [[{"rat": "0"}]], "prec": 32});
        assert!(matches!(pav_from_json(&one, None), Err(CliError::Parse(_))));
    }
}
