//! Batch command surface: census, verification suites, posets, deformations,
//! fibres, orbits and normal-form witnesses.

pub mod config;
pub mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use prstrata::deformation::{
    hodge_raise, invert_m1, invert_m1_at, linear_recipe, pinned_recipe, pinned_recipe_at, search_witness,
    search_witness_with_model, FamilyChain, GenericLabel, LinearVariant, PinnedVariant, DEFAULT_SEARCH_BUDGET,
};
use prstrata::invariants::StratumLabel;
use prstrata::strata::{build_poset, census_with_model, fiber_constancy, fiber_degrees, Layer, PosetOptions, DEFAULT_SAMPLES};
use prstrata::{ag_fixed_point_witness, ag_witness, DieudonneModel, Error, FieldCtx, PRChain};
use serde_json::{json, Value};

use suites::{Check, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "prstrata", version, about = "Exact census, invariants and deformations of chains of u-stable subspaces of (F_q[u]/u^e)^2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Key-value file (`key = value` per line, `#` comments); flags on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available cores). Output does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output file; standard output when absent. Run metadata goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Coefficient field selection.
#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field orders, comma separated (prime powers).
    #[arg(long, default_value = "2")]
    pub q: String,
    /// Characteristic for an explicit extension (use with --modulus).
    #[arg(long)]
    pub p: Option<u32>,
    /// Irreducible modulus over F_p, coefficients low degree first, comma separated.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count chains by stratum label (λ, T, m1) and write a CSV (or JSON) table.
    ///
    /// Checks that the counts sum to (q+1)^e and that λ = (e,0) occurs only with T empty.
    #[command(args_override_self = true)]
    Census {
        #[arg(long, default_value_t = 4)]
        e: usize,
        #[command(flatten)]
        field: FieldArgs,
        /// Output format.
        #[arg(long, value_enum, default_value_t = CensusFormat::Csv)]
        format: CensusFormat,
        /// Model JSON (a model or a witness record); fills the m1 column.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites and write a JSON report.
    ///
    /// hodge: Hodge pairs of three N=3 lattices, Hodge drop at vanishing m_i and its failing
    /// converse, free top iff T empty, totality of the Hodge-raising deformation, group invariance.
    /// hasse: census totals and the nonempty (λ,T) labels, compared with the stated e=4 table.
    /// dimensions: degrees in q of chain, lattice and T-stratum counts (e-j, e-2j, e-|T|).
    /// flatness: constant fibre sizes over lattices of equal Hodge pair and their degree in q.
    /// closure: every covering edge of the naive order certified by a deformation from every
    /// point of the lower stratum, with a semicontinuity audit on every family.
    #[command(args_override_self = true)]
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        e: usize,
        #[command(flatten)]
        field: FieldArgs,
        /// Field orders used for degree fits, comma separated.
        #[arg(long)]
        samples: Option<String>,
        /// Model JSON for the m1 layer of the closure suite (default: the seeded normal form).
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build the stratification poset with witness-certified covering edges.
    ///
    /// Layers: lambda (Hodge pairs), linear ((λ,T)), refined ((λ,T,m1), e=4, needs a model).
    /// Exits 1 when some covering edge lacks a witness on some point.
    #[command(args_override_self = true)]
    Poset {
        #[arg(long, default_value_t = 4)]
        e: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = PosetFormat::Dot)]
        format: PosetFormat,
        #[arg(long, value_enum, default_value_t = LayerArg::Linear)]
        layer: LayerArg,
        /// Model JSON for the refined layer (default: the seeded normal form).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Candidate families tried per point by the generic search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Deform a chain into a one-parameter family and report its generic label.
    ///
    /// The family specializes to the input at t = 0; the semicontinuity audit
    /// (Hodge pair rises, T shrinks) is run on the result.
    #[command(args_override_self = true)]
    Deform {
        /// Chain JSON as written by the other subcommands.
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, value_enum)]
        recipe: Recipe,
        /// Target label for search, e.g. "lambda=(3,1);T={3}".
        #[arg(long)]
        target: Option<String>,
        /// Model JSON, required by the pinned recipes and invert-m1.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Truncation order t^N for the model recipes (default: adaptive from 16 to 128).
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Count chains over every lattice and check that the count depends only on the Hodge pair.
    ///
    /// Writes e,q,lambda,lattices,fiber rows; with several q also fits the fibre degree in q.
    #[command(args_override_self = true)]
    Fibers {
        #[arg(long, default_value_t = 4)]
        e: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Orbits of GL_2(F_q[u]/u^e) on chains, compared with the invariants
    /// (Hodge pair of ω^(e), of ω^(2), and the blocks of ω^(e)/ω^(1)).
    #[command(args_override_self = true)]
    Orbits {
        #[arg(long, default_value_t = 3)]
        e: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Build the e=4 normal-form model [[u^m, c u^2],[u^2, 0]] with its chain in ((2,2),{2,3,4}).
    ///
    /// Checks the image line F^(1), the label, vanishing m1 and the m1-inverting translate.
    /// With --fixed-point the chain is chosen so that ω^(1) = F^(1).
    #[command(args_override_self = true)]
    Witness {
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Unit coefficient (integer code of a field element).
        #[arg(long, default_value_t = 1)]
        c: u32,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        fixed_point: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetFormat {
    Dot,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerArg {
    Lambda,
    Linear,
    Refined,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Hodge,
    Hasse,
    Dimensions,
    Flatness,
    Closure,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recipe {
    HodgeRaise,
    LinearCollapse,
    LinearRaise,
    PinnedCollapse,
    PinnedRaise,
    PinnedMoveThird,
    InvertM1,
    Search,
}

/// Outcome of a command: a verification failure or invalid input.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotFound { .. }
            | Error::Inconclusive(_)
            | Error::AllMinorsVanish(_)
            | Error::ContainmentViolated(_)
            | Error::NoValidAuxVector(_) => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Data produced by a command and whether its checks passed.
struct Outcome {
    data: String,
    ok: bool,
}

/// Runs the command line and returns the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let argv = match config::merge(&Cli::command(), argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID;
        }
    };
    let matches = match Cli::command().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_INVALID;
        }
    };
    let common = common_of(&cli.command).clone();
    if let Some(j) = common.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return EXIT_INVALID;
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let start = Instant::now();
    let result = dispatch(&cli.command);
    let code = match &result {
        Ok(o) if o.ok => EXIT_OK,
        Ok(_) => EXIT_FAILED,
        Err(CliError::Failed(msg)) => {
            eprintln!("verification failed: {msg}");
            EXIT_FAILED
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
    };
    if let Ok(o) = result {
        if let Err(msg) = emit(&common, &o.data, &argv, code, start) {
            eprintln!("error: {msg}");
            return EXIT_INVALID;
        }
    }
    code
}

fn common_of(c: &Command) -> &Common {
    match c {
        Command::Census { common, .. }
        | Command::Verify { common, .. }
        | Command::Poset { common, .. }
        | Command::Deform { common, .. }
        | Command::Fibers { common, .. }
        | Command::Orbits { common, .. }
        | Command::Witness { common, .. } => common,
    }
}

fn emit(common: &Common, data: &str, argv: &[String], code: i32, start: Instant) -> std::result::Result<(), String> {
    match &common.out {
        None => {
            print!("{data}");
            Ok(())
        }
        Some(path) => {
            fs::write(path, data).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            let meta = json!({
                "argv": argv,
                "version": env!("CARGO_PKG_VERSION"),
                "exit_code": code,
                "seed": common.seed,
                "jobs": rayon::current_num_threads(),
                "elapsed_ms": start.elapsed().as_millis() as u64,
                "output": path.display().to_string(),
            });
            let side = sidecar_path(path);
            fs::write(&side, pretty(&meta)).map_err(|e| format!("cannot write {}: {e}", side.display()))
        }
    }
}

/// `<out>.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<u32>> {
    let out: std::result::Result<Vec<u32>, _> =
        s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(str::parse).collect();
    match out {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Invalid(format!("--{what} expects a comma-separated list of positive integers, got {s:?}"))),
    }
}

fn fields(f: &FieldArgs) -> CliResult<Vec<FieldCtx>> {
    match (&f.modulus, f.p) {
        (Some(m), Some(p)) => Ok(vec![FieldCtx::extension(p, parse_list(m, "modulus")?)?]),
        (Some(_), None) => Err(CliError::Invalid("--modulus needs --p".into())),
        (None, Some(p)) => Ok(vec![FieldCtx::prime(p)?]),
        (None, None) => parse_list(&f.q, "q")?.into_iter().map(|q| FieldCtx::with_order(q).map_err(Into::into)).collect(),
    }
}

fn single_field(f: &FieldArgs) -> CliResult<FieldCtx> {
    let mut v = fields(f)?;
    if v.len() != 1 {
        return Err(CliError::Invalid("this subcommand takes a single field".into()));
    }
    Ok(v.remove(0))
}

fn check_e(e: usize) -> CliResult<()> {
    if e == 0 {
        return Err(CliError::Invalid("--e must be positive".into()));
    }
    Ok(())
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{} is not JSON: {e}", path.display())))
}

/// A model file holds either a model or a record with a `model` field.
fn read_model(path: &Path) -> CliResult<DieudonneModel> {
    let v = read_json(path)?;
    let m = if v.get("model").is_some() { &v["model"] } else { &v };
    Ok(DieudonneModel::from_json(m)?)
}

/// A chain file holds either a chain or a record with a `chain` field.
fn read_chain(path: &Path) -> CliResult<PRChain> {
    let v = read_json(path)?;
    let c = if v.get("chain").is_some() && v.get("levels").is_none() { &v["chain"] } else { &v };
    Ok(PRChain::from_json(c)?)
}

fn report_checks(checks: &[Check]) {
    for c in checks {
        eprintln!("{} {}: {}", if c.ok { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
}

fn dispatch(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::Census { e, field, format, model, .. } => cmd_census(*e, field, *format, model.as_deref()),
        Command::Verify { suite, e, field, samples, model, common, .. } => {
            cmd_verify(*suite, *e, field, samples.as_deref(), model.as_deref(), common.seed)
        }
        Command::Poset { e, field, format, layer, model, budget, .. } => {
            cmd_poset(*e, field, *format, *layer, model.as_deref(), *budget)
        }
        Command::Deform { chain, recipe, target, model, precision, budget, .. } => {
            cmd_deform(chain, *recipe, target.as_deref(), model.as_deref(), *precision, *budget)
        }
        Command::Fibers { e, field, .. } => cmd_fibers(*e, field),
        Command::Orbits { e, field, .. } => cmd_orbits(*e, field),
        Command::Witness { m, c, field, fixed_point, .. } => cmd_witness(*m, *c, field, *fixed_point),
    }
}

fn cmd_census(e: usize, field: &FieldArgs, format: CensusFormat, model: Option<&Path>) -> CliResult<Outcome> {
    check_e(e)?;
    let model = model.map(read_model).transpose()?;
    let mut ok = true;
    let mut csv = csv::Writer::from_writer(vec![]);
    let mut json_rows = vec![];
    csv.write_record(["e", "q", "lambda", "T", "m1", "count"]).map_err(|e| CliError::Invalid(e.to_string()))?;
    for k in fields(field)? {
        let c = census_with_model(e, &k, model.as_ref())?;
        let check = suites::census_check(&c);
        report_checks(std::slice::from_ref(&check));
        ok &= check.ok;
        for row in c.csv_rows() {
            csv.write_record(&row).map_err(|e| CliError::Invalid(e.to_string()))?;
        }
        json_rows.push(c.to_json());
    }
    let data = match format {
        CensusFormat::Csv => {
            String::from_utf8(csv.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?).expect("CSV is UTF-8")
        }
        CensusFormat::Json => pretty(&json!({"censuses": json_rows})),
    };
    Ok(Outcome { data, ok })
}

fn cmd_verify(
    suite: Suite,
    e: usize,
    field: &FieldArgs,
    samples: Option<&str>,
    model: Option<&Path>,
    seed: u64,
) -> CliResult<Outcome> {
    check_e(e)?;
    let ks = fields(field)?;
    let samples = match samples {
        Some(s) => parse_list(s, "samples")?,
        None => DEFAULT_SAMPLES.to_vec(),
    };
    let model = model.map(read_model).transpose()?;
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut reports: Vec<SuiteReport> = vec![];
    if want(Suite::Hodge) {
        reports.push(suites::hodge_suite(e, &ks, seed));
    }
    if want(Suite::Hasse) {
        reports.push(suites::hasse_suite(e, &ks));
    }
    if want(Suite::Dimensions) {
        reports.push(suites::dimensions_suite(e, &samples));
    }
    if want(Suite::Flatness) {
        reports.push(suites::flatness_suite(e, &ks, &samples));
    }
    if want(Suite::Closure) {
        for k in &ks {
            reports.push(suites::closure_suite(e, k, model.clone()));
        }
    }
    for r in &reports {
        report_checks(&r.checks);
    }
    let ok = reports.iter().all(SuiteReport::ok);
    let data = pretty(&json!({
        "e": e,
        "fields": ks.iter().map(FieldCtx::describe).collect::<Vec<_>>(),
        "seed": seed,
        "ok": ok,
        "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
    }));
    Ok(Outcome { data, ok })
}

fn layer_of(l: LayerArg) -> Layer {
    match l {
        LayerArg::Lambda => Layer::Lambda,
        LayerArg::Linear => Layer::Linear,
        LayerArg::Refined => Layer::Refined,
    }
}

fn cmd_poset(
    e: usize,
    field: &FieldArgs,
    format: PosetFormat,
    layer: LayerArg,
    model: Option<&Path>,
    budget: usize,
) -> CliResult<Outcome> {
    check_e(e)?;
    let k = single_field(field)?;
    let layer = layer_of(layer);
    let model = match (layer, model) {
        (_, Some(p)) => Some(read_model(p)?),
        (Layer::Refined, None) => Some(suites::seed_model(&k)?),
        _ => None,
    };
    let rep = build_poset(e, &k, &PosetOptions { layer, model, budget })?;
    let check = suites::poset_check(&rep);
    report_checks(std::slice::from_ref(&check));
    let data = match format {
        PosetFormat::Dot => rep.to_dot(),
        PosetFormat::Json => pretty(&rep.to_json()),
    };
    Ok(Outcome { data, ok: rep.ok() })
}

fn need_model(model: Option<&Path>, recipe: &str) -> CliResult<DieudonneModel> {
    let p = model.ok_or_else(|| CliError::Invalid(format!("recipe {recipe} needs --model")))?;
    read_model(p)
}

fn model_family(
    model: &DieudonneModel,
    c: &PRChain,
    variant: Option<PinnedVariant>,
    precision: Option<usize>,
) -> CliResult<(FamilyChain, GenericLabel)> {
    match (variant, precision) {
        (Some(v), None) => Ok(pinned_recipe(model, c, v)?),
        (None, None) => Ok(invert_m1(model, c)?),
        (v, Some(n)) => {
            let fam = match v {
                Some(v) => pinned_recipe_at(model, c, v, n)?,
                None => invert_m1_at(model, c, n)?,
            };
            let g = fam.generic_label()?;
            Ok((fam, g))
        }
    }
}

fn cmd_deform(
    chain: &Path,
    recipe: Recipe,
    target: Option<&str>,
    model: Option<&Path>,
    precision: Option<usize>,
    budget: usize,
) -> CliResult<Outcome> {
    let c = read_chain(chain)?;
    let name = recipe.to_possible_value().expect("recipes have names").get_name().to_string();
    let mut trace = Value::Null;
    let fam = match recipe {
        Recipe::HodgeRaise => {
            let (fam, tr) = hodge_raise(&c)?;
            trace = tr.to_json(fam.tctx());
            fam
        }
        Recipe::LinearCollapse => linear_recipe(&c, LinearVariant::CollapseToM3Only)?,
        Recipe::LinearRaise => linear_recipe(&c, LinearVariant::RaiseWithinM3)?,
        Recipe::PinnedCollapse | Recipe::PinnedRaise | Recipe::PinnedMoveThird | Recipe::InvertM1 => {
            let m = need_model(model, &name)?;
            let variant = match recipe {
                Recipe::PinnedCollapse => Some(PinnedVariant::Collapse),
                Recipe::PinnedRaise => Some(PinnedVariant::Raise),
                Recipe::PinnedMoveThird => Some(PinnedVariant::MoveThird),
                _ => None,
            };
            model_family(&m, &c, variant, precision)?.0
        }
        Recipe::Search => {
            let t = target.ok_or_else(|| CliError::Invalid("recipe search needs --target".into()))?;
            let goal = StratumLabel::parse(t)?;
            match model {
                Some(p) => search_witness_with_model(&c, &goal, Some(&read_model(p)?), budget)?,
                None => search_witness(&c, &goal, budget)?,
            }
        }
    };
    let generic = fam.generic_label()?;
    let audit = fam.semicontinuity_audit()?;
    let specializes = fam.specialize() == c;
    let mut target_ok = true;
    if let (Some(t), false) = (target, recipe == Recipe::Search) {
        let goal = StratumLabel::parse(t)?;
        target_ok = if goal.m1 == prstrata::M1::Unknown { generic.label.linear() == goal.linear() } else { generic.label == goal };
        if !target_ok {
            eprintln!("generic label {} differs from the requested target {}", generic.label, goal);
        }
    }
    let checks = [
        Check::new("family specializes to the input chain", specializes, ""),
        Check::new("semicontinuity audit", audit.ok, audit.detail.clone()),
    ];
    report_checks(&checks);
    eprintln!("generic label: {}", generic.label);
    let data = pretty(&json!({
        "recipe": name,
        "input": c.to_json(),
        "family": fam.to_json(),
        "generic": generic.to_json(),
        "special": audit.special.code(),
        "audit": {"ok": audit.ok, "detail": audit.detail},
        "trace": trace,
    }));
    Ok(Outcome { data, ok: specializes && audit.ok && target_ok })
}

fn cmd_fibers(e: usize, field: &FieldArgs) -> CliResult<Outcome> {
    check_e(e)?;
    let ks = fields(field)?;
    let mut csv = csv::Writer::from_writer(vec![]);
    csv.write_record(["e", "q", "lambda", "lattices", "fiber"]).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut reports = vec![];
    let mut checks = vec![];
    for k in &ks {
        let r = fiber_constancy(e, k)?;
        checks.push(Check::new(
            format!("fibres are constant on Hodge classes [q={}]", r.q),
            r.ok(),
            r.exceptions.join("; "),
        ));
        for row in r.csv_rows() {
            csv.write_record(&row).map_err(|e| CliError::Invalid(e.to_string()))?;
        }
        reports.push(r);
    }
    if reports.len() > 1 {
        for d in fiber_degrees(&reports)? {
            let enough = d.sizes.len() >= d.expected + 2;
            let detail = format!("{} (degree {}, expected {})", d.fit.render(), d.fit.degree, d.expected);
            if enough {
                checks.push(Check::new(format!("fibre degree over λ={}", d.lambda), d.ok(), detail));
            } else {
                eprintln!("note: fibre degree over λ={} not certified with {} samples: {detail}", d.lambda, d.sizes.len());
            }
        }
    }
    report_checks(&checks);
    let data = String::from_utf8(csv.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?).expect("CSV is UTF-8");
    Ok(Outcome { data, ok: checks.iter().all(|c| c.ok) })
}

fn cmd_orbits(e: usize, field: &FieldArgs) -> CliResult<Outcome> {
    check_e(e)?;
    let k = single_field(field)?;
    let (check, data) = suites::orbit_report(e, &k)?;
    report_checks(std::slice::from_ref(&check));
    Ok(Outcome { data: pretty(&data), ok: check.ok })
}

fn cmd_witness(m: usize, c: u32, field: &FieldArgs, fixed_point: bool) -> CliResult<Outcome> {
    let k = single_field(field)?;
    if c >= k.q() {
        return Err(CliError::Invalid(format!("--c must be a field element code below {}", k.q())));
    }
    let cs = prstrata::Scalar::Fin(c);
    let w = if fixed_point { ag_fixed_point_witness(m, &cs, &k)? } else { ag_witness(m, &cs, &k)? };
    let checks = suites::witness_checks(&w, !fixed_point);
    report_checks(&checks);
    let ok = checks.iter().all(|c| c.ok);
    let mut v = w.to_json();
    v["checks"] = json!(checks.iter().map(Check::to_json).collect::<Vec<_>>());
    v["ok"] = json!(ok);
    Ok(Outcome { data: pretty(&v), ok })
}
