//! `kmforge`: classification, root, and verification suites from the command line.
//!
//! Exit status is 0 when every report passes, 1 when any check fails, and 2 on
//! usage, input, or theorem-gate errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kmforge::ffield::{Field, FieldSpec};
use kmforge::gcm::GeneralizedCartanMatrix;
use kmforge::pgroup::{self, FiniteMatrixGroup, DEFAULT_CAP};
use kmforge::rank2::{self, CaseTag, IdentityId, Rank2Error, RealizationCase};
use kmforge::report::{Report, Status};
use kmforge::roots::{RootDatum, RootVector, DEFAULT_ROOT_CAP};
use kmforge::tseries::MatRing;
use serde_json::json;

/// Primes used to lift commutator constants to integers.
const R2_PRIMES: [u64; 3] = [5, 7, 11];
/// Cone search bound reported alongside prenilpotency decisions.
const CONE_BOUND: i64 = 12;

#[derive(Parser, Debug)]
#[command(name = "kmforge", version, about = "Exact verification kernels for rank-2 Kac-Moody groups over finite fields")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Maximum size of any enumerated group or root set.
    #[arg(long, default_value_t = DEFAULT_CAP, global = true)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a generalized Cartan matrix read from a JSON file.
    Classify { file: PathBuf },
    /// List the positive real roots up to a height.
    Roots {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        height: i64,
    },
    /// Decide whether two real roots form a prenilpotent pair.
    Prenil {
        file: PathBuf,
        /// Comma-separated coordinates, e.g. `1,0`.
        #[arg(long, value_parser = parse_root, allow_hyphen_values = true)]
        alpha: RootVector,
        #[arg(long, value_parser = parse_root, allow_hyphen_values = true)]
        beta: RootVector,
    },
    /// Reduce a positive root: to a rank-2 subsystem, or over a parabolic
    /// subgroup when `--subset` is given (1-based indices).
    Reduce {
        file: PathBuf,
        #[arg(long, value_parser = parse_root)]
        gamma: RootVector,
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
    },
    /// Run the verification suites for one realization or all of them.
    Verify(VerifyArgs),
    /// Finite p-group computations on a sample group.
    Pgroup {
        #[command(subcommand)]
        action: PgroupAction,
    },
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Field order `q = p^m`.
    #[arg(long = "field", default_value_t = 5)]
    q: u64,
    /// Defining polynomial over F_p, coefficients lowest degree first.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
    /// Truncation level `N`: series are taken mod `t^N`.
    #[arg(long, default_value_t = 4)]
    trunc: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    case: CaseArg,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, default_value_t = 8)]
    height: i64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Check::Span, Check::Congruence, Check::Relations])]
    checks: Vec<Check>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Case1,
    Case2,
    A2,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Span,
    Congruence,
    Relations,
    Wellbehaved,
    Density,
    Filtration,
}

#[derive(Subcommand, Debug)]
enum PgroupAction {
    /// Order, derived subgroup, Frattini-type subgroup, and commutator width.
    Demo {
        #[arg(long, value_enum, default_value_t = Demo::Heisenberg)]
        which: Demo,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Demo {
    Heisenberg,
    Case1,
    Case2,
}

/// Errors that map to exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn parse_root(s: &str) -> Result<RootVector, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad coordinate {x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(RootVector)
}

fn read_gcm(path: &Path) -> Result<GeneralizedCartanMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    GeneralizedCartanMatrix::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn field_spec(args: &FieldArgs) -> Result<FieldSpec> {
    let base = FieldSpec::from_order(args.q).map_err(|e| usage(e.to_string()))?;
    match &args.modulus {
        None => Ok(base),
        Some(m) => {
            if m.len() != base.m() as usize + 1 {
                return Err(usage(format!("modulus must have degree {} for q = {}", base.m(), args.q)));
            }
            FieldSpec::with_modulus(base.p(), m.clone()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn info(check: &str, case: &str, params: serde_json::Value, start: Instant, witnesses: Vec<serde_json::Value>) -> Report {
    let mut r = Report::new(check, case, params);
    for w in witnesses {
        r.note(w);
    }
    r.timed(start)
}

fn case_label(a: &GeneralizedCartanMatrix) -> String {
    a.name().unwrap_or("gcm").to_string()
}

fn datum_for(a: &GeneralizedCartanMatrix, horizon: i64) -> Result<RootDatum> {
    RootDatum::enumerate(a, horizon, DEFAULT_ROOT_CAP).map_err(|e| usage(e.to_string()))
}

fn classify(file: &Path) -> Result<Vec<Report>> {
    let start = Instant::now();
    let a = read_gcm(file)?;
    let t = a.classify().map_err(|e| usage(e.to_string()))?;
    let blocks: Vec<_> = a
        .classify_blocks()
        .into_iter()
        .map(|(idx, bt)| json!({ "indices": idx.iter().map(|i| i + 1).collect::<Vec<_>>(), "tag": bt.tag, "hyperbolic": bt.hyperbolic }))
        .collect();
    let w = json!({ "tag": t.tag, "hyperbolic": t.hyperbolic, "symmetric": a.is_symmetric(), "blocks": blocks });
    Ok(vec![info("classify", &case_label(&a), json!({ "gcm": a.to_json() }), start, vec![w])])
}

fn roots(file: &Path, height: i64) -> Result<Vec<Report>> {
    let start = Instant::now();
    if height < 1 {
        return Err(usage("--height must be at least 1"));
    }
    let a = read_gcm(file)?;
    let d = datum_for(&a, height)?;
    let mut rows: Vec<_> = d.entries().iter().filter(|e| e.root.is_positive()).collect();
    rows.sort_by_key(|e| (e.root.height(), e.root.0.clone()));
    let w = rows
        .iter()
        .map(|e| json!({ "root": e.root, "height": e.root.height(), "coroot": e.coroot, "witness": e.witness.one_based() }))
        .collect();
    Ok(vec![info("roots", &case_label(&a), json!({ "height": height, "count": rows.len() }), start, w)])
}

fn prenil(file: &Path, alpha: &RootVector, beta: &RootVector) -> Result<Vec<Report>> {
    let start = Instant::now();
    let a = read_gcm(file)?;
    let horizon = 2 * CONE_BOUND * (alpha.height().abs() + beta.height().abs()).max(1);
    let d = datum_for(&a, horizon)?;
    let decision = d.is_prenilpotent(alpha, beta).map_err(|e| usage(e.to_string()))?;
    let cone = d.cone_roots(alpha, beta, CONE_BOUND).map_err(|e| usage(e.to_string()))?;
    let w = json!({
        "prenilpotent": decision,
        "pairings": [d.pair(alpha, beta).map_err(|e| usage(e.to_string()))?, d.pair(beta, alpha).map_err(|e| usage(e.to_string()))?],
        "cone": cone.iter().map(|(m, n, r)| json!({ "m": m, "n": n, "root": r })).collect::<Vec<_>>(),
    });
    Ok(vec![info(
        "prenil",
        &case_label(&a),
        json!({ "alpha": alpha, "beta": beta, "cone_bound": CONE_BOUND }),
        start,
        vec![w],
    )])
}

fn reduce(file: &Path, gamma: &RootVector, subset: Option<&[usize]>) -> Result<Vec<Report>> {
    let start = Instant::now();
    let a = read_gcm(file)?;
    let d = datum_for(&a, gamma.height().abs().max(1))?;
    let w = match subset {
        Some(j) => {
            if j.iter().any(|&i| i == 0 || i > a.rank()) {
                return Err(usage(format!("subset indices must lie in 1..={}", a.rank())));
            }
            let j0: Vec<usize> = j.iter().map(|i| i - 1).collect();
            let (word, beta) = d.decompose_over_wj(&j0, gamma).map_err(|e| usage(e.to_string()))?;
            json!({ "word": word.one_based(), "beta": beta })
        }
        None => {
            let r = d.rank2_reduce(gamma).map_err(|e| usage(e.to_string()))?;
            json!({ "word": r.word.one_based(), "i": r.i + 1, "j": r.j + 1, "alpha": r.alpha })
        }
    };
    Ok(vec![info("reduce", &case_label(&a), json!({ "gamma": gamma, "subset": subset }), start, vec![w])])
}

fn canonical_pair(tag: CaseTag) -> (RootVector, RootVector) {
    match tag {
        CaseTag::NonTwisted => (RootVector(vec![1, 0]), RootVector(vec![2, 1])),
        CaseTag::Twisted => (RootVector(vec![1, 0]), RootVector(vec![3, 1])),
        CaseTag::FiniteA2 => (RootVector(vec![1, 0]), RootVector(vec![0, 1])),
    }
}

/// Converts a realization error into a report: gate failures become
/// `gate_failed`, anything else aborts the run.
fn gated(check: &str, tag: CaseTag, params: serde_json::Value, r: Result<Report, Rank2Error>) -> Result<Report> {
    match r {
        Ok(rep) => Ok(rep),
        Err(Rank2Error::Gate(e)) => Ok(Report::gate_failed(check, tag.name(), params, e.to_string())),
        Err(e) => Err(anyhow::Error::new(e).context(format!("{check} on {}", tag.name()))),
    }
}

fn verify_case(tag: CaseTag, args: &VerifyArgs, cap: usize) -> Result<Vec<Report>> {
    let spec = field_spec(&args.field)?;
    let n = args.field.trunc;
    let params = json!({ "q": spec.q(), "trunc": n });
    let case = match RealizationCase::new(tag, &spec, n) {
        Ok(c) => c,
        Err(Rank2Error::Gate(e)) => return Ok(vec![Report::gate_failed("gate", tag.name(), params, e.to_string())]),
        Err(e) => return Err(e.into()),
    };
    let field: Arc<Field> = Arc::new(case.field().clone());
    let mut out = Vec::new();
    for check in &args.checks {
        match check {
            Check::Span if tag.is_affine() => {
                for level in 1..n {
                    out.push(gated("span", tag, params.clone(), rank2::span_check(tag, field.clone(), level))?);
                }
            }
            Check::Congruence if tag.is_affine() => {
                for id in IdentityId::for_case(tag) {
                    let mut idx = id.min_index();
                    while id.target_degree(idx) < n {
                        out.push(gated("congruence", tag, params.clone(), rank2::congruence_identity_check(id, field.clone(), idx))?);
                        idx += 1;
                    }
                }
            }
            Check::Relations => {
                out.push(gated("relations.r1", tag, params.clone(), rank2::r1_check(&case, args.height))?);
                out.push(gated("relations.r4", tag, params.clone(), rank2::r4_check(&case, args.height))?);
                out.push(gated("relations.r6", tag, params.clone(), rank2::r6_check(&case))?);
                out.push(gated("relations.commutator_lemma", tag, params.clone(), rank2::commutator_lemma_check(&case))?);
                let (alpha, beta) = canonical_pair(tag);
                let mut fields: Vec<u64> = R2_PRIMES.to_vec();
                if !fields.contains(&spec.q()) {
                    fields.push(spec.q());
                }
                out.push(gated("relations.r2", tag, params.clone(), rank2::r2_check(tag, &alpha, &beta, &fields).map(|(r, _)| r))?);
            }
            Check::Wellbehaved => {
                out.push(gated("wellbehaved", tag, params.clone(), rank2::well_behaved_at_level(&case, args.height, cap))?);
            }
            Check::Density if tag == CaseTag::Twisted => {
                out.push(gated("density", tag, params.clone(), rank2::density_check(&case, cap))?);
            }
            Check::Filtration if tag.is_affine() => {
                out.push(gated("filtration", tag, params.clone(), rank2::filtration_lemma_check(&case, cap))?);
            }
            _ => {}
        }
    }
    Ok(out)
}

fn verify(args: &VerifyArgs, cap: usize) -> Result<Vec<Report>> {
    if args.field.trunc == 0 {
        return Err(usage("--trunc must be at least 1"));
    }
    let tags: Vec<CaseTag> = match args.case {
        CaseArg::Case1 => vec![CaseTag::NonTwisted],
        CaseArg::Case2 => vec![CaseTag::Twisted],
        CaseArg::A2 => vec![CaseTag::FiniteA2],
        CaseArg::All => CaseTag::ALL.to_vec(),
    };
    let mut out = Vec::new();
    for tag in tags {
        out.extend(verify_case(tag, args, cap)?);
    }
    Ok(out)
}

fn demo_group(which: Demo, args: &FieldArgs, cap: usize) -> Result<FiniteMatrixGroup> {
    let spec = field_spec(args)?;
    match which {
        Demo::Heisenberg => {
            let r = MatRing::new(Arc::new(Field::new(spec)?), 3, 1)?;
            let one = r.field().one();
            Ok(pgroup::closure(&r, &[r.elementary(0, 1, 0, one), r.elementary(1, 2, 0, one)], cap)?)
        }
        Demo::Case1 | Demo::Case2 => {
            let tag = if which == Demo::Case1 { CaseTag::NonTwisted } else { CaseTag::Twisted };
            let case = RealizationCase::new(tag, &spec, args.trunc).map_err(|e| match e {
                Rank2Error::Gate(g) => usage(g.to_string()),
                other => other.into(),
            })?;
            Ok(rank2::quotient(&case, cap)?)
        }
    }
}

fn pgroup_demo(which: Demo, args: &FieldArgs, cap: usize) -> Result<Vec<Report>> {
    let start = Instant::now();
    let name = format!("{which:?}").to_lowercase();
    let g = demo_group(which, args, cap)?;
    let derived = pgroup::derived_subgroup(&g, cap)?;
    let kstar = pgroup::frattini_star(&g, cap)?;
    let mut report = Report::new("pgroup.demo", name, json!({ "q": args.q, "trunc": args.trunc }));
    report.note(json!({
        "order": g.order(),
        "derived_order": derived.order(),
        "frattini_order": kstar.order(),
        "generators": g.generators().len(),
    }));
    if g.order() <= pgroup::WIDTH_CHECK_LIMIT {
        let w = pgroup::commutator_width_check(&g, g.generators(), cap)?;
        if w.pass {
            report.note(serde_json::to_value(&w)?);
        } else {
            report.fail_with(serde_json::to_value(&w)?);
        }
    }
    Ok(vec![report.timed(start)])
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("KMFORGE_THREADS") {
        let n: usize = v.parse().map_err(|_| usage(format!("KMFORGE_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(usage("KMFORGE_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Vec<Report>> {
    configure_threads()?;
    match &cli.command {
        Command::Classify { file } => classify(file),
        Command::Roots { file, height } => roots(file, *height),
        Command::Prenil { file, alpha, beta } => prenil(file, alpha, beta),
        Command::Reduce { file, gamma, subset } => reduce(file, gamma, subset.as_deref()),
        Command::Verify(args) => verify(args, cli.cap),
        Command::Pgroup { action: PgroupAction::Demo { which, field } } => pgroup_demo(*which, field, cli.cap),
    }
}

fn emit(reports: &[Report], format: Format) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(reports)?),
        Format::Text => {
            for r in reports {
                println!("{}", r.summary_line());
                for w in &r.witnesses {
                    println!("    {w}");
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(reports) => {
            if let Err(e) = emit(&reports, cli.format) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if reports.iter().any(|r| r.status == Status::GateFailed) {
                ExitCode::from(2)
            } else if reports.iter().all(Report::passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
