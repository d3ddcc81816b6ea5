//! `selcalc`: evaluate, compare and test programs of the selection calculus.

mod render;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use selcalc::equations::{
    canon_rewards, decide_equiv_rewards, decide_pure_prob, decide_pure_rewards, distinguish_rewards,
    weak_canon_prob, EqError, GammaTable, Purity,
};
use selcalc::monads::MonadKind;
use selcalc::operational::{eval_effect_with, EvalError, TraceEvent, DEFAULT_STEP_BUDGET};
use selcalc::reward::{parse_rational, RewardStructure};
use selcalc::selection::{denote_at, gamma_zero, observe, SelError};
use selcalc::strategies::{select, select_bruteforce, StrategyError, DEFAULT_STRATEGY_CAP};
use selcalc::suites::{find_suite, run_suite, suites, Suite, GAMMA_SAMPLES};
use selcalc::syntax::{parse_program, parse_type, pretty, typecheck, Const, Mode, OpSym, Program, Signature, Term, Type};
use selcalc::testgen::{gamma_of_table, GenConfig, Generator};

use render::*;

#[derive(Parser, Debug)]
#[command(name = "selcalc", version, about = "Selection-monad semantics for a calculus with choice, rewards and probability")]
struct Cli {
    /// Emit versioned JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a program.
    Eval(EvalArgs),
    /// Print the canonical form of a base-typed program.
    Canon(CanonArgs),
    /// Decide whether two programs are equivalent.
    Equiv(EquivArgs),
    /// Decide whether a program is pure.
    Pure(PureArgs),
    /// Print a context separating two inequivalent rewards-mode programs.
    Distinguish(DistinguishArgs),
    /// Generate random well-typed programs, one per line.
    Gen(GenArgs),
    /// Run property suites.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Rewards,
    Prob,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Rewards => Mode::Rewards,
            ModeArg::Prob => Mode::Prob,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Semantics {
    /// Small-step evaluation to an effect value.
    Ordinary,
    /// Optimal outcome by local selection.
    Selection,
    /// Denotation in the selection monad at a reward continuation.
    Denotational,
    /// The selected outcome mapped into an auxiliary monad.
    Observe,
}

#[derive(Args, Debug)]
struct EvalArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "selection")]
    semantics: Semantics,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Auxiliary monad: W, DW (= T1), T2 or T3.
    #[arg(long)]
    monad: Option<MonadKind>,
    /// `zero` or a JSON file mapping constants to rewards.
    #[arg(long)]
    gamma: Option<String>,
    /// Select by enumerating all strategies instead of locally.
    #[arg(long)]
    oracle: bool,
    /// Print each small step.
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct CanonArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    monad: Option<MonadKind>,
}

#[derive(Args, Debug)]
struct EquivArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    monad: Option<MonadKind>,
    /// Seed for sampled refutation in probabilistic mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct PureArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    monad: Option<MonadKind>,
}

#[derive(Args, Debug)]
struct DistinguishArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    size: usize,
    #[arg(long = "type", default_value = "Bool")]
    ty: String,
    #[arg(long, value_enum, default_value = "rewards")]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Suite name, `adequacy`, or `all`.
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    /// List the registered suites.
    #[arg(long, conflicts_with = "suite")]
    list: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Case count; defaults to each suite's own.
    #[arg(long)]
    cases: Option<usize>,
    /// Restricts `adequacy` to one mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

/// Failures that end the run without a result.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Indeterminate(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Indeterminate(_) => 2,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Indeterminate(m) | CliError::Internal(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn internal(msg: impl Into<String>) -> CliError {
    CliError::Internal(msg.into())
}

/// A finished command: exit code plus both renderings of its result.
struct Output {
    code: u8,
    text: String,
    json: Map<String, Value>,
}

impl Output {
    fn new(code: u8, text: impl Into<String>, json: Value) -> Self {
        let json = match json {
            Value::Object(m) => m,
            other => Map::from_iter([("result".to_string(), other)]),
        };
        Output { code, text: text.into(), json }
    }
}

fn eval_error(e: EvalError) -> CliError {
    internal(format!("evaluation failed on a well-typed program: {e}"))
}

fn sel_error(e: SelError) -> CliError {
    match e {
        SelError::Type(e) => usage(format!("type error: {e}")),
        SelError::ModeMismatch(m) => usage(format!("monad {m} cannot interpret probabilistic choice")),
        SelError::Eval(e) => eval_error(e),
        other => internal(other.to_string()),
    }
}

fn eq_error(e: EqError) -> CliError {
    match e {
        EqError::Eval(e) => eval_error(e),
        EqError::Equal | EqError::NoMatch { .. } => internal(e.to_string()),
        EqError::NotBase(_) => CliError::Indeterminate(format!("{e}; only base-typed programs are decided")),
        other => usage(other.to_string()),
    }
}

/// A parsed, typed program with its resolved mode.
struct Loaded {
    sig: Signature,
    mode: Mode,
    term: Term,
    ty: Type,
}

fn has_pchoice(t: &Term) -> bool {
    matches!(t, Term::Op(OpSym::PChoice(_), _, _)) || t.children().into_iter().any(has_pchoice)
}

fn load(path: &Path, flag: Option<ModeArg>) -> Result<Loaded, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let Program { mode, mode_declared, sig, term } =
        parse_program(&src).map_err(|e| usage(format!("{}:{e}", path.display())))?;
    let mode = match (flag.map(Mode::from), mode_declared) {
        (Some(f), true) if f != mode => {
            return Err(usage(format!("{}: --mode {f:?} conflicts with the declared mode {mode:?}", path.display())))
        }
        (Some(f), _) => f,
        (None, true) => mode,
        (None, false) if has_pchoice(&term) => Mode::Prob,
        (None, false) => Mode::Rewards,
    };
    let ty = typecheck(&sig, mode, &[], &term).map_err(|e| usage(format!("{}: type error: {e}", path.display())))?;
    Ok(Loaded { sig, mode, term, ty })
}

fn load_pair(a: &Path, b: &Path, flag: Option<ModeArg>) -> Result<(Loaded, Loaded), CliError> {
    let (mut x, mut y) = (load(a, flag)?, load(b, flag)?);
    if x.sig != y.sig {
        return Err(usage("the two programs declare different base types"));
    }
    if x.mode != y.mode {
        // an undeclared rewards program is also a probabilistic one
        let differ = |_| usage("the two programs are in different modes");
        x = load(a, Some(ModeArg::Prob)).map_err(differ)?;
        y = load(b, Some(ModeArg::Prob)).map_err(differ)?;
    }
    if x.ty != y.ty {
        return Err(usage(format!("type mismatch: {} vs {}", selcalc::syntax::pretty_type(&x.ty), selcalc::syntax::pretty_type(&y.ty))));
    }
    Ok((x, y))
}

/// Which procedure family a decision uses: rewards calculus, or a
/// probabilistic monad.
fn decision_monad(mode: Mode, monad: Option<MonadKind>) -> Result<Option<MonadKind>, CliError> {
    match (mode, monad) {
        (Mode::Prob, Some(MonadKind::W)) => Err(usage("monad W cannot interpret probabilistic choice")),
        (Mode::Prob, None) => Ok(Some(MonadKind::DW)),
        (_, Some(MonadKind::W)) | (Mode::Rewards, None) => Ok(None),
        (_, Some(k)) => Ok(Some(k)),
    }
}

fn read_gamma(source: &str, sig: &Signature) -> Result<GammaTable, CliError> {
    if source == "zero" {
        return Ok(GammaTable::new());
    }
    let src = std::fs::read_to_string(source).map_err(|e| usage(format!("{source}: {e}")))?;
    let v: Value = serde_json::from_str(&src).map_err(|e| usage(format!("{source}: {e}")))?;
    let Value::Object(obj) = v else {
        return Err(usage(format!("{source}: expected a JSON object mapping constants to rewards")));
    };
    let mut table = GammaTable::new();
    for (k, v) in obj {
        let key = match (k.as_str(), sig.lookup_constant(&k)) {
            ("tt", _) => Const::TT,
            ("ff", _) => Const::FF,
            (_, Some(c)) => c,
            (_, None) => Const::Rew(parse_rational(&k).map_err(|_| usage(format!("{source}: unknown constant {k}")))?),
        };
        let text = match &v {
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_i64() => n.to_string(),
            _ => return Err(usage(format!("{source}: reward for {k} must be an integer or a rational string"))),
        };
        let r = parse_rational(&text).map_err(|e| usage(format!("{source}: {k}: {e}")))?;
        table.insert(key, r);
    }
    Ok(table)
}

fn cmd_eval(a: &EvalArgs) -> Result<Output, CliError> {
    if a.monad.is_some() && !matches!(a.semantics, Semantics::Denotational | Semantics::Observe) {
        return Err(usage("--monad requires --semantics denotational or observe"));
    }
    if a.gamma.is_some() && a.semantics != Semantics::Denotational {
        return Err(usage("--gamma requires --semantics denotational"));
    }
    if a.oracle && a.semantics != Semantics::Selection {
        return Err(usage("--oracle requires --semantics selection"));
    }
    if a.trace && a.semantics != Semantics::Ordinary {
        return Err(usage("--trace requires --semantics ordinary"));
    }
    let p = load(&a.file, a.mode)?;
    let default_monad = if p.mode == Mode::Prob { MonadKind::DW } else { MonadKind::W };
    let kind = a.monad.unwrap_or(default_monad);
    match a.semantics {
        Semantics::Ordinary => {
            let mut steps: Vec<String> = Vec::new();
            let mut record = |ev: TraceEvent| {
                if a.trace {
                    steps.push(match ev {
                        TraceEvent::Step { depth, term } => format!("{}-> {}", "  ".repeat(depth), pretty(&term)),
                        TraceEvent::Branch { depth, op, index } => {
                            format!("{}branch {index} of {}", "  ".repeat(depth), op_name(&op))
                        }
                    });
                }
            };
            let eff = eval_effect_with(&p.term, DEFAULT_STEP_BUDGET, &mut record).map_err(eval_error)?;
            let shown = pretty(&eff.to_term());
            let mut text = String::new();
            for s in &steps {
                let _ = writeln!(text, "{s}");
            }
            text.push_str(&shown);
            let mut j = json!({"effect": shown});
            if a.trace {
                j["trace"] = json!(steps);
            }
            Ok(Output::new(0, text, j))
        }
        Semantics::Selection => {
            let o = if a.oracle {
                select_bruteforce(&p.term, DEFAULT_STRATEGY_CAP).map_err(|e| match e {
                    StrategyError::CapExceeded { .. } => CliError::Indeterminate(e.to_string()),
                    StrategyError::Eval(e) => eval_error(e),
                    other => internal(other.to_string()),
                })?
            } else {
                select(&p.term).map_err(eval_error)?
            };
            Ok(Output::new(0, outcome_text(&o), json!({"outcome": outcome_json(&o)})))
        }
        Semantics::Denotational => {
            let table = read_gamma(a.gamma.as_deref().unwrap_or("zero"), &p.sig)?;
            let gamma = if table.is_empty() { gamma_zero() } else { gamma_of_table(&table) };
            let v = denote_at(kind, &p.sig, p.mode, &p.term, &gamma).map_err(sel_error)?;
            let show = |x: &selcalc::selection::SemVal| x.to_string();
            Ok(Output::new(0, monad_text(&v, &show), json!({"denotation": monad_json(&v, &show)})))
        }
        Semantics::Observe => {
            if p.mode == Mode::Prob && kind == MonadKind::W {
                return Err(usage("monad W cannot interpret probabilistic choice"));
            }
            let v = observe(&p.term, kind).map_err(sel_error)?;
            Ok(Output::new(0, monad_text(&v, &pretty), json!({"observation": monad_json(&v, &pretty)})))
        }
    }
}

fn op_name(op: &OpSym) -> String {
    match op {
        OpSym::Or => "or".into(),
        OpSym::Reward => "reward".into(),
        OpSym::PChoice(p) => format!("+[{}]", selcalc::reward::fmt_rational(p)),
    }
}

fn cmd_canon(a: &CanonArgs) -> Result<Output, CliError> {
    let p = load(&a.file, a.mode)?;
    match decision_monad(p.mode, a.monad)? {
        None => {
            let cf = canon_rewards(&p.sig, &p.term).map_err(eq_error)?;
            Ok(Output::new(0, cf.to_string(), canonical_json(&cf)))
        }
        Some(kind) => {
            let w = weak_canon_prob(kind, &p.sig, &p.term).map_err(eq_error)?;
            let mut j = weak_canonical_json(&w);
            j["monad"] = json!(kind.name());
            Ok(Output::new(0, w.to_string(), j))
        }
    }
}

/// Evidence that two rewards-mode programs differ: a context and both outcomes.
fn separate(x: &Loaded, y: &Loaded) -> Result<(String, Value), CliError> {
    let (ca, cb) = (canon_rewards(&x.sig, &x.term).map_err(eq_error)?, canon_rewards(&y.sig, &y.term).map_err(eq_error)?);
    let ctx = distinguish_rewards(&x.ty, &ca, &cb).map_err(eq_error)?;
    let oa = select(&ctx.plug(&x.term)).map_err(eval_error)?;
    let ob = select(&ctx.plug(&y.term)).map_err(eval_error)?;
    if oa == ob {
        return Err(internal(format!("context {ctx} does not separate the programs")));
    }
    let text = format!("context {ctx}\nfirst: {}\nsecond: {}", outcome_text(&oa), outcome_text(&ob));
    let j = json!({"context": ctx.to_string(), "first": outcome_json(&oa), "second": outcome_json(&ob)});
    Ok((text, j))
}

fn cmd_equiv(a: &EquivArgs) -> Result<Output, CliError> {
    let (x, y) = load_pair(&a.a, &a.b, a.mode)?;
    match decision_monad(x.mode, a.monad)? {
        None => {
            if decide_equiv_rewards(&x.sig, &x.term, &y.term).map_err(eq_error)? {
                return Ok(Output::new(0, "equivalent", json!({"equivalent": true})));
            }
            let (text, mut j) = separate(&x, &y)?;
            j["equivalent"] = json!(false);
            Ok(Output::new(1, format!("not equivalent\n{text}"), j))
        }
        Some(kind) => {
            let (wa, wb) = (
                weak_canon_prob(kind, &x.sig, &x.term).map_err(eq_error)?,
                weak_canon_prob(kind, &y.sig, &y.term).map_err(eq_error)?,
            );
            if wa == wb {
                return Ok(Output::new(0, "equivalent", json!({"equivalent": true, "monad": kind.name()})));
            }
            let mut g = Generator::with_signature(GenConfig::new(a.seed, Mode::Prob), x.sig.clone())
                .map_err(|e| internal(e.to_string()))?;
            let batch = g.gamma_batch(&x.ty, GAMMA_SAMPLES).map_err(|e| usage(e.to_string()))?;
            for table in batch {
                let gamma = gamma_of_table(&table);
                let da = denote_at(kind, &x.sig, x.mode, &x.term, &gamma).map_err(sel_error)?;
                let db = denote_at(kind, &y.sig, y.mode, &y.term, &gamma).map_err(sel_error)?;
                if da != db {
                    let show = |v: &selcalc::selection::SemVal| v.to_string();
                    let text = format!(
                        "not equivalent\ncontinuation {}\nfirst: {}\nsecond: {}",
                        gamma_text(&table),
                        monad_text(&da, &show).replace('\n', "; "),
                        monad_text(&db, &show).replace('\n', "; ")
                    );
                    let j = json!({
                        "equivalent": false,
                        "monad": kind.name(),
                        "gamma": gamma_json(&table),
                        "first": monad_json(&da, &show),
                        "second": monad_json(&db, &show),
                    });
                    return Ok(Output::new(1, text, j));
                }
            }
            Err(CliError::Indeterminate(format!(
                "unknown: weak canonical forms differ but {GAMMA_SAMPLES} sampled continuations agree"
            )))
        }
    }
}

fn cmd_pure(a: &PureArgs) -> Result<Output, CliError> {
    let p = load(&a.file, a.mode)?;
    let verdict = match decision_monad(p.mode, a.monad)? {
        None => decide_pure_rewards(&p.sig, &p.term),
        Some(kind) => decide_pure_prob(kind, RewardStructure::AddRationals, &p.sig, &p.term),
    }
    .map_err(eq_error)?;
    let j = purity_json(&verdict);
    Ok(match &verdict {
        Purity::Pure(c) => Output::new(0, format!("pure {}", const_name(c)), j),
        Purity::Impure { witness } => Output::new(1, format!("impure\nwitness {}", gamma_text(witness)), j),
    })
}

fn cmd_distinguish(a: &DistinguishArgs) -> Result<Output, CliError> {
    let (x, y) = load_pair(&a.a, &a.b, a.mode)?;
    if x.mode != Mode::Rewards {
        return Err(usage("distinguish works on rewards-mode programs only"));
    }
    if decide_equiv_rewards(&x.sig, &x.term, &y.term).map_err(eq_error)? {
        return Ok(Output::new(1, "equivalent: no separating context", json!({"equivalent": true})));
    }
    let (text, j) = separate(&x, &y)?;
    Ok(Output::new(0, text, j))
}

fn cmd_gen(a: &GenArgs) -> Result<Output, CliError> {
    let ty = parse_type(&a.ty, &Signature::default()).map_err(|e| usage(format!("--type: {e}")))?;
    let cfg = GenConfig::new(a.seed, a.mode.into()).with_size(a.size);
    let mut g = Generator::new(cfg).map_err(|e| usage(e.to_string()))?;
    let programs = (0..a.count)
        .map(|_| g.program(&ty).map(|t| pretty(&t)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(e.to_string()))?;
    Ok(Output::new(0, programs.join("\n"), json!({"programs": programs})))
}

fn cmd_check(a: &CheckArgs) -> Result<Output, CliError> {
    if a.list {
        let text = suites()
            .iter()
            .map(|s| format!("{:<20} {:>5}  {}", s.name, s.default_cases, s.about))
            .collect::<Vec<_>>()
            .join("\n");
        let j: Vec<Value> =
            suites().iter().map(|s| json!({"name": s.name, "default_cases": s.default_cases, "about": s.about})).collect();
        return Ok(Output::new(0, text, json!({"suites": j})));
    }
    let name = a.suite.as_deref().unwrap_or_default();
    if a.mode.is_some() && name != "adequacy" {
        return Err(usage("--mode applies only to --suite adequacy"));
    }
    let chosen: Vec<&'static Suite> = match name {
        "all" => suites().iter().collect(),
        "adequacy" => {
            let names: &[&str] = match a.mode {
                Some(ModeArg::Rewards) => &["adequacy-rewards"],
                Some(ModeArg::Prob) => &["adequacy-prob-T1", "adequacy-prob-T2", "adequacy-prob-T3"],
                None => &["adequacy-rewards", "adequacy-prob-T1", "adequacy-prob-T2", "adequacy-prob-T3"],
            };
            names.iter().filter_map(|n| find_suite(n)).collect()
        }
        n => vec![find_suite(n).ok_or_else(|| usage(format!("unknown suite {n}; see `selcalc check --list`")))?],
    };
    let reports: Vec<_> = chosen.iter().map(|s| run_suite(s, a.seed, a.cases.unwrap_or(s.default_cases))).collect();
    let ok = reports.iter().all(|r| r.ok());
    let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
    let j = json!({"ok": ok, "reports": reports.iter().map(report_json).collect::<Vec<_>>()});
    Ok(Output::new(if ok { 0 } else { 4 }, text, j))
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Canon(a) => cmd_canon(a),
        Cmd::Equiv(a) => cmd_equiv(a),
        Cmd::Pure(a) => cmd_pure(a),
        Cmd::Distinguish(a) => cmd_distinguish(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Check(a) => cmd_check(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", envelope(out.json));
            } else if !out.text.is_empty() {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.json {
                let kind = match e {
                    CliError::Usage(_) => "usage",
                    CliError::Indeterminate(_) => "indeterminate",
                    CliError::Internal(_) => "internal",
                };
                println!("{}", envelope(Map::from_iter([("error".to_string(), json!({"kind": kind, "message": e.message()}))])));
            }
            eprintln!("selcalc: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
