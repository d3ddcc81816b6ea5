//! Named property suites over seeded random cases.
//!
//! Each case gets its own generator seeded from `(seed, index)`, so cases run on a
//! worker pool and the report does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::equations::{
    apply_axiom, canon_rewards, decide_equiv_rewards, decide_pure_prob, decide_pure_rewards, distinguish_rewards,
    weak_canon_prob, Axiom, CanonicalForm, GammaTable, Purity,
};
use crate::monads::{
    expect0, k_gamma, mr_of_effect, theta, AuxMonad, MonadKind, DW, MR, T2, T3, W,
};
use crate::operational::eval_effect;
use crate::reward::{int, Prob, Reward, RewardStructure};
use crate::selection::{
    adequacy_holds, denote_program, gamma_zero, kappa_program, sel_or, sel_pchoice, sel_reward, SelComp, SemVal,
};
use crate::strategies::{argmax, max_by, select, select_effect_bruteforce, select_fast, DEFAULT_STRATEGY_CAP};
use crate::syntax::{make_dispatcher, parse_program, pretty, Const, Eff, Mode, Signature, Term, Type};
use crate::testgen::{case_seed, gamma_of_table, GenConfig, Generator};

/// Number of sampled continuations per semantic comparison.
pub const GAMMA_SAMPLES: usize = 64;

/// `Ok(tags)` on success; tags are counted in the report.
pub type CaseResult = Result<Vec<&'static str>, String>;

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    pub default_cases: usize,
    case: fn(u64, usize) -> CaseResult,
}

impl Suite {
    pub fn run_case(&self, seed: u64, index: usize) -> CaseResult {
        (self.case)(case_seed(seed, index as u64), index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    /// Failing case indices with messages, in index order.
    pub failures: Vec<(usize, String)>,
    pub tags: BTreeMap<&'static str, usize>,
    pub warnings: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }

    pub fn tag(&self, t: &str) -> usize {
        self.tags.get(t).copied().unwrap_or(0)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "OK" } else { "FAILED" };
        write!(f, "{}: {}/{} {}", self.name, self.passed, self.cases, verdict)?;
        if !self.tags.is_empty() {
            let tags: Vec<String> = self.tags.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, " [{}]", tags.join(", "))?;
        }
        for w in &self.warnings {
            write!(f, "\n  warning: {w}")?;
        }
        for (i, msg) in self.failures.iter().take(5) {
            write!(f, "\n  case {i}: {msg}")?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: &Suite, seed: u64, cases: usize) -> SuiteReport {
    let start = Instant::now();
    let results: Vec<CaseResult> = (0..cases)
        .into_par_iter()
        .map(|i| {
            catch_unwind(AssertUnwindSafe(|| suite.run_case(seed, i)))
                .unwrap_or_else(|p| Err(format!("panic: {}", panic_message(&p))))
        })
        .collect();
    let mut report = SuiteReport {
        name: suite.name,
        seed,
        cases,
        passed: 0,
        failures: Vec::new(),
        tags: BTreeMap::new(),
        warnings: Vec::new(),
        elapsed: Duration::ZERO,
    };
    if cases == 0 {
        report.warnings.push("no cases run; the pass is vacuous".into());
    }
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(tags) => {
                report.passed += 1;
                for t in tags {
                    *report.tags.entry(t).or_insert(0) += 1;
                }
            }
            Err(msg) => report.failures.push((i, msg)),
        }
    }
    report.elapsed = start.elapsed();
    report
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown".into())
}

pub fn suites() -> &'static [Suite] {
    &SUITES
}

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

static SUITES: [Suite; 19] = [
    Suite { name: "adequacy-rewards", about: "selection denotation at 0 equals the optimal outcome (W)", default_cases: 500, case: adequacy_rewards },
    Suite { name: "adequacy-prob-T1", about: "selection denotation at 0 equals the optimal outcome (T1)", default_cases: 300, case: adequacy_t1 },
    Suite { name: "adequacy-prob-T2", about: "selection denotation at 0 equals the optimal outcome (T2)", default_cases: 300, case: adequacy_t2 },
    Suite { name: "adequacy-prob-T3", about: "selection denotation at 0 equals the optimal outcome (T3)", default_cases: 300, case: adequacy_t3 },
    Suite { name: "local-vs-brute", about: "local evaluator equals brute-force strategy search, with forced ties", default_cases: 300, case: local_vs_brute },
    Suite { name: "monad-laws", about: "unit, associativity and algebra laws for W, T1, T2, T3, MR", default_cases: 1000, case: monad_laws },
    Suite { name: "theta-morphism", about: "theta preserves unit, bind, reward and probabilistic choice", default_cases: 500, case: theta_morphism },
    Suite { name: "axioms-fig3", about: "choice/reward axioms and R1-R3 at sampled continuations", default_cases: 1000, case: axioms_fig3 },
    Suite { name: "axioms-fig4", about: "probabilistic axioms, gathering laws and PR1-PR4 at sampled continuations", default_cases: 1800, case: axioms_fig4 },
    Suite { name: "genax-or", about: "or is idempotent, associative, left-biased and not commutative", default_cases: 200, case: genax_or },
    Suite { name: "distributivity", about: "reward and probabilistic choice distribute over or", default_cases: 200, case: distributivity },
    Suite { name: "canon-sound", about: "canonical and weak canonical forms denote the program", default_cases: 300, case: canon_sound },
    Suite { name: "equiv-roundtrip", about: "equivalence decisions agree with semantics and separating contexts", default_cases: 200, case: equiv_roundtrip },
    Suite { name: "purity-rewards", about: "purity decision agrees with sampling; witnesses verified (W)", default_cases: 200, case: purity_rewards },
    Suite { name: "purity-prob", about: "purity decision agrees with sampling; witnesses verified (T1, T2, T3)", default_cases: 600, case: purity_prob },
    Suite { name: "k-gamma-injective", about: "reward addition is injective and realized by dispatcher programs", default_cases: 500, case: k_gamma_injective },
    Suite { name: "char-bool", about: "Bool-valued maps separate unequal monad values", default_cases: 200, case: char_bool },
    Suite { name: "mr-fullab", about: "equal MR denotations give equal reward observations, unequal ones are separated", default_cases: 200, case: mr_fullab },
    Suite { name: "argmax-lemmas", about: "argmax split, image and lexicographic product identities", default_cases: 500, case: argmax_lemmas },
];

// ---------------------------------------------------------------- helpers

/// `base C = {a, b, c}`.
pub fn demo_signature() -> Signature {
    parse_program("base C = {a, b, c}\na").expect("fixed source").sig
}

fn generator(seed: u64, mode: Mode) -> Generator {
    Generator::with_signature(GenConfig::new(seed, mode), demo_signature()).expect("default config")
}

fn show(t: &Term) -> String {
    pretty(t)
}

fn sem(c: &Const) -> SemVal {
    SemVal::Base(c.clone())
}

fn denote<T: AuxMonad + 'static>(sig: &Signature, mode: Mode, m: &Term) -> Result<SelComp<T>, String> {
    denote_program::<T>(sig, mode, m).map_err(|e| format!("{}: {e}", show(m)))
}

fn same_at<T: AuxMonad + 'static>(
    sig: &Signature,
    mode: Mode,
    a: &Term,
    b: &Term,
    gammas: &[GammaTable],
) -> Result<(), String> {
    let (da, db) = (denote::<T>(sig, mode, a)?, denote::<T>(sig, mode, b)?);
    for g in gammas {
        let gg = gamma_of_table(g);
        let (x, y) = (da.run(&gg), db.run(&gg));
        if x != y {
            return Err(format!("{} differs from {} at {g:?} in {}: {x:?} vs {y:?}", show(a), show(b), T::NAME));
        }
    }
    Ok(())
}

fn same_at_kind(
    kind: MonadKind,
    sig: &Signature,
    mode: Mode,
    a: &Term,
    b: &Term,
    gammas: &[GammaTable],
) -> Result<(), String> {
    match kind {
        MonadKind::W => same_at::<W>(sig, mode, a, b, gammas),
        MonadKind::DW => same_at::<DW>(sig, mode, a, b, gammas),
        MonadKind::T2 => same_at::<T2>(sig, mode, a, b, gammas),
        MonadKind::T3 => same_at::<T3>(sig, mode, a, b, gammas),
    }
}

fn kind_of_case(i: usize) -> MonadKind {
    MonadKind::PROBABILISTIC[i % 3]
}

// ---------------------------------------------------------------- adequacy

fn adequacy<T: AuxMonad + 'static>(seed: u64, mode: Mode) -> CaseResult {
    let mut g = generator(seed, mode);
    let ty = g.base_type();
    let m = g.program(&ty).map_err(|e| e.to_string())?;
    match adequacy_holds::<T>(g.signature(), mode, &m) {
        Ok(true) => Ok(vec![]),
        Ok(false) => Err(format!("denotation at 0 differs from the optimal outcome for {}", show(&m))),
        Err(e) => Err(format!("{}: {e}", show(&m))),
    }
}

fn adequacy_rewards(seed: u64, _: usize) -> CaseResult {
    adequacy::<W>(seed, Mode::Rewards)
}

fn adequacy_t1(seed: u64, _: usize) -> CaseResult {
    adequacy::<DW>(seed, Mode::Prob)
}

fn adequacy_t2(seed: u64, _: usize) -> CaseResult {
    adequacy::<T2>(seed, Mode::Prob)
}

fn adequacy_t3(seed: u64, _: usize) -> CaseResult {
    adequacy::<T3>(seed, Mode::Prob)
}

// ---------------------------------------------------------------- local characterization

const MAX_CHOICE_NODES: usize = 12;

fn local_vs_brute(seed: u64, i: usize) -> CaseResult {
    let mode = if i % 2 == 0 { Mode::Rewards } else { Mode::Prob };
    let mut g = generator(seed, mode);
    let ty = g.finite_base_type();
    let carrier = g.carrier(&ty).map_err(|e| e.to_string())?;
    let tie = i % 5 == 0;
    let e = if tie { g.tied_effect_value(&carrier, MAX_CHOICE_NODES) } else { g.effect_value(&carrier, MAX_CHOICE_NODES) };
    if e.choice_nodes() > MAX_CHOICE_NODES {
        return Err(format!("generator exceeded the node bound: {}", show(&e.to_term())));
    }
    let fast = select_fast(&e);
    let brute = select_effect_bruteforce(&e, DEFAULT_STRATEGY_CAP).map_err(|x| x.to_string())?;
    if fast != brute {
        return Err(format!("{}: fast {fast:?} vs brute force {brute:?}", show(&e.to_term())));
    }
    let mut tags = vec![if mode == Mode::Rewards { "rewards" } else { "prob" }];
    if tie {
        let Eff::Or(left, _) = &e else { unreachable!() };
        if fast != select_fast(left) {
            return Err(format!("tie not resolved to the left in {}", show(&e.to_term())));
        }
        tags.push("tie");
    }
    Ok(tags)
}

// ---------------------------------------------------------------- monad structure

const ATOMS: [u8; 3] = [0, 1, 2];

fn laws<T: AuxMonad>(g: &mut Generator, val: fn(&mut Generator, &[u8]) -> T::Val<u8>) -> Result<(), String> {
    let u = val(g, &ATOMS);
    let f: BTreeMap<u8, T::Val<u8>> = ATOMS.iter().map(|x| (*x, val(g, &ATOMS))).collect();
    let h: BTreeMap<u8, T::Val<u8>> = ATOMS.iter().map(|x| (*x, val(g, &ATOMS))).collect();
    let x = *ATOMS.choose(g.rng()).expect("nonempty");
    let fail = |law: &str| Err(format!("{} violates {law} on {u:?}", T::NAME));
    if T::bind(&T::unit(x), &mut |a| f[a].clone()) != f[&x] {
        return fail("left unit");
    }
    if T::bind(&u, &mut |a| T::unit(*a)) != u {
        return fail("right unit");
    }
    let lhs = T::bind(&T::bind(&u, &mut |a| f[a].clone()), &mut |b| h[b].clone());
    let rhs = T::bind(&u, &mut |a| T::bind(&f[a], &mut |b| h[b].clone()));
    if lhs != rhs {
        return fail("associativity");
    }
    let (r, s) = (g.reward(), g.reward());
    if T::alpha(&T::unit(r.clone())) != r {
        return fail("alpha . unit = id");
    }
    if T::alpha(&T::reward(&s, &T::unit(r.clone()))) != &s + &r {
        return fail("alpha respects reward");
    }
    if T::PROBABILISTIC {
        let p = g.prob();
        let mixed = T::pchoice(&p, &T::unit(r.clone()), &T::unit(s.clone())).map_err(|e| e.to_string())?;
        if T::alpha(&mixed) != &p * &r + (Prob::one() - &p) * &s {
            return fail("alpha respects probabilistic choice");
        }
    }
    Ok(())
}

fn monad_laws(seed: u64, _: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Prob);
    laws::<W>(&mut g, Generator::w_value)?;
    laws::<DW>(&mut g, Generator::dw_value)?;
    laws::<T2>(&mut g, Generator::t2_value)?;
    laws::<T3>(&mut g, Generator::t3_value)?;
    laws::<MR>(&mut g, Generator::mr_value)?;
    // reward gathering in T2 (same value) and T3 (any values)
    let (p, r, s) = (g.prob(), g.reward(), g.reward());
    let avg = &p * &r + (Prob::one() - &p) * &s;
    let u = g.t2_value(&ATOMS);
    let lhs = T2::pchoice(&p, &T2::reward(&r, &u), &T2::reward(&s, &u)).map_err(|e| e.to_string())?;
    if lhs != T2::reward(&avg, &u) {
        return Err(format!("T2 gathering law fails on {u:?}"));
    }
    let (u, v) = (g.t3_value(&ATOMS), g.t3_value(&ATOMS));
    let lhs = T3::pchoice(&p, &T3::reward(&r, &u), &T3::reward(&s, &v)).map_err(|e| e.to_string())?;
    let rhs = T3::pchoice(&p, &T3::reward(&avg, &u), &T3::reward(&avg, &v)).map_err(|e| e.to_string())?;
    if lhs != rhs {
        return Err(format!("T3 gathering law fails on {u:?}, {v:?}"));
    }
    Ok(vec![])
}

fn theta_square<T: AuxMonad>(g: &mut Generator) -> Result<(), String> {
    let th = |u: &crate::monads::DWVal<u8>| theta::<T, u8>(u).map_err(|e| e.to_string());
    let x = *ATOMS.choose(g.rng()).expect("nonempty");
    if th(&DW::unit(x))? != T::unit(x) {
        return Err(format!("theta into {} does not preserve units", T::NAME));
    }
    let u = g.dw_value(&ATOMS);
    let f: BTreeMap<u8, _> = ATOMS.iter().map(|a| (*a, g.dw_value(&ATOMS))).collect();
    let thf: BTreeMap<u8, T::Val<u8>> = f.iter().map(|(a, v)| Ok((*a, th(v)?))).collect::<Result<_, String>>()?;
    if th(&DW::bind(&u, &mut |a| f[a].clone()))? != T::bind(&th(&u)?, &mut |a| thf[a].clone()) {
        return Err(format!("theta into {} does not preserve bind on {u:?}", T::NAME));
    }
    let r = g.reward();
    if th(&DW::reward(&r, &u))? != T::reward(&r, &th(&u)?) {
        return Err(format!("theta into {} does not preserve reward", T::NAME));
    }
    let (p, v) = (g.prob(), g.dw_value(&ATOMS));
    let lhs = th(&DW::pchoice(&p, &u, &v).map_err(|e| e.to_string())?)?;
    let rhs = T::pchoice(&p, &th(&u)?, &th(&v)?).map_err(|e| e.to_string())?;
    if lhs != rhs {
        return Err(format!("theta into {} does not preserve probabilistic choice", T::NAME));
    }
    Ok(())
}

fn theta_morphism(seed: u64, _: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Prob);
    theta_square::<DW>(&mut g)?;
    theta_square::<T2>(&mut g)?;
    theta_square::<T3>(&mut g)?;
    Ok(vec![])
}

fn map_kind<T: AuxMonad>(u: &T::Val<u8>, f: &[bool]) -> T::Val<bool> {
    T::map(u, &mut |a| f[*a as usize])
}

fn separable<T: AuxMonad>(u: &T::Val<u8>, v: &T::Val<u8>, k: usize) -> bool {
    (0..1u32 << k).any(|mask| {
        let f: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        map_kind::<T>(u, &f) != map_kind::<T>(v, &f)
    })
}

fn char_for<T: AuxMonad>(g: &mut Generator, val: fn(&mut Generator, &[u8]) -> T::Val<u8>) -> Result<bool, String> {
    let k = g.rng().gen_range(1..=4usize);
    let carrier: Vec<u8> = (0..k as u8).collect();
    let u = val(g, &carrier);
    let mut v = val(g, &carrier);
    for _ in 0..20 {
        if v != u {
            break;
        }
        v = val(g, &carrier);
    }
    if u == v {
        return Ok(false);
    }
    if !separable::<T>(&u, &v, k) {
        return Err(format!("no Bool-valued map separates {u:?} and {v:?} in {}", T::NAME));
    }
    Ok(true)
}

fn char_bool(seed: u64, _: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Prob);
    let mut tags = vec![];
    if char_for::<DW>(&mut g, Generator::dw_value)? {
        tags.push("T1");
    }
    if char_for::<T2>(&mut g, Generator::t2_value)? {
        tags.push("T2");
    }
    if char_for::<T3>(&mut g, Generator::t3_value)? {
        tags.push("T3");
    }
    Ok(tags)
}

fn injective_for<T: AuxMonad>(g: &mut Generator, val: fn(&mut Generator, &[u8]) -> T::Val<u8>) -> Result<(), String> {
    let u = val(g, &ATOMS);
    let mut v = val(g, &ATOMS);
    while v == u {
        v = val(g, &ATOMS);
    }
    let table: Vec<Reward> = ATOMS.iter().map(|_| g.reward()).collect();
    let mut gamma = |a: &u8| table[*a as usize].clone();
    if k_gamma::<T, u8>(&mut gamma, &u) == k_gamma::<T, u8>(&mut gamma, &v) {
        return Err(format!("reward addition in {} identifies {u:?} and {v:?}", T::NAME));
    }
    Ok(())
}

/// `k_gamma([[E]](gamma)) = [[K E]](0)` for the dispatcher `K` adding `gamma`.
fn kappa_for<T: AuxMonad + 'static>(g: &mut Generator) -> Result<(), String> {
    let sig = g.signature().clone();
    let ty = g.finite_base_type();
    let carrier = g.carrier(&ty).map_err(|e| e.to_string())?;
    let e = g.effect_value(&carrier, 6).to_term();
    let table = g.gamma(&ty).map_err(|e| e.to_string())?;
    let k = kappa_program(&carrier, &table).map_err(|e| e.to_string())?;
    let den = denote::<T>(&sig, Mode::Prob, &e)?;
    let lhs = k_gamma::<T, SemVal>(&mut |x| gamma_of_table(&table)(x), &den.run(&gamma_of_table(&table)));
    let rhs = denote::<T>(&sig, Mode::Prob, &Term::app(k, e.clone()))?.run(&gamma_zero());
    if lhs != rhs {
        return Err(format!("dispatcher reduction fails in {} for {}", T::NAME, show(&e)));
    }
    Ok(())
}

fn k_gamma_injective(seed: u64, _: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Prob);
    injective_for::<DW>(&mut g, Generator::dw_value)?;
    injective_for::<T2>(&mut g, Generator::t2_value)?;
    injective_for::<T3>(&mut g, Generator::t3_value)?;
    kappa_for::<DW>(&mut g)?;
    kappa_for::<T2>(&mut g)?;
    kappa_for::<T3>(&mut g)?;
    Ok(vec![])
}

// ---------------------------------------------------------------- axioms

const CHOICE_AXIOMS: [Axiom; 10] = [
    Axiom::OrAssoc,
    Axiom::OrIdem,
    Axiom::RewardZero,
    Axiom::RewardAction,
    Axiom::RewardOr,
    Axiom::IfReward,
    Axiom::IfRewardOr,
    Axiom::R1,
    Axiom::R2,
    Axiom::R3,
];

const PROB_AXIOMS: [Axiom; 18] = [
    Axiom::OrIdem,
    Axiom::OrAssoc,
    Axiom::RewardZero,
    Axiom::RewardAction,
    Axiom::PChoiceOne,
    Axiom::PChoiceComm,
    Axiom::PChoiceAssoc,
    Axiom::RewardPChoice,
    Axiom::RewardOr,
    Axiom::PChoiceOr,
    Axiom::IfExpect,
    Axiom::IfExpectOr,
    Axiom::GatherT2,
    Axiom::GatherT3,
    Axiom::PR1,
    Axiom::PR2,
    Axiom::PR3,
    Axiom::PR4,
];

fn axiom_case(seed: u64, axiom: Axiom, mode: Mode, kinds: &[MonadKind]) -> CaseResult {
    let mut g = generator(seed, mode);
    let ty = g.finite_base_type();
    let (lhs, rhs) = g.axiom_instance(axiom, &ty).map_err(|e| format!("{axiom}: {e}"))?;
    let gammas = g.gamma_batch(&ty, GAMMA_SAMPLES).map_err(|e| e.to_string())?;
    let sig = g.signature().clone();
    let (ol, or) = (select(&lhs).map_err(|e| e.to_string())?, select(&rhs).map_err(|e| e.to_string())?);
    for kind in kinds.iter().filter(|k| axiom.valid_in(**k)) {
        same_at_kind(*kind, &sig, mode, &lhs, &rhs, &gammas).map_err(|e| format!("{axiom}: {e}"))?;
        let (a, b) = (
            crate::selection::theta_kind(*kind, &ol).map_err(|e| e.to_string())?,
            crate::selection::theta_kind(*kind, &or).map_err(|e| e.to_string())?,
        );
        if a != b {
            return Err(format!("{axiom}: observations differ in {} for {}", kind.name(), show(&lhs)));
        }
    }
    Ok(vec![axiom.name()])
}

fn axioms_fig3(seed: u64, i: usize) -> CaseResult {
    axiom_case(seed, CHOICE_AXIOMS[i % CHOICE_AXIOMS.len()], Mode::Rewards, &[MonadKind::W])
}

fn axioms_fig4(seed: u64, i: usize) -> CaseResult {
    axiom_case(seed, PROB_AXIOMS[i % PROB_AXIOMS.len()], Mode::Prob, &MonadKind::PROBABILISTIC)
}

// ---------------------------------------------------------------- or and distributivity

fn or_props<T: AuxMonad + 'static>(g: &mut Generator, mode: Mode) -> Result<(), String> {
    let sig = g.signature().clone();
    let ty = g.finite_base_type();
    let terms: Vec<Term> = (0..3).map(|_| g.program(&ty)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let ds: Vec<SelComp<T>> = terms.iter().map(|t| denote::<T>(&sig, mode, t)).collect::<Result<_, _>>()?;
    let (f, gg, h) = (&ds[0], &ds[1], &ds[2]);
    let gammas = g.gamma_batch(&ty, 8).map_err(|e| e.to_string())?;
    for table in &gammas {
        let gm = gamma_of_table(table);
        let ctx = || format!("{} at {table:?} for {}", T::NAME, terms.iter().map(show).collect::<Vec<_>>().join(" | "));
        if sel_or(f, f).run(&gm) != f.run(&gm) {
            return Err(format!("or not idempotent: {}", ctx()));
        }
        if sel_or(&sel_or(f, gg), h).run(&gm) != sel_or(f, &sel_or(gg, h)).run(&gm) {
            return Err(format!("or not associative: {}", ctx()));
        }
        if sel_or(f, &sel_or(gg, f)).run(&gm) != sel_or(f, gg).run(&gm) {
            return Err(format!("or not left-biased: {}", ctx()));
        }
    }
    Ok(())
}

/// The stored witness of non-commutativity: `tt or ff` and `ff or tt` at 0.
pub fn or_noncommutative_witness() -> Result<bool, String> {
    let sig = Signature::default();
    let (a, b) = (Term::or(Term::tt(), Term::ff()), Term::or(Term::ff(), Term::tt()));
    let (da, db) = (denote::<W>(&sig, Mode::Rewards, &a)?, denote::<W>(&sig, Mode::Rewards, &b)?);
    Ok(da.run(&gamma_zero()) != db.run(&gamma_zero()))
}

fn genax_or(seed: u64, i: usize) -> CaseResult {
    if i == 0 && !or_noncommutative_witness()? {
        return Err("the stored non-commutativity witness no longer separates".into());
    }
    if i % 2 == 0 {
        or_props::<W>(&mut generator(seed, Mode::Rewards), Mode::Rewards)?;
        Ok(vec!["W"])
    } else {
        let mut g = generator(seed, Mode::Prob);
        match kind_of_case(i / 2) {
            MonadKind::DW => or_props::<DW>(&mut g, Mode::Prob)?,
            MonadKind::T2 => or_props::<T2>(&mut g, Mode::Prob)?,
            _ => or_props::<T3>(&mut g, Mode::Prob)?,
        }
        Ok(vec!["prob"])
    }
}

fn distribute<T: AuxMonad + 'static>(g: &mut Generator, mode: Mode) -> Result<(), String> {
    let sig = g.signature().clone();
    let ty = g.finite_base_type();
    let terms: Vec<Term> = (0..3).map(|_| g.program(&ty)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let ds: Vec<SelComp<T>> = terms.iter().map(|t| denote::<T>(&sig, mode, t)).collect::<Result<_, _>>()?;
    let (f, gg, h) = (&ds[0], &ds[1], &ds[2]);
    let r = g.reward();
    let p = g.prob();
    let gammas = g.gamma_batch(&ty, 8).map_err(|e| e.to_string())?;
    for table in &gammas {
        let gm = gamma_of_table(table);
        let ctx = || format!("{} at {table:?} for {}", T::NAME, terms.iter().map(show).collect::<Vec<_>>().join(" | "));
        if sel_reward(r.clone(), &sel_or(gg, h)).run(&gm)
            != sel_or(&sel_reward(r.clone(), gg), &sel_reward(r.clone(), h)).run(&gm)
        {
            return Err(format!("reward does not distribute over or: {}", ctx()));
        }
        if T::PROBABILISTIC {
            let pc = |a: &SelComp<T>, b: &SelComp<T>| sel_pchoice(p.clone(), a, b).map_err(|e| e.to_string());
            if pc(f, &sel_or(gg, h))?.run(&gm) != sel_or(&pc(f, gg)?, &pc(f, h)?).run(&gm) {
                return Err(format!("choice does not distribute over or on the right: {}", ctx()));
            }
            if pc(&sel_or(gg, h), f)?.run(&gm) != sel_or(&pc(gg, f)?, &pc(h, f)?).run(&gm) {
                return Err(format!("choice does not distribute over or on the left: {}", ctx()));
            }
        }
    }
    Ok(())
}

fn distributivity(seed: u64, i: usize) -> CaseResult {
    if i % 2 == 0 {
        distribute::<W>(&mut generator(seed, Mode::Rewards), Mode::Rewards)?;
        return Ok(vec!["W"]);
    }
    let mut g = generator(seed, Mode::Prob);
    match kind_of_case(i / 2) {
        MonadKind::DW => distribute::<DW>(&mut g, Mode::Prob)?,
        MonadKind::T2 => distribute::<T2>(&mut g, Mode::Prob)?,
        _ => distribute::<T3>(&mut g, Mode::Prob)?,
    }
    Ok(vec!["prob"])
}

// ---------------------------------------------------------------- canonical forms

fn canon_sound(seed: u64, i: usize) -> CaseResult {
    if i % 2 == 0 {
        let mut g = generator(seed, Mode::Rewards);
        let ty = g.finite_base_type();
        let m = g.program(&ty).map_err(|e| e.to_string())?;
        let sig = g.signature().clone();
        let cf = canon_rewards(&sig, &m).map_err(|e| e.to_string())?;
        let gammas = g.gamma_batch(&ty, GAMMA_SAMPLES).map_err(|e| e.to_string())?;
        same_at::<W>(&sig, Mode::Rewards, &m, &cf.to_term(), &gammas)?;
        let again = canon_rewards(&sig, &cf.to_term()).map_err(|e| e.to_string())?;
        if again != cf {
            return Err(format!("canonical form of {} is not stable", show(&m)));
        }
        Ok(vec!["rewards"])
    } else {
        let mut g = generator(seed, Mode::Prob);
        let kind = kind_of_case(i / 2);
        let ty = g.finite_base_type();
        let m = g.program(&ty).map_err(|e| e.to_string())?;
        let sig = g.signature().clone();
        let w = weak_canon_prob(kind, &sig, &m).map_err(|e| e.to_string())?;
        let gammas = g.gamma_batch(&ty, GAMMA_SAMPLES).map_err(|e| e.to_string())?;
        same_at_kind(kind, &sig, Mode::Prob, &m, &w.to_term(), &gammas)?;
        Ok(vec![kind.name()])
    }
}

/// A program equal to `m` by construction, or an unrelated one.
fn partner(g: &mut Generator, ty: &Type, m: &Term) -> Result<Term, String> {
    Ok(match g.rng().gen_range(0..5) {
        0 => canon_rewards(g.signature(), m).map_err(|e| e.to_string())?.to_term(),
        1 => eval_effect(m).map_err(|e| e.to_string())?.to_term(),
        2 => {
            let r = g.reward();
            let c = Term::reward(Term::rew(r - int(10)), m.clone());
            apply_axiom(Axiom::R2, &Term::or(m.clone(), c.clone()), &[]).unwrap_or_else(|_| Term::or(m.clone(), c))
        }
        3 => {
            // swap the two entries of a canonical form when there are several
            let cf = canon_rewards(g.signature(), m).map_err(|e| e.to_string())?;
            let mut entries = cf.0.clone();
            if entries.len() >= 2 {
                entries.swap(0, 1);
            }
            CanonicalForm(entries).to_term()
        }
        _ => g.program(ty).map_err(|e| e.to_string())?,
    })
}

fn equiv_roundtrip(seed: u64, _: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Rewards);
    let sig = g.signature().clone();
    let ty = g.finite_base_type();
    let m = g.program(&ty).map_err(|e| e.to_string())?;
    let n = partner(&mut g, &ty, &m)?;
    let equal = decide_equiv_rewards(&sig, &m, &n).map_err(|e| e.to_string())?;
    if equal {
        let gammas = g.gamma_batch(&ty, GAMMA_SAMPLES).map_err(|e| e.to_string())?;
        same_at::<W>(&sig, Mode::Rewards, &m, &n, &gammas)?;
        return Ok(vec!["equal"]);
    }
    let (a, b) = (canon_rewards(&sig, &m).map_err(|e| e.to_string())?, canon_rewards(&sig, &n).map_err(|e| e.to_string())?);
    let ctx = distinguish_rewards(&ty, &a, &b).map_err(|e| e.to_string())?;
    let (cm, cn) = (ctx.plug(&m), ctx.plug(&n));
    crate::syntax::typecheck(&sig, Mode::Rewards, &[], &cm).map_err(|e| format!("context ill-typed: {e}"))?;
    let (om, on) = (select(&cm).map_err(|e| e.to_string())?, select(&cn).map_err(|e| e.to_string())?);
    if om == on {
        return Err(format!("context {ctx} does not separate {} and {}", show(&m), show(&n)));
    }
    Ok(vec!["distinct"])
}

// ---------------------------------------------------------------- purity

fn check_purity<T: AuxMonad + 'static>(
    sig: &Signature,
    mode: Mode,
    m: &Term,
    verdict: &Purity,
    gammas: &[GammaTable],
) -> Result<&'static str, String> {
    let den = denote::<T>(sig, mode, m)?;
    let at_zero = den.run(&gamma_zero());
    match verdict {
        Purity::Pure(c) => {
            let unit = T::unit(sem(c));
            for table in gammas {
                if den.run(&gamma_of_table(table)) != unit {
                    return Err(format!("{} judged pure ({c:?}) but not a unit at {table:?} in {}", show(m), T::NAME));
                }
            }
            Ok("pure")
        }
        Purity::Impure { witness } => {
            let unit_at_zero = T::support(&at_zero).len() == 1 && T::unit(T::support(&at_zero)[0].clone()) == at_zero;
            if unit_at_zero && den.run(&gamma_of_table(witness)) == at_zero {
                return Err(format!("witness {witness:?} does not refute purity of {} in {}", show(m), T::NAME));
            }
            Ok("impure")
        }
    }
}

/// Programs that are pure, or nearly so, more often than random ones.
fn pure_shaped(g: &mut Generator, ty: &Type, prob: bool) -> Result<Term, String> {
    let cs = g.carrier(ty).map_err(|e| e.to_string())?;
    let c = Term::Const(cs.choose(g.rng()).expect("nonempty").clone());
    let d = Term::Const(cs.choose(g.rng()).expect("nonempty").clone());
    let r = g.reward();
    let neg = -r.clone().abs();
    let rw = |x: Reward, t: &Term| Term::reward(Term::rew(x), t.clone());
    Ok(match g.rng().gen_range(0..if prob { 6 } else { 4 }) {
        0 => c,
        1 => Term::or(rw(Reward::zero(), &c), rw(neg, &c)),
        2 => Term::or(rw(neg, &d), c),
        3 => Term::ite(g.program(&Type::Bool).map_err(|e| e.to_string())?, c.clone(), c),
        4 => Term::pchoice(g.prob(), rw(r.clone(), &c), rw(-r, &c)),
        _ => Term::or(c.clone(), Term::pchoice(g.prob(), c, rw(neg, &d))),
    })
}

fn purity_rewards(seed: u64, i: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Rewards);
    let sig = g.signature().clone();
    let ty = g.finite_base_type();
    let m = if i % 2 == 0 { pure_shaped(&mut g, &ty, false)? } else { g.program(&ty).map_err(|e| e.to_string())? };
    let verdict = decide_pure_rewards(&sig, &m).map_err(|e| e.to_string())?;
    let gammas = g.gamma_batch(&ty, GAMMA_SAMPLES).map_err(|e| e.to_string())?;
    Ok(vec![check_purity::<W>(&sig, Mode::Rewards, &m, &verdict, &gammas)?])
}

/// The canonical impure program whose branches are each pure at zero.
pub const PURITY_COUNTEREXAMPLE: &str = "ff or ((-1) . (tt +[1/2] ff))";

fn purity_prob(seed: u64, i: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Prob);
    let sig = g.signature().clone();
    let kind = kind_of_case(i);
    let (ty, m) = if i < 3 {
        (Type::Bool, crate::syntax::parse_term(PURITY_COUNTEREXAMPLE, &sig).map_err(|e| e.to_string())?)
    } else {
        let ty = g.finite_base_type();
        let m = if i % 2 == 0 { pure_shaped(&mut g, &ty, true)? } else { g.program(&ty).map_err(|e| e.to_string())? };
        (ty, m)
    };
    let verdict =
        decide_pure_prob(kind, RewardStructure::AddRationals, &sig, &m).map_err(|e| format!("{}: {e}", show(&m)))?;
    if i < 3 && verdict.constant().is_some() {
        return Err(format!("{PURITY_COUNTEREXAMPLE} judged pure in {}", kind.name()));
    }
    let gammas = g.gamma_batch(&ty, GAMMA_SAMPLES).map_err(|e| e.to_string())?;
    let tag = match kind {
        MonadKind::DW => check_purity::<DW>(&sig, Mode::Prob, &m, &verdict, &gammas)?,
        MonadKind::T2 => check_purity::<T2>(&sig, Mode::Prob, &m, &verdict, &gammas)?,
        _ => check_purity::<T3>(&sig, Mode::Prob, &m, &verdict, &gammas)?,
    };
    Ok(vec![tag, kind.name()])
}

// ---------------------------------------------------------------- reward-only observation

/// Rearranges `e` without changing its MR denotation.
fn mr_shuffle(g: &mut Generator, e: &Eff) -> Eff {
    match e {
        Eff::Val(_) => e.clone(),
        Eff::Reward(r, a) => Eff::reward(r.clone(), mr_shuffle(g, a)),
        Eff::Or(a, b) => {
            let (a, b) = (mr_shuffle(g, a), mr_shuffle(g, b));
            if g.chance(1, 2) {
                Eff::or(b, a)
            } else {
                Eff::or(a, b)
            }
        }
        Eff::PChoice(..) => e.clone(),
    }
}

fn reward_obs(t: &Term) -> Result<Reward, String> {
    Ok(expect0(&select(t).map_err(|e| e.to_string())?))
}

fn mr_fullab(seed: u64, i: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Rewards);
    let ty = g.finite_base_type();
    let cs = g.carrier(&ty).map_err(|e| e.to_string())?;
    let e1 = g.effect_value(&cs, 6);
    let mr1 = mr_of_effect(&e1).map_err(|e| e.to_string())?;
    let e2 = if i % 2 == 0 {
        let mut e2 = mr_shuffle(&mut g, &e1);
        let (v, r) = mr1.map.iter().nth(g.rng().gen_range(0..mr1.map.len())).expect("nonempty");
        let drop = int(g.rng().gen_range(0..3));
        e2 = Eff::or(e2, Eff::reward(r - drop, Eff::Val(v.clone())));
        e2
    } else {
        g.effect_value(&cs, 6)
    };
    let mr2 = mr_of_effect(&e2).map_err(|e| e.to_string())?;
    let (t1, t2) = (e1.to_term(), e2.to_term());
    if mr1 == mr2 {
        for _ in 0..16 {
            let targets: BTreeMap<Const, (Reward, Const)> =
                cs.iter().map(|c| (c.clone(), (g.reward(), cs.choose(g.rng()).expect("nonempty").clone()))).collect();
            let k = make_dispatcher(&ty, &cs, |c| {
                let (r, d) = &targets[c];
                Term::reward(Term::rew(r.clone()), Term::Const(d.clone()))
            })
            .map_err(|e| e.to_string())?;
            let extra = Term::reward(Term::rew(g.reward()), Term::Const(cs.choose(g.rng()).expect("nonempty").clone()));
            let plug = |t: &Term| Term::or(Term::app(k.clone(), t.clone()), extra.clone());
            if reward_obs(&plug(&t1))? != reward_obs(&plug(&t2))? {
                return Err(format!("equal MR but reward observations differ: {} vs {}", show(&t1), show(&t2)));
            }
        }
        Ok(vec!["mr-equal"])
    } else {
        let sorted = |m: &crate::monads::MRVal<Term>| CanonicalForm(m.map.iter().map(|(v, r)| (r.clone(), v.clone())).collect());
        let ctx = distinguish_rewards(&ty, &sorted(&mr1), &sorted(&mr2)).map_err(|e| e.to_string())?;
        if reward_obs(&ctx.plug(&t1))? == reward_obs(&ctx.plug(&t2))? {
            return Err(format!("MR differs but {ctx} does not separate rewards of {} and {}", show(&t1), show(&t2)));
        }
        Ok(vec!["mr-distinct"])
    }
}

// ---------------------------------------------------------------- argmax

fn argmax_lemmas(seed: u64, _: usize) -> CaseResult {
    let mut g = generator(seed, Mode::Rewards);
    // split: argmax S = argmax S1 max argmax S2 for S1 < S2
    let n = g.rng().gen_range(2..=8);
    let scores: Vec<Reward> = (0..n).map(|_| g.reward()).collect();
    let k = g.rng().gen_range(1..n);
    let all = argmax(&scores, |r| r.clone()).map_err(|e| e.to_string())?;
    let a = argmax(&scores[..k], |r| r.clone()).map_err(|e| e.to_string())?;
    let b = k + argmax(&scores[k..], |r| r.clone()).map_err(|e| e.to_string())?;
    let mut score = |i: &usize| scores[*i].clone();
    if *max_by(&mut score, &a, &b) != all {
        return Err(format!("split identity fails on {scores:?} at {k}"));
    }
    // image: h(u max_{gamma . h} v) = h(u) max_gamma h(v)
    let h: Vec<usize> = (0..4).map(|_| g.rng().gen_range(0..3)).collect();
    let gam: Vec<Reward> = (0..3).map(|_| g.reward()).collect();
    let (u, v) = (g.rng().gen_range(0..4usize), g.rng().gen_range(0..4usize));
    let mut composed = |x: &usize| gam[h[*x]].clone();
    let left = h[*max_by(&mut composed, &u, &v)];
    let mut direct = |y: &usize| gam[*y].clone();
    if left != *max_by(&mut direct, &h[u], &h[v]) {
        return Err(format!("image identity fails for h={h:?}, gamma={gam:?}"));
    }
    // lexicographic product: optimize the inner choice first
    let (p, q) = (g.rng().gen_range(1..=4usize), g.rng().gen_range(1..=4usize));
    let table: Vec<Vec<Reward>> = (0..p).map(|_| (0..q).map(|_| g.reward()).collect()).collect();
    let best_inner = |x: usize| argmax(&table[x], |r| r.clone()).expect("nonempty");
    let outer: Vec<usize> = (0..p).collect();
    let u0 = argmax(&outer, |x| table[*x][best_inner(*x)].clone()).map_err(|e| e.to_string())?;
    let v0 = best_inner(u0);
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|x| (0..q).map(move |y| (x, y))).collect();
    let direct = pairs[argmax(&pairs, |(x, y)| table[*x][*y].clone()).map_err(|e| e.to_string())?];
    if (u0, v0) != direct {
        return Err(format!("lexicographic identity fails on {table:?}"));
    }
    Ok(vec![])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        let names: Vec<&str> = suites().iter().map(|s| s.name).collect();
        for n in [
            "adequacy-rewards",
            "adequacy-prob-T1",
            "adequacy-prob-T2",
            "adequacy-prob-T3",
            "local-vs-brute",
            "monad-laws",
            "theta-morphism",
            "axioms-fig3",
            "axioms-fig4",
            "genax-or",
            "distributivity",
            "canon-sound",
            "equiv-roundtrip",
            "purity-rewards",
            "purity-prob",
            "k-gamma-injective",
            "char-bool",
            "mr-fullab",
            "argmax-lemmas",
        ] {
            assert!(names.contains(&n), "{n}");
        }
        assert!(find_suite("nope").is_none());
    }

    #[test]
    fn zero_cases_is_a_vacuous_pass() {
        let r = run_suite(find_suite("monad-laws").unwrap(), 1, 0);
        assert!(r.ok());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn reports_replay() {
        let s = find_suite("local-vs-brute").unwrap();
        let (a, b) = (run_suite(s, 42, 20), run_suite(s, 42, 20));
        assert_eq!((a.passed, a.tags.clone()), (b.passed, b.tags.clone()));
        assert!(a.ok(), "{a}");
    }

    #[test]
    fn gathering_is_refuted_where_it_does_not_hold() {
        // the same instance generator and comparison must reject gather-t3 in T1 and T2
        let sig = demo_signature();
        let mut refuted = BTreeMap::new();
        for seed in 0..40 {
            let mut g = generator(seed, Mode::Prob);
            let (l, r) = g.axiom_instance(Axiom::GatherT3, &Type::Bool).unwrap();
            let gammas = g.gamma_batch(&Type::Bool, GAMMA_SAMPLES).unwrap();
            for kind in [MonadKind::DW, MonadKind::T2] {
                if same_at_kind(kind, &sig, Mode::Prob, &l, &r, &gammas).is_err() {
                    *refuted.entry(kind.name()).or_insert(0) += 1;
                }
            }
        }
        assert!(refuted.get("T1").copied().unwrap_or(0) > 20, "{refuted:?}");
        assert!(refuted.get("T2").copied().unwrap_or(0) > 0, "{refuted:?}");
    }

    #[test]
    fn misweighted_associativity_is_refuted() {
        // inner weight r - pq with r := p instead of q
        let sig = Signature::default();
        let (p, q) = (crate::reward::rat(1, 2), crate::reward::rat(1, 3));
        let (m, n, o) = (Term::reward(Term::rew(int(1)), Term::tt()), Term::ff(), Term::tt());
        let lhs = Term::pchoice(q.clone(), Term::pchoice(p.clone(), m.clone(), n.clone()), o.clone());
        let pq = &p * &q;
        let wrong = (&p - &pq) / (Prob::one() - &pq);
        let rhs = Term::pchoice(pq, m, Term::pchoice(wrong, n, o));
        let gammas = vec![BTreeMap::new()];
        assert!(same_at::<DW>(&sig, Mode::Prob, &lhs, &rhs, &gammas).is_err());
    }

    #[test]
    fn non_commutativity_witness() {
        assert!(or_noncommutative_witness().unwrap());
    }
}
