//! Directed equational reasoning at base types.
//!
//! Rewards calculus: canonical forms decide equivalence and purity, and unequal
//! forms yield a separating context. Probabilistic calculus: weak canonical forms,
//! syntactic expectations and the purity procedure. Each axiom is also available as
//! a single rewrite step via [`apply_axiom`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::monads::{AuxMonad, Dist, DWVal, MonadKind, DW};
use crate::operational::{eval_effect, EvalError};
use crate::reward::{Prob, Reward, RewardError, RewardStructure};
use crate::syntax::{
    name, pretty, pretty_type, substitute, typecheck, Const, Eff, FnSym, Mode, Name, OpSym, Signature, Term,
    Type, TypeError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EqError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("expected a base type, found {0}")]
    NotBase(String),
    #[error("programs have different types {0} and {1}")]
    TypeMismatch(String, String),
    #[error("probabilistic choice is outside the rewards calculus")]
    ModeMismatch,
    #[error("monad {0} is not supported here")]
    MonadNotSupported(&'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Reward(#[from] RewardError),
    #[error("canonical forms are equal; nothing to distinguish")]
    Equal,
    #[error("leaf `{0}` is not a constant")]
    NotConstant(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("no subterm at path {0:?}")]
    BadPath(Vec<usize>),
    #[error("axiom {axiom} does not match: {reason}")]
    NoMatch { axiom: Axiom, reason: String },
}

/// Reward continuation on the constants of one base type.
pub type GammaTable = BTreeMap<Const, Reward>;

fn base_type_of(sig: &Signature, m: &Term) -> Result<Type, EqError> {
    let ty = typecheck(sig, Mode::Prob, &[], m)?;
    if !ty.is_base() {
        return Err(EqError::NotBase(pretty_type(&ty)));
    }
    Ok(ty)
}

fn has_pchoice(t: &Term) -> bool {
    matches!(t, Term::Op(OpSym::PChoice(_), ..)) || t.children().into_iter().any(has_pchoice)
}

fn leaf_const(v: &Term) -> Result<Const, EqError> {
    v.as_const().cloned().ok_or_else(|| EqError::NotConstant(pretty(v)))
}

// ---------------------------------------------------------------- rewards calculus

/// `(c1 . V1) or ... or (cn . Vn)` with no value repeated; order matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm(pub Vec<(Reward, Term)>);

impl CanonicalForm {
    pub fn to_term(&self) -> Term {
        self.0
            .iter()
            .map(|(c, v)| Term::reward(Term::rew(c.clone()), v.clone()))
            .reduce(Term::or)
            .expect("nonempty")
    }

    pub fn entries(&self) -> &[(Reward, Term)] {
        &self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(&self.to_term()))
    }
}

/// Reward-tagged leaves of a choice/reward effect value, left to right.
fn flatten_rewards(e: &Eff, acc: &Reward, out: &mut Vec<(Reward, Term)>) -> Result<(), EqError> {
    match e {
        Eff::Val(v) => out.push((acc.clone(), v.clone())),
        Eff::Or(a, b) => {
            flatten_rewards(a, acc, out)?;
            flatten_rewards(b, acc, out)?;
        }
        Eff::Reward(r, a) => flatten_rewards(a, &(acc + r), out)?,
        Eff::PChoice(..) => return Err(EqError::ModeMismatch),
    }
    Ok(())
}

/// Removes repeated values left to right: a later, no better copy is dropped;
/// a later, better copy replaces the earlier one at the end of the list.
fn dedupe_rewards(items: Vec<(Reward, Term)>) -> Vec<(Reward, Term)> {
    let mut out: Vec<(Reward, Term)> = Vec::new();
    for (c, v) in items {
        match out.iter().position(|(_, w)| *w == v) {
            Some(k) if out[k].0 >= c => {}
            Some(k) => {
                out.remove(k);
                out.push((c, v));
            }
            None => out.push((c, v)),
        }
    }
    out
}

/// Canonical form of an effect value in the rewards calculus.
pub fn canon_effect(e: &Eff) -> Result<CanonicalForm, EqError> {
    let mut items = Vec::new();
    flatten_rewards(e, &Reward::zero(), &mut items)?;
    Ok(CanonicalForm(dedupe_rewards(items)))
}

pub fn canon_rewards(sig: &Signature, m: &Term) -> Result<CanonicalForm, EqError> {
    if has_pchoice(m) {
        return Err(EqError::ModeMismatch);
    }
    base_type_of(sig, m)?;
    canon_effect(&eval_effect(m)?)
}

pub fn decide_equiv_rewards(sig: &Signature, m: &Term, n: &Term) -> Result<bool, EqError> {
    let (a, b) = (base_type_of(sig, m)?, base_type_of(sig, n)?);
    if a != b {
        return Err(EqError::TypeMismatch(pretty_type(&a), pretty_type(&b)));
    }
    Ok(canon_rewards(sig, m)? == canon_rewards(sig, n)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Purity {
    Pure(Const),
    /// Together with the zero continuation, `witness` shows the denotation is
    /// not a unit: either it is not a unit at zero or it differs between the two.
    Impure { witness: GammaTable },
}

impl Purity {
    pub fn constant(&self) -> Option<&Const> {
        match self {
            Purity::Pure(c) => Some(c),
            Purity::Impure { .. } => None,
        }
    }
}

/// Pure iff the canonical form is a single zero-reward value.
pub fn decide_pure_rewards(sig: &Signature, m: &Term) -> Result<Purity, EqError> {
    let ty = base_type_of(sig, m)?;
    let cf = canon_rewards(sig, m)?;
    let zero_table = || -> GammaTable {
        let cs = sig.constants_of(&ty).unwrap_or_else(|| {
            cf.entries().iter().filter_map(|(_, v)| v.as_const().cloned()).collect()
        });
        cs.into_iter().map(|c| (c, Reward::zero())).collect()
    };
    match cf.entries() {
        [(c, v)] if c.is_zero() => Ok(Purity::Pure(leaf_const(v)?)),
        [_] => Ok(Purity::Impure { witness: zero_table() }),
        entries => {
            // the entry selected at zero, then lift another value just above it
            let i0 = first_max(entries.iter().map(|(c, _)| c.clone()));
            let i1 = if i0 == 0 { 1 } else { 0 };
            let mut witness = zero_table();
            let bump = &entries[i0].0 - &entries[i1].0 + Reward::one();
            witness.insert(leaf_const(&entries[i1].1)?, bump);
            Ok(Purity::Impure { witness })
        }
    }
}

fn first_max(scores: impl Iterator<Item = Reward>) -> usize {
    let mut best: Option<(usize, Reward)> = None;
    for (i, s) in scores.enumerate() {
        if best.as_ref().map_or(true, |(_, b)| s > *b) {
            best = Some((i, s));
        }
    }
    best.expect("nonempty").0
}

/// A program with one hole, filled by substitution for `hole`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub hole: Name,
    pub hole_ty: Type,
    pub result_ty: Type,
    pub body: Term,
}

impl Context {
    pub fn plug(&self, m: &Term) -> Term {
        substitute(&self.body, &self.hole, m)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = pretty(&self.body);
        write!(f, "{}", shown.replace(&*self.hole, "[-]"))
    }
}

const HOLE: &str = "__hole";

/// A context separating two different canonical forms of base type `ty`.
pub fn distinguish_rewards(ty: &Type, a: &CanonicalForm, b: &CanonicalForm) -> Result<Context, EqError> {
    if a == b {
        return Err(EqError::Equal);
    }
    if !ty.is_base() {
        return Err(EqError::NotBase(pretty_type(ty)));
    }
    let (l, r) = (Reward::zero(), Reward::one());
    let hole = Term::Var(name(HOLE));
    let rw = |c: Reward, v: Term| Term::reward(Term::rew(c), v);
    for (x, y) in [(a, b), (b, a)] {
        // a value of x missing from y, or present in y with a larger reward
        let found = x.entries().iter().enumerate().find(|(_, (ci, di))| {
            match y.entries().iter().find(|(_, dj)| dj == di) {
                None => true,
                Some((cj, _)) => ci < cj,
            }
        });
        if let Some((i0, (ci0, di0))) = found {
            let c = x
                .entries()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != i0)
                .map(|(_, (c, _))| c)
                .chain(y.entries().iter().map(|(c, _)| c))
                .max()
                .cloned()
                .unwrap_or_else(Reward::zero);
            let body = Term::ite(
                Term::eq(hole.clone(), di0.clone()),
                rw(&c + &r, Term::tt()),
                rw(ci0 + &l, Term::tt()),
            );
            return Ok(Context { hole: name(HOLE), hole_ty: ty.clone(), result_ty: Type::Bool, body });
        }
    }
    // same entries in a different order
    let i0 = a
        .entries()
        .iter()
        .zip(b.entries())
        .position(|((_, d), (_, e))| d != e)
        .expect("permutations of unequal lists differ somewhere");
    let (ci0, di0) = &a.entries()[i0];
    let (ci0p, di0p) = &b.entries()[i0];
    let c = a
        .entries()
        .iter()
        .enumerate()
        .chain(b.entries().iter().enumerate())
        .filter(|(i, _)| *i != i0)
        .map(|(_, (c, _))| c)
        .max()
        .cloned()
        .unwrap_or_else(Reward::zero);
    let x = Term::var("x");
    let body = Term::let_in(
        "x",
        ty.clone(),
        hole,
        Term::ite(
            Term::eq(x.clone(), di0.clone()),
            rw(&c + ci0p + &r, Term::tt()),
            Term::ite(Term::eq(x, di0p.clone()), rw(&c + ci0 + &r, Term::ff()), rw(ci0 + ci0p + &l, Term::ff())),
        ),
    );
    Ok(Context { hole: name(HOLE), hole_ty: ty.clone(), result_ty: Type::Bool, body })
}

// ---------------------------------------------------------------- probabilistic calculus

/// A probability/reward combination of constants `sum_j p_j (d_j . c_j)`.
pub type PrValue = DWVal<Const>;

/// `E_s`: the expected reward of the reward layer.
pub fn syntactic_expectation(e: &PrValue) -> Reward {
    e.expect(|(d, _)| d.clone())
}

/// Or-list of PR values with no repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakCanonicalForm(pub Vec<PrValue>);

impl WeakCanonicalForm {
    pub fn branches(&self) -> &[PrValue] {
        &self.0
    }

    pub fn to_term(&self) -> Term {
        self.0.iter().map(pr_value_term).reduce(Term::or).expect("nonempty")
    }
}

impl fmt::Display for WeakCanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(&self.to_term()))
    }
}

/// `(p1 . t1) +_{p1} (...)`, renormalizing the tail. Weights must be positive and sum to one.
pub fn nary_pchoice(items: Vec<(Prob, Term)>) -> Term {
    nary(items, &|p, a, b| Term::pchoice(p, a, b))
}

/// Nested `oplus` with the same weights as [`nary_pchoice`].
pub fn nary_oplus(items: Vec<(Prob, Term)>) -> Term {
    nary(items, &|p, a, b| Term::oplus(p, a, b))
}

fn nary(mut items: Vec<(Prob, Term)>, node: &dyn Fn(Prob, Term, Term) -> Term) -> Term {
    assert!(!items.is_empty(), "empty weighted list");
    if items.len() == 1 {
        return items.pop().unwrap().1;
    }
    let (p, first) = items.remove(0);
    let rest = Prob::one() - &p;
    let tail = items.into_iter().map(|(q, t)| (q / &rest, t)).collect();
    node(p, first, nary(tail, node))
}

pub fn pr_value_term(e: &PrValue) -> Term {
    nary_pchoice(
        e.iter()
            .map(|((d, c), p)| (p.clone(), Term::reward(Term::rew(d.clone()), Term::Const(c.clone()))))
            .collect(),
    )
}

fn push_unique(out: &mut Vec<PrValue>, v: PrValue) {
    if !out.contains(&v) {
        out.push(v);
    }
}

fn weak_branches(e: &Eff) -> Result<Vec<PrValue>, EqError> {
    Ok(match e {
        Eff::Val(v) => vec![DW::unit(leaf_const(v)?)],
        Eff::Or(a, b) => {
            let mut out = Vec::new();
            for v in weak_branches(a)?.into_iter().chain(weak_branches(b)?) {
                push_unique(&mut out, v);
            }
            out
        }
        Eff::Reward(r, a) => weak_branches(a)?.iter().map(|v| DW::reward(r, v)).collect(),
        Eff::PChoice(p, a, b) => {
            let (xs, ys) = (weak_branches(a)?, weak_branches(b)?);
            let mut out = Vec::new();
            for x in &xs {
                for y in &ys {
                    push_unique(&mut out, DW::pchoice(p, x, y).expect("probability checked at parse"));
                }
            }
            out
        }
    })
}

/// The PR normal form used for monad `kind`: identical atoms merged (T1), one
/// conditional reward per constant (T2), or one shared reward (T3).
pub fn normalize_pr(kind: MonadKind, e: &PrValue) -> Result<PrValue, EqError> {
    let mut mass: BTreeMap<Const, Prob> = BTreeMap::new();
    let mut weighted: BTreeMap<Const, Reward> = BTreeMap::new();
    for ((d, c), p) in e.iter() {
        *mass.entry(c.clone()).or_insert_with(Prob::zero) += p;
        *weighted.entry(c.clone()).or_insert_with(Reward::zero) += p * d;
    }
    Ok(match kind {
        MonadKind::DW => e.clone(),
        MonadKind::T2 => Dist::new(mass.into_iter().map(|(c, m)| {
            let d = &weighted[&c] / &m;
            (m, (d, c))
        }))
        .expect("weights of a distribution"),
        MonadKind::T3 => {
            let d = syntactic_expectation(e);
            Dist::new(mass.into_iter().map(|(c, m)| (m, (d.clone(), c)))).expect("weights of a distribution")
        }
        MonadKind::W => return Err(EqError::MonadNotSupported("W")),
    })
}

pub fn weak_canon_effect(kind: MonadKind, e: &Eff) -> Result<WeakCanonicalForm, EqError> {
    let mut out = Vec::new();
    for v in weak_branches(e)? {
        push_unique(&mut out, normalize_pr(kind, &v)?);
    }
    Ok(WeakCanonicalForm(out))
}

pub fn weak_canon_prob(kind: MonadKind, sig: &Signature, m: &Term) -> Result<WeakCanonicalForm, EqError> {
    base_type_of(sig, m)?;
    weak_canon_effect(kind, &eval_effect(m)?)
}

fn pure_constant(e: &PrValue) -> Option<&Const> {
    match e.is_dirac() {
        Some((d, c)) if d.is_zero() => Some(c),
        _ => None,
    }
}

fn expect_at(e: &PrValue, gamma: &GammaTable) -> Reward {
    e.expect(|(d, c)| d + gamma.get(c).cloned().unwrap_or_else(Reward::zero))
}

/// Purity for the probabilistic calculus under `kind`, following the proof of
/// completeness: branches are eliminated one at a time against the branch
/// selected at the zero continuation, using a continuation that makes some other
/// branch strictly better.
pub fn decide_pure_prob(
    kind: MonadKind,
    structure: RewardStructure,
    sig: &Signature,
    m: &Term,
) -> Result<Purity, EqError> {
    if structure == RewardStructure::MulPositiveRationals {
        return Err(RewardError::ConditionUnknown(structure).into());
    }
    let ty = base_type_of(sig, m)?;
    let mut branches = weak_canon_prob(kind, sig, m)?.0;
    // reward-typed programs have no finite carrier; the constants that occur suffice
    let carrier: Vec<Const> = sig.constants_of(&ty).unwrap_or_else(|| {
        let mut cs: Vec<Const> = branches.iter().flat_map(|e| e.support().map(|(_, c)| c.clone())).collect();
        cs.sort();
        cs.dedup();
        cs
    });
    let table = |f: &dyn Fn(&Const) -> Reward| -> GammaTable { carrier.iter().map(|c| (c.clone(), f(c))).collect() };
    let zero = table(&|_| Reward::zero());
    loop {
        let i0 = first_max(branches.iter().map(syntactic_expectation));
        let Some(cbar) = pure_constant(&branches[i0]).cloned() else {
            return Ok(Purity::Impure { witness: zero });
        };
        if branches.len() == 1 {
            return Ok(Purity::Pure(cbar));
        }
        let i1 = if i0 == 0 { 1 } else { 0 };
        let e1 = &branches[i1];
        if e1.support().all(|(_, c)| *c == cbar) {
            branches.remove(i1);
            continue;
        }
        let r0 = e1.support().map(|(d, _)| d.clone()).min().expect("nonempty");
        let p: Prob = e1.iter().filter(|((_, c), _)| *c != cbar).map(|(_, p)| p.clone()).sum();
        let gamma = if p.is_one() {
            let (l, r) = (Reward::zero(), Reward::one());
            table(&|c| if *c == cbar { &r0 + &l } else { r.clone() })
        } else {
            let (l, r) = if r0 < Reward::zero() {
                structure.condition_c_witness(&p, &r0)?
            } else {
                (Reward::zero(), Reward::one())
            };
            table(&|c| if *c == cbar { l.clone() } else { r.clone() })
        };
        let i2 = first_max(branches.iter().map(|e| expect_at(e, &gamma)));
        debug_assert_ne!(i2, i0);
        if pure_constant(&branches[i2]) != Some(&cbar) {
            return Ok(Purity::Impure { witness: gamma });
        }
        branches.remove(i2);
    }
}

// ---------------------------------------------------------------- axioms

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    OrAssoc,
    OrIdem,
    RewardZero,
    RewardAction,
    RewardOr,
    IfReward,
    IfRewardOr,
    R1,
    R2,
    R3,
    PChoiceOne,
    PChoiceComm,
    PChoiceAssoc,
    RewardPChoice,
    PChoiceOr,
    IfExpect,
    IfExpectOr,
    GatherT2,
    GatherT3,
    PR1,
    PR2,
    PR3,
    PR4,
}

impl Axiom {
    pub const ALL: [Axiom; 23] = [
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
        Axiom::PChoiceOne,
        Axiom::PChoiceComm,
        Axiom::PChoiceAssoc,
        Axiom::RewardPChoice,
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

    /// Equations for choices and rewards.
    pub const REWARDS: [Axiom; 7] = [
        Axiom::OrAssoc,
        Axiom::OrIdem,
        Axiom::RewardZero,
        Axiom::RewardAction,
        Axiom::RewardOr,
        Axiom::IfReward,
        Axiom::IfRewardOr,
    ];

    /// Equations for choices, probability and rewards.
    pub const PROBABILISTIC: [Axiom; 12] = [
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
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::OrAssoc => "or-assoc",
            Axiom::OrIdem => "or-idem",
            Axiom::RewardZero => "reward-zero",
            Axiom::RewardAction => "reward-action",
            Axiom::RewardOr => "reward-or",
            Axiom::IfReward => "if-reward",
            Axiom::IfRewardOr => "if-reward-or",
            Axiom::R1 => "R1",
            Axiom::R2 => "R2",
            Axiom::R3 => "R3",
            Axiom::PChoiceOne => "pchoice-one",
            Axiom::PChoiceComm => "pchoice-comm",
            Axiom::PChoiceAssoc => "pchoice-assoc",
            Axiom::RewardPChoice => "reward-pchoice",
            Axiom::PChoiceOr => "pchoice-or",
            Axiom::IfExpect => "if-expect",
            Axiom::IfExpectOr => "if-expect-or",
            Axiom::GatherT2 => "gather-t2",
            Axiom::GatherT3 => "gather-t3",
            Axiom::PR1 => "PR1",
            Axiom::PR2 => "PR2",
            Axiom::PR3 => "PR3",
            Axiom::PR4 => "PR4",
        }
    }

    /// Monads in which the axiom holds, among W, T1, T2, T3.
    pub fn valid_in(self, kind: MonadKind) -> bool {
        match self {
            Axiom::GatherT2 => matches!(kind, MonadKind::T2 | MonadKind::T3),
            Axiom::GatherT3 => kind == MonadKind::T3,
            Axiom::PChoiceOne
            | Axiom::PChoiceComm
            | Axiom::PChoiceAssoc
            | Axiom::RewardPChoice
            | Axiom::PChoiceOr
            | Axiom::IfExpect
            | Axiom::IfExpectOr
            | Axiom::PR1
            | Axiom::PR2
            | Axiom::PR3
            | Axiom::PR4 => kind.is_probabilistic(),
            _ => true,
        }
    }

    /// Rewrites `t` at its root, left side to right side.
    pub fn rewrite(self, t: &Term) -> Result<Term, EqError> {
        let fail = |reason: &str| EqError::NoMatch { axiom: self, reason: reason.to_string() };
        match self {
            Axiom::OrAssoc => {
                let (lm, n) = or_parts(t).ok_or_else(|| fail("not an `or`"))?;
                let (l, m) = or_parts(lm).ok_or_else(|| fail("left branch is not an `or`"))?;
                Ok(Term::or(l.clone(), Term::or(m.clone(), n.clone())))
            }
            Axiom::OrIdem => {
                let (m, n) = or_parts(t).ok_or_else(|| fail("not an `or`"))?;
                if m != n {
                    return Err(fail("branches differ"));
                }
                Ok(m.clone())
            }
            Axiom::RewardZero => {
                let (x, n) = reward_parts(t).ok_or_else(|| fail("not a reward"))?;
                if const_reward(x).map_or(true, |r| !r.is_zero()) {
                    return Err(fail("reward is not the constant 0"));
                }
                Ok(n.clone())
            }
            Axiom::RewardAction => {
                let (x, yn) = reward_parts(t).ok_or_else(|| fail("not a reward"))?;
                let (y, n) = reward_parts(yn).ok_or_else(|| fail("body is not a reward"))?;
                Ok(Term::reward(add_rewards(x, y), n.clone()))
            }
            Axiom::RewardOr => {
                let (x, mn) = reward_parts(t).ok_or_else(|| fail("not a reward"))?;
                let (m, n) = or_parts(mn).ok_or_else(|| fail("body is not an `or`"))?;
                Ok(Term::or(Term::reward(x.clone(), m.clone()), Term::reward(x.clone(), n.clone())))
            }
            Axiom::IfReward => {
                let (y, x, a, b) = if_leq_parts(t).ok_or_else(|| fail("not `if y <= x then .. else ..`"))?;
                let (xa, m) = reward_parts(a).ok_or_else(|| fail("then branch is not a reward"))?;
                let (yb, m2) = reward_parts(b).ok_or_else(|| fail("else branch is not a reward"))?;
                if xa != x || yb != y || m != m2 {
                    return Err(fail("branches do not match the condition"));
                }
                Ok(Term::or(a.clone(), b.clone()))
            }
            Axiom::IfRewardOr => {
                let (z, x, a, b) = if_leq_parts(t).ok_or_else(|| fail("not `if z <= x then .. else ..`"))?;
                let (xm, n) = or_parts(a).ok_or_else(|| fail("then branch is not an `or`"))?;
                let (n2, zm) = or_parts(b).ok_or_else(|| fail("else branch is not an `or`"))?;
                let (xa, m) = reward_parts(xm).ok_or_else(|| fail("expected a reward"))?;
                let (zb, m2) = reward_parts(zm).ok_or_else(|| fail("expected a reward"))?;
                if xa != x || zb != z || m != m2 || n != n2 {
                    return Err(fail("branches do not match the condition"));
                }
                Ok(Term::or(a.clone(), zm.clone()))
            }
            Axiom::R1 => {
                let (a, b) = or_parts(t).ok_or_else(|| fail("not an `or`"))?;
                let (c, m) = const_reward_parts(a).ok_or_else(|| fail("left is not `c . M`"))?;
                let (c2, m2) = const_reward_parts(b).ok_or_else(|| fail("right is not `c . M`"))?;
                if m != m2 {
                    return Err(fail("bodies differ"));
                }
                Ok(Term::reward(Term::rew(c.max(c2).clone()), m.clone()))
            }
            Axiom::R2 | Axiom::R3 => {
                let (cmn, cm2) = or_parts(t).ok_or_else(|| fail("not an `or`"))?;
                let (cm, n) = or_parts(cmn).ok_or_else(|| fail("left branch is not an `or`"))?;
                let (c, m) = const_reward_parts(cm).ok_or_else(|| fail("expected `c . M`"))?;
                let (c2, m2) = const_reward_parts(cm2).ok_or_else(|| fail("expected `c' . M`"))?;
                if m != m2 {
                    return Err(fail("bodies differ"));
                }
                match (self, c >= c2) {
                    (Axiom::R2, true) => Ok(cmn.clone()),
                    (Axiom::R3, false) => Ok(Term::or(n.clone(), cm2.clone())),
                    _ => Err(fail("side condition on the rewards fails")),
                }
            }
            Axiom::PChoiceOne => {
                let (p, m, _) = pchoice_parts(t).ok_or_else(|| fail("not a probabilistic choice"))?;
                if !p.is_one() {
                    return Err(fail("probability is not 1"));
                }
                Ok(m.clone())
            }
            Axiom::PChoiceComm => {
                let (p, m, n) = pchoice_parts(t).ok_or_else(|| fail("not a probabilistic choice"))?;
                Ok(Term::pchoice(Prob::one() - p, n.clone(), m.clone()))
            }
            Axiom::PChoiceAssoc => {
                let (q, mn, pp) = pchoice_parts(t).ok_or_else(|| fail("not a probabilistic choice"))?;
                let (p, m, n) = pchoice_parts(mn).ok_or_else(|| fail("left is not a probabilistic choice"))?;
                if p.is_one() || q.is_one() {
                    return Err(fail("probabilities must be below 1"));
                }
                let pq = p * q;
                let inner = (q - &pq) / (Prob::one() - &pq);
                Ok(Term::pchoice(pq, m.clone(), Term::pchoice(inner, n.clone(), pp.clone())))
            }
            Axiom::RewardPChoice => {
                let (x, mn) = reward_parts(t).ok_or_else(|| fail("not a reward"))?;
                let (p, m, n) = pchoice_parts(mn).ok_or_else(|| fail("body is not a probabilistic choice"))?;
                Ok(Term::pchoice(p.clone(), Term::reward(x.clone(), m.clone()), Term::reward(x.clone(), n.clone())))
            }
            Axiom::PChoiceOr => {
                let (p, l, mn) = pchoice_parts(t).ok_or_else(|| fail("not a probabilistic choice"))?;
                let (m, n) = or_parts(mn).ok_or_else(|| fail("right is not an `or`"))?;
                Ok(Term::or(
                    Term::pchoice(p.clone(), l.clone(), m.clone()),
                    Term::pchoice(p.clone(), l.clone(), n.clone()),
                ))
            }
            Axiom::GatherT2 => {
                let (p, a, b) = pchoice_parts(t).ok_or_else(|| fail("not a probabilistic choice"))?;
                let (x, m) = reward_parts(a).ok_or_else(|| fail("left is not a reward"))?;
                let (y, m2) = reward_parts(b).ok_or_else(|| fail("right is not a reward"))?;
                if m != m2 {
                    return Err(fail("bodies differ"));
                }
                Ok(Term::reward(oplus_rewards(p, x, y), m.clone()))
            }
            Axiom::GatherT3 => {
                let (p, a, b) = pchoice_parts(t).ok_or_else(|| fail("not a probabilistic choice"))?;
                let (x, m) = reward_parts(a).ok_or_else(|| fail("left is not a reward"))?;
                let (y, n) = reward_parts(b).ok_or_else(|| fail("right is not a reward"))?;
                let e = oplus_rewards(p, x, y);
                Ok(Term::pchoice(p.clone(), Term::reward(e.clone(), m.clone()), Term::reward(e, n.clone())))
            }
            Axiom::IfExpect | Axiom::IfExpectOr => {
                let (en, em, a, b) = if_leq_parts(t).ok_or_else(|| fail("not `if e <= e' then .. else ..`"))?;
                let (m, n) = if self == Axiom::IfExpect {
                    (a, b)
                } else {
                    let (m, p) = or_parts(a).ok_or_else(|| fail("then branch is not an `or`"))?;
                    let (p2, n) = or_parts(b).ok_or_else(|| fail("else branch is not an `or`"))?;
                    if p != p2 {
                        return Err(fail("shared branch differs"));
                    }
                    (m, n)
                };
                let (sm, sn) = aligned_expectations(m, n, false).map_err(|r| fail(&r))?;
                if eval_reward(em).as_ref() != Some(&sm) || eval_reward(en).as_ref() != Some(&sn) {
                    return Err(fail("condition is not the comparison of expectations"));
                }
                Ok(if self == Axiom::IfExpect { Term::or(m.clone(), n.clone()) } else { Term::or(a.clone(), n.clone()) })
            }
            Axiom::PR1 | Axiom::PR2 => {
                let (m, n) = or_parts(t).ok_or_else(|| fail("not an `or`"))?;
                let (sm, sn) = aligned_expectations(m, n, true).map_err(|r| fail(&r))?;
                match (self, sm >= sn) {
                    (Axiom::PR1, true) => Ok(m.clone()),
                    (Axiom::PR2, false) => Ok(n.clone()),
                    _ => Err(fail("side condition on the expectations fails")),
                }
            }
            Axiom::PR3 | Axiom::PR4 => {
                let (ml, n) = or_parts(t).ok_or_else(|| fail("not an `or`"))?;
                let (m, l) = or_parts(ml).ok_or_else(|| fail("left branch is not an `or`"))?;
                let (sm, sn) = aligned_expectations(m, n, true).map_err(|r| fail(&r))?;
                match (self, sm >= sn) {
                    (Axiom::PR3, true) => Ok(ml.clone()),
                    (Axiom::PR4, false) => Ok(Term::or(l.clone(), n.clone())),
                    _ => Err(fail("side condition on the expectations fails")),
                }
            }
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = EqError;
    fn from_str(s: &str) -> Result<Self, EqError> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| EqError::UnknownAxiom(s.to_string()))
    }
}

/// Rewrites the subterm of `t` at `path` (child indices) with `axiom`.
pub fn apply_axiom(axiom: Axiom, t: &Term, path: &[usize]) -> Result<Term, EqError> {
    let sub = t.at(path).ok_or_else(|| EqError::BadPath(path.to_vec()))?;
    let new = axiom.rewrite(sub)?;
    let mut out = t.clone();
    *out.at_mut(path).expect("path checked") = new;
    Ok(out)
}

fn or_parts(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::Op(OpSym::Or, _, xs) => Some((&xs[0], &xs[1])),
        _ => None,
    }
}

fn reward_parts(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::Op(OpSym::Reward, ps, xs) => Some((&ps[0], &xs[0])),
        _ => None,
    }
}

fn pchoice_parts(t: &Term) -> Option<(&Prob, &Term, &Term)> {
    match t {
        Term::Op(OpSym::PChoice(p), _, xs) => Some((p, &xs[0], &xs[1])),
        _ => None,
    }
}

fn const_reward(t: &Term) -> Option<&Reward> {
    t.as_const().and_then(Const::as_reward)
}

fn const_reward_parts(t: &Term) -> Option<(&Reward, &Term)> {
    let (x, m) = reward_parts(t)?;
    Some((const_reward(x)?, m))
}

/// `if a <= b then x else y` as `(a, b, x, y)`.
fn if_leq_parts(t: &Term) -> Option<(&Term, &Term, &Term, &Term)> {
    match t {
        Term::If(c, x, y) => match &**c {
            Term::Fn(FnSym::Leq, args) => Some((&args[0], &args[1], x, y)),
            _ => None,
        },
        _ => None,
    }
}

fn add_rewards(x: &Term, y: &Term) -> Term {
    match (const_reward(x), const_reward(y)) {
        (Some(a), Some(b)) => Term::rew(a + b),
        _ => Term::plus(x.clone(), y.clone()),
    }
}

fn oplus_rewards(p: &Prob, x: &Term, y: &Term) -> Term {
    match (const_reward(x), const_reward(y)) {
        (Some(a), Some(b)) => Term::rew(p * a + (Prob::one() - p) * b),
        _ => Term::oplus(p.clone(), x.clone(), y.clone()),
    }
}

/// Value of a closed, effect-free reward expression.
fn eval_reward(t: &Term) -> Option<Reward> {
    match eval_effect(t).ok()? {
        Eff::Val(v) => const_reward(&v).cloned(),
        _ => None,
    }
}

/// Leaves `(weight, reward, body)` of a nest of probabilistic choices over rewarded terms.
fn pr_leaves(t: &Term, w: &Prob, out: &mut Vec<(Prob, Reward, Term)>) -> Result<(), String> {
    if let Some((p, a, b)) = pchoice_parts(t) {
        pr_leaves(a, &(w * p), out)?;
        return pr_leaves(b, &(w * (Prob::one() - p)), out);
    }
    let (d, l) = reward_parts(t).ok_or_else(|| format!("`{}` is not of the form `d . L`", pretty(t)))?;
    let d = eval_reward(d).ok_or_else(|| "reward is not a closed constant expression".to_string())?;
    if !w.is_zero() {
        out.push((w.clone(), d, l.clone()));
    }
    Ok(())
}

/// Expectation PR-forms of `m` and `n` and their syntactic expectations, provided
/// both put the same total weight on each body `L`. With `values`, every `L` must
/// be a constant.
fn aligned_expectations(m: &Term, n: &Term, values: bool) -> Result<(Reward, Reward), String> {
    let weights = |t: &Term| -> Result<(BTreeMap<Term, Prob>, Reward), String> {
        let mut leaves = Vec::new();
        pr_leaves(t, &Prob::one(), &mut leaves)?;
        let mut by_body: BTreeMap<Term, Prob> = BTreeMap::new();
        let mut es = Reward::zero();
        for (w, d, l) in leaves {
            if values && l.as_const().is_none() {
                return Err(format!("`{}` is not a constant", pretty(&l)));
            }
            es += &w * d;
            *by_body.entry(l).or_insert_with(Prob::zero) += w;
        }
        Ok((by_body, es))
    };
    let (wm, sm) = weights(m)?;
    let (wn, sn) = weights(n)?;
    if wm != wn {
        return Err("the two sides are not over the same weighted bodies".into());
    }
    Ok((sm, sn))
}

/// An expectation PR-form `sum_i p_i sum_j q_ij (d_ij . L_i)` and its `E_s` term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrForm {
    pub parts: Vec<(Prob, Term, Vec<(Prob, Reward)>)>,
}

impl PrForm {
    pub fn to_term(&self) -> Term {
        nary_pchoice(
            self.parts
                .iter()
                .map(|(p, l, inner)| {
                    let t = nary_pchoice(
                        inner.iter().map(|(q, d)| (q.clone(), Term::reward(Term::rew(d.clone()), l.clone()))).collect(),
                    );
                    (p.clone(), t)
                })
                .collect(),
        )
    }

    pub fn expectation_term(&self) -> Term {
        nary_oplus(
            self.parts
                .iter()
                .map(|(p, _, inner)| {
                    (p.clone(), nary_oplus(inner.iter().map(|(q, d)| (q.clone(), Term::rew(d.clone()))).collect()))
                })
                .collect(),
        )
    }

    pub fn expectation(&self) -> Reward {
        self.parts
            .iter()
            .map(|(p, _, inner)| p * inner.iter().map(|(q, d)| q * d).sum::<Reward>())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reward::{int, rat};
    use crate::selection::{denote_program, gamma_table, gamma_zero, SemVal};
    use crate::strategies::select;
    use crate::syntax::{parse_program, parse_term};
    use crate::monads::{T2, T3, W};

    fn sig() -> Signature {
        Signature::default()
    }

    fn term(s: &str) -> Term {
        parse_term(s, &sig()).unwrap()
    }

    fn cf(entries: &[(i64, bool)]) -> CanonicalForm {
        CanonicalForm(entries.iter().map(|(c, b)| (int(*c), Term::boolean(*b))).collect())
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canon_rewards(&sig(), &term("(5 . tt) or (6 . ff)")).unwrap(), cf(&[(5, true), (6, false)]));
        assert_eq!(canon_rewards(&sig(), &term("(5 . tt) or (6 . ff) or (4 . tt)")).unwrap(), cf(&[(5, true), (6, false)]));
        assert_eq!(canon_rewards(&sig(), &term("0 . tt or (-1) . tt")).unwrap(), cf(&[(0, true)]));
        assert_eq!(canon_rewards(&sig(), &term("(1 . tt) or ff or (2 . tt)")).unwrap(), cf(&[(0, false), (2, true)]));
        assert_eq!(canon_rewards(&sig(), &term("tt +[1/2] ff")), Err(EqError::ModeMismatch));
        assert!(matches!(canon_rewards(&sig(), &term("<tt, ff>")), Err(EqError::NotBase(_))));
    }

    #[test]
    fn equivalence() {
        let eq = |a: &str, b: &str| decide_equiv_rewards(&sig(), &term(a), &term(b)).unwrap();
        assert!(!eq("(5 . tt) or (6 . ff)", "6 . ff"));
        assert!(eq("(1 . tt) or (2 . tt)", "2 . tt"));
        let m = term("let x: Bool = tt or (1 . ff) in if x then 2 . x else x");
        let op = eval_effect(&m).unwrap().to_term();
        assert!(decide_equiv_rewards(&sig(), &m, &op).unwrap());
    }

    #[test]
    fn purity_rewards() {
        let p = |s: &str| decide_pure_rewards(&sig(), &term(s)).unwrap();
        assert_eq!(p("0 . tt or (-1) . tt"), Purity::Pure(Const::TT));
        assert_eq!(p("tt"), Purity::Pure(Const::TT));
        let Purity::Impure { witness } = p("(5 . tt) or (6 . ff)") else { panic!() };
        // at zero ff wins with 6; the witness lifts tt to 2 so tt wins with 5
        assert_eq!(witness, BTreeMap::from([(Const::FF, int(0)), (Const::TT, int(2))]));
        assert!(matches!(p("3 . tt"), Purity::Impure { .. }));
    }

    fn separates(a: &CanonicalForm, b: &CanonicalForm) -> bool {
        let ctx = distinguish_rewards(&Type::Bool, a, b).unwrap();
        select(&ctx.plug(&a.to_term())).unwrap() != select(&ctx.plug(&b.to_term())).unwrap()
    }

    #[test]
    fn distinguishing_contexts() {
        assert!(separates(&cf(&[(0, true)]), &cf(&[(0, false)])));
        assert!(separates(&cf(&[(1, true)]), &cf(&[(2, true)])));
        let (a, b) = (cf(&[(1, true), (0, false)]), cf(&[(0, false), (1, true)]));
        let ctx = distinguish_rewards(&Type::Bool, &a, &b).unwrap();
        assert!(matches!(ctx.body, Term::App(..)));
        let oa = select(&ctx.plug(&a.to_term())).unwrap();
        let ob = select(&ctx.plug(&b.to_term())).unwrap();
        assert_eq!(oa.is_dirac().unwrap().1, Term::tt());
        assert_eq!(ob.is_dirac().unwrap().1, Term::ff());
        assert_eq!(distinguish_rewards(&Type::Bool, &a, &a), Err(EqError::Equal));
    }

    #[test]
    fn weak_canonical_forms() {
        let e2 = term("(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))");
        let w = weak_canon_prob(MonadKind::DW, &sig(), &e2).unwrap();
        let expected = Dist::new([
            (rat(1, 2), (int(1), Const::TT)),
            (rat(1, 5), (int(2), Const::FF)),
            (rat(3, 10), (int(3), Const::TT)),
        ])
        .unwrap();
        assert_eq!(w.branches(), &[expected.clone()]);
        assert_eq!(syntactic_expectation(&expected), rat(9, 5));
        let w = weak_canon_prob(MonadKind::DW, &sig(), &term("tt +[1/2] (tt or ff)")).unwrap();
        assert_eq!(w.branches().len(), 2);
        assert_eq!(weak_canon_prob(MonadKind::DW, &sig(), &term("tt")).unwrap().branches(), &[DW::unit(Const::TT)]);
        let t3 = weak_canon_prob(MonadKind::T3, &sig(), &e2).unwrap();
        assert_eq!(
            t3.branches()[0],
            Dist::new([(rat(4, 5), (rat(9, 5), Const::TT)), (rat(1, 5), (rat(9, 5), Const::FF))]).unwrap()
        );
        let t2 = weak_canon_prob(MonadKind::T2, &sig(), &e2).unwrap();
        assert_eq!(
            t2.branches()[0],
            Dist::new([(rat(4, 5), (rat(7, 4), Const::TT)), (rat(1, 5), (int(2), Const::FF))]).unwrap()
        );
        let half = Dist::new([(rat(1, 2), (int(1), Const::TT)), (rat(1, 2), (int(3), Const::TT))]).unwrap();
        assert_eq!(syntactic_expectation(&half), int(2));
        assert_eq!(syntactic_expectation(&DW::unit(Const::TT)), int(0));
    }

    #[test]
    fn weak_canonical_form_denotes_the_program() {
        let m = term("(tt or (1 . ff)) +[1/3] ((2 . tt) +[1/2] (ff or tt))");
        let g = gamma_table(BTreeMap::from([(SemVal::Base(Const::TT), int(-2))]));
        for kind in MonadKind::PROBABILISTIC {
            let w = weak_canon_prob(kind, &sig(), &m).unwrap().to_term();
            match kind {
                MonadKind::DW => {
                    let (a, b) = (denote_program::<DW>(&sig(), Mode::Prob, &m).unwrap(), denote_program::<DW>(&sig(), Mode::Prob, &w).unwrap());
                    assert_eq!(a.run(&g), b.run(&g));
                }
                MonadKind::T2 => {
                    let (a, b) = (denote_program::<T2>(&sig(), Mode::Prob, &m).unwrap(), denote_program::<T2>(&sig(), Mode::Prob, &w).unwrap());
                    assert_eq!(a.run(&g), b.run(&g));
                }
                _ => {
                    let (a, b) = (denote_program::<T3>(&sig(), Mode::Prob, &m).unwrap(), denote_program::<T3>(&sig(), Mode::Prob, &w).unwrap());
                    assert_eq!(a.run(&g), b.run(&g));
                }
            }
        }
    }

    #[test]
    fn purity_prob() {
        let p = |s: &str| decide_pure_prob(MonadKind::DW, RewardStructure::AddRationals, &sig(), &term(s)).unwrap();
        assert_eq!(p("tt +[1/2] tt"), Purity::Pure(Const::TT));
        assert_eq!(p("(0 . tt) or (0 . tt +[1/2] 0 . tt)"), Purity::Pure(Const::TT));
        let Purity::Impure { witness } = p("ff or ((-1) . (tt +[1/2] ff))") else { panic!() };
        assert_eq!(witness, BTreeMap::from([(Const::FF, int(0)), (Const::TT, int(4))]));
        let m = term("ff or ((-1) . (tt +[1/2] ff))");
        let den = denote_program::<DW>(&sig(), Mode::Prob, &m).unwrap();
        let g = gamma_table(witness.iter().map(|(c, r)| (SemVal::Base(c.clone()), r.clone())).collect());
        assert_ne!(den.run(&g), DW::unit(SemVal::Base(Const::FF)));
        assert!(matches!(p("(1 . tt) +[1/2] ff"), Purity::Impure { .. }));
        assert!(decide_pure_prob(MonadKind::DW, RewardStructure::MulPositiveRationals, &sig(), &term("tt")).is_err());
        // pure by the shared-reward law only
        let t3 = |s: &str| decide_pure_prob(MonadKind::T3, RewardStructure::AddRationals, &sig(), &term(s)).unwrap();
        assert_eq!(t3("(1 . tt) +[1/2] ((-1) . tt)"), Purity::Pure(Const::TT));
        assert_eq!(p("(1 . tt) +[1/2] ((-1) . tt)").constant(), None);
    }

    #[test]
    fn axiom_examples() {
        let t = term("(tt or ff) or tt");
        assert_eq!(apply_axiom(Axiom::OrAssoc, &t, &[]).unwrap(), term("tt or (ff or tt)"));
        assert_eq!(Axiom::RewardAction.rewrite(&term("2 . (3 . tt)")).unwrap(), term("5 . tt"));
        assert_eq!(Axiom::RewardOr.rewrite(&term("2 . (tt or ff)")).unwrap(), term("(2 . tt) or (2 . ff)"));
        assert!(matches!(Axiom::OrIdem.rewrite(&term("tt or ff")), Err(EqError::NoMatch { .. })));
        let nested = term("if tt then (tt or ff) or tt else ff");
        assert_eq!(apply_axiom(Axiom::OrAssoc, &nested, &[1]).unwrap(), term("if tt then tt or (ff or tt) else ff"));
        assert!(matches!(apply_axiom(Axiom::OrAssoc, &nested, &[7]), Err(EqError::BadPath(_))));
        assert_eq!("r2".parse::<Axiom>().unwrap(), Axiom::R2);
        assert_eq!(
            Axiom::PChoiceAssoc.rewrite(&term("(tt +[1/2] ff) +[1/3] tt")).unwrap(),
            term("tt +[1/6] (ff +[1/5] tt)")
        );
        assert_eq!(Axiom::GatherT2.rewrite(&term("(1 . tt) +[1/2] (3 . tt)")).unwrap(), term("2 . tt"));
    }

    #[test]
    fn pr_forms() {
        let f = PrForm {
            parts: vec![
                (rat(1, 2), term("tt or ff"), vec![(rat(1, 3), int(3)), (rat(2, 3), int(0))]),
                (rat(1, 2), Term::ff(), vec![(int(1), int(2))]),
            ],
        };
        assert_eq!(f.expectation(), rat(3, 2));
        assert_eq!(eval_reward(&f.expectation_term()), Some(rat(3, 2)));
        let g = PrForm { parts: vec![(rat(1, 2), term("tt or ff"), vec![(int(1), int(1))]), (rat(1, 2), Term::ff(), vec![(int(1), int(1))])] };
        let (m, n) = (f.to_term(), g.to_term());
        let lhs = Term::ite(Term::leq(g.expectation_term(), f.expectation_term()), m.clone(), n.clone());
        assert_eq!(Axiom::IfExpect.rewrite(&lhs).unwrap(), Term::or(m.clone(), n.clone()));
        let den = |t: &Term| denote_program::<W>(&sig(), Mode::Prob, t);
        assert!(den(&m).is_err());
        let d = |t: &Term| denote_program::<DW>(&sig(), Mode::Prob, t).unwrap().run(&gamma_zero());
        assert_eq!(d(&lhs), d(&Term::or(m, n)));
    }

    #[test]
    fn user_base_contexts() {
        let p = parse_program("base C = {a, b, c}\n(1 . a) or b or (1 . c)").unwrap();
        let q = parse_program("base C = {a, b, c}\n(1 . c) or b or (1 . a)").unwrap();
        let ty = Type::Base(name("C"));
        let (x, y) = (canon_rewards(&p.sig, &p.term).unwrap(), canon_rewards(&q.sig, &q.term).unwrap());
        let ctx = distinguish_rewards(&ty, &x, &y).unwrap();
        assert_ne!(select(&ctx.plug(&p.term)).unwrap(), select(&ctx.plug(&q.term)).unwrap());
    }
}
