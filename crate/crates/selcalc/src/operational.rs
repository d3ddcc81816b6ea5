//! Ordinary operational semantics: evaluation contexts, small steps, and the
//! effect-value evaluator `Op`.
//!
//! Evaluation is call-by-value, left to right. Operation parameters are
//! evaluated to constants before the operation branches; operation arguments
//! are never evaluated before branching.

use thiserror::Error;

use crate::reward::Rational;
use crate::syntax::{pretty, substitute, Const, Eff, FnSym, OpSym, Term};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable `{0}` in program")]
    Open(String),
    #[error("stuck term `{0}` (program is ill-typed)")]
    Stuck(String),
    #[error("step budget of {0} exhausted")]
    Budget(u64),
}

/// One layer of an evaluation context; the hole sits where the frame says.
#[derive(Debug, Clone, PartialEq)]
pub enum Frame {
    FnArg { sym: FnSym, done: Vec<Term>, rest: Vec<Term> },
    IfCond { then: Term, els: Term },
    OpParam { op: OpSym, done: Vec<Term>, rest: Vec<Term>, args: Vec<Term> },
    PairLeft(Term),
    PairRight(Term),
    Fst,
    Snd,
    AppFun(Term),
    AppArg(Term),
}

/// A term with one hole, stored outermost frame first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalContext {
    pub frames: Vec<Frame>,
}

impl EvalContext {
    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn plug(&self, t: Term) -> Term {
        self.frames.iter().rev().fold(t, |inner, f| match f.clone() {
            Frame::FnArg { sym, mut done, rest } => {
                done.push(inner);
                done.extend(rest);
                Term::Fn(sym, done)
            }
            Frame::IfCond { then, els } => Term::ite(inner, then, els),
            Frame::OpParam { op, mut done, rest, args } => {
                done.push(inner);
                done.extend(rest);
                Term::Op(op, done, args)
            }
            Frame::PairLeft(b) => Term::pair(inner, b),
            Frame::PairRight(a) => Term::pair(a, inner),
            Frame::Fst => Term::fst(inner),
            Frame::Snd => Term::snd(inner),
            Frame::AppFun(a) => Term::app(inner, a),
            Frame::AppArg(f) => Term::app(f, inner),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decomposition {
    Value,
    Redex(EvalContext, Term),
}

/// Splits a closed program into a value, or a unique context and redex.
pub fn decompose(t: &Term) -> Result<Decomposition, EvalError> {
    let mut ctx = EvalContext::default();
    let mut cur = t;
    if cur.is_value() {
        return Ok(Decomposition::Value);
    }
    loop {
        let (frame, next) = match cur {
            Term::Var(x) => return Err(EvalError::Open(x.to_string())),
            Term::Const(_) | Term::Star | Term::Lam(..) => unreachable!("values handled above"),
            Term::Fn(sym, xs) => match xs.iter().position(|x| !x.is_value()) {
                None => break,
                Some(i) => (
                    Frame::FnArg { sym: sym.clone(), done: xs[..i].to_vec(), rest: xs[i + 1..].to_vec() },
                    &xs[i],
                ),
            },
            Term::If(c, a, b) => {
                if c.is_value() {
                    break;
                }
                (Frame::IfCond { then: (**a).clone(), els: (**b).clone() }, &**c)
            }
            Term::Op(op, ps, xs) => match ps.iter().position(|x| !x.is_value()) {
                None => break,
                Some(i) => (
                    Frame::OpParam {
                        op: op.clone(),
                        done: ps[..i].to_vec(),
                        rest: ps[i + 1..].to_vec(),
                        args: xs.clone(),
                    },
                    &ps[i],
                ),
            },
            Term::Pair(a, b) => {
                if !a.is_value() {
                    (Frame::PairLeft((**b).clone()), &**a)
                } else {
                    (Frame::PairRight((**a).clone()), &**b)
                }
            }
            Term::Fst(a) | Term::Snd(a) => {
                if a.is_value() {
                    break;
                }
                (if matches!(cur, Term::Fst(_)) { Frame::Fst } else { Frame::Snd }, &**a)
            }
            Term::App(f, a) => {
                if !f.is_value() {
                    (Frame::AppFun((**a).clone()), &**f)
                } else if !a.is_value() {
                    (Frame::AppArg((**f).clone()), &**a)
                } else {
                    break;
                }
            }
        };
        ctx.frames.push(frame);
        cur = next;
    }
    Ok(Decomposition::Redex(ctx, cur.clone()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepResult {
    AlreadyValue(Term),
    Ordinary(Term),
    /// An algebraic redex: its evaluated parameters and every branch, already
    /// plugged back into the surrounding context.
    Branch { op: OpSym, params: Vec<Const>, branches: Vec<Term> },
}

/// Value of a function symbol on constants.
pub fn apply_fn(sym: &FnSym, args: &[Const]) -> Option<Const> {
    let rew = |i: usize| args.get(i).and_then(Const::as_reward);
    Some(match sym {
        FnSym::Plus => Const::Rew(rew(0)? + rew(1)?),
        FnSym::Leq => Const::Bool(rew(0)? <= rew(1)?),
        FnSym::Eq => {
            let (a, b) = (args.first()?, args.get(1)?);
            Const::Bool(a == b)
        }
        FnSym::Oplus(p) => Const::Rew(p * rew(0)? + (Rational::from_integer(1.into()) - p) * rew(1)?),
    })
}

fn contract(redex: &Term) -> Result<Result<Term, (OpSym, Vec<Const>, Vec<Term>)>, EvalError> {
    let stuck = || EvalError::Stuck(pretty(redex));
    let consts = |xs: &[Term]| xs.iter().map(|x| x.as_const().cloned()).collect::<Option<Vec<_>>>();
    Ok(Ok(match redex {
        Term::Fn(sym, xs) => {
            let cs = consts(xs).ok_or_else(stuck)?;
            Term::Const(apply_fn(sym, &cs).ok_or_else(stuck)?)
        }
        Term::If(c, a, b) => match c.as_const().and_then(Const::as_bool) {
            Some(true) => (**a).clone(),
            Some(false) => (**b).clone(),
            None => return Err(stuck()),
        },
        Term::Op(op, ps, xs) => {
            let cs = consts(ps).ok_or_else(stuck)?;
            return Ok(Err((op.clone(), cs, xs.clone())));
        }
        Term::Fst(p) | Term::Snd(p) => match &**p {
            Term::Pair(a, b) => {
                if matches!(redex, Term::Fst(_)) {
                    (**a).clone()
                } else {
                    (**b).clone()
                }
            }
            _ => return Err(stuck()),
        },
        Term::App(f, a) => match &**f {
            Term::Lam(x, _, body) => substitute(body, x, a),
            _ => return Err(stuck()),
        },
        _ => return Err(stuck()),
    }))
}

/// One small step of a closed program.
pub fn step(t: &Term) -> Result<StepResult, EvalError> {
    match decompose(t)? {
        Decomposition::Value => Ok(StepResult::AlreadyValue(t.clone())),
        Decomposition::Redex(ctx, r) => Ok(match contract(&r)? {
            Ok(n) => StepResult::Ordinary(ctx.plug(n)),
            Err((op, params, args)) => StepResult::Branch {
                op,
                params,
                branches: args.into_iter().map(|m| ctx.plug(m)).collect(),
            },
        }),
    }
}

/// Events reported while evaluating with a trace sink.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    /// Entering branch `index` of an operation at the given nesting depth.
    Branch { depth: usize, op: OpSym, index: usize },
    Step { depth: usize, term: Term },
}

/// `Op(M)`: the effect value of a closed program, by small steps.
pub fn eval_effect(t: &Term) -> Result<Eff, EvalError> {
    eval_effect_with(t, DEFAULT_STEP_BUDGET, &mut |_| {})
}

pub fn eval_effect_with(
    t: &Term,
    budget: u64,
    trace: &mut dyn FnMut(TraceEvent),
) -> Result<Eff, EvalError> {
    let mut used = 0u64;
    run(t.clone(), 0, budget, &mut used, trace)
}

fn run(
    mut cur: Term,
    depth: usize,
    budget: u64,
    used: &mut u64,
    trace: &mut dyn FnMut(TraceEvent),
) -> Result<Eff, EvalError> {
    loop {
        *used += 1;
        if *used > budget {
            return Err(EvalError::Budget(budget));
        }
        match step(&cur)? {
            StepResult::AlreadyValue(v) => return Ok(Eff::Val(v)),
            StepResult::Ordinary(n) => {
                trace(TraceEvent::Step { depth, term: n.clone() });
                cur = n;
            }
            StepResult::Branch { op, params, branches } => {
                let mut sub = Vec::with_capacity(branches.len());
                for (index, b) in branches.into_iter().enumerate() {
                    trace(TraceEvent::Branch { depth, op: op.clone(), index });
                    trace(TraceEvent::Step { depth: depth + 1, term: b.clone() });
                    sub.push(run(b, depth + 1, budget, used, trace)?);
                }
                return Ok(build(op, params, sub));
            }
        }
    }
}

fn build(op: OpSym, params: Vec<Const>, mut sub: Vec<Eff>) -> Eff {
    match op {
        OpSym::Or => {
            let b = sub.pop().unwrap();
            let a = sub.pop().unwrap();
            Eff::or(a, b)
        }
        OpSym::Reward => {
            let r = params[0].as_reward().cloned().expect("typed reward parameter");
            Eff::reward(r, sub.pop().unwrap())
        }
        OpSym::PChoice(p) => {
            let b = sub.pop().unwrap();
            let a = sub.pop().unwrap();
            Eff::pchoice(p, a, b)
        }
    }
}

/// Sequencing on effect values: replaces each leaf `v` by `k(v)`.
pub fn bind_eff(e: Eff, k: &mut impl FnMut(Term) -> Result<Eff, EvalError>) -> Result<Eff, EvalError> {
    Ok(match e {
        Eff::Val(v) => k(v)?,
        Eff::Or(a, b) => Eff::or(bind_eff(*a, k)?, bind_eff(*b, k)?),
        Eff::Reward(r, a) => Eff::reward(r, bind_eff(*a, k)?),
        Eff::PChoice(p, a, b) => Eff::pchoice(p, bind_eff(*a, k)?, bind_eff(*b, k)?),
    })
}

/// `Op(M)` computed compositionally, by pushing evaluation contexts through
/// operations. Agrees with [`eval_effect`]; used as an independent check.
pub fn eval_effect_bigstep(t: &Term) -> Result<Eff, EvalError> {
    let stuck = || EvalError::Stuck(pretty(t));
    if t.is_value() {
        return Ok(Eff::Val(t.clone()));
    }
    match t {
        Term::Var(x) => Err(EvalError::Open(x.to_string())),
        Term::Fn(sym, xs) => seq(xs, Vec::new(), &mut |vs| {
            let cs: Vec<Const> = vs.iter().map(|v| v.as_const().cloned()).collect::<Option<_>>().ok_or_else(stuck)?;
            Ok(Eff::Val(Term::Const(apply_fn(sym, &cs).ok_or_else(stuck)?)))
        }),
        Term::If(c, a, b) => bind_eff(eval_effect_bigstep(c)?, &mut |v| match v.as_const().and_then(Const::as_bool) {
            Some(true) => eval_effect_bigstep(a),
            Some(false) => eval_effect_bigstep(b),
            None => Err(stuck()),
        }),
        Term::Op(op, ps, xs) => seq(ps, Vec::new(), &mut |vs| {
            let params: Vec<Const> = vs.iter().map(|v| v.as_const().cloned()).collect::<Option<_>>().ok_or_else(stuck)?;
            let sub = xs.iter().map(eval_effect_bigstep).collect::<Result<Vec<_>, _>>()?;
            Ok(build(op.clone(), params, sub))
        }),
        Term::Pair(a, b) => bind_eff(eval_effect_bigstep(a)?, &mut |va| {
            bind_eff(eval_effect_bigstep(b)?, &mut |vb| Ok(Eff::Val(Term::pair(va.clone(), vb))))
        }),
        Term::Fst(a) | Term::Snd(a) => {
            let first = matches!(t, Term::Fst(_));
            bind_eff(eval_effect_bigstep(a)?, &mut |v| match v {
                Term::Pair(l, r) => Ok(Eff::Val(if first { *l } else { *r })),
                _ => Err(stuck()),
            })
        }
        Term::App(f, a) => bind_eff(eval_effect_bigstep(f)?, &mut |fv| {
            bind_eff(eval_effect_bigstep(a)?, &mut |av| match &fv {
                Term::Lam(x, _, body) => eval_effect_bigstep(&substitute(body, x, &av)),
                _ => Err(stuck()),
            })
        }),
        Term::Const(_) | Term::Star | Term::Lam(..) => unreachable!(),
    }
}

fn seq(
    xs: &[Term],
    done: Vec<Term>,
    k: &mut dyn FnMut(&[Term]) -> Result<Eff, EvalError>,
) -> Result<Eff, EvalError> {
    match xs.split_first() {
        None => k(&done),
        Some((x, rest)) => bind_eff(eval_effect_bigstep(x)?, &mut |v| {
            let mut d = done.clone();
            d.push(v);
            seq(rest, d, k)
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, Signature};

    fn p(s: &str) -> Term {
        parse_term(s, &Signature::default()).unwrap()
    }

    #[test]
    fn values_do_not_step() {
        assert_eq!(step(&p("tt")).unwrap(), StepResult::AlreadyValue(p("tt")));
    }

    #[test]
    fn or_is_a_redex_without_evaluating_arguments() {
        let t = p("fst <tt, ff> or ff");
        match decompose(&t).unwrap() {
            Decomposition::Redex(ctx, r) => {
                assert!(ctx.is_empty());
                assert_eq!(r, t);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            step(&t).unwrap(),
            StepResult::Branch { op: OpSym::Or, params: vec![], branches: vec![p("fst <tt, ff>"), p("ff")] }
        );
    }

    #[test]
    fn argument_evaluated_before_application() {
        let t = p("(fun (x: Bool) -> x) (fst <tt, ff>)");
        match decompose(&t).unwrap() {
            Decomposition::Redex(ctx, r) => {
                assert_eq!(r, p("fst <tt, ff>"));
                assert_eq!(ctx.plug(Term::Star), p("(fun (x: Bool) -> x) *"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn function_symbol_steps() {
        assert_eq!(step(&p("2 + 3")).unwrap(), StepResult::Ordinary(p("5")));
        assert_eq!(step(&p("tt == ff")).unwrap(), StepResult::Ordinary(p("ff")));
        assert_eq!(step(&p("oplus[1/4](4, 8)")).unwrap(), StepResult::Ordinary(p("7")));
    }

    #[test]
    fn effect_value_examples() {
        assert_eq!(eval_effect(&p("if tt then 5 . tt else ff")).unwrap(), Eff::from_term(&p("5 . tt")).unwrap());
        assert_eq!(eval_effect(&p("(fun (x: Bool) -> x or ff) tt")).unwrap(), Eff::from_term(&p("tt or ff")).unwrap());
        let e = p("(1 . tt) or (2 . (ff or tt))");
        assert_eq!(eval_effect(&e).unwrap().to_term(), e);
    }

    #[test]
    fn reward_parameter_is_evaluated_before_branching() {
        let e = eval_effect(&p("(1 + 2) . ((fun (x: Bool) -> x) tt)")).unwrap();
        assert_eq!(e, Eff::from_term(&p("3 . tt")).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let t = p("(fun (x: Bool) -> x) ((fun (x: Bool) -> x) tt)");
        assert_eq!(eval_effect_with(&t, 2, &mut |_| {}), Err(EvalError::Budget(2)));
    }

    #[test]
    fn open_terms_are_rejected() {
        assert!(matches!(eval_effect(&p("x or tt")), Err(EvalError::Open(_))));
        assert!(matches!(eval_effect(&p("if x then tt else ff")), Err(EvalError::Open(_))));
    }
}
