//! The selection monad `S_T(X) = (X -> R) -> T(X)` and the denotational semantics.
//!
//! Denotations are lazy in the reward continuation: [`denote`] builds a
//! [`SelComp`] once and each call at a `gamma` runs it.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use num_traits::Zero;
use thiserror::Error;

use crate::monads::{theta, Atom, AuxMonad, DWVal, MonadError, MonadKind, T2Val, T3Val, WVal, DW, T2, T3, W};
use crate::operational::{apply_fn, EvalError};
use crate::reward::{Prob, Reward};
use crate::strategies::{select, Outcome};
use crate::syntax::{
    free_vars, make_dispatcher, pretty, substitute, typecheck, Const, DispatchError, Mode, Name, OpSym,
    Signature, Term, TypeError,
};

/// Semantic values. Functions are kept as closed lambda terms so that values
/// have decidable equality and compare directly with operational results.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemVal {
    Base(Const),
    Unit,
    Pair(Box<SemVal>, Box<SemVal>),
    Fn(Term),
}

impl SemVal {
    pub fn pair(a: SemVal, b: SemVal) -> SemVal {
        SemVal::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_const(&self) -> Option<&Const> {
        match self {
            SemVal::Base(c) => Some(c),
            _ => None,
        }
    }

    /// The value term denoting `self`.
    pub fn reify(&self) -> Term {
        match self {
            SemVal::Base(c) => Term::Const(c.clone()),
            SemVal::Unit => Term::Star,
            SemVal::Pair(a, b) => Term::pair(a.reify(), b.reify()),
            SemVal::Fn(t) => t.clone(),
        }
    }
}

impl fmt::Display for SemVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(&self.reify()))
    }
}

/// Effect-free meaning of a closed value.
pub fn denote_pure(v: &Term) -> SemVal {
    match v {
        Term::Const(c) => SemVal::Base(c.clone()),
        Term::Star => SemVal::Unit,
        Term::Pair(a, b) => SemVal::pair(denote_pure(a), denote_pure(b)),
        Term::Lam(..) => SemVal::Fn(v.clone()),
        other => panic!("denote_pure of non-value {}", pretty(other)),
    }
}

/// A reward continuation.
pub type Gamma = Rc<dyn Fn(&SemVal) -> Reward>;

pub fn gamma_zero() -> Gamma {
    Rc::new(|_| Reward::zero())
}

/// A finite table; values outside it get reward zero.
pub fn gamma_table(table: BTreeMap<SemVal, Reward>) -> Gamma {
    Rc::new(move |x| table.get(x).cloned().unwrap_or_else(Reward::zero))
}

pub fn gamma_fn(f: impl Fn(&SemVal) -> Reward + 'static) -> Gamma {
    Rc::new(f)
}

/// A selection computation over `T`.
pub struct SelComp<T: AuxMonad>(Rc<dyn Fn(&Gamma) -> T::Val<SemVal>>);

impl<T: AuxMonad> Clone for SelComp<T> {
    fn clone(&self) -> Self {
        SelComp(self.0.clone())
    }
}

impl<T: AuxMonad + 'static> SelComp<T> {
    pub fn new(f: impl Fn(&Gamma) -> T::Val<SemVal> + 'static) -> Self {
        SelComp(Rc::new(f))
    }

    pub fn run(&self, gamma: &Gamma) -> T::Val<SemVal> {
        (self.0)(gamma)
    }
}

pub fn sel_unit<T: AuxMonad + 'static>(x: SemVal) -> SelComp<T> {
    SelComp::new(move |_| T::unit(x.clone()))
}

/// `E(F|gamma)`.
pub fn sel_expect<T: AuxMonad + 'static>(f: &SelComp<T>, gamma: &Gamma) -> Reward {
    let g = gamma.clone();
    T::expect(&f.run(gamma), &mut |x| g(x))
}

/// Kleisli extension: `F` is queried at `x -> E(f x | gamma)`, and the branch
/// results at `gamma` are combined with the bind of `T`.
pub fn sel_bind<T: AuxMonad + 'static>(
    m: &SelComp<T>,
    f: impl Fn(&SemVal) -> SelComp<T> + 'static,
) -> SelComp<T> {
    let m = m.clone();
    let f = Rc::new(f);
    SelComp::new(move |gamma| {
        let memo: Rc<RefCell<BTreeMap<SemVal, T::Val<SemVal>>>> = Rc::new(RefCell::new(BTreeMap::new()));
        let branch = {
            let (f, memo, gamma) = (f.clone(), memo.clone(), gamma.clone());
            move |x: &SemVal| -> T::Val<SemVal> {
                if let Some(u) = memo.borrow().get(x) {
                    return u.clone();
                }
                let u = f(x).run(&gamma);
                memo.borrow_mut().insert(x.clone(), u.clone());
                u
            }
        };
        let branch = Rc::new(branch);
        let derived: Gamma = {
            let (branch, gamma) = (branch.clone(), gamma.clone());
            Rc::new(move |x| {
                let u = branch(x);
                T::expect(&u, &mut |y| gamma(y))
            })
        };
        let u = m.run(&derived);
        T::bind(&u, &mut |x| branch(x))
    })
}

/// Binary choice: the branch with the larger expected reward at `gamma`, left on ties.
pub fn sel_or<T: AuxMonad + 'static>(a: &SelComp<T>, b: &SelComp<T>) -> SelComp<T> {
    let (a, b) = (a.clone(), b.clone());
    SelComp::new(move |gamma| {
        let (u, v) = (a.run(gamma), b.run(gamma));
        let mut g = |x: &SemVal| gamma(x);
        if T::expect(&u, &mut g) >= T::expect(&v, &mut g) {
            u
        } else {
            v
        }
    })
}

pub fn sel_reward<T: AuxMonad + 'static>(r: Reward, a: &SelComp<T>) -> SelComp<T> {
    let a = a.clone();
    SelComp::new(move |gamma| T::reward(&r, &a.run(gamma)))
}

pub fn sel_pchoice<T: AuxMonad + 'static>(p: Prob, a: &SelComp<T>, b: &SelComp<T>) -> Result<SelComp<T>, MonadError> {
    if !T::PROBABILISTIC {
        return Err(MonadError::NotProbabilistic(T::NAME));
    }
    let (a, b) = (a.clone(), b.clone());
    Ok(SelComp::new(move |gamma| {
        T::pchoice(&p, &a.run(gamma), &b.run(gamma)).expect("probabilistic monad")
    }))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("monad {0} cannot interpret probabilistic choice")]
    ModeMismatch(&'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Monad(#[from] MonadError),
    #[error(transparent)]
    Dispatch(#[from] DispatchError),
}

/// Variable bindings, innermost last.
pub type Env = Rc<Vec<(Name, SemVal)>>;

fn lookup(env: &Env, x: &Name) -> SemVal {
    env.iter()
        .rev()
        .find(|(y, _)| y == x)
        .map(|(_, v)| v.clone())
        .unwrap_or_else(|| panic!("unbound variable `{x}` in a typed term"))
}

fn extend(env: &Env, x: &Name, v: SemVal) -> Env {
    let mut e = (**env).clone();
    e.push((x.clone(), v));
    Rc::new(e)
}

/// Closes a lambda over the bindings it uses.
fn close(env: &Env, lam: &Term) -> Term {
    let mut t = lam.clone();
    for x in free_vars(lam) {
        t = substitute(&t, &x, &lookup(env, &x).reify());
    }
    t
}

fn has_pchoice(t: &Term) -> bool {
    matches!(t, Term::Op(OpSym::PChoice(_), ..)) || t.children().into_iter().any(has_pchoice)
}

/// `[[M]]` under `env`. `m` must be well typed and, for non-probabilistic `T`,
/// free of probabilistic choice; see [`denote_program`] for the checked entry point.
pub fn denote<T: AuxMonad + 'static>(env: &Env, m: &Term) -> SelComp<T> {
    match m {
        Term::Var(x) => sel_unit(lookup(env, x)),
        Term::Const(c) => sel_unit(SemVal::Base(c.clone())),
        Term::Star => sel_unit(SemVal::Unit),
        Term::Lam(..) => sel_unit(SemVal::Fn(close(env, m))),
        Term::Fn(sym, xs) => {
            let sym = sym.clone();
            sequence(env, xs, Rc::new(move |vs: &[SemVal]| {
                let cs: Vec<Const> = vs.iter().map(|v| v.as_const().cloned().expect("constant argument")).collect();
                sel_unit(SemVal::Base(apply_fn(&sym, &cs).expect("typed function application")))
            }))
        }
        Term::If(c, a, b) => {
            let (da, db) = (denote::<T>(env, a), denote::<T>(env, b));
            sel_bind(&denote(env, c), move |v| {
                if v == &SemVal::Base(Const::TT) {
                    da.clone()
                } else {
                    db.clone()
                }
            })
        }
        Term::Op(op, ps, xs) => {
            let subs: Vec<SelComp<T>> = xs.iter().map(|x| denote(env, x)).collect();
            let op = op.clone();
            sequence(env, ps, Rc::new(move |vs: &[SemVal]| match &op {
                OpSym::Or => sel_or(&subs[0], &subs[1]),
                OpSym::Reward => {
                    let r = vs[0].as_const().and_then(Const::as_reward).expect("reward parameter").clone();
                    sel_reward(r, &subs[0])
                }
                OpSym::PChoice(p) => sel_pchoice(p.clone(), &subs[0], &subs[1]).expect("checked before denoting"),
            }))
        }
        Term::Pair(a, b) => sequence(
            env,
            &[(**a).clone(), (**b).clone()],
            Rc::new(|vs: &[SemVal]| sel_unit(SemVal::pair(vs[0].clone(), vs[1].clone()))),
        ),
        Term::Fst(a) | Term::Snd(a) => {
            let first = matches!(m, Term::Fst(_));
            sel_bind(&denote(env, a), move |v| match v {
                SemVal::Pair(l, r) => sel_unit(if first { (**l).clone() } else { (**r).clone() }),
                other => panic!("projection from {other}"),
            })
        }
        Term::App(f, a) => sequence(
            env,
            &[(**f).clone(), (**a).clone()],
            Rc::new(|vs: &[SemVal]| apply(&vs[0], &vs[1])),
        ),
    }
}

fn apply<T: AuxMonad + 'static>(f: &SemVal, a: &SemVal) -> SelComp<T> {
    match f {
        SemVal::Fn(Term::Lam(x, _, body)) => denote(&extend(&Rc::new(Vec::new()), x, a.clone()), body),
        other => panic!("application of non-function {other}"),
    }
}

type Finish<T> = Rc<dyn Fn(&[SemVal]) -> SelComp<T>>;

/// Evaluates `xs` left to right and passes their values to `k`.
fn sequence<T: AuxMonad + 'static>(env: &Env, xs: &[Term], k: Finish<T>) -> SelComp<T> {
    let comps: Rc<Vec<SelComp<T>>> = Rc::new(xs.iter().map(|x| denote(env, x)).collect());
    go(comps, 0, Vec::new(), k)
}

fn go<T: AuxMonad + 'static>(comps: Rc<Vec<SelComp<T>>>, i: usize, acc: Vec<SemVal>, k: Finish<T>) -> SelComp<T> {
    if i == comps.len() {
        return k(&acc);
    }
    let next = comps.clone();
    sel_bind(&comps[i], move |v| {
        let mut acc = acc.clone();
        acc.push(v.clone());
        go(next.clone(), i + 1, acc, k.clone())
    })
}

/// Typechecks a closed term and denotes it.
pub fn denote_program<T: AuxMonad + 'static>(sig: &Signature, mode: Mode, m: &Term) -> Result<SelComp<T>, SelError> {
    typecheck(sig, mode, &[], m)?;
    if !T::PROBABILISTIC && has_pchoice(m) {
        return Err(SelError::ModeMismatch(T::NAME));
    }
    Ok(denote(&Rc::new(Vec::new()), m))
}

/// `[[mu]]_T`: each atom `<r, V>` becomes `r . unit([[V]])`.
pub fn denote_outcome<T: AuxMonad>(o: &Outcome) -> Result<T::Val<SemVal>, MonadError> {
    let semantic: DWVal<SemVal> = o.map(|(r, v)| (r.clone(), denote_pure(v)));
    theta::<T, SemVal>(&semantic)
}

/// A value of one of the selection-ready auxiliary monads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonadValue<A: Atom> {
    W(WVal<A>),
    DW(DWVal<A>),
    T2(T2Val<A>),
    T3(T3Val<A>),
}

impl<A: Atom> MonadValue<A> {
    pub fn kind(&self) -> MonadKind {
        match self {
            MonadValue::W(_) => MonadKind::W,
            MonadValue::DW(_) => MonadKind::DW,
            MonadValue::T2(_) => MonadKind::T2,
            MonadValue::T3(_) => MonadKind::T3,
        }
    }
}

/// `theta` of a DW value into the chosen monad.
pub fn theta_kind<A: Atom>(kind: MonadKind, u: &DWVal<A>) -> Result<MonadValue<A>, MonadError> {
    Ok(match kind {
        MonadKind::W => MonadValue::W(theta::<W, A>(u)?),
        MonadKind::DW => MonadValue::DW(theta::<DW, A>(u)?),
        MonadKind::T2 => MonadValue::T2(theta::<T2, A>(u)?),
        MonadKind::T3 => MonadValue::T3(theta::<T3, A>(u)?),
    })
}

/// The observation of a closed program: `theta` of its optimal outcome.
pub fn observe(m: &Term, kind: MonadKind) -> Result<MonadValue<Term>, SelError> {
    let o = select(m)?;
    theta_kind(kind, &o).map_err(|e| match e {
        MonadError::NotProbabilistic(n) => SelError::ModeMismatch(n),
        e => SelError::Monad(e),
    })
}

/// `[[M]](gamma)` for a closed, typed program under the chosen monad.
pub fn denote_at(
    kind: MonadKind,
    sig: &Signature,
    mode: Mode,
    m: &Term,
    gamma: &Gamma,
) -> Result<MonadValue<SemVal>, SelError> {
    Ok(match kind {
        MonadKind::W => MonadValue::W(denote_program::<W>(sig, mode, m)?.run(gamma)),
        MonadKind::DW => MonadValue::DW(denote_program::<DW>(sig, mode, m)?.run(gamma)),
        MonadKind::T2 => MonadValue::T2(denote_program::<T2>(sig, mode, m)?.run(gamma)),
        MonadKind::T3 => MonadValue::T3(denote_program::<T3>(sig, mode, m)?.run(gamma)),
    })
}

/// Whether `[[M]](0)` equals the denotation of the optimal operational outcome.
pub fn adequacy_holds<T: AuxMonad + 'static>(sig: &Signature, mode: Mode, m: &Term) -> Result<bool, SelError> {
    let den = denote_program::<T>(sig, mode, m)?.run(&gamma_zero());
    let op = denote_outcome::<T>(&select(m)?)?;
    Ok(den == op)
}

/// `K_{u,gamma}`: a dispatcher adding `gamma(c)` as reward and returning `c`.
pub fn kappa_program(u: &[Const], gamma: &BTreeMap<Const, Reward>) -> Result<Term, SelError> {
    let ty = u.first().ok_or(DispatchError::Empty)?.ty();
    Ok(make_dispatcher(&ty, u, |c| {
        let r = gamma.get(c).cloned().unwrap_or_else(Reward::zero);
        Term::reward(Term::rew(r), Term::Const(c.clone()))
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monads::{k_gamma, Dist};
    use crate::operational::eval_effect;
    use crate::reward::{int, rat};
    use crate::syntax::{parse_program, parse_term};

    fn sig() -> Signature {
        Signature::default()
    }

    fn term(s: &str) -> Term {
        parse_term(s, &sig()).unwrap()
    }

    fn b(x: bool) -> SemVal {
        SemVal::Base(Const::Bool(x))
    }

    fn den<T: AuxMonad + 'static>(s: &str) -> SelComp<T> {
        denote_program::<T>(&sig(), Mode::Prob, &term(s)).unwrap()
    }

    fn bool_gamma(t: i64, f: i64) -> Gamma {
        gamma_table(BTreeMap::from([(b(true), int(t)), (b(false), int(f))]))
    }

    #[test]
    fn unit_and_expect() {
        let u = sel_unit::<W>(b(true));
        assert_eq!(u.run(&bool_gamma(3, 4)), W::unit(b(true)));
        assert_eq!(sel_expect(&u, &bool_gamma(3, 4)), int(3));
        assert_eq!(den::<W>("tt").run(&gamma_zero()), WVal { reward: int(0), value: b(true) });
    }

    #[test]
    fn or_examples() {
        let g0 = gamma_zero();
        assert_eq!(den::<W>("(5 . tt) or (6 . ff)").run(&g0), WVal { reward: int(6), value: b(false) });
        assert_eq!(den::<W>("(5 . tt) or (5 . ff)").run(&g0), WVal { reward: int(5), value: b(true) });
        assert_eq!(sel_expect(&den::<W>("(5 . tt) or (6 . ff)"), &g0), int(6));
        let f = den::<W>("(1 . tt) or ff");
        let ff = sel_or(&f, &f);
        for g in [gamma_zero(), bool_gamma(-3, 2), bool_gamma(0, 1)] {
            assert_eq!(ff.run(&g), f.run(&g));
        }
        // the continuation decides: ff is preferred once it is worth 2 more
        assert_eq!(f.run(&bool_gamma(0, 2)).value, b(false));
    }

    #[test]
    fn reward_and_pchoice() {
        let g = bool_gamma(1, -1);
        assert_eq!(den::<W>("2 . (3 . tt)").run(&g), WVal { reward: int(5), value: b(true) });
        let f = den::<W>("tt or ff");
        assert_eq!(sel_reward(int(0), &f).run(&g), f.run(&g));
        let half = Dist::new([(rat(1, 2), (int(0), b(true))), (rat(1, 2), (int(0), b(false)))]).unwrap();
        assert_eq!(den::<DW>("tt +[1/2] ff").run(&gamma_zero()), half);
        assert_eq!(sel_expect(&den::<DW>("tt +[1/2] ff"), &bool_gamma(2, 0)), int(1));
        assert!(sel_pchoice(rat(1, 2), &f, &f).is_err());
        assert_eq!(
            denote_program::<W>(&sig(), Mode::Prob, &term("tt +[1/2] ff")).err(),
            Some(SelError::ModeMismatch("W"))
        );
    }

    #[test]
    fn binding_through_continuations() {
        let g0 = gamma_zero();
        let src = "let x: Bool = (5 . tt) or (6 . ff) in if x then 1 . x else x";
        // both branches end with reward 6, so the left one wins
        assert_eq!(den::<W>(src).run(&g0), WVal { reward: int(6), value: b(true) });
        let oracle = crate::strategies::select_bruteforce(&term(src), 1 << 10).unwrap();
        assert_eq!(denote_outcome::<W>(&oracle).unwrap(), den::<W>(src).run(&g0));
        let m = den::<W>("let x: Bool = (5 . tt) or (4 . ff) in if x then 1 . x else x");
        assert_eq!(m.run(&g0), WVal { reward: int(6), value: b(true) });
        assert_eq!(den::<W>("if tt then 1 . tt else ff").run(&g0), WVal { reward: int(1), value: b(true) });
        assert_eq!(den::<W>("(fun (x: Bool) -> x or ff) tt").run(&g0), WVal { reward: int(0), value: b(true) });
    }

    #[test]
    fn monad_laws_at_sample_points() {
        let f = |x: &SemVal| -> SelComp<DW> {
            if x == &b(true) {
                den::<DW>("(1 . tt) or (ff +[1/3] (2 . tt))")
            } else {
                den::<DW>("3 . ff")
            }
        };
        let m = den::<DW>("tt or (ff +[1/2] tt)");
        for g in [gamma_zero(), bool_gamma(-3, 2), bool_gamma(1, 0)] {
            assert_eq!(sel_bind(&sel_unit(b(true)), f).run(&g), f(&b(true)).run(&g));
            assert_eq!(sel_bind(&m, |x| sel_unit(x.clone())).run(&g), m.run(&g));
        }
    }

    #[test]
    fn pure_semantics() {
        assert_eq!(denote_pure(&Term::tt()), b(true));
        assert_eq!(denote_pure(&term("<tt, ff>")), SemVal::pair(b(true), b(false)));
        let id = term("fun (x: Bool) -> x");
        assert_eq!(denote_pure(&id), SemVal::Fn(id.clone()));
        assert_eq!(apply::<W>(&denote_pure(&id), &b(false)).run(&gamma_zero()), W::unit(b(false)));
    }

    #[test]
    fn closures_match_operational_values() {
        let m = term("let y: Bool = tt or ff in fun (x: Bool) -> <y, x>");
        assert!(adequacy_holds::<W>(&sig(), Mode::Rewards, &m).unwrap());
        let m = term("(fun (f: Bool -> Bool) -> f) ((fun (y: Bool) -> fun (x: Bool) -> y == x) ff)");
        assert!(adequacy_holds::<W>(&sig(), Mode::Rewards, &m).unwrap());
    }

    #[test]
    fn running_example() {
        let e2 = "1 . tt +[1/2] (2 . ff +[2/5] 3 . tt)";
        for kind in MonadKind::PROBABILISTIC {
            assert!(match kind {
                MonadKind::DW => adequacy_holds::<DW>(&sig(), Mode::Prob, &term(e2)),
                MonadKind::T2 => adequacy_holds::<T2>(&sig(), Mode::Prob, &term(e2)),
                _ => adequacy_holds::<T3>(&sig(), Mode::Prob, &term(e2)),
            }
            .unwrap());
        }
        let MonadValue::T3(t3) = observe(&term(e2), MonadKind::T3).unwrap() else { panic!() };
        assert_eq!(t3.rew, rat(9, 5));
        assert_eq!(t3.dist, Dist::new([(rat(4, 5), Term::tt()), (rat(1, 5), Term::ff())]).unwrap());
        let MonadValue::T2(t2) = observe(&term(e2), MonadKind::T2).unwrap() else { panic!() };
        assert_eq!(t2.rew, BTreeMap::from([(Term::tt(), rat(7, 4)), (Term::ff(), int(2))]));
        let MonadValue::W(w) = observe(&term("(5 . tt) or (6 . ff)"), MonadKind::W).unwrap() else { panic!() };
        assert_eq!(w, WVal { reward: int(6), value: Term::ff() });
        assert!(observe(&term(e2), MonadKind::W).is_err());
    }

    #[test]
    fn kappa() {
        let table = BTreeMap::from([(Const::TT, int(1)), (Const::FF, int(2))]);
        let k = kappa_program(&[Const::TT, Const::FF], &table).unwrap();
        assert_eq!(k, term("fun (x: Bool) -> if x == tt then 1 . tt else 2 . ff"));
        let e = eval_effect(&term("tt or ff")).unwrap();
        let g = bool_gamma(1, 2);
        let lhs = k_gamma::<W, _>(&mut |x| g(x), &den::<W>("tt or ff").run(&g));
        let rhs = denote_program::<W>(&sig(), Mode::Rewards, &Term::app(k, e.to_term())).unwrap().run(&gamma_zero());
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, WVal { reward: int(2), value: b(false) });
        assert!(kappa_program(&[], &table).is_err());
    }

    #[test]
    fn user_bases() {
        let p = parse_program("base Color = {red, green, blue}\n(1 . red) or (green +[1/2] 2 . blue)").unwrap();
        let green = SemVal::Base(p.sig.lookup_constant("green").unwrap());
        let t3 = denote_program::<T3>(&p.sig, Mode::Prob, &p.term).unwrap().run(&gamma_table(BTreeMap::from([(green, int(3))])));
        assert_eq!(t3.rew, int(1));
        assert!(adequacy_holds::<T2>(&p.sig, Mode::Prob, &p.term).unwrap());
    }
}
