//! Abstract syntax of the choice/reward/probability calculi.
//!
//! One AST serves both calculi; [`Mode`] decides whether probabilistic choice is admitted.

mod parse;
mod pretty;
mod subst;
mod typeck;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::reward::{Prob, Reward};

pub use parse::{parse_program, parse_term, parse_type, ParseError};
pub use pretty::{pretty, pretty_type};
pub use subst::{
    free_vars, fresh_name, make_dispatcher, subst_constants, substitute, DispatchError, SubstError,
};
pub use typeck::{typecheck, TypeError};

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Rewards,
    Prob,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Bool,
    Rew,
    /// A user-declared finite base type.
    Base(Name),
    Unit,
    Prod(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Type::Bool | Type::Rew | Type::Base(_))
    }

    /// Order of a type: base, unit and products of those have rank 0; an arrow
    /// raises the rank of its domain by one.
    pub fn rank(&self) -> usize {
        match self {
            Type::Bool | Type::Rew | Type::Base(_) | Type::Unit => 0,
            Type::Prod(a, b) => a.rank().max(b.rank()),
            Type::Arrow(a, b) => (a.rank() + 1).max(b.rank()),
        }
    }
}

/// Constants. User constants carry their declaration index so that the
/// derived order follows declaration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    Bool(bool),
    Rew(Reward),
    Sym { base: Name, index: u32, name: Name },
}

impl Const {
    pub const TT: Const = Const::Bool(true);
    pub const FF: Const = Const::Bool(false);

    pub fn ty(&self) -> Type {
        match self {
            Const::Bool(_) => Type::Bool,
            Const::Rew(_) => Type::Rew,
            Const::Sym { base, .. } => Type::Base(base.clone()),
        }
    }

    pub fn as_reward(&self) -> Option<&Reward> {
        match self {
            Const::Rew(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Const::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

/// Function symbols on base types.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FnSym {
    /// `+ : Rew, Rew -> Rew`
    Plus,
    /// `<= : Rew, Rew -> Bool`
    Leq,
    /// `== : b, b -> Bool` at any base type.
    Eq,
    /// `oplus[p] : Rew, Rew -> Rew`, convex combination of rewards.
    Oplus(Prob),
}

/// Algebraic operation symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpSym {
    /// Binary choice, no parameters.
    Or,
    /// One `Rew` parameter, one argument.
    Reward,
    /// Probabilistic choice; the probability is part of the symbol.
    PChoice(Prob),
}

impl OpSym {
    pub fn param_count(&self) -> usize {
        match self {
            OpSym::Reward => 1,
            _ => 0,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            OpSym::Reward => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Name),
    Const(Const),
    Fn(FnSym, Vec<Term>),
    If(Box<Term>, Box<Term>, Box<Term>),
    Op(OpSym, Vec<Term>, Vec<Term>),
    Star,
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Lam(Name, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn tt() -> Term {
        Term::Const(Const::TT)
    }

    pub fn ff() -> Term {
        Term::Const(Const::FF)
    }

    pub fn boolean(b: bool) -> Term {
        Term::Const(Const::Bool(b))
    }

    pub fn rew(r: Reward) -> Term {
        Term::Const(Const::Rew(r))
    }

    pub fn var(x: &str) -> Term {
        Term::Var(name(x))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Op(OpSym::Or, vec![], vec![a, b])
    }

    /// `n . m`
    pub fn reward(n: Term, m: Term) -> Term {
        Term::Op(OpSym::Reward, vec![n], vec![m])
    }

    pub fn pchoice(p: Prob, a: Term, b: Term) -> Term {
        Term::Op(OpSym::PChoice(p), vec![], vec![a, b])
    }

    pub fn ite(c: Term, t: Term, e: Term) -> Term {
        Term::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(a: Term) -> Term {
        Term::Fst(Box::new(a))
    }

    pub fn snd(a: Term) -> Term {
        Term::Snd(Box::new(a))
    }

    pub fn lam(x: &str, ty: Type, body: Term) -> Term {
        Term::Lam(name(x), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `let x: ty = m in n`, encoded as an applied abstraction.
    pub fn let_in(x: &str, ty: Type, m: Term, n: Term) -> Term {
        Term::app(Term::lam(x, ty, n), m)
    }

    pub fn eq(a: Term, b: Term) -> Term {
        Term::Fn(FnSym::Eq, vec![a, b])
    }

    pub fn leq(a: Term, b: Term) -> Term {
        Term::Fn(FnSym::Leq, vec![a, b])
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Fn(FnSym::Plus, vec![a, b])
    }

    pub fn oplus(p: Prob, a: Term, b: Term) -> Term {
        Term::Fn(FnSym::Oplus(p), vec![a, b])
    }

    pub fn as_const(&self) -> Option<&Const> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        match self {
            Term::Const(_) | Term::Star | Term::Lam(..) => true,
            Term::Pair(a, b) => a.is_value() && b.is_value(),
            _ => false,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Term::Var(_) | Term::Const(_) | Term::Star => 0,
            Term::Fn(_, xs) => xs.iter().map(Term::size).sum(),
            Term::Op(_, ps, xs) => ps.iter().chain(xs).map(Term::size).sum(),
            Term::If(a, b, c) => a.size() + b.size() + c.size(),
            Term::Pair(a, b) | Term::App(a, b) => a.size() + b.size(),
            Term::Fst(a) | Term::Snd(a) | Term::Lam(_, _, a) => a.size(),
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Const(_) | Term::Star => vec![],
            Term::Fn(_, xs) => xs.iter().collect(),
            Term::Op(_, ps, xs) => ps.iter().chain(xs).collect(),
            Term::If(a, b, c) => vec![a, b, c],
            Term::Pair(a, b) | Term::App(a, b) => vec![a, b],
            Term::Fst(a) | Term::Snd(a) | Term::Lam(_, _, a) => vec![a],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Term::Var(_) | Term::Const(_) | Term::Star => vec![],
            Term::Fn(_, xs) => xs.iter_mut().collect(),
            Term::Op(_, ps, xs) => ps.iter_mut().chain(xs.iter_mut()).collect(),
            Term::If(a, b, c) => vec![a, b, c],
            Term::Pair(a, b) | Term::App(a, b) => vec![a, b],
            Term::Fst(a) | Term::Snd(a) | Term::Lam(_, _, a) => vec![a],
        }
    }

    /// The subterm at a child-index path, if any.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i).and_then(|t| t.at(rest)),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children_mut().into_iter().nth(i).and_then(|t| t.at_mut(rest)),
        }
    }

    /// Every constant occurring in the term, in order of first occurrence.
    pub fn constants(&self) -> Vec<Const> {
        let mut out = Vec::new();
        fn go(t: &Term, out: &mut Vec<Const>) {
            if let Term::Const(c) = t {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
            for ch in t.children() {
                go(ch, out);
            }
        }
        go(self, &mut out);
        out
    }
}

/// Effect values: trees of operations over values, the normal forms of evaluation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Eff {
    Val(Term),
    Or(Box<Eff>, Box<Eff>),
    Reward(Reward, Box<Eff>),
    PChoice(Prob, Box<Eff>, Box<Eff>),
}

impl Eff {
    pub fn or(a: Eff, b: Eff) -> Eff {
        Eff::Or(Box::new(a), Box::new(b))
    }

    pub fn reward(r: Reward, e: Eff) -> Eff {
        Eff::Reward(r, Box::new(e))
    }

    pub fn pchoice(p: Prob, a: Eff, b: Eff) -> Eff {
        Eff::PChoice(p, Box::new(a), Box::new(b))
    }

    pub fn to_term(&self) -> Term {
        match self {
            Eff::Val(v) => v.clone(),
            Eff::Or(a, b) => Term::or(a.to_term(), b.to_term()),
            Eff::Reward(r, e) => Term::reward(Term::rew(r.clone()), e.to_term()),
            Eff::PChoice(p, a, b) => Term::pchoice(p.clone(), a.to_term(), b.to_term()),
        }
    }

    /// Reads a term back as an effect value when it has that shape.
    pub fn from_term(t: &Term) -> Option<Eff> {
        match t {
            Term::Op(OpSym::Or, _, xs) => {
                Some(Eff::or(Eff::from_term(&xs[0])?, Eff::from_term(&xs[1])?))
            }
            Term::Op(OpSym::Reward, ps, xs) => {
                let r = ps[0].as_const()?.as_reward()?.clone();
                Some(Eff::reward(r, Eff::from_term(&xs[0])?))
            }
            Term::Op(OpSym::PChoice(p), _, xs) => Some(Eff::pchoice(
                p.clone(),
                Eff::from_term(&xs[0])?,
                Eff::from_term(&xs[1])?,
            )),
            v if v.is_value() => Some(Eff::Val(v.clone())),
            _ => None,
        }
    }

    /// Number of `or`, reward and probabilistic nodes.
    pub fn op_nodes(&self) -> usize {
        match self {
            Eff::Val(_) => 0,
            Eff::Or(a, b) | Eff::PChoice(_, a, b) => 1 + a.op_nodes() + b.op_nodes(),
            Eff::Reward(_, e) => 1 + e.op_nodes(),
        }
    }

    /// Number of `or` and probabilistic nodes.
    pub fn choice_nodes(&self) -> usize {
        match self {
            Eff::Val(_) => 0,
            Eff::Or(a, b) | Eff::PChoice(_, a, b) => 1 + a.choice_nodes() + b.choice_nodes(),
            Eff::Reward(_, e) => e.choice_nodes(),
        }
    }

    pub fn has_pchoice(&self) -> bool {
        match self {
            Eff::Val(_) => false,
            Eff::PChoice(..) => true,
            Eff::Or(a, b) => a.has_pchoice() || b.has_pchoice(),
            Eff::Reward(_, e) => e.has_pchoice(),
        }
    }

    /// The leaf values, left to right.
    pub fn leaves(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(e: &'a Eff, out: &mut Vec<&'a Term>) {
            match e {
                Eff::Val(v) => out.push(v),
                Eff::Or(a, b) | Eff::PChoice(_, a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Eff::Reward(_, e) => go(e, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Replaces every leaf `v` by `f(v)`; the effect-value form of a functorial map.
    pub fn map_leaves(&self, f: &mut impl FnMut(&Term) -> Term) -> Eff {
        match self {
            Eff::Val(v) => Eff::Val(f(v)),
            Eff::Or(a, b) => Eff::or(a.map_leaves(f), b.map_leaves(f)),
            Eff::Reward(r, e) => Eff::reward(r.clone(), e.map_leaves(f)),
            Eff::PChoice(p, a, b) => Eff::pchoice(p.clone(), a.map_leaves(f), b.map_leaves(f)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseDecl {
    pub name: Name,
    pub constants: Vec<Name>,
}

/// User base types and their constants.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub bases: Vec<BaseDecl>,
}

impl Signature {
    pub fn lookup_constant(&self, ident: &str) -> Option<Const> {
        self.bases.iter().find_map(|b| {
            b.constants.iter().position(|c| &**c == ident).map(|i| Const::Sym {
                base: b.name.clone(),
                index: i as u32,
                name: b.constants[i].clone(),
            })
        })
    }

    pub fn has_base(&self, n: &str) -> bool {
        self.bases.iter().any(|b| &*b.name == n)
    }

    /// The finite set of values of a type, in canonical order; `None` for
    /// `Rew` and function types.
    pub fn carrier(&self, ty: &Type) -> Option<Vec<Term>> {
        match ty {
            Type::Bool => Some(vec![Term::ff(), Term::tt()]),
            Type::Rew | Type::Arrow(..) => None,
            Type::Unit => Some(vec![Term::Star]),
            Type::Base(n) => {
                let b = self.bases.iter().find(|b| b.name == *n)?;
                Some(
                    (0..b.constants.len())
                        .map(|i| {
                            Term::Const(Const::Sym {
                                base: b.name.clone(),
                                index: i as u32,
                                name: b.constants[i].clone(),
                            })
                        })
                        .collect(),
                )
            }
            Type::Prod(a, b) => {
                let xs = self.carrier(a)?;
                let ys = self.carrier(b)?;
                Some(
                    xs.iter()
                        .flat_map(|x| ys.iter().map(move |y| Term::pair(x.clone(), y.clone())))
                        .collect(),
                )
            }
        }
    }

    /// Constants of a base type (finite types only).
    pub fn constants_of(&self, ty: &Type) -> Option<Vec<Const>> {
        if !ty.is_base() {
            return None;
        }
        self.carrier(ty)
            .map(|vs| vs.into_iter().filter_map(|v| v.as_const().cloned()).collect())
    }
}

/// A parsed source file.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub mode: Mode,
    /// Whether the mode came from an explicit `mode` line.
    pub mode_declared: bool,
    pub sig: Signature,
    pub term: Term,
}

/// Finite map from constants to terms, as used by constant substitution.
pub type ConstMap = BTreeMap<Const, Term>;
