use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use super::{name, Const, ConstMap, Eff, Name, Term, Type};

static FRESH: AtomicU64 = AtomicU64::new(0);

/// A variable name not produced before in this process.
pub fn fresh_name(base: &str) -> Name {
    let stem = base.split('_').next().unwrap_or("x");
    let n = FRESH.fetch_add(1, Ordering::Relaxed);
    name(&format!("{stem}_{n}"))
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn go(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match t {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, body) => {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
            _ => {
                for c in t.children() {
                    go(c, bound, out);
                }
            }
        }
    }
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Capture-avoiding `t[s/x]`.
pub fn substitute(t: &Term, x: &str, s: &Term) -> Term {
    let fv = free_vars(s);
    subst(t, x, s, &fv)
}

fn subst(t: &Term, x: &str, s: &Term, fv: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(y) if &**y == x => s.clone(),
        Term::Var(_) | Term::Const(_) | Term::Star => t.clone(),
        Term::Lam(y, ty, body) => {
            if &**y == x {
                t.clone()
            } else if fv.contains(y) {
                let z = fresh_name(y);
                let renamed = subst(body, y, &Term::Var(z.clone()), &BTreeSet::from([z.clone()]));
                Term::Lam(z, ty.clone(), Box::new(subst(&renamed, x, s, fv)))
            } else {
                Term::Lam(y.clone(), ty.clone(), Box::new(subst(body, x, s, fv)))
            }
        }
        _ => {
            let mut out = t.clone();
            for (c, orig) in out.children_mut().into_iter().zip(t.children()) {
                *c = subst(orig, x, s, fv);
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("no replacement given for constant `{0}`")]
    MissingConstant(String),
    #[error("leaf `{0}` is not a constant")]
    NotAConstant(String),
}

/// `E[g]`: replaces each constant leaf `c` of a base-type effect value by `g(c)`
/// and rebuilds the operations above it unchanged.
pub fn subst_constants(e: &Eff, g: &ConstMap) -> Result<Term, SubstError> {
    Ok(match e {
        Eff::Val(v) => {
            let c = v
                .as_const()
                .ok_or_else(|| SubstError::NotAConstant(super::pretty(v)))?;
            g.get(c)
                .cloned()
                .ok_or_else(|| SubstError::MissingConstant(super::pretty(v)))?
        }
        Eff::Or(a, b) => Term::or(subst_constants(a, g)?, subst_constants(b, g)?),
        Eff::Reward(r, a) => Term::reward(Term::rew(r.clone()), subst_constants(a, g)?),
        Eff::PChoice(p, a, b) => {
            Term::pchoice(p.clone(), subst_constants(a, g)?, subst_constants(b, g)?)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DispatchError {
    #[error("dispatcher needs at least one constant")]
    Empty,
}

/// `fun (x: b) -> if x == c1 then g(c1) else ... else g(cn)`, with the last
/// constant as the default branch. The `g(c)` must be closed.
pub fn make_dispatcher(
    b: &Type,
    u: &[Const],
    g: impl Fn(&Const) -> Term,
) -> Result<Term, DispatchError> {
    let (last, init) = u.split_last().ok_or(DispatchError::Empty)?;
    let x = name("x");
    let mut body = g(last);
    for c in init.iter().rev() {
        body = Term::ite(
            Term::eq(Term::Var(x.clone()), Term::Const(c.clone())),
            g(c),
            body,
        );
    }
    Ok(Term::Lam(x, b.clone(), Box::new(body)))
}
