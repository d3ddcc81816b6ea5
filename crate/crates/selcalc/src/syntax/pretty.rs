use super::{Const, FnSym, OpSym, Term, Type};
use crate::reward::fmt_rational;

const BINDER: u8 = 0;
const OR: u8 = 1;
const PCHOICE: u8 = 2;
const ARITH: u8 = 3;
const REWARD: u8 = 4;
const APP: u8 = 5;
const ATOM: u8 = 6;

/// Concrete syntax for a term, parenthesized just enough to parse back.
pub fn pretty(t: &Term) -> String {
    let mut s = String::new();
    go(t, BINDER, &mut s);
    s
}

pub fn pretty_type(t: &Type) -> String {
    let mut s = String::new();
    ty(t, 0, &mut s);
    s
}

fn ty(t: &Type, ctx: u8, out: &mut String) {
    match t {
        Type::Bool => out.push_str("Bool"),
        Type::Rew => out.push_str("Rew"),
        Type::Unit => out.push_str("Unit"),
        Type::Base(n) => out.push_str(n),
        Type::Prod(a, b) => wrap(ctx > 1, out, |out| {
            ty(a, 1, out);
            out.push_str(" * ");
            ty(b, 2, out);
        }),
        Type::Arrow(a, b) => wrap(ctx > 0, out, |out| {
            ty(a, 1, out);
            out.push_str(" -> ");
            ty(b, 0, out);
        }),
    }
}

fn wrap(paren: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if paren {
        out.push('(');
    }
    body(out);
    if paren {
        out.push(')');
    }
}

fn constant(c: &Const) -> String {
    match c {
        Const::Bool(true) => "tt".into(),
        Const::Bool(false) => "ff".into(),
        Const::Rew(r) => fmt_rational(r),
        Const::Sym { name, .. } => name.to_string(),
    }
}

fn level(t: &Term) -> u8 {
    match t {
        Term::If(..) | Term::Lam(..) => BINDER,
        Term::App(f, _) if matches!(**f, Term::Lam(..)) => BINDER,
        Term::Op(OpSym::Or, ..) => OR,
        Term::Op(OpSym::PChoice(_), ..) => PCHOICE,
        Term::Fn(FnSym::Plus | FnSym::Eq | FnSym::Leq, _) => ARITH,
        Term::Op(OpSym::Reward, ..) => REWARD,
        Term::App(..) => APP,
        _ => ATOM,
    }
}

fn go(t: &Term, ctx: u8, out: &mut String) {
    wrap(level(t) < ctx, out, |out| match t {
        Term::Var(x) => out.push_str(x),
        Term::Const(c) => out.push_str(&constant(c)),
        Term::Star => out.push('*'),
        Term::Pair(a, b) => {
            out.push('<');
            go(a, BINDER, out);
            out.push_str(", ");
            go(b, BINDER, out);
            out.push('>');
        }
        Term::Fst(a) | Term::Snd(a) => {
            out.push_str(if matches!(t, Term::Fst(_)) { "fst " } else { "snd " });
            go(a, ATOM, out);
        }
        Term::If(c, a, b) => {
            out.push_str("if ");
            go(c, BINDER, out);
            out.push_str(" then ");
            go(a, BINDER, out);
            out.push_str(" else ");
            go(b, BINDER, out);
        }
        Term::Lam(x, tyx, body) => {
            out.push_str("fun (");
            out.push_str(x);
            out.push_str(": ");
            ty(tyx, 0, out);
            out.push_str(") -> ");
            go(body, BINDER, out);
        }
        Term::App(f, a) => match &**f {
            Term::Lam(x, tyx, body) => {
                out.push_str("let ");
                out.push_str(x);
                out.push_str(": ");
                ty(tyx, 0, out);
                out.push_str(" = ");
                go(a, BINDER, out);
                out.push_str(" in ");
                go(body, BINDER, out);
            }
            _ => {
                go(f, APP, out);
                out.push(' ');
                go(a, ATOM, out);
            }
        },
        Term::Op(OpSym::Or, _, xs) => {
            go(&xs[0], OR, out);
            out.push_str(" or ");
            go(&xs[1], PCHOICE, out);
        }
        Term::Op(OpSym::PChoice(p), _, xs) => {
            go(&xs[0], ARITH, out);
            out.push_str(" +[");
            out.push_str(&fmt_rational(p));
            out.push_str("] ");
            go(&xs[1], PCHOICE, out);
        }
        Term::Op(OpSym::Reward, ps, xs) => {
            go(&ps[0], APP, out);
            out.push_str(" . ");
            go(&xs[0], REWARD, out);
        }
        Term::Fn(FnSym::Plus, xs) => {
            go(&xs[0], ARITH, out);
            out.push_str(" + ");
            go(&xs[1], REWARD, out);
        }
        Term::Fn(sym @ (FnSym::Eq | FnSym::Leq), xs) => {
            go(&xs[0], REWARD, out);
            out.push_str(if *sym == FnSym::Eq { " == " } else { " <= " });
            go(&xs[1], REWARD, out);
        }
        Term::Fn(FnSym::Oplus(p), xs) => {
            out.push_str("oplus[");
            out.push_str(&fmt_rational(p));
            out.push_str("](");
            go(&xs[0], BINDER, out);
            out.push_str(", ");
            go(&xs[1], BINDER, out);
            out.push(')');
        }
    })
}
