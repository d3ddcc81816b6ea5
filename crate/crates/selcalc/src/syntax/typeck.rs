use thiserror::Error;

use super::{pretty_type, Const, FnSym, Mode, Name, OpSym, Signature, Term, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error at {}: {msg}", if path.is_empty() { "root".to_string() } else { path.join("/") })]
pub struct TypeError {
    /// Child steps from the root to the offending subterm.
    pub path: Vec<String>,
    pub msg: String,
}

/// The unique type of `t` under `env` (innermost binding last).
pub fn typecheck(sig: &Signature, mode: Mode, env: &[(Name, Type)], t: &Term) -> Result<Type, TypeError> {
    let mut env = env.to_vec();
    let mut path = Vec::new();
    check(sig, mode, &mut env, &mut path, t)
}

fn fail<T>(path: &[String], msg: String) -> Result<T, TypeError> {
    Err(TypeError { path: path.to_vec(), msg })
}

fn sub(
    sig: &Signature,
    mode: Mode,
    env: &mut Vec<(Name, Type)>,
    path: &mut Vec<String>,
    step: &str,
    t: &Term,
) -> Result<Type, TypeError> {
    path.push(step.to_string());
    let r = check(sig, mode, env, path, t)?;
    path.pop();
    Ok(r)
}

fn expect(path: &[String], what: &str, got: &Type, want: &Type) -> Result<(), TypeError> {
    if got == want {
        Ok(())
    } else {
        fail(path, format!("{what}: expected {}, found {}", pretty_type(want), pretty_type(got)))
    }
}

fn check(
    sig: &Signature,
    mode: Mode,
    env: &mut Vec<(Name, Type)>,
    path: &mut Vec<String>,
    t: &Term,
) -> Result<Type, TypeError> {
    match t {
        Term::Var(x) => match env.iter().rev().find(|(y, _)| y == x) {
            Some((_, ty)) => Ok(ty.clone()),
            None => fail(path, format!("unbound variable `{x}`")),
        },
        Term::Const(c) => {
            if let Const::Sym { base, .. } = c {
                if !sig.has_base(base) {
                    return fail(path, format!("undeclared base type `{base}`"));
                }
            }
            Ok(c.ty())
        }
        Term::Star => Ok(Type::Unit),
        Term::Fn(f, xs) => {
            if xs.len() != 2 {
                return fail(path, format!("function symbol expects 2 arguments, got {}", xs.len()));
            }
            let a = sub(sig, mode, env, path, "arg0", &xs[0])?;
            let b = sub(sig, mode, env, path, "arg1", &xs[1])?;
            match f {
                FnSym::Plus | FnSym::Oplus(_) | FnSym::Leq => {
                    expect(path, "left operand", &a, &Type::Rew)?;
                    expect(path, "right operand", &b, &Type::Rew)?;
                    Ok(if *f == FnSym::Leq { Type::Bool } else { Type::Rew })
                }
                FnSym::Eq => {
                    if !a.is_base() {
                        return fail(path, format!("`==` needs a base type, found {}", pretty_type(&a)));
                    }
                    expect(path, "right operand of `==`", &b, &a)?;
                    Ok(Type::Bool)
                }
            }
        }
        Term::If(c, a, b) => {
            let tc = sub(sig, mode, env, path, "cond", c)?;
            expect(path, "condition", &tc, &Type::Bool)?;
            let ta = sub(sig, mode, env, path, "then", a)?;
            let tb = sub(sig, mode, env, path, "else", b)?;
            expect(path, "else branch", &tb, &ta)?;
            Ok(ta)
        }
        Term::Op(op, ps, xs) => {
            if ps.len() != op.param_count() || xs.len() != op.arity() {
                return fail(path, "operation applied to the wrong number of arguments".into());
            }
            match op {
                OpSym::Or => {
                    let a = sub(sig, mode, env, path, "or.0", &xs[0])?;
                    let b = sub(sig, mode, env, path, "or.1", &xs[1])?;
                    expect(path, "branches of `or`", &b, &a)?;
                    Ok(a)
                }
                OpSym::Reward => {
                    let r = sub(sig, mode, env, path, "reward.param", &ps[0])?;
                    expect(path, "reward parameter", &r, &Type::Rew)?;
                    sub(sig, mode, env, path, "reward.body", &xs[0])
                }
                OpSym::PChoice(_) => {
                    if mode != Mode::Prob {
                        return fail(path, "probabilistic choice is not available in rewards mode".into());
                    }
                    let a = sub(sig, mode, env, path, "pchoice.0", &xs[0])?;
                    let b = sub(sig, mode, env, path, "pchoice.1", &xs[1])?;
                    expect(path, "branches of probabilistic choice", &b, &a)?;
                    Ok(a)
                }
            }
        }
        Term::Pair(a, b) => {
            let ta = sub(sig, mode, env, path, "fst", a)?;
            let tb = sub(sig, mode, env, path, "snd", b)?;
            Ok(Type::prod(ta, tb))
        }
        Term::Fst(a) | Term::Snd(a) => {
            let ta = sub(sig, mode, env, path, "proj", a)?;
            match ta {
                Type::Prod(l, r) => Ok(if matches!(t, Term::Fst(_)) { *l } else { *r }),
                other => fail(path, format!("projection from non-product {}", pretty_type(&other))),
            }
        }
        Term::Lam(x, ty, body) => {
            check_type_wf(sig, path, ty)?;
            env.push((x.clone(), ty.clone()));
            let r = sub(sig, mode, env, path, "body", body);
            env.pop();
            Ok(Type::arrow(ty.clone(), r?))
        }
        Term::App(f, a) => {
            let tf = sub(sig, mode, env, path, "fun", f)?;
            let ta = sub(sig, mode, env, path, "arg", a)?;
            match tf {
                Type::Arrow(dom, cod) => {
                    expect(path, "argument", &ta, &dom)?;
                    Ok(*cod)
                }
                other => fail(path, format!("application of non-function {}", pretty_type(&other))),
            }
        }
    }
}

fn check_type_wf(sig: &Signature, path: &[String], ty: &Type) -> Result<(), TypeError> {
    match ty {
        Type::Base(n) if !sig.has_base(n) => fail(path, format!("undeclared base type `{n}`")),
        Type::Prod(a, b) | Type::Arrow(a, b) => {
            check_type_wf(sig, path, a)?;
            check_type_wf(sig, path, b)
        }
        _ => Ok(()),
    }
}
