//! Player strategies over effect values and the globally optimizing semantics.
//!
//! [`select_bruteforce`] enumerates every strategy and keeps the least maximizer;
//! [`select_fast`] recurses on the effect value and never looks at strategies.
//! The two agree, and the brute-force path exists to show that.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::monads::{expect0, AuxMonad, Dist, DWVal, DW};
use crate::operational::{eval_effect, EvalError};
use crate::reward::{Prob, Reward};
use crate::syntax::{Eff, Term};

pub const DEFAULT_STRATEGY_CAP: u64 = 1 << 20;

/// Above this many strategies the brute-force scorer runs in parallel.
const PAR_THRESHOLD: usize = 4096;

/// Distribution over final reward and value; a Dirac outcome in rewards mode.
pub type Outcome = DWVal<Term>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Strategy {
    Leaf,
    Left(Box<Strategy>),
    Right(Box<Strategy>),
    Through(Box<Strategy>),
    Pair(Box<Strategy>, Box<Strategy>),
}

impl Strategy {
    pub fn left(s: Strategy) -> Strategy {
        Strategy::Left(Box::new(s))
    }

    pub fn right(s: Strategy) -> Strategy {
        Strategy::Right(Box::new(s))
    }

    pub fn through(s: Strategy) -> Strategy {
        Strategy::Through(Box::new(s))
    }

    pub fn pair(a: Strategy, b: Strategy) -> Strategy {
        Strategy::Pair(Box::new(a), Box::new(b))
    }

    /// Whether `self : e`.
    pub fn fits(&self, e: &Eff) -> bool {
        match (self, e) {
            (Strategy::Leaf, Eff::Val(_)) => true,
            (Strategy::Left(s), Eff::Or(a, _)) => s.fits(a),
            (Strategy::Right(s), Eff::Or(_, b)) => s.fits(b),
            (Strategy::Through(s), Eff::Reward(_, e)) => s.fits(e),
            (Strategy::Pair(s, t), Eff::PChoice(_, a, b)) => s.fits(a) && t.fits(b),
            _ => false,
        }
    }

    /// The strategy order on strategies for the same effect value.
    pub fn cmp_in_order(&self, other: &Strategy) -> Ordering {
        use Strategy::*;
        match (self, other) {
            (Leaf, Leaf) => Ordering::Equal,
            (Left(_), Right(_)) => Ordering::Less,
            (Right(_), Left(_)) => Ordering::Greater,
            (Left(a), Left(b)) | (Right(a), Right(b)) | (Through(a), Through(b)) => a.cmp_in_order(b),
            (Pair(a1, a2), Pair(b1, b2)) => a1.cmp_in_order(b1).then_with(|| a2.cmp_in_order(b2)),
            _ => panic!("strategies of different shapes are not comparable"),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Leaf => write!(f, "*"),
            Strategy::Left(s) => write!(f, "1{s}"),
            Strategy::Right(s) => write!(f, "2{s}"),
            Strategy::Through(s) => write!(f, "{s}"),
            Strategy::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("strategy does not fit the effect value")]
    ShapeMismatch,
    #[error("{count} strategies exceed the cap of {cap}")]
    CapExceeded { count: String, cap: u64 },
    #[error("argmax of an empty sequence")]
    Empty,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `|Str(e)|`, saturating.
pub fn strategy_count(e: &Eff) -> u128 {
    match e {
        Eff::Val(_) => 1,
        Eff::Or(a, b) => strategy_count(a).saturating_add(strategy_count(b)),
        Eff::Reward(_, e) => strategy_count(e),
        Eff::PChoice(_, a, b) => strategy_count(a).saturating_mul(strategy_count(b)),
    }
}

/// All strategies for `e`, ascending. Generated in order, never sorted.
pub fn enumerate_strategies(e: &Eff, cap: u64) -> Result<Vec<Strategy>, StrategyError> {
    let count = strategy_count(e);
    if count > cap as u128 {
        return Err(StrategyError::CapExceeded { count: count.to_string(), cap });
    }
    Ok(enumerate(e))
}

fn enumerate(e: &Eff) -> Vec<Strategy> {
    match e {
        Eff::Val(_) => vec![Strategy::Leaf],
        Eff::Or(a, b) => enumerate(a)
            .into_iter()
            .map(Strategy::left)
            .chain(enumerate(b).into_iter().map(Strategy::right))
            .collect(),
        Eff::Reward(_, e) => enumerate(e).into_iter().map(Strategy::through).collect(),
        Eff::PChoice(_, a, b) => {
            let right = enumerate(b);
            enumerate(a)
                .into_iter()
                .flat_map(|s| right.iter().map(move |t| Strategy::pair(s.clone(), t.clone())))
                .collect()
        }
    }
}

pub fn outcome(s: &Strategy, e: &Eff) -> Result<Outcome, StrategyError> {
    Ok(match (s, e) {
        (Strategy::Leaf, Eff::Val(v)) => DW::unit(v.clone()),
        (Strategy::Left(s), Eff::Or(a, _)) => outcome(s, a)?,
        (Strategy::Right(s), Eff::Or(_, b)) => outcome(s, b)?,
        (Strategy::Through(s), Eff::Reward(r, e)) => DW::reward(r, &outcome(s, e)?),
        (Strategy::Pair(s, t), Eff::PChoice(p, a, b)) => {
            DW::pchoice(p, &outcome(s, a)?, &outcome(t, b)?).expect("probability checked at parse")
        }
        _ => return Err(StrategyError::ShapeMismatch),
    })
}

/// The (expected) reward a strategy earns.
pub fn strategy_reward(s: &Strategy, e: &Eff) -> Result<Reward, StrategyError> {
    Ok(expect0(&outcome(s, e)?))
}

/// Index of the least element maximizing `score`.
pub fn argmax<T>(items: &[T], mut score: impl FnMut(&T) -> Reward) -> Result<usize, StrategyError> {
    let mut best: Option<(usize, Reward)> = None;
    for (i, x) in items.iter().enumerate() {
        let r = score(x);
        if best.as_ref().map_or(true, |(_, b)| r > *b) {
            best = Some((i, r));
        }
    }
    best.map(|(i, _)| i).ok_or(StrategyError::Empty)
}

/// `u max_gamma v`: `u` unless `v` scores strictly higher.
pub fn max_by<'a, T>(gamma: &mut impl FnMut(&T) -> Reward, u: &'a T, v: &'a T) -> &'a T {
    if gamma(u) >= gamma(v) {
        u
    } else {
        v
    }
}

/// Outcome of the least reward-maximizing strategy for `e`.
pub fn select_effect_bruteforce(e: &Eff, cap: u64) -> Result<Outcome, StrategyError> {
    let strategies = enumerate_strategies(e, cap)?;
    let scores: Vec<Reward> = if strategies.len() > PAR_THRESHOLD {
        strategies.par_iter().map(|s| strategy_reward(s, e)).collect::<Result<_, _>>()?
    } else {
        strategies.iter().map(|s| strategy_reward(s, e)).collect::<Result<_, _>>()?
    };
    let best = argmax(&scores, |r| r.clone())?;
    outcome(&strategies[best], e)
}

/// Evaluates `m` and selects by exhaustive search over strategies.
pub fn select_bruteforce(m: &Term, cap: u64) -> Result<Outcome, StrategyError> {
    select_effect_bruteforce(&eval_effect(m)?, cap)
}

/// Local characterization of the optimal outcome.
pub fn select_fast(e: &Eff) -> Outcome {
    match e {
        Eff::Val(v) => DW::unit(v.clone()),
        Eff::Or(a, b) => {
            let (l, r) = (select_fast(a), select_fast(b));
            if expect0(&l) >= expect0(&r) {
                l
            } else {
                r
            }
        }
        Eff::Reward(r, e) => DW::reward(r, &select_fast(e)),
        Eff::PChoice(p, a, b) => {
            DW::pchoice(p, &select_fast(a), &select_fast(b)).expect("probability checked at parse")
        }
    }
}

/// Evaluates `m` and selects with [`select_fast`].
pub fn select(m: &Term) -> Result<Outcome, EvalError> {
    Ok(select_fast(&eval_effect(m)?))
}

/// Reads a Dirac outcome as a reward/value pair.
pub fn as_writer(o: &Outcome) -> Option<(Reward, Term)> {
    o.is_dirac().cloned()
}

/// An outcome from explicit `(prob, reward, value)` atoms.
pub fn outcome_from(atoms: impl IntoIterator<Item = (Prob, Reward, Term)>) -> Option<Outcome> {
    Dist::new(atoms.into_iter().map(|(p, r, v)| (p, (r, v)))).ok()
}

/// `(prob, reward, value)` atoms, ascending by reward then value.
pub fn outcome_atoms(o: &Outcome) -> Vec<(Prob, Reward, Term)> {
    o.iter().map(|((r, v), p)| (p.clone(), r.clone(), v.clone())).collect()
}

/// Whether `o` is a single value obtained with zero reward.
pub fn is_pure_outcome(o: &Outcome) -> bool {
    matches!(o.is_dirac(), Some((r, _)) if r.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reward::{int, rat};
    use crate::syntax::{parse_term, Signature};

    fn term(s: &str) -> Term {
        parse_term(s, &Signature::default()).unwrap()
    }

    fn eff(s: &str) -> Eff {
        eval_effect(&term(s)).unwrap()
    }

    fn out(atoms: &[(Prob, i64, bool)]) -> Outcome {
        outcome_from(atoms.iter().map(|(p, r, b)| (p.clone(), int(*r), Term::boolean(*b)))).unwrap()
    }

    use Strategy::Leaf;

    #[test]
    fn enumeration_order() {
        assert_eq!(enumerate_strategies(&eff("tt"), 10).unwrap(), vec![Leaf]);
        let e = eff("(5 . tt) or (6 . ff)");
        assert_eq!(
            enumerate_strategies(&e, 10).unwrap(),
            vec![Strategy::left(Strategy::through(Leaf)), Strategy::right(Strategy::through(Leaf))]
        );
        let e = eff("(tt or ff) +[1/2] tt");
        assert_eq!(
            enumerate_strategies(&e, 10).unwrap(),
            vec![
                Strategy::pair(Strategy::left(Leaf), Leaf),
                Strategy::pair(Strategy::right(Leaf), Leaf)
            ]
        );
        let e = eff("(tt or ff) or tt");
        assert!(matches!(enumerate_strategies(&e, 2), Err(StrategyError::CapExceeded { .. })));
    }

    #[test]
    fn enumeration_is_sorted_and_fits() {
        let e = eff("((tt or ff) +[1/3] (1 . ff or tt)) or ((ff or tt) +[1/2] tt)");
        let all = enumerate_strategies(&e, 100).unwrap();
        assert_eq!(all.len() as u128, strategy_count(&e));
        assert!(all.iter().all(|s| s.fits(&e)));
        assert!(all.windows(2).all(|w| w[0].cmp_in_order(&w[1]) == Ordering::Less));
    }

    #[test]
    fn outcomes_and_rewards() {
        assert_eq!(outcome(&Leaf, &eff("tt")).unwrap(), out(&[(int(1), 0, true)]));
        let e = eff("(5 . tt) or (6 . ff)");
        let right = Strategy::right(Strategy::through(Leaf));
        assert_eq!(outcome(&right, &e).unwrap(), out(&[(int(1), 6, false)]));
        assert_eq!(strategy_reward(&Strategy::left(Strategy::through(Leaf)), &e).unwrap(), int(5));
        let e = eff("(1 . tt) +[1/2] (3 . ff)");
        let s = Strategy::pair(Strategy::through(Leaf), Strategy::through(Leaf));
        assert_eq!(outcome(&s, &e).unwrap(), out(&[(rat(1, 2), 1, true), (rat(1, 2), 3, false)]));
        assert_eq!(strategy_reward(&s, &e).unwrap(), int(2));
        assert_eq!(strategy_reward(&Strategy::through(Leaf), &eff("5 . tt")).unwrap(), int(5));
        assert_eq!(outcome(&Leaf, &e), Err(StrategyError::ShapeMismatch));
    }

    #[test]
    fn argmax_and_max() {
        assert_eq!(argmax(&[int(2), int(5), int(5)], |r| r.clone()).unwrap(), 1);
        assert_eq!(argmax(&[int(-7)], |r| r.clone()).unwrap(), 0);
        assert_eq!(argmax::<Reward>(&[], |r| r.clone()), Err(StrategyError::Empty));
        let mut g = |x: &i32| int(*x as i64 % 2);
        assert_eq!(*max_by(&mut g, &3, &5), 3);
        assert_eq!(*max_by(&mut g, &2, &5), 5);
    }

    #[test]
    fn bruteforce_examples() {
        let cap = DEFAULT_STRATEGY_CAP;
        assert_eq!(select_bruteforce(&term("(5 . tt) or (6 . ff)"), cap).unwrap(), out(&[(int(1), 6, false)]));
        assert_eq!(
            select_bruteforce(&term("(5 . tt) or ((5 . tt) +[1/2] (6 . ff))"), cap).unwrap(),
            out(&[(rat(1, 2), 5, true), (rat(1, 2), 6, false)])
        );
        assert_eq!(select_bruteforce(&term("(5 . tt) or (5 . ff)"), cap).unwrap(), out(&[(int(1), 5, true)]));
    }

    #[test]
    fn fast_examples() {
        assert_eq!(select_fast(&eff("ff")), out(&[(int(1), 0, false)]));
        assert_eq!(select_fast(&eff("2 . ((5 . tt) or (6 . ff))")), out(&[(int(1), 8, false)]));
        assert_eq!(
            select_fast(&eff("(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))")),
            out(&[(rat(1, 2), 1, true), (rat(1, 5), 2, false), (rat(3, 10), 3, true)])
        );
        assert_eq!(select_fast(&eff("(5 . tt) or (5 . ff)")), out(&[(int(1), 5, true)]));
    }
}
