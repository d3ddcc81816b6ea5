//! Auxiliary monads carrying rewards (and probability) underneath selection.
//!
//! * [`W`]: writer, `R x X`.
//! * [`DW`]: distributions over `R x X`; the full operational outcome.
//! * [`T2`]: value distribution with a reward per value.
//! * [`T3`]: value distribution with one expected reward.
//! * [`MR`]: finite maps `X -> R` under max-plus choice; rewards calculus only.
//!
//! Every monad here is free on finite sets and computed exactly.

mod dist;

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

pub use dist::{Dist, DistError};

use crate::reward::{is_prob, Prob, Reward, RewardStructure};
use crate::syntax::{Eff, Term};

/// Anything that can sit in a monadic value.
pub trait Atom: Clone + Ord + Debug {}
impl<T: Clone + Ord + Debug> Atom for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonadError {
    #[error("{0} has no probabilistic choice")]
    NotProbabilistic(&'static str),
    #[error("probability {0} is outside [0,1]")]
    BadProb(String),
    #[error("reward structure {0} fails the gathering law needed by T3")]
    GatherLawFails(RewardStructure),
    #[error("{0} is not in the value support")]
    NotInSupport(String),
}

pub trait AuxMonad {
    const NAME: &'static str;
    const PROBABILISTIC: bool;
    type Val<A: Atom>: Clone + PartialEq + Eq + PartialOrd + Ord + Debug;

    fn unit<A: Atom>(x: A) -> Self::Val<A>;

    /// Kleisli extension of `f`, applied to `u`.
    fn bind<A: Atom, B: Atom>(u: &Self::Val<A>, f: &mut dyn FnMut(&A) -> Self::Val<B>) -> Self::Val<B>;

    /// The reward action `r . u`.
    fn reward<A: Atom>(r: &Reward, u: &Self::Val<A>) -> Self::Val<A>;

    /// `sum_i p_i u_i` with weights summing to one. Only probabilistic monads
    /// mix distinct values.
    fn mix<A: Atom>(parts: Vec<(Prob, Self::Val<A>)>) -> Result<Self::Val<A>, MonadError>;

    /// The algebra map onto rewards.
    fn alpha(u: &Self::Val<Reward>) -> Reward;

    /// Values the computation may return.
    fn support<A: Atom>(u: &Self::Val<A>) -> Vec<A>;

    fn map<A: Atom, B: Atom>(u: &Self::Val<A>, f: &mut dyn FnMut(&A) -> B) -> Self::Val<B> {
        Self::bind(u, &mut |x| Self::unit(f(x)))
    }

    /// Expected reward of `u` given the reward continuation `g`: `alpha(T(g)(u))`.
    fn expect<A: Atom>(u: &Self::Val<A>, g: &mut dyn FnMut(&A) -> Reward) -> Reward {
        Self::alpha(&Self::map(u, g))
    }

    /// `u +_p v`.
    fn pchoice<A: Atom>(p: &Prob, u: &Self::Val<A>, v: &Self::Val<A>) -> Result<Self::Val<A>, MonadError> {
        if !is_prob(p) {
            return Err(MonadError::BadProb(p.to_string()));
        }
        Self::mix(vec![(p.clone(), u.clone()), (Prob::one() - p, v.clone())])
    }
}

fn live<V>(parts: Vec<(Prob, V)>) -> Vec<(Prob, V)> {
    parts.into_iter().filter(|(p, _)| !p.is_zero()).collect()
}

/// Writer monad.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct W;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WVal<A> {
    pub reward: Reward,
    pub value: A,
}

impl AuxMonad for W {
    const NAME: &'static str = "W";
    const PROBABILISTIC: bool = false;
    type Val<A: Atom> = WVal<A>;

    fn unit<A: Atom>(x: A) -> WVal<A> {
        WVal { reward: Reward::zero(), value: x }
    }

    fn bind<A: Atom, B: Atom>(u: &WVal<A>, f: &mut dyn FnMut(&A) -> WVal<B>) -> WVal<B> {
        let v = f(&u.value);
        WVal { reward: &u.reward + v.reward, value: v.value }
    }

    fn reward<A: Atom>(r: &Reward, u: &WVal<A>) -> WVal<A> {
        WVal { reward: r + &u.reward, value: u.value.clone() }
    }

    fn mix<A: Atom>(parts: Vec<(Prob, WVal<A>)>) -> Result<WVal<A>, MonadError> {
        let parts = live(parts);
        match parts.split_first() {
            Some(((_, first), rest)) if rest.iter().all(|(_, v)| v == first) => Ok(first.clone()),
            _ => Err(MonadError::NotProbabilistic(Self::NAME)),
        }
    }

    fn alpha(u: &WVal<Reward>) -> Reward {
        &u.reward + &u.value
    }

    fn support<A: Atom>(u: &WVal<A>) -> Vec<A> {
        vec![u.value.clone()]
    }

    fn expect<A: Atom>(u: &WVal<A>, g: &mut dyn FnMut(&A) -> Reward) -> Reward {
        &u.reward + g(&u.value)
    }
}

/// Distributions over reward-value pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DW;

pub type DWVal<A> = Dist<(Reward, A)>;

impl AuxMonad for DW {
    const NAME: &'static str = "DW";
    const PROBABILISTIC: bool = true;
    type Val<A: Atom> = DWVal<A>;

    fn unit<A: Atom>(x: A) -> DWVal<A> {
        Dist::dirac((Reward::zero(), x))
    }

    fn bind<A: Atom, B: Atom>(u: &DWVal<A>, f: &mut dyn FnMut(&A) -> DWVal<B>) -> DWVal<B> {
        u.bind(|(r, x)| Self::reward(r, &f(x)))
    }

    fn reward<A: Atom>(r: &Reward, u: &DWVal<A>) -> DWVal<A> {
        u.map(|(s, x)| (r + s, x.clone()))
    }

    fn mix<A: Atom>(parts: Vec<(Prob, DWVal<A>)>) -> Result<DWVal<A>, MonadError> {
        Ok(Dist::mix(live(parts)))
    }

    fn alpha(u: &DWVal<Reward>) -> Reward {
        u.expect(|(r, s)| r + s)
    }

    fn support<A: Atom>(u: &DWVal<A>) -> Vec<A> {
        let mut xs: Vec<A> = u.support().map(|(_, x)| x.clone()).collect();
        xs.sort();
        xs.dedup();
        xs
    }

    fn expect<A: Atom>(u: &DWVal<A>, g: &mut dyn FnMut(&A) -> Reward) -> Reward {
        u.expect(|(r, x)| r + g(x))
    }
}

/// Value distribution plus a reward for each value in its support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct T2;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct T2Val<A: Ord> {
    pub dist: Dist<A>,
    /// Defined on exactly the support of `dist`.
    pub rew: BTreeMap<A, Reward>,
}

impl<A: Atom> T2Val<A> {
    pub fn new(dist: Dist<A>, rew: BTreeMap<A, Reward>) -> Option<Self> {
        let aligned = rew.len() == dist.len() && dist.support().all(|a| rew.contains_key(a));
        aligned.then_some(T2Val { dist, rew })
    }
}

impl AuxMonad for T2 {
    const NAME: &'static str = "T2";
    const PROBABILISTIC: bool = true;
    type Val<A: Atom> = T2Val<A>;

    fn unit<A: Atom>(x: A) -> T2Val<A> {
        T2Val { rew: BTreeMap::from([(x.clone(), Reward::zero())]), dist: Dist::dirac(x) }
    }

    fn bind<A: Atom, B: Atom>(u: &T2Val<A>, f: &mut dyn FnMut(&A) -> T2Val<B>) -> T2Val<B> {
        let parts = u.dist.iter().map(|(x, p)| (p.clone(), Self::reward(&u.rew[x], &f(x)))).collect();
        Self::mix(parts).expect("weights of a distribution")
    }

    fn reward<A: Atom>(r: &Reward, u: &T2Val<A>) -> T2Val<A> {
        T2Val { dist: u.dist.clone(), rew: u.rew.iter().map(|(x, s)| (x.clone(), r + s)).collect() }
    }

    /// Weights each value's reward by how much of its mass each part contributes.
    fn mix<A: Atom>(parts: Vec<(Prob, T2Val<A>)>) -> Result<T2Val<A>, MonadError> {
        let parts = live(parts);
        let mut mass: BTreeMap<A, Prob> = BTreeMap::new();
        let mut weighted: BTreeMap<A, Reward> = BTreeMap::new();
        for (p, u) in &parts {
            for (x, q) in u.dist.iter() {
                let w = p * q;
                *weighted.entry(x.clone()).or_insert_with(Reward::zero) += &w * &u.rew[x];
                *mass.entry(x.clone()).or_insert_with(Prob::zero) += w;
            }
        }
        let rew = weighted.into_iter().map(|(x, s)| { let m = &mass[&x]; (x, s / m) }).collect();
        let dist = Dist::from_parts(mass.into_iter().map(|(x, m)| (m, x)));
        Ok(T2Val { dist, rew })
    }

    fn alpha(u: &T2Val<Reward>) -> Reward {
        u.dist.expect(|r| &u.rew[r] + r)
    }

    fn support<A: Atom>(u: &T2Val<A>) -> Vec<A> {
        u.dist.support().cloned().collect()
    }

    fn expect<A: Atom>(u: &T2Val<A>, g: &mut dyn FnMut(&A) -> Reward) -> Reward {
        u.dist.expect(|x| &u.rew[x] + g(x))
    }
}

/// Value distribution plus a single expected reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct T3;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct T3Val<A: Ord> {
    pub dist: Dist<A>,
    pub rew: Reward,
}

impl T3 {
    /// `T3` is only a sound reward module when the structure satisfies the
    /// gathering law; checked on random samples.
    pub fn admissible(structure: RewardStructure) -> Result<(), MonadError> {
        if structure.satisfies_gather_law(1000, 0x7433) {
            Ok(())
        } else {
            Err(MonadError::GatherLawFails(structure))
        }
    }
}

impl AuxMonad for T3 {
    const NAME: &'static str = "T3";
    const PROBABILISTIC: bool = true;
    type Val<A: Atom> = T3Val<A>;

    fn unit<A: Atom>(x: A) -> T3Val<A> {
        T3Val { dist: Dist::dirac(x), rew: Reward::zero() }
    }

    fn bind<A: Atom, B: Atom>(u: &T3Val<A>, f: &mut dyn FnMut(&A) -> T3Val<B>) -> T3Val<B> {
        let parts = u.dist.iter().map(|(x, p)| (p.clone(), f(x))).collect();
        Self::reward(&u.rew, &Self::mix(parts).expect("weights of a distribution"))
    }

    fn reward<A: Atom>(r: &Reward, u: &T3Val<A>) -> T3Val<A> {
        T3Val { dist: u.dist.clone(), rew: r + &u.rew }
    }

    fn mix<A: Atom>(parts: Vec<(Prob, T3Val<A>)>) -> Result<T3Val<A>, MonadError> {
        let parts = live(parts);
        let rew = parts.iter().map(|(p, u)| p * &u.rew).sum();
        let dist = Dist::mix(parts.into_iter().map(|(p, u)| (p, u.dist)).collect());
        Ok(T3Val { dist, rew })
    }

    fn alpha(u: &T3Val<Reward>) -> Reward {
        &u.rew + u.dist.expect(|r| r.clone())
    }

    fn support<A: Atom>(u: &T3Val<A>) -> Vec<A> {
        u.dist.support().cloned().collect()
    }

    fn expect<A: Atom>(u: &T3Val<A>, g: &mut dyn FnMut(&A) -> Reward) -> Reward {
        &u.rew + u.dist.expect(|x| g(x))
    }
}

/// Nonempty finite maps to rewards; choice is pointwise max.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MR;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MRVal<A: Ord> {
    pub map: BTreeMap<A, Reward>,
}

impl MR {
    /// `u or v`: union, keeping the larger reward on shared values.
    pub fn or<A: Atom>(u: &MRVal<A>, v: &MRVal<A>) -> MRVal<A> {
        let mut map = u.map.clone();
        for (x, r) in &v.map {
            match map.get_mut(x) {
                Some(s) if *s >= *r => {}
                Some(s) => *s = r.clone(),
                None => {
                    map.insert(x.clone(), r.clone());
                }
            }
        }
        MRVal { map }
    }
}

impl AuxMonad for MR {
    const NAME: &'static str = "MR";
    const PROBABILISTIC: bool = false;
    type Val<A: Atom> = MRVal<A>;

    fn unit<A: Atom>(x: A) -> MRVal<A> {
        MRVal { map: BTreeMap::from([(x, Reward::zero())]) }
    }

    fn bind<A: Atom, B: Atom>(u: &MRVal<A>, f: &mut dyn FnMut(&A) -> MRVal<B>) -> MRVal<B> {
        u.map
            .iter()
            .map(|(x, r)| Self::reward(r, &f(x)))
            .reduce(|a, b| MR::or(&a, &b))
            .expect("nonempty")
    }

    fn reward<A: Atom>(r: &Reward, u: &MRVal<A>) -> MRVal<A> {
        MRVal { map: u.map.iter().map(|(x, s)| (x.clone(), r + s)).collect() }
    }

    fn mix<A: Atom>(parts: Vec<(Prob, MRVal<A>)>) -> Result<MRVal<A>, MonadError> {
        let parts = live(parts);
        match parts.split_first() {
            Some(((_, first), rest)) if rest.iter().all(|(_, v)| v == first) => Ok(first.clone()),
            _ => Err(MonadError::NotProbabilistic(Self::NAME)),
        }
    }

    fn alpha(u: &MRVal<Reward>) -> Reward {
        u.map.iter().map(|(x, r)| x + r).max().expect("nonempty")
    }

    fn support<A: Atom>(u: &MRVal<A>) -> Vec<A> {
        u.map.keys().cloned().collect()
    }

    fn expect<A: Atom>(u: &MRVal<A>, g: &mut dyn FnMut(&A) -> Reward) -> Reward {
        u.map.iter().map(|(x, r)| r + g(x)).max().expect("nonempty")
    }
}

/// `theta(sum p_i <r_i, x_i>) = sum p_i (r_i . unit(x_i))`, the canonical map out of `DW`.
pub fn theta<T: AuxMonad, A: Atom>(u: &DWVal<A>) -> Result<T::Val<A>, MonadError> {
    T::mix(u.iter().map(|((r, x), p)| (p.clone(), T::reward(r, &T::unit(x.clone())))).collect())
}

/// Reward addition: adds `g(x)` to the reward attached to each value `x`.
pub fn k_gamma<T: AuxMonad, A: Atom>(g: &mut dyn FnMut(&A) -> Reward, u: &T::Val<A>) -> T::Val<A> {
    T::bind(u, &mut |x| T::reward(&g(x), &T::unit(x.clone())))
}

/// Marginal distribution of values.
pub fn vdis<A: Atom>(u: &DWVal<A>) -> Dist<A> {
    u.map(|(_, x)| x.clone())
}

/// Expected reward conditional on the value being `x`.
pub fn cond_reward<A: Atom>(u: &DWVal<A>, x: &A) -> Result<Reward, MonadError> {
    let (mut mass, mut total) = (Prob::zero(), Reward::zero());
    for ((r, y), p) in u.iter() {
        if y == x {
            total += p * r;
            mass += p;
        }
    }
    if mass.is_zero() {
        return Err(MonadError::NotInSupport(format!("{x:?}")));
    }
    Ok(total / mass)
}

/// Expected reward, ignoring values.
pub fn expect0<A: Atom>(u: &DWVal<A>) -> Reward {
    u.expect(|(r, _)| r.clone())
}

/// Folds a reward/choice effect value into `MR`.
pub fn mr_of_effect(e: &Eff) -> Result<MRVal<Term>, MonadError> {
    Ok(match e {
        Eff::Val(v) => MR::unit(v.clone()),
        Eff::Or(a, b) => MR::or(&mr_of_effect(a)?, &mr_of_effect(b)?),
        Eff::Reward(r, a) => MR::reward(r, &mr_of_effect(a)?),
        Eff::PChoice(..) => return Err(MonadError::NotProbabilistic(MR::NAME)),
    })
}

/// Run-time choice of auxiliary monad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonadKind {
    W,
    DW,
    T2,
    T3,
}

impl MonadKind {
    pub const PROBABILISTIC: [MonadKind; 3] = [MonadKind::DW, MonadKind::T2, MonadKind::T3];

    pub fn name(self) -> &'static str {
        match self {
            MonadKind::W => "W",
            MonadKind::DW => "T1",
            MonadKind::T2 => "T2",
            MonadKind::T3 => "T3",
        }
    }

    pub fn is_probabilistic(self) -> bool {
        self != MonadKind::W
    }
}

impl FromStr for MonadKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "W" | "w" => Ok(MonadKind::W),
            "DW" | "dw" | "T1" | "t1" => Ok(MonadKind::DW),
            "T2" | "t2" => Ok(MonadKind::T2),
            "T3" | "t3" => Ok(MonadKind::T3),
            _ => Err(format!("unknown monad `{s}` (expected W, DW/T1, T2 or T3)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reward::{int, rat};

    fn dw(parts: &[(Prob, i64, char)]) -> DWVal<char> {
        Dist::new(parts.iter().map(|(p, r, x)| (p.clone(), (int(*r), *x)))).unwrap()
    }

    /// 1/2<1,t> + 1/5<2,f> + 3/10<3,t>
    fn running() -> DWVal<char> {
        dw(&[(rat(1, 2), 1, 't'), (rat(1, 5), 2, 'f'), (rat(3, 10), 3, 't')])
    }

    #[test]
    fn units() {
        assert_eq!(DW::unit('t'), Dist::dirac((int(0), 't')));
        assert_eq!(T3::unit('t'), T3Val { dist: Dist::dirac('t'), rew: int(0) });
        assert_eq!(W::unit('f'), WVal { reward: int(0), value: 'f' });
        assert_eq!(MR::unit('f').map, BTreeMap::from([('f', int(0))]));
    }

    #[test]
    fn binds() {
        let w = W::bind(&WVal { reward: int(2), value: 't' }, &mut |x| WVal { reward: int(3), value: *x });
        assert_eq!(w, WVal { reward: int(5), value: 't' });
        let u = dw(&[(rat(1, 2), 1, 'a'), (rat(1, 2), 0, 'b')]);
        let v = DW::bind(&u, &mut |x| if *x == 'a' { dw(&[(int(1), 2, 'a')]) } else { dw(&[(int(1), 0, 'b')]) });
        assert_eq!(v, dw(&[(rat(1, 2), 3, 'a'), (rat(1, 2), 0, 'b')]));
    }

    #[test]
    fn reward_actions() {
        assert_eq!(W::reward(&int(2), &WVal { reward: int(3), value: 't' }).reward, int(5));
        let t3 = T3Val { dist: Dist::dirac('t'), rew: int(3) };
        assert_eq!(T3::reward(&int(2), &t3).rew, int(5));
        assert_eq!(DW::reward(&int(0), &running()), running());
    }

    #[test]
    fn pchoices() {
        let u = DW::pchoice(&rat(1, 2), &dw(&[(int(1), 1, 't')]), &dw(&[(int(1), 3, 'f')])).unwrap();
        assert_eq!(u, dw(&[(rat(1, 2), 1, 't'), (rat(1, 2), 3, 'f')]));
        let a = T2::reward(&int(1), &T2::unit('t'));
        let b = T2::reward(&int(3), &T2::unit('t'));
        assert_eq!(T2::pchoice(&rat(1, 2), &a, &b).unwrap(), T2::reward(&int(2), &T2::unit('t')));
        assert_eq!(T3::pchoice(&int(1), &T3::unit('a'), &T3::unit('b')).unwrap(), T3::unit('a'));
        assert!(W::pchoice(&rat(1, 2), &W::unit('a'), &W::unit('b')).is_err());
    }

    #[test]
    fn algebra_maps() {
        assert_eq!(W::alpha(&WVal { reward: int(2), value: int(3) }), int(5));
        let d = Dist::new([(rat(1, 2), (int(1), int(1))), (rat(1, 2), (int(0), int(3)))]).unwrap();
        assert_eq!(DW::alpha(&d), rat(5, 2));
        let t3 = T3Val { dist: Dist::new([(rat(1, 2), int(1)), (rat(1, 2), int(3))]).unwrap(), rew: int(2) };
        assert_eq!(T3::alpha(&t3), int(4));
    }

    #[test]
    fn expectations() {
        assert_eq!(DW::expect(&running(), &mut |_| int(0)), rat(9, 5));
        assert_eq!(W::expect(&WVal { reward: int(5), value: 't' }, &mut |_| int(2)), int(7));
        assert_eq!(T2::expect(&T2::unit('x'), &mut |_| rat(-3, 2)), rat(-3, 2));
    }

    #[test]
    fn running_example_observations() {
        let mu = running();
        assert_eq!(vdis(&mu), Dist::new([(rat(4, 5), 't'), (rat(1, 5), 'f')]).unwrap());
        assert_eq!(cond_reward(&mu, &'f').unwrap(), int(2));
        assert_eq!(cond_reward(&mu, &'t').unwrap(), rat(7, 4));
        assert!(cond_reward(&mu, &'z').is_err());
        assert_eq!(expect0(&mu), rat(9, 5));
        let t3 = theta::<T3, _>(&mu).unwrap();
        assert_eq!(t3, T3Val { dist: vdis(&mu), rew: rat(9, 5) });
        let t2 = theta::<T2, _>(&mu).unwrap();
        assert_eq!(t2.dist, vdis(&mu));
        assert_eq!(t2.rew, BTreeMap::from([('t', rat(7, 4)), ('f', int(2))]));
        let half = dw(&[(rat(1, 2), 1, 't'), (rat(1, 2), 3, 'f')]);
        assert_eq!(theta::<T3, _>(&half).unwrap().rew, int(2));
        assert_eq!(theta::<DW, _>(&mu).unwrap(), mu);
    }

    #[test]
    fn reward_addition_example() {
        let u = dw(&[(rat(1, 2), 1, 't'), (rat(1, 2), 3, 'f')]);
        let mut g = |x: &char| if *x == 't' { int(1) } else { int(2) };
        assert_eq!(k_gamma::<DW, _>(&mut g, &u), dw(&[(rat(1, 2), 2, 't'), (rat(1, 2), 5, 'f')]));
        assert_eq!(k_gamma::<DW, _>(&mut |_| int(0), &u), u);
    }

    #[test]
    fn max_plus_choice() {
        let a = MR::reward(&int(5), &MR::unit('t'));
        let b = MR::reward(&int(6), &MR::unit('f'));
        let c = MR::reward(&int(4), &MR::unit('t'));
        assert_eq!(MR::or(&a, &b).map, BTreeMap::from([('t', int(5)), ('f', int(6))]));
        assert_eq!(MR::or(&a, &c), a);
    }

    #[test]
    fn max_plus_folds() {
        use crate::operational::eval_effect;
        use crate::syntax::{parse_term, Signature};
        let fold = |s: &str| mr_of_effect(&eval_effect(&parse_term(s, &Signature::default()).unwrap()).unwrap());
        let b = |x: bool| Term::boolean(x);
        assert_eq!(fold("(5 . tt) or (6 . ff)").unwrap().map, BTreeMap::from([(b(true), int(5)), (b(false), int(6))]));
        assert_eq!(fold("(5 . tt) or (4 . tt)").unwrap().map, BTreeMap::from([(b(true), int(5))]));
        assert_eq!(fold("tt").unwrap().map, BTreeMap::from([(b(true), int(0))]));
        assert!(fold("tt +[1/2] ff").is_err());
    }

    #[test]
    fn t3_requires_gathering_law() {
        assert!(T3::admissible(RewardStructure::AddRationals).is_ok());
        assert!(T3::admissible(RewardStructure::MulPositiveRationals).is_err());
    }
}
