//! Seeded random generators: well-typed programs, effect values, reward
//! continuations, auxiliary-monad values and axiom instances.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::equations::{Axiom, EqError, GammaTable, PrForm};
use crate::monads::{Atom, Dist, DWVal, MRVal, MonadKind, T2Val, T3Val, WVal};
use crate::reward::{int, rat, Prob, Reward};
use crate::selection::{gamma_table, Gamma, MonadValue, SemVal};
use crate::syntax::{name, Const, Eff, Mode, Name, Signature, Term, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("reward and probability pools must be nonempty")]
    EmptyPool,
    #[error("probability pool entries must lie strictly between 0 and 1")]
    BadProb,
    #[error("max_term_size must be at least 1")]
    ZeroSize,
    #[error("type of rank {rank} exceeds max_order {max}")]
    RankTooHigh { rank: usize, max: usize },
    #[error("type {0} has no finite carrier")]
    InfiniteCarrier(String),
    #[error("unknown base type `{0}`")]
    UnknownBase(String),
    #[error("carrier is empty")]
    EmptyCarrier,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_term_size: usize,
    pub max_order: usize,
    pub mode: Mode,
    pub reward_pool: Vec<Reward>,
    pub prob_pool: Vec<Prob>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_term_size: 40,
            max_order: 2,
            mode: Mode::Rewards,
            reward_pool: default_reward_pool(),
            prob_pool: [rat(1, 2), rat(1, 3), rat(2, 3), rat(1, 4), rat(3, 4), rat(2, 5)].to_vec(),
        }
    }
}

/// `{-3, ..., 3} ∪ {±1/2, ±1/3}`.
pub fn default_reward_pool() -> Vec<Reward> {
    let mut pool: Vec<Reward> = (-3..=3).map(int).collect();
    pool.extend([rat(1, 2), rat(-1, 2), rat(1, 3), rat(-1, 3)]);
    pool
}

impl GenConfig {
    pub fn new(seed: u64, mode: Mode) -> Self {
        GenConfig { seed, mode, ..GenConfig::default() }
    }

    pub fn with_size(mut self, size: usize) -> Self {
        self.max_term_size = size;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.reward_pool.is_empty() || self.prob_pool.is_empty() {
            return Err(GenError::EmptyPool);
        }
        if !self.prob_pool.iter().all(|p| *p > int(0) && *p < int(1)) {
            return Err(GenError::BadProb);
        }
        if self.max_term_size == 0 {
            return Err(GenError::ZeroSize);
        }
        Ok(())
    }
}

/// Seed for case `i` of a run seeded with `seed`.
pub fn case_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ (i.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Converts a table into a continuation on semantic values; other values get 0.
pub fn gamma_of_table(t: &GammaTable) -> Gamma {
    gamma_table(t.iter().map(|(c, r)| (SemVal::Base(c.clone()), r.clone())).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ctor {
    Leaf,
    Var,
    Or,
    Reward,
    PChoice,
    If,
    Let,
    App,
    Proj,
    Eq,
    Leq,
    Plus,
    Oplus,
    Pair,
    Lam,
}

impl Ctor {
    fn label(self) -> &'static str {
        match self {
            Ctor::Leaf => "leaf",
            Ctor::Var => "var",
            Ctor::Or => "or",
            Ctor::Reward => "reward",
            Ctor::PChoice => "pchoice",
            Ctor::If => "if",
            Ctor::Let => "let",
            Ctor::App => "app",
            Ctor::Proj => "proj",
            Ctor::Eq => "eq",
            Ctor::Leq => "leq",
            Ctor::Plus => "plus",
            Ctor::Oplus => "oplus",
            Ctor::Pair => "pair",
            Ctor::Lam => "lam",
        }
    }
}

type Env = Vec<(Name, Type)>;

pub struct Generator {
    cfg: GenConfig,
    sig: Signature,
    rng: ChaCha8Rng,
    fresh: usize,
    coverage: BTreeMap<&'static str, u64>,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Result<Self, GenError> {
        Self::with_signature(cfg, Signature::default())
    }

    pub fn with_signature(cfg: GenConfig, sig: Signature) -> Result<Self, GenError> {
        cfg.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Generator { cfg, sig, rng, fresh: 0, coverage: BTreeMap::new() })
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Constructor counts over everything generated so far.
    pub fn coverage(&self) -> &BTreeMap<&'static str, u64> {
        &self.coverage
    }

    pub fn reward(&mut self) -> Reward {
        self.cfg.reward_pool.choose(&mut self.rng).expect("nonempty").clone()
    }

    pub fn prob(&mut self) -> Prob {
        self.cfg.prob_pool.choose(&mut self.rng).expect("nonempty").clone()
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        self.rng.gen_ratio(num, den)
    }

    /// Base types available: `Bool`, `Rew` and the declared ones.
    pub fn base_types(&self) -> Vec<Type> {
        let mut out = vec![Type::Bool, Type::Rew];
        out.extend(self.sig.bases.iter().map(|b| Type::Base(b.name.clone())));
        out
    }

    /// Base types with a finite carrier.
    pub fn finite_base_types(&self) -> Vec<Type> {
        self.base_types().into_iter().filter(|t| *t != Type::Rew).collect()
    }

    pub fn base_type(&mut self) -> Type {
        self.base_types().choose(&mut self.rng).expect("nonempty").clone()
    }

    pub fn finite_base_type(&mut self) -> Type {
        self.finite_base_types().choose(&mut self.rng).expect("nonempty").clone()
    }

    /// Constants of a base type; for `Rew` the reward pool.
    pub fn carrier(&self, ty: &Type) -> Result<Vec<Const>, GenError> {
        match ty {
            Type::Rew => Ok(self.cfg.reward_pool.iter().cloned().map(Const::Rew).collect()),
            Type::Base(n) if !self.sig.has_base(n) => Err(GenError::UnknownBase(n.to_string())),
            _ => self.sig.constants_of(ty).ok_or_else(|| GenError::InfiniteCarrier(crate::syntax::pretty_type(ty))),
        }
    }

    // ------------------------------------------------------------ programs

    /// A closed program of type `ty` with at most `max_term_size` nodes.
    pub fn program(&mut self, ty: &Type) -> Result<Term, GenError> {
        let rank = ty.rank();
        if rank > self.cfg.max_order {
            return Err(GenError::RankTooHigh { rank, max: self.cfg.max_order });
        }
        if let Type::Base(n) = ty {
            if !self.sig.has_base(n) {
                return Err(GenError::UnknownBase(n.to_string()));
            }
        }
        let max = self.cfg.max_term_size;
        loop {
            self.fresh = 0;
            let budget = self.rng.gen_range(1..=max);
            let t = self.term(&mut Vec::new(), ty, budget);
            if t.size() <= max {
                return Ok(t);
            }
        }
    }

    fn count(&mut self, c: Ctor) {
        *self.coverage.entry(c.label()).or_insert(0) += 1;
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("x{}", self.fresh)
    }

    fn vars_of<'e>(env: &'e Env, ty: &Type) -> Vec<&'e Name> {
        env.iter().filter(|(_, t)| t == ty).map(|(x, _)| x).collect()
    }

    fn split(&mut self, n: usize) -> (usize, usize) {
        if n <= 1 {
            return (1, 1);
        }
        let a = self.rng.gen_range(1..n);
        (a, (n - a).max(1))
    }

    fn arg_type(&mut self, result_rank: usize) -> Type {
        let mut tys = self.base_types();
        if self.cfg.max_order >= 2 && result_rank <= 2 {
            tys.push(Type::arrow(Type::Bool, Type::Bool));
        }
        tys.choose(&mut self.rng).expect("nonempty").clone()
    }

    fn let_type(&mut self) -> Type {
        let mut tys = self.base_types();
        if self.cfg.max_order >= 1 {
            tys.push(Type::arrow(Type::Bool, Type::Bool));
        }
        if self.cfg.max_order >= 1 && self.chance(1, 4) {
            return Type::prod(Type::Bool, Type::Rew);
        }
        tys.choose(&mut self.rng).expect("nonempty").clone()
    }

    fn choose_ctor(&mut self, env: &Env, ty: &Type, n: usize) -> Ctor {
        if n <= 1 {
            return Ctor::Leaf;
        }
        let mut opts: Vec<(Ctor, u32)> = vec![(Ctor::Or, 4), (Ctor::Reward, 4), (Ctor::If, 2), (Ctor::Let, 2)];
        if self.cfg.mode == Mode::Prob {
            opts.push((Ctor::PChoice, 4));
        }
        if !Self::vars_of(env, ty).is_empty() {
            opts.push((Ctor::Var, 1));
        }
        if self.cfg.max_order >= ty.rank().max(1) {
            opts.push((Ctor::App, 2));
        }
        if n >= 4 {
            opts.push((Ctor::Proj, 1));
        }
        match ty {
            Type::Bool => opts.extend([(Ctor::Eq, 1), (Ctor::Leq, 1)]),
            Type::Rew => opts.extend([(Ctor::Plus, 1), (Ctor::Oplus, 1)]),
            Type::Prod(..) => opts.push((Ctor::Pair, 4)),
            Type::Arrow(..) => opts.push((Ctor::Lam, 6)),
            _ => {}
        }
        let total: u32 = opts.iter().map(|(_, w)| w).sum();
        let mut pick = self.rng.gen_range(0..total);
        for (c, w) in opts {
            if pick < w {
                return c;
            }
            pick -= w;
        }
        unreachable!()
    }

    fn term(&mut self, env: &mut Env, ty: &Type, n: usize) -> Term {
        let c = self.choose_ctor(env, ty, n);
        self.count(c);
        match c {
            Ctor::Leaf => self.leaf(env, ty),
            Ctor::Var => {
                let xs = Self::vars_of(env, ty);
                Term::Var(xs[self.rng.gen_range(0..xs.len())].clone())
            }
            Ctor::Or => {
                let (a, b) = self.split(n - 1);
                Term::or(self.term(env, ty, a), self.term(env, ty, b))
            }
            Ctor::PChoice => {
                let (a, b) = self.split(n - 1);
                let p = self.prob();
                Term::pchoice(p, self.term(env, ty, a), self.term(env, ty, b))
            }
            Ctor::Reward => {
                let k = if n > 4 && self.chance(1, 4) { self.rng.gen_range(1..=3) } else { 1 };
                let r = self.term(env, &Type::Rew, k);
                Term::reward(r, self.term(env, ty, n.saturating_sub(k + 1).max(1)))
            }
            Ctor::If => {
                let k = self.rng.gen_range(1..=((n - 1) / 3).max(1));
                let c = self.term(env, &Type::Bool, k);
                let (a, b) = self.split(n.saturating_sub(k + 1).max(2));
                Term::ite(c, self.term(env, ty, a), self.term(env, ty, b))
            }
            Ctor::Let => {
                let a = self.let_type();
                let (k, rest) = self.split(n - 1);
                let m = self.term(env, &a, k);
                let x = self.fresh_var();
                env.push((name(&x), a.clone()));
                let body = self.term(env, ty, rest);
                env.pop();
                Term::let_in(&x, a, m, body)
            }
            Ctor::App => {
                let a = self.arg_type(ty.rank());
                let fty = Type::arrow(a.clone(), ty.clone());
                if fty.rank() > self.cfg.max_order {
                    return self.leaf(env, ty);
                }
                let (k, rest) = self.split(n - 1);
                Term::app(self.term(env, &fty, k.max(2)), self.term(env, &a, rest))
            }
            Ctor::Proj => {
                let other = if self.chance(1, 2) { Type::Bool } else { Type::Rew };
                let left = self.chance(1, 2);
                let pty = if left { Type::prod(ty.clone(), other) } else { Type::prod(other, ty.clone()) };
                if pty.rank() > self.cfg.max_order {
                    return self.leaf(env, ty);
                }
                let p = self.term(env, &pty, n - 1);
                if left {
                    Term::fst(p)
                } else {
                    Term::snd(p)
                }
            }
            Ctor::Eq => {
                let a = self.base_type();
                let (x, y) = self.split(n - 1);
                Term::eq(self.term(env, &a, x), self.term(env, &a, y))
            }
            Ctor::Leq | Ctor::Plus => {
                let (x, y) = self.split(n - 1);
                let (a, b) = (self.term(env, &Type::Rew, x), self.term(env, &Type::Rew, y));
                if c == Ctor::Leq {
                    Term::leq(a, b)
                } else {
                    Term::plus(a, b)
                }
            }
            Ctor::Oplus => {
                let (x, y) = self.split(n - 1);
                let p = self.prob();
                Term::oplus(p, self.term(env, &Type::Rew, x), self.term(env, &Type::Rew, y))
            }
            Ctor::Pair => {
                let Type::Prod(a, b) = ty else { unreachable!() };
                let (x, y) = self.split(n - 1);
                Term::pair(self.term(env, a, x), self.term(env, b, y))
            }
            Ctor::Lam => {
                let Type::Arrow(a, b) = ty else { unreachable!() };
                let x = self.fresh_var();
                env.push((name(&x), (**a).clone()));
                let body = self.term(env, b, n - 1);
                env.pop();
                Term::lam(&x, (**a).clone(), body)
            }
        }
    }

    fn leaf(&mut self, env: &mut Env, ty: &Type) -> Term {
        let xs = Self::vars_of(env, ty);
        if !xs.is_empty() && self.chance(1, 2) {
            return Term::Var(xs[self.rng.gen_range(0..xs.len())].clone());
        }
        self.value(env, ty)
    }

    fn value(&mut self, env: &mut Env, ty: &Type) -> Term {
        match ty {
            Type::Bool => Term::boolean(self.chance(1, 2)),
            Type::Rew => Term::rew(self.reward()),
            Type::Unit => Term::Star,
            Type::Base(_) => {
                let cs = self.carrier(ty).expect("declared base");
                Term::Const(cs[self.rng.gen_range(0..cs.len())].clone())
            }
            Type::Prod(a, b) => {
                let x = self.leaf(env, a);
                Term::pair(x, self.leaf(env, b))
            }
            Type::Arrow(a, b) => {
                let x = self.fresh_var();
                env.push((name(&x), (**a).clone()));
                let body = self.leaf(env, b);
                env.pop();
                Term::lam(&x, (**a).clone(), body)
            }
        }
    }

    // ------------------------------------------------------------ effect values

    /// A random effect value over `carrier` with at most `max_nodes` choice nodes.
    pub fn effect_value(&mut self, carrier: &[Const], max_nodes: usize) -> Eff {
        let budget = self.rng.gen_range(0..=max_nodes);
        self.effect(carrier, budget)
    }

    fn effect(&mut self, carrier: &[Const], nodes: usize) -> Eff {
        let leaf = |g: &mut Self| Eff::Val(Term::Const(carrier.choose(&mut g.rng).expect("nonempty").clone()));
        if nodes == 0 {
            let e = leaf(self);
            return if self.chance(1, 2) { Eff::reward(self.reward(), e) } else { e };
        }
        if self.chance(1, 4) {
            let r = self.reward();
            return Eff::reward(r, self.effect(carrier, nodes));
        }
        let left = self.rng.gen_range(0..nodes);
        let (a, b) = (self.effect(carrier, left), self.effect(carrier, nodes - 1 - left));
        if self.cfg.mode == Mode::Prob && self.chance(1, 2) {
            Eff::pchoice(self.prob(), a, b)
        } else {
            Eff::or(a, b)
        }
    }

    /// `E or E'` where `E'` renames the leaves of `E`: both branches get the same
    /// rewards under every strategy, so the left one must win.
    pub fn tied_effect_value(&mut self, carrier: &[Const], max_nodes: usize) -> Eff {
        let half = max_nodes.saturating_sub(1) / 2;
        let e = self.effect_value(carrier, half);
        let renamed = e.map_leaves(&mut |_| Term::Const(carrier.choose(&mut self.rng).expect("nonempty").clone()));
        Eff::or(e, renamed)
    }

    // ------------------------------------------------------------ continuations

    pub fn gamma(&mut self, ty: &Type) -> Result<GammaTable, GenError> {
        let cs = self.carrier(ty)?;
        Ok(cs.into_iter().map(|c| (c, self.reward())).collect())
    }

    /// `n` tables over the carrier of `ty`; the first is the zero table.
    pub fn gamma_batch(&mut self, ty: &Type, n: usize) -> Result<Vec<GammaTable>, GenError> {
        let cs = self.carrier(ty)?;
        let mut out = Vec::with_capacity(n);
        if n > 0 {
            out.push(cs.iter().map(|c| (c.clone(), int(0))).collect());
        }
        while out.len() < n {
            out.push(self.gamma(ty)?);
        }
        Ok(out)
    }

    // ------------------------------------------------------------ monad values

    fn weights(&mut self, n: usize) -> Vec<Prob> {
        let raw: Vec<i64> = (0..n).map(|_| self.rng.gen_range(1..=4)).collect();
        let total: i64 = raw.iter().sum();
        raw.into_iter().map(|w| rat(w, total)).collect()
    }

    fn pick<A: Clone>(&mut self, xs: &[A]) -> A {
        xs.choose(&mut self.rng).expect("nonempty").clone()
    }

    pub fn dist<A: Atom>(&mut self, carrier: &[A]) -> Dist<A> {
        let k = self.rng.gen_range(1..=carrier.len().min(3));
        let ws = self.weights(k);
        Dist::new(ws.into_iter().map(|w| (w, self.pick(carrier)))).expect("positive weights")
    }

    pub fn w_value<A: Atom>(&mut self, carrier: &[A]) -> WVal<A> {
        WVal { reward: self.reward(), value: self.pick(carrier) }
    }

    pub fn dw_value<A: Atom>(&mut self, carrier: &[A]) -> DWVal<A> {
        let k = self.rng.gen_range(1..=3);
        let ws = self.weights(k);
        Dist::new(ws.into_iter().map(|w| (w, (self.reward(), self.pick(carrier))))).expect("positive weights")
    }

    pub fn t2_value<A: Atom>(&mut self, carrier: &[A]) -> T2Val<A> {
        let dist = self.dist(carrier);
        let rew = dist.support().cloned().collect::<Vec<_>>().into_iter().map(|a| (a, self.reward())).collect();
        T2Val::new(dist, rew).expect("aligned")
    }

    pub fn t3_value<A: Atom>(&mut self, carrier: &[A]) -> T3Val<A> {
        T3Val { dist: self.dist(carrier), rew: self.reward() }
    }

    pub fn mr_value<A: Atom>(&mut self, carrier: &[A]) -> MRVal<A> {
        let k = self.rng.gen_range(1..=carrier.len().min(3));
        MRVal { map: (0..k).map(|_| (self.pick(carrier), self.reward())).collect() }
    }

    pub fn monad_value<A: Atom>(&mut self, kind: MonadKind, carrier: &[A]) -> Result<MonadValue<A>, GenError> {
        if carrier.is_empty() {
            return Err(GenError::EmptyCarrier);
        }
        Ok(match kind {
            MonadKind::W => MonadValue::W(self.w_value(carrier)),
            MonadKind::DW => MonadValue::DW(self.dw_value(carrier)),
            MonadKind::T2 => MonadValue::T2(self.t2_value(carrier)),
            MonadKind::T3 => MonadValue::T3(self.t3_value(carrier)),
        })
    }

    // ------------------------------------------------------------ axiom instances

    fn sub(&mut self, ty: &Type, size: usize) -> Term {
        let saved = std::mem::replace(&mut self.cfg.max_term_size, size);
        let t = self.program(ty).expect("base type within rank");
        self.cfg.max_term_size = saved;
        t
    }

    fn rew_lit(&mut self) -> Term {
        Term::rew(self.reward())
    }

    fn pr_parts(&mut self, bodies: &[(Prob, Term)]) -> PrForm {
        PrForm {
            parts: bodies
                .iter()
                .map(|(p, l)| {
                    let k = self.rng.gen_range(1..=2);
                    let qs = self.weights(k);
                    (p.clone(), l.clone(), qs.into_iter().map(|q| (q, self.reward())).collect())
                })
                .collect(),
        }
    }

    fn pr_bodies(&mut self, ty: &Type, constants: bool) -> Vec<(Prob, Term)> {
        let k = self.rng.gen_range(1..=2);
        let ws = self.weights(k);
        let cs = self.carrier(ty).expect("finite base type");
        ws.into_iter()
            .map(|w| {
                let l = if constants { Term::Const(self.pick(&cs)) } else { self.sub(ty, 6) };
                (w, l)
            })
            .collect()
    }

    /// Two expectation PR-forms over the same weighted bodies, ordered so that the
    /// first has the larger syntactic expectation iff `first_wins`.
    fn pr_pair(&mut self, ty: &Type, constants: bool, first_wins: bool) -> (PrForm, PrForm) {
        let bodies = self.pr_bodies(ty, constants);
        let (mut m, mut n) = (self.pr_parts(&bodies), self.pr_parts(&bodies));
        let (em, en) = (m.expectation(), n.expectation());
        if (em >= en) != first_wins {
            std::mem::swap(&mut m, &mut n);
        }
        if !first_wins && m.expectation() == n.expectation() {
            n.parts[0].2[0].1 += int(1);
        }
        (m, n)
    }

    /// A closed instance `(lhs, rhs)` of `axiom` at base type `ty`.
    pub fn axiom_instance(&mut self, axiom: Axiom, ty: &Type) -> Result<(Term, Term), EqError> {
        let size = 8;
        let lhs = match axiom {
            Axiom::OrAssoc => Term::or(Term::or(self.sub(ty, size), self.sub(ty, size)), self.sub(ty, size)),
            Axiom::OrIdem => {
                let m = self.sub(ty, size);
                Term::or(m.clone(), m)
            }
            Axiom::RewardZero => Term::reward(Term::rew(int(0)), self.sub(ty, size)),
            Axiom::RewardAction => {
                Term::reward(self.rew_lit(), Term::reward(self.rew_lit(), self.sub(ty, size)))
            }
            Axiom::RewardOr => Term::reward(self.rew_lit(), Term::or(self.sub(ty, size), self.sub(ty, size))),
            Axiom::IfReward => {
                let (x, y, m) = (self.rew_lit(), self.rew_lit(), self.sub(ty, size));
                Term::ite(Term::leq(y.clone(), x.clone()), Term::reward(x, m.clone()), Term::reward(y, m))
            }
            Axiom::IfRewardOr => {
                let (x, z, m, n) = (self.rew_lit(), self.rew_lit(), self.sub(ty, size), self.sub(ty, size));
                Term::ite(
                    Term::leq(z.clone(), x.clone()),
                    Term::or(Term::reward(x, m.clone()), n.clone()),
                    Term::or(n, Term::reward(z, m)),
                )
            }
            Axiom::R1 => {
                let m = self.sub(ty, size);
                Term::or(Term::reward(self.rew_lit(), m.clone()), Term::reward(self.rew_lit(), m))
            }
            Axiom::R2 | Axiom::R3 => {
                let (mut c, mut c2) = (self.reward(), self.reward());
                if (c >= c2) != (axiom == Axiom::R2) {
                    std::mem::swap(&mut c, &mut c2);
                }
                if axiom == Axiom::R3 && c == c2 {
                    c2 += int(1);
                }
                let (m, n) = (self.sub(ty, size), self.sub(ty, size));
                Term::or(Term::or(Term::reward(Term::rew(c), m.clone()), n), Term::reward(Term::rew(c2), m))
            }
            Axiom::PChoiceOne => Term::pchoice(int(1), self.sub(ty, size), self.sub(ty, size)),
            Axiom::PChoiceComm => Term::pchoice(self.prob(), self.sub(ty, size), self.sub(ty, size)),
            Axiom::PChoiceAssoc => {
                let inner = Term::pchoice(self.prob(), self.sub(ty, size), self.sub(ty, size));
                Term::pchoice(self.prob(), inner, self.sub(ty, size))
            }
            Axiom::RewardPChoice => {
                let p = self.prob();
                Term::reward(self.rew_lit(), Term::pchoice(p, self.sub(ty, size), self.sub(ty, size)))
            }
            Axiom::PChoiceOr => {
                let p = self.prob();
                Term::pchoice(p, self.sub(ty, size), Term::or(self.sub(ty, size), self.sub(ty, size)))
            }
            Axiom::GatherT2 => {
                let (p, m) = (self.prob(), self.sub(ty, size));
                Term::pchoice(p, Term::reward(self.rew_lit(), m.clone()), Term::reward(self.rew_lit(), m))
            }
            Axiom::GatherT3 => {
                let p = self.prob();
                let (m, n) = (self.sub(ty, size), self.sub(ty, size));
                Term::pchoice(p, Term::reward(self.rew_lit(), m), Term::reward(self.rew_lit(), n))
            }
            Axiom::IfExpect | Axiom::IfExpectOr => {
                let first = self.chance(1, 2);
                let (m, n) = self.pr_pair(ty, false, first);
                let cond = Term::leq(n.expectation_term(), m.expectation_term());
                if axiom == Axiom::IfExpect {
                    Term::ite(cond, m.to_term(), n.to_term())
                } else {
                    let p = self.sub(ty, size);
                    Term::ite(cond, Term::or(m.to_term(), p.clone()), Term::or(p, n.to_term()))
                }
            }
            Axiom::PR1 | Axiom::PR2 => {
                let (m, n) = self.pr_pair(ty, true, axiom == Axiom::PR1);
                Term::or(m.to_term(), n.to_term())
            }
            Axiom::PR3 | Axiom::PR4 => {
                let (m, n) = self.pr_pair(ty, true, axiom == Axiom::PR3);
                let l = self.sub(ty, size);
                Term::or(Term::or(m.to_term(), l), n.to_term())
            }
        };
        let rhs = axiom.rewrite(&lhs)?;
        Ok((lhs, rhs))
    }
}

/// A program of `target_type` from a fresh generator seeded by `cfg`.
pub fn gen_program(cfg: &GenConfig, target_type: &Type) -> Result<Term, GenError> {
    Generator::new(cfg.clone())?.program(target_type)
}

/// A batch of `n` continuations over `base_type`, the zero table first.
pub fn gen_gamma(cfg: &GenConfig, base_type: &Type, n: usize) -> Result<Vec<GammaTable>, GenError> {
    Generator::new(cfg.clone())?.gamma_batch(base_type, n)
}

pub fn gen_monad_value<A: Atom>(cfg: &GenConfig, kind: MonadKind, carrier: &[A]) -> Result<MonadValue<A>, GenError> {
    Generator::new(cfg.clone())?.monad_value(kind, carrier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operational::eval_effect;
    use crate::syntax::{parse_program, typecheck};

    fn has_effect_op(t: &Term) -> bool {
        matches!(t, Term::Op(..)) || t.children().into_iter().any(has_effect_op)
    }

    #[test]
    fn size_one_bool_is_a_constant() {
        let cfg = GenConfig::new(1, Mode::Rewards).with_size(1);
        let t = gen_program(&cfg, &Type::Bool).unwrap();
        assert!(t.as_const().is_some());
        assert_eq!(typecheck(&Signature::default(), Mode::Rewards, &[], &t).unwrap(), Type::Bool);
    }

    #[test]
    fn programs_typecheck_and_terminate() {
        let sig = parse_program("base C = {a, b, c}\na").unwrap().sig;
        for mode in [Mode::Rewards, Mode::Prob] {
            let mut g = Generator::with_signature(GenConfig::new(11, mode), sig.clone()).unwrap();
            let mut effectful = 0;
            for i in 0..300 {
                let ty = match i % 4 {
                    0 => Type::Bool,
                    1 => Type::Rew,
                    2 => Type::Base(name("C")),
                    _ => Type::prod(Type::Bool, Type::arrow(Type::Bool, Type::Rew)),
                };
                let t = g.program(&ty).unwrap();
                assert!(t.size() <= 40);
                assert_eq!(typecheck(&sig, mode, &[], &t).unwrap(), ty, "{}", crate::syntax::pretty(&t));
                eval_effect(&t).unwrap();
                if mode == Mode::Rewards {
                    assert!(!crate::syntax::pretty(&t).contains("+["));
                }
                effectful += has_effect_op(&t) as usize;
            }
            assert!(effectful * 10 >= 300 * 6, "{effectful}");
            for c in ["or", "reward", "if", "let", "app", "proj", "eq", "leq", "plus", "oplus", "pair", "lam", "var"] {
                assert!(g.coverage().get(c).copied().unwrap_or(0) > 0, "{c}");
            }
        }
    }

    #[test]
    fn rank_and_pool_checks() {
        let cfg = GenConfig { max_order: 0, ..GenConfig::default() };
        assert!(matches!(gen_program(&cfg, &Type::arrow(Type::Bool, Type::Bool)), Err(GenError::RankTooHigh { .. })));
        let cfg = GenConfig { reward_pool: vec![], ..GenConfig::default() };
        assert_eq!(Generator::new(cfg).err(), Some(GenError::EmptyPool));
    }

    #[test]
    fn gamma_batches_replay() {
        let cfg = GenConfig::new(7, Mode::Prob);
        let a = gen_gamma(&cfg, &Type::Bool, 4).unwrap();
        assert_eq!(a, gen_gamma(&cfg, &Type::Bool, 4).unwrap());
        assert!(a[0].values().all(|r| *r == int(0)));
        let pool = default_reward_pool();
        assert!(a.iter().flat_map(|t| t.values()).all(|r| pool.contains(r)));
        assert!(matches!(
            gen_gamma(&cfg, &Type::arrow(Type::Bool, Type::Bool), 2),
            Err(GenError::InfiniteCarrier(_))
        ));
    }

    #[test]
    fn monad_values_respect_invariants() {
        let cfg = GenConfig::new(3, Mode::Prob);
        let carrier = ["a", "b"];
        let v = gen_monad_value(&cfg, MonadKind::DW, &carrier).unwrap();
        assert_eq!(v, gen_monad_value(&cfg, MonadKind::DW, &carrier).unwrap());
        let MonadValue::DW(d) = v else { panic!() };
        assert_eq!(d.iter().map(|(_, p)| p.clone()).sum::<Prob>(), int(1));
        let mut g = Generator::new(cfg).unwrap();
        for _ in 0..50 {
            let t = g.t2_value(&carrier);
            assert!(t.rew.keys().eq(t.dist.support()));
        }
    }

    #[test]
    fn tied_effects_have_equal_branches() {
        let mut g = Generator::new(GenConfig::new(5, Mode::Prob)).unwrap();
        for _ in 0..20 {
            let e = g.tied_effect_value(&[Const::TT, Const::FF], 12);
            assert!(e.choice_nodes() <= 12);
            let Eff::Or(a, b) = &e else { panic!() };
            let (oa, ob) = (crate::strategies::select_fast(a), crate::strategies::select_fast(b));
            assert_eq!(crate::monads::expect0(&oa), crate::monads::expect0(&ob));
            assert_eq!(crate::strategies::select_fast(&e), oa);
        }
    }

    #[test]
    fn axiom_instances_rewrite() {
        let mut g = Generator::new(GenConfig::new(9, Mode::Prob)).unwrap();
        for ax in Axiom::ALL {
            for _ in 0..5 {
                let (l, r) = g.axiom_instance(ax, &Type::Bool).unwrap();
                assert_ne!(l, r, "{ax}");
            }
        }
    }
}
