//! Reward scalars and the ordered barycentric monoids they are drawn from.
//!
//! Everything is exact. The calculi themselves run over [`RewardStructure::AddRationals`];
//! the other two structures exist so the monoid laws, and the places where the
//! choice of structure matters, can be exercised directly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Rational = BigRational;
pub type Reward = Rational;
pub type Prob = Rational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `n` or `n/m` in lowest terms.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Accepts `n`, `-n` and `n/m`; the result is canonicalized.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let bad = || RationalParseError::Malformed(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let digits = |t: &str, allow_sign: bool| {
        let body = if allow_sign { t.strip_prefix('-').unwrap_or(t) } else { t };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        None => BigInt::one(),
        Some(d) if digits(d, false) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
    };
    if d.is_zero() {
        return Err(RationalParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

pub fn is_prob(p: &Prob) -> bool {
    !p.is_negative() && *p <= Rational::one()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewardError {
    #[error("probability {0} is outside [0,1]")]
    ProbOutOfRange(String),
    #[error("probability {0} must lie strictly between 0 and 1")]
    ProbNotInterior(String),
    #[error("{0} is not an element of the {1} reward structure")]
    NotInCarrier(String, RewardStructure),
    #[error("{0} is not below the monoid identity of {1}")]
    NotNegative(String, RewardStructure),
    #[error("no constructive witness for condition (C) is known for {0}")]
    ConditionUnknown(RewardStructure),
}

/// The three concrete ordered barycentric commutative monoids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RewardStructure {
    /// Rationals under addition.
    #[default]
    AddRationals,
    /// Nonnegative rationals under addition.
    NonNegAdd,
    /// Positive rationals under multiplication.
    MulPositiveRationals,
}

impl fmt::Display for RewardStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RewardStructure::AddRationals => "AddRationals",
            RewardStructure::NonNegAdd => "NonNegAdd",
            RewardStructure::MulPositiveRationals => "MulPositiveRationals",
        })
    }
}

impl RewardStructure {
    pub const ALL: [RewardStructure; 3] = [
        RewardStructure::AddRationals,
        RewardStructure::NonNegAdd,
        RewardStructure::MulPositiveRationals,
    ];

    pub fn contains(self, r: &Reward) -> bool {
        match self {
            RewardStructure::AddRationals => true,
            RewardStructure::NonNegAdd => !r.is_negative(),
            RewardStructure::MulPositiveRationals => r.is_positive(),
        }
    }

    /// Monoid identity.
    pub fn zero(self) -> Reward {
        match self {
            RewardStructure::MulPositiveRationals => Rational::one(),
            _ => Rational::zero(),
        }
    }

    /// Monoid operation.
    pub fn add(self, r: &Reward, s: &Reward) -> Reward {
        match self {
            RewardStructure::MulPositiveRationals => r * s,
            _ => r + s,
        }
    }

    pub fn leq(self, r: &Reward, s: &Reward) -> bool {
        r <= s
    }

    /// `r +_p s`, the usual convex combination in all three structures.
    pub fn convex(self, p: &Prob, r: &Reward, s: &Reward) -> Result<Reward, RewardError> {
        if !is_prob(p) {
            return Err(RewardError::ProbOutOfRange(fmt_rational(p)));
        }
        Ok(p * r + (Rational::one() - p) * s)
    }

    /// Returns `(l, r)` with `s + (r +_p l) > l`, given `0 < p < 1` and `s` below the identity.
    pub fn condition_c_witness(self, p: &Prob, s: &Reward) -> Result<(Reward, Reward), RewardError> {
        if !(p.is_positive() && *p < Rational::one()) {
            return Err(RewardError::ProbNotInterior(fmt_rational(p)));
        }
        match self {
            RewardStructure::AddRationals => {
                if !s.is_negative() {
                    return Err(RewardError::NotNegative(fmt_rational(s), self));
                }
                let l = Rational::zero();
                let r = (Rational::one() - s) / p;
                Ok((l, r))
            }
            RewardStructure::NonNegAdd => Err(if self.contains(s) {
                RewardError::NotNegative(fmt_rational(s), self)
            } else {
                RewardError::NotInCarrier(fmt_rational(s), self)
            }),
            RewardStructure::MulPositiveRationals => Err(RewardError::ConditionUnknown(self)),
        }
    }

    /// Randomized check of `(r + x) +_p (s + y) = ((r +_p s) + x) +_p ((r +_p s) + y)`,
    /// the scalar form of the law a value-distribution-plus-scalar monad needs.
    pub fn satisfies_gather_law(self, trials: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..trials).all(|_| {
            let p = rat(rng.gen_range(1..8), 8);
            let [r, s, x, y] = [(); 4].map(|_| self.sample(&mut rng));
            let mix = |a: &Reward, b: &Reward| p.clone() * a + (Rational::one() - &p) * b;
            let rs = mix(&r, &s);
            let lhs = mix(&self.add(&r, &x), &self.add(&s, &y));
            let rhs = mix(&self.add(&rs, &x), &self.add(&rs, &y));
            lhs == rhs
        })
    }

    /// A small random element of the carrier.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> Reward {
        match self {
            RewardStructure::AddRationals => rat(rng.gen_range(-12..=12), rng.gen_range(1..=4)),
            RewardStructure::NonNegAdd => rat(rng.gen_range(0..=12), rng.gen_range(1..=4)),
            RewardStructure::MulPositiveRationals => rat(rng.gen_range(1..=12), rng.gen_range(1..=4)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ADD: RewardStructure = RewardStructure::AddRationals;
    const MUL: RewardStructure = RewardStructure::MulPositiveRationals;

    #[test]
    fn addition_examples() {
        assert_eq!(ADD.add(&int(0), &rat(7, 2)), rat(7, 2));
        assert_eq!(ADD.add(&rat(1, 2), &rat(1, 3)), rat(5, 6));
        assert_eq!(MUL.add(&int(2), &int(3)), int(6));
    }

    #[test]
    fn order_examples() {
        assert!(ADD.leq(&int(5), &int(6)));
        assert!(!ADD.leq(&int(6), &int(5)));
        assert!(ADD.leq(&rat(-3, 7), &rat(-3, 7)));
    }

    #[test]
    fn convex_examples() {
        assert_eq!(ADD.convex(&int(1), &int(9), &int(-4)).unwrap(), int(9));
        assert_eq!(ADD.convex(&rat(1, 2), &int(5), &int(6)).unwrap(), rat(11, 2));
        assert_eq!(ADD.convex(&rat(2, 5), &int(2), &int(3)).unwrap(), rat(13, 5));
        assert!(ADD.convex(&rat(3, 2), &int(2), &int(3)).is_err());
        assert!(ADD.convex(&rat(-1, 2), &int(2), &int(3)).is_err());
    }

    #[test]
    fn witness_examples() {
        let (l, r) = ADD.condition_c_witness(&rat(1, 2), &int(-1)).unwrap();
        assert_eq!((l.clone(), r.clone()), (int(0), int(4)));
        assert!(int(-1) + ADD.convex(&rat(1, 2), &r, &l).unwrap() > l);
        let (l, r) = ADD.condition_c_witness(&rat(1, 4), &int(-3)).unwrap();
        assert_eq!((l.clone(), r.clone()), (int(0), int(16)));
        assert_eq!(int(-3) + ADD.convex(&rat(1, 4), &r, &l).unwrap(), int(1));
        assert!(MUL.condition_c_witness(&rat(1, 2), &rat(1, 2)).is_err());
        assert!(ADD.condition_c_witness(&int(1), &int(-1)).is_err());
        assert!(ADD.condition_c_witness(&rat(1, 2), &int(1)).is_err());
    }

    #[test]
    fn gather_law_separates_structures() {
        assert!(ADD.satisfies_gather_law(1000, 14));
        assert!(RewardStructure::NonNegAdd.satisfies_gather_law(1000, 14));
        assert!(!MUL.satisfies_gather_law(1000, 14));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(fmt_rational(&rat(14, 8)), "7/4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
    }
}
