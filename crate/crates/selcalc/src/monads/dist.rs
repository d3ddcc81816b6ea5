use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::reward::{fmt_rational, Prob, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error("distribution has no atoms")]
    Empty,
    #[error("probability {0} is not positive")]
    NonPositive(String),
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(String),
}

/// A finite probability distribution with exact weights.
///
/// Atoms are kept sorted and merged, every weight is positive, and the weights
/// sum to exactly one, so structural equality is equality of distributions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dist<A: Ord> {
    atoms: BTreeMap<A, Prob>,
}

impl<A: Ord + Clone + Debug> Dist<A> {
    pub fn dirac(a: A) -> Self {
        Dist { atoms: BTreeMap::from([(a, Prob::one())]) }
    }

    /// Builds a distribution, merging repeated atoms and dropping zero weights.
    pub fn new(parts: impl IntoIterator<Item = (Prob, A)>) -> Result<Self, DistError> {
        let mut atoms: BTreeMap<A, Prob> = BTreeMap::new();
        for (p, a) in parts {
            if p.is_negative() {
                return Err(DistError::NonPositive(fmt_rational(&p)));
            }
            if p.is_zero() {
                continue;
            }
            *atoms.entry(a).or_insert_with(Prob::zero) += p;
        }
        if atoms.is_empty() {
            return Err(DistError::Empty);
        }
        let total: Prob = atoms.values().sum();
        if !total.is_one() {
            return Err(DistError::NotNormalized(fmt_rational(&total)));
        }
        Ok(Dist { atoms })
    }

    /// Like [`Dist::new`] for callers that guarantee normalization.
    pub(crate) fn from_parts(parts: impl IntoIterator<Item = (Prob, A)>) -> Self {
        Dist::new(parts).expect("weights form a distribution")
    }

    pub fn iter(&self) -> impl Iterator<Item = (&A, &Prob)> {
        self.atoms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &A> {
        self.atoms.keys()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn prob(&self, a: &A) -> Prob {
        self.atoms.get(a).cloned().unwrap_or_else(Prob::zero)
    }

    pub fn is_dirac(&self) -> Option<&A> {
        if self.atoms.len() == 1 {
            self.atoms.keys().next()
        } else {
            None
        }
    }

    pub fn map<B: Ord + Clone + Debug>(&self, mut f: impl FnMut(&A) -> B) -> Dist<B> {
        Dist::from_parts(self.atoms.iter().map(|(a, p)| (p.clone(), f(a))))
    }

    pub fn bind<B: Ord + Clone + Debug>(&self, mut f: impl FnMut(&A) -> Dist<B>) -> Dist<B> {
        Dist::mix(self.atoms.iter().map(|(a, p)| (p.clone(), f(a))).collect())
    }

    /// `sum_i p_i mu_i`; the weights must sum to one.
    pub fn mix(parts: Vec<(Prob, Dist<A>)>) -> Dist<A> {
        Dist::from_parts(
            parts
                .into_iter()
                .flat_map(|(p, d)| d.atoms.into_iter().map(move |(a, q)| (p.clone() * q, a))),
        )
    }

    /// `sum_a mu(a) f(a)`.
    pub fn expect(&self, mut f: impl FnMut(&A) -> Rational) -> Rational {
        self.atoms.iter().map(|(a, p)| p * f(a)).sum()
    }
}
