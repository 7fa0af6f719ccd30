//! Weight functions on vertex subsets: fractional colourings, their
//! aggregate functionals, and restriction to induced subgraphs.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{UnitGraph, VertexSet};
use crate::field::Rational;

/// Sparse map from vertex subsets to exact weights. Zero entries are never
/// stored, so two functions are equal iff they agree everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightFunction {
    values: BTreeMap<VertexSet, Rational>,
    /// Set when the function is known to cover every vertex exactly once.
    pub regular: bool,
}

impl WeightFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (VertexSet, Rational)>>(pairs: I) -> Self {
        let mut w = Self::new();
        for (s, v) in pairs {
            w.add(s, &v);
        }
        w
    }

    pub fn get(&self, s: VertexSet) -> Rational {
        self.values.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, s: VertexSet, v: Rational) {
        if v.is_zero() {
            self.values.remove(&s);
        } else {
            self.values.insert(s, v);
        }
    }

    pub fn add(&mut self, s: VertexSet, v: &Rational) {
        let cur = self.get(s);
        self.set(s, cur + v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexSet, &Rational)> {
        self.values.iter().map(|(s, v)| (*s, v))
    }

    pub fn support(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.values.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of all values; the weight of a colouring.
    pub fn total(&self) -> Rational {
        self.values
            .values()
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    /// Total weight on sets containing vertex `x`.
    pub fn coverage(&self, x: usize) -> Rational {
        self.iter()
            .filter(|(s, _)| s.contains(x))
            .fold(Rational::zero(), |acc, (_, v)| acc + v)
    }

    /// Nonnegative, supported on independent sets, and covering each vertex
    /// with weight at least one (exactly one if `regular`).
    pub fn is_fractional_colouring(&self, g: &UnitGraph) -> bool {
        let nonneg = self.values.values().all(|v| *v >= Rational::zero());
        let independent = self.support().all(|s| g.is_independent(s));
        let covers = (0..g.len()).all(|x| {
            let c = self.coverage(x);
            if self.regular {
                c.is_one()
            } else {
                c >= Rational::one()
            }
        });
        nonneg && independent && covers
    }

    /// Closure of the support under taking subsets (including the empty set).
    fn subset_closure(&self) -> BTreeSet<VertexSet> {
        let mut out = BTreeSet::new();
        for s in self.support() {
            out.extend(s.subsets());
        }
        out
    }
}

/// Aggregate functional: `γ̄(S) = Σ_{S' ⊇ S} γ(S')` for every `S` in the
/// subset closure of the support. `γ̄(∅)` is the weight of `γ`.
pub fn aggregate(gamma: &WeightFunction) -> WeightFunction {
    let mut out = WeightFunction::new();
    for s in gamma.subset_closure() {
        let total = gamma
            .iter()
            .filter(|(sup, _)| s.is_subset(*sup))
            .fold(Rational::zero(), |acc, (_, v)| acc + v);
        out.set(s, total);
    }
    out.regular = gamma.regular;
    out
}

/// Inverse of [`aggregate`] by inclusion-exclusion:
/// `γ(S) = Σ_{S' ⊇ S} γ̄(S') (−1)^{|S' ∖ S|}`.
pub fn deaggregate(agg: &WeightFunction) -> WeightFunction {
    let mut out = WeightFunction::new();
    for s in agg.subset_closure() {
        let mut total = Rational::zero();
        for (sup, v) in agg.iter() {
            if s.is_subset(sup) {
                if sup.difference(s).len() % 2 == 0 {
                    total += v;
                } else {
                    total -= v;
                }
            }
        }
        out.set(s, total);
    }
    out.regular = agg.regular;
    out
}

/// Colouring induced on the subgraph `h`: `γ_H(S) = Σ_{Y ⊆ G∖H} γ(S ∪ Y)`.
///
/// The result is indexed by the vertex indices of the original graph, with
/// support inside `h`.
pub fn restrict_colouring(gamma: &WeightFunction, h: VertexSet) -> WeightFunction {
    let mut out = WeightFunction::new();
    for (s, v) in gamma.iter() {
        out.add(s.intersection(h), v);
    }
    out.regular = gamma.regular;
    out
}
