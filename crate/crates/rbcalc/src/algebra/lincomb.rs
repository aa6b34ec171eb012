//! Formal linear combinations over an ordered basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::rational::{rat_latex, rat_str, Rational};

/// A basis element of a graded combinatorial family.
///
/// `encode` must be injective on the family; serialization sorts terms by
/// this string so reports are byte-stable across runs.
pub trait BasisElem: Clone + Ord + fmt::Debug {
    fn encode(&self) -> String;
    fn degree(&self) -> usize;
}

/// Ordered pair of basis elements, used for coproduct values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair<B>(pub B, pub B);

impl<B: BasisElem> BasisElem for Pair<B> {
    fn encode(&self) -> String {
        format!("{}⊗{}", self.0.encode(), self.1.encode())
    }
    fn degree(&self) -> usize {
        self.0.degree() + self.1.degree()
    }
}

/// Ordered triple of basis elements, used for coassociativity checks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple<B>(pub B, pub B, pub B);

impl<B: BasisElem> BasisElem for Triple<B> {
    fn encode(&self) -> String {
        format!(
            "{}⊗{}⊗{}",
            self.0.encode(),
            self.1.encode(),
            self.2.encode()
        )
    }
    fn degree(&self) -> usize {
        self.0.degree() + self.1.degree() + self.2.degree()
    }
}

/// Finitely supported rational linear combination of basis elements.
/// Zero coefficients are pruned eagerly, so structural equality is
/// semantic equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinComb<B: BasisElem> {
    terms: BTreeMap<B, Rational>,
}

impl<B: BasisElem> Default for LinComb<B> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<B: BasisElem> LinComb<B> {
    pub fn zero() -> Self {
        LinComb { terms: BTreeMap::new() }
    }

    pub fn basis(b: B) -> Self {
        let mut t = BTreeMap::new();
        t.insert(b, Rational::from_integer(1.into()));
        LinComb { terms: t }
    }

    pub fn term(b: B, c: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(b, c);
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, b: B, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in other.iter() {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in other.iter() {
            out.add_term(b.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect(),
        }
    }

    /// Applies a basis-level map linearly.
    pub fn map<C: BasisElem>(&self, mut f: impl FnMut(&B) -> LinComb<C>) -> LinComb<C> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            for (d, e) in f(b).iter() {
                out.add_term(d.clone(), e * c);
            }
        }
        out
    }

    /// True when every term has the same degree `d`.
    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.support().all(|b| b.degree() == d)
    }

    /// Largest degree present, or `None` if zero.
    pub fn max_degree(&self) -> Option<usize> {
        self.support().map(|b| b.degree()).max()
    }

    /// The part of the combination in a single degree.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        LinComb {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.degree() == d)
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms sorted by encoded basis string: the canonical emission order.
    pub fn sorted_terms(&self) -> Vec<(String, &B, &Rational)> {
        let mut v: Vec<(String, &B, &Rational)> =
            self.iter().map(|(b, c)| (b.encode(), b, c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Plain-text rendering, e.g. `1/2*(1,2) - 1/2*(2,1)`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (enc, _, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&rat_str(&mag));
            out.push('*');
            out.push_str(&enc);
        }
        out
    }

    /// LaTeX rendering in the same term order as `render`/JSON.
    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (enc, _, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&rat_latex(&mag));
            out.push_str("\\,");
            out.push_str(&enc.replace('⊗', " \\otimes "));
        }
        out
    }
}

impl<B: BasisElem> fmt::Display for LinComb<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Extends a product on basis elements bilinearly.
pub fn bilinear<A: BasisElem, B: BasisElem, C: BasisElem>(
    x: &LinComb<A>,
    y: &LinComb<B>,
    mut f: impl FnMut(&A, &B) -> LinComb<C>,
) -> LinComb<C> {
    let mut out = LinComb::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let cab = ca * cb;
            for (c, cc) in f(a, b).iter() {
                out.add_term(c.clone(), cc * &cab);
            }
        }
    }
    out
}

/// Componentwise product on tensor pairs induced by a product on each leg.
pub fn tensor_product<B: BasisElem>(
    x: &LinComb<Pair<B>>,
    y: &LinComb<Pair<B>>,
    mut f: impl FnMut(&B, &B) -> LinComb<B>,
) -> LinComb<Pair<B>> {
    bilinear(x, y, |a, b| {
        let left = f(&a.0, &b.0);
        let right = f(&a.1, &b.1);
        bilinear(&left, &right, |l, r| {
            LinComb::basis(Pair(l.clone(), r.clone()))
        })
    })
}

/// Swaps the two tensor legs.
pub fn tensor_flip<B: BasisElem>(x: &LinComb<Pair<B>>) -> LinComb<Pair<B>> {
    x.map(|p| LinComb::basis(Pair(p.1.clone(), p.0.clone())))
}
