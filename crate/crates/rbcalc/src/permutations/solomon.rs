//! Solomon's descent subalgebra and the continuous BCH element.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::algebra::{binomial, rat_int, LinComb, Rational};
use crate::error::{Error, Result};
use crate::permutations::{all_permutations, mr_product, Permutation};

/// A subset of `{1, ..., n-1}` tagged with its ambient degree n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DescentSet {
    n: usize,
    positions: BTreeSet<usize>,
}

impl DescentSet {
    pub fn new(n: usize, positions: BTreeSet<usize>) -> Result<Self> {
        if positions.iter().any(|&i| i == 0 || i >= n) {
            return Err(Error::MalformedInput(format!(
                "descent positions {positions:?} escape 1..{}",
                n.saturating_sub(1)
            )));
        }
        Ok(DescentSet { n, positions })
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &BTreeSet<usize> {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains_all(&self, other: &BTreeSet<usize>) -> bool {
        other.is_subset(&self.positions)
    }
}

impl fmt::Display for DescentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}⊂[{}]", self.positions.iter().join(","), self.n)
    }
}

fn subsets(of: &[usize]) -> Vec<BTreeSet<usize>> {
    let mut out = vec![BTreeSet::new()];
    for &x in of {
        let mut extended: Vec<BTreeSet<usize>> = out
            .iter()
            .map(|s| {
                let mut t = s.clone();
                t.insert(x);
                t
            })
            .collect();
        out.append(&mut extended);
    }
    out
}

/// All subsets of `{1, ..., n-1}`.
pub fn all_descent_subsets(n: usize) -> Vec<BTreeSet<usize>> {
    let range: Vec<usize> = (1..n).collect();
    subsets(&range)
}

/// Sum of all degree-n permutations whose descent set is contained in `a`.
pub fn solomon_d(n: usize, a: &BTreeSet<usize>) -> Result<LinComb<Permutation>> {
    DescentSet::new(n, a.clone())?;
    let mut out = LinComb::zero();
    for sigma in all_permutations(n) {
        let d: BTreeSet<usize> = sigma.descent_positions().into_iter().collect();
        if d.is_subset(a) {
            out.add_term(sigma, rat_int(1));
        }
    }
    Ok(out)
}

/// Sum of all degree-n permutations whose descent set equals `a`.
pub fn solomon_d_eq(n: usize, a: &BTreeSet<usize>) -> Result<LinComb<Permutation>> {
    DescentSet::new(n, a.clone())?;
    let mut out = LinComb::zero();
    for sigma in all_permutations(n) {
        let d: BTreeSet<usize> = sigma.descent_positions().into_iter().collect();
        if &d == a {
            out.add_term(sigma, rat_int(1));
        }
    }
    Ok(out)
}

/// Product of identity permutations of degrees `parts`; by the descent
/// product rule this equals the subset-sum Solomon element at the partial
/// sums of `parts`, and the closed form is asserted against the iterated
/// product.
pub fn descent_generator_product(parts: &[usize]) -> Result<LinComb<Permutation>> {
    if parts.iter().any(|&p| p == 0) {
        return Err(Error::MalformedInput("zero part in descent word".into()));
    }
    let n: usize = parts.iter().sum();
    let mut acc = LinComb::basis(Permutation::empty());
    for &p in parts {
        let gen = LinComb::basis(Permutation::identity(p));
        acc = crate::algebra::bilinear(&acc, &gen, mr_product);
    }
    let mut partial = 0usize;
    let mut cut = BTreeSet::new();
    for &p in &parts[..parts.len().saturating_sub(1)] {
        partial += p;
        cut.insert(partial);
    }
    let closed = solomon_d(n, &cut)?;
    assert_eq!(acc, closed, "iterated identity product must match subset sum");
    Ok(acc)
}

/// Degree-n element of the continuous BCH series, as a combination of
/// permutations. Computed two ways and cross-asserted:
/// over subsets with coefficient `(-1)^|S| / (|S|+1)` on the subset-sum
/// elements, and over exact descent classes with coefficient
/// `(-1)^|S| / (n*binom(n-1,|S|))`.
pub fn bch_element(n: usize) -> Result<LinComb<Permutation>> {
    if n == 0 {
        return Err(Error::MalformedInput("BCH element needs degree >= 1".into()));
    }
    let subset_form = bch_element_subset_form(n)?;
    let mut class_form = LinComb::zero();
    for sigma in all_permutations(n) {
        let k = sigma.descent_positions().len();
        let sign = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        let coeff = sign / (rat_int(n as i64) * binomial(n - 1, k));
        class_form.add_term(sigma, coeff);
    }
    assert_eq!(
        subset_form, class_form,
        "subset and descent-class forms of the BCH element must agree"
    );
    Ok(class_form)
}

/// The subset-indexed form of the BCH element:
/// sum over S of `(-1)^|S|/(|S|+1)` times the subset-sum Solomon element.
pub fn bch_element_subset_form(n: usize) -> Result<LinComb<Permutation>> {
    if n == 0 {
        return Err(Error::MalformedInput("BCH element needs degree >= 1".into()));
    }
    let mut by_descents: std::collections::BTreeMap<BTreeSet<usize>, Vec<Permutation>> =
        Default::default();
    for sigma in all_permutations(n) {
        let d: BTreeSet<usize> = sigma.descent_positions().into_iter().collect();
        by_descents.entry(d).or_default().push(sigma);
    }
    let mut out = LinComb::zero();
    for s in all_descent_subsets(n) {
        let sign = if s.len() % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        let coeff: Rational = sign / rat_int(s.len() as i64 + 1);
        for (d, sigmas) in &by_descents {
            if d.is_subset(&s) {
                for sigma in sigmas {
                    out.add_term(sigma.clone(), coeff.clone());
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bilinear;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    fn p(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn degree_two_solomon_elements() {
        let d = solomon_d(2, &set(&[1])).unwrap();
        let mut expected = LinComb::zero();
        expected.add_term(p(&[1, 2]), rat_int(1));
        expected.add_term(p(&[2, 1]), rat_int(1));
        assert_eq!(d, expected);
        assert_eq!(
            solomon_d_eq(2, &set(&[1])).unwrap(),
            LinComb::basis(p(&[2, 1]))
        );
        assert!(solomon_d(2, &set(&[2])).is_err());
    }

    #[test]
    fn moebius_inversion_degree_four() {
        // D_A = sum of D_{=B} over B inside A, and its alternating inverse.
        let n = 4;
        for a in all_descent_subsets(n) {
            let direct = solomon_d(n, &a).unwrap();
            let mut from_classes = LinComb::zero();
            for b in subsets(&a.iter().copied().collect::<Vec<_>>()) {
                from_classes = from_classes.add(&solomon_d_eq(n, &b).unwrap());
            }
            assert_eq!(direct, from_classes);

            let exact = solomon_d_eq(n, &a).unwrap();
            let mut alternating = LinComb::zero();
            for b in subsets(&a.iter().copied().collect::<Vec<_>>()) {
                let sign = if (a.len() - b.len()) % 2 == 0 {
                    rat_int(1)
                } else {
                    rat_int(-1)
                };
                alternating = alternating.add(&solomon_d(n, &b).unwrap().scale(&sign));
            }
            assert_eq!(exact, alternating);
        }
    }

    #[test]
    fn identity_products_are_subset_sums() {
        // 1_2 * 1_1 * 1_2 picks out descents inside {2, 3} in degree 5.
        let prod = descent_generator_product(&[2, 1, 2]).unwrap();
        assert_eq!(prod, solomon_d(5, &set(&[2, 3])).unwrap());
        assert!(descent_generator_product(&[0, 1]).is_err());
    }

    #[test]
    fn descent_closure_under_product() {
        // D_S * D_T concentrates on S ∪ {n} ∪ (T+n).
        for n in 1..=3usize {
            for m in 1..=3usize {
                for s in all_descent_subsets(n) {
                    for t in all_descent_subsets(m) {
                        let lhs = bilinear(
                            &solomon_d(n, &s).unwrap(),
                            &solomon_d(m, &t).unwrap(),
                            mr_product,
                        );
                        let mut u = s.clone();
                        u.insert(n);
                        for &x in &t {
                            u.insert(x + n);
                        }
                        assert_eq!(lhs, solomon_d(n + m, &u).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn bch_degree_two() {
        let b = bch_element(2).unwrap();
        let mut expected = LinComb::zero();
        expected.add_term(p(&[1, 2]), crate::algebra::rat(1, 2));
        expected.add_term(p(&[2, 1]), crate::algebra::rat(-1, 2));
        assert_eq!(b, expected);
    }

    #[test]
    fn bch_degree_one_and_errors() {
        assert_eq!(bch_element(1).unwrap(), LinComb::basis(p(&[1])));
        assert!(bch_element(0).is_err());
    }
}
