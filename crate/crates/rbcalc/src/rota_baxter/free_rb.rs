//! The free Rota-Baxter algebra on one generator, presented as
//! sequences over the free associative algebra on x1, x2, ... with the
//! pointwise product and the shifted prefix sum (weight -1).
//!
//! The iterates `R^(n)(x) = R(R^(n-1)(x) x)` land on the sums of
//! strictly increasing words (noncommutative elementary symmetric
//! functions) and generate a subalgebra isomorphic, as a Hopf algebra,
//! to the descent algebra of the permutation module via
//! `1_n -> R^(n)(x)`; `descent_transfer_residual` verifies the product
//! side of that correspondence against weak-descent word classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::carriers::NcPoly;
use super::instances::sample_rational;
use super::{self_check, RbAlgebra};
use crate::algebra::{rat_int, Rational};
use crate::error::{Error, Result};
use crate::permutations::{mr_product, Permutation};

/// Truncation caps: sequence length M and word degree N are
/// independent; products drop words above the degree cap and flag the
/// result as lossy, and identity checks consult the flag as a guard.
#[derive(Debug, Clone)]
pub struct FreeRb {
    length: usize,
    degree: usize,
}

/// A sequence of tensor-algebra polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeElem {
    entries: Vec<NcPoly>,
}

impl FreeElem {
    pub fn new(entries: Vec<NcPoly>) -> Self {
        FreeElem { entries }
    }

    pub fn entries(&self) -> &[NcPoly] {
        &self.entries
    }

    /// True when any truncation loss occurred while producing this
    /// element; equality comparisons on lossy elements are not
    /// conclusive.
    pub fn lossy(&self) -> bool {
        self.entries.iter().any(NcPoly::lossy)
    }
}

impl fmt::Display for FreeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FreeRb {
    pub fn new(length: usize, degree: usize) -> Self {
        assert!(length >= 1 && degree >= 1);
        let inst = FreeRb { length, degree };
        self_check(&inst, 100);
        inst
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn degree_cap(&self) -> usize {
        self.degree
    }

    /// The generator `x = (x_1, x_2, ..., x_M)`.
    pub fn generator(&self) -> FreeElem {
        FreeElem {
            entries: (1..=self.length).map(|i| NcPoly::letter(i as u32)).collect(),
        }
    }

    fn check_caps(&self, n: usize) -> Result<()> {
        if n > self.length || n > self.degree {
            return Err(Error::CutoffExceeded(format!(
                "degree {n} exceeds caps M={}, N={}",
                self.length, self.degree
            )));
        }
        Ok(())
    }

    /// `R^(n)(x)`: entry k is the sum over strictly increasing words
    /// `x_{i_1} ... x_{i_n}` with `i_1 < ... < i_n < k` (closed form of
    /// the n-th fixpoint iterate; the recursion `R(R^(n-1)(x) x)` is
    /// asserted against it in tests).
    pub fn nested_rb_power(&self, n: usize) -> Result<FreeElem> {
        self.check_caps(n)?;
        let mut entries = Vec::with_capacity(self.length);
        for k in 1..=self.length {
            let mut p = NcPoly::zero();
            if n == 0 {
                p = NcPoly::one();
            } else {
                for word in (1..k as u32).combinations(n) {
                    p.add_term(word, rat_int(1));
                }
            }
            entries.push(p);
        }
        Ok(FreeElem { entries })
    }

    /// `R(x^n)`: entry k is the power sum `sum_{i<k} x_i^n`.
    pub fn rb_power(&self, n: usize) -> Result<FreeElem> {
        if n > self.degree {
            return Err(Error::CutoffExceeded(format!(
                "degree {n} exceeds cap N={}",
                self.degree
            )));
        }
        let mut entries = Vec::with_capacity(self.length);
        for k in 1..=self.length {
            let mut p = NcPoly::zero();
            for i in 1..k as u32 {
                p.add_term(vec![i; n], rat_int(1));
            }
            entries.push(p);
        }
        Ok(FreeElem { entries })
    }

    /// The weak-descent word class for a descent set `S` inside
    /// `{1..n-1}`: entry k sums the words `x_{i_1} ... x_{i_n}` with
    /// `i_j < k` and `i_j >= i_{j+1}` exactly when `j` is in `S`
    /// (strict increase elsewhere). The empty set recovers
    /// `nested_rb_power(n)`.
    pub fn weak_descent_class(&self, n: usize, descents: &BTreeSet<usize>) -> Result<FreeElem> {
        self.check_caps(n)?;
        if descents.iter().any(|&j| j == 0 || j >= n) {
            return Err(Error::MalformedInput(format!(
                "descent positions must lie in 1..{n}"
            )));
        }
        let mut entries = Vec::with_capacity(self.length);
        for k in 1..=self.length {
            let mut p = NcPoly::zero();
            let mut word = Vec::with_capacity(n);
            enumerate_weak_descent_words(k as u32, n, descents, &mut word, &mut p);
            entries.push(p);
        }
        Ok(FreeElem { entries })
    }
}

fn enumerate_weak_descent_words(
    bound: u32,
    n: usize,
    descents: &BTreeSet<usize>,
    word: &mut Vec<u32>,
    out: &mut NcPoly,
) {
    if word.len() == n {
        out.add_term(word.clone(), rat_int(1));
        return;
    }
    for i in 1..bound {
        if let Some(&last) = word.last() {
            let pos = word.len();
            let ok = if descents.contains(&pos) { last >= i } else { last < i };
            if !ok {
                continue;
            }
        }
        word.push(i);
        enumerate_weak_descent_words(bound, n, descents, word, out);
        word.pop();
    }
}

impl RbAlgebra for FreeRb {
    type Elem = FreeElem;

    fn name(&self) -> String {
        format!("free-rota-baxter(M={}, N={})", self.length, self.degree)
    }

    fn weight(&self) -> Rational {
        rat_int(-1)
    }

    fn is_commutative(&self) -> bool {
        false
    }

    fn zero(&self) -> FreeElem {
        FreeElem { entries: vec![NcPoly::zero(); self.length] }
    }

    fn one(&self) -> Option<FreeElem> {
        Some(FreeElem { entries: vec![NcPoly::one(); self.length] })
    }

    fn add(&self, x: &FreeElem, y: &FreeElem) -> FreeElem {
        FreeElem {
            entries: x.entries.iter().zip(&y.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    fn neg(&self, x: &FreeElem) -> FreeElem {
        FreeElem { entries: x.entries.iter().map(NcPoly::neg).collect() }
    }

    fn scale(&self, c: &Rational, x: &FreeElem) -> FreeElem {
        FreeElem { entries: x.entries.iter().map(|p| p.scale(c)).collect() }
    }

    fn mul(&self, x: &FreeElem, y: &FreeElem) -> FreeElem {
        FreeElem {
            entries: x
                .entries
                .iter()
                .zip(&y.entries)
                .map(|(a, b)| a.mul(b, self.degree))
                .collect(),
        }
    }

    fn rb(&self, x: &FreeElem) -> FreeElem {
        let mut entries = Vec::with_capacity(self.length);
        let mut acc = NcPoly::zero();
        for p in &x.entries {
            entries.push(acc.clone());
            acc = acc.add(p);
        }
        FreeElem { entries }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> FreeElem {
        let entries = (0..self.length)
            .map(|_| {
                let mut p = NcPoly::zero();
                for _ in 0..rng.gen_range(1..=2) {
                    let letter = rng.gen_range(1..=3u32);
                    p = p.add(&NcPoly::letter(letter).scale(&sample_rational(rng)));
                }
                p
            })
            .collect();
        FreeElem { entries }
    }
}

/// Residual of the descent-algebra transfer: the pointwise product
/// `R^(n)(x) R^(m)(x)` minus the image of the permutation-module
/// product of identity permutations `1_n * 1_m`, where a permutation
/// class with descent set S maps to the weak-descent word class E_S.
/// Zero exactly realizes the product side of the Hopf isomorphism.
pub fn descent_transfer_residual(inst: &FreeRb, n: usize, m: usize) -> Result<FreeElem> {
    if n == 0 || m == 0 {
        return Err(Error::MalformedInput("degrees must be positive".into()));
    }
    inst.check_caps(n + m)?;
    let lhs = inst.mul(&inst.nested_rb_power(n)?, &inst.nested_rb_power(m)?);
    if lhs.lossy() {
        return Err(Error::CutoffExceeded(
            "word-degree cap too small for the requested product".into(),
        ));
    }
    let product = mr_product(&Permutation::identity(n), &Permutation::identity(m));
    let mut classes: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (sigma, c) in product.iter() {
        let key = sigma.descent_positions();
        if let Some(prev) = classes.get(&key) {
            if prev != c {
                return Err(Error::MalformedInput(
                    "product of identities is not constant on descent classes".into(),
                ));
            }
        } else {
            classes.insert(key, c.clone());
        }
    }
    let mut rhs = inst.zero();
    for (positions, c) in classes {
        let descents: BTreeSet<usize> = positions.into_iter().collect();
        let class = inst.weak_descent_class(n + m, &descents)?;
        rhs = inst.add(&rhs, &inst.scale(&c, &class));
    }
    Ok(inst.sub(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix_rank;

    #[test]
    fn first_iterate_is_the_prefix_sum() {
        let inst = FreeRb::new(5, 3);
        let r1 = inst.nested_rb_power(1).unwrap();
        assert_eq!(r1, inst.rb(&inst.generator()));
        // entry k = x_1 + ... + x_{k-1}
        let e3 = &r1.entries()[2];
        let mut expected = NcPoly::letter(1);
        expected = expected.add(&NcPoly::letter(2));
        assert_eq!(e3, &expected);
    }

    #[test]
    fn second_iterate_lists_increasing_pairs_in_order() {
        let inst = FreeRb::new(5, 3);
        let r2 = inst.nested_rb_power(2).unwrap();
        let e4 = &r2.entries()[3];
        let mut expected = NcPoly::zero();
        for (i, j) in [(1u32, 2u32), (1, 3), (2, 3)] {
            expected.add_term(vec![i, j], rat_int(1));
        }
        assert_eq!(e4, &expected);
    }

    #[test]
    fn nested_powers_satisfy_the_fixpoint_recursion() {
        let inst = FreeRb::new(6, 4);
        let x = inst.generator();
        let mut prev = inst.one().unwrap();
        for n in 1..=4 {
            let next = inst.rb(&inst.mul(&prev, &x));
            assert!(!next.lossy());
            assert_eq!(next, inst.nested_rb_power(n).unwrap());
            prev = next;
        }
    }

    #[test]
    fn power_sums_match_definition() {
        let inst = FreeRb::new(4, 3);
        let x = inst.generator();
        let x2 = inst.mul(&x, &x);
        assert_eq!(inst.rb(&x2), inst.rb_power(2).unwrap());
    }

    #[test]
    fn caps_are_enforced() {
        let inst = FreeRb::new(4, 3);
        assert!(matches!(
            inst.nested_rb_power(4).unwrap_err(),
            Error::CutoffExceeded(_)
        ));
        assert!(matches!(inst.rb_power(5).unwrap_err(), Error::CutoffExceeded(_)));
    }

    #[test]
    fn empty_descent_class_is_the_nested_power() {
        let inst = FreeRb::new(5, 3);
        let empty = BTreeSet::new();
        assert_eq!(
            inst.weak_descent_class(3, &empty).unwrap(),
            inst.nested_rb_power(3).unwrap()
        );
    }

    #[test]
    fn descent_transfer_holds_up_to_degree_five() {
        for (n, m) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2), (1, 3), (3, 2), (4, 1)] {
            let total = n + m;
            let inst = FreeRb::new(total + 2, total);
            let residual = descent_transfer_residual(&inst, n, m).unwrap();
            assert!(
                inst.is_zero(&residual),
                "transfer fails for ({n}, {m}): {residual}"
            );
        }
    }

    #[test]
    fn generator_products_over_compositions_are_independent() {
        // products R^(c1)(x)...R^(cj)(x) over all compositions of d are
        // linearly independent: the generators are free.
        let inst = FreeRb::new(6, 4);
        for d in 1..=4usize {
            let mut compositions = vec![];
            fn build(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if rest == 0 {
                    out.push(prefix.clone());
                    return;
                }
                for part in 1..=rest {
                    prefix.push(part);
                    build(rest - part, prefix, out);
                    prefix.pop();
                }
            }
            build(d, &mut vec![], &mut compositions);
            let mut columns: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
            let mut rows_raw = vec![];
            for comp in &compositions {
                let mut value = inst.one().unwrap();
                for &part in comp {
                    value = inst.mul(&value, &inst.nested_rb_power(part).unwrap());
                }
                assert!(!value.lossy());
                for (slot, poly) in value.entries().iter().enumerate() {
                    for (word, _) in poly.terms() {
                        let key = (slot, word.clone());
                        let next = columns.len();
                        columns.entry(key).or_insert(next);
                    }
                }
                rows_raw.push(value);
            }
            let mut rows = vec![vec![rat_int(0); columns.len()]; compositions.len()];
            for (r, value) in rows_raw.iter().enumerate() {
                for (slot, poly) in value.entries().iter().enumerate() {
                    for (word, c) in poly.terms() {
                        rows[r][columns[&(slot, word.clone())]] = c.clone();
                    }
                }
            }
            assert_eq!(matrix_rank(rows), compositions.len());
        }
    }
}
