//! The Hopf algebra of permutations and its descent subalgebra.
//!
//! Permutations of degree n are stored in one-line notation over
//! `1..=n`; the empty permutation is the algebra unit. The product of
//! two permutations of degrees n and m is the signed-free sum over the
//! `C(n+m, n)` ways of choosing which values of `1..=n+m` standardize to
//! the left factor; the coproduct splits a permutation at every value
//! threshold and standardizes both legs.

mod lie;
mod solomon;

pub use lie::{lie_basis_coeffs, lie_expand, LieMonomial};
pub use solomon::{
    bch_element, bch_element_subset_form, descent_generator_product, solomon_d, solomon_d_eq,
    DescentSet,
};

use std::fmt;

use itertools::Itertools;

use crate::algebra::{BasisElem, LinComb, Pair, ParseBasis};
use crate::error::{Error, Result};

/// A permutation in one-line notation; `values[i]` is the image of `i+1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n || seen[(v - 1) as usize] {
                return Err(Error::MalformedInput(format!(
                    "not a permutation of 1..={n}: {values:?}"
                )));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(Permutation { values })
    }

    pub fn empty() -> Self {
        Permutation { values: vec![] }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let n = self.degree();
        let mut inv = vec![0u32; n];
        for (i, &v) in self.values.iter().enumerate() {
            inv[(v - 1) as usize] = (i + 1) as u32;
        }
        Permutation { values: inv }
    }

    /// Positions `i` with `sigma(i) > sigma(i+1)`.
    pub fn descent_positions(&self) -> Vec<usize> {
        (1..self.degree())
            .filter(|&i| self.values[i - 1] > self.values[i])
            .collect()
    }

    pub fn descent_set(&self) -> DescentSet {
        DescentSet::new(self.degree(), self.descent_positions().into_iter().collect())
            .expect("descents are always inside 1..n-1")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.values.iter().join(","))
    }
}

impl BasisElem for Permutation {
    fn encode(&self) -> String {
        self.to_string()
    }
    fn degree(&self) -> usize {
        self.degree()
    }
}

impl ParseBasis for Permutation {
    fn parse_encoded(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::MalformedInput(format!("bad permutation literal {s}")))?;
        if inner.trim().is_empty() {
            return Ok(Permutation::empty());
        }
        let values: std::result::Result<Vec<u32>, _> =
            inner.split(',').map(|t| t.trim().parse()).collect();
        match values {
            Ok(v) => Permutation::new(v),
            Err(_) => Err(Error::MalformedInput(format!("bad permutation literal {s}"))),
        }
    }
}

/// Replaces a sequence of distinct integers by the permutation recording
/// the relative order of its entries.
pub fn standardize(seq: &[i64]) -> Result<Permutation> {
    let n = seq.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| seq[i]);
    for w in idx.windows(2) {
        if seq[w[0]] == seq[w[1]] {
            return Err(Error::MalformedInput(format!(
                "duplicate entry {} in standardization input",
                seq[w[0]]
            )));
        }
    }
    let mut values = vec![0u32; n];
    for (rank, &i) in idx.iter().enumerate() {
        values[i] = (rank + 1) as u32;
    }
    Ok(Permutation { values })
}

/// All permutations of degree n in lexicographic one-line order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    if n == 0 {
        return vec![Permutation::empty()];
    }
    (1..=n as u32)
        .permutations(n)
        .map(|values| Permutation { values })
        .collect()
}

/// Given the set of values for the left block (sorted ascending) and its
/// complement for the right block, realizes the unique concatenation whose
/// halves standardize to `sigma` and `beta`.
fn assemble(sigma: &Permutation, beta: &Permutation, left_vals: &[u32], right_vals: &[u32]) -> Permutation {
    let mut values = Vec::with_capacity(sigma.degree() + beta.degree());
    for i in 1..=sigma.degree() {
        values.push(left_vals[(sigma.apply(i) - 1) as usize]);
    }
    for j in 1..=beta.degree() {
        values.push(right_vals[(beta.apply(j) - 1) as usize]);
    }
    Permutation { values }
}

/// Product of the permutation algebra: the sum of all ways to interleave
/// the values of the two factors while preserving their relative orders.
pub fn mr_product(sigma: &Permutation, beta: &Permutation) -> LinComb<Permutation> {
    let n = sigma.degree();
    let m = beta.degree();
    let mut out = LinComb::zero();
    for left in (1..=(n + m) as u32).combinations(n) {
        let mut in_left = vec![false; n + m];
        for &v in &left {
            in_left[(v - 1) as usize] = true;
        }
        let right: Vec<u32> = (1..=(n + m) as u32)
            .filter(|&v| !in_left[(v - 1) as usize])
            .collect();
        out.add_term(assemble(sigma, beta, &left, &right), crate::algebra::rat_int(1));
    }
    out
}

fn require_nonempty(sigma: &Permutation, beta: &Permutation, op: &str) -> Result<()> {
    if sigma.degree() == 0 || beta.degree() == 0 {
        return Err(Error::MalformedInput(format!(
            "{op} requires both arguments nonempty"
        )));
    }
    Ok(())
}

/// Left half-shuffle: the part of the product where the maximal letter
/// `n+m` sits at the position of the maximal letter of the left factor.
pub fn half_shuffle_left(sigma: &Permutation, beta: &Permutation) -> Result<LinComb<Permutation>> {
    require_nonempty(sigma, beta, "left half-shuffle")?;
    let n = sigma.degree();
    let m = beta.degree();
    let top = (n + m) as u32;
    let mut out = LinComb::zero();
    for mut left in (1..top).combinations(n - 1) {
        left.push(top);
        let mut in_left = vec![false; n + m];
        for &v in &left {
            in_left[(v - 1) as usize] = true;
        }
        let right: Vec<u32> = (1..=top).filter(|&v| !in_left[(v - 1) as usize]).collect();
        out.add_term(assemble(sigma, beta, &left, &right), crate::algebra::rat_int(1));
    }
    Ok(out)
}

/// Right half-shuffle: the complementary part, where `n+m` sits at the
/// position of the maximal letter of the right factor.
pub fn half_shuffle_right(sigma: &Permutation, beta: &Permutation) -> Result<LinComb<Permutation>> {
    require_nonempty(sigma, beta, "right half-shuffle")?;
    let n = sigma.degree();
    let m = beta.degree();
    let top = (n + m) as u32;
    let mut out = LinComb::zero();
    for left in (1..top).combinations(n) {
        let mut in_left = vec![false; n + m];
        for &v in &left {
            in_left[(v - 1) as usize] = true;
        }
        let right: Vec<u32> = (1..=top).filter(|&v| !in_left[(v - 1) as usize]).collect();
        out.add_term(assemble(sigma, beta, &left, &right), crate::algebra::rat_int(1));
    }
    Ok(out)
}

/// Insertion product: interleaves `alpha` and `beta` around a fixed
/// middle letter; the result lives in degree `n+m+1` with the letter
/// `n+1` pinned at position `n+1`.
pub fn insertion_product(alpha: &Permutation, beta: &Permutation) -> LinComb<Permutation> {
    let n = alpha.degree();
    let m = beta.degree();
    let total = (n + m + 1) as u32;
    let pinned = (n + 1) as u32;
    let pool: Vec<u32> = (1..=total).filter(|&v| v != pinned).collect();
    let mut out = LinComb::zero();
    for left in pool.iter().copied().combinations(n) {
        let mut used = vec![false; (total + 1) as usize];
        for &v in &left {
            used[v as usize] = true;
        }
        let right: Vec<u32> = pool.iter().copied().filter(|&v| !used[v as usize]).collect();
        let mut values = Vec::with_capacity(n + m + 1);
        for i in 1..=n {
            values.push(left[(alpha.apply(i) - 1) as usize]);
        }
        values.push(pinned);
        for j in 1..=m {
            values.push(right[(beta.apply(j) - 1) as usize]);
        }
        out.add_term(Permutation { values }, crate::algebra::rat_int(1));
    }
    out
}

/// Coproduct: splits at every value threshold `i`, keeping the
/// subsequence of values `<= i` on the left leg and standardizing the
/// rest on the right leg.
pub fn mr_coproduct(sigma: &Permutation) -> LinComb<Pair<Permutation>> {
    let n = sigma.degree();
    let mut out = LinComb::zero();
    for i in 0..=n {
        let low: Vec<u32> = sigma.values.iter().copied().filter(|&v| v <= i as u32).collect();
        let high: Vec<u32> = sigma
            .values
            .iter()
            .copied()
            .filter(|&v| v > i as u32)
            .map(|v| v - i as u32)
            .collect();
        out.add_term(
            Pair(Permutation { values: low }, Permutation { values: high }),
            crate::algebra::rat_int(1),
        );
    }
    out
}
