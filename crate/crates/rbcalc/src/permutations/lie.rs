//! Right-nested Lie brackets and the Lie-element reconstruction basis.

use std::fmt;



use crate::algebra::{rat_int, LinComb, Rational};
use crate::error::{Error, Result};
use crate::permutations::{all_permutations, Permutation};

/// The right-nested bracket `[w1, [w2, [..., wn]...]]` on distinct
/// letters covering `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LieMonomial {
    word: Vec<u32>,
}

impl LieMonomial {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        Permutation::new(word.clone()).map_err(|_| {
            Error::MalformedInput(format!(
                "bracket letters must be distinct and cover 1..=n: {word:?}"
            ))
        })?;
        Ok(LieMonomial { word })
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }
}

impl fmt::Display for LieMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.len() == 1 {
            return write!(f, "{}", self.word[0]);
        }
        for &a in &self.word[..self.word.len() - 1] {
            write!(f, "[{a},")?;
        }
        write!(f, "{}", self.word[self.word.len() - 1])?;
        for _ in 1..self.word.len() {
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Expands the right-nested bracket into a signed sum of permutations,
/// using concatenation of disjoint words as the underlying product.
pub fn lie_expand(m: &LieMonomial) -> LinComb<Permutation> {
    fn expand_words(word: &[u32]) -> Vec<(Vec<u32>, Rational)> {
        if word.len() == 1 {
            return vec![(word.to_vec(), rat_int(1))];
        }
        let head = word[0];
        let tail = expand_words(&word[1..]);
        let mut out = Vec::with_capacity(tail.len() * 2);
        for (w, c) in tail {
            let mut left = Vec::with_capacity(w.len() + 1);
            left.push(head);
            left.extend_from_slice(&w);
            out.push((left, c.clone()));
            let mut right = w;
            right.push(head);
            out.push((right, -c));
        }
        out
    }
    let mut out = LinComb::zero();
    for (w, c) in expand_words(&m.word) {
        out.add_term(Permutation::new(w).expect("expansion permutes the letters"), c);
    }
    out
}

/// Writes a homogeneous degree-n element as a combination of the
/// right-nested brackets `[s(1), [..., [s(n-1), n]...]]` indexed by
/// permutations `s` of degree n-1: the coefficient of the bracket for `s`
/// is the coefficient in `x` of the permutation `(s(1),...,s(n-1),n)`.
/// Errors with `NotLie` when the reconstruction does not reproduce `x`.
pub fn lie_basis_coeffs(
    x: &LinComb<Permutation>,
) -> Result<Vec<(LieMonomial, Rational)>> {
    let Some(n) = x.max_degree() else {
        return Ok(Vec::new());
    };
    if !x.is_homogeneous(n) {
        return Err(Error::MalformedInput(
            "Lie basis extraction needs a homogeneous element".into(),
        ));
    }
    if n == 0 {
        return Err(Error::NotLie("degree-0 elements are not Lie".into()));
    }
    let mut coeffs = Vec::new();
    let mut reconstruction = LinComb::zero();
    for s in all_permutations(n - 1) {
        let mut word: Vec<u32> = s.values().to_vec();
        word.push(n as u32);
        let key = Permutation::new(word.clone()).expect("appending the top letter");
        let c = x.coeff(&key);
        if c != Rational::from_integer(0.into()) {
            let m = LieMonomial::new(word)?;
            reconstruction = reconstruction.add(&lie_expand(&m).scale(&c));
            coeffs.push((m, c));
        }
    }
    if &reconstruction != x {
        let diff = x.sub(&reconstruction);
        let witness = diff
            .sorted_terms()
            .first()
            .map(|(enc, _, c)| format!("{enc} off by {c}"))
            .unwrap_or_default();
        return Err(Error::NotLie(format!(
            "bracket reconstruction fails at degree {n}: {witness}"
        )));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bilinear;
    use crate::permutations::mr_product;

    fn p(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn bracket_two_one_three() {
        // [2,[1,3]] = [2, 13 - 31] = 213 - 231 - 132 + 312.
        let m = LieMonomial::new(vec![2, 1, 3]).unwrap();
        let mut expected = LinComb::zero();
        expected.add_term(p(&[2, 1, 3]), rat_int(1));
        expected.add_term(p(&[2, 3, 1]), rat_int(-1));
        expected.add_term(p(&[1, 3, 2]), rat_int(-1));
        expected.add_term(p(&[3, 1, 2]), rat_int(1));
        assert_eq!(lie_expand(&m), expected);
        assert_eq!(m.to_string(), "[2,[1,3]]");
    }

    #[test]
    fn bracket_expansions_are_primitive() {
        // Lie elements are exactly the primitives of the coproduct; this
        // pins down the sign/orientation of the expansion.
        use crate::algebra::Pair;
        use crate::permutations::mr_coproduct;
        for word in [vec![1, 2], vec![2, 1, 3], vec![1, 2, 3], vec![3, 1, 2, 4]] {
            let m = LieMonomial::new(word).unwrap();
            let x = lie_expand(&m);
            let n = m.degree();
            let cop = x.map(mr_coproduct);
            let mut primitive = x.map(|s| {
                LinComb::basis(Pair(s.clone(), Permutation::empty()))
            });
            primitive = primitive.add(&x.map(|s| {
                LinComb::basis(Pair(Permutation::empty(), s.clone()))
            }));
            assert_eq!(cop, primitive, "bracket of degree {n} is not primitive");
        }
    }

    #[test]
    fn single_letter() {
        let m = LieMonomial::new(vec![1]).unwrap();
        assert_eq!(lie_expand(&m), LinComb::basis(p(&[1])));
    }

    #[test]
    fn commutator_is_lie() {
        // [x1, x1*x1] in the algebra: commutator of (1) with (1,2)+(2,1).
        let one = LinComb::basis(p(&[1]));
        let sq = bilinear(&one, &one, mr_product);
        let xy = bilinear(&one, &sq, mr_product);
        let yx = bilinear(&sq, &one, mr_product);
        let bracket = xy.sub(&yx);
        let coeffs = lie_basis_coeffs(&bracket).unwrap();
        let back: LinComb<Permutation> = coeffs
            .iter()
            .fold(LinComb::zero(), |acc, (m, c)| acc.add(&lie_expand(m).scale(c)));
        assert_eq!(back, bracket);
    }

    #[test]
    fn non_lie_is_rejected() {
        let sym = bilinear(
            &LinComb::basis(p(&[1])),
            &LinComb::basis(p(&[1])),
            mr_product,
        );
        assert!(matches!(lie_basis_coeffs(&sym), Err(Error::NotLie(_))));
    }

    #[test]
    fn inhomogeneous_is_rejected() {
        let mut x = LinComb::basis(p(&[1]));
        x.add_term(p(&[1, 2]), rat_int(1));
        assert!(matches!(
            lie_basis_coeffs(&x),
            Err(Error::MalformedInput(_))
        ));
    }
}
