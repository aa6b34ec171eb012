//! Words over a (possibly weighted) alphabet: shuffle and quasi-shuffle
//! products, their half-shuffle splittings, the pre-Lie product induced by
//! the half-shuffles, and the free one-generator basis evaluated in the
//! permutation model.

use std::fmt;

use crate::algebra::{bilinear, matrix_rank, BasisElem, LinComb, ParseBasis, Rational};
use crate::error::{Error, Result};
use crate::permutations::{all_permutations, half_shuffle_left, half_shuffle_right, Permutation};

/// A letter universe: either a finite set of opaque symbols (no letter
/// product), or the graded letters `z1, z2, ...` multiplying by index
/// addition. Carries the weight used by the quasi-shuffle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    kind: AlphabetKind,
    theta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum AlphabetKind {
    Symbols(Vec<String>),
    Harmonic,
}

impl Alphabet {
    /// Opaque symbols; shuffles only.
    pub fn symbols(names: &[&str], theta: Rational) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::MalformedInput("alphabet needs at least one letter".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in names {
            if n.is_empty() || n.contains(['(', ')', ',']) {
                return Err(Error::MalformedInput(format!("bad letter name {n:?}")));
            }
            if !seen.insert(n.to_string()) {
                return Err(Error::MalformedInput(format!("duplicate letter {n}")));
            }
        }
        Ok(Alphabet {
            kind: AlphabetKind::Symbols(names.iter().map(|s| s.to_string()).collect()),
            theta,
        })
    }

    /// Letters `z1, z2, ...` with product `zi • zj = z(i+j)`. The product
    /// is sanity-checked for associativity and commutativity on a sample
    /// of triples.
    pub fn harmonic(theta: Rational) -> Self {
        let a = Alphabet { kind: AlphabetKind::Harmonic, theta };
        for i in 1..=5u64 {
            for j in 1..=5u64 {
                let zi = format!("z{i}");
                let zj = format!("z{j}");
                assert_eq!(
                    a.letter_product(&zi, &zj).unwrap(),
                    a.letter_product(&zj, &zi).unwrap()
                );
                for k in 1..=5u64 {
                    let zk = format!("z{k}");
                    let left = a
                        .letter_product(&a.letter_product(&zi, &zj).unwrap(), &zk)
                        .unwrap();
                    let right = a
                        .letter_product(&zi, &a.letter_product(&zj, &zk).unwrap())
                        .unwrap();
                    assert_eq!(left, right);
                }
            }
        }
        a
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn has_letter_product(&self) -> bool {
        matches!(self.kind, AlphabetKind::Harmonic)
    }

    fn harmonic_index(name: &str) -> Result<u64> {
        name.strip_prefix('z')
            .and_then(|s| s.parse::<u64>().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| Error::MalformedInput(format!("not a graded letter: {name}")))
    }

    pub fn contains(&self, name: &str) -> bool {
        match &self.kind {
            AlphabetKind::Symbols(names) => names.iter().any(|n| n == name),
            AlphabetKind::Harmonic => Self::harmonic_index(name).is_ok(),
        }
    }

    pub fn letter_product(&self, a: &str, b: &str) -> Result<String> {
        match &self.kind {
            AlphabetKind::Symbols(_) => Err(Error::UnsupportedInstance(
                "this alphabet has no letter product".into(),
            )),
            AlphabetKind::Harmonic => {
                let i = Self::harmonic_index(a)?;
                let j = Self::harmonic_index(b)?;
                Ok(format!("z{}", i + j))
            }
        }
    }

    /// Builds a validated word over this alphabet.
    pub fn word(&self, letters: &[&str]) -> Result<Word> {
        for l in letters {
            if !self.contains(l) {
                return Err(Error::MalformedInput(format!("letter {l} not in alphabet")));
            }
        }
        Ok(Word {
            letters: letters.iter().map(|s| s.to_string()).collect(),
        })
    }
}

/// A finite sequence of letters; the empty word is the unit of the full
/// shuffle products but is rejected by the half-shuffles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<String>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: vec![] }
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn head(&self) -> &str {
        &self.letters[0]
    }

    fn tail(&self) -> Word {
        Word { letters: self.letters[1..].to_vec() }
    }

    fn cons(letter: &str, rest: &Word) -> Word {
        let mut letters = Vec::with_capacity(rest.letters.len() + 1);
        letters.push(letter.to_string());
        letters.extend(rest.letters.iter().cloned());
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.letters.join(","))
    }
}

impl BasisElem for Word {
    fn encode(&self) -> String {
        self.to_string()
    }
    /// Graded by word length.
    fn degree(&self) -> usize {
        self.letters.len()
    }
}

impl ParseBasis for Word {
    fn parse_encoded(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::MalformedInput(format!("not a word: {s}")))?;
        if inner.is_empty() {
            return Ok(Word::empty());
        }
        let letters: Vec<String> = inner.split(',').map(|l| l.to_string()).collect();
        if letters.iter().any(|l| l.is_empty()) {
            return Err(Error::MalformedInput(format!("empty letter in {s}")));
        }
        Ok(Word { letters })
    }
}

/// Interleavings of `u` and `v` preserving each side's internal order,
/// with multiplicity.
pub fn shuffle(u: &Word, v: &Word) -> LinComb<Word> {
    if u.is_empty() {
        return LinComb::basis(v.clone());
    }
    if v.is_empty() {
        return LinComb::basis(u.clone());
    }
    let mut out = shuffle(&u.tail(), v).map(|w| LinComb::basis(Word::cons(u.head(), w)));
    out = out.add(&shuffle(u, &v.tail()).map(|w| LinComb::basis(Word::cons(v.head(), w))));
    out
}

/// Weighted interleavings: each slot of the result takes a letter from one
/// side, or one letter from each side merged by the letter product with a
/// factor `-θ`.
pub fn quasi_shuffle(u: &Word, v: &Word, alphabet: &Alphabet) -> Result<LinComb<Word>> {
    if !alphabet.has_letter_product() {
        return Err(Error::UnsupportedInstance(
            "quasi-shuffle needs an alphabet with a letter product".into(),
        ));
    }
    fn rec(u: &Word, v: &Word, alphabet: &Alphabet) -> Result<LinComb<Word>> {
        if u.is_empty() {
            return Ok(LinComb::basis(v.clone()));
        }
        if v.is_empty() {
            return Ok(LinComb::basis(u.clone()));
        }
        let mut out = rec(&u.tail(), v, alphabet)?.map(|w| LinComb::basis(Word::cons(u.head(), w)));
        out = out.add(&rec(u, &v.tail(), alphabet)?.map(|w| LinComb::basis(Word::cons(v.head(), w))));
        let merged = alphabet.letter_product(u.head(), v.head())?;
        let inner = rec(&u.tail(), &v.tail(), alphabet)?;
        out = out.add(
            &inner
                .map(|w| LinComb::basis(Word::cons(&merged, w)))
                .scale(&-alphabet.theta().clone()),
        );
        Ok(out)
    }
    rec(u, v, alphabet)
}

/// Left half-shuffle: the interleavings whose first letter comes from `u`.
pub fn shuffle_left(u: &Word, v: &Word) -> Result<LinComb<Word>> {
    if u.is_empty() {
        return Err(Error::MalformedInput(
            "half-shuffle with an empty word is undefined".into(),
        ));
    }
    Ok(shuffle(&u.tail(), v).map(|w| LinComb::basis(Word::cons(u.head(), w))))
}

/// Right half-shuffle: the interleavings whose first letter comes from `v`.
pub fn shuffle_right(u: &Word, v: &Word) -> Result<LinComb<Word>> {
    if v.is_empty() {
        return Err(Error::MalformedInput(
            "half-shuffle with an empty word is undefined".into(),
        ));
    }
    Ok(shuffle(u, &v.tail()).map(|w| LinComb::basis(Word::cons(v.head(), w))))
}

/// Both half-shuffles `(u≺v, u≻v)`; their sum is the shuffle.
pub fn half_shuffles(u: &Word, v: &Word) -> Result<(LinComb<Word>, LinComb<Word>)> {
    Ok((shuffle_left(u, v)?, shuffle_right(u, v)?))
}

/// Quasi-shuffle half-products `(u≺v, u≻v, u⊙v)`; the full product is
/// `≺ + ≻ − θ⊙`.
pub fn quasi_half_shuffles(
    u: &Word,
    v: &Word,
    alphabet: &Alphabet,
) -> Result<(LinComb<Word>, LinComb<Word>, LinComb<Word>)> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::MalformedInput(
            "half-shuffle with an empty word is undefined".into(),
        ));
    }
    let left = quasi_shuffle(&u.tail(), v, alphabet)?
        .map(|w| LinComb::basis(Word::cons(u.head(), w)));
    let right = quasi_shuffle(u, &v.tail(), alphabet)?
        .map(|w| LinComb::basis(Word::cons(v.head(), w)));
    let merged_head = alphabet.letter_product(u.head(), v.head())?;
    let dot = quasi_shuffle(&u.tail(), &v.tail(), alphabet)?
        .map(|w| LinComb::basis(Word::cons(&merged_head, w)));
    Ok((left, right, dot))
}

/// The pre-Lie product `x ▷ y = x≻y − y≺x` induced by the half-shuffles,
/// extended bilinearly. Arguments must avoid the empty word.
pub fn shuffle_to_prelie(x: &LinComb<Word>, y: &LinComb<Word>) -> Result<LinComb<Word>> {
    for (w, _) in x.iter().chain(y.iter()) {
        if w.is_empty() {
            return Err(Error::MalformedInput(
                "pre-Lie product is undefined on the empty word".into(),
            ));
        }
    }
    let right = bilinear(x, y, |u, v| shuffle_right(u, v).unwrap());
    let left = bilinear(y, x, |u, v| shuffle_left(u, v).unwrap());
    Ok(right.sub(&left))
}

/// An expression of the one-generator half-shuffle grammar:
/// `x`, `y≻x`, `x≺z`, or `y≻x≺z` with `y`, `z` expressions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisExpr {
    X,
    Succ(Box<BasisExpr>),
    Prec(Box<BasisExpr>),
    Both(Box<BasisExpr>, Box<BasisExpr>),
}

impl BasisExpr {
    pub fn size(&self) -> usize {
        match self {
            BasisExpr::X => 1,
            BasisExpr::Succ(y) | BasisExpr::Prec(y) => 1 + y.size(),
            BasisExpr::Both(y, z) => 1 + y.size() + z.size(),
        }
    }

    /// Evaluation in the permutation model: `x` is the one-letter
    /// permutation, `a≺b` keeps the top letter on `a`'s maximum and `a≻b`
    /// on `b`'s maximum, so the grammar's central letter always carries the
    /// maximum.
    pub fn eval(&self) -> LinComb<Permutation> {
        let x = LinComb::basis(Permutation::identity(1));
        match self {
            BasisExpr::X => x,
            BasisExpr::Succ(y) => bilinear(&y.eval(), &x, |a, b| half_shuffle_right(a, b).unwrap()),
            BasisExpr::Prec(z) => {
                bilinear(&x, &z.eval(), |a, b| half_shuffle_left(a, b).unwrap())
            }
            BasisExpr::Both(y, z) => {
                let yx = BasisExpr::Succ(y.clone()).eval();
                bilinear(&yx, &z.eval(), |a, b| half_shuffle_left(a, b).unwrap())
            }
        }
    }
}

impl fmt::Display for BasisExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sub(e: &BasisExpr) -> String {
            match e {
                BasisExpr::X => "x".to_string(),
                other => format!("({other})"),
            }
        }
        match self {
            BasisExpr::X => write!(f, "x"),
            BasisExpr::Succ(y) => write!(f, "{}≻x", sub(y)),
            BasisExpr::Prec(z) => write!(f, "x≺{}", sub(z)),
            BasisExpr::Both(y, z) => write!(f, "{}≻x≺{}", sub(y), sub(z)),
        }
    }
}

/// All grammar expressions with `k` letters.
pub fn basis_expressions(k: usize) -> Vec<BasisExpr> {
    let mut by_size: Vec<Vec<BasisExpr>> = vec![vec![]];
    for n in 1..=k {
        let mut level = Vec::new();
        if n == 1 {
            level.push(BasisExpr::X);
        } else {
            for y in &by_size[n - 1] {
                level.push(BasisExpr::Succ(Box::new(y.clone())));
            }
            for z in &by_size[n - 1] {
                level.push(BasisExpr::Prec(Box::new(z.clone())));
            }
            for i in 1..=n - 2 {
                for y in &by_size[i] {
                    for z in &by_size[n - 1 - i] {
                        level.push(BasisExpr::Both(Box::new(y.clone()), Box::new(z.clone())));
                    }
                }
            }
        }
        by_size.push(level);
    }
    by_size.pop().unwrap()
}

/// The free one-generator basis at size `k`: the grammar expressions, their
/// evaluations in the permutation model, the evaluation matrix (rows are
/// expressions, columns the permutations of that degree), and its rank.
pub struct FreeShuffleBasis {
    pub expressions: Vec<BasisExpr>,
    pub evaluations: Vec<LinComb<Permutation>>,
    pub matrix: Vec<Vec<Rational>>,
    pub rank: usize,
}

pub fn free_shuffle_basis(k: usize) -> Result<FreeShuffleBasis> {
    if k == 0 {
        return Err(Error::MalformedInput("basis size must be at least 1".into()));
    }
    if k > 6 {
        return Err(Error::CutoffExceeded(format!(
            "free-basis evaluation is capped at 6 letters, got {k}"
        )));
    }
    let expressions = basis_expressions(k);
    let evaluations: Vec<LinComb<Permutation>> = expressions.iter().map(BasisExpr::eval).collect();
    let columns: Vec<Permutation> = all_permutations(k);
    let matrix: Vec<Vec<Rational>> = evaluations
        .iter()
        .map(|e| columns.iter().map(|p| e.coeff(p)).collect())
        .collect();
    let rank = matrix_rank(matrix.clone());
    Ok(FreeShuffleBasis { expressions, evaluations, matrix, rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn symbols() -> Alphabet {
        Alphabet::symbols(&["a", "b", "c", "d"], rat_int(0)).unwrap()
    }

    fn w(alphabet: &Alphabet, letters: &[&str]) -> Word {
        alphabet.word(letters).unwrap()
    }

    fn random_word(rng: &mut ChaCha8Rng, letters: &[&str], max_len: usize) -> Word {
        let len = rng.gen_range(1..=max_len);
        let picks: Vec<&str> = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
        Word { letters: picks.iter().map(|s| s.to_string()).collect() }
    }

    #[test]
    fn shuffle_two_by_two() {
        let a = Alphabet::symbols(&["f1", "f2", "g1", "g2"], rat_int(0)).unwrap();
        let got = shuffle(&w(&a, &["f1", "f2"]), &w(&a, &["g1", "g2"]));
        let expected_words = [
            ["f1", "f2", "g1", "g2"],
            ["f1", "g1", "f2", "g2"],
            ["f1", "g1", "g2", "f2"],
            ["g1", "g2", "f1", "f2"],
            ["g1", "f1", "g2", "f2"],
            ["g1", "f1", "f2", "g2"],
        ];
        let mut expected = LinComb::zero();
        for ws in expected_words {
            expected.add_term(w(&a, &ws), rat_int(1));
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn shuffle_counts_multiplicity() {
        let a = Alphabet::symbols(&["f", "g"], rat_int(0)).unwrap();
        let got = shuffle(&w(&a, &["f", "g"]), &w(&a, &["f"]));
        let mut expected = LinComb::zero();
        expected.add_term(w(&a, &["f", "f", "g"]), rat_int(2));
        expected.add_term(w(&a, &["f", "g", "f"]), rat_int(1));
        assert_eq!(got, expected);
    }

    #[test]
    fn shuffle_unit() {
        let a = symbols();
        let u = w(&a, &["a", "b"]);
        assert_eq!(shuffle(&u, &Word::empty()), LinComb::basis(u.clone()));
        assert_eq!(shuffle(&Word::empty(), &u), LinComb::basis(u));
    }

    #[test]
    fn shuffle_is_associative_and_commutative() {
        let mut rng = ChaCha8Rng::seed_from_u64(401);
        let letters = ["a", "b", "c"];
        for _ in 0..30 {
            let u = random_word(&mut rng, &letters, 2);
            let v = random_word(&mut rng, &letters, 2);
            let p = random_word(&mut rng, &letters, 1);
            assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
            let uv_p = bilinear(&shuffle(&u, &v), &LinComb::basis(p.clone()), shuffle);
            let u_vp = bilinear(&LinComb::basis(u.clone()), &shuffle(&v, &p), shuffle);
            assert_eq!(uv_p, u_vp);
        }
    }

    #[test]
    fn quasi_shuffle_single_letters() {
        let a = Alphabet::harmonic(rat_int(7));
        let got = quasi_shuffle(&w(&a, &["z1"]), &w(&a, &["z2"]), &a).unwrap();
        let mut expected = LinComb::zero();
        expected.add_term(w(&a, &["z1", "z2"]), rat_int(1));
        expected.add_term(w(&a, &["z2", "z1"]), rat_int(1));
        expected.add_term(w(&a, &["z3"]), rat_int(-7));
        assert_eq!(got, expected);
    }

    #[test]
    fn quasi_shuffle_one_against_two() {
        // Both merge terms carry -θ; no θ² appears at the word level.
        let a = Alphabet::harmonic(rat_int(7));
        let got = quasi_shuffle(&w(&a, &["z1"]), &w(&a, &["z2", "z4"]), &a).unwrap();
        let mut expected = LinComb::zero();
        expected.add_term(w(&a, &["z1", "z2", "z4"]), rat_int(1));
        expected.add_term(w(&a, &["z2", "z1", "z4"]), rat_int(1));
        expected.add_term(w(&a, &["z2", "z4", "z1"]), rat_int(1));
        expected.add_term(w(&a, &["z3", "z4"]), rat_int(-7));
        expected.add_term(w(&a, &["z2", "z5"]), rat_int(-7));
        assert_eq!(got, expected);
    }

    #[test]
    fn quasi_shuffle_at_weight_zero_is_shuffle() {
        let a = Alphabet::harmonic(rat_int(0));
        let mut rng = ChaCha8Rng::seed_from_u64(402);
        let letters = ["z1", "z2", "z3"];
        for _ in 0..50 {
            let u = random_word(&mut rng, &letters, 3);
            let v = random_word(&mut rng, &letters, 3);
            assert_eq!(quasi_shuffle(&u, &v, &a).unwrap(), shuffle(&u, &v));
        }
    }

    #[test]
    fn quasi_shuffle_is_associative_and_commutative() {
        let a = Alphabet::harmonic(rat_int(1));
        let mut rng = ChaCha8Rng::seed_from_u64(403);
        let letters = ["z1", "z2"];
        let qs = |u: &Word, v: &Word| quasi_shuffle(u, v, &a).unwrap();
        for _ in 0..25 {
            let u = random_word(&mut rng, &letters, 2);
            let v = random_word(&mut rng, &letters, 2);
            let p = random_word(&mut rng, &letters, 2);
            assert_eq!(qs(&u, &v), qs(&v, &u));
            let uv_p = bilinear(&qs(&u, &v), &LinComb::basis(p.clone()), qs);
            let u_vp = bilinear(&LinComb::basis(u.clone()), &qs(&v, &p), qs);
            assert_eq!(uv_p, u_vp);
        }
    }

    #[test]
    fn quasi_shuffle_term_count_oracle() {
        // At θ = -1 every slot pattern contributes +1, so the coefficient
        // sum counts the slot surjections regardless of letter collisions.
        fn surjections(m: usize, n: usize, r: usize) -> u64 {
            if m == 0 && n == 0 {
                return u64::from(r == 0);
            }
            if r == 0 {
                return 0;
            }
            let mut total = 0;
            if m > 0 {
                total += surjections(m - 1, n, r - 1);
            }
            if n > 0 {
                total += surjections(m, n - 1, r - 1);
            }
            if m > 0 && n > 0 {
                total += surjections(m - 1, n - 1, r - 1);
            }
            total
        }
        let a = Alphabet::harmonic(rat_int(-1));
        for m in 1..=3usize {
            for n in 1..=3usize {
                let u = Word { letters: (0..m).map(|i| format!("z{}", i + 1)).collect() };
                let v = Word { letters: (0..n).map(|i| format!("z{}", i + 1)).collect() };
                let qs = quasi_shuffle(&u, &v, &a).unwrap();
                let coeff_sum: Rational =
                    qs.iter().map(|(_, c)| c.clone()).fold(rat_int(0), |x, y| x + y);
                let expected: u64 = (m.max(n)..=m + n).map(|r| surjections(m, n, r)).sum();
                assert_eq!(coeff_sum, rat_int(expected as i64));
            }
        }
    }

    #[test]
    fn quasi_shuffle_needs_letter_product() {
        let a = symbols();
        let err = quasi_shuffle(&w(&a, &["a"]), &w(&a, &["b"]), &a).unwrap_err();
        assert!(matches!(err, Error::UnsupportedInstance(_)));
    }

    #[test]
    fn half_shuffles_split_the_shuffle() {
        let a = symbols();
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let letters = ["a", "b", "c"];
        for _ in 0..30 {
            let u = random_word(&mut rng, &letters, 3);
            let v = random_word(&mut rng, &letters, 3);
            let (l, r) = half_shuffles(&u, &v).unwrap();
            assert_eq!(l.add(&r), shuffle(&u, &v));
        }
        assert_eq!(
            shuffle_left(&w(&a, &["a"]), &w(&a, &["b"])).unwrap(),
            LinComb::basis(w(&a, &["a", "b"]))
        );
        assert!(shuffle_left(&Word::empty(), &w(&a, &["a"])).is_err());
        assert!(shuffle_right(&w(&a, &["a"]), &Word::empty()).is_err());
    }

    #[test]
    fn half_shuffle_axioms() {
        // (a≺b)≺c = a≺(b⧢c) and its commutative-model variants.
        let mut rng = ChaCha8Rng::seed_from_u64(405);
        let letters = ["a", "b"];
        let prec = |u: &Word, v: &Word| shuffle_left(u, v).unwrap();
        for _ in 0..25 {
            let u = random_word(&mut rng, &letters, 2);
            let v = random_word(&mut rng, &letters, 2);
            let p = random_word(&mut rng, &letters, 2);
            let lhs = bilinear(&prec(&u, &v), &LinComb::basis(p.clone()), &prec);
            let rhs = bilinear(&LinComb::basis(u.clone()), &shuffle(&v, &p), &prec);
            assert_eq!(lhs, rhs);
            // a≺b = b≻a: the first-letter split over a commutative product
            assert_eq!(prec(&u, &v), shuffle_right(&v, &u).unwrap());
            // (a≺b)≺c = a≺(b≺c + c≺b)
            let rhs2 = bilinear(
                &LinComb::basis(u.clone()),
                &prec(&v, &p).add(&prec(&p, &v)),
                &prec,
            );
            assert_eq!(lhs, rhs2);
        }
    }

    #[test]
    fn quasi_half_shuffle_axioms() {
        // ⋆ = ≺ + ≻ - θ⊙ and the six splitting identities with · = ⊙.
        for theta in [rat_int(1), rat(7, 2)] {
            let a = Alphabet::harmonic(theta.clone());
            let mut rng = ChaCha8Rng::seed_from_u64(406);
            let letters = ["z1", "z2"];
            let star = |u: &Word, v: &Word| quasi_shuffle(u, v, &a).unwrap();
            let prec = |u: &Word, v: &Word| quasi_half_shuffles(u, v, &a).unwrap().0;
            let succ = |u: &Word, v: &Word| quasi_half_shuffles(u, v, &a).unwrap().1;
            let dot = |u: &Word, v: &Word| quasi_half_shuffles(u, v, &a).unwrap().2;
            let lift = |x: &Word| LinComb::basis(x.clone());
            for _ in 0..12 {
                let u = random_word(&mut rng, &letters, 2);
                let v = random_word(&mut rng, &letters, 2);
                let p = random_word(&mut rng, &letters, 2);
                let full = prec(&u, &v)
                    .add(&succ(&u, &v))
                    .sub(&dot(&u, &v).scale(&theta));
                assert_eq!(full, star(&u, &v));
                // (a≺b)≺c = a≺(b⋆c)
                assert_eq!(
                    bilinear(&prec(&u, &v), &lift(&p), &prec),
                    bilinear(&lift(&u), &star(&v, &p), &prec)
                );
                // (a≻b)≺c = a≻(b≺c)
                assert_eq!(
                    bilinear(&succ(&u, &v), &lift(&p), &prec),
                    bilinear(&lift(&u), &prec(&v, &p), &succ)
                );
                // a≻(b≻c) = (a⋆b)≻c
                assert_eq!(
                    bilinear(&lift(&u), &succ(&v, &p), &succ),
                    bilinear(&star(&u, &v), &lift(&p), &succ)
                );
                // (a≻b)⊙c = a≻(b⊙c)
                assert_eq!(
                    bilinear(&succ(&u, &v), &lift(&p), &dot),
                    bilinear(&lift(&u), &dot(&v, &p), &succ)
                );
                // (a≺b)⊙c = a⊙(b≻c)
                assert_eq!(
                    bilinear(&prec(&u, &v), &lift(&p), &dot),
                    bilinear(&lift(&u), &succ(&v, &p), &dot)
                );
                // (a⊙b)≺c = a⊙(b≺c)
                assert_eq!(
                    bilinear(&dot(&u, &v), &lift(&p), &prec),
                    bilinear(&lift(&u), &prec(&v, &p), &dot)
                );
                // commutative-model form: (x≺y)≺z = x≺(y≺z + z≺y - θ y⊙z)
                assert_eq!(
                    bilinear(&prec(&u, &v), &lift(&p), &prec),
                    bilinear(
                        &lift(&u),
                        &prec(&v, &p).add(&prec(&p, &v)).sub(&dot(&v, &p).scale(&theta)),
                        &prec
                    )
                );
            }
        }
    }

    #[test]
    fn word_prelie_vanishes_on_the_commutative_model() {
        // In the word model a≺b = b≻a, so the induced pre-Lie product is
        // the zero (abelian) one; the direct evaluation confirms it.
        let a = symbols();
        let x = LinComb::basis(w(&a, &["a"]));
        let y = LinComb::basis(w(&a, &["b"]));
        let direct = shuffle_right(&w(&a, &["a"]), &w(&a, &["b"]))
            .unwrap()
            .sub(&shuffle_left(&w(&a, &["b"]), &w(&a, &["a"])).unwrap());
        assert_eq!(shuffle_to_prelie(&x, &y).unwrap(), direct);
        assert!(direct.is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(407);
        let letters = ["a", "b", "c"];
        for _ in 0..25 {
            let u = LinComb::basis(random_word(&mut rng, &letters, 3));
            let v = LinComb::basis(random_word(&mut rng, &letters, 3));
            let p = LinComb::basis(random_word(&mut rng, &letters, 3));
            let lhs = shuffle_to_prelie(&shuffle_to_prelie(&u, &v).unwrap(), &p)
                .unwrap()
                .sub(&shuffle_to_prelie(&u, &shuffle_to_prelie(&v, &p).unwrap()).unwrap());
            let rhs = shuffle_to_prelie(&shuffle_to_prelie(&v, &u).unwrap(), &p)
                .unwrap()
                .sub(&shuffle_to_prelie(&v, &shuffle_to_prelie(&u, &p).unwrap()).unwrap());
            assert_eq!(lhs, rhs);
        }
        assert!(shuffle_to_prelie(&LinComb::basis(Word::empty()), &y).is_err());
    }

    #[test]
    fn permutation_model_prelie_identity() {
        // The permutation half-shuffles give a genuinely noncommutative
        // shuffle algebra, hence a nonzero pre-Lie product.
        let prelie = |x: &LinComb<Permutation>, y: &LinComb<Permutation>| {
            let succ = bilinear(x, y, |a, b| half_shuffle_right(a, b).unwrap());
            let prec = bilinear(y, x, |a, b| half_shuffle_left(a, b).unwrap());
            succ.sub(&prec)
        };
        let one = LinComb::basis(Permutation::identity(1));
        let two = prelie(&one, &one);
        assert!(!two.is_zero());
        let mut perms: Vec<LinComb<Permutation>> = all_permutations(2)
            .into_iter()
            .map(LinComb::basis)
            .collect();
        perms.push(one.clone());
        for a in &perms {
            for b in &perms {
                for c in &perms {
                    let lhs = prelie(&prelie(a, b), c).sub(&prelie(a, &prelie(b, c)));
                    let rhs = prelie(&prelie(b, a), c).sub(&prelie(b, &prelie(a, c)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn basis_expression_counts_are_catalan() {
        let counts: Vec<usize> = (1..=5).map(|k| basis_expressions(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42]);
    }

    #[test]
    fn free_basis_rank_small() {
        let b1 = free_shuffle_basis(1).unwrap();
        assert_eq!(b1.rank, 1);
        let b2 = free_shuffle_basis(2).unwrap();
        assert_eq!(b2.rank, 2);
        let s2: Vec<LinComb<Permutation>> = all_permutations(2)
            .into_iter()
            .map(LinComb::basis)
            .collect();
        for p in &s2 {
            assert!(b2.evaluations.contains(p));
        }
        for k in 3..=4 {
            let b = free_shuffle_basis(k).unwrap();
            assert_eq!(b.rank, b.expressions.len(), "size {k}");
        }
        assert!(matches!(free_shuffle_basis(7), Err(Error::CutoffExceeded(_))));
    }

    #[test]
    fn parse_round_trip() {
        let a = symbols();
        for word in [Word::empty(), w(&a, &["a"]), w(&a, &["a", "b", "a"])] {
            assert_eq!(Word::parse_encoded(&word.encode()).unwrap(), word);
        }
        assert!(Word::parse_encoded("a,b").is_err());
        assert!(Word::parse_encoded("(a,,b)").is_err());
    }
}
