//! Universal identities evaluated inside a concrete instance: the
//! symmetrized-word identity over canonical cycle decompositions (with
//! its set-partition form in commutative carriers), the weight-zero
//! time-ordered product and its structural recursion, and the lift of
//! the quasi-shuffle product against nested operator words.

use std::fmt;

use crate::algebra::{factorial, Rational};
use crate::error::{Error, Result};
use crate::permutations::{all_permutations, Permutation};
use crate::words::{quasi_shuffle, Alphabet, Word};

use super::{double_product, prelie_product, rat_pow, RbAlgebra};

/// A permutation written as disjoint cycles, each starting with its
/// maximal element and listed in increasing order of first entries.
/// Entry semantics: a cycle `(a_0 a_1 ... a_{m-1})` maps `a_i` to
/// `a_{i+1 mod m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<u32>>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    pub fn is_canonical(&self) -> bool {
        let mut prev_first: u32 = 0;
        for cycle in &self.cycles {
            match cycle.first() {
                None => return false,
                Some(&first) => {
                    if cycle.iter().any(|&a| a > first) || first <= prev_first {
                        return false;
                    }
                    prev_first = first;
                }
            }
        }
        true
    }

    /// Rebuilds the permutation; the cycle entries must partition
    /// `{1..n}` for some `n`.
    pub fn to_permutation(&self) -> Result<Permutation> {
        let n: usize = self.cycles.iter().map(Vec::len).sum();
        let mut values = vec![0u32; n];
        for cycle in &self.cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a == 0 || a as usize > n {
                    return Err(Error::MalformedInput(format!(
                        "cycle entry {a} outside 1..={n}"
                    )));
                }
                let image = cycle[(i + 1) % cycle.len()];
                if values[a as usize - 1] != 0 {
                    return Err(Error::MalformedInput(format!("repeated cycle entry {a}")));
                }
                values[a as usize - 1] = image;
            }
        }
        Permutation::new(values)
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.cycles.iter().flatten().all(|&a| a <= 9);
        for cycle in &self.cycles {
            write!(f, "(")?;
            for (i, a) in cycle.iter().enumerate() {
                if !compact && i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The canonical cycle decomposition of a permutation.
pub fn canonical_cycles(sigma: &Permutation) -> CycleDecomposition {
    let n = sigma.degree();
    let mut seen = vec![false; n + 1];
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        // collect the orbit, then write it out from its maximum
        let mut orbit = vec![start as u32];
        seen[start] = true;
        let mut next = sigma.apply(start);
        while next as usize != start {
            seen[next as usize] = true;
            orbit.push(next);
            next = sigma.apply(next as usize);
        }
        let top = orbit.iter().position(|&a| a == *orbit.iter().max().unwrap()).unwrap();
        orbit.rotate_left(top);
        cycles.push(orbit);
    }
    cycles.sort_by_key(|c| c[0]);
    CycleDecomposition { cycles }
}

/// All set partitions of `{1..n}`; blocks are increasing and listed by
/// smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for k in 1..=n {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(k);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![k]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Both sides of the symmetrized-word identity
///
/// ```text
/// sum_{sigma in S_n} R(...R(R(F_s(1)) F_s(2))...) F_s(n)
/// ```
///
/// The right-hand side folds each canonical cycle with the derived
/// pre-Lie product and combines cycle values with the double product;
/// in a commutative instance the cycle sum collapses to a sum over set
/// partitions with weight powers and factorial coefficients.
#[derive(Debug, Clone)]
pub struct BspIdentity<E> {
    pub lhs: E,
    pub rhs_noncommutative: E,
    pub rhs_commutative: Option<E>,
}

pub fn bohnenblust_spitzer<A: RbAlgebra>(
    inst: &A,
    fs: &[A::Elem],
) -> Result<BspIdentity<A::Elem>> {
    if fs.is_empty() {
        return Err(Error::MalformedInput("at least one factor is required".into()));
    }
    let n = fs.len();
    if n > 7 {
        return Err(Error::CutoffExceeded(format!(
            "symmetrizing over S_{n} exceeds the cap of 7"
        )));
    }
    let perms = all_permutations(n);

    let mut lhs = inst.zero();
    for sigma in &perms {
        let mut t = fs[sigma.apply(1) as usize - 1].clone();
        for i in 2..=n {
            t = inst.mul(&inst.rb(&t), &fs[sigma.apply(i) as usize - 1]);
        }
        lhs = inst.add(&lhs, &t);
    }

    let mut rhs_noncommutative = inst.zero();
    for sigma in &perms {
        let decomposition = canonical_cycles(sigma);
        let mut term: Option<A::Elem> = None;
        for cycle in decomposition.cycles() {
            let mut v = fs[cycle[0] as usize - 1].clone();
            for &a in &cycle[1..] {
                v = prelie_product(inst, &v, &fs[a as usize - 1]);
            }
            term = Some(match term {
                None => v,
                Some(t) => double_product(inst, &t, &v),
            });
        }
        rhs_noncommutative = inst.add(&rhs_noncommutative, &term.expect("n >= 1"));
    }

    let rhs_commutative = if inst.is_commutative() {
        let theta = inst.weight();
        let mut total = inst.zero();
        for partition in set_partitions(n) {
            let mut term: Option<A::Elem> = None;
            for block in &partition {
                let mut prod = fs[block[0] - 1].clone();
                for &j in &block[1..] {
                    prod = inst.mul(&prod, &fs[j - 1]);
                }
                let v = inst.scale(&factorial(block.len() - 1), &prod);
                term = Some(match term {
                    None => v,
                    Some(t) => double_product(inst, &t, &v),
                });
            }
            let coeff = rat_pow(&theta, n - partition.len());
            total = inst.add(&total, &inst.scale(&coeff, &term.expect("n >= 1")));
        }
        Some(total)
    } else {
        None
    };

    Ok(BspIdentity { lhs, rhs_noncommutative, rhs_commutative })
}

fn require_weight_zero<A: RbAlgebra>(inst: &A, what: &str) -> Result<()> {
    if !inst.weight().eq(&Rational::from_integer(0.into())) {
        return Err(Error::UnsupportedInstance(format!(
            "{what} needs a weight-zero instance, got {}",
            inst.name()
        )));
    }
    Ok(())
}

fn check_factors<E>(vs: &[E]) -> Result<()> {
    if vs.is_empty() {
        return Err(Error::MalformedInput("at least one factor is required".into()));
    }
    if vs.len() > 7 {
        return Err(Error::CutoffExceeded(format!(
            "symmetrizing over S_{} exceeds the cap of 7",
            vs.len()
        )));
    }
    Ok(())
}

/// The weight-zero time-ordered product: the sum over all orderings of
/// the right-nested causal products `v_{s(1)} R(v_{s(2)} R(...))`.
pub fn time_ordered_product<A: RbAlgebra>(inst: &A, vs: &[A::Elem]) -> Result<A::Elem> {
    require_weight_zero(inst, "the time-ordered product")?;
    check_factors(vs)?;
    let n = vs.len();
    let mut out = inst.zero();
    for sigma in all_permutations(n) {
        let mut t = vs[sigma.apply(n) as usize - 1].clone();
        for i in (1..n).rev() {
            t = inst.mul(&vs[sigma.apply(i) as usize - 1], &inst.rb(&t));
        }
        out = inst.add(&out, &t);
    }
    Ok(out)
}

/// The structural recursion computing the time-ordered product one
/// head factor at a time:
///
/// ```text
/// iota(v)            = v
/// iota(v_1 ... v_n)  = v_1 * iota(v_2 ... v_n)
///                      - sum_i iota(v_2 ... (v_1 . v_i) ... v_n)
/// ```
///
/// with `*` the double product and `.` the derived pre-Lie product.
pub fn iota_product<A: RbAlgebra>(inst: &A, vs: &[A::Elem]) -> Result<A::Elem> {
    require_weight_zero(inst, "the time-ordered recursion")?;
    check_factors(vs)?;
    Ok(iota_rec(inst, vs))
}

fn iota_rec<A: RbAlgebra>(inst: &A, vs: &[A::Elem]) -> A::Elem {
    if vs.len() == 1 {
        return vs[0].clone();
    }
    let head = &vs[0];
    let tail = &vs[1..];
    let mut out = double_product(inst, head, &iota_rec(inst, tail));
    for i in 0..tail.len() {
        let mut grafted = tail.to_vec();
        grafted[i] = prelie_product(inst, head, &tail[i]);
        out = inst.sub(&out, &iota_rec(inst, &grafted));
    }
    out
}

/// `iota_product` minus `time_ordered_product`; zero when the
/// recursion computes the time-ordered product.
pub fn iota_time_ordered<A: RbAlgebra>(inst: &A, vs: &[A::Elem]) -> Result<A::Elem> {
    let lhs = iota_product(inst, vs)?;
    let rhs = time_ordered_product(inst, vs)?;
    Ok(inst.sub(&lhs, &rhs))
}

fn graded_exponents(u: &Word) -> Result<Vec<usize>> {
    u.letters()
        .iter()
        .map(|l| {
            l.strip_prefix('z')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&a| a >= 1)
                .ok_or_else(|| {
                    Error::MalformedInput(format!(
                        "letter {l:?} is not a graded letter z1, z2, ..."
                    ))
                })
        })
        .collect()
}

fn elem_power<A: RbAlgebra>(inst: &A, x: &A::Elem, a: usize) -> A::Elem {
    let mut out = x.clone();
    for _ in 1..a {
        out = inst.mul(&out, x);
    }
    out
}

/// Lift of a graded word into the instance: the word `z_{a_1} ... z_{a_k}`
/// maps to the nested element `R(x^{a_1} R(x^{a_2} ... R(x^{a_k})...))`.
/// The empty word lifts to the unit.
pub fn quasi_shuffle_lift<A: RbAlgebra>(inst: &A, x: &A::Elem, u: &Word) -> Result<A::Elem> {
    let exponents = graded_exponents(u)?;
    if exponents.is_empty() {
        return inst.one().ok_or_else(|| {
            Error::UnsupportedInstance(format!("{} has no unit", inst.name()))
        });
    }
    let mut acc: Option<A::Elem> = None;
    for &a in exponents.iter().rev() {
        let p = elem_power(inst, x, a);
        let inner = match acc {
            None => p,
            Some(t) => inst.mul(&p, &t),
        };
        acc = Some(inst.rb(&inner));
    }
    Ok(acc.expect("nonempty word"))
}

/// Residual of the lifted quasi-shuffle relation in a commutative
/// instance: `lift(u) lift(v) - sum lift(u qsh v)`, where the
/// quasi-shuffle merges letters by index addition with a `-theta`
/// factor per merge. Zero exactly when the product of nested operator
/// words expands along the quasi-shuffle.
pub fn quasi_shuffle_lift_residual<A: RbAlgebra>(
    inst: &A,
    x: &A::Elem,
    u: &Word,
    v: &Word,
) -> Result<A::Elem> {
    if !inst.is_commutative() {
        return Err(Error::UnsupportedInstance(format!(
            "the quasi-shuffle lift needs a commutative instance, got {}",
            inst.name()
        )));
    }
    let alphabet = Alphabet::harmonic(inst.weight());
    let expansion = quasi_shuffle(u, v, &alphabet)?;
    let lhs = inst.mul(
        &quasi_shuffle_lift(inst, x, u)?,
        &quasi_shuffle_lift(inst, x, v)?,
    );
    let mut rhs = inst.zero();
    for (w, c) in expansion.iter() {
        rhs = inst.add(&rhs, &inst.scale(c, &quasi_shuffle_lift(inst, x, w)?));
    }
    Ok(inst.sub(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::super::instances::{
        LaurentMinimalSubtraction, PolynomialIntegration, SequenceSummation, TriangularProjector,
    };
    use super::*;

    #[test]
    fn canonical_decomposition_of_the_reference_example() {
        // sigma = (32)(541)(6)(87) in S_8
        let sigma = Permutation::new(vec![5, 3, 2, 1, 4, 6, 8, 7]).unwrap();
        let dec = canonical_cycles(&sigma);
        assert_eq!(dec.to_string(), "(32)(541)(6)(87)");
        assert!(dec.is_canonical());
        assert_eq!(dec.to_permutation().unwrap(), sigma);
    }

    #[test]
    fn identity_permutation_splits_into_fixed_points() {
        let dec = canonical_cycles(&Permutation::identity(3));
        assert_eq!(dec.to_string(), "(1)(2)(3)");
    }

    #[test]
    fn cycle_decomposition_round_trips() {
        for n in 1..=5 {
            for sigma in all_permutations(n) {
                let dec = canonical_cycles(&sigma);
                assert!(dec.is_canonical(), "{dec} for {sigma:?}");
                assert_eq!(dec.to_permutation().unwrap(), sigma);
            }
        }
    }

    #[test]
    fn malformed_cycles_are_rejected() {
        let dec = CycleDecomposition { cycles: vec![vec![2, 1], vec![2]] };
        assert!(matches!(dec.to_permutation(), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        for (n, bell) in [(0usize, 1usize), (1, 1), (2, 2), (3, 5), (4, 15)] {
            assert_eq!(set_partitions(n).len(), bell, "n = {n}");
        }
        for p in set_partitions(4) {
            let mut all: Vec<usize> = p.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, vec![1, 2, 3, 4]);
        }
    }

    #[test]
    fn two_factor_case_is_the_operator_relation() {
        let inst = TriangularProjector::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fs: Vec<_> = (0..2).map(|_| inst.sample(&mut rng)).collect();
        let id = bohnenblust_spitzer(&inst, &fs).unwrap();
        let direct = inst.add(
            &inst.mul(&inst.rb(&fs[0]), &fs[1]),
            &inst.mul(&inst.rb(&fs[1]), &fs[0]),
        );
        assert_eq!(id.lhs, direct);
        // F1 * F2 + F2 . F1
        let expected = inst.add(
            &double_product(&inst, &fs[0], &fs[1]),
            &prelie_product(&inst, &fs[1], &fs[0]),
        );
        assert_eq!(id.rhs_noncommutative, expected);
        assert_eq!(id.lhs, id.rhs_noncommutative);
    }

    #[test]
    fn symmetrized_identity_holds_in_matrices() {
        let inst = TriangularProjector::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..=4 {
            let fs: Vec<_> = (0..n).map(|_| inst.sample(&mut rng)).collect();
            let id = bohnenblust_spitzer(&inst, &fs).unwrap();
            assert_eq!(id.lhs, id.rhs_noncommutative, "n = {n}");
            assert!(id.rhs_commutative.is_none());
        }
    }

    #[test]
    fn commutative_form_matches_set_partitions() {
        let inst = SequenceSummation::new(5, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            let fs: Vec<_> = (0..n).map(|_| inst.sample(&mut rng)).collect();
            let id = bohnenblust_spitzer(&inst, &fs).unwrap();
            assert_eq!(id.lhs, id.rhs_noncommutative, "cycles, n = {n}");
            assert_eq!(id.lhs, id.rhs_commutative.unwrap(), "partitions, n = {n}");
        }
    }

    #[test]
    fn weight_zero_commutative_case_collapses_to_the_double_product() {
        let inst = PolynomialIntegration::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fs: Vec<_> = (0..3).map(|_| inst.sample(&mut rng)).collect();
        let id = bohnenblust_spitzer(&inst, &fs).unwrap();
        let prod = double_product(&inst, &double_product(&inst, &fs[0], &fs[1]), &fs[2]);
        assert_eq!(id.lhs, prod);
        assert_eq!(id.rhs_commutative.unwrap(), prod);
    }

    #[test]
    fn factor_count_caps_are_enforced() {
        let inst = TriangularProjector::new(2);
        assert!(matches!(
            bohnenblust_spitzer(&inst, &[]),
            Err(Error::MalformedInput(_))
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fs: Vec<_> = (0..8).map(|_| inst.sample(&mut rng)).collect();
        assert!(matches!(
            bohnenblust_spitzer(&inst, &fs),
            Err(Error::CutoffExceeded(_))
        ));
    }

    #[test]
    fn two_factor_recursion_symmetrizes_the_causal_product() {
        let inst = PolynomialIntegration::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let vs: Vec<_> = (0..2).map(|_| inst.sample(&mut rng)).collect();
        let iota = iota_product(&inst, &vs).unwrap();
        let expected = inst.add(
            &inst.mul(&vs[0], &inst.rb(&vs[1])),
            &inst.mul(&vs[1], &inst.rb(&vs[0])),
        );
        assert_eq!(iota, expected);
    }

    #[test]
    fn recursion_computes_the_time_ordered_product() {
        let inst = PolynomialIntegration::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            let vs: Vec<_> = (0..n).map(|_| inst.sample(&mut rng)).collect();
            let residual = iota_time_ordered(&inst, &vs).unwrap();
            assert!(inst.is_zero(&residual), "n = {n}");
        }
    }

    #[test]
    fn recursion_is_symmetric_in_its_factors() {
        let inst = PolynomialIntegration::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let vs: Vec<_> = (0..3).map(|_| inst.sample(&mut rng)).collect();
        let rotated = vec![vs[2].clone(), vs[0].clone(), vs[1].clone()];
        assert_eq!(
            iota_product(&inst, &vs).unwrap(),
            iota_product(&inst, &rotated).unwrap()
        );
    }

    #[test]
    fn time_ordered_product_rejects_nonzero_weight() {
        let inst = TriangularProjector::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let vs = vec![inst.sample(&mut rng)];
        assert!(matches!(
            time_ordered_product(&inst, &vs),
            Err(Error::UnsupportedInstance(_))
        ));
        assert!(matches!(
            iota_product(&inst, &vs),
            Err(Error::UnsupportedInstance(_))
        ));
    }

    #[test]
    fn lift_of_a_single_letter_is_a_nested_word() {
        let inst = SequenceSummation::new(5, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let x = inst.sample(&mut rng);
        let alphabet = Alphabet::harmonic(inst.weight());
        let z2 = alphabet.word(&["z2"]).unwrap();
        let lifted = quasi_shuffle_lift(&inst, &x, &z2).unwrap();
        assert_eq!(lifted, inst.rb(&inst.mul(&x, &x)));
        let z12 = alphabet.word(&["z1", "z2"]).unwrap();
        let nested = inst.rb(&inst.mul(&x, &inst.rb(&inst.mul(&x, &x))));
        assert_eq!(quasi_shuffle_lift(&inst, &x, &z12).unwrap(), nested);
    }

    #[test]
    fn lifted_products_expand_along_the_quasi_shuffle() {
        let seq = SequenceSummation::new(6, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let x = seq.sample(&mut rng);
        let alphabet = Alphabet::harmonic(seq.weight());
        let shapes: &[(&[&str], &[&str])] = &[
            (&["z1"], &["z1"]),
            (&["z1"], &["z2"]),
            (&["z1"], &["z1", "z1"]),
            (&["z1"], &["z1", "z2"]),
            (&["z2"], &["z1", "z1"]),
            (&["z1", "z1"], &["z1", "z1"]),
        ];
        for (us, vs) in shapes {
            let u = alphabet.word(us).unwrap();
            let v = alphabet.word(vs).unwrap();
            let residual = quasi_shuffle_lift_residual(&seq, &x, &u, &v).unwrap();
            assert!(seq.is_zero(&residual), "{us:?} vs {vs:?}");
        }

        let laurent = LaurentMinimalSubtraction::new(12, 12, true);
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let y = laurent.sample(&mut rng);
        for (us, vs) in &shapes[..4] {
            let u = alphabet.word(us).unwrap();
            let v = alphabet.word(vs).unwrap();
            let residual = quasi_shuffle_lift_residual(&laurent, &y, &u, &v).unwrap();
            assert!(laurent.is_zero(&residual), "{us:?} vs {vs:?}");
        }
    }

    #[test]
    fn lift_rejects_noncommutative_instances_and_foreign_letters() {
        let tri = TriangularProjector::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = tri.sample(&mut rng);
        let alphabet = Alphabet::harmonic(tri.weight());
        let u = alphabet.word(&["z1"]).unwrap();
        assert!(matches!(
            quasi_shuffle_lift_residual(&tri, &x, &u, &u),
            Err(Error::UnsupportedInstance(_))
        ));

        let seq = SequenceSummation::new(4, 1);
        let named = Alphabet::symbols(&["a"], seq.weight()).unwrap();
        let w = named.word(&["a"]).unwrap();
        let y = seq.sample(&mut rng);
        assert!(matches!(
            quasi_shuffle_lift(&seq, &y, &w),
            Err(Error::MalformedInput(_))
        ));
    }
}
