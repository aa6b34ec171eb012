//! Concrete Rota-Baxter instances: prefix summation on polynomial
//! sequences (weight -1), the upper-triangular projector on rational
//! matrices (weight 1), pole/regular subtraction on windowed Laurent
//! expansions (weight 1), and integration from 0 on polynomials
//! (weight 0).

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::carriers::{CPoly, Laurent, Mat, TPoly};
use super::{self_check, RbAlgebra};
use crate::algebra::{rat_int, Rational};

pub(crate) fn sample_rational(rng: &mut ChaCha8Rng) -> Rational {
    // small integers with an occasional half, to keep arithmetic cheap
    // while exercising non-integer coefficients
    let n: i64 = rng.gen_range(-3..=3);
    if rng.gen_range(0..4) == 0 {
        crate::algebra::rat(n, 2)
    } else {
        rat_int(n)
    }
}

/// Length-M sequences of commutative polynomials with the pointwise
/// product and the shifted prefix sum
/// `R(f) = (0, f_1, f_1 + f_2, ...)`; a Rota-Baxter operator of
/// weight -1.
#[derive(Debug, Clone)]
pub struct SequenceSummation {
    length: usize,
    vars: usize,
}

/// A sequence of commutative polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqPoly {
    entries: Vec<CPoly>,
}

impl SeqPoly {
    pub fn new(entries: Vec<CPoly>) -> Self {
        SeqPoly { entries }
    }

    pub fn entries(&self) -> &[CPoly] {
        &self.entries
    }

    pub fn constant(length: usize, p: CPoly) -> Self {
        SeqPoly { entries: vec![p; length] }
    }
}

impl fmt::Display for SeqPoly {
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

impl SequenceSummation {
    pub fn new(length: usize, vars: usize) -> Self {
        assert!(length >= 1 && vars >= 1);
        let inst = SequenceSummation { length, vars };
        self_check(&inst, 100);
        inst
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

impl RbAlgebra for SequenceSummation {
    type Elem = SeqPoly;

    fn name(&self) -> String {
        format!("sequence-summation(M={}, vars={})", self.length, self.vars)
    }

    fn weight(&self) -> Rational {
        rat_int(-1)
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn zero(&self) -> SeqPoly {
        SeqPoly::constant(self.length, CPoly::zero())
    }

    fn one(&self) -> Option<SeqPoly> {
        Some(SeqPoly::constant(self.length, CPoly::one()))
    }

    fn add(&self, x: &SeqPoly, y: &SeqPoly) -> SeqPoly {
        SeqPoly {
            entries: x.entries.iter().zip(&y.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    fn neg(&self, x: &SeqPoly) -> SeqPoly {
        SeqPoly { entries: x.entries.iter().map(CPoly::neg).collect() }
    }

    fn scale(&self, c: &Rational, x: &SeqPoly) -> SeqPoly {
        SeqPoly { entries: x.entries.iter().map(|p| p.scale(c)).collect() }
    }

    fn mul(&self, x: &SeqPoly, y: &SeqPoly) -> SeqPoly {
        SeqPoly {
            entries: x.entries.iter().zip(&y.entries).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    fn rb(&self, x: &SeqPoly) -> SeqPoly {
        let mut entries = Vec::with_capacity(self.length);
        let mut acc = CPoly::zero();
        for p in &x.entries {
            entries.push(acc.clone());
            acc = acc.add(p);
        }
        SeqPoly { entries }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> SeqPoly {
        let entries = (0..self.length)
            .map(|_| {
                let mut p = CPoly::zero();
                for _ in 0..rng.gen_range(1..=2) {
                    let c = sample_rational(rng);
                    if rng.gen_range(0..3) == 0 {
                        p = p.add(&CPoly::constant(c));
                    } else {
                        let v = rng.gen_range(0..self.vars);
                        p = p.add(&CPoly::var(v).scale(&c));
                    }
                }
                p
            })
            .collect();
        SeqPoly { entries }
    }
}

/// Square rational matrices with the projection onto the upper
/// triangle (diagonal included); a Rota-Baxter operator of weight 1,
/// with partner the strictly-lower projection.
#[derive(Debug, Clone)]
pub struct TriangularProjector {
    dim: usize,
}

impl TriangularProjector {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        let inst = TriangularProjector { dim };
        self_check(&inst, 100);
        inst
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl RbAlgebra for TriangularProjector {
    type Elem = Mat;

    fn name(&self) -> String {
        format!("triangular-projector(n={})", self.dim)
    }

    fn weight(&self) -> Rational {
        rat_int(1)
    }

    fn is_commutative(&self) -> bool {
        false
    }

    fn zero(&self) -> Mat {
        Mat::zero(self.dim)
    }

    fn one(&self) -> Option<Mat> {
        Some(Mat::identity(self.dim))
    }

    fn add(&self, x: &Mat, y: &Mat) -> Mat {
        x.add(y)
    }

    fn neg(&self, x: &Mat) -> Mat {
        x.neg()
    }

    fn scale(&self, c: &Rational, x: &Mat) -> Mat {
        x.scale(c)
    }

    fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        x.mul(y)
    }

    fn rb(&self, x: &Mat) -> Mat {
        x.upper_part()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Mat {
        let mut m = Mat::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, sample_rational(rng));
            }
        }
        m
    }
}

/// Windowed Laurent expansions `eps^-K ..= eps^N` with the projector
/// onto the pole part (`pole = true`, the minimal-subtraction
/// counterterm map, `R(1) = 0`) or onto the regular part
/// (`pole = false`); both are idempotent Rota-Baxter operators of
/// weight 1. Products truncate outside the window and set a sticky
/// overflow flag that equality ignores; exact suites sample shallow
/// support so the window is never left.
#[derive(Debug, Clone)]
pub struct LaurentMinimalSubtraction {
    kneg: usize,
    npos: usize,
    pole: bool,
}

impl LaurentMinimalSubtraction {
    pub fn new(kneg: usize, npos: usize, pole: bool) -> Self {
        let inst = LaurentMinimalSubtraction { kneg, npos, pole };
        self_check(&inst, 100);
        inst
    }

    pub fn window(&self) -> (usize, usize) {
        (self.kneg, self.npos)
    }

    pub fn projects_to_pole(&self) -> bool {
        self.pole
    }
}

impl RbAlgebra for LaurentMinimalSubtraction {
    type Elem = Laurent;

    fn name(&self) -> String {
        format!(
            "laurent-{}-subtraction(K={}, N={})",
            if self.pole { "pole" } else { "regular" },
            self.kneg,
            self.npos
        )
    }

    fn weight(&self) -> Rational {
        rat_int(1)
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn zero(&self) -> Laurent {
        Laurent::zero()
    }

    fn one(&self) -> Option<Laurent> {
        Some(Laurent::one())
    }

    fn add(&self, x: &Laurent, y: &Laurent) -> Laurent {
        x.add(y)
    }

    fn neg(&self, x: &Laurent) -> Laurent {
        x.neg()
    }

    fn scale(&self, c: &Rational, x: &Laurent) -> Laurent {
        x.scale(c)
    }

    fn mul(&self, x: &Laurent, y: &Laurent) -> Laurent {
        x.mul(y, self.kneg, self.npos)
    }

    fn rb(&self, x: &Laurent) -> Laurent {
        if self.pole {
            x.pole_part()
        } else {
            x.regular_part()
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Laurent {
        // support at most eps^-2 .. eps^2 so that products of six
        // factors stay inside the default window of 12
        let lo = -(self.kneg.min(2) as i64);
        let hi = self.npos.min(2) as i64;
        let mut l = Laurent::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let p = rng.gen_range(lo..=hi);
            l.add_term(p, sample_rational(rng));
        }
        l
    }
}

/// Polynomials in `t` with square-matrix rational coefficients and the
/// integral from 0; the weight-0 model of iterated integrals.
/// Dimension 1 is the commutative scalar case.
#[derive(Debug, Clone)]
pub struct PolynomialIntegration {
    dim: usize,
}

impl PolynomialIntegration {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        let inst = PolynomialIntegration { dim };
        self_check(&inst, 100);
        inst
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl RbAlgebra for PolynomialIntegration {
    type Elem = TPoly;

    fn name(&self) -> String {
        format!("polynomial-integration(dim={})", self.dim)
    }

    fn weight(&self) -> Rational {
        rat_int(0)
    }

    fn is_commutative(&self) -> bool {
        self.dim == 1
    }

    fn zero(&self) -> TPoly {
        TPoly::zero(self.dim)
    }

    fn one(&self) -> Option<TPoly> {
        Some(TPoly::one(self.dim))
    }

    fn add(&self, x: &TPoly, y: &TPoly) -> TPoly {
        x.add(y)
    }

    fn neg(&self, x: &TPoly) -> TPoly {
        x.neg()
    }

    fn scale(&self, c: &Rational, x: &TPoly) -> TPoly {
        x.scale(c)
    }

    fn mul(&self, x: &TPoly, y: &TPoly) -> TPoly {
        x.mul(y)
    }

    fn rb(&self, x: &TPoly) -> TPoly {
        x.integrate()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> TPoly {
        let mut p = TPoly::zero(self.dim);
        let deg = rng.gen_range(0..=2);
        for k in 0..=deg {
            let mut m = Mat::zero(self.dim);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    m.set(i, j, sample_rational(rng));
                }
            }
            p.set_coeff(k, m);
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn prefix_sum_shifts() {
        let inst = SequenceSummation::new(4, 1);
        let x = SeqPoly::new(vec![
            CPoly::constant(rat_int(1)),
            CPoly::constant(rat_int(2)),
            CPoly::constant(rat_int(3)),
            CPoly::constant(rat_int(4)),
        ]);
        let r = inst.rb(&x);
        let expected: Vec<i64> = vec![0, 1, 3, 6];
        for (e, v) in r.entries().iter().zip(expected) {
            assert_eq!(e, &CPoly::constant(rat_int(v)));
        }
    }

    #[test]
    fn triangular_projection_keeps_diagonal() {
        let inst = TriangularProjector::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = inst.sample(&mut rng);
        let up = inst.rb(&x);
        assert_eq!(up.entry(0, 0), x.entry(0, 0));
        assert_eq!(up.entry(1, 0), &rat_int(0));
        // partner projector keeps the strictly lower triangle
        let low = inst.rb_tilde(&x);
        assert_eq!(low.entry(1, 0), x.entry(1, 0));
        assert_eq!(low.entry(0, 1), &rat_int(0));
        assert_eq!(up.add(&low), x);
    }

    #[test]
    fn pole_and_regular_projectors_are_idempotent_splits() {
        for pole in [true, false] {
            let inst = LaurentMinimalSubtraction::new(8, 8, pole);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..20 {
                let x = inst.sample(&mut rng);
                let r = inst.rb(&x);
                assert_eq!(inst.rb(&r), r);
                assert_eq!(r.add(&inst.rb_tilde(&x)), x);
            }
            let one = inst.one().unwrap();
            if pole {
                assert!(inst.is_zero(&inst.rb(&one)));
            } else {
                assert_eq!(inst.rb(&one), one);
            }
        }
    }

    #[test]
    fn integration_is_weight_zero() {
        let inst = PolynomialIntegration::new(1);
        assert_eq!(inst.weight(), rat_int(0));
        let t = TPoly::scalar_monomial(rat_int(1), 1);
        assert_eq!(inst.rb(&t), TPoly::scalar_monomial(crate::algebra::rat(1, 2), 2));
        // weight 0 partner is -R
        assert_eq!(inst.rb_tilde(&t), inst.neg(&inst.rb(&t)));
    }

    #[test]
    fn matrix_coefficients_make_integration_noncommutative() {
        let inst = PolynomialIntegration::new(2);
        assert!(!inst.is_commutative());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = false;
        for _ in 0..10 {
            let x = inst.sample(&mut rng);
            let y = inst.sample(&mut rng);
            if !inst.is_zero(&inst.sub(&inst.mul(&x, &y), &inst.mul(&y, &x))) {
                seen = true;
            }
        }
        assert!(seen);
    }
}
