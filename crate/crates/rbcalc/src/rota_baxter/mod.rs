//! Rota-Baxter algebras: the operator interface, concrete instances,
//! and the derived algebraic structures.
//!
//! A Rota-Baxter algebra of weight theta is an associative algebra with
//! a linear operator R satisfying
//!
//! ```text
//! R(x)R(y) = R(R(x)y + xR(y) - theta*xy).
//! ```
//!
//! The sign convention is fixed once and for all by that relation: the
//! prefix-summation operator then has weight -1 and triangular or
//! pole/regular projectors have weight +1. No implicit rescaling is
//! ever applied.
//!
//! From R one derives: the partner operator `R~ = theta id - R` (same
//! weight), the associative double product `x*y = R(x)y + xR(y) -
//! theta xy` for which R is a morphism and R~ an anti-morphism, half
//! products splitting the double product into (quasi-)shuffle axioms,
//! a left pre-Lie product `R(x)y + yR~(x)`, the post-Lie structure
//! `[R(x),y]` with the scaled bracket `-theta[x,y]`, and the modified
//! operator `B = 2R - theta id`.

mod carriers;
mod free_rb;
mod identities;
mod instances;
mod lambda;

use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Rational;

pub use carriers::{CPoly, Laurent, Mat, NcPoly, TPoly};
pub use free_rb::{descent_transfer_residual, FreeElem, FreeRb};
pub use identities::{
    bohnenblust_spitzer, canonical_cycles, iota_product, iota_time_ordered,
    quasi_shuffle_lift, quasi_shuffle_lift_residual, set_partitions,
    time_ordered_product, BspIdentity, CycleDecomposition,
};
pub use instances::{
    LaurentMinimalSubtraction, PolynomialIntegration, SeqPoly, SequenceSummation,
    TriangularProjector,
};
pub use lambda::{
    atkinson_solve, bogoliubov, prelie_magnus, prelie_magnus_terms, series_add,
    series_exp, series_inverse, series_log, series_mul, series_one, series_scale,
    series_sub, series_zero, spitzer_check, AtkinsonFactorization, BogoliubovPair,
    LambdaSeries,
};

pub use crate::trees::rooted::bernoulli;

/// A Rota-Baxter algebra: carrier arithmetic, the operator R, the
/// weight, and a seeded sampler for randomized identity suites.
///
/// Construction of every concrete instance runs [`self_check`] on 100
/// sampled pairs (operator linearity, the weight-theta relation for R
/// and its partner, the mixed relations, and product associativity),
/// so an instance value is evidence that the axioms hold on samples.
pub trait RbAlgebra {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn name(&self) -> String;
    fn weight(&self) -> Rational;
    fn is_commutative(&self) -> bool;
    fn zero(&self) -> Self::Elem;
    /// The multiplicative unit, when the carrier is unital.
    fn one(&self) -> Option<Self::Elem>;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &Rational, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn rb(&self, x: &Self::Elem) -> Self::Elem;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }

    /// The partner operator `R~ = theta id - R`; also weight theta.
    fn rb_tilde(&self, x: &Self::Elem) -> Self::Elem {
        self.sub(&self.scale(&self.weight(), x), &self.rb(x))
    }

    fn commutator(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }
}

/// Residuals of the defining relations on one pair: the weight-theta
/// relation for R, the same relation for the partner R~, and the two
/// mixed relations
/// `R(x)R~(y) = R(xR~(y)) + R~(R(x)y)` /
/// `R~(x)R(y) = R~(xR(y)) + R(R~(x)y)`.
#[derive(Debug, Clone)]
pub struct RbResiduals<E> {
    pub operator: E,
    pub partner: E,
    pub mixed_left: E,
    pub mixed_right: E,
}

impl<E: PartialEq> RbResiduals<E> {
    pub fn all_zero(&self, zero: &E) -> bool {
        self.operator == *zero
            && self.partner == *zero
            && self.mixed_left == *zero
            && self.mixed_right == *zero
    }
}

fn operator_residual<A: RbAlgebra>(
    inst: &A,
    op: &impl Fn(&A::Elem) -> A::Elem,
    x: &A::Elem,
    y: &A::Elem,
) -> A::Elem {
    let lhs = inst.mul(&op(x), &op(y));
    let inner = inst.sub(
        &inst.add(&inst.mul(&op(x), y), &inst.mul(x, &op(y))),
        &inst.scale(&inst.weight(), &inst.mul(x, y)),
    );
    inst.sub(&lhs, &op(&inner))
}

/// Residuals of the weight-theta relation for R and R~ and of the two
/// mixed relations, on a single pair. All four vanish identically in a
/// Rota-Baxter algebra.
pub fn rb_check<A: RbAlgebra>(inst: &A, x: &A::Elem, y: &A::Elem) -> RbResiduals<A::Elem> {
    let r = |e: &A::Elem| inst.rb(e);
    let rt = |e: &A::Elem| inst.rb_tilde(e);
    let mixed_left = inst.sub(
        &inst.mul(&inst.rb(x), &inst.rb_tilde(y)),
        &inst.add(
            &inst.rb(&inst.mul(x, &inst.rb_tilde(y))),
            &inst.rb_tilde(&inst.mul(&inst.rb(x), y)),
        ),
    );
    let mixed_right = inst.sub(
        &inst.mul(&inst.rb_tilde(x), &inst.rb(y)),
        &inst.add(
            &inst.rb_tilde(&inst.mul(x, &inst.rb(y))),
            &inst.rb(&inst.mul(&inst.rb_tilde(x), y)),
        ),
    );
    RbResiduals {
        operator: operator_residual(inst, &r, x, y),
        partner: operator_residual(inst, &rt, x, y),
        mixed_left,
        mixed_right,
    }
}

/// The associative double product `x * y = R(x)y + xR(y) - theta xy`.
/// R is a morphism from it to the carrier product and R~ an
/// anti-morphism: `R(x*y) = R(x)R(y)`, `R~(x*y) = -R~(x)R~(y)`.
pub fn double_product<A: RbAlgebra>(inst: &A, x: &A::Elem, y: &A::Elem) -> A::Elem {
    inst.sub(
        &inst.add(&inst.mul(&inst.rb(x), y), &inst.mul(x, &inst.rb(y))),
        &inst.scale(&inst.weight(), &inst.mul(x, y)),
    )
}

/// Half products `(x < y, x > y, x . y) = (xR(y), R(x)y, xy)`.
///
/// At weight 0 the pair (<, >) satisfies the three shuffle-splitting
/// axioms of the double product; at weight 1 the triple satisfies the
/// six quasi-shuffle axioms with the carrier product as the third
/// (letter-merging) component.
pub fn half_products<A: RbAlgebra>(
    inst: &A,
    x: &A::Elem,
    y: &A::Elem,
) -> (A::Elem, A::Elem, A::Elem) {
    (
        inst.mul(x, &inst.rb(y)),
        inst.mul(&inst.rb(x), y),
        inst.mul(x, y),
    )
}

/// The corrected left half product `x < y := xR(y) - xy = -xR~(y)` at
/// weight 1, which together with `x > y = R(x)y` satisfies the
/// weight-zero shuffle axioms for the double product.
pub fn link_half_product<A: RbAlgebra>(inst: &A, x: &A::Elem, y: &A::Elem) -> A::Elem {
    inst.sub(&inst.mul(x, &inst.rb(y)), &inst.mul(x, y))
}

/// The left pre-Lie product `x . y = R(x)y + yR~(x) = [R(x),y] +
/// theta yx`. On commutative carriers it collapses to `theta yx`; at
/// weight 0 it is the commutator `[R(x),y]`.
pub fn prelie_product<A: RbAlgebra>(inst: &A, x: &A::Elem, y: &A::Elem) -> A::Elem {
    inst.add(&inst.mul(&inst.rb(x), y), &inst.mul(y, &inst.rb_tilde(x)))
}

/// Left pre-Lie associator-symmetry residual:
/// `(x.y).z - x.(y.z) - (y.x).z + y.(x.z)`; zero for a left pre-Lie
/// product.
pub fn prelie_residual<A: RbAlgebra>(
    inst: &A,
    prelie: &impl Fn(&A::Elem, &A::Elem) -> A::Elem,
    x: &A::Elem,
    y: &A::Elem,
    z: &A::Elem,
) -> A::Elem {
    let a = inst.sub(&prelie(&prelie(x, y), z), &prelie(x, &prelie(y, z)));
    let b = inst.sub(&prelie(&prelie(y, x), z), &prelie(y, &prelie(x, z)));
    inst.sub(&a, &b)
}

/// The post-Lie package: `x |> y = [R(x),y]`, the scaled bracket
/// `[x,y]^theta = -theta[x,y]`, and the induced bracket
/// `[[x,y]] = [R(x),y] + [x,R(y)] - theta[x,y]`, for which R satisfies
/// `R([[x,y]]) = [R(x),R(y)]`.
pub fn postlie_products<A: RbAlgebra>(
    inst: &A,
    x: &A::Elem,
    y: &A::Elem,
) -> (A::Elem, A::Elem, A::Elem) {
    let triangle = inst.commutator(&inst.rb(x), y);
    let bracket = inst.scale(&-inst.weight(), &inst.commutator(x, y));
    let double = inst.sub(
        &inst.add(
            &inst.commutator(&inst.rb(x), y),
            &inst.commutator(x, &inst.rb(y)),
        ),
        &inst.scale(&inst.weight(), &inst.commutator(x, y)),
    );
    (triangle, bracket, double)
}

/// Residuals of the two post-Lie axioms for `(|>, [.,.]^theta)`:
///
/// ```text
/// x |> [y,z]^t  = [x |> y, z]^t + [y, x |> z]^t
/// [x,y]^t |> z  = x|>(y|>z) - (x|>y)|>z - y|>(x|>z) + (y|>x)|>z
/// ```
pub fn postlie_residuals<A: RbAlgebra>(
    inst: &A,
    x: &A::Elem,
    y: &A::Elem,
    z: &A::Elem,
) -> (A::Elem, A::Elem) {
    let theta = inst.weight();
    let tri = |a: &A::Elem, b: &A::Elem| inst.commutator(&inst.rb(a), b);
    let br = |a: &A::Elem, b: &A::Elem| inst.scale(&-theta.clone(), &inst.commutator(a, b));
    let first = inst.sub(
        &tri(x, &br(y, z)),
        &inst.add(&br(&tri(x, y), z), &br(y, &tri(x, z))),
    );
    let assoc = |a: &A::Elem, b: &A::Elem, c: &A::Elem| {
        inst.sub(&tri(a, &tri(b, c)), &tri(&tri(a, b), c))
    };
    let second = inst.sub(&tri(&br(x, y), z), &inst.sub(&assoc(x, y, z), &assoc(y, x, z)));
    (first, second)
}

/// Jacobi residual for a bracket.
pub fn jacobi_residual<A: RbAlgebra>(
    inst: &A,
    bracket: &impl Fn(&A::Elem, &A::Elem) -> A::Elem,
    x: &A::Elem,
    y: &A::Elem,
    z: &A::Elem,
) -> A::Elem {
    inst.add(
        &bracket(x, &bracket(y, z)),
        &inst.add(&bracket(y, &bracket(z, x)), &bracket(z, &bracket(x, y))),
    )
}

pub(crate) fn rat_pow(base: &Rational, k: usize) -> Rational {
    let mut out = Rational::from_integer(1.into());
    for _ in 0..k {
        out = &out * base;
    }
    out
}

/// The modified operator `B = R - R~ = 2R - theta id`.
pub fn modified_map<A: RbAlgebra>(inst: &A, x: &A::Elem) -> A::Elem {
    inst.sub(&inst.scale(&Rational::from_integer(2.into()), &inst.rb(x)), &inst.scale(&inst.weight(), x))
}

/// Residuals of the modified relation and its consequences:
/// `B(x)B(y) = B(B(x)y + xB(y)) - theta^2 xy`, the half-sum identity
/// `x*y = (B(x)y + xB(y))/2`, and the bracket analogue
/// `[B(x),B(y)] = B([B(x),y] + [x,B(y)]) - theta^2 [x,y]`.
pub fn modified_residuals<A: RbAlgebra>(
    inst: &A,
    x: &A::Elem,
    y: &A::Elem,
) -> (A::Elem, A::Elem, A::Elem) {
    let theta2 = inst.weight() * inst.weight();
    let b = |e: &A::Elem| modified_map(inst, e);
    let prod = inst.sub(
        &inst.mul(&b(x), &b(y)),
        &inst.sub(
            &b(&inst.add(&inst.mul(&b(x), y), &inst.mul(x, &b(y)))),
            &inst.scale(&theta2, &inst.mul(x, y)),
        ),
    );
    let half = inst.sub(
        &double_product(inst, x, y),
        &inst.scale(
            &crate::algebra::rat(1, 2),
            &inst.add(&inst.mul(&b(x), y), &inst.mul(x, &b(y))),
        ),
    );
    let bracket = inst.sub(
        &inst.commutator(&b(x), &b(y)),
        &inst.sub(
            &b(&inst.add(
                &inst.commutator(&b(x), y),
                &inst.commutator(x, &b(y)),
            )),
            &inst.scale(&theta2, &inst.commutator(x, y)),
        ),
    );
    (prod, half, bracket)
}

/// Constructor-time self test: operator linearity, all four relation
/// residuals, and product associativity on `samples` sampled pairs /
/// triples. Panics on the first violation; instances call this with
/// 100 samples so that a constructed value certifies the axioms.
pub(crate) fn self_check<A: RbAlgebra>(inst: &A, samples: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e55ed);
    let zero = inst.zero();
    for _ in 0..samples {
        let x = inst.sample(&mut rng);
        let y = inst.sample(&mut rng);
        let z = inst.sample(&mut rng);
        let c = crate::algebra::rat(3, 2);
        let lin = inst.sub(
            &inst.rb(&inst.add(&x, &inst.scale(&c, &y))),
            &inst.add(&inst.rb(&x), &inst.scale(&c, &inst.rb(&y))),
        );
        assert!(lin == zero, "{}: R is not linear", inst.name());
        let res = rb_check(inst, &x, &y);
        assert!(res.all_zero(&zero), "{}: Rota-Baxter relation fails", inst.name());
        let assoc = inst.sub(&inst.mul(&inst.mul(&x, &y), &z), &inst.mul(&x, &inst.mul(&y, &z)));
        assert!(assoc == zero, "{}: product is not associative", inst.name());
        if inst.is_commutative() {
            let comm = inst.sub(&inst.mul(&x, &y), &inst.mul(&y, &x));
            assert!(comm == zero, "{}: carrier is not commutative", inst.name());
        }
    }
}
