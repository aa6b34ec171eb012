//! Formal power series in a parameter over a Rota-Baxter algebra, and
//! the classical series identities: the two recursive factorization
//! series and their closed-form inverses, the counterterm recursion
//! for idempotent weight-one projectors, the fluctuation identity in
//! the commutative case, and the Bernoulli-weighted pre-Lie fixpoint
//! series whose image under the operator is the logarithm of the left
//! factorization series.
//!
//! Binary series operations truncate to the smaller cutoff of the two
//! operands.

use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{prelie_product, rat_pow, RbAlgebra};
use crate::algebra::{factorial, rat, rat_int, Rational};
use crate::error::{Error, Result};
use crate::trees::rooted::bernoulli;

/// A truncated formal series; the entry at index k is the coefficient
/// of the k-th power of the formal parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeries<E> {
    coeffs: Vec<E>,
}

impl<E> LambdaSeries<E> {
    pub fn from_coeffs(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty());
        LambdaSeries { coeffs }
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &E {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }
}

impl<E: fmt::Display> fmt::Display for LambdaSeries<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "lambda^{k}: {c}")?;
        }
        Ok(())
    }
}

pub fn series_zero<A: RbAlgebra>(inst: &A, cutoff: usize) -> LambdaSeries<A::Elem> {
    LambdaSeries::from_coeffs(vec![inst.zero(); cutoff + 1])
}

pub fn series_one<A: RbAlgebra>(inst: &A, cutoff: usize) -> Result<LambdaSeries<A::Elem>> {
    let unit = require_unit(inst)?;
    let mut coeffs = vec![inst.zero(); cutoff + 1];
    coeffs[0] = unit;
    Ok(LambdaSeries::from_coeffs(coeffs))
}

pub fn series_add<A: RbAlgebra>(
    inst: &A,
    a: &LambdaSeries<A::Elem>,
    b: &LambdaSeries<A::Elem>,
) -> LambdaSeries<A::Elem> {
    let n = a.cutoff().min(b.cutoff());
    LambdaSeries::from_coeffs(
        (0..=n).map(|k| inst.add(&a.coeffs[k], &b.coeffs[k])).collect(),
    )
}

pub fn series_sub<A: RbAlgebra>(
    inst: &A,
    a: &LambdaSeries<A::Elem>,
    b: &LambdaSeries<A::Elem>,
) -> LambdaSeries<A::Elem> {
    let n = a.cutoff().min(b.cutoff());
    LambdaSeries::from_coeffs(
        (0..=n).map(|k| inst.sub(&a.coeffs[k], &b.coeffs[k])).collect(),
    )
}

pub fn series_scale<A: RbAlgebra>(
    inst: &A,
    c: &Rational,
    a: &LambdaSeries<A::Elem>,
) -> LambdaSeries<A::Elem> {
    LambdaSeries::from_coeffs(a.coeffs.iter().map(|e| inst.scale(c, e)).collect())
}

pub fn series_mul<A: RbAlgebra>(
    inst: &A,
    a: &LambdaSeries<A::Elem>,
    b: &LambdaSeries<A::Elem>,
) -> LambdaSeries<A::Elem> {
    let n = a.cutoff().min(b.cutoff());
    let mut coeffs = vec![inst.zero(); n + 1];
    for k in 0..=n {
        for i in 0..=k {
            let term = inst.mul(&a.coeffs[i], &b.coeffs[k - i]);
            coeffs[k] = inst.add(&coeffs[k], &term);
        }
    }
    LambdaSeries::from_coeffs(coeffs)
}

/// Two-sided inverse of a series with unit constant term.
pub fn series_inverse<A: RbAlgebra>(
    inst: &A,
    a: &LambdaSeries<A::Elem>,
) -> Result<LambdaSeries<A::Elem>> {
    let unit = require_unit(inst)?;
    if a.coeffs[0] != unit {
        return Err(Error::MalformedInput(
            "series inverse requires unit constant term".into(),
        ));
    }
    let n = a.cutoff();
    let mut coeffs = vec![inst.zero(); n + 1];
    coeffs[0] = unit;
    for k in 1..=n {
        let mut acc = inst.zero();
        for i in 1..=k {
            acc = inst.add(&acc, &inst.mul(&a.coeffs[i], &coeffs[k - i]));
        }
        coeffs[k] = inst.neg(&acc);
    }
    Ok(LambdaSeries::from_coeffs(coeffs))
}

/// Exponential of a series with zero constant term.
pub fn series_exp<A: RbAlgebra>(
    inst: &A,
    a: &LambdaSeries<A::Elem>,
) -> Result<LambdaSeries<A::Elem>> {
    if !inst.is_zero(&a.coeffs[0]) {
        return Err(Error::MalformedInput(
            "series exponential requires zero constant term".into(),
        ));
    }
    let n = a.cutoff();
    let mut result = series_one(inst, n)?;
    let mut power = series_one(inst, n)?;
    for k in 1..=n {
        power = series_mul(inst, &power, a);
        let c = rat_int(1) / factorial(k);
        result = series_add(inst, &result, &series_scale(inst, &c, &power));
    }
    Ok(result)
}

/// Logarithm of a series with unit constant term.
pub fn series_log<A: RbAlgebra>(
    inst: &A,
    a: &LambdaSeries<A::Elem>,
) -> Result<LambdaSeries<A::Elem>> {
    let one = series_one(inst, a.cutoff())?;
    if a.coeffs[0] != one.coeffs[0] {
        return Err(Error::MalformedInput(
            "series logarithm requires unit constant term".into(),
        ));
    }
    let u = series_sub(inst, a, &one);
    let n = a.cutoff();
    let mut result = series_zero(inst, n);
    let mut power = u.clone();
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let c = rat(sign, k as i64);
        result = series_add(inst, &result, &series_scale(inst, &c, &power));
        if k < n {
            power = series_mul(inst, &power, &u);
        }
    }
    Ok(result)
}

fn require_unit<A: RbAlgebra>(inst: &A) -> Result<A::Elem> {
    inst.one().ok_or_else(|| {
        Error::UnsupportedInstance(format!("{} has no unit", inst.name()))
    })
}

/// The two recursive factorization series and their closed-form
/// inverses:
///
/// ```text
/// ell     = 1 + lambda R(ell x)       r     = 1 + lambda R~(x r)
/// ell^-1  = 1 - lambda R(x r)         r^-1  = 1 - lambda R~(ell x)
/// ```
///
/// satisfying `ell r = 1 + lambda theta ell x r`, or equivalently
/// `ell^-1 r^-1 = 1 - lambda theta x`.
#[derive(Debug, Clone)]
pub struct AtkinsonFactorization<E> {
    pub ell: LambdaSeries<E>,
    pub r: LambdaSeries<E>,
    pub ell_inv: LambdaSeries<E>,
    pub r_inv: LambdaSeries<E>,
}

impl<E: Clone + PartialEq + fmt::Debug + fmt::Display> AtkinsonFactorization<E> {
    /// `ell^-1 r^-1 - (1 - lambda theta x)`; zero when the
    /// factorization holds.
    pub fn factorization_residual<A: RbAlgebra<Elem = E>>(
        &self,
        inst: &A,
        x: &E,
    ) -> Result<LambdaSeries<E>> {
        let n = self.ell.cutoff();
        let mut rhs = series_one(inst, n)?;
        if n >= 1 {
            rhs.coeffs[1] = inst.neg(&inst.scale(&inst.weight(), x));
        }
        let lhs = series_mul(inst, &self.ell_inv, &self.r_inv);
        Ok(series_sub(inst, &lhs, &rhs))
    }
}

pub fn atkinson_solve<A: RbAlgebra>(
    inst: &A,
    x: &A::Elem,
    cutoff: usize,
) -> Result<AtkinsonFactorization<A::Elem>> {
    let unit = require_unit(inst)?;
    let mut ell = vec![unit.clone()];
    let mut r = vec![unit.clone()];
    let mut ell_inv = vec![unit.clone()];
    let mut r_inv = vec![unit];
    for k in 1..=cutoff {
        ell.push(inst.rb(&inst.mul(&ell[k - 1], x)));
        r.push(inst.rb_tilde(&inst.mul(x, &r[k - 1])));
        ell_inv.push(inst.neg(&inst.rb(&inst.mul(x, &r[k - 1]))));
        r_inv.push(inst.neg(&inst.rb_tilde(&inst.mul(&ell[k - 1], x))));
    }
    Ok(AtkinsonFactorization {
        ell: LambdaSeries::from_coeffs(ell),
        r: LambdaSeries::from_coeffs(r),
        ell_inv: LambdaSeries::from_coeffs(ell_inv),
        r_inv: LambdaSeries::from_coeffs(r_inv),
    })
}

/// Counterterm pair produced by the graded recursion
/// `f_n = R((f x)_n)`, `h^-1_n = -R~((f x)_n)` with
/// `(f x)_n = sum_{0<=i<n} f_i x_{n-i}`, so that `f = 1 + R(f x)`,
/// `h^-1 = 1 - R~(f x)`, and `f (1 - x) = h^-1`.
#[derive(Debug, Clone)]
pub struct BogoliubovPair<E> {
    pub f: LambdaSeries<E>,
    pub h_inv: LambdaSeries<E>,
}

/// Runs the counterterm recursion on the graded components
/// `xs = [x_1, ..., x_n]`. Requires weight one, a unit killed by the
/// operator, and an idempotent operator (checked on seeded samples);
/// these hypotheses make the operator a direct-sum projector, which is
/// what the recursion inverts.
pub fn bogoliubov<A: RbAlgebra>(inst: &A, xs: &[A::Elem]) -> Result<BogoliubovPair<A::Elem>> {
    if xs.is_empty() {
        return Err(Error::MalformedInput(
            "at least one graded component is required".into(),
        ));
    }
    let unit = require_unit(inst)?;
    if inst.weight() != rat_int(1) {
        return Err(Error::UnsupportedInstance(format!(
            "counterterm recursion requires weight 1, got {} in {}",
            inst.weight(),
            inst.name()
        )));
    }
    if !inst.is_zero(&inst.rb(&unit)) {
        return Err(Error::UnsupportedInstance(format!(
            "counterterm recursion requires R(1) = 0 in {}",
            inst.name()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1de3_90de);
    for _ in 0..25 {
        let s = inst.sample(&mut rng);
        let rs = inst.rb(&s);
        if inst.rb(&rs) != rs {
            return Err(Error::UnsupportedInstance(format!(
                "counterterm recursion requires an idempotent operator in {}",
                inst.name()
            )));
        }
    }
    let n = xs.len();
    let mut f = vec![unit.clone()];
    let mut h_inv = vec![unit];
    for k in 1..=n {
        let mut fx = inst.zero();
        for i in 0..k {
            fx = inst.add(&fx, &inst.mul(&f[i], &xs[k - 1 - i]));
        }
        f.push(inst.rb(&fx));
        h_inv.push(inst.neg(&inst.rb_tilde(&fx)));
    }
    Ok(BogoliubovPair {
        f: LambdaSeries::from_coeffs(f),
        h_inv: LambdaSeries::from_coeffs(h_inv),
    })
}

/// Residual of the fluctuation identity in a commutative instance:
/// `log(ell) - R(sum_{n>0} theta^(n-1) lambda^n x^n / n)`, where `ell`
/// is the left factorization series. Zero when the identity holds.
pub fn spitzer_check<A: RbAlgebra>(
    inst: &A,
    x: &A::Elem,
    cutoff: usize,
) -> Result<LambdaSeries<A::Elem>> {
    if !inst.is_commutative() {
        return Err(Error::UnsupportedInstance(format!(
            "the fluctuation identity needs a commutative instance, got {}",
            inst.name()
        )));
    }
    let ell = atkinson_solve(inst, x, cutoff)?.ell;
    let lhs = series_log(inst, &ell)?;
    let theta = inst.weight();
    let mut rhs = vec![inst.zero()];
    let mut power = x.clone();
    for k in 1..=cutoff {
        if k > 1 {
            power = inst.mul(&power, x);
        }
        let c = rat_pow(&theta, k - 1) / rat_int(k as i64);
        rhs.push(inst.rb(&inst.scale(&c, &power)));
    }
    Ok(series_sub(inst, &lhs, &LambdaSeries::from_coeffs(rhs)))
}

/// Coefficients of the Bernoulli-weighted fixpoint series
///
/// ```text
/// w = x + sum_{j>0} (B_j / j!) L^j(x),    L(y) = -w . y
/// ```
///
/// in any left pre-Lie algebra, truncated at the given order; entry k
/// is the k-th coefficient (entry 0 is zero). In a commutative
/// Rota-Baxter carrier the series collapses to
/// `sum_k theta^(k-1) x^k / k`; in general its image under the
/// operator is the logarithm of the left factorization series.
pub fn prelie_magnus_terms<T: Clone>(
    x: &T,
    cutoff: usize,
    zero: impl Fn() -> T,
    add: impl Fn(&T, &T) -> T,
    scale: impl Fn(&Rational, &T) -> T,
    prelie: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let minus_one = rat_int(-1);
    let mut omega = vec![zero(); cutoff + 1];
    if cutoff >= 1 {
        omega[1] = x.clone();
    }
    for k in 2..=cutoff {
        // chain[d] = degree-d part of L^j(x), rebuilt for each j
        let mut chain = vec![zero(); k + 1];
        chain[1] = x.clone();
        let mut omega_k = zero();
        for j in 1..k {
            let mut next = vec![zero(); k + 1];
            for d in 2..=k {
                for a in 1..d {
                    let term = prelie(&scale(&minus_one, &omega[a]), &chain[d - a]);
                    next[d] = add(&next[d], &term);
                }
            }
            chain = next;
            let c = bernoulli(j) / factorial(j);
            if c != rat_int(0) {
                omega_k = add(&omega_k, &scale(&c, &chain[k]));
            }
        }
        omega[k] = omega_k;
    }
    omega
}

/// The fixpoint series of `prelie_magnus_terms` evaluated in the
/// derived pre-Lie structure `x . y = R(x)y + yR~(x)` of the instance.
pub fn prelie_magnus<A: RbAlgebra>(
    inst: &A,
    x: &A::Elem,
    cutoff: usize,
) -> LambdaSeries<A::Elem> {
    let coeffs = prelie_magnus_terms(
        x,
        cutoff,
        || inst.zero(),
        |a, b| inst.add(a, b),
        |c, a| inst.scale(c, a),
        |a, b| prelie_product(inst, a, b),
    );
    LambdaSeries::from_coeffs(coeffs)
}
