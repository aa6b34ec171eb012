//! Degree-truncated formal series over a graded basis.



use crate::algebra::lincomb::{bilinear, BasisElem, LinComb};
use crate::algebra::rational::{factorial, rat_int, Rational};
use crate::error::{Error, Result};

/// A series truncated at a fixed cutoff: components indexed by degree
/// `0..=cutoff`, each homogeneous of its index degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries<B: BasisElem> {
    cutoff: usize,
    components: Vec<LinComb<B>>,
}

impl<B: BasisElem> TruncatedSeries<B> {
    pub fn zero(cutoff: usize) -> Self {
        TruncatedSeries {
            cutoff,
            components: vec![LinComb::zero(); cutoff + 1],
        }
    }

    /// Builds a series from a finite combination by splitting into
    /// homogeneous parts; terms above the cutoff are an error, not a
    /// silent drop.
    pub fn from_lincomb(x: &LinComb<B>, cutoff: usize) -> Result<Self> {
        let mut s = Self::zero(cutoff);
        for (b, c) in x.iter() {
            let d = b.degree();
            if d > cutoff {
                return Err(Error::CutoffExceeded(format!(
                    "term of degree {d} above cutoff {cutoff}"
                )));
            }
            s.components[d].add_term(b.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn component(&self, d: usize) -> &LinComb<B> {
        &self.components[d]
    }

    pub fn set_component(&mut self, d: usize, x: LinComb<B>) {
        assert!(x.is_homogeneous(d), "component not homogeneous of degree {d}");
        self.components[d] = x;
    }

    pub fn add_to_component(&mut self, d: usize, x: &LinComb<B>) {
        assert!(x.is_homogeneous(d), "component not homogeneous of degree {d}");
        self.components[d] = self.components[d].add(x);
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Binary operations on mismatched cutoffs truncate to the minimum.
    fn align(&self, other: &Self) -> usize {
        self.cutoff.min(other.cutoff)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.align(other);
        let mut out = Self::zero(n);
        for d in 0..=n {
            out.components[d] = self.components[d].add(&other.components[d]);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.align(other);
        let mut out = Self::zero(n);
        for d in 0..=n {
            out.components[d] = self.components[d].sub(&other.components[d]);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.cutoff);
        for d in 0..=self.cutoff {
            out.components[d] = self.components[d].scale(c);
        }
        out
    }

    /// Truncated product for a degree-additive basis product.
    pub fn mul(&self, other: &Self, mut prod: impl FnMut(&B, &B) -> LinComb<B>) -> Self {
        let n = self.align(other);
        let mut out = Self::zero(n);
        for da in 0..=n {
            if self.components[da].is_zero() {
                continue;
            }
            for db in 0..=(n - da) {
                if other.components[db].is_zero() {
                    continue;
                }
                let piece = bilinear(&self.components[da], &other.components[db], &mut prod);
                assert!(
                    piece.is_homogeneous(da + db),
                    "basis product is not degree-additive"
                );
                out.components[da + db] = out.components[da + db].add(&piece);
            }
        }
        out
    }

    pub fn unit(cutoff: usize, unit: &B) -> Self {
        let mut s = Self::zero(cutoff);
        s.components[0] = LinComb::basis(unit.clone());
        s
    }

    /// exp of a series with vanishing degree-0 part.
    pub fn exp(&self, mut prod: impl FnMut(&B, &B) -> LinComb<B>, unit: &B) -> Result<Self> {
        if !self.components[0].is_zero() {
            return Err(Error::MalformedInput(
                "series exp requires a vanishing degree-0 component".into(),
            ));
        }
        let mut out = Self::unit(self.cutoff, unit);
        let mut power = Self::unit(self.cutoff, unit);
        for k in 1..=self.cutoff {
            power = power.mul(self, &mut prod);
            let inv = rat_int(1) / factorial(k);
            out = out.add(&power.scale(&inv));
        }
        Ok(out)
    }

    /// log of a series with degree-0 part equal to the unit basis element.
    pub fn log(&self, mut prod: impl FnMut(&B, &B) -> LinComb<B>, unit: &B) -> Result<Self> {
        let expected = LinComb::basis(unit.clone());
        if self.components[0] != expected {
            return Err(Error::MalformedInput(
                "series log requires degree-0 component equal to the unit".into(),
            ));
        }
        let mut u = self.clone();
        u.components[0] = LinComb::zero();
        let mut out = Self::zero(self.cutoff);
        let mut power = Self::unit(self.cutoff, unit);
        for k in 1..=self.cutoff {
            power = power.mul(&u, &mut prod);
            let sign = if k % 2 == 1 { rat_int(1) } else { rat_int(-1) };
            out = out.add(&power.scale(&(sign / rat_int(k as i64))));
        }
        Ok(out)
    }

    /// Flattens back to a single combination.
    pub fn to_lincomb(&self) -> LinComb<B> {
        let mut out = LinComb::zero();
        for c in &self.components {
            out = out.add(c);
        }
        out
    }
}
