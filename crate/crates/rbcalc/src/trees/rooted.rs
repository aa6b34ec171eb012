//! Labeled rooted trees: the free pre-Lie algebra under grafting, the
//! symmetric braces it generates, the enveloping product on forests, and
//! the Magnus element.
//!
//! Trees are non-planar: children are kept sorted by canonical encoding,
//! so structural equality is isomorphism of labeled trees. A forest is a
//! multiset of trees (the monomials of the free commutative algebra over
//! trees); the empty forest is the unit.

use std::fmt;

use itertools::Itertools;

use crate::algebra::{
    bilinear, factorial, rat_int, BasisElem, LinComb, Pair, ParseBasis, Rational, TruncatedSeries,
};
use crate::error::{Error, Result};

/// A rooted tree with labels drawn from a generator alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTree {
    label: u32,
    children: Vec<RootedTree>,
}

impl RootedTree {
    pub fn new(label: u32, mut children: Vec<RootedTree>) -> Self {
        children.sort_by(|a, b| a.encode().cmp(&b.encode()));
        RootedTree { label, children }
    }

    pub fn leaf(label: u32) -> Self {
        RootedTree { label, children: vec![] }
    }

    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn degree(&self) -> usize {
        1 + self.children.iter().map(|c| c.degree()).sum::<usize>()
    }

    /// Attaches an extra child and re-canonicalizes.
    fn with_child(&self, extra: RootedTree) -> RootedTree {
        let mut children = self.children.clone();
        children.push(extra);
        RootedTree::new(self.label, children)
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.children.is_empty() {
            write!(f, "[")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl BasisElem for RootedTree {
    fn encode(&self) -> String {
        self.to_string()
    }
    fn degree(&self) -> usize {
        self.degree()
    }
}

impl ParseBasis for RootedTree {
    fn parse_encoded(s: &str) -> Result<Self> {
        fn parse_tree(s: &[u8], i: usize) -> Result<(RootedTree, usize)> {
            let mut j = i;
            while j < s.len() && s[j].is_ascii_digit() {
                j += 1;
            }
            if j == i {
                return Err(Error::MalformedInput("expected a label".into()));
            }
            let label: u32 = std::str::from_utf8(&s[i..j])
                .unwrap()
                .parse()
                .map_err(|_| Error::MalformedInput("label overflow".into()))?;
            let mut children = Vec::new();
            if s.get(j) == Some(&b'[') {
                j += 1;
                loop {
                    let (c, k) = parse_tree(s, j)?;
                    children.push(c);
                    match s.get(k) {
                        Some(b',') => j = k + 1,
                        Some(b']') => {
                            j = k + 1;
                            break;
                        }
                        _ => return Err(Error::MalformedInput("expected ',' or ']'".into())),
                    }
                }
            }
            Ok((RootedTree::new(label, children), j))
        }
        let bytes = s.as_bytes();
        let (t, end) = parse_tree(bytes, 0)?;
        if end != bytes.len() {
            return Err(Error::MalformedInput(format!("trailing input in {s}")));
        }
        Ok(t)
    }
}

/// A multiset of rooted trees; the unit of the enveloping algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest {
    trees: Vec<RootedTree>,
}

impl Forest {
    pub fn new(mut trees: Vec<RootedTree>) -> Self {
        trees.sort_by(|a, b| a.encode().cmp(&b.encode()));
        Forest { trees }
    }

    pub fn empty() -> Self {
        Forest { trees: vec![] }
    }

    pub fn single(t: RootedTree) -> Self {
        Forest { trees: vec![t] }
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.trees.iter().map(|t| t.degree()).sum()
    }

    /// Multiset union: the commutative concatenation product.
    pub fn union(&self, other: &Forest) -> Forest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest::new(trees)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trees.is_empty() {
            return write!(f, "1");
        }
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl BasisElem for Forest {
    fn encode(&self) -> String {
        self.to_string()
    }
    fn degree(&self) -> usize {
        self.degree()
    }
}

impl ParseBasis for Forest {
    fn parse_encoded(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(Forest::empty());
        }
        let trees: Result<Vec<RootedTree>> =
            s.split('.').map(RootedTree::parse_encoded).collect();
        Ok(Forest::new(trees?))
    }
}

/// Grafting: the sum over all vertices of `target` of attaching the root
/// of `sprout` below that vertex. This is the free pre-Lie product.
pub fn prelie_graft(sprout: &RootedTree, target: &RootedTree) -> LinComb<RootedTree> {
    let mut out = LinComb::zero();
    out.add_term(target.with_child(sprout.clone()), rat_int(1));
    for (i, c) in target.children.iter().enumerate() {
        for (g, coeff) in prelie_graft(sprout, c).iter() {
            let mut children = target.children.clone();
            children[i] = g.clone();
            out.add_term(RootedTree::new(target.label, children), coeff.clone());
        }
    }
    out
}

/// Number of vertices of `t`, with each vertex assigned its preorder index.
fn vertex_count(t: &RootedTree) -> usize {
    t.degree()
}

/// Attaches, for each preorder vertex index, a list of extra subtrees.
fn attach_lists(t: &RootedTree, lists: &[Vec<RootedTree>], next: &mut usize) -> RootedTree {
    let my = *next;
    *next += 1;
    let mut children: Vec<RootedTree> = Vec::with_capacity(t.children.len() + lists[my].len());
    for c in &t.children {
        children.push(attach_lists(c, lists, next));
    }
    children.extend(lists[my].iter().cloned());
    RootedTree::new(t.label, children)
}

/// Simultaneous grafting: each tree of the forest lands on some vertex of
/// the target, independently; sum over all assignments.
pub fn brace_direct(forest: &Forest, target: &RootedTree) -> LinComb<RootedTree> {
    let nv = vertex_count(target);
    let k = forest.len();
    let mut out = LinComb::zero();
    for assignment in (0..k).map(|_| 0..nv).multi_cartesian_product() {
        let mut lists: Vec<Vec<RootedTree>> = vec![Vec::new(); nv];
        for (tree_idx, &v) in assignment.iter().enumerate() {
            lists[v].push(forest.trees[tree_idx].clone());
        }
        let mut next = 0;
        out.add_term(attach_lists(target, &lists, &mut next), rat_int(1));
    }
    out
}

/// Symmetric brace operation, by the defining recursion:
/// `{w} v` is grafting, and
/// `{w1,...,wn} v = {wn}({w1,...,w(n-1)} v)
///                  - sum_i {w1,...,{wn}wi,...,w(n-1)} v`.
pub fn brace(forest: &Forest, target: &RootedTree) -> LinComb<RootedTree> {
    let k = forest.len();
    if k == 0 {
        return LinComb::basis(target.clone());
    }
    if k == 1 {
        return prelie_graft(&forest.trees[0], target);
    }
    let last = &forest.trees[k - 1];
    let head = Forest::new(forest.trees[..k - 1].to_vec());
    let inner = brace(&head, target);
    let mut out = LinComb::zero();
    for (t, c) in inner.iter() {
        for (g, d) in prelie_graft(last, t).iter() {
            out.add_term(g.clone(), d * c);
        }
    }
    for i in 0..k - 1 {
        for (g, c) in prelie_graft(last, &forest.trees[i]).iter() {
            let mut trees = forest.trees[..k - 1].to_vec();
            trees[i] = g.clone();
            let replaced = Forest::new(trees);
            for (t, d) in brace(&replaced, target).iter() {
                out.add_term(t.clone(), -(d * c));
            }
        }
    }
    out
}

fn brace_lin(forests: &LinComb<Forest>, target: &RootedTree) -> LinComb<RootedTree> {
    forests.map(|f| brace(f, target))
}

/// Enveloping (exponential-compatible) product of forests: the sum over
/// all ways to distribute the left trees onto the right trees, bracing
/// each received group into its target and keeping the undistributed
/// part as a free factor.
pub fn gl_product(f: &Forest, g: &Forest) -> LinComb<Forest> {
    let m = f.len();
    let n = g.len();
    let mut out = LinComb::zero();
    for assignment in (0..m).map(|_| 0..=n).multi_cartesian_product() {
        let mut groups: Vec<Vec<RootedTree>> = vec![Vec::new(); n + 1];
        for (j, &slot) in assignment.iter().enumerate() {
            groups[slot].push(f.trees[j].clone());
        }
        let mut term = LinComb::basis(Forest::new(groups[0].clone()));
        for (i, v) in g.trees.iter().enumerate() {
            let braced = brace(&Forest::new(groups[i + 1].clone()), v);
            term = bilinear(&term, &braced, |forest, tree| {
                LinComb::basis(forest.union(&Forest::single(tree.clone())))
            });
        }
        out = out.add(&term);
    }
    out
}

/// Coproduct of the enveloping algebra: unshuffling the multiset of trees.
pub fn gl_coproduct(f: &Forest) -> LinComb<Pair<Forest>> {
    let n = f.len();
    let mut out = LinComb::zero();
    for mask in 0..(1u32 << n) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, t) in f.trees.iter().enumerate() {
            if mask & (1 << i) != 0 {
                left.push(t.clone());
            } else {
                right.push(t.clone());
            }
        }
        out.add_term(Pair(Forest::new(left), Forest::new(right)), rat_int(1));
    }
    out
}

/// Forest-union product on series: exponential of a tree series in the
/// free commutative algebra.
pub fn exp_forest(s: &TruncatedSeries<Forest>) -> Result<TruncatedSeries<Forest>> {
    s.exp(
        |a, b| LinComb::basis(a.union(b)),
        &Forest::empty(),
    )
}

pub fn log_forest(s: &TruncatedSeries<Forest>) -> Result<TruncatedSeries<Forest>> {
    s.log(
        |a, b| LinComb::basis(a.union(b)),
        &Forest::empty(),
    )
}

/// Exponential and logarithm for the enveloping product.
pub fn exp_gl(s: &TruncatedSeries<Forest>) -> Result<TruncatedSeries<Forest>> {
    s.exp(gl_product, &Forest::empty())
}

pub fn log_gl(s: &TruncatedSeries<Forest>) -> Result<TruncatedSeries<Forest>> {
    s.log(gl_product, &Forest::empty())
}

/// Embeds a tree series into the forest algebra.
pub fn tree_series_to_forests(
    s: &TruncatedSeries<RootedTree>,
) -> TruncatedSeries<Forest> {
    let mut out = TruncatedSeries::zero(s.cutoff());
    for d in 0..=s.cutoff() {
        out.set_component(d, s.component(d).map(|t| LinComb::basis(Forest::single(t.clone()))));
    }
    out
}

/// Bernoulli numbers, `B1 = -1/2` convention.
pub fn bernoulli(n: usize) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(rat_int(1));
            continue;
        }
        let mut acc = Rational::from_integer(0.into());
        for (j, bj) in b.iter().enumerate() {
            acc += crate::algebra::binomial(m + 1, j) * bj;
        }
        b.push(-acc / rat_int(m as i64 + 1));
    }
    b[n].clone()
}

/// The Magnus element: the unique tree series with leading term the
/// single-vertex tree solving `{Omega/(exp(Omega)-1)} x = Omega`, the
/// quotient expanded as the Bernoulli series in enveloping powers of
/// `Omega`.
pub fn magnus_element(cutoff: usize) -> Result<TruncatedSeries<RootedTree>> {
    if cutoff == 0 {
        return Err(Error::MalformedInput("Magnus element needs cutoff >= 1".into()));
    }
    let x = RootedTree::leaf(0);
    let mut omega = TruncatedSeries::<RootedTree>::zero(cutoff);
    omega.set_component(1, LinComb::basis(x.clone()));
    for k in 2..=cutoff {
        let trunc = k - 1;
        let omega_f = {
            let mut lowered = TruncatedSeries::<RootedTree>::zero(trunc);
            for d in 1..=trunc {
                lowered.set_component(d, omega.component(d).clone());
            }
            tree_series_to_forests(&lowered)
        };
        let mut bern_series = TruncatedSeries::unit(trunc, &Forest::empty());
        let mut power = TruncatedSeries::unit(trunc, &Forest::empty());
        for j in 1..=trunc {
            power = power.mul(&omega_f, gl_product);
            let coeff = bernoulli(j) / factorial(j);
            bern_series = bern_series.add(&power.scale(&coeff));
        }
        omega.set_component(k, brace_lin(bern_series.component(trunc), &x));
    }
    Ok(omega)
}

/// All rooted trees on one generator with `n` vertices.
pub fn all_trees(n: usize) -> Vec<RootedTree> {
    if n == 0 {
        return vec![];
    }
    all_forests(n - 1)
        .into_iter()
        .map(|f| RootedTree::new(0, f.trees))
        .collect()
}

/// All forests on one generator with total degree `n`.
pub fn all_forests(n: usize) -> Vec<Forest> {
    fn rec(n: usize, pool: &[RootedTree], start: usize, acc: &mut Vec<RootedTree>, out: &mut Vec<Forest>) {
        if n == 0 {
            out.push(Forest::new(acc.clone()));
            return;
        }
        for i in start..pool.len() {
            let d = pool[i].degree();
            if d > n {
                continue;
            }
            acc.push(pool[i].clone());
            rec(n - d, pool, i, acc, out);
            acc.pop();
        }
    }
    let mut pool = Vec::new();
    for k in 1..=n {
        pool.extend(all_trees(k));
    }
    let mut out = Vec::new();
    rec(n, &pool, 0, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn x() -> RootedTree {
        RootedTree::leaf(0)
    }

    fn chain(n: usize) -> RootedTree {
        let mut t = x();
        for _ in 1..n {
            t = RootedTree::new(0, vec![t]);
        }
        t
    }

    #[test]
    fn canonical_children_order() {
        let a = RootedTree::new(0, vec![chain(2), x()]);
        let b = RootedTree::new(0, vec![x(), chain(2)]);
        assert_eq!(a, b);
        assert_eq!(a.encode(), "0[0,0[0]]");
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| all_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20]);
    }

    #[test]
    fn graft_of_leaves_is_chain() {
        assert_eq!(prelie_graft(&x(), &x()), LinComb::basis(chain(2)));
    }

    #[test]
    fn graft_onto_chain() {
        // Grafting a leaf onto the 2-chain hits both vertices.
        let g = prelie_graft(&x(), &chain(2));
        let mut expected = LinComb::zero();
        expected.add_term(RootedTree::new(0, vec![x(), x()]), rat_int(1));
        expected.add_term(chain(3), rat_int(1));
        assert_eq!(g, expected);
    }

    #[test]
    fn prelie_identity_small() {
        // (a▷b)▷c - a▷(b▷c) is symmetric in a and b.
        let trees: Vec<RootedTree> = vec![x(), chain(2), RootedTree::new(0, vec![x(), x()])];
        for a in &trees {
            for b in &trees {
                for c in &trees {
                    let left = {
                        let ab = prelie_graft(a, b);
                        let t1 = ab.map(|t| prelie_graft(t, c));
                        let bc = prelie_graft(b, c);
                        let t2 = bc.map(|t| prelie_graft(a, t));
                        t1.sub(&t2)
                    };
                    let right = {
                        let ba = prelie_graft(b, a);
                        let t1 = ba.map(|t| prelie_graft(t, c));
                        let ac = prelie_graft(a, c);
                        let t2 = ac.map(|t| prelie_graft(b, t));
                        t1.sub(&t2)
                    };
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn brace_pair_of_leaves_is_cherry() {
        let f = Forest::new(vec![x(), x()]);
        let cherry = RootedTree::new(0, vec![x(), x()]);
        assert_eq!(brace(&f, &x()), LinComb::basis(cherry));
    }

    #[test]
    fn brace_matches_simultaneous_grafting() {
        let targets = vec![x(), chain(2), RootedTree::new(0, vec![x(), x()]), chain(3)];
        let forests = vec![
            Forest::empty(),
            Forest::single(x()),
            Forest::new(vec![x(), x()]),
            Forest::new(vec![x(), chain(2)]),
            Forest::new(vec![x(), x(), x()]),
        ];
        for f in &forests {
            for t in &targets {
                assert_eq!(brace(f, t), brace_direct(f, t), "brace({f}, {t})");
            }
        }
    }

    #[test]
    fn gl_product_of_single_trees() {
        // w * v = wv + {w}v.
        let w = chain(2);
        let v = x();
        let prod = gl_product(&Forest::single(w.clone()), &Forest::single(v.clone()));
        let mut expected = LinComb::zero();
        expected.add_term(Forest::new(vec![w.clone(), v.clone()]), rat_int(1));
        expected.add_term(Forest::single(chain(3)), rat_int(1));
        assert_eq!(prod, expected);
    }

    #[test]
    fn gl_product_associative_small() {
        let a = Forest::single(x());
        let b = Forest::new(vec![x(), x()]);
        let c = Forest::single(chain(2));
        let ab_c = bilinear(&gl_product(&a, &b), &LinComb::basis(c.clone()), gl_product);
        let a_bc = bilinear(&LinComb::basis(a.clone()), &gl_product(&b, &c), gl_product);
        assert_eq!(ab_c, a_bc);
        assert_eq!(
            gl_product(&Forest::empty(), &b),
            LinComb::basis(b.clone())
        );
        assert_eq!(
            gl_product(&b, &Forest::empty()),
            LinComb::basis(b.clone())
        );
    }

    #[test]
    fn gl_coproduct_with_multiplicity() {
        let f = Forest::new(vec![x(), x()]);
        let cop = gl_coproduct(&f);
        assert_eq!(cop.coeff(&Pair(Forest::single(x()), Forest::single(x()))), rat_int(2));
        assert_eq!(cop.coeff(&Pair(Forest::empty(), f.clone())), rat_int(1));
        assert_eq!(cop.coeff(&Pair(f.clone(), Forest::empty())), rat_int(1));
        assert_eq!(cop.len(), 3);
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), rat_int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat_int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
    }

    #[test]
    fn bernoulli_against_series_division_oracle() {
        // Coefficients c_n of x/(exp(x)-1) solve sum_j c_j/(n-j+1)! = [n=0].
        let n_max = 10;
        let mut c: Vec<Rational> = vec![rat_int(1)];
        for n in 1..=n_max {
            let mut acc = Rational::from_integer(0.into());
            for (j, cj) in c.iter().enumerate() {
                acc += cj / factorial(n - j + 1);
            }
            c.push(-acc);
        }
        for (n, cn) in c.iter().enumerate() {
            assert_eq!(cn * factorial(n), bernoulli(n), "B_{n}");
        }
    }

    #[test]
    fn magnus_element_degree_two() {
        let omega = magnus_element(2).unwrap();
        assert_eq!(omega.component(1), &LinComb::basis(x()));
        assert_eq!(
            omega.component(2),
            &LinComb::term(chain(2), rat(-1, 2))
        );
    }

    #[test]
    fn magnus_element_is_log_of_group_like() {
        // log (enveloping product) of exp (forest product) of the
        // one-vertex tree reproduces the Magnus element.
        let n = 4;
        let omega = magnus_element(n).unwrap();
        let mut gen = TruncatedSeries::<RootedTree>::zero(n);
        gen.set_component(1, LinComb::basis(x()));
        let grouplike = exp_forest(&tree_series_to_forests(&gen)).unwrap();
        let logged = log_gl(&grouplike).unwrap();
        for d in 0..=n {
            let expected = omega
                .component(d)
                .map(|t| LinComb::basis(Forest::single(t.clone())));
            assert_eq!(logged.component(d), &expected, "degree {d}");
        }
    }

    #[test]
    fn parse_round_trip() {
        for n in 1..=4usize {
            for t in all_trees(n) {
                assert_eq!(RootedTree::parse_encoded(&t.encode()).unwrap(), t);
            }
            for f in all_forests(n) {
                assert_eq!(Forest::parse_encoded(&f.encode()).unwrap(), f);
            }
        }
        assert_eq!(Forest::parse_encoded("1").unwrap(), Forest::empty());
    }
}
