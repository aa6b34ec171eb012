//! Planar binary trees, their simplex-subdivision product, and their
//! arborification into sums of permutations.
//!
//! A tree is either empty (the algebra unit) or a grafting `L ∨ R` of two
//! subtrees on a new root. Vertices carry implicit labels `1..=n` in
//! in-order traversal: left subtree first, then the root, then the right
//! subtree. The vertex poset puts the root lowest; a linearization is a
//! root-first listing of the vertices, identified with the permutation
//! sending the j-th listed vertex to `n+1-j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{rat_int, BasisElem, LinComb, Pair, ParseBasis};
use crate::error::{Error, Result};
use crate::permutations::Permutation;

/// A planar binary tree; `Empty` is the unit with zero vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pbt {
    Empty,
    Node(Box<Pbt>, Box<Pbt>),
}

impl Pbt {
    pub fn leaf() -> Self {
        Pbt::Node(Box::new(Pbt::Empty), Box::new(Pbt::Empty))
    }

    pub fn graft(left: Pbt, right: Pbt) -> Self {
        Pbt::Node(Box::new(left), Box::new(right))
    }

    pub fn degree(&self) -> usize {
        match self {
            Pbt::Empty => 0,
            Pbt::Node(l, r) => l.degree() + 1 + r.degree(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Pbt::Empty)
    }

    /// In-order label of the root, given the label offset of the subtree.
    fn root_label(&self, offset: usize) -> usize {
        match self {
            Pbt::Empty => unreachable!("the empty tree has no root"),
            Pbt::Node(l, _) => offset + l.degree() + 1,
        }
    }

    /// `(child label, parent label)` edges of the vertex poset.
    fn edges(&self, offset: usize, parent: Option<usize>, out: &mut Vec<(usize, Option<usize>)>) {
        if let Pbt::Node(l, r) = self {
            let me = self.root_label(offset);
            out.push((me, parent));
            l.edges(offset, Some(me), out);
            r.edges(me, Some(me), out);
        }
    }
}

impl fmt::Display for Pbt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pbt::Empty => write!(f, "_"),
            Pbt::Node(l, r) => write!(f, "({l}|{r})"),
        }
    }
}

impl BasisElem for Pbt {
    fn encode(&self) -> String {
        self.to_string()
    }
    fn degree(&self) -> usize {
        self.degree()
    }
}

impl ParseBasis for Pbt {
    fn parse_encoded(s: &str) -> Result<Self> {
        fn parse_at(s: &[u8], i: usize) -> Result<(Pbt, usize)> {
            match s.get(i) {
                Some(b'_') => Ok((Pbt::Empty, i + 1)),
                Some(b'(') => {
                    let (l, j) = parse_at(s, i + 1)?;
                    if s.get(j) != Some(&b'|') {
                        return Err(Error::MalformedInput("expected '|'".into()));
                    }
                    let (r, k) = parse_at(s, j + 1)?;
                    if s.get(k) != Some(&b')') {
                        return Err(Error::MalformedInput("expected ')'".into()));
                    }
                    Ok((Pbt::graft(l, r), k + 1))
                }
                _ => Err(Error::MalformedInput("expected '_' or '('".into())),
            }
        }
        let bytes = s.as_bytes();
        let (t, end) = parse_at(bytes, 0)?;
        if end != bytes.len() {
            return Err(Error::MalformedInput(format!("trailing input in {s}")));
        }
        Ok(t)
    }
}

/// All planar binary trees with `n` vertices (Catalan many).
pub fn all_pbts(n: usize) -> Vec<Pbt> {
    if n == 0 {
        return vec![Pbt::Empty];
    }
    let mut out = Vec::new();
    for k in 0..n {
        for l in all_pbts(k) {
            for r in all_pbts(n - 1 - k) {
                out.push(Pbt::graft(l.clone(), r));
            }
        }
    }
    out
}

/// Product of planar binary trees: with `T = T1 ∨ T2` and `U = U1 ∨ U2`,
/// `T*U = (T*U1) ∨ U2 + T1 ∨ (T2*U)`, and the empty tree is the unit.
pub fn pbt_product(t: &Pbt, u: &Pbt) -> LinComb<Pbt> {
    match (t, u) {
        (Pbt::Empty, _) => LinComb::basis(u.clone()),
        (_, Pbt::Empty) => LinComb::basis(t.clone()),
        (Pbt::Node(t1, t2), Pbt::Node(u1, u2)) => {
            let mut out = LinComb::zero();
            for (w, c) in pbt_product(t, u1).iter() {
                out.add_term(Pbt::graft(w.clone(), (**u2).clone()), c.clone());
            }
            for (w, c) in pbt_product(t2, u).iter() {
                out.add_term(Pbt::graft((**t1).clone(), w.clone()), c.clone());
            }
            out
        }
    }
}

/// Root-first listings of the vertex poset, as permutations: the j-th
/// listed vertex label receives the value `n+1-j`.
pub fn linearizations(t: &Pbt) -> Vec<Permutation> {
    let n = t.degree();
    if n == 0 {
        return vec![Permutation::empty()];
    }
    let mut edges = Vec::new();
    t.edges(0, None, &mut edges);
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut root = 0;
    for &(v, p) in &edges {
        match p {
            Some(q) => children.entry(q).or_default().push(v),
            None => root = v,
        }
    }
    let mut out = Vec::new();
    let mut listing = Vec::with_capacity(n);
    let mut available = BTreeSet::from([root]);
    fn recurse(
        listing: &mut Vec<usize>,
        available: &mut BTreeSet<usize>,
        children: &BTreeMap<usize, Vec<usize>>,
        n: usize,
        out: &mut Vec<Permutation>,
    ) {
        if listing.len() == n {
            let mut values = vec![0u32; n];
            for (j, &v) in listing.iter().enumerate() {
                values[v - 1] = (n - j) as u32;
            }
            out.push(Permutation::new(values).expect("listing covers all labels"));
            return;
        }
        let frontier: Vec<usize> = available.iter().copied().collect();
        for v in frontier {
            available.remove(&v);
            listing.push(v);
            if let Some(cs) = children.get(&v) {
                for &c in cs {
                    available.insert(c);
                }
            }
            recurse(listing, available, children, n, out);
            if let Some(cs) = children.get(&v) {
                for &c in cs {
                    available.remove(&c);
                }
            }
            listing.pop();
            available.insert(v);
        }
    }
    recurse(&mut listing, &mut available, &children, n, &mut out);
    out
}

/// The arborification map: a tree goes to the sum of its linearizations.
/// It embeds the tree algebra into the permutation algebra.
pub fn arborify(t: &Pbt) -> LinComb<Permutation> {
    let mut out = LinComb::zero();
    for sigma in linearizations(t) {
        out.add_term(sigma, rat_int(1));
    }
    out
}

/// In-order label intervals spanned by each vertex's subtree.
fn subtree_intervals(t: &Pbt, offset: usize, out: &mut BTreeMap<usize, (usize, usize)>) {
    if let Pbt::Node(l, r) = t {
        let me = t.root_label(offset);
        out.insert(me, (offset + 1, offset + t.degree()));
        subtree_intervals(l, offset, out);
        subtree_intervals(r, me, out);
    }
}

fn prune(t: &Pbt, offset: usize, cut: &BTreeSet<usize>, taken: &mut BTreeMap<usize, Pbt>) -> Pbt {
    match t {
        Pbt::Empty => Pbt::Empty,
        Pbt::Node(l, r) => {
            let me = t.root_label(offset);
            if cut.contains(&me) {
                taken.insert(me, t.clone());
                return Pbt::Empty;
            }
            let new_l = prune(l, offset, cut, taken);
            let new_r = prune(r, me, cut, taken);
            Pbt::graft(new_l, new_r)
        }
    }
}

/// Coproduct: `1 ⊗ T` plus, over every set `V` of pairwise incomparable
/// non-root vertices (the empty set included), the remaining tree around
/// the root tensor the product of the pruned subtrees in label order.
pub fn pbt_coproduct(t: &Pbt) -> LinComb<Pair<Pbt>> {
    if t.is_empty() {
        return LinComb::basis(Pair(Pbt::Empty, Pbt::Empty));
    }
    let n = t.degree();
    let root = t.root_label(0);
    let mut intervals = BTreeMap::new();
    subtree_intervals(t, 0, &mut intervals);
    let vertices: Vec<usize> = (1..=n).filter(|&v| v != root).collect();

    let mut out = LinComb::zero();
    out.add_term(Pair(Pbt::Empty, t.clone()), rat_int(1));
    let mut antichains: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
    for &v in &vertices {
        let (lo, hi) = intervals[&v];
        let mut extended = Vec::new();
        for s in &antichains {
            let comparable = s.iter().any(|&w| {
                let (wl, wh) = intervals[&w];
                (lo <= w && w <= hi) || (wl <= v && v <= wh)
            });
            if !comparable {
                let mut t2 = s.clone();
                t2.insert(v);
                extended.push(t2);
            }
        }
        antichains.append(&mut extended);
    }
    for cut in antichains {
        let mut taken = BTreeMap::new();
        let rest = prune(t, 0, &cut, &mut taken);
        let mut pruned_product = LinComb::basis(Pbt::Empty);
        for (_, sub) in taken {
            pruned_product = crate::algebra::bilinear(
                &pruned_product,
                &LinComb::basis(sub),
                pbt_product,
            );
        }
        for (u, c) in pruned_product.iter() {
            out.add_term(Pair(rest.clone(), u.clone()), c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bilinear;
    use crate::permutations::mr_product;

    fn leaf() -> Pbt {
        Pbt::leaf()
    }

    #[test]
    fn degrees_and_catalan_counts() {
        assert_eq!(all_pbts(0).len(), 1);
        assert_eq!(all_pbts(1).len(), 1);
        assert_eq!(all_pbts(2).len(), 2);
        assert_eq!(all_pbts(3).len(), 5);
        assert_eq!(all_pbts(4).len(), 14);
        assert_eq!(all_pbts(5).len(), 42);
        assert!(all_pbts(3).iter().all(|t| t.degree() == 3));
    }

    #[test]
    fn product_of_leaves() {
        let prod = pbt_product(&leaf(), &leaf());
        let mut expected = LinComb::zero();
        expected.add_term(Pbt::graft(leaf(), Pbt::Empty), rat_int(1));
        expected.add_term(Pbt::graft(Pbt::Empty, leaf()), rat_int(1));
        assert_eq!(prod, expected);
        assert_eq!(pbt_product(&Pbt::Empty, &leaf()), LinComb::basis(leaf()));
    }

    #[test]
    fn balanced_tree_linearizations() {
        // Root labeled 2 with leaves 1 and 3: listings (2,1,3) and (2,3,1)
        // give the permutations (2,3,1) and (1,3,2).
        let t = Pbt::graft(leaf(), leaf());
        let mut lins = linearizations(&t);
        lins.sort();
        assert_eq!(
            lins,
            vec![
                Permutation::new(vec![1, 3, 2]).unwrap(),
                Permutation::new(vec![2, 3, 1]).unwrap(),
            ]
        );
    }

    #[test]
    fn left_comb_has_one_linearization() {
        // The chain poset admits exactly one root-first listing, and it is
        // the identity permutation.
        let mut t = leaf();
        for _ in 1..4 {
            t = Pbt::graft(t, Pbt::Empty);
        }
        let lins = linearizations(&t);
        assert_eq!(lins, vec![Permutation::identity(4)]);
    }

    #[test]
    fn linearization_counts_sum_to_factorial() {
        for n in 1..=5usize {
            let total: usize = all_pbts(n).iter().map(|t| linearizations(t).len()).sum();
            let fact: usize = (1..=n).product();
            assert_eq!(total, fact, "degree {n}");
        }
    }

    #[test]
    fn arborify_is_multiplicative_small() {
        for n in 0..=2usize {
            for m in 0..=2usize {
                for t in all_pbts(n) {
                    for u in all_pbts(m) {
                        let lhs = bilinear(&arborify(&t), &arborify(&u), mr_product);
                        let rhs = pbt_product(&t, &u).map(|w| arborify(w));
                        assert_eq!(lhs, rhs, "{t} * {u}");
                    }
                }
            }
        }
    }

    #[test]
    fn arborify_injective_up_to_degree_five() {
        let mut seen = std::collections::BTreeSet::new();
        for n in 0..=5usize {
            for t in all_pbts(n) {
                let img = arborify(&t).render();
                assert!(seen.insert(img), "arborification collision at degree {n}");
            }
        }
    }

    #[test]
    fn coproduct_of_chain() {
        let two_chain = Pbt::graft(leaf(), Pbt::Empty);
        let cop = pbt_coproduct(&two_chain);
        let mut expected = LinComb::zero();
        expected.add_term(Pair(Pbt::Empty, two_chain.clone()), rat_int(1));
        expected.add_term(Pair(two_chain.clone(), Pbt::Empty), rat_int(1));
        expected.add_term(Pair(leaf(), leaf()), rat_int(1));
        assert_eq!(cop, expected);
    }

    #[test]
    fn coproduct_coassociative_small() {
        use crate::algebra::Triple;
        for n in 0..=4usize {
            for t in all_pbts(n) {
                let cop = pbt_coproduct(&t);
                let lhs = cop.map(|p| {
                    pbt_coproduct(&p.0)
                        .map(|q| LinComb::basis(Triple(q.0.clone(), q.1.clone(), p.1.clone())))
                });
                let rhs = cop.map(|p| {
                    pbt_coproduct(&p.1)
                        .map(|q| LinComb::basis(Triple(p.0.clone(), q.0.clone(), q.1.clone())))
                });
                assert_eq!(lhs, rhs, "coassociativity fails for {t}");
            }
        }
    }

    #[test]
    fn coproduct_matches_permutation_coproduct_through_arborification() {
        // Arborifying both legs of the tree coproduct reproduces the
        // permutation coproduct of the arborification, up to the leg swap
        // built into the value-threshold convention (small values split
        // off the pruned tops, which the tree formula keeps on the right).
        use crate::algebra::tensor_flip;
        use crate::permutations::mr_coproduct;
        for n in 0..=4usize {
            for t in all_pbts(n) {
                let via_trees = pbt_coproduct(&t).map(|p| {
                    let left = arborify(&p.0);
                    let right = arborify(&p.1);
                    bilinear(&left, &right, |a, b| {
                        LinComb::basis(Pair(a.clone(), b.clone()))
                    })
                });
                let via_perms = tensor_flip(&arborify(&t).map(mr_coproduct));
                assert_eq!(via_trees, via_perms, "coproducts disagree on {t}");
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for n in 0..=4usize {
            for t in all_pbts(n) {
                assert_eq!(Pbt::parse_encoded(&t.encode()).unwrap(), t);
            }
        }
        assert!(Pbt::parse_encoded("(_|_").is_err());
        assert!(Pbt::parse_encoded("(_|_))").is_err());
    }
}
