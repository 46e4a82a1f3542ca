//! The commutative projection calculus over a finite inverse semigroup.
//!
//! Projections are modeled as subsets of the idempotent semilattice: a
//! projection holds at an idempotent `f` exactly when the principal-filter
//! character at `f` evaluates to 1 on it. Down-sets of idempotents are the
//! generators, and their Boolean combinations reach every subset. On top of
//! that sits the inverse semigroup of projected elements `g * p`, with
//! product, involution, an equality predicate, and a faithful matrix model
//! acting on the `|G|`-dimensional coordinate space that serves as the
//! oracle for both.

use crate::semigroup::{FiniteInverseSemigroup, SemigroupError};
use serde::{Deserialize, Serialize};

/// A set of idempotents, stored as a bitset over positions in the
/// idempotent list of the ambient semigroup. The empty set is the zero
/// projection and never appears inside a nonzero projected element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SupportSet {
    words: Vec<u64>,
    len: usize,
}

impl SupportSet {
    pub fn empty(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn singleton(len: usize, pos: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(pos);
        s
    }

    #[inline]
    pub fn insert(&mut self, pos: usize) {
        debug_assert!(pos < self.len);
        self.words[pos / 64] |= 1u64 << (pos % 64);
    }

    #[inline]
    pub fn contains(&self, pos: usize) -> bool {
        pos < self.len && self.words[pos / 64] >> (pos % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
            len: self.len,
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
            len: self.len,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Member positions in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&p| self.contains(p))
    }
}

/// A nonzero projected element `g * p`, with `p` a projection contained in
/// the source projection of `g`. The zero of the calculus is represented by
/// the explicit [`GeValue::Zero`] variant, never by an empty support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeElement {
    pub g: usize,
    pub support: SupportSet,
}

/// Result of projected-element arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeValue {
    Zero,
    Elem(GeElement),
}

impl GeValue {
    pub fn elem(self) -> Option<GeElement> {
        match self {
            GeValue::Zero => None,
            GeValue::Elem(x) => Some(x),
        }
    }

    pub fn as_elem(&self) -> Option<&GeElement> {
        match self {
            GeValue::Zero => None,
            GeValue::Elem(x) => Some(x),
        }
    }
}

/// Equality-respecting fingerprint of a projected element: the support
/// together with the translation images `g * f` for every `f` in it.
/// Two elements compare equal under [`Projections::ge_eq`] exactly when
/// their keys coincide, which makes the key usable for deduplication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeKey {
    support: Vec<u64>,
    images: Vec<usize>,
}

/// Projection-calculus context: the semigroup plus its down-set table.
#[derive(Debug, Clone)]
pub struct Projections<'a> {
    s: &'a FiniteInverseSemigroup,
    /// Down-set of each idempotent, indexed by idempotent position.
    down: Vec<SupportSet>,
}

impl<'a> Projections<'a> {
    pub fn new(s: &'a FiniteInverseSemigroup) -> Self {
        let idem = s.idempotents();
        let n_idem = idem.len();
        let down = idem
            .iter()
            .map(|&e| {
                let mut set = SupportSet::empty(n_idem);
                for (p, &f) in idem.iter().enumerate() {
                    if s.mult(f, e) == f {
                        set.insert(p);
                    }
                }
                set
            })
            .collect();
        Self { s, down }
    }

    pub fn semigroup(&self) -> &'a FiniteInverseSemigroup {
        self.s
    }

    pub fn n_idem(&self) -> usize {
        self.down.len()
    }

    /// Idempotent element at a support position.
    #[inline]
    pub fn idem_at(&self, pos: usize) -> usize {
        self.s.idempotents()[pos]
    }

    /// Support of a single idempotent: its down-set `{f : f <= e}`.
    pub fn supp_of_idempotent(&self, e: usize) -> Result<SupportSet, SemigroupError> {
        let pos = self
            .s
            .idem_position(e)
            .ok_or(SemigroupError::NotIdempotent(e))?;
        Ok(self.down[pos].clone())
    }

    /// Support of the projection `e0 (1 - e1) ... (1 - ek)`.
    pub fn proj_expr(&self, e0: usize, subtracted: &[usize]) -> Result<SupportSet, SemigroupError> {
        let mut out = self.supp_of_idempotent(e0)?;
        for &e in subtracted {
            out = out.minus(&self.supp_of_idempotent(e)?);
        }
        Ok(out)
    }

    /// Conjugation `p -> g p g*` on supports:
    /// `{f <= g g* : g* f g in P}`.
    pub fn conj(&self, g: usize, p: &SupportSet) -> SupportSet {
        let gs = self.s.star(g);
        let range = self.range_support(g);
        let mut out = SupportSet::empty(self.n_idem());
        for pos in range.iter() {
            let f = self.idem_at(pos);
            let pulled = self.s.mult(self.s.mult(gs, f), g);
            if let Some(q) = self.s.idem_position(pulled) {
                if p.contains(q) {
                    out.insert(pos);
                }
            }
        }
        out
    }

    /// Down-set of `g* g`.
    pub fn source_support(&self, g: usize) -> SupportSet {
        let e = self.s.source_proj(g);
        self.down[self.s.idem_position(e).expect("g*g idempotent")].clone()
    }

    /// Down-set of `g g*`.
    pub fn range_support(&self, g: usize) -> SupportSet {
        let e = self.s.range_proj(g);
        self.down[self.s.idem_position(e).expect("gg* idempotent")].clone()
    }

    /// Builds `g * p` normalized: the support is intersected with the
    /// source down-set of `g`; an empty result is the zero.
    pub fn ge_new(&self, g: usize, support: SupportSet) -> GeValue {
        let support = support.intersect(&self.source_support(g));
        if support.is_empty() {
            GeValue::Zero
        } else {
            GeValue::Elem(GeElement { g, support })
        }
    }

    /// The element `g` itself, carrying its full source down-set.
    pub fn ge_of(&self, g: usize) -> GeElement {
        GeElement {
            g,
            support: self.source_support(g),
        }
    }

    /// Product `(g p)(h q) = (g h) (h* p h ∩ q)`, renormalized; zero when
    /// the resulting support dies.
    pub fn ge_mul(&self, x: &GeElement, y: &GeElement) -> GeValue {
        let pulled = self.conj(self.s.star(y.g), &x.support);
        let support = pulled.intersect(&y.support);
        self.ge_new(self.s.mult(x.g, y.g), support)
    }

    /// Involution `(g p)* = g* (g p g*)`.
    pub fn ge_star(&self, x: &GeElement) -> GeElement {
        GeElement {
            g: self.s.star(x.g),
            support: self.conj(x.g, &x.support),
        }
    }

    /// Equality predicate: same support and the same translation on it.
    pub fn ge_eq(&self, x: &GeElement, y: &GeElement) -> bool {
        if x.support != y.support {
            return false;
        }
        x.support.iter().all(|pos| {
            let f = self.idem_at(pos);
            self.s.mult(x.g, f) == self.s.mult(y.g, f)
        })
    }

    /// Canonical fingerprint compatible with [`Self::ge_eq`].
    pub fn ge_key(&self, x: &GeElement) -> GeKey {
        GeKey {
            support: x.support.words.clone(),
            images: x
                .support
                .iter()
                .map(|pos| self.s.mult(x.g, self.idem_at(pos)))
                .collect(),
        }
    }

    /// Matrix of `g p` on the coordinate space spanned by the elements of
    /// `G`: basis vector at `h` maps to the vector at `g h` when `h h*`
    /// lies in the support, else to zero. Projections act diagonally.
    pub fn regular_rep(&self, x: &GeValue) -> Vec<Vec<i64>> {
        let n = self.s.size();
        let mut m = vec![vec![0i64; n]; n];
        if let GeValue::Elem(x) = x {
            for h in 0..n {
                let r = self.s.range_proj(h);
                let pos = self.s.idem_position(r).expect("hh* idempotent");
                if x.support.contains(pos) {
                    m[self.s.mult(x.g, h)][h] += 1;
                }
            }
        }
        m
    }

    /// Mobius function of the idempotent poset, indexed by positions.
    pub fn mobius(&self) -> Vec<Vec<i64>> {
        let n = self.n_idem();
        let leq = |a: usize, b: usize| self.down[b].contains(a);
        let mut mu = vec![vec![0i64; n]; n];
        // Process intervals by the size of the lower down-set to ensure
        // all sub-intervals are ready.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&p| self.down[p].count());
        for &b in &order {
            for a in 0..n {
                if a == b {
                    mu[a][b] = 1;
                } else if leq(a, b) {
                    let mut acc = 0i64;
                    for c in 0..n {
                        if leq(a, c) && leq(c, b) && c != b {
                            acc += mu[a][c];
                        }
                    }
                    mu[a][b] = -acc;
                }
            }
        }
        mu
    }

    /// Expansion of a projected element into plain (full-support) elements:
    /// `g chi_{f} = sum_{f' <= f} mu(f', f) (g f')` summed over the support.
    /// Returns `(semigroup element, weight)` pairs.
    pub fn plain_expansion(&self, mobius: &[Vec<i64>], x: &GeElement) -> Vec<(usize, i64)> {
        let mut acc: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
        for pos in x.support.iter() {
            for lower in self.down[pos].iter() {
                let mu = mobius[lower][pos];
                if mu != 0 {
                    let g = self.s.mult(x.g, self.idem_at(lower));
                    *acc.entry(g).or_insert(0) += mu;
                }
            }
        }
        acc.into_iter().filter(|&(_, w)| w != 0).collect()
    }

    /// All distinct projected elements: every `(g, P)` with nonempty
    /// `P` inside the source down-set of `g`, deduplicated under
    /// [`Self::ge_eq`]. Exponential in the number of idempotents below
    /// `g* g`; intended for test-sized semigroups.
    pub fn all_ge_elements(&self) -> Vec<GeElement> {
        let mut seen = std::collections::BTreeMap::new();
        for g in 0..self.s.size() {
            let src = self.source_support(g);
            let positions: Vec<usize> = src.iter().collect();
            let k = positions.len();
            for mask in 1u64..(1 << k) {
                let mut support = SupportSet::empty(self.n_idem());
                for (i, &pos) in positions.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        support.insert(pos);
                    }
                }
                let x = GeElement { g, support };
                seen.entry(self.ge_key(&x)).or_insert(x);
            }
        }
        seen.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{builtin, Builtin};

    fn i2() -> FiniteInverseSemigroup {
        builtin(&Builtin::SymmetricInverseMonoid { n: 2 }).unwrap()
    }

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k] != 0 {
                    for j in 0..n {
                        out[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn supp_of_identity_in_group_is_single() {
        let s = builtin(&Builtin::Group {
            mult: vec![vec![0, 1], vec![1, 0]],
        })
        .unwrap();
        let p = Projections::new(&s);
        assert_eq!(p.supp_of_idempotent(0).unwrap().count(), 1);
    }

    #[test]
    fn supp_of_identity_in_i2_is_everything() {
        let s = i2();
        let p = Projections::new(&s);
        let one = (0..s.size())
            .find(|&g| (0..s.size()).all(|h| s.mult(g, h) == h && s.mult(h, g) == h))
            .unwrap();
        assert_eq!(p.supp_of_idempotent(one).unwrap().count(), 4);
        // The empty map is the bottom: nothing strictly below it.
        let zero = *s
            .idempotents()
            .iter()
            .find(|&&e| s.idempotents().iter().all(|&f| s.mult(e, f) == e))
            .unwrap();
        assert_eq!(p.supp_of_idempotent(zero).unwrap().count(), 1);
    }

    #[test]
    fn proj_expr_boolean_behaviour() {
        let s = i2();
        let p = Projections::new(&s);
        let one = (0..s.size())
            .find(|&g| (0..s.size()).all(|h| s.mult(g, h) == h && s.mult(h, g) == h))
            .unwrap();
        let zero = *s
            .idempotents()
            .iter()
            .find(|&&e| s.idempotents().iter().all(|&f| s.mult(e, f) == e))
            .unwrap();
        let rank1: Vec<usize> = s
            .idempotents()
            .iter()
            .copied()
            .filter(|&e| e != one && e != zero)
            .collect();
        let (e1, e2) = (rank1[0], rank1[1]);

        // Empty subtraction list returns the plain down-set.
        assert_eq!(p.proj_expr(e1, &[]).unwrap(), p.supp_of_idempotent(e1).unwrap());
        // e (1 - e) = 0.
        assert!(p.proj_expr(e1, &[e1]).unwrap().is_empty());
        // 1 (1 - e1)(1 - e2) leaves exactly the top idempotent.
        let top = p.proj_expr(one, &[e1, e2]).unwrap();
        assert_eq!(top.count(), 1);
        let pos_one = s.idem_position(one).unwrap();
        assert!(top.contains(pos_one));
    }

    #[test]
    fn proj_expr_respects_boolean_algebra() {
        let s = i2();
        let p = Projections::new(&s);
        // Product of projections is intersection of supports.
        for &e in s.idempotents() {
            for &f in s.idempotents() {
                let ef = s.mult(e, f);
                assert_eq!(
                    p.supp_of_idempotent(ef).unwrap(),
                    p.supp_of_idempotent(e)
                        .unwrap()
                        .intersect(&p.supp_of_idempotent(f).unwrap())
                );
            }
        }
    }

    #[test]
    fn conj_fixes_subsets_under_idempotents() {
        let s = i2();
        let p = Projections::new(&s);
        for &e in s.idempotents() {
            let supp = p.supp_of_idempotent(e).unwrap();
            let positions: Vec<usize> = supp.iter().collect();
            for &q in &positions {
                let single = SupportSet::singleton(p.n_idem(), q);
                assert_eq!(p.conj(e, &single), single);
            }
        }
    }

    #[test]
    fn conj_by_transposition_swaps_rank1_idempotents() {
        let s = i2();
        let p = Projections::new(&s);
        let one = (0..s.size())
            .find(|&g| (0..s.size()).all(|h| s.mult(g, h) == h && s.mult(h, g) == h))
            .unwrap();
        let sigma = (0..s.size())
            .find(|&g| g != one && s.mult(g, g) == one)
            .unwrap();
        let zero = *s
            .idempotents()
            .iter()
            .find(|&&e| s.idempotents().iter().all(|&f| s.mult(e, f) == e))
            .unwrap();
        let rank1: Vec<usize> = s
            .idempotents()
            .iter()
            .copied()
            .filter(|&e| e != one && e != zero)
            .collect();
        let (e1, e2) = (rank1[0], rank1[1]);
        let p1 = SupportSet::singleton(p.n_idem(), s.idem_position(e1).unwrap());
        let p2 = SupportSet::singleton(p.n_idem(), s.idem_position(e2).unwrap());
        assert_eq!(p.conj(sigma, &p1), p2);
        assert_eq!(p.conj(sigma, &p2), p1);
    }

    #[test]
    fn conj_is_boolean_isomorphism_between_source_and_range() {
        let s = i2();
        let p = Projections::new(&s);
        for g in 0..s.size() {
            let src = p.source_support(g);
            let rng = p.range_support(g);
            assert_eq!(p.conj(g, &src), rng, "full source maps onto full range");
            let positions: Vec<usize> = src.iter().collect();
            for mask in 0u64..(1 << positions.len()) {
                let mut sub = SupportSet::empty(p.n_idem());
                for (i, &pos) in positions.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        sub.insert(pos);
                    }
                }
                let image = p.conj(g, &sub);
                assert!(image.is_subset(&rng));
                assert_eq!(image.count(), sub.count(), "bijective on subsets");
                assert_eq!(p.conj(s.star(g), &image), sub, "inverse conjugation");
            }
        }
    }

    #[test]
    fn ge_mul_in_group_reduces_to_group_multiplication() {
        let s = builtin(&Builtin::Group {
            mult: vec![vec![0, 1], vec![1, 0]],
        })
        .unwrap();
        let p = Projections::new(&s);
        for g in 0..2 {
            for h in 0..2 {
                let x = p.ge_of(g);
                let y = p.ge_of(h);
                match p.ge_mul(&x, &y) {
                    GeValue::Elem(z) => assert_eq!(z.g, s.mult(g, h)),
                    GeValue::Zero => panic!("group products never vanish"),
                }
            }
        }
    }

    #[test]
    fn ge_mul_of_disjoint_rank1_idempotents_is_zero() {
        let s = i2();
        let p = Projections::new(&s);
        let one = (0..s.size())
            .find(|&g| (0..s.size()).all(|h| s.mult(g, h) == h && s.mult(h, g) == h))
            .unwrap();
        let zero = *s
            .idempotents()
            .iter()
            .find(|&&e| s.idempotents().iter().all(|&f| s.mult(e, f) == e))
            .unwrap();
        let rank1: Vec<usize> = s
            .idempotents()
            .iter()
            .copied()
            .filter(|&e| e != one && e != zero)
            .collect();
        let (e1, e2) = (rank1[0], rank1[1]);
        let x = GeElement {
            g: e1,
            support: SupportSet::singleton(p.n_idem(), s.idem_position(e1).unwrap()),
        };
        let y = GeElement {
            g: e2,
            support: SupportSet::singleton(p.n_idem(), s.idem_position(e2).unwrap()),
        };
        assert_eq!(p.ge_mul(&x, &y), GeValue::Zero);
    }

    #[test]
    fn ge_arithmetic_matches_regular_rep_exhaustively_on_i2() {
        let s = i2();
        let p = Projections::new(&s);
        let all = p.all_ge_elements();
        assert!(!all.is_empty());
        // Faithfulness: equality predicate agrees with matrix equality.
        for x in &all {
            for y in &all {
                let same = p.ge_eq(x, y);
                let mx = p.regular_rep(&GeValue::Elem(x.clone()));
                let my = p.regular_rep(&GeValue::Elem(y.clone()));
                assert_eq!(same, mx == my, "ge_eq must match the matrix model");
                assert_eq!(same, p.ge_key(x) == p.ge_key(y), "key must match ge_eq");
            }
        }
        // Multiplicativity: rep of product equals product of reps, exactly.
        for x in &all {
            for y in &all {
                let prod = p.ge_mul(x, y);
                let lhs = p.regular_rep(&prod);
                let rhs = mat_mul(
                    &p.regular_rep(&GeValue::Elem(x.clone())),
                    &p.regular_rep(&GeValue::Elem(y.clone())),
                );
                assert_eq!(lhs, rhs);
                // Zero values are exactly the zero matrices.
                if prod == GeValue::Zero {
                    assert!(rhs.iter().flatten().all(|&v| v == 0));
                }
            }
        }
    }

    #[test]
    fn nonzero_ge_elements_have_nonzero_matrices() {
        let s = i2();
        let p = Projections::new(&s);
        for x in p.all_ge_elements() {
            let m = p.regular_rep(&GeValue::Elem(x));
            assert!(m.iter().flatten().any(|&v| v != 0));
        }
    }

    #[test]
    fn ge_star_is_an_involutive_antihomomorphism() {
        let s = i2();
        let p = Projections::new(&s);
        let all = p.all_ge_elements();
        for x in &all {
            let xx = p.ge_star(&p.ge_star(x));
            assert!(p.ge_eq(&xx, x), "star is involutive");
            // x x* is an idempotent value.
            if let GeValue::Elem(z) = p.ge_mul(x, &p.ge_star(x)) {
                let z2 = p.ge_mul(&z, &z).elem().expect("projections are nonzero");
                assert!(p.ge_eq(&z2, &z));
                let zs = p.ge_star(&z);
                assert!(p.ge_eq(&zs, &z), "self-adjoint");
            } else {
                panic!("x x* never vanishes for nonzero x");
            }
        }
        for x in &all {
            for y in &all {
                let lhs = p.ge_mul(x, y);
                let rhs = match (&lhs, ()) {
                    (GeValue::Zero, ()) => GeValue::Zero,
                    (GeValue::Elem(z), ()) => GeValue::Elem(p.ge_star(z)),
                };
                let anti = p.ge_mul(&p.ge_star(y), &p.ge_star(x));
                match (rhs, anti) {
                    (GeValue::Zero, GeValue::Zero) => {}
                    (GeValue::Elem(a), GeValue::Elem(b)) => assert!(p.ge_eq(&a, &b)),
                    other => panic!("star anti-homomorphism broken: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn ge_mul_is_associative_exhaustively_on_i2() {
        let s = i2();
        let p = Projections::new(&s);
        let all = p.all_ge_elements();
        for x in &all {
            for y in &all {
                let xy = p.ge_mul(x, y);
                for z in &all {
                    let yz = p.ge_mul(y, z);
                    let lhs = match &xy {
                        GeValue::Zero => GeValue::Zero,
                        GeValue::Elem(v) => p.ge_mul(v, z),
                    };
                    let rhs = match &yz {
                        GeValue::Zero => GeValue::Zero,
                        GeValue::Elem(v) => p.ge_mul(x, v),
                    };
                    match (lhs, rhs) {
                        (GeValue::Zero, GeValue::Zero) => {}
                        (GeValue::Elem(a), GeValue::Elem(b)) => {
                            assert!(p.ge_eq(&a, &b))
                        }
                        other => panic!("associativity broken: {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn translation_absorbs_into_singleton_support() {
        let s = i2();
        let p = Projections::new(&s);
        for g in 0..s.size() {
            let src = p.source_support(g);
            for pos in src.iter() {
                let f = p.idem_at(pos);
                let single = SupportSet::singleton(p.n_idem(), pos);
                let x = GeElement {
                    g,
                    support: single.clone(),
                };
                let y = GeElement {
                    g: s.mult(g, f),
                    support: single,
                };
                assert!(p.ge_eq(&x, &y), "g p = (g f) p on singleton support {{f}}");
            }
        }
    }

    #[test]
    fn group_case_equality_is_element_equality() {
        let s = builtin(&Builtin::Group {
            mult: vec![vec![0, 1], vec![1, 0]],
        })
        .unwrap();
        let p = Projections::new(&s);
        let x = p.ge_of(0);
        let y = p.ge_of(1);
        assert!(!p.ge_eq(&x, &y));
        assert!(p.ge_eq(&x, &x));
    }

    #[test]
    fn plain_expansion_reproduces_every_projected_element_exactly() {
        // Exact integer oracle: the faithful matrix of any projected
        // element equals the Mobius-weighted sum of the matrices of its
        // plain constituents.
        for s in [i2(), builtin(&Builtin::SymmetricInverseMonoid { n: 3 }).unwrap()] {
            let p = Projections::new(&s);
            let mobius = p.mobius();
            let check = |x: &GeElement| {
                let direct = p.regular_rep(&GeValue::Elem(x.clone()));
                let n = s.size();
                let mut summed = vec![vec![0i64; n]; n];
                for (g, w) in p.plain_expansion(&mobius, x) {
                    let m = p.regular_rep(&GeValue::Elem(p.ge_of(g)));
                    for i in 0..n {
                        for j in 0..n {
                            summed[i][j] += w * m[i][j];
                        }
                    }
                }
                assert_eq!(direct, summed, "expansion of ({}, support)", x.g);
            };
            if s.size() <= 7 {
                for x in p.all_ge_elements() {
                    check(&x);
                }
            } else {
                // Spot-check: all single-idempotent supports.
                for g in 0..s.size() {
                    for pos in p.source_support(g).iter() {
                        check(&GeElement {
                            g,
                            support: SupportSet::singleton(p.n_idem(), pos),
                        });
                    }
                }
            }
        }
    }

    #[test]
    fn identity_idempotent_of_group_acts_as_identity_matrix() {
        let s = builtin(&Builtin::Group {
            mult: vec![vec![0, 1], vec![1, 0]],
        })
        .unwrap();
        let p = Projections::new(&s);
        let m = p.regular_rep(&GeValue::Elem(p.ge_of(0)));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m[i][j], i64::from(i == j));
            }
        }
    }
}
