//! Finite inverse semigroups given by multiplication tables.
//!
//! Elements are dense indices `0..size`; every higher layer refers to
//! elements by index. The involution is always derived from the table by
//! scanning for the unique generalized inverse, never taken as input.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation and construction failures, each carrying a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("multiplication table is not square or has out-of-range entries")]
    MalformedTable,
    #[error("not associative: ({0} * {1}) * {2} != {0} * ({1} * {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} has no generalized inverse")]
    NoInverse(usize),
    #[error("element {0} has more than one generalized inverse ({1} and {2})")]
    NonUniqueInverse(usize, usize, usize),
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("generator {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error("bad builtin parameters: {0}")]
    BadParams(String),
}

/// A finite inverse semigroup: multiplication table plus derived data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteInverseSemigroup {
    size: usize,
    mult: Vec<Vec<usize>>,
    star: Vec<usize>,
    /// Idempotent elements in increasing index order.
    idempotents: Vec<usize>,
    /// Position of each element in `idempotents`, if idempotent.
    idem_pos: Vec<Option<usize>>,
}

impl FiniteInverseSemigroup {
    /// Validates a multiplication table as an inverse semigroup.
    ///
    /// Checks associativity on all triples and derives the involution by
    /// scanning each element for its unique generalized inverse. The
    /// equivalent criterion "regular with commuting idempotents" is
    /// exposed separately as [`Self::check_regular_commuting`]; the two
    /// must agree and tests assert that they do.
    pub fn validate(mult: Vec<Vec<usize>>) -> Result<Self, SemigroupError> {
        let n = mult.len();
        if n == 0 || mult.iter().any(|row| row.len() != n) {
            return Err(SemigroupError::MalformedTable);
        }
        if mult.iter().flatten().any(|&x| x >= n) {
            return Err(SemigroupError::MalformedTable);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a][b];
                for c in 0..n {
                    if mult[ab][c] != mult[a][mult[b][c]] {
                        return Err(SemigroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut star = Vec::with_capacity(n);
        for g in 0..n {
            let mut found: Option<usize> = None;
            for x in 0..n {
                if mult[mult[g][x]][g] == g && mult[mult[x][g]][x] == x {
                    match found {
                        None => found = Some(x),
                        Some(prev) => {
                            return Err(SemigroupError::NonUniqueInverse(g, prev, x))
                        }
                    }
                }
            }
            star.push(found.ok_or(SemigroupError::NoInverse(g))?);
        }
        let idempotents: Vec<usize> = (0..n).filter(|&e| mult[e][e] == e).collect();
        let mut idem_pos = vec![None; n];
        for (p, &e) in idempotents.iter().enumerate() {
            idem_pos[e] = Some(p);
        }
        Ok(Self {
            size: n,
            mult,
            star,
            idempotents,
            idem_pos,
        })
    }

    /// The alternative inverse-semigroup criterion: every element has some
    /// generalized inverse and idempotents commute pairwise. Returns true
    /// iff both hold; agreement with [`Self::validate`] is a test invariant.
    pub fn check_regular_commuting(mult: &[Vec<usize>]) -> bool {
        let n = mult.len();
        let regular = (0..n).all(|g| (0..n).any(|x| mult[mult[g][x]][g] == g));
        if !regular {
            return false;
        }
        let idem: Vec<usize> = (0..n).filter(|&e| mult[e][e] == e).collect();
        idem.iter()
            .all(|&e| idem.iter().all(|&f| mult[e][f] == mult[f][e]))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    #[inline]
    pub fn star(&self, g: usize) -> usize {
        self.star[g]
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    /// Idempotent elements, in index order.
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    #[inline]
    pub fn is_idempotent(&self, e: usize) -> bool {
        self.idem_pos[e].is_some()
    }

    /// Position of `e` inside [`Self::idempotents`].
    #[inline]
    pub fn idem_position(&self, e: usize) -> Option<usize> {
        self.idem_pos[e]
    }

    /// Natural partial order on idempotents: `e <= f` iff `ef = e`.
    pub fn natural_leq(&self, e: usize, f: usize) -> Result<bool, SemigroupError> {
        if !self.is_idempotent(e) {
            return Err(SemigroupError::NotIdempotent(e));
        }
        if !self.is_idempotent(f) {
            return Err(SemigroupError::NotIdempotent(f));
        }
        Ok(self.mult[e][f] == e)
    }

    /// `g* g` for an element.
    #[inline]
    pub fn source_proj(&self, g: usize) -> usize {
        self.mult[self.star[g]][g]
    }

    /// `g g*` for an element.
    #[inline]
    pub fn range_proj(&self, g: usize) -> usize {
        self.mult[g][self.star[g]]
    }

    /// Smallest subset containing the generators and closed under
    /// multiplication and involution, by fixpoint iteration.
    pub fn sub_closure(&self, generators: &[usize]) -> Result<SubInverseSemigroup, SemigroupError> {
        for &g in generators {
            if g >= self.size {
                return Err(SemigroupError::GeneratorOutOfRange(g));
            }
        }
        let mut in_set = vec![false; self.size];
        let mut queue: Vec<usize> = Vec::new();
        let push = |x: usize, in_set: &mut Vec<bool>, queue: &mut Vec<usize>| {
            if !in_set[x] {
                in_set[x] = true;
                queue.push(x);
            }
        };
        for &g in generators {
            push(g, &mut in_set, &mut queue);
        }
        while let Some(g) = queue.pop() {
            push(self.star[g], &mut in_set, &mut queue);
            let members: Vec<usize> = (0..self.size).filter(|&x| in_set[x]).collect();
            for h in members {
                push(self.mult[g][h], &mut in_set, &mut queue);
                push(self.mult[h][g], &mut in_set, &mut queue);
            }
        }
        let members: Vec<usize> = (0..self.size).filter(|&x| in_set[x]).collect();
        SubInverseSemigroup::new(self, members)
    }
}

/// A sub-inverse semigroup, stored as a member subset of the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubInverseSemigroup {
    /// Member element indices of the parent, increasing.
    pub members: Vec<usize>,
}

impl SubInverseSemigroup {
    /// Checks closure under multiplication and involution, and nonemptiness.
    pub fn new(
        parent: &FiniteInverseSemigroup,
        mut members: Vec<usize>,
    ) -> Result<Self, SemigroupError> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(SemigroupError::BadParams("empty sub-semigroup".into()));
        }
        let inside = |x: usize| members.binary_search(&x).is_ok();
        for &g in &members {
            if g >= parent.size() {
                return Err(SemigroupError::GeneratorOutOfRange(g));
            }
            if !inside(parent.star(g)) {
                return Err(SemigroupError::BadParams(format!(
                    "not closed under involution at element {g}"
                )));
            }
            for &h in &members {
                if !inside(parent.mult(g, h)) {
                    return Err(SemigroupError::BadParams(format!(
                        "not closed under multiplication at pair ({g}, {h})"
                    )));
                }
            }
        }
        Ok(Self { members })
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Idempotent members, in index order.
    pub fn idempotents(&self, parent: &FiniteInverseSemigroup) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&e| parent.is_idempotent(e))
            .collect()
    }

    /// Extracts the members as a standalone inverse semigroup, together
    /// with the member-index -> parent-index map (which is `members`).
    pub fn extract(
        &self,
        parent: &FiniteInverseSemigroup,
    ) -> Result<FiniteInverseSemigroup, SemigroupError> {
        let pos = |x: usize| self.members.binary_search(&x).expect("closed");
        let table: Vec<Vec<usize>> = self
            .members
            .iter()
            .map(|&g| {
                self.members
                    .iter()
                    .map(|&h| pos(parent.mult(g, h)))
                    .collect()
            })
            .collect();
        FiniteInverseSemigroup::validate(table)
    }
}

/// A partial injection on `{0, .., n-1}`, the element form of the
/// symmetric inverse monoid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartialInjection(pub Vec<Option<usize>>);

impl PartialInjection {
    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &PartialInjection) -> PartialInjection {
        PartialInjection(
            other
                .0
                .iter()
                .map(|&y| y.and_then(|y| self.0[y]))
                .collect(),
        )
    }

    /// Canonical code: digits `image + 1` (0 for undefined) in base `n + 1`.
    pub fn code(&self) -> u64 {
        let base = (self.0.len() + 1) as u64;
        self.0
            .iter()
            .rev()
            .fold(0u64, |acc, &y| acc * base + y.map_or(0, |y| y as u64 + 1))
    }
}

/// All partial injections on `n` points, in canonical (code) order.
pub fn enumerate_partial_injections(n: usize) -> Vec<PartialInjection> {
    let mut out: Vec<PartialInjection> = Vec::new();
    let mut current = vec![None; n];
    fn rec(
        i: usize,
        n: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<Option<usize>>,
        out: &mut Vec<PartialInjection>,
    ) {
        if i == n {
            out.push(PartialInjection(current.clone()));
            return;
        }
        current[i] = None;
        rec(i + 1, n, used, current, out);
        for y in 0..n {
            if !used[y] {
                used[y] = true;
                current[i] = Some(y);
                rec(i + 1, n, used, current, out);
                used[y] = false;
                current[i] = None;
            }
        }
    }
    let mut used = vec![false; n];
    rec(0, n, &mut used, &mut current, &mut out);
    out.sort_by_key(|p| p.code());
    out
}

/// Builtin example families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Builtin {
    /// All partial injections on `n` points, canonically ordered by code.
    SymmetricInverseMonoid { n: usize },
    /// A group given by its multiplication table.
    Group { mult: Vec<Vec<usize>> },
    /// A meet-semilattice given by its (idempotent commutative) table.
    Semilattice { meet: Vec<Vec<usize>> },
    /// Brandt semigroup over a group: elements are a zero plus triples
    /// `(i, g, j)` with `(i,g,j)(k,h,l) = (i, gh, l)` when `j = k`, else zero.
    Brandt { n: usize, group: Vec<Vec<usize>> },
}

/// Builds a builtin family member and validates it.
pub fn builtin(spec: &Builtin) -> Result<FiniteInverseSemigroup, SemigroupError> {
    match spec {
        Builtin::SymmetricInverseMonoid { n } => {
            if *n == 0 || *n > 6 {
                return Err(SemigroupError::BadParams(
                    "symmetric inverse monoid supported for 1 <= n <= 6".into(),
                ));
            }
            let elems = enumerate_partial_injections(*n);
            let index_of = |p: &PartialInjection| {
                elems
                    .binary_search_by_key(&p.code(), |q| q.code())
                    .expect("closed under composition")
            };
            let table: Vec<Vec<usize>> = elems
                .iter()
                .map(|a| elems.iter().map(|b| index_of(&a.compose(b))).collect())
                .collect();
            FiniteInverseSemigroup::validate(table)
        }
        Builtin::Group { mult } => {
            let s = FiniteInverseSemigroup::validate(mult.clone())?;
            if s.idempotents().len() != 1 {
                return Err(SemigroupError::BadParams(
                    "table is an inverse semigroup but not a group".into(),
                ));
            }
            Ok(s)
        }
        Builtin::Semilattice { meet } => {
            let s = FiniteInverseSemigroup::validate(meet.clone())?;
            let n = s.size();
            if s.idempotents().len() != n {
                return Err(SemigroupError::BadParams(
                    "semilattice table has a non-idempotent element".into(),
                ));
            }
            for a in 0..n {
                for b in 0..n {
                    if s.mult(a, b) != s.mult(b, a) {
                        return Err(SemigroupError::BadParams(
                            "semilattice table is not commutative".into(),
                        ));
                    }
                }
            }
            Ok(s)
        }
        Builtin::Brandt { n, group } => {
            if *n == 0 {
                return Err(SemigroupError::BadParams("brandt needs n >= 1".into()));
            }
            let g = builtin(&Builtin::Group {
                mult: group.clone(),
            })?;
            let m = g.size();
            let size = n * n * m + 1;
            // Element 0 is the zero; (i, x, j) maps to 1 + ((i*m + x)*n + j).
            let enc = |i: usize, x: usize, j: usize| 1 + (i * m + x) * n + j;
            let mut table = vec![vec![0usize; size]; size];
            for i in 0..*n {
                for x in 0..m {
                    for j in 0..*n {
                        for k in 0..*n {
                            for y in 0..m {
                                for l in 0..*n {
                                    if j == k {
                                        table[enc(i, x, j)][enc(k, y, l)] =
                                            enc(i, g.mult(x, y), l);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            FiniteInverseSemigroup::validate(table)
        }
    }
}

/// JSON interchange form `{"n": int, "mult": [[int]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableJson {
    pub n: usize,
    pub mult: Vec<Vec<usize>>,
}

impl TableJson {
    pub fn validate(&self) -> Result<FiniteInverseSemigroup, SemigroupError> {
        if self.mult.len() != self.n {
            return Err(SemigroupError::MalformedTable);
        }
        FiniteInverseSemigroup::validate(self.mult.clone())
    }

    pub fn from_semigroup(s: &FiniteInverseSemigroup) -> Self {
        Self {
            n: s.size(),
            mult: s.mult_table().to_vec(),
        }
    }
}
