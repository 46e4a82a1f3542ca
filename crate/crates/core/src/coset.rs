//! Unit atoms, the groupoid of a finite sub-inverse semigroup, the coset
//! space and the partial action of the ambient semigroup on it.
//!
//! Everything is deduplicated under the projection-calculus equality
//! predicate, and the equivalence relation behind the quotient is verified
//! rather than assumed; a failure means the support-set model broke and
//! aborts loudly.

use crate::projection::{GeElement, GeKey, GeValue, Projections, SupportSet};
use crate::semigroup::SubInverseSemigroup;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("range of groupoid element {element} is not a unit atom")]
    RangeNotAtom { element: usize },
    #[error("coset relation is not an equivalence: {reason} at ({i}, {j})")]
    NotEquivalence { reason: String, i: usize, j: usize },
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

/// The nonzero minimal projections of the projection calculus of a
/// sub-inverse semigroup, one per sub-idempotent, as supports in the
/// ambient calculus.
#[derive(Debug, Clone)]
pub struct UnitAtoms {
    /// Idempotent of the sub-semigroup labelling each atom.
    pub labels: Vec<usize>,
    /// Atom supports, aligned with `labels`.
    pub supports: Vec<SupportSet>,
}

impl UnitAtoms {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Index of the atom with exactly this support.
    pub fn find(&self, support: &SupportSet) -> Option<usize> {
        self.supports.iter().position(|s| s == support)
    }
}

/// Atom of each sub-idempotent `e`: the support of `e` minus the supports
/// of all strictly smaller sub-idempotents.
pub fn unit_atoms(
    p: &Projections,
    hsub: &SubInverseSemigroup,
) -> Result<UnitAtoms, CosetError> {
    let s = p.semigroup();
    let labels = hsub.idempotents(s);
    let mut supports = Vec::with_capacity(labels.len());
    for &e in &labels {
        let mut atom = p
            .supp_of_idempotent(e)
            .map_err(|err| CosetError::Internal(err.to_string()))?;
        for &f in &labels {
            if f != e && s.mult(f, e) == f {
                atom = atom.minus(
                    &p.supp_of_idempotent(f)
                        .map_err(|err| CosetError::Internal(err.to_string()))?,
                );
            }
        }
        if atom.is_empty() {
            return Err(CosetError::Internal(format!(
                "atom of sub-idempotent {e} is empty"
            )));
        }
        supports.push(atom);
    }
    Ok(UnitAtoms { labels, supports })
}

/// The groupoid of a sub-inverse semigroup: all nonzero products of a
/// member with a unit atom, with source and range maps and the partial
/// composition table.
#[derive(Debug, Clone)]
pub struct GroupoidH {
    pub elements: Vec<GeElement>,
    /// Atom index of `x* x` for each element.
    pub source: Vec<usize>,
    /// Atom index of `x x*` for each element.
    pub range: Vec<usize>,
    /// Composition `elements[i] * elements[j]`, defined exactly when
    /// `source[i] == range[j]`.
    pub comp: Vec<Vec<Option<usize>>>,
    /// Inverse of each element under the involution.
    pub star_map: Vec<usize>,
    /// Index of the unit at each atom.
    pub unit_of_atom: Vec<usize>,
    locator: BTreeMap<GeKey, usize>,
}

impl GroupoidH {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn locate(&self, p: &Projections, x: &GeElement) -> Option<usize> {
        self.locator.get(&p.ge_key(x)).copied()
    }
}

pub fn build_groupoid(
    p: &Projections,
    hsub: &SubInverseSemigroup,
    atoms: &UnitAtoms,
) -> Result<GroupoidH, CosetError> {
    let mut elements: Vec<GeElement> = Vec::new();
    let mut locator: BTreeMap<GeKey, usize> = BTreeMap::new();
    let mut source = Vec::new();
    let mut range = Vec::new();
    for &t in &hsub.members {
        for (a, atom) in atoms.supports.iter().enumerate() {
            match p.ge_new(t, atom.clone()) {
                GeValue::Zero => continue,
                GeValue::Elem(x) => {
                    if &x.support != atom {
                        // A unit atom meets a source down-set either fully
                        // or not at all; anything else is a model failure.
                        return Err(CosetError::Internal(format!(
                            "atom {a} partially met source of sub-element {t}"
                        )));
                    }
                    let key = p.ge_key(&x);
                    if locator.contains_key(&key) {
                        continue;
                    }
                    let rng = p.conj(x.g, &x.support);
                    let r = atoms.find(&rng).ok_or(CosetError::RangeNotAtom {
                        element: elements.len(),
                    })?;
                    locator.insert(key, elements.len());
                    elements.push(x);
                    source.push(a);
                    range.push(r);
                }
            }
        }
    }
    let n = elements.len();
    let mut comp = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = p.ge_mul(&elements[i], &elements[j]);
            match prod {
                GeValue::Zero => {
                    if source[i] == range[j] {
                        return Err(CosetError::Internal(format!(
                            "composable pair ({i}, {j}) vanished"
                        )));
                    }
                }
                GeValue::Elem(z) => {
                    if source[i] != range[j] {
                        return Err(CosetError::Internal(format!(
                            "non-composable pair ({i}, {j}) gave a nonzero product"
                        )));
                    }
                    let k = locator.get(&p.ge_key(&z)).copied().ok_or_else(|| {
                        CosetError::Internal(format!(
                            "product of groupoid pair ({i}, {j}) left the groupoid"
                        ))
                    })?;
                    comp[i][j] = Some(k);
                }
            }
        }
    }
    let mut star_map = Vec::with_capacity(n);
    for x in &elements {
        let xs = p.ge_star(x);
        let k = locator
            .get(&p.ge_key(&xs))
            .copied()
            .ok_or_else(|| CosetError::Internal("involution left the groupoid".into()))?;
        star_map.push(k);
    }
    let mut unit_of_atom = Vec::with_capacity(atoms.len());
    for (a, atom) in atoms.supports.iter().enumerate() {
        let unit = GeElement {
            g: atoms.labels[a],
            support: atom.clone(),
        };
        let k = locator
            .get(&p.ge_key(&unit))
            .copied()
            .ok_or_else(|| CosetError::Internal(format!("missing unit at atom {a}")))?;
        unit_of_atom.push(k);
    }
    Ok(GroupoidH {
        elements,
        source,
        range,
        comp,
        star_map,
        unit_of_atom,
        locator,
    })
}

/// The coset space: all nonzero `g * atom` with the atom below the source
/// projection of `g`, deduplicated; its quotient by right translation by
/// the groupoid; and the partial action of the ambient semigroup on the
/// quotient.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    pub elements: Vec<GeElement>,
    /// Atom index of the support of each element.
    pub atom_of: Vec<usize>,
    /// Number of raw `(g, atom)` pairs before deduplication.
    pub pair_count: usize,
    pub class_of: Vec<usize>,
    /// Member indices per class, increasing.
    pub classes: Vec<Vec<usize>>,
    /// Canonical representative of each class: the member whose
    /// `(element index, atom index)` pair is lexicographically least.
    pub reps: Vec<usize>,
    /// `elements[i] * groupoid[j]` located back in the coset space.
    pub mul_h: Vec<Vec<Option<usize>>>,
    /// Partial action: `act_table[g][class]`.
    pub act_table: Vec<Vec<Option<usize>>>,
    locator: BTreeMap<GeKey, usize>,
}

impl CosetSpace {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn locate(&self, p: &Projections, x: &GeElement) -> Option<usize> {
        self.locator.get(&p.ge_key(x)).copied()
    }

    /// Partial action of semigroup element `g` on a class.
    pub fn act(&self, g: usize, class: usize) -> Option<usize> {
        self.act_table[g][class]
    }
}

pub fn build_coset_space(
    p: &Projections,
    atoms: &UnitAtoms,
    groupoid: &GroupoidH,
) -> Result<CosetSpace, CosetError> {
    let s = p.semigroup();
    let mut elements: Vec<GeElement> = Vec::new();
    let mut atom_of: Vec<usize> = Vec::new();
    let mut locator: BTreeMap<GeKey, usize> = BTreeMap::new();
    let mut pair_count = 0usize;
    for g in 0..s.size() {
        let src = p.source_support(g);
        for (a, atom) in atoms.supports.iter().enumerate() {
            if !atom.is_subset(&src) {
                continue;
            }
            pair_count += 1;
            let x = GeElement {
                g,
                support: atom.clone(),
            };
            let key = p.ge_key(&x);
            if !locator.contains_key(&key) {
                locator.insert(key, elements.len());
                elements.push(x);
                atom_of.push(a);
            }
        }
    }
    let n = elements.len();

    let mut mul_h = vec![vec![None; groupoid.len()]; n];
    for i in 0..n {
        for (j, t) in groupoid.elements.iter().enumerate() {
            if let GeValue::Elem(z) = p.ge_mul(&elements[i], t) {
                let k = locator.get(&p.ge_key(&z)).copied().ok_or_else(|| {
                    CosetError::Internal(format!(
                        "translate of coset element {i} by groupoid element {j} escaped"
                    ))
                })?;
                mul_h[i][j] = Some(k);
            }
        }
    }

    // Relation: i ~ j iff some groupoid translate of i equals j.
    let related = |i: usize, j: usize| mul_h[i].iter().any(|&k| k == Some(j));
    for i in 0..n {
        if !related(i, i) {
            return Err(CosetError::NotEquivalence {
                reason: "not reflexive".into(),
                i,
                j: i,
            });
        }
        for j in 0..n {
            if related(i, j) && !related(j, i) {
                return Err(CosetError::NotEquivalence {
                    reason: "not symmetric".into(),
                    i,
                    j,
                });
            }
            for k in 0..n {
                if related(i, j) && related(j, k) && !related(i, k) {
                    return Err(CosetError::NotEquivalence {
                        reason: "not transitive".into(),
                        i,
                        j: k,
                    });
                }
            }
        }
    }

    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| related(i, j)).collect();
        for &j in &members {
            class_of[j] = classes.len();
        }
        classes.push(members);
    }
    let reps: Vec<usize> = classes
        .iter()
        .map(|members| {
            *members
                .iter()
                .min_by_key(|&&i| (elements[i].g, atom_of[i]))
                .expect("classes are nonempty")
        })
        .collect();

    let mut act_table = vec![vec![None; classes.len()]; s.size()];
    for g in 0..s.size() {
        let g_src = p.source_support(g);
        for (c, &rep) in reps.iter().enumerate() {
            let h = &elements[rep];
            let range_h = p.conj(h.g, &h.support);
            // Defined exactly when g* g dominates h h*.
            if !range_h.is_subset(&g_src) {
                continue;
            }
            let z = match p.ge_mul(&p.ge_of(g), h) {
                GeValue::Elem(z) => z,
                GeValue::Zero => {
                    return Err(CosetError::Internal(format!(
                        "action of {g} on class {c} vanished despite domination"
                    )))
                }
            };
            let k = locator.get(&p.ge_key(&z)).copied().ok_or_else(|| {
                CosetError::Internal(format!("action of {g} on class {c} escaped the space"))
            })?;
            act_table[g][c] = Some(class_of[k]);
        }
    }

    let space = CosetSpace {
        elements,
        atom_of,
        pair_count,
        class_of,
        classes,
        reps,
        mul_h,
        act_table,
        locator,
    };

    // Well-definedness: action status and output agree across members.
    for g in 0..s.size() {
        let g_src = p.source_support(g);
        for (c, members) in space.classes.iter().enumerate() {
            for &m in members {
                let h = &space.elements[m];
                let defined = p.conj(h.g, &h.support).is_subset(&g_src);
                match (defined, space.act_table[g][c]) {
                    (false, _) if defined != space.act_table[g][c].is_some() => {
                        return Err(CosetError::Internal(format!(
                            "action definedness depends on representative at ({g}, {c})"
                        )));
                    }
                    (true, None) => {
                        return Err(CosetError::Internal(format!(
                            "action definedness depends on representative at ({g}, {c})"
                        )));
                    }
                    (true, Some(out)) => {
                        if let GeValue::Elem(z) = p.ge_mul(&p.ge_of(g), h) {
                            let k = space.locate(p, &z).ok_or_else(|| {
                                CosetError::Internal("member action escaped".into())
                            })?;
                            if space.class_of[k] != out {
                                return Err(CosetError::Internal(format!(
                                    "action output depends on representative at ({g}, {c})"
                                )));
                            }
                        } else {
                            return Err(CosetError::Internal(
                                "member action vanished despite domination".into(),
                            ));
                        }
                    }
                    (false, _) => {}
                }
            }
        }
    }

    Ok(space)
}

/// Everything the higher layers need about one `(G, H')` pair.
#[derive(Debug, Clone)]
pub struct CosetStructure {
    pub atoms: UnitAtoms,
    pub groupoid: GroupoidH,
    pub space: CosetSpace,
}

impl CosetStructure {
    pub fn build(p: &Projections, hsub: &SubInverseSemigroup) -> Result<Self, CosetError> {
        let atoms = unit_atoms(p, hsub)?;
        let groupoid = build_groupoid(p, hsub, &atoms)?;
        let space = build_coset_space(p, &atoms, &groupoid)?;
        Ok(Self {
            atoms,
            groupoid,
            space,
        })
    }
}
