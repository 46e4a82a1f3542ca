//! Named example instances used by tests, the acceptance suite and the CLI.

use crate::algebra::FdStarAlgebra;
use crate::crossed::{CrossedError, GAlgebra};
use crate::linalg::{self, CMat};
use crate::scalar::Real;
use crate::semigroup::{
    builtin, enumerate_partial_injections, Builtin, FiniteInverseSemigroup, SubInverseSemigroup,
};

/// The symmetric inverse monoid on two points.
pub fn i2() -> FiniteInverseSemigroup {
    builtin(&Builtin::SymmetricInverseMonoid { n: 2 }).expect("builtin family")
}

/// The two-sided unit element.
pub fn identity_of(s: &FiniteInverseSemigroup) -> usize {
    (0..s.size())
        .find(|&g| (0..s.size()).all(|h| s.mult(g, h) == h && s.mult(h, g) == h))
        .expect("monoid fixture")
}

/// The unique non-identity element squaring to the identity.
pub fn transposition_of(s: &FiniteInverseSemigroup) -> usize {
    let one = identity_of(s);
    (0..s.size())
        .find(|&g| g != one && s.mult(g, g) == one)
        .expect("transposition exists")
}

/// The minimum idempotent (the empty partial map).
pub fn zero_idem_of(s: &FiniteInverseSemigroup) -> usize {
    *s.idempotents()
        .iter()
        .find(|&&e| s.idempotents().iter().all(|&f| s.mult(e, f) == e))
        .expect("zero idempotent exists")
}

/// The two rank-one idempotents of the symmetric inverse monoid on two
/// points, in index order.
pub fn rank1_idempotents_of(s: &FiniteInverseSemigroup) -> (usize, usize) {
    let one = identity_of(s);
    let zero = zero_idem_of(s);
    let mut rest = s
        .idempotents()
        .iter()
        .copied()
        .filter(|&e| e != one && e != zero);
    (rest.next().unwrap(), rest.next().unwrap())
}

/// The subgroup `{identity, transposition}`.
pub fn z2_inside_i2(s: &FiniteInverseSemigroup) -> SubInverseSemigroup {
    SubInverseSemigroup::new(s, vec![identity_of(s), transposition_of(s)]).expect("closed")
}

/// The diagonal algebra on `k` coordinates.
pub fn diagonal_algebra<T: Real>(k: usize) -> FdStarAlgebra<T> {
    let mut mul = vec![vec![Vec::new(); k]; k];
    for (i, row) in mul.iter_mut().enumerate() {
        row[i].push((i, linalg::cx::<T>(1.0, 0.0)));
    }
    FdStarAlgebra::new(k, mul, linalg::identity::<T>(k), T::from_config(1e-10))
        .expect("diagonal algebra")
}

/// One-dimensional coefficients with every element acting as the identity.
pub fn scalars_with_trivial_action<T: Real>(
    s: &FiniteInverseSemigroup,
) -> Result<GAlgebra<T>, CrossedError> {
    let alg = diagonal_algebra::<T>(1);
    let action = vec![linalg::identity::<T>(1); s.size()];
    GAlgebra::validate(s, alg, action, T::from_config(1e-10))
}

/// The diagonal algebra on the point set with the partial-permutation
/// action of the symmetric inverse monoid: coordinates move along the
/// partial map and die outside its range.
pub fn partial_permutation_algebra<T: Real>(
    s: &FiniteInverseSemigroup,
) -> Result<GAlgebra<T>, CrossedError> {
    let n = (1..=6)
        .find(|&n| {
            builtin(&Builtin::SymmetricInverseMonoid { n })
                .map(|t| t.size() == s.size())
                .unwrap_or(false)
        })
        .expect("semigroup is a symmetric inverse monoid");
    let elems = enumerate_partial_injections(n);
    let alg = diagonal_algebra::<T>(n);
    let action: Vec<CMat<T>> = elems
        .iter()
        .map(|p| {
            let mut m = linalg::zeros::<T>(n, n);
            for (j, &img) in p.0.iter().enumerate() {
                if let Some(i) = img {
                    m[(i, j)] = linalg::cx(1.0, 0.0);
                }
            }
            m
        })
        .collect();
    GAlgebra::validate(s, alg, action, T::from_config(1e-10))
}

/// Group algebra coefficients: the diagonal algebra on the group's
/// underlying set, permuted by left translation.
pub fn regular_rep_group_algebra<T: Real>(
    s: &FiniteInverseSemigroup,
) -> Result<GAlgebra<T>, CrossedError> {
    let n = s.size();
    let alg = diagonal_algebra::<T>(n);
    let action: Vec<CMat<T>> = (0..n)
        .map(|g| {
            let mut m = linalg::zeros::<T>(n, n);
            for h in 0..n {
                m[(s.mult(g, h), h)] = linalg::cx(1.0, 0.0);
            }
            m
        })
        .collect();
    GAlgebra::validate(s, alg, action, T::from_config(1e-10))
}

/// Coefficient choice for a named fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientKind {
    PartialPermutation,
    TrivialScalars,
}

/// A named `(G, H', A)` instance.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub semigroup: FiniteInverseSemigroup,
    pub sub_members: Vec<usize>,
    pub coefficients: CoefficientKind,
}

impl Fixture {
    pub fn hsub(&self) -> SubInverseSemigroup {
        SubInverseSemigroup::new(&self.semigroup, self.sub_members.clone()).expect("fixture sub")
    }

    pub fn algebra<T: Real>(&self) -> GAlgebra<T> {
        match self.coefficients {
            CoefficientKind::PartialPermutation => {
                partial_permutation_algebra(&self.semigroup).expect("fixture algebra")
            }
            CoefficientKind::TrivialScalars => {
                scalars_with_trivial_action(&self.semigroup).expect("fixture algebra")
            }
        }
    }
}

/// Sub-semigroup-algebra choice for a named induction instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubCoefficientKind {
    /// One-dimensional coefficients, trivial action.
    TrivialScalars,
    /// Diagonal algebra on the sub-semigroup permuted by left translation.
    RegularRep,
    /// Partial-permutation coefficients (sub-semigroup must be a full
    /// symmetric inverse monoid).
    PartialPermutation,
}

/// A named `(G, H', D)` induction instance.
#[derive(Debug, Clone)]
pub struct InductionFixture {
    pub name: &'static str,
    pub semigroup: FiniteInverseSemigroup,
    pub sub_members: Vec<usize>,
    pub coefficients: SubCoefficientKind,
}

impl InductionFixture {
    pub fn hsub(&self) -> SubInverseSemigroup {
        SubInverseSemigroup::new(&self.semigroup, self.sub_members.clone()).expect("fixture sub")
    }

    /// The standalone sub-semigroup together with the coefficient algebra
    /// over it.
    pub fn sub_algebra<T: Real>(&self) -> (FiniteInverseSemigroup, GAlgebra<T>) {
        let hsub = self.hsub();
        let h_std = hsub.extract(&self.semigroup).expect("extract sub");
        let ga = match self.coefficients {
            SubCoefficientKind::TrivialScalars => {
                scalars_with_trivial_action(&h_std).expect("fixture sub-algebra")
            }
            SubCoefficientKind::RegularRep => {
                regular_rep_group_algebra(&h_std).expect("fixture sub-algebra")
            }
            SubCoefficientKind::PartialPermutation => {
                partial_permutation_algebra(&h_std).expect("fixture sub-algebra")
            }
        };
        (h_std, ga)
    }
}

/// Full idempotent sub-semigroup of the symmetric inverse monoid on two
/// points, with partial-permutation coefficients.
pub fn fix1() -> Fixture {
    let s = i2();
    let sub = s.idempotents().to_vec();
    Fixture {
        name: "FIX1",
        semigroup: s,
        sub_members: sub,
        coefficients: CoefficientKind::PartialPermutation,
    }
}

/// The subgroup `{identity, transposition}` of the symmetric inverse
/// monoid on two points, with partial-permutation coefficients.
pub fn fix2() -> Fixture {
    let s = i2();
    let sub = vec![identity_of(&s), transposition_of(&s)];
    Fixture {
        name: "FIX2",
        semigroup: s,
        sub_members: sub,
        coefficients: CoefficientKind::PartialPermutation,
    }
}

/// Degenerate self case: the whole monoid as its own sub-semigroup.
pub fn fix3() -> Fixture {
    let s = i2();
    let sub = (0..s.size()).collect();
    Fixture {
        name: "FIX3",
        semigroup: s,
        sub_members: sub,
        coefficients: CoefficientKind::PartialPermutation,
    }
}

/// Trivial group with scalar coefficients.
pub fn triv() -> Fixture {
    let s = builtin(&Builtin::Group { mult: vec![vec![0]] }).expect("trivial group");
    Fixture {
        name: "TRIV",
        semigroup: s,
        sub_members: vec![0],
        coefficients: CoefficientKind::TrivialScalars,
    }
}

pub fn fixture(name: &str) -> Option<Fixture> {
    match name {
        "FIX1" => Some(fix1()),
        "FIX2" => Some(fix2()),
        "FIX3" => Some(fix3()),
        "TRIV" => Some(triv()),
        _ => None,
    }
}

pub fn fixture_names() -> &'static [&'static str] {
    &["FIX1", "FIX2", "FIX3", "TRIV"]
}

/// Scalar coefficients with trivial action over the subgroup
/// `{identity, transposition}`.
pub fn cor1() -> InductionFixture {
    let s = i2();
    let sub = vec![identity_of(&s), transposition_of(&s)];
    InductionFixture {
        name: "COR1",
        semigroup: s,
        sub_members: sub,
        coefficients: SubCoefficientKind::TrivialScalars,
    }
}

/// Two-dimensional swap coefficients over the same subgroup.
pub fn cor2() -> InductionFixture {
    let s = i2();
    let sub = vec![identity_of(&s), transposition_of(&s)];
    InductionFixture {
        name: "COR2",
        semigroup: s,
        sub_members: sub,
        coefficients: SubCoefficientKind::RegularRep,
    }
}

/// Self case: the whole monoid inducing from itself.
pub fn cor3() -> InductionFixture {
    let s = i2();
    let sub = (0..s.size()).collect();
    InductionFixture {
        name: "COR3",
        semigroup: s,
        sub_members: sub,
        coefficients: SubCoefficientKind::PartialPermutation,
    }
}

pub fn induction_fixture(name: &str) -> Option<InductionFixture> {
    match name {
        "COR1" => Some(cor1()),
        "COR2" => Some(cor2()),
        "COR3" => Some(cor3()),
        _ => None,
    }
}

pub fn induction_fixture_names() -> &'static [&'static str] {
    &["COR1", "COR2", "COR3"]
}
