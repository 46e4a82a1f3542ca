//! Finite inverse semigroup crossed products and imprimitivity bimodules.
//!
//! The crate builds, for a finite inverse semigroup `G`, a finite
//! sub-inverse semigroup `H'` and a finite-dimensional `G`-algebra `A`, the
//! bimodule linking the two crossed products `C0(G_H/H, A) ⋊ G` and
//! `A ⋊ H'`, checks all of its structural identities numerically, and
//! decides Morita equivalence of the two sides by comparing Wedderburn
//! block counts.
//!
//! Modules, bottom to top:
//!
//! * [`semigroup`] — multiplication-table inverse semigroups and builtins;
//! * [`projection`] — the commutative projection calculus and the inverse
//!   semigroup of projected elements, with a faithful matrix oracle;
//! * [`coset`] — unit atoms, the groupoid of a sub-inverse semigroup, the
//!   coset space and the partial action on it;
//! * [`algebra`] — structure-constant *-algebras: radical, blocks,
//!   faithful representation, positivity and operator norm;
//! * [`crossed`] — validated algebra actions, algebraic crossed products,
//!   reduced-relation quotients and groupoid crossed products;
//! * [`bimodule`] — the module actions, the two inner products, identity,
//!   positivity and norm checks, and the equivalence verdict;
//! * [`induction`] — induced algebras from a sub-inverse-semigroup action
//!   and the corresponding restricted-ideal verdict;
//! * [`fixtures`] — the named example instances used by tests and the CLI;
//! * [`report`] — serializable reports and the full suite runner.
//!
//! All numeric code is generic over the real scalar through [`scalar::Real`];
//! concrete `f64` aliases live at the crate root.

pub mod algebra;
pub mod bimodule;
pub mod coset;
pub mod crossed;
pub mod fixtures;
pub mod induction;
pub mod linalg;
pub mod projection;
pub mod report;
pub mod scalar;
pub mod semigroup;

pub use scalar::Real;

/// Complex scalar over a real base field.
pub type Cx<T> = num_complex::Complex<T>;

/// Default concrete scalar used by the CLI and the acceptance suite.
pub type F = f64;

/// Structure-constant *-algebra over `f64`.
pub type FdStarAlgebra64 = algebra::FdStarAlgebra<F>;
/// Certified semisimple model over `f64`.
pub type CStarModel64 = algebra::CStarModel<F>;
/// Algebra with validated semigroup action over `f64`.
pub type GAlgebra64 = crossed::GAlgebra<F>;
/// Crossed product over `f64`.
pub type CrossedProduct64 = crossed::CrossedProduct<F>;
/// Bimodule verification context over `f64`.
pub type BimoduleContext64<'a> = bimodule::BimoduleContext<'a, F>;
