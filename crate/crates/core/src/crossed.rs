//! Crossed products of a validated action by a finite inverse semigroup.
//!
//! The same constructor serves every crossed product in the pipeline: the
//! index set is always a set of projected elements closed under product and
//! involution, and the coefficient at an index is always the image of the
//! extended action of its range projection. On top of the algebraic
//! product sit the reduced-relation quotient (the crossed product in
//! Sieben's sense) and, for the sub-inverse-semigroup side, the groupoid
//! convolution algebra as an independent route to the same object.

use crate::algebra::{AlgebraError, BlockReport, FdStarAlgebra};
use crate::coset::{GroupoidH, UnitAtoms};
use crate::linalg::{self, cabs, CMat, CVec};
use crate::projection::{GeElement, GeKey, GeValue, Projections};
use crate::scalar::Real;
use crate::semigroup::{FiniteInverseSemigroup, SubInverseSemigroup};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrossedError {
    #[error("action is not a semigroup homomorphism at pair ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("action of element {0} is not a *-endomorphism")]
    NotStarEndo(usize),
    #[error("idempotent-centrality axiom fails at (g = {g}, a = {a}, b = {b})")]
    CentralityAxiomFails { g: usize, a: usize, b: usize },
    #[error("index set not closed: product of ({0}, {1}) escaped")]
    IndexNotClosed(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A coefficient *-algebra together with a validated semigroup action.
#[derive(Debug, Clone)]
pub struct GAlgebra<T: Real> {
    pub alg: FdStarAlgebra<T>,
    /// Action matrix per semigroup element, on coefficient coordinates.
    pub action: Vec<CMat<T>>,
}

impl<T: Real> GAlgebra<T> {
    /// Validates the three action axioms to `tol`: semigroup homomorphism,
    /// *-endomorphism per element, and idempotent centrality
    /// `(g g*)(a) b = a (g g*)(b)`.
    pub fn validate(
        s: &FiniteInverseSemigroup,
        alg: FdStarAlgebra<T>,
        action: Vec<CMat<T>>,
        tol: T,
    ) -> Result<Self, CrossedError> {
        let n = s.size();
        let d = alg.dim();
        if action.len() != n || action.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(CrossedError::DimMismatch(
                "one action matrix of coefficient dimension per semigroup element".into(),
            ));
        }
        for g in 0..n {
            for h in 0..n {
                let res = linalg::max_abs(&(&action[g] * &action[h] - &action[s.mult(g, h)]));
                if res > tol {
                    return Err(CrossedError::NotHomomorphism(g, h));
                }
            }
        }
        let invol = alg.invol_matrix();
        for g in 0..n {
            // Star compatibility: alpha_g(x*) = alpha_g(x)*.
            let lhs = &action[g] * invol;
            let rhs = invol * action[g].map(|c| c.conj());
            if linalg::max_abs(&(lhs - rhs)) > tol {
                return Err(CrossedError::NotStarEndo(g));
            }
            // Multiplicativity on basis pairs.
            for i in 0..d {
                for j in 0..d {
                    let mut prod = CVec::<T>::zeros(d);
                    for &(k, c) in alg.basis_product(i, j) {
                        prod[k] += c;
                    }
                    let lhs = &action[g] * prod;
                    let rhs = alg.mul_vec(
                        &(&action[g] * basis_vec::<T>(d, i)),
                        &(&action[g] * basis_vec::<T>(d, j)),
                    );
                    if linalg::max_abs_vec(&(lhs - rhs)) > tol {
                        return Err(CrossedError::NotStarEndo(g));
                    }
                }
            }
        }
        for g in 0..n {
            let e = s.range_proj(g);
            for a in 0..d {
                let ea = &action[e] * basis_vec::<T>(d, a);
                for b in 0..d {
                    let eb = &action[e] * basis_vec::<T>(d, b);
                    let lhs = alg.mul_vec(&ea, &basis_vec::<T>(d, b));
                    let rhs = alg.mul_vec(&basis_vec::<T>(d, a), &eb);
                    if linalg::max_abs_vec(&(lhs - rhs)) > tol {
                        return Err(CrossedError::CentralityAxiomFails { g, a, b });
                    }
                }
            }
        }
        Ok(Self { alg, action })
    }
}

pub(crate) fn basis_vec<T: Real>(dim: usize, i: usize) -> CVec<T> {
    let mut v = CVec::<T>::zeros(dim);
    v[i] = linalg::cx(1.0, 0.0);
    v
}

/// The extended action calculus of a validated algebra: minimal-projection
/// matrices per idempotent and matrices for arbitrary projected elements.
#[derive(Debug)]
pub struct ActionCalculus<'a, T: Real> {
    pub proj: &'a Projections<'a>,
    pub ga: GAlgebra<T>,
    /// Matrix of the minimal projection at each idempotent position:
    /// `q_f = alpha_f prod_{f' < f} (1 - alpha_{f'})`.
    q_mats: Vec<CMat<T>>,
}

impl<'a, T: Real> ActionCalculus<'a, T> {
    pub fn new(proj: &'a Projections<'a>, ga: GAlgebra<T>) -> Self {
        let s = proj.semigroup();
        let d = ga.alg.dim();
        let idem = s.idempotents();
        let q_mats = idem
            .iter()
            .map(|&f| {
                let mut m = ga.action[f].clone();
                for &f2 in idem {
                    if f2 != f && s.mult(f2, f) == f2 {
                        m = m * (linalg::identity::<T>(d) - &ga.action[f2]);
                    }
                }
                m
            })
            .collect();
        Self { proj, ga, q_mats }
    }

    pub fn coeff_dim(&self) -> usize {
        self.ga.alg.dim()
    }

    /// Action matrix of a bare projection with the given support.
    pub fn support_matrix(&self, support: &crate::projection::SupportSet) -> CMat<T> {
        let d = self.coeff_dim();
        let mut m = linalg::zeros::<T>(d, d);
        for pos in support.iter() {
            m += &self.q_mats[pos];
        }
        m
    }

    /// Extended action matrix of a projected element `g * p`.
    pub fn ge_matrix(&self, x: &GeElement) -> CMat<T> {
        &self.ga.action[x.g] * self.support_matrix(&x.support)
    }

    /// Matrix of the range projection `x x*`.
    pub fn range_matrix(&self, x: &GeElement) -> CMat<T> {
        self.support_matrix(&self.proj.conj(x.g, &x.support))
    }
}

/// Closure of a seed set of projected elements under product and
/// involution, deduplicated, in deterministic order.
pub fn ge_closure(proj: &Projections, seeds: Vec<GeElement>) -> Vec<GeElement> {
    let mut elements: Vec<GeElement> = Vec::new();
    let mut locator: BTreeMap<GeKey, usize> = BTreeMap::new();
    let mut frontier: Vec<usize> = Vec::new();
    let push = |x: GeElement,
                    elements: &mut Vec<GeElement>,
                    locator: &mut BTreeMap<GeKey, usize>,
                    frontier: &mut Vec<usize>| {
        let key = proj.ge_key(&x);
        if !locator.contains_key(&key) {
            locator.insert(key, elements.len());
            frontier.push(elements.len());
            elements.push(x);
        }
    };
    for x in seeds {
        push(x, &mut elements, &mut locator, &mut frontier);
    }
    while let Some(i) = frontier.pop() {
        let x = elements[i].clone();
        push(
            proj.ge_star(&x),
            &mut elements,
            &mut locator,
            &mut frontier,
        );
        let snapshot = elements.len();
        for j in 0..snapshot {
            let y = elements[j].clone();
            for prod in [proj.ge_mul(&x, &y), proj.ge_mul(&y, &x)] {
                if let GeValue::Elem(z) = prod {
                    push(z, &mut elements, &mut locator, &mut frontier);
                }
            }
        }
    }
    elements
}

/// A crossed product: standard-element basis over a closed index set.
#[derive(Debug)]
pub struct CrossedProduct<T: Real> {
    /// Index set of projected elements, closed under product and star.
    pub index: Vec<GeElement>,
    index_locator: BTreeMap<GeKey, usize>,
    /// Extended action matrix per index element.
    pub ge_mats: Vec<CMat<T>>,
    /// Range projection matrix per index element.
    pub range_mats: Vec<CMat<T>>,
    /// Orthonormal coefficient basis (columns) per index element.
    pub coeff_basis: Vec<CMat<T>>,
    /// Start of each index block in the flat coordinate space.
    pub offsets: Vec<usize>,
    pub dim: usize,
    pub algebra: FdStarAlgebra<T>,
}

impl<T: Real> CrossedProduct<T> {
    /// Block of a flat coordinate vector belonging to one index element.
    pub fn block(&self, x: &CVec<T>, slot: usize) -> CVec<T> {
        let k = self.coeff_basis[slot].ncols();
        let mut out = CVec::<T>::zeros(k);
        for i in 0..k {
            out[i] = x[self.offsets[slot] + i];
        }
        out
    }

    /// Coefficient of one index element, back in coefficient coordinates.
    pub fn coeff_at(&self, x: &CVec<T>, slot: usize) -> CVec<T> {
        &self.coeff_basis[slot] * self.block(x, slot)
    }

    /// Adds `coeff (x) index[slot]` into a flat vector, normalizing the
    /// coefficient through the range projection.
    pub fn accumulate(&self, out: &mut CVec<T>, slot: usize, coeff: &CVec<T>) {
        let coords = self.coeff_basis[slot].adjoint() * (&self.range_mats[slot] * coeff);
        for i in 0..coords.len() {
            out[self.offsets[slot] + i] += coords[i];
        }
    }

    pub fn locate(&self, proj: &Projections, x: &GeElement) -> Option<usize> {
        self.index_locator.get(&proj.ge_key(x)).copied()
    }
}

impl<'a, T: Real> ActionCalculus<'a, T> {
    /// Builds the crossed product over a closed index set: the coefficient
    /// space at each index element is the image of its range projection,
    /// the product is `(a x s)(b x t) = a s(b) x st` with vanishing terms
    /// dropped, and the involution is `(b x t)* = t*(b*) x t*`.
    pub fn build_acp(
        &self,
        index: Vec<GeElement>,
        tol: T,
    ) -> Result<CrossedProduct<T>, CrossedError> {
        let proj = self.proj;
        let mut index_locator = BTreeMap::new();
        for (i, x) in index.iter().enumerate() {
            index_locator.insert(proj.ge_key(x), i);
        }
        let ge_mats: Vec<CMat<T>> = index.iter().map(|x| self.ge_matrix(x)).collect();
        let range_mats: Vec<CMat<T>> = index.iter().map(|x| self.range_matrix(x)).collect();
        let coeff_basis: Vec<CMat<T>> = range_mats
            .iter()
            .map(|m| linalg::column_space(m, tol))
            .collect();
        let mut offsets = Vec::with_capacity(index.len());
        let mut dim = 0usize;
        for b in &coeff_basis {
            offsets.push(dim);
            dim += b.ncols();
        }

        // Precompute index products and the star map.
        let mut prod_table = vec![vec![None; index.len()]; index.len()];
        for i in 0..index.len() {
            for j in 0..index.len() {
                if let GeValue::Elem(z) = proj.ge_mul(&index[i], &index[j]) {
                    let k = index_locator
                        .get(&proj.ge_key(&z))
                        .copied()
                        .ok_or(CrossedError::IndexNotClosed(i, j))?;
                    prod_table[i][j] = Some(k);
                }
            }
        }
        let mut star_table = Vec::with_capacity(index.len());
        for (i, x) in index.iter().enumerate() {
            let xs = proj.ge_star(x);
            let k = index_locator
                .get(&proj.ge_key(&xs))
                .copied()
                .ok_or(CrossedError::IndexNotClosed(i, i))?;
            star_table.push(k);
        }

        let shell = CrossedProduct {
            index,
            index_locator,
            ge_mats,
            range_mats,
            coeff_basis,
            offsets,
            dim,
            algebra: FdStarAlgebra::new(0, vec![], linalg::zeros::<T>(0, 0), tol)?,
        };

        // Structure constants.
        let mut mul = vec![vec![Vec::new(); dim]; dim];
        for si in 0..shell.index.len() {
            let bi = &shell.coeff_basis[si];
            for sj in 0..shell.index.len() {
                let Some(sk) = prod_table[si][sj] else {
                    continue;
                };
                let bj = &shell.coeff_basis[sj];
                for ci in 0..bi.ncols() {
                    let a = bi.column(ci).into_owned();
                    for cj in 0..bj.ncols() {
                        let b = bj.column(cj).into_owned();
                        let coeff = self.ga.alg.mul_vec(&a, &(&shell.ge_mats[si] * &b));
                        let coords =
                            shell.coeff_basis[sk].adjoint() * (&shell.range_mats[sk] * coeff);
                        let row = shell.offsets[si] + ci;
                        let col = shell.offsets[sj] + cj;
                        for (k, &c) in coords.iter().enumerate() {
                            if cabs(&c) > tol {
                                mul[row][col].push((shell.offsets[sk] + k, c));
                            }
                        }
                    }
                }
            }
        }
        let mut invol = linalg::zeros::<T>(dim, dim);
        for si in 0..shell.index.len() {
            let sk = star_table[si];
            let bi = &shell.coeff_basis[si];
            let m_star = &shell.ge_mats[sk];
            for ci in 0..bi.ncols() {
                let a = bi.column(ci).into_owned();
                let coeff = m_star * self.ga.alg.star_vec(&a);
                let coords = shell.coeff_basis[sk].adjoint() * (&shell.range_mats[sk] * coeff);
                for (k, &c) in coords.iter().enumerate() {
                    invol[(shell.offsets[sk] + k, shell.offsets[si] + ci)] = c;
                }
            }
        }
        let algebra = FdStarAlgebra::new(dim, mul, invol, tol)?;
        Ok(CrossedProduct { algebra, ..shell })
    }

    /// Rank certificate for linear independence of the standard basis: maps
    /// each basis element into the coefficient-space-tensor-translation
    /// model and checks the flattened family has full rank.
    pub fn independence_rank(&self, cp: &CrossedProduct<T>, tol: T) -> (usize, bool) {
        let items: Vec<(GeElement, CMat<T>)> = cp
            .index
            .iter()
            .cloned()
            .zip(cp.coeff_basis.iter().cloned())
            .collect();
        standard_family_rank(self, &items, tol)
    }

    /// Quotient by the reduced relations `P(a) x s = a x (P s)` over all
    /// idempotent-generated projections, closed into a two-sided *-ideal.
    /// Returns the quotient with the projection and lift maps and the
    /// ideal dimension.
    pub fn sieben_quotient(
        &self,
        cp: &CrossedProduct<T>,
        tol: T,
    ) -> Result<SiebenQuotient<T>, CrossedError> {
        let proj = self.proj;
        let s = proj.semigroup();
        let d = self.coeff_dim();
        let mut seeds: Vec<CVec<T>> = Vec::new();
        for &e in s.idempotents() {
            let supp = self
                .proj
                .supp_of_idempotent(e)
                .expect("idempotent support");
            let q_mat = self.support_matrix(&supp);
            let e_ge = proj.ge_of(e);
            for (slot, x) in cp.index.iter().enumerate() {
                let target = proj.ge_mul(&e_ge, x);
                let target_slot = match &target {
                    GeValue::Zero => None,
                    GeValue::Elem(z) => Some(
                        cp.locate(proj, z)
                            .ok_or(CrossedError::IndexNotClosed(slot, slot))?,
                    ),
                };
                for a in 0..d {
                    let av = basis_vec::<T>(d, a);
                    let mut rel = CVec::<T>::zeros(cp.dim);
                    cp.accumulate(&mut rel, slot, &(&q_mat * &av));
                    if let Some(ts) = target_slot {
                        let mut neg = CVec::<T>::zeros(cp.dim);
                        cp.accumulate(&mut neg, ts, &av);
                        rel -= neg;
                    }
                    if linalg::max_abs_vec(&rel) > tol {
                        seeds.push(rel);
                    }
                }
            }
        }
        let ideal = cp.algebra.ideal_closure(&seeds, tol);
        let ideal_dim = ideal.len();
        let (algebra, projection, lift) = cp
            .algebra
            .quotient_by_ideal(&ideal.as_matrix(), tol)?;
        Ok(SiebenQuotient {
            algebra,
            projection,
            lift,
            ideal_dim,
        })
    }
}

/// Rank of a family of standard elements `(coefficient basis, index)` in
/// the faithful model on coefficient space tensor translation space.
pub fn standard_family_rank<T: Real>(
    calc: &ActionCalculus<T>,
    items: &[(GeElement, CMat<T>)],
    tol: T,
) -> (usize, bool) {
    let s = calc.proj.semigroup();
    let n = s.size();
    let d = calc.coeff_dim();
    let total: usize = items.iter().map(|(_, b)| b.ncols()).sum();
    if total == 0 {
        return (0, true);
    }
    let mut flat = linalg::zeros::<T>(d * n * d * n, total);
    let mut offset = 0usize;
    for (x, basis) in items {
        let m = calc.ge_matrix(x);
        for col in 0..basis.ncols() {
            let a = basis.column(col).into_owned();
            let la = calc.ga.alg.left_mult(&a);
            let block = &la * &m;
            for h in 0..n {
                let pos = s
                    .idem_position(s.range_proj(h))
                    .expect("range projection is idempotent");
                if !x.support.contains(pos) {
                    continue;
                }
                let gh = s.mult(x.g, h);
                for r in 0..d {
                    for c in 0..d {
                        flat[((gh * d + r) * d * n + (h * d + c), offset + col)] +=
                            block[(r, c)];
                    }
                }
            }
        }
        offset += basis.ncols();
    }
    let rank = linalg::rank(&flat, tol);
    (rank, rank == total)
}

/// Quotient of a crossed product by the reduced relations.
#[derive(Debug)]
pub struct SiebenQuotient<T: Real> {
    pub algebra: FdStarAlgebra<T>,
    /// Old coordinates -> quotient coordinates.
    pub projection: CMat<T>,
    /// Quotient coordinates -> representatives in old coordinates.
    pub lift: CMat<T>,
    pub ideal_dim: usize,
}

/// Groupoid convolution crossed product, built directly from the
/// composition table; serves as the independent route to the
/// sub-inverse-semigroup crossed product.
pub fn groupoid_cp<T: Real>(
    calc: &ActionCalculus<T>,
    atoms: &UnitAtoms,
    groupoid: &GroupoidH,
    tol: T,
) -> Result<FdStarAlgebra<T>, CrossedError> {
    let n = groupoid.len();
    let act_of = |i: usize| -> CMat<T> {
        &calc.ga.action[groupoid.elements[i].g]
            * calc.support_matrix(&atoms.supports[groupoid.source[i]])
    };
    let range_proj: Vec<CMat<T>> = (0..n)
        .map(|i| calc.support_matrix(&atoms.supports[groupoid.range[i]]))
        .collect();
    let bases: Vec<CMat<T>> = range_proj
        .iter()
        .map(|m| linalg::column_space(m, tol))
        .collect();
    let mut offsets = Vec::with_capacity(n);
    let mut dim = 0usize;
    for b in &bases {
        offsets.push(dim);
        dim += b.ncols();
    }
    let mut mul = vec![vec![Vec::new(); dim]; dim];
    for i in 0..n {
        let mi = act_of(i);
        for j in 0..n {
            let Some(k) = groupoid.comp[i][j] else {
                continue;
            };
            for ci in 0..bases[i].ncols() {
                let a = bases[i].column(ci).into_owned();
                for cj in 0..bases[j].ncols() {
                    let b = bases[j].column(cj).into_owned();
                    let coeff = calc.ga.alg.mul_vec(&a, &(&mi * &b));
                    let coords = bases[k].adjoint() * (&range_proj[k] * coeff);
                    for (l, &c) in coords.iter().enumerate() {
                        if cabs(&c) > tol {
                            mul[offsets[i] + ci][offsets[j] + cj].push((offsets[k] + l, c));
                        }
                    }
                }
            }
        }
    }
    let mut invol = linalg::zeros::<T>(dim, dim);
    for i in 0..n {
        let k = groupoid.star_map[i];
        let mk = act_of(k);
        for ci in 0..bases[i].ncols() {
            let a = bases[i].column(ci).into_owned();
            let coeff = &mk * calc.ga.alg.star_vec(&a);
            let coords = bases[k].adjoint() * (&range_proj[k] * coeff);
            for (l, &c) in coords.iter().enumerate() {
                invol[(offsets[k] + l, offsets[i] + ci)] = c;
            }
        }
    }
    Ok(FdStarAlgebra::new(dim, mul, invol, tol)?)
}

/// Outcome of comparing the two routes to the sub-semigroup crossed
/// product: the quotient of the algebraic crossed product against the
/// groupoid convolution algebra.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CrosscheckReport {
    pub acp_dim: usize,
    pub sieben_dim: usize,
    pub sieben_ideal_dim: usize,
    pub groupoid_dim: usize,
    pub sieben_blocks: BlockReport,
    pub groupoid_blocks: BlockReport,
    pub dims_match: bool,
    pub blocks_match: bool,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.dims_match && self.blocks_match && self.sieben_blocks.radical_dim == 0
    }
}

/// Builds both routes to the crossed product by the sub-inverse semigroup
/// and compares dimension and block structure.
pub fn crosscheck_sub_crossed_product<T: Real>(
    calc: &ActionCalculus<T>,
    hsub: &SubInverseSemigroup,
    atoms: &UnitAtoms,
    groupoid: &GroupoidH,
    seed: u64,
    tol: T,
) -> Result<CrosscheckReport, CrossedError> {
    let proj = calc.proj;
    let s = proj.semigroup();
    let mut seeds: Vec<GeElement> = hsub.members.iter().map(|&t| proj.ge_of(t)).collect();
    seeds.extend(s.idempotents().iter().map(|&e| proj.ge_of(e)));
    let index = ge_closure(proj, seeds);
    let cp = calc.build_acp(index, tol)?;
    let quot = calc.sieben_quotient(&cp, tol)?;
    let gcp = groupoid_cp(calc, atoms, groupoid, tol)?;
    let sieben_blocks = quot.algebra.blocks(seed, tol, 5)?;
    let groupoid_blocks = gcp.blocks(seed, tol, 5)?;
    let dims_match = quot.algebra.dim() == gcp.dim();
    let blocks_match = sieben_blocks.blocks == groupoid_blocks.blocks
        && sieben_blocks.radical_dim == groupoid_blocks.radical_dim;
    Ok(CrosscheckReport {
        acp_dim: cp.dim,
        sieben_dim: quot.algebra.dim(),
        sieben_ideal_dim: quot.ideal_dim,
        groupoid_dim: gcp.dim(),
        sieben_blocks,
        groupoid_blocks,
        dims_match,
        blocks_match,
    })
}
