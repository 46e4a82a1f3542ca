//! The bimodule between the two crossed products and its verification.
//!
//! For a pair `(G, H')` with coefficient algebra `A`, the module carrier is
//! spanned by standard elements `a x g` over the coset-space elements. The
//! right side is the crossed product over the groupoid; the left side is
//! the crossed product of `A` tensored with functions on the quotient. On
//! top sit the two inner products, the structural identities, positivity
//! and norm inequalities, the fullness and comparison-map ranks, and the
//! final Morita verdict by block count.

use crate::algebra::{AlgebraError, BlockReport, CStarModel, FdStarAlgebra};
use crate::coset::{CosetError, CosetStructure};
use crate::crossed::{
    basis_vec, ge_closure, ActionCalculus, CrossedError, CrossedProduct, GAlgebra, SiebenQuotient,
};
use crate::linalg::{self, CMat, CVec};
use crate::projection::{GeElement, GeValue, Projections};
use crate::scalar::Real;
use crate::semigroup::SubInverseSemigroup;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BimoduleError {
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("model consistency failure: {0}")]
    Model(String),
}

/// Residuals of the module identities over seeded random trials.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub trials: usize,
    pub seed: u64,
    /// Max residual per identity, in declaration order:
    /// right-association, B-hermitian, left-association, E-hermitian,
    /// adjoint-transfer, transpose-transfer, linking.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Exhaustive comparison of the two expansions of the mixed pairing on
/// standard triples.
#[derive(Debug, Clone, Serialize)]
pub struct SupportEqualityReport {
    pub triples: usize,
    pub support_mismatches: usize,
    pub max_residual: f64,
    /// Max residual between the direct expansion and the composed
    /// operations route.
    pub ops_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub trials: usize,
    pub seed: u64,
    pub b_positive_failures: usize,
    pub e_positive_failures: usize,
    pub left_norm_failures: usize,
    pub right_norm_failures: usize,
    pub l1_bound_failures: usize,
    /// Min eigenvalue seen across all positivity checks.
    pub worst_eigenvalue: f64,
    /// Gram matrices of random standard families stayed positive.
    pub gram_families_ok: bool,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.b_positive_failures == 0
            && self.e_positive_failures == 0
            && self.left_norm_failures == 0
            && self.right_norm_failures == 0
            && self.l1_bound_failures == 0
            && self.gram_families_ok
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FullnessReport {
    pub b_span_dim: usize,
    pub b_model_dim: usize,
    pub e_span_dim: usize,
    pub e_span_pushed_dim: usize,
    pub e_model_dim: usize,
    pub sigma_bijective: bool,
    pub b_full: bool,
    pub e_full: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceReport {
    pub x_rank: usize,
    pub x_dim: usize,
    pub b_rank: usize,
    pub b_dim: usize,
    pub e_rank: usize,
    pub e_dim: usize,
    pub all_independent: bool,
}

/// The aggregated verdict for one instance.
#[derive(Debug, Clone, Serialize)]
pub struct MoritaVerdict {
    pub fixture: String,
    pub identities_ok: bool,
    pub support_equality_ok: bool,
    pub positivity_ok: bool,
    pub norms_ok: bool,
    pub fullness_ok: bool,
    pub sigma_bijective: bool,
    pub independence_ok: bool,
    pub blocks_b: BlockReport,
    pub blocks_e: BlockReport,
    pub morita_equivalent: bool,
    pub identity_report: IdentityReport,
    pub support_report: SupportEqualityReport,
    pub positivity_report: PositivityReport,
    pub fullness_report: FullnessReport,
    pub independence_report: IndependenceReport,
}

impl MoritaVerdict {
    pub fn passed(&self) -> bool {
        self.identities_ok
            && self.support_equality_ok
            && self.positivity_ok
            && self.norms_ok
            && self.fullness_ok
            && self.sigma_bijective
            && self.independence_ok
            && self.morita_equivalent
    }
}

/// Everything needed to evaluate the module structure of one instance.
pub struct BimoduleContext<'a, T: Real> {
    pub proj: &'a Projections<'a>,
    pub cs: CosetStructure,
    pub calc_a: ActionCalculus<'a, T>,
    coeff_dim: usize,

    // Module carrier: one block per coset-space element.
    pub x_bases: Vec<CMat<T>>,
    pub x_range: Vec<CMat<T>>,
    pub x_act: Vec<CMat<T>>,
    pub x_star_act: Vec<CMat<T>>,
    pub x_offsets: Vec<usize>,
    pub x_dim: usize,

    // Right-side algebra over the groupoid.
    pub b0: CrossedProduct<T>,
    pub b_model: CStarModel<T>,

    // Left-side coefficients and algebra.
    pub calc_c: ActionCalculus<'a, T>,
    pub c_model: CStarModel<T>,
    pub e0: CrossedProduct<T>,
    pub e_model: CStarModel<T>,
    /// Action of each left-index element on coefficient coordinates of `A`.
    pub se_a_mats: Vec<CMat<T>>,
    pub se_a_star_mats: Vec<CMat<T>>,
    /// Class carried by each left-basis column.
    pub e_basis_class: Vec<usize>,

    // The inner-product target subalgebra and its reduced quotient.
    pub calc_k: ActionCalculus<'a, T>,
    pub k_cp: CrossedProduct<T>,
    pub k_quot: SiebenQuotient<T>,
    /// Per class: orthonormal basis of the coefficient image at its
    /// representative, in `A` coordinates.
    pub k_class_bases: Vec<CMat<T>>,

    // Pairing tables.
    /// `(gh_i)* gh_j` in the groupoid, when the pairing survives.
    pair_b: Vec<Vec<Option<usize>>>,
    /// `gh_i (gh_j)*` expanded over the left index set, when nonzero.
    pair_e: Vec<Vec<Option<EPairing<T>>>>,
    /// Left-index element times coset element, located in the coset space.
    left_mul: Vec<Vec<Option<usize>>>,
}

/// One mixed pairing target: the action matrix of the projected product on
/// the coefficient algebra, and its expansion over plain index slots.
#[derive(Debug, Clone)]
struct EPairing<T: Real> {
    a_mat: CMat<T>,
    /// `(slot, weight)` pairs from Mobius inversion on the idempotents.
    expansion: Vec<(usize, T)>,
}

impl<'a, T: Real> BimoduleContext<'a, T> {
    pub fn build(
        proj: &'a Projections<'a>,
        hsub: &SubInverseSemigroup,
        ga: &GAlgebra<T>,
        tol: T,
    ) -> Result<Self, BimoduleError> {
        let s = proj.semigroup();
        let cs = CosetStructure::build(proj, hsub)?;
        let calc_a = ActionCalculus::new(proj, ga.clone());
        let da = ga.alg.dim();

        // Module carrier blocks.
        let gh = cs.space.elements.clone();
        let x_range: Vec<CMat<T>> = gh.iter().map(|x| calc_a.range_matrix(x)).collect();
        let x_bases: Vec<CMat<T>> = x_range
            .iter()
            .map(|m| linalg::column_space(m, tol))
            .collect();
        let x_act: Vec<CMat<T>> = gh.iter().map(|x| calc_a.ge_matrix(x)).collect();
        let x_star_act: Vec<CMat<T>> = gh
            .iter()
            .map(|x| calc_a.ge_matrix(&proj.ge_star(x)))
            .collect();
        let mut x_offsets = Vec::with_capacity(gh.len());
        let mut x_dim = 0usize;
        for b in &x_bases {
            x_offsets.push(x_dim);
            x_dim += b.ncols();
        }

        // Right side.
        let b0 = calc_a.build_acp(cs.groupoid.elements.clone(), tol)?;
        let b_model = CStarModel::certify(b0.algebra.clone(), T::from_config(1e-9))?;

        // Left-side coefficients: A tensor functions on the classes.
        let ncl = cs.space.n_classes();
        let dc = da * ncl;
        let c_alg = FdStarAlgebra::from_dense(
            dc,
            |i, j| {
                let (ri, ai) = (i / da, i % da);
                let (rj, aj) = (j / da, j % da);
                let mut out = CVec::<T>::zeros(dc);
                if ri == rj {
                    let prod = ga
                        .alg
                        .mul_vec(&basis_vec::<T>(da, ai), &basis_vec::<T>(da, aj));
                    for k in 0..da {
                        out[ri * da + k] = prod[k];
                    }
                }
                out
            },
            {
                let mut j = linalg::zeros::<T>(dc, dc);
                for r in 0..ncl {
                    for a in 0..da {
                        for b in 0..da {
                            j[(r * da + a, r * da + b)] = ga.alg.invol_matrix()[(a, b)];
                        }
                    }
                }
                j
            },
            tol,
        )?;
        let c_action: Vec<CMat<T>> = (0..s.size())
            .map(|g| {
                let mut m = linalg::zeros::<T>(dc, dc);
                for r in 0..ncl {
                    if let Some(r2) = cs.space.act(g, r) {
                        for a in 0..da {
                            for b in 0..da {
                                m[(r2 * da + a, r * da + b)] = ga.action[g][(a, b)];
                            }
                        }
                    }
                }
                m
            })
            .collect();
        let c_ga = GAlgebra::validate(s, c_alg, c_action, tol)?;
        let c_model = CStarModel::certify(c_ga.alg.clone(), T::from_config(1e-9))?;
        let calc_c = ActionCalculus::new(proj, c_ga.clone());

        // Left index set: the plain full-support elements. They are closed
        // under product and involution, and their standard elements are
        // linearly independent, so projected values are expanded over them
        // by Mobius inversion instead of being indexed directly.
        let seeds: Vec<GeElement> = (0..s.size()).map(|g| proj.ge_of(g)).collect();
        let se_index = ge_closure(proj, seeds);
        let mobius = proj.mobius();
        let e0 = calc_c.build_acp(se_index.clone(), tol)?;
        let e_model = CStarModel::certify(e0.algebra.clone(), T::from_config(1e-9))?;
        let se_a_mats: Vec<CMat<T>> = e0.index.iter().map(|x| calc_a.ge_matrix(x)).collect();
        let se_a_star_mats: Vec<CMat<T>> = e0
            .index
            .iter()
            .map(|x| calc_a.ge_matrix(&proj.ge_star(x)))
            .collect();

        // Class label of each left-basis column.
        let mut e_basis_class = vec![usize::MAX; e0.dim];
        for w in 0..e0.index.len() {
            for ci in 0..e0.coeff_basis[w].ncols() {
                let col = e0.coeff_basis[w].column(ci);
                let mut class = None;
                for r in 0..ncl {
                    let weight: T = (0..da)
                        .map(|a| linalg::cabs(&col[r * da + a]))
                        .fold(T::zero(), |acc, v| acc + v);
                    if weight > tol && class.replace(r).is_some() {
                        return Err(BimoduleError::Model(
                            "left-basis column mixes classes".into(),
                        ));
                    }
                }
                e_basis_class[e0.offsets[w] + ci] = class.ok_or_else(|| {
                    BimoduleError::Model("left-basis column has empty support".into())
                })?;
            }
        }

        // Inner-product target subalgebra: sections supported at each class
        // by the image of the representative's range projection.
        let k_class_bases: Vec<CMat<T>> = (0..ncl)
            .map(|r| {
                let rep = &cs.space.elements[cs.space.reps[r]];
                let p = calc_a.support_matrix(&proj.conj(rep.g, &rep.support));
                linalg::column_space(&p, tol)
            })
            .collect();
        let dk: usize = k_class_bases.iter().map(|b| b.ncols()).sum();
        let mut kb = linalg::zeros::<T>(dc, dk);
        {
            let mut col = 0usize;
            for (r, basis) in k_class_bases.iter().enumerate() {
                for i in 0..basis.ncols() {
                    for a in 0..da {
                        kb[(r * da + a, col)] = basis[(a, i)];
                    }
                    col += 1;
                }
            }
        }
        // Ideal and invariance checks for the subalgebra.
        let kproj = kb.adjoint();
        for j in 0..dk {
            let kv = kb.column(j).into_owned();
            for i in 0..dc {
                let cv = basis_vec::<T>(dc, i);
                for prod in [c_ga.alg.mul_vec(&cv, &kv), c_ga.alg.mul_vec(&kv, &cv)] {
                    let res = &prod - &kb * (&kproj * &prod);
                    if linalg::max_abs_vec(&res) > T::from_config(1e-8) {
                        return Err(BimoduleError::Model(
                            "section subalgebra is not an ideal".into(),
                        ));
                    }
                }
            }
            for g in 0..s.size() {
                let moved = &c_ga.action[g] * &kv;
                let res = &moved - &kb * (&kproj * &moved);
                if linalg::max_abs_vec(&res) > T::from_config(1e-8) {
                    return Err(BimoduleError::Model(
                        "section subalgebra is not invariant".into(),
                    ));
                }
            }
        }
        let k_alg = FdStarAlgebra::from_dense(
            dk,
            |i, j| {
                &kproj
                    * c_ga
                        .alg
                        .mul_vec(&kb.column(i).into_owned(), &kb.column(j).into_owned())
            },
            &kproj * c_ga.alg.invol_matrix() * kb.map(|c| c.conj()),
            tol,
        )?;
        let k_action: Vec<CMat<T>> = (0..s.size())
            .map(|g| &kproj * &c_ga.action[g] * &kb)
            .collect();
        let k_ga = GAlgebra::validate(s, k_alg, k_action, T::from_config(1e-8))?;
        let calc_k = ActionCalculus::new(proj, k_ga);
        let k_cp = calc_k.build_acp(se_index, tol)?;
        let k_quot = calc_k.sieben_quotient(&k_cp, tol)?;

        // Pairing tables.
        let ngh = gh.len();
        let mut pair_b = vec![vec![None; ngh]; ngh];
        let mut pair_e: Vec<Vec<Option<EPairing<T>>>> = vec![vec![None; ngh]; ngh];
        for i in 0..ngh {
            let gi_star = proj.ge_star(&gh[i]);
            for j in 0..ngh {
                if let GeValue::Elem(z) = proj.ge_mul(&gi_star, &gh[j]) {
                    pair_b[i][j] = cs.groupoid.locate(proj, &z);
                }
                let hj_star = proj.ge_star(&gh[j]);
                if let GeValue::Elem(z) = proj.ge_mul(&gh[i], &hj_star) {
                    let expansion = proj
                        .plain_expansion(&mobius, &z)
                        .into_iter()
                        .map(|(g, w)| {
                            let slot = e0.locate(proj, &proj.ge_of(g)).ok_or_else(|| {
                                BimoduleError::Model(
                                    "plain expansion escaped the left index set".into(),
                                )
                            })?;
                            Ok((slot, T::from_config(w as f64)))
                        })
                        .collect::<Result<Vec<_>, BimoduleError>>()?;
                    pair_e[i][j] = Some(EPairing {
                        a_mat: calc_a.ge_matrix(&z),
                        expansion,
                    });
                }
            }
        }
        let mut left_mul = vec![vec![None; ngh]; e0.index.len()];
        for (w, se) in e0.index.iter().enumerate() {
            for (j, ghj) in gh.iter().enumerate() {
                if let GeValue::Elem(z) = proj.ge_mul(se, ghj) {
                    left_mul[w][j] = cs.space.locate(proj, &z);
                }
            }
        }

        Ok(Self {
            proj,
            cs,
            calc_a,
            coeff_dim: da,
            x_bases,
            x_range,
            x_act,
            x_star_act,
            x_offsets,
            x_dim,
            b0,
            b_model,
            calc_c,
            c_model,
            e0,
            e_model,
            se_a_mats,
            se_a_star_mats,
            e_basis_class,
            calc_k,
            k_cp,
            k_quot,
            k_class_bases,
            pair_b,
            pair_e,
            left_mul,
        })
    }

    fn x_accumulate(&self, out: &mut CVec<T>, slot: usize, coeff: &CVec<T>) {
        let coords = self.x_bases[slot].adjoint() * (&self.x_range[slot] * coeff);
        for i in 0..coords.len() {
            out[self.x_offsets[slot] + i] += coords[i];
        }
    }

    /// Module vector with one standard term `coeff x slot`.
    pub fn x_vector(&self, slot: usize, coeff: &CVec<T>) -> CVec<T> {
        let mut out = CVec::<T>::zeros(self.x_dim);
        self.x_accumulate(&mut out, slot, coeff);
        out
    }

    /// Right module action `(a x g)(c x t) = a g(c) x g t`.
    pub fn right_action(&self, x: &CVec<T>, b: &CVec<T>) -> CVec<T> {
        let mut out = CVec::<T>::zeros(self.x_dim);
        for i in 0..self.cs.space.len() {
            for ci in 0..self.x_bases[i].ncols() {
                let xc = x[self.x_offsets[i] + ci];
                if linalg::cabs(&xc) == T::zero() {
                    continue;
                }
                let a = self.x_bases[i].column(ci).into_owned();
                for j in 0..self.cs.groupoid.len() {
                    let Some(k) = self.cs.space.mul_h[i][j] else {
                        continue;
                    };
                    for cj in 0..self.b0.coeff_basis[j].ncols() {
                        let bc = b[self.b0.offsets[j] + cj];
                        if linalg::cabs(&bc) == T::zero() {
                            continue;
                        }
                        let c = self.b0.coeff_basis[j].column(cj).into_owned();
                        let coeff =
                            self.calc_a.ga.alg.mul_vec(&a, &(&self.x_act[i] * &c)) * (xc * bc);
                        self.x_accumulate(&mut out, k, &coeff);
                    }
                }
            }
        }
        out
    }

    /// Right inner product `<a x g, b x h> = [g* h in H] g*(a* b) x g* h`,
    /// conjugate-linear in the first slot.
    pub fn inner_b(&self, x: &CVec<T>, y: &CVec<T>) -> CVec<T> {
        let alg = &self.calc_a.ga.alg;
        let mut out = CVec::<T>::zeros(self.b0.dim);
        for i in 0..self.cs.space.len() {
            for ci in 0..self.x_bases[i].ncols() {
                let xc = x[self.x_offsets[i] + ci].conj();
                if linalg::cabs(&xc) == T::zero() {
                    continue;
                }
                let a_star = alg.star_vec(&self.x_bases[i].column(ci).into_owned());
                for j in 0..self.cs.space.len() {
                    let Some(t) = self.pair_b[i][j] else {
                        continue;
                    };
                    for cj in 0..self.x_bases[j].ncols() {
                        let yc = y[self.x_offsets[j] + cj];
                        if linalg::cabs(&yc) == T::zero() {
                            continue;
                        }
                        let b = self.x_bases[j].column(cj).into_owned();
                        let coeff = &self.x_star_act[i] * alg.mul_vec(&a_star, &b) * (xc * yc);
                        self.b0.accumulate(&mut out, t, &coeff);
                    }
                }
            }
        }
        out
    }

    fn inner_e_impl(&self, x: &CVec<T>, y: &CVec<T>, into_k: bool) -> CVec<T> {
        let alg = &self.calc_a.ga.alg;
        let da = self.coeff_dim;
        let target = if into_k { &self.k_cp } else { &self.e0 };
        let mut out = CVec::<T>::zeros(target.dim);
        for i in 0..self.cs.space.len() {
            let r = self.cs.space.class_of[i];
            for ci in 0..self.x_bases[i].ncols() {
                let xc = x[self.x_offsets[i] + ci];
                if linalg::cabs(&xc) == T::zero() {
                    continue;
                }
                let a = self.x_bases[i].column(ci).into_owned();
                for j in 0..self.cs.space.len() {
                    let Some(pairing) = &self.pair_e[i][j] else {
                        continue;
                    };
                    for cj in 0..self.x_bases[j].ncols() {
                        let yc = y[self.x_offsets[j] + cj].conj();
                        if linalg::cabs(&yc) == T::zero() {
                            continue;
                        }
                        let b_star = alg.star_vec(&self.x_bases[j].column(cj).into_owned());
                        let part = alg.mul_vec(&a, &(&pairing.a_mat * b_star)) * (xc * yc);
                        let coeff = if into_k {
                            let local = self.k_class_bases[r].adjoint() * &part;
                            let dk: usize =
                                self.k_class_bases.iter().map(|b| b.ncols()).sum();
                            let mut coeff = CVec::<T>::zeros(dk);
                            let offset: usize = self.k_class_bases[..r]
                                .iter()
                                .map(|b| b.ncols())
                                .sum();
                            for l in 0..local.len() {
                                coeff[offset + l] = local[l];
                            }
                            coeff
                        } else {
                            let mut coeff =
                                CVec::<T>::zeros(da * self.cs.space.n_classes());
                            for l in 0..da {
                                coeff[r * da + l] = part[l];
                            }
                            coeff
                        };
                        for &(slot, weight) in &pairing.expansion {
                            target.accumulate(
                                &mut out,
                                slot,
                                &(&coeff * linalg::cx::<T>(weight.to_f64(), 0.0)),
                            );
                        }
                    }
                }
            }
        }
        out
    }

    /// Left inner product `<a x g, b x h> = a gh*(b*) (x) g x g h*`,
    /// conjugate-linear in the second slot; lands in the big left algebra.
    pub fn inner_e(&self, x: &CVec<T>, y: &CVec<T>) -> CVec<T> {
        self.inner_e_impl(x, y, false)
    }

    /// The same pairing expressed in the section-subalgebra crossed
    /// product, the domain of the comparison map.
    pub fn inner_e_k(&self, x: &CVec<T>, y: &CVec<T>) -> CVec<T> {
        self.inner_e_impl(x, y, true)
    }

    /// Left module action
    /// `(a (x) r x s)(b x j) = [s j in G_H] [r = class(s j)] a s(b) x s j`.
    pub fn left_action(&self, f: &CVec<T>, x: &CVec<T>) -> CVec<T> {
        let alg = &self.calc_a.ga.alg;
        let da = self.coeff_dim;
        let mut out = CVec::<T>::zeros(self.x_dim);
        for w in 0..self.e0.index.len() {
            for ci in 0..self.e0.coeff_basis[w].ncols() {
                let fc = f[self.e0.offsets[w] + ci];
                if linalg::cabs(&fc) == T::zero() {
                    continue;
                }
                let col = self.e0.coeff_basis[w].column(ci);
                let r = self.e_basis_class[self.e0.offsets[w] + ci];
                let mut a_part = CVec::<T>::zeros(da);
                for l in 0..da {
                    a_part[l] = col[r * da + l];
                }
                for j in 0..self.cs.space.len() {
                    let Some(k) = self.left_mul[w][j] else {
                        continue;
                    };
                    if self.cs.space.class_of[k] != r {
                        continue;
                    }
                    for cj in 0..self.x_bases[j].ncols() {
                        let xc = x[self.x_offsets[j] + cj];
                        if linalg::cabs(&xc) == T::zero() {
                            continue;
                        }
                        let b = self.x_bases[j].column(cj).into_owned();
                        let coeff =
                            alg.mul_vec(&a_part, &(&self.se_a_mats[w] * &b)) * (fc * xc);
                        self.x_accumulate(&mut out, k, &coeff);
                    }
                }
            }
        }
        out
    }

    fn random_vec(rng: &mut ChaCha12Rng, dim: usize) -> CVec<T> {
        CVec::<T>::from_iterator(
            dim,
            (0..dim)
                .map(|_| linalg::cx::<T>(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
        )
    }

    /// Runs the seven module identities on seeded random inputs.
    pub fn check_identities(&self, seed: u64, trials: usize) -> IdentityReport {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut residuals = vec![0.0f64; 7];
        let balg = &self.b0.algebra;
        let ealg = &self.e0.algebra;
        for _ in 0..trials {
            let x = Self::random_vec(&mut rng, self.x_dim);
            let y = Self::random_vec(&mut rng, self.x_dim);
            let z = Self::random_vec(&mut rng, self.x_dim);
            let b = Self::random_vec(&mut rng, self.b0.dim);
            let f = Self::random_vec(&mut rng, self.e0.dim);

            let r = [
                linalg::max_abs_vec(
                    &(self.inner_b(&x, &self.right_action(&y, &b))
                        - balg.mul_vec(&self.inner_b(&x, &y), &b)),
                ),
                linalg::max_abs_vec(
                    &(balg.star_vec(&self.inner_b(&x, &y)) - self.inner_b(&y, &x)),
                ),
                linalg::max_abs_vec(
                    &(self.inner_e(&self.left_action(&f, &x), &y)
                        - ealg.mul_vec(&f, &self.inner_e(&x, &y))),
                ),
                linalg::max_abs_vec(
                    &(ealg.star_vec(&self.inner_e(&x, &y)) - self.inner_e(&y, &x)),
                ),
                linalg::max_abs_vec(
                    &(self.inner_b(&self.left_action(&f, &x), &y)
                        - self.inner_b(&x, &self.left_action(&ealg.star_vec(&f), &y))),
                ),
                linalg::max_abs_vec(
                    &(self.inner_e(&x, &self.right_action(&y, &b))
                        - self.inner_e(&self.right_action(&x, &balg.star_vec(&b)), &y)),
                ),
                linalg::max_abs_vec(
                    &(self.right_action(&x, &self.inner_b(&y, &z))
                        - self.left_action(&self.inner_e(&x, &y), &z)),
                ),
            ];
            for (acc, v) in residuals.iter_mut().zip(r) {
                *acc = acc.max(v.to_f64());
            }
        }
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        IdentityReport {
            trials,
            seed,
            residuals,
            max_residual,
        }
    }

    /// Action of a projected element on a class, when it stays inside.
    fn ge_act_class(&self, w: &GeElement, class: usize) -> Option<usize> {
        let rep = &self.cs.space.elements[self.cs.space.reps[class]];
        match self.proj.ge_mul(w, rep) {
            GeValue::Zero => None,
            GeValue::Elem(z) => self
                .cs
                .space
                .locate(self.proj, &z)
                .map(|k| self.cs.space.class_of[k]),
        }
    }

    /// Directly expands the mixed pairing of a standard triple both ways
    /// and compares supports and values, exhaustively over basis triples;
    /// also compares the first expansion against the composed operations.
    pub fn support_equality(&self) -> SupportEqualityReport {
        let alg = &self.calc_a.ga.alg;
        let proj = self.proj;
        let da = self.coeff_dim;
        let mut triples = 0usize;
        let mut mismatches = 0usize;
        let mut max_residual = 0.0f64;
        let mut ops_residual = 0.0f64;
        for w in 0..self.e0.index.len() {
            let s_star = proj.ge_star(&self.e0.index[w]);
            for ci in 0..self.e0.coeff_basis[w].ncols() {
                let col = self.e0.coeff_basis[w].column(ci);
                let r = self.e_basis_class[self.e0.offsets[w] + ci];
                let mut a_part = CVec::<T>::zeros(da);
                for l in 0..da {
                    a_part[l] = col[r * da + l];
                }
                let mut f_vec = CVec::<T>::zeros(self.e0.dim);
                f_vec[self.e0.offsets[w] + ci] = linalg::cx(1.0, 0.0);
                for i in 0..self.cs.space.len() {
                    for bi in 0..self.x_bases[i].ncols() {
                        let bvec = self.x_bases[i].column(bi).into_owned();
                        let mut x_vec = CVec::<T>::zeros(self.x_dim);
                        x_vec[self.x_offsets[i] + bi] = linalg::cx(1.0, 0.0);
                        for j in 0..self.cs.space.len() {
                            for cj in 0..self.x_bases[j].ncols() {
                                let cvec = self.x_bases[j].column(cj).into_owned();
                                triples += 1;

                                // First expansion: act, then pair.
                                let mut b_first = CVec::<T>::zeros(self.b0.dim);
                                if let Some(k) = self.left_mul[w][i] {
                                    if self.cs.space.class_of[k] == r {
                                        if let Some(t) = self.pair_b[k][j] {
                                            let inner = alg.mul_vec(
                                                &alg.mul_vec(
                                                    &alg.star_vec(
                                                        &(&self.se_a_mats[w] * &bvec),
                                                    ),
                                                    &alg.star_vec(&a_part),
                                                ),
                                                &cvec,
                                            );
                                            let coeff = &self.x_star_act[k] * inner;
                                            self.b0.accumulate(&mut b_first, t, &coeff);
                                        }
                                    }
                                }

                                // Second expansion: pair against the starred
                                // left element.
                                let mut b_second = CVec::<T>::zeros(self.b0.dim);
                                if let GeValue::Elem(shv) =
                                    proj.ge_mul(&s_star, &self.cs.space.elements[j])
                                {
                                    if let Some(k2) = self.cs.space.locate(proj, &shv) {
                                        let sr_class = self.ge_act_class(&s_star, r);
                                        if sr_class == Some(self.cs.space.class_of[k2]) {
                                            if let Some(t) = self.pair_b[i][k2] {
                                                let m_star = &self.se_a_star_mats[w];
                                                let inner = alg.mul_vec(
                                                    &alg.mul_vec(
                                                        &alg.star_vec(&bvec),
                                                        &(m_star * alg.star_vec(&a_part)),
                                                    ),
                                                    &(m_star * &cvec),
                                                );
                                                let coeff = &self.x_star_act[i] * inner;
                                                self.b0.accumulate(&mut b_second, t, &coeff);
                                            }
                                        }
                                    }
                                }

                                let fz = linalg::max_abs_vec(&b_first) > T::from_config(1e-9);
                                let sz = linalg::max_abs_vec(&b_second) > T::from_config(1e-9);
                                if fz != sz {
                                    mismatches += 1;
                                }
                                max_residual = max_residual.max(
                                    linalg::max_abs_vec(&(b_first.clone() - &b_second)).to_f64(),
                                );

                                // Composed-operations route.
                                let mut y_vec = CVec::<T>::zeros(self.x_dim);
                                y_vec[self.x_offsets[j] + cj] = linalg::cx(1.0, 0.0);
                                let via_ops =
                                    self.inner_b(&self.left_action(&f_vec, &x_vec), &y_vec);
                                ops_residual = ops_residual.max(
                                    linalg::max_abs_vec(&(via_ops - &b_first)).to_f64(),
                                );
                            }
                        }
                    }
                }
            }
        }
        SupportEqualityReport {
            triples,
            support_mismatches: mismatches,
            max_residual,
            ops_residual,
        }
    }

    /// Positivity of both inner squares, the two norm inequalities and the
    /// summed-coefficient bound, over seeded random trials.
    pub fn positivity_and_norms(&self, seed: u64, trials: usize, tol: T) -> PositivityReport {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut report = PositivityReport {
            trials,
            seed,
            b_positive_failures: 0,
            e_positive_failures: 0,
            left_norm_failures: 0,
            right_norm_failures: 0,
            l1_bound_failures: 0,
            worst_eigenvalue: f64::INFINITY,
            gram_families_ok: true,
        };
        for _ in 0..trials {
            let x = Self::random_vec(&mut rng, self.x_dim);
            let f = Self::random_vec(&mut rng, self.e0.dim);
            let b = Self::random_vec(&mut rng, self.b0.dim);

            let xxb = self.inner_b(&x, &x);
            match self.b_model.min_eig(&xxb, tol) {
                Ok(m) => {
                    report.worst_eigenvalue = report.worst_eigenvalue.min(m.to_f64());
                    if m < -tol {
                        report.b_positive_failures += 1;
                    }
                }
                Err(_) => report.b_positive_failures += 1,
            }
            let xxe = self.inner_e(&x, &x);
            match self.e_model.min_eig(&xxe, tol) {
                Ok(m) => {
                    report.worst_eigenvalue = report.worst_eigenvalue.min(m.to_f64());
                    if m < -tol {
                        report.e_positive_failures += 1;
                    }
                }
                Err(_) => report.e_positive_failures += 1,
            }

            let nf = self.e_model.op_norm(&f);
            let fx = self.left_action(&f, &x);
            let lhs =
                &xxb * linalg::cx::<T>((nf * nf).to_f64(), 0.0) - self.inner_b(&fx, &fx);
            match self.b_model.min_eig(&lhs, T::from_config(1e-6)) {
                Ok(m) => {
                    report.worst_eigenvalue = report.worst_eigenvalue.min(m.to_f64());
                    if m < -tol {
                        report.left_norm_failures += 1;
                    }
                }
                Err(_) => report.left_norm_failures += 1,
            }

            let nb = self.b_model.op_norm(&b);
            let xb = self.right_action(&x, &b);
            let rhs =
                &xxe * linalg::cx::<T>((nb * nb).to_f64(), 0.0) - self.inner_e(&xb, &xb);
            match self.e_model.min_eig(&rhs, T::from_config(1e-6)) {
                Ok(m) => {
                    report.worst_eigenvalue = report.worst_eigenvalue.min(m.to_f64());
                    if m < -tol {
                        report.right_norm_failures += 1;
                    }
                }
                Err(_) => report.right_norm_failures += 1,
            }

            let mut l1 = T::zero();
            for w in 0..self.e0.index.len() {
                let coeff = self.e0.coeff_at(&f, w);
                l1 += self.c_model.op_norm(&coeff);
            }
            if nf > l1 + tol {
                report.l1_bound_failures += 1;
            }
        }

        // Gram matrices of random module families, flattened through the
        // faithful representation: an independent route to positivity.
        let rep_dim = self.b_model.dim();
        if rep_dim > 0 {
            for _ in 0..3 {
                let family: Vec<CVec<T>> = (0..3)
                    .map(|_| Self::random_vec(&mut rng, self.x_dim))
                    .collect();
                let n = family.len();
                let mut gram = linalg::zeros::<T>(n * rep_dim, n * rep_dim);
                for (i, xi) in family.iter().enumerate() {
                    for (j, xj) in family.iter().enumerate() {
                        let block = self.b_model.rep(&self.inner_b(xi, xj));
                        for r in 0..rep_dim {
                            for c in 0..rep_dim {
                                gram[(i * rep_dim + r, j * rep_dim + c)] = block[(r, c)];
                            }
                        }
                    }
                }
                let m = linalg::min_eigenvalue(&gram);
                report.worst_eigenvalue = report.worst_eigenvalue.min(m.to_f64());
                if m < -tol {
                    report.gram_families_ok = false;
                }
            }
        }
        report
    }

    /// Span dimensions of both inner products and the rank of the
    /// comparison map into the reduced section crossed product.
    pub fn sigma_and_fullness(&self) -> FullnessReport {
        let mut span_b = linalg::SpanBasis::new(self.b0.dim, T::from_config(1e-8));
        let mut span_e = linalg::SpanBasis::new(self.k_cp.dim, T::from_config(1e-8));
        let mut span_pushed =
            linalg::SpanBasis::new(self.k_quot.algebra.dim(), T::from_config(1e-8));
        for i in 0..self.x_dim {
            let xi = basis_vec::<T>(self.x_dim, i);
            for j in 0..self.x_dim {
                let xj = basis_vec::<T>(self.x_dim, j);
                span_b.try_add(&self.inner_b(&xi, &xj));
                let ek = self.inner_e_k(&xi, &xj);
                span_e.try_add(&ek);
                span_pushed.try_add(&(&self.k_quot.projection * &ek));
            }
        }
        let b_span_dim = span_b.len();
        let e_span_dim = span_e.len();
        let e_span_pushed_dim = span_pushed.len();
        let e_model_dim = self.k_quot.algebra.dim();
        FullnessReport {
            b_span_dim,
            b_model_dim: self.b0.dim,
            e_span_dim,
            e_span_pushed_dim,
            e_model_dim,
            sigma_bijective: e_span_dim == e_span_pushed_dim
                && e_span_pushed_dim == e_model_dim,
            b_full: b_span_dim == self.b0.dim,
            e_full: e_span_pushed_dim == e_model_dim,
        }
    }

    /// Independence certificates for the module and both algebra bases.
    pub fn independence(&self, tol: T) -> IndependenceReport {
        let x_items: Vec<(GeElement, CMat<T>)> = self
            .cs
            .space
            .elements
            .iter()
            .cloned()
            .zip(self.x_bases.iter().cloned())
            .collect();
        let (x_rank, x_ok) = crate::crossed::standard_family_rank(&self.calc_a, &x_items, tol);
        let (b_rank, b_ok) = self.calc_a.independence_rank(&self.b0, tol);
        let (e_rank, e_ok) = self.calc_c.independence_rank(&self.e0, tol);
        IndependenceReport {
            x_rank,
            x_dim: self.x_dim,
            b_rank,
            b_dim: self.b0.dim,
            e_rank,
            e_dim: self.e0.dim,
            all_independent: x_ok && b_ok && e_ok,
        }
    }

    /// The full verdict for this instance.
    pub fn verdict(
        &self,
        fixture: &str,
        seed: u64,
        trials: usize,
    ) -> Result<MoritaVerdict, BimoduleError> {
        let identity_report = self.check_identities(seed, trials);
        let support_report = self.support_equality();
        let positivity_report = self.positivity_and_norms(seed, trials, T::from_config(1e-8));
        let fullness_report = self.sigma_and_fullness();
        let independence_report = self.independence(T::from_config(1e-8));
        let blocks_b = self.b0.algebra.blocks(seed, T::from_config(1e-9), 5)?;
        let blocks_e = self.k_quot.algebra.blocks(seed, T::from_config(1e-9), 5)?;
        let morita_equivalent = blocks_b.block_count() == blocks_e.block_count()
            && blocks_b.radical_dim == 0
            && blocks_e.radical_dim == 0;
        Ok(MoritaVerdict {
            fixture: fixture.to_string(),
            identities_ok: identity_report.max_residual < 1e-9,
            support_equality_ok: support_report.support_mismatches == 0
                && support_report.max_residual < 1e-9
                && support_report.ops_residual < 1e-9,
            positivity_ok: positivity_report.b_positive_failures == 0
                && positivity_report.e_positive_failures == 0
                && positivity_report.gram_families_ok,
            norms_ok: positivity_report.left_norm_failures == 0
                && positivity_report.right_norm_failures == 0
                && positivity_report.l1_bound_failures == 0,
            fullness_ok: fullness_report.b_full && fullness_report.e_full,
            sigma_bijective: fullness_report.sigma_bijective,
            independence_ok: independence_report.all_independent,
            blocks_b,
            blocks_e,
            morita_equivalent,
            identity_report,
            support_report,
            positivity_report,
            fullness_report,
            independence_report,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::projection::Projections;

    const TOL: f64 = 1e-10;

    fn context_for<'a>(
        proj: &'a Projections<'a>,
        fixture: &fixtures::Fixture,
    ) -> BimoduleContext<'a, f64> {
        let hsub = fixture.hsub();
        let ga = fixture.algebra::<f64>();
        BimoduleContext::build(proj, &hsub, &ga, TOL).unwrap()
    }

    #[test]
    fn fix2_module_has_dimension_four_each_side() {
        let fixture = fixtures::fix2();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        assert_eq!(ctx.x_dim, 4);
        assert_eq!(ctx.b0.dim, 4);
        // Plain slots: only the two full-domain elements carry coefficients
        // (every rank-one translate acts as zero on the one-class function
        // algebra), giving 2 + 2.
        assert_eq!(ctx.e0.dim, 4);
        assert_eq!(ctx.k_quot.algebra.dim(), 4);
    }

    #[test]
    fn fix1_module_dimensions() {
        let fixture = fixtures::fix1();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        assert_eq!(ctx.x_dim, 4);
        assert_eq!(ctx.b0.dim, 2);
    }

    #[test]
    fn unit_of_left_algebra_acts_as_identity() {
        for fixture in [fixtures::fix1(), fixtures::fix2(), fixtures::fix3()] {
            let proj = Projections::new(&fixture.semigroup);
            let ctx = context_for(&proj, &fixture);
            let unit = ctx.e0.algebra.unit(1e-9).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(5);
            let x = BimoduleContext::<f64>::random_vec(&mut rng, ctx.x_dim);
            let res = linalg::max_abs_vec(&(ctx.left_action(&unit, &x) - &x));
            assert!(res < 1e-9, "unit action residual {res} on {}", fixture.name);
        }
    }

    #[test]
    fn identities_hold_on_all_fixtures() {
        for fixture in [
            fixtures::fix1(),
            fixtures::fix2(),
            fixtures::fix3(),
            fixtures::triv(),
        ] {
            let proj = Projections::new(&fixture.semigroup);
            let ctx = context_for(&proj, &fixture);
            let report = ctx.check_identities(42, 25);
            assert!(
                report.max_residual < 1e-9,
                "{}: residuals {:?}",
                fixture.name,
                report.residuals
            );
        }
    }

    #[test]
    fn zero_inputs_give_zero_residuals() {
        let fixture = fixtures::fix2();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        let x = CVec::<f64>::zeros(ctx.x_dim);
        let b = CVec::<f64>::zeros(ctx.b0.dim);
        let f = CVec::<f64>::zeros(ctx.e0.dim);
        assert_eq!(linalg::max_abs_vec(&ctx.right_action(&x, &b)), 0.0);
        assert_eq!(linalg::max_abs_vec(&ctx.left_action(&f, &x)), 0.0);
        assert_eq!(linalg::max_abs_vec(&ctx.inner_b(&x, &x)), 0.0);
        assert_eq!(linalg::max_abs_vec(&ctx.inner_e(&x, &x)), 0.0);
    }

    #[test]
    fn support_equality_exhaustive_on_fix2_and_fix1() {
        for fixture in [fixtures::fix2(), fixtures::fix1()] {
            let proj = Projections::new(&fixture.semigroup);
            let ctx = context_for(&proj, &fixture);
            let report = ctx.support_equality();
            assert!(report.triples > 0);
            assert_eq!(
                report.support_mismatches, 0,
                "{}: support sets differ",
                fixture.name
            );
            assert!(report.max_residual < 1e-9, "{}", fixture.name);
            assert!(report.ops_residual < 1e-9, "{}", fixture.name);
        }
    }

    #[test]
    fn positivity_and_norms_pass_on_fixtures() {
        for fixture in [fixtures::fix1(), fixtures::fix2()] {
            let proj = Projections::new(&fixture.semigroup);
            let ctx = context_for(&proj, &fixture);
            let report = ctx.positivity_and_norms(42, 25, 1e-8);
            assert!(report.passed(), "{}: {report:?}", fixture.name);
        }
    }

    #[test]
    fn mixed_source_right_products_vanish() {
        let fixture = fixtures::fix1();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        // A module basis slot and a groupoid slot with non-matching atoms.
        let slot = (0..ctx.cs.space.len())
            .find(|&i| ctx.x_bases[i].ncols() > 0)
            .unwrap();
        let src = ctx.cs.space.atom_of[slot];
        let foreign = (0..ctx.cs.groupoid.len())
            .find(|&j| ctx.cs.groupoid.range[j] != src && ctx.b0.coeff_basis[j].ncols() > 0);
        if let Some(j) = foreign {
            let mut x = CVec::<f64>::zeros(ctx.x_dim);
            x[ctx.x_offsets[slot]] = linalg::cx(1.0, 0.0);
            let mut b = CVec::<f64>::zeros(ctx.b0.dim);
            b[ctx.b0.offsets[j]] = linalg::cx(1.0, 0.0);
            let out = ctx.right_action(&x, &b);
            assert_eq!(linalg::max_abs_vec(&out), 0.0);
        }
    }

    #[test]
    fn fullness_and_sigma_on_fix2() {
        let fixture = fixtures::fix2();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        let report = ctx.sigma_and_fullness();
        assert_eq!(report.b_span_dim, 4);
        assert_eq!(report.b_model_dim, 4);
        assert!(report.sigma_bijective, "{report:?}");
        assert!(report.e_full);
    }

    #[test]
    fn fullness_on_fix1_matches_hand_dimensions() {
        let fixture = fixtures::fix1();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        let report = ctx.sigma_and_fullness();
        assert_eq!(report.b_span_dim, 2, "matches the right-side dimension");
        assert!(report.b_full);
        assert!(report.sigma_bijective, "{report:?}");
    }

    #[test]
    fn verdicts_on_fix1_and_fix2() {
        let fixture = fixtures::fix2();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        let verdict = ctx.verdict("FIX2", 42, 25).unwrap();
        assert!(verdict.passed(), "{verdict:?}");
        assert_eq!(verdict.blocks_b.blocks, vec![2]);
        assert_eq!(verdict.blocks_e.block_count(), 1);

        let fixture = fixtures::fix1();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        let verdict = ctx.verdict("FIX1", 42, 25).unwrap();
        assert!(verdict.passed(), "{verdict:?}");
        assert_eq!(verdict.blocks_b.blocks, vec![1, 1]);
        assert_eq!(verdict.blocks_e.block_count(), 2);
    }

    #[test]
    fn degenerate_self_fixture_passes_trivially() {
        let fixture = fixtures::triv();
        let proj = Projections::new(&fixture.semigroup);
        let ctx = context_for(&proj, &fixture);
        let verdict = ctx.verdict("TRIV", 42, 10).unwrap();
        assert!(verdict.passed(), "{verdict:?}");
        assert_eq!(verdict.blocks_b.blocks, verdict.blocks_e.blocks);
        let fullness = ctx.sigma_and_fullness();
        assert_eq!(fullness.e_span_dim, fullness.e_model_dim, "square map");
    }
}
