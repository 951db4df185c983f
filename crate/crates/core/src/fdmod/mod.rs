//! Finite-dimensional right modules given by action matrices.
//!
//! Vectors are rows and act on the right: v·b = v R_b. Module bases are
//! adapted to the vertex blocks, so every coordinate lies in some M e_u.

mod hom;
mod proj;

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgRef, BasedAlgebra};
use crate::exactla::{is_zero_vec, Echelon, Field, Mat, Scalar};

pub use hom::{find_isomorphism, hom_dim, hom_space, is_isomorphic, IsoCertificate, ModuleHom};
pub use proj::{join_components, proj_sum, split_components, PMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("zero module")]
    ZeroModule,
    #[error("action matrices violate the structure constants")]
    NotAModule,
    #[error("map does not intertwine the actions")]
    NotAHom,
}

#[derive(Clone)]
pub struct FDModule {
    alg: AlgRef,
    dim: usize,
    action: Arc<Vec<Mat>>,
    vertex_of: Arc<Vec<usize>>,
}

impl std::fmt::Debug for FDModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FDModule(dim {}, blocks {:?})", self.dim, self.vertex_dims())
    }
}

impl FDModule {
    /// Assembles a module; `vertex_of[i]` is the block of coordinate i.
    pub fn from_parts(alg: AlgRef, action: Vec<Mat>, vertex_of: Vec<usize>) -> FDModule {
        let dim = vertex_of.len();
        debug_assert_eq!(action.len(), alg.dim());
        FDModule { alg, dim, action: Arc::new(action), vertex_of: Arc::new(vertex_of) }
    }

    pub fn zero(alg: &AlgRef) -> FDModule {
        let f = alg.field();
        FDModule::from_parts(alg.clone(), (0..alg.dim()).map(|_| Mat::zeros(f, 0, 0)).collect(), Vec::new())
    }

    pub fn algebra(&self) -> &AlgRef {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn action(&self, b: usize) -> &Mat {
        &self.action[b]
    }

    pub fn actions(&self) -> &[Mat] {
        &self.action
    }

    pub fn vertex_of(&self) -> &[usize] {
        &self.vertex_of
    }

    /// dim M e_u for every block u.
    pub fn vertex_dims(&self) -> Vec<usize> {
        let mut d = vec![0; self.alg.blocks()];
        for &v in self.vertex_of.iter() {
            d[v] += 1;
        }
        d
    }

    /// Coordinates lying in M e_u.
    pub fn block(&self, u: usize) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.vertex_of[i] == u).collect()
    }

    /// v · x for an algebra element x.
    pub fn act(&self, v: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.field().zeros(self.dim);
        for (b, c) in x.iter().enumerate() {
            if !c.is_zero() {
                let w = self.action[b].vec_mul(v);
                crate::exactla::axpy(&mut out, c, &w);
            }
        }
        out
    }

    pub fn act_basis(&self, v: &[Scalar], b: usize) -> Vec<Scalar> {
        self.action[b].vec_mul(v)
    }

    /// Matrix of the action of an arbitrary algebra element.
    pub fn action_of(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(self.field(), self.dim, self.dim);
        for (b, c) in x.iter().enumerate() {
            m.axpy(c, &self.action[b]);
        }
        m
    }

    /// Checks R_{b_i} R_{b_j} = Σ c_ij^k R_{b_k} and R_1 = id.
    pub fn check(&self) -> bool {
        let a = &self.alg;
        if self.action_of(a.unit()) != Mat::identity(self.field(), self.dim) {
            return false;
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.action[i].mul(&self.action[j]);
                let mut rhs = Mat::zeros(self.field(), self.dim, self.dim);
                for (k, c) in a.product(i, j) {
                    rhs.axpy(c, &self.action[*k]);
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        // blocks must match the idempotent actions
        (0..a.blocks()).all(|u| {
            let e = self.action_of(&a.block_idempotent(u));
            (0..self.dim).all(|i| {
                (0..self.dim).all(|j| {
                    let want = i == j && self.vertex_of[i] == u;
                    e.get(i, j).is_one() == want && (want || e.get(i, j).is_zero())
                })
            })
        })
    }

    /// Submodule with the given (closed, block-adapted) subspace.
    fn from_echelon(&self, ech: &Echelon) -> (FDModule, Mat) {
        let basis = ech.basis().to_vec();
        let f = self.field();
        let k = basis.len();
        let action = (0..self.alg.dim())
            .map(|b| {
                let rows = basis
                    .iter()
                    .map(|v| ech.echelon_coordinates(&self.act_basis(v, b)).expect("subspace is not a submodule"))
                    .collect();
                Mat::from_rows(f, k, rows)
            })
            .collect();
        let vertex_of = ech.pivots().iter().map(|&p| self.vertex_of[p]).collect();
        let inc = Mat::from_rows(f, self.dim, basis);
        (FDModule::from_parts(self.alg.clone(), action, vertex_of), inc)
    }

    /// Splits vectors into their block components.
    fn block_parts(&self, v: &[Scalar]) -> Vec<Vec<Scalar>> {
        let mut parts: Vec<Vec<Scalar>> = Vec::new();
        for u in 0..self.alg.blocks() {
            let mut w = self.field().zeros(self.dim);
            let mut any = false;
            for i in 0..self.dim {
                if self.vertex_of[i] == u && !v[i].is_zero() {
                    w[i] = v[i].clone();
                    any = true;
                }
            }
            if any {
                parts.push(w);
            }
        }
        parts
    }

    /// Echelon form of the submodule generated by `gens`.
    pub fn generated_subspace(&self, gens: &[Vec<Scalar>]) -> Echelon {
        let mut ech = Echelon::new(self.field(), self.dim);
        let mut queue: Vec<Vec<Scalar>> = gens.iter().flat_map(|g| self.block_parts(g)).collect();
        let gen_idx = self.alg.generators();
        while let Some(v) = queue.pop() {
            if !ech.insert(&v) {
                continue;
            }
            for &g in &gen_idx {
                let w = self.act_basis(&v, g);
                if !is_zero_vec(&w) {
                    queue.extend(self.block_parts(&w));
                }
            }
        }
        ech
    }

    /// Submodule generated by vectors, with its inclusion matrix (rows =
    /// basis of the submodule in the coordinates of self).
    pub fn submodule(&self, gens: &[Vec<Scalar>]) -> (FDModule, Mat) {
        self.from_echelon(&self.generated_subspace(gens))
    }

    /// Quotient by a submodule given by its echelon form; returns the
    /// quotient and the projection matrix.
    pub fn quotient_by(&self, sub: &Echelon) -> (FDModule, Mat) {
        let keep = sub.non_pivots();
        let f = self.field();
        let k = keep.len();
        let coords = |v: &[Scalar]| -> Vec<Scalar> {
            let r = sub.reduce(v);
            keep.iter().map(|&i| r[i].clone()).collect()
        };
        let action = (0..self.alg.dim())
            .map(|b| {
                let rows = keep.iter().map(|&i| coords(self.action[b].row(i))).collect();
                Mat::from_rows(f, k, rows)
            })
            .collect();
        let proj_rows = (0..self.dim).map(|i| coords(&f.unit_vector(self.dim, i))).collect();
        let vertex_of = keep.iter().map(|&i| self.vertex_of[i]).collect();
        (FDModule::from_parts(self.alg.clone(), action, vertex_of), Mat::from_rows(f, k, proj_rows))
    }

    pub fn quotient(&self, gens: &[Vec<Scalar>]) -> (FDModule, Mat) {
        self.quotient_by(&self.generated_subspace(gens))
    }

    /// Kernel of a module map given by its matrix (rows = basis of self).
    pub fn kernel_of(&self, f: &Mat) -> (FDModule, Mat) {
        let kern = f.transpose().kernel_vectors();
        let ech = Echelon::from_vectors(self.field(), self.dim, &kern);
        self.from_echelon(&ech)
    }

    pub fn direct_sum(&self, other: &FDModule) -> FDModule {
        let action = self.action.iter().zip(other.action.iter()).map(|(a, b)| a.block_diag(b)).collect();
        let mut vertex_of = self.vertex_of.to_vec();
        vertex_of.extend(other.vertex_of.iter());
        FDModule::from_parts(self.alg.clone(), action, vertex_of)
    }

    pub fn direct_sum_all(alg: &AlgRef, ms: &[FDModule]) -> FDModule {
        ms.iter().fold(FDModule::zero(alg), |acc, m| acc.direct_sum(m))
    }

    /// Echelon form of M J^k.
    pub fn radical_power(&self, k: usize) -> Echelon {
        let f = self.field();
        let mut cur = Echelon::from_vectors(f, self.dim, &(0..self.dim).map(|i| f.unit_vector(self.dim, i)).collect::<Vec<_>>());
        for _ in 0..k {
            let mut next = Echelon::new(f, self.dim);
            for v in cur.basis() {
                for &r in self.alg.radical_basis() {
                    next.insert(&self.act_basis(v, r));
                }
            }
            cur = next;
            if cur.dim() == 0 {
                break;
            }
        }
        cur
    }

    fn block_dims_of(&self, e: &Echelon) -> Vec<usize> {
        let mut d = vec![0; self.alg.blocks()];
        for &p in e.pivots() {
            d[self.vertex_of[p]] += 1;
        }
        d
    }

    /// Layers M J^i / M J^{i+1} as vertex multiplicity vectors.
    pub fn radical_filtration(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = self.block_dims_of(&self.radical_power(0));
        let mut k = 0;
        while cur.iter().sum::<usize>() > 0 {
            k += 1;
            let next = self.block_dims_of(&self.radical_power(k));
            out.push(cur.iter().zip(&next).map(|(a, b)| a - b).collect());
            cur = next;
        }
        out
    }

    /// Multiplicities of the simples in the top M / MJ.
    pub fn top(&self) -> Vec<usize> {
        let all = self.block_dims_of(&self.radical_power(0));
        let rad = self.block_dims_of(&self.radical_power(1));
        all.iter().zip(&rad).map(|(a, b)| a - b).collect()
    }

    /// The projective cover is an isomorphism.
    pub fn is_projective(&self) -> bool {
        let top = self.top();
        let cover: usize = top.iter().enumerate().map(|(v, &m)| m * self.alg.left_ideal_basis(v).len()).sum();
        cover == self.dim
    }

    /// Vectors in M e_u whose classes form a basis of the top at u.
    pub fn top_lifts(&self) -> Vec<(usize, Vec<Scalar>)> {
        let f = self.field();
        let mut rad = self.radical_power(1);
        let mut out = Vec::new();
        for u in 0..self.alg.blocks() {
            for i in self.block(u) {
                let v = f.unit_vector(self.dim, i);
                if rad.insert(&v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Restriction of scalars along an algebra map given by the images of
    /// the basis of `sub` (as elements of self's algebra).
    pub fn restrict(&self, sub: &AlgRef, images: &[Vec<Scalar>], blocks: &[usize]) -> FDModule {
        let action = images.iter().map(|x| self.action_of(x)).collect();
        let vertex_of = self.vertex_of.iter().map(|&u| blocks[u]).collect();
        FDModule::from_parts(sub.clone(), action, vertex_of)
    }

    /// Rewrites the module over another copy of the same algebra.
    pub fn with_algebra(&self, alg: &AlgRef) -> FDModule {
        FDModule { alg: alg.clone(), ..self.clone() }
    }
}

/// One-dimensional simple module at block v. Without vertex idempotents
/// the algebra must be local and the module is A/J.
pub fn simple_module(a: &AlgRef, v: usize) -> FDModule {
    let f = a.field();
    let top: Vec<usize> = (0..a.dim()).filter(|&b| !a.is_radical(b)).collect();
    let action = (0..a.dim())
        .map(|b| {
            let c = if a.vertex_data().is_some() {
                if b == a.idempotent(v) { f.one() } else { f.zero() }
            } else {
                assert_eq!(top.len(), 1, "simple module of a non-local algebra without vertex data");
                // t ≡ (1/u_t)·1 modulo J
                if b == top[0] { a.unit()[b].inv().expect("unit has a top component") } else { f.zero() }
            };
            Mat::from_rows(f, 1, vec![vec![c]])
        })
        .collect();
    FDModule::from_parts(a.clone(), action, vec![v])
}

/// e_v A with the right regular action.
pub fn projective_module(a: &AlgRef, v: usize) -> FDModule {
    proj_sum(a, &[v]).0
}

/// A as a right module over itself.
pub fn regular_module(a: &AlgRef) -> FDModule {
    let vs: Vec<usize> = (0..a.num_vertices()).collect();
    proj_sum(a, &vs).0
}

/// A / AeA as a right A-module.
pub fn quotient_module(a: &AlgRef, e: &[usize]) -> FDModule {
    let reg = regular_module(a);
    let (_, offsets) = proj_sum(a, &(0..a.num_vertices()).collect::<Vec<_>>());
    let f = a.field();
    let mut gens = Vec::new();
    for &u in e {
        // e_u as an element of the regular module: component u, coordinate of e_u
        let basis = a.left_ideal_basis(u);
        let pos = basis.iter().position(|&b| b == a.idempotent(u)).unwrap();
        gens.push(f.unit_vector(reg.dim(), offsets[u] + pos));
    }
    // the right ideal generated by e is eA; the two-sided ideal is A·eA,
    // the submodule generated by all x e_u for x ∈ A
    let mut two_sided = Vec::new();
    for g in &gens {
        for x in 0..a.dim() {
            two_sided.push(left_multiply_regular(a, &reg, &offsets, x, g));
        }
    }
    reg.quotient(&two_sided).0
}

/// Left multiplication by basis element x on the regular module written as
/// ⊕_v e_v A.
pub(crate) fn left_multiply_regular(a: &BasedAlgebra, reg: &FDModule, offsets: &[usize], x: usize, v: &[Scalar]) -> Vec<Scalar> {
    let f = a.field();
    let mut elem = a.zero_vec();
    for u in 0..a.num_vertices() {
        for (k, &b) in a.left_ideal_basis(u).iter().enumerate() {
            elem[b] = v[offsets[u] + k].clone();
        }
    }
    let prod = a.mul_basis_left(x, &elem);
    let mut out = f.zeros(reg.dim());
    for u in 0..a.num_vertices() {
        for (k, &b) in a.left_ideal_basis(u).iter().enumerate() {
            out[offsets[u] + k] = prod[b].clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fixtures;

    fn alg(q: crate::algebra::QuiverPresentation) -> AlgRef {
        Arc::new(build_algebra(&q).unwrap())
    }

    #[test]
    fn simples_and_projectives() {
        let a = alg(fixtures::ladder_three());
        let s1 = simple_module(&a, 0);
        assert!(s1.check());
        assert_eq!(s1.vertex_dims(), vec![1, 0]);
        let p1 = projective_module(&a, 0);
        assert!(p1.check());
        assert_eq!(p1.radical_filtration(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(projective_module(&a, 1).radical_filtration(), vec![vec![0, 1], vec![0, 1]]);
        let jh = alg(fixtures::jordan_holder());
        assert_eq!(projective_module(&jh, 1).radical_filtration(), vec![vec![0, 1], vec![1, 0], vec![0, 1], vec![1, 0]]);
        let p1 = projective_module(&jh, 0);
        assert_eq!(p1.dim(), 6);
        assert_eq!(p1.radical_filtration(), vec![vec![1, 0], vec![1, 1], vec![1, 1], vec![1, 0]]);
        let f = alg(fixtures::fourteen());
        assert_eq!(
            projective_module(&f, 0).radical_filtration(),
            vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 1]]
        );
    }

    #[test]
    fn quotients_and_kernels() {
        let a = alg(fixtures::ladder_three());
        let b = quotient_module(&a, &[0]);
        assert_eq!(b.dim(), 2);
        assert!(b.check());
        let b2 = quotient_module(&a, &[1]);
        assert_eq!(b2.dim(), 1);
        let reg = regular_module(&a);
        assert_eq!(reg.dim(), 4);
        assert!(reg.check());
        let kern = reg.kernel_of(&Mat::zeros(a.field(), 4, 1));
        assert_eq!(kern.0.dim(), 4);
        assert!(kern.0.check());
    }
}
