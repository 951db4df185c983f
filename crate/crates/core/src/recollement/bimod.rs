//! Bimodules M over (L, R), stored as right modules over L^op ⊗ R with
//! m·(l ⊗ r) = l m r, and their one-sided duals.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{opposite, tensor, AlgRef, BasedAlgebra};
use crate::exactla::{Echelon, Mat, Scalar};
use crate::fdmod::{hom_space, FDModule};
use crate::homology::PdStatus;
use crate::kbproj::{pmap_matrix, proj_resolve_complex, resolve_head, ModComplex};
use crate::tri::TriBool;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error("complex is not perfect on the dualized side: {0}")]
    NotPerfect(PdStatus),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    Left,
    Right,
}

/// The pair of algebras and the enveloping algebra L^op ⊗ R.
#[derive(Debug)]
pub struct BiContext {
    pub left: AlgRef,
    pub right: AlgRef,
    pub left_op: AlgRef,
    pub right_op: AlgRef,
    pub env: AlgRef,
}

impl BiContext {
    /// Contexts for (L, R) and (R, L).
    pub fn pair(left: &AlgRef, right: &AlgRef) -> (Arc<BiContext>, Arc<BiContext>) {
        let lop: AlgRef = Arc::new(opposite(left));
        let rop: AlgRef = Arc::new(opposite(right));
        let lr = BiContext { left: left.clone(), right: right.clone(), left_op: lop.clone(), right_op: rop.clone(), env: Arc::new(tensor(&lop, right)) };
        let rl = BiContext { left: right.clone(), right: left.clone(), left_op: rop.clone(), right_op: lop, env: Arc::new(tensor(&rop, left)) };
        (Arc::new(lr), Arc::new(rl))
    }

    fn nr(&self) -> usize {
        self.right.num_vertices()
    }

    /// l ⊗ 1 and 1 ⊗ r as elements of the enveloping algebra.
    fn left_elem(&self, i: usize) -> Vec<Scalar> {
        let dr = self.right.dim();
        let mut v = self.env.zero_vec();
        for (j, c) in self.right.unit().iter().enumerate() {
            if !c.is_zero() {
                v[i * dr + j] = c.clone();
            }
        }
        v
    }

    fn right_elem(&self, j: usize) -> Vec<Scalar> {
        let dr = self.right.dim();
        let mut v = self.env.zero_vec();
        for (i, c) in self.left.unit().iter().enumerate() {
            if !c.is_zero() {
                v[i * dr + j] = c.clone();
            }
        }
        v
    }

    fn swapped_of(&self, other: &BiContext) -> bool {
        self.left.same_structure(&other.right) && self.right.same_structure(&other.left)
    }
}

#[derive(Clone, Debug)]
pub struct Bimodule {
    pub ctx: Arc<BiContext>,
    pub module: FDModule,
    lmats: Vec<Mat>,
    rmats: Vec<Mat>,
}

/// Basis of a bimodule inside an ambient space, with coordinates.
struct Embedded {
    basis: Vec<Vec<Scalar>>,
    ech: Echelon,
}

impl Embedded {
    fn coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.ech.coordinates(v).expect("vector outside the bimodule")
    }
}

/// Builds the bimodule spanned by `span` (closed under both actions)
/// with a basis adapted to the blocks e_u M e_v.
fn from_space(
    ctx: &Arc<BiContext>,
    width: usize,
    span: &[Vec<Scalar>],
    left: &dyn Fn(usize, &[Scalar]) -> Vec<Scalar>,
    right: &dyn Fn(&[Scalar], usize) -> Vec<Scalar>,
) -> (Bimodule, Embedded) {
    let (l, r) = (&ctx.left, &ctx.right);
    let f = l.field();
    let nr = ctx.nr();
    let mut basis = Vec::new();
    let mut vertex_of = Vec::new();
    for u in 0..l.num_vertices() {
        for v in 0..nr {
            let mut ech = Echelon::new(f, width);
            for x in span {
                ech.insert(&right(&left(l.idempotent(u), x), r.idempotent(v)));
            }
            for b in ech.basis() {
                basis.push(b.clone());
                vertex_of.push(u * nr + v);
            }
        }
    }
    let mut ech = Echelon::tracking(f, width);
    for b in &basis {
        ech.insert(b);
    }
    let n = basis.len();
    let emb = Embedded { basis: basis.clone(), ech };
    let lmats: Vec<Mat> = (0..l.dim()).map(|i| Mat::from_rows(f, n, basis.iter().map(|b| emb.coords(&left(i, b))).collect())).collect();
    let rmats: Vec<Mat> = (0..r.dim()).map(|j| Mat::from_rows(f, n, basis.iter().map(|b| emb.coords(&right(b, j))).collect())).collect();
    let action = env_action(ctx, &lmats, &rmats, n);
    let module = FDModule::from_parts(ctx.env.clone(), action, vertex_of);
    (Bimodule { ctx: ctx.clone(), module, lmats, rmats }, emb)
}

fn env_action(ctx: &BiContext, lmats: &[Mat], rmats: &[Mat], n: usize) -> Vec<Mat> {
    let f = ctx.left.field();
    let mut out = Vec::with_capacity(lmats.len() * rmats.len());
    for lm in lmats {
        for rm in rmats {
            out.push(if n == 0 { Mat::zeros(f, 0, 0) } else { lm.mul(rm) });
        }
    }
    out
}

/// Ambient-coordinate helpers for sub-bimodules of an algebra.
fn unit_span(f: crate::exactla::Field, width: usize, idx: &[usize]) -> Vec<Vec<Scalar>> {
    idx.iter().map(|&i| f.unit_vector(width, i)).collect()
}

impl Bimodule {
    /// Wraps a module over the enveloping algebra.
    pub fn from_env(ctx: &Arc<BiContext>, module: FDModule) -> Bimodule {
        let lmats = (0..ctx.left.dim()).map(|i| module.action_of(&ctx.left_elem(i))).collect();
        let rmats = (0..ctx.right.dim()).map(|j| module.action_of(&ctx.right_elem(j))).collect();
        Bimodule { ctx: ctx.clone(), module, lmats, rmats }
    }

    /// eA as a C-A bimodule, C = eAe with basis `emb` inside A.
    pub fn corner_row(ctx: &Arc<BiContext>, a: &BasedAlgebra, e: &[usize], emb: &[usize]) -> Bimodule {
        let idx: Vec<usize> = (0..a.dim()).filter(|&i| e.contains(&a.tag(i).0)).collect();
        let left = |i: usize, x: &[Scalar]| a.mul_basis_left(emb[i], x);
        let right = |x: &[Scalar], j: usize| a.mul_basis_right(x, j);
        from_space(ctx, a.dim(), &unit_span(a.field(), a.dim(), &idx), &left, &right).0
    }

    /// Ae as an A-C bimodule.
    pub fn corner_column(ctx: &Arc<BiContext>, a: &BasedAlgebra, e: &[usize], emb: &[usize]) -> Bimodule {
        let idx: Vec<usize> = (0..a.dim()).filter(|&i| e.contains(&a.tag(i).1)).collect();
        let left = |i: usize, x: &[Scalar]| a.mul_basis_left(i, x);
        let right = |x: &[Scalar], j: usize| a.mul_basis_right(x, emb[j]);
        from_space(ctx, a.dim(), &unit_span(a.field(), a.dim(), &idx), &left, &right).0
    }

    /// B = A/AeA as a B-A bimodule; `proj` maps A onto B.
    pub fn quotient(ctx: &Arc<BiContext>, b: &BasedAlgebra, proj: &Mat) -> Bimodule {
        let all: Vec<usize> = (0..b.dim()).collect();
        let left = |i: usize, x: &[Scalar]| b.mul_basis_left(i, x);
        let right = |x: &[Scalar], j: usize| b.mul(x, proj.row(j));
        from_space(ctx, b.dim(), &unit_span(b.field(), b.dim(), &all), &left, &right).0
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Restriction to the right algebra.
    pub fn as_right(&self) -> FDModule {
        let nr = self.ctx.nr();
        let vs = self.module.vertex_of().iter().map(|&x| x % nr).collect();
        FDModule::from_parts(self.ctx.right.clone(), self.rmats.clone(), vs)
    }

    /// Restriction to the left algebra, as a right module over its opposite.
    pub fn as_left(&self) -> FDModule {
        let nr = self.ctx.nr();
        let vs = self.module.vertex_of().iter().map(|&x| x / nr).collect();
        FDModule::from_parts(self.ctx.left_op.clone(), self.lmats.clone(), vs)
    }

    pub fn side(&self, side: Side) -> FDModule {
        match side {
            Side::Left => self.as_left(),
            Side::Right => self.as_right(),
        }
    }

    /// Both actions commute and each is a module structure.
    pub fn check(&self) -> bool {
        self.module.check() && self.as_left().check() && self.as_right().check()
    }
}

/// A bounded complex of bimodules; `diffs[k]` maps degree lo + k to lo + k + 1.
#[derive(Clone, Debug)]
pub struct BiComplex {
    pub ctx: Arc<BiContext>,
    pub lo: i64,
    pub terms: Vec<Bimodule>,
    pub diffs: Vec<Mat>,
}

impl BiComplex {
    pub fn stalk(m: &Bimodule, degree: i64) -> BiComplex {
        BiComplex { ctx: m.ctx.clone(), lo: degree, terms: vec![m.clone()], diffs: Vec::new() }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(|t| t.dim()).sum()
    }

    pub fn degree_dims(&self) -> Vec<(i64, usize)> {
        self.terms.iter().enumerate().map(|(k, t)| (self.lo + k as i64, t.dim())).collect()
    }

    pub fn env_complex(&self) -> ModComplex {
        ModComplex::new(&self.ctx.env, self.lo, self.terms.iter().map(|t| t.module.clone()).collect(), self.diffs.clone())
    }

    /// The complex restricted to one side (left side over L^op).
    pub fn side_complex(&self, side: Side) -> ModComplex {
        let alg = match side {
            Side::Left => &self.ctx.left_op,
            Side::Right => &self.ctx.right,
        };
        ModComplex::new(alg, self.lo, self.terms.iter().map(|t| t.side(side)).collect(), self.diffs.clone())
    }

    pub fn cohomology_dims(&self) -> Vec<(i64, usize)> {
        self.env_complex().cohomology_dims()
    }

    /// Perfectness of one side: the status of the kernel below the head of
    /// a projective resolution of the restricted complex.
    pub fn side_status(&self, side: Side, depth: usize) -> PdStatus {
        let s = self.side_complex(side);
        if s.terms.iter().all(|t| t.is_projective()) {
            return PdStatus::Finite(0);
        }
        proj_resolve_complex(&s, depth).status()
    }

    pub fn side_compact(&self, side: Side, depth: usize) -> TriBool {
        self.side_status(side, depth).finiteness()
    }

    /// A quasi-isomorphic complex whose terms are projective on `side`:
    /// the complex itself, or a bimodule-projective resolution cut at the
    /// first syzygy that is projective on that side.
    fn side_projective_model(&self, side: Side, depth: usize) -> Result<BiComplex, DualError> {
        if self.terms.iter().all(|t| t.side(side).is_projective()) {
            return Ok(self.clone());
        }
        let status = self.side_status(side, depth);
        if !status.is_finite() {
            return Err(DualError::NotPerfect(status));
        }
        let ctx = &self.ctx;
        let a = ctx.env.clone();
        let mut r = resolve_head(&self.env_complex());
        let head = r.head.clone();
        let mut terms: Vec<Bimodule> = (head.lo..=head.hi()).map(|n| Bimodule::from_env(ctx, crate::fdmod::proj_sum(&a, head.term(n)).0)).collect();
        let mut diffs: Vec<Mat> = (head.lo..head.hi()).map(|n| head.diff_matrix(n)).collect();
        let mut lo = head.lo;
        if terms.is_empty() {
            return Ok(BiComplex { ctx: ctx.clone(), lo: 0, terms: Vec::new(), diffs: Vec::new() });
        }
        // prepend tail terms until the syzygy is projective on the side
        let mut into = r.kernel_inclusion.clone();
        for k in 0..=depth + 1 {
            r.tail.extend_to(k);
            let syz = Bimodule::from_env(ctx, r.tail.syzygies[k].clone());
            if syz.side(side).is_projective() {
                if syz.dim() > 0 {
                    terms.insert(0, syz);
                    diffs.insert(0, into);
                    lo -= 1;
                }
                return Ok(BiComplex { ctx: ctx.clone(), lo, terms, diffs });
            }
            if k >= r.tail.terms.len() {
                break;
            }
            let p = crate::fdmod::proj_sum(&a, &r.tail.terms[k]).0;
            let d = if k == 0 { r.tail.augmentation.mul(&r.kernel_inclusion) } else { pmap_matrix(&a, &r.tail.maps[k - 1]) };
            terms.insert(0, Bimodule::from_env(ctx, p));
            diffs.insert(0, d);
            lo -= 1;
            into = r.tail.inclusions[k].clone();
        }
        Err(DualError::NotPerfect(PdStatus::DepthExceeded(depth)))
    }
}

/// Right module structure of an algebra on itself, in basis order.
fn regular_in_basis_order(r: &AlgRef) -> FDModule {
    let action = (0..r.dim()).map(|j| r.right_mult_matrix(&r.basis_vector(j))).collect();
    FDModule::from_parts(r.clone(), action, (0..r.dim()).map(|i| r.tag(i).1).collect())
}

/// L as a right L^op-module (left multiplication), in basis order.
fn left_regular_in_basis_order(l: &AlgRef, lop: &AlgRef) -> FDModule {
    let action = (0..l.dim()).map(|i| l.left_mult_matrix(&l.basis_vector(i))).collect();
    FDModule::from_parts(lop.clone(), action, (0..l.dim()).map(|i| l.tag(i).0).collect())
}

fn flat(m: &Mat) -> Vec<Scalar> {
    m.entries().to_vec()
}

fn unflat(f: crate::exactla::Field, v: &[Scalar], cols: usize) -> Mat {
    let rows = v.len().checked_div(cols).unwrap_or(0);
    Mat::from_rows(f, cols, v.chunks(cols.max(1)).take(rows).map(|c| c.to_vec()).collect())
}

/// Hom over one side of a single bimodule; an (R, L) bimodule.
fn dual_term(m: &Bimodule, side: Side, target: &Arc<BiContext>) -> (Bimodule, Embedded, usize) {
    let ctx = &m.ctx;
    let f = ctx.left.field();
    match side {
        Side::Right => {
            let r = &ctx.right;
            let reg = regular_in_basis_order(r);
            let span: Vec<Vec<Scalar>> = hom_space(&m.as_right(), &reg).expect("same algebra").iter().map(flat).collect();
            let cols = r.dim();
            let lmult: Vec<Mat> = (0..r.dim()).map(|j| r.left_mult_matrix(&r.basis_vector(j))).collect();
            let left = |j: usize, x: &[Scalar]| flat(&unflat(f, x, cols).mul(&lmult[j]));
            let right = |x: &[Scalar], i: usize| flat(&m.lmats[i].mul(&unflat(f, x, cols)));
            let (b, e) = from_space(target, m.dim() * cols, &span, &left, &right);
            (b, e, cols)
        }
        Side::Left => {
            let l = &ctx.left;
            let reg = left_regular_in_basis_order(l, &ctx.left_op);
            let span: Vec<Vec<Scalar>> = hom_space(&m.as_left(), &reg).expect("same algebra").iter().map(flat).collect();
            let cols = l.dim();
            let rmult: Vec<Mat> = (0..l.dim()).map(|i| l.right_mult_matrix(&l.basis_vector(i))).collect();
            let left = |j: usize, x: &[Scalar]| flat(&m.rmats[j].mul(&unflat(f, x, cols)));
            let right = |x: &[Scalar], i: usize| flat(&unflat(f, x, cols).mul(&rmult[i]));
            let (b, e) = from_space(target, m.dim() * cols, &span, &left, &right);
            (b, e, cols)
        }
    }
}

/// RHom over one side into the corresponding algebra: Hom_R(X, R) for
/// side Right, Hom_{L^op}(X, L) for side Left. The result lives over the
/// swapped pair `target`.
pub fn derived_dual(x: &BiComplex, side: Side, target: &Arc<BiContext>, depth: usize) -> Result<BiComplex, DualError> {
    assert!(x.ctx.swapped_of(target), "target context must swap the algebras");
    let p = x.side_projective_model(side, depth)?;
    let f = x.ctx.left.field();
    if p.terms.is_empty() {
        return Ok(BiComplex { ctx: target.clone(), lo: 0, terms: Vec::new(), diffs: Vec::new() });
    }
    let duals: Vec<(Bimodule, Embedded, usize)> = p.terms.iter().map(|t| dual_term(t, side, target)).collect();
    // degree -n holds Hom(X^n); differential Hom(X^n) → Hom(X^{n-1}) is φ ↦ d φ
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for k in (0..duals.len()).rev() {
        terms.push(duals[k].0.clone());
        if k > 0 {
            let d = &p.diffs[k - 1];
            let (src, _, cols) = &duals[k];
            let (_, temb, _) = &duals[k - 1];
            let _ = src;
            let rows = duals[k]
                .1
                .basis
                .iter()
                .map(|phi| temb.coords(&flat(&d.mul(&unflat(f, phi, *cols)))))
                .collect();
            diffs.push(Mat::from_rows(f, duals[k - 1].0.dim(), rows));
        }
    }
    Ok(BiComplex { ctx: target.clone(), lo: -p.hi(), terms, diffs })
}
