//! Ladders of recollements: extension up and down through iterated
//! bimodule duals, the derived Nakayama functor, and simplicity reports.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{fingerprint, is_local, AlgRef, AlgebraFingerprint};
use crate::exactla::Mat;
use crate::fdmod::FDModule;
use crate::homology::{gldim, GlDim};
use crate::kbproj::{proj_resolve_complex, ModComplex, ProjComplex};
use crate::recollement::{build_recollement, derived_dual, BiComplex, BiContext, DualError, IdempotentRecollement, Side};
use crate::tri::{Cert, TriBool};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LadderError {
    #[error("global dimension is not known to be finite ({0:?})")]
    InfiniteGlobalDimension(GlDim),
    #[error("the Nakayama image did not resolve within depth {0}")]
    DepthExceeded(usize),
}

/// Whether the recollement extends one step down: pd_A(A/AeA) finite.
pub fn extend_down(rec: &IdempotentRecollement, depth: usize) -> TriBool {
    with_reason(rec.pd_quotient(depth).finiteness(), "pd_A(A/AeA)")
}

/// Whether the recollement extends one step up: eA perfect as a left
/// C-module.
pub fn extend_up(rec: &IdempotentRecollement, depth: usize) -> TriBool {
    with_reason(rec.pd_left_corner_row(depth).finiteness(), "pd of eA over C on the left")
}

fn with_reason(t: TriBool, reason: &str) -> TriBool {
    let wrap = |c: Cert| Cert::with(reason, serde_json::json!({"from": c}));
    match t {
        TriBool::True(c) => TriBool::True(wrap(c)),
        TriBool::False(c) => TriBool::False(wrap(c)),
        TriBool::Unknown(c) => TriBool::Unknown(wrap(c)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderStep {
    pub step: usize,
    pub verdict: TriBool,
    /// dimensions of the dual bimodule complex tested at this step
    pub degree_dims: Vec<(i64, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub e: Vec<usize>,
    pub b: AlgebraFingerprint,
    pub c: AlgebraFingerprint,
    pub up_steps: Vec<LadderStep>,
    pub down_steps: Vec<LadderStep>,
    pub height_lower_bound: usize,
    pub complete_up: TriBool,
    pub complete_down: TriBool,
}

impl LadderReport {
    pub fn decided_up(&self) -> usize {
        self.up_steps.iter().filter(|s| s.verdict.is_true()).count()
    }

    pub fn decided_down(&self) -> usize {
        self.down_steps.iter().filter(|s| s.verdict.is_true()).count()
    }
}

fn other<'a>(rec: &'a IdempotentRecollement, ctx: &Arc<BiContext>) -> &'a Arc<BiContext> {
    if Arc::ptr_eq(ctx, &rec.ctx_ca) {
        &rec.ctx_ac
    } else {
        &rec.ctx_ca
    }
}

/// One more dual on `side`, then the compactness of the result on the
/// same side.
fn dual_step(rec: &IdempotentRecollement, x: &BiComplex, side: Side, step: usize, depth: usize) -> (LadderStep, Option<BiComplex>) {
    match derived_dual(x, side, other(rec, &x.ctx), depth) {
        Ok(y) => {
            let over = if Arc::ptr_eq(&y.ctx, &rec.ctx_ca) == (side == Side::Right) { "A" } else { "C" };
            let verdict = with_reason(y.side_compact(side, depth), &format!("dual complex {step} over {over}"));
            (LadderStep { step, verdict, degree_dims: y.degree_dims() }, Some(y))
        }
        Err(DualError::NotPerfect(s)) => {
            let verdict = with_reason(s.finiteness(), &format!("dual complex {} not perfect", step - 1));
            (LadderStep { step, verdict, degree_dims: Vec::new() }, None)
        }
    }
}

fn chain(rec: &IdempotentRecollement, first: TriBool, start: BiComplex, side: Side, m: usize, depth: usize) -> (Vec<LadderStep>, TriBool) {
    let mut steps = vec![LadderStep { step: 1, verdict: first, degree_dims: start.degree_dims() }];
    let mut x = start;
    for k in 2..=m {
        if !steps.last().unwrap().verdict.is_true() {
            break;
        }
        let (s, y) = dual_step(rec, &x, side, k, depth);
        steps.push(s);
        match y {
            Some(y) => x = y,
            None => break,
        }
    }
    let last = &steps.last().unwrap().verdict;
    let complete = match last {
        TriBool::False(_) => TriBool::True(Cert::with("extension refuted at step", steps.len())),
        TriBool::Unknown(_) => TriBool::unknown("last step undecided"),
        TriBool::True(_) => TriBool::Unknown(Cert::with("step bound reached", m)),
    };
    (steps, complete)
}

/// Iterates the dual bimodules up to m steps in each direction. Going
/// down, X_1 = Ae and X_k is the right dual of X_{k-1}; going up, X_{-k}
/// is the left dual of X_{1-k}, starting from X_0 = eA.
pub fn ladder_heights(rec: &IdempotentRecollement, m: usize, depth: usize) -> LadderReport {
    let m = m.max(1);
    let (down, up) = rayon::join(
        || {
            // step 1 is decided by A/AeA; the chain itself starts at X_1
            let first = extend_down(rec, depth);
            let x1 = BiComplex::stalk(&rec.xtr, 0);
            chain(rec, first, x1, Side::Right, m, depth)
        },
        || {
            let first = extend_up(rec, depth);
            let x0 = BiComplex::stalk(&rec.x, 0);
            chain(rec, first, x0, Side::Left, m, depth)
        },
    );
    let (mut down_steps, mut complete_down) = down;
    // the first down step tests A/AeA, not X_1
    down_steps[0].degree_dims = vec![(0, rec.quotient_bimodule().dim())];
    let (up_steps, mut complete_up) = up;
    // finite global dimension: the Nakayama functor continues the ladder
    // in both directions forever
    let open = |t: &TriBool| t.is_unknown() && t.cert().reason == "step bound reached";
    if open(&complete_up) || open(&complete_down) {
        if let GlDim::Finite(g) = gldim(&rec.a, depth) {
            let unbounded = || TriBool::False(Cert::with("finite global dimension: unbounded Nakayama ladder", g));
            if open(&complete_up) {
                complete_up = unbounded();
            }
            if open(&complete_down) {
                complete_down = unbounded();
            }
        }
    }
    let trues = |s: &[LadderStep]| s.iter().take_while(|x| x.verdict.is_true()).count();
    LadderReport {
        e: rec.e.clone(),
        b: fingerprint(&rec.b),
        c: fingerprint(&rec.c),
        height_lower_bound: 1 + trues(&up_steps) + trues(&down_steps),
        up_steps,
        down_steps,
        complete_up,
        complete_down,
    }
}

/// D(Ae_v) as a right module: (ψ·c)(a) = ψ(c a).
pub fn injective_module(a: &AlgRef, v: usize) -> FDModule {
    let f = a.field();
    let basis = a.right_ideal_basis(v);
    let n = basis.len();
    let action = (0..a.dim())
        .map(|c| {
            let mut m = Mat::zeros(f, n, n);
            for (k, &b2) in basis.iter().enumerate() {
                let prod = a.product_vec(c, b2);
                for (j, &b) in basis.iter().enumerate() {
                    m.set(j, k, prod[b].clone());
                }
            }
            m
        })
        .collect();
    FDModule::from_parts(a.clone(), action, basis.iter().map(|&b| a.tag(b).0).collect())
}

/// ν of an element x ∈ e_v A e_u: D(Ae_u) → D(Ae_v), ψ ↦ ψ(− x).
fn nu_block(a: &AlgRef, u: usize, v: usize, x: &[crate::exactla::Scalar]) -> Mat {
    let f = a.field();
    let bu = a.right_ideal_basis(u);
    let bv = a.right_ideal_basis(v);
    let mut m = Mat::zeros(f, bu.len(), bv.len());
    for (k, &b2) in bv.iter().enumerate() {
        let prod = a.mul_basis_left(b2, x);
        for (j, &b) in bu.iter().enumerate() {
            m.set(j, k, prod[b].clone());
        }
    }
    m
}

fn nu_complex(x: &ProjComplex) -> ModComplex {
    let a = x.algebra();
    let f = a.field();
    let sum = |vs: &[usize]| FDModule::direct_sum_all(a, &vs.iter().map(|&v| injective_module(a, v)).collect::<Vec<_>>());
    let dims = |vs: &[usize]| vs.iter().map(|&v| a.right_ideal_basis(v).len()).collect::<Vec<_>>();
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in x.lo..=x.hi() {
        terms.push(sum(x.term(n)));
        if n < x.hi() {
            let d = x.diff(n);
            let (ds, dt) = (dims(&d.src), dims(&d.tgt));
            let mut m = Mat::zeros(f, ds.iter().sum(), dt.iter().sum());
            let mut r0 = 0;
            for (i, &u) in d.src.iter().enumerate() {
                let mut c0 = 0;
                for (j, &v) in d.tgt.iter().enumerate() {
                    let blk = nu_block(a, u, v, d.entry(j, i));
                    for r in 0..ds[i] {
                        for c in 0..dt[j] {
                            m.set(r0 + r, c0 + c, blk.get(r, c).clone());
                        }
                    }
                    c0 += dt[j];
                }
                r0 += ds[i];
            }
            diffs.push(m);
        }
    }
    ModComplex::new(a, x.lo, terms, diffs)
}

/// The derived Nakayama functor on K^b(proj A) for A of finite global
/// dimension: P_v ↦ D(Ae_v), followed by a projective resolution of the
/// resulting complex of injectives.
pub fn nakayama(x: &ProjComplex, depth: usize) -> Result<ProjComplex, LadderError> {
    let a = x.algebra();
    match gldim(a, depth) {
        GlDim::Finite(_) => {}
        g => return Err(LadderError::InfiniteGlobalDimension(g)),
    }
    if x.is_zero() {
        return Ok(x.clone());
    }
    proj_resolve_complex(&nu_complex(x), depth).to_proj_complex().ok_or(LadderError::DepthExceeded(depth))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", content = "evidence")]
pub enum Simplicity {
    SimpleCertified(Cert),
    NotSimple(Cert),
    NoWitnessFound(Cert),
}

impl Simplicity {
    pub fn short(&self) -> &'static str {
        match self {
            Simplicity::SimpleCertified(_) => "simple",
            Simplicity::NotSimple(_) => "not simple",
            Simplicity::NoWitnessFound(_) => "no witness found",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchBounds {
    pub depth: usize,
    pub ladder_steps: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplicityReport {
    pub d_mod: Simplicity,
    pub d_minus: Simplicity,
    pub kbproj_db: Simplicity,
    pub ladders: Vec<LadderReport>,
    pub bounds: SearchBounds,
}

/// Proper nonempty vertex subsets, in order of size then lexicographic.
pub fn vertex_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1..(1u64 << n).saturating_sub(1)).map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect()).collect();
    out.sort_by(|x: &Vec<usize>, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    out
}

/// Simplicity at the levels D(Mod), D^-(Mod) and K^b(proj)/D^b. Local
/// algebras are simple by the rank count; otherwise idempotent ladders of
/// height at least 1, 2, 3 witness non-simplicity at the three levels.
pub fn simplicity_report(a: &AlgRef, bounds: SearchBounds) -> SimplicityReport {
    if is_local(a).is_true() {
        let c = || Simplicity::SimpleCertified(Cert::new("local algebra: r(B) + r(C) = 1 forces a trivial side"));
        return SimplicityReport { d_mod: c(), d_minus: c(), kbproj_db: c(), ladders: Vec::new(), bounds };
    }
    let ladders: Vec<LadderReport> = vertex_subsets(a.num_vertices())
        .par_iter()
        .filter_map(|e| build_recollement(a, e, bounds.depth).ok())
        .map(|rec| ladder_heights(&rec, bounds.ladder_steps.max(2), bounds.depth))
        .collect();
    let level = |h: usize| {
        let witnesses: Vec<&Vec<usize>> = ladders.iter().filter(|l| l.height_lower_bound >= h).map(|l| &l.e).collect();
        if witnesses.is_empty() {
            Simplicity::NoWitnessFound(Cert::with(
                format!("no idempotent ladder of height ≥ {h}"),
                serde_json::json!({"recollements": ladders.len(), "depth": bounds.depth, "steps": bounds.ladder_steps}),
            ))
        } else {
            Simplicity::NotSimple(Cert::with(format!("idempotent ladder of height ≥ {h}"), witnesses))
        }
    };
    SimplicityReport { d_mod: level(1), d_minus: level(2), kbproj_db: level(3), ladders, bounds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fixtures;
    use crate::kbproj::hom_dim;
    use crate::recollement::homotopy_isomorphic;

    fn alg(q: crate::algebra::QuiverPresentation) -> AlgRef {
        Arc::new(build_algebra(&q).unwrap())
    }

    fn verdicts(s: &[LadderStep]) -> Vec<Option<bool>> {
        s.iter().map(|x| x.verdict.as_option()).collect()
    }

    #[test]
    fn ladder_three_heights() {
        let a = alg(fixtures::ladder_three());
        let r1 = build_recollement(&a, &[0], 20).unwrap();
        let l = ladder_heights(&r1, 4, 20);
        assert_eq!(verdicts(&l.down_steps), vec![Some(true), Some(false)]);
        assert_eq!(verdicts(&l.up_steps), vec![Some(true), Some(false)]);
        assert_eq!(l.height_lower_bound, 3);
        assert!(l.complete_up.is_true() && l.complete_down.is_true());

        let r2 = build_recollement(&a, &[1], 20).unwrap();
        let l = ladder_heights(&r2, 4, 20);
        assert_eq!(verdicts(&l.down_steps), vec![Some(false)]);
        assert_eq!(verdicts(&l.up_steps), vec![Some(true), Some(true), Some(false)]);
        assert_eq!(l.height_lower_bound, 3);
    }

    #[test]
    fn radical_square_zero_height_two() {
        let a = alg(fixtures::radical_square_zero());
        let r = build_recollement(&a, &[0], 20).unwrap();
        assert!(extend_down(&r, 20).is_true());
        assert!(extend_up(&r, 20).is_false());
        let l = ladder_heights(&r, 4, 20);
        assert_eq!(verdicts(&l.down_steps), vec![Some(true), Some(false)]);
        assert_eq!(l.height_lower_bound, 2);
    }

    #[test]
    fn finite_global_dimension_ladder_is_unbounded() {
        let a = alg(fixtures::quasi_hereditary());
        for e in [[0usize], [1]] {
            let Ok(r) = build_recollement(&a, &e, 20) else { continue };
            let l = ladder_heights(&r, 4, 20);
            assert!(l.up_steps.iter().chain(&l.down_steps).all(|s| s.verdict.is_true()), "{e:?}");
            assert_eq!(l.height_lower_bound, 9);
            assert!(l.complete_up.is_false() && l.complete_down.is_false());
        }
    }

    #[test]
    fn nakayama_is_serre_duality() {
        let a = alg(fixtures::quasi_hereditary());
        for u in 0..2 {
            for v in 0..2 {
                let pu = ProjComplex::stalk(&a, &[u], 0);
                let pv = ProjComplex::stalk(&a, &[v], 0);
                let nv = nakayama(&pv, 20).unwrap();
                assert_eq!(hom_dim(&pu, &nv, 0), hom_dim(&pv, &pu, 0));
                for n in [-2, -1, 1, 2] {
                    assert_eq!(hom_dim(&pu, &nv, n), 0);
                }
            }
        }
    }

    #[test]
    fn nakayama_of_p2_resolves_i2() {
        let a = alg(fixtures::quasi_hereditary());
        let nu = nakayama(&ProjComplex::stalk(&a, &[1], 0), 20).unwrap();
        let i2 = proj_resolve_complex(&ModComplex::stalk(&injective_module(&a, 1), 0), 20).to_proj_complex().unwrap();
        assert!(homotopy_isomorphic(&nu, &i2, 3, 16).is_true());
        // and it is j_*(C) for e = e2, computed as a bimodule dual
        let r = build_recollement(&a, &[1], 20).unwrap();
        let js = r.j_star(20).unwrap();
        let side = js.side_complex(Side::Right);
        let js = proj_resolve_complex(&side, 20).to_proj_complex().unwrap();
        assert!(homotopy_isomorphic(&nu, &js, 3, 16).is_true());
    }

    #[test]
    fn nakayama_cubed_is_a_shift_on_a2() {
        let a = alg(fixtures::linear_a2());
        for v in 0..2 {
            let p = ProjComplex::stalk(&a, &[v], 0);
            let mut x = p.clone();
            for _ in 0..3 {
                x = nakayama(&x, 20).unwrap();
            }
            assert!(homotopy_isomorphic(&x, &p.shift(1), 5, 16).is_true());
        }
    }

    #[test]
    fn nakayama_on_semisimple_is_identity() {
        let a = alg(fixtures::field_k());
        let p = ProjComplex::stalk(&a, &[0], 2);
        assert!(homotopy_isomorphic(&nakayama(&p, 5).unwrap(), &p, 0, 4).is_true());
        let b = alg(fixtures::ladder_three());
        assert!(matches!(nakayama(&ProjComplex::stalk(&b, &[0], 0), 20), Err(LadderError::InfiniteGlobalDimension(_))));
    }

    #[test]
    fn simplicity_examples() {
        let bounds = SearchBounds { depth: 30, ladder_steps: 4 };
        let r = simplicity_report(&alg(fixtures::dual_numbers()), bounds);
        assert!(matches!(r.kbproj_db, Simplicity::SimpleCertified(_)));
        let r = simplicity_report(&alg(fixtures::radical_square_zero()), bounds);
        assert!(matches!(r.d_mod, Simplicity::NotSimple(_)));
        assert!(matches!(r.d_minus, Simplicity::NotSimple(_)));
        assert!(matches!(r.kbproj_db, Simplicity::NoWitnessFound(_)));
        let r = simplicity_report(&alg(fixtures::fourteen()), bounds);
        assert!(matches!(r.d_mod, Simplicity::NotSimple(_)));
        assert!(matches!(r.d_minus, Simplicity::NoWitnessFound(_)));
    }
}
