use serde::Serialize;

use super::{pmap_matrix, ProjComplex};
use crate::algebra::AlgRef;
use crate::exactla::{Mat, Scalar};
use crate::fdmod::{proj_sum, split_components, FDModule, PMap};
use crate::homology::{lazy_resolution, min_resolution, solve_on_rows, PdStatus, ResolutionReport};
use crate::tri::{Cert, TriBool};

/// Bounded complex of finite-dimensional modules; `diffs[k]` maps degree
/// lo + k to lo + k + 1 in the row-vector convention.
#[derive(Clone, Debug)]
pub struct ModComplex {
    alg: AlgRef,
    pub lo: i64,
    pub terms: Vec<FDModule>,
    pub diffs: Vec<Mat>,
}

impl ModComplex {
    pub fn new(alg: &AlgRef, lo: i64, terms: Vec<FDModule>, diffs: Vec<Mat>) -> ModComplex {
        assert_eq!(diffs.len() + 1, terms.len().max(1));
        ModComplex { alg: alg.clone(), lo, terms, diffs }
    }

    pub fn stalk(m: &FDModule, degree: i64) -> ModComplex {
        ModComplex::new(m.algebra(), degree, vec![m.clone()], Vec::new())
    }

    pub fn algebra(&self) -> &AlgRef {
        &self.alg
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, n: i64) -> FDModule {
        if n < self.lo || n > self.hi() {
            return FDModule::zero(&self.alg);
        }
        self.terms[(n - self.lo) as usize].clone()
    }

    pub fn diff(&self, n: i64) -> Mat {
        if n >= self.lo && n < self.hi() {
            return self.diffs[(n - self.lo) as usize].clone();
        }
        Mat::zeros(self.alg.field(), self.term(n).dim(), self.term(n + 1).dim())
    }

    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
    }

    /// Every differential commutes with the action.
    pub fn is_module_complex(&self) -> bool {
        (self.lo..self.hi()).all(|n| {
            let (s, t, d) = (self.term(n), self.term(n + 1), self.diff(n));
            (0..self.alg.dim()).all(|b| s.action(b).mul(&d) == d.mul(t.action(b)))
        })
    }

    /// Degreewise restriction of scalars.
    pub fn restrict(&self, sub: &AlgRef, images: &[Vec<Scalar>], blocks: &[usize]) -> ModComplex {
        let terms = self.terms.iter().map(|m| m.restrict(sub, images, blocks)).collect();
        ModComplex { alg: sub.clone(), lo: self.lo, terms, diffs: self.diffs.clone() }
    }

    pub fn cohomology_dims(&self) -> Vec<(i64, usize)> {
        (self.lo..=self.hi())
            .map(|n| {
                let d_out = self.diff(n);
                let d_in = self.diff(n - 1);
                (n, self.term(n).dim() - rank(&d_out) - rank(&d_in))
            })
            .collect()
    }
}

fn rank(m: &Mat) -> usize {
    if m.rows() == 0 || m.cols() == 0 { 0 } else { m.rank() }
}

/// Dimensions of H^n(X) as vector spaces.
pub fn total_cohomology_dims(x: &ProjComplex) -> Vec<(i64, usize)> {
    if x.is_zero() {
        return Vec::new();
    }
    (x.lo..=x.hi())
        .map(|n| (n, x.degree_dim(n) - rank(&x.diff_matrix(n)) - rank(&x.diff_matrix(n - 1))))
        .collect()
}

/// Projective resolution of a bounded complex X: projectives P^n for
/// n ≥ lo with a quasi-isomorphism onto X in degrees ≥ lo, continued below
/// lo by a minimal resolution of the kernel Z ⊆ P^lo.
#[derive(Clone, Debug)]
pub struct ComplexResolution {
    pub head: ProjComplex,
    /// f^n: P^n → X^n for n = lo..=hi
    pub comparison: Vec<Mat>,
    pub kernel_inclusion: Mat,
    pub tail: ResolutionReport,
}

#[derive(Serialize)]
pub struct ResolutionSummary {
    pub head_terms: Vec<Vec<usize>>,
    pub tail_status: PdStatus,
}

fn hstack(f: crate::exactla::Field, x: &Mat, y: &Mat, rows: usize) -> Mat {
    let x = if x.rows() == rows { x.clone() } else { Mat::zeros(f, rows, x.cols()) };
    let y = if y.rows() == rows { y.clone() } else { Mat::zeros(f, rows, y.cols()) };
    x.hstack(&y)
}

pub fn proj_resolve_complex(x: &ModComplex, depth: usize) -> ComplexResolution {
    let mut r = resolve_head(x);
    r.tail = min_resolution(&r.tail.module, depth);
    r
}

/// The head and the kernel below it; the tail is left unresolved
/// (extend it with `tail.extend_to`).
pub fn resolve_head(x: &ModComplex) -> ComplexResolution {
    let a = x.algebra().clone();
    let f = a.field();
    let (lo, hi) = (x.lo, x.hi());
    // built from the top down; index 0 is degree hi + 1 (zero)
    let mut terms: Vec<Vec<usize>> = vec![Vec::new()];
    let mut diffs: Vec<PMap> = Vec::new();
    let mut comps: Vec<Mat> = vec![Mat::zeros(f, 0, x.term(hi + 1).dim())];
    let mut kernel_inclusion = Mat::zeros(f, 0, 0);
    let mut kernel = FDModule::zero(&a);
    for n in (lo..=hi).rev() {
        let above = terms.last().unwrap().clone();
        let (p_above, _) = proj_sum(&a, &above);
        let dp_above = match diffs.last() {
            Some(d) => pmap_matrix(&a, d),
            None => Mat::zeros(f, p_above.dim(), 0),
        };
        let f_above = comps.last().unwrap().clone();
        let xn = x.term(n);
        let cn = p_above.direct_sum(&xn);
        let np = p_above.dim();
        // d_C(p, x) = (-d_P p, f p + d_X x)
        let p_rows = hstack(f, &dp_above.scale(&-f.one()), &f_above, np);
        let top = if n < hi { p_rows } else { Mat::zeros(f, np, x.term(n + 1).dim()) };
        let two_above = dp_above.cols();
        let x_rows = hstack(f, &Mat::zeros(f, xn.dim(), two_above), &x.diff(n), xn.dim());
        let dc = if top.cols() == x_rows.cols() { top.vstack(&x_rows) } else { x_rows.clone() };
        let (z, inc) = if dc.cols() == 0 {
            (cn.clone(), Mat::identity(f, cn.dim()))
        } else {
            cn.kernel_of(&dc)
        };
        let all: Vec<usize> = (0..z.dim()).collect();
        let bgens: Vec<Vec<Scalar>> = x
            .diff(n - 1)
            .row_vecs()
            .into_iter()
            .map(|y| {
                let mut c = f.zeros(np);
                c.extend(y);
                solve_on_rows(&inc, &all, &c).expect("boundary is a cycle")
            })
            .collect();
        let (q, proj) = z.quotient(&bgens);
        let lifts = q.top_lifts();
        let vertices: Vec<usize> = lifts.iter().map(|(u, _)| *u).collect();
        let mut d = PMap::zero(&a, &vertices, &above);
        let (p_here, _) = proj_sum(&a, &vertices);
        let mut fn_rows = Vec::with_capacity(p_here.dim());
        for (s, (u, qv)) in lifts.iter().enumerate() {
            let k = solve_on_rows(&proj, &z.block(*u), qv).expect("lift to the cycles");
            let c = inc.vec_mul(&k);
            let (pa, xb) = c.split_at(np);
            let neg: Vec<Scalar> = pa.iter().map(|t| -t).collect();
            for (j, e) in split_components(&a, &above, &neg).into_iter().enumerate() {
                d.set(j, s, e);
            }
            for b in a.left_ideal_basis(*u) {
                fn_rows.push(xn.act_basis(xb, b));
            }
        }
        let fmat = Mat::from_rows(f, xn.dim(), fn_rows);
        if n == lo {
            let d_here = pmap_matrix(&a, &d);
            let m = hstack(f, &d_here.scale(&-f.one()), &fmat, p_here.dim());
            let (kz, ki) = if m.cols() == 0 { (p_here.clone(), Mat::identity(f, p_here.dim())) } else { p_here.kernel_of(&m) };
            kernel = kz;
            kernel_inclusion = ki;
        }
        terms.push(vertices);
        diffs.push(d);
        comps.push(fmat);
    }
    terms.remove(0);
    comps.remove(0);
    diffs.remove(0);
    terms.reverse();
    comps.reverse();
    diffs.reverse();
    let head = ProjComplex { alg: a.clone(), lo, terms, diffs };
    let tail = lazy_resolution(&kernel);
    ComplexResolution { head, comparison: comps, kernel_inclusion, tail }
}

impl ComplexResolution {
    pub fn status(&self) -> PdStatus {
        self.tail.status
    }

    /// X is perfect (quasi-isomorphic to a bounded complex of projectives).
    pub fn is_compact(&self) -> TriBool {
        match self.tail.status {
            PdStatus::Finite(n) => TriBool::True(Cert::with("kernel below the head has finite projective dimension", n)),
            PdStatus::Periodic { pre, period } => TriBool::False(Cert::with(
                "kernel below the head has a periodic minimal resolution",
                serde_json::json!({"pre": pre, "period": period}),
            )),
            PdStatus::DepthExceeded(d) => TriBool::Unknown(Cert::with("resolution depth exceeded", d)),
        }
    }

    /// Head spliced with `extra` terms of the tail (all of it when finite).
    pub fn truncated(&self, extra: usize) -> ProjComplex {
        let a = self.head.algebra().clone();
        let t = &self.tail;
        let mut terms = self.head.terms.clone();
        let mut diffs = self.head.diffs.clone();
        let mut lo = self.head.lo;
        let avail = t.terms.len().min(extra);
        if avail > 0 {
            let below = &t.terms[0];
            let bottom = self.head.term(lo).to_vec();
            let mut d = PMap::zero(&a, below, &bottom);
            let gens = t.augmentation.mul(&self.kernel_inclusion);
            let mut off = 0;
            for (s, &u) in below.iter().enumerate() {
                let pos = a.left_ideal_basis(u).iter().position(|&b| b == a.idempotent(u)).unwrap();
                let row: Vec<Scalar> = gens.row(off + pos).iter().map(|c| -c).collect();
                for (j, e) in split_components(&a, &bottom, &row).into_iter().enumerate() {
                    d.set(j, s, e);
                }
                off += a.left_ideal_basis(u).len();
            }
            terms.insert(0, below.clone());
            diffs.insert(0, d);
            lo -= 1;
            for i in 1..avail {
                terms.insert(0, t.terms[i].clone());
                diffs.insert(0, t.maps[i - 1].clone());
                lo -= 1;
            }
        }
        ProjComplex { alg: a, lo, terms, diffs }.trimmed()
    }

    /// Minimal bounded complex of projectives quasi-isomorphic to X, when
    /// the tail is finite.
    pub fn to_proj_complex(&self) -> Option<ProjComplex> {
        match self.tail.status {
            PdStatus::Finite(_) => Some(self.truncated(usize::MAX).minimalize()),
            _ => None,
        }
    }

    pub fn summary(&self) -> ResolutionSummary {
        ResolutionSummary { head_terms: self.head.terms.clone(), tail_status: self.tail.status }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fdmod::{quotient_module, simple_module};
    use crate::fixtures;
    use std::sync::Arc;

    #[test]
    fn stalk_of_quotient_by_e1() {
        let a = Arc::new(build_algebra(&fixtures::ladder_three()).unwrap());
        let m = quotient_module(&a, &[0]);
        let r = proj_resolve_complex(&ModComplex::stalk(&m, 0), 20);
        assert!(r.is_compact().is_true());
        let p = r.to_proj_complex().unwrap();
        assert!(p.is_complex() && p.is_minimal());
        assert_eq!(total_cohomology_dims(&p).iter().map(|x| x.1).sum::<usize>(), m.dim());
    }

    #[test]
    fn simple_with_periodic_resolution_is_not_compact() {
        let a = Arc::new(build_algebra(&fixtures::ladder_three()).unwrap());
        let s = simple_module(&a, 1);
        let r = proj_resolve_complex(&ModComplex::stalk(&s, 0), 20);
        assert!(r.is_compact().is_false());
        let s1 = simple_module(&a, 0);
        assert!(proj_resolve_complex(&ModComplex::stalk(&s1, 3), 20).is_compact().is_false());
        let p1 = crate::fdmod::projective_module(&a, 0);
        let r1 = proj_resolve_complex(&ModComplex::stalk(&p1, 3), 20);
        assert_eq!(r1.to_proj_complex().unwrap().terms, vec![vec![0]]);
    }

    #[test]
    fn resolving_a_projective_complex_recovers_it() {
        let a = Arc::new(build_algebra(&fixtures::radical_square_zero()).unwrap());
        let al = a.basis_vector(a.labels().iter().position(|l| l == "α").unwrap());
        let x = crate::kbproj::arrow_complex(&a, 1, 0, al, -1);
        let r = proj_resolve_complex(&x.to_mod_complex(), 20);
        let p = r.to_proj_complex().unwrap();
        assert_eq!(p.terms, x.terms);
        assert_eq!(p.lo, x.lo);
        assert_eq!(total_cohomology_dims(&p), total_cohomology_dims(&x));
    }
}
