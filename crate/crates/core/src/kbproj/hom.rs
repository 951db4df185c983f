use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{pmap_matrix, ChainMap, ComplexError, ProjComplex};
use crate::algebra::{opposite, rebase_by_radical, AlgRef, BasedAlgebra, Origin};
use crate::exactla::{Echelon, Mat, Scalar};
use crate::fdmod::{FDModule, PMap};

/// Coordinates of a degreewise family X^k → Y^{k+shift}: one variable per
/// summand pair and corner basis element.
struct Layout {
    x: ProjComplex,
    y: ProjComplex,
    shift: i64,
    vars: Vec<(usize, usize, usize, usize)>,
}

impl Layout {
    fn new(x: &ProjComplex, y: &ProjComplex, shift: i64) -> Layout {
        let a = x.algebra();
        let mut vars = Vec::new();
        for (d, k) in (x.lo..=x.hi()).enumerate() {
            let (s, t) = (x.term(k), y.term(k + shift));
            for (j, &w) in t.iter().enumerate() {
                for (i, &u) in s.iter().enumerate() {
                    for b in a.corner_basis(w, u) {
                        vars.push((d, j, i, b));
                    }
                }
            }
        }
        Layout { x: x.clone(), y: y.clone(), shift, vars }
    }

    fn len(&self) -> usize {
        self.vars.len()
    }

    fn zero_maps(&self) -> Vec<PMap> {
        let a = self.x.algebra();
        (self.x.lo..=self.x.hi()).map(|k| PMap::zero(a, self.x.term(k), self.y.term(k + self.shift))).collect()
    }

    fn to_maps(&self, c: &[Scalar]) -> Vec<PMap> {
        let mut maps = self.zero_maps();
        for (v, &(d, j, i, b)) in self.vars.iter().enumerate() {
            if !c[v].is_zero() {
                maps[d].entry_mut(j, i)[b] += &c[v];
            }
        }
        maps
    }

    fn coords(&self, maps: &[PMap]) -> Vec<Scalar> {
        self.vars.iter().map(|&(d, j, i, b)| maps[d].entry(j, i)[b].clone()).collect()
    }

    fn chain_map(&self, c: &[Scalar]) -> ChainMap {
        ChainMap::new(&self.x, &self.y, self.shift, self.to_maps(c))
    }

    fn elementary(&self, v: usize) -> Vec<PMap> {
        let a = self.x.algebra();
        let mut maps = self.zero_maps();
        let (d, j, i, b) = self.vars[v];
        maps[d].set(j, i, a.basis_vector(b));
        maps
    }
}

fn sign(a: &BasedAlgebra, n: i64) -> Scalar {
    if n % 2 == 0 { a.field().one() } else { -a.field().one() }
}

fn flatten(out: &mut Vec<Scalar>, m: &PMap) {
    for e in m.entries() {
        out.extend(e.iter().cloned());
    }
}

/// (-1)^n d_Y f^k - f^{k+1} d_X^k for all k, flattened.
fn defect(l: &Layout, maps: &[PMap]) -> Vec<Scalar> {
    let (x, y, n) = (&l.x, &l.y, l.shift);
    let a = x.algebra();
    let s = sign(a, n);
    let at = |k: i64| -> PMap {
        if k < x.lo || k > x.hi() {
            PMap::zero(a, x.term(k), y.term(k + n))
        } else {
            maps[(k - x.lo) as usize].clone()
        }
    };
    let mut out = Vec::new();
    for k in x.lo..=x.hi() {
        let lhs = y.diff(k + n).compose(a, &at(k)).scale(&s);
        let rhs = at(k + 1).compose(a, &x.diff(k));
        flatten(&mut out, &lhs.add(&rhs.neg(a.field())));
    }
    out
}

/// f^k = (-1)^n d_Y h^k + h^{k+1} d_X^k for h of shift n - 1.
fn boundary(l: &Layout, hl: &Layout, h: &[PMap]) -> Vec<PMap> {
    let (x, y, n) = (&l.x, &l.y, l.shift);
    let a = x.algebra();
    let s = sign(a, n);
    let at = |k: i64| -> PMap {
        if k < x.lo || k > x.hi() {
            PMap::zero(a, x.term(k), y.term(k + n - 1))
        } else {
            h[(k - x.lo) as usize].clone()
        }
    };
    let _ = hl;
    (x.lo..=x.hi())
        .map(|k| {
            let p = y.diff(k + n - 1).compose(a, &at(k)).scale(&s);
            p.add(&at(k + 1).compose(a, &x.diff(k)))
        })
        .collect()
}

/// Chain maps X → Y[n] modulo null-homotopic ones.
#[derive(Clone, Debug)]
pub struct HomotopyClassSpace {
    pub dim: usize,
    pub cycles_dim: usize,
    pub nullhomotopic_dim: usize,
    /// chain maps whose classes form a basis
    pub representatives: Vec<ChainMap>,
}

struct Spaces {
    layout: Layout,
    cycles: Vec<Vec<Scalar>>,
    boundaries: Vec<Vec<Scalar>>,
}

fn spaces(x: &ProjComplex, y: &ProjComplex, n: i64) -> Spaces {
    let a = x.algebra();
    let f = a.field();
    let layout = Layout::new(x, y, n);
    if layout.len() == 0 {
        return Spaces { layout, cycles: Vec::new(), boundaries: Vec::new() };
    }
    let rows: Vec<Vec<Scalar>> = (0..layout.len()).into_par_iter().map(|v| defect(&layout, &layout.elementary(v))).collect();
    let width = rows[0].len();
    let cycles = if width == 0 {
        (0..layout.len()).map(|v| f.unit_vector(layout.len(), v)).collect()
    } else {
        Mat::from_rows(f, width, rows).transpose().kernel_vectors()
    };
    let hl = Layout::new(x, y, n - 1);
    let boundaries: Vec<Vec<Scalar>> =
        (0..hl.len()).into_par_iter().map(|v| layout.coords(&boundary(&layout, &hl, &hl.elementary(v)))).collect();
    Spaces { layout, cycles, boundaries }
}

/// Hom_K(X, Y[n]) with representatives.
pub fn hom_classes(x: &ProjComplex, y: &ProjComplex, n: i64) -> HomotopyClassSpace {
    let sp = spaces(x, y, n);
    let f = x.algebra().field();
    let mut ech = Echelon::new(f, sp.layout.len());
    for b in &sp.boundaries {
        ech.insert(b);
    }
    let null = ech.dim();
    let mut representatives = Vec::new();
    for z in &sp.cycles {
        if ech.insert(z) {
            representatives.push(sp.layout.chain_map(z));
        }
    }
    HomotopyClassSpace { dim: representatives.len(), cycles_dim: sp.cycles.len(), nullhomotopic_dim: null, representatives }
}

/// dim Hom_K(X, Y[n]).
pub fn hom_dim(x: &ProjComplex, y: &ProjComplex, n: i64) -> usize {
    hom_classes(x, y, n).dim
}

/// End_K(X) with its basis rebased so the radical comes last, and chain
/// map representatives of the new basis.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub algebra: AlgRef,
    pub reps: Vec<ChainMap>,
    pub nullhomotopic_dim: usize,
}

pub fn end_algebra(x: &ProjComplex) -> Result<EndAlgebra, ComplexError> {
    let a = x.algebra();
    let f = a.field();
    let sp = spaces(x, x, 0);
    let l = &sp.layout;
    let mut ech = Echelon::tracking(f, l.len());
    for b in &sp.boundaries {
        ech.insert(b);
    }
    let null = ech.dim();
    let nb = sp.boundaries.len();
    let id = l.coords(ChainMap::identity(x).maps());
    let mut reps: Vec<Vec<Scalar>> = Vec::new();
    for z in std::iter::once(&id).chain(&sp.cycles) {
        if ech.insert(z) {
            reps.push(z.clone());
        }
    }
    let m = reps.len();
    if m == 0 {
        return Err(ComplexError::Contractible);
    }
    // every inserted vector counts as a generator, also failed ones
    let gen_pos: Vec<usize> = {
        let mut probe = Echelon::new(f, l.len());
        for b in &sp.boundaries {
            probe.insert(b);
        }
        let mut pos = Vec::new();
        for (k, z) in std::iter::once(&id).chain(&sp.cycles).enumerate() {
            if probe.insert(z) {
                pos.push(nb + k);
            }
        }
        pos
    };
    let express = |c: &[Scalar]| -> Vec<Scalar> {
        let co = ech.coordinates(c).expect("composite is not a cycle");
        gen_pos.iter().map(|&p| co[p].clone()).collect()
    };
    let chain: Vec<ChainMap> = reps.iter().map(|r| l.chain_map(r)).collect();
    let table: Vec<Vec<(usize, Scalar)>> = (0..m * m)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / m, ij % m);
            let c = l.coords(chain[i].compose(&chain[j]).maps());
            express(&c).into_iter().enumerate().filter(|(_, s)| !s.is_zero()).collect()
        })
        .collect();
    let unit = express(&id);
    let labels = (0..m).map(|i| format!("r{i}")).collect();
    let (alg, rows) = rebase_by_radical(f, labels, table, unit, Origin::Endomorphism).map_err(|_| ComplexError::BadShape)?;
    let new_reps = rows
        .iter()
        .map(|row| {
            let mut c = f.zeros(l.len());
            for (k, s) in row.iter().enumerate() {
                crate::exactla::axpy(&mut c, s, &reps[k]);
            }
            l.chain_map(&c)
        })
        .collect();
    Ok(EndAlgebra { algebra: Arc::new(alg), reps: new_reps, nullhomotopic_dim: null })
}

/// Hom_K(X, X[n]) = 0 for n ≠ 0. The input is minimalized first; for a
/// minimal complex Hom(X, X[n]) vanishes for |n| > amplitude.
pub fn is_exceptional(x: &ProjComplex) -> bool {
    let m = x.minimalize();
    !m.is_zero() && exceptional_witness(&m).is_none()
}

/// First (n, dim Hom(X, X[n])) with n ≠ 0 and nonzero Hom, for minimal X.
pub fn exceptional_witness(x: &ProjComplex) -> Option<(i64, usize)> {
    let amp = x.amplitude();
    let mut bad: Vec<(i64, usize)> = (-amp..=amp)
        .into_par_iter()
        .filter(|&n| n != 0)
        .map(|n| (n, hom_dim(x, x, n)))
        .filter(|&(_, d)| d != 0)
        .collect();
    bad.sort_by_key(|&(n, _)| (n.abs(), n));
    bad.into_iter().next()
}

/// X as a complex of right modules over End(X)^op, when the chosen
/// representatives multiply exactly (not only up to homotopy).
#[derive(Clone, Debug, Serialize)]
pub struct StrictAction {
    pub component_dims: Vec<(i64, usize)>,
    pub cohomology_dims: Vec<(i64, usize)>,
    #[serde(skip)]
    pub modules: Vec<FDModule>,
}

/// Fails with the first pair (i, j) whose product only holds up to homotopy.
pub fn strict_action(x: &ProjComplex, end: &EndAlgebra) -> Result<StrictAction, (usize, usize)> {
    let e = &end.algebra;
    let a = x.algebra();
    let f = a.field();
    let m = e.dim();
    let combine = |c: &[Scalar]| -> ChainMap {
        let mut out = ChainMap::zero(x, x, 0);
        for (k, s) in c.iter().enumerate() {
            if !s.is_zero() {
                out = out.add(&end.reps[k].scale(s));
            }
        }
        out
    };
    if combine(e.unit()).maps() != ChainMap::identity(x).maps() {
        return Err((m, m));
    }
    for i in 0..m {
        for j in 0..m {
            let lhs = end.reps[i].compose(&end.reps[j]);
            if lhs.maps() != combine(&e.product_vec(i, j)).maps() {
                return Err((i, j));
            }
        }
    }
    let eop: AlgRef = Arc::new(opposite(e));
    let mut modules = Vec::new();
    let mut component_dims = Vec::new();
    for k in x.lo..=x.hi() {
        let d = x.degree_dim(k);
        let action = (0..m).map(|b| pmap_matrix(a, &end.reps[b].at(k))).collect();
        modules.push(FDModule::from_parts(eop.clone(), action, vec![0; d]));
        component_dims.push((k, d));
    }
    let _ = f;
    Ok(StrictAction { component_dims, cohomology_dims: super::total_cohomology_dims(x), modules })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, fingerprint, is_commutative, is_local};
    use crate::fixtures;
    use crate::kbproj::arrow_complex;

    fn alg(q: crate::algebra::QuiverPresentation) -> AlgRef {
        Arc::new(build_algebra(&q).unwrap())
    }

    fn elem(a: &AlgRef, label: &str) -> Vec<Scalar> {
        a.basis_vector(a.labels().iter().position(|l| l == label).unwrap())
    }

    #[test]
    fn hom_between_stalks_is_hom_between_projectives() {
        let a = alg(fixtures::ladder_three());
        let p1 = ProjComplex::stalk(&a, &[0], 0);
        let p2 = ProjComplex::stalk(&a, &[1], 0);
        assert_eq!(hom_dim(&p1, &p1, 0), 1);
        assert_eq!(hom_dim(&p2, &p2, 0), 2);
        assert_eq!(hom_dim(&p2, &p1, 0), 1);
        assert_eq!(hom_dim(&p1, &p2, 0), 0);
        assert_eq!(hom_dim(&p1, &p1, 1), 0);
        assert!(is_exceptional(&p1) && is_exceptional(&p2));
    }

    #[test]
    fn cone_of_alpha_is_exceptional() {
        let a = alg(fixtures::ladder_three());
        let m = arrow_complex(&a, 1, 0, elem(&a, "α"), -1);
        assert_eq!(hom_dim(&m, &m, 0), 2);
        assert!(is_exceptional(&m) && is_exceptional(&m.shift(3)));
        let e = end_algebra(&m).unwrap();
        assert_eq!(e.algebra.dim(), 2);
        assert!(e.algebra.check_associative());
    }

    #[test]
    fn end_of_two_term_complex_over_rsz() {
        let a = alg(fixtures::radical_square_zero());
        let x = arrow_complex(&a, 1, 0, elem(&a, "α"), -1);
        let e = end_algebra(&x).unwrap();
        assert_eq!(e.algebra.dim(), 3);
        assert!(e.algebra.check_associative() && e.algebra.check_unit());
        assert!(is_commutative(&e.algebra));
        assert!(is_local(&e.algebra).is_true());
        let fp = fingerprint(&e.algebra);
        assert_eq!(fp.dim, e.algebra.dim());
        let s = strict_action(&x, &e).unwrap();
        assert_eq!(s.component_dims.len(), 2);
        assert!(s.modules.iter().all(|m| m.check()));
    }
}
