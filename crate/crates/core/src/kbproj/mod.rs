//! Bounded complexes of finitely generated projectives: shifts, cones,
//! minimal forms, Hom in the homotopy category, endomorphism algebras and
//! projective resolutions of bounded module complexes.

mod hom;
mod resolve;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgRef, BasedAlgebra};
use crate::exactla::{Mat, Scalar};
use crate::fdmod::{proj_sum, PMap};

pub use hom::{end_algebra, exceptional_witness, hom_classes, hom_dim, is_exceptional, strict_action, EndAlgebra, HomotopyClassSpace, StrictAction};
pub use resolve::{proj_resolve_complex, resolve_head, total_cohomology_dims, ComplexResolution, ModComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("cone needs a chain map of shift 0, got shift {0}")]
    ShiftMismatch(i64),
    #[error("complexes live over different algebras")]
    AlgebraMismatch,
    #[error("differential shapes do not match the terms")]
    BadShape,
    #[error("d∘d ≠ 0")]
    NotAComplex,
    #[error("the complex is contractible")]
    Contractible,
}

/// Bounded complex of projectives. `terms[k]` lists the vertices of the
/// summands in degree lo + k; `diffs[k]` goes from degree lo + k to lo + k + 1.
#[derive(Clone, Debug)]
pub struct ProjComplex {
    alg: AlgRef,
    pub lo: i64,
    pub terms: Vec<Vec<usize>>,
    pub diffs: Vec<PMap>,
}

#[derive(Serialize)]
struct ComplexJson<'a> {
    lo: i64,
    hi: i64,
    terms: Vec<Vec<usize>>,
    vertices: &'a [Vec<usize>],
    differentials: &'a [PMap],
}

impl Serialize for ProjComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ComplexJson {
            lo: self.lo,
            hi: self.hi(),
            terms: (0..self.terms.len()).map(|k| self.multiplicities(self.lo + k as i64)).collect(),
            vertices: &self.terms,
            differentials: &self.diffs,
        }
        .serialize(s)
    }
}

/// Inverse of an element of e_v A e_v with nonzero e_v coefficient.
pub(crate) fn invert_local(a: &BasedAlgebra, x: &[Scalar], v: usize) -> Vec<Scalar> {
    let e = a.idempotent(v);
    let c = x[e].inv().expect("element is not invertible");
    // x = c (e_v - n) with n nilpotent
    let mut n: Vec<Scalar> = x.iter().map(|y| -(y * &c)).collect();
    n[e] += &a.field().one();
    let mut inv = a.basis_vector(e);
    let mut pw = n.clone();
    while !crate::exactla::is_zero_vec(&pw) {
        crate::exactla::axpy(&mut inv, &a.field().one(), &pw);
        pw = a.mul(&pw, &n);
    }
    inv.iter().map(|y| y * &c).collect()
}

/// One Gaussian cancellation: degree, the cancelled vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cancellation {
    pub degree: i64,
    pub vertex: usize,
}

impl ProjComplex {
    pub fn new(alg: &AlgRef, lo: i64, terms: Vec<Vec<usize>>, diffs: Vec<PMap>) -> Result<ProjComplex, ComplexError> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(ComplexError::BadShape);
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.src != terms[k] || d.tgt != terms[k + 1] {
                return Err(ComplexError::BadShape);
            }
        }
        let x = ProjComplex { alg: alg.clone(), lo, terms, diffs };
        if !x.is_complex() {
            return Err(ComplexError::NotAComplex);
        }
        Ok(x.trimmed())
    }

    pub fn zero(alg: &AlgRef) -> ProjComplex {
        ProjComplex { alg: alg.clone(), lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// ⊕ P_v over `vertices`, concentrated in one degree.
    pub fn stalk(alg: &AlgRef, vertices: &[usize], degree: i64) -> ProjComplex {
        ProjComplex { alg: alg.clone(), lo: degree, terms: vec![vertices.to_vec()], diffs: Vec::new() }.trimmed()
    }

    /// Two-term complex with `map` from degree `degree` to degree + 1.
    pub fn two_term(alg: &AlgRef, map: PMap, degree: i64) -> ProjComplex {
        ProjComplex { alg: alg.clone(), lo: degree, terms: vec![map.src.clone(), map.tgt.clone()], diffs: vec![map] }.trimmed()
    }

    pub fn algebra(&self) -> &AlgRef {
        &self.alg
    }

    /// Highest degree (lo - 1 for the zero complex).
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn amplitude(&self) -> i64 {
        if self.is_zero() { 0 } else { self.hi() - self.lo }
    }

    pub fn term(&self, n: i64) -> &[usize] {
        if n < self.lo || n > self.hi() {
            return &[];
        }
        &self.terms[(n - self.lo) as usize]
    }

    /// Differential from degree n to n + 1.
    pub fn diff(&self, n: i64) -> PMap {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            PMap::zero(&self.alg, self.term(n), self.term(n + 1))
        }
    }

    pub fn multiplicities(&self, n: i64) -> Vec<usize> {
        let mut m = vec![0; self.alg.num_vertices()];
        for &v in self.term(n) {
            m[v] += 1;
        }
        m
    }

    /// Total vector-space dimension of all terms.
    pub fn total_dim(&self) -> usize {
        self.terms.iter().flatten().map(|&v| self.alg.left_ideal_basis(v).len()).sum()
    }

    pub fn degree_dim(&self, n: i64) -> usize {
        self.term(n).iter().map(|&v| self.alg.left_ideal_basis(v).len()).sum()
    }

    /// Drops zero terms at both ends.
    pub fn trimmed(mut self) -> ProjComplex {
        while self.terms.last().is_some_and(|t| t.is_empty()) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.first().is_some_and(|t| t.is_empty()) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.terms.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
        self
    }

    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| w[1].compose(&self.alg, &w[0]).is_zero())
    }

    /// All differential entries lie in the radical.
    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|d| d.is_radical(&self.alg))
    }

    /// X[n]: degree k holds X^{k+n}, differentials multiplied by (-1)^n.
    pub fn shift(&self, n: i64) -> ProjComplex {
        let f = self.alg.field();
        let diffs = if n % 2 == 0 { self.diffs.clone() } else { self.diffs.iter().map(|d| d.neg(f)).collect() };
        ProjComplex { alg: self.alg.clone(), lo: if self.is_zero() { 0 } else { self.lo - n }, terms: self.terms.clone(), diffs }
    }

    pub fn direct_sum(&self, other: &ProjComplex) -> ProjComplex {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let a = &self.alg;
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let mut t = self.term(n).to_vec();
            t.extend(other.term(n));
            terms.push(t);
            if n < hi {
                diffs.push(block_diag(a, &self.diff(n), &other.diff(n)));
            }
        }
        ProjComplex { alg: a.clone(), lo, terms, diffs }.trimmed()
    }

    /// Matrices of the differentials in the bases of proj_sum.
    pub fn diff_matrix(&self, n: i64) -> Mat {
        pmap_matrix(&self.alg, &self.diff(n))
    }

    /// Homotopy-equivalent complex with radical differentials.
    pub fn minimalize(&self) -> ProjComplex {
        self.minimalize_with_certificate().0
    }

    /// Minimal form together with the list of cancelled pairs.
    pub fn minimalize_with_certificate(&self) -> (ProjComplex, Vec<Cancellation>) {
        let a = self.alg.clone();
        let mut x = self.clone();
        let mut cert = Vec::new();
        'outer: loop {
            for k in 0..x.diffs.len() {
                let d = &x.diffs[k];
                for j in 0..d.tgt.len() {
                    for i in 0..d.src.len() {
                        let v = d.src[i];
                        if d.tgt[j] != v || d.entry(j, i)[a.idempotent(v)].is_zero() {
                            continue;
                        }
                        cert.push(Cancellation { degree: x.lo + k as i64, vertex: v });
                        x = x.cancel(k, j, i);
                        continue 'outer;
                    }
                }
            }
            break;
        }
        (x.trimmed(), cert)
    }

    /// Gaussian elimination of the invertible entry (j0, i0) of diffs[k].
    fn cancel(&self, k: usize, j0: usize, i0: usize) -> ProjComplex {
        let a = &self.alg;
        let d = &self.diffs[k];
        let v = d.src[i0];
        let ainv = invert_local(a, d.entry(j0, i0), v);
        let rows: Vec<usize> = (0..d.tgt.len()).filter(|&j| j != j0).collect();
        let cols: Vec<usize> = (0..d.src.len()).filter(|&i| i != i0).collect();
        let mut nd = d.sub(&rows, &cols);
        for (r, &j) in rows.iter().enumerate() {
            let c = d.entry(j, i0);
            if crate::exactla::is_zero_vec(c) {
                continue;
            }
            let ca = a.mul(c, &ainv);
            for (s, &i) in cols.iter().enumerate() {
                let b = d.entry(j0, i);
                if crate::exactla::is_zero_vec(b) {
                    continue;
                }
                let corr = a.mul(&ca, b);
                crate::exactla::axpy(nd.entry_mut(r, s), &-a.field().one(), &corr);
            }
        }
        let mut x = self.clone();
        x.diffs[k] = nd;
        if k > 0 {
            let p = &x.diffs[k - 1];
            let all: Vec<usize> = (0..p.src.len()).collect();
            x.diffs[k - 1] = p.sub(&cols, &all);
        }
        if k + 1 < x.diffs.len() {
            let nx = &x.diffs[k + 1];
            let all: Vec<usize> = (0..nx.tgt.len()).collect();
            x.diffs[k + 1] = nx.sub(&all, &rows);
        }
        x.terms[k] = cols.iter().map(|&i| d.src[i]).collect();
        x.terms[k + 1] = rows.iter().map(|&j| d.tgt[j]).collect();
        x
    }

    /// Complex of modules with the same terms.
    pub fn to_mod_complex(&self) -> ModComplex {
        let terms = (self.lo..=self.hi()).map(|n| proj_sum(&self.alg, self.term(n)).0).collect();
        let diffs = (self.lo..self.hi()).map(|n| self.diff_matrix(n)).collect();
        ModComplex::new(&self.alg, self.lo, terms, diffs)
    }
}

/// Matrix of a map between sums of projectives, allowing empty sides.
pub fn pmap_matrix(a: &AlgRef, d: &PMap) -> Mat {
    if d.src.is_empty() || d.tgt.is_empty() {
        let r = d.src.iter().map(|&v| a.left_ideal_basis(v).len()).sum();
        let c = d.tgt.iter().map(|&v| a.left_ideal_basis(v).len()).sum();
        return Mat::zeros(a.field(), r, c);
    }
    d.to_matrix(a)
}

fn block_diag(a: &BasedAlgebra, x: &PMap, y: &PMap) -> PMap {
    let top = x.hstack(&PMap::zero(a, &y.src, &x.tgt));
    let bottom = PMap::zero(a, &x.src, &y.tgt).hstack(y);
    top.vstack(&bottom)
}

/// Degreewise maps f^k: X^k → Y^{k+shift}, indexed by the degree of X.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ProjComplex,
    pub target: ProjComplex,
    pub shift: i64,
    maps: Vec<PMap>,
}

impl ChainMap {
    /// Maps for degrees source.lo ..= source.hi.
    pub fn new(source: &ProjComplex, target: &ProjComplex, shift: i64, maps: Vec<PMap>) -> ChainMap {
        assert_eq!(maps.len(), source.terms.len());
        ChainMap { source: source.clone(), target: target.clone(), shift, maps }
    }

    pub fn zero(source: &ProjComplex, target: &ProjComplex, shift: i64) -> ChainMap {
        let a = source.algebra();
        let maps = (source.lo..=source.hi()).map(|k| PMap::zero(a, source.term(k), target.term(k + shift))).collect();
        ChainMap::new(source, target, shift, maps)
    }

    pub fn identity(x: &ProjComplex) -> ChainMap {
        let a = x.algebra();
        let maps = (x.lo..=x.hi()).map(|k| PMap::identity(a, x.term(k))).collect();
        ChainMap::new(x, x, 0, maps)
    }

    /// f^k (zero outside the source range).
    pub fn at(&self, k: i64) -> PMap {
        if k < self.source.lo || k > self.source.hi() {
            return PMap::zero(self.source.algebra(), self.source.term(k), self.target.term(k + self.shift));
        }
        self.maps[(k - self.source.lo) as usize].clone()
    }

    pub fn maps(&self) -> &[PMap] {
        &self.maps
    }

    /// (-1)^n d_Y f^k = f^{k+1} d_X^k for all k.
    pub fn is_chain_map(&self) -> bool {
        let a = self.source.algebra();
        let sign = if self.shift % 2 == 0 { a.field().one() } else { -a.field().one() };
        (self.source.lo - 1..=self.source.hi()).all(|k| {
            let lhs = self.target.diff(k + self.shift).compose(a, &self.at(k)).scale(&sign);
            let rhs = self.at(k + 1).compose(a, &self.source.diff(k));
            lhs == rhs
        })
    }

    /// self ∘ other for shift-0 maps.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        let a = self.source.algebra();
        let maps = (other.source.lo..=other.source.hi())
            .map(|k| self.at(k + other.shift).compose(a, &other.at(k)))
            .collect();
        ChainMap::new(&other.source, &self.target, self.shift + other.shift, maps)
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let maps = self.maps.iter().zip(&other.maps).map(|(x, y)| x.add(y)).collect();
        ChainMap { maps, ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        ChainMap { maps: self.maps.iter().map(|m| m.scale(c)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }
}

/// Cone(f) for f: X → Y: degree k is Y^k ⊕ X^{k+1} with differential
/// [[d_Y, f], [0, -d_X]].
pub fn cone(f: &ChainMap) -> Result<ProjComplex, ComplexError> {
    if f.shift != 0 {
        return Err(ComplexError::ShiftMismatch(f.shift));
    }
    let (x, y) = (&f.source, &f.target);
    let a = x.algebra();
    if !std::sync::Arc::ptr_eq(a, y.algebra()) && !a.same_structure(y.algebra()) {
        return Err(ComplexError::AlgebraMismatch);
    }
    if x.is_zero() {
        return Ok(y.clone());
    }
    let lo = if y.is_zero() { x.lo - 1 } else { y.lo.min(x.lo - 1) };
    let hi = if y.is_zero() { x.hi() - 1 } else { y.hi().max(x.hi() - 1) };
    let fl = a.field();
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for k in lo..=hi {
        let mut t = y.term(k).to_vec();
        t.extend(x.term(k + 1));
        terms.push(t);
        if k < hi {
            let top = y.diff(k).hstack(&f.at(k + 1));
            let bottom = PMap::zero(a, y.term(k), x.term(k + 2)).hstack(&x.diff(k + 1).neg(fl));
            diffs.push(top.vstack(&bottom));
        }
    }
    Ok(ProjComplex { alg: a.clone(), lo, terms, diffs }.trimmed())
}

/// Complex P_u → P_v given by a single element of e_v A e_u, in degrees
/// `degree`, `degree + 1`.
pub fn arrow_complex(a: &AlgRef, u: usize, v: usize, element: Vec<Scalar>, degree: i64) -> ProjComplex {
    let mut m = PMap::zero(a, &[u], &[v]);
    m.set(0, 0, element);
    ProjComplex::two_term(a, m, degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fixtures;
    use std::sync::Arc;

    fn ladder() -> AlgRef {
        Arc::new(build_algebra(&fixtures::ladder_three()).unwrap())
    }

    fn elem(a: &AlgRef, label: &str) -> Vec<Scalar> {
        a.basis_vector(a.labels().iter().position(|l| l == label).unwrap())
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        let a = ladder();
        let p = ProjComplex::stalk(&a, &[1], 0);
        let c = cone(&ChainMap::identity(&p)).unwrap();
        assert_eq!(c.terms, vec![vec![1], vec![1]]);
        assert!(c.minimalize().is_zero());
    }

    #[test]
    fn shifts_and_cones() {
        let a = ladder();
        let m = arrow_complex(&a, 1, 0, elem(&a, "α"), -1);
        assert_eq!(m.shift(1).shift(-1).terms, m.terms);
        assert_eq!(m.shift(1).lo, -2);
        assert!(m.is_complex() && m.is_minimal());
        // Cone(P2 → P1) from the chain map between stalks
        let p2 = ProjComplex::stalk(&a, &[1], 0);
        let p1 = ProjComplex::stalk(&a, &[0], 0);
        let mut f = PMap::zero(&a, &[1], &[0]);
        f.set(0, 0, elem(&a, "α"));
        let c = cone(&ChainMap::new(&p2, &p1, 0, vec![f])).unwrap();
        assert_eq!((c.lo, c.terms.clone()), (-1, vec![vec![1], vec![0]]));
    }

    #[test]
    fn minimalize_strips_contractible_summand() {
        let a = ladder();
        // P2 -β-> P2 -α-> P1 plus P2 -id-> P2 in degrees 0, 1
        let mut d0 = PMap::zero(&a, &[1], &[1]);
        d0.set(0, 0, elem(&a, "β"));
        let mut d1 = PMap::zero(&a, &[1], &[0]);
        d1.set(0, 0, elem(&a, "α"));
        let x = ProjComplex::new(&a, -1, vec![vec![1], vec![1], vec![0]], vec![d0, d1]).unwrap();
        let id = ProjComplex::two_term(&a, PMap::identity(&a, &[1]), 0);
        let y = x.direct_sum(&id);
        assert_eq!(y.terms, vec![vec![1], vec![1, 1], vec![0, 1]]);
        let (m, cert) = y.minimalize_with_certificate();
        assert_eq!(m.terms, x.terms);
        assert_eq!(cert.len(), 1);
        assert!(m.is_complex() && m.is_minimal());
    }
}
