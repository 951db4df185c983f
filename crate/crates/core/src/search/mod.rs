//! Bounded searches: exceptional objects of K^b(proj A) over a small
//! finite field, stratification trees over vertex idempotents, and the
//! derived Jordan–Hölder comparison of their leaves.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{fingerprint, is_local, AlgRef, AlgebraError, AlgebraFingerprint, BasedAlgebra};
use crate::exactla::{Field, Mat, Scalar};
use crate::fdmod::PMap;
use crate::kbproj::{end_algebra, hom_dim, pmap_matrix, ProjComplex};
use crate::ladder::vertex_subsets;
use crate::recollement::{build_recollement, homotopy_isomorphic, stratifying_status};
use crate::tri::TriBool;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("search space of about {estimate} complexes exceeds the budget {budget}")]
    CapTooLarge { estimate: u128, budget: u128 },
    #[error("exhaustive search needs a finite field")]
    InfiniteField,
    #[error("recursion limit {0} reached")]
    RecursionLimit(usize),
    #[error("trees have different root algebras")]
    RootMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub const DEFAULT_BUDGET: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchCaps {
    /// number of nonzero degrees
    pub max_len: usize,
    /// number of indecomposable summands per degree
    pub max_mult: usize,
    pub budget: u128,
}

impl SearchCaps {
    pub fn new(max_len: usize, max_mult: usize) -> SearchCaps {
        SearchCaps { max_len, max_mult, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub complex: ProjComplex,
    pub end: AlgebraFingerprint,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalCatalog {
    pub field: Field,
    pub caps: SearchCaps,
    /// differentials enumerated
    pub enumerated: u64,
    /// exceptional indecomposables before removing isomorphic copies
    pub candidates: usize,
    pub entries: Vec<CatalogEntry>,
}

/// Multisets of vertices of size 1..=m as sorted lists.
fn multisets(r: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(r: usize, m: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == m {
            return;
        }
        for v in from..r {
            cur.push(v);
            rec(r, m, v, cur, out);
            cur.pop();
        }
    }
    rec(r, m, 0, &mut cur, &mut out);
    out
}

/// Radical coordinates of maps ⊕P_src → ⊕P_tgt: (j, i, basis element).
fn radical_coords(a: &BasedAlgebra, src: &[usize], tgt: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (j, &v) in tgt.iter().enumerate() {
        for (i, &u) in src.iter().enumerate() {
            for b in a.corner_basis(v, u) {
                if a.is_radical(b) {
                    out.push((j, i, b));
                }
            }
        }
    }
    out
}

fn pmap_of(a: &BasedAlgebra, src: &[usize], tgt: &[usize], coords: &[(usize, usize, usize)], v: &[Scalar]) -> PMap {
    let mut m = PMap::zero(a, src, tgt);
    for (&(j, i, b), c) in coords.iter().zip(v) {
        if !c.is_zero() {
            let e = m.entry_mut(j, i);
            e[b] = &e[b] + c;
        }
    }
    m
}

/// Calls `f` on every combination of `basis` with coefficients in the
/// finite field, skipping zero.
fn for_each_nonzero(field: Field, width: usize, basis: &[Vec<Scalar>], f: &mut dyn FnMut(Vec<Scalar>)) {
    let elems = field.elements().expect("finite field");
    let mut idx = vec![0usize; basis.len()];
    loop {
        let mut k = 0;
        while k < idx.len() && idx[k] + 1 == elems.len() {
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            return;
        }
        idx[k] += 1;
        let mut v = field.zeros(width);
        for (b, &i) in basis.iter().zip(&idx) {
            if i != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = &*x + &(&elems[i] * y);
                }
            }
        }
        f(v);
    }
}

/// Exceptional with the cheapest shifts first.
fn exceptional(x: &ProjComplex) -> bool {
    let amp = x.amplitude();
    (1..=amp).rev().all(|n| hom_dim(x, x, n) == 0 && hom_dim(x, x, -n) == 0)
}

/// Term sequences worth enumerating. A shared vertex between the lowest
/// and highest terms gives a nonzero map X → X[amplitude] with invertible
/// top, so such sequences are dropped; every differential must admit a
/// nonzero radical map.
fn configurations(a: &BasedAlgebra, caps: &SearchCaps) -> Vec<Vec<Vec<usize>>> {
    let ms = multisets(a.num_vertices(), caps.max_mult);
    let mut out: Vec<Vec<Vec<usize>>> = (0..a.num_vertices()).map(|v| vec![vec![v]]).collect();
    let mut layer: Vec<Vec<Vec<usize>>> = ms.iter().map(|m| vec![m.clone()]).collect();
    for _ in 2..=caps.max_len {
        let mut next = Vec::new();
        for seq in &layer {
            for m in &ms {
                if radical_coords(a, seq.last().unwrap(), m).is_empty() {
                    continue;
                }
                let mut s = seq.clone();
                s.push(m.clone());
                next.push(s);
            }
        }
        for s in &next {
            let (first, last) = (&s[0], s.last().unwrap());
            if first.iter().all(|v| !last.contains(v)) {
                out.push(s.clone());
            }
        }
        layer = next;
    }
    out
}

/// Invertible matrices over F_p of size m, with inverses, row-major.
fn gl(p: u64, m: usize) -> Vec<(Vec<u64>, Vec<u64>)> {
    let n = m * m;
    let total = (p as u128).pow(n as u32);
    let mut all: Vec<Vec<u64>> = Vec::new();
    for code in 0..total {
        let mut c = code;
        let g: Vec<u64> = (0..n)
            .map(|_| {
                let d = (c % p as u128) as u64;
                c /= p as u128;
                d
            })
            .collect();
        all.push(g);
    }
    let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut z = vec![0u64; n];
        for i in 0..m {
            for k in 0..m {
                for j in 0..m {
                    z[i * m + j] = (z[i * m + j] + x[i * m + k] * y[k * m + j]) % p;
                }
            }
        }
        z
    };
    let id: Vec<u64> = (0..n).map(|i| u64::from(i / m == i % m)).collect();
    let mut out = Vec::new();
    for g in &all {
        if let Some(h) = all.iter().find(|h| mul(g, h) == id) {
            out.push((g.clone(), h.clone()));
        }
    }
    out
}

/// Base changes of ⊕P_v acting on tops: products of GL over the blocks
/// of equal vertices, as full matrices.
fn block_group(p: u64, term: &[usize]) -> Vec<(Vec<u64>, Vec<u64>)> {
    let m = term.len();
    let mut out: Vec<(Vec<u64>, Vec<u64>)> = vec![(vec![0; m * m], vec![0; m * m])];
    let mut start = 0;
    while start < m {
        let end = start + term[start..].iter().take_while(|&&v| v == term[start]).count();
        let k = end - start;
        let blocks = gl(p, k);
        let mut next = Vec::with_capacity(out.len() * blocks.len());
        for (g, h) in &out {
            for (bg, bh) in &blocks {
                let (mut g, mut h) = (g.clone(), h.clone());
                for r in 0..k {
                    for c in 0..k {
                        g[(start + r) * m + start + c] = bg[r * k + c];
                        h[(start + r) * m + start + c] = bh[r * k + c];
                    }
                }
                next.push((g, h));
            }
        }
        out = next;
        start = end;
    }
    out
}

const GAUGE_LIMIT: usize = 4096;

/// Orbit representatives under top-level base change: a tuple of
/// differentials is kept only if no group element makes its coordinate
/// encoding lexicographically smaller.
struct Gauge {
    p: u64,
    groups: Vec<Vec<(Vec<u64>, Vec<u64>)>>,
    /// per differential: (src len, tgt len, offsets[j][i], lengths[j][i])
    shapes: Vec<(usize, usize, Vec<Vec<usize>>, Vec<Vec<usize>>)>,
}

impl Gauge {
    fn new(a: &BasedAlgebra, terms: &[Vec<usize>], p: u64) -> Option<Gauge> {
        let groups: Vec<_> = terms.iter().map(|t| block_group(p, t)).collect();
        let size = groups.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.len()))?;
        if size > GAUGE_LIMIT || size == 1 {
            return None;
        }
        let shapes = terms
            .windows(2)
            .map(|w| {
                let (src, tgt) = (&w[0], &w[1]);
                let mut off = vec![vec![0; src.len()]; tgt.len()];
                let mut len = vec![vec![0; src.len()]; tgt.len()];
                let mut o = 0;
                for (j, &v) in tgt.iter().enumerate() {
                    for (i, &u) in src.iter().enumerate() {
                        let n = a.corner_basis(v, u).into_iter().filter(|&b| a.is_radical(b)).count();
                        off[j][i] = o;
                        len[j][i] = n;
                        o += n;
                    }
                }
                (src.len(), tgt.len(), off, len)
            })
            .collect();
        Some(Gauge { p, groups, shapes })
    }

    fn transform(&self, k: usize, d: &[u64], g_tgt: &[u64], h_src: &[u64]) -> Vec<u64> {
        let (ns, nt, off, len) = &self.shapes[k];
        let p = self.p;
        let mut out = vec![0u64; d.len()];
        for j in 0..*nt {
            for i in 0..*ns {
                for jj in 0..*nt {
                    let gj = g_tgt[j * nt + jj];
                    if gj == 0 {
                        continue;
                    }
                    for ii in 0..*ns {
                        let hi = h_src[ii * ns + i];
                        if hi == 0 || len[jj][ii] != len[j][i] {
                            continue;
                        }
                        let c = gj * hi % p;
                        for b in 0..len[j][i] {
                            let o = off[j][i] + b;
                            out[o] = (out[o] + c * d[off[jj][ii] + b]) % p;
                        }
                    }
                }
            }
        }
        out
    }

    fn is_canonical(&self, enc: &[Vec<u64>]) -> bool {
        let sizes: Vec<usize> = self.groups.iter().map(|g| g.len()).collect();
        let mut idx = vec![0usize; sizes.len()];
        let mine: Vec<u64> = enc.concat();
        loop {
            let mut k = 0;
            while k < idx.len() && idx[k] + 1 == sizes[k] {
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                return true;
            }
            idx[k] += 1;
            let mut other = Vec::with_capacity(mine.len());
            for (kk, d) in enc.iter().enumerate() {
                let g = &self.groups[kk + 1][idx[kk + 1]].0;
                let h = &self.groups[kk][idx[kk]].1;
                other.extend(self.transform(kk, d, g, h));
            }
            if other < mine {
                return false;
            }
        }
    }
}

/// All minimal complexes with the given terms in degrees 0.. with nonzero
/// differentials, one per orbit of the top-level base change group.
fn complexes_for(a: &AlgRef, terms: &[Vec<usize>]) -> (u64, Vec<ProjComplex>) {
    if terms.len() == 1 {
        return (1, vec![ProjComplex::stalk(a, &terms[0], 0)]);
    }
    let p = a.field().characteristic();
    let gauge = Gauge::new(a, terms, p);
    let mut out = Vec::new();
    let mut count = 0u64;
    struct Ctx<'a> {
        a: &'a AlgRef,
        terms: &'a [Vec<usize>],
        gauge: Option<Gauge>,
    }
    fn rec(cx: &Ctx, diffs: &mut Vec<PMap>, enc: &mut Vec<Vec<u64>>, count: &mut u64, out: &mut Vec<ProjComplex>) {
        let (a, terms) = (cx.a, cx.terms);
        let k = diffs.len();
        if k + 1 == terms.len() {
            *count += 1;
            if cx.gauge.as_ref().is_some_and(|g| !g.is_canonical(enc)) {
                return;
            }
            if let Ok(c) = ProjComplex::new(a, 0, terms.to_vec(), diffs.clone()) {
                out.push(c);
            }
            return;
        }
        let f = a.field();
        let coords = radical_coords(a, &terms[k], &terms[k + 1]);
        let n = coords.len();
        let mut basis: Vec<Vec<Scalar>> = (0..n).map(|i| f.unit_vector(n, i)).collect();
        if let Some(prev) = diffs.last() {
            // d^k ∘ d^{k-1} = 0 is linear in d^k
            let rows: Vec<Vec<Scalar>> = basis
                .iter()
                .map(|v| pmap_matrix(a, &pmap_of(a, &terms[k], &terms[k + 1], &coords, v).compose(a, prev)).entries().to_vec())
                .collect();
            let width = rows.first().map_or(0, |r| r.len());
            if width > 0 {
                basis = Mat::from_rows(f, width, rows).transpose().kernel_vectors();
            }
        }
        for_each_nonzero(f, n, &basis, &mut |v| {
            diffs.push(pmap_of(a, &terms[k], &terms[k + 1], &coords, &v));
            enc.push(v.iter().map(|c| c.residue().unwrap_or(0)).collect());
            rec(cx, diffs, enc, count, out);
            enc.pop();
            diffs.pop();
        });
    }
    let cx = Ctx { a, terms, gauge };
    rec(&cx, &mut Vec::new(), &mut Vec::new(), &mut count, &mut out);
    (count, out)
}

/// Upper bound on the number of differentials: the product of the sizes
/// of the radical map spaces.
pub fn search_estimate(a: &BasedAlgebra, field: Field, caps: &SearchCaps) -> u128 {
    let q = match field {
        Field::Prime(p) => p as u128,
        Field::Rationals => return u128::MAX,
    };
    configurations(a, caps)
        .iter()
        .map(|s| s.windows(2).map(|w| radical_coords(a, &w[0], &w[1]).len() as u32).fold(1u128, |acc, n| acc.saturating_mul(q.saturating_pow(n))))
        .fold(0u128, |acc, x| acc.saturating_add(x))
}

/// Indecomposable exceptional objects of K^b(proj A) up to shift and
/// isomorphism among minimal complexes within the caps, over `field`.
pub fn enumerate_exceptional(a: &BasedAlgebra, field: Field, caps: SearchCaps, seed: u64) -> Result<ExceptionalCatalog, SearchError> {
    if matches!(field, Field::Rationals) {
        return Err(SearchError::InfiniteField);
    }
    let a: AlgRef = Arc::new(if a.field() == field { a.clone() } else { a.reduce_to_field(field)? });
    let estimate = search_estimate(&a, field, &caps);
    if estimate > caps.budget {
        return Err(SearchError::CapTooLarge { estimate, budget: caps.budget });
    }
    let found: Vec<(u64, Vec<CatalogEntry>)> = configurations(&a, &caps)
        .par_iter()
        .map(|terms| {
            let (count, cs) = complexes_for(&a, terms);
            let entries = cs
                .into_iter()
                .filter(exceptional)
                .filter_map(|c| {
                    let end = end_algebra(&c).ok()?;
                    if !is_local(&end.algebra).is_true() {
                        return None;
                    }
                    Some(CatalogEntry { end: fingerprint(&end.algebra), complex: c })
                })
                .collect();
            (count, entries)
        })
        .collect();
    let enumerated = found.iter().map(|(c, _)| c).sum();
    let all: Vec<CatalogEntry> = found.into_iter().flat_map(|(_, e)| e).collect();
    let candidates = all.len();
    let mut entries: Vec<CatalogEntry> = Vec::new();
    for c in all {
        let dup = entries.iter().any(|e| {
            let sig = |x: &ProjComplex| (x.lo..=x.hi()).map(|n| x.multiplicities(n)).collect::<Vec<_>>();
            sig(&e.complex) == sig(&c.complex) && e.end == c.end && !homotopy_isomorphic(&e.complex, &c.complex, seed, 64).is_false()
        });
        if !dup {
            entries.push(c);
        }
    }
    Ok(ExceptionalCatalog { field, caps, enumerated, candidates, entries })
}

impl ExceptionalCatalog {
    /// Multiplicities per degree of each entry, for display and comparison.
    pub fn shapes(&self) -> Vec<Vec<Vec<usize>>> {
        self.entries.iter().map(|e| (e.complex.lo..=e.complex.hi()).map(|n| e.complex.multiplicities(n)).collect()).collect()
    }
}

/// Isomorphism invariant of a factor algebra used for multiset
/// comparison.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FactorKey {
    pub dim: usize,
    pub loewy: Vec<usize>,
    pub num_simples: usize,
    pub commutative: bool,
    pub dim_center: usize,
    pub local: Option<bool>,
}

impl From<&AlgebraFingerprint> for FactorKey {
    fn from(f: &AlgebraFingerprint) -> FactorKey {
        FactorKey { dim: f.dim, loewy: f.loewy.clone(), num_simples: f.num_simples, commutative: f.commutative, dim_center: f.dim_center, local: f.local }
    }
}

impl std::fmt::Display for FactorKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dim {} {}{}",
            self.dim,
            if self.commutative { "commutative" } else { "non-commutative" },
            match self.local {
                Some(true) => " local",
                Some(false) => "",
                None => " local?",
            }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LeafTag {
    SimpleCertified,
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeNode {
    pub fingerprint: AlgebraFingerprint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf: Option<LeafTag>,
    /// idempotent subset and the two factors B = A/AeA, C = eAe
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<(Vec<usize>, Box<TreeNode>, Box<TreeNode>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratificationTree {
    pub root: TreeNode,
}

impl TreeNode {
    fn leaves<'a>(&'a self, out: &mut Vec<(&'a AlgebraFingerprint, LeafTag)>) {
        match &self.split {
            Some((_, b, c)) => {
                b.leaves(out);
                c.leaves(out);
            }
            None => out.push((&self.fingerprint, self.leaf.unwrap_or(LeafTag::Unresolved))),
        }
    }

    fn signature(&self) -> String {
        match &self.split {
            Some((e, b, c)) => format!("({} {:?} {} {})", self.fingerprint.summary(), e, b.signature(), c.signature()),
            None => format!("[{} {:?}]", self.fingerprint.summary(), self.leaf),
        }
    }

    /// Every internal node satisfies r = r(B) + r(C).
    pub fn ranks_add_up(&self) -> bool {
        match &self.split {
            Some((_, b, c)) => {
                self.fingerprint.num_simples == b.fingerprint.num_simples + c.fingerprint.num_simples && b.ranks_add_up() && c.ranks_add_up()
            }
            None => true,
        }
    }
}

impl StratificationTree {
    pub fn leaves(&self) -> Vec<(&AlgebraFingerprint, LeafTag)> {
        let mut out = Vec::new();
        self.root.leaves(&mut out);
        out
    }

    pub fn factors(&self) -> Vec<FactorKey> {
        let mut v: Vec<FactorKey> = self.leaves().into_iter().map(|(f, _)| f.into()).collect();
        v.sort();
        v
    }

    pub fn resolved(&self) -> bool {
        self.leaves().iter().all(|(_, t)| *t == LeafTag::SimpleCertified)
    }
}

fn trees_at(a: &AlgRef, depth: usize, limit: usize, level: usize) -> Result<Vec<TreeNode>, SearchError> {
    let fp = fingerprint(a);
    if is_local(a).is_true() {
        return Ok(vec![TreeNode { fingerprint: fp, leaf: Some(LeafTag::SimpleCertified), split: None }]);
    }
    if level >= limit {
        return Err(SearchError::RecursionLimit(limit));
    }
    let subsets = vertex_subsets(a.num_vertices());
    let found: Vec<Result<Vec<TreeNode>, SearchError>> = subsets
        .par_iter()
        .filter(|e| stratifying_status(a, e, depth).is_ok_and(|s| s.is_certified()))
        .map(|e| {
            let rec = build_recollement(a, e, depth).map_err(|_| SearchError::RecursionLimit(limit))?;
            let bs = trees_at(&rec.b, depth, limit, level + 1)?;
            let cs = trees_at(&rec.c, depth, limit, level + 1)?;
            let mut out = Vec::new();
            for b in &bs {
                for c in &cs {
                    out.push(TreeNode { fingerprint: fp.clone(), leaf: None, split: Some((e.clone(), Box::new(b.clone()), Box::new(c.clone()))) });
                }
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for r in found {
        for t in r? {
            if seen.insert(t.signature()) {
                out.push(t);
            }
        }
    }
    if out.is_empty() {
        out.push(TreeNode { fingerprint: fp, leaf: Some(LeafTag::Unresolved), split: None });
    }
    Ok(out)
}

/// All stratifications by vertex idempotents, depth first; local factors
/// are simple leaves, factors without a certified stratifying idempotent
/// are unresolved leaves.
pub fn stratification_trees(a: &AlgRef, depth: usize, recursion_limit: usize) -> Result<Vec<StratificationTree>, SearchError> {
    Ok(trees_at(a, depth, recursion_limit, 0)?.into_iter().map(|root| StratificationTree { root }).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum JhVerdict {
    Holds { factors: Vec<FactorKey> },
    Fails { first: Vec<FactorKey>, second: Vec<FactorKey> },
    Inconclusive { reason: String },
}

pub fn jh_compare(t1: &StratificationTree, t2: &StratificationTree) -> Result<JhVerdict, SearchError> {
    if FactorKey::from(&t1.root.fingerprint) != FactorKey::from(&t2.root.fingerprint) {
        return Err(SearchError::RootMismatch);
    }
    if !t1.resolved() || !t2.resolved() {
        return Ok(JhVerdict::Inconclusive { reason: "a leaf is not certified simple".into() });
    }
    let (f1, f2) = (t1.factors(), t2.factors());
    Ok(if f1 == f2 { JhVerdict::Holds { factors: f1 } } else { JhVerdict::Fails { first: f1, second: f2 } })
}

/// Overall verdict across all pairs of trees.
pub fn jh_summary(trees: &[StratificationTree]) -> JhVerdict {
    let mut verdict = None;
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            match jh_compare(&trees[i], &trees[j]) {
                Ok(v @ JhVerdict::Fails { .. }) => return v,
                Ok(v @ JhVerdict::Inconclusive { .. }) => verdict = Some(v),
                Ok(_) => {}
                Err(e) => return JhVerdict::Inconclusive { reason: e.to_string() },
            }
        }
    }
    verdict.unwrap_or_else(|| match trees.first() {
        Some(t) if t.resolved() => JhVerdict::Holds { factors: t.factors() },
        Some(_) => JhVerdict::Inconclusive { reason: "a leaf is not certified simple".into() },
        None => JhVerdict::Inconclusive { reason: "no trees".into() },
    })
}

/// Graphviz rendering; nodes carry fingerprints, edges idempotent subsets.
pub fn to_dot(trees: &[StratificationTree]) -> String {
    let mut s = String::from("digraph stratifications {\n  node [shape=box];\n");
    let mut id = 0usize;
    fn walk(n: &TreeNode, s: &mut String, id: &mut usize) -> usize {
        let me = *id;
        *id += 1;
        let tag = match n.leaf {
            Some(LeafTag::SimpleCertified) => "\\nsimple",
            Some(LeafTag::Unresolved) => "\\nunresolved",
            None => "",
        };
        s.push_str(&format!("  n{me} [label=\"{}{tag}\"];\n", n.fingerprint.summary()));
        if let Some((e, b, c)) = &n.split {
            let lb = walk(b, s, id);
            let lc = walk(c, s, id);
            s.push_str(&format!("  n{me} -> n{lb} [label=\"A/AeA, e={e:?}\"];\n"));
            s.push_str(&format!("  n{me} -> n{lc} [label=\"eAe, e={e:?}\"];\n"));
        }
        me
    }
    for (k, t) in trees.iter().enumerate() {
        s.push_str(&format!("  subgraph cluster_{k} {{\n  label=\"tree {k}\";\n"));
        walk(&t.root, &mut s, &mut id);
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}

/// TriBool view of a verdict, for reports.
pub fn jh_holds(v: &JhVerdict) -> TriBool {
    match v {
        JhVerdict::Holds { .. } => TriBool::yes("equal factor multisets"),
        JhVerdict::Fails { .. } => TriBool::no("distinct factor multisets"),
        JhVerdict::Inconclusive { reason } => TriBool::unknown(reason.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fixtures;

    fn alg(q: crate::algebra::QuiverPresentation) -> AlgRef {
        Arc::new(build_algebra(&q).unwrap())
    }

    const F2: Field = Field::Prime(2);

    #[test]
    fn gauge_action_is_conjugation() {
        let a: AlgRef = Arc::new(alg(fixtures::fourteen()).reduce_to_field(F2).unwrap());
        let terms = vec![vec![1, 1], vec![0, 0]];
        let gauge = Gauge::new(&a, &terms, 2).unwrap();
        let coords = radical_coords(&a, &terms[0], &terms[1]);
        let scalar_map = |vs: &[usize], g: &[u64]| {
            let mut m = PMap::zero(&a, vs, vs);
            for (j, &v) in vs.iter().enumerate() {
                for i in 0..vs.len() {
                    let mut x = a.zero_vec();
                    x[a.idempotent(v)] = F2.from_i64(g[j * vs.len() + i] as i64);
                    m.set(j, i, x);
                }
            }
            m
        };
        for code in [0b1011_0110_0101_1001u32, 0x1234, 0xfe01] {
            let v: Vec<Scalar> = (0..coords.len()).map(|k| F2.from_i64(i64::from((code >> k) & 1 == 1))).collect();
            let d = pmap_of(&a, &terms[0], &terms[1], &coords, &v);
            let enc: Vec<u64> = v.iter().map(|c| c.residue().unwrap()).collect();
            for (g, _) in &gauge.groups[1] {
                for (_, h) in &gauge.groups[0] {
                    let conj = scalar_map(&terms[1], g).compose(&a, &d).compose(&a, &scalar_map(&terms[0], h));
                    let expect: Vec<u64> = coords.iter().map(|&(j, i, b)| conj.entry(j, i)[b].residue().unwrap()).collect();
                    assert_eq!(gauge.transform(0, &enc, g, h), expect);
                }
            }
        }
    }

    #[test]
    fn multisets_count() {
        assert_eq!(multisets(2, 2).len(), 5);
        assert_eq!(multisets(1, 3).len(), 3);
    }

    #[test]
    fn ladder_three_catalog() {
        let a = alg(fixtures::ladder_three());
        let c = enumerate_exceptional(&a, F2, SearchCaps::new(2, 2), 1).unwrap();
        assert_eq!(c.shapes(), vec![vec![vec![1, 0]], vec![vec![0, 1]], vec![vec![0, 1], vec![1, 0]]]);
    }

    #[test]
    fn other_catalogs() {
        let a = alg(fixtures::radical_square_zero());
        let c = enumerate_exceptional(&a, F2, SearchCaps::new(2, 2), 1).unwrap();
        assert_eq!(c.shapes(), vec![vec![vec![1, 0]], vec![vec![0, 1]], vec![vec![0, 1], vec![1, 0]]]);
        let a = alg(fixtures::quasi_hereditary());
        let c = enumerate_exceptional(&a, F2, SearchCaps::new(2, 2), 1).unwrap();
        // P1, P2, P1 → P2 and P2 → P1: the shortest members of the two
        // exceptional families of this algebra
        assert_eq!(c.shapes(), vec![vec![vec![1, 0]], vec![vec![0, 1]], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]]);
        let a = alg(fixtures::linear_a2());
        let c = enumerate_exceptional(&a, F2, SearchCaps::new(3, 2), 1).unwrap();
        assert_eq!(c.entries.len(), 3);
        let a = alg(fixtures::fourteen());
        let c = enumerate_exceptional(&a, F2, SearchCaps::new(2, 2), 1).unwrap();
        assert_eq!(c.shapes(), vec![vec![vec![1, 0]], vec![vec![0, 1]]]);
    }

    #[test]
    fn local_catalog_is_stalk_only() {
        let a = alg(fixtures::dual_numbers());
        let c = enumerate_exceptional(&a, F2, SearchCaps::new(3, 2), 1).unwrap();
        assert_eq!(c.entries.len(), 1);
        assert_eq!(c.entries[0].complex.amplitude(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let a = alg(fixtures::fourteen());
        let caps = SearchCaps { max_len: 3, max_mult: 3, budget: 1000 };
        assert!(matches!(enumerate_exceptional(&a, F2, caps, 1), Err(SearchError::CapTooLarge { .. })));
        assert_eq!(enumerate_exceptional(&a, Field::Rationals, SearchCaps::new(1, 1), 1).unwrap_err(), SearchError::InfiniteField);
    }

    #[test]
    fn jordan_holder_fails() {
        let a = alg(fixtures::jordan_holder());
        let ts = stratification_trees(&a, 30, 4).unwrap();
        assert_eq!(ts.len(), 2);
        assert!(ts.iter().all(|t| t.root.ranks_add_up()));
        assert!(matches!(jh_compare(&ts[0], &ts[1]).unwrap(), JhVerdict::Fails { .. }));
        assert!(matches!(jh_summary(&ts), JhVerdict::Fails { .. }));
        assert!(to_dot(&ts).starts_with("digraph"));
    }

    #[test]
    fn ladder_three_holds() {
        let a = alg(fixtures::ladder_three());
        let ts = stratification_trees(&a, 20, 4).unwrap();
        assert_eq!(ts.len(), 2);
        let v = jh_summary(&ts);
        match v {
            JhVerdict::Holds { factors } => assert_eq!(factors.iter().map(|f| f.dim).collect::<Vec<_>>(), vec![1, 2]),
            other => panic!("{other:?}"),
        }
        assert_eq!(jh_compare(&ts[0], &ts[0]).unwrap(), jh_compare(&ts[0], &ts[0]).unwrap());
    }

    #[test]
    fn local_algebra_is_a_single_leaf() {
        let a = alg(fixtures::kxy());
        let ts = stratification_trees(&a, 20, 4).unwrap();
        assert_eq!(ts.len(), 1);
        assert!(ts[0].root.split.is_none() && ts[0].resolved());
    }
}
