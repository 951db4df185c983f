//! Brute-force cross-checks. Nothing here calls the solvers of the main
//! path: Hom in the homotopy category is counted by enumerating maps,
//! Tor comes from the normalized bar complex, and dimensions of monomial
//! algebras from counting paths.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{BasedAlgebra, QuiverPresentation};
use crate::exactla::{Field, Mat, Scalar};
use crate::fdmod::FDModule;
use crate::kbproj::ProjComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration of {0} elements exceeds the limit")]
    TooLarge(u128),
    #[error("brute force needs a finite field")]
    InfiniteField,
    #[error("relation {0} is not a single path")]
    NonMonomial(usize),
    #[error("the path algebra modulo the relations is infinite-dimensional")]
    InfiniteDimensional,
    #[error("unknown vertex or arrow {0}")]
    UnknownName(String),
}

pub const DEFAULT_LIMIT: u128 = 1 << 24;

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub target: String,
    pub instance: String,
    pub oracle: usize,
    pub main: usize,
    pub agree: bool,
}

impl OracleReport {
    pub fn new(target: &str, instance: impl Into<String>, oracle: usize, main: usize) -> OracleReport {
        OracleReport { target: target.into(), instance: instance.into(), oracle, main, agree: oracle == main }
    }
}

/// Map entries of a differential as (target summand, source summand) →
/// element of A.
fn entries(x: &ProjComplex, k: i64) -> HashMap<(usize, usize), Vec<Scalar>> {
    let d = x.diff(k);
    let mut out = HashMap::new();
    for j in 0..d.tgt.len() {
        for i in 0..d.src.len() {
            if d.entry(j, i).iter().any(|c| !c.is_zero()) {
                out.insert((j, i), d.entry(j, i).to_vec());
            }
        }
    }
    out
}

/// A degreewise map X → Y[s] as a list of variables (k, j, i, basis b).
struct Vars {
    list: Vec<(i64, usize, usize, usize)>,
}

impl Vars {
    fn new(a: &BasedAlgebra, x: &ProjComplex, y: &ProjComplex, s: i64) -> Vars {
        let mut list = Vec::new();
        if !x.is_zero() && !y.is_zero() {
            for k in x.lo..=x.hi() {
                let (src, tgt) = (x.term(k), y.term(k + s));
                for (j, &v) in tgt.iter().enumerate() {
                    for (i, &u) in src.iter().enumerate() {
                        for b in a.corner_basis(v, u) {
                            list.push((k, j, i, b));
                        }
                    }
                }
            }
        }
        Vars { list }
    }
}

/// Sparse vector over the keys (k, j, i, basis of A).
type Image = HashMap<(i64, usize, usize, usize), Scalar>;

fn add_into(f: Field, img: &mut Image, key: (i64, usize, usize), v: &[Scalar], sign: &Scalar) {
    for (b, c) in v.iter().enumerate() {
        if !c.is_zero() {
            let e = img.entry((key.0, key.1, key.2, b)).or_insert_with(|| f.zero());
            *e = &*e + &(sign * c);
        }
    }
}

/// The image of a single basis map u at (k, j, i) with entry b under
/// φ ↦ σ d_Y φ − φ d_X (σ = ±1), as a map of degree s + 1.
fn defect(a: &BasedAlgebra, x: &ProjComplex, y: &ProjComplex, s: i64, sigma: &Scalar, var: (i64, usize, usize, usize)) -> Image {
    let f = a.field();
    let (k, j, i, b) = var;
    let mut img = Image::new();
    let e = a.basis_vector(b);
    // d_Y^{k+s} ∘ φ: entries (j', i) gain d_Y(j', j) · e
    for ((jj, j0), dy) in entries(y, k + s) {
        if j0 == j {
            add_into(f, &mut img, (k, jj, i), &a.mul(&dy, &e), sigma);
        }
    }
    // φ ∘ d_X^{k-1}: entries (j, i') at degree k - 1 gain e · d_X(i, i')
    let minus = -f.one();
    for ((i0, ii), dx) in entries(x, k - 1) {
        if i0 == i {
            add_into(f, &mut img, (k - 1, j, ii), &a.mul(&e, &dx), &minus);
        }
    }
    img.retain(|_, c| !c.is_zero());
    img
}

fn residue_vec(img: &Image, index: &mut HashMap<(i64, usize, usize, usize), usize>) -> Vec<(usize, u64)> {
    let mut v: Vec<(usize, u64)> = img
        .iter()
        .map(|(key, c)| {
            let n = index.len();
            (*index.entry(*key).or_insert(n), c.residue().expect("finite field"))
        })
        .collect();
    v.sort_unstable();
    v
}

fn add_col(p: u64, acc: &mut [u64], nz: &mut usize, col: &[(usize, u64)], times: u64) {
    for &(r, c) in col {
        let was = acc[r] != 0;
        acc[r] = (acc[r] + c * times) % p;
        match (was, acc[r] != 0) {
            (false, true) => *nz += 1,
            (true, false) => *nz -= 1,
            _ => {}
        }
    }
}

/// Counts the combinations Σ c_k col_k, c_k ∈ F_p, that vanish, by
/// walking all p^n of them. The top digits are split into chunks that
/// run in parallel.
fn count_zero_sums(p: u64, width: usize, cols: &[Vec<(usize, u64)>]) -> u128 {
    use rayon::prelude::*;
    let n = cols.len();
    let mut top = 0;
    while top < n && (p as u128).pow(top as u32 + 1) <= 64 {
        top += 1;
    }
    let (low, high) = cols.split_at(n - top);
    let chunks = p.pow(top as u32);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = vec![0u64; width];
            let mut nz = 0usize;
            let mut c = chunk;
            for col in high {
                add_col(p, &mut acc, &mut nz, col, c % p);
                c /= p;
            }
            let mut zeros = u128::from(nz == 0);
            let mut idx = vec![0u64; low.len()];
            loop {
                let mut k = 0;
                // odometer; a digit wrapping from p - 1 to 0 also adds its
                // column once, since -(p - 1)c = c
                while k < low.len() && idx[k] + 1 == p {
                    idx[k] = 0;
                    add_col(p, &mut acc, &mut nz, &low[k], 1);
                    k += 1;
                }
                if k == low.len() {
                    return zeros;
                }
                idx[k] += 1;
                add_col(p, &mut acc, &mut nz, &low[k], 1);
                zeros += u128::from(nz == 0);
            }
        })
        .sum()
}

/// dim Hom_K(X, Y[n]) by exhaustive enumeration over a finite field:
/// counts chain maps and null-homotopic maps and takes log_q of the
/// quotient.
pub fn hom_bruteforce(x: &ProjComplex, y: &ProjComplex, n: i64, limit: u128) -> Result<usize, OracleError> {
    let a = x.algebra();
    let f = a.field();
    let Field::Prime(p) = f else {
        return Err(OracleError::InfiniteField);
    };
    let fv = Vars::new(a, x, y, n);
    let hv = Vars::new(a, x, y, n - 1);
    let q = p as u128;
    for len in [fv.list.len(), hv.list.len()] {
        let size = q.checked_pow(len as u32).unwrap_or(u128::MAX);
        if size > limit {
            return Err(OracleError::TooLarge(size));
        }
    }
    // Y[n] has differential (-1)^n d_Y
    let sign = |m: i64| if m.rem_euclid(2) == 0 { f.one() } else { -f.one() };
    // chain condition: (-1)^n d_Y f^k - f^{k+1} d_X^k = 0, written as a map
    // of degree n + 1 from X
    let mut index = HashMap::new();
    let cols: Vec<Vec<(usize, u64)>> = fv
        .list
        .iter()
        .map(|&(k, j, i, b)| {
            let img = defect(a, x, y, n, &sign(n), (k, j, i, b));
            residue_vec(&img, &mut index)
        })
        .collect();
    let cycles = count_zero_sums(p, index.len(), &cols);
    // boundaries: the image of h ↦ (-1)^n d_Y h + h d_X, counted as
    // q^{#h} / |kernel|; the sign convention for h does not change it
    let mut hindex = HashMap::new();
    let hcols: Vec<Vec<(usize, u64)>> =
        hv.list.iter().map(|&var| residue_vec(&defect(a, x, y, n - 1, &sign(n - 1), var), &mut hindex)).collect();
    let boundaries = q.pow(hv.list.len() as u32) / count_zero_sums(p, hindex.len(), &hcols);
    let classes = cycles / boundaries;
    let mut d = 0;
    let mut c = classes;
    while c > 1 {
        assert_eq!(c % q, 0, "quotient of group orders is not a power of q");
        c /= q;
        d += 1;
    }
    Ok(d)
}

/// Tor_i^A(M, N) from the normalized bar complex M ⊗_S J^{⊗k} ⊗_S N,
/// S spanned by the vertex idempotents and J the radical. N is a right
/// module over the opposite algebra.
pub fn bar_tor(m: &FDModule, n: &FDModule, i: usize) -> usize {
    let a = m.algebra();
    let f = a.field();
    let rad: Vec<usize> = a.radical_basis().to_vec();
    let (mv, nv) = (m.vertex_of(), n.vertex_of());
    // chains: (m basis, radical sequence, n basis)
    let chains = |k: usize| -> Vec<(usize, Vec<usize>, usize)> {
        let mut seqs: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::new();
            for s in &seqs {
                for &r in &rad {
                    if s.last().is_none_or(|&l| a.tag(l).1 == a.tag(r).0) {
                        let mut t = s.clone();
                        t.push(r);
                        next.push(t);
                    }
                }
            }
            seqs = next;
        }
        let mut out = Vec::new();
        for (mb, &mu) in mv.iter().enumerate() {
            for s in &seqs {
                let left = s.first().map(|&r| a.tag(r).0);
                if left.is_some_and(|u| u != mu) {
                    continue;
                }
                for (nb, &nu) in nv.iter().enumerate() {
                    let right = s.last().map_or(mu, |&r| a.tag(r).1);
                    if right == nu {
                        out.push((mb, s.clone(), nb));
                    }
                }
            }
        }
        out
    };
    let bases: Vec<Vec<(usize, Vec<usize>, usize)>> = (0..=i + 1).map(chains).collect();
    let positions: Vec<HashMap<(usize, Vec<usize>, usize), usize>> =
        bases.iter().map(|b| b.iter().cloned().enumerate().map(|(t, key)| (key, t)).collect()).collect();
    let rad_pos: HashMap<usize, usize> = rad.iter().enumerate().map(|(t, &r)| (r, t)).collect();
    let differential = |k: usize| -> Mat {
        let (src, tgt) = (&bases[k], &positions[k - 1]);
        let mut rows = Vec::with_capacity(src.len());
        for (mb, s, nb) in src {
            let mut row = f.zeros(bases[k - 1].len());
            let mut put = |key: (usize, Vec<usize>, usize), c: &Scalar| {
                if !c.is_zero() {
                    let t = *tgt.get(&key).expect("tensor basis");
                    row[t] = &row[t] + c;
                }
            };
            // m j_1 ⊗ j_2 ⊗ … ⊗ n
            let mj = m.act_basis(&f.unit_vector(m.dim(), *mb), s[0]);
            for (b, c) in mj.iter().enumerate() {
                put((b, s[1..].to_vec(), *nb), c);
            }
            // m ⊗ … ⊗ j_t j_{t+1} ⊗ … ⊗ n with sign (-1)^t
            for t in 1..s.len() {
                let sign = if t % 2 == 0 { f.one() } else { -f.one() };
                let prod = a.product_vec(s[t - 1], s[t]);
                for (b, c) in prod.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let r = *rad_pos.get(&b).expect("radical is an ideal");
                    let mut seq = s[..t - 1].to_vec();
                    seq.push(rad[r]);
                    seq.extend_from_slice(&s[t + 1..]);
                    put((*mb, seq, *nb), &(&sign * c));
                }
            }
            // m ⊗ … ⊗ j_k n with sign (-1)^k
            let sign = if s.len() % 2 == 0 { f.one() } else { -f.one() };
            let jn = n.act_basis(&f.unit_vector(n.dim(), *nb), *s.last().unwrap());
            for (b, c) in jn.iter().enumerate() {
                put((*mb, s[..s.len() - 1].to_vec(), b), &(&sign * c));
            }
            rows.push(row);
        }
        Mat::from_rows(f, bases[k - 1].len(), rows)
    };
    let rank = |k: usize| if k == 0 || bases[k].is_empty() || bases[k - 1].is_empty() { 0 } else { differential(k).rank() };
    bases[i].len() - rank(i) - rank(i + 1)
}

/// Dimension of kQ/I for monomial I: the number of paths containing no
/// relation as a subpath.
pub fn path_count(q: &QuiverPresentation) -> Result<usize, OracleError> {
    let vpos: HashMap<&str, usize> = q.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let vertex = |s: &str| vpos.get(s).copied().ok_or_else(|| OracleError::UnknownName(s.to_string()));
    let mut arrows = Vec::new();
    for ar in &q.arrows {
        arrows.push((vertex(&ar.source)?, vertex(&ar.target)?));
    }
    let apos: HashMap<&str, usize> = q.arrows.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
    let mut rels: Vec<Vec<usize>> = Vec::new();
    for (r, rel) in q.relations.iter().enumerate() {
        if rel.len() != 1 {
            return Err(OracleError::NonMonomial(r));
        }
        let path: Result<Vec<usize>, _> = rel[0].path.iter().map(|s| apos.get(s.as_str()).copied().ok_or_else(|| OracleError::UnknownName(s.clone()))).collect();
        rels.push(path?);
    }
    let maxrel = rels.iter().map(|r| r.len()).max().unwrap_or(1);
    // states are the last maxrel - 1 arrows; a path longer than the number
    // of states plus maxrel revisits one and pumps
    let states: usize = (0..maxrel).map(|j| arrows.len().saturating_pow(j as u32)).fold(0usize, |x, y| x.saturating_add(y));
    let bound = states.saturating_add(maxrel).saturating_add(q.vertices.len());
    let mut total = q.vertices.len();
    let mut layer: Vec<Vec<usize>> = (0..arrows.len()).map(|x| vec![x]).filter(|p| !rels.contains(p)).collect();
    let mut len = 1;
    while !layer.is_empty() {
        if len > bound {
            return Err(OracleError::InfiniteDimensional);
        }
        total += layer.len();
        let mut next = Vec::new();
        for p in &layer {
            let end = arrows[*p.last().unwrap()].1;
            for (x, &(s, _)) in arrows.iter().enumerate() {
                if s != end {
                    continue;
                }
                let mut np = p.clone();
                np.push(x);
                if rels.iter().any(|r| np.ends_with(r)) {
                    continue;
                }
                next.push(np);
            }
        }
        layer = next;
        len += 1;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, opposite, AlgRef};
    use crate::fdmod::{quotient_module, simple_module};
    use crate::fixtures;
    use crate::homology::tor_dim;
    use crate::kbproj::{arrow_complex, hom_dim};
    use std::sync::Arc;

    fn f2(q: QuiverPresentation) -> AlgRef {
        Arc::new(build_algebra(&q).unwrap().reduce_to_field(Field::Prime(2)).unwrap())
    }

    fn elem(a: &AlgRef, label: &str) -> Vec<Scalar> {
        a.basis_vector(a.labels().iter().position(|l| l == label).unwrap())
    }

    #[test]
    fn end_of_p2_and_cone() {
        let a = f2(fixtures::ladder_three());
        let p2 = ProjComplex::stalk(&a, &[1], 0);
        assert_eq!(hom_bruteforce(&p2, &p2, 0, DEFAULT_LIMIT).unwrap(), 2);
        let m = arrow_complex(&a, 1, 0, elem(&a, "α"), -1);
        for n in -2..=2 {
            assert_eq!(hom_bruteforce(&m, &m, n, DEFAULT_LIMIT).unwrap(), hom_dim(&m, &m, n), "n = {n}");
        }
        assert_eq!(hom_bruteforce(&m, &m, 1, DEFAULT_LIMIT).unwrap(), 0);
        let z = ProjComplex::zero(&a);
        assert_eq!(hom_bruteforce(&z, &m, 0, DEFAULT_LIMIT).unwrap(), 0);
    }

    #[test]
    fn shifted_pairs_agree() {
        let a = f2(fixtures::radical_square_zero());
        let x = arrow_complex(&a, 1, 0, elem(&a, "α"), -1);
        let ys = [ProjComplex::stalk(&a, &[0], 0), ProjComplex::stalk(&a, &[1], -1), x.clone()];
        for y in &ys {
            for n in -2..=2 {
                assert_eq!(hom_bruteforce(&x, y, n, DEFAULT_LIMIT).unwrap(), hom_dim(&x, y, n));
                assert_eq!(hom_bruteforce(y, &x, n, DEFAULT_LIMIT).unwrap(), hom_dim(y, &x, n));
            }
        }
    }

    #[test]
    fn bar_tor_of_dual_numbers() {
        let a: AlgRef = Arc::new(build_algebra(&fixtures::dual_numbers()).unwrap());
        let op: AlgRef = Arc::new(opposite(&a));
        let (k, kop) = (simple_module(&a, 0), simple_module(&op, 0));
        for i in 0..4 {
            assert_eq!(bar_tor(&k, &kop, i), 1);
        }
    }

    #[test]
    fn bar_tor_matches_tor_dim() {
        for q in [fixtures::ladder_three(), fixtures::radical_square_zero(), fixtures::quasi_hereditary()] {
            let a: AlgRef = Arc::new(build_algebra(&q).unwrap());
            let op: AlgRef = Arc::new(opposite(&a));
            for e in [[0usize], [1]] {
                let (m, n) = (quotient_module(&a, &e), quotient_module(&op, &e));
                for i in 0..=3 {
                    assert_eq!(Some(bar_tor(&m, &n, i)), tor_dim(&m, &n, i, 20), "{e:?} {i}");
                }
            }
        }
    }

    #[test]
    fn path_counts() {
        assert_eq!(path_count(&fixtures::ladder_three()).unwrap(), 4);
        assert_eq!(path_count(&fixtures::fourteen()).unwrap(), 14);
        assert_eq!(path_count(&fixtures::field_k()).unwrap(), 1);
        let free = QuiverPresentation::new(Field::Rationals, &["1"]).arrow("x", "1", "1");
        assert_eq!(path_count(&free), Err(OracleError::InfiniteDimensional));
    }
}
