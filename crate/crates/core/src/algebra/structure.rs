use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{sparse, AlgebraError, BasedAlgebra, Origin};
use crate::exactla::{is_zero_vec, Echelon, Field, Mat, Scalar};
use crate::tri::{Cert, TriBool};

/// Brute-force radical search limit, as a power of two of the number of
/// element pairs enumerated.
const BRUTE_BITS: u32 = 20;

/// Isomorphism-invariant summary of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AlgebraFingerprint {
    pub dim: usize,
    pub loewy: Vec<usize>,
    pub num_simples: usize,
    pub commutative: bool,
    pub dim_center: usize,
    pub local: Option<bool>,
    pub basic: bool,
    pub cartan: Option<Vec<Vec<usize>>>,
}

/// Basis of the Jacobson radical as coordinate vectors.
pub fn radical(a: &BasedAlgebra) -> Vec<Vec<Scalar>> {
    a.radical_basis().iter().map(|&i| a.basis_vector(i)).collect()
}

/// Radical of an algebra given only by structure constants. Uses the
/// trace form when the characteristic is zero or exceeds the dimension,
/// and exhaustive search over small finite fields otherwise.
pub fn compute_radical(field: Field, dim: usize, table: &[Vec<(usize, Scalar)>]) -> Result<Vec<Vec<Scalar>>, AlgebraError> {
    let p = field.characteristic();
    // trace of left multiplication by each basis element
    let traces: Vec<Scalar> = (0..dim)
        .map(|k| {
            let mut t = field.zero();
            for m in 0..dim {
                for (idx, c) in &table[k * dim + m] {
                    if *idx == m {
                        t += c;
                    }
                }
            }
            t
        })
        .collect();
    let mut g = Mat::zeros(field, dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut s = field.zero();
            for (k, c) in &table[i * dim + j] {
                s += &(c * &traces[*k]);
            }
            g.set(i, j, s);
        }
    }
    let kernel = g.kernel_vectors();
    if p == 0 || p as usize > dim {
        return Ok(kernel);
    }
    let mul = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = field.zeros(dim);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &table[i * dim + j] {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    };
    let nilpotent = |x: &[Scalar]| {
        let mut pw = x.to_vec();
        for _ in 0..dim {
            if is_zero_vec(&pw) {
                return true;
            }
            pw = mul(&pw, x);
        }
        is_zero_vec(&pw)
    };
    let bits = (kernel.len() + dim) as f64 * (p as f64).log2();
    if bits > BRUTE_BITS as f64 {
        return Err(AlgebraError::RadicalUnavailable(format!(
            "characteristic {p} ≤ dimension {dim} and the search space exceeds 2^{BRUTE_BITS}"
        )));
    }
    let all_a = span_elements(field, &(0..dim).map(|i| field.unit_vector(dim, i)).collect::<Vec<_>>(), dim);
    let mut rad = Echelon::new(field, dim);
    for x in span_elements(field, &kernel, dim) {
        if rad.contains(&x) {
            continue;
        }
        if all_a.iter().all(|y| nilpotent(&mul(&x, y))) {
            rad.insert(&x);
        }
    }
    Ok(rad.basis().to_vec())
}

/// Every element of the span of `gens` over a finite field.
fn span_elements(field: Field, gens: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    let elems = field.elements().expect("finite field");
    let mut out = vec![field.zeros(dim)];
    for g in gens {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for v in &out {
            for c in &elems {
                let mut w = v.clone();
                crate::exactla::axpy(&mut w, c, g);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Builds an algebra from structure constants, computes its radical and
/// rebases so that the radical is spanned by the trailing basis elements.
pub fn algebra_from_table(
    field: Field,
    labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
    origin: Origin,
) -> Result<BasedAlgebra, AlgebraError> {
    Ok(rebase_by_radical(field, labels, table, unit, origin)?.0)
}

/// As algebra_from_table, also returning the new basis in old coordinates.
pub(crate) fn rebase_by_radical(
    field: Field,
    labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
    origin: Origin,
) -> Result<(BasedAlgebra, Vec<Vec<Scalar>>), AlgebraError> {
    let dim = labels.len();
    let rad = compute_radical(field, dim, &table)?;
    let ech = Echelon::from_vectors(field, dim, &rad);
    let comp = ech.non_pivots();
    let mut rows: Vec<Vec<Scalar>> = comp.iter().map(|&i| field.unit_vector(dim, i)).collect();
    rows.extend(ech.basis().iter().cloned());
    let change = Mat::from_rows(field, dim, rows.clone());
    let inv = change.inverse().expect("basis change");
    let old = BasedAlgebra::from_parts(field, labels.clone(), table, unit.clone(), None, Vec::new(), None, Origin::Endomorphism);
    let mut new_table = Vec::with_capacity(dim * dim);
    for x in &rows {
        for y in &rows {
            new_table.push(sparse(&inv.vec_mul(&old.mul(x, y))));
        }
    }
    let new_labels = rows
        .iter()
        .enumerate()
        .map(|(n, v)| if n < comp.len() { labels[comp[n]].clone() } else { old.format_element(v) })
        .collect();
    let new_unit = inv.vec_mul(&unit);
    let alg = BasedAlgebra::from_parts(field, new_labels, new_table, new_unit, None, (comp.len()..dim).collect(), None, origin);
    Ok((alg, rows))
}

/// Entry (i, j) is dim e_i A e_j, so row i is the dimension vector of
/// P_i = e_i A.
pub fn cartan_matrix(a: &BasedAlgebra) -> Vec<Vec<usize>> {
    let Some(vd) = a.vertex_data() else {
        return Vec::new();
    };
    let r = vd.idempotents.len();
    let mut c = vec![vec![0; r]; r];
    for &(l, rt) in &vd.tags {
        c[l][rt] += 1;
    }
    c
}

/// Dimensions of J^k / J^{k+1}, k ≥ 0, until J^k = 0.
pub fn loewy_vector(a: &BasedAlgebra) -> Vec<usize> {
    let field = a.field();
    let dim = a.dim();
    let mut out = vec![dim - a.radical_basis().len()];
    let mut current = Echelon::from_vectors(field, dim, &radical(a));
    while current.dim() > 0 {
        let mut next = Echelon::new(field, dim);
        for v in current.basis() {
            for &r in a.radical_basis() {
                next.insert(&a.mul_basis_right(v, r));
            }
        }
        out.push(current.dim() - next.dim());
        current = next;
    }
    out
}

fn center_dim_of(field: Field, dim: usize, elems: &[usize], prod: impl Fn(usize, usize) -> Vec<Scalar>) -> usize {
    // x is central iff it commutes with every element of `elems`
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for &j in elems {
        let rows: Vec<Vec<Scalar>> = (0..dim)
            .map(|i| {
                let mut d = prod(i, j);
                let other = prod(j, i);
                for (x, y) in d.iter_mut().zip(&other) {
                    *x -= y;
                }
                d
            })
            .collect();
        if cols.is_empty() {
            cols = rows;
        } else {
            for (c, r) in cols.iter_mut().zip(rows) {
                c.extend(r);
            }
        }
    }
    if cols.is_empty() {
        return dim;
    }
    let width = cols[0].len();
    dim - Mat::from_rows(field, width, cols).rank()
}

pub fn center_dim(a: &BasedAlgebra) -> usize {
    let gens = a.generators();
    center_dim_of(a.field(), a.dim(), &gens, |i, j| a.product_vec(i, j))
}

/// Indices of the non-radical basis elements; they span a complement of J
/// and give a basis of A/J.
fn top_indices(a: &BasedAlgebra) -> Vec<usize> {
    (0..a.dim()).filter(|&i| !a.is_radical(i)).collect()
}

fn top_product(a: &BasedAlgebra, top: &[usize], i: usize, j: usize) -> Vec<Scalar> {
    let mut out = a.field().zeros(top.len());
    for (k, c) in a.product(top[i], top[j]) {
        if let Some(pos) = top.iter().position(|t| t == k) {
            out[pos] = c.clone();
        }
    }
    out
}

/// Dimension of the center of A/J: the number of simple modules when A/J
/// is split semisimple.
pub fn semisimple_center_dim(a: &BasedAlgebra) -> usize {
    let top = top_indices(a);
    let all: Vec<usize> = (0..top.len()).collect();
    center_dim_of(a.field(), top.len(), &all, |i, j| top_product(a, &top, i, j))
}

pub fn is_commutative(a: &BasedAlgebra) -> bool {
    let gens = a.generators();
    gens.iter().all(|&i| gens.iter().all(|&j| a.product(i, j) == a.product(j, i)))
}

pub fn num_simples(a: &BasedAlgebra) -> usize {
    if a.vertex_data().is_some() {
        a.num_vertices()
    } else {
        semisimple_center_dim(a)
    }
}

/// Decides locality: A is local iff A/J is a division algebra.
pub fn is_local(a: &BasedAlgebra) -> TriBool {
    let top = top_indices(a);
    if top.len() == 1 {
        return TriBool::True(Cert::new("dim A/J = 1"));
    }
    if a.num_vertices() > 1 {
        return TriBool::False(Cert::with("several primitive idempotents", a.num_vertices()));
    }
    let field = a.field();
    let n = top.len();
    let singular = |x: &[Scalar]| {
        let rows: Vec<Vec<Scalar>> = (0..n)
            .map(|j| {
                let mut out = field.zeros(n);
                for (i, c) in x.iter().enumerate() {
                    if !c.is_zero() {
                        crate::exactla::axpy(&mut out, c, &top_product(a, &top, i, j));
                    }
                }
                out
            })
            .collect();
        !Mat::from_rows(field, n, rows).is_invertible()
    };
    let witness = |x: &[Scalar]| {
        let mut full = a.zero_vec();
        for (i, c) in x.iter().enumerate() {
            full[top[i]] = c.clone();
        }
        TriBool::False(Cert::with("non-unit outside the radical", a.format_element(&full)))
    };
    let mut candidates: Vec<Vec<Scalar>> = (0..n).map(|i| field.unit_vector(n, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = field.unit_vector(n, i);
            v[j] = field.one();
            candidates.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..32 {
        candidates.push((0..n).map(|_| field.random(&mut rng, 5)).collect());
    }
    for c in &candidates {
        if !is_zero_vec(c) && singular(c) {
            return witness(c);
        }
    }
    if let Some(elems) = field.elements() {
        if (n as f64) * (elems.len() as f64).log2() <= 16.0 {
            let gens: Vec<Vec<Scalar>> = (0..n).map(|i| field.unit_vector(n, i)).collect();
            for x in span_elements(field, &gens, n) {
                if !is_zero_vec(&x) && singular(&x) {
                    return witness(&x);
                }
            }
            return TriBool::True(Cert::new("every nonzero element of A/J is invertible (exhaustive)"));
        }
    }
    TriBool::Unknown(Cert::new("no zero divisor found in A/J"))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lexicographically least simultaneous row/column permutation.
pub fn canonical_cartan(c: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let r = c.len();
    if r > 7 {
        return c.to_vec();
    }
    permutations(r)
        .into_iter()
        .map(|p| (0..r).map(|i| (0..r).map(|j| c[p[i]][p[j]]).collect::<Vec<_>>()).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

pub fn fingerprint(a: &BasedAlgebra) -> AlgebraFingerprint {
    let loewy = loewy_vector(a);
    let basic = match a.vertex_data() {
        Some(_) => true,
        None => {
            let top = top_indices(a);
            (0..top.len()).all(|i| (0..top.len()).all(|j| top_product(a, &top, i, j) == top_product(a, &top, j, i)))
        }
    };
    AlgebraFingerprint {
        dim: a.dim(),
        loewy,
        num_simples: num_simples(a),
        commutative: is_commutative(a),
        dim_center: center_dim(a),
        local: is_local(a).as_option(),
        basic,
        cartan: a.vertex_data().map(|_| canonical_cartan(&cartan_matrix(a))),
    }
}

impl AlgebraFingerprint {
    /// Short human-readable form.
    pub fn summary(&self) -> String {
        format!(
            "dim {} loewy {:?} r={} {}{}{} center {}",
            self.dim,
            self.loewy,
            self.num_simples,
            if self.commutative { "commutative" } else { "non-commutative" },
            match self.local {
                Some(true) => " local",
                Some(false) => "",
                None => " local?",
            },
            if self.basic { "" } else { " non-basic" },
            self.dim_center
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fixtures;

    #[test]
    fn fingerprints() {
        let k = fingerprint(&build_algebra(&fixtures::field_k()).unwrap());
        assert_eq!((k.dim, k.loewy.clone(), k.num_simples, k.commutative, k.dim_center), (1, vec![1], 1, true, 1));
        let d = fingerprint(&build_algebra(&fixtures::dual_numbers()).unwrap());
        assert_eq!((d.dim, d.loewy.clone(), d.commutative, d.dim_center), (2, vec![1, 1], true, 2));
        let x = fingerprint(&build_algebra(&fixtures::kxy()).unwrap());
        assert_eq!((x.dim, x.loewy.clone(), x.num_simples, x.commutative), (4, vec![1, 2, 1], 1, false));
        // 1 and yx span the center
        assert_eq!(x.dim_center, 2);
        assert_eq!(x.local, Some(true));
    }

    #[test]
    fn cartan_and_radical() {
        let a = build_algebra(&fixtures::ladder_three()).unwrap();
        assert_eq!(cartan_matrix(&a), vec![vec![1, 1], vec![0, 2]]);
        for (v, row) in cartan_matrix(&a).iter().enumerate() {
            assert_eq!(row.iter().sum::<usize>(), a.left_ideal_basis(v).len());
        }
        assert_eq!(radical(&a).len(), 2);
        assert!(is_local(&a).is_false());
        let kk = build_algebra(&fixtures::semisimple_kk()).unwrap();
        assert_eq!(cartan_matrix(&kk), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(cartan_matrix(&build_algebra(&fixtures::dual_numbers()).unwrap()), vec![vec![2]]);
        assert!(radical(&build_algebra(&fixtures::field_k()).unwrap()).is_empty());
    }

    #[test]
    fn matrix_algebra_from_table() {
        // M_2(k) with basis E11, E12, E21, E22
        let q = Field::Rationals;
        let idx = |i: usize, j: usize| 2 * i + j;
        let mut table = vec![Vec::new(); 16];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    table[idx(i, j) * 4 + idx(j, k)] = vec![(idx(i, k), q.one())];
                }
            }
        }
        let unit = vec![q.one(), q.zero(), q.zero(), q.one()];
        let labels = ["E11", "E12", "E21", "E22"].iter().map(|s| s.to_string()).collect();
        let m = algebra_from_table(q, labels, table.clone(), unit.clone(), Origin::Endomorphism).unwrap();
        let f = fingerprint(&m);
        assert_eq!((f.dim, f.num_simples, f.basic, f.local), (4, 1, false, Some(false)));
        let f2 = Field::prime(2).unwrap();
        let t2 = table.iter().map(|e| e.iter().map(|(k, _)| (*k, f2.one())).collect()).collect();
        let u2 = vec![f2.one(), f2.zero(), f2.zero(), f2.one()];
        let labels = ["E11", "E12", "E21", "E22"].iter().map(|s| s.to_string()).collect();
        let m2 = algebra_from_table(f2, labels, t2, u2, Origin::Endomorphism).unwrap();
        assert!(m2.radical_basis().is_empty());
    }
}
