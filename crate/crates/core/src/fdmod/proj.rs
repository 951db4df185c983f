use serde::Serialize;

use super::FDModule;
use crate::algebra::{AlgRef, BasedAlgebra};
use crate::exactla::{is_zero_vec, Field, Mat, Scalar};

/// ⊕ P_v over the listed vertices, with the coordinate offset of each
/// summand. Summand i has basis e_{v_i} A in basis order.
pub fn proj_sum(a: &AlgRef, vertices: &[usize]) -> (FDModule, Vec<usize>) {
    let f = a.field();
    let bases: Vec<Vec<usize>> = vertices.iter().map(|&v| a.left_ideal_basis(v)).collect();
    let mut offsets = Vec::new();
    let mut total = 0;
    for b in &bases {
        offsets.push(total);
        total += b.len();
    }
    let mut vertex_of = Vec::with_capacity(total);
    for b in &bases {
        vertex_of.extend(b.iter().map(|&x| a.tag(x).1));
    }
    let action = (0..a.dim())
        .map(|g| {
            let mut m = Mat::zeros(f, total, total);
            for (s, basis) in bases.iter().enumerate() {
                let pos = |x: usize| basis.iter().position(|&y| y == x).expect("product leaves e_v A");
                for (r, &x) in basis.iter().enumerate() {
                    for (k, c) in a.product(x, g) {
                        m.set(offsets[s] + r, offsets[s] + pos(*k), c.clone());
                    }
                }
            }
            m
        })
        .collect();
    (FDModule::from_parts(a.clone(), action, vertex_of), offsets)
}

/// Splits a vector of proj_sum(vertices) into one algebra element per
/// summand.
pub fn split_components(a: &BasedAlgebra, vertices: &[usize], v: &[Scalar]) -> Vec<Vec<Scalar>> {
    let mut off = 0;
    let mut out = Vec::with_capacity(vertices.len());
    for &u in vertices {
        let basis = a.left_ideal_basis(u);
        let mut x = a.zero_vec();
        for (k, &b) in basis.iter().enumerate() {
            x[b] = v[off + k].clone();
        }
        off += basis.len();
        out.push(x);
    }
    out
}

/// Inverse of split_components.
pub fn join_components(a: &BasedAlgebra, vertices: &[usize], xs: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut out = Vec::new();
    for (&u, x) in vertices.iter().zip(xs) {
        out.extend(a.left_ideal_basis(u).iter().map(|&b| x[b].clone()));
    }
    out
}

/// Map ⊕_i P_{src_i} → ⊕_j P_{tgt_j}. Entry (j, i) is an element of
/// e_{tgt_j} A e_{src_i}; summand i sends e_{src_i} to Σ_j entry(j, i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMap {
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    entries: Vec<Vec<Scalar>>,
}

#[derive(Serialize)]
struct PMapJson<'a> {
    src: &'a [usize],
    tgt: &'a [usize],
    entries: Vec<Vec<Vec<String>>>,
}

impl Serialize for PMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.tgt.len())
            .map(|j| (0..self.src.len()).map(|i| self.entry(j, i).iter().map(|c| c.to_string()).collect()).collect())
            .collect();
        PMapJson { src: &self.src, tgt: &self.tgt, entries }.serialize(s)
    }
}

impl PMap {
    pub fn zero(a: &BasedAlgebra, src: &[usize], tgt: &[usize]) -> PMap {
        PMap { src: src.to_vec(), tgt: tgt.to_vec(), entries: vec![a.zero_vec(); src.len() * tgt.len()] }
    }

    pub fn identity(a: &BasedAlgebra, vs: &[usize]) -> PMap {
        let mut m = PMap::zero(a, vs, vs);
        for (i, &v) in vs.iter().enumerate() {
            m.set(i, i, a.basis_vector(a.idempotent(v)));
        }
        m
    }

    pub fn entry(&self, j: usize, i: usize) -> &[Scalar] {
        &self.entries[j * self.src.len() + i]
    }

    pub fn entry_mut(&mut self, j: usize, i: usize) -> &mut Vec<Scalar> {
        let n = self.src.len();
        &mut self.entries[j * n + i]
    }

    pub fn set(&mut self, j: usize, i: usize, x: Vec<Scalar>) {
        let n = self.src.len();
        self.entries[j * n + i] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| is_zero_vec(e))
    }

    /// self ∘ other: first other, then self.
    pub fn compose(&self, a: &BasedAlgebra, other: &PMap) -> PMap {
        assert_eq!(self.src, other.tgt, "composing incompatible maps");
        let mut out = PMap::zero(a, &other.src, &self.tgt);
        for k in 0..self.tgt.len() {
            for i in 0..other.src.len() {
                let mut acc = a.zero_vec();
                for j in 0..self.src.len() {
                    let (g, f) = (self.entry(k, j), other.entry(j, i));
                    if is_zero_vec(g) || is_zero_vec(f) {
                        continue;
                    }
                    crate::exactla::axpy(&mut acc, &a.field().one(), &a.mul(g, f));
                }
                out.set(k, i, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &PMap) -> PMap {
        assert_eq!((&self.src, &self.tgt), (&other.src, &other.tgt));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
            .collect();
        PMap { src: self.src.clone(), tgt: self.tgt.clone(), entries }
    }

    pub fn scale(&self, c: &Scalar) -> PMap {
        let entries = self.entries.iter().map(|x| x.iter().map(|p| p * c).collect()).collect();
        PMap { src: self.src.clone(), tgt: self.tgt.clone(), entries }
    }

    pub fn neg(&self, f: Field) -> PMap {
        self.scale(&(-f.one()))
    }

    /// All entries lie in the radical.
    pub fn is_radical(&self, a: &BasedAlgebra) -> bool {
        self.entries.iter().all(|e| e.iter().enumerate().all(|(b, c)| c.is_zero() || a.is_radical(b)))
    }

    /// Matrix between the summands at vertex v formed by the coefficients
    /// of e_v (rows: target summands at v, columns: source summands at v).
    pub fn top_matrix(&self, a: &BasedAlgebra, v: usize) -> Mat {
        let rows: Vec<usize> = (0..self.tgt.len()).filter(|&j| self.tgt[j] == v).collect();
        let cols: Vec<usize> = (0..self.src.len()).filter(|&i| self.src[i] == v).collect();
        let e = a.idempotent(v);
        let data = rows.iter().map(|&j| cols.iter().map(|&i| self.entry(j, i)[e].clone()).collect()).collect();
        Mat::from_rows(a.field(), cols.len(), data)
    }

    /// Matrix of the map in the bases of proj_sum(src) and proj_sum(tgt).
    pub fn to_matrix(&self, a: &BasedAlgebra) -> Mat {
        let f = a.field();
        let sb: Vec<Vec<usize>> = self.src.iter().map(|&v| a.left_ideal_basis(v)).collect();
        let tb: Vec<Vec<usize>> = self.tgt.iter().map(|&v| a.left_ideal_basis(v)).collect();
        let rows: usize = sb.iter().map(|b| b.len()).sum();
        let cols: usize = tb.iter().map(|b| b.len()).sum();
        let toff: Vec<usize> = tb.iter().scan(0, |s, b| { let o = *s; *s += b.len(); Some(o) }).collect();
        let mut m = Mat::zeros(f, rows, cols);
        let mut r = 0;
        for (i, basis) in sb.iter().enumerate() {
            for &x in basis {
                for (j, tbasis) in tb.iter().enumerate() {
                    let y = a.mul_basis_right(self.entry(j, i), x);
                    for (c, &t) in tbasis.iter().enumerate() {
                        if !y[t].is_zero() {
                            m.set(r, toff[j] + c, y[t].clone());
                        }
                    }
                }
                r += 1;
            }
        }
        m
    }

    /// Block of the map restricted to chosen source/target summands.
    pub fn sub(&self, rows: &[usize], cols: &[usize]) -> PMap {
        let mut out = PMap {
            src: cols.iter().map(|&i| self.src[i]).collect(),
            tgt: rows.iter().map(|&j| self.tgt[j]).collect(),
            entries: Vec::with_capacity(rows.len() * cols.len()),
        };
        for &j in rows {
            for &i in cols {
                out.entries.push(self.entry(j, i).to_vec());
            }
        }
        out
    }

    /// Stacks maps with the same source vertically (targets concatenated).
    pub fn vstack(&self, other: &PMap) -> PMap {
        assert_eq!(self.src, other.src);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        let mut tgt = self.tgt.clone();
        tgt.extend(&other.tgt);
        PMap { src: self.src.clone(), tgt, entries }
    }

    /// Concatenates maps with the same target horizontally.
    pub fn hstack(&self, other: &PMap) -> PMap {
        assert_eq!(self.tgt, other.tgt);
        let mut src = self.src.clone();
        src.extend(&other.src);
        let mut out = PMap { src, tgt: self.tgt.clone(), entries: Vec::new() };
        for j in 0..self.tgt.len() {
            for i in 0..self.src.len() {
                out.entries.push(self.entry(j, i).to_vec());
            }
            for i in 0..other.src.len() {
                out.entries.push(other.entry(j, i).to_vec());
            }
        }
        out
    }

    pub fn map_entries(&self, f: impl Fn(&[Scalar]) -> Vec<Scalar>) -> PMap {
        PMap { src: self.src.clone(), tgt: self.tgt.clone(), entries: self.entries.iter().map(|e| f(e)).collect() }
    }

    pub fn from_entries(src: Vec<usize>, tgt: Vec<usize>, entries: Vec<Vec<Scalar>>) -> PMap {
        assert_eq!(entries.len(), src.len() * tgt.len());
        PMap { src, tgt, entries }
    }

    pub fn entries(&self) -> &[Vec<Scalar>] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fixtures;
    use std::sync::Arc;

    #[test]
    fn matrices_compose() {
        let a = Arc::new(build_algebra(&fixtures::ladder_three()).unwrap());
        // α: P_2 → P_1 and β: P_2 → P_2
        let alpha = a.labels().iter().position(|l| l == "α").unwrap();
        let beta = a.labels().iter().position(|l| l == "β").unwrap();
        let mut f = PMap::zero(&a, &[1], &[0]);
        f.set(0, 0, a.basis_vector(alpha));
        let mut g = PMap::zero(&a, &[1], &[1]);
        g.set(0, 0, a.basis_vector(beta));
        assert!(f.compose(&a, &g).is_zero());
        let fm = f.to_matrix(&a);
        let gm = g.to_matrix(&a);
        assert!(gm.mul(&fm).is_zero());
        // module maps intertwine the actions
        let (p2, _) = proj_sum(&a, &[1]);
        let (p1, _) = proj_sum(&a, &[0]);
        for b in 0..a.dim() {
            assert_eq!(p2.action(b).mul(&fm), fm.mul(p1.action(b)));
        }
        assert!(f.is_radical(&a));
    }
}
