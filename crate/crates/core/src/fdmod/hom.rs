use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FDModule, ModuleError};
use crate::exactla::{Mat, Scalar};
use crate::tri::{Cert, TriBool};

/// Exhaustive isomorphism search limit over finite fields.
const EXHAUSTIVE_LIMIT: f64 = 65536.0;

#[derive(Clone, Debug)]
pub struct ModuleHom {
    pub source: FDModule,
    pub target: FDModule,
    pub matrix: Mat,
}

impl ModuleHom {
    /// R^M_b F = F R^N_b for every generator b.
    pub fn verify(&self) -> bool {
        intertwines(&self.source, &self.target, &self.matrix)
    }
}

pub fn intertwines(m: &FDModule, n: &FDModule, f: &Mat) -> bool {
    m.algebra().generators().iter().all(|&g| m.action(g).mul(f) == f.mul(n.action(g)))
}

fn same_algebra(m: &FDModule, n: &FDModule) -> bool {
    Arc::ptr_eq(m.algebra(), n.algebra()) || m.algebra().same_structure(n.algebra())
}

/// Basis of Hom_A(m, n) as matrices (rows indexed by the basis of m).
pub fn hom_space(m: &FDModule, n: &FDModule) -> Result<Vec<Mat>, ModuleError> {
    if !same_algebra(m, n) {
        return Err(ModuleError::AlgebraMismatch);
    }
    let f = m.field();
    let a = m.algebra();
    // unknowns: F[r][c] with matching blocks
    let mut var = vec![usize::MAX; m.dim() * n.dim()];
    let mut vars = Vec::new();
    for r in 0..m.dim() {
        for c in 0..n.dim() {
            if m.vertex_of()[r] == n.vertex_of()[c] {
                var[r * n.dim() + c] = vars.len();
                vars.push((r, c));
            }
        }
    }
    if vars.is_empty() {
        return Ok(Vec::new());
    }
    let gens: Vec<usize> =
        a.generators().into_iter().filter(|&g| a.vertex_data().is_none() || a.is_radical(g)).collect();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for &g in &gens {
        let (rm, rn) = (m.action(g), n.action(g));
        let (l, rt) = a.block_tag(g);
        for r in (0..m.dim()).filter(|&r| m.vertex_of()[r] == l) {
            for c in (0..n.dim()).filter(|&c| n.vertex_of()[c] == rt) {
                let mut eq = f.zeros(vars.len());
                let mut any = false;
                for k in 0..m.dim() {
                    let x = rm.get(r, k);
                    if !x.is_zero() && var[k * n.dim() + c] != usize::MAX {
                        eq[var[k * n.dim() + c]] += x;
                        any = true;
                    }
                }
                for k in 0..n.dim() {
                    let x = rn.get(k, c);
                    if !x.is_zero() && var[r * n.dim() + k] != usize::MAX {
                        eq[var[r * n.dim() + k]] -= x;
                        any = true;
                    }
                }
                if any {
                    rows.push(eq);
                }
            }
        }
    }
    let sys = Mat::from_rows(f, vars.len(), rows);
    let kern = sys.kernel_vectors();
    Ok(kern
        .into_iter()
        .map(|v| {
            let mut fm = Mat::zeros(f, m.dim(), n.dim());
            for (x, &(r, c)) in v.into_iter().zip(&vars) {
                fm.set(r, c, x);
            }
            fm
        })
        .collect())
}

pub fn hom_dim(m: &FDModule, n: &FDModule) -> Result<usize, ModuleError> {
    Ok(hom_space(m, n)?.len())
}

/// An explicit isomorphism with its verified inverse.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub forward: Mat,
    pub inverse: Mat,
}

#[derive(Serialize)]
struct IsoSummary {
    dim: usize,
    hom_dim: usize,
}

fn combine(basis: &[Mat], coeffs: &[Scalar]) -> Mat {
    let mut out = Mat::zeros(basis[0].field(), basis[0].rows(), basis[0].cols());
    for (b, c) in basis.iter().zip(coeffs) {
        out.axpy(c, b);
    }
    out
}

fn certify(m: &FDModule, n: &FDModule, f: &Mat) -> Option<IsoCertificate> {
    let inv = f.inverse()?;
    if intertwines(n, m, &inv) && f.mul(&inv) == Mat::identity(m.field(), m.dim()) {
        Some(IsoCertificate { forward: f.clone(), inverse: inv })
    } else {
        None
    }
}

/// Searches for an isomorphism m → n. False is returned only when an
/// invariant differs or the Hom space was searched exhaustively.
pub fn find_isomorphism(m: &FDModule, n: &FDModule, seed: u64, samples: usize) -> (TriBool, Option<IsoCertificate>) {
    if !same_algebra(m, n) {
        return (TriBool::no("different algebras"), None);
    }
    if m.dim() != n.dim() {
        return (TriBool::False(Cert::with("dimensions differ", (m.dim(), n.dim()))), None);
    }
    if m.dim() == 0 {
        return (TriBool::yes("both zero"), Some(IsoCertificate { forward: Mat::zeros(m.field(), 0, 0), inverse: Mat::zeros(m.field(), 0, 0) }));
    }
    if m.vertex_dims() != n.vertex_dims() {
        return (TriBool::False(Cert::with("dimension vectors differ", (m.vertex_dims(), n.vertex_dims()))), None);
    }
    if m.radical_filtration() != n.radical_filtration() {
        return (TriBool::no("radical layers differ"), None);
    }
    let basis = hom_space(m, n).expect("same algebra");
    if basis.is_empty() {
        return (TriBool::no("Hom(M, N) = 0"), None);
    }
    let end_m = hom_dim(m, m).unwrap();
    if end_m != basis.len() {
        return (TriBool::False(Cert::with("dim Hom(M,N) differs from dim End(M)", (basis.len(), end_m))), None);
    }
    let f = m.field();
    for b in &basis {
        if let Some(c) = certify(m, n, b) {
            return (TriBool::True(Cert::with("invertible hom", IsoSummary { dim: m.dim(), hom_dim: basis.len() })), Some(c));
        }
    }
    if let Some(elems) = f.elements() {
        let size = (elems.len() as f64).powi(basis.len() as i32);
        if size <= EXHAUSTIVE_LIMIT {
            let mut coeffs = vec![f.zero(); basis.len()];
            let p = elems.len();
            for idx in 1..size as usize {
                let mut x = idx;
                for c in coeffs.iter_mut() {
                    *c = elems[x % p].clone();
                    x /= p;
                }
                let fm = combine(&basis, &coeffs);
                if let Some(c) = certify(m, n, &fm) {
                    return (TriBool::True(Cert::with("invertible hom", IsoSummary { dim: m.dim(), hom_dim: basis.len() })), Some(c));
                }
            }
            return (TriBool::False(Cert::with("no invertible element in Hom(M,N) (exhaustive)", basis.len())), None);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let coeffs: Vec<Scalar> = (0..basis.len()).map(|_| f.random(&mut rng, 7)).collect();
        let fm = combine(&basis, &coeffs);
        if let Some(c) = certify(m, n, &fm) {
            return (TriBool::True(Cert::with("invertible hom", IsoSummary { dim: m.dim(), hom_dim: basis.len() })), Some(c));
        }
    }
    (TriBool::Unknown(Cert::with("random search found no invertible hom", samples)), None)
}

pub fn is_isomorphic(m: &FDModule, n: &FDModule, seed: u64, samples: usize) -> TriBool {
    find_isomorphism(m, n, seed, samples).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fdmod::{projective_module, quotient_module, simple_module};
    use crate::fixtures;

    #[test]
    fn hom_examples() {
        let a = Arc::new(build_algebra(&fixtures::ladder_three()).unwrap());
        let p1 = projective_module(&a, 0);
        let p2 = projective_module(&a, 1);
        let s1 = simple_module(&a, 0);
        let s2 = simple_module(&a, 1);
        assert_eq!(hom_dim(&p2, &p2).unwrap(), 2);
        assert_eq!(hom_dim(&s1, &s2).unwrap(), 0);
        assert_eq!(hom_dim(&p1, &s1).unwrap(), 1);
        for h in hom_space(&p1, &p2).unwrap() {
            assert!(intertwines(&p1, &p2, &h));
        }
        assert!(is_isomorphic(&p1, &p1, 1, 20).is_true());
        assert!(is_isomorphic(&p1, &p2, 1, 20).is_false());
        let b = quotient_module(&a, &[0]);
        let (t, cert) = find_isomorphism(&b, &p2, 1, 20);
        assert!(t.is_true());
        let c = cert.unwrap();
        assert!(intertwines(&b, &p2, &c.forward));
    }
}
