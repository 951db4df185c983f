use thiserror::Error;

use super::{solve_on_rows, ResolutionReport};
use crate::exactla::{Mat, Scalar};
use crate::fdmod::{join_components, proj_sum, split_components, PMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("no lift exists in degree {0}; the input map is not a module map")]
    LiftInconsistent(usize),
}

/// Degreewise lifts f_i: P_i → P'_i of a module map.
#[derive(Clone, Debug)]
pub struct ChainLift {
    pub maps: Vec<PMap>,
}

/// Image of the generator of summand s of P_0 in M.
fn generator_image(res: &ResolutionReport, s: usize) -> Vec<Scalar> {
    let a = res.algebra();
    let vs = &res.terms[0];
    let mut off = 0;
    for v in &vs[..s] {
        off += a.left_ideal_basis(*v).len();
    }
    let u = vs[s];
    let pos = a.left_ideal_basis(u).iter().position(|&b| b == a.idempotent(u)).unwrap();
    res.augmentation.row(off + pos).to_vec()
}

fn block_rows(a: &crate::algebra::BasedAlgebra, vs: &[usize], u: usize) -> Vec<usize> {
    let mut rows = Vec::new();
    let mut off = 0;
    for &v in vs {
        for (k, b) in a.left_ideal_basis(v).into_iter().enumerate() {
            if a.tag(b).1 == u {
                rows.push(off + k);
            }
        }
        off += a.left_ideal_basis(v).len();
    }
    rows
}

/// Lifts φ: M → M' (rows indexed by M) to maps between the resolutions in
/// degrees 0..=upto.
pub fn lift_map(src: &mut ResolutionReport, tgt: &mut ResolutionReport, phi: &Mat, upto: usize) -> Result<ChainLift, LiftError> {
    src.extend_to(upto);
    tgt.extend_to(upto + 1);
    let a = src.algebra().clone();
    let mut maps: Vec<PMap> = Vec::new();
    for i in 0..=upto {
        let Some(ps) = src.terms.get(i).cloned() else {
            break;
        };
        let pt = tgt.terms.get(i).cloned().unwrap_or_default();
        let mut f = PMap::zero(&a, &ps, &pt);
        let target_matrix = if i == 0 { tgt.augmentation.clone() } else { tgt.map(i).to_matrix(&a) };
        let needed: Option<PMap> = if i == 0 { None } else { Some(maps[i - 1].compose(&a, &src.map(i))) };
        for (s, &u) in ps.iter().enumerate() {
            let y: Vec<Scalar> = match &needed {
                None => phi.vec_mul(&generator_image(src, s)),
                Some(n) => {
                    let col: Vec<Vec<Scalar>> = (0..n.tgt.len()).map(|j| n.entry(j, s).to_vec()).collect();
                    join_components(&a, &n.tgt, &col)
                }
            };
            if crate::exactla::is_zero_vec(&y) {
                continue;
            }
            if pt.is_empty() {
                return Err(LiftError::LiftInconsistent(i));
            }
            let rows = block_rows(&a, &pt, u);
            let x = solve_on_rows(&target_matrix, &rows, &y).ok_or(LiftError::LiftInconsistent(i))?;
            for (j, comp) in split_components(&a, &pt, &x).into_iter().enumerate() {
                f.set(j, s, comp);
            }
        }
        maps.push(f);
    }
    Ok(ChainLift { maps })
}

pub fn lift_action(res: &mut ResolutionReport, phi: &Mat, upto: usize) -> Result<ChainLift, LiftError> {
    let mut other = res.clone();
    let out = lift_map(res, &mut other, phi, upto);
    *res = other;
    out
}

impl ChainLift {
    /// Checks ε' f_0 = φ ε and d' f_i = f_{i-1} d.
    pub fn verify(&self, src: &mut ResolutionReport, tgt: &mut ResolutionReport, phi: &Mat) -> bool {
        let a = src.algebra().clone();
        for (i, f) in self.maps.iter().enumerate() {
            if i == 0 {
                let lhs = f.to_matrix(&a).mul(&tgt.augmentation);
                let rhs = src.augmentation.mul(phi);
                if lhs != rhs {
                    return false;
                }
            } else {
                let lhs = tgt.map(i).compose(&a, f);
                let rhs = self.maps[i - 1].compose(&a, &src.map(i));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Module matrices of the lifts.
    pub fn matrices(&self, a: &crate::algebra::AlgRef) -> Vec<Mat> {
        self.maps
            .iter()
            .map(|m| {
                if m.src.is_empty() || m.tgt.is_empty() {
                    let rows = proj_sum(a, &m.src).0.dim();
                    let cols = proj_sum(a, &m.tgt).0.dim();
                    Mat::zeros(a.field(), rows, cols)
                } else {
                    m.to_matrix(a)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fdmod::{hom_space, simple_module};
    use crate::fixtures;
    use crate::homology::min_resolution;
    use std::sync::Arc;

    #[test]
    fn identity_and_zero_lift() {
        let a = Arc::new(build_algebra(&fixtures::jordan_holder()).unwrap());
        let s = simple_module(&a, 0);
        let mut r = min_resolution(&s, 20);
        let id = Mat::identity(a.field(), 1);
        let mut r2 = r.clone();
        let l = lift_map(&mut r, &mut r2, &id, 3).unwrap();
        assert!(l.verify(&mut r, &mut r2, &id));
        for (i, f) in l.maps.iter().enumerate() {
            for v in 0..2 {
                assert!(f.top_matrix(&a, v).is_invertible(), "degree {i}");
            }
        }
        let z = Mat::zeros(a.field(), 1, 1);
        let l = lift_map(&mut r, &mut r2, &z, 3).unwrap();
        assert!(l.maps.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn lift_endomorphisms_of_projective_quotients() {
        let a = Arc::new(build_algebra(&fixtures::fourteen()).unwrap());
        let m = crate::fdmod::quotient_module(&a, &[0]);
        let mut r = min_resolution(&m, 30);
        for phi in hom_space(&m, &m).unwrap() {
            let mut r2 = r.clone();
            let l = lift_map(&mut r, &mut r2, &phi, 3).unwrap();
            assert!(l.verify(&mut r, &mut r2, &phi));
        }
    }
}
