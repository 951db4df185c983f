//! Minimal projective resolutions with periodicity detection, Ext and Tor
//! dimensions, and lifting of module maps along resolutions.

mod ext;
mod lift;

use serde::Serialize;

use crate::algebra::{AlgRef, BasedAlgebra};
use crate::exactla::{solve, Mat, Scalar};
use crate::fdmod::{find_isomorphism, proj_sum, split_components, FDModule, IsoCertificate, PMap};
use crate::tri::TriBool;

pub use ext::{ext_dim, ext_from, gldim, pd, tor_dim, tor_from, GlDim};
pub use lift::{lift_action, lift_map, ChainLift, LiftError};

/// Seed and sample count used for isomorphism tests inside resolutions.
pub const ISO_SEED: u64 = 0x5157;
pub const ISO_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PdStatus {
    Finite(usize),
    Periodic { pre: usize, period: usize },
    DepthExceeded(usize),
}

impl PdStatus {
    pub fn is_finite(&self) -> bool {
        matches!(self, PdStatus::Finite(_))
    }

    /// Finite pd is True, a certified periodic tail False.
    pub fn finiteness(&self) -> TriBool {
        match self {
            PdStatus::Finite(n) => TriBool::True(crate::tri::Cert::with("finite projective dimension", n)),
            PdStatus::Periodic { pre, period } => TriBool::False(crate::tri::Cert::with(
                "periodic resolution with verified syzygy isomorphism",
                serde_json::json!({"pre": pre, "period": period}),
            )),
            PdStatus::DepthExceeded(d) => TriBool::Unknown(crate::tri::Cert::with("depth exceeded", d)),
        }
    }
}

impl std::fmt::Display for PdStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PdStatus::Finite(n) => write!(f, "Finite({n})"),
            PdStatus::Periodic { pre, period } => write!(f, "Periodic({pre},{period})"),
            PdStatus::DepthExceeded(d) => write!(f, "DepthExceeded({d})"),
        }
    }
}

pub fn default_depth(a: &BasedAlgebra) -> usize {
    2 * a.dim() + 4
}

/// Minimal projective resolution P_• → M.
#[derive(Clone, Debug)]
pub struct ResolutionReport {
    pub module: FDModule,
    /// vertex of every summand, per degree
    pub terms: Vec<Vec<usize>>,
    /// maps[i]: P_{i+1} → P_i
    pub maps: Vec<PMap>,
    /// P_0 → M in module coordinates
    pub augmentation: Mat,
    /// syzygies[0] = M, syzygies[i] = Ω^i M ⊆ P_{i-1}
    pub syzygies: Vec<FDModule>,
    /// inclusion Ω^{i+1} → P_i
    pub inclusions: Vec<Mat>,
    pub status: PdStatus,
    pub iso: Option<IsoCertificate>,
}

#[derive(Serialize)]
struct ResolutionJson<'a> {
    module_dim: usize,
    terms: Vec<Vec<usize>>,
    syzygy_dims: Vec<usize>,
    status: &'a PdStatus,
    maps: &'a [PMap],
}

impl Serialize for ResolutionReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ResolutionJson {
            module_dim: self.module.dim(),
            terms: (0..self.terms.len()).map(|i| self.multiplicities(i)).collect(),
            syzygy_dims: self.syzygies.iter().map(|m| m.dim()).collect(),
            status: &self.status,
            maps: &self.maps,
        }
        .serialize(s)
    }
}

/// One step: projective cover of `m` and the kernel.
struct CoverStep {
    vertices: Vec<usize>,
    lifts: Vec<Vec<Scalar>>,
    cover: Mat,
    kernel: FDModule,
    inclusion: Mat,
}

fn cover_step(m: &FDModule) -> CoverStep {
    let a = m.algebra();
    let lifts = m.top_lifts();
    let vertices: Vec<usize> = lifts.iter().map(|(u, _)| *u).collect();
    let lifts: Vec<Vec<Scalar>> = lifts.into_iter().map(|(_, v)| v).collect();
    let (p, _) = proj_sum(a, &vertices);
    let mut rows = Vec::with_capacity(p.dim());
    for (s, &u) in vertices.iter().enumerate() {
        for b in a.left_ideal_basis(u) {
            rows.push(m.act_basis(&lifts[s], b));
        }
    }
    let cover = Mat::from_rows(m.field(), m.dim(), rows);
    let (kernel, inclusion) = p.kernel_of(&cover);
    CoverStep { vertices, lifts, cover, kernel, inclusion }
}

/// Projective cover P → M; returns the summand vertices and the surjection.
pub fn projective_cover(m: &FDModule) -> (Vec<usize>, FDModule, Mat) {
    let step = cover_step(m);
    let (p, _) = proj_sum(m.algebra(), &step.vertices);
    (step.vertices, p, step.cover)
}

/// Image of a generator lift of Ω^{i+1} ⊆ P_i as a column of the next map.
fn column(a: &BasedAlgebra, vertices: &[usize], inclusion: &Mat, lift: &[Scalar]) -> Vec<Vec<Scalar>> {
    split_components(a, vertices, &inclusion.vec_mul(lift))
}

impl ResolutionReport {
    /// Multiplicity vector of P_i.
    pub fn multiplicities(&self, i: usize) -> Vec<usize> {
        let mut m = vec![0; self.module.algebra().num_vertices()];
        for &v in &self.terms[i] {
            m[v] += 1;
        }
        m
    }

    pub fn algebra(&self) -> &AlgRef {
        self.module.algebra()
    }

    /// Computes one more term unconditionally (no periodicity check);
    /// returns false when the resolution has terminated.
    fn push_step(&mut self) -> bool {
        let last = self.syzygies.last().unwrap().clone();
        if last.is_zero() {
            return false;
        }
        let step = cover_step(&last);
        let i = self.terms.len();
        if i > 0 {
            let a = self.algebra().clone();
            let prev = &self.terms[i - 1];
            let inc = &self.inclusions[i - 1];
            let mut map = PMap::zero(&a, &step.vertices, prev);
            for (s, l) in step.lifts.iter().enumerate() {
                for (j, x) in column(&a, prev, inc, l).into_iter().enumerate() {
                    map.set(j, s, x);
                }
            }
            self.maps.push(map);
        } else {
            self.augmentation = step.cover.clone();
        }
        self.terms.push(step.vertices);
        self.syzygies.push(step.kernel);
        self.inclusions.push(step.inclusion);
        true
    }

    /// Makes sure terms P_0..=P_n and maps up to P_n → P_{n-1} exist, unless
    /// the resolution stops earlier.
    pub fn extend_to(&mut self, n: usize) {
        while self.terms.len() <= n {
            if !self.push_step() {
                break;
            }
        }
    }

    /// Largest index with a computed term.
    pub fn length(&self) -> usize {
        self.terms.len()
    }

    /// P_i with zero beyond a finite resolution.
    pub fn term(&mut self, i: usize) -> Vec<usize> {
        self.extend_to(i);
        self.terms.get(i).cloned().unwrap_or_default()
    }

    /// d_i: P_i → P_{i-1} for i ≥ 1.
    pub fn map(&mut self, i: usize) -> PMap {
        self.extend_to(i);
        let a = self.algebra().clone();
        match self.maps.get(i - 1) {
            Some(m) => m.clone(),
            None => PMap::zero(&a, &self.terms.get(i).cloned().unwrap_or_default(), &self.terms.get(i - 1).cloned().unwrap_or_default()),
        }
    }

    /// d_{i} ∘ d_{i+1} = 0 and every map has radical entries.
    pub fn verify(&self) -> bool {
        let a = self.algebra();
        let zero_comp = self.maps.windows(2).all(|w| w[0].compose(a, &w[1]).is_zero());
        let aug = self.maps.first().is_none_or(|d1| d1.to_matrix(a).mul(&self.augmentation).is_zero());
        zero_comp && aug && self.maps.iter().all(|m| m.is_radical(a))
    }

    /// Re-checks the isomorphism carried by a Periodic status.
    pub fn verify_periodic(&self) -> bool {
        match (self.status, &self.iso) {
            (PdStatus::Periodic { pre, period }, Some(c)) => {
                let (m, n) = (&self.syzygies[pre], &self.syzygies[pre + period]);
                let id = Mat::identity(m.field(), m.dim());
                crate::fdmod::ModuleHom { source: m.clone(), target: n.clone(), matrix: c.forward.clone() }.verify()
                    && crate::fdmod::ModuleHom { source: n.clone(), target: m.clone(), matrix: c.inverse.clone() }.verify()
                    && c.forward.mul(&c.inverse) == id
            }
            (PdStatus::Periodic { .. }, None) => false,
            _ => true,
        }
    }
}

/// Resolution without periodicity checks; terms are computed on demand
/// with `extend_to`. The status stays DepthExceeded until it terminates.
pub fn lazy_resolution(m: &FDModule) -> ResolutionReport {
    ResolutionReport {
        module: m.clone(),
        terms: Vec::new(),
        maps: Vec::new(),
        augmentation: Mat::zeros(m.field(), 0, m.dim()),
        syzygies: vec![m.clone()],
        inclusions: Vec::new(),
        status: if m.is_zero() { PdStatus::Finite(0) } else { PdStatus::DepthExceeded(0) },
        iso: None,
    }
}

/// Minimal resolution with periodicity detection against every earlier
/// syzygy.
pub fn min_resolution(m: &FDModule, depth: usize) -> ResolutionReport {
    let f = m.field();
    let mut r = ResolutionReport {
        module: m.clone(),
        terms: Vec::new(),
        maps: Vec::new(),
        augmentation: Mat::zeros(f, 0, m.dim()),
        syzygies: vec![m.clone()],
        inclusions: Vec::new(),
        status: PdStatus::Finite(0),
        iso: None,
    };
    if m.is_zero() {
        return r;
    }
    let depth = depth.max(1);
    loop {
        r.push_step();
        let i = r.terms.len() - 1;
        let k = r.syzygies[i + 1].clone();
        if k.is_zero() {
            r.status = PdStatus::Finite(i);
            return r;
        }
        for j in 0..=i {
            let (t, cert) = find_isomorphism(&r.syzygies[j], &k, ISO_SEED, ISO_SAMPLES);
            if t.is_true() {
                r.status = PdStatus::Periodic { pre: j, period: i + 1 - j };
                r.iso = cert;
                return r;
            }
        }
        if i + 1 >= depth {
            r.status = PdStatus::DepthExceeded(depth);
            return r;
        }
    }
}

/// Solves x·D = y for a row vector x supported on the given rows of D.
pub(crate) fn solve_on_rows(d: &Mat, rows: &[usize], y: &[Scalar]) -> Option<Vec<Scalar>> {
    let f = d.field();
    let sub = d.submatrix(rows, &(0..d.cols()).collect::<Vec<_>>());
    let b = Mat::from_rows(f, 1, y.iter().map(|c| vec![c.clone()]).collect());
    let x = solve(&sub.transpose(), &b).ok()??;
    let mut out = f.zeros(d.rows());
    for (k, &r) in rows.iter().enumerate() {
        out[r] = x.get(k, 0).clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::fdmod::{projective_module, quotient_module, simple_module};
    use crate::fixtures;
    use std::sync::Arc;

    #[test]
    fn resolutions_from_examples() {
        let a = Arc::new(build_algebra(&fixtures::ladder_three()).unwrap());
        let r = min_resolution(&quotient_module(&a, &[1]), 20);
        assert_eq!(r.status, PdStatus::Periodic { pre: 1, period: 1 });
        assert_eq!(r.terms[0], vec![0]);
        assert_eq!(r.terms[1], vec![1]);
        assert!(r.verify() && r.verify_periodic());
        let r = min_resolution(&quotient_module(&a, &[0]), 20);
        assert_eq!(r.status, PdStatus::Finite(0));
        assert_eq!(r.terms, vec![vec![1]]);

        let jh = Arc::new(build_algebra(&fixtures::jordan_holder()).unwrap());
        let mut r = min_resolution(&quotient_module(&jh, &[1]), 30);
        assert_eq!(r.status, PdStatus::Periodic { pre: 1, period: 1 });
        assert_eq!(r.multiplicities(0), vec![1, 0]);
        assert_eq!(r.multiplicities(1), vec![0, 2]);
        r.extend_to(3);
        assert_eq!(r.multiplicities(2), vec![0, 2]);
        assert_eq!(r.multiplicities(3), vec![0, 2]);
        assert!(r.verify());

        let f = Arc::new(build_algebra(&fixtures::fourteen()).unwrap());
        let mut r = min_resolution(&quotient_module(&f, &[0]), 32);
        assert!(matches!(r.status, PdStatus::Periodic { .. }));
        r.extend_to(3);
        assert_eq!(r.multiplicities(0), vec![0, 1]);
        for i in 1..=3 {
            assert_eq!(r.multiplicities(i), vec![1, 0]);
        }
        assert!(r.verify() && r.verify_periodic());
    }

    #[test]
    fn covers() {
        let a = Arc::new(build_algebra(&fixtures::ladder_three()).unwrap());
        let (v, _, _) = projective_cover(&simple_module(&a, 0));
        assert_eq!(v, vec![0]);
        let (v, _, e) = projective_cover(&projective_module(&a, 1));
        assert_eq!(v, vec![1]);
        assert!(e.is_invertible());
    }
}
