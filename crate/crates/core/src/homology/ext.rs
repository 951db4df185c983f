use serde::Serialize;

use super::{min_resolution, PdStatus, ResolutionReport};
use crate::algebra::AlgRef;
use crate::exactla::Mat;
use crate::fdmod::{simple_module, FDModule, PMap};

/// Index whose Ext/Tor value equals the one at i, using the periodic tail.
fn reduce_index(status: &PdStatus, i: usize) -> usize {
    match *status {
        PdStatus::Periodic { pre, period } if i > pre + period => pre + 1 + (i - pre - 1) % period,
        _ => i,
    }
}

/// Whether degree i (and its neighbours) lies in the computed range.
fn available(res: &mut ResolutionReport, i: usize) -> bool {
    match res.status {
        PdStatus::Finite(_) | PdStatus::Periodic { .. } => true,
        PdStatus::DepthExceeded(_) => {
            res.extend_to(i + 1);
            true
        }
    }
}

/// Matrix of Hom(d, N): Hom(P_{i-1}, N) → Hom(P_i, N), φ ↦ φ ∘ d.
fn hom_matrix(d: &PMap, n: &FDModule) -> Mat {
    let f = n.field();
    let blocks_src: Vec<Vec<usize>> = d.tgt.iter().map(|&v| n.block(v)).collect();
    let blocks_tgt: Vec<Vec<usize>> = d.src.iter().map(|&u| n.block(u)).collect();
    let rows: usize = blocks_src.iter().map(|b| b.len()).sum();
    let cols: usize = blocks_tgt.iter().map(|b| b.len()).sum();
    let mut m = Mat::zeros(f, rows, cols);
    let mut r = 0;
    for (j, bj) in blocks_src.iter().enumerate() {
        for &x in bj {
            let v = f.unit_vector(n.dim(), x);
            let mut c0 = 0;
            for (s, bs) in blocks_tgt.iter().enumerate() {
                let img = n.act(&v, d.entry(j, s));
                for (k, &y) in bs.iter().enumerate() {
                    m.set(r, c0 + k, img[y].clone());
                }
                c0 += bs.len();
            }
            r += 1;
        }
    }
    m
}

fn hom_term_dim(vs: &[usize], n: &FDModule) -> usize {
    let d = n.vertex_dims();
    vs.iter().map(|&v| d[v]).sum()
}

/// dim Ext^i(M, N) from an existing resolution of M.
pub fn ext_from(res: &mut ResolutionReport, n: &FDModule, i: usize) -> Option<usize> {
    if !available(res, i) {
        return None;
    }
    let i = reduce_index(&res.status.clone(), i);
    res.extend_to(i + 1);
    let pi = res.terms.get(i).cloned().unwrap_or_default();
    let c = hom_term_dim(&pi, n);
    if c == 0 {
        return Some(0);
    }
    let into = if i >= 1 { hom_matrix(&res.map(i), n).rank() } else { 0 };
    let out = if res.terms.len() > i + 1 { hom_matrix(&res.map(i + 1), n).rank() } else { 0 };
    Some(c - into - out)
}

pub fn ext_dim(m: &FDModule, n: &FDModule, i: usize, depth: usize) -> Option<usize> {
    let mut res = min_resolution(m, depth);
    ext_from(&mut res, n, i)
}

/// Matrix of d ⊗ N: P_i ⊗ N → P_{i-1} ⊗ N, where N is a right module over
/// the opposite algebra (a left A-module).
fn tensor_matrix(d: &PMap, n: &FDModule) -> Mat {
    let f = n.field();
    let blocks_src: Vec<Vec<usize>> = d.src.iter().map(|&u| n.block(u)).collect();
    let blocks_tgt: Vec<Vec<usize>> = d.tgt.iter().map(|&v| n.block(v)).collect();
    let rows: usize = blocks_src.iter().map(|b| b.len()).sum();
    let cols: usize = blocks_tgt.iter().map(|b| b.len()).sum();
    let mut m = Mat::zeros(f, rows, cols);
    let mut r = 0;
    for (s, bs) in blocks_src.iter().enumerate() {
        for &x in bs {
            let v = f.unit_vector(n.dim(), x);
            let mut c0 = 0;
            for (j, bj) in blocks_tgt.iter().enumerate() {
                // e_u ⊗ n ↦ e_v ⊗ d_{js}·n
                let img = n.act(&v, d.entry(j, s));
                for (k, &y) in bj.iter().enumerate() {
                    m.set(r, c0 + k, img[y].clone());
                }
                c0 += bj.len();
            }
            r += 1;
        }
    }
    m
}

/// dim Tor_i(M, N) from a resolution of M; N is a right module over the
/// opposite algebra.
pub fn tor_from(res: &mut ResolutionReport, n: &FDModule, i: usize) -> Option<usize> {
    if !available(res, i) {
        return None;
    }
    let i = reduce_index(&res.status.clone(), i);
    res.extend_to(i + 1);
    let pi = res.terms.get(i).cloned().unwrap_or_default();
    let c = hom_term_dim(&pi, n);
    if c == 0 {
        return Some(0);
    }
    let out = if i >= 1 { tensor_matrix(&res.map(i), n).rank() } else { 0 };
    let into = if res.terms.len() > i + 1 { tensor_matrix(&res.map(i + 1), n).rank() } else { 0 };
    Some(c - into - out)
}

pub fn tor_dim(m: &FDModule, n: &FDModule, i: usize, depth: usize) -> Option<usize> {
    let mut res = min_resolution(m, depth);
    tor_from(&mut res, n, i)
}

pub fn pd(m: &FDModule, depth: usize) -> PdStatus {
    min_resolution(m, depth).status
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GlDim {
    Finite(usize),
    Infinite,
    Unknown,
}

/// Maximum of pd over the simples.
pub fn gldim(a: &AlgRef, depth: usize) -> GlDim {
    let mut best = 0;
    let mut unknown = false;
    for v in 0..a.num_vertices().max(1) {
        match pd(&simple_module(a, v), depth) {
            PdStatus::Finite(n) => best = best.max(n),
            PdStatus::Periodic { .. } => return GlDim::Infinite,
            PdStatus::DepthExceeded(_) => unknown = true,
        }
    }
    if unknown { GlDim::Unknown } else { GlDim::Finite(best) }
}
