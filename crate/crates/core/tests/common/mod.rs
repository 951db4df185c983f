#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recolle_core::algebra::{build_algebra, AlgRef, QuiverPresentation};
use recolle_core::exactla::{Field, Scalar};
use recolle_core::fdmod::{projective_module, FDModule};
use recolle_core::fixtures;
use recolle_core::homology::{min_resolution, PdStatus};
use recolle_core::kbproj::{arrow_complex, cone, hom_classes, hom_dim, ChainMap, ProjComplex};
use recolle_core::recollement::{build_recollement, homotopy_isomorphic, restriction_report, stratifying_status};

pub const F2: Field = Field::Prime(2);

pub fn alg(q: QuiverPresentation) -> AlgRef {
    Arc::new(build_algebra(&q).unwrap())
}

pub fn alg_f2(q: QuiverPresentation) -> AlgRef {
    Arc::new(build_algebra(&q.with_field(F2)).unwrap())
}

pub fn elem(a: &AlgRef, label: &str) -> Vec<Scalar> {
    a.basis_vector(a.labels().iter().position(|l| l == label).unwrap_or_else(|| panic!("no basis element {label}")))
}

/// Algebras the randomized properties draw from.
pub fn panel() -> Vec<AlgRef> {
    vec![
        alg(fixtures::ladder_three()),
        alg(fixtures::radical_square_zero()),
        alg(fixtures::quasi_hereditary()),
        alg(fixtures::linear_a2()),
        alg(fixtures::dual_numbers()),
        alg_f2(fixtures::ladder_three()),
        alg_f2(fixtures::quasi_hereditary()),
        alg_f2(fixtures::kxy()),
    ]
}

fn small_scalar(a: &AlgRef, rng: &mut ChaCha8Rng) -> Scalar {
    a.field().from_i64(rng.gen_range(-2..=2))
}

/// A random element of e_v J e_u, possibly zero.
fn radical_element(a: &AlgRef, u: usize, v: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let mut x = a.zero_vec();
    for b in a.corner_basis(v, u) {
        if a.is_radical(b) {
            x[b] = small_scalar(a, rng);
        }
    }
    x
}

fn base(a: &AlgRef, rng: &mut ChaCha8Rng) -> ProjComplex {
    let r = a.num_vertices();
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=2);
        let vs: Vec<usize> = (0..k).map(|_| rng.gen_range(0..r)).collect();
        ProjComplex::stalk(a, &vs, rng.gen_range(-1..=1))
    } else {
        let (u, v) = (rng.gen_range(0..r), rng.gen_range(0..r));
        arrow_complex(a, u, v, radical_element(a, u, v, rng), rng.gen_range(-2..=0))
    }
}

/// A random chain map X → Y from the homotopy class representatives.
fn random_map(x: &ProjComplex, y: &ProjComplex, rng: &mut ChaCha8Rng) -> ChainMap {
    let a = x.algebra();
    let reps = hom_classes(x, y, 0).representatives;
    let mut f = ChainMap::zero(x, y, 0);
    for r in &reps {
        f = f.add(&r.scale(&small_scalar(a, rng)));
    }
    f
}

/// A short random history of shifts, sums and cones; every intermediate
/// complex is returned.
pub fn random_history(a: &AlgRef, seed: u64) -> Vec<ProjComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = base(a, &mut rng);
    let mut out = vec![x.clone()];
    for _ in 0..rng.gen_range(1..=3) {
        x = match rng.gen_range(0..4) {
            0 => x.shift(rng.gen_range(-2..=2)),
            1 => x.direct_sum(&base(a, &mut rng)),
            2 => {
                let y = base(a, &mut rng);
                cone(&random_map(&x, &y, &mut rng)).expect("cone of a chain map")
            }
            _ => x.minimalize(),
        };
        out.push(x.clone());
        if x.total_dim() > 24 {
            break;
        }
    }
    out
}

fn probes(a: &AlgRef) -> Vec<ProjComplex> {
    (0..a.num_vertices()).map(|v| ProjComplex::stalk(a, &[v], 0)).collect()
}

pub fn prop_d_squared(algebras: &[AlgRef], i: usize, seed: u64) -> Result<(), String> {
    let a = &algebras[i % algebras.len()];
    for x in random_history(a, seed) {
        for y in [x.clone(), x.shift(1), x.minimalize()] {
            if !y.is_complex() {
                return Err(format!("d² ≠ 0 for seed {seed}"));
            }
        }
    }
    Ok(())
}

pub fn prop_minimalize_keeps_hom(algebras: &[AlgRef], i: usize, seed: u64) -> Result<(), String> {
    let a = &algebras[i % algebras.len()];
    let x = random_history(a, seed).pop().unwrap();
    let m = x.minimalize();
    if !m.is_minimal() {
        return Err(format!("not minimal after minimalize, seed {seed}"));
    }
    if x.is_zero() {
        return Ok(());
    }
    for p in probes(a) {
        for n in (x.lo - 1)..=(x.hi() + 1) {
            if hom_dim(&x, &p, n) != hom_dim(&m, &p, n) || hom_dim(&p, &x, -n) != hom_dim(&p, &m, -n) {
                return Err(format!("hom_dim changed at n = {n}, seed {seed}"));
            }
        }
    }
    Ok(())
}

/// P_v modulo a random submodule of its radical.
fn random_module(a: &AlgRef, rng: &mut ChaCha8Rng) -> FDModule {
    let v = rng.gen_range(0..a.num_vertices());
    let p = projective_module(a, v);
    let rad = p.radical_power(1);
    let gens: Vec<Vec<Scalar>> = (0..rng.gen_range(0..=2))
        .map(|_| {
            let mut g = a.field().zeros(p.dim());
            for b in rad.basis() {
                let c = small_scalar(a, rng);
                for (t, x) in b.iter().enumerate() {
                    g[t] = &g[t] + &(&c * x);
                }
            }
            g
        })
        .collect();
    p.quotient(&gens).0
}

pub fn prop_periodic_certified(algebras: &[AlgRef], i: usize, seed: u64) -> Result<(), String> {
    let a = &algebras[i % algebras.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_module(a, &mut rng);
    let r = min_resolution(&m, 12);
    if !r.verify() {
        return Err(format!("resolution fails to verify, seed {seed}"));
    }
    if matches!(r.status, PdStatus::Periodic { .. }) && !(r.iso.is_some() && r.verify_periodic()) {
        return Err(format!("periodic status without a valid certificate, seed {seed}"));
    }
    Ok(())
}

pub fn prop_deterministic(algebras: &[AlgRef], i: usize, seed: u64) -> Result<(), String> {
    let a = &algebras[i % algebras.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = a.num_vertices();
    let e: Vec<usize> = (0..r).filter(|_| rng.gen_bool(0.5)).collect();
    let once = || {
        let s = serde_json::to_string(&stratifying_status(a, &e, 12).ok()).unwrap();
        let rr = build_recollement(a, &e, 12).ok().map(|rec| serde_json::to_string(&restriction_report(&rec, 12)).unwrap());
        (s, rr)
    };
    if once() != once() {
        return Err(format!("reports differ between runs, seed {seed}"));
    }
    let hs = random_history(a, seed);
    let (x, y) = (hs.first().unwrap(), hs.last().unwrap());
    if homotopy_isomorphic(x, y, seed, 8) != homotopy_isomorphic(x, y, seed, 8) {
        return Err(format!("isomorphism test differs between runs, seed {seed}"));
    }
    Ok(())
}

/// Small complexes over F_2: stalks, sums of two projectives, two-term
/// complexes on radical basis elements, and the given extras, keeping
/// those of total dimension at most `max_dim`.
pub fn oracle_panel(a: &AlgRef, extras: &[ProjComplex], max_dim: usize) -> Vec<ProjComplex> {
    let r = a.num_vertices();
    let mut out: Vec<ProjComplex> = (0..r).map(|v| ProjComplex::stalk(a, &[v], 0)).collect();
    for u in 0..r {
        for v in u..r {
            out.push(ProjComplex::stalk(a, &[u, v], 0));
        }
    }
    for &b in a.radical_basis() {
        let (v, u) = a.tag(b);
        out.push(arrow_complex(a, u, v, a.basis_vector(b), -1));
    }
    out.extend(extras.iter().cloned());
    out.retain(|x| x.total_dim() <= max_dim);
    out
}

/// How often the generators hit the interesting cases: complexes with at
/// least three nonzero degrees, and periodic resolutions.
pub fn coverage(algebras: &[AlgRef], seeds: u64) -> (usize, usize) {
    let mut long = 0;
    let mut periodic = 0;
    for seed in 0..seeds {
        let a = &algebras[seed as usize % algebras.len()];
        if random_history(a, seed).iter().any(|x| x.minimalize().amplitude() >= 2) {
            long += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if matches!(min_resolution(&random_module(a, &mut rng), 12).status, PdStatus::Periodic { .. }) {
            periodic += 1;
        }
    }
    (long, periodic)
}
