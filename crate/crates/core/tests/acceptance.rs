mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use common::{alg, elem, F2};
use recolle_core::algebra::{build_algebra, fingerprint, opposite, AlgRef, AlgebraFingerprint};
use recolle_core::fdmod::{quotient_module, PMap};
use recolle_core::fixtures;
use recolle_core::homology::{gldim, tor_dim, GlDim};
use recolle_core::kbproj::{
    arrow_complex, end_algebra, hom_dim, is_exceptional, proj_resolve_complex, strict_action, ChainMap, ModComplex, ProjComplex,
};
use recolle_core::ladder::{
    extend_down, extend_up, injective_module, ladder_heights, nakayama, simplicity_report, vertex_subsets, SearchBounds, Simplicity,
};
use recolle_core::oracle::{bar_tor, hom_bruteforce, path_count, DEFAULT_LIMIT};
use recolle_core::recollement::{build_recollement, homotopy_isomorphic, restriction_report, stratifying_status, verify_canonical_triangle};
use recolle_core::search::{enumerate_exceptional, jh_compare, stratification_trees, JhVerdict, SearchCaps};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// dim, local, commutative
fn shape(f: &AlgebraFingerprint) -> (usize, Option<bool>, bool) {
    (f.dim, f.local, f.commutative)
}

fn layers(a: &AlgRef, v: usize) -> Vec<Vec<usize>> {
    recolle_core::fdmod::projective_module(a, v).radical_filtration()
}

fn criterion_1() -> Outcome {
    let a = alg(fixtures::ladder_three());
    ensure(a.dim() == 4, format!("dim {}", a.dim()))?;
    // [1|2] and [2|2] as multiplicity vectors per radical layer
    ensure(layers(&a, 0) == vec![vec![1, 0], vec![0, 1]], format!("P1 layers {:?}", layers(&a, 0)))?;
    ensure(layers(&a, 1) == vec![vec![0, 1], vec![0, 1]], format!("P2 layers {:?}", layers(&a, 1)))?;
    let expected = [[Some(true), Some(true), Some(true), Some(false)], [Some(false); 4]];
    for (v, want) in expected.iter().enumerate() {
        ensure(stratifying_status(&a, &[v], 20).map(|s| s.is_certified()) == Ok(true), format!("e{} not certified", v + 1))?;
        let rec = build_recollement(&a, &[v], 20).map_err(|e| e.to_string())?;
        let r = restriction_report(&rec, 20);
        let got = [r.dminus.as_option(), r.db_mod_big.as_option(), r.dbmod.as_option(), r.kbproj.as_option()];
        ensure(got == *want, format!("e{} flags {got:?}", v + 1))?;
        let l = ladder_heights(&rec, 4, 20);
        ensure(l.height_lower_bound == 3, format!("e{} height {}", v + 1, l.height_lower_bound))?;
        ensure(l.complete_up.is_true() && l.complete_down.is_true(), format!("e{} ladder not complete", v + 1))?;
    }
    Ok("dim 4, layers [1|2] [2|2], flags ✓✓✓✗ and ✗✗✗✗, height 3 complete".into())
}

fn criterion_2() -> Outcome {
    let a = alg(fixtures::ladder_three());
    let m = arrow_complex(&a, 1, 0, elem(&a, "α"), -1);
    ensure(is_exceptional(&m), "Cone(α) not exceptional")?;
    let end = end_algebra(&m).map_err(|e| e.to_string())?;
    let f = fingerprint(&end.algebra);
    ensure(shape(&f) == (2, Some(true), true), format!("End(M) {:?}", shape(&f)))?;
    let tp = ProjComplex::stalk(&a, &[0, 0], 0);
    let src = ProjComplex::stalk(&a, &[0, 1], 0);
    let mut g = PMap::zero(&a, &[0, 1], &[0, 0]);
    g.set(0, 0, a.basis_vector(a.idempotent(0)));
    g.set(1, 1, elem(&a, "α"));
    let g = ChainMap::new(&src, &tp, 0, vec![g]);
    ensure(g.is_chain_map(), "displayed map is not a chain map")?;
    ensure(verify_canonical_triangle(&m, &tp, &g), "canonical triangle check fails")?;
    let et = fingerprint(&end_algebra(&tp).map_err(|e| e.to_string())?.algebra);
    ensure((et.dim, et.num_simples) == (4, 1), format!("End(T') dim {} simples {}", et.dim, et.num_simples))?;
    Ok("End(M) = (2, local, commutative), triangle verified, End(T') dim 4 with 1 simple".into())
}

fn criterion_3() -> Outcome {
    let a = alg(fixtures::fourteen());
    ensure(a.dim() == 14, format!("dim {}", a.dim()))?;
    let depth = 2 * 14 + 4;
    for v in 0..2 {
        let rec = build_recollement(&a, &[v], depth).map_err(|e| format!("e{}: {e}", v + 1))?;
        let c = fingerprint(&rec.c);
        ensure(shape(&c) == (4, Some(true), false), format!("corner e{} {:?}", v + 1, shape(&c)))?;
        ensure(extend_up(&rec, depth).is_false(), format!("e{} extends up", v + 1))?;
        ensure(extend_down(&rec, depth).is_false(), format!("e{} extends down", v + 1))?;
        let l = ladder_heights(&rec, 4, depth);
        ensure(l.height_lower_bound == 1, format!("e{} height {}", v + 1, l.height_lower_bound))?;
    }
    Ok("dim 14, corners (4, local, non-commutative), both ladders of height 1".into())
}

fn criterion_4() -> Outcome {
    let a = alg(fixtures::radical_square_zero());
    let cat = enumerate_exceptional(&a, F2, SearchCaps::new(2, 2), 1).map_err(|e| e.to_string())?;
    let shapes = cat.shapes();
    ensure(shapes == vec![vec![vec![1, 0]], vec![vec![0, 1]], vec![vec![0, 1], vec![1, 0]]], format!("catalog {shapes:?}"))?;
    let x = &cat.entries[2].complex;
    ensure(x.term(x.lo) == [1] && x.term(x.lo + 1) == [0], "two-term entry is not P2 → P1")?;
    ensure(shape(&cat.entries[2].end) == (3, Some(true), true), format!("End(Cone) {:?}", shape(&cat.entries[2].end)))?;
    let rec = build_recollement(&a, &[0], 20).map_err(|e| e.to_string())?;
    let l = ladder_heights(&rec, 4, 20);
    ensure(l.height_lower_bound == 2, format!("e1 height {}", l.height_lower_bound))?;
    ensure(l.complete_up.is_true() && l.complete_down.is_true(), "e1 ladder not complete")?;
    let x = arrow_complex(&a, 1, 0, elem(&a, "α"), -1);
    let end = end_algebra(&x).map_err(|e| e.to_string())?;
    let s = strict_action(&x, &end).map_err(|(i, j)| format!("strict action fails on ({i}, {j})"))?;
    ensure(s.cohomology_dims == vec![(-1, 1), (0, 2)], format!("left module dims {:?}", s.cohomology_dims))?;
    ensure(s.modules.iter().all(|m| m.check()), "End(X)-module axioms fail")?;
    Ok("catalog {P1, P2, P2 → P1}, End dim 3 commutative local, e1 height 2 complete, dims 1 at -1 and 2 at 0".into())
}

fn criterion_5() -> Outcome {
    let a = alg(fixtures::jordan_holder());
    for v in 0..2 {
        ensure(stratifying_status(&a, &[v], 30).map(|s| s.is_certified()) == Ok(true), format!("e{} not certified", v + 1))?;
    }
    let ts = stratification_trees(&a, 30, 4).map_err(|e| e.to_string())?;
    ensure(ts.len() == 2, format!("{} trees", ts.len()))?;
    let mut multisets: Vec<Vec<(usize, Option<bool>, bool)>> = ts
        .iter()
        .map(|t| {
            let mut m: Vec<_> = t.leaves().iter().map(|(f, _)| shape(f)).collect();
            m.sort();
            m
        })
        .collect();
    multisets.sort();
    let want = vec![vec![(1, Some(true), true), (4, Some(true), false)], vec![(2, Some(true), true), (2, Some(true), true)]];
    ensure(multisets == want, format!("factors {multisets:?}"))?;
    ensure(matches!(jh_compare(&ts[0], &ts[1]), Ok(JhVerdict::Fails { .. })), "jh_compare does not fail")?;
    ensure(ts.iter().all(|t| t.root.ranks_add_up() && t.root.fingerprint.num_simples == 2), "rank additivity fails")?;
    Ok("{k, dim 4 local non-commutative} vs {dim 2 local commutative ×2}, Jordan–Hölder fails".into())
}

/// The literal catalog check is expected to fail: the length-two members
/// P2 → P1 and P1 → P2 of the second and third families are both
/// exceptional, and the resolution of S2 has three terms.
fn criterion_6() -> Outcome {
    let a = alg(fixtures::quasi_hereditary());
    ensure(gldim(&a, 20) == GlDim::Finite(2), format!("gldim {:?}", gldim(&a, 20)))?;
    let nu = nakayama(&ProjComplex::stalk(&a, &[1], 0), 20).map_err(|e| e.to_string())?;
    let i2 = proj_resolve_complex(&ModComplex::stalk(&injective_module(&a, 1), 0), 20).to_proj_complex().ok_or("I2 has no finite resolution")?;
    ensure(homotopy_isomorphic(&nu, &i2, 3, 16).is_true(), "ν(P2) not isomorphic to the resolution of I2")?;
    let e1 = fingerprint(&end_algebra(&ProjComplex::stalk(&a, &[0], 0)).map_err(|e| e.to_string())?.algebra);
    let dn = fingerprint(&alg(fixtures::dual_numbers()));
    ensure(
        (e1.dim, &e1.loewy, e1.num_simples, e1.commutative, e1.dim_center, e1.local) == (dn.dim, &dn.loewy, dn.num_simples, dn.commutative, dn.dim_center, dn.local),
        format!("End(P1) {}", e1.summary()),
    )?;

    let cat = enumerate_exceptional(&a, F2, SearchCaps::new(2, 2), 1).map_err(|e| e.to_string())?;
    let shapes = cat.shapes();
    let families = vec![vec![vec![1, 0]], vec![vec![0, 1]], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]];
    if shapes != families {
        panic!("catalog {shapes:?} differs from the length ≤ 2 members of the listed families");
    }
    let s2 = proj_resolve_complex(&ModComplex::stalk(&recolle_core::fdmod::simple_module(&a, 1), 0), 20).to_proj_complex().unwrap().minimalize();
    let has_s2 = cat.entries.iter().any(|e| homotopy_isomorphic(&e.complex.minimalize(), &s2, 3, 16).is_true());
    let literal = cat.entries.len() == 3 && has_s2;
    if literal {
        Ok("catalog {P1, P2, S2 resolution}".into())
    } else {
        Err(format!(
            "expected exactly {{P1, P2, S2 resolution}}; search finds {} objects (P1, P2, P2 → P1, P1 → P2) and the S2 resolution has {} terms; \
             gldim 2, ν(P2) ≅ I2 and End(P1) ≅ k[x]/x² hold",
            cat.entries.len(),
            s2.amplitude() + 1
        ))
    }
}

fn criterion_7() -> Outcome {
    let mut certified_finite = 0;
    let mut built = 0;
    for (name, q) in fixtures::all() {
        let a = alg(q);
        let depth = 2 * a.dim() + 4;
        let finite = matches!(gldim(&a, depth), GlDim::Finite(_));
        for e in vertex_subsets(a.num_vertices()) {
            let Ok(rec) = build_recollement(&a, &e, depth) else { continue };
            built += 1;
            let (ra, rb, rc) = rec.ranks();
            ensure(ra == rb + rc, format!("{name} {e:?}: r = {ra}, {rb} + {rc}"))?;
            if finite {
                certified_finite += 1;
                let r = restriction_report(&rec, depth);
                ensure(
                    r.dminus.is_true() && r.db_mod_big.is_true() && r.dbmod.is_true() && r.kbproj.is_true(),
                    format!("{name} {e:?}: flags not all true"),
                )?;
            }
        }
    }
    ensure(certified_finite >= 4, format!("only {certified_finite} finite-gldim recollements"))?;
    Ok(format!("{certified_finite} finite-gldim recollements with all flags true, ranks add up on {built}"))
}

fn criterion_8() -> Outcome {
    let mut homs = 0;
    let mut tors = 0;
    let mut dims = 0;
    for (name, q) in fixtures::all() {
        let a = alg(q.clone());
        dims += 1;
        let n = path_count(&q).map_err(|e| format!("{name}: {e}"))?;
        ensure(n == a.dim(), format!("{name}: path_count {n}, dim {}", a.dim()))?;

        let depth = 2 * a.dim() + 4;
        let op: AlgRef = Arc::new(opposite(&a));
        for e in vertex_subsets(a.num_vertices()) {
            if !stratifying_status(&a, &e, depth).is_ok() {
                continue;
            }
            let (m, nm) = (quotient_module(&a, &e), quotient_module(&op, &e));
            for i in 0..=4 {
                let Some(t) = tor_dim(&m, &nm, i, depth) else { continue };
                tors += 1;
                ensure(bar_tor(&m, &nm, i) == t, format!("{name} {e:?}: Tor_{i}"))?;
            }
        }

        let fa: AlgRef = Arc::new(build_algebra(&q.with_field(F2)).unwrap());
        let extras: Vec<ProjComplex> = enumerate_exceptional(&fa, F2, SearchCaps::new(2, 2), 1)
            .map(|c| c.entries.into_iter().map(|e| e.complex).collect())
            .unwrap_or_default();
        let panel = common::oracle_panel(&fa, &extras, 8);
        for x in &panel {
            for y in &panel {
                for n in (y.lo - x.hi() - 1)..=(y.hi() - x.lo + 1) {
                    let b = hom_bruteforce(x, y, n, DEFAULT_LIMIT).map_err(|e| format!("{name}: {e}"))?;
                    homs += 1;
                    ensure(b == hom_dim(x, y, n), format!("{name}: Hom(X, Y[{n}]) oracle {b}, main {}", hom_dim(x, y, n)))?;
                }
            }
        }
    }
    Ok(format!("{homs} Hom, {tors} Tor and {dims} dimension comparisons agree"))
}

fn criterion_9() -> Outcome {
    let bounds = SearchBounds { depth: 20, ladder_steps: 4 };
    for (name, q) in [("k", fixtures::field_k()), ("k[x]/x²", fixtures::dual_numbers()), ("k<x,y>/(x²,y²,xy)", fixtures::kxy())] {
        let a = alg(q);
        let r = simplicity_report(&a, bounds);
        for (level, s) in [("D(Mod)", &r.d_mod), ("D-(Mod)", &r.d_minus), ("Kb(proj)", &r.kbproj_db)] {
            ensure(matches!(s, Simplicity::SimpleCertified(_)), format!("{name}: {} at {level}", s.short()))?;
        }
        let cat = enumerate_exceptional(&a, F2, SearchCaps::new(3, 2), 1).map_err(|e| e.to_string())?;
        ensure(cat.entries.iter().all(|e| e.complex.minimalize().amplitude() == 0), format!("{name}: exceptional complex of amplitude ≥ 1"))?;
    }
    Ok("simple at every level, exceptional complexes are stalks".into())
}

fn criterion_10() -> Outcome {
    let algebras = common::panel();
    type Prop = fn(&[AlgRef], usize, u64) -> Result<(), String>;
    let props: [(&str, Prop); 4] = [
        ("d² = 0", common::prop_d_squared),
        ("minimalize keeps Hom", common::prop_minimalize_keeps_hom),
        ("periodic certificates", common::prop_periodic_certified),
        ("determinism", common::prop_deterministic),
    ];
    for (name, p) in props {
        let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
        runner
            .run(&(0usize..64, any::<u64>()), |(i, seed)| p(&algebras, i, seed).map_err(TestCaseError::fail))
            .map_err(|e| format!("{name}: {e}"))?;
    }
    let (long, periodic) = common::coverage(&algebras, 400);
    ensure(long >= 80 && periodic >= 50, format!("generator coverage {long} {periodic}"))?;
    Ok("4 properties × 1000 cases".into())
}

const KNOWN_FAILURES: [usize; 1] = [6];

fn main() {
    let criteria: [fn() -> Outcome; 10] =
        [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10];
    let mut unexpected = Vec::new();
    for (k, c) in criteria.iter().enumerate() {
        let n = k + 1;
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match &outcome {
            Ok(msg) => println!("criterion {n:>2}: PASS ({secs:.2}s) {msg}"),
            Err(msg) => println!("criterion {n:>2}: FAIL ({secs:.2}s) {msg}"),
        }
        let expected_fail = KNOWN_FAILURES.contains(&n) && outcome.as_ref().is_err_and(|m| !m.starts_with("panicked"));
        if outcome.is_err() && !expected_fail {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
