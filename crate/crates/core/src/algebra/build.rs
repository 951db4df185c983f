use std::collections::HashMap;

use super::{AlgebraError, BasedAlgebra, Origin, QuiverPresentation, VertexData};
use crate::exactla::{Echelon, Field, Scalar};

/// Path budget for the truncated path space.
const PATH_BUDGET: usize = 60_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

pub fn default_cap(q: &QuiverPresentation) -> usize {
    2 * q.arrows.len() * q.max_relation_length().max(1) + 8
}

pub fn build_algebra(q: &QuiverPresentation) -> Result<BasedAlgebra, AlgebraError> {
    build_algebra_with_cap(q, default_cap(q))
}

struct Parsed {
    src: Vec<usize>,
    tgt: Vec<usize>,
    relations: Vec<Vec<(Scalar, Vec<usize>)>>,
}

fn parse(q: &QuiverPresentation) -> Result<Parsed, AlgebraError> {
    let mut seen = std::collections::HashSet::new();
    for v in &q.vertices {
        if !seen.insert(v.clone()) {
            return Err(AlgebraError::Duplicate(v.clone()));
        }
    }
    let mut names = std::collections::HashSet::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for a in &q.arrows {
        if !names.insert(a.name.clone()) {
            return Err(AlgebraError::Duplicate(a.name.clone()));
        }
        src.push(q.vertex_index(&a.source).ok_or_else(|| AlgebraError::UnknownName(a.source.clone()))?);
        tgt.push(q.vertex_index(&a.target).ok_or_else(|| AlgebraError::UnknownName(a.target.clone()))?);
    }
    let mut relations = Vec::new();
    for (ri, rel) in q.relations.iter().enumerate() {
        let mut terms = Vec::new();
        let mut ends: Option<(usize, usize)> = None;
        for t in rel {
            if t.path.len() < 2 {
                return Err(AlgebraError::NonAdmissible(ri));
            }
            let mut path = Vec::new();
            for name in &t.path {
                path.push(q.arrow_index(name).ok_or_else(|| AlgebraError::UnknownName(name.clone()))?);
            }
            for w in path.windows(2) {
                if tgt[w[0]] != src[w[1]] {
                    return Err(AlgebraError::NonParallel(ri));
                }
            }
            let e = (src[path[0]], tgt[*path.last().unwrap()]);
            if ends.is_some_and(|x| x != e) {
                return Err(AlgebraError::NonParallel(ri));
            }
            ends = Some(e);
            let c = q.field.parse(&t.coeff)?;
            terms.push((c, path));
        }
        relations.push(terms);
    }
    Ok(Parsed { src, tgt, relations })
}

/// All paths of length ≤ n, longest first.
fn enumerate(q: &QuiverPresentation, p: &Parsed, n: usize) -> Result<Vec<Path>, AlgebraError> {
    let mut layers: Vec<Vec<Path>> = vec![(0..q.vertices.len()).map(|v| Path { source: v, target: v, arrows: vec![] }).collect()];
    let mut total = layers[0].len();
    for len in 1..=n {
        let mut next = Vec::new();
        if len == 1 {
            for a in 0..q.arrows.len() {
                next.push(Path { source: p.src[a], target: p.tgt[a], arrows: vec![a] });
            }
        } else {
            for path in &layers[len - 1] {
                for a in 0..q.arrows.len() {
                    if p.src[a] == path.target {
                        let mut arrows = path.arrows.clone();
                        arrows.push(a);
                        next.push(Path { source: path.source, target: p.tgt[a], arrows });
                    }
                }
            }
        }
        total += next.len();
        if total > PATH_BUDGET {
            return Err(AlgebraError::PathBudget(PATH_BUDGET));
        }
        let empty = next.is_empty();
        layers.push(next);
        if empty {
            break;
        }
    }
    Ok(layers.into_iter().rev().flatten().collect())
}

/// Builds kQ/I by linear elimination in the truncated path space
/// kQ/kQ_{>N}, increasing N until every path of length N lies in the ideal.
pub fn build_algebra_with_cap(q: &QuiverPresentation, cap: usize) -> Result<BasedAlgebra, AlgebraError> {
    let parsed = parse(q)?;
    let field = q.field;
    let start = q.max_relation_length().max(1);
    for n in start..=cap.max(start) {
        let paths = enumerate(q, &parsed, n)?;
        let index: HashMap<&[usize], usize> =
            paths.iter().enumerate().filter(|(_, p)| !p.arrows.is_empty()).map(|(i, p)| (p.arrows.as_slice(), i)).collect();
        let width = paths.len();
        let ideal = close_ideal(field, q, &parsed, &paths, &index, n);
        let longest_done = paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.arrows.len() == n)
            .all(|(i, _)| ideal.contains(&field.unit_vector(width, i)));
        if longest_done {
            return Ok(assemble(q, &parsed, &paths, &index, &ideal, n));
        }
    }
    Err(AlgebraError::InfiniteDimensional(cap))
}

fn close_ideal(
    field: Field,
    q: &QuiverPresentation,
    p: &Parsed,
    paths: &[Path],
    index: &HashMap<&[usize], usize>,
    n: usize,
) -> Echelon {
    let width = paths.len();
    // a sparse element of the truncated path algebra, keyed by column
    type Elem = Vec<(usize, Scalar)>;
    let to_dense = |e: &Elem| {
        let mut v = field.zeros(width);
        for (k, c) in e {
            v[*k] += c;
        }
        v
    };
    let mut ech = Echelon::new(field, width);
    let mut queue: Vec<Elem> = Vec::new();
    for rel in &p.relations {
        let e: Elem = rel.iter().filter(|(_, path)| path.len() <= n).map(|(c, path)| (index[path.as_slice()], c.clone())).collect();
        queue.push(e);
    }
    // multiply by an arrow on either side in traversal terms
    let extend = |e: &Elem, a: usize, before: bool| -> Elem {
        let mut out = Vec::new();
        for (k, c) in e {
            let path = &paths[*k];
            if path.arrows.len() >= n {
                continue;
            }
            let ok = if before { p.tgt[a] == path.source } else { p.src[a] == path.target };
            if !ok {
                continue;
            }
            let mut arrows = Vec::with_capacity(path.arrows.len() + 1);
            if before {
                arrows.push(a);
                arrows.extend_from_slice(&path.arrows);
            } else {
                arrows.extend_from_slice(&path.arrows);
                arrows.push(a);
            }
            out.push((index[arrows.as_slice()], c.clone()));
        }
        out
    };
    while let Some(e) = queue.pop() {
        if e.is_empty() || !ech.insert(&to_dense(&e)) {
            continue;
        }
        for a in 0..q.arrows.len() {
            for before in [true, false] {
                let f = extend(&e, a, before);
                if !f.is_empty() {
                    queue.push(f);
                }
            }
        }
    }
    ech
}

fn assemble(
    q: &QuiverPresentation,
    p: &Parsed,
    paths: &[Path],
    index: &HashMap<&[usize], usize>,
    ideal: &Echelon,
    n: usize,
) -> BasedAlgebra {
    let field = q.field;
    let width = paths.len();
    let mut kept = ideal.non_pivots();
    // trivial paths first in vertex order, then by length
    kept.sort_by_key(|&i| (paths[i].arrows.len(), if paths[i].arrows.is_empty() { paths[i].source } else { 0 }, i));
    let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(b, &col)| (col, b)).collect();
    let dim = kept.len();
    let trivial: HashMap<usize, usize> =
        kept.iter().enumerate().filter(|(_, &c)| paths[c].arrows.is_empty()).map(|(b, &c)| (paths[c].source, b)).collect();

    let mut table = Vec::with_capacity(dim * dim);
    for &ci in &kept {
        for &cj in &kept {
            // b_i b_j: first traverse b_j, then b_i
            let (pi, pj) = (&paths[ci], &paths[cj]);
            if pi.source != pj.target {
                table.push(Vec::new());
                continue;
            }
            let col = if pi.arrows.is_empty() {
                Some(cj)
            } else if pj.arrows.is_empty() {
                Some(ci)
            } else if pi.arrows.len() + pj.arrows.len() > n {
                None
            } else {
                let mut arrows = pj.arrows.clone();
                arrows.extend_from_slice(&pi.arrows);
                Some(index[arrows.as_slice()])
            };
            let Some(col) = col else {
                table.push(Vec::new());
                continue;
            };
            let r = ideal.reduce(&field.unit_vector(width, col));
            let mut entry: Vec<(usize, Scalar)> =
                r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (pos[&k], c.clone())).collect();
            entry.sort_by_key(|(k, _)| *k);
            table.push(entry);
        }
    }
    let nv = q.vertices.len();
    let mut unit = field.zeros(dim);
    for v in 0..nv {
        unit[trivial[&v]] = field.one();
    }
    let labels = kept
        .iter()
        .map(|&c| {
            let path = &paths[c];
            if path.arrows.is_empty() {
                format!("e{}", q.vertices[path.source])
            } else {
                q.render_path(&path.arrows)
            }
        })
        .collect();
    let tags = kept.iter().map(|&c| (paths[c].target, paths[c].source)).collect();
    let vd = VertexData { labels: q.vertices.clone(), idempotents: (0..nv).map(|v| trivial[&v]).collect(), tags };
    let radical: Vec<usize> = (0..dim).filter(|&b| !paths[kept[b]].arrows.is_empty()).collect();
    let homogeneous = p.relations.iter().all(|r| r.iter().all(|(_, path)| path.len() == r[0].1.len()));
    let lengths = homogeneous.then(|| kept.iter().map(|&c| paths[c].arrows.len()).collect());
    BasedAlgebra::from_parts(field, labels, table, unit, Some(vd), radical, lengths, Origin::Path(q.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_dimensions() {
        let a = build_algebra(&fixtures::ladder_three()).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.check_associative());
        assert!(a.check_unit());
        let p1: Vec<&str> = a.left_ideal_basis(0).iter().map(|&i| a.label(i)).collect();
        assert_eq!(p1, vec!["e1", "α"]);
        let p2: Vec<&str> = a.left_ideal_basis(1).iter().map(|&i| a.label(i)).collect();
        assert_eq!(p2, vec!["e2", "β"]);
        assert_eq!(build_algebra(&fixtures::fourteen()).unwrap().dim(), 14);
        let jh = build_algebra(&fixtures::jordan_holder()).unwrap();
        assert_eq!(jh.dim(), 10);
        assert!(jh.check_associative());
        assert_eq!(build_algebra(&fixtures::field_k()).unwrap().dim(), 1);
    }

    #[test]
    fn non_monomial_relation() {
        // commutative square: ab - cd = 0
        let q = QuiverPresentation::new(Field::Rationals, &["1", "2", "3", "4"])
            .arrow("a", "1", "2")
            .arrow("b", "2", "4")
            .arrow("c", "1", "3")
            .arrow("d", "3", "4")
            .relation(&[("1", &["a", "b"]), ("-1", &["c", "d"])]);
        let a = build_algebra(&q).unwrap();
        assert_eq!(a.dim(), 4 + 4 + 1);
        assert!(a.check_associative());
    }

    #[test]
    fn errors() {
        let loop_free = QuiverPresentation::new(Field::Rationals, &["1"]).arrow("x", "1", "1");
        assert!(matches!(build_algebra(&loop_free), Err(AlgebraError::InfiniteDimensional(_))));
        let short = QuiverPresentation::new(Field::Rationals, &["1"]).arrow("x", "1", "1").zero_path(&["x"]);
        assert!(matches!(build_algebra(&short), Err(AlgebraError::NonAdmissible(0))));
        let skew = QuiverPresentation::new(Field::Rationals, &["1", "2"])
            .arrow("x", "1", "1")
            .arrow("y", "1", "2")
            .arrow("z", "2", "2")
            .relation(&[("1", &["x", "x"]), ("1", &["y", "z"])]);
        assert!(matches!(build_algebra(&skew), Err(AlgebraError::NonParallel(0))));
    }
}
