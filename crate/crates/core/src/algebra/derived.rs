use std::collections::HashMap;

use super::{AlgebraError, BasedAlgebra, Origin, VertexData};
use crate::exactla::{Echelon, Scalar};

fn check_subset(a: &BasedAlgebra, e: &[usize]) -> Result<Vec<usize>, AlgebraError> {
    let vd = a.vertex_data().ok_or(AlgebraError::NoVertexData)?;
    if e.is_empty() {
        return Err(AlgebraError::EmptyIdempotent);
    }
    let mut s = e.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&v| v >= vd.idempotents.len()) {
        return Err(AlgebraError::BadVertex(bad));
    }
    Ok(s)
}

/// eAe for e the sum of the chosen vertex idempotents.
pub fn corner(a: &BasedAlgebra, e: &[usize]) -> Result<BasedAlgebra, AlgebraError> {
    let e = check_subset(a, e)?;
    let vd = a.vertex_data().unwrap();
    let newv: HashMap<usize, usize> = e.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let keep: Vec<usize> =
        (0..a.dim()).filter(|&i| newv.contains_key(&vd.tags[i].0) && newv.contains_key(&vd.tags[i].1)).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let mut table = Vec::with_capacity(keep.len() * keep.len());
    for &i in &keep {
        for &j in &keep {
            table.push(a.product(i, j).iter().map(|(k, c)| (pos[k], c.clone())).collect());
        }
    }
    let field = a.field();
    let mut unit = field.zeros(keep.len());
    for &v in &e {
        unit[pos[&vd.idempotents[v]]] = field.one();
    }
    let nvd = VertexData {
        labels: e.iter().map(|&v| vd.labels[v].clone()).collect(),
        idempotents: e.iter().map(|&v| pos[&vd.idempotents[v]]).collect(),
        tags: keep.iter().map(|&i| (newv[&vd.tags[i].0], newv[&vd.tags[i].1])).collect(),
    };
    let radical = keep.iter().enumerate().filter(|(_, &o)| a.is_radical(o)).map(|(n, _)| n).collect();
    let lengths = a.lengths().map(|l| keep.iter().map(|&i| l[i]).collect());
    Ok(BasedAlgebra::from_parts(
        field,
        keep.iter().map(|&i| a.label(i).to_string()).collect(),
        table,
        unit,
        Some(nvd),
        radical,
        lengths,
        Origin::Corner(e),
    ))
}

/// Basis indices of A spanning eAe, in the order used by `corner`.
pub fn corner_embedding(a: &BasedAlgebra, e: &[usize]) -> Vec<usize> {
    let vd = a.vertex_data().expect("vertex data");
    (0..a.dim()).filter(|&i| e.contains(&vd.tags[i].0) && e.contains(&vd.tags[i].1)).collect()
}

/// A/AeA. Basis: basis elements that are not pivots of AeA when longer
/// paths are eliminated first.
pub fn quotient_by_idempotent_ideal(a: &BasedAlgebra, e: &[usize]) -> Result<BasedAlgebra, AlgebraError> {
    Ok(quotient_with_projection(a, e)?.0)
}

/// A/AeA together with the projection A → A/AeA (rows: basis of A).
pub fn quotient_with_projection(a: &BasedAlgebra, e: &[usize]) -> Result<(BasedAlgebra, crate::exactla::Mat), AlgebraError> {
    let e = check_subset(a, e)?;
    let vd = a.vertex_data().unwrap();
    let field = a.field();
    let dim = a.dim();
    // column order: long radical elements first, idempotents last
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&i| {
        let len = a.lengths().map_or(1, |l| l[i]);
        (!a.is_radical(i), std::cmp::Reverse(len), i)
    });
    let permute = |v: &[Scalar]| order.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
    let mut ideal = Echelon::new(field, dim);
    for i in 0..dim {
        if !e.contains(&vd.tags[i].1) {
            continue;
        }
        for j in 0..dim {
            if vd.tags[j].0 == vd.tags[i].1 {
                ideal.insert(&permute(&a.product_vec(i, j)));
            }
        }
    }
    if ideal.dim() == dim {
        return Err(AlgebraError::TrivialQuotient);
    }
    let keep: Vec<usize> = {
        let mut k: Vec<usize> = ideal.non_pivots().into_iter().map(|c| order[c]).collect();
        k.sort_unstable();
        k
    };
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let reduce = |v: &[Scalar]| -> Vec<(usize, Scalar)> {
        let r = ideal.reduce(&permute(v));
        let mut out: Vec<(usize, Scalar)> = r
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(col, c)| (pos[&order[col]], c))
            .collect();
        out.sort_by_key(|(k, _)| *k);
        out
    };
    let mut table = Vec::with_capacity(keep.len() * keep.len());
    for &i in &keep {
        for &j in &keep {
            table.push(reduce(&a.product_vec(i, j)));
        }
    }
    let rest: Vec<usize> = (0..vd.idempotents.len()).filter(|v| !e.contains(v)).collect();
    let newv: HashMap<usize, usize> = rest.iter().enumerate().map(|(n, &v)| (v, n)).collect();
    let mut unit = field.zeros(keep.len());
    for &v in &rest {
        unit[pos[&vd.idempotents[v]]] = field.one();
    }
    let nvd = VertexData {
        labels: rest.iter().map(|&v| vd.labels[v].clone()).collect(),
        idempotents: rest.iter().map(|&v| pos[&vd.idempotents[v]]).collect(),
        tags: keep.iter().map(|&i| (newv[&vd.tags[i].0], newv[&vd.tags[i].1])).collect(),
    };
    let radical = keep.iter().enumerate().filter(|(_, &o)| a.is_radical(o)).map(|(n, _)| n).collect();
    let lengths = a.lengths().map(|l| keep.iter().map(|&i| l[i]).collect());
    let mut proj = crate::exactla::Mat::zeros(field, dim, keep.len());
    for i in 0..dim {
        for (k, c) in reduce(&a.basis_vector(i)) {
            proj.set(i, k, c);
        }
    }
    let b = BasedAlgebra::from_parts(
        field,
        keep.iter().map(|&i| a.label(i).to_string()).collect(),
        table,
        unit,
        Some(nvd),
        radical,
        lengths,
        Origin::Quotient(e),
    );
    Ok((b, proj))
}

/// Same basis, reversed multiplication.
pub fn opposite(a: &BasedAlgebra) -> BasedAlgebra {
    let dim = a.dim();
    let mut table = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            table.push(a.product(j, i).to_vec());
        }
    }
    let vd = a.vertex_data().map(|vd| VertexData {
        labels: vd.labels.clone(),
        idempotents: vd.idempotents.clone(),
        tags: vd.tags.iter().map(|&(l, r)| (r, l)).collect(),
    });
    let origin = match a.origin() {
        // keep enough information to recognise double opposites
        Origin::Endomorphism => Origin::Endomorphism,
        _ => Origin::Opposite,
    };
    BasedAlgebra::from_parts(
        a.field(),
        a.labels().to_vec(),
        table,
        a.unit().to_vec(),
        vd,
        a.radical_basis().to_vec(),
        a.lengths().map(|l| l.to_vec()),
        origin,
    )
}

/// A ⊗ B with basis pairs (i, j) at index i·dim B + j.
pub fn tensor(a: &BasedAlgebra, b: &BasedAlgebra) -> BasedAlgebra {
    assert_eq!(a.field(), b.field(), "tensor over different fields");
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    let mut table = Vec::with_capacity(dim * dim);
    for i1 in 0..da {
        for j1 in 0..db {
            for i2 in 0..da {
                for j2 in 0..db {
                    let mut entry = Vec::new();
                    for (k, c) in a.product(i1, i2) {
                        for (l, d) in b.product(j1, j2) {
                            entry.push((k * db + l, c * d));
                        }
                    }
                    entry.sort_by_key(|(k, _)| *k);
                    table.push(entry);
                }
            }
        }
    }
    let mut unit = a.field().zeros(dim);
    for (i, x) in a.unit().iter().enumerate() {
        for (j, y) in b.unit().iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                unit[i * db + j] = x * y;
            }
        }
    }
    let vd = match (a.vertex_data(), b.vertex_data()) {
        (Some(va), Some(vb)) => {
            let rb = vb.idempotents.len();
            let mut labels = Vec::new();
            let mut idem = Vec::new();
            for (u, lu) in va.labels.iter().enumerate() {
                for (v, lv) in vb.labels.iter().enumerate() {
                    labels.push(format!("{lu}|{lv}"));
                    idem.push(va.idempotents[u] * db + vb.idempotents[v]);
                }
            }
            let mut tags = Vec::with_capacity(dim);
            for i in 0..da {
                for j in 0..db {
                    let (la, ra) = va.tags[i];
                    let (lb, rb2) = vb.tags[j];
                    tags.push((la * rb + lb, ra * rb + rb2));
                }
            }
            Some(VertexData { labels, idempotents: idem, tags })
        }
        _ => None,
    };
    let radical = (0..dim).filter(|&x| a.is_radical(x / db) || b.is_radical(x % db)).collect();
    let lengths = match (a.lengths(), b.lengths()) {
        (Some(la), Some(lb)) => Some((0..dim).map(|x| la[x / db] + lb[x % db]).collect()),
        _ => None,
    };
    let labels = (0..dim).map(|x| format!("{}⊗{}", a.label(x / db), b.label(x % db))).collect();
    BasedAlgebra::from_parts(a.field(), labels, table, unit, vd, radical, lengths, Origin::Tensor)
}
