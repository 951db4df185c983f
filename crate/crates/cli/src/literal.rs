//! Complex literals on the command line.
//!
//! `P1+P2` is a stalk in degree 0. Terms are joined by `-[M]->`, where M
//! lists the rows (one per target summand) separated by `;` and the
//! entries of a row (one per source summand) separated by `,`. Entries are
//! linear combinations of basis labels such as `α`, `2βα` or `e1-β`.
//! A trailing `@d` puts the last term in degree d (default 0). `S1`
//! stands for the minimal projective resolution of the simple at 1.

use recolle_core::algebra::AlgRef;
use recolle_core::exactla::Scalar;
use recolle_core::fdmod::{simple_module, PMap};
use recolle_core::kbproj::{proj_resolve_complex, ModComplex, ProjComplex};

#[derive(Debug, PartialEq, Eq)]
pub struct LiteralError(pub String);

impl std::fmt::Display for LiteralError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, LiteralError> {
    Err(LiteralError(msg.into()))
}

fn vertex(a: &AlgRef, name: &str) -> Result<usize, LiteralError> {
    (0..a.num_vertices()).find(|&v| a.vertex_label(v) == name).map_or_else(|| err(format!("unknown vertex {name:?}")), Ok)
}

fn term(a: &AlgRef, s: &str) -> Result<Vec<usize>, LiteralError> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    s.split('+')
        .map(|p| match p.trim().strip_prefix('P') {
            Some(v) => vertex(a, v),
            None => err(format!("expected P<vertex>, got {p:?}")),
        })
        .collect()
}

/// A linear combination of basis labels.
pub fn element(a: &AlgRef, s: &str) -> Result<Vec<Scalar>, LiteralError> {
    let f = a.field();
    let mut out = a.zero_vec();
    let s = s.trim();
    if s == "0" {
        return Ok(out);
    }
    // split before every sign that is not at the start
    let mut pieces = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() {
            pieces.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    pieces.push(cur);
    for p in pieces {
        let p = p.trim();
        let (neg, body) = match p.strip_prefix('-') {
            Some(r) => (true, r.trim()),
            None => (false, p.strip_prefix('+').unwrap_or(p).trim()),
        };
        let split = body.find(|c: char| !c.is_ascii_digit() && c != '/').unwrap_or(body.len());
        let (coeff, label) = body.split_at(split);
        let mut c = if coeff.is_empty() { f.one() } else { f.parse(coeff).map_err(|e| LiteralError(e.to_string()))? };
        if neg {
            c = -c;
        }
        let label = label.trim_start_matches('*');
        let b = a.labels().iter().position(|l| l == label).map_or_else(|| err(format!("unknown basis element {label:?}")), Ok)?;
        out[b] = &out[b] + &c;
    }
    Ok(out)
}

fn matrix(a: &AlgRef, s: &str, src: &[usize], tgt: &[usize]) -> Result<PMap, LiteralError> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != tgt.len() {
        return err(format!("map [{s}] has {} rows, target has {} summands", rows.len(), tgt.len()));
    }
    let mut m = PMap::zero(a, src, tgt);
    for (j, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != src.len() {
            return err(format!("row {row:?} has {} entries, source has {} summands", cells.len(), src.len()));
        }
        for (i, cell) in cells.iter().enumerate() {
            let x = element(a, cell)?;
            let corner = a.corner_basis(tgt[j], src[i]);
            if x.iter().enumerate().any(|(b, c)| !c.is_zero() && !corner.contains(&b)) {
                return err(format!("{cell:?} is not a map P{} → P{}", a.vertex_label(src[i]), a.vertex_label(tgt[j])));
            }
            m.set(j, i, x);
        }
    }
    Ok(m)
}

pub fn parse_complex(a: &AlgRef, s: &str, depth: usize) -> Result<ProjComplex, LiteralError> {
    let s = s.trim();
    let (body, last) = match s.rsplit_once('@') {
        Some((b, d)) => (b.trim(), d.trim().parse::<i64>().map_err(|_| LiteralError(format!("bad degree {d:?}")))?),
        None => (s, 0),
    };
    if let Some(v) = body.strip_prefix('S') {
        let v = vertex(a, v)?;
        let res = proj_resolve_complex(&ModComplex::stalk(&simple_module(a, v), 0), depth);
        return match res.to_proj_complex() {
            Some(x) => Ok(x.shift(-last)),
            None => err(format!("S{} has no finite projective resolution within depth {depth}", a.vertex_label(v))),
        };
    }
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut rest = body;
    loop {
        match rest.find("-[") {
            Some(pos) => {
                terms.push(term(a, &rest[..pos])?);
                let tail = &rest[pos + 2..];
                let close = tail.find("]->").map_or_else(|| err("unterminated map, expected ]->"), Ok)?;
                maps.push(&tail[..close]);
                rest = &tail[close + 3..];
            }
            None => {
                terms.push(term(a, rest)?);
                break;
            }
        }
    }
    let diffs = maps.iter().enumerate().map(|(k, m)| matrix(a, m, &terms[k], &terms[k + 1])).collect::<Result<Vec<_>, _>>()?;
    let lo = last - (terms.len() as i64 - 1);
    ProjComplex::new(a, lo, terms, diffs).map(|x| x.trimmed()).map_err(|e| LiteralError(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use recolle_core::algebra::build_algebra;
    use recolle_core::fixtures;
    use std::sync::Arc;

    fn ladder() -> AlgRef {
        Arc::new(build_algebra(&fixtures::ladder_three()).unwrap())
    }

    #[test]
    fn stalks_and_cones() {
        let a = ladder();
        let x = parse_complex(&a, "P1+P2", 10).unwrap();
        assert_eq!((x.lo, x.hi()), (0, 0));
        assert_eq!(x.term(0), &[0, 1]);
        let m = parse_complex(&a, "P2 -[α]-> P1", 10).unwrap();
        assert_eq!((m.lo, m.hi()), (-1, 0));
        let m = parse_complex(&a, "P2 -[α]-> P1 @ 3", 10).unwrap();
        assert_eq!((m.lo, m.hi()), (2, 3));
        let y = parse_complex(&a, "P2 -[α; β]-> P1+P2", 10).unwrap();
        assert_eq!(y.term(0), &[0, 1]);
    }

    #[test]
    fn elements() {
        let a = ladder();
        let x = element(&a, "e2 - 2β").unwrap();
        assert_eq!(a.format_element(&x), a.format_element(&element(&a, "-2β+e2").unwrap()));
        assert!(element(&a, "γ").is_err());
    }

    #[test]
    fn rejects_bad_maps() {
        let a = ladder();
        assert!(parse_complex(&a, "P1 -[α]-> P2", 10).is_err());
        assert!(parse_complex(&a, "P2 -[β]-> P2 -[β]-> P2", 10).is_ok());
        assert!(parse_complex(&a, "P2 -[e2]-> P2 -[e2]-> P2", 10).is_err());
        assert!(parse_complex(&a, "Q1", 10).is_err());
    }

    #[test]
    fn simple_resolution() {
        let q = Arc::new(build_algebra(&fixtures::linear_a2()).unwrap());
        assert_eq!(parse_complex(&q, "S1", 10).unwrap().total_dim(), 1);
        let s2 = parse_complex(&q, "S2", 10).unwrap();
        assert_eq!((s2.lo, s2.total_dim()), (-1, 3));
        let a = ladder();
        assert!(parse_complex(&a, "S2", 10).is_err());
    }
}
