use recolle_core::algebra::{AlgRef, BasedAlgebra};
use recolle_core::exactla::Field;
use recolle_core::kbproj::ProjComplex;
use recolle_core::tri::TriBool;

pub fn mark(t: &TriBool) -> &'static str {
    match t {
        TriBool::True(_) => "✓",
        TriBool::False(_) => "✗",
        TriBool::Unknown(_) => "?",
    }
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Rationals => "Q".into(),
        Field::Prime(p) => format!("F{p}"),
    }
}

pub fn vertex_set(a: &BasedAlgebra, e: &[usize]) -> String {
    let names: Vec<&str> = e.iter().map(|&v| a.vertex_label(v)).collect();
    format!("{{{}}}", names.join(","))
}

fn term(a: &BasedAlgebra, vs: &[usize]) -> String {
    if vs.is_empty() {
        return "0".into();
    }
    vs.iter().map(|&v| format!("P{}", a.vertex_label(v))).collect::<Vec<_>>().join("+")
}

/// One line per degree, with the differential leaving it.
pub fn complex(x: &ProjComplex) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let a: &AlgRef = x.algebra();
    let mut s = String::new();
    for k in x.lo..=x.hi() {
        s.push_str(&format!("  {k:>3}: {}", term(a, x.term(k))));
        if k < x.hi() {
            let d = x.diff(k);
            let rows: Vec<String> = (0..d.tgt.len())
                .map(|j| (0..d.src.len()).map(|i| a.format_element(d.entry(j, i))).collect::<Vec<_>>().join(", "))
                .collect();
            s.push_str(&format!("   d = [{}]", rows.join("; ")));
        }
        s.push('\n');
    }
    s
}

/// Composition series of e_v A as stacked rows of vertex labels.
pub fn layers(a: &BasedAlgebra, rows: &[Vec<usize>]) -> Vec<String> {
    rows.iter()
        .map(|mult| {
            mult.iter()
                .enumerate()
                .flat_map(|(v, &m)| std::iter::repeat_n(a.vertex_label(v).to_string(), m))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use recolle_core::algebra::build_algebra;
    use recolle_core::fixtures;
    use std::sync::Arc;

    #[test]
    fn marks_and_fields() {
        assert_eq!(mark(&TriBool::yes("x")), "✓");
        assert_eq!(mark(&TriBool::no("x")), "✗");
        assert_eq!(mark(&TriBool::unknown("x")), "?");
        assert_eq!(field_name(Field::Prime(7)), "F7");
    }

    #[test]
    fn complexes_and_layers() {
        let a: AlgRef = Arc::new(build_algebra(&fixtures::ladder_three()).unwrap());
        assert_eq!(layers(&a, &[vec![1, 0], vec![0, 1]]), vec!["1", "2"]);
        assert_eq!(vertex_set(&a, &[0, 1]), "{1,2}");
        let x = ProjComplex::stalk(&a, &[0, 1], 2);
        assert_eq!(complex(&x), "    2: P1+P2\n");
        assert_eq!(complex(&ProjComplex::zero(&a)), "0\n");
    }
}
