//! Fixtures shared by the benchmark targets.

use std::sync::Arc;

use recolle_core::algebra::{build_algebra, AlgRef, QuiverPresentation};
use recolle_core::exactla::Field;

pub fn algebra(q: QuiverPresentation) -> AlgRef {
    Arc::new(build_algebra(&q).expect("fixture builds"))
}

pub fn algebra_f2(q: QuiverPresentation) -> AlgRef {
    Arc::new(build_algebra(&q.with_field(Field::Prime(2))).expect("fixture builds"))
}

/// Basis element by label.
pub fn element(a: &AlgRef, label: &str) -> Vec<recolle_core::Scalar> {
    a.basis_vector(a.labels().iter().position(|l| l == label).expect("label exists"))
}
