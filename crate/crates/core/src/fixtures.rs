//! Named quiver presentations used by the tests, benches and the CLI.

use crate::algebra::QuiverPresentation;
use crate::exactla::Field;

const Q: Field = Field::Rationals;

/// 1 ←α 2 with a loop β at 2; β² = αβ = 0.
pub fn ladder_three() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1", "2"])
        .arrow("α", "2", "1")
        .arrow("β", "2", "2")
        .zero_path(&["β", "β"])
        .zero_path(&["β", "α"])
}

/// 1 ⇄ 2 with αβ = 0: quasi-hereditary, global dimension two.
pub fn quasi_hereditary() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1", "2"]).arrow("α", "1", "2").arrow("β", "2", "1").zero_path(&["β", "α"])
}

/// Path algebra of 1 → 2.
pub fn linear_a2() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1", "2"]).arrow("a", "1", "2")
}

/// Two-loop algebra with βγβ = α² = γα = δ² = δγ = 0 (dimension 14).
pub fn fourteen() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1", "2"])
        .arrow("α", "1", "1")
        .arrow("γ", "1", "2")
        .arrow("β", "2", "1")
        .arrow("δ", "2", "2")
        .zero_path(&["β", "γ", "β"])
        .zero_path(&["α", "α"])
        .zero_path(&["α", "γ"])
        .zero_path(&["δ", "δ"])
        .zero_path(&["γ", "δ"])
}

/// Radical square zero algebra: loop γ at 1, α: 2 → 1, loop β at 2.
pub fn radical_square_zero() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1", "2"])
        .arrow("γ", "1", "1")
        .arrow("α", "2", "1")
        .arrow("β", "2", "2")
        .zero_path(&["γ", "γ"])
        .zero_path(&["α", "γ"])
        .zero_path(&["β", "α"])
        .zero_path(&["β", "β"])
}

/// Loop α at 1, γ: 1 → 2, β: 2 → 1 with βγβ = α² = γα = 0. Its two
/// stratifications have different simple factors.
pub fn jordan_holder() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1", "2"])
        .arrow("α", "1", "1")
        .arrow("γ", "1", "2")
        .arrow("β", "2", "1")
        .zero_path(&["β", "γ", "β"])
        .zero_path(&["α", "α"])
        .zero_path(&["α", "γ"])
}

pub fn field_k() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1"])
}

/// k[x]/x²
pub fn dual_numbers() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1"]).arrow("x", "1", "1").zero_path(&["x", "x"])
}

/// k⟨x,y⟩/(x², y², xy)
pub fn kxy() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1"])
        .arrow("x", "1", "1")
        .arrow("y", "1", "1")
        .zero_path(&["x", "x"])
        .zero_path(&["y", "y"])
        .zero_path(&["y", "x"])
}

/// k × k
pub fn semisimple_kk() -> QuiverPresentation {
    QuiverPresentation::new(Q, &["1", "2"])
}

/// Every named presentation.
pub fn all() -> Vec<(&'static str, QuiverPresentation)> {
    vec![
        ("ladder_three", ladder_three()),
        ("quasi_hereditary", quasi_hereditary()),
        ("linear_a2", linear_a2()),
        ("fourteen", fourteen()),
        ("radical_square_zero", radical_square_zero()),
        ("jordan_holder", jordan_holder()),
        ("field_k", field_k()),
        ("dual_numbers", dual_numbers()),
        ("kxy", kxy()),
        ("semisimple_kk", semisimple_kk()),
    ]
}

pub fn by_name(name: &str) -> Option<QuiverPresentation> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, q)| q)
}
