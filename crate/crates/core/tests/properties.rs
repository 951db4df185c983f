mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use recolle_core::algebra::AlgRef;

fn algebras() -> &'static [AlgRef] {
    static PANEL: OnceLock<Vec<AlgRef>> = OnceLock::new();
    PANEL.get_or_init(common::panel)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn differential_squares_to_zero(i in 0usize..64, seed in any::<u64>()) {
        prop_assert_eq!(common::prop_d_squared(algebras(), i, seed), Ok(()));
    }

    #[test]
    fn minimalize_preserves_hom_dims(i in 0usize..64, seed in any::<u64>()) {
        prop_assert_eq!(common::prop_minimalize_keeps_hom(algebras(), i, seed), Ok(()));
    }

    #[test]
    fn periodic_statuses_carry_certificates(i in 0usize..64, seed in any::<u64>()) {
        prop_assert_eq!(common::prop_periodic_certified(algebras(), i, seed), Ok(()));
    }

    #[test]
    fn reports_are_deterministic(i in 0usize..64, seed in any::<u64>()) {
        prop_assert_eq!(common::prop_deterministic(algebras(), i, seed), Ok(()));
    }
}

#[test]
fn generators_reach_long_complexes_and_periodic_modules() {
    let (long, periodic) = common::coverage(algebras(), 400);
    assert!(long >= 80, "{long}");
    assert!(periodic >= 50, "{periodic}");
}
