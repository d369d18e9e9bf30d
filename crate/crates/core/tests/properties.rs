mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(PROPERTY_CASES))]

    #[test]
    fn projectors_are_idempotent_and_orthogonal(s in symmetry()) {
        projectors_hold(&s)?;
    }

    #[test]
    fn determinant_is_gauge_invariant(s in symmetry(), c in nonzero_rf()) {
        gauge_invariance_holds(&s, &c)?;
    }

    #[test]
    fn scalars_form_a_field(a in small_rf(), b in small_rf(), c in small_rf()) {
        field_axioms_hold(&a, &b, &c)?;
    }

    #[test]
    fn rank_plus_nullity_is_width(m in matrix()) {
        rank_nullity_holds(&m)?;
    }
}
