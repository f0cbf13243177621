//! Index algebra on randomized weight pairs.

#[path = "support/lemmas.rs"]
mod lemmas;

use lemmas::{psi, run_case, SCENES};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn index_lemmas_hold_on_random_pairs(scene in 0..3usize, p1 in psi(), p2 in psi()) {
        let s = &SCENES[scene];
        let failures = run_case(s, &p1, &p2);
        prop_assert!(failures.is_empty(), "{} with {:?} and {:?}:\n{}", s.name, p1, p2, failures.join("\n"));
    }
}
