use asdim_core::engine::{bound, replay, Premise, ProofTrace};
use asdim_core::group::sample::random_expr;
use asdim_core::rules::RuleId;
use asdim_core::{
    is_infinite, normalize, DimBound, EngineError, ExtendedDim, GroupExpr, InfinitenessStatus,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample(seed: u64, n: usize) -> Vec<GroupExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_expr(&mut rng, 4)).collect()
}

#[test]
fn replay_reproduces_bound_for_1000_random_expressions() {
    let mut errors = 0;
    for e in sample(2024, 1000) {
        match bound(&e, None) {
            Ok(d) => {
                assert_eq!(replay(&d.trace).unwrap(), d.bound, "{e}");
                let text: ProofTrace = d.trace.to_string().parse().unwrap();
                assert_eq!(replay(&text).unwrap(), d.bound, "{e}");
            }
            Err(EngineError::Inconsistent { .. }) => errors += 1,
            Err(other) => panic!("{e}: {other}"),
        }
    }
    assert!(errors < 50, "{errors} inconsistent samples");
}

#[test]
fn determinism_and_normalization_stability() {
    for e in sample(99, 400) {
        let a = bound(&e, None);
        assert_eq!(a, bound(&e, None));
        let n = normalize(&e);
        assert_eq!(a.map(|d| d.bound).ok(), bound(&n, None).map(|d| d.bound).ok(), "{e}");
    }
}

/// The reported bound must beat the finiteness candidates and the aspherical
/// claim, and every side must be attained by a recorded step about the root.
#[test]
fn best_bound_dominates_root_candidates() {
    for (i, e) in sample(5, 600).into_iter().enumerate() {
        let asph = (i % 3 == 0).then_some(3);
        let Ok(d) = bound(&e, asph) else { continue };
        let n = normalize(&e);
        match is_infinite(&n) {
            InfinitenessStatus::Finite => assert_eq!(d.bound.upper(), ExtendedDim::Number(0)),
            InfinitenessStatus::Infinite => assert!(d.bound.lower() >= 1),
            InfinitenessStatus::Undetermined => {}
        }
        if let Some(a) = asph {
            assert!(d.bound.lower() >= a, "{e}");
        }
        let Some(root) = d.trace.steps.last() else {
            assert_eq!(n, GroupExpr::Trivial);
            continue;
        };
        assert_eq!(root.bound, d.bound);
        assert_eq!(root.subject, n.to_string());
        if root.rule == RuleId::Meet {
            let parts: Vec<DimBound> = root
                .inputs
                .iter()
                .map(|p| match p {
                    Premise::Step(k) => d.trace.steps[*k].bound,
                    Premise::Given(b) => *b,
                })
                .collect();
            assert!(parts.iter().any(|b| b.lower() == d.bound.lower()));
            assert!(parts.iter().any(|b| b.upper() == d.bound.upper()));
        }
    }
}

#[test]
fn examples_from_the_rule_table() {
    let z = GroupExpr::FreeAbelian(1);
    let f2 = GroupExpr::amalgam(z.clone(), z.clone(), GroupExpr::Trivial);
    assert_eq!(bound(&f2, None).unwrap().bound, DimBound::exact(1));
    let e4 = GroupExpr::lattice("E4", 4, true);
    assert_eq!(bound(&e4, Some(4)).unwrap().bound, DimBound::exact(4));
    assert_eq!(bound(&GroupExpr::Finite(Some(17)), None).unwrap().bound, DimBound::exact(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tampered_rule_ids_are_rejected(seed in any::<u64>(), pick in any::<prop::sample::Index>(), r in 0usize..17) {
        let e = sample(seed, 1).pop().unwrap();
        let Ok(d) = bound(&e, None) else { return Ok(()) };
        prop_assume!(!d.trace.steps.is_empty());
        let i = pick.index(d.trace.steps.len());
        let mut t = d.trace.clone();
        let new_rule = RuleId::ALL[r];
        prop_assume!(new_rule != t.steps[i].rule);
        t.steps[i].rule = new_rule;
        // a different rule can only pass if it happens to admit the same shape and yield the same bound
        if let Ok(b) = replay(&t) {
            prop_assert_eq!(b, d.bound);
        }
    }
}
