//! apply_rule checked against a separate integer encoding of the arithmetic.

mod support;

use asdim_core::rules::{apply, RuleId};
use asdim_core::DimBound;
use support::oracle::{agrees, all_bounds, exhaustive, tuples};

fn check(rule: RuleId, xs: &[DimBound], params: &[u32]) {
    assert!(agrees(rule, xs, params), "{rule} {xs:?} {params:?}");
}

#[test]
fn exhaustive_agreement() {
    let (cases, bad) = exhaustive();
    assert!(cases > 100_000);
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(5)]);
}

#[test]
fn nullary_rules_match_oracle() {
    check(RuleId::Finite, &[], &[]);
    check(RuleId::InfiniteLb, &[], &[]);
    for p in 0..=8 {
        for r in
            [RuleId::Euclid, RuleId::Hyperbolic, RuleId::LieLattice, RuleId::Nagata, RuleId::AsphLb]
        {
            check(r, &[], &[p]);
        }
        check(RuleId::Surface, &[], &[p]);
    }
}

#[test]
fn unary_and_binary_rules_match_oracle() {
    for t in tuples(1) {
        check(RuleId::ProperAction, &t, &[]);
        check(RuleId::Hyp, &t, &[]);
        check(RuleId::Union, &t, &[]);
        check(RuleId::Product, &t, &[]);
        check(RuleId::RelHyp, &t, &[0]);
    }
    check(RuleId::Hyp, &[], &[]);
    for t in tuples(2) {
        for r in [RuleId::Extension, RuleId::Product, RuleId::Union, RuleId::Hnn, RuleId::Meet] {
            check(r, &t, &[]);
        }
        check(RuleId::RelHyp, &t, &[0]);
        check(RuleId::RelHyp, &t, &[1]);
    }
}

#[test]
fn ternary_rules_match_oracle() {
    for t in tuples(3) {
        check(RuleId::Amalgam, &t, &[]);
        check(RuleId::Product, &t, &[]);
        check(RuleId::Union, &t, &[]);
        check(RuleId::Meet, &t, &[]);
        check(RuleId::RelHyp, &t, &[1]);
    }
}

fn combination_arity(rule: RuleId) -> Option<(usize, &'static [u32])> {
    match rule {
        RuleId::ProperAction => Some((1, &[])),
        RuleId::Extension | RuleId::Product | RuleId::Union | RuleId::Hnn => Some((2, &[])),
        RuleId::Amalgam => Some((3, &[])),
        RuleId::RelHyp => Some((3, &[1])),
        _ => None,
    }
}

#[test]
fn combination_rules_are_monotone() {
    let all = all_bounds();
    for rule in RuleId::ALL {
        let Some((n, params)) = combination_arity(rule) else { continue };
        for t in tuples(n) {
            let base = apply(rule, &t, params).unwrap();
            for i in 0..n {
                for b in &all {
                    let mut raised = t.clone();
                    raised[i] = *b;
                    let out = apply(rule, &raised, params).unwrap();
                    if b.upper() >= t[i].upper() {
                        assert!(out.upper() >= base.upper(), "{rule} upper {t:?} -> {raised:?}");
                    }
                    if b.lower() >= t[i].lower() {
                        assert!(out.lower() >= base.lower(), "{rule} lower {t:?} -> {raised:?}");
                    }
                }
            }
        }
    }
}
