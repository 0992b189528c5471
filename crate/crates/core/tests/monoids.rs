mod common;

use std::collections::BTreeSet;

use omega_fragments::fixtures::{monoid_m, monoid_n, reference, CURATED};
use omega_fragments::{compile_str, syntactic_context, Limits, OrderedMonoid, SyntacticContext};
use proptest::prelude::*;

fn ctx(text: &str) -> SyntacticContext {
    syntactic_context(&compile_str(text).unwrap(), &Limits::default()).unwrap()
}

/// Every fixture monoid: the hand-built pair plus the syntactic monoids of
/// the curated languages, with generators.
fn fixture_monoids() -> Vec<(String, OrderedMonoid)> {
    let mut out = vec![("M".to_string(), monoid_m()), ("N".to_string(), monoid_n())];
    for (name, text) in CURATED {
        out.push((name.to_string(), ctx(text).monoid().clone()));
    }
    out
}

/// Oracle: M_e by enumerating every factor pair `x s y = e` and closing
/// under products.
fn local_by_enumeration(m: &OrderedMonoid, e: usize) -> BTreeSet<usize> {
    let factors: Vec<usize> = m
        .elements()
        .filter(|&s| {
            m.elements()
                .any(|x| m.elements().any(|y| m.mul_all(&[x, s, y]) == e))
        })
        .collect();
    let mut set: BTreeSet<usize> = [m.unit()].into();
    loop {
        let next: BTreeSet<usize> = set
            .iter()
            .flat_map(|&x| factors.iter().map(move |&f| (x, f)))
            .map(|(x, f)| m.mul(x, f))
            .collect();
        let before = set.len();
        set.extend(next);
        if set.len() == before {
            return set;
        }
    }
}

/// Oracle: `s^n = s^(n+1)` with `n` the size.
fn aperiodic_by_powers(m: &OrderedMonoid) -> bool {
    m.elements().all(|s| {
        let pow = (0..m.size()).fold(m.unit(), |acc, _| m.mul(acc, s));
        pow == m.mul(pow, s)
    })
}

fn check_laws(name: &str, m: &OrderedMonoid) {
    let da = m.is_in_da();
    if da {
        assert!(m.is_aperiodic(), "{name}: DA but not aperiodic");
    }
    assert_eq!(m.is_aperiodic(), aperiodic_by_powers(m), "{name}");
    let eq = m.unordered();
    let mut all_top_bottom = true;
    for e in m.idempotents() {
        let me: BTreeSet<usize> = m.local_submonoid(e).unwrap().iter().collect();
        assert_eq!(
            me,
            local_by_enumeration(m, e),
            "{name}: M_e for {}",
            m.name(e)
        );
        assert_eq!(
            me,
            m.local_submonoid_by_factors(e)
                .unwrap()
                .iter()
                .collect::<BTreeSet<_>>(),
            "{name}"
        );
        let top = eq.locally_top(e).unwrap();
        let bottom = eq.locally_bottom(e).unwrap();
        if top && bottom {
            for &s in &me {
                assert_eq!(m.mul_all(&[e, s, e]), e, "{name}");
            }
        }
        all_top_bottom &= top && bottom;
    }
    assert_eq!(da, all_top_bottom, "{name}");
    assert_eq!(da, m.is_in_da_by_factors(), "{name}");
    if let Some(g) = m.is_in_da_by_generators() {
        assert_eq!(g, da, "{name}");
    }
}

#[test]
fn laws_hold_on_fixture_monoids() {
    for (name, m) in fixture_monoids() {
        check_laws(&name, &m);
    }
}

#[test]
fn local_submonoid_examples() {
    let m = monoid_m();
    let a = m.element_by_name("a").unwrap();
    assert_eq!(m.local_submonoid(a).unwrap().count(), 6);
    let n = monoid_n();
    let a = n.element_by_name("a").unwrap();
    let got: BTreeSet<usize> = n.local_submonoid(a).unwrap().iter().collect();
    assert_eq!(got, local_by_enumeration(&n, a));
    assert!(!m.is_in_da());
    assert!(n.is_in_da());
}

#[test]
fn idempotent_power_examples() {
    let m = monoid_m();
    let ba = m.element_by_name("ba").unwrap();
    assert_eq!(m.idempotent_power(ba), m.element_by_name("0").unwrap());
    assert_eq!(m.idempotent_power(m.unit()), m.unit());
    let p = ctx("alphabet: abc; c* a {a,b,c}* b {a,b,c}* c");
    let pm = p.monoid();
    for s in pm.elements() {
        assert_eq!(pm.idempotent_power(s), s, "{}", pm.name(s));
    }
}

#[test]
fn r_class_of_abc() {
    let p = ctx("alphabet: abc; c* a {a,b,c}* b {a,b,c}* c");
    let pm = p.monoid();
    let abc = p.element("abc").unwrap();
    let class: BTreeSet<&str> = pm
        .elements()
        .filter(|&t| pm.r_related(abc, t))
        .map(|t| pm.name(t))
        .collect();
    assert_eq!(class, BTreeSet::from(["ab", "abc"]));
    assert!(pm.r_related(abc, abc));
}

#[test]
fn order_condition_examples() {
    let l7 = ctx(reference("L7"));
    assert!(l7.monoid().satisfies_x_leq_one());
    let m = monoid_m();
    assert!(!m.satisfies_x_leq_one() && !m.satisfies_x_geq_one());
    let l1 = ctx(reference("L1"));
    let lm = l1.monoid();
    for e in lm.idempotents() {
        assert!(lm.locally_top(e).unwrap(), "{}", lm.name(e));
    }
}

proptest! {
    #![proptest_config(common::config(100))]

    #[test]
    fn laws_hold_on_random_syntactic_monoids((t, a) in common::arb_language()) {
        let c = syntactic_context(&a, &Limits::default()).unwrap();
        check_laws(&t, c.monoid());
    }
}
