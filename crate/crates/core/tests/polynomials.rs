mod common;

use omega_fragments::fragments::{is_fo2, is_sigma2};
use omega_fragments::polynomials::{
    enumerate_monomials, is_closed_restricted_monomial, is_closed_unambiguous_monomial,
    monomial_closure, synthesize_polynomial,
};
use omega_fragments::topology::{closure_alphabetic, is_closed_alphabetic};
use omega_fragments::{
    syntactic_context, Alphabet, ExtBuchiAutomaton, FiniteWord, LetterSet, Limits, Monomial,
    Polynomial, TailKind, Word,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lim() -> Limits {
    Limits::default()
}

fn equiv(x: &ExtBuchiAutomaton, y: &ExtBuchiAutomaton) -> bool {
    x.equivalent(y, &lim()).unwrap().is_equivalent()
}

fn random_set<R: Rng>(rng: &mut R, g: &Alphabet) -> LetterSet {
    LetterSet::from_indices((0..g.len()).filter(|_| rng.gen_bool(0.5)))
}

fn random_monomial<R: Rng>(
    rng: &mut R,
    g: &Alphabet,
    max_degree: usize,
    restrict: bool,
) -> Monomial {
    let k = rng.gen_range(0..=max_degree);
    let blocks = (0..k)
        .map(|_| (random_set(rng, g), rng.gen_range(0..g.len())))
        .collect();
    let tail = random_set(rng, g);
    let kind = if rng.gen_bool(0.2) {
        TailKind::Fin
    } else {
        TailKind::Inf
    };
    let im = (restrict && kind == TailKind::Inf && rng.gen_bool(0.3))
        .then(|| LetterSet::from_indices(tail.iter().filter(|_| rng.gen_bool(0.6))));
    Monomial::new(g, blocks, tail, kind, im).unwrap()
}

/// Two random monomials over one alphabet; `restrict` allows `∩ B^im`.
fn arb_monomial_pair(restrict: bool) -> impl Strategy<Value = (Monomial, Monomial)> {
    any::<u64>().prop_map(move |s| {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        let g = Alphabet::new(&common::alphabet_for(&mut r)).unwrap();
        (
            random_monomial(&mut r, &g, 2, restrict),
            random_monomial(&mut r, &g, 2, restrict),
        )
    })
}

/// Oracle: number of factorizations `u₁a₁⋯u_k a_k v` of a finite word.
fn factorizations(m: &Monomial, w: &[usize]) -> usize {
    fn go(m: &Monomial, w: &[usize], i: usize, pos: usize) -> usize {
        if i == m.degree() {
            return usize::from(w[pos..].iter().all(|&x| m.tail.contains(x)));
        }
        let (set, anchor) = m.blocks[i];
        let mut n = 0;
        for j in pos..w.len() {
            if w[j] == anchor {
                n += go(m, w, i + 1, j + 1);
            }
            if !set.contains(w[j]) {
                break;
            }
        }
        n
    }
    go(m, w, 0, 0)
}

fn finite_words(g: &Alphabet, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..g.len()).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn decode(g: &Alphabet, w: &[usize]) -> FiniteWord {
    FiniteWord(w.iter().map(|&x| g.letter(x)).collect())
}

#[test]
fn unambiguity_agrees_with_factorization_counts() {
    for g in ["ab", "abc"] {
        let g = Alphabet::parse(g).unwrap();
        let words = finite_words(&g, if g.len() == 2 { 6 } else { 4 });
        for m in enumerate_monomials(&g, 2) {
            let worst = words.iter().map(|w| factorizations(&m, w)).max().unwrap();
            match m.ambiguity_witness() {
                None => assert!(worst <= 1, "{m} reported unambiguous"),
                Some(Word::Finite(w)) => {
                    let enc = g.encode(&w).unwrap();
                    assert!(factorizations(&m, &enc) >= 2, "{m}: witness {w}");
                }
                Some(w) => assert!(m.accepts(&w), "{m}: witness {w}"),
            }
            if worst >= 2 {
                assert!(!m.is_unambiguous(), "{m}");
            }
        }
    }
}

#[test]
fn closure_formula_and_closedness_criteria_on_all_small_monomials() {
    let g = Alphabet::parse("ab").unwrap();
    let mut checked = 0;
    for base in enumerate_monomials(&g, 2)
        .into_iter()
        .filter(Monomial::is_unambiguous)
    {
        let a = base.to_automaton();
        let closed = is_closed_alphabetic(&a, &lim()).unwrap();
        assert_eq!(
            is_closed_unambiguous_monomial(&base).unwrap(),
            closed,
            "{base}"
        );
        if let Ok(r) = is_closed_restricted_monomial(&base) {
            assert_eq!(r, closed, "{base}");
        }
        let c = closure_alphabetic(&a).unwrap();
        assert!(
            equiv(&monomial_closure(&base).unwrap().to_automaton(), &c),
            "{base}"
        );
        for b in g.subsets().filter(|b| b.is_subset(base.tail)) {
            let Ok(m) = Monomial::new(&g, base.blocks.clone(), base.tail, base.tail_kind, Some(b))
            else {
                continue;
            };
            let a = m.to_automaton();
            let c = closure_alphabetic(&a).unwrap();
            assert!(
                equiv(&monomial_closure(&m).unwrap().to_automaton(), &c),
                "{m}"
            );
            if let Ok(r) = is_closed_restricted_monomial(&m) {
                assert_eq!(r, is_closed_alphabetic(&a, &lim()).unwrap(), "{m}");
            }
        }
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} unambiguous fixtures");
}

#[test]
fn synthesis_on_small_random_languages_implies_sigma2() {
    let mut rng = common::rng(7);
    for _ in 0..25 {
        let (t, a) = common::random_language_over(&mut rng, &['a', 'b']);
        let ctx = syntactic_context(&a, &lim()).unwrap();
        if let Some(p) = synthesize_polynomial(&a, 2, false, &lim()).unwrap() {
            assert!(equiv(&p.to_automaton(), &a), "{t}");
            assert!(is_sigma2(&ctx), "{t}: synthesized {p}");
        }
        if let Some(p) = synthesize_polynomial(&a, 2, true, &lim()).unwrap() {
            assert!(p.is_unambiguous(), "{t}");
            assert!(is_sigma2(&ctx) && is_fo2(&ctx), "{t}: synthesized {p}");
        }
    }
}

proptest! {
    #![proptest_config(common::config(100))]

    #[test]
    fn intersection_of_monomials_is_sigma2((p, q) in arb_monomial_pair(false)) {
        let x = p.to_automaton().intersect(&q.to_automaton()).unwrap();
        let ctx = syntactic_context(&x, &lim()).unwrap();
        prop_assert!(is_sigma2(&ctx), "{} & {}", p, q);
    }

    #[test]
    fn direct_membership_matches_automaton((p, q) in arb_monomial_pair(true), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in [&p, &q] {
            let a = m.to_automaton();
            for _ in 0..20 {
                let w = common::random_up_word(&mut rng, m.alphabet.letters(), 4);
                prop_assert_eq!(m.accepts(&w), a.member(&w).unwrap(), "{} on {}", m, w);
            }
            let words = finite_words(&m.alphabet, 3);
            for w in &words {
                let f = Word::Finite(decode(&m.alphabet, w));
                let expect = factorizations(m, w) > 0
                    && m.im_restriction.is_none_or(|b| b.is_empty());
                prop_assert_eq!(m.accepts(&f), expect, "{} on {}", m, f);
            }
        }
    }

    #[test]
    fn text_form_roundtrips((p, q) in arb_monomial_pair(true)) {
        let poly = Polynomial::new(&p.alphabet, vec![p.clone(), q.clone()]).unwrap();
        let back = Polynomial::parse(&poly.to_string(), &p.alphabet).unwrap();
        prop_assert_eq!(back, poly);
    }
}
