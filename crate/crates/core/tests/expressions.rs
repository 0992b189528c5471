mod common;

use omega_fragments::{
    compile, compile_str, load, parse, parse_file, Alphabet, Expr, ExtBuchiAutomaton, Limits,
    UPWord, Word,
};
use proptest::prelude::*;

fn lim() -> Limits {
    Limits::default()
}

fn equiv(x: &ExtBuchiAutomaton, y: &ExtBuchiAutomaton) -> bool {
    x.equivalent(y, &lim()).unwrap().is_equivalent()
}

#[test]
fn parse_examples() {
    let g = Alphabet::parse("abc").unwrap();
    let e = parse("(a|b|c)* a b", &g).unwrap();
    let abc = Expr::union(
        Expr::Letter('a'),
        Expr::union(Expr::Letter('b'), Expr::Letter('c')),
    );
    assert_eq!(
        e,
        Expr::concat(
            Expr::concat(Expr::star(abc), Expr::Letter('a')),
            Expr::Letter('b')
        )
    );
    assert_eq!(parse("IM{a,b}", &g).unwrap(), Expr::ImSet(vec!['a', 'b']));
    let err = parse("a^^w", &g).unwrap_err();
    assert!(err.is_parse_error());
    assert!(err.to_string().contains("offset 2"), "{err}");
    assert!(parse("a d", &g).unwrap_err().is_parse_error());
}

#[test]
fn file_header_declares_alphabet() {
    let (g, e) = parse_file("alphabet: ab; a b^w").unwrap();
    assert_eq!(g.letters(), &['a', 'b']);
    assert_eq!(
        e,
        Expr::concat(Expr::Letter('a'), Expr::omega(Expr::Letter('b')))
    );
    assert!(parse_file("a b").unwrap_err().is_parse_error());
}

#[test]
fn load_accepts_both_input_formats() {
    let text = "alphabet: ab; a* (a b)^w";
    let a = compile_str(text).unwrap();
    assert!(equiv(&load(text, &lim()).unwrap(), &a));
    assert!(equiv(&load(&a.to_text(), &lim()).unwrap(), &a));
    let tiny = Limits {
        max_monoid: 1,
        ..lim()
    };
    assert!(load("alphabet: ab; !(a b)^w", &tiny)
        .unwrap_err()
        .is_resource_limit());
    assert!(load("alphabet: ab; (", &lim())
        .unwrap_err()
        .is_parse_error());
}

#[test]
fn compile_examples() {
    let inf = compile_str("alphabet: ab; {a,b}^oo").unwrap();
    assert!(equiv(&inf, &ExtBuchiAutomaton::universal(inf.alphabet())));
    let ab = compile_str("alphabet: ab; (a b)^w").unwrap();
    assert!(ab.member(&Word::lasso("", "ab")).unwrap());
    assert!(!ab.member(&Word::finite("ab")).unwrap());
    let cab = compile_str("alphabet: abc; ((a|b|c)* a b)^w").unwrap();
    assert!(cab.member(&Word::lasso("", "cab")).unwrap());
}

#[test]
fn omega_power_of_language_with_empty_word_keeps_finite_products() {
    let a = compile_str("alphabet: ab; (a | 1)^w").unwrap();
    assert!(equiv(&a, &compile_str("alphabet: ab; a^oo").unwrap()));
    let one = compile_str("alphabet: ab; 1^w").unwrap();
    assert!(equiv(&one, &compile_str("alphabet: ab; 1").unwrap()));
}

#[test]
fn concatenation_uses_finite_left_factor() {
    let a = compile_str("alphabet: ab; a^w b").unwrap();
    assert!(a.is_empty());
    let b = compile_str("alphabet: ab; a^oo b").unwrap();
    assert!(equiv(&b, &compile_str("alphabet: ab; a* b").unwrap()));
}

#[test]
fn infinity_letters_of_lassos() {
    let g = Alphabet::parse("abc").unwrap();
    let im = |u: &str, v: &str| {
        let w = UPWord::new(u.into(), v.into()).unwrap();
        let s = omega_fragments::expressions::infinity_letters(&w, &g).unwrap();
        g.set_to_string(s)
    };
    assert_eq!(im("ab", "cb"), "{b,c}");
    assert_eq!(im("", "a"), "{a}");
    assert_eq!(im("c", "ab"), "{a,b}");
}

#[test]
fn empty_im_set_is_all_finite_words() {
    for g in ["ab", "abc"] {
        let g = Alphabet::parse(g).unwrap();
        let e = compile(&Expr::ImSet(vec![]), &g, &lim()).unwrap();
        let star = compile(&Expr::star(Expr::letter_set(g.letters())), &g, &lim()).unwrap();
        assert!(equiv(&e, &star));
    }
}

proptest! {
    #![proptest_config(common::config(100))]

    #[test]
    fn double_complement_is_identity((g, e) in common::arb_expr()) {
        let x = compile(&e, &g, &lim()).unwrap();
        let xx = compile(&Expr::complement(Expr::complement(e.clone())), &g, &lim()).unwrap();
        prop_assert!(equiv(&x, &xx), "{}", e);
    }

    #[test]
    fn infinity_power_is_star_union_omega((g, e) in common::arb_expr()) {
        let inf = compile(&Expr::inf(e.clone()), &g, &lim()).unwrap();
        let split = compile(&Expr::union(Expr::star(e.clone()), Expr::omega(e.clone())), &g, &lim()).unwrap();
        prop_assert!(equiv(&inf, &split), "{}", e);
    }

    #[test]
    fn membership_is_invariant_under_unrolling((t, a) in common::arb_language(), seed in any::<u64>()) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let letters = a.alphabet().letters().to_vec();
        for _ in 0..5 {
            let Word::Infinite(w) = common::random_up_word(&mut rng, &letters, 4) else { continue };
            let base = a.member(&Word::Infinite(w.clone())).unwrap();
            for k in 1..=3 {
                let unrolled = UPWord::new(w.prefix().concat(&w.period().repeat(k)), w.period().clone()).unwrap();
                prop_assert_eq!(a.member(&Word::Infinite(unrolled)).unwrap(), base, "{} on {}", w, t);
            }
        }
    }

    #[test]
    fn display_parses_back_to_the_same_language((g, e) in common::arb_expr()) {
        let back = parse(&e.to_string(), &g).unwrap();
        let x = compile(&e, &g, &lim()).unwrap();
        let y = compile(&back, &g, &lim()).unwrap();
        prop_assert!(equiv(&x, &y), "{}", e);
    }
}
