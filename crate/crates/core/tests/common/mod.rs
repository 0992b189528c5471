//! Shared generators for integration tests: random expressions from a fixed
//! seed, proptest strategies and representative sampling.

#![allow(dead_code)]

use std::collections::HashMap;

use omega_fragments::{
    compile, syntactic_context, Alphabet, Expr, ExtBuchiAutomaton, FiniteWord, Limits, Morphism,
    UPWord, Word,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x0f2a_5eed;

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Proptest configuration with a fixed seed and no persistence.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        max_shrink_iters: 64,
        ..Config::default()
    }
}

fn leaf<R: Rng>(rng: &mut R, letters: &[char]) -> Expr {
    match rng.gen_range(0..10) {
        0 => Expr::Epsilon,
        1 => {
            let mut s: Vec<char> = letters
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            s.sort_unstable();
            Expr::ImSet(s)
        }
        2 | 3 => {
            let mut s: Vec<char> = letters
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            if s.is_empty() {
                s.push(letters[0]);
            }
            Expr::letter_set(&s)
        }
        _ => Expr::Letter(*letters.choose(rng).expect("non-empty")),
    }
}

/// Random expression of the given depth; at most one complement on any path.
pub fn random_expr<R: Rng>(rng: &mut R, letters: &[char], depth: usize) -> Expr {
    random_expr_inner(rng, letters, depth, false)
}

fn random_expr_inner<R: Rng>(rng: &mut R, letters: &[char], depth: usize, negated: bool) -> Expr {
    if depth == 0 || rng.gen_bool(0.08) {
        return leaf(rng, letters);
    }
    let sub = |rng: &mut R, neg: bool| random_expr_inner(rng, letters, depth - 1, neg);
    match rng.gen_range(0..20) {
        0..=2 => Expr::union(sub(rng, negated), sub(rng, negated)),
        3 => Expr::intersect(sub(rng, negated), sub(rng, negated)),
        4..=10 => Expr::concat(sub(rng, negated), sub(rng, negated)),
        11..=13 => Expr::star(sub(rng, negated)),
        14 | 15 => Expr::omega(sub(rng, negated)),
        16 | 17 => Expr::inf(sub(rng, negated)),
        _ if !negated => Expr::complement(sub(rng, true)),
        _ => Expr::concat(sub(rng, negated), sub(rng, negated)),
    }
}

pub fn alphabet_for<R: Rng>(rng: &mut R) -> Vec<char> {
    if rng.gen_bool(0.5) {
        vec!['a', 'b']
    } else {
        vec!['a', 'b', 'c']
    }
}

/// A compiled random language with its source text.
pub fn random_language<R: Rng>(rng: &mut R) -> (String, ExtBuchiAutomaton) {
    let letters = alphabet_for(rng);
    random_language_over(rng, &letters)
}

/// Trivial languages (syntactic monoid of size at most two) are redrawn a
/// few times so that they make up a minority of the samples.
pub fn random_language_over<R: Rng>(rng: &mut R, letters: &[char]) -> (String, ExtBuchiAutomaton) {
    let g = Alphabet::new(letters).expect("valid alphabet");
    let lim = Limits::default();
    let mut attempt = 0;
    loop {
        let depth = if rng.gen_bool(0.8) {
            4
        } else {
            rng.gen_range(1..=3)
        };
        let e = random_expr(rng, letters, depth);
        let a = compile(&e, &g, &lim).expect("small expression compiles");
        attempt += 1;
        let size = syntactic_context(&a, &lim).expect("small monoid").size();
        if size > 2 || attempt >= 8 || rng.gen_bool(0.15) {
            return (format!("alphabet: {g}; {e}"), a);
        }
    }
}

/// Proptest strategy: a random expression of depth at most four with its
/// alphabet. No triviality filter.
pub fn arb_expr() -> impl Strategy<Value = (Alphabet, Expr)> {
    any::<u64>().prop_map(|s| {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        let letters = alphabet_for(&mut r);
        let depth = r.gen_range(1..=4);
        let e = random_expr(&mut r, &letters, depth);
        (Alphabet::new(&letters).expect("valid alphabet"), e)
    })
}

/// Proptest strategy: a seed turned into a random language.
pub fn arb_language() -> impl Strategy<Value = (String, ExtBuchiAutomaton)> {
    any::<u64>().prop_map(|s| random_language(&mut ChaCha8Rng::seed_from_u64(s)))
}

/// Proptest strategy: two random languages over one alphabet.
pub fn arb_language_pair(
) -> impl Strategy<Value = ((String, ExtBuchiAutomaton), (String, ExtBuchiAutomaton))> {
    any::<u64>().prop_map(|s| {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        let letters = alphabet_for(&mut r);
        (
            random_language_over(&mut r, &letters),
            random_language_over(&mut r, &letters),
        )
    })
}

/// All words up to `max_len`, grouped by their image under `h`.
pub fn words_by_class(h: &Morphism, max_len: usize) -> HashMap<usize, Vec<FiniteWord>> {
    let letters = h.alphabet.letters().to_vec();
    let mut out: HashMap<usize, Vec<FiniteWord>> = HashMap::new();
    let mut layer = vec![FiniteWord::empty()];
    for len in 0..=max_len {
        for w in &layer {
            out.entry(h.image(w).expect("own alphabet"))
                .or_default()
                .push(w.clone());
        }
        if len == max_len {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |&c| w.concat(&FiniteWord(vec![c]))))
            .collect();
    }
    out
}

pub fn random_word<R: Rng>(rng: &mut R, letters: &[char], max_len: usize) -> FiniteWord {
    let n = rng.gen_range(0..=max_len);
    FiniteWord(
        (0..n)
            .map(|_| *letters.choose(rng).expect("non-empty"))
            .collect(),
    )
}

/// A finite word or a lasso `u v^ω`, each part of length at most `max_len`.
pub fn random_up_word<R: Rng>(rng: &mut R, letters: &[char], max_len: usize) -> Word {
    let u = random_word(rng, letters, max_len);
    if rng.gen_bool(0.2) {
        return Word::Finite(u);
    }
    let mut v = random_word(rng, letters, max_len);
    if v.is_empty() {
        v = FiniteWord(vec![letters[0]]);
    }
    Word::Infinite(UPWord::new(u, v).expect("non-empty period"))
}
