//! Acceptance suite: one PASS/FAIL line per criterion, then a single
//! assertion over all of them.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use omega_fragments::fixtures::{monoid_m, monoid_n, reference, CURATED};
use omega_fragments::fragments::{is_delta2, is_delta2_via_arrows, is_delta2_via_topology, is_fo2};
use omega_fragments::polynomials::synthesize_polynomial;
use omega_fragments::syntactic::{block_automaton, strongly_recognizes, weakly_recognizes};
use omega_fragments::topology::{
    closure_alphabetic, is_closed_alphabetic, is_closed_alphabetic_algebraic, is_open_alphabetic,
};
use omega_fragments::{
    classify, compile_str, syntactic_context, ClassifyOptions, ExtBuchiAutomaton, Flags, Limits,
    LinkedPair, SyntacticContext, UPWord, Word,
};
use proptest::test_runner::{TestCaseError, TestRunner};
use rand::seq::SliceRandom;

type Outcome = std::result::Result<(), String>;

const CASES: u32 = 100;

fn lim() -> Limits {
    Limits::default()
}

fn lang(text: &str) -> ExtBuchiAutomaton {
    compile_str(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn ctx_of(text: &str) -> SyntacticContext {
    syntactic_context(&lang(text), &lim()).expect("syntactic context")
}

fn flags(text: &str) -> Flags {
    classify(&lang(text), text, ClassifyOptions::default(), &lim())
        .expect("classify")
        .flags
}

fn equiv(x: &ExtBuchiAutomaton, y: &ExtBuchiAutomaton) -> bool {
    x.equivalent(y, &lim())
        .expect("equivalence")
        .is_equivalent()
}

fn check(ok: bool, what: impl Into<String>) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn figure3_matrix() -> Outcome {
    type Expect = fn(&Flags) -> bool;
    let rows: [(&str, &str, Expect); 10] = [
        ("L1", "Sigma2 \\ (Pi2 u FO2)", |f| {
            f.sigma2 && !f.pi2 && !f.fo2
        }),
        ("L2", "(FO2 n Sigma2) \\ Pi2", |f| {
            f.fo2 && f.sigma2 && !f.pi2
        }),
        ("L3", "not in Sigma2 u Pi2 u FO2", |f| {
            !f.sigma2 && !f.pi2 && !f.fo2
        }),
        ("L4", "FO2 \\ (Sigma2 u Pi2)", |f| {
            f.fo2 && !f.sigma2 && !f.pi2
        }),
        ("L5", "Delta2 \\ BSigma1", |f| f.delta2 && !f.bsigma1),
        ("L6", "BSigma1 \\ (Sigma1 u Pi1)", |f| {
            f.bsigma1 && !f.sigma1 && !f.pi1
        }),
        ("L7", "Sigma1", |f| f.sigma1),
        ("L8", "Pi1", |f| f.pi1),
        ("L9", "(FO2 n Pi2) \\ Sigma2", |f| {
            f.fo2 && f.pi2 && !f.sigma2
        }),
        ("L10", "Pi2 \\ (Sigma2 u FO2)", |f| {
            f.pi2 && !f.sigma2 && !f.fo2
        }),
    ];
    let mut bad = Vec::new();
    for (name, region, expect) in rows {
        let f = flags(reference(name));
        if !expect(&f) {
            bad.push(format!("{name} expected {region}, got {f:?}"));
        }
    }
    check(bad.is_empty(), bad.join("; "))
}

fn six_element_monoid() -> Outcome {
    let c = ctx_of("alphabet: abc; {a,b,c}* a b {a,b,c}^oo");
    check(c.size() == 6, format!("size {}", c.size()))?;
    check(
        strongly_recognizes(c.morphism(), &c.language, &lim()).unwrap(),
        "not strongly recognized",
    )?;
    let zero = c.element("ab").ok_or("no zero element")?;
    let a = c.element("a").ok_or("no element a")?;
    check(
        c.monoid().mul(zero, a) == zero && c.monoid().mul(a, zero) == zero,
        "ab is not the zero",
    )?;
    let block = block_automaton(c.morphism(), &[], &[LinkedPair { s: zero, e: a }]);
    check(
        weakly_recognizes(c.morphism(), &block, &lim()).unwrap(),
        "[0][a]^w not weakly recognized",
    )?;
    check(
        !strongly_recognizes(c.morphism(), &block, &lim()).unwrap(),
        "[0][a]^w strongly recognized",
    )?;
    // ab(cbca)^w = abc(bcac)^w lies in [0][a]^w and in [0][c]^w.
    let w = Word::lasso("ab", "cbca");
    check(block.member(&w).unwrap(), "ab(cbca)^w not in [0][a]^w")
}

fn da_examples() -> Outcome {
    check(!monoid_m().is_in_da(), "M reported in DA")?;
    check(monoid_n().is_in_da(), "N reported outside DA")
}

fn closure_example() -> Outcome {
    let c = closure_alphabetic(&lang("alphabet: abc; {a,b,c}* a b {a,b,c}*")).unwrap();
    let expected = lang("alphabet: abc; {a,b,c}* a b {a,b,c}^oo | IM{a,b} | IM{a,b,c}");
    check(equiv(&c, &expected), "closure differs")
}

fn example_cab() -> Outcome {
    let text = "alphabet: abc; ({a,b,c}* a b)^w";
    let a = lang(text);
    let w1 = Word::Infinite(UPWord::new("".into(), "cab".into()).unwrap());
    let w2 = Word::Infinite(UPWord::new("cab".into(), "acb".into()).unwrap());
    check(a.member(&w1).unwrap(), "(cab)^w rejected")?;
    check(!a.member(&w2).unwrap(), "cab(acb)^w accepted")?;
    check(!is_fo2(&ctx_of(text)), "reported FO2")
}

fn eight_element_monoid() -> Outcome {
    let c = ctx_of("alphabet: abc; c* a {a,b,c}* b {a,b,c}* c");
    let m = c.monoid();
    check(c.size() == 8, format!("size {}", c.size()))?;
    check(
        m.elements().all(|s| m.is_idempotent(s)),
        "non-idempotent element",
    )?;
    check(m.is_in_da(), "not in DA")?;
    let abc = c.element("abc").ok_or("no element abc")?;
    let p = LinkedPair { s: abc, e: abc };
    let class = c
        .conjugacy_classes()
        .into_iter()
        .find(|k| k.contains(&p))
        .ok_or("(abc,abc) not linked")?;
    let mut names: Vec<(String, String)> = class
        .iter()
        .map(|q| (c.name(q.s).to_string(), c.name(q.e).to_string()))
        .collect();
    names.sort();
    let want: Vec<(String, String)> = [("ab", "ab"), ("ab", "b"), ("abc", "abc"), ("abc", "bc")]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
    check(names == want, format!("class {names:?}"))?;
    let block = block_automaton(c.morphism(), &[], &class);
    check(
        equiv(
            &block,
            &lang("alphabet: abc; c* a {a,b,c}* b {a,b,c}^oo & ({a,b,c}* b)^w"),
        ),
        "[abc,abc] differs from c*aG*bG^oo n (G*b)^w",
    )?;
    let bctx = syntactic_context(&block, &lim()).unwrap();
    check(is_fo2(&bctx), "[abc,abc] not FO2")?;
    check(!is_delta2(&bctx), "[abc,abc] reported Delta2")?;
    check(flags(reference("L5")).delta2, "c*aG*bG^oo not Delta2")
}

fn decomposition_cases() -> Outcome {
    let f = flags("alphabet: abc; {a,b,c}*");
    check(f.sigma2 && !f.pi2, format!("G*: {f:?}"))?;
    let f = flags("alphabet: abc; {a,b,c}^w");
    check(f.pi2 && !f.sigma2, format!("G^w: {f:?}"))?;
    let f = flags("alphabet: abc; IM{a,b}");
    check(f.fo2 && !f.sigma2 && !f.pi2, format!("IM{{a,b}}: {f:?}"))
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn run_pairs(
    name: &str,
    body: impl Fn(
        &(String, ExtBuchiAutomaton),
        &(String, ExtBuchiAutomaton),
    ) -> std::result::Result<(), TestCaseError>,
) -> Outcome {
    let mut runner = TestRunner::new(common::config(CASES));
    runner
        .run(&common::arb_language_pair(), |(x, y)| body(&x, &y))
        .map_err(|e| format!("{name}: {e}"))
}

fn run_single(
    name: &str,
    body: impl Fn(&(String, ExtBuchiAutomaton)) -> std::result::Result<(), TestCaseError>,
) -> Outcome {
    let mut runner = TestRunner::new(common::config(CASES));
    runner
        .run(&common::arb_language(), |x| body(&x))
        .map_err(|e| format!("{name}: {e}"))
}

fn closure_laws() -> Outcome {
    run_pairs("closure laws", |(tx, x), (ty, y)| {
        let cx = closure_alphabetic(x).map_err(|e| fail(e.to_string()))?;
        let ccx = closure_alphabetic(&cx).map_err(|e| fail(e.to_string()))?;
        if !equiv(&cx, &ccx) {
            return Err(fail(format!("not idempotent on {tx}")));
        }
        if !x.is_subset_of(&cx, &lim()).unwrap() {
            return Err(fail(format!("not extensive on {tx}")));
        }
        let cy = closure_alphabetic(y).unwrap();
        let cu = closure_alphabetic(&x.union(y).unwrap()).unwrap();
        if !equiv(&cu, &cx.union(&cy).unwrap()) {
            return Err(fail(format!("not additive on {tx} and {ty}")));
        }
        Ok(())
    })
}

fn duality() -> Outcome {
    run_single("open/closed duality", |(t, a)| {
        let co = a.complement(&lim()).unwrap();
        let ctx = syntactic_context(a, &lim()).unwrap();
        let co_ctx = syntactic_context(&co, &lim()).unwrap();
        let open = is_open_alphabetic(&ctx);
        if open != is_closed_alphabetic(&co, &lim()).unwrap() {
            return Err(fail(format!(
                "open(L) differs from closed(complement L) on {t}"
            )));
        }
        if is_open_alphabetic(&co_ctx) != is_closed_alphabetic(a, &lim()).unwrap() {
            return Err(fail(format!(
                "open(complement L) differs from closed(L) on {t}"
            )));
        }
        if is_open_alphabetic(&ctx.complement()) != is_open_alphabetic(&co_ctx) {
            return Err(fail(format!(
                "complement context disagrees with recomputed context on {t}"
            )));
        }
        let mut rng = common::rng(t.len() as u64);
        for _ in 0..20 {
            let w = common::random_up_word(&mut rng, a.alphabet().letters(), 4);
            if a.member(&w).unwrap() == co.member(&w).unwrap() {
                return Err(fail(format!(
                    "{w} in both or neither of L and its complement on {t}"
                )));
            }
        }
        Ok(())
    })
}

fn closedness_paths() -> Outcome {
    run_single("algebraic vs automaton closedness", |(t, a)| {
        let ctx = syntactic_context(a, &lim()).unwrap();
        let alg = is_closed_alphabetic_algebraic(&ctx);
        let aut = is_closed_alphabetic(a, &lim()).unwrap();
        if alg != aut {
            return Err(fail(format!("algebraic {alg}, automaton {aut} on {t}")));
        }
        Ok(())
    })
}

fn delta2_paths() -> Outcome {
    run_single("delta2 three paths", |(t, a)| {
        let ctx = syntactic_context(a, &lim()).unwrap();
        let p1 = is_delta2(&ctx);
        let p2 = is_delta2_via_topology(&ctx, &lim()).unwrap();
        let p3 = is_delta2_via_arrows(&ctx);
        if p1 != p2 || p1 != p3 {
            return Err(fail(format!(
                "R-classes {p1}, topology {p2}, arrows {p3} on {t}"
            )));
        }
        Ok(())
    })
}

fn saturation_audit() -> Outcome {
    let mut runner = TestRunner::new(common::config(CASES));
    let strat = (common::arb_language(), proptest::prelude::any::<u64>());
    runner
        .run(&strat, |((t, a), seed)| {
            let ctx = syntactic_context(&a, &lim()).unwrap();
            let h = ctx.morphism();
            let classes = common::words_by_class(h, 6);
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            for s in ctx.monoid().elements() {
                let us = classes
                    .get(&s)
                    .cloned()
                    .unwrap_or_else(|| vec![h.rep(s).clone()]);
                for u in us.choose_multiple(&mut rng, 3) {
                    if a.member(&Word::Finite(u.clone())).unwrap() != ctx.rec.finite(s) {
                        return Err(fail(format!(
                            "finite acceptance of {u} disagrees with [{}] on {t}",
                            ctx.name(s)
                        )));
                    }
                }
            }
            for p in ctx.linked_pairs() {
                let us = classes
                    .get(&p.s)
                    .cloned()
                    .unwrap_or_else(|| vec![h.rep(p.s).clone()]);
                let mut vs: Vec<_> = classes
                    .get(&p.e)
                    .cloned()
                    .unwrap_or_default()
                    .into_iter()
                    .filter(|v| !v.is_empty())
                    .collect();
                if vs.is_empty() && !h.rep(p.e).is_empty() {
                    vs.push(h.rep(p.e).clone());
                }
                for _ in 0..3 {
                    let (Some(u), Some(v)) = (us.choose(&mut rng), vs.choose(&mut rng)) else {
                        break;
                    };
                    let w = Word::Infinite(UPWord::new(u.clone(), v.clone()).unwrap());
                    if a.member(&w).unwrap() != ctx.val(p) {
                        return Err(fail(format!(
                            "VAL({}, {}) = {} but {w} disagrees on {t}",
                            ctx.name(p.s),
                            ctx.name(p.e),
                            ctx.val(p)
                        )));
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| format!("saturation audit: {e}"))
}

fn synthesis_agreement() -> Outcome {
    let mut bad = Vec::new();
    for (name, text) in CURATED {
        let a = lang(text);
        let f = flags(text);
        let p = synthesize_polynomial(&a, 3, false, &lim()).map_err(|e| format!("{name}: {e}"))?;
        if p.is_some() != f.sigma2 {
            bad.push(format!(
                "{name}: sigma2 {} but synthesis {:?}",
                f.sigma2,
                p.map(|p| p.to_string())
            ));
            continue;
        }
        let u = synthesize_polynomial(&a, 3, true, &lim()).map_err(|e| format!("{name}: {e}"))?;
        if u.is_some() != f.fo2_sigma2 {
            bad.push(format!(
                "{name}: fo2_sigma2 {} but unambiguous synthesis {:?}",
                f.fo2_sigma2,
                u.map(|p| p.to_string())
            ));
        }
    }
    check(bad.is_empty(), bad.join("; "))
}

fn property_suites() -> Outcome {
    let suites: [(&str, fn() -> Outcome); 6] = [
        ("closure idempotence/extensivity/additivity", closure_laws),
        ("open/closed duality", duality),
        ("algebraic vs automaton closedness", closedness_paths),
        ("delta2 three-path agreement", delta2_paths),
        ("VAL saturation audit", saturation_audit),
        (
            "synthesis vs classifier on curated suite",
            synthesis_agreement,
        ),
    ];
    let mut bad = Vec::new();
    for (name, f) in suites {
        let start = Instant::now();
        let r = f();
        println!(
            "      {:<4} {name} ({:.2?})",
            if r.is_ok() { "ok" } else { "FAIL" },
            start.elapsed()
        );
        if let Err(e) = r {
            bad.push(e);
        }
    }
    check(bad.is_empty(), bad.join("; "))
}

/// Runs without the libtest harness so every criterion line reaches stdout.
fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 reference classification matrix L1..L10", figure3_matrix),
        (
            "2 six-element monoid, weak vs strong recognition",
            six_element_monoid,
        ),
        ("3 DA membership of M and N", da_examples),
        ("4 alphabetic closure of G*abG*", closure_example),
        ("5 (G*ab)^w membership and FO2", example_cab),
        (
            "6 eight-element DA monoid and [abc,abc]",
            eight_element_monoid,
        ),
        ("7 G*, G^w and IM{a,b} cases", decomposition_cases),
        ("8 property suites", property_suites),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        match r {
            Ok(()) => println!("PASS {name} ({:.2?})", start.elapsed()),
            Err(e) => {
                failures += 1;
                println!("FAIL {name} ({:.2?}): {e}", start.elapsed());
            }
        }
    }
    println!("NOT REPRODUCED 9 hardness of closedness and decidability of BSigma2 (no decision procedure to test)");
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
