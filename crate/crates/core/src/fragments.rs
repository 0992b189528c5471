//! Fragment classifiers over the ordered syntactic monoid.
//!
//! | flag      | criterion                                                     |
//! |-----------|---------------------------------------------------------------|
//! | `sigma2`  | open, and every idempotent locally top                        |
//! | `pi2`     | `sigma2` of the complement                                    |
//! | `fo2`     | syntactic monoid in DA                                        |
//! | `delta2`  | DA, and `s R t ⇒ (VAL(s,e) ⇔ VAL(t,f))` on linked pairs       |
//! | `sigma1`  | `x ≤ 1` for all `x`, and open in the Cantor topology          |
//! | `pi1`     | `x ≥ 1` for all `x`, and closed in the Cantor topology        |
//! | `bsigma1` | J-trivial and alphabetically clopen                           |

use std::collections::BTreeMap;

use serde::Serialize;

use crate::alphabet::LetterSet;
use crate::automata::{Dfa, ExtBuchiAutomaton};
use crate::error::{Error, Limits, Result};
use crate::polynomials::{synthesize_polynomial, MAX_SYNTH_ALPHABET};
use crate::syntactic::{syntactic_context, LinkedPair, SyntacticContext};
use crate::topology::{
    closure_alphabetic, is_closed_cantor, is_open_alphabetic, is_open_cantor, open_violation,
};

/// Why a language fails to be Σ₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sigma2Violation {
    /// `[s][e]^ω ⊆ L` but `[st][f]^ω ⊄ L` with `t, f ∈ M_e`.
    NotOpen(LinkedPair, LinkedPair),
    /// `ese ≰ e` for `s ∈ M_e`.
    NotLocallyTop { e: usize, s: usize },
}

pub fn sigma2_violation(ctx: &SyntacticContext) -> Option<Sigma2Violation> {
    if let Some((p, q)) = open_violation(ctx) {
        return Some(Sigma2Violation::NotOpen(p, q));
    }
    let m = ctx.monoid();
    for e in m.idempotents() {
        if let Some(s) = m.locally_top_violation(e).expect("idempotent") {
            return Some(Sigma2Violation::NotLocallyTop { e, s });
        }
    }
    None
}

pub fn is_sigma2(ctx: &SyntacticContext) -> bool {
    sigma2_violation(ctx).is_none()
}

/// Σ₂ via closedness of the complement (automaton path) and local tops.
pub fn is_sigma2_via_closure(ctx: &SyntacticContext, limits: &Limits) -> Result<bool> {
    let m = ctx.monoid();
    let tops = m
        .idempotents()
        .into_iter()
        .all(|e| m.locally_top(e).expect("idempotent"));
    let co = ctx.language.complement(limits)?;
    Ok(tops && closure_alphabetic(&co)?.is_subset_of(&co, limits)?)
}

pub fn is_pi2(ctx: &SyntacticContext) -> bool {
    is_sigma2(&ctx.complement())
}

pub fn is_fo2(ctx: &SyntacticContext) -> bool {
    ctx.monoid().is_in_da()
}

/// Linked pairs `(s, e)`, `(t, f)` with `s R t` and different acceptance.
pub fn r_class_violation(ctx: &SyntacticContext) -> Option<(LinkedPair, LinkedPair)> {
    let m = ctx.monoid();
    let pairs = ctx.linked_pairs();
    for &p in &pairs {
        for &q in &pairs {
            if m.r_related(p.s, q.s) && ctx.val(p) != ctx.val(q) {
                return Some((p, q));
            }
        }
    }
    None
}

pub fn is_delta2(ctx: &SyntacticContext) -> bool {
    is_fo2(ctx) && r_class_violation(ctx).is_none()
}

/// Δ₂ as FO² together with alphabetic clopenness (automaton path for
/// closedness).
pub fn is_delta2_via_topology(ctx: &SyntacticContext, limits: &Limits) -> Result<bool> {
    if !is_fo2(ctx) || !is_open_alphabetic(ctx) {
        return Ok(false);
    }
    closure_alphabetic(&ctx.language)?.is_subset_of(&ctx.language, limits)
}

/// Δ₂ as DA together with the arrow pair property.
pub fn is_delta2_via_arrows(ctx: &SyntacticContext) -> bool {
    is_fo2(ctx) && arrow_pair_property(ctx)
}

/// A linked pair with `VAL(s, e) ≠ ([s] ⊆ L)`.
pub fn arrow_pair_violation(ctx: &SyntacticContext) -> Option<LinkedPair> {
    ctx.linked_pairs()
        .into_iter()
        .find(|&p| ctx.val(p) != ctx.rec.finite(p.s))
}

/// L and its complement are both arrow languages.
pub fn arrow_pair_property(ctx: &SyntacticContext) -> bool {
    arrow_pair_violation(ctx).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelOne {
    pub sigma1: bool,
    pub pi1: bool,
    pub bsigma1: bool,
}

pub fn level_one(ctx: &SyntacticContext, limits: &Limits) -> Result<LevelOne> {
    let m = ctx.monoid();
    let sigma1 = m.satisfies_x_leq_one() && is_open_cantor(&ctx.language, limits)?;
    let pi1 = m.satisfies_x_geq_one() && is_closed_cantor(&ctx.language, limits)?;
    let bsigma1 = m.is_j_trivial()
        && is_open_alphabetic(ctx)
        && closure_alphabetic(&ctx.language)?.is_subset_of(&ctx.language, limits)?;
    Ok(LevelOne {
        sigma1,
        pi1,
        bsigma1,
    })
}

/// Flags in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub sigma1: bool,
    pub pi1: bool,
    pub bsigma1: bool,
    pub sigma2: bool,
    pub pi2: bool,
    pub delta2: bool,
    pub fo2: bool,
    pub fo2_sigma2: bool,
    pub fo2_pi2: bool,
}

impl Flags {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, bool)> {
        [
            ("sigma1", self.sigma1),
            ("pi1", self.pi1),
            ("bsigma1", self.bsigma1),
            ("sigma2", self.sigma2),
            ("pi2", self.pi2),
            ("delta2", self.delta2),
            ("fo2", self.fo2),
            ("fo2_sigma2", self.fo2_sigma2),
            ("fo2_pi2", self.fo2_pi2),
        ]
        .into_iter()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FragmentReport {
    pub language: String,
    pub alphabet: String,
    pub syntactic_monoid_size: usize,
    pub flags: Flags,
    pub witnesses: BTreeMap<String, String>,
}

impl FragmentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "language: {}\nalphabet: {}\nsyntactic monoid size: {}\n",
            self.language, self.alphabet, self.syntactic_monoid_size
        );
        for (name, v) in self.flags.iter() {
            s.push_str(&format!("{name:<11} {v}\n"));
        }
        if !self.witnesses.is_empty() {
            s.push_str("witnesses:\n");
            for (k, v) in &self.witnesses {
                s.push_str(&format!("  {k}: {v}\n"));
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassifyOptions {
    /// Attach violating pairs for false flags.
    pub witnesses: bool,
    /// Attach synthesized polynomials for true Σ₂ flags (small alphabets only).
    pub synthesize: bool,
}

fn pair_name(ctx: &SyntacticContext, p: LinkedPair) -> String {
    format!("({}, {})", ctx.name(p.s), ctx.name(p.e))
}

fn sigma2_text(ctx: &SyntacticContext, v: &Sigma2Violation) -> String {
    match v {
        Sigma2Violation::NotOpen(p, q) => {
            let st = LinkedPair {
                s: ctx.monoid().mul(p.s, q.s),
                e: q.e,
            };
            format!(
                "linked pairs {} and {}: VAL{} holds but VAL{} fails",
                pair_name(ctx, *p),
                pair_name(ctx, *q),
                pair_name(ctx, *p),
                pair_name(ctx, st)
            )
        }
        Sigma2Violation::NotLocallyTop { e, s } => {
            format!(
                "idempotent {} is not locally top: {} in M_e",
                ctx.name(*e),
                ctx.name(*s)
            )
        }
    }
}

/// Classifies `L(a)`; `language` is the label used in the report.
pub fn classify(
    a: &ExtBuchiAutomaton,
    language: &str,
    opts: ClassifyOptions,
    limits: &Limits,
) -> Result<FragmentReport> {
    let ctx = syntactic_context(a, limits)?;
    classify_context(&ctx, language, opts, limits)
}

pub fn classify_context(
    ctx: &SyntacticContext,
    language: &str,
    opts: ClassifyOptions,
    limits: &Limits,
) -> Result<FragmentReport> {
    let co = ctx.complement();
    let s2 = sigma2_violation(ctx);
    let p2 = sigma2_violation(&co);
    let da = ctx.monoid().da_violation();
    let rv = r_class_violation(ctx);
    let one = level_one(ctx, limits)?;
    let (sigma2, pi2, fo2) = (s2.is_none(), p2.is_none(), da.is_none());
    let flags = Flags {
        sigma1: one.sigma1,
        pi1: one.pi1,
        bsigma1: one.bsigma1,
        sigma2,
        pi2,
        delta2: fo2 && rv.is_none(),
        fo2,
        fo2_sigma2: fo2 && sigma2,
        fo2_pi2: fo2 && pi2,
    };
    let mut witnesses = BTreeMap::new();
    if opts.witnesses {
        if let Some(v) = &s2 {
            witnesses.insert("sigma2".into(), sigma2_text(ctx, v));
        }
        if let Some(v) = &p2 {
            witnesses.insert("pi2".into(), format!("complement: {}", sigma2_text(&co, v)));
        }
        if let Some((e, s)) = da {
            witnesses.insert(
                "fo2".into(),
                format!(
                    "idempotent {} with {} in M_e and ese != e",
                    ctx.name(e),
                    ctx.name(s)
                ),
            );
        }
        if fo2 {
            if let Some((p, q)) = rv {
                witnesses.insert(
                    "delta2".into(),
                    format!(
                        "R-related linked pairs {} and {} differ in VAL",
                        pair_name(ctx, p),
                        pair_name(ctx, q)
                    ),
                );
            }
        }
    }
    if opts.synthesize && ctx.alphabet().len() <= MAX_SYNTH_ALPHABET {
        let degree = limits.max_degree.min(crate::polynomials::MAX_SYNTH_DEGREE);
        if sigma2 {
            if let Some(p) = synthesize_polynomial(&ctx.language, degree, false, limits)? {
                witnesses.insert("sigma2".into(), format!("polynomial {p}"));
            }
        }
        if flags.fo2_sigma2 {
            if let Some(p) = synthesize_polynomial(&ctx.language, degree, true, limits)? {
                witnesses.insert("fo2_sigma2".into(), format!("unambiguous polynomial {p}"));
            }
        }
    }
    Ok(FragmentReport {
        language: language.to_string(),
        alphabet: ctx.alphabet().to_string(),
        syntactic_monoid_size: ctx.size(),
        flags,
        witnesses,
    })
}

/// FO²-definability of `L ∩ S^im`.
pub fn classify_relative(a: &ExtBuchiAutomaton, s: LetterSet, limits: &Limits) -> Result<bool> {
    Ok(is_fo2(&syntactic_context(&a.restrict_im(s), limits)?))
}

/// The finite-word language `W = ∪{[s] : VAL(s, e) for some e}` on the
/// syntactic Cayley graph, as an automaton of its arrow language.
pub fn arrow_of_accepting_prefixes(ctx: &SyntacticContext) -> ExtBuchiAutomaton {
    let m = ctx.monoid();
    let h = &ctx.morphism().letter_map;
    let mut accepting = vec![false; m.size()];
    for p in ctx.linked_pairs() {
        if ctx.val(p) {
            accepting[p.s] = true;
        }
    }
    let dfa = Dfa {
        alphabet: ctx.alphabet().clone(),
        delta: m
            .elements()
            .map(|s| h.iter().map(|&g| Some(m.mul(s, g))).collect())
            .collect(),
        initial: Some(m.unit()),
        accepting,
    };
    dfa.to_automaton(true, true)
}

/// For `L ⊆ Γ^ω`: some Δ₂ language has ω-part `L`.
pub fn delta2_omega(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<bool> {
    if !a.finite_part().is_empty() {
        return Err(Error::Precondition(
            "language must contain infinite words only".into(),
        ));
    }
    let ctx = syntactic_context(a, limits)?;
    if !is_fo2(&ctx) {
        return Ok(false);
    }
    let w = arrow_of_accepting_prefixes(&ctx).omega_part();
    Ok(a.equivalent(&w, limits)?.is_equivalent())
}
