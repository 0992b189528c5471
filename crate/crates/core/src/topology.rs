//! Alphabetic and Cantor topology on Γ^∞.
//!
//! The alphabetic closure of `L` is
//! `∪_{S ⊆ Γ} arrow(L / S^∞) ∩ S^im`; each term is built from a
//! determinized arrow block, so the closure is deterministic-shaped.

use serde::Serialize;

use crate::alphabet::LetterSet;
use crate::automata::ExtBuchiAutomaton;
use crate::error::{Error, Limits, Result};
use crate::syntactic::{syntactic_context, LinkedPair, SyntacticContext};

/// Largest alphabet for which the `2^|Γ|` closure terms are enumerated.
pub const MAX_CLOSURE_ALPHABET: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct TopologyReport {
    pub open_alphabetic: bool,
    pub closed_alphabetic: bool,
    pub clopen_alphabetic: bool,
    pub open_cantor: bool,
    pub closed_cantor: bool,
    #[serde(skip)]
    pub closure_automaton: ExtBuchiAutomaton,
    #[serde(skip)]
    pub interior_automaton: ExtBuchiAutomaton,
}

impl TopologyReport {
    /// One-line summary of the alphabetic open/closed status.
    pub fn verdict(&self) -> &'static str {
        match (self.open_alphabetic, self.closed_alphabetic) {
            (true, true) => "clopen",
            (false, true) => "closed",
            (true, false) => "open, not closed",
            (false, false) => "not open, not closed",
        }
    }

    pub fn verdict_text(&self) -> String {
        format!(
            "verdict: {}\nopen: {}\nclosed: {}\nclopen: {}\ncantor open: {}\ncantor closed: {}\n",
            self.verdict(),
            self.open_alphabetic,
            self.closed_alphabetic,
            self.clopen_alphabetic,
            self.open_cantor,
            self.closed_cantor
        )
    }
}

fn check_alphabet(a: &ExtBuchiAutomaton) -> Result<()> {
    if a.alphabet().len() > MAX_CLOSURE_ALPHABET {
        return Err(Error::ResourceLimit {
            what: "closure alphabet size".into(),
            limit: MAX_CLOSURE_ALPHABET,
        });
    }
    Ok(())
}

/// The term `arrow(L / S^∞) ∩ S^im` of the closure.
pub fn closure_block(a: &ExtBuchiAutomaton, s: LetterSet) -> ExtBuchiAutomaton {
    a.quotient_inf(s).arrow().restrict_im(s)
}

pub fn closure_alphabetic(a: &ExtBuchiAutomaton) -> Result<ExtBuchiAutomaton> {
    check_alphabet(a)?;
    let mut out = ExtBuchiAutomaton::empty(a.alphabet());
    for s in a.alphabet().subsets() {
        out = out.union(&closure_block(a, s))?;
    }
    Ok(out.simplify())
}

pub fn interior_alphabetic(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<ExtBuchiAutomaton> {
    let co = a.complement(limits)?;
    closure_alphabetic(&co)?.complement(limits)
}

/// Linked pairs `(s, e)`, `(t, f)` with `t, f ∈ M_e`, `[s][e]^ω ⊆ L` and
/// `[st][f]^ω ⊄ L`; none exist iff L is open.
pub fn open_violation(ctx: &SyntacticContext) -> Option<(LinkedPair, LinkedPair)> {
    let m = ctx.monoid();
    let pairs = ctx.linked_pairs();
    for &p in pairs.iter().filter(|&&p| ctx.val(p)) {
        let me = m.local_submonoid(p.e).expect("idempotent");
        for &q in &pairs {
            if me.contains(q.s) && me.contains(q.e) {
                let st = LinkedPair {
                    s: m.mul(p.s, q.s),
                    e: q.e,
                };
                if !ctx.val(st) {
                    return Some((p, q));
                }
            }
        }
    }
    None
}

pub fn is_open_alphabetic(ctx: &SyntacticContext) -> bool {
    open_violation(ctx).is_none()
}

/// Closedness as `L ≡ closure(L)`.
pub fn is_closed_alphabetic(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<bool> {
    closure_alphabetic(a)?.is_subset_of(a, limits)
}

/// Closedness as openness of the complement.
pub fn is_closed_alphabetic_algebraic(ctx: &SyntacticContext) -> bool {
    is_open_alphabetic(&ctx.complement())
}

pub fn is_clopen_alphabetic(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<bool> {
    let ctx = syntactic_context(a, limits)?;
    Ok(is_open_alphabetic(&ctx) && is_closed_alphabetic(a, limits)?)
}

/// `L ∩ Γ^ω ⊆ W·Γ^ω` for `W = {u : uΓ^∞ ⊆ L}`: no infinite word of `L` has
/// all its prefixes extendable into the complement.
pub fn is_open_cantor(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<bool> {
    let co = a.complement(limits)?;
    let bad = co.quotient_inf(a.alphabet().full_set()).arrow();
    Ok(a.intersect(&bad)?.is_empty_omega())
}

pub fn is_closed_cantor(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<bool> {
    is_open_cantor(&a.complement(limits)?, limits)
}

pub fn topology_report(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<TopologyReport> {
    let ctx = syntactic_context(a, limits)?;
    let closure_automaton = closure_alphabetic(a)?;
    let interior_automaton = interior_alphabetic(a, limits)?;
    let open_alphabetic = is_open_alphabetic(&ctx);
    let closed_alphabetic = closure_automaton.is_subset_of(a, limits)?;
    Ok(TopologyReport {
        open_alphabetic,
        closed_alphabetic,
        clopen_alphabetic: open_alphabetic && closed_alphabetic,
        open_cantor: is_open_cantor(a, limits)?,
        closed_cantor: is_closed_cantor(a, limits)?,
        closure_automaton,
        interior_automaton,
    })
}
