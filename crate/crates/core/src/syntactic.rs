//! Transition-profile monoids, ω-acceptance tables on linked pairs, and the
//! ordered syntactic monoid.
//!
//! A [`Recognizer`] is a morphism `h : Γ* → M` together with the finite
//! acceptance `[s] ⊆ L` and `VAL(s, e) ⇔ [s][e]^ω ⊆ L` for linked pairs.
//! Every recognizer built here saturates its language, so Boolean
//! operations, emptiness and equivalence are all decided on monoid
//! elements instead of words.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::alphabet::{Alphabet, FiniteWord, UPWord, Word};
use crate::automata::{graph, ExtBuchiAutomaton};
use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Limits, Result};
use crate::monoids::OrderedMonoid;

/// Monoid morphism from Γ* given by letter images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub alphabet: Alphabet,
    pub target: OrderedMonoid,
    pub letter_map: Vec<usize>,
    /// Shortest, then lexicographically least, word mapped to each element.
    pub representatives: Vec<FiniteWord>,
}

impl Morphism {
    pub fn image(&self, w: &FiniteWord) -> Result<usize> {
        Ok(self.image_idx(&self.alphabet.encode(w)?))
    }

    pub fn image_idx(&self, w: &[usize]) -> usize {
        w.iter().fold(self.target.unit(), |m, &a| {
            self.target.mul(m, self.letter_map[a])
        })
    }

    pub fn letter(&self, c: char) -> Option<usize> {
        self.alphabet.index(c).map(|a| self.letter_map[a])
    }

    pub fn rep(&self, s: usize) -> &FiniteWord {
        &self.representatives[s]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkedPair {
    pub s: usize,
    pub e: usize,
}

/// Acceptance data of a saturating morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaTable {
    /// `finite[s]`: `[s] ⊆ L`.
    finite: Vec<bool>,
    /// Slot of each idempotent in `val`.
    slot: Vec<Option<usize>>,
    /// `val[slot(e)]`: the `s` with `VAL(s, e)`; only linked entries matter.
    val: Vec<BitSet>,
}

impl OmegaTable {
    pub fn finite(&self, s: usize) -> bool {
        self.finite[s]
    }

    fn raw(&self, s: usize, e: usize, unit: usize) -> bool {
        if e == unit {
            self.finite[s]
        } else {
            self.val[self.slot[e].expect("idempotent")].contains(s)
        }
    }

    fn negate(&self) -> OmegaTable {
        let n = self.finite.len();
        OmegaTable {
            finite: self.finite.iter().map(|b| !b).collect(),
            slot: self.slot.clone(),
            val: self
                .val
                .iter()
                .map(|b| {
                    let mut c = BitSet::full(n);
                    for s in b.iter() {
                        c.remove(s);
                    }
                    c
                })
                .collect(),
        }
    }
}

/// A saturating morphism with its acceptance table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recognizer {
    pub morphism: Morphism,
    pub table: OmegaTable,
}

impl Recognizer {
    pub fn monoid(&self) -> &OrderedMonoid {
        &self.morphism.target
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.morphism.alphabet
    }

    pub fn size(&self) -> usize {
        self.monoid().size()
    }

    pub fn is_linked(&self, s: usize, e: usize) -> bool {
        let m = self.monoid();
        s < m.size() && e < m.size() && m.is_idempotent(e) && m.mul(s, e) == s
    }

    /// `VAL(s, e)`: `[s][e]^ω ⊆ L` for a linked pair.
    pub fn val(&self, s: usize, e: usize) -> Result<bool> {
        if !self.is_linked(s, e) {
            return Err(Error::NotLinked(s, e));
        }
        Ok(self.table.raw(s, e, self.monoid().unit()))
    }

    /// `[s][n]^ω ⊆ L` for arbitrary `s, n`, reduced to the linked pair
    /// `(s·n^π, n^π)`.
    pub fn omega_member(&self, s: usize, n: usize) -> bool {
        let m = self.monoid();
        let e = m.idempotent_power(n);
        self.table.raw(m.mul(s, e), e, m.unit())
    }

    pub fn finite(&self, s: usize) -> bool {
        self.table.finite[s]
    }

    pub fn linked_pairs(&self) -> Vec<LinkedPair> {
        linked_pairs(self.monoid())
    }

    /// Membership of a word through its image.
    pub fn accepts(&self, w: &Word) -> Result<bool> {
        match w {
            Word::Finite(f) => Ok(self.finite(self.morphism.image(f)?)),
            Word::Infinite(u) => {
                let s = self.morphism.image(u.prefix())?;
                let n = self.morphism.image(u.period())?;
                Ok(self.omega_member(s, n))
            }
        }
    }

    /// Recognizer of the complement (same morphism).
    pub fn complement(&self) -> Recognizer {
        Recognizer {
            morphism: self.morphism.clone(),
            table: self.table.negate(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.accepted_word().is_none()
    }

    /// Shortest-lex finite word of the language if any, else the smallest
    /// lasso `rep(s)·rep(e)^ω` over linked pairs with `VAL(s, e)`.
    pub fn accepted_word(&self) -> Option<Word> {
        let m = self.monoid();
        if let Some(s) = m.elements().find(|&s| self.finite(s)) {
            return Some(Word::Finite(self.morphism.rep(s).clone()));
        }
        let mut best: Option<UPWord> = None;
        for e in m.idempotents() {
            if e == m.unit() {
                continue;
            }
            for s in m.elements() {
                if m.mul(s, e) != s || !self.table.raw(s, e, m.unit()) {
                    continue;
                }
                let w = UPWord::new(self.morphism.rep(s).clone(), self.morphism.rep(e).clone())
                    .expect("non-unit idempotent has a non-empty representative");
                let key = |w: &UPWord| (w.prefix().len() + w.period().len(), w.to_string());
                if best.as_ref().is_none_or(|b| key(&w) < key(b)) {
                    best = Some(w);
                }
            }
        }
        best.map(Word::Infinite)
    }

    /// Automaton for the language, built on the right Cayley graph.
    pub fn to_automaton(&self) -> ExtBuchiAutomaton {
        let m = self.monoid();
        let pairs: Vec<LinkedPair> = self
            .linked_pairs()
            .into_iter()
            .filter(|p| self.table.raw(p.s, p.e, m.unit()))
            .collect();
        let finite: Vec<usize> = m.elements().filter(|&s| self.finite(s)).collect();
        block_automaton(&self.morphism, &finite, &pairs).with_origin(self.clone())
    }

    /// Syntactic quotient of this recognizer.
    pub fn reduce(&self) -> Recognizer {
        let pre = refine(self, false);
        quotient(self, &pre.leq)
    }
}

/// All linked pairs `(s, e)`, grouped by `e` in element order.
pub fn linked_pairs(m: &OrderedMonoid) -> Vec<LinkedPair> {
    let mut out = Vec::new();
    for e in m.idempotents() {
        for s in m.elements() {
            if m.mul(s, e) == s {
                out.push(LinkedPair { s, e });
            }
        }
    }
    out
}

/// `∃ x, y: e = xy, f = yx, t = sx`.
pub fn conjugated(m: &OrderedMonoid, p: LinkedPair, q: LinkedPair) -> bool {
    for x in m.elements() {
        if m.mul(p.s, x) != q.s {
            continue;
        }
        for y in m.elements() {
            if m.mul(x, y) == p.e && m.mul(y, x) == q.e {
                return true;
            }
        }
    }
    false
}

/// Automaton for `∪_{s ∈ finite} [s] ∪ ∪_{(s,e) ∈ pairs} [s]([e]∖1)^ω`
/// (with `[s]` added for pairs `(s, 1)`).
pub fn block_automaton(h: &Morphism, finite: &[usize], pairs: &[LinkedPair]) -> ExtBuchiAutomaton {
    let m = &h.target;
    let n = m.size();
    let k = h.alphabet.len();
    let unit = m.unit();
    let mut by_e: Vec<(usize, BitSet)> = Vec::new();
    for p in pairs {
        match by_e.iter_mut().find(|(e, _)| *e == p.e) {
            Some((_, set)) => {
                set.insert(p.s);
            }
            None => {
                let mut set = BitSet::new(n);
                set.insert(p.s);
                by_e.push((p.e, set));
            }
        }
    }
    let mut fin = BitSet::new(n);
    for &s in finite {
        fin.insert(s);
    }
    if let Some((_, set)) = by_e.iter().find(|(e, _)| *e == unit) {
        fin.union_with(set);
    }
    // States: prefix tracker 0..n, then per e a boundary state and n block states.
    let total = n + by_e.len() * (n + 1);
    let mut a = ExtBuchiAutomaton::new(h.alphabet.clone(), total);
    a.set_initial(unit);
    for s in 0..n {
        a.set_final(s, fin.contains(s));
    }
    let boundary = |i: usize| n + i * (n + 1);
    let block = |i: usize, s: usize| n + i * (n + 1) + 1 + s;
    for s in 0..n {
        for x in 0..k {
            let t = m.mul(s, h.letter_map[x]);
            a.add_transition(s, x, t);
            for (i, (_, set)) in by_e.iter().enumerate() {
                if set.contains(t) {
                    a.add_transition(s, x, boundary(i));
                }
            }
        }
    }
    for (i, (e, set)) in by_e.iter().enumerate() {
        let b = boundary(i);
        a.set_repeated(b, true);
        if set.contains(unit) {
            a.set_initial(b);
        }
        for x in 0..k {
            let g = h.letter_map[x];
            a.add_transition(b, x, block(i, g));
            if g == *e {
                a.add_transition(b, x, b);
            }
        }
        for s in 0..n {
            for x in 0..k {
                let t = m.mul(s, h.letter_map[x]);
                a.add_transition(block(i, s), x, block(i, t));
                if t == *e {
                    a.add_transition(block(i, s), x, b);
                }
            }
        }
    }
    a.simplify()
}

// ---------------------------------------------------------------------------
// Transition profiles.

/// Per word: `path[p][q]` iff some run p → q exists, `rpath[p][q]` iff some
/// such run visits a repeated state (at a position before the last).
#[derive(Clone, PartialEq, Eq, Hash)]
struct Profile {
    empty: bool,
    path: BitMatrix,
    rpath: BitMatrix,
}

impl Profile {
    fn identity(n: usize) -> Profile {
        Profile {
            empty: true,
            path: BitMatrix::identity(n),
            rpath: BitMatrix::new(n),
        }
    }

    fn letter(a: &ExtBuchiAutomaton, x: usize) -> Profile {
        let n = a.num_states();
        let mut path = BitMatrix::new(n);
        let mut rpath = BitMatrix::new(n);
        for p in 0..n {
            for &q in a.successors(p, x) {
                path.set(p, q);
                if a.is_repeated(p) {
                    rpath.set(p, q);
                }
            }
        }
        Profile {
            empty: false,
            path,
            rpath,
        }
    }

    fn then(&self, o: &Profile) -> Profile {
        let n = self.path.dim();
        let mut path = BitMatrix::new(n);
        let mut rpath = BitMatrix::new(n);
        for i in 0..n {
            for j in self.path.row_iter(i) {
                path.or_row_from(i, &o.path, j);
                rpath.or_row_from(i, &o.rpath, j);
            }
            for j in self.rpath.row_iter(i) {
                rpath.or_row_from(i, &o.path, j);
            }
        }
        Profile {
            empty: self.empty && o.empty,
            path,
            rpath,
        }
    }
}

/// The transition-profile morphism of `a` with its acceptance table.
pub fn profile_monoid(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<Recognizer> {
    let n = a.num_states();
    let k = a.alphabet().len();
    let letters: Vec<Profile> = (0..k).map(|x| Profile::letter(a, x)).collect();
    let mut ids: HashMap<Profile, usize> = HashMap::new();
    let mut profiles = vec![Profile::identity(n)];
    ids.insert(profiles[0].clone(), 0);
    let mut reps: Vec<Vec<usize>> = vec![Vec::new()];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < profiles.len() {
        let mut row = Vec::with_capacity(k);
        for (x, lp) in letters.iter().enumerate() {
            let p = profiles[i].then(lp);
            let id = match ids.get(&p) {
                Some(&id) => id,
                None => {
                    if profiles.len() >= limits.max_monoid {
                        return Err(Error::ResourceLimit {
                            what: "transition-profile monoid".into(),
                            limit: limits.max_monoid,
                        });
                    }
                    let id = profiles.len();
                    ids.insert(p.clone(), id);
                    profiles.push(p);
                    let mut r = reps[i].clone();
                    r.push(x);
                    reps.push(r);
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        i += 1;
    }
    let size = profiles.len();
    let table = cayley_table(size, &right, &reps);
    let order = (0..size)
        .map(|s| {
            let mut b = BitSet::new(size);
            b.insert(s);
            b
        })
        .collect();
    let monoid = OrderedMonoid::from_flat(size, table, 0, order);

    let mut init = BitSet::new(n);
    for &q in a.initial_states() {
        init.insert(q);
    }
    // Reach sets from the initial states.
    let reach: Vec<BitSet> = profiles
        .iter()
        .map(|p| {
            let mut r = BitSet::new(n);
            for i in init.iter() {
                for q in p.path.row_iter(i) {
                    r.insert(q);
                }
            }
            r
        })
        .collect();
    let finals: Vec<usize> = (0..n).filter(|&q| a.is_final(q)).collect();
    let finite = reach
        .iter()
        .map(|r| finals.iter().any(|&f| r.contains(f)))
        .collect();
    let mut slot = vec![None; size];
    let mut val = Vec::new();
    for e in monoid.idempotents() {
        if e == 0 {
            continue;
        }
        let mut loops = BitSet::new(n);
        for q in 0..n {
            if profiles[e].rpath.get(q, q) {
                loops.insert(q);
            }
        }
        let mut set = BitSet::new(size);
        for s in 0..size {
            if monoid.mul(s, e) == s && reach[s].intersects(&loops) {
                set.insert(s);
            }
        }
        slot[e] = Some(val.len());
        val.push(set);
    }
    let letter_map = (0..k).map(|x| right[0][x]).collect();
    let alphabet = a.alphabet().clone();
    let monoid = monoid.with_names(
        reps.iter()
            .map(|r| alphabet.decode(r).to_string())
            .collect(),
    );
    let representatives = reps.iter().map(|r| alphabet.decode(r)).collect();
    Ok(Recognizer {
        morphism: Morphism {
            alphabet,
            target: monoid,
            letter_map,
            representatives,
        },
        table: OmegaTable { finite, slot, val },
    })
}

/// Full multiplication table from the right Cayley graph.
fn cayley_table(size: usize, right: &[Vec<usize>], reps: &[Vec<usize>]) -> Vec<u32> {
    let mut table = vec![0u32; size * size];
    for s in 0..size {
        for t in 0..size {
            let r = reps[t].iter().fold(s, |m, &x| right[m][x]);
            table[s * size + t] = r as u32;
        }
    }
    table
}

/// Submonoid of `M_a × M_b` generated by the letter pairs, with the
/// acceptance combined component-wise by `op`.
pub fn product(
    a: &Recognizer,
    b: &Recognizer,
    op: fn(bool, bool) -> bool,
    limits: &Limits,
) -> Result<Recognizer> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "'{}' versus '{}'",
            a.alphabet(),
            b.alphabet()
        )));
    }
    let (ma, mb) = (a.monoid(), b.monoid());
    let k = a.alphabet().len();
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut comps = vec![(ma.unit(), mb.unit())];
    ids.insert(comps[0], 0);
    let mut reps: Vec<Vec<usize>> = vec![Vec::new()];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < comps.len() {
        let (x, y) = comps[i];
        let mut row = Vec::with_capacity(k);
        for c in 0..k {
            let p = (
                ma.mul(x, a.morphism.letter_map[c]),
                mb.mul(y, b.morphism.letter_map[c]),
            );
            let id = match ids.get(&p) {
                Some(&id) => id,
                None => {
                    if comps.len() >= limits.max_monoid {
                        return Err(Error::ResourceLimit {
                            what: "product monoid".into(),
                            limit: limits.max_monoid,
                        });
                    }
                    let id = comps.len();
                    ids.insert(p, id);
                    comps.push(p);
                    let mut r = reps[i].clone();
                    r.push(c);
                    reps.push(r);
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        i += 1;
    }
    let size = comps.len();
    let table = cayley_table(size, &right, &reps);
    let order = (0..size)
        .map(|s| {
            let mut bs = BitSet::new(size);
            bs.insert(s);
            bs
        })
        .collect();
    let monoid = OrderedMonoid::from_flat(size, table, 0, order);
    let finite = comps
        .iter()
        .map(|&(x, y)| op(a.finite(x), b.finite(y)))
        .collect();
    let mut slot = vec![None; size];
    let mut val = Vec::new();
    for e in monoid.idempotents() {
        if e == 0 {
            continue;
        }
        let (ex, ey) = comps[e];
        let mut set = BitSet::new(size);
        for s in 0..size {
            if monoid.mul(s, e) == s {
                let (sx, sy) = comps[s];
                if op(
                    a.table.raw(sx, ex, ma.unit()),
                    b.table.raw(sy, ey, mb.unit()),
                ) {
                    set.insert(s);
                }
            }
        }
        slot[e] = Some(val.len());
        val.push(set);
    }
    let alphabet = a.alphabet().clone();
    let letter_map = (0..k).map(|c| right[0][c]).collect();
    let monoid = monoid.with_names(
        reps.iter()
            .map(|r| alphabet.decode(r).to_string())
            .collect(),
    );
    let representatives = reps.iter().map(|r| alphabet.decode(r)).collect();
    Ok(Recognizer {
        morphism: Morphism {
            alphabet,
            target: monoid,
            letter_map,
            representatives,
        },
        table: OmegaTable { finite, slot, val },
    })
}

// ---------------------------------------------------------------------------
// Syntactic refinement.

/// Why `m ≤ m'` fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reason {
    None,
    /// `m'·z^ω ∈ L` but `m·z^ω ∉ L`.
    Tail(usize),
    /// `x·m'^ω ∈ L` but `x·m^ω ∉ L`.
    Loop(usize),
    /// Fails after left multiplication by the letter.
    Left(usize),
    /// Fails after right multiplication by the letter.
    Right(usize),
}

struct Preorder {
    /// `leq[m]`: all `m'` with `m ≤ m'`.
    leq: Vec<BitSet>,
    reasons: Option<Vec<Reason>>,
}

/// Greatest preorder below the base context relation that is stable under
/// multiplication by letters on both sides; this is the syntactic order.
fn refine(r: &Recognizer, track: bool) -> Preorder {
    let m = r.monoid();
    let n = m.size();
    let k = r.alphabet().len();
    let pi: Vec<usize> = m.elements().map(|z| m.idempotent_power(z)).collect();
    let member = |p: usize, z: usize| r.table.raw(m.mul(p, pi[z]), pi[z], m.unit());
    let tails: Vec<BitSet> = m
        .elements()
        .map(|p| {
            let mut b = BitSet::new(n);
            for z in 0..n {
                if member(p, z) {
                    b.insert(z);
                }
            }
            b
        })
        .collect();
    let loops: Vec<BitSet> = m
        .elements()
        .map(|q| {
            let mut b = BitSet::new(n);
            for x in 0..n {
                if member(x, q) {
                    b.insert(x);
                }
            }
            b
        })
        .collect();
    let mut reasons = if track {
        Some(vec![Reason::None; n * n])
    } else {
        None
    };
    let mut leq: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    for a in 0..n {
        for b in 0..n {
            if tails[b].is_subset(&tails[a]) && loops[b].is_subset(&loops[a]) {
                leq[a].insert(b);
            } else {
                work.push_back((a, b));
                if let Some(rs) = reasons.as_mut() {
                    rs[a * n + b] = match tails[b].iter().find(|&z| !tails[a].contains(z)) {
                        Some(z) => Reason::Tail(z),
                        None => Reason::Loop(
                            loops[b]
                                .iter()
                                .find(|&x| !loops[a].contains(x))
                                .expect("loop witness"),
                        ),
                    };
                }
            }
        }
    }
    // Preimages under left and right multiplication by each letter image.
    let mut left_pre = vec![vec![Vec::new(); n]; k];
    let mut right_pre = vec![vec![Vec::new(); n]; k];
    for c in 0..k {
        let g = r.morphism.letter_map[c];
        for x in 0..n {
            left_pre[c][m.mul(g, x)].push(x);
            right_pre[c][m.mul(x, g)].push(x);
        }
    }
    while let Some((a, b)) = work.pop_front() {
        for c in 0..k {
            for (pre, why) in [
                (&left_pre[c], Reason::Left(c)),
                (&right_pre[c], Reason::Right(c)),
            ] {
                for &x in &pre[a] {
                    for &y in &pre[b] {
                        if leq[x].contains(y) {
                            leq[x].remove(y);
                            if let Some(rs) = reasons.as_mut() {
                                rs[x * n + y] = why;
                            }
                            work.push_back((x, y));
                        }
                    }
                }
            }
        }
    }
    Preorder { leq, reasons }
}

/// Quotient of `r` by the equivalence induced by `leq`, ordered by `leq`.
fn quotient(r: &Recognizer, leq: &[BitSet]) -> Recognizer {
    let m = r.monoid();
    let n = m.size();
    let mut class = vec![usize::MAX; n];
    let mut firsts: Vec<usize> = Vec::new();
    for s in 0..n {
        match firsts
            .iter()
            .position(|&f| leq[s].contains(f) && leq[f].contains(s))
        {
            Some(c) => class[s] = c,
            None => {
                class[s] = firsts.len();
                firsts.push(s);
            }
        }
    }
    let size = firsts.len();
    let mut table = vec![0u32; size * size];
    for (i, &s) in firsts.iter().enumerate() {
        for (j, &t) in firsts.iter().enumerate() {
            table[i * size + j] = class[m.mul(s, t)] as u32;
        }
    }
    let order: Vec<BitSet> = firsts
        .iter()
        .map(|&s| {
            let mut b = BitSet::new(size);
            for (j, &t) in firsts.iter().enumerate() {
                if leq[s].contains(t) {
                    b.insert(j);
                }
            }
            b
        })
        .collect();
    let unit = class[m.unit()];
    let monoid = OrderedMonoid::from_flat(size, table, unit, order);
    let finite = firsts.iter().map(|&s| r.finite(s)).collect();
    let mut slot = vec![None; size];
    let mut val = Vec::new();
    for e in monoid.idempotents() {
        if e == unit {
            continue;
        }
        let mut set = BitSet::new(size);
        for s in 0..size {
            if monoid.mul(s, e) == s && r.omega_member(firsts[s], firsts[e]) {
                set.insert(s);
            }
        }
        slot[e] = Some(val.len());
        val.push(set);
    }
    let alphabet = r.alphabet().clone();
    let letter_map: Vec<usize> = r.morphism.letter_map.iter().map(|&g| class[g]).collect();
    let representatives: Vec<FiniteWord> =
        firsts.iter().map(|&s| r.morphism.rep(s).clone()).collect();
    let gens = alphabet
        .letters()
        .iter()
        .copied()
        .zip(letter_map.iter().copied())
        .collect();
    let monoid = monoid
        .with_names(representatives.iter().map(|w| w.to_string()).collect())
        .with_generators(gens)
        .expect("generators in range");
    Recognizer {
        morphism: Morphism {
            alphabet,
            target: monoid,
            letter_map,
            representatives,
        },
        table: OmegaTable { finite, slot, val },
    }
}

/// Minimal saturating recognizer of `L(a)`. Disconnected automata are
/// handled component by component and recombined.
pub fn recognizer(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<Recognizer> {
    if let Some(r) = a.origin() {
        return Ok(r.reduce());
    }
    let a = a.simplify();
    let parts = components(&a);
    let mut acc: Option<Recognizer> = None;
    for part in parts {
        let r = profile_monoid(&part, limits)?.reduce();
        acc = Some(match acc {
            None => r,
            Some(prev) => product(&prev, &r, |x, y| x || y, limits)?.reduce(),
        });
    }
    match acc {
        Some(r) => Ok(r),
        None => Ok(profile_monoid(&a, limits)?.reduce()),
    }
}

/// Weakly connected components, each as an automaton with its own initial states.
fn components(a: &ExtBuchiAutomaton) -> Vec<ExtBuchiAutomaton> {
    let n = a.num_states();
    let adj = a.adjacency();
    let rev = graph::reverse(&adj);
    let und: Vec<Vec<usize>> = (0..n)
        .map(|q| adj[q].iter().chain(&rev[q]).copied().collect())
        .collect();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for q in 0..n {
        if comp[q] != usize::MAX {
            continue;
        }
        let reach = graph::reachable(&und, [q]);
        for (v, &r) in reach.iter().enumerate() {
            if r {
                comp[v] = count;
            }
        }
        count += 1;
    }
    if count <= 1 {
        return vec![a.clone()];
    }
    (0..count)
        .map(|c| {
            let keep: Vec<usize> = (0..n).filter(|&q| comp[q] == c).collect();
            let idx = |q: usize| keep.iter().position(|&x| x == q).expect("same component");
            let mut out = ExtBuchiAutomaton::new(a.alphabet().clone(), keep.len());
            for (i, &q) in keep.iter().enumerate() {
                out.set_final(i, a.is_final(q));
                out.set_repeated(i, a.is_repeated(q));
            }
            for (p, x, q) in a.transitions() {
                if comp[p] == c {
                    out.add_transition(idx(p), x, idx(q));
                }
            }
            for &i in a.initial_states() {
                if comp[i] == c {
                    out.set_initial(idx(i));
                }
            }
            out
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Syntactic context.

/// A two-sided ω-context separating two monoid elements `m`, `m'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Context {
    /// `x·m·y·z^ω` (a finite word when `z` is empty).
    Linear {
        x: FiniteWord,
        y: FiniteWord,
        z: FiniteWord,
    },
    /// `x0·(x·m·y)^ω` (the finite word `x0` when `x·m·y` is empty).
    Loop {
        x0: FiniteWord,
        x: FiniteWord,
        y: FiniteWord,
    },
}

impl Context {
    pub fn apply(&self, m: &FiniteWord) -> Word {
        match self {
            Context::Linear { x, y, z } => {
                let head = x.concat(m).concat(y);
                if z.is_empty() {
                    Word::Finite(head)
                } else {
                    Word::Infinite(UPWord::new(head, z.clone()).expect("non-empty"))
                }
            }
            Context::Loop { x0, x, y } => {
                let per = x.concat(m).concat(y);
                if per.is_empty() {
                    Word::Finite(x0.clone())
                } else {
                    Word::Infinite(UPWord::new(x0.clone(), per).expect("non-empty"))
                }
            }
        }
    }
}

/// Ordered syntactic monoid of a language with its morphism and table.
#[derive(Clone, Debug)]
pub struct SyntacticContext {
    pub rec: Recognizer,
    pub language: ExtBuchiAutomaton,
}

/// Syntactic morphism, order and ω-table of `L(a)`.
pub fn syntactic_context(a: &ExtBuchiAutomaton, limits: &Limits) -> Result<SyntacticContext> {
    Ok(SyntacticContext {
        rec: recognizer(a, limits)?,
        language: a.clone(),
    })
}

impl SyntacticContext {
    pub fn morphism(&self) -> &Morphism {
        &self.rec.morphism
    }

    pub fn monoid(&self) -> &OrderedMonoid {
        self.rec.monoid()
    }

    pub fn table(&self) -> &OmegaTable {
        &self.rec.table
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.rec.alphabet()
    }

    pub fn size(&self) -> usize {
        self.rec.size()
    }

    /// Element with the given representative name (`1` for the unit).
    pub fn element(&self, name: &str) -> Option<usize> {
        self.monoid().element_by_name(name)
    }

    pub fn name(&self, s: usize) -> &str {
        self.monoid().name(s)
    }

    /// `[s][e]^ω ⊆ L` for a linked pair.
    pub fn omega_subset(&self, s: usize, e: usize) -> Result<bool> {
        self.rec.val(s, e)
    }

    /// `tf^ω ≤_L se^ω`: `VAL(s, e) ⇒ VAL(t, f)`.
    pub fn omega_leq(&self, tf: LinkedPair, se: LinkedPair) -> Result<bool> {
        let lower = self.rec.val(tf.s, tf.e)?;
        let upper = self.rec.val(se.s, se.e)?;
        Ok(!upper || lower)
    }

    pub fn val(&self, p: LinkedPair) -> bool {
        self.rec.val(p.s, p.e).expect("linked pair")
    }

    pub fn linked_pairs(&self) -> Vec<LinkedPair> {
        self.rec.linked_pairs()
    }

    pub fn conjugated(&self, p: LinkedPair, q: LinkedPair) -> bool {
        conjugated(self.monoid(), p, q)
    }

    /// Conjugacy classes of linked pairs.
    pub fn conjugacy_classes(&self) -> Vec<Vec<LinkedPair>> {
        let pairs = self.linked_pairs();
        let mut seen = vec![false; pairs.len()];
        let mut out = Vec::new();
        for i in 0..pairs.len() {
            if seen[i] {
                continue;
            }
            let mut class = Vec::new();
            let mut stack = vec![i];
            seen[i] = true;
            while let Some(j) = stack.pop() {
                class.push(pairs[j]);
                for l in 0..pairs.len() {
                    if !seen[l]
                        && (self.conjugated(pairs[j], pairs[l])
                            || self.conjugated(pairs[l], pairs[j]))
                    {
                        seen[l] = true;
                        stack.push(l);
                    }
                }
            }
            class.sort();
            out.push(class);
        }
        out
    }

    /// `[s][e]^ω ⊆ L` and `t ≤ s` imply `[t][e]^ω ⊆ L`.
    pub fn downward_closed(&self) -> bool {
        let m = self.monoid();
        self.linked_pairs()
            .into_iter()
            .filter(|&p| self.val(p))
            .all(|p| {
                m.elements()
                    .filter(|&t| m.leq(t, p.s))
                    .all(|t| self.rec.omega_member(t, p.e))
            })
    }

    /// `t ≤ s`, `f ≤ e` and `VAL(s, e)` imply `[t][f]^ω ⊆ L`.
    pub fn downward_closed_full(&self) -> bool {
        let m = self.monoid();
        self.linked_pairs()
            .into_iter()
            .filter(|&p| self.val(p))
            .all(|p| {
                m.elements().filter(|&t| m.leq(t, p.s)).all(|t| {
                    m.elements()
                        .filter(|&f| m.leq(f, p.e))
                        .all(|f| self.rec.omega_member(t, f))
                })
            })
    }

    /// Context witnessing `m ≰ m'`: the context puts `m'` in L and `m` outside.
    pub fn separator(&self, m: usize, m2: usize) -> Option<Context> {
        let pre = refine(&self.rec, true);
        let n = self.size();
        if pre.leq[m].contains(m2) {
            return None;
        }
        let reasons = pre.reasons.expect("tracked");
        let g = self.alphabet();
        let mon = self.monoid();
        let (mut a, mut b) = (m, m2);
        let mut left: Vec<char> = Vec::new();
        let mut right: Vec<char> = Vec::new();
        loop {
            match reasons[a * n + b] {
                Reason::Left(c) => {
                    left.push(g.letter(c));
                    let h = self.rec.morphism.letter_map[c];
                    a = mon.mul(h, a);
                    b = mon.mul(h, b);
                }
                Reason::Right(c) => {
                    right.push(g.letter(c));
                    let h = self.rec.morphism.letter_map[c];
                    a = mon.mul(a, h);
                    b = mon.mul(b, h);
                }
                Reason::Tail(z) => {
                    left.reverse();
                    return Some(Context::Linear {
                        x: FiniteWord(left),
                        y: FiniteWord(right),
                        z: self.rec.morphism.rep(z).clone(),
                    });
                }
                Reason::Loop(x0) => {
                    left.reverse();
                    return Some(Context::Loop {
                        x0: self.rec.morphism.rep(x0).clone(),
                        x: FiniteWord(left),
                        y: FiniteWord(right),
                    });
                }
                Reason::None => unreachable!("removed pairs carry a reason"),
            }
        }
    }

    /// Context of the complement: same monoid, dual order, negated table.
    pub fn complement(&self) -> SyntacticContext {
        let rec = self.rec.complement();
        let target = rec.morphism.target.dual();
        let rec = Recognizer {
            morphism: Morphism {
                target,
                ..rec.morphism
            },
            table: rec.table,
        };
        let language = rec.to_automaton();
        SyntacticContext { rec, language }
    }

    /// Everything the `monoid` report shows, with elements by name.
    pub fn dump(&self) -> MonoidDump {
        let m = self.monoid();
        let names = |xs: &[usize]| xs.iter().map(|&s| self.name(s).to_string()).collect();
        let pair = |p: LinkedPair| (self.name(p.s).to_string(), self.name(p.e).to_string());
        MonoidDump {
            alphabet: self.alphabet().to_string(),
            size: m.size(),
            elements: m
                .elements()
                .map(|s| ElementInfo {
                    name: self.name(s).to_string(),
                    representative: self.morphism().rep(s).to_string(),
                    idempotent: m.is_idempotent(s),
                    finite_accepting: self.rec.finite(s),
                })
                .collect(),
            table: m
                .elements()
                .map(|s| names(&m.elements().map(|t| m.mul(s, t)).collect::<Vec<_>>()))
                .collect(),
            order: m
                .order_pairs()
                .into_iter()
                .map(|(s, t)| (self.name(s).into(), self.name(t).into()))
                .collect(),
            linked_pairs: self
                .linked_pairs()
                .into_iter()
                .map(|p| {
                    let (s, e) = pair(p);
                    PairInfo {
                        s,
                        e,
                        val: self.val(p),
                    }
                })
                .collect(),
            conjugacy_classes: self
                .conjugacy_classes()
                .into_iter()
                .map(|c| c.into_iter().map(pair).collect())
                .collect(),
            in_da: m.is_in_da(),
            egg_box: m
                .egg_box()
                .iter()
                .map(|j| {
                    j.iter()
                        .map(|row| row.iter().map(|cell| names(cell)).collect())
                        .collect()
                })
                .collect(),
            egg_box_text: m.egg_box_text(),
            egg_box_dot: m.egg_box_dot(),
            table_text: m.dump_text(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementInfo {
    pub name: String,
    pub representative: String,
    pub idempotent: bool,
    /// `[s] ⊆ L`.
    pub finite_accepting: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairInfo {
    pub s: String,
    pub e: String,
    pub val: bool,
}

/// Printable view of a syntactic context.
#[derive(Clone, Debug, Serialize)]
pub struct MonoidDump {
    pub alphabet: String,
    pub size: usize,
    pub elements: Vec<ElementInfo>,
    /// `table[s][t]` names `s·t`.
    pub table: Vec<Vec<String>>,
    /// Strict pairs `s < t` of the syntactic order.
    pub order: Vec<(String, String)>,
    pub linked_pairs: Vec<PairInfo>,
    pub conjugacy_classes: Vec<Vec<(String, String)>>,
    pub in_da: bool,
    /// J-classes, R-class rows, L-class columns, H-class cells.
    pub egg_box: Vec<Vec<Vec<Vec<String>>>>,
    #[serde(skip)]
    egg_box_text: String,
    #[serde(skip)]
    egg_box_dot: String,
    #[serde(skip)]
    table_text: String,
}

impl MonoidDump {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_dot(&self) -> String {
        self.egg_box_dot.clone()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "alphabet: {}", self.alphabet).unwrap();
        writeln!(out, "elements: {}", self.size).unwrap();
        for e in &self.elements {
            let mut tags = Vec::new();
            if e.idempotent {
                tags.push("idempotent");
            }
            if e.finite_accepting {
                tags.push("accepting");
            }
            writeln!(
                out,
                "  {:<8} rep {:<8} {}",
                e.name,
                e.representative,
                tags.join(" ")
            )
            .unwrap();
        }
        writeln!(out, "table:").unwrap();
        out.push_str(&self.table_text);
        writeln!(out, "linked pairs:").unwrap();
        for p in &self.linked_pairs {
            writeln!(out, "  ({}, {}) VAL={}", p.s, p.e, p.val).unwrap();
        }
        writeln!(out, "conjugacy classes:").unwrap();
        for c in &self.conjugacy_classes {
            let c: Vec<String> = c.iter().map(|(s, e)| format!("({s}, {e})")).collect();
            writeln!(out, "  {{{}}}", c.join(", ")).unwrap();
        }
        writeln!(out, "DA: {}", self.in_da).unwrap();
        writeln!(out, "egg-box:").unwrap();
        out.push_str(&self.egg_box_text);
        out
    }
}

/// Per linked pair of `h`: whether `[s][e]^ω` lies inside `L(a)` and
/// whether it meets `L(a)`.
fn block_status(
    h: &Morphism,
    a: &ExtBuchiAutomaton,
    limits: &Limits,
) -> Result<Vec<(LinkedPair, bool, bool)>> {
    let ra = recognizer(a, limits)?;
    let m = &h.target;
    let k = h.alphabet.len();
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut comps = vec![(m.unit(), ra.monoid().unit())];
    ids.insert(comps[0], 0);
    let mut i = 0;
    while i < comps.len() {
        let (x, y) = comps[i];
        for c in 0..k {
            let p = (
                m.mul(x, h.letter_map[c]),
                ra.monoid().mul(y, ra.morphism.letter_map[c]),
            );
            if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(p) {
                if comps.len() >= limits.max_monoid {
                    return Err(Error::ResourceLimit {
                        what: "product monoid".into(),
                        limit: limits.max_monoid,
                    });
                }
                e.insert(comps.len());
                comps.push(p);
            }
        }
        i += 1;
    }
    let rm = ra.monoid();
    let mut out = Vec::new();
    for p in linked_pairs(m) {
        let mut inside = true;
        let mut meets = false;
        for &(_, x) in comps.iter().filter(|c| c.0 == p.s) {
            for &(_, y) in comps.iter().filter(|c| c.0 == p.e) {
                if rm.is_idempotent(y) && rm.mul(x, y) == x {
                    let v = ra.table.raw(x, y, rm.unit());
                    inside &= v;
                    meets |= v;
                }
            }
        }
        out.push((p, inside, meets));
    }
    Ok(out)
}

/// `L = ∪{[s][e]^ω : [s][e]^ω ⊆ L}` over linked pairs of `h`.
pub fn weakly_recognizes(h: &Morphism, a: &ExtBuchiAutomaton, limits: &Limits) -> Result<bool> {
    let pairs: Vec<LinkedPair> = block_status(h, a, limits)?
        .into_iter()
        .filter(|t| t.1)
        .map(|t| t.0)
        .collect();
    let b = block_automaton(h, &[], &pairs);
    Ok(a.equivalent(&b, limits)?.is_equivalent())
}

/// `L = ∪{[s][e]^ω : [s][e]^ω ∩ L ≠ ∅}` over linked pairs of `h`.
pub fn strongly_recognizes(h: &Morphism, a: &ExtBuchiAutomaton, limits: &Limits) -> Result<bool> {
    let pairs: Vec<LinkedPair> = block_status(h, a, limits)?
        .into_iter()
        .filter(|t| t.2)
        .map(|t| t.0)
        .collect();
    let b = block_automaton(h, &[], &pairs);
    Ok(a.equivalent(&b, limits)?.is_equivalent())
}

// ---------------------------------------------------------------------------
// Boolean operations and decisions on automata.

/// Outcome of an equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A word in the symmetric difference.
    Counterexample(Word),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }

    pub fn counterexample(&self) -> Option<&Word> {
        match self {
            Equivalence::Equivalent => None,
            Equivalence::Counterexample(w) => Some(w),
        }
    }
}

impl ExtBuchiAutomaton {
    /// Automaton for Γ^∞ ∖ L.
    pub fn complement(&self, limits: &Limits) -> Result<ExtBuchiAutomaton> {
        Ok(recognizer(self, limits)?.complement().to_automaton())
    }

    pub fn equivalent(&self, other: &Self, limits: &Limits) -> Result<Equivalence> {
        self.check_same_alphabet(other)?;
        let ra = recognizer(self, limits)?;
        let rb = recognizer(other, limits)?;
        let p = product(&ra, &rb, |x, y| x != y, limits)?;
        Ok(match p.accepted_word() {
            None => Equivalence::Equivalent,
            Some(w) => Equivalence::Counterexample(w),
        })
    }

    /// A word of `L(self) ∖ L(other)`, if any.
    pub fn difference_witness(&self, other: &Self, limits: &Limits) -> Result<Option<Word>> {
        self.check_same_alphabet(other)?;
        let ra = recognizer(self, limits)?;
        let rb = recognizer(other, limits)?;
        Ok(product(&ra, &rb, |x, y| x && !y, limits)?.accepted_word())
    }

    /// `L(self) ⊆ L(other)`: emptiness of `L(self) ∩ (Γ^∞ ∖ L(other))`.
    pub fn is_subset_of(&self, other: &Self, limits: &Limits) -> Result<bool> {
        Ok(self.difference_witness(other, limits)?.is_none())
    }
}
