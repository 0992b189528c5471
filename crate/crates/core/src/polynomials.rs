//! Monomials `A₁*a₁⋯A_k*a_k A_{k+1}^∞` (optionally restricted to `B^im`),
//! polynomials, unambiguity, closure of monomials and bounded-degree
//! polynomial synthesis.
//!
//! Text form: `[{b}a {a}b {a,b}^oo & IM{a}] | [{}a {}*]`; a finite tail is
//! written `{T}*`, the empty polynomial `0`.

use std::cmp::Reverse;
use std::fmt;

use crate::alphabet::{Alphabet, FiniteWord, LetterSet, UPWord, Word};
use crate::automata::{im_gadget, ExtBuchiAutomaton};
use crate::bits::BitSet;
use crate::error::{Error, Limits, Result};
use crate::expressions::infinity_letters;
use crate::syntactic::{product, recognizer, Recognizer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TailKind {
    /// `A^∞`
    Inf,
    /// `A^*`
    Fin,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub alphabet: Alphabet,
    pub blocks: Vec<(LetterSet, usize)>,
    pub tail: LetterSet,
    pub tail_kind: TailKind,
    pub im_restriction: Option<LetterSet>,
}

impl Monomial {
    pub fn new(
        alphabet: &Alphabet,
        blocks: Vec<(LetterSet, usize)>,
        tail: LetterSet,
        tail_kind: TailKind,
        im_restriction: Option<LetterSet>,
    ) -> Result<Monomial> {
        let full = alphabet.full_set();
        let ok = blocks
            .iter()
            .all(|&(a, x)| a.is_subset(full) && x < alphabet.len())
            && tail.is_subset(full);
        if !ok {
            return Err(Error::Precondition(
                "monomial uses letters outside the alphabet".into(),
            ));
        }
        if let Some(b) = im_restriction {
            check_restriction(b, tail, tail_kind)?;
        }
        Ok(Monomial {
            alphabet: alphabet.clone(),
            blocks,
            tail,
            tail_kind,
            im_restriction,
        })
    }

    /// `A^∞` (degree 0).
    pub fn full(alphabet: &Alphabet, tail: LetterSet) -> Monomial {
        Monomial {
            alphabet: alphabet.clone(),
            blocks: Vec::new(),
            tail,
            tail_kind: TailKind::Inf,
            im_restriction: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.blocks.len()
    }

    /// Total size of the letter sets.
    pub fn mass(&self) -> usize {
        self.blocks.iter().map(|b| b.0.len()).sum::<usize>() + self.tail.len()
    }

    /// `{a_i, …, a_k}` for `i` counted from 0.
    fn anchors_from(&self, i: usize) -> LetterSet {
        LetterSet::from_indices(self.blocks[i..].iter().map(|b| b.1))
    }

    pub fn to_automaton(&self) -> ExtBuchiAutomaton {
        let k = self.degree();
        let mut a = ExtBuchiAutomaton::new(self.alphabet.clone(), k + 1);
        a.set_initial(0);
        for (i, &(set, x)) in self.blocks.iter().enumerate() {
            for y in set.iter() {
                a.add_transition(i, y, i);
            }
            a.add_transition(i, x, i + 1);
        }
        for y in self.tail.iter() {
            a.add_transition(k, y, k);
        }
        a.set_final(k, true);
        a.set_repeated(k, self.tail_kind == TailKind::Inf);
        match self.im_restriction {
            Some(b) => a.restrict_im(b),
            None => a,
        }
    }

    fn step(&self, states: u32, x: usize) -> u32 {
        let k = self.degree();
        let mut out = 0u32;
        for i in 0..=k {
            if states & (1 << i) == 0 {
                continue;
            }
            if i < k {
                let (set, a) = self.blocks[i];
                if set.contains(x) {
                    out |= 1 << i;
                }
                if a == x {
                    out |= 1 << (i + 1);
                }
            } else if self.tail.contains(x) {
                out |= 1 << k;
            }
        }
        out
    }

    fn run(&self, states: u32, w: &FiniteWord) -> Option<u32> {
        w.0.iter().try_fold(states, |s, &c| {
            self.alphabet.index(c).map(|x| self.step(s, x))
        })
    }

    /// Membership by direct simulation of the monomial.
    pub fn accepts(&self, w: &Word) -> bool {
        let k = self.degree();
        let done = 1u32 << k;
        match w {
            Word::Finite(f) => {
                self.im_restriction.is_none_or(|b| b.is_empty())
                    && self.run(1, f).is_some_and(|s| s & done != 0)
            }
            Word::Infinite(u) => {
                if self.tail_kind == TailKind::Fin {
                    return false;
                }
                let Ok(inf) = infinity_letters(u, &self.alphabet) else {
                    return false;
                };
                if self.im_restriction.is_some_and(|b| b != inf) {
                    return false;
                }
                let Some(period) = self.alphabet.encode(u.period()).ok() else {
                    return false;
                };
                if !period.iter().all(|&x| self.tail.contains(x)) {
                    return false;
                }
                let Some(mut s) = self.run(1, u.prefix()) else {
                    return false;
                };
                for _ in 0..=(1usize << (k + 1)) {
                    if s & done != 0 {
                        return true;
                    }
                    s = period.iter().fold(s, |s, &x| self.step(s, x));
                }
                false
            }
        }
    }

    /// Automaton of the words carrying two distinct factorizations.
    fn ambiguity_automaton(&self) -> ExtBuchiAutomaton {
        let k = self.degree();
        let g = self.alphabet.len();
        let n = k + 1;
        let id = |i: usize, j: usize, d: usize| (i * n + j) * 2 + d;
        let mut a = ExtBuchiAutomaton::new(self.alphabet.clone(), n * n * 2);
        a.set_initial(id(0, 0, 0));
        let moves = |i: usize, x: usize| -> Vec<usize> {
            let mut v = Vec::new();
            if i < k {
                if self.blocks[i].0.contains(x) {
                    v.push(i);
                }
                if self.blocks[i].1 == x {
                    v.push(i + 1);
                }
            } else if self.tail.contains(x) {
                v.push(k);
            }
            v
        };
        for i in 0..n {
            for j in 0..n {
                for d in 0..2 {
                    for x in 0..g {
                        for &i2 in &moves(i, x) {
                            for &j2 in &moves(j, x) {
                                let d2 = usize::from(d == 1 || i2 != j2);
                                a.add_transition(id(i, j, d), x, id(i2, j2, d2));
                            }
                        }
                    }
                }
            }
        }
        a.set_final(id(k, k, 1), true);
        a.set_repeated(id(k, k, 1), self.tail_kind == TailKind::Inf);
        let a = match self.im_restriction {
            Some(b) => a
                .intersect(&im_gadget(&self.alphabet, b))
                .expect("same alphabet"),
            None => a,
        };
        a.trim()
    }

    /// A shortest word with two factorizations, if any.
    pub fn ambiguity_witness(&self) -> Option<Word> {
        self.ambiguity_automaton().accepted_word()
    }

    pub fn is_unambiguous(&self) -> bool {
        self.ambiguity_automaton().is_empty()
    }

    /// Inclusion in the language of a saturating recognizer, decided on
    /// monoid images. Requires no infinity restriction.
    fn is_inside(&self, r: &Recognizer) -> bool {
        debug_assert!(self.im_restriction.is_none());
        let m = r.monoid();
        let h = &r.morphism.letter_map;
        let close = |mut set: BitSet, letters: LetterSet| {
            let mut stack: Vec<usize> = set.iter().collect();
            while let Some(s) = stack.pop() {
                for x in letters.iter() {
                    let t = m.mul(s, h[x]);
                    if set.insert(t) {
                        stack.push(t);
                    }
                }
            }
            set
        };
        let mut xs = BitSet::new(m.size());
        xs.insert(m.unit());
        for &(set, a) in &self.blocks {
            let c = close(xs, set);
            xs = BitSet::new(m.size());
            for s in c.iter() {
                xs.insert(m.mul(s, h[a]));
            }
        }
        let mut one = BitSet::new(m.size());
        one.insert(m.unit());
        let tails = close(one, self.tail);
        if !xs
            .iter()
            .all(|x| tails.iter().all(|t| r.finite(m.mul(x, t))))
        {
            return false;
        }
        if self.tail_kind == TailKind::Fin || self.tail.is_empty() {
            return true;
        }
        let mut first = BitSet::new(m.size());
        for x in self.tail.iter() {
            first.insert(h[x]);
        }
        let plus = close(first, self.tail);
        let idem: Vec<usize> = plus.iter().filter(|&f| m.is_idempotent(f)).collect();
        let ok = xs.iter().all(|x| {
            tails.iter().all(|t| {
                idem.iter()
                    .filter(|&&f| m.mul(t, f) == t)
                    .all(|&f| r.val(m.mul(x, t), f).expect("linked"))
            })
        });
        ok
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.alphabet;
        write!(f, "[")?;
        for &(set, a) in &self.blocks {
            write!(f, "{}{} ", g.set_to_string(set), g.letter(a))?;
        }
        let kind = match self.tail_kind {
            TailKind::Inf => "^oo",
            TailKind::Fin => "*",
        };
        write!(f, "{}{kind}", g.set_to_string(self.tail))?;
        if let Some(b) = self.im_restriction {
            write!(f, " & IM{}", g.set_to_string(b))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub alphabet: Alphabet,
    pub monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(alphabet: &Alphabet, monomials: Vec<Monomial>) -> Result<Polynomial> {
        if monomials.iter().any(|m| m.alphabet != *alphabet) {
            return Err(Error::AlphabetMismatch(
                "monomial over a different alphabet".into(),
            ));
        }
        Ok(Polynomial {
            alphabet: alphabet.clone(),
            monomials,
        })
    }

    pub fn to_automaton(&self) -> ExtBuchiAutomaton {
        let mut out = ExtBuchiAutomaton::empty(&self.alphabet);
        for m in &self.monomials {
            out = out.union(&m.to_automaton()).expect("same alphabet");
        }
        out.simplify()
    }

    pub fn is_unambiguous(&self) -> bool {
        self.monomials.iter().all(Monomial::is_unambiguous)
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Polynomial> {
        PolyParser {
            src: text.as_bytes(),
            pos: 0,
            alphabet,
        }
        .polynomial()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl PolyParser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn letter(&mut self) -> Result<usize> {
        self.skip_ws();
        let c = *self
            .src
            .get(self.pos)
            .ok_or_else(|| self.err("expected a letter"))? as char;
        let x = self.alphabet.index(c).ok_or(Error::UndeclaredLetter {
            letter: c,
            offset: self.pos,
        })?;
        self.pos += 1;
        Ok(x)
    }

    fn set(&mut self) -> Result<LetterSet> {
        self.expect(b'{')?;
        let mut s = LetterSet::EMPTY;
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(s);
        }
        loop {
            s.insert(self.letter()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(s);
                }
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
    }

    fn monomial(&mut self) -> Result<Monomial> {
        self.expect(b'[')?;
        let mut blocks = Vec::new();
        loop {
            let set = self.set()?;
            if self.eat("^oo") {
                let im = if self.eat("&") {
                    if !self.eat("IM") {
                        return Err(self.err("expected 'IM'"));
                    }
                    Some(self.set()?)
                } else {
                    None
                };
                self.expect(b']')?;
                return Monomial::new(self.alphabet, blocks, set, TailKind::Inf, im);
            }
            if self.eat("*") {
                self.expect(b']')?;
                return Monomial::new(self.alphabet, blocks, set, TailKind::Fin, None);
            }
            let a = self.letter()?;
            blocks.push((set, a));
        }
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let mut ms = Vec::new();
        if self.eat("0") {
            if self.peek().is_some() {
                return Err(self.err("trailing input"));
            }
            return Polynomial::new(self.alphabet, ms);
        }
        loop {
            ms.push(self.monomial()?);
            match self.peek() {
                None => return Polynomial::new(self.alphabet, ms),
                Some(b'|') => self.pos += 1,
                Some(_) => return Err(self.err("expected '|'")),
            }
        }
    }
}

fn check_restriction(b: LetterSet, tail: LetterSet, kind: TailKind) -> Result<()> {
    if !b.is_subset(tail) {
        return Err(Error::Precondition(
            "infinity restriction must lie inside the tail".into(),
        ));
    }
    if kind == TailKind::Fin && !b.is_empty() {
        return Err(Error::Precondition(
            "a finite tail admits only the restriction IM{}".into(),
        ));
    }
    Ok(())
}

/// Closure of a monomial restricted to `B^im`:
/// `∪_i ∪_{{a_i,…,a_k} ∪ B ⊆ A ⊆ A_i} A₁*a₁⋯A_{i-1}*a_{i-1} A_i^∞ ∩ A^im`.
/// Without a restriction the union is taken over all admissible `B`.
pub fn monomial_closure(m: &Monomial) -> Result<Polynomial> {
    let bs: Vec<LetterSet> = match m.im_restriction {
        Some(b) => {
            check_restriction(b, m.tail, m.tail_kind)?;
            vec![b]
        }
        None if m.tail_kind == TailKind::Fin => vec![LetterSet::EMPTY],
        None => subsets(m.tail).collect(),
    };
    let k = m.degree();
    let mut terms: Vec<Monomial> = Vec::new();
    for b in bs {
        for i in 0..=k {
            let ai = if i < k { m.blocks[i].0 } else { m.tail };
            let need = if i < k { m.anchors_from(i).union(b) } else { b };
            for a in subsets(ai).filter(|a| need.is_subset(*a)) {
                let t = Monomial {
                    alphabet: m.alphabet.clone(),
                    blocks: m.blocks[..i].to_vec(),
                    tail: ai,
                    tail_kind: TailKind::Inf,
                    im_restriction: Some(a),
                };
                if !terms.contains(&t) {
                    terms.push(t);
                }
            }
        }
    }
    Polynomial::new(&m.alphabet, terms)
}

fn subsets(s: LetterSet) -> impl Iterator<Item = LetterSet> {
    let bits = s.0;
    let mut sub = 0u32;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = LetterSet(sub);
        if sub == bits {
            done = true;
        } else {
            sub = (sub.wrapping_sub(bits)) & bits;
        }
        Some(out)
    })
}

/// Closedness of an unambiguous monomial: no `i` with `{a_i,…,a_k} ⊆ A_i`.
/// A finite tail `A*` must also be empty, since `A^im` lies in the closure.
pub fn is_closed_unambiguous_monomial(m: &Monomial) -> Result<bool> {
    if m.im_restriction.is_some() {
        return Err(Error::Precondition(
            "monomial must not carry an infinity restriction".into(),
        ));
    }
    if !m.is_unambiguous() {
        return Err(Error::Precondition(format!("monomial {m} is ambiguous")));
    }
    let tail_ok = m.tail_kind == TailKind::Inf || m.tail.is_empty();
    Ok(tail_ok && (0..m.degree()).all(|i| !m.anchors_from(i).is_subset(m.blocks[i].0)))
}

/// Closedness of an unambiguous monomial with `A_i ⊆ {a_i,…,a_k}` restricted
/// to `B^im`: `B` is the whole tail and no `i` has `B ⊆ {a_i,…,a_k} ⊆ A_i`.
/// A finite tail counts as `B = ∅`; no restriction on an infinite tail
/// falls back to [`is_closed_unambiguous_monomial`].
pub fn is_closed_restricted_monomial(m: &Monomial) -> Result<bool> {
    let b = match (m.im_restriction, m.tail_kind) {
        (Some(b), _) => b,
        (None, TailKind::Fin) => LetterSet::EMPTY,
        (None, TailKind::Inf) => return is_closed_unambiguous_monomial(m),
    };
    check_restriction(b, m.tail, m.tail_kind)?;
    if (0..m.degree()).any(|i| !m.blocks[i].0.is_subset(m.anchors_from(i))) {
        return Err(Error::Precondition(
            "each A_i must lie inside {a_i,…,a_k}".into(),
        ));
    }
    if !m.is_unambiguous() {
        return Err(Error::Precondition(format!("monomial {m} is ambiguous")));
    }
    // The last closure term contributes `prefix·A^im` for every `B ⊆ A ⊆ tail`.
    Ok(b == m.tail
        && (0..m.degree()).all(|i| {
            let anchors = m.anchors_from(i);
            !(b.is_subset(anchors) && anchors.is_subset(m.blocks[i].0))
        }))
}

/// Largest alphabet accepted by [`synthesize_polynomial`].
pub const MAX_SYNTH_ALPHABET: usize = 3;
/// Largest degree accepted by [`synthesize_polynomial`].
pub const MAX_SYNTH_DEGREE: usize = 3;

/// All monomials without restriction up to `max_degree`, ordered by degree,
/// then by increasing mass.
pub fn enumerate_monomials(alphabet: &Alphabet, max_degree: usize) -> Vec<Monomial> {
    let sets: Vec<LetterSet> = alphabet.subsets().collect();
    let k = alphabet.len();
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut level = Vec::new();
        let choices = sets.len() * k;
        let total = choices.pow(d as u32);
        for code in 0..total {
            let mut c = code;
            let mut blocks = Vec::with_capacity(d);
            for _ in 0..d {
                let pick = c % choices;
                c /= choices;
                blocks.push((sets[pick / k], pick % k));
            }
            blocks.reverse();
            for &tail in &sets {
                for kind in [TailKind::Inf, TailKind::Fin] {
                    level.push(Monomial {
                        alphabet: alphabet.clone(),
                        blocks: blocks.clone(),
                        tail,
                        tail_kind: kind,
                        im_restriction: None,
                    });
                }
            }
        }
        level.sort_by_key(Monomial::mass);
        out.extend(level);
    }
    out
}

/// One accepted word per accepting finite class and per accepted linked pair.
fn class_witnesses(r: &Recognizer) -> Vec<Word> {
    let h = &r.morphism;
    let mut out: Vec<Word> = r
        .monoid()
        .elements()
        .filter(|&s| r.finite(s))
        .map(|s| Word::Finite(h.rep(s).clone()))
        .collect();
    for p in r.linked_pairs() {
        if p.e != r.monoid().unit() && r.omega_member(p.s, p.e) {
            let w = UPWord::new(h.rep(p.s).clone(), h.rep(p.e).clone())
                .expect("non-unit idempotent has a non-empty representative");
            out.push(Word::Infinite(w));
        }
    }
    out
}

/// Greedy cover of `L(a)` by monomials of degree at most `max_degree` that
/// lie inside `L(a)`. Each round takes a missing word `w` and adds the first
/// admissible monomial containing `w` that completes the cover, or else the
/// admissible one of largest mass. Exact up to the degree bound: `None`
/// means no such polynomial exists.
pub fn synthesize_polynomial(
    a: &ExtBuchiAutomaton,
    max_degree: usize,
    require_unambiguous: bool,
    limits: &Limits,
) -> Result<Option<Polynomial>> {
    if a.alphabet().len() > MAX_SYNTH_ALPHABET {
        return Err(Error::ResourceLimit {
            what: "synthesis alphabet size".into(),
            limit: MAX_SYNTH_ALPHABET,
        });
    }
    if max_degree > MAX_SYNTH_DEGREE.min(limits.max_degree) {
        return Err(Error::ResourceLimit {
            what: "synthesis degree".into(),
            limit: MAX_SYNTH_DEGREE.min(limits.max_degree),
        });
    }
    let target = recognizer(a, limits)?;
    let mut covered = recognizer(&ExtBuchiAutomaton::empty(a.alphabet()), limits)?;
    let candidates = enumerate_monomials(a.alphabet(), max_degree);
    let mut chosen: Vec<Monomial> = Vec::new();
    // Admissibility does not depend on the round; computed lazily once.
    let mut admissible_cache: Vec<Option<bool>> = vec![None; candidates.len()];
    loop {
        let missing = product(&target, &covered, |x, y| x && !y, limits)?;
        let Some(w) = missing.accepted_word() else {
            return Ok(Some(Polynomial::new(a.alphabet(), chosen)?));
        };
        let mut admissible: Vec<&Monomial> = Vec::new();
        for (i, m) in candidates.iter().enumerate() {
            if !m.accepts(&w) {
                continue;
            }
            let ok = *admissible_cache[i].get_or_insert_with(|| {
                m.is_inside(&target) && (!require_unambiguous || m.is_unambiguous())
            });
            if ok {
                admissible.push(m);
            }
        }
        if admissible.is_empty() {
            return Ok(None);
        }
        // A monomial completing the cover contains one missing word per class.
        let probes = class_witnesses(&missing);
        let mut next = None;
        for m in admissible
            .iter()
            .filter(|m| probes.iter().all(|x| m.accepts(x)))
        {
            let r = recognizer(&m.to_automaton(), limits)?;
            let joined = product(&covered, &r, |x, y| x || y, limits)?;
            if product(&target, &joined, |x, y| x && !y, limits)?.is_empty() {
                next = Some((*m, joined));
                break;
            }
        }
        let (m, joined) = match next {
            Some(found) => found,
            None => {
                let m = *admissible
                    .iter()
                    .min_by_key(|m| Reverse(m.mass()))
                    .expect("non-empty");
                let r = recognizer(&m.to_automaton(), limits)?;
                (m, product(&covered, &r, |x, y| x || y, limits)?)
            }
        };
        covered = joined.reduce();
        chosen.push(m.clone());
    }
}
