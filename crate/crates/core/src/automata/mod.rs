//! Extended Büchi automata over Γ^∞: final states accept finite words,
//! repeated states accept infinite words (visited infinitely often).

mod format;
pub mod graph;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, FiniteWord, LetterSet, UPWord, Word};
use crate::error::{Error, Limits, Result};
use crate::syntactic::{product, Recognizer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtBuchiAutomaton {
    alphabet: Alphabet,
    /// `delta[q][a]`: sorted successor list.
    delta: Vec<Vec<Vec<usize>>>,
    initial: Vec<usize>,
    final_states: Vec<bool>,
    repeated: Vec<bool>,
    origin: Origin,
}

/// A recognizer of exactly the automaton's language, kept when the automaton
/// was built from one; every mutation drops it. Ignored by equality.
#[derive(Clone, Default)]
struct Origin(Option<Arc<Recognizer>>);

impl PartialEq for Origin {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Origin {}

impl fmt::Debug for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.0.is_some() { "Some(..)" } else { "None" })
    }
}

/// An automaton whose repeated set is empty, denoting a subset of Γ*.
pub type FiniteWordAutomaton = ExtBuchiAutomaton;

impl ExtBuchiAutomaton {
    pub fn new(alphabet: Alphabet, states: usize) -> Self {
        let k = alphabet.len();
        ExtBuchiAutomaton {
            alphabet,
            delta: vec![vec![Vec::new(); k]; states],
            initial: Vec::new(),
            final_states: vec![false; states],
            repeated: vec![false; states],
            origin: Origin::default(),
        }
    }

    pub(crate) fn with_origin(mut self, r: Recognizer) -> Self {
        self.origin = Origin(Some(Arc::new(r)));
        self
    }

    pub(crate) fn origin(&self) -> Option<&Recognizer> {
        self.origin.0.as_deref()
    }

    /// Attaches the reduced product of both operands' recognizers, if both
    /// have one.
    fn with_combined_origin(self, x: &Self, y: &Self, op: fn(bool, bool) -> bool) -> Self {
        let (Some(rx), Some(ry)) = (x.origin(), y.origin()) else {
            return self;
        };
        match product(rx, ry, op, &Limits::default()) {
            Ok(r) => self.with_origin(r.reduce()),
            Err(_) => self,
        }
    }

    /// Automaton for the empty language.
    pub fn empty(alphabet: &Alphabet) -> Self {
        ExtBuchiAutomaton::new(alphabet.clone(), 0)
    }

    /// Automaton for {1}.
    pub fn epsilon(alphabet: &Alphabet) -> Self {
        let mut a = ExtBuchiAutomaton::new(alphabet.clone(), 1);
        a.set_initial(0);
        a.set_final(0, true);
        a
    }

    /// Automaton for S^∞ (S* ∪ S^ω).
    pub fn universal_over(alphabet: &Alphabet, s: LetterSet) -> Self {
        let mut a = ExtBuchiAutomaton::new(alphabet.clone(), 1);
        a.set_initial(0);
        a.set_final(0, true);
        a.set_repeated(0, true);
        for x in s.iter() {
            a.add_transition(0, x, 0);
        }
        a
    }

    /// Automaton for Γ^∞.
    pub fn universal(alphabet: &Alphabet) -> Self {
        Self::universal_over(alphabet, alphabet.full_set())
    }

    /// Automaton for the single one-letter word `a` (letter index).
    pub fn letter(alphabet: &Alphabet, a: usize) -> Self {
        let mut m = ExtBuchiAutomaton::new(alphabet.clone(), 2);
        m.set_initial(0);
        m.set_final(1, true);
        m.add_transition(0, a, 1);
        m
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn add_state(&mut self) -> usize {
        self.origin = Origin::default();
        self.delta.push(vec![Vec::new(); self.alphabet.len()]);
        self.final_states.push(false);
        self.repeated.push(false);
        self.delta.len() - 1
    }

    pub fn add_transition(&mut self, p: usize, a: usize, q: usize) {
        self.origin = Origin::default();
        let succ = &mut self.delta[p][a];
        if let Err(pos) = succ.binary_search(&q) {
            succ.insert(pos, q);
        }
    }

    pub fn set_initial(&mut self, q: usize) {
        self.origin = Origin::default();
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn set_final(&mut self, q: usize, v: bool) {
        self.origin = Origin::default();
        self.final_states[q] = v;
    }

    pub fn set_repeated(&mut self, q: usize, v: bool) {
        self.origin = Origin::default();
        self.repeated[q] = v;
    }

    pub fn initial_states(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.final_states[q]
    }

    pub fn is_repeated(&self, q: usize) -> bool {
        self.repeated[q]
    }

    pub fn successors(&self, q: usize, a: usize) -> &[usize] {
        &self.delta[q][a]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, succ)| succ.iter().map(move |&q| (p, a, q)))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().flatten().map(Vec::len).sum()
    }

    /// At most one initial state and at most one successor per letter.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1 && self.delta.iter().flatten().all(|s| s.len() <= 1)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        self.adjacency_over(self.alphabet.full_set())
    }

    fn adjacency_over(&self, s: LetterSet) -> Vec<Vec<usize>> {
        self.delta
            .iter()
            .map(|row| {
                let mut out: Vec<usize> = s
                    .iter()
                    .filter(|&a| a < row.len())
                    .flat_map(|a| row[a].iter().copied())
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }

    pub(crate) fn check_same_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "'{}' versus '{}'",
                self.alphabet, other.alphabet
            )));
        }
        Ok(())
    }

    fn post(&self, set: &[bool], a: usize) -> Vec<bool> {
        let mut out = vec![false; self.num_states()];
        for (p, _) in set.iter().enumerate().filter(|(_, &b)| b) {
            for &q in &self.delta[p][a] {
                out[q] = true;
            }
        }
        out
    }

    fn run_finite(&self, w: &[usize]) -> Vec<bool> {
        let mut cur = vec![false; self.num_states()];
        for &i in &self.initial {
            cur[i] = true;
        }
        for &a in w {
            cur = self.post(&cur, a);
        }
        cur
    }

    /// Exact membership test; lassos are decided on the product of the
    /// automaton with the period positions.
    pub fn member(&self, w: &Word) -> Result<bool> {
        match w {
            Word::Finite(f) => {
                let idx = self.alphabet.encode(f)?;
                let end = self.run_finite(&idx);
                Ok(end.iter().zip(&self.final_states).any(|(a, b)| *a && *b))
            }
            Word::Infinite(u) => {
                let pre = self.alphabet.encode(u.prefix())?;
                let per = self.alphabet.encode(u.period())?;
                Ok(self.member_lasso(&pre, &per))
            }
        }
    }

    fn member_lasso(&self, pre: &[usize], per: &[usize]) -> bool {
        let n = self.num_states();
        let p = per.len();
        let start = self.run_finite(pre);
        let node = |q: usize, j: usize| q * p + j;
        let mut adj = vec![Vec::new(); n * p];
        for q in 0..n {
            for j in 0..p {
                for &r in &self.delta[q][per[j]] {
                    adj[node(q, j)].push(node(r, (j + 1) % p));
                }
            }
        }
        let reach = graph::reachable(&adj, (0..n).filter(|&q| start[q]).map(|q| node(q, 0)));
        let (comp, cyclic) = graph::sccs(&adj);
        (0..n * p).any(|v| reach[v] && self.repeated[v / p] && cyclic[comp[v]])
    }

    /// Breadth-first search from `sources`; parents give shortest, then
    /// lexicographically least, paths.
    fn bfs(&self, sources: &[usize]) -> (Vec<usize>, Vec<Option<(usize, usize)>>, Vec<bool>) {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut parent = vec![None; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &s in sources {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for a in 0..self.alphabet.len() {
                for &q in &self.delta[p][a] {
                    if !seen[q] {
                        seen[q] = true;
                        parent[q] = Some((p, a));
                        queue.push_back(q);
                    }
                }
            }
        }
        (order, parent, seen)
    }

    fn path_to(parent: &[Option<(usize, usize)>], mut q: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, a)) = parent[q] {
            w.push(a);
            q = p;
        }
        w.reverse();
        w
    }

    /// Shortest, then lexicographically least, non-empty word leading from `q` back to `q`.
    fn shortest_cycle(&self, q: usize) -> Option<Vec<usize>> {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut queue = VecDeque::new();
        let mut first: Vec<Option<usize>> = vec![None; n];
        for a in 0..self.alphabet.len() {
            for &r in &self.delta[q][a] {
                if r == q {
                    return Some(vec![a]);
                }
                if !seen[r] {
                    seen[r] = true;
                    first[r] = Some(a);
                    queue.push_back(r);
                }
            }
        }
        while let Some(p) = queue.pop_front() {
            for a in 0..self.alphabet.len() {
                for &r in &self.delta[p][a] {
                    if r == q {
                        let mut w = Self::path_to(&parent, p);
                        let mut head = vec![first[root_of(&parent, p)].expect("bfs root")];
                        head.append(&mut w);
                        head.push(a);
                        return Some(head);
                    }
                    if !seen[r] {
                        seen[r] = true;
                        parent[r] = Some((p, a));
                        queue.push_back(r);
                    }
                }
            }
        }
        None
    }

    /// An accepted word: the shortest-lex finite word if any, otherwise the
    /// smallest accepted lasso found by cycle search.
    pub fn accepted_word(&self) -> Option<Word> {
        if let Some(w) = self.accepted_finite_word() {
            return Some(Word::Finite(w));
        }
        self.accepted_infinite_word().map(Word::Infinite)
    }

    pub fn accepted_finite_word(&self) -> Option<FiniteWord> {
        let (order, parent, _) = self.bfs(&self.initial);
        let q = order.into_iter().find(|&q| self.final_states[q])?;
        Some(self.alphabet.decode(&Self::path_to(&parent, q)))
    }

    pub fn accepted_infinite_word(&self) -> Option<UPWord> {
        let (_, parent, seen) = self.bfs(&self.initial);
        let adj = self.adjacency();
        let (comp, cyclic) = graph::sccs(&adj);
        let mut best: Option<UPWord> = None;
        for q in 0..self.num_states() {
            if !(seen[q] && self.repeated[q] && cyclic[comp[q]]) {
                continue;
            }
            let u = self.alphabet.decode(&Self::path_to(&parent, q));
            let v = self
                .alphabet
                .decode(&self.shortest_cycle(q).expect("cyclic state"));
            let cand = UPWord::new(u, v).expect("non-empty cycle");
            let better = match &best {
                None => true,
                Some(b) => lasso_key(&cand) < lasso_key(b),
            };
            if better {
                best = Some(cand);
            }
        }
        best
    }

    pub fn is_empty(&self) -> bool {
        self.accepted_word().is_none()
    }

    /// True iff no infinite word is accepted.
    pub fn is_empty_omega(&self) -> bool {
        self.accepted_infinite_word().is_none()
    }

    /// Keeps only states that are reachable and from which some word is accepted.
    pub fn trim(&self) -> Self {
        let adj = self.adjacency();
        let reach = graph::reachable(&adj, self.initial.iter().copied());
        let (comp, cyclic) = graph::sccs(&adj);
        let rev = graph::reverse(&adj);
        let targets = (0..self.num_states())
            .filter(|&q| self.final_states[q] || (self.repeated[q] && cyclic[comp[q]]));
        let coreach = graph::reachable(&rev, targets);
        let keep: Vec<bool> = (0..self.num_states())
            .map(|q| reach[q] && coreach[q])
            .collect();
        self.restrict_states(&keep)
    }

    fn restrict_states(&self, keep: &[bool]) -> Self {
        let mut map = vec![usize::MAX; self.num_states()];
        let mut n = 0;
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = n;
                n += 1;
            }
        }
        let mut out = ExtBuchiAutomaton::new(self.alphabet.clone(), n);
        for q in 0..self.num_states() {
            if !keep[q] {
                continue;
            }
            out.final_states[map[q]] = self.final_states[q];
            out.repeated[map[q]] = self.repeated[q];
            for a in 0..self.alphabet.len() {
                for &r in &self.delta[q][a] {
                    if keep[r] {
                        out.delta[map[q]][a].push(map[r]);
                    }
                }
            }
        }
        out.initial = self
            .initial
            .iter()
            .filter(|&&q| keep[q])
            .map(|&q| map[q])
            .collect();
        out
    }

    /// Quotient by the coarsest bisimulation that respects the final and
    /// repeated labels. Language preserving.
    pub fn reduce(&self) -> Self {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut block: Vec<usize> = (0..n)
            .map(|q| self.final_states[q] as usize * 2 + self.repeated[q] as usize)
            .collect();
        loop {
            let mut ids: HashMap<(usize, Vec<Vec<usize>>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let sig: Vec<Vec<usize>> = (0..k)
                    .map(|a| {
                        let mut v: Vec<usize> =
                            self.delta[q][a].iter().map(|&r| block[r]).collect();
                        v.sort_unstable();
                        v.dedup();
                        v
                    })
                    .collect();
                let len = ids.len();
                next[q] = *ids.entry((block[q], sig)).or_insert(len);
            }
            let count = ids.len();
            let before = {
                let mut b = block.clone();
                b.sort_unstable();
                b.dedup();
                b.len()
            };
            block = next;
            if count == before {
                break;
            }
        }
        let blocks = block.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = ExtBuchiAutomaton::new(self.alphabet.clone(), blocks);
        for q in 0..n {
            out.final_states[block[q]] = self.final_states[q];
            out.repeated[block[q]] = self.repeated[q];
            for a in 0..k {
                for &r in &self.delta[q][a] {
                    out.add_transition(block[q], a, block[r]);
                }
            }
        }
        for &i in &self.initial {
            out.set_initial(block[i]);
        }
        out
    }

    /// `trim` followed by `reduce`.
    pub fn simplify(&self) -> Self {
        self.trim().reduce().trim()
    }

    /// Disjoint union.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same_alphabet(other)?;
        let off = self.num_states();
        let mut out = self.clone();
        for _ in 0..other.num_states() {
            out.add_state();
        }
        for (p, a, q) in other.transitions() {
            out.add_transition(p + off, a, q + off);
        }
        for q in 0..other.num_states() {
            out.final_states[q + off] = other.final_states[q];
            out.repeated[q + off] = other.repeated[q];
        }
        for &i in &other.initial {
            out.set_initial(i + off);
        }
        Ok(out.with_combined_origin(self, other, |x, y| x || y))
    }

    /// Synchronous product; the flag alternates between waiting for a
    /// repeated state of `self` (0) and of `other` (1).
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same_alphabet(other)?;
        let k = self.alphabet.len();
        let mut ids: HashMap<(usize, usize, u8), usize> = HashMap::new();
        let mut states: Vec<(usize, usize, u8)> = Vec::new();
        let mut out = ExtBuchiAutomaton::new(self.alphabet.clone(), 0);
        let mut intern = |t: (usize, usize, u8),
                          out: &mut ExtBuchiAutomaton,
                          states: &mut Vec<(usize, usize, u8)>| {
            *ids.entry(t).or_insert_with(|| {
                states.push(t);
                out.add_state()
            })
        };
        for &p in &self.initial {
            for &q in &other.initial {
                let id = intern((p, q, 0), &mut out, &mut states);
                out.set_initial(id);
            }
        }
        let mut i = 0;
        while i < states.len() {
            let (p, q, f) = states[i];
            out.final_states[i] = self.final_states[p] && other.final_states[q];
            out.repeated[i] = f == 1 && other.repeated[q];
            let nf = match f {
                0 if self.repeated[p] => 1,
                1 if other.repeated[q] => 0,
                _ => f,
            };
            for a in 0..k {
                for &p2 in &self.delta[p][a] {
                    for &q2 in &other.delta[q][a] {
                        let id = intern((p2, q2, nf), &mut out, &mut states);
                        out.add_transition(i, a, id);
                    }
                }
            }
            i += 1;
        }
        Ok(out.with_combined_origin(self, other, |x, y| x && y))
    }

    /// The finite-word part L ∩ Γ*.
    pub fn finite_part(&self) -> Self {
        let mut out = self.clone();
        out.repeated = vec![false; self.num_states()];
        out
    }

    /// The infinite-word part L ∩ Γ^ω.
    pub fn omega_part(&self) -> Self {
        let mut out = self.clone();
        out.final_states = vec![false; self.num_states()];
        out
    }

    /// {uα : u ∈ L(self) ∩ Γ*, α ∈ L(other)}.
    pub fn concat_finite(&self, other: &Self) -> Result<Self> {
        self.check_same_alphabet(other)?;
        let off = self.num_states();
        let mut out = self.finite_part();
        out.final_states = vec![false; off];
        for _ in 0..other.num_states() {
            out.add_state();
        }
        for (p, a, q) in other.transitions() {
            out.add_transition(p + off, a, q + off);
        }
        for q in 0..other.num_states() {
            out.final_states[q + off] = other.final_states[q];
            out.repeated[q + off] = other.repeated[q];
        }
        let other_eps = other.initial.iter().any(|&i| other.final_states[i]);
        for p in 0..off {
            if !self.final_states[p] {
                continue;
            }
            out.final_states[p] = other_eps;
            for &i in &other.initial {
                for a in 0..self.alphabet.len() {
                    for &q in &other.delta[i][a] {
                        out.add_transition(p, a, q + off);
                    }
                }
            }
        }
        if self.initial.iter().any(|&i| self.final_states[i]) {
            for &i in &other.initial {
                out.set_initial(i + off);
            }
        }
        Ok(out)
    }

    /// K* where K is the finite part of `self`.
    pub fn star_finite(&self) -> Self {
        let k = self.alphabet.len();
        let mut out = self.finite_part();
        let s0 = out.add_state();
        out.initial = vec![s0];
        out.final_states[s0] = true;
        for &i in &self.initial {
            for a in 0..k {
                for &q in &self.delta[i][a] {
                    out.add_transition(s0, a, q);
                }
            }
        }
        for p in 0..self.num_states() {
            if self.final_states[p] {
                for &i in &self.initial {
                    for a in 0..k {
                        for &q in &self.delta[i][a] {
                            out.add_transition(p, a, q);
                        }
                    }
                }
            }
        }
        out
    }

    /// Infinite products of non-empty words of the finite part K of `self`,
    /// together with K* when 1 ∈ K.
    pub fn omega_power_finite(&self) -> Self {
        let k = self.alphabet.len();
        let n = self.num_states();
        let mut out = ExtBuchiAutomaton::new(self.alphabet.clone(), n + 1);
        let s0 = n;
        out.initial = vec![s0];
        out.repeated[s0] = true;
        for (p, a, q) in self.transitions() {
            out.add_transition(p, a, q);
            if self.final_states[q] {
                out.add_transition(p, a, s0);
            }
        }
        for &i in &self.initial {
            for a in 0..k {
                for &q in &self.delta[i][a] {
                    out.add_transition(s0, a, q);
                    if self.final_states[q] {
                        out.add_transition(s0, a, s0);
                    }
                }
            }
        }
        if self.initial.iter().any(|&i| self.final_states[i]) {
            out.union(&self.star_finite()).expect("same alphabet")
        } else {
            out
        }
    }

    /// L/S^∞ = {u ∈ Γ* : uα ∈ L for some α ∈ S^∞}.
    pub fn quotient_inf(&self, s: LetterSet) -> FiniteWordAutomaton {
        let adj = self.adjacency_over(s);
        let (comp, cyclic) = graph::sccs(&adj);
        let rev = graph::reverse(&adj);
        let targets = (0..self.num_states()).filter(|&q| {
            self.final_states[q] || (!s.is_empty() && self.repeated[q] && cyclic[comp[q]])
        });
        let good = graph::reachable(&rev, targets);
        let mut out = self.clone();
        out.final_states = good;
        out.repeated = vec![false; self.num_states()];
        out.trim()
    }

    /// Subset construction on the finite part followed by minimisation.
    pub(crate) fn determinize_finite(&self) -> Dfa {
        Dfa::from_nfa(self).minimize()
    }

    /// Arrow language of the finite part W: W itself plus the infinite words
    /// with infinitely many prefixes in W.
    pub fn arrow(&self) -> Self {
        self.determinize_finite().to_automaton(true, true)
    }

    /// L ∩ S^im, where S^im is the set of words whose letters occurring
    /// infinitely often are exactly S (∅^im = Γ*).
    pub fn restrict_im(&self, s: LetterSet) -> Self {
        self.intersect(&im_gadget(&self.alphabet, s))
            .expect("same alphabet")
            .trim()
    }
}

fn root_of(parent: &[Option<(usize, usize)>], mut q: usize) -> usize {
    while let Some((p, _)) = parent[q] {
        q = p;
    }
    q
}

fn lasso_key(w: &UPWord) -> (usize, String) {
    (w.prefix().len() + w.period().len(), w.to_string())
}

/// The canonical automaton for S^im: a free phase followed by |S|+1 phases
/// cycling through the letters of S.
pub fn im_gadget(alphabet: &Alphabet, s: LetterSet) -> ExtBuchiAutomaton {
    let k = alphabet.len();
    if s.is_empty() {
        let mut g = ExtBuchiAutomaton::new(alphabet.clone(), 1);
        g.set_initial(0);
        g.set_final(0, true);
        for a in 0..k {
            g.add_transition(0, a, 0);
        }
        return g;
    }
    let letters: Vec<usize> = s.iter().collect();
    let m = letters.len();
    // Phases 0..m wait for the next letter of the round; phase m closes a round.
    let mut g = ExtBuchiAutomaton::new(alphabet.clone(), m + 2);
    let phase = |i: usize| i + 1;
    g.set_initial(0);
    g.set_initial(phase(0));
    g.set_repeated(phase(m), true);
    for a in 0..k {
        g.add_transition(0, a, 0);
        g.add_transition(0, a, phase(0));
    }
    for i in 0..=m {
        let at = i % m;
        for &a in &letters {
            let to = if a == letters[at] { at + 1 } else { at };
            g.add_transition(phase(i), a, phase(to));
        }
    }
    g
}

/// Partial deterministic automaton on finite words.
#[derive(Clone, Debug)]
pub(crate) struct Dfa {
    pub alphabet: Alphabet,
    pub delta: Vec<Vec<Option<usize>>>,
    pub initial: Option<usize>,
    pub accepting: Vec<bool>,
}

impl Dfa {
    fn from_nfa(a: &ExtBuchiAutomaton) -> Dfa {
        let k = a.alphabet.len();
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut delta = Vec::new();
        let mut accepting = Vec::new();
        let start: Vec<usize> = a.initial.clone();
        if start.is_empty() {
            return Dfa {
                alphabet: a.alphabet.clone(),
                delta,
                initial: None,
                accepting,
            };
        }
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut i = 0;
        while i < sets.len() {
            let cur = sets[i].clone();
            accepting.push(cur.iter().any(|&q| a.final_states[q]));
            let mut row = Vec::with_capacity(k);
            for x in 0..k {
                let mut nxt: Vec<usize> = cur
                    .iter()
                    .flat_map(|&q| a.delta[q][x].iter().copied())
                    .collect();
                nxt.sort_unstable();
                nxt.dedup();
                if nxt.is_empty() {
                    row.push(None);
                    continue;
                }
                let len = sets.len();
                let id = *ids.entry(nxt.clone()).or_insert_with(|| {
                    sets.push(nxt);
                    len
                });
                row.push(Some(id));
            }
            delta.push(row);
            i += 1;
        }
        Dfa {
            alphabet: a.alphabet.clone(),
            delta,
            initial: Some(0),
            accepting,
        }
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    /// Removes states that cannot reach acceptance, then merges
    /// Nerode-equivalent states (Moore refinement).
    pub fn minimize(&self) -> Dfa {
        let n = self.num_states();
        let k = self.alphabet.len();
        let adj: Vec<Vec<usize>> = self
            .delta
            .iter()
            .map(|r| r.iter().flatten().copied().collect())
            .collect();
        let rev = graph::reverse(&adj);
        let live = graph::reachable(&rev, (0..n).filter(|&q| self.accepting[q]));
        if self.initial.is_none_or(|i| !live[i]) {
            return Dfa {
                alphabet: self.alphabet.clone(),
                delta: Vec::new(),
                initial: None,
                accepting: Vec::new(),
            };
        }
        let step = |q: usize, a: usize| self.delta[q][a].filter(|&r| live[r]);
        let mut block: Vec<usize> = (0..n).map(|q| self.accepting[q] as usize).collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in (0..n).filter(|&q| live[q]) {
                let sig: Vec<Option<usize>> =
                    (0..k).map(|a| step(q, a).map(|r| block[r])).collect();
                let len = ids.len();
                next[q] = *ids.entry((block[q], sig)).or_insert(len);
            }
            let c = ids.len();
            block = next;
            if c == count {
                break;
            }
            count = c;
        }
        // Renumber blocks in breadth-first order from the initial state.
        let init = self.initial.expect("live initial");
        let mut order = vec![usize::MAX; count];
        let mut reps = Vec::new();
        let mut queue = VecDeque::new();
        order[block[init]] = 0;
        reps.push(init);
        queue.push_back(init);
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                if let Some(r) = step(q, a) {
                    if order[block[r]] == usize::MAX {
                        order[block[r]] = reps.len();
                        reps.push(r);
                        queue.push_back(r);
                    }
                }
            }
        }
        let delta = reps
            .iter()
            .map(|&q| {
                (0..k)
                    .map(|a| step(q, a).map(|r| order[block[r]]))
                    .collect()
            })
            .collect();
        let accepting = reps.iter().map(|&q| self.accepting[q]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            initial: Some(0),
            accepting,
        }
    }

    pub fn to_automaton(&self, fin: bool, rep: bool) -> ExtBuchiAutomaton {
        let mut out = ExtBuchiAutomaton::new(self.alphabet.clone(), self.num_states());
        if let Some(i) = self.initial {
            out.set_initial(i);
        }
        for q in 0..self.num_states() {
            out.final_states[q] = fin && self.accepting[q];
            out.repeated[q] = rep && self.accepting[q];
            for (a, t) in self.delta[q].iter().enumerate() {
                if let Some(r) = t {
                    out.add_transition(q, a, *r);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expressions::compile_str;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn lasso_membership_and_witness() {
        let a = compile_str("alphabet: abc; ((a|b|c)* a b)^w").unwrap();
        assert!(a.member(&Word::lasso("", "cab")).unwrap());
        assert!(!a.member(&Word::lasso("cab", "acb")).unwrap());
        let im = compile_str("alphabet: ab; IM{a,b}").unwrap();
        assert_eq!(im.accepted_word(), Some(Word::lasso("", "ab")));
    }

    #[test]
    fn member_rejects_foreign_letters() {
        let a = ExtBuchiAutomaton::universal(&ab());
        assert!(matches!(
            a.member(&Word::finite("ac")),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn im_gadget_accepts_exactly_s_im() {
        let g = im_gadget(&ab(), LetterSet::from_indices([0, 1]));
        assert!(g.member(&Word::lasso("bbb", "ab")).unwrap());
        assert!(!g.member(&Word::lasso("ab", "a")).unwrap());
        assert!(!g.member(&Word::lasso("a", "b")).unwrap());
        assert!(!g.member(&Word::finite("ab")).unwrap());
        let g0 = im_gadget(&ab(), LetterSet::EMPTY);
        assert!(g0.member(&Word::finite("ab")).unwrap());
        assert!(!g0.member(&Word::lasso("", "a")).unwrap());
    }

    #[test]
    fn arrow_is_deterministic_and_counts_prefixes() {
        let w = compile_str("alphabet: abc; {a,b,c}* a").unwrap();
        let ar = w.arrow();
        assert!(ar.is_deterministic());
        assert!(ar.member(&Word::lasso("bb", "ca")).unwrap());
        assert!(!ar.member(&Word::lasso("a", "bc")).unwrap());
        assert!(ar.member(&Word::finite("ba")).unwrap());
    }

    #[test]
    fn reduce_preserves_small_languages() {
        let a = compile_str("alphabet: ab; (a|b)* a b (a|b)^oo").unwrap();
        let r = a.reduce();
        for w in ["ab", "ba", "aab", "1"] {
            assert_eq!(
                a.member(&Word::finite(w)).unwrap(),
                r.member(&Word::finite(w)).unwrap()
            );
        }
        for (u, v) in [("", "ab"), ("", "a"), ("ab", "b")] {
            let w = Word::lasso(u, v);
            assert_eq!(a.member(&w).unwrap(), r.member(&w).unwrap());
        }
    }
}
