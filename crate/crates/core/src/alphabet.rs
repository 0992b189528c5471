//! Alphabets, letter sets and words over them.

use std::fmt;

use crate::error::{Error, Result};

/// Ordered set of single-character letters. Letter `i` is `letters[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<char>,
}

pub const MAX_LETTERS: usize = 32;

impl Alphabet {
    pub fn new(letters: &[char]) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if letters.len() > MAX_LETTERS {
            return Err(Error::InvalidAlphabet(format!(
                "at most {MAX_LETTERS} letters are supported"
            )));
        }
        for (i, c) in letters.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::InvalidAlphabet(format!(
                    "letter '{c}' is not a lowercase ascii letter"
                )));
            }
            if letters[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("letter '{c}' is repeated")));
            }
        }
        Ok(Alphabet {
            letters: letters.to_vec(),
        })
    }

    /// Parses the compact form `abc`.
    pub fn parse(s: &str) -> Result<Self> {
        let letters: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .collect();
        Alphabet::new(&letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> char {
        self.letters[i]
    }

    pub fn index(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&x| x == c)
    }

    pub fn full_set(&self) -> LetterSet {
        LetterSet::full(self.len())
    }

    /// All subsets of the alphabet in increasing bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = LetterSet> {
        (0u32..(1u32 << self.len())).map(LetterSet)
    }

    /// Letter indices of `w`, failing on letters outside the alphabet.
    pub fn encode(&self, w: &FiniteWord) -> Result<Vec<usize>> {
        w.0.iter()
            .map(|&c| {
                self.index(c).ok_or_else(|| {
                    Error::AlphabetMismatch(format!("letter '{c}' is not in the alphabet"))
                })
            })
            .collect()
    }

    pub fn decode(&self, idx: &[usize]) -> FiniteWord {
        FiniteWord(idx.iter().map(|&i| self.letters[i]).collect())
    }

    pub fn set_to_string(&self, s: LetterSet) -> String {
        let inner: Vec<String> = s.iter().map(|i| self.letters[i].to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Subset of an alphabet as a bitmask over letter indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterSet(pub u32);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 32 {
            LetterSet(u32::MAX)
        } else {
            LetterSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        LetterSet(1 << i)
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        LetterSet(idx.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, o: LetterSet) -> LetterSet {
        LetterSet(self.0 | o.0)
    }

    pub fn is_subset(self, o: LetterSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
}

/// Finite word; the empty word prints as `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord(pub Vec<char>);

impl FiniteWord {
    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        FiniteWord(v)
    }

    pub fn repeat(&self, k: usize) -> FiniteWord {
        FiniteWord(self.0.repeat(k))
    }
}

impl From<&str> for FiniteWord {
    fn from(s: &str) -> Self {
        if s == "1" {
            return FiniteWord::empty();
        }
        FiniteWord(s.chars().collect())
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Ultimately periodic word `prefix · period^ω`, kept in normal form:
/// the period is primitive and the prefix is as short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPWord {
    prefix: FiniteWord,
    period: FiniteWord,
}

impl UPWord {
    pub fn new(prefix: FiniteWord, period: FiniteWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Precondition(
                "the period of an infinite word is empty".into(),
            ));
        }
        let mut per = primitive_root(&period.0);
        let mut pre = prefix.0;
        while let (Some(&a), Some(&b)) = (pre.last(), per.last()) {
            if a != b {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(UPWord {
            prefix: FiniteWord(pre),
            period: FiniteWord(per),
        })
    }

    pub fn prefix(&self) -> &FiniteWord {
        &self.prefix
    }

    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    /// Letter at position `i`.
    pub fn at(&self, i: usize) -> char {
        if i < self.prefix.len() {
            self.prefix.0[i]
        } else {
            self.period.0[(i - self.prefix.len()) % self.period.len()]
        }
    }
}

fn primitive_root(w: &[char]) -> Vec<char> {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]) {
            return w[..p].to_vec();
        }
    }
    w.to_vec()
}

impl fmt::Display for UPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "{}", self.prefix)?;
        }
        write!(f, "({})^w", self.period)
    }
}

/// Element of Γ^∞ that has a finite description.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    Finite(FiniteWord),
    Infinite(UPWord),
}

impl Word {
    pub fn finite(s: &str) -> Word {
        Word::Finite(FiniteWord::from(s))
    }

    /// `prefix (period)^w`; panics on an empty period.
    pub fn lasso(prefix: &str, period: &str) -> Word {
        Word::Infinite(
            UPWord::new(FiniteWord::from(prefix), FiniteWord::from(period))
                .expect("non-empty period"),
        )
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Word::Finite(_))
    }

    /// Length used for shortest-first ordering: prefix plus period for lassos.
    pub fn size(&self) -> usize {
        match self {
            Word::Finite(w) => w.len(),
            Word::Infinite(u) => u.prefix.len() + u.period.len(),
        }
    }

    /// Parses `abc`, `1`, `ab(cb)^w`, or `(ab)^w`.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if let Some(open) = s.find('(') {
            let rest = &s[open + 1..];
            let close = rest.find(')').ok_or_else(|| Error::Syntax {
                offset: s.len(),
                message: "expected ')'".into(),
            })?;
            let tail = &rest[close + 1..];
            if tail != "^w" {
                return Err(Error::Syntax {
                    offset: open + 1 + close + 1,
                    message: "expected '^w' after the period".into(),
                });
            }
            let pre = &s[..open];
            let per = &rest[..close];
            check_letters(pre, 0)?;
            check_letters(per, open + 1)?;
            return UPWord::new(FiniteWord::from(pre), FiniteWord::from(per)).map(Word::Infinite);
        }
        check_letters(s, 0)?;
        Ok(Word::Finite(FiniteWord::from(s)))
    }
}

fn check_letters(s: &str, base: usize) -> Result<()> {
    if s == "1" {
        return Ok(());
    }
    for (i, c) in s.char_indices() {
        if !c.is_ascii_lowercase() {
            return Err(Error::Syntax {
                offset: base + i,
                message: format!("unexpected '{c}'"),
            });
        }
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Finite(w) => write!(f, "{w}"),
            Word::Infinite(u) => write!(f, "{u}"),
        }
    }
}
