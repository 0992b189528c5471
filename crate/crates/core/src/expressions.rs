//! Expression language over Γ^∞ and its compilation to automata.
//!
//! ```text
//! file    := "alphabet:" letter+ ";" expr
//! expr    := inter ("|" inter)*
//! inter   := concat ("&" concat)*
//! concat  := factor+
//! factor  := "!"? base power*
//! base    := letter | "1" | "0" | "(" expr ")" | set | "IM" set
//! set     := "{" (letter ("," letter)*)? "}"
//! power   := "*" | "^w" | "^oo"
//! ```
//!
//! Concatenation only uses the finite words of its left operand. `!` applies
//! to the powered base, so `!a*` is the complement of `a*`.

use std::fmt;

use crate::alphabet::{Alphabet, LetterSet, UPWord};
use crate::automata::{im_gadget, ExtBuchiAutomaton};
use crate::error::{Error, Limits, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Letter(char),
    Epsilon,
    Empty,
    Union(Box<Expr>, Box<Expr>),
    Intersect(Box<Expr>, Box<Expr>),
    Complement(Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    Star(Box<Expr>),
    OmegaPow(Box<Expr>),
    InfPow(Box<Expr>),
    /// Letters in the order written.
    ImSet(Vec<char>),
}

impl Expr {
    pub fn union(l: Expr, r: Expr) -> Expr {
        Expr::Union(Box::new(l), Box::new(r))
    }
    pub fn intersect(l: Expr, r: Expr) -> Expr {
        Expr::Intersect(Box::new(l), Box::new(r))
    }
    pub fn concat(l: Expr, r: Expr) -> Expr {
        Expr::Concat(Box::new(l), Box::new(r))
    }
    pub fn complement(x: Expr) -> Expr {
        Expr::Complement(Box::new(x))
    }
    pub fn star(x: Expr) -> Expr {
        Expr::Star(Box::new(x))
    }
    pub fn omega(x: Expr) -> Expr {
        Expr::OmegaPow(Box::new(x))
    }
    pub fn inf(x: Expr) -> Expr {
        Expr::InfPow(Box::new(x))
    }

    /// Right-nested union of the given letters; `{}` is `0`.
    pub fn letter_set(letters: &[char]) -> Expr {
        match letters.split_first() {
            None => Expr::Empty,
            Some((&c, [])) => Expr::Letter(c),
            Some((&c, rest)) => Expr::union(Expr::Letter(c), Expr::letter_set(rest)),
        }
    }

    /// Letters of a right-nested union of two or more distinct letters.
    fn as_letter_chain(&self) -> Option<Vec<char>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Expr::Union(l, r) => match **l {
                    Expr::Letter(c) if !out.contains(&c) => {
                        out.push(c);
                        cur = r;
                    }
                    _ => return None,
                },
                Expr::Letter(c) if !out.is_empty() && !out.contains(c) => {
                    out.push(*c);
                    return Some(out);
                }
                _ => return None,
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Union(..) => 0,
            Expr::Intersect(..) => 1,
            Expr::Concat(..) => 2,
            Expr::Complement(..) => 3,
            Expr::Star(_) | Expr::OmegaPow(_) | Expr::InfPow(_) => 4,
            _ if self.as_letter_chain().is_some() => 5,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        if let Some(chain) = self.as_letter_chain() {
            let inner: Vec<String> = chain.iter().map(|c| c.to_string()).collect();
            return write!(f, "{{{}}}", inner.join(","));
        }
        let p = self.precedence();
        if p < ctx {
            write!(f, "(")?;
        }
        match self {
            Expr::Letter(c) => write!(f, "{c}")?,
            Expr::Epsilon => write!(f, "1")?,
            Expr::Empty => write!(f, "0")?,
            Expr::ImSet(s) => {
                let inner: Vec<String> = s.iter().map(|c| c.to_string()).collect();
                write!(f, "IM{{{}}}", inner.join(","))?
            }
            Expr::Union(l, r) => {
                l.write_at(f, 1)?;
                write!(f, " | ")?;
                r.write_at(f, 0)?;
            }
            Expr::Intersect(l, r) => {
                l.write_at(f, 2)?;
                write!(f, " & ")?;
                r.write_at(f, 1)?;
            }
            Expr::Concat(l, r) => {
                l.write_at(f, 2)?;
                write!(f, " ")?;
                r.write_at(f, 3)?;
            }
            Expr::Complement(x) => {
                write!(f, "!")?;
                x.write_at(f, 4)?;
            }
            Expr::Star(x) | Expr::OmegaPow(x) | Expr::InfPow(x) => {
                x.write_at(f, 4)?;
                let op = match self {
                    Expr::Star(_) => "*",
                    Expr::OmegaPow(_) => "^w",
                    _ => "^oo",
                };
                write!(f, "{op}")?;
            }
        }
        if p < ctx {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.base + self.pos,
            message: message.into(),
        })
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
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn letter(&mut self) -> Result<char> {
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                let ch = c as char;
                if self.alphabet.index(ch).is_none() {
                    return Err(Error::UndeclaredLetter {
                        letter: ch,
                        offset: self.base + self.pos,
                    });
                }
                self.pos += 1;
                Ok(ch)
            }
            _ => self.err("expected a letter"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut items = vec![self.inter()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            items.push(self.inter()?);
        }
        Ok(fold_right(items, Expr::union))
    }

    fn inter(&mut self) -> Result<Expr> {
        let mut items = vec![self.concat()?];
        while self.peek() == Some(b'&') {
            self.pos += 1;
            items.push(self.concat()?);
        }
        Ok(fold_right(items, Expr::intersect))
    }

    fn starts_factor(c: Option<u8>) -> bool {
        matches!(c, Some(b'!' | b'1' | b'0' | b'(' | b'{' | b'I'))
            || c.is_some_and(|c| c.is_ascii_lowercase())
    }

    fn concat(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while Self::starts_factor(self.peek()) {
            let rhs = self.factor()?;
            acc = Expr::concat(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        let neg = if self.peek() == Some(b'!') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut x = self.base_expr()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    x = Expr::star(x);
                }
                Some(b'^') => {
                    self.pos += 1;
                    let rest = &self.src[self.pos..];
                    if rest.starts_with(b"oo") {
                        self.pos += 2;
                        x = Expr::inf(x);
                    } else if rest.starts_with(b"w") {
                        self.pos += 1;
                        x = Expr::omega(x);
                    } else {
                        return self.err("expected 'w' or 'oo' after '^'");
                    }
                }
                _ => break,
            }
        }
        Ok(if neg { Expr::complement(x) } else { x })
    }

    fn set(&mut self) -> Result<Vec<char>> {
        self.expect(b'{')?;
        let mut out = Vec::new();
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let at = self.pos;
            let c = self.letter()?;
            if out.contains(&c) {
                self.pos = at;
                return self.err(format!("letter '{c}' repeated in set"));
            }
            out.push(c);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.err("expected ',' or '}'"),
            }
        }
    }

    fn base_expr(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(Expr::Epsilon)
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(Expr::Empty)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'{') => Ok(Expr::letter_set(&self.set()?)),
            Some(b'I') => {
                if self.src[self.pos..].starts_with(b"IM") {
                    self.pos += 2;
                    Ok(Expr::ImSet(self.set()?))
                } else {
                    self.err("expected 'IM'")
                }
            }
            Some(c) if c.is_ascii_lowercase() => Ok(Expr::Letter(self.letter()?)),
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn fold_right(mut items: Vec<Expr>, f: fn(Expr, Expr) -> Expr) -> Expr {
    let mut acc = items.pop().expect("non-empty");
    while let Some(x) = items.pop() {
        acc = f(x, acc);
    }
    acc
}

fn parse_at(text: &str, alphabet: &Alphabet, base: usize) -> Result<Expr> {
    if let Some(i) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(Error::Syntax {
            offset: base + i,
            message: "non-ascii character".into(),
        });
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        base,
        alphabet,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses an expression over `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Expr> {
    parse_at(text, alphabet, 0)
}

/// Parses `alphabet: <letters>; <expr>`. Offsets refer to the whole text.
pub fn parse_file(text: &str) -> Result<(Alphabet, Expr)> {
    let lead = text.len() - text.trim_start().len();
    let body = &text[lead..];
    let Some(rest) = body.strip_prefix("alphabet:") else {
        return Err(Error::Syntax {
            offset: lead,
            message: "expected 'alphabet:' header".into(),
        });
    };
    let semi = rest.find(';').ok_or(Error::Syntax {
        offset: text.len(),
        message: "expected ';' after the alphabet".into(),
    })?;
    let head_start = lead + "alphabet:".len();
    let letters = &rest[..semi];
    for (i, c) in letters.char_indices() {
        if !(c.is_ascii_lowercase() || c.is_whitespace() || c == ',') {
            return Err(Error::Syntax {
                offset: head_start + i,
                message: format!("'{c}' is not a letter"),
            });
        }
    }
    let alphabet = Alphabet::parse(letters)?;
    let expr_start = head_start + semi + 1;
    let e = parse_at(&text[expr_start..], &alphabet, expr_start)?;
    Ok((alphabet, e))
}

/// Letters occurring infinitely often in `w`.
pub fn infinity_letters(w: &UPWord, alphabet: &Alphabet) -> Result<LetterSet> {
    Ok(LetterSet::from_indices(alphabet.encode(w.period())?))
}

/// Compiles an expression to an extended Büchi automaton.
pub fn compile(e: &Expr, alphabet: &Alphabet, limits: &Limits) -> Result<ExtBuchiAutomaton> {
    let letter = |c: char| {
        alphabet.index(c).ok_or(Error::UndeclaredLetter {
            letter: c,
            offset: 0,
        })
    };
    let a = match e {
        Expr::Letter(c) => ExtBuchiAutomaton::letter(alphabet, letter(*c)?),
        Expr::Epsilon => ExtBuchiAutomaton::epsilon(alphabet),
        Expr::Empty => ExtBuchiAutomaton::empty(alphabet),
        Expr::ImSet(s) => {
            let set =
                LetterSet::from_indices(s.iter().map(|&c| letter(c)).collect::<Result<Vec<_>>>()?);
            im_gadget(alphabet, set)
        }
        Expr::Union(l, r) => compile(l, alphabet, limits)?.union(&compile(r, alphabet, limits)?)?,
        Expr::Intersect(l, r) => {
            compile(l, alphabet, limits)?.intersect(&compile(r, alphabet, limits)?)?
        }
        Expr::Concat(l, r) => {
            compile(l, alphabet, limits)?.concat_finite(&compile(r, alphabet, limits)?)?
        }
        Expr::Complement(x) => compile(x, alphabet, limits)?.complement(limits)?,
        Expr::Star(x) => compile(x, alphabet, limits)?.star_finite(),
        Expr::OmegaPow(x) => compile(x, alphabet, limits)?.omega_power_finite(),
        Expr::InfPow(x) => {
            let k = compile(x, alphabet, limits)?;
            k.star_finite().union(&k.omega_power_finite())?
        }
    };
    Ok(a.simplify())
}

/// Parses and compiles `alphabet: ...; expr` with default limits.
pub fn compile_str(text: &str) -> Result<ExtBuchiAutomaton> {
    let (g, e) = parse_file(text)?;
    compile(&e, &g, &Limits::default())
}

/// Loads either an expression file or an automaton in the text format;
/// the latter is recognised by its `states:` line.
pub fn load(text: &str, limits: &Limits) -> Result<ExtBuchiAutomaton> {
    if text.lines().any(|l| l.trim_start().starts_with("states:")) {
        return ExtBuchiAutomaton::from_text(text);
    }
    let (g, e) = parse_file(text)?;
    compile(&e, &g, limits)
}
