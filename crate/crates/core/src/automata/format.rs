//! Line-oriented text format and DOT export.
//!
//! ```text
//! alphabet: ab
//! states: 2
//! initial: 0
//! final: 1
//! repeated: 1
//! 0 a 1
//! 1 b 1
//! ```

use std::fmt::Write as _;

use super::ExtBuchiAutomaton;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

fn join(ids: impl Iterator<Item = usize>) -> String {
    ids.map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

impl ExtBuchiAutomaton {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let n = self.num_states();
        writeln!(s, "alphabet: {}", self.alphabet).unwrap();
        writeln!(s, "states: {n}").unwrap();
        writeln!(s, "initial: {}", join(self.initial.iter().copied())).unwrap();
        writeln!(
            s,
            "final: {}",
            join((0..n).filter(|&q| self.final_states[q]))
        )
        .unwrap();
        writeln!(
            s,
            "repeated: {}",
            join((0..n).filter(|&q| self.repeated[q]))
        )
        .unwrap();
        for (p, a, q) in self.transitions() {
            writeln!(s, "{p} {} {q}", self.alphabet.letter(a)).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut out: Option<ExtBuchiAutomaton> = None;
        let mut offset = 0;
        for line in text.lines() {
            let here = offset;
            offset += line.len() + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |m: &str| Error::Syntax {
                offset: here,
                message: m.to_string(),
            };
            if let Some((key, val)) = line.split_once(':') {
                let val = val.trim();
                match key.trim() {
                    "alphabet" => alphabet = Some(Alphabet::parse(val)?),
                    "states" => {
                        let g = alphabet
                            .clone()
                            .ok_or_else(|| syntax("'alphabet:' must come first"))?;
                        let n: usize = val.parse().map_err(|_| syntax("bad state count"))?;
                        out = Some(ExtBuchiAutomaton::new(g, n));
                    }
                    key @ ("initial" | "final" | "repeated") => {
                        let a = out
                            .as_mut()
                            .ok_or_else(|| syntax("'states:' must come first"))?;
                        for tok in val.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                            let q: usize = tok.parse().map_err(|_| syntax("bad state id"))?;
                            if q >= a.num_states() {
                                return Err(syntax("state id out of range"));
                            }
                            match key {
                                "initial" => a.set_initial(q),
                                "final" => a.set_final(q, true),
                                _ => a.set_repeated(q, true),
                            }
                        }
                    }
                    _ => return Err(syntax("unknown header")),
                }
                continue;
            }
            let a = out
                .as_mut()
                .ok_or_else(|| syntax("transition before 'states:'"))?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(syntax("expected 'src letter dst'"));
            }
            let p: usize = parts[0].parse().map_err(|_| syntax("bad source state"))?;
            let q: usize = parts[2].parse().map_err(|_| syntax("bad target state"))?;
            let mut cs = parts[1].chars();
            let c = match (cs.next(), cs.next()) {
                (Some(c), None) => c,
                _ => return Err(syntax("letter must be a single character")),
            };
            let x = a.alphabet.index(c).ok_or(Error::UndeclaredLetter {
                letter: c,
                offset: here,
            })?;
            if p >= a.num_states() || q >= a.num_states() {
                return Err(syntax("state id out of range"));
            }
            a.add_transition(p, x, q);
        }
        out.ok_or_else(|| Error::Syntax {
            offset: 0,
            message: "missing 'states:' header".into(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph automaton {\n  rankdir=LR;\n");
        for q in 0..self.num_states() {
            let shape = if self.final_states[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let style = if self.repeated[q] {
                ", style=filled, fillcolor=lightgrey"
            } else {
                ""
            };
            writeln!(s, "  q{q} [label=\"{q}\", shape={shape}{style}];").unwrap();
        }
        for &i in &self.initial {
            writeln!(s, "  init{i} [shape=point];\n  init{i} -> q{i};").unwrap();
        }
        for (p, a, q) in self.transitions() {
            writeln!(s, "  q{p} -> q{q} [label=\"{}\"];", self.alphabet.letter(a)).unwrap();
        }
        s.push_str("}\n");
        s
    }
}
