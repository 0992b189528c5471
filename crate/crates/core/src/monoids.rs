//! Finite ordered monoids and the algebraic predicates used by the
//! fragment characterisations.

use std::fmt::Write as _;

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Finite monoid with a compatible partial order. Elements are `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedMonoid {
    size: usize,
    table: Vec<u32>,
    unit: usize,
    /// `order[s]` holds every `t` with `s ≤ t`.
    order: Vec<BitSet>,
    generators: Option<Vec<(char, usize)>>,
    names: Vec<String>,
}

impl OrderedMonoid {
    /// Validated constructor with the equality order.
    pub fn new(table: Vec<Vec<usize>>, unit: usize) -> Result<Self> {
        let n = table.len();
        let order = (0..n)
            .map(|s| {
                let mut b = BitSet::new(n);
                b.insert(s);
                b
            })
            .collect();
        let m = OrderedMonoid::from_rows(table, unit, order)?;
        m.validate()?;
        Ok(m)
    }

    /// Validated constructor; `leq` lists the pairs `(s, t)` with `s ≤ t`
    /// (reflexive-transitive closure is taken).
    pub fn with_order(table: Vec<Vec<usize>>, unit: usize, leq: &[(usize, usize)]) -> Result<Self> {
        let n = table.len();
        let mut order: Vec<BitSet> = (0..n)
            .map(|s| {
                let mut b = BitSet::new(n);
                b.insert(s);
                b
            })
            .collect();
        for &(s, t) in leq {
            if s >= n || t >= n {
                return Err(Error::InvalidMonoid(format!(
                    "order pair ({s}, {t}) out of range"
                )));
            }
            order[s].insert(t);
        }
        // Warshall closure.
        for k in 0..n {
            for s in 0..n {
                if order[s].contains(k) {
                    let row = order[k].clone();
                    order[s].union_with(&row);
                }
            }
        }
        let m = OrderedMonoid::from_rows(table, unit, order)?;
        m.validate()?;
        Ok(m)
    }

    fn from_rows(table: Vec<Vec<usize>>, unit: usize, order: Vec<BitSet>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidMonoid(
                "a monoid has at least one element".into(),
            ));
        }
        if unit >= n {
            return Err(Error::InvalidMonoid("unit out of range".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (s, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMonoid(format!(
                    "row {s} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidMonoid(format!(
                        "product {x} out of range in row {s}"
                    )));
                }
                flat.push(x as u32);
            }
        }
        Ok(OrderedMonoid {
            size: n,
            table: flat,
            unit,
            order,
            generators: None,
            names: (0..n).map(|i| i.to_string()).collect(),
        })
    }

    /// Unvalidated constructor for monoids built by trusted constructions.
    pub(crate) fn from_flat(size: usize, table: Vec<u32>, unit: usize, order: Vec<BitSet>) -> Self {
        OrderedMonoid {
            size,
            table,
            unit,
            order,
            generators: None,
            names: (0..size).map(|i| i.to_string()).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.size;
        for s in 0..n {
            if self.mul(self.unit, s) != s || self.mul(s, self.unit) != s {
                return Err(Error::InvalidMonoid(format!("unit law fails at {s}")));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::InvalidMonoid(format!(
                            "associativity fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        for s in 0..n {
            for t in self.order[s].iter() {
                if t != s && self.leq(t, s) {
                    return Err(Error::InvalidMonoid(format!(
                        "order is not antisymmetric at ({s}, {t})"
                    )));
                }
                for u in self.order[t].iter() {
                    if !self.leq(s, u) {
                        return Err(Error::InvalidMonoid(format!(
                            "order is not transitive at ({s}, {t}, {u})"
                        )));
                    }
                }
                for x in 0..n {
                    if !self.leq(self.mul(x, s), self.mul(x, t))
                        || !self.leq(self.mul(s, x), self.mul(t, x))
                    {
                        return Err(Error::InvalidMonoid(format!(
                            "order not compatible with multiplication at ({s} <= {t}, {x})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Attaches a letter-to-element map.
    pub fn with_generators(mut self, gens: Vec<(char, usize)>) -> Result<Self> {
        if let Some(&(c, _)) = gens.iter().find(|(_, e)| *e >= self.size) {
            return Err(Error::InvalidMonoid(format!(
                "generator '{c}' out of range"
            )));
        }
        self.generators = Some(gens);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.size);
        self.names = names;
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    #[inline]
    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.table[s * self.size + t] as usize
    }

    pub fn mul_all(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.unit, |acc, &x| self.mul(acc, x))
    }

    #[inline]
    pub fn leq(&self, s: usize, t: usize) -> bool {
        self.order[s].contains(t)
    }

    pub fn generators(&self) -> Option<&[(char, usize)]> {
        self.generators.as_deref()
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same monoid with the reversed order.
    pub fn dual(&self) -> Self {
        let n = self.size;
        let mut order: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for s in 0..n {
            for t in self.order[s].iter() {
                order[t].insert(s);
            }
        }
        OrderedMonoid {
            order,
            ..self.clone()
        }
    }

    /// Same monoid with the equality order.
    pub fn unordered(&self) -> Self {
        let n = self.size;
        let order = (0..n)
            .map(|s| {
                let mut b = BitSet::new(n);
                b.insert(s);
                b
            })
            .collect();
        OrderedMonoid {
            order,
            ..self.clone()
        }
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&s| self.is_idempotent(s)).collect()
    }

    /// `s^n` for the least `n ≥ 1` such that `s^n` is idempotent.
    pub fn idempotent_power(&self, s: usize) -> usize {
        let mut p = s;
        loop {
            if self.is_idempotent(p) {
                return p;
            }
            p = self.mul(p, s);
        }
    }

    fn check_idempotent(&self, e: usize) -> Result<()> {
        if e >= self.size || !self.is_idempotent(e) {
            return Err(Error::NotIdempotent(e));
        }
        Ok(())
    }

    pub fn right_ideal(&self, s: usize) -> BitSet {
        let mut b = BitSet::new(self.size);
        for x in self.elements() {
            b.insert(self.mul(s, x));
        }
        b
    }

    pub fn left_ideal(&self, s: usize) -> BitSet {
        let mut b = BitSet::new(self.size);
        for x in self.elements() {
            b.insert(self.mul(x, s));
        }
        b
    }

    pub fn two_sided_ideal(&self, s: usize) -> BitSet {
        let mut b = BitSet::new(self.size);
        for x in self.elements() {
            let xs = self.mul(x, s);
            for y in self.elements() {
                b.insert(self.mul(xs, y));
            }
        }
        b
    }

    pub fn r_related(&self, s: usize, t: usize) -> bool {
        self.right_ideal(s) == self.right_ideal(t)
    }

    pub fn l_related(&self, s: usize, t: usize) -> bool {
        self.left_ideal(s) == self.left_ideal(t)
    }

    pub fn is_j_trivial(&self) -> bool {
        let ideals: Vec<BitSet> = self.elements().map(|s| self.two_sided_ideal(s)).collect();
        (0..self.size).all(|s| (s + 1..self.size).all(|t| ideals[s] != ideals[t]))
    }

    pub fn is_aperiodic(&self) -> bool {
        self.elements().all(|s| {
            let mut p = s;
            for _ in 1..self.size {
                p = self.mul(p, s);
            }
            self.mul(p, s) == p
        })
    }

    /// Submonoid generated by `seed` (always contains the unit).
    pub fn generated_submonoid(&self, seed: impl IntoIterator<Item = usize>) -> BitSet {
        let seed: Vec<usize> = seed.into_iter().collect();
        let mut set = BitSet::new(self.size);
        set.insert(self.unit);
        let mut stack = vec![self.unit];
        while let Some(x) = stack.pop() {
            for &g in &seed {
                let y = self.mul(x, g);
                if set.insert(y) {
                    stack.push(y);
                }
            }
        }
        set
    }

    /// M_e computed from all factors of `e`.
    pub fn local_submonoid_by_factors(&self, e: usize) -> Result<BitSet> {
        self.check_idempotent(e)?;
        let factors = self
            .elements()
            .filter(|&s| self.two_sided_ideal(s).contains(e));
        Ok(self.generated_submonoid(factors))
    }

    /// M_e computed from the letters `a` with `e ∈ M h(a) M`; needs generators.
    pub fn local_submonoid_by_generators(&self, e: usize) -> Result<Option<BitSet>> {
        self.check_idempotent(e)?;
        let Some(gens) = &self.generators else {
            return Ok(None);
        };
        let seeds: Vec<usize> = gens
            .iter()
            .map(|&(_, g)| g)
            .filter(|&g| self.two_sided_ideal(g).contains(e))
            .collect();
        Ok(Some(self.generated_submonoid(seeds)))
    }

    /// The submonoid M_e generated by the factors of the idempotent `e`.
    pub fn local_submonoid(&self, e: usize) -> Result<BitSet> {
        match self.local_submonoid_by_generators(e)? {
            Some(b) => Ok(b),
            None => self.local_submonoid_by_factors(e),
        }
    }

    /// An idempotent `e` and `s ∈ M_e` with `ese ≠ e`, if any.
    pub fn da_violation(&self) -> Option<(usize, usize)> {
        for e in self.idempotents() {
            let me = self.local_submonoid(e).expect("idempotent");
            let bad = me.iter().find(|&s| self.mul(self.mul(e, s), e) != e);
            if let Some(s) = bad {
                return Some((e, s));
            }
        }
        None
    }

    pub fn is_in_da(&self) -> bool {
        self.da_violation().is_none()
    }

    /// DA via the full factor closure, ignoring generators.
    pub fn is_in_da_by_factors(&self) -> bool {
        self.idempotents().into_iter().all(|e| {
            let me = self.local_submonoid_by_factors(e).expect("idempotent");
            let ok = me.iter().all(|s| self.mul(self.mul(e, s), e) == e);
            ok
        })
    }

    /// DA via `eae = e` for generators `a` with `e ∈ MaM`; `None` without generators.
    pub fn is_in_da_by_generators(&self) -> Option<bool> {
        let gens = self.generators.as_ref()?;
        Some(self.idempotents().into_iter().all(|e| {
            gens.iter().all(|&(_, g)| {
                !self.two_sided_ideal(g).contains(e) || self.mul(self.mul(e, g), e) == e
            })
        }))
    }

    /// `ese ≤ e` for all `s ∈ M_e`.
    pub fn locally_top(&self, e: usize) -> Result<bool> {
        Ok(self.locally_top_violation(e)?.is_none())
    }

    /// Some `s ∈ M_e` with `ese ≰ e`.
    pub fn locally_top_violation(&self, e: usize) -> Result<Option<usize>> {
        let me = self.local_submonoid(e)?;
        let bad = me
            .iter()
            .find(|&s| !self.leq(self.mul(self.mul(e, s), e), e));
        Ok(bad)
    }

    /// `ese ≥ e` for all `s ∈ M_e`.
    pub fn locally_bottom(&self, e: usize) -> Result<bool> {
        let me = self.local_submonoid(e)?;
        let ok = me.iter().all(|s| self.leq(e, self.mul(self.mul(e, s), e)));
        Ok(ok)
    }

    pub fn satisfies_x_leq_one(&self) -> bool {
        self.elements().all(|s| self.leq(s, self.unit))
    }

    pub fn satisfies_x_geq_one(&self) -> bool {
        self.elements().all(|s| self.leq(self.unit, s))
    }

    /// Non-trivial order pairs `s < t`.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in self.elements() {
            for t in self.order[s].iter() {
                if s != t {
                    out.push((s, t));
                }
            }
        }
        out
    }

    /// J-classes (top first), each as a grid of R-class rows and L-class
    /// columns whose cells are H-classes.
    pub fn egg_box(&self) -> Vec<Vec<Vec<Vec<usize>>>> {
        let n = self.size;
        let j: Vec<BitSet> = self.elements().map(|s| self.two_sided_ideal(s)).collect();
        let r: Vec<BitSet> = self.elements().map(|s| self.right_ideal(s)).collect();
        let l: Vec<BitSet> = self.elements().map(|s| self.left_ideal(s)).collect();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            match classes.iter_mut().find(|c| j[c[0]] == j[s]) {
                Some(c) => c.push(s),
                None => classes.push(vec![s]),
            }
        }
        classes.sort_by_key(|c| (std::cmp::Reverse(j[c[0]].count()), c[0]));
        classes
            .into_iter()
            .map(|c| {
                let mut rows: Vec<usize> = Vec::new();
                let mut cols: Vec<usize> = Vec::new();
                for &s in &c {
                    if !rows.iter().any(|&x| r[x] == r[s]) {
                        rows.push(s);
                    }
                    if !cols.iter().any(|&x| l[x] == l[s]) {
                        cols.push(s);
                    }
                }
                rows.iter()
                    .map(|&x| {
                        cols.iter()
                            .map(|&y| {
                                c.iter()
                                    .copied()
                                    .filter(|&s| r[s] == r[x] && l[s] == l[y])
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    fn cell_label(&self, cell: &[usize]) -> String {
        cell.iter()
            .map(|&s| {
                if self.is_idempotent(s) {
                    format!("*{}", self.names[s])
                } else {
                    self.names[s].clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn egg_box_text(&self) -> String {
        let mut out = String::new();
        for (k, grid) in self.egg_box().iter().enumerate() {
            let labels: Vec<Vec<String>> = grid
                .iter()
                .map(|row| row.iter().map(|c| self.cell_label(c)).collect())
                .collect();
            let width = labels.iter().flatten().map(String::len).max().unwrap_or(1);
            let cols = labels.first().map_or(0, Vec::len);
            let rule = format!("+{}", format!("{}+", "-".repeat(width + 2)).repeat(cols));
            writeln!(out, "J-class {k}").unwrap();
            writeln!(out, "{rule}").unwrap();
            for row in &labels {
                let cells: Vec<String> = row.iter().map(|c| format!(" {c:<width$} ")).collect();
                writeln!(out, "|{}|", cells.join("|")).unwrap();
                writeln!(out, "{rule}").unwrap();
            }
        }
        out
    }

    pub fn egg_box_dot(&self) -> String {
        let mut out = String::from("digraph eggbox {\n  node [shape=plaintext];\n");
        let boxes = self.egg_box();
        for (k, grid) in boxes.iter().enumerate() {
            let mut html = String::from("<TABLE BORDER=\"1\" CELLBORDER=\"1\" CELLSPACING=\"0\">");
            for row in grid {
                html.push_str("<TR>");
                for cell in row {
                    write!(html, "<TD>{}</TD>", self.cell_label(cell)).unwrap();
                }
                html.push_str("</TR>");
            }
            html.push_str("</TABLE>");
            writeln!(out, "  j{k} [label=<{html}>];").unwrap();
        }
        for k in 1..boxes.len() {
            writeln!(out, "  j{} -> j{k} [style=invis];", k - 1).unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// Multiplication table, order and generators as plain text.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        let w = self.names.iter().map(String::len).max().unwrap_or(1).max(1);
        write!(out, "{:>w$} |", "").unwrap();
        for t in self.elements() {
            write!(out, " {:>w$}", self.names[t]).unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{}", "-".repeat((w + 1) * (self.size + 1) + 1)).unwrap();
        for s in self.elements() {
            write!(out, "{:>w$} |", self.names[s]).unwrap();
            for t in self.elements() {
                write!(out, " {:>w$}", self.names[self.mul(s, t)]).unwrap();
            }
            writeln!(out).unwrap();
        }
        let pairs: Vec<String> = self
            .order_pairs()
            .iter()
            .map(|&(s, t)| format!("{} < {}", self.names[s], self.names[t]))
            .collect();
        writeln!(
            out,
            "order: {}",
            if pairs.is_empty() {
                "equality".to_string()
            } else {
                pairs.join(", ")
            }
        )
        .unwrap();
        if let Some(g) = &self.generators {
            let gens: Vec<String> = g
                .iter()
                .map(|&(c, e)| format!("{c} -> {}", self.names[e]))
                .collect();
            writeln!(out, "generators: {}", gens.join(", ")).unwrap();
        }
        out
    }
}
