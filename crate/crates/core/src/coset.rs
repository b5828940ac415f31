//! Todd–Coxeter coset enumeration, HLT strategy.
//!
//! Relators are traced from every live coset in order, defining new cosets
//! wherever a scan gets stuck; coincidences are processed immediately. The
//! completed table is renumbered in first-defined order and checked post hoc
//! by [`CosetTable::verify`], which uses none of the enumeration state.

use std::fmt::Write as _;

use num_integer::Integer;
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{Letter, Word};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("coset table is incomplete")]
    Incomplete,
    #[error("element orders need an enumeration over the trivial subgroup")]
    NontrivialSubgroup,
    #[error("word mentions generator {0} outside the table")]
    ForeignLetter(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableStatus {
    Complete,
    /// Enumeration stopped at the coset bound; says nothing about finiteness.
    ExceededBound { max_cosets: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    rank: usize,
    /// `rows[c][col]` with `col = 2*gen + inverse`.
    rows: Vec<Vec<usize>>,
    status: TableStatus,
    trivial_subgroup: bool,
}

impl CosetTable {
    /// Builds a table from explicit rows, e.g. when reloading a bundle.
    pub fn from_rows(rank: usize, rows: Vec<Vec<usize>>, trivial_subgroup: bool) -> Self {
        CosetTable {
            rank,
            rows,
            status: TableStatus::Complete,
            trivial_subgroup,
        }
    }

    pub fn status(&self) -> TableStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == TableStatus::Complete
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn subgroup_is_trivial(&self) -> bool {
        self.trivial_subgroup
    }

    fn act(&self, coset: usize, w: &Word) -> usize {
        w.letters()
            .iter()
            .fold(coset, |c, l| self.rows[c][l.column()])
    }

    /// Checks that each column is a permutation inverse to its partner
    /// column, every relator fixes every coset, and every subgroup generator
    /// fixes coset 0.
    pub fn verify(&self, p: &Presentation, subgroup: &[Word]) -> Result<(), String> {
        if !self.is_complete() {
            return Err("table is not complete".into());
        }
        if self.rows.is_empty() {
            return Err("table has no cosets".into());
        }
        if p.rank() != self.rank {
            return Err("rank mismatch".into());
        }
        let n = self.rows.len();
        for (c, row) in self.rows.iter().enumerate() {
            if row.len() != 2 * self.rank {
                return Err(format!("row {c} has {} columns", row.len()));
            }
            for (col, &d) in row.iter().enumerate() {
                if d >= n {
                    return Err(format!("entry ({c}, {col}) = {d} out of range"));
                }
                if self.rows[d][col ^ 1] != c {
                    return Err(format!("column {col} is not inverse to column {}", col ^ 1));
                }
            }
        }
        for r in p.relators() {
            for c in 0..n {
                if self.act(c, r) != c {
                    return Err(format!("relator {} does not fix coset {c}", p.format(r)));
                }
            }
        }
        for h in subgroup {
            if self.act(0, h) != 0 {
                return Err(format!("subgroup generator {} moves coset 0", p.format(h)));
            }
        }
        Ok(())
    }

    /// Permutation of the cosets induced by right multiplication by `w`.
    pub fn permutation(&self, w: &Word) -> Result<Vec<usize>, CosetError> {
        if !self.is_complete() {
            return Err(CosetError::Incomplete);
        }
        if let Some(l) = w.letters().iter().find(|l| l.gen() >= self.rank) {
            return Err(CosetError::ForeignLetter(l.gen()));
        }
        Ok((0..self.rows.len()).map(|c| self.act(c, w)).collect())
    }

    pub fn to_csv(&self, symbols: &[char]) -> String {
        let mut out = String::from("coset");
        for &s in &symbols[..self.rank] {
            let _ = write!(out, ",{s},{}", s.to_ascii_uppercase());
        }
        out.push('\n');
        for (c, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{c}");
            for d in row {
                let _ = write!(out, ",{d}");
            }
            out.push('\n');
        }
        out
    }
}

/// Coset count when the table is complete over the trivial subgroup.
pub fn group_order(t: &CosetTable) -> Option<usize> {
    (t.is_complete() && t.trivial_subgroup).then_some(t.rows.len())
}

/// Order of the image of `w` in the regular representation.
pub fn element_order(t: &CosetTable, w: &Word) -> Result<u64, CosetError> {
    if !t.trivial_subgroup {
        return Err(CosetError::NontrivialSubgroup);
    }
    let perm = t.permutation(w)?;
    let mut seen = vec![false; perm.len()];
    let mut order: u64 = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            c = perm[c];
            len += 1;
        }
        order = order.lcm(&len);
    }
    Ok(order)
}

struct Enumerator {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    max_cosets: usize,
}

struct Overflow;

impl Enumerator {
    fn new(rank: usize, max_cosets: usize) -> Self {
        let cols = 2 * rank;
        Enumerator {
            cols,
            table: vec![NONE; cols],
            parent: vec![0],
            max_cosets,
        }
    }

    fn allocated(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, v: usize) {
        self.table[c * self.cols + x] = v;
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), Overflow> {
        if self.allocated() >= self.max_cosets {
            return Err(Overflow);
        }
        let d = self.allocated();
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut k = c;
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (keep, drop) = (k.min(l), k.max(l));
        self.parent[drop] = keep;
        queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                self.set(f, x ^ 1, NONE);
                let (e1, f1) = (self.rep(e), self.rep(f));
                let t = self.get(e1, x);
                if t != NONE {
                    self.merge(f1, t, &mut queue);
                    continue;
                }
                let t = self.get(f1, x ^ 1);
                if t != NONE {
                    self.merge(e1, t, &mut queue);
                    continue;
                }
                self.set(e1, x, f1);
                self.set(f1, x ^ 1, e1);
            }
        }
    }

    /// Traces `word` from coset `c`, defining cosets until the trace closes.
    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<(), Overflow> {
        if word.is_empty() {
            return Ok(());
        }
        let at = |k: isize| word[k as usize];
        let (mut f, mut b) = (c, c);
        let mut i: isize = 0;
        let mut j: isize = word.len() as isize - 1;
        loop {
            while i <= j && self.get(f, at(i)) != NONE {
                f = self.get(f, at(i));
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, at(j) ^ 1) != NONE {
                b = self.get(b, at(j) ^ 1);
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                // deduction
                self.set(f, at(i), b);
                self.set(b, at(i) ^ 1, f);
                return Ok(());
            }
            self.define(f, at(i))?;
        }
    }
}

fn columns(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l: &Letter| l.column()).collect()
}

pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> CosetTable {
    let rank = p.rank();
    let trivial_subgroup = subgroup.iter().all(Word::is_identity);
    let exceeded = CosetTable {
        rank,
        rows: Vec::new(),
        status: TableStatus::ExceededBound { max_cosets },
        trivial_subgroup,
    };
    if max_cosets == 0 {
        return exceeded;
    }
    let relators: Vec<Vec<usize>> = p.relators().iter().map(columns).collect();
    let gens: Vec<Vec<usize>> = subgroup.iter().map(columns).collect();
    let mut e = Enumerator::new(rank, max_cosets);

    let run = |e: &mut Enumerator| -> Result<(), Overflow> {
        for g in &gens {
            e.scan_and_fill(0, g)?;
        }
        let mut c = 0;
        while c < e.allocated() {
            for r in &relators {
                if !e.alive(c) {
                    break;
                }
                e.scan_and_fill(c, r)?;
            }
            if e.alive(c) {
                for x in 0..e.cols {
                    if e.get(c, x) == NONE {
                        e.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    };
    if run(&mut e).is_err() {
        return exceeded;
    }

    let live: Vec<usize> = (0..e.allocated()).filter(|&c| e.alive(c)).collect();
    let mut renumber = vec![NONE; e.allocated()];
    for (new, &old) in live.iter().enumerate() {
        renumber[old] = new;
    }
    let rows = live
        .iter()
        .map(|&c| (0..e.cols).map(|x| renumber[e.get(c, x)]).collect())
        .collect();
    CosetTable {
        rank,
        rows,
        status: TableStatus::Complete,
        trivial_subgroup,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_of(gens: &str, rels: &[&str]) -> Option<usize> {
        let p = Presentation::parse(gens, rels).unwrap();
        let t = todd_coxeter(&p, &[], DEFAULT_MAX_COSETS);
        if t.is_complete() {
            t.verify(&p, &[]).unwrap();
        }
        group_order(&t)
    }

    #[test]
    fn small_groups() {
        assert_eq!(order_of("a", &["aaaaa"]), Some(5));
        assert_eq!(order_of("ab", &["aa", "bb", "abab"]), Some(4));
        assert_eq!(order_of("a", &["a"]), Some(1));
        assert_eq!(order_of("ab", &["aa", "bbb", "abab"]), Some(6));
        assert_eq!(order_of("ab", &["aaaa", "aaBB", "Baba"]), Some(8));
    }

    #[test]
    fn v2503_peripheral_quotient() {
        let p = Presentation::parse("ab", &["aaBBaBBaabaababaab", "BBaBBaB", "AABAAb"]).unwrap();
        let t = todd_coxeter(&p, &[], DEFAULT_MAX_COSETS);
        t.verify(&p, &[]).unwrap();
        assert_eq!(group_order(&t), Some(10));
        let al = p.alphabet();
        assert_eq!(element_order(&t, &al.parse_word("BBa").unwrap()), Ok(10));
        assert_eq!(element_order(&t, &al.parse_word("a").unwrap()), Ok(2));
        assert_eq!(element_order(&t, &Word::identity()), Ok(1));
    }

    #[test]
    fn subgroup_index() {
        // <a> has index 3 in S3
        let p = Presentation::parse("ab", &["aa", "bbb", "abab"]).unwrap();
        let h = vec![p.alphabet().parse_word("a").unwrap()];
        let t = todd_coxeter(&p, &h, 1000);
        t.verify(&p, &h).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(group_order(&t), None);
        assert_eq!(element_order(&t, &h[0]), Err(CosetError::NontrivialSubgroup));
    }

    #[test]
    fn infinite_group_exceeds_bound() {
        let p = Presentation::parse("ab", &["abAB"]).unwrap();
        let t = todd_coxeter(&p, &[], 500);
        assert_eq!(t.status(), TableStatus::ExceededBound { max_cosets: 500 });
        assert_eq!(group_order(&t), None);
        let w = p.alphabet().parse_word("a").unwrap();
        assert_eq!(element_order(&t, &w), Err(CosetError::Incomplete));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let p = Presentation::parse("ab", &["aaBBaBBaabaababaab", "BBaBBaB", "AABAAb"]).unwrap();
        let a = todd_coxeter(&p, &[], DEFAULT_MAX_COSETS);
        let b = todd_coxeter(&p, &[], DEFAULT_MAX_COSETS);
        assert_eq!(a, b);
        assert_eq!(a.to_csv(&['a', 'b']), b.to_csv(&['a', 'b']));
    }

    #[test]
    fn csv_layout() {
        let p = Presentation::parse("a", &["aa"]).unwrap();
        let t = todd_coxeter(&p, &[], 10);
        assert_eq!(t.to_csv(&['a']), "coset,a,A\n0,1,1\n1,0,0\n");
    }

    #[test]
    fn verify_rejects_broken_tables() {
        let p = Presentation::parse("a", &["aaa"]).unwrap();
        let t = CosetTable::from_rows(1, vec![vec![1, 2], vec![2, 0], vec![0, 1]], true);
        assert!(t.verify(&p, &[]).is_ok());
        let bad = CosetTable::from_rows(1, vec![vec![1, 2], vec![0, 0], vec![0, 1]], true);
        assert!(bad.verify(&p, &[]).is_err());
        let wrong_group = Presentation::parse("a", &["aa"]).unwrap();
        assert!(t.verify(&wrong_group, &[]).is_err());
    }
}
