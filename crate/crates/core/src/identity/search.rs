//! Iterative-deepening search for relator-insertion derivations.
//!
//! Intermediate levels insert each cyclic rotation of each relator (and its
//! inverse) at each position of the current word; a rotation is recorded as
//! the conjugator that produces it. The last level is decided exactly: the
//! current word becomes trivial after one insertion iff its cyclic core is a
//! rotation of a relator core, and the conjugator is then computed rather
//! than enumerated.

use std::collections::HashSet;

use super::{DerivationCertificate, DerivationStep, IdentityError};
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of relator insertions.
    pub depth: usize,
    /// Maximum conjugator length in any step.
    pub conjugator_length: usize,
    /// Maximum number of intermediate words expanded.
    pub max_nodes: usize,
}

impl SearchBudget {
    pub const DEFAULT_MAX_NODES: usize = 2_000_000;

    pub fn new(depth: usize, conjugator_length: usize) -> Self {
        SearchBudget {
            depth,
            conjugator_length,
            max_nodes: Self::DEFAULT_MAX_NODES,
        }
    }

    /// Conjugator budget `max |relator| + |lhs rhs^-1|`, which covers every
    /// single insertion that can cancel the whole target.
    pub fn auto_conjugator_length(p: &Presentation, lhs: &Word, rhs: &Word) -> usize {
        let rel = p.relators().iter().map(Word::len).max().unwrap_or(0);
        rel + lhs.compose(&rhs.inverse()).len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFound {
    /// Every derivation up to `depth` insertions was ruled out.
    DepthExhausted { depth: usize },
    /// The node budget ran out before the depth budget did.
    NodeLimit { nodes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search {
    Found(DerivationCertificate),
    NotFound(NotFound),
}

impl Search {
    pub fn certificate(&self) -> Option<&DerivationCertificate> {
        match self {
            Search::Found(c) => Some(c),
            Search::NotFound(_) => None,
        }
    }
}

/// One cyclic rotation of `relator^exponent`, realised as a conjugate.
struct Insertion {
    relator_index: usize,
    exponent: i8,
    conjugator: Word,
    word: Word,
}

struct RelatorCore {
    relator_index: usize,
    exponent: i8,
    /// `relator^exponent = outer * core * outer^-1`
    outer: Word,
    core: Word,
}

struct Searcher<'a> {
    presentation: &'a Presentation,
    budget: SearchBudget,
    cores: Vec<RelatorCore>,
    nodes: usize,
}

pub fn find_derivation(
    p: &Presentation,
    lhs: &Word,
    rhs: &Word,
    budget: &SearchBudget,
) -> Result<Search, IdentityError> {
    p.alphabet().check(lhs)?;
    p.alphabet().check(rhs)?;
    let target = lhs.compose(&rhs.inverse());
    let mut searcher = Searcher::new(p, *budget);
    for depth in 0..=budget.depth {
        let mut visited: Vec<HashSet<Word>> = vec![HashSet::new(); depth + 1];
        match searcher.solve(&target, depth, &mut visited) {
            Ok(Some(mut steps)) => {
                steps.reverse();
                return Ok(Search::Found(DerivationCertificate {
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                    steps,
                }));
            }
            Ok(None) => {}
            Err(limit) => return Ok(Search::NotFound(limit)),
        }
    }
    Ok(Search::NotFound(NotFound::DepthExhausted {
        depth: budget.depth,
    }))
}

impl<'a> Searcher<'a> {
    fn new(presentation: &'a Presentation, budget: SearchBudget) -> Self {
        let mut cores = Vec::new();
        for (i, r) in presentation.relators().iter().enumerate() {
            for exponent in [1i8, -1] {
                let power = if exponent == 1 { r.clone() } else { r.inverse() };
                let (core, outer) = power.cyclic_reduce();
                if core.is_identity() {
                    continue;
                }
                cores.push(RelatorCore {
                    relator_index: i,
                    exponent,
                    outer,
                    core,
                });
            }
        }
        Searcher {
            presentation,
            budget,
            cores,
            nodes: 0,
        }
    }

    /// Rotations of every relator core, conjugators in short-lex order.
    fn insertions(&self) -> Vec<Insertion> {
        let mut out = Vec::new();
        for rc in &self.cores {
            let mut seen = HashSet::new();
            let mut here = Vec::new();
            for k in 0..rc.core.len() {
                let rotated = rc.core.rotation(k);
                if !seen.insert(rotated.clone()) {
                    continue;
                }
                // rotation k = s^-1 core s with s = core[..k]
                let s = rc.core.prefix(k);
                let conjugator = s.inverse().compose(&rc.outer.inverse());
                if conjugator.len() > self.budget.conjugator_length {
                    continue;
                }
                here.push(Insertion {
                    relator_index: rc.relator_index,
                    exponent: rc.exponent,
                    conjugator,
                    word: rotated,
                });
            }
            here.sort_by(|a, b| a.conjugator.shortlex_cmp(&b.conjugator));
            out.extend(here);
        }
        out
    }

    /// Steps are returned last-first.
    fn solve(
        &mut self,
        w: &Word,
        remaining: usize,
        visited: &mut [HashSet<Word>],
    ) -> Result<Option<Vec<DerivationStep>>, NotFound> {
        if remaining == 0 {
            return Ok(w.is_identity().then(Vec::new));
        }
        if w.is_identity() {
            // Trivial already; a shallower level would have found it.
            return Ok(None);
        }
        if remaining == 1 {
            return Ok(self.last_step(w).map(|s| vec![s]));
        }
        let insertions = self.insertions();
        for position in 0..=w.len() {
            for ins in &insertions {
                self.nodes += 1;
                if self.nodes > self.budget.max_nodes {
                    return Err(NotFound::NodeLimit {
                        nodes: self.budget.max_nodes,
                    });
                }
                let next = w.insert_at(position, &ins.word);
                if next.is_identity() || !visited[remaining - 1].insert(next.clone()) {
                    continue;
                }
                if let Some(mut steps) = self.solve(&next, remaining - 1, visited)? {
                    steps.push(DerivationStep {
                        position,
                        conjugator: ins.conjugator.clone(),
                        relator_index: ins.relator_index,
                        exponent: ins.exponent,
                    });
                    return Ok(Some(steps));
                }
            }
        }
        Ok(None)
    }

    /// A single insertion that kills `w`, with the shortest conjugator.
    fn last_step(&self, w: &Word) -> Option<DerivationStep> {
        let winv = w.inverse();
        let (core, g) = winv.cyclic_reduce();
        let mut best: Option<DerivationStep> = None;
        for rc in &self.cores {
            if rc.core.len() != core.len() {
                continue;
            }
            for k in 0..rc.core.len() {
                if rc.core.rotation(k) != core {
                    continue;
                }
                // w^-1 = g s^-1 outer^-1 r^e outer s g^-1, s = core[..k];
                // inserting at p needs u = w[..p]^-1 g s^-1 outer^-1.
                let tail = g
                    .compose(&rc.core.prefix(k).inverse())
                    .compose(&rc.outer.inverse());
                for position in 0..=w.len() {
                    let u = w.prefix(position).inverse().compose(&tail);
                    if u.len() > self.budget.conjugator_length {
                        continue;
                    }
                    let better = best
                        .as_ref()
                        .is_none_or(|b| u.shortlex_cmp(&b.conjugator).is_lt());
                    if better {
                        best = Some(DerivationStep {
                            position,
                            conjugator: u,
                            relator_index: rc.relator_index,
                            exponent: rc.exponent,
                        });
                    }
                }
            }
        }
        debug_assert!(best.as_ref().is_none_or(|s| {
            let r = &self.presentation.relators()[s.relator_index];
            let r = if s.exponent == 1 { r.clone() } else { r.inverse() };
            w.insert_at(s.position, &r.conjugate_by(&s.conjugator)).is_identity()
        }));
        best
    }
}
