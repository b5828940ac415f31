use std::collections::HashMap;

use super::{Derived, Fact, Factor, KnowledgeBase, Node, OrderError, Rule, Sign, SignAtom, ONE};

/// Facts in derivation order; premises always precede their conclusions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignState {
    log: Vec<Derived>,
    index: HashMap<Fact, usize>,
}

impl SignState {
    pub fn log(&self) -> &[Derived] {
        &self.log
    }

    pub fn contains(&self, f: Fact) -> bool {
        self.index.contains_key(&f)
    }

    pub fn sign_of(&self, node: Node) -> Option<Sign> {
        if self.contains(Fact::sign(node, Sign::Pos)) {
            Some(Sign::Pos)
        } else if self.contains(Fact::sign(node, Sign::Neg)) {
            Some(Sign::Neg)
        } else {
            None
        }
    }

    /// Derived sign facts other than hypotheses and case assumptions.
    pub fn derived_signs(&self) -> Vec<SignAtom> {
        self.log
            .iter()
            .filter(|d| !matches!(d.rule, Rule::Hypothesis | Rule::CaseSplit))
            .filter_map(|d| d.fact.as_sign())
            .map(|(n, s)| SignAtom::new(n, s))
            .collect()
    }

    pub fn signs(&self) -> Vec<SignAtom> {
        self.log
            .iter()
            .filter_map(|d| d.fact.as_sign())
            .map(|(n, s)| SignAtom::new(n, s))
            .collect()
    }

    pub(crate) fn from_log(log: Vec<Derived>) -> Self {
        let index = log.iter().enumerate().map(|(i, d)| (d.fact, i)).collect();
        SignState { log, index }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClashRule {
    /// `u < v` and `v < u`.
    Asymmetry,
    /// R3: identity `index` would have every factor of one sign.
    Forbidden(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clash {
    pub rule: ClashRule,
    pub premises: Vec<Fact>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagation {
    Consistent(SignState),
    Contradiction { state: SignState, clash: Clash },
}

impl Propagation {
    pub fn state(&self) -> &SignState {
        match self {
            Propagation::Consistent(s) => s,
            Propagation::Contradiction { state, .. } => state,
        }
    }

    pub fn is_contradiction(&self) -> bool {
        matches!(self, Propagation::Contradiction { .. })
    }
}

struct Engine<'a> {
    kb: &'a KnowledgeBase,
    state: SignState,
}

impl Engine<'_> {
    /// Adds a fact unless already known. `Err` carries the clash.
    fn add(&mut self, fact: Fact, rule: Rule, premises: Vec<Fact>) -> Result<bool, Clash> {
        if fact.less == fact.greater {
            // only reachable through transitivity over u < v, v < u
            return Err(Clash {
                rule: ClashRule::Asymmetry,
                premises,
            });
        }
        if self.state.contains(fact) {
            return Ok(false);
        }
        if self.state.contains(fact.reversed()) {
            // Record the conclusion so the clash premises are all in the log.
            self.push(fact, rule, premises);
            return Err(Clash {
                rule: ClashRule::Asymmetry,
                premises: vec![fact, fact.reversed()],
            });
        }
        self.push(fact, rule, premises);
        Ok(true)
    }

    fn push(&mut self, fact: Fact, rule: Rule, premises: Vec<Fact>) {
        self.state.index.insert(fact, self.state.log.len());
        self.state.log.push(Derived {
            fact,
            rule,
            premises,
        });
    }

    fn sign(&self, n: Node) -> Option<Sign> {
        self.state.sign_of(n)
    }

    /// Sign facts of the distinct nodes among `factors`, in first-occurrence
    /// order, or `None` if one is undetermined.
    fn premises_for(&self, factors: &[Factor]) -> Option<Vec<Fact>> {
        let mut nodes: Vec<Node> = Vec::new();
        for f in factors {
            if !nodes.contains(&f.node) {
                nodes.push(f.node);
            }
        }
        nodes
            .into_iter()
            .map(|n| self.sign(n).map(|s| Fact::sign(n, s)))
            .collect()
    }

    fn uniform_sign(&self, factors: &[Factor]) -> Option<Sign> {
        let mut common = None;
        for f in factors {
            let s = f.effective(self.sign(f.node)?);
            match common {
                None => common = Some(s),
                Some(c) if c != s => return None,
                _ => {}
            }
        }
        common
    }

    fn round(&mut self) -> Result<bool, Clash> {
        let mut changed = false;
        for (idx, id) in self.kb.identities().iter().enumerate() {
            // R2
            if let (Some(lhs), Some(g)) = (id.lhs, id.inversion()) {
                if let Some(s) = self.sign(g) {
                    changed |= self.add(Fact::sign(lhs, s.flip()), Rule::Inverse(idx), vec![Fact::sign(g, s)])?;
                } else if let Some(s) = self.sign(lhs) {
                    changed |= self.add(Fact::sign(g, s.flip()), Rule::Inverse(idx), vec![Fact::sign(lhs, s)])?;
                }
            }
            // R1
            if let Some(lhs) = id.lhs {
                if let Some(s) = self.uniform_sign(&id.rhs) {
                    let premises = self.premises_for(&id.rhs).expect("all determined");
                    changed |= self.add(Fact::sign(lhs, s), Rule::Product(idx), premises)?;
                }
            }
            // R3
            let relation = id.relation();
            if self.uniform_sign(&relation).is_some() {
                let premises = self.premises_for(&relation).expect("all determined");
                return Err(Clash {
                    rule: ClashRule::Forbidden(idx),
                    premises,
                });
            }
            if let Some((node, forced)) = self.forcing(&relation) {
                let others: Vec<Factor> = relation.iter().copied().filter(|f| f.node != node).collect();
                let premises = self.premises_for(&others).expect("all determined");
                changed |= self.add(Fact::sign(node, forced), Rule::Forced(idx), premises)?;
            }
            // R4
            if let (Some(q), Some((g, h))) = (id.lhs, id.left_quotient()) {
                if let Some(s) = self.sign(q) {
                    let fact = match s {
                        Sign::Neg => Fact { less: h, greater: g },
                        Sign::Pos => Fact { less: g, greater: h },
                    };
                    changed |= self.add(fact, Rule::LeftInvariance(idx), vec![Fact::sign(q, s)])?;
                }
            }
        }
        changed |= self.close_transitively()?;
        Ok(changed)
    }

    /// R3 forcing: the determined factors share a sign and the rest are
    /// occurrences of one node in one orientation.
    fn forcing(&self, relation: &[Factor]) -> Option<(Node, Sign)> {
        let mut open: Option<Factor> = None;
        let mut common: Option<Sign> = None;
        for f in relation {
            match self.sign(f.node) {
                Some(s) => {
                    let e = f.effective(s);
                    if common.is_some_and(|c| c != e) {
                        return None;
                    }
                    common = Some(e);
                }
                None => match open {
                    None => open = Some(*f),
                    Some(o) if o == *f => {}
                    Some(_) => return None,
                },
            }
        }
        let (open, common) = (open?, common?);
        // factor sign must be the opposite of the common sign
        let node_sign = if open.inverse { common } else { common.flip() };
        Some((open.node, node_sign))
    }

    fn close_transitively(&mut self) -> Result<bool, Clash> {
        let mut changed = false;
        loop {
            let mut added = false;
            let snapshot: Vec<Fact> = self.state.log.iter().map(|d| d.fact).collect();
            for &uv in &snapshot {
                for &vw in &snapshot {
                    if uv.greater != vw.less {
                        continue;
                    }
                    let uw = Fact {
                        less: uv.less,
                        greater: vw.greater,
                    };
                    added |= self.add(uw, Rule::Transitivity, vec![uv, vw])?;
                }
            }
            if !added {
                break;
            }
            changed = true;
        }
        Ok(changed)
    }
}

/// Least fixed point of the rules from `hypotheses`; a contradiction is a
/// result, not an error.
pub fn propagate(kb: &KnowledgeBase, hypotheses: &[SignAtom]) -> Result<Propagation, OrderError> {
    propagate_with(kb, hypotheses, &[])
}

pub(crate) fn propagate_with(
    kb: &KnowledgeBase,
    hypotheses: &[SignAtom],
    assumptions: &[SignAtom],
) -> Result<Propagation, OrderError> {
    for a in hypotheses.iter().chain(assumptions) {
        if a.subject == ONE || a.subject >= kb.node_count() {
            return Err(OrderError::Unregistered(format!("node {}", a.subject)));
        }
    }
    let mut engine = Engine {
        kb,
        state: SignState::default(),
    };
    let seeded = hypotheses
        .iter()
        .map(|h| (h, Rule::Hypothesis))
        .chain(assumptions.iter().map(|a| (a, Rule::CaseSplit)));
    for (atom, rule) in seeded {
        if let Err(clash) = engine.add(atom.fact(), rule, Vec::new()) {
            return Ok(Propagation::Contradiction {
                state: engine.state,
                clash,
            });
        }
    }
    loop {
        match engine.round() {
            Ok(true) => {}
            Ok(false) => return Ok(Propagation::Consistent(engine.state)),
            Err(clash) => {
                return Ok(Propagation::Contradiction {
                    state: engine.state,
                    clash,
                })
            }
        }
    }
}
