//! Sign inference in a left-ordered group.
//!
//! Facts are strict comparisons `u < v` between nodes of a finite registry of
//! named words plus the identity `1`; `1 < w` means `w` is positive and
//! `w < 1` means it is negative. Rules:
//!
//! * **R1** a factorization whose factors all have one sign gives the
//!   product that sign;
//! * **R2** `w = g^-1` flips the sign of `g`;
//! * **R3** an identity `1 = u1 ... uk` can never have all factors of one
//!   sign, which either closes a branch or forces the sign of the one factor
//!   left undetermined;
//! * **R4** left invariance: from the sign of `g^-1 h` conclude `h < g` or
//!   `g < h`;
//! * transitivity of `<`.
//!
//! Every derived fact records its rule and premises so that a proof tree can
//! be re-checked by [`verify_tree`] without running the engine.

mod propagate;
mod tree;
mod verify;
mod wire;

use std::fmt;

use thiserror::Error;

pub use propagate::{propagate, Clash, ClashRule, Propagation, SignState};
pub use tree::{case_split_prove, parametric_close, Branch, BranchOutcome, Failure, Goal, ParametricFact, ProofTree};
pub use verify::verify_tree;
pub use wire::{AtomWire, BranchWire, GoalWire, OutcomeWire, StepWire, TreeWire};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("{0:?} is not a registered word")]
    Unregistered(String),
    #[error("{0:?} is registered twice")]
    DuplicateName(String),
    #[error("identity {0:?} has an empty right-hand side")]
    EmptyIdentity(String),
    #[error("precondition unmet: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Pos => "POS",
            Sign::Neg => "NEG",
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "POS" => Some(Sign::Pos),
            "NEG" => Some(Sign::Neg),
            _ => None,
        }
    }
}

/// Node of the comparison digraph: `0` is the identity, `i + 1` is
/// registry entry `i`.
pub type Node = usize;

pub const ONE: Node = 0;

/// `less < greater`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fact {
    pub less: Node,
    pub greater: Node,
}

impl Fact {
    pub fn sign(subject: Node, sign: Sign) -> Fact {
        match sign {
            Sign::Pos => Fact {
                less: ONE,
                greater: subject,
            },
            Sign::Neg => Fact {
                less: subject,
                greater: ONE,
            },
        }
    }

    /// `Some((subject, sign))` when this is a sign fact.
    pub fn as_sign(self) -> Option<(Node, Sign)> {
        if self.less == ONE && self.greater != ONE {
            Some((self.greater, Sign::Pos))
        } else if self.greater == ONE && self.less != ONE {
            Some((self.less, Sign::Neg))
        } else {
            None
        }
    }

    pub fn reversed(self) -> Fact {
        Fact {
            less: self.greater,
            greater: self.less,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignAtom {
    pub subject: Node,
    pub sign: Sign,
}

impl SignAtom {
    pub fn new(subject: Node, sign: Sign) -> Self {
        SignAtom { subject, sign }
    }

    pub fn fact(self) -> Fact {
        Fact::sign(self.subject, self.sign)
    }
}

/// A registry entry, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub node: Node,
    pub inverse: bool,
}

impl Factor {
    /// Sign of this factor given the sign of its node.
    pub fn effective(self, node_sign: Sign) -> Sign {
        if self.inverse {
            node_sign.flip()
        } else {
            node_sign
        }
    }
}

/// Where an identity in the knowledge base comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Holds by how the registered words are defined.
    Definition,
    /// `1 = product` where the product expands to a cyclic conjugate of a
    /// relator or its inverse.
    Relator,
    /// Holds by a replayed derivation certificate, referenced by label.
    Certificate(String),
}

/// `lhs = f1 f2 ... fk`, with `lhs = None` meaning the identity element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub label: String,
    pub lhs: Option<Node>,
    pub rhs: Vec<Factor>,
    pub provenance: Provenance,
}

impl Identity {
    /// Factors of the equivalent relation `1 = lhs^-1 f1 ... fk`.
    pub fn relation(&self) -> Vec<Factor> {
        let mut out = Vec::with_capacity(self.rhs.len() + 1);
        if let Some(l) = self.lhs {
            out.push(Factor {
                node: l,
                inverse: true,
            });
        }
        out.extend(self.rhs.iter().copied());
        out
    }

    /// `Some((g, h))` when the identity reads `lhs = g^-1 h`.
    pub fn left_quotient(&self) -> Option<(Node, Node)> {
        match (self.lhs, self.rhs.as_slice()) {
            (Some(_), [g, h]) if g.inverse && !h.inverse => Some((g.node, h.node)),
            _ => None,
        }
    }

    /// `Some(g)` when the identity reads `lhs = g^-1`.
    pub fn inversion(&self) -> Option<Node> {
        match (self.lhs, self.rhs.as_slice()) {
            (Some(_), [g]) if g.inverse => Some(g.node),
            _ => None,
        }
    }
}

/// Registered words and the identities relating them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    names: Vec<String>,
    identities: Vec<Identity>,
}

impl KnowledgeBase {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, OrderError> {
        let mut out: Vec<String> = Vec::new();
        for n in names {
            let n = n.as_ref().to_string();
            if n == "1" || out.contains(&n) {
                return Err(OrderError::DuplicateName(n));
            }
            out.push(n);
        }
        Ok(KnowledgeBase {
            names: out,
            identities: Vec::new(),
        })
    }

    pub fn node(&self, name: &str) -> Result<Node, OrderError> {
        if name == "1" {
            return Ok(ONE);
        }
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i + 1)
            .ok_or_else(|| OrderError::Unregistered(name.to_string()))
    }

    pub fn name(&self, node: Node) -> &str {
        if node == ONE {
            "1"
        } else {
            &self.names[node - 1]
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of nodes including `1`.
    pub fn node_count(&self) -> usize {
        self.names.len() + 1
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn identity_index(&self, label: &str) -> Option<usize> {
        self.identities.iter().position(|i| i.label == label)
    }

    /// Adds `lhs = rhs`; `lhs = "1"` for relations. Factors are
    /// `(name, inverted)`.
    pub fn add_identity(
        &mut self,
        label: &str,
        lhs: &str,
        rhs: &[(&str, bool)],
        provenance: Provenance,
    ) -> Result<(), OrderError> {
        if rhs.is_empty() {
            return Err(OrderError::EmptyIdentity(label.to_string()));
        }
        let lhs_node = self.node(lhs)?;
        let rhs = rhs
            .iter()
            .map(|(n, inv)| {
                let node = self.node(n)?;
                if node == ONE {
                    return Err(OrderError::Unregistered("1".into()));
                }
                Ok(Factor {
                    node,
                    inverse: *inv,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.identities.push(Identity {
            label: label.to_string(),
            lhs: (lhs_node != ONE).then_some(lhs_node),
            rhs,
            provenance,
        });
        Ok(())
    }

    pub fn atom(&self, name: &str, sign: Sign) -> Result<SignAtom, OrderError> {
        let n = self.node(name)?;
        if n == ONE {
            return Err(OrderError::Precondition("the identity has no sign".into()));
        }
        Ok(SignAtom::new(n, sign))
    }

    pub fn fact_string(&self, f: Fact) -> String {
        format!("{} < {}", self.name(f.less), self.name(f.greater))
    }

    pub fn atom_string(&self, a: SignAtom) -> String {
        format!("{} {}", self.name(a.subject), a.sign.name())
    }

    pub fn identity_string(&self, id: &Identity) -> String {
        let lhs = id.lhs.map_or("1".to_string(), |l| self.name(l).to_string());
        let rhs: Vec<String> = id
            .rhs
            .iter()
            .map(|f| {
                if f.inverse {
                    format!("{}^-1", self.name(f.node))
                } else {
                    self.name(f.node).to_string()
                }
            })
            .collect();
        format!("{lhs} = {}", rhs.join(" "))
    }
}

/// Rule that produced a fact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Hypothesis,
    CaseSplit,
    /// R1 on identity `index`.
    Product(usize),
    /// R2 on identity `index`.
    Inverse(usize),
    /// R3 forcing on identity `index`.
    Forced(usize),
    /// R4 on identity `index`.
    LeftInvariance(usize),
    Transitivity,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Hypothesis => "hypothesis",
            Rule::CaseSplit => "case",
            Rule::Product(_) => "R1",
            Rule::Inverse(_) => "R2",
            Rule::Forced(_) => "R3",
            Rule::LeftInvariance(_) => "R4",
            Rule::Transitivity => "trans",
        }
    }

    pub fn identity(&self) -> Option<usize> {
        match self {
            Rule::Product(i) | Rule::Inverse(i) | Rule::Forced(i) | Rule::LeftInvariance(i) => {
                Some(*i)
            }
            _ => None,
        }
    }

    pub fn from_tag(tag: &str, identity: Option<usize>) -> Option<Rule> {
        Some(match (tag, identity) {
            ("hypothesis", None) => Rule::Hypothesis,
            ("case", None) => Rule::CaseSplit,
            ("trans", None) => Rule::Transitivity,
            ("R1", Some(i)) => Rule::Product(i),
            ("R2", Some(i)) => Rule::Inverse(i),
            ("R3", Some(i)) => Rule::Forced(i),
            ("R4", Some(i)) => Rule::LeftInvariance(i),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derived {
    pub fact: Fact,
    pub rule: Rule,
    pub premises: Vec<Fact>,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn v2503_kb() -> KnowledgeBase {
        crate::manifold::Manifold::bundled().kb
    }
}
