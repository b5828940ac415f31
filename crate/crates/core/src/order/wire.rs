//! Name-based serialized form of a proof tree.

use serde::{Deserialize, Serialize};

use super::propagate::{Clash, ClashRule, SignState};
use super::tree::{Branch, BranchOutcome, Goal, ProofTree};
use super::{Derived, Fact, KnowledgeBase, Rule, Sign, SignAtom};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomWire {
    pub word: String,
    pub sign: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GoalWire {
    Sign { word: String, sign: String },
    PowerFamily { base: String, tail: String, sign: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepWire {
    /// `[less, greater]`
    pub fact: [String; 2],
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    pub premises: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OutcomeWire {
    Contradiction {
        rule: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        identity: Option<String>,
        premises: Vec<[String; 2]>,
    },
    Survived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchWire {
    pub assumptions: Vec<AtomWire>,
    pub steps: Vec<StepWire>,
    pub outcome: OutcomeWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeWire {
    pub hypotheses: Vec<AtomWire>,
    pub split: Vec<String>,
    pub nontriviality: Vec<String>,
    pub goal: GoalWire,
    pub branches: Vec<BranchWire>,
    pub vacuous: bool,
}

fn fact_wire(kb: &KnowledgeBase, f: Fact) -> [String; 2] {
    [kb.name(f.less).to_string(), kb.name(f.greater).to_string()]
}

fn atom_wire(kb: &KnowledgeBase, a: SignAtom) -> AtomWire {
    AtomWire {
        word: kb.name(a.subject).to_string(),
        sign: a.sign.name().to_string(),
    }
}

fn sign(s: &str) -> Result<Sign, String> {
    Sign::parse(s).ok_or_else(|| format!("bad sign {s:?}"))
}

fn node(kb: &KnowledgeBase, n: &str) -> Result<usize, String> {
    kb.node(n).map_err(|e| e.to_string())
}

fn fact(kb: &KnowledgeBase, f: &[String; 2]) -> Result<Fact, String> {
    Ok(Fact {
        less: node(kb, &f[0])?,
        greater: node(kb, &f[1])?,
    })
}

fn atom(kb: &KnowledgeBase, a: &AtomWire) -> Result<SignAtom, String> {
    kb.atom(&a.word, sign(&a.sign)?).map_err(|e| e.to_string())
}

fn identity(kb: &KnowledgeBase, label: &Option<String>) -> Result<Option<usize>, String> {
    label
        .as_ref()
        .map(|l| kb.identity_index(l).ok_or_else(|| format!("unknown identity {l:?}")))
        .transpose()
}

impl TreeWire {
    pub fn from_tree(kb: &KnowledgeBase, t: &ProofTree) -> Self {
        let label = |i: usize| kb.identities()[i].label.clone();
        let goal = match t.goal {
            Goal::Sign(a) => GoalWire::Sign {
                word: kb.name(a.subject).to_string(),
                sign: a.sign.name().to_string(),
            },
            Goal::PowerFamily { base, tail, sign } => GoalWire::PowerFamily {
                base: kb.name(base).to_string(),
                tail: kb.name(tail).to_string(),
                sign: sign.name().to_string(),
            },
        };
        let branches = t
            .branches
            .iter()
            .map(|b| BranchWire {
                assumptions: b.assumptions.iter().map(|a| atom_wire(kb, *a)).collect(),
                steps: b
                    .state
                    .log()
                    .iter()
                    .map(|d| StepWire {
                        fact: fact_wire(kb, d.fact),
                        rule: d.rule.tag().to_string(),
                        identity: d.rule.identity().map(label),
                        premises: d.premises.iter().map(|p| fact_wire(kb, *p)).collect(),
                    })
                    .collect(),
                outcome: match &b.outcome {
                    BranchOutcome::Survived => OutcomeWire::Survived,
                    BranchOutcome::Contradiction(c) => OutcomeWire::Contradiction {
                        rule: match c.rule {
                            ClashRule::Asymmetry => "asymmetry".into(),
                            ClashRule::Forbidden(_) => "R3".into(),
                        },
                        identity: match c.rule {
                            ClashRule::Asymmetry => None,
                            ClashRule::Forbidden(i) => Some(label(i)),
                        },
                        premises: c.premises.iter().map(|p| fact_wire(kb, *p)).collect(),
                    },
                },
            })
            .collect();
        TreeWire {
            hypotheses: t.hypotheses.iter().map(|a| atom_wire(kb, *a)).collect(),
            split: t.split.iter().map(|&n| kb.name(n).to_string()).collect(),
            nontriviality: t.nontriviality.clone(),
            goal,
            branches,
            vacuous: t.vacuous,
        }
    }

    /// Resolves names against `kb`; does not check the proof.
    pub fn to_tree(&self, kb: &KnowledgeBase) -> Result<ProofTree, String> {
        let goal = match &self.goal {
            GoalWire::Sign { word, sign: s } => Goal::Sign(atom(kb, &AtomWire {
                word: word.clone(),
                sign: s.clone(),
            })?),
            GoalWire::PowerFamily { base, tail, sign: s } => Goal::PowerFamily {
                base: node(kb, base)?,
                tail: node(kb, tail)?,
                sign: sign(s)?,
            },
        };
        let mut branches = Vec::new();
        for b in &self.branches {
            let mut log = Vec::new();
            for s in &b.steps {
                let rule = Rule::from_tag(&s.rule, identity(kb, &s.identity)?)
                    .ok_or_else(|| format!("bad rule {:?}", s.rule))?;
                log.push(Derived {
                    fact: fact(kb, &s.fact)?,
                    rule,
                    premises: s.premises.iter().map(|p| fact(kb, p)).collect::<Result<_, _>>()?,
                });
            }
            let outcome = match &b.outcome {
                OutcomeWire::Survived => BranchOutcome::Survived,
                OutcomeWire::Contradiction {
                    rule,
                    identity: id,
                    premises,
                } => {
                    let rule = match (rule.as_str(), identity(kb, id)?) {
                        ("asymmetry", None) => ClashRule::Asymmetry,
                        ("R3", Some(i)) => ClashRule::Forbidden(i),
                        _ => return Err(format!("bad clash rule {rule:?}")),
                    };
                    BranchOutcome::Contradiction(Clash {
                        rule,
                        premises: premises.iter().map(|p| fact(kb, p)).collect::<Result<_, _>>()?,
                    })
                }
            };
            branches.push(Branch {
                assumptions: b.assumptions.iter().map(|a| atom(kb, a)).collect::<Result<_, _>>()?,
                state: SignState::from_log(log),
                outcome,
            });
        }
        Ok(ProofTree {
            hypotheses: self.hypotheses.iter().map(|a| atom(kb, a)).collect::<Result<_, _>>()?,
            split: self.split.iter().map(|n| node(kb, n)).collect::<Result<_, _>>()?,
            nontriviality: self.nontriviality.clone(),
            goal,
            branches,
            vacuous: self.vacuous,
        })
    }
}
