use super::propagate::{propagate_with, Clash, Propagation, SignState};
use super::{Factor, KnowledgeBase, Node, OrderError, Sign, SignAtom};

/// What each surviving branch must establish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Sign(SignAtom),
    /// `base^k tail` has `sign` for every `k >= 0`.
    PowerFamily { base: Node, tail: Node, sign: Sign },
}

impl Goal {
    pub fn holds_in(&self, state: &SignState) -> bool {
        match *self {
            Goal::Sign(a) => state.contains(a.fact()),
            Goal::PowerFamily { base, tail, sign } => {
                state.sign_of(base) == Some(sign) && state.sign_of(tail) == Some(sign)
            }
        }
    }

    pub fn describe(&self, kb: &KnowledgeBase) -> String {
        match *self {
            Goal::Sign(a) => kb.atom_string(a),
            Goal::PowerFamily { base, tail, sign } => format!(
                "{}^k {} {} for all k >= 0",
                kb.name(base),
                kb.name(tail),
                sign.name()
            ),
        }
    }
}

/// `base^k tail` has `sign` for every `k >= 0`, because both `base` and
/// `tail` do and the sign cone is closed under products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParametricFact {
    pub base: Node,
    pub tail: Node,
    pub sign: Sign,
}

impl ParametricFact {
    /// Factorization of the `k`-th member; `k = 0` is `tail` alone.
    pub fn instance(&self, k: usize) -> Vec<Factor> {
        let mut out = vec![
            Factor {
                node: self.base,
                inverse: false
            };
            k
        ];
        out.push(Factor {
            node: self.tail,
            inverse: false,
        });
        out
    }

    pub fn describe(&self, kb: &KnowledgeBase) -> String {
        Goal::PowerFamily {
            base: self.base,
            tail: self.tail,
            sign: self.sign,
        }
        .describe(kb)
    }
}

/// Closes the family `g^k h` when `g` and `h` share a sign in `state`.
pub fn parametric_close(state: &SignState, g: Node, h: Node) -> Result<ParametricFact, OrderError> {
    match (state.sign_of(g), state.sign_of(h)) {
        (Some(s), Some(t)) if s == t => Ok(ParametricFact {
            base: g,
            tail: h,
            sign: s,
        }),
        (sg, sh) => Err(OrderError::Precondition(format!(
            "base and tail must share a derived sign (have {sg:?}, {sh:?})"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchOutcome {
    Contradiction(Clash),
    Survived,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub assumptions: Vec<SignAtom>,
    pub state: SignState,
    pub outcome: BranchOutcome,
}

impl Branch {
    pub fn is_contradiction(&self) -> bool {
        matches!(self.outcome, BranchOutcome::Contradiction(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub hypotheses: Vec<SignAtom>,
    pub split: Vec<Node>,
    /// Why each split word is nontrivial, so that the sign dichotomy applies.
    pub nontriviality: Vec<String>,
    pub goal: Goal,
    pub branches: Vec<Branch>,
    /// Every branch hit a contradiction.
    pub vacuous: bool,
}

impl ProofTree {
    pub fn contradictory_branches(&self) -> usize {
        self.branches.iter().filter(|b| b.is_contradiction()).count()
    }

    pub fn surviving_branches(&self) -> usize {
        self.branches.len() - self.contradictory_branches()
    }

    pub fn with_nontriviality(mut self, notes: Vec<String>) -> Self {
        self.nontriviality = notes;
        self
    }

    pub fn transcript(&self, kb: &KnowledgeBase) -> String {
        let mut out = String::new();
        let hyps: Vec<String> = self.hypotheses.iter().map(|h| kb.atom_string(*h)).collect();
        out.push_str(&format!("hypotheses: {}\n", hyps.join(", ")));
        out.push_str(&format!("goal: {}\n", self.goal.describe(kb)));
        for note in &self.nontriviality {
            out.push_str(&format!("nontrivial: {note}\n"));
        }
        for b in &self.branches {
            let case: Vec<String> = b.assumptions.iter().map(|a| kb.atom_string(*a)).collect();
            let verdict = match &b.outcome {
                BranchOutcome::Contradiction(_) => "contradiction".to_string(),
                BranchOutcome::Survived => format!("derives {}", self.goal.describe(kb)),
            };
            out.push_str(&format!("case {}: {verdict}\n", case.join(", ")));
            for d in b.state.log() {
                let why = match d.rule.identity() {
                    Some(i) => format!("{} {}", d.rule.tag(), kb.identities()[i].label),
                    None => d.rule.tag().to_string(),
                };
                let prem: Vec<String> = d.premises.iter().map(|f| kb.fact_string(*f)).collect();
                if prem.is_empty() {
                    out.push_str(&format!("    {}  [{why}]\n", kb.fact_string(d.fact)));
                } else {
                    out.push_str(&format!(
                        "    {}  [{why}; from {}]\n",
                        kb.fact_string(d.fact),
                        prem.join(", ")
                    ));
                }
            }
            if let BranchOutcome::Contradiction(c) = &b.outcome {
                let prem: Vec<String> = c.premises.iter().map(|f| kb.fact_string(*f)).collect();
                let rule = match c.rule {
                    super::ClashRule::Asymmetry => "asymmetry".to_string(),
                    super::ClashRule::Forbidden(i) => format!("R3 {}", kb.identities()[i].label),
                };
                out.push_str(&format!("    clash [{rule}; from {}]\n", prem.join(", ")));
            }
        }
        if self.vacuous {
            out.push_str("conclusion: every case is contradictory (vacuous)\n");
        } else {
            out.push_str(&format!("conclusion: {}\n", self.goal.describe(kb)));
        }
        out
    }
}

/// A branch that survived without establishing the goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub assumptions: Vec<SignAtom>,
    pub state: SignState,
}

/// Splits on the sign of each word in `split` and propagates every branch.
/// Branches run `POS` before `NEG`, first split word slowest.
pub fn case_split_prove(
    kb: &KnowledgeBase,
    hypotheses: &[SignAtom],
    split: &[Node],
    goal: Goal,
) -> Result<Result<ProofTree, Failure>, OrderError> {
    if split.len() > 16 {
        return Err(OrderError::Precondition("too many split words".into()));
    }
    let mut branches = Vec::with_capacity(1 << split.len());
    for mask in 0..(1usize << split.len()) {
        let assumptions: Vec<SignAtom> = split
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let neg = mask >> (split.len() - 1 - i) & 1 == 1;
                SignAtom::new(n, if neg { Sign::Neg } else { Sign::Pos })
            })
            .collect();
        let branch = match propagate_with(kb, hypotheses, &assumptions)? {
            Propagation::Contradiction { state, clash } => Branch {
                assumptions,
                state,
                outcome: BranchOutcome::Contradiction(clash),
            },
            Propagation::Consistent(state) => {
                if !goal.holds_in(&state) {
                    return Ok(Err(Failure { assumptions, state }));
                }
                Branch {
                    assumptions,
                    state,
                    outcome: BranchOutcome::Survived,
                }
            }
        };
        branches.push(branch);
    }
    let vacuous = branches.iter().all(Branch::is_contradiction);
    Ok(Ok(ProofTree {
        hypotheses: hypotheses.to_vec(),
        split: split.to_vec(),
        nontriviality: Vec::new(),
        goal,
        branches,
        vacuous,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::fixtures::v2503_kb;
    use crate::order::Fact;

    fn lemma(kb: &KnowledgeBase) -> Result<ProofTree, Failure> {
        let h = [kb.atom("mu_inv_lambda", Sign::Neg).unwrap()];
        let split = [kb.node("a").unwrap(), kb.node("b").unwrap()];
        let goal = Goal::Sign(kb.atom("mu", Sign::Pos).unwrap());
        case_split_prove(kb, &h, &split, goal).unwrap()
    }

    #[test]
    fn four_cases_two_contradictions() {
        let kb = v2503_kb();
        let tree = lemma(&kb).expect("lemma holds");
        assert_eq!(tree.branches.len(), 4);
        assert_eq!(tree.contradictory_branches(), 2);
        assert!(!tree.vacuous);
        let (a, b) = (kb.node("a").unwrap(), kb.node("b").unwrap());
        let dead: Vec<Vec<SignAtom>> = tree
            .branches
            .iter()
            .filter(|br| br.is_contradiction())
            .map(|br| br.assumptions.clone())
            .collect();
        assert_eq!(
            dead,
            vec![
                vec![SignAtom::new(a, Sign::Pos), SignAtom::new(b, Sign::Pos)],
                vec![SignAtom::new(a, Sign::Neg), SignAtom::new(b, Sign::Pos)],
            ]
        );
        let mu = kb.node("mu").unwrap();
        for br in tree.branches.iter().filter(|b| !b.is_contradiction()) {
            assert!(br.state.contains(Fact::sign(mu, Sign::Pos)));
        }
    }

    #[test]
    fn transcript_names_every_case() {
        let kb = v2503_kb();
        let t = lemma(&kb).unwrap().transcript(&kb);
        assert_eq!(t.lines().filter(|l| l.starts_with("case ")).count(), 4);
        assert!(t.contains("case a POS, b POS: contradiction"));
        assert!(t.contains("case a POS, b NEG: derives mu POS"));
    }

    #[test]
    fn unprovable_goal_reports_first_failing_branch() {
        let kb = v2503_kb();
        let h = [kb.atom("mu_inv_lambda", Sign::Neg).unwrap()];
        let split = [kb.node("a").unwrap(), kb.node("b").unwrap()];
        let goal = Goal::Sign(kb.atom("lambda", Sign::Pos).unwrap());
        let f = case_split_prove(&kb, &h, &split, goal).unwrap().unwrap_err();
        assert_eq!(
            f.assumptions,
            vec![SignAtom::new(split[0], Sign::Pos), SignAtom::new(split[1], Sign::Neg)]
        );
    }

    #[test]
    fn inconsistent_hypotheses_are_vacuous() {
        let kb = v2503_kb();
        let h = [kb.atom("a", Sign::Pos).unwrap(), kb.atom("a", Sign::Neg).unwrap()];
        let goal = Goal::Sign(kb.atom("mu", Sign::Pos).unwrap());
        let tree = case_split_prove(&kb, &h, &[kb.node("b").unwrap()], goal).unwrap().unwrap();
        assert!(tree.vacuous);
        assert!(tree.transcript(&kb).contains("vacuous"));
    }

    #[test]
    fn power_family_closes_from_shared_sign() {
        let kb = v2503_kb();
        let (a, b) = (kb.node("a").unwrap(), kb.node("b").unwrap());
        let Propagation::Consistent(s) = propagate_with(
            &kb,
            &[SignAtom::new(a, Sign::Neg), SignAtom::new(b, Sign::Neg)],
            &[],
        )
        .unwrap() else {
            panic!();
        };
        let fam = parametric_close(&s, a, b).unwrap();
        assert_eq!(fam.sign, Sign::Neg);
        assert_eq!(fam.instance(0), vec![Factor { node: b, inverse: false }]);
        assert_eq!(fam.instance(3).len(), 4);
        let mu = kb.node("mu").unwrap();
        // mu is positive here, so the pair (a, mu) has no shared sign.
        assert!(parametric_close(&s, a, mu).is_err());
    }

    #[test]
    fn power_family_as_goal() {
        let kb = v2503_kb();
        let (a, b) = (kb.node("a").unwrap(), kb.node("b").unwrap());
        let goal = Goal::PowerFamily { base: a, tail: b, sign: Sign::Neg };
        let h = [SignAtom::new(a, Sign::Neg), SignAtom::new(b, Sign::Neg)];
        let tree = case_split_prove(&kb, &h, &[], goal).unwrap().unwrap();
        assert_eq!(tree.surviving_branches(), 1);
    }
}
