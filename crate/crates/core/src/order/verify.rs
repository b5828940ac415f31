//! Re-checks a proof tree rule by rule without running the engine.

use std::collections::HashSet;

use super::propagate::SignState;
use super::tree::{BranchOutcome, ProofTree};
use super::{ClashRule, Derived, Fact, Factor, KnowledgeBase, Node, Rule, Sign, SignAtom, ONE};

/// `Ok` iff the branches cover every sign assignment of the split words
/// exactly once, every logged step is a valid rule application on earlier
/// facts, every closed branch ends in a valid clash, every open branch
/// establishes the goal, and the vacuity flag is accurate.
pub fn verify_tree(kb: &KnowledgeBase, tree: &ProofTree) -> Result<(), String> {
    let n = kb.node_count();
    let in_range = |node: Node| node != ONE && node < n;
    if !tree.hypotheses.iter().all(|h| in_range(h.subject)) || !tree.split.iter().all(|&s| in_range(s)) {
        return Err("tree refers to unregistered words".into());
    }
    if tree.split.len() > 16 || tree.branches.len() != 1 << tree.split.len() {
        return Err(format!(
            "{} branches for {} split words",
            tree.branches.len(),
            tree.split.len()
        ));
    }
    let mut seen: HashSet<Vec<SignAtom>> = HashSet::new();
    for (bi, b) in tree.branches.iter().enumerate() {
        let subjects: Vec<Node> = b.assumptions.iter().map(|a| a.subject).collect();
        if subjects != tree.split || !seen.insert(b.assumptions.clone()) {
            return Err(format!("branch {bi}: assumptions do not match the split"));
        }
        let established =
            check_log(kb, &tree.hypotheses, &b.assumptions, &b.state).map_err(|e| format!("branch {bi}: {e}"))?;
        match &b.outcome {
            BranchOutcome::Contradiction(c) => {
                if !c.premises.iter().all(|f| established.contains(f)) {
                    return Err(format!("branch {bi}: clash uses an underived fact"));
                }
                match c.rule {
                    ClashRule::Asymmetry => match c.premises.as_slice() {
                        [f, g] if *g == f.reversed() => {}
                        _ => return Err(format!("branch {bi}: malformed asymmetry clash")),
                    },
                    ClashRule::Forbidden(i) => {
                        let id = kb
                            .identities()
                            .get(i)
                            .ok_or_else(|| format!("branch {bi}: unknown identity {i}"))?;
                        let relation = id.relation();
                        let signs = sign_premises(&relation, &c.premises)
                            .ok_or_else(|| format!("branch {bi}: clash premises do not cover {}", id.label))?;
                        if uniform(&relation, &signs).is_none() {
                            return Err(format!("branch {bi}: {} is not sign-uniform", id.label));
                        }
                    }
                }
            }
            BranchOutcome::Survived => {
                let state = SignState::from_log(b.state.log().to_vec());
                if !tree.goal.holds_in(&state) {
                    return Err(format!("branch {bi}: goal not established"));
                }
                if established.iter().any(|f| established.contains(&f.reversed())) {
                    return Err(format!("branch {bi}: surviving branch is inconsistent"));
                }
            }
        }
    }
    let vacuous = tree.branches.iter().all(|b| matches!(b.outcome, BranchOutcome::Contradiction(_)));
    if vacuous != tree.vacuous {
        return Err("vacuity flag is wrong".into());
    }
    Ok(())
}

fn check_log(
    kb: &KnowledgeBase,
    hypotheses: &[SignAtom],
    assumptions: &[SignAtom],
    state: &SignState,
) -> Result<HashSet<Fact>, String> {
    let mut known: HashSet<Fact> = HashSet::new();
    for (i, d) in state.log().iter().enumerate() {
        if d.fact.less == d.fact.greater || d.fact.less >= kb.node_count() || d.fact.greater >= kb.node_count() {
            return Err(format!("step {i}: malformed fact"));
        }
        if let Some(p) = d.premises.iter().find(|p| !known.contains(p)) {
            return Err(format!("step {i}: premise {} not yet derived", kb.fact_string(*p)));
        }
        check_step(kb, hypotheses, assumptions, d).map_err(|e| format!("step {i} ({}): {e}", kb.fact_string(d.fact)))?;
        known.insert(d.fact);
    }
    Ok(known)
}

fn check_step(kb: &KnowledgeBase, hypotheses: &[SignAtom], assumptions: &[SignAtom], d: &Derived) -> Result<(), String> {
    let sign = d.fact.as_sign();
    let id = match d.rule.identity() {
        Some(i) => Some(kb.identities().get(i).ok_or("unknown identity")?),
        None => None,
    };
    match d.rule {
        Rule::Hypothesis | Rule::CaseSplit => {
            let pool = if d.rule == Rule::Hypothesis { hypotheses } else { assumptions };
            let (n, s) = sign.ok_or("not a sign fact")?;
            if !d.premises.is_empty() || !pool.contains(&SignAtom::new(n, s)) {
                return Err("not an assumption".into());
            }
        }
        Rule::Product(_) => {
            let id = id.expect("identity rule");
            let (n, s) = sign.ok_or("not a sign fact")?;
            if id.lhs != Some(n) {
                return Err("conclusion is not the product".into());
            }
            let signs = sign_premises(&id.rhs, &d.premises).ok_or("premises do not cover the factors")?;
            if uniform(&id.rhs, &signs) != Some(s) {
                return Err("factors do not share the concluded sign".into());
            }
        }
        Rule::Inverse(_) => {
            let id = id.expect("identity rule");
            let (lhs, g) = id.lhs.zip(id.inversion()).ok_or("identity is not an inversion")?;
            let (n, s) = sign.ok_or("not a sign fact")?;
            let [p] = d.premises.as_slice() else {
                return Err("expects one premise".into());
            };
            let (pn, ps) = p.as_sign().ok_or("premise is not a sign")?;
            let ok = ps == s.flip() && ((pn == g && n == lhs) || (pn == lhs && n == g));
            if !ok {
                return Err("inversion does not match".into());
            }
        }
        Rule::Forced(_) => {
            let id = id.expect("identity rule");
            let (n, t) = sign.ok_or("not a sign fact")?;
            let relation = id.relation();
            let open: Vec<Factor> = relation.iter().copied().filter(|f| f.node == n).collect();
            let rest: Vec<Factor> = relation.iter().copied().filter(|f| f.node != n).collect();
            if open.is_empty() || rest.is_empty() || open.iter().any(|f| *f != open[0]) {
                return Err("forced word does not occur uniformly".into());
            }
            let signs = sign_premises(&rest, &d.premises).ok_or("premises do not cover the other factors")?;
            let c = uniform(&rest, &signs).ok_or("other factors do not share a sign")?;
            if open[0].effective(t) != c.flip() {
                return Err("forced sign does not oppose the others".into());
            }
        }
        Rule::LeftInvariance(_) => {
            let id = id.expect("identity rule");
            let (q, (g, h)) = id.lhs.zip(id.left_quotient()).ok_or("identity is not a left quotient")?;
            let [p] = d.premises.as_slice() else {
                return Err("expects one premise".into());
            };
            let expected = match p.as_sign() {
                Some((pn, Sign::Neg)) if pn == q => Fact { less: h, greater: g },
                Some((pn, Sign::Pos)) if pn == q => Fact { less: g, greater: h },
                _ => return Err("premise is not the quotient's sign".into()),
            };
            if d.fact != expected {
                return Err("comparison does not follow".into());
            }
        }
        Rule::Transitivity => match d.premises.as_slice() {
            [uv, vw] if uv.greater == vw.less && uv.less == d.fact.less && vw.greater == d.fact.greater => {}
            _ => return Err("not a transitive step".into()),
        },
    }
    Ok(())
}

/// Node signs from `premises` if they are exactly one sign fact per distinct
/// node among `factors`.
fn sign_premises(factors: &[Factor], premises: &[Fact]) -> Option<Vec<(Node, Sign)>> {
    let mut nodes: Vec<Node> = factors.iter().map(|f| f.node).collect();
    nodes.sort_unstable();
    nodes.dedup();
    let mut signs: Vec<(Node, Sign)> = premises.iter().map(|p| p.as_sign()).collect::<Option<_>>()?;
    signs.sort();
    let covered: Vec<Node> = signs.iter().map(|s| s.0).collect();
    (covered == nodes).then_some(signs)
}

fn uniform(factors: &[Factor], signs: &[(Node, Sign)]) -> Option<Sign> {
    let mut common = None;
    for f in factors {
        let s = signs.iter().find(|(n, _)| *n == f.node)?.1;
        let e = f.effective(s);
        if common.is_some_and(|c| c != e) {
            return None;
        }
        common = Some(e);
    }
    common
}
