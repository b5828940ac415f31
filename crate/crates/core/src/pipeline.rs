//! The end-to-end run: homology, framing, identities, the ordering lemma,
//! the peripheral quotient and slope verdicts, assembled into a bundle.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;

use crate::abelian::{class_in, exponent_vector, Abelianization, SmithForm};
use crate::bundle::{
    class_entry, class_names, ints, kb_entries, matrix_json, CertificateBundle, ClaimEntry, CommutatorEntry,
    ConfigEcho, FramingSection, HomologySection, IdentitySection, LemmaSection, ManifoldSection, OrderEntry,
    QuotientSection, SmithSection, ToolInfo, VerdictEntry, SCHEMA, TOOL,
};
use crate::coset::{element_order, todd_coxeter, CosetTable, TableStatus, DEFAULT_MAX_COSETS};
use crate::filling::{verdict, Slope, VerifiedLemma, VerifiedQuotient};
use crate::identity::{find_derivation, NotFound, Search, SearchBudget};
use crate::manifold::{LemmaDecl, Manifold};
use crate::order::{case_split_prove, Goal, Node, ProofTree, SignAtom};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Search depth for stated identities.
    pub depth: usize,
    /// Conjugator length bound; `None` picks one per claim.
    pub conjugator_length: Option<usize>,
    pub max_cosets: usize,
    pub max_nodes: usize,
    pub commutator_depth: usize,
    pub slopes: Vec<Slope>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            depth: 2,
            conjugator_length: None,
            max_cosets: DEFAULT_MAX_COSETS,
            max_nodes: SearchBudget::DEFAULT_MAX_NODES,
            commutator_depth: 3,
            slopes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Homology,
    Framing,
    Identities,
    Lemma,
    Quotient,
    Verdicts,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Homology => "homology",
            Stage::Framing => "framing",
            Stage::Identities => "identities",
            Stage::Lemma => "lemma",
            Stage::Quotient => "quotient",
            Stage::Verdicts => "verdicts",
        })
    }
}

/// A stage that could not produce its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineError {
    pub stage: Stage,
    /// The claim, word or slope concerned.
    pub object: String,
    pub message: String,
    /// A budget ran out: the claim may still be true.
    pub inconclusive: bool,
}

impl PipelineError {
    fn failed(stage: Stage, object: impl Into<String>, message: impl Into<String>) -> Self {
        PipelineError {
            stage,
            object: object.into(),
            message: message.into(),
            inconclusive: false,
        }
    }

    fn inconclusive(stage: Stage, object: impl Into<String>, message: impl Into<String>) -> Self {
        PipelineError {
            inconclusive: true,
            ..Self::failed(stage, object, message)
        }
    }

    /// 2 for an exhausted budget, 1 for a refuted or malformed claim.
    pub fn exit_code(&self) -> i32 {
        if self.inconclusive {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.inconclusive { "inconclusive" } else { "failed" };
        write!(f, "{} {kind} at {}: {}", self.stage, self.object, self.message)
    }
}

impl std::error::Error for PipelineError {}

pub fn homology_section(m: &Manifold) -> Result<(HomologySection, SmithForm), PipelineError> {
    let err = |o: &str, msg: String| PipelineError::failed(Stage::Homology, o, msg);
    let p = m.presentation();
    let ab = Abelianization::of(p);
    let inv = ab.invariants();
    if let Some((fr, t)) = &m.file.expect.homology {
        let want: Vec<BigInt> = t.iter().map(|v| BigInt::from(*v)).collect();
        if inv.free_rank != *fr || inv.torsion != want {
            return Err(err("H1", format!("computed {inv}, data file expects a different group")));
        }
    }
    let smith = ab.smith().clone();
    let mut classes = Vec::new();
    for name in class_names(m) {
        let w = m.word(&name).ok_or_else(|| err(&name, "unknown word".into()))?;
        classes.push(class_entry(&name, w, p.alphabet(), &smith, p.rank()));
    }
    for (name, want) in &m.file.expect.classes {
        let w = m.word(name).ok_or_else(|| err(name, "unknown word".into()))?;
        let got = exponent_vector(w, p.rank());
        if got.to_i64().as_deref() != Some(want.as_slice()) {
            return Err(err(name, format!("exponent vector {:?} differs from the expected {want:?}", got.0)));
        }
    }
    let s = HomologySection {
        group: inv.to_string(),
        free_rank: inv.free_rank,
        torsion: ints(&inv.torsion),
        relation_matrix: matrix_json(ab.relation_matrix()),
        smith: SmithSection {
            s: matrix_json(&smith.s),
            u: matrix_json(&smith.u),
            v: matrix_json(&smith.v),
        },
        classes,
    };
    Ok((s, smith))
}

pub fn framing_section(m: &Manifold) -> Result<FramingSection, PipelineError> {
    let al = m.presentation().alphabet();
    if !m.record.framing_is_homological() {
        return Err(PipelineError::failed(
            Stage::Framing,
            "lambda",
            format!("{} is not rationally nullhomologous", al.format(&m.record.lambda)),
        ));
    }
    Ok(FramingSection {
        matrix: m.file.framing,
        mu: al.format(&m.record.mu),
        lambda: al.format(&m.record.lambda),
        homological: true,
    })
}

fn budget(config: &Config, depth: usize, m: &Manifold, lhs: &Word, rhs: &Word) -> SearchBudget {
    SearchBudget {
        depth,
        conjugator_length: config
            .conjugator_length
            .unwrap_or_else(|| SearchBudget::auto_conjugator_length(m.presentation(), lhs, rhs)),
        max_nodes: config.max_nodes,
    }
}

fn not_found(nf: NotFound) -> String {
    match nf {
        NotFound::DepthExhausted { depth } => format!("no derivation within depth {depth}"),
        NotFound::NodeLimit { nodes } => format!("node budget exhausted after {nodes} words"),
    }
}

pub fn identities_section(m: &Manifold, config: &Config) -> Result<IdentitySection, PipelineError> {
    let p = m.presentation();
    let al = p.alphabet();
    let mut claims = Vec::new();
    let mut certified = HashSet::new();
    for c in &m.claims {
        let b = budget(config, config.depth, m, &c.lhs, &c.rhs);
        let search = find_derivation(p, &c.lhs, &c.rhs, &b)
            .map_err(|e| PipelineError::failed(Stage::Identities, &c.label, e.to_string()))?;
        let cert = match search {
            Search::Found(cert) => cert,
            Search::NotFound(nf) => return Err(PipelineError::inconclusive(Stage::Identities, &c.label, not_found(nf))),
        };
        if !c.depth.admits(cert.depth()) {
            return Err(PipelineError::failed(
                Stage::Identities,
                &c.label,
                format!("found at depth {}, data file states {}", cert.depth(), c.depth),
            ));
        }
        certified.insert(c.label.clone());
        claims.push(ClaimEntry {
            label: c.label.clone(),
            bound: c.depth.to_string(),
            depth: cert.depth(),
            certificate: cert.to_json(al),
        });
    }
    let commutator = match &m.commutator {
        None => None,
        Some(c) => {
            let b = budget(config, config.commutator_depth, m, &c.lhs, &c.rhs);
            let found = find_derivation(p, &c.lhs, &c.rhs, &b)
                .map_err(|e| PipelineError::failed(Stage::Identities, &c.label, e.to_string()))?;
            Some(match found {
                Search::Found(cert) => CommutatorEntry {
                    label: c.label.clone(),
                    status: "certified".into(),
                    depth: Some(cert.depth()),
                    certificate: Some(cert.to_json(al)),
                },
                Search::NotFound(_) => CommutatorEntry {
                    label: c.label.clone(),
                    status: "not_found".into(),
                    depth: None,
                    certificate: None,
                },
            })
        }
    };
    for (i, id) in m.kb.identities().iter().enumerate() {
        m.check_identity(i, |l| certified.contains(l))
            .map_err(|e| PipelineError::failed(Stage::Identities, &id.label, e))?;
    }
    Ok(IdentitySection {
        claims,
        commutator,
        knowledge_base: kb_entries(m),
    })
}

/// Hypotheses, split nodes and goal of the lemma declared in the data file.
pub fn lemma_inputs(m: &Manifold, decl: &LemmaDecl) -> Result<(Vec<SignAtom>, Vec<Node>, Goal), String> {
    let kb = &m.kb;
    let hyps = decl
        .hypotheses
        .iter()
        .map(|(w, s)| kb.atom(w, *s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let split = decl
        .split
        .iter()
        .map(|w| kb.node(w))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let (base, tail, sign) = &decl.goal;
    let goal = Goal::PowerFamily {
        base: kb.node(base).map_err(|e| e.to_string())?,
        tail: kb.node(tail).map_err(|e| e.to_string())?,
        sign: *sign,
    };
    Ok((hyps, split, goal))
}

/// One justification per split word: a word with a nonzero homology class is
/// a nontrivial group element.
pub fn nontriviality_notes(m: &Manifold, split: &[String], smith: &SmithForm) -> Result<Vec<String>, String> {
    let rank = m.presentation().rank();
    split
        .iter()
        .map(|name| {
            let w = m.word(name).ok_or_else(|| format!("unknown word {name}"))?;
            let class = class_in(smith, &exponent_vector(w, rank));
            if class.is_trivial() {
                return Err(format!("{name} is trivial in H1, so its nontriviality needs another argument"));
            }
            Ok(match class.order() {
                Some(k) => format!("{name} has order {k} in H1"),
                None => format!("{name} has infinite order in H1"),
            })
        })
        .collect()
}

pub fn lemma_section(m: &Manifold, smith: &SmithForm) -> Result<(LemmaSection, ProofTree, VerifiedLemma), PipelineError> {
    let err = |o: &str, msg: String| PipelineError::failed(Stage::Lemma, o, msg);
    let decl = m.file.lemma.as_ref().ok_or_else(|| err("lemma", "data file declares no lemma".into()))?;
    let (hyps, split, goal) = lemma_inputs(m, decl).map_err(|e| err("lemma", e))?;
    let notes = nontriviality_notes(m, &decl.split, smith).map_err(|e| err("split", e))?;
    let tree = match case_split_prove(&m.kb, &hyps, &split, goal).map_err(|e| err("lemma", e.to_string()))? {
        Ok(t) => t.with_nontriviality(notes),
        Err(f) => {
            let case: Vec<String> = f.assumptions.iter().map(|a| m.kb.atom_string(*a)).collect();
            return Err(err(&case.join(", "), "case survives without reaching the goal".into()));
        }
    };
    let lemma = VerifiedLemma::new(&m.kb, &tree).map_err(|e| err("lemma", e.to_string()))?;
    let section = LemmaSection {
        statement: lemma.statement().to_string(),
        contradictory: tree.contradictory_branches(),
        surviving: tree.surviving_branches(),
        tree: crate::order::TreeWire::from_tree(&m.kb, &tree),
    };
    Ok((section, tree, lemma))
}

/// Orders of the generators, then of any further word the data file lists.
pub fn element_orders(m: &Manifold, table: &CosetTable) -> Result<Vec<OrderEntry>, String> {
    let al = m.presentation().alphabet();
    let mut names: Vec<String> = al.symbols().iter().map(|c| c.to_string()).collect();
    for (n, _) in &m.file.expect.element_orders {
        if !names.contains(n) {
            names.push(n.clone());
        }
    }
    names
        .into_iter()
        .map(|name| {
            let w = m.word(&name).ok_or_else(|| format!("unknown word {name}"))?;
            let order = element_order(table, w).map_err(|e| e.to_string())?;
            Ok(OrderEntry { word: name, order })
        })
        .collect()
}

/// Whether some element's order equals the group order. Walks one
/// representative word per coset of the regular action.
pub fn is_cyclic(table: &CosetTable) -> bool {
    let n = table.len();
    let rank = table.rank();
    let mut rep: Vec<Option<Word>> = vec![None; n];
    rep[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for col in 0..2 * rank {
            let d = table.rows()[c][col];
            if rep[d].is_none() {
                let l = crate::word::Letter::new(col / 2, col % 2 == 1);
                rep[d] = Some(rep[c].as_ref().expect("visited").compose(&Word::letter(l)));
                queue.push_back(d);
            }
        }
    }
    rep.iter()
        .flatten()
        .any(|w| element_order(table, w).is_ok_and(|k| k as usize == n))
}

pub fn quotient_section(m: &Manifold, config: &Config) -> Result<(QuotientSection, VerifiedQuotient), PipelineError> {
    let err = |msg: String| PipelineError::failed(Stage::Quotient, "peripheral quotient", msg);
    let killed = m.record.peripheral_killed();
    let table = todd_coxeter(&killed, &[], config.max_cosets);
    if let TableStatus::ExceededBound { max_cosets } = table.status() {
        return Err(PipelineError::inconclusive(
            Stage::Quotient,
            "peripheral quotient",
            format!("enumeration exceeded {max_cosets} cosets"),
        ));
    }
    let quotient = VerifiedQuotient::new(&m.record, &table).map_err(|e| err(e.to_string()))?;
    if let Some(want) = m.file.expect.quotient_order {
        if want != quotient.order() as u64 {
            return Err(err(format!("order {} differs from the expected {want}", quotient.order())));
        }
    }
    let orders = element_orders(m, &table).map_err(err)?;
    for (name, want) in &m.file.expect.element_orders {
        let got = orders.iter().find(|o| &o.word == name).map(|o| o.order);
        if got != Some(*want) {
            return Err(PipelineError::failed(
                Stage::Quotient,
                name,
                format!("order {got:?} differs from the expected {want}"),
            ));
        }
    }
    let section = QuotientSection {
        order: quotient.order(),
        cyclic: is_cyclic(&table),
        table: table.rows().to_vec(),
        element_orders: orders,
    };
    Ok((section, quotient))
}

pub fn verdict_entries(
    m: &Manifold,
    slopes: &[Slope],
    lemma: &VerifiedLemma,
    quotient: &VerifiedQuotient,
) -> Result<Vec<VerdictEntry>, PipelineError> {
    slopes
        .iter()
        .map(|&r| {
            verdict(&m.record, r, Some(lemma), Some(quotient))
                .map(|v| VerdictEntry::from_verdict(&v))
                .map_err(|e| PipelineError::failed(Stage::Verdicts, r.to_string(), e.to_string()))
        })
        .collect()
}

/// Runs every stage in order and stops at the first failure.
pub fn run_pipeline(m: &Manifold, config: &Config) -> Result<CertificateBundle, PipelineError> {
    let (homology, smith) = homology_section(m)?;
    let framing = framing_section(m)?;
    let identities = identities_section(m, config)?;
    let (lemma, _, verified_lemma) = lemma_section(m, &smith)?;
    let (quotient, verified_quotient) = quotient_section(m, config)?;
    let verdicts = verdict_entries(m, &config.slopes, &verified_lemma, &verified_quotient)?;
    Ok(CertificateBundle {
        schema: SCHEMA.into(),
        tool: ToolInfo {
            name: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
        },
        config: ConfigEcho {
            depth: config.depth,
            conjugator_length: config.conjugator_length,
            max_cosets: config.max_cosets,
            max_nodes: config.max_nodes,
            commutator_depth: config.commutator_depth,
            slopes: config.slopes.iter().map(Slope::to_string).collect(),
        },
        manifold: ManifoldSection {
            name: m.file.name.clone(),
            text: m.file.to_text(),
            trusted: m.file.trusted.clone(),
            provenance: m.file.provenance.clone(),
        },
        homology,
        framing,
        identities,
        lemma,
        quotient,
        verdicts: (!verdicts.is_empty()).then_some(verdicts),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(b: &CertificateBundle, format: Format) -> String {
    match format {
        Format::Json => b.to_json(),
        Format::Text => text_report(b),
    }
}

fn int_list(v: &[crate::bundle::Int]) -> String {
    let s: Vec<String> = v
        .iter()
        .map(|i| match i {
            crate::bundle::Int::Small(x) => x.to_string(),
            crate::bundle::Int::Big(x) => x.clone(),
        })
        .collect();
    format!("({})", s.join(", "))
}

pub fn homology_text(h: &HomologySection) -> String {
    let mut out = format!("H1 = {}\n", h.group);
    for c in &h.classes {
        let order = match &c.order {
            None => "infinite order".to_string(),
            Some(crate::bundle::Int::Small(k)) => format!("order {k}"),
            Some(crate::bundle::Int::Big(k)) => format!("order {k}"),
        };
        let null = if c.rationally_null { ", rationally null" } else { "" };
        out.push_str(&format!("  [{}] = {} {}: {order}{null}\n", c.name, c.word, int_list(&c.exponents)));
    }
    out
}

pub fn identities_text(s: &IdentitySection) -> String {
    let mut out = String::new();
    for c in &s.claims {
        out.push_str(&format!("  {}: certified at depth {} ({})\n", c.label, c.depth, c.bound));
    }
    if let Some(c) = &s.commutator {
        match c.depth {
            Some(d) => out.push_str(&format!("  {}: certified at depth {d}\n", c.label)),
            None => out.push_str(&format!("  {}: no derivation found (not needed downstream)\n", c.label)),
        }
    }
    for k in &s.knowledge_base {
        out.push_str(&format!("  {} {}  [{}]\n", k.label, k.identity, k.by));
    }
    out
}

pub fn quotient_text(q: &QuotientSection) -> String {
    let orders: Vec<String> = q.element_orders.iter().map(|o| format!("{} has order {}", o.word, o.order)).collect();
    let shape = if q.cyclic { "cyclic" } else { "not cyclic" };
    format!("peripheral quotient: order {}, {shape}; {}\n", q.order, orders.join(", "))
}

pub fn verdicts_text(v: &[VerdictEntry]) -> String {
    let mut out = String::new();
    for e in v {
        out.push_str(&format!("  {}: {} (H1 = {})\n", e.slope, e.verdict, e.filled_homology));
        if let Some(k) = &e.peripheral_killed {
            out.push_str(&format!("    peripheral killed: {}\n", k.note));
        }
        if let Some(w) = &e.peripheral_survives {
            out.push_str(&format!(
                "    peripheral survives: witness {} and {} with n = {}; {}\n",
                w.endpoints[0], w.endpoints[1], w.n, w.implication
            ));
        }
        if let Some(r) = &e.reason {
            out.push_str(&format!("    {r}\n"));
        }
    }
    out
}

fn text_report(b: &CertificateBundle) -> String {
    let mut out = format!("{} {}: manifold {}\n", b.tool.name, b.tool.version, b.manifold.name);
    out.push_str(&format!("trusted: {}\n", b.manifold.trusted.join(", ")));
    out.push_str("\n[homology]\n");
    out.push_str(&homology_text(&b.homology));
    out.push_str("\n[framing]\n");
    out.push_str(&format!(
        "  mu = {}, lambda = {}, lambda rationally null: {}\n",
        b.framing.mu, b.framing.lambda, b.framing.homological
    ));
    out.push_str("\n[identities]\n");
    out.push_str(&identities_text(&b.identities));
    out.push_str("\n[lemma]\n");
    out.push_str(&format!(
        "  {} ({} contradictory cases, {} surviving)\n",
        b.lemma.statement, b.lemma.contradictory, b.lemma.surviving
    ));
    let m = Manifold::parse(&b.manifold.text).expect("bundle embeds valid data");
    if let Ok(t) = b.lemma.tree.to_tree(&m.kb) {
        for line in t.transcript(&m.kb).lines() {
            out.push_str(&format!("  {line}\n"));
        }
    }
    out.push_str("\n[quotient]\n  ");
    out.push_str(&quotient_text(&b.quotient));
    if let Some(v) = &b.verdicts {
        out.push_str("\n[verdicts]\n");
        out.push_str(&verdicts_text(v));
    }
    out
}
