//! The JSON certificate bundle and its independent checker.
//!
//! [`verify_bundle`] never searches: it checks the Smith certificate by
//! matrix multiplication, replays every derivation, re-walks the proof tree,
//! re-checks the coset table against the relators and recomputes the
//! arithmetic behind each verdict.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::abelian::{exponent_vector, IntMatrix, SmithForm};
use crate::coset::{group_order, todd_coxeter, CosetTable};
use crate::filling::{verdict, Outcome, Slope, Verdict, VerifiedLemma, VerifiedQuotient, ORIENTATION_NOTE, PERIPHERAL_NOTE};
use crate::identity::{replay_detailed, DerivationCertificate};
use crate::manifold::{Manifold, ManifoldFile};
use crate::order::TreeWire;

pub const SCHEMA: &str = "ordfill-bundle/1";
pub const TOOL: &str = "ordfill";

/// An integer that is a JSON number when it fits in `i64` and a decimal
/// string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for Int {
    fn from(v: &BigInt) -> Int {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(v.to_string()),
        }
    }
}

impl Int {
    pub fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            Int::Small(v) => Ok(BigInt::from(*v)),
            Int::Big(s) => {
                let v: BigInt = s.parse().map_err(|_| format!("bad integer {s:?}"))?;
                // canonical: strings only for values outside i64
                if i64::try_from(&v).is_ok() {
                    return Err(format!("integer {s:?} should be a number"));
                }
                Ok(v)
            }
        }
    }
}

pub fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().map(Int::from).collect()
}

pub fn matrix_json(m: &IntMatrix) -> Vec<Vec<Int>> {
    (0..m.rows()).map(|i| ints(m.row(i))).collect()
}

fn matrix_from(rows: &[Vec<Int>], cols: usize) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            if r.len() != cols {
                return Err("ragged matrix".to_string());
            }
            r.iter().map(Int::to_bigint).collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(IntMatrix::from_rows(cols, &rows))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub depth: usize,
    pub conjugator_length: Option<usize>,
    pub max_cosets: usize,
    pub max_nodes: usize,
    pub commutator_depth: usize,
    pub slopes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSection {
    pub name: String,
    /// Canonical data file text; everything else is checked against it.
    pub text: String,
    pub trusted: Vec<String>,
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmithSection {
    pub s: Vec<Vec<Int>>,
    pub u: Vec<Vec<Int>>,
    pub v: Vec<Vec<Int>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub name: String,
    pub word: String,
    pub exponents: Vec<Int>,
    /// `[modulus, residue]` in Smith coordinates.
    pub torsion: Vec<[Int; 2]>,
    pub free: Vec<Int>,
    /// `None` for infinite order.
    pub order: Option<Int>,
    pub rationally_null: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologySection {
    pub group: String,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub relation_matrix: Vec<Vec<Int>>,
    pub smith: SmithSection,
    pub classes: Vec<ClassEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramingSection {
    pub matrix: [[i64; 2]; 2],
    pub mu: String,
    pub lambda: String,
    pub homological: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimEntry {
    pub label: String,
    pub bound: String,
    pub depth: usize,
    pub certificate: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorEntry {
    pub label: String,
    /// `certified` or `not_found`.
    pub status: String,
    pub depth: Option<usize>,
    pub certificate: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KbEntry {
    pub label: String,
    pub identity: String,
    pub by: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitySection {
    pub claims: Vec<ClaimEntry>,
    pub commutator: Option<CommutatorEntry>,
    pub knowledge_base: Vec<KbEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaSection {
    pub statement: String,
    pub contradictory: usize,
    pub surviving: usize,
    pub tree: TreeWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderEntry {
    pub word: String,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSection {
    pub order: usize,
    pub cyclic: bool,
    /// Row per coset, one column per generator and inverse.
    pub table: Vec<Vec<usize>>,
    pub element_orders: Vec<OrderEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KilledBranch {
    pub quotient_order: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    pub condition: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessBranch {
    pub endpoints: [String; 2],
    pub n: i64,
    pub checks: Vec<CheckEntry>,
    pub implication: String,
    pub orientation: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictEntry {
    pub slope: String,
    pub verdict: String,
    pub filled_homology: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peripheral_killed: Option<KilledBranch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peripheral_survives: Option<WitnessBranch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl VerdictEntry {
    pub fn from_verdict(v: &Verdict) -> VerdictEntry {
        let mut e = VerdictEntry {
            slope: v.slope.to_string(),
            verdict: v.label().to_string(),
            filled_homology: v.filled_homology.to_string(),
            peripheral_killed: None,
            peripheral_survives: None,
            reason: None,
        };
        match &v.outcome {
            Outcome::NotOrderable { quotient_order, witness } => {
                e.peripheral_killed = Some(KilledBranch {
                    quotient_order: *quotient_order,
                    note: format!(
                        "the filled group is a quotient of the peripheral-killed group of order {quotient_order}, \
                         so it is finite and not left-orderable"
                    ),
                });
                e.peripheral_survives = Some(WitnessBranch {
                    endpoints: [witness.first.to_string(), witness.second.to_string()],
                    n: witness.n,
                    checks: witness
                        .checks
                        .iter()
                        .map(|(c, h)| CheckEntry {
                            condition: c.clone(),
                            holds: *h,
                        })
                        .collect(),
                    implication: witness.implication.clone(),
                    orientation: ORIENTATION_NOTE.to_string(),
                    note: PERIPHERAL_NOTE.to_string(),
                });
            }
            Outcome::Unknown { reason } => e.reason = Some(reason.clone()),
        }
        e
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateBundle {
    pub schema: String,
    pub tool: ToolInfo,
    pub config: ConfigEcho,
    pub manifold: ManifoldSection,
    pub homology: HomologySection,
    pub framing: FramingSection,
    pub identities: IdentitySection,
    pub lemma: LemmaSection,
    pub quotient: QuotientSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<VerdictEntry>>,
}

impl CertificateBundle {
    /// Pretty JSON with a trailing newline; identical bundles give identical
    /// bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<CertificateBundle, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed bundle: {e}"))
    }
}

/// What a successful check covered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub certificates: usize,
    pub tree_branches: usize,
    pub cosets: usize,
    pub verdicts: usize,
}

fn fail<T>(section: &str, msg: impl std::fmt::Display) -> Result<T, String> {
    Err(format!("{section}: {msg}"))
}

pub fn verify_bundle(text: &str) -> Result<VerifySummary, String> {
    let b = CertificateBundle::from_json(text)?;
    verify(&b)
}

pub fn verify(b: &CertificateBundle) -> Result<VerifySummary, String> {
    if b.schema != SCHEMA {
        return fail("schema", format!("unsupported {:?}", b.schema));
    }
    if b.tool.name != TOOL {
        return fail("tool", format!("unknown producer {:?}", b.tool.name));
    }

    // manifold
    let file = ManifoldFile::parse(&b.manifold.text).map_err(|e| format!("manifold: {e}"))?;
    if file.to_text() != b.manifold.text {
        return fail("manifold", "text is not in canonical form");
    }
    if file.name != b.manifold.name || file.trusted != b.manifold.trusted || file.provenance != b.manifold.provenance {
        return fail("manifold", "echoed metadata differs from the data text");
    }
    let m = Manifold::from_file(file).map_err(|e| format!("manifold: {e}"))?;
    let p = m.presentation();
    let al = p.alphabet();
    let rank = p.rank();

    // homology: check the Smith certificate, do not recompute it
    let h = &b.homology;
    let a = matrix_from(&h.relation_matrix, rank).map_err(|e| format!("homology: {e}"))?;
    let rows: Vec<Vec<BigInt>> = p.relators().iter().map(|r| exponent_vector(r, rank).0).collect();
    if a != IntMatrix::from_rows(rank, &rows) {
        return fail("homology", "relation matrix does not match the relators");
    }
    let n_rel = p.relators().len();
    let smith = SmithForm {
        s: matrix_from(&h.smith.s, rank).map_err(|e| format!("homology: {e}"))?,
        u: matrix_from(&h.smith.u, n_rel).map_err(|e| format!("homology: {e}"))?,
        v: matrix_from(&h.smith.v, rank).map_err(|e| format!("homology: {e}"))?,
    };
    if smith.s.rows() != n_rel || smith.u.rows() != n_rel || smith.v.rows() != rank {
        return fail("homology", "Smith matrices have the wrong shape");
    }
    smith.check(&a).map_err(|e| format!("homology: {e}"))?;
    let diag = smith.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion: Vec<BigInt> = diag.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    if h.free_rank != rank - nonzero || h.torsion != ints(&torsion) {
        return fail("homology", "invariants do not follow from the Smith form");
    }
    let invariants = crate::abelian::AbelianInvariants {
        free_rank: h.free_rank,
        torsion: torsion.clone(),
    };
    if h.group != invariants.to_string() {
        return fail("homology", "group description is wrong");
    }
    if let Some((fr, t)) = &m.file.expect.homology {
        if *fr != h.free_rank || ints(&t.iter().map(|v| BigInt::from(*v)).collect::<Vec<_>>()) != h.torsion {
            return fail("homology", "differs from the expected invariants");
        }
    }
    let class_names = class_names(&m);
    if h.classes.len() != class_names.len() {
        return fail("homology", "class list differs");
    }
    for (c, name) in h.classes.iter().zip(&class_names) {
        let w = m.word(name).ok_or_else(|| format!("homology: unknown word {name}"))?;
        let expected = class_entry(name, w, al, &smith, rank);
        if *c != expected {
            return fail("homology", format!("class of {name} is wrong"));
        }
    }
    for (name, v) in &m.file.expect.classes {
        let c = h.classes.iter().find(|c| &c.name == name).ok_or_else(|| format!("homology: no class for {name}"))?;
        if c.exponents != v.iter().map(|x| Int::Small(*x)).collect::<Vec<_>>() {
            return fail("homology", format!("exponents of {name} differ from the expected"));
        }
    }

    // framing
    let f = &b.framing;
    let lambda_class = h.classes.iter().find(|c| c.name == "lambda").ok_or("framing: no class for lambda")?;
    if f.matrix != m.file.framing
        || f.mu != al.format(&m.record.mu)
        || f.lambda != al.format(&m.record.lambda)
        || f.homological != lambda_class.rationally_null
        || !f.homological
    {
        return fail("framing", "not a checked homological framing");
    }

    // identities
    let ids = &b.identities;
    if ids.claims.len() != m.claims.len() {
        return fail("identities", "claim list differs from the data");
    }
    let mut certified: HashSet<String> = HashSet::new();
    for (e, c) in ids.claims.iter().zip(&m.claims) {
        let cert = DerivationCertificate::from_json(&e.certificate, al).map_err(|err| format!("identities: {}: {err}", c.label))?;
        if e.label != c.label || e.bound != c.depth.to_string() {
            return fail("identities", format!("entry {} does not match the data", e.label));
        }
        if cert.lhs != c.lhs || cert.rhs != c.rhs {
            return fail("identities", format!("{}: certificate proves a different equation", c.label));
        }
        if cert.depth() != e.depth || !c.depth.admits(e.depth) {
            return fail("identities", format!("{}: depth {} violates {}", c.label, e.depth, c.depth));
        }
        replay_detailed(p, &cert).map_err(|err| format!("identities: {}: {err}", c.label))?;
        certified.insert(c.label.clone());
    }
    let mut certificates = ids.claims.len();
    match (&ids.commutator, &m.commutator) {
        (None, None) => {}
        (Some(e), Some(c)) => {
            if e.label != c.label {
                return fail("identities", "commutator entry does not match the data");
            }
            match (e.status.as_str(), &e.certificate, e.depth) {
                ("certified", Some(v), Some(d)) => {
                    let cert = DerivationCertificate::from_json(v, al).map_err(|err| format!("identities: commutator: {err}"))?;
                    if cert.lhs != c.lhs || cert.rhs != c.rhs || cert.depth() != d {
                        return fail("identities", "commutator certificate does not match");
                    }
                    replay_detailed(p, &cert).map_err(|err| format!("identities: commutator: {err}"))?;
                    certificates += 1;
                }
                ("not_found", None, None) => {}
                _ => return fail("identities", "malformed commutator entry"),
            }
        }
        _ => return fail("identities", "commutator entry does not match the data"),
    }
    if ids.knowledge_base != kb_entries(&m) {
        return fail("identities", "knowledge base listing differs from the data");
    }
    for i in 0..m.kb.identities().len() {
        m.check_identity(i, |l| certified.contains(l)).map_err(|e| format!("identities: {e}"))?;
    }

    // lemma
    let l = &b.lemma;
    let tree = l.tree.to_tree(&m.kb).map_err(|e| format!("lemma: {e}"))?;
    let decl = m.file.lemma.as_ref().ok_or("lemma: data file has no lemma section")?;
    let expected_shape = crate::pipeline::lemma_inputs(&m, decl).map_err(|e| format!("lemma: {e}"))?;
    if (tree.hypotheses.clone(), tree.split.clone(), tree.goal) != expected_shape {
        return fail("lemma", "tree does not prove the lemma stated in the data");
    }
    let notes = crate::pipeline::nontriviality_notes(&m, &decl.split, &smith).map_err(|e| format!("lemma: {e}"))?;
    if tree.nontriviality != notes {
        return fail("lemma", "nontriviality justifications are wrong");
    }
    let lemma = VerifiedLemma::new(&m.kb, &tree).map_err(|e| format!("lemma: {e}"))?;
    if l.statement != lemma.statement()
        || l.contradictory != tree.contradictory_branches()
        || l.surviving != tree.surviving_branches()
    {
        return fail("lemma", "summary does not match the tree");
    }

    // quotient: table consistency, then a deterministic re-enumeration
    let q = &b.quotient;
    let killed = m.record.peripheral_killed();
    let table = CosetTable::from_rows(rank, q.table.clone(), true);
    let quotient = VerifiedQuotient::new(&m.record, &table).map_err(|e| format!("quotient: {e}"))?;
    let again = todd_coxeter(&killed, &[], b.config.max_cosets);
    if again.rows() != table.rows() {
        return fail("quotient", "table differs from the enumeration");
    }
    if q.order != quotient.order() || Some(q.order) != group_order(&table) {
        return fail("quotient", "order does not match the table");
    }
    let orders = crate::pipeline::element_orders(&m, &table).map_err(|e| format!("quotient: {e}"))?;
    if q.element_orders != orders {
        return fail("quotient", "element orders do not match the table");
    }
    if q.cyclic != crate::pipeline::is_cyclic(&table) {
        return fail("quotient", "cyclicity flag is wrong");
    }
    if let Some(e) = m.file.expect.quotient_order {
        if e != q.order as u64 {
            return fail("quotient", "differs from the expected order");
        }
    }

    // verdicts
    let slopes: Vec<String> = match &b.verdicts {
        None => Vec::new(),
        Some(v) if v.is_empty() => return fail("verdicts", "empty section should be omitted"),
        Some(v) => v.iter().map(|e| e.slope.clone()).collect(),
    };
    if slopes != b.config.slopes {
        return fail("verdicts", "slopes differ from the configuration");
    }
    for e in b.verdicts.iter().flatten() {
        let r: Slope = e.slope.parse().map_err(|err| format!("verdicts: {err}"))?;
        if r.to_string() != e.slope {
            return fail("verdicts", format!("slope {:?} is not reduced", e.slope));
        }
        let v = verdict(&m.record, r, Some(&lemma), Some(&quotient)).map_err(|err| format!("verdicts: {err}"))?;
        if let Outcome::NotOrderable { witness, .. } = &v.outcome {
            if !witness.recheck() {
                return fail("verdicts", format!("{r}: witness fails"));
            }
        }
        if VerdictEntry::from_verdict(&v) != *e {
            return fail("verdicts", format!("{r}: entry does not match the recomputed verdict"));
        }
    }

    Ok(VerifySummary {
        certificates,
        tree_branches: tree.branches.len(),
        cosets: table.len(),
        verdicts: slopes.len(),
    })
}

/// Words whose classes the bundle records: the peripheral pair, then the
/// split words of the lemma.
pub(crate) fn class_names(m: &Manifold) -> Vec<String> {
    let mut names = vec!["mu".to_string(), "lambda".to_string()];
    for (n, _) in &m.file.expect.classes {
        if !names.contains(n) {
            names.push(n.clone());
        }
    }
    if let Some(l) = &m.file.lemma {
        for n in &l.split {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    names
}

pub(crate) fn class_entry(name: &str, w: &crate::word::Word, al: &crate::word::Alphabet, smith: &SmithForm, rank: usize) -> ClassEntry {
    let e = exponent_vector(w, rank);
    let class = crate::abelian::class_in(smith, &e);
    ClassEntry {
        name: name.to_string(),
        word: al.format(w),
        exponents: ints(&e.0),
        torsion: class.torsion.iter().map(|(d, r)| [Int::from(d), Int::from(r)]).collect(),
        free: ints(&class.free),
        order: class.order().as_ref().map(Int::from),
        rationally_null: class.is_rationally_trivial(),
    }
}

pub(crate) fn kb_entries(m: &Manifold) -> Vec<KbEntry> {
    m.kb
        .identities()
        .iter()
        .map(|id| KbEntry {
            label: id.label.clone(),
            identity: m.kb.identity_string(id),
            by: match &id.provenance {
                crate::order::Provenance::Definition => "definition".into(),
                crate::order::Provenance::Relator => "relator".into(),
                crate::order::Provenance::Certificate(l) => format!("claim {l}"),
            },
        })
        .collect()
}
