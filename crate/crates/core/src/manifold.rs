//! Line-oriented manifold data files.
//!
//! Each non-blank line is `key: value`; `#` starts a comment line. Words use
//! lowercase letters for generators and uppercase for inverses. Products of
//! named words are written as space-separated tokens `name` or `name^k`;
//! tokens that are not registered names are read as literal words over the
//! generators and abbreviations.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::filling::{FillingError, FramingMatrix, ManifoldRecord, TrustedFlags};
use crate::order::{KnowledgeBase, OrderError, Provenance, Sign};
use crate::presentation::Presentation;
use crate::word::{Alphabet, DefinitionTable, Word, WordError};

/// The v2503 data shipped with the crate.
pub const BUNDLED_V2503: &str = include_str!("../data/v2503.manifold");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("{context}: {source}")]
    Word {
        context: String,
        #[source]
        source: WordError,
    },
    #[error("{0}")]
    Order(#[from] OrderError),
    #[error("{0}")]
    Framing(#[from] FillingError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Named { name: String, exponent: i64 },
    Literal(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Named { name, exponent: 1 } => f.write_str(name),
            Token::Named { name, exponent } => write!(f, "{name}^{exponent}"),
            Token::Literal(w) => f.write_str(w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthBound {
    Exact(usize),
    Within(usize),
}

impl DepthBound {
    pub fn admits(self, depth: usize) -> bool {
        match self {
            DepthBound::Exact(d) => depth == d,
            DepthBound::Within(d) => depth <= d,
        }
    }

    pub fn max(self) -> usize {
        match self {
            DepthBound::Exact(d) | DepthBound::Within(d) => d,
        }
    }
}

impl fmt::Display for DepthBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthBound::Exact(d) => write!(f, "exact {d}"),
            DepthBound::Within(d) => write!(f, "within {d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimDecl {
    pub label: String,
    pub lhs: Vec<Token>,
    pub rhs: Vec<Token>,
    pub depth: DepthBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum By {
    Definition,
    Relator,
    Claim(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityDecl {
    pub label: String,
    /// A registered name or `1`.
    pub lhs: String,
    pub rhs: Vec<(String, bool)>,
    pub by: By,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaDecl {
    pub hypotheses: Vec<(String, Sign)>,
    pub split: Vec<String>,
    /// `(base, tail, sign)`: `base^k tail` has `sign` for all `k >= 0`.
    pub goal: (String, String, Sign),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expectations {
    pub homology: Option<(usize, Vec<i64>)>,
    pub classes: Vec<(String, Vec<i64>)>,
    pub quotient_order: Option<u64>,
    pub element_orders: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ManifoldFile {
    pub name: String,
    pub generators: Vec<char>,
    pub relators: Vec<String>,
    pub meridian: String,
    pub longitude: String,
    pub framing: [[i64; 2]; 2],
    pub abbreviations: Vec<(char, String)>,
    pub words: Vec<(String, Vec<Token>)>,
    pub claims: Vec<ClaimDecl>,
    pub commute: Option<(String, String, DepthBound)>,
    pub identities: Vec<IdentityDecl>,
    pub lemma: Option<LemmaDecl>,
    pub trusted: Vec<String>,
    pub provenance: Vec<String>,
    pub expect: Expectations,
}

fn syntax(line: usize, message: impl Into<String>) -> ManifoldError {
    ManifoldError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_tokens(text: &str) -> Vec<Token> {
    text.split_whitespace()
        .map(|t| match t.split_once('^') {
            Some((name, e)) if e.parse::<i64>().is_ok() => Token::Named {
                name: name.to_string(),
                exponent: e.parse().expect("checked"),
            },
            _ if t.chars().all(|c| c.is_ascii_lowercase() || c == '_') => Token::Named {
                name: t.to_string(),
                exponent: 1,
            },
            _ => Token::Literal(t.to_string()),
        })
        .collect()
}

fn join_tokens(tokens: &[Token]) -> String {
    tokens.iter().map(Token::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_depth(line: usize, s: &str) -> Result<DepthBound, ManifoldError> {
    let bad = || syntax(line, format!("bad depth bound {s:?}"));
    let (kind, n) = s.trim().split_once(' ').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    match kind {
        "exact" => Ok(DepthBound::Exact(n)),
        "within" => Ok(DepthBound::Within(n)),
        _ => Err(bad()),
    }
}

fn parse_sign(line: usize, s: &str) -> Result<Sign, ManifoldError> {
    Sign::parse(s).ok_or_else(|| syntax(line, format!("bad sign {s:?}")))
}

fn parse_ints<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>, ManifoldError> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| syntax(line, format!("bad integer {t:?}"))))
        .collect()
}

fn split3(line: usize, s: &str) -> Result<(&str, &str, &str), ManifoldError> {
    let parts: Vec<&str> = s.split('|').map(str::trim).collect();
    match parts.as_slice() {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(syntax(line, "expected three '|'-separated fields")),
    }
}

impl ManifoldFile {
    pub fn parse(text: &str) -> Result<ManifoldFile, ManifoldError> {
        let mut f = ManifoldFile::default();
        let mut framing = None;
        let mut hypotheses = Vec::new();
        let mut split = None;
        let mut goal = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (key, value) = l.split_once(':').ok_or_else(|| syntax(line, "expected 'key: value'"))?;
            let value = value.trim();
            match key.trim() {
                "name" => f.name = value.to_string(),
                "generators" => {
                    f.generators = value
                        .split_whitespace()
                        .map(|g| {
                            let mut c = g.chars();
                            match (c.next(), c.next()) {
                                (Some(ch), None) => Ok(ch),
                                _ => Err(syntax(line, format!("generator {g:?} is not one letter"))),
                            }
                        })
                        .collect::<Result<_, _>>()?
                }
                "relator" => f.relators.push(value.to_string()),
                "meridian" => f.meridian = value.to_string(),
                "longitude" => f.longitude = value.to_string(),
                "framing" => {
                    let v: Vec<i64> = parse_ints(line, value)?;
                    let [a, b, c, d] = v.as_slice() else {
                        return Err(syntax(line, "framing needs four integers"));
                    };
                    framing = Some([[*a, *b], [*c, *d]]);
                }
                "define" => {
                    let (sym, w) = value.split_once('=').ok_or_else(|| syntax(line, "expected 'x = word'"))?;
                    let mut c = sym.trim().chars();
                    let (Some(sym), None) = (c.next(), c.next()) else {
                        return Err(syntax(line, "abbreviation must be one letter"));
                    };
                    f.abbreviations.push((sym, w.trim().to_string()));
                }
                "word" => {
                    let (name, w) = value.split_once('=').ok_or_else(|| syntax(line, "expected 'name = tokens'"))?;
                    f.words.push((name.trim().to_string(), parse_tokens(w)));
                }
                "claim" => {
                    let (label, eq, depth) = split3(line, value)?;
                    let (lhs, rhs) = eq.split_once('=').ok_or_else(|| syntax(line, "claim needs '='"))?;
                    f.claims.push(ClaimDecl {
                        label: label.to_string(),
                        lhs: parse_tokens(lhs),
                        rhs: parse_tokens(rhs),
                        depth: parse_depth(line, depth)?,
                    });
                }
                "commute" => {
                    let (pair, depth) = value.split_once('|').ok_or_else(|| syntax(line, "expected 'u v | bound'"))?;
                    let names: Vec<&str> = pair.split_whitespace().collect();
                    let [u, v] = names.as_slice() else {
                        return Err(syntax(line, "commute needs two names"));
                    };
                    f.commute = Some((u.to_string(), v.to_string(), parse_depth(line, depth)?));
                }
                "identity" => {
                    let (label, eq, by) = split3(line, value)?;
                    let (lhs, rhs) = eq.split_once('=').ok_or_else(|| syntax(line, "identity needs '='"))?;
                    let rhs = rhs
                        .split_whitespace()
                        .map(|t| match t.strip_suffix("^-1") {
                            Some(n) => (n.to_string(), true),
                            None => (t.to_string(), false),
                        })
                        .collect();
                    let by = match by.split_once(' ') {
                        None if by == "definition" => By::Definition,
                        None if by == "relator" => By::Relator,
                        Some(("claim", l)) => By::Claim(l.trim().to_string()),
                        _ => return Err(syntax(line, format!("bad justification {by:?}"))),
                    };
                    f.identities.push(IdentityDecl {
                        label: label.to_string(),
                        lhs: lhs.trim().to_string(),
                        rhs,
                        by,
                    });
                }
                "lemma-hypothesis" => {
                    let (w, s) = value.split_once(' ').ok_or_else(|| syntax(line, "expected 'word SIGN'"))?;
                    hypotheses.push((w.to_string(), parse_sign(line, s.trim())?));
                }
                "lemma-split" => split = Some(value.split_whitespace().map(String::from).collect()),
                "lemma-goal" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let [base, tail, s] = parts.as_slice() else {
                        return Err(syntax(line, "expected 'base tail SIGN'"));
                    };
                    goal = Some((base.to_string(), tail.to_string(), parse_sign(line, s)?));
                }
                "trusted" => f.trusted.extend(value.split_whitespace().map(String::from)),
                "provenance" => f.provenance.push(value.to_string()),
                "expect-homology" => {
                    let v: Vec<i64> = parse_ints(line, value)?;
                    let (&rank, torsion) = v.split_first().ok_or_else(|| syntax(line, "expected free rank"))?;
                    let rank = usize::try_from(rank).map_err(|_| syntax(line, "negative rank"))?;
                    f.expect.homology = Some((rank, torsion.to_vec()));
                }
                "expect-class" => {
                    let (name, v) = value.split_once(' ').ok_or_else(|| syntax(line, "expected 'name ints'"))?;
                    f.expect.classes.push((name.to_string(), parse_ints(line, v)?));
                }
                "expect-quotient" => {
                    f.expect.quotient_order = Some(value.parse().map_err(|_| syntax(line, "bad order"))?)
                }
                "expect-order" => {
                    let (name, v) = value.split_once(' ').ok_or_else(|| syntax(line, "expected 'name order'"))?;
                    let o = v.trim().parse().map_err(|_| syntax(line, "bad order"))?;
                    f.expect.element_orders.push((name.to_string(), o));
                }
                other => return Err(syntax(line, format!("unknown key {other:?}"))),
            }
        }
        f.framing = framing.ok_or(ManifoldError::Missing("framing"))?;
        if f.generators.is_empty() {
            return Err(ManifoldError::Missing("generators"));
        }
        if f.meridian.is_empty() || f.longitude.is_empty() {
            return Err(ManifoldError::Missing("peripheral words"));
        }
        match (split, goal) {
            (Some(split), Some(goal)) => {
                f.lemma = Some(LemmaDecl {
                    hypotheses,
                    split,
                    goal,
                })
            }
            (None, None) if hypotheses.is_empty() => {}
            _ => return Err(ManifoldError::Missing("complete lemma section")),
        }
        Ok(f)
    }

    /// Canonical text; `parse(to_text(f)) == f`.
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(o, "{k}: {v}");
        };
        if !self.name.is_empty() {
            put("name", self.name.clone());
        }
        put("generators", self.generators.iter().map(char::to_string).collect::<Vec<_>>().join(" "));
        for r in &self.relators {
            put("relator", r.clone());
        }
        put("meridian", self.meridian.clone());
        put("longitude", self.longitude.clone());
        let [[a, b], [c, d]] = self.framing;
        put("framing", format!("{a} {b} {c} {d}"));
        for (s, w) in &self.abbreviations {
            put("define", format!("{s} = {w}"));
        }
        for (n, t) in &self.words {
            put("word", format!("{n} = {}", join_tokens(t)));
        }
        for c in &self.claims {
            put(
                "claim",
                format!("{} | {} = {} | {}", c.label, join_tokens(&c.lhs), join_tokens(&c.rhs), c.depth),
            );
        }
        if let Some((u, v, d)) = &self.commute {
            put("commute", format!("{u} {v} | {d}"));
        }
        for id in &self.identities {
            let rhs: Vec<String> = id
                .rhs
                .iter()
                .map(|(n, inv)| if *inv { format!("{n}^-1") } else { n.clone() })
                .collect();
            let by = match &id.by {
                By::Definition => "definition".to_string(),
                By::Relator => "relator".to_string(),
                By::Claim(l) => format!("claim {l}"),
            };
            put("identity", format!("{} | {} = {} | {by}", id.label, id.lhs, rhs.join(" ")));
        }
        if let Some(l) = &self.lemma {
            for (w, s) in &l.hypotheses {
                put("lemma-hypothesis", format!("{w} {s}"));
            }
            put("lemma-split", l.split.join(" "));
            put("lemma-goal", format!("{} {} {}", l.goal.0, l.goal.1, l.goal.2));
        }
        if !self.trusted.is_empty() {
            put("trusted", self.trusted.join(" "));
        }
        for p in &self.provenance {
            put("provenance", p.clone());
        }
        let e = &self.expect;
        if let Some((r, t)) = &e.homology {
            let mut v = vec![r.to_string()];
            v.extend(t.iter().map(i64::to_string));
            put("expect-homology", v.join(" "));
        }
        for (n, v) in &e.classes {
            put("expect-class", format!("{n} {}", v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")));
        }
        if let Some(q) = e.quotient_order {
            put("expect-quotient", q.to_string());
        }
        for (n, q) in &e.element_orders {
            put("expect-order", format!("{n} {q}"));
        }
        o
    }
}

/// A word claim resolved to the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub label: String,
    pub lhs: Word,
    pub rhs: Word,
    pub depth: DepthBound,
}

/// A data file resolved against its own alphabet.
#[derive(Debug, Clone)]
pub struct Manifold {
    pub file: ManifoldFile,
    pub record: ManifoldRecord,
    pub definitions: DefinitionTable,
    /// Registered names with their words over the generators, in order:
    /// generators, abbreviations, `mu`, `lambda`, declared words.
    pub registry: Vec<(String, Word)>,
    pub claims: Vec<Claim>,
    pub commutator: Option<Claim>,
    pub kb: KnowledgeBase,
}

impl Manifold {
    pub fn parse(text: &str) -> Result<Manifold, ManifoldError> {
        Manifold::from_file(ManifoldFile::parse(text)?)
    }

    pub fn bundled() -> Manifold {
        Manifold::parse(BUNDLED_V2503).expect("bundled data is valid")
    }

    pub fn from_file(file: ManifoldFile) -> Result<Manifold, ManifoldError> {
        let werr = |context: &str| {
            let context = context.to_string();
            move |source| ManifoldError::Word { context, source }
        };
        let alphabet = Alphabet::new(file.generators.iter().copied()).map_err(werr("generators"))?;
        let relators = file
            .relators
            .iter()
            .map(|r| alphabet.parse_word(r).map_err(werr(r)))
            .collect::<Result<Vec<_>, _>>()?;
        let presentation = Presentation::new(alphabet.clone(), relators).map_err(werr("relators"))?;
        let m = alphabet.parse_word(&file.meridian).map_err(werr("meridian"))?;
        let l = alphabet.parse_word(&file.longitude).map_err(werr("longitude"))?;
        let mut flags = TrustedFlags::default();
        for t in &file.trusted {
            if !flags.set(t) {
                return Err(ManifoldError::Invalid(format!("unknown trusted flag {t:?}")));
            }
        }
        let record = ManifoldRecord::new(
            presentation,
            m,
            l,
            FramingMatrix(file.framing),
            flags,
            file.provenance.join("\n"),
        )?;

        let mut definitions = DefinitionTable::new(&alphabet);
        for (s, _) in &file.abbreviations {
            definitions.declare(*s).map_err(werr("abbreviation"))?;
        }
        for (s, w) in &file.abbreviations {
            definitions.define(*s, w).map_err(werr(&format!("abbreviation {s}")))?;
        }

        let mut registry: Vec<(String, Word)> = Vec::new();
        for (i, c) in alphabet.symbols().iter().enumerate() {
            registry.push((c.to_string(), Word::letter(crate::word::Letter::new(i, false))));
        }
        for (s, _) in &file.abbreviations {
            let w = definitions.parse_and_expand(&s.to_string()).map_err(werr("abbreviation"))?;
            registry.push((s.to_string(), w));
        }
        registry.push(("mu".into(), record.mu.clone()));
        registry.push(("lambda".into(), record.lambda.clone()));
        let mut ctx = Resolver {
            registry,
            definitions: &definitions,
        };
        for (name, tokens) in &file.words {
            if ctx.lookup(name).is_some() {
                return Err(ManifoldError::Invalid(format!("{name:?} is registered twice")));
            }
            let w = ctx.product(tokens)?;
            ctx.registry.push((name.clone(), w));
        }
        let registry = ctx.registry.clone();

        let claims = file
            .claims
            .iter()
            .map(|c| {
                Ok(Claim {
                    label: c.label.clone(),
                    lhs: ctx.product(&c.lhs)?,
                    rhs: ctx.product(&c.rhs)?,
                    depth: c.depth,
                })
            })
            .collect::<Result<Vec<_>, ManifoldError>>()?;
        let commutator = match &file.commute {
            Some((u, v, depth)) => {
                let (wu, wv) = (ctx.named(u)?, ctx.named(v)?);
                Some(Claim {
                    label: format!("{u} {v} commute"),
                    lhs: wu.compose(&wv),
                    rhs: wv.compose(&wu),
                    depth: *depth,
                })
            }
            None => None,
        };

        let names: Vec<&str> = registry.iter().map(|(n, _)| n.as_str()).collect();
        let mut kb = KnowledgeBase::new(&names)?;
        for id in &file.identities {
            let rhs: Vec<(&str, bool)> = id.rhs.iter().map(|(n, i)| (n.as_str(), *i)).collect();
            let provenance = match &id.by {
                By::Definition => Provenance::Definition,
                By::Relator => Provenance::Relator,
                By::Claim(l) => {
                    if !claims.iter().any(|c| &c.label == l) {
                        return Err(ManifoldError::Invalid(format!("identity {} cites unknown claim {l}", id.label)));
                    }
                    Provenance::Certificate(l.clone())
                }
            };
            kb.add_identity(&id.label, &id.lhs, &rhs, provenance)?;
        }
        Ok(Manifold {
            file,
            record,
            definitions,
            registry,
            claims,
            commutator,
            kb,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.record.presentation
    }

    pub fn word(&self, name: &str) -> Option<&Word> {
        self.registry.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }

    pub fn claim(&self, label: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.label == label)
    }

    /// The two sides of a knowledge-base identity over the generators.
    pub fn identity_sides(&self, index: usize) -> (Word, Word) {
        let id = &self.kb.identities()[index];
        let word = |n: usize| self.registry[n - 1].1.clone();
        let lhs = id.lhs.map_or_else(Word::identity, word);
        let rhs = id.rhs.iter().fold(Word::identity(), |acc, f| {
            let w = word(f.node);
            acc.compose(&if f.inverse { w.inverse() } else { w })
        });
        (lhs, rhs)
    }

    /// Checks that identity `index` follows from its stated justification;
    /// `certified` tells whether a claim label has a replayed certificate.
    pub fn check_identity(&self, index: usize, certified: impl Fn(&str) -> bool) -> Result<(), String> {
        let id = &self.kb.identities()[index];
        let (lhs, rhs) = self.identity_sides(index);
        match &id.provenance {
            Provenance::Definition => {
                if lhs != rhs {
                    return Err(format!("{}: sides are not freely equal", id.label));
                }
            }
            Provenance::Relator => {
                if id.lhs.is_some() {
                    return Err(format!("{}: relator form needs lhs 1", id.label));
                }
                let (core, _) = rhs.cyclic_reduce();
                let matches = self.presentation().relators().iter().any(|r| {
                    [r.clone(), r.inverse()].iter().any(|r| {
                        let (rc, _) = r.cyclic_reduce();
                        rc.len() == core.len() && (0..rc.len().max(1)).any(|k| rc.rotation(k) == core)
                    })
                });
                if !matches {
                    return Err(format!("{}: product is not a conjugate of a relator", id.label));
                }
            }
            Provenance::Certificate(label) => {
                let c = self.claim(label).ok_or_else(|| format!("{}: unknown claim {label}", id.label))?;
                let same = (c.lhs == lhs && c.rhs == rhs) || (c.lhs == rhs && c.rhs == lhs);
                if !same {
                    return Err(format!("{}: claim {label} states a different equation", id.label));
                }
                if !certified(label) {
                    return Err(format!("{}: claim {label} is not certified", id.label));
                }
            }
        }
        Ok(())
    }
}

struct Resolver<'a> {
    registry: Vec<(String, Word)>,
    definitions: &'a DefinitionTable,
}

impl Resolver<'_> {
    fn lookup(&self, name: &str) -> Option<&Word> {
        self.registry.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }

    fn named(&self, name: &str) -> Result<Word, ManifoldError> {
        self.lookup(name)
            .cloned()
            .ok_or_else(|| ManifoldError::Invalid(format!("{name:?} is not registered")))
    }

    fn product(&self, tokens: &[Token]) -> Result<Word, ManifoldError> {
        let mut acc = Word::identity();
        for t in tokens {
            let w = match t {
                Token::Named { name, exponent } => match self.lookup(name) {
                    Some(w) => w.pow(*exponent),
                    None if *exponent == 1 => self.literal(name)?,
                    None => return Err(ManifoldError::Invalid(format!("{name:?} is not registered"))),
                },
                Token::Literal(text) => self.literal(text)?,
            };
            acc = acc.compose(&w);
        }
        Ok(acc)
    }

    fn literal(&self, text: &str) -> Result<Word, ManifoldError> {
        self.definitions
            .parse_and_expand(text)
            .map_err(|source| ManifoldError::Word {
                context: format!("word {text:?}"),
                source,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_resolves() {
        let m = Manifold::bundled();
        let al = m.presentation().alphabet();
        assert_eq!(al.format(&m.record.mu), "BBaBBaB");
        assert_eq!(al.format(&m.record.lambda), "AABAAb");
        assert_eq!(al.format(m.word("x").unwrap()), "BBa");
        assert_eq!(al.format(m.word("mu_inv").unwrap()), "bAbbAbb");
        assert!(m.record.flags.irreducible && m.record.flags.incompressible_boundary);
        assert!(m.commutator.is_some());
        assert!(m.file.lemma.is_some());
    }

    #[test]
    fn text_round_trip() {
        let f = ManifoldFile::parse(BUNDLED_V2503).unwrap();
        let again = ManifoldFile::parse(&f.to_text()).unwrap();
        assert_eq!(f, again);
        assert_eq!(again.to_text(), f.to_text());
    }

    #[test]
    fn definitional_identities_hold_freely() {
        let m = Manifold::bundled();
        for (i, id) in m.kb.identities().iter().enumerate() {
            if !matches!(id.provenance, Provenance::Certificate(_)) {
                assert_eq!(m.check_identity(i, |_| false), Ok(()), "{}", id.label);
            } else {
                assert!(m.check_identity(i, |_| false).is_err());
                assert_eq!(m.check_identity(i, |_| true), Ok(()), "{}", id.label);
            }
        }
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let e = ManifoldFile::parse("generators: a b\nbogus line\n").unwrap_err();
        assert_eq!(e, syntax(2, "expected 'key: value'"));
        let e = ManifoldFile::parse("generators: a b\ncolour: red\n").unwrap_err();
        assert!(matches!(e, ManifoldError::Syntax { line: 2, .. }));
        assert_eq!(ManifoldFile::parse("generators: a b\n"), Err(ManifoldError::Missing("framing")));
    }

    #[test]
    fn bad_words_are_rejected() {
        let text = BUNDLED_V2503.replace("relator: aaBBaBBaabaababaab", "relator: aaBBaBBaabaabqbaab");
        assert!(matches!(Manifold::parse(&text), Err(ManifoldError::Word { .. })));
        let text = BUNDLED_V2503.replace("framing: 0 1 -1 0", "framing: 0 2 -1 0");
        assert!(matches!(Manifold::parse(&text), Err(ManifoldError::Framing(_))));
    }

    #[test]
    fn false_definitional_identity_is_caught() {
        let text = BUNDLED_V2503.replace("x = b^-1 b^-1 a | definition", "x = b^-1 a b^-1 | definition");
        let m = Manifold::parse(&text).unwrap();
        let i = m.kb.identity_index("x-def").unwrap();
        assert!(m.check_identity(i, |_| true).is_err());
    }
}
