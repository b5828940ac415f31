//! Slopes, framings, Dehn-filled presentations and per-slope verdicts.
//!
//! A verdict of non-orderability for `r` in `(-inf, -1)` is disjunctive.
//! Either the peripheral subgroup dies in `pi1(M(r))`, which then is a
//! quotient of the finite peripheral-killed group; or it survives, and the
//! Clay–Watson interval criterion applies with endpoints `-1/1` and `-n/1`
//! using the proved implication `mu^-1 lambda < 1 => mu^-n lambda < 1`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use num_bigint::BigInt;

use crate::abelian::{exponent_vector, filled_homology, is_rationally_nullhomologous, AbelianInvariants};
use crate::coset::{group_order, CosetTable};
use crate::order::{verify_tree, Goal, KnowledgeBase, ProofTree, Sign};
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FillingError {
    #[error("invalid slope {0:?}")]
    InvalidSlope(String),
    #[error("framing matrix has determinant {0}, not +-1")]
    NotUnimodular(i128),
    #[error("slope coefficient overflow")]
    Overflow,
    #[error("missing prerequisite: {0}")]
    MissingPrerequisite(&'static str),
    #[error("lemma rejected: {0}")]
    Lemma(String),
    #[error("quotient rejected: {0}")]
    Quotient(String),
}

/// Reduced `p/q` with `q >= 0`; `1/0` is the only slope with `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Result<Slope, FillingError> {
        Self::reduce(i128::from(p), i128::from(q))
    }

    fn reduce(p: i128, q: i128) -> Result<Slope, FillingError> {
        if p == 0 && q == 0 {
            return Err(FillingError::InvalidSlope("0/0".into()));
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        // -1/0 and 1/0 are the same curve
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope {
            p: i64::try_from(p).map_err(|_| FillingError::Overflow)?,
            q: i64::try_from(q).map_err(|_| FillingError::Overflow)?,
        })
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    pub fn is_infinite(self) -> bool {
        self.q == 0
    }

    /// Strictly inside `(-inf, -1)`.
    pub fn in_witness_range(self) -> bool {
        self.q > 0 && i128::from(self.p) < -i128::from(self.q)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = FillingError;

    fn from_str(s: &str) -> Result<Slope, FillingError> {
        let bad = || FillingError::InvalidSlope(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        Slope::new(p, q).map_err(|_| bad())
    }
}

/// Row-vector basis change: slope `(p, q)` maps to `(p, q) * M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FramingMatrix(pub [[i64; 2]; 2]);

impl FramingMatrix {
    pub const IDENTITY: FramingMatrix = FramingMatrix([[1, 0], [0, 1]]);

    pub fn determinant(&self) -> i128 {
        let m = self.0;
        i128::from(m[0][0]) * i128::from(m[1][1]) - i128::from(m[0][1]) * i128::from(m[1][0])
    }

    pub fn inverse(&self) -> Result<FramingMatrix, FillingError> {
        let d = self.determinant();
        if d.abs() != 1 {
            return Err(FillingError::NotUnimodular(d));
        }
        let d = d as i64;
        let [[a, b], [c, e]] = self.0;
        Ok(FramingMatrix([[d * e, -d * b], [-d * c, d * a]]))
    }
}

pub fn convert_framing(s: Slope, m: &FramingMatrix) -> Result<Slope, FillingError> {
    let d = m.determinant();
    if d.abs() != 1 {
        return Err(FillingError::NotUnimodular(d));
    }
    let [[a, b], [c, e]] = m.0.map(|r| r.map(i128::from));
    let (p, q) = (i128::from(s.p), i128::from(s.q));
    Slope::reduce(p * a + q * c, p * b + q * e)
}

/// Topological facts about the manifold taken on trust from the data file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrustedFlags {
    pub hyperbolic: bool,
    pub irreducible: bool,
    pub incompressible_boundary: bool,
}

impl TrustedFlags {
    pub const NAMES: [&'static str; 3] = ["hyperbolic", "irreducible", "incompressible-boundary"];

    pub fn set(&mut self, name: &str) -> bool {
        match name {
            "hyperbolic" => self.hyperbolic = true,
            "irreducible" => self.irreducible = true,
            "incompressible-boundary" => self.incompressible_boundary = true,
            _ => return false,
        }
        true
    }

    pub fn names(&self) -> Vec<&'static str> {
        let on = [self.hyperbolic, self.irreducible, self.incompressible_boundary];
        Self::NAMES.iter().zip(on).filter(|(_, b)| *b).map(|(n, _)| *n).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldRecord {
    pub presentation: Presentation,
    /// Peripheral words in the source framing.
    pub source_meridian: Word,
    pub source_longitude: Word,
    /// Homological basis in terms of the source basis.
    pub framing: FramingMatrix,
    /// Homological meridian and longitude.
    pub mu: Word,
    pub lambda: Word,
    pub flags: TrustedFlags,
    pub provenance: String,
}

impl ManifoldRecord {
    /// The homological basis is read off the framing rows: `mu = m^M00 l^M01`
    /// and `lambda = m^M10 l^M11`.
    pub fn new(
        presentation: Presentation,
        source_meridian: Word,
        source_longitude: Word,
        framing: FramingMatrix,
        flags: TrustedFlags,
        provenance: String,
    ) -> Result<Self, FillingError> {
        framing.inverse()?;
        let [[a, b], [c, d]] = framing.0;
        let mu = source_meridian.pow(a).compose(&source_longitude.pow(b));
        let lambda = source_meridian.pow(c).compose(&source_longitude.pow(d));
        Ok(ManifoldRecord {
            presentation,
            source_meridian,
            source_longitude,
            framing,
            mu,
            lambda,
            flags,
            provenance,
        })
    }

    /// A homological framing needs a rationally nullhomologous longitude.
    pub fn framing_is_homological(&self) -> bool {
        is_rationally_nullhomologous(&self.lambda, &self.presentation)
    }

    /// `mu^p lambda^q`.
    pub fn slope_word(&self, r: Slope) -> Word {
        self.mu.pow(r.p).compose(&self.lambda.pow(r.q))
    }

    /// `H_1` of the filling, from exponent sums rather than the long word.
    pub fn filled_homology(&self, r: Slope) -> AbelianInvariants {
        let rank = self.presentation.rank();
        let rows: Vec<Vec<BigInt>> = self
            .presentation
            .relators()
            .iter()
            .map(|w| exponent_vector(w, rank).0)
            .collect();
        let class = exponent_vector(&self.mu, rank).scaled_add(
            &BigInt::from(r.p),
            &exponent_vector(&self.lambda, rank),
            &BigInt::from(r.q),
        );
        filled_homology(&rows, rank, &class)
    }

    pub fn peripheral_killed(&self) -> Presentation {
        self.presentation.with_relators([self.mu.clone(), self.lambda.clone()])
    }
}

pub fn filled_presentation(rec: &ManifoldRecord, r: Slope) -> Presentation {
    rec.presentation.with_relators([rec.slope_word(r)])
}

/// A proof tree checked to establish `mu^-1 lambda < 1 => mu^-n lambda < 1`
/// for all `n >= 1`. Only [`VerifiedLemma::new`] builds one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifiedLemma {
    statement: String,
}

impl VerifiedLemma {
    /// The tree must verify over `kb`, assume exactly `tail NEG`, and have goal
    /// `base^k tail NEG` where `kb` defines `base = mu^-1` and
    /// `tail = mu^-1 lambda`; every split word needs a nontriviality note.
    /// The identities of `kb` are trusted to hold in the group.
    pub fn new(kb: &KnowledgeBase, tree: &ProofTree) -> Result<Self, FillingError> {
        let err = FillingError::Lemma;
        verify_tree(kb, tree).map_err(err)?;
        let Goal::PowerFamily { base, tail, sign: Sign::Neg } = tree.goal else {
            return Err(err("goal is not a negative power family".into()));
        };
        if tree.hypotheses != [crate::order::SignAtom::new(tail, Sign::Neg)] {
            return Err(err("hypothesis must be exactly the family tail negative".into()));
        }
        let mu = kb.node("mu").map_err(|e| err(e.to_string()))?;
        let lambda = kb.node("lambda").map_err(|e| err(e.to_string()))?;
        let base_ok = kb.identities().iter().any(|id| id.lhs == Some(base) && id.inversion() == Some(mu));
        let tail_ok = kb
            .identities()
            .iter()
            .any(|id| id.lhs == Some(tail) && id.left_quotient() == Some((mu, lambda)));
        if !base_ok || !tail_ok {
            return Err(err("family words are not mu^-1 and mu^-1 lambda".into()));
        }
        if tree.nontriviality.len() != tree.split.len() {
            return Err(err("split words lack nontriviality justifications".into()));
        }
        Ok(VerifiedLemma {
            statement: "mu^-1 lambda < 1 implies mu^-n lambda < 1 for all n >= 1".into(),
        })
    }

    pub fn statement(&self) -> &str {
        &self.statement
    }
}

/// A complete coset table for the trivial subgroup of the peripheral-killed
/// group, consistent with every relator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifiedQuotient {
    order: usize,
}

impl VerifiedQuotient {
    pub fn new(rec: &ManifoldRecord, table: &CosetTable) -> Result<Self, FillingError> {
        let err = FillingError::Quotient;
        if !table.subgroup_is_trivial() {
            return Err(err("table is not for the trivial subgroup".into()));
        }
        table.verify(&rec.peripheral_killed(), &[]).map_err(err)?;
        let order = group_order(table).ok_or_else(|| err("enumeration incomplete".into()))?;
        Ok(VerifiedQuotient { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

pub const ORIENTATION_NOTE: &str = "the interval is read as the open interval between the endpoint slopes, whichever order they are listed in";
pub const PERIPHERAL_NOTE: &str = "applies when the peripheral subgroup survives in the filled group";

/// Clay–Watson data for one slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwWitness {
    pub slope: Slope,
    /// `p0/q0 = -1/1`
    pub first: Slope,
    /// `p1/q1 = -n/1`
    pub second: Slope,
    pub n: i64,
    pub checks: Vec<(String, bool)>,
    pub implication: String,
}

impl CwWitness {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    /// Recomputes every check from the slopes alone.
    pub fn recheck(&self) -> bool {
        match witness_checks(self.slope, self.n) {
            Some((first, second, checks)) => {
                first == self.first && second == self.second && checks == self.checks && self.holds()
            }
            None => false,
        }
    }
}

/// Endpoints and labelled sign checks.
type WitnessData = (Slope, Slope, Vec<(String, bool)>);

fn witness_checks(r: Slope, n: i64) -> Option<WitnessData> {
    let first = Slope::new(-1, 1).ok()?;
    let second = Slope::new(n.checked_neg()?, 1).ok()?;
    let (p, q) = (i128::from(r.p), i128::from(r.q));
    let (p0, q0, p1, q1) = (-1i128, 1i128, i128::from(second.p), 1i128);
    let lo = p1.min(p0);
    let hi = p1.max(p0);
    let checks = vec![
        ("q > 0".to_string(), q > 0),
        ("q0 > 0".to_string(), q0 > 0),
        ("q1 > 0".to_string(), q1 > 0),
        ("p < 0".to_string(), p < 0),
        ("p0 < 0".to_string(), p0 < 0),
        ("p1 < 0".to_string(), p1 < 0),
        // with unit denominators, lo < p/q < hi iff lo*q < p < hi*q
        (format!("{lo} < {r} < {hi}"), lo * q < p && p < hi * q),
    ];
    Some((first, second, checks))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applicable {
    Witness(CwWitness),
    NotApplicable,
}

/// Minimal `n = floor(-p/q) + 1`, so `-n < r < -1`.
pub fn cw_witness(r: Slope, lemma: &VerifiedLemma) -> Applicable {
    if !r.in_witness_range() {
        return Applicable::NotApplicable;
    }
    let n = (-r.p).div_euclid(r.q) + 1;
    let Some((first, second, checks)) = witness_checks(r, n) else {
        return Applicable::NotApplicable;
    };
    Applicable::Witness(CwWitness {
        slope: r,
        first,
        second,
        n,
        checks,
        implication: lemma.statement().to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    NotOrderable {
        /// Peripheral subgroup killed: quotient of a group of this order.
        quotient_order: usize,
        /// Peripheral subgroup survives.
        witness: CwWitness,
    },
    Unknown {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub slope: Slope,
    pub filled_homology: AbelianInvariants,
    pub outcome: Outcome,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self.outcome {
            Outcome::NotOrderable { .. } => "NOT_ORDERABLE",
            Outcome::Unknown { .. } => "UNKNOWN",
        }
    }
}

pub fn verdict(
    rec: &ManifoldRecord,
    r: Slope,
    lemma: Option<&VerifiedLemma>,
    quotient: Option<&VerifiedQuotient>,
) -> Result<Verdict, FillingError> {
    let lemma = lemma.ok_or(FillingError::MissingPrerequisite("verified ordering lemma"))?;
    let quotient = quotient.ok_or(FillingError::MissingPrerequisite("verified peripheral quotient"))?;
    let filled_homology = rec.filled_homology(r);
    let unknown = |reason: String| Outcome::Unknown { reason };
    let outcome = if !(rec.flags.irreducible && rec.flags.incompressible_boundary) {
        unknown("irreducibility and incompressible boundary are not declared".into())
    } else {
        match cw_witness(r, lemma) {
            Applicable::Witness(witness) if witness.holds() => Outcome::NotOrderable {
                quotient_order: quotient.order(),
                witness,
            },
            _ if r.p == 0 => unknown(format!(
                "longitudinal filling lies outside (-inf, -1); its H1 = {filled_homology} has torsion, \
                 which rules out orderability by a separate argument not certified here"
            )),
            _ if r.is_infinite() => unknown("meridional filling lies outside (-inf, -1)".into()),
            _ => unknown(format!("{r} lies outside (-inf, -1)")),
        }
    };
    Ok(Verdict {
        slope: r,
        filled_homology,
        outcome,
    })
}
