//! Equalities in a finitely presented group.
//!
//! A [`DerivationCertificate`] proves `lhs = rhs` by turning `lhs * rhs^-1`
//! into the empty word through a sequence of conjugated-relator insertions,
//! each followed by free reduction. Certificates are produced by
//! [`find_derivation`] and checked by [`replay_certificate`], which shares no
//! code with the search. Non-equalities are refuted by exhibiting a finite
//! quotient in which the two words have different images.

mod quotient;
mod replay;
mod search;

use thiserror::Error;

pub use quotient::{falsify_by_finite_quotient, QuotientTarget, QuotientWitness, TargetElement};
pub use replay::{replay_certificate, replay_detailed, ReplayError};
pub use search::{find_derivation, NotFound, Search, SearchBudget};

use crate::word::{Alphabet, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("malformed word: {0}")]
    Malformed(#[from] WordError),
}

/// Insert `conjugator * relator^exponent * conjugator^-1` at `position`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivationStep {
    pub position: usize,
    pub conjugator: Word,
    pub relator_index: usize,
    pub exponent: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivationCertificate {
    pub lhs: Word,
    pub rhs: Word,
    pub steps: Vec<DerivationStep>,
}

impl DerivationCertificate {
    /// Number of relator insertions.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        serde_json::json!({
            "claim": {
                "lhs": alphabet.format(&self.lhs),
                "rhs": alphabet.format(&self.rhs),
            },
            "steps": self.steps.iter().map(|s| serde_json::json!({
                "position": s.position,
                "conjugator": alphabet.format(&s.conjugator),
                "relator_index": s.relator_index,
                "exponent": s.exponent,
            })).collect::<Vec<_>>(),
        })
    }

    /// Inverse of [`DerivationCertificate::to_json`]. Rejects unknown or
    /// missing fields.
    pub fn from_json(value: &serde_json::Value, alphabet: &Alphabet) -> Result<Self, String> {
        let obj = value.as_object().ok_or("certificate is not an object")?;
        expect_keys(obj, &["claim", "steps"])?;
        let claim = obj["claim"].as_object().ok_or("claim is not an object")?;
        expect_keys(claim, &["lhs", "rhs"])?;
        let word = |v: &serde_json::Value| -> Result<Word, String> {
            let s = v.as_str().ok_or("word is not a string")?;
            let w = alphabet.parse_word(s).map_err(|e| e.to_string())?;
            if alphabet.format(&w) != s {
                return Err(format!("word {s:?} is not in canonical reduced form"));
            }
            Ok(w)
        };
        let lhs = word(&claim["lhs"])?;
        let rhs = word(&claim["rhs"])?;
        let raw_steps = obj["steps"].as_array().ok_or("steps is not an array")?;
        let mut steps = Vec::with_capacity(raw_steps.len());
        for s in raw_steps {
            let so = s.as_object().ok_or("step is not an object")?;
            expect_keys(so, &["position", "conjugator", "relator_index", "exponent"])?;
            let uint = |k: &str| -> Result<usize, String> {
                so[k]
                    .as_u64()
                    .and_then(|v| usize::try_from(v).ok())
                    .ok_or_else(|| format!("step field {k} is not a nonnegative integer"))
            };
            let exponent = so["exponent"]
                .as_i64()
                .and_then(|e| i8::try_from(e).ok())
                .ok_or("exponent is not a small integer")?;
            steps.push(DerivationStep {
                position: uint("position")?,
                conjugator: word(&so["conjugator"])?,
                relator_index: uint("relator_index")?,
                exponent,
            });
        }
        Ok(DerivationCertificate { lhs, rhs, steps })
    }
}

pub(crate) fn expect_keys(
    obj: &serde_json::Map<String, serde_json::Value>,
    keys: &[&str],
) -> Result<(), String> {
    for k in obj.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(format!("unexpected field {k:?}"));
        }
    }
    for k in keys {
        if !obj.contains_key(*k) {
            return Err(format!("missing field {k:?}"));
        }
    }
    Ok(())
}
