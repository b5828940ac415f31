use thiserror::Error;

use super::DerivationCertificate;
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: position {position} exceeds word length {len}")]
    PositionOutOfRange {
        step: usize,
        position: usize,
        len: usize,
    },
    #[error("step {step}: no relator with index {index}")]
    RelatorOutOfRange { step: usize, index: usize },
    #[error("step {step}: exponent {exponent} is not +1 or -1")]
    BadExponent { step: usize, exponent: i8 },
    #[error("certificate mentions a generator outside the presentation")]
    ForeignLetter,
    #[error("replay ends at a nonempty word of length {0}")]
    NonTrivialResidue(usize),
}

/// Replays every step on `lhs * rhs^-1` and requires the empty word at the
/// end. Nothing is repaired: the first bad step rejects the certificate.
pub fn replay_detailed(p: &Presentation, cert: &DerivationCertificate) -> Result<(), ReplayError> {
    let al = p.alphabet();
    if al.check(&cert.lhs).is_err() || al.check(&cert.rhs).is_err() {
        return Err(ReplayError::ForeignLetter);
    }
    let mut current = cert.lhs.compose(&cert.rhs.inverse());
    for (k, step) in cert.steps.iter().enumerate() {
        if al.check(&step.conjugator).is_err() {
            return Err(ReplayError::ForeignLetter);
        }
        if step.position > current.len() {
            return Err(ReplayError::PositionOutOfRange {
                step: k,
                position: step.position,
                len: current.len(),
            });
        }
        let relator = p
            .relators()
            .get(step.relator_index)
            .ok_or(ReplayError::RelatorOutOfRange {
                step: k,
                index: step.relator_index,
            })?;
        let relator = match step.exponent {
            1 => relator.clone(),
            -1 => relator.inverse(),
            e => return Err(ReplayError::BadExponent { step: k, exponent: e }),
        };
        let piece: Vec<_> = step
            .conjugator
            .letters()
            .iter()
            .chain(relator.letters())
            .copied()
            .chain(step.conjugator.letters().iter().rev().map(|l| l.inv()))
            .collect();
        current = current.insert_at(step.position, &Word::reduce(piece));
    }
    if current.is_identity() {
        Ok(())
    } else {
        Err(ReplayError::NonTrivialResidue(current.len()))
    }
}

pub fn replay_certificate(p: &Presentation, cert: &DerivationCertificate) -> bool {
    replay_detailed(p, cert).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::DerivationStep;

    fn v2503() -> Presentation {
        Presentation::parse("ab", &["aaBBaBBaabaababaab"]).unwrap()
    }

    #[test]
    fn empty_certificate_needs_free_equality() {
        let p = v2503();
        let al = p.alphabet();
        let same = DerivationCertificate {
            lhs: al.parse_word("abA").unwrap(),
            rhs: al.parse_word("abA").unwrap(),
            steps: vec![],
        };
        assert!(replay_certificate(&p, &same));
        let different = DerivationCertificate {
            lhs: al.parse_word("a").unwrap(),
            rhs: al.parse_word("b").unwrap(),
            steps: vec![],
        };
        assert_eq!(
            replay_detailed(&p, &different),
            Err(ReplayError::NonTrivialResidue(2))
        );
    }

    #[test]
    fn single_relator_insertion() {
        let p = v2503();
        let al = p.alphabet();
        let cert = DerivationCertificate {
            lhs: al.parse_word("aaBBaBBaabaababaab").unwrap(),
            rhs: Word::identity(),
            steps: vec![DerivationStep {
                position: 0,
                conjugator: Word::identity(),
                relator_index: 0,
                exponent: -1,
            }],
        };
        assert!(replay_certificate(&p, &cert));
    }

    #[test]
    fn bad_steps_are_rejected() {
        let p = v2503();
        let al = p.alphabet();
        let base = DerivationCertificate {
            lhs: al.parse_word("aaBBaBBaabaababaab").unwrap(),
            rhs: Word::identity(),
            steps: vec![DerivationStep {
                position: 19,
                conjugator: Word::identity(),
                relator_index: 0,
                exponent: -1,
            }],
        };
        assert!(matches!(
            replay_detailed(&p, &base),
            Err(ReplayError::PositionOutOfRange { .. })
        ));
        let mut c = base.clone();
        c.steps[0].position = 0;
        c.steps[0].relator_index = 1;
        assert!(matches!(
            replay_detailed(&p, &c),
            Err(ReplayError::RelatorOutOfRange { .. })
        ));
        c.steps[0].relator_index = 0;
        c.steps[0].exponent = 2;
        assert!(matches!(
            replay_detailed(&p, &c),
            Err(ReplayError::BadExponent { .. })
        ));
    }
}
