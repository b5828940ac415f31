//! Finite group presentations.

use crate::word::{Alphabet, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self, WordError> {
        for r in &relators {
            alphabet.check(r)?;
        }
        Ok(Presentation { alphabet, relators })
    }

    /// Parses `generators` (e.g. `"ab"`) and relator strings.
    pub fn parse(generators: &str, relators: &[&str]) -> Result<Self, WordError> {
        let alphabet = Alphabet::new(generators.chars().filter(|c| !c.is_whitespace()))?;
        let relators = relators
            .iter()
            .map(|r| alphabet.parse_word(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation { alphabet, relators })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// The same generators with `extra` appended to the relators.
    pub fn with_relators<I: IntoIterator<Item = Word>>(&self, extra: I) -> Presentation {
        let mut relators = self.relators.clone();
        relators.extend(extra);
        Presentation {
            alphabet: self.alphabet.clone(),
            relators,
        }
    }

    pub fn format(&self, w: &Word) -> String {
        self.alphabet.format(w)
    }
}
