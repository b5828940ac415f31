//! Free-group words over a small named alphabet.
//!
//! Text syntax: a lowercase letter is a generator, the matching uppercase
//! letter is its inverse, and `1` (or the empty string) is the identity.
//! The relator of the v2503 presentation reads `aaBBaBBaabaababaab`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("generator symbol {0:?} must be a lowercase ASCII letter")]
    InvalidSymbol(char),
    #[error("generator symbol {0:?} declared twice")]
    DuplicateSymbol(char),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),
    #[error("letter index {index} is outside an alphabet of rank {rank}")]
    AlphabetMismatch { index: usize, rank: usize },
    #[error("abbreviation {0:?} has no definition")]
    MissingDefinition(char),
    #[error("abbreviation {0:?} is defined in terms of itself")]
    CyclicDefinition(char),
    #[error("{0:?} is not an abbreviation")]
    NotAnAbbreviation(char),
}

/// A generator or its inverse.
///
/// Ordering is `a < A < b < B < ...`, which fixes the length-lexicographic
/// order used by the derivation search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    gen: u16,
    inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter {
            gen: u16::try_from(gen).expect("generator index fits in u16"),
            inverse,
        }
    }

    pub fn gen(self) -> usize {
        self.gen as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// Index used for coset table columns: `2*gen` for `g`, `2*gen+1` for `g^-1`.
    pub fn column(self) -> usize {
        2 * self.gen() + usize::from(self.inverse)
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if letters.last() == Some(&l.inv()) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index mentioned plus one (0 for the identity).
    pub fn rank_used(&self) -> usize {
        self.letters.iter().map(|l| l.gen() + 1).max().unwrap_or(0)
    }

    pub fn compose(&self, other: &Word) -> Word {
        // Only the junction can cancel.
        let mut keep = self.letters.len();
        let mut skip = 0;
        while keep > 0
            && skip < other.letters.len()
            && self.letters[keep - 1] == other.letters[skip].inv()
        {
            keep -= 1;
            skip += 1;
        }
        let mut letters = Vec::with_capacity(keep + other.letters.len() - skip);
        letters.extend_from_slice(&self.letters[..keep]);
        letters.extend_from_slice(&other.letters[skip..]);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    /// `u * w * u^-1`.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.compose(self).compose(&u.inverse())
    }

    /// Returns the cyclically reduced core `c` and the conjugator `u` with
    /// `self = u c u^-1`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut i = 0;
        while n >= 2 * i + 2 && self.letters[i] == self.letters[n - 1 - i].inv() {
            i += 1;
        }
        (
            Word {
                letters: self.letters[i..n - i].to_vec(),
            },
            Word {
                letters: self.letters[..i].to_vec(),
            },
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(f), Some(l)) if self.letters.len() > 1 => *f != l.inv(),
            _ => true,
        }
    }

    /// The cyclic rotation starting at `offset`: `w[offset..] w[..offset]`.
    /// Only meaningful (and only reduced) for cyclically reduced words.
    pub fn rotation(&self, offset: usize) -> Word {
        let mut letters = self.letters[offset..].to_vec();
        letters.extend_from_slice(&self.letters[..offset]);
        Word { letters }
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            letters: self.letters[..len].to_vec(),
        }
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word {
            letters: self.letters[start..].to_vec(),
        }
    }

    /// Free reduction of `self[..pos] * inserted * self[pos..]`.
    pub fn insert_at(&self, pos: usize, inserted: &Word) -> Word {
        Word::reduce(
            self.letters[..pos]
                .iter()
                .chain(inserted.letters.iter())
                .chain(self.letters[pos..].iter())
                .copied(),
        )
    }

    /// Exponent sum of every generator `< rank`.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0i64; rank];
        for l in &self.letters {
            sums[l.gen()] += l.sign();
        }
        sums
    }

    /// Short-lex comparison: length first, then letters.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.compose(rhs)
    }
}

/// An ordered set of generator symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self, WordError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        for (i, &c) in symbols.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(WordError::InvalidSymbol(c));
            }
            if symbols[..i].contains(&c) {
                return Err(WordError::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn rank(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, gen: usize) -> char {
        self.symbols[gen]
    }

    pub fn index_of(&self, symbol: char) -> Option<usize> {
        self.symbols.iter().position(|&c| c == symbol)
    }

    pub fn generator(&self, symbol: char) -> Result<Word, WordError> {
        let gen = self
            .index_of(symbol)
            .ok_or(WordError::UnknownSymbol(symbol))?;
        Ok(Word::letter(Letter::new(gen, false)))
    }

    fn parse_letter(&self, c: char) -> Result<Letter, WordError> {
        let lower = c.to_ascii_lowercase();
        let gen = self.index_of(lower).ok_or(WordError::UnknownSymbol(c))?;
        Ok(Letter::new(gen, c.is_ascii_uppercase()))
    }

    /// Parses and freely reduces a word. `"1"` and `""` are the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::identity());
        }
        let letters = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.parse_letter(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::reduce(letters))
    }

    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.letters().iter().find(|l| l.gen() >= self.rank()) {
            Some(l) => Err(WordError::AlphabetMismatch {
                index: l.gen(),
                rank: self.rank(),
            }),
            None => Ok(()),
        }
    }

    pub fn compose(&self, u: &Word, v: &Word) -> Result<Word, WordError> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.compose(v))
    }

    /// Canonical compact text form; the inverse of [`Alphabet::parse_word`].
    pub fn format(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        w.letters()
            .iter()
            .map(|l| {
                let c = self.symbols[l.gen()];
                if l.is_inverse() {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }

    /// Exponent-run form for reports, e.g. `a^2 b^-2 a`.
    pub fn format_powers(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        let letters = w.letters();
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let exp = (j - i) as i64 * l.sign();
            let c = self.symbols[l.gen()];
            parts.push(if exp == 1 {
                c.to_string()
            } else {
                format!("{c}^{exp}")
            });
            i = j;
        }
        parts.join(" ")
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.symbols.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", names.join(" "))
    }
}

/// Abbreviations layered on top of a base alphabet.
///
/// The extended alphabet lists the base generators first, so a base word is
/// also a word over the extended alphabet with the same letter indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionTable {
    extended: Alphabet,
    base_rank: usize,
    defs: Vec<Option<Word>>,
}

impl DefinitionTable {
    pub fn new(base: &Alphabet) -> Self {
        DefinitionTable {
            extended: base.clone(),
            base_rank: base.rank(),
            defs: Vec::new(),
        }
    }

    /// Adds an abbreviation symbol without a definition yet.
    pub fn declare(&mut self, symbol: char) -> Result<(), WordError> {
        let mut symbols = self.extended.symbols().to_vec();
        symbols.push(symbol);
        self.extended = Alphabet::new(symbols)?;
        self.defs.push(None);
        Ok(())
    }

    /// Defines (declaring if needed) `symbol` as `text`, parsed over the
    /// extended alphabet. Definitions may refer to other abbreviations.
    pub fn define(&mut self, symbol: char, text: &str) -> Result<(), WordError> {
        let idx = match self.extended.index_of(symbol) {
            Some(i) if i < self.base_rank => return Err(WordError::NotAnAbbreviation(symbol)),
            Some(i) => i,
            None => {
                self.declare(symbol)?;
                self.extended.rank() - 1
            }
        };
        let w = self.extended.parse_word(text)?;
        self.defs[idx - self.base_rank] = Some(w);
        Ok(())
    }

    pub fn extended(&self) -> &Alphabet {
        &self.extended
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn abbreviations(&self) -> impl Iterator<Item = (char, Option<&Word>)> + '_ {
        self.extended.symbols()[self.base_rank..]
            .iter()
            .zip(self.defs.iter())
            .map(|(&c, d)| (c, d.as_ref()))
    }

    /// Eager expansion to the base alphabet followed by free reduction.
    pub fn substitute(&self, w: &Word) -> Result<Word, WordError> {
        self.extended.check(w)?;
        let mut cache: Vec<Option<Word>> = vec![None; self.defs.len()];
        let mut out = Vec::new();
        for &l in w.letters() {
            let expanded = self.expand_letter(l.gen(), &mut cache, &mut Vec::new())?;
            if l.is_inverse() {
                out.extend(expanded.inverse().letters().iter().copied());
            } else {
                out.extend(expanded.letters().iter().copied());
            }
        }
        Ok(Word::reduce(out))
    }

    pub fn parse_and_expand(&self, text: &str) -> Result<Word, WordError> {
        self.substitute(&self.extended.parse_word(text)?)
    }

    fn expand_letter(
        &self,
        gen: usize,
        cache: &mut Vec<Option<Word>>,
        visiting: &mut Vec<usize>,
    ) -> Result<Word, WordError> {
        if gen < self.base_rank {
            return Ok(Word::letter(Letter::new(gen, false)));
        }
        let slot = gen - self.base_rank;
        if let Some(w) = &cache[slot] {
            return Ok(w.clone());
        }
        let symbol = self.extended.symbol(gen);
        if visiting.contains(&gen) {
            return Err(WordError::CyclicDefinition(symbol));
        }
        let def = self.defs[slot]
            .as_ref()
            .ok_or(WordError::MissingDefinition(symbol))?;
        visiting.push(gen);
        let mut out = Word::identity();
        for &l in def.letters() {
            let e = self.expand_letter(l.gen(), cache, visiting)?;
            out = if l.is_inverse() {
                out.compose(&e.inverse())
            } else {
                out.compose(&e)
            };
        }
        visiting.pop();
        cache[slot] = Some(out.clone());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b']).unwrap()
    }

    fn v2503_defs() -> DefinitionTable {
        let mut d = DefinitionTable::new(&ab());
        d.define('x', "BBa").unwrap();
        d.define('y', "baa").unwrap();
        d
    }

    #[test]
    fn reduce_examples() {
        let al = ab();
        assert_eq!(al.format(&al.parse_word("aAb").unwrap()), "b");
        assert!(al.parse_word("").unwrap().is_identity());
        assert!(al.parse_word("1").unwrap().is_identity());
        assert_eq!(al.format(&al.parse_word("BbB").unwrap()), "B");
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        assert_eq!(ab().parse_word("abc"), Err(WordError::UnknownSymbol('c')));
        assert_eq!(ab().parse_word("a^2"), Err(WordError::UnknownSymbol('^')));
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(
            Alphabet::new(['a', 'a']),
            Err(WordError::DuplicateSymbol('a'))
        );
        assert_eq!(Alphabet::new([]), Err(WordError::EmptyAlphabet));
        assert_eq!(Alphabet::new(['A']), Err(WordError::InvalidSymbol('A')));
    }

    #[test]
    fn compose_x_squared_with_b_inverse_is_mu() {
        let d = v2503_defs();
        let x = d.parse_and_expand("x").unwrap();
        let binv = ab().parse_word("B").unwrap();
        let mu = x.compose(&x).compose(&binv);
        assert_eq!(ab().format(&mu), "BBaBBaB");
    }

    #[test]
    fn compose_identity_and_inverse() {
        let al = ab();
        let w = al.parse_word("abAB").unwrap();
        assert_eq!(w.compose(&Word::identity()), w);
        let a = al.parse_word("a").unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn compose_rejects_foreign_letters() {
        let al = ab();
        let foreign = Word::letter(Letter::new(2, false));
        assert_eq!(
            al.compose(&foreign, &Word::identity()),
            Err(WordError::AlphabetMismatch { index: 2, rank: 2 })
        );
    }

    #[test]
    fn invert_examples() {
        let al = ab();
        let m = al.parse_word("Baabaa").unwrap();
        assert_eq!(al.format(&m.inverse()), "AABAAb");
        assert!(Word::identity().inverse().is_identity());
        assert_eq!(al.format(&al.parse_word("ab").unwrap().inverse()), "BA");
    }

    #[test]
    fn substitute_examples() {
        let d = v2503_defs();
        let lam = d.parse_and_expand("YYbb").unwrap();
        assert_eq!(ab().format(&lam), "AABAAb");
        let lhs = d.parse_and_expand("yAyyX").unwrap();
        let rhs = d.parse_and_expand("bayyX").unwrap();
        assert_eq!(lhs, rhs);
        let plain = ab().parse_word("abAB").unwrap();
        assert_eq!(d.substitute(&plain).unwrap(), plain);
    }

    #[test]
    fn substitute_errors() {
        let mut d = DefinitionTable::new(&ab());
        d.declare('z').unwrap();
        let z = d.extended().parse_word("z").unwrap();
        assert_eq!(d.substitute(&z), Err(WordError::MissingDefinition('z')));

        let mut c = DefinitionTable::new(&ab());
        c.declare('u').unwrap();
        c.define('v', "au").unwrap();
        c.define('u', "Vb").unwrap();
        let w = c.extended().parse_word("u").unwrap();
        assert!(matches!(
            c.substitute(&w),
            Err(WordError::CyclicDefinition(_))
        ));
        assert_eq!(
            c.define('a', "b"),
            Err(WordError::NotAnAbbreviation('a'))
        );
    }

    #[test]
    fn cyclic_reduce_examples() {
        let al = ab();
        let (core, u) = al.parse_word("abA").unwrap().cyclic_reduce();
        assert_eq!(al.format(&core), "b");
        assert_eq!(al.format(&u), "a");

        let r = al.parse_word("aaBBaBBaabaababaab").unwrap();
        let (core, u) = r.cyclic_reduce();
        assert_eq!(core, r);
        assert!(u.is_identity());

        let (core, u) = Word::identity().cyclic_reduce();
        assert!(core.is_identity() && u.is_identity());
    }

    #[test]
    fn format_powers_runs() {
        let al = ab();
        let mu = al.parse_word("BBaBBaB").unwrap();
        assert_eq!(al.format_powers(&mu), "b^-2 a b^-2 a b^-1");
    }

    fn letter_strategy() -> impl Strategy<Value = Letter> {
        (0usize..3, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i))
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(letter_strategy(), 0..max).prop_map(Word::reduce)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reduce_is_idempotent(raw in prop::collection::vec(letter_strategy(), 0..60)) {
            let once = Word::reduce(raw);
            let twice = Word::reduce(once.letters().iter().copied());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn compose_is_associative(u in word_strategy(30), v in word_strategy(30), w in word_strategy(30)) {
            prop_assert_eq!(u.compose(&v).compose(&w), u.compose(&v.compose(&w)));
        }

        #[test]
        fn inverse_laws(w in word_strategy(40)) {
            prop_assert!(w.compose(&w.inverse()).is_identity());
            prop_assert_eq!(w.inverse().inverse(), w.clone());
            let (core, u) = w.cyclic_reduce();
            prop_assert!(core.len() <= w.len());
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(core.conjugate_by(&u), w);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn serialization_round_trips(raw in prop::collection::vec(letter_strategy(), 0..10_000)) {
            let al = Alphabet::new(['a', 'b', 'c']).unwrap();
            let w = Word::reduce(raw);
            prop_assert_eq!(al.parse_word(&al.format(&w)).unwrap(), w);
        }
    }
}
