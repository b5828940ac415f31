//! Abelianization: exponent vectors, Smith normal form and first homology.

mod matrix;
mod snf;

#[cfg(test)]
#[path = "../../tests/support/oracles.rs"]
pub(crate) mod oracle;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

use crate::presentation::Presentation;
use crate::word::Word;

/// Exponent sum of each base generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<BigInt>);

impl ExponentVector {
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|v| i64::try_from(v).ok()).collect()
    }

    pub fn scaled_add(&self, k: &BigInt, other: &ExponentVector, l: &BigInt) -> ExponentVector {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| k * a + l * b)
                .collect(),
        )
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn exponent_vector(w: &Word, rank: usize) -> ExponentVector {
    ExponentVector(w.exponent_sums(rank).into_iter().map(BigInt::from).collect())
}

/// `Z^free_rank + Z/d1 + Z/d2 + ...` with `d1 | d2 | ...`, all `d > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Self {
        AbelianInvariants {
            free_rank,
            torsion: torsion.into_iter().map(BigInt::from).collect(),
        }
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    pub fn torsion_strings(&self) -> Vec<String> {
        self.torsion.iter().map(|d| d.to_string()).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Image of an element of `Z^n` in the quotient by the relator lattice,
/// in Smith coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass {
    /// `(modulus, residue)` for each torsion factor.
    pub torsion: Vec<(BigInt, BigInt)>,
    pub free: Vec<BigInt>,
}

impl HomologyClass {
    pub fn is_rationally_trivial(&self) -> bool {
        self.free.iter().all(|c| c.is_zero())
    }

    pub fn is_trivial(&self) -> bool {
        self.is_rationally_trivial() && self.torsion.iter().all(|(_, r)| r.is_zero())
    }

    /// Order of the class, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if !self.is_rationally_trivial() {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |acc, (d, r)| {
            acc.lcm(&(d / d.gcd(r)))
        }))
    }
}

/// The abelianization of a presentation together with the Smith data
/// needed to locate classes in it.
#[derive(Debug, Clone)]
pub struct Abelianization {
    rank: usize,
    relation_matrix: IntMatrix,
    smith: SmithForm,
}

impl Abelianization {
    pub fn of(p: &Presentation) -> Self {
        let rank = p.rank();
        let rows: Vec<Vec<BigInt>> = p
            .relators()
            .iter()
            .map(|r| exponent_vector(r, rank).0)
            .collect();
        Self::from_relation_rows(rank, &rows)
    }

    pub fn from_relation_rows(rank: usize, rows: &[Vec<BigInt>]) -> Self {
        let relation_matrix = IntMatrix::from_rows(rank, rows);
        let smith = smith_normal_form(&relation_matrix);
        Abelianization {
            rank,
            relation_matrix,
            smith,
        }
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relation_matrix
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn invariants(&self) -> AbelianInvariants {
        let diag = self.smith.diagonal();
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        AbelianInvariants {
            free_rank: self.rank - nonzero,
            torsion: diag.into_iter().filter(|d| *d > BigInt::one()).collect(),
        }
    }

    pub fn class_of_vector(&self, v: &ExponentVector) -> HomologyClass {
        class_in(&self.smith, v)
    }

    pub fn class_of(&self, w: &Word) -> HomologyClass {
        self.class_of_vector(&exponent_vector(w, self.rank))
    }
}

/// Class of `v` in the group presented by the Smith form: coordinates
/// `v * V`, the first `rank(S)` entries live in `Z/d_i`, the rest are free.
pub fn class_in(smith: &SmithForm, v: &ExponentVector) -> HomologyClass {
    let rank = smith.v.rows();
    let vv = &smith.v;
    let coords: Vec<BigInt> = (0..rank)
        .map(|j| {
            (0..rank)
                .map(|i| &v.0[i] * vv.get(i, j))
                .fold(BigInt::zero(), |a, b| a + b)
        })
        .collect();
    let diag = smith.diagonal();
    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for (j, c) in coords.into_iter().enumerate() {
        match diag.get(j) {
            Some(d) if !d.is_zero() => {
                if *d > BigInt::one() {
                    torsion.push((d.clone(), c.mod_floor(d)));
                }
            }
            _ => free.push(c),
        }
    }
    HomologyClass { torsion, free }
}

pub fn homology(p: &Presentation) -> AbelianInvariants {
    Abelianization::of(p).invariants()
}

/// True iff `[w]` has finite order in `H_1`.
pub fn is_rationally_nullhomologous(w: &Word, p: &Presentation) -> bool {
    Abelianization::of(p).class_of(w).is_rationally_trivial()
}

/// `|H_1|` of a filling whose added relator has class `slope_class`; used to
/// cross-check filled presentations without building long words.
pub fn filled_homology(base_rows: &[Vec<BigInt>], rank: usize, slope_class: &ExponentVector) -> AbelianInvariants {
    let mut rows = base_rows.to_vec();
    rows.push(slope_class.0.clone());
    Abelianization::from_relation_rows(rank, &rows).invariants()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    const RELATOR: &str = "aaBBaBBaabaababaab";
    const MU: &str = "BBaBBaB";
    const LAMBDA: &str = "AABAAb";

    fn v2503() -> Presentation {
        Presentation::parse("ab", &[RELATOR]).unwrap()
    }

    fn vec_of(p: &Presentation, s: &str) -> Vec<i64> {
        exponent_vector(&p.alphabet().parse_word(s).unwrap(), 2)
            .to_i64()
            .unwrap()
    }

    #[test]
    fn exponent_vectors() {
        let p = v2503();
        assert_eq!(vec_of(&p, MU), vec![2, -5]);
        assert_eq!(vec_of(&p, LAMBDA), vec![-4, 0]);
        assert_eq!(vec_of(&p, RELATOR), vec![10, 0]);
        assert_eq!(vec_of(&p, "1"), vec![0, 0]);
    }

    #[test]
    fn v2503_homology() {
        let p = v2503();
        assert_eq!(homology(&p), AbelianInvariants::new(1, vec![10]));
        let al = p.alphabet().clone();
        let mu = al.parse_word(MU).unwrap();
        let lam = al.parse_word(LAMBDA).unwrap();
        let killed = p.with_relators([mu, lam.clone()]);
        assert_eq!(homology(&killed), AbelianInvariants::new(0, vec![10]));
        let longitudinal = p.with_relators([lam]);
        assert_eq!(homology(&longitudinal), AbelianInvariants::new(1, vec![2]));
    }

    #[test]
    fn empty_presentation_is_free() {
        let p = Presentation::new(Alphabet::new(['a', 'b', 'c']).unwrap(), vec![]).unwrap();
        assert_eq!(homology(&p), AbelianInvariants::new(3, vec![]));
    }

    #[test]
    fn nullhomology() {
        let p = v2503();
        let al = p.alphabet();
        assert!(is_rationally_nullhomologous(&al.parse_word(LAMBDA).unwrap(), &p));
        assert!(!is_rationally_nullhomologous(&al.parse_word("b").unwrap(), &p));
        assert!(is_rationally_nullhomologous(&Word::identity(), &p));
    }

    #[test]
    fn class_orders() {
        let p = v2503();
        let ab = Abelianization::of(&p);
        let al = p.alphabet();
        assert_eq!(ab.class_of(&al.parse_word("a").unwrap()).order(), Some(BigInt::from(10)));
        assert_eq!(ab.class_of(&al.parse_word("b").unwrap()).order(), None);
        assert_eq!(ab.class_of(&al.parse_word(LAMBDA).unwrap()).order(), Some(BigInt::from(5)));
    }

    #[test]
    fn invert_negates_exponents() {
        let al = Alphabet::new(['a', 'b']).unwrap();
        let w = al.parse_word("aaBaBBBab").unwrap();
        let v = exponent_vector(&w, 2);
        let vi = exponent_vector(&w.inverse(), 2);
        assert!(v.0.iter().zip(&vi.0).all(|(a, b)| a == &-b));
    }

    #[test]
    fn invariants_display() {
        assert_eq!(AbelianInvariants::new(1, vec![10]).to_string(), "Z + Z/10");
        assert_eq!(AbelianInvariants::new(0, vec![]).to_string(), "0");
    }
}
