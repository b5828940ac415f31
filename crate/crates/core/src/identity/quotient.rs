//! Refuting `w1 = w2` by mapping onto a small finite group.

use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientTarget {
    Cyclic { order: u64 },
    Symmetric { degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetElement {
    Residue(u64),
    /// Image of each point; words act on the right, left to right.
    Perm(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientWitness {
    pub target: QuotientTarget,
    pub generator_images: Vec<TargetElement>,
    pub image1: TargetElement,
    pub image2: TargetElement,
}

impl QuotientWitness {
    /// Independent check: images are well-formed elements of the target,
    /// every relator maps to the identity, and the stored images of `w1`,
    /// `w2` are correct and differ.
    pub fn verify(&self, p: &Presentation, w1: &Word, w2: &Word) -> bool {
        if self.generator_images.len() != p.rank() {
            return false;
        }
        let valid = self.generator_images.iter().all(|g| match (&self.target, g) {
            (QuotientTarget::Cyclic { order }, TargetElement::Residue(r)) => r < order,
            (QuotientTarget::Symmetric { degree }, TargetElement::Perm(perm)) => {
                is_permutation(perm, *degree)
            }
            _ => false,
        });
        if !valid {
            return false;
        }
        let relators_hold = p
            .relators()
            .iter()
            .all(|r| self.evaluate(r) == self.identity());
        relators_hold
            && self.evaluate(w1) == self.image1
            && self.evaluate(w2) == self.image2
            && self.image1 != self.image2
    }

    fn identity(&self) -> TargetElement {
        match self.target {
            QuotientTarget::Cyclic { .. } => TargetElement::Residue(0),
            QuotientTarget::Symmetric { degree } => TargetElement::Perm((0..degree).collect()),
        }
    }

    pub fn evaluate(&self, w: &Word) -> TargetElement {
        match self.target {
            QuotientTarget::Cyclic { order } => {
                let images: Vec<u64> = self
                    .generator_images
                    .iter()
                    .map(|g| match g {
                        TargetElement::Residue(r) => *r,
                        TargetElement::Perm(_) => 0,
                    })
                    .collect();
                TargetElement::Residue(eval_cyclic(w, &images, order))
            }
            QuotientTarget::Symmetric { degree } => {
                let images: Vec<Vec<usize>> = self
                    .generator_images
                    .iter()
                    .map(|g| match g {
                        TargetElement::Perm(p) => p.clone(),
                        TargetElement::Residue(_) => (0..degree).collect(),
                    })
                    .collect();
                TargetElement::Perm(eval_perm(w, &images, degree))
            }
        }
    }
}

fn is_permutation(perm: &[usize], degree: usize) -> bool {
    if perm.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &i in perm {
        if i >= degree || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

fn eval_cyclic(w: &Word, images: &[u64], order: u64) -> u64 {
    let order = i128::from(order);
    let mut acc: i128 = 0;
    for l in w.letters() {
        acc += i128::from(l.sign()) * i128::from(images[l.gen()]);
    }
    acc.rem_euclid(order) as u64
}

fn eval_perm(w: &Word, images: &[Vec<usize>], degree: usize) -> Vec<usize> {
    let inverses: Vec<Vec<usize>> = images.iter().map(|p| invert_perm(p)).collect();
    (0..degree)
        .map(|mut pt| {
            for l in w.letters() {
                pt = if l.is_inverse() {
                    inverses[l.gen()][pt]
                } else {
                    images[l.gen()][pt]
                };
            }
            pt
        })
        .collect()
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Odometer step over `Z/order ^ rank`, last generator fastest.
fn next_assignment(images: &mut [u64], order: u64) -> bool {
    for k in (0..images.len()).rev() {
        images[k] += 1;
        if images[k] < order {
            return true;
        }
        images[k] = 0;
    }
    false
}

/// All permutations of `0..n` in lexicographic order.
fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Cyclic targets `Z/2 .. Z/cyclic_bound` first, then `S_2 .. S_degree_bound`
/// by backtracking over generator images with relator pruning. `None` is
/// inconclusive.
pub fn falsify_by_finite_quotient(
    p: &Presentation,
    w1: &Word,
    w2: &Word,
    degree_bound: usize,
    cyclic_bound: u64,
) -> Option<QuotientWitness> {
    if w1 == w2 {
        return None;
    }
    let rank = p.rank();
    for order in 2..=cyclic_bound {
        let mut images = vec![0u64; rank];
        loop {
            let holds = p
                .relators()
                .iter()
                .all(|r| eval_cyclic(r, &images, order) == 0);
            if holds {
                let i1 = eval_cyclic(w1, &images, order);
                let i2 = eval_cyclic(w2, &images, order);
                if i1 != i2 {
                    return Some(QuotientWitness {
                        target: QuotientTarget::Cyclic { order },
                        generator_images: images.iter().map(|&r| TargetElement::Residue(r)).collect(),
                        image1: TargetElement::Residue(i1),
                        image2: TargetElement::Residue(i2),
                    });
                }
            }
            if !next_assignment(&mut images, order) {
                break;
            }
        }
    }

    // Relators become checkable once their largest generator is assigned.
    let mut checkable: Vec<Vec<&Word>> = vec![Vec::new(); rank];
    for r in p.relators() {
        let top = r.rank_used();
        if top > 0 {
            checkable[top - 1].push(r);
        }
    }
    for degree in 2..=degree_bound {
        let perms = all_permutations(degree);
        let mut assigned: Vec<Vec<usize>> = Vec::with_capacity(rank);
        if let Some(w) = backtrack(&perms, &checkable, w1, w2, degree, rank, &mut assigned) {
            return Some(w);
        }
    }
    None
}

fn backtrack(
    perms: &[Vec<usize>],
    checkable: &[Vec<&Word>],
    w1: &Word,
    w2: &Word,
    degree: usize,
    rank: usize,
    assigned: &mut Vec<Vec<usize>>,
) -> Option<QuotientWitness> {
    let identity: Vec<usize> = (0..degree).collect();
    if assigned.len() == rank {
        let i1 = eval_perm(w1, assigned, degree);
        let i2 = eval_perm(w2, assigned, degree);
        if i1 == i2 {
            return None;
        }
        return Some(QuotientWitness {
            target: QuotientTarget::Symmetric { degree },
            generator_images: assigned.iter().cloned().map(TargetElement::Perm).collect(),
            image1: TargetElement::Perm(i1),
            image2: TargetElement::Perm(i2),
        });
    }
    let g = assigned.len();
    for perm in perms {
        assigned.push(perm.clone());
        // Unassigned generators never occur in checkable[g] relators.
        let ok = checkable[g]
            .iter()
            .all(|r| eval_perm(r, assigned, degree) == identity);
        if ok {
            if let Some(w) = backtrack(perms, checkable, w1, w2, degree, rank, assigned) {
                return Some(w);
            }
        }
        assigned.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2503() -> Presentation {
        Presentation::parse("ab", &["aaBBaBBaabaababaab"]).unwrap()
    }

    #[test]
    fn generators_are_separated_cyclically() {
        let p = v2503();
        let al = p.alphabet();
        let (a, b) = (al.parse_word("a").unwrap(), al.parse_word("b").unwrap());
        let w = falsify_by_finite_quotient(&p, &a, &b, 3, 10).expect("witness");
        assert!(matches!(w.target, QuotientTarget::Cyclic { .. }));
        assert!(w.verify(&p, &a, &b));
    }

    #[test]
    fn equal_words_are_never_separated() {
        let p = v2503();
        let a = p.alphabet().parse_word("ab").unwrap();
        assert_eq!(falsify_by_finite_quotient(&p, &a, &a, 5, 10), None);
    }

    #[test]
    fn peripheral_elements_are_not_separated() {
        let p = v2503();
        let al = p.alphabet();
        let mu = al.parse_word("BBaBBaB").unwrap();
        let lam = al.parse_word("AABAAb").unwrap();
        let w1 = mu.compose(&lam);
        let w2 = lam.compose(&mu);
        assert_eq!(falsify_by_finite_quotient(&p, &w1, &w2, 5, 20), None);
    }

    #[test]
    fn nonabelian_quotient_found_by_permutations() {
        // In S3 = <a, b | a^2, b^3, (ab)^2>, ab != ba but they agree in
        // every cyclic quotient.
        let p = Presentation::parse("ab", &["aa", "bbb", "abab"]).unwrap();
        let al = p.alphabet();
        let (ab, ba) = (al.parse_word("ab").unwrap(), al.parse_word("ba").unwrap());
        let w = falsify_by_finite_quotient(&p, &ab, &ba, 3, 12).expect("witness");
        assert_eq!(w.target, QuotientTarget::Symmetric { degree: 3 });
        assert!(w.verify(&p, &ab, &ba));
    }

    #[test]
    fn tampered_witness_fails_verification() {
        let p = v2503();
        let al = p.alphabet();
        let (a, b) = (al.parse_word("a").unwrap(), al.parse_word("b").unwrap());
        let mut w = falsify_by_finite_quotient(&p, &a, &b, 3, 10).unwrap();
        w.image2 = w.image1.clone();
        assert!(!w.verify(&p, &a, &b));
    }

    #[test]
    fn permutations_enumerate_in_order() {
        let perms = all_permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms[0], vec![0, 1, 2]);
        assert_eq!(perms[5], vec![2, 1, 0]);
    }
}
