//! Brute-force reference computations. Nothing here calls into the library
//! under test.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Determinant by cofactor expansion.
pub fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::from(1),
        1 => m[0][0].clone(),
        _ => {
            let mut total = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * det_cofactor(&minor);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Nonzero invariant factors from determinantal divisors:
/// `d_k = gcd of all k x k minors`, factor `k` is `d_k / d_{k-1}`.
pub fn invariant_factors_by_minors(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut factors = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect())
                    .collect();
                g = g.gcd(&det_cofactor(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        factors.push((&g / &prev).abs());
        prev = g;
    }
    factors
}

pub type Perm = Vec<usize>;

pub fn perm_mul(p: &Perm, q: &Perm) -> Perm {
    // apply p then q
    p.iter().map(|&i| q[i]).collect()
}

pub fn perm_inv(p: &Perm) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Evaluates a word in `aAbB` syntax on concrete permutations.
pub fn eval_word(word: &str, images: &[(char, Perm)]) -> Perm {
    let n = images[0].1.len();
    let mut acc: Perm = (0..n).collect();
    for c in word.chars() {
        let lower = c.to_ascii_lowercase();
        let p = &images.iter().find(|(s, _)| *s == lower).expect("generator").1;
        let step = if c.is_ascii_uppercase() { perm_inv(p) } else { p.clone() };
        acc = perm_mul(&acc, &step);
    }
    acc
}

/// Size of the group generated by `gens`, by breadth-first closure.
pub fn closure_order(gens: &[Perm]) -> usize {
    let n = gens[0].len();
    let id: Perm = (0..n).collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = perm_mul(&g, s);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen.len()
}

/// Quaternion units as permutations of themselves under right multiplication:
/// index = 4*sign_bit + {1,i,j,k}.
pub fn quaternion_units() -> (Perm, Perm) {
    // table[u][v] = u*v for u,v in {1,i,j,k}, as (unit, negative)
    let table = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let right_mul = |v: usize| -> Perm {
        (0..8)
            .map(|x| {
                let (u, neg) = (x % 4, x >= 4);
                let (w, n2) = table[u][v];
                w + 4 * usize::from(neg ^ n2)
            })
            .collect()
    };
    (right_mul(1), right_mul(2))
}

/// Free reduction on `aAbB` strings with an explicit stack.
pub fn free_reduce(word: &str) -> String {
    let mut stack: Vec<char> = Vec::new();
    for c in word.chars() {
        let cancels = stack
            .last()
            .is_some_and(|&t| t != c && t.eq_ignore_ascii_case(&c));
        if cancels {
            stack.pop();
        } else {
            stack.push(c);
        }
    }
    stack.into_iter().collect()
}
