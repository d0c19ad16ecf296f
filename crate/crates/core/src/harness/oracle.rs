//! Brute-force oracles for the membership decisions.

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::chains::Chain1;
use crate::marking::Marking;
use crate::parallel::{self, Exec};
use crate::rational::q;
use crate::word::{ball, Word};

#[derive(Clone, Debug, Serialize)]
pub struct Agreement {
    pub cases: usize,
    pub agree: usize,
    pub positives: usize,
    /// Shortest disagreeing inputs, formatted.
    pub disagreements: Vec<String>,
}

impl Agreement {
    pub fn all_agree(&self) -> bool {
        self.cases == self.agree
    }

    fn collect(results: Vec<(String, bool, bool)>) -> Self {
        let cases = results.len();
        let agree = results.iter().filter(|r| r.1 == r.2).count();
        let positives = results.iter().filter(|r| r.2).count();
        let mut disagreements: Vec<String> = results.into_iter().filter(|r| r.1 != r.2).map(|r| r.0).collect();
        disagreements.sort_by_key(|s| (s.len(), s.clone()));
        disagreements.truncate(5);
        Agreement {
            cases,
            agree,
            positives,
            disagreements,
        }
    }
}

/// Compares `in_mixed_commutator` on every word of length at most `max_len`
/// with an exhaustive search over products of at most three simple
/// commutators `[g,x]`, `|g| ≤ g_len`, `|x| ≤ x_len`, `x ∈ N`.
pub fn commutator_product_oracle(m: &Marking, max_len: usize, g_len: usize, x_len: usize, exec: Exec) -> Agreement {
    let gs = ball(m.rank(), g_len);
    let xs: Vec<Word> = ball(m.rank(), x_len)
        .into_iter()
        .filter(|x| !x.is_identity() && m.in_n(x).unwrap_or(false))
        .collect();
    let mut singles: FxHashSet<Word> = FxHashSet::default();
    for g in &gs {
        for x in &xs {
            singles.insert(Word::commutator(g, x));
        }
    }
    singles.insert(Word::identity());
    let mut s1: Vec<Word> = singles.into_iter().collect();
    s1.sort();
    let pairs: FxHashSet<Word> = parallel::map(exec, &s1, |a| s1.iter().map(|b| a.mul(b)).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect();
    let words = ball(m.rank(), max_len);
    let results = parallel::map(exec, &words, |w| {
        let found = s1.iter().any(|s| pairs.contains(&s.inverse().mul(w)));
        let decided = m.in_mixed_commutator(w).unwrap_or(false);
        (m.format(w), decided, found)
    });
    Agreement::collect(results)
}

/// Integer chains with at most two support words, each a nontrivial word
/// of `N` of length at most `max_len`, and nonzero coefficients in
/// `-max_coeff..=max_coeff`.
pub fn small_chains(m: &Marking, max_len: usize, max_coeff: i64) -> Vec<Chain1> {
    let words: Vec<Word> = ball(m.rank(), max_len)
        .into_iter()
        .filter(|w| !w.is_identity() && m.in_n(w).unwrap_or(false))
        .collect();
    let coeffs: Vec<i64> = (-max_coeff..=max_coeff).filter(|&c| c != 0).collect();
    let mut out = Vec::new();
    for (i, u) in words.iter().enumerate() {
        for &a in &coeffs {
            out.push(Chain1::from_terms([(u.clone(), q(a))]));
            for v in &words[i + 1..] {
                for &b in &coeffs {
                    out.push(Chain1::from_terms([(u.clone(), q(a)), (v.clone(), q(b))]));
                }
            }
        }
    }
    out
}

fn next_permutation(v: &mut [Word]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Searches every ordering of the factors `x₁,…,x_m, x̌₁⁻¹,…,x̌_n⁻¹` and
/// every choice of conjugators (the first factor unconjugated) from the
/// ball of radius `conj_radius` for a product in `[G,N]`.
pub fn arrangement_oracle(m: &Marking, c: &Chain1, conj_radius: usize) -> bool {
    let Some((pos, neg)) = c.expand_integral() else {
        return false;
    };
    let mut factors: Vec<Word> = pos.into_iter().chain(neg.iter().map(Word::inverse)).collect();
    if factors.is_empty() {
        return true;
    }
    factors.sort();
    let conj = ball(m.rank(), conj_radius);
    let slots = factors.len() - 1;
    loop {
        let mut idx = vec![0usize; slots];
        loop {
            let mut p = factors[0].clone();
            for (f, &i) in factors[1..].iter().zip(&idx) {
                p = p.mul(&f.conjugate_by(&conj[i]));
            }
            if m.in_mixed_commutator(&p).unwrap_or(false) {
                return true;
            }
            let Some(pos) = (0..slots).find(|&s| idx[s] + 1 < conj.len()) else {
                break;
            };
            idx[pos] += 1;
            idx[..pos].iter_mut().for_each(|x| *x = 0);
        }
        if !next_permutation(&mut factors) {
            return false;
        }
    }
}

/// Conjugator radius used for a chain with `factors` factors: three while
/// at most two factors are conjugated, two beyond.
pub fn default_conj_radius(factors: usize) -> usize {
    if factors <= 3 {
        3
    } else {
        2
    }
}

/// `chain_in_cz` against [`arrangement_oracle`] on all of [`small_chains`].
pub fn lemma_sweep(m: &Marking, max_len: usize, max_coeff: i64, radius: impl Fn(usize) -> usize + Sync, exec: Exec) -> Agreement {
    let chains = small_chains(m, max_len, max_coeff);
    let results = parallel::map(exec, &chains, |c| {
        let factors = c.expand_integral().map_or(0, |(p, n)| p.len() + n.len());
        let decided = m.chain_in_cz(c).unwrap_or(false);
        let brute = arrangement_oracle(m, c, radius(factors));
        let label = c
            .to_strings(m)
            .into_iter()
            .map(|(w, x)| format!("{x}·{w}"))
            .collect::<Vec<_>>()
            .join(" + ");
        (label, decided, brute)
    });
    Agreement::collect(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::FreeGroup;

    #[test]
    fn arrangement_examples() {
        let m = Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap();
        let w = |s: &str| m.parse_word(s).unwrap();
        let c = Chain1::from_terms([(w("b"), q(1)), (w("aBA"), q(1))]);
        assert!(arrangement_oracle(&m, &c, 1));
        assert!(m.chain_in_cz(&c).unwrap());
        let c = Chain1::from_terms([(w("b"), q(1)), (w("aBA"), q(-2))]);
        assert!(!arrangement_oracle(&m, &c, 1));
        assert!(!m.chain_in_cz(&c).unwrap());
    }

    #[test]
    fn product_oracle_small() {
        let m = Marking::full_abelianization(2).unwrap();
        let r = commutator_product_oracle(&m, 4, 2, 4, Exec::Parallel);
        assert!(r.all_agree(), "{:?}", r.disagreements);
        assert!(r.positives >= 1);
    }
}
