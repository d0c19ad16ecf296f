//! Rational 1-chains and 2-chains on a free group.
//!
//! A [`Chain1`] is a finitely supported formal sum of words, a [`Chain2`] one
//! of ordered word pairs. The boundary is `∂(g₁,g₂) = g₂ − g₁g₂ + g₁`. The
//! subspace `h(G,N)` spanned by `x^k − k·x` (`x ∈ N`) is handled through the
//! normal form that collapses every word onto its canonically oriented
//! primitive root.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::marking::{Marking, MarkingError};
use crate::qm::BrooksCombination;
use crate::rational::{denominator_lcm, fmt_q, q, Q};
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error(transparent)]
    Marking(#[from] MarkingError),
    #[error("chain is not in C_Q(G,N)")]
    NotInCQ,
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(String),
    #[error("scaling factor {0} is too large to build the approximating word")]
    ScaleTooLarge(String),
}

/// A finitely supported rational 1-chain. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain1 {
    terms: BTreeMap<Word, Q>,
}

impl Chain1 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        let mut c = Self::new();
        c.add_term(w, q(1));
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Q)>) -> Self {
        let mut c = Self::new();
        for (w, x) in terms {
            c.add_term(w, x);
        }
        c
    }

    pub fn add_term(&mut self, w: Word, x: Q) {
        if x.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(x);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += x;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn scaled(&self, s: &Q) -> Chain1 {
        if s.is_zero() {
            return Chain1::new();
        }
        Chain1 {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * s)).collect(),
        }
    }

    pub fn l1_norm(&self) -> Q {
        self.terms.values().map(|x| x.abs()).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|x| x.is_integer())
    }

    /// Least `l ≥ 1` with `l·c` integral, and `l·c`.
    pub fn clear_denominators(&self) -> (BigInt, Chain1) {
        let l = denominator_lcm(self.terms.values());
        let scaled = self.scaled(&Q::from_integer(l.clone()));
        (l, scaled)
    }

    /// Every support word replaced by `m·r` where `(r, m)` is its
    /// canonically oriented primitive root. Kills `x^k − k·x` for all `x`.
    pub fn h_normal_form(&self) -> Chain1 {
        let mut out = Chain1::new();
        for (w, x) in &self.terms {
            let rd = w.primitive_root();
            out.add_term(rd.root, x * q(rd.exponent));
        }
        out
    }

    /// As [`Chain1::h_normal_form`], but only words in `N` are collapsed;
    /// words outside `N` are kept verbatim since `h(G,N)` only involves `N`.
    pub fn h_normal_form_in(&self, m: &Marking) -> Chain1 {
        let mut out = Chain1::new();
        for (w, x) in &self.terms {
            if m.in_n_fast(w) {
                let rd = w.primitive_root();
                out.add_term(rd.root, x * q(rd.exponent));
            } else {
                out.add_term(w.clone(), x.clone());
            }
        }
        out
    }

    /// Multiset expansion of an integer chain into positive and negative
    /// factors, in support order.
    pub fn expand_integral(&self) -> Option<(Vec<Word>, Vec<Word>)> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (w, x) in &self.terms {
            if !x.is_integer() {
                return None;
            }
            let n = x.to_integer().to_i64()?;
            let target = if n > 0 { &mut pos } else { &mut neg };
            for _ in 0..n.unsigned_abs() {
                target.push(w.clone());
            }
        }
        Some((pos, neg))
    }

    pub fn to_strings(&self, m: &Marking) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(w, x)| (m.format(w), fmt_q(x)))
            .collect()
    }
}

impl std::ops::Add for &Chain1 {
    type Output = Chain1;
    fn add(self, rhs: &Chain1) -> Chain1 {
        let mut out = self.clone();
        for (w, x) in &rhs.terms {
            out.add_term(w.clone(), x.clone());
        }
        out
    }
}

impl std::ops::Sub for &Chain1 {
    type Output = Chain1;
    fn sub(self, rhs: &Chain1) -> Chain1 {
        let mut out = self.clone();
        for (w, x) in &rhs.terms {
            out.add_term(w.clone(), -x);
        }
        out
    }
}

impl std::ops::Neg for &Chain1 {
    type Output = Chain1;
    fn neg(self) -> Chain1 {
        self.scaled(&q(-1))
    }
}

/// A finitely supported rational 2-chain on ordered pairs `(g₁, g₂)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain2 {
    terms: BTreeMap<(Word, Word), Q>,
}

impl Chain2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cell(g1: Word, g2: Word) -> Self {
        let mut c = Self::new();
        c.add_term(g1, g2, q(1));
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((Word, Word), Q)>) -> Self {
        let mut c = Self::new();
        for ((g1, g2), x) in terms {
            c.add_term(g1, g2, x);
        }
        c
    }

    pub fn add_term(&mut self, g1: Word, g2: Word, x: Q) {
        if x.is_zero() {
            return;
        }
        let e = self.terms.entry((g1, g2)).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word, Word), &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn l1_norm(&self) -> Q {
        self.terms.values().map(|x| x.abs()).sum()
    }

    pub fn scaled(&self, s: &Q) -> Chain2 {
        Chain2::from_terms(self.terms.iter().map(|(k, x)| (k.clone(), x * s)))
    }

    /// Linear extension of `∂(g₁,g₂) = g₂ − g₁g₂ + g₁`.
    pub fn boundary(&self) -> Chain1 {
        let mut out = Chain1::new();
        for ((g1, g2), x) in &self.terms {
            out.add_term(g2.clone(), x.clone());
            out.add_term(g1.mul(g2), -x);
            out.add_term(g1.clone(), x.clone());
        }
        out
    }

    /// Every pair has at least one entry in `N`.
    pub fn validate_mixed_support(&self, m: &Marking) -> bool {
        self.terms.keys().all(|(g1, g2)| {
            m.group().check(g1).is_ok()
                && m.group().check(g2).is_ok()
                && (m.in_n_fast(g1) || m.in_n_fast(g2))
        })
    }

    pub fn to_strings(&self, m: &Marking) -> Vec<((String, String), String)> {
        self.terms
            .iter()
            .map(|((g1, g2), x)| ((m.format(g1), m.format(g2)), fmt_q(x)))
            .collect()
    }
}

impl std::ops::Add for &Chain2 {
    type Output = Chain2;
    fn add(self, rhs: &Chain2) -> Chain2 {
        let mut out = self.clone();
        for ((g1, g2), x) in &rhs.terms {
            out.add_term(g1.clone(), g2.clone(), x.clone());
        }
        out
    }
}

impl std::ops::Sub for &Chain2 {
    type Output = Chain2;
    fn sub(self, rhs: &Chain2) -> Chain2 {
        let mut out = self.clone();
        for ((g1, g2), x) in &rhs.terms {
            out.add_term(g1.clone(), g2.clone(), -x);
        }
        out
    }
}

/// One instance of `|φ(k·c) − φ(y)| ≤ (m+m′)·D(φ) ≤ ε·k·D(φ)`.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingCheck {
    #[serde(with = "crate::rational::qstr")]
    pub value_kc: Q,
    #[serde(with = "crate::rational::qstr")]
    pub value_y: Q,
    #[serde(with = "crate::rational::qstr")]
    pub bound: Q,
    pub holds: bool,
}

/// Output of [`scale_approximate`]: `k = l·t` and
/// `y = x₁ᵗ⋯x_mᵗ x̌₁⁻ᵗ⋯x̌_{m′}⁻ᵗ ∈ [G,N]`.
#[derive(Clone, Debug)]
pub struct ScaledApproximation {
    pub k: u64,
    pub l: u64,
    pub t: u64,
    /// `m + m′`.
    pub factor_count: u64,
    pub y: Word,
    pub checks: Vec<ScalingCheck>,
}

impl ScaledApproximation {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Approximates `k·c` by a single element `y ∈ [G,N]` with `k = l·t`, where
/// `l` clears denominators and `t` is the least integer with
/// `m + m′ ≤ ε·l·t`.
///
/// The quasimorphism inequality is checked for every combination in `certs`;
/// violations are reported in [`ScaledApproximation::checks`], not as errors.
pub fn scale_approximate(
    m: &Marking,
    c: &Chain1,
    epsilon: &Q,
    certs: &[BrooksCombination],
) -> Result<ScaledApproximation, ChainError> {
    if !epsilon.is_positive() {
        return Err(ChainError::NonPositiveEpsilon(fmt_q(epsilon)));
    }
    if !m.chain_in_cq(c)? {
        return Err(ChainError::NotInCQ);
    }
    let (l_big, lc) = c.clear_denominators();
    let l = l_big
        .to_u64()
        .ok_or_else(|| ChainError::ScaleTooLarge(l_big.to_string()))?;
    let (pos, neg) = lc.expand_integral().ok_or(ChainError::NotInCQ)?;
    let factor_count = (pos.len() + neg.len()) as u64;
    // least t ≥ 1 with factor_count ≤ ε·l·t
    let ratio = Q::from_integer(BigInt::from(factor_count)) / (epsilon * Q::from_integer(l_big.clone()));
    let t_big = ratio.ceil().to_integer().max(BigInt::one());
    let t = t_big
        .to_u64()
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| ChainError::ScaleTooLarge(t_big.to_string()))?;
    let k = l
        .checked_mul(t)
        .ok_or_else(|| ChainError::ScaleTooLarge(format!("{l}·{t}")))?;

    let t_i = t as i64;
    let mut y = Word::identity();
    for x in &pos {
        y = y.mul(&x.pow(t_i));
    }
    for x in &neg {
        y = y.mul(&x.pow(-t_i));
    }
    assert!(
        m.in_mixed_commutator(&y)?,
        "scaled product left [G,N]: chain membership oracle is inconsistent"
    );

    let kc = c.scaled(&Q::from_integer(BigInt::from(k)));
    let fc = Q::from_integer(BigInt::from(factor_count));
    let eps_k = epsilon * Q::from_integer(BigInt::from(k));
    let checks = certs
        .iter()
        .map(|phi| {
            let value_kc = phi.evaluate_chain(&kc);
            let value_y = phi.homogenized_value(&y);
            let bound = &fc * phi.defect_bound();
            let holds = (&value_kc - &value_y).abs() <= bound && bound <= &eps_k * phi.defect_bound();
            ScalingCheck {
                value_kc,
                value_y,
                bound,
                holds,
            }
        })
        .collect();
    Ok(ScaledApproximation {
        k,
        l,
        t,
        factor_count,
        y,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qm::BrooksCombination;
    use crate::rational::frac;
    use crate::word::{ball, FreeGroup};
    use proptest::prelude::*;

    fn f2() -> FreeGroup {
        FreeGroup::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        f2().parse(s).unwrap()
    }

    fn a_only() -> Marking {
        Marking::new(f2(), vec![vec![1, 0]]).unwrap()
    }

    #[test]
    fn boundary_of_a_cell() {
        let (g1, g2) = (w("ab"), w("Ba"));
        let b = Chain2::cell(g1.clone(), g2.clone()).boundary();
        let expect = Chain1::from_terms([(g2.clone(), q(1)), (g1.mul(&g2), q(-1)), (g1, q(1))]);
        assert_eq!(b, expect);
    }

    #[test]
    fn boundary_with_identity() {
        let b = Chain2::cell(w("ab"), Word::identity()).boundary();
        assert_eq!(b, Chain1::word(Word::identity()));
    }

    #[test]
    fn antisymmetric_boundary() {
        let (x1, x2) = (w("b"), w("aBA"));
        let c2 = &Chain2::cell(x1.clone(), x2.clone()) - &Chain2::cell(x2.clone(), x1.clone());
        // expand both generators by hand
        let expect = Chain1::from_terms([
            (x2.clone(), q(1)),
            (x1.mul(&x2), q(-1)),
            (x1.clone(), q(1)),
            (x1.clone(), q(-1)),
            (x2.mul(&x1), q(1)),
            (x2.clone(), q(-1)),
        ]);
        assert_eq!(c2.boundary(), expect);
        assert_eq!(c2.boundary().len(), 2);
    }

    #[test]
    fn mixed_support_examples() {
        let m = a_only();
        assert!(Chain2::cell(w("a"), w("b")).validate_mixed_support(&m));
        assert!(!Chain2::cell(w("a"), w("ab")).validate_mixed_support(&m));
        assert!(Chain2::new().validate_mixed_support(&m));
    }

    #[test]
    fn h_normal_form_examples() {
        let x = w("ab");
        let c = Chain1::from_terms([(x.pow(6), q(1)), (x.clone(), q(-6))]);
        assert!(c.h_normal_form().is_zero());
        assert_eq!(
            Chain1::word(w("A")).h_normal_form(),
            Chain1::from_terms([(w("a"), q(-1))])
        );
        assert_eq!(
            Chain1::from_terms([(w("(ab)^3"), frac(1, 2))]).h_normal_form(),
            Chain1::from_terms([(w("ab"), frac(3, 2))])
        );
        assert!(Chain1::word(Word::identity()).h_normal_form().is_zero());
    }

    #[test]
    fn h_normal_form_in_keeps_words_outside_n() {
        let m = a_only();
        let c = Chain1::from_terms([(w("aa"), q(1)), (w("bb"), q(1))]);
        let h = c.h_normal_form_in(&m);
        assert_eq!(h, Chain1::from_terms([(w("aa"), q(1)), (w("b"), q(2))]));
    }

    #[test]
    fn scale_approximate_examples() {
        let m = a_only();
        let y0 = w("[a,b]");
        let certs = vec![BrooksCombination::single(w("ab")), BrooksCombination::single(w("aB"))];

        let r = scale_approximate(&m, &Chain1::word(y0.clone()), &q(1), &certs).unwrap();
        assert_eq!((r.k, r.l, r.t, r.factor_count), (1, 1, 1, 1));
        assert_eq!(r.y, y0);
        assert!(r.all_hold());

        let r = scale_approximate(&m, &Chain1::word(y0.clone()).scaled(&frac(1, 2)), &q(1), &certs).unwrap();
        assert_eq!((r.k, r.l, r.t), (2, 2, 1));
        assert_eq!(r.y, y0);

        let (x1, x2) = (w("b"), w("aBA"));
        let x12 = x1.mul(&x2);
        let c = Chain1::from_terms([(x1.clone(), q(1)), (x2.clone(), q(1)), (x12.clone(), q(-1))]);
        let r = scale_approximate(&m, &c, &frac(1, 4), &certs).unwrap();
        assert_eq!((r.k, r.t, r.factor_count), (12, 12, 3));
        // the factor order follows the support order of the chain
        let mut expect = Word::identity();
        let (pos, neg) = c.expand_integral().unwrap();
        for x in &pos {
            expect = expect.mul(&x.pow(12));
        }
        for x in &neg {
            expect = expect.mul(&x.pow(-12));
        }
        assert_eq!(r.y, expect);
        assert!(r.all_hold());
    }

    #[test]
    fn scale_approximate_errors() {
        let m = a_only();
        assert!(matches!(
            scale_approximate(&m, &Chain1::word(w("b")), &q(1), &[]),
            Err(ChainError::NotInCQ)
        ));
        assert!(matches!(
            scale_approximate(&m, &Chain1::word(w("[a,b]")), &q(0), &[]),
            Err(ChainError::NonPositiveEpsilon(_))
        ));
    }

    #[test]
    fn boundaries_of_mixed_chains_lie_in_cz() {
        let m = a_only();
        let words = ball(2, 2);
        for g1 in &words {
            for g2 in &words {
                let c2 = Chain2::cell(g1.clone(), g2.clone());
                if !c2.validate_mixed_support(&m) {
                    continue;
                }
                let b = c2.boundary();
                if b.support().all(|x| m.in_n(x).unwrap()) {
                    assert!(m.chain_in_cz(&b).unwrap(), "{g1} {g2}");
                }
            }
        }
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 0..8).prop_map(Word::from_letters)
    }

    fn arb_chain2() -> impl Strategy<Value = Chain2> {
        prop::collection::vec(((arb_word(), arb_word()), -3i64..=3), 0..5)
            .prop_map(|ts| Chain2::from_terms(ts.into_iter().map(|(k, x)| (k, q(x)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn boundary_is_linear(c in arb_chain2(), d in arb_chain2(), a in -3i64..3, b in -3i64..3) {
            let lhs = (&c.scaled(&q(a)) + &d.scaled(&q(b))).boundary();
            let rhs = &c.boundary().scaled(&q(a)) + &d.boundary().scaled(&q(b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn h_normal_form_is_idempotent_and_kills_generators(x in arb_word(), k in -8i64..=8) {
            let g = Chain1::from_terms([(x.pow(k), q(1)), (x.clone(), q(-k))]);
            prop_assert!(g.h_normal_form().is_zero());
            let c = Chain1::from_terms([(x.pow(k), q(2)), (x.clone(), q(1))]);
            let h = c.h_normal_form();
            prop_assert_eq!(h.h_normal_form(), h);
        }
    }
}
