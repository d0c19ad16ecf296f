//! Counting quasimorphisms and Bavard-duality lower bounds.
//!
//! A [`BrooksCombination`] is a rational combination of antisymmetrized
//! counting functions `C_w − C_{w⁻¹}` (overlapping occurrences in the reduced
//! word). Values used in certificates are homogenized. The configured defect
//! bound is trusted only after an exhaustive window scan, see [`validate`].

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::chains::Chain1;
use crate::marking::{Marking, MarkingError};
use crate::parallel::{self, Exec};
use crate::rational::{denominator_lcm, fmt_q, q, Q};
use crate::word::{ball, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QmError {
    #[error("atom words must be nonempty")]
    EmptyAtom,
    #[error("defect bound must be nonnegative, got {0}")]
    NegativeBound(String),
    #[error("window {window} is shorter than the longest atom ({atom_len})")]
    WindowTooSmall { window: usize, atom_len: usize },
    #[error("window scan over rank {rank}, length {window} is too large")]
    WindowTooLarge { rank: usize, window: usize },
    #[error("empirical defect {empirical} exceeds the configured bound {bound}")]
    Disqualified {
        empirical: String,
        bound: String,
        witness: Option<(String, String)>,
    },
    #[error("certificate has zero defect but is nonzero on the chain")]
    HomomorphismOnChain,
    #[error("chain is not in C_Q(G,N)")]
    NotInCQ,
    #[error(transparent)]
    Marking(#[from] MarkingError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrooksCombination {
    atoms: BTreeMap<Word, Q>,
    defect_bound: Q,
    window: usize,
}

pub const DEFAULT_WINDOW: usize = 6;

/// `2(|w| − 1)`.
pub fn atom_bound(w: &Word) -> Q {
    q(2 * (w.len() as i64 - 1))
}

impl BrooksCombination {
    pub fn new(atoms: impl IntoIterator<Item = (Word, Q)>, defect_bound: Q, window: usize) -> Result<Self, QmError> {
        let mut map = BTreeMap::new();
        for (w, x) in atoms {
            if w.is_identity() {
                return Err(QmError::EmptyAtom);
            }
            *map.entry(w).or_insert_with(Q::zero) += x;
        }
        map.retain(|_, x: &mut Q| !x.is_zero());
        if defect_bound.is_negative() {
            return Err(QmError::NegativeBound(fmt_q(&defect_bound)));
        }
        let atom_len = map.keys().map(Word::len).max().unwrap_or(0);
        if window < atom_len {
            return Err(QmError::WindowTooSmall { window, atom_len });
        }
        Ok(Self {
            atoms: map,
            defect_bound,
            window,
        })
    }

    /// Weighted combination with bound `Σ |weight|·2(|w|−1)`.
    pub fn with_default_bound(atoms: impl IntoIterator<Item = (Word, Q)>, window: usize) -> Result<Self, QmError> {
        let atoms: Vec<_> = atoms.into_iter().collect();
        let bound = atoms.iter().map(|(w, x)| x.abs() * atom_bound(w)).sum();
        Self::new(atoms, bound, window)
    }

    /// `C_w − C_{w⁻¹}` with the default bound and window.
    ///
    /// # Panics
    /// If `w` is the identity.
    pub fn single(w: Word) -> Self {
        let window = DEFAULT_WINDOW.max(w.len());
        Self::with_default_bound([(w, q(1))], window).expect("nonempty atom")
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.atoms.iter()
    }

    pub fn defect_bound(&self) -> &Q {
        &self.defect_bound
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn max_atom_len(&self) -> usize {
        self.atoms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn max_generator(&self) -> usize {
        self.atoms.keys().map(Word::max_generator).max().unwrap_or(0)
    }

    /// Replaces the defect bound without any check. Used to exercise the
    /// disqualification path.
    pub fn with_defect_bound(mut self, bound: Q) -> Self {
        self.defect_bound = bound;
        self
    }

    /// Non-homogenized value on the reduced word.
    pub fn raw_value(&self, y: &Word) -> Q {
        let mut total = Q::zero();
        for (w, x) in &self.atoms {
            let d = count_linear(y.letters(), w.letters()) - count_linear(y.letters(), w.inverse().letters());
            if d != 0 {
                total += x * q(d);
            }
        }
        total
    }

    /// Homogenization by the slope `raw(y^{m+1}) − raw(y^m)` for `m` past the
    /// point where occurrence counts become affine in the exponent.
    pub fn homogenized_value(&self, y: &Word) -> Q {
        let (core, _) = y.cyclic_reduce();
        if core.is_identity() {
            return Q::zero();
        }
        let m0 = (2 * self.max_atom_len()).div_ceil(core.len()) as i64 + 2;
        let r0 = self.raw_value(&y.pow(m0));
        let r1 = self.raw_value(&y.pow(m0 + 1));
        let r2 = self.raw_value(&y.pow(m0 + 2));
        let slope = &r1 - &r0;
        assert_eq!(slope, &r2 - &r1, "counting slope did not stabilize");
        slope
    }

    /// Same value as [`BrooksCombination::homogenized_value`] by counting
    /// cyclic occurrences in the cyclically reduced core.
    pub fn homogenized_value_cyclic(&self, y: &Word) -> Q {
        let (core, _) = y.cyclic_reduce();
        let mut total = Q::zero();
        for (w, x) in &self.atoms {
            let d = count_cyclic(core.letters(), w.letters()) - count_cyclic(core.letters(), w.inverse().letters());
            if d != 0 {
                total += x * q(d);
            }
        }
        total
    }

    /// Linear extension of the homogenized value.
    pub fn evaluate_chain(&self, c: &Chain1) -> Q {
        c.iter()
            .map(|(w, x)| x * self.homogenized_value_cyclic(w))
            .sum()
    }
}

fn count_linear(hay: &[Letter], needle: &[Letter]) -> i64 {
    if needle.is_empty() || hay.len() < needle.len() {
        return 0;
    }
    hay.windows(needle.len()).filter(|s| *s == needle).count() as i64
}

/// Occurrences of `needle` starting at each of the `|core|` positions of the
/// bi-infinite word `…core core…`.
fn count_cyclic(core: &[Letter], needle: &[Letter]) -> i64 {
    let n = core.len();
    if n == 0 || needle.is_empty() {
        return 0;
    }
    (0..n)
        .filter(|&i| needle.iter().enumerate().all(|(j, &l)| core[(i + j) % n] == l))
        .count() as i64
}

/// Outcome of a window scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub empirical_max: Q,
    pub bound: Q,
    pub pass: bool,
    /// First pair (in length-lex order) attaining the maximum, if nonzero.
    pub witness: Option<(Word, Word)>,
    pub window: usize,
    pub rank: usize,
    pub pairs_checked: u64,
}

/// A combination whose defect bound survived the window scan.
#[derive(Clone, Debug)]
pub struct Certificate {
    combination: BrooksCombination,
    report: DefectReport,
}

impl Certificate {
    pub fn combination(&self) -> &BrooksCombination {
        &self.combination
    }

    pub fn report(&self) -> &DefectReport {
        &self.report
    }
}

/// Largest pair count a window scan will attempt.
pub const MAX_WINDOW_PAIRS: u64 = 50_000_000;

/// Integer-weighted view of a combination for the batched kernel:
/// `value = Σ weight·(cnt[pos] − cnt[neg]) / denom`.
struct IntCombination {
    terms: Vec<(usize, usize, i64)>,
    denom: BigInt,
}

/// Counts cyclic occurrences of a fixed set of short words in one pass.
struct CyclicCounter {
    index: FxHashMap<u64, usize>,
    lengths: Vec<usize>,
    base: u64,
    size: usize,
}

impl CyclicCounter {
    const MAX_LEN: usize = 10;

    fn new(rank: usize) -> Self {
        Self {
            index: FxHashMap::default(),
            lengths: Vec::new(),
            base: 2 * rank as u64 + 1,
            size: 0,
        }
    }

    fn digit(l: Letter) -> u64 {
        let i = l.unsigned_abs() as u64 - 1;
        2 * i + u64::from(l < 0) + 1
    }

    fn key(&self, w: &[Letter]) -> u64 {
        w.iter().fold(0, |acc, &l| acc * self.base + Self::digit(l))
    }

    fn intern(&mut self, w: &[Letter]) -> usize {
        let k = self.key(w);
        if !self.lengths.contains(&w.len()) {
            self.lengths.push(w.len());
        }
        let next = self.size;
        let idx = *self.index.entry(k).or_insert(next);
        if idx == next {
            self.size += 1;
        }
        idx
    }

    fn count(&self, core: &[Letter], out: &mut [i64]) {
        out.iter_mut().for_each(|x| *x = 0);
        let n = core.len();
        if n == 0 {
            return;
        }
        for i in 0..n {
            for &len in &self.lengths {
                let mut k = 0u64;
                for j in 0..len {
                    k = k * self.base + Self::digit(core[(i + j) % n]);
                }
                if let Some(&idx) = self.index.get(&k) {
                    out[idx] += 1;
                }
            }
        }
    }
}

fn compile(rank: usize, combos: &[&BrooksCombination]) -> Option<(CyclicCounter, Vec<IntCombination>)> {
    let mut counter = CyclicCounter::new(rank);
    let mut compiled = Vec::with_capacity(combos.len());
    for c in combos {
        if c.max_atom_len() > CyclicCounter::MAX_LEN {
            return None;
        }
        let denom = denominator_lcm(c.atoms.values());
        let mut terms = Vec::new();
        for (w, x) in &c.atoms {
            let weight = (x * Q::from_integer(denom.clone())).to_integer().to_i64()?;
            let pos = counter.intern(w.letters());
            let neg = counter.intern(w.inverse().letters());
            terms.push((pos, neg, weight));
        }
        compiled.push(IntCombination { terms, denom });
    }
    Some((counter, compiled))
}

fn core_of(buf: &[Letter]) -> &[Letter] {
    let (mut i, mut j) = (0, buf.len());
    while j - i >= 2 && buf[i] == -buf[j - 1] {
        i += 1;
        j -= 1;
    }
    &buf[i..j]
}

fn product_into(buf: &mut Vec<Letter>, u: &[Letter], v: &[Letter]) {
    let mut k = 0;
    while k < u.len() && k < v.len() && u[u.len() - 1 - k] == -v[k] {
        k += 1;
    }
    buf.clear();
    buf.extend_from_slice(&u[..u.len() - k]);
    buf.extend_from_slice(&v[k..]);
}

/// Window scan for several combinations at once over `rank` generators.
/// Each combination is checked on pairs with both lengths at most its own
/// window. The result is independent of `exec`.
pub fn defect_window_check_batch(
    combos: &[&BrooksCombination],
    rank: usize,
    exec: Exec,
) -> Result<Vec<DefectReport>, QmError> {
    let wmax = combos.iter().map(|c| c.window).max().unwrap_or(0);
    let words = ball(rank, wmax);
    let n = words.len() as u64;
    if n.saturating_mul(n) > MAX_WINDOW_PAIRS {
        return Err(QmError::WindowTooLarge { rank, window: wmax });
    }
    let rank = rank.max(combos.iter().map(|c| c.max_generator()).max().unwrap_or(0));
    let Some((counter, compiled)) = compile(rank, combos) else {
        return Ok(combos
            .iter()
            .map(|c| defect_window_check_slow(c, rank, exec))
            .collect());
    };
    let letters: Vec<&[Letter]> = words.iter().map(Word::letters).collect();
    let eval = |cnt: &[i64], c: &IntCombination| -> i64 { c.terms.iter().map(|&(p, m, x)| x * (cnt[p] - cnt[m])).sum() };
    let single: Vec<Vec<i64>> = letters
        .iter()
        .map(|w| {
            let mut cnt = vec![0; counter.size];
            counter.count(core_of(w), &mut cnt);
            compiled.iter().map(|c| eval(&cnt, c)).collect()
        })
        .collect();
    // best (defect, j) per combination for each g₁
    let rows: Vec<Vec<(i64, usize)>> = parallel::map_range(exec, letters.len(), |i| {
        let mut best = vec![(0i64, usize::MAX); combos.len()];
        let mut buf = Vec::with_capacity(2 * wmax);
        let mut cnt = vec![0; counter.size];
        let li = letters[i].len();
        for (j, v) in letters.iter().enumerate() {
            product_into(&mut buf, letters[i], v);
            counter.count(core_of(&buf), &mut cnt);
            for (ci, c) in compiled.iter().enumerate() {
                let win = combos[ci].window;
                if li > win || v.len() > win {
                    continue;
                }
                let d = (eval(&cnt, c) - single[i][ci] - single[j][ci]).abs();
                if d > best[ci].0 {
                    best[ci] = (d, j);
                }
            }
        }
        best
    });
    let reports = combos
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let mut best = (0i64, None);
            for (i, row) in rows.iter().enumerate() {
                if row[ci].0 > best.0 {
                    best = (row[ci].0, Some((i, row[ci].1)));
                }
            }
            let empirical_max = Q::new(BigInt::from(best.0), compiled[ci].denom.clone());
            let in_window = words.iter().filter(|w| w.len() <= c.window).count() as u64;
            DefectReport {
                pass: empirical_max <= c.defect_bound,
                bound: c.defect_bound.clone(),
                empirical_max,
                witness: best.1.map(|(i, j)| (words[i].clone(), words[j].clone())),
                window: c.window,
                rank,
                pairs_checked: in_window * in_window,
            }
        })
        .collect();
    Ok(reports)
}

/// Reference scan with exact rational arithmetic and the slope method.
pub fn defect_window_check_slow(c: &BrooksCombination, rank: usize, exec: Exec) -> DefectReport {
    let words = ball(rank, c.window);
    let vals: Vec<Q> = parallel::map(exec, &words, |w| c.homogenized_value(w));
    let rows: Vec<(Q, usize)> = parallel::map_range(exec, words.len(), |i| {
        let mut best = (Q::zero(), usize::MAX);
        for (j, v) in words.iter().enumerate() {
            let d = (c.homogenized_value(&words[i].mul(v)) - &vals[i] - &vals[j]).abs();
            if d > best.0 {
                best = (d, j);
            }
        }
        best
    });
    let mut best = (Q::zero(), None);
    for (i, (d, j)) in rows.into_iter().enumerate() {
        if d > best.0 {
            best = (d, Some((i, j)));
        }
    }
    let n = words.len() as u64;
    DefectReport {
        pass: best.0 <= c.defect_bound,
        empirical_max: best.0,
        bound: c.defect_bound.clone(),
        witness: best.1.map(|(i, j)| (words[i].clone(), words[j].clone())),
        window: c.window,
        rank,
        pairs_checked: n * n,
    }
}

pub fn defect_window_check(c: &BrooksCombination, rank: usize, exec: Exec) -> Result<DefectReport, QmError> {
    Ok(defect_window_check_batch(&[c], rank, exec)?.remove(0))
}

/// Runs the window scan and wraps a passing combination as a [`Certificate`].
pub fn validate(c: BrooksCombination, rank: usize, exec: Exec) -> Result<Certificate, QmError> {
    let report = defect_window_check(&c, rank, exec)?;
    into_certificate(c, report)
}

fn into_certificate(c: BrooksCombination, report: DefectReport) -> Result<Certificate, QmError> {
    if report.pass {
        Ok(Certificate {
            combination: c,
            report,
        })
    } else {
        Err(QmError::Disqualified {
            empirical: fmt_q(&report.empirical_max),
            bound: fmt_q(&report.bound),
            witness: report
                .witness
                .map(|(u, v)| (u.to_default_string(), v.to_default_string())),
        })
    }
}

/// Validates many combinations with one shared scan.
pub fn validate_all(
    combos: Vec<BrooksCombination>,
    rank: usize,
    exec: Exec,
) -> Result<Vec<Result<Certificate, QmError>>, QmError> {
    let refs: Vec<&BrooksCombination> = combos.iter().collect();
    let reports = defect_window_check_batch(&refs, rank, exec)?;
    Ok(combos
        .into_iter()
        .zip(reports)
        .map(|(c, r)| into_certificate(c, r))
        .collect())
}

/// `|φ(c)| / 2D`, or `0` when `φ(c) = 0`.
pub fn bavard_lower_bound(cert: &Certificate, c: &Chain1, m: &Marking) -> Result<Q, QmError> {
    if !m.chain_in_cq(c)? {
        return Err(QmError::NotInCQ);
    }
    let v = cert.combination.evaluate_chain(c);
    if v.is_zero() {
        return Ok(Q::zero());
    }
    let d = &cert.combination.defect_bound;
    if d.is_zero() {
        return Err(QmError::HomomorphismOnChain);
    }
    Ok(v.abs() / (q(2) * d))
}

/// Best Bavard bound over `certs`, with the index of the certificate that
/// attains it (first one on ties).
pub fn best_lower_bound(certs: &[Certificate], c: &Chain1, m: &Marking) -> Result<(Q, Option<usize>), QmError> {
    let mut best = (Q::zero(), None);
    for (i, cert) in certs.iter().enumerate() {
        let v = bavard_lower_bound(cert, c, m)?;
        if v > best.0 {
            best = (v, Some(i));
        }
    }
    Ok(best)
}

/// Atom lengths and window of the default set for a given rank.
pub fn default_shape(rank: usize) -> (usize, usize) {
    match rank {
        0..=2 => (3, 6),
        3 => (2, 4),
        _ => (2, 3),
    }
}

/// Single atoms `C_w − C_{w⁻¹}` for every reduced `w` up to the default
/// length, one per inverse pair, each with bound `2(|w|−1)`.
pub fn default_combinations(rank: usize) -> Vec<BrooksCombination> {
    let (len, window) = default_shape(rank);
    ball(rank, len)
        .into_iter()
        .filter(|w| !w.is_identity() && *w <= w.inverse())
        .map(|w| BrooksCombination::with_default_bound([(w, q(1))], window).expect("nonempty atom"))
        .collect()
}

/// Validated default certificates for `rank`, computed once per process.
/// Combinations failing the scan are dropped.
pub fn default_certificates(rank: usize) -> Arc<Vec<Certificate>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Certificate>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("cache poisoned").get(&rank) {
        return c.clone();
    }
    let certs: Vec<Certificate> = validate_all(default_combinations(rank), rank, Exec::Parallel)
        .map(|rs| rs.into_iter().filter_map(Result::ok).collect())
        .unwrap_or_default();
    let certs = Arc::new(certs);
    cache
        .lock()
        .expect("cache poisoned")
        .entry(rank)
        .or_insert(certs)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::word::FreeGroup;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        FreeGroup::new(2).unwrap().parse(s).unwrap()
    }

    fn ab() -> BrooksCombination {
        BrooksCombination::single(w("ab"))
    }

    #[test]
    fn homogenized_examples() {
        let a = BrooksCombination::single(w("a"));
        assert_eq!(a.homogenized_value(&w("a")), q(1));
        assert_eq!(a.homogenized_value(&w("a^3 b A")), q(2));
        assert_eq!(ab().homogenized_value(&w("abAB")), q(1));
        assert_eq!(ab().homogenized_value(&Word::identity()), q(0));
        assert_eq!(ab().homogenized_value(&w("[a,b]^3")), q(3));
    }

    #[test]
    fn slope_matches_cyclic_count() {
        let phi = BrooksCombination::with_default_bound(
            [(w("ab"), q(1)), (w("aab"), frac(-1, 2)), (w("bA"), q(3))],
            6,
        )
        .unwrap();
        for y in ball(2, 7) {
            assert_eq!(phi.homogenized_value(&y), phi.homogenized_value_cyclic(&y), "{y}");
        }
    }

    #[test]
    fn chain_examples() {
        let x = w("aab");
        assert_eq!(ab().evaluate_chain(&Chain1::new()), q(0));
        let c = Chain1::from_terms([(x.pow(3), q(1)), (x.clone(), q(-3))]);
        assert_eq!(ab().evaluate_chain(&c), q(0));
        assert_eq!(ab().evaluate_chain(&Chain1::word(w("[a,b]"))), q(1));
    }

    #[test]
    fn window_examples() {
        let r = defect_window_check(&BrooksCombination::single(w("a")), 2, Exec::Sequential).unwrap();
        assert_eq!(r.empirical_max, q(0));
        assert!(r.pass && r.witness.is_none());

        let r = defect_window_check(&ab(), 2, Exec::Parallel).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.empirical_max <= q(2));
        assert_eq!(r.pairs_checked, 1457 * 1457);

        let bad = ab().with_defect_bound(q(0));
        let r = defect_window_check(&bad, 2, Exec::Parallel).unwrap();
        assert!(!r.pass);
        let (g1, g2) = r.witness.clone().unwrap();
        let d = (bad.homogenized_value(&g1.mul(&g2)) - bad.homogenized_value(&g1) - bad.homogenized_value(&g2)).abs();
        assert_eq!(d, r.empirical_max);
        assert!(matches!(validate(bad, 2, Exec::Sequential), Err(QmError::Disqualified { .. })));
    }

    #[test]
    fn batched_kernel_matches_reference() {
        let combos = [
            BrooksCombination::with_default_bound([(w("ab"), q(1)), (w("aB"), frac(1, 3))], 4).unwrap(),
            BrooksCombination::single(w("aba")).with_defect_bound(q(1)),
        ];
        let refs: Vec<_> = combos.iter().collect();
        let fast = defect_window_check_batch(&refs, 2, Exec::Parallel).unwrap();
        for (c, f) in combos.iter().zip(&fast) {
            let mut c = c.clone();
            c.window = 4;
            let slow = defect_window_check_slow(&c, 2, Exec::Sequential);
            assert_eq!(f.empirical_max, slow.empirical_max);
            assert_eq!(f.witness, slow.witness);
        }
    }

    #[test]
    fn window_must_cover_atoms() {
        assert_eq!(
            BrooksCombination::new([(w("abab"), q(1))], q(6), 3),
            Err(QmError::WindowTooSmall { window: 3, atom_len: 4 })
        );
        assert_eq!(
            BrooksCombination::new([(Word::identity(), q(1))], q(6), 3),
            Err(QmError::EmptyAtom)
        );
    }

    #[test]
    fn bavard_examples() {
        let m = Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap();
        let cert = validate(ab(), 2, Exec::Parallel).unwrap();
        assert_eq!(bavard_lower_bound(&cert, &Chain1::word(w("[a,b]")), &m).unwrap(), frac(1, 4));
        assert_eq!(bavard_lower_bound(&cert, &Chain1::new(), &m).unwrap(), q(0));
        assert_eq!(bavard_lower_bound(&cert, &Chain1::word(w("[a,b]^3")), &m).unwrap(), frac(3, 4));
        assert!(matches!(
            bavard_lower_bound(&cert, &Chain1::word(w("a")), &m),
            Err(QmError::Marking(_))
        ));
        let full = Marking::full_abelianization(2).unwrap();
        assert!(matches!(
            bavard_lower_bound(&cert, &Chain1::word(w("[a,b]")), &full),
            Err(QmError::NotInCQ)
        ));
    }

    #[test]
    fn default_set_validates() {
        let combos = default_combinations(2);
        assert_eq!(combos.len(), 26);
        let certs = default_certificates(2);
        assert_eq!(certs.len(), 26);
        for c in certs.iter() {
            assert!(c.report().pass);
            assert_eq!(c.report().pairs_checked, 1457 * 1457);
        }
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 0..10).prop_map(Word::from_letters)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn semi_homogeneous(y in arb_word(), k in -3i64..=3) {
            let phi = BrooksCombination::with_default_bound([(w("ab"), q(1)), (w("bba"), q(2))], 6).unwrap();
            prop_assert_eq!(phi.homogenized_value(&y.pow(k)), phi.homogenized_value(&y) * q(k));
        }

        #[test]
        fn conjugation_invariant(y in arb_word(), g in arb_word()) {
            let phi = BrooksCombination::single(w("aB"));
            prop_assert_eq!(phi.homogenized_value(&y.conjugate_by(&g)), phi.homogenized_value(&y));
        }
    }
}
