//! Bounded search for commutator-length upper bounds.
//!
//! Decompositions `y = [g₁,x₁]⋯[g_n,x_n]` are found by iterative deepening
//! over a table of simple commutators with `|g|, |x| ≤ gen_len` (`x ∈ N` in
//! mixed mode). The last factor may be any conjugate of a table entry, found
//! by cyclic-class lookup; intermediate levels keep a beam of the candidates
//! leaving the shortest cyclic remainder.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::chains::Chain1;
use crate::marking::{Marking, MarkingError, Mode};
use crate::parallel::{self, Exec};
use crate::word::{ball, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("{word} is not in [G,N] ({reason})")]
    NotInSubgroup { word: String, reason: String },
    #[error("no decomposition with at most {max_terms} commutators within the budget")]
    NotFound { max_terms: usize },
    #[error("chain is not in C_Z(G,N)")]
    NotInCZ,
    #[error("commutator table over rank {rank} with generator length {gen_len} is too large")]
    TableTooLarge { rank: usize, gen_len: usize },
    #[error(transparent)]
    Marking(#[from] MarkingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_terms: usize,
    pub gen_len: usize,
    /// Candidates kept per level at depth three and beyond.
    pub beam: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_terms: 3,
            gen_len: 6,
            beam: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClCertificate {
    pub pairs: Vec<(Word, Word)>,
    pub mode: Mode,
    pub target: Word,
}

impl ClCertificate {
    pub fn terms(&self) -> usize {
        self.pairs.len()
    }

    pub fn product(&self) -> Word {
        self.pairs
            .iter()
            .fold(Word::identity(), |acc, (g, x)| acc.mul(&Word::commutator(g, x)))
    }

    /// Certificate for `h·target·h⁻¹` obtained by conjugating every entry.
    pub fn conjugated(&self, h: &Word) -> ClCertificate {
        ClCertificate {
            pairs: self
                .pairs
                .iter()
                .map(|(g, x)| (g.conjugate_by(h), x.conjugate_by(h)))
                .collect(),
            mode: self.mode,
            target: self.target.conjugate_by(h),
        }
    }
}

/// Recomputes the product and the side conditions on `x`; independent of
/// how the certificate was produced.
pub fn verify_cl_certificate(m: &Marking, cert: &ClCertificate) -> bool {
    let group = m.group();
    let words_ok = cert
        .pairs
        .iter()
        .all(|(g, x)| group.check(g).is_ok() && group.check(x).is_ok())
        && group.check(&cert.target).is_ok();
    if !words_ok {
        return false;
    }
    let members_ok = match cert.mode {
        Mode::Ordinary => true,
        Mode::Mixed => cert.pairs.iter().all(|(_, x)| m.in_n(x).unwrap_or(false)),
    };
    members_ok && cert.product() == cert.target
}

/// Distinct nontrivial values of `[g,x]` with the length-lex first pair that
/// produces each, and a map from cyclic classes to their least value.
pub struct CommutatorTable {
    generators: Vec<Word>,
    values: Vec<Word>,
    pairs: Vec<(u32, u32)>,
    classes: FxHashMap<Word, u32>,
    gen_len: usize,
}

/// Upper limit on `|ball|·|ball ∩ N|` when building a table.
pub const MAX_TABLE_PAIRS: u64 = 8_000_000;

impl CommutatorTable {
    pub fn build(m: &Marking, mode: Mode, gen_len: usize, exec: Exec) -> Result<Self, SearchError> {
        let rank = m.rank();
        let mm = m.for_mode(mode);
        let generators = ball(rank, gen_len);
        let xs: Vec<u32> = (0..generators.len() as u32)
            .filter(|&i| mm.in_n_fast(&generators[i as usize]))
            .collect();
        if generators.len() as u64 * xs.len() as u64 > MAX_TABLE_PAIRS {
            return Err(SearchError::TableTooLarge { rank, gen_len });
        }
        let rows: Vec<Vec<(Word, u32, u32)>> = parallel::map_range(exec, generators.len(), |gi| {
            let g = &generators[gi];
            let mut row = Vec::new();
            for &xi in &xs {
                let c = Word::commutator(g, &generators[xi as usize]);
                if !c.is_identity() {
                    row.push((c, gi as u32, xi));
                }
            }
            row
        });
        let mut all: Vec<(Word, u32, u32)> = rows.into_iter().flatten().collect();
        all.sort_unstable();
        all.dedup_by(|b, a| a.0 == b.0);
        let mut values = Vec::with_capacity(all.len());
        let mut pairs = Vec::with_capacity(all.len());
        for (c, g, x) in all {
            values.push(c);
            pairs.push((g, x));
        }
        let canon = parallel::map(exec, &values, Word::cyclic_canonical);
        let mut classes = FxHashMap::default();
        for (i, k) in canon.into_iter().enumerate() {
            classes.entry(k).or_insert(i as u32);
        }
        Ok(Self {
            generators,
            values,
            pairs,
            classes,
            gen_len,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn gen_len(&self) -> usize {
        self.gen_len
    }

    pub fn values(&self) -> &[Word] {
        &self.values
    }

    fn pair(&self, i: usize) -> (Word, Word) {
        let (g, x) = self.pairs[i];
        (self.generators[g as usize].clone(), self.generators[x as usize].clone())
    }

    /// A pair `(g,x)` from the table with `[g,x] = z` up to conjugation,
    /// conjugated so that the commutator equals `z` exactly.
    pub fn conjugate_of_entry(&self, z: &Word) -> Option<(Word, Word)> {
        let (rot, s_z) = z.cyclic_class();
        let &i = self.classes.get(&rot)?;
        let (_, s_v) = self.values[i as usize].cyclic_class();
        let h = s_z.mul(&s_v.inverse());
        let (g, x) = self.pair(i as usize);
        let pair = (g.conjugate_by(&h), x.conjugate_by(&h));
        debug_assert_eq!(Word::commutator(&pair.0, &pair.1), *z);
        Some(pair)
    }

    fn in_class_table(&self, z: &Word) -> bool {
        self.classes.contains_key(&z.cyclic_canonical())
    }

    /// Decomposition of `z` into exactly `depth` commutators (`0` means
    /// `z = ε`), or `None` within the beam.
    fn solve(&self, z: &Word, depth: usize, beam: usize, exec: Exec) -> Option<Vec<(Word, Word)>> {
        match depth {
            0 => z.is_identity().then(Vec::new),
            1 => self.conjugate_of_entry(z).map(|p| vec![p]),
            2 => {
                let i = parallel::find_first_in_range(exec, self.values.len(), |i| {
                    self.in_class_table(&self.values[i].inverse().mul(z))
                })?;
                let rest = self.values[i].inverse().mul(z);
                let last = self.conjugate_of_entry(&rest)?;
                Some(vec![self.pair(i), last])
            }
            _ => {
                let mut scored: Vec<(usize, usize)> = parallel::map_range(exec, self.values.len(), |i| {
                    let rest = self.values[i].inverse().mul(z);
                    let (a, b) = rest.core_bounds();
                    (b - a, i)
                });
                scored.sort_unstable();
                scored.truncate(beam);
                for (_, i) in scored {
                    let rest = self.values[i].inverse().mul(z);
                    if let Some(mut tail) = self.solve(&rest, depth - 1, beam, exec) {
                        tail.insert(0, self.pair(i));
                        return Some(tail);
                    }
                }
                None
            }
        }
    }
}

type TableKey = (usize, Vec<Vec<i64>>, usize);

/// Shared table for `(marking, mode, gen_len)`, built on first use.
pub fn commutator_table(m: &Marking, mode: Mode, gen_len: usize, exec: Exec) -> Result<Arc<CommutatorTable>, SearchError> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<CommutatorTable>>>> = OnceLock::new();
    let mm = m.for_mode(mode);
    let key = (mm.rank(), mm.quotient_matrix().to_vec(), gen_len);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(t.clone());
    }
    let table = Arc::new(CommutatorTable::build(m, mode, gen_len, exec)?);
    Ok(cache
        .lock()
        .expect("cache poisoned")
        .entry(key)
        .or_insert(table)
        .clone())
}

/// Checks the subgroup conditions for `y` under `mode`.
fn check_target(m: &Marking, y: &Word, mode: Mode) -> Result<(), SearchError> {
    let mm = m.for_mode(mode);
    let not_in = |reason: &str| SearchError::NotInSubgroup {
        word: m.format(y),
        reason: reason.to_string(),
    };
    if !mm.in_n(y)? {
        return Err(not_in("not in N"));
    }
    if !mm.in_mixed_commutator(y)? {
        let class = mm.mixed_class(y)?;
        let reason = if class.abelian_part.iter().any(|&x| x != 0) {
            "nonzero abelianization"
        } else {
            "nonzero area class"
        };
        return Err(not_in(reason));
    }
    Ok(())
}

/// Shortest decomposition found within `budget`.
pub fn cl_upper_search(m: &Marking, y: &Word, mode: Mode, budget: &Budget, exec: Exec) -> Result<ClCertificate, SearchError> {
    m.group().check(y).map_err(MarkingError::from)?;
    check_target(m, y, mode)?;
    if y.is_identity() {
        return Ok(ClCertificate {
            pairs: Vec::new(),
            mode,
            target: y.clone(),
        });
    }
    let table = commutator_table(m, mode, budget.gen_len, exec)?;
    for depth in 1..=budget.max_terms {
        if let Some(pairs) = table.solve(y, depth, budget.beam, exec) {
            let cert = ClCertificate {
                pairs,
                mode,
                target: y.clone(),
            };
            assert!(verify_cl_certificate(m, &cert), "search produced an invalid certificate");
            return Ok(cert);
        }
    }
    Err(SearchError::NotFound {
        max_terms: budget.max_terms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainBudget {
    pub conj_len: usize,
    pub max_arrangements: usize,
    pub terms: Budget,
}

impl Default for ChainBudget {
    fn default() -> Self {
        Self {
            conj_len: 1,
            max_arrangements: 64,
            terms: Budget::default(),
        }
    }
}

/// A product `h₁x₁h₁⁻¹⋯` of conjugated chain factors and its decomposition.
#[derive(Clone, Debug)]
pub struct ChainClWitness {
    /// Chain factors in the chosen order (negative terms inverted).
    pub factors: Vec<Word>,
    /// Conjugator for each factor; the first is always `ε`.
    pub conjugators: Vec<Word>,
    pub certificate: ClCertificate,
}

impl ChainClWitness {
    pub fn terms(&self) -> usize {
        self.certificate.terms()
    }

    pub fn product(&self) -> Word {
        self.factors
            .iter()
            .zip(&self.conjugators)
            .fold(Word::identity(), |acc, (x, h)| acc.mul(&x.conjugate_by(h)))
    }
}

/// Next permutation in lexicographic order; `false` after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Up to `limit` arrangements: distinct orderings of `factors` combined with
/// conjugators from `conj` on every factor but the first.
fn arrangements(factors: &[Word], conj: &[Word], limit: usize) -> Vec<(Vec<Word>, Vec<Word>)> {
    let mut out = Vec::new();
    // factors are sorted, so permuting indices of equal words yields duplicates
    let mut keys: Vec<usize> = (0..factors.len())
        .map(|i| factors.iter().position(|f| *f == factors[i]).unwrap())
        .collect();
    keys.sort_unstable();
    loop {
        let order: Vec<Word> = keys.iter().map(|&k| factors[k].clone()).collect();
        let slots = order.len().saturating_sub(1);
        let mut idx = vec![0usize; slots];
        loop {
            if out.len() >= limit {
                return out;
            }
            let mut hs = vec![Word::identity()];
            hs.extend(idx.iter().map(|&i| conj[i].clone()));
            hs.truncate(order.len());
            out.push((order.clone(), hs));
            let mut s = 0;
            while s < slots {
                idx[s] += 1;
                if idx[s] < conj.len() {
                    break;
                }
                idx[s] = 0;
                s += 1;
            }
            if s == slots {
                break;
            }
        }
        if !next_permutation(&mut keys) {
            return out;
        }
    }
}

/// Upper bound on `cl` of an integer chain: the least term count over the
/// arrangements tried. Term counts are explored in increasing order, so the
/// first success is the best within the budget.
pub fn chain_cl_upper(
    m: &Marking,
    c: &Chain1,
    mode: Mode,
    budget: &ChainBudget,
    exec: Exec,
) -> Result<ChainClWitness, SearchError> {
    let mm = m.for_mode(mode);
    if !c.is_integral() || !mm.chain_in_cz(c)? {
        return Err(SearchError::NotInCZ);
    }
    let (pos, neg) = c.expand_integral().ok_or(SearchError::NotInCZ)?;
    let mut factors: Vec<Word> = pos;
    factors.extend(neg.iter().map(Word::inverse));
    factors.sort();
    let conj = ball(m.rank(), budget.conj_len);
    let candidates: Vec<(Vec<Word>, Vec<Word>, Word)> = arrangements(&factors, &conj, budget.max_arrangements.max(1))
        .into_iter()
        .map(|(f, h)| {
            let p = f
                .iter()
                .zip(&h)
                .fold(Word::identity(), |acc, (x, h)| acc.mul(&x.conjugate_by(h)));
            (f, h, p)
        })
        .collect();
    if let Some((f, h, p)) = candidates.iter().find(|(_, _, p)| p.is_identity()) {
        return Ok(ChainClWitness {
            factors: f.clone(),
            conjugators: h.clone(),
            certificate: ClCertificate {
                pairs: Vec::new(),
                mode,
                target: p.clone(),
            },
        });
    }
    let table = commutator_table(m, mode, budget.terms.gen_len, exec)?;
    for depth in 1..=budget.terms.max_terms {
        for (f, h, p) in &candidates {
            if let Some(pairs) = table.solve(p, depth, budget.terms.beam, exec) {
                let certificate = ClCertificate {
                    pairs,
                    mode,
                    target: p.clone(),
                };
                assert!(verify_cl_certificate(m, &certificate), "search produced an invalid certificate");
                return Ok(ChainClWitness {
                    factors: f.clone(),
                    conjugators: h.clone(),
                    certificate,
                });
            }
        }
    }
    Err(SearchError::NotFound {
        max_terms: budget.terms.max_terms,
    })
}
