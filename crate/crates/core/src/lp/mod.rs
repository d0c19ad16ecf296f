//! Truncated filling norms by exact linear programming.
//!
//! Cells are the pairs `(g₁,g₂)` with `|g₁|+|g₂| ≤ L` and at least one entry
//! in `N`. The LP minimizes the ℓ¹ norm of a 2-chain on these cells whose
//! boundary equals the target. With `allow_h`, rows indexed by words of `N`
//! are taken modulo `h(G,N)` (primitive-root normal form); the certificate
//! then records the adjustment as explicit terms `x^k − k·x`.

pub mod simplex;

use num_traits::{Signed, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::chains::{Chain1, Chain2};
use crate::marking::{Marking, MarkingError};
use crate::rational::{fmt_q, q, Q};
use crate::word::{ball, Word};

pub use simplex::{certify, solve_l1, L1Outcome, L1Solution, SparseColumns};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("target word {word} of length {len} exceeds the length budget {budget}")]
    SupportTooLong { word: String, len: usize, budget: usize },
    #[error("target word {0} is not in N")]
    NotInN(String),
    #[error(transparent)]
    Marking(#[from] MarkingError),
}

/// One term `coeff · (x^k − k·x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTerm {
    pub x: Word,
    pub k: i64,
    pub coeff: Q,
}

impl HTerm {
    pub fn chain(&self) -> Chain1 {
        Chain1::from_terms([
            (self.x.pow(self.k), self.coeff.clone()),
            (self.x.clone(), -&self.coeff * q(self.k)),
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingCertificate {
    pub filling: Chain2,
    pub target: Chain1,
    pub h_adjustment: Vec<HTerm>,
    pub value: Q,
    /// Optimal dual weights on the row words.
    pub dual: Vec<(Word, Q)>,
    pub dual_value: Q,
    pub length_budget: usize,
    pub allow_h: bool,
}

impl FillingCertificate {
    pub fn h_adjustment_chain(&self) -> Chain1 {
        self.h_adjustment
            .iter()
            .fold(Chain1::new(), |acc, t| &acc + &t.chain())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FillingOutcome {
    Solved(Box<FillingCertificate>),
    Infeasible,
}

impl FillingOutcome {
    pub fn certificate(&self) -> Option<&FillingCertificate> {
        match self {
            FillingOutcome::Solved(c) => Some(c),
            FillingOutcome::Infeasible => None,
        }
    }
}

/// Admissible cells in enumeration order: `g₁` over the ball, then `g₂`.
pub fn cells(m: &Marking, budget: usize) -> Vec<(Word, Word)> {
    let words = ball(m.rank(), budget);
    let mut out = Vec::new();
    for g1 in &words {
        let n1 = m.in_n_fast(g1);
        for g2 in words.iter().take_while(|g2| g1.len() + g2.len() <= budget) {
            if n1 || m.in_n_fast(g2) {
                out.push((g1.clone(), g2.clone()));
            }
        }
    }
    out
}

/// Row word and multiplier for `w`: in `h` mode words of `N` collapse to
/// their primitive root.
fn normalize(m: &Marking, w: &Word, allow_h: bool) -> Option<(Word, i64)> {
    if allow_h && m.in_n_fast(w) {
        let rd = w.primitive_root();
        (rd.exponent != 0).then_some((rd.root, rd.exponent))
    } else {
        Some((w.clone(), 1))
    }
}

fn cell_boundary(g1: &Word, g2: &Word) -> [(Word, i64); 3] {
    [(g2.clone(), 1), (g1.mul(g2), -1), (g1.clone(), 1)]
}

struct Instance {
    rows: Vec<Word>,
    a: SparseColumns,
    b: Vec<Q>,
    /// Representative cell for each column, with the sign it was taken at.
    cells: Vec<(Word, Word, i64)>,
}

fn assemble(m: &Marking, target: &Chain1, budget: usize, allow_h: bool) -> Instance {
    let mut index: FxHashMap<Word, usize> = FxHashMap::default();
    let mut rows: Vec<Word> = Vec::new();
    let mut row_of = |w: Word, rows: &mut Vec<Word>| -> usize {
        *index.entry(w.clone()).or_insert_with(|| {
            rows.push(w);
            rows.len() - 1
        })
    };
    let mut rhs: FxHashMap<usize, Q> = FxHashMap::default();
    for (w, x) in target.iter() {
        if let Some((r, k)) = normalize(m, w, allow_h) {
            let i = row_of(r, &mut rows);
            *rhs.entry(i).or_insert_with(Q::zero) += x * q(k);
        }
    }
    let mut seen: FxHashMap<Vec<(usize, i64)>, ()> = FxHashMap::default();
    let mut columns = Vec::new();
    let mut reps = Vec::new();
    for (g1, g2) in cells(m, budget) {
        let mut col: FxHashMap<usize, i64> = FxHashMap::default();
        for (w, s) in cell_boundary(&g1, &g2) {
            if let Some((r, k)) = normalize(m, &w, allow_h) {
                let i = row_of(r, &mut rows);
                *col.entry(i).or_insert(0) += s * k;
            }
        }
        let mut col: Vec<(usize, i64)> = col.into_iter().filter(|&(_, v)| v != 0).collect();
        if col.is_empty() {
            continue;
        }
        col.sort_unstable();
        let sign = col[0].1.signum();
        if sign < 0 {
            col.iter_mut().for_each(|e| e.1 = -e.1);
        }
        if seen.insert(col.clone(), ()).is_some() {
            continue;
        }
        columns.push(col.into_iter().map(|(i, v)| (i, q(v))).collect());
        reps.push((g1, g2, sign));
    }
    let mut b = vec![Q::zero(); rows.len()];
    for (i, x) in rhs {
        b[i] = x;
    }
    Instance {
        a: SparseColumns {
            rows: rows.len(),
            columns,
        },
        rows,
        b,
        cells: reps,
    }
}

/// Decomposes a chain whose normal form vanishes into terms `x^k − k·x`.
fn h_terms(adj: &Chain1) -> Vec<HTerm> {
    let mut out = Vec::new();
    for (w, x) in adj.iter() {
        let rd = w.primitive_root();
        if rd.exponent == 1 {
            continue;
        }
        // w = r^k, so x·w = x·(r^k − k·r) + x·k·r and the root terms cancel overall
        out.push(HTerm {
            x: rd.root,
            k: rd.exponent,
            coeff: x.clone(),
        });
    }
    out
}

/// Minimum ℓ¹ norm of an admissible 2-chain with boundary `c` (modulo
/// `h(G,N)` when `allow_h`), among cells of total length at most `budget`.
/// `m` fixes `N`; pass the ordinary marking for `N = G`.
pub fn truncated_filling_norm(m: &Marking, c: &Chain1, budget: usize, allow_h: bool) -> Result<FillingOutcome, LpError> {
    for (w, _) in c.iter() {
        m.group().check(w).map_err(MarkingError::from)?;
        if !m.in_n(w)? {
            return Err(LpError::NotInN(m.format(w)));
        }
        let row = normalize(m, w, allow_h).map(|(r, _)| r).unwrap_or_default();
        if row.len() > budget {
            return Err(LpError::SupportTooLong {
                word: m.format(w),
                len: row.len(),
                budget,
            });
        }
    }
    let inst = assemble(m, c, budget, allow_h);
    let sol = match solve_l1(&inst.a, &inst.b) {
        L1Outcome::Infeasible => return Ok(FillingOutcome::Infeasible),
        L1Outcome::Optimal(s) => s,
    };
    assert!(certify(&inst.a, &inst.b, &sol), "simplex returned an uncertified optimum");
    let mut filling = Chain2::new();
    for ((g1, g2, s), x) in inst.cells.iter().zip(&sol.x) {
        if !x.is_zero() {
            filling.add_term(g1.clone(), g2.clone(), x * q(*s));
        }
    }
    let adjustment = &filling.boundary() - c;
    let h_adjustment = h_terms(&adjustment);
    let dual_value = inst.b.iter().zip(&sol.dual).map(|(x, y)| x * y).sum();
    let cert = FillingCertificate {
        value: filling.l1_norm(),
        filling,
        target: c.clone(),
        h_adjustment,
        dual: inst.rows.into_iter().zip(sol.dual).filter(|(_, y)| !y.is_zero()).collect(),
        dual_value,
        length_budget: budget,
        allow_h,
    };
    assert_eq!(cert.value, sol.value, "filling norm differs from the LP optimum");
    assert!(verify_filling_certificate(m, &cert), "LP produced an invalid filling");
    Ok(FillingOutcome::Solved(Box::new(cert)))
}

/// `½·‖c‖` for the h-normalized chain, with the certificate.
pub fn scl_upper_from_filling(m: &Marking, c: &Chain1, budget: usize) -> Result<Option<(Q, FillingCertificate)>, LpError> {
    let nf = c.h_normal_form_in(m);
    match truncated_filling_norm(m, &nf, budget, true)? {
        FillingOutcome::Solved(cert) => Ok(Some((&cert.value / q(2), *cert))),
        FillingOutcome::Infeasible => Ok(None),
    }
}

/// Solver-independent check of a filling: mixed support, exact boundary
/// identity, well-formed adjustment terms and the ℓ¹ value.
pub fn verify_filling_certificate(m: &Marking, cert: &FillingCertificate) -> bool {
    if !cert.filling.validate_mixed_support(m) {
        return false;
    }
    if cert.h_adjustment.iter().any(|t| !m.in_n(&t.x).unwrap_or(false)) {
        return false;
    }
    if !cert.allow_h && !cert.h_adjustment.is_empty() {
        return false;
    }
    let lhs = cert.filling.boundary();
    let rhs = &cert.target + &cert.h_adjustment_chain();
    lhs == rhs && cert.value == cert.filling.l1_norm()
}

/// Re-derives every admissible cell and checks the recorded dual vector:
/// `|⟨y, ∂σ⟩| ≤ 1` on each cell and `⟨y, target⟩ = value`. Together with the
/// primal certificate this is an exact proof of optimality.
pub fn verify_dual(m: &Marking, cert: &FillingCertificate) -> bool {
    let weights: FxHashMap<&Word, &Q> = cert.dual.iter().map(|(w, y)| (w, y)).collect();
    let weight = |w: &Word| -> Q {
        match normalize(m, w, cert.allow_h) {
            Some((r, k)) => weights.get(&r).map_or(Q::zero(), |y| *y * q(k)),
            None => Q::zero(),
        }
    };
    let cells_ok = cells(m, cert.length_budget).iter().all(|(g1, g2)| {
        let s: Q = cell_boundary(g1, g2)
            .iter()
            .map(|(w, sgn)| weight(w) * q(*sgn))
            .sum();
        s.abs() <= q(1)
    });
    let on_target: Q = cert.target.iter().map(|(w, x)| x * weight(w)).sum();
    cells_ok && on_target == cert.value && cert.dual_value == cert.value
}

/// Row count, column count and value, for reporting.
pub fn describe(cert: &FillingCertificate) -> String {
    format!(
        "value {} over {} cells (L = {}, h = {})",
        fmt_q(&cert.value),
        cert.filling.len(),
        cert.length_budget,
        cert.allow_h
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::word::FreeGroup;

    fn a_only() -> Marking {
        Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap()
    }

    fn w(s: &str) -> Word {
        FreeGroup::new(2).unwrap().parse(s).unwrap()
    }

    fn solved(m: &Marking, c: &Chain1, l: usize, h: bool) -> FillingCertificate {
        match truncated_filling_norm(m, c, l, h).unwrap() {
            FillingOutcome::Solved(cert) => *cert,
            FillingOutcome::Infeasible => panic!("infeasible"),
        }
    }

    #[test]
    fn single_cell() {
        let m = a_only();
        let (x1, x2) = (w("b"), w("aBA"));
        let c = Chain2::cell(x1.clone(), x2.clone()).boundary();
        let cert = solved(&m, &c, 4, false);
        assert!(cert.value <= q(1));
        assert!(verify_filling_certificate(&m, &cert));
        assert!(verify_dual(&m, &cert));
        let (half, _) = scl_upper_from_filling(&m, &c, 4).unwrap().unwrap();
        assert!(half <= frac(1, 2));
    }

    #[test]
    fn conjugate_difference() {
        let m = a_only();
        let (g, v) = (w("a"), w("b"));
        let c = Chain1::from_terms([(v.conjugate_by(&g), q(1)), (v.clone(), q(-1))]);
        let cert = solved(&m, &c, 4, false);
        assert!(cert.value <= q(2));
        assert!(verify_dual(&m, &cert));
    }

    #[test]
    fn zero_chain() {
        let m = a_only();
        let cert = solved(&m, &Chain1::new(), 2, true);
        assert_eq!(cert.value, q(0));
        assert!(cert.filling.is_zero());
        assert!(verify_dual(&m, &cert));
    }

    #[test]
    fn commutator_in_ordinary_mode() {
        let m = Marking::ordinary(2).unwrap();
        let c = Chain1::word(w("[a,b]"));
        let cert = solved(&m, &c, 4, true);
        assert!(verify_filling_certificate(&m, &cert));
        assert!(verify_dual(&m, &cert));
        // 2·scl([a,b]) = 1 is a lower bound for every filling norm
        assert!(cert.value >= q(1));
    }

    #[test]
    fn h_relaxation_is_recorded() {
        let m = a_only();
        let x = w("b");
        let c = Chain1::from_terms([(x.pow(3), q(1)), (x.clone(), q(-3))]);
        let cert = solved(&m, &c, 3, false);
        assert!(cert.value > q(0));
        let relaxed = solved(&m, &c, 3, true);
        assert_eq!(relaxed.value, q(0));
        assert!(verify_filling_certificate(&m, &relaxed));
        assert_eq!(relaxed.h_adjustment_chain(), -&c);
    }

    #[test]
    fn monotone_in_budget() {
        let m = a_only();
        let c = Chain1::word(w("[a,b]"));
        let v4 = solved(&m, &c, 4, true).value;
        let v5 = solved(&m, &c, 5, true).value;
        assert!(v5 <= v4);
    }

    #[test]
    fn tampered_certificates_fail() {
        let m = a_only();
        let c = Chain2::cell(w("b"), w("aBA")).boundary();
        let cert = solved(&m, &c, 4, false);
        let wrong_value = FillingCertificate {
            value: &cert.value + q(1),
            ..cert.clone()
        };
        assert!(!verify_filling_certificate(&m, &wrong_value));
        let mut bad = cert.clone();
        bad.filling = &bad.filling + &Chain2::cell(w("a"), w("a"));
        assert!(!verify_filling_certificate(&m, &bad));
    }

    #[test]
    fn errors() {
        let m = a_only();
        assert!(matches!(
            truncated_filling_norm(&m, &Chain1::word(w("[a,b]")), 3, false),
            Err(LpError::SupportTooLong { .. })
        ));
        assert!(matches!(
            truncated_filling_norm(&m, &Chain1::word(w("a")), 3, false),
            Err(LpError::NotInN(_))
        ));
    }
}
