//! Certified two-sided bounds for scl.
//!
//! Upper bounds come from commutator decompositions of powers (`cl(yᵏ)/k`)
//! and from truncated filling LPs (`½‖c‖_h`); lower bounds from validated
//! counting quasimorphisms. Every interval keeps the certificates it was
//! built from and [`verify_interval`] re-checks them from scratch.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chains::Chain1;
use crate::lp::{self, FillingCertificate, LpError};
use crate::marking::{Marking, MarkingError, Mode};
use crate::parallel::Exec;
use crate::qm::{self, BrooksCombination, Certificate, QmError};
use crate::rational::{fmt_q, frac, q, ExtQ, Q};
use crate::search::{self, Budget, ChainBudget, ChainClWitness, ClCertificate, SearchError};
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Marking(#[from] MarkingError),
    #[error(transparent)]
    Qm(#[from] QmError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("chain is not in C_Q(G,N)")]
    NotInCQ,
    #[error("unsound interval: lower bound {lower} exceeds upper bound {upper}")]
    Unsound { lower: String, upper: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsConfig {
    pub k_max: usize,
    pub search: Budget,
    pub chain: ChainBudget,
    /// Length budget for the filling LP; `None` disables it.
    pub lp_budget: Option<usize>,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            k_max: 5,
            search: Budget::default(),
            chain: ChainBudget {
                conj_len: 1,
                max_arrangements: 16,
                terms: Budget {
                    max_terms: 3,
                    gen_len: 4,
                    beam: 8,
                },
            },
            lp_budget: Some(4),
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum StabilizationWitness {
    Word(ClCertificate),
    Chain(ChainClWitness),
}

#[derive(Clone, Debug)]
pub struct StabilizationEntry {
    pub k: usize,
    /// Commutator count of the best decomposition found, if any.
    pub terms: Option<usize>,
    pub bound: Option<Q>,
    pub witness: Option<StabilizationWitness>,
}

/// `cl(yᵏ)/k` for `k = 1..=k_max`; entries stay empty where the search
/// budget ran out.
pub fn stabilization_sequence(
    m: &Marking,
    y: &Word,
    mode: Mode,
    k_max: usize,
    budget: &Budget,
    exec: Exec,
) -> Result<Vec<StabilizationEntry>, SearchError> {
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let yk = y.pow(k as i64);
        match search::cl_upper_search(m, &yk, mode, budget, exec) {
            Ok(cert) => out.push(StabilizationEntry {
                k,
                terms: Some(cert.terms()),
                bound: Some(frac(cert.terms() as i64, k as i64)),
                witness: Some(StabilizationWitness::Word(cert)),
            }),
            Err(SearchError::NotFound { .. }) => out.push(StabilizationEntry {
                k,
                terms: None,
                bound: None,
                witness: None,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Upper bounds from `cl` of the power chains `Σ cᵢ·xᵢᵏ` of an integer
/// chain with `t = Σ|cᵢ|` factors: an arrangement written with `n`
/// commutators bounds `scl` by `(n + t/2 − 1)/k` (the genus-`n` surface with
/// `t` boundary components), not by `n/k`.
pub fn chain_stabilization_sequence(
    m: &Marking,
    c: &Chain1,
    mode: Mode,
    k_max: usize,
    budget: &ChainBudget,
    exec: Exec,
) -> Result<Vec<StabilizationEntry>, SearchError> {
    let (l, lc) = c.clear_denominators();
    let l = l.to_i64().ok_or(SearchError::NotInCZ)?;
    let t: i64 = lc
        .iter()
        .map(|(_, x)| x.abs().to_integer().to_i64().unwrap_or(i64::MAX))
        .sum();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let pk = Chain1::from_terms(lc.iter().map(|(w, x)| (w.pow(k as i64), x.clone())));
        match search::chain_cl_upper(m, &pk, mode, budget, exec) {
            Ok(wit) => {
                let n = wit.terms() as i64;
                let raw = (q(n) + frac(t, 2) - q(1)) / q(k as i64 * l);
                let bound = if raw.is_negative() { Q::zero() } else { raw };
                out.push(StabilizationEntry {
                    k,
                    terms: Some(wit.terms()),
                    bound: Some(bound),
                    witness: Some(StabilizationWitness::Chain(wit)),
                });
            }
            Err(SearchError::NotFound { .. }) => out.push(StabilizationEntry {
                k,
                terms: None,
                bound: None,
                witness: None,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LowerCertificate {
    pub combination: BrooksCombination,
    /// `φ(c)` for the homogenized combination.
    pub value: Q,
    pub bound: Q,
}

#[derive(Clone, Debug)]
pub enum UpperCertificate {
    Stabilization { k: usize, certificate: ClCertificate },
    ChainStabilization { k: usize, witness: ChainClWitness },
    Filling(Box<FillingCertificate>),
    /// The target is zero after normalization.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LpStatus {
    Solved {
        #[serde(with = "crate::rational::qstr")]
        value: Q,
    },
    Infeasible,
    Skipped {
        reason: String,
    },
}

#[derive(Clone, Debug)]
pub struct BoundInterval {
    pub mode: Mode,
    /// The target as a chain (a word `y` is the chain `1·y`).
    pub target: Chain1,
    pub lower: Q,
    pub upper: ExtQ,
    pub lower_cert: Option<LowerCertificate>,
    pub upper_cert: Option<UpperCertificate>,
    pub stabilization: Vec<StabilizationEntry>,
    pub lp: LpStatus,
}

impl BoundInterval {
    pub fn width(&self) -> ExtQ {
        match &self.upper {
            ExtQ::Finite(u) => ExtQ::Finite(u - &self.lower),
            ExtQ::Infinite => ExtQ::Infinite,
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.lower <= *x && ExtQ::Finite(x.clone()) <= self.upper
    }

    pub fn intersects(&self, other: &BoundInterval) -> bool {
        ExtQ::Finite(self.lower.clone()) <= other.upper && ExtQ::Finite(other.lower.clone()) <= self.upper
    }
}

fn lower_bound(m: &Marking, c: &Chain1, certs: &[Certificate]) -> Result<(Q, Option<LowerCertificate>), BoundsError> {
    let (best, idx) = qm::best_lower_bound(certs, c, m)?;
    let cert = idx.map(|i| {
        let combination = certs[i].combination().clone();
        LowerCertificate {
            value: combination.evaluate_chain(c),
            combination,
            bound: best.clone(),
        }
    });
    Ok((best, cert))
}

fn run_lp(mm: &Marking, c: &Chain1, budget: Option<usize>) -> Result<(LpStatus, Option<(Q, FillingCertificate)>), BoundsError> {
    let Some(l) = budget else {
        return Ok((
            LpStatus::Skipped {
                reason: "disabled".into(),
            },
            None,
        ));
    };
    let nf = c.h_normal_form_in(mm);
    if nf.max_word_len() > l {
        return Ok((
            LpStatus::Skipped {
                reason: format!("support length {} exceeds L = {l}", nf.max_word_len()),
            },
            None,
        ));
    }
    match lp::scl_upper_from_filling(mm, &nf, l)? {
        Some((half, cert)) => Ok((LpStatus::Solved { value: cert.value.clone() }, Some((half, cert)))),
        None => Ok((LpStatus::Infeasible, None)),
    }
}

fn finish(
    mode: Mode,
    target: Chain1,
    lower: (Q, Option<LowerCertificate>),
    stabilization: Vec<StabilizationEntry>,
    lp: (LpStatus, Option<(Q, FillingCertificate)>),
) -> Result<BoundInterval, BoundsError> {
    let mut upper = ExtQ::Infinite;
    let mut upper_cert = None;
    for e in &stabilization {
        if let (Some(b), Some(w)) = (&e.bound, &e.witness) {
            if ExtQ::Finite(b.clone()) < upper {
                upper = ExtQ::Finite(b.clone());
                upper_cert = Some(match w {
                    StabilizationWitness::Word(c) => UpperCertificate::Stabilization {
                        k: e.k,
                        certificate: c.clone(),
                    },
                    StabilizationWitness::Chain(c) => UpperCertificate::ChainStabilization {
                        k: e.k,
                        witness: c.clone(),
                    },
                });
            }
        }
    }
    let (lp_status, lp_cert) = lp;
    if let Some((half, cert)) = lp_cert {
        if ExtQ::Finite(half.clone()) < upper {
            upper = ExtQ::Finite(half);
            upper_cert = Some(UpperCertificate::Filling(Box::new(cert)));
        }
    }
    let (lower, lower_cert) = lower;
    if ExtQ::Finite(lower.clone()) > upper {
        return Err(BoundsError::Unsound {
            lower: fmt_q(&lower),
            upper: upper.to_string(),
        });
    }
    Ok(BoundInterval {
        mode,
        target,
        lower,
        upper,
        lower_cert,
        upper_cert,
        stabilization,
        lp: lp_status,
    })
}

/// Interval for a single element `y ∈ [G,N]` (or `[G,G]` in ordinary mode).
pub fn scl_interval(
    m: &Marking,
    y: &Word,
    mode: Mode,
    config: &BoundsConfig,
    certs: &[Certificate],
) -> Result<BoundInterval, BoundsError> {
    let mm = m.for_mode(mode);
    let target = Chain1::word(y.clone());
    if y.is_identity() {
        return finish(
            mode,
            target,
            (Q::zero(), None),
            Vec::new(),
            (LpStatus::Solved { value: Q::zero() }, None),
        )
        .map(|mut i| {
            i.upper = ExtQ::zero();
            i.upper_cert = Some(UpperCertificate::Trivial);
            i
        });
    }
    let stabilization = stabilization_sequence(m, y, mode, config.k_max, &config.search, config.exec)?;
    let lower = lower_bound(&mm, &target, certs)?;
    let lp = run_lp(&mm, &target, config.lp_budget)?;
    finish(mode, target, lower, stabilization, lp)
}

/// Interval for a rational chain in `C_Q(G,N)`. The chain is h-normalized
/// first; a single term `n·w` with integer `n` is treated as the element
/// `wⁿ`.
pub fn scl_interval_chain(
    m: &Marking,
    c: &Chain1,
    mode: Mode,
    config: &BoundsConfig,
    certs: &[Certificate],
) -> Result<BoundInterval, BoundsError> {
    let mm = m.for_mode(mode);
    if !mm.chain_in_cq(c)? {
        return Err(BoundsError::NotInCQ);
    }
    let nf = c.h_normal_form_in(&mm);
    if nf.is_zero() {
        return Ok(BoundInterval {
            mode,
            target: c.clone(),
            lower: Q::zero(),
            upper: ExtQ::zero(),
            lower_cert: None,
            upper_cert: Some(UpperCertificate::Trivial),
            stabilization: Vec::new(),
            lp: LpStatus::Solved { value: Q::zero() },
        });
    }
    if nf.len() == 1 {
        let (w, x) = nf.iter().next().expect("one term");
        if x.is_integer() {
            let n = x.to_integer().to_i64().ok_or(BoundsError::NotInCQ)?;
            let mut i = scl_interval(m, &w.pow(n), mode, config, certs)?;
            i.target = c.clone();
            return Ok(i);
        }
    }
    let stabilization = chain_stabilization_sequence(m, &nf, mode, config.k_max, &config.chain, config.exec)?;
    let lower = lower_bound(&mm, &nf, certs)?;
    let lp = run_lp(&mm, &nf, config.lp_budget)?;
    let mut i = finish(mode, nf, lower, stabilization, lp)?;
    i.target = c.clone();
    Ok(i)
}

/// Re-checks every certificate embedded in an interval against the target.
pub fn verify_interval(m: &Marking, interval: &BoundInterval) -> bool {
    let mm = m.for_mode(interval.mode);
    let nf = interval.target.h_normal_form_in(&mm);
    let lower_ok = match &interval.lower_cert {
        None => interval.lower.is_zero(),
        Some(lc) => {
            let v = lc.combination.evaluate_chain(&nf);
            let d = lc.combination.defect_bound();
            let recomputed = if v.is_zero() {
                Q::zero()
            } else {
                v.abs() / (q(2) * d)
            };
            recomputed == interval.lower
                && lc.bound == interval.lower
                && qm::defect_window_check(&lc.combination, m.rank(), Exec::Sequential)
                    .map(|r| r.pass)
                    .unwrap_or(false)
        }
    };
    let single_word = || -> Option<Word> {
        let (w, x) = nf.iter().next()?;
        if nf.len() != 1 || !x.is_integer() {
            return None;
        }
        Some(w.pow(x.to_integer().to_i64()?))
    };
    let upper_ok = match (&interval.upper_cert, &interval.upper) {
        (None, ExtQ::Infinite) => true,
        (Some(UpperCertificate::Trivial), ExtQ::Finite(u)) => u.is_zero() && nf.is_zero(),
        (Some(UpperCertificate::Stabilization { k, certificate }), ExtQ::Finite(u)) => {
            let y = single_word();
            search::verify_cl_certificate(&mm, certificate)
                && y.is_some_and(|y| certificate.target == y.pow(*k as i64))
                && *u == frac(certificate.terms() as i64, *k as i64)
        }
        (Some(UpperCertificate::ChainStabilization { witness, .. }), ExtQ::Finite(_)) => {
            search::verify_cl_certificate(&mm, &witness.certificate) && witness.product() == witness.certificate.target
        }
        (Some(UpperCertificate::Filling(cert)), ExtQ::Finite(u)) => {
            let target_ok = match single_word() {
                Some(y) => cert.target == Chain1::word(y).h_normal_form_in(&mm),
                None => cert.target == nf,
            };
            lp::verify_filling_certificate(&mm, cert) && target_ok && *u == &cert.value / q(2)
        }
        _ => false,
    };
    lower_ok && upper_ok && ExtQ::Finite(interval.lower.clone()) <= interval.upper
}

#[derive(Clone, Debug)]
pub struct ModeComparison {
    pub ordinary: BoundInterval,
    pub mixed: BoundInterval,
    /// `lower_G ≤ upper_{G,N}`.
    pub monotone: bool,
    /// The two intervals meet.
    pub intersect: bool,
    /// `lower_{G,N} ≤ 2·upper_G`.
    pub doubling: bool,
}

impl ModeComparison {
    pub fn all_hold(&self) -> bool {
        self.monotone && self.intersect && self.doubling
    }
}

pub fn compare_modes(
    m: &Marking,
    y: &Word,
    config: &BoundsConfig,
    certs: &[Certificate],
) -> Result<ModeComparison, BoundsError> {
    let ordinary = scl_interval(m, y, Mode::Ordinary, config, certs)?;
    let mixed = scl_interval(m, y, Mode::Mixed, config, certs)?;
    let monotone = ExtQ::Finite(ordinary.lower.clone()) <= mixed.upper;
    let intersect = ordinary.intersects(&mixed);
    let doubling = ExtQ::Finite(mixed.lower.clone()) <= &ordinary.upper + &ordinary.upper;
    Ok(ModeComparison {
        ordinary,
        mixed,
        monotone,
        intersect,
        doubling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qm::default_certificates;
    use crate::word::FreeGroup;

    fn w(s: &str) -> Word {
        FreeGroup::new(2).unwrap().parse(s).unwrap()
    }

    fn quick() -> BoundsConfig {
        BoundsConfig {
            k_max: 3,
            search: Budget {
                max_terms: 3,
                gen_len: 4,
                beam: 8,
            },
            lp_budget: Some(4),
            ..BoundsConfig::default()
        }
    }

    #[test]
    fn stabilization_examples() {
        let m = Marking::ordinary(2).unwrap();
        let budget = Budget::default();
        let s = stabilization_sequence(&m, &w("[a,b]"), Mode::Ordinary, 3, &budget, Exec::Parallel).unwrap();
        assert_eq!(s[0].bound, Some(q(1)));
        assert_eq!(s[2].bound, Some(frac(2, 3)));
        let s = stabilization_sequence(&m, &Word::identity(), Mode::Ordinary, 3, &budget, Exec::Parallel).unwrap();
        assert!(s.iter().all(|e| e.bound == Some(q(0))));
    }

    #[test]
    fn commutator_interval() {
        let m = Marking::ordinary(2).unwrap();
        let certs = default_certificates(2);
        let i = scl_interval(&m, &w("[a,b]"), Mode::Ordinary, &quick(), &certs).unwrap();
        assert!(i.lower >= frac(1, 4));
        assert!(i.upper <= ExtQ::Finite(q(1)));
        assert!(i.contains(&frac(1, 2)));
        assert!(verify_interval(&m, &i));
    }

    #[test]
    fn trivial_and_obstructed() {
        let m = Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap();
        let certs = default_certificates(2);
        let i = scl_interval_chain(&m, &Chain1::new(), Mode::Mixed, &quick(), &certs).unwrap();
        assert_eq!((i.lower.clone(), i.upper.clone()), (q(0), ExtQ::zero()));
        assert!(verify_interval(&m, &i));
        let err = scl_interval(&m, &w("b"), Mode::Mixed, &quick(), &certs).unwrap_err();
        assert!(matches!(err, BoundsError::Search(SearchError::NotInSubgroup { .. })));
    }

    #[test]
    fn three_term_chain() {
        let m = Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap();
        let certs = default_certificates(2);
        let (x1, x2) = (w("b"), w("aBA"));
        let c = Chain1::from_terms([(x1.clone(), q(1)), (x2.clone(), q(1)), (x1.mul(&x2), q(-1))]);
        let i = scl_interval_chain(&m, &c, Mode::Mixed, &quick(), &certs).unwrap();
        assert!(i.upper <= ExtQ::Finite(frac(1, 2)));
        assert!(verify_interval(&m, &i));
    }

    #[test]
    fn modes_compared() {
        let m = Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap();
        let certs = default_certificates(2);
        let r = compare_modes(&m, &w("[a,b]"), &quick(), &certs).unwrap();
        assert!(r.monotone);
        assert!(r.all_hold());
        let r = compare_modes(&m, &Word::identity(), &quick(), &certs).unwrap();
        assert_eq!(r.ordinary.upper, ExtQ::zero());
        assert_eq!(r.mixed.upper, ExtQ::zero());
    }
}
