//! Randomized property suite. Each property is a plain function of a seeded
//! stream and its sample count, returning a status and a JSON witness; a
//! failing property reports its shortest failing input.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::oracle;
use super::sample;
use super::{boundary_formula, run_checks, CheckFn, Status, SuiteReport};
use crate::bounds::{self, BoundInterval, BoundsConfig};
use crate::chains::{self, Chain1, Chain2};
use crate::coarse::{self, MetricSample};
use crate::lp::{self, FillingOutcome};
use crate::marking::{Marking, Mode};
use crate::parallel::Exec;
use crate::qm::{self, BrooksCombination};
use crate::rational::{fmt_q, frac, q, ExtQ};
use crate::search::{self, Budget, ChainBudget, SearchError};
use crate::word::{FreeGroup, Word};

/// Sample sizes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Counts {
    pub words: usize,
    pub long_words: usize,
    pub pairs: usize,
    pub normal_forms: usize,
    pub qm_samples: usize,
    pub chains: usize,
    pub searches: usize,
    pub lp_instances: usize,
    pub intervals: usize,
    pub triangle_pairs: usize,
    pub embeddings: usize,
    pub metric_samples: usize,
}

impl Default for Counts {
    fn default() -> Self {
        Counts {
            words: 200,
            long_words: 1000,
            pairs: 100,
            normal_forms: 500,
            qm_samples: 200,
            chains: 20,
            searches: 20,
            lp_instances: 12,
            intervals: 8,
            triangle_pairs: 8,
            embeddings: 20,
            metric_samples: 50,
        }
    }
}

/// Search and LP budgets used inside the suite.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteBudgets {
    pub k_max: usize,
    pub search: Budget,
    pub lp_budget: usize,
    /// Word length and coefficient range of the exhaustive chain sweep.
    pub sweep_len: usize,
    pub sweep_coeff: i64,
    /// Word length, `|g|` and `|x|` of the commutator-product oracle.
    pub oracle_len: usize,
    pub oracle_gen_len: usize,
}

impl Default for SuiteBudgets {
    fn default() -> Self {
        SuiteBudgets {
            k_max: 2,
            search: Budget {
                max_terms: 3,
                gen_len: 4,
                beam: 8,
            },
            lp_budget: 4,
            sweep_len: 3,
            sweep_coeff: 2,
            oracle_len: 6,
            oracle_gen_len: 4,
        }
    }
}

impl SuiteBudgets {
    pub fn bounds_config(&self, exec: Exec) -> BoundsConfig {
        BoundsConfig {
            k_max: self.k_max,
            search: self.search,
            chain: ChainBudget {
                conj_len: 1,
                max_arrangements: 8,
                terms: self.search,
            },
            lp_budget: Some(self.lp_budget),
            exec,
        }
    }
}

fn a_only() -> Marking {
    Marking::new(FreeGroup::new(2).expect("rank 2"), vec![vec![1, 0]]).expect("shape")
}

fn full() -> Marking {
    Marking::full_abelianization(2).expect("rank 2")
}

/// Pass when `failures` is empty; the witness is the shortest failure.
fn verdict(failures: Vec<String>, detail: Value) -> (Status, Value) {
    let mut detail = detail;
    let shortest = failures.iter().min_by_key(|s| (s.len(), s.as_str())).cloned();
    detail["failures"] = json!(failures.len());
    if let Some(w) = shortest {
        detail["witness"] = json!(w);
    }
    (failures.is_empty().into(), detail)
}

fn fmt(w: &Word) -> String {
    w.to_default_string()
}

/// A product of `n` random simple commutators `[g,x]`, `x ∈ N`.
fn commutator_product(rng: &mut ChaCha8Rng, m: &Marking, n: usize, len: usize) -> Word {
    (0..n).fold(Word::identity(), |acc, _| {
        let g = sample::word(rng, m.rank(), len);
        let x = sample::word_in_n(rng, m, len);
        acc.mul(&Word::commutator(&g, &x))
    })
}

pub fn word_reduce_idempotent(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let mut bad = Vec::new();
    for _ in 0..count {
        let len = rng.gen_range(0..40);
        let raw: Vec<i64> = (0..len)
            .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2))
            .collect();
        let w = Word::reduce(&raw, 2).expect("in range");
        let again: Vec<i64> = w.letters().iter().map(|&l| i64::from(l)).collect();
        if Word::reduce(&again, 2).expect("in range") != w || w.letters().windows(2).any(|p| p[0] == -p[1]) {
            bad.push(format!("{raw:?}"));
        }
    }
    verdict(bad, json!({ "samples": count }))
}

pub fn word_inverse_cancels(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let mut bad = Vec::new();
    for _ in 0..count {
        let w = sample::word(rng, 3, 64);
        if !w.mul(&w.inverse()).is_identity() || !w.inverse().mul(&w).is_identity() {
            bad.push(fmt(&w));
        }
    }
    verdict(bad, json!({ "samples": count }))
}

pub fn word_structure(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let m = full();
    let mut bad = Vec::new();
    for _ in 0..count {
        let g = sample::word(rng, 2, 10);
        let x = sample::word(rng, 2, 10);
        let c = Word::commutator(&g, &x);
        if m.abelianize(&c).expect("rank").iter().any(|&v| v != 0) {
            bad.push(format!("commutator [{}, {}]", fmt(&g), fmt(&x)));
        }
        let base = sample::word(rng, 2, 6);
        let w = base.pow(rng.gen_range(-4..=4));
        let rd = w.primitive_root();
        if rd.root.pow(rd.exponent) != w {
            bad.push(format!("root {}", fmt(&w)));
        }
        let (core, conj) = w.cyclic_reduce();
        if conj.mul(&core).mul(&conj.inverse()) != w || !core.is_cyclically_reduced() {
            bad.push(format!("cyclic {}", fmt(&w)));
        }
    }
    verdict(bad, json!({ "samples": count }))
}

pub fn marking_subgroup(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let mut bad = Vec::new();
    for m in [a_only(), full()] {
        for _ in 0..count / 2 {
            let g = sample::word(rng, 2, 6);
            let x = sample::word_in_n(rng, &m, 6);
            let c = Word::commutator(&g, &x);
            if !m.in_mixed_commutator(&c).expect("rank") {
                bad.push(format!("[{}, {}] not in [G,N]", fmt(&g), fmt(&x)));
            }
            let u = commutator_product(rng, &m, 2, 4);
            let w = sample::word(rng, 2, 10);
            for v in [&u, &w] {
                let inside = m.in_mixed_commutator(v).expect("rank");
                if inside && (!m.in_n(v).expect("rank") || m.abelianize(v).expect("rank").iter().any(|&e| e != 0)) {
                    bad.push(format!("{} in [G,N] but not in N ∩ [G,G]", fmt(v)));
                }
                let h = sample::word(rng, 2, 5);
                if m.in_mixed_commutator(&v.conjugate_by(&h)).expect("rank") != inside {
                    bad.push(format!("conjugating {} by {}", fmt(v), fmt(&h)));
                }
            }
            let u2 = commutator_product(rng, &m, 1, 5);
            if !m.in_mixed_commutator(&u.mul(&u2)).expect("rank") {
                bad.push(format!("product {}·{}", fmt(&u), fmt(&u2)));
            }
        }
    }
    verdict(bad, json!({ "samples": count }))
}

pub fn marking_product_oracle(budgets: &SuiteBudgets, exec: Exec) -> (Status, Value) {
    let a = oracle::commutator_product_oracle(&full(), budgets.oracle_len, budgets.oracle_gen_len, budgets.oracle_gen_len, exec);
    (a.all_agree().into(), json!(a))
}

/// Exhaustive chain sweep: the mixed marking with conjugators of radius
/// three (two beyond three factors) and the ordinary marking with
/// coefficients `±1`.
pub fn chain_membership_sweep(budgets: &SuiteBudgets, exec: Exec) -> (Status, Value) {
    let mixed = oracle::lemma_sweep(&a_only(), budgets.sweep_len, budgets.sweep_coeff, oracle::default_conj_radius, exec);
    let ordinary = oracle::lemma_sweep(
        &Marking::ordinary(2).expect("rank 2"),
        budgets.sweep_len,
        1,
        oracle::default_conj_radius,
        exec,
    );
    let ok = mixed.all_agree() && ordinary.all_agree();
    (ok.into(), json!({ "mixed": mixed, "ordinary": ordinary }))
}

fn random_chain2(rng: &mut ChaCha8Rng, m: &Marking, cells: usize, both_in_n: bool) -> Chain2 {
    let mut s = Chain2::new();
    for _ in 0..cells {
        let g1 = if both_in_n {
            sample::word_in_n(rng, m, 4)
        } else {
            sample::word(rng, 2, 4)
        };
        let g2 = sample::word_in_n(rng, m, 4);
        s.add_term(g1, g2, sample::small_rational(rng));
    }
    s
}

pub fn chain_linearity(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let m = a_only();
    let mut bad = Vec::new();
    for i in 0..count {
        let s = random_chain2(rng, &m, 3, false);
        let t = random_chain2(rng, &m, 3, false);
        let (a, b) = (sample::small_rational(rng), sample::small_rational(rng));
        let lhs = (&s.scaled(&a) + &t.scaled(&b)).boundary();
        let rhs = &s.boundary().scaled(&a) + &t.boundary().scaled(&b);
        if lhs != rhs {
            bad.push(format!("sample {i}"));
        }
        let c = s.boundary();
        let d = t.boundary();
        let nf = c.h_normal_form();
        if nf.h_normal_form() != nf {
            bad.push(format!("idempotence {i}"));
        }
        let combined = (&c.scaled(&a) + &d.scaled(&b)).h_normal_form();
        if combined != &nf.scaled(&a) + &d.h_normal_form().scaled(&b) {
            bad.push(format!("linearity {i}"));
        }
    }
    verdict(bad, json!({ "samples": count }))
}

pub fn h_annihilation(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let mut bad = Vec::new();
    for _ in 0..count {
        let x = sample::nontrivial_word(rng, 2, 6);
        let k = rng.gen_range(-8..=8i64);
        let c = Chain1::from_terms([(x.pow(k), q(1)), (x.clone(), q(-k))]);
        if !c.h_normal_form().is_zero() {
            bad.push(format!("x = {}, k = {k}", fmt(&x)));
        }
        let nf = c.h_normal_form();
        if nf.h_normal_form() != nf {
            bad.push(format!("idempotence at x = {}", fmt(&x)));
        }
    }
    verdict(bad, json!({ "samples": count }))
}

pub fn mixed_boundaries_in_cz(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let m = a_only();
    let mut bad = Vec::new();
    for i in 0..count {
        let s = random_chain2(rng, &m, 3, true);
        let (_, integral) = s.boundary().clear_denominators();
        if !s.validate_mixed_support(&m) || !m.chain_in_cz(&integral).unwrap_or(false) {
            bad.push(format!("sample {i}"));
        }
    }
    verdict(bad, json!({ "samples": count }))
}

/// `|φ(kc) − φ(y)| ≤ (m+m′)·D ≤ εk·D` for every default combination, over
/// random chains and `ε ∈ {1, ½, ¼}`.
pub fn scaling_up(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let m = a_only();
    let certs = qm::default_certificates(2);
    let combos: Vec<BrooksCombination> = certs.iter().map(|c| c.combination().clone()).collect();
    let mut bad = Vec::new();
    let mut instances = 0;
    for i in 0..count {
        let c = sample::chain_in_cq(rng, &m, 2, 3);
        for eps in [q(1), frac(1, 2), frac(1, 4)] {
            match chains::scale_approximate(&m, &c, &eps, &combos) {
                Ok(a) => {
                    instances += a.checks.len();
                    if !a.all_hold() || !m.in_mixed_commutator(&a.y).unwrap_or(false) {
                        bad.push(format!("chain {i} at ε = {}", fmt_q(&eps)));
                    }
                }
                Err(e) => bad.push(format!("chain {i} at ε = {}: {e}", fmt_q(&eps))),
            }
        }
    }
    verdict(bad, json!({ "chains": count, "inequalities": instances, "combinations": combos.len() }))
}

pub fn qm_exactness(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let certs = qm::default_certificates(2);
    let mut bad = Vec::new();
    for _ in 0..count {
        let phi = certs[rng.gen_range(0..certs.len())].combination();
        let y = sample::nontrivial_word(rng, 2, 10);
        let v = phi.homogenized_value(&y);
        if phi.homogenized_value_cyclic(&y) != v {
            bad.push(format!("slope and cyclic values differ on {}", fmt(&y)));
        }
        let k = rng.gen_range(-3..=3i64);
        if phi.homogenized_value(&y.pow(k)) != &v * q(k) {
            bad.push(format!("{}^{k}", fmt(&y)));
        }
        let g = sample::word(rng, 2, 6);
        if phi.homogenized_value(&y.conjugate_by(&g)) != v {
            bad.push(format!("conjugating {} by {}", fmt(&y), fmt(&g)));
        }
    }
    verdict(bad, json!({ "samples": count }))
}

pub fn qm_default_window() -> (Status, Value) {
    let combos = qm::default_combinations(2);
    let certs = qm::default_certificates(2);
    let worst = certs.iter().map(|c| c.report().empirical_max.clone()).max();
    let ok = certs.len() == combos.len() && certs.iter().all(|c| c.report().pass);
    (
        ok.into(),
        json!({
            "combinations": combos.len(),
            "validated": certs.len(),
            "max_empirical_defect": worst.map(|x| fmt_q(&x)),
        }),
    )
}

/// Lowers a bound below its observed defect; the scan must reject it and
/// name a witness pair.
pub fn qm_mutation(exec: Exec) -> (Status, Value) {
    let w = Word::from_letters([1, 2]);
    let honest = BrooksCombination::single(w);
    let corrupted = honest.clone().with_defect_bound(frac(1, 2));
    let report = qm::defect_window_check(&corrupted, 2, exec).expect("window fits");
    let caught = !report.pass && report.witness.is_some() && report.empirical_max > frac(1, 2);
    let rejected = matches!(qm::validate(corrupted, 2, exec), Err(qm::QmError::Disqualified { .. }));
    (
        (caught && rejected).into(),
        json!({
            "atom": "ab",
            "corrupted_bound": "1/2",
            "empirical_max": fmt_q(&report.empirical_max),
            "witness": report.witness.map(|(u, v)| [fmt(&u), fmt(&v)]),
        }),
    )
}

pub fn search_properties(rng: &mut ChaCha8Rng, count: usize, budget: &Budget, exec: Exec) -> (Status, Value) {
    let m = a_only();
    let mut bad = Vec::new();
    let mut solved = (0, 0);
    for _ in 0..count {
        let n = rng.gen_range(1..=2);
        let y = commutator_product(rng, &m, n, 3);
        let ord = search::cl_upper_search(&m, &y, Mode::Ordinary, budget, exec);
        let mix = search::cl_upper_search(&m, &y, Mode::Mixed, budget, exec);
        for r in [&ord, &mix] {
            match r {
                Ok(cert) => {
                    let mm = m.for_mode(cert.mode);
                    if !search::verify_cl_certificate(&mm, cert) {
                        bad.push(format!("unverified certificate for {}", fmt(&y)));
                    }
                    let h = sample::word(rng, 2, 4);
                    let conj = cert.conjugated(&h);
                    if !search::verify_cl_certificate(&mm, &conj) || conj.target != y.conjugate_by(&h) {
                        bad.push(format!("conjugating certificate for {} by {}", fmt(&y), fmt(&h)));
                    }
                }
                Err(SearchError::NotFound { .. }) => {}
                Err(e) => bad.push(format!("{}: {e}", fmt(&y))),
            }
        }
        if let (Ok(o), Ok(x)) = (&ord, &mix) {
            solved.0 += 1;
            if x.terms() < o.terms() {
                bad.push(format!("mixed count below ordinary for {}", fmt(&y)));
            }
        }
        let outside = sample::nontrivial_word(rng, 2, 7);
        if !m.in_mixed_commutator(&outside).unwrap_or(true) {
            solved.1 += 1;
            if search::cl_upper_search(&m, &outside, Mode::Mixed, budget, exec).is_ok() {
                bad.push(format!("certificate for {} outside [G,N]", fmt(&outside)));
            }
        }
    }
    verdict(bad, json!({ "samples": count, "both_modes_solved": solved.0, "rejected_outside": solved.1 }))
}

fn solve(m: &Marking, c: &Chain1, l: usize) -> Option<lp::FillingCertificate> {
    match lp::truncated_filling_norm(m, &c.h_normal_form_in(m), l, true) {
        Ok(FillingOutcome::Solved(cert)) => Some(*cert),
        _ => None,
    }
}

/// Small LP instances: `y₁ + y₂ − y₁y₂` and `x^k − k·x` style chains with
/// short words.
fn lp_instance(rng: &mut ChaCha8Rng, m: &Marking) -> Chain1 {
    let y1 = sample::word_in_n(rng, m, 2);
    let y2 = sample::word_in_n(rng, m, 2);
    let mut c = Chain1::from_terms([(y1.clone(), q(1)), (y2.clone(), q(1)), (y1.mul(&y2), q(-1))]);
    if rng.gen_bool(0.5) {
        let x = sample::word_in_n(rng, m, 2);
        let g = sample::word(rng, 2, 1);
        c = &c + &Chain1::from_terms([(x.conjugate_by(&g), q(1)), (x, q(-1))]);
    }
    c
}

/// Strong duality, monotonicity in `L`, the Bavard sandwich and
/// subadditivity on small instances.
pub fn lp_properties(rng: &mut ChaCha8Rng, count: usize, l: usize) -> (Status, Value) {
    let m = a_only();
    let certs = qm::default_certificates(2);
    let mut bad = Vec::new();
    let mut solved = 0;
    for i in 0..count {
        let c = lp_instance(rng, &m);
        let d = lp_instance(rng, &m);
        let Some(cc) = solve(&m, &c, l) else {
            bad.push(format!("instance {i} infeasible"));
            continue;
        };
        solved += 1;
        if !lp::verify_dual(&m, &cc) || cc.dual_value != cc.value {
            bad.push(format!("duality gap on instance {i}"));
        }
        if let Some(wider) = solve(&m, &c, l + 1) {
            solved += 1;
            if wider.value > cc.value || !lp::verify_dual(&m, &wider) {
                bad.push(format!("L monotonicity on instance {i}"));
            }
        }
        if let Ok((lower, _)) = qm::best_lower_bound(&certs, &c, &m) {
            if &lower * q(2) > cc.value {
                bad.push(format!("Bavard bound above filling on instance {i}"));
            }
        }
        if let (Some(dd), Some(sum)) = (solve(&m, &d, l), solve(&m, &(&c + &d), l)) {
            solved += 2;
            if sum.value > &cc.value + &dd.value {
                bad.push(format!("subadditivity on instance {i}"));
            }
        }
    }
    verdict(bad, json!({ "instances": count, "solved": solved, "length_budget": l }))
}

/// Random `y ∈ [F₂,[F₂,F₂]]` with `|y| ≤ max_len`.
pub fn gamma3_sample(rng: &mut ChaCha8Rng, count: usize, max_len: usize) -> Vec<Word> {
    let m = full();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if let Some(y) = sample::element_of_gn(rng, &m, max_len, 100_000) {
            out.push(y);
        }
    }
    out
}

fn interval_str(i: &BoundInterval) -> String {
    format!("[{}, {}]", fmt_q(&i.lower), i.upper)
}

/// Mode monotonicity `lower_G ≤ upper_{G,N}`, intersection of the two
/// intervals, soundness and certificate re-verification on `[F₂,[F₂,F₂]]`.
pub fn mode_comparison(ys: &[Word], config: &BoundsConfig) -> (Status, Value) {
    let m = full();
    let certs = qm::default_certificates(2);
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    for y in ys {
        match bounds::compare_modes(&m, y, config, &certs) {
            Ok(c) => {
                let verified = bounds::verify_interval(&m, &c.ordinary) && bounds::verify_interval(&m, &c.mixed);
                if !c.monotone || !c.intersect || !verified {
                    bad.push(format!(
                        "{}: ordinary {} mixed {} verified {verified}",
                        fmt(y),
                        interval_str(&c.ordinary),
                        interval_str(&c.mixed)
                    ));
                }
                rows.push(json!([fmt(y), interval_str(&c.ordinary), interval_str(&c.mixed)]));
            }
            Err(e) => bad.push(format!("{}: {e}", fmt(y))),
        }
    }
    verdict(bad, json!({ "samples": ys.len(), "intervals": rows }))
}

/// `lower(y₁y₂) ≤ upper(y₁) + upper(y₂) + ½` in mixed mode.
pub fn weak_triangle(pairs: &[(Word, Word)], config: &BoundsConfig) -> (Status, Value) {
    let m = full();
    let certs = qm::default_certificates(2);
    let mut bad = Vec::new();
    for (y1, y2) in pairs {
        let run = |y: &Word| bounds::scl_interval(&m, y, Mode::Mixed, config, &certs);
        match (run(y1), run(y2), run(&y1.mul(y2))) {
            (Ok(a), Ok(b), Ok(ab)) => {
                let rhs = &(&a.upper + &b.upper) + &ExtQ::Finite(frac(1, 2));
                if ExtQ::Finite(ab.lower.clone()) > rhs {
                    bad.push(format!("{} · {}", fmt(y1), fmt(y2)));
                }
            }
            _ => bad.push(format!("interval error on {} · {}", fmt(y1), fmt(y2))),
        }
    }
    verdict(bad, json!({ "pairs": pairs.len() }))
}

/// `interval(yᵏ)` meets `[k·lower(y), k·upper(y)]` for `k ∈ {1,2,3}`.
pub fn semi_homogeneity(ys: &[Word], config: &BoundsConfig) -> (Status, Value) {
    let m = a_only();
    let certs = qm::default_certificates(2);
    let mut bad = Vec::new();
    for y in ys {
        let Ok(base) = bounds::scl_interval(&m, y, Mode::Mixed, config, &certs) else {
            bad.push(format!("interval error on {}", fmt(y)));
            continue;
        };
        for k in 1..=3i64 {
            let Ok(ik) = bounds::scl_interval(&m, &y.pow(k), Mode::Mixed, config, &certs) else {
                bad.push(format!("interval error on {}^{k}", fmt(y)));
                continue;
            };
            let lo = &base.lower * q(k);
            let hi = match &base.upper {
                ExtQ::Finite(u) => ExtQ::Finite(u * q(k)),
                ExtQ::Infinite => ExtQ::Infinite,
            };
            let meets = ExtQ::Finite(ik.lower.clone()) <= hi && ExtQ::Finite(lo) <= ik.upper;
            if !meets || !bounds::verify_interval(&m, &ik) {
                bad.push(format!("{}^{k}", fmt(y)));
            }
        }
    }
    verdict(bad, json!({ "samples": ys.len() }))
}

fn line_sample(rng: &mut ChaCha8Rng, n: usize) -> MetricSample {
    let xs: Vec<i64> = (0..n).map(|_| rng.gen_range(-20..20)).collect();
    let far: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.2)).collect();
    let pts = (0..n).map(|i| format!("p{i}")).collect();
    MetricSample::from_fn(pts, |i, j| {
        if far[i] != far[j] {
            ExtQ::Infinite
        } else {
            ExtQ::Finite(q((xs[i] - xs[j]).abs()))
        }
    })
    .expect("valid metric")
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    if s.is_empty() {
        s.push(rng.gen_range(0..n));
    }
    s
}

pub fn coarse_properties(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let mut bad = Vec::new();
    for i in 0..count {
        let n = rng.gen_range(2..9);
        let s = line_sample(rng, n);
        let (a, b, c) = (random_subset(rng, n), random_subset(rng, n), random_subset(rng, n));
        let ab = s.directed_radius(&a, &b).expect("nonempty");
        let bc = s.directed_radius(&b, &c).expect("nonempty");
        if s.directed_radius(&a, &c).expect("nonempty") > &ab + &bc {
            bad.push(format!("radius triangle on sample {i}"));
        }
        let (r1, r2) = s.asymptotic_check(&a, &b).expect("nonempty");
        if s.asymptotic_check(&b, &a).expect("nonempty") != (r2, r1) {
            bad.push(format!("swap symmetry on sample {i}"));
        }
    }
    // d⁺ over a table of subadditive upper bounds: u(x) = c·|x| on a line
    // of points, the shape of scl([a,b]ⁿ) = n/2.
    for i in 0..count {
        let n = rng.gen_range(2..8);
        let xs: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..6)).collect();
        let slope = frac(rng.gen_range(0..4), 2);
        let d: Vec<Vec<ExtQ>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| coarse::d_plus(&ExtQ::Finite(&slope * q((xs[a] - xs[b]).abs())), a == b))
                    .collect()
            })
            .collect();
        if coarse::triangle_violation(&d).is_some() || !coarse::nonnegative(&d) {
            bad.push(format!("d⁺ table {i}"));
        }
    }
    verdict(bad, json!({ "samples": count }))
}

/// `scl(y₁ + y₂ − y₁y₂) ≤ ½` through certified fillings, and the coarse
/// homomorphism defect of `y ↦ y` over the sample.
pub fn embedding_defect(rng: &mut ChaCha8Rng, count: usize, l: usize) -> (Status, Value) {
    let m = a_only();
    let mut bad = Vec::new();
    let mut samples = Vec::new();
    for _ in 0..count {
        let y1 = sample::word_in_n(rng, &m, 4);
        let y2 = sample::word_in_n(rng, &m, 4);
        match coarse::embedding_defect(&m, &y1, &y2, l) {
            Ok((d, cert)) => {
                if d > frac(1, 2) || !lp::verify_filling_certificate(&m, &cert) {
                    bad.push(format!("({}, {}) → {}", fmt(&y1), fmt(&y2), fmt_q(&d)));
                }
                if !cert.dual.is_empty() && !lp::verify_dual(&m, &cert) {
                    bad.push(format!("dual of ({}, {})", fmt(&y1), fmt(&y2)));
                }
                samples.push(coarse::HomSample {
                    g1: fmt(&y1),
                    g2: fmt(&y2),
                    defect: ExtQ::Finite(d),
                });
            }
            Err(e) => bad.push(format!("({}, {}): {e}", fmt(&y1), fmt(&y2))),
        }
    }
    let defect = coarse::coarse_hom_defect(&samples);
    if defect > ExtQ::Finite(frac(1, 2)) {
        bad.push(format!("sample defect {defect}"));
    }
    verdict(bad, json!({ "samples": count, "max_defect": defect }))
}

/// Every property at the configured counts. Checks run in parallel; the
/// report is ordered by check name and depends only on the arguments.
pub fn run_property_suite(seed: u64, counts: &Counts, budgets: &SuiteBudgets, exec: Exec) -> SuiteReport {
    let c = *counts;
    let b = *budgets;
    let config = b.bounds_config(exec);
    let checks: Vec<(&'static str, CheckFn)> = vec![
        ("word/reduce_idempotent", Box::new(move |r| word_reduce_idempotent(r, c.long_words))),
        ("word/inverse_cancels", Box::new(move |r| word_inverse_cancels(r, c.long_words))),
        ("word/structure", Box::new(move |r| word_structure(r, c.words))),
        ("marking/subgroup", Box::new(move |r| marking_subgroup(r, c.words))),
        ("marking/product_oracle", Box::new(move |_| marking_product_oracle(&b, exec))),
        ("marking/chain_sweep", Box::new(move |_| chain_membership_sweep(&b, exec))),
        ("chains/boundary_formula", Box::new(move |r| boundary_formula(r, c.pairs))),
        ("chains/linearity", Box::new(move |r| chain_linearity(r, c.pairs))),
        ("chains/h_annihilation", Box::new(move |r| h_annihilation(r, c.normal_forms))),
        ("chains/mixed_boundaries", Box::new(move |r| mixed_boundaries_in_cz(r, c.pairs))),
        ("chains/scaling_up", Box::new(move |r| scaling_up(r, c.chains))),
        ("qm/exactness", Box::new(move |r| qm_exactness(r, c.qm_samples))),
        ("qm/default_window", Box::new(|_| qm_default_window())),
        ("qm/mutation", Box::new(move |_| qm_mutation(exec))),
        ("search/certificates", Box::new(move |r| search_properties(r, c.searches, &b.search, exec))),
        ("lp/duality", Box::new(move |r| lp_properties(r, c.lp_instances, b.lp_budget))),
        (
            "bounds/modes",
            Box::new(move |r| mode_comparison(&gamma3_sample(r, c.intervals, 12), &config)),
        ),
        (
            "bounds/weak_triangle",
            Box::new(move |r| {
                let ys = gamma3_sample(r, 2 * c.triangle_pairs, 10);
                let pairs: Vec<(Word, Word)> = ys.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
                weak_triangle(&pairs, &config)
            }),
        ),
        (
            "bounds/semi_homogeneity",
            Box::new(move |r| {
                let m = a_only();
                let ys: Vec<Word> = (0..c.intervals.min(4)).map(|_| commutator_product(r, &m, 1, 2)).collect();
                semi_homogeneity(&ys, &config)
            }),
        ),
        ("coarse/metric", Box::new(move |r| coarse_properties(r, c.metric_samples))),
        ("coarse/embedding", Box::new(move |r| embedding_defect(r, c.embeddings, b.lp_budget))),
    ];
    let results = run_checks(seed, exec, checks);
    let config = json!({ "counts": counts, "budgets": budgets });
    SuiteReport::new("properties", seed, config, results)
}
