//! Fixed verification suites: the iterated-commutator filling family, the
//! paper-level checks and the randomized property suite.

pub mod oracle;
pub mod properties;
pub mod sample;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{self, BoundsConfig};
use crate::chains::{Chain1, Chain2};
use crate::io::SCHEMA;
use crate::marking::{Marking, Mode};
use crate::parallel::{self, Exec};
use crate::qm;
use crate::rational::{fmt_q, frac, q, ExtQ, Q};
use crate::word::Word;

pub use properties::{run_property_suite, Counts, SuiteBudgets};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl From<bool> for Status {
    fn from(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: impl Into<Status>, detail: Value) -> Self {
        Check {
            name: name.into(),
            status: status.into(),
            detail,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub suite: String,
    pub seed: u64,
    pub config: Value,
    pub summary: Summary,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    /// Sorts checks by name and tallies statuses.
    pub fn new(suite: &str, seed: u64, config: Value, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skip => summary.skip += 1,
            }
        }
        SuiteReport {
            schema: SCHEMA,
            suite: suite.to_string(),
            seed,
            config,
            summary,
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

type CheckFn<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> (Status, Value) + Send + Sync + 'a>;

/// Runs named checks, each on its own seeded stream; a panicking check is
/// recorded as a failure and the rest still run.
pub(crate) fn run_checks(seed: u64, exec: Exec, checks: Vec<(&'static str, CheckFn<'_>)>) -> Vec<Check> {
    parallel::map(exec, &checks, |(name, f)| {
        let mut rng = sample::rng_for(seed, name);
        match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(&mut rng))) {
            Ok((status, detail)) => Check::new(*name, status, detail),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Check::new(*name, Status::Fail, json!({ "panic": msg }))
            }
        }
    })
}

/// One step of the family `cₙ = [a, b^{2ⁿ}]/2ⁿ`.
#[derive(Clone, Debug)]
pub struct IotaStep {
    pub n: u32,
    /// `[a, b^{2ⁿ⁺¹}] = u·v′` after free reduction.
    pub identity_holds: bool,
    pub filling: Chain2,
    /// `w − 2u`, which is `2ⁿ⁺¹(cₙ₊₁ − cₙ)`.
    pub target: Chain1,
    /// `∂σ − target`; zero when the filling is exact.
    pub residual: Chain1,
    pub mixed_support: bool,
    pub norm: Q,
    /// `‖σ‖₁ / 2ⁿ⁺¹`.
    pub bound: Q,
}

/// Builds and checks the three-cell filling for step `n`, with
/// `u = [a, b^{2ⁿ}]`, `g = b^{2ⁿ}`, `v′ = g u g⁻¹`, `w = u v′` and
/// `σ = −(u, v′) + (v′, g) − (g, u)`.
pub fn iota_step(n: u32) -> IotaStep {
    let m = Marking::full_abelianization(2).expect("rank 2");
    let a = Word::generator(1, false);
    let g = Word::generator(2, false).pow(1i64 << n);
    let u = Word::commutator(&a, &g);
    let v = u.conjugate_by(&g);
    let w = u.mul(&v);
    let identity_holds = Word::commutator(&a, &g.pow(2)) == w;
    let filling = Chain2::from_terms([
        ((u.clone(), v.clone()), q(-1)),
        ((v.clone(), g.clone()), q(1)),
        ((g.clone(), u.clone()), q(-1)),
    ]);
    let target = Chain1::from_terms([(w, q(1)), (u, q(-2))]);
    let residual = &filling.boundary() - &target;
    let norm = filling.l1_norm();
    let bound = &norm / q(1i64 << (n + 1));
    IotaStep {
        n,
        identity_holds,
        mixed_support: filling.validate_mixed_support(&m),
        residual,
        target,
        filling,
        norm,
        bound,
    }
}

/// Steps `0..=n_max`, plus a check that the bounds are exactly `3/2ⁿ⁺¹`.
pub fn run_iotakernel(n_max: u32) -> SuiteReport {
    let steps: Vec<IotaStep> = (0..=n_max).map(iota_step).collect();
    let mut checks = Vec::new();
    for s in &steps {
        let tag = format!("iotakernel/n={:02}", s.n);
        checks.push(Check::new(
            format!("{tag}/identity"),
            s.identity_holds,
            json!({ "identity": format!("[a,b^{}] = [a,b^{}]·(b^{} [a,b^{}] b^-{})", 1u64 << (s.n + 1), 1u64 << s.n, 1u64 << s.n, 1u64 << s.n, 1u64 << s.n) }),
        ));
        checks.push(Check::new(
            format!("{tag}/filling"),
            s.residual.is_zero() && s.mixed_support && s.norm == q(3),
            json!({
                "cells": s.filling.len(),
                "l1_norm": fmt_q(&s.norm),
                "residual_terms": s.residual.len(),
                "mixed_support": s.mixed_support,
            }),
        ));
        checks.push(Check::new(
            format!("{tag}/bound"),
            s.bound == Q::new(3.into(), (1u64 << (s.n + 1)).into()),
            json!({ "bound": fmt_q(&s.bound) }),
        ));
    }
    let geometric = steps.windows(2).all(|p| &p[1].bound * q(2) == p[0].bound);
    checks.push(Check::new(
        "iotakernel/geometric",
        geometric,
        json!({ "bounds": steps.iter().map(|s| fmt_q(&s.bound)).collect::<Vec<_>>() }),
    ));
    SuiteReport::new("iotakernel", 0, json!({ "n_max": n_max }), checks)
}

/// Interval for `scl([a,b])` in `F₂` (ordinary mode) under `config`:
/// it must contain `½`, re-verify, and have width at most `max_width`.
pub fn scl_commutator(config: &BoundsConfig, max_width: &Q) -> (Status, Value) {
    let m = Marking::ordinary(2).expect("rank 2");
    let y = Word::commutator(&Word::generator(1, false), &Word::generator(2, false));
    let certs = qm::default_certificates(2);
    match bounds::scl_interval(&m, &y, Mode::Ordinary, config, &certs) {
        Ok(i) => {
            let verified = bounds::verify_interval(&m, &i);
            let contains = i.contains(&frac(1, 2));
            let narrow = i.width() <= ExtQ::Finite(max_width.clone());
            (
                (verified && contains && narrow).into(),
                json!({
                    "lower": fmt_q(&i.lower),
                    "upper": i.upper,
                    "width": i.width(),
                    "max_width": fmt_q(max_width),
                    "contains_half": contains,
                    "verified": verified,
                }),
            )
        }
        Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
    }
}

/// The fixed reproduction suite: the filling family for `n ≤ 8`, the
/// boundary formula, `scl([a,b])` under default budgets, both membership
/// oracles, the default quasimorphism set and its mutation hook, LP duality
/// and the embedding defect.
pub fn run_paper_checks(seed: u64, exec: Exec) -> SuiteReport {
    let budgets = SuiteBudgets::default();
    let config = BoundsConfig {
        exec,
        ..BoundsConfig::default()
    };
    let checks: Vec<(&'static str, CheckFn)> = vec![
        ("chains/boundary_formula", Box::new(|r| boundary_formula(r, 100))),
        ("bounds/scl_commutator", Box::new(move |_| scl_commutator(&config, &frac(7, 20)))),
        ("marking/product_oracle", Box::new(move |_| properties::marking_product_oracle(&budgets, exec))),
        ("marking/chain_sweep", Box::new(move |_| properties::chain_membership_sweep(&budgets, exec))),
        ("qm/default_window", Box::new(|_| properties::qm_default_window())),
        ("qm/mutation", Box::new(move |_| properties::qm_mutation(exec))),
        ("lp/duality", Box::new(|r| properties::lp_properties(r, 12, 4))),
        ("coarse/embedding", Box::new(|r| properties::embedding_defect(r, 20, 4))),
    ];
    let mut out = run_checks(seed, exec, checks);
    out.extend(run_iotakernel(8).checks);
    SuiteReport::new(
        "paper-checks",
        seed,
        json!({ "bounds": config, "budgets": budgets, "iotakernel_n_max": 8 }),
        out,
    )
}

/// `∂(g₁,g₂) = g₂ − g₁g₂ + g₁` recomputed termwise on random pairs.
pub fn boundary_formula(rng: &mut ChaCha8Rng, count: usize) -> (Status, Value) {
    let mut bad = Vec::new();
    for _ in 0..count {
        let g1 = sample::word(rng, 2, 8);
        let g2 = sample::word(rng, 2, 8);
        let got = Chain2::cell(g1.clone(), g2.clone()).boundary();
        let mut want = Chain1::new();
        want.add_term(g2.clone(), q(1));
        want.add_term(g1.mul(&g2), q(-1));
        want.add_term(g1.clone(), q(1));
        if got != want {
            bad.push(format!("({g1}, {g2})"));
        }
    }
    bad.sort_by_key(|s| s.len());
    (bad.is_empty().into(), json!({ "pairs": count, "first_failure": bad.first() }))
}
