use scl_core::bounds::{self, BoundsConfig};
use scl_core::chains::Chain1;
use scl_core::harness;
use scl_core::lp::{self, FillingOutcome};
use scl_core::marking::{Marking, Mode};
use scl_core::parallel::Exec;
use scl_core::qm;
use scl_core::rational::{frac, q, ExtQ};
use scl_core::search::{self, Budget};
use scl_core::word::{FreeGroup, Word};

fn a_only() -> Marking {
    Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap()
}

fn quick() -> BoundsConfig {
    BoundsConfig {
        k_max: 2,
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
fn mixed_commutator_search_and_verify() {
    let m = a_only();
    let y = m.parse_word("[a,b]").unwrap();
    let cert = search::cl_upper_search(&m, &y, Mode::Mixed, &Budget::default(), Exec::Parallel).unwrap();
    assert_eq!(cert.terms(), 1);
    assert!(search::verify_cl_certificate(&m, &cert));
    assert_eq!(cert.product(), y);
}

#[test]
fn word_outside_subgroup_is_rejected() {
    let m = a_only();
    let y = m.parse_word("[a,b]a").unwrap();
    assert!(search::cl_upper_search(&m, &y, Mode::Mixed, &Budget::default(), Exec::Parallel).is_err());
}

#[test]
fn intervals_sound_in_both_modes() {
    let m = Marking::full_abelianization(2).unwrap();
    let certs = qm::default_certificates(2);
    let y = m.parse_word("[a,[a,b]]").unwrap();
    let c = bounds::compare_modes(&m, &y, &quick(), &certs).unwrap();
    assert!(c.all_hold());
    assert!(bounds::verify_interval(&m, &c.ordinary));
    assert!(bounds::verify_interval(&m, &c.mixed));
    assert!(c.mixed.upper.is_finite());
}

#[test]
fn filling_certificate_checks_both_ways() {
    let m = a_only();
    let w = |s: &str| m.parse_word(s).unwrap();
    let c = Chain1::from_terms([(w("b"), q(1)), (w("aBA"), q(1))]);
    let FillingOutcome::Solved(cert) = lp::truncated_filling_norm(&m, &c, 4, false).unwrap() else {
        panic!("expected a filling");
    };
    assert!(lp::verify_filling_certificate(&m, &cert));
    assert!(lp::verify_dual(&m, &cert));
    assert_eq!(cert.value, cert.dual_value);
    assert_eq!(cert.value, q(2));
}

#[test]
fn chain_interval_of_b_plus_conjugate_inverse() {
    let m = a_only();
    let w = |s: &str| m.parse_word(s).unwrap();
    let certs = qm::default_certificates(2);
    let c = Chain1::from_terms([(w("b"), q(1)), (w("abA"), q(-1))]);
    let i = bounds::scl_interval_chain(&m, &c, Mode::Mixed, &quick(), &certs).unwrap();
    assert!(bounds::verify_interval(&m, &i));
    assert!(i.upper <= ExtQ::Finite(frac(1, 2)));
}

#[test]
fn filling_family_is_geometric() {
    let mut prev = None;
    for n in 0..=6 {
        let s = harness::iota_step(n);
        assert!(s.identity_holds && s.mixed_support && s.residual.is_zero());
        if let Some(p) = prev {
            assert_eq!(&p * frac(1, 2), s.bound);
        }
        prev = Some(s.bound);
    }
}

#[test]
fn identity_interval_is_zero() {
    let m = a_only();
    let i = bounds::scl_interval(&m, &Word::identity(), Mode::Mixed, &quick(), &qm::default_certificates(2)).unwrap();
    assert_eq!(i.lower, q(0));
    assert_eq!(i.upper, ExtQ::zero());
}
