//! Coarse geometry on finite samples: the metric `d⁺`, directed
//! neighbourhood radii, asymptotic pairs of subsets and the defect of a
//! coarse homomorphism. Every statement here is about the sample only.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::chains::{Chain1, Chain2};
use crate::lp::{self, FillingCertificate, LpError};
use crate::marking::Marking;
use crate::rational::{frac, q, ExtQ, Q};
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoarseError {
    #[error("distance matrix must be {n}×{n}")]
    Shape { n: usize },
    #[error("distance from {0} to itself is not zero")]
    Diagonal(String),
    #[error("distance between {0} and {1} is not symmetric")]
    Asymmetric(String, String),
    #[error("negative distance between {0} and {1}")]
    Negative(String, String),
    #[error("triangle inequality fails for {0}, {1}, {2}")]
    Triangle(String, String, String),
    #[error("subsets must be nonempty")]
    EmptySet,
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// `scl(g₁⁻¹g₂) + ½` for distinct elements, `0` on the diagonal.
pub fn d_plus(scl: &ExtQ, same_element: bool) -> ExtQ {
    if same_element {
        ExtQ::zero()
    } else {
        scl + &ExtQ::Finite(frac(1, 2))
    }
}

/// A finite metric space with possibly infinite distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSample {
    points: Vec<String>,
    dist: Vec<Vec<ExtQ>>,
}

impl MetricSample {
    pub fn new(points: Vec<String>, dist: Vec<Vec<ExtQ>>) -> Result<Self, CoarseError> {
        let n = points.len();
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(CoarseError::Shape { n });
        }
        let p = |i: usize| points[i].clone();
        for i in 0..n {
            if dist[i][i] != ExtQ::zero() {
                return Err(CoarseError::Diagonal(p(i)));
            }
            for j in 0..n {
                if dist[i][j].is_negative() {
                    return Err(CoarseError::Negative(p(i), p(j)));
                }
                if dist[i][j] != dist[j][i] {
                    return Err(CoarseError::Asymmetric(p(i), p(j)));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(CoarseError::Triangle(p(i), p(j), p(k)));
                    }
                }
            }
        }
        Ok(Self { points, dist })
    }

    /// Builds the table `d(i,j) = f(i,j)` for `i ≠ j` and checks it.
    pub fn from_fn(points: Vec<String>, f: impl Fn(usize, usize) -> ExtQ) -> Result<Self, CoarseError> {
        let n = points.len();
        let dist = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ExtQ::zero() } else { f(i, j) }).collect())
            .collect();
        Self::new(points, dist)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn dist(&self, i: usize, j: usize) -> &ExtQ {
        &self.dist[i][j]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, CoarseError> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| CoarseError::UnknownPoint(label.to_string()))
    }

    pub fn indices(&self, labels: &[String]) -> Result<Vec<usize>, CoarseError> {
        labels.iter().map(|l| self.index_of(l)).collect()
    }

    /// Least `R` with `A` inside the closed `R`-neighbourhood of `B`.
    pub fn directed_radius(&self, a: &[usize], b: &[usize]) -> Result<ExtQ, CoarseError> {
        if a.is_empty() || b.is_empty() {
            return Err(CoarseError::EmptySet);
        }
        Ok(a.iter()
            .map(|&i| b.iter().map(|&j| self.dist[i][j].clone()).min().expect("nonempty"))
            .max()
            .expect("nonempty"))
    }

    /// Both directed radii; a finite pair means `A` and `B` are asymptotic
    /// within the sample.
    pub fn asymptotic_check(&self, a: &[usize], b: &[usize]) -> Result<(ExtQ, ExtQ), CoarseError> {
        Ok((self.directed_radius(a, b)?, self.directed_radius(b, a)?))
    }
}

/// One observation `d(f(g₁g₂), f(g₁)·f(g₂))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSample {
    pub g1: String,
    pub g2: String,
    pub defect: ExtQ,
}

/// Largest observed defect (`0` for no samples).
pub fn coarse_hom_defect(samples: &[HomSample]) -> ExtQ {
    samples
        .iter()
        .map(|s| s.defect.clone())
        .max()
        .unwrap_or_else(ExtQ::zero)
}

/// Certified upper bound for `scl(y₁ + y₂ − y₁y₂)`, the defect of the
/// inclusion of elements into chains: the better of the single cell
/// `(y₁, y₂)` and the truncated LP, when the normalized chain fits the
/// length budget.
pub fn embedding_defect(m: &Marking, y1: &Word, y2: &Word, budget: usize) -> Result<(Q, FillingCertificate), CoarseError> {
    let c = Chain1::from_terms([(y1.clone(), q(1)), (y2.clone(), q(1)), (y1.mul(y2), q(-1))]);
    let filling = Chain2::cell(y1.clone(), y2.clone());
    let cert = FillingCertificate {
        value: filling.l1_norm(),
        filling,
        target: c.clone(),
        h_adjustment: Vec::new(),
        dual: Vec::new(),
        dual_value: Q::zero(),
        length_budget: y1.len() + y2.len(),
        allow_h: false,
    };
    if !cert.filling.validate_mixed_support(m) {
        return Err(LpError::NotInN(m.format(y2)).into());
    }
    let single = (&cert.value / q(2), cert);
    if c.h_normal_form_in(m).max_word_len() > budget {
        return Ok(single);
    }
    Ok(match lp::scl_upper_from_filling(m, &c, budget)? {
        Some(found) if found.0 < single.0 => found,
        _ => single,
    })
}

/// Exhaustive check of the metric axioms on a table; `None` when they hold,
/// otherwise the first violating triple.
pub fn triangle_violation(d: &[Vec<ExtQ>]) -> Option<(usize, usize, usize)> {
    let n = d.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d[i][k] > &d[i][j] + &d[j][k] {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// `true` when every finite entry is nonnegative.
pub fn nonnegative(d: &[Vec<ExtQ>]) -> bool {
    d.iter()
        .flatten()
        .all(|x| x.finite().is_none_or(|v| !v.is_negative() || v.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::FreeGroup;
    use proptest::prelude::*;

    fn line(xs: &[i64]) -> MetricSample {
        let pts = (0..xs.len()).map(|i| format!("p{i}")).collect();
        MetricSample::from_fn(pts, |i, j| ExtQ::Finite(q((xs[i] - xs[j]).abs()))).unwrap()
    }

    #[test]
    fn d_plus_examples() {
        assert_eq!(d_plus(&ExtQ::Finite(q(7)), true), ExtQ::zero());
        assert_eq!(d_plus(&ExtQ::zero(), false), ExtQ::Finite(frac(1, 2)));
        assert_eq!(d_plus(&ExtQ::Infinite, false), ExtQ::Infinite);
    }

    #[test]
    fn radius_examples() {
        let s = MetricSample::from_fn(vec!["a".into(), "b".into()], |_, _| ExtQ::Finite(frac(1, 2))).unwrap();
        assert_eq!(s.directed_radius(&[0, 1], &[0, 1]).unwrap(), ExtQ::zero());
        assert_eq!(s.directed_radius(&[0], &[1]).unwrap(), ExtQ::Finite(frac(1, 2)));
        let far = MetricSample::from_fn(vec!["a".into(), "z".into()], |_, _| ExtQ::Infinite).unwrap();
        assert_eq!(far.directed_radius(&[0], &[1]).unwrap(), ExtQ::Infinite);
        assert_eq!(s.directed_radius(&[], &[1]), Err(CoarseError::EmptySet));
    }

    #[test]
    fn asymptotic_examples() {
        let s = line(&[0, 1, 2, 10, 11]);
        assert_eq!(s.asymptotic_check(&[0, 1], &[0, 1]).unwrap(), (ExtQ::zero(), ExtQ::zero()));
        assert_eq!(
            s.asymptotic_check(&[0, 1], &[0, 1, 2]).unwrap(),
            (ExtQ::zero(), ExtQ::Finite(q(1)))
        );
        let (r1, r2) = s.asymptotic_check(&[0, 1, 2], &[3, 4]).unwrap();
        assert!(r1 >= ExtQ::Finite(q(9)) && r2 >= ExtQ::Finite(q(8)));
    }

    #[test]
    fn construction_rejects_bad_tables() {
        let pts = vec!["x".to_string(), "y".into(), "z".into()];
        let bad = MetricSample::from_fn(pts.clone(), |i, j| {
            if (i, j) == (0, 2) || (i, j) == (2, 0) {
                ExtQ::Finite(q(5))
            } else {
                ExtQ::Finite(q(1))
            }
        });
        assert!(matches!(bad, Err(CoarseError::Triangle(..))));
        let asym = MetricSample::from_fn(pts, |i, j| ExtQ::Finite(q((i * 3 + j) as i64)));
        assert!(matches!(asym, Err(CoarseError::Asymmetric(..))));
    }

    #[test]
    fn hom_defect_examples() {
        assert_eq!(coarse_hom_defect(&[]), ExtQ::zero());
        let s = |d: i64| HomSample {
            g1: "g".into(),
            g2: "h".into(),
            defect: ExtQ::Finite(q(d)),
        };
        assert_eq!(coarse_hom_defect(&[s(0), s(0)]), ExtQ::zero());
        assert_eq!(coarse_hom_defect(&[s(2)]), ExtQ::Finite(q(2)));
    }

    #[test]
    fn embedding_defect_at_most_half() {
        let f = FreeGroup::new(2).unwrap();
        let m = Marking::new(f.clone(), vec![vec![1, 0]]).unwrap();
        for (a, b) in [("b", "aBA"), ("[a,b]", "bb"), ("[a,b]^2", "[b,a]a b A")] {
            let (y1, y2) = (f.parse(a).unwrap(), f.parse(b).unwrap());
            let (d, cert) = embedding_defect(&m, &y1, &y2, 4).unwrap();
            assert!(d <= frac(1, 2), "{a} {b}: {d}");
            assert!(lp::verify_filling_certificate(&m, &cert));
        }
    }

    proptest! {
        #[test]
        fn directed_radius_triangle(xs in prop::collection::vec(-20i64..20, 3..9), cut in 0usize..4) {
            let s = line(&xs);
            let n = xs.len();
            let a: Vec<usize> = (0..n).filter(|i| i % 3 == 0).collect();
            let b: Vec<usize> = (0..n).filter(|i| i % 3 == 1 || *i == cut.min(n - 1)).collect();
            let c: Vec<usize> = (0..n).filter(|i| i % 2 == 1 || *i == 0).collect();
            let ab = s.directed_radius(&a, &b).unwrap();
            let bc = s.directed_radius(&b, &c).unwrap();
            prop_assert!(s.directed_radius(&a, &c).unwrap() <= &ab + &bc);
            let (r1, r2) = s.asymptotic_check(&a, &c).unwrap();
            prop_assert_eq!(s.asymptotic_check(&c, &a).unwrap(), (r2, r1));
        }
    }
}
