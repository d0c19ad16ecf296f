//! The pair `(G, N)`: a free group `G` with `N = ker(p)` for a homomorphism
//! `p: G → ℤᵏ`, and exact membership oracles for `N`, `[G,G]` and `[G,N]`.
//!
//! Membership in `[G,N]` is decided by the [`MixedClass`] of a word: its
//! exponent-sum vector together with the signed areas swept by the loop
//! `p(prefix)` in each coordinate plane of `ℤᵏ`. Both parts are additive on
//! `N`, invariant under conjugation by `G`, and vanish exactly on `[G,N]`.

use thiserror::Error;

use crate::chains::Chain1;
use crate::word::{FreeGroup, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarkingError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("quotient matrix row {row} has {found} entries, expected rank {rank}")]
    MatrixShape { row: usize, found: usize, rank: usize },
    #[error("quotients with torsion are not supported (only Γ = ℤᵏ)")]
    Torsion,
    #[error("word {0} does not lie in N")]
    NotInN(String),
    #[error("signed area of {0} is not an integer")]
    NonIntegralArea(String),
    #[error("coefficient {0} of an integer chain is not an integer")]
    NonIntegralCoefficient(String),
}

/// Which commutator set a computation runs over: `S_{G,G}` or `S_{G,N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ordinary,
    Mixed,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ordinary" => Ok(Mode::Ordinary),
            "mixed" => Ok(Mode::Mixed),
            _ => Err(format!("unknown mode {s:?} (expected ordinary|mixed)")),
        }
    }
}

/// Obstruction class of `w ∈ N` in `N/[G,N]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedClass {
    pub abelian_part: Vec<i64>,
    /// Twice the signed area in each plane `(i, j)`, `i < j`.
    pub twice_area: Vec<i64>,
}

impl MixedClass {
    pub fn is_zero(&self) -> bool {
        self.abelian_part.iter().all(|&x| x == 0) && self.twice_area.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    group: FreeGroup,
    /// Row `i` holds the `i`-th coordinate of `p` on each generator.
    matrix: Vec<Vec<i64>>,
}

impl Marking {
    pub fn new(group: FreeGroup, matrix: Vec<Vec<i64>>) -> Result<Self, MarkingError> {
        let rank = group.rank();
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != rank {
                return Err(MarkingError::MatrixShape {
                    row,
                    found: r.len(),
                    rank,
                });
            }
        }
        Ok(Marking { group, matrix })
    }

    /// `k = 0`: `N = G`, the ordinary case.
    pub fn ordinary(rank: usize) -> Result<Self, MarkingError> {
        Marking::new(FreeGroup::new(rank)?, Vec::new())
    }

    /// `p` = abelianization, so `N = [G,G]`.
    pub fn full_abelianization(rank: usize) -> Result<Self, MarkingError> {
        let matrix = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        Marking::new(FreeGroup::new(rank)?, matrix)
    }

    /// Same group with `N = G`; used for the ordinary side of comparisons.
    pub fn ordinary_companion(&self) -> Marking {
        Marking {
            group: self.group.clone(),
            matrix: Vec::new(),
        }
    }

    /// The marking that governs `mode`.
    pub fn for_mode(&self, mode: Mode) -> Marking {
        match mode {
            Mode::Ordinary => self.ordinary_companion(),
            Mode::Mixed => self.clone(),
        }
    }

    pub fn group(&self) -> &FreeGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn quotient_rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn quotient_matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn is_ordinary(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, MarkingError> {
        Ok(self.group.parse(s)?)
    }

    pub fn format(&self, w: &Word) -> String {
        self.group.format(w)
    }

    pub fn abelianize(&self, w: &Word) -> Result<Vec<i64>, MarkingError> {
        self.group.check(w)?;
        Ok(w.exponent_sums(self.rank()))
    }

    /// `p(w) ∈ ℤᵏ`.
    pub fn image(&self, w: &Word) -> Result<Vec<i64>, MarkingError> {
        let ab = self.abelianize(w)?;
        Ok(self
            .matrix
            .iter()
            .map(|row| row.iter().zip(&ab).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn in_n(&self, w: &Word) -> Result<bool, MarkingError> {
        Ok(self.image(w)?.iter().all(|&x| x == 0))
    }

    /// Rank-unchecked membership test for hot loops over known-good words.
    pub(crate) fn in_n_fast(&self, w: &Word) -> bool {
        if self.matrix.is_empty() {
            return true;
        }
        let mut v = vec![0i64; self.matrix.len()];
        for &l in w.letters() {
            let g = l.unsigned_abs() as usize - 1;
            let s = if l > 0 { 1 } else { -1 };
            for (vi, row) in v.iter_mut().zip(&self.matrix) {
                *vi += s * row[g];
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Doubled shoelace sums of the path traced by `p` on prefixes of `w`.
    fn twice_area_unchecked(&self, w: &Word) -> Vec<i64> {
        let k = self.matrix.len();
        let mut v = vec![0i64; k];
        let mut acc = vec![0i64; k * k.saturating_sub(1) / 2];
        for &l in w.letters() {
            let g = l.unsigned_abs() as usize - 1;
            let s = if l > 0 { 1 } else { -1 };
            let step: Vec<i64> = self.matrix.iter().map(|row| s * row[g]).collect();
            let mut idx = 0;
            for i in 0..k {
                for j in i + 1..k {
                    acc[idx] += v[i] * step[j] - v[j] * step[i];
                    idx += 1;
                }
            }
            for (vi, d) in v.iter_mut().zip(&step) {
                *vi += d;
            }
        }
        acc
    }

    /// Signed area of the closed loop `p(w)` in each coordinate plane `(i,j)`,
    /// `i < j`, in lexicographic pair order. Requires `w ∈ N`.
    pub fn area_class(&self, w: &Word) -> Result<Vec<i64>, MarkingError> {
        if !self.in_n(w)? {
            return Err(MarkingError::NotInN(self.format(w)));
        }
        self.twice_area_unchecked(w)
            .into_iter()
            .map(|a| {
                if a % 2 == 0 {
                    Ok(a / 2)
                } else {
                    Err(MarkingError::NonIntegralArea(self.format(w)))
                }
            })
            .collect()
    }

    /// Class of `w ∈ N` in `N/[G,N]`.
    pub fn mixed_class(&self, w: &Word) -> Result<MixedClass, MarkingError> {
        if !self.in_n(w)? {
            return Err(MarkingError::NotInN(self.format(w)));
        }
        Ok(MixedClass {
            abelian_part: w.exponent_sums(self.rank()),
            twice_area: self.twice_area_unchecked(w),
        })
    }

    /// Decides `w ∈ [G,N]`.
    pub fn in_mixed_commutator(&self, w: &Word) -> Result<bool, MarkingError> {
        if self.abelianize(w)?.iter().any(|&x| x != 0) {
            return Ok(false);
        }
        Ok(self.twice_area_unchecked(w).iter().all(|&x| x == 0))
    }

    /// Decides whether an integer chain supported in `N` lies in
    /// `C_ℤ(G,N)`: the coefficient-weighted sum of classes must vanish.
    pub fn chain_in_cz(&self, c: &Chain1) -> Result<bool, MarkingError> {
        let mut abelian = vec![0i64; self.rank()];
        let mut area = vec![0i64; self.quotient_rank() * self.quotient_rank().saturating_sub(1) / 2];
        for (w, coeff) in c.iter() {
            if !coeff.is_integer() {
                return Err(MarkingError::NonIntegralCoefficient(crate::rational::fmt_q(coeff)));
            }
            let n: i64 = coeff
                .to_integer()
                .try_into()
                .map_err(|_| MarkingError::NonIntegralCoefficient(crate::rational::fmt_q(coeff)))?;
            let class = self.mixed_class(w)?;
            for (a, b) in abelian.iter_mut().zip(&class.abelian_part) {
                *a += n * b;
            }
            for (a, b) in area.iter_mut().zip(&class.twice_area) {
                *a += n * b;
            }
        }
        Ok(abelian.iter().chain(&area).all(|&x| x == 0))
    }

    /// `c ∈ C_ℚ(G,N)`: some positive multiple lies in `C_ℤ(G,N)`.
    pub fn chain_in_cq(&self, c: &Chain1) -> Result<bool, MarkingError> {
        let (_, integral) = c.clear_denominators();
        self.chain_in_cz(&integral)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::word::ball;

    fn a_only() -> Marking {
        Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap()
    }

    fn full() -> Marking {
        Marking::full_abelianization(2).unwrap()
    }

    fn w(m: &Marking, s: &str) -> Word {
        m.parse_word(s).unwrap()
    }

    #[test]
    fn abelianize_examples() {
        let m = full();
        assert_eq!(m.abelianize(&w(&m, "abAB")).unwrap(), vec![0, 0]);
        assert_eq!(m.abelianize(&w(&m, "aaB")).unwrap(), vec![2, -1]);
        assert_eq!(m.abelianize(&w(&m, "(ab)^3")).unwrap(), vec![3, 3]);
        let f3 = FreeGroup::new(3).unwrap();
        assert!(m.abelianize(&f3.parse("c").unwrap()).is_err());
    }

    #[test]
    fn in_n_examples() {
        let m = a_only();
        assert!(m.in_n(&w(&m, "b")).unwrap());
        assert!(!m.in_n(&w(&m, "a")).unwrap());
        assert!(full().in_n(&w(&m, "abAB")).unwrap());
        assert!(Marking::ordinary(2).unwrap().in_n(&w(&m, "a")).unwrap());
    }

    /// Shoelace on the explicit vertex list of the lattice loop.
    fn shoelace_oracle(points: &[(i64, i64)]) -> i64 {
        let n = points.len();
        let twice: i64 = (0..n)
            .map(|i| {
                let (x0, y0) = points[i];
                let (x1, y1) = points[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum();
        twice / 2
    }

    fn loop_points(word: &Word) -> Vec<(i64, i64)> {
        let mut p = (0, 0);
        let mut pts = vec![p];
        for &l in word.letters() {
            let d = if l > 0 { 1 } else { -1 };
            if l.abs() == 1 {
                p.0 += d;
            } else {
                p.1 += d;
            }
            pts.push(p);
        }
        pts.pop();
        pts
    }

    #[test]
    fn area_examples() {
        let m = full();
        let c = w(&m, "abAB");
        assert_eq!(shoelace_oracle(&loop_points(&c)), 1);
        assert_eq!(m.area_class(&c).unwrap(), vec![1]);
        let c2 = w(&m, "(abAB)^2");
        assert_eq!(shoelace_oracle(&loop_points(&c2)), 2);
        assert_eq!(m.area_class(&c2).unwrap(), vec![2]);
        assert_eq!(m.area_class(&w(&m, "[a,b][b,a]")).unwrap(), vec![0]);
        assert!(matches!(m.area_class(&w(&m, "a")), Err(MarkingError::NotInN(_))));
    }

    #[test]
    fn area_matches_shoelace_on_ball() {
        let m = full();
        for x in ball(2, 8) {
            if m.in_n(&x).unwrap() {
                assert_eq!(m.area_class(&x).unwrap(), vec![shoelace_oracle(&loop_points(&x))], "{x}");
            }
        }
    }

    #[test]
    fn half_integral_area_is_rejected() {
        // p(a) = (1,0), p(b) = (0,1), p(c) = (1,1): the loop a b C is a triangle
        let m = Marking::new(FreeGroup::new(3).unwrap(), vec![vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let x = m.parse_word("abC").unwrap();
        assert!(matches!(m.area_class(&x), Err(MarkingError::NonIntegralArea(_))));
        assert_eq!(m.mixed_class(&x).unwrap().twice_area, vec![1]);
    }

    #[test]
    fn mixed_commutator_examples() {
        let m = a_only();
        assert!(m.in_mixed_commutator(&w(&m, "[a,b]")).unwrap());
        assert!(!full().in_mixed_commutator(&w(&m, "[a,b]")).unwrap());
        assert!(full().in_mixed_commutator(&Word::identity()).unwrap());
        assert!(full().in_mixed_commutator(&w(&m, "[a,[a,b]]")).unwrap());
    }

    #[test]
    fn chain_in_cz_examples() {
        let m = a_only();
        let x1 = w(&m, "b");
        let x2 = w(&m, "aBA");
        let c = Chain1::from_terms([(x1.clone(), q(1)), (x2.clone(), q(1)), (x1.mul(&x2), q(-1))]);
        assert!(m.chain_in_cz(&c).unwrap());
        let fm = full();
        assert!(!fm.chain_in_cz(&Chain1::word(w(&m, "abAB"))).unwrap());
        assert!(m.chain_in_cz(&Chain1::word(w(&m, "[a,b]"))).unwrap());
        assert!(m.chain_in_cz(&Chain1::word(w(&m, "a"))).is_err());
        assert!(matches!(
            m.chain_in_cz(&Chain1::from_terms([(x1, crate::rational::frac(1, 2))])),
            Err(MarkingError::NonIntegralCoefficient(_))
        ));
    }

    #[test]
    fn matrix_shape_checked() {
        assert!(matches!(
            Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1]]),
            Err(MarkingError::MatrixShape { .. })
        ));
    }
}
