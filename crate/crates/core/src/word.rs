//! Free-group words.
//!
//! A [`Word`] is a freely reduced sequence of signed generator indices: `+i`
//! is the `i`-th free generator (1-based) and `-i` its inverse. Every
//! constructor reduces, so two words are equal as values iff they represent
//! the same group element.
//!
//! Words are written over single-letter generator names with case flip for
//! inversion (`abAB` is `a b a⁻¹ b⁻¹`). The parser in [`FreeGroup::parse`]
//! additionally accepts `^k` exponents, parentheses and `[u,v]` commutators.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// A signed generator index; never zero.
pub type Letter = i8;

/// Largest supported rank. Generators are named by single letters.
pub const MAX_RANK: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: i64, rank: usize },
    #[error("rank mismatch: expected {expected}, found a word over rank {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("rank {0} is not supported (1..={MAX_RANK})")]
    UnsupportedRank(usize),
    #[error("invalid generator name {0:?}: names must be distinct lowercase letters")]
    BadLabel(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Total order on letters used for orientation and length-lex ordering:
/// generator index first, then `+` before `-`.
#[inline]
fn letter_key(l: Letter) -> u16 {
    ((l.unsigned_abs() as u16) << 1) | u16::from(l < 0)
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: SmallVec<[Letter; 24]>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// The generator `index` (1-based) or its inverse.
    pub fn generator(index: usize, inverse: bool) -> Self {
        assert!((1..=MAX_RANK).contains(&index), "generator index out of range");
        let l = index as Letter;
        Word::from_reduced_unchecked(&[if inverse { -l } else { l }])
    }

    /// Freely reduces an arbitrary signed-letter sequence.
    ///
    /// Fails if a letter is zero or refers to a generator beyond `rank`.
    pub fn reduce(raw: &[i64], rank: usize) -> Result<Self, WordError> {
        let mut w = Word::identity();
        for &l in raw {
            if l == 0 || l.unsigned_abs() as usize > rank || rank > MAX_RANK {
                return Err(WordError::GeneratorOutOfRange { index: l, rank });
            }
            w.push_reducing(l as Letter);
        }
        Ok(w)
    }

    /// Reduces a sequence of letters that are already known to be in range.
    pub fn from_letters(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::identity();
        for l in raw {
            debug_assert!(l != 0);
            w.push_reducing(l);
        }
        w
    }

    pub(crate) fn from_reduced_unchecked(letters: &[Letter]) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != -p[1]));
        Word {
            letters: SmallVec::from_slice(letters),
        }
    }

    #[inline]
    fn push_reducing(&mut self, l: Letter) {
        if self.letters.last() == Some(&-l) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used, 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Product `self · other`, reduced with a single stack pass.
    pub fn mul(&self, other: &Word) -> Word {
        let a = &self.letters;
        let b = &other.letters;
        let mut cancel = 0;
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == -b[cancel] {
            cancel += 1;
        }
        let mut letters = SmallVec::with_capacity(a.len() + b.len() - 2 * cancel);
        letters.extend_from_slice(&a[..a.len() - cancel]);
        letters.extend_from_slice(&b[cancel..]);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn pow(&self, k: i64) -> Word {
        if k == 0 || self.is_identity() {
            return Word::identity();
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let (conj, core) = {
            let (core, conj) = base.cyclic_reduce();
            (conj, core)
        };
        // core is cyclically reduced, so its powers concatenate without cancellation
        let n = k.unsigned_abs() as usize;
        let mut letters: SmallVec<[Letter; 24]> = SmallVec::with_capacity(core.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&core.letters);
        }
        Word { letters }.conjugate_by(&conj)
    }

    /// `[g, x] = g x g⁻¹ x⁻¹`.
    pub fn commutator(g: &Word, x: &Word) -> Word {
        g.mul(x).mul(&g.inverse()).mul(&x.inverse())
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core` cyclically
    /// reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let (i, j) = self.core_bounds();
        (
            Word::from_reduced_unchecked(&self.letters[i..j]),
            Word::from_reduced_unchecked(&self.letters[..i]),
        )
    }

    /// Index range of the cyclically reduced core inside `self`.
    #[inline]
    pub(crate) fn core_bounds(&self) -> (usize, usize) {
        let w = &self.letters;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        (i, j)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.core_bounds() == (0, self.len())
    }

    /// Maximal root with canonical orientation: of `r` and `r⁻¹` the
    /// length-lex smaller one is returned and the exponent absorbs the sign.
    pub fn primitive_root(&self) -> RootDecomposition {
        if self.is_identity() {
            return RootDecomposition {
                root: Word::identity(),
                exponent: 0,
            };
        }
        let (core, conj) = self.cyclic_reduce();
        let c = core.letters();
        let n = c.len();
        let mut period = n;
        for d in 1..=n / 2 {
            if n % d == 0 && (d..n).all(|i| c[i] == c[i - d]) {
                period = d;
                break;
            }
        }
        let root = Word::from_reduced_unchecked(&c[..period]).conjugate_by(&conj);
        let exponent = (n / period) as i64;
        let inv = root.inverse();
        if inv < root {
            RootDecomposition {
                root: inv,
                exponent: -exponent,
            }
        } else {
            RootDecomposition { root, exponent }
        }
    }

    /// Length-lex least rotation of the cyclically reduced core, with the
    /// element `s` such that `self = s · rotation · s⁻¹`.
    pub fn cyclic_class(&self) -> (Word, Word) {
        let (i, j) = self.core_bounds();
        let core = &self.letters[i..j];
        let r = least_rotation(core);
        let mut rotated: SmallVec<[Letter; 24]> = SmallVec::with_capacity(core.len());
        rotated.extend_from_slice(&core[r..]);
        rotated.extend_from_slice(&core[..r]);
        // core = u·v, rotation = v·u = u⁻¹·core·u, so self = (prefix·u)·rotation·(prefix·u)⁻¹
        let mut s: SmallVec<[Letter; 24]> = SmallVec::with_capacity(i + r);
        s.extend_from_slice(&self.letters[..i]);
        s.extend_from_slice(&core[..r]);
        (
            Word { letters: rotated },
            Word::from_letters(s.iter().copied()),
        )
    }

    /// Canonical cyclic representative only (see [`Word::cyclic_class`]).
    pub fn cyclic_canonical(&self) -> Word {
        let (i, j) = self.core_bounds();
        let core = &self.letters[i..j];
        let r = least_rotation(core);
        let mut rotated: SmallVec<[Letter; 24]> = SmallVec::with_capacity(core.len());
        rotated.extend_from_slice(&core[r..]);
        rotated.extend_from_slice(&core[..r]);
        Word { letters: rotated }
    }

    /// Exponent-sum vector of length `rank`.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in self.letters.iter() {
            let i = l.unsigned_abs() as usize - 1;
            v[i] += if l > 0 { 1 } else { -1 };
        }
        v
    }

    /// Renders with the default names `a, b, c, …`.
    pub fn to_default_string(&self) -> String {
        format_letters(&self.letters, &default_labels(MAX_RANK))
    }
}

/// Booth's algorithm under the letter order.
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n <= 1 {
        return 0;
    }
    let key = |i: usize| letter_key(s[i % n]);
    let mut f = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = key(j);
        let mut i = f[j - k - 1];
        while i != usize::MAX && sj != key(k + i + 1) {
            if sj < key(k + i + 1) {
                k = j - i - 1;
            }
            i = f[i];
        }
        if i == usize::MAX && sj != key(k) {
            if sj < key(k) {
                k = j;
            }
            f[j - k] = usize::MAX;
        } else {
            f[j - k] = if i == usize::MAX { 0 } else { i + 1 };
        }
    }
    k
}

impl Ord for Word {
    /// Length-lexicographic under the letter order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.letters
                .iter()
                .map(|&l| letter_key(l))
                .cmp(other.letters.iter().map(|&l| letter_key(l)))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_default_string())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        Word::mul(self, rhs)
    }
}

/// `root^exponent` reduces to the original word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDecomposition {
    pub root: Word,
    pub exponent: i64,
}

pub fn default_labels(rank: usize) -> Vec<char> {
    (0..rank).map(|i| (b'a' + i as u8) as char).collect()
}

fn format_letters(letters: &[Letter], labels: &[char]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    letters
        .iter()
        .map(|&l| {
            let c = labels[l.unsigned_abs() as usize - 1];
            if l < 0 {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

/// A free group of finite rank with named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    rank: usize,
    labels: Vec<char>,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Result<Self, WordError> {
        if rank == 0 || rank > MAX_RANK {
            return Err(WordError::UnsupportedRank(rank));
        }
        Ok(FreeGroup {
            rank,
            labels: default_labels(rank),
        })
    }

    pub fn with_labels(labels: &[String]) -> Result<Self, WordError> {
        let rank = labels.len();
        if rank == 0 || rank > MAX_RANK {
            return Err(WordError::UnsupportedRank(rank));
        }
        let mut chars = Vec::with_capacity(rank);
        for s in labels {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) if c.is_ascii_lowercase() && !chars.contains(&c) => chars.push(c),
                _ => return Err(WordError::BadLabel(s.clone())),
            }
        }
        Ok(FreeGroup {
            rank,
            labels: chars,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        let found = w.max_generator();
        if found > self.rank {
            Err(WordError::RankMismatch {
                expected: self.rank,
                found,
            })
        } else {
            Ok(())
        }
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word, WordError> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.mul(v))
    }

    pub fn commutator(&self, g: &Word, x: &Word) -> Result<Word, WordError> {
        self.check(g)?;
        self.check(x)?;
        Ok(Word::commutator(g, x))
    }

    pub fn format(&self, w: &Word) -> String {
        format_letters(w.letters(), &self.labels)
    }

    /// Parses `abAB`, `(ab)^-2`, `[a,b^8]^3`, `1` (identity), ignoring
    /// whitespace.
    pub fn parse(&self, s: &str) -> Result<Word, WordError> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
            group: self,
        };
        let w = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected character"));
        }
        Ok(w)
    }

    /// All reduced words of length at most `max_len`, in length-lex order.
    pub fn ball(&self, max_len: usize) -> Vec<Word> {
        ball(self.rank, max_len)
    }
}

/// All reduced words of length at most `max_len` over `rank` generators, in
/// length-lex order.
pub fn ball(rank: usize, max_len: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (1..=rank as Letter).flat_map(|i| [i, -i]).collect();
    let mut out = vec![Word::identity()];
    let mut layer_start = 0;
    for _ in 0..max_len {
        let layer_end = out.len();
        for idx in layer_start..layer_end {
            for &l in &alphabet {
                let w = &out[idx];
                if w.letters.last() == Some(&-l) {
                    continue;
                }
                let mut next = w.clone();
                next.letters.push(l);
                out.push(next);
            }
        }
        layer_start = layer_end;
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    group: &'a FreeGroup,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> WordError {
        WordError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Word, WordError> {
        let mut acc = Word::identity();
        while let Some(c) = self.peek() {
            if c == b')' || c == b']' || c == b',' {
                break;
            }
            let t = self.term()?;
            acc = acc.mul(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word, WordError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.integer()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<i64>().ok())
            .ok_or_else(|| self.err("expected integer exponent"))
    }

    fn atom(&mut self) -> Result<Word, WordError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        match c {
            b'(' => {
                self.pos += 1;
                let w = self.expr()?;
                self.expect(b')')?;
                Ok(w)
            }
            b'[' => {
                self.pos += 1;
                let g = self.expr()?;
                self.expect(b',')?;
                let x = self.expr()?;
                self.expect(b']')?;
                Ok(Word::commutator(&g, &x))
            }
            b'1' => {
                self.pos += 1;
                Ok(Word::identity())
            }
            c if c.is_ascii_alphabetic() => {
                let lower = c.to_ascii_lowercase() as char;
                let idx = self
                    .group
                    .labels
                    .iter()
                    .position(|&l| l == lower)
                    .ok_or_else(|| self.err("unknown generator"))?;
                self.pos += 1;
                Ok(Word::generator(idx + 1, c.is_ascii_uppercase()))
            }
            _ => Err(self.err("unexpected character")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> FreeGroup {
        FreeGroup::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        f2().parse(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce(&[1, -1], 2).unwrap(), Word::identity());
        assert_eq!(Word::reduce(&[1, 2, -2, -1], 2).unwrap(), Word::identity());
        assert_eq!(Word::reduce(&[1, 2, -1, -2], 2).unwrap(), w("abAB"));
        assert!(matches!(
            Word::reduce(&[3], 2),
            Err(WordError::GeneratorOutOfRange { index: 3, rank: 2 })
        ));
        assert!(Word::reduce(&[0], 2).is_err());
    }

    #[test]
    fn multiply_examples() {
        assert!(w("a").mul(&w("A")).is_identity());
        assert_eq!(w("ab").mul(&w("Ba")), w("aa"));
        assert_eq!(w("abab").mul(&w("(ab)^-1")), w("ab"));
        let f3 = FreeGroup::new(3).unwrap();
        assert!(matches!(
            f2().multiply(&w("a"), &f3.parse("c").unwrap()),
            Err(WordError::RankMismatch { .. })
        ));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(Word::commutator(&w("a"), &w("b")), w("abAB"));
        assert!(Word::commutator(&Word::identity(), &w("ab")).is_identity());
        assert!(Word::commutator(&w("a"), &w("aaa")).is_identity());
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("abA").cyclic_reduce(), (w("b"), w("a")));
        assert_eq!(w("abab").cyclic_reduce(), (w("abab"), Word::identity()));
        let x = w("B abAB b");
        let (core, conj) = x.cyclic_reduce();
        assert!(core.is_cyclically_reduced());
        assert_eq!(core.conjugate_by(&conj), x);
        assert_eq!(core.cyclic_canonical(), w("abAB").cyclic_canonical());
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(
            w("abab").primitive_root(),
            RootDecomposition { root: w("ab"), exponent: 2 }
        );
        assert_eq!(
            w("AAA").primitive_root(),
            RootDecomposition { root: w("a"), exponent: -3 }
        );
        assert_eq!(
            w("abAB").primitive_root(),
            RootDecomposition { root: w("abAB"), exponent: 1 }
        );
        // non-cyclically-reduced proper power: a b² a⁻¹ = (a b a⁻¹)²
        assert_eq!(
            w("abbA").primitive_root(),
            RootDecomposition { root: w("abA"), exponent: 2 }
        );
        assert_eq!(
            Word::identity().primitive_root(),
            RootDecomposition { root: Word::identity(), exponent: 0 }
        );
    }

    /// Brute force: `r` is a root of `x` iff some power of `r` equals `x`;
    /// scan every word up to `|x|` and keep the largest exponent.
    fn brute_max_exponent(x: &Word) -> i64 {
        let mut best = 1;
        for r in ball(2, x.len()) {
            if r.is_identity() {
                continue;
            }
            for k in 2..=x.len() as i64 {
                if r.pow(k) == *x {
                    best = best.max(k);
                }
            }
        }
        best
    }

    #[test]
    fn primitive_root_matches_brute_force() {
        for x in ball(2, 6).into_iter().skip(1) {
            let rd = x.primitive_root();
            assert_eq!(rd.exponent.abs(), brute_max_exponent(&x), "{x}");
            assert_eq!(rd.root.pow(rd.exponent), x);
            assert!(rd.root <= rd.root.inverse());
        }
    }

    #[test]
    fn parse_and_format() {
        let g = f2();
        assert_eq!(g.parse("[a,b]").unwrap(), w("abAB"));
        assert_eq!(g.parse("[a,b]^3").unwrap().len(), 12);
        assert_eq!(g.parse("[a,b^8]").unwrap(), w("a bbbbbbbb A BBBBBBBB"));
        assert_eq!(g.parse("(ab)^-2").unwrap(), w("BABA"));
        assert_eq!(g.parse("1").unwrap(), Word::identity());
        assert_eq!(g.parse("").unwrap(), Word::identity());
        assert_eq!(g.format(&Word::identity()), "1");
        assert_eq!(g.format(&w("abAB")), "abAB");
        assert!(g.parse("c").is_err());
        assert!(g.parse("[a,b").is_err());
        assert!(g.parse("a^").is_err());
    }

    #[test]
    fn cyclic_class_recomposes() {
        for x in ball(2, 5) {
            let (rot, s) = x.cyclic_class();
            assert_eq!(rot.conjugate_by(&s), x);
            assert_eq!(rot, x.cyclic_canonical());
            // canonical rotation is invariant under conjugation
            assert_eq!(x.conjugate_by(&w("bA")).cyclic_canonical(), rot);
        }
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(2, 0).len(), 1);
        assert_eq!(ball(2, 4).len(), 161);
        assert_eq!(ball(2, 6).len(), 1457);
        let b = ball(2, 3);
        assert!(b.windows(2).all(|p| p[0] < p[1]));
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2, 3, -3]), 0..=max_len)
            .prop_map(Word::from_letters)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reduce_is_idempotent(raw in prop::collection::vec(prop::sample::select(vec![1i64, -1, 2, -2]), 0..40)) {
            let once = Word::reduce(&raw, 2).unwrap();
            let raw2: Vec<i64> = once.letters().iter().map(|&l| l as i64).collect();
            prop_assert_eq!(Word::reduce(&raw2, 2).unwrap(), once);
        }

        #[test]
        fn inverse_cancels(x in arb_word(64)) {
            prop_assert!(x.mul(&x.inverse()).is_identity());
            prop_assert!(x.inverse().mul(&x).is_identity());
        }

        #[test]
        fn multiplication_is_associative(x in arb_word(12), y in arb_word(12), z in arb_word(12)) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn root_round_trip(x in arb_word(30), k in 1i64..4) {
            let p = x.pow(k);
            let rd = p.primitive_root();
            prop_assert_eq!(rd.root.pow(rd.exponent), p);
        }

        #[test]
        fn cyclic_round_trip(x in arb_word(30)) {
            let (core, conj) = x.cyclic_reduce();
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(core.conjugate_by(&conj), x);
        }

        #[test]
        fn commutators_have_zero_exponent_sums(g in arb_word(10), x in arb_word(10)) {
            prop_assert!(Word::commutator(&g, &x).exponent_sums(3).iter().all(|&e| e == 0));
        }
    }
}
