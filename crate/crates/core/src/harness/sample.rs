//! Seeded random generators for words, subgroup elements and chains.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rustc_hash::FxHasher;
use std::hash::Hasher;

use crate::chains::{Chain1, Chain2};
use crate::marking::Marking;
use crate::rational::{frac, Q};
use crate::word::{Letter, Word};

/// Independent stream for a named check, so results do not depend on the
/// order or concurrency in which checks run.
pub fn rng_for(seed: u64, name: &str) -> ChaCha8Rng {
    let mut h = FxHasher::default();
    h.write(name.as_bytes());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(h.finish());
    rng
}

/// Uniform reduced word of exactly `len` letters.
pub fn word_of_len(rng: &mut impl Rng, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = rng.gen_range(1..=rank) as Letter;
        let l = if rng.gen_bool(0.5) { g } else { -g };
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

/// Reduced word with length uniform in `0..=max_len`.
pub fn word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    word_of_len(rng, rank, len)
}

pub fn nontrivial_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len.max(1));
    word_of_len(rng, rank, len)
}

/// Rejection sampling inside `N`.
pub fn word_in_n(rng: &mut impl Rng, m: &Marking, max_len: usize) -> Word {
    loop {
        let w = nontrivial_word(rng, m.rank(), max_len);
        if m.in_n(&w).unwrap_or(false) {
            return w;
        }
    }
}

/// Rejection sampling of a nontrivial element of `[G,N]` with length at
/// most `max_len`; `None` after `attempts` misses.
pub fn element_of_gn(rng: &mut impl Rng, m: &Marking, max_len: usize, attempts: usize) -> Option<Word> {
    for _ in 0..attempts {
        let len = 2 * rng.gen_range(2..=max_len / 2);
        let w = word_of_len(rng, m.rank(), len);
        if m.in_mixed_commutator(&w).unwrap_or(false) {
            return Some(w);
        }
    }
    None
}

pub fn small_rational(rng: &mut impl Rng) -> Q {
    let d = [1, 1, 2, 3][rng.gen_range(0..4)];
    let mut n = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    frac(n, d)
}

/// A chain in `C_ℚ(G,N)`: boundaries of cells with both entries in `N`
/// plus a multiple of an element of `[G,N]` when one is found.
pub fn chain_in_cq(rng: &mut impl Rng, m: &Marking, cells: usize, max_len: usize) -> Chain1 {
    let mut sigma = Chain2::new();
    for _ in 0..cells {
        let g1 = word_in_n(rng, m, max_len);
        let g2 = word_in_n(rng, m, max_len);
        sigma.add_term(g1, g2, small_rational(rng));
    }
    let mut c = sigma.boundary();
    if rng.gen_bool(0.5) {
        if let Some(y) = element_of_gn(rng, m, 2 * max_len + 2, 2000) {
            c = &c + &Chain1::from_terms([(y, small_rational(rng))]);
        }
    }
    c
}
