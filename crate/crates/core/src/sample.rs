//! Seeded random generators for words, bundle points, groupoid elements,
//! rectangles and finitely supported functions.

use alloc::vec::Vec;

use rand::Rng;

use crate::arith::{rat, Rational};
use crate::bundle::{Bundle, BundlePoint};
use crate::action::FinSuppFunction;
use crate::groupoid::GroupoidElement;
use crate::ifs::KPoint;
use crate::measure::{CellSet, Rectangle};
use crate::words::{FiniteWord, InfiniteWord, Symbol};

pub fn finite_word<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, len: usize) -> FiniteWord {
    FiniteWord::new((0..len).map(|_| rng.gen_range(1..=alphabet as Symbol)).collect())
}

pub fn finite_word_up_to<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, max_len: usize) -> FiniteWord {
    let len = rng.gen_range(0..=max_len);
    finite_word(rng, alphabet, len)
}

/// Preperiod length `≤ max_pre`, period length in `1..=max_period`.
pub fn infinite_word<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: usize,
    max_pre: usize,
    max_period: usize,
) -> InfiniteWord {
    let pre = finite_word_up_to(rng, alphabet, max_pre);
    let plen = rng.gen_range(1..=max_period);
    let per = finite_word(rng, alphabet, plen);
    InfiniteWord::from_parts(&pre, &per).expect("nonempty period")
}

pub fn kpoint<R: Rng + ?Sized>(rng: &mut R, alphabet: usize) -> KPoint {
    KPoint::new(infinite_word(rng, alphabet, 3, 3))
}

pub fn bundle_point<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, max_level: usize) -> BundlePoint {
    let base = infinite_word(rng, alphabet, 4, 3);
    bundle_point_over(rng, alphabet, base, max_level)
}

pub fn bundle_point_over<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: usize,
    base: InfiniteWord,
    max_level: usize,
) -> BundlePoint {
    let level = rng.gen_range(0..=max_level);
    BundlePoint::new(base, level, kpoint(rng, alphabet))
}

/// An element `(α · σ^n y, |α| − n, y)` with random `α` and `n`.
pub fn element_with_source<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, y: &InfiniteWord) -> GroupoidElement {
    let n = rng.gen_range(0..=4);
    let alpha = finite_word_up_to(rng, alphabet, 4);
    let x = y.shift_by(n).prepend_word(&alpha);
    GroupoidElement::new(x, alpha.len() as i64 - n as i64, y.clone()).expect("shared tail")
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, alphabet: usize) -> GroupoidElement {
    let y = infinite_word(rng, alphabet, 4, 3);
    element_with_source(rng, alphabet, &y)
}

/// A composable triple `γ_1, γ_2, γ_3` (so `γ_1 γ_2 γ_3` is defined).
pub fn composable_triple<R: Rng + ?Sized>(rng: &mut R, alphabet: usize) -> [GroupoidElement; 3] {
    let g3 = element(rng, alphabet);
    let g2 = element_with_source(rng, alphabet, g3.range());
    let g1 = element_with_source(rng, alphabet, g2.range());
    [g1, g2, g3]
}

pub fn cell_set<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, max_depth: usize) -> CellSet {
    let count = rng.gen_range(1..=3);
    CellSet::new(alphabet, (0..count).map(|_| finite_word_up_to(rng, alphabet, max_depth)))
}

/// `|ω| + |η| ≤ max_depth`, cells of depth `≤ max_depth`.
pub fn rectangle<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, max_depth: usize) -> Rectangle {
    let blen = rng.gen_range(0..=max_depth);
    let tlen = rng.gen_range(0..=max_depth - blen);
    Rectangle::new(
        finite_word(rng, alphabet, blen),
        finite_word(rng, alphabet, tlen),
        cell_set(rng, alphabet, max_depth),
    )
}

/// A rectangle on which `σ̃` is injective: `ω` or `η` nonempty.
pub fn pushable_rectangle<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, max_depth: usize) -> Rectangle {
    loop {
        let r = rectangle(rng, alphabet, max_depth.max(1));
        if !(r.base.is_empty() && r.tail.is_empty()) {
            return r;
        }
    }
}

pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// A function supported partly on the `σ̃`-fiber over `z` and partly
/// elsewhere.
pub fn function_near<R: Rng + ?Sized>(rng: &mut R, bundle: &Bundle<'_>, z: &BundlePoint) -> FinSuppFunction {
    let alphabet = bundle.system().len();
    let mut entries: Vec<(BundlePoint, Rational)> = Vec::new();
    for p in bundle.sigma_tilde_preimages(z) {
        if rng.gen_bool(0.6) {
            entries.push((p, small_rational(rng)));
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        entries.push((bundle_point(rng, alphabet, 3), small_rational(rng)));
    }
    bundle.function(entries)
}
