//! Blowup patches `L_n(ω) = F_ω^{-1}(K)` and points of the fractafold
//! bundle `L = ⋃_n ⊔_{ω ∈ W^n} Z(ω) × L_n(ω)`.
//!
//! A [`BundlePoint`] never stores bare coordinates. It stores a base word
//! `x`, a level `n` and a point `u` of `K` given by its address; it denotes
//! `(x, F_{x(n)}^{-1}(u))`, so `F_{x(n)}(t) ∈ K` holds by construction.

use alloc::vec::Vec;
use core::fmt;

use crate::arith::{Point, Rational};
use crate::ifs::{map_box_inverse, KPoint, SimilaritySystem};
use crate::words::{FiniteWord, InfiniteWord};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BundlePoint {
    base: InfiniteWord,
    level: usize,
    kpoint: KPoint,
}

impl BundlePoint {
    pub fn new(base: InfiniteWord, level: usize, kpoint: KPoint) -> Self {
        BundlePoint { base, level, kpoint }
    }

    /// A point of `L_0 = X × K`.
    pub fn at_level_zero(base: InfiniteWord, address: InfiniteWord) -> Self {
        BundlePoint { base, level: 0, kpoint: KPoint::new(address) }
    }

    pub fn base(&self) -> &InfiniteWord {
        &self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn kpoint(&self) -> &KPoint {
        &self.kpoint
    }
}

impl fmt::Display for BundlePoint {
    /// `x ; n ; u`, the CLI text form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {} ; {}", self.base, self.level, self.kpoint)
    }
}

impl fmt::Debug for BundlePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BundlePoint({})", self)
    }
}

/// Exact coordinate-wise bounding box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    pub lo: Point,
    pub hi: Point,
}

impl Hull {
    pub fn contains(&self, p: &Point) -> bool {
        (0..p.dim()).all(|i| self.lo.coord(i) <= p.coord(i) && p.coord(i) <= self.hi.coord(i))
    }
}

/// `F_ω^{-1}` applied to an attractor net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupPatch {
    pub word: FiniteWord,
    pub depth: usize,
    /// Canonically sorted.
    pub net: Vec<Point>,
    /// `1 / r_ω`.
    pub scale: Rational,
    /// `ε_k / r_ω`.
    pub resolution: Rational,
}

/// The bundle over a fixed similarity system.
#[derive(Clone, Copy, Debug)]
pub struct Bundle<'s> {
    system: &'s SimilaritySystem,
}

impl<'s> Bundle<'s> {
    pub fn new(system: &'s SimilaritySystem) -> Self {
        Bundle { system }
    }

    pub fn system(&self) -> &'s SimilaritySystem {
        self.system
    }

    /// Net of `L_n(ω)` at depth `k`.
    pub fn blowup_patch(&self, word: &FiniteWord, depth: usize) -> BlowupPatch {
        let net = self.system.attractor_net(depth);
        self.patch_from_net(word, depth, &net.points)
    }

    /// Applies `F_ω^{-1}` to externally supplied attractor points.
    pub fn patch_from_net(&self, word: &FiniteWord, depth: usize, points: &[Point]) -> BlowupPatch {
        let mut net: Vec<Point> = points
            .iter()
            .map(|p| self.system.apply_word_inverse(word, p))
            .collect();
        net.sort();
        net.dedup();
        let scale = self.system.ratio_product(word).recip();
        let resolution = self.system.net_resolution(depth) * &scale;
        BlowupPatch { word: word.clone(), depth, net, scale, resolution }
    }

    /// Exact bounding box of the true set `L_n(ω)`, the image of the exact
    /// bounding box of `K` under `F_ω^{-1}`.
    pub fn patch_interval_hull(&self, patch: &BlowupPatch) -> Hull {
        self.word_hull(&patch.word)
    }

    /// Exact bounding box of `F_ω^{-1}(K)`.
    pub fn word_hull(&self, word: &FiniteWord) -> Hull {
        let (mut lo, mut hi) = {
            let (l, h) = self.system.bounding_box();
            (l.clone(), h.clone())
        };
        for &s in word.symbols().iter().rev() {
            let (l, h) = map_box_inverse(self.system.map(s), &lo, &hi);
            lo = l;
            hi = h;
        }
        Hull { lo, hi }
    }

    /// Exact bounding box of the cell `F_{a_1} ∘ … ∘ F_{a_k}(K)`.
    pub fn cell_hull(&self, cell: &FiniteWord) -> Hull {
        let (mut lo, mut hi) = {
            let (l, h) = self.system.bounding_box();
            (l.clone(), h.clone())
        };
        for &s in cell.symbols().iter().rev() {
            let (l, h) = crate::ifs::map_box(self.system.map(s), &lo, &hi);
            lo = l;
            hi = h;
        }
        Hull { lo, hi }
    }

    /// `t = F_{x(n)}^{-1}(u)`.
    pub fn point_coords(&self, bp: &BundlePoint) -> Point {
        let u = self.system.value_of(&bp.kpoint);
        self.system.apply_word_inverse(&bp.base.prefix(bp.level), &u)
    }

    /// `F_{x(n)}(t)`, the point of `K` certifying membership.
    pub fn certificate(&self, bp: &BundlePoint) -> Point {
        self.system.value_of(&bp.kpoint)
    }

    /// The same point of `L` described at level `n' ≥ n`: the address gains
    /// the cell word `x_{n'} … x_{n+1}` in front.
    pub fn raise_level(&self, bp: &BundlePoint, level: usize) -> BundlePoint {
        assert!(level >= bp.level, "levels only increase");
        let cell = bp.base.slice(bp.level, level).reversed();
        BundlePoint {
            base: bp.base.clone(),
            level,
            kpoint: bp.kpoint.under_cell(&cell),
        }
    }

    /// `π(x, t) = x`.
    pub fn project(&self, bp: &BundlePoint) -> InfiniteWord {
        bp.base.clone()
    }

    /// Whether two bundle points denote the same element of `L`.
    pub fn same_point(&self, a: &BundlePoint, b: &BundlePoint) -> bool {
        a.base == b.base && self.point_coords(a) == self.point_coords(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::presets;
    use proptest::prelude::*;

    fn iw(s: &str) -> InfiniteWord {
        s.parse().unwrap()
    }

    fn fw(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn p1(q: Rational) -> Point {
        Point::new(alloc::vec![q])
    }

    #[test]
    fn dyadic_patches() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let p = b.blowup_patch(&fw("11"), 2);
        assert_eq!(p.net, (0..4).map(|m| p1(int(m))).collect::<Vec<_>>());
        assert_eq!(p.scale, int(4));

        let p = b.blowup_patch(&fw("2"), 10);
        assert_eq!(p.net.first(), Some(&p1(int(-1))));
        assert!(p.net.iter().all(|q| q.coord(0) < &int(1)));
        assert_eq!(p.net.last(), Some(&p1(int(1) - rat(1, 512))));

        let p = b.blowup_patch(&fw(""), 3);
        assert_eq!(p.net, s.attractor_net(3).points);
    }

    #[test]
    fn dyadic_hulls() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let h = b.patch_interval_hull(&b.blowup_patch(&fw("22"), 1));
        assert_eq!(h, Hull { lo: p1(int(-3)), hi: p1(int(1)) });
        for n in 0..8 {
            let h = b.word_hull(&FiniteWord::repeat(1, n));
            assert_eq!(h, Hull { lo: p1(int(0)), hi: p1(int(1 << n)) });
        }
    }

    #[test]
    fn simplex_hull() {
        let s = presets::simplex(2, rat(1, 2)).unwrap();
        let b = Bundle::new(&s);
        // F_1^{-1}(x) = 2x - e_1 maps the box [0,1]^2 onto [-1,1] x [0,2]
        let h = b.word_hull(&fw("1"));
        assert_eq!(h, Hull { lo: Point::from_ints(&[-1, 0]), hi: Point::from_ints(&[1, 2]) });
        // the true patch is the segment from (1, 0) to (-1, 2); its hull is the same box
        let patch = b.blowup_patch(&fw("1"), 6);
        assert!(patch.net.iter().all(|p| h.contains(p)));
    }

    #[test]
    fn point_coordinates() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let at = |x: &str, n: usize, u: &str| {
            b.point_coords(&BundlePoint::new(iw(x), n, KPoint::new(iw(u))))
        };
        assert_eq!(at("(1)", 0, "(1)"), p1(int(0)));
        assert_eq!(at("2(1)", 1, "(1)"), p1(int(-1)));
        assert_eq!(at("(1)", 2, "(2)"), p1(int(4)));
    }

    #[test]
    fn raising_levels() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let z = BundlePoint::at_level_zero(iw("(1)"), iw("(1)"));
        let r = b.raise_level(&z, 3);
        assert_eq!(r.level(), 3);
        assert_eq!(b.point_coords(&r), p1(int(0)));

        let z = BundlePoint::new(iw("(2)"), 1, KPoint::new(iw("(1)")));
        assert_eq!(b.point_coords(&z), p1(int(-1)));
        let r = b.raise_level(&z, 2);
        assert_eq!(r.kpoint().address(), &iw("2(1)"));
        assert_eq!(b.point_coords(&r), p1(int(-1)));
    }

    #[test]
    fn nesting_of_patches() {
        let s = presets::simplex(3, rat(2, 5)).unwrap();
        let b = Bundle::new(&s);
        let x = iw("312(21)");
        for n in 0..4 {
            let lo = b.blowup_patch(&x.prefix(n), 2);
            let hi = b.blowup_patch(&x.prefix(n + 1), 3);
            assert!(lo.net.iter().all(|p| hi.net.binary_search(p).is_ok()));
            assert_eq!(lo.resolution, s.net_resolution(2) / s.ratio_product(&x.prefix(n)));
        }
    }

    fn arb_point() -> impl Strategy<Value = BundlePoint> {
        (
            proptest::collection::vec(1u8..=3, 0..4),
            proptest::collection::vec(1u8..=3, 1..3),
            0usize..5,
            proptest::collection::vec(1u8..=3, 0..3),
            proptest::collection::vec(1u8..=3, 1..3),
        )
            .prop_map(|(xu, xv, n, uu, uv)| {
                BundlePoint::new(
                    InfiniteWord::new(xu, xv).unwrap(),
                    n,
                    KPoint::new(InfiniteWord::new(uu, uv).unwrap()),
                )
            })
    }

    proptest! {
        #[test]
        fn certificates_are_sound(z in arb_point(), extra in 0usize..4) {
            let s = presets::gasket();
            let b = Bundle::new(&s);
            let t = b.point_coords(&z);
            prop_assert_eq!(s.apply_word(&z.base().prefix(z.level()), &t), b.certificate(&z));
            let r = b.raise_level(&z, z.level() + extra);
            prop_assert_eq!(b.point_coords(&r), t);
            prop_assert!(b.same_point(&z, &r));
            prop_assert!(b.word_hull(&z.base().prefix(z.level())).contains(&b.point_coords(&z)));
        }
    }
}
