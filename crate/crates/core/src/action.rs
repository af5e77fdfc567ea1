//! The action of the shift groupoid on the bundle,
//! `(x, m − n, y) · (y, t) = (x, F_{x(m)}^{-1} ∘ F_{y(n)}(t))`,
//! the lifted shift `σ̃(x, t) = (σx, F_{x_1}(t))`, the isomorphism `Ψ`
//! between the lifted groupoid and the action groupoid, orbits, and the
//! correspondence over finitely supported functions.
//!
//! Acting never touches coordinates: a point `(y, n, u)` raised to the
//! padded level `n'` is relabelled `(x, m', u')`, since both denote
//! `F^{-1}_{x(m')}` of the same point `u'` of `K`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arith::{Point, Rational};
use crate::bundle::{Bundle, BundlePoint};
use crate::groupoid::{Bisection, GroupoidElement, GroupoidError};
use crate::ifs::KPoint;
use crate::words::{Cylinder, FiniteWord, InfiniteWord, Symbol};

/// An element `(t, k, s)` of the Renault–Deaconu groupoid of `σ̃`:
/// `σ̃^m(t) = σ̃^n(s)` with `m − n = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedElement {
    range: BundlePoint,
    degree: i64,
    source: BundlePoint,
}

impl LiftedElement {
    pub fn range(&self) -> &BundlePoint {
        &self.range
    }

    pub fn source(&self) -> &BundlePoint {
        &self.source
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }
}

/// A pair `(γ, z)` with `s(γ) = π(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionElement {
    gamma: GroupoidElement,
    point: BundlePoint,
}

impl ActionElement {
    pub fn gamma(&self) -> &GroupoidElement {
        &self.gamma
    }

    pub fn point(&self) -> &BundlePoint {
        &self.point
    }
}

/// How membership of a point of `K` in a cell is certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The point's address starts with the cell word. Sound always;
    /// misses boundary points reached through their other address.
    Address,
    /// The point lies in the exact bounding box of the cell. Exact when
    /// every cell meets `K` only inside its box, as for the interval and
    /// simplex presets with `r ≤ 1/2`.
    Hull,
    Either,
}

/// `Z(α) × F_α^{-1}(S)` at level `|α|`, with `S` a cell of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTarget {
    pub alpha: FiniteWord,
    pub cell: FiniteWord,
    pub membership: Membership,
}

impl OrbitTarget {
    pub fn new(alpha: FiniteWord, cell: FiniteWord) -> Self {
        OrbitTarget { alpha, cell, membership: Membership::Address }
    }

    pub fn with_membership(mut self, membership: Membership) -> Self {
        self.membership = membership;
        self
    }

    pub fn level(&self) -> usize {
        self.alpha.len()
    }
}

/// A move `γ` carrying `z0` into the target, with the certificate that
/// `F_{x(n)}(t)` lies in the cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitWitness {
    pub n: usize,
    pub gamma: GroupoidElement,
    pub point: BundlePoint,
    /// `F_α(t')` for the image point `t'`, as a point of `K`.
    pub anchor: KPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    /// Enumerated (bisection, element) pairs.
    pub enumerated: usize,
    /// Distinct orbit points among them.
    pub distinct: usize,
    /// Largest value of the second coordinate over the orbit.
    pub max_value: Rational,
    /// Number of orbit points with positive second coordinate.
    pub violations: usize,
}

impl ObstructionReport {
    pub fn holds(&self) -> bool {
        self.violations == 0 && !self.max_value.is_positive()
    }

    /// Distance from the orbit's values to the target value `1`.
    pub fn gap(&self) -> Rational {
        Rational::one() - &self.max_value
    }
}

/// A finitely supported rational function on `L`; support points are
/// keyed by denoted point, so distinct keys are distinct points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinSuppFunction {
    entries: BTreeMap<(InfiniteWord, Point), (BundlePoint, Rational)>,
}

impl FinSuppFunction {
    pub fn support(&self) -> impl Iterator<Item = (&BundlePoint, &Rational)> {
        self.entries.values().map(|(p, c)| (p, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<'s> Bundle<'s> {
    /// `γ · z` with the witness of `γ`.
    pub fn act(&self, gamma: &GroupoidElement, z: &BundlePoint) -> Result<BundlePoint, GroupoidError> {
        self.act_with_padding(gamma, z, 0)
    }

    /// `γ · z` computed with the witness `(m + j, n + j)`, where `j` is
    /// the least padding with `n + j ≥ level(z)` plus `extra`.
    pub fn act_with_padding(
        &self,
        gamma: &GroupoidElement,
        z: &BundlePoint,
        extra: usize,
    ) -> Result<BundlePoint, GroupoidError> {
        if gamma.source() != z.base() {
            return Err(GroupoidError::IncompatibleSource);
        }
        let (m, n) = gamma.witness();
        let j = z.level().saturating_sub(n) + extra;
        let raised = self.raise_level(z, n + j);
        Ok(BundlePoint::new(gamma.range().clone(), m + j, raised.kpoint().clone()))
    }

    /// `σ̃(x, t) = (σx, F_{x_1}(t))`.
    pub fn sigma_tilde(&self, z: &BundlePoint) -> BundlePoint {
        let x = z.base();
        if z.level() >= 1 {
            BundlePoint::new(x.shift(), z.level() - 1, z.kpoint().clone())
        } else {
            let cell = FiniteWord::new(alloc::vec![x.first()]);
            BundlePoint::new(x.shift(), 0, z.kpoint().under_cell(&cell))
        }
    }

    pub fn sigma_tilde_power(&self, z: &BundlePoint, m: usize) -> BundlePoint {
        (0..m).fold(z.clone(), |acc, _| self.sigma_tilde(&acc))
    }

    /// The `N` points `(i x, F_i^{-1}(t))`, in symbol order.
    pub fn sigma_tilde_preimages(&self, z: &BundlePoint) -> Vec<BundlePoint> {
        (1..=self.system().len() as Symbol)
            .map(|i| BundlePoint::new(z.base().prepend(i), z.level() + 1, z.kpoint().clone()))
            .collect()
    }

    /// Validates `σ̃^m(t) = σ̃^n(s)` for some `m − n = k`.
    ///
    /// Past a common witness of the base words both sides apply the same
    /// injective maps, so the minimal witness decides.
    pub fn lifted_element(
        &self,
        range: BundlePoint,
        degree: i64,
        source: BundlePoint,
    ) -> Result<LiftedElement, GroupoidError> {
        let gamma = GroupoidElement::new(range.base().clone(), degree, source.base().clone())
            .map_err(|_| GroupoidError::NotLiftedEquivalent)?;
        let image = self.act(&gamma, &source)?;
        if !self.same_point(&image, &range) {
            return Err(GroupoidError::NotLiftedEquivalent);
        }
        Ok(LiftedElement { range, degree, source })
    }

    /// `(t, k, s)(s, l, w) = (t, k + l, w)`.
    pub fn compose_lifted(&self, a: &LiftedElement, b: &LiftedElement) -> Result<LiftedElement, GroupoidError> {
        if !self.same_point(&a.source, &b.range) {
            return Err(GroupoidError::NotComposable);
        }
        Ok(LiftedElement { range: a.range.clone(), degree: a.degree + b.degree, source: b.source.clone() })
    }

    pub fn action_element(&self, gamma: GroupoidElement, point: BundlePoint) -> Result<ActionElement, GroupoidError> {
        if gamma.source() != point.base() {
            return Err(GroupoidError::IncompatibleSource);
        }
        Ok(ActionElement { gamma, point })
    }

    /// `(γ_1, γ_2 · z)(γ_2, z) = (γ_1 γ_2, z)`.
    pub fn compose_action(&self, a: &ActionElement, b: &ActionElement) -> Result<ActionElement, GroupoidError> {
        let moved = self.act(&b.gamma, &b.point)?;
        if !self.same_point(&a.point, &moved) {
            return Err(GroupoidError::NotComposable);
        }
        Ok(ActionElement { gamma: a.gamma.compose(&b.gamma)?, point: b.point.clone() })
    }

    /// `Ψ(t, k, s) = ((π t, k, π s), s)`.
    pub fn psi(&self, e: &LiftedElement) -> ActionElement {
        let gamma = GroupoidElement::new(e.range.base().clone(), e.degree, e.source.base().clone())
            .expect("validated on construction");
        ActionElement { gamma, point: e.source.clone() }
    }

    /// `Ψ^{-1}(γ, z) = (γ · z, k, z)`.
    pub fn psi_inverse(&self, a: &ActionElement) -> LiftedElement {
        let range = self.act(&a.gamma, &a.point).expect("validated on construction");
        LiftedElement { range, degree: a.gamma.degree(), source: a.point.clone() }
    }

    /// Lifted elements are equal when their end points denote the same
    /// points of `L`.
    pub fn same_lifted(&self, a: &LiftedElement, b: &LiftedElement) -> bool {
        a.degree == b.degree && self.same_point(&a.range, &b.range) && self.same_point(&a.source, &b.source)
    }

    pub fn same_action_element(&self, a: &ActionElement, b: &ActionElement) -> bool {
        a.gamma == b.gamma && self.same_point(&a.point, &b.point)
    }

    fn in_cell(&self, kpoint: &KPoint, cell: &FiniteWord, membership: Membership) -> bool {
        let by_address = || cell.is_prefix_of(&kpoint.address().prefix(cell.len()));
        let by_hull = || self.cell_hull(cell).contains(&self.system().value_of(kpoint));
        match membership {
            Membership::Address => by_address(),
            Membership::Hull => by_hull(),
            Membership::Either => by_address() || by_hull(),
        }
    }

    /// Looks for `n ≤ max_depth` with `F_{x(n)}(t)` in the target cell and
    /// returns `γ = (α · σ^n x, |α| − n, x)`, which moves `z0 = (x, t)`
    /// into `Z(α) × F_α^{-1}(S)`.
    pub fn orbit_search(&self, z0: &BundlePoint, target: &OrbitTarget, max_depth: usize) -> Option<OrbitWitness> {
        assert_eq!(z0.level(), 0, "orbit search starts on L_0");
        let x = z0.base();
        (0..=max_depth).find_map(|n| {
            let raised = self.raise_level(z0, n);
            if !self.in_cell(raised.kpoint(), &target.cell, target.membership) {
                return None;
            }
            let y = x.shift_by(n).prepend_word(&target.alpha);
            let gamma = GroupoidElement::new(y, target.level() as i64 - n as i64, x.clone())
                .expect("y and x share the tail σ^n x");
            let point = self.act(&gamma, z0).expect("source matches");
            Some(OrbitWitness { n, gamma, point, anchor: raised.kpoint().clone() })
        })
    }

    /// Whether `z` lies in `Z(α) × F_α^{-1}(S)`, judged by coordinates.
    pub fn in_target(&self, z: &BundlePoint, target: &OrbitTarget) -> bool {
        if !z.base().in_cylinder(&Cylinder::new(target.alpha.clone())) {
            return false;
        }
        let v = self.system().apply_word(&target.alpha, &self.point_coords(z));
        self.cell_hull(&target.cell).contains(&v)
    }

    /// Canonical bisections with `|α|, |β| ≤ depth` whose source cylinder
    /// contains `y`, ordered by `(|β|, n, |α|, α)`.
    pub fn bisections_through(&self, y: &InfiniteWord, depth: usize) -> Vec<Bisection> {
        self.bisections_through_partition(y, depth, None)
    }

    /// The subset of [`Self::bisections_through`] whose `α` starts with
    /// `first` (`None`: all), so enumeration can be split across workers.
    pub fn bisections_through_partition(
        &self,
        y: &InfiniteWord,
        depth: usize,
        first: Option<Option<Symbol>>,
    ) -> Vec<Bisection> {
        let alphabet = self.system().len();
        let mut out = Vec::new();
        for blen in 0..=depth {
            let beta = y.prefix(blen);
            for n in 0..=blen {
                let suffix = beta.drop_front(n);
                for m in 0..=depth - suffix.len() {
                    for head in FiniteWord::all_of_length(alphabet, m) {
                        let alpha = head.concat(&suffix);
                        if let Some(f) = first {
                            if alpha.first() != f {
                                continue;
                            }
                        }
                        out.push(Bisection::new(alpha, m, n, beta.clone()).expect("suffixes agree"));
                    }
                }
            }
        }
        out
    }

    /// `(γ, γ · z0)` for every enumerated bisection element through the
    /// base of `z0`.
    pub fn orbit_elements(&self, z0: &BundlePoint, depth: usize) -> Vec<(GroupoidElement, BundlePoint)> {
        self.bisections_through(z0.base(), depth)
            .iter()
            .map(|b| {
                let g = b.element(z0.base()).expect("y lies in Z(β)");
                let p = self.act(&g, z0).expect("source matches");
                (g, p)
            })
            .collect()
    }

    /// Checks that every enumerated orbit point of `z0` has second
    /// coordinate `≤ 0`.
    pub fn orbit_obstruction_check(&self, z0: &BundlePoint, depth: usize) -> ObstructionReport {
        assert!(self.system().dim() >= 2, "the obstruction reads the second coordinate");
        let orbit = self.orbit_elements(z0, depth);
        let mut seen = alloc::collections::BTreeSet::new();
        let mut max_value: Option<Rational> = None;
        let mut violations = 0;
        for (_, p) in &orbit {
            let c = self.point_coords(p);
            let v = c.coord(1).clone();
            if v.is_positive() {
                violations += 1;
            }
            if max_value.as_ref().is_none_or(|m| v > *m) {
                max_value = Some(v);
            }
            seen.insert((p.base().clone(), c));
        }
        ObstructionReport {
            enumerated: orbit.len(),
            distinct: seen.len(),
            max_value: max_value.expect("the unit is always enumerated"),
            violations,
        }
    }

    /// Builds a finitely supported function, merging coefficients of
    /// points that denote the same element of `L` and dropping zeros.
    pub fn function<I>(&self, entries: I) -> FinSuppFunction
    where
        I: IntoIterator<Item = (BundlePoint, Rational)>,
    {
        let mut map: BTreeMap<(InfiniteWord, Point), (BundlePoint, Rational)> = BTreeMap::new();
        for (p, c) in entries {
            let key = (p.base().clone(), self.point_coords(&p));
            map.entry(key)
                .and_modify(|e| e.1 += &c)
                .or_insert((p, c));
        }
        map.retain(|_, e| !e.1.is_zero());
        FinSuppFunction { entries: map }
    }

    pub fn evaluate(&self, f: &FinSuppFunction, z: &BundlePoint) -> Rational {
        let key = (z.base().clone(), self.point_coords(z));
        f.entries.get(&key).map_or_else(Rational::zero, |e| e.1.clone())
    }

    /// `⟨ξ, η⟩(z) = Σ_{σ̃(y) = z} ξ(y) η(y)` (real scalars).
    pub fn inner_product(&self, xi: &FinSuppFunction, eta: &FinSuppFunction, z: &BundlePoint) -> Rational {
        self.sigma_tilde_preimages(z)
            .iter()
            .fold(Rational::zero(), |acc, y| acc + self.evaluate(xi, y) * self.evaluate(eta, y))
    }

    /// `(a · ξ · b)(z) = a(z) ξ(z) b(σ̃(z))`.
    pub fn module_actions(&self, a: &FinSuppFunction, xi: &FinSuppFunction, b: &FinSuppFunction) -> FinSuppFunction {
        self.function(xi.support().map(|(z, c)| {
            let v = self.evaluate(a, z) * c * self.evaluate(b, &self.sigma_tilde(z));
            (z.clone(), v)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::presets;
    use crate::words::ConcatenationWord;

    fn iw(s: &str) -> InfiniteWord {
        s.parse().unwrap()
    }

    fn fw(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn p1(q: Rational) -> Point {
        Point::new(alloc::vec![q])
    }

    fn bp(x: &str, n: usize, u: &str) -> BundlePoint {
        BundlePoint::new(iw(x), n, KPoint::new(iw(u)))
    }

    #[test]
    fn dyadic_action_examples() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let g = GroupoidElement::new(iw("2(1)"), 0, iw("(1)")).unwrap();
        assert_eq!(g.witness(), (1, 1));
        let out = b.act(&g, &bp("(1)", 0, "(1)")).unwrap();
        assert_eq!(out.base(), &iw("2(1)"));
        assert_eq!(b.point_coords(&out), p1(int(-1)));
        let out = b.act(&g, &bp("(1)", 0, "(2)")).unwrap();
        assert_eq!(b.point_coords(&out), p1(int(0)));

        let z = bp("21(12)", 2, "2(1)");
        let unit = GroupoidElement::unit(z.base().clone());
        assert!(b.same_point(&b.act(&unit, &z).unwrap(), &z));
        assert_eq!(b.act(&g, &z), Err(GroupoidError::IncompatibleSource));
    }

    #[test]
    fn lifted_shift_examples() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        // t = 1/2 over 2(1) at level 0 has address 2(1)
        let z = bp("2(1)", 0, "2(1)");
        assert_eq!(b.point_coords(&z), p1(rat(1, 2)));
        let w = b.sigma_tilde(&z);
        assert_eq!(w.base(), &iw("(1)"));
        assert_eq!(b.point_coords(&w), p1(rat(3, 4)));
        let z = bp("(1)", 0, "(1)");
        assert!(b.same_point(&b.sigma_tilde(&z), &z));

        let pre = b.sigma_tilde_preimages(&z);
        assert_eq!(pre.len(), 2);
        assert_eq!((pre[0].base(), b.point_coords(&pre[0])), (&iw("(1)"), p1(int(0))));
        assert_eq!((pre[1].base(), b.point_coords(&pre[1])), (&iw("2(1)"), p1(int(-1))));
        for p in &pre {
            assert!(b.same_point(&b.sigma_tilde(p), &z));
        }
    }

    #[test]
    fn lifted_shift_is_an_action() {
        let s = presets::gasket();
        let b = Bundle::new(&s);
        let z = bp("312(2131)", 1, "23(1)");
        for m in 0..=4 {
            let via_shift = b.sigma_tilde_power(&z, m);
            let via_act = b.act(&GroupoidElement::shift_element(z.base(), m), &z).unwrap();
            assert!(b.same_point(&via_shift, &via_act));
            assert_eq!(via_shift.base(), &z.base().shift_by(m));
        }
    }

    #[test]
    fn psi_examples() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let t = bp("2(1)", 1, "(1)");
        let sp = bp("(1)", 0, "(1)");
        assert_eq!(b.point_coords(&t), p1(int(-1)));
        let e = b.lifted_element(t.clone(), 0, sp.clone()).unwrap();
        let a = b.psi(&e);
        assert_eq!(a.gamma(), &GroupoidElement::new(iw("2(1)"), 0, iw("(1)")).unwrap());
        assert!(b.same_point(&b.act(a.gamma(), &sp).unwrap(), &t));
        assert!(b.same_lifted(&b.psi_inverse(&a), &e));
        assert_eq!(
            b.lifted_element(t.clone(), 0, bp("(1)", 0, "(2)")),
            Err(GroupoidError::NotLiftedEquivalent)
        );
        let u = b.lifted_element(t.clone(), 0, t.clone()).unwrap();
        assert!(b.psi(&u).gamma().is_unit());
    }

    #[test]
    fn orbit_search_examples() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let z0 = BundlePoint::at_level_zero(iw("12(21)"), iw("(1)"));
        let w = b.orbit_search(&z0, &OrbitTarget::new(fw(""), fw("")), 0).unwrap();
        assert_eq!(w.n, 0);
        assert!(w.gamma.is_unit());

        let cw = ConcatenationWord::new(2, 3);
        let z0 = BundlePoint::at_level_zero(cw.to_infinite(), iw("(1)"));
        let target = OrbitTarget::new(fw("2"), fw("21"));
        let w = b.orbit_search(&z0, &target, cw.horizon()).unwrap();
        assert!(b.in_target(&w.point, &target));
        // brute force: first n with F_{x(n)}(0) in F_2 F_1 [0,1] = [1/2, 3/4]
        let x = cw.prefix();
        let mut t = int(0);
        let mut first = None;
        for n in 0..=x.len() {
            if n > 0 {
                t = s.map(x.symbols()[n - 1]).apply(&p1(t)).coord(0).clone();
            }
            if t >= rat(1, 2) && t <= rat(3, 4) {
                first = Some(n);
                break;
            }
        }
        assert!(w.n >= first.unwrap());
        let hull = OrbitTarget::new(fw("2"), fw("21")).with_membership(Membership::Hull);
        assert_eq!(b.orbit_search(&z0, &hull, cw.horizon()).unwrap().n, first.unwrap());
    }

    #[test]
    fn obstructed_orbit() {
        let s = presets::simplex(2, rat(1, 2)).unwrap();
        let b = Bundle::new(&s);
        let z0 = BundlePoint::at_level_zero(iw("(1)"), iw("(1)"));
        assert_eq!(b.point_coords(&z0), Point::basis(2, 0));
        for m in [Membership::Address, Membership::Hull] {
            let target = OrbitTarget::new(fw(""), fw("2")).with_membership(m);
            assert!(b.orbit_search(&z0, &target, 40).is_none());
        }
        let r = b.orbit_obstruction_check(&z0, 0);
        assert_eq!((r.enumerated, r.max_value.clone()), (1, int(0)));
        let r = b.orbit_obstruction_check(&z0, 4);
        assert!(r.holds());
        assert!(r.gap() >= int(1));
        assert_eq!(r.enumerated, b.bisections_through(z0.base(), 4).len());
    }

    #[test]
    fn partitions_cover_bisections() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let y = iw("2(12)");
        let all = b.bisections_through(&y, 3);
        let mut parts = b.bisections_through_partition(&y, 3, Some(None));
        for f in 1..=2 {
            parts.extend(b.bisections_through_partition(&y, 3, Some(Some(f))));
        }
        let mut a = all.clone();
        a.sort();
        parts.sort();
        assert_eq!(a, parts);
    }

    #[test]
    fn correspondence_examples() {
        let s = presets::dyadic();
        let b = Bundle::new(&s);
        let z = bp("(1)", 0, "(1)");
        let pre = b.sigma_tilde_preimages(&z);
        let one = b.function([(pre[0].clone(), int(1))]);
        assert_eq!(b.inner_product(&one, &one, &z), int(1));
        let off = b.function([(bp("(2)", 0, "(1)"), int(5))]);
        assert_eq!(b.inner_product(&off, &off, &z), int(0));
        let all = b.function(pre.iter().map(|p| (p.clone(), int(1))));
        assert_eq!(b.inner_product(&all, &all, &z), int(2));

        // merging by denoted point
        let twice = b.function([(pre[1].clone(), int(1)), (b.raise_level(&pre[1], 3), int(2))]);
        assert_eq!(twice.len(), 1);
        assert_eq!(b.evaluate(&twice, &pre[1]), int(3));

        let xi = b.function([(pre[0].clone(), int(2)), (pre[1].clone(), int(-3))]);
        let ones = b.function(pre.iter().map(|p| (p.clone(), int(1))));
        let at_z = b.function([(z.clone(), int(1))]);
        assert_eq!(b.module_actions(&ones, &xi, &at_z), xi);
        let zero = b.function(core::iter::empty());
        assert!(b.module_actions(&zero, &xi, &at_z).is_empty());
        let keep = b.function([(b.sigma_tilde(&pre[0]), int(1))]);
        assert_eq!(b.module_actions(&ones, &xi, &keep), xi);
        let other = bp("2(2)", 0, "(1)");
        let xi2 = b.function([(pre[0].clone(), int(2)), (other.clone(), int(7))]);
        let ones2 = b.function([(pre[0].clone(), int(1)), (other.clone(), int(1))]);
        let r = b.module_actions(&ones2, &xi2, &keep);
        assert_eq!(r.len(), 1);
        assert_eq!(b.evaluate(&r, &pre[0]), int(2));
    }
}
