//! Randomized property sweeps over the presets. Each returns a
//! [`SweepReport`]; the CLI self test prints them and the test suites
//! assert on them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::arith::{int, pow, rat, Rational};
use crate::bundle::{Bundle, BundlePoint};
use crate::groupoid::GroupoidElement;
use crate::ifs::SimilaritySystem;
use crate::measure::{CellSet, Measures};
use crate::presets;
use crate::sample;
use crate::words::{ConcatenationWord, Cylinder, FiniteWord, InfiniteWord};
use crate::action::OrbitTarget;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub name: &'static str,
    /// System or alphabet the sweep ran on; empty when implied by the name.
    pub subject: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SweepReport {
    fn new(name: &'static str) -> Self {
        SweepReport { name, subject: String::new(), trials: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.trials > 0
    }

    fn on(mut self, subject: &str) -> Self {
        self.subject = subject.into();
        self
    }
}

/// Generic hull endpoints of `L_n(x)` against the closed forms.
pub fn dyadic_closed_forms<R: Rng + ?Sized>(rng: &mut R, words: usize, max_n: usize) -> SweepReport {
    let mut rep = SweepReport::new("dyadic-closed-forms");
    for _ in 0..words {
        let x = sample::infinite_word(rng, 2, 6, 4);
        for n in 1..=max_n {
            let (a, b) = presets::dyadic_closed_form_endpoints(&x, n);
            let ok = presets::dyadic_crosscheck(&x, n) && &b - &a == pow(&int(2), n);
            rep.record(ok, || format!("x={} n={}", x, n));
        }
    }
    rep
}

/// Padding the witness never changes `γ · z`.
pub fn action_padding<R: Rng + ?Sized>(system: &SimilaritySystem, rng: &mut R, trials: usize) -> SweepReport {
    let b = Bundle::new(system);
    let n = system.len();
    let mut rep = SweepReport::new("action-padding");
    for _ in 0..trials {
        let z = sample::bundle_point(rng, n, 4);
        let g = sample::element_with_source(rng, n, z.base());
        let base = b.act(&g, &z).unwrap();
        let ok = (1..=5).all(|j| b.same_point(&b.act_with_padding(&g, &z, j).unwrap(), &base));
        rep.record(ok, || format!("gamma={} z={}", g, z));
    }
    rep
}

/// Groupoid axioms, equivariance and the lifted shift.
pub fn groupoid_and_action_axioms<R: Rng + ?Sized>(
    system: &SimilaritySystem,
    rng: &mut R,
    trials: usize,
) -> SweepReport {
    let b = Bundle::new(system);
    let n = system.len();
    let mut rep = SweepReport::new("groupoid-action-axioms");
    for _ in 0..trials {
        let [g1, g2, g3] = sample::composable_triple(rng, n);
        let z = sample::bundle_point_over(rng, n, g3.source().clone(), 4);
        let left = g1.compose(&g2).and_then(|g| g.compose(&g3));
        let right = g2.compose(&g3).and_then(|g| g1.compose(&g));
        let assoc = left.is_ok() && left == right;
        let inv = g1.compose(&g1.inverse()).map(|u| u.is_unit()).unwrap_or(false)
            && g1.inverse().compose(&g1).map(|u| u.is_unit()).unwrap_or(false)
            && g1.inverse().inverse() == g1;
        let g23 = g2.compose(&g3).unwrap();
        let rs = g23.range() == g2.range() && g23.source() == g3.source();
        let step = b.act(&g2, &b.act(&g3, &z).unwrap()).unwrap();
        let once = b.act(&g23, &z).unwrap();
        let action = b.same_point(&step, &once);
        let unit = b.same_point(&b.act(&GroupoidElement::unit(z.base().clone()), &z).unwrap(), &z);
        let equi = b.project(&once) == *g23.range();
        let lift = b.project(&b.sigma_tilde(&z)) == z.base().shift();
        let powers = (0..=4).all(|m| {
            b.same_point(
                &b.sigma_tilde_power(&z, m),
                &b.act(&GroupoidElement::shift_element(z.base(), m), &z).unwrap(),
            )
        });
        let ok = assoc && inv && rs && action && unit && equi && lift && powers;
        rep.record(ok, || {
            format!(
                "g1={} g2={} g3={} z={} [assoc={} inv={} rs={} action={} unit={} equi={} lift={} powers={}]",
                g1, g2, g3, z, assoc, inv, rs, action, unit, equi, lift, powers
            )
        });
    }
    rep
}

/// `Ψ` is a bijective groupoid morphism.
pub fn psi_isomorphism<R: Rng + ?Sized>(system: &SimilaritySystem, rng: &mut R, trials: usize) -> SweepReport {
    let b = Bundle::new(system);
    let n = system.len();
    let mut rep = SweepReport::new("psi-isomorphism");
    for _ in 0..trials {
        let w = sample::bundle_point(rng, n, 3);
        let g2 = sample::element_with_source(rng, n, w.base());
        let s = b.act(&g2, &w).unwrap();
        let g1 = sample::element_with_source(rng, n, g2.range());
        let t = b.act(&g1, &s).unwrap();
        let e1 = b.lifted_element(t.clone(), g1.degree(), s.clone()).unwrap();
        let e2 = b.lifted_element(s.clone(), g2.degree(), w.clone()).unwrap();
        let e12 = b.compose_lifted(&e1, &e2).unwrap();
        let lhs = b.psi(&e12);
        let rhs = b.compose_action(&b.psi(&e1), &b.psi(&e2)).unwrap();
        let hom = b.same_action_element(&lhs, &rhs);
        let back = b.same_lifted(&b.psi_inverse(&b.psi(&e1)), &e1);
        let a = b.action_element(g2.clone(), w.clone()).unwrap();
        let forth = b.same_action_element(&b.psi(&b.psi_inverse(&a)), &a);
        rep.record(hom && back && forth, || format!("t={} s={} w={}", t, s, w));
    }
    rep
}

/// `μ_∞(σ̃(R)) = μ_∞(R)` on random pushable rectangles.
pub fn measure_invariance<R: Rng + ?Sized>(
    alphabet: usize,
    rng: &mut R,
    trials: usize,
    max_depth: usize,
) -> SweepReport {
    let m = Measures::assume_osc(alphabet);
    let mut rep = SweepReport::new("measure-invariance");
    for _ in 0..trials {
        let r = sample::pushable_rectangle(rng, alphabet, max_depth);
        let pushed = m.push_sigma_tilde(&r).unwrap();
        rep.record(m.mu_infinity(&pushed) == m.mu_infinity(&r), || format!("{}", r));
    }
    rep
}

/// `μ(S) = N μ(F_i(S))` on every cell and `ν(Z(ω)) = N^{-|ω|}` with
/// `ν(Z(ωη)) = ν(Z(ω)) ν(Z(η))` on every cylinder, to `max_depth`.
pub fn self_similarity(alphabet: usize, max_depth: usize) -> SweepReport {
    let m = Measures::assume_osc(alphabet);
    let inv = Rational::new(1.into(), (alphabet as i64).into());
    let mut rep = SweepReport::new("self-similarity");
    for w in FiniteWord::all_up_to(alphabet, max_depth) {
        let s = CellSet::cell(alphabet, w.clone());
        let cell = m.scaling_holds(&s) && m.self_similarity_holds(&s) && m.mu(&s) == pow(&inv, w.len());
        let z = Cylinder::new(w.clone());
        let mut cyl = m.nu(&z) == pow(&inv, w.len());
        for k in 0..=w.len() {
            let (a, t) = (w.prefix(k), w.drop_front(k));
            cyl &= m.nu(&z) == m.nu(&Cylinder::new(a)) * m.nu(&Cylinder::new(t));
        }
        rep.record(cell && cyl, || format!("{}", w));
    }
    rep
}

/// Dense-orbit experiment on the dyadic preset: from the concatenation
/// word of all words of length `≤ k`, every target `Z(α) × F_α^{-1}(S)`
/// with `|α|, |S| ≤ target_depth` is hit within the prefix horizon.
pub fn dense_orbit(k: usize, target_depth: usize) -> SweepReport {
    let s = presets::dyadic();
    let b = Bundle::new(&s);
    let cw = ConcatenationWord::new(2, k);
    let z0 = BundlePoint::at_level_zero(cw.to_infinite(), InfiniteWord::constant(1));
    let mut rep = SweepReport::new("dense-orbit");
    for alpha in FiniteWord::all_up_to(2, target_depth) {
        for cell in FiniteWord::all_up_to(2, target_depth) {
            let target = OrbitTarget::new(alpha.clone(), cell.clone());
            let ok = match b.orbit_search(&z0, &target, cw.horizon()) {
                Some(w) => {
                    b.in_target(&w.point, &target)
                        && s.apply_word(&alpha, &b.point_coords(&w.point)) == s.value_of(&w.anchor)
                        && w.anchor.address().prefix(cell.len()) == cell
                }
                None => false,
            };
            rep.record(ok, || format!("alpha={} cell={}", alpha, cell));
        }
    }
    rep
}

/// Orbit of `((1)^∞, e_1)` for `simplex(n, 1/2)` stays in `{x_2 ≤ 0}`.
pub fn nonminimality(n: usize, depth: usize) -> SweepReport {
    let r = presets::simplex_nonminimality(n, &rat(1, 2), depth);
    let mut rep = SweepReport::new("non-minimality");
    rep.record(r.holds() && r.gap() >= int(1), || format!("{:?}", r));
    rep
}

/// Self-element degrees at `x` are exactly the multiples of its period.
pub fn isotropy<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> SweepReport {
    let mut rep = SweepReport::new("isotropy");
    for _ in 0..trials {
        let alphabet = rng.gen_range(2..=3);
        let x = sample::infinite_word(rng, alphabet, 5, 5);
        let p = x.period_len() as i64;
        let ok = (-4 * p..=4 * p).all(|k| GroupoidElement::new(x.clone(), k, x.clone()).is_ok() == (k % p == 0));
        rep.record(ok, || format!("{}", x));
    }
    rep
}

/// Separated for `simplex(2, 2/5)` by depth 12; never for `r = 1/2`.
pub fn disconnectedness() -> SweepReport {
    let mut rep = SweepReport::new("disconnectedness");
    let sep = presets::simplex(2, rat(2, 5)).unwrap().certify_totally_disconnected(12);
    rep.record(sep.is_separated(), || format!("{:?}", sep));
    let half = presets::simplex(2, rat(1, 2)).unwrap();
    for k in 1..=10 {
        let v = half.check_totally_disconnected(k);
        rep.record(!v.is_separated(), || format!("r=1/2 depth {}: {:?}", k, v));
    }
    rep
}

/// Preimage counts, positivity of `⟨ξ, ξ⟩` and the module action against
/// pointwise evaluation.
pub fn correspondence<R: Rng + ?Sized>(system: &SimilaritySystem, rng: &mut R, trials: usize) -> SweepReport {
    let b = Bundle::new(system);
    let n = system.len();
    let mut rep = SweepReport::new("correspondence");
    for _ in 0..trials {
        let z = sample::bundle_point(rng, n, 3);
        let pre = b.sigma_tilde_preimages(&z);
        let count = pre.len() == n && pre.iter().all(|p| b.same_point(&b.sigma_tilde(p), &z));
        let xi = sample::function_near(rng, &b, &z);
        let ip = b.inner_product(&xi, &xi, &z);
        let vanishes = pre.iter().all(|p| b.evaluate(&xi, p).is_zero());
        let positive = !ip.is_negative() && (ip.is_zero() == vanishes);
        let a = sample::function_near(rng, &b, &z);
        let c = sample::function_near(rng, &b, &b.sigma_tilde(&z));
        let out = b.module_actions(&a, &xi, &c);
        let pointwise = xi.support().all(|(p, v)| {
            b.evaluate(&out, p) == b.evaluate(&a, p) * v * b.evaluate(&c, &b.sigma_tilde(p))
        }) && out.support().all(|(p, _)| !b.evaluate(&xi, p).is_zero());
        rep.record(count && positive && pointwise, || format!("z={}", z));
    }
    rep
}

/// Every sweep at self-test sizes.
pub fn run_all<R: Rng + ?Sized>(rng: &mut R) -> Vec<SweepReport> {
    let dyadic = presets::dyadic();
    let simplex = presets::simplex(2, rat(2, 5)).unwrap();
    let gasket = presets::gasket();
    let mut out = Vec::new();
    out.push(dyadic_closed_forms(rng, 200, 12));
    for (s, label) in [(&dyadic, "dyadic"), (&simplex, "simplex:2:2/5"), (&gasket, "gasket")] {
        out.push(action_padding(s, rng, 100).on(label));
        out.push(groupoid_and_action_axioms(s, rng, 200).on(label));
        out.push(psi_isomorphism(s, rng, 100).on(label));
        out.push(correspondence(s, rng, 100).on(label));
    }
    out.push(measure_invariance(2, rng, 500, 6).on("N=2"));
    out.push(measure_invariance(3, rng, 500, 6).on("N=3"));
    let mut add = SweepReport::new("semialgebra-additivity").on("N=2,3");
    for n in [2, 3] {
        let r = Measures::assume_osc(n).semialgebra_additivity_check(rng, 5, 200);
        add.trials += r.partitions + r.covers;
        add.failures += r.failures;
        if add.first_failure.is_none() {
            add.first_failure = r.first_failure;
        }
    }
    out.push(add);
    out.push(self_similarity(2, 8).on("N=2"));
    out.push(self_similarity(3, 5).on("N=3"));
    out.push(dense_orbit(4, 2).on("dyadic"));
    out.push(nonminimality(2, 4).on("simplex:2:1/2"));
    out.push(nonminimality(3, 3).on("simplex:3:1/2"));
    out.push(isotropy(rng, 100));
    out.push(disconnectedness());
    out
}
