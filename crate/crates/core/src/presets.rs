//! Ready-made systems with closed forms: the dyadic interval and the
//! simplex family `F_j(x) = r x + (1 − r) e_j` in `R^N`.
//!
//! The dyadic closed forms are stated over a 0/1 alphabet indexed from 0.
//! [`dyadic_closed_form_endpoints`] is the one place that translates: a
//! library symbol `s` at 1-based position `j + 1` is the digit `s − 1` at
//! 0-based position `j`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::action::ObstructionReport;
use crate::arith::{int, pow, rat, Point, Rational};
use crate::bundle::{Bundle, BundlePoint};
use crate::ifs::{IfsError, Region, SimilarityMap, SimilaritySystem};
use crate::words::InfiniteWord;

/// `F_1(t) = t/2`, `F_2(t) = t/2 + 1/2`; `K = [0, 1]`.
pub fn dyadic() -> SimilaritySystem {
    let half = rat(1, 2);
    SimilaritySystem::new(alloc::vec![
        SimilarityMap::homothety(half.clone(), Point::from_ints(&[0])).unwrap(),
        SimilarityMap::homothety(half.clone(), Point::new(alloc::vec![half])).unwrap(),
    ])
    .unwrap()
}

/// `(0, 1)`.
pub fn dyadic_region() -> Region {
    Region::unit_interval()
}

/// `F_j(x) = r x + (1 − r) e_j` on `R^n`; `F_j` fixes `e_j`.
pub fn simplex(n: usize, r: Rational) -> Result<SimilaritySystem, IfsError> {
    let maps = (0..n)
        .map(|j| {
            let offset = Point::basis(n, j).scale(&(Rational::one() - &r));
            SimilarityMap::homothety(r.clone(), offset)
        })
        .collect::<Result<Vec<_>, _>>()?;
    SimilaritySystem::new(maps)
}

/// Open hull of `e_1, …, e_n`.
pub fn simplex_region(n: usize) -> Region {
    Region::standard_simplex(n)
}

/// `simplex(3, 1/2)`, homeomorphic to the Sierpinski gasket.
pub fn gasket() -> SimilaritySystem {
    simplex(3, rat(1, 2)).unwrap()
}

/// `a_n(x) = −Σ_{j<n} x_j 2^j` and `b_n(x) = 2^n + a_n(x)` over the 0/1
/// alphabet.
pub fn dyadic_closed_form_endpoints(x: &InfiniteWord, n: usize) -> (Rational, Rational) {
    let mut a = BigInt::zero();
    let mut weight = BigInt::one();
    for j in 0..n {
        let digit = BigInt::from(x.symbol_at(j + 1) - 1);
        a -= digit * &weight;
        weight *= 2;
    }
    let a = Rational::from_integer(a);
    let b = Rational::from_integer(weight) + &a;
    (a, b)
}

/// Whether the exact hull of `L_n(x)` from the generic machinery equals the
/// closed form.
pub fn dyadic_crosscheck(x: &InfiniteWord, n: usize) -> bool {
    let s = dyadic();
    let b = Bundle::new(&s);
    let patch = b.blowup_patch(&x.prefix(n), 0);
    let hull = b.patch_interval_hull(&patch);
    let (a, bb) = dyadic_closed_form_endpoints(x, n);
    hull.lo.coord(0) == &a && hull.hi.coord(0) == &bb
}

/// Checks every depth-`k` net point against the truncated series
/// `(1 − r) Σ_{j ≤ k} r^{j−1} e_{c_j} + r^k e_1`, where `c` is the cell
/// word generating it.
pub fn simplex_attractor_formula_check(n: usize, r: &Rational, depth: usize) -> bool {
    let s = simplex(n, r.clone()).expect("valid simplex preset");
    let one_minus = Rational::one() - r;
    s.cell_representatives(depth).iter().all(|(cell, p)| {
        let mut series = Point::basis(n, 0).scale(&pow(r, depth));
        for (j, &c) in cell.symbols().iter().enumerate() {
            let term = Point::basis(n, c as usize - 1).scale(&(&one_minus * pow(r, j)));
            series = series.add(&term);
        }
        &series == p
    })
}

/// Orbit of `((1)^∞, e_1)` under bisection elements of depth `≤ depth`.
pub fn simplex_nonminimality(n: usize, r: &Rational, depth: usize) -> ObstructionReport {
    let s = simplex(n, r.clone()).expect("valid simplex preset");
    let b = Bundle::new(&s);
    let y = InfiniteWord::constant(1);
    let z0 = BundlePoint::at_level_zero(y.clone(), y);
    b.orbit_obstruction_check(&z0, depth)
}

/// Net-level openness heuristic for cells: the minimal squared distance
/// between `F_i(net_k)` and the other images exceeds `(2 ε_k)^2` for every
/// `i`. It suggests, but does not prove, that each `F_i(K)` is open in `K`.
pub fn cells_look_open(system: &SimilaritySystem, depth: usize) -> bool {
    system.check_totally_disconnected(depth).is_separated()
}

/// Convenience: `int(2)^n` as a rational.
pub fn two_pow(n: usize) -> Rational {
    pow(&int(2), n)
}
