//! Rational scalars, rational points and the few exact linear-algebra
//! routines the rest of the crate needs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let e = u32::try_from(exp).expect("exponent fits in u32");
    // Powers of coprime integers stay coprime and the denominator stays
    // positive, so no reduction is needed.
    Rational::new_raw(base.numer().pow(e), base.denom().pow(e))
}

/// Smallest-effort rational upper bound on `sqrt(q)`.
///
/// Exact when numerator and denominator are perfect squares; otherwise the
/// result exceeds the true root by less than `2^-32` relative to the
/// denominator scale.
pub fn sqrt_upper(q: &Rational) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    let (sn, sd) = (num.sqrt(), den.sqrt());
    if &sn * &sn == num && &sd * &sd == den {
        return Rational::new(BigInt::from(sn), BigInt::from(sd));
    }
    let scale = BigUint::one() << 32u32;
    let radicand = &num * &den * &scale * &scale;
    let mut root = radicand.sqrt();
    if &root * &root < radicand {
        root += 1u32;
    }
    Rational::new(BigInt::from(root), BigInt::from(den * scale))
}

/// A point of `Q^d`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    /// Standard basis vector `e_{index}` (0-based index).
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut p = Self::zeros(dim);
        p.0[index] = Rational::one();
        p
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn norm_sq(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, a| acc + a * a)
    }

    pub fn dist_sq(&self, other: &Point) -> Rational {
        self.sub(other).norm_sq()
    }

    /// Lossy conversion used for rendering and float prefilters only.
    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str(")")
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Solves `A x = b` exactly for a system with at least as many equations as
/// unknowns. Returns `None` when the system is inconsistent or the solution
/// is not unique.
pub fn solve_linear(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = matrix.len();
    assert_eq!(rows, rhs.len());
    let cols = matrix.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            assert_eq!(row.len(), cols);
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    // A missing pivot returns early, so column `col` pivots on row `col`.
    for col in 0..cols {
        let found = (col..rows).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, found);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v *= &inv;
        }
        let pivot = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *v -= &factor * p;
                }
            }
        }
    }
    // Remaining rows must read 0 = 0.
    if aug[cols..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(aug[..cols].iter().map(|row| row[cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_upper_exact_on_squares() {
        assert_eq!(sqrt_upper(&rat(9, 4)), rat(3, 2));
        assert_eq!(sqrt_upper(&int(0)), int(0));
    }

    #[test]
    fn sqrt_upper_is_an_upper_bound() {
        for (n, d) in [(2, 1), (1, 2), (18, 25), (7, 3), (1, 1_000_003)] {
            let q = rat(n, d);
            let s = sqrt_upper(&q);
            assert!(&s * &s >= q);
            let slack = &s * &s - &q;
            assert!(slack < rat(1, 1 << 20), "{} -> {}", q, s);
        }
    }

    #[test]
    fn solve_square_and_overdetermined() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve_linear(&m, &[int(5), int(10)]).unwrap();
        assert_eq!(x, vec![int(1), int(3)]);

        let m = vec![vec![int(1)], vec![int(2)]];
        assert_eq!(solve_linear(&m, &[int(1), int(2)]), Some(vec![int(1)]));
        assert_eq!(solve_linear(&m, &[int(1), int(3)]), None);
    }

    #[test]
    fn singular_system_rejected() {
        let m = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(solve_linear(&m, &[int(1), int(2)]), None);
    }
}
