//! The Renault–Deaconu groupoid of the shift,
//! `G = { (x, m − n, y) : σ^m x = σ^n y }`.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::words::{Cylinder, FiniteWord, InfiniteWord, WordError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupoidError {
    NotTailEquivalent,
    /// The tails agree but every witness has a degree `≢ k` modulo the
    /// common period.
    DegreeInfeasible { degree: i64 },
    NotComposable,
    MalformedBisection(String),
    SourceNotInCylinder,
    /// The element's source is not the base of the bundle point.
    IncompatibleSource,
    NotLiftedEquivalent,
    Parse(String),
    Word(WordError),
}

impl fmt::Display for GroupoidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupoidError::NotTailEquivalent => f.write_str("words are not tail equivalent"),
            GroupoidError::DegreeInfeasible { degree } => {
                write!(f, "no shift witness has degree {}", degree)
            }
            GroupoidError::NotComposable => f.write_str("source of the left factor differs from range of the right factor"),
            GroupoidError::MalformedBisection(s) => write!(f, "malformed bisection: {}", s),
            GroupoidError::SourceNotInCylinder => f.write_str("source word is outside the bisection's source cylinder"),
            GroupoidError::IncompatibleSource => f.write_str("element source differs from the point's base word"),
            GroupoidError::NotLiftedEquivalent => f.write_str("points are not equivalent under the lifted shift with this degree"),
            GroupoidError::Parse(s) => write!(f, "{}", s),
            GroupoidError::Word(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for GroupoidError {}

impl From<WordError> for GroupoidError {
    fn from(e: WordError) -> Self {
        GroupoidError::Word(e)
    }
}

/// `(x, k, y)` together with the witness `(m, n)` of least `m + n` with
/// `m − n = k` and `σ^m x = σ^n y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupoidElement {
    range: InfiniteWord,
    degree: i64,
    source: InfiniteWord,
    witness: (usize, usize),
}

impl GroupoidElement {
    pub fn new(range: InfiniteWord, degree: i64, source: InfiniteWord) -> Result<Self, GroupoidError> {
        match InfiniteWord::witness_with_degree(&range, degree, &source) {
            Some(witness) => Ok(GroupoidElement { range, degree, source, witness }),
            None if InfiniteWord::tail_equivalent(&range, &source).is_some() => {
                Err(GroupoidError::DegreeInfeasible { degree })
            }
            None => Err(GroupoidError::NotTailEquivalent),
        }
    }

    /// `(x, 0, x)`.
    pub fn unit(x: InfiniteWord) -> Self {
        GroupoidElement { range: x.clone(), degree: 0, source: x, witness: (0, 0) }
    }

    /// `(σ^m x, −m, x)`, the element implementing `σ̃^m`.
    pub fn shift_element(x: &InfiniteWord, m: usize) -> Self {
        Self::new(x.shift_by(m), -(m as i64), x.clone()).expect("σ^m x is tail equivalent to x")
    }

    /// `r(γ)`.
    pub fn range(&self) -> &InfiniteWord {
        &self.range
    }

    /// `s(γ)`.
    pub fn source(&self) -> &InfiniteWord {
        &self.source
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn witness(&self) -> (usize, usize) {
        self.witness
    }

    /// `(x, k, y)(y, l, w) = (x, k + l, w)`.
    pub fn compose(&self, other: &GroupoidElement) -> Result<GroupoidElement, GroupoidError> {
        if self.source != other.range {
            return Err(GroupoidError::NotComposable);
        }
        Ok(GroupoidElement::new(self.range.clone(), self.degree + other.degree, other.source.clone())
            .expect("tail equivalence is transitive"))
    }

    /// `(x, k, y)^{-1} = (y, −k, x)`.
    pub fn inverse(&self) -> GroupoidElement {
        GroupoidElement {
            range: self.source.clone(),
            degree: -self.degree,
            source: self.range.clone(),
            witness: (self.witness.1, self.witness.0),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.degree == 0 && self.range == self.source
    }
}

impl fmt::Display for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {} ; {}", self.range, self.degree, self.source)
    }
}

impl fmt::Debug for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) witness {:?}", self, self.witness)
    }
}

impl FromStr for GroupoidElement {
    type Err = GroupoidError;

    /// `x ; k ; y`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: alloc::vec::Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(GroupoidError::Parse(
                "expected `<x> ; <k> ; <y>`".to_string(),
            ));
        }
        let x: InfiniteWord = parts[0].parse()?;
        let k: i64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| GroupoidError::Parse(alloc::format!("invalid degree `{}`", parts[1].trim())))?;
        let y: InfiniteWord = parts[2].parse()?;
        GroupoidElement::new(x, k, y)
    }
}

/// Isotropy at an eventually periodic `x` is `{ (x, j p, x) : j ∈ Z }`;
/// returns the primitive period `p`.
pub fn isotropy_period(x: &InfiniteWord) -> usize {
    x.period_len()
}

/// The isotropy generator `(x, p, x)`.
pub fn isotropy_generator(x: &InfiniteWord) -> GroupoidElement {
    GroupoidElement::new(x.clone(), x.period_len() as i64, x.clone())
        .expect("the period shifts x onto itself")
}

/// For a bounded prefix standing in for a non-periodic word: whether no
/// shift `1..=max_shift` maps the prefix onto itself where both are
/// defined. A positive answer is evidence of trivial isotropy, not a proof.
pub fn heuristically_aperiodic(prefix: &FiniteWord, max_shift: usize) -> bool {
    let s = prefix.symbols();
    (1..=max_shift.min(s.len().saturating_sub(1))).all(|d| (d..s.len()).any(|i| s[i] != s[i - d]))
}

/// The canonical bisection `G(Z(α), m, n, Z(β))`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bisection {
    alpha: FiniteWord,
    m: usize,
    n: usize,
    beta: FiniteWord,
}

impl Bisection {
    /// Requires `|α| − m = |β| − n ≥ 0` and `α_{m+1..} = β_{n+1..}`.
    pub fn new(alpha: FiniteWord, m: usize, n: usize, beta: FiniteWord) -> Result<Self, GroupoidError> {
        if m > alpha.len() || n > beta.len() {
            return Err(GroupoidError::MalformedBisection(
                "shift exceeds cylinder length".to_string(),
            ));
        }
        if alpha.len() - m != beta.len() - n {
            return Err(GroupoidError::MalformedBisection(
                "suffix lengths differ".to_string(),
            ));
        }
        if alpha.drop_front(m) != beta.drop_front(n) {
            return Err(GroupoidError::MalformedBisection(
                "suffixes differ".to_string(),
            ));
        }
        Ok(Bisection { alpha, m, n, beta })
    }

    pub fn alpha(&self) -> &FiniteWord {
        &self.alpha
    }

    pub fn beta(&self) -> &FiniteWord {
        &self.beta
    }

    pub fn shifts(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn degree(&self) -> i64 {
        self.m as i64 - self.n as i64
    }

    /// `(r(B), s(B)) = (Z(α), Z(β))`.
    pub fn range_source(&self) -> (Cylinder, Cylinder) {
        (Cylinder::new(self.alpha.clone()), Cylinder::new(self.beta.clone()))
    }

    /// The unique element of the bisection with source `y`:
    /// `(α_1 … α_m · σ^n y, m − n, y)`.
    pub fn element(&self, y: &InfiniteWord) -> Result<GroupoidElement, GroupoidError> {
        if !y.in_cylinder(&Cylinder::new(self.beta.clone())) {
            return Err(GroupoidError::SourceNotInCylinder);
        }
        let x = y.shift_by(self.n).prepend_word(&self.alpha.prefix(self.m));
        Ok(GroupoidElement::new(x, self.degree(), y.clone()).expect("bisection elements exist"))
    }
}

impl fmt::Debug for Bisection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(Z({}), {}, {}, Z({}))", self.alpha, self.m, self.n, self.beta)
    }
}
