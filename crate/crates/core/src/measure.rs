//! The self-similar measure `μ` on cells of `K`, the Bernoulli measure `ν`
//! on `X`, the bundle measure `μ_∞` on the cell semialgebra and the trace on
//! simple functions.
//!
//! Measurable sets are restricted to finite unions of cells. Under the open
//! set condition two distinct cells of the same depth overlap in a
//! `μ`-null set, so cells of an antichain are treated as disjoint and
//! `μ(F_{a_1} ∘ … ∘ F_{a_k}(K)) = N^{-k}` exactly.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::arith::{pow, Rational};
use crate::ifs::{OscVerdict, Region, SimilaritySystem};
use crate::words::{Cylinder, FiniteWord, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureError {
    /// `σ̃` is not injective on `Z("") × K`.
    NotInjectiveOnRectangle,
    InfiniteMass,
    OscNotSatisfied(String),
    Overlapping { first: usize, second: usize },
    AlphabetMismatch { expected: usize, found: usize },
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::NotInjectiveOnRectangle => {
                f.write_str("the lifted shift is not injective on a rectangle with empty base and tail")
            }
            MeasureError::InfiniteMass => f.write_str("simple function has a term of infinite measure"),
            MeasureError::OscNotSatisfied(s) => write!(f, "open set condition not verified: {}", s),
            MeasureError::Overlapping { first, second } => {
                write!(f, "terms {} and {} are not disjoint", first, second)
            }
            MeasureError::AlphabetMismatch { expected, found } => {
                write!(f, "alphabet size {} expected, found {}", expected, found)
            }
        }
    }
}

impl core::error::Error for MeasureError {}

/// A finite union of cells, normalized to a unique antichain: no cell
/// extends another and no complete sibling group remains uncollapsed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellSet {
    alphabet: usize,
    cells: BTreeSet<FiniteWord>,
}

impl CellSet {
    pub fn new<I: IntoIterator<Item = FiniteWord>>(alphabet: usize, cells: I) -> Self {
        let mut set = CellSet { alphabet, cells: cells.into_iter().collect() };
        set.normalize();
        set
    }

    pub fn empty(alphabet: usize) -> Self {
        CellSet { alphabet, cells: BTreeSet::new() }
    }

    /// `K` itself.
    pub fn full(alphabet: usize) -> Self {
        Self::new(alphabet, [FiniteWord::empty()])
    }

    pub fn cell(alphabet: usize, cell: FiniteWord) -> Self {
        Self::new(alphabet, [cell])
    }

    fn normalize(&mut self) {
        // Drop cells covered by a shorter member.
        let all: Vec<FiniteWord> = self.cells.iter().cloned().collect();
        self.cells = all
            .iter()
            .filter(|c| !(0..c.len()).any(|k| self.cells.contains(&c.prefix(k))))
            .cloned()
            .collect();
        // Collapse complete sibling groups, deepest first.
        loop {
            let mut parent = None;
            for c in self.cells.iter().rev() {
                if c.is_empty() {
                    continue;
                }
                let p = c.prefix(c.len() - 1);
                let complete = (1..=self.alphabet as Symbol).all(|s| {
                    let mut child = p.clone();
                    child.push(s);
                    self.cells.contains(&child)
                });
                if complete {
                    parent = Some(p);
                    break;
                }
            }
            match parent {
                None => break,
                Some(p) => {
                    for s in 1..=self.alphabet as Symbol {
                        let mut child = p.clone();
                        child.push(s);
                        self.cells.remove(&child);
                    }
                    self.cells.insert(p);
                }
            }
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn cells(&self) -> impl Iterator<Item = &FiniteWord> {
        self.cells.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.cells.len() == 1 && self.cells.iter().next().unwrap().is_empty()
    }

    /// `F_i(S)`: every cell gains `i` as its outermost symbol.
    pub fn prepend(&self, symbol: Symbol) -> CellSet {
        let cells = self.cells.iter().map(|c| FiniteWord::new(alloc::vec![symbol]).concat(c));
        CellSet::new(self.alphabet, cells)
    }

    /// Same set, with every cell replaced by its `N` children.
    pub fn refine(&self) -> Vec<FiniteWord> {
        self.cells
            .iter()
            .flat_map(|c| {
                (1..=self.alphabet as Symbol).map(move |s| {
                    let mut child = c.clone();
                    child.push(s);
                    child
                })
            })
            .collect()
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        CellSet::new(self.alphabet, self.cells.iter().chain(other.cells.iter()).cloned())
    }

    /// Intersection up to null boundaries: two cells meet iff one word is a
    /// prefix of the other.
    pub fn intersects(&self, other: &CellSet) -> bool {
        self.cells
            .iter()
            .any(|a| other.cells.iter().any(|b| a.is_prefix_of(b) || b.is_prefix_of(a)))
    }

    /// Whether every cell of `self` lies inside a cell of `other`.
    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.cells
            .iter()
            .all(|a| other.cells.iter().any(|b| b.is_prefix_of(a)))
    }
}

impl fmt::Display for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if c.is_empty() {
                f.write_str("K")?;
            } else {
                write!(f, "{}", c)?;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Z(ωη) × F_ω^{-1}(S) ⊂ Z(ω) × L_n(ω)` with `n = |ω|`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rectangle {
    pub base: FiniteWord,
    pub tail: FiniteWord,
    pub cells: CellSet,
}

impl Rectangle {
    pub fn new(base: FiniteWord, tail: FiniteWord, cells: CellSet) -> Self {
        Rectangle { base, tail, cells }
    }

    pub fn level(&self) -> usize {
        self.base.len()
    }

    /// The cylinder `Z(ωη)` of base words.
    pub fn cylinder(&self) -> Cylinder {
        Cylinder::new(self.base.concat(&self.tail))
    }

    /// The same set one level up, split into pieces:
    /// `(ω, aη', S) ↦ (ωa, η', F_a(S))`, and for an empty tail one piece
    /// per symbol `a`.
    pub fn raise(&self) -> Vec<Rectangle> {
        match self.tail.first() {
            Some(a) => {
                let mut base = self.base.clone();
                base.push(a);
                alloc::vec![Rectangle::new(base, self.tail.drop_front(1), self.cells.prepend(a))]
            }
            None => (1..=self.cells.alphabet() as Symbol)
                .map(|a| {
                    let mut base = self.base.clone();
                    base.push(a);
                    Rectangle::new(base, FiniteWord::empty(), self.cells.prepend(a))
                })
                .collect(),
        }
    }

    /// Pieces describing the same set at level `n ≥ |ω|`.
    pub fn raise_to(&self, level: usize) -> Vec<Rectangle> {
        let mut pieces = alloc::vec![self.clone()];
        while pieces.first().is_some_and(|p| p.level() < level) {
            pieces = pieces.iter().flat_map(Rectangle::raise).collect();
        }
        pieces
    }

    /// Disjointness up to null sets, decided at a common level.
    pub fn disjoint(&self, other: &Rectangle) -> bool {
        if !self.cylinder().intersects(&other.cylinder()) {
            return true;
        }
        let level = self.level().max(other.level());
        let a = self.raise_to(level);
        let b = other.raise_to(level);
        a.iter().all(|p| {
            b.iter().all(|q| !p.cylinder().intersects(&q.cylinder()) || !p.cells.intersects(&q.cells))
        })
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &FiniteWord| if w.is_empty() { String::from("-") } else { alloc::format!("{}", w) };
        write!(f, "[{} | {} | {}]", show(&self.base), show(&self.tail), self.cells)
    }
}

impl fmt::Debug for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A member of the semialgebra carrying `μ_∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemialgebraSet {
    Rectangle(Rectangle),
    /// `L_n^c`, of infinite measure.
    LevelComplement(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureValue {
    Finite(Rational),
    Infinite,
}

impl MeasureValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            MeasureValue::Finite(q) => Some(q),
            MeasureValue::Infinite => None,
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Finite(q) => write!(f, "{}", q),
            MeasureValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Measures attached to an `N`-map system satisfying the open set
/// condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measures {
    alphabet: usize,
}

impl Measures {
    /// Checks the open set condition on `region` before handing out the
    /// measures.
    pub fn certified(system: &SimilaritySystem, region: &Region) -> Result<Measures, MeasureError> {
        match system.check_open_set_condition(region) {
            Ok(OscVerdict::Holds { .. }) => Ok(Measures { alphabet: system.len() }),
            Ok(OscVerdict::Fails { violation, .. }) => {
                Err(MeasureError::OscNotSatisfied(alloc::format!("{:?}", violation)))
            }
            Err(e) => Err(MeasureError::OscNotSatisfied(alloc::format!("{}", e))),
        }
    }

    /// For callers that established the open set condition elsewhere.
    pub fn assume_osc(alphabet: usize) -> Measures {
        assert!(alphabet >= 2);
        Measures { alphabet }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    fn weight(&self, depth: usize) -> Rational {
        pow(&Rational::new(BigInt::one(), BigInt::from(self.alphabet)), depth)
    }

    /// `μ(S) = Σ N^{-|c|}`.
    pub fn mu(&self, s: &CellSet) -> Rational {
        s.cells().fold(Rational::zero(), |acc, c| acc + self.weight(c.len()))
    }

    /// `ν(Z(ω)) = N^{-|ω|}`.
    pub fn nu(&self, z: &Cylinder) -> Rational {
        self.weight(z.base().len())
    }

    /// `μ_∞(Z(ωη) × F_ω^{-1}(S)) = ν(Z(η)) · μ(S)`.
    pub fn mu_infinity(&self, r: &Rectangle) -> Rational {
        self.nu(&Cylinder::new(r.tail.clone())) * self.mu(&r.cells)
    }

    pub fn measure(&self, set: &SemialgebraSet) -> MeasureValue {
        match set {
            SemialgebraSet::Rectangle(r) => MeasureValue::Finite(self.mu_infinity(r)),
            SemialgebraSet::LevelComplement(_) => MeasureValue::Infinite,
        }
    }

    /// `σ̃(R)`: `(σω, η, S)` for `|ω| ≥ 1`, and `("", ση, F_{η_1}(S))`
    /// for `|ω| = 0`.
    pub fn push_sigma_tilde(&self, r: &Rectangle) -> Result<Rectangle, MeasureError> {
        if !r.base.is_empty() {
            Ok(Rectangle::new(r.base.drop_front(1), r.tail.clone(), r.cells.clone()))
        } else if let Some(a) = r.tail.first() {
            Ok(Rectangle::new(FiniteWord::empty(), r.tail.drop_front(1), r.cells.prepend(a)))
        } else {
            Err(MeasureError::NotInjectiveOnRectangle)
        }
    }

    /// Self-similarity on cells: `Σ_i μ(F_i(S)) = μ(S)`.
    pub fn self_similarity_holds(&self, s: &CellSet) -> bool {
        let total = (1..=self.alphabet as Symbol)
            .fold(Rational::zero(), |acc, i| acc + self.mu(&s.prepend(i)));
        total == self.mu(s)
    }

    /// `μ(S) = N μ(F_i(S))` for each `i`.
    pub fn scaling_holds(&self, s: &CellSet) -> bool {
        let n = Rational::from_integer(BigInt::from(self.alphabet));
        (1..=self.alphabet as Symbol).all(|i| self.mu(s) == &n * self.mu(&s.prepend(i)))
    }

    pub fn simple_function(
        &self,
        terms: Vec<(SemialgebraSet, Rational)>,
    ) -> Result<SimpleFunction, MeasureError> {
        for (i, (a, _)) in terms.iter().enumerate() {
            if let SemialgebraSet::Rectangle(r) = a {
                if r.cells.alphabet() != self.alphabet {
                    return Err(MeasureError::AlphabetMismatch {
                        expected: self.alphabet,
                        found: r.cells.alphabet(),
                    });
                }
            }
            for (j, (b, _)) in terms.iter().enumerate().skip(i + 1) {
                if !sets_disjoint(a, b) {
                    return Err(MeasureError::Overlapping { first: i, second: j });
                }
            }
        }
        Ok(SimpleFunction { terms })
    }

    /// `τ(f) = ∫ f dμ_∞ = Σ c_i μ_∞(A_i)`.
    pub fn trace(&self, f: &SimpleFunction) -> Result<Rational, MeasureError> {
        f.terms.iter().try_fold(Rational::zero(), |acc, (set, c)| match self.measure(set) {
            MeasureValue::Finite(v) => Ok(acc + c * v),
            MeasureValue::Infinite => Err(MeasureError::InfiniteMass),
        })
    }

    /// Compares `τ(f)` with `Σ c_i μ_∞(σ̃(R_i))`.
    pub fn trace_invariance_check(&self, f: &SimpleFunction) -> Result<TraceInvariance, MeasureError> {
        let before = self.trace(f)?;
        let mut after = Rational::zero();
        for (set, c) in &f.terms {
            match set {
                SemialgebraSet::Rectangle(r) => {
                    after += c * self.mu_infinity(&self.push_sigma_tilde(r)?);
                }
                SemialgebraSet::LevelComplement(_) => return Err(MeasureError::InfiniteMass),
            }
        }
        Ok(TraceInvariance { equal: before == after, before, after })
    }

    /// Random exact partitions and finite covers of random rectangles.
    pub fn semialgebra_additivity_check<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        max_depth: usize,
        trials: usize,
    ) -> AdditivityReport {
        let mut report = AdditivityReport::default();
        for _ in 0..trials {
            let r = crate::sample::rectangle(rng, self.alphabet, max_depth);
            let parts = random_partition(rng, &r, self.alphabet, max_depth + 1);
            let whole = self.mu_infinity(&r);
            let sum = parts.iter().fold(Rational::zero(), |acc, p| acc + self.mu_infinity(p));
            let pairwise = parts
                .iter()
                .enumerate()
                .all(|(i, p)| parts[i + 1..].iter().all(|q| p.disjoint(q)));
            report.partitions += 1;
            if sum != whole || !pairwise {
                report.failures += 1;
                report.first_failure.get_or_insert_with(|| alloc::format!("partition of {}", r));
            }
            // A finite cover: the partition plus one extra rectangle.
            let extra = crate::sample::rectangle(rng, self.alphabet, max_depth);
            let cover_sum = sum + self.mu_infinity(&extra);
            report.covers += 1;
            if whole > cover_sum {
                report.failures += 1;
                report.first_failure.get_or_insert_with(|| alloc::format!("cover of {}", r));
            }
        }
        report
    }
}

fn sets_disjoint(a: &SemialgebraSet, b: &SemialgebraSet) -> bool {
    match (a, b) {
        (SemialgebraSet::Rectangle(p), SemialgebraSet::Rectangle(q)) => p.disjoint(q),
        // R ⊂ L_n ⊂ L_k for n ≤ k.
        (SemialgebraSet::Rectangle(r), SemialgebraSet::LevelComplement(k))
        | (SemialgebraSet::LevelComplement(k), SemialgebraSet::Rectangle(r)) => r.level() <= *k,
        (SemialgebraSet::LevelComplement(_), SemialgebraSet::LevelComplement(_)) => false,
    }
}

/// Splits a rectangle into disjoint pieces by refining the tail by one
/// symbol or a cell into its children, recursively.
pub fn random_partition<R: Rng + ?Sized>(
    rng: &mut R,
    r: &Rectangle,
    alphabet: usize,
    max_depth: usize,
) -> Vec<Rectangle> {
    partition_rounds(rng, r, alphabet, max_depth, 3)
}

fn partition_rounds<R: Rng + ?Sized>(
    rng: &mut R,
    r: &Rectangle,
    alphabet: usize,
    max_depth: usize,
    rounds: usize,
) -> Vec<Rectangle> {
    let deep = r.tail.len() >= max_depth && r.cells.cells().all(|c| c.len() >= max_depth);
    if rounds == 0 || deep || rng.gen_range(0..3) == 0 {
        return alloc::vec![r.clone()];
    }
    let pieces: Vec<Rectangle> = if rng.gen_bool(0.5) && r.tail.len() < max_depth {
        (1..=alphabet as Symbol)
            .map(|s| {
                let mut tail = r.tail.clone();
                tail.push(s);
                Rectangle::new(r.base.clone(), tail, r.cells.clone())
            })
            .collect()
    } else {
        let cells: Vec<FiniteWord> = r.cells.cells().cloned().collect();
        let i = rng.gen_range(0..cells.len());
        if cells[i].len() >= max_depth {
            return alloc::vec![r.clone()];
        }
        let rest = CellSet::new(alphabet, cells.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.clone()));
        let mut out: Vec<Rectangle> = (1..=alphabet as Symbol)
            .map(|s| {
                let mut child = cells[i].clone();
                child.push(s);
                Rectangle::new(r.base.clone(), r.tail.clone(), CellSet::cell(alphabet, child))
            })
            .collect();
        if !rest.is_empty() {
            out.push(Rectangle::new(r.base.clone(), r.tail.clone(), rest));
        }
        out
    };
    pieces
        .iter()
        .flat_map(|p| partition_rounds(rng, p, alphabet, max_depth, rounds - 1))
        .collect()
}

/// `Σ c_i 1_{A_i}` with pairwise disjoint `A_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFunction {
    terms: Vec<(SemialgebraSet, Rational)>,
}

impl SimpleFunction {
    pub fn terms(&self) -> &[(SemialgebraSet, Rational)] {
        &self.terms
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceInvariance {
    pub before: Rational,
    pub after: Rational,
    pub equal: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdditivityReport {
    pub partitions: usize,
    pub covers: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}
