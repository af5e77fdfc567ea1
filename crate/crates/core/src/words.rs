//! Symbolic dynamics on the one-sided full shift over `{1, ..., N}`.
//!
//! Points of the shift space are represented exactly as eventually periodic
//! words `u v v v ...`, stored in a canonical form: the period is primitive
//! and the preperiod is as short as possible. Two [`InfiniteWord`]s are equal
//! as sequences iff they are equal as Rust values.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// A letter of the alphabet `{1, ..., N}`. Zero is never a valid symbol.
pub type Symbol = u8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordError {
    EmptyPeriod,
    /// Symbol outside `1..=alphabet`.
    SymbolOutOfRange { symbol: u32, alphabet: usize },
    Parse { column: usize, message: String },
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::EmptyPeriod => f.write_str("infinite word needs a non-empty period"),
            WordError::SymbolOutOfRange { symbol, alphabet } => {
                write!(f, "symbol {} outside alphabet 1..={}", symbol, alphabet)
            }
            WordError::Parse { column, message } => {
                write!(f, "column {}: {}", column, message)
            }
        }
    }
}

impl core::error::Error for WordError {}

fn check_symbols(symbols: &[Symbol], alphabet: usize) -> Result<(), WordError> {
    match symbols.iter().find(|&&s| s == 0 || s as usize > alphabet) {
        Some(&s) => Err(WordError::SymbolOutOfRange { symbol: s as u32, alphabet }),
        None => Ok(()),
    }
}

/// An element of `W^*`. The empty word is allowed.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteWord(Vec<Symbol>);

impl FiniteWord {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        FiniteWord(symbols)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn from_slice(symbols: &[Symbol]) -> Self {
        FiniteWord(symbols.to_vec())
    }

    /// Constant word `s^len`.
    pub fn repeat(symbol: Symbol, len: usize) -> Self {
        FiniteWord(alloc::vec![symbol; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    pub fn push(&mut self, symbol: Symbol) {
        self.0.push(symbol);
    }

    pub fn reversed(&self) -> FiniteWord {
        FiniteWord(self.0.iter().rev().copied().collect())
    }

    /// First `n` symbols (the whole word if shorter).
    pub fn prefix(&self, n: usize) -> FiniteWord {
        FiniteWord(self.0[..n.min(self.len())].to_vec())
    }

    /// The word with its first `k` symbols removed.
    pub fn drop_front(&self, k: usize) -> FiniteWord {
        FiniteWord(self.0[k.min(self.len())..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &FiniteWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn check_alphabet(&self, alphabet: usize) -> Result<(), WordError> {
        check_symbols(&self.0, alphabet)
    }

    /// All words of length `len` over `1..=alphabet` in lexicographic order.
    pub fn all_of_length(alphabet: usize, len: usize) -> Vec<FiniteWord> {
        let mut out = alloc::vec![FiniteWord::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * alphabet);
            for w in &out {
                for s in 1..=alphabet as Symbol {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// All words of length `<= max_len`, ordered by length then
    /// lexicographically.
    pub fn all_up_to(alphabet: usize, max_len: usize) -> Vec<FiniteWord> {
        (0..=max_len)
            .flat_map(|len| Self::all_of_length(alphabet, len))
            .collect()
    }
}

fn write_symbols(f: &mut fmt::Formatter<'_>, symbols: &[Symbol], commas: bool) -> fmt::Result {
    for (i, s) in symbols.iter().enumerate() {
        if commas && i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", s)?;
    }
    Ok(())
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0, self.0.iter().any(|&s| s > 9))
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

/// Parses a run of symbols starting at `offset` (1-based column of the
/// first character, for diagnostics).
fn parse_symbols(text: &str, offset: usize) -> Result<Vec<Symbol>, WordError> {
    let err = |col: usize, message: &str| WordError::Parse {
        column: col,
        message: message.to_string(),
    };
    if text.contains(',') {
        let mut out = Vec::new();
        let mut col = offset;
        for part in text.split(',') {
            let v: u8 = part
                .trim()
                .parse()
                .map_err(|_| err(col, "expected a symbol between 1 and 255"))?;
            if v == 0 {
                return Err(err(col, "symbols start at 1"));
            }
            out.push(v);
            col += part.len() + 1;
        }
        Ok(out)
    } else {
        text.chars()
            .enumerate()
            .map(|(i, c)| match c.to_digit(10) {
                Some(0) => Err(err(offset + i, "symbols start at 1")),
                Some(d) => Ok(d as Symbol),
                None => Err(err(offset + i, "expected a digit")),
            })
            .collect()
    }
}

impl FromStr for FiniteWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t == "-" {
            return Ok(FiniteWord::empty());
        }
        parse_symbols(t, 1).map(FiniteWord)
    }
}

/// An eventually periodic point `preperiod · period^∞` of `X = W^∞`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfiniteWord {
    preperiod: Vec<Symbol>,
    period: Vec<Symbol>,
}

/// Borrowed view of an eventually periodic word whose period is read from a
/// rotation offset; shifting never allocates.
#[derive(Clone, Copy)]
struct ShiftedView<'a> {
    preperiod: &'a [Symbol],
    period: &'a [Symbol],
    rotation: usize,
}

impl PartialEq for ShiftedView<'_> {
    fn eq(&self, other: &Self) -> bool {
        let p = self.period.len();
        self.preperiod == other.preperiod
            && p == other.period.len()
            && (0..p).all(|i| {
                self.period[(i + self.rotation) % p] == other.period[(i + other.rotation) % p]
            })
    }
}

impl InfiniteWord {
    pub fn new(preperiod: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self, WordError> {
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        check_symbols(&preperiod, Symbol::MAX as usize)?;
        check_symbols(&period, Symbol::MAX as usize)?;
        Ok(Self::canonical(preperiod, period))
    }

    pub fn from_parts(preperiod: &FiniteWord, period: &FiniteWord) -> Result<Self, WordError> {
        Self::new(preperiod.0.clone(), period.0.clone())
    }

    /// The constant word `s s s ...`.
    pub fn constant(symbol: Symbol) -> Self {
        Self::canonical(Vec::new(), alloc::vec![symbol])
    }

    /// The purely periodic word `period^∞`.
    pub fn periodic(period: &[Symbol]) -> Result<Self, WordError> {
        Self::new(Vec::new(), period.to_vec())
    }

    fn canonical(mut preperiod: Vec<Symbol>, mut period: Vec<Symbol>) -> Self {
        let p = period.len();
        let primitive = (1..=p)
            .find(|&d| p.is_multiple_of(d) && (d..p).all(|i| period[i] == period[i - d]))
            .unwrap_or(p);
        period.truncate(primitive);
        while let (Some(&last), Some(&tail)) = (preperiod.last(), period.last()) {
            if last != tail {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        InfiniteWord { preperiod, period }
    }

    /// Re-derives the canonical form; the identity on every value of this
    /// type.
    pub fn canonicalize(&self) -> Self {
        Self::canonical(self.preperiod.clone(), self.period.clone())
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    /// Length of the primitive period.
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn check_alphabet(&self, alphabet: usize) -> Result<(), WordError> {
        check_symbols(&self.preperiod, alphabet)?;
        check_symbols(&self.period, alphabet)
    }

    /// The `i`-th symbol, 1-based. Panics on `i == 0`.
    pub fn symbol_at(&self, i: usize) -> Symbol {
        assert!(i >= 1, "word positions are 1-based");
        let j = i - 1;
        if j < self.preperiod.len() {
            self.preperiod[j]
        } else {
            self.period[(j - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn first(&self) -> Symbol {
        self.symbol_at(1)
    }

    /// `x(n) = x_1 ... x_n`.
    pub fn prefix(&self, n: usize) -> FiniteWord {
        FiniteWord((1..=n).map(|i| self.symbol_at(i)).collect())
    }

    /// Symbols `x_{from+1} ... x_{to}`.
    pub fn slice(&self, from: usize, to: usize) -> FiniteWord {
        FiniteWord((from + 1..=to).map(|i| self.symbol_at(i)).collect())
    }

    fn view(&self, m: usize) -> ShiftedView<'_> {
        if m <= self.preperiod.len() {
            ShiftedView { preperiod: &self.preperiod[m..], period: &self.period, rotation: 0 }
        } else {
            ShiftedView {
                preperiod: &[],
                period: &self.period,
                rotation: (m - self.preperiod.len()) % self.period.len(),
            }
        }
    }

    /// `σ(x_1 x_2 ...) = x_2 x_3 ...`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    /// `σ^m`.
    pub fn shift_by(&self, m: usize) -> Self {
        let v = self.view(m);
        let mut period = v.period.to_vec();
        period.rotate_left(v.rotation);
        InfiniteWord { preperiod: v.preperiod.to_vec(), period }
    }

    /// `s · x`.
    pub fn prepend(&self, symbol: Symbol) -> Self {
        let mut pre = Vec::with_capacity(self.preperiod.len() + 1);
        pre.push(symbol);
        pre.extend_from_slice(&self.preperiod);
        Self::canonical(pre, self.period.clone())
    }

    /// `w · x`.
    pub fn prepend_word(&self, word: &FiniteWord) -> Self {
        let mut pre = word.0.clone();
        pre.extend_from_slice(&self.preperiod);
        Self::canonical(pre, self.period.clone())
    }

    pub fn in_cylinder(&self, cylinder: &Cylinder) -> bool {
        cylinder
            .base()
            .symbols()
            .iter()
            .enumerate()
            .all(|(i, &s)| self.symbol_at(i + 1) == s)
    }

    /// Whether `σ^m(self) = σ^n(other)`, decided exactly.
    pub fn shifted_eq(&self, m: usize, other: &InfiniteWord, n: usize) -> bool {
        self.view(m) == other.view(n)
    }

    /// Minimal `(m, n)` with `σ^m(x) = σ^n(y)`, ordered by `m + n` and then
    /// by `m`. `None` iff the two words are not tail equivalent.
    pub fn tail_equivalent(x: &InfiniteWord, y: &InfiniteWord) -> Option<(usize, usize)> {
        if x.period.len() != y.period.len() {
            return None;
        }
        // Any witness can be normalized to m = |u_x| + j (j < p), n = |u_y|.
        let bound = x.preperiod.len() + y.preperiod.len() + x.period.len();
        (0..=bound).find_map(|total| {
            (0..=total)
                .map(|m| (m, total - m))
                .find(|&(m, n)| x.shifted_eq(m, y, n))
        })
    }

    /// Minimal `(m, n)` with `m - n = degree` and `σ^m(x) = σ^n(y)`, ordered
    /// by `m + n`.
    pub fn witness_with_degree(
        x: &InfiniteWord,
        degree: i64,
        y: &InfiniteWord,
    ) -> Option<(usize, usize)> {
        let n_lo = (-degree).max(0);
        // Past both preperiods the comparison no longer depends on n.
        let n_hi = (y.preperiod.len() as i64)
            .max(x.preperiod.len() as i64 - degree)
            .max(n_lo);
        (n_lo..=n_hi)
            .map(|n| ((n + degree) as usize, n as usize))
            .find(|&(m, n)| x.shifted_eq(m, y, n))
    }
}

impl fmt::Display for InfiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let commas = self.preperiod.iter().chain(&self.period).any(|&s| s > 9);
        write_symbols(f, &self.preperiod, commas)?;
        f.write_str("(")?;
        write_symbols(f, &self.period, commas)?;
        f.write_str(")")
    }
}

impl fmt::Debug for InfiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for InfiniteWord {
    type Err = WordError;

    /// Parses `u(v)`, e.g. `12(21)` or `(1)`; comma-separated symbols for
    /// alphabets larger than nine, e.g. `3,10(11,2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        let err = |column: usize, message: &str| WordError::Parse {
            column,
            message: message.to_string(),
        };
        let open = t.find('(').ok_or_else(|| err(lead + t.len() + 1, "expected '('"))?;
        if !t.ends_with(')') {
            return Err(err(lead + t.len() + 1, "expected ')' at end of word"));
        }
        let close = t.len() - 1;
        if t[open + 1..close].contains('(') || t[open + 1..close].contains(')') {
            return Err(err(lead + open + 2, "nested parentheses"));
        }
        let pre_text = t[..open].trim_end_matches(',');
        let pre = if pre_text.is_empty() {
            Vec::new()
        } else {
            parse_symbols(pre_text, lead + 1)?
        };
        let per_text = &t[open + 1..close];
        if per_text.trim().is_empty() {
            return Err(err(lead + open + 2, "empty period"));
        }
        let per = parse_symbols(per_text, lead + open + 2)?;
        InfiniteWord::new(pre, per)
    }
}

/// The clopen cylinder `Z(ω) = { x : x_i = ω_i, i ≤ |ω| }`; `Z("") = X`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cylinder(FiniteWord);

impl Cylinder {
    pub fn new(base: FiniteWord) -> Self {
        Cylinder(base)
    }

    pub fn full() -> Self {
        Cylinder(FiniteWord::empty())
    }

    pub fn base(&self) -> &FiniteWord {
        &self.0
    }

    pub fn contains(&self, x: &InfiniteWord) -> bool {
        x.in_cylinder(self)
    }

    /// Cylinders are nested or disjoint; they meet iff one base is a prefix
    /// of the other.
    pub fn intersects(&self, other: &Cylinder) -> bool {
        self.0.is_prefix_of(&other.0) || other.0.is_prefix_of(&self.0)
    }
}

/// Finite prefix of the word obtained by concatenating every finite word of
/// length `1..=max_len` in length-then-lexicographic order, continued by the
/// constant symbol `1` wherever an infinite word is required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcatenationWord {
    prefix: FiniteWord,
}

impl ConcatenationWord {
    pub fn new(alphabet: usize, max_len: usize) -> Self {
        assert!(max_len >= 1 && alphabet >= 1);
        let mut symbols = Vec::new();
        for w in FiniteWord::all_up_to(alphabet, max_len).iter().skip(1) {
            symbols.extend_from_slice(w.symbols());
        }
        ConcatenationWord { prefix: FiniteWord(symbols) }
    }

    pub fn prefix(&self) -> &FiniteWord {
        &self.prefix
    }

    /// Exact horizon: beyond this depth only the continuation convention
    /// speaks.
    pub fn horizon(&self) -> usize {
        self.prefix.len()
    }

    pub fn to_infinite(&self) -> InfiniteWord {
        InfiniteWord::constant(1).prepend_word(&self.prefix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> InfiniteWord {
        s.parse().unwrap()
    }

    fn fw(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(w("11(1)"), w("(1)"));
        assert_eq!(w("(1212)"), w("(12)"));
        assert_eq!(w("1(21)"), w("(12)"));
        assert_eq!(w("2(1)").preperiod(), &[2]);
        assert_eq!(w("2121(112)").to_string(), "2121(112)");
        assert_eq!(w("2121(112)").period_len(), 3);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(w("(1)").shift(), w("(1)"));
        assert_eq!(w("2(1)").shift(), w("(1)"));
        assert_eq!(w("(12)").shift(), w("(21)"));
        let x = w("(12)");
        for i in 1..=20 {
            assert_eq!(x.shift().symbol_at(i), x.symbol_at(i + 1));
        }
    }

    #[test]
    fn symbols_and_prefixes() {
        assert_eq!(w("(12)").symbol_at(3), 1);
        assert_eq!(w("2(1)").symbol_at(1), 2);
        assert_eq!(w("2(1)").symbol_at(5), 1);
        assert_eq!(w("(12)").prefix(4), fw("1212"));
        assert_eq!(w("(12)").prefix(0), FiniteWord::empty());
        assert_eq!(w("3(21)").prefix(3), fw("321"));
    }

    #[test]
    fn cylinder_membership() {
        assert!(w("(1)").in_cylinder(&Cylinder::new(fw("11"))));
        assert!(!w("2(1)").in_cylinder(&Cylinder::new(fw("1"))));
        assert!(w("2(1)").in_cylinder(&Cylinder::full()));
    }

    #[test]
    fn tail_equivalence_examples() {
        assert_eq!(InfiniteWord::tail_equivalent(&w("(1)"), &w("(1)")), Some((0, 0)));
        let (x, y) = (w("(12)"), w("(21)"));
        let (m, n) = InfiniteWord::tail_equivalent(&x, &y).unwrap();
        assert_eq!((m, n), (0, 1));
        assert_eq!(x.shift_by(m), y.shift_by(n));
        assert_eq!(x.shift(), y);
        assert_eq!(InfiniteWord::tail_equivalent(&w("(1)"), &w("(2)")), None);
    }

    #[test]
    fn tail_equivalence_matches_brute_force() {
        let words = ["(12)", "(21)", "1(21)", "22(1)", "(1)", "(2)", "212(112)", "(121)", "3(211)"];
        for a in words {
            for b in words {
                let (x, y) = (w(a), w(b));
                let mut brute = None;
                'outer: for total in 0..=16usize {
                    for m in 0..=total {
                        let n = total - m;
                        if (1..=32).all(|i| x.symbol_at(m + i) == y.symbol_at(n + i)) {
                            brute = Some((m, n));
                            break 'outer;
                        }
                    }
                }
                assert_eq!(InfiniteWord::tail_equivalent(&x, &y), brute, "{} {}", a, b);
            }
        }
    }

    #[test]
    fn degree_witnesses() {
        let (x, y) = (w("(12)"), w("(21)"));
        assert_eq!(InfiniteWord::witness_with_degree(&x, 1, &y), Some((1, 0)));
        assert_eq!(InfiniteWord::witness_with_degree(&x, 0, &y), None);
        assert_eq!(InfiniteWord::witness_with_degree(&x, -1, &y), Some((0, 1)));
        assert_eq!(
            InfiniteWord::witness_with_degree(&w("(1)"), 1, &w("(1)")),
            Some((1, 0))
        );
        assert_eq!(
            InfiniteWord::witness_with_degree(&w("12(1)"), 1, &w("2(1)")),
            Some((1, 0))
        );
    }

    #[test]
    fn concatenation_words() {
        assert_eq!(ConcatenationWord::new(2, 1).prefix(), &fw("12"));
        assert_eq!(ConcatenationWord::new(2, 2).prefix(), &fw("1211122122"));
        assert_eq!(ConcatenationWord::new(3, 1).prefix(), &fw("123"));
        let c = ConcatenationWord::new(2, 2);
        let x = c.to_infinite();
        assert_eq!(x.prefix(10), fw("1211122122"));
        assert_eq!(x.symbol_at(11), 1);
        assert_eq!(x.symbol_at(40), 1);
    }

    #[test]
    fn text_round_trip_and_errors() {
        for s in ["12(21)", "(1)", "2121(112)"] {
            assert_eq!(w(s).to_string(), s);
        }
        let big = InfiniteWord::new(alloc::vec![3, 10], alloc::vec![11, 2]).unwrap();
        assert_eq!(big.to_string(), "3,10(11,2)");
        assert_eq!(big.to_string().parse::<InfiniteWord>().unwrap(), big);
        assert!(matches!("12(".parse::<InfiniteWord>(), Err(WordError::Parse { .. })));
        assert!(matches!("12()".parse::<InfiniteWord>(), Err(WordError::Parse { .. })));
        assert!(matches!("1a(2)".parse::<InfiniteWord>(), Err(WordError::Parse { column: 2, .. })));
        assert!(matches!("10(2)".parse::<InfiniteWord>(), Err(WordError::Parse { .. })));
    }

    #[test]
    fn alphabet_checks() {
        assert!(w("12(3)").check_alphabet(2).is_err());
        assert!(w("12(2)").check_alphabet(2).is_ok());
        assert!(fw("13").check_alphabet(3).is_ok());
    }

    fn arb_word(alphabet: u8) -> impl Strategy<Value = InfiniteWord> {
        (
            proptest::collection::vec(1..=alphabet, 0..6),
            proptest::collection::vec(1..=alphabet, 1..6),
        )
            .prop_map(|(u, v)| InfiniteWord::new(u, v).unwrap())
    }

    proptest! {
        #[test]
        fn canonicalize_idempotent(u in proptest::collection::vec(1u8..=3, 0..8),
                                   v in proptest::collection::vec(1u8..=3, 1..8)) {
            let raw = InfiniteWord::new(u.clone(), v.clone()).unwrap();
            prop_assert_eq!(raw.canonicalize(), raw.clone());
            // same sequence as the raw input
            for i in 0..40 {
                let expect = if i < u.len() { u[i] } else { v[(i - u.len()) % v.len()] };
                prop_assert_eq!(raw.symbol_at(i + 1), expect);
            }
        }

        #[test]
        fn shift_has_n_preimages(x in arb_word(3)) {
            for s in 1..=3u8 {
                prop_assert_eq!(x.prepend(s).shift(), x.clone());
            }
            let mut pre: Vec<_> = (1..=3u8).map(|s| x.prepend(s)).collect();
            pre.dedup();
            prop_assert_eq!(pre.len(), 3);
        }

        #[test]
        fn witnesses_verify_deeply(x in arb_word(2), y in arb_word(2)) {
            if let Some((m, n)) = InfiniteWord::tail_equivalent(&x, &y) {
                prop_assert_eq!(x.shift_by(m).prefix(64), y.shift_by(n).prefix(64));
                let (n2, m2) = InfiniteWord::tail_equivalent(&y, &x).unwrap();
                prop_assert_eq!(m + n, m2 + n2);
            } else {
                prop_assert!(InfiniteWord::tail_equivalent(&y, &x).is_none());
            }
        }
    }
}
