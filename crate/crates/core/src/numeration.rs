//! Numeration systems, greedy representations and base-`p` digit tuples.
//!
//! Representations are written most-significant digit first. The
//! representation of 0 is the empty word.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::Alphabet;

/// Rule used to extend a numeration system beyond its explicit table.
#[derive(Clone)]
pub enum Extension {
    /// `U_n = p^n`.
    Base(u64),
    /// `U_n = c_0 U_{n-1} + c_1 U_{n-2} + ...`; needs at least `coefficients.len()` initial terms.
    LinearRecurrence(Vec<u64>),
    /// `U_n = f(n)` for every `n` not covered by the table.
    ClosedForm(Arc<dyn Fn(usize) -> Option<u64> + Send + Sync>),
    /// Only the explicit table is available.
    Table,
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extension::Base(p) => write!(f, "Base({p})"),
            Extension::LinearRecurrence(c) => write!(f, "LinearRecurrence({c:?})"),
            Extension::ClosedForm(_) => f.write_str("ClosedForm(..)"),
            Extension::Table => f.write_str("Table"),
        }
    }
}

/// A strictly increasing sequence `U` with `U_0 = 1` and bounded ratios.
///
/// All terms representable in a `u64` are materialized at construction.
#[derive(Debug, Clone)]
pub struct NumerationSystem {
    terms: Vec<u64>,
    digit_bound: u64,
    extension: Extension,
}

const MAX_TERMS: usize = 128;

impl NumerationSystem {
    pub fn base(p: u64) -> Result<NumerationSystem> {
        if p < 2 {
            return Err(Error::InvalidBase(p));
        }
        NumerationSystem::new(vec![1], Extension::Base(p))
    }

    /// The system `1, 2, 3, 5, 8, ...` (`U_{n+2} = U_{n+1} + U_n`, `U_1 = 2`).
    pub fn fibonacci() -> NumerationSystem {
        NumerationSystem::new(vec![1, 2], Extension::LinearRecurrence(vec![1, 1]))
            .expect("Fibonacci system is valid")
    }

    pub fn new(initial: Vec<u64>, extension: Extension) -> Result<NumerationSystem> {
        if initial.first() != Some(&1) {
            return Err(Error::InvalidNumeration("U_0 must be 1".into()));
        }
        if let Extension::LinearRecurrence(c) = &extension {
            if c.is_empty() || initial.len() < c.len() {
                return Err(Error::InvalidNumeration(
                    "linear recurrence needs as many initial terms as coefficients".into(),
                ));
            }
        }
        let mut terms = initial;
        while terms.len() < MAX_TERMS {
            let n = terms.len();
            let next = match &extension {
                Extension::Base(p) => terms[n - 1].checked_mul(*p),
                Extension::LinearRecurrence(c) => c.iter().enumerate().try_fold(0u64, |acc, (i, &ci)| {
                    ci.checked_mul(terms[n - 1 - i]).and_then(|t| acc.checked_add(t))
                }),
                Extension::ClosedForm(f) => f(n),
                Extension::Table => None,
            };
            match next {
                Some(v) => terms.push(v),
                None => break,
            }
        }
        let mut digit_bound = 1;
        for w in terms.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidNumeration(format!("not strictly increasing at {} -> {}", w[0], w[1])));
            }
            digit_bound = digit_bound.max(w[1].div_ceil(w[0]));
        }
        if let Extension::Base(p) = extension {
            digit_bound = p;
        }
        Ok(NumerationSystem { terms, digit_bound, extension })
    }

    /// `⌈c⌉`, the size of the digit alphabet.
    pub fn digit_bound(&self) -> u64 {
        self.digit_bound
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    pub fn as_base(&self) -> Option<u64> {
        match self.extension {
            Extension::Base(p) => Some(p),
            _ => None,
        }
    }
}

/// Digits of a representation, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Representation {
    pub digits: Vec<u64>,
}

impl Representation {
    pub fn new(digits: Vec<u64>) -> Self {
        Representation { digits }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Parse `"0101"` (one digit per character) or `"1,12,3"` for large digits.
    pub fn parse(text: &str) -> Result<Representation> {
        let text = text.trim();
        let bad = |c: usize| Error::Parse { line: 1, column: c + 1, message: format!("bad digit in `{text}`") };
        if text.is_empty() || text == "ε" {
            return Ok(Representation::default());
        }
        let digits = if text.contains(',') {
            text.split(',')
                .enumerate()
                .map(|(i, t)| t.trim().parse::<u64>().map_err(|_| bad(i)))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.chars()
                .enumerate()
                .map(|(i, c)| c.to_digit(10).map(u64::from).ok_or_else(|| bad(i)))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Representation { digits })
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("ε");
        }
        if self.digits.iter().all(|&d| d < 10) {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(u64::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// Greedy (Euclidean) `U`-representation of `x`; `ρ(0) = ε`.
pub fn greedy_rep(system: &NumerationSystem, x: u64) -> Result<Representation> {
    if x == 0 {
        return Ok(Representation::default());
    }
    if let Some(p) = system.as_base() {
        let mut digits = Vec::new();
        let mut y = x;
        while y > 0 {
            digits.push(y % p);
            y /= p;
        }
        digits.reverse();
        return Ok(Representation { digits });
    }
    let terms = system.terms();
    // i is the unique index with U_i <= x < U_{i+1}
    // past the last materialized term the leading digit absorbs the rest
    let i = terms.iter().position(|&u| u > x).map_or(terms.len() - 1, |k| k - 1);
    if x / terms[i] >= system.digit_bound() {
        return Err(Error::InvalidNumeration(format!("table exhausted before {x}")));
    }
    let mut rest = x;
    let mut digits = Vec::with_capacity(i + 1);
    for j in (0..=i).rev() {
        digits.push(rest / terms[j]);
        rest %= terms[j];
    }
    Ok(Representation { digits })
}

/// `Σ a_j U_j`; leading zeros are allowed.
pub fn value(system: &NumerationSystem, r: &Representation) -> Result<u64> {
    let n = r.digits.len();
    let mut total: u64 = 0;
    for (k, &d) in r.digits.iter().enumerate() {
        if d >= system.digit_bound() {
            return Err(Error::DigitOutOfRange { digit: d, base: system.digit_bound() });
        }
        if d == 0 {
            continue;
        }
        let j = n - 1 - k;
        let u = *system.terms().get(j).ok_or(Error::Overflow("numeration value"))?;
        total = d
            .checked_mul(u)
            .and_then(|t| total.checked_add(t))
            .ok_or(Error::Overflow("numeration value"))?;
    }
    Ok(total)
}

/// Prepend zeros up to length `n`.
pub fn pad(r: &Representation, n: usize) -> Result<Representation> {
    if n < r.len() {
        return Err(Error::PadTooShort { requested: n, len: r.len() });
    }
    let mut digits = vec![0; n - r.len()];
    digits.extend_from_slice(&r.digits);
    Ok(Representation { digits })
}

/// A word over `{0,…,p-1}^d`, most significant position first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleWord {
    dim: usize,
    symbols: Vec<Vec<u64>>,
}

impl TupleWord {
    pub fn new(dim: usize, symbols: Vec<Vec<u64>>) -> Result<TupleWord> {
        if dim == 0 {
            return Err(Error::InvalidNumeration("dimension must be at least 1".into()));
        }
        if symbols.iter().any(|s| s.len() != dim) {
            return Err(Error::InvalidNumeration("tuple arity differs from dimension".into()));
        }
        Ok(TupleWord { dim, symbols })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbols(&self) -> &[Vec<u64>] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index of each tuple in [`tuple_alphabet`] order (first component most significant).
    pub fn symbol_indices(&self, p: u64) -> Vec<usize> {
        self.symbols.iter().map(|s| tuple_index(s, p)).collect()
    }

    /// Parse `"(0,1)(0,0)(1,1)"`.
    pub fn parse(text: &str) -> Result<TupleWord> {
        let text = text.trim();
        let err = |column: usize, message: &str| Error::Parse { line: 1, column, message: message.to_string() };
        let mut symbols = Vec::new();
        let mut rest = text;
        let mut col = 1;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(err(col, "expected `(`"));
            }
            let close = rest.find(')').ok_or_else(|| err(col, "unclosed tuple"))?;
            let comps = rest[1..close]
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| err(col, "bad tuple component")))
                .collect::<Result<Vec<_>>>()?;
            symbols.push(comps);
            col += close + 1;
            rest = rest[close + 1..].trim_start();
        }
        let dim = symbols.first().map_or(1, Vec::len);
        TupleWord::new(dim, symbols)
    }
}

impl fmt::Display for TupleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("ε");
        }
        for s in &self.symbols {
            f.write_str(&tuple_symbol(s))?;
        }
        Ok(())
    }
}

pub(crate) fn tuple_symbol(t: &[u64]) -> String {
    let parts: Vec<String> = t.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

pub(crate) fn tuple_index(t: &[u64], p: u64) -> usize {
    t.iter().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

pub(crate) fn tuple_of_index(mut idx: usize, p: u64, dim: usize) -> Vec<u64> {
    let mut t = vec![0; dim];
    for slot in t.iter_mut().rev() {
        *slot = (idx % p as usize) as u64;
        idx /= p as usize;
    }
    t
}

/// Componentwise base-`p` digits, zero-padded to a common length.
pub fn encode_tuple(p: u64, v: &[u64]) -> Result<TupleWord> {
    if p < 2 {
        return Err(Error::InvalidBase(p));
    }
    if v.is_empty() {
        return Err(Error::InvalidNumeration("dimension must be at least 1".into()));
    }
    let base = NumerationSystem::base(p)?;
    let reps = v.iter().map(|&x| greedy_rep(&base, x)).collect::<Result<Vec<_>>>()?;
    let len = reps.iter().map(Representation::len).max().unwrap_or(0);
    let padded = reps.iter().map(|r| pad(r, len)).collect::<Result<Vec<_>>>()?;
    let symbols = (0..len).map(|i| padded.iter().map(|r| r.digits[i]).collect()).collect();
    TupleWord::new(v.len(), symbols)
}

/// Inverse of [`encode_tuple`], up to leading all-zero tuples.
pub fn decode_tuple(p: u64, t: &TupleWord) -> Result<Vec<u64>> {
    if p < 2 {
        return Err(Error::InvalidBase(p));
    }
    let mut out = vec![0u64; t.dim()];
    for s in t.symbols() {
        for (acc, &d) in out.iter_mut().zip(s) {
            if d >= p {
                return Err(Error::DigitOutOfRange { digit: d, base: p });
            }
            *acc = acc
                .checked_mul(p)
                .and_then(|x| x.checked_add(d))
                .ok_or(Error::Overflow("decode_tuple"))?;
        }
    }
    Ok(out)
}

/// Largest digit or digit-tuple alphabet built by [`digit_alphabet`] and [`tuple_alphabet`].
pub const MAX_DIGIT_SYMBOLS: usize = 1 << 16;

/// Alphabet `0, 1, …, p-1`.
pub fn digit_alphabet(p: u64) -> Result<Arc<Alphabet>> {
    if p < 2 {
        return Err(Error::InvalidBase(p));
    }
    if p > MAX_DIGIT_SYMBOLS as u64 {
        return Err(Error::OutOfRange(format!("base {p} exceeds {MAX_DIGIT_SYMBOLS} digits")));
    }
    Alphabet::new((0..p).map(|d| d.to_string()))
}

/// Alphabet of `d`-tuples of base-`p` digits, in [`TupleWord::symbol_indices`] order.
/// For `d = 1` this is [`digit_alphabet`].
pub fn tuple_alphabet(p: u64, dim: usize) -> Result<Arc<Alphabet>> {
    if dim <= 1 {
        return digit_alphabet(p);
    }
    if p < 2 {
        return Err(Error::InvalidBase(p));
    }
    let count = usize::try_from(p)
        .ok()
        .zip(u32::try_from(dim).ok())
        .and_then(|(p, d)| p.checked_pow(d))
        .filter(|&c| c <= MAX_DIGIT_SYMBOLS)
        .ok_or_else(|| Error::OutOfRange(format!("{dim}-tuples of base-{p} digits exceed {MAX_DIGIT_SYMBOLS} symbols")))?;
    Alphabet::new((0..count).map(|i| tuple_symbol(&tuple_of_index(i, p, dim))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(s: &str) -> Representation {
        Representation::parse(s).unwrap()
    }

    #[test]
    fn greedy_representations() {
        let b2 = NumerationSystem::base(2).unwrap();
        assert_eq!(greedy_rep(&b2, 5).unwrap(), rep("101"));
        assert_eq!(greedy_rep(&b2, 0).unwrap(), Representation::default());
        let fib = NumerationSystem::fibonacci();
        assert_eq!(&fib.terms()[..5], &[1, 2, 3, 5, 8]);
        assert_eq!(fib.digit_bound(), 2);
        assert_eq!(greedy_rep(&fib, 4).unwrap(), rep("101"));
        assert_eq!(greedy_rep(&fib, 0).unwrap().len(), 0);
    }

    #[test]
    fn greedy_reaches_past_the_last_term() {
        let fib = NumerationSystem::fibonacci();
        for x in [u64::MAX, u64::MAX - 1, *fib.terms().last().unwrap()] {
            let r = greedy_rep(&fib, x).unwrap();
            assert_eq!(value(&fib, &r).unwrap(), x);
            assert_eq!(r.digits[0], 1);
        }
    }

    #[test]
    fn greedy_matches_division_oracle_for_fibonacci() {
        let fib = NumerationSystem::fibonacci();
        for x in 1..2000u64 {
            // oracle: largest term first, repeated subtraction
            let mut terms: Vec<u64> = fib.terms().iter().copied().filter(|&u| u <= x).collect();
            terms.reverse();
            let mut rest = x;
            let mut digits = Vec::new();
            for u in terms {
                let mut d = 0;
                while rest >= u {
                    rest -= u;
                    d += 1;
                }
                digits.push(d);
            }
            assert_eq!(greedy_rep(&fib, x).unwrap().digits, digits, "x = {x}");
        }
    }

    #[test]
    fn values() {
        let b2 = NumerationSystem::base(2).unwrap();
        let b3 = NumerationSystem::base(3).unwrap();
        assert_eq!(value(&b2, &rep("0101")).unwrap(), 5);
        assert_eq!(value(&b3, &rep("20")).unwrap(), 6);
        assert_eq!(value(&b2, &rep("")).unwrap(), 0);
        assert_eq!(value(&b2, &rep("2")), Err(Error::DigitOutOfRange { digit: 2, base: 2 }));
    }

    #[test]
    fn tuples() {
        let t = encode_tuple(2, &[1, 5]).unwrap();
        assert_eq!(t.to_string(), "(0,1)(0,0)(1,1)");
        assert!(encode_tuple(2, &[0, 0]).unwrap().is_empty());
        assert_eq!(encode_tuple(3, &[4, 2]).unwrap().to_string(), "(1,0)(1,2)");
        assert_eq!(decode_tuple(2, &TupleWord::parse("(0,1)(0,0)(1,1)").unwrap()).unwrap(), vec![1, 5]);
        assert_eq!(decode_tuple(2, &TupleWord::parse("(0,0)(0,0)").unwrap()).unwrap(), vec![0, 0]);
        assert_eq!(decode_tuple(3, &TupleWord::parse("(1,0)(1,2)").unwrap()).unwrap(), vec![4, 2]);
        assert!(matches!(
            decode_tuple(2, &TupleWord::parse("(2,0)").unwrap()),
            Err(Error::DigitOutOfRange { .. })
        ));
        assert_eq!(encode_tuple(1, &[3]), Err(Error::InvalidBase(1)));
    }

    #[test]
    fn padding() {
        assert_eq!(pad(&rep("101"), 5).unwrap(), rep("00101"));
        assert_eq!(pad(&rep(""), 2).unwrap(), rep("00"));
        assert_eq!(pad(&rep("20"), 2).unwrap(), rep("20"));
        assert!(pad(&rep("101"), 2).is_err());
    }

    #[test]
    fn rejects_bad_systems() {
        assert!(NumerationSystem::new(vec![2, 3], Extension::Table).is_err());
        assert!(NumerationSystem::new(vec![1, 3, 3], Extension::Table).is_err());
        assert!(NumerationSystem::base(1).is_err());
        let table = NumerationSystem::new(vec![1, 2, 4], Extension::Table).unwrap();
        assert!(greedy_rep(&table, 100).is_err());
    }

    #[test]
    fn tuple_alphabet_order() {
        let a = tuple_alphabet(2, 2).unwrap();
        assert_eq!(a.symbols(), &["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        let t = encode_tuple(2, &[1, 5]).unwrap();
        assert_eq!(t.symbol_indices(2), vec![1, 0, 3]);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn systems() -> Vec<NumerationSystem> {
        vec![
            NumerationSystem::base(2).unwrap(),
            NumerationSystem::base(3).unwrap(),
            NumerationSystem::base(10).unwrap(),
            NumerationSystem::fibonacci(),
        ]
    }

    #[test]
    fn round_trip_below_one_million() {
        for sys in systems() {
            for x in 0..1_000_000u64 {
                assert_eq!(value(&sys, &greedy_rep(&sys, x).unwrap()).unwrap(), x);
            }
        }
    }

    proptest! {
        #[test]
        fn base_p_length_and_order(p in 2u64..7, x in 1u64..1_000_000, y in 1u64..1_000_000) {
            let sys = NumerationSystem::base(p).unwrap();
            let rx = greedy_rep(&sys, x).unwrap();
            let ry = greedy_rep(&sys, y).unwrap();
            prop_assert_eq!(rx.len() as u32, x.ilog(p) + 1);
            if x < y {
                prop_assert!((rx.len(), &rx.digits) < (ry.len(), &ry.digits));
            }
            let padded = pad(&rx, rx.len() + 3).unwrap();
            prop_assert_eq!(value(&sys, &padded).unwrap(), x);
        }

        #[test]
        fn tuple_round_trip(p in prop::sample::select(vec![2u64, 3, 5]), v in proptest::collection::vec(0u64..(1 << 16), 1..=3)) {
            let t = encode_tuple(p, &v).unwrap();
            prop_assert_eq!(decode_tuple(p, &t).unwrap(), v);
        }
    }
}
