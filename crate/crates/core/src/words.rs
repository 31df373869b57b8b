//! Alphabets, words, morphisms and incidence matrices.
//!
//! Symbols are opaque string tokens. Each alphabet fixes an order on its
//! symbols and every matrix or vector in the crate is indexed by that order.
//! Words carry a shared reference to their alphabet; mixing alphabets is an
//! error rather than a silent coercion.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a symbol inside its alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Letter {
    fn from(i: usize) -> Self {
        Letter(i as u32)
    }
}

#[derive(Debug, Clone)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, Letter>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Arc<Alphabet>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlphabet(format!("bad symbol `{s}`")));
            }
            if index.insert(s.clone(), Letter::from(i)).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Arc::new(Alphabet { symbols, index }))
    }

    /// Alphabet whose symbols are the characters of `chars`, in order.
    pub fn from_chars(chars: &str) -> Result<Arc<Alphabet>> {
        Alphabet::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, letter: Letter) -> &str {
        &self.symbols[letter.index()]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn letter(&self, symbol: &str) -> Result<Letter> {
        self.index
            .get(symbol)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.symbols.len()).map(Letter::from)
    }

    /// True when every symbol is a single character, so words print without separators.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Render a letter sequence with this alphabet's symbols.
    pub fn render(&self, letters: &[Letter]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        letters
            .iter()
            .map(|&l| self.symbol(l))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl std::hash::Hash for Alphabet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.symbols.hash(state);
    }
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn ensure_same(a: &Arc<Alphabet>, b: &Arc<Alphabet>, what: &str) -> Result<()> {
    if same_alphabet(a, b) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(what.to_string()))
    }
}

/// A finite word over an alphabet. The empty word is allowed.
#[derive(Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, letters: Vec<Letter>) -> Result<Word> {
        if let Some(bad) = letters.iter().find(|l| l.index() >= alphabet.len()) {
            return Err(Error::UnknownSymbol(format!("letter index {}", bad.0)));
        }
        Ok(Word { alphabet, letters })
    }

    pub(crate) fn from_letters_unchecked(alphabet: Arc<Alphabet>, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.iter().all(|l| l.index() < alphabet.len()));
        Word { alphabet, letters }
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Word {
        Word { alphabet, letters: Vec::new() }
    }

    pub fn from_symbols<S: AsRef<str>>(alphabet: Arc<Alphabet>, symbols: &[S]) -> Result<Word> {
        let letters = symbols
            .iter()
            .map(|s| alphabet.letter(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet, letters })
    }

    /// Parse a word. Compact alphabets accept `abba`; otherwise symbols are
    /// whitespace separated.
    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty(alphabet));
        }
        if alphabet.is_compact() && !text.contains(char::is_whitespace) {
            let letters = text
                .chars()
                .map(|c| alphabet.letter(c.encode_utf8(&mut [0; 4])))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Word { alphabet, letters });
        }
        let symbols: Vec<&str> = text.split_whitespace().collect();
        Word::from_symbols(alphabet, &symbols)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Letter> {
        self.letters.get(i).copied()
    }

    /// The factor `w[start..end)`.
    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word { alphabet: self.alphabet.clone(), letters: self.letters[start..end].to_vec() }
    }

    pub fn prefix(&self, n: usize) -> Word {
        self.factor(0, n.min(self.len()))
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        ensure_same(&self.alphabet, &other.alphabet, "concatenation")?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { alphabet: self.alphabet.clone(), letters })
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word { alphabet: self.alphabet.clone(), letters: self.letters.repeat(n) }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        same_alphabet(&self.alphabet, &other.alphabet) && other.letters.starts_with(&self.letters)
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && same_alphabet(&self.alphabet, &other.alphabet)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("ε");
        }
        f.write_str(&self.alphabet.render(&self.letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Number of (possibly overlapping) occurrences of `u` in `v`.
pub fn count_occurrences(u: &Word, v: &Word) -> Result<usize> {
    if u.is_empty() {
        return Err(Error::EmptyPattern);
    }
    ensure_same(&u.alphabet, &v.alphabet, "count_occurrences")?;
    Ok(count_slice(u.letters(), v.letters()))
}

pub(crate) fn count_slice(u: &[Letter], v: &[Letter]) -> usize {
    if u.len() > v.len() {
        return 0;
    }
    v.windows(u.len()).filter(|w| *w == u).count()
}

/// Distinct factors of length `n`; empty when `n > |w|`.
pub fn factors(w: &Word, n: usize) -> BTreeSet<Word> {
    if n == 0 || n > w.len() {
        return BTreeSet::new();
    }
    let distinct: BTreeSet<&[Letter]> = w.letters.windows(n).collect();
    distinct
        .into_iter()
        .map(|s| Word { alphabet: w.alphabet.clone(), letters: s.to_vec() })
        .collect()
}

/// A map from each source letter to a (possibly empty) word over the target alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Arc<Alphabet>,
    target: Arc<Alphabet>,
    images: Vec<Vec<Letter>>,
}

impl Morphism {
    pub fn new(source: Arc<Alphabet>, target: Arc<Alphabet>, images: Vec<Vec<Letter>>) -> Result<Morphism> {
        if images.len() != source.len() {
            return Err(Error::InvalidMorphism(format!(
                "{} rules for {} source letters",
                images.len(),
                source.len()
            )));
        }
        for img in &images {
            if let Some(bad) = img.iter().find(|l| l.index() >= target.len()) {
                return Err(Error::InvalidMorphism(format!("image letter {} outside target", bad.0)));
            }
        }
        Ok(Morphism { source, target, images })
    }

    /// Build from `(symbol, image)` pairs, one per source symbol, in any order.
    pub fn from_rules<S: AsRef<str>>(
        source: Arc<Alphabet>,
        target: Arc<Alphabet>,
        rules: &[(S, Word)],
    ) -> Result<Morphism> {
        let mut images: Vec<Option<Vec<Letter>>> = vec![None; source.len()];
        for (sym, img) in rules {
            let l = source.letter(sym.as_ref())?;
            ensure_same(img.alphabet(), &target, "rule image")?;
            if images[l.index()].replace(img.letters().to_vec()).is_some() {
                return Err(Error::InvalidMorphism(format!("two rules for `{}`", sym.as_ref())));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| {
                    Error::InvalidMorphism(format!("no rule for `{}`", source.symbol(Letter::from(i))))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism { source, target, images })
    }

    pub fn identity(alphabet: Arc<Alphabet>) -> Morphism {
        let images = alphabet.letters().map(|l| vec![l]).collect();
        Morphism { source: alphabet.clone(), target: alphabet, images }
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.target
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.images[letter.index()]
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    pub fn is_letter_to_letter(&self) -> bool {
        self.images.iter().all(|i| i.len() == 1)
    }

    /// Common image length, if all images have the same length.
    pub fn constant_length(&self) -> Option<usize> {
        let first = self.images.first()?.len();
        self.images.iter().all(|i| i.len() == first).then_some(first)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        ensure_same(w.alphabet(), &self.source, "apply_morphism")?;
        Ok(Word { alphabet: self.target.clone(), letters: self.apply_letters(w.letters()) })
    }

    pub(crate) fn apply_letters(&self, w: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &l in w {
            out.extend_from_slice(&self.images[l.index()]);
        }
        out
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        ensure_same(&inner.target, &self.source, "compose")?;
        let images = inner.images.iter().map(|img| self.apply_letters(img)).collect();
        Ok(Morphism { source: inner.source.clone(), target: self.target.clone(), images })
    }

    /// `self^n` for an endomorphism; `n = 0` is the identity.
    pub fn power(&self, n: usize) -> Result<Morphism> {
        ensure_same(&self.source, &self.target, "power of a non-endomorphism")?;
        let mut acc = Morphism::identity(self.source.clone());
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let mut m = IncidenceMatrix::zeros(self.target.len(), self.source.len());
        for (j, img) in self.images.iter().enumerate() {
            for l in img {
                m.data[l.index() * m.cols + j] += 1;
            }
        }
        m
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (i, img) in self.images.iter().enumerate() {
            list.entry(&self.source.symbol(Letter::from(i)), &self.target.render(img));
        }
        list.finish()
    }
}

/// Nonnegative integer matrix; rows index the target alphabet and columns the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IncidenceMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMorphism("ragged matrix".into()));
        }
        Ok(IncidenceMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.cols.max(1)).map(<[u64]>::to_vec).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn mul(&self, other: &IncidenceMatrix) -> Result<IncidenceMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidMorphism(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IncidenceMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.checked_mul(other.get(k, j)).ok_or(Error::Overflow("matrix product"))?;
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = cell.checked_add(prod).ok_or(Error::Overflow("matrix product"))?;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<IncidenceMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut result = IncidenceMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Entrywise positivity.
    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&x| x > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Alphabet> {
        Alphabet::from_chars("ab").unwrap()
    }

    fn morse() -> Morphism {
        let a = ab();
        Morphism::from_rules(
            a.clone(),
            a.clone(),
            &[("a", Word::parse(a.clone(), "ab").unwrap()), ("b", Word::parse(a, "ba").unwrap())],
        )
        .unwrap()
    }

    fn sigma2() -> Morphism {
        let a = Alphabet::from_chars("abc").unwrap();
        let w = |s: &str| Word::parse(a.clone(), s).unwrap();
        Morphism::from_rules(a.clone(), a.clone(), &[("a", w("ab")), ("b", w("bc")), ("c", w("cc"))]).unwrap()
    }

    #[test]
    fn counts_overlapping_occurrences() {
        let a = ab();
        let w = |s: &str| Word::parse(a.clone(), s).unwrap();
        assert_eq!(count_occurrences(&w("aa"), &w("aaa")).unwrap(), 2);
        assert_eq!(count_occurrences(&w("ab"), &w("abba")).unwrap(), 1);
        assert_eq!(count_occurrences(&w("a"), &w("abbabaabba")).unwrap(), 5);
        assert_eq!(count_occurrences(&w("aab"), &w("ab")).unwrap(), 0);
    }

    #[test]
    fn empty_pattern_and_mismatch_are_errors() {
        let a = ab();
        let other = Alphabet::from_chars("xy").unwrap();
        assert_eq!(count_occurrences(&Word::empty(a.clone()), &Word::parse(a.clone(), "ab").unwrap()), Err(Error::EmptyPattern));
        let e = count_occurrences(&Word::parse(a, "a").unwrap(), &Word::parse(other, "xy").unwrap());
        assert!(matches!(e, Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn applies_morphisms() {
        let m = morse();
        let w = Word::parse(ab(), "ab").unwrap();
        assert_eq!(m.apply(&w).unwrap().to_string(), "abba");
        assert!(m.apply(&Word::empty(ab())).unwrap().is_empty());
        let s2 = sigma2();
        let w = Word::parse(s2.source().clone(), "abc").unwrap();
        assert_eq!(s2.apply(&w).unwrap().to_string(), "abbccc");
        let stray = Word::parse(Alphabet::from_chars("xy").unwrap(), "x").unwrap();
        assert!(m.apply(&stray).is_err());
    }

    #[test]
    fn composes_and_multiplies_matrices() {
        let m = morse();
        let mm = m.compose(&m).unwrap();
        assert_eq!(ab().render(mm.image(Letter(0))), "abba");
        assert_eq!(mm.incidence_matrix().to_rows(), vec![vec![2, 2], vec![2, 2]]);
        assert_eq!(m.incidence_matrix().mul(&m.incidence_matrix()).unwrap(), mm.incidence_matrix());
        let id = Morphism::identity(ab());
        assert_eq!(id.compose(&m).unwrap(), m);
        assert_eq!(m.compose(&id).unwrap(), m);
        assert!(m.compose(&sigma2()).is_err());
    }

    #[test]
    fn incidence_matrices() {
        assert_eq!(morse().incidence_matrix().to_rows(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(
            sigma2().incidence_matrix().to_rows(),
            vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 2]]
        );
        assert_eq!(Morphism::identity(ab()).incidence_matrix(), IncidenceMatrix::identity(2));
        assert_eq!(sigma2().incidence_matrix().column_sums(), vec![2, 2, 2]);
    }

    #[test]
    fn lists_factors() {
        let a = ab();
        let w = Word::parse(a.clone(), "abba").unwrap();
        let f: Vec<String> = factors(&w, 2).iter().map(ToString::to_string).collect();
        assert_eq!(f, vec!["ab", "ba", "bb"]);
        assert_eq!(factors(&w, 4).len(), 1);
        assert!(factors(&w, 5).is_empty());
        let tm = Word::parse(a, "abbabaabbaababbabaab").unwrap();
        assert_eq!(factors(&tm, 2).len(), 4);
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a b"]).is_err());
    }
}
