//! Occurrences, return words, factor complexity, powers and periodicity of
//! generated prefixes, plus multiplicative independence and the density search.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::perron::is_primitive;
use crate::substitution::Substitution;
use crate::words::{ensure_same, Letter, Word};

/// Suffix array with LCP and constant-time longest-common-extension queries.
#[derive(Debug, Clone)]
pub struct FactorIndex {
    text: Vec<Letter>,
    sa: Vec<u32>,
    rank: Vec<u32>,
    /// `lcp[r]` = common prefix of suffixes `sa[r−1]` and `sa[r]`; `lcp[0] = 0`.
    lcp: Vec<u32>,
    sparse: Vec<Vec<u32>>,
}

impl FactorIndex {
    pub fn new(text: &[Letter]) -> FactorIndex {
        let n = text.len();
        let mut sa: Vec<u32> = (0..n as u32).collect();
        let mut rank: Vec<u32> = text.iter().map(|l| l.0).collect();
        let mut tmp = vec![0u32; n];
        let mut k = 1;
        if n > 0 {
            loop {
                let key = |i: u32| {
                    let i = i as usize;
                    (rank[i], if i + k < n { rank[i + k] as i64 } else { -1 })
                };
                sa.sort_unstable_by_key(|&i| key(i));
                tmp[sa[0] as usize] = 0;
                for r in 1..n {
                    tmp[sa[r] as usize] = tmp[sa[r - 1] as usize] + u32::from(key(sa[r - 1]) != key(sa[r]));
                }
                std::mem::swap(&mut rank, &mut tmp);
                if rank[sa[n - 1] as usize] as usize == n - 1 {
                    break;
                }
                k *= 2;
            }
        }
        // Kasai
        let mut lcp = vec![0u32; n];
        let mut h = 0usize;
        for i in 0..n {
            let r = rank[i] as usize;
            if r > 0 {
                let j = sa[r - 1] as usize;
                while i + h < n && j + h < n && text[i + h] == text[j + h] {
                    h += 1;
                }
                lcp[r] = h as u32;
                h = h.saturating_sub(1);
            } else {
                h = 0;
            }
        }
        let mut sparse = vec![lcp.clone()];
        let mut span = 1;
        while 2 * span <= n {
            let prev = sparse.last().expect("level");
            let next: Vec<u32> = (0..=n - 2 * span).map(|i| prev[i].min(prev[i + span])).collect();
            sparse.push(next);
            span *= 2;
        }
        FactorIndex { text: text.to_vec(), sa, rank, lcp, sparse }
    }

    pub fn text(&self) -> &[Letter] {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    /// Length of the longest common prefix of the suffixes at `i` and `j`.
    pub fn lce(&self, i: usize, j: usize) -> usize {
        let n = self.text.len();
        if i >= n || j >= n {
            return 0;
        }
        if i == j {
            return n - i;
        }
        let (a, b) = {
            let (x, y) = (self.rank[i] as usize, self.rank[j] as usize);
            (x.min(y) + 1, x.max(y))
        };
        let level = (usize::BITS - 1 - (b - a + 1).leading_zeros()) as usize;
        self.sparse[level][a].min(self.sparse[level][b + 1 - (1 << level)]) as usize
    }

    /// Ascending occurrence positions of each length-`n` factor.
    pub fn classes(&self, n: usize) -> Vec<Vec<usize>> {
        let len = self.text.len();
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut open = false;
        for r in 0..len {
            let p = self.sa[r] as usize;
            if p + n > len {
                open = false;
                continue;
            }
            if open && self.lcp[r] as usize >= n {
                out.last_mut().expect("open class").push(p);
            } else {
                out.push(vec![p]);
                open = true;
            }
        }
        for c in &mut out {
            c.sort_unstable();
        }
        out
    }

    pub fn complexity(&self, n: usize) -> usize {
        if n == 0 {
            return 1;
        }
        let len = self.text.len();
        let mut count = 0;
        let mut open = false;
        for r in 0..len {
            if self.sa[r] as usize + n > len {
                open = false;
                continue;
            }
            if !(open && self.lcp[r] as usize >= n) {
                count += 1;
            }
            open = true;
        }
        count
    }

    /// Ascending positions of `u`.
    pub fn occurrences(&self, u: &[Letter]) -> Vec<usize> {
        if u.is_empty() || u.len() > self.text.len() {
            return Vec::new();
        }
        let cmp = |r: usize| {
            let p = self.sa[r] as usize;
            let end = (p + u.len()).min(self.text.len());
            self.text[p..end].cmp(u)
        };
        let lo = partition_point(self.sa.len(), |r| cmp(r) == std::cmp::Ordering::Less);
        let hi = partition_point(self.sa.len(), |r| cmp(r) != std::cmp::Ordering::Greater);
        let mut v: Vec<usize> = (lo..hi).map(|r| self.sa[r] as usize).collect();
        v.sort_unstable();
        v
    }
}

fn partition_point(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Ascending positions of `u` in `w`.
pub fn occurrences(w: &Word, u: &Word) -> Result<Vec<usize>> {
    ensure_same(w.alphabet(), u.alphabet(), "occurrences")?;
    if u.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(occurrence_positions(w.letters(), u.letters()))
}

pub(crate) fn occurrence_positions(w: &[Letter], u: &[Letter]) -> Vec<usize> {
    if u.is_empty() || u.len() > w.len() {
        return Vec::new();
    }
    w.windows(u.len()).enumerate().filter(|(_, f)| *f == u).map(|(i, _)| i).collect()
}

/// Return words to `u` observed in a prefix.
#[derive(Debug, Clone)]
pub struct ReturnWordIndex {
    pub target: Word,
    pub positions: Vec<usize>,
    pub return_words: BTreeSet<Word>,
    pub max_gap: usize,
}

pub fn return_words(prefix: &Word, u: &Word) -> Result<ReturnWordIndex> {
    let positions = occurrences(prefix, u)?;
    if positions.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "`{u}` occurs {} time(s); return words need two occurrences",
            positions.len()
        )));
    }
    let return_words = positions.windows(2).map(|p| prefix.factor(p[0], p[1])).collect();
    let max_gap = positions.windows(2).map(|p| p[1] - p[0]).max().unwrap_or(0);
    Ok(ReturnWordIndex { target: u.clone(), positions, return_words, max_gap })
}

/// The three-part test: `wu` is a factor, `u` is a prefix of `wu`, and `wu`
/// contains exactly two occurrences of `u`.
pub fn is_return_word(prefix: &Word, u: &Word, w: &Word) -> Result<bool> {
    let wu = w.concat(u)?;
    let occurs = !occurrences(prefix, &wu)?.is_empty();
    let starts = u.is_prefix_of(&wu);
    let two = occurrences(&wu, u)?.len() == 2;
    Ok(occurs && starts && two && !w.is_empty())
}

/// Return-word statistics of one factor length on one prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthProfile {
    pub length: usize,
    /// Distinct factors of this length.
    pub factors: usize,
    /// Factors seen at least twice.
    pub recurrent: usize,
    pub min_gap: usize,
    pub max_gap: usize,
    /// Largest number of distinct return words to a single factor.
    pub max_return_words: usize,
}

fn length_profile(index: &FactorIndex, n: usize) -> LengthProfile {
    let text = index.text();
    let classes = index.classes(n);
    let mut p = LengthProfile {
        length: n,
        factors: classes.len(),
        recurrent: 0,
        min_gap: usize::MAX,
        max_gap: 0,
        max_return_words: 0,
    };
    for c in &classes {
        if c.len() < 2 {
            continue;
        }
        p.recurrent += 1;
        let mut words: HashSet<&[Letter]> = HashSet::new();
        for w in c.windows(2) {
            let g = w[1] - w[0];
            p.min_gap = p.min_gap.min(g);
            p.max_gap = p.max_gap.max(g);
            words.insert(&text[w[0]..w[1]]);
        }
        p.max_return_words = p.max_return_words.max(words.len());
    }
    p
}

/// Return-word profiles up to a length, on a prefix long enough that the
/// profiles agree with those of the doubled prefix.
#[derive(Debug, Clone)]
pub struct StableProfile {
    pub prefix_len: usize,
    pub profiles: Vec<LengthProfile>,
    pub index: FactorIndex,
}

const PREFIX_CAP: usize = 1 << 22;

pub fn stable_profile(s: &Substitution, max_len: usize, min_prefix: usize) -> Result<StableProfile> {
    stable_profile_with(|n| s.fixed_point_letters(n), max_len, min_prefix)
}

/// As [`stable_profile`], for any sequence given by its prefixes.
pub fn stable_profile_with(
    prefix: impl Fn(usize) -> Result<Vec<Letter>>,
    max_len: usize,
    min_prefix: usize,
) -> Result<StableProfile> {
    let mut n = min_prefix.max(64 * max_len).max(1024).next_power_of_two();
    let profile = |x: &[Letter]| -> (FactorIndex, Vec<LengthProfile>) {
        let idx = FactorIndex::new(x);
        let p = (1..=max_len).map(|k| length_profile(&idx, k)).collect();
        (idx, p)
    };
    let x = prefix(n)?;
    let (mut idx, mut prof) = profile(&x);
    loop {
        if 2 * n > PREFIX_CAP {
            return Err(Error::NotStabilized(format!("return words up to length {max_len} within {PREFIX_CAP} letters")));
        }
        let x2 = prefix(2 * n)?;
        let (idx2, prof2) = profile(&x2);
        let complete = prof.iter().all(|p| p.recurrent == p.factors);
        if prof == prof2 && complete {
            return Ok(StableProfile { prefix_len: n, profiles: prof, index: idx });
        }
        n *= 2;
        idx = idx2;
        prof = prof2;
    }
}

/// Estimate of the linear-recurrence constant.
#[derive(Debug, Clone)]
pub struct LrEstimate {
    /// `max ⌈|w|/|u|⌉` over `|u| ≤ max_len`, `w` a return word to `u`.
    pub k_hat: usize,
    pub max_len: usize,
    /// Prefix on which the return words stopped changing under doubling.
    pub prefix_len: usize,
    /// Always `"empirical"`: the value is read off a stabilized prefix, not derived from a proven bound.
    pub method: &'static str,
    pub profiles: Vec<LengthProfile>,
}

pub fn lr_constant_estimate(s: &Substitution, max_len: usize) -> Result<LrEstimate> {
    if !is_primitive(&s.incidence_matrix())? {
        return Err(Error::NotPrimitive);
    }
    let st = stable_profile(s, max_len, 0)?;
    let k_hat = st
        .profiles
        .iter()
        .map(|p| p.max_gap.div_ceil(p.length))
        .max()
        .unwrap_or(1)
        .max(1);
    Ok(LrEstimate { k_hat, max_len, prefix_len: st.prefix_len, method: "empirical", profiles: st.profiles })
}

/// Complexity of `w` at length `n`.
pub fn complexity(w: &Word, n: usize) -> usize {
    FactorIndex::new(w.letters()).complexity(n)
}

/// Complexity at length `n`, reported with whether it agrees with the half-length prefix.
pub fn complexity_with_stability(w: &Word, n: usize) -> (usize, bool) {
    let full = complexity(w, n);
    let half = complexity(&w.prefix(w.len() / 2), n);
    (full, full == half)
}

/// A `(K+1)`-power `v^{K+1}` found in a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerWitness {
    pub position: usize,
    pub period: usize,
    pub length: usize,
}

/// Longest run of period `q` containing a power of exponent at least `exponent`, if any.
///
/// Every such run of length at least `2q` contains two positions `j`, `j + q`
/// with `j` a multiple of `q`; the run is recovered by extending both ways.
pub fn find_power(forward: &FactorIndex, backward: &FactorIndex, exponent: usize) -> Option<PowerWitness> {
    let n = forward.len();
    for q in 1..=n / exponent.max(1) {
        let mut j = 0;
        while j + q < n {
            let ahead = forward.lce(j, j + q);
            // common suffix of x[..j] and x[..j+q], read in the reversed text
            let back = if j == 0 { 0 } else { backward.lce(n - j, n - j - q).min(j) };
            let run = back + ahead + q;
            if run >= exponent * q {
                return Some(PowerWitness { position: j - back, period: q, length: run });
            }
            j += q;
        }
    }
    None
}

/// Outcome of the four linear-recurrence checks.
#[derive(Debug, Clone)]
pub struct LinrecReport {
    pub k: usize,
    pub max_len: usize,
    pub prefix_len: usize,
    /// `p(n) ≤ Kn` fails at `(n, p(n))`.
    pub complexity_violation: Option<(usize, usize)>,
    /// A `(K+1)`-power.
    pub power_violation: Option<PowerWitness>,
    /// A factor length whose return words leave `(|u|/K, K|u|]`, with the offending gap.
    pub length_violation: Option<(usize, usize)>,
    /// A factor length with more than `K(K+1)²` return words.
    pub count_violation: Option<(usize, usize)>,
    /// Set when the sequence looks periodic; the checks are then skipped.
    pub skipped_periodic: bool,
}

impl LinrecReport {
    pub fn passed(&self) -> bool {
        !self.skipped_periodic
            && self.complexity_violation.is_none()
            && self.power_violation.is_none()
            && self.length_violation.is_none()
            && self.count_violation.is_none()
    }
}

/// Checks `p(n) ≤ Kn`, `(K+1)`-power freeness, `|u|/K < |w| ≤ K|u|` and
/// `#R_u ≤ K(K+1)²` for lengths up to `max_len` on a prefix of at least `min_prefix` letters.
pub fn check_linrec_props(s: &Substitution, k: usize, max_len: usize, min_prefix: usize) -> Result<LinrecReport> {
    if !is_primitive(&s.incidence_matrix())? {
        return Err(Error::NotPrimitive);
    }
    let st = stable_profile(s, max_len, min_prefix)?;
    let mut report = LinrecReport {
        k,
        max_len,
        prefix_len: st.prefix_len,
        complexity_violation: None,
        power_violation: None,
        length_violation: None,
        count_violation: None,
        skipped_periodic: false,
    };
    if st.profiles.iter().any(|p| p.factors <= p.length) {
        report.skipped_periodic = true;
        return Ok(report);
    }
    for p in &st.profiles {
        if report.complexity_violation.is_none() && p.factors > k * p.length {
            report.complexity_violation = Some((p.length, p.factors));
        }
        if report.length_violation.is_none() {
            if p.max_gap > k * p.length {
                report.length_violation = Some((p.length, p.max_gap));
            } else if p.min_gap * k <= p.length {
                report.length_violation = Some((p.length, p.min_gap));
            }
        }
        if report.count_violation.is_none() && p.max_return_words > k * (k + 1) * (k + 1) {
            report.count_violation = Some((p.length, p.max_return_words));
        }
    }
    let text = st.index.text();
    let reversed: Vec<Letter> = text.iter().rev().copied().collect();
    report.power_violation = find_power(&st.index, &FactorIndex::new(&reversed), k + 1);
    Ok(report)
}

/// Verdict of [`is_ultimately_periodic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Periodicity {
    /// `x = w·u·u·u…` with `|w| = preperiod`, `|u| = period`; `certified` when the
    /// only return word to `u` after the preperiod is `u` itself.
    Periodic { period: usize, preperiod: usize, certified: bool },
    /// `p(n) > n` on the prefix and on its first half.
    NonPeriodic { n: usize, complexity: usize },
    Inconclusive,
}

/// Least period with preperiod at most half the prefix and at least four
/// repetitions after it, certified through return words; otherwise a
/// complexity witness.
pub fn is_ultimately_periodic(prefix: &Word) -> Periodicity {
    let x = prefix.letters();
    let n = x.len();
    for q in 1..=n / 8 {
        // smallest i with x[j] = x[j+q] for all j ≥ i
        let mut i = n - q;
        while i > 0 && x[i - 1] == x[i - 1 + q] {
            i -= 1;
        }
        if i <= n / 2 && n - i >= 4 * q {
            let u = &x[i..i + q];
            let tail = &x[i..];
            let pos = occurrence_positions(tail, u);
            let certified = pos.windows(2).all(|w| &tail[w[0]..w[1]] == u);
            return Periodicity::Periodic { period: q, preperiod: i, certified };
        }
    }
    if n < 8 {
        return Periodicity::Inconclusive;
    }
    let full = FactorIndex::new(x);
    let half = FactorIndex::new(&x[..n / 2]);
    for m in (1..=64.min(n / 4)).rev() {
        let c = full.complexity(m);
        if c > m && half.complexity(m) > m {
            return Periodicity::NonPeriodic { n: m, complexity: c };
        }
    }
    Periodicity::Inconclusive
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Result of [`multiplicatively_independent`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Independence {
    pub independent: bool,
    /// Least `(k, l)` with `p^k = q^l` when dependent.
    pub witness: Option<(u32, u32)>,
}

/// `p^k = q^l` only for `k = l = 0`; decided on prime exponent vectors.
pub fn multiplicatively_independent(p: u64, q: u64) -> Result<Independence> {
    if p < 2 {
        return Err(Error::InvalidBase(p));
    }
    if q < 2 {
        return Err(Error::InvalidBase(q));
    }
    let (fp, fq) = (factorize(p), factorize(q));
    let same_primes = fp.len() == fq.len() && fp.iter().zip(&fq).all(|(a, b)| a.0 == b.0);
    if same_primes {
        // p = r^a and q = r^b with a = gcd of p's exponents scaled alike
        let (a0, b0) = (fp[0].1, fq[0].1);
        if fp.iter().zip(&fq).all(|(x, y)| x.1 * b0 == y.1 * a0) {
            let g = a0.gcd(&b0);
            return Ok(Independence { independent: false, witness: Some((b0 / g, a0 / g)) });
        }
    }
    Ok(Independence { independent: true, witness: None })
}

/// `(n, m)` with `n, m ≥ 1`, `n + m ≤ bound`, minimizing `n + m` then `n`,
/// such that `|αⁿ/βᵐ − t| < ε`. Integer `α`, `β` are compared exactly.
pub fn density_search(alpha: f64, beta: f64, t: f64, eps: f64, bound: usize) -> Result<(usize, usize)> {
    if !(alpha > 1.0 && beta > 1.0 && t > 0.0 && eps > 0.0) {
        return Err(Error::OutOfRange("density search needs α, β > 1 and t, ε > 0".into()));
    }
    let integral = |x: f64| x.fract() == 0.0 && x < 9.0e15;
    if integral(alpha) && integral(beta) {
        let a = BigInt::from(alpha as u64);
        let b = BigInt::from(beta as u64);
        let t = BigRational::from_float(t).ok_or_else(|| Error::OutOfRange("t".into()))?;
        let eps = BigRational::from_float(eps).ok_or_else(|| Error::OutOfRange("ε".into()))?;
        for total in 2..=bound {
            for n in 1..total {
                let m = total - n;
                let an = BigRational::from_integer(num_traits::pow(a.clone(), n));
                let bm = BigRational::from_integer(num_traits::pow(b.clone(), m));
                // |aⁿ − t·bᵐ| < ε·bᵐ
                if (an - &t * &bm).abs() < &eps * &bm {
                    return Ok((n, m));
                }
            }
        }
    } else {
        let (la, lb) = (alpha.ln(), beta.ln());
        for total in 2..=bound {
            for n in 1..total {
                let m = total - n;
                let v = (n as f64 * la - m as f64 * lb).exp();
                if (v - t).abs() < eps {
                    return Ok((n, m));
                }
            }
        }
    }
    Err(Error::NoWitness(bound))
}

/// `αⁿ/βᵐ` as a float, for reporting.
pub fn density_value(alpha: f64, beta: f64, n: usize, m: usize) -> f64 {
    let integral = |x: f64| x.fract() == 0.0 && x < 9.0e15;
    if integral(alpha) && integral(beta) {
        let an = BigRational::from_integer(num_traits::pow(BigInt::from(alpha as u64), n));
        let bm = BigRational::from_integer(num_traits::pow(BigInt::from(beta as u64), m));
        (an / bm).to_f64().unwrap_or(f64::NAN)
    } else {
        (n as f64 * alpha.ln() - m as f64 * beta.ln()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{factors, Alphabet};

    fn tm() -> Substitution {
        Substitution::from_rules("a", &[("a", "ab"), ("b", "ba")]).unwrap()
    }

    fn word(s: &str) -> Word {
        Word::parse(Alphabet::from_chars("ab01").unwrap(), s).unwrap()
    }

    #[test]
    fn suffix_array_queries() {
        let x = tm().fixed_point_letters(3000).unwrap();
        let idx = FactorIndex::new(&x);
        for (i, j) in [(0, 5), (3, 17), (100, 612), (2999, 0), (12, 12)] {
            let naive = x[i..].iter().zip(&x[j..]).take_while(|(a, b)| a == b).count();
            assert_eq!(idx.lce(i, j), naive, "({i},{j})");
        }
        let w = Word::from_letters_unchecked(tm().alphabet().clone(), x.clone());
        for n in 0..12 {
            assert_eq!(idx.complexity(n), factors(&w, n).len().max(usize::from(n == 0)));
        }
        let u = &x[10..16];
        assert_eq!(idx.occurrences(u), occurrence_positions(&x, u));
    }

    #[test]
    fn occurrence_examples() {
        let a = word("a");
        assert_eq!(occurrences(&word("abbabaabba"), &a).unwrap(), vec![0, 3, 5, 6, 9]);
        assert_eq!(occurrences(&word("aaa"), &word("aa")).unwrap(), vec![0, 1]);
        assert!(occurrences(&word("ab"), &word("abab")).unwrap().is_empty());
    }

    #[test]
    fn return_word_examples() {
        let x = tm().fixed_point_prefix(10_000).unwrap();
        let a = Word::parse(x.alphabet().clone(), "a").unwrap();
        let r = return_words(&x, &a).unwrap();
        let got: BTreeSet<String> = r.return_words.iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["a", "ab", "abb"].iter().map(|s| s.to_string()).collect());
        for w in &r.return_words {
            assert!(is_return_word(&x, &a, w).unwrap());
        }
        let r = return_words(&word("aaaaaaa"), &word("aa")).unwrap();
        assert_eq!(r.return_words.into_iter().map(|w| w.to_string()).collect::<Vec<_>>(), vec!["a"]);
        let r = return_words(&word("abababab"), &word("ab")).unwrap();
        assert_eq!(r.return_words.len(), 1);
        assert!(matches!(return_words(&word("abb"), &word("a")), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn return_words_partition_prefix() {
        let x = tm().fixed_point_prefix(4096).unwrap();
        for u in ["ab", "abba", "baab", "aab"] {
            let uw = Word::parse(x.alphabet().clone(), u).unwrap();
            let r = return_words(&x, &uw).unwrap();
            let first = r.positions[0];
            let last = *r.positions.last().unwrap();
            let mut joined = Vec::new();
            for p in r.positions.windows(2) {
                joined.extend_from_slice(&x.letters()[p[0]..p[1]]);
            }
            assert_eq!(&joined[..], &x.letters()[first..last]);
            assert_eq!(r.max_gap, r.return_words.iter().map(Word::len).max().unwrap());
        }
    }

    #[test]
    fn lr_estimates() {
        let est = lr_constant_estimate(&tm(), 16).unwrap();
        assert_eq!(est.method, "empirical");
        // independent rescan on a doubled prefix
        let x = tm().fixed_point_letters(2 * est.prefix_len).unwrap();
        let idx = FactorIndex::new(&x);
        let rescan = (1..=16).map(|n| length_profile(&idx, n).max_gap.div_ceil(n)).max().unwrap();
        assert_eq!(est.k_hat, rescan);
        let one = Substitution::from_rules("c", &[("c", "cc")]).unwrap();
        assert_eq!(lr_constant_estimate(&one, 8).unwrap().k_hat, 1);
        let s2 = Substitution::from_rules("a", &[("a", "ab"), ("b", "bc"), ("c", "cc")]).unwrap();
        assert_eq!(lr_constant_estimate(&s2, 4).unwrap_err(), Error::NotPrimitive);
    }

    #[test]
    fn linrec_checks_on_thue_morse() {
        let k = lr_constant_estimate(&tm(), 16).unwrap().k_hat;
        let rep = check_linrec_props(&tm(), k, 16, 1 << 14).unwrap();
        assert!(rep.passed(), "{rep:?}");
        // squares exist in Thue–Morse, so K = 1 must fail
        let rep = check_linrec_props(&tm(), 1, 8, 0).unwrap();
        assert!(rep.power_violation.is_some());
    }

    #[test]
    fn power_detection() {
        let x: Vec<Letter> = word("abaabaabab").into_letters();
        let rev: Vec<Letter> = x.iter().rev().copied().collect();
        let (f, b) = (FactorIndex::new(&x), FactorIndex::new(&rev));
        let w = find_power(&f, &b, 3).unwrap();
        assert_eq!((w.position, w.period), (0, 3));
        assert_eq!(find_power(&f, &b, 4), None);
        let t = tm().fixed_point_letters(5000).unwrap();
        let tr: Vec<Letter> = t.iter().rev().copied().collect();
        assert_eq!(find_power(&FactorIndex::new(&t), &FactorIndex::new(&tr), 3), None);
    }

    #[test]
    fn complexity_examples() {
        let x = tm().fixed_point_prefix(1 << 12).unwrap();
        let got: Vec<usize> = (1..=8).map(|n| complexity(&x, n)).collect();
        assert_eq!(got, vec![2, 4, 6, 10, 12, 16, 20, 22]);
        assert_eq!(complexity(&word("ababababab"), 5), 2);
        assert_eq!(complexity(&x, 0), 1);
        for n in 1..20 {
            let (a, b) = (complexity(&x, n), complexity(&x, n + 1));
            assert!(a <= b && b <= 2 * a);
        }
    }

    #[test]
    fn periodicity_verdicts() {
        let per = Word::parse(Alphabet::from_chars("ab").unwrap(), &"ab".repeat(200)).unwrap();
        assert_eq!(is_ultimately_periodic(&per), Periodicity::Periodic { period: 2, preperiod: 0, certified: true });
        let x = tm().fixed_point_prefix(1 << 14).unwrap();
        assert!(matches!(is_ultimately_periodic(&x), Periodicity::NonPeriodic { n, complexity } if complexity > n));
        let pow2: String = (0..4096u32).map(|n| if n.is_power_of_two() { '1' } else { '0' }).collect();
        let w = Word::parse(Alphabet::from_chars("01").unwrap(), &pow2).unwrap();
        // the last one sits at 2048, past half the prefix
        assert!(matches!(is_ultimately_periodic(&w), Periodicity::NonPeriodic { .. }));
        let w = w.prefix(3000);
        assert!(matches!(is_ultimately_periodic(&w), Periodicity::NonPeriodic { .. }));
        let pre = Word::parse(Alphabet::from_chars("ab").unwrap(), &format!("bb{}", "ab".repeat(50))).unwrap();
        assert_eq!(is_ultimately_periodic(&pre), Periodicity::Periodic { period: 2, preperiod: 1, certified: true });
    }

    #[test]
    fn independence() {
        assert!(multiplicatively_independent(2, 3).unwrap().independent);
        assert_eq!(
            multiplicatively_independent(4, 8).unwrap(),
            Independence { independent: false, witness: Some((3, 2)) }
        );
        assert!(multiplicatively_independent(6, 12).unwrap().independent);
        assert_eq!(multiplicatively_independent(36, 216).unwrap().witness, Some((3, 2)));
        assert_eq!(multiplicatively_independent(5, 5).unwrap().witness, Some((1, 1)));
        for p in 2..40u64 {
            for q in 2..40u64 {
                let r = multiplicatively_independent(p, q).unwrap();
                if let Some((k, l)) = r.witness {
                    assert_eq!(BigInt::from(p).pow(k), BigInt::from(q).pow(l));
                } else {
                    // log p / log q is not a ratio of small integers
                    for k in 1..8u32 {
                        for l in 1..8u32 {
                            assert_ne!(BigInt::from(p).pow(k), BigInt::from(q).pow(l));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn density() {
        assert_eq!(density_search(2.0, 3.0, 1.0, 0.06, 64).unwrap(), (8, 5));
        assert_eq!(density_search(2.0, 3.0, 0.5, 0.05, 64).unwrap(), (7, 5));
        assert_eq!(density_search(2.0, 2.0, 1.0, 0.1, 64).unwrap(), (1, 1));
        assert!(matches!(density_search(2.0, 3.0, 1.0, 1e-9, 10), Err(Error::NoWitness(10))));
        let (n, m) = density_search(2.5, 3.7, 1.3, 0.05, 64).unwrap();
        assert!((density_value(2.5, 3.7, n, m) - 1.3).abs() < 0.05);
    }
}
