//! Sliding block codes in one and several dimensions, preimages, factor
//! frequencies of coded sequences, and the two-base comparison demo.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::nd::{box_positions, volume, ArrayWindow};
use crate::perron::{is_primitive, scaling_exponent, FactorFrequencies, Frequency};
use crate::recurrence::{
    is_ultimately_periodic, multiplicatively_independent, stable_profile_with, Independence, LengthProfile, Periodicity,
};
use crate::substitution::{Coding, KBlockSubstitution, Substitution};
use crate::words::{ensure_same, Alphabet, Letter, Morphism, Word};

/// A sliding block code given by its table.
///
/// In one dimension the window is `x[i..i+2r+1]`; in `d` dimensions it is the
/// cube `v + [0, R)^d`, keyed by its cells with the first axis fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    domain: Arc<Alphabet>,
    target: Arc<Alphabet>,
    dim: usize,
    side: usize,
    table: BTreeMap<Vec<Letter>, Letter>,
}

impl BlockMap {
    pub fn new(
        domain: Arc<Alphabet>,
        target: Arc<Alphabet>,
        dim: usize,
        side: usize,
        table: BTreeMap<Vec<Letter>, Letter>,
    ) -> Result<BlockMap> {
        if dim == 0 || side == 0 {
            return Err(Error::InvalidBlockMap("dimension and side must be positive".into()));
        }
        if dim == 1 && side % 2 == 0 {
            return Err(Error::InvalidBlockMap("one-dimensional windows have odd length 2r+1".into()));
        }
        let cells = volume(&vec![side; dim])?;
        for (k, v) in &table {
            if k.len() != cells {
                return Err(Error::InvalidBlockMap(format!("window of {} cells, expected {cells}", k.len())));
            }
            if k.iter().any(|l| l.index() >= domain.len()) || v.index() >= target.len() {
                return Err(Error::InvalidBlockMap("letter outside the declared alphabets".into()));
            }
        }
        Ok(BlockMap { domain, target, dim, side, table })
    }

    /// A one-dimensional map of radius `r`.
    pub fn with_radius(
        domain: Arc<Alphabet>,
        target: Arc<Alphabet>,
        radius: usize,
        table: BTreeMap<Vec<Letter>, Letter>,
    ) -> Result<BlockMap> {
        BlockMap::new(domain, target, 1, 2 * radius + 1, table)
    }

    /// The total one-dimensional map of radius `r` computed by `f`.
    pub fn from_fn(
        domain: Arc<Alphabet>,
        target: Arc<Alphabet>,
        radius: usize,
        f: impl Fn(&[Letter]) -> Letter,
    ) -> Result<BlockMap> {
        let len = 2 * radius + 1;
        let shape = vec![domain.len(); len];
        let table = box_positions(&shape)
            .map(|p| {
                let w: Vec<Letter> = p.into_iter().map(Letter::from).collect();
                let v = f(&w);
                (w, v)
            })
            .collect();
        BlockMap::with_radius(domain, target, radius, table)
    }

    /// The radius-0 map of a coding.
    pub fn from_coding(c: &Coding) -> BlockMap {
        let table = c.source().letters().map(|l| (vec![l], c.map(l))).collect();
        BlockMap::with_radius(c.source().clone(), c.target().clone(), 0, table).expect("coding table")
    }

    pub fn domain(&self) -> &Arc<Alphabet> {
        &self.domain
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// `r` with `side = 2r + 1`, for one-dimensional maps.
    pub fn radius(&self) -> Option<usize> {
        (self.dim == 1).then_some((self.side - 1) / 2)
    }

    pub fn table(&self) -> &BTreeMap<Vec<Letter>, Letter> {
        &self.table
    }

    pub fn is_total(&self) -> bool {
        let cells = self.side.pow(self.dim as u32) as u32;
        (self.domain.len() as u128).checked_pow(cells).is_some_and(|n| n == self.table.len() as u128)
    }

    pub fn lookup(&self, window: &[Letter]) -> Result<Letter> {
        self.table.get(window).copied().ok_or_else(|| {
            Error::InvalidBlockMap(format!("no table entry for `{}`", self.domain.render(window)))
        })
    }

    fn one_dim(&self) -> Result<usize> {
        self.radius().ok_or_else(|| Error::InvalidBlockMap(format!("{}-dimensional map applied to a word", self.dim)))
    }

    pub fn apply_letters(&self, w: &[Letter]) -> Result<Vec<Letter>> {
        self.one_dim()?;
        if w.len() < self.side {
            return Err(Error::WindowTooSmall(format!("word of length {} under a window of {}", w.len(), self.side)));
        }
        w.windows(self.side).map(|f| self.lookup(f)).collect()
    }

    /// `(f(w))_i = f(w[i..i+2r+1])`, of length `|w| − 2r`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        ensure_same(w.alphabet(), &self.domain, "block map domain")?;
        Word::new(self.target.clone(), self.apply_letters(w.letters())?)
    }

    /// The window shrunk by `R − 1` along every axis.
    pub fn apply_window(&self, w: &ArrayWindow) -> Result<ArrayWindow> {
        ensure_same(w.alphabet(), &self.domain, "block map domain")?;
        if w.dim() != self.dim {
            return Err(Error::InvalidBlockMap(format!("{}-dimensional map on a {}-dimensional window", self.dim, w.dim())));
        }
        if w.shape().iter().any(|&n| n < self.side) {
            return Err(Error::WindowTooSmall(format!("window {:?} under a cube of side {}", w.shape(), self.side)));
        }
        let shape: Vec<usize> = w.shape().iter().map(|n| n - self.side + 1).collect();
        let cube = vec![self.side; self.dim];
        let mut cells = Vec::with_capacity(volume(&shape)?);
        for p in box_positions(&shape) {
            cells.push(self.lookup(w.sub_window(&p, &cube)?.cells())?);
        }
        ArrayWindow::new(self.target.clone(), shape, cells)?.with_origin(w.origin().to_vec())
    }
}

/// All `v` of the language with `|v| = |u| + 2r` and `f(v) = u`.
pub fn preimages(f: &BlockMap, u: &Word, language: &BTreeSet<Vec<Letter>>) -> Result<BTreeSet<Word>> {
    ensure_same(u.alphabet(), f.target(), "block map target")?;
    let len = u.len() + 2 * f.one_dim()?;
    let mut any = false;
    let mut out = BTreeSet::new();
    for v in language.iter().filter(|v| v.len() == len) {
        any = true;
        if f.apply_letters(v)? == u.letters() {
            out.insert(Word::new(f.domain().clone(), v.clone())?);
        }
    }
    if !any && !u.is_empty() {
        return Err(Error::InsufficientData(format!("language holds no words of length {len}")));
    }
    Ok(out)
}

/// The language words grouped by their image.
pub fn preimage_partition(
    f: &BlockMap,
    language: &BTreeSet<Vec<Letter>>,
) -> Result<BTreeMap<Vec<Letter>, BTreeSet<Vec<Letter>>>> {
    let mut out: BTreeMap<Vec<Letter>, BTreeSet<Vec<Letter>>> = BTreeMap::new();
    for v in language.iter().filter(|v| v.len() >= f.side()) {
        out.entry(f.apply_letters(v)?).or_default().insert(v.clone());
    }
    Ok(out)
}

fn add(a: &Frequency, b: &Frequency) -> Frequency {
    let exact = match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Frequency { value: a.value + b.value, exact }
}

fn zero() -> Frequency {
    Frequency { value: 0.0, exact: Some(BigRational::zero()) }
}

/// Frequencies of factors of `f(x)`, `x` the fixed point of a primitive substitution.
#[derive(Debug, Clone)]
pub struct CodedFrequencies {
    substitution: Substitution,
    map: BlockMap,
    base: FactorFrequencies,
    max_len: usize,
}

impl CodedFrequencies {
    pub fn new(s: &Substitution, f: &BlockMap, max_len: usize) -> Result<CodedFrequencies> {
        ensure_same(s.alphabet(), f.domain(), "block map domain")?;
        let r = f.one_dim()?;
        let base = FactorFrequencies::new(s, max_len + 2 * r)?;
        Ok(CodedFrequencies { substitution: s.clone(), map: f.clone(), base, max_len })
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n > self.max_len {
            return Err(Error::OutOfRange(format!("factor length {n} exceeds prepared bound {}", self.max_len)));
        }
        Ok(())
    }

    /// `Σ freq(v)` over the preimages `v` of `u`.
    pub fn frequency(&self, u: &[Letter]) -> Result<Frequency> {
        self.check_len(u.len())?;
        let r = self.map.radius().unwrap_or(0);
        let language = self.substitution.factor_set(u.len() + 2 * r)?;
        let mut total = zero();
        for v in &language {
            if self.map.apply_letters(v)? == u {
                total = add(&total, &self.base.frequency(v)?);
            }
        }
        Ok(total)
    }

    /// Every coded factor of length `n` with its frequency and preimage count.
    pub fn table(&self, n: usize) -> Result<BTreeMap<Vec<Letter>, (Frequency, usize)>> {
        self.check_len(n)?;
        let r = self.map.radius().unwrap_or(0);
        let language = self.substitution.factor_set(n + 2 * r)?;
        let mut out: BTreeMap<Vec<Letter>, (Frequency, usize)> = BTreeMap::new();
        for v in &language {
            let u = self.map.apply_letters(v)?;
            let fv = self.base.frequency(v)?;
            let e = out.entry(u).or_insert_with(|| (zero(), 0));
            e.0 = add(&e.0, &fv);
            e.1 += 1;
        }
        Ok(out)
    }
}

/// Frequency of `u` in `f(x)`.
pub fn factor_frequencies(s: &Substitution, f: &BlockMap, u: &Word) -> Result<Frequency> {
    ensure_same(u.alphabet(), f.target(), "block map target")?;
    CodedFrequencies::new(s, f, u.len())?.frequency(u.letters())
}

/// `σ_{2r+1}` with the coding `(v) ↦ f(v)`; its coded fixed point is `f(x)`.
pub fn recode_as_coding(s: &Substitution, f: &BlockMap) -> Result<(KBlockSubstitution, Coding)> {
    ensure_same(s.alphabet(), f.domain(), "block map domain")?;
    let kb = s.k_block(f.one_dim()? * 2 + 1)?;
    let images = kb.factors().iter().map(|v| f.lookup(v).map(|l| vec![l])).collect::<Result<Vec<_>>>()?;
    let coding = Coding::new(Morphism::new(kb.substitution().alphabet().clone(), f.target().clone(), images)?)?;
    Ok((kb, coding))
}

/// The first `n` letters of `f(x)`.
pub fn coded_block_prefix(s: &Substitution, f: &BlockMap, n: usize) -> Result<Vec<Letter>> {
    let r = f.one_dim()?;
    f.apply_letters(&s.fixed_point_letters(n + 2 * r)?)
}

/// Return-word bounds on a coded sequence.
#[derive(Debug, Clone)]
pub struct FactorLrReport {
    pub k: usize,
    pub max_len: usize,
    /// `2r`.
    pub lemma_threshold: usize,
    /// Least `n₁` from which every length up to `max_len` meets both bounds.
    pub empirical_threshold: Option<usize>,
    pub prefix_len: usize,
    /// A length at or above the lemma threshold whose return words leave `[|u|/2K, 2K|u|]`, with the gap.
    pub length_violation: Option<(usize, usize)>,
    /// A length at or above the lemma threshold with more than `2K(2K+1)²` return words.
    pub count_violation: Option<(usize, usize)>,
    pub skipped_periodic: bool,
    pub profiles: Vec<LengthProfile>,
}

impl FactorLrReport {
    pub fn passed(&self) -> bool {
        !self.skipped_periodic && self.length_violation.is_none() && self.count_violation.is_none()
    }
}

/// Checks `|u|/2K ≤ |w| ≤ 2K|u|` and `#R_u ≤ 2K(2K+1)²` on `f(x)` for `|u| ≤ max_len`.
pub fn check_factor_lr(s: &Substitution, f: &BlockMap, max_len: usize, k: usize) -> Result<FactorLrReport> {
    if !is_primitive(&s.incidence_matrix())? {
        return Err(Error::NotPrimitive);
    }
    let r = f.one_dim()?;
    let mut report = FactorLrReport {
        k,
        max_len,
        lemma_threshold: 2 * r,
        empirical_threshold: None,
        prefix_len: 0,
        length_violation: None,
        count_violation: None,
        skipped_periodic: false,
        profiles: Vec::new(),
    };
    let probe = Word::new(f.target().clone(), coded_block_prefix(s, f, 1 << 14)?)?;
    if matches!(is_ultimately_periodic(&probe), Periodicity::Periodic { .. }) {
        report.skipped_periodic = true;
        return Ok(report);
    }
    let st = stable_profile_with(|n| coded_block_prefix(s, f, n), max_len, 0)?;
    let kk = 2 * k;
    let length_ok = |p: &LengthProfile| p.max_gap <= kk * p.length && p.min_gap * kk >= p.length;
    let count_ok = |p: &LengthProfile| p.max_return_words <= kk * (kk + 1) * (kk + 1);
    for p in st.profiles.iter().filter(|p| p.length >= report.lemma_threshold.max(1)) {
        if report.length_violation.is_none() && !length_ok(p) {
            let gap = if p.max_gap > kk * p.length { p.max_gap } else { p.min_gap };
            report.length_violation = Some((p.length, gap));
        }
        if report.count_violation.is_none() && !count_ok(p) {
            report.count_violation = Some((p.length, p.max_return_words));
        }
    }
    let mut threshold = None;
    for p in st.profiles.iter().rev() {
        if length_ok(p) && count_ok(p) {
            threshold = Some(p.length);
        } else {
            break;
        }
    }
    report.empirical_threshold = threshold;
    report.prefix_len = st.prefix_len;
    report.profiles = st.profiles;
    Ok(report)
}

/// Letters compared when checking that two codings generate the same sequence.
pub const AGREEMENT_LEN: usize = 100_000;

/// Two factors whose scaled frequencies coincide in both bases:
/// `freq(short)·p^k = freq(long)·p^{k'}` and likewise for `q`, so `p^{k'−k} = q^{l'−l}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingWitness {
    pub short: Word,
    pub long: Word,
    pub p_exponent: u32,
    pub q_exponent: u32,
}

/// Evidence gathered when the two bases are dependent.
#[derive(Debug, Clone)]
pub struct DependentEvidence {
    pub max_len: usize,
    /// The frequencies read through either substitution agree on every factor.
    pub frequencies_agree: bool,
    /// `{freq(u)·p^{k(|u|)}}`.
    pub scaled_p: BTreeSet<BigRational>,
    /// `{freq(u)·q^{k(|u|)}}`.
    pub scaled_q: BTreeSet<BigRational>,
    pub witness: Option<ScalingWitness>,
    /// `p^{k'−k} = q^{l'−l}` holds for the witness.
    pub witness_consistent: bool,
}

/// What [`cobham_demo`] concluded.
#[derive(Debug, Clone)]
pub enum CobhamOutcome {
    /// Independent bases and an ultimately periodic sequence.
    Periodic { period: usize, preperiod: usize, certified: bool },
    /// Independent bases but no period found; the theorem rules this out, so it signals a bug.
    CounterexampleCandidate { verdict: Periodicity, note: &'static str },
    Dependent(DependentEvidence),
}

#[derive(Debug, Clone)]
pub struct CobhamReport {
    pub p: usize,
    pub q: usize,
    pub agreement_len: usize,
    pub independence: Independence,
    pub outcome: CobhamOutcome,
}

/// Confirms both inputs generate the same sequence, then checks the consequence
/// the base relation predicts: a period for independent bases, aligned scaled
/// frequencies for dependent ones.
pub fn cobham_demo(s1: &Substitution, c1: &Coding, s2: &Substitution, c2: &Coding, max_len: usize) -> Result<CobhamReport> {
    let p = s1.constant_length().ok_or(Error::NotConstantLength)?;
    let q = s2.constant_length().ok_or(Error::NotConstantLength)?;
    let y1 = crate::substitution::coded_prefix(s1, c1, AGREEMENT_LEN)?;
    let y2 = crate::substitution::coded_prefix(s2, c2, AGREEMENT_LEN)?;
    let sym1 = |l: &Letter| c1.target().symbol(*l);
    let sym2 = |l: &Letter| c2.target().symbol(*l);
    if let Some(i) = y1.letters().iter().zip(y2.letters()).position(|(a, b)| sym1(a) != sym2(b)) {
        return Err(Error::DifferentSequences(i));
    }
    let independence = multiplicatively_independent(p as u64, q as u64)?;
    let outcome = if independence.independent {
        match is_ultimately_periodic(&y1) {
            Periodicity::Periodic { period, preperiod, certified } => CobhamOutcome::Periodic { period, preperiod, certified },
            verdict => CobhamOutcome::CounterexampleCandidate {
                verdict,
                note: "independent bases force an ultimately periodic sequence; this indicates an implementation error",
            },
        }
    } else {
        CobhamOutcome::Dependent(dependent_evidence(s1, c1, s2, c2, p, q, max_len)?)
    };
    Ok(CobhamReport { p, q, agreement_len: AGREEMENT_LEN, independence, outcome })
}

struct Scaled {
    word: Vec<Letter>,
    k1: usize,
    k2: usize,
    f1: BigRational,
    f2: BigRational,
}

fn dependent_evidence(
    s1: &Substitution,
    c1: &Coding,
    s2: &Substitution,
    c2: &Coding,
    p: usize,
    q: usize,
    max_len: usize,
) -> Result<DependentEvidence> {
    let t1 = CodedFrequencies::new(s1, &BlockMap::from_coding(c1), max_len)?;
    let t2 = CodedFrequencies::new(s2, &BlockMap::from_coding(c2), max_len)?;
    let exact = |f: &Frequency| {
        f.exact.clone().ok_or_else(|| Error::InsufficientData("exact frequencies unavailable".into()))
    };
    let pow = |b: usize, e: usize| BigRational::from_integer(num_traits::pow(BigInt::from(b), e));
    let mut agree = true;
    let mut rows: Vec<Scaled> = Vec::new();
    for n in 1..=max_len {
        let a = t1.table(n)?;
        let b = t2.table(n)?;
        let mut translated: BTreeMap<Vec<Letter>, BigRational> = BTreeMap::new();
        for (u, (f, _)) in &b {
            let v = u
                .iter()
                .map(|&l| c1.target().letter(c2.target().symbol(l)))
                .collect::<Result<Vec<Letter>>>()?;
            translated.insert(v, exact(f)?);
        }
        let (k1, k2) = (scaling_exponent(s1, n)?, scaling_exponent(s2, n)?);
        for (u, (f, _)) in &a {
            let x = exact(f)?;
            if translated.get(u) != Some(&x) {
                agree = false;
            }
            rows.push(Scaled { word: u.clone(), k1, k2, f1: &x * pow(p, k1), f2: &x * pow(q, k2) });
        }
        if translated.len() != a.len() {
            agree = false;
        }
    }
    let scaled_p = rows.iter().map(|r| r.f1.clone()).collect();
    let scaled_q = rows.iter().map(|r| r.f2.clone()).collect();
    let mut witness = None;
    'search: for (j, long) in rows.iter().enumerate() {
        for short in &rows[..j] {
            if short.k1 < long.k1 && short.k2 < long.k2 && short.f1 == long.f1 && short.f2 == long.f2 {
                witness = Some(ScalingWitness {
                    short: Word::new(c1.target().clone(), short.word.clone())?,
                    long: Word::new(c1.target().clone(), long.word.clone())?,
                    p_exponent: (long.k1 - short.k1) as u32,
                    q_exponent: (long.k2 - short.k2) as u32,
                });
                break 'search;
            }
        }
    }
    let witness_consistent = witness.as_ref().is_some_and(|w| {
        BigInt::from(p).pow(w.p_exponent) == BigInt::from(q).pow(w.q_exponent)
    });
    Ok(DependentEvidence { max_len, frequencies_agree: agree, scaled_p, scaled_q, witness, witness_consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::automata::{automaton_to_substitution, example_even_base2, example_even_base3};
    use crate::perron::empirical_frequency;
    use crate::recurrence::lr_constant_estimate;
    use crate::substitution::bit_alphabet;

    fn tm() -> Substitution {
        Substitution::from_rules("a", &[("a", "ab"), ("b", "ba")]).unwrap()
    }

    fn morse() -> BlockMap {
        let c = Coding::from_pairs(tm().alphabet().clone(), bit_alphabet(), &[("a", "1"), ("b", "0")]).unwrap();
        BlockMap::from_coding(&c)
    }

    fn edge_map() -> BlockMap {
        BlockMap::from_fn(tm().alphabet().clone(), bit_alphabet(), 1, |w| Letter(u32::from(w[0] != w[2]))).unwrap()
    }

    fn bits(s: &str) -> Word {
        Word::parse(bit_alphabet(), s).unwrap()
    }

    #[test]
    fn apply_examples() {
        let a = tm().alphabet().clone();
        assert_eq!(morse().apply(&Word::parse(a.clone(), "abba").unwrap()).unwrap().to_string(), "1001");
        assert_eq!(edge_map().apply(&Word::parse(a.clone(), "abbab").unwrap()).unwrap().to_string(), "110");
        let centre = BlockMap::from_fn(a.clone(), a.clone(), 1, |w| w[1]).unwrap();
        let w = Word::parse(a.clone(), "abbabaab").unwrap();
        assert_eq!(centre.apply(&w).unwrap().to_string(), "bbabaa");
        assert!(matches!(edge_map().apply(&Word::parse(a, "ab").unwrap()), Err(Error::WindowTooSmall(_))));
        assert!(edge_map().is_total());
    }

    #[test]
    fn shift_equivariance() {
        let x = tm().fixed_point_letters(200).unwrap();
        let f = edge_map();
        let full = f.apply_letters(&x).unwrap();
        for shift in [1, 5, 17] {
            assert_eq!(f.apply_letters(&x[shift..]).unwrap(), full[shift..]);
        }
    }

    #[test]
    fn nd_application() {
        let s = crate::nd::NdSubstitution::from_rules(2, 2, "a", &[("a", "abba"), ("b", "baab")]).unwrap();
        let w = s.fixed_array(3).unwrap();
        let alpha = s.alphabet().clone();
        let table = box_positions(&[2, 2, 2, 2])
            .map(|p| {
                let k: Vec<Letter> = p.iter().map(|&c| Letter::from(c)).collect();
                let v = Letter(u32::from(k[0] == k[3]));
                (k, v)
            })
            .collect();
        let f = BlockMap::new(alpha, bit_alphabet(), 2, 2, table).unwrap();
        let out = f.apply_window(&w).unwrap();
        assert_eq!(out.shape(), &[7, 7]);
        for p in box_positions(&[7, 7]) {
            let same = w.get(&p) == w.get(&[p[0] + 1, p[1] + 1]);
            assert_eq!(out.get(&p), Some(Letter(u32::from(same))));
        }
    }

    #[test]
    fn preimage_examples() {
        let l2 = tm().factor_set(2).unwrap();
        let got = preimages(&morse(), &bits("10"), &l2).unwrap();
        assert_eq!(got.into_iter().map(|w| w.to_string()).collect::<Vec<_>>(), vec!["ab"]);
        let x = tm().fixed_point_prefix(64).unwrap();
        let v = x.factor(3, 10);
        let u = edge_map().apply(&v).unwrap();
        let lang = tm().factor_set(7).unwrap();
        assert!(preimages(&edge_map(), &u, &lang).unwrap().contains(&v));
        assert!(matches!(preimages(&edge_map(), &u, &l2), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn preimages_partition_language() {
        let lang = tm().factor_set(9).unwrap();
        let parts = preimage_partition(&edge_map(), &lang).unwrap();
        let total: usize = parts.values().map(BTreeSet::len).sum();
        assert_eq!(total, lang.len());
        let k = lr_constant_estimate(&tm(), 16).unwrap().k_hat;
        assert!(parts.values().all(|p| p.len() <= 4 * k * (k + 1)));
    }

    #[test]
    fn coded_frequency_examples() {
        let one = factor_frequencies(&tm(), &morse(), &bits("1")).unwrap();
        assert_eq!(one.exact, Some(BigRational::new(1.into(), 2.into())));
        let ones = factor_frequencies(&tm(), &morse(), &bits("11")).unwrap();
        assert_eq!(ones.exact, Some(BigRational::new(1.into(), 6.into())));
        for f in [morse(), edge_map()] {
            let cf = CodedFrequencies::new(&tm(), &f, 6).unwrap();
            let y = coded_block_prefix(&tm(), &f, 200_000).unwrap();
            for n in 1..=6 {
                let t = cf.table(n).unwrap();
                let sum: BigRational = t.values().map(|(fr, _)| fr.exact.clone().unwrap()).sum();
                assert!(sum.is_one());
                for (u, (fr, _)) in &t {
                    assert!((empirical_frequency(&y, u) - fr.value).abs() < 1e-3);
                }
            }
        }
    }

    #[test]
    fn recoding_reproduces_block_map() {
        let (kb, c) = recode_as_coding(&tm(), &edge_map()).unwrap();
        let via = crate::substitution::coded_prefix(kb.substitution(), &c, 500).unwrap();
        assert_eq!(via.letters(), &coded_block_prefix(&tm(), &edge_map(), 500).unwrap()[..]);
    }

    #[test]
    fn factor_lr_checks() {
        let k = lr_constant_estimate(&tm(), 16).unwrap().k_hat;
        assert!(check_factor_lr(&tm(), &morse(), 16, k).unwrap().passed());
        let rep = check_factor_lr(&tm(), &edge_map(), 16, k).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.empirical_threshold.is_some());
        let constant = BlockMap::from_fn(tm().alphabet().clone(), bit_alphabet(), 0, |_| Letter(0)).unwrap();
        assert!(check_factor_lr(&tm(), &constant, 8, k).unwrap().skipped_periodic);
    }

    #[test]
    fn demo_independent_bases() {
        let (s1, c1) = automaton_to_substitution(&example_even_base2()).unwrap();
        let (s2, c2) = automaton_to_substitution(&example_even_base3()).unwrap();
        let r = cobham_demo(&s1, &c1, &s2, &c2, 8).unwrap();
        assert!(r.independence.independent);
        assert!(matches!(r.outcome, CobhamOutcome::Periodic { period: 2, certified: true, .. }));
        let tm_coding = Coding::from_pairs(tm().alphabet().clone(), bit_alphabet(), &[("a", "1"), ("b", "0")]).unwrap();
        assert!(matches!(cobham_demo(&s1, &c1, &tm(), &tm_coding, 8), Err(Error::DifferentSequences(_))));
    }

    #[test]
    fn demo_dependent_bases() {
        let s2 = tm().power(2).unwrap();
        let c = Coding::identity(tm().alphabet().clone());
        let r = cobham_demo(&tm(), &c, &s2, &c, 12).unwrap();
        assert_eq!((r.p, r.q), (2, 4));
        let CobhamOutcome::Dependent(ev) = r.outcome else { panic!("dependent bases") };
        assert!(ev.frequencies_agree);
        assert!(ev.witness_consistent, "{:?}", ev.witness);
        assert!(ev.scaled_p.len() <= 4 && !ev.scaled_q.is_empty());
    }
}
