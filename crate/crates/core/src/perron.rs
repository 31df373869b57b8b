//! Primitivity, Perron eigendata and frequencies of factors.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph;
use crate::substitution::Substitution;
use crate::words::{count_slice, IncidenceMatrix, Letter, Word};

/// True iff some power of `m` is entrywise positive.
///
/// Decided on the support digraph: strongly connected with period 1.
pub fn is_primitive(m: &IncidenceMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(false);
    }
    // column j produces row i: edge j -> i
    let adj: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&i| m.get(i, j) > 0).collect()).collect();
    let comps = graph::sccs(&adj);
    if comps.len() != 1 || !graph::is_cyclic(&adj, &comps[0]) {
        return Ok(false);
    }
    Ok(graph::period(&adj, &comps[0]).0 == 1)
}

/// Perron eigenvalue and eigenvectors of a primitive matrix.
///
/// `right` sums to 1 and `left · right = 1`. When the column sums (or the row
/// sums) are all equal the data is exact and the rational fields are set.
#[derive(Debug, Clone)]
pub struct EigenData {
    pub theta: f64,
    pub theta_exact: Option<BigRational>,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    pub right_exact: Option<Vec<BigRational>>,
    pub left_exact: Option<Vec<BigRational>>,
    /// Estimated spectral radius of `M − θ·r·lᵀ`.
    pub secondary_radius: f64,
    /// Max of `|Mr − θr|` and `|lM − θl|` in floating point.
    pub residual: f64,
}

impl EigenData {
    pub fn is_exact(&self) -> bool {
        self.theta_exact.is_some()
    }
}

pub fn perron_data(m: &IncidenceMatrix) -> Result<EigenData> {
    if !is_primitive(m)? {
        return Err(Error::NotPrimitive);
    }
    let n = m.rows();
    let cols = m.column_sums();
    let rows: Vec<u64> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).sum()).collect();
    let mut data = if cols.iter().all(|&c| c == cols[0]) {
        let theta = cols[0];
        let right = normalize_sum(rational_kernel(shifted(m, theta, false))?);
        let left = vec![BigRational::one(); n];
        exact_data(m, theta, right, left)?
    } else if rows.iter().all(|&r| r == rows[0]) {
        let theta = rows[0];
        let right = vec![BigRational::new(BigInt::one(), BigInt::from(n)); n];
        let raw = rational_kernel(shifted(m, theta, true))?;
        let dot: BigRational = raw.iter().zip(&right).map(|(l, r)| l * r).sum();
        let left = raw.into_iter().map(|l| l / &dot).collect();
        exact_data(m, theta, right, left)?
    } else {
        float_data(m)
    };
    data.secondary_radius = secondary_radius(m, &data);
    Ok(data)
}

fn shifted(m: &IncidenceMatrix, theta: u64, transpose: bool) -> Vec<Vec<BigRational>> {
    let n = m.rows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = if transpose { m.get(j, i) } else { m.get(i, j) };
                    let mut x = BigRational::from_integer(BigInt::from(v));
                    if i == j {
                        x -= BigRational::from_integer(BigInt::from(theta));
                    }
                    x
                })
                .collect()
        })
        .collect()
}

fn normalize_sum(v: Vec<BigRational>) -> Vec<BigRational> {
    let s: BigRational = v.iter().sum();
    v.into_iter().map(|x| x / &s).collect()
}

/// A non-zero vector in the kernel of `a`, by exact row reduction.
pub(crate) fn rational_kernel(mut a: Vec<Vec<BigRational>>) -> Result<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..cols)
        .find(|c| !pivot_cols.contains(c))
        .ok_or_else(|| Error::Invariant("Perron eigenvalue has trivial eigenspace".into()))?;
    let mut x = vec![BigRational::zero(); cols];
    x[free] = BigRational::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -a[row][free].clone();
    }
    Ok(x)
}

fn exact_data(m: &IncidenceMatrix, theta: u64, right: Vec<BigRational>, left: Vec<BigRational>) -> Result<EigenData> {
    let n = m.rows();
    let t = BigRational::from_integer(BigInt::from(theta));
    for i in 0..n {
        let mr: BigRational = (0..n).map(|j| BigRational::from_integer(BigInt::from(m.get(i, j))) * &right[j]).sum();
        let lm: BigRational = (0..n).map(|j| BigRational::from_integer(BigInt::from(m.get(j, i))) * &left[j]).sum();
        if mr != &t * &right[i] || lm != &t * &left[i] {
            return Err(Error::Invariant("exact eigenvector check failed".into()));
        }
    }
    if right.iter().chain(&left).any(|x| !x.is_positive()) {
        return Err(Error::Invariant("Perron vector not positive".into()));
    }
    Ok(EigenData {
        theta: theta as f64,
        theta_exact: Some(t),
        right: right.iter().map(to_f64).collect(),
        left: left.iter().map(to_f64).collect(),
        right_exact: Some(right),
        left_exact: Some(left),
        secondary_radius: 0.0,
        residual: 0.0,
    })
}

pub(crate) fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn mat_vec(m: &IncidenceMatrix, v: &[f64], transpose: bool) -> Vec<f64> {
    let n = m.rows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if transpose { m.get(j, i) } else { m.get(i, j) } as f64 * v[j])
                .sum()
        })
        .collect()
}

/// Power iteration with Collatz–Wielandt bracketing.
fn power_vector(m: &IncidenceMatrix, transpose: bool) -> (f64, Vec<f64>) {
    let n = m.rows();
    let mut v = vec![1.0 / n as f64; n];
    let mut theta = 0.0;
    for _ in 0..100_000 {
        let w = mat_vec(m, &v, transpose);
        let ratios = w.iter().zip(&v).map(|(a, b)| a / b);
        let lo = ratios.clone().fold(f64::INFINITY, f64::min);
        let hi = ratios.fold(0.0, f64::max);
        let s: f64 = w.iter().sum();
        v = w.into_iter().map(|x| x / s).collect();
        theta = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    (theta, v)
}

fn float_data(m: &IncidenceMatrix) -> EigenData {
    let (theta, right) = power_vector(m, false);
    let (_, left_raw) = power_vector(m, true);
    let dot: f64 = left_raw.iter().zip(&right).map(|(l, r)| l * r).sum();
    let left: Vec<f64> = left_raw.iter().map(|l| l / dot).collect();
    let mr = mat_vec(m, &right, false);
    let lm = mat_vec(m, &left, true);
    let residual = mr
        .iter()
        .zip(&right)
        .map(|(a, b)| (a - theta * b).abs())
        .chain(lm.iter().zip(&left).map(|(a, b)| (a - theta * b).abs()))
        .fold(0.0, f64::max);
    EigenData {
        theta,
        theta_exact: None,
        right,
        left,
        right_exact: None,
        left_exact: None,
        secondary_radius: 0.0,
        residual,
    }
}

/// Growth rate of the deflated matrix `M − θ r lᵀ` on a fixed probe vector.
fn secondary_radius(m: &IncidenceMatrix, e: &EigenData) -> f64 {
    let n = m.rows();
    let deflated = |v: &[f64]| -> Vec<f64> {
        let lv: f64 = e.left.iter().zip(v).map(|(a, b)| a * b).sum();
        mat_vec(m, v, false).iter().zip(&e.right).map(|(x, r)| x - e.theta * r * lv).collect()
    };
    let mut v: Vec<f64> = (0..n).map(|i| ((i as f64 + 1.0) * 0.618_033_988_7).fract() - 0.5).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (burn, steps) = (64, 128);
    let mut log_growth = 0.0;
    for step in 0..burn + steps {
        let w = deflated(&v);
        let nw = norm(&w);
        let nv = norm(&v);
        if nw <= 1e-12 * e.theta * nv || nw == 0.0 {
            return 0.0;
        }
        if step >= burn {
            log_growth += (nw / nv).ln();
        }
        v = w.into_iter().map(|x| x / nw).collect();
    }
    (log_growth / steps as f64).exp()
}

/// A frequency, exact when the eigendata was.
#[derive(Debug, Clone, PartialEq)]
pub struct Frequency {
    pub value: f64,
    pub exact: Option<BigRational>,
}

impl Frequency {
    fn from_exact(x: BigRational) -> Frequency {
        Frequency { value: to_f64(&x), exact: Some(x) }
    }

    fn zero() -> Frequency {
        Frequency::from_exact(BigRational::zero())
    }
}

/// Frequencies of all factors of one length.
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    pub length: usize,
    pub entries: BTreeMap<Word, Frequency>,
}

impl FrequencyTable {
    pub fn get(&self, w: &Word) -> Option<&Frequency> {
        self.entries.get(w)
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(|f| f.exact.is_some())
    }

    pub fn total(&self) -> f64 {
        self.entries.values().map(|f| f.value).sum()
    }
}

fn require_primitive(s: &Substitution) -> Result<()> {
    if is_primitive(&s.incidence_matrix())? {
        Ok(())
    } else {
        Err(Error::NotPrimitive)
    }
}

pub fn letter_frequencies(s: &Substitution) -> Result<FrequencyTable> {
    require_primitive(s)?;
    let e = perron_data(&s.incidence_matrix())?;
    let entries = s
        .alphabet()
        .letters()
        .map(|l| {
            let f = match &e.right_exact {
                Some(r) => Frequency::from_exact(r[l.index()].clone()),
                None => Frequency { value: e.right[l.index()], exact: None },
            };
            (Word::from_letters_unchecked(s.alphabet().clone(), vec![l]), f)
        })
        .collect();
    Ok(FrequencyTable { length: 1, entries })
}

/// Frequencies of length-`k` factors, read off the Perron vector of `σ_k`.
pub fn word_frequencies(s: &Substitution, k: usize) -> Result<FrequencyTable> {
    require_primitive(s)?;
    if k == 0 {
        let entries = BTreeMap::from([(Word::empty(s.alphabet().clone()), Frequency::from_exact(BigRational::one()))]);
        return Ok(FrequencyTable { length: 0, entries });
    }
    let kb = s.k_block(k)?;
    let table = letter_frequencies(kb.substitution())?;
    let entries = table
        .entries
        .into_iter()
        .map(|(w, f)| (kb.factor(w.letters()[0]), f))
        .collect();
    Ok(FrequencyTable { length: k, entries })
}

/// Frequencies of arbitrary factors from the length-2 frequencies.
///
/// An occurrence of `u` starts inside `σᵏ(xᵢ)` for exactly one `i`, and lies
/// inside `σᵏ(xᵢxᵢ₊₁)` once every `|σᵏ(c)| ≥ |u| − 1`. Hence
/// `freq(u) = Σ_ab N_k(u, ab)·freq(ab) / Σ_a |σᵏ(a)|·freq(a)` with `N_k`
/// counting occurrences starting in the `σᵏ(a)` half.
#[derive(Debug, Clone)]
pub struct FactorFrequencies {
    letters: Vec<Frequency>,
    pairs: Vec<([Letter; 2], Frequency)>,
    /// `images[k][a] = σᵏ(a)`.
    images: Vec<Vec<Vec<Letter>>>,
    exact: bool,
}

impl FactorFrequencies {
    /// Prepares to evaluate factors up to length `max_len`.
    pub fn new(s: &Substitution, max_len: usize) -> Result<FactorFrequencies> {
        require_primitive(s)?;
        if s.is_erasing() {
            return Err(Error::InvalidSubstitution("frequencies require a non-erasing substitution".into()));
        }
        let letters: Vec<Frequency> = letter_frequencies(s)?.entries.into_values().collect();
        let pairs: Vec<([Letter; 2], Frequency)> = word_frequencies(s, 2)?
            .entries
            .into_iter()
            .map(|(w, f)| ([w.letters()[0], w.letters()[1]], f))
            .collect();
        let exact = letters.iter().chain(pairs.iter().map(|(_, f)| f)).all(|f| f.exact.is_some());
        let mut images: Vec<Vec<Vec<Letter>>> = vec![s.alphabet().letters().map(|l| vec![l]).collect()];
        while images.last().expect("non-empty").iter().map(Vec::len).min().unwrap_or(0) + 1 < max_len {
            let next = images
                .last()
                .expect("non-empty")
                .iter()
                .map(|w| s.morphism().apply_letters(w))
                .collect();
            images.push(next);
        }
        Ok(FactorFrequencies { letters, pairs, images, exact })
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Least `k` such that every `σᵏ(c)` has length at least `n`.
    fn level(&self, n: usize) -> Option<usize> {
        self.images.iter().position(|im| im.iter().map(Vec::len).min().unwrap_or(0) >= n)
    }

    pub fn frequency(&self, u: &[Letter]) -> Result<Frequency> {
        match u.len() {
            0 => return Ok(Frequency::from_exact(BigRational::one())),
            1 => return Ok(self.letters.get(u[0].index()).cloned().unwrap_or_else(Frequency::zero)),
            _ => {}
        }
        let k = self
            .level(u.len() - 1)
            .ok_or_else(|| Error::OutOfRange(format!("factor length {} exceeds prepared bound", u.len())))?;
        let im = &self.images[k];
        let mut num_exact = BigRational::zero();
        let mut num = 0.0;
        for ([a, b], f) in &self.pairs {
            let (ia, ib) = (&im[a.index()], &im[b.index()]);
            let mut joined = Vec::with_capacity(ia.len() + ib.len());
            joined.extend_from_slice(ia);
            joined.extend_from_slice(ib);
            let count = anchored_count(&joined, u, ia.len());
            if count == 0 {
                continue;
            }
            num += count as f64 * f.value;
            if let Some(x) = &f.exact {
                num_exact += x * BigRational::from_integer(BigInt::from(count));
            }
        }
        let mut den_exact = BigRational::zero();
        let mut den = 0.0;
        for (a, f) in self.letters.iter().enumerate() {
            den += im[a].len() as f64 * f.value;
            if let Some(x) = &f.exact {
                den_exact += x * BigRational::from_integer(BigInt::from(im[a].len()));
            }
        }
        Ok(if self.exact {
            Frequency::from_exact(num_exact / den_exact)
        } else {
            Frequency { value: num / den, exact: None }
        })
    }
}

/// Occurrences of `u` in `w` starting before `limit`.
pub(crate) fn anchored_count(w: &[Letter], u: &[Letter], limit: usize) -> usize {
    if u.len() > w.len() {
        return 0;
    }
    let last = limit.min(w.len() - u.len() + 1);
    (0..last).filter(|&i| w[i..i + u.len()] == *u).count()
}

/// Scaled frequencies of one factor length.
#[derive(Debug, Clone)]
pub struct LengthScaling {
    pub length: usize,
    /// `k(n)`: least `k` with `n ≤ min_a |σᵏ(a)|`.
    pub k: usize,
    pub values: BTreeSet<BigRational>,
}

/// Result of [`verify_theta_scaling`].
#[derive(Debug, Clone)]
pub struct ThetaScalingReport {
    pub theta: BigRational,
    pub max_len: usize,
    pub per_length: Vec<LengthScaling>,
    /// Some length `n` has at most `n` factors: the fixed point is periodic and
    /// the scaled set grows without bound.
    pub periodic: bool,
}

impl ThetaScalingReport {
    /// `{freq(u)·θ^{k(|u|)} : 1 ≤ |u| ≤ cutoff}`.
    pub fn set_up_to(&self, cutoff: usize) -> BTreeSet<BigRational> {
        self.per_length
            .iter()
            .filter(|l| l.length <= cutoff)
            .flat_map(|l| l.values.iter().cloned())
            .collect()
    }

    pub fn cardinality(&self) -> usize {
        self.set_up_to(self.max_len).len()
    }

    pub fn stabilized_between(&self, a: usize, b: usize) -> bool {
        self.set_up_to(a) == self.set_up_to(b)
    }

    /// Same set at `max_len / 2` and at `max_len`.
    pub fn stabilized(&self) -> bool {
        self.stabilized_between(self.max_len / 2, self.max_len)
    }
}

/// Least `k` with `n ≤ min_a |σᵏ(a)|`.
pub fn scaling_exponent(s: &Substitution, n: usize) -> Result<usize> {
    let m = s.incidence_matrix();
    let mut lengths: Vec<u64> = vec![1; m.cols()];
    for k in 0..=64 {
        if lengths.iter().min().copied().unwrap_or(0) >= n as u64 {
            return Ok(k);
        }
        lengths = (0..m.cols())
            .map(|j| {
                (0..m.rows()).try_fold(0u64, |acc, i| {
                    m.get(i, j).checked_mul(lengths[i]).and_then(|x| acc.checked_add(x))
                })
            })
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Overflow("image lengths"))?;
    }
    Err(Error::Invariant("image lengths do not grow".into()))
}

/// The realized set `{freq(u)·θ^{k(|u|)}}` for `1 ≤ |u| ≤ max_len`.
pub fn verify_theta_scaling(s: &Substitution, max_len: usize) -> Result<ThetaScalingReport> {
    require_primitive(s)?;
    let e = perron_data(&s.incidence_matrix())?;
    let theta = e
        .theta_exact
        .clone()
        .ok_or_else(|| Error::NotConstantLength)?;
    let oracle = FactorFrequencies::new(s, max_len)?;
    let mut per_length = Vec::new();
    let mut periodic = false;
    for n in 1..=max_len {
        let factors = s.factor_set(n)?;
        if factors.len() <= n {
            periodic = true;
        }
        let k = scaling_exponent(s, n)?;
        let scale = num_traits::pow(theta.clone(), k);
        let values = factors
            .iter()
            .map(|u| {
                let f = oracle.frequency(u)?;
                let x = f.exact.ok_or_else(|| Error::Invariant("inexact frequency".into()))?;
                Ok(x * &scale)
            })
            .collect::<Result<BTreeSet<_>>>()?;
        per_length.push(LengthScaling { length: n, k, values });
    }
    Ok(ThetaScalingReport { theta, max_len, per_length, periodic })
}

/// Empirical frequencies of length-`k` factors in `w`, as `count / (|w|−k+1)`.
pub fn empirical_frequencies(w: &[Letter], k: usize) -> HashMap<Vec<Letter>, f64> {
    let total = (w.len() + 1).saturating_sub(k).max(1) as f64;
    let mut counts: HashMap<Vec<Letter>, usize> = HashMap::new();
    if k > 0 && k <= w.len() {
        for f in w.windows(k) {
            *counts.entry(f.to_vec()).or_insert(0) += 1;
        }
    }
    counts.into_iter().map(|(f, c)| (f, c as f64 / total)).collect()
}

/// Number of occurrences of `u` in `w` divided by `|w|`.
pub fn empirical_frequency(w: &[Letter], u: &[Letter]) -> f64 {
    count_slice(u, w) as f64 / w.len().max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tm() -> Substitution {
        Substitution::from_rules("a", &[("a", "ab"), ("b", "ba")]).unwrap()
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&tm().incidence_matrix()).unwrap());
        let s2 = Substitution::from_rules("a", &[("a", "ab"), ("b", "bc"), ("c", "cc")]).unwrap();
        assert!(!is_primitive(&s2.incidence_matrix()).unwrap());
        assert!(!is_primitive(&IncidenceMatrix::identity(3)).unwrap());
        assert!(is_primitive(&IncidenceMatrix::identity(1)).unwrap());
        let rot = IncidenceMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!is_primitive(&rot).unwrap());
        let bad = IncidenceMatrix::zeros(2, 3);
        assert!(matches!(is_primitive(&bad), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn primitivity_matches_positive_power() {
        let mats = [
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]],
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
            vec![vec![1, 1], vec![1, 0]],
            vec![vec![0, 2], vec![3, 0]],
        ];
        for rows in mats {
            let m = IncidenceMatrix::from_rows(rows).unwrap();
            let n = m.rows() as u32;
            // Wielandt bound (n−1)²+1
            let k = (n - 1) * (n - 1) + 1;
            assert_eq!(is_primitive(&m).unwrap(), m.pow(k).unwrap().is_positive());
        }
    }

    #[test]
    fn exact_eigendata() {
        let e = perron_data(&tm().incidence_matrix()).unwrap();
        assert_eq!(e.theta_exact, Some(r(2, 1)));
        assert_eq!(e.right_exact, Some(vec![r(1, 2), r(1, 2)]));
        assert_eq!(e.left_exact, Some(vec![r(1, 1), r(1, 1)]));
        let sb = Substitution::from_rules("a", &[("a", "aba"), ("b", "bab")]).unwrap();
        let e = perron_data(&sb.incidence_matrix()).unwrap();
        assert_eq!(e.theta_exact, Some(r(3, 1)));
        assert_eq!(e.right_exact, Some(vec![r(1, 2), r(1, 2)]));
        let k2 = tm().k_block(2).unwrap();
        let e = perron_data(&k2.substitution().incidence_matrix()).unwrap();
        assert_eq!(e.right_exact, Some(vec![r(1, 6), r(1, 3), r(1, 3), r(1, 6)]));
        let s2 = Substitution::from_rules("a", &[("a", "ab"), ("b", "bc"), ("c", "cc")]).unwrap();
        assert_eq!(perron_data(&s2.incidence_matrix()).unwrap_err(), Error::NotPrimitive);
    }

    #[test]
    fn floating_eigendata_for_fibonacci() {
        let fib = Substitution::from_rules("a", &[("a", "ab"), ("b", "a")]).unwrap();
        let e = perron_data(&fib.incidence_matrix()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(!e.is_exact());
        assert!((e.theta - phi).abs() < 1e-12);
        assert!(e.residual < 1e-10);
        assert!((e.right.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((e.right[0] - 1.0 / phi).abs() < 1e-12);
        let dot: f64 = e.left.iter().zip(&e.right).map(|(a, b)| a * b).sum();
        assert!((dot - 1.0).abs() < 1e-12);
        assert!((e.secondary_radius - 1.0 / phi).abs() < 1e-6);
    }

    #[test]
    fn image_lengths_approach_left_vector() {
        let s = Substitution::from_rules("a", &[("a", "abc"), ("b", "ac"), ("c", "b")]).unwrap();
        let e = perron_data(&s.incidence_matrix()).unwrap();
        let m = s.incidence_matrix();
        let err = |n: u32, b: usize| {
            let lens = m.pow(n).unwrap().column_sums();
            (lens[b] as f64 / e.theta.powi(n as i32) - e.left[b]).abs()
        };
        let ratio = e.secondary_radius / e.theta;
        for b in 0..3 {
            let (early, late) = (err(4, b), err(20, b));
            assert!(late <= early * ratio.powi(16) * 10.0 + 1e-12, "b={b}: {early} {late}");
        }
    }

    #[test]
    fn letter_and_word_frequencies() {
        let t = letter_frequencies(&tm()).unwrap();
        assert!(t.entries.values().all(|f| f.exact == Some(r(1, 2))));
        let t2 = word_frequencies(&tm(), 2).unwrap();
        let got: Vec<(String, BigRational)> =
            t2.entries.iter().map(|(w, f)| (w.to_string(), f.exact.clone().unwrap())).collect();
        assert_eq!(
            got,
            vec![
                ("aa".into(), r(1, 6)),
                ("ab".into(), r(1, 3)),
                ("ba".into(), r(1, 3)),
                ("bb".into(), r(1, 6)),
            ]
        );
        for k in 0..=5 {
            let t = word_frequencies(&tm(), k).unwrap();
            let total: BigRational = t.entries.values().map(|f| f.exact.clone().unwrap()).sum();
            assert_eq!(total, r(1, 1));
        }
    }

    #[test]
    fn pair_route_matches_block_route() {
        let subs = [
            tm(),
            Substitution::from_rules("a", &[("a", "aab"), ("b", "bba")]).unwrap(),
            Substitution::from_rules("a", &[("a", "abc"), ("b", "bac"), ("c", "cab")]).unwrap(),
        ];
        for s in subs {
            let oracle = FactorFrequencies::new(&s, 6).unwrap();
            for k in 1..=6 {
                for (w, f) in word_frequencies(&s, k).unwrap().entries {
                    assert_eq!(oracle.frequency(w.letters()).unwrap(), f, "{w}");
                }
            }
        }
    }

    #[test]
    fn pair_route_for_non_constant_length() {
        let fib = Substitution::from_rules("a", &[("a", "ab"), ("b", "a")]).unwrap();
        let oracle = FactorFrequencies::new(&fib, 8).unwrap();
        let x = fib.fixed_point_letters(200_000).unwrap();
        for k in 1..=5 {
            for (w, f) in word_frequencies(&fib, k).unwrap().entries {
                let pair = oracle.frequency(w.letters()).unwrap().value;
                assert!((pair - f.value).abs() < 1e-9);
                assert!((empirical_frequency(&x, w.letters()) - f.value).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn theta_scaling_for_thue_morse() {
        let rep = verify_theta_scaling(&tm(), 16).unwrap();
        assert!(!rep.periodic);
        assert!(rep.stabilized_between(12, 16));
        assert_eq!(rep.cardinality(), 3);
        assert_eq!(rep.set_up_to(16), BTreeSet::from([r(1, 3), r(1, 2), r(2, 3)]));
        assert_eq!(rep.per_length[2].k, 2);
        let sb = Substitution::from_rules("a", &[("a", "aba"), ("b", "bab")]).unwrap();
        let rep = verify_theta_scaling(&sb, 12).unwrap();
        assert!(rep.periodic);
        assert!(!rep.stabilized());
    }

    #[test]
    fn scaling_exponents() {
        let expect = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (16, 4), (17, 5)];
        for (n, k) in expect {
            assert_eq!(scaling_exponent(&tm(), n).unwrap(), k);
        }
    }
}
