//! Arrays over `ℕ^d`, patterns, cubic substitutions and pattern frequencies.
//!
//! Boxes are linearized with axis 1 fastest: the cell at `(x₁, …, x_d)` of a
//! box with extents `(n₁, …, n_d)` sits at `x₁ + n₁·(x₂ + n₂·(…))`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::perron::{is_primitive, perron_data};
use crate::substitution::Substitution;
use crate::words::{ensure_same, Alphabet, IncidenceMatrix, Letter, Morphism, Word};

/// Number of cells of a box, with overflow check.
pub(crate) fn volume(shape: &[usize]) -> Result<usize> {
    shape.iter().try_fold(1usize, |a, &b| a.checked_mul(b)).ok_or(Error::Overflow("box volume"))
}

pub(crate) fn linear(shape: &[usize], pos: &[usize]) -> usize {
    let mut idx = 0;
    for i in (0..shape.len()).rev() {
        idx = idx * shape[i] + pos[i];
    }
    idx
}

pub(crate) fn delinear(shape: &[usize], mut idx: usize) -> Vec<usize> {
    shape
        .iter()
        .map(|&n| {
            let c = idx % n;
            idx /= n;
            c
        })
        .collect()
}

/// All positions of the box `[0, shape)`, axis 1 fastest.
pub fn box_positions(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total = if shape.iter().any(|&n| n == 0) { 0 } else { shape.iter().product() };
    (0..total).map(move |i| delinear(shape, i))
}

/// Linear indices (in a box of `shape`) of the anchors `v` with `v + extent ≤ shape`.
pub(crate) fn anchors(shape: &[usize], extent: &[usize]) -> Vec<usize> {
    if extent.iter().zip(shape).any(|(e, n)| e > n) {
        return Vec::new();
    }
    let room: Vec<usize> = shape.iter().zip(extent).map(|(n, e)| n - e + 1).collect();
    box_positions(&room).map(|p| linear(shape, &p)).collect()
}

/// A finite box of an array, total on `[origin, origin + shape)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArrayWindow {
    alphabet: Arc<Alphabet>,
    origin: Vec<usize>,
    shape: Vec<usize>,
    cells: Vec<Letter>,
}

impl ArrayWindow {
    pub fn new(alphabet: Arc<Alphabet>, shape: Vec<usize>, cells: Vec<Letter>) -> Result<ArrayWindow> {
        if shape.is_empty() {
            return Err(Error::InvalidPattern("dimension must be at least 1".into()));
        }
        if volume(&shape)? != cells.len() {
            return Err(Error::InvalidPattern(format!(
                "shape {shape:?} needs {} cells, got {}",
                volume(&shape)?,
                cells.len()
            )));
        }
        if let Some(l) = cells.iter().find(|l| l.index() >= alphabet.len()) {
            return Err(Error::UnknownSymbol(format!("letter index {}", l.0)));
        }
        let origin = vec![0; shape.len()];
        Ok(ArrayWindow { alphabet, origin, shape, cells })
    }

    pub fn from_fn(alphabet: Arc<Alphabet>, shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> Letter) -> Result<ArrayWindow> {
        let cells = box_positions(&shape).map(|p| f(&p)).collect();
        ArrayWindow::new(alphabet, shape, cells)
    }

    pub fn single(alphabet: Arc<Alphabet>, dim: usize, l: Letter) -> Result<ArrayWindow> {
        ArrayWindow::new(alphabet, vec![1; dim.max(1)], vec![l])
    }

    pub fn with_origin(mut self, origin: Vec<usize>) -> Result<ArrayWindow> {
        if origin.len() != self.dim() {
            return Err(Error::InvalidPattern("origin dimension".into()));
        }
        self.origin = origin;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cells(&self) -> &[Letter] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Common extent when the box is a cube.
    pub fn side(&self) -> Option<usize> {
        let s = self.shape[0];
        self.shape.iter().all(|&n| n == s).then_some(s)
    }

    /// Letter at a position relative to the window's corner.
    pub fn get(&self, pos: &[usize]) -> Option<Letter> {
        if pos.len() != self.dim() || pos.iter().zip(&self.shape).any(|(p, n)| p >= n) {
            return None;
        }
        Some(self.cells[linear(&self.shape, pos)])
    }

    pub fn sub_window(&self, start: &[usize], shape: &[usize]) -> Result<ArrayWindow> {
        if start.len() != self.dim() || shape.len() != self.dim() {
            return Err(Error::InvalidPattern("dimension mismatch".into()));
        }
        if start.iter().zip(shape).zip(&self.shape).any(|((s, e), n)| s + e > *n) {
            return Err(Error::WindowTooSmall(format!("box at {start:?} of shape {shape:?} exceeds {:?}", self.shape)));
        }
        let cells = box_positions(shape)
            .map(|p| {
                let q: Vec<usize> = p.iter().zip(start).map(|(a, b)| a + b).collect();
                self.cells[linear(&self.shape, &q)]
            })
            .collect();
        let origin = self.origin.iter().zip(start).map(|(a, b)| a + b).collect();
        Ok(ArrayWindow { alphabet: self.alphabet.clone(), origin, shape: shape.to_vec(), cells })
    }

    /// Membership window of one letter: `1` where the cell holds `l`.
    pub fn indicator(&self, l: Letter) -> Vec<bool> {
        self.cells.iter().map(|&c| c == l).collect()
    }

    /// Rows of a 2-dimensional window: row `y` lists cells `(0, y) … (n₁−1, y)`.
    pub fn rows(&self) -> Result<Vec<&[Letter]>> {
        if self.dim() != 2 {
            return Err(Error::InvalidPattern(format!("expected a 2-dimensional window, got dimension {}", self.dim())));
        }
        Ok(self.cells.chunks(self.shape[0]).collect())
    }
}

impl fmt::Debug for ArrayWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArrayWindow({:?}, {})", self.shape, self.alphabet.render(&self.cells))
    }
}

impl fmt::Display for ArrayWindow {
    /// One line per axis-1 row; higher axes are separated by blank lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.alphabet.is_compact() { "" } else { " " };
        let row_len = self.shape[0];
        let plane = row_len * self.shape.get(1).copied().unwrap_or(1);
        for (i, row) in self.cells.chunks(row_len).enumerate() {
            if i > 0 && plane > 0 && (i * row_len) % plane == 0 {
                writeln!(f)?;
            }
            let syms: Vec<&str> = row.iter().map(|&l| self.alphabet.symbol(l)).collect();
            writeln!(f, "{}", syms.join(sep))?;
        }
        Ok(())
    }
}

/// Values on a finite configuration containing the zero vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    alphabet: Arc<Alphabet>,
    support: Vec<Vec<usize>>,
    values: Vec<Letter>,
}

impl Pattern {
    pub fn new(alphabet: Arc<Alphabet>, support: Vec<Vec<usize>>, values: Vec<Letter>) -> Result<Pattern> {
        if support.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if support.len() != values.len() {
            return Err(Error::InvalidPattern("support and values differ in size".into()));
        }
        let d = support[0].len();
        if d == 0 || support.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidPattern("support vectors must share a positive dimension".into()));
        }
        let distinct: BTreeSet<&Vec<usize>> = support.iter().collect();
        if distinct.len() != support.len() {
            return Err(Error::InvalidPattern("support vectors must be pairwise distinct".into()));
        }
        if !support.iter().any(|v| v.iter().all(|&c| c == 0)) {
            return Err(Error::InvalidPattern("support must contain the zero vector".into()));
        }
        if values.iter().any(|l| l.index() >= alphabet.len()) {
            return Err(Error::UnknownSymbol("pattern value".into()));
        }
        Ok(Pattern { alphabet, support, values })
    }

    /// The cubic (or box) pattern given by a whole window.
    pub fn from_window(w: &ArrayWindow) -> Pattern {
        Pattern {
            alphabet: w.alphabet.clone(),
            support: box_positions(&w.shape).collect(),
            values: w.cells.clone(),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.support[0].len()
    }

    pub fn support(&self) -> &[Vec<usize>] {
        &self.support
    }

    pub fn values(&self) -> &[Letter] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Per-axis extent of the bounding box.
    pub fn extent(&self) -> Vec<usize> {
        (0..self.dim()).map(|i| self.support.iter().map(|v| v[i]).max().unwrap_or(0) + 1).collect()
    }

    /// Side `R` when the support is the full cube `[0, R)^d`.
    pub fn cubic_side(&self) -> Option<usize> {
        let e = self.extent();
        let r = e[0];
        (e.iter().all(|&x| x == r) && Some(self.len()) == r.checked_pow(self.dim() as u32)).then_some(r)
    }
}

/// `#{v : v + supp(P) ⊆ box, w(v + x) = P(x)}`.
pub fn count_pattern(w: &ArrayWindow, p: &Pattern) -> Result<usize> {
    ensure_same(w.alphabet(), p.alphabet(), "count_pattern")?;
    if w.dim() != p.dim() {
        return Err(Error::InvalidPattern("pattern and window dimensions differ".into()));
    }
    Ok(count_raw(w, p))
}

fn count_raw(w: &ArrayWindow, p: &Pattern) -> usize {
    let offsets: Vec<usize> = p.support.iter().map(|x| linear(&w.shape, x)).collect();
    anchors(&w.shape, &p.extent())
        .into_iter()
        .filter(|&a| offsets.iter().zip(&p.values).all(|(o, v)| w.cells[a + o] == *v))
        .count()
}

/// Occurrences of every `R`-cube in `w`, keyed by cells in box order.
pub fn cubic_pattern_counts(w: &ArrayWindow, side: usize) -> HashMap<Vec<Letter>, usize> {
    let mut out = HashMap::new();
    if side == 0 {
        return out;
    }
    let extent = vec![side; w.dim()];
    let offsets: Vec<usize> = box_positions(&extent).map(|x| linear(&w.shape, &x)).collect();
    for a in anchors(&w.shape, &extent) {
        let key: Vec<Letter> = offsets.iter().map(|o| w.cells[a + o]).collect();
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

/// A substitution on `ℕ^d` mapping each letter to a cube of side `s`.
#[derive(Clone, PartialEq, Eq)]
pub struct NdSubstitution {
    alphabet: Arc<Alphabet>,
    dim: usize,
    side: usize,
    rules: Vec<Vec<Letter>>,
    seed: Letter,
}

impl NdSubstitution {
    pub fn new(alphabet: Arc<Alphabet>, dim: usize, side: usize, rules: Vec<Vec<Letter>>, seed: Letter) -> Result<NdSubstitution> {
        if dim == 0 {
            return Err(Error::InvalidSubstitution("dimension must be at least 1".into()));
        }
        if side < 2 {
            return Err(Error::InvalidSubstitution("side must be at least 2".into()));
        }
        let cells = volume(&vec![side; dim])?;
        if rules.len() != alphabet.len() {
            return Err(Error::InvalidSubstitution(format!("{} rules for {} letters", rules.len(), alphabet.len())));
        }
        for (i, r) in rules.iter().enumerate() {
            if r.len() != cells {
                return Err(Error::InvalidSubstitution(format!(
                    "rule for `{}` has {} cells, expected {cells}",
                    alphabet.symbol(Letter::from(i)),
                    r.len()
                )));
            }
            if r.iter().any(|l| l.index() >= alphabet.len()) {
                return Err(Error::UnknownSymbol("rule cell".into()));
            }
        }
        if seed.index() >= alphabet.len() {
            return Err(Error::InvalidSubstitution("seed outside alphabet".into()));
        }
        Ok(NdSubstitution { alphabet, dim, side, rules, seed })
    }

    /// Build from `(letter, cells)` rules; cells are listed axis 1 fastest,
    /// compact or whitespace separated.
    pub fn from_rules(dim: usize, side: usize, seed: &str, rules: &[(&str, &str)]) -> Result<NdSubstitution> {
        let alphabet = Alphabet::new(rules.iter().map(|(l, _)| *l))?;
        let cells = rules
            .iter()
            .map(|(_, r)| Ok(Word::parse(alphabet.clone(), r)?.into_letters()))
            .collect::<Result<Vec<_>>>()?;
        let seed = alphabet.letter(seed)?;
        NdSubstitution::new(alphabet, dim, side, cells, seed)
    }

    /// A constant-length substitution seen as the case `d = 1`.
    pub fn from_substitution(s: &Substitution) -> Result<NdSubstitution> {
        let side = s.constant_length().ok_or(Error::NotConstantLength)?;
        let rules = s.morphism().images().to_vec();
        NdSubstitution::new(s.alphabet().clone(), 1, side, rules, s.seed())
    }

    pub fn to_substitution(&self) -> Result<Substitution> {
        if self.dim != 1 {
            return Err(Error::InvalidSubstitution("only one-dimensional substitutions convert".into()));
        }
        Substitution::new(Morphism::new(self.alphabet.clone(), self.alphabet.clone(), self.rules.clone())?, self.seed)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    pub fn rule(&self, l: Letter) -> &[Letter] {
        &self.rules[l.index()]
    }

    pub fn rules(&self) -> &[Vec<Letter>] {
        &self.rules
    }

    pub fn block(&self, l: Letter) -> ArrayWindow {
        ArrayWindow {
            alphabet: self.alphabet.clone(),
            origin: vec![0; self.dim],
            shape: vec![self.side; self.dim],
            cells: self.rules[l.index()].clone(),
        }
    }

    /// `θ = s^d`.
    pub fn theta(&self) -> u64 {
        (self.side as u64).pow(self.dim as u32)
    }

    /// `M_{a,b} = #{k : rule(b)(k) = a}`.
    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let n = self.alphabet.len();
        let mut m = IncidenceMatrix::zeros(n, n);
        for (b, r) in self.rules.iter().enumerate() {
            for a in r {
                m.set(a.index(), b, m.get(a.index(), b) + 1);
            }
        }
        m
    }

    pub fn is_primitive(&self) -> bool {
        is_primitive(&self.incidence_matrix()).unwrap_or(false)
    }

    /// Cell `s·j + k` of the result is cell `k` of the rule of `w(j)`.
    pub fn expand(&self, w: &ArrayWindow) -> Result<ArrayWindow> {
        ensure_same(&self.alphabet, w.alphabet(), "expand")?;
        if w.dim() != self.dim {
            return Err(Error::InvalidPattern("window dimension differs from the substitution's".into()));
        }
        let shape: Vec<usize> = w.shape.iter().map(|n| n * self.side).collect();
        let total = volume(&shape)?;
        let block = vec![self.side; self.dim];
        let block_offsets: Vec<usize> = box_positions(&block).map(|k| linear(&shape, &k)).collect();
        let mut cells = vec![Letter(0); total];
        for (j_idx, j) in box_positions(&w.shape).enumerate() {
            let base: Vec<usize> = j.iter().map(|x| x * self.side).collect();
            let start = linear(&shape, &base);
            let rule = &self.rules[w.cells[j_idx].index()];
            for (k, off) in block_offsets.iter().enumerate() {
                cells[start + off] = rule[k];
            }
        }
        let origin = w.origin.iter().map(|o| o * self.side).collect();
        Ok(ArrayWindow { alphabet: self.alphabet.clone(), origin, shape, cells })
    }

    /// `Sⁿ(w)`.
    pub fn iterate(&self, w: &ArrayWindow, n: usize) -> Result<ArrayWindow> {
        let mut cur = w.clone();
        for _ in 0..n {
            cur = self.expand(&cur)?;
        }
        Ok(cur)
    }

    /// `S^m` as a substitution of side `s^m`.
    pub fn power(&self, m: usize) -> Result<NdSubstitution> {
        if m == 0 {
            return Err(Error::InvalidSubstitution("power must be at least 1".into()));
        }
        let side = self.side.checked_pow(m as u32).ok_or(Error::Overflow("substitution power"))?;
        let rules = self
            .alphabet
            .letters()
            .map(|l| Ok(self.iterate(&ArrayWindow::single(self.alphabet.clone(), self.dim, l)?, m)?.cells))
            .collect::<Result<Vec<_>>>()?;
        NdSubstitution::new(self.alphabet.clone(), self.dim, side, rules, self.seed)
    }

    /// Least `m ≥ 1` such that the seed is the corner letter of `S^m(seed)`.
    pub fn seed_power(&self) -> Result<usize> {
        let mut cur = self.seed;
        for m in 1..=self.alphabet.len() {
            cur = self.rules[cur.index()][0];
            if cur == self.seed {
                return Ok(m);
            }
        }
        Err(Error::InvalidSubstitution(format!(
            "seed `{}` does not return to the corner under any power",
            self.alphabet.symbol(self.seed)
        )))
    }

    /// `S^{mn}(seed)` with `m` from [`NdSubstitution::seed_power`]; side `s^{mn}`.
    pub fn fixed_array(&self, n: usize) -> Result<ArrayWindow> {
        let m = self.seed_power()?;
        let single = ArrayWindow::single(self.alphabet.clone(), self.dim, self.seed)?;
        self.iterate(&single, m * n)
    }
}

impl fmt::Debug for NdSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for l in self.alphabet.letters() {
            m.entry(&self.alphabet.symbol(l), &self.alphabet.render(self.rule(l)));
        }
        m.finish()
    }
}

fn cube_name(alphabet: &Alphabet, cells: &[Letter]) -> String {
    let sep = if alphabet.is_compact() { "" } else { "." };
    let parts: Vec<&str> = cells.iter().map(|&l| alphabet.symbol(l)).collect();
    format!("[{}]", parts.join(sep))
}

/// Exact frequencies of patterns through the substitution induced on 2-cubes.
///
/// The image of a 2-cube `B` lists the 2-cubes of `S(B)` anchored in the
/// image of `B`'s corner cell, so it is again a substitution of side `s`.
/// For a pattern `P` with extent at most `s^k + 1`,
/// `freq(P) = Σ_B N(k, P, B)·freq(B)/θ^k` where `N` counts occurrences of `P`
/// in `S^k(B)` anchored in `[0, s^k)^d`.
#[derive(Debug, Clone)]
pub struct PatternFrequencies {
    base: NdSubstitution,
    cubes: Vec<Vec<Letter>>,
    induced: NdSubstitution,
    freq: Vec<BigRational>,
}

impl PatternFrequencies {
    pub fn new(s: &NdSubstitution) -> Result<PatternFrequencies> {
        if !s.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        let d = s.dim;
        let two = vec![2; d];
        let two_s = vec![2 * s.side; d];
        let start = s.expand(&ArrayWindow::single(s.alphabet.clone(), d, s.seed)?)?.sub_window(&vec![0; d], &two)?;
        let anchor_offsets: Vec<Vec<usize>> = box_positions(&vec![s.side; d]).collect();
        let mut index: HashMap<Vec<Letter>, usize> = HashMap::from([(start.cells.clone(), 0)]);
        let mut cubes = vec![start.cells.clone()];
        let mut images: Vec<Vec<Vec<Letter>>> = Vec::new();
        let mut next = 0;
        while next < cubes.len() {
            let w = ArrayWindow::new(s.alphabet.clone(), two.clone(), cubes[next].clone())?;
            let big = s.expand(&w)?;
            debug_assert_eq!(big.shape, two_s);
            let image = anchor_offsets
                .iter()
                .map(|k| big.sub_window(k, &two).map(|c| c.cells))
                .collect::<Result<Vec<_>>>()?;
            for c in &image {
                if !index.contains_key(c) {
                    index.insert(c.clone(), cubes.len());
                    cubes.push(c.clone());
                }
            }
            images.push(image);
            next += 1;
        }
        let names: Vec<String> = cubes.iter().map(|c| cube_name(&s.alphabet, c)).collect();
        let alphabet = Alphabet::new(names)?;
        let rules = images
            .iter()
            .map(|im| im.iter().map(|c| Letter::from(index[c])).collect())
            .collect();
        let induced = NdSubstitution::new(alphabet, d, s.side, rules, Letter(0))?;
        let e = perron_data(&induced.incidence_matrix())?;
        let freq = e.right_exact.ok_or_else(|| Error::Invariant("induced substitution lacks exact data".into()))?;
        Ok(PatternFrequencies { base: s.clone(), cubes, induced, freq })
    }

    pub fn substitution(&self) -> &NdSubstitution {
        &self.base
    }

    /// The substitution on 2-cubes.
    pub fn induced(&self) -> &NdSubstitution {
        &self.induced
    }

    /// The 2-cubes with their exact frequencies.
    pub fn two_cubes(&self) -> impl Iterator<Item = (ArrayWindow, &BigRational)> + '_ {
        let shape = vec![2; self.base.dim];
        self.cubes.iter().zip(&self.freq).map(move |(c, f)| {
            (
                ArrayWindow { alphabet: self.base.alphabet.clone(), origin: vec![0; shape.len()], shape: shape.clone(), cells: c.clone() },
                f,
            )
        })
    }

    /// Least `k` with `s^k + 1 ≥ extent`.
    fn level(&self, extent: usize) -> u32 {
        let mut k = 0;
        while self.base.side.pow(k) + 1 < extent {
            k += 1;
        }
        k
    }

    fn expanded_cubes(&self, k: u32) -> Result<Vec<ArrayWindow>> {
        let shape = vec![2; self.base.dim];
        self.cubes
            .iter()
            .map(|c| {
                let w = ArrayWindow::new(self.base.alphabet.clone(), shape.clone(), c.clone())?;
                self.base.iterate(&w, k as usize)
            })
            .collect()
    }

    pub fn frequency(&self, p: &Pattern) -> Result<BigRational> {
        ensure_same(&self.base.alphabet, p.alphabet(), "pattern frequency")?;
        if p.dim() != self.base.dim {
            return Err(Error::InvalidPattern("pattern dimension differs".into()));
        }
        let extent = p.extent().into_iter().max().unwrap_or(1);
        let k = self.level(extent);
        let reach = self.base.side.pow(k);
        let big = self.expanded_cubes(k)?;
        let offsets_of = |w: &ArrayWindow| -> Vec<usize> { p.support.iter().map(|x| linear(&w.shape, x)).collect() };
        let corner = vec![reach; self.base.dim];
        let mut total = BigRational::zero();
        for (w, f) in big.iter().zip(&self.freq) {
            let offsets = offsets_of(w);
            let n = box_positions(&corner)
                .map(|a| linear(&w.shape, &a))
                .filter(|&a| offsets.iter().zip(&p.values).all(|(o, v)| w.cells[a + o] == *v))
                .count();
            if n > 0 {
                total += f * BigRational::from_integer(BigInt::from(n));
            }
        }
        let theta = BigRational::from_integer(BigInt::from(self.base.theta()));
        Ok(total / num_traits::pow(theta, k as usize))
    }

    /// Every `R`-cube of the language, each listed once, in sorted order.
    pub fn cubic_patterns(&self, side: usize) -> Result<Vec<ArrayWindow>> {
        if side == 0 {
            return Ok(Vec::new());
        }
        let k = self.level(side);
        let reach = self.base.side.pow(k);
        let extent = vec![side; self.base.dim];
        let mut seen = BTreeSet::new();
        for w in self.expanded_cubes(k)? {
            for a in box_positions(&vec![reach; self.base.dim]) {
                seen.insert(w.sub_window(&a, &extent)?.cells);
            }
        }
        seen.into_iter()
            .map(|cells| ArrayWindow::new(self.base.alphabet.clone(), extent.clone(), cells))
            .collect()
    }
}

/// Empirical frequency of `p` on the fixed array at level `n`, and at level `n−1`.
pub fn empirical_pattern_frequency(s: &NdSubstitution, p: &Pattern, n: usize) -> Result<(f64, Option<f64>)> {
    let at = |n: usize| -> Result<f64> {
        let w = s.fixed_array(n)?;
        Ok(count_pattern(&w, p)? as f64 / w.len() as f64)
    };
    let cur = at(n)?;
    let prev = if n > 0 { Some(at(n - 1)?) } else { None };
    Ok((cur, prev))
}

/// Scaled frequencies of the `R`-cubes for one side `R`.
#[derive(Debug, Clone)]
pub struct CubeScaling {
    pub side: usize,
    /// Least `k` with `s^{k−1} ≤ R < s^k`.
    pub k: u32,
    pub values: BTreeSet<BigRational>,
}

/// Result of [`verify_freq_array`].
#[derive(Debug, Clone)]
pub struct FreqArrayReport {
    pub theta: u64,
    pub max_side: usize,
    pub per_side: Vec<CubeScaling>,
    /// The fixed array admits a short period vector.
    pub periodic: bool,
}

impl FreqArrayReport {
    pub fn set_up_to(&self, cutoff: usize) -> BTreeSet<BigRational> {
        self.per_side
            .iter()
            .filter(|c| c.side <= cutoff)
            .flat_map(|c| c.values.iter().cloned())
            .collect()
    }

    pub fn cardinality(&self) -> usize {
        self.set_up_to(self.max_side).len()
    }

    pub fn stabilized_between(&self, a: usize, b: usize) -> bool {
        self.set_up_to(a) == self.set_up_to(b)
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized_between(self.max_side / 2, self.max_side)
    }
}

/// Least `k` with `s^{k−1} ≤ r < s^k`.
pub fn cube_exponent(side: usize, r: usize) -> u32 {
    let mut k = 1;
    while side.pow(k) <= r {
        k += 1;
    }
    k
}

/// `{freq(P)·θ^{k(R)} : P an R-cube, 1 ≤ R ≤ max_side}`.
pub fn verify_freq_array(s: &NdSubstitution, max_side: usize) -> Result<FreqArrayReport> {
    let pf = PatternFrequencies::new(s)?;
    let theta = BigRational::from_integer(BigInt::from(s.theta()));
    let mut per_side = Vec::new();
    for r in 1..=max_side {
        let k = cube_exponent(s.side, r);
        let scale = num_traits::pow(theta.clone(), k as usize);
        let values = pf
            .cubic_patterns(r)?
            .iter()
            .map(|w| Ok(pf.frequency(&Pattern::from_window(w))? * &scale))
            .collect::<Result<BTreeSet<_>>>()?;
        per_side.push(CubeScaling { side: r, k, values });
    }
    let probe = fixed_array_at_least(s, 4 * max_side.max(4))?;
    let periodic = find_period(&probe, max_side.max(4)).is_some();
    Ok(FreqArrayReport { theta: s.theta(), max_side, per_side, periodic })
}

/// Smallest fixed array of side at least `side`.
fn fixed_array_at_least(s: &NdSubstitution, side: usize) -> Result<ArrayWindow> {
    let mut n = 0;
    loop {
        let w = s.fixed_array(n)?;
        if w.shape[0] >= side {
            return Ok(w);
        }
        n += 1;
    }
}

/// A non-zero vector `δ` with `|δ|∞ ≤ bound` and `w(x) = w(x + δ)` wherever both are defined.
pub fn find_period(w: &ArrayWindow, bound: usize) -> Option<Vec<i64>> {
    let d = w.dim();
    let span = vec![2 * bound + 1; d];
    for raw in box_positions(&span) {
        let delta: Vec<i64> = raw.iter().map(|&c| c as i64 - bound as i64).collect();
        // one of ±δ suffices: first non-zero coordinate positive
        match delta.iter().find(|&&c| c != 0) {
            Some(&c) if c > 0 => {}
            _ => continue,
        }
        if delta.iter().zip(&w.shape).any(|(c, &n)| c.unsigned_abs() as usize >= n) {
            continue;
        }
        let ok = box_positions(&w.shape).all(|x| {
            let y: Option<Vec<usize>> = x
                .iter()
                .zip(&delta)
                .zip(&w.shape)
                .map(|((&a, &b), &n)| {
                    let v = a as i64 + b;
                    (v >= 0 && (v as usize) < n).then_some(v as usize)
                })
                .collect();
            match y {
                Some(y) => w.cells[linear(&w.shape, &x)] == w.cells[linear(&w.shape, &y)],
                None => true,
            }
        });
        if ok {
            return Some(delta);
        }
    }
    None
}

/// Repetitivity data for one cube side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacingAtSide {
    pub side: usize,
    /// Least `W` such that every `W`-cube of the window contains every `R`-cube.
    pub window_needed: usize,
    /// Least `|v − w|∞` over distinct occurrences of one `R`-cube.
    pub min_distance: usize,
    /// Number of distinct `R`-cubes.
    pub patterns: usize,
}

/// Result of [`spacing_and_repetitivity_check`].
#[derive(Debug, Clone)]
pub struct SpacingReport {
    /// Side of the fixed array used, and of the doubled one.
    pub window_sides: (usize, usize),
    pub per_side: Vec<SpacingAtSide>,
    /// Same computation on the doubled window.
    pub per_side_doubled: Vec<SpacingAtSide>,
    /// `max_R window_needed / R`.
    pub k_hat: f64,
    /// `max_R R / min_distance`.
    pub k_prime_hat: f64,
    pub stable: bool,
    pub periodic: bool,
    /// Every window of side `⌈K̂R⌉` was re-checked to contain every `R`-cube.
    pub verified: bool,
}

/// Estimates the repetitivity constant `K` and the spacing constant `K′`
/// from fixed arrays, and checks the stability of both under doubling.
pub fn spacing_and_repetitivity_check(s: &NdSubstitution, max_side: usize) -> Result<SpacingReport> {
    if max_side == 0 {
        return Err(Error::OutOfRange("max side must be positive".into()));
    }
    let w = fixed_array_at_least(s, 32 * max_side)?;
    let m = s.seed_power()?;
    let big = s.iterate(&w, m)?;
    let pf = PatternFrequencies::new(s).ok();
    let per_side = spacing_table(&w, max_side, pf.as_ref())?;
    let per_side_doubled = spacing_table(&big, max_side, pf.as_ref())?;
    let k_hat = per_side.iter().map(|x| x.window_needed as f64 / x.side as f64).fold(0.0, f64::max);
    let k_prime_hat = per_side
        .iter()
        .map(|x| if x.min_distance == 0 { f64::INFINITY } else { x.side as f64 / x.min_distance as f64 })
        .fold(0.0, f64::max);
    let mut verified = true;
    for x in &per_side {
        let win = ((k_hat * x.side as f64).ceil() as usize).max(x.side);
        verified &= every_window_contains_all(&w, x.side, win);
    }
    Ok(SpacingReport {
        window_sides: (w.shape[0], big.shape[0]),
        stable: per_side == per_side_doubled,
        per_side,
        per_side_doubled,
        k_hat,
        k_prime_hat,
        periodic: find_period(&w, max_side.max(4)).is_some(),
        verified,
    })
}

/// Pattern id of every anchor (`usize::MAX` outside the anchor range).
fn pattern_ids(w: &ArrayWindow, side: usize) -> (Vec<usize>, usize) {
    let extent = vec![side; w.dim()];
    let offsets: Vec<usize> = box_positions(&extent).map(|x| linear(&w.shape, &x)).collect();
    let mut ids = vec![usize::MAX; w.len()];
    let mut index: HashMap<Vec<Letter>, usize> = HashMap::new();
    for a in anchors(&w.shape, &extent) {
        let key: Vec<Letter> = offsets.iter().map(|o| w.cells[a + o]).collect();
        let n = index.len();
        ids[a] = *index.entry(key).or_insert(n);
    }
    (ids, index.len())
}

fn spacing_table(w: &ArrayWindow, max_side: usize, pf: Option<&PatternFrequencies>) -> Result<Vec<SpacingAtSide>> {
    let d = w.dim();
    let mut out = Vec::new();
    for r in 1..=max_side {
        let (ids, found) = pattern_ids(w, r);
        let expected = match pf {
            Some(pf) => pf.cubic_patterns(r)?.len(),
            None => found,
        };
        if found < expected {
            return Err(Error::WindowTooSmall(format!("only {found} of {expected} cubes of side {r} present")));
        }
        let room: Vec<usize> = w.shape.iter().map(|n| n + 1 - r).collect();
        // largest anchor-free cube per pattern: dp over the anchor grid
        let mut empty = 0;
        let preds: Vec<Vec<usize>> = box_positions(&vec![2; d]).skip(1).collect();
        for pid in 0..found {
            let mut dp = vec![0usize; volume(&room)?];
            for (i, pos) in box_positions(&room).enumerate() {
                let a = linear(&w.shape, &pos);
                if ids[a] == pid {
                    continue;
                }
                let mut best = usize::MAX;
                for e in &preds {
                    if pos.iter().zip(e).any(|(p, q)| p < q) {
                        best = 0;
                        break;
                    }
                    let q: Vec<usize> = pos.iter().zip(e).map(|(p, q)| p - q).collect();
                    best = best.min(dp[linear(&room, &q)]);
                }
                dp[i] = best + 1;
                empty = empty.max(dp[i]);
            }
        }
        let min_distance = min_repeat_distance(w, &ids, r);
        out.push(SpacingAtSide { side: r, window_needed: empty + r, min_distance, patterns: found });
    }
    Ok(out)
}

fn min_repeat_distance(w: &ArrayWindow, ids: &[usize], side: usize) -> usize {
    let d = w.dim();
    let room: Vec<usize> = w.shape.iter().map(|n| n + 1 - side).collect();
    let max_t = room.iter().copied().max().unwrap_or(1);
    for t in 1..max_t {
        let span = vec![2 * t + 1; d];
        for raw in box_positions(&span) {
            let delta: Vec<i64> = raw.iter().map(|&c| c as i64 - t as i64).collect();
            if delta.iter().map(|c| c.unsigned_abs() as usize).max() != Some(t) {
                continue;
            }
            if delta.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                continue;
            }
            let hit = box_positions(&room).any(|x| {
                let y: Option<Vec<usize>> = x
                    .iter()
                    .zip(&delta)
                    .zip(&room)
                    .map(|((&a, &b), &n)| {
                        let v = a as i64 + b;
                        (v >= 0 && (v as usize) < n).then_some(v as usize)
                    })
                    .collect();
                y.is_some_and(|y| ids[linear(&w.shape, &x)] == ids[linear(&w.shape, &y)])
            });
            if hit {
                return t;
            }
        }
    }
    0
}

/// Brute force: every `win`-cube of `w` contains every `side`-cube that occurs in `w`.
fn every_window_contains_all(w: &ArrayWindow, side: usize, win: usize) -> bool {
    if win > w.shape.iter().copied().min().unwrap_or(0) {
        return true;
    }
    let all: BTreeSet<Vec<Letter>> = cubic_pattern_counts(w, side).into_keys().collect();
    let extent = vec![win; w.dim()];
    let room: Vec<usize> = w.shape.iter().map(|n| n + 1 - win).collect();
    // sample a stride of starting corners to bound the cost
    let stride = (win / 2).max(1);
    let ok = box_positions(&room)
        .filter(|p| p.iter().all(|c| c % stride == 0))
        .all(|p| {
            let sub = w.sub_window(&p, &extent).expect("inside");
            cubic_pattern_counts(&sub, side).len() == all.len()
        });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tm2() -> NdSubstitution {
        NdSubstitution::from_rules(2, 2, "a", &[("a", "abba"), ("b", "baab")]).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn expansion_matches_digit_sums() {
        let s = tm2();
        let one = ArrayWindow::single(s.alphabet().clone(), 2, Letter(0)).unwrap();
        let e1 = s.expand(&one).unwrap();
        assert_eq!(e1.to_string(), "ab\nba\n");
        let w = s.fixed_array(2).unwrap();
        let want = [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]];
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(w.get(&[x, y]).unwrap().0, want[y][x]);
            }
        }
        let w8 = s.fixed_array(8).unwrap();
        for pos in box_positions(&[256, 256]) {
            let bits = (pos[0].count_ones() + pos[1].count_ones()) % 2;
            assert_eq!(w8.get(&pos).unwrap().0, bits);
        }
        assert_eq!(s.fixed_array(0).unwrap().len(), 1);
    }

    #[test]
    fn nesting_and_powers() {
        let s = tm2();
        let w3 = s.fixed_array(3).unwrap();
        let w4 = s.fixed_array(4).unwrap();
        assert_eq!(w4.sub_window(&[0, 0], &[8, 8]).unwrap().cells(), w3.cells());
        let s2 = s.power(2).unwrap();
        assert_eq!(s2.side(), 4);
        assert_eq!(s2.fixed_array(2).unwrap().cells(), w4.cells());
        assert_eq!(s2.incidence_matrix(), s.incidence_matrix().pow(2).unwrap());
        assert_eq!(s.incidence_matrix().column_sums(), vec![4, 4]);
    }

    #[test]
    fn one_dimensional_case_matches_words() {
        let sub = Substitution::from_rules("a", &[("a", "ab"), ("b", "ba")]).unwrap();
        let nd = NdSubstitution::from_substitution(&sub).unwrap();
        let w = nd.fixed_array(6).unwrap();
        assert_eq!(w.cells(), &sub.fixed_point_letters(64).unwrap()[..]);
        assert_eq!(nd.to_substitution().unwrap(), sub);
    }

    #[test]
    fn seed_power_used_when_corner_differs() {
        // corner letters cycle a -> b -> a
        let s = NdSubstitution::from_rules(1, 2, "a", &[("a", "ba"), ("b", "ab")]).unwrap();
        assert_eq!(s.seed_power().unwrap(), 2);
        let w = s.fixed_array(2).unwrap();
        assert_eq!(w.len(), 16);
        assert_eq!(w.cells()[0], Letter(0));
        let stuck = NdSubstitution::from_rules(1, 2, "a", &[("a", "bb"), ("b", "bb")]).unwrap();
        assert!(stuck.fixed_array(1).is_err());
    }

    #[test]
    fn counting() {
        let s = tm2();
        let w = s.fixed_array(2).unwrap();
        let a = Pattern::new(s.alphabet().clone(), vec![vec![0, 0]], vec![Letter(0)]).unwrap();
        assert_eq!(count_pattern(&w, &a).unwrap(), 8);
        assert_eq!(count_pattern(&w, &Pattern::from_window(&w)).unwrap(), 1);
        let big = s.fixed_array(3).unwrap();
        assert_eq!(count_pattern(&w, &Pattern::from_window(&big)).unwrap(), 0);
        assert!(Pattern::new(s.alphabet().clone(), vec![vec![1, 0]], vec![Letter(0)]).is_err());
        assert!(Pattern::new(s.alphabet().clone(), vec![vec![0, 0], vec![0, 0]], vec![Letter(0); 2]).is_err());
    }

    #[test]
    fn letter_counts_are_matrix_powers() {
        let s = tm2();
        for n in 0..5u32 {
            let w = s.fixed_array(n as usize).unwrap();
            let m = s.incidence_matrix().pow(n).unwrap();
            for b in s.alphabet().letters() {
                let p = Pattern::new(s.alphabet().clone(), vec![vec![0, 0]], vec![b]).unwrap();
                assert_eq!(count_pattern(&w, &p).unwrap() as u64, m.get(b.index(), 0));
            }
        }
    }

    #[test]
    fn exact_pattern_frequencies() {
        let s = tm2();
        let pf = PatternFrequencies::new(&s).unwrap();
        let a = Pattern::new(s.alphabet().clone(), vec![vec![0, 0]], vec![Letter(0)]).unwrap();
        assert_eq!(pf.frequency(&a).unwrap(), r(1, 2));
        let block = s.block(Letter(0));
        assert_eq!(pf.frequency(&Pattern::from_window(&block)).unwrap(), r(2, 9));
        let total: BigRational = pf.two_cubes().map(|(_, f)| f.clone()).sum();
        assert_eq!(total, r(1, 1));
    }

    #[test]
    fn exact_matches_empirical_frequencies() {
        let s = tm2();
        let pf = PatternFrequencies::new(&s).unwrap();
        let w = s.fixed_array(8).unwrap();
        for side in 1..=3 {
            let counts = cubic_pattern_counts(&w, side);
            let total: usize = counts.values().sum();
            for cube in pf.cubic_patterns(side).unwrap() {
                let exact = crate::perron::to_f64(&pf.frequency(&Pattern::from_window(&cube)).unwrap());
                let emp = counts.get(cube.cells()).copied().unwrap_or(0) as f64 / total as f64;
                assert!((exact - emp).abs() < 1e-2, "side {side}: {exact} vs {emp}");
            }
            assert_eq!(pf.cubic_patterns(side).unwrap().len(), counts.len());
        }
    }

    #[test]
    fn one_dimensional_frequencies_match_words() {
        let sub = Substitution::from_rules("a", &[("a", "ab"), ("b", "ba")]).unwrap();
        let pf = PatternFrequencies::new(&NdSubstitution::from_substitution(&sub).unwrap()).unwrap();
        for k in 1..=5 {
            for (w, f) in crate::perron::word_frequencies(&sub, k).unwrap().entries {
                let win = ArrayWindow::new(sub.alphabet().clone(), vec![k], w.letters().to_vec()).unwrap();
                assert_eq!(pf.frequency(&Pattern::from_window(&win)).unwrap(), f.exact.unwrap());
            }
        }
    }

    #[test]
    fn freq_array_scaling() {
        let rep = verify_freq_array(&tm2(), 4).unwrap();
        assert!(!rep.periodic);
        assert!(rep.stabilized_between(2, 4));
        assert_eq!(rep.set_up_to(4), BTreeSet::from([r(8, 9), r(16, 9), r(2, 1), r(32, 9)]));
        assert_eq!(cube_exponent(2, 1), 1);
        assert_eq!(cube_exponent(2, 2), 2);
        assert_eq!(cube_exponent(2, 3), 2);
        assert_eq!(cube_exponent(2, 4), 3);
    }

    #[test]
    fn spacing_report_for_thue_morse() {
        let rep = spacing_and_repetitivity_check(&tm2(), 3).unwrap();
        assert!(!rep.periodic);
        assert!(rep.stable);
        assert!(rep.verified);
        assert!(rep.k_hat >= 1.0 && rep.k_prime_hat >= 1.0);
        let constant = NdSubstitution::from_rules(2, 2, "a", &[("a", "aaaa")]).unwrap();
        let rep = spacing_and_repetitivity_check(&constant, 2).unwrap();
        assert!(rep.periodic);
        assert_eq!(rep.per_side[0].window_needed, 1);
    }

    #[test]
    fn translation_equivariance() {
        let s = tm2();
        let w = s.fixed_array(4).unwrap();
        let shifted = w.sub_window(&[3, 5], &[10, 9]).unwrap();
        let p = Pattern::from_window(&s.block(Letter(1)));
        let direct = anchors(&w.shape, &[2, 2])
            .into_iter()
            .map(|a| delinear(w.shape(), a))
            .filter(|v| v[0] >= 3 && v[1] >= 5 && v[0] + 2 <= 13 && v[1] + 2 <= 14)
            .filter(|v| w.sub_window(v, &[2, 2]).unwrap().cells() == p.values())
            .count();
        assert_eq!(count_pattern(&shifted, &p).unwrap(), direct);
    }
}
