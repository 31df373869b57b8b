//! Substitutions, fixed points, codings and the block constructions built on them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph;
use crate::words::{ensure_same, Alphabet, IncidenceMatrix, Letter, Morphism, Word};

/// An endomorphism with a distinguished seed letter.
///
/// Construction only checks the shape; [`Substitution::validate`] checks that
/// the seed starts its own image and that every letter is growing.
#[derive(Clone, PartialEq, Eq)]
pub struct Substitution {
    morphism: Morphism,
    seed: Letter,
}

/// Result of [`Substitution::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    /// The seed is the first letter of its own image.
    pub seed_is_prefix: bool,
    /// Letters `b` whose image starts with `b`.
    pub prefix_letters: Vec<Letter>,
    /// Letters with `|σⁿ(b)|` bounded.
    pub non_growing: Vec<Letter>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.seed_is_prefix && self.non_growing.is_empty()
    }
}

impl Substitution {
    pub fn new(morphism: Morphism, seed: Letter) -> Result<Substitution> {
        ensure_same(morphism.source(), morphism.target(), "substitution must be an endomorphism")?;
        if seed.index() >= morphism.source().len() {
            return Err(Error::InvalidSubstitution("seed outside alphabet".into()));
        }
        Ok(Substitution { morphism, seed })
    }

    /// Build from `(letter, image)` rules. The alphabet is the rule letters in order;
    /// images of compact alphabets may be written `"ab"`, otherwise space separated.
    pub fn from_rules(seed: &str, rules: &[(&str, &str)]) -> Result<Substitution> {
        let alphabet = Alphabet::new(rules.iter().map(|(l, _)| *l))?;
        let rules = rules
            .iter()
            .map(|(l, img)| Ok((*l, Word::parse(alphabet.clone(), img)?)))
            .collect::<Result<Vec<_>>>()?;
        let morphism = Morphism::from_rules(alphabet.clone(), alphabet.clone(), &rules)?;
        Substitution::new(morphism, alphabet.letter(seed)?)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.morphism.source()
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    pub fn image(&self, l: Letter) -> &[Letter] {
        self.morphism.image(l)
    }

    pub fn constant_length(&self) -> Option<usize> {
        self.morphism.constant_length()
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        self.morphism.incidence_matrix()
    }

    pub fn with_seed(&self, seed: Letter) -> Result<Substitution> {
        Substitution::new(self.morphism.clone(), seed)
    }

    pub fn power(&self, n: usize) -> Result<Substitution> {
        Substitution::new(self.morphism.power(n)?, self.seed)
    }

    pub fn is_erasing(&self) -> bool {
        self.morphism.images().iter().any(Vec::is_empty)
    }

    pub fn validate(&self) -> ValidityReport {
        let prefix_letters: Vec<Letter> = self
            .alphabet()
            .letters()
            .filter(|&b| self.image(b).first() == Some(&b))
            .collect();
        let growing = growing_letters(&self.morphism);
        ValidityReport {
            seed_is_prefix: prefix_letters.contains(&self.seed),
            prefix_letters,
            non_growing: self.alphabet().letters().filter(|l| !growing[l.index()]).collect(),
        }
    }

    fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            return Ok(());
        }
        let mut problems = Vec::new();
        if !report.seed_is_prefix {
            problems.push(format!(
                "seed `{}` is not the first letter of its image",
                self.alphabet().symbol(self.seed)
            ));
        }
        if !report.non_growing.is_empty() {
            problems.push(format!("non-growing letters {}", self.alphabet().render(&report.non_growing)));
        }
        Err(Error::InvalidSubstitution(problems.join("; ")))
    }

    /// First `n` letters of the fixed point starting with the seed.
    pub fn fixed_point_prefix(&self, n: usize) -> Result<Word> {
        Ok(Word::from_letters_unchecked(self.alphabet().clone(), self.fixed_point_letters(n)?))
    }

    pub fn fixed_point_letters(&self, n: usize) -> Result<Vec<Letter>> {
        self.ensure_valid()?;
        let mut x = self.image(self.seed).to_vec();
        // x = σ(x): block i of the fixed point is the image of x[i]
        let mut next = 1;
        while x.len() < n {
            if next >= x.len() {
                return Err(Error::Invariant("fixed point generation stalled".into()));
            }
            let l = x[next];
            x.extend_from_slice(self.image(l));
            next += 1;
        }
        x.truncate(n);
        Ok(x)
    }

    /// Rename letters to `a, b, c, …` by order of first appearance when
    /// exploring images breadth-first from the seed.
    pub fn canonical(&self) -> Substitution {
        let n = self.alphabet().len();
        let mut order = vec![self.seed];
        let mut seen = vec![false; n];
        seen[self.seed.index()] = true;
        let mut head = 0;
        while head < order.len() {
            for &l in self.image(order[head]) {
                if !seen[l.index()] {
                    seen[l.index()] = true;
                    order.push(l);
                }
            }
            head += 1;
        }
        order.extend(self.alphabet().letters().filter(|l| !seen[l.index()]));
        let mut rename = vec![Letter(0); n];
        for (new, old) in order.iter().enumerate() {
            rename[old.index()] = Letter::from(new);
        }
        let alphabet = Alphabet::new(canonical_names(n)).expect("canonical names are distinct");
        let images = order
            .iter()
            .map(|&old| self.image(old).iter().map(|l| rename[l.index()]).collect())
            .collect();
        let morphism = Morphism::new(alphabet.clone(), alphabet, images).expect("renamed morphism");
        Substitution { morphism, seed: rename[self.seed.index()] }
    }

    /// Restriction to `letters`, whose images must stay inside `letters`.
    pub fn restrict(&self, letters: &[Letter], seed: Letter) -> Result<Substitution> {
        let mut pos = HashMap::new();
        for (i, &l) in letters.iter().enumerate() {
            pos.insert(l, Letter::from(i));
        }
        let alphabet = Alphabet::new(letters.iter().map(|&l| self.alphabet().symbol(l).to_string()))?;
        let images = letters
            .iter()
            .map(|&l| {
                self.image(l)
                    .iter()
                    .map(|m| {
                        pos.get(m).copied().ok_or_else(|| {
                            Error::InvalidSubstitution(format!(
                                "image of `{}` leaves the sub-alphabet",
                                self.alphabet().symbol(l)
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let seed = *pos
            .get(&seed)
            .ok_or_else(|| Error::InvalidSubstitution("seed outside the sub-alphabet".into()))?;
        Substitution::new(Morphism::new(alphabet.clone(), alphabet, images)?, seed)
    }

    /// Length-`k` factors of the fixed point, computed by closure: every such
    /// factor lies inside the image of a length-`k` factor further left.
    pub fn factor_set(&self, k: usize) -> Result<BTreeSet<Vec<Letter>>> {
        if k == 0 {
            return Ok(BTreeSet::from([Vec::new()]));
        }
        if self.is_erasing() {
            return Err(Error::InvalidSubstitution("factor closure requires a non-erasing substitution".into()));
        }
        let start = self.fixed_point_letters(k)?;
        let mut set = BTreeSet::from([start.clone()]);
        let mut todo = vec![start];
        while let Some(u) = todo.pop() {
            let img = self.morphism.apply_letters(&u);
            for w in img.windows(k) {
                if !set.contains(w) {
                    set.insert(w.to_vec());
                    todo.push(w.to_vec());
                }
            }
        }
        Ok(set)
    }

    /// The substitution `σ_k` on length-`k` factors.
    pub fn k_block(&self, k: usize) -> Result<KBlockSubstitution> {
        KBlockSubstitution::new(self, k)
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Substitution(seed={}, {:?})", self.alphabet().symbol(self.seed), self.morphism)
    }
}

fn canonical_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("s{i}")).collect()
    }
}

/// Letters `b` with `|σⁿ(b)| → ∞`.
///
/// Mortal letters (those whose iterates become empty) are discarded first;
/// in what remains, `b` grows iff it reaches a cyclic component of the
/// occurrence graph that contains a letter with at least two surviving letters
/// in its image.
pub(crate) fn growing_letters(m: &Morphism) -> Vec<bool> {
    let n = m.source().len();
    let mut mortal = vec![false; n];
    loop {
        let mut changed = false;
        for b in 0..n {
            if !mortal[b] && m.images()[b].iter().all(|l| mortal[l.index()]) {
                mortal[b] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|b| {
            let mut s: Vec<usize> = m.images()[b].iter().map(|l| l.index()).filter(|&l| !mortal[l]).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let surviving = |b: usize| m.images()[b].iter().filter(|l| !mortal[l.index()]).count();
    let mut expanding = Vec::new();
    for comp in graph::sccs(&adj) {
        if mortal[comp[0]] || !graph::is_cyclic(&adj, &comp) {
            continue;
        }
        if comp.iter().any(|&b| surviving(b) >= 2) {
            expanding.extend(comp);
        }
    }
    let reaches = graph::reachable(&graph::reverse(&adj), &expanding);
    (0..n).map(|b| !mortal[b] && reaches[b]).collect()
}

/// A letter-to-letter morphism.
#[derive(Clone, PartialEq, Eq)]
pub struct Coding {
    morphism: Morphism,
}

impl Coding {
    pub fn new(morphism: Morphism) -> Result<Coding> {
        if !morphism.is_letter_to_letter() {
            return Err(Error::InvalidMorphism("a coding must map letters to letters".into()));
        }
        Ok(Coding { morphism })
    }

    /// Coding given by `(source symbol, target symbol)` pairs.
    pub fn from_pairs(source: Arc<Alphabet>, target: Arc<Alphabet>, pairs: &[(&str, &str)]) -> Result<Coding> {
        let rules = pairs
            .iter()
            .map(|(s, t)| Ok((*s, Word::from_symbols(target.clone(), &[*t])?)))
            .collect::<Result<Vec<_>>>()?;
        Coding::new(Morphism::from_rules(source, target, &rules)?)
    }

    pub fn identity(alphabet: Arc<Alphabet>) -> Coding {
        Coding { morphism: Morphism::identity(alphabet) }
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        self.morphism.source()
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        self.morphism.target()
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn map(&self, l: Letter) -> Letter {
        self.morphism.image(l)[0]
    }

    pub fn apply_letters(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter().map(|&l| self.map(l)).collect()
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.morphism.apply(w)
    }
}

impl fmt::Debug for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coding({:?})", self.morphism)
    }
}

/// First `n` letters of `coding(fixed point of s)`.
pub fn coded_prefix(s: &Substitution, coding: &Coding, n: usize) -> Result<Word> {
    ensure_same(s.alphabet(), coding.source(), "coding source")?;
    let x = s.fixed_point_letters(n)?;
    Ok(Word::from_letters_unchecked(coding.target().clone(), coding.apply_letters(&x)))
}

/// `σ_k`: the substitution induced on length-`k` factors of the fixed point.
///
/// The image of `(u)` lists the first `|σ(u₁)|` length-`k` factors of `σ(u)`.
#[derive(Debug, Clone)]
pub struct KBlockSubstitution {
    k: usize,
    base: Substitution,
    factors: Vec<Vec<Letter>>,
    index: HashMap<Vec<Letter>, Letter>,
    substitution: Substitution,
}

impl KBlockSubstitution {
    fn new(s: &Substitution, k: usize) -> Result<KBlockSubstitution> {
        if k == 0 {
            return Err(Error::InvalidSubstitution("k must be at least 1".into()));
        }
        let factors: Vec<Vec<Letter>> = s.factor_set(k)?.into_iter().collect();
        let index: HashMap<Vec<Letter>, Letter> =
            factors.iter().enumerate().map(|(i, f)| (f.clone(), Letter::from(i))).collect();
        let names: Vec<String> = factors.iter().map(|f| block_name(s.alphabet(), f)).collect();
        let alphabet = Alphabet::new(names)?;
        let images = factors
            .iter()
            .map(|u| {
                let v = s.morphism.apply_letters(u);
                let p = s.image(u[0]).len();
                (0..p)
                    .map(|i| {
                        index
                            .get(&v[i..i + k])
                            .copied()
                            .ok_or_else(|| Error::Invariant("σ_k image outside the factor set".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let seed_word = s.fixed_point_letters(k)?;
        let seed = index[&seed_word];
        let substitution = Substitution::new(Morphism::new(alphabet.clone(), alphabet, images)?, seed)?;
        Ok(KBlockSubstitution { k, base: s.clone(), factors, index, substitution })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn substitution(&self) -> &Substitution {
        &self.substitution
    }

    pub fn base(&self) -> &Substitution {
        &self.base
    }

    /// The underlying factor of a block letter.
    pub fn factor(&self, l: Letter) -> Word {
        Word::from_letters_unchecked(self.base.alphabet().clone(), self.factors[l.index()].clone())
    }

    pub fn factors(&self) -> &[Vec<Letter>] {
        &self.factors
    }

    pub fn letter_of(&self, u: &[Letter]) -> Option<Letter> {
        self.index.get(u).copied()
    }

    /// The coding `(b₁…b_k) ↦ b₁`, which maps the fixed point of `σ_k` back to the original.
    pub fn first_letter_coding(&self) -> Coding {
        let images = self.factors.iter().map(|f| vec![f[0]]).collect();
        Coding::new(
            Morphism::new(self.substitution.alphabet().clone(), self.base.alphabet().clone(), images)
                .expect("first letter coding"),
        )
        .expect("letter to letter")
    }
}

fn block_name(alphabet: &Alphabet, f: &[Letter]) -> String {
    let sep = if alphabet.is_compact() { "" } else { "." };
    let parts: Vec<&str> = f.iter().map(|&l| alphabet.symbol(l)).collect();
    format!("({})", parts.join(sep))
}

/// Output of [`primitive_component`].
#[derive(Debug, Clone)]
pub struct PrimitiveComponent {
    /// The power `k` of `σ` that is restricted.
    pub power: usize,
    /// Letters of the sub-alphabet, in the original alphabet.
    pub letters: Vec<Letter>,
    /// `σᵏ` restricted to the sub-alphabet, with a seed satisfying condition (1).
    pub substitution: Substitution,
}

/// A power of `σ` and a sub-alphabet on which it is a primitive substitution.
///
/// Takes a terminal cyclic component of the occurrence graph reachable from the
/// seed, one of its cyclic classes (so that `σ^h` is primitive there), and then
/// a further power making some letter start its own image.
pub fn primitive_component(s: &Substitution) -> Result<PrimitiveComponent> {
    s.ensure_valid()?;
    let n = s.alphabet().len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|b| {
            let mut v: Vec<usize> = s.image(Letter::from(b)).iter().map(|l| l.index()).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let from_seed = graph::reachable(&adj, &[s.seed().index()]);
    let comps = graph::sccs(&adj);
    let mut comp_of = vec![0; n];
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = ci;
        }
    }
    let bottom = comps
        .iter()
        .enumerate()
        .filter(|(ci, c)| {
            from_seed[c[0]]
                && graph::is_cyclic(&adj, c)
                && c.iter().all(|&v| adj[v].iter().all(|&w| comp_of[w] == *ci))
        })
        .map(|(_, c)| c)
        .min_by_key(|c| c[0])
        .ok_or_else(|| Error::Invariant("no terminal cyclic component".into()))?;
    let (h, classes) = graph::period(&adj, bottom);
    let class0 = classes.iter().find(|(v, _)| *v == bottom[0]).map(|&(_, c)| c).unwrap_or(0);
    let letters: Vec<Letter> = classes
        .iter()
        .filter(|&&(_, c)| c == class0)
        .map(|&(v, _)| Letter::from(v))
        .collect();
    let sigma_h = s.power(h)?;
    // first-letter map of σ^h on the class; follow it to a cycle
    let mut seen = HashMap::new();
    let mut cur = letters[0];
    let mut step = 0;
    while let std::collections::hash_map::Entry::Vacant(e) = seen.entry(cur) {
        e.insert(step);
        cur = sigma_h.image(cur)[0];
        step += 1;
    }
    let cycle_len = step - seen[&cur];
    let power = h * cycle_len;
    let restricted = s.power(power)?.restrict(&letters, cur)?;
    Ok(PrimitiveComponent { power, letters, substitution: restricted })
}

/// Output of [`periodic_to_substitution`].
#[derive(Debug, Clone)]
pub struct PeriodicConstruction {
    pub substitution: Substitution,
    pub coding: Coding,
    /// Common length `pl` of the head and the repeated block.
    pub block_len: usize,
    /// The multiplier `l`.
    pub l: usize,
    /// The re-blocked head `u` and period block `v` with `x = u v v v …`.
    pub head: Word,
    pub period: Word,
}

/// A constant-length-`p` substitution and coding generating `u v v v …`.
///
/// The input `(u, v)` is re-blocked into `(u', v')` with `|u'| = |v'| = pl`,
/// `l` least such that `pl ≥ |u|` and `|v|` divides `pl`.
pub fn periodic_to_substitution(u: &Word, v: &Word, p: usize) -> Result<PeriodicConstruction> {
    if v.is_empty() {
        return Err(Error::InvalidSubstitution("period word must be non-empty".into()));
    }
    if p < 2 {
        return Err(Error::InvalidBase(p as u64));
    }
    ensure_same(u.alphabet(), v.alphabet(), "periodic_to_substitution")?;
    let step = num_integer::lcm(p, v.len());
    let block_len = u.len().max(1).div_ceil(step) * step;
    let l = block_len / p;
    let target = |i: usize| -> Letter {
        if i < u.len() {
            u.letters()[i]
        } else {
            v.letters()[(i - u.len()) % v.len()]
        }
    };
    let head: Vec<Letter> = (0..block_len).map(target).collect();
    let period: Vec<Letter> = (block_len..2 * block_len).map(target).collect();

    let size = 2 * block_len;
    let names: Vec<String> = (0..size).map(|i| format!("a{i}")).collect();
    let alphabet = Alphabet::new(names)?;
    let images: Vec<Vec<Letter>> = (0..size)
        .map(|k| {
            let start = if k < l { k * p } else { block_len + (k % l) * p };
            (start..start + p).map(Letter::from).collect()
        })
        .collect();
    let substitution = Substitution::new(Morphism::new(alphabet.clone(), alphabet.clone(), images)?, Letter(0))?;
    let coding_images = (0..size)
        .map(|k| vec![if k < block_len { head[k] } else { period[k - block_len] }])
        .collect();
    let coding = Coding::new(Morphism::new(alphabet, u.alphabet().clone(), coding_images)?)?;
    Ok(PeriodicConstruction {
        substitution,
        coding,
        block_len,
        l,
        head: Word::from_letters_unchecked(u.alphabet().clone(), head),
        period: Word::from_letters_unchecked(u.alphabet().clone(), period),
    })
}

/// `(σ_k, f)` with `f((w)) = 1` iff `w = u`; the coded fixed point is the
/// occurrence indicator of `u`.
pub fn indicator_coding(s: &Substitution, u: &Word) -> Result<(KBlockSubstitution, Coding)> {
    ensure_same(s.alphabet(), u.alphabet(), "indicator_coding")?;
    if u.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let kb = s.k_block(u.len())?;
    let hit = kb.letter_of(u.letters()).ok_or_else(|| Error::NotAFactor(u.to_string()))?;
    let bits = Alphabet::new(["0", "1"])?;
    let images = kb
        .substitution()
        .alphabet()
        .letters()
        .map(|l| vec![Letter(u32::from(l == hit))])
        .collect();
    let coding = Coding::new(Morphism::new(kb.substitution().alphabet().clone(), bits, images)?)?;
    Ok((kb, coding))
}

/// The binary alphabet `0 1` used by characteristic sequences.
pub fn bit_alphabet() -> Arc<Alphabet> {
    Alphabet::new(["0", "1"]).expect("bit alphabet")
}
