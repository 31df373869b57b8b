//! Deterministic automata over digit and digit-tuple alphabets, recognizable
//! sets, and the conversions to and from constant-length substitutions.
//!
//! Automata read the most significant digit first, so that the fixed point of
//! the associated substitution satisfies `x_n = δ*(q₀, ρ_p(n))`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nd::{box_positions, NdSubstitution};
use crate::numeration::{encode_tuple, greedy_rep, tuple_alphabet, tuple_index, tuple_of_index, NumerationSystem};
use crate::substitution::{bit_alphabet, Coding, Substitution};
use crate::words::{ensure_same, Alphabet, Letter, Morphism, Word};

/// A complete deterministic automaton over `{0,…,p−1}^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    input: Arc<Alphabet>,
    base: u64,
    dim: usize,
    /// `delta[q * |input| + i]`.
    delta: Vec<usize>,
    initial: usize,
    terminal: Vec<bool>,
}

impl Automaton {
    /// Build from a total transition table `table[q][i]`, `i` indexing the input alphabet.
    pub fn new(
        states: Vec<String>,
        base: u64,
        dim: usize,
        table: Vec<Vec<usize>>,
        initial: usize,
        terminals: &[usize],
    ) -> Result<Automaton> {
        let input = tuple_alphabet(base, dim)?;
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        let distinct: BTreeSet<&String> = states.iter().collect();
        if distinct.len() != n {
            return Err(Error::InvalidAutomaton("duplicate state name".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != input.len()) {
            return Err(Error::InvalidAutomaton("transition table is not total".into()));
        }
        if table.iter().flatten().any(|&q| q >= n) || initial >= n || terminals.iter().any(|&q| q >= n) {
            return Err(Error::InvalidAutomaton("state index out of range".into()));
        }
        let mut terminal = vec![false; n];
        for &q in terminals {
            terminal[q] = true;
        }
        Ok(Automaton { states, input, base, dim: dim.max(1), delta: table.concat(), initial, terminal })
    }

    /// Build from labelled edges, determinizing by the subset construction and
    /// completing with a sink state when transitions are missing.
    pub fn from_edges(
        states: &[&str],
        base: u64,
        dim: usize,
        edges: &[(&str, &str, &str)],
        initial: &str,
        terminals: &[&str],
    ) -> Result<Automaton> {
        let input = tuple_alphabet(base, dim)?;
        let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        if index.len() != states.len() {
            return Err(Error::InvalidAutomaton("duplicate state name".into()));
        }
        let state = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownSymbol(s.to_string()));
        let mut succ: Vec<Vec<BTreeSet<usize>>> = vec![vec![BTreeSet::new(); input.len()]; states.len()];
        for (from, sym, to) in edges {
            let i = input.letter(sym)?.index();
            succ[state(from)?][i].insert(state(to)?);
        }
        let init = state(initial)?;
        let term: BTreeSet<usize> = terminals.iter().map(|t| state(t)).collect::<Result<_>>()?;
        let taken: BTreeSet<&str> = states.iter().copied().collect();
        let mut sink_name = String::from("sink");
        while taken.contains(sink_name.as_str()) {
            sink_name.push('_');
        }

        if succ.iter().flatten().all(|t| t.len() <= 1) {
            // deterministic: keep the declared states, complete with a sink
            let sink = states.len();
            let mut needs_sink = false;
            let mut table: Vec<Vec<usize>> = succ
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|t| {
                            t.iter().next().copied().unwrap_or_else(|| {
                                needs_sink = true;
                                sink
                            })
                        })
                        .collect()
                })
                .collect();
            let mut names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
            if needs_sink {
                names.push(sink_name);
                table.push(vec![sink; input.len()]);
            }
            let terminals: Vec<usize> = term.into_iter().collect();
            return Automaton::new(names, base, dim, table, init, &terminals);
        }

        // subset construction from {initial}; the empty set is the sink
        let mut subsets: Vec<BTreeSet<usize>> = vec![BTreeSet::from([init])];
        let mut ids: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(subsets[0].clone(), 0)]);
        let mut table: Vec<Vec<usize>> = Vec::new();
        let mut next = 0;
        while next < subsets.len() {
            let cur = subsets[next].clone();
            let row = (0..input.len())
                .map(|i| {
                    let target: BTreeSet<usize> = cur.iter().flat_map(|&q| succ[q][i].iter().copied()).collect();
                    *ids.entry(target.clone()).or_insert_with(|| {
                        subsets.push(target);
                        subsets.len() - 1
                    })
                })
                .collect();
            table.push(row);
            next += 1;
        }
        let names: Vec<String> = subsets
            .iter()
            .map(|s| {
                if s.is_empty() {
                    sink_name.clone()
                } else {
                    let parts: Vec<&str> = s.iter().map(|&q| states[q]).collect();
                    format!("{{{}}}", parts.join(","))
                }
            })
            .collect();
        let terminals: Vec<usize> = subsets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.iter().any(|q| term.contains(q)))
            .map(|(i, _)| i)
            .collect();
        Automaton::new(names, base, dim, table, 0, &terminals)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn input(&self) -> &Arc<Alphabet> {
        &self.input
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_terminal(&self, q: usize) -> bool {
        self.terminal[q]
    }

    pub fn terminals(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|&q| self.terminal[q]).collect()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// `δ(q, i)` for the input letter with index `i`.
    pub fn step(&self, q: usize, i: usize) -> usize {
        self.delta[q * self.input.len() + i]
    }

    /// `δ*(q, w)` on input-letter indices.
    pub fn run_from(&self, q: usize, w: &[usize]) -> usize {
        w.iter().fold(q, |q, &i| self.step(q, i))
    }

    pub fn run(&self, w: &[usize]) -> usize {
        self.run_from(self.initial, w)
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        ensure_same(&self.input, w.alphabet(), "automaton input")?;
        let idx: Vec<usize> = w.letters().iter().map(|l| l.index()).collect();
        Ok(self.terminal[self.run(&idx)])
    }

    /// Accept a word written over the input symbols, e.g. `"100"` or `"(0,1)(1,1)"`.
    pub fn accepts_text(&self, text: &str) -> Result<bool> {
        let w = if self.dim == 1 {
            Word::parse(self.input.clone(), text)?
        } else {
            let t = crate::numeration::TupleWord::parse(text)?;
            if t.dim() != self.dim && !t.is_empty() {
                return Err(Error::AlphabetMismatch("tuple arity".into()));
            }
            if t.symbols().iter().flatten().any(|&c| c >= self.base) {
                return Err(Error::UnknownSymbol(t.to_string()));
            }
            let letters = t.symbol_indices(self.base).into_iter().map(Letter::from).collect();
            Word::new(self.input.clone(), letters)?
        };
        self.accepts(&w)
    }

    /// State reached on the most-significant-first encoding of `v`.
    pub fn run_vector(&self, v: &[u64]) -> Result<usize> {
        if v.len() != self.dim {
            return Err(Error::AlphabetMismatch(format!("expected a {}-vector", self.dim)));
        }
        let t = encode_tuple(self.base, v)?;
        Ok(self.run(&t.symbol_indices(self.base)))
    }

    /// Index of the all-zero input symbol.
    pub fn zero(&self) -> usize {
        0
    }

    /// Myhill–Nerode classes by Moore refinement.
    fn equivalence_classes(&self) -> Vec<usize> {
        let n = self.states.len();
        let k = self.input.len();
        let mut class: Vec<usize> = self.terminal.iter().map(|&t| usize::from(t)).collect();
        loop {
            let mut sig: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let next: Vec<usize> = (0..n)
                .map(|q| {
                    let mut key = vec![class[q]];
                    key.extend((0..k).map(|i| class[self.step(q, i)]));
                    let len = sig.len();
                    *sig.entry(key).or_insert(len)
                })
                .collect();
            let before: BTreeSet<usize> = class.iter().copied().collect();
            if sig.len() == before.len() {
                return next;
            }
            class = next;
        }
    }

    /// Whether acceptance of `0ⁿ·ρ_p(x)` is independent of `n`.
    pub fn is_padding_invariant(&self) -> bool {
        let class = self.equivalence_classes();
        let zero = self.zero();
        let mut seen = BTreeSet::from([self.initial]);
        let mut q = self.step(self.initial, zero);
        while seen.insert(q) {
            q = self.step(q, zero);
        }
        let q0 = self.initial;
        seen.iter().all(|&q| {
            self.terminal[q] == self.terminal[q0]
                && (1..self.input.len()).all(|i| class[self.step(q, i)] == class[self.step(q0, i)])
        })
    }

    /// Transitions as `(from, symbol, to)` triples in state and input order.
    pub fn edges(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        for q in 0..self.states.len() {
            for i in 0..self.input.len() {
                out.push((
                    self.states[q].clone(),
                    self.input.symbol(Letter::from(i)).to_string(),
                    self.states[self.step(q, i)].clone(),
                ));
            }
        }
        out
    }
}

/// A subset of `ℕ` or `ℕ^d` given by a zero-padding invariant automaton.
#[derive(Debug, Clone)]
pub struct RecognizableSet {
    automaton: Automaton,
}

impl RecognizableSet {
    pub fn new(automaton: Automaton) -> Result<RecognizableSet> {
        if !automaton.is_padding_invariant() {
            return Err(Error::InvalidAutomaton("acceptance depends on leading zeros".into()));
        }
        Ok(RecognizableSet { automaton })
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn base(&self) -> u64 {
        self.automaton.base
    }

    pub fn dim(&self) -> usize {
        self.automaton.dim
    }

    pub fn member(&self, x: u64) -> bool {
        self.member_vector(&[x]).unwrap_or(false)
    }

    pub fn member_vector(&self, v: &[u64]) -> Result<bool> {
        if self.dim() == 1 && v.len() == 1 {
            let r = greedy_rep(&NumerationSystem::base(self.base())?, v[0])?;
            let idx: Vec<usize> = r.digits.iter().map(|&d| d as usize).collect();
            return Ok(self.automaton.terminal[self.automaton.run(&idx)]);
        }
        let q = self.automaton.run_vector(v)?;
        Ok(self.automaton.terminal[q])
    }

    /// Members below `bound` (componentwise for `d > 1`), lexicographically.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<Vec<u64>>> {
        let d = self.dim();
        let shape = vec![usize::try_from(bound).map_err(|_| Error::Overflow("bound"))?; d];
        // box_positions is axis-1 fastest; reverse coordinates for lexicographic order
        let mut out = Vec::new();
        for p in box_positions(&shape) {
            let v: Vec<u64> = p.iter().rev().map(|&c| c as u64).collect();
            if self.member_vector(&v)? {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// One-dimensional members below `bound`.
    pub fn members(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&x| self.member(x)).collect()
    }
}

/// Make the initial state carry a loop on the all-zero symbol.
///
/// When it does not, a fresh initial state copying the old one's outgoing
/// non-zero transitions and acceptance is added; its zero transition loops.
pub fn normalize_for_conversion(a: &Automaton) -> Automaton {
    let zero = a.zero();
    if a.step(a.initial, zero) == a.initial {
        return a.clone();
    }
    let mut name = String::from("init");
    while a.states.contains(&name) {
        name.push('\'');
    }
    let k = a.input.len();
    let new = a.states.len();
    let mut table: Vec<Vec<usize>> = a.delta.chunks(k).map(<[usize]>::to_vec).collect();
    let mut row: Vec<usize> = (0..k).map(|i| a.step(a.initial, i)).collect();
    row[zero] = new;
    table.push(row);
    let mut states = a.states.clone();
    states.push(name);
    let mut terminals = a.terminals();
    if a.terminal[a.initial] {
        terminals.push(new);
    }
    Automaton::new(states, a.base, a.dim, table, new, &terminals).expect("normalized automaton is well formed")
}

fn output_coding(states: Arc<Alphabet>, a: &Automaton) -> Result<Coding> {
    let bits = bit_alphabet();
    let images = (0..a.states.len()).map(|q| vec![Letter(u32::from(a.terminal[q]))]).collect();
    Coding::new(Morphism::new(states, bits, images)?)
}

/// The substitution on states with `σ(q) = δ(q,0)…δ(q,p−1)`, seeded at the
/// initial state, and the coding sending terminal states to `1`.
pub fn automaton_to_substitution(a: &Automaton) -> Result<(Substitution, Coding)> {
    if a.dim != 1 {
        return Err(Error::InvalidAutomaton("use automaton_to_nd_substitution for tuple alphabets".into()));
    }
    if a.step(a.initial, a.zero()) != a.initial {
        return Err(Error::NotNormalized);
    }
    let states = Alphabet::new(a.states.iter().cloned())?;
    let images = (0..a.states.len())
        .map(|q| (0..a.input.len()).map(|i| Letter::from(a.step(q, i))).collect())
        .collect();
    let s = Substitution::new(Morphism::new(states.clone(), states.clone(), images)?, Letter::from(a.initial))?;
    Ok((s, output_coding(states, a)?))
}

/// The `d`-dimensional analogue: cell `k ∈ [0,p)^d` of the rule of `q` is `δ(q, k)`.
pub fn automaton_to_nd_substitution(a: &Automaton) -> Result<(NdSubstitution, Coding)> {
    if a.step(a.initial, a.zero()) != a.initial {
        return Err(Error::NotNormalized);
    }
    let p = a.base as usize;
    let states = Alphabet::new(a.states.iter().cloned())?;
    let cells = vec![p; a.dim];
    let rules = (0..a.states.len())
        .map(|q| {
            box_positions(&cells)
                .map(|k| {
                    let t: Vec<u64> = k.iter().map(|&c| c as u64).collect();
                    Letter::from(a.step(q, tuple_index(&t, a.base)))
                })
                .collect()
        })
        .collect();
    let s = NdSubstitution::new(states.clone(), a.dim, p, rules, Letter::from(a.initial))?;
    Ok((s, output_coding(states, a)?))
}

/// States are the letters, `δ(b, i) = σ(b)_i`, initial state the seed.
pub fn substitution_to_automaton(s: &Substitution, outputs: &[Letter]) -> Result<Automaton> {
    let p = s.constant_length().ok_or(Error::NotConstantLength)?;
    if p < 2 {
        return Err(Error::InvalidBase(p as u64));
    }
    if s.image(s.seed())[0] != s.seed() {
        return Err(Error::InvalidSubstitution("seed is not the first letter of its image".into()));
    }
    let states: Vec<String> = s.alphabet().symbols().to_vec();
    let table = s
        .alphabet()
        .letters()
        .map(|b| s.image(b).iter().map(|l| l.index()).collect())
        .collect();
    let terminals: Vec<usize> = outputs.iter().map(|l| l.index()).collect();
    Automaton::new(states, p as u64, 1, table, s.seed().index(), &terminals)
}

/// Inverse of [`automaton_to_nd_substitution`].
pub fn nd_substitution_to_automaton(s: &NdSubstitution, outputs: &[Letter]) -> Result<Automaton> {
    if s.rule(s.seed())[0] != s.seed() {
        return Err(Error::InvalidSubstitution("seed is not the corner letter of its rule".into()));
    }
    let p = s.side() as u64;
    let d = s.dim();
    let k = (s.side()).pow(d as u32);
    let shape = vec![s.side(); d];
    let states: Vec<String> = s.alphabet().symbols().to_vec();
    let table = s
        .alphabet()
        .letters()
        .map(|b| {
            (0..k)
                .map(|i| {
                    let t = tuple_of_index(i, p, d);
                    let pos: Vec<usize> = t.iter().map(|&c| c as usize).collect();
                    s.rule(b)[crate::nd::linear(&shape, &pos)].index()
                })
                .collect()
        })
        .collect();
    let terminals: Vec<usize> = outputs.iter().map(|l| l.index()).collect();
    Automaton::new(states, p, d, table, s.seed().index(), &terminals)
}

fn build(states: &[&str], base: u64, dim: usize, delta: &[(&str, &str, &str)], initial: &str, terminals: &[&str]) -> Automaton {
    Automaton::from_edges(states, base, dim, delta, initial, terminals).expect("example automaton")
}

/// Even numbers in base 2: the last digit is 0.
pub fn example_even_base2() -> Automaton {
    build(&["a", "b"], 2, 1, &[("a", "0", "a"), ("a", "1", "b"), ("b", "0", "a"), ("b", "1", "b")], "a", &["a"])
}

/// Even numbers in base 3: the digit sum is even.
pub fn example_even_base3() -> Automaton {
    build(
        &["a", "b"],
        3,
        1,
        &[("a", "0", "a"), ("a", "1", "b"), ("a", "2", "a"), ("b", "0", "b"), ("b", "1", "a"), ("b", "2", "b")],
        "a",
        &["a"],
    )
}

/// Powers of two: words `0ⁿ10ᵐ`.
pub fn example_powers_of_two() -> Automaton {
    build(
        &["a", "b", "c"],
        2,
        1,
        &[("a", "0", "a"), ("a", "1", "b"), ("b", "0", "b"), ("b", "1", "c"), ("c", "0", "c"), ("c", "1", "c")],
        "a",
        &["b"],
    )
}

/// Numbers with an even binary digit sum.
pub fn example_even_digit_sum() -> Automaton {
    build(&["a", "b"], 2, 1, &[("a", "0", "a"), ("a", "1", "b"), ("b", "0", "b"), ("b", "1", "a")], "a", &["a"])
}

/// The diagonal `{(n, n)}` in base 2: state `e` accepts, `s` is a sink.
pub fn example_diagonal() -> Automaton {
    build(
        &["e", "s"],
        2,
        2,
        &[
            ("e", "(0,0)", "e"),
            ("e", "(1,1)", "e"),
            ("e", "(0,1)", "s"),
            ("e", "(1,0)", "s"),
            ("s", "(0,0)", "s"),
            ("s", "(0,1)", "s"),
            ("s", "(1,0)", "s"),
            ("s", "(1,1)", "s"),
        ],
        "e",
        &["e"],
    )
}

/// Pairs with even coordinate sum, tracked through the parity of the last digits.
pub fn example_even_sum_pairs() -> Automaton {
    let mut edges = Vec::new();
    for q in ["even", "odd"] {
        for (sym, to) in [("(0,0)", "even"), ("(0,1)", "odd"), ("(1,0)", "odd"), ("(1,1)", "even")] {
            edges.push((q, sym, to));
        }
    }
    build(&["even", "odd"], 2, 2, &edges, "even", &["even"])
}

/// Pairs whose binary digits have even total sum; the states are the two
/// letters of the two-dimensional Thue–Morse array.
pub fn example_thue_morse_pairs() -> Automaton {
    let mut edges = Vec::new();
    for (q, flip) in [("a", "b"), ("b", "a")] {
        edges.push((q, "(0,0)", q));
        edges.push((q, "(1,1)", q));
        edges.push((q, "(0,1)", flip));
        edges.push((q, "(1,0)", flip));
    }
    build(&["a", "b"], 2, 2, &edges, "a", &["a"])
}

impl Automaton {
    /// Same automaton with a different initial state (unchanged if `name` is unknown).
    pub fn with_initial(mut self, name: &str) -> Automaton {
        if let Some(q) = self.state_index(name) {
            self.initial = q;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coded_bit(s: &Substitution, c: &Coding, n: usize) -> Vec<bool> {
        let x = s.fixed_point_letters(n).unwrap();
        c.apply_letters(&x).iter().map(|l| l.0 == 1).collect()
    }

    #[test]
    fn acceptance() {
        let e2 = example_powers_of_two();
        assert!(e2.accepts_text("100").unwrap());
        assert!(!e2.accepts_text("101").unwrap());
        assert!(!e2.accepts_text("").unwrap());
        assert!(example_even_base2().accepts_text("").unwrap());
        assert!(e2.accepts_text("102").is_err());
        assert!(example_diagonal().accepts_text("(1,1)(0,0)").unwrap());
        assert!(!example_diagonal().accepts_text("(1,0)").unwrap());
    }

    #[test]
    fn membership_and_enumeration() {
        let e3 = RecognizableSet::new(example_even_digit_sum()).unwrap();
        assert!(e3.member(6));
        assert!(!e3.member(1));
        assert_eq!(e3.members(10), vec![0, 3, 5, 6, 9]);
        let e1 = RecognizableSet::new(example_even_base3()).unwrap();
        assert!(e1.member(4));
        assert_eq!(e1.members(7), vec![0, 2, 4, 6]);
        let e2 = RecognizableSet::new(example_powers_of_two()).unwrap();
        assert_eq!(e2.members(10), vec![1, 2, 4, 8]);
        let diag = RecognizableSet::new(example_diagonal()).unwrap();
        let pts = diag.enumerate(4).unwrap();
        assert_eq!(pts, vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]);
    }

    #[test]
    fn padding_invariance() {
        for a in [example_even_base2(), example_even_base3(), example_powers_of_two(), example_diagonal()] {
            assert!(a.is_padding_invariant());
            let set = RecognizableSet::new(a.clone()).unwrap();
            for x in 0..200u64 {
                if a.dim() > 1 {
                    continue;
                }
                let r = greedy_rep(&NumerationSystem::base(a.base()).unwrap(), x).unwrap();
                for k in 0..3 {
                    let mut w = vec![0usize; k];
                    w.extend(r.digits.iter().map(|&d| d as usize));
                    assert_eq!(a.is_terminal(a.run(&w)), set.member(x));
                }
            }
        }
        // initial state accepts, a leading 0 leads to a rejecting copy
        let bad = Automaton::from_edges(
            &["p", "q"],
            2,
            1,
            &[("p", "0", "q"), ("p", "1", "p"), ("q", "0", "q"), ("q", "1", "q")],
            "p",
            &["p"],
        )
        .unwrap();
        assert!(!bad.is_padding_invariant());
        assert!(RecognizableSet::new(bad).is_err());
    }

    #[test]
    fn determinization_adds_sink() {
        let a = Automaton::from_edges(&["p"], 2, 1, &[("p", "0", "p")], "p", &["p"]).unwrap();
        assert_eq!(a.states(), &["p".to_string(), "sink".to_string()]);
        assert!(a.accepts_text("000").unwrap());
        assert!(!a.accepts_text("010").unwrap());
        let nfa = Automaton::from_edges(
            &["p", "q"],
            2,
            1,
            &[("p", "0", "p"), ("p", "1", "p"), ("p", "1", "q")],
            "p",
            &["q"],
        )
        .unwrap();
        // words ending in 1
        for (w, want) in [("1", true), ("10", false), ("011", true), ("", false)] {
            assert_eq!(nfa.accepts_text(w).unwrap(), want, "{w}");
        }
    }

    #[test]
    fn normalization() {
        let e2 = example_powers_of_two();
        assert_eq!(normalize_for_conversion(&e2), e2);
        let one = Automaton::new(vec!["q".into()], 2, 1, vec![vec![0, 0]], 0, &[0]).unwrap();
        assert_eq!(normalize_for_conversion(&one), one);
        // δ(q0, 0) = q1: numbers whose representation has odd length, padded reading differs
        let a = Automaton::from_edges(
            &["q0", "q1", "q2"],
            2,
            1,
            &[("q0", "0", "q1"), ("q0", "1", "q2"), ("q1", "0", "q1"), ("q1", "1", "q2"), ("q2", "0", "q2"), ("q2", "1", "q2")],
            "q0",
            &["q2"],
        )
        .unwrap();
        assert!(a.is_padding_invariant());
        let n = normalize_for_conversion(&a);
        assert_eq!(n.states().len(), a.states().len() + 1);
        assert_eq!(n.step(n.initial(), 0), n.initial());
        for x in 0..(1u64 << 12) {
            let r = greedy_rep(&NumerationSystem::base(2).unwrap(), x).unwrap();
            for k in 0..3 {
                let mut w = vec![0usize; k];
                w.extend(r.digits.iter().map(|&d| d as usize));
                assert_eq!(n.is_terminal(n.run(&w)), a.is_terminal(a.run(&w)));
            }
        }
    }

    #[test]
    fn conversion_tables() {
        let cases = [
            (example_even_base2(), vec![("a", "ab"), ("b", "ab")]),
            (example_even_base3(), vec![("a", "aba"), ("b", "bab")]),
            (example_powers_of_two(), vec![("a", "ab"), ("b", "bc"), ("c", "cc")]),
            (example_even_digit_sum(), vec![("a", "ab"), ("b", "ba")]),
        ];
        for (a, rules) in cases {
            let (s, _) = automaton_to_substitution(&a).unwrap();
            let want = Substitution::from_rules("a", &rules).unwrap();
            assert_eq!(s.canonical(), want.canonical());
        }
        let (s3, c3) = automaton_to_substitution(&example_even_digit_sum()).unwrap();
        let bits: String = coded_bit(&s3, &c3, 10).iter().map(|&b| if b { '1' } else { '0' }).collect();
        assert_eq!(bits, "1001011001");
    }

    #[test]
    fn not_normalized_is_rejected() {
        let a = Automaton::new(vec!["p".into(), "q".into()], 2, 1, vec![vec![1, 0], vec![1, 1]], 0, &[0]).unwrap();
        assert_eq!(automaton_to_substitution(&a).unwrap_err(), Error::NotNormalized);
        assert!(automaton_to_substitution(&normalize_for_conversion(&a)).is_ok());
    }

    #[test]
    fn coded_fixed_points_agree_with_membership() {
        for a in [example_even_base2(), example_even_base3(), example_powers_of_two(), example_even_digit_sum()] {
            let set = RecognizableSet::new(a.clone()).unwrap();
            let (s, c) = automaton_to_substitution(&a).unwrap();
            let y = coded_bit(&s, &c, 1 << 12);
            for (n, &bit) in y.iter().enumerate() {
                assert_eq!(bit, set.member(n as u64), "n = {n}");
            }
        }
    }

    #[test]
    fn round_trips() {
        let sigma2 = Substitution::from_rules("a", &[("a", "ab"), ("b", "bc"), ("c", "cc")]).unwrap();
        let a = substitution_to_automaton(&sigma2, &[Letter(1)]).unwrap();
        assert_eq!(a, example_powers_of_two());
        let (back, _) = automaton_to_substitution(&a).unwrap();
        assert_eq!(back, sigma2);
        let sigma3 = Substitution::from_rules("a", &[("a", "ab"), ("b", "ba")]).unwrap();
        assert_eq!(substitution_to_automaton(&sigma3, &[Letter(0)]).unwrap(), example_even_digit_sum());
        let fib = Substitution::from_rules("a", &[("a", "ab"), ("b", "a")]).unwrap();
        assert_eq!(substitution_to_automaton(&fib, &[]).unwrap_err(), Error::NotConstantLength);
    }

    #[test]
    fn two_dimensional_conversion() {
        for a in [example_diagonal(), example_even_sum_pairs(), example_thue_morse_pairs()] {
            let set = RecognizableSet::new(a.clone()).unwrap();
            let (s, c) = automaton_to_nd_substitution(&a).unwrap();
            let w = s.fixed_array(8).unwrap();
            for pos in box_positions(&[256, 256]) {
                let cell = w.get(&pos).unwrap();
                let v: Vec<u64> = pos.iter().map(|&x| x as u64).collect();
                assert_eq!(c.map(cell).0 == 1, set.member_vector(&v).unwrap(), "{pos:?}");
            }
            let back = nd_substitution_to_automaton(&s, &a.terminals().iter().map(|&q| Letter::from(q)).collect::<Vec<_>>()).unwrap();
            assert_eq!(back, a);
        }
        let diag = automaton_to_nd_substitution(&example_diagonal()).unwrap().0;
        let w = diag.fixed_array(3).unwrap();
        for pos in box_positions(&[8, 8]) {
            let want = if pos[0] == pos[1] { "e" } else { "s" };
            assert_eq!(diag.alphabet().symbol(w.get(&pos).unwrap()), want);
        }
    }
}
