//! Line-oriented text formats for automata, substitutions, block maps and
//! semilinear sets, their canonical printing, and window rendering.
//!
//! Files hold one directive per line (`key: values`), `#` starts a comment and
//! tokens are separated by whitespace. An optional `kind:` line names the
//! format; without it the kind is inferred from the directives present.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::automata::Automaton;
use crate::definability::SemilinearSet;
use crate::error::{Error, Result};
use crate::factor::BlockMap;
use crate::nd::{ArrayWindow, NdSubstitution};
use crate::substitution::{Coding, Substitution};
use crate::words::{Alphabet, Letter, Morphism};

/// A parsed spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Spec {
    Automaton(Automaton),
    Substitution { substitution: Substitution, coding: Option<Coding> },
    NdSubstitution { substitution: NdSubstitution, coding: Option<Coding> },
    BlockMap(BlockMap),
    Semilinear(SemilinearSet),
}

impl Spec {
    pub fn kind(&self) -> &'static str {
        match self {
            Spec::Automaton(_) => "automaton",
            Spec::Substitution { .. } => "substitution",
            Spec::NdSubstitution { .. } => "ndsubstitution",
            Spec::BlockMap(_) => "blockmap",
            Spec::Semilinear(_) => "semilinear",
        }
    }
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Debug, Clone)]
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { line: self.number, column, message: message.into() }
    }

    fn head(&self) -> &'a str {
        self.tokens[0].text
    }

    fn rest(&self) -> &[Token<'a>] {
        &self.tokens[1..]
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.column + t.text.chars().count())
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, c) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token { text: &body[s..pos], column: body[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            lines.push(Line { number: i + 1, tokens });
        }
    }
    lines
}

/// Directive key of a line: `alphabet:` style heads, `rule`, `edge`, `map`, `code`, `gen:`.
fn key_of<'a>(line: &Line<'a>) -> &'a str {
    line.head().trim_end_matches(':')
}

fn parse_usize(line: &Line, t: &Token) -> Result<usize> {
    t.text.parse().map_err(|_| line.err(t.column, format!("expected a non-negative integer, found `{}`", t.text)))
}

fn single<'b, 'a>(line: &'b Line<'a>) -> Result<&'b Token<'a>> {
    match line.rest() {
        [t] => Ok(t),
        [] => Err(line.err(line.end_column(), format!("`{}` needs a value", line.head()))),
        [_, extra, ..] => Err(line.err(extra.column, format!("`{}` takes one value", line.head()))),
    }
}

/// Symbols of a token list; a token that is not a symbol of a compact alphabet is split into characters.
fn symbols<'s>(alphabet: Option<&Alphabet>, tokens: &[Token<'s>]) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    for t in tokens {
        match alphabet {
            Some(a) if a.is_compact() && !a.contains(t.text) && t.text.chars().count() > 1 => {
                for (k, c) in t.text.chars().enumerate() {
                    out.push((c.to_string(), t.column + k));
                }
            }
            _ => out.push((t.text.to_string(), t.column)),
        }
    }
    out
}

fn letter(alphabet: &Alphabet, sym: &str) -> Result<Letter> {
    alphabet.letter(sym)
}

fn split_arrow<'b, 'a>(line: &'b Line<'a>) -> Result<(&'b [Token<'a>], &'b [Token<'a>])> {
    let rest = line.rest();
    let pos = rest
        .iter()
        .position(|t| t.text == "->")
        .ok_or_else(|| line.err(line.end_column(), "expected `->`"))?;
    Ok((&rest[..pos], &rest[pos + 1..]))
}

fn parse_vector(line: &Line, t: &Token) -> Result<Vec<u64>> {
    let inner = t.text.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t.text);
    inner
        .split(',')
        .map(|c| {
            c.trim().parse::<u64>().map_err(|_| line.err(t.column, format!("malformed vector `{}`", t.text)))
        })
        .collect()
}

#[derive(Default)]
struct Directives<'a> {
    singles: BTreeMap<&'a str, Line<'a>>,
    lists: Vec<Line<'a>>,
    blocks: Vec<(Line<'a>, Vec<Line<'a>>)>,
}

const LIST_KEYS: [&str; 5] = ["rule", "edge", "map", "code", "gen"];

fn collect<'a>(lines: Vec<Line<'a>>, block_rows: impl Fn(&Directives<'a>) -> Result<usize>) -> Result<Directives<'a>> {
    let mut d = Directives::default();
    let mut iter = lines.into_iter().peekable();
    while let Some(line) = iter.next() {
        let key = key_of(&line);
        let head = line.head();
        if key == "rule" && line.tokens.len() == 2 && line.tokens[1].text.ends_with(':') {
            let rows = block_rows(&d)?;
            let mut body = Vec::with_capacity(rows.min(iter.len()));
            for _ in 0..rows {
                match iter.next() {
                    Some(row) => body.push(row),
                    None => {
                        return Err(line.err(line.end_column(), format!("block needs {rows} rows")));
                    }
                }
            }
            d.blocks.push((line, body));
        } else if LIST_KEYS.contains(&key) {
            d.lists.push(line);
        } else if head.ends_with(':') {
            if key == "base" && d.singles.contains_key("base") {
                d.lists.push(line);
            } else if let Some(prev) = d.singles.get(key) {
                return Err(line.err(1, format!("`{key}` repeated (first on line {})", prev.number)));
            } else {
                d.singles.insert(key, line);
            }
        } else {
            return Err(line.err(1, format!("unknown directive `{head}`")));
        }
    }
    Ok(d)
}

fn infer_kind(lines: &[Line]) -> Option<&'static str> {
    let has = |k: &str| lines.iter().any(|l| key_of(l) == k);
    let block_rule = lines.iter().any(|l| key_of(l) == "rule" && l.tokens.len() == 2 && l.tokens[1].text.ends_with(':'));
    if has("states") || has("edge") {
        Some("automaton")
    } else if has("gen") || (has("base") && lines.iter().any(|l| key_of(l) == "base" && l.rest().iter().any(|t| t.text.starts_with('(')))) {
        Some("semilinear")
    } else if has("map") || has("radius") {
        Some("blockmap")
    } else if block_rule {
        Some("ndsubstitution")
    } else if has("rule") {
        Some("substitution")
    } else {
        None
    }
}

/// Parses a spec file; syntax errors carry line and column, invalid values
/// report the owning type's validation error.
pub fn parse_spec(text: &str) -> Result<Spec> {
    let mut lines = tokenize(text);
    if lines.is_empty() {
        return Err(Error::Parse { line: 1, column: 1, message: "empty spec".into() });
    }
    let kind = if key_of(&lines[0]) == "kind" {
        let first = lines.remove(0);
        let t = single(&first)?;
        match t.text {
            "automaton" | "substitution" | "ndsubstitution" | "blockmap" | "semilinear" => t.text.to_string(),
            other => return Err(first.err(t.column, format!("unknown kind `{other}`"))),
        }
    } else {
        infer_kind(&lines)
            .ok_or_else(|| lines[0].err(1, "cannot tell the kind of this spec; add a `kind:` line"))?
            .to_string()
    };
    match kind.as_str() {
        "automaton" => parse_automaton(lines),
        "substitution" => parse_substitution(lines),
        "ndsubstitution" => parse_nd(lines),
        "blockmap" => parse_blockmap(lines),
        _ => parse_semilinear(lines),
    }
}

fn require<'b, 'a>(d: &'b Directives<'a>, key: &str, last: usize) -> Result<&'b Line<'a>> {
    d.singles
        .get(key)
        .ok_or_else(|| Error::Parse { line: last, column: 1, message: format!("missing `{key}:`") })
}

fn reject_unknown(d: &Directives, allowed: &[&str], lists: &[&str]) -> Result<()> {
    for (k, line) in &d.singles {
        if !allowed.contains(k) {
            return Err(line.err(1, format!("`{k}:` does not belong in this kind of spec")));
        }
    }
    for line in &d.lists {
        if !lists.contains(&key_of(line)) {
            return Err(line.err(1, format!("`{}` does not belong in this kind of spec", line.head())));
        }
    }
    Ok(())
}

fn last_line(lines: &[Line]) -> usize {
    lines.last().map_or(1, |l| l.number)
}

fn alphabet_of(line: &Line) -> Result<Arc<Alphabet>> {
    if line.rest().is_empty() {
        return Err(line.err(line.end_column(), "alphabet needs at least one symbol"));
    }
    Alphabet::new(line.rest().iter().map(|t| t.text))
}

fn parse_coding(d: &Directives, source: &Arc<Alphabet>) -> Result<Option<Coding>> {
    let codes: Vec<&Line> = d.lists.iter().filter(|l| key_of(l) == "code").collect();
    if codes.is_empty() {
        if let Some(out) = d.singles.get("output") {
            return Err(out.err(1, "`output:` without `code` lines"));
        }
        return Ok(None);
    }
    let mut pairs: Vec<(String, String, &Line)> = Vec::new();
    for line in &codes {
        let (lhs, rhs) = split_arrow(line)?;
        match (lhs, rhs) {
            ([a], [b]) => pairs.push((a.text.to_string(), b.text.to_string(), line)),
            _ => return Err(line.err(line.tokens[0].column, "expected `code <letter> -> <symbol>`")),
        }
    }
    let target = match d.singles.get("output") {
        Some(line) => alphabet_of(line)?,
        None => {
            let mut seen: Vec<&str> = Vec::new();
            for (_, b, _) in &pairs {
                if !seen.contains(&b.as_str()) {
                    seen.push(b);
                }
            }
            Alphabet::new(seen)?
        }
    };
    let mut images: Vec<Option<Letter>> = vec![None; source.len()];
    for (a, b, line) in &pairs {
        let l = letter(source, a)?;
        if images[l.index()].is_some() {
            return Err(line.err(line.tokens[1].column, format!("letter `{a}` coded twice")));
        }
        images[l.index()] = Some(letter(&target, b)?);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            l.map(|l| vec![l])
                .ok_or_else(|| Error::InvalidMorphism(format!("no code for `{}`", source.symbol(Letter::from(i)))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(Coding::new(Morphism::new(source.clone(), target, images)?)?))
}

fn parse_substitution(lines: Vec<Line>) -> Result<Spec> {
    let last = last_line(&lines);
    let d = collect(lines, |_| Ok(0))?;
    reject_unknown(&d, &["alphabet", "length", "seed", "output"], &["rule", "code"])?;
    let alphabet = alphabet_of(require(&d, "alphabet", last)?)?;
    let seed_line = require(&d, "seed", last)?;
    let seed = letter(&alphabet, single(seed_line)?.text)?;
    let mut images: Vec<Option<Vec<Letter>>> = vec![None; alphabet.len()];
    for line in d.lists.iter().filter(|l| key_of(l) == "rule") {
        let (lhs, rhs) = split_arrow(line)?;
        let [a] = lhs else {
            return Err(line.err(line.tokens[0].column, "expected `rule <letter> -> <image>`"));
        };
        let l = letter(&alphabet, a.text)?;
        if images[l.index()].is_some() {
            return Err(line.err(a.column, format!("second rule for `{}`", a.text)));
        }
        let image = symbols(Some(&alphabet), rhs)
            .into_iter()
            .map(|(s, _)| letter(&alphabet, &s))
            .collect::<Result<Vec<_>>>()?;
        images[l.index()] = Some(image);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, im)| {
            im.ok_or_else(|| Error::InvalidMorphism(format!("no rule for `{}`", alphabet.symbol(Letter::from(i)))))
        })
        .collect::<Result<Vec<_>>>()?;
    let s = Substitution::new(Morphism::new(alphabet.clone(), alphabet.clone(), images)?, seed)?;
    if let Some(line) = d.singles.get("length") {
        let p = parse_usize(line, single(line)?)?;
        if s.constant_length() != Some(p) {
            return Err(Error::NotConstantLength);
        }
    }
    let report = s.validate();
    if !report.is_valid() {
        return Err(Error::InvalidSubstitution(format!("{report:?}")));
    }
    let coding = parse_coding(&d, &alphabet)?;
    Ok(Spec::Substitution { substitution: s, coding })
}

fn parse_automaton(lines: Vec<Line>) -> Result<Spec> {
    let last = last_line(&lines);
    let d = collect(lines, |_| Ok(0))?;
    reject_unknown(&d, &["base", "states", "alphabet", "initial", "terminal", "dim"], &["edge"])?;
    let states_line = require(&d, "states", last)?;
    let states: Vec<&str> = states_line.rest().iter().map(|t| t.text).collect();
    if states.is_empty() {
        return Err(states_line.err(states_line.end_column(), "no states"));
    }
    let alpha_line = require(&d, "alphabet", last)?;
    let symbols: Vec<&str> = alpha_line.rest().iter().map(|t| t.text).collect();
    if symbols.is_empty() {
        return Err(alpha_line.err(alpha_line.end_column(), "alphabet needs at least one symbol"));
    }
    let dim = if symbols[0].starts_with('(') { symbols[0].split(',').count() } else { 1 };
    let base = match d.singles.get("base") {
        Some(line) => parse_usize(line, single(line)?)? as u64,
        None => (2..=symbols.len() as u64)
            .find(|p| p.checked_pow(dim as u32) == Some(symbols.len() as u64))
            .ok_or_else(|| alpha_line.err(alpha_line.tokens[1].column, "alphabet size is not a power of a base"))?,
    };
    if let Some(line) = d.singles.get("dim") {
        let declared = parse_usize(line, single(line)?)?;
        if declared != dim {
            return Err(line.err(line.tokens[1].column, format!("dim {declared} but the alphabet has {dim}-tuples")));
        }
    }
    let expected = crate::numeration::tuple_alphabet(base, dim)?;
    if expected.symbols() != symbols.as_slice() {
        return Err(Error::InvalidAutomaton(format!(
            "alphabet must list {} in order",
            expected.symbols().join(" ")
        )));
    }
    let initial = single(require(&d, "initial", last)?)?.text;
    let terminals: Vec<&str> = d.singles.get("terminal").map(|l| l.rest().iter().map(|t| t.text).collect()).unwrap_or_default();
    let mut edges = Vec::new();
    for line in &d.lists {
        match line.rest() {
            [a, s, b] => edges.push((a.text, s.text, b.text)),
            _ => return Err(line.err(line.tokens[0].column, "expected `edge <from> <symbol> <to>`")),
        }
    }
    Ok(Spec::Automaton(Automaton::from_edges(&states, base, dim, &edges, initial, &terminals)?))
}

fn parse_nd(lines: Vec<Line>) -> Result<Spec> {
    let last = last_line(&lines);
    let d = collect(lines, |d: &Directives| {
        let get = |k: &str| -> Result<usize> {
            let line = d.singles.get(k).ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: format!("`{k}:` must precede the rule blocks"),
            })?;
            parse_usize(line, single(line)?)
        };
        let (dim, side) = (get("dim")?, get("side")?);
        if dim == 0 || side == 0 {
            return Err(Error::OutOfRange("dim and side must be positive".into()));
        }
        u32::try_from(dim - 1).ok().and_then(|e| side.checked_pow(e)).ok_or(Error::Overflow("block rows"))
    })?;
    reject_unknown(&d, &["dim", "side", "alphabet", "seed", "output"], &["code"])?;
    let dim = parse_usize(require(&d, "dim", last)?, single(require(&d, "dim", last)?)?)?;
    let side = parse_usize(require(&d, "side", last)?, single(require(&d, "side", last)?)?)?;
    let alphabet = alphabet_of(require(&d, "alphabet", last)?)?;
    let seed = letter(&alphabet, single(require(&d, "seed", last)?)?.text)?;
    let mut rules: Vec<Option<Vec<Letter>>> = vec![None; alphabet.len()];
    for (head, rows) in &d.blocks {
        let name = head.tokens[1].text.trim_end_matches(':');
        let l = letter(&alphabet, name)?;
        if rules[l.index()].is_some() {
            return Err(head.err(head.tokens[1].column, format!("second rule for `{name}`")));
        }
        let mut cells = Vec::new();
        for row in rows {
            let syms = symbols(Some(&alphabet), &row.tokens);
            if syms.len() != side {
                return Err(row.err(row.tokens[0].column, format!("row of {} letters, expected {side}", syms.len())));
            }
            for (s, _) in syms {
                cells.push(letter(&alphabet, &s)?);
            }
        }
        rules[l.index()] = Some(cells);
    }
    let rules = rules
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| Error::InvalidMorphism(format!("no rule for `{}`", alphabet.symbol(Letter::from(i))))))
        .collect::<Result<Vec<_>>>()?;
    let s = NdSubstitution::new(alphabet.clone(), dim, side, rules, seed)?;
    let coding = parse_coding(&d, &alphabet)?;
    Ok(Spec::NdSubstitution { substitution: s, coding })
}

fn parse_blockmap(lines: Vec<Line>) -> Result<Spec> {
    let last = last_line(&lines);
    let d = collect(lines, |_| Ok(0))?;
    reject_unknown(&d, &["radius", "side", "dim", "alphabet", "output"], &["map"])?;
    let domain = alphabet_of(require(&d, "alphabet", last)?)?;
    let target = alphabet_of(require(&d, "output", last)?)?;
    let (dim, side) = match (d.singles.get("radius"), d.singles.get("side")) {
        (Some(r), None) => {
            if let Some(line) = d.singles.get("dim") {
                if parse_usize(line, single(line)?)? != 1 {
                    return Err(line.err(line.tokens[1].column, "`radius:` is for one-dimensional maps"));
                }
            }
            (1, 2 * parse_usize(r, single(r)?)? + 1)
        }
        (None, Some(s)) => {
            let dim = match d.singles.get("dim") {
                Some(line) => parse_usize(line, single(line)?)?,
                None => 1,
            };
            (dim, parse_usize(s, single(s)?)?)
        }
        (Some(_), Some(s)) => return Err(s.err(1, "give either `radius:` or `side:`")),
        (None, None) => return Err(Error::Parse { line: last, column: 1, message: "missing `radius:` or `side:`".into() }),
    };
    let mut table = BTreeMap::new();
    for line in &d.lists {
        let (lhs, rhs) = split_arrow(line)?;
        let [out] = rhs else {
            return Err(line.err(line.end_column(), "expected one output symbol"));
        };
        let key = symbols(Some(&domain), lhs)
            .into_iter()
            .map(|(s, _)| letter(&domain, &s))
            .collect::<Result<Vec<_>>>()?;
        if table.insert(key, letter(&target, out.text)?).is_some() {
            return Err(line.err(line.tokens[0].column, "window mapped twice"));
        }
    }
    Ok(Spec::BlockMap(BlockMap::new(domain, target, dim, side, table)?))
}

fn parse_semilinear(lines: Vec<Line>) -> Result<Spec> {
    let last = last_line(&lines);
    let d = collect(lines, |_| Ok(0))?;
    reject_unknown(&d, &["dim", "base"], &["gen", "base"])?;
    let dim_line = require(&d, "dim", last)?;
    let dim = parse_usize(dim_line, single(dim_line)?)?;
    let mut base = Vec::new();
    let mut generators = Vec::new();
    let base_lines = d.singles.get("base").into_iter().chain(d.lists.iter().filter(|l| key_of(l) == "base"));
    for line in base_lines {
        for t in line.rest() {
            base.push(parse_vector(line, t)?);
        }
    }
    for line in d.lists.iter().filter(|l| key_of(l) == "gen") {
        let gens = line.rest().iter().map(|t| parse_vector(line, t)).collect::<Result<Vec<_>>>()?;
        generators.push(gens);
    }
    Ok(Spec::Semilinear(SemilinearSet::new(dim, base, generators)?))
}

fn join_symbols(alphabet: &Alphabet, letters: &[Letter]) -> String {
    letters.iter().map(|&l| alphabet.symbol(l)).collect::<Vec<_>>().join(" ")
}

fn print_coding(out: &mut String, c: &Coding) {
    let _ = writeln!(out, "output: {}", c.target().symbols().join(" "));
    for l in c.source().letters() {
        let _ = writeln!(out, "code {} -> {}", c.source().symbol(l), c.target().symbol(c.map(l)));
    }
}

fn vector(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Canonical text of a spec; parsing it gives back the same value.
pub fn print_spec(spec: &Spec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: {}", spec.kind());
    match spec {
        Spec::Substitution { substitution: s, coding } => {
            let a = s.alphabet();
            let _ = writeln!(out, "alphabet: {}", a.symbols().join(" "));
            if let Some(p) = s.constant_length() {
                let _ = writeln!(out, "length: {p}");
            }
            let _ = writeln!(out, "seed: {}", a.symbol(s.seed()));
            for l in a.letters() {
                let _ = writeln!(out, "rule {} -> {}", a.symbol(l), join_symbols(a, s.image(l)));
            }
            if let Some(c) = coding {
                print_coding(&mut out, c);
            }
        }
        Spec::Automaton(a) => {
            let _ = writeln!(out, "base: {}", a.base());
            let _ = writeln!(out, "states: {}", a.states().join(" "));
            let _ = writeln!(out, "alphabet: {}", a.input().symbols().join(" "));
            let _ = writeln!(out, "initial: {}", a.states()[a.initial()]);
            let terms: Vec<&str> = a.terminals().into_iter().map(|q| a.states()[q].as_str()).collect();
            if terms.is_empty() {
                out.push_str("terminal:\n");
            } else {
                let _ = writeln!(out, "terminal: {}", terms.join(" "));
            }
            for (from, sym, to) in a.edges() {
                let _ = writeln!(out, "edge {from} {sym} {to}");
            }
        }
        Spec::NdSubstitution { substitution: s, coding } => {
            let a = s.alphabet();
            let _ = writeln!(out, "dim: {}", s.dim());
            let _ = writeln!(out, "side: {}", s.side());
            let _ = writeln!(out, "alphabet: {}", a.symbols().join(" "));
            let _ = writeln!(out, "seed: {}", a.symbol(s.seed()));
            let sep = if a.is_compact() { "" } else { " " };
            for l in a.letters() {
                let _ = writeln!(out, "rule {}:", a.symbol(l));
                for row in s.rule(l).chunks(s.side()) {
                    let syms: Vec<&str> = row.iter().map(|&c| a.symbol(c)).collect();
                    let _ = writeln!(out, "{}", syms.join(sep));
                }
            }
            if let Some(c) = coding {
                print_coding(&mut out, c);
            }
        }
        Spec::BlockMap(f) => {
            match f.radius() {
                Some(r) => {
                    let _ = writeln!(out, "radius: {r}");
                }
                None => {
                    let _ = writeln!(out, "dim: {}", f.dim());
                    let _ = writeln!(out, "side: {}", f.side());
                }
            }
            let _ = writeln!(out, "alphabet: {}", f.domain().symbols().join(" "));
            let _ = writeln!(out, "output: {}", f.target().symbols().join(" "));
            for (k, v) in f.table() {
                let _ = writeln!(out, "map {} -> {}", join_symbols(f.domain(), k), f.target().symbol(*v));
            }
        }
        Spec::Semilinear(sl) => {
            let _ = writeln!(out, "dim: {}", sl.dim());
            if !sl.base().is_empty() {
                let vs: Vec<String> = sl.base().iter().map(|v| vector(v)).collect();
                let _ = writeln!(out, "base: {}", vs.join(" "));
            }
            for g in sl.generators() {
                let vs: Vec<String> = g.iter().map(|v| vector(v)).collect();
                let _ = writeln!(out, "gen: {}", vs.join(" "));
            }
        }
    }
    out
}

/// Output formats of [`render_window`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Pgm,
    Ascii,
}

/// A two-dimensional window as plain PGM (one gray level per letter index) or
/// as text, one row per line; rows follow the second axis, columns the first.
pub fn render_window(w: &ArrayWindow, format: RenderFormat) -> Result<String> {
    if w.dim() != 2 {
        return Err(Error::OutOfRange(format!("rendering needs a 2-dimensional window, not {}", w.dim())));
    }
    let rows = w.rows()?;
    let (width, height) = (w.shape()[0], w.shape()[1]);
    let a = w.alphabet();
    let body: Vec<String> = match format {
        RenderFormat::Pgm => rows
            .iter()
            .map(|r| r.iter().map(|l| l.index().to_string()).collect::<Vec<_>>().join(" "))
            .collect(),
        RenderFormat::Ascii => {
            let sep = if a.is_compact() { "" } else { " " };
            rows.iter().map(|r| r.iter().map(|&l| a.symbol(l)).collect::<Vec<_>>().join(sep)).collect()
        }
    };
    Ok(match format {
        RenderFormat::Pgm => {
            let maxval = a.len().saturating_sub(1).max(1);
            format!("P2\n{width} {height}\n{maxval}\n{}", body.join("\n"))
        }
        RenderFormat::Ascii => {
            debug_assert_eq!(body.len(), height);
            body.join("\n")
        }
    })
}
