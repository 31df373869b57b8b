//! Local periodicity, sections, pseudo-periodicity and semilinear sets, all
//! checked on finite windows of `ℕ^d`. Every verdict records the bound it was
//! checked up to and claims nothing beyond it.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::RecognizableSet;
use crate::error::{Error, Result};
use crate::nd::{box_positions, delinear, linear, volume, ArrayWindow};
use crate::recurrence::{is_ultimately_periodic, Periodicity};
use crate::substitution::bit_alphabet;
use crate::words::{Letter, Word};

/// Membership of a subset of `ℕ^d` on the box `[0, shape)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipWindow {
    shape: Vec<usize>,
    cells: Vec<bool>,
}

impl MembershipWindow {
    pub fn new(shape: Vec<usize>, cells: Vec<bool>) -> Result<MembershipWindow> {
        if shape.is_empty() {
            return Err(Error::OutOfRange("membership windows need dimension at least 1".into()));
        }
        if volume(&shape)? != cells.len() {
            return Err(Error::OutOfRange(format!("{} cells for shape {shape:?}", cells.len())));
        }
        Ok(MembershipWindow { shape, cells })
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> bool) -> Result<MembershipWindow> {
        let cells = box_positions(&shape).map(|p| f(&p)).collect();
        MembershipWindow::new(shape, cells)
    }

    /// The cube `[0, side)^d` of a recognizable set.
    pub fn from_recognizable(set: &RecognizableSet, side: usize) -> Result<MembershipWindow> {
        let shape = vec![side; set.dim()];
        let mut err = None;
        let w = MembershipWindow::from_fn(shape, |p| {
            let v: Vec<u64> = p.iter().map(|&c| c as u64).collect();
            set.member_vector(&v).unwrap_or_else(|e| {
                err = Some(e);
                false
            })
        })?;
        err.map_or(Ok(w), Err)
    }

    /// Cells of `w` carrying `l`, relative to the window origin.
    pub fn from_letter(w: &ArrayWindow, l: Letter) -> Result<MembershipWindow> {
        MembershipWindow::new(w.shape().to_vec(), w.indicator(l))
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn covers(&self, pos: &[usize]) -> bool {
        pos.len() == self.shape.len() && pos.iter().zip(&self.shape).all(|(p, n)| p < n)
    }

    pub fn contains(&self, pos: &[usize]) -> Result<bool> {
        if !self.covers(pos) {
            return Err(Error::WindowTooSmall(format!("{pos:?} outside {:?}", self.shape)));
        }
        Ok(self.cells[linear(&self.shape, pos)])
    }

    /// Members in enumeration order, first axis fastest.
    pub fn members(&self) -> Vec<Vec<usize>> {
        (0..self.cells.len()).filter(|&i| self.cells[i]).map(|i| delinear(&self.shape, i)).collect()
    }

    fn at(&self, pos: &[i64]) -> Option<bool> {
        let mut idx = 0usize;
        for i in (0..self.shape.len()).rev() {
            let c = pos[i];
            if c < 0 || c as usize >= self.shape[i] {
                return None;
            }
            idx = idx * self.shape[i] + c as usize;
        }
        Some(self.cells[idx])
    }

    fn ensure_cube(&self, side: usize) -> Result<()> {
        if self.shape.iter().any(|&n| n < side) {
            return Err(Error::WindowTooSmall(format!("need [0,{side})^{} but have {:?}", self.dim(), self.shape)));
        }
        Ok(())
    }
}

fn linf(v: &[i64]) -> u64 {
    v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
}

/// A position `u` of the box with `u` and `u + v` in the box and differing membership.
pub fn v_periodicity_counterexample(
    z: &MembershipWindow,
    v: &[i64],
    start: &[usize],
    shape: &[usize],
) -> Result<Option<Vec<usize>>> {
    let d = z.dim();
    if v.len() != d || start.len() != d || shape.len() != d {
        return Err(Error::OutOfRange("vector and box must match the window dimension".into()));
    }
    if start.iter().zip(shape).zip(&z.shape).any(|((s, e), n)| s + e > *n) {
        return Err(Error::WindowTooSmall(format!("box at {start:?} of shape {shape:?} exceeds {:?}", z.shape)));
    }
    for off in box_positions(shape) {
        let moved: Vec<i64> = off.iter().zip(v).map(|(&o, &c)| o as i64 + c).collect();
        if moved.iter().zip(shape).any(|(&m, &n)| m < 0 || m as usize >= n) {
            continue;
        }
        let u: Vec<i64> = off.iter().zip(start).map(|(&o, &s)| (o + s) as i64).collect();
        let w: Vec<i64> = moved.iter().zip(start).map(|(&m, &s)| m + s as i64).collect();
        if z.at(&u) != z.at(&w) {
            return Ok(Some(u.iter().map(|&c| c as usize).collect()));
        }
    }
    Ok(None)
}

/// `u ∈ Z ⇔ u + v ∈ Z` for all `u` with `u`, `u + v` in the box `start + [0, shape)`.
pub fn is_v_periodic_inside(z: &MembershipWindow, v: &[i64], start: &[usize], shape: &[usize]) -> Result<bool> {
    Ok(v_periodicity_counterexample(z, v, start, shape)?.is_none())
}

/// Vectors `V`, box side `K > max |v|∞` and radius `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPeriodicityWitness {
    pub vectors: Vec<Vec<i64>>,
    pub side: usize,
    pub radius: usize,
}

impl LocalPeriodicityWitness {
    pub fn new(vectors: Vec<Vec<i64>>, side: usize, radius: usize) -> Result<LocalPeriodicityWitness> {
        if vectors.is_empty() {
            return Err(Error::OutOfRange("local periodicity needs at least one vector".into()));
        }
        if vectors.iter().any(|v| v.iter().all(|&c| c == 0)) {
            return Err(Error::OutOfRange("periodicity vectors must be non-zero".into()));
        }
        if vectors.iter().any(|v| v.len() != vectors[0].len()) {
            return Err(Error::OutOfRange("periodicity vectors must share a dimension".into()));
        }
        if vectors.iter().any(|v| linf(v) >= side as u64) {
            return Err(Error::OutOfRange(format!("box side {side} must exceed every |v|")));
        }
        Ok(LocalPeriodicityWitness { vectors, side, radius })
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }
}

/// Outcome of [`check_locally_periodic`]; a pass is evidence up to `bound` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVerdict {
    pub bound: usize,
    /// Corner `j` of a box `j + [0, K)^d` with `L ≤ |j|∞ ≤ bound` where no vector of `V` works.
    pub counterexample: Option<Vec<usize>>,
}

impl LocalVerdict {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// For every `j` with `L ≤ |j|∞ ≤ bound`, some `v ∈ V` makes `Z` `v`-periodic inside `j + [0, K)^d`.
pub fn check_locally_periodic(z: &MembershipWindow, w: &LocalPeriodicityWitness, bound: usize) -> Result<LocalVerdict> {
    if w.dim() != z.dim() {
        return Err(Error::OutOfRange(format!("witness of dimension {} for a {}-dimensional window", w.dim(), z.dim())));
    }
    z.ensure_cube(bound + w.side)?;
    let cube = vec![w.side; z.dim()];
    for j in box_positions(&vec![bound + 1; z.dim()]) {
        if j.iter().copied().max().unwrap_or(0) < w.radius {
            continue;
        }
        let mut any = false;
        for v in &w.vectors {
            if is_v_periodic_inside(z, v, &j, &cube)? {
                any = true;
                break;
            }
        }
        if !any {
            return Ok(LocalVerdict { bound, counterexample: Some(j) });
        }
    }
    Ok(LocalVerdict { bound, counterexample: None })
}

/// The `(d−1)`-dimensional section `{j without coordinate axis : j ∈ Z, j_axis = level}`; axes count from 0.
pub fn sections(z: &MembershipWindow, axis: usize, level: usize) -> Result<MembershipWindow> {
    let d = z.dim();
    if d < 2 {
        return Err(Error::OutOfRange("sections need dimension at least 2".into()));
    }
    if axis >= d {
        return Err(Error::OutOfRange(format!("axis {axis} of a {d}-dimensional window")));
    }
    if level >= z.shape[axis] {
        return Err(Error::OutOfRange(format!("level {level} outside [0,{})", z.shape[axis])));
    }
    let mut shape = z.shape.clone();
    shape.remove(axis);
    MembershipWindow::from_fn(shape, |p| {
        let mut full = p.to_vec();
        full.insert(axis, level);
        z.cells[linear(&z.shape, &full)]
    })
}

/// Smallest `(K, L, V)` with `|V| ≤ 2`, `K ≤ max_side`, `L ≤ max_radius` passing up to `bound`.
///
/// Vectors are taken up to sign; ties prefer smaller `K`, then smaller `L`, then fewer vectors.
pub fn search_local_witness(
    z: &MembershipWindow,
    bound: usize,
    max_side: usize,
    max_radius: usize,
) -> Result<Option<LocalPeriodicityWitness>> {
    let d = z.dim();
    let corners: Vec<Vec<usize>> = box_positions(&vec![bound + 1; d]).collect();
    let norms: Vec<usize> = corners.iter().map(|j| j.iter().copied().max().unwrap_or(0)).collect();
    for side in 2..=max_side {
        if z.ensure_cube(bound + side).is_err() {
            break;
        }
        let k = side as i64 - 1;
        let span = vec![2 * side - 1; d];
        let vectors: Vec<Vec<i64>> = box_positions(&span)
            .map(|raw| raw.iter().map(|&c| c as i64 - k).collect::<Vec<i64>>())
            .filter(|v| matches!(v.iter().find(|&&c| c != 0), Some(&c) if c > 0))
            .collect();
        let cube = vec![side; d];
        let mut good: Vec<Vec<bool>> = Vec::with_capacity(vectors.len());
        for v in &vectors {
            let row = corners
                .iter()
                .map(|j| is_v_periodic_inside(z, v, j, &cube))
                .collect::<Result<Vec<bool>>>()?;
            good.push(row);
        }
        for radius in 0..=max_radius {
            let covered = |f: &dyn Fn(usize) -> bool| (0..corners.len()).all(|c| norms[c] < radius || f(c));
            for (a, ga) in good.iter().enumerate() {
                if covered(&|c| ga[c]) {
                    return Ok(Some(LocalPeriodicityWitness::new(vec![vectors[a].clone()], side, radius)?));
                }
            }
            for a in 0..vectors.len() {
                for b in a + 1..vectors.len() {
                    if covered(&|c| good[a][c] || good[b][c]) {
                        let v = vec![vectors[a].clone(), vectors[b].clone()];
                        return Ok(Some(LocalPeriodicityWitness::new(v, side, radius)?));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Witness for a one-dimensional level: `z(n) = z(n + period)` for `n ≥ preperiod`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UltimateWitness {
    pub period: usize,
    pub preperiod: usize,
}

/// Caller-supplied witnesses, keyed by dimension and letter.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PseudoWitnesses {
    pub local: BTreeMap<(usize, Letter), LocalPeriodicityWitness>,
    pub ultimate: BTreeMap<Letter, UltimateWitness>,
}

impl PseudoWitnesses {
    /// The same witnesses for every letter of `letters` at every level.
    pub fn uniform(
        letters: impl IntoIterator<Item = Letter>,
        dim: usize,
        local: impl Fn(usize) -> Option<LocalPeriodicityWitness>,
        ultimate: UltimateWitness,
    ) -> PseudoWitnesses {
        let mut out = PseudoWitnesses::default();
        for l in letters {
            for k in 2..=dim {
                if let Some(w) = local(k) {
                    out.local.insert((k, l), w);
                }
            }
            out.ultimate.insert(l, ultimate);
        }
        out
    }
}

/// Where [`check_pseudo_periodic`] takes its witnesses from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witnesses {
    Given(PseudoWitnesses),
    /// Bounded search: `|V| ≤ 2`, `K ≤ 8`, `L ≤ 16`; one dimension uses the periodicity detector.
    Search,
}

pub const SEARCH_MAX_SIDE: usize = 8;
pub const SEARCH_MAX_RADIUS: usize = 16;

/// Why a pseudo-periodicity check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PseudoFailure {
    /// Local periodicity fails at the box with this corner.
    LocalBox(Vec<usize>),
    /// The supplied period breaks at this position.
    NotUltimatelyPeriodic(usize),
    /// The bounded search found no witness.
    NoWitnessFound,
}

/// Failure location: the letter and the `(axis, level)` sections taken to reach the failing window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoCounterexample {
    pub letter: Letter,
    pub path: Vec<(usize, usize)>,
    pub failure: PseudoFailure,
}

/// Outcome of [`check_pseudo_periodic`]; a pass is evidence up to `bound` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoVerdict {
    pub bound: usize,
    pub windows_checked: usize,
    pub counterexample: Option<PseudoCounterexample>,
}

impl PseudoVerdict {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Every letter window is locally periodic and every section, at levels up to
/// `bound`, is pseudo-periodic; one-dimensional windows must be ultimately periodic.
pub fn check_pseudo_periodic(t: &ArrayWindow, witnesses: &Witnesses, bound: usize) -> Result<PseudoVerdict> {
    let mut verdict = PseudoVerdict { bound, windows_checked: 0, counterexample: None };
    for l in t.alphabet().letters() {
        let z = MembershipWindow::from_letter(t, l)?;
        let mut path = Vec::new();
        if let Some(failure) = check_set(&z, l, witnesses, bound, &mut path, &mut verdict.windows_checked)? {
            verdict.counterexample = Some(PseudoCounterexample { letter: l, path, failure });
            break;
        }
    }
    Ok(verdict)
}

fn check_set(
    z: &MembershipWindow,
    l: Letter,
    witnesses: &Witnesses,
    bound: usize,
    path: &mut Vec<(usize, usize)>,
    checked: &mut usize,
) -> Result<Option<PseudoFailure>> {
    *checked += 1;
    let d = z.dim();
    if d == 1 {
        return check_line(z, l, witnesses);
    }
    let local = match witnesses {
        Witnesses::Given(w) => {
            let wit = w
                .local
                .get(&(d, l))
                .ok_or_else(|| Error::MissingWitness(format!("local periodicity in dimension {d} for letter {}", l.0)))?;
            check_locally_periodic(z, wit, bound)?.counterexample.map(PseudoFailure::LocalBox)
        }
        Witnesses::Search => match search_local_witness(z, bound, SEARCH_MAX_SIDE, SEARCH_MAX_RADIUS)? {
            Some(_) => None,
            None => Some(PseudoFailure::NoWitnessFound),
        },
    };
    if local.is_some() {
        return Ok(local);
    }
    for axis in 0..d {
        for level in 0..=bound.min(z.shape[axis] - 1) {
            let s = sections(z, axis, level)?;
            path.push((axis, level));
            if let Some(f) = check_set(&s, l, witnesses, bound, path, checked)? {
                return Ok(Some(f));
            }
            path.pop();
        }
    }
    Ok(None)
}

fn check_line(z: &MembershipWindow, l: Letter, witnesses: &Witnesses) -> Result<Option<PseudoFailure>> {
    match witnesses {
        Witnesses::Given(w) => {
            let u = w
                .ultimate
                .get(&l)
                .ok_or_else(|| Error::MissingWitness(format!("ultimate period for letter {}", l.0)))?;
            if u.period == 0 {
                return Err(Error::OutOfRange("period must be positive".into()));
            }
            let n = z.cells.len();
            Ok((u.preperiod..n.saturating_sub(u.period))
                .find(|&i| z.cells[i] != z.cells[i + u.period])
                .map(PseudoFailure::NotUltimatelyPeriodic))
        }
        Witnesses::Search => {
            let bits = bit_alphabet();
            let letters = z.cells.iter().map(|&b| Letter(u32::from(b))).collect();
            let word = Word::new(bits, letters)?;
            Ok(match is_ultimately_periodic(&word) {
                Periodicity::Periodic { .. } => None,
                _ => Some(PseudoFailure::NoWitnessFound),
            })
        }
    }
}

/// `V_0 ∪ ⋃_i Σ_{v ∈ V_i} vℕ` in `ℕ^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearSet {
    dim: usize,
    base: Vec<Vec<u64>>,
    generators: Vec<Vec<Vec<u64>>>,
}

impl SemilinearSet {
    pub fn new(dim: usize, base: Vec<Vec<u64>>, generators: Vec<Vec<Vec<u64>>>) -> Result<SemilinearSet> {
        if dim == 0 {
            return Err(Error::OutOfRange("semilinear sets need dimension at least 1".into()));
        }
        let bad = base.iter().chain(generators.iter().flatten()).find(|v| v.len() != dim);
        if let Some(v) = bad {
            return Err(Error::OutOfRange(format!("vector {v:?} is not {dim}-dimensional")));
        }
        Ok(SemilinearSet { dim, base, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> &[Vec<u64>] {
        &self.base
    }

    pub fn generators(&self) -> &[Vec<Vec<u64>>] {
        &self.generators
    }

    /// Membership decided by enumeration below `x`.
    pub fn contains(&self, x: &[u64]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::OutOfRange(format!("{x:?} is not {}-dimensional", self.dim)));
        }
        let shape: Vec<usize> = x.iter().map(|&c| c as usize + 1).collect();
        Ok(self.members_in(&shape)?.contains(&x.iter().map(|&c| c as usize).collect::<Vec<_>>()))
    }

    fn members_in(&self, shape: &[usize]) -> Result<BTreeSet<Vec<usize>>> {
        let mut out: BTreeSet<Vec<usize>> = self
            .base
            .iter()
            .filter(|v| v.iter().zip(shape).all(|(&c, &n)| (c as usize) < n))
            .map(|v| v.iter().map(|&c| c as usize).collect())
            .collect();
        let vol = volume(shape)?;
        for gens in &self.generators {
            let gens: Vec<&Vec<u64>> = gens.iter().filter(|v| v.iter().any(|&c| c != 0)).collect();
            let mut seen = vec![false; vol];
            let mut stack = vec![vec![0usize; self.dim]];
            seen[0] = true;
            while let Some(p) = stack.pop() {
                for g in &gens {
                    let q: Vec<usize> = p.iter().zip(g.iter()).map(|(&a, &b)| a + b as usize).collect();
                    if q.iter().zip(shape).any(|(a, n)| a >= n) {
                        continue;
                    }
                    let i = linear(shape, &q);
                    if !seen[i] {
                        seen[i] = true;
                        stack.push(q);
                    }
                }
            }
            out.extend((0..vol).filter(|&i| seen[i]).map(|i| delinear(shape, i)));
        }
        Ok(out)
    }
}

/// Members of `sl` in `[0, n)^d`.
pub fn semilinear_members(sl: &SemilinearSet, n: usize) -> Result<BTreeSet<Vec<usize>>> {
    if n == 0 {
        return Ok(BTreeSet::new());
    }
    sl.members_in(&vec![n; sl.dim])
}

/// Outcome of [`muchnik_equivalence`] on `[0, bound)^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuchnikVerdict {
    pub bound: usize,
    /// First point of the window set missing from the semilinear set.
    pub window_only: Option<Vec<usize>>,
    /// First point of the semilinear set missing from the window set.
    pub set_only: Option<Vec<usize>>,
}

impl MuchnikVerdict {
    pub fn equal(&self) -> bool {
        self.window_only.is_none() && self.set_only.is_none()
    }

    /// The earlier of the two discrepancies, in enumeration order (first axis fastest).
    pub fn first_discrepancy(&self) -> Option<&Vec<usize>> {
        let key = |p: &Vec<usize>| p.iter().rev().copied().collect::<Vec<_>>();
        match (&self.window_only, &self.set_only) {
            (Some(a), Some(b)) => Some(if key(a) <= key(b) { a } else { b }),
            (a, b) => a.as_ref().or(b.as_ref()),
        }
    }
}

/// Compares the window set with `sl` on `[0, n)^d`, reporting the first discrepancy of each kind.
pub fn muchnik_equivalence(t: &MembershipWindow, sl: &SemilinearSet, n: usize) -> Result<MuchnikVerdict> {
    if t.dim() != sl.dim() {
        return Err(Error::OutOfRange(format!("{}-dimensional window against a {}-dimensional set", t.dim(), sl.dim())));
    }
    t.ensure_cube(n)?;
    let members = semilinear_members(sl, n)?;
    let mut verdict = MuchnikVerdict { bound: n, window_only: None, set_only: None };
    for p in box_positions(&vec![n; t.dim()]) {
        let a = t.cells[linear(&t.shape, &p)];
        let b = members.contains(&p);
        if a && !b && verdict.window_only.is_none() {
            verdict.window_only = Some(p);
        } else if b && !a && verdict.set_only.is_none() {
            verdict.set_only = Some(p);
        }
        if verdict.window_only.is_some() && verdict.set_only.is_some() {
            break;
        }
    }
    Ok(verdict)
}
