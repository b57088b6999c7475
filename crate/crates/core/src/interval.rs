//! Intervals (connected convex subsets) of a finite poset and the poset they
//! form under inclusion.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poset::{Poset, VertexSet};

/// One slice `[start, end]` (first grid coordinate) of a staircase at height
/// `row` (second grid coordinate). All values 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StairRow {
    pub row: usize,
    pub start: usize,
    pub end: usize,
}

/// A nonempty connected convex subset of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    members: VertexSet,
    staircase: Option<Vec<StairRow>>,
}

impl Interval {
    /// Validate `members` as an interval of `poset`.
    pub fn new(poset: &Poset, members: VertexSet) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::NotAnInterval("empty set".into()));
        }
        if members.0 >> poset.len() != 0 {
            return Err(Error::NotAnInterval("member out of range".into()));
        }
        if !poset.is_connected(members) {
            return Err(Error::NotAnInterval(format!(
                "{:?} is not connected",
                poset.set_labels(members)
            )));
        }
        if !poset.is_convex(members) {
            return Err(Error::NotAnInterval(format!(
                "{:?} is not convex",
                poset.set_labels(members)
            )));
        }
        Ok(Self::new_unchecked(poset, members))
    }

    pub(crate) fn new_unchecked(poset: &Poset, members: VertexSet) -> Self {
        let staircase = poset.grid_shape().map(|_| staircase_of(poset, members));
        Interval { members, staircase }
    }

    /// Build a grid interval from its staircase rows `(row, start, end)`.
    pub fn from_staircase(poset: &Poset, rows: &[StairRow]) -> Result<Self> {
        let (m, n) = poset
            .grid_shape()
            .ok_or_else(|| Error::NotAnInterval("staircase given for a non-grid poset".into()))?;
        if rows.is_empty() {
            return Err(Error::NotAnInterval("empty staircase".into()));
        }
        let mut rows = rows.to_vec();
        rows.sort_by_key(|r| r.row);
        for w in rows.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi.row != lo.row + 1 {
                return Err(Error::NotAnInterval("staircase rows must be consecutive".into()));
            }
            if !(hi.start <= lo.start && lo.start <= hi.end && hi.end <= lo.end) {
                return Err(Error::NotAnInterval(format!(
                    "rows {} and {} violate the staircase inequalities",
                    lo.row, hi.row
                )));
            }
        }
        let mut members = VertexSet::EMPTY;
        for r in &rows {
            if r.row == 0 || r.row > n || r.start == 0 || r.start > r.end || r.end > m {
                return Err(Error::NotAnInterval(format!("bad staircase row {r:?}")));
            }
            for i in r.start..=r.end {
                members.insert(poset.grid_vertex(i, r.row).expect("checked range"));
            }
        }
        Ok(Interval {
            members,
            staircase: Some(rows),
        })
    }

    pub fn members(&self) -> VertexSet {
        self.members
    }

    pub fn staircase(&self) -> Option<&[StairRow]> {
        self.staircase.as_deref()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        self.members.is_subset(other.members)
    }

    /// Short human-readable form: the staircase on grids, labels otherwise.
    pub fn describe(&self, poset: &Poset) -> String {
        match &self.staircase {
            Some(rows) => rows
                .iter()
                .map(|r| format!("[{},{}]_{}", r.start, r.end, r.row))
                .collect::<Vec<_>>()
                .join("+"),
            None => format!("{{{}}}", poset.set_labels(self.members).join(",")),
        }
    }
}

/// Staircase rows of a member set of a grid, bottom to top. Does not check
/// that the set is an interval.
fn staircase_of(poset: &Poset, members: VertexSet) -> Vec<StairRow> {
    let (m, n) = poset.grid_shape().expect("grid poset");
    let mut rows = Vec::new();
    for j in 1..=n {
        let cols: Vec<usize> = (1..=m)
            .filter(|&i| members.contains(poset.grid_vertex(i, j).unwrap()))
            .collect();
        if let (Some(&start), Some(&end)) = (cols.first(), cols.last()) {
            rows.push(StairRow { row: j, start, end });
        }
    }
    rows
}

/// All intervals of a poset, ordered lexicographically by sorted member ids,
/// with the inclusion order.
pub struct IntervalPoset {
    poset: Arc<Poset>,
    intervals: Vec<Interval>,
    index: HashMap<VertexSet, usize>,
    covers: OnceLock<Vec<Vec<usize>>>,
    pub(crate) plans: OnceLock<Vec<crate::approx::IntervalPlan>>,
}

impl std::fmt::Debug for IntervalPoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntervalPoset")
            .field("poset", &self.poset)
            .field("len", &self.intervals.len())
            .finish()
    }
}

/// Enumerate every interval of `poset` exactly once.
pub fn enumerate_intervals(poset: &Arc<Poset>) -> IntervalPoset {
    let sets = if poset.grid_shape().is_some() {
        grid_interval_sets(poset)
    } else {
        generic_interval_sets(poset)
    };
    IntervalPoset::from_sets(poset.clone(), sets)
}

/// Staircase enumeration: pick a bottom row and slice, then extend upward
/// with slices satisfying `b' <= b <= d' <= d`.
fn grid_interval_sets(poset: &Poset) -> Vec<VertexSet> {
    let (m, n) = poset.grid_shape().unwrap();
    fn extend(
        poset: &Poset,
        m: usize,
        n: usize,
        row: usize,
        (b, d): (usize, usize),
        acc: VertexSet,
        out: &mut Vec<VertexSet>,
    ) {
        out.push(acc);
        if row == n {
            return;
        }
        let next = row + 1;
        for b2 in 1..=b {
            for d2 in b..=d {
                let mut s = acc;
                for i in b2..=d2 {
                    s.insert(poset.grid_vertex(i, next).unwrap());
                }
                extend(poset, m, n, next, (b2, d2), s, out);
            }
        }
    }
    let mut out = Vec::new();
    for row in 1..=n {
        for b in 1..=m {
            for d in b..=m {
                let s = VertexSet::from_iter((b..=d).map(|i| poset.grid_vertex(i, row).unwrap()));
                extend(poset, m, n, row, (b, d), s, &mut out);
            }
        }
    }
    out
}

/// Grow connected sets one neighbour at a time and keep the convex ones.
fn generic_interval_sets(poset: &Poset) -> Vec<VertexSet> {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut stack: Vec<VertexSet> = (0..poset.len()).map(VertexSet::singleton).collect();
    seen.extend(stack.iter().copied());
    let mut out = Vec::new();
    while let Some(s) = stack.pop() {
        if poset.is_convex(s) {
            out.push(s);
        }
        let mut boundary = VertexSet::EMPTY;
        for x in s.iter() {
            boundary = boundary.union(poset.neighbors(x));
        }
        for v in boundary.difference(s).iter() {
            let mut t = s;
            t.insert(v);
            if seen.insert(t) {
                stack.push(t);
            }
        }
    }
    out
}

impl IntervalPoset {
    /// Build from a list of member sets that are already known to be
    /// intervals. Duplicates are removed.
    pub(crate) fn from_sets(poset: Arc<Poset>, sets: Vec<VertexSet>) -> Self {
        let mut keyed: Vec<(Vec<usize>, VertexSet)> = sets
            .into_iter()
            .collect::<HashSet<_>>()
            .into_iter()
            .map(|s| (s.to_vec(), s))
            .collect();
        keyed.sort();
        let intervals: Vec<Interval> = keyed
            .into_iter()
            .map(|(_, s)| Interval::new_unchecked(&poset, s))
            .collect();
        let index = intervals
            .iter()
            .enumerate()
            .map(|(i, iv)| (iv.members, i))
            .collect();
        IntervalPoset {
            poset,
            intervals,
            index,
            covers: OnceLock::new(),
            plans: OnceLock::new(),
        }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn get(&self, idx: usize) -> &Interval {
        &self.intervals[idx]
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Interval)> {
        self.intervals.iter().enumerate()
    }

    pub fn index_of(&self, members: VertexSet) -> Option<usize> {
        self.index.get(&members).copied()
    }

    /// `I <= J` iff `I` is contained in `J`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.intervals[i].members.is_subset(self.intervals[j].members)
    }

    /// The intervals covering `J` in the inclusion order.
    pub fn covers(&self, j: usize) -> &[usize] {
        &self.cover_lists()[j]
    }

    fn cover_lists(&self) -> &Vec<Vec<usize>> {
        self.covers.get_or_init(|| {
            (0..self.len())
                .map(|j| {
                    let base = self.intervals[j].members;
                    let mut sup: Vec<usize> = (0..self.len())
                        .filter(|&k| {
                            let s = self.intervals[k].members;
                            s != base && base.is_subset(s)
                        })
                        .collect();
                    sup.sort_by_key(|&k| (self.intervals[k].len(), k));
                    // Anything strictly above J contains a minimal one, and a
                    // minimal one is processed before anything larger.
                    let mut minimal: Vec<usize> = Vec::new();
                    for k in sup {
                        let s = self.intervals[k].members;
                        if !minimal.iter().any(|&l| self.intervals[l].members.is_subset(s)) {
                            minimal.push(k);
                        }
                    }
                    minimal.sort_unstable();
                    minimal
                })
                .collect()
        })
    }

    /// Least interval containing every interval in `s`, if one exists.
    /// Returns `None` (no join) when `s` is empty or the upper bounds have no
    /// minimum.
    pub fn join(&self, s: &[usize]) -> Option<usize> {
        let union = s
            .iter()
            .fold(VertexSet::EMPTY, |acc, &i| acc.union(self.intervals[i].members));
        if union.is_empty() {
            return None;
        }
        self.least_containing(union)
    }

    /// Least interval containing the vertex set `s`, if one exists.
    pub fn least_containing(&self, s: VertexSet) -> Option<usize> {
        let mut meet: Option<VertexSet> = None;
        for iv in &self.intervals {
            if s.is_subset(iv.members) {
                meet = Some(meet.map_or(iv.members, |m| m.intersection(iv.members)));
            }
        }
        meet.and_then(|m| self.index_of(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(p: Poset) -> IntervalPoset {
        enumerate_intervals(&Arc::new(p))
    }

    #[test]
    fn chain_interval_count() {
        for n in 1..=8 {
            assert_eq!(ip(Poset::chain(n).unwrap()).len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn grid_2x2_has_eleven() {
        assert_eq!(ip(Poset::grid(2, 2).unwrap()).len(), 11);
    }

    #[test]
    fn grid_and_generic_enumeration_agree() {
        for (m, n) in [(2, 3), (3, 3), (2, 5), (3, 4)] {
            let g = Arc::new(Poset::grid(m, n).unwrap());
            let a: HashSet<VertexSet> = grid_interval_sets(&g).into_iter().collect();
            let b: HashSet<VertexSet> = generic_interval_sets(&g).into_iter().collect();
            assert_eq!(a, b, "grid {m}x{n}");
        }
    }

    #[test]
    fn ordering_is_lexicographic() {
        let ip = ip(Poset::grid(3, 2).unwrap());
        let keys: Vec<Vec<usize>> = ip.intervals().iter().map(|i| i.members().to_vec()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn staircase_round_trip() {
        let g = Poset::grid(4, 3).unwrap();
        let ip = ip(g.clone());
        for iv in ip.intervals() {
            let rows = iv.staircase().unwrap();
            let back = Interval::from_staircase(&g, rows).unwrap();
            assert_eq!(back.members(), iv.members());
        }
    }

    #[test]
    fn staircase_example_in_6x4() {
        let g = Poset::grid(6, 4).unwrap();
        let rows = [
            StairRow { row: 1, start: 5, end: 6 },
            StairRow { row: 2, start: 3, end: 5 },
            StairRow { row: 3, start: 3, end: 4 },
        ];
        let iv = Interval::from_staircase(&g, &rows).unwrap();
        assert_eq!(iv.len(), 7);
        assert!(g.is_interval(iv.members()));
        let bad = [
            StairRow { row: 1, start: 1, end: 2 },
            StairRow { row: 2, start: 3, end: 4 },
        ];
        assert!(Interval::from_staircase(&g, &bad).is_err());
    }

    #[test]
    fn rejects_non_intervals() {
        let g = Poset::grid(2, 2).unwrap();
        let v = |i, j| g.grid_vertex(i, j).unwrap();
        assert!(Interval::new(&g, VertexSet::from_iter([v(1, 1), v(2, 2)])).is_err());
        assert!(Interval::new(&g, VertexSet::EMPTY).is_err());
    }

    #[test]
    fn join_examples() {
        let g = Poset::grid(2, 1).unwrap();
        let ip = ip(g.clone());
        let a = ip.index_of(VertexSet::singleton(0)).unwrap();
        let b = ip.index_of(VertexSet::singleton(1)).unwrap();
        let ab = ip.index_of(VertexSet::from_iter([0, 1])).unwrap();
        assert_eq!(ip.join(&[a]), Some(a));
        assert_eq!(ip.join(&[a, b]), Some(ab));
        assert_eq!(ip.join(&[]), None);
    }

    #[test]
    fn covers_examples() {
        let small = ip(Poset::grid(2, 1).unwrap());
        let a = small.index_of(VertexSet::singleton(0)).unwrap();
        let ab = small.index_of(VertexSet::from_iter([0, 1])).unwrap();
        assert_eq!(small.covers(a), &[ab]);
        assert!(small.covers(ab).is_empty());
        let big = ip(Poset::grid(3, 3).unwrap());
        let full = big.index_of(big.poset().all()).unwrap();
        assert!(big.covers(full).is_empty());
    }
}
