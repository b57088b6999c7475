//! Finite posets presented by their Hasse diagrams.
//!
//! Vertices are dense ids `0..len`. The order relation is cached as up-set
//! and down-set bitmasks, which caps posets at [`MAX_VERTICES`] elements.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 128;

/// A set of vertex ids, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(x: usize) -> Self {
        VertexSet(1u128 << x)
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        VertexSet(it.into_iter().fold(0u128, |acc, x| acc | (1u128 << x)))
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u128 << x;
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1u128 << x);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 | o.0)
    }

    #[inline]
    pub fn intersection(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & o.0)
    }

    #[inline]
    pub fn difference(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & !o.0)
    }

    #[inline]
    pub fn is_subset(self, o: VertexSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(x)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite poset with its Hasse diagram and cached order relation.
#[derive(Clone)]
pub struct Poset {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    edge_ids: HashMap<(usize, usize), usize>,
    out_adj: Vec<Vec<(usize, usize)>>,
    in_adj: Vec<Vec<(usize, usize)>>,
    neighbors: Vec<VertexSet>,
    up: Vec<VertexSet>,
    down: Vec<VertexSet>,
    topo: Vec<usize>,
    grid: Option<(usize, usize)>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("labels", &self.labels)
            .field("edges", &self.edges)
            .field("grid", &self.grid)
            .finish()
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges && self.grid == other.grid
    }
}

impl Eq for Poset {}

impl Poset {
    /// Build a poset from labelled elements and covering (or arbitrary)
    /// relations `a < b`. Transitively implied edges are dropped so that the
    /// stored edges are exactly the Hasse diagram.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_VERTICES {
            return Err(Error::InvalidPoset(format!(
                "{n} elements exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        {
            let mut seen = std::collections::HashSet::new();
            for l in &labels {
                if !seen.insert(l.as_str()) {
                    return Err(Error::InvalidPoset(format!("duplicate element {l:?}")));
                }
            }
        }
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidPoset(format!("self-loop at {}", labels[a])));
            }
            succ[a].push(b);
        }
        // Kahn's algorithm for a topological order; a leftover means a cycle.
        let mut indeg = vec![0usize; n];
        for s in &succ {
            for &b in s {
                indeg[b] += 1;
            }
        }
        let mut topo = Vec::with_capacity(n);
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        while let Some(x) = ready.pop_first() {
            topo.push(x);
            for &b in &succ[x] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.insert(b);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::InvalidPoset("relations contain a cycle".into()));
        }
        let mut up = vec![VertexSet::EMPTY; n];
        for &x in topo.iter().rev() {
            let mut s = VertexSet::singleton(x);
            for &b in &succ[x] {
                s = s.union(up[b]);
            }
            up[x] = s;
        }
        let mut down = vec![VertexSet::EMPTY; n];
        for x in 0..n {
            for y in up[x].iter() {
                down[y].insert(x);
            }
        }
        // a < b is a cover iff [a,b] = {a,b}.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for a in 0..n {
            for b in up[a].iter() {
                if a != b && up[a].intersection(down[b]).len() == 2 {
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        Ok(Self::assemble(labels, edges, up, down, topo, None))
    }

    fn assemble(
        labels: Vec<String>,
        edges: Vec<(usize, usize)>,
        up: Vec<VertexSet>,
        down: Vec<VertexSet>,
        topo: Vec<usize>,
        grid: Option<(usize, usize)>,
    ) -> Self {
        let n = labels.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut neighbors = vec![VertexSet::EMPTY; n];
        let mut edge_ids = HashMap::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            out_adj[a].push((b, id));
            in_adj[b].push((a, id));
            neighbors[a].insert(b);
            neighbors[b].insert(a);
            edge_ids.insert((a, b), id);
        }
        Poset {
            labels,
            edges,
            edge_ids,
            out_adj,
            in_adj,
            neighbors,
            up,
            down,
            topo,
            grid,
        }
    }

    /// Build from labels and Hasse edges given by label.
    pub fn from_hasse(labels: Vec<String>, edges: &[(String, String)]) -> Result<Self> {
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut rel = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| Error::InvalidPoset(format!("unknown element {a:?}")))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| Error::InvalidPoset(format!("unknown element {b:?}")))?;
            rel.push((ia, ib));
        }
        Self::from_relations(labels, &rel)
    }

    /// The commutative grid `{1..m} x {1..n}` with the product order.
    ///
    /// Vertex `(i, j)` gets id `(j-1)*m + (i-1)`, so ids run along the first
    /// coordinate within each row. Labels are `"(i,j)"`.
    pub fn grid(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidPoset(format!("grid size {m}x{n} must be positive")));
        }
        if m * n > MAX_VERTICES {
            return Err(Error::InvalidPoset(format!("grid {m}x{n} is too large")));
        }
        let id = |i: usize, j: usize| (j - 1) * m + (i - 1);
        let mut labels = Vec::with_capacity(m * n);
        for j in 1..=n {
            for i in 1..=m {
                labels.push(format!("({i},{j})"));
            }
        }
        let mut rel = Vec::new();
        for j in 1..=n {
            for i in 1..=m {
                if i < m {
                    rel.push((id(i, j), id(i + 1, j)));
                }
                if j < n {
                    rel.push((id(i, j), id(i, j + 1)));
                }
            }
        }
        let mut p = Self::from_relations(labels, &rel)?;
        p.grid = Some((m, n));
        Ok(p)
    }

    /// The chain `1 < 2 < ... < n`, labelled `"1".."n"`.
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPoset("chain length must be positive".into()));
        }
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations(labels, &rel)
    }

    /// The opposite poset: same vertex ids and labels, reversed order.
    pub fn opposite(&self) -> Poset {
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (b, a)).collect();
        edges.sort_unstable();
        let topo = self.topo.iter().rev().copied().collect();
        Self::assemble(
            self.labels.clone(),
            edges,
            self.down.clone(),
            self.up.clone(),
            topo,
            None,
        )
    }

    /// Whether `other` is the opposite of `self`.
    pub fn is_opposite_of(&self, other: &Poset) -> bool {
        self.labels == other.labels
            && self.edges.len() == other.edges.len()
            && self.edges.iter().all(|&(a, b)| other.edge_ids.contains_key(&(b, a)))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Hasse edges `(source, target)`, sorted; the edge id is the position.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_ids.get(&(a, b)).copied()
    }

    /// Outgoing Hasse edges as `(target, edge id)`.
    pub fn out_edges(&self, x: usize) -> &[(usize, usize)] {
        &self.out_adj[x]
    }

    /// Incoming Hasse edges as `(source, edge id)`.
    pub fn in_edges(&self, x: usize) -> &[(usize, usize)] {
        &self.in_adj[x]
    }

    pub fn neighbors(&self, x: usize) -> VertexSet {
        self.neighbors[x]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// `{y : x <= y}`
    pub fn up_set(&self, x: usize) -> VertexSet {
        self.up[x]
    }

    /// `{y : y <= x}`
    pub fn down_set(&self, x: usize) -> VertexSet {
        self.down[x]
    }

    /// The segment `[a, b]`.
    pub fn segment(&self, a: usize, b: usize) -> VertexSet {
        self.up[a].intersection(self.down[b])
    }

    /// A linear extension of the order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::from_iter(0..self.len())
    }

    /// Grid dimensions `(m, n)` when built by [`Poset::grid`].
    pub fn grid_shape(&self) -> Option<(usize, usize)> {
        self.grid
    }

    /// 1-based grid coordinates `(i, j)` of a vertex.
    pub fn grid_coords(&self, x: usize) -> Option<(usize, usize)> {
        self.grid.map(|(m, _)| (x % m + 1, x / m + 1))
    }

    pub fn grid_vertex(&self, i: usize, j: usize) -> Option<usize> {
        let (m, n) = self.grid?;
        (1..=m).contains(&i).then_some(())?;
        (1..=n).contains(&j).then_some(())?;
        Some((j - 1) * m + (i - 1))
    }

    pub fn is_connected(&self, s: VertexSet) -> bool {
        let Some(start) = s.first() else {
            return false;
        };
        self.component(s, start) == s
    }

    /// The connected component of `start` inside `s` (Hasse adjacency).
    pub fn component(&self, s: VertexSet, start: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for x in frontier.iter() {
                next = next.union(self.neighbors[x]);
            }
            next = next.intersection(s).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    /// Connected components of `s`, ordered by smallest member.
    pub fn components(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut rest = s;
        let mut out = Vec::new();
        while let Some(x) = rest.first() {
            let c = self.component(rest, x);
            rest = rest.difference(c);
            out.push(c);
        }
        out
    }

    pub fn is_convex(&self, s: VertexSet) -> bool {
        // Convex iff the up-closure and down-closure meet exactly in s.
        let mut ups = VertexSet::EMPTY;
        let mut downs = VertexSet::EMPTY;
        for x in s.iter() {
            ups = ups.union(self.up[x]);
            downs = downs.union(self.down[x]);
        }
        ups.intersection(downs) == s
    }

    pub fn is_interval(&self, s: VertexSet) -> bool {
        !s.is_empty() && self.is_connected(s) && self.is_convex(s)
    }

    pub fn minimal_elements(&self, s: VertexSet) -> VertexSet {
        VertexSet::from_iter(s.iter().filter(|&x| self.down[x].intersection(s).len() == 1))
    }

    pub fn maximal_elements(&self, s: VertexSet) -> VertexSet {
        VertexSet::from_iter(s.iter().filter(|&x| self.up[x].intersection(s).len() == 1))
    }

    pub fn up_closure(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(VertexSet::EMPTY, |acc, x| acc.union(self.up[x]))
    }

    pub fn down_closure(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(VertexSet::EMPTY, |acc, x| acc.union(self.down[x]))
    }

    pub fn set_labels(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|x| self.labels[x].clone()).collect()
    }
}
