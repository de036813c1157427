//! Finite simple graphs on at most 63 labelled vertices, with one-word
//! bitset adjacency rows.
//!
//! The cap of 63 keeps every vertex subset in a single `u64` with room for
//! `(1 << n) - 1` masks, which is what the subset/partition enumerations and
//! the containment search lean on.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::rational::Rational;

/// Hard cap on vertex count so a [`VertexSet`] is one machine word.
pub const MAX_VERTICES: usize = 63;

/// Errors from graph construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),
    #[error("invalid parameter for family {family}: {reason}")]
    InvalidParameter { family: String, reason: String },
}

/// A subset of `[n]` encoded as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet {
    bits: u64,
}

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet { bits: 0 };

    pub fn from_bits(bits: u64) -> Self {
        VertexSet { bits }
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        VertexSet {
            bits: (1u64 << n) - 1,
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet { bits: 1 << v }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < 64 && (self.bits >> v) & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.bits |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.bits &= !(1 << v);
    }

    pub fn union(&self, other: VertexSet) -> VertexSet {
        VertexSet {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: VertexSet) -> VertexSet {
        VertexSet {
            bits: self.bits & other.bits,
        }
    }

    pub fn is_subset_of(&self, other: VertexSet) -> bool {
        self.bits & !other.bits == 0
    }

    /// Iterates members in ascending order.
    pub fn iter(&self) -> BitIter {
        BitIter { bits: self.bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

/// Iterator over set bits, ascending.
pub struct BitIter {
    bits: u64,
}

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let v = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(v)
    }
}

/// An ordered partition of `[n]` into `k` labelled, possibly empty parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct InducedPartition {
    parts: Vec<VertexSet>,
}

impl InducedPartition {
    /// Wraps `parts`, checking disjointness and that the union is `[n]`.
    pub fn new(parts: Vec<VertexSet>, n: usize) -> Option<Self> {
        let mut seen = 0u64;
        for p in &parts {
            if p.bits & seen != 0 {
                return None;
            }
            seen |= p.bits;
        }
        if seen != VertexSet::full(n).bits() {
            return None;
        }
        Some(InducedPartition { parts })
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }
}

/// A finite simple labelled graph with bitset adjacency.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}; ", self.n)?;
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
            first = false;
        }
        write!(f, ")")
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { index: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { index: v, n: self.n });
        }
        if u == v {
            return Err(GraphError::LoopEdge(u));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn complete(t: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(t)?;
        let full = VertexSet::full(t).bits();
        for v in 0..t {
            g.adj[v] = full & !(1 << v);
        }
        Ok(g)
    }

    pub fn complete_bipartite(s: usize, t: usize) -> Result<Self, GraphError> {
        Graph::complete_multipartite(&[s, t])
    }

    /// Complete multipartite graph; part `i` holds the consecutive block of
    /// vertices after parts `0..i`.
    pub fn complete_multipartite(sizes: &[usize]) -> Result<Self, GraphError> {
        let n: usize = sizes.iter().sum();
        let mut g = Graph::empty(n)?;
        let mut part_of = vec![0usize; n];
        let mut v = 0;
        for (i, &s) in sizes.iter().enumerate() {
            for _ in 0..s {
                part_of[v] = i;
                v += 1;
            }
        }
        for u in 0..n {
            for w in (u + 1)..n {
                if part_of[u] != part_of[w] {
                    g.add_edge(u, w)?;
                }
            }
        }
        Ok(g)
    }

    pub fn cycle(len: usize) -> Result<Self, GraphError> {
        if len < 3 {
            return Err(GraphError::InvalidParameter {
                family: "C".into(),
                reason: format!("cycle length {len} < 3"),
            });
        }
        let mut g = Graph::empty(len)?;
        for v in 0..len {
            g.add_edge(v, (v + 1) % len)?;
        }
        Ok(g)
    }

    pub fn path(len: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(len)?;
        for v in 1..len {
            g.add_edge(v - 1, v)?;
        }
        Ok(g)
    }

    /// A matching with `m` disjoint edges on `2m` vertices: `{0-1, 2-3, ...}`.
    pub fn matching(m: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(2 * m)?;
        for i in 0..m {
            g.add_edge(2 * i, 2 * i + 1)?;
        }
        Ok(g)
    }

    pub fn disjoint_union(&self, other: &Graph) -> Result<Self, GraphError> {
        let mut g = Graph::empty(self.n + other.n)?;
        for (u, v) in self.edges() {
            g.add_edge(u, v)?;
        }
        for (u, v) in other.edges() {
            g.add_edge(self.n + u, self.n + v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|&a| a == 0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.adj[u] >> v) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn neighbours(&self, v: usize) -> VertexSet {
        VertexSet::from_bits(self.adj[v])
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet::from_bits(self.adj[u] & !((1u64 << u) | ((1u64 << u) - 1)))
                .iter()
                .map(move |v| (u, v))
        })
    }

    /// Number of edges with both endpoints inside `s`.
    pub fn edges_within(&self, s: VertexSet) -> usize {
        s.iter()
            .map(|v| (self.adj[v] & s.bits()).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Induced subgraph on `s`, relabelled order-preservingly to `0..|s|-1`.
    pub fn induced(&self, s: VertexSet) -> Graph {
        let verts = s.to_vec();
        let mut g = Graph::empty(verts.len()).expect("induced subgraph within cap");
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
            }
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let full = VertexSet::full(self.n).bits();
        let mut g = Graph::empty(self.n).expect("same size");
        for v in 0..self.n {
            g.adj[v] = full & !self.adj[v] & !(1 << v);
        }
        g
    }

    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (self.n * (self.n - 1) / 2) as f64
    }

    /// Graph union on a shared vertex set (edge-wise OR).
    pub fn union_with(&self, other: &Graph) -> Result<Graph, GraphError> {
        assert_eq!(self.n, other.n, "union requires equal vertex counts");
        let mut g = Graph::empty(self.n)?;
        for v in 0..self.n {
            g.adj[v] = self.adj[v] | other.adj[v];
        }
        Ok(g)
    }

    pub fn is_clique(&self) -> bool {
        self.edge_count() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Recovers the parts of a complete multipartite graph, or `None` if the
    /// graph is not complete multipartite. Parts are the connected components
    /// of the complement, ordered by least vertex.
    pub fn kpartite_parts(&self) -> Option<Vec<VertexSet>> {
        let comp = self.complement();
        let mut unseen = VertexSet::full(self.n).bits();
        let mut parts = Vec::new();
        while unseen != 0 {
            let start = unseen.trailing_zeros() as usize;
            let mut component = 1u64 << start;
            let mut frontier = component;
            while frontier != 0 {
                let mut next = 0u64;
                for v in VertexSet::from_bits(frontier).iter() {
                    next |= comp.adj[v] & !component;
                }
                component |= next;
                frontier = next;
            }
            unseen &= !component;
            parts.push(VertexSet::from_bits(component));
        }
        // Complete multipartite iff every part is independent in the host
        // (all complement edges stay inside their component by construction,
        // so cross-part host edges are automatically all present).
        for p in &parts {
            if self.edges_within(*p) > 0 {
                return None;
            }
        }
        Some(parts)
    }

    /// Exact chromatic number by branch-and-bound over colour counts.
    pub fn chromatic_number(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        if self.is_edgeless() {
            return 1;
        }
        for k in 2..=self.n {
            if self.colourable_with(k) {
                return k;
            }
        }
        self.n
    }

    fn colourable_with(&self, k: usize) -> bool {
        fn rec(g: &Graph, k: usize, colours: &mut [usize], v: usize, used: usize) -> bool {
            if v == g.n {
                return true;
            }
            // Allowing at most one fresh colour per level prunes colour
            // permutations.
            for c in 0..(used + 1).min(k) {
                let clash = VertexSet::from_bits(g.adj[v] & ((1u64 << v) - 1))
                    .iter()
                    .any(|u| colours[u] == c);
                if !clash {
                    colours[v] = c;
                    if rec(g, k, colours, v + 1, used.max(c + 1)) {
                        return true;
                    }
                }
            }
            false
        }
        let mut colours = vec![usize::MAX; self.n];
        rec(self, k, &mut colours, 0, 0)
    }

    /// First embedding of `pattern` into `self` using only vertices of
    /// `allowed`, or `None`. Pattern edges must map to host edges (plain
    /// subgraph containment, not induced). Deterministic: pattern vertices
    /// are processed by descending degree (ties by index) and host
    /// candidates ascending, so the same inputs always give the same map.
    pub fn contains_copy(&self, pattern: &Graph, allowed: VertexSet) -> Option<Vec<usize>> {
        self.embed(pattern, allowed, None)
    }

    /// Like [`Graph::contains_copy`], but only reports embeddings whose image
    /// includes `through`.
    pub fn contains_copy_through(
        &self,
        pattern: &Graph,
        allowed: VertexSet,
        through: usize,
    ) -> Option<Vec<usize>> {
        self.embed(pattern, allowed, Some(through))
    }

    fn embed(
        &self,
        pattern: &Graph,
        allowed: VertexSet,
        through: Option<usize>,
    ) -> Option<Vec<usize>> {
        let m = pattern.n;
        if m > allowed.len() {
            return None;
        }
        if m == 0 {
            return Some(Vec::new());
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(pattern.degree(v)), v));

        let mut map = vec![usize::MAX; m];
        match through {
            None => {
                if self.embed_rec(pattern, &order, 0, allowed, 0, &mut map) {
                    Some(map)
                } else {
                    None
                }
            }
            Some(v) => {
                if !allowed.contains(v) {
                    return None;
                }
                // Pin each pattern vertex to `v` in turn; any embedding using
                // `v` is found this way.
                for pin_pos in 0..m {
                    let p = order[pin_pos];
                    if pattern.degree(p) > self.degree(v) {
                        continue;
                    }
                    map.fill(usize::MAX);
                    map[p] = v;
                    let mut reordered = Vec::with_capacity(m);
                    reordered.push(p);
                    reordered.extend(order.iter().copied().filter(|&q| q != p));
                    if self.embed_rec(pattern, &reordered, 1, allowed, 1 << v, &mut map) {
                        return Some(map);
                    }
                }
                None
            }
        }
    }

    fn embed_rec(
        &self,
        pattern: &Graph,
        order: &[usize],
        pos: usize,
        allowed: VertexSet,
        used: u64,
        map: &mut Vec<usize>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let p = order[pos];
        // Candidates must be unused, allowed, and host-adjacent to the images
        // of all already-mapped pattern neighbours.
        let mut cands = allowed.bits() & !used;
        for q in pattern.neighbours(p).iter() {
            if map[q] != usize::MAX {
                cands &= self.adj[map[q]];
            }
        }
        let deg_p = pattern.degree(p);
        for v in VertexSet::from_bits(cands).iter() {
            if self.degree(v) < deg_p {
                continue;
            }
            map[p] = v;
            if self.embed_rec(pattern, order, pos + 1, allowed, used | (1 << v), map) {
                return true;
            }
            map[p] = usize::MAX;
        }
        false
    }

    /// Number of distinct copies of `pattern` in `self` ("distinct" meaning
    /// distinct edge sets for edge-bearing patterns, distinct vertex sets for
    /// edgeless ones). Brute force; intended for diagnostics on small
    /// patterns.
    pub fn count_copies(&self, pattern: &Graph) -> u64 {
        let labelled = self.count_embeddings(pattern);
        labelled / crate::iso::automorphism_count(pattern)
    }

    /// Number of injective edge-preserving maps of `pattern` into `self`.
    pub fn count_embeddings(&self, pattern: &Graph) -> u64 {
        fn rec(host: &Graph, pattern: &Graph, pos: usize, used: u64, map: &mut [usize]) -> u64 {
            if pos == pattern.n() {
                return 1;
            }
            let mut cands = VertexSet::full(host.n()).bits() & !used;
            for q in pattern.neighbours(pos).iter() {
                if q < pos {
                    cands &= host.adj[map[q]];
                }
            }
            let mut total = 0;
            for v in VertexSet::from_bits(cands).iter() {
                map[pos] = v;
                total += rec(host, pattern, pos + 1, used | (1 << v), map);
            }
            total
        }
        let mut map = vec![usize::MAX; pattern.n()];
        rec(self, pattern, 0, 0, &mut map)
    }

    /// `m(G)` as a plain helper for hosts: max density e/v is not computed
    /// here; see the densities module. This only reports |E|/|V| of the whole
    /// graph for quick diagnostics.
    pub fn edge_vertex_ratio(&self) -> Rational {
        if self.n == 0 {
            Rational::ZERO
        } else {
            Rational::ratio(self.edge_count(), self.n)
        }
    }
}

/// All subsets of `[n]` with at least `min_size` members, in ascending
/// bitmask order.
pub fn subsets(n: usize, min_size: usize) -> impl Iterator<Item = VertexSet> {
    assert!(n <= MAX_VERTICES);
    let end = 1u64 << n;
    (0..end)
        .filter(move |m| m.count_ones() as usize >= min_size)
        .map(VertexSet::from_bits)
}

/// All `k^n` ordered assignments of `[n]` to `k` labelled (possibly empty)
/// parts. Vertex `v`'s part is digit `v` of the assignment index in base `k`,
/// so the order is deterministic.
pub fn partitions(n: usize, k: usize) -> impl Iterator<Item = InducedPartition> {
    assert!(k >= 1);
    let total = (k as u128).pow(n as u32);
    (0..total).map(move |idx| {
        let mut parts = vec![VertexSet::EMPTY; k];
        let mut rest = idx;
        for v in 0..n {
            let part = (rest % k as u128) as usize;
            rest /= k as u128;
            parts[part].insert(v);
        }
        InducedPartition { parts }
    })
}

/// Visitor form of [`partitions`] for hot loops: calls `f` with the part
/// masks of every assignment, reusing one buffer.
pub(crate) fn for_each_partition<F: FnMut(&[u64])>(n: usize, k: usize, mut f: F) {
    assert!(k >= 1);
    let mut parts = vec![0u64; k];
    let mut digits = vec![0usize; n];
    if n == 0 {
        f(&parts);
        return;
    }
    for v in 0..n {
        parts[0] |= 1 << v;
    }
    loop {
        f(&parts);
        // Increment the base-k counter over digits, updating masks in place.
        let mut v = 0;
        loop {
            if v == n {
                return;
            }
            parts[digits[v]] &= !(1u64 << v);
            digits[v] += 1;
            if digits[v] < k {
                parts[digits[v]] |= 1 << v;
                break;
            }
            digits[v] = 0;
            parts[0] |= 1 << v;
            v += 1;
        }
    }
}
