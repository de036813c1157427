//! Brute-force isomorphism helpers for small patterns (at most 10 vertices):
//! canonical forms, isomorphism tests and automorphism counts.

use std::sync::OnceLock;

use crate::graph::Graph;

/// Largest pattern size the permutation brute force accepts.
pub const MAX_ISO_VERTICES: usize = 8;

fn permutations(n: usize) -> &'static [Vec<usize>] {
    static TABLES: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        let mut all = Vec::with_capacity(MAX_ISO_VERTICES + 1);
        for n in 0..=MAX_ISO_VERTICES {
            let mut perms = Vec::new();
            let mut perm: Vec<usize> = (0..n).collect();
            heap_permute(&mut perm, n, &mut perms);
            perms.sort();
            all.push(perms);
        }
        all
    });
    assert!(
        n <= MAX_ISO_VERTICES,
        "isomorphism brute force capped at {MAX_ISO_VERTICES} vertices, got {n}"
    );
    &tables[n]
}

fn heap_permute(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(perm.clone());
        return;
    }
    for i in 0..k {
        heap_permute(perm, k - 1, out);
        if k % 2 == 0 {
            perm.swap(i, k - 1);
        } else {
            perm.swap(0, k - 1);
        }
    }
}

/// Edge bitmask in the fixed pair order (0,1),(0,2),(1,2),(0,3),...
fn edge_mask(g: &Graph) -> u64 {
    let mut mask = 0u64;
    let mut idx = 0;
    for v in 1..g.n() {
        for u in 0..v {
            if g.has_edge(u, v) {
                mask |= 1 << idx;
            }
            idx += 1;
        }
    }
    mask
}

fn permuted_mask(g: &Graph, perm: &[usize]) -> u64 {
    let mut mask = 0u64;
    let mut idx = 0;
    for v in 1..g.n() {
        for u in 0..v {
            if g.has_edge(perm[u], perm[v]) {
                mask |= 1 << idx;
            }
            idx += 1;
        }
    }
    mask
}

/// Canonical key of a graph: `(n, min over relabellings of the edge mask)`.
/// Two graphs are isomorphic iff their keys are equal.
pub fn canonical_key(g: &Graph) -> (usize, u64) {
    let n = g.n();
    let mut best = u64::MAX;
    for perm in permutations(n) {
        best = best.min(permuted_mask(g, perm));
    }
    (n, best)
}

/// Brute-force isomorphism test with cheap invariant pre-filtering.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let target = edge_mask(b);
    permutations(a.n()).iter().any(|p| permuted_mask(a, p) == target)
}

/// Number of automorphisms, by brute force over relabellings.
pub fn automorphism_count(g: &Graph) -> u64 {
    let target = edge_mask(g);
    permutations(g.n())
        .iter()
        .filter(|p| permuted_mask(g, p) == target)
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&Graph::complete(3).unwrap()), 6);
        assert_eq!(automorphism_count(&Graph::cycle(4).unwrap()), 8);
        assert_eq!(automorphism_count(&Graph::cycle(5).unwrap()), 10);
        assert_eq!(automorphism_count(&Graph::path(3).unwrap()), 2);
        assert_eq!(automorphism_count(&Graph::complete_bipartite(3, 3).unwrap()), 72);
        assert_eq!(automorphism_count(&Graph::matching(2).unwrap()), 8);
        assert_eq!(automorphism_count(&Graph::empty(0).unwrap()), 1);
    }

    #[test]
    fn isomorphism_examples() {
        let c4 = Graph::cycle(4).unwrap();
        let k22 = Graph::complete_bipartite(2, 2).unwrap();
        assert!(isomorphic(&c4, &k22));
        assert_eq!(canonical_key(&c4), canonical_key(&k22));

        let p4 = Graph::path(4).unwrap();
        assert!(!isomorphic(&c4, &p4));

        // same degree sequence, not isomorphic: C6 vs 2*K3
        let c6 = Graph::cycle(6).unwrap();
        let two_k3 = Graph::complete(3)
            .unwrap()
            .disjoint_union(&Graph::complete(3).unwrap())
            .unwrap();
        assert!(!isomorphic(&c6, &two_k3));
        assert_ne!(canonical_key(&c6), canonical_key(&two_k3));
    }

    #[test]
    fn canonical_key_is_relabelling_invariant() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        // apply an arbitrary relabelling via induced() on a permuted order
        let perm = [3usize, 5, 0, 1, 4, 2];
        let mut edges = Vec::new();
        for (u, v) in g.edges() {
            edges.push((perm[u], perm[v]));
        }
        let h = Graph::from_edges(6, &edges).unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&h));
        assert!(isomorphic(&g, &h));
        let _ = VertexSet::full(6);
    }
}
