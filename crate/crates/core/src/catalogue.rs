//! Brute-force catalogues of small graphs up to isomorphism.
//!
//! A graph on `n <= 6` vertices is kept iff its edge mask is minimal among
//! all relabellings, so each isomorphism class appears exactly once. The
//! n = 6 slice has 156 classes, which the tests pin as a self-check.

use std::sync::OnceLock;

use crate::graph::Graph;

/// Largest vertex count the catalogue enumerates (2^15 masks x 720
/// relabellings is fine; 7 vertices is not).
pub const MAX_CATALOGUE_VERTICES: usize = 6;

/// All isomorphism classes of graphs on exactly `n` vertices, one canonical
/// representative each, in ascending edge-mask order.
pub fn isomorphism_classes(n: usize) -> &'static [Graph] {
    assert!(
        n <= MAX_CATALOGUE_VERTICES,
        "catalogue capped at {MAX_CATALOGUE_VERTICES} vertices"
    );
    static CACHE: OnceLock<Vec<Vec<Graph>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (0..=MAX_CATALOGUE_VERTICES).map(enumerate_classes).collect()
    });
    &all[n]
}

/// Every class on `1..=n` vertices, smaller orders first.
pub fn classes_up_to(n: usize) -> Vec<&'static Graph> {
    (1..=n).flat_map(|m| isomorphism_classes(m).iter()).collect()
}

fn enumerate_classes(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let mut index_of = vec![vec![usize::MAX; n]; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        index_of[u][v] = i;
        index_of[v][u] = i;
    }
    let pair_index = |u: usize, v: usize| -> usize { index_of[u][v] };

    // One permutation of pair indices per vertex relabelling.
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        perms.push(pairs.iter().map(|&(u, v)| pair_index(perm[u], perm[v])).collect());
        if !next_permutation(&mut perm) {
            break;
        }
    }

    let mut classes = Vec::new();
    'masks: for mask in 0u32..(1u32 << pairs.len()) {
        for p in &perms {
            let mut relabelled = 0u32;
            for (i, &j) in p.iter().enumerate() {
                relabelled |= ((mask >> i) & 1) << j;
            }
            if relabelled < mask {
                continue 'masks;
            }
        }
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        classes.push(Graph::from_edges(n, &edges).expect("catalogue graph"));
    }
    classes
}

fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::canonical_key;
    use std::collections::HashSet;

    #[test]
    fn class_counts_match_the_literature() {
        // numbers of graphs on n unlabelled vertices
        assert_eq!(isomorphism_classes(0).len(), 1);
        assert_eq!(isomorphism_classes(1).len(), 1);
        assert_eq!(isomorphism_classes(2).len(), 2);
        assert_eq!(isomorphism_classes(3).len(), 4);
        assert_eq!(isomorphism_classes(4).len(), 11);
        assert_eq!(isomorphism_classes(5).len(), 34);
        assert_eq!(isomorphism_classes(6).len(), 156);
        assert_eq!(classes_up_to(6).len(), 208);
    }

    #[test]
    fn classes_are_pairwise_non_isomorphic() {
        for n in 0..=5 {
            let keys: HashSet<_> = isomorphism_classes(n).iter().map(canonical_key).collect();
            assert_eq!(keys.len(), isomorphism_classes(n).len());
        }
    }
}
