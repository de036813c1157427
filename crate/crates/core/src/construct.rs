//! The two constructive procedures on complete k-partite hosts: the
//! below-threshold avoiding-colouring builder and the above-threshold
//! monochromatic-structure finder.
//!
//! On a complete k-partite host every cross-part pair is a host edge, so
//! common-neighbourhood shrinking degenerates to a no-op (asserted), and the
//! per-part work reduces to exhaustive searches in the part's random edges.

use serde::Serialize;

use crate::densities::{beta_clique_vs, m_star, minimising_partition, DensityError, Profile};
use crate::graph::{subsets, Graph, VertexSet};
use crate::iso::canonical_key;
use crate::perturb::PerturbedInstance;
use crate::ramsey::{
    decide_family_colouring, verify_colouring, Colouring, FamilyOutcome, RamseyError,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructError {
    #[error("host is not complete k-partite")]
    HostNotKPartite,
    #[error("host has {found} parts, expected {expected}")]
    WrongPartCount { found: usize, expected: usize },
    #[error("m*(K_r, H; k) = 0: no below-threshold statement to realise")]
    NoZeroStatement,
    #[error("colouring must be a total 2-colouring of the {0} host vertices")]
    BadColouring(usize),
    #[error("r must be at least 1")]
    BadR,
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Ramsey(#[from] RamseyError),
}

/// Result of the avoiding-colouring builder.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ZeroOutcome {
    /// A red/blue colouring of the union with no red K_r and no blue H.
    Colouring { colouring: Colouring },
    /// Some part's search proved no valid colouring exists (expected above
    /// threshold).
    Impossible { part: usize },
    /// Some part's search ran out of budget.
    Unknown { part: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroResult {
    #[serde(flatten)]
    pub outcome: ZeroOutcome,
    /// The maximising clique-budget vector the families were built from.
    pub vector: Vec<usize>,
    /// m*(K_r, H; k), the threshold the construction realises.
    pub mstar: Rational,
    /// Sizes of the forbidden-blue families per part (after pruning).
    pub family_sizes: Vec<usize>,
    /// Search nodes across all parts.
    pub nodes_explored: u64,
    /// True iff a returned colouring was re-verified against the union.
    pub verified: bool,
}

/// The forbidden-blue family for one part: nonempty induced subgraphs of `h`
/// whose pair parameter against the part's clique bound reaches `threshold`.
/// Deduplicated up to isomorphism and pruned to subgraph-minimal members
/// (avoiding a subgraph avoids all its supergraphs).
pub fn forbidden_blue_family(h: &Graph, clique_bound: usize, threshold: Rational) -> Vec<Graph> {
    let profile = Profile::new(h).expect("pattern-sized graph");
    let mut members: Vec<Graph> = Vec::new();
    let mut keys = Vec::new();
    for s in subsets(h.n(), 1) {
        if beta_clique_vs(&profile, s.bits(), clique_bound) >= threshold {
            let g = h.induced(s);
            let key = canonical_key(&g);
            if !keys.contains(&key) {
                keys.push(key);
                members.push(g);
            }
        }
    }
    members.sort_by_key(|g| (g.n(), g.edge_count()));
    let mut pruned: Vec<Graph> = Vec::new();
    for g in members {
        let dominated = pruned
            .iter()
            .any(|small| g.contains_copy(small, g.vertex_set()).is_some());
        if !dominated {
            pruned.push(g);
        }
    }
    pruned
}

/// Builds a red/blue colouring of the perturbed union with no red `K_r` and
/// no blue `h`, by colouring each host part's random graph to avoid a red
/// `K_{r_i+1}` and every blue member of that part's forbidden family.
/// Returns `Impossible` when some part's exhaustive search rules a colouring
/// out, which is the expected outcome above the threshold.
pub fn build_zero_colouring(
    inst: &PerturbedInstance,
    r: usize,
    h: &Graph,
    k: usize,
    budget: u64,
) -> Result<ZeroResult, ConstructError> {
    if r < 1 {
        return Err(ConstructError::BadR);
    }
    let parts = inst
        .host
        .kpartite_parts()
        .ok_or(ConstructError::HostNotKPartite)?;
    if parts.len() != k {
        return Err(ConstructError::WrongPartCount {
            found: parts.len(),
            expected: k,
        });
    }
    let cert = m_star(r, h, k)?;
    if cert.value.is_zero() {
        return Err(ConstructError::NoZeroStatement);
    }

    let mut colours = vec![u8::MAX; inst.n()];
    let mut family_sizes = Vec::with_capacity(k);
    let mut nodes = 0u64;
    for (i, part) in parts.iter().enumerate() {
        let clique_bound = cert.vector[i] + 1;
        let family = forbidden_blue_family(h, clique_bound, cert.value);
        family_sizes.push(family.len());
        let red = [Graph::complete(clique_bound).expect("small clique")];
        let local = inst.random_part.induced(*part);
        debug_assert_eq!(local, inst.union.induced(*part), "parts are independent");
        let verdict = decide_family_colouring(&local, &red, &family, budget)?;
        nodes += verdict.nodes_explored;
        match verdict.outcome {
            FamilyOutcome::Found { colouring } => {
                for (local_v, global_v) in part.iter().enumerate() {
                    colours[global_v] = colouring.colour(local_v) as u8;
                }
            }
            FamilyOutcome::Impossible => {
                return Ok(ZeroResult {
                    outcome: ZeroOutcome::Impossible { part: i },
                    vector: cert.vector,
                    mstar: cert.value,
                    family_sizes,
                    nodes_explored: nodes,
                    verified: false,
                });
            }
            FamilyOutcome::Unknown => {
                return Ok(ZeroResult {
                    outcome: ZeroOutcome::Unknown { part: i },
                    vector: cert.vector,
                    mstar: cert.value,
                    family_sizes,
                    nodes_explored: nodes,
                    verified: false,
                });
            }
        }
    }
    let colouring = Colouring::new(colours.clone());
    let patterns = [Graph::complete(r).expect("small clique"), h.clone()];
    let verified = verify_colouring(&inst.union, &patterns, &colouring)?;
    assert!(
        verified,
        "per-part colourings must compose to a valid avoiding colouring"
    );
    Ok(ZeroResult {
        outcome: ZeroOutcome::Colouring { colouring },
        vector: cert.vector,
        mstar: cert.value,
        family_sizes,
        nodes_explored: nodes,
        verified,
    })
}

/// One part-level step: a blue copy of `piece` among blue vertices, else a
/// red clique of `clique_size` among red vertices, else `Neither`. All
/// searches run in the part's random edges; embeddings are part-local.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "vertices", rename_all = "snake_case")]
pub enum StepOutcome {
    Blue(Vec<usize>),
    Red(Vec<usize>),
    Neither,
}

pub fn per_part_ramsey_step(
    part_graph: &Graph,
    local_colouring: &Colouring,
    clique_size: usize,
    piece: &Graph,
) -> StepOutcome {
    debug_assert_eq!(local_colouring.len(), part_graph.n());
    let mut blue = VertexSet::EMPTY;
    let mut red = VertexSet::EMPTY;
    for v in 0..part_graph.n() {
        match local_colouring.colour(v) {
            0 => red.insert(v),
            _ => blue.insert(v),
        }
    }
    if piece.n() > 0 {
        if let Some(emb) = part_graph.contains_copy(piece, blue) {
            return StepOutcome::Blue(emb);
        }
    }
    let clique = Graph::complete(clique_size).expect("small clique");
    if let Some(emb) = part_graph.contains_copy(&clique, red) {
        return StepOutcome::Red(emb);
    }
    StepOutcome::Neither
}

/// Result of the monochromatic-structure finder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FindOutcome {
    /// Vertices of a red K_r in the union, one block per part.
    RedClique { vertices: Vec<usize> },
    /// Total embedding of H into the union, indexed by H's vertices.
    BlueCopy { embedding: Vec<usize> },
    /// Some part offered neither a blue piece nor a red clique extension;
    /// possible below threshold.
    Failure { part: usize, vector: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FindResult {
    #[serde(flatten)]
    pub outcome: FindOutcome,
    pub outer_iterations: usize,
    pub part_steps: usize,
    /// True iff the returned structure was re-verified monochromatic in the
    /// union graph.
    pub verified: bool,
}

/// Checks an embedding maps pattern edges to union edges, injectively, with
/// every image vertex of the stated colour.
pub fn verify_monochromatic(
    union: &Graph,
    pattern: &Graph,
    embedding: &[usize],
    colouring: &Colouring,
    colour: usize,
) -> bool {
    if embedding.len() != pattern.n() {
        return false;
    }
    let mut seen = VertexSet::EMPTY;
    for &v in embedding {
        if v >= union.n() || seen.contains(v) || colouring.colour(v) != colour {
            return false;
        }
        seen.insert(v);
    }
    pattern
        .edges()
        .all(|(u, v)| union.has_edge(embedding[u], embedding[v]))
}

/// Runs the iterative red-clique / blue-copy procedure against a fixed
/// 2-colouring of a perturbed complete k-partite instance.
///
/// Starting from the all-zero clique-budget vector, each outer pass takes
/// the minimising partition of `h` for the current vector and walks the
/// parts in index order, looking for a blue copy of the part's piece or a
/// red clique one larger than the part's current one. A red find increments
/// the vector and restarts from part 1; completing all parts assembles a
/// blue `h`; the vector reaching sum `r` assembles a red `K_r`.
pub fn find_monochromatic(
    inst: &PerturbedInstance,
    colouring: &Colouring,
    r: usize,
    h: &Graph,
    k: usize,
) -> Result<FindResult, ConstructError> {
    if r < 1 {
        return Err(ConstructError::BadR);
    }
    let parts = inst
        .host
        .kpartite_parts()
        .ok_or(ConstructError::HostNotKPartite)?;
    if parts.len() != k {
        return Err(ConstructError::WrongPartCount {
            found: parts.len(),
            expected: k,
        });
    }
    if colouring.len() != inst.n() || colouring.colours().iter().any(|&c| c > 1) {
        return Err(ConstructError::BadColouring(inst.n()));
    }

    let part_verts: Vec<Vec<usize>> = parts.iter().map(|p| p.to_vec()).collect();
    let local_graphs: Vec<Graph> = parts.iter().map(|p| inst.random_part.induced(*p)).collect();
    let local_colourings: Vec<Colouring> = parts.iter().map(|p| colouring.restrict(*p)).collect();

    let mut vector = vec![0usize; k];
    let mut red_cliques: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut outer_iterations = 0usize;
    let mut part_steps = 0usize;

    while vector.iter().sum::<usize>() <= r - 1 {
        outer_iterations += 1;
        assert!(outer_iterations <= r, "outer loop bounded by r");
        let (partition, _value, _betas) = minimising_partition(h, k, &vector)?;
        let mut blue_pieces: Vec<Option<(Vec<usize>, Vec<usize>)>> = vec![None; k];
        let mut grew_red = false;
        for i in 0..k {
            let piece_set = partition.parts()[i];
            if piece_set.is_empty() {
                continue;
            }
            part_steps += 1;
            assert!(part_steps <= r * k, "inner work bounded by r*k part steps");
            let piece = h.induced(piece_set);
            let step = per_part_ramsey_step(
                &local_graphs[i],
                &local_colourings[i],
                vector[i] + 1,
                &piece,
            );
            match step {
                StepOutcome::Blue(local_emb) => {
                    let global: Vec<usize> =
                        local_emb.iter().map(|&lv| part_verts[i][lv]).collect();
                    assert_host_adjacent(inst, &global, &parts, i);
                    blue_pieces[i] = Some((piece_set.to_vec(), global));
                }
                StepOutcome::Red(local_emb) => {
                    let global: Vec<usize> =
                        local_emb.iter().map(|&lv| part_verts[i][lv]).collect();
                    assert_host_adjacent(inst, &global, &parts, i);
                    red_cliques[i] = global;
                    vector[i] += 1;
                    grew_red = true;
                    break;
                }
                StepOutcome::Neither => {
                    return Ok(FindResult {
                        outcome: FindOutcome::Failure {
                            part: i,
                            vector: vector.clone(),
                        },
                        outer_iterations,
                        part_steps,
                        verified: false,
                    });
                }
            }
        }
        if grew_red {
            continue;
        }
        // All parts delivered their pieces: assemble the blue copy of h.
        let mut embedding = vec![usize::MAX; h.n()];
        for piece in blue_pieces.into_iter().flatten() {
            let (h_verts, images) = piece;
            for (j, &hv) in h_verts.iter().enumerate() {
                embedding[hv] = images[j];
            }
        }
        let verified = verify_monochromatic(&inst.union, h, &embedding, colouring, 1);
        assert!(verified, "assembled blue copy must verify in the union");
        return Ok(FindResult {
            outcome: FindOutcome::BlueCopy { embedding },
            outer_iterations,
            part_steps,
            verified,
        });
    }
    // Budgets sum to r: the per-part red cliques concatenate to a red K_r.
    let vertices: Vec<usize> = red_cliques.into_iter().flatten().collect();
    debug_assert_eq!(vertices.len(), r);
    let clique = Graph::complete(r).expect("small clique");
    let verified = verify_monochromatic(&inst.union, &clique, &vertices, colouring, 0);
    assert!(verified, "assembled red clique must verify in the union");
    Ok(FindResult {
        outcome: FindOutcome::RedClique { vertices },
        outer_iterations,
        part_steps,
        verified,
    })
}

/// On a complete k-partite host, every vertex is host-adjacent to all of
/// every other part; asserted rather than assumed.
fn assert_host_adjacent(
    inst: &PerturbedInstance,
    selected: &[usize],
    parts: &[VertexSet],
    own_part: usize,
) {
    if cfg!(debug_assertions) {
        for &v in selected {
            for (j, part) in parts.iter().enumerate() {
                if j == own_part {
                    continue;
                }
                for w in part.iter() {
                    debug_assert!(
                        inst.host.has_edge(v, w),
                        "host must join {v} to all of part {j}"
                    );
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturb::{make_host, sample_perturbed, HostKind, PExponent, Seed};

    fn k(t: usize) -> Graph {
        Graph::complete(t).unwrap()
    }

    fn inst_of(host: &Graph, a: PExponent, master: u64, stream: u64) -> PerturbedInstance {
        sample_perturbed(host, a, &Seed::new(master, stream)).unwrap()
    }

    const BUDGET: u64 = 5_000_000;

    #[test]
    fn zero_builder_on_random_free_host() {
        let host = Graph::complete_bipartite(8, 8).unwrap();
        let inst = inst_of(&host, PExponent::Infinite, 11, 0);
        let res = build_zero_colouring(&inst, 3, &k(3), 2, BUDGET).unwrap();
        assert_eq!(res.mstar, Rational::ONE);
        match &res.outcome {
            ZeroOutcome::Colouring { colouring } => {
                assert!(res.verified);
                assert_eq!(
                    verify_colouring(&inst.union, &[k(3), k(3)], colouring),
                    Ok(true)
                );
            }
            other => panic!("expected colouring, got {other:?}"),
        }
    }

    #[test]
    fn zero_builder_rejects_degenerate_inputs() {
        let host = Graph::complete_bipartite(6, 6).unwrap();
        let inst = inst_of(&host, PExponent::Infinite, 1, 0);
        // chi(C4) = 2 <= k: m* = 0, nothing to build
        assert!(matches!(
            build_zero_colouring(&inst, 1, &Graph::cycle(4).unwrap(), 2, BUDGET),
            Err(ConstructError::NoZeroStatement)
        ));
        // wrong part count
        assert!(matches!(
            build_zero_colouring(&inst, 3, &k(3), 3, BUDGET),
            Err(ConstructError::WrongPartCount {
                found: 2,
                expected: 3
            })
        ));
        // non-multipartite host
        let bad = PerturbedInstance {
            host: Graph::cycle(5).unwrap(),
            random_part: Graph::empty(5).unwrap(),
            union: Graph::cycle(5).unwrap(),
            p_exponent: PExponent::Infinite,
            p: 0.0,
            seed: Seed::new(0, 0),
        };
        assert!(matches!(
            build_zero_colouring(&bad, 3, &k(3), 2, BUDGET),
            Err(ConstructError::HostNotKPartite)
        ));
    }

    #[test]
    fn zero_builder_impossible_on_dense_instance() {
        // Drive p high enough that both sides' random graphs contain
        // triangles, making the per-part searches provably impossible.
        let host = Graph::complete_bipartite(8, 8).unwrap();
        let a = PExponent::Finite(Rational::new(1, 4));
        let mut impossible = 0;
        for stream in 0..5 {
            let inst = inst_of(&host, a, 123, stream);
            let res = build_zero_colouring(&inst, 3, &k(3), 2, BUDGET).unwrap();
            if matches!(res.outcome, ZeroOutcome::Impossible { .. }) {
                impossible += 1;
            }
        }
        assert!(impossible >= 4, "p = 16^(-1/4) floods the parts");
    }

    #[test]
    fn forbidden_family_contains_h_itself() {
        // the defining property: H is always in its own forbidden family
        for h in [k(3), Graph::cycle(5).unwrap(), Graph::path(4).unwrap()] {
            for r in 1..=3usize {
                for kk in 2..=3usize {
                    let cert = m_star(r, &h, kk).unwrap();
                    if cert.value.is_zero() {
                        continue;
                    }
                    for &ri in &cert.vector {
                        let fam = forbidden_blue_family(&h, ri + 1, cert.value);
                        assert!(
                            fam.iter()
                                .any(|m| h.contains_copy(m, h.vertex_set()).is_some()),
                            "family must forbid H itself ({h:?}, r={r}, k={kk})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn per_part_degenerate_steps() {
        let g = Graph::empty(4).unwrap();
        let all_blue = Colouring::constant(4, 1);
        let all_red = Colouring::constant(4, 0);

        // blue K_1 = any blue vertex
        assert_eq!(
            per_part_ramsey_step(&g, &all_blue, 1, &k(1)),
            StepOutcome::Blue(vec![0])
        );
        // red K_1 = any red vertex (blue search for the piece fails first)
        assert_eq!(
            per_part_ramsey_step(&g, &all_red, 1, &k(1)),
            StepOutcome::Red(vec![0])
        );
        // edgeless piece: any |piece| blue vertices, no random edges needed
        let piece = Graph::empty(2).unwrap();
        assert_eq!(
            per_part_ramsey_step(&g, &all_blue, 2, &piece),
            StepOutcome::Blue(vec![0, 1])
        );
        // neither: red triangle wanted, no edges present
        assert_eq!(
            per_part_ramsey_step(&g, &all_red, 3, &k(2)),
            StepOutcome::Neither
        );
        // red triangle in the part's random edges, all piece copies non-blue
        let tri = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let col = Colouring::new(vec![0, 0, 0, 1, 1]);
        assert_eq!(
            per_part_ramsey_step(&tri, &col, 3, &k(3)),
            StepOutcome::Red(vec![0, 1, 2])
        );
    }

    #[test]
    fn finder_all_blue_bipartite_pattern() {
        let host = Graph::complete_bipartite(6, 6).unwrap();
        let inst = inst_of(&host, PExponent::Infinite, 2, 0);
        let all_blue = Colouring::constant(12, 1);
        let res = find_monochromatic(&inst, &all_blue, 3, &Graph::cycle(4).unwrap(), 2).unwrap();
        match res.outcome {
            FindOutcome::BlueCopy { embedding } => {
                assert!(res.verified);
                assert_eq!(embedding.len(), 4);
            }
            other => panic!("expected blue C4 from host edges, got {other:?}"),
        }
        assert!(res.outer_iterations <= 3);
    }

    #[test]
    fn finder_all_red_transversal_clique() {
        // k > r: each part donates one red vertex and the host joins them.
        let host = make_host(HostKind::KPartite, 12, 4).unwrap();
        let inst = inst_of(&host, PExponent::Infinite, 3, 0);
        let all_red = Colouring::constant(12, 0);
        let res = find_monochromatic(&inst, &all_red, 3, &k(3), 4).unwrap();
        match res.outcome {
            FindOutcome::RedClique { vertices } => {
                assert!(res.verified);
                assert_eq!(vertices.len(), 3);
            }
            other => panic!("expected transversal red K3, got {other:?}"),
        }

        // r = k = 2 also works
        let host = Graph::complete_bipartite(5, 5).unwrap();
        let inst = inst_of(&host, PExponent::Infinite, 4, 0);
        let all_red = Colouring::constant(10, 0);
        let res = find_monochromatic(&inst, &all_red, 2, &k(2), 2).unwrap();
        assert!(matches!(res.outcome, FindOutcome::RedClique { .. }));
    }

    #[test]
    fn finder_failure_below_threshold() {
        // p = 0 and a colouring split by sides: no random edges, no
        // monochromatic triangle to find.
        let host = Graph::complete_bipartite(6, 6).unwrap();
        let inst = inst_of(&host, PExponent::Infinite, 5, 0);
        let mut cols = vec![0u8; 12];
        for c in cols.iter_mut().skip(6) {
            *c = 1;
        }
        let side_split = Colouring::new(cols);
        let res = find_monochromatic(&inst, &side_split, 3, &k(3), 2).unwrap();
        assert!(matches!(res.outcome, FindOutcome::Failure { .. }));
        assert!(res.outer_iterations <= 3);
    }

    #[test]
    fn finder_seeded_above_threshold_runs_verify() {
        let host = Graph::complete_bipartite(10, 10).unwrap();
        let a = PExponent::Finite(Rational::new(2, 5)); // well above threshold
        let mut successes = 0;
        for stream in 0..30u64 {
            let inst = inst_of(&host, a, 777, stream);
            // pseudo-random but deterministic colouring
            let cols: Vec<u8> = (0..20)
                .map(|v| (crate::perturb::keyed_u64(&Seed::new(9, stream), v) & 1) as u8)
                .collect();
            let res = find_monochromatic(&inst, &Colouring::new(cols), 3, &k(3), 2).unwrap();
            assert!(res.outer_iterations <= 3);
            match res.outcome {
                FindOutcome::RedClique { .. } | FindOutcome::BlueCopy { .. } => {
                    assert!(res.verified);
                    successes += 1;
                }
                FindOutcome::Failure { .. } => {}
            }
        }
        assert!(successes >= 20, "only {successes}/30 found structures");
    }

    #[test]
    fn duality_with_zero_builder() {
        // Wherever the zero builder returns a colouring, the finder must
        // fail on it; where the finder succeeds, verify_colouring rejects.
        let host = Graph::complete_bipartite(8, 8).unwrap();
        for (master, a_num, a_den) in [(21u64, 2i64, 1i64), (22, 3, 2), (23, 1, 2)] {
            for stream in 0..10u64 {
                let a = PExponent::Finite(Rational::new(a_num, a_den));
                let inst = inst_of(&host, a, master, stream);
                let zero = build_zero_colouring(&inst, 3, &k(3), 2, BUDGET).unwrap();
                if let ZeroOutcome::Colouring { colouring } = zero.outcome {
                    let find = find_monochromatic(&inst, &colouring, 3, &k(3), 2).unwrap();
                    assert!(
                        matches!(find.outcome, FindOutcome::Failure { .. }),
                        "finder must fail on an avoiding colouring"
                    );
                } else {
                    // try the finder on a deterministic colouring instead
                    let cols: Vec<u8> = (0..16)
                        .map(|v| (crate::perturb::keyed_u64(&Seed::new(8, stream), v) & 1) as u8)
                        .collect();
                    let colouring = Colouring::new(cols);
                    let find = find_monochromatic(&inst, &colouring, 3, &k(3), 2).unwrap();
                    if !matches!(find.outcome, FindOutcome::Failure { .. }) {
                        assert_eq!(
                            verify_colouring(&inst.union, &[k(3), k(3)], &colouring),
                            Ok(false)
                        );
                    }
                }
            }
        }
    }
}
