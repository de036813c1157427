//! Exact rational density parameters for vertex-Ramsey thresholds.
//!
//! Everything here is a max/min over subgraphs or partitions, computed by
//! enumeration over vertex subsets. For a fixed vertex set the objective is
//! monotone in the edge count, so induced subgraphs suffice; the unit tests
//! discharge that claim against full subgraph enumeration on small graphs.

use serde::Serialize;

use crate::graph::{for_each_partition, Graph, InducedPartition, VertexSet};
use crate::rational::Rational;

/// Largest pattern the subset tables accept (tables are `O(2^n)`).
pub const MAX_PATTERN_VERTICES: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph needs at least 2 vertices")]
    TooFewVertices,
    #[error("argument must have at least one edge")]
    EdgelessArgument,
    #[error("density order violated: m1(F) = {mf} > m1(H) = {mh}; orient the pair or use beta")]
    DensityOrder { mf: Rational, mh: Rational },
    #[error("parameter out of range: {0}")]
    BadParameters(String),
    #[error("pattern has {0} vertices; density tables are capped at {MAX_PATTERN_VERTICES}")]
    PatternTooLarge(usize),
}

/// Per-subset edge tables for one pattern graph.
///
/// `best_by_size(mask, v)` is the maximum induced edge count over submasks of
/// `mask` with exactly `v` vertices. All density maximisations read off it.
pub(crate) struct Profile {
    n: usize,
    edges: Vec<u16>,
    best: Vec<Vec<u16>>,
}

impl Profile {
    pub(crate) fn new(g: &Graph) -> Result<Profile, DensityError> {
        let n = g.n();
        if n > MAX_PATTERN_VERTICES {
            return Err(DensityError::PatternTooLarge(n));
        }
        let size = 1usize << n;
        let mut edges = vec![0u16; size];
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let inc = (g.neighbours(low).bits() & rest as u64).count_ones() as u16;
            edges[mask] = edges[rest] + inc;
        }
        let mut best = vec![vec![0u16; n + 1]; size];
        for mask in 0..size {
            let pc = (mask as u64).count_ones() as usize;
            best[mask][pc] = best[mask][pc].max(edges[mask]);
            let mut rest = mask;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                let sub = mask ^ bit;
                for v in 0..=pc.saturating_sub(1) {
                    best[mask][v] = best[mask][v].max(best[sub][v]);
                }
            }
        }
        Ok(Profile { n, edges, best })
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn edge_count(&self, mask: u64) -> usize {
        self.edges[mask as usize] as usize
    }

    /// `m(H[mask])`: max over nonempty subgraphs of e/v.
    pub(crate) fn m(&self, mask: u64) -> Rational {
        let pc = mask.count_ones() as usize;
        let mut best = Rational::ZERO;
        for v in 1..=pc {
            best = best.max(Rational::ratio(
                self.best[mask as usize][v] as usize,
                v,
            ));
        }
        best
    }

    /// `m1(H[mask])`: max over subgraphs with >= 2 vertices of e/(v-1).
    /// Returns 0 for edgeless masks (our extension of the paper's domain).
    pub(crate) fn m1(&self, mask: u64) -> Rational {
        let pc = mask.count_ones() as usize;
        let mut best = Rational::ZERO;
        for v in 2..=pc {
            best = best.max(Rational::ratio(
                self.best[mask as usize][v] as usize,
                v - 1,
            ));
        }
        best
    }

    /// `m_K(F, H[mask])` given `m1(F)`, maximising `(m1(F)+e_J)/v_J`.
    pub(crate) fn mk_against(&self, m1_f: Rational, mask: u64) -> Rational {
        let pc = mask.count_ones() as usize;
        let (p, q) = (m1_f.num(), m1_f.den());
        let mut best = Rational::ZERO;
        for v in 2..=pc {
            let e = self.best[mask as usize][v] as i64;
            best = best.max(Rational::new(p + q * e, q * v as i64));
        }
        best
    }
}

/// `beta` over two profiled graphs restricted to submasks. This is the single
/// implementation behind every beta evaluation in the crate.
pub(crate) fn beta_profiles(pf: &Profile, fmask: u64, ph: &Profile, hmask: u64) -> Rational {
    debug_assert!(fmask != 0 && hmask != 0, "beta needs nonempty graphs");
    let ef = pf.edge_count(fmask);
    let eh = ph.edge_count(hmask);
    match (ef, eh) {
        (0, 0) => Rational::ZERO,
        (0, _) => ph.m(hmask),
        (_, 0) => pf.m(fmask),
        _ => {
            let m1f = pf.m1(fmask);
            let m1h = ph.m1(hmask);
            if m1f <= m1h {
                ph.mk_against(m1f, hmask)
            } else {
                pf.mk_against(m1h, fmask)
            }
        }
    }
}

/// `beta(K_j, H[mask])` without materialising a clique profile.
pub(crate) fn beta_clique_vs(ph: &Profile, hmask: u64, j: usize) -> Rational {
    debug_assert!(j >= 1 && hmask != 0);
    let eh = ph.edge_count(hmask);
    if j == 1 {
        // e(K_1) = 0: appearance threshold of the piece.
        return ph.m(hmask);
    }
    if eh == 0 {
        // m(K_j) = (j-1)/2
        return Rational::ratio(j - 1, 2);
    }
    let m1_clique = Rational::ratio(j, 2);
    let m1h = ph.m1(hmask);
    if m1_clique <= m1h {
        ph.mk_against(m1_clique, hmask)
    } else {
        // m_K(H[mask], K_j) = max over 2 <= t <= j of (m1(H)+C(t,2))/t
        let (p, q) = (m1h.num(), m1h.den());
        let mut best = Rational::ZERO;
        for t in 2..=j {
            let e = (t * (t - 1) / 2) as i64;
            best = best.max(Rational::new(p + q * e, q * t as i64));
        }
        best
    }
}

/// `m(H)`: max over nonempty subgraphs J of e_J / v_J.
pub fn m_density(h: &Graph) -> Result<Rational, DensityError> {
    if h.n() == 0 {
        return Err(DensityError::EmptyGraph);
    }
    let p = Profile::new(h)?;
    Ok(p.m(h.vertex_set().bits()))
}

/// `m1(H)`: max over subgraphs with at least 2 vertices of e_J / (v_J - 1).
pub fn m1_density(h: &Graph) -> Result<Rational, DensityError> {
    if h.n() < 2 {
        return Err(DensityError::TooFewVertices);
    }
    let p = Profile::new(h)?;
    Ok(p.m1(h.vertex_set().bits()))
}

/// `m_K(F, H)`: max over subgraphs J of H with v_J >= 2 of (m1(F)+e_J)/v_J.
/// Requires both graphs edge-bearing and `m1(F) <= m1(H)`.
pub fn mk_density(f: &Graph, h: &Graph) -> Result<Rational, DensityError> {
    if f.is_edgeless() || h.is_edgeless() {
        return Err(DensityError::EdgelessArgument);
    }
    let m1f = m1_density(f)?;
    let m1h = m1_density(h)?;
    if m1f > m1h {
        return Err(DensityError::DensityOrder { mf: m1f, mh: m1h });
    }
    let ph = Profile::new(h)?;
    Ok(ph.mk_against(m1f, h.vertex_set().bits()))
}

/// The unified pair parameter: `m_K` oriented by `m1` when both graphs have
/// edges, the appearance density of the other graph when exactly one is
/// edgeless, and 0 when both are. Total on nonempty graphs.
pub fn beta(f: &Graph, h: &Graph) -> Result<Rational, DensityError> {
    if f.n() == 0 || h.n() == 0 {
        return Err(DensityError::EmptyGraph);
    }
    let pf = Profile::new(f)?;
    let ph = Profile::new(h)?;
    Ok(beta_profiles(
        &pf,
        f.vertex_set().bits(),
        &ph,
        h.vertex_set().bits(),
    ))
}

/// `m(H; k)`: min over partitions of H into k induced subgraphs of the max
/// part density. Zero iff the chromatic number of H is at most k.
pub fn m_k_parts(h: &Graph, k: usize) -> Result<Rational, DensityError> {
    if h.n() == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if k < 1 {
        return Err(DensityError::BadParameters("k >= 1 required".into()));
    }
    let p = Profile::new(h)?;
    let mut best: Option<Rational> = None;
    for_each_partition(h.n(), k, |parts| {
        let mut worst = Rational::ZERO;
        for &mask in parts {
            if mask != 0 {
                worst = worst.max(p.m(mask));
            }
        }
        best = Some(match best {
            None => worst,
            Some(b) => b.min(worst),
        });
    });
    Ok(best.expect("at least one partition"))
}

/// Value, optimiser and per-part witness data for `m*(K_r, H; k)`.
#[derive(Debug, Clone, Serialize)]
pub struct MStarCertificate {
    pub value: Rational,
    /// Maximising clique-budget vector (r_1, ..., r_k), sum <= r-1.
    pub vector: Vec<usize>,
    /// A minimising partition of H for that vector.
    pub partition: InducedPartition,
    /// beta(K_{r_i+1}, H_i) per part; `None` for empty parts.
    pub per_part_beta: Vec<Option<Rational>>,
}

/// Clique-budget vectors with the given sum bound, in the certificate order:
/// total ascending, then lexicographically descending within a total.
fn budget_vectors(k: usize, bound: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(k, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, bound, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        let (sa, sb) = (a.iter().sum::<usize>(), b.iter().sum::<usize>());
        sa.cmp(&sb).then_with(|| b.cmp(a))
    });
    out
}

/// Minimising partition of `h` into `k` parts for a fixed budget vector:
/// the partition minimising `max_i beta(K_{vector[i]+1}, H_i)`, ties broken
/// by the lexicographically least tuple of part masks.
pub fn minimising_partition(
    h: &Graph,
    k: usize,
    vector: &[usize],
) -> Result<(InducedPartition, Rational, Vec<Option<Rational>>), DensityError> {
    if h.n() == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if vector.len() != k || k < 1 {
        return Err(DensityError::BadParameters(
            "vector length must equal k >= 1".into(),
        ));
    }
    let p = Profile::new(h)?;
    let max_clique = vector.iter().max().copied().unwrap_or(0) + 1;
    let table = beta_table(&p, max_clique);
    let (masks, value) =
        minimising_partition_inner(h.n(), k, vector, &table).expect("some partition exists");
    let parts: Vec<VertexSet> = masks.iter().map(|&m| VertexSet::from_bits(m)).collect();
    let betas: Vec<Option<Rational>> = masks
        .iter()
        .zip(vector)
        .map(|(&m, &ri)| (m != 0).then(|| table[ri + 1][m as usize]))
        .collect();
    let partition = InducedPartition::new(parts, h.n()).expect("valid partition");
    Ok((partition, value, betas))
}

/// beta(K_j, H[mask]) for all 1 <= j <= max_clique and all masks.
fn beta_table(p: &Profile, max_clique: usize) -> Vec<Vec<Rational>> {
    let size = 1usize << p.n();
    let mut table = vec![vec![Rational::ZERO; size]; max_clique + 1];
    for j in 1..=max_clique {
        for mask in 1..size {
            table[j][mask] = beta_clique_vs(p, mask as u64, j);
        }
    }
    table
}

fn minimising_partition_inner(
    n: usize,
    k: usize,
    vector: &[usize],
    table: &[Vec<Rational>],
) -> Option<(Vec<u64>, Rational)> {
    let mut best: Option<(Vec<u64>, Rational)> = None;
    for_each_partition(n, k, |parts| {
        let mut worst = Rational::ZERO;
        for (i, &mask) in parts.iter().enumerate() {
            if mask != 0 {
                worst = worst.max(table[vector[i] + 1][mask as usize]);
            }
        }
        match &mut best {
            None => best = Some((parts.to_vec(), worst)),
            Some((bm, bv)) => {
                if worst < *bv || (worst == *bv && parts < &bm[..]) {
                    *bm = parts.to_vec();
                    *bv = worst;
                }
            }
        }
    });
    best
}

/// `m*(K_r, H; k)`: max over clique-budget vectors summing to at most r-1 of
/// the minimax part threshold, with a full certificate.
pub fn m_star(r: usize, h: &Graph, k: usize) -> Result<MStarCertificate, DensityError> {
    if h.n() == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if r < 1 {
        return Err(DensityError::BadParameters("r >= 1 required".into()));
    }
    if k < 2 {
        return Err(DensityError::BadParameters("k >= 2 required".into()));
    }
    let p = Profile::new(h)?;
    let table = beta_table(&p, r);
    let mut cert: Option<MStarCertificate> = None;
    for vector in budget_vectors(k, r - 1) {
        let (masks, value) =
            minimising_partition_inner(h.n(), k, &vector, &table).expect("partition");
        let replace = match &cert {
            None => true,
            Some(c) => value > c.value,
        };
        if replace {
            let parts: Vec<VertexSet> = masks.iter().map(|&m| VertexSet::from_bits(m)).collect();
            let per_part_beta = masks
                .iter()
                .zip(&vector)
                .map(|(&m, &ri)| (m != 0).then(|| table[ri + 1][m as usize]))
                .collect();
            cert = Some(MStarCertificate {
                value,
                vector: vector.clone(),
                partition: InducedPartition::new(parts, h.n()).expect("valid"),
                per_part_beta,
            });
        }
    }
    Ok(cert.expect("at least the zero vector"))
}

/// A threshold exponent `m`, read as the threshold function `n^(-1/m)` with
/// the convention that `m = 0` means threshold 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThresholdExponent {
    pub value: Rational,
}

impl ThresholdExponent {
    pub fn new(value: Rational) -> Self {
        assert!(!value.is_negative(), "threshold exponents are nonnegative");
        ThresholdExponent { value }
    }

    /// Human-readable threshold function.
    pub fn describe(&self) -> String {
        if self.value.is_zero() {
            "0".to_string()
        } else {
            format!("n^(-1/({}))", self.value)
        }
    }
}

/// `Phi` exponent: with `p = n^(-a)`, the minimum over edge-bearing
/// subgraphs J of `v_J - a * e_J`, the exponent of the bottleneck expected
/// copy count.
pub fn phi_exponent(h: &Graph, a: &Rational) -> Result<Rational, DensityError> {
    if h.is_edgeless() {
        return Err(DensityError::EdgelessArgument);
    }
    if a.is_negative() {
        return Err(DensityError::BadParameters("a >= 0 required".into()));
    }
    let p = Profile::new(h)?;
    let full = h.vertex_set().bits() as usize;
    let (anum, aden) = (a.num(), a.den());
    let mut best: Option<Rational> = None;
    for v in 2..=h.n() {
        let e = p.best[full][v] as i64;
        if e == 0 {
            continue;
        }
        // v - a*e, maximal e per size dominates since a >= 0
        let cand = Rational::new(v as i64 * aden - anum * e, aden);
        best = Some(match best {
            None => cand,
            Some(b) => b.min(cand),
        });
    }
    Ok(best.expect("edge-bearing graph has an edge-bearing subgraph"))
}

/// Random-graph baseline exponent for an ordered pattern list: beta of the
/// two densest patterns. The list must be sorted by ascending `m1` (treating
/// edgeless graphs as 0) and its last two members must have edges.
pub fn kreuter_exponent(list: &[Graph]) -> Result<ThresholdExponent, DensityError> {
    if list.len() < 2 {
        return Err(DensityError::BadParameters(
            "need at least two patterns".into(),
        ));
    }
    let eff_m1 = |g: &Graph| -> Result<Rational, DensityError> {
        if g.n() < 2 {
            Ok(Rational::ZERO)
        } else {
            m1_density(g)
        }
    };
    let mut prev = None;
    for g in list {
        if g.n() == 0 {
            return Err(DensityError::EmptyGraph);
        }
        let cur = eff_m1(g)?;
        if let Some(p) = prev {
            if cur < p {
                return Err(DensityError::BadParameters(
                    "patterns not sorted by ascending m1".into(),
                ));
            }
        }
        prev = Some(cur);
    }
    let a = &list[list.len() - 2];
    let b = &list[list.len() - 1];
    if a.is_edgeless() || b.is_edgeless() {
        return Err(DensityError::EdgelessArgument);
    }
    Ok(ThresholdExponent::new(beta(a, b)?))
}

/// Which closed-form case applied for a clique pair threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CliqueCase {
    /// s = t
    Diagonal,
    /// (t+1)/2 <= s < t
    LargeS,
    /// s <= t/2, t even
    SmallSEven,
    /// s <= (t-1)/2, t odd
    SmallSOdd,
}

/// Closed-form perturbed threshold for a clique pair `(K_s, K_t)`,
/// `3 <= s <= t`, at densities just below 1/2 (k = 2).
#[derive(Debug, Clone, Serialize)]
pub struct CliqueThreshold {
    pub exponent: ThresholdExponent,
    pub case: CliqueCase,
    /// The clique sizes fed to the pair parameter.
    pub psi: (usize, usize),
    /// True when the smaller clique degenerates to a single vertex and the
    /// pair parameter is read as an appearance density.
    pub degenerate_beta_reading: bool,
}

/// Evaluates the clique-pair closed form by case split, with the pair
/// parameter computed exactly via [`beta`].
pub fn clique_threshold_formula(s: usize, t: usize) -> Result<CliqueThreshold, DensityError> {
    if !(3 <= s && s <= t) {
        return Err(DensityError::BadParameters(format!(
            "need 3 <= s <= t, got ({s}, {t})"
        )));
    }
    let (case, r1, r2) = if s == t {
        (CliqueCase::Diagonal, t - 1, t - 1)
    } else if 2 * s >= t + 1 {
        (CliqueCase::LargeS, t - s, s)
    } else if t % 2 == 0 {
        (CliqueCase::SmallSEven, s, t / 2)
    } else {
        (CliqueCase::SmallSOdd, (s + 1) / 2, (t + 1) / 2)
    };
    let f = Graph::complete(r1).expect("small clique");
    let h = Graph::complete(r2).expect("small clique");
    let value = beta(&f, &h)?;
    Ok(CliqueThreshold {
        exponent: ThresholdExponent::new(value),
        case,
        psi: (r1, r2),
        degenerate_beta_reading: r1 <= 1,
    })
}
