//! Exact decision of vertex-Ramsey properties for concrete graphs.
//!
//! The decider backtracks over vertex colourings, pruning a partial
//! colouring as soon as some colour class contains its pattern. Budget
//! exhaustion is a first-class "unknown" outcome, never a silent wrong
//! answer.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RamseyError {
    #[error("pattern list is empty")]
    NoPatterns,
    #[error("pattern {0} has no vertices")]
    EmptyPattern(usize),
    #[error("colour {colour} out of range for {r} patterns")]
    ColourOutOfRange { colour: usize, r: usize },
    #[error("colouring covers {got} vertices, host has {want}")]
    WrongLength { got: usize, want: usize },
    #[error("budget must be positive")]
    ZeroBudget,
}

/// A total map from host vertices to colour indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Colouring {
    colours: Vec<u8>,
}

impl Colouring {
    pub fn new(colours: Vec<u8>) -> Self {
        Colouring { colours }
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn colour(&self, v: usize) -> usize {
        self.colours[v] as usize
    }

    pub fn colours(&self) -> &[u8] {
        &self.colours
    }

    pub fn constant(n: usize, colour: u8) -> Self {
        Colouring {
            colours: vec![colour; n],
        }
    }

    /// Vertices of each colour class, for `r` colours.
    pub fn classes(&self, r: usize) -> Vec<VertexSet> {
        let mut out = vec![VertexSet::EMPTY; r];
        for (v, &c) in self.colours.iter().enumerate() {
            out[c as usize].insert(v);
        }
        out
    }

    /// Restriction to `part`, relabelled to the part's local vertex order.
    pub fn restrict(&self, part: VertexSet) -> Colouring {
        Colouring {
            colours: part.iter().map(|v| self.colours[v]).collect(),
        }
    }
}

/// True iff the colouring avoids every pattern: no colour class `i`
/// contains a copy of `patterns[i]`.
pub fn verify_colouring(
    g: &Graph,
    patterns: &[Graph],
    c: &Colouring,
) -> Result<bool, RamseyError> {
    if patterns.is_empty() {
        return Err(RamseyError::NoPatterns);
    }
    if c.len() != g.n() {
        return Err(RamseyError::WrongLength {
            got: c.len(),
            want: g.n(),
        });
    }
    let r = patterns.len();
    for (v, &col) in c.colours().iter().enumerate() {
        if col as usize >= r {
            return Err(RamseyError::ColourOutOfRange {
                colour: col as usize,
                r,
            });
        }
        let _ = v;
    }
    let classes = c.classes(r);
    for (i, pattern) in patterns.iter().enumerate() {
        if g.contains_copy(pattern, classes[i]).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decision outcome with witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RamseyOutcome {
    /// Every colouring yields a monochromatic pattern.
    Ramsey,
    /// Witnessed by an avoiding colouring.
    NonRamsey { witness: Colouring },
    /// Node budget exhausted before the search finished.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamseyVerdict {
    #[serde(flatten)]
    pub outcome: RamseyOutcome,
    pub nodes_explored: u64,
}

impl RamseyVerdict {
    pub fn is_ramsey(&self) -> Option<bool> {
        match self.outcome {
            RamseyOutcome::Ramsey => Some(true),
            RamseyOutcome::NonRamsey { .. } => Some(false),
            RamseyOutcome::Unknown => None,
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    patterns: &'a [Graph],
    order: Vec<usize>,
    colours: Vec<u8>,
    classes: Vec<u64>,
    budget: u64,
    nodes: u64,
    /// All patterns equal: the first vertex can be pinned to colour 0.
    symmetric: bool,
}

enum SearchResult {
    Exhausted,
    Found,
    OutOfBudget,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, patterns: &'a [Graph], budget: u64) -> Self {
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let symmetric = patterns.windows(2).all(|w| w[0] == w[1]);
        Search {
            g,
            patterns,
            order,
            colours: vec![u8::MAX; g.n()],
            classes: vec![0u64; patterns.len()],
            budget,
            nodes: 0,
            symmetric,
        }
    }

    fn run(&mut self, pos: usize) -> SearchResult {
        if pos == self.order.len() {
            return SearchResult::Found;
        }
        let v = self.order[pos];
        let tried = if pos == 0 && self.symmetric {
            1
        } else {
            self.patterns.len()
        };
        for c in 0..tried {
            if self.nodes >= self.budget {
                return SearchResult::OutOfBudget;
            }
            self.nodes += 1;
            self.classes[c] |= 1 << v;
            self.colours[v] = c as u8;
            // Only a copy through the freshly coloured vertex can be new.
            let hit = self
                .g
                .contains_copy_through(
                    &self.patterns[c],
                    VertexSet::from_bits(self.classes[c]),
                    v,
                )
                .is_some();
            if !hit {
                match self.run(pos + 1) {
                    SearchResult::Exhausted => {}
                    other => return other,
                }
            }
            self.classes[c] &= !(1 << v);
            self.colours[v] = u8::MAX;
        }
        SearchResult::Exhausted
    }
}

/// Exhaustive decision of whether `g` is vertex-Ramsey for `patterns`.
///
/// Returns the first avoiding colouring found (in the deterministic search
/// order) as a non-Ramsey witness, a Ramsey verdict when the pruned search
/// exhausts all colourings, or `Unknown` when `budget` nodes were expanded
/// first.
pub fn decide_ramsey(
    g: &Graph,
    patterns: &[Graph],
    budget: u64,
) -> Result<RamseyVerdict, RamseyError> {
    if patterns.is_empty() {
        return Err(RamseyError::NoPatterns);
    }
    for (i, p) in patterns.iter().enumerate() {
        if p.n() == 0 {
            return Err(RamseyError::EmptyPattern(i));
        }
    }
    if budget == 0 {
        return Err(RamseyError::ZeroBudget);
    }
    let mut search = Search::new(g, patterns, budget);
    let outcome = match search.run(0) {
        SearchResult::Found => {
            let witness = Colouring::new(search.colours.clone());
            debug_assert_eq!(verify_colouring(g, patterns, &witness), Ok(true));
            RamseyOutcome::NonRamsey { witness }
        }
        SearchResult::Exhausted => RamseyOutcome::Ramsey,
        SearchResult::OutOfBudget => RamseyOutcome::Unknown,
    };
    Ok(RamseyVerdict {
        outcome,
        nodes_explored: search.nodes,
    })
}

/// Outcome of the two-family avoiding-colouring search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FamilyOutcome {
    /// A red/blue colouring avoiding every red-family member in red and
    /// every blue-family member in blue.
    Found { colouring: Colouring },
    /// Exhaustive proof that no such colouring exists.
    Impossible,
    /// Budget exhausted.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyVerdict {
    #[serde(flatten)]
    pub outcome: FamilyOutcome,
    pub nodes_explored: u64,
}

/// Seeks a 2-colouring of `g` with no red copy of any red-family member and
/// no blue copy of any blue-family member. Red is colour 0.
///
/// Family members are checked smallest-first so cheap patterns prune early.
pub fn decide_family_colouring(
    g: &Graph,
    red_family: &[Graph],
    blue_family: &[Graph],
    budget: u64,
) -> Result<FamilyVerdict, RamseyError> {
    if red_family.is_empty() || blue_family.is_empty() {
        return Err(RamseyError::NoPatterns);
    }
    for (i, p) in red_family.iter().chain(blue_family.iter()).enumerate() {
        if p.n() == 0 {
            return Err(RamseyError::EmptyPattern(i));
        }
    }
    if budget == 0 {
        return Err(RamseyError::ZeroBudget);
    }
    let sort_family = |family: &[Graph]| -> Vec<Graph> {
        let mut fam = family.to_vec();
        fam.sort_by_key(|g| (g.n(), g.edge_count()));
        fam
    };
    let families = [sort_family(red_family), sort_family(blue_family)];

    struct FamSearch<'a> {
        g: &'a Graph,
        families: &'a [Vec<Graph>; 2],
        order: Vec<usize>,
        colours: Vec<u8>,
        classes: [u64; 2],
        budget: u64,
        nodes: u64,
    }
    impl FamSearch<'_> {
        fn run(&mut self, pos: usize) -> SearchResult {
            if pos == self.order.len() {
                return SearchResult::Found;
            }
            let v = self.order[pos];
            for c in 0..2usize {
                if self.nodes >= self.budget {
                    return SearchResult::OutOfBudget;
                }
                self.nodes += 1;
                self.classes[c] |= 1 << v;
                self.colours[v] = c as u8;
                let class = VertexSet::from_bits(self.classes[c]);
                let hit = self.families[c]
                    .iter()
                    .any(|p| self.g.contains_copy_through(p, class, v).is_some());
                if !hit {
                    match self.run(pos + 1) {
                        SearchResult::Exhausted => {}
                        other => return other,
                    }
                }
                self.classes[c] &= !(1 << v);
                self.colours[v] = u8::MAX;
            }
            SearchResult::Exhausted
        }
    }

    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut search = FamSearch {
        g,
        families: &families,
        order,
        colours: vec![u8::MAX; g.n()],
        classes: [0, 0],
        budget,
        nodes: 0,
    };
    let outcome = match search.run(0) {
        SearchResult::Found => FamilyOutcome::Found {
            colouring: Colouring::new(search.colours.clone()),
        },
        SearchResult::Exhausted => FamilyOutcome::Impossible,
        SearchResult::OutOfBudget => FamilyOutcome::Unknown,
    };
    Ok(FamilyVerdict {
        outcome,
        nodes_explored: search.nodes,
    })
}
