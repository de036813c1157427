//! Graph serialisation: graph6, the `"n; u-v, u-v"` edge-list form, and
//! named-family tokens (`K5`, `K3,3`, `C4`, `P6`, `M2`).

use crate::graph::{Graph, GraphError, MAX_VERTICES};

/// Errors from parsing graph text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("empty graph string")]
    Empty,
    #[error("malformed graph6: {0}")]
    Graph6(String),
    #[error("malformed edge list: {0}")]
    EdgeList(String),
    #[error("malformed family token {0:?}")]
    FamilyToken(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Builds the canonical graph of a named family.
///
/// Families: `K` complete (one parameter) or complete bipartite (two),
/// `C` cycle, `P` path, `M` matching with the given number of edges.
pub fn make_named(family: &str, params: &[usize]) -> Result<Graph, GraphError> {
    let total: usize = match (family, params) {
        ("K", [t]) => *t,
        ("K", [s, t]) => s + t,
        ("C", [l]) | ("P", [l]) => *l,
        ("M", [m]) => 2 * m,
        _ => {
            return Err(GraphError::InvalidParameter {
                family: family.to_string(),
                reason: format!("unsupported parameter count {}", params.len()),
            })
        }
    };
    if total > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(total));
    }
    match (family, params) {
        ("K", [t]) => Graph::complete(*t),
        ("K", [s, t]) => Graph::complete_bipartite(*s, *t),
        ("C", [l]) => Graph::cycle(*l),
        ("P", [l]) => Graph::path(*l),
        ("M", [m]) => Graph::matching(*m),
        _ => unreachable!(),
    }
}

fn parse_family_token(text: &str) -> Option<Result<Graph, ParseError>> {
    let mut chars = text.chars();
    let head = chars.next()?;
    if !matches!(head, 'K' | 'C' | 'P' | 'M') {
        return None;
    }
    let rest: &str = &text[1..];
    if rest.is_empty() {
        return None;
    }
    let mut params = Vec::new();
    for piece in rest.split(',') {
        match piece.parse::<usize>() {
            Ok(v) => params.push(v),
            Err(_) => return None,
        }
    }
    Some(make_named(&head.to_string(), &params).map_err(ParseError::from))
}

/// Parses a graph from a family token, the edge-list form (contains `;`),
/// or graph6.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    if let Some(result) = parse_family_token(text) {
        return result;
    }
    if text.contains(';') {
        return parse_edge_list(text);
    }
    parse_graph6(text)
}

/// Writes a graph as graph6 (the round-trip partner of [`parse_graph`]).
pub fn write_graph(g: &Graph) -> String {
    to_graph6(g)
}

/// Parses `"n; u-v, u-v, ..."`. The edge list may be empty (`"3;"`).
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let bad = |m: &str| ParseError::EdgeList(format!("{m} in {text:?}"));
    let (head, tail) = text.split_once(';').ok_or_else(|| bad("missing ';'"))?;
    let n: usize = head
        .trim()
        .parse()
        .map_err(|_| bad("bad vertex count"))?;
    let mut g = Graph::empty(n)?;
    for item in tail.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (u, v) = item.split_once('-').ok_or_else(|| bad("edge missing '-'"))?;
        let u: usize = u.trim().parse().map_err(|_| bad("bad endpoint"))?;
        let v: usize = v.trim().parse().map_err(|_| bad("bad endpoint"))?;
        g.add_edge(u, v)?;
    }
    Ok(g)
}

/// Writes the `"n; u-v, ..."` form.
pub fn to_edge_list(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().map(|(u, v)| format!("{u}-{v}")).collect();
    if edges.is_empty() {
        format!("{};", g.n())
    } else {
        format!("{}; {}", g.n(), edges.join(", "))
    }
}

// graph6 encodes n, then the upper triangle bits column by column
// ((0,1),(0,2),(1,2),(0,3),...) packed into 6-bit groups, each offset by 63.

fn graph6_size_bytes(n: usize) -> Vec<u8> {
    if n <= 62 {
        vec![n as u8 + 63]
    } else {
        // 63 <= n <= 258047: marker 126 plus 18 bits big-endian.
        vec![
            126,
            ((n >> 12) & 0x3f) as u8 + 63,
            ((n >> 6) & 0x3f) as u8 + 63,
            (n & 0x3f) as u8 + 63,
        ]
    }
}

/// Bit-exact graph6 encoding.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut bytes = graph6_size_bytes(n);
    let mut group = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            group <<= 1;
            if g.has_edge(u, v) {
                group |= 1;
            }
            filled += 1;
            if filled == 6 {
                bytes.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        group <<= 6 - filled;
        bytes.push(group + 63);
    }
    String::from_utf8(bytes).expect("graph6 bytes are printable ASCII")
}

/// Bit-exact graph6 decoding.
pub fn parse_graph6(text: &str) -> Result<Graph, ParseError> {
    let bad = |m: &str| ParseError::Graph6(format!("{m} in {text:?}"));
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(ParseError::Empty);
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() < 4 {
            return Err(bad("truncated size"));
        }
        if bytes[1] == 126 {
            return Err(bad("graphs beyond 258047 vertices unsupported"));
        }
        let mut n = 0usize;
        for &b in &bytes[1..4] {
            if !(63..127).contains(&b) {
                return Err(bad("size byte out of range"));
            }
            n = (n << 6) | (b - 63) as usize;
        }
        (n, 4)
    } else {
        if !(63..126).contains(&bytes[0]) {
            return Err(bad("size byte out of range"));
        }
        ((bytes[0] - 63) as usize, 1)
    };
    if n > MAX_VERTICES {
        return Err(ParseError::Graph(GraphError::TooManyVertices(n)));
    }
    let pair_count = n * n.saturating_sub(1) / 2;
    let needed = pair_count.div_ceil(6);
    if bytes.len() - pos != needed {
        return Err(bad("wrong byte count for size"));
    }
    let mut g = Graph::empty(n)?;
    let mut bit_index = 0;
    let mut current = 0u8;
    for v in 1..n {
        for u in 0..v {
            if bit_index % 6 == 0 {
                let b = bytes[pos];
                if !(63..127).contains(&b) {
                    return Err(bad("data byte out of range"));
                }
                current = b - 63;
                pos += 1;
            }
            let bit = (current >> (5 - (bit_index % 6))) & 1;
            if bit == 1 {
                g.add_edge(u, v)?;
            }
            bit_index += 1;
        }
    }
    // Trailing padding bits must be zero for a canonical encoding; we accept
    // them either way since some writers are sloppy, but the byte count is
    // checked strictly above.
    Ok(g)
}

/// Splits a pattern list like `"K3,K3"` or `"K3,3,C4"` into graph tokens.
/// A comma followed by a digit continues the current token (the second
/// parameter of `K<s>,<t>`); a comma followed by anything else separates
/// tokens.
pub fn split_pattern_list(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let chars: Vec<char> = text.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        if ch == ',' {
            let next_digit = chars.get(i + 1).is_some_and(|c| c.is_ascii_digit());
            let prev_digit = i > 0 && chars[i - 1].is_ascii_digit();
            if next_digit && prev_digit {
                current.push(ch);
            } else {
                if !current.trim().is_empty() {
                    tokens.push(current.trim().to_string());
                }
                current.clear();
            }
        } else {
            current.push(ch);
        }
    }
    if !current.trim().is_empty() {
        tokens.push(current.trim().to_string());
    }
    tokens
}

/// Parses a comma-separated pattern list into graphs.
pub fn parse_pattern_list(text: &str) -> Result<Vec<Graph>, ParseError> {
    split_pattern_list(text)
        .iter()
        .map(|t| parse_graph(t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::subsets;

    #[test]
    fn named_tokens() {
        let k3 = parse_graph("K3").unwrap();
        assert_eq!(k3, Graph::complete(3).unwrap());
        let k33 = parse_graph("K3,3").unwrap();
        assert_eq!(k33, Graph::complete_bipartite(3, 3).unwrap());
        assert_eq!(parse_graph("C4").unwrap(), Graph::cycle(4).unwrap());
        assert_eq!(parse_graph("P5").unwrap(), Graph::path(5).unwrap());
        assert_eq!(parse_graph("M2").unwrap(), Graph::matching(2).unwrap());
        assert!(parse_graph("Q7").is_err()); // not a family, not valid graph6 length
        assert!(parse_graph("K").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse_graph("3; 0-1").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));

        let h = parse_graph("4;").unwrap();
        assert!(h.is_edgeless());

        let g2 = parse_edge_list(&to_edge_list(&g)).unwrap();
        assert_eq!(g, g2);

        assert!(parse_graph("3; 0-3").is_err()); // vertex out of range
        assert!(parse_graph("3; 1-1").is_err()); // loop
        assert!(parse_graph("x; 0-1").is_err());
    }

    #[test]
    fn graph6_known_vectors() {
        // "D?{" : 5 vertices, star centred at vertex 4.
        let g = parse_graph6("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 4);
        for v in 0..4 {
            assert!(g.has_edge(v, 4));
        }
        assert_eq!(to_graph6(&g), "D?{");

        // Independent oracle: petgraph's graph6 tests encode the 5-vertex
        // graph {0-2, 0-4, 1-3, 3-4} as "DQc".
        let h = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&h), "DQc");
        assert_eq!(parse_graph6("DQc").unwrap(), h);

        // Empty and complete small graphs.
        assert_eq!(to_graph6(&Graph::empty(0).unwrap()), "?");
        assert_eq!(to_graph6(&Graph::complete(2).unwrap()), "A_");
        assert_eq!(parse_graph6("A_").unwrap(), Graph::complete(2).unwrap());
    }

    #[test]
    fn graph6_rejects_malformed() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("D?").is_err()); // too short for n=5
        assert!(parse_graph6("D?{{").is_err()); // too long
        assert!(parse_graph6("\u{7f}").is_err());
    }

    /// Independent re-encoder, structured per the published format text:
    /// builds the whole bit vector first, then packs.
    fn graph6_reference(g: &Graph) -> String {
        let n = g.n();
        let mut bits = Vec::new();
        for v in 1..n {
            for u in 0..v {
                bits.push(g.has_edge(u, v) as u8);
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(0);
        }
        let mut out: Vec<u8> = if n <= 62 {
            vec![n as u8 + 63]
        } else {
            vec![
                126,
                (n >> 12) as u8 + 63,
                ((n >> 6) & 63) as u8 + 63,
                (n & 63) as u8 + 63,
            ]
        };
        for chunk in bits.chunks(6) {
            let mut val = 0u8;
            for &b in chunk {
                val = (val << 1) | b;
            }
            out.push(val + 63);
        }
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn graph6_corpus_round_trip() {
        // 100-graph corpus: every graph on <= 4 vertices by edge mask, plus
        // assorted named graphs, plus a 63-vertex case for the long header.
        let mut corpus = Vec::new();
        for n in 0..=4usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .collect();
            for mask in 0..(1u32 << pairs.len()) {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (mask >> i) & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                corpus.push(Graph::from_edges(n, &edges).unwrap());
            }
        }
        let pairs5: Vec<(usize, usize)> = (0..5)
            .flat_map(|u| ((u + 1)..5).map(move |v| (u, v)))
            .collect();
        for mask in (0u32..1024).step_by(37) {
            let edges: Vec<(usize, usize)> = pairs5
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            corpus.push(Graph::from_edges(5, &edges).unwrap());
        }
        corpus.push(Graph::complete_bipartite(6, 6).unwrap());
        corpus.push(Graph::cycle(9).unwrap());
        corpus.push(Graph::complete(8).unwrap());
        corpus.push(Graph::complete_bipartite(31, 32).unwrap()); // n = 63 header
        assert!(corpus.len() >= 100);
        for g in &corpus {
            let enc = to_graph6(g);
            assert_eq!(enc, graph6_reference(g), "encoder disagrees for {g:?}");
            let back = parse_graph6(&enc).unwrap();
            assert_eq!(&back, g, "round trip failed for {enc:?}");
            // parse_graph dispatch also lands on graph6 for these strings,
            // except single-token collisions with family names, which cannot
            // occur: family tokens always carry a digit.
            assert_eq!(&parse_graph(&enc).unwrap(), g);
        }
    }

    #[test]
    fn pattern_list_splitting() {
        assert_eq!(split_pattern_list("K3,K3"), vec!["K3", "K3"]);
        assert_eq!(split_pattern_list("K3,3,C4"), vec!["K3,3", "C4"]);
        assert_eq!(split_pattern_list("K2,2,K2,2"), vec!["K2,2", "K2,2"]);
        assert_eq!(split_pattern_list("C5"), vec!["C5"]);
        let pats = parse_pattern_list("K3,3,K3").unwrap();
        assert_eq!(pats.len(), 2);
        assert_eq!(pats[0], Graph::complete_bipartite(3, 3).unwrap());
        assert_eq!(pats[1], Graph::complete(3).unwrap());
    }

    #[test]
    fn edges_within_sanity_for_corpus() {
        // cheap cross-check tying format + graph: re-parse and compare edge
        // sets through both text forms
        for g in [
            Graph::cycle(6).unwrap(),
            Graph::complete_bipartite(2, 3).unwrap(),
            Graph::matching(3).unwrap(),
        ] {
            let el = to_edge_list(&g);
            let g6 = to_graph6(&g);
            assert_eq!(parse_graph(&el).unwrap(), g);
            assert_eq!(parse_graph(&g6).unwrap(), g);
            for s in subsets(g.n(), 0).take(20) {
                assert_eq!(
                    g.edges_within(s),
                    parse_graph(&g6).unwrap().edges_within(s)
                );
            }
        }
    }
}
