//! Directed multigraphs with dense vertex ids, text formats, and a seeded
//! random generator.
//!
//! Vertices are `0..n`; arcs are ordered `(tail, head)` pairs stored in
//! insertion order. Parallel arcs are allowed (each contributes to every
//! metric separately); self-loops are rejected everywhere because no
//! layering can satisfy an arc from a vertex to itself.
//!
//! Two textual formats are supported:
//!
//! * an **edge list**: one `tail head` pair per line, `#` starts a comment,
//!   and an optional leading `n <count>` header pins the vertex count (the
//!   header is what keeps isolated vertices alive across a round trip);
//! * a **restricted DOT subset**: `digraph [name] { a -> b; b -> c; }`,
//!   where identifiers are mapped to dense ids in first-appearance order.
//!   Chained arrows (`a -> b -> c`) and bare node statements (`a;`) are
//!   accepted; attributes, subgraphs, and undirected edges are not.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::fmt::Write as _;
use thiserror::Error;

use num::rational::BigRational;
use num::{BigInt, ToPrimitive, Zero};

/// Errors produced by graph construction and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("arc endpoint {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("generator spec invalid: {0}")]
    InvalidGenSpec(String),
}

/// A directed multigraph over vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl DiGraph {
    /// Build a graph, validating that all endpoints are in range and no arc
    /// is a self-loop. Arc order is preserved.
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for &(t, h) in &arcs {
            if t >= n {
                return Err(GraphError::VertexOutOfRange { vertex: t, n });
            }
            if h >= n {
                return Err(GraphError::VertexOutOfRange { vertex: h, n });
            }
            if t == h {
                return Err(GraphError::SelfLoop(t));
            }
        }
        Ok(DiGraph { n, arcs })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of arcs (parallel arcs counted with multiplicity).
    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs as `(tail, head)` pairs in insertion order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// The graph with every arc flipped; vertex ids are unchanged.
    pub fn reversed(&self) -> DiGraph {
        DiGraph {
            n: self.n,
            arcs: self.arcs.iter().map(|&(t, h)| (h, t)).collect(),
        }
    }

    /// Per-vertex lists of incident arc indices (both directions).
    ///
    /// Entry `v` holds the indices into [`arcs`](Self::arcs) of every arc
    /// with `v` as tail or head; a parallel arc appears once per copy.
    pub fn incident_arcs(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, &(t, h)) in self.arcs.iter().enumerate() {
            inc[t].push(i);
            inc[h].push(i);
        }
        inc
    }

    /// True if the graph has no directed cycle (Kahn's algorithm).
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.n];
        let mut out = vec![Vec::new(); self.n];
        for &(t, h) in &self.arcs {
            indeg[h] += 1;
            out[t].push(h);
        }
        let mut queue: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0usize;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &h in &out[v] {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push(h);
                }
            }
        }
        seen == self.n
    }

    /// Greedy upper bound on the minimum number of layers any
    /// distinct-endpoint layering needs.
    ///
    /// Colors the underlying simple undirected graph greedily in vertex-id
    /// order, giving each vertex the smallest color not used by an already
    /// colored neighbor, and returns the number of colors used. Any layer
    /// count at least this large is guaranteed feasible for the
    /// distinct-endpoint constraint; smaller counts may or may not be.
    pub fn min_feasible_layers(&self) -> u32 {
        let mut neighbors = vec![HashSet::new(); self.n];
        for &(t, h) in &self.arcs {
            neighbors[t].insert(h);
            neighbors[h].insert(t);
        }
        let mut color = vec![0u32; self.n];
        let mut max_color = 0u32;
        for v in 0..self.n {
            let used: HashSet<u32> = neighbors[v]
                .iter()
                .filter(|&&u| u < v)
                .map(|&u| color[u])
                .collect();
            let mut c = 1u32;
            while used.contains(&c) {
                c += 1;
            }
            color[v] = c;
            max_color = max_color.max(c);
        }
        max_color
    }

    /// Serialize as an edge list with an `n <count>` header.
    ///
    /// The output is byte-deterministic and round-trips through
    /// [`parse_edge_list`] losslessly, including isolated vertices.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n {}", self.n);
        for &(t, h) in &self.arcs {
            let _ = writeln!(s, "{} {}", t, h);
        }
        s
    }
}

/// Parse an edge list (see the module docs for the format).
///
/// Without an `n <count>` header the vertex count is one more than the
/// largest id mentioned (zero for an empty input). With a header, every
/// endpoint must be smaller than the declared count.
pub fn parse_edge_list(text: &str) -> Result<DiGraph, GraphError> {
    let mut arcs = Vec::new();
    let mut declared_n: Option<usize> = None;
    let mut saw_payload = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !saw_payload && tokens[0] == "n" {
            if tokens.len() != 2 {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: "header must be `n <count>`".into(),
                });
            }
            let count = tokens[1].parse().map_err(|_| GraphError::Parse {
                line: line_no,
                msg: format!("invalid vertex count `{}`", tokens[1]),
            })?;
            declared_n = Some(count);
            saw_payload = true;
            continue;
        }
        saw_payload = true;
        if tokens.len() != 2 {
            return Err(GraphError::Parse {
                line: line_no,
                msg: format!("expected `tail head`, got `{}`", line.trim()),
            });
        }
        let parse_id = |tok: &str| -> Result<usize, GraphError> {
            tok.parse().map_err(|_| GraphError::Parse {
                line: line_no,
                msg: format!("invalid vertex id `{}`", tok),
            })
        };
        arcs.push((parse_id(tokens[0])?, parse_id(tokens[1])?));
    }
    let n = declared_n.unwrap_or_else(|| {
        arcs.iter()
            .map(|&(t, h)| t.max(h) + 1)
            .max()
            .unwrap_or(0)
    });
    DiGraph::new(n, arcs)
}

/// Parse the restricted DOT subset; returns the graph and the original
/// identifier of each dense vertex id.
pub fn parse_dot(text: &str) -> Result<(DiGraph, Vec<String>), GraphError> {
    let tokens = dot_tokenize(text)?;
    let mut pos = 0usize;
    let expect = |tokens: &[DotToken], pos: &mut usize, want: &str| -> Result<(), GraphError> {
        match tokens.get(*pos) {
            Some(DotToken::Ident(s, _)) if s == want => {
                *pos += 1;
                Ok(())
            }
            Some(DotToken::Punct(c, line)) if want.len() == 1 && *c == want.as_bytes()[0] as char => {
                *pos += 1;
                let _ = line;
                Ok(())
            }
            other => Err(GraphError::Parse {
                line: other.map(DotToken::line).unwrap_or(0),
                msg: format!("expected `{}`", want),
            }),
        }
    };

    expect(&tokens, &mut pos, "digraph")?;
    // Optional graph name.
    if matches!(tokens.get(pos), Some(DotToken::Ident(..))) {
        pos += 1;
    }
    expect(&tokens, &mut pos, "{")?;

    let mut names: Vec<String> = Vec::new();
    let mut ids: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
        *ids.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };

    loop {
        match tokens.get(pos) {
            Some(DotToken::Punct('}', _)) => {
                pos += 1;
                break;
            }
            Some(DotToken::Punct(';', _)) => {
                pos += 1;
            }
            Some(DotToken::Ident(name, line)) => {
                let line = *line;
                let mut prev = intern(name, &mut names);
                pos += 1;
                while matches!(tokens.get(pos), Some(DotToken::Arrow(_))) {
                    pos += 1;
                    match tokens.get(pos) {
                        Some(DotToken::Ident(next, _)) => {
                            let cur = intern(next, &mut names);
                            if cur == prev {
                                return Err(GraphError::SelfLoop(cur));
                            }
                            arcs.push((prev, cur));
                            prev = cur;
                            pos += 1;
                        }
                        other => {
                            return Err(GraphError::Parse {
                                line: other.map(DotToken::line).unwrap_or(line),
                                msg: "expected identifier after `->`".into(),
                            })
                        }
                    }
                }
            }
            Some(tok) => {
                return Err(GraphError::Parse {
                    line: tok.line(),
                    msg: "expected statement or `}`".into(),
                })
            }
            None => {
                return Err(GraphError::Parse {
                    line: 0,
                    msg: "unexpected end of input, missing `}`".into(),
                })
            }
        }
    }
    if let Some(tok) = tokens.get(pos) {
        return Err(GraphError::Parse {
            line: tok.line(),
            msg: "trailing input after closing `}`".into(),
        });
    }
    let g = DiGraph::new(names.len(), arcs)?;
    Ok((g, names))
}

enum DotToken {
    Ident(String, usize),
    Arrow(usize),
    Punct(char, usize),
}

impl DotToken {
    fn line(&self) -> usize {
        match self {
            DotToken::Ident(_, l) | DotToken::Arrow(l) | DotToken::Punct(_, l) => *l,
        }
    }
}

fn dot_tokenize(text: &str) -> Result<Vec<DotToken>, GraphError> {
    let mut tokens = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find("//") {
            Some(p) => &raw[..p],
            None => raw,
        };
        let bytes = line.as_bytes();
        let mut i = 0usize;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_whitespace() {
                i += 1;
            } else if c == '-' && i + 1 < bytes.len() && bytes[i + 1] as char == '>' {
                tokens.push(DotToken::Arrow(line_no));
                i += 2;
            } else if c == '{' || c == '}' || c == ';' {
                tokens.push(DotToken::Punct(c, line_no));
                i += 1;
            } else if c == '"' {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j] as char != '"' {
                    j += 1;
                }
                if j == bytes.len() {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "unterminated quoted identifier".into(),
                    });
                }
                tokens.push(DotToken::Ident(line[start..j].to_string(), line_no));
                i = j + 1;
            } else if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] as char == '_')
                {
                    i += 1;
                }
                tokens.push(DotToken::Ident(line[start..i].to_string(), line_no));
            } else {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: format!("unexpected character `{}`", c),
                });
            }
        }
    }
    Ok(tokens)
}

/// Parameters for the seeded random-graph generator.
#[derive(Debug, Clone)]
pub struct GenSpec {
    /// Number of vertices drawn before isolated-vertex removal; at least 2.
    pub n_target: usize,
    /// Arc density: the generator aims for `round(density * n_target)` arcs
    /// (rounding half away from zero), clamped to the number of distinct
    /// vertex pairs. Must be positive.
    pub density: BigRational,
    /// Seed for the ChaCha8 stream that drives every random choice.
    pub seed: u64,
}

impl GenSpec {
    /// Convenience constructor with the default density of `3/2`.
    pub fn new(n_target: usize, seed: u64) -> Self {
        GenSpec {
            n_target,
            density: BigRational::new(BigInt::from(3), BigInt::from(2)),
            seed,
        }
    }
}

/// Generate a random acyclic digraph, deterministically per seed.
///
/// The procedure, fixed for reproducibility:
///
/// 1. Seed a ChaCha8 generator with `spec.seed`.
/// 2. Compute the arc budget `m = round(density * n_target)` (half away
///    from zero), clamped to `n_target * (n_target - 1) / 2`.
/// 3. Repeatedly draw a tail uniformly from `0..n_target-1` and a head
///    uniformly from the ids above it; draws that would repeat an existing
///    arc are rejected and redrawn, so the result is acyclic (every arc
///    goes id-upward) and free of duplicates and self-loops.
/// 4. Shuffle the vertex labels with the same generator so layer structure
///    is not correlated with id order; acyclicity is preserved.
/// 5. Remove isolated vertices and compact the surviving ids, preserving
///    their relative order. Arc count is unaffected.
///
/// The returned graph therefore has exactly `m` arcs and at most
/// `n_target` vertices.
pub fn generate_random(spec: &GenSpec) -> Result<DiGraph, GraphError> {
    if spec.n_target < 2 {
        return Err(GraphError::InvalidGenSpec(format!(
            "n_target must be at least 2, got {}",
            spec.n_target
        )));
    }
    if spec.density <= BigRational::zero() {
        return Err(GraphError::InvalidGenSpec(
            "density must be positive".into(),
        ));
    }
    let n = spec.n_target;
    let budget = (&spec.density * BigRational::from_integer(BigInt::from(n))).round();
    let budget = budget
        .to_integer()
        .to_usize()
        .ok_or_else(|| GraphError::InvalidGenSpec("arc budget overflows usize".into()))?;
    let m = budget.min(n * (n - 1) / 2);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut present = HashSet::with_capacity(m * 2);
    let mut arcs: Vec<(usize, usize)> = Vec::with_capacity(m);
    while arcs.len() < m {
        let t = rng.gen_range(0..n - 1);
        let h = rng.gen_range(t + 1..n);
        if present.insert((t, h)) {
            arcs.push((t, h));
        }
    }

    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    for arc in &mut arcs {
        *arc = (labels[arc.0], labels[arc.1]);
    }

    let mut used = vec![false; n];
    for &(t, h) in &arcs {
        used[t] = true;
        used[h] = true;
    }
    let mut compact = vec![usize::MAX; n];
    let mut next = 0usize;
    for v in 0..n {
        if used[v] {
            compact[v] = next;
            next += 1;
        }
    }
    for arc in &mut arcs {
        *arc = (compact[arc.0], compact[arc.1]);
    }
    DiGraph::new(next, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> DiGraph {
        DiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn new_rejects_self_loops_and_range() {
        assert_eq!(
            DiGraph::new(2, vec![(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            DiGraph::new(2, vec![(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn parses_edge_list_with_header() {
        let g = parse_edge_list("# comment\nn 4\n0 1\n1 2\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.arcs(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn parses_edge_list_without_header() {
        let g = parse_edge_list("0 1\n1 2 # trailing comment\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.arcs(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn header_bounds_are_enforced() {
        let err = parse_edge_list("n 2\n0 2\n").unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange { vertex: 2, n: 2 });
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_edge_list("0 1 2\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 x\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn empty_input_is_the_empty_graph() {
        let g = parse_edge_list("").unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.num_arcs(), 0);
    }

    #[test]
    fn round_trips_including_isolated_vertices() {
        let g = DiGraph::new(5, vec![(0, 3), (3, 1)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "n 5\n0 3\n3 1\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn parallel_arcs_are_preserved() {
        let g = parse_edge_list("0 1\n0 1\n").unwrap();
        assert_eq!(g.num_arcs(), 2);
        assert_eq!(parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn dot_subset_maps_first_appearance_order() {
        let (g, names) = parse_dot("digraph g { a -> b; b -> c; a -> c; }").unwrap();
        assert_eq!(names, vec!["a", "b", "c"]);
        assert_eq!(g.arcs(), &[(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn dot_chains_and_bare_nodes() {
        let (g, names) = parse_dot("digraph { a -> b -> c; d; }").unwrap();
        assert_eq!(names, vec!["a", "b", "c", "d"]);
        assert_eq!(g.n(), 4);
        assert_eq!(g.arcs(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn dot_rejects_self_loop_and_garbage() {
        assert_eq!(
            parse_dot("digraph { a -> a; }").unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert!(parse_dot("graph { a -- b; }").is_err());
        assert!(parse_dot("digraph { a -> ; }").is_err());
        assert!(parse_dot("digraph { a -> b; ").is_err());
    }

    #[test]
    fn acyclicity() {
        assert!(path3().is_acyclic());
        let cyc = DiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!cyc.is_acyclic());
        let multi = parse_edge_list("0 1\n0 1\n1 0\n").unwrap();
        assert!(!multi.is_acyclic());
    }

    #[test]
    fn greedy_layer_bound_examples() {
        assert_eq!(path3().min_feasible_layers(), 2);
        let isolated = DiGraph::new(3, vec![]).unwrap();
        assert_eq!(isolated.min_feasible_layers(), 1);
        let triangle = DiGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(triangle.min_feasible_layers(), 3);
        let empty = DiGraph::new(0, vec![]).unwrap();
        assert_eq!(empty.min_feasible_layers(), 0);
    }

    #[test]
    fn generator_is_deterministic_and_acyclic() {
        let spec = GenSpec::new(12, 7);
        let a = generate_random(&spec).unwrap();
        let b = generate_random(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.is_acyclic());
        assert_eq!(a.num_arcs(), 18); // round(1.5 * 12)
        let c = generate_random(&GenSpec::new(12, 8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generator_clamps_small_instances() {
        // Budget round(1.5 * 2) = 3 exceeds the single available pair.
        let g = generate_random(&GenSpec::new(2, 0)).unwrap();
        assert_eq!(g.num_arcs(), 1);
        assert_eq!(g.n(), 2);
    }

    #[test]
    fn generator_rejects_bad_specs() {
        assert!(generate_random(&GenSpec::new(1, 0)).is_err());
        let spec = GenSpec {
            n_target: 4,
            density: BigRational::zero(),
            seed: 0,
        };
        assert!(generate_random(&spec).is_err());
    }

    #[test]
    fn generator_compacts_isolated_vertices() {
        // With a tiny density most vertices stay isolated and are dropped.
        let spec = GenSpec {
            n_target: 40,
            density: BigRational::new(BigInt::from(1), BigInt::from(40)),
            seed: 3,
        };
        let g = generate_random(&spec).unwrap();
        assert_eq!(g.num_arcs(), 1);
        assert_eq!(g.n(), 2);
        assert_eq!(g.arcs().len(), 1);
    }
}
