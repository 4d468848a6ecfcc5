//! Admissible graphs: enumeration of the weighted-sum classes, wheels, and
//! a canonical text encoding.
//!
//! Graphs are labeled, with ordered out-edge lists, matching the way the
//! star-product sums over them; no isomorphism quotient is taken.

use std::fmt;

use thiserror::Error;

/// Edge target: an aerial (first-type) vertex or a ground (second-type) one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    First(usize),
    Second(usize),
}

/// Directed graph with `n` first-type vertices carrying ordered out-edge
/// lists and `m ∈ {0, 2}` second-type vertices with no out-edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleGraph {
    n: usize,
    m: usize,
    out_edges: Vec<Vec<Target>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    /// All admissible graphs with two ground vertices and out-degree two.
    G,
    /// Subclass with at most one incoming edge at each first-type vertex.
    A,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphClass::G => write!(f, "G"),
            GraphClass::A => write!(f, "A"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("repeated target in the edge list of vertex {0}")]
    RepeatedTarget(usize),
    #[error("edge target out of range at vertex {0}")]
    TargetOutOfRange(usize),
    #[error("second-type vertex count {0} is not 0 or 2")]
    BadSecondCount(usize),
    #[error("a wheel needs at least 2 rim vertices, got {0}")]
    BadWheel(usize),
    #[error("vertex count {n} exceeds the enumeration ceiling {ceiling}")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("encoding parse error: {0}")]
    Parse(String),
}

/// Default guard against runaway enumerations.
pub const DEFAULT_CEILING: usize = 5;

impl AdmissibleGraph {
    /// Builds and validates a graph.
    pub fn new(n: usize, m: usize, out_edges: Vec<Vec<Target>>) -> Result<Self, GraphError> {
        let g = AdmissibleGraph { n, m, out_edges };
        g.validate()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn out_edges(&self) -> &[Vec<Target>] {
        &self.out_edges
    }

    /// All edges in the fixed order: vertices by index, then each vertex's
    /// ordered list.
    pub fn edges(&self) -> Vec<(usize, Target)> {
        let mut out = Vec::new();
        for (i, list) in self.out_edges.iter().enumerate() {
            for &t in list {
                out.push((i, t));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(|l| l.len()).sum()
    }

    /// Independent structural check: no loops, no repeated targets, targets
    /// in range, second-type count in {0, 2}.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.m != 0 && self.m != 2 {
            return Err(GraphError::BadSecondCount(self.m));
        }
        if self.out_edges.len() != self.n {
            return Err(GraphError::TargetOutOfRange(self.out_edges.len()));
        }
        for (i, list) in self.out_edges.iter().enumerate() {
            for (pos, t) in list.iter().enumerate() {
                match *t {
                    Target::First(j) => {
                        if j >= self.n {
                            return Err(GraphError::TargetOutOfRange(i));
                        }
                        if j == i {
                            return Err(GraphError::Loop(i));
                        }
                    }
                    Target::Second(j) => {
                        if j >= self.m {
                            return Err(GraphError::TargetOutOfRange(i));
                        }
                    }
                }
                if list[..pos].contains(t) {
                    return Err(GraphError::RepeatedTarget(i));
                }
            }
        }
        Ok(())
    }

    /// Number of edges arriving at each first-type vertex.
    pub fn incoming_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n];
        for (_, t) in self.edges() {
            if let Target::First(j) = t {
                counts[j] += 1;
            }
        }
        counts
    }

    pub fn is_class_g(&self) -> bool {
        self.m == 2 && self.out_edges.iter().all(|l| l.len() == 2)
    }

    pub fn is_class_a(&self) -> bool {
        self.is_class_g() && self.incoming_counts().iter().all(|&c| c <= 1)
    }

    /// Rim size when the graph is exactly a wheel, hub last.
    pub fn wheel_rim(&self) -> Option<usize> {
        if self.m != 0 || self.n < 3 {
            return None;
        }
        let k = self.n - 1;
        if !self.out_edges[k].is_empty() {
            return None;
        }
        for i in 0..k {
            let expect = vec![Target::First((i + 1) % k), Target::First(k)];
            if self.out_edges[i] != expect {
                return None;
            }
        }
        Some(k)
    }

    /// Relabels first-type vertices by `perm` (vertex i becomes perm[i]).
    pub fn permute_vertices(&self, perm: &[usize]) -> AdmissibleGraph {
        assert_eq!(perm.len(), self.n);
        let mut out_edges = vec![Vec::new(); self.n];
        for (i, list) in self.out_edges.iter().enumerate() {
            out_edges[perm[i]] = list
                .iter()
                .map(|t| match *t {
                    Target::First(j) => Target::First(perm[j]),
                    s => s,
                })
                .collect();
        }
        AdmissibleGraph {
            n: self.n,
            m: self.m,
            out_edges,
        }
    }
}

/// The wheel with `k` rim vertices: each rim vertex points at the next rim
/// vertex (cyclically) and at a passive hub with no out-edges.
pub fn wheel(k: usize) -> Result<AdmissibleGraph, GraphError> {
    if k < 2 {
        return Err(GraphError::BadWheel(k));
    }
    let mut out_edges = Vec::with_capacity(k + 1);
    for i in 0..k {
        out_edges.push(vec![Target::First((i + 1) % k), Target::First(k)]);
    }
    out_edges.push(Vec::new());
    AdmissibleGraph::new(k + 1, 0, out_edges)
}

fn target_token(t: Target) -> String {
    match t {
        Target::Second(0) => "L".to_string(),
        Target::Second(1) => "R".to_string(),
        Target::Second(j) => format!("S{j}"),
        Target::First(j) => (j + 1).to_string(),
    }
}

/// Canonical text encoding. Wheels print as `W<k>`; graphs with two ground
/// vertices as `K<n>:(t,u);…` with one tuple per first-type vertex in index
/// order; other hub-free graphs as `H<n>:…`. Ground targets are `L` and `R`.
pub fn encode(g: &AdmissibleGraph) -> String {
    if let Some(k) = g.wheel_rim() {
        return format!("W{k}");
    }
    let head = if g.m == 2 { 'K' } else { 'H' };
    let body: Vec<String> = g
        .out_edges
        .iter()
        .map(|list| {
            let inner: Vec<String> = list.iter().map(|&t| target_token(t)).collect();
            format!("({})", inner.join(","))
        })
        .collect();
    format!("{head}{}:{}", g.n, body.join(";"))
}

/// Parses the canonical encoding, including the `W<k>` wheel shorthand.
pub fn parse(s: &str) -> Result<AdmissibleGraph, GraphError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('W') {
        let k: usize = rest
            .parse()
            .map_err(|_| GraphError::Parse(format!("bad wheel size '{rest}'")))?;
        return wheel(k);
    }
    let (head, m) = match s.chars().next() {
        Some('K') => ('K', 2),
        Some('H') => ('H', 0),
        _ => return Err(GraphError::Parse("expected K, H or W prefix".into())),
    };
    let rest = &s[1..];
    let (n_str, body) = rest
        .split_once(':')
        .ok_or_else(|| GraphError::Parse("missing ':'".into()))?;
    let n: usize = n_str
        .parse()
        .map_err(|_| GraphError::Parse(format!("bad vertex count '{n_str}'")))?;
    let mut out_edges = Vec::new();
    if !body.is_empty() {
        for tuple in body.split(';') {
            let inner = tuple
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| GraphError::Parse(format!("bad tuple '{tuple}'")))?;
            let mut list = Vec::new();
            if !inner.is_empty() {
                for token in inner.split(',') {
                    let t = match token.trim() {
                        "L" => Target::Second(0),
                        "R" => Target::Second(1),
                        v => {
                            let j: usize = v.parse().map_err(|_| {
                                GraphError::Parse(format!("bad target '{v}'"))
                            })?;
                            if j == 0 {
                                return Err(GraphError::Parse("vertex numbers are 1-based".into()));
                            }
                            Target::First(j - 1)
                        }
                    };
                    list.push(t);
                }
            }
            out_edges.push(list);
        }
    }
    if out_edges.len() != n {
        return Err(GraphError::Parse(format!(
            "expected {n} tuples, found {}",
            out_edges.len()
        )));
    }
    let _ = head;
    AdmissibleGraph::new(n, m, out_edges)
}

fn allowed_targets(n: usize, vertex: usize) -> Vec<Target> {
    let mut targets = vec![Target::Second(0), Target::Second(1)];
    for j in 0..n {
        if j != vertex {
            targets.push(Target::First(j));
        }
    }
    targets
}

/// Complete, duplicate-free enumeration of the class with `n` first-type
/// vertices, by depth-first choice of each vertex's ordered target pair
/// (class A prunes on incoming degree during the search). Results come in
/// encoding order.
pub fn enumerate_graphs(n: usize, class: GraphClass) -> Result<Vec<AdmissibleGraph>, GraphError> {
    enumerate_graphs_with_ceiling(n, class, DEFAULT_CEILING)
}

pub fn enumerate_graphs_with_ceiling(
    n: usize,
    class: GraphClass,
    ceiling: usize,
) -> Result<Vec<AdmissibleGraph>, GraphError> {
    if n > ceiling {
        return Err(GraphError::CeilingExceeded { n, ceiling });
    }
    let mut out = Vec::new();
    let mut incoming = vec![0usize; n];
    let mut chosen: Vec<Vec<Target>> = Vec::with_capacity(n);
    search(n, class, &mut chosen, &mut incoming, &mut out);
    let mut keyed: Vec<(String, AdmissibleGraph)> =
        out.into_iter().map(|g| (encode(&g), g)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, g)| g).collect())
}

fn search(
    n: usize,
    class: GraphClass,
    chosen: &mut Vec<Vec<Target>>,
    incoming: &mut [usize],
    out: &mut Vec<AdmissibleGraph>,
) {
    let vertex = chosen.len();
    if vertex == n {
        let g = AdmissibleGraph {
            n,
            m: 2,
            out_edges: chosen.clone(),
        };
        debug_assert!(g.validate().is_ok());
        out.push(g);
        return;
    }
    let targets = allowed_targets(n, vertex);
    for &t1 in &targets {
        if !bump(incoming, t1, class) {
            continue;
        }
        for &t2 in &targets {
            if t2 == t1 {
                continue;
            }
            if !bump(incoming, t2, class) {
                continue;
            }
            chosen.push(vec![t1, t2]);
            search(n, class, chosen, incoming, out);
            chosen.pop();
            unbump(incoming, t2);
        }
        unbump(incoming, t1);
    }
}

fn bump(incoming: &mut [usize], t: Target, class: GraphClass) -> bool {
    if let Target::First(j) = t {
        if class == GraphClass::A && incoming[j] >= 1 {
            return false;
        }
        incoming[j] += 1;
    }
    true
}

fn unbump(incoming: &mut [usize], t: Target) {
    if let Target::First(j) = t {
        incoming[j] -= 1;
    }
}

/// Independent brute-force oracle: walks the full cartesian space of
/// ordered target pairs (including invalid ones) and keeps what passes the
/// validator and the class predicate. Deliberately shares no code with
/// `enumerate_graphs`.
pub mod bruteforce {
    use super::*;

    pub fn enumerate(n: usize, class: GraphClass) -> Vec<AdmissibleGraph> {
        let mut universe = Vec::new();
        for i in 0..n + 2 {
            let t = if i < n {
                Target::First(i)
            } else {
                Target::Second(i - n)
            };
            universe.push(t);
        }
        let pair_count = universe.len() * universe.len();
        let mut results = Vec::new();
        let total = pair_count.checked_pow(n as u32).expect("oracle size overflow");
        for code in 0..total {
            let mut c = code;
            let mut out_edges = Vec::with_capacity(n);
            for _ in 0..n {
                let pair = c % pair_count;
                c /= pair_count;
                let t1 = universe[pair / universe.len()];
                let t2 = universe[pair % universe.len()];
                out_edges.push(vec![t1, t2]);
            }
            let g = AdmissibleGraph {
                n,
                m: 2,
                out_edges,
            };
            if g.validate().is_err() {
                continue;
            }
            let keep = match class {
                GraphClass::G => g.is_class_g(),
                GraphClass::A => g.is_class_a(),
            };
            if keep {
                results.push(g);
            }
        }
        results
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn order_one_has_exactly_two_graphs() {
        for class in [GraphClass::G, GraphClass::A] {
            let graphs = enumerate_graphs(1, class).unwrap();
            let encodings: Vec<String> = graphs.iter().map(encode).collect();
            assert_eq!(encodings, ["K1:(L,R)", "K1:(R,L)"]);
        }
    }

    #[test]
    fn order_two_matches_the_oracle() {
        let graphs = enumerate_graphs(2, GraphClass::A).unwrap();
        assert_eq!(graphs.len(), 36);
        let oracle: BTreeSet<String> = bruteforce::enumerate(2, GraphClass::A)
            .iter()
            .map(encode)
            .collect();
        let ours: BTreeSet<String> = graphs.iter().map(encode).collect();
        assert_eq!(ours, oracle);
        // pruning is vacuous at n = 2
        let g2: BTreeSet<String> = enumerate_graphs(2, GraphClass::G)
            .unwrap()
            .iter()
            .map(encode)
            .collect();
        assert_eq!(ours, g2);
    }

    #[test]
    fn order_three_matches_the_oracle_and_the_counting_bound() {
        let ours: BTreeSet<String> = enumerate_graphs(3, GraphClass::A)
            .unwrap()
            .iter()
            .map(encode)
            .collect();
        let oracle: BTreeSet<String> = bruteforce::enumerate(3, GraphClass::A)
            .iter()
            .map(encode)
            .collect();
        assert_eq!(ours, oracle);
        // |A_3| < (8e)³·3! in exact arithmetic, with e bounded below.
        let e_lb = crate::ratio::ratio(2718281828, 1000000000);
        let bound = (crate::ratio::rat(8) * e_lb).pow(3) * crate::ratio::rat(6);
        assert!(crate::ratio::rat(ours.len() as i64) < bound);
    }

    #[test]
    fn class_a_is_contained_in_class_g() {
        for n in 0..=4 {
            let a: BTreeSet<String> = enumerate_graphs(n, GraphClass::A)
                .unwrap()
                .iter()
                .map(encode)
                .collect();
            let g: BTreeSet<String> = enumerate_graphs(n, GraphClass::G)
                .unwrap()
                .iter()
                .map(encode)
                .collect();
            assert!(a.is_subset(&g), "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_stable_under_vertex_relabeling() {
        let graphs = enumerate_graphs(3, GraphClass::A).unwrap();
        let baseline: BTreeSet<String> = graphs.iter().map(encode).collect();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0], [0, 2, 1], [2, 0, 1]] {
            let permuted: BTreeSet<String> = graphs
                .iter()
                .map(|g| encode(&g.permute_vertices(&perm)))
                .collect();
            assert_eq!(permuted, baseline, "perm {perm:?}");
        }
    }

    #[test]
    fn ceiling_guard() {
        assert_eq!(
            enumerate_graphs(6, GraphClass::A),
            Err(GraphError::CeilingExceeded { n: 6, ceiling: 5 })
        );
    }

    #[test]
    fn wheel_construction() {
        let w2 = wheel(2).unwrap();
        assert_eq!(w2.n(), 3);
        assert_eq!(w2.edge_count(), 4);
        assert_eq!(
            w2.edges(),
            vec![
                (0, Target::First(1)),
                (0, Target::First(2)),
                (1, Target::First(0)),
                (1, Target::First(2)),
            ]
        );
        assert!(w2.validate().is_ok());

        let w4 = wheel(4).unwrap();
        assert_eq!(w4.n(), 5);
        assert_eq!(w4.edge_count(), 8);
        assert!(w4.out_edges()[4].is_empty());
        assert!(w4.validate().is_ok());

        assert_eq!(wheel(1), Err(GraphError::BadWheel(1)));
    }

    #[test]
    fn encoding_round_trips() {
        // the order-two example graph
        let g = parse("K2:(L,2);(L,R)").unwrap();
        assert_eq!(
            g.edges(),
            vec![
                (0, Target::Second(0)),
                (0, Target::First(1)),
                (1, Target::Second(0)),
                (1, Target::Second(1)),
            ]
        );
        assert_eq!(encode(&g), "K2:(L,2);(L,R)");

        for g in enumerate_graphs(3, GraphClass::A).unwrap() {
            assert_eq!(parse(&encode(&g)).unwrap(), g);
        }
        let w = wheel(3).unwrap();
        assert_eq!(encode(&w), "W3");
        assert_eq!(parse("W3").unwrap(), w);
    }

    #[test]
    fn parse_rejects_invalid_graphs() {
        assert_eq!(parse("K1:(1,L)"), Err(GraphError::Loop(0)));
        assert_eq!(parse("K1:(L,L)"), Err(GraphError::RepeatedTarget(0)));
        assert_eq!(parse("K1:(3,L)"), Err(GraphError::TargetOutOfRange(0)));
        assert!(matches!(parse("K2:(L,R)"), Err(GraphError::Parse(_))));
        assert!(matches!(parse("X1:(L,R)"), Err(GraphError::Parse(_))));
    }

    #[test]
    fn out_degree_one_graphs_are_representable() {
        let g = parse("K1:(L)").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(!g.is_class_g());
        assert_eq!(encode(&g), "K1:(L)");
    }
}
