//! Simple undirected graphs, DIMACS and JSON I/O, graph generators, the Euler
//! edge bound and a brute-force coloring oracle.
//!
//! Vertices are 0-based in the API. Every text form (DIMACS, JSON, coloring
//! output) is 1-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge endpoint {vertex} out of range (1..={n})")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("missing 'p edge' problem line")]
    MissingProblemLine,
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("{family} needs at least {min} vertices, got {got}")]
    TooSmall {
        family: &'static str,
        min: usize,
        got: usize,
    },
    #[error("unknown graph family '{0}'")]
    UnknownFamily(String),
    #[error("vertex order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from 0-based edges. Duplicates (in either orientation)
    /// are merged silently; loops and out-of-range endpoints are errors.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u + 1));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::EndpointOutOfRange { vertex: w + 1, n });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }
}

/// A vertex coloring, colors indexed from 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring { colors }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors_used(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }

    /// Right length and no monochromatic edge.
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.colors.len() == g.n()
            && g.edges()
                .iter()
                .all(|&(u, v)| self.colors[u] != self.colors[v])
    }
}

// ---------------------------------------------------------------------------
// DIMACS

/// Parses the DIMACS `.col` edge format. The edge count on the problem line
/// is advisory; a mismatch is logged as a warning.
pub fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        let err = |msg: &str| GraphError::Dimacs {
            line,
            msg: msg.to_string(),
        };
        let mut num = |what: &str| -> Result<usize, GraphError> {
            tok.next()
                .ok_or_else(|| err(&format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|_| err(&format!("bad {what}")))
        };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate problem line"));
                }
                match tok.next() {
                    Some("edge" | "col") => {}
                    _ => return Err(err("expected 'p edge <n> <m>'")),
                }
                let mut num = |what: &str| -> Result<usize, GraphError> {
                    tok.next()
                        .ok_or_else(|| err(&format!("missing {what}")))?
                        .parse::<usize>()
                        .map_err(|_| err(&format!("bad {what}")))
                };
                let n = num("vertex count")?;
                let m = num("edge count")?;
                header = Some((n, m));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| err("edge before problem line"))?;
                let u = num("endpoint")?;
                let v = num("endpoint")?;
                for w in [u, v] {
                    if w == 0 || w > n {
                        return Err(GraphError::EndpointOutOfRange { vertex: w, n });
                    }
                }
                if u == v {
                    return Err(GraphError::SelfLoop(u));
                }
                edges.push((u - 1, v - 1));
            }
            other => return Err(err(&format!("unknown line type '{other}'"))),
        }
    }
    let (n, m) = header.ok_or(GraphError::MissingProblemLine)?;
    let g = Graph::new(n, edges)?;
    if g.edge_count() != m {
        log::warn!(
            "DIMACS header declares {m} edges, found {} distinct edges",
            g.edge_count()
        );
    }
    Ok(g)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).expect("write to string");
    }
    out
}

/// `{"n": 3, "edges": [[1, 2], [2, 3]]}` with 1-based endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Graph, GraphError> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for [u, v] in j.edges {
            for w in [u, v] {
                if w == 0 || w > j.n {
                    return Err(GraphError::EndpointOutOfRange { vertex: w, n: j.n });
                }
            }
            edges.push((u - 1, v - 1));
        }
        Graph::new(j.n, edges)
    }
}

pub fn parse_graph_json(text: &str) -> Result<Graph, GraphError> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    Graph::try_from(j)
}

pub fn write_graph_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serializes")
}

// ---------------------------------------------------------------------------
// Generators

/// Named graph families. `Wheel(n)` has `n` rim vertices plus a hub.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    Cycle(usize),
    Wheel(usize),
    Petersen,
    MaximalPlanar { n: usize, seed: u64 },
}

impl FromStr for Family {
    type Err = GraphError;

    /// `complete:5`, `cycle:7`, `wheel:5`, `petersen`, `maximal_planar:10[:seed]`.
    fn from_str(s: &str) -> Result<Self, GraphError> {
        let unknown = || GraphError::UnknownFamily(s.to_string());
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default();
        let mut arg = || -> Result<u64, GraphError> {
            parts
                .next()
                .and_then(|a| a.parse().ok())
                .ok_or_else(unknown)
        };
        let fam = match name {
            "complete" => Family::Complete(arg()? as usize),
            "cycle" => Family::Cycle(arg()? as usize),
            "wheel" => Family::Wheel(arg()? as usize),
            "petersen" => Family::Petersen,
            "maximal_planar" | "planar" => {
                let n = arg()? as usize;
                let seed = match parts.next() {
                    None => 0,
                    Some(x) => x.parse().map_err(|_| unknown())?,
                };
                Family::MaximalPlanar { n, seed }
            }
            _ => return Err(unknown()),
        };
        if parts.next().is_some() {
            return Err(unknown());
        }
        Ok(fam)
    }
}

pub fn generate(family: Family) -> Result<Graph, GraphError> {
    let too_small = |family, min, got| Err(GraphError::TooSmall { family, min, got });
    match family {
        Family::Complete(n) => Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
        Family::Cycle(n) => {
            if n < 3 {
                return too_small("cycle", 3, n);
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Wheel(rim) => {
            if rim < 3 {
                return too_small("wheel", 3, rim);
            }
            let hub = rim;
            let ring = (0..rim).map(|i| (i, (i + 1) % rim));
            let spokes = (0..rim).map(|i| (i, hub));
            Graph::new(rim + 1, ring.chain(spokes))
        }
        Family::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::new(10, outer.chain(spokes).chain(inner))
        }
        Family::MaximalPlanar { n, seed } => {
            if n < 3 {
                return too_small("maximal_planar", 3, n);
            }
            Ok(random_maximal_planar(n, seed))
        }
    }
}

/// Face-insertion triangulation: start from a triangle (two faces: inside and
/// outside) and repeatedly put a new vertex inside a uniformly chosen face,
/// joining it to the face's three corners. Always has `3n - 6` edges.
pub fn random_maximal_planar(n: usize, seed: u64) -> Graph {
    assert!(n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 2]];
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    for v in 3..n {
        let f = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(f);
        edges.extend([(a, v), (b, v), (c, v)]);
        faces.extend([[a, b, v], [b, c, v], [a, c, v]]);
    }
    Graph::new(n, edges).expect("construction yields a simple graph")
}

// ---------------------------------------------------------------------------
// Planarity sanity check

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerCheck {
    /// `|E| <= 3n - 6`; necessary, not sufficient, for planarity.
    pub within_bound: bool,
    /// Set when `n < 3`, where the bound does not apply and the check passes vacuously.
    pub vacuous: bool,
}

pub fn euler_bound_check(g: &Graph) -> EulerCheck {
    if g.n() < 3 {
        return EulerCheck {
            within_bound: true,
            vacuous: true,
        };
    }
    EulerCheck {
        within_bound: g.edge_count() <= 3 * g.n() - 6,
        vacuous: false,
    }
}

// ---------------------------------------------------------------------------
// Oracle

/// Backtracking over vertices in index order and colors in ascending order.
/// Returns the lexicographically first proper `k`-coloring, if any.
pub fn brute_force_color(g: &Graph, k: usize) -> Option<Coloring> {
    let n = g.n();
    if n == 0 {
        return Some(Coloring::new(Vec::new()));
    }
    if k == 0 {
        return None;
    }
    let mut colors = vec![usize::MAX; n];
    let mut v = 0;
    colors[0] = 0;
    loop {
        // Is colors[v] consistent with earlier neighbours?
        let ok = colors[v] < k
            && g.neighbors(v)
                .iter()
                .all(|&u| u > v || colors[u] != colors[v]);
        if ok {
            if v + 1 == n {
                return Some(Coloring::new(colors));
            }
            v += 1;
            colors[v] = 0;
            continue;
        }
        // Advance, backtracking past exhausted vertices.
        loop {
            if colors[v] < k {
                colors[v] += 1;
                if colors[v] < k {
                    break;
                }
            }
            if v == 0 {
                return None;
            }
            colors[v] = usize::MAX;
            v -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_basics() {
        let g = parse_dimacs("p edge 2 1\ne 1 2\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
        let mut k5 = String::from("c complete graph\np edge 5 10\n");
        for u in 1..=5 {
            for v in u + 1..=5 {
                k5.push_str(&format!("e {u} {v}\n"));
            }
        }
        assert_eq!(
            parse_dimacs(&k5).unwrap(),
            generate(Family::Complete(5)).unwrap()
        );
    }

    #[test]
    fn dimacs_errors() {
        assert_eq!(
            parse_dimacs("p edge 2 1\ne 1 1\n"),
            Err(GraphError::SelfLoop(1))
        );
        assert!(matches!(
            parse_dimacs("e 1 2\np edge 2 1\n"),
            Err(GraphError::Dimacs { line: 1, .. })
        ));
        assert_eq!(
            parse_dimacs("c nothing\n"),
            Err(GraphError::MissingProblemLine)
        );
        assert_eq!(
            parse_dimacs("p edge 2 1\ne 1 3\n"),
            Err(GraphError::EndpointOutOfRange { vertex: 3, n: 2 })
        );
        assert!(matches!(
            parse_dimacs("p edge 2 1\ne 1\n"),
            Err(GraphError::Dimacs { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p edge x 1\n"),
            Err(GraphError::Dimacs { .. })
        ));
    }

    #[test]
    fn dimacs_duplicates_and_roundtrip() {
        let g = parse_dimacs("p edge 3 3\ne 1 2\ne 2 1\ne 2 3\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(parse_dimacs(&write_dimacs(&g)).unwrap(), g);
    }

    #[test]
    fn json_roundtrip() {
        let g = generate(Family::Wheel(5)).unwrap();
        let text = write_graph_json(&g);
        assert_eq!(parse_graph_json(&text).unwrap(), g);
        assert_eq!(
            parse_graph_json(r#"{"n": 2, "edges": [[1, 1]]}"#),
            Err(GraphError::SelfLoop(1))
        );
        assert!(matches!(
            parse_graph_json(r#"{"n": 2, "edges": [[0, 1]]}"#),
            Err(GraphError::EndpointOutOfRange { .. })
        ));
    }

    #[test]
    fn families() {
        assert_eq!(generate(Family::Complete(5)).unwrap().edge_count(), 10);
        assert_eq!(
            generate(Family::Cycle(3)).unwrap(),
            generate(Family::Complete(3)).unwrap()
        );
        let w = generate(Family::Wheel(5)).unwrap();
        assert_eq!((w.n(), w.edge_count(), w.degree(5)), (6, 10, 5));
        let p = generate(Family::Petersen).unwrap();
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
        let mp = generate(Family::MaximalPlanar { n: 10, seed: 1 }).unwrap();
        assert_eq!(mp.edge_count(), 24);
        assert!(generate(Family::Cycle(2)).is_err());
        assert!(generate(Family::Wheel(2)).is_err());
        assert!(generate(Family::MaximalPlanar { n: 2, seed: 0 }).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("complete:5".parse::<Family>().unwrap(), Family::Complete(5));
        assert_eq!("petersen".parse::<Family>().unwrap(), Family::Petersen);
        assert_eq!(
            "maximal_planar:9".parse::<Family>().unwrap(),
            Family::MaximalPlanar { n: 9, seed: 0 }
        );
        assert_eq!(
            "maximal_planar:9:4".parse::<Family>().unwrap(),
            Family::MaximalPlanar { n: 9, seed: 4 }
        );
        assert!("cube:3".parse::<Family>().is_err());
        assert!("complete".parse::<Family>().is_err());
        assert!("complete:4:1".parse::<Family>().is_err());
    }

    #[test]
    fn euler_bound() {
        assert!(!euler_bound_check(&generate(Family::Complete(5)).unwrap()).within_bound);
        assert!(euler_bound_check(&generate(Family::Complete(4)).unwrap()).within_bound);
        let mp = generate(Family::MaximalPlanar { n: 10, seed: 1 }).unwrap();
        assert_eq!(
            euler_bound_check(&mp),
            EulerCheck {
                within_bound: true,
                vacuous: false
            }
        );
        assert_eq!(
            euler_bound_check(&Graph::empty(2)),
            EulerCheck {
                within_bound: true,
                vacuous: true
            }
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            brute_force_color(&generate(Family::Complete(5)).unwrap(), 4),
            None
        );
        assert_eq!(
            brute_force_color(&generate(Family::Complete(4)).unwrap(), 4)
                .unwrap()
                .colors(),
            &[0, 1, 2, 3]
        );
        assert_eq!(
            brute_force_color(&generate(Family::Cycle(5)).unwrap(), 3)
                .unwrap()
                .colors(),
            &[0, 1, 0, 1, 2]
        );
        assert_eq!(
            brute_force_color(&Graph::empty(3), 1).unwrap().colors(),
            &[0, 0, 0]
        );
        assert_eq!(
            brute_force_color(&generate(Family::Complete(2)).unwrap(), 1),
            None
        );
        assert_eq!(brute_force_color(&Graph::empty(0), 0).unwrap().len(), 0);
    }

    #[test]
    fn graph_validation() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(2)));
        assert!(matches!(
            Graph::new(3, [(0, 3)]),
            Err(GraphError::EndpointOutOfRange { vertex: 4, n: 3 })
        ));
        let g = Graph::new(3, [(2, 0), (0, 2), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        assert!(g.has_edge(2, 0));
    }
}
