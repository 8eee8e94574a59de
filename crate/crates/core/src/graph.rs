//! Finite directed multigraphs and their paths and cycles.
//!
//! Vertices and edges are addressed by dense indices assigned in declaration
//! order. That order is part of the graph's identity: the first-declared
//! outgoing edge of every vertex is the special edge used by the normal form
//! in [`crate::lpa`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub range: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<String, Atom>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    aliases: Vec<(String, Vec<EdgeId>)>,
}

/// A resolved identifier.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Vertex(VertexId),
    Edge(EdgeId),
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let body = name.trim_end_matches('\'');
    let mut chars = body.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Graph {
    /// Builds a graph from vertex names and `(edge, source, range)` triples.
    pub fn build<V, E>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator,
        V::Item: AsRef<str>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut graph = Graph {
            vertices: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
            out_edges: Vec::new(),
            in_edges: Vec::new(),
            aliases: Vec::new(),
        };
        for v in vertices {
            graph.add_vertex(v.as_ref())?;
        }
        for (name, s, r) in edges {
            graph.add_edge(&name, &s, &r)?;
        }
        Ok(graph)
    }

    fn check_name(&self, name: &str) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::UnknownId(format!("malformed identifier `{name}`")));
        }
        if self.index.contains_key(name) || self.aliases.iter().any(|(a, _)| a == name) {
            return Err(Error::DuplicateId(name.to_string()));
        }
        Ok(())
    }

    fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        self.check_name(name)?;
        let id = VertexId(self.vertices.len());
        self.vertices.push(name.to_string());
        self.index.insert(name.to_string(), Atom::Vertex(id));
        self.out_edges.push(Vec::new());
        self.in_edges.push(Vec::new());
        Ok(id)
    }

    fn add_edge(&mut self, name: &str, source: &str, range: &str) -> Result<EdgeId> {
        self.check_name(name)?;
        let lookup = |v: &str| match self.index.get(v) {
            Some(Atom::Vertex(id)) => Ok(*id),
            _ => Err(Error::DanglingEndpoint {
                edge: name.to_string(),
                vertex: v.to_string(),
            }),
        };
        let source = lookup(source)?;
        let range = lookup(range)?;
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge {
            name: name.to_string(),
            source,
            range,
        });
        self.index.insert(name.to_string(), Atom::Edge(id));
        self.out_edges[source.0].push(id);
        self.in_edges[range.0].push(id);
        Ok(id)
    }

    /// Registers a named cycle, e.g. `d` for `d1 d2 d3 d4`.
    pub fn add_cycle_alias(&mut self, alias: &str, edges: &[&str]) -> Result<()> {
        self.check_name(alias)?;
        let ids = edges
            .iter()
            .map(|e| self.edge_id(e))
            .collect::<Result<Vec<_>>>()?;
        Cycle::new(self, ids.clone())?;
        self.aliases.push((alias.to_string(), ids));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].range
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    /// Outgoing edges of `v` in declaration order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    /// First-declared outgoing edge, if `v` is regular.
    pub fn special_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.out_edges[v.0].first().copied()
    }

    pub fn is_regular(&self, v: VertexId) -> bool {
        !self.out_edges[v.0].is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        match self.index.get(name) {
            Some(Atom::Vertex(v)) => Ok(*v),
            _ => Err(Error::UnknownId(name.to_string())),
        }
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        match self.index.get(name) {
            Some(Atom::Edge(e)) => Ok(*e),
            _ => Err(Error::UnknownId(name.to_string())),
        }
    }

    pub fn aliases(&self) -> &[(String, Vec<EdgeId>)] {
        &self.aliases
    }

    pub fn alias_of(&self, cycle: &Cycle) -> Option<&str> {
        self.aliases
            .iter()
            .find(|(_, edges)| edges.as_slice() == cycle.edges())
            .map(|(a, _)| a.as_str())
    }

    /// Resolves a cycle argument: a declared alias, or whitespace-separated edge ids.
    pub fn parse_cycle(&self, text: &str) -> Result<Cycle> {
        let text = text.trim();
        if let Some((_, edges)) = self.aliases.iter().find(|(a, _)| a == text) {
            return Cycle::new(self, edges.clone());
        }
        let edges = text
            .split_whitespace()
            .map(|e| self.edge_id(e))
            .collect::<Result<Vec<_>>>()?;
        if edges.is_empty() {
            return Err(Error::NotACycle(text.to_string()));
        }
        Cycle::new(self, edges)
    }

    /// Parses whitespace-separated edge ids, or a single vertex id, as a path.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if let [single] = tokens.as_slice() {
            if let Some(Atom::Vertex(v)) = self.lookup(single) {
                return Ok(Path::vertex(v));
            }
        }
        let edges = tokens
            .iter()
            .map(|e| self.edge_id(e))
            .collect::<Result<Vec<_>>>()?;
        Path::from_edges(self, edges)
    }

    pub fn render_path(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            self.vertex_name(p.source).to_string()
        } else {
            p.edges
                .iter()
                .map(|e| self.edge_name(*e))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Whether a path (possibly of length zero) runs from `u` to `v`.
    pub fn reachable(&self, u: VertexId, v: VertexId) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([u]);
        seen[u.0] = true;
        while let Some(x) = queue.pop_front() {
            if x == v {
                return true;
            }
            for &e in self.out_edges(x) {
                let y = self.range(e);
                if !seen[y.0] {
                    seen[y.0] = true;
                    queue.push_back(y);
                }
            }
        }
        false
    }

    /// Vertices from which `target` is reachable.
    pub fn coreachable_set(&self, target: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([target]);
        seen[target.0] = true;
        while let Some(x) = queue.pop_front() {
            for &e in self.in_edges(x) {
                let y = self.source(e);
                if !seen[y.0] {
                    seen[y.0] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Every cycle, one per rotation class, each rotated to its canonical key.
    ///
    /// Simple closed walks are enumerated from their least vertex, visiting
    /// only larger vertices, so each class is produced exactly once.
    pub fn find_cycles(&self) -> Vec<Cycle> {
        let mut found = Vec::new();
        for start in self.vertices() {
            let mut on_path = vec![false; self.vertex_count()];
            let mut stack = Vec::new();
            self.cycle_dfs(start, start, &mut on_path, &mut stack, &mut found);
        }
        let mut cycles: Vec<Cycle> = found
            .into_iter()
            .map(|edges| Cycle {
                path: Path::from_edges(self, edges).expect("enumerated walk composes"),
            })
            .map(|c| c.canonical(self))
            .collect();
        cycles.sort_by_key(|c| c.key());
        cycles
    }

    fn cycle_dfs(
        &self,
        start: VertexId,
        at: VertexId,
        on_path: &mut [bool],
        stack: &mut Vec<EdgeId>,
        found: &mut Vec<Vec<EdgeId>>,
    ) {
        on_path[at.0] = true;
        for &e in self.out_edges(at) {
            let next = self.range(e);
            if next == start {
                let mut cycle = stack.clone();
                cycle.push(e);
                found.push(cycle);
            } else if next > start && !on_path[next.0] {
                stack.push(e);
                self.cycle_dfs(start, next, on_path, stack, found);
                stack.pop();
            }
        }
        on_path[at.0] = false;
    }

    /// Checks that `c` is made of edges of this graph and is closed with distinct sources.
    pub fn check_cycle(&self, c: &Cycle) -> Result<()> {
        if c.edges().iter().any(|e| e.0 >= self.edge_count()) {
            return Err(Error::NotACycleOfGraph(format!("{:?}", c.edges())));
        }
        Cycle::new(self, c.edges().to_vec())
            .map(|_| ())
            .map_err(|_| Error::NotACycleOfGraph(self.render_path(c.path())))
    }

    /// True iff no vertex of `c` lies on a cycle outside the rotation class of `c`.
    pub fn is_exclusive(&self, c: &Cycle) -> Result<bool> {
        self.check_cycle(c)?;
        Ok(self.is_exclusive_among(c, &self.find_cycles()))
    }

    pub(crate) fn is_exclusive_among(&self, c: &Cycle, cycles: &[Cycle]) -> bool {
        let verts: HashSet<VertexId> = c.vertices(self).into_iter().collect();
        let key = c.key();
        cycles
            .iter()
            .filter(|other| other.vertices(self).iter().any(|v| verts.contains(v)))
            .all(|other| other.key() == key)
    }
}

/// A finite path: a vertex (length 0) or a composable edge sequence.
///
/// The derived ordering compares the source first, then the edge sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    source: VertexId,
    range: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Path {
        Path {
            source: v,
            range: v,
            edges: Vec::new(),
        }
    }

    pub fn edge(g: &Graph, e: EdgeId) -> Path {
        Path {
            source: g.source(e),
            range: g.range(e),
            edges: vec![e],
        }
    }

    /// Nonempty edge sequence; fails with `NotComposable` at the first bad junction.
    pub fn from_edges(g: &Graph, edges: Vec<EdgeId>) -> Result<Path> {
        let (first, last) = match (edges.first(), edges.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => return Err(Error::NotACycle("empty edge sequence".into())),
        };
        for w in edges.windows(2) {
            if g.range(w[0]) != g.source(w[1]) {
                return Err(Error::NotComposable {
                    left: g.edge_name(w[0]).to_string(),
                    right: g.edge_name(w[1]).to_string(),
                });
            }
        }
        Ok(Path {
            source: g.source(first),
            range: g.range(last),
            edges,
        })
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    pub fn concat(&self, other: &Path, g: &Graph) -> Result<Path> {
        if self.range != other.source {
            return Err(Error::NotComposable {
                left: g.render_path(self),
                right: g.render_path(other),
            });
        }
        Ok(self.concat_unchecked(other))
    }

    pub(crate) fn concat_unchecked(&self, other: &Path) -> Path {
        debug_assert_eq!(self.range, other.source);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path {
            source: self.source,
            range: other.range,
            edges,
        }
    }

    /// The subpath made of edges `from..to`.
    pub(crate) fn slice(&self, g: &Graph, from: usize, to: usize) -> Path {
        if from == to {
            let v = if from == 0 {
                self.source
            } else {
                g.range(self.edges[from - 1])
            };
            return Path::vertex(v);
        }
        Path {
            source: g.source(self.edges[from]),
            range: g.range(self.edges[to - 1]),
            edges: self.edges[from..to].to_vec(),
        }
    }

    /// Whether `self` is a prefix of `other` (vertex paths included).
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.source == other.source && other.edges.starts_with(&self.edges)
    }

    pub fn is_suffix_of(&self, other: &Path) -> bool {
        self.range == other.range && other.edges.ends_with(&self.edges)
    }

    pub fn count_edge(&self, e: EdgeId) -> usize {
        self.edges.iter().filter(|&&x| x == e).count()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityWitness {
    pub divisor: Path,
    pub quotient: Path,
    pub side: Side,
}

/// Witness that `lambda = mu·quotient` (left) or `lambda = quotient·mu` (right).
pub fn divides(g: &Graph, mu: &Path, lambda: &Path, side: Side) -> Option<DivisibilityWitness> {
    let quotient = match side {
        Side::Left if mu.is_prefix_of(lambda) => lambda.slice(g, mu.len(), lambda.len()),
        Side::Right if mu.is_suffix_of(lambda) => lambda.slice(g, 0, lambda.len() - mu.len()),
        _ => return None,
    };
    Some(DivisibilityWitness {
        divisor: mu.clone(),
        quotient,
        side,
    })
}

/// A closed path with pairwise distinct edge sources, kept with its given first edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cycle {
    path: Path,
}

impl Cycle {
    pub fn new(g: &Graph, edges: Vec<EdgeId>) -> Result<Cycle> {
        let display = || {
            edges
                .iter()
                .map(|e| g.edge_name(*e))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let path = Path::from_edges(g, edges.clone()).map_err(|_| Error::NotACycle(display()))?;
        if path.source != path.range {
            return Err(Error::NotACycle(display()));
        }
        let mut sources = HashSet::new();
        if !path.edges.iter().all(|e| sources.insert(g.source(*e))) {
            return Err(Error::NotACycle(display()));
        }
        Ok(Cycle { path })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.path.edges
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn base(&self) -> VertexId {
        self.path.source
    }

    pub fn first_edge(&self) -> EdgeId {
        self.path.edges[0]
    }

    /// Least rotation of the edge sequence.
    pub fn key(&self) -> Vec<EdgeId> {
        let n = self.len();
        (0..n)
            .map(|r| self.rotated_edges(r))
            .min()
            .expect("cycles are nonempty")
    }

    fn rotated_edges(&self, r: usize) -> Vec<EdgeId> {
        let e = self.edges();
        e[r..].iter().chain(e[..r].iter()).copied().collect()
    }

    /// The rotation starting with the least edge.
    pub fn canonical(&self, g: &Graph) -> Cycle {
        Cycle {
            path: Path::from_edges(g, self.key()).expect("rotation of a cycle composes"),
        }
    }

    /// The rotation starting at edge index `r`.
    pub fn rotate(&self, g: &Graph, r: usize) -> Cycle {
        Cycle {
            path: Path::from_edges(g, self.rotated_edges(r % self.len()))
                .expect("rotation of a cycle composes"),
        }
    }

    pub fn same_class(&self, other: &Cycle) -> bool {
        self.len() == other.len() && self.key() == other.key()
    }

    /// Vertices visited by the cycle, starting at the base.
    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        self.path.edges.iter().map(|e| g.source(*e)).collect()
    }

    /// `e^k` as a path; `k = 0` gives the base vertex.
    pub fn power(&self, k: usize) -> Path {
        let mut edges = Vec::with_capacity(k * self.len());
        for _ in 0..k {
            edges.extend_from_slice(self.edges());
        }
        Path {
            source: self.base(),
            range: self.base(),
            edges,
        }
    }
}

/// Removes the largest power `e^k` from the right of `mu`.
pub fn strip_cycle_power(g: &Graph, mu: &Path, e: &Cycle) -> Result<(Path, usize)> {
    if mu.range() != e.base() {
        return Err(Error::RangeMismatch {
            path: g.render_path(mu),
            vertex: g.vertex_name(e.base()).to_string(),
        });
    }
    let n = e.len();
    let mut end = mu.len();
    let mut k = 0;
    while end >= n && &mu.edges[end - n..end] == e.edges() {
        end -= n;
        k += 1;
    }
    Ok((mu.slice(g, 0, end), k))
}

/// Parses the line-oriented graph format:
///
/// ```text
/// vertex <id> [<id> ...]
/// edge <edge-id> <source-id> <target-id>
/// cycle <alias> <edge-id> [<edge-id> ...]
/// ```
///
/// `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut g = Graph::build(Vec::<String>::new(), Vec::new())?;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut words = Vec::new();
        let mut offset = 0;
        for w in line.split_whitespace() {
            let col = line[offset..].find(w).map(|i| i + offset).unwrap_or(0);
            offset = col + w.len();
            words.push((col + 1, w));
        }
        let Some(&(col, directive)) = words.first() else {
            continue;
        };
        let at = |col: usize, err: Error| Error::syntax(line_no, col, err.to_string());
        match directive {
            "vertex" => {
                if words.len() < 2 {
                    return Err(Error::syntax(line_no, col, "`vertex` needs at least one id"));
                }
                for &(c, v) in &words[1..] {
                    g.add_vertex(v).map_err(|e| at(c, e))?;
                }
            }
            "edge" => {
                if words.len() != 4 {
                    return Err(Error::syntax(
                        line_no,
                        col,
                        "expected `edge <edge-id> <source-id> <target-id>`",
                    ));
                }
                g.add_edge(words[1].1, words[2].1, words[3].1)
                    .map_err(|e| at(words[1].0, e))?;
            }
            "cycle" => {
                if words.len() < 3 {
                    return Err(Error::syntax(
                        line_no,
                        col,
                        "expected `cycle <alias> <edge-id> ...`",
                    ));
                }
                let edges: Vec<&str> = words[2..].iter().map(|(_, w)| *w).collect();
                g.add_cycle_alias(words[1].1, &edges)
                    .map_err(|e| at(words[1].0, e))?;
            }
            other => {
                return Err(Error::syntax(
                    line_no,
                    col,
                    format!("unknown directive `{other}`"),
                ))
            }
        }
    }
    Ok(g)
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}
