//! Finite directed multigraphs with named vertices and edges.
//!
//! Identifiers are opaque strings. A [`Graph`] keeps its vertices and edges
//! sorted by identifier, so two graphs with the same items compare equal
//! regardless of the order in which they were declared, and every index-based
//! map between graphs is reproducible.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct EdgeRecord {
    id: String,
    src: usize,
    tgt: usize,
}

/// A finite directed multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
}

/// Borrowed view of one edge, with endpoint identifiers resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRef<'a> {
    pub id: &'a str,
    pub src: &'a str,
    pub tgt: &'a str,
}

/// A vertex or an edge, named by identifier. Used in reports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Vertex(String),
    Edge(String),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Vertex(v) => write!(f, "vertex `{v}`"),
            Item::Edge(e) => write!(f, "edge `{e}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    DanglingEdge { edge: String, vertex: String },
}

impl Graph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex ids and `(id, src, tgt)` edge triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut builder = GraphBuilder::new();
        let mut names = std::collections::HashMap::new();
        for v in vertices {
            let v = v.into();
            if names.contains_key(&v) {
                return Err(GraphError::DuplicateVertex(v));
            }
            let idx = builder.add_vertex(v.clone());
            names.insert(v, idx);
        }
        for (id, src, tgt) in edges {
            let (id, src, tgt) = (id.into(), src.into(), tgt.into());
            let s = *names.get(&src).ok_or_else(|| GraphError::DanglingEdge {
                edge: id.clone(),
                vertex: src.clone(),
            })?;
            let t = *names.get(&tgt).ok_or_else(|| GraphError::DanglingEdge {
                edge: id.clone(),
                vertex: tgt.clone(),
            })?;
            builder.add_edge(id, s, t);
        }
        Ok(builder.finish()?.graph)
    }

    /// The discrete graph on the given vertices.
    pub fn discrete<V>(vertices: V) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
    {
        Self::new(vertices, Vec::<(String, String, String)>::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn edge(&self, j: usize) -> &str {
        &self.edges[j].id
    }

    pub fn src(&self, j: usize) -> usize {
        self.edges[j].src
    }

    pub fn tgt(&self, j: usize) -> usize {
        self.edges[j].tgt
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn vertex_ids(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.vertices.iter().map(String::as_str)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = EdgeRef<'_>> + '_ {
        self.edges.iter().map(move |e| EdgeRef {
            id: &e.id,
            src: &self.vertices[e.src],
            tgt: &self.vertices[e.tgt],
        })
    }

    /// Number of edges with the given endpoints.
    pub fn multiplicity(&self, src: usize, tgt: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.src == src && e.tgt == tgt)
            .count()
    }

    /// `(out-degree, in-degree, loops)` of a vertex; loops count once in each degree.
    pub fn degree_signature(&self, v: usize) -> (usize, usize, usize) {
        let mut out = 0;
        let mut inc = 0;
        let mut loops = 0;
        for e in &self.edges {
            if e.src == v {
                out += 1;
            }
            if e.tgt == v {
                inc += 1;
            }
            if e.src == v && e.tgt == v {
                loops += 1;
            }
        }
        (out, inc, loops)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.src == e.tgt).count()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, " |")?;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {}: {} -> {}", e.id, e.src, e.tgt)?;
        }
        write!(f, " }}")
    }
}

/// Incremental graph construction by insertion index.
///
/// Vertices and edges are referred to by the order in which they were added;
/// [`GraphBuilder::finish`] returns where each one landed in the sorted graph.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, usize, usize)>,
}

/// Output of [`GraphBuilder::finish`].
#[derive(Debug, Clone)]
pub struct Built {
    pub graph: Graph,
    /// `vertex_pos[i]` is the index in `graph` of the i-th added vertex.
    pub vertex_pos: Vec<usize>,
    pub edge_pos: Vec<usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> usize {
        self.vertices.push(id.into());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, id: impl Into<String>, src: usize, tgt: usize) -> usize {
        self.edges.push((id.into(), src, tgt));
        self.edges.len() - 1
    }

    pub fn finish(self) -> Result<Built, GraphError> {
        let mut vorder: Vec<usize> = (0..self.vertices.len()).collect();
        vorder.sort_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]));
        let mut vertex_pos = vec![0; self.vertices.len()];
        for (pos, &i) in vorder.iter().enumerate() {
            if pos > 0 && self.vertices[vorder[pos - 1]] == self.vertices[i] {
                return Err(GraphError::DuplicateVertex(self.vertices[i].clone()));
            }
            vertex_pos[i] = pos;
        }
        let mut eorder: Vec<usize> = (0..self.edges.len()).collect();
        eorder.sort_by(|&a, &b| self.edges[a].0.cmp(&self.edges[b].0));
        let mut edge_pos = vec![0; self.edges.len()];
        for (pos, &j) in eorder.iter().enumerate() {
            if pos > 0 && self.edges[eorder[pos - 1]].0 == self.edges[j].0 {
                return Err(GraphError::DuplicateEdge(self.edges[j].0.clone()));
            }
            edge_pos[j] = pos;
        }
        let vertices = vorder.iter().map(|&i| self.vertices[i].clone()).collect();
        let edges = eorder
            .iter()
            .map(|&j| {
                let (id, s, t) = &self.edges[j];
                EdgeRecord {
                    id: id.clone(),
                    src: vertex_pos[*s],
                    tgt: vertex_pos[*t],
                }
            })
            .collect();
        Ok(Built {
            graph: Graph { vertices, edges },
            vertex_pos,
            edge_pos,
        })
    }
}

/// Hands out identifiers that are unique within one graph under construction.
///
/// A requested label that is already taken gets primes appended until it is free.
#[derive(Debug, Default)]
pub(crate) struct FreshIds {
    used: HashSet<String>,
}

impl FreshIds {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn take(&mut self, label: &str) -> String {
        let mut candidate = label.to_owned();
        while self.used.contains(&candidate) {
            candidate.push('\'');
        }
        self.used.insert(candidate.clone());
        candidate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn items_are_sorted_by_id() {
        let g = Graph::new(["b", "a"], [("y", "a", "b"), ("x", "b", "a")]).unwrap();
        assert_eq!(g.vertex_ids().collect::<Vec<_>>(), ["a", "b"]);
        let e: Vec<_> = g.edges().map(|e| (e.id, e.src, e.tgt)).collect();
        assert_eq!(e, [("x", "b", "a"), ("y", "a", "b")]);
        let h = Graph::new(["a", "b"], [("x", "b", "a"), ("y", "a", "b")]).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn rejects_duplicates_and_dangling_edges() {
        assert_eq!(
            Graph::discrete(["a", "a"]),
            Err(GraphError::DuplicateVertex("a".into()))
        );
        assert_eq!(
            Graph::new(["a"], [("e", "a", "a"), ("e", "a", "a")]),
            Err(GraphError::DuplicateEdge("e".into()))
        );
        assert!(matches!(
            Graph::new(["a"], [("e", "a", "z")]),
            Err(GraphError::DanglingEdge { .. })
        ));
    }

    #[test]
    fn fresh_ids_prime_collisions() {
        let mut ids = FreshIds::new();
        assert_eq!(ids.take("a"), "a");
        assert_eq!(ids.take("a"), "a'");
        assert_eq!(ids.take("a"), "a''");
    }

    #[test]
    fn degree_signature_counts_loops() {
        let g = Graph::new(["a", "b"], [("l", "a", "a"), ("e", "a", "b")]).unwrap();
        assert_eq!(g.degree_signature(0), (2, 1, 1));
        assert_eq!(g.degree_signature(1), (0, 1, 0));
        assert_eq!(g.loop_count(), 1);
    }
}
