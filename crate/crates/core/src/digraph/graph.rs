use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// An edge record with dense endpoint indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// Finite directed multigraph with explicit edge identities.
///
/// Vertex and edge ids are opaque strings; internally every vertex and edge
/// is addressed by its position, which is stable for the lifetime of the
/// value. Loops and parallel edges are allowed.
#[derive(Clone)]
pub struct DiGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl DiGraph {
    /// Builds a graph from vertex ids and `(edge id, source id, target id)` triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut indexed = Vec::new();
        for (id, src, dst) in edges {
            let (src, dst) = (src.into(), dst.into());
            let s = *vertex_index.get(&src).ok_or(Error::UnknownVertex(src))?;
            let t = *vertex_index.get(&dst).ok_or(Error::UnknownVertex(dst))?;
            indexed.push(Edge { id: id.into(), src: s, dst: t });
        }
        Self::from_indexed(vertices, indexed)
    }

    /// Builds a graph from vertex ids and edges whose endpoints are indices into `vertices`.
    pub fn from_indexed(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let n = vertices.len();
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                return Err(Error::domain(format!("edge `{}` has an endpoint out of range", e.id)));
            }
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::DuplicateEdge(e.id.clone()));
            }
            out_adj[e.src].push(i);
            in_adj[e.dst].push(i);
        }
        Ok(DiGraph { vertices, edges, vertex_index, edge_index, out_adj, in_adj })
    }

    pub fn empty() -> Self {
        Self::from_indexed(Vec::new(), Vec::new()).expect("empty graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub(crate) fn require_vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub(crate) fn require_edge(&self, id: &str) -> Result<usize> {
        self.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn src(&self, e: usize) -> usize {
        self.edges[e].src
    }

    pub fn dst(&self, e: usize) -> usize {
        self.edges[e].dst
    }

    /// Ordered boundary `(source, target)` of an edge.
    pub fn boundary(&self, e: usize) -> (usize, usize) {
        (self.edges[e].src, self.edges[e].dst)
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|e| seen.insert((e.src, e.dst)))
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// Weakly connected components as sorted vertex lists, ordered by least vertex.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![start];
            comp[start] = c;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &e in self.out_adj[v].iter().chain(&self.in_adj[v]) {
                    let w = if self.edges[e].src == v { self.edges[e].dst } else { self.edges[e].src };
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().len() <= 1
    }
}

impl PartialEq for DiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for DiGraph {}

impl fmt::Debug for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> =
            self.edges.iter().map(|e| format!("{}:{}->{}", e.id, self.vertices[e.src], self.vertices[e.dst])).collect();
        f.debug_struct("DiGraph").field("vertices", &self.vertices).field("edges", &edges).finish()
    }
}

/// Undirected edge; `ends.0 == ends.1` encodes a loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UEdge {
    pub id: String,
    pub ends: (usize, usize),
}

impl UEdge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    /// Endpoints as an unordered pair, smaller index first.
    pub fn unordered(&self) -> (usize, usize) {
        let (a, b) = self.ends;
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

/// Finite undirected multigraph; loops are edges with a singleton boundary.
#[derive(Clone)]
pub struct UndirectedGraph {
    vertices: Vec<String>,
    edges: Vec<UEdge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    incident: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Builds a graph from vertex ids and `(edge id, end, end)` triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index: HashMap<String, usize> = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut indexed = Vec::new();
        for (id, a, b) in edges {
            let (a, b) = (a.into(), b.into());
            let x = *index.get(&a).ok_or(Error::UnknownVertex(a))?;
            let y = *index.get(&b).ok_or(Error::UnknownVertex(b))?;
            indexed.push(UEdge { id: id.into(), ends: (x, y) });
        }
        Self::from_indexed(vertices, indexed)
    }

    pub fn from_indexed(vertices: Vec<String>, edges: Vec<UEdge>) -> Result<Self> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let n = vertices.len();
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut incident = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.ends.0 >= n || e.ends.1 >= n {
                return Err(Error::domain(format!("edge `{}` has an endpoint out of range", e.id)));
            }
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::DuplicateEdge(e.id.clone()));
            }
            incident[e.ends.0].push(i);
            if !e.is_loop() {
                incident[e.ends.1].push(i);
            }
        }
        Ok(UndirectedGraph { vertices, edges, vertex_index, edge_index, incident })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[UEdge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &UEdge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub(crate) fn require_vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub(crate) fn require_edge(&self, id: &str) -> Result<usize> {
        self.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Edges incident to `v`; a loop is listed once.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Number of edge-ends at `v` (a loop contributes two).
    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].iter().map(|&e| if self.edges[e].is_loop() { 2 } else { 1 }).sum()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_loop()).count()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let c = out.len();
            comp[start] = c;
            let mut members = vec![start];
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &e in &self.incident[v] {
                    let w = self.edges[e].other(v);
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Restriction to a vertex subset, keeping edges with both ends inside.
    pub fn induced(&self, keep: &[usize]) -> UndirectedGraph {
        let mut map = vec![usize::MAX; self.vertex_count()];
        let vertices: Vec<String> = keep
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                map[v] = i;
                self.vertices[v].clone()
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| map[e.ends.0] != usize::MAX && map[e.ends.1] != usize::MAX)
            .map(|e| UEdge { id: e.id.clone(), ends: (map[e.ends.0], map[e.ends.1]) })
            .collect();
        UndirectedGraph::from_indexed(vertices, edges).expect("restriction of a valid graph")
    }

    /// Length of a shortest cycle; loops have length 1 and parallel edges 2.
    /// `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        if self.edges.iter().any(UEdge::is_loop) {
            return Some(1);
        }
        let mut pairs = std::collections::HashSet::new();
        if !self.edges.iter().all(|e| pairs.insert(e.unordered())) {
            return Some(2);
        }
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for root in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut via = vec![usize::MAX; n];
            dist[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &e in &self.incident[v] {
                    if e == via[v] {
                        continue;
                    }
                    let w = self.edges[e].other(v);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    } else {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

impl PartialEq for UndirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges.len() == other.edges.len()
            && self.edges.iter().zip(&other.edges).all(|(a, b)| a.id == b.id && a.unordered() == b.unordered())
    }
}

impl Eq for UndirectedGraph {}

impl fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}:{}-{}", e.id, self.vertices[e.ends.0], self.vertices[e.ends.1]))
            .collect();
        f.debug_struct("UndirectedGraph").field("vertices", &self.vertices).field("edges", &edges).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_endpoint_and_duplicates() {
        assert!(matches!(DiGraph::new(["a"], [("e", "a", "b")]), Err(Error::UnknownVertex(v)) if v == "b"));
        assert!(matches!(DiGraph::new(["a", "a"], Vec::<(&str, &str, &str)>::new()), Err(Error::DuplicateVertex(_))));
        assert!(matches!(DiGraph::new(["a"], [("e", "a", "a"), ("e", "a", "a")]), Err(Error::DuplicateEdge(_))));
    }

    #[test]
    fn girth_of_small_graphs() {
        let tri = UndirectedGraph::new(["a", "b", "c"], [("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")]).unwrap();
        assert_eq!(tri.girth(), Some(3));
        let path = UndirectedGraph::new(["a", "b", "c"], [("x", "a", "b"), ("y", "b", "c")]).unwrap();
        assert_eq!(path.girth(), None);
        let c4 = UndirectedGraph::new(
            ["a", "b", "c", "d"],
            [("1", "a", "b"), ("2", "b", "c"), ("3", "c", "d"), ("4", "d", "a")],
        )
        .unwrap();
        assert_eq!(c4.girth(), Some(4));
        let par = UndirectedGraph::new(["a", "b"], [("1", "a", "b"), ("2", "b", "a")]).unwrap();
        assert_eq!(par.girth(), Some(2));
    }

    #[test]
    fn loop_counts_twice_in_degree() {
        let g = UndirectedGraph::new(["a", "b"], [("l", "a", "a"), ("e", "a", "b")]).unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.incident(0).len(), 2);
    }
}
