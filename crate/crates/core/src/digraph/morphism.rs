use std::collections::BTreeMap;
use std::fmt;

use super::graph::{DiGraph, UndirectedGraph};
use crate::error::{Error, Result};

/// First edge at which a candidate morphism breaks the adjacency relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyViolation {
    pub edge: String,
    pub image: String,
    pub expected: (String, String),
    pub found: (String, String),
}

impl fmt::Display for AdjacencyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "edge `{}` maps to `{}` with boundary ({}, {}) but its endpoints map to ({}, {})",
            self.edge, self.image, self.found.0, self.found.1, self.expected.0, self.expected.1
        )
    }
}

/// A morphism of directed graphs `(p, q)`.
///
/// Construction through [`GraphMorphism::new`] checks totality and the
/// adjacency relation; [`GraphMorphism::unchecked`] only checks ranges so that
/// invalid candidates can be represented and reported by [`GraphMorphism::validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    source: DiGraph,
    target: DiGraph,
    p: Vec<usize>,
    q: Vec<usize>,
}

impl GraphMorphism {
    pub fn new(source: DiGraph, target: DiGraph, p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        let m = Self::unchecked(source, target, p, q)?;
        m.validate().map_err(|v| Error::domain(format!("not a graph morphism: {v}")))?;
        Ok(m)
    }

    /// Builds a morphism without checking the adjacency relation.
    pub fn unchecked(source: DiGraph, target: DiGraph, p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        if p.len() != source.vertex_count() {
            return Err(Error::domain("vertex map is not total on the source"));
        }
        if q.len() != source.edge_count() {
            return Err(Error::domain("edge map is not total on the source"));
        }
        if p.iter().any(|&v| v >= target.vertex_count()) || q.iter().any(|&e| e >= target.edge_count()) {
            return Err(Error::domain("map leaves the target graph"));
        }
        Ok(GraphMorphism { source, target, p, q })
    }

    /// Builds a candidate morphism from id-keyed maps; missing keys are a domain error.
    pub fn from_ids(
        source: DiGraph,
        target: DiGraph,
        p: &BTreeMap<String, String>,
        q: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let pv = source
            .vertices()
            .iter()
            .map(|v| {
                let img = p.get(v).ok_or_else(|| Error::domain(format!("vertex map undefined at `{v}`")))?;
                target.require_vertex(img)
            })
            .collect::<Result<Vec<_>>>()?;
        let qe = source
            .edges()
            .iter()
            .map(|e| {
                let img = q.get(&e.id).ok_or_else(|| Error::domain(format!("edge map undefined at `{}`", e.id)))?;
                target.require_edge(img)
            })
            .collect::<Result<Vec<_>>>()?;
        for k in p.keys() {
            source.require_vertex(k)?;
        }
        for k in q.keys() {
            source.require_edge(k)?;
        }
        Self::unchecked(source, target, pv, qe)
    }

    pub fn identity(g: &DiGraph) -> Self {
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            p: (0..g.vertex_count()).collect(),
            q: (0..g.edge_count()).collect(),
        }
    }

    pub fn source(&self) -> &DiGraph {
        &self.source
    }

    pub fn target(&self) -> &DiGraph {
        &self.target
    }

    pub fn p(&self, v: usize) -> usize {
        self.p[v]
    }

    pub fn q(&self, e: usize) -> usize {
        self.q[e]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.p
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.q
    }

    /// Vertex map keyed by ids.
    pub fn p_ids(&self) -> BTreeMap<String, String> {
        self.p
            .iter()
            .enumerate()
            .map(|(v, &w)| (self.source.vertex(v).to_string(), self.target.vertex(w).to_string()))
            .collect()
    }

    /// Edge map keyed by ids.
    pub fn q_ids(&self) -> BTreeMap<String, String> {
        self.q
            .iter()
            .enumerate()
            .map(|(e, &f)| (self.source.edge(e).id.clone(), self.target.edge(f).id.clone()))
            .collect()
    }

    /// Checks `p∘s = s∘q` and `p∘t = t∘q`, reporting the first offending edge.
    pub fn validate(&self) -> Result<(), AdjacencyViolation> {
        for (i, e) in self.source.edges().iter().enumerate() {
            let img = self.q[i];
            let (s, t) = self.target.boundary(img);
            let (ps, pt) = (self.p[e.src], self.p[e.dst]);
            if (s, t) != (ps, pt) {
                return Err(AdjacencyViolation {
                    edge: e.id.clone(),
                    image: self.target.edge(img).id.clone(),
                    expected: (self.target.vertex(ps).to_string(), self.target.vertex(pt).to_string()),
                    found: (self.target.vertex(s).to_string(), self.target.vertex(t).to_string()),
                });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism> {
        if self.target != next.source {
            return Err(Error::domain("composition of morphisms with mismatched graphs"));
        }
        Ok(GraphMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            p: self.p.iter().map(|&v| next.p[v]).collect(),
            q: self.q.iter().map(|&e| next.q[e]).collect(),
        })
    }

    pub fn is_vertex_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.vertex_count()];
        self.p.iter().for_each(|&v| hit[v] = true);
        hit.into_iter().all(|b| b)
    }

    pub fn is_edge_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.edge_count()];
        self.q.iter().for_each(|&e| hit[e] = true);
        hit.into_iter().all(|b| b)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.vertex_count() == self.target.vertex_count()
            && self.source.edge_count() == self.target.edge_count()
            && self.is_vertex_surjective()
            && self.is_edge_surjective()
    }

    /// Preimage lists of every target vertex.
    pub fn vertex_fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.target.vertex_count()];
        for (v, &w) in self.p.iter().enumerate() {
            fibers[w].push(v);
        }
        fibers
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<GraphMorphism> {
        if !self.is_isomorphism() {
            return Err(Error::domain("morphism is not invertible"));
        }
        let mut p = vec![0; self.target.vertex_count()];
        let mut q = vec![0; self.target.edge_count()];
        self.p.iter().enumerate().for_each(|(v, &w)| p[w] = v);
        self.q.iter().enumerate().for_each(|(e, &f)| q[f] = e);
        Ok(GraphMorphism { source: self.target.clone(), target: self.source.clone(), p, q })
    }

    /// Same maps viewed between the opposite graphs.
    pub fn opposite(&self) -> GraphMorphism {
        GraphMorphism {
            source: super::ops::opposite(&self.source),
            target: super::ops::opposite(&self.target),
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }
}

impl fmt::Debug for GraphMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphMorphism").field("p", &self.p_ids()).field("q", &self.q_ids()).finish()
    }
}

/// A morphism of undirected graphs: `∂(q(e)) = p(∂(e))` as sets.
#[derive(Clone, PartialEq, Eq)]
pub struct UndirectedMorphism {
    source: UndirectedGraph,
    target: UndirectedGraph,
    p: Vec<usize>,
    q: Vec<usize>,
}

impl UndirectedMorphism {
    pub fn new(source: UndirectedGraph, target: UndirectedGraph, p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        let m = Self::unchecked(source, target, p, q)?;
        if let Some(e) = m.first_violation() {
            return Err(Error::domain(format!("not an undirected morphism at edge `{}`", m.source.edge(e).id)));
        }
        Ok(m)
    }

    pub fn unchecked(source: UndirectedGraph, target: UndirectedGraph, p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        if p.len() != source.vertex_count() || q.len() != source.edge_count() {
            return Err(Error::domain("map is not total on the source"));
        }
        if p.iter().any(|&v| v >= target.vertex_count()) || q.iter().any(|&e| e >= target.edge_count()) {
            return Err(Error::domain("map leaves the target graph"));
        }
        Ok(UndirectedMorphism { source, target, p, q })
    }

    pub fn from_ids(
        source: UndirectedGraph,
        target: UndirectedGraph,
        p: &BTreeMap<String, String>,
        q: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let pv = source
            .vertices()
            .iter()
            .map(|v| {
                let img = p.get(v).ok_or_else(|| Error::domain(format!("vertex map undefined at `{v}`")))?;
                target.require_vertex(img)
            })
            .collect::<Result<Vec<_>>>()?;
        let qe = source
            .edges()
            .iter()
            .map(|e| {
                let img = q.get(&e.id).ok_or_else(|| Error::domain(format!("edge map undefined at `{}`", e.id)))?;
                target.require_edge(img)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::unchecked(source, target, pv, qe)
    }

    pub fn identity(g: &UndirectedGraph) -> Self {
        UndirectedMorphism {
            source: g.clone(),
            target: g.clone(),
            p: (0..g.vertex_count()).collect(),
            q: (0..g.edge_count()).collect(),
        }
    }

    pub fn source(&self) -> &UndirectedGraph {
        &self.source
    }

    pub fn target(&self) -> &UndirectedGraph {
        &self.target
    }

    pub fn p(&self, v: usize) -> usize {
        self.p[v]
    }

    pub fn q(&self, e: usize) -> usize {
        self.q[e]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.p
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.q
    }

    pub fn p_ids(&self) -> BTreeMap<String, String> {
        self.p
            .iter()
            .enumerate()
            .map(|(v, &w)| (self.source.vertex(v).to_string(), self.target.vertex(w).to_string()))
            .collect()
    }

    pub fn q_ids(&self) -> BTreeMap<String, String> {
        self.q
            .iter()
            .enumerate()
            .map(|(e, &f)| (self.source.edge(e).id.clone(), self.target.edge(f).id.clone()))
            .collect()
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.source.edges().iter().enumerate().find_map(|(i, e)| {
            let (a, b) = (self.p[e.ends.0], self.p[e.ends.1]);
            let image = if a <= b { (a, b) } else { (b, a) };
            (self.target.edge(self.q[i]).unordered() != image).then_some(i)
        })
    }

    pub fn is_valid(&self) -> bool {
        self.first_violation().is_none()
    }

    pub fn then(&self, next: &UndirectedMorphism) -> Result<UndirectedMorphism> {
        if self.target != next.source {
            return Err(Error::domain("composition of morphisms with mismatched graphs"));
        }
        Ok(UndirectedMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            p: self.p.iter().map(|&v| next.p[v]).collect(),
            q: self.q.iter().map(|&e| next.q[e]).collect(),
        })
    }

    pub fn is_vertex_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.vertex_count()];
        self.p.iter().for_each(|&v| hit[v] = true);
        hit.into_iter().all(|b| b)
    }
}

impl fmt::Debug for UndirectedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UndirectedMorphism").field("p", &self.p_ids()).field("q", &self.q_ids()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> DiGraph {
        DiGraph::new(["a", "b"], [("ab", "a", "b"), ("ba", "b", "a")]).unwrap()
    }

    #[test]
    fn identity_is_valid() {
        assert!(GraphMorphism::identity(&c2()).is_valid());
    }

    #[test]
    fn reports_first_offending_edge() {
        let g = c2();
        let m = GraphMorphism::unchecked(g.clone(), g, vec![0, 1], vec![1, 1]).unwrap();
        let v = m.validate().unwrap_err();
        assert_eq!(v.edge, "ab");
        assert_eq!(v.image, "ba");
    }

    #[test]
    fn partial_maps_are_domain_errors() {
        let g = c2();
        let p = BTreeMap::from([("a".to_string(), "a".to_string())]);
        let q = BTreeMap::new();
        assert!(matches!(GraphMorphism::from_ids(g.clone(), g, &p, &q), Err(Error::Domain(_))));
    }

    #[test]
    fn fork_epimorphism_is_a_morphism() {
        let src = DiGraph::new(["u0", "u1", "v0", "v2"], [("a", "u0", "u1"), ("b", "v0", "v2")]).unwrap();
        let dst = DiGraph::new(["w0", "w1", "w2"], [("c", "w0", "w1"), ("d", "w0", "w2")]).unwrap();
        let m = GraphMorphism::new(src, dst, vec![0, 1, 0, 2], vec![0, 1]).unwrap();
        assert!(m.is_vertex_surjective() && m.is_edge_surjective());
    }

    #[test]
    fn composition_and_inverse() {
        let g = c2();
        let swap = GraphMorphism::new(g.clone(), g.clone(), vec![1, 0], vec![1, 0]).unwrap();
        let twice = swap.then(&swap).unwrap();
        assert_eq!(twice, GraphMorphism::identity(&g));
        assert_eq!(swap.inverse().unwrap(), swap);
    }
}
