//! Orientable genus of finite multigraphs.
//!
//! Embeddings are described by rotation systems over darts: edge `i` has the
//! dart `2i` (token `e+`) at its first end and `2i + 1` (token `e-`) at its
//! second end. A loop has both darts at the same vertex.

mod exact;
mod language;
mod planar;

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::digraph::UndirectedGraph;
use crate::error::{Error, Result};

pub use exact::{genus_exact, genus_exact_with, rotation_budget, GenusBudget, GenusResult, DEFAULT_MAX_ROTATIONS};
pub use language::{
    excised_language_graph, genus_invariance_suite, genus_monotonicity_checks, language_genus_from_certificate,
    language_genus_leq, minimal_graph_genus, restrict_certificate, InvarianceReport, LanguageBounds, LanguageGenus,
    MonotonicityReport, RestrictedEmulator,
};
pub use planar::{is_planar, Planarity};

/// Dart leaving the first end of edge `e`.
pub fn plus(e: usize) -> usize {
    2 * e
}

/// Dart leaving the second end of edge `e`.
pub fn minus(e: usize) -> usize {
    2 * e + 1
}

pub fn twin(d: usize) -> usize {
    d ^ 1
}

pub fn dart_edge(d: usize) -> usize {
    d / 2
}

/// Vertex at which a dart sits.
pub fn dart_vertex(g: &UndirectedGraph, d: usize) -> usize {
    let (a, b) = g.edge(d / 2).ends;
    if d % 2 == 0 {
        a
    } else {
        b
    }
}

/// Darts at every vertex in edge order.
pub fn darts_at(g: &UndirectedGraph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        out[e.ends.0].push(plus(i));
        out[e.ends.1].push(minus(i));
    }
    out
}

/// Cyclic order of darts around every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rotations: Vec<Vec<usize>>,
}

impl RotationSystem {
    /// Checks that every dart of `g` appears exactly once, at its own vertex.
    pub fn new(g: &UndirectedGraph, rotations: Vec<Vec<usize>>) -> Result<Self> {
        if rotations.len() != g.vertex_count() {
            return Err(Error::domain("rotation system does not list every vertex"));
        }
        let mut seen = vec![false; 2 * g.edge_count()];
        for (v, rot) in rotations.iter().enumerate() {
            for &d in rot {
                if d >= seen.len() || dart_vertex(g, d) != v {
                    return Err(Error::domain(format!("dart {} misplaced at vertex `{}`", d, g.vertex(v))));
                }
                if std::mem::replace(&mut seen[d], true) {
                    return Err(Error::domain(format!("dart {} repeated", dart_token(g, d))));
                }
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(Error::domain(format!("dart {} missing", dart_token(g, d))));
        }
        Ok(RotationSystem { rotations })
    }

    /// Rotations that list darts in edge order.
    pub fn trivial(g: &UndirectedGraph) -> Self {
        RotationSystem { rotations: darts_at(g) }
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    /// Successor of every dart in its vertex rotation.
    pub fn successors(&self, dart_count: usize) -> Vec<usize> {
        let mut succ = vec![usize::MAX; dart_count];
        for rot in &self.rotations {
            for (i, &d) in rot.iter().enumerate() {
                succ[d] = rot[(i + 1) % rot.len()];
            }
        }
        succ
    }

    /// Per-vertex token lists keyed by vertex id.
    pub fn to_tokens(&self, g: &UndirectedGraph) -> BTreeMap<String, Vec<String>> {
        self.rotations
            .iter()
            .enumerate()
            .map(|(v, rot)| (g.vertex(v).to_string(), rot.iter().map(|&d| dart_token(g, d)).collect()))
            .collect()
    }

    /// Parses per-vertex token lists; `e−` is accepted as a spelling of `e-`.
    pub fn from_tokens(g: &UndirectedGraph, tokens: &BTreeMap<String, Vec<String>>) -> Result<Self> {
        let mut rotations = vec![Vec::new(); g.vertex_count()];
        for (v, list) in tokens {
            let vi = g.require_vertex(v)?;
            rotations[vi] = list.iter().map(|t| parse_token(g, t)).collect::<Result<Vec<_>>>()?;
        }
        Self::new(g, rotations)
    }
}

pub fn dart_token(g: &UndirectedGraph, d: usize) -> String {
    format!("{}{}", g.edge(d / 2).id, if d % 2 == 0 { '+' } else { '-' })
}

fn parse_token(g: &UndirectedGraph, t: &str) -> Result<usize> {
    let (id, sign) = if let Some(id) = t.strip_suffix('+') {
        (id, 0)
    } else if let Some(id) = t.strip_suffix('-').or_else(|| t.strip_suffix('−')) {
        (id, 1)
    } else {
        return Err(Error::domain(format!("malformed dart token `{t}`")));
    };
    Ok(2 * g.require_edge(id)? + sign)
}

/// Number of faces of each length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaceVector {
    pub counts: BTreeMap<usize, usize>,
}

impl FaceVector {
    pub fn faces(&self) -> usize {
        self.counts.values().sum()
    }

    /// `Σ i·f_i`, twice the number of edges of the embedded graph.
    pub fn weighted(&self) -> usize {
        self.counts.iter().map(|(i, f)| i * f).sum()
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        FaceVector { counts: pairs.iter().copied().filter(|&(_, f)| f > 0).collect() }
    }
}

/// Faces of an embedding and the resulting genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceTrace {
    /// Faces as dart cycles.
    pub faces: Vec<Vec<usize>>,
    pub vector: FaceVector,
    /// Sum of the genera of the connected components.
    pub genus: usize,
}

/// Traces faces with the rule `next(d) = succ(twin(d))` and applies Euler's
/// relation on every connected component. An isolated vertex counts one face.
pub fn trace_faces(g: &UndirectedGraph, rot: &RotationSystem) -> FaceTrace {
    let darts = 2 * g.edge_count();
    let succ = rot.successors(darts);
    let mut seen = vec![false; darts];
    let mut faces = Vec::new();
    for start in 0..darts {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            face.push(d);
            d = succ[twin(d)];
        }
        faces.push(face);
    }
    let comps = g.components();
    let mut comp_of = vec![0; g.vertex_count()];
    for (c, members) in comps.iter().enumerate() {
        members.iter().for_each(|&v| comp_of[v] = c);
    }
    let mut f = vec![0i64; comps.len()];
    let mut e = vec![0i64; comps.len()];
    for face in &faces {
        f[comp_of[dart_vertex(g, face[0])]] += 1;
    }
    for edge in g.edges() {
        e[comp_of[edge.ends.0]] += 1;
    }
    let mut genus = 0i64;
    for (c, members) in comps.iter().enumerate() {
        let euler = members.len() as i64 - e[c] + f[c].max(1);
        debug_assert!(euler <= 2 && (2 - euler) % 2 == 0, "Euler characteristic {euler}");
        genus += (2 - euler) / 2;
    }
    let mut counts = BTreeMap::new();
    for face in &faces {
        *counts.entry(face.len()).or_insert(0) += 1;
    }
    FaceTrace { faces, vector: FaceVector { counts }, genus: genus as usize }
}

/// Simple graph left after dropping loops and all but the first of every
/// set of parallel edges. Parallel edges and loops never change the genus.
pub(crate) struct Reduction {
    pub simple: UndirectedGraph,
    /// Edge of the original graph behind each simple edge.
    pub rep: Vec<usize>,
    /// `(parallel edge, its representative)` in the original graph.
    pub parallels: Vec<(usize, usize)>,
    pub loops: Vec<usize>,
}

impl Reduction {
    pub fn new(g: &UndirectedGraph) -> Self {
        let mut first: std::collections::HashMap<(usize, usize), usize> = std::collections::HashMap::new();
        let (mut rep, mut parallels, mut loops, mut edges) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (i, e) in g.edges().iter().enumerate() {
            if e.is_loop() {
                loops.push(i);
            } else if let Some(&r) = first.get(&e.unordered()) {
                parallels.push((i, r));
            } else {
                first.insert(e.unordered(), i);
                rep.push(i);
                edges.push(e.clone());
            }
        }
        let simple = UndirectedGraph::from_indexed(g.vertices().to_vec(), edges).expect("subset of a valid graph");
        Reduction { simple, rep, parallels, loops }
    }

    /// Rotations of the original graph from rotations of the simple one:
    /// each parallel edge sits next to its representative, each loop is
    /// appended with its two darts adjacent.
    pub fn lift(&self, g: &UndirectedGraph, simple: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let mut rotations: Vec<Vec<usize>> =
            simple.iter().map(|rot| rot.iter().map(|&d| 2 * self.rep[d / 2] + d % 2).collect()).collect();
        let dart_at = |e: usize, v: usize| if g.edge(e).ends.0 == v { plus(e) } else { minus(e) };
        for &(p, r) in &self.parallels {
            let (u, v) = g.edge(r).ends;
            let at_u = rotations[u].iter().position(|&d| d == dart_at(r, u)).expect("representative placed");
            rotations[u].insert(at_u, dart_at(p, u));
            let at_v = rotations[v].iter().position(|&d| d == dart_at(r, v)).expect("representative placed");
            rotations[v].insert(at_v + 1, dart_at(p, v));
        }
        for &l in &self.loops {
            rotations[g.edge(l).ends.0].extend([minus(l), plus(l)]);
        }
        rotations
    }
}

/// Genus of a graph under a rotation system.
pub fn rotation_genus(g: &UndirectedGraph, rot: &RotationSystem) -> usize {
    trace_faces(g, rot).genus
}

/// `⌈1 − V/2 + E(γ−2)/(2γ)⌉` clamped at zero, in exact arithmetic.
pub fn euler_bound(vertices: usize, edges: usize, girth: usize) -> usize {
    let (v, e, g) = (vertices as i64, edges as i64, girth as i64);
    let value = Ratio::new(2 * g - v * g + e * (g - 2), 2 * g);
    let c = value.ceil().to_integer();
    c.max(0) as usize
}

/// Euler lower bound for a graph with no cycle shorter than `girth_floor`.
pub fn euler_lower_bound(g: &UndirectedGraph, girth_floor: usize) -> Result<usize> {
    if girth_floor < 3 {
        return Err(Error::domain("girth floor must be at least 3"));
    }
    if let Some(actual) = g.girth() {
        if actual < girth_floor {
            return Err(Error::precondition(format!("graph has a cycle of length {actual} < {girth_floor}")));
        }
    }
    Ok(euler_bound(g.vertex_count(), g.edge_count(), girth_floor))
}

/// Sum of the Euler bounds of the components, each from its own girth
/// (zero for a component with a cycle shorter than 3 or without cycles).
pub fn girth_lower_bound(g: &UndirectedGraph) -> usize {
    g.components()
        .iter()
        .map(|comp| {
            let sub = g.induced(comp);
            match sub.girth() {
                Some(gamma) if gamma >= 3 => euler_bound(sub.vertex_count(), sub.edge_count(), gamma),
                _ => 0,
            }
        })
        .sum()
}

/// `1 + Σ_i c_i f_i` with `c_i = (i(m−1) − 2m)/(4m)`.
pub fn genus_formula(m: usize, f: &FaceVector) -> Result<Ratio<i64>> {
    if m == 0 {
        return Err(Error::domain("letter count must be positive"));
    }
    let mut g = Ratio::from_integer(1);
    for (&i, &count) in &f.counts {
        g += formula_coefficient(m, i) * Ratio::from_integer(count as i64);
    }
    Ok(g)
}

/// Face-length coefficient `c_i` of [`genus_formula`].
pub fn formula_coefficient(m: usize, i: usize) -> Ratio<i64> {
    let m = m as i64;
    Ratio::new(i as i64 * (m - 1) - 2 * m, 4 * m)
}

/// Product over vertices of `max(1, (deg − 1)!)`, the number of rotation systems.
pub fn rotation_count(g: &UndirectedGraph) -> f64 {
    (0..g.vertex_count()).map(|v| (1..g.degree(v).max(1)).map(|k| k as f64).product::<f64>()).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn complete(n: usize) -> UndirectedGraph {
        let vs: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut es = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                es.push((format!("{i}-{j}"), i.to_string(), j.to_string()));
            }
        }
        UndirectedGraph::new(vs, es).unwrap()
    }

    pub(crate) fn complete_bipartite(a: usize, b: usize) -> UndirectedGraph {
        let vs: Vec<String> = (0..a).map(|i| format!("a{i}")).chain((0..b).map(|j| format!("b{j}"))).collect();
        let mut es = Vec::new();
        for i in 0..a {
            for j in 0..b {
                es.push((format!("a{i}b{j}"), format!("a{i}"), format!("b{j}")));
            }
        }
        UndirectedGraph::new(vs, es).unwrap()
    }

    #[test]
    fn triangle_has_two_faces() {
        let t = complete(3);
        let tr = trace_faces(&t, &RotationSystem::trivial(&t));
        assert_eq!(tr.faces.len(), 2);
        assert_eq!(tr.genus, 0);
        assert_eq!(tr.vector.weighted(), 6);
    }

    #[test]
    fn single_loop_has_two_faces() {
        let g = UndirectedGraph::new(["v"], [("l", "v", "v")]).unwrap();
        let rot = RotationSystem::new(&g, vec![vec![1, 0]]).unwrap();
        let tr = trace_faces(&g, &rot);
        assert_eq!(tr.faces.len(), 2);
        assert_eq!(tr.genus, 0);
    }

    #[test]
    fn token_round_trip() {
        let t = complete(3);
        let rot = RotationSystem::trivial(&t);
        let tokens = rot.to_tokens(&t);
        assert_eq!(tokens["0"], ["0-1+", "0-2+"]);
        assert_eq!(RotationSystem::from_tokens(&t, &tokens).unwrap(), rot);
        let mut alt = tokens.clone();
        alt.get_mut("1").unwrap()[0] = "0-1−".into();
        assert_eq!(RotationSystem::from_tokens(&t, &alt).unwrap(), rot);
    }

    #[test]
    fn invalid_rotations_rejected() {
        let t = complete(3);
        assert!(RotationSystem::new(&t, vec![vec![0, 2], vec![1], vec![3, 4, 5]]).is_err());
        assert!(RotationSystem::new(&t, vec![vec![0, 2], vec![1, 4], vec![3]]).is_err());
    }

    #[test]
    fn euler_bounds() {
        assert_eq!(euler_bound(7, 21, 3), 1);
        assert_eq!(euler_bound(5, 10, 3), 1);
        assert_eq!(euler_bound(6, 9, 4), 1);
        assert_eq!(euler_bound(6, 15, 3), 1);
        assert_eq!(euler_bound(4, 3, 3), 0);
        assert_eq!(euler_lower_bound(&complete(7), 3).unwrap(), 1);
        assert_eq!(euler_lower_bound(&complete_bipartite(3, 3), 4).unwrap(), 1);
        assert!(matches!(euler_lower_bound(&complete(4), 4), Err(Error::Precondition(_))));
        let tree = UndirectedGraph::new(["a", "b", "c"], [("x", "a", "b"), ("y", "a", "c")]).unwrap();
        assert_eq!(euler_lower_bound(&tree, 3).unwrap(), 0);
    }

    #[test]
    fn formula_coefficients() {
        assert_eq!(formula_coefficient(3, 1), Ratio::new(-1, 3));
        assert_eq!(formula_coefficient(3, 2), Ratio::new(-1, 6));
        assert_eq!(formula_coefficient(3, 3), Ratio::from_integer(0));
        assert_eq!(formula_coefficient(3, 4), Ratio::new(1, 6));
        assert_eq!(genus_formula(3, &FaceVector::default()).unwrap(), Ratio::from_integer(1));
        assert_eq!(genus_formula(3, &FaceVector::from_pairs(&[(3, 14)])).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn rotation_count_of_k5() {
        assert_eq!(rotation_count(&complete(5)), 6f64.powi(5));
    }
}
