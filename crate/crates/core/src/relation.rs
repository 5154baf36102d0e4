//! Automatic relations on digraphs and their Myhill–Nerode style description.

use std::collections::BTreeSet;
use std::fmt;

use crate::digraph::{reachability, strongly_connected_components, DiGraph, Edge, GraphMorphism};
use crate::emulation::check_directed_emulator;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::semi::SemiAutomaton;

/// A pair of equivalences on the vertices and edges of a digraph.
///
/// Values of this type are candidates; [`check_automatic`] decides whether
/// they satisfy compatibility and bisimilarity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AutomaticRelation {
    pub vertices: Partition,
    pub edges: Partition,
}

impl AutomaticRelation {
    pub fn new(vertices: Partition, edges: Partition) -> Self {
        AutomaticRelation { vertices, edges }
    }

    pub fn identity(g: &DiGraph) -> Self {
        Self::new(Partition::discrete(g.vertex_count()), Partition::discrete(g.edge_count()))
    }

    /// Relates edges exactly when their sources and targets are related.
    pub fn vertex_induced(g: &DiGraph, vertices: Partition) -> Self {
        let edges = Partition::from_keys(
            (0..g.edge_count()).map(|e| (vertices.class_of(g.src(e)), vertices.class_of(g.dst(e)))),
        );
        Self::new(vertices, edges)
    }

    pub fn is_vertex_induced(&self, g: &DiGraph) -> bool {
        *self == Self::vertex_induced(g, self.vertices.clone())
    }

    /// Builds a relation from classes of ids; the classes must partition `V` and `E`.
    pub fn from_classes(g: &DiGraph, vertex_classes: &[Vec<String>], edge_classes: &[Vec<String>]) -> Result<Self> {
        let vs = vertex_classes
            .iter()
            .map(|c| c.iter().map(|v| g.require_vertex(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let es = edge_classes
            .iter()
            .map(|c| c.iter().map(|e| g.require_edge(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let vertices = Partition::from_blocks(g.vertex_count(), &vs)
            .ok_or_else(|| Error::domain("vertex classes do not partition the vertex set"))?;
        let edges = Partition::from_blocks(g.edge_count(), &es)
            .ok_or_else(|| Error::domain("edge classes do not partition the edge set"))?;
        Ok(Self::new(vertices, edges))
    }

    /// Classes as id lists, in canonical order.
    pub fn to_classes(&self, g: &DiGraph) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
        let vs = self.vertices.blocks().iter().map(|b| b.iter().map(|&v| g.vertex(v).to_string()).collect()).collect();
        let es = self.edges.blocks().iter().map(|b| b.iter().map(|&e| g.edge(e).id.clone()).collect()).collect();
        (vs, es)
    }

    /// Inclusion of relations, clause by clause.
    pub fn leq(&self, other: &Self) -> bool {
        self.vertices.refines(&other.vertices) && self.edges.refines(&other.edges)
    }

    fn fits(&self, g: &DiGraph) -> Result<()> {
        if self.vertices.len() != g.vertex_count() || self.edges.len() != g.edge_count() {
            return Err(Error::domain("relation does not match the graph's vertex and edge counts"));
        }
        Ok(())
    }
}

/// Why a candidate relation is not automatic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationViolation {
    /// Two related edges whose sources or targets are unrelated.
    Compatibility { edges: (String, String) },
    /// `vertex` is related to the source of `edge` but has no outgoing edge related to it.
    Bisimilarity { vertex: String, edge: String },
}

impl fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationViolation::Compatibility { edges: (a, b) } => {
                write!(f, "compatibility fails: edges `{a}` and `{b}` are related but their ends are not")
            }
            RelationViolation::Bisimilarity { vertex, edge } => {
                write!(f, "bisimilarity fails: vertex `{vertex}` has no outgoing edge related to `{edge}`")
            }
        }
    }
}

pub fn check_automatic(g: &DiGraph, r: &AutomaticRelation) -> Result<std::result::Result<(), RelationViolation>> {
    r.fits(g)?;
    let (vp, ep) = (&r.vertices, &r.edges);
    for block in ep.blocks() {
        let e = block[0];
        for &f in &block[1..] {
            if !vp.same(g.src(e), g.src(f)) || !vp.same(g.dst(e), g.dst(f)) {
                let edges = (g.edge(e).id.clone(), g.edge(f).id.clone());
                return Ok(Err(RelationViolation::Compatibility { edges }));
            }
        }
    }
    for x in 0..g.vertex_count() {
        let have: BTreeSet<usize> = g.out_edges(x).iter().map(|&e| ep.class_of(e)).collect();
        for y in 0..g.vertex_count() {
            if y == x || !vp.same(x, y) {
                continue;
            }
            if let Some(&e) = g.out_edges(y).iter().find(|&&e| !have.contains(&ep.class_of(e))) {
                return Ok(Err(RelationViolation::Bisimilarity {
                    vertex: g.vertex(x).to_string(),
                    edge: g.edge(e).id.clone(),
                }));
            }
        }
    }
    Ok(Ok(()))
}

pub fn is_automatic(g: &DiGraph, r: &AutomaticRelation) -> bool {
    matches!(check_automatic(g, r), Ok(Ok(())))
}

fn require_automatic(g: &DiGraph, r: &AutomaticRelation) -> Result<()> {
    match check_automatic(g, r)? {
        Ok(()) => Ok(()),
        Err(v) => Err(Error::precondition(format!("relation is not automatic: {v}"))),
    }
}

/// Least id of every block, used to name quotient vertices and edges.
fn block_names(p: &Partition, id: impl Fn(usize) -> String) -> Vec<String> {
    p.blocks().iter().map(|b| b.iter().map(|&x| id(x)).min().expect("non-empty block")).collect()
}

/// `G/∼` and the canonical morphism onto it. Class `k` of either partition
/// becomes vertex or edge `k`, named by its least member id.
pub fn quotient(g: &DiGraph, r: &AutomaticRelation) -> Result<(DiGraph, GraphMorphism)> {
    require_automatic(g, r)?;
    let vp = &r.vertices;
    let vertices = block_names(vp, |v| g.vertex(v).to_string());
    let edge_names = block_names(&r.edges, |e| g.edge(e).id.clone());
    let edges = r
        .edges
        .blocks()
        .iter()
        .zip(edge_names)
        .map(|(b, id)| Edge { id, src: vp.class_of(g.src(b[0])), dst: vp.class_of(g.dst(b[0])) })
        .collect();
    let q = DiGraph::from_indexed(vertices, edges)?;
    let can = GraphMorphism::new(g.clone(), q.clone(), vp.classes_vec().to_vec(), r.edges.classes_vec().to_vec())?;
    Ok((q, can))
}

/// Clause (iii): distinct related edges have distinct sources.
pub fn is_cover_relation(g: &DiGraph, r: &AutomaticRelation) -> Result<bool> {
    require_automatic(g, r)?;
    Ok(r.edges.blocks().iter().all(|b| {
        let sources: BTreeSet<usize> = b.iter().map(|&e| g.src(e)).collect();
        sources.len() == b.len()
    }))
}

fn require_emulator(phi: &GraphMorphism) -> Result<()> {
    match check_directed_emulator(phi)? {
        Ok(()) => Ok(()),
        Err(v) => Err(Error::precondition(format!("not a directed emulator: {v}"))),
    }
}

/// Fibres of an emulator as an automatic relation on its source.
pub fn canonical_relation(phi: &GraphMorphism) -> Result<AutomaticRelation> {
    require_emulator(phi)?;
    Ok(AutomaticRelation::new(
        Partition::from_keys(phi.vertex_map().iter().copied()),
        Partition::from_keys(phi.edge_map().iter().copied()),
    ))
}

/// Splits an emulator as an isomorphism after the canonical quotient map.
pub fn factorize(phi: &GraphMorphism) -> Result<(AutomaticRelation, GraphMorphism)> {
    let r = canonical_relation(phi)?;
    let (q, _) = quotient(phi.source(), &r)?;
    let p = r.vertices.blocks().iter().map(|b| phi.p(b[0])).collect();
    let e = r.edges.blocks().iter().map(|b| phi.q(b[0])).collect();
    let iota = GraphMorphism::new(q, phi.target().clone(), p, e)?;
    Ok((r, iota))
}

/// Relation on `G` whose quotient map is the composite of the two quotient maps.
pub fn compose_relations(g: &DiGraph, r1: &AutomaticRelation, r2: &AutomaticRelation) -> Result<AutomaticRelation> {
    let (q, _) = quotient(g, r1)?;
    require_automatic(&q, r2)?;
    Ok(AutomaticRelation::new(
        r2.vertices.pull_back(r1.vertices.classes_vec()),
        r2.edges.pull_back(r1.edges.classes_vec()),
    ))
}

/// Non-empty pairwise disjoint sets of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalFamily {
    subsets: Vec<Vec<usize>>,
}

impl FinalFamily {
    pub fn new(vertex_count: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; vertex_count];
        for s in &subsets {
            if s.is_empty() {
                return Err(Error::domain("final family contains an empty set"));
            }
            for &v in s {
                if v >= vertex_count {
                    return Err(Error::domain(format!("vertex index {v} out of range")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::domain("final family sets overlap"));
                }
            }
        }
        Ok(FinalFamily { subsets })
    }

    pub fn from_ids(g: &DiGraph, subsets: &[Vec<String>]) -> Result<Self> {
        let idx = subsets
            .iter()
            .map(|s| s.iter().map(|v| g.require_vertex(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(g.vertex_count(), idx)
    }

    /// The blocks of a partition.
    pub fn from_partition(p: &Partition) -> Self {
        FinalFamily { subsets: p.blocks() }
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    /// The family together with the complement of its union.
    pub fn to_partition(&self, vertex_count: usize) -> Partition {
        let mut key = vec![usize::MAX; vertex_count];
        for (i, s) in self.subsets.iter().enumerate() {
            s.iter().for_each(|&v| key[v] = i);
        }
        Partition::from_keys(key)
    }
}

/// Refines `start` until each class agrees on its set of
/// `(letter, class of target)` pairs. Returns the fixpoint and the number of
/// refinement rounds that changed something.
pub fn mn_vertex_partition(a: &SemiAutomaton, start: Partition) -> (Partition, usize) {
    let g = a.graph();
    let mut p = start;
    let mut rounds = 0;
    loop {
        let next = Partition::from_keys((0..g.vertex_count()).map(|v| {
            let sig: BTreeSet<(usize, usize)> =
                g.out_edges(v).iter().map(|&e| (a.label(e), p.class_of(g.dst(e)))).collect();
            (p.class_of(v), sig)
        }));
        if next == p {
            return (p, rounds);
        }
        p = next;
        rounds += 1;
    }
}

/// `MN(A, F)`: the refined vertex relation and the edges with equal labels
/// and related ends.
pub fn mn_refine(a: &SemiAutomaton, family: &FinalFamily) -> AutomaticRelation {
    let g = a.graph();
    let (vertices, rounds) = mn_vertex_partition(a, family.to_partition(g.vertex_count()));
    assert!(rounds <= g.vertex_count(), "refinement did not stabilise within |V| rounds");
    let edges = Partition::from_keys(
        (0..g.edge_count()).map(|e| (vertices.class_of(g.src(e)), vertices.class_of(g.dst(e)), a.label(e))),
    );
    AutomaticRelation::new(vertices, edges)
}

/// `A_∼`: each edge labelled by its class, the letter named by the least edge id in the class.
pub fn canonical_semi_automaton(g: &DiGraph, r: &AutomaticRelation) -> Result<SemiAutomaton> {
    r.fits(g)?;
    let names = block_names(&r.edges, |e| g.edge(e).id.clone());
    let labels = (0..g.edge_count()).map(|e| names[r.edges.class_of(e)].clone()).collect();
    SemiAutomaton::with_labels(g.clone(), names, labels)
}

/// A minimal complete final system: one vertex per sink strongly connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalSystems {
    /// Least vertex id of every sink component, in id order.
    pub minimal_system: Vec<usize>,
    pub cardinality: usize,
}

pub fn complete_final_systems(g: &DiGraph) -> FinalSystems {
    let mut reps = Vec::new();
    for comp in strongly_connected_components(g) {
        let mut inside = vec![false; g.vertex_count()];
        comp.iter().for_each(|&v| inside[v] = true);
        let sink = comp.iter().all(|&v| g.out_edges(v).iter().all(|&e| inside[g.dst(e)]));
        if sink {
            reps.push(*comp.iter().min_by(|&&x, &&y| g.vertex(x).cmp(g.vertex(y))).expect("non-empty"));
        }
    }
    reps.sort_by(|&x, &y| g.vertex(x).cmp(g.vertex(y)));
    let cardinality = reps.len();
    FinalSystems { minimal_system: reps, cardinality }
}

/// Every vertex has a walk into the set.
pub fn is_complete_final_system(g: &DiGraph, set: &[usize]) -> bool {
    let pr = reachability(g).pr;
    let mut covered = vec![false; g.vertex_count()];
    for &w in set {
        pr[w].iter().for_each(|&v| covered[v] = true);
    }
    covered.iter().all(|&c| c)
}

/// Complete, and no proper subset is complete.
pub fn is_minimal_final_system(g: &DiGraph, set: &[usize]) -> bool {
    is_complete_final_system(g, set)
        && (0..set.len()).all(|i| {
            let rest: Vec<usize> = set.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            !is_complete_final_system(g, &rest)
        })
}

/// Outcome of recomputing an automatic relation as MN-recursive relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    /// `MN(A_∼, F)` for the classes of a minimal complete final system.
    pub minimal_system: bool,
    /// Same with a non-minimal complete final system, when one differs from the minimal one.
    pub larger_system: Option<bool>,
    /// `MN(A_∼, G)` for the full class partition.
    pub all_classes: bool,
    /// `MN(A_∼, {[v]})` for a vertex reachable from everywhere, if any.
    pub reachable_class: Option<bool>,
}

impl RoundTrip {
    pub fn holds(&self) -> bool {
        self.minimal_system
            && self.all_classes
            && self.larger_system.unwrap_or(true)
            && self.reachable_class.unwrap_or(true)
    }
}

pub fn automatic_to_mn_roundtrip(g: &DiGraph, r: &AutomaticRelation) -> Result<RoundTrip> {
    require_automatic(g, r)?;
    let a = canonical_semi_automaton(g, r)?;
    let classes_of = |set: &[usize]| -> FinalFamily {
        let picked: BTreeSet<usize> = set.iter().map(|&v| r.vertices.class_of(v)).collect();
        let blocks = r.vertices.blocks();
        FinalFamily { subsets: picked.into_iter().map(|c| blocks[c].clone()).collect() }
    };
    let recovers = |set: &[usize]| mn_refine(&a, &classes_of(set)) == *r;
    let minimal = complete_final_systems(g).minimal_system;
    let larger = (0..g.vertex_count()).find(|v| !minimal.contains(v)).map(|extra| {
        let mut set = minimal.clone();
        set.push(extra);
        recovers(&set)
    });
    let all_classes = mn_refine(&a, &FinalFamily::from_partition(&r.vertices)) == *r;
    let reachable_class = reachability(g).reachable.first().map(|&v| recovers(&[v]));
    Ok(RoundTrip { minimal_system: recovers(&minimal), larger_system: larger, all_classes, reachable_class })
}

fn same_graph(r1: &AutomaticRelation, r2: &AutomaticRelation, g: &DiGraph) -> Result<()> {
    r1.fits(g)?;
    r2.fits(g).map_err(|_| Error::domain("relations live on different graphs"))
}

/// Least upper bound: transitive closure of the unions.
pub fn join(g: &DiGraph, r1: &AutomaticRelation, r2: &AutomaticRelation) -> Result<AutomaticRelation> {
    same_graph(r1, r2, g)?;
    require_automatic(g, r1)?;
    require_automatic(g, r2)?;
    Ok(AutomaticRelation::new(r1.vertices.join(&r2.vertices), r1.edges.join(&r2.edges)))
}

/// Largest automatic relation below `(vertices, edges)`.
fn greatest_below(g: &DiGraph, mut vertices: Partition, mut edges: Partition) -> AutomaticRelation {
    loop {
        edges = edges.meet(&Partition::from_keys(
            (0..g.edge_count()).map(|e| (vertices.class_of(g.src(e)), vertices.class_of(g.dst(e)))),
        ));
        let next = vertices.meet(&Partition::from_keys(
            (0..g.vertex_count()).map(|v| g.out_edges(v).iter().map(|&e| edges.class_of(e)).collect::<BTreeSet<_>>()),
        ));
        if next == vertices {
            return AutomaticRelation::new(vertices, edges);
        }
        vertices = next;
    }
}

/// Greatest lower bound, as a greatest fixpoint below the intersections.
pub fn meet(g: &DiGraph, r1: &AutomaticRelation, r2: &AutomaticRelation) -> Result<AutomaticRelation> {
    same_graph(r1, r2, g)?;
    require_automatic(g, r1)?;
    require_automatic(g, r2)?;
    Ok(greatest_below(g, r1.vertices.meet(&r2.vertices), r1.edges.meet(&r2.edges)))
}

/// Top of the lattice of automatic relations.
pub fn maximum(g: &DiGraph) -> AutomaticRelation {
    greatest_below(g, Partition::full(g.vertex_count()), Partition::full(g.edge_count()))
}

/// The unique morphism `χ: H → G/max` with `χ ∘ φ` the canonical map of the maximum.
pub fn terminal_factor(phi: &GraphMorphism) -> Result<GraphMorphism> {
    require_emulator(phi)?;
    let g = phi.source();
    let top = maximum(g);
    let (q, _) = quotient(g, &top)?;
    let h = phi.target();
    let mut p = vec![usize::MAX; h.vertex_count()];
    let mut e = vec![usize::MAX; h.edge_count()];
    for v in 0..g.vertex_count() {
        p[phi.p(v)] = top.vertices.class_of(v);
    }
    for x in 0..g.edge_count() {
        e[phi.q(x)] = top.edges.class_of(x);
    }
    if e.contains(&usize::MAX) {
        return Err(Error::precondition("emulator is not surjective on edges"));
    }
    GraphMorphism::new(h.clone(), q, p, e)
}

/// All candidate relations on `g` that are automatic, by exhaustive enumeration.
pub fn all_automatic_relations(g: &DiGraph) -> Vec<AutomaticRelation> {
    let mut out = Vec::new();
    for vertices in all_partitions(g.vertex_count()) {
        // Edges may only be related when both ends are; partition each such group.
        let groups = Partition::from_keys(
            (0..g.edge_count()).map(|e| (vertices.class_of(g.src(e)), vertices.class_of(g.dst(e)))),
        )
        .blocks();
        let per_group: Vec<Vec<Partition>> = groups.iter().map(|b| all_partitions(b.len())).collect();
        let mut idx = vec![0; groups.len()];
        loop {
            let mut key = vec![(0, 0); g.edge_count()];
            for (gi, b) in groups.iter().enumerate() {
                let p = &per_group[gi][idx[gi]];
                for (k, &e) in b.iter().enumerate() {
                    key[e] = (gi, p.class_of(k));
                }
            }
            let r = AutomaticRelation::new(vertices.clone(), Partition::from_keys(key));
            if is_automatic(g, &r) {
                out.push(r);
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < per_group[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

/// Every partition of `0..n` (restricted growth strings).
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(cur: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Partition>) {
        if cur.len() == n {
            out.push(Partition::from_keys(cur.iter().copied()));
            return;
        }
        for c in 0..=max {
            cur.push(c);
            rec(cur, if c == max { max + 1 } else { max }, n, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{find_isomorphism, simplify};
    use crate::emulation::{is_directed_cover, is_directed_emulator};
    use proptest::prelude::*;

    fn dg(vs: &[&str], es: &[(&str, &str, &str)]) -> DiGraph {
        DiGraph::new(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    fn c2() -> DiGraph {
        dg(&["a", "b"], &[("ab", "a", "b"), ("ba", "b", "a")])
    }

    fn c4() -> DiGraph {
        dg(&["0", "1", "2", "3"], &[("01", "0", "1"), ("12", "1", "2"), ("23", "2", "3"), ("30", "3", "0")])
    }

    fn classes(g: &DiGraph, vs: &[&[&str]], es: &[&[&str]]) -> AutomaticRelation {
        let own = |c: &[&[&str]]| c.iter().map(|b| b.iter().map(|s| s.to_string()).collect()).collect::<Vec<_>>();
        AutomaticRelation::from_classes(g, &own(vs), &own(es)).unwrap()
    }

    fn wrap_c4() -> AutomaticRelation {
        classes(&c4(), &[&["0", "2"], &["1", "3"]], &[&["01", "23"], &["12", "30"]])
    }

    #[test]
    fn identity_and_simple_checks() {
        let g = c2();
        assert!(is_automatic(&g, &AutomaticRelation::identity(&g)));
        let all = classes(&g, &[&["a", "b"]], &[&["ab", "ba"]]);
        assert!(is_automatic(&g, &all));
        let p2 = dg(&["x", "y"], &[("e", "x", "y")]);
        let bad = classes(&p2, &[&["x", "y"]], &[&["e"]]);
        assert_eq!(
            check_automatic(&p2, &bad).unwrap(),
            Err(RelationViolation::Bisimilarity { vertex: "y".into(), edge: "e".into() })
        );
        assert!(AutomaticRelation::from_classes(&p2, &[vec!["x".into()]], &[vec!["e".into()]]).is_err());
    }

    #[test]
    fn quotients() {
        let g = c4();
        let (q, can) = quotient(&g, &AutomaticRelation::identity(&g)).unwrap();
        assert!(find_isomorphism(&g, &q).is_some());
        assert!(is_directed_cover(&can));
        let par = dg(&["x", "y"], &[("e", "x", "y"), ("f", "x", "y"), ("g", "y", "x")]);
        let vi = AutomaticRelation::vertex_induced(&par, Partition::discrete(2));
        let (q, _) = quotient(&par, &vi).unwrap();
        assert!(find_isomorphism(&q, &simplify(&par).0).is_some());
        let ex = dg(&["u", "w"], &[("e", "u", "w"), ("f", "w", "u")]);
        let (q, can) = quotient(&ex, &classes(&ex, &[&["u", "w"]], &[&["e", "f"]])).unwrap();
        assert_eq!((q.vertex_count(), q.edge_count()), (1, 1));
        assert!(q.edge(0).is_loop());
        assert!(is_directed_emulator(&can));
    }

    #[test]
    fn cover_relations() {
        let loop2 = dg(&["u"], &[("a", "u", "u"), ("b", "u", "u")]);
        let merged = classes(&loop2, &[&["u"]], &[&["a", "b"]]);
        assert!(!is_cover_relation(&loop2, &merged).unwrap());
        assert!(is_cover_relation(&c4(), &wrap_c4()).unwrap());
        assert!(is_cover_relation(&c4(), &AutomaticRelation::identity(&c4())).unwrap());
    }

    #[test]
    fn canonical_relation_and_factorization() {
        let g = c4();
        let (q, can) = quotient(&g, &wrap_c4()).unwrap();
        let (r, iota) = factorize(&can).unwrap();
        assert_eq!(r, wrap_c4());
        assert!(iota.is_isomorphism());
        let twisted =
            GraphMorphism::new(q, dg(&["x", "y"], &[("f", "y", "x"), ("e", "x", "y")]), vec![1, 0], vec![0, 1])
                .unwrap();
        let composite = can.then(&twisted).unwrap();
        let (r, iota) = factorize(&composite).unwrap();
        assert_eq!(r, wrap_c4());
        assert_eq!(iota.vertex_map(), &[1, 0]);
        let id = GraphMorphism::identity(&g);
        assert_eq!(canonical_relation(&id).unwrap(), AutomaticRelation::identity(&g));
    }

    #[test]
    fn swap_of_parallel_edges_has_identity_relation() {
        let g = dg(&["v"], &[("e", "v", "v"), ("f", "v", "v")]);
        let swap = GraphMorphism::new(g.clone(), g.clone(), vec![0], vec![1, 0]).unwrap();
        assert_eq!(canonical_relation(&swap).unwrap(), AutomaticRelation::identity(&g));
    }

    #[test]
    fn composition_down_to_a_loop() {
        let g = c4();
        let (q, can1) = quotient(&g, &wrap_c4()).unwrap();
        let r2 = AutomaticRelation::new(Partition::full(2), Partition::full(2));
        let (_, can2) = quotient(&q, &r2).unwrap();
        let r = compose_relations(&g, &wrap_c4(), &r2).unwrap();
        assert_eq!(r, AutomaticRelation::new(Partition::full(4), Partition::full(4)));
        let (_, can) = quotient(&g, &r).unwrap();
        assert_eq!(can1.then(&can2).unwrap().vertex_map(), can.vertex_map());
        assert_eq!(compose_relations(&g, &wrap_c4(), &AutomaticRelation::identity(&q)).unwrap(), wrap_c4());
    }

    #[test]
    fn mn_on_symmetric_cycle() {
        let g = c2();
        let a = SemiAutomaton::with_labels(g, vec!["a".into()], vec!["a".into(), "a".into()]).unwrap();
        let r = mn_refine(&a, &FinalFamily::new(2, vec![vec![0, 1]]).unwrap());
        assert_eq!(r.vertices, Partition::full(2));
        let r = mn_refine(&a, &FinalFamily::new(2, vec![vec![0]]).unwrap());
        assert_eq!(r.vertices, Partition::discrete(2));
        assert!(FinalFamily::new(2, vec![vec![0], vec![0, 1]]).is_err());
    }

    #[test]
    fn final_systems() {
        assert_eq!(complete_final_systems(&c4()).cardinality, 1);
        let p2 = dg(&["x", "y"], &[("e", "x", "y")]);
        assert_eq!(complete_final_systems(&p2).minimal_system, vec![1]);
        let two = dg(&["a", "b", "c", "d"], &[("1", "a", "b"), ("2", "b", "a"), ("3", "c", "d"), ("4", "d", "c")]);
        let fs = complete_final_systems(&two);
        assert_eq!(fs.minimal_system, vec![0, 2]);
        assert!(is_minimal_final_system(&two, &fs.minimal_system));
        assert!(!is_minimal_final_system(&two, &[0, 1, 2]));
    }

    #[test]
    fn roundtrips() {
        let rt = automatic_to_mn_roundtrip(&c2(), &AutomaticRelation::identity(&c2())).unwrap();
        assert!(rt.holds());
        assert!(automatic_to_mn_roundtrip(&c4(), &wrap_c4()).unwrap().holds());
        let ex = dg(&["u", "v", "w"], &[("e", "u", "w"), ("f", "w", "u"), ("l", "v", "v")]);
        let r = classes(&ex, &[&["u", "v", "w"]], &[&["e", "f", "l"]]);
        let rt = automatic_to_mn_roundtrip(&ex, &r).unwrap();
        assert!(rt.holds(), "{rt:?}");
    }

    #[test]
    fn lattice_on_two_forks() {
        let g = dg(
            &["v0", "u0", "w0", "v1", "u1", "w1"],
            &[("a", "u0", "v0"), ("b", "u0", "w0"), ("c", "u1", "v1"), ("d", "u1", "w1")],
        );
        let r1 = AutomaticRelation::vertex_induced(
            &g,
            Partition::from_blocks(6, &[vec![1, 4], vec![0, 3], vec![2, 5]]).unwrap(),
        );
        let r2 = AutomaticRelation::vertex_induced(
            &g,
            Partition::from_blocks(6, &[vec![1, 4], vec![0, 5], vec![2, 3]]).unwrap(),
        );
        assert!(is_automatic(&g, &r1) && is_automatic(&g, &r2));
        let m = meet(&g, &r1, &r2).unwrap();
        assert_eq!(m, AutomaticRelation::identity(&g));
        assert_eq!(join(&g, &r1, &AutomaticRelation::identity(&g)).unwrap(), r1);
        assert_eq!(meet(&g, &r1, &AutomaticRelation::identity(&g)).unwrap(), AutomaticRelation::identity(&g));
        assert!(meet(&c2(), &r1, &r2).is_err());
    }

    #[test]
    fn maximum_of_c4_is_a_loop() {
        let top = maximum(&c4());
        assert_eq!(top, AutomaticRelation::new(Partition::full(4), Partition::full(4)));
        let all = all_automatic_relations(&c4());
        assert!(all.iter().all(|r| r.leq(&top)));
    }

    #[test]
    fn terminal_factor_commutes() {
        let g = c4();
        let (_, can) = quotient(&g, &wrap_c4()).unwrap();
        let chi = terminal_factor(&can).unwrap();
        let (_, top) = quotient(&g, &maximum(&g)).unwrap();
        assert_eq!(can.then(&chi).unwrap(), top);
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let bell: Vec<usize> = (0..6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52]);
    }

    fn small_graph() -> impl Strategy<Value = DiGraph> {
        (1usize..5).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..7).prop_map(move |es| {
                let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                let es: Vec<(String, String, String)> = es
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| (format!("e{i}"), format!("v{a}"), format!("v{b}")))
                    .collect();
                DiGraph::new(vs, es).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn lattice_matches_brute_force(g in small_graph()) {
            let all = all_automatic_relations(&g);
            let top = maximum(&g);
            prop_assert!(all.contains(&top));
            for r1 in all.iter().step_by(3) {
                prop_assert!(automatic_to_mn_roundtrip(&g, r1).unwrap().holds());
                let (_, can) = quotient(&g, r1).unwrap();
                prop_assert!(is_directed_emulator(&can));
                prop_assert_eq!(is_directed_cover(&can), is_cover_relation(&g, r1).unwrap());
                for r2 in all.iter().step_by(5) {
                    let j = join(&g, r1, r2).unwrap();
                    let m = meet(&g, r1, r2).unwrap();
                    let uppers: Vec<_> = all.iter().filter(|r| r1.leq(r) && r2.leq(r)).collect();
                    let lowers: Vec<_> = all.iter().filter(|r| r.leq(r1) && r.leq(r2)).collect();
                    prop_assert!(uppers.contains(&&j) && uppers.iter().all(|r| j.leq(r)));
                    prop_assert!(lowers.contains(&&m) && lowers.iter().all(|r| r.leq(&m)));
                }
            }
        }

        #[test]
        fn mn_refinement_is_automatic_and_monotone(g in small_graph(), seed in 0usize..1000) {
            let letters = ["a", "b"];
            let labels: Vec<String> = (0..g.edge_count()).map(|e| letters[(e * 7 + seed) % 2].to_string()).collect();
            let mut alphabet: Vec<String> = labels.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
            alphabet.sort();
            let a = SemiAutomaton::with_labels(g.clone(), alphabet, labels).unwrap();
            let n = g.vertex_count();
            let coarse = Partition::from_keys((0..n).map(|v| (v + seed) % 2));
            let fine = coarse.meet(&Partition::from_keys((0..n).map(|v| (v * 3 + seed) % 3)));
            let rc = mn_refine(&a, &FinalFamily::from_partition(&coarse));
            let rf = mn_refine(&a, &FinalFamily::from_partition(&fine));
            prop_assert!(is_automatic(&g, &rc));
            prop_assert!(is_automatic(&g, &rf));
            prop_assert!(rf.leq(&rc));
        }
    }
}
