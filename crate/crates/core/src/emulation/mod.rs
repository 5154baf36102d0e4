//! Directed and undirected emulators and covers.

mod search;
mod undirected;

use std::collections::HashSet;
use std::fmt;

use crate::digraph::{contract_cycle, excise, fresh_id, DiGraph, DirectedCycle, Edge, GraphMorphism};
use crate::error::{Error, Result};
use crate::partition::UnionFind;

pub use search::{search_covers, CoverCertificate, CoverSearchSpec, SearchOutcome, SearchStats};
pub use undirected::{
    adjunction_inverse, adjunction_transfer, check_undirected_cover, check_undirected_emulator, is_undirected_cover,
    is_undirected_emulator, lift_direction,
};

/// Why a morphism fails to be an emulator or a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmulationViolation {
    /// A target vertex has no preimage.
    NotSurjective { vertex: String },
    /// `edge` of the target has no lift at `vertex`.
    MissingLift { vertex: String, edge: String },
    /// `edge` of the target has several lifts at `vertex`.
    AmbiguousLift { vertex: String, edge: String, lifts: Vec<String> },
}

impl fmt::Display for EmulationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmulationViolation::NotSurjective { vertex } => write!(f, "vertex `{vertex}` has no preimage"),
            EmulationViolation::MissingLift { vertex, edge } => {
                write!(f, "edge `{edge}` has no lift at `{vertex}`")
            }
            EmulationViolation::AmbiguousLift { vertex, edge, lifts } => {
                write!(f, "edge `{edge}` has {} lifts at `{vertex}`: {}", lifts.len(), lifts.join(", "))
            }
        }
    }
}

/// Outcome of an emulator or cover check.
pub type Verdict = std::result::Result<(), EmulationViolation>;

fn require_valid(phi: &GraphMorphism) -> Result<()> {
    phi.validate().map_err(|v| Error::domain(format!("not a graph morphism: {v}")))
}

fn check_lifting(phi: &GraphMorphism, unique: bool) -> Verdict {
    let (g, h) = (phi.source(), phi.target());
    let fibers = phi.vertex_fibers();
    if let Some(w) = fibers.iter().position(Vec::is_empty) {
        return Err(EmulationViolation::NotSurjective { vertex: h.vertex(w).to_string() });
    }
    let mut count = vec![0usize; h.edge_count()];
    for x in 0..g.vertex_count() {
        let px = phi.p(x);
        g.out_edges(x).iter().for_each(|&e| count[phi.q(e)] += 1);
        for &f in h.out_edges(px) {
            let c = count[f];
            if c == 0 {
                return Err(EmulationViolation::MissingLift {
                    vertex: g.vertex(x).to_string(),
                    edge: h.edge(f).id.clone(),
                });
            }
            if unique && c > 1 {
                let lifts = g.out_edges(x).iter().filter(|&&e| phi.q(e) == f).map(|&e| g.edge(e).id.clone()).collect();
                return Err(EmulationViolation::AmbiguousLift {
                    vertex: g.vertex(x).to_string(),
                    edge: h.edge(f).id.clone(),
                    lifts,
                });
            }
        }
        g.out_edges(x).iter().for_each(|&e| count[phi.q(e)] = 0);
    }
    Ok(())
}

/// Surjective on vertices with the outgoing edge lifting property.
pub fn check_directed_emulator(phi: &GraphMorphism) -> Result<Verdict> {
    require_valid(phi)?;
    Ok(check_lifting(phi, false))
}

/// Directed emulator whose lifts are unique.
pub fn check_directed_cover(phi: &GraphMorphism) -> Result<Verdict> {
    require_valid(phi)?;
    Ok(check_lifting(phi, true))
}

/// Emulator for incoming edges, checked on the opposite morphism.
pub fn check_incoming_emulator(phi: &GraphMorphism) -> Result<Verdict> {
    check_directed_emulator(&phi.opposite())
}

pub fn check_incoming_cover(phi: &GraphMorphism) -> Result<Verdict> {
    check_directed_cover(&phi.opposite())
}

/// Emulator for both outgoing and incoming edges.
pub fn check_bidirected_emulator(phi: &GraphMorphism) -> Result<Verdict> {
    let out = check_directed_emulator(phi)?;
    Ok(out.and(check_incoming_emulator(phi)?))
}

pub fn is_directed_emulator(phi: &GraphMorphism) -> bool {
    matches!(check_directed_emulator(phi), Ok(Ok(())))
}

pub fn is_directed_cover(phi: &GraphMorphism) -> bool {
    matches!(check_directed_cover(phi), Ok(Ok(())))
}

pub fn is_incoming_emulator(phi: &GraphMorphism) -> bool {
    matches!(check_incoming_emulator(phi), Ok(Ok(())))
}

pub fn is_incoming_cover(phi: &GraphMorphism) -> bool {
    matches!(check_incoming_cover(phi), Ok(Ok(())))
}

/// Restrictions of `q` to the outgoing and incoming stars of one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarMaps {
    pub out_map: Vec<(String, String)>,
    pub in_map: Vec<(String, String)>,
    pub out_injective: bool,
    pub out_surjective: bool,
    pub in_injective: bool,
    pub in_surjective: bool,
}

pub fn star_maps(phi: &GraphMorphism, vertex: &str) -> Result<StarMaps> {
    let (g, h) = (phi.source(), phi.target());
    let x = g.require_vertex(vertex)?;
    let px = phi.p(x);
    let classify = |star: &[usize], target_star: &[usize]| {
        let images: Vec<usize> = star.iter().map(|&e| phi.q(e)).collect();
        let distinct: HashSet<usize> = images.iter().copied().collect();
        let injective = distinct.len() == images.len();
        let surjective = target_star.iter().all(|f| distinct.contains(f));
        let map = star.iter().map(|&e| (g.edge(e).id.clone(), h.edge(phi.q(e)).id.clone())).collect();
        (map, injective, surjective)
    };
    let (out_map, out_injective, out_surjective) = classify(g.out_edges(x), h.out_edges(px));
    let (in_map, in_injective, in_surjective) = classify(g.in_edges(x), h.in_edges(px));
    Ok(StarMaps { out_map, in_map, out_injective, out_surjective, in_injective, in_surjective })
}

/// Every outgoing star maps onto the outgoing star of its image.
pub fn is_submersion(phi: &GraphMorphism) -> bool {
    phi.source().vertices().iter().all(|v| star_maps(phi, v).is_ok_and(|s| s.out_surjective))
}

/// Every outgoing star maps injectively.
pub fn is_immersion(phi: &GraphMorphism) -> bool {
    phi.source().vertices().iter().all(|v| star_maps(phi, v).is_ok_and(|s| s.out_injective))
}

/// Keeps, at every vertex and for every outgoing edge of its image, the lift
/// with the least edge id. The result is a cover on the same vertex set.
pub fn extract_cover(phi: &GraphMorphism) -> Result<GraphMorphism> {
    if let Err(v) = check_directed_emulator(phi)? {
        return Err(Error::precondition(format!("not a directed emulator: {v}")));
    }
    let g = phi.source();
    let mut keep = vec![false; g.edge_count()];
    for x in 0..g.vertex_count() {
        let mut best: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        for &e in g.out_edges(x) {
            let slot = best.entry(phi.q(e)).or_insert(e);
            if g.edge(e).id < g.edge(*slot).id {
                *slot = e;
            }
        }
        best.values().for_each(|&e| keep[e] = true);
    }
    let (_, inc) = crate::digraph::subgraph_by_index(g, |_| true, |e| keep[e]);
    inc.then(phi)
}

/// Extends a morphism onto `Exc(H)` to one onto `H` by adding, for every loop
/// of `H` and every vertex over its base, a loop named `loop@vertex`.
pub fn extend_over_excision(psi: &GraphMorphism, h: &DiGraph) -> Result<GraphMorphism> {
    let exc = excise(h);
    if psi.target() != &exc {
        return Err(Error::domain("morphism does not land in the excision of the given graph"));
    }
    let g = psi.source();
    let exc_to_h: Vec<usize> = exc.edges().iter().map(|e| h.edge_index(&e.id).expect("kept edge")).collect();
    let mut taken: HashSet<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    let mut edges = g.edges().to_vec();
    let mut q: Vec<usize> = (0..g.edge_count()).map(|e| exc_to_h[psi.q(e)]).collect();
    let fibers = psi.vertex_fibers();
    for (l, edge) in h.edges().iter().enumerate() {
        if !edge.is_loop() {
            continue;
        }
        for &x in &fibers[edge.src] {
            let id = fresh_id(&mut taken, format!("{}@{}", edge.id, g.vertex(x)));
            edges.push(Edge { id, src: x, dst: x });
            q.push(l);
        }
    }
    let total = DiGraph::from_indexed(g.vertices().to_vec(), edges)?;
    GraphMorphism::new(total, h.clone(), psi.vertex_map().to_vec(), q)
}

/// Emulator of `G_c` from an emulator `H → G`: every set of vertices of `H`
/// joined by lifts of cycle edges is contracted to one vertex, named by
/// joining its members with `+`. Lifts of cycle edges disappear, all other
/// edges of `H` are kept. Contraction never raises the genus of `U(H)`.
pub fn contract_emulator(phi: &GraphMorphism, c: &DirectedCycle) -> Result<GraphMorphism> {
    if let Err(v) = check_directed_emulator(phi)? {
        return Err(Error::precondition(format!("not a directed emulator: {v}")));
    }
    let (h, g) = (phi.source(), phi.target());
    let cycle = c.resolve(g)?;
    let gc = contract_cycle(g, c)?;
    let on_cycle: HashSet<usize> = cycle.iter().map(|&e| g.src(e)).collect();
    let first = *on_cycle.iter().min().expect("non-empty cycle");
    let mut g_to_gc = vec![0; g.vertex_count()];
    let mut next = 0;
    for v in 0..g.vertex_count() {
        if v == first || !on_cycle.contains(&v) {
            g_to_gc[v] = next;
            next += 1;
        }
    }
    for &v in &on_cycle {
        g_to_gc[v] = g_to_gc[first];
    }
    let lifted: Vec<bool> = (0..h.edge_count()).map(|e| cycle.contains(&phi.q(e))).collect();
    let mut uf = UnionFind::new(h.vertex_count());
    for (e, edge) in h.edges().iter().enumerate() {
        if lifted[e] {
            uf.union(edge.src, edge.dst);
        }
    }
    let mut class_of = vec![usize::MAX; h.vertex_count()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for x in 0..h.vertex_count() {
        let root = uf.find(x);
        if class_of[root] == usize::MAX {
            class_of[root] = members.len();
            members.push(Vec::new());
        }
        class_of[x] = class_of[root];
        members[class_of[x]].push(x);
    }
    let mut taken: HashSet<String> =
        members.iter().filter(|m| m.len() == 1).map(|m| h.vertex(m[0]).to_string()).collect();
    let vertices: Vec<String> = members
        .iter()
        .map(|m| {
            if m.len() == 1 {
                h.vertex(m[0]).to_string()
            } else {
                fresh_id(&mut taken, m.iter().map(|&x| h.vertex(x)).collect::<Vec<_>>().join("+"))
            }
        })
        .collect();
    let p = members.iter().map(|m| g_to_gc[phi.p(m[0])]).collect();
    let mut edges = Vec::new();
    let mut q = Vec::new();
    for (e, edge) in h.edges().iter().enumerate() {
        if lifted[e] {
            continue;
        }
        let target = gc.edge_index(&g.edge(phi.q(e)).id).expect("non-cycle edge survives");
        edges.push(Edge { id: edge.id.clone(), src: class_of[edge.src], dst: class_of[edge.dst] });
        q.push(target);
    }
    let total = DiGraph::from_indexed(vertices, edges)?;
    GraphMorphism::new(total, gc, p, q)
}
