use std::collections::HashMap;

use super::{EmulationViolation, Verdict};
use crate::digraph::{
    bidirect, bidirect_with_origin, bidirected_index, forget, DiGraph, Edge, GraphMorphism, UndirectedGraph,
    UndirectedMorphism,
};
use crate::error::{Error, Result};

fn check(phi: &UndirectedMorphism, unique: bool) -> Result<Verdict> {
    if let Some(e) = phi.first_violation() {
        return Err(Error::domain(format!("not an undirected morphism at edge `{}`", phi.source().edge(e).id)));
    }
    let (g, h) = (phi.source(), phi.target());
    let mut hit = vec![false; h.vertex_count()];
    phi.vertex_map().iter().for_each(|&w| hit[w] = true);
    if let Some(w) = hit.iter().position(|b| !b) {
        return Ok(Err(EmulationViolation::NotSurjective { vertex: h.vertex(w).to_string() }));
    }
    for x in 0..g.vertex_count() {
        let mut lifts: HashMap<usize, Vec<usize>> = HashMap::new();
        for &e in g.incident(x) {
            lifts.entry(phi.q(e)).or_default().push(e);
        }
        for &f in h.incident(phi.p(x)) {
            match lifts.get(&f) {
                None => {
                    return Ok(Err(EmulationViolation::MissingLift {
                        vertex: g.vertex(x).to_string(),
                        edge: h.edge(f).id.clone(),
                    }))
                }
                Some(ls) if unique && ls.len() > 1 => {
                    return Ok(Err(EmulationViolation::AmbiguousLift {
                        vertex: g.vertex(x).to_string(),
                        edge: h.edge(f).id.clone(),
                        lifts: ls.iter().map(|&e| g.edge(e).id.clone()).collect(),
                    }))
                }
                Some(_) => {}
            }
        }
    }
    Ok(Ok(()))
}

/// Vertex-surjective morphism where every edge at `p(x')` lifts to an edge at `x'`.
pub fn check_undirected_emulator(phi: &UndirectedMorphism) -> Result<Verdict> {
    check(phi, false)
}

/// Undirected emulator with unique lifts.
pub fn check_undirected_cover(phi: &UndirectedMorphism) -> Result<Verdict> {
    check(phi, true)
}

pub fn is_undirected_emulator(phi: &UndirectedMorphism) -> bool {
    matches!(check_undirected_emulator(phi), Ok(Ok(())))
}

pub fn is_undirected_cover(phi: &UndirectedMorphism) -> bool {
    matches!(check_undirected_cover(phi), Ok(Ok(())))
}

/// Sends `G → double(H)` to `U(G) → H` by forgetting orientations of edge images.
pub fn adjunction_transfer(phi: &GraphMorphism, h: &UndirectedGraph) -> Result<UndirectedMorphism> {
    let (double, origin) = bidirect_with_origin(h);
    if phi.target() != &double {
        return Err(Error::domain("morphism does not land in the bidirection of the given graph"));
    }
    let q = phi.edge_map().iter().map(|&f| origin[f]).collect();
    UndirectedMorphism::new(forget(phi.source()), h.clone(), phi.vertex_map().to_vec(), q)
}

/// Sends `U(G) → H` to `G → double(H)`, orienting every edge image along its preimage.
pub fn adjunction_inverse(psi: &UndirectedMorphism, g: &DiGraph) -> Result<GraphMorphism> {
    if psi.source() != &forget(g) {
        return Err(Error::domain("morphism does not start at the underlying graph of the given digraph"));
    }
    let h = psi.target();
    let q = (0..g.edge_count()).map(|e| bidirected_index(h, psi.q(e), psi.p(g.src(e)))).collect();
    GraphMorphism::new(g.clone(), bidirect(h), psi.vertex_map().to_vec(), q)
}

/// Orients the source of an undirected emulator onto a loopless graph so that
/// it becomes a directed emulator onto the given direction.
///
/// `direction` must carry the same vertex and edge ids as the target of `phi`,
/// each edge oriented one way.
pub fn lift_direction(phi: &UndirectedMorphism, direction: &DiGraph) -> Result<GraphMorphism> {
    let (src, tgt) = (phi.source(), phi.target());
    if tgt.loop_count() > 0 {
        return Err(Error::precondition("the base graph has loops"));
    }
    if let Err(v) = check_undirected_emulator(phi)? {
        return Err(Error::precondition(format!("not an undirected emulator: {v}")));
    }
    if direction.vertices() != tgt.vertices() || direction.edge_count() != tgt.edge_count() {
        return Err(Error::domain("direction does not match the base graph"));
    }
    let mut dir_index = vec![0; tgt.edge_count()];
    for (i, e) in tgt.edges().iter().enumerate() {
        let d = direction.require_edge(&e.id)?;
        let de = direction.edge(d);
        let (a, b) = e.unordered();
        let (x, y) = if de.src <= de.dst { (de.src, de.dst) } else { (de.dst, de.src) };
        if (a, b) != (x, y) {
            return Err(Error::domain(format!("direction changes the ends of edge `{}`", e.id)));
        }
        dir_index[i] = d;
    }
    let edges = src
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let want = direction.edge(dir_index[phi.q(i)]);
            let (x, y) = e.ends;
            let (s, t) = if phi.p(x) == want.src { (x, y) } else { (y, x) };
            Edge { id: e.id.clone(), src: s, dst: t }
        })
        .collect();
    let lifted = DiGraph::from_indexed(src.vertices().to_vec(), edges)?;
    let q = (0..src.edge_count()).map(|i| dir_index[phi.q(i)]).collect();
    GraphMorphism::new(lifted, direction.clone(), phi.vertex_map().to_vec(), q)
}
