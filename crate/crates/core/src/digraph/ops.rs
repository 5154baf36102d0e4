use std::collections::{BTreeMap, HashMap, HashSet};

use super::graph::{DiGraph, Edge, UEdge, UndirectedGraph};
use super::morphism::{GraphMorphism, UndirectedMorphism};
use crate::error::{Error, Result};

/// Returns `candidate`, or `candidate#k` for the least `k` keeping it out of `taken`.
pub(crate) fn fresh_id(taken: &mut HashSet<String>, candidate: String) -> String {
    if taken.insert(candidate.clone()) {
        return candidate;
    }
    let mut k = 1usize;
    loop {
        let alt = format!("{candidate}#{k}");
        if taken.insert(alt.clone()) {
            return alt;
        }
        k += 1;
    }
}

/// Collapses every class of edges with equal ordered boundary into one edge.
///
/// The surviving edge keeps the least id of its class; the returned morphism
/// is the identity on vertices and sends every edge to its class.
pub fn simplify(g: &DiGraph) -> (DiGraph, GraphMorphism) {
    let mut class_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut q = Vec::with_capacity(g.edge_count());
    for (i, e) in g.edges().iter().enumerate() {
        let c = *class_of.entry((e.src, e.dst)).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
        if g.edge(i).id < g.edge(reps[c]).id {
            reps[c] = i;
        }
        q.push(c);
    }
    // Order surviving edges by the position of their representative.
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&c| reps[c]);
    let mut rank = vec![0; reps.len()];
    order.iter().enumerate().for_each(|(r, &c)| rank[c] = r);
    let edges = order.iter().map(|&c| g.edge(reps[c]).clone()).collect();
    let r = DiGraph::from_indexed(g.vertices().to_vec(), edges).expect("subset of valid edges");
    let q = q.into_iter().map(|c| rank[c]).collect();
    let rho = GraphMorphism::unchecked(g.clone(), r.clone(), (0..g.vertex_count()).collect(), q)
        .expect("total by construction");
    (r, rho)
}

/// Removes every loop.
pub fn excise(g: &DiGraph) -> DiGraph {
    let edges = g.edges().iter().filter(|e| !e.is_loop()).cloned().collect();
    DiGraph::from_indexed(g.vertices().to_vec(), edges).expect("subset of valid edges")
}

/// Inclusion `Exc(G) → G`.
pub fn excision_inclusion(g: &DiGraph) -> GraphMorphism {
    let exc = excise(g);
    let q = exc.edges().iter().map(|e| g.edge_index(&e.id).expect("kept edge")).collect();
    GraphMorphism::unchecked(exc, g.clone(), (0..g.vertex_count()).collect(), q).expect("inclusion")
}

/// Reverses every edge.
pub fn opposite(g: &DiGraph) -> DiGraph {
    let edges = g.edges().iter().map(|e| Edge { id: e.id.clone(), src: e.dst, dst: e.src }).collect();
    DiGraph::from_indexed(g.vertices().to_vec(), edges).expect("same ids")
}

/// Forgets edge directions.
pub fn forget(g: &DiGraph) -> UndirectedGraph {
    let edges = g.edges().iter().map(|e| UEdge { id: e.id.clone(), ends: (e.src, e.dst) }).collect();
    UndirectedGraph::from_indexed(g.vertices().to_vec(), edges).expect("same ids")
}

pub fn forget_morphism(m: &GraphMorphism) -> UndirectedMorphism {
    UndirectedMorphism::unchecked(
        forget(m.source()),
        forget(m.target()),
        m.vertex_map().to_vec(),
        m.edge_map().to_vec(),
    )
    .expect("same shape")
}

/// Bidirection of an undirected graph together with, for every directed edge,
/// the undirected edge it orients.
///
/// Each non-loop edge `e` with ends `(x, y)` yields `e:x>y` then `e:y>x`; a loop
/// at `x` yields the single edge `e:x>x`.
pub fn bidirect_with_origin(h: &UndirectedGraph) -> (DiGraph, Vec<usize>) {
    let mut taken = HashSet::new();
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    for (i, e) in h.edges().iter().enumerate() {
        let (x, y) = e.ends;
        let orientations: &[(usize, usize)] = if e.is_loop() { &[(x, x)] } else { &[(x, y), (y, x)] };
        for &(a, b) in orientations {
            let id = fresh_id(&mut taken, format!("{}:{}>{}", e.id, h.vertex(a), h.vertex(b)));
            edges.push(Edge { id, src: a, dst: b });
            origin.push(i);
        }
    }
    let g = DiGraph::from_indexed(h.vertices().to_vec(), edges).expect("fresh ids");
    (g, origin)
}

pub fn bidirect(h: &UndirectedGraph) -> DiGraph {
    bidirect_with_origin(h).0
}

/// Index of the directed edge of `bidirect(h)` orienting edge `e` from `from`.
pub(crate) fn bidirected_index(h: &UndirectedGraph, e: usize, from: usize) -> usize {
    let mut k = 0;
    for (i, f) in h.edges().iter().enumerate() {
        if i == e {
            return if f.is_loop() || f.ends.0 == from { k } else { k + 1 };
        }
        k += if f.is_loop() { 1 } else { 2 };
    }
    unreachable!("edge index out of range")
}

/// The bidirection of an undirected morphism.
pub fn bidirect_morphism(m: &UndirectedMorphism) -> GraphMorphism {
    let (src, origin) = bidirect_with_origin(m.source());
    let tgt = bidirect(m.target());
    let q = src.edges().iter().zip(&origin).map(|(e, &o)| bidirected_index(m.target(), m.q(o), m.p(e.src))).collect();
    GraphMorphism::unchecked(src, tgt, m.vertex_map().to_vec(), q).expect("total by construction")
}

/// The fibre product of `phi: G → K` and `psi: H → K` with its two projections.
pub fn pullback(phi: &GraphMorphism, psi: &GraphMorphism) -> Result<(DiGraph, GraphMorphism, GraphMorphism)> {
    if phi.target() != psi.target() {
        return Err(Error::domain("pullback of morphisms with different targets"));
    }
    let (g, h) = (phi.source(), psi.source());
    let mut taken = HashSet::new();
    let mut vertices = Vec::new();
    let mut pair_index = HashMap::new();
    let (mut p1, mut p2) = (Vec::new(), Vec::new());
    for u in 0..g.vertex_count() {
        for v in 0..h.vertex_count() {
            if phi.p(u) == psi.p(v) {
                pair_index.insert((u, v), vertices.len());
                vertices.push(fresh_id(&mut taken, format!("({},{})", g.vertex(u), h.vertex(v))));
                p1.push(u);
                p2.push(v);
            }
        }
    }
    let mut taken = HashSet::new();
    let mut edges = Vec::new();
    let (mut q1, mut q2) = (Vec::new(), Vec::new());
    for (i, e) in g.edges().iter().enumerate() {
        for (j, f) in h.edges().iter().enumerate() {
            if phi.q(i) == psi.q(j) {
                let id = fresh_id(&mut taken, format!("({},{})", e.id, f.id));
                edges.push(Edge { id, src: pair_index[&(e.src, f.src)], dst: pair_index[&(e.dst, f.dst)] });
                q1.push(i);
                q2.push(j);
            }
        }
    }
    let l = DiGraph::from_indexed(vertices, edges)?;
    let pi1 = GraphMorphism::unchecked(l.clone(), g.clone(), p1, q1)?;
    let pi2 = GraphMorphism::unchecked(l.clone(), h.clone(), p2, q2)?;
    Ok((l, pi1, pi2))
}

/// Walk-reachability data of a digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    /// `pr[w]` = sorted vertices with a walk to `w` (including `w`).
    pub pr: Vec<Vec<usize>>,
    /// Vertices reachable from every vertex.
    pub reachable: Vec<usize>,
    /// Vertices from which every vertex is reachable.
    pub co_reachable: Vec<usize>,
}

pub fn reachability(g: &DiGraph) -> Reachability {
    let n = g.vertex_count();
    let mut pr = Vec::with_capacity(n);
    for w in 0..n {
        let mut seen = vec![false; n];
        seen[w] = true;
        let mut stack = vec![w];
        while let Some(v) = stack.pop() {
            for &e in g.in_edges(v) {
                let u = g.src(e);
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        pr.push((0..n).filter(|&v| seen[v]).collect::<Vec<_>>());
    }
    let reachable = (0..n).filter(|&w| pr[w].len() == n).collect();
    let co_reachable = (0..n).filter(|&v| pr.iter().all(|set| set.binary_search(&v).is_ok())).collect();
    Reachability { pr, reachable, co_reachable }
}

/// Strongly connected components (Tarjan), each sorted, listed in reverse topological order.
pub fn strongly_connected_components(g: &DiGraph) -> Vec<Vec<usize>> {
    struct State<'a> {
        g: &'a DiGraph,
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State<'_>, root: usize) {
        // Iterative DFS: frames of (vertex, next out-edge position).
        let mut frames = vec![(root, 0usize)];
        s.index[root] = s.next;
        s.low[root] = s.next;
        s.next += 1;
        s.stack.push(root);
        s.on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&e) = s.g.out_edges(v).get(*pos) {
                *pos += 1;
                let w = s.g.dst(e);
                if s.index[w] == usize::MAX {
                    s.index[w] = s.next;
                    s.low[w] = s.next;
                    s.next += 1;
                    s.stack.push(w);
                    s.on_stack[w] = true;
                    frames.push((w, 0));
                } else if s.on_stack[w] {
                    s.low[v] = s.low[v].min(s.index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                s.low[parent] = s.low[parent].min(s.low[v]);
            }
            if s.low[v] == s.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = s.stack.pop().expect("tarjan stack");
                    s.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                s.out.push(comp);
            }
        }
    }
    let n = g.vertex_count();
    let mut s = State {
        g,
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v] == usize::MAX {
            visit(&mut s, v);
        }
    }
    s.out
}

/// A closed directed walk through pairwise distinct edges, given by edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedCycle {
    pub edges: Vec<String>,
}

impl DirectedCycle {
    pub fn new<S: Into<String>>(edges: impl IntoIterator<Item = S>) -> Self {
        DirectedCycle { edges: edges.into_iter().map(Into::into).collect() }
    }

    /// Resolves the cycle in `g`, checking closure and distinctness.
    pub fn resolve(&self, g: &DiGraph) -> Result<Vec<usize>> {
        if self.edges.is_empty() {
            return Err(Error::domain("empty cycle"));
        }
        let idx = self.edges.iter().map(|e| g.require_edge(e)).collect::<Result<Vec<_>>>()?;
        let mut seen = HashSet::new();
        if !idx.iter().all(|e| seen.insert(*e)) {
            return Err(Error::domain("cycle repeats an edge"));
        }
        for (k, &e) in idx.iter().enumerate() {
            let next = idx[(k + 1) % idx.len()];
            if g.dst(e) != g.src(next) {
                return Err(Error::domain(format!(
                    "edges `{}` and `{}` are not consecutive",
                    g.edge(e).id,
                    g.edge(next).id
                )));
            }
        }
        Ok(idx)
    }
}

/// Contracts a directed cycle to a single fresh vertex.
///
/// The fresh vertex is named by joining the cycle's vertex ids with `+` in
/// walk order and takes the place of the first cycle vertex in vertex order.
/// Cycle edges disappear; every other edge keeps its id, with cycle endpoints
/// replaced by the fresh vertex (so chords become loops and parallel edges
/// are not merged).
pub fn contract_cycle(g: &DiGraph, c: &DirectedCycle) -> Result<DiGraph> {
    let idx = c.resolve(g)?;
    let mut walk: Vec<usize> = Vec::new();
    for &e in &idx {
        let v = g.src(e);
        if !walk.contains(&v) {
            walk.push(v);
        }
    }
    let on_cycle: HashSet<usize> = walk.iter().copied().collect();
    let first = *walk.iter().min().expect("non-empty cycle");
    let mut taken: HashSet<String> =
        (0..g.vertex_count()).filter(|v| !on_cycle.contains(v)).map(|v| g.vertex(v).to_string()).collect();
    let name = fresh_id(&mut taken, walk.iter().map(|&v| g.vertex(v)).collect::<Vec<_>>().join("+"));
    let mut map = vec![usize::MAX; g.vertex_count()];
    let mut vertices = Vec::new();
    for v in 0..g.vertex_count() {
        if v == first {
            map[v] = vertices.len();
            vertices.push(name.clone());
        } else if !on_cycle.contains(&v) {
            map[v] = vertices.len();
            vertices.push(g.vertex(v).to_string());
        }
    }
    let w = map[first];
    for &v in &walk {
        map[v] = w;
    }
    let dropped: HashSet<usize> = idx.into_iter().collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !dropped.contains(i))
        .map(|(_, e)| Edge { id: e.id.clone(), src: map[e.src], dst: map[e.dst] })
        .collect();
    DiGraph::from_indexed(vertices, edges)
}

/// Restriction `(G|_W)|_F`, keeping the original vertex and edge order.
pub fn subgraph<S: AsRef<str>>(g: &DiGraph, w: &[S], f: &[S]) -> Result<DiGraph> {
    let keep_v = w.iter().map(|v| g.require_vertex(v.as_ref())).collect::<Result<HashSet<_>>>()?;
    let keep_e = f.iter().map(|e| g.require_edge(e.as_ref())).collect::<Result<HashSet<_>>>()?;
    Ok(subgraph_by_index(g, |v| keep_v.contains(&v), |e| keep_e.contains(&e)).0)
}

/// Index form of [`subgraph`], also returning the inclusion morphism.
pub fn subgraph_by_index(
    g: &DiGraph,
    keep_v: impl Fn(usize) -> bool,
    keep_e: impl Fn(usize) -> bool,
) -> (DiGraph, GraphMorphism) {
    let mut map = vec![usize::MAX; g.vertex_count()];
    let mut vertices = Vec::new();
    let mut p = Vec::new();
    for v in 0..g.vertex_count() {
        if keep_v(v) {
            map[v] = vertices.len();
            vertices.push(g.vertex(v).to_string());
            p.push(v);
        }
    }
    let mut edges = Vec::new();
    let mut q = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if keep_e(i) && map[e.src] != usize::MAX && map[e.dst] != usize::MAX {
            edges.push(Edge { id: e.id.clone(), src: map[e.src], dst: map[e.dst] });
            q.push(i);
        }
    }
    let sub = DiGraph::from_indexed(vertices, edges).expect("subset of valid graph");
    let inc = GraphMorphism::unchecked(sub.clone(), g.clone(), p, q).expect("inclusion");
    (sub, inc)
}

/// The morphism `R(phi) = (p, p×p)` between simplifications.
pub fn simplify_morphism(phi: &GraphMorphism) -> GraphMorphism {
    let (rg, _) = simplify(phi.source());
    let (rh, _) = simplify(phi.target());
    let by_boundary: HashMap<(usize, usize), usize> =
        rh.edges().iter().enumerate().map(|(i, e)| ((e.src, e.dst), i)).collect();
    let q = rg.edges().iter().map(|e| by_boundary[&(phi.p(e.src), phi.p(e.dst))]).collect();
    GraphMorphism::unchecked(rg, rh, phi.vertex_map().to_vec(), q).expect("boundary exists")
}

/// Searches for an isomorphism `g → h`.
pub fn find_isomorphism(g: &DiGraph, h: &DiGraph) -> Option<GraphMorphism> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    find_embedding(g, h, true)
}

/// Searches for a morphism `g → h` injective on vertices and edges, which
/// exhibits `g` as a subgraph of `h` up to renaming.
pub fn find_subgraph_embedding(g: &DiGraph, h: &DiGraph) -> Option<GraphMorphism> {
    if g.vertex_count() > h.vertex_count() || g.edge_count() > h.edge_count() {
        return None;
    }
    find_embedding(g, h, false)
}

fn find_embedding(g: &DiGraph, h: &DiGraph, exact: bool) -> Option<GraphMorphism> {
    let n = g.vertex_count();
    let m = h.vertex_count();
    let mult = |x: &DiGraph| {
        let mut m: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, e) in x.edges().iter().enumerate() {
            m.entry((e.src, e.dst)).or_default().push(i);
        }
        m
    };
    let (mg, mh) = (mult(g), mult(h));
    let sig = |x: &DiGraph, v: usize| {
        let loops = x.out_edges(v).iter().filter(|&&e| x.dst(e) == v).count();
        (x.out_edges(v).len(), x.in_edges(v).len(), loops)
    };
    let count = |m: &BTreeMap<(usize, usize), Vec<usize>>, a: usize, b: usize| m.get(&(a, b)).map_or(0, Vec::len);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.out_edges(v).len() + g.in_edges(v).len()));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; m];
    fn go(
        k: usize,
        order: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for w in 0..used.len() {
            if !used[w] && ok(v, w, map) {
                map[v] = w;
                used[w] = true;
                if go(k + 1, order, map, used, ok) {
                    return true;
                }
                used[w] = false;
                map[v] = usize::MAX;
            }
        }
        false
    }
    let ok = |v: usize, w: usize, map: &[usize]| {
        let (a, b) = (sig(g, v), sig(h, w));
        let fits = |x: usize, y: usize| if exact { x == y } else { x <= y };
        if !(fits(a.0, b.0) && fits(a.1, b.1) && fits(a.2, b.2)) {
            return false;
        }
        (0..n).filter(|&u| map[u] != usize::MAX || u == v).all(|u| {
            let mu = if u == v { w } else { map[u] };
            fits(count(&mg, v, u), count(&mh, w, mu)) && fits(count(&mg, u, v), count(&mh, mu, w))
        })
    };
    if !go(0, &order, &mut map, &mut used, &ok) {
        return None;
    }
    let mut q = vec![0; g.edge_count()];
    for ((a, b), es) in &mg {
        let fs = &mh[&(map[*a], map[*b])];
        for (e, f) in es.iter().zip(fs) {
            q[*e] = *f;
        }
    }
    GraphMorphism::new(g.clone(), h.clone(), map, q).ok()
}

pub fn is_isomorphic(g: &DiGraph, h: &DiGraph) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vs: &[&str], es: &[(&str, &str, &str)]) -> DiGraph {
        DiGraph::new(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    fn ids(g: &DiGraph) -> Vec<String> {
        g.edges().iter().map(|e| format!("{}:{}>{}", e.id, g.vertex(e.src), g.vertex(e.dst))).collect()
    }

    #[test]
    fn simplify_par2_keeps_least_id() {
        let par2 = g(&["x", "y"], &[("f", "x", "y"), ("e", "x", "y")]);
        let (r, rho) = simplify(&par2);
        assert_eq!(ids(&r), ["e:x>y"]);
        assert_eq!(rho.edge_map(), [0, 0]);
        assert!(rho.is_valid());
    }

    #[test]
    fn simplify_loop2_and_simple_graphs() {
        let loop2 = g(&["v"], &[("a", "v", "v"), ("b", "v", "v")]);
        assert_eq!(simplify(&loop2).0.edge_count(), 1);
        let c2 = g(&["a", "b"], &[("ab", "a", "b"), ("ba", "b", "a")]);
        let (r, rho) = simplify(&c2);
        assert_eq!(r, c2);
        assert!(rho.is_isomorphism());
    }

    #[test]
    fn excise_removes_loops_only() {
        let loop1 = g(&["v"], &[("l", "v", "v")]);
        let e = excise(&loop1);
        assert_eq!((e.vertex_count(), e.edge_count()), (1, 0));
        let c2 = g(&["a", "b"], &[("ab", "a", "b"), ("ba", "b", "a")]);
        assert_eq!(excise(&c2), c2);
    }

    #[test]
    fn opposite_of_example_graph() {
        let x = g(&["v", "w"], &[("g", "v", "v"), ("e", "v", "w"), ("f", "w", "v")]);
        let o = opposite(&x);
        assert_eq!(ids(&o), ["g:v>v", "e:w>v", "f:v>w"]);
        assert_eq!(opposite(&o), x);
    }

    #[test]
    fn forget_identifies_opposites() {
        let c2 = g(&["a", "b"], &[("ab", "a", "b"), ("ba", "b", "a")]);
        let u = forget(&c2);
        assert_eq!(u.edge(0).unordered(), u.edge(1).unordered());
        assert_eq!(forget(&opposite(&c2)), u);
    }

    #[test]
    fn bidirect_edge_and_loop() {
        let h = UndirectedGraph::new(["x", "y"], [("e", "x", "y"), ("l", "x", "x")]).unwrap();
        assert_eq!(ids(&bidirect(&h)), ["e:x>y:x>y", "e:y>x:y>x", "l:x>x:x>x"]);
        let empty = UndirectedGraph::new(Vec::<String>::new(), Vec::<(String, String, String)>::new()).unwrap();
        assert_eq!(bidirect(&empty).vertex_count(), 0);
    }

    #[test]
    fn pullback_of_par2_rho_along_itself() {
        let par2 = g(&["x", "y"], &[("e", "x", "y"), ("f", "x", "y")]);
        let (_, rho) = simplify(&par2);
        let (l, pi1, pi2) = pullback(&rho, &rho).unwrap();
        assert_eq!((l.vertex_count(), l.edge_count()), (2, 4));
        assert!(pi1.is_valid() && pi2.is_valid());
    }

    #[test]
    fn pullback_rejects_mismatched_targets() {
        let a = g(&["x"], &[]);
        let b = g(&["y"], &[]);
        assert!(pullback(&GraphMorphism::identity(&a), &GraphMorphism::identity(&b)).is_err());
    }

    #[test]
    fn reachability_small_cases() {
        let p2 = g(&["x", "y"], &[("e", "x", "y")]);
        let r = reachability(&p2);
        assert_eq!(r.pr[1], [0, 1]);
        assert_eq!(r.reachable, [1]);
        assert_eq!(r.co_reachable, [0]);
        let two = g(&["a", "b"], &[]);
        let r = reachability(&two);
        assert!(r.reachable.is_empty() && r.co_reachable.is_empty());
    }

    #[test]
    fn scc_sinks_first() {
        let x = g(&["a", "b", "c"], &[("1", "a", "b"), ("2", "b", "a"), ("3", "b", "c")]);
        assert_eq!(strongly_connected_components(&x), vec![vec![2], vec![0, 1]]);
    }

    #[test]
    fn contract_triangle_and_loop() {
        let t = g(&["a", "b", "c"], &[("1", "a", "b"), ("2", "b", "c"), ("3", "c", "a")]);
        let c = contract_cycle(&t, &DirectedCycle::new(["1", "2", "3"])).unwrap();
        assert_eq!(c.vertices(), ["a+b+c"]);
        assert_eq!(c.edge_count(), 0);
        let l = g(&["v", "w"], &[("l", "v", "v"), ("e", "v", "w")]);
        let c = contract_cycle(&l, &DirectedCycle::new(["l"])).unwrap();
        assert_eq!(ids(&c), ["e:v>w"]);
        assert!(contract_cycle(&t, &DirectedCycle::new(["1", "3"])).is_err());
        assert!(contract_cycle(&t, &DirectedCycle::new(["1", "1"])).is_err());
    }

    #[test]
    fn contraction_turns_chords_into_loops() {
        let x = g(&["a", "b", "z"], &[("1", "a", "b"), ("2", "b", "a"), ("3", "a", "b"), ("4", "b", "z")]);
        let c = contract_cycle(&x, &DirectedCycle::new(["1", "2"])).unwrap();
        assert_eq!(ids(&c), ["3:a+b>a+b", "4:a+b>z"]);
    }

    #[test]
    fn subgraph_restrictions() {
        let fork = g(&["v0", "v1", "v2"], &[("a", "v0", "v1"), ("b", "v0", "v2")]);
        let s = subgraph(&fork, &["v0", "v1"], &["a", "b"]).unwrap();
        assert_eq!(ids(&s), ["a:v0>v1"]);
        let all = subgraph(&fork, &["v0", "v1", "v2"], &["a", "b"]).unwrap();
        assert_eq!(all, fork);
    }

    #[test]
    fn isomorphism_search() {
        let c3a = g(&["a", "b", "c"], &[("1", "a", "b"), ("2", "b", "c"), ("3", "c", "a")]);
        let c3b = g(&["x", "y", "z"], &[("p", "x", "z"), ("q", "z", "y"), ("r", "y", "x")]);
        assert!(is_isomorphic(&c3a, &c3b));
        let p3 = g(&["x", "y", "z"], &[("p", "x", "z"), ("q", "z", "y"), ("r", "x", "y")]);
        assert!(!is_isomorphic(&c3a, &p3));
    }

    #[test]
    fn subgraph_embedding_search() {
        let c3 = g(&["a", "b", "c"], &[("1", "a", "b"), ("2", "b", "c"), ("3", "c", "a")]);
        let k4: Vec<(String, String, String)> = (0..4)
            .flat_map(|i| {
                (0..4).filter(move |&j| j != i).map(move |j| (format!("{i}{j}"), i.to_string(), j.to_string()))
            })
            .collect();
        let k4 = DiGraph::new((0..4).map(|i| i.to_string()), k4).unwrap();
        let m = find_subgraph_embedding(&c3, &k4).unwrap();
        assert!(m.is_valid());
        let mut hit: Vec<usize> = m.edge_map().to_vec();
        hit.sort();
        hit.dedup();
        assert_eq!(hit.len(), 3);
        assert!(find_subgraph_embedding(&k4, &c3).is_none());
        let two_loops = g(&["v"], &[("x", "v", "v"), ("y", "v", "v")]);
        let one_loop = g(&["v", "w"], &[("x", "v", "v"), ("z", "v", "w")]);
        assert!(find_subgraph_embedding(&two_loops, &one_loop).is_none());
    }
}
