use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use super::{minus, plus, trace_faces, RotationSystem};
use crate::digraph::UndirectedGraph;

/// Outcome of a planarity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Planarity {
    pub planar: bool,
    /// Genus-0 rotation system when planar.
    pub witness: Option<RotationSystem>,
    /// Edge ids of a biconnected block that admits no planar embedding.
    pub obstruction: Option<Vec<String>>,
}

/// Demoucron–Malgrange–Pertuiset planarity test on the biconnected blocks of
/// the simple reduction, followed by reinsertion of parallel edges and loops.
pub fn is_planar(g: &UndirectedGraph) -> Planarity {
    let n = g.vertex_count();
    // Simple reduction: one representative per vertex pair.
    let mut rep: HashMap<(usize, usize), usize> = HashMap::new();
    let mut parallels: Vec<(usize, usize)> = Vec::new();
    let mut loops = Vec::new();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            loops.push(i);
            continue;
        }
        match rep.entry(e.unordered()) {
            std::collections::hash_map::Entry::Occupied(o) => parallels.push((i, *o.get())),
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(i);
                adj[e.ends.0].push((e.ends.1, i));
                adj[e.ends.1].push((e.ends.0, i));
            }
        }
    }
    let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); n];
    for block in blocks(&adj) {
        if block.len() == 1 {
            let e = g.edge(block[0]);
            rotations[e.ends.0].push(plus(block[0]));
            rotations[e.ends.1].push(minus(block[0]));
            continue;
        }
        match embed_block(g, &block) {
            Some(rot) => {
                for (v, darts) in rot {
                    rotations[v].extend(darts);
                }
            }
            None => {
                let mut ids: Vec<String> = block.iter().map(|&e| g.edge(e).id.clone()).collect();
                ids.sort();
                return Planarity { planar: false, witness: None, obstruction: Some(ids) };
            }
        }
    }
    let dart_at = |e: usize, v: usize| if g.edge(e).ends.0 == v { plus(e) } else { minus(e) };
    for (p, r) in parallels {
        let (u, v) = g.edge(r).ends;
        let at_u = rotations[u].iter().position(|&d| d == dart_at(r, u)).expect("representative placed");
        rotations[u].insert(at_u, dart_at(p, u));
        let at_v = rotations[v].iter().position(|&d| d == dart_at(r, v)).expect("representative placed");
        rotations[v].insert(at_v + 1, dart_at(p, v));
    }
    for l in loops {
        let v = g.edge(l).ends.0;
        rotations[v].extend([minus(l), plus(l)]);
    }
    let witness = RotationSystem::new(g, rotations).expect("every dart placed once");
    assert_eq!(trace_faces(g, &witness).genus, 0, "planar embedding failed to verify");
    Planarity { planar: true, witness: Some(witness), obstruction: None }
}

/// Biconnected blocks as edge lists (Hopcroft–Tarjan).
fn blocks(adj: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, edge used to enter, next neighbour position)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, via, ref mut pos)) = frames.last_mut() {
            if *pos < adj[v].len() {
                let (w, e) = adj[v][*pos];
                *pos += 1;
                if e == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut block = Vec::new();
                        while let Some(e) = stack.pop() {
                            block.push(e);
                            if e == via {
                                break;
                            }
                        }
                        block.reverse();
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Planar rotation of a 2-connected simple block with at least two edges,
/// restricted to the block's darts.
fn embed_block(g: &UndirectedGraph, block: &[usize]) -> Option<BTreeMap<usize, Vec<usize>>> {
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &e in block {
        let (a, b) = g.edge(e).ends;
        adj.entry(a).or_default().push((b, e));
        adj.entry(b).or_default().push((a, e));
    }
    let cycle = find_cycle(&adj);
    let mut in_v: HashSet<usize> = cycle.iter().copied().collect();
    let mut in_e: HashSet<usize> = HashSet::new();
    for i in 0..cycle.len() {
        in_e.insert(edge_between(&adj, cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces: Vec<Vec<usize>> = vec![cycle, rev];
    while in_e.len() < block.len() {
        let fragments = fragments(&adj, &in_v, &in_e);
        let mut choice: Option<(usize, usize)> = None;
        for (k, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> =
                (0..faces.len()).filter(|&f| frag.attachments.iter().all(|a| faces[f].contains(a))).collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((k, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((k, admissible[0]));
                    }
                }
            }
        }
        let (k, f) = choice.expect("a fragment remains");
        let path = fragment_path(&adj, &fragments[k], &in_v);
        for w in path.windows(2) {
            in_e.insert(edge_between(&adj, w[0], w[1]));
        }
        in_v.extend(path.iter().copied());
        let face = faces.swap_remove(f);
        let (a, b) = (path[0], path[path.len() - 1]);
        let ia = face.iter().position(|&x| x == a).expect("attachment on face");
        let len = face.len();
        let mut first = Vec::new();
        let mut i = ia;
        loop {
            first.push(face[i]);
            if face[i] == b {
                break;
            }
            i = (i + 1) % len;
        }
        let mut second = Vec::new();
        loop {
            second.push(face[i]);
            if face[i] == a {
                break;
            }
            i = (i + 1) % len;
        }
        let inner = &path[1..path.len() - 1];
        first.extend(inner.iter().rev());
        second.extend(inner.iter());
        faces.push(first);
        faces.push(second);
    }
    // A face ... u, v, w ... means that the dart v→w follows v→u around v.
    let mut succ: HashMap<(usize, usize), usize> = HashMap::new();
    for face in &faces {
        let len = face.len();
        for i in 0..len {
            let (u, v, w) = (face[(i + len - 1) % len], face[i], face[(i + 1) % len]);
            succ.insert((v, u), w);
        }
    }
    let dart = |v: usize, u: usize| {
        let e = edge_between(&adj, v, u);
        if g.edge(e).ends.0 == v {
            plus(e)
        } else {
            minus(e)
        }
    };
    let mut out = BTreeMap::new();
    for (&v, nbrs) in &adj {
        let start = nbrs[0].0;
        let mut rot = vec![dart(v, start)];
        let mut u = succ[&(v, start)];
        while u != start {
            rot.push(dart(v, u));
            u = succ[&(v, u)];
        }
        debug_assert_eq!(rot.len(), nbrs.len());
        out.insert(v, rot);
    }
    Some(out)
}

fn edge_between(adj: &BTreeMap<usize, Vec<(usize, usize)>>, a: usize, b: usize) -> usize {
    adj[&a].iter().find(|&&(w, _)| w == b).expect("adjacent").1
}

/// A cycle through the smallest vertex, found by depth-first search.
fn find_cycle(adj: &BTreeMap<usize, Vec<(usize, usize)>>) -> Vec<usize> {
    let start = *adj.keys().next().expect("non-empty block");
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut depth: HashMap<usize, usize> = HashMap::from([(start, 0)]);
    let mut stack = vec![(start, 0usize)];
    while let Some((v, pos)) = stack.pop() {
        if pos < adj[&v].len() {
            stack.push((v, pos + 1));
            let w = adj[&v][pos].0;
            if parent.get(&v) == Some(&w) {
                continue;
            }
            if let Some(&dw) = depth.get(&w) {
                if dw < depth[&v] {
                    let mut cyc = vec![v];
                    let mut x = v;
                    while x != w {
                        x = parent[&x];
                        cyc.push(x);
                    }
                    cyc.reverse();
                    return cyc;
                }
                continue;
            }
            parent.insert(w, v);
            depth.insert(w, depth[&v] + 1);
            stack.push((w, 0));
        }
    }
    unreachable!("a 2-connected block with two or more edges has a cycle")
}

struct Fragment {
    /// Vertices off the embedded part; empty for a chord.
    inner: Vec<usize>,
    chord: Option<(usize, usize)>,
    attachments: Vec<usize>,
}

fn fragments(
    adj: &BTreeMap<usize, Vec<(usize, usize)>>,
    in_v: &HashSet<usize>,
    in_e: &HashSet<usize>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (&v, nbrs) in adj {
        if !in_v.contains(&v) {
            continue;
        }
        for &(w, e) in nbrs {
            if v < w && in_v.contains(&w) && !in_e.contains(&e) {
                out.push(Fragment { inner: Vec::new(), chord: Some((v, w)), attachments: vec![v, w] });
            }
        }
    }
    let mut seen: HashSet<usize> = HashSet::new();
    for &v in adj.keys() {
        if in_v.contains(&v) || seen.contains(&v) {
            continue;
        }
        let mut inner = vec![v];
        let mut attach = std::collections::BTreeSet::new();
        seen.insert(v);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adj[&x] {
                if in_v.contains(&y) {
                    attach.insert(y);
                } else if seen.insert(y) {
                    inner.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.push(Fragment { inner, chord: None, attachments: attach.into_iter().collect() });
    }
    out
}

/// Path through a fragment joining two distinct attachments.
fn fragment_path(adj: &BTreeMap<usize, Vec<(usize, usize)>>, frag: &Fragment, in_v: &HashSet<usize>) -> Vec<usize> {
    if let Some((a, b)) = frag.chord {
        return vec![a, b];
    }
    let inner: HashSet<usize> = frag.inner.iter().copied().collect();
    let a = frag.attachments[0];
    let c = adj[&a].iter().map(|&(w, _)| w).find(|w| inner.contains(w)).expect("attachment touches fragment");
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([c]);
    let mut seen: HashSet<usize> = HashSet::from([c]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &adj[&x] {
            if in_v.contains(&y) {
                if y != a {
                    let mut path = vec![y, x];
                    let mut z = x;
                    while z != c {
                        z = parent[&z];
                        path.push(z);
                    }
                    path.push(a);
                    path.reverse();
                    return path;
                }
            } else if seen.insert(y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("fragments of a 2-connected block have two attachments")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus::tests::{complete, complete_bipartite};

    #[test]
    fn small_complete_graphs() {
        assert!(is_planar(&complete(4)).planar);
        assert!(!is_planar(&complete(5)).planar);
        assert!(!is_planar(&complete_bipartite(3, 3)).planar);
        assert!(!is_planar(&complete(7)).planar);
        assert!(is_planar(&complete_bipartite(2, 5)).planar);
    }

    #[test]
    fn multigraph_with_loops_and_cut_vertices() {
        let g = UndirectedGraph::new(
            ["a", "b", "c", "d", "e", "z"],
            [
                ("1", "a", "b"),
                ("2", "b", "c"),
                ("3", "c", "a"),
                ("4", "c", "d"),
                ("5", "d", "e"),
                ("6", "e", "c"),
                ("7", "a", "b"),
                ("8", "b", "a"),
                ("9", "d", "d"),
                ("10", "d", "d"),
            ],
        )
        .unwrap();
        let p = is_planar(&g);
        assert!(p.planar);
        assert_eq!(trace_faces(&g, p.witness.as_ref().unwrap()).genus, 0);
    }

    #[test]
    fn petersen_is_not_planar() {
        let outer = (0..5).map(|i| (format!("o{i}"), format!("{i}"), format!("{}", (i + 1) % 5)));
        let spokes = (0..5).map(|i| (format!("s{i}"), format!("{i}"), format!("{}", i + 5)));
        let inner = (0..5).map(|i| (format!("i{i}"), format!("{}", i + 5), format!("{}", (i + 2) % 5 + 5)));
        let g = UndirectedGraph::new((0..10).map(|i| i.to_string()), outer.chain(spokes).chain(inner)).unwrap();
        let p = is_planar(&g);
        assert!(!p.planar);
        assert_eq!(p.obstruction.unwrap().len(), 15);
    }
}
