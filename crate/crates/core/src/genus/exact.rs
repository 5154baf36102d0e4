use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{darts_at, girth_lower_bound, is_planar, rotation_count, twin, RotationSystem};
use crate::digraph::{UEdge, UndirectedGraph};
use crate::error::{Error, Result};

/// Default ceiling on the number of rotation systems an exact search may face.
pub const DEFAULT_MAX_ROTATIONS: f64 = 1e9;

/// Rotation-system ceiling, overridable through `REGULUS_BUDGET`.
pub fn rotation_budget() -> f64 {
    std::env::var("REGULUS_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|x| *x > 0.0)
        .unwrap_or(DEFAULT_MAX_ROTATIONS)
}

/// Limits for [`genus_exact_with`].
#[derive(Debug, Clone)]
pub struct GenusBudget {
    pub max_rotations: f64,
    /// Run even when the rotation count exceeds `max_rotations`.
    pub force: bool,
    /// Worker threads; zero uses the global pool.
    pub jobs: usize,
    /// Answer planar graphs through the planarity test before searching.
    pub use_planarity: bool,
}

impl Default for GenusBudget {
    fn default() -> Self {
        GenusBudget { max_rotations: rotation_budget(), force: false, jobs: 0, use_planarity: true }
    }
}

impl GenusBudget {
    /// Pure branch and bound, no planarity shortcut.
    pub fn search_only() -> Self {
        GenusBudget { use_planarity: false, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusResult {
    pub genus: usize,
    pub witness: RotationSystem,
    pub faces: usize,
}

/// Minimum genus over all rotation systems.
pub fn genus_exact(g: &UndirectedGraph) -> Result<GenusResult> {
    genus_exact_with(g, &GenusBudget::default())
}

pub fn genus_exact_with(g: &UndirectedGraph, budget: &GenusBudget) -> Result<GenusResult> {
    if budget.use_planarity {
        let p = is_planar(g);
        if let Some(witness) = p.witness {
            let faces = super::trace_faces(g, &witness).faces.len();
            return Ok(GenusResult { genus: 0, witness, faces });
        }
    }
    let reduction = super::Reduction::new(g);
    let simple = &reduction.simple;
    let count = rotation_count(simple);
    if count > budget.max_rotations && !budget.force {
        return Err(Error::Budget(format!(
            "{count:.3e} rotation systems exceed the budget of {:.3e}; use the lower-bound operations or force",
            budget.max_rotations
        )));
    }
    let run = || solve(simple);
    let rotations = if budget.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(budget.jobs)
            .build()
            .map_err(|e| Error::domain(e.to_string()))?
            .install(run)
    } else {
        run()
    };
    let witness = RotationSystem::new(g, reduction.lift(g, &rotations))?;
    let trace = super::trace_faces(g, &witness);
    Ok(GenusResult { genus: trace.genus, faces: trace.faces.len(), witness })
}

fn solve(g: &UndirectedGraph) -> Vec<Vec<usize>> {
    let mut rotations = vec![Vec::new(); g.vertex_count()];
    for comp in g.components() {
        let mut local = vec![usize::MAX; g.vertex_count()];
        comp.iter().enumerate().for_each(|(i, &v)| local[v] = i);
        let mut edge_ids = Vec::new();
        let mut edges = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            if local[e.ends.0] != usize::MAX {
                edges.push(UEdge { id: e.id.clone(), ends: (local[e.ends.0], local[e.ends.1]) });
                edge_ids.push(i);
            }
        }
        if edges.is_empty() {
            continue;
        }
        let vertices = comp.iter().map(|&v| g.vertex(v).to_string()).collect();
        let sub = UndirectedGraph::from_indexed(vertices, edges).expect("component of a valid graph");
        let best = maximize_faces(&sub);
        let to_global = |d: usize| 2 * edge_ids[d / 2] + d % 2;
        for (i, rot) in best.into_iter().enumerate() {
            rotations[comp[i]] = rot.into_iter().map(to_global).collect();
        }
    }
    rotations
}

#[derive(Clone, Copy)]
enum Undo {
    Close { len: usize },
    Merge { head: usize, tail: usize, a: usize, b: usize, old_len: usize },
}

/// Partial face structure: the successor map built so far is a union of
/// closed cycles and open chains.
#[derive(Clone)]
struct Chains {
    head_of: Vec<usize>,
    tail_of: Vec<usize>,
    len: Vec<usize>,
    closed: usize,
    closed_darts: usize,
    links: usize,
    undo: Vec<Undo>,
    total: usize,
    min_len: usize,
}

impl Chains {
    fn new(total: usize, min_len: usize) -> Self {
        Chains {
            head_of: (0..total).collect(),
            tail_of: (0..total).collect(),
            len: vec![1; total],
            closed: 0,
            closed_darts: 0,
            links: 0,
            undo: Vec::new(),
            total,
            min_len,
        }
    }

    /// Sets `next(a) = b`, where `a` ends a chain and `b` starts one.
    fn link(&mut self, a: usize, b: usize) {
        let h = self.head_of[a];
        if h == b {
            self.closed += 1;
            self.closed_darts += self.len[b];
            self.undo.push(Undo::Close { len: self.len[b] });
        } else {
            let t = self.tail_of[b];
            self.undo.push(Undo::Merge { head: h, tail: t, a, b, old_len: self.len[h] });
            self.tail_of[h] = t;
            self.head_of[t] = h;
            self.len[h] += self.len[b];
        }
        self.links += 1;
    }

    fn unlink(&mut self) {
        self.links -= 1;
        match self.undo.pop().expect("undo entry") {
            Undo::Close { len } => {
                self.closed -= 1;
                self.closed_darts -= len;
            }
            Undo::Merge { head, tail, a, b, old_len } => {
                self.tail_of[head] = a;
                self.head_of[tail] = b;
                self.len[head] = old_len;
            }
        }
    }

    /// Most faces any completion can reach.
    fn bound(&self) -> usize {
        let open_slots = self.total - self.links;
        let open_darts = self.total - self.closed_darts;
        self.closed + open_slots.min(open_darts / self.min_len)
    }
}

struct Search<'a> {
    darts: &'a [Vec<usize>],
    order: &'a [usize],
    chains: Chains,
    rot: Vec<Vec<usize>>,
    best: usize,
    best_rot: Vec<Vec<usize>>,
    cap: usize,
    shared: &'a AtomicUsize,
    stop_at: &'a AtomicUsize,
    index: usize,
}

impl<'a> Search<'a> {
    fn pruned(&self) -> bool {
        let b = self.chains.bound();
        b <= self.best || b < self.shared.load(Ordering::Relaxed) || self.stop_at.load(Ordering::Relaxed) < self.index
    }

    fn vertex(&mut self, k: usize) {
        if self.best >= self.cap {
            return;
        }
        if k == self.order.len() {
            if self.chains.closed > self.best {
                self.best = self.chains.closed;
                self.best_rot = self.rot.clone();
                self.shared.fetch_max(self.best, Ordering::Relaxed);
                if self.best >= self.cap {
                    self.stop_at.fetch_min(self.index, Ordering::Relaxed);
                }
            }
            return;
        }
        let v = self.order[k];
        let darts: &'a [Vec<usize>] = self.darts;
        let ds = &darts[v];
        let mut used = vec![false; ds.len()];
        used[0] = true;
        self.rot[v].clear();
        self.rot[v].push(ds[0]);
        self.place(k, v, &mut used, 1);
    }

    fn place(&mut self, k: usize, v: usize, used: &mut [bool], filled: usize) {
        let darts: &'a [Vec<usize>] = self.darts;
        let ds = &darts[v];
        let prev = *self.rot[v].last().expect("started");
        if filled == ds.len() {
            if k == 0 && ds.len() >= 3 {
                // Global reversal maps a system to one of the same genus.
                let pos = |d: usize| ds.iter().position(|&x| x == d).expect("own dart");
                if pos(self.rot[v][1]) > pos(prev) {
                    return;
                }
            }
            self.chains.link(twin(prev), ds[0]);
            if !self.pruned() {
                self.vertex(k + 1);
            }
            self.chains.unlink();
            return;
        }
        for i in 1..ds.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            self.chains.link(twin(prev), ds[i]);
            self.rot[v].push(ds[i]);
            if !self.pruned() {
                self.place(k, v, used, filled + 1);
            }
            self.rot[v].pop();
            self.chains.unlink();
            used[i] = false;
            if self.best >= self.cap {
                return;
            }
        }
    }
}

/// All cyclic orders of `ds` starting with `ds[0]`, optionally one per mirror pair.
fn cyclic_orders(ds: &[usize], mirror: bool) -> Vec<Vec<usize>> {
    fn rec(ds: &[usize], cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == ds.len() {
            out.push(cur.clone());
            return;
        }
        for i in 1..ds.len() {
            if !used[i] {
                used[i] = true;
                cur.push(ds[i]);
                rec(ds, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; ds.len()];
    used[0] = true;
    rec(ds, &mut vec![ds[0]], &mut used, &mut out);
    if mirror && ds.len() >= 3 {
        let pos = |d: usize| ds.iter().position(|&x| x == d).expect("own dart");
        out.retain(|o| pos(o[1]) < pos(o[o.len() - 1]));
    }
    out
}

/// Rotation system with the most faces on a connected graph with at least one edge.
fn maximize_faces(g: &UndirectedGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let darts = darts_at(g);
    let total = 2 * g.edge_count();
    let min_len = if g.loop_count() > 0 {
        1
    } else if g.girth().is_none_or(|x| x >= 3) && (0..n).all(|v| g.degree(v) >= 2) {
        3
    } else {
        2
    };
    let lb = girth_lower_bound(g);
    let cap = (2 + g.edge_count()).saturating_sub(n + 2 * lb).max(1);
    let order = bfs_order(g);
    // Split the search at the first one or two vertices.
    let mut prefixes: Vec<Vec<Vec<usize>>> =
        cyclic_orders(&darts[order[0]], true).into_iter().map(|o| vec![o]).collect();
    if prefixes.len() < 32 && order.len() > 1 {
        let second = cyclic_orders(&darts[order[1]], false);
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| second.iter().map(move |o| [p.clone(), vec![o.clone()]].concat()))
            .collect();
    }
    let shared = AtomicUsize::new(0);
    let stop_at = AtomicUsize::new(usize::MAX);
    let results: Vec<(usize, Vec<Vec<usize>>)> = prefixes
        .par_iter()
        .enumerate()
        .map(|(index, prefix)| {
            let mut s = Search {
                darts: &darts,
                order: &order,
                chains: Chains::new(total, min_len),
                rot: vec![Vec::new(); n],
                best: 0,
                best_rot: Vec::new(),
                cap,
                shared: &shared,
                stop_at: &stop_at,
                index,
            };
            for (k, o) in prefix.iter().enumerate() {
                let v = order[k];
                for w in 0..o.len() {
                    s.chains.link(twin(o[w]), o[(w + 1) % o.len()]);
                }
                s.rot[v] = o.clone();
            }
            if !s.pruned() {
                s.vertex(prefix.len());
            }
            (s.best, s.best_rot)
        })
        .collect();
    let top = results.iter().map(|r| r.0).max().expect("at least one prefix");
    results.into_iter().find(|r| r.0 == top).expect("maximum present").1
}

fn bfs_order(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let start = (0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).expect("non-empty");
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &e in g.incident(v) {
            let w = g.edge(e).other(v);
            if !seen[w] {
                seen[w] = true;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    order
}
