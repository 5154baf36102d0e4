use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::check_directed_cover;
use crate::digraph::{forget, DiGraph, Edge, GraphMorphism, UEdge, UndirectedGraph};
use crate::error::{Error, Result};
use crate::genus::{euler_bound, genus_exact_with, is_planar, trace_faces, GenusBudget, RotationSystem};

/// Bounded search for directed covers of low genus.
#[derive(Debug, Clone)]
pub struct CoverSearchSpec {
    pub base: DiGraph,
    /// Largest fibre size tried over any base vertex.
    pub max_fiber: usize,
    pub genus_bound: usize,
    /// Only weakly connected covers count.
    pub connected_only: bool,
    pub time_budget: Duration,
    /// Rotation-system ceiling for exact genus checks of candidates.
    pub max_rotations: f64,
}

impl CoverSearchSpec {
    pub fn new(base: DiGraph, max_fiber: usize, genus_bound: usize) -> Self {
        CoverSearchSpec {
            base,
            max_fiber,
            genus_bound,
            connected_only: true,
            time_budget: Duration::from_secs(300),
            max_rotations: 1e8,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_fiber == 0 {
            return Err(Error::domain("max_fiber must be at least 1"));
        }
        if self.base.vertex_count() == 0 {
            return Err(Error::domain("base graph is empty"));
        }
        Ok(())
    }
}

/// A directed cover together with an embedding of its underlying graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub total: DiGraph,
    pub morphism: GraphMorphism,
    pub genus_witness: RotationSystem,
    pub genus: usize,
}

impl CoverCertificate {
    /// Re-checks the cover property and the genus claimed by the witness.
    pub fn verify(&self) -> Result<()> {
        if self.morphism.source() != &self.total {
            return Err(Error::domain("certificate morphism does not start at the total graph"));
        }
        if let Err(v) = check_directed_cover(&self.morphism)? {
            return Err(Error::domain(format!("certificate is not a directed cover: {v}")));
        }
        let u = forget(&self.total);
        let traced = trace_faces(&u, &self.genus_witness).genus;
        if traced != self.genus {
            return Err(Error::domain(format!(
                "witness embeds with genus {traced}, certificate claims {}",
                self.genus
            )));
        }
        Ok(())
    }

    pub fn base(&self) -> &DiGraph {
        self.morphism.target()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<CoverCertificate>),
    /// No cover within the bounds; a proof of non-existence at this size.
    Exhausted,
    BudgetExceeded(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub fiber_vectors: usize,
    /// Fibre vectors discarded by the Euler bound before any assignment.
    pub euler_pruned: usize,
    pub nodes: usize,
    pub leaves: usize,
    /// Candidates whose genus could not be decided within the rotation budget.
    pub undecided: usize,
}

/// Enumerates covers fibre vector by fibre vector (increasing total size,
/// then lexicographically). Each base edge `u → v` and each vertex over `u`
/// choose a target over `v`; fibre indices are introduced in order of first
/// use, which removes most relabellings. The least cover in this order that
/// meets the bounds is returned.
pub fn search_covers(spec: &CoverSearchSpec) -> Result<(SearchOutcome, SearchStats)> {
    spec.validate()?;
    let base = &spec.base;
    let deadline = Instant::now() + spec.time_budget;
    // Without sinks every component of a cover carries a cycle, so the Euler
    // bound applies to it; a loop or digon in the base voids the bound.
    let no_sinks = (0..base.vertex_count()).all(|v| !base.out_edges(v).is_empty());
    let gamma = if no_sinks { forget(base).girth().map_or(3, |g| g.min(3)) } else { 0 };
    let n = base.vertex_count();
    let mut stats = SearchStats::default();
    let mut timed_out = false;
    for total in n..=n * spec.max_fiber {
        let vectors = fiber_vectors(n, spec.max_fiber, total);
        let mut live = Vec::new();
        for k in vectors {
            stats.fiber_vectors += 1;
            let edges: usize = base.edges().iter().map(|e| k[e.src]).sum();
            if gamma >= 3 && euler_bound(total, edges, gamma) > spec.genus_bound {
                stats.euler_pruned += 1;
            } else {
                live.push(k);
            }
        }
        let found_at = AtomicUsize::new(usize::MAX);
        let out_of_time = AtomicBool::new(false);
        let shared = Mutex::new(SearchStats::default());
        let results: Vec<Option<CoverCertificate>> = live
            .par_iter()
            .enumerate()
            .map(|(index, k)| {
                let mut s = Assign::new(spec, k, deadline, index, &found_at, &out_of_time);
                s.run(0);
                let mut st = shared.lock().expect("stats lock");
                st.nodes += s.stats.nodes;
                st.leaves += s.stats.leaves;
                st.undecided += s.stats.undecided;
                if s.found.is_some() {
                    found_at.fetch_min(index, Ordering::Relaxed);
                }
                s.found
            })
            .collect();
        let st = shared.into_inner().expect("stats lock");
        stats.nodes += st.nodes;
        stats.leaves += st.leaves;
        stats.undecided += st.undecided;
        if let Some(cert) = results.into_iter().flatten().next() {
            return Ok((SearchOutcome::Found(Box::new(cert)), stats));
        }
        if out_of_time.load(Ordering::Relaxed) {
            timed_out = true;
            break;
        }
    }
    let outcome = if timed_out {
        SearchOutcome::BudgetExceeded(format!("time budget of {:?} exhausted", spec.time_budget))
    } else if stats.undecided > 0 {
        SearchOutcome::BudgetExceeded(format!("{} candidates exceeded the genus budget", stats.undecided))
    } else {
        SearchOutcome::Exhausted
    };
    Ok((outcome, stats))
}

/// Vectors in `1..=max` with the given sum, in lexicographic order.
fn fiber_vectors(n: usize, max: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, max: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        let slots = n - prefix.len();
        if slots == 0 {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for k in 1..=max {
            let rest = slots - 1;
            if k > left || left - k < rest || left - k > rest * max {
                continue;
            }
            prefix.push(k);
            rec(prefix, n, max, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, max, total, &mut out);
    out
}

struct Assign<'a> {
    spec: &'a CoverSearchSpec,
    k: &'a [usize],
    deadline: Instant,
    index: usize,
    found_at: &'a AtomicUsize,
    out_of_time: &'a AtomicBool,
    /// `(base edge, fibre index of its source)` in assignment order.
    slots: Vec<(usize, usize)>,
    /// Slot positions after which every lift of a base edge is placed.
    checkpoints: Vec<bool>,
    offset: Vec<usize>,
    targets: Vec<usize>,
    touched: Vec<usize>,
    found: Option<CoverCertificate>,
    stats: SearchStats,
}

impl<'a> Assign<'a> {
    fn new(
        spec: &'a CoverSearchSpec,
        k: &'a [usize],
        deadline: Instant,
        index: usize,
        found_at: &'a AtomicUsize,
        out_of_time: &'a AtomicBool,
    ) -> Self {
        let base = &spec.base;
        let mut slots = Vec::new();
        let mut checkpoints = Vec::new();
        for (e, edge) in base.edges().iter().enumerate() {
            for i in 0..k[edge.src] {
                slots.push((e, i));
                checkpoints.push(i + 1 == k[edge.src]);
            }
        }
        let mut offset = vec![0; k.len()];
        for v in 1..k.len() {
            offset[v] = offset[v - 1] + k[v - 1];
        }
        Assign {
            spec,
            k,
            deadline,
            index,
            found_at,
            out_of_time,
            targets: vec![0; slots.len()],
            slots,
            checkpoints,
            offset,
            touched: vec![0; k.len()],
            found: None,
            stats: SearchStats::default(),
        }
    }

    fn stopped(&self) -> bool {
        if self.found.is_some() || self.found_at.load(Ordering::Relaxed) < self.index {
            return true;
        }
        if self.out_of_time.load(Ordering::Relaxed) {
            return true;
        }
        if self.stats.nodes % 1024 == 0 && Instant::now() > self.deadline {
            self.out_of_time.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    fn run(&mut self, s: usize) {
        self.stats.nodes += 1;
        if self.stopped() {
            return;
        }
        if s == self.slots.len() {
            self.leaf();
            return;
        }
        let (e, i) = self.slots[s];
        let (u, v) = self.spec.base.boundary(e);
        let saved = (self.touched[u], self.touched[v]);
        self.touched[u] = self.touched[u].max(i + 1);
        let limit = self.k[v].min(self.touched[v] + 1);
        for j in 0..limit {
            self.targets[s] = j;
            self.touched[v] = self.touched[v].max(j + 1);
            if !self.checkpoints[s] || !self.partial_too_big(s + 1) {
                self.run(s + 1);
            }
            self.touched[v] = if v == u { self.touched[u].max(saved.1) } else { saved.1 };
            if self.found.is_some() {
                break;
            }
        }
        self.touched[u] = saved.0;
        self.touched[v] = if v == u { saved.0 } else { saved.1 };
    }

    fn partial_too_big(&self, filled: usize) -> bool {
        if self.spec.genus_bound == 0 && filled >= 9 {
            return !is_planar(&self.partial_graph(filled)).planar;
        }
        false
    }

    fn vertex_name(&self, v: usize, i: usize) -> String {
        format!("{}/{i}", self.spec.base.vertex(v))
    }

    fn partial_graph(&self, filled: usize) -> UndirectedGraph {
        let base = &self.spec.base;
        let total: usize = self.k.iter().sum();
        let vertices = (0..total).map(|x| x.to_string()).collect();
        let edges = (0..filled)
            .map(|s| {
                let (e, i) = self.slots[s];
                let (u, v) = base.boundary(e);
                UEdge { id: s.to_string(), ends: (self.offset[u] + i, self.offset[v] + self.targets[s]) }
            })
            .collect();
        UndirectedGraph::from_indexed(vertices, edges).expect("distinct ids")
    }

    fn leaf(&mut self) {
        self.stats.leaves += 1;
        let base = &self.spec.base;
        let mut vertices = Vec::new();
        let mut p = Vec::new();
        for v in 0..base.vertex_count() {
            for i in 0..self.k[v] {
                vertices.push(self.vertex_name(v, i));
                p.push(v);
            }
        }
        let mut edges = Vec::with_capacity(self.slots.len());
        let mut q = Vec::with_capacity(self.slots.len());
        for (s, &(e, i)) in self.slots.iter().enumerate() {
            let (u, v) = base.boundary(e);
            edges.push(Edge {
                id: format!("{}/{i}", base.edge(e).id),
                src: self.offset[u] + i,
                dst: self.offset[v] + self.targets[s],
            });
            q.push(e);
        }
        let total = DiGraph::from_indexed(vertices, edges).expect("fresh ids");
        if self.spec.connected_only && !total.is_weakly_connected() {
            return;
        }
        let u = forget(&total);
        let embedding = if self.spec.genus_bound == 0 {
            is_planar(&u).witness.map(|w| (0, w))
        } else {
            let budget = GenusBudget { max_rotations: self.spec.max_rotations, jobs: 1, ..GenusBudget::default() };
            match genus_exact_with(&u, &budget) {
                Ok(r) if r.genus <= self.spec.genus_bound => Some((r.genus, r.witness)),
                Ok(_) => None,
                Err(_) => {
                    self.stats.undecided += 1;
                    None
                }
            }
        };
        if let Some((genus, genus_witness)) = embedding {
            let morphism = GraphMorphism::new(total.clone(), base.clone(), p, q).expect("lifts respect adjacency");
            self.found = Some(CoverCertificate { total, morphism, genus_witness, genus });
        }
    }
}
