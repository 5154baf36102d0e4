//! Automata: semi-automata with initial and final states.

mod from_cover;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::digraph::{fresh_id, DiGraph, Edge};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::relation::mn_vertex_partition;
use crate::semi::{SemiAutomaton, SemiMorphism};

pub use from_cover::{automaton_from_cover, FromCover};

/// Default identifier of the state added by [`complete_with_trash`].
pub const TRASH: &str = "⊥";

/// A word is a sequence of letters.
pub type Word = Vec<String>;

/// Splits a space separated word.
pub fn parse_word(s: &str) -> Word {
    s.split_whitespace().map(str::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    semi: SemiAutomaton,
    initials: Vec<usize>,
    finals: Vec<usize>,
}

impl Automaton {
    pub fn new<S: AsRef<str>>(semi: SemiAutomaton, initials: &[S], finals: &[S]) -> Result<Self> {
        let g = semi.graph();
        let initials = initials.iter().map(|v| g.require_vertex(v.as_ref())).collect::<Result<Vec<_>>>()?;
        let finals = finals.iter().map(|v| g.require_vertex(v.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_indices(semi, initials, finals))
    }

    pub fn from_indices(semi: SemiAutomaton, mut initials: Vec<usize>, mut finals: Vec<usize>) -> Self {
        initials.sort_unstable();
        initials.dedup();
        finals.sort_unstable();
        finals.dedup();
        Automaton { semi, initials, finals }
    }

    pub fn semi(&self) -> &SemiAutomaton {
        &self.semi
    }

    pub fn graph(&self) -> &DiGraph {
        self.semi.graph()
    }

    pub fn alphabet(&self) -> &[String] {
        self.semi.alphabet()
    }

    pub fn initials(&self) -> &[usize] {
        &self.initials
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn state_count(&self) -> usize {
        self.graph().vertex_count()
    }

    pub fn is_final(&self, v: usize) -> bool {
        self.finals.binary_search(&v).is_ok()
    }

    pub fn is_initial(&self, v: usize) -> bool {
        self.initials.binary_search(&v).is_ok()
    }

    pub fn is_deterministic(&self) -> bool {
        self.semi.is_deterministic()
    }

    pub fn is_complete(&self) -> bool {
        self.semi.is_complete()
    }

    /// States reachable from an initial state, as a membership vector.
    pub fn accessible_states(&self) -> Vec<bool> {
        let g = self.graph();
        let mut seen = vec![false; g.vertex_count()];
        let mut stack = self.initials.clone();
        stack.iter().for_each(|&v| seen[v] = true);
        while let Some(v) = stack.pop() {
            for &e in g.out_edges(v) {
                let w = g.dst(e);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn is_accessible(&self) -> bool {
        self.accessible_states().into_iter().all(|b| b)
    }

    /// Restriction to the states reachable from `initial`, which becomes the only initial state.
    pub fn restrict_to_initial(&self, initial: usize) -> Result<Automaton> {
        let single = Automaton::from_indices(self.semi.clone(), vec![initial], self.finals.clone());
        single.accessible_part()
    }

    /// Restriction to the accessible states; letters that no longer occur are dropped.
    pub fn accessible_part(&self) -> Result<Automaton> {
        let keep = self.accessible_states();
        let (sub, inc) = crate::digraph::subgraph_by_index(self.graph(), |v| keep[v], |_| true);
        let labels: Vec<String> = (0..sub.edge_count()).map(|e| self.semi.label_str(inc.q(e)).to_string()).collect();
        let alphabet: Vec<String> = self.alphabet().iter().filter(|a| labels.contains(a)).cloned().collect();
        let semi = SemiAutomaton::with_labels(sub, alphabet, labels)?;
        let back: HashMap<usize, usize> = inc.vertex_map().iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let initials = self.initials.iter().filter_map(|v| back.get(v).copied()).collect();
        let finals = self.finals.iter().filter_map(|v| back.get(v).copied()).collect();
        Ok(Automaton::from_indices(semi, initials, finals))
    }

    fn step(&self, states: &[usize], letter: usize) -> Vec<usize> {
        let g = self.graph();
        let mut next: Vec<usize> = states
            .iter()
            .flat_map(|&v| g.out_edges(v).iter().filter(|&&e| self.semi.label(e) == letter).map(|&e| g.dst(e)))
            .collect();
        next.sort_unstable();
        next.dedup();
        next
    }

    /// Whether some successful computation reads `word`.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> Result<bool> {
        let mut current = self.initials.clone();
        for a in word {
            let letter =
                self.semi.letter_index(a.as_ref()).ok_or_else(|| Error::UnknownLabel(a.as_ref().to_string()))?;
            current = self.step(&current, letter);
        }
        Ok(current.iter().any(|&v| self.is_final(v)))
    }

    /// All accepted words of length at most `max_length`.
    pub fn sample_language(&self, max_length: usize) -> LanguageSample {
        let mut words = BTreeSet::new();
        let mut prefix: Vec<usize> = Vec::new();
        self.sample_rec(&self.initials.clone(), &mut prefix, max_length, &mut words);
        LanguageSample { alphabet: self.alphabet().to_vec(), words, max_length }
    }

    fn sample_rec(&self, states: &[usize], prefix: &mut Vec<usize>, left: usize, out: &mut BTreeSet<Word>) {
        if states.iter().any(|&v| self.is_final(v)) {
            out.insert(prefix.iter().map(|&a| self.alphabet()[a].clone()).collect());
        }
        if left == 0 {
            return;
        }
        for a in 0..self.alphabet().len() {
            let next = self.step(states, a);
            if next.is_empty() {
                continue;
            }
            prefix.push(a);
            self.sample_rec(&next, prefix, left - 1, out);
            prefix.pop();
        }
    }
}

/// The accepted words of an automaton up to a length bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSample {
    pub alphabet: Vec<String>,
    pub words: BTreeSet<Word>,
    pub max_length: usize,
}

/// Adds a trash state absorbing every missing transition.
pub fn complete_with_trash(a: &Automaton) -> Result<Automaton> {
    if !a.is_deterministic() {
        return Err(Error::precondition("automaton is not deterministic"));
    }
    if a.is_complete() {
        return Ok(a.clone());
    }
    let g = a.graph();
    let mut vtaken: HashSet<String> = g.vertices().iter().cloned().collect();
    let trash_id = fresh_id(&mut vtaken, TRASH.to_string());
    let trash = g.vertex_count();
    let mut vertices = g.vertices().to_vec();
    vertices.push(trash_id.clone());
    let mut etaken: HashSet<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    let mut edges = g.edges().to_vec();
    let mut labels: Vec<String> = (0..g.edge_count()).map(|e| a.semi.label_str(e).to_string()).collect();
    let delta = a.semi.transitions();
    for v in 0..=g.vertex_count() {
        for (l, letter) in a.alphabet().iter().enumerate() {
            if v < g.vertex_count() && delta[v][l].is_some() {
                continue;
            }
            let name = if v == trash { trash_id.clone() } else { g.vertex(v).to_string() };
            let id = fresh_id(&mut etaken, format!("{name}>{trash_id}:{letter}"));
            edges.push(Edge { id, src: v, dst: trash });
            labels.push(letter.clone());
        }
    }
    let graph = DiGraph::from_indexed(vertices, edges)?;
    let semi = SemiAutomaton::with_labels(graph, a.alphabet().to_vec(), labels)?;
    Ok(Automaton::from_indices(semi, a.initials.clone(), a.finals.clone()))
}

fn require_minimizable(a: &Automaton) -> Result<()> {
    if a.initials.len() != 1 {
        return Err(Error::precondition(format!("expected one initial state, found {}", a.initials.len())));
    }
    if let Some(v) = a.semi.first_nondeterministic_state() {
        return Err(Error::precondition(format!("not deterministic at state `{}`", a.graph().vertex(v))));
    }
    if let Some((v, l)) = a.semi.first_incomplete_state() {
        return Err(Error::precondition(format!(
            "not complete: state `{}` lacks letter `{}`",
            a.graph().vertex(v),
            a.alphabet()[l]
        )));
    }
    if let Some(v) = a.accessible_states().iter().position(|b| !b) {
        return Err(Error::precondition(format!("not accessible: state `{}` is unreachable", a.graph().vertex(v))));
    }
    Ok(())
}

/// The Myhill–Nerode state partition of a deterministic complete automaton.
pub fn nerode_partition(a: &Automaton) -> Partition {
    let start = Partition::from_keys((0..a.state_count()).map(|v| a.is_final(v)));
    let (p, rounds) = mn_vertex_partition(&a.semi, start);
    assert!(rounds <= a.state_count().max(1), "refinement took {rounds} rounds on {} states", a.state_count());
    p
}

/// Minimal complete deterministic automaton and the canonical strict epimorphism onto it.
///
/// Each minimal state is named by the least id in its class; its outgoing
/// edges are those of that member, listed by letter.
pub fn minimize(a: &Automaton) -> Result<(Automaton, SemiMorphism)> {
    require_minimizable(a)?;
    let g = a.graph();
    let part = nerode_partition(a);
    let blocks = part.blocks();
    let reps: Vec<usize> = blocks
        .iter()
        .map(|b| *b.iter().min_by(|&&x, &&y| g.vertex(x).cmp(g.vertex(y))).expect("non-empty class"))
        .collect();
    let k = a.alphabet().len();
    let delta = a.semi.transitions();
    let mut edges = Vec::with_capacity(reps.len() * k);
    let mut labels = Vec::with_capacity(reps.len() * k);
    for (c, &r) in reps.iter().enumerate() {
        for (l, letter) in a.alphabet().iter().enumerate() {
            let e = delta[r][l].expect("complete");
            edges.push(Edge { id: g.edge(e).id.clone(), src: c, dst: part.class_of(g.dst(e)) });
            labels.push(letter.clone());
        }
    }
    let vertices = reps.iter().map(|&r| g.vertex(r).to_string()).collect();
    let graph = DiGraph::from_indexed(vertices, edges)?;
    let semi = SemiAutomaton::with_labels(graph, a.alphabet().to_vec(), labels)?;
    let initials = a.initials.iter().map(|&v| part.class_of(v)).collect();
    let finals = a.finals.iter().map(|&v| part.class_of(v)).collect();
    let amin = Automaton::from_indices(semi, initials, finals);
    let p: Vec<usize> = (0..g.vertex_count()).map(|v| part.class_of(v)).collect();
    let q = (0..g.edge_count()).map(|e| p[g.src(e)] * k + a.semi.label(e)).collect();
    let pi = SemiMorphism::new(a.semi.clone(), amin.semi.clone(), p, q, (0..k).collect())?;
    Ok((amin, pi))
}

/// Underlying graph of the minimal automaton.
pub fn language_graph(a: &Automaton) -> Result<DiGraph> {
    Ok(minimize(a)?.0.graph().clone())
}

/// Exact language equality by exploring pairs of reachable state sets.
pub fn equivalent(a: &Automaton, b: &Automaton) -> bool {
    counterexample(a, b).is_none()
}

/// A shortest word accepted by exactly one of the automata, if any.
pub fn counterexample(a: &Automaton, b: &Automaton) -> Option<Word> {
    let letters: Vec<String> =
        a.alphabet().iter().chain(b.alphabet()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let idx_a: Vec<Option<usize>> = letters.iter().map(|l| a.semi.letter_index(l)).collect();
    let idx_b: Vec<Option<usize>> = letters.iter().map(|l| b.semi.letter_index(l)).collect();
    let start = (a.initials.clone(), b.initials.clone());
    let mut parent: HashMap<(Vec<usize>, Vec<usize>), Option<((Vec<usize>, Vec<usize>), usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        let fa = pair.0.iter().any(|&v| a.is_final(v));
        let fb = pair.1.iter().any(|&v| b.is_final(v));
        if fa != fb {
            let mut word = Vec::new();
            let mut cur = pair;
            while let Some(Some((prev, l))) = parent.get(&cur).cloned() {
                word.push(letters[l].clone());
                cur = prev;
            }
            word.reverse();
            return Some(word);
        }
        for l in 0..letters.len() {
            let na = idx_a[l].map_or_else(Vec::new, |x| a.step(&pair.0, x));
            let nb = idx_b[l].map_or_else(Vec::new, |x| b.step(&pair.1, x));
            let next = (na, nb);
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((pair.clone(), l)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Deterministic automaton for the union of two languages, built as the
/// accessible product of the trash-completed inputs over the union alphabet.
pub fn union(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    for x in [a, b] {
        if x.initials.len() != 1 || !x.is_deterministic() {
            return Err(Error::precondition("union expects deterministic single-input automata"));
        }
    }
    let letters: Vec<String> =
        a.alphabet().iter().chain(b.alphabet()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let (da, db) = (a.semi.transitions(), b.semi.transitions());
    let step = |x: &Automaton, d: &[Vec<Option<usize>>], s: Option<usize>, l: &str| {
        let s = s?;
        let i = x.semi.letter_index(l)?;
        d[s][i].map(|e| x.graph().dst(e))
    };
    let name = |x: &Automaton, s: Option<usize>| s.map_or(TRASH.to_string(), |v| x.graph().vertex(v).to_string());
    let start = (Some(a.initials[0]), Some(b.initials[0]));
    let mut index = HashMap::from([(start, 0usize)]);
    let mut states = vec![start];
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (sa, sb) = states[i];
        for l in &letters {
            let next = (step(a, &da, sa, l), step(b, &db, sb, l));
            let j = *index.entry(next).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            edges.push(Edge { id: format!("{i}:{l}"), src: i, dst: j });
            labels.push(l.clone());
        }
        i += 1;
    }
    let vertices: Vec<String> = states.iter().map(|&(x, y)| format!("({},{})", name(a, x), name(b, y))).collect();
    let finals: Vec<usize> = states
        .iter()
        .enumerate()
        .filter(|(_, (x, y))| x.is_some_and(|v| a.is_final(v)) || y.is_some_and(|v| b.is_final(v)))
        .map(|(k, _)| k)
        .collect();
    let graph = DiGraph::from_indexed(vertices, edges)?;
    let semi = SemiAutomaton::with_labels(graph, letters, labels)?;
    Ok(Automaton::from_indices(semi, vec![0], finals))
}

/// Checks that a strict morphism satisfies `I_A = f⁻¹(I_B)` and `F_A = f⁻¹(F_B)`.
pub fn is_automaton_morphism(m: &SemiMorphism, a: &Automaton, b: &Automaton) -> bool {
    m.source() == a.semi()
        && m.target() == b.semi()
        && m.is_strict()
        && (0..a.state_count()).all(|v| {
            let w = m.base().p(v);
            a.is_initial(v) == b.is_initial(w) && a.is_final(v) == b.is_final(w)
        })
}
