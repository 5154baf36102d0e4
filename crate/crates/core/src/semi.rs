//! Semi-automata: digraphs with a surjective edge labelling.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::digraph::{DiGraph, GraphMorphism};
use crate::error::{Error, Result};

/// A digraph whose edges carry labels from an alphabet every letter of which is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiAutomaton {
    graph: DiGraph,
    alphabet: Vec<String>,
    labels: Vec<usize>,
}

impl SemiAutomaton {
    /// Builds a semi-automaton from an explicit alphabet and per-edge labels.
    pub fn new(graph: DiGraph, alphabet: Vec<String>, labelling: &BTreeMap<String, String>) -> Result<Self> {
        let labels = graph
            .edges()
            .iter()
            .map(|e| {
                labelling.get(&e.id).cloned().ok_or_else(|| Error::domain(format!("edge `{}` has no label", e.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        for k in labelling.keys() {
            graph.require_edge(k)?;
        }
        Self::with_labels(graph, alphabet, labels)
    }

    /// Builds a semi-automaton from labels listed in edge order.
    pub fn with_labels(graph: DiGraph, alphabet: Vec<String>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != graph.edge_count() {
            return Err(Error::domain("labelling is not total"));
        }
        let mut index = HashMap::new();
        for (i, a) in alphabet.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::domain(format!("letter `{a}` repeated in alphabet")));
            }
        }
        let labels = labels
            .into_iter()
            .map(|l| index.get(&l).copied().ok_or(Error::UnknownLabel(l)))
            .collect::<Result<Vec<_>>>()?;
        let mut used = vec![false; alphabet.len()];
        labels.iter().for_each(|&l| used[l] = true);
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::domain(format!("letter `{}` labels no edge", alphabet[i])));
        }
        Ok(SemiAutomaton { graph, alphabet, labels })
    }

    /// Labels in edge order, alphabet inferred as the sorted set of used labels.
    pub fn from_edge_labels(graph: DiGraph, labels: Vec<String>) -> Result<Self> {
        let alphabet: Vec<String> = labels.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        Self::with_labels(graph, alphabet, labels)
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter_index(&self, a: &str) -> Option<usize> {
        self.alphabet.iter().position(|x| x == a)
    }

    /// Letter index of edge `e`.
    pub fn label(&self, e: usize) -> usize {
        self.labels[e]
    }

    pub fn label_str(&self, e: usize) -> &str {
        &self.alphabet[self.labels[e]]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn labelling(&self) -> BTreeMap<String, String> {
        self.graph.edges().iter().zip(&self.labels).map(|(e, &l)| (e.id.clone(), self.alphabet[l].clone())).collect()
    }

    /// Every state has an outgoing edge for every letter.
    pub fn is_complete(&self) -> bool {
        (0..self.graph.vertex_count()).all(|v| {
            let mut seen = vec![false; self.alphabet.len()];
            self.graph.out_edges(v).iter().for_each(|&e| seen[self.labels[e]] = true);
            seen.into_iter().all(|s| s)
        })
    }

    /// No state has two outgoing edges with the same letter.
    pub fn is_deterministic(&self) -> bool {
        self.first_nondeterministic_state().is_none()
    }

    pub fn first_nondeterministic_state(&self) -> Option<usize> {
        (0..self.graph.vertex_count()).find(|&v| {
            let mut seen = vec![false; self.alphabet.len()];
            self.graph.out_edges(v).iter().any(|&e| std::mem::replace(&mut seen[self.labels[e]], true))
        })
    }

    pub fn first_incomplete_state(&self) -> Option<(usize, usize)> {
        (0..self.graph.vertex_count()).find_map(|v| {
            let mut seen = vec![false; self.alphabet.len()];
            self.graph.out_edges(v).iter().for_each(|&e| seen[self.labels[e]] = true);
            seen.iter().position(|s| !s).map(|a| (v, a))
        })
    }

    /// Transition table of a deterministic semi-automaton: `delta[v][a]` is the
    /// edge leaving `v` with letter `a`, if any.
    pub fn transitions(&self) -> Vec<Vec<Option<usize>>> {
        let mut delta = vec![vec![None; self.alphabet.len()]; self.graph.vertex_count()];
        for (e, edge) in self.graph.edges().iter().enumerate() {
            delta[edge.src][self.labels[e]].get_or_insert(e);
        }
        delta
    }
}

/// The semi-automaton labelling every edge by its own id.
pub fn tautological(g: &DiGraph) -> SemiAutomaton {
    let alphabet: Vec<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    SemiAutomaton { graph: g.clone(), labels: (0..alphabet.len()).collect(), alphabet }
}

/// A morphism of semi-automata: a graph morphism with a letter map satisfying `α∘ℓ_A = ℓ_B∘g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiMorphism {
    source: SemiAutomaton,
    target: SemiAutomaton,
    base: GraphMorphism,
    alpha: Vec<usize>,
}

impl SemiMorphism {
    pub fn new(
        source: SemiAutomaton,
        target: SemiAutomaton,
        p: Vec<usize>,
        q: Vec<usize>,
        alpha: Vec<usize>,
    ) -> Result<Self> {
        let base = GraphMorphism::new(source.graph.clone(), target.graph.clone(), p, q)?;
        if alpha.len() != source.alphabet.len() || alpha.iter().any(|&b| b >= target.alphabet.len()) {
            return Err(Error::domain("letter map is not total"));
        }
        for e in 0..source.graph.edge_count() {
            if alpha[source.labels[e]] != target.labels[base.q(e)] {
                return Err(Error::domain(format!(
                    "letter map does not commute with labels at edge `{}`",
                    source.graph.edge(e).id
                )));
            }
        }
        Ok(SemiMorphism { source, target, base, alpha })
    }

    /// Builds a morphism whose letter map is forced by the labels; fails when
    /// the labels are not constant on letter fibres.
    pub fn inferred(source: SemiAutomaton, target: SemiAutomaton, p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        let mut alpha = vec![usize::MAX; source.alphabet.len()];
        for (e, &f) in q.iter().enumerate() {
            let (a, b) = (source.labels[e], target.labels[f]);
            if alpha[a] != usize::MAX && alpha[a] != b {
                return Err(Error::domain(format!("letter `{}` has two images", source.alphabet[a])));
            }
            alpha[a] = b;
        }
        Self::new(source, target, p, q, alpha)
    }

    pub fn source(&self) -> &SemiAutomaton {
        &self.source
    }

    pub fn target(&self) -> &SemiAutomaton {
        &self.target
    }

    pub fn base(&self) -> &GraphMorphism {
        &self.base
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn alpha_ids(&self) -> BTreeMap<String, String> {
        self.alpha
            .iter()
            .enumerate()
            .map(|(a, &b)| (self.source.alphabet[a].clone(), self.target.alphabet[b].clone()))
            .collect()
    }

    /// Letter map sends every letter to the equal letter of the target.
    pub fn is_strict(&self) -> bool {
        self.alpha.iter().enumerate().all(|(a, &b)| self.source.alphabet[a] == self.target.alphabet[b])
    }

    /// Identity on the underlying graph.
    pub fn is_relabelling(&self) -> bool {
        self.source.graph == self.target.graph
            && self.base.vertex_map().iter().enumerate().all(|(i, &v)| i == v)
            && self.base.edge_map().iter().enumerate().all(|(i, &e)| i == e)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SemiMorphism) -> Result<SemiMorphism> {
        let base = self.base.then(&next.base)?;
        let alpha = self.alpha.iter().map(|&a| next.alpha[a]).collect();
        Ok(SemiMorphism { source: self.source.clone(), target: next.target.clone(), base, alpha })
    }

    pub fn identity(a: &SemiAutomaton) -> SemiMorphism {
        SemiMorphism {
            source: a.clone(),
            target: a.clone(),
            base: GraphMorphism::identity(&a.graph),
            alpha: (0..a.alphabet.len()).collect(),
        }
    }
}

/// Relabels along a total letter map, returning the relabelling morphism.
pub fn relabel(a: &SemiAutomaton, alpha: &BTreeMap<String, String>) -> Result<(SemiAutomaton, SemiMorphism)> {
    let images = a
        .alphabet
        .iter()
        .map(|x| alpha.get(x).cloned().ok_or_else(|| Error::domain(format!("letter map undefined at `{x}`"))))
        .collect::<Result<Vec<_>>>()?;
    let mut new_alphabet: Vec<String> = Vec::new();
    for y in &images {
        if !new_alphabet.contains(y) {
            new_alphabet.push(y.clone());
        }
    }
    let labels = a.labels.iter().map(|&l| images[l].clone()).collect();
    let b = SemiAutomaton::with_labels(a.graph.clone(), new_alphabet, labels)?;
    let alpha_idx = images.iter().map(|y| b.letter_index(y).expect("image letter")).collect();
    let n = a.graph.vertex_count();
    let m = SemiMorphism::new(a.clone(), b.clone(), (0..n).collect(), (0..a.graph.edge_count()).collect(), alpha_idx)?;
    Ok((b, m))
}

/// `(f, g, g)` between tautological semi-automata.
pub fn tautological_morphism(m: &GraphMorphism) -> SemiMorphism {
    SemiMorphism {
        source: tautological(m.source()),
        target: tautological(m.target()),
        base: m.clone(),
        alpha: m.edge_map().to_vec(),
    }
}

/// The counit `(1, 1, ℓ_A)` from the tautological semi-automaton of `A`'s graph onto `A`.
pub fn counit(a: &SemiAutomaton) -> SemiMorphism {
    SemiMorphism {
        source: tautological(&a.graph),
        target: a.clone(),
        base: GraphMorphism::identity(&a.graph),
        alpha: a.labels.clone(),
    }
}

/// The two factorizations of a morphism into strict and relabelling parts.
#[derive(Debug)]
pub struct Factorizations {
    /// `(1, 1, α)` followed by `(f, g, 1)`; always exists.
    pub relabel_then_strict: (SemiMorphism, SemiMorphism),
    /// `(f, g, 1)` followed by `(1, 1, α)`; exists only when the source labels
    /// are constant on the fibres of `g` and every target edge outside the
    /// image of `g` has a letter in the preimage of its label.
    pub strict_then_relabel: Result<(SemiMorphism, SemiMorphism)>,
}

pub fn factor_morphism(m: &SemiMorphism) -> Factorizations {
    let n = m.source.graph.vertex_count();
    let ne = m.source.graph.edge_count();
    let alpha_ids = m.alpha_ids();
    let (mid, lambda) = relabel(&m.source, &alpha_ids).expect("total letter map");
    let pi_alpha = mid.alphabet.iter().map(|y| m.target.letter_index(y).expect("image letter")).collect();
    let pi =
        SemiMorphism::new(mid, m.target.clone(), m.base.vertex_map().to_vec(), m.base.edge_map().to_vec(), pi_alpha)
            .expect("commutes by construction");
    debug_assert_eq!(lambda.source.graph.vertex_count(), n);
    debug_assert_eq!(lambda.source.graph.edge_count(), ne);
    Factorizations { relabel_then_strict: (lambda, pi), strict_then_relabel: strict_then_relabel(m) }
}

fn strict_then_relabel(m: &SemiMorphism) -> Result<(SemiMorphism, SemiMorphism)> {
    let tg = &m.target.graph;
    let mut label: Vec<Option<usize>> = vec![None; tg.edge_count()];
    for e in 0..m.source.graph.edge_count() {
        let f = m.base.q(e);
        let a = m.source.labels[e];
        match label[f] {
            Some(b) if b != a => {
                return Err(Error::precondition(format!(
                    "edge `{}` receives letters `{}` and `{}`",
                    tg.edge(f).id,
                    m.source.alphabet[b],
                    m.source.alphabet[a]
                )))
            }
            _ => label[f] = Some(a),
        }
    }
    for (f, slot) in label.iter_mut().enumerate() {
        if slot.is_none() {
            let want = m.target.labels[f];
            let a = m.alpha.iter().position(|&b| b == want).ok_or_else(|| {
                Error::precondition(format!(
                    "edge `{}` has a letter outside the image of the letter map",
                    tg.edge(f).id
                ))
            })?;
            *slot = Some(a);
        }
    }
    let labels: Vec<usize> = label.into_iter().map(|l| l.expect("filled")).collect();
    let used: BTreeSet<usize> = labels.iter().copied().collect();
    let alphabet: Vec<String> =
        m.source.alphabet.iter().enumerate().filter(|(i, _)| used.contains(i)).map(|(_, a)| a.clone()).collect();
    let mid = SemiAutomaton::with_labels(
        tg.clone(),
        alphabet,
        labels.iter().map(|&l| m.source.alphabet[l].clone()).collect(),
    )?;
    if used.len() != m.source.alphabet.len() {
        return Err(Error::precondition("some source letter labels no edge of the image"));
    }
    let pi = SemiMorphism::new(
        m.source.clone(),
        mid.clone(),
        m.base.vertex_map().to_vec(),
        m.base.edge_map().to_vec(),
        m.source.alphabet.iter().map(|a| mid.letter_index(a).expect("same letters")).collect(),
    )?;
    let lambda_alpha = mid.alphabet.iter().map(|a| m.alpha[m.source.letter_index(a).expect("source letter")]).collect();
    let lambda = SemiMorphism::new(
        mid,
        m.target.clone(),
        (0..tg.vertex_count()).collect(),
        (0..tg.edge_count()).collect(),
        lambda_alpha,
    )?;
    Ok((pi, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[&str], es: &[(&str, &str, &str)]) -> DiGraph {
        DiGraph::new(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    fn labelled(vs: &[&str], es: &[(&str, &str, &str, &str)]) -> SemiAutomaton {
        let g = graph(vs, &es.iter().map(|&(e, s, t, _)| (e, s, t)).collect::<Vec<_>>());
        SemiAutomaton::from_edge_labels(g, es.iter().map(|e| e.3.to_string()).collect()).unwrap()
    }

    #[test]
    fn tautological_is_deterministic() {
        let c2 = graph(&["a", "b"], &[("ab", "a", "b"), ("ba", "b", "a")]);
        let t = tautological(&c2);
        assert_eq!(t.alphabet().len(), 2);
        assert!(t.is_deterministic());
        let loop2 = graph(&["v"], &[("a", "v", "v"), ("b", "v", "v")]);
        let t = tautological(&loop2);
        assert!(t.is_deterministic() && t.is_complete());
        assert!(tautological(&graph(&["v"], &[])).alphabet().is_empty());
    }

    #[test]
    fn underused_alphabet_rejected() {
        let g = graph(&["v"], &[("e", "v", "v")]);
        assert!(SemiAutomaton::with_labels(g, vec!["a".into(), "b".into()], vec!["a".into()]).is_err());
    }

    #[test]
    fn fork_completeness_and_determinism() {
        let fork = labelled(&["v0", "v1", "v2"], &[("x", "v0", "v1", "a"), ("y", "v0", "v2", "a")]);
        assert!(!fork.is_complete());
        assert!(!fork.is_deterministic());
        let fork2 = labelled(&["v0", "v1", "v2"], &[("x", "v0", "v1", "a"), ("y", "v0", "v2", "b")]);
        assert!(fork2.is_deterministic());
        let par = labelled(&["q", "r"], &[("x", "q", "r", "a"), ("y", "q", "r", "a")]);
        assert!(!par.is_deterministic());
    }

    #[test]
    fn relabel_merges_letters() {
        let a = labelled(&["v"], &[("x", "v", "v", "a"), ("y", "v", "v", "b")]);
        let alpha = BTreeMap::from([("a".into(), "a".into()), ("b".into(), "a".into())]);
        let (b, m) = relabel(&a, &alpha).unwrap();
        assert_eq!(b.alphabet(), ["a"]);
        assert!(m.is_relabelling());
        assert!(relabel(&a, &BTreeMap::from([("a".into(), "a".into())])).is_err());
    }

    #[test]
    fn counit_relabels_tautological_back() {
        let a = labelled(&["v", "w"], &[("x", "v", "w", "a"), ("y", "w", "v", "a")]);
        let eps = counit(&a);
        let (b, _) = relabel(eps.source(), &eps.alpha_ids()).unwrap();
        assert_eq!(b, a);
    }

    #[test]
    fn factorizations_compose_back() {
        let a = labelled(&["v", "w"], &[("x", "v", "w", "a"), ("y", "w", "v", "b")]);
        let b = labelled(&["u"], &[("l", "u", "u", "c")]);
        let m = SemiMorphism::inferred(a, b, vec![0, 0], vec![0, 0]).unwrap();
        let f = factor_morphism(&m);
        let (l, p) = &f.relabel_then_strict;
        assert!(l.is_relabelling() && p.is_strict());
        assert_eq!(l.then(p).unwrap(), m);
        // The loop would need two letters at once.
        assert!(f.strict_then_relabel.is_err());
    }

    #[test]
    fn counit_factors_with_identity_strict_part() {
        let a = labelled(&["v", "w"], &[("x", "v", "w", "a"), ("y", "w", "v", "a")]);
        let eps = counit(&a);
        let f = factor_morphism(&eps);
        let (pi, lambda) = f.strict_then_relabel.unwrap();
        assert!(pi.is_strict() && pi.base().is_isomorphism());
        assert_eq!(lambda.alpha_ids(), eps.alpha_ids());
        assert_eq!(pi.then(&lambda).unwrap(), eps);
    }
}
