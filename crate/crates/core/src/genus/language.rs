use std::time::Duration;

use super::{genus_exact, genus_exact_with, is_planar, trace_faces, GenusBudget, RotationSystem};
use crate::automaton::{automaton_from_cover, complete_with_trash, equivalent, minimize, union, Automaton};
use crate::digraph::{
    excise, find_isomorphism, find_subgraph_embedding, forget, opposite, pullback, simplify, DiGraph, GraphMorphism,
};
use crate::emulation::{
    check_directed_cover, search_covers, CoverCertificate, CoverSearchSpec, SearchOutcome, SearchStats,
};
use crate::error::{Error, Result};

/// Search bounds for the language-level genus checks.
#[derive(Debug, Clone)]
pub struct LanguageBounds {
    pub max_fiber: usize,
    pub time_budget: Duration,
    pub max_rotations: f64,
}

impl Default for LanguageBounds {
    fn default() -> Self {
        LanguageBounds { max_fiber: 1, time_budget: Duration::from_secs(300), max_rotations: 1e8 }
    }
}

#[derive(Debug, Clone)]
pub enum LanguageGenus {
    /// A deterministic automaton for the same language whose graph has genus at most the bound.
    Yes {
        witness: Automaton,
        genus: usize,
        certificate: Box<CoverCertificate>,
    },
    /// No cover within the fibre bound; says nothing about larger covers.
    NoWithinBounds(SearchStats),
    BudgetExceeded(String),
}

impl LanguageGenus {
    pub fn is_yes(&self) -> bool {
        matches!(self, LanguageGenus::Yes { .. })
    }
}

/// Accessible, complete copy of a deterministic single-input automaton.
fn prepared(a: &Automaton) -> Result<Automaton> {
    if a.initials().len() != 1 || !a.is_deterministic() {
        return Err(Error::precondition("expected a deterministic automaton with one initial state"));
    }
    let a = a.accessible_part()?;
    if a.is_complete() {
        Ok(a)
    } else {
        complete_with_trash(&a)
    }
}

/// `Exc(R(G(L)))` together with the minimal automaton.
pub fn excised_language_graph(a: &Automaton) -> Result<(Automaton, DiGraph)> {
    let (minimal, _) = minimize(&prepared(a)?)?;
    let x = excise(&simplify(minimal.graph()).0);
    Ok((minimal, x))
}

/// Decides `g(L) ≤ n` up to the fibre bound by searching covers of
/// `Exc(R(G(L)))` and rebuilding an automaton from the first one found.
pub fn language_genus_leq(a: &Automaton, n: usize, bounds: &LanguageBounds) -> Result<LanguageGenus> {
    let (_, x) = excised_language_graph(a)?;
    let mut spec = CoverSearchSpec::new(x, bounds.max_fiber, n);
    spec.time_budget = bounds.time_budget;
    spec.max_rotations = bounds.max_rotations;
    match search_covers(&spec)? {
        (SearchOutcome::Found(cert), _) => witness_from_certificate(a, *cert, n, bounds),
        (SearchOutcome::Exhausted, stats) => Ok(LanguageGenus::NoWithinBounds(stats)),
        (SearchOutcome::BudgetExceeded(reason), _) => Ok(LanguageGenus::BudgetExceeded(reason)),
    }
}

/// Same conclusion from an externally supplied cover certificate. The
/// certificate's base may use other ids than `Exc(R(G(L)))`.
pub fn language_genus_from_certificate(
    a: &Automaton,
    cert: &CoverCertificate,
    n: usize,
    bounds: &LanguageBounds,
) -> Result<LanguageGenus> {
    cert.verify()?;
    if cert.genus > n {
        return Err(Error::precondition(format!("certificate has genus {} > {n}", cert.genus)));
    }
    let (_, x) = excised_language_graph(a)?;
    let iso = find_isomorphism(cert.base(), &x)
        .ok_or_else(|| Error::domain("certificate base is not isomorphic to the excised language graph"))?;
    let morphism = cert.morphism.then(&iso)?;
    let cert = CoverCertificate { morphism, ..cert.clone() };
    witness_from_certificate(a, cert, n, bounds)
}

fn witness_from_certificate(
    a: &Automaton,
    cert: CoverCertificate,
    n: usize,
    bounds: &LanguageBounds,
) -> Result<LanguageGenus> {
    let built = automaton_from_cover(&prepared(a)?, &cert.morphism)?;
    if !equivalent(&built.automaton, a) {
        return Err(Error::precondition("rebuilt automaton recognizes a different language"));
    }
    let u = forget(built.automaton.graph());
    let genus = if n == 0 && is_planar(&u).planar {
        0
    } else {
        let budget = GenusBudget { max_rotations: bounds.max_rotations, ..GenusBudget::default() };
        genus_exact_with(&u, &budget)?.genus
    };
    if genus > n {
        return Err(Error::precondition(format!("rebuilt automaton has genus {genus} > {n}")));
    }
    Ok(LanguageGenus::Yes { witness: built.automaton, genus, certificate: Box::new(cert) })
}

/// Genus of a digraph and of its images under op, R, Exc and U.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub genus: usize,
    pub opposite: usize,
    pub simplified: usize,
    pub excised: usize,
    pub forgotten: usize,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        [self.opposite, self.simplified, self.excised, self.forgotten].iter().all(|&g| g == self.genus)
    }

    /// Names of the functors whose image has a different genus.
    pub fn counterexamples(&self) -> Vec<&'static str> {
        [("op", self.opposite), ("R", self.simplified), ("Exc", self.excised), ("U", self.forgotten)]
            .into_iter()
            .filter(|&(_, g)| g != self.genus)
            .map(|(name, _)| name)
            .collect()
    }
}

/// Computes each genus independently through the exact search.
pub fn genus_invariance_suite(g: &DiGraph, budget: &GenusBudget) -> Result<InvarianceReport> {
    let exact = |h: &DiGraph| genus_exact_with(&forget(h), budget).map(|r| r.genus);
    let u = forget(g);
    Ok(InvarianceReport {
        genus: exact(g)?,
        opposite: exact(&opposite(g))?,
        simplified: exact(&simplify(g).0)?,
        excised: exact(&excise(g))?,
        forgotten: genus_exact_with(&u, budget)?.genus,
    })
}

/// Emulator of a subgraph obtained by restricting a cover, with the
/// restricted rotation system as its embedding.
#[derive(Debug, Clone)]
pub struct RestrictedEmulator {
    pub morphism: GraphMorphism,
    pub witness: RotationSystem,
    pub genus: usize,
}

/// Restricts a cover `H → K` along an embedding `G → K`: the pullback is a
/// subgraph of `H` covering `G`, and dropping darts from the cover's witness
/// embeds it with no larger genus.
pub fn restrict_certificate(cert: &CoverCertificate, embedding: &GraphMorphism) -> Result<RestrictedEmulator> {
    let (_, to_sub, to_total) = pullback(embedding, &cert.morphism)?;
    if let Err(v) = check_directed_cover(&to_sub)? {
        return Err(Error::precondition(format!("restriction is not a cover: {v}")));
    }
    let sub = forget(to_sub.source());
    let darts: Vec<usize> = (0..to_total.source().edge_count()).map(|e| to_total.q(e)).collect();
    let mut back = vec![usize::MAX; 2 * cert.total.edge_count()];
    for (e, &f) in darts.iter().enumerate() {
        back[2 * f] = 2 * e;
        back[2 * f + 1] = 2 * e + 1;
    }
    let mut rotations = vec![Vec::new(); sub.vertex_count()];
    let mut vertex_back = vec![usize::MAX; cert.total.vertex_count()];
    for v in 0..sub.vertex_count() {
        vertex_back[to_total.p(v)] = v;
    }
    for (w, rot) in cert.genus_witness.rotations().iter().enumerate() {
        if vertex_back[w] == usize::MAX {
            continue;
        }
        rotations[vertex_back[w]] = rot.iter().map(|&d| back[d]).filter(|&d| d != usize::MAX).collect();
    }
    let witness = RotationSystem::new(&sub, rotations)?;
    let genus = trace_faces(&sub, &witness).genus;
    Ok(RestrictedEmulator { morphism: to_sub, witness, genus })
}

/// Outcome of the subgraph and disjoint-union checks between two languages.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    /// Embedding of `Exc(R(G(L2)))` into `Exc(R(G(L1)))`, if any.
    pub embedding: Option<GraphMorphism>,
    /// Cover found for `L1` within the bounds.
    pub cover: Option<CoverCertificate>,
    /// Restriction of that cover to `L2`.
    pub restricted: Option<RestrictedEmulator>,
    /// For disjoint alphabets: whether `Exc(R(G(Li)))` embeds into the graph of the union.
    pub union_embeds: Option<(bool, bool)>,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        let restriction = match (&self.cover, &self.restricted) {
            (Some(c), Some(r)) => r.genus <= c.genus,
            (Some(_), None) => false,
            _ => true,
        };
        restriction && self.union_embeds.is_none_or(|(a, b)| a && b)
    }
}

/// Searches a cover of genus at most `n` for `L1` and, when `L2`'s excised
/// graph sits inside `L1`'s, restricts it to an emulator for `L2`. With
/// disjoint alphabets also checks that both graphs sit inside the graph of
/// `L1 ∪ L2`.
pub fn genus_monotonicity_checks(
    l1: &Automaton,
    l2: &Automaton,
    n: usize,
    bounds: &LanguageBounds,
) -> Result<MonotonicityReport> {
    let (_, x1) = excised_language_graph(l1)?;
    let (_, x2) = excised_language_graph(l2)?;
    let embedding = find_subgraph_embedding(&x2, &x1);
    let mut cover = None;
    let mut restricted = None;
    if let Some(emb) = &embedding {
        let mut spec = CoverSearchSpec::new(x1.clone(), bounds.max_fiber, n);
        spec.time_budget = bounds.time_budget;
        spec.max_rotations = bounds.max_rotations;
        if let (SearchOutcome::Found(cert), _) = search_covers(&spec)? {
            restricted = Some(restrict_certificate(&cert, emb)?);
            cover = Some(*cert);
        }
    }
    let disjoint = l1.alphabet().iter().all(|l| !l2.alphabet().contains(l));
    let union_embeds = if disjoint {
        let (_, xu) = excised_language_graph(&union(&prepared(l1)?, &prepared(l2)?)?)?;
        Some((find_subgraph_embedding(&x1, &xu).is_some(), find_subgraph_embedding(&x2, &xu).is_some()))
    } else {
        None
    };
    Ok(MonotonicityReport { embedding, cover, restricted, union_embeds })
}

/// Genus of the minimal automaton's graph, an upper bound for `g(L)`.
pub fn minimal_graph_genus(a: &Automaton) -> Result<usize> {
    let (minimal, _) = minimize(&prepared(a)?)?;
    Ok(genus_exact(&forget(minimal.graph()))?.genus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::bidirect;
    use crate::genus::tests::complete;
    use crate::semi::SemiAutomaton;

    fn cyclic(n: usize, letters: &[usize]) -> Automaton {
        let vs: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut es = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            for &j in letters {
                es.push((format!("{i}+{j}"), i.to_string(), ((i + j) % n).to_string()));
                labels.push(j.to_string());
            }
        }
        let semi = SemiAutomaton::from_edge_labels(DiGraph::new(vs, es).unwrap(), labels).unwrap();
        Automaton::new(semi, &["0"], &["0"]).unwrap()
    }

    fn counter(n: usize, letter: &str) -> Automaton {
        let vs: Vec<String> = (0..n).map(|i| format!("{letter}{i}")).collect();
        let es: Vec<(String, String, String)> =
            (0..n).map(|i| (format!("{letter}{i}"), vs[i].clone(), vs[(i + 1) % n].clone())).collect();
        let labels = vec![letter.to_string(); n];
        let semi = SemiAutomaton::from_edge_labels(DiGraph::new(vs.clone(), es).unwrap(), labels).unwrap();
        Automaton::new(semi, &[vs[0].as_str()], &[vs[0].as_str()]).unwrap()
    }

    #[test]
    fn planar_minimal_automaton_is_its_own_witness() {
        let a = cyclic(4, &[1]);
        match language_genus_leq(&a, 0, &LanguageBounds::default()).unwrap() {
            LanguageGenus::Yes { witness, genus, .. } => {
                assert_eq!(genus, 0);
                assert_eq!(witness.state_count(), 4);
                assert!(equivalent(&witness, &a));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn z7_has_no_planar_cover_within_bounds() {
        let a = cyclic(7, &[1, 2, 3]);
        let bounds = LanguageBounds { max_fiber: 2, ..LanguageBounds::default() };
        let out = language_genus_leq(&a, 0, &bounds).unwrap();
        assert!(matches!(out, LanguageGenus::NoWithinBounds(ref s) if s.euler_pruned == s.fiber_vectors));
    }

    #[test]
    fn invariance_on_small_graphs() {
        let k5 = bidirect(&complete(5));
        let r = genus_invariance_suite(&k5, &GenusBudget::default()).unwrap();
        assert!(r.holds(), "{:?}", r.counterexamples());
        assert_eq!(r.genus, 1);
        let loop2 = DiGraph::new(["u"], [("a", "u", "u"), ("b", "u", "u")]).unwrap();
        let r = genus_invariance_suite(&loop2, &GenusBudget::default()).unwrap();
        assert!(r.holds());
        assert_eq!(r.genus, 0);
    }

    #[test]
    fn restriction_to_a_sublanguage_graph() {
        let big = cyclic(5, &[1, 2]);
        let small = cyclic(5, &[1]);
        let bounds = LanguageBounds::default();
        let report = genus_monotonicity_checks(&big, &small, 1, &bounds).unwrap();
        assert!(report.embedding.is_some());
        let r = report.restricted.as_ref().unwrap();
        assert!(r.genus <= report.cover.as_ref().unwrap().genus);
        assert!(report.holds());
        assert!(report.union_embeds.is_none());
        let same = genus_monotonicity_checks(&small, &small, 0, &bounds).unwrap();
        assert!(same.embedding.unwrap().is_isomorphism());
    }

    #[test]
    fn disjoint_union_contains_both_graphs() {
        let (a, b) = (counter(2, "a"), counter(2, "b"));
        let report = genus_monotonicity_checks(&a, &b, 0, &LanguageBounds::default()).unwrap();
        assert_eq!(report.union_embeds, Some((true, true)));
        let u = union(&a, &b).unwrap();
        let gu = minimal_graph_genus(&u).unwrap();
        assert!(gu >= minimal_graph_genus(&a).unwrap().max(minimal_graph_genus(&b).unwrap()));
    }
}
