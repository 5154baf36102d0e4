use super::{minimize, Automaton};
use crate::digraph::{excise, pullback, simplify, GraphMorphism};
use crate::emulation::{check_directed_cover, extend_over_excision, extract_cover};
use crate::error::{Error, Result};
use crate::semi::{SemiAutomaton, SemiMorphism};

/// Deterministic automaton rebuilt from a cover of `Exc(R(G(A_min)))`.
#[derive(Debug, Clone)]
pub struct FromCover {
    /// Single-input, accessible, deterministic; recognizes the input language.
    pub automaton: Automaton,
    /// Strict epimorphism onto the minimal automaton.
    pub projection: SemiMorphism,
    pub minimal: Automaton,
}

/// Extends the cover over the excised loops, pulls it back along `ρ: G → R(G)`,
/// extracts a cover of `G` from the resulting emulator and labels it through
/// the projection. The state over the initial state with the least id becomes
/// the only initial state; unreachable states are dropped.
pub fn automaton_from_cover(a: &Automaton, cover: &GraphMorphism) -> Result<FromCover> {
    let (minimal, _) = minimize(a)?;
    let g = minimal.graph();
    let (rg, rho) = simplify(g);
    if cover.target() != &excise(&rg) {
        return Err(Error::domain("cover does not land in the excised simplified language graph"));
    }
    if let Err(v) = check_directed_cover(cover)? {
        return Err(Error::precondition(format!("not a directed cover: {v}")));
    }
    let extended = extend_over_excision(cover, &rg)?;
    let (_, pi1, _) = pullback(&rho, &extended)?;
    let sub = extract_cover(&pi1)?;
    let total = sub.source();
    let labels = (0..total.edge_count()).map(|e| minimal.semi().label_str(sub.q(e)).to_string()).collect();
    let semi = SemiAutomaton::with_labels(total.clone(), minimal.alphabet().to_vec(), labels)?;
    let over =
        |set: &[usize]| -> Vec<usize> { (0..total.vertex_count()).filter(|&v| set.contains(&sub.p(v))).collect() };
    let initials = over(minimal.initials());
    let finals = over(minimal.finals());
    let start = *initials
        .iter()
        .min_by(|&&x, &&y| total.vertex(x).cmp(total.vertex(y)))
        .ok_or_else(|| Error::domain("no state lies over the initial state"))?;
    let full = Automaton::from_indices(semi, initials, finals);
    let automaton = full.restrict_to_initial(start)?;
    let kept = automaton.graph();
    let p = (0..kept.vertex_count()).map(|v| sub.p(total.vertex_index(kept.vertex(v)).expect("kept state"))).collect();
    let q = (0..kept.edge_count()).map(|e| sub.q(total.edge_index(&kept.edge(e).id).expect("kept edge"))).collect();
    let alpha = automaton
        .alphabet()
        .iter()
        .map(|l| minimal.semi().letter_index(l).expect("letter of the minimal automaton"))
        .collect();
    let projection = SemiMorphism::new(automaton.semi().clone(), minimal.semi().clone(), p, q, alpha)?;
    Ok(FromCover { automaton, projection, minimal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{equivalent, is_automaton_morphism};
    use crate::digraph::DiGraph;
    use crate::emulation::is_directed_cover;

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
        let g = DiGraph::new(vs, es).unwrap();
        let semi = SemiAutomaton::from_edge_labels(g, labels).unwrap();
        Automaton::new(semi, &["0"], &["0"]).unwrap()
    }

    fn check(a: &Automaton, cover: &GraphMorphism) -> FromCover {
        let out = automaton_from_cover(a, cover).unwrap();
        assert!(out.automaton.is_deterministic());
        assert_eq!(out.automaton.initials().len(), 1);
        assert!(equivalent(&out.automaton, a));
        assert!(is_directed_cover(out.projection.base()));
        let m = &out.projection;
        assert!(m.is_strict());
        let (b, c) = (&out.automaton, &out.minimal);
        assert!((0..b.state_count()).all(|v| b.is_final(v) == c.is_final(m.base().p(v))));
        assert!(c.is_initial(m.base().p(b.initials()[0])));
        if c.graph().vertex_count() == b.state_count() {
            assert!(is_automaton_morphism(m, b, c));
        }
        out
    }

    #[test]
    fn identity_cover_gives_the_minimal_automaton() {
        let a = cyclic(7, &[1, 2, 3]);
        let (rg, _) = simplify(a.graph());
        let x = excise(&rg);
        let out = check(&a, &GraphMorphism::identity(&x));
        assert_eq!(out.automaton.state_count(), 7);
        assert_eq!(out.automaton.graph().edge_count(), 21);
    }

    #[test]
    fn loops_recreated_over_empty_excision() {
        let a = cyclic(1, &[1]);
        let x = excise(&simplify(a.graph()).0);
        assert_eq!(x.edge_count(), 0);
        let two = DiGraph::new(["p", "q"], Vec::<(&str, &str, &str)>::new()).unwrap();
        let cover = GraphMorphism::new(two, x, vec![0, 0], vec![]).unwrap();
        let out = check(&a, &cover);
        assert_eq!(out.automaton.state_count(), 1);
        assert!(out.automaton.graph().edge(0).is_loop());
    }

    #[test]
    fn two_fold_cover_of_z6() {
        let a = cyclic(6, &[0, 1, 2, 3, 4, 5]);
        let x = excise(&simplify(a.graph()).0);
        // States (i, b) with every edge flipping b.
        let vs: Vec<String> = (0..12).map(|k| format!("{}.{}", k / 2, k % 2)).collect();
        let mut es = Vec::new();
        let mut q = Vec::new();
        for (ei, e) in x.edges().iter().enumerate() {
            for b in 0..2 {
                es.push((
                    format!("{}.{b}", e.id),
                    format!("{}.{b}", x.vertex(e.src)),
                    format!("{}.{}", x.vertex(e.dst), 1 - b),
                ));
                q.push(ei);
            }
        }
        let h = DiGraph::new(vs, es).unwrap();
        let p = (0..12).map(|k| k / 2).collect();
        let cover = GraphMorphism::new(h, x, p, q).unwrap();
        let out = check(&a, &cover);
        assert_eq!(out.automaton.state_count(), 12);
        assert_eq!(out.automaton.sample_language(4), a.sample_language(4));
    }

    #[test]
    fn rejects_non_covers() {
        let a = cyclic(3, &[1]);
        let x = excise(&simplify(a.graph()).0);
        let mut es: Vec<(String, String, String)> =
            x.edges().iter().map(|e| (e.id.clone(), x.vertex(e.src).into(), x.vertex(e.dst).into())).collect();
        let f = x.out_edges(0)[0];
        es.push(("extra".into(), x.vertex(0).into(), x.vertex(x.dst(f)).into()));
        let h = DiGraph::new(x.vertices().to_vec(), es).unwrap();
        let q = (0..x.edge_count()).chain([f]).collect();
        let phi = GraphMorphism::new(h, x.clone(), (0..3).collect(), q).unwrap();
        assert!(matches!(automaton_from_cover(&a, &phi), Err(Error::Precondition(_))));
    }
}
