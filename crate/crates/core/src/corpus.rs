//! Named fixtures: language automata and small emulator and cover examples.

use crate::automaton::Automaton;
use crate::digraph::{bidirect, DiGraph, GraphMorphism, UndirectedGraph, UndirectedMorphism};
use crate::error::{Error, Result};
use crate::format::{
    automaton_doc, graph_doc, morphism_doc, to_pretty, undirected_morphism_doc, GraphDoc, MorphismDoc,
};
use crate::semi::SemiAutomaton;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Graph,
    Automaton,
    Morphism,
    UndirectedMorphism,
}

impl Kind {
    fn extension(self) -> &'static str {
        match self {
            Kind::Graph => "graph.json",
            Kind::Automaton => "auto.json",
            Kind::Morphism => "mor.json",
            Kind::UndirectedMorphism => "umor.json",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Fixture {
    Graph(DiGraph),
    Automaton(Automaton),
    Morphism(GraphMorphism),
    UndirectedMorphism(UndirectedMorphism),
}

impl Fixture {
    pub fn kind(&self) -> Kind {
        match self {
            Fixture::Graph(_) => Kind::Graph,
            Fixture::Automaton(_) => Kind::Automaton,
            Fixture::Morphism(_) => Kind::Morphism,
            Fixture::UndirectedMorphism(_) => Kind::UndirectedMorphism,
        }
    }

    /// Underlying digraph: the graph, the automaton's graph or a morphism's source.
    pub fn digraph(&self) -> Option<&DiGraph> {
        match self {
            Fixture::Graph(g) => Some(g),
            Fixture::Automaton(a) => Some(a.graph()),
            Fixture::Morphism(m) => Some(m.source()),
            Fixture::UndirectedMorphism(_) => None,
        }
    }
}

struct Entry {
    name: &'static str,
    description: &'static str,
    build: fn() -> Fixture,
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "z6",
        description: "Words over Z/6 whose letters sum to 0 mod 6; minimal automaton on 6 states",
        build: z6,
    },
    Entry {
        name: "z6-unrolled12",
        description: "The Z/6 sum language on 12 states that also track word-length parity",
        build: z6_unrolled12,
    },
    Entry { name: "z7-123", description: "Words over {1,2,3} whose letters sum to 0 mod 7", build: z7_123 },
    Entry {
        name: "abc-mod7",
        description: "Three-letter words abc over Z/7 with a+b+c = 0 mod 7; trimmed minimal automaton",
        build: abc_mod7,
    },
    Entry { name: "par2", description: "Two parallel edges x -> y", build: || Fixture::Graph(par2()) },
    Entry { name: "c2", description: "Directed 2-cycle a -> b -> a", build: || Fixture::Graph(c2()) },
    Entry { name: "loop1", description: "One vertex with one loop", build: || Fixture::Graph(loop1()) },
    Entry { name: "loop2", description: "One vertex with two loops", build: || Fixture::Graph(loop2()) },
    Entry { name: "p2", description: "Directed path x -> y -> z", build: || Fixture::Graph(p2()) },
    Entry {
        name: "op-example",
        description: "Loop g at v, edges e: v -> w and f: w -> v",
        build: || Fixture::Graph(op_example()),
    },
    Entry {
        name: "loop2-to-loop1",
        description: "Two loops onto one: a directed emulator that is not a cover",
        build: loop2_to_loop1,
    },
    Entry {
        name: "fork-nonemulator",
        description: "Epimorphism onto a fork whose centre has two out-edges while each preimage has one",
        build: fork_nonemulator,
    },
    Entry {
        name: "simple-example",
        description: "Directed 2-cycle u <-> w amalgamated onto a loop",
        build: simple_example,
    },
    Entry {
        name: "swap",
        description: "Two parallel edges v -> w mapped to themselves with the edges exchanged",
        build: swap,
    },
    Entry {
        name: "extraction",
        description: "Two sheets over an edge with one extra edge: an emulator containing covers",
        build: extraction,
    },
    Entry {
        name: "forget-breaks-emulator",
        description: "Directed emulator of a path whose underlying undirected map is not an emulator",
        build: forget_breaks_emulator,
    },
    Entry {
        name: "r-breaks-cover",
        description: "Fork covering two parallel edges; after simplification only an emulator",
        build: r_breaks_cover,
    },
    Entry {
        name: "c2-over-double-edge",
        description: "Directed cover of the bidirected edge whose undirected transpose is not a cover",
        build: c2_over_double_edge,
    },
    Entry {
        name: "path-of-3",
        description: "Direction of a 3-vertex path mapped into its bidirection; not a directed emulator",
        build: path_of_3,
    },
    Entry {
        name: "path-4-over-3",
        description: "Undirected 4-vertex emulator of a 3-vertex path containing no 4-vertex cover",
        build: path_4_over_3,
    },
    Entry {
        name: "edge-over-loop",
        description: "Undirected cover of a loop by an edge admitting no directed lift",
        build: edge_over_loop,
    },
];

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

fn entry(name: &str) -> Result<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| Error::domain(format!("unknown fixture `{name}`")))
}

pub fn description(name: &str) -> Result<&'static str> {
    Ok(entry(name)?.description)
}

pub fn fixture(name: &str) -> Result<Fixture> {
    Ok((entry(name)?.build)())
}

pub fn automaton(name: &str) -> Result<Automaton> {
    match fixture(name)? {
        Fixture::Automaton(a) => Ok(a),
        _ => Err(Error::domain(format!("fixture `{name}` is not an automaton"))),
    }
}

pub fn morphism(name: &str) -> Result<GraphMorphism> {
    match fixture(name)? {
        Fixture::Morphism(m) => Ok(m),
        _ => Err(Error::domain(format!("fixture `{name}` is not a directed morphism"))),
    }
}

pub fn undirected_morphism(name: &str) -> Result<UndirectedMorphism> {
    match fixture(name)? {
        Fixture::UndirectedMorphism(m) => Ok(m),
        _ => Err(Error::domain(format!("fixture `{name}` is not an undirected morphism"))),
    }
}

/// File name and JSON text of a fixture.
pub fn emit(name: &str) -> Result<(String, String)> {
    let e = entry(name)?;
    let fx = (e.build)();
    let file = format!("{}.{}", name.replace('-', "_"), fx.kind().extension());
    let text = match &fx {
        Fixture::Graph(g) => to_pretty(&graph_doc(g).with_description(e.description)),
        Fixture::Automaton(a) => to_pretty(&automaton_doc(a).with_description(e.description)),
        Fixture::Morphism(m) => to_pretty(&morphism_doc(m).with_description(e.description)),
        Fixture::UndirectedMorphism(m) => to_pretty(&undirected_morphism_doc(m).with_description(e.description)),
    };
    Ok((file, text))
}

/// Parses emitted text back according to the fixture's kind.
pub fn parse_emitted(kind: Kind, text: &str) -> Result<Fixture> {
    Ok(match kind {
        Kind::Graph => Fixture::Graph(crate::format::parse::<GraphDoc>(text)?.to_digraph()?),
        Kind::Automaton => Fixture::Automaton(crate::format::parse::<GraphDoc>(text)?.to_automaton()?),
        Kind::Morphism => Fixture::Morphism(crate::format::parse::<MorphismDoc>(text)?.to_morphism()?),
        Kind::UndirectedMorphism => {
            Fixture::UndirectedMorphism(crate::format::parse::<MorphismDoc>(text)?.to_undirected_morphism()?)
        }
    })
}

fn dg(vs: &[&str], es: &[(&str, &str, &str)]) -> DiGraph {
    DiGraph::new(vs.iter().copied(), es.iter().copied()).expect("fixture graph")
}

fn mor(src: DiGraph, dst: DiGraph, p: &[&str], q: &[&str]) -> GraphMorphism {
    let p = p.iter().map(|v| dst.vertex_index(v).expect("fixture vertex")).collect();
    let q = q.iter().map(|e| dst.edge_index(e).expect("fixture edge")).collect();
    GraphMorphism::unchecked(src, dst, p, q).expect("fixture morphism")
}

/// `i --a--> (i + a) mod n` for every state and letter.
pub fn modular(n: usize, letters: &[usize]) -> Automaton {
    let vs: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut es = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for &a in letters {
            es.push((format!("{i}.{a}"), i.to_string(), ((i + a) % n).to_string()));
            labels.push(a.to_string());
        }
    }
    let alphabet = letters.iter().map(|a| a.to_string()).collect();
    let semi = SemiAutomaton::with_labels(DiGraph::new(vs, es).expect("fixture"), alphabet, labels).expect("fixture");
    Automaton::new(semi, &["0"], &["0"]).expect("fixture")
}

fn z6() -> Fixture {
    Fixture::Automaton(modular(6, &[0, 1, 2, 3, 4, 5]))
}

fn z7_123() -> Fixture {
    Fixture::Automaton(modular(7, &[1, 2, 3]))
}

fn z6_unrolled12() -> Fixture {
    let name = |i: usize, b: usize| format!("{i}{}", if b == 0 { "e" } else { "o" });
    let mut vs = Vec::new();
    let mut es = Vec::new();
    let mut labels = Vec::new();
    for b in 0..2 {
        for i in 0..6 {
            vs.push(name(i, b));
        }
    }
    for b in 0..2 {
        for i in 0..6 {
            for a in 0..6 {
                es.push((format!("{}.{a}", name(i, b)), name(i, b), name((i + a) % 6, 1 - b)));
                labels.push(a.to_string());
            }
        }
    }
    let alphabet = (0..6).map(|a| a.to_string()).collect();
    let semi = SemiAutomaton::with_labels(DiGraph::new(vs, es).expect("fixture"), alphabet, labels).expect("fixture");
    Fixture::Automaton(Automaton::new(semi, &["0e"], &["0e", "0o"]).expect("fixture"))
}

fn abc_mod7() -> Fixture {
    let mut vs = vec!["start".to_string()];
    vs.extend((0..7).map(|x| format!("{x}_0")));
    vs.extend((0..7).map(|y| format!("{y}_1")));
    vs.push("end".to_string());
    let mut es = Vec::new();
    let mut labels = Vec::new();
    for a in 0..7 {
        es.push((format!("start.{a}"), "start".to_string(), format!("{a}_0")));
        labels.push(a.to_string());
    }
    for x in 0..7 {
        for b in 0..7 {
            es.push((format!("{x}_0.{b}"), format!("{x}_0"), format!("{}_1", (x + b) % 7)));
            labels.push(b.to_string());
        }
    }
    for y in 0..7 {
        let c = (7 - y) % 7;
        es.push((format!("{y}_1.{c}"), format!("{y}_1"), "end".to_string()));
        labels.push(c.to_string());
    }
    let alphabet = (0..7).map(|a| a.to_string()).collect();
    let semi = SemiAutomaton::with_labels(DiGraph::new(vs, es).expect("fixture"), alphabet, labels).expect("fixture");
    Fixture::Automaton(Automaton::new(semi, &["start"], &["end"]).expect("fixture"))
}

fn par2() -> DiGraph {
    dg(&["x", "y"], &[("p", "x", "y"), ("q", "x", "y")])
}

fn c2() -> DiGraph {
    dg(&["a", "b"], &[("ab", "a", "b"), ("ba", "b", "a")])
}

fn loop1() -> DiGraph {
    dg(&["v"], &[("l", "v", "v")])
}

fn loop2() -> DiGraph {
    dg(&["u"], &[("a", "u", "u"), ("b", "u", "u")])
}

fn p2() -> DiGraph {
    dg(&["x", "y", "z"], &[("xy", "x", "y"), ("yz", "y", "z")])
}

fn op_example() -> DiGraph {
    dg(&["v", "w"], &[("e", "v", "w"), ("f", "w", "v"), ("g", "v", "v")])
}

fn loop2_to_loop1() -> Fixture {
    Fixture::Morphism(mor(loop2(), loop1(), &["v"], &["l", "l"]))
}

fn fork_nonemulator() -> Fixture {
    let src = dg(&["v0", "u0", "v1", "v2"], &[("a", "u0", "v1"), ("b", "v0", "v2")]);
    let dst = dg(&["w0", "w1", "w2"], &[("a", "w0", "w1"), ("b", "w0", "w2")]);
    Fixture::Morphism(mor(src, dst, &["w0", "w0", "w1", "w2"], &["a", "b"]))
}

fn simple_example() -> Fixture {
    let src = dg(&["u", "w"], &[("uw", "u", "w"), ("wu", "w", "u")]);
    let dst = dg(&["v"], &[("l", "v", "v")]);
    Fixture::Morphism(mor(src, dst, &["v", "v"], &["l", "l"]))
}

fn swap() -> Fixture {
    let g = dg(&["v", "w"], &[("a", "v", "w"), ("b", "v", "w")]);
    Fixture::Morphism(mor(g.clone(), g, &["v", "w"], &["b", "a"]))
}

fn extraction() -> Fixture {
    let src = dg(&["v1", "v2", "w1", "w2"], &[("e1", "v1", "w1"), ("e2", "v2", "w2"), ("e3", "v2", "w1")]);
    let dst = dg(&["v", "w"], &[("e", "v", "w")]);
    Fixture::Morphism(mor(src, dst, &["v", "v", "w", "w"], &["e", "e", "e"]))
}

fn forget_breaks_emulator() -> Fixture {
    let src = dg(&["v0", "v1", "u1", "v2"], &[("a", "v0", "v1"), ("b", "v1", "v2"), ("c", "u1", "v2")]);
    let dst = dg(&["w0", "w1", "w2"], &[("a", "w0", "w1"), ("b", "w1", "w2")]);
    Fixture::Morphism(mor(src, dst, &["w0", "w1", "w1", "w2"], &["a", "b", "b"]))
}

fn r_breaks_cover() -> Fixture {
    let fork = dg(&["a", "b", "c"], &[("e", "a", "b"), ("f", "a", "c")]);
    Fixture::Morphism(mor(fork, par2(), &["x", "y", "y"], &["p", "q"]))
}

fn single_edge() -> UndirectedGraph {
    UndirectedGraph::new(["x", "y"], [("e", "x", "y")]).expect("fixture")
}

fn c2_over_double_edge() -> Fixture {
    let h = bidirect(&single_edge());
    let src = c2();
    let p = vec![h.vertex_index("x").expect("x"), h.vertex_index("y").expect("y")];
    let q = [("x", "y"), ("y", "x")]
        .iter()
        .map(|&(s, t)| {
            (0..h.edge_count()).find(|&e| h.vertex(h.src(e)) == s && h.vertex(h.dst(e)) == t).expect("bidirected edge")
        })
        .collect();
    Fixture::Morphism(GraphMorphism::unchecked(src, h, p, q).expect("fixture"))
}

fn path_of_3() -> Fixture {
    let path = UndirectedGraph::new(["x", "y", "z"], [("e", "x", "y"), ("f", "y", "z")]).expect("fixture");
    let h = bidirect(&path);
    let g = p2();
    let find = |s: &str, t: &str| {
        (0..h.edge_count()).find(|&e| h.vertex(h.src(e)) == s && h.vertex(h.dst(e)) == t).expect("bidirected edge")
    };
    let p = ["x", "y", "z"].iter().map(|v| h.vertex_index(v).expect("vertex")).collect();
    let q = vec![find("x", "y"), find("y", "z")];
    Fixture::Morphism(GraphMorphism::unchecked(g, h, p, q).expect("fixture"))
}

fn path_4_over_3() -> Fixture {
    let top = UndirectedGraph::new(
        ["h1", "h2", "h3", "h4"],
        [("a1", "h1", "h3"), ("b1", "h3", "h2"), ("a2", "h1", "h4"), ("b2", "h4", "h2")],
    )
    .expect("fixture");
    let bottom = UndirectedGraph::new(["g1", "g2", "g3"], [("a", "g1", "g2"), ("b", "g2", "g3")]).expect("fixture");
    let p = vec![0, 2, 1, 1];
    let q = vec![0, 1, 0, 1];
    Fixture::UndirectedMorphism(UndirectedMorphism::unchecked(top, bottom, p, q).expect("fixture"))
}

fn edge_over_loop() -> Fixture {
    let top = UndirectedGraph::new(["a", "b"], [("e", "a", "b")]).expect("fixture");
    let bottom = UndirectedGraph::new(["v"], [("l", "v", "v")]).expect("fixture");
    Fixture::UndirectedMorphism(UndirectedMorphism::unchecked(top, bottom, vec![0, 0], vec![0]).expect("fixture"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{equivalent, minimize};
    use crate::emulation::{is_directed_cover, is_directed_emulator, is_undirected_cover, is_undirected_emulator};

    #[test]
    fn every_fixture_round_trips() {
        for name in names() {
            let (file, text) = emit(name).unwrap();
            assert!(text.contains("\"description\""), "{name}");
            let kind = fixture(name).unwrap().kind();
            let back = parse_emitted(kind, &text).unwrap();
            assert_eq!(emit(name).unwrap().1, text, "{name} is not deterministic");
            match (fixture(name).unwrap(), back) {
                (Fixture::Graph(a), Fixture::Graph(b)) => assert_eq!(a, b),
                (Fixture::Automaton(a), Fixture::Automaton(b)) => assert_eq!(a.semi(), b.semi()),
                (Fixture::Morphism(a), Fixture::Morphism(b)) => assert_eq!(a, b),
                (Fixture::UndirectedMorphism(a), Fixture::UndirectedMorphism(b)) => assert_eq!(a, b),
                _ => panic!("{name} changed kind"),
            }
            assert!(file.ends_with(".json"));
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn morphism_fixtures_are_valid() {
        for name in names() {
            match fixture(name).unwrap() {
                Fixture::Morphism(m) => assert!(m.is_valid(), "{name}"),
                Fixture::UndirectedMorphism(m) => assert!(m.is_valid(), "{name}"),
                _ => {}
            }
        }
    }

    #[test]
    fn z6_minimizes_to_six_states() {
        let z6 = automaton("z6").unwrap();
        let unrolled = automaton("z6-unrolled12").unwrap();
        assert_eq!(unrolled.state_count(), 12);
        let (m, _) = minimize(&unrolled).unwrap();
        assert_eq!(m.state_count(), 6);
        assert!(equivalent(&m, &z6));
    }

    #[test]
    fn abc_mod7_has_sixteen_states() {
        let a = automaton("abc-mod7").unwrap();
        assert_eq!(a.state_count(), 16);
        assert!(a.is_deterministic() && !a.is_complete());
        assert!(a.accepts(&["1", "2", "4"]).unwrap());
        assert!(!a.accepts(&["1", "2", "3"]).unwrap());
        assert!(!a.accepts(&["0", "0", "0", "0"]).unwrap());
    }

    #[test]
    fn classifications() {
        let m = morphism("loop2-to-loop1").unwrap();
        assert!(is_directed_emulator(&m) && !is_directed_cover(&m));
        assert!(!is_directed_emulator(&morphism("fork-nonemulator").unwrap()));
        assert!(is_directed_emulator(&morphism("simple-example").unwrap()));
        assert!(is_directed_cover(&morphism("swap").unwrap()));
        let m = morphism("extraction").unwrap();
        assert!(is_directed_emulator(&m) && !is_directed_cover(&m));
        assert!(is_directed_emulator(&morphism("forget-breaks-emulator").unwrap()));
        assert!(is_directed_cover(&morphism("c2-over-double-edge").unwrap()));
        assert!(!is_directed_emulator(&morphism("path-of-3").unwrap()));
        let m = undirected_morphism("path-4-over-3").unwrap();
        assert!(is_undirected_emulator(&m) && !is_undirected_cover(&m));
        assert!(is_undirected_cover(&undirected_morphism("edge-over-loop").unwrap()));
    }
}
