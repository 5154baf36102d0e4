//! JSON interchange and DOT export.
//!
//! One document shape covers graphs, semi-automata and automata: a digraph
//! `{"vertices", "edges": [{"id", "src", "dst"}]}`, optionally with
//! `"alphabet"` and per-edge `"label"`, optionally with `"initials"` and
//! `"finals"`. Undirected edges carry `"ends"` instead of `src`/`dst`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automaton::Automaton;
use crate::digraph::{forget, DiGraph, GraphMorphism, UndirectedGraph, UndirectedMorphism};
use crate::emulation::CoverCertificate;
use crate::error::{Error, Result};
use crate::genus::RotationSystem;
use crate::relation::AutomaticRelation;
use crate::semi::{SemiAutomaton, SemiMorphism};

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initials: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finals: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dst: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ends: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub source: GraphDoc,
    pub target: GraphDoc,
    pub p: BTreeMap<String, String>,
    pub q: BTreeMap<String, String>,
    /// Letter map of a semi-automaton morphism.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub vertex_classes: Vec<Vec<String>>,
    pub edge_classes: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub base: GraphDoc,
    pub total: GraphDoc,
    pub p: BTreeMap<String, String>,
    pub q: BTreeMap<String, String>,
    pub rotation: BTreeMap<String, Vec<String>>,
    pub genus: usize,
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn graph_doc(g: &DiGraph) -> GraphDoc {
    GraphDoc {
        vertices: g.vertices().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                src: Some(g.vertex(e.src).to_string()),
                dst: Some(g.vertex(e.dst).to_string()),
                ends: None,
                label: None,
            })
            .collect(),
        ..GraphDoc::default()
    }
}

pub fn undirected_doc(g: &UndirectedGraph) -> GraphDoc {
    GraphDoc {
        vertices: g.vertices().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = e.ends;
                let ends =
                    if a == b { vec![g.vertex(a).to_string()] } else { vec![g.vertex(a).into(), g.vertex(b).into()] };
                EdgeDoc { id: e.id.clone(), src: None, dst: None, ends: Some(ends), label: None }
            })
            .collect(),
        ..GraphDoc::default()
    }
}

pub fn semi_doc(a: &SemiAutomaton) -> GraphDoc {
    let mut doc = graph_doc(a.graph());
    for (e, edge) in doc.edges.iter_mut().enumerate() {
        edge.label = Some(a.label_str(e).to_string());
    }
    doc.alphabet = Some(a.alphabet().to_vec());
    doc
}

pub fn automaton_doc(a: &Automaton) -> GraphDoc {
    let mut doc = semi_doc(a.semi());
    let g = a.graph();
    doc.initials = Some(a.initials().iter().map(|&v| g.vertex(v).to_string()).collect());
    doc.finals = Some(a.finals().iter().map(|&v| g.vertex(v).to_string()).collect());
    doc
}

impl GraphDoc {
    pub fn with_description(mut self, text: impl Into<String>) -> Self {
        self.description = Some(text.into());
        self
    }

    pub fn to_digraph(&self) -> Result<DiGraph> {
        let edges = self
            .edges
            .iter()
            .map(|e| match (&e.src, &e.dst, &e.ends) {
                (Some(s), Some(d), None) => Ok((e.id.clone(), s.clone(), d.clone())),
                _ => Err(Error::domain(format!("edge `{}` needs `src` and `dst`", e.id))),
            })
            .collect::<Result<Vec<_>>>()?;
        DiGraph::new(self.vertices.clone(), edges)
    }

    pub fn to_undirected(&self) -> Result<UndirectedGraph> {
        let edges = self
            .edges
            .iter()
            .map(|e| match (&e.ends, &e.src, &e.dst) {
                (Some(ends), None, None) if ends.len() == 1 => Ok((e.id.clone(), ends[0].clone(), ends[0].clone())),
                (Some(ends), None, None) if ends.len() == 2 => Ok((e.id.clone(), ends[0].clone(), ends[1].clone())),
                (None, Some(s), Some(d)) => Ok((e.id.clone(), s.clone(), d.clone())),
                _ => Err(Error::domain(format!("edge `{}` needs one or two `ends`", e.id))),
            })
            .collect::<Result<Vec<_>>>()?;
        UndirectedGraph::new(self.vertices.clone(), edges)
    }

    /// Directed input is read through the forgetful functor.
    pub fn to_any_undirected(&self) -> Result<UndirectedGraph> {
        if self.edges.iter().all(|e| e.ends.is_none()) {
            Ok(forget(&self.to_digraph()?))
        } else {
            self.to_undirected()
        }
    }

    pub fn to_semi(&self) -> Result<SemiAutomaton> {
        let g = self.to_digraph()?;
        let labels = self
            .edges
            .iter()
            .map(|e| e.label.clone().ok_or_else(|| Error::domain(format!("edge `{}` has no label", e.id))))
            .collect::<Result<Vec<_>>>()?;
        match &self.alphabet {
            Some(alphabet) => SemiAutomaton::with_labels(g, alphabet.clone(), labels),
            None => SemiAutomaton::from_edge_labels(g, labels),
        }
    }

    pub fn to_automaton(&self) -> Result<Automaton> {
        let semi = self.to_semi()?;
        let initials = self.initials.as_ref().ok_or_else(|| Error::domain("automaton needs `initials`"))?;
        let finals = self.finals.as_ref().ok_or_else(|| Error::domain("automaton needs `finals`"))?;
        Automaton::new(semi, initials, finals)
    }
}

pub fn morphism_doc(m: &GraphMorphism) -> MorphismDoc {
    MorphismDoc {
        description: None,
        source: graph_doc(m.source()),
        target: graph_doc(m.target()),
        p: m.p_ids(),
        q: m.q_ids(),
        alpha: None,
    }
}

pub fn undirected_morphism_doc(m: &UndirectedMorphism) -> MorphismDoc {
    MorphismDoc {
        description: None,
        source: undirected_doc(m.source()),
        target: undirected_doc(m.target()),
        p: m.p_ids(),
        q: m.q_ids(),
        alpha: None,
    }
}

pub fn semi_morphism_doc(m: &SemiMorphism) -> MorphismDoc {
    MorphismDoc {
        description: None,
        source: semi_doc(m.source()),
        target: semi_doc(m.target()),
        p: m.base().p_ids(),
        q: m.base().q_ids(),
        alpha: Some(m.alpha_ids()),
    }
}

impl MorphismDoc {
    pub fn with_description(mut self, text: impl Into<String>) -> Self {
        self.description = Some(text.into());
        self
    }

    /// Candidate morphism; adjacency is checked by the caller.
    pub fn to_morphism(&self) -> Result<GraphMorphism> {
        GraphMorphism::from_ids(self.source.to_digraph()?, self.target.to_digraph()?, &self.p, &self.q)
    }

    pub fn to_undirected_morphism(&self) -> Result<UndirectedMorphism> {
        UndirectedMorphism::from_ids(
            self.source.to_any_undirected()?,
            self.target.to_any_undirected()?,
            &self.p,
            &self.q,
        )
    }

    pub fn to_semi_morphism(&self) -> Result<SemiMorphism> {
        let base = self.to_morphism()?;
        let (s, t) = (self.source.to_semi()?, self.target.to_semi()?);
        let (p, q) = (base.vertex_map().to_vec(), base.edge_map().to_vec());
        match &self.alpha {
            None => SemiMorphism::inferred(s, t, p, q),
            Some(alpha) => {
                let idx = s
                    .alphabet()
                    .iter()
                    .map(|a| {
                        let b = alpha.get(a).ok_or_else(|| Error::domain(format!("letter map undefined at `{a}`")))?;
                        t.letter_index(b).ok_or_else(|| Error::UnknownLabel(b.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SemiMorphism::new(s, t, p, q, idx)
            }
        }
    }
}

pub fn relation_doc(g: &DiGraph, r: &AutomaticRelation) -> RelationDoc {
    let (vertex_classes, edge_classes) = r.to_classes(g);
    RelationDoc { vertex_classes, edge_classes }
}

impl RelationDoc {
    pub fn to_relation(&self, g: &DiGraph) -> Result<AutomaticRelation> {
        AutomaticRelation::from_classes(g, &self.vertex_classes, &self.edge_classes)
    }
}

pub fn certificate_doc(c: &CoverCertificate) -> CertificateDoc {
    CertificateDoc {
        description: None,
        base: graph_doc(c.base()),
        total: graph_doc(&c.total),
        p: c.morphism.p_ids(),
        q: c.morphism.q_ids(),
        rotation: c.genus_witness.to_tokens(&forget(&c.total)),
        genus: c.genus,
    }
}

impl CertificateDoc {
    /// Parses without checking the cover or genus claims; see [`CoverCertificate::verify`].
    pub fn to_certificate(&self) -> Result<CoverCertificate> {
        let total = self.total.to_digraph()?;
        let base = self.base.to_digraph()?;
        let morphism = GraphMorphism::from_ids(total.clone(), base, &self.p, &self.q)?;
        let genus_witness = RotationSystem::from_tokens(&forget(&total), &self.rotation)?;
        Ok(CoverCertificate { total, morphism, genus_witness, genus: self.genus })
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn dot_digraph(g: &DiGraph) -> String {
    dot_directed(g, |e| g.edge(e).id.clone(), &[], &[])
}

/// Arcs carry `id:label`.
pub fn dot_semi(a: &SemiAutomaton) -> String {
    let g = a.graph();
    dot_directed(g, |e| format!("{}:{}", g.edge(e).id, a.label_str(e)), &[], &[])
}

/// Finals are double circles; initials get an entry arrow.
pub fn dot_automaton(a: &Automaton) -> String {
    let g = a.graph();
    dot_directed(g, |e| format!("{}:{}", g.edge(e).id, a.semi().label_str(e)), a.initials(), a.finals())
}

fn dot_directed(g: &DiGraph, label: impl Fn(usize) -> String, initials: &[usize], finals: &[usize]) -> String {
    let mut out = String::from("digraph G {\n");
    for v in 0..g.vertex_count() {
        let shape = if finals.contains(&v) { " shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  {} [label={}{shape}];", quote(g.vertex(v)), quote(g.vertex(v)));
    }
    for &v in initials {
        let ghost = quote(&format!("__start_{}", g.vertex(v)));
        let _ = writeln!(out, "  {ghost} [shape=point];");
        let _ = writeln!(out, "  {ghost} -> {};", quote(g.vertex(v)));
    }
    for (e, edge) in g.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(g.vertex(edge.src)),
            quote(g.vertex(edge.dst)),
            quote(&label(e))
        );
    }
    out.push_str("}\n");
    out
}

pub fn dot_undirected(g: &UndirectedGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for e in g.edges() {
        let (a, b) = e.ends;
        let _ = writeln!(out, "  {} -- {} [label={}];", quote(g.vertex(a)), quote(g.vertex(b)), quote(&e.id));
    }
    out.push_str("}\n");
    out
}
