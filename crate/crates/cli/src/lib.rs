//! Command-line front end for `regulus`.
//!
//! Every verb reads JSON documents, writes one JSON document to stdout (or
//! `--output`) and exits with 0 on success, 1 on a negative verdict, 2 when a
//! budget is exceeded and 3 on bad input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use regulus::automaton::{
    automaton_from_cover, complete_with_trash, counterexample, language_graph, minimize, parse_word, Automaton,
};
use regulus::corpus;
use regulus::digraph::{
    bidirect, contract_cycle, excise, forget, opposite, pullback, reachability, simplify, DiGraph, DirectedCycle,
    UndirectedGraph,
};
use regulus::emulation::{
    check_directed_cover, check_directed_emulator, check_undirected_cover, check_undirected_emulator,
    extend_over_excision, extract_cover, lift_direction, search_covers, CoverSearchSpec, SearchOutcome, SearchStats,
};
use regulus::format::{self, CertificateDoc, GraphDoc, MorphismDoc, RelationDoc};
use regulus::genus::{
    euler_lower_bound, genus_exact_with, genus_formula, genus_invariance_suite, girth_lower_bound, is_planar,
    language_genus_from_certificate, language_genus_leq, rotation_budget, trace_faces, FaceVector, GenusBudget,
    LanguageBounds, LanguageGenus,
};
use regulus::relation::{
    canonical_relation, canonical_semi_automaton, check_automatic, complete_final_systems, factorize, join, maximum,
    meet, mn_refine, quotient, FinalFamily,
};
use regulus::semi::{relabel, tautological};
use regulus::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "regulus", version, about = "Directed emulators, covers and the genus of regular languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Also emit DOT for graph-valued results.
    #[arg(long, global = true)]
    dot: bool,
    /// Worker threads for genus searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graph functors and constructions.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Semi-automata.
    #[command(subcommand)]
    Sa(SaCmd),
    /// Automata and languages.
    #[command(subcommand)]
    Auto(AutoCmd),
    /// Automatic relations.
    #[command(subcommand)]
    Rel(RelCmd),
    /// Emulators and covers.
    #[command(subcommand)]
    Emu(EmuCmd),
    /// Graph and language genus.
    #[command(subcommand)]
    Genus(GenusCmd),
    /// Built-in fixtures.
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    Simplify {
        input: PathBuf,
    },
    Excise {
        input: PathBuf,
    },
    Op {
        input: PathBuf,
    },
    Forget {
        input: PathBuf,
    },
    /// Bidirection of an undirected graph.
    Bidirect {
        input: PathBuf,
    },
    Contract {
        input: PathBuf,
        /// Edge ids of the cycle in walk order.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<String>,
    },
    /// Pullback of two morphisms with a common target.
    Pullback {
        phi: PathBuf,
        psi: PathBuf,
    },
    Reach {
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum SaCmd {
    Tautological {
        input: PathBuf,
    },
    Relabel {
        input: PathBuf,
        /// Letter map entries `old=new`.
        #[arg(long = "map", value_delimiter = ',', required = true)]
        map: Vec<String>,
    },
    /// Checks a semi-automaton morphism.
    Check {
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum AutoCmd {
    Accept {
        input: PathBuf,
        /// Space separated letters.
        word: String,
    },
    Sample {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_length: usize,
    },
    Minimize {
        input: PathBuf,
    },
    Complete {
        input: PathBuf,
    },
    /// Underlying graph of the minimal automaton.
    Graph {
        input: PathBuf,
    },
    FromCover {
        input: PathBuf,
        cover: PathBuf,
    },
    Equal {
        left: PathBuf,
        right: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum RelCmd {
    Check {
        graph: PathBuf,
        relation: PathBuf,
    },
    Quotient {
        graph: PathBuf,
        relation: PathBuf,
    },
    Canonical {
        morphism: PathBuf,
    },
    Factorize {
        morphism: PathBuf,
    },
    Mn {
        input: PathBuf,
        /// Disjoint vertex sets, `a,b;c`; defaults to the final states or a minimal complete final system.
        #[arg(long)]
        finals: Option<String>,
    },
    FinalSystems {
        graph: PathBuf,
    },
    Join {
        graph: PathBuf,
        left: PathBuf,
        right: PathBuf,
    },
    Meet {
        graph: PathBuf,
        left: PathBuf,
        right: PathBuf,
    },
    Max {
        graph: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum EmuCmd {
    Check {
        morphism: PathBuf,
    },
    CheckCover {
        morphism: PathBuf,
    },
    Extract {
        morphism: PathBuf,
    },
    /// Extends a morphism onto `Exc(H)` to one onto `H`.
    Extend {
        morphism: PathBuf,
        graph: PathBuf,
    },
    /// Orients an undirected emulator along a direction of its base.
    Lift {
        morphism: PathBuf,
        direction: PathBuf,
    },
    Search {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        max_fiber: usize,
        /// Accept disconnected covers.
        #[arg(long)]
        disconnected: bool,
        /// Seconds.
        #[arg(long, default_value_t = 300)]
        time_limit: u64,
    },
    VerifyCert {
        certificate: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum GenusCmd {
    Exact {
        graph: PathBuf,
        #[arg(long)]
        force: bool,
        /// Report only the girth-based Euler lower bound.
        #[arg(long)]
        lower_bound_only: bool,
    },
    Planar {
        graph: PathBuf,
    },
    LowerBound {
        graph: PathBuf,
        /// Girth floor; defaults to per-component girth.
        #[arg(long)]
        girth: Option<usize>,
    },
    Formula {
        #[arg(long)]
        m: usize,
        /// Face counts `length:count,...`.
        #[arg(long, value_delimiter = ',')]
        faces: Vec<String>,
    },
    Invariance {
        graph: PathBuf,
        #[arg(long)]
        force: bool,
    },
    Language {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        max_fiber: usize,
        /// Planar-cover certificate to use instead of searching.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long, default_value_t = 300)]
        time_limit: u64,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    List,
    Emit {
        name: String,
        /// Write the file into this directory instead of stdout.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Budget(_)) { EXIT_BUDGET } else { EXIT_INPUT };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

/// Result of one verb.
struct Output {
    json: Value,
    dot: Option<String>,
    code: i32,
}

impl Output {
    fn ok(json: Value) -> Self {
        Output { json, dot: None, code: EXIT_OK }
    }

    fn verdict(json: Value, positive: bool) -> Self {
        Output { json, dot: None, code: if positive { EXIT_OK } else { EXIT_NEGATIVE } }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

type Outcome = Result<Output, Failure>;

/// Runs one command line, writing results to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = dispatch(&cli);
    match result {
        Ok(output) => match emit(&cli, &output, out) {
            Ok(()) => output.code,
            Err(f) => {
                let _ = writeln!(err, "error: {f}");
                f.code
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}

/// Runs with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn emit(cli: &Cli, output: &Output, out: &mut dyn Write) -> Result<(), Failure> {
    if output.json.is_null() {
        return Ok(());
    }
    let text = format::to_pretty(&output.json);
    let io = |e: std::io::Error| input_error(e.to_string());
    match &cli.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(io)?;
            if let (true, Some(dot)) = (cli.dot, &output.dot) {
                std::fs::write(path.with_extension("dot"), dot).map_err(io)?;
            }
        }
        None => {
            out.write_all(text.as_bytes()).map_err(io)?;
            if let (true, Some(dot)) = (cli.dot, &output.dot) {
                out.write_all(dot.as_bytes()).map_err(io)?;
            }
        }
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn read<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    format::parse(&read_text(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<DiGraph, Failure> {
    Ok(read::<GraphDoc>(path)?.to_digraph()?)
}

fn read_undirected(path: &Path) -> Result<UndirectedGraph, Failure> {
    Ok(read::<GraphDoc>(path)?.to_any_undirected()?)
}

fn read_automaton(path: &Path) -> Result<Automaton, Failure> {
    Ok(read::<GraphDoc>(path)?.to_automaton()?)
}

fn graph_out(g: &DiGraph) -> Output {
    Output::ok(to_value(&format::graph_doc(g))).with_dot(format::dot_digraph(g))
}

fn automaton_out(a: &Automaton) -> Output {
    Output::ok(to_value(&format::automaton_doc(a))).with_dot(format::dot_automaton(a))
}

fn to_value<T: serde::Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

fn budget(cli: &Cli, force: bool) -> GenusBudget {
    GenusBudget { force, jobs: cli.jobs.unwrap_or(0), ..GenusBudget::default() }
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Graph(c) => graph_cmd(c),
        Command::Sa(c) => sa_cmd(c),
        Command::Auto(c) => auto_cmd(c),
        Command::Rel(c) => rel_cmd(c),
        Command::Emu(c) => emu_cmd(cli, c),
        Command::Genus(c) => genus_cmd(cli, c),
        Command::Corpus(c) => corpus_cmd(c),
    }
}

fn graph_cmd(c: &GraphCmd) -> Outcome {
    Ok(match c {
        GraphCmd::Simplify { input } => {
            let (r, rho) = simplify(&read_graph(input)?);
            Output::ok(json!({ "graph": format::graph_doc(&r), "rho": format::morphism_doc(&rho) }))
                .with_dot(format::dot_digraph(&r))
        }
        GraphCmd::Excise { input } => graph_out(&excise(&read_graph(input)?)),
        GraphCmd::Op { input } => graph_out(&opposite(&read_graph(input)?)),
        GraphCmd::Forget { input } => {
            let u = forget(&read_graph(input)?);
            Output::ok(to_value(&format::undirected_doc(&u))).with_dot(format::dot_undirected(&u))
        }
        GraphCmd::Bidirect { input } => graph_out(&bidirect(&read_undirected(input)?)),
        GraphCmd::Contract { input, cycle } => {
            graph_out(&contract_cycle(&read_graph(input)?, &DirectedCycle::new(cycle.iter().cloned()))?)
        }
        GraphCmd::Pullback { phi, psi } => {
            let (phi, psi) = (read::<MorphismDoc>(phi)?.to_morphism()?, read::<MorphismDoc>(psi)?.to_morphism()?);
            let (l, p1, p2) = pullback(&phi, &psi)?;
            Output::ok(json!({
                "graph": format::graph_doc(&l),
                "pi1": format::morphism_doc(&p1),
                "pi2": format::morphism_doc(&p2),
            }))
            .with_dot(format::dot_digraph(&l))
        }
        GraphCmd::Reach { input } => {
            let g = read_graph(input)?;
            let r = reachability(&g);
            let names = |vs: &[usize]| vs.iter().map(|&v| g.vertex(v).to_string()).collect::<Vec<_>>();
            let pr: BTreeMap<String, Vec<String>> =
                (0..g.vertex_count()).map(|w| (g.vertex(w).to_string(), names(&r.pr[w]))).collect();
            Output::ok(json!({
                "ancestors": pr,
                "reachable": names(&r.reachable),
                "co_reachable": names(&r.co_reachable),
            }))
        }
    })
}

fn sa_cmd(c: &SaCmd) -> Outcome {
    Ok(match c {
        SaCmd::Tautological { input } => {
            let a = tautological(&read_graph(input)?);
            Output::ok(to_value(&format::semi_doc(&a))).with_dot(format::dot_semi(&a))
        }
        SaCmd::Relabel { input, map } => {
            let a = read::<GraphDoc>(input)?.to_semi()?;
            let alpha = map
                .iter()
                .map(|kv| {
                    kv.split_once('=')
                        .map(|(k, v)| (k.to_string(), v.to_string()))
                        .ok_or_else(|| input_error(format!("letter map entry `{kv}` is not `old=new`")))
                })
                .collect::<Result<BTreeMap<_, _>, _>>()?;
            let (b, m) = relabel(&a, &alpha)?;
            Output::ok(json!({ "semi_automaton": format::semi_doc(&b), "morphism": format::semi_morphism_doc(&m) }))
                .with_dot(format::dot_semi(&b))
        }
        SaCmd::Check { input } => match read::<MorphismDoc>(input)?.to_semi_morphism() {
            Ok(m) => Output::ok(json!({ "valid": true, "strict": m.is_strict(), "relabelling": m.is_relabelling() })),
            Err(Error::Domain(reason)) => Output::verdict(json!({ "valid": false, "reason": reason }), false),
            Err(e) => return Err(e.into()),
        },
    })
}

fn auto_cmd(c: &AutoCmd) -> Outcome {
    Ok(match c {
        AutoCmd::Accept { input, word } => {
            let accepted = read_automaton(input)?.accepts(&parse_word(word))?;
            Output::verdict(json!({ "accepted": accepted }), accepted)
        }
        AutoCmd::Sample { input, max_length } => {
            let s = read_automaton(input)?.sample_language(*max_length);
            let words: Vec<String> = s.words.iter().map(|w| w.join(" ")).collect();
            Output::ok(json!({ "max_length": max_length, "words": words }))
        }
        AutoCmd::Minimize { input } => {
            let (m, pi) = minimize(&read_automaton(input)?)?;
            Output::ok(json!({ "automaton": format::automaton_doc(&m), "projection": format::semi_morphism_doc(&pi) }))
                .with_dot(format::dot_automaton(&m))
        }
        AutoCmd::Complete { input } => automaton_out(&complete_with_trash(&read_automaton(input)?)?),
        AutoCmd::Graph { input } => graph_out(&language_graph(&read_automaton(input)?)?),
        AutoCmd::FromCover { input, cover } => {
            let a = read_automaton(input)?;
            let cover = read::<MorphismDoc>(cover)?.to_morphism()?;
            let built = automaton_from_cover(&a, &cover)?;
            Output::ok(json!({
                "automaton": format::automaton_doc(&built.automaton),
                "projection": format::semi_morphism_doc(&built.projection),
            }))
            .with_dot(format::dot_automaton(&built.automaton))
        }
        AutoCmd::Equal { left, right } => {
            let (a, b) = (read_automaton(left)?, read_automaton(right)?);
            match counterexample(&a, &b) {
                None => Output::verdict(json!({ "equal": true }), true),
                Some(w) => Output::verdict(json!({ "equal": false, "counterexample": w.join(" ") }), false),
            }
        }
    })
}

fn rel_cmd(c: &RelCmd) -> Outcome {
    let relation = |g: &DiGraph, path: &Path| -> Result<_, Failure> { Ok(read::<RelationDoc>(path)?.to_relation(g)?) };
    Ok(match c {
        RelCmd::Check { graph, relation: r } => {
            let g = read_graph(graph)?;
            match check_automatic(&g, &relation(&g, r)?)? {
                Ok(()) => Output::verdict(json!({ "automatic": true }), true),
                Err(v) => Output::verdict(json!({ "automatic": false, "violation": v.to_string() }), false),
            }
        }
        RelCmd::Quotient { graph, relation: r } => {
            let g = read_graph(graph)?;
            let (q, pi) = quotient(&g, &relation(&g, r)?)?;
            Output::ok(json!({ "graph": format::graph_doc(&q), "projection": format::morphism_doc(&pi) }))
                .with_dot(format::dot_digraph(&q))
        }
        RelCmd::Canonical { morphism } => {
            let phi = read::<MorphismDoc>(morphism)?.to_morphism()?;
            to_relation_output(phi.source(), &canonical_relation(&phi)?)
        }
        RelCmd::Factorize { morphism } => {
            let phi = read::<MorphismDoc>(morphism)?.to_morphism()?;
            let (r, iota) = factorize(&phi)?;
            Output::ok(json!({
                "relation": format::relation_doc(phi.source(), &r),
                "iota": format::morphism_doc(&iota),
            }))
        }
        RelCmd::Mn { input, finals } => {
            let doc = read::<GraphDoc>(input)?;
            let a = if doc.alphabet.is_some() || doc.edges.iter().any(|e| e.label.is_some()) {
                doc.to_semi()?
            } else {
                tautological(&doc.to_digraph()?)
            };
            let g = a.graph().clone();
            let family = match (finals, &doc.finals) {
                (Some(spec), _) => {
                    let sets: Vec<Vec<String>> = spec
                        .split(';')
                        .map(|s| s.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect())
                        .collect();
                    FinalFamily::from_ids(&g, &sets)?
                }
                (None, Some(f)) => FinalFamily::from_ids(&g, std::slice::from_ref(f))?,
                (None, None) => {
                    let sys = complete_final_systems(&g).minimal_system;
                    FinalFamily::new(g.vertex_count(), vec![sys])?
                }
            };
            to_relation_output(&g, &mn_refine(&a, &family))
        }
        RelCmd::FinalSystems { graph } => {
            let g = read_graph(graph)?;
            let f = complete_final_systems(&g);
            let names: Vec<&str> = f.minimal_system.iter().map(|&v| g.vertex(v)).collect();
            Output::ok(json!({ "minimal_system": names, "cardinality": f.cardinality }))
        }
        RelCmd::Join { graph, left, right } => {
            let g = read_graph(graph)?;
            to_relation_output(&g, &join(&g, &relation(&g, left)?, &relation(&g, right)?)?)
        }
        RelCmd::Meet { graph, left, right } => {
            let g = read_graph(graph)?;
            to_relation_output(&g, &meet(&g, &relation(&g, left)?, &relation(&g, right)?)?)
        }
        RelCmd::Max { graph } => {
            let g = read_graph(graph)?;
            to_relation_output(&g, &maximum(&g))
        }
    })
}

fn to_relation_output(g: &DiGraph, r: &regulus::relation::AutomaticRelation) -> Output {
    let out = Output::ok(to_value(&format::relation_doc(g, r)));
    match canonical_semi_automaton(g, r) {
        Ok(a) => out.with_dot(format::dot_semi(&a)),
        Err(_) => out,
    }
}

fn search_report(outcome: &SearchOutcome, stats: &SearchStats) -> (Value, i32) {
    let stats = json!({
        "fiber_vectors": stats.fiber_vectors,
        "euler_pruned": stats.euler_pruned,
        "nodes": stats.nodes,
        "leaves": stats.leaves,
        "undecided": stats.undecided,
    });
    match outcome {
        SearchOutcome::Found(cert) => {
            (json!({ "result": "found", "certificate": format::certificate_doc(cert), "stats": stats }), EXIT_OK)
        }
        SearchOutcome::Exhausted => (json!({ "result": "exhausted", "stats": stats }), EXIT_NEGATIVE),
        SearchOutcome::BudgetExceeded(reason) => {
            (json!({ "result": "budget_exceeded", "reason": reason, "stats": stats }), EXIT_BUDGET)
        }
    }
}

fn emu_cmd(cli: &Cli, c: &EmuCmd) -> Outcome {
    let morphism = |p: &Path| -> Result<_, Failure> { Ok(read::<MorphismDoc>(p)?.to_morphism()?) };
    let verdict = |v: regulus::emulation::Verdict, key: &str| match v {
        Ok(()) => Output::verdict(json!({ key: true }), true),
        Err(v) => Output::verdict(json!({ key: false, "violation": v.to_string() }), false),
    };
    Ok(match c {
        EmuCmd::Check { morphism: p } => {
            let doc = read::<MorphismDoc>(p)?;
            if undirected_doc(&doc) {
                verdict(check_undirected_emulator(&doc.to_undirected_morphism()?)?, "emulator")
            } else {
                verdict(check_directed_emulator(&doc.to_morphism()?)?, "emulator")
            }
        }
        EmuCmd::CheckCover { morphism: p } => {
            let doc = read::<MorphismDoc>(p)?;
            if undirected_doc(&doc) {
                verdict(check_undirected_cover(&doc.to_undirected_morphism()?)?, "cover")
            } else {
                verdict(check_directed_cover(&doc.to_morphism()?)?, "cover")
            }
        }
        EmuCmd::Extract { morphism: p } => {
            let m = extract_cover(&morphism(p)?)?;
            Output::ok(to_value(&format::morphism_doc(&m))).with_dot(format::dot_digraph(m.source()))
        }
        EmuCmd::Extend { morphism: p, graph } => {
            let m = extend_over_excision(&morphism(p)?, &read_graph(graph)?)?;
            Output::ok(to_value(&format::morphism_doc(&m))).with_dot(format::dot_digraph(m.source()))
        }
        EmuCmd::Lift { morphism: p, direction } => {
            let phi = read::<MorphismDoc>(p)?.to_undirected_morphism()?;
            let m = lift_direction(&phi, &read_graph(direction)?)?;
            Output::ok(to_value(&format::morphism_doc(&m))).with_dot(format::dot_digraph(m.source()))
        }
        EmuCmd::Search { graph, n, max_fiber, disconnected, time_limit } => {
            let mut spec = CoverSearchSpec::new(read_graph(graph)?, *max_fiber, *n);
            spec.connected_only = !disconnected;
            spec.time_budget = Duration::from_secs(*time_limit);
            spec.max_rotations = rotation_budget();
            let (outcome, stats) = with_jobs(cli, || search_covers(&spec))??;
            let (json, code) = search_report(&outcome, &stats);
            let out = Output { json, dot: None, code };
            match outcome {
                SearchOutcome::Found(cert) => out.with_dot(format::dot_digraph(&cert.total)),
                _ => out,
            }
        }
        EmuCmd::VerifyCert { certificate } => {
            let cert = read::<CertificateDoc>(certificate)?.to_certificate()?;
            match cert.verify() {
                Ok(()) => Output::verdict(json!({ "valid": true, "genus": cert.genus }), true),
                Err(e) => Output::verdict(json!({ "valid": false, "reason": e.to_string() }), false),
            }
        }
    })
}

fn undirected_doc(doc: &MorphismDoc) -> bool {
    doc.source.edges.iter().chain(&doc.target.edges).any(|e| e.ends.is_some())
}

fn with_jobs<T: Send>(cli: &Cli, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match cli.jobs {
        Some(n) if n > 0 => {
            let pool =
                rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| input_error(e.to_string()))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

fn genus_cmd(cli: &Cli, c: &GenusCmd) -> Outcome {
    Ok(match c {
        GenusCmd::Exact { graph, force, lower_bound_only } => {
            let u = read_undirected(graph)?;
            if *lower_bound_only {
                Output::ok(json!({ "lower_bound": girth_lower_bound(&u) }))
            } else {
                let r = genus_exact_with(&u, &budget(cli, *force))?;
                Output::ok(json!({ "genus": r.genus, "faces": r.faces, "rotation": r.witness.to_tokens(&u) }))
            }
        }
        GenusCmd::Planar { graph } => {
            let u = read_undirected(graph)?;
            let p = is_planar(&u);
            match (p.witness, p.obstruction) {
                (Some(w), _) => Output::verdict(json!({ "planar": true, "rotation": w.to_tokens(&u) }), true),
                (None, obstruction) => Output::verdict(json!({ "planar": false, "obstruction": obstruction }), false),
            }
        }
        GenusCmd::LowerBound { graph, girth } => {
            let u = read_undirected(graph)?;
            let bound = match girth {
                Some(g) => euler_lower_bound(&u, *g)?,
                None => girth_lower_bound(&u),
            };
            Output::ok(json!({ "lower_bound": bound }))
        }
        GenusCmd::Formula { m, faces } => {
            let mut counts = BTreeMap::new();
            for f in faces {
                let (i, k) = f
                    .split_once(':')
                    .and_then(|(i, k)| Some((i.trim().parse::<usize>().ok()?, k.trim().parse::<usize>().ok()?)))
                    .ok_or_else(|| input_error(format!("face entry `{f}` is not `length:count`")))?;
                *counts.entry(i).or_insert(0) += k;
            }
            let value = genus_formula(*m, &FaceVector { counts })?;
            Output::ok(json!({ "value": value.to_string(), "numer": value.numer(), "denom": value.denom() }))
        }
        GenusCmd::Invariance { graph, force } => {
            let r = genus_invariance_suite(&read_graph(graph)?, &budget(cli, *force))?;
            Output::verdict(
                json!({
                    "genus": r.genus,
                    "op": r.opposite,
                    "R": r.simplified,
                    "Exc": r.excised,
                    "U": r.forgotten,
                    "holds": r.holds(),
                    "counterexamples": r.counterexamples(),
                }),
                r.holds(),
            )
        }
        GenusCmd::Language { input, n, max_fiber, cert, time_limit } => {
            let a = read_automaton(input)?;
            let bounds = LanguageBounds {
                max_fiber: *max_fiber,
                time_budget: Duration::from_secs(*time_limit),
                max_rotations: rotation_budget(),
            };
            let answer = match cert {
                Some(path) => {
                    let cert = read::<CertificateDoc>(path)?.to_certificate()?;
                    language_genus_from_certificate(&a, &cert, *n, &bounds)?
                }
                None => with_jobs(cli, || language_genus_leq(&a, *n, &bounds))??,
            };
            match answer {
                LanguageGenus::Yes { witness, genus, .. } => {
                    let faces = trace_faces(
                        &forget(witness.graph()),
                        &genus_exact_with(&forget(witness.graph()), &budget(cli, false))?.witness,
                    )
                    .faces
                    .len();
                    Output::verdict(
                        json!({ "result": "yes", "genus": genus, "faces": faces, "witness": format::automaton_doc(&witness) }),
                        true,
                    )
                    .with_dot(format::dot_automaton(&witness))
                }
                LanguageGenus::NoWithinBounds(stats) => {
                    let (mut json, _) = search_report(&SearchOutcome::Exhausted, &stats);
                    json["result"] = json!("no_within_bounds");
                    Output::verdict(json, false)
                }
                LanguageGenus::BudgetExceeded(reason) => Output {
                    json: json!({ "result": "budget_exceeded", "reason": reason }),
                    dot: None,
                    code: EXIT_BUDGET,
                },
            }
        }
    })
}

fn corpus_cmd(c: &CorpusCmd) -> Outcome {
    Ok(match c {
        CorpusCmd::List => {
            let list: Vec<Value> = corpus::names()
                .into_iter()
                .map(|n| json!({ "name": n, "description": corpus::description(n).expect("listed") }))
                .collect();
            Output::ok(Value::Array(list))
        }
        CorpusCmd::Emit { name, dir } => {
            let (file, text) = corpus::emit(name)?;
            match dir {
                Some(d) => {
                    std::fs::create_dir_all(d).map_err(|e| input_error(e.to_string()))?;
                    let path = d.join(&file);
                    std::fs::write(&path, text).map_err(|e| input_error(e.to_string()))?;
                    Output::ok(json!({ "written": path.display().to_string() }))
                }
                None => Output::ok(serde_json::from_str(&text).expect("emitted JSON")),
            }
        }
    })
}
