use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sqfactor::corpus;
use sqfactor::factor::{build_factor, lemma_factor, CertificateJson, FactorCertificate, TaggedEdgeJson};
use sqfactor::ham::{constrained_hamiltonian_cycle, ConstrainedCycleProblem, SearchBudget};
use sqfactor::structure::{classify, decompose, order_blocks, ClassificationReport};
use sqfactor::verify::{
    counting_certificate, degree4_variant_check, exists_factor, gen_counterexample,
    verify_certificate, verify_factor, Attachment, OracleBudget, OracleOutcome, MAX_ORACLE_EDGES,
    MAX_ORACLE_VERTICES,
};
use sqfactor::{parse_edge_list, Edge, Error, Graph, Origin, Violation};

/// Even factors in squares of graphs: construction, verification and search.
#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input file, `-` for standard input.
    #[arg(short, long, global = true, default_value = "-")]
    input: String,

    /// Output format; each command has its own default.
    #[arg(short, long, global = true, value_enum)]
    format: Option<Format>,

    /// Half the maximum factor degree.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    s: u64,

    /// Generate the input graph from this seed instead of reading it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Node budget for exhaustive searches.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,

    /// Output file instead of standard output.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the square of the graph.
    Square,
    /// Leaves, cut vertices, bridges and block order as JSON.
    Classify,
    /// Build a [2,4]-factor of the square, or report why the graph is out of scope.
    Build,
    /// Build a factor with designated edges at cut vertices.
    Lemma {
        /// Vertex (label) whose two factor edges are designated.
        #[arg(long)]
        u: Option<u64>,
    },
    /// Check a certificate (JSON) or a factor edge list against a graph.
    Verify {
        /// Host graph; required when the input is a plain edge list.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Decide by exhaustive search whether the square has a [2,2s]-factor.
    Oracle {
        /// Ask for a [2,4]-factor with a vertex of degree 4 instead.
        #[arg(long)]
        degree_four: bool,
        /// Search beyond the default instance size limits.
        #[arg(long)]
        force: bool,
    },
    /// Emit a graph whose square has no [2,2s]-factor.
    GenCx {
        /// First attachment graph (default a triangle); its first vertex is the hub.
        #[arg(long)]
        g1: Option<PathBuf>,
        /// Second attachment graph (default a triangle).
        #[arg(long)]
        g2: Option<PathBuf>,
    },
    /// Hamiltonian cycle of a 2-connected graph's square with prescribed edges.
    Ham {
        /// Vertex (label) the cycle starts at; defaults to the first vertex.
        #[arg(long)]
        v1: Option<u64>,
        /// Optional second vertex (label); the cycle uses original edges at
        /// both.
        #[arg(long)]
        v2: Option<u64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Edgelist,
    Dot,
    Json,
}

/// Why the process stops, mapped onto exit codes.
enum Failure {
    /// Verification failed or the answer is "no"; the output was written.
    No,
    /// A search stopped before reaching an answer.
    Budget(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Output::new(cli.out.clone());
    let result = run(&cli, &mut out);
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::No) => ExitCode::from(1),
        Err(Failure::Budget(why)) => {
            eprintln!("error: {why}");
            ExitCode::from(4)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Precondition { .. } => 2,
                Error::Format { .. } | Error::Argument(_) | Error::Json(_) | Error::Io(_) => 3,
                Error::Budget { .. } => 4,
                Error::Internal { .. } => 5,
            })
        }
    }
}

/// Collects output and writes it once, so a failing command leaves no
/// partial file behind.
struct Output {
    path: Option<PathBuf>,
    text: String,
}

impl Output {
    fn new(path: Option<PathBuf>) -> Self {
        Output { path, text: String::new() }
    }

    fn push(&mut self, s: &str) {
        self.text.push_str(s);
        if !s.ends_with('\n') {
            self.text.push('\n');
        }
    }

    fn json(&mut self, value: &impl serde::Serialize) -> Outcome {
        let text = serde_json::to_string(value).map_err(Error::Json)?;
        self.push(&text);
        Ok(())
    }

    fn flush(&self) -> io::Result<()> {
        match &self.path {
            Some(p) => fs::write(p, &self.text),
            None => io::stdout().write_all(self.text.as_bytes()),
        }
    }
}

fn read_text(path: &str) -> io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn run(cli: &Cli, out: &mut Output) -> Outcome {
    let s = cli.s as usize;
    match &cli.command {
        Command::Square => {
            let g = input_graph(cli, corpus_graph)?;
            write_graph(out, &g.square(), cli.format.unwrap_or(Format::Edgelist))
        }
        Command::Classify => {
            let g = connected_input(cli, corpus_graph)?;
            let bct = decompose(&g)?;
            let cls = classify(&g, &bct);
            let ordering = order_blocks(&g, &bct, None).ok();
            out.json(&ClassificationReport::new(&g, &bct, &cls, ordering.as_ref()))
        }
        Command::Build => {
            let g = connected_input(cli, |seed| {
                corpus::theorem_graph(&mut corpus::rng(seed), 24, 8)
            })?;
            certificate_output(out, &g, build_factor(&g), cli.format)
        }
        Command::Lemma { u } => {
            let g = connected_input(cli, |seed| corpus::lemma_graph(&mut corpus::rng(seed), 24, 8))?;
            let u = u.map(|l| vertex(&g, l)).transpose()?;
            certificate_output(out, &g, lemma_factor(&g, u), cli.format)
        }
        Command::Verify { graph } => verify(cli, graph.as_ref(), s, out),
        Command::Oracle { degree_four, force } => {
            let g = connected_input(cli, corpus_graph)?;
            let budget = OracleBudget { max_nodes: cli.budget_nodes, force: *force };
            let outcome = if *degree_four {
                degree4_variant_check(&g, budget)?
            } else {
                exists_factor(&g, s, budget)?
            };
            oracle_output(out, &g, &outcome, cli.format.unwrap_or(Format::Edgelist))
        }
        Command::GenCx { g1, g2 } => gen_cx(cli, g1.as_ref(), g2.as_ref(), s, out),
        Command::Ham { v1, v2 } => {
            let g = connected_input(cli, |seed| {
                let mut rng = corpus::rng(seed);
                corpus::random_two_connected(&mut rng, 12, 6)
            })?;
            let v1 = match v1 {
                Some(l) => vertex(&g, *l)?,
                None => 0,
            };
            let v2 = v2.map(|l| vertex(&g, l)).transpose()?;
            let p = ConstrainedCycleProblem { block: &g, v1, v2 };
            let budget = SearchBudget { max_nodes: cli.budget_nodes };
            let w = constrained_hamiltonian_cycle(&p, budget).map_err(|e| labelled(&g, e))?;
            let cycle: Vec<u64> = w.cycle.iter().map(|&v| g.label(v)).collect();
            match cli.format.unwrap_or(Format::Edgelist) {
                Format::Json => out.json(&json!({
                    "cycle": cycle,
                    "edges": tagged_json(&g, &w.edges),
                })),
                Format::Dot => {
                    out.push(&g.dot_with(&dashed(&w.edges)));
                    Ok(())
                }
                Format::Edgelist => {
                    let line: Vec<String> = cycle.iter().map(u64::to_string).collect();
                    out.push(&line.join(" "));
                    Ok(())
                }
            }
        }
    }
}

fn corpus_graph(seed: u64) -> Graph {
    corpus::random_two_edge_connected(&mut corpus::rng(seed), 16, 8)
}

/// The input graph, read from `--input` or generated from `--seed`.
fn input_graph(cli: &Cli, generate: impl Fn(u64) -> Graph) -> Result<Graph, Failure> {
    match cli.seed {
        Some(seed) => Ok(generate(seed)),
        None => Ok(parse_edge_list(&read_text(&cli.input)?)?),
    }
}

fn connected_input(cli: &Cli, generate: impl Fn(u64) -> Graph) -> Result<Graph, Failure> {
    let g = input_graph(cli, generate)?;
    if g.n() > 0 && !g.is_connected() {
        return Err(Error::Precondition {
            context: "input graph",
            violations: vec![Violation::Disconnected],
        }
        .into());
    }
    Ok(g)
}

fn vertex(g: &Graph, label: u64) -> Result<usize, Error> {
    g.vertex_with_label(label)
        .ok_or_else(|| Error::Argument(format!("no vertex labelled {label}")))
}

fn write_graph(out: &mut Output, g: &Graph, format: Format) -> Outcome {
    match format {
        Format::Edgelist => out.push(&g.to_edge_list()),
        Format::Dot => out.push(&g.to_dot()),
        Format::Json => return out.json(&g.to_json()),
    }
    Ok(())
}

fn tagged_json(g: &Graph, edges: &[(Edge, Origin)]) -> Vec<TaggedEdgeJson> {
    edges
        .iter()
        .map(|&(e, origin)| TaggedEdgeJson { ends: [g.label(e.lo()), g.label(e.hi())], origin })
        .collect()
}

fn dashed(edges: &[(Edge, Origin)]) -> Vec<(Edge, bool)> {
    edges.iter().map(|&(e, o)| (e, o == Origin::Square)).collect()
}

/// Rewrites vertex ids in precondition violations as labels.
fn labelled(g: &Graph, e: Error) -> Error {
    let Error::Precondition { context, violations } = e else { return e };
    let l = |v: usize| g.label(v) as usize;
    let violations = violations
        .into_iter()
        .map(|v| match v {
            Violation::NonTrivialBridge { edge } => Violation::NonTrivialBridge {
                edge: Edge::new(l(edge.lo()), l(edge.hi())),
            },
            Violation::BadLeaf { vertex } => Violation::BadLeaf { vertex: l(vertex) },
            Violation::BadLeavesAtDistanceFour { first, second } => {
                Violation::BadLeavesAtDistanceFour { first: l(first), second: l(second) }
            }
            Violation::InvalidAnchor { vertex } => Violation::InvalidAnchor { vertex: l(vertex) },
            other => other,
        })
        .collect();
    Error::Precondition { context, violations }
}

fn certificate_output(
    out: &mut Output,
    g: &Graph,
    built: Result<FactorCertificate, Error>,
    format: Option<Format>,
) -> Outcome {
    match built.map_err(|e| labelled(g, e)) {
        Ok(cert) => match format.unwrap_or(Format::Json) {
            Format::Dot => {
                out.push(&cert.to_dot());
                Ok(())
            }
            Format::Edgelist => {
                for t in &cert.to_json().edges {
                    out.push(&format!("{} {}", t.ends[0], t.ends[1]));
                }
                Ok(())
            }
            Format::Json => out.json(&cert.to_json()),
        },
        Err(e @ Error::Precondition { .. }) => {
            let Error::Precondition { context, violations } = &e else { unreachable!() };
            // Bad leaves are listed even when they are not violations
            // themselves, since they decide which construction applies.
            let bad_leaves: Vec<u64> = match decompose(g) {
                Ok(bct) => classify(g, &bct).bad_leaves.iter().map(|&v| g.label(v)).collect(),
                Err(_) => Vec::new(),
            };
            out.json(&json!({
                "status": "precondition",
                "context": context,
                "violations": violations,
                "badLeaves": bad_leaves,
            }))?;
            Err(e.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn verify(cli: &Cli, graph: Option<&PathBuf>, s: usize, out: &mut Output) -> Outcome {
    let text = read_text(&cli.input)?;
    let host = graph
        .map(|p| -> Result<Graph, Failure> { Ok(parse_edge_list(&fs::read_to_string(p)?)?) })
        .transpose()?;
    let report = if text.trim_start().starts_with('{') {
        let cert: CertificateJson = serde_json::from_str(&text).map_err(Error::Json)?;
        let cert = cert.to_certificate()?;
        let g = host.unwrap_or_else(|| cert.host.clone());
        verify_certificate(&g, &cert)
    } else {
        let g = host.ok_or_else(|| {
            Error::Argument("a plain factor edge list needs --graph".into())
        })?;
        let factor = parse_edge_list(&text)?;
        let mut edges = Vec::new();
        for [a, b] in factor.labelled_edges() {
            let e = Edge::new(vertex(&g, a)?, vertex(&g, b)?);
            edges.push((e, g.origin_of(e)));
        }
        verify_factor(&g, &edges, s)
    };
    out.json(&report)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::No)
    }
}

fn oracle_output(out: &mut Output, g: &Graph, outcome: &OracleOutcome, format: Format) -> Outcome {
    let answer = match outcome {
        OracleOutcome::Yes { .. } => "yes",
        OracleOutcome::No { .. } => "no",
        OracleOutcome::OutOfBudget { .. } => "unknown",
    };
    match (format, outcome) {
        (Format::Json, OracleOutcome::Yes { witness }) => out.json(&json!({
            "answer": answer,
            "witness": tagged_json(g, witness),
        }))?,
        (Format::Json, OracleOutcome::No { explored } | OracleOutcome::OutOfBudget { explored }) => {
            out.json(&json!({ "answer": answer, "explored": explored }))?
        }
        (Format::Dot, OracleOutcome::Yes { witness }) => out.push(&g.dot_with(&dashed(witness))),
        _ => out.push(answer),
    }
    match outcome {
        OracleOutcome::Yes { .. } => Ok(()),
        OracleOutcome::No { .. } => Err(Failure::No),
        OracleOutcome::OutOfBudget { explored: 0 } => Err(Failure::Budget(format!(
            "instance exceeds {MAX_ORACLE_VERTICES} vertices or {MAX_ORACLE_EDGES} square edges; pass --force"
        ))),
        OracleOutcome::OutOfBudget { explored } => Err(Failure::Budget(format!(
            "node budget exhausted after {explored} nodes"
        ))),
    }
}

fn gen_cx(cli: &Cli, g1: Option<&PathBuf>, g2: Option<&PathBuf>, s: usize, out: &mut Output) -> Outcome {
    let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])?;
    let load = |p: Option<&PathBuf>| -> Result<Graph, Failure> {
        match p {
            Some(p) => Ok(parse_edge_list(&fs::read_to_string(p)?)?),
            None => Ok(triangle.clone()),
        }
    };
    let (a, b) = (load(g1)?, load(g2)?);
    let att = |g| Attachment { graph: g, hub: 0, arc_end: None };
    let (g, descriptor) = gen_counterexample(s, att(&a), att(&b))?;
    let proof = counting_certificate(&g, &descriptor);
    match cli.format.unwrap_or(Format::Edgelist) {
        Format::Json => out.json(&json!({
            "graph": g.to_json(),
            "descriptor": descriptor,
            "counting": proof,
        })),
        Format::Dot => {
            out.push(&g.to_dot());
            Ok(())
        }
        Format::Edgelist => {
            let descriptor = serde_json::to_string(&descriptor).map_err(Error::Json)?;
            let proof = serde_json::to_string(&proof).map_err(Error::Json)?;
            out.push(&format!("# descriptor {descriptor}"));
            out.push(&format!("# counting {proof}"));
            out.push(&g.to_edge_list());
            Ok(())
        }
    }
}
