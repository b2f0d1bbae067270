use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use mcb_core::constructions::{self, NegPavingParams, NobdParams};
use mcb_core::covers::{self, RecursionExponent};
use mcb_core::graphs::{self, Digraph, KCircuitReading};
use mcb_core::json::{FamilyDoc, GraphDoc, MatroidDoc};
use mcb_core::mcb::{self, SearchOptions, DEFAULT_BUDGET};
use mcb_core::polytope;
use mcb_core::{Error, Matroid, SetFamily, Subset};

const SCHEMA: &str = "mcb/1";

#[derive(Parser)]
#[command(name = "mcb", version, about = "Covering properties of finite matroids")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Decide MCB(a) for a matroid.
    Check(CheckArgs),
    /// Minimal covers of the ground set by flats, with their ranks.
    Profile(ProfileArgs),
    /// Build one of the paving families.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Minkowski decompositions, flacets, facets and normal fans.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Minimal cover counts.
    #[command(subcommand)]
    Covers(CoversCmd),
    /// Graphic matroids and implication digraphs.
    #[command(subcommand)]
    Graph(GraphCmd),
}

#[derive(Args)]
struct MatroidArg {
    /// Matroid JSON file.
    #[arg(long)]
    matroid: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: MatroidArg,
    #[arg(long)]
    degree: usize,
    /// Let the improper flat E take part (never changes the verdict).
    #[arg(long)]
    allow_improper: bool,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    input: MatroidArg,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    allow_improper: bool,
}

#[derive(Args)]
struct OutArg {
    /// Also write the matroid document here.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Blocks of size B plus all cross m-subsets, rank m + 1.
    Nobd {
        #[arg(long)]
        n: usize,
        #[arg(long = "B")]
        b: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Paving matroid with a distinguished hyperplane A that fails MCB.
    Negpaving {
        #[arg(long)]
        n: usize,
        /// Comma-separated labels of A.
        #[arg(long = "A", value_delimiter = ',')]
        a: Vec<usize>,
        #[arg(long)]
        m: usize,
        /// Blocks partitioning E \ A, separated by ';' (default: one block).
        #[arg(long)]
        type2: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Rank-3 block paving matroid with all cross pairs.
    Pavexmp {
        #[arg(long)]
        n: usize,
        #[arg(long = "B")]
        b: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Paving matroid induced on the complement of a hyperplane.
    Restrict {
        #[command(flatten)]
        input: MatroidArg,
        /// Comma-separated labels of the hyperplane A.
        #[arg(long = "A", value_delimiter = ',')]
        a: Vec<usize>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum PolytopeCmd {
    /// Signed Minkowski decomposition certified against the vertex set.
    Decompose(MatroidArg),
    /// Flats with connected restriction and contraction.
    Flacets(MatroidArg),
    /// Inequalities from the building closure of the positive support.
    Facets(MatroidArg),
    /// Compare normal fans of two matroid polytopes.
    FanEq {
        #[command(flatten)]
        input: MatroidArg,
        #[arg(long)]
        other: PathBuf,
    },
    /// MCB(a) against sMCB(a) over the building closure.
    Equivalence {
        #[command(flatten)]
        input: MatroidArg,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMode {
    Oracle,
    Recursion,
    Both,
}

#[derive(Subcommand)]
enum CoversCmd {
    Count {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, value_enum, default_value_t = CountMode::Both)]
        mode: CountMode,
        /// Evaluate the recursion with 2^(n-r) for this ambient n.
        #[arg(long)]
        ambient: Option<usize>,
    },
    /// Ordered partitions of [a] into r blocks.
    Disjoint {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Args)]
struct GraphOrMatroid {
    /// Graph JSON file.
    #[arg(long, conflicts_with = "matroid", required_unless_present = "matroid")]
    graph: Option<PathBuf>,
    /// Matroid JSON file.
    #[arg(long)]
    matroid: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReadingArg {
    Strict,
    Relaxed,
    Both,
}

impl ReadingArg {
    fn readings(self) -> Vec<KCircuitReading> {
        match self {
            ReadingArg::Strict => vec![KCircuitReading::Strict],
            ReadingArg::Relaxed => vec![KCircuitReading::Relaxed],
            ReadingArg::Both => vec![KCircuitReading::Strict, KCircuitReading::Relaxed],
        }
    }
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Subsets S with |S| = k r(S) + 1 under both readings.
    Kcircuits {
        #[command(flatten)]
        input: GraphOrMatroid,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ReadingArg::Both)]
        reading: ReadingArg,
    },
    /// Whether the k-circuits are pairwise disjoint.
    Sumgraphic {
        #[command(flatten)]
        input: GraphOrMatroid,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ReadingArg::Both)]
        reading: ReadingArg,
    },
    /// Every chosen edge has its endpoints joined by the other chosen edges.
    Twoconn {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated edge labels (default: all edges).
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<usize>>,
    },
    /// MCB(r) of a graphic matroid against 2-connectivity over r copies.
    DirgraphCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Implication digraph of a set family and its maximal-path covers.
    Digraph {
        /// Family JSON file `{"n", "members"}`.
        #[arg(long)]
        family: PathBuf,
        /// Also list covers by at most this many maximal paths.
        #[arg(long)]
        paths: Option<usize>,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_scope() {
            Failure {
                code: 3,
                kind: "scope",
                message: e.to_string(),
            }
        } else {
            Failure {
                code: 2,
                kind: "input",
                message: e.to_string(),
            }
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: "input",
        message: message.into(),
    }
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

/// Collects input digests while a command runs.
#[derive(Default)]
struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = fs::read(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
        self.0.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| input_error(format!("{} is not UTF-8", path.display())))
    }

    fn matroid(&mut self, path: &Path) -> Result<Matroid, Failure> {
        let text = self.read(path)?;
        Ok(MatroidDoc::parse(&text)?.build()?)
    }

    fn graph(&mut self, path: &Path) -> Result<graphs::Graph, Failure> {
        let text = self.read(path)?;
        Ok(GraphDoc::parse(&text)?.build()?)
    }

    fn graph_or_matroid(&mut self, g: &GraphOrMatroid) -> Result<Matroid, Failure> {
        match (&g.graph, &g.matroid) {
            (Some(p), _) => Ok(graphs::cycle_matroid(&self.graph(p)?)?),
            (None, Some(p)) => self.matroid(p),
            (None, None) => Err(input_error("one of --graph or --matroid is required")),
        }
    }
}

fn budget() -> Result<u64, Failure> {
    match std::env::var("MCB_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| input_error(format!("MCB_BUDGET must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn write_doc(out: &OutArg, doc: &MatroidDoc) -> Result<(), Failure> {
    if let Some(path) = &out.out {
        fs::write(path, doc.to_json()).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn labels_to_subset(n: usize, labels: &[usize]) -> Result<Subset, Failure> {
    Ok(Subset::from_labels(n, labels)?)
}

fn parse_blocks(n: usize, text: &str) -> Result<Vec<Subset>, Failure> {
    text.split(';')
        .map(|block| {
            let labels = block
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| input_error(format!("bad label {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            labels_to_subset(n, &labels)
        })
        .collect()
}

fn run(cmd: &Command, inputs: &mut Inputs) -> Result<(&'static str, Value, Value), Failure> {
    match cmd {
        Command::Check(args) => {
            let m = inputs.matroid(&args.input.matroid)?;
            let opts = SearchOptions {
                proper_only: !args.allow_improper,
                budget: budget()?,
            };
            let verdict = mcb::check_mcb_with(&m, args.degree, opts)?;
            let mut result = to_value(&verdict);
            if !m.is_simple_rank1() {
                result["warnings"] = json!(["some rank-1 flat has more than one element"]);
            }
            Ok((
                "check",
                json!({"degree": args.degree, "allow_improper": args.allow_improper}),
                result,
            ))
        }
        Command::Profile(args) => {
            let m = inputs.matroid(&args.input.matroid)?;
            let profiles = mcb::cover_profiles(&m, args.k, !args.allow_improper)?;
            let min = profiles.iter().map(|p| p.total_rank).min();
            Ok((
                "profile",
                json!({"k": args.k, "allow_improper": args.allow_improper}),
                json!({"profiles": profiles, "min_total_rank": min, "no_cover": min.is_none()}),
            ))
        }
        Command::Construct(c) => construct(c, inputs),
        Command::Polytope(c) => polytope_cmd(c, inputs),
        Command::Covers(c) => covers_cmd(c),
        Command::Graph(c) => graph_cmd(c, inputs),
    }
}

fn construct(c: &ConstructCmd, inputs: &mut Inputs) -> Result<(&'static str, Value, Value), Failure> {
    match c {
        ConstructCmd::Nobd { n, b, m, out } => {
            let p = NobdParams::new(*n, *b, *m)?;
            let matroid = constructions::nobd_paving(&p)?;
            let a_max = p.a_max();
            let params = json!({"n": n, "B": b, "m": m});
            let mut doc = MatroidDoc::paving_from_matroid(&matroid)?;
            doc.provenance = Some(json!({
                "construction": "nobd",
                "params": params,
                "a_max": {"numerator": a_max.numer(), "denominator": a_max.denom()},
                "claims": [
                    format!("paving of rank {}", m + 1),
                    format!("MCB(a) holds for every a <= {}", p.a_max_floor()),
                    format!("covers by at most {} proper flats use hyperplanes only", p.a_max_floor()),
                ],
            }));
            write_doc(out, &doc)?;
            Ok((
                "construct nobd",
                params,
                json!({
                    "rank": matroid.rank(),
                    "hyperplanes": matroid.hyperplanes().len(),
                    "blocks": p.block_count(),
                    "matroid": doc,
                }),
            ))
        }
        ConstructCmd::Pavexmp { n, b, out } => {
            let matroid = constructions::pavexmp_paving(*n, *b)?;
            let params = json!({"n": n, "B": b});
            let mut doc = MatroidDoc::paving_from_matroid(&matroid)?;
            doc.provenance = Some(json!({
                "construction": "pavexmp",
                "params": params,
                "claims": [
                    "paving of rank 3",
                    format!("{} cross pairs", constructions::cross_pair_count(*n, *b)),
                ],
            }));
            write_doc(out, &doc)?;
            Ok((
                "construct pavexmp",
                params,
                json!({
                    "rank": matroid.rank(),
                    "cross_pairs": constructions::cross_pair_count(*n, *b),
                    "hyperplanes": matroid.hyperplanes().len(),
                    "matroid": doc,
                }),
            ))
        }
        ConstructCmd::Negpaving { n, a, m, type2, out } => {
            let a_set = labels_to_subset(*n, a)?;
            let type2 = type2.as_deref().map(|t| parse_blocks(*n, t)).transpose()?;
            let np = constructions::neg_paving(&NegPavingParams {
                n: *n,
                a: a_set,
                m: *m,
                type2,
            })?;
            let params = json!({"n": n, "A": a_set, "m": m, "type2": np.type2});
            let mut doc = MatroidDoc::paving_from_matroid(&np.matroid)?;
            doc.provenance = Some(json!({
                "construction": "negpaving",
                "params": params,
                "claims": [
                    format!("A is a hyperplane of a paving matroid of rank {}", m + 1),
                    format!("A together with C covers E minus one point ({} sets)", np.witness_size),
                    format!("MCB(a) fails for every a >= {}", np.witness_size),
                ],
            }));
            write_doc(out, &doc)?;
            Ok((
                "construct negpaving",
                params,
                json!({
                    "rank": np.matroid.rank(),
                    "witness_size": np.witness_size,
                    "witness": np.witness,
                    "type3_hyperplanes": np.type3_count,
                    "matroid": doc,
                }),
            ))
        }
        ConstructCmd::Restrict { input, a, out } => {
            let matroid = inputs.matroid(&input.matroid)?;
            let a_set = labels_to_subset(matroid.n(), a)?;
            let r = constructions::restrict_complement(&matroid, a_set)?;
            let mut doc = MatroidDoc::paving_from_matroid(&r.matroid)?;
            doc.provenance = Some(json!({
                "construction": "restrict_complement",
                "A": a_set,
                "labels": r.labels,
                "padded_blocks": r.padded.len(),
            }));
            write_doc(out, &doc)?;
            Ok((
                "construct restrict",
                json!({"A": a_set}),
                json!({
                    "labels": r.labels,
                    "traces": r.traces,
                    "padded": r.padded,
                    "matroid": doc,
                }),
            ))
        }
    }
}

fn polytope_cmd(c: &PolytopeCmd, inputs: &mut Inputs) -> Result<(&'static str, Value, Value), Failure> {
    match c {
        PolytopeCmd::Decompose(arg) => {
            let m = inputs.matroid(&arg.matroid)?;
            let d = polytope::decompose(&m)?;
            Ok((
                "polytope decompose",
                json!({}),
                json!({"decomposition": d, "generic": d.is_generic(), "vertices": polytope::polytope_vertices(&m).len()}),
            ))
        }
        PolytopeCmd::Flacets(arg) => {
            let m = inputs.matroid(&arg.matroid)?;
            let f = polytope::flacets(&m)?;
            Ok(("polytope flacets", json!({}), json!({"flacets": f.members()})))
        }
        PolytopeCmd::Facets(arg) => {
            let m = inputs.matroid(&arg.matroid)?;
            let d = polytope::decompose(&m)?;
            let ineqs = polytope::facet_inequalities(&d)?;
            Ok(("polytope facets", json!({}), json!({"inequalities": ineqs})))
        }
        PolytopeCmd::FanEq { input, other } => {
            let m = inputs.matroid(&input.matroid)?;
            let n = inputs.matroid(other)?;
            let eq = polytope::normal_fan_equivalent(&m, &n)?;
            Ok(("polytope fan-eq", json!({}), json!({"equivalent": eq})))
        }
        PolytopeCmd::Equivalence { input, degree } => {
            let m = inputs.matroid(&input.matroid)?;
            let r = polytope::mcb_flacet_equivalence(&m, *degree)?;
            Ok(("polytope equivalence", json!({"degree": degree}), to_value(&r)))
        }
    }
}

fn covers_cmd(c: &CoversCmd) -> Result<(&'static str, Value, Value), Failure> {
    match c {
        CoversCmd::Count { a, b, mode, ambient } => {
            let exponent = ambient.map_or(RecursionExponent::SetSize, RecursionExponent::Ambient);
            let rec = match mode {
                CountMode::Oracle => None,
                _ => Some(covers::count_covers_recursion(*a, *b, exponent)?),
            };
            let oracle = match mode {
                CountMode::Recursion => None,
                _ => Some(covers::count_minimal_covers_oracle(*a, *b)?),
            };
            let agree = match (&rec, &oracle) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            };
            let count = covers::CoverCount {
                a: *a,
                b: *b,
                value_recursion: rec,
                value_oracle: oracle,
                agree,
            };
            Ok((
                "covers count",
                json!({"a": a, "b": b, "exponent": exponent}),
                to_value(&count),
            ))
        }
        CoversCmd::Disjoint { a, r } => {
            let count = covers::count_disjoint_covers(*a, *r);
            let stirling = covers::stirling2(*a, *r) * covers::factorial(*r);
            Ok((
                "covers disjoint",
                json!({"a": a, "r": r}),
                json!({"count": count.to_string(), "matches_stirling": count == stirling}),
            ))
        }
    }
}

fn graph_cmd(c: &GraphCmd, inputs: &mut Inputs) -> Result<(&'static str, Value, Value), Failure> {
    match c {
        GraphCmd::Kcircuits { input, k, reading } => {
            let m = inputs.graph_or_matroid(input)?;
            let mut out = serde_json::Map::new();
            for r in reading.readings() {
                let fam = graphs::k_circuits(&m, *k, r)?;
                out.insert(
                    to_value(&r).as_str().unwrap_or_default().to_string(),
                    to_value(&fam.members()),
                );
            }
            Ok(("graph kcircuits", json!({"k": k}), Value::Object(out)))
        }
        GraphCmd::Sumgraphic { input, k, reading } => {
            let m = inputs.graph_or_matroid(input)?;
            let verdicts = reading
                .readings()
                .into_iter()
                .map(|r| graphs::direct_sum_graphic(&m, *k, r))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(("graph sumgraphic", json!({"k": k}), json!({"verdicts": verdicts})))
        }
        GraphCmd::Twoconn { graph, edges } => {
            let g = inputs.graph(graph)?;
            let a = match edges {
                Some(l) => labels_to_subset(g.edge_count(), l)?,
                None => g.all_edges(),
            };
            Ok((
                "graph twoconn",
                json!({"edges": a}),
                json!({"two_connected": graphs::induced_two_connected(&g, a)}),
            ))
        }
        GraphCmd::DirgraphCheck { graph, r } => {
            let g = inputs.graph(graph)?;
            let report = graphs::check_dirgraph_equivalence(&g, *r)?;
            Ok(("graph dirgraph-check", json!({"r": r}), to_value(&report)))
        }
        GraphCmd::Digraph { family, paths } => {
            let text = inputs.read(family)?;
            let fam: SetFamily = FamilyDoc::parse(&text)?.build()?;
            let n = fam.ground_size();
            let d: Digraph = graphs::mcb_digraph(n, &fam)?;
            let edges: Vec<[usize; 2]> = d.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect();
            let mut result = json!({
                "n": n,
                "edges": edges,
                "every_vertex_entered": d.every_vertex_entered(),
            });
            if let Some(r) = paths {
                let covers = graphs::maximal_path_covers(&d, *r)?;
                let labeled: Vec<Vec<Vec<usize>>> = covers
                    .iter()
                    .map(|c| c.iter().map(|p| p.iter().map(|v| v + 1).collect()).collect())
                    .collect();
                result["path_covers"] = json!(labeled);
            }
            Ok(("graph digraph", json!({"paths": paths}), result))
        }
    }
}

/// `key: value` lines for the top-level fields of the result.
fn render_table(report: &Value) -> String {
    let mut out = String::new();
    if let Some(obj) = report.as_object() {
        for (k, v) in obj {
            if k == "result" {
                continue;
            }
            out.push_str(&format!("{k:<12} {}\n", compact(v)));
        }
    }
    if let Some(obj) = report.get("result").and_then(Value::as_object) {
        for (k, v) in obj {
            out.push_str(&format!("{k:<12} {}\n", compact(v)));
        }
    }
    out
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("mcb: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = run(&cli.command, &mut inputs);
    let mut report = match &outcome {
        Ok((command, params, result)) => json!({
            "schema": SCHEMA,
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "inputs": inputs.0,
            "params": params,
            "result": result,
        }),
        Err(f) => json!({
            "schema": SCHEMA,
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": inputs.0,
            "error": {"kind": f.kind, "message": f.message},
        }),
    };
    if cli.timing {
        report["wall_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Table => render_table(&report),
    };
    // a closed pipe downstream is not our failure
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    match outcome {
        Ok(_) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mcb: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
