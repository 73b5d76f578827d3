use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use wgg_core::construct::{bench_constructions, Algorithm, BenchError};
use wgg_core::drawings::{
    concentric_instance, draw_complete_bipartite, draw_tree, eliminate_all_witnesses_rotated,
    hexagonal_instance, DrawError, Drawing,
};
use wgg_core::gabriel::{construct_k_gabriel, oracle_construct, EdgeSet, Instance, KOrder};
use wgg_core::geom::{DiametralDisk, Point, Tolerance};
use wgg_core::sample::random_points;
use wgg_core::verify::{
    quick_reject, reduce_edge_count, verify_drawing, EmbeddedGraph, Verdict, VerifyError,
};

use crate::formats::{format_graph, format_instance, parse_graph, parse_instance, parse_tree};
use crate::render::render;
use crate::{CliError, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "wgg",
    version,
    about = "Witness Gabriel graphs: construct, verify, draw, bench"
)]
pub struct Cli {
    /// Relative tolerance for geometric predicates.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_TAU)]
    pub tol: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write an SVG picture to this path.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Draw diametral disks in the SVG.
    #[arg(long, global = true)]
    pub disks: bool,
    /// Cross-check results against the brute-force oracle.
    #[arg(long, global = true)]
    pub check: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the witness Gabriel graph of an instance.
    Construct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "brute")]
        algorithm: Algorithm,
        /// Keep an edge while fewer than k witnesses block it.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Graph file to write; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a straight-line drawing is a witness Gabriel drawing.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Instance file whose vertices embed the graph.
        #[arg(long)]
        vertices: PathBuf,
        /// Witness instance or rejection report; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an instance realizing a known graph.
    Draw {
        #[command(subcommand)]
        kind: DrawKind,
    },
    /// Time the three construction routes on random instances; CSV on standard output.
    Bench { config: PathBuf },
}

#[derive(Debug, Args)]
pub struct DrawOutput {
    /// Instance file to write; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Graph file for the realized graph.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DrawKind {
    /// A tree given as a parent list.
    Tree {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: DrawOutput,
    },
    /// The complete bipartite graph K_{m,n}.
    Bipartite {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: DrawOutput,
    },
    /// A honeycomb patch with every edge eliminated.
    Hexagonal {
        #[arg(long, default_value_t = 2)]
        rings: usize,
        #[command(flatten)]
        output: DrawOutput,
    },
    /// Concentric 16-gons with alternating chords.
    Concentric {
        #[arg(long, default_value_t = 2)]
        circles: usize,
        #[arg(long, default_value_t = 1.85)]
        ratio: f64,
        #[command(flatten)]
        output: DrawOutput,
    },
    /// Random points with witnesses removing all but `target` edges.
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: usize,
        #[command(flatten)]
        output: DrawOutput,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchConfig {
    sizes: Vec<(usize, usize)>,
    trials: usize,
    seed: Option<u64>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, contents)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write standard output: {e}"))),
    }
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn edge_disks(vertices: &[Point], edges: &EdgeSet) -> Vec<DiametralDisk> {
    edges
        .iter()
        .filter_map(|(i, j)| DiametralDisk::new(vertices[i], vertices[j]).ok())
        .collect()
}

fn preview(diff: impl Iterator<Item = (usize, usize)>) -> String {
    let pairs: Vec<String> = diff.take(5).map(|(i, j)| format!("({i}, {j})")).collect();
    pairs.join(" ")
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Construct {
            input,
            algorithm,
            k,
            out,
        } => construct(cli, input, *algorithm, *k, out.as_deref()),
        Command::Verify {
            graph,
            vertices,
            out,
        } => verify(cli, graph, vertices, out.as_deref()),
        Command::Draw { kind } => draw(cli, kind),
        Command::Bench { config } => bench(cli, config),
    }
}

impl Cli {
    fn tolerance<'a>(
        &self,
        points: impl IntoIterator<Item = &'a Point>,
    ) -> Result<Tolerance, CliError> {
        Tolerance::for_points(points)
            .with_tau(self.tol)
            .map_err(|e| CliError::Input(e.to_string()))
    }

    fn picture(
        &self,
        inst: &Instance,
        edges: &EdgeSet,
        extra: &[DiametralDisk],
    ) -> Result<(), CliError> {
        let Some(path) = &self.svg else { return Ok(()) };
        let mut disks = Vec::new();
        if self.disks {
            disks = edge_disks(&inst.vertices, edges);
            disks.extend_from_slice(extra);
        }
        write(Some(path), &render(inst, edges, &disks))
    }
}

fn construct(
    cli: &Cli,
    input: &Path,
    algorithm: Algorithm,
    k: usize,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let inst = load_instance(input)?;
    let tol = cli.tolerance(inst.vertices.iter().chain(&inst.witnesses))?;
    let order = KOrder::new(k).map_err(|e| CliError::Input(e.to_string()))?;
    let g = if k == 1 {
        algorithm.run(&inst, &tol)
    } else {
        log::info!("k = {k}: using the counting construction, --algorithm ignored");
        construct_k_gabriel(&inst, order, &tol)
    };
    if cli.check {
        let oracle = oracle_construct(&inst, &tol).edges;
        if k == 1 && g.edges != oracle {
            return Err(CliError::Consistency(format!(
                "{algorithm} disagrees with the oracle on {}",
                preview(g.edges.symmetric_difference(&oracle))
            )));
        }
        if k > 1 && !oracle.is_subset(&g.edges) {
            return Err(CliError::Consistency(format!(
                "the {k}-Gabriel graph misses oracle edges {}",
                preview(oracle.iter().filter(|&(i, j)| !g.edges.contains(i, j)))
            )));
        }
    }
    write(out, &format_graph(&g.edges))?;
    cli.picture(&inst, &g.edges, &[])?;
    Ok(Outcome::Success)
}

fn verify(
    cli: &Cli,
    graph: &Path,
    vertices: &Path,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let edges = parse_graph(&read(graph)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", graph.display())))?;
    let inst = load_instance(vertices)?;
    if !inst.witnesses.is_empty() {
        log::warn!(
            "ignoring {} witnesses in {}",
            inst.witnesses.len(),
            vertices.display()
        );
    }
    if edges.vertex_count() != inst.vertices.len() {
        return Err(CliError::Input(format!(
            "graph has {} vertices but {} lists {}",
            edges.vertex_count(),
            vertices.display(),
            inst.vertices.len()
        )));
    }
    let tol = cli.tolerance(inst.vertices.iter())?;
    let g = EmbeddedGraph::new(inst.vertices.clone(), edges)
        .map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(v) = quick_reject(&g) {
        log::info!(
            "wedge at {} over ({}, {}) contains vertex {}; rejection expected",
            v.apex,
            v.a,
            v.c,
            v.inside
        );
    }
    let verdict = verify_drawing(&g, &tol).map_err(|e| match e {
        VerifyError::Internal(m) => CliError::Consistency(m),
        other => CliError::Input(other.to_string()),
    })?;
    match verdict {
        Verdict::Accepted(cert) => {
            let witnessed = Instance {
                vertices: inst.vertices,
                witnesses: cert.witnesses,
                label: inst.label,
            };
            if cli.check {
                let got = oracle_construct(&witnessed, &tol).edges;
                if got != g.edges {
                    return Err(CliError::Consistency(format!(
                        "certificate fails the oracle on {}",
                        preview(got.symmetric_difference(&g.edges))
                    )));
                }
            }
            write(out, &format_instance(&witnessed))?;
            cli.picture(&witnessed, &g.edges, &[])?;
            Ok(Outcome::Success)
        }
        Verdict::Rejected(report) => {
            let (a, b) = report.nonedge;
            eprintln!("rejected: the disk of non-edge ({a}, {b}) is covered by the edge disks");
            let mut json = serde_json::to_string_pretty(&report).expect("reports serialize");
            json.push('\n');
            write(out, &json)?;
            let target: Vec<DiametralDisk> = DiametralDisk::new(inst.vertices[a], inst.vertices[b])
                .into_iter()
                .collect();
            cli.picture(&inst, &g.edges, &target)?;
            Ok(Outcome::Rejected)
        }
    }
}

fn from_draw(e: DrawError) -> CliError {
    match e {
        DrawError::InvalidParameter(m) => CliError::Input(m),
        other => CliError::Construction(other.to_string()),
    }
}

fn draw(cli: &Cli, kind: &DrawKind) -> Result<Outcome, CliError> {
    let mut extra = Vec::new();
    let (drawing, output) = match kind {
        DrawKind::Tree { input, output } => {
            let tree = parse_tree(&read(input)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
            let tol = cli.tolerance(std::iter::empty())?;
            (draw_tree(&tree, &tol).map_err(from_draw)?, output)
        }
        DrawKind::Bipartite { m, n, output } => {
            let tol = cli.tolerance(std::iter::empty())?;
            (
                draw_complete_bipartite(*m, *n, &tol).map_err(from_draw)?,
                output,
            )
        }
        DrawKind::Hexagonal { rings, output } => {
            let patch = hexagonal_instance(*rings).map_err(from_draw)?;
            let witnesses = eliminate_all_witnesses_rotated(&patch.points).map_err(from_draw)?;
            extra = patch.diametral_disks();
            let n = patch.points.len();
            let instance = Instance::new(patch.points, witnesses)
                .map_err(|e| CliError::Construction(e.to_string()))?;
            let drawing = Drawing {
                instance: instance.with_label(format!("hexagonal patch, {rings} rings")),
                expected: EdgeSet::new(n),
            };
            (drawing, output)
        }
        DrawKind::Concentric {
            circles,
            ratio,
            output,
        } => {
            let mut drawing = concentric_instance(*circles, *ratio).map_err(from_draw)?;
            let tol = cli.tolerance(drawing.instance.vertices.iter())?;
            match verify_drawing(&drawing.embedded(), &tol) {
                Ok(Verdict::Accepted(cert)) => {
                    let n = drawing.instance.vertices.len();
                    log::info!(
                        "{} witnesses for {n} vertices (lower bound {})",
                        cert.witnesses.len(),
                        (3 * n / 2).saturating_sub(8)
                    );
                    drawing.instance.witnesses = cert.witnesses;
                }
                Ok(Verdict::Rejected(r)) => {
                    return Err(CliError::Construction(format!(
                        "concentric drawing rejected at non-edge {:?}",
                        r.nonedge
                    )))
                }
                Err(e) => return Err(CliError::Construction(e.to_string())),
            }
            (drawing, output)
        }
        DrawKind::Reduce { n, target, output } => {
            if *n == 0 {
                return Err(CliError::Input("need at least one vertex".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let points = random_points(&mut rng, *n);
            let tol = cli.tolerance(points.iter())?;
            let (witnesses, g) =
                reduce_edge_count(&points, *target, &tol).map_err(|e| match e {
                    VerifyError::InvalidTarget { .. } => CliError::Input(e.to_string()),
                    other => CliError::Construction(other.to_string()),
                })?;
            let instance = Instance::new(points, witnesses)
                .map_err(|e| CliError::Construction(e.to_string()))?;
            let drawing = Drawing {
                instance,
                expected: g.edges,
            };
            (drawing, output)
        }
    };
    let inst = &drawing.instance;
    let tol = cli.tolerance(inst.vertices.iter().chain(&inst.witnesses))?;
    let got = oracle_construct(inst, &tol).edges;
    if got != drawing.expected {
        return Err(CliError::Construction(format!(
            "oracle self-check failed on {}",
            preview(got.symmetric_difference(&drawing.expected))
        )));
    }
    write(output.out.as_deref(), &format_instance(inst))?;
    if let Some(path) = &output.graph {
        write(Some(path), &format_graph(&drawing.expected))?;
    }
    cli.picture(inst, &drawing.expected, &extra)?;
    Ok(Outcome::Success)
}

fn bench(cli: &Cli, config: &Path) -> Result<Outcome, CliError> {
    let cfg: BenchConfig = serde_json::from_str(&read(config)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", config.display())))?;
    let rows =
        bench_constructions(&cfg.sizes, cfg.trials, cfg.seed.unwrap_or(cli.seed)).map_err(|e| {
            match e {
                BenchError::InvalidSize(..) => CliError::Input(e.to_string()),
                BenchError::Disagreement { .. } => CliError::Consistency(e.to_string()),
            }
        })?;
    let mut csv = String::from("algorithm,n,w,trial,milliseconds,edges\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{:.3},{}",
            r.algorithm, r.n, r.w, r.trial, r.milliseconds, r.edges
        )
        .unwrap();
    }
    write(None, &csv)?;
    Ok(Outcome::Success)
}
