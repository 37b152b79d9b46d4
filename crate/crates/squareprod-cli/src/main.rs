//! Command-line front end: recognition, decomposition certificates,
//! certificate verification, gadget generation, and the brute-force
//! oracles.
//!
//! Exit codes: 0 success / positive verdict, 1 negative verdict or
//! failed verification, 2 parse or embedding error, 3 size gate.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use squareprod::decompose::{decompose, verify_certificate, Certificate};
use squareprod::gadgets::{
    self, forest_quotient_report, GadgetError, DEFAULT_FOREST_SEARCH_GATE,
    DEFAULT_MINOR_GATE, DEFAULT_PATHWIDTH_GATE,
};
use squareprod::generate;
use squareprod::graph::Graph;
use squareprod::planegraph::PlaneGraph;
use squareprod::products::{subgraph_injection_exists, DEFAULT_INJECTION_GATE};
use squareprod::recognize::{is_squaregraph, SquaregraphVerdict};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_GATE: u8 = 3;

#[derive(Parser)]
#[command(name = "squareprod", version, about = "Squaregraph product structure toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether a plane graph file is a squaregraph.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decompose a squaregraph into a certificate.
    Decompose {
        file: PathBuf,
        /// Root vertex (default: smallest outer vertex per component).
        #[arg(long)]
        root: Option<usize>,
        /// Certificate output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render the leveled embedding to an SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Re-check every claim of a certificate against its graph.
    Verify { graph: PathBuf, cert: PathBuf },
    /// Generate a lower-bound gadget graph plus metadata.
    Gadget {
        #[arg(long)]
        kind: String,
        #[arg(short = 'k', long)]
        k: Option<usize>,
        #[arg(short = 'i', long)]
        i: Option<usize>,
        #[arg(short = 'j', long)]
        j: Option<usize>,
        #[arg(short = 'l', long, default_value = "1")]
        l: usize,
        #[arg(long)]
        nprime: usize,
        /// Output prefix: writes <out>.graph and <out>.meta.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Brute-force oracles over .graph files.
    Oracle {
        #[command(subcommand)]
        oracle: Oracle,
    },
    /// Deterministic graph generators.
    Gen {
        #[command(subcommand)]
        gen: Gen,
    },
    /// Decompose and re-verify every .spg file in a directory.
    Corpus { dir: PathBuf },
}

#[derive(Subcommand)]
enum Oracle {
    /// Search for a layered partition with forest quotient.
    ForestQuotient {
        file: PathBuf,
        #[arg(long, default_value = "1")]
        width: usize,
        #[arg(long, default_value = "6")]
        max_layers: usize,
        #[arg(long)]
        gate: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact pathwidth with a validated decomposition.
    Pathwidth {
        file: PathBuf,
        #[arg(long)]
        gate: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Search for an s-small minor model of target in host.
    Minor {
        host: PathBuf,
        target: PathBuf,
        #[arg(short = 's', long, default_value = "2")]
        size_bound: usize,
        #[arg(long)]
        gate: Option<usize>,
    },
    /// Search for a subgraph injection of pattern into host.
    Inject {
        pattern: PathBuf,
        host: PathBuf,
        #[arg(long)]
        gate: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Grid graph embedding.
    Grid {
        #[arg(short = 'm', long)]
        rows: usize,
        #[arg(short = 'n', long)]
        cols: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random labelled tree embedding.
    Tree {
        #[arg(short = 'n', long)]
        vertices: usize,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random squaregraph grown by gluing squares.
    Glued {
        #[arg(long)]
        target: usize,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli.command))
}

/// Gate resolution order: command-line flag, then SQUAREPROD_GATE, then
/// the documented default.
fn resolve_gate(flag: Option<usize>, default: usize) -> usize {
    flag.or_else(|| {
        std::env::var("SQUAREPROD_GATE").ok().and_then(|s| s.parse().ok())
    })
    .unwrap_or(default)
}

fn read_plane(path: &Path) -> Result<PlaneGraph, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    PlaneGraph::parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn read_graph(path: &Path) -> Result<Graph<usize>, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    Graph::parse_graph(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn write_file(path: &Path, content: &str) -> Result<(), u8> {
    fs::write(path, content).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn run(command: Command) -> u8 {
    match command {
        Command::Check { file, format } => cmd_check(&file, format),
        Command::Decompose { file, root, out, svg, format } => {
            cmd_decompose(&file, root, out.as_deref(), svg.as_deref(), format)
        }
        Command::Verify { graph, cert } => cmd_verify(&graph, &cert),
        Command::Gadget { kind, k, i, j, l, nprime, out } => {
            cmd_gadget(&kind, k, i, j, l, nprime, &out)
        }
        Command::Oracle { oracle } => cmd_oracle(oracle),
        Command::Gen { gen } => cmd_gen(gen),
        Command::Corpus { dir } => cmd_corpus(&dir),
    }
}

fn cmd_check(file: &Path, format: Format) -> u8 {
    let g = match read_plane(file) {
        Ok(g) => g,
        Err(code) => return code,
    };
    match is_squaregraph(&g) {
        SquaregraphVerdict::Yes => {
            match format {
                Format::Text => println!("squaregraph: yes"),
                Format::Json => println!("{{\"squaregraph\": true}}"),
            }
            EXIT_OK
        }
        SquaregraphVerdict::No(witness) => {
            match format {
                Format::Text => println!("squaregraph: no ({witness})"),
                Format::Json => println!(
                    "{}",
                    serde_json::json!({"squaregraph": false, "witness": witness.to_string()})
                ),
            }
            EXIT_NEGATIVE
        }
    }
}

fn cmd_decompose(
    file: &Path,
    root: Option<usize>,
    out: Option<&Path>,
    svg_out: Option<&Path>,
    format: Format,
) -> u8 {
    let g = match read_plane(file) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let decs = match decompose(&g, root) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_NEGATIVE;
        }
    };
    let cert = Certificate::from_decompositions(&decs);
    let json = serde_json::to_string_pretty(&cert).expect("certificate serialises");
    if let Some(path) = out {
        if let Err(code) = write_file(path, &json) {
            return code;
        }
    }
    if let Some(path) = svg_out {
        // Render the first component.
        if let Some(dec) = decs.first() {
            if let Err(code) = write_file(path, &svg::leveled_to_svg(&dec.leveled)) {
                return code;
            }
        }
    }
    match format {
        Format::Text => {
            println!("h_vertices: {}", cert.parts.len());
            println!("path_length: {}", cert.layers.len());
            println!("width: 1");
            println!(
                "checks: squaregraph={} width_one={} layers_independent={} \
                 vertical_paths={} deepest_outer={} embedding_semistrong={} \
                 h_outerplanar_embedding={} h_outerplanar_abstract={}",
                cert.checks.squaregraph,
                cert.checks.width_one,
                cert.checks.layers_independent,
                cert.checks.vertical_paths,
                cert.checks.deepest_outer,
                cert.checks.embedding_semistrong,
                cert.checks.h_outerplanar_embedding,
                cert.checks
                    .h_outerplanar_abstract
                    .map_or("skipped".to_string(), |b| b.to_string()),
            );
        }
        Format::Json => println!("{json}"),
    }
    EXIT_OK
}

fn cmd_verify(graph: &Path, cert_path: &Path) -> u8 {
    let g = match read_plane(graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let cert: Certificate = match fs::read_to_string(cert_path)
        .map_err(|e| e.to_string())
        .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
    {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", cert_path.display());
            return EXIT_PARSE;
        }
    };
    match verify_certificate(&g, &cert) {
        Ok(()) => {
            println!("certificate: ok");
            EXIT_OK
        }
        Err(violated) => {
            println!("certificate: FAIL ({violated})");
            EXIT_NEGATIVE
        }
    }
}

fn cmd_gadget(
    kind: &str,
    k: Option<usize>,
    i: Option<usize>,
    j: Option<usize>,
    l: usize,
    nprime: usize,
    out: &Path,
) -> u8 {
    let gadget = match kind {
        "plain" => gadgets::gadget_plain(k.unwrap_or(1), l, nprime),
        "bipartite" => {
            gadgets::gadget_bipartite(i.unwrap_or(1), j.unwrap_or(0), l, nprime)
        }
        other => {
            eprintln!("error: unknown gadget kind `{other}`");
            return EXIT_PARSE;
        }
    };
    let gadget = match gadget {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let graph_path = out.with_extension("graph");
    let meta_path = out.with_extension("meta.json");
    let meta = serde_json::to_string_pretty(&gadget.metadata()).unwrap();
    if write_file(&graph_path, &gadget.graph.serialize_graph()).is_err()
        || write_file(&meta_path, &meta).is_err()
    {
        return EXIT_PARSE;
    }
    println!(
        "gadget: {} vertices, {} edges -> {}, {}",
        gadget.graph.vertex_count(),
        gadget.graph.edge_count(),
        graph_path.display(),
        meta_path.display()
    );
    EXIT_OK
}

fn gate_exit(e: &GadgetError) -> u8 {
    match e {
        GadgetError::SizeGate { .. } => EXIT_GATE,
        GadgetError::BadParameter(_) => EXIT_PARSE,
    }
}

fn cmd_oracle(oracle: Oracle) -> u8 {
    match oracle {
        Oracle::ForestQuotient { file, width, max_layers, gate, out } => {
            let g = match read_graph(&file) {
                Ok(g) => g,
                Err(code) => return code,
            };
            let gate = resolve_gate(gate, DEFAULT_FOREST_SEARCH_GATE);
            let name = file.display().to_string();
            match forest_quotient_report(&name, &g, width, max_layers, gate) {
                Ok(report) => {
                    let json = serde_json::to_string_pretty(&report).unwrap();
                    if let Some(path) = out {
                        if let Err(code) = write_file(&path, &json) {
                            return code;
                        }
                    }
                    println!("{json}");
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    gate_exit(&e)
                }
            }
        }
        Oracle::Pathwidth { file, gate, format } => {
            let g = match read_graph(&file) {
                Ok(g) => g,
                Err(code) => return code,
            };
            let gate = resolve_gate(gate, DEFAULT_PATHWIDTH_GATE);
            match gadgets::pathwidth_exact(&g, gate) {
                Ok(pd) => {
                    match format {
                        Format::Text => println!("{}", pd.value),
                        Format::Json => {
                            println!("{}", serde_json::to_string_pretty(&pd).unwrap())
                        }
                    }
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    gate_exit(&e)
                }
            }
        }
        Oracle::Minor { host, target, size_bound, gate } => {
            let (h, t) = match (read_graph(&host), read_graph(&target)) {
                (Ok(h), Ok(t)) => (h, t),
                (Err(code), _) | (_, Err(code)) => return code,
            };
            let gate = resolve_gate(gate, DEFAULT_MINOR_GATE);
            match gadgets::find_minor_model(&h, &t, size_bound, gate) {
                Ok(Some(model)) => {
                    println!("{}", serde_json::to_string_pretty(&model).unwrap());
                    EXIT_OK
                }
                Ok(None) => {
                    println!("no model");
                    EXIT_NEGATIVE
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    gate_exit(&e)
                }
            }
        }
        Oracle::Inject { pattern, host, gate } => {
            let (p, h) = match (read_graph(&pattern), read_graph(&host)) {
                (Ok(p), Ok(h)) => (p, h),
                (Err(code), _) | (_, Err(code)) => return code,
            };
            let gate = resolve_gate(gate, DEFAULT_INJECTION_GATE);
            match subgraph_injection_exists(&p, &h, gate) {
                Ok(Some(map)) => {
                    let obj: serde_json::Map<String, serde_json::Value> = map
                        .iter()
                        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&obj).unwrap());
                    EXIT_OK
                }
                Ok(None) => {
                    println!("no injection");
                    EXIT_NEGATIVE
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_GATE
                }
            }
        }
    }
}

fn cmd_gen(gen: Gen) -> u8 {
    match gen {
        Gen::Grid { rows, cols, out } => {
            let g = generate::grid(rows, cols);
            match write_file(&out, &g.serialize()) {
                Ok(()) => EXIT_OK,
                Err(code) => code,
            }
        }
        Gen::Tree { vertices, seed, out } => {
            let t = generate::random_tree_seeded(vertices, seed);
            let plane = generate::tree_plane(&t);
            match write_file(&out, &plane.serialize()) {
                Ok(()) => EXIT_OK,
                Err(code) => code,
            }
        }
        Gen::Glued { target, seed, out } => {
            let g = generate::glued_squaregraph(seed, target);
            match write_file(&out, &g.serialize()) {
                Ok(()) => EXIT_OK,
                Err(code) => code,
            }
        }
    }
}

fn cmd_corpus(dir: &Path) -> u8 {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "spg"))
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", dir.display());
            return EXIT_PARSE;
        }
    };
    files.sort();

    // Fan out across workers; results are merged in input order.
    let results: Vec<(PathBuf, Result<String, String>)> = files
        .par_iter()
        .map(|path| {
            let outcome = fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|t| PlaneGraph::parse(&t).map_err(|e| e.to_string()))
                .and_then(|g| {
                    let decs = decompose(&g, None).map_err(|e| e.to_string())?;
                    let cert = Certificate::from_decompositions(&decs);
                    verify_certificate(&g, &cert)?;
                    Ok(format!(
                        "ok |V|={} |V(H)|={} path={}",
                        g.vertex_count(),
                        cert.parts.len(),
                        cert.layers.len()
                    ))
                });
            (path.clone(), outcome)
        })
        .collect();

    let mut failures = 0;
    for (path, outcome) in results {
        match outcome {
            Ok(line) => println!("{}: {line}", path.display()),
            Err(e) => {
                println!("{}: FAIL {e}", path.display());
                failures += 1;
            }
        }
    }
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}
