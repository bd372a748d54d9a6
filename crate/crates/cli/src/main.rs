use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use linksmooth::multigraph::{EdgeId, VertexId};
use linksmooth::planegraph::{find_embedding, medial, EdgeEnd, PlaneGraph};
use linksmooth::shadow::{connect_sum, presets, Shadow, ShadowJson};
use linksmooth::solver::Solver;
use linksmooth::theory::{blowout, find_2blowout_sequence, find_blowout_sequence, records_to_csv, wheel, BlowoutStep};
use linksmooth_cli::report::{classify, read_graph, GraphFormat};
use linksmooth_cli::service::{serve, AppState, DEFAULT_PORT};
use linksmooth_cli::suites::{run_suite, Suite, SuiteOptions};

#[derive(Parser)]
#[command(name = "linksmooth", version, about = "Link Smoothing Game solver and tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Mgf,
    Json,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Mgf => GraphFormat::Mgf,
            FormatArg::Json => GraphFormat::Json,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Emit {
    Black,
    White,
    Classify,
    Pd,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a graph and report its outcome class.
    Classify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run an exhaustive suite; exits nonzero on any violation.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        max_e: Option<usize>,
        #[arg(long)]
        max_v: Option<usize>,
        /// Write `v,e,outcome,certificate` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        no_loops: bool,
    },
    /// Checkerboard graphs of a shadow.
    Shadow {
        /// PD code file (text, or JSON with a `crossings` array).
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        pd: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, value_enum, default_value = "black")]
        emit: Emit,
    },
    /// Connect sum of two shadows (PD files or preset names).
    ConnectSum {
        a: String,
        b: String,
        /// Arc of A to cut; defaults to its lowest (outer) label.
        #[arg(long)]
        arc1: Option<u32>,
        #[arg(long)]
        arc2: Option<u32>,
    },
    /// Apply one blowout, or search for a blowout sequence.
    Blowout {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: Option<usize>,
        /// Edge-ends moving to the new vertex, as `edge:end,...`.
        #[arg(long, default_value = "")]
        split: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Find a sequence building the graph from a single vertex.
        #[arg(long, conflicts_with_all = ["vertex", "two"])]
        sequence: bool,
        /// Find a sequence of 2-blowouts.
        #[arg(long, conflicts_with = "vertex")]
        two: bool,
    },
    /// The wheel with n spokes as a plane graph, with its tree pair.
    Wheel { n: usize },
    /// The medial shadow of a graph, as PD code.
    Medial {
        /// MGF or graph JSON; a JSON file with `rotation` keeps that embedding.
        #[arg(long)]
        graph: PathBuf,
    },
    /// Run the local JSON play service.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Append-only session log, replayed at startup.
        #[arg(long)]
        persist: Option<PathBuf>,
    },
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_shadow(path: &Path) -> Result<Shadow> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        let j: ShadowJson = serde_json::from_str(&text)?;
        return Ok(Shadow::try_from(j)?);
    }
    Ok(Shadow::parse_pd(&text)?)
}

fn shadow_arg(arg: &str) -> Result<Shadow> {
    let path = Path::new(arg);
    if path.exists() {
        return read_shadow(path);
    }
    presets::by_name(arg)
        .ok_or_else(|| anyhow!("`{arg}` is neither a file nor a preset ({})", presets::names().join(", ")))
}

fn parse_split(text: &str) -> Result<Vec<EdgeEnd>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (e, end) = t.trim().split_once(':').ok_or_else(|| anyhow!("expected edge:end, got `{t}`"))?;
            let end: u8 = end.parse()?;
            if end > 1 {
                bail!("edge end must be 0 or 1, got {end}");
            }
            Ok(EdgeEnd::new(EdgeId(e.parse()?), end))
        })
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify { graph, format, json } => {
            let g = read_graph(&graph, format.map(Into::into))?;
            let c = classify(&Solver::new(), &g)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&c)?);
            } else {
                print!("{c}");
            }
        }
        Command::Verify {
            suite,
            max_e,
            max_v,
            csv,
            no_loops,
        } => {
            let opts = SuiteOptions {
                max_e: max_e.unwrap_or(suite.default_max_e()),
                max_v: max_v.unwrap_or(usize::MAX),
                loops: !no_loops,
            };
            let report = run_suite(suite, &opts, &Solver::new());
            if let Some(path) = csv {
                std::fs::write(&path, records_to_csv(&report.records))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            for v in &report.violations {
                println!("{v}");
            }
            println!("{}", report.summary);
            if !report.violations.is_empty() {
                println!("{suite}: {} violations", report.violations.len());
                return Ok(ExitCode::FAILURE);
            }
            println!("{suite}: ok");
        }
        Command::Shadow { pd, preset, emit } => {
            let s = match (pd, preset) {
                (Some(path), _) => read_shadow(&path)?,
                (None, Some(name)) => shadow_arg(&name)?,
                (None, None) => bail!("give --pd or --preset"),
            };
            match emit {
                Emit::Black => print!("{}", s.black_graph().graph().to_mgf()),
                Emit::White => print!("{}", s.white_graph().graph().to_mgf()),
                Emit::Classify => print!("{}", classify(&Solver::new(), s.black_graph().graph())?),
                Emit::Pd => println!("{}", s.to_pd()),
            }
        }
        Command::ConnectSum { a, b, arc1, arc2 } => {
            let (s1, s2) = (shadow_arg(&a)?, shadow_arg(&b)?);
            let a1 = arc1.unwrap_or_else(|| presets::outer_arc(&s1));
            let a2 = arc2.unwrap_or_else(|| presets::outer_arc(&s2));
            let sum = connect_sum(&s1, a1, &s2, a2)?;
            println!("{}", sum.shadow.to_pd());
        }
        Command::Blowout {
            graph,
            vertex,
            split,
            n,
            sequence,
            two,
        } => {
            let g = read_graph(&graph, None)?;
            if sequence {
                let seq = find_blowout_sequence(&g)?;
                println!("{}", serde_json::to_string_pretty(&seq)?);
            } else if two {
                match find_2blowout_sequence(&g)? {
                    Some(seq) => {
                        println!("{}", serde_json::to_string_pretty(&seq)?);
                        if let Some(pair) = seq.induced_tree_pair() {
                            println!("tree pair: {}", serde_json::to_string(&pair)?);
                        }
                    }
                    None => {
                        println!("no 2-blowout sequence");
                        return Ok(ExitCode::FAILURE);
                    }
                }
            } else {
                let vertex = vertex.ok_or_else(|| anyhow!("give --vertex, --sequence or --two"))?;
                let step = BlowoutStep {
                    vertex: VertexId(vertex),
                    split: parse_split(&split)?,
                    n,
                };
                print!("{}", blowout(&g, &step)?.to_mgf());
            }
        }
        Command::Wheel { n } => {
            let (pg, pair) = wheel(n)?;
            let out = serde_json::json!({ "plane_graph": pg, "tree_pair": pair });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Medial { graph } => {
            let text = read_text(&graph)?;
            let pg = match serde_json::from_str::<PlaneGraph>(&text) {
                Ok(pg) => pg,
                Err(_) => find_embedding(&read_graph(&graph, None)?)?,
            };
            println!("{}", medial(&pg)?.to_pd());
        }
        Command::Serve { port, persist } => {
            let solver = Arc::new(Solver::new());
            let state = match persist {
                Some(path) => AppState::with_persistence(solver, &path)?,
                None => AppState::new(solver),
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve(Arc::new(state), port))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
