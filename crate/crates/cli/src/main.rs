mod job;
mod render;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ramsey_forge::construct::{ConstructionKind, ConstructionParams};
use ramsey_forge::{Budget, KnownValuesTable, SearchProblem, Shape};
use serde_json::{json, Value};

use job::{compute, graph, validate, Input, Job, Outcome, RunOptions};

#[derive(Parser)]
#[command(name = "ramsey-forge", version, about = "Edge-coloring constructions, structure checks and exact searches for constrained Ramsey numbers")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Single-line JSON output
    #[arg(long, global = true)]
    compact: bool,
    /// Omit the meta block and wall-clock timings
    #[arg(long, global = true)]
    no_meta: bool,
    /// Worker threads for root-level search splitting
    #[arg(long, global = true, env = "RAMSEY_FORGE_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Seed for randomized construction parameters
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Wall-clock limit for searches; exceeding it reports TIMEOUT
    #[arg(long, global = true, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Known Ramsey values (JSON)
    #[arg(long, global = true, value_name = "FILE")]
    table: Option<PathBuf>,
    /// Also write the output document to FILE
    #[arg(long, global = true, value_name = "FILE")]
    emit_certificate: Option<PathBuf>,
    /// Lift the host edge-count limits of the search engine
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Args, Clone, Default)]
struct GraphInput {
    /// Graph in graph6
    #[arg(long)]
    graph: Option<String>,
    /// File holding a graph6 line
    #[arg(long, conflicts_with = "graph")]
    graph_file: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct HostInput {
    /// Colored host as inline JSON
    #[arg(long)]
    host: Option<String>,
    /// File holding a colored host JSON
    #[arg(long, conflicts_with = "host")]
    host_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Complete,
    Bipartite,
}

#[derive(Subcommand)]
enum Command {
    /// Graph invariants used by the theorem hypotheses
    Invariants {
        #[command(flatten)]
        graph: GraphInput,
    },
    /// Build a lower-bound construction
    Construct {
        /// Construction kind, e.g. r3-i, matching, exact-k, bipartite-starpart
        #[arg(long)]
        kind: ConstructionKind,
        /// Comma-separated graph6 components
        #[arg(long)]
        components: Option<String>,
        /// A graph whose components are used
        #[command(flatten)]
        graph: GraphInput,
        /// Number of colors k
        #[arg(long)]
        colors: Option<usize>,
        /// Matching size m
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated part sizes
        #[arg(long, value_delimiter = ',')]
        part_sizes: Option<Vec<usize>>,
        /// Comma-separated part sizes on the left side (bipartite)
        #[arg(long, value_delimiter = ',')]
        u_sizes: Option<Vec<usize>>,
        /// Comma-separated part sizes on the right side (bipartite)
        #[arg(long, value_delimiter = ',')]
        v_sizes: Option<Vec<usize>>,
        /// Component index i (0-based)
        #[arg(long)]
        i: Option<usize>,
        /// Component index j (0-based)
        #[arg(long)]
        j: Option<usize>,
        /// Component index l (0-based)
        #[arg(long)]
        l: Option<usize>,
        /// Base parameters as inline JSON; flags override
        #[arg(long)]
        params: Option<String>,
        /// Base parameters from a JSON file
        #[arg(long, conflicts_with = "params")]
        params_file: Option<PathBuf>,
        /// Inner 2-colored complete graph (host JSON)
        #[arg(long)]
        sub_host_file: Option<PathBuf>,
        /// Role (1 or 2) of each color of the inner host
        #[arg(long, value_delimiter = ',')]
        sub_host_roles: Option<Vec<u32>>,
        /// Search for Ramsey values missing from the table
        #[arg(long)]
        search_missing: bool,
        /// Check every claim of the construction
        #[arg(long)]
        verify: bool,
    },
    /// Re-verify an emitted document, or check a host for patterns
    Verify {
        /// Document written by --emit-certificate (or captured output)
        certificate: Option<PathBuf>,
        #[command(flatten)]
        host: HostInput,
        /// Monochromatic pattern that must be absent from the host
        #[command(flatten)]
        graph: GraphInput,
        /// Rainbow path order that must be absent from the host
        #[arg(long)]
        forbid_rainbow: Option<usize>,
    },
    /// Structure of rainbow-path-free colorings, or tripartite embeddings
    Structure {
        #[command(flatten)]
        host: HostInput,
        /// Pattern for the extended size conditions
        #[command(flatten)]
        graph: GraphInput,
        /// Rainbow path order, 4 or 5 (complete hosts use 5)
        #[arg(long)]
        forbid_rainbow: Option<usize>,
        /// Part sizes x,y,z of a complete tripartite host
        #[arg(long, value_delimiter = ',', num_args = 1)]
        tripartite: Option<Vec<usize>>,
        /// The two 3-chromatic graphs of the tripartite query
        #[arg(long)]
        components: Option<String>,
    },
    /// Decide whether a good coloring exists on one host
    Search {
        #[arg(long, value_enum, default_value = "complete")]
        shape: ShapeArg,
        /// Vertices (complete) or right side size (bipartite)
        #[arg(long)]
        n: usize,
        /// Left side size for bipartite hosts (default n)
        #[arg(long)]
        m: Option<usize>,
        /// Number of colors, or "unbounded"
        #[arg(long, default_value = "unbounded")]
        budget: Budget,
        /// Forbidden monochromatic pattern
        #[arg(long, visible_alias = "graph")]
        forbid_mono_g6: String,
        /// Also forbid a rainbow path on this many vertices (4 or 5)
        #[arg(long)]
        forbid_rainbow: Option<usize>,
    },
    /// R_k(H), or R(G1,G2) with --components
    Ramsey {
        #[command(flatten)]
        graph: GraphInput,
        /// Two comma-separated graph6 graphs G1,G2
        #[arg(long)]
        components: Option<String>,
        /// Number of colors k
        #[arg(long, default_value_t = 2)]
        colors: usize,
        /// Largest host order to try
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// f(H,P_t) together with R_{t-2}(H)
    Constrained {
        #[command(flatten)]
        graph: GraphInput,
        /// Rainbow path order t (4 or 5)
        #[arg(long, default_value_t = 5)]
        forbid_rainbow: usize,
        /// Largest host order to try
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// BR_k(H), or h_k(H,P_t) with --forbid-rainbow
    Bipartite {
        #[command(flatten)]
        graph: GraphInput,
        /// Number of colors k for BR_k
        #[arg(long)]
        colors: Option<usize>,
        /// Rainbow path order t (4 or 5) for h_k(H,P_t)
        #[arg(long)]
        forbid_rainbow: Option<usize>,
        /// Color budget for the constrained number
        #[arg(long)]
        budget: Option<Budget>,
        /// Largest side size to try
        #[arg(long, default_value_t = 6)]
        nmax: usize,
    },
    /// Formula bounds and theorem applicability
    Oracle {
        #[command(flatten)]
        graph: GraphInput,
        /// Graphs for the homological certificate
        #[arg(long)]
        components: Option<String>,
        /// Render tables instead of JSON
        #[arg(long)]
        human: bool,
    },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

impl GraphInput {
    fn get(&self) -> Result<Option<String>, String> {
        let text = match (&self.graph, &self.graph_file) {
            (Some(g), _) => g.clone(),
            (None, Some(p)) => read(p)?.lines().next().unwrap_or("").to_string(),
            (None, None) => return Ok(None),
        };
        // store the canonical encoding of what was parsed
        Ok(Some(graph(&text)?.to_graph6()))
    }

    fn required(&self) -> Result<String, String> {
        self.get()?.ok_or_else(|| "--graph or --graph-file is required".to_string())
    }
}

impl HostInput {
    fn get(&self) -> Result<Option<ramsey_forge::ColoredHost>, String> {
        let text = match (&self.host, &self.host_file) {
            (Some(h), _) => h.clone(),
            (None, Some(p)) => read(p)?,
            (None, None) => return Ok(None),
        };
        verify::parse_host(&text).map(Some)
    }
}

fn graph_list(text: &str) -> Result<Vec<String>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| graph(s).map(|g| g.to_graph6()))
        .collect()
}

fn pair(text: &str, what: &str) -> Result<[String; 2], String> {
    let list = graph_list(text)?;
    <[String; 2]>::try_from(list).map_err(|l| format!("{what} needs exactly two graphs, got {}", l.len()))
}

enum Action {
    Run(Job),
    VerifyDocument(Value),
    Oracle(Job),
}

fn build(cmd: Command, global: &Global) -> Result<Action, String> {
    Ok(match cmd {
        Command::Invariants { graph } => Action::Run(Job::Invariants { graph: graph.required()? }),
        Command::Construct {
            kind,
            components,
            graph: gin,
            colors,
            m,
            part_sizes,
            u_sizes,
            v_sizes,
            i,
            j,
            l,
            params,
            params_file,
            sub_host_file,
            sub_host_roles,
            search_missing,
            verify,
        } => {
            let base = match (params, params_file) {
                (Some(p), _) => Some(p),
                (None, Some(f)) => Some(read(&f)?),
                _ => None,
            };
            let mut p: ConstructionParams = match base {
                Some(text) => serde_json::from_str(&text).map_err(|e| format!("--params: {e}"))?,
                None => ConstructionParams::default(),
            };
            macro_rules! set {
                ($($f:ident),*) => { $(if $f.is_some() { p.$f = $f; })* };
            }
            set!(m, part_sizes, u_sizes, v_sizes, i, j, l, sub_host_roles);
            if colors.is_some() {
                p.k = colors;
            }
            if p.seed.is_none() {
                p.seed = global.seed;
            }
            if let Some(f) = sub_host_file {
                p.sub_host = Some(verify::parse_host(&read(&f)?)?);
            }
            p.search_missing |= search_missing;
            let components = match (components, gin.get()?) {
                (Some(c), _) => graph_list(&c)?,
                (None, Some(g6)) => graph(&g6)?
                    .component_graphs()
                    .into_iter()
                    .filter(|c| c.is_nonempty())
                    .map(|c| c.to_graph6())
                    .collect(),
                (None, None) => Vec::new(),
            };
            Action::Run(Job::Construct { kind, components, params: p, verify })
        }
        Command::Verify { certificate, host, graph: gin, forbid_rainbow } => match (certificate, host.get()?) {
            (Some(path), None) => {
                let doc: Value = serde_json::from_str(&read(&path)?).map_err(|e| format!("{}: {e}", path.display()))?;
                Action::VerifyDocument(doc)
            }
            (None, Some(h)) => {
                let g = gin.get()?;
                if g.is_none() && forbid_rainbow.is_none() {
                    return Err("verify --host needs --graph and/or --forbid-rainbow".into());
                }
                Action::Run(Job::CheckHost { host: h, graph: g, forbid_rainbow })
            }
            (Some(_), Some(_)) => return Err("give either a certificate file or --host, not both".into()),
            (None, None) => return Err("verify needs a certificate file or --host".into()),
        },
        Command::Structure { host, graph: gin, forbid_rainbow, tripartite, components } => match tripartite {
            Some(sizes) => {
                let sizes = <[usize; 3]>::try_from(sizes)
                    .map_err(|s| format!("--tripartite needs three sizes, got {}", s.len()))?;
                let components = pair(components.as_deref().ok_or("--tripartite needs --components g1,g2")?, "--components")?;
                Action::Run(Job::Tripartite { sizes, components })
            }
            None => {
                let host = host.get()?.ok_or("structure needs --host/--host-file or --tripartite")?;
                Action::Run(Job::Structure { host, graph: gin.get()?, forbid_rainbow })
            }
        },
        Command::Search { shape, n, m, budget, forbid_mono_g6, forbid_rainbow } => {
            let shape = match shape {
                ShapeArg::Complete => Shape::Complete { n },
                ShapeArg::Bipartite => Shape::Bipartite { m: m.unwrap_or(n), n },
            };
            let forbid_mono = graph(&forbid_mono_g6)?;
            Action::Run(Job::Search { problem: SearchProblem { shape, budget, forbid_mono, forbid_rainbow } })
        }
        Command::Ramsey { graph: gin, components, colors, nmax } => match components {
            Some(c) => {
                if colors != 2 {
                    return Err("--components computes a two-color number; drop --colors".into());
                }
                Action::Run(Job::TwoColorRamsey { components: pair(&c, "--components")?, nmax })
            }
            None => Action::Run(Job::Ramsey { graph: gin.required()?, colors, nmax }),
        },
        Command::Constrained { graph: gin, forbid_rainbow, nmax } => {
            Action::Run(Job::Constrained { graph: gin.required()?, forbid_rainbow, nmax })
        }
        Command::Bipartite { graph: gin, colors, forbid_rainbow, budget, nmax } => {
            let graph = gin.required()?;
            match forbid_rainbow {
                Some(t) => {
                    let budget = match (budget, colors) {
                        (Some(b), None) => b,
                        (None, Some(k)) => Budget::Finite(k),
                        (None, None) => Budget::Unbounded,
                        (Some(_), Some(_)) => return Err("give --budget or --colors, not both".into()),
                    };
                    Action::Run(Job::BipartiteConstrained { graph, forbid_rainbow: t, budget, nmax })
                }
                None => {
                    if budget.is_some() {
                        return Err("--budget applies with --forbid-rainbow; use --colors for BR_k".into());
                    }
                    Action::Run(Job::BipartiteRamsey { graph, colors: colors.unwrap_or(2), nmax })
                }
            }
        }
        Command::Oracle { graph: gin, components, human } => {
            let job = Job::Oracle {
                graph: gin.required()?,
                components: components.as_deref().map(graph_list).transpose()?.unwrap_or_default(),
            };
            if human {
                Action::Oracle(job)
            } else {
                Action::Run(job)
            }
        }
    })
}

fn meta() -> Value {
    let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({ "tool": "ramsey-forge", "version": env!("CARGO_PKG_VERSION"), "timestamp_unix": ts })
}

fn emit(mut doc: Value, global: &Global) -> Result<(), String> {
    if global.no_meta {
        verify::strip_keys(&mut doc, &["wall_time_ms"]);
    } else {
        doc["meta"] = meta();
    }
    let text = if global.compact {
        serde_json::to_string(&doc)
    } else {
        serde_json::to_string_pretty(&doc)
    }
    .expect("JSON values serialize");
    if let Some(path) = &global.emit_certificate {
        std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("stdout: {e}")),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let global = cli.global;
    let table = match &global.table {
        Some(p) => Some(KnownValuesTable::from_json(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?),
        None => None,
    };
    if global.jobs == 0 {
        return Err("--jobs must be at least 1".into());
    }
    if let Some(t) = global.time_limit {
        if !(t.is_finite() && t > 0.0) {
            return Err("--time-limit must be a positive number of seconds".into());
        }
    }
    let options = RunOptions { jobs: global.jobs, time_limit_secs: global.time_limit, allow_large: global.allow_large };
    let wrap = |job| Input { job, options: options.clone(), table: table.clone() };
    match build(cli.command, &global)? {
        Action::Run(job) => {
            let input = wrap(job);
            validate(&input)?;
            let Outcome { mut body, code } = compute(&input)?;
            body["input"] = serde_json::to_value(&input).expect("inputs serialize");
            emit(body, &global)?;
            Ok(code)
        }
        Action::VerifyDocument(doc) => {
            let Outcome { body, code } = verify::verify_document(&doc)?;
            emit(body, &global)?;
            Ok(code)
        }
        Action::Oracle(job) => {
            let input = wrap(job);
            validate(&input)?;
            let Outcome { body, code } = compute(&input)?;
            let _ = write!(std::io::stdout().lock(), "{}", render::oracle_tables(&body));
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {}", msg.lines().next().unwrap_or(&msg));
            ExitCode::from(2)
        }
    }
}
