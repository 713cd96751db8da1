//! Shared plumbing: errors and exit codes, graph loading, motif resolution,
//! phase timing and the run manifest.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use quark::graph::{induced_label_filter, load_directed_edge_list, load_node_labels, load_signed_edge_list, load_undirected_edge_list};
use quark::motif::{LabeledCliqueClass, MKind, NClass};
use quark::{Graph, MotifSpec, QuarkError};
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::{GraphArgs, MArg, Mode, MotifArgs, OutputArgs};

pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_IO: u8 = 66;
pub const EXIT_INTERNAL: u8 = 70;
pub const EXIT_CONFIG: u8 = 78;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Quark(#[from] QuarkError),
    #[error("oracle mismatch: {0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => EXIT_MISMATCH,
            CliError::Quark(e) => match e {
                QuarkError::Parse { .. } | QuarkError::Format(_) | QuarkError::UnknownNodes(_) => EXIT_DATA,
                QuarkError::Io(_) => EXIT_IO,
                QuarkError::Config(_) | QuarkError::Domain(_) => EXIT_CONFIG,
                QuarkError::Consistency(_) | QuarkError::TooLarge(_) => EXIT_INTERNAL,
            },
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Quark(QuarkError::Io(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Quark(QuarkError::Io(e.into()))
        } else {
            CliError::Quark(QuarkError::Format(e.to_string()))
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

/// Writes `bytes` to `path`, or to stdout without a path.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Wall-clock accounting where every instant belongs to exactly one phase,
/// so the phases sum to the total.
pub struct Timer {
    start: Instant,
    mark: Instant,
    current: usize,
    spent: [f64; 5],
}

pub const PHASES: [&str; 5] = ["load", "count", "peel", "build", "metrics"];

impl Timer {
    pub fn start() -> Self {
        let now = Instant::now();
        Timer { start: now, mark: now, current: 0, spent: [0.0; 5] }
    }

    pub fn enter(&mut self, phase: &str) {
        let now = Instant::now();
        self.spent[self.current] += (now - self.mark).as_secs_f64();
        self.mark = now;
        self.current = PHASES.iter().position(|p| *p == phase).expect("known phase");
    }

    fn finish(&mut self) -> Map<String, Value> {
        let now = Instant::now();
        self.spent[self.current] += (now - self.mark).as_secs_f64();
        self.mark = now;
        let mut m = Map::new();
        for (name, s) in PHASES.iter().zip(self.spent) {
            m.insert(format!("{name}_s"), s.into());
        }
        m.insert("total_s".into(), (now - self.start).as_secs_f64().into());
        m
    }
}

#[derive(Serialize)]
struct InputFile {
    path: PathBuf,
    bytes: Option<u64>,
}

/// Run manifest written next to the output.
pub struct Manifest {
    command: &'static str,
    inputs: Vec<PathBuf>,
    config: Map<String, Value>,
    pub counts: Map<String, Value>,
}

impl Manifest {
    pub fn new(command: &'static str, config: impl Serialize) -> CliResult<Self> {
        let Value::Object(config) = serde_json::to_value(config)? else {
            unreachable!("argument structs serialize to objects")
        };
        Ok(Manifest { command, inputs: Vec::new(), config, counts: Map::new() })
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub fn count(&mut self, key: &str, value: impl Serialize) {
        self.counts.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    /// Writes the manifest to `--manifest`, else to `<out>.manifest.json`;
    /// runs printing to stdout without `--manifest` keep no manifest.
    pub fn write(mut self, output: &OutputArgs, timer: &mut Timer) -> CliResult<()> {
        let path = match (&output.manifest, &output.out) {
            (Some(p), _) => p.clone(),
            (None, Some(out)) => {
                let mut s = out.clone().into_os_string();
                s.push(".manifest.json");
                PathBuf::from(s)
            }
            (None, None) => return Ok(()),
        };
        self.config.insert("threads".into(), rayon::current_num_threads().into());
        let inputs: Vec<InputFile> = self
            .inputs
            .iter()
            .map(|p| InputFile { path: p.clone(), bytes: std::fs::metadata(p).ok().map(|m| m.len()) })
            .collect();
        let doc = serde_json::json!({
            "tool": "quark",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs": inputs,
            "config": self.config,
            "counts": self.counts,
            "timings": timer.finish(),
        });
        let mut bytes = serde_json::to_vec_pretty(&doc)?;
        bytes.push(b'\n');
        emit(Some(&path), &bytes)
    }
}

/// Motif classes named by `--motif`, resolved before any input is read.
/// `None` stands for "all", which in labeled mode depends on the labels.
pub fn parse_classes(motif: &MotifArgs, mode: Mode) -> CliResult<Option<Vec<NClass>>> {
    let name = motif.motif.trim();
    if name == "all" {
        return Ok(match mode {
            Mode::Directed => Some(NClass::all_directed()),
            Mode::Signed => Some(NClass::all_signed()),
            Mode::Labeled => None,
        });
    }
    let class: NClass = name.parse()?;
    let fits = match mode {
        Mode::Directed => matches!(class, NClass::Directed(_)),
        Mode::Signed => matches!(class, NClass::Signed(_)),
        Mode::Labeled => matches!(class, NClass::Clique(_)),
    };
    if !fits {
        return Err(QuarkError::Config(format!("motif {class} does not apply in {} mode", format!("{mode:?}").to_lowercase())).into());
    }
    let spec = make_spec(&class, motif.m)?;
    Ok(Some(vec![spec.n_class]))
}

pub fn make_spec(class: &NClass, m: MArg) -> CliResult<MotifSpec> {
    let kind = match m {
        MArg::Auto => MotifSpec::default_m_kind(class),
        MArg::Node => MKind::VanillaNode,
        MArg::Edge => MKind::VanillaEdge,
        MArg::Triangle => MKind::VanillaTriangle,
    };
    Ok(MotifSpec::new(kind, class.clone())?)
}

/// Vanilla cliques plus every label multiset of size 3 and 4 over the
/// graph's labels.
fn labeled_classes(graph: &Graph) -> CliResult<Vec<NClass>> {
    let labels = graph.label_names();
    let mut out = vec![NClass::Clique(LabeledCliqueClass::vanilla(3)?), NClass::Clique(LabeledCliqueClass::vanilla(4)?)];
    for size in [3usize, 4] {
        let mut idx = vec![0usize; size];
        loop {
            let ls: Vec<&str> = idx.iter().map(|&i| labels[i].as_str()).collect();
            out.push(NClass::Clique(LabeledCliqueClass::labeled(size as u8, ls)?));
            // next non-decreasing index vector
            let Some(pos) = (0..size).rev().find(|&p| idx[p] + 1 < labels.len()) else { break };
            let v = idx[pos] + 1;
            idx[pos..].iter_mut().for_each(|x| *x = v);
        }
    }
    Ok(out)
}

pub struct Loaded {
    pub graph: Graph,
    pub specs: Vec<MotifSpec>,
}

/// Loads the graph (and labels), resolves the motif list and applies the
/// optional label filter.
pub fn load(g: &GraphArgs, motif: &MotifArgs, manifest: &mut Manifest) -> CliResult<Loaded> {
    let classes = parse_classes(motif, g.mode)?;
    if g.mode == Mode::Labeled && g.labels.is_none() {
        return Err(QuarkError::Config("labeled mode needs --labels".into()).into());
    }
    if g.no_merge && g.mode != Mode::Directed {
        return Err(QuarkError::Config("--no-merge only applies in directed mode".into()).into());
    }
    manifest.input(&g.graph);
    let source = open(&g.graph)?;
    let (mut graph, report) = match g.mode {
        Mode::Directed => load_directed_edge_list(source, !g.no_merge)?,
        Mode::Signed => load_signed_edge_list(source)?,
        Mode::Labeled => load_undirected_edge_list(source)?,
    };
    if let Some(path) = &g.labels {
        manifest.input(path);
        graph = load_node_labels(graph, open(path)?)?;
    }
    let classes = match classes {
        Some(c) => c,
        None => labeled_classes(&graph)?,
    };
    let specs = classes.iter().map(|c| make_spec(c, motif.m)).collect::<CliResult<Vec<_>>>()?;
    if g.filter_labels {
        if g.mode != Mode::Labeled || specs.len() != 1 {
            return Err(QuarkError::Config("--filter-labels needs labeled mode and a single motif".into()).into());
        }
        let NClass::Clique(c) = &specs[0].n_class else { unreachable!("labeled mode admits cliques only") };
        if !c.is_vanilla() {
            let keep: Vec<&str> = c.labels().iter().map(String::as_str).collect();
            graph = induced_label_filter(&graph, &keep)?;
        }
    }
    for spec in &specs {
        spec.check_compatible(&graph)?;
    }
    manifest.count("graph", graph.summary());
    manifest.count("load", &report);
    if report.reciprocal_kept > 0 {
        eprintln!("warning: {} reciprocal arc pairs kept as separate edges", report.reciprocal_kept);
    }
    Ok(Loaded { graph, specs })
}

/// Single motif required by the per-instance commands.
pub fn single(specs: &[MotifSpec]) -> CliResult<&MotifSpec> {
    match specs {
        [one] => Ok(one),
        _ => Err(QuarkError::Config("this command takes a single motif, not \"all\"".into()).into()),
    }
}

/// Each node goes to the quark with the most nodes among those containing it
/// (ties: higher k, then lower id). Quarks below `min_nodes` are ignored.
pub fn assign_largest<'a>(quarks: impl IntoIterator<Item = (usize, u32, &'a [String])>, min_nodes: usize) -> std::collections::BTreeMap<String, usize> {
    let mut best: std::collections::BTreeMap<String, (usize, u32, usize)> = Default::default();
    for (id, k, nodes) in quarks {
        if nodes.len() < min_nodes {
            continue;
        }
        for v in nodes {
            let better = match best.get(v) {
                None => true,
                Some(&(size, bk, bid)) => (nodes.len(), k, std::cmp::Reverse(id)) > (size, bk, std::cmp::Reverse(bid)),
            };
            if better {
                best.insert(v.clone(), (nodes.len(), k, id));
            }
        }
    }
    best.into_iter().map(|(v, (_, _, id))| (v, id)).collect()
}
