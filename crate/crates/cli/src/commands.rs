//! The six subcommands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

use quark::forest::{build_forest, node_role_profiles, role_aware_quarks, Aggregation};
use quark::metrics::{average_motif_degree, cluster_agreement, edge_density, motif_conductance, Subgraph};
use quark::oracle::compare;
use quark::peel::{quark_decompose, role_aware_decompose, PeelOptions};
use quark::{EdgeKind, Graph, MInstance, MKind, MotifEngine, MotifSpec, NodeId, QuarkError};
use serde::{Deserialize, Serialize};

use crate::run::{assign_largest, emit, load, open, single, CliError, CliResult, Manifest, Timer};
use crate::{AggregationArg, Assign, BuildArgs, CountArgs, DecomposeArgs, MetricsArgs, RolesArgs, VerifyArgs};

fn json_bytes(value: &impl Serialize) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn edge_kind(graph: &Graph, m: u32) -> String {
    let e = graph.edge(m);
    if graph.is_undirected() {
        "und".into()
    } else if let Some(s) = e.sign {
        s.symbol().to_string()
    } else if e.kind == EdgeKind::Bidirectional {
        "bi".into()
    } else {
        "uni".into()
    }
}

/// Leading CSV columns naming an `M` instance.
fn instance_header(kind: MKind) -> &'static str {
    match kind {
        MKind::VanillaNode => "node",
        MKind::VanillaEdge => "src,dst,kind",
        MKind::VanillaTriangle => "a,b,c",
    }
}

fn instance_cells(engine: &MotifEngine<'_>, m: u32) -> String {
    let g = engine.graph();
    let names: Vec<&str> = engine.instance_nodes(m).into_iter().map(|v| g.name(v)).collect();
    match engine.spec().m_kind {
        MKind::VanillaEdge => format!("{},{},{}", names[0], names[1], edge_kind(g, m)),
        _ => names.join(","),
    }
}

fn describe_instance(graph: &Graph, inst: &MInstance) -> String {
    match *inst {
        MInstance::Node(v) => format!("node {}", graph.name(v)),
        MInstance::Edge(e) => {
            let e = graph.edge(e);
            format!("edge {} {}", graph.name(e.src), graph.name(e.dst))
        }
        MInstance::Triangle(t) => format!("triangle {} {} {}", graph.name(t[0]), graph.name(t[1]), graph.name(t[2])),
    }
}

fn float(x: f64) -> String {
    format!("{x}")
}

pub fn count(a: CountArgs) -> CliResult<()> {
    let mut timer = Timer::start();
    let mut manifest = Manifest::new("count", &a)?;
    let loaded = load(&a.graph, &a.motif, &mut manifest)?;
    let mut csv = String::from("motif,count,max_degree,sum_degree");
    csv.push_str(if a.max_k { ",max_k\n" } else { "\n" });
    let mut counts = BTreeMap::new();
    for spec in &loaded.specs {
        timer.enter("count");
        let engine = MotifEngine::new(&loaded.graph, spec)?;
        let d = engine.motif_degrees();
        let total = d.total() / spec.t as u64;
        let max = d.degrees.iter().copied().max().unwrap_or(0);
        write!(csv, "{},{total},{max},{}", spec.n_class, d.total()).unwrap();
        if a.max_k {
            timer.enter("peel");
            write!(csv, ",{}", quark_decompose(&engine, &PeelOptions::default()).max_k()).unwrap();
        }
        csv.push('\n');
        counts.insert(spec.n_class.to_string(), total);
    }
    manifest.count("motifs", counts);
    emit(a.output.out.as_deref(), csv.as_bytes())?;
    manifest.write(&a.output, &mut timer)
}

pub fn decompose(a: DecomposeArgs) -> CliResult<()> {
    let mut timer = Timer::start();
    let mut manifest = Manifest::new("decompose", &a)?;
    let loaded = load(&a.graph, &a.motif, &mut manifest)?;
    let spec = single(&loaded.specs)?;
    timer.enter("count");
    let engine = MotifEngine::new(&loaded.graph, spec)?;
    timer.enter("peel");
    let numbers = quark_decompose(&engine, &PeelOptions::default());
    let role = a.role_aware.then(|| role_aware_decompose(&engine, &PeelOptions::default()));

    let mut csv = String::new();
    let mut header = format!("{},K", instance_header(spec.m_kind));
    if let Some(r) = &role {
        let names = spec.orbits().orbit_names();
        writeln!(csv, "# motif {} template {}", spec.n_class, spec.template().describe()).unwrap();
        for (i, name) in names.iter().enumerate() {
            writeln!(csv, "# K_{}: orbit {i} (first position {name})", i + 1).unwrap();
            write!(header, ",K_{}", i + 1).unwrap();
        }
        manifest.count("multi_role_instances", (0..r.len() as u32).filter(|&m| r.is_multi_role(m)).count());
    }
    csv.push_str(&header);
    csv.push('\n');
    for m in 0..engine.m_count() as u32 {
        write!(csv, "{},{}", instance_cells(&engine, m), numbers.get(m)).unwrap();
        if let Some(r) = &role {
            for k in r.row(m) {
                write!(csv, ",{k}").unwrap();
            }
        }
        csv.push('\n');
    }
    manifest.count("m_instances", engine.m_count());
    manifest.count("n_instances", numbers.degrees.iter().map(|&d| d as u64).sum::<u64>() / spec.t as u64);
    manifest.count("max_k", numbers.max_k());
    emit(a.output.out.as_deref(), csv.as_bytes())?;
    manifest.write(&a.output, &mut timer)
}

#[derive(Serialize, Deserialize)]
struct QuarkMetrics {
    avg_motif_degree: f64,
    /// Absent when the quark spans every node.
    motif_conductance: Option<f64>,
    edge_density: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct QuarkDoc {
    id: usize,
    k: u32,
    parent: Option<usize>,
    children: Vec<usize>,
    leaf: bool,
    maximum: bool,
    nodes: Vec<String>,
    num_members: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    metrics: Option<QuarkMetrics>,
}

#[derive(Serialize, Deserialize)]
struct ForestDoc {
    motif: String,
    m: String,
    max_k: u32,
    quarks: Vec<QuarkDoc>,
    leaves: Vec<usize>,
}

fn quark_metrics(engine: &MotifEngine<'_>, nodes: &[NodeId]) -> CliResult<QuarkMetrics> {
    let g = engine.graph();
    let s = Subgraph::new(g, nodes.iter().copied());
    let optional = |r: quark::Result<f64>| match r {
        Ok(x) => Ok(Some(x)),
        Err(QuarkError::Domain(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(QuarkMetrics {
        avg_motif_degree: average_motif_degree(engine, &s)?,
        motif_conductance: optional(motif_conductance(engine, &s))?,
        edge_density: optional(edge_density(g, &s))?,
    })
}

pub fn build(a: BuildArgs) -> CliResult<()> {
    let mut timer = Timer::start();
    let mut manifest = Manifest::new("build", &a)?;
    if a.assign.is_some() && a.partition.is_none() {
        return Err(QuarkError::Config("--assign needs --partition".into()).into());
    }
    let loaded = load(&a.graph, &a.motif, &mut manifest)?;
    let spec = single(&loaded.specs)?;
    let g = &loaded.graph;
    timer.enter("count");
    let engine = MotifEngine::new(g, spec)?;
    timer.enter("peel");
    let numbers = quark_decompose(&engine, &PeelOptions::default());
    timer.enter("build");
    let forest = build_forest(&engine, &numbers)?;
    let node_sets: Vec<Vec<NodeId>> = (0..forest.len()).map(|id| forest.nodes(&engine, id)).collect();
    let leaves: Vec<usize> = forest
        .quarks()
        .iter()
        .filter(|q| q.is_leaf() && node_sets[q.id].len() >= a.min_nodes)
        .map(|q| q.id)
        .collect();
    timer.enter("metrics");
    let mut quarks = Vec::with_capacity(forest.len());
    for q in forest.quarks() {
        let metrics = if a.no_metrics { None } else { Some(quark_metrics(&engine, &node_sets[q.id])?) };
        quarks.push(QuarkDoc {
            id: q.id,
            k: q.k,
            parent: q.parent,
            children: q.children.clone(),
            leaf: q.is_leaf(),
            maximum: forest.is_maximum(q.id),
            nodes: node_sets[q.id].iter().map(|&v| g.name(v).to_string()).collect(),
            num_members: q.num_members,
            metrics,
        });
    }
    timer.enter("build");
    let doc = ForestDoc { motif: spec.n_class.to_string(), m: spec.m_kind.name().into(), max_k: forest.max_k(), quarks, leaves };
    if a.assign == Some(Assign::Largest) {
        let partition = assign_largest(doc.quarks.iter().map(|q| (q.id, q.k, q.nodes.as_slice())), a.min_nodes);
        let mut csv = String::from("node,quark\n");
        for (v, id) in &partition {
            writeln!(csv, "{v},{id}").unwrap();
        }
        manifest.count("assigned_nodes", partition.len());
        emit(a.partition.as_deref(), csv.as_bytes())?;
    }
    manifest.count("quarks", doc.quarks.len());
    manifest.count("leaves", doc.leaves.len());
    manifest.count("max_k", doc.max_k);
    emit(a.output.out.as_deref(), &json_bytes(&doc)?)?;
    manifest.write(&a.output, &mut timer)
}

/// Reads `node class` lines.
fn read_truth(reader: impl BufRead) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(QuarkError::Parse { line: i + 1, message: "expected `node class`".into() }.into());
        }
        out.insert(tokens[0].to_string(), tokens[1].to_string());
    }
    Ok(out)
}

pub fn metrics(a: MetricsArgs) -> CliResult<()> {
    let mut timer = Timer::start();
    let mut manifest = Manifest::new("metrics", &a)?;
    let loaded = load(&a.graph, &a.motif, &mut manifest)?;
    let spec = single(&loaded.specs)?;
    manifest.input(&a.forest);
    let doc: ForestDoc = serde_json::from_reader(open(&a.forest)?)?;
    if doc.motif != spec.n_class.to_string() || doc.m != spec.m_kind.name() {
        return Err(QuarkError::Config(format!(
            "forest was built for ({}, {}), not {spec}",
            doc.m, doc.motif
        ))
        .into());
    }
    let g = &loaded.graph;

    if let Some(path) = &a.truth {
        manifest.input(path);
        let truth = read_truth(open(path)?)?;
        timer.enter("metrics");
        let partition = assign_largest(doc.quarks.iter().map(|q| (q.id, q.k, q.nodes.as_slice())), a.min_nodes);
        let scores = cluster_agreement(&partition, &truth)?;
        manifest.count("clusters", partition.values().collect::<std::collections::BTreeSet<_>>().len());
        let out = serde_json::json!({ "motif": doc.motif, "min_nodes": a.min_nodes, "scores": scores });
        emit(a.output.out.as_deref(), &json_bytes(&out)?)?;
        return manifest.write(&a.output, &mut timer);
    }

    timer.enter("count");
    let engine = MotifEngine::new(g, spec)?;
    timer.enter("metrics");
    let labels: Vec<String> = g.label_names().to_vec();
    let mut csv = String::from("id,k,nodes,avg_motif_degree,motif_conductance,edge_density");
    for l in &labels {
        write!(csv, ",ratio_{l}").unwrap();
    }
    csv.push('\n');
    for q in &doc.quarks {
        let nodes = q
            .nodes
            .iter()
            .map(|name| g.node_by_name(name).ok_or_else(|| QuarkError::Format(format!("forest node {name:?} is not in the graph"))))
            .collect::<quark::Result<Vec<NodeId>>>()?;
        let m = quark_metrics(&engine, &nodes)?;
        let opt = |x: Option<f64>| x.map(float).unwrap_or_default();
        write!(
            csv,
            "{},{},{},{},{},{}",
            q.id,
            q.k,
            nodes.len(),
            float(m.avg_motif_degree),
            opt(m.motif_conductance),
            opt(m.edge_density)
        )
        .unwrap();
        for l in 0..labels.len() {
            let hits = nodes.iter().filter(|&&v| g.label(v).is_some_and(|x| x as usize == l)).count();
            write!(csv, ",{}", float(hits as f64 / nodes.len().max(1) as f64)).unwrap();
        }
        csv.push('\n');
    }
    manifest.count("quarks", doc.quarks.len());
    emit(a.output.out.as_deref(), csv.as_bytes())?;
    manifest.write(&a.output, &mut timer)
}

pub fn roles(a: RolesArgs) -> CliResult<()> {
    let mut timer = Timer::start();
    let aggregation = match a.aggregation {
        AggregationArg::Mean => Aggregation::Mean,
        AggregationArg::Sum => Aggregation::Sum,
    };
    let mut manifest = Manifest::new("roles", &a)?;
    let loaded = load(&a.graph, &a.motif, &mut manifest)?;
    let spec = single(&loaded.specs)?;
    let g = &loaded.graph;
    timer.enter("count");
    let engine = MotifEngine::new(g, spec)?;
    timer.enter("peel");
    let role = role_aware_decompose(&engine, &PeelOptions::default());
    timer.enter("metrics");
    let profiles = node_role_profiles(&engine, &role, aggregation)?;

    let mut csv = String::new();
    writeln!(csv, "# motif {} template {}", spec.n_class, spec.template().describe()).unwrap();
    csv.push_str("node,dominant");
    for name in &profiles.orbit_names {
        write!(csv, ",orbit_{name}").unwrap();
    }
    csv.push('\n');
    for v in 0..g.node_count() as NodeId {
        let row = profiles.row(v);
        let dominant = if row.iter().all(|&x| x == 0.0) { "" } else { &profiles.orbit_names[profiles.dominant[v as usize]] };
        write!(csv, "{},{dominant}", g.name(v)).unwrap();
        for &x in row {
            write!(csv, ",{}", float(x)).unwrap();
        }
        csv.push('\n');
    }
    manifest.count("multi_role_edges", (0..role.len() as u32).filter(|&m| role.is_multi_role(m)).count());

    if let (Some(level), Some(path)) = (a.level, &a.quarks) {
        timer.enter("build");
        let quarks = role_aware_quarks(&engine, &role, level)?;
        let orbit_names = spec.orbits().orbit_names();
        let docs: Vec<serde_json::Value> = quarks
            .iter()
            .map(|q| {
                let members: Vec<serde_json::Value> = q
                    .members
                    .iter()
                    .map(|&(m, o)| {
                        let e = g.edge(m);
                        serde_json::json!({ "src": g.name(e.src), "dst": g.name(e.dst), "orbit": orbit_names[o as usize] })
                    })
                    .collect();
                serde_json::json!({ "k": q.k, "members": members })
            })
            .collect();
        manifest.count("role_quarks", docs.len());
        emit(Some(path), &json_bytes(&serde_json::json!({ "motif": spec.n_class.to_string(), "level": level, "quarks": docs }))?)?;
    }
    emit(a.output.out.as_deref(), csv.as_bytes())?;
    manifest.write(&a.output, &mut timer)
}

pub fn verify(a: VerifyArgs) -> CliResult<()> {
    let mut timer = Timer::start();
    let mut manifest = Manifest::new("verify", &a)?;
    let loaded = load(&a.graph, &a.motif, &mut manifest)?;
    let g = &loaded.graph;
    let mut report = String::new();
    let mut failure = None;
    for spec in &loaded.specs {
        match verify_one(g, spec, a.seed, a.shuffles, &mut timer)? {
            None => writeln!(report, "ok {spec}").unwrap(),
            Some(msg) => {
                writeln!(report, "MISMATCH {spec}: {msg}").unwrap();
                failure = Some(format!("{spec}: {msg}"));
                break;
            }
        }
    }
    manifest.count("specs_checked", report.lines().count());
    emit(a.output.out.as_deref(), report.as_bytes())?;
    manifest.write(&a.output, &mut timer)?;
    match failure {
        Some(msg) => Err(CliError::Mismatch(msg)),
        None => Ok(()),
    }
}

fn verify_one(g: &Graph, spec: &MotifSpec, seed: u64, shuffles: u64, timer: &mut Timer) -> CliResult<Option<String>> {
    timer.enter("count");
    let engine = MotifEngine::new(g, spec)?;
    timer.enter("peel");
    let numbers = quark_decompose(&engine, &PeelOptions::default());
    let role = role_aware_decompose(&engine, &PeelOptions::default());
    timer.enter("build");
    let forest = build_forest(&engine, &numbers)?;
    timer.enter("metrics");
    if let Some(m) = compare(&engine, &numbers, Some(&role), Some(&forest))? {
        return Ok(Some(format!(
            "{} at {}: engine {:?}, oracle {:?}",
            m.what,
            describe_instance(g, &m.instance),
            m.engine,
            m.oracle
        )));
    }
    timer.enter("peel");
    for s in seed..seed.saturating_add(shuffles) {
        let opts = PeelOptions { shuffle_seed: Some(s) };
        let shuffled = quark_decompose(&engine, &opts);
        if let Some(m) = (0..numbers.len() as u32).find(|&m| shuffled.get(m) != numbers.get(m)) {
            return Ok(Some(format!(
                "quark number under shuffle seed {s} at {}: {} vs {}",
                instance_cells(&engine, m),
                shuffled.get(m),
                numbers.get(m)
            )));
        }
        let shuffled = role_aware_decompose(&engine, &opts);
        if let Some(m) = (0..role.len() as u32).find(|&m| shuffled.row(m) != role.row(m)) {
            return Ok(Some(format!(
                "role-aware numbers under shuffle seed {s} at {}: {:?} vs {:?}",
                instance_cells(&engine, m),
                shuffled.row(m),
                role.row(m)
            )));
        }
    }
    Ok(None)
}
