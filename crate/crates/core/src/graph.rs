//! In-memory directed graph with atomic bidirectional edges, optional edge
//! signs and optional categorical node labels.
//!
//! Adjacency is stored once per node as a single sorted neighbor sequence
//! whose entries carry the [`Link`] seen from that node. The classic
//! `out_uni` / `in_uni` / `bidir` views are derived from it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{QuarkError, Result};

pub type NodeId = u32;
pub type EdgeId = u32;
pub type LabelId = u32;

pub(crate) const NO_EDGE: EdgeId = EdgeId::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeKind {
    Unidirectional,
    Bidirectional,
}

/// A stored edge. Bidirectional edges are kept once with `src < dst`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: EdgeKind,
    pub sign: Option<Sign>,
}

/// Relation between a node and one of its neighbors, seen from the node.
///
/// `Both` only occurs when reciprocal arcs were not merged (signed graphs, or
/// directed graphs loaded without merging); it carries the sign of the
/// outgoing and of the incoming arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Link {
    Out(Option<Sign>),
    In(Option<Sign>),
    Bidir,
    Both(Option<Sign>, Option<Sign>),
}

impl Link {
    /// The same relation seen from the other endpoint.
    pub fn flip(self) -> Link {
        match self {
            Link::Out(s) => Link::In(s),
            Link::In(s) => Link::Out(s),
            Link::Bidir => Link::Bidir,
            Link::Both(o, i) => Link::Both(i, o),
        }
    }

    /// Dense code in `0..16`, used for lookup tables.
    pub fn code(self) -> usize {
        fn s(x: Option<Sign>) -> usize {
            match x {
                None => 0,
                Some(Sign::Plus) => 1,
                Some(Sign::Minus) => 2,
            }
        }
        match self {
            Link::Out(x) => s(x),
            Link::In(x) => 3 + s(x),
            Link::Bidir => 6,
            Link::Both(o, i) => 7 + 3 * s(o) + s(i),
        }
    }

    pub fn from_code(code: usize) -> Link {
        fn s(x: usize) -> Option<Sign> {
            match x {
                0 => None,
                1 => Some(Sign::Plus),
                _ => Some(Sign::Minus),
            }
        }
        match code {
            0..=2 => Link::Out(s(code)),
            3..=5 => Link::In(s(code - 3)),
            6 => Link::Bidir,
            _ => Link::Both(s((code - 7) / 3), s((code - 7) % 3)),
        }
    }

    pub const CODES: usize = 16;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adj {
    pub nbr: NodeId,
    pub link: Link,
    /// Edge carrying the outgoing arc (or the bidirectional edge).
    pub out_edge: EdgeId,
    /// Edge carrying the incoming arc (or the bidirectional edge).
    pub in_edge: EdgeId,
}

impl Adj {
    /// The single edge joining the pair, if the pair is joined by exactly one edge.
    pub fn single_edge(&self) -> Option<EdgeId> {
        match self.link {
            Link::Out(_) => Some(self.out_edge),
            Link::In(_) => Some(self.in_edge),
            Link::Bidir => Some(self.out_edge),
            Link::Both(..) => None,
        }
    }
}

/// Counters collected while loading.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub lines: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
    pub reciprocal_merged: usize,
    pub reciprocal_kept: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub unidirectional: usize,
    pub bidirectional: usize,
    pub positive: usize,
    pub negative: usize,
    pub labels: BTreeMap<String, usize>,
}

#[derive(Clone, Debug)]
pub struct Graph {
    names: Vec<String>,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adj: Vec<Adj>,
    labels: Option<Vec<Option<LabelId>>>,
    label_names: Vec<String>,
    signed: bool,
    undirected: bool,
    /// Node ids in the graph this one was filtered from.
    parent_ids: Option<Vec<NodeId>>,
}

impl Graph {
    /// Builds a graph from canonical edges. Edges must already be simple:
    /// no self-loops, bidirectional edges stored with `src < dst`, and at
    /// most one arc per ordered pair.
    pub fn from_edges(names: Vec<String>, mut edges: Vec<Edge>, signed: bool) -> Graph {
        let n = names.len();
        edges.sort_unstable_by_key(|e| (e.src.min(e.dst), e.src.max(e.dst), e.src));
        let mut deg = vec![0usize; n];
        for e in &edges {
            debug_assert!(e.src != e.dst);
            deg[e.src as usize] += 1;
            deg[e.dst as usize] += 1;
        }
        // reciprocal arcs share one adjacency slot, so this is an upper bound
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut slots: Vec<Option<Adj>> = vec![None; offsets[n]];
        for (id, e) in edges.iter().enumerate() {
            let id = id as EdgeId;
            let (a, b) = (e.src, e.dst);
            match e.kind {
                EdgeKind::Bidirectional => {
                    slots[fill[a as usize]] = Some(Adj { nbr: b, link: Link::Bidir, out_edge: id, in_edge: id });
                    fill[a as usize] += 1;
                    slots[fill[b as usize]] = Some(Adj { nbr: a, link: Link::Bidir, out_edge: id, in_edge: id });
                    fill[b as usize] += 1;
                }
                EdgeKind::Unidirectional => {
                    slots[fill[a as usize]] =
                        Some(Adj { nbr: b, link: Link::Out(e.sign), out_edge: id, in_edge: NO_EDGE });
                    fill[a as usize] += 1;
                    slots[fill[b as usize]] =
                        Some(Adj { nbr: a, link: Link::In(e.sign), out_edge: NO_EDGE, in_edge: id });
                    fill[b as usize] += 1;
                }
            }
        }
        let mut adj = Vec::with_capacity(offsets[n]);
        let mut new_offsets = vec![0usize; n + 1];
        for v in 0..n {
            let mut list: Vec<Adj> = slots[offsets[v]..offsets[v + 1]].iter().map(|s| s.unwrap()).collect();
            list.sort_unstable_by_key(|a| a.nbr);
            let mut merged: Vec<Adj> = Vec::with_capacity(list.len());
            for a in list {
                match merged.last_mut() {
                    Some(last) if last.nbr == a.nbr => {
                        // two opposite arcs between the same pair
                        let (out_sign, in_sign, out_edge, in_edge) = match (last.link, a.link) {
                            (Link::Out(o), Link::In(i)) => (o, i, last.out_edge, a.in_edge),
                            (Link::In(i), Link::Out(o)) => (o, i, a.out_edge, last.in_edge),
                            _ => unreachable!("duplicate arc survived canonicalization"),
                        };
                        *last = Adj { nbr: a.nbr, link: Link::Both(out_sign, in_sign), out_edge, in_edge };
                    }
                    _ => merged.push(a),
                }
            }
            adj.extend_from_slice(&merged);
            new_offsets[v + 1] = adj.len();
        }
        adj.shrink_to_fit();
        Graph {
            names,
            edges,
            offsets: new_offsets,
            adj,
            labels: None,
            label_names: Vec::new(),
            signed,
            undirected: false,
            parent_ids: None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id as usize]
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        // linear scan is fine for the places that use it (tests, CLI lookups)
        self.names.iter().position(|n| n == name).map(|i| i as NodeId)
    }

    pub fn name_index(&self) -> HashMap<&str, NodeId> {
        self.names.iter().enumerate().map(|(i, n)| (n.as_str(), i as NodeId)).collect()
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    /// True when the graph was loaded as an undirected graph (every edge
    /// stored as bidirectional).
    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn neighbors(&self, v: NodeId) -> &[Adj] {
        &self.adj[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn link(&self, u: NodeId, v: NodeId) -> Option<&Adj> {
        let list = self.neighbors(u);
        list.binary_search_by_key(&v, |a| a.nbr).ok().map(|i| &list[i])
    }

    pub fn connected(&self, u: NodeId, v: NodeId) -> bool {
        self.link(u, v).is_some()
    }

    pub fn out_uni(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors(v).iter().filter(|a| matches!(a.link, Link::Out(_) | Link::Both(..))).map(|a| a.nbr)
    }

    pub fn in_uni(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors(v).iter().filter(|a| matches!(a.link, Link::In(_) | Link::Both(..))).map(|a| a.nbr)
    }

    pub fn bidir(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors(v).iter().filter(|a| a.link == Link::Bidir).map(|a| a.nbr)
    }

    pub fn label(&self, v: NodeId) -> Option<LabelId> {
        self.labels.as_ref().and_then(|l| l[v as usize])
    }

    pub fn label_name(&self, id: LabelId) -> &str {
        &self.label_names[id as usize]
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.label_names.iter().position(|l| l == name).map(|i| i as LabelId)
    }

    pub fn unlabeled_nodes(&self) -> Vec<NodeId> {
        match &self.labels {
            None => (0..self.node_count() as NodeId).collect(),
            Some(l) => (0..l.len()).filter(|&v| l[v].is_none()).map(|v| v as NodeId).collect(),
        }
    }

    /// Node ids in the graph this one was derived from by
    /// [`induced_label_filter`], if any.
    pub fn parent_ids(&self) -> Option<&[NodeId]> {
        self.parent_ids.as_deref()
    }

    pub fn summary(&self) -> GraphSummary {
        let bidirectional = self.edges.iter().filter(|e| e.kind == EdgeKind::Bidirectional).count();
        let positive = self.edges.iter().filter(|e| e.sign == Some(Sign::Plus)).count();
        let negative = self.edges.iter().filter(|e| e.sign == Some(Sign::Minus)).count();
        let mut labels = BTreeMap::new();
        if let Some(l) = &self.labels {
            for id in l.iter().flatten() {
                *labels.entry(self.label_names[*id as usize].clone()).or_insert(0) += 1;
            }
        }
        GraphSummary {
            nodes: self.node_count(),
            edges: self.edge_count(),
            unidirectional: self.edge_count() - bidirectional,
            bidirectional,
            positive,
            negative,
            labels,
        }
    }

    /// Serializes the edges in the loader's text format. Bidirectional
    /// edges are written as two reciprocal lines, so reloading with
    /// merging reproduces them.
    pub fn to_edge_list(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for e in &self.edges {
            let (a, b) = (self.name(e.src), self.name(e.dst));
            match (e.kind, e.sign) {
                (_, Some(s)) => writeln!(out, "{a} {b} {}1", s.symbol()).unwrap(),
                (EdgeKind::Bidirectional, None) if !self.undirected => {
                    writeln!(out, "{a} {b}\n{b} {a}").unwrap();
                }
                _ => writeln!(out, "{a} {b}").unwrap(),
            }
        }
        out
    }

    /// Checks the adjacency invariants by a full scan.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for u in 0..self.node_count() as NodeId {
            let list = self.neighbors(u);
            for w in list.windows(2) {
                if w[0].nbr >= w[1].nbr {
                    return Err(format!("neighbors of {u} not strictly sorted"));
                }
            }
            for a in list {
                if a.nbr == u {
                    return Err(format!("self-loop at {u}"));
                }
                let back = self.link(a.nbr, u).ok_or_else(|| format!("asymmetric pair {u}-{}", a.nbr))?;
                if back.link != a.link.flip() {
                    return Err(format!("link mismatch on {u}-{}", a.nbr));
                }
            }
        }
        for (id, e) in self.edges.iter().enumerate() {
            if e.kind == EdgeKind::Bidirectional && e.src >= e.dst {
                return Err(format!("bidirectional edge {id} not canonical"));
            }
            if self.signed != e.sign.is_some() {
                return Err(format!("edge {id} sign does not match graph mode"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.summary();
        write!(
            f,
            "Graph(|V|={}, |E|={}, bidirectional={}, unidirectional={})",
            s.nodes, s.edges, s.bidirectional, s.unidirectional
        )
    }
}

#[derive(Default)]
struct Interner {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as NodeId;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }
}

fn data_lines<R: BufRead>(source: R) -> impl Iterator<Item = Result<(usize, String)>> {
    source
        .lines()
        .enumerate()
        .map(|(i, line)| line.map(|l| (i + 1, l)).map_err(QuarkError::from))
        .filter(|r| match r {
            Ok((_, l)) => {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

/// Loads a directed edge list. With `merge_reciprocal`, a pair of opposite
/// arcs becomes one bidirectional edge.
pub fn load_directed_edge_list<R: BufRead>(source: R, merge_reciprocal: bool) -> Result<(Graph, LoadReport)> {
    let mut interner = Interner::default();
    let mut report = LoadReport::default();
    let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
    for item in data_lines(source) {
        let (line_no, line) = item?;
        report.lines += 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(QuarkError::Parse {
                line: line_no,
                message: format!("expected 2 tokens, found {}", tokens.len()),
            });
        }
        let u = interner.intern(tokens[0]);
        let v = interner.intern(tokens[1]);
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        arcs.push((u, v));
    }
    let before = arcs.len();
    arcs.sort_unstable();
    arcs.dedup();
    report.duplicates_dropped = before - arcs.len();

    let mut edges = Vec::with_capacity(arcs.len());
    for &(u, v) in &arcs {
        let reciprocal = arcs.binary_search(&(v, u)).is_ok();
        if reciprocal && merge_reciprocal {
            if u < v {
                edges.push(Edge { src: u, dst: v, kind: EdgeKind::Bidirectional, sign: None });
                report.reciprocal_merged += 1;
            }
        } else {
            if reciprocal && u < v {
                report.reciprocal_kept += 1;
            }
            edges.push(Edge { src: u, dst: v, kind: EdgeKind::Unidirectional, sign: None });
        }
    }
    Ok((Graph::from_edges(interner.names, edges, false), report))
}

/// Loads an undirected edge list; every edge is stored as bidirectional.
pub fn load_undirected_edge_list<R: BufRead>(source: R) -> Result<(Graph, LoadReport)> {
    let (g, mut report) = load_directed_edge_list(source, true)?;
    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|e| Edge { src: e.src.min(e.dst), dst: e.src.max(e.dst), kind: EdgeKind::Bidirectional, sign: None })
        .collect();
    let before = edges.len();
    edges.sort_unstable();
    edges.dedup();
    // an unmerged reciprocal arc pair and its twin collapse here
    report.reciprocal_merged += before - edges.len();
    let mut graph = Graph::from_edges(g.names, edges, false);
    graph.undirected = true;
    Ok((graph, report))
}

fn parse_sign(token: &str, line: usize) -> Result<Sign> {
    match token {
        "+1" | "+" | "1" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        other => Err(QuarkError::Parse { line, message: format!("unparsable sign token {other:?}") }),
    }
}

/// Loads a signed edge list (`u v s [timestamp]`). Repeated ordered pairs
/// keep the occurrence with the latest timestamp (ties: the later line), or
/// the first occurrence when the file has no timestamps. Reciprocal pairs
/// stay two unidirectional edges.
pub fn load_signed_edge_list<R: BufRead>(source: R) -> Result<(Graph, LoadReport)> {
    let mut interner = Interner::default();
    let mut report = LoadReport::default();
    let mut timestamped: Option<bool> = None;
    // (u, v) -> (timestamp, line order, sign)
    let mut chosen: HashMap<(NodeId, NodeId), (i64, usize, Sign)> = HashMap::new();
    for item in data_lines(source) {
        let (line_no, line) = item?;
        report.lines += 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let has_ts = match tokens.len() {
            3 => false,
            4 => true,
            2 => {
                return Err(QuarkError::Format(format!("line {line_no}: unsigned line in a signed edge list")));
            }
            n => {
                return Err(QuarkError::Parse { line: line_no, message: format!("expected 3 or 4 tokens, found {n}") })
            }
        };
        match timestamped {
            None => timestamped = Some(has_ts),
            Some(t) if t != has_ts => {
                return Err(QuarkError::Format(format!("line {line_no}: timestamp column present on some lines only")));
            }
            _ => {}
        }
        let sign = parse_sign(tokens[2], line_no)?;
        let ts = if has_ts {
            tokens[3].parse::<i64>().map_err(|_| QuarkError::Parse {
                line: line_no,
                message: format!("unparsable timestamp {:?}", tokens[3]),
            })?
        } else {
            0
        };
        let u = interner.intern(tokens[0]);
        let v = interner.intern(tokens[1]);
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        match chosen.get_mut(&(u, v)) {
            None => {
                chosen.insert((u, v), (ts, line_no, sign));
            }
            Some(slot) => {
                report.duplicates_dropped += 1;
                if has_ts && ts >= slot.0 {
                    *slot = (ts, line_no, sign);
                }
            }
        }
    }
    let mut edges: Vec<Edge> = chosen
        .iter()
        .map(|(&(u, v), &(_, _, s))| Edge { src: u, dst: v, kind: EdgeKind::Unidirectional, sign: Some(s) })
        .collect();
    edges.sort_unstable();
    report.reciprocal_kept = edges.iter().filter(|e| e.src < e.dst && chosen.contains_key(&(e.dst, e.src))).count();
    Ok((Graph::from_edges(interner.names, edges, true), report))
}

/// Attaches node labels read from `node label` lines.
pub fn load_node_labels<R: BufRead>(graph: Graph, source: R) -> Result<Graph> {
    let index = graph.name_index();
    let mut label_names: Vec<String> = graph.label_names.clone();
    let mut labels: Vec<Option<LabelId>> = graph.labels.clone().unwrap_or_else(|| vec![None; graph.node_count()]);
    let mut unknown = Vec::new();
    for item in data_lines(source) {
        let (line_no, line) = item?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(QuarkError::Parse {
                line: line_no,
                message: format!("expected `node label`, found {} tokens", tokens.len()),
            });
        }
        let Some(&v) = index.get(tokens[0]) else {
            unknown.push(line_no);
            continue;
        };
        let id = match label_names.iter().position(|l| l == tokens[1]) {
            Some(i) => i as LabelId,
            None => {
                label_names.push(tokens[1].to_string());
                (label_names.len() - 1) as LabelId
            }
        };
        match labels[v as usize] {
            Some(prev) if prev != id => {
                return Err(QuarkError::Format(format!(
                    "line {line_no}: node {} relabeled from {} to {}",
                    tokens[0], label_names[prev as usize], tokens[1]
                )));
            }
            _ => labels[v as usize] = Some(id),
        }
    }
    if !unknown.is_empty() {
        return Err(QuarkError::UnknownNodes(unknown));
    }
    let mut graph = graph;
    graph.labels = Some(labels);
    graph.label_names = label_names;
    Ok(graph)
}

/// Induced subgraph on the nodes whose label is in `keep`. Node ids are
/// remapped densely; [`Graph::parent_ids`] maps them back.
pub fn induced_label_filter(graph: &Graph, keep: &[&str]) -> Result<Graph> {
    let Some(labels) = &graph.labels else {
        return Err(QuarkError::Config("label filter requires a labeled graph".into()));
    };
    let wanted: Vec<bool> = graph.label_names.iter().map(|l| keep.contains(&l.as_str())).collect();
    let mut new_id = vec![NodeId::MAX; graph.node_count()];
    let mut parent_ids = Vec::new();
    for v in 0..graph.node_count() {
        if labels[v].is_some_and(|l| wanted[l as usize]) {
            new_id[v] = parent_ids.len() as NodeId;
            parent_ids.push(v as NodeId);
        }
    }
    let names = parent_ids.iter().map(|&v| graph.names[v as usize].clone()).collect();
    let edges = graph
        .edges
        .iter()
        .filter(|e| new_id[e.src as usize] != NodeId::MAX && new_id[e.dst as usize] != NodeId::MAX)
        .map(|e| Edge { src: new_id[e.src as usize], dst: new_id[e.dst as usize], ..*e })
        .collect();
    let mut sub = Graph::from_edges(names, edges, graph.signed);
    sub.undirected = graph.undirected;
    sub.labels = Some(parent_ids.iter().map(|&v| labels[v as usize]).collect());
    sub.label_names = graph.label_names.clone();
    sub.parent_ids = Some(parent_ids);
    Ok(sub)
}

/// Builder for small graphs in tests and generators. Node names are the
/// decimal ids.
#[derive(Default, Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    arcs: Vec<(NodeId, NodeId, Option<Sign>)>,
    undirected: bool,
    signed: bool,
    labels: Option<Vec<String>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { n, ..Default::default() }
    }

    pub fn undirected(n: usize) -> Self {
        GraphBuilder { n, undirected: true, ..Default::default() }
    }

    /// A signed graph even if no arc is added.
    pub fn signed(n: usize) -> Self {
        GraphBuilder { n, signed: true, ..Default::default() }
    }

    pub fn arc(mut self, u: NodeId, v: NodeId) -> Self {
        self.arcs.push((u, v, None));
        self
    }

    pub fn signed_arc(mut self, u: NodeId, v: NodeId, sign: Sign) -> Self {
        self.arcs.push((u, v, Some(sign)));
        self
    }

    pub fn add_arc(&mut self, u: NodeId, v: NodeId) {
        self.arcs.push((u, v, None));
    }

    pub fn add_signed_arc(&mut self, u: NodeId, v: NodeId, sign: Sign) {
        self.arcs.push((u, v, Some(sign)));
    }

    pub fn labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn build(self) -> Graph {
        let names: Vec<String> = (0..self.n).map(|v| v.to_string()).collect();
        let signed = self.signed || self.arcs.iter().any(|a| a.2.is_some());
        let mut edges: Vec<Edge> = Vec::new();
        if signed {
            let mut seen = std::collections::HashSet::new();
            for &(u, v, s) in &self.arcs {
                if u != v && seen.insert((u, v)) {
                    edges.push(Edge { src: u, dst: v, kind: EdgeKind::Unidirectional, sign: s });
                }
            }
        } else {
            let mut arcs: Vec<(NodeId, NodeId)> =
                self.arcs.iter().filter(|a| a.0 != a.1).map(|a| (a.0, a.1)).collect();
            if self.undirected {
                arcs = arcs.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
            }
            arcs.sort_unstable();
            arcs.dedup();
            for &(u, v) in &arcs {
                if arcs.binary_search(&(v, u)).is_ok() {
                    if u < v {
                        edges.push(Edge { src: u, dst: v, kind: EdgeKind::Bidirectional, sign: None });
                    }
                } else {
                    edges.push(Edge { src: u, dst: v, kind: EdgeKind::Unidirectional, sign: None });
                }
            }
        }
        let mut g = Graph::from_edges(names, edges, signed);
        g.undirected = self.undirected;
        if let Some(labels) = self.labels {
            let mut label_names: Vec<String> = Vec::new();
            let mut ids = Vec::with_capacity(labels.len());
            for l in labels {
                let id = match label_names.iter().position(|x| *x == l) {
                    Some(i) => i,
                    None => {
                        label_names.push(l);
                        label_names.len() - 1
                    }
                };
                ids.push(Some(id as LabelId));
            }
            ids.resize(g.node_count(), None);
            g.labels = Some(ids);
            g.label_names = label_names;
        }
        g
    }
}
