//! Brute-force reference implementation.
//!
//! Everything here works from definitions: `N` instances come from
//! exhaustive enumeration of node triples or quadruples, orbits from
//! canonical forms of the instance with the `M` position marked, and quark
//! numbers from iterated pruning of the explicit hypergraph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::engine::{MInstance, MotifEngine};
use crate::error::{QuarkError, Result};
use crate::forest::QuarkForest;
use crate::graph::{Graph, Link, NodeId, Sign};
use crate::motif::{
    classify_directed_triangle, classify_signed_triangle, match_labeled_clique, permutations, MKind, MotifSpec, NClass,
    TRel, Template,
};
use crate::peel::{QuarkNumbers, RoleAwareNumbers};

pub const MAX_NODES: usize = 2_000;
pub const MAX_NODES_QUADRUPLES: usize = 300;

/// One hyperedge: an `N` instance with its member hypernodes and their
/// orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperEdge {
    pub nodes: Vec<NodeId>,
    pub members: Vec<usize>,
    pub orbits: Vec<u8>,
}

/// Explicit motif hypergraph.
#[derive(Clone, Debug)]
pub struct MotifHypergraph {
    pub spec: MotifSpec,
    pub hypernodes: Vec<MInstance>,
    pub index: HashMap<MInstance, usize>,
    pub hyperedges: Vec<HyperEdge>,
    pub incidence: Vec<Vec<usize>>,
}

impl MotifHypergraph {
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn t(&self) -> usize {
        self.spec.t
    }
}

fn link_code(link: Option<Link>) -> u8 {
    match link {
        None => 0,
        Some(Link::Out(None)) => 1,
        Some(Link::In(None)) => 2,
        Some(Link::Bidir) => 3,
        Some(Link::Out(Some(Sign::Plus))) => 4,
        Some(Link::Out(Some(Sign::Minus))) => 5,
        Some(Link::In(Some(Sign::Plus))) => 6,
        Some(Link::In(Some(Sign::Minus))) => 7,
        Some(Link::Both(..)) => 8,
    }
}

fn trel_code(rel: TRel) -> u8 {
    match rel {
        TRel::None => 0,
        TRel::Out(None) => 1,
        TRel::In(None) => 2,
        TRel::Bidir | TRel::Undirected => 3,
        TRel::Out(Some(Sign::Plus)) => 4,
        TRel::Out(Some(Sign::Minus)) => 5,
        TRel::In(Some(Sign::Plus)) => 6,
        TRel::In(Some(Sign::Minus)) => 7,
    }
}

/// Canonical form of a small structure with a marked node subset: the
/// smallest relabeled encoding over all node permutations.
fn canonical_form(n: usize, rel: &dyn Fn(usize, usize) -> u8, label: &dyn Fn(usize) -> String, marked: &[bool]) -> Vec<String> {
    permutations(n)
        .into_iter()
        .map(|p| {
            let mut enc: Vec<String> = (0..n).map(|i| format!("{}{}", marked[p[i]] as u8, label(p[i]))).collect();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        enc.push(rel(p[i], p[j]).to_string());
                    }
                }
            }
            enc
        })
        .min()
        .unwrap_or_default()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Orbit id of every marked-form of the template, numbered by the first
/// position (in lexicographic order) that has it.
fn template_orbits(spec: &MotifSpec) -> HashMap<Vec<String>, u8> {
    let tpl: &Template = spec.template();
    let n = tpl.node_count();
    let rel = |i: usize, j: usize| trel_code(tpl.rel(i, j));
    let label = |i: usize| tpl.label(i).unwrap_or("").to_string();
    let mut out = HashMap::new();
    for pos in subsets(n, spec.m_kind.node_count()) {
        let mut marked = vec![false; n];
        pos.iter().for_each(|&i| marked[i] = true);
        let form = canonical_form(n, &rel, &label, &marked);
        let next = out.len() as u8;
        out.entry(form).or_insert(next);
    }
    out
}

fn instance_matches(graph: &Graph, nodes: &[NodeId], class: &NClass) -> bool {
    match class {
        NClass::Directed(c) => classify_directed_triangle(graph, nodes[0], nodes[1], nodes[2]) == Some(*c),
        NClass::Signed(c) => classify_signed_triangle(graph, nodes[0], nodes[1], nodes[2]) == Some(*c),
        NClass::Clique(c) => match_labeled_clique(graph, nodes, c),
    }
}

/// Materializes the motif hypergraph by exhaustive enumeration.
pub fn materialize(graph: &Graph, spec: &MotifSpec) -> Result<MotifHypergraph> {
    spec.check_compatible(graph)?;
    let n = graph.node_count();
    let size = spec.n_class.node_count();
    if n > MAX_NODES || (size == 4 && n > MAX_NODES_QUADRUPLES) {
        return Err(QuarkError::TooLarge(format!("oracle enumeration over {n} nodes")));
    }
    let mut hypernodes: Vec<MInstance> = match spec.m_kind {
        MKind::VanillaNode => (0..n as NodeId).map(MInstance::Node).collect(),
        MKind::VanillaEdge => (0..graph.edge_count() as u32).map(MInstance::Edge).collect(),
        MKind::VanillaTriangle => {
            let mut tris = Vec::new();
            for a in 0..n as NodeId {
                for b in a + 1..n as NodeId {
                    for c in b + 1..n as NodeId {
                        if graph.connected(a, b) && graph.connected(a, c) && graph.connected(b, c) {
                            tris.push(MInstance::Triangle([a, b, c]));
                        }
                    }
                }
            }
            tris
        }
    };
    let orbit_of_form = template_orbits(spec);
    let mut hyperedges = Vec::new();
    let mut combo = vec![0 as NodeId; size];
    enumerate(n as NodeId, size, 0, 0, &mut combo, &mut |nodes: &[NodeId]| {
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if !graph.connected(nodes[i], nodes[j]) {
                    return;
                }
            }
        }
        if !instance_matches(graph, nodes, &spec.n_class) {
            return;
        }
        let undirected = matches!(spec.n_class, NClass::Clique(_));
        let rel = |i: usize, j: usize| match graph.link(nodes[i], nodes[j]) {
            Some(_) if undirected => 3,
            adj => link_code(adj.map(|a| a.link)),
        };
        let labeled = spec.template().is_labeled();
        let label = |i: usize| match graph.label(nodes[i]) {
            Some(l) if labeled => graph.label_name(l).to_string(),
            _ => String::new(),
        };
        let mut members = Vec::new();
        let mut orbits = Vec::new();
        for pos in subsets(size, spec.m_kind.node_count()) {
            let mut marked = vec![false; size];
            pos.iter().for_each(|&i| marked[i] = true);
            let form = canonical_form(size, &rel, &label, &marked);
            orbits.push(*orbit_of_form.get(&form).expect("instance is isomorphic to the template"));
            let inst = match pos.as_slice() {
                [a] => MInstance::Node(nodes[*a]),
                [a, b] => MInstance::Edge(graph.link(nodes[*a], nodes[*b]).and_then(|x| x.single_edge()).expect("edge")),
                [a, b, c] => MInstance::Triangle([nodes[*a], nodes[*b], nodes[*c]]),
                _ => unreachable!(),
            };
            members.push(inst);
        }
        hyperedges.push((nodes.to_vec(), members, orbits));
    });
    let index: HashMap<MInstance, usize> = hypernodes.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut incidence = vec![Vec::new(); hypernodes.len()];
    let hyperedges: Vec<HyperEdge> = hyperedges
        .into_iter()
        .enumerate()
        .map(|(e, (nodes, members, orbits))| {
            let members: Vec<usize> = members.iter().map(|m| index[m]).collect();
            for &m in &members {
                incidence[m].push(e);
            }
            HyperEdge { nodes, members, orbits }
        })
        .collect();
    hypernodes.shrink_to_fit();
    Ok(MotifHypergraph { spec: spec.clone(), hypernodes, index, hyperedges, incidence })
}

fn enumerate(n: NodeId, size: usize, start: NodeId, depth: usize, combo: &mut Vec<NodeId>, f: &mut dyn FnMut(&[NodeId])) {
    if depth == size {
        f(combo);
        return;
    }
    for v in start..n {
        combo[depth] = v;
        enumerate(n, size, v + 1, depth + 1, combo, f);
    }
}

/// Largest `k` at which each item survives iterated pruning of items with
/// fewer than `k` fully alive hyperedges.
fn prune_levels(items: usize, edges: &[Vec<usize>]) -> Vec<u32> {
    let mut alive = vec![true; items];
    let mut best = vec![0u32; items];
    let mut k = 1;
    loop {
        loop {
            let mut deg = vec![0u32; items];
            for e in edges {
                if e.iter().all(|&m| alive[m]) {
                    e.iter().for_each(|&m| deg[m] += 1);
                }
            }
            let mut changed = false;
            for m in 0..items {
                if alive[m] && deg[m] < k {
                    alive[m] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !alive.iter().any(|&a| a) {
            return best;
        }
        for m in 0..items {
            if alive[m] {
                best[m] = k;
            }
        }
        k += 1;
    }
}

/// Quark number of each hypernode by definition.
pub fn oracle_quark_numbers(h: &MotifHypergraph) -> Vec<u32> {
    let edges: Vec<Vec<usize>> = h.hyperedges.iter().map(|e| e.members.clone()).collect();
    prune_levels(h.hypernodes.len(), &edges)
}

/// Role-aware numbers of each hypernode, `b` per hypernode.
pub fn oracle_role_aware(h: &MotifHypergraph) -> Vec<Vec<u32>> {
    let b = h.spec.b;
    let edges: Vec<Vec<usize>> = h
        .hyperedges
        .iter()
        .map(|e| e.members.iter().zip(&e.orbits).map(|(&m, &o)| m * b + o as usize).collect())
        .collect();
    let flat = prune_levels(h.hypernodes.len() * b, &edges);
    flat.chunks(b).map(|c| c.to_vec()).collect()
}

/// Canonical description of one quark over `M` instances.
pub type OracleQuark = (u32, Vec<MInstance>, Option<(u32, Vec<MInstance>)>);

/// All k-quarks: connected components of each level's survivors, identical
/// sets across levels listed once at their highest level, parents found by
/// subset tests.
pub fn oracle_forest(h: &MotifHypergraph, k: &[u32]) -> Vec<OracleQuark> {
    let max = k.iter().copied().max().unwrap_or(0);
    let mut quarks: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
    for level in 1..=max {
        let alive: Vec<bool> = k.iter().map(|&x| x >= level).collect();
        // naive closure over shared fully-alive hyperedges
        let mut comp: Vec<Option<usize>> = vec![None; k.len()];
        for start in 0..k.len() {
            if !alive[start] || comp[start].is_some() {
                continue;
            }
            comp[start] = Some(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &e in &h.incidence[v] {
                    let members = &h.hyperedges[e].members;
                    if members.iter().all(|&m| alive[m]) {
                        for &m in members {
                            if comp[m].is_none() {
                                comp[m] = Some(start);
                                stack.push(m);
                            }
                        }
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (m, c) in comp.iter().enumerate() {
            if let Some(c) = c {
                groups.entry(*c).or_default().push(m);
            }
        }
        for g in groups.into_values() {
            quarks.insert(g, level);
        }
    }
    let list: Vec<(Vec<usize>, u32)> = quarks.into_iter().collect();
    let to_inst = |s: &[usize]| {
        let mut v: Vec<MInstance> = s.iter().map(|&i| h.hypernodes[i]).collect();
        v.sort();
        v
    };
    let mut out: Vec<OracleQuark> = list
        .iter()
        .map(|(set, level)| {
            let parent = list
                .iter()
                .filter(|(other, l)| l < level && set.iter().all(|x| other.binary_search(x).is_ok()))
                .max_by_key(|(_, l)| *l)
                .map(|(other, l)| (*l, to_inst(other)));
            (*level, to_inst(set), parent)
        })
        .collect();
    out.sort();
    out
}

/// Engine forest in the oracle's representation.
pub fn forest_signature(engine: &MotifEngine<'_>, forest: &QuarkForest) -> Vec<OracleQuark> {
    let conv = |members: Vec<u32>| {
        let mut v: Vec<MInstance> = members.into_iter().map(|m| engine.instance(m)).collect();
        v.sort();
        v
    };
    let mut out: Vec<OracleQuark> = forest
        .signature()
        .into_iter()
        .map(|(k, members, parent)| (k, conv(members), parent.map(|(pk, pm)| (pk, conv(pm)))))
        .collect();
    out.sort();
    out
}

/// A hypernode whose engine and oracle values differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub instance: MInstance,
    pub what: &'static str,
    pub engine: Vec<u32>,
    pub oracle: Vec<u32>,
}

/// Compares engine outputs against the oracle, returning the first
/// difference found.
pub fn compare(
    engine: &MotifEngine<'_>,
    numbers: &QuarkNumbers,
    role: Option<&RoleAwareNumbers>,
    forest: Option<&QuarkForest>,
) -> Result<Option<Mismatch>> {
    let h = materialize(engine.graph(), engine.spec())?;
    let ok = oracle_quark_numbers(&h);
    let id = |m: &MInstance| engine.instance_id(m);
    for (i, inst) in h.hypernodes.iter().enumerate() {
        let ek = id(inst).map_or(0, |m| numbers.get(m));
        if ek != ok[i] {
            return Ok(Some(Mismatch { instance: *inst, what: "quark number", engine: vec![ek], oracle: vec![ok[i]] }));
        }
    }
    if let Some(r) = role {
        let orr = oracle_role_aware(&h);
        for (i, inst) in h.hypernodes.iter().enumerate() {
            let er = id(inst).map_or(vec![0; r.b], |m| r.row(m).to_vec());
            if er != orr[i] {
                return Ok(Some(Mismatch { instance: *inst, what: "role-aware numbers", engine: er, oracle: orr[i].clone() }));
            }
        }
    }
    if let Some(f) = forest {
        let of = oracle_forest(&h, &ok);
        let ef = forest_signature(engine, f);
        if of != ef {
            let first = ef.iter().zip(&of).find(|(a, b)| a != b).map(|(a, _)| a).or(ef.get(of.len())).or(of.get(ef.len()));
            let instance = first.and_then(|q| q.1.first().copied()).unwrap_or(MInstance::Node(0));
            return Ok(Some(Mismatch {
                instance,
                what: "quark forest",
                engine: vec![ef.len() as u32],
                oracle: vec![of.len() as u32],
            }));
        }
    }
    Ok(None)
}

/// `(r, s)`-nucleus numbers for `(r, s)` in `{(2, 3), (3, 4)}`, keyed by the
/// sorted node set of each `r`-clique, from the clique hypergraph of the
/// graph with directions ignored.
pub fn nucleus_numbers(graph: &Graph, r: usize, s: usize) -> Result<BTreeMap<Vec<NodeId>, u32>> {
    if !matches!((r, s), (2, 3) | (3, 4)) {
        return Err(QuarkError::Config(format!("unsupported nucleus ({r},{s})")));
    }
    let n = graph.node_count();
    if n > MAX_NODES_QUADRUPLES {
        return Err(QuarkError::TooLarge(format!("nucleus oracle over {n} nodes")));
    }
    let is_clique = |nodes: &[NodeId]| {
        nodes.iter().enumerate().all(|(i, &a)| nodes[i + 1..].iter().all(|&b| graph.connected(a, b)))
    };
    let mut rcliques: Vec<Vec<NodeId>> = Vec::new();
    let mut combo = vec![0; r];
    enumerate(n as NodeId, r, 0, 0, &mut combo, &mut |c: &[NodeId]| {
        if is_clique(c) {
            rcliques.push(c.to_vec());
        }
    });
    let index: BTreeMap<Vec<NodeId>, usize> = rcliques.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut combo = vec![0; s];
    enumerate(n as NodeId, s, 0, 0, &mut combo, &mut |c: &[NodeId]| {
        if is_clique(c) {
            let subs: BTreeSet<usize> = subsets(s, r)
                .iter()
                .map(|sub| index[&sub.iter().map(|&i| c[i]).collect::<Vec<_>>()])
                .collect();
            edges.push(subs.into_iter().collect());
        }
    });
    let levels = prune_levels(rcliques.len(), &edges);
    Ok(rcliques.into_iter().zip(levels).collect())
}
