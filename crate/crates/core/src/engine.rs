//! On-the-fly enumeration of motif instances.
//!
//! The motif hypergraph is never materialized. For a given `M` instance the
//! engine intersects sorted neighbor lists to find the `N` instances that
//! contain it, and reports every member `M` instance together with the orbit
//! it occupies in that `N` instance.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{QuarkError, Result};
use crate::graph::{Adj, EdgeId, Graph, LabelId, Link, NodeId};
use crate::motif::{MKind, MotifSpec, NClass};

/// An instance of the motif `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MInstance {
    Node(NodeId),
    Edge(EdgeId),
    /// Sorted node triple.
    Triangle([NodeId; 3]),
}

/// An induced instance of `N`: its sorted node set and class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NInstance {
    pub nodes: Vec<NodeId>,
    pub class: NClass,
}

/// One `N` instance as seen by the peelers: the dense ids of its `t`
/// member `M` instances and the orbit each one occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hit {
    pub nodes: [NodeId; 4],
    pub members: [u32; 4],
    pub orbits: [u8; 4],
    pub node_count: u8,
    pub len: u8,
}

impl Hit {
    pub fn members(&self) -> &[u32] {
        &self.members[..self.len as usize]
    }

    pub fn orbits(&self) -> &[u8] {
        &self.orbits[..self.len as usize]
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes[..self.node_count as usize]
    }

    /// Orbit of member `m` in this instance.
    pub fn orbit_of(&self, m: u32) -> Option<u8> {
        self.members().iter().position(|&x| x == m).map(|i| self.orbits[i])
    }
}

/// Motif degrees per dense `M` id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMap {
    pub degrees: Vec<u32>,
}

impl DegreeMap {
    pub fn get(&self, m: u32) -> u32 {
        self.degrees[m as usize]
    }

    pub fn total(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }
}

/// Orbit degrees, `b` per dense `M` id, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDegrees {
    pub b: usize,
    pub counts: Vec<u32>,
}

impl OrbitDegrees {
    pub fn row(&self, m: u32) -> &[u32] {
        &self.counts[m as usize * self.b..(m as usize + 1) * self.b]
    }

    pub fn len(&self) -> usize {
        self.counts.len() / self.b.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

const TRIPLES_OF_FOUR: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
const PAIRS_OF_THREE: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

/// Intersects two sorted adjacency slices, calling `f` with matching entries.
fn intersect<'a>(a: &'a [Adj], b: &'a [Adj], mut f: impl FnMut(&'a Adj, &'a Adj)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].nbr.cmp(&b[j].nbr) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(&a[i], &b[j]);
                i += 1;
                j += 1;
            }
        }
    }
}

fn tail_after(list: &[Adj], v: NodeId) -> &[Adj] {
    &list[list.partition_point(|a| a.nbr <= v)..]
}

/// Node tuple with pairwise links, reordered by node id.
#[derive(Clone, Copy)]
struct Local<const K: usize> {
    nodes: [NodeId; K],
    links: [[Option<Link>; K]; K],
    edges: [[EdgeId; K]; K],
}

impl<const K: usize> Local<K> {
    fn new(nodes: [NodeId; K]) -> Self {
        Local { nodes, links: [[None; K]; K], edges: [[EdgeId::MAX; K]; K] }
    }

    fn set(&mut self, i: usize, j: usize, adj: &Adj) {
        self.links[i][j] = Some(adj.link);
        self.links[j][i] = Some(adj.link.flip());
        let e = adj.single_edge().unwrap_or(EdgeId::MAX);
        self.edges[i][j] = e;
        self.edges[j][i] = e;
    }

    fn sorted(&self) -> Self {
        let mut idx: [usize; K] = std::array::from_fn(|i| i);
        idx.sort_unstable_by_key(|&i| self.nodes[i]);
        let mut out = Local::new(std::array::from_fn(|i| self.nodes[idx[i]]));
        for i in 0..K {
            for j in 0..K {
                out.links[i][j] = self.links[idx[i]][idx[j]];
                out.edges[i][j] = self.edges[idx[i]][idx[j]];
            }
        }
        out
    }
}

/// Enumerates `N` instances around `M` instances of one [`MotifSpec`].
pub struct MotifEngine<'g> {
    graph: &'g Graph,
    spec: MotifSpec,
    /// Link-code triple -> embedding, for unlabeled 3-node templates.
    triangle_table: Option<Vec<Option<[u8; 4]>>>,
    /// Graph label id required at each template node.
    template_labels: Vec<Option<LabelId>>,
    /// Some template label is absent from the graph: nothing can match.
    unmatchable: bool,
    /// Vanilla triangles with positive degree (M = triangle only).
    triangles: Vec<[NodeId; 3]>,
    triangle_index: HashMap<[NodeId; 3], u32>,
}

impl<'g> MotifEngine<'g> {
    pub fn new(graph: &'g Graph, spec: &MotifSpec) -> Result<Self> {
        spec.check_compatible(graph)?;
        let template = spec.template();
        let mut template_labels = Vec::new();
        let mut unmatchable = false;
        if template.is_labeled() {
            for i in 0..template.node_count() {
                let id = graph.label_id(template.label(i).unwrap());
                unmatchable |= id.is_none();
                template_labels.push(id);
            }
        }
        let triangle_table = (template.node_count() == 3 && !template.is_labeled()).then(|| {
            (0..Link::CODES.pow(3))
                .map(|key| {
                    let codes = [key / (Link::CODES * Link::CODES), (key / Link::CODES) % Link::CODES, key % Link::CODES];
                    let link = |i: usize, j: usize| {
                        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
                        let code = match (a, b) {
                            (0, 1) => codes[0],
                            (0, 2) => codes[1],
                            _ => codes[2],
                        };
                        let l = Link::from_code(code);
                        Some(if flip { l.flip() } else { l })
                    };
                    template.embed(link, |_, _| true)
                })
                .collect()
        });
        let mut engine = MotifEngine {
            graph,
            spec: spec.clone(),
            triangle_table,
            template_labels,
            unmatchable,
            triangles: Vec::new(),
            triangle_index: HashMap::new(),
        };
        if spec.m_kind == MKind::VanillaTriangle {
            engine.index_triangles();
        }
        Ok(engine)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn spec(&self) -> &MotifSpec {
        &self.spec
    }

    /// Number of dense `M` ids.
    pub fn m_count(&self) -> usize {
        match self.spec.m_kind {
            MKind::VanillaNode => self.graph.node_count(),
            MKind::VanillaEdge => self.graph.edge_count(),
            MKind::VanillaTriangle => self.triangles.len(),
        }
    }

    pub fn instance(&self, m: u32) -> MInstance {
        match self.spec.m_kind {
            MKind::VanillaNode => MInstance::Node(m),
            MKind::VanillaEdge => MInstance::Edge(m),
            MKind::VanillaTriangle => MInstance::Triangle(self.triangles[m as usize]),
        }
    }

    pub fn instance_id(&self, inst: &MInstance) -> Option<u32> {
        match (self.spec.m_kind, inst) {
            (MKind::VanillaNode, MInstance::Node(v)) => ((*v as usize) < self.graph.node_count()).then_some(*v),
            (MKind::VanillaEdge, MInstance::Edge(e)) => ((*e as usize) < self.graph.edge_count()).then_some(*e),
            (MKind::VanillaTriangle, MInstance::Triangle(t)) => self.triangle_index.get(t).copied(),
            _ => None,
        }
    }

    /// Graph nodes spanned by an `M` instance.
    pub fn instance_nodes(&self, m: u32) -> Vec<NodeId> {
        match self.spec.m_kind {
            MKind::VanillaNode => vec![m],
            MKind::VanillaEdge => {
                let e = self.graph.edge(m);
                vec![e.src, e.dst]
            }
            MKind::VanillaTriangle => self.triangles[m as usize].to_vec(),
        }
    }

    fn label_ok(&self, v: NodeId, template_node: usize) -> bool {
        match self.template_labels.get(template_node) {
            None => true,
            Some(req) => req.is_some() && self.graph.label(v) == *req,
        }
    }

    /// Embedding of a sorted local tuple into the template.
    fn embed<const K: usize>(&self, local: &Local<K>) -> Option<[u8; 4]> {
        if self.unmatchable || K != self.spec.template().node_count() {
            return None;
        }
        if let Some(table) = &self.triangle_table {
            let code = |i: usize, j: usize| local.links[i][j].map(Link::code);
            let key = (code(0, 1)? * Link::CODES + code(0, 2)?) * Link::CODES + code(1, 2)?;
            return table[key];
        }
        self.spec.template().embed(|i, j| local.links[i][j], |i, t| self.label_ok(local.nodes[i], t))
    }

    fn triangle_hit(&self, local: &Local<3>) -> Option<Hit> {
        let local = local.sorted();
        let perm = self.embed(&local)?;
        let orbits = self.spec.orbits();
        let mut hit = Hit { nodes: [0; 4], members: [0; 4], orbits: [0; 4], node_count: 3, len: 3 };
        hit.nodes[..3].copy_from_slice(&local.nodes);
        match self.spec.m_kind {
            MKind::VanillaNode => {
                for i in 0..3 {
                    hit.members[i] = local.nodes[i];
                    hit.orbits[i] = orbits.orbit_of_mask(1 << perm[i]) as u8;
                }
            }
            MKind::VanillaEdge => {
                for (slot, [i, j]) in PAIRS_OF_THREE.iter().enumerate() {
                    let e = local.edges[*i][*j];
                    debug_assert!(e != EdgeId::MAX);
                    hit.members[slot] = e;
                    hit.orbits[slot] = orbits.orbit_of_mask((1 << perm[*i]) | (1 << perm[*j])) as u8;
                }
            }
            MKind::VanillaTriangle => unreachable!("triangle M pairs with 4-node motifs"),
        }
        Some(hit)
    }

    fn quad_embedding(&self, local: &Local<4>) -> Option<(Local<4>, [u8; 4])> {
        let local = local.sorted();
        let perm = self.embed(&local)?;
        Some((local, perm))
    }

    fn quad_hit(&self, local: &Local<4>) -> Option<Hit> {
        let (local, perm) = self.quad_embedding(local)?;
        let orbits = self.spec.orbits();
        let mut hit = Hit { nodes: local.nodes, members: [0; 4], orbits: [0; 4], node_count: 4, len: 4 };
        for (slot, tri) in TRIPLES_OF_FOUR.iter().enumerate() {
            let key = [local.nodes[tri[0]], local.nodes[tri[1]], local.nodes[tri[2]]];
            hit.members[slot] = *self.triangle_index.get(&key)?;
            let mask = tri.iter().map(|&i| 1usize << perm[i]).sum();
            hit.orbits[slot] = orbits.orbit_of_mask(mask) as u8;
        }
        Some(hit)
    }

    /// Calls `f` once per `N` instance containing `M` instance `m`.
    pub fn visit_containing(&self, m: u32, mut f: impl FnMut(&Hit)) {
        let g = self.graph;
        match self.spec.m_kind {
            MKind::VanillaNode => {
                let nbrs = g.neighbors(m);
                for (i, av) in nbrs.iter().enumerate() {
                    let v = av.nbr;
                    intersect(&nbrs[i + 1..], tail_after(g.neighbors(v), v), |aw, vw| {
                        let mut local = Local::new([m, v, aw.nbr]);
                        local.set(0, 1, av);
                        local.set(0, 2, aw);
                        local.set(1, 2, vw);
                        if let Some(hit) = self.triangle_hit(&local) {
                            f(&hit);
                        }
                    });
                }
            }
            MKind::VanillaEdge => {
                let e = g.edge(m);
                let Some(ab) = g.link(e.src, e.dst) else { return };
                intersect(g.neighbors(e.src), g.neighbors(e.dst), |aw, bw| {
                    let mut local = Local::new([e.src, e.dst, aw.nbr]);
                    local.set(0, 1, ab);
                    local.set(0, 2, aw);
                    local.set(1, 2, bw);
                    if let Some(hit) = self.triangle_hit(&local) {
                        f(&hit);
                    }
                });
            }
            MKind::VanillaTriangle => {
                let [a, b, c] = self.triangles[m as usize];
                self.visit_quads([a, b, c], None, |local| {
                    if let Some(hit) = self.quad_hit(local) {
                        f(&hit);
                    }
                });
            }
        }
    }

    /// Visits 4-cliques extending triangle `tri`; with `above`, only those
    /// whose fourth node is larger than it.
    fn visit_quads(&self, tri: [NodeId; 3], above: Option<NodeId>, mut f: impl FnMut(&Local<4>)) {
        let g = self.graph;
        let [a, b, c] = tri;
        let (Some(ab), Some(ac), Some(bc)) = (g.link(a, b), g.link(a, c), g.link(b, c)) else { return };
        let na = match above {
            Some(v) => tail_after(g.neighbors(a), v),
            None => g.neighbors(a),
        };
        let nc = g.neighbors(c);
        let mut j = 0;
        intersect(na, g.neighbors(b), |aw, bw| {
            let w = aw.nbr;
            while j < nc.len() && nc[j].nbr < w {
                j += 1;
            }
            if j < nc.len() && nc[j].nbr == w {
                let mut local = Local::new([a, b, c, w]);
                local.set(0, 1, ab);
                local.set(0, 2, ac);
                local.set(1, 2, bc);
                local.set(0, 3, aw);
                local.set(1, 3, bw);
                local.set(2, 3, &nc[j]);
                f(&local);
            }
        });
    }

    /// All triangles `x < y < z` (directions ignored) visited from `x`.
    fn visit_triangles_from(&self, x: NodeId, mut f: impl FnMut(Local<3>)) {
        let g = self.graph;
        let nx = tail_after(g.neighbors(x), x);
        for (i, ay) in nx.iter().enumerate() {
            let y = ay.nbr;
            intersect(&nx[i + 1..], tail_after(g.neighbors(y), y), |az, yz| {
                let mut local = Local::new([x, y, az.nbr]);
                local.set(0, 1, ay);
                local.set(0, 2, az);
                local.set(1, 2, yz);
                f(local);
            });
        }
    }

    fn index_triangles(&mut self) {
        let found: Vec<Vec<[NodeId; 3]>> = (0..self.graph.node_count() as NodeId)
            .into_par_iter()
            .map(|x| {
                let mut out = Vec::new();
                self.visit_triangles_from(x, |local| {
                    let tri = local.nodes;
                    let mut contained = false;
                    self.visit_quads(tri, None, |q| contained |= self.quad_embedding(q).is_some());
                    if contained {
                        out.push(tri);
                    }
                });
                out
            })
            .collect();
        self.triangles = found.into_iter().flatten().collect();
        self.triangle_index = self.triangles.iter().enumerate().map(|(i, t)| (*t, i as u32)).collect();
    }

    /// Motif degree of every `M` instance.
    pub fn motif_degrees(&self) -> DegreeMap {
        let degrees = (0..self.m_count() as u32)
            .into_par_iter()
            .map(|m| {
                let mut d = 0u32;
                self.visit_containing(m, |_| d += 1);
                d
            })
            .collect();
        DegreeMap { degrees }
    }

    /// Orbit degrees of every `M` instance.
    pub fn orbit_degrees(&self) -> OrbitDegrees {
        let b = self.spec.b;
        let rows: Vec<Vec<u32>> = (0..self.m_count() as u32)
            .into_par_iter()
            .map(|m| {
                let mut row = vec![0u32; b];
                self.visit_containing(m, |hit| {
                    row[hit.orbit_of(m).expect("instance contains m") as usize] += 1;
                });
                row
            })
            .collect();
        OrbitDegrees { b, counts: rows.concat() }
    }

    /// Induced `N` instances containing `m`, skipping those that contain a
    /// non-live `M` instance when `live` is given.
    pub fn containing_instances(&self, m: u32, live: Option<&dyn Fn(u32) -> bool>) -> Vec<NInstance> {
        let mut out = Vec::new();
        self.visit_containing(m, |hit| {
            if let Some(live) = live {
                if hit.members().iter().any(|&x| x != m && !live(x)) {
                    return;
                }
            }
            out.push(NInstance { nodes: hit.nodes().to_vec(), class: self.spec.n_class.clone() });
        });
        out
    }

    /// Calls `f` once per `N` instance in the graph (node lists sorted).
    pub fn visit_all_instances(&self, mut f: impl FnMut(&[NodeId])) {
        for x in 0..self.graph.node_count() as NodeId {
            self.visit_instances_from(x, &mut f);
        }
    }

    /// Instances whose smallest node is `x`.
    fn visit_instances_from(&self, x: NodeId, f: &mut impl FnMut(&[NodeId])) {
        if self.spec.n_class.node_count() == 3 {
            self.visit_triangles_from(x, |local| {
                if self.embed(&local).is_some() {
                    f(&local.nodes);
                }
            });
        } else {
            self.visit_triangles_from(x, |local| {
                let [_, _, z] = local.nodes;
                self.visit_quads(local.nodes, Some(z), |q| {
                    if self.embed(q).is_some() {
                        f(&q.nodes);
                    }
                });
            });
        }
    }

    /// Total number of induced `N` instances, by direct enumeration.
    pub fn count_total(&self) -> u64 {
        (0..self.graph.node_count() as NodeId)
            .into_par_iter()
            .map(|x| {
                let mut c = 0u64;
                self.visit_instances_from(x, &mut |_| c += 1);
                c
            })
            .sum()
    }

    /// Number of `N` instances each graph node participates in.
    pub fn node_participation(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.graph.node_count()];
        self.visit_all_instances(|nodes| nodes.iter().for_each(|&v| counts[v as usize] += 1));
        counts
    }

    /// Instances whose nodes include `v`, each reported once per call.
    pub fn visit_instances_at(&self, v: NodeId, mut f: impl FnMut(&[NodeId])) {
        let g = self.graph;
        let nv = g.neighbors(v);
        if self.spec.n_class.node_count() == 3 {
            for (i, ay) in nv.iter().enumerate() {
                intersect(&nv[i + 1..], tail_after(g.neighbors(ay.nbr), ay.nbr), |az, yz| {
                    let mut local = Local::new([v, ay.nbr, az.nbr]);
                    local.set(0, 1, ay);
                    local.set(0, 2, az);
                    local.set(1, 2, yz);
                    let local = local.sorted();
                    if self.embed(&local).is_some() {
                        f(&local.nodes);
                    }
                });
            }
        } else {
            for (i, ay) in nv.iter().enumerate() {
                let y = ay.nbr;
                intersect(&nv[i + 1..], tail_after(g.neighbors(y), y), |az, _| {
                    let z = az.nbr;
                    let mut sorted = [v, y, z];
                    sorted.sort_unstable();
                    // fourth node must exceed z so each clique is seen once from v
                    let mut nodes_seen = Vec::new();
                    self.visit_quads(sorted, Some(z), |q| {
                        if self.embed(&q.sorted()).is_some() {
                            nodes_seen.push(q.sorted().nodes);
                        }
                    });
                    for n in nodes_seen {
                        f(&n);
                    }
                });
            }
        }
    }
}

/// Motif degrees of `graph` under `spec`.
pub fn motif_degrees(graph: &Graph, spec: &MotifSpec) -> Result<DegreeMap> {
    Ok(MotifEngine::new(graph, spec)?.motif_degrees())
}

pub fn orbit_degrees(graph: &Graph, spec: &MotifSpec) -> Result<OrbitDegrees> {
    Ok(MotifEngine::new(graph, spec)?.orbit_degrees())
}

/// Number of induced instances of `n_class` in `graph`.
pub fn count_total(graph: &Graph, n_class: &NClass) -> Result<u64> {
    let spec = MotifSpec::new(MotifSpec::default_m_kind(n_class), n_class.clone())?;
    let engine = MotifEngine::new(graph, &spec)?;
    Ok(engine.count_total())
}

/// Resolves a graph edge given by endpoint names.
pub fn edge_between(graph: &Graph, u: NodeId, v: NodeId) -> Result<EdgeId> {
    graph
        .link(u, v)
        .and_then(Adj::single_edge)
        .ok_or_else(|| QuarkError::Domain(format!("no single edge between {} and {}", graph.name(u), graph.name(v))))
}
