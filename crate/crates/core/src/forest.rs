//! k-quarks, their containment hierarchy, role-aware quarks and node role
//! profiles.

use std::collections::{BTreeMap, BTreeSet};

use crate::engine::MotifEngine;
use crate::error::{QuarkError, Result};
use crate::graph::NodeId;
use crate::motif::{MKind, TRel};
use crate::peel::{QuarkNumbers, RoleAwareNumbers};

/// One k-quark.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quark {
    pub id: usize,
    pub k: u32,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Members whose quark number equals `k`; the remaining members live in
    /// descendants.
    pub own: Vec<u32>,
    pub num_members: usize,
}

impl Quark {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Containment hierarchy of all k-quarks of a decomposition.
#[derive(Clone, Debug, Default)]
pub struct QuarkForest {
    quarks: Vec<Quark>,
    roots: Vec<usize>,
    max_k: u32,
}

/// Canonical, id-free description of one quark: level, sorted members and
/// the parent's level and members.
pub type QuarkSignature = (u32, Vec<u32>, Option<(u32, Vec<u32>)>);

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }
}

impl QuarkForest {
    /// Assembles a forest from explicit quarks; `quarks[i].id` must be `i`.
    pub fn from_quarks(quarks: Vec<Quark>) -> Self {
        let roots = quarks.iter().filter(|q| q.parent.is_none()).map(|q| q.id).collect();
        let max_k = quarks.iter().map(|q| q.k).max().unwrap_or(0);
        QuarkForest { quarks, roots, max_k }
    }

    pub fn quarks(&self) -> &[Quark] {
        &self.quarks
    }

    pub fn quark(&self, id: usize) -> &Quark {
        &self.quarks[id]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.quarks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quarks.is_empty()
    }

    /// Maximum quark number of the graph.
    pub fn max_k(&self) -> u32 {
        self.max_k
    }

    pub fn is_maximum(&self, id: usize) -> bool {
        self.quarks[id].k == self.max_k
    }

    /// Quark ids grouped by level.
    pub fn levels(&self) -> BTreeMap<u32, Vec<usize>> {
        let mut out: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for q in &self.quarks {
            out.entry(q.k).or_default().push(q.id);
        }
        out
    }

    /// Sorted member `M` ids of a quark, including those of descendants.
    pub fn members(&self, id: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.quarks[id].num_members);
        let mut stack = vec![id];
        while let Some(q) = stack.pop() {
            out.extend_from_slice(&self.quarks[q].own);
            stack.extend_from_slice(&self.quarks[q].children);
        }
        out.sort_unstable();
        out
    }

    /// Sorted graph nodes covered by a quark's members.
    pub fn nodes(&self, engine: &MotifEngine<'_>, id: usize) -> Vec<NodeId> {
        let set: BTreeSet<NodeId> = self.members(id).into_iter().flat_map(|m| engine.instance_nodes(m)).collect();
        set.into_iter().collect()
    }

    /// Childless quarks with at least `min_nodes` nodes.
    pub fn leaf_quarks(&self, engine: &MotifEngine<'_>, min_nodes: usize) -> Vec<usize> {
        self.quarks
            .iter()
            .filter(|q| q.is_leaf() && (min_nodes == 0 || self.nodes(engine, q.id).len() >= min_nodes))
            .map(|q| q.id)
            .collect()
    }

    /// Id-free description of every quark, sorted.
    pub fn signature(&self) -> Vec<QuarkSignature> {
        let mut out: Vec<QuarkSignature> = self
            .quarks
            .iter()
            .map(|q| (q.k, self.members(q.id), q.parent.map(|p| (self.quarks[p].k, self.members(p)))))
            .collect();
        out.sort();
        out
    }

    /// Node -> quark partition where each node belongs to the quark with the
    /// most nodes among those containing it (ties: higher k, then lower id).
    /// Nodes covered by no quark are absent.
    pub fn assign_largest(&self, engine: &MotifEngine<'_>) -> BTreeMap<NodeId, usize> {
        let node_sets: Vec<Vec<NodeId>> = (0..self.len()).map(|id| self.nodes(engine, id)).collect();
        let mut best: BTreeMap<NodeId, usize> = BTreeMap::new();
        for (id, nodes) in node_sets.iter().enumerate() {
            for &v in nodes {
                let better = match best.get(&v) {
                    None => true,
                    Some(&cur) => {
                        let a = (node_sets[id].len(), self.quarks[id].k);
                        let b = (node_sets[cur].len(), self.quarks[cur].k);
                        a > b
                    }
                };
                if better {
                    best.insert(v, id);
                }
            }
        }
        best
    }
}

/// Builds every k-quark and the containment hierarchy from quark numbers.
///
/// Levels are replayed from the highest quark number down, union-finding
/// `M` instances across `N` instances whose members all have quark number at
/// least the current level.
pub fn build_forest(engine: &MotifEngine<'_>, numbers: &QuarkNumbers) -> Result<QuarkForest> {
    let n = engine.m_count();
    if numbers.k.len() != n {
        return Err(QuarkError::Consistency(format!(
            "quark numbers cover {} instances, engine has {}",
            numbers.k.len(),
            n
        )));
    }
    let k = &numbers.k;
    if numbers.trace.order.iter().any(|&m| m as usize >= n)
        || numbers.trace.order.iter().zip(&numbers.trace.extracted_degree).any(|(&m, &d)| k[m as usize] != d)
    {
        return Err(QuarkError::Consistency("peel trace does not match quark numbers".into()));
    }
    let mut by_level: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for m in 0..n as u32 {
        if k[m as usize] > 0 {
            by_level.entry(k[m as usize]).or_default().push(m);
        }
    }
    let mut uf = UnionFind::new(n);
    // quark ids on top of each component that still await a parent
    let mut tops: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sizes: Vec<usize> = vec![1; n];
    let mut quarks: Vec<Quark> = Vec::new();
    for (&level, members) in by_level.iter().rev() {
        for &m in members {
            engine.visit_containing(m, |hit| {
                if hit.members().iter().any(|&x| k[x as usize] < level) {
                    return;
                }
                for &x in hit.members() {
                    let (a, b) = (uf.find(m), uf.find(x));
                    if a != b {
                        let (big, small) = if sizes[a as usize] >= sizes[b as usize] { (a, b) } else { (b, a) };
                        uf.parent[small as usize] = big;
                        sizes[big as usize] += sizes[small as usize];
                        let moved = std::mem::take(&mut tops[small as usize]);
                        tops[big as usize].extend(moved);
                    }
                }
            });
        }
        let mut own: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &m in members {
            own.entry(uf.find(m)).or_default().push(m);
        }
        for (root, own) in own {
            let id = quarks.len();
            let mut children = std::mem::take(&mut tops[root as usize]);
            children.sort_unstable();
            for &c in &children {
                quarks[c].parent = Some(id);
            }
            quarks.push(Quark { id, k: level, parent: None, children, own, num_members: sizes[root as usize] });
            tops[root as usize].push(id);
        }
    }
    // renumber so that lower levels come first
    let total = quarks.len();
    let flip = |id: usize| total - 1 - id;
    let mut renumbered: Vec<Quark> = quarks
        .into_iter()
        .rev()
        .map(|mut q| {
            q.id = flip(q.id);
            q.parent = q.parent.map(flip);
            q.children = q.children.iter().map(|&c| flip(c)).rev().collect();
            q
        })
        .collect();
    for q in &mut renumbered {
        q.children.sort_unstable();
    }
    Ok(QuarkForest::from_quarks(renumbered))
}

/// A role-aware k-quark: members with the orbit each one plays throughout.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RoleQuark {
    pub k: u32,
    pub members: Vec<(u32, u8)>,
}

/// Upper bound on the orbit assignments explored by [`role_aware_quarks`].
pub const ROLE_CHOICE_LIMIT: usize = 1 << 16;

/// Role-aware k-quarks at level `k`: maximal connected sets of
/// `(M instance, orbit)` pairs where every instance plays a single orbit and
/// lies in at least `k` `N` instances that are fully inside the set with
/// matching orbits.
///
/// Instances surviving at level `k` in more than one orbit are resolved by
/// trying every orbit assignment, so the cost is exponential in their number;
/// beyond [`ROLE_CHOICE_LIMIT`] assignments the call is refused.
pub fn role_aware_quarks(engine: &MotifEngine<'_>, numbers: &RoleAwareNumbers, k: u32) -> Result<Vec<RoleQuark>> {
    if k == 0 {
        return Err(QuarkError::Domain("role-aware quarks need k >= 1".into()));
    }
    let b = numbers.b;
    let alive = |m: u32, o: u8| numbers.get(m, o as usize) >= k;
    // hyperedges over tuples, each listed once
    let mut edges: Vec<Vec<(u32, u8)>> = Vec::new();
    for m in 0..numbers.len() as u32 {
        if (0..b).all(|o| numbers.get(m, o) < k) {
            continue;
        }
        engine.visit_containing(m, |hit| {
            let tuples: Vec<(u32, u8)> = hit.members().iter().copied().zip(hit.orbits().iter().copied()).collect();
            if tuples.iter().all(|&(x, o)| alive(x, o)) && hit.members().iter().all(|&x| x >= m) {
                let mut t = tuples;
                t.sort_unstable();
                edges.push(t);
            }
        });
    }
    let mut orbits_of: BTreeMap<u32, BTreeSet<u8>> = BTreeMap::new();
    for e in &edges {
        for &(m, o) in e {
            orbits_of.entry(m).or_default().insert(o);
        }
    }
    let conflicted: Vec<(u32, Vec<u8>)> = orbits_of
        .iter()
        .filter(|(_, os)| os.len() > 1)
        .map(|(&m, os)| (m, os.iter().copied().collect()))
        .collect();
    let mut combos: usize = 1;
    for (_, os) in &conflicted {
        combos = combos.saturating_mul(os.len());
    }
    if combos > ROLE_CHOICE_LIMIT {
        return Err(QuarkError::TooLarge(format!(
            "{} instances play several roles at k={k}; {combos} orbit assignments exceed the limit",
            conflicted.len()
        )));
    }
    let mut found: BTreeSet<Vec<(u32, u8)>> = BTreeSet::new();
    let mut choice = vec![0usize; conflicted.len()];
    loop {
        let chosen: BTreeMap<u32, u8> = conflicted.iter().zip(&choice).map(|((m, os), &c)| (*m, os[c])).collect();
        let kept: Vec<&Vec<(u32, u8)>> =
            edges.iter().filter(|e| e.iter().all(|(m, o)| chosen.get(m).is_none_or(|c| c == o))).collect();
        for comp in core_components(&kept, k) {
            found.insert(comp);
        }
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < conflicted[i].1.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    let sets: Vec<Vec<(u32, u8)>> = found.into_iter().collect();
    let maximal = sets
        .iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && s.iter().all(|x| t.binary_search(x).is_ok())))
        .map(|s| RoleQuark { k, members: s.clone() })
        .collect();
    Ok(maximal)
}

/// Connected components of the k-core of a tuple hypergraph.
fn core_components(edges: &[&Vec<(u32, u8)>], k: u32) -> Vec<Vec<(u32, u8)>> {
    let mut live = vec![true; edges.len()];
    loop {
        let mut deg: BTreeMap<(u32, u8), u32> = BTreeMap::new();
        for (e, _) in edges.iter().zip(&live).filter(|(_, &l)| l) {
            for t in e.iter() {
                *deg.entry(*t).or_default() += 1;
            }
        }
        let mut changed = false;
        for (i, e) in edges.iter().enumerate() {
            if live[i] && e.iter().any(|t| deg[t] < k) {
                live[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<&Vec<(u32, u8)>> = edges.iter().zip(&live).filter(|(_, &l)| l).map(|(e, _)| *e).collect();
    let mut index: BTreeMap<(u32, u8), u32> = BTreeMap::new();
    for e in &kept {
        for t in e.iter() {
            let next = index.len() as u32;
            index.entry(*t).or_insert(next);
        }
    }
    let mut uf = UnionFind::new(index.len());
    for e in &kept {
        let first = uf.find(index[&e[0]]);
        for t in &e[1..] {
            let x = uf.find(index[t]);
            if x != first {
                uf.parent[x as usize] = first;
            }
        }
    }
    let mut comps: BTreeMap<u32, Vec<(u32, u8)>> = BTreeMap::new();
    for (t, &i) in &index {
        comps.entry(uf.find(i)).or_default().push(*t);
    }
    comps.into_values().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Aggregation {
    Sum,
    #[default]
    Mean,
}

/// Per-node scores over the node orbits of `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoleProfiles {
    pub orbit_names: Vec<String>,
    /// Row-major, one row of node-orbit scores per graph node.
    pub scores: Vec<f64>,
    pub dominant: Vec<usize>,
}

impl RoleProfiles {
    pub fn row(&self, v: NodeId) -> &[f64] {
        let b = self.orbit_names.len();
        &self.scores[v as usize * b..(v as usize + 1) * b]
    }
}

/// Node orbits that each endpoint of an edge takes in each edge orbit.
///
/// Returns, per edge orbit, the node orbits of the edge's source and of its
/// target. When the orbit's edges are undirected or bidirectional the two
/// endpoints cannot be told apart, and both receive both node orbits.
pub fn endpoint_orbits(engine: &MotifEngine<'_>) -> Vec<[Vec<usize>; 2]> {
    let spec = engine.spec();
    let template = spec.template();
    let node_orbits = spec.node_orbits();
    let node_orbit = |i: u8| node_orbits.orbit_of_mask(1 << i);
    let edge_orbits = spec.orbits();
    edge_orbits
        .orbit_members()
        .iter()
        .map(|positions| {
            let pos = &edge_orbits.positions()[positions[0]];
            let (i, j) = (pos[0], pos[1]);
            match template.rel(i as usize, j as usize) {
                TRel::Out(_) => [vec![node_orbit(i)], vec![node_orbit(j)]],
                TRel::In(_) => [vec![node_orbit(j)], vec![node_orbit(i)]],
                _ => {
                    let mut both = vec![node_orbit(i), node_orbit(j)];
                    both.sort_unstable();
                    both.dedup();
                    [both.clone(), both]
                }
            }
        })
        .collect()
}

/// Role profile of every node from the role-aware numbers of its incident
/// edges. Each nonzero edge-orbit number is credited to the node orbit the
/// node holds in that edge orbit; `Mean` divides by the number of credits.
pub fn node_role_profiles(
    engine: &MotifEngine<'_>,
    numbers: &RoleAwareNumbers,
    aggregation: Aggregation,
) -> Result<RoleProfiles> {
    if engine.spec().m_kind != MKind::VanillaEdge {
        return Err(QuarkError::Config("role profiles need edge role-aware numbers".into()));
    }
    let graph = engine.graph();
    let node_orbits = engine.spec().node_orbits();
    let nb = node_orbits.orbit_count();
    let endpoints = endpoint_orbits(engine);
    let mut sums = vec![0f64; graph.node_count() * nb];
    let mut counts = vec![0u32; graph.node_count() * nb];
    for (e, edge) in graph.edges().iter().enumerate() {
        for (o, ends) in endpoints.iter().enumerate() {
            let kv = numbers.get(e as u32, o);
            if kv == 0 {
                continue;
            }
            for (v, orbits) in [(edge.src, &ends[0]), (edge.dst, &ends[1])] {
                for &p in orbits {
                    sums[v as usize * nb + p] += kv as f64;
                    counts[v as usize * nb + p] += 1;
                }
            }
        }
    }
    let scores: Vec<f64> = match aggregation {
        Aggregation::Sum => sums,
        Aggregation::Mean => sums.iter().zip(&counts).map(|(&s, &c)| if c == 0 { 0.0 } else { s / c as f64 }).collect(),
    };
    let dominant = scores
        .chunks(nb.max(1))
        .map(|row| {
            let mut best = 0;
            for (i, &s) in row.iter().enumerate() {
                if s > row[best] {
                    best = i;
                }
            }
            best
        })
        .collect();
    Ok(RoleProfiles { orbit_names: node_orbits.orbit_names(), scores, dominant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motif::MotifSpec;
    use crate::peel::{quark_decompose, role_aware_decompose, PeelOptions};

    fn toy_engine(g: &crate::Graph) -> MotifEngine<'_> {
        let spec = MotifSpec::parse("acyclic", MKind::VanillaEdge).unwrap();
        MotifEngine::new(g, &spec).unwrap()
    }

    #[test]
    fn toy_forest() {
        let g = crate::synth::toy_graph();
        let engine = toy_engine(&g);
        let q = quark_decompose(&engine, &PeelOptions::default());
        let f = build_forest(&engine, &q).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.max_k(), 2);
        let top = f.quarks().iter().find(|q| q.k == 2).unwrap();
        let names: Vec<&str> = f.nodes(&engine, top.id).iter().map(|&v| g.name(v)).collect();
        assert_eq!(names, vec!["1", "3", "4", "5"]);
        assert_eq!(f.quark(top.parent.unwrap()).k, 1);
        assert_eq!(f.leaf_quarks(&engine, 0), vec![top.id]);
        assert_eq!(f.quark(f.roots()[0]).num_members, 8);
    }

    #[test]
    fn toy_role_quarks() {
        let g = crate::synth::toy_graph();
        let engine = toy_engine(&g);
        let r = role_aware_decompose(&engine, &PeelOptions::default());
        let quarks = role_aware_quarks(&engine, &r, 1).unwrap();
        assert_eq!(quarks.len(), 3);
        assert!(role_aware_quarks(&engine, &r, 2).unwrap().is_empty());
    }

    #[test]
    fn mismatched_numbers_rejected() {
        let g = crate::synth::toy_graph();
        let engine = toy_engine(&g);
        let mut q = quark_decompose(&engine, &PeelOptions::default());
        q.k.pop();
        assert!(matches!(build_forest(&engine, &q), Err(QuarkError::Consistency(_))));
    }

    #[test]
    fn isolated_node_profile_is_zero() {
        let mut b = crate::GraphBuilder::new(4);
        b.add_arc(0, 1);
        b.add_arc(0, 2);
        b.add_arc(1, 2);
        let g = b.build();
        let engine = toy_engine(&g);
        let r = role_aware_decompose(&engine, &PeelOptions::default());
        let p = node_role_profiles(&engine, &r, Aggregation::Mean).unwrap();
        assert!(p.row(3).iter().all(|&s| s == 0.0));
        assert_eq!(p.dominant[3], 0);
        // node 0 is the source of the only acyclic triangle
        assert_eq!(p.dominant[0], MotifSpec::parse("acyclic", MKind::VanillaNode).unwrap().orbits().orbit_of_mask(1));
    }
}
